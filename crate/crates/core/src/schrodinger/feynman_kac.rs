use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SchrodingerProblem;
use crate::error::{Error, Result};
use crate::process::ProcessSpec;
use crate::real::{c, Real};
use crate::stable::{RngStream, StableKernel, StableKernelConfig};

const PATH_BATCH: usize = 4096;

/// Monte Carlo mean of `e^{-A_t} f(X_t)` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeynmanKacEstimate<T> {
    pub mean: T,
    pub std_error: T,
    pub n_paths: usize,
    pub steps: usize,
    pub seed: u64,
}

/// `E_{x0}[e^{-A_t} f(X_t)]` with `A_t ≈ dt Σ_j ρ(X_{j dt})` (left endpoints)
/// and exact process increments over each step.
#[allow(clippy::too_many_arguments)]
pub fn feynman_kac_with_density<T, R, F>(
    spec: &ProcessSpec<T>,
    rho: R,
    f: F,
    x0: T,
    t: T,
    n_paths: usize,
    dt: T,
    rng: &RngStream,
) -> Result<FeynmanKacEstimate<T>>
where
    T: Real,
    R: Fn(T) -> T + Sync,
    F: Fn(T) -> T + Sync,
{
    if spec.dim() != 1 {
        return Err(Error::UnsupportedDimension { dim: spec.dim() });
    }
    if !(t > T::zero()) || !(dt > T::zero()) || dt > t {
        return Err(Error::InvalidParameter(format!("need 0 < dt <= t, got dt = {dt}, t = {t}")));
    }
    let steps_f = (t / dt).round();
    if ((steps_f * dt - t) / t).abs() > c(1e-9) {
        return Err(Error::InvalidParameter(format!("t/dt must be an integer, got {}", t / dt)));
    }
    if n_paths < 2 {
        return Err(Error::InvalidParameter("need at least two paths".into()));
    }
    let steps = steps_f.as_f64() as usize;
    let kernel = StableKernel::new(StableKernelConfig::for_spec(spec));
    let batches = n_paths.div_ceil(PATH_BATCH);
    let sums: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut stream = rng.split(b as u64);
            let count = PATH_BATCH.min(n_paths - b * PATH_BATCH);
            let mut inc = [T::zero()];
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                let mut x = x0;
                let mut a = T::zero();
                for _ in 0..steps {
                    a = a + dt * rho(x);
                    kernel.sample_increment_into(dt, &mut stream, &mut inc);
                    x = x + inc[0];
                }
                let y = ((-a).exp() * f(x)).as_f64();
                s1 += y;
                s2 += y * y;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = sums.iter().fold((0.0, 0.0), |acc, s| (acc.0 + s.0, acc.1 + s.1));
    let n = n_paths as f64;
    let mean = s1 / n;
    let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(FeynmanKacEstimate { mean: T::lit(mean), std_error: T::lit((var / n).sqrt()), n_paths, steps, seed: rng.seed() })
}

/// [`feynman_kac_with_density`] with `ρ⁺` read off the grid cells of `μ⁺`
/// (zero outside the grid window).
pub fn feynman_kac_estimate<T, F>(
    problem: &SchrodingerProblem<T>,
    f: F,
    x0: T,
    t: T,
    n_paths: usize,
    dt: T,
    rng: &RngStream,
) -> Result<FeynmanKacEstimate<T>>
where
    T: Real,
    F: Fn(T) -> T + Sync,
{
    let domain = *problem.domain();
    let rho = problem.mu_plus().densities(&domain);
    let l = domain.half_width();
    let rho_at = |x: T| if x.abs() < l { rho[domain.nearest_node(x)] } else { T::zero() };
    feynman_kac_with_density(problem.spec(), rho_at, f, x0, t, n_paths, dt, rng)
}
