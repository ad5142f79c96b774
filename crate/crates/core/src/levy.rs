//! Lévy density `j`, the radial k-function `k(r) = r^d j(rθ)` and the
//! monotonicity certificate for self-decomposability.
//!
//! `k(r) = α ∫₀^∞ u^{d-1} q_1(u) e^{-(r/u)^α} du` is evaluated on a fixed
//! table of nodes in `log u`, so every term is a decreasing function of `r`
//! and the computed `k` is monotone by construction. The stretch `u > U` is
//! integrated in closed form from the large-argument expansion of `q_1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{euclidean_norm, ProcessSpec};
use crate::quadrature::{gauss_legendre, integrate, integrate_breaks, QuadConfig};
use crate::real::{c, Real};
use crate::special::{gamma, lower_incomplete_gamma_scaled};
use crate::stable::{large_argument_coefficients, RngStream, StableKernel, StableKernelConfig};

const LN_U_MIN: f64 = -46.051_701_859_880_914; // ln 1e-20
const LN_U_FINE_LO: f64 = -4.605_170_185_988_091; // ln 1e-2
const LN_U_FINE_HI: f64 = 6.907_755_278_982_137; // ln 1e3
const LN_U_MAX: f64 = 13.815_510_557_964_274; // ln 1e6
const GL_POINTS: usize = 16;
const TAIL_TERMS: usize = 60;

/// Which end of the line an asymptotic statement refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    SmallX,
    LargeX,
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "small" | "smallx" | "small-x" => Ok(Regime::SmallX),
            "large" | "largex" | "large-x" => Ok(Regime::LargeX),
            other => Err(Error::Parse(format!("unknown regime '{other}' (expected small or large)"))),
        }
    }
}

/// Sampled `t·k_θ(r)` along one direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KFunctionTable<T> {
    pub spec: ProcessSpec<T>,
    pub t: T,
    pub theta: Vec<T>,
    pub r_grid: Vec<T>,
    pub values: Vec<T>,
    pub monotone_certificate: bool,
}

impl<T: Real> KFunctionTable<T> {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,k_value\n");
        for (r, v) in self.r_grid.iter().zip(&self.values) {
            out.push_str(&format!("{r},{v}\n"));
        }
        out
    }
}

/// Result of a certificate run over several directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfDecomposability<T> {
    pub tables: Vec<KFunctionTable<T>>,
    pub certified: bool,
}

/// Limit of `j(x)/profile(x)` against the printed and the independently
/// computed constants. `converged` is false when the sequence had not
/// settled to 2% over its last step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport<T> {
    pub spec: ProcessSpec<T>,
    pub regime: Regime,
    pub printed_constant: T,
    pub oracle_constant: T,
    pub empirical_limit: T,
    pub relative_gap_printed: T,
    pub relative_gap_oracle: T,
    pub converged: bool,
}

impl<T: Real> AsymptoticReport<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Tabulated k-function of a geometric stable process.
#[derive(Debug, Clone)]
pub struct LevyKernel<T> {
    spec: ProcessSpec<T>,
    stable: StableKernel<T>,
    ln_nodes: Vec<T>,
    weights: Vec<T>,
    // c_n with q_1(u) ~ Σ c_n u^{-d-nα}, and c_n U^{-nα}
    coefs: Vec<T>,
    tail: Vec<T>,
    upper: T,
}

impl<T: Real> LevyKernel<T> {
    pub fn new(spec: ProcessSpec<T>) -> Result<Self> {
        if !(1..=3).contains(&spec.dim()) {
            return Err(Error::UnsupportedDimension { dim: spec.dim() });
        }
        let alpha = spec.alpha();
        let d = spec.dim_real();
        let stable = StableKernel::new(StableKernelConfig::for_spec(&spec));
        let (gx, gw) = gauss_legendre::<T>(GL_POINTS);
        let mut ln_nodes = Vec::new();
        let mut weights = Vec::new();
        for (lo, hi, width) in
            [(LN_U_MIN, LN_U_FINE_LO, 1.0), (LN_U_FINE_LO, LN_U_FINE_HI, 0.25), (LN_U_FINE_HI, LN_U_MAX, 1.0)]
        {
            let panels = ((hi - lo) / width).ceil() as usize;
            let h = (hi - lo) / panels as f64;
            for p in 0..panels {
                let mid = c::<T>(lo + (p as f64 + 0.5) * h);
                let half = c::<T>(0.5 * h);
                for (x, w) in gx.iter().zip(&gw) {
                    let v = mid + half * *x;
                    let u = v.exp();
                    let q = stable.unit_density(u)?.max(T::zero());
                    ln_nodes.push(v);
                    weights.push(*w * half * alpha * (d * v).exp() * q);
                }
            }
        }
        let upper = c::<T>(LN_U_MAX).exp();
        let (coefs, tail) =
            if alpha < c(2.0) { tail_terms(alpha, spec.dim(), upper) } else { (Vec::new(), Vec::new()) };
        Ok(Self { spec, stable, ln_nodes, weights, coefs, tail, upper })
    }

    pub fn spec(&self) -> &ProcessSpec<T> {
        &self.spec
    }

    pub fn stable_kernel(&self) -> &StableKernel<T> {
        &self.stable
    }

    /// `k(r)` for the isotropic process (independent of direction).
    pub fn k_radial(&self, r: T) -> Result<T> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("radius must be positive and finite, got {r}")));
        }
        let alpha = self.spec.alpha();
        let ln_r = r.ln();
        let cap = c::<T>(745.0);
        let mut sum = T::zero();
        for (v, w) in self.ln_nodes.iter().zip(&self.weights) {
            let z = alpha * (ln_r - *v);
            if z > c(6.7) {
                continue;
            }
            let e = z.exp();
            if e < cap {
                sum = sum + *w * (-e).exp();
            }
        }
        Ok(sum + self.tail_value(r))
    }

    fn tail_value(&self, r: T) -> T {
        if self.tail.is_empty() {
            return T::zero();
        }
        let w = (r / self.upper).powf(self.spec.alpha());
        let mut sum = T::zero();
        for (i, a) in self.tail.iter().enumerate() {
            let term = *a * lower_incomplete_gamma_scaled(i + 1, w);
            sum = sum + term;
            if term.abs() <= T::epsilon() * sum.abs() {
                break;
            }
        }
        sum
    }

    /// `k_θ(r)`; `theta` must be a unit vector of the process dimension.
    pub fn k_function(&self, theta: &[T], r: T) -> Result<T> {
        check_unit(theta, self.spec.dim())?;
        self.k_radial(r)
    }

    /// `j(x)`, singular at the origin.
    pub fn density(&self, x: &[T]) -> Result<T> {
        if x.len() != self.spec.dim() {
            return Err(Error::LengthMismatch { expected: self.spec.dim(), got: x.len() });
        }
        self.density_radial(euclidean_norm(x))
    }

    pub fn density_radial(&self, r: T) -> Result<T> {
        let r = r.abs();
        if r == T::zero() {
            return Err(Error::SingularPoint);
        }
        Ok(self.k_radial(r)? / r.powi(self.spec.dim() as i32))
    }

    /// `j(r)` from the time integral `∫ q_s(r) e^{-s}/s ds`, taken in
    /// `log s` with adaptive panels. Slower than [`Self::density_radial`]
    /// and used as an independent check of it.
    pub fn density_direct(&self, r: T) -> Result<T> {
        let r = r.abs();
        if r == T::zero() {
            return Err(Error::SingularPoint);
        }
        let alpha = self.spec.alpha();
        let d = self.spec.dim_real();
        let lo = (alpha * r.ln()).min(T::zero()) - c(40.0);
        let hi = c::<T>(60.0).ln();
        let step = c::<T>(2.0);
        let mut breaks = vec![lo];
        while *breaks.last().unwrap() + step < hi {
            let next = *breaks.last().unwrap() + step;
            breaks.push(next);
        }
        breaks.push(hi);
        let mut failure = None;
        let res = integrate_breaks(
            |v: T| {
                let s = v.exp();
                let ln_scale = -v / alpha;
                if !self.coefs.is_empty() && ln_scale + r.ln() > self.upper.ln() {
                    return self.far_integrand(r, v);
                }
                match self.stable.unit_density(ln_scale.exp() * r) {
                    Ok(q) => (d * ln_scale - s).exp() * q.max(T::zero()),
                    Err(e) => {
                        failure.get_or_insert(e);
                        T::zero()
                    }
                }
            },
            &breaks,
            QuadConfig::new(c(1e-11)).with_max_evals(200_000),
        );
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(res.value)
    }

    // s^{-d/α} q_1(s^{-1/α} r) e^{-s} = Σ c_n r^{-d-nα} s^n e^{-s} once the
    // argument of q_1 is past U; avoids overflow of s^{-d/α} for small α
    fn far_integrand(&self, r: T, ln_s: T) -> T {
        let alpha = self.spec.alpha();
        let d = self.spec.dim_real();
        let ln_r = r.ln();
        let s = ln_s.exp();
        let mut sum = T::zero();
        for (i, cn) in self.coefs.iter().enumerate() {
            let n = T::from_usize_lossy(i + 1);
            let term = *cn * ((n * ln_s) - (d + n * alpha) * ln_r - s).exp();
            sum = sum + term;
            if term.abs() <= T::epsilon() * sum.abs() {
                break;
            }
        }
        sum.max(T::zero())
    }

    /// `r^d j(r)` through [`Self::density_direct`].
    pub fn k_direct(&self, r: T) -> Result<T> {
        Ok(r.abs().powi(self.spec.dim() as i32) * self.density_direct(r)?)
    }

    /// `J({r_in ≤ |x| ≤ r_out})`, by the polar form and by a direct radial
    /// integral of `j`; the two must agree to `1e-6` relative.
    pub fn polar_mass(&self, r_inner: T, r_outer: T) -> Result<T> {
        if !(r_inner > T::zero() && r_outer > r_inner && r_outer.is_finite()) {
            return Err(Error::InvalidParameter(format!("need 0 < r_inner < r_outer, got [{r_inner}, {r_outer}]")));
        }
        let surface = sphere_area::<T>(self.spec.dim());
        let cfg = QuadConfig::new(c(1e-10)).with_max_evals(50_000);
        let mut failure = None;
        let polar = integrate(
            |v: T| match self.k_radial(v.exp()) {
                Ok(k) => k,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            },
            r_inner.ln(),
            r_outer.ln(),
            cfg,
        );
        let dim = self.spec.dim() as i32;
        let direct = integrate(
            |v: T| {
                let r = v.exp();
                match self.density_direct(r) {
                    Ok(j) => j * r.powi(dim),
                    Err(e) => {
                        failure.get_or_insert(e);
                        T::zero()
                    }
                }
            },
            r_inner.ln(),
            r_outer.ln(),
            QuadConfig::new(c(1e-9)).with_max_evals(2_000),
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let a = surface * polar.value;
        let b = surface * direct.value;
        let gap = (a / b - T::one()).abs();
        if !(gap < c(1e-6)) {
            return Err(Error::InternalConsistency { what: "polar and direct Lévy mass".into(), gap: gap.as_f64() });
        }
        Ok(a)
    }

    /// Tabulates `t·k_θ(r)` over `r_grid` for every direction in `thetas`.
    pub fn self_decomposability(&self, t: T, r_grid: &[T], thetas: &[Vec<T>]) -> Result<SelfDecomposability<T>> {
        if !(t > T::zero()) {
            return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
        }
        if r_grid.is_empty() || !(r_grid[0] > T::zero()) || r_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("r grid must be positive and strictly increasing".into()));
        }
        let mut tables = Vec::with_capacity(thetas.len());
        for theta in thetas {
            check_unit(theta, self.spec.dim())?;
            let values = r_grid.iter().map(|&r| Ok(t * self.k_radial(r)?)).collect::<Result<Vec<T>>>()?;
            let tol = c::<T>(1e-12);
            let monotone_certificate = values.windows(2).all(|w| w[0] >= w[1] - tol * w[0]);
            tables.push(KFunctionTable {
                spec: self.spec,
                t,
                theta: theta.clone(),
                r_grid: r_grid.to_vec(),
                values,
                monotone_certificate,
            });
        }
        let certified = tables.iter().all(|t| t.monotone_certificate);
        Ok(SelfDecomposability { tables, certified })
    }

    pub fn asymptotic_report(&self, regime: Regime) -> Result<AsymptoticReport<T>> {
        let alpha = self.spec.alpha();
        let dim = self.spec.dim();
        let d = self.spec.dim_real();
        let exponential = regime == Regime::LargeX && alpha == c(2.0);
        // ratio j(x)/profile(x)
        let ratio = |x: T, j: T| -> T {
            match regime {
                Regime::SmallX => j * x.powi(dim as i32),
                Regime::LargeX if exponential => j * x.powf((d + T::one()) * c(0.5)) * x.exp(),
                Regime::LargeX => j * x.powf(d + alpha),
            }
        };
        let xs: Vec<f64> = match regime {
            Regime::SmallX => (2..=8).map(|k| 10f64.powi(-k)).collect(),
            Regime::LargeX if exponential => vec![5.0, 10.0, 20.0, 40.0, 80.0],
            Regime::LargeX => (2..=8).map(|k| 10f64.powf(0.5 * k as f64)).collect(),
        };
        let mut seq = Vec::with_capacity(xs.len());
        for x in xs {
            let x = c::<T>(x);
            seq.push(ratio(x, self.density_radial(x)?));
        }
        let last = seq[seq.len() - 1];
        let prev = seq[seq.len() - 2];
        let converged = last > T::zero() && (last / prev - T::one()).abs() <= c(0.02);
        let oracle_x = match regime {
            Regime::SmallX => c::<T>(1e-3),
            Regime::LargeX => c::<T>(100.0),
        };
        let oracle_constant = ratio(oracle_x, self.density_direct(oracle_x)?);
        let printed_constant = printed_constant(alpha, dim, regime);
        Ok(AsymptoticReport {
            spec: self.spec,
            regime,
            printed_constant,
            oracle_constant,
            empirical_limit: last,
            relative_gap_printed: (last / printed_constant - T::one()).abs(),
            relative_gap_oracle: (last / oracle_constant - T::one()).abs(),
            converged,
        })
    }
}

fn tail_terms<T: Real>(alpha: T, dim: usize, upper: T) -> (Vec<T>, Vec<T>) {
    let coefs = large_argument_coefficients(alpha, dim, TAIL_TERMS);
    let mut out = Vec::new();
    let mut prev = T::infinity();
    for (i, &cn) in coefs.iter().enumerate() {
        let n = T::from_usize_lossy(i + 1);
        let a = cn * (-n * alpha * upper.ln()).exp();
        let mag = a.abs() / n;
        if mag > prev {
            break;
        }
        out.push(a);
        if mag <= T::epsilon() * out[0].abs() {
            break;
        }
        // sin(nπα/2) can vanish; compare magnitudes only on nonzero terms
        if mag > T::zero() {
            prev = mag;
        }
    }
    let kept = coefs[..out.len()].to_vec();
    (kept, out)
}

fn check_unit<T: Real>(theta: &[T], dim: usize) -> Result<()> {
    if theta.len() != dim {
        return Err(Error::LengthMismatch { expected: dim, got: theta.len() });
    }
    let norm = euclidean_norm(theta);
    if !((norm - T::one()).abs() <= c(1e-6)) {
        return Err(Error::InvalidParameter(format!("direction must be a unit vector, |θ| = {norm}")));
    }
    Ok(())
}

/// Surface area of the unit sphere in ℝ^d.
pub fn sphere_area<T: Real>(dim: usize) -> T {
    let half_d = T::from_usize_lossy(dim) * c(0.5);
    c::<T>(2.0) * T::PI().powf(half_d) / gamma(half_d)
}

/// The constants as printed in the literature statement of the asymptotics.
pub fn printed_constant<T: Real>(alpha: T, dim: usize, regime: Regime) -> T {
    let d = T::from_usize_lossy(dim);
    let half = c::<T>(0.5);
    let pi = T::PI();
    match regime {
        Regime::SmallX => alpha * gamma(d * half) * half,
        Regime::LargeX if alpha == c(2.0) => c::<T>(2.0).powf(-d * half) * pi.powf(-(d - T::one()) * half),
        Regime::LargeX => {
            alpha / (c::<T>(2.0).powf(alpha + T::one()) * pi.powf(d * half)) * gamma((d + alpha) * half)
                / gamma(T::one() - alpha * half)
        }
    }
}

/// The constants implied by the subordination formula for `j`.
pub fn limit_constant<T: Real>(alpha: T, dim: usize, regime: Regime) -> T {
    let d = T::from_usize_lossy(dim);
    let half = c::<T>(0.5);
    let pi = T::PI();
    match regime {
        Regime::SmallX => alpha * gamma(d * half) * half * pi.powf(-d * half),
        Regime::LargeX if alpha == c(2.0) => (c::<T>(2.0) * pi).powf(-(d - T::one()) * half),
        Regime::LargeX => {
            alpha * c::<T>(2.0).powf(alpha - T::one()) * gamma((d + alpha) * half)
                / (pi.powf(d * half) * gamma(T::one() - alpha * half))
        }
    }
}

/// Coordinate axes (both signs in d = 1) plus, for `d ≥ 2`, eight
/// pseudo-random unit vectors drawn from `seed`.
pub fn default_directions<T: Real>(dim: usize, seed: u64) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    if dim == 1 {
        out.push(vec![T::one()]);
        out.push(vec![-T::one()]);
        return out;
    }
    for i in 0..dim {
        let mut e = vec![T::zero(); dim];
        e[i] = T::one();
        out.push(e);
    }
    let mut rng = RngStream::new(seed);
    for _ in 0..8 {
        let v: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        out.push(v.iter().map(|x| T::lit(x / n)).collect());
    }
    out
}

/// `j(x)` for a single point; builds a fresh [`LevyKernel`].
pub fn levy_density<T: Real>(spec: &ProcessSpec<T>, x: &[T]) -> Result<T> {
    LevyKernel::new(*spec)?.density(x)
}

pub fn k_function<T: Real>(spec: &ProcessSpec<T>, theta: &[T], r: T) -> Result<T> {
    LevyKernel::new(*spec)?.k_function(theta, r)
}

pub fn polar_levy_mass<T: Real>(spec: &ProcessSpec<T>, r_inner: T, r_outer: T) -> Result<T> {
    LevyKernel::new(*spec)?.polar_mass(r_inner, r_outer)
}

pub fn verify_selfdecomposable<T: Real>(
    spec: &ProcessSpec<T>,
    t: T,
    r_grid: &[T],
    thetas: &[Vec<T>],
) -> Result<SelfDecomposability<T>> {
    LevyKernel::new(*spec)?.self_decomposability(t, r_grid, thetas)
}

pub fn asymptotic_report<T: Real>(spec: &ProcessSpec<T>, regime: Regime) -> Result<AsymptoticReport<T>> {
    LevyKernel::new(*spec)?.asymptotic_report(regime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn kernel(alpha: f64, dim: usize) -> LevyKernel<f64> {
        LevyKernel::new(ProcessSpec::new(alpha, dim).unwrap()).unwrap()
    }

    #[test]
    fn gaussian_case_matches_closed_form() {
        let k = kernel(2.0, 1);
        for i in 0..=60 {
            let x = 0.1 + 7.9 * i as f64 / 60.0;
            assert_relative_eq!(k.density(&[x]).unwrap(), (-x).exp() / x, max_relative = 1e-8);
            assert_relative_eq!(k.density(&[-x]).unwrap(), (-x).exp() / x, max_relative = 1e-8);
        }
    }

    #[test]
    fn gaussian_case_three_dimensions() {
        // j = 2(4π)^{-3/2}(r/2)^{-3/2} K_{3/2}(r), K_{3/2}(r) = √(π/2r) e^{-r}(1 + 1/r)
        let k = kernel(2.0, 3);
        for &r in &[0.05, 0.5, 2.0, 9.0] {
            let k32 = (std::f64::consts::PI / (2.0 * r)).sqrt() * (-r).exp() * (1.0 + 1.0 / r);
            let exact = 2.0 * (4.0 * std::f64::consts::PI).powf(-1.5) * (r / 2.0).powf(-1.5) * k32;
            assert_relative_eq!(k.density_radial(r).unwrap(), exact, max_relative = 1e-8);
        }
    }

    #[test]
    fn k_at_zero_is_half_alpha() {
        // k(0) - k(r) decays like r^min(α,1), so small α needs a smaller radius
        for &(alpha, r) in &[(0.3, 1e-12), (1.0, 1e-4), (1.5, 1e-4), (2.0, 1e-4)] {
            let k = kernel(alpha, 1);
            let v = k.k_function(&[1.0], r).unwrap();
            assert!((v / (alpha / 2.0) - 1.0).abs() < 0.01, "α={alpha}: {v}");
        }
    }

    #[test]
    fn table_agrees_with_time_integral() {
        for &(alpha, dim) in &[(0.6, 1), (1.0, 1), (1.5, 2), (1.8, 3), (2.0, 2)] {
            let k = kernel(alpha, dim);
            for &r in &[0.01, 0.3, 1.0, 4.0, 10.0] {
                let a = k.k_radial(r).unwrap();
                let b = k.k_direct(r).unwrap();
                assert!((a / b - 1.0).abs() < 1e-6, "α={alpha} d={dim} r={r}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn origin_is_singular() {
        assert!(matches!(kernel(1.5, 2).density(&[0.0, 0.0]), Err(Error::SingularPoint)));
    }

    #[test]
    fn polar_mass_in_gaussian_case() {
        // 2∫₁² e^{-r}/r dr = 2(E₁(1) − E₁(2))
        let m = kernel(2.0, 1).polar_mass(1.0, 2.0).unwrap();
        assert_relative_eq!(m, 0.340_966_847_374_918_8, max_relative = 1e-9);
    }

    #[test]
    fn polar_mass_is_additive() {
        let k = kernel(1.3, 2);
        let ab = k.polar_mass(0.2, 1.0).unwrap();
        let bc = k.polar_mass(1.0, 6.0).unwrap();
        let ac = k.polar_mass(0.2, 6.0).unwrap();
        assert_relative_eq!(ab + bc, ac, max_relative = 1e-9);
    }

    #[test]
    fn large_x_cauchy_constant() {
        let k = kernel(1.0, 1);
        let v = 2500.0 * k.density(&[50.0]).unwrap();
        assert!((v * std::f64::consts::PI - 1.0).abs() < 0.02);
    }

    #[test]
    fn report_separates_printed_and_limit_constants() {
        let rep = kernel(2.0, 1).asymptotic_report(Regime::SmallX).unwrap();
        assert!(rep.converged);
        assert_relative_eq!(rep.empirical_limit, 1.0, max_relative = 1e-3);
        assert_relative_eq!(rep.printed_constant, std::f64::consts::PI.sqrt(), max_relative = 1e-12);
        assert!(rep.relative_gap_printed > 0.4);
        assert!(rep.relative_gap_oracle < 0.02);
        let rep = kernel(2.0, 1).asymptotic_report(Regime::LargeX).unwrap();
        assert_relative_eq!(rep.empirical_limit, 1.0, max_relative = 1e-6);
        assert_relative_eq!(rep.printed_constant, std::f64::consts::FRAC_1_SQRT_2, max_relative = 1e-12);
        let json = rep.to_json();
        for key in ["printed_constant", "oracle_constant", "empirical_limit", "relative_gap_oracle"] {
            assert!(json.contains(key));
        }
    }

    #[test]
    fn limit_constants_match_reports() {
        for &(alpha, dim) in &[(1.0, 1), (1.5, 1), (1.5, 2), (0.8, 3)] {
            let k = kernel(alpha, dim);
            let small = k.asymptotic_report(Regime::SmallX).unwrap();
            assert!((small.empirical_limit / limit_constant(alpha, dim, Regime::SmallX) - 1.0).abs() < 0.02);
            let large = k.asymptotic_report(Regime::LargeX).unwrap();
            assert!(
                (large.oracle_constant / limit_constant(alpha, dim, Regime::LargeX) - 1.0).abs() < 0.02,
                "α={alpha} d={dim}: {large:?}"
            );
        }
    }

    #[test]
    fn certificates_for_examples() {
        let grid: Vec<f64> = (0..40).map(|i| 10f64.powf(-3.0 + 0.1 * i as f64)).collect();
        let spec = ProcessSpec::new(1.5, 1).unwrap();
        let res = verify_selfdecomposable(&spec, 1.0, &grid, &default_directions(1, 7)).unwrap();
        assert!(res.certified);
        let spec = ProcessSpec::new(2.0, 3).unwrap();
        let res = verify_selfdecomposable(&spec, 0.1, &grid, &default_directions(3, 7)).unwrap();
        assert!(res.certified);
        assert_eq!(res.tables.len(), 11);
        assert!(res.tables[0].to_csv().starts_with("r,k_value\n"));
    }

    #[test]
    fn isotropy_in_the_plane() {
        let grid = [0.1, 0.5, 2.0];
        let spec = ProcessSpec::new(1.2, 2).unwrap();
        let res = verify_selfdecomposable(&spec, 1.0, &grid, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(res.tables[0].values, res.tables[1].values);
        let k = kernel(1.2, 2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(k.density(&[s, s]).unwrap(), k.density(&[1.0, 0.0]).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn rejects_non_unit_direction() {
        assert!(kernel(1.0, 2).k_function(&[1.0, 1.0], 1.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn k_is_nonincreasing(alpha in 0.1f64..=2.0, dim in 1usize..=3, r1 in 1e-3f64..50.0, f in 1.0f64..20.0) {
            let k = kernel(alpha, dim);
            let r2 = r1 * f;
            let (a, b) = (k.k_radial(r1).unwrap(), k.k_radial(r2).unwrap());
            prop_assert!(a >= b - 1e-12 * a, "{a} < {b}");
            prop_assert!(b > 0.0);
        }
    }
}
