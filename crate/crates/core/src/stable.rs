//! The symmetric α-stable kernel `q_s(x)` (characteristic function
//! `e^{-s|ξ|^α}`), its samplers, and geometric-stable increments obtained by
//! gamma subordination.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{euclidean_norm, ProcessSpec};
use crate::radial::{radial_inverse, StableSymbol};
use crate::real::{c, Real};
use crate::special::ln_gamma;

/// Reproducible random stream. Streams derived with [`RngStream::split`]
/// are independent and depend only on `(seed, stream id)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A fresh stream keyed by `(seed, id)`; the parent's position is untouched.
    pub fn split(&self, id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(id.wrapping_add(1));
        Self { seed: self.seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on the open interval (0, 1).
    pub fn open01(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.random();
            if u > 0.0 {
                return u;
            }
        }
    }

    pub fn exp1(&mut self) -> f64 {
        -self.open01().ln()
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn gamma(&mut self, shape: f64) -> f64 {
        Gamma::new(shape, 1.0).expect("gamma shape must be positive").sample(&mut self.rng)
    }
}

/// Parameters of the stable kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableKernelConfig<T> {
    pub alpha: T,
    pub dim: usize,
    pub quad_rel_tol: T,
    /// Real-axis truncation radius used when the inversion integral is
    /// evaluated without contour rotation.
    pub quad_max_freq: T,
}

impl<T: Real> StableKernelConfig<T> {
    pub fn new(alpha: T, dim: usize) -> Result<Self> {
        ProcessSpec::new(alpha, dim)?;
        Ok(Self { alpha, dim, quad_rel_tol: c(1e-12), quad_max_freq: c::<T>(40.0).powf(alpha.recip()) })
    }

    pub fn for_spec(spec: &ProcessSpec<T>) -> Self {
        Self::new(spec.alpha(), spec.dim()).expect("spec already validated")
    }

    pub fn with_quadrature(mut self, rel_tol: T, max_freq: T) -> Result<Self> {
        if !(rel_tol > T::zero() && max_freq > T::zero()) {
            return Err(Error::InvalidParameter("quad_rel_tol and quad_max_freq must be positive".into()));
        }
        self.quad_rel_tol = rel_tol;
        self.quad_max_freq = max_freq;
        Ok(self)
    }
}

/// Symmetric α-stable kernel evaluation and sampling.
#[derive(Debug, Clone, Copy)]
pub struct StableKernel<T> {
    cfg: StableKernelConfig<T>,
}

/// Which evaluation path produced a kernel value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelPath {
    ClosedForm,
    SmallArgumentSeries,
    LargeArgumentSeries,
    Transform,
}

impl<T: Real> StableKernel<T> {
    pub fn new(cfg: StableKernelConfig<T>) -> Self {
        Self { cfg }
    }

    pub fn config(&self) -> &StableKernelConfig<T> {
        &self.cfg
    }

    fn check_dim(&self) -> Result<()> {
        if (1..=3).contains(&self.cfg.dim) {
            Ok(())
        } else {
            Err(Error::UnsupportedDimension { dim: self.cfg.dim })
        }
    }

    /// `q_s(x) = s^{-d/α} q_1(s^{-1/α} x)`.
    pub fn density(&self, s: T, x: &[T]) -> Result<T> {
        if x.len() != self.cfg.dim {
            return Err(Error::LengthMismatch { expected: self.cfg.dim, got: x.len() });
        }
        self.density_radial(s, euclidean_norm(x))
    }

    pub fn density_radial(&self, s: T, r: T) -> Result<T> {
        if !(s > T::zero()) {
            return Err(Error::InvalidParameter(format!("time s must be positive, got {s}")));
        }
        let inv = s.powf(-self.cfg.alpha.recip());
        Ok(inv.powi(self.cfg.dim as i32) * self.unit_density(r * inv)?)
    }

    /// `q_1` at radius `r ≥ 0`.
    pub fn unit_density(&self, r: T) -> Result<T> {
        self.unit_density_with_path(r).map(|(v, _)| v)
    }

    pub fn unit_density_with_path(&self, r: T) -> Result<(T, KernelPath)> {
        self.check_dim()?;
        let (alpha, dim) = (self.cfg.alpha, self.cfg.dim);
        let r = r.abs();
        if alpha == c(2.0) || alpha == T::one() {
            return Ok((closed_form(alpha, dim, r), KernelPath::ClosedForm));
        }
        let (first, second) = if r >= T::one() {
            (large_argument_series(alpha, dim, r), small_argument_series(alpha, dim, r))
        } else {
            (small_argument_series(alpha, dim, r), large_argument_series(alpha, dim, r))
        };
        let path_of = |large_first: bool, first_hit: bool| match (large_first, first_hit) {
            (true, true) | (false, false) => KernelPath::LargeArgumentSeries,
            _ => KernelPath::SmallArgumentSeries,
        };
        if let Some(v) = first {
            return Ok((v, path_of(r >= T::one(), true)));
        }
        if let Some(v) = second {
            return Ok((v, path_of(r >= T::one(), false)));
        }
        Ok((self.transform(r)?, KernelPath::Transform))
    }

    /// `q_1(r)` through the radial inversion integral only.
    pub fn transform(&self, r: T) -> Result<T> {
        let symbol = TruncatedStable { inner: StableSymbol { alpha: self.cfg.alpha }, cutoff: self.cfg.quad_max_freq };
        radial_inverse(&symbol, self.cfg.dim, r, self.cfg.quad_rel_tol)
    }

    /// One symmetric α-stable draw (d = 1) by Chambers–Mallows–Stuck.
    pub fn sample_stable(&self, rng: &mut RngStream) -> T {
        T::lit(symmetric_stable_f64(self.cfg.alpha.as_f64(), rng))
    }

    /// One geometric-stable increment over time `t`: `G^{1/α} Z` with
    /// `G ~ Gamma(t, 1)` and `Z` symmetric α-stable in ℝ^d.
    pub fn sample_increment(&self, t: T, rng: &mut RngStream) -> Vec<T> {
        let mut out = vec![T::zero(); self.cfg.dim];
        self.sample_increment_into(t, rng, &mut out);
        out
    }

    pub fn sample_increment_into(&self, t: T, rng: &mut RngStream, out: &mut [T]) {
        let alpha = self.cfg.alpha.as_f64();
        let g = rng.gamma(t.as_f64());
        if out.len() == 1 {
            out[0] = T::lit(g.powf(1.0 / alpha) * symmetric_stable_f64(alpha, rng));
            return;
        }
        let variance_clock = if alpha == 2.0 { g } else { g.powf(2.0 / alpha) * positive_stable_f64(alpha / 2.0, rng) };
        let scale = (2.0 * variance_clock).sqrt();
        for o in out.iter_mut() {
            *o = T::lit(scale * rng.normal());
        }
    }
}

/// Stable symbol whose real-axis cutoff is taken from the configuration.
struct TruncatedStable<T> {
    inner: StableSymbol<T>,
    cutoff: T,
}

impl<T: Real> crate::radial::RadialSymbol<T> for TruncatedStable<T> {
    fn eval_real(&self, rho: T) -> T {
        self.inner.eval_real(rho)
    }
    fn eval_complex(&self, z: num_complex::Complex<T>) -> num_complex::Complex<T> {
        self.inner.eval_complex(z)
    }
    fn rotation_angle(&self) -> T {
        self.inner.rotation_angle()
    }
    fn cutoff(&self) -> Option<T> {
        Some(self.cutoff)
    }
}

/// One Gamma(shape, 1) draw.
pub fn sample_gamma<T: Real>(shape: T, rng: &mut RngStream) -> T {
    T::lit(rng.gamma(shape.as_f64()))
}

pub(crate) fn symmetric_stable_f64(alpha: f64, rng: &mut RngStream) -> f64 {
    if alpha == 2.0 {
        return std::f64::consts::SQRT_2 * rng.normal();
    }
    let v = std::f64::consts::PI * (rng.open01() - 0.5);
    if alpha == 1.0 {
        return v.tan();
    }
    let w = rng.exp1();
    (alpha * v).sin() / v.cos().powf(1.0 / alpha) * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Positive β-stable draw with Laplace transform `e^{-λ^β}`, `0 < β ≤ 1` (Kanter).
pub(crate) fn positive_stable_f64(beta: f64, rng: &mut RngStream) -> f64 {
    if beta >= 1.0 {
        return 1.0;
    }
    let u = std::f64::consts::PI * rng.open01();
    let w = rng.exp1();
    (beta * u).sin() / u.sin().powf(1.0 / beta) * (((1.0 - beta) * u).sin() / w).powf((1.0 - beta) / beta)
}

fn closed_form<T: Real>(alpha: T, dim: usize, r: T) -> T {
    let d = T::from_usize_lossy(dim);
    let pi = T::PI();
    if alpha == c(2.0) {
        (c::<T>(4.0) * pi).powf(-d / c(2.0)) * (-r * r / c(4.0)).exp()
    } else {
        let h = (d + T::one()) / c(2.0);
        (ln_gamma(h) - h * pi.ln()).exp() * (T::one() + r * r).powf(-h)
    }
}

const SERIES_MAX_TERMS: usize = 600;
const SERIES_MAX_CANCELLATION: f64 = 1e3;

/// Convergent-or-asymptotic expansion at large radius:
/// `q_1(r) = (1/π)(4π)^{-d/2} Σ_{n≥1} (-1)^{n+1} Γ(nα/2+1) Γ((d+nα)/2)/n! sin(nπα/2) (r/2)^{-d-nα}`.
/// Returns `None` unless the terms fall below machine precision relative to
/// the sum without growing first and without heavy cancellation.
pub(crate) fn large_argument_series<T: Real>(alpha: T, dim: usize, r: T) -> Option<T> {
    if !(r > T::zero()) {
        return None;
    }
    let d = T::from_usize_lossy(dim);
    let pi = T::PI();
    let half = c::<T>(0.5);
    let ln_half_r = (r * half).ln();
    let mut sum = T::zero();
    let mut max_mag = T::zero();
    let mut prev_mag = T::infinity();
    for n in 1..=SERIES_MAX_TERMS {
        let nf = T::from_usize_lossy(n);
        let na = nf * alpha;
        let ln_mag =
            ln_gamma(na * half + T::one()) + ln_gamma((d + na) * half) - ln_gamma(nf + T::one()) - (d + na) * ln_half_r;
        let mag = ln_mag.exp();
        if mag > prev_mag && n > 2 {
            return None;
        }
        let sign = if n % 2 == 1 { T::one() } else { -T::one() };
        let term = sign * (nf * pi * alpha * half).sin() * mag;
        sum = sum + term;
        max_mag = max_mag.max(term.abs());
        if n > 1 && mag <= T::epsilon() * c(0.5) * sum.abs() {
            let pref = (c::<T>(4.0) * pi).powf(-d * half) / pi;
            let value = pref * sum;
            if !(sum > T::zero()) || max_mag > c::<T>(SERIES_MAX_CANCELLATION) * sum {
                return None;
            }
            return Some(value);
        }
        prev_mag = mag;
    }
    None
}

/// Expansion in powers of `r²`:
/// `q_1(r) = (α 2^{d-1} π^{d/2})^{-1} Σ_k (-1)^k Γ((2k+d)/α)/(k! Γ(k+d/2)) (r/2)^{2k}`.
pub(crate) fn small_argument_series<T: Real>(alpha: T, dim: usize, r: T) -> Option<T> {
    let d = T::from_usize_lossy(dim);
    let pi = T::PI();
    let half = c::<T>(0.5);
    let ln_pref = -(alpha.ln() + (d - T::one()) * c::<T>(2.0).ln() + d * half * pi.ln());
    if r == T::zero() {
        return Some((ln_pref + ln_gamma(d / alpha) - ln_gamma(d * half)).exp());
    }
    let two_ln_half_r = c::<T>(2.0) * (r * half).ln();
    let mut sum = T::zero();
    let mut max_mag = T::zero();
    let mut prev_mag = T::infinity();
    // factor the k = 0 term out to keep the partial sums O(1)
    let ln_first = ln_gamma(d / alpha) - ln_gamma(d * half);
    for k in 0..SERIES_MAX_TERMS {
        let kf = T::from_usize_lossy(k);
        let ln_mag = ln_gamma((c::<T>(2.0) * kf + d) / alpha) - ln_gamma(kf + T::one()) - ln_gamma(kf + d * half)
            + kf * two_ln_half_r
            - ln_first;
        let mag = ln_mag.exp();
        if mag > prev_mag && k > 1 {
            return None;
        }
        let term = if k % 2 == 0 { mag } else { -mag };
        sum = sum + term;
        max_mag = max_mag.max(mag);
        if k > 0 && mag <= T::epsilon() * c(0.5) * sum.abs() {
            if !(sum > T::zero()) || max_mag > c::<T>(SERIES_MAX_CANCELLATION) * sum {
                return None;
            }
            return Some((ln_pref + ln_first).exp() * sum);
        }
        prev_mag = mag;
    }
    None
}

/// Coefficients `c_n` with `q_1(r) ~ Σ c_n r^{-d-nα}` (first `count` terms).
pub(crate) fn large_argument_coefficients<T: Real>(alpha: T, dim: usize, count: usize) -> Vec<T> {
    let d = T::from_usize_lossy(dim);
    let pi = T::PI();
    let half = c::<T>(0.5);
    let pref = (c::<T>(4.0) * pi).powf(-d * half) / pi;
    (1..=count)
        .map(|n| {
            let nf = T::from_usize_lossy(n);
            let na = nf * alpha;
            let sign = if n % 2 == 1 { T::one() } else { -T::one() };
            let ln_mag = ln_gamma(na * half + T::one()) + ln_gamma((d + na) * half) - ln_gamma(nf + T::one())
                + (d + na) * c::<T>(2.0).ln();
            pref * sign * (nf * pi * alpha * half).sin() * ln_mag.exp()
        })
        .collect()
}
