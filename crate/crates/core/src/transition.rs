//! Transition density `p_t` of the geometric stable process: Fourier
//! inversion where `(1+|ξ|^α)^{-t}` is integrable, gamma-subordinated Monte
//! Carlo everywhere.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{euclidean_norm, ProcessSpec};
use crate::quadrature::{gauss_legendre, integrate_breaks, integrate_to_infinity, QuadConfig};
use crate::radial::{radial_inverse, GeometricSymbol};
use crate::real::{c, Real};
use crate::stable::{RngStream, StableKernel, StableKernelConfig};

const INVERSION_REL_TOL: f64 = 1e-10;
const MC_BATCH: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityMethod {
    Inversion,
    MonteCarlo,
}

/// Density values on a list of points (a grid on the line when `d = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityTable<T> {
    pub spec: ProcessSpec<T>,
    pub t: T,
    pub method: DensityMethod,
    pub x_grid: Vec<Vec<T>>,
    pub values: Vec<T>,
    pub n_samples: Option<usize>,
    pub bandwidth: Option<T>,
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct TableHeader<'a, T> {
    spec: &'a ProcessSpec<T>,
    t: T,
    method: DensityMethod,
    n_samples: Option<usize>,
    bandwidth: Option<T>,
    seed: Option<u64>,
}

impl<T: Real> DensityTable<T> {
    /// Inversion table on the given points.
    pub fn inversion(spec: &ProcessSpec<T>, t: T, points: Vec<Vec<T>>) -> Result<Self> {
        Self::inversion_with_tol(spec, t, points, c(INVERSION_REL_TOL))
    }

    pub fn inversion_with_tol(spec: &ProcessSpec<T>, t: T, points: Vec<Vec<T>>, rel_tol: T) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != spec.dim()) {
            return Err(Error::LengthMismatch { expected: spec.dim(), got: p.len() });
        }
        let values = points
            .par_iter()
            .map(|x| density_inversion_radial_tol(spec, t, euclidean_norm(x), rel_tol))
            .collect::<Result<Vec<T>>>()?;
        Ok(Self {
            spec: *spec,
            t,
            method: DensityMethod::Inversion,
            x_grid: points,
            values,
            n_samples: None,
            bandwidth: None,
            seed: None,
        })
    }

    /// Trapezoid mass over the grid; `d = 1` only.
    pub fn trapezoid_mass(&self) -> Result<T> {
        if self.spec.dim() != 1 {
            return Err(Error::UnsupportedDimension { dim: self.spec.dim() });
        }
        let mut m = T::zero();
        for i in 1..self.values.len() {
            let dx = self.x_grid[i][0] - self.x_grid[i - 1][0];
            m = m + dx * (self.values[i] + self.values[i - 1]) * c(0.5);
        }
        Ok(m)
    }

    pub fn header_json(&self) -> String {
        let h = TableHeader {
            spec: &self.spec,
            t: self.t,
            method: self.method,
            n_samples: self.n_samples,
            bandwidth: self.bandwidth,
            seed: self.seed,
        };
        serde_json::to_string_pretty(&h).expect("header serializes")
    }

    /// Columns `x, p` (or `x1, .., xd, p`).
    pub fn to_csv(&self) -> String {
        let dim = self.spec.dim();
        let mut out = if dim == 1 {
            String::from("x,p\n")
        } else {
            let cols: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
            format!("{},p\n", cols.join(","))
        };
        for (x, p) in self.x_grid.iter().zip(&self.values) {
            for xi in x {
                out.push_str(&format!("{xi},"));
            }
            out.push_str(&format!("{p}\n"));
        }
        out
    }
}

/// `p_t(x)` by Fourier inversion. Requires `t > d/α`.
pub fn density_inversion<T: Real>(spec: &ProcessSpec<T>, t: T, x: &[T]) -> Result<T> {
    if x.len() != spec.dim() {
        return Err(Error::LengthMismatch { expected: spec.dim(), got: x.len() });
    }
    density_inversion_radial(spec, t, euclidean_norm(x))
}

pub fn density_inversion_radial<T: Real>(spec: &ProcessSpec<T>, t: T, r: T) -> Result<T> {
    density_inversion_radial_tol(spec, t, r, c(INVERSION_REL_TOL))
}

/// [`density_inversion_radial`] at a caller-chosen relative quadrature tolerance.
pub fn density_inversion_radial_tol<T: Real>(spec: &ProcessSpec<T>, t: T, r: T, rel_tol: T) -> Result<T> {
    if !(rel_tol > T::zero() && rel_tol < T::one()) {
        return Err(Error::InvalidParameter(format!("quad_rel_tol must lie in (0, 1), got {rel_tol}")));
    }
    if !(t > T::zero()) {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    if !spec.inversion_integrable(t) {
        return Err(Error::InversionNotIntegrable { t: t.as_f64(), threshold: spec.inversion_threshold().as_f64() });
    }
    let symbol = GeometricSymbol { alpha: spec.alpha(), t };
    // rounding can leave far-tail values a hair below zero
    Ok(radial_inverse(&symbol, spec.dim(), r.abs(), rel_tol)?.max(T::zero()))
}

/// `P(X_t ≤ x)` in `d = 1` by adaptive quadrature of the inverted density.
pub fn cdf_numeric<T: Real>(spec: &ProcessSpec<T>, t: T, x: T) -> Result<T> {
    if spec.dim() != 1 {
        return Err(Error::UnsupportedDimension { dim: spec.dim() });
    }
    // surface the error contract before integrating
    density_inversion_radial(spec, t, T::zero())?;
    let a = x.abs();
    if a == T::zero() {
        return Ok(c(0.5));
    }
    let mut failure = None;
    let mut breaks = vec![T::zero()];
    let mut b = c::<T>(0.5);
    while b < a {
        breaks.push(b);
        b = b * c(2.0);
    }
    breaks.push(a);
    let res = integrate_breaks(
        |y: T| match density_inversion_radial(spec, t, y) {
            Ok(p) => p,
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        },
        &breaks,
        QuadConfig::new(c(1e-9)),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let half = c::<T>(0.5);
    let v = if x > T::zero() { half + res.value } else { half - res.value };
    Ok(v.max(T::zero()).min(T::one()))
}

/// Tabulated `d = 1` CDF from the inverted density: cumulative Gauss–Legendre
/// sums on a grid, cubic Hermite interpolation in between, and a power (or
/// exponential when `α = 2`) tail past the last node.
#[derive(Debug, Clone)]
pub struct CdfTable<T> {
    alpha: T,
    nodes: Vec<T>,
    cdf: Vec<T>,
    pdf: Vec<T>,
}

impl<T: Real> CdfTable<T> {
    pub fn new(spec: &ProcessSpec<T>, t: T) -> Result<Self> {
        if spec.dim() != 1 {
            return Err(Error::UnsupportedDimension { dim: spec.dim() });
        }
        let x_max = if spec.alpha() == c(2.0) { c::<T>(80.0) } else { c::<T>(400.0) };
        let mut nodes = Vec::new();
        let step = c::<T>(0.02);
        for i in 0..100 {
            nodes.push(step * T::from_usize_lossy(i));
        }
        let mut x = c::<T>(2.0);
        while x < x_max {
            nodes.push(x);
            x = x * c(1.04);
        }
        nodes.push(x_max);
        let pdf = nodes.par_iter().map(|&x| density_inversion_radial(spec, t, x)).collect::<Result<Vec<T>>>()?;
        let (gx, gw) = gauss_legendre::<T>(6);
        let pieces = nodes
            .par_windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let half = (b - a) * c(0.5);
                let mid = (a + b) * c(0.5);
                let mut s = T::zero();
                for (xi, wi) in gx.iter().zip(&gw) {
                    s = s + *wi * density_inversion_radial(spec, t, mid + half * *xi)?;
                }
                Ok(s * half)
            })
            .collect::<Result<Vec<T>>>()?;
        let mut cdf = vec![c::<T>(0.5)];
        for p in pieces {
            let last = *cdf.last().unwrap();
            cdf.push(last + p);
        }
        Ok(Self { alpha: spec.alpha(), nodes, cdf, pdf })
    }

    pub fn eval(&self, x: T) -> T {
        let a = x.abs();
        let upper = self.upper_half(a);
        if x >= T::zero() {
            upper
        } else {
            T::one() - upper
        }
    }

    fn upper_half(&self, a: T) -> T {
        let n = self.nodes.len();
        let x_max = self.nodes[n - 1];
        let f_max = self.cdf[n - 1];
        if a >= x_max {
            let rest = (T::one() - f_max).max(T::zero());
            let decay = if self.alpha == c(2.0) { (x_max - a).exp() } else { (x_max / a).powf(self.alpha) };
            return T::one() - rest * decay;
        }
        let i = self.nodes.partition_point(|&v| v <= a).saturating_sub(1).min(n - 2);
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let h = x1 - x0;
        let s = (a - x0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let two = c::<T>(2.0);
        let three = c::<T>(3.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;
        let v = h00 * self.cdf[i] + h10 * h * self.pdf[i] + h01 * self.cdf[i + 1] + h11 * h * self.pdf[i + 1];
        v.max(c(0.5)).min(T::one())
    }
}

/// Sorted one-dimensional sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf<T> {
    sorted: Vec<T>,
}

impl<T: Real> EmpiricalCdf<T> {
    pub fn new(mut samples: Vec<T>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("empirical CDF needs at least one sample".into()));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::InvalidParameter("sample contains NaN".into()));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { sorted: samples })
    }

    pub fn count(&self) -> usize {
        self.sorted.len()
    }

    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    pub fn eval(&self, x: T) -> T {
        let k = self.sorted.partition_point(|&v| v <= x);
        T::from_usize_lossy(k) / T::from_usize_lossy(self.count())
    }

    /// Kolmogorov–Smirnov distance to a continuous CDF.
    pub fn ks_distance(&self, cdf: impl Fn(T) -> T) -> T {
        let n = T::from_usize_lossy(self.count());
        let mut d = T::zero();
        for (i, &x) in self.sorted.iter().enumerate() {
            let f = cdf(x);
            let lo = T::from_usize_lossy(i) / n;
            let hi = T::from_usize_lossy(i + 1) / n;
            d = d.max(f - lo).max(hi - f);
        }
        d
    }

    pub fn quantile(&self, p: f64) -> T {
        let n = self.count();
        let pos = (p.clamp(0.0, 1.0) * (n - 1) as f64).round() as usize;
        self.sorted[pos]
    }
}

/// `n` draws of `X_t` (row-major, `n × d`). Batches use split streams of
/// `rng`, so the result depends only on the seed.
pub fn sample_process<T: Real>(spec: &ProcessSpec<T>, t: T, n: usize, rng: &RngStream) -> Result<Vec<T>> {
    if !(t > T::zero()) {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    if !(1..=3).contains(&spec.dim()) {
        return Err(Error::UnsupportedDimension { dim: spec.dim() });
    }
    let dim = spec.dim();
    let kernel = StableKernel::new(StableKernelConfig::for_spec(spec));
    let batches = n.div_ceil(MC_BATCH);
    let chunks: Vec<Vec<T>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut stream = rng.split(b as u64);
            let count = MC_BATCH.min(n - b * MC_BATCH);
            let mut out = vec![T::zero(); count * dim];
            for row in out.chunks_mut(dim) {
                kernel.sample_increment_into(t, &mut stream, row);
            }
            out
        })
        .collect();
    Ok(chunks.concat())
}

/// `1.06 σ̂ n^{-1/5}` with `σ̂ = IQR/1.349`, clipped to `[1e-3, 1]`.
pub fn robust_bandwidth<T: Real>(samples: &[T]) -> T {
    let mut s: Vec<f64> = samples.iter().map(|x| x.as_f64()).collect();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    let q = |p: f64| s[((n - 1) as f64 * p).round() as usize];
    let sigma = (q(0.75) - q(0.25)) / 1.349;
    T::lit((1.06 * sigma * (n as f64).powf(-0.2)).clamp(1e-3, 1.0))
}

/// Gaussian kernel density estimate of `p_t` on `points`.
pub fn density_mc<T: Real>(
    spec: &ProcessSpec<T>,
    t: T,
    points: Vec<Vec<T>>,
    n_samples: usize,
    rng: &RngStream,
) -> Result<DensityTable<T>> {
    if n_samples < 1000 {
        return Err(Error::InvalidParameter(format!("need at least 1000 samples, got {n_samples}")));
    }
    let dim = spec.dim();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::LengthMismatch { expected: dim, got: p.len() });
    }
    let samples = sample_process(spec, t, n_samples, rng)?;
    let h = robust_bandwidth(&samples);
    let values = if dim == 1 {
        let ecdf = EmpiricalCdf::new(samples)?;
        kde_line(ecdf.sorted(), &points, h)
    } else {
        kde_space(&samples, dim, &points, h)
    };
    Ok(DensityTable {
        spec: *spec,
        t,
        method: DensityMethod::MonteCarlo,
        x_grid: points,
        values,
        n_samples: Some(n_samples),
        bandwidth: Some(h),
        seed: Some(rng.seed()),
    })
}

fn kde_line<T: Real>(sorted: &[T], points: &[Vec<T>], h: T) -> Vec<T> {
    let n = T::from_usize_lossy(sorted.len());
    let norm = (n * h * (c::<T>(2.0) * T::PI()).sqrt()).recip();
    let reach = h * c(9.0);
    points
        .par_iter()
        .map(|p| {
            let x = p[0];
            let lo = sorted.partition_point(|&v| v < x - reach);
            let hi = sorted.partition_point(|&v| v <= x + reach);
            let mut s = T::zero();
            for &v in &sorted[lo..hi] {
                let z = (x - v) / h;
                s = s + (-z * z * c(0.5)).exp();
            }
            s * norm
        })
        .collect()
}

fn kde_space<T: Real>(samples: &[T], dim: usize, points: &[Vec<T>], h: T) -> Vec<T> {
    let n = T::from_usize_lossy(samples.len() / dim);
    let norm = (n * (c::<T>(2.0) * T::PI() * h * h).powf(T::from_usize_lossy(dim) * c(0.5))).recip();
    points
        .par_iter()
        .map(|p| {
            let mut s = T::zero();
            for row in samples.chunks(dim) {
                let mut d2 = T::zero();
                for (a, b) in row.iter().zip(p) {
                    d2 = d2 + (*a - *b) * (*a - *b);
                }
                s = s + (-d2 / (c::<T>(2.0) * h * h)).exp();
            }
            s * norm
        })
        .collect()
}

/// `E f(x0 + X_t)` for an even `f` on the line given its transform
/// `f̂(ξ) = ∫ f(y) e^{iξy} dy`, as `(1/π) ∫₀^∞ f̂(ξ) cos(ξ x0) (1+ξ^α)^{-t} dξ`.
/// Valid for every `t > 0`.
pub fn expectation_even<T: Real>(spec: &ProcessSpec<T>, t: T, x0: T, fhat: impl Fn(T) -> T) -> Result<T> {
    if spec.dim() != 1 {
        return Err(Error::UnsupportedDimension { dim: spec.dim() });
    }
    let res = integrate_to_infinity(
        |xi: T| fhat(xi) * (xi * x0).cos() * spec.char_function(t, xi),
        T::zero(),
        c::<T>(0.5),
        QuadConfig::new(c(1e-11)),
    );
    Ok(res.value / T::PI())
}

/// Sup-norm gap on `[-5, 5]` between the numerical convolution of the
/// `t1` and `t2` inversion densities and the `t1 + t2` density (`d = 1`).
pub fn chapman_kolmogorov_gap<T: Real>(spec: &ProcessSpec<T>, t1: T, t2: T) -> Result<T> {
    if spec.dim() != 1 {
        return Err(Error::UnsupportedDimension { dim: spec.dim() });
    }
    let half_width = c::<T>(40.0);
    let h = c::<T>(0.02);
    let m = (half_width / h).round().as_f64() as i64;
    let grid: Vec<T> = (-m..=m).map(|i| h * c::<T>(i as f64)).collect();
    let table = |t: T| -> Result<Vec<T>> { grid.par_iter().map(|&y| density_inversion_radial(spec, t, y)).collect() };
    let p1 = table(t1)?;
    let p2 = if t2 == t1 { p1.clone() } else { table(t2)? };
    let mut worst = T::zero();
    let offset = m as usize;
    let step = 10usize;
    for k in (offset - 250..=offset + 250).step_by(step) {
        // (p1 * p2)(grid[k]) by the trapezoid rule
        let x_index = k as i64 - offset as i64;
        let mut s = T::zero();
        for (j, &a) in p1.iter().enumerate() {
            let idx = x_index - (j as i64 - offset as i64) + offset as i64;
            if idx >= 0 && (idx as usize) < p2.len() {
                s = s + a * p2[idx as usize];
            }
        }
        let conv = s * h;
        let target = density_inversion_radial(spec, t1 + t2, grid[k])?;
        worst = worst.max((conv - target).abs());
    }
    Ok(worst)
}

/// Mass of `p_t` over `[-a, a]` by adaptive quadrature (`d = 1`).
pub fn central_mass<T: Real>(spec: &ProcessSpec<T>, t: T, a: T) -> Result<T> {
    let f = cdf_numeric(spec, t, a)?;
    Ok(c::<T>(2.0) * f - T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(alpha: f64, dim: usize) -> ProcessSpec<f64> {
        ProcessSpec::new(alpha, dim).unwrap()
    }

    #[test]
    fn laplace_values() {
        let s = spec(2.0, 1);
        assert_relative_eq!(density_inversion(&s, 1.0, &[1.0]).unwrap(), 0.5 * (-1.0f64).exp(), max_relative = 1e-9);
        assert_relative_eq!(density_inversion(&s, 2.0, &[0.0]).unwrap(), 0.25, max_relative = 1e-10);
        for &x in &[0.3, 2.5, 7.0] {
            assert_eq!(density_inversion(&s, 1.0, &[x]).unwrap(), density_inversion(&s, 1.0, &[-x]).unwrap());
        }
    }

    #[test]
    fn refuses_non_integrable_times() {
        let s = spec(1.5, 1);
        let err = density_inversion(&s, 0.5, &[1.0]).unwrap_err();
        assert!(matches!(err, Error::InversionNotIntegrable { .. }));
        assert!(err.to_string().contains("Monte Carlo"));
        // boundary t = d/α is excluded too
        assert!(density_inversion(&spec(2.0, 1), 0.5, &[1.0]).is_err());
        assert!(cdf_numeric(&s, 0.5, 1.0).is_err());
    }

    #[test]
    fn cdf_values() {
        let s = spec(2.0, 1);
        assert_eq!(cdf_numeric(&s, 1.0, 0.0).unwrap(), 0.5);
        assert_relative_eq!(cdf_numeric(&s, 1.0, 1.0).unwrap(), 1.0 - 0.5 * (-1.0f64).exp(), max_relative = 1e-9);
        assert!((cdf_numeric(&s, 1.0, 60.0).unwrap() - 1.0).abs() < 1e-3);
        let table = CdfTable::new(&s, 1.0).unwrap();
        for &x in &[-3.0f64, -0.4, 0.0, 0.7, 2.0, 9.0, 100.0] {
            let exact = if x >= 0.0 { 1.0 - 0.5 * (-x).exp() } else { 0.5 * x.exp() };
            assert!((table.eval(x) - exact).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn cdf_is_monotone() {
        let s = spec(1.5, 1);
        let table = CdfTable::new(&s, 2.0).unwrap();
        let mut prev = 0.0;
        for i in -400..=400 {
            let v = table.eval(i as f64 * 0.05);
            assert!(v >= prev - 1e-12);
            prev = v;
        }
        assert_relative_eq!(table.eval(1.3), cdf_numeric(&s, 2.0, 1.3).unwrap(), max_relative = 1e-7);
    }

    #[test]
    fn density_is_unimodal_and_normalized() {
        // heavy tails leak mass past ±50 unless α is near 2
        for &(alpha, t) in &[(2.0, 1.0), (2.0, 3.0), (1.8, 1.0)] {
            let s = spec(alpha, 1);
            let grid: Vec<Vec<f64>> = (-1000..=1000).map(|i| vec![i as f64 * 0.05]).collect();
            let table = DensityTable::inversion(&s, t, grid).unwrap();
            let m = table.trapezoid_mass().unwrap();
            assert!((m - 1.0).abs() < 1e-3, "α={alpha} t={t}: mass {m}");
            let right = &table.values[1000..];
            assert!(right.windows(2).all(|w| w[1] <= w[0] + 1e-12));
            assert!(table.values.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn heavy_tailed_mass_matches_cdf() {
        let s = spec(1.5, 1);
        let grid: Vec<Vec<f64>> = (-1000..=1000).map(|i| vec![i as f64 * 0.05]).collect();
        let table = DensityTable::inversion(&s, 2.0, grid).unwrap();
        let m = table.trapezoid_mass().unwrap();
        assert!(m <= 1.0 + 1e-3);
        assert!((m - central_mass(&s, 2.0, 50.0).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn chapman_kolmogorov_gaussian_case() {
        assert!(chapman_kolmogorov_gap(&spec(2.0, 1), 1.0, 1.0).unwrap() < 1e-3);
    }

    #[test]
    fn three_dimensional_inversion() {
        // α = 2, t = 2 in d = 3: (1+ξ²)^{-2} inverts to e^{-r}/(8π)
        let s = spec(2.0, 3);
        let v = density_inversion(&s, 2.0, &[0.6, 0.0, 0.8]).unwrap();
        assert_relative_eq!(v, (-1.0f64).exp() / (8.0 * std::f64::consts::PI), max_relative = 1e-8);
    }

    #[test]
    fn mc_matches_laplace() {
        let s = spec(2.0, 1);
        let rng = RngStream::new(11);
        let xs = sample_process(&s, 1.0, 100_000, &rng).unwrap();
        let ecdf = EmpiricalCdf::new(xs).unwrap();
        let ks = ecdf.ks_distance(|x: f64| if x >= 0.0 { 1.0 - 0.5 * (-x).exp() } else { 0.5 * x.exp() });
        assert!(ks < 0.01, "ks {ks}");
    }

    #[test]
    fn mc_is_deterministic_and_symmetric() {
        let s = spec(1.2, 1);
        let rng = RngStream::new(5);
        let grid: Vec<Vec<f64>> = (-20..=20).map(|i| vec![i as f64 * 0.25]).collect();
        let a = density_mc(&s, 0.3, grid.clone(), 20_000, &rng).unwrap();
        let b = density_mc(&s, 0.3, grid, 20_000, &rng).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed, Some(5));
        let xs = sample_process(&s, 0.3, 20_000, &rng).unwrap();
        let ecdf = EmpiricalCdf::new(xs).unwrap();
        // median of a symmetric law
        assert!(ecdf.eval(0.0) > 0.49 && ecdf.eval(0.0) < 0.51);
        assert!(a.header_json().contains("\"MonteCarlo\""));
        assert!(a.to_csv().starts_with("x,p\n"));
    }

    #[test]
    fn mc_density_tracks_inversion() {
        let s = spec(2.0, 1);
        let grid: Vec<Vec<f64>> = (-8..=8).map(|i| vec![0.5 + i as f64 * 0.5]).collect();
        let mc = density_mc(&s, 2.0, grid.clone(), 200_000, &RngStream::new(3)).unwrap();
        let inv = DensityTable::inversion(&s, 2.0, grid).unwrap();
        for (a, b) in mc.values.iter().zip(&inv.values) {
            assert!((a - b).abs() < 0.01, "{a} vs {b}");
        }
    }

    #[test]
    fn fourier_expectation_of_gaussian() {
        // α = 2, t = 1: E e^{-(x0+X)²} against direct quadrature with the Laplace density
        let s = spec(2.0, 1);
        let fhat = |xi: f64| std::f64::consts::PI.sqrt() * (-xi * xi / 4.0).exp();
        let v = expectation_even(&s, 1.0, 0.7, fhat).unwrap();
        let direct = integrate_breaks(
            |y: f64| 0.5 * (-y.abs()).exp() * (-(0.7 + y) * (0.7 + y)).exp(),
            &[-40.0, 0.0, 40.0],
            QuadConfig::new(1e-12),
        );
        assert_relative_eq!(v, direct.value, max_relative = 1e-9);
    }
}
