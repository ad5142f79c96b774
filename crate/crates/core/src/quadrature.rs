//! Adaptive Gauss–Kronrod and fixed Gauss–Legendre rules, generic over the
//! scalar and over real/complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::real::{c, Real};

/// Values a quadrature rule can accumulate.
pub trait QuadValue<T: Real>: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> T;
}

impl<T: Real> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn magnitude(&self) -> T {
        self.abs()
    }
}

impl<T: Real> QuadValue<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn magnitude(&self) -> T {
        self.norm()
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_167_750_781,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<V> {
    pub value: V,
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_evals: usize,
}

impl<T: Real> QuadConfig<T> {
    pub fn new(rel_tol: T) -> Self {
        Self { rel_tol: rel_tol.max(T::tol_floor()), abs_tol: T::zero(), max_evals: 20_000 }
    }

    pub fn with_abs_tol(mut self, abs_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_evals(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals;
        self
    }
}

struct Panel<T, V> {
    a: T,
    b: T,
    value: V,
    error: T,
}

impl<T: Real, V> PartialEq for Panel<T, V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real, V> Eq for Panel<T, V> {}
impl<T: Real, V> PartialOrd for Panel<T, V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real, V> Ord for Panel<T, V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
fn gk21<T, V, F>(f: &mut F, a: T, b: T) -> (V, T)
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    let center = c::<T>(0.5) * (a + b);
    let half = c::<T>(0.5) * (b - a);
    let fc = f(center);
    let mut kronrod = fc * c::<T>(WGK[10]);
    let mut gauss = V::zero();
    let mut resabs = fc.magnitude() * c::<T>(WGK[10]);
    let mut fvals = [(V::zero(), V::zero()); 10];
    for j in 0..10 {
        let dx = half * c::<T>(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fvals[j] = (f1, f2);
        let w = c::<T>(WGK[j]);
        kronrod = kronrod + (f1 + f2) * w;
        resabs = resabs + (f1.magnitude() + f2.magnitude()) * w;
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * c::<T>(WG[j / 2]);
        }
    }
    let mean = kronrod * c::<T>(0.5);
    let mut resasc = (fc - mean).magnitude() * c::<T>(WGK[10]);
    for j in 0..10 {
        let (f1, f2) = fvals[j];
        resasc = resasc + ((f1 - mean).magnitude() + (f2 - mean).magnitude()) * c::<T>(WGK[j]);
    }
    let scale = half.abs();
    let resabs = resabs * scale;
    let resasc = resasc * scale;
    let mut err = ((kronrod - gauss) * half).magnitude();
    if resasc > T::zero() && err > T::zero() {
        let ratio = (c::<T>(200.0) * err / resasc).powf(c(1.5));
        err = resasc * ratio.min(T::one());
    }
    let floor = c::<T>(50.0) * T::epsilon() * resabs;
    if resabs > T::min_positive_value() / (c::<T>(50.0) * T::epsilon()) {
        err = err.max(floor);
    }
    (kronrod * half, err)
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
pub fn integrate<T, V, F>(mut f: F, a: T, b: T, cfg: QuadConfig<T>) -> QuadResult<V>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    if a == b {
        return QuadResult { value: V::zero(), abs_error: 0.0, evaluations: 0, converged: true };
    }
    let (value, error) = gk21(&mut f, a, b);
    let mut evals = 21;
    let mut total = value;
    let mut total_err = error;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut converged = false;
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.magnitude());
        if total_err <= target {
            converged = true;
            break;
        }
        if evals + 42 > cfg.max_evals {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = c::<T>(0.5) * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid);
        let (v2, e2) = gk21(&mut f, mid, worst.b);
        evals += 42;
        total = total - worst.value + v1 + v2;
        total_err = total_err - worst.error + e1 + e2;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        if heap.len() % 64 == 0 {
            // refresh the running error sum against drift
            total_err = heap.iter().fold(T::zero(), |s, p| s + p.error);
        }
    }
    QuadResult { value: total, abs_error: total_err.as_f64(), evaluations: evals, converged }
}

/// Integrates over consecutive intervals `[p0,p1], [p1,p2], ...`, each adaptively.
pub fn integrate_breaks<T, V, F>(mut f: F, points: &[T], cfg: QuadConfig<T>) -> QuadResult<V>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    let mut out = QuadResult { value: V::zero(), abs_error: 0.0, evaluations: 0, converged: true };
    for w in points.windows(2) {
        let r = integrate(&mut f, w[0], w[1], cfg);
        out.value = out.value + r.value;
        out.abs_error += r.abs_error;
        out.evaluations += r.evaluations;
        out.converged &= r.converged;
    }
    out
}

/// Integrates over `[a, ∞)` with geometrically growing panels
/// `[a, a+s], [a+s, a+3s], ...` until two consecutive panels are negligible.
///
/// Suitable for integrands with exponential or fast algebraic decay.
pub fn integrate_to_infinity<T, V, F>(mut f: F, a: T, scale: T, cfg: QuadConfig<T>) -> QuadResult<V>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    let mut out = QuadResult { value: V::zero(), abs_error: 0.0, evaluations: 0, converged: false };
    let mut lo = a;
    let mut width = scale;
    let mut quiet = 0;
    for _ in 0..200 {
        let hi = lo + width;
        let r = integrate(&mut f, lo, hi, cfg);
        out.value = out.value + r.value;
        out.abs_error += r.abs_error;
        out.evaluations += r.evaluations;
        let negligible = r.value.magnitude() <= T::epsilon() * c(0.25) * out.value.magnitude()
            || r.value.magnitude() <= cfg.abs_tol * c(1e-3);
        quiet = if negligible { quiet + 1 } else { 0 };
        if quiet >= 2 {
            out.converged = true;
            break;
        }
        lo = hi;
        width = width * c(2.0);
    }
    out
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let nf = T::from_usize_lossy(n);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (T::PI() * (T::from_usize_lossy(i) + c(0.75)) / (nf + c(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let mut p0 = T::one();
            let mut p1 = x;
            for k in 2..=n {
                let kf = T::from_usize_lossy(k);
                let p2 = ((c::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pn1) = if n == 1 { (x, T::one()) } else { (p1, p0) };
            dp = nf * (x * pn - pn1) / (x * x - T::one());
            let dx = pn / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * c(4.0) {
                break;
            }
        }
        if n == 1 {
            x = T::zero();
            dp = T::one();
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = c::<T>(2.0) / ((T::one() - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n == 1 {
        weights[0] = c(2.0);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_and_exponential_integrals() {
        let r = integrate(|x: f64| x * x * x - 2.0 * x, 0.0, 3.0, QuadConfig::new(1e-12));
        assert_relative_eq!(r.value, 81.0 / 4.0 - 9.0, max_relative = 1e-13);
        assert!(r.converged);
        let r = integrate(|x: f64| (-x).exp(), 0.0, 40.0, QuadConfig::new(1e-13));
        assert_relative_eq!(r.value, 1.0 - (-40.0_f64).exp(), max_relative = 1e-13);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let r = integrate(|x: f64| x.sqrt().recip(), 0.0, 1.0, QuadConfig::new(1e-10).with_max_evals(100_000));
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-8);
    }

    #[test]
    fn complex_integrand() {
        // ∫_0^π e^{ix} dx = 2i
        let r = integrate(|x: f64| Complex::new(0.0, x).exp(), 0.0, std::f64::consts::PI, QuadConfig::new(1e-13));
        assert!(r.value.re.abs() < 1e-14);
        assert_relative_eq!(r.value.im, 2.0, max_relative = 1e-13);
    }

    #[test]
    fn semi_infinite() {
        let r = integrate_to_infinity(|x: f64| (-x * x).exp(), 0.0, 1.0, QuadConfig::new(1e-13));
        assert_relative_eq!(r.value, std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-13);
        let r = integrate_to_infinity(|x: f64| 1.0 / (1.0 + x).powi(4), 0.0, 1.0, QuadConfig::new(1e-12));
        assert_relative_eq!(r.value, 1.0 / 3.0, max_relative = 1e-10);
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in [1usize, 2, 5, 16] {
            let (x, w) = gauss_legendre::<f64>(n);
            let s: f64 = w.iter().sum();
            assert_relative_eq!(s, 2.0, max_relative = 1e-14);
            let deg = 2 * n - 1;
            let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((m - exact).abs() < 1e-13, "n={n} m={m} exact={exact}");
        }
    }
}
