//! Special functions needed by the kernels: gamma family and Bessel J0 / H0.

use num_complex::Complex;

use crate::real::{c, Real};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma<T: Real>(x: T) -> T {
    debug_assert!(x > T::zero(), "ln_gamma requires x > 0, got {x}");
    if x < c(0.5) {
        // reflection keeps the series in its accurate half-plane
        let pi = T::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = c::<T>(LANCZOS[0]);
    for (k, &coef) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + c::<T>(coef) / (x + T::from_usize_lossy(k));
    }
    let t = x + c(LANCZOS_G + 0.5);
    c::<T>(0.5) * (T::PI() + T::PI()).ln() + (x + c(0.5)) * t.ln() - t + acc.ln()
}

/// Gamma function on the real line away from the poles.
pub fn gamma<T: Real>(x: T) -> T {
    if x < c(0.5) {
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    ln_gamma(x).exp()
}

/// Lower incomplete gamma `γ(n, w)` for integer order `n ≥ 1`.
pub fn lower_incomplete_gamma_int<T: Real>(n: usize, w: T) -> T {
    assert!(n >= 1);
    if w <= T::zero() {
        return T::zero();
    }
    let nf = T::from_usize_lossy(n);
    if w < nf + c(30.0) {
        // γ(n,w) = w^n e^{-w} Σ_k w^k / (n (n+1) ... (n+k))
        let mut term = T::one() / nf;
        let mut sum = term;
        let mut k = 1usize;
        loop {
            term = term * w / (nf + T::from_usize_lossy(k));
            sum = sum + term;
            if term < sum * T::epsilon() || k > 2000 {
                break;
            }
            k += 1;
        }
        (nf * w.ln() - w).exp() * sum
    } else {
        // complement via the finite upper sum Γ(n,w) = (n-1)! e^{-w} Σ_{k<n} w^k/k!
        let mut term = T::one();
        let mut sum = T::one();
        for k in 1..n {
            term = term * w / T::from_usize_lossy(k);
            sum = sum + term;
        }
        let fact = ln_gamma(nf).exp();
        fact - fact * (-w).exp() * sum
    }
}

/// `γ(n, w) / w^n`, finite as `w → 0` where it tends to `1/n`.
pub fn lower_incomplete_gamma_scaled<T: Real>(n: usize, w: T) -> T {
    assert!(n >= 1);
    let nf = T::from_usize_lossy(n);
    if w <= T::zero() {
        return nf.recip();
    }
    if w < nf + c(30.0) {
        let mut term = T::one() / nf;
        let mut sum = term;
        let mut k = 1usize;
        loop {
            term = term * w / (nf + T::from_usize_lossy(k));
            sum = sum + term;
            if term < sum * T::epsilon() || k > 2000 {
                break;
            }
            k += 1;
        }
        (-w).exp() * sum
    } else {
        lower_incomplete_gamma_int(n, w) / w.powi(n as i32)
    }
}

/// Bessel J0 on the real line.
///
/// Uses the periodic trapezoid rule on `(1/π)∫₀^π cos(x cos θ) dθ`, which is
/// exact up to aliasing terms of order `J_{2m}(x)`; for large arguments the
/// Hankel expansion takes over.
pub fn bessel_j0<T: Real>(x: T) -> T {
    let x = x.abs();
    if x > c(25.0) {
        return hankel0_asymptotic(Complex::new(x, T::zero())).re;
    }
    let m = 48usize;
    let step = T::PI() / T::from_usize_lossy(m);
    let mut sum = c::<T>(0.5) * (x.cos() + (-x).cos());
    for k in 1..m {
        sum = sum + (x * (step * T::from_usize_lossy(k)).cos()).cos();
    }
    sum / T::from_usize_lossy(m)
}

/// Hankel function `H0^(1)(z)` by its large-argument expansion.
///
/// Accurate to machine precision for `|z| ≥ 20` with `0 ≤ arg z ≤ π/2`.
pub fn hankel0_asymptotic<T: Real>(z: Complex<T>) -> Complex<T> {
    let i = Complex::new(T::zero(), T::one());
    let quarter_pi = T::FRAC_PI_4();
    let zinv = z.inv();
    let mut coef = T::one();
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term;
    let mut last = T::infinity();
    for k in 1..80usize {
        let odd = T::from_usize_lossy(2 * k - 1);
        coef = coef * (-(odd * odd)) / (T::from_usize_lossy(k) * c(8.0));
        let next = i.powu(k as u32) * zinv.powu(k as u32) * coef;
        let mag = next.norm();
        if mag > last {
            break;
        }
        term = next;
        sum = sum + term;
        last = mag;
        if mag < T::epsilon() * sum.norm() * c(0.1) {
            break;
        }
    }
    let pref = (z * T::PI()).inv().scale(c(2.0)).sqrt();
    pref * (i * (z - quarter_pi)).exp() * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_matches_known_values() {
        assert_relative_eq!(gamma(5.0_f64), 24.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(0.5_f64), std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(gamma(1.5_f64 + 1.0), 1.329_340_388_179_137, max_relative = 1e-13);
        assert_relative_eq!(gamma(0.1_f64), 9.513_507_698_668_732, max_relative = 1e-12);
        assert_relative_eq!(ln_gamma(100.0_f64), 359.134_205_369_575_4, max_relative = 1e-13);
    }

    #[test]
    fn incomplete_gamma_limits() {
        // γ(1,w) = 1 - e^{-w}
        for &w in &[1e-8_f64, 0.3, 2.0, 45.0] {
            assert_relative_eq!(lower_incomplete_gamma_int(1, w), -(-w).exp_m1(), max_relative = 1e-13);
        }
        // γ(3,w) = 2 - e^{-w}(w² + 2w + 2)
        let w = 1.7_f64;
        let exact = 2.0 - (-w).exp() * (w * w + 2.0 * w + 2.0);
        assert_relative_eq!(lower_incomplete_gamma_int(3, w), exact, max_relative = 1e-13);
        assert_relative_eq!(lower_incomplete_gamma_int(3, 80.0_f64), 2.0, max_relative = 1e-13);
    }

    #[test]
    fn scaled_incomplete_gamma() {
        assert_relative_eq!(lower_incomplete_gamma_scaled(4, 0.0_f64), 0.25);
        for &w in &[1e-30_f64, 1e-3, 0.7, 5.0, 60.0] {
            let expected = if w < 1e-10 { 1.0 / 3.0 } else { lower_incomplete_gamma_int(3, w) / w.powi(3) };
            assert_relative_eq!(lower_incomplete_gamma_scaled(3, w), expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn j0_reference_values() {
        assert_relative_eq!(bessel_j0(0.0_f64), 1.0, epsilon = 1e-15);
        assert_relative_eq!(bessel_j0(1.0_f64), 0.765_197_686_557_966_6, epsilon = 1e-14);
        assert_relative_eq!(bessel_j0(10.0_f64), -0.245_935_764_451_348_3, epsilon = 1e-14);
        assert_relative_eq!(bessel_j0(30.0_f64), -0.086_367_983_581_040_31, epsilon = 1e-14);
        // continuity across the switch to the asymptotic branch
        assert_relative_eq!(bessel_j0(24.999_f64), bessel_j0(25.001_f64), epsilon = 1e-3);
        let trap: f64 = {
            let x = 25.5_f64;
            let m = 64;
            let mut s = 0.5 * (x.cos() + (-x).cos());
            for k in 1..m {
                s += (x * (std::f64::consts::PI * k as f64 / m as f64).cos()).cos();
            }
            s / m as f64
        };
        assert_relative_eq!(bessel_j0(25.5_f64), trap, epsilon = 1e-14);
    }

    #[test]
    fn hankel_imaginary_part_is_y0() {
        // Y0(30) = -0.1175...
        let h = hankel0_asymptotic(Complex::new(30.0_f64, 0.0));
        assert_relative_eq!(h.im, -0.117_295_731_686_663_98, epsilon = 1e-13);
    }
}
