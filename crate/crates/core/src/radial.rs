//! Radial Fourier inversion on ℝ^d, d ∈ {1, 2, 3}.
//!
//! For a radial symbol `g(|ξ|)` this evaluates
//! `I(x) = (2π)^{-d} ∫ e^{-i⟨x,ξ⟩} g(|ξ|) dξ`
//! through the one-dimensional kernels
//!
//! * d = 1: `(1/π) ∫ cos(xρ) g(ρ) dρ`
//! * d = 2: `(1/2π) ∫ ρ J0(xρ) g(ρ) dρ`
//! * d = 3: `(1/(2π² x)) ∫ ρ sin(xρ) g(ρ) dρ`
//!
//! Oscillation is removed by rotating the integration ray into the upper half
//! plane, where `e^{ixz}` (or `H0^(1)(xz)`) decays exponentially. Symbols must
//! be analytic in the sector swept by the rotation.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_breaks, integrate_to_infinity, QuadConfig};
use crate::real::{c, Real};
use crate::special::{bessel_j0, hankel0_asymptotic};

/// A radial function `g(ρ)` with an analytic continuation into the sector
/// `0 ≤ arg z ≤ rotation_angle()`.
pub trait RadialSymbol<T: Real> {
    fn eval_real(&self, rho: T) -> T;
    fn eval_complex(&self, z: Complex<T>) -> Complex<T>;
    /// Angle of the rotated integration ray.
    fn rotation_angle(&self) -> T;
    /// Radius beyond which `g` is negligible on the real axis, if it has one.
    fn cutoff(&self) -> Option<T>;
    /// `∫_R^∞ ρ^{p-1} g(ρ) dρ` for symbols without a cutoff.
    fn tail_moment(&self, _p: usize, _radius: T) -> T {
        T::zero()
    }
    /// A radius past which [`RadialSymbol::tail_moment`] is accurate.
    fn tail_radius(&self) -> T {
        T::one()
    }
}

fn rotation_for_alpha<T: Real>(alpha: T) -> T {
    T::FRAC_PI_4() / alpha.max(T::one())
}

/// `e^{-ρ^α}`, the symmetric α-stable characteristic function at unit time.
#[derive(Debug, Clone, Copy)]
pub struct StableSymbol<T> {
    pub alpha: T,
}

impl<T: Real> RadialSymbol<T> for StableSymbol<T> {
    fn eval_real(&self, rho: T) -> T {
        (-rho.powf(self.alpha)).exp()
    }
    fn eval_complex(&self, z: Complex<T>) -> Complex<T> {
        if z.norm() == T::zero() {
            return Complex::new(T::one(), T::zero());
        }
        (-z.powf(self.alpha)).exp()
    }
    fn rotation_angle(&self) -> T {
        rotation_for_alpha(self.alpha)
    }
    fn cutoff(&self) -> Option<T> {
        // e^{-40} ≈ 4e-18
        Some(c::<T>(40.0).powf(self.alpha.recip()))
    }
}

/// `(1 + ρ^α)^{-t}`, the geometric stable characteristic function at time `t`.
#[derive(Debug, Clone, Copy)]
pub struct GeometricSymbol<T> {
    pub alpha: T,
    pub t: T,
}

impl<T: Real> RadialSymbol<T> for GeometricSymbol<T> {
    fn eval_real(&self, rho: T) -> T {
        (-self.t * rho.powf(self.alpha).ln_1p()).exp()
    }
    fn eval_complex(&self, z: Complex<T>) -> Complex<T> {
        if z.norm() == T::zero() {
            return Complex::new(T::one(), T::zero());
        }
        let one = Complex::new(T::one(), T::zero());
        ((one + z.powf(self.alpha)).ln() * (-self.t)).exp()
    }
    fn rotation_angle(&self) -> T {
        rotation_for_alpha(self.alpha)
    }
    fn cutoff(&self) -> Option<T> {
        None
    }
    fn tail_radius(&self) -> T {
        // ρ^{-α} ≤ 1e-2 makes the binomial tail series converge fast
        c::<T>(100.0).powf(self.alpha.recip())
    }
    fn tail_moment(&self, p: usize, radius: T) -> T {
        // (1+ρ^α)^{-t} = Σ_k binom(-t,k) ρ^{-α(t+k)} for ρ > 1
        let pf = T::from_usize_lossy(p);
        let mut coef = T::one();
        let mut sum = T::zero();
        for k in 0..400usize {
            let kf = T::from_usize_lossy(k);
            if k > 0 {
                coef = coef * (-(self.t + kf - T::one())) / kf;
            }
            let expo = self.alpha * (self.t + kf) - pf;
            let term = coef * radius.powf(-expo) / expo;
            sum = sum + term;
            if term.abs() <= T::epsilon() * sum.abs() * c(0.1) {
                break;
            }
        }
        sum
    }
}

fn prefactor_at_origin<T: Real>(dim: usize) -> T {
    let pi = T::PI();
    match dim {
        1 => pi.recip(),
        2 => (c::<T>(2.0) * pi).recip(),
        _ => (c::<T>(2.0) * pi * pi).recip(),
    }
}

/// Geometric break points `0, s, 2s, 4s, ..., end`.
fn geometric_breaks<T: Real>(start: T, end: T) -> Vec<T> {
    let mut pts = vec![T::zero()];
    let mut p = start.min(end);
    while p < end {
        pts.push(p);
        p = p * c(2.0);
    }
    pts.push(end);
    pts
}

/// Evaluates `I(x)` for `x ≥ 0`.
pub fn radial_inverse<T, S>(symbol: &S, dim: usize, x: T, rel_tol: T) -> Result<T>
where
    T: Real,
    S: RadialSymbol<T>,
{
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension { dim });
    }
    let x = x.abs();
    let cfg = QuadConfig::new(rel_tol).with_max_evals(40_000);
    let cutoff = symbol.cutoff();
    let few_oscillations = match cutoff {
        Some(r) => x * r <= c(30.0),
        None => x == T::zero(),
    };
    if few_oscillations {
        return Ok(real_axis(symbol, dim, x, cfg));
    }
    let phi = symbol.rotation_angle();
    let dir = Complex::from_polar(T::one(), phi);
    let decay = x * phi.sin();
    let scale = match cutoff {
        Some(r) => (decay.recip()).min(r),
        None => decay.recip().min(T::one()),
    } * c(0.25);
    let i = Complex::new(T::zero(), T::one());
    let value = match dim {
        1 => {
            let r = integrate_to_infinity(
                |s: T| {
                    let z = dir * s;
                    (i * z * x).exp() * symbol.eval_complex(z)
                },
                T::zero(),
                scale,
                cfg,
            );
            (dir * r.value).re / T::PI()
        }
        3 => {
            let r = integrate_to_infinity(
                |s: T| {
                    let z = dir * s;
                    z * (i * z * x).exp() * symbol.eval_complex(z)
                },
                T::zero(),
                scale,
                cfg,
            );
            (dir * r.value).im / (c::<T>(2.0) * T::PI() * T::PI() * x)
        }
        _ => {
            // real leg until |xρ| reaches the Hankel regime, then rotate
            let rho0 = c::<T>(25.0) / x;
            if let Some(r) = cutoff {
                if rho0 >= r {
                    return Ok(real_axis(symbol, dim, x, cfg));
                }
            }
            let leg1 = integrate_breaks(
                |rho: T| rho * bessel_j0(x * rho) * symbol.eval_real(rho),
                &geometric_breaks(rho0.min(T::one()), rho0),
                cfg,
            );
            let leg2 = integrate_to_infinity(
                |s: T| {
                    let z = dir * s + rho0;
                    z * hankel0_asymptotic(z * x) * symbol.eval_complex(z)
                },
                T::zero(),
                scale,
                cfg,
            );
            (leg1.value + (dir * leg2.value).re) / (c::<T>(2.0) * T::PI())
        }
    };
    Ok(value)
}

fn real_axis<T, S>(symbol: &S, dim: usize, x: T, cfg: QuadConfig<T>) -> T
where
    T: Real,
    S: RadialSymbol<T>,
{
    let kernel = |rho: T| -> T {
        let g = symbol.eval_real(rho);
        match dim {
            1 => (x * rho).cos() * g,
            2 => rho * bessel_j0(x * rho) * g,
            _ => {
                let xr = x * rho;
                // ρ sin(xρ)/x, continuous at x = 0
                let sinc = if xr.abs() < c(1e-4) { T::one() - xr * xr / c(6.0) } else { xr.sin() / xr };
                rho * rho * sinc * g
            }
        }
    };
    let (upper, tail) = match symbol.cutoff() {
        Some(r) => (r, T::zero()),
        None => {
            let r = symbol.tail_radius();
            (r, symbol.tail_moment(dim, r))
        }
    };
    let q = integrate_breaks(kernel, &geometric_breaks(upper.min(T::one()) * c(0.5), upper), cfg);
    let pref = prefactor_at_origin::<T>(dim);
    pref * (q.value + tail)
}
