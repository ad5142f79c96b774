use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::GridDomain;
use crate::error::{Error, Result};
use crate::levy::{limit_constant, LevyKernel, Regime};
use crate::process::ProcessSpec;
use crate::real::{c, Real};

/// Periodic images summed into the torus kernel on each side.
const IMAGES: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormMethod {
    /// `⟨Hu, v⟩ h` with `H` the spectral multiplier `log(1 + |ξ|^α)`.
    Multiplier,
    /// `½ Σ_{i≠l} (u_i - u_l)(v_i - v_l) K(x_i - x_l) h²`.
    JumpKernel,
}

impl std::str::FromStr for FormMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "multiplier" => Ok(FormMethod::Multiplier),
            "jump" | "jumpkernel" | "jump-kernel" => Ok(FormMethod::JumpKernel),
            other => Err(Error::Parse(format!("unknown form method '{other}'"))),
        }
    }
}

/// Dirichlet form of the process on a [`GridDomain`].
///
/// The jump kernel `K(m)` at node offset `m` is the Lévy density summed over
/// `±3` periodic images plus the power-law remainder of the farther ones
/// (`α < 2`). The nearest-neighbour offsets stand for the whole
/// band `|z| < 3h/2`, whose contribution `½ u'² ∫ z² j(z) dz` is matched
/// with `j(z) ≈ (α/2)/|z|`.
#[derive(Clone)]
pub struct DirichletForm<T: Real> {
    spec: ProcessSpec<T>,
    domain: GridDomain<T>,
    symbol: Vec<T>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    kernel: OnceLock<Vec<T>>,
}

impl<T: Real> fmt::Debug for DirichletForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletForm").field("spec", &self.spec).field("domain", &self.domain).finish()
    }
}

impl<T: Real> DirichletForm<T> {
    pub fn new(spec: ProcessSpec<T>, domain: GridDomain<T>) -> Result<Self> {
        if spec.dim() != 1 {
            return Err(Error::UnsupportedDimension { dim: spec.dim() });
        }
        let n = domain.n_points();
        let symbol = (0..n).map(|k| spec.symbol(domain.frequency(k).abs())).collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            spec,
            domain,
            symbol,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            kernel: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &ProcessSpec<T> {
        &self.spec
    }

    pub fn domain(&self) -> &GridDomain<T> {
        &self.domain
    }

    /// `log(1 + |ξ_k|^α)` in FFT order.
    pub fn symbol(&self) -> &[T] {
        &self.symbol
    }

    fn check_len(&self, u: &[T]) -> Result<()> {
        let n = self.domain.n_points();
        if u.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: u.len() });
        }
        Ok(())
    }

    /// Applies the Fourier multiplier `m_k` to the grid function `u`.
    pub fn apply_multiplier(&self, u: &[T], m: impl Fn(usize) -> T) -> Result<Vec<T>> {
        self.check_len(u)?;
        let mut buf: Vec<Complex<T>> = u.iter().map(|&x| Complex::new(x, T::zero())).collect();
        self.forward.process(&mut buf);
        for (k, z) in buf.iter_mut().enumerate() {
            *z = z.scale(m(k));
        }
        self.inverse.process(&mut buf);
        let scale = T::from_usize_lossy(u.len()).recip();
        Ok(buf.into_iter().map(|z| z.re * scale).collect())
    }

    /// `Hu`, the nonnegative generator applied spectrally.
    pub fn apply_generator(&self, u: &[T]) -> Result<Vec<T>> {
        self.apply_multiplier(u, |k| self.symbol[k])
    }

    /// `e^{-tH} u`.
    pub fn semigroup(&self, u: &[T], t: T) -> Result<Vec<T>> {
        self.apply_multiplier(u, |k| (-t * self.symbol[k]).exp())
    }

    pub fn energy(&self, u: &[T], v: &[T], method: FormMethod) -> Result<T> {
        self.check_len(u)?;
        self.check_len(v)?;
        let h = self.domain.spacing();
        match method {
            FormMethod::Multiplier => {
                let hu = self.apply_generator(u)?;
                Ok(dot(&hu, v) * h)
            }
            FormMethod::JumpKernel => {
                let k = self.jump_kernel()?;
                let n = u.len();
                let mut sum = T::zero();
                for i in 0..n {
                    for (m, &km) in k.iter().enumerate().skip(1) {
                        let l = (i + m) % n;
                        sum = sum + (u[i] - u[l]) * (v[i] - v[l]) * km;
                    }
                }
                Ok(sum * c(0.5) * h * h)
            }
        }
    }

    /// `K(m)` for node offsets `m = 0..N` (`K(0) = 0`).
    pub fn jump_kernel(&self) -> Result<&[T]> {
        if let Some(k) = self.kernel.get() {
            return Ok(k);
        }
        let built = self.build_kernel()?;
        Ok(self.kernel.get_or_init(|| built))
    }

    fn build_kernel(&self) -> Result<Vec<T>> {
        let levy = LevyKernel::new(self.spec)?;
        let n = self.domain.n_points();
        let h = self.domain.spacing();
        let period = c::<T>(2.0) * self.domain.half_width();
        let k0 = limit_constant(self.spec.alpha(), 1, Regime::SmallX);
        let band = k0 * c::<T>(1.125) / h;
        let alpha = self.spec.alpha();
        let far_constant = (alpha < c(2.0)).then(|| limit_constant(alpha, 1, Regime::LargeX) / (period * alpha));
        let mut out = vec![T::zero(); n];
        for (m, slot) in out.iter_mut().enumerate().skip(1) {
            let offset = m.min(n - m);
            let z = h * T::from_usize_lossy(offset);
            let mut s = T::zero();
            for image in -IMAGES..=IMAGES {
                if image == 0 && offset == 1 {
                    s = s + band;
                } else {
                    s = s + levy.density_radial(z + period * c(image as f64))?;
                }
            }
            if let Some(far) = far_constant {
                // images past ±IMAGES, summed as an integral of C|z|^{-1-α}
                let edge = self.domain.half_width() * c(2.0 * IMAGES as f64 + 1.0);
                s = s + far * ((edge + z).powf(-alpha) + (edge - z).powf(-alpha));
            }
            *slot = s;
        }
        Ok(out)
    }

    /// `ℰ(1_A u, 1_{A^c} u)`, checked against `-Σ_{i∈A} Σ_{l∉A} u_i u_l K h²`.
    pub fn cross_term(&self, a_mask: &[bool], u: &[T]) -> Result<T> {
        self.check_len(u)?;
        if a_mask.len() != u.len() {
            return Err(Error::LengthMismatch { expected: u.len(), got: a_mask.len() });
        }
        if let Some(x) = u.iter().find(|x| !(**x > T::zero())) {
            return Err(Error::InvalidParameter(format!("cross term needs u > 0 at every node, found {x}")));
        }
        let inside: Vec<T> = u.iter().zip(a_mask).map(|(&x, &a)| if a { x } else { T::zero() }).collect();
        let outside: Vec<T> = u.iter().zip(a_mask).map(|(&x, &a)| if a { T::zero() } else { x }).collect();
        let form = self.energy(&inside, &outside, FormMethod::JumpKernel)?;
        let k = self.jump_kernel()?;
        let n = u.len();
        let h = self.domain.spacing();
        let mut direct = T::zero();
        for i in (0..n).filter(|&i| a_mask[i]) {
            for l in (0..n).filter(|&l| !a_mask[l]) {
                direct = direct + u[i] * u[l] * k[(l + n - i) % n];
            }
        }
        direct = -direct * h * h;
        let scale = form.abs().max(direct.abs());
        if scale > T::zero() {
            let gap = (form - direct).abs() / scale;
            if !(gap <= c(1e-10)) {
                return Err(Error::InternalConsistency { what: "cross-term identity".into(), gap: gap.as_f64() });
            }
        }
        Ok(form)
    }

    /// `sup_i ∫₀^t (e^{-sH} ρ)_i ds` for each `t`, through the multiplier
    /// `(1 - e^{-tψ})/ψ`.
    pub fn kato_diagnostic(&self, rho: &[T], t_values: &[T]) -> Result<Vec<T>> {
        self.check_len(rho)?;
        if let Some(r) = rho.iter().find(|r| !(**r >= T::zero())) {
            return Err(Error::InvalidParameter(format!("density must be nonnegative, found {r}")));
        }
        t_values
            .iter()
            .map(|&t| {
                if !(t > T::zero()) {
                    return Err(Error::InvalidParameter(format!("times must be positive, got {t}")));
                }
                let avg = self.apply_multiplier(rho, |k| {
                    let p = self.symbol[k];
                    if p * t < c(1e-8) {
                        t * (T::one() - p * t * c(0.5))
                    } else {
                        -(-p * t).exp_m1() / p
                    }
                })?;
                Ok(avg.into_iter().fold(T::zero(), T::max))
            })
            .collect()
    }
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stable::RngStream;

    fn form(alpha: f64, l: f64, n: usize) -> DirichletForm<f64> {
        DirichletForm::new(ProcessSpec::new(alpha, 1).unwrap(), GridDomain::new(l, n).unwrap()).unwrap()
    }

    #[test]
    fn constants_are_in_the_kernel() {
        let f = form(1.5, 16.0, 256);
        let one = vec![1.0; 256];
        assert!(f.apply_generator(&one).unwrap().iter().all(|x| x.abs() < 1e-14));
        assert_eq!(f.energy(&one, &one, FormMethod::JumpKernel).unwrap(), 0.0);
    }

    #[test]
    fn cosines_are_eigenvectors() {
        let f = form(1.5, 16.0, 256);
        let g = f.domain();
        let k = 5;
        let xi = g.frequency(k);
        let u: Vec<f64> = g.nodes().iter().map(|x| (xi * x).cos()).collect();
        let hu = f.apply_generator(&u).unwrap();
        let psi = (xi.powf(1.5)).ln_1p();
        for (a, b) in hu.iter().zip(&u) {
            assert!((a - psi * b).abs() < 1e-12);
        }
    }

    #[test]
    fn generator_is_symmetric() {
        let f = form(1.2, 8.0, 128);
        let mut rng = RngStream::new(9);
        for _ in 0..20 {
            let u: Vec<f64> = (0..128).map(|_| rng.normal()).collect();
            let v: Vec<f64> = (0..128).map(|_| rng.normal()).collect();
            let a = dot(&f.apply_generator(&u).unwrap(), &v);
            let b = dot(&u, &f.apply_generator(&v).unwrap());
            let norm = dot(&u, &u).sqrt() * dot(&v, &v).sqrt();
            assert!((a - b).abs() < 1e-12 * norm);
            assert!(f.energy(&u, &u, FormMethod::Multiplier).unwrap() >= 0.0);
            assert!(f.energy(&u, &u, FormMethod::JumpKernel).unwrap() >= 0.0);
        }
    }

    #[test]
    fn wrong_length_is_rejected() {
        assert!(matches!(form(1.5, 8.0, 64).apply_generator(&[1.0; 10]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn kato_vanishes_without_potential() {
        let f = form(1.5, 16.0, 256);
        let v = f.kato_diagnostic(&vec![0.0; 256], &[1.0, 0.1]).unwrap();
        assert_eq!(v, vec![0.0, 0.0]);
    }
}
