//! Ground states of `-ℋ + μ⁺ - λμ⁻` for the recurrent one-dimensional
//! process (`α ≥ d = 1`) on a periodic grid.
//!
//! The line is truncated to the torus `[-L, L)` with `N` nodes. Measures
//! live on the nodes as cell masses `w_i`; the matching densities are
//! `w_i / h`.

mod feynman_kac;
mod form;
mod ground;

pub use feynman_kac::{feynman_kac_estimate, feynman_kac_with_density, FeynmanKacEstimate};
pub use form::{DirichletForm, FormMethod};
pub use ground::{dense_ground_state, semigroup_oracle, solve_ground_state, GroundStateResult, SolverConfig};

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{ProcessSpec, RecurrenceClass};
use crate::quadrature::gauss_legendre;
use crate::real::{c, Real};

/// Masses below this count as the zero measure.
pub const TRIVIAL_MASS: f64 = 1e-14;

/// Periodic grid `x_i = -L + i h`, `h = 2L/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridDomain<T> {
    half_width: T,
    n_points: usize,
}

impl<T: Real> GridDomain<T> {
    /// `N` must be a power of two, at least 64.
    pub fn new(half_width: T, n_points: usize) -> Result<Self> {
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!("half width L must be positive, got {half_width}")));
        }
        if n_points < 64 || !n_points.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("grid size N must be a power of two >= 64, got {n_points}")));
        }
        Ok(Self { half_width, n_points })
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> T {
        c::<T>(2.0) * self.half_width / T::from_usize_lossy(self.n_points)
    }

    pub fn node(&self, i: usize) -> T {
        -self.half_width + self.spacing() * T::from_usize_lossy(i)
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }

    /// Frequency of DFT bin `k` (natural FFT order), `π k'/L` with
    /// `k' ∈ [-N/2, N/2)`.
    pub fn frequency(&self, k: usize) -> T {
        let n = self.n_points;
        let signed = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
        T::PI() * c::<T>(signed) / self.half_width
    }

    /// Index of the node closest to `x` after periodic wrapping.
    pub fn nearest_node(&self, x: T) -> usize {
        let two_l = c::<T>(2.0) * self.half_width;
        let shifted = x + self.half_width;
        let wrapped = shifted - two_l * (shifted / two_l).floor();
        let i = (wrapped / self.spacing()).round().as_f64() as usize;
        i % self.n_points
    }

    /// Index of the node mirrored through the origin.
    pub fn mirror(&self, i: usize) -> usize {
        (self.n_points - i) % self.n_points
    }
}

/// Named density profiles for measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "lowercase")]
pub enum Profile<T> {
    /// `height` on `[center - width, center + width]`.
    Indicator { center: T, width: T, height: T },
    /// `height · exp(-(x - center)²/(2 width²))`, cut at 8 widths.
    Gaussian { center: T, width: T, height: T },
    /// Tent of the given height and half-width.
    Triangle { center: T, width: T, height: T },
}

impl<T: Real> Profile<T> {
    pub fn indicator(center: T, width: T, height: T) -> Self {
        Profile::Indicator { center, width, height }
    }

    fn parts(&self) -> (T, T, T) {
        match *self {
            Profile::Indicator { center, width, height }
            | Profile::Gaussian { center, width, height }
            | Profile::Triangle { center, width, height } => (center, width, height),
        }
    }

    pub fn density(&self, x: T) -> T {
        let (center, width, height) = self.parts();
        let z = (x - center).abs();
        match self {
            Profile::Indicator { .. } => {
                if z <= width {
                    height
                } else {
                    T::zero()
                }
            }
            Profile::Gaussian { .. } => {
                if z <= width * c(8.0) {
                    height * (-(z * z) / (c::<T>(2.0) * width * width)).exp()
                } else {
                    T::zero()
                }
            }
            Profile::Triangle { .. } => (height * (T::one() - z / width)).max(T::zero()),
        }
    }

    /// Points where the density has a kink or jump.
    fn breakpoints(&self) -> Vec<T> {
        let (center, width, _) = self.parts();
        match self {
            Profile::Indicator { .. } => vec![center - width, center + width],
            Profile::Gaussian { .. } => vec![center - width * c(8.0), center + width * c(8.0)],
            Profile::Triangle { .. } => vec![center - width, center, center + width],
        }
    }

    fn validate(&self) -> Result<()> {
        let (center, width, height) = self.parts();
        if !(width > T::zero()) || !(height >= T::zero()) || !center.is_finite() || !height.is_finite() {
            return Err(Error::InvalidParameter(format!("profile needs width > 0 and height >= 0, got {self:?}")));
        }
        Ok(())
    }
}

impl<T: Real> FromStr for Profile<T> {
    type Err = Error;

    /// `name:key=value,...` with name in {indicator, gaussian, triangle} and
    /// keys `center` (default 0), `width` (default 1), `height` (default 1).
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let (mut center, mut width, mut height) = (0.0, 1.0, 1.0);
        for item in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("profile parameter '{item}' is not key=value")))?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad number in '{item}'")))?;
            match k.trim() {
                "center" => center = v,
                "width" => width = v,
                "height" => height = v,
                other => return Err(Error::Parse(format!("unknown profile key '{other}'"))),
            }
        }
        let (center, width, height) = (c::<T>(center), c::<T>(width), c::<T>(height));
        let p = match name.trim().to_ascii_lowercase().as_str() {
            "indicator" => Profile::Indicator { center, width, height },
            "gaussian" => Profile::Gaussian { center, width, height },
            "triangle" => Profile::Triangle { center, width, height },
            other => return Err(Error::Parse(format!("unknown profile '{other}'"))),
        };
        p.validate()?;
        Ok(p)
    }
}

/// Nonnegative node masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureOnGrid<T> {
    pub label: String,
    pub total_mass: T,
    pub weights: Vec<T>,
}

impl<T: Real> MeasureOnGrid<T> {
    pub fn from_weights(label: impl Into<String>, weights: Vec<T>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(**w >= T::zero()) || !w.is_finite()) {
            return Err(Error::InvalidParameter(format!("measure weights must be finite and >= 0, found {w}")));
        }
        let total_mass = weights.iter().fold(T::zero(), |a, &b| a + b);
        Ok(Self { label: label.into(), total_mass, weights })
    }

    pub fn zero(domain: &GridDomain<T>) -> Self {
        Self { label: "zero".into(), total_mass: T::zero(), weights: vec![T::zero(); domain.n_points()] }
    }

    /// Cell masses `∫_{x_i - h/2}^{x_i + h/2} ρ`, exact for indicator and
    /// triangle profiles.
    pub fn from_profile(domain: &GridDomain<T>, profile: &Profile<T>) -> Result<Self> {
        profile.validate()?;
        let h = domain.spacing();
        let half = h * c(0.5);
        let (gx, gw) = gauss_legendre::<T>(8);
        let kinks = profile.breakpoints();
        let weights = (0..domain.n_points())
            .map(|i| {
                let (a, b) = (domain.node(i) - half, domain.node(i) + half);
                let mut cuts = vec![a];
                cuts.extend(kinks.iter().copied().filter(|&k| k > a && k < b));
                cuts.push(b);
                let mut m = T::zero();
                for w in cuts.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    let mid = (lo + hi) * c(0.5);
                    let rad = (hi - lo) * c(0.5);
                    for (x, wt) in gx.iter().zip(&gw) {
                        m = m + *wt * rad * profile.density(mid + rad * *x);
                    }
                }
                m
            })
            .collect();
        Self::from_weights(format!("{profile:?}"), weights)
    }

    /// Rows `x, weight` (header optional); each weight goes to the nearest node.
    pub fn from_csv(domain: &GridDomain<T>, text: &str, label: impl Into<String>) -> Result<Self> {
        let mut weights = vec![T::zero(); domain.n_points()];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (Some(x), Some(w)) = (cols.next(), cols.next()) else {
                return Err(Error::Parse(format!("line {}: expected 'x,weight'", lineno + 1)));
            };
            let (Ok(x), Ok(w)) = (x.parse::<f64>(), w.parse::<f64>()) else {
                if lineno == 0 {
                    continue;
                }
                return Err(Error::Parse(format!("line {}: not numeric", lineno + 1)));
            };
            let i = domain.nearest_node(c(x));
            weights[i] = weights[i] + c(w);
        }
        Self::from_weights(label, weights)
    }

    /// Same measure multiplied by `factor > 0`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            label: format!("{} x {factor}", self.label),
            total_mass: self.total_mass * factor,
            weights: self.weights.iter().map(|&w| w * factor).collect(),
        }
    }

    /// Densities `w_i / h`.
    pub fn densities(&self, domain: &GridDomain<T>) -> Vec<T> {
        let h = domain.spacing();
        self.weights.iter().map(|&w| w / h).collect()
    }

    /// Largest `|x_i|` carrying mass.
    pub fn support_radius(&self, domain: &GridDomain<T>) -> T {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > T::zero())
            .map(|(i, _)| domain.node(i).abs())
            .fold(T::zero(), T::max)
    }

    pub fn is_even(&self, domain: &GridDomain<T>) -> bool {
        (0..self.weights.len()).all(|i| self.weights[i] == self.weights[domain.mirror(i)])
    }
}

/// Operator, measures and grid for the variational problem.
#[derive(Debug, Clone)]
pub struct SchrodingerProblem<T: Real> {
    spec: ProcessSpec<T>,
    form: DirichletForm<T>,
    mu_plus: MeasureOnGrid<T>,
    mu_minus: MeasureOnGrid<T>,
}

impl<T: Real> SchrodingerProblem<T> {
    pub fn new(
        spec: ProcessSpec<T>,
        domain: GridDomain<T>,
        mu_plus: MeasureOnGrid<T>,
        mu_minus: MeasureOnGrid<T>,
    ) -> Result<Self> {
        if spec.dim() != 1 || spec.recurrence() != RecurrenceClass::Recurrent {
            return Err(Error::InvalidSpec(format!(
                "ground states need the recurrent case alpha >= d = 1, got alpha = {}, d = {}",
                spec.alpha(),
                spec.dim()
            )));
        }
        let n = domain.n_points();
        for (name, m) in [("mu_plus", &mu_plus), ("mu_minus", &mu_minus)] {
            if m.weights.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: m.weights.len() });
            }
            if !(m.total_mass > c(TRIVIAL_MASS)) {
                return Err(Error::TrivialMeasure { which: name.into(), mass: m.total_mass.as_f64() });
            }
            let radius = m.support_radius(&domain);
            if radius * c(4.0) > domain.half_width() {
                return Err(Error::InvalidParameter(format!(
                    "{name} reaches |x| = {radius}; the grid needs L >= 4 x support radius, got L = {}",
                    domain.half_width()
                )));
            }
        }
        Ok(Self { spec, form: DirichletForm::new(spec, domain)?, mu_plus, mu_minus })
    }

    /// Same grid and `μ⁺`, new `μ⁻`.
    pub fn with_mu_minus(&self, mu_minus: MeasureOnGrid<T>) -> Result<Self> {
        let mut p = Self::new(self.spec, *self.domain(), self.mu_plus.clone(), mu_minus)?;
        p.form = self.form.clone();
        Ok(p)
    }

    pub fn with_mu_plus(&self, mu_plus: MeasureOnGrid<T>) -> Result<Self> {
        let mut p = Self::new(self.spec, *self.domain(), mu_plus, self.mu_minus.clone())?;
        p.form = self.form.clone();
        Ok(p)
    }

    pub fn spec(&self) -> &ProcessSpec<T> {
        &self.spec
    }

    pub fn domain(&self) -> &GridDomain<T> {
        self.form.domain()
    }

    pub fn form(&self) -> &DirichletForm<T> {
        &self.form
    }

    pub fn mu_plus(&self) -> &MeasureOnGrid<T> {
        &self.mu_plus
    }

    pub fn mu_minus(&self) -> &MeasureOnGrid<T> {
        &self.mu_minus
    }

    pub fn apply_generator(&self, u: &[T]) -> Result<Vec<T>> {
        self.form.apply_generator(u)
    }

    pub fn energy_form(&self, u: &[T], v: &[T], method: FormMethod) -> Result<T> {
        self.form.energy(u, v, method)
    }

    /// `sup_x ∫₀^t (P_s ρ⁺)(x) ds` for each `t`.
    pub fn kato_diagnostic(&self, t_values: &[T]) -> Result<Vec<T>> {
        self.form.kato_diagnostic(&self.mu_plus.densities(self.domain()), t_values)
    }

    /// `ℰ(1_A u, 1_{A^c} u)` for the node set `a_mask`.
    pub fn irreducibility_cross_term(&self, a_mask: &[bool], u: &[T]) -> Result<T> {
        self.form.cross_term(a_mask, u)
    }
}

/// The benchmark configuration: `α = 1.5`, `L = 16`, `N = 256`,
/// `μ⁺ = ½·1_{[-1,1]} dx`, `μ⁻ = 1_{[-2,2]} dx`.
pub fn reference_problem() -> Result<SchrodingerProblem<f64>> {
    reference_problem_on(16.0, 256)
}

pub fn reference_problem_on(half_width: f64, n_points: usize) -> Result<SchrodingerProblem<f64>> {
    let spec = ProcessSpec::new(1.5, 1)?;
    let domain = GridDomain::new(half_width, n_points)?;
    let mu_plus = MeasureOnGrid::from_profile(&domain, &Profile::indicator(0.0, 1.0, 0.5))?;
    let mu_minus = MeasureOnGrid::from_profile(&domain, &Profile::indicator(0.0, 2.0, 1.0))?;
    SchrodingerProblem::new(spec, domain, mu_plus, mu_minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grid_layout() {
        let g = GridDomain::new(16.0, 256).unwrap();
        assert_eq!(g.spacing(), 0.125);
        assert_eq!(g.node(0), -16.0);
        assert_eq!(g.node(128), 0.0);
        assert_eq!(g.frequency(1), std::f64::consts::PI / 16.0);
        assert_eq!(g.frequency(255), -std::f64::consts::PI / 16.0);
        assert_eq!(g.nearest_node(16.0), 0);
        assert_eq!(g.mirror(0), 0);
        assert_eq!(g.mirror(100), 156);
        assert!(GridDomain::new(16.0, 100).is_err());
        assert!(GridDomain::new(16.0, 32).is_err());
    }

    #[test]
    fn indicator_masses_are_exact() {
        let p = reference_problem().unwrap();
        assert_relative_eq!(p.mu_plus().total_mass, 1.0, max_relative = 1e-14);
        assert_relative_eq!(p.mu_minus().total_mass, 4.0, max_relative = 1e-14);
        assert!(p.mu_plus().is_even(p.domain()));
        let g = GridDomain::new(16.0, 256).unwrap();
        let tri = MeasureOnGrid::from_profile(&g, &"triangle:width=1.3,height=2".parse().unwrap()).unwrap();
        assert_relative_eq!(tri.total_mass, 2.6, max_relative = 1e-13);
        let gau = MeasureOnGrid::from_profile(&g, &"gaussian:width=0.5".parse().unwrap()).unwrap();
        assert_relative_eq!(gau.total_mass, 0.5 * (2.0 * std::f64::consts::PI).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn csv_ingestion() {
        let g = GridDomain::new(16.0, 256).unwrap();
        let m = MeasureOnGrid::<f64>::from_csv(&g, "x,weight\n0.0,0.5\n0.126,0.25\n", "csv").unwrap();
        assert_eq!(m.weights[128], 0.5);
        assert_eq!(m.weights[129], 0.25);
        assert!(MeasureOnGrid::<f64>::from_csv(&g, "x,weight\n0.0,-1\n", "csv").is_err());
    }

    #[test]
    fn constructor_contracts() {
        let spec = ProcessSpec::new(1.5, 1).unwrap();
        let g = GridDomain::new(16.0, 256).unwrap();
        let plus = MeasureOnGrid::from_profile(&g, &Profile::indicator(0.0, 1.0, 0.5)).unwrap();
        let err = SchrodingerProblem::new(spec, g, plus.clone(), MeasureOnGrid::zero(&g)).unwrap_err();
        assert!(matches!(err, Error::TrivialMeasure { .. }));
        let transient = ProcessSpec::new(0.8, 1).unwrap();
        assert!(SchrodingerProblem::new(transient, g, plus.clone(), plus.clone()).is_err());
        let wide = MeasureOnGrid::from_profile(&g, &Profile::indicator(0.0, 6.0, 1.0)).unwrap();
        assert!(SchrodingerProblem::new(spec, g, plus, wide).is_err());
        assert!("blob:width=1".parse::<Profile<f64>>().is_err());
        assert!("indicator:width=-1".parse::<Profile<f64>>().is_err());
    }
}
