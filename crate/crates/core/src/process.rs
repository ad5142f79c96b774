//! The geometric α-stable process: symbol, characteristic function and the
//! classifications that follow from it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// The pair `(α, d)` defining a geometric α-stable process on ℝ^d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessSpec<T> {
    alpha: T,
    dim: usize,
}

/// Chung–Fuchs classification of the process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RecurrenceClass {
    Recurrent,
    Transient,
}

impl std::fmt::Display for RecurrenceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RecurrenceClass::Recurrent => f.write_str("Recurrent"),
            RecurrenceClass::Transient => f.write_str("Transient"),
        }
    }
}

impl<T: Real> ProcessSpec<T> {
    /// Validates `0 < alpha <= 2` and `dim >= 1`.
    pub fn new(alpha: T, dim: usize) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::lit(2.0)) {
            return Err(Error::InvalidSpec(format!("alpha must lie in (0, 2], got {alpha}")));
        }
        if dim == 0 {
            return Err(Error::InvalidSpec("dim must be at least 1".into()));
        }
        Ok(Self { alpha, dim })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dim_real(&self) -> T {
        T::from_usize_lossy(self.dim)
    }

    /// ψ(ξ) = log(1 + |ξ|^α) as a function of the radial argument.
    pub fn symbol(&self, xi_norm: T) -> T {
        debug_assert!(xi_norm >= T::zero());
        xi_norm.powf(self.alpha).ln_1p()
    }

    /// ψ evaluated at a frequency vector.
    pub fn symbol_at(&self, xi: &[T]) -> T {
        self.symbol(euclidean_norm(xi))
    }

    /// Φ(t, ξ) = (1 + |ξ|^α)^{-t}.
    pub fn char_function(&self, t: T, xi_norm: T) -> T {
        debug_assert!(t > T::zero());
        (-t * self.symbol(xi_norm)).exp()
    }

    pub fn char_function_at(&self, t: T, xi: &[T]) -> T {
        self.char_function(t, euclidean_norm(xi))
    }

    /// Recurrent exactly when `d <= α`.
    pub fn recurrence(&self) -> RecurrenceClass {
        if self.dim_real() <= self.alpha {
            RecurrenceClass::Recurrent
        } else {
            RecurrenceClass::Transient
        }
    }

    /// `t > d/α`: the characteristic function at time `t` is integrable over ℝ^d.
    /// The boundary `t = d/α` is not integrable.
    pub fn inversion_integrable(&self, t: T) -> bool {
        t > self.inversion_threshold()
    }

    pub fn inversion_threshold(&self) -> T {
        self.dim_real() / self.alpha
    }

    /// `log(1+|ξ|^α) / log(1+|ξ|)` per entry. The ratio tends to α, so the
    /// Hartman–Wintner growth condition fails for every α.
    pub fn hartman_wintner_ratio(&self, xi_norms: &[T]) -> Vec<T> {
        xi_norms
            .iter()
            .map(|&r| {
                debug_assert!(r > T::zero());
                self.symbol(r) / r.ln_1p()
            })
            .collect()
    }
}

pub(crate) fn euclidean_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &x| acc.hypot(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn spec(alpha: f64, dim: usize) -> ProcessSpec<f64> {
        ProcessSpec::new(alpha, dim).unwrap()
    }

    #[test]
    fn constructor_rejects_out_of_range() {
        assert!(ProcessSpec::new(0.0_f64, 1).is_err());
        assert!(ProcessSpec::new(2.000_001_f64, 1).is_err());
        assert!(ProcessSpec::new(f64::NAN, 1).is_err());
        assert!(ProcessSpec::new(1.0_f64, 0).is_err());
        assert!(ProcessSpec::new(2.0_f64, 3).is_ok());
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(spec(2.0, 1).symbol(0.0), 0.0);
        assert_relative_eq!(spec(2.0, 1).symbol(1.0), std::f64::consts::LN_2, max_relative = 1e-15);
        assert_relative_eq!(spec(1.0, 1).symbol(std::f64::consts::E - 1.0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(spec(2.0, 2).symbol_at(&[0.6, 0.8]), std::f64::consts::LN_2, max_relative = 1e-15);
    }

    #[test]
    fn char_function_examples() {
        for a in [0.3, 1.0, 2.0] {
            assert_eq!(spec(a, 1).char_function(0.7, 0.0), 1.0);
        }
        assert_relative_eq!(spec(2.0, 1).char_function(1.0, 1.0), 0.5, max_relative = 1e-15);
        assert_relative_eq!(spec(1.0, 1).char_function(2.0, 1.0), 0.25, max_relative = 1e-15);
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(spec(1.5, 1).recurrence(), RecurrenceClass::Recurrent);
        assert_eq!(spec(2.0, 2).recurrence(), RecurrenceClass::Recurrent);
        assert_eq!(spec(0.5, 1).recurrence(), RecurrenceClass::Transient);
    }

    #[test]
    fn inversion_threshold_examples() {
        assert!(spec(2.0, 1).inversion_integrable(1.0));
        assert!(!spec(1.0, 1).inversion_integrable(1.0));
        assert!(!spec(2.0, 1).inversion_integrable(0.4));
    }

    #[test]
    fn hartman_wintner_examples() {
        assert_relative_eq!(spec(1.0, 1).hartman_wintner_ratio(&[1.0])[0], 1.0, max_relative = 1e-15);
        assert!((spec(2.0, 1).hartman_wintner_ratio(&[1e6])[0] - 2.0).abs() < 1e-4);
        assert!((spec(0.5, 1).hartman_wintner_ratio(&[1e8])[0] - 0.5).abs() < 1e-4);
    }

    #[test]
    fn small_frequency_behaves_like_power() {
        for a in [1.5, 2.0] {
            let s = spec(a, 1);
            let xi: f64 = 1e-4;
            assert!((s.symbol(xi) / xi.powf(a) - 1.0).abs() < 1e-6);
        }
        // in general the gap is bounded by |ξ|^α / 2 and vanishes as ξ → 0
        for a in [0.2, 0.5, 1.0] {
            let s = spec(a, 1);
            for xi in [1e-4_f64, 1e-8, 1e-16] {
                let gap = (s.symbol(xi) / xi.powf(a) - 1.0).abs();
                assert!(gap <= 0.5 * xi.powf(a) + 1e-15, "a={a} xi={xi} gap={gap}");
            }
        }
    }

    #[test]
    fn single_precision_agrees() {
        let s32 = ProcessSpec::new(1.5_f32, 1).unwrap();
        let s64 = spec(1.5, 1);
        assert!((s32.char_function(0.8, 2.0) as f64 - s64.char_function(0.8, 2.0)).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn symbol_is_strictly_increasing(a in 0.05f64..=2.0, x in 1e-3f64..1e3, dx in 1e-3f64..10.0) {
            let s = spec(a, 1);
            prop_assert!(s.symbol(x + dx) > s.symbol(x));
            prop_assert!(s.symbol(x) > 0.0);
        }

        #[test]
        fn char_function_semigroup(a in 0.05f64..=2.0, t in 0.01f64..5.0, u in 0.01f64..5.0, x in 0.0f64..50.0) {
            let s = spec(a, 1);
            let lhs = s.char_function(t + u, x);
            let rhs = s.char_function(t, x) * s.char_function(u, x);
            let scale = 1.0 + (t + u) * s.symbol(x);
            prop_assert!((lhs - rhs).abs() <= 8.0 * f64::EPSILON * scale * lhs);
        }

        #[test]
        fn hartman_wintner_bounded_and_monotone_at_large_xi(a in 0.05f64..=2.0, x in 1e3f64..1e8) {
            let s = spec(a, 1);
            let r = s.hartman_wintner_ratio(&[x, 10.0 * x]);
            prop_assert!(r[0] <= a.max(1.0) + 1e-12);
            prop_assert!((r[1] - a).abs() <= (r[0] - a).abs() + 1e-12);
        }

        #[test]
        fn recurrence_is_pure_function_of_alpha_and_dim(a in 0.05f64..=2.0, d in 1usize..4) {
            let s = spec(a, d);
            let expected = if (d as f64) <= a { RecurrenceClass::Recurrent } else { RecurrenceClass::Transient };
            prop_assert_eq!(s.recurrence(), expected);
        }
    }
}
