use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::form::dot;
use super::{MeasureOnGrid, SchrodingerProblem};
use crate::error::{Error, Result};
use crate::real::{c, Real};

/// Stopping rule for [`solve_ground_state`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig<T> {
    /// Bound on `‖(H + ρ⁺)h - λρ⁻h‖ / ‖h‖`.
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-10).max(T::tol_floor() * c(100.0)), max_iter: 5000 }
    }
}

/// Principal eigenpair of `(H + ρ⁺) h = λ ρ⁻ h` with `Σ h_i² w⁻_i = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateResult<T> {
    pub alpha: T,
    #[serde(rename = "L")]
    pub half_width: T,
    #[serde(rename = "N")]
    pub n_points: usize,
    pub lambda: T,
    pub residual: T,
    pub iterations: usize,
    pub normalization_check: T,
    pub h: Vec<T>,
    pub mu_plus: MeasureOnGrid<T>,
    pub mu_minus: MeasureOnGrid<T>,
    pub seed: Option<u64>,
}

impl<T: Real> GroundStateResult<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    /// Columns `x, h`.
    pub fn to_csv(&self) -> String {
        let step = c::<T>(2.0) * self.half_width / T::from_usize_lossy(self.n_points);
        let mut out = String::from("x,h\n");
        for (i, v) in self.h.iter().enumerate() {
            let x = -self.half_width + step * T::from_usize_lossy(i);
            out.push_str(&format!("{x},{v}\n"));
        }
        out
    }
}

fn apply_a<T: Real>(p: &SchrodingerProblem<T>, rho_plus: &[T], x: &[T]) -> Result<Vec<T>> {
    let mut y = p.apply_generator(x)?;
    for ((yi, &r), &xi) in y.iter_mut().zip(rho_plus).zip(x) {
        *yi = *yi + r * xi;
    }
    Ok(y)
}

/// Conjugate gradients for `(H + ρ⁺) x = b`, warm-started at `x`.
fn conjugate_gradient<T: Real>(
    p: &SchrodingerProblem<T>,
    rho_plus: &[T],
    b: &[T],
    x: &mut [T],
    rel_tol: T,
) -> Result<usize> {
    let n = b.len();
    let ax = apply_a(p, rho_plus, x)?;
    let mut r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &ai)| bi - ai).collect();
    let mut d = r.clone();
    let mut rr = dot(&r, &r);
    let target = rel_tol * rel_tol * dot(b, b);
    let max_iter = 10 * n;
    for it in 0..max_iter {
        if rr <= target {
            return Ok(it);
        }
        let ad = apply_a(p, rho_plus, &d)?;
        let step = rr / dot(&d, &ad);
        for i in 0..n {
            x[i] = x[i] + step * d[i];
            r[i] = r[i] - step * ad[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            d[i] = r[i] + beta * d[i];
        }
    }
    Err(Error::NonConvergence { iterations: max_iter, residual: (rr / dot(b, b)).sqrt().as_f64() })
}

/// Power iteration on `(H + ρ⁺)^{-1} ρ⁻`; `λ` is the Rayleigh quotient of
/// the final iterate.
pub fn solve_ground_state<T: Real>(
    problem: &SchrodingerProblem<T>,
    cfg: SolverConfig<T>,
) -> Result<GroundStateResult<T>> {
    if !(cfg.tol > T::zero()) || cfg.max_iter == 0 {
        return Err(Error::InvalidParameter("solver needs tol > 0 and max_iter >= 1".into()));
    }
    let domain = problem.domain();
    let rho_plus = problem.mu_plus().densities(domain);
    let rho_minus = problem.mu_minus().densities(domain);
    let w_minus = &problem.mu_minus().weights;
    let cg_tol = (cfg.tol * c(1e-3)).max(T::tol_floor());
    let n = domain.n_points();
    let mut v: Vec<T> = vec![T::one(); n];
    let mut x = v.clone();
    let mut residual = T::infinity();
    for iteration in 1..=cfg.max_iter {
        let b: Vec<T> = v.iter().zip(&rho_minus).map(|(&a, &r)| a * r).collect();
        conjugate_gradient(problem, &rho_plus, &b, &mut x, cg_tol)?;
        let ax = apply_a(problem, &rho_plus, &x)?;
        let bx: Vec<T> = x.iter().zip(&rho_minus).map(|(&a, &r)| a * r).collect();
        let lambda = dot(&x, &ax) / dot(&x, &bx);
        let r: Vec<T> = ax.iter().zip(&bx).map(|(&a, &b)| a - lambda * b).collect();
        residual = (dot(&r, &r) / dot(&x, &x)).sqrt();
        // Σ h² w⁻ = 1 with Σ h w⁻ > 0
        let norm = x.iter().zip(w_minus).fold(T::zero(), |s, (&a, &w)| s + a * a * w).sqrt();
        let sign = if x.iter().zip(w_minus).fold(T::zero(), |s, (&a, &w)| s + a * w) < T::zero() {
            -T::one()
        } else {
            T::one()
        };
        for xi in x.iter_mut() {
            *xi = *xi * sign / norm;
        }
        v.copy_from_slice(&x);
        // warm start: the next solve returns ≈ v/λ
        for xi in x.iter_mut() {
            *xi = *xi / lambda;
        }
        if residual < cfg.tol {
            let normalization_check = v.iter().zip(w_minus).fold(T::zero(), |s, (&a, &w)| s + a * a * w);
            if !(lambda > c(1e-12)) {
                return Err(Error::InternalConsistency {
                    what: "principal eigenvalue must be positive".into(),
                    gap: lambda.as_f64(),
                });
            }
            return Ok(GroundStateResult {
                alpha: problem.spec().alpha(),
                half_width: domain.half_width(),
                n_points: n,
                lambda,
                residual,
                iterations: iteration,
                normalization_check,
                h: v,
                mu_plus: problem.mu_plus().clone(),
                mu_minus: problem.mu_minus().clone(),
                seed: None,
            });
        }
    }
    Err(Error::NonConvergence { iterations: cfg.max_iter, residual: residual.as_f64() })
}

/// Dense `H + diag ρ⁺` in `f64`.
fn dense_operator<T: Real>(problem: &SchrodingerProblem<T>) -> Result<DMatrix<f64>> {
    let n = problem.domain().n_points();
    let mut e0 = vec![T::zero(); n];
    e0[0] = T::one();
    let col = problem.apply_generator(&e0)?;
    let rho_plus = problem.mu_plus().densities(problem.domain());
    Ok(DMatrix::from_fn(n, n, |i, l| {
        let base = col[(i + n - l) % n].as_f64();
        if i == l {
            base + rho_plus[i].as_f64()
        } else {
            base
        }
    }))
}

/// Reference eigenpair from a dense Cholesky-reduced symmetric eigensolve,
/// normalized like [`solve_ground_state`].
pub fn dense_ground_state<T: Real>(problem: &SchrodingerProblem<T>) -> Result<(f64, Vec<f64>)> {
    let a = dense_operator(problem)?;
    let n = a.nrows();
    let chol = a
        .cholesky()
        .ok_or_else(|| Error::InternalConsistency { what: "H + rho_plus is not positive definite".into(), gap: 0.0 })?;
    let rho_minus: Vec<f64> = problem.mu_minus().densities(problem.domain()).iter().map(|x| x.as_f64()).collect();
    // C = L^{-1} D L^{-T} with D = diag ρ⁻
    let l = chol.l();
    let sqrt_d = DMatrix::from_diagonal(&DVector::from_iterator(n, rho_minus.iter().map(|x| x.sqrt())));
    let g = l.solve_lower_triangular(&sqrt_d).expect("triangular factor is invertible");
    let cmat = &g * g.transpose();
    let eig = SymmetricEigen::new(cmat);
    let (imax, theta) =
        eig.eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
    let y = eig.eigenvectors.column(imax).into_owned();
    let v = l.transpose().solve_upper_triangular(&y).expect("triangular factor is invertible");
    let w_minus: Vec<f64> = problem.mu_minus().weights.iter().map(|x| x.as_f64()).collect();
    let norm = v.iter().zip(&w_minus).map(|(a, w)| a * a * w).sum::<f64>().sqrt();
    let sign = if v.iter().zip(&w_minus).map(|(a, w)| a * w).sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    Ok((1.0 / theta, v.iter().map(|x| x * sign / norm).collect()))
}

/// `e^{-t(H + ρ⁺)} f` on the grid by dense symmetric eigendecomposition.
pub fn semigroup_oracle<T: Real>(problem: &SchrodingerProblem<T>, f: &[T], t: T) -> Result<Vec<f64>> {
    let n = problem.domain().n_points();
    if f.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: f.len() });
    }
    let eig = SymmetricEigen::new(dense_operator(problem)?);
    let fv = DVector::from_iterator(n, f.iter().map(|x| x.as_f64()));
    let coef = eig.eigenvectors.transpose() * fv;
    let damped = DVector::from_iterator(
        n,
        coef.iter().zip(eig.eigenvalues.iter()).map(|(a, lam)| a * (-t.as_f64() * lam).exp()),
    );
    Ok((eig.eigenvectors * damped).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::super::{reference_problem, Profile};
    use super::*;

    #[test]
    fn reference_problem_matches_dense() {
        let p = reference_problem().unwrap();
        let res = solve_ground_state(&p, SolverConfig::default()).unwrap();
        let (lam, h) = dense_ground_state(&p).unwrap();
        assert!((res.lambda / lam - 1.0).abs() < 1e-8, "{} vs {lam}", res.lambda);
        let scale = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let (s1, s2) = (scale(&res.h), scale(&h));
        let gap = res.h.iter().zip(&h).map(|(a, b)| (a / s1 - b / s2).abs()).fold(0.0, f64::max);
        assert!(gap < 1e-6, "{gap}");
        assert!((res.normalization_check - 1.0).abs() < 1e-10);
        assert!(res.lambda > 0.0 && res.lambda <= 0.25 + 1e-10);
        assert!(res.residual < 1e-10);
    }

    #[test]
    fn ground_state_is_positive_and_even() {
        let p = reference_problem().unwrap();
        let res = solve_ground_state(&p, SolverConfig::default()).unwrap();
        let top = res.h.iter().copied().fold(0.0, f64::max);
        assert!(res.h.iter().all(|&x| x > -1e-8 * top));
        let d = p.domain();
        let asym = (0..256).map(|i| (res.h[i] - res.h[d.mirror(i)]).abs()).fold(0.0, f64::max);
        assert!(asym < 1e-6 * top);
        let json = res.to_json();
        for key in [
            "\"alpha\"",
            "\"L\"",
            "\"N\"",
            "\"lambda\"",
            "\"residual\"",
            "\"iterations\"",
            "\"h\"",
            "\"mu_plus\"",
            "\"mu_minus\"",
            "\"seed\"",
        ] {
            assert!(json.contains(key), "{key}");
        }
        assert!(res.to_csv().starts_with("x,h\n"));
    }

    #[test]
    fn scaling_and_monotonicity() {
        let p = reference_problem().unwrap();
        let cfg = SolverConfig::default();
        let base = solve_ground_state(&p, cfg).unwrap().lambda;
        let scaled = p.with_mu_minus(p.mu_minus().scaled(2.0)).unwrap();
        assert!((solve_ground_state(&scaled, cfg).unwrap().lambda * 2.0 / base - 1.0).abs() < 1e-8);
        let d = *p.domain();
        let bigger_plus = MeasureOnGrid::from_profile(&d, &Profile::indicator(0.0, 1.0, 0.8)).unwrap();
        let up = solve_ground_state(&p.with_mu_plus(bigger_plus).unwrap(), cfg).unwrap().lambda;
        assert!(up >= base);
        let narrower = MeasureOnGrid::from_profile(&d, &Profile::indicator(0.0, 1.0, 1.0)).unwrap();
        let up = solve_ground_state(&p.with_mu_minus(narrower).unwrap(), cfg).unwrap().lambda;
        assert!(up >= base);
    }

    #[test]
    fn non_convergence_is_reported() {
        let p = reference_problem().unwrap();
        let err = solve_ground_state(&p, SolverConfig { tol: 1e-30, max_iter: 3 }).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 3, .. }));
    }

    #[test]
    fn killed_semigroup_stays_below_one() {
        let p = reference_problem().unwrap();
        let g = semigroup_oracle(&p, &vec![1.0; 256], 0.5).unwrap();
        assert!(g.iter().all(|&x| x <= 1.0 + 1e-10 && x > 0.0));
        // far from the potential nothing is killed yet
        assert!(g[0] > 0.99);
        assert!(g[128] < 0.9);
    }
}
