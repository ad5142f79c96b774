use geostable::levy::LevyKernel;
use geostable::schrodinger::{
    solve_ground_state, DirichletForm, FormMethod, GridDomain, MeasureOnGrid, Profile, SchrodingerProblem, SolverConfig,
};
use geostable::transition::density_inversion;
use geostable::{ProcessSpecF32, RecurrenceClass};

#[test]
fn laplace_density_in_f32() {
    let spec = ProcessSpecF32::new(2.0, 1).unwrap();
    for x in [0.0f32, 0.5, 2.0, 6.0] {
        let p = density_inversion(&spec, 1.0, &[x]).unwrap();
        assert!((p - 0.5 * (-x).exp()).abs() < 1e-5, "{x}: {p}");
    }
}

#[test]
fn recurrence_in_f32() {
    assert_eq!(ProcessSpecF32::new(1.0, 1).unwrap().recurrence(), RecurrenceClass::Recurrent);
    assert_eq!(ProcessSpecF32::new(1.0, 2).unwrap().recurrence(), RecurrenceClass::Transient);
}

#[test]
fn levy_density_in_f32() {
    let k = LevyKernel::new(ProcessSpecF32::new(2.0, 1).unwrap()).unwrap();
    for x in [0.1f32, 1.0, 5.0] {
        let j = k.density(&[x]).unwrap();
        let exact = (-x).exp() / x;
        assert!((j / exact - 1.0).abs() < 1e-4, "{x}: {j} vs {exact}");
    }
}

#[test]
fn ground_state_in_f32_tracks_f64() {
    fn lambda<T: geostable::Real>() -> f64 {
        let domain = GridDomain::<T>::new(T::lit(16.0), 256).unwrap();
        let plus =
            MeasureOnGrid::from_profile(&domain, &Profile::indicator(T::lit(0.0), T::lit(1.0), T::lit(0.5))).unwrap();
        let minus =
            MeasureOnGrid::from_profile(&domain, &Profile::indicator(T::lit(0.0), T::lit(2.0), T::lit(1.0))).unwrap();
        let spec = geostable::ProcessSpec::new(T::lit(1.5), 1).unwrap();
        let p = SchrodingerProblem::new(spec, domain, plus, minus).unwrap();
        let cfg = SolverConfig { tol: T::lit(1e-5), ..SolverConfig::default() };
        solve_ground_state(&p, cfg).unwrap().lambda.as_f64()
    }
    let (a, b) = (lambda::<f32>(), lambda::<f64>());
    assert!((a / b - 1.0).abs() < 1e-4, "{a} vs {b}");
}

#[test]
fn form_equivalence_in_f32() {
    let domain = GridDomain::<f32>::new(16.0, 512).unwrap();
    let u: Vec<f32> = domain.nodes().iter().map(|x| (-x * x).exp()).collect();
    let form = DirichletForm::new(ProcessSpecF32::new(1.5, 1).unwrap(), domain).unwrap();
    let a = form.energy(&u, &u, FormMethod::Multiplier).unwrap();
    let b = form.energy(&u, &u, FormMethod::JumpKernel).unwrap();
    assert!((a / b - 1.0).abs() < 1e-2, "{a} vs {b}");
}
