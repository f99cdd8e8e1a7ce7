use qdh_core::linalg::CMatrix;
use qdh_core::solver::{solve, LinMap, SolveStatus, SolverSettings, SpectrahedronProgram};
use qdh_core::{C, Real};

fn c(re: f64, im: f64) -> C<f64> {
    C::new(re, im)
}

/// `c0 𝟙 + c·σ` as a 2x2 matrix.
fn pauli_combo(c0: f64, v: [f64; 3]) -> CMatrix<f64> {
    CMatrix::from_vec(
        2,
        2,
        vec![c(c0 + v[2], 0.0), c(v[0], -v[1]), c(v[0], v[1]), c(c0 - v[2], 0.0)],
    )
}

fn sphere_grid(n: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for i in 0..=n {
        let theta = std::f64::consts::PI * i as f64 / n as f64;
        for j in 0..(2 * n) {
            let phi = std::f64::consts::PI * j as f64 / n as f64;
            out.push([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]);
        }
    }
    out
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn assert_certified(r: &qdh_core::solver::SolveReport<f64>) {
    assert_eq!(r.status, SolveStatus::Optimal, "{r:?}");
    assert!(r.gap <= 1e-7);
    assert!(r.primal_residual <= 1e-8);
    assert!(r.primal_value <= r.dual_value + 1e-6);
}

fn operator_norm_ball<R: Real>(cost: CMatrix<R>) -> SpectrahedronProgram<R> {
    let n = cost.rows();
    let mut p = SpectrahedronProgram::maximize();
    let t = p.add_variable("T", n);
    p.add_objective(t, cost);
    p.add_upper_bound(t, LinMap::Identity, R::one()).unwrap();
    p.add_lower_bound(t, LinMap::Identity, R::one()).unwrap();
    p
}

#[test]
fn trace_norm_program_on_diagonal() {
    let p = operator_norm_ball(CMatrix::from_real_diag(&[1.0, -1.0]));
    let r = solve(&p, &SolverSettings::default()).unwrap();
    assert_certified(&r);
    assert!((r.primal_value - 2.0).abs() < 1e-6);
}

#[test]
fn contradictory_trace_constraints_are_infeasible() {
    let mut p = SpectrahedronProgram::<f64>::maximize();
    let t = p.add_variable("T", 2);
    p.add_objective(t, CMatrix::identity(2));
    p.add_nonneg(t);
    p.add_scalar_equality(t, CMatrix::identity(2), 1.0);
    p.add_scalar_equality(t, CMatrix::identity(2), 2.0);
    let r = solve(&p, &SolverSettings::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Infeasible);
}

#[test]
fn psd_infeasibility_is_detected() {
    // X ⪰ 0 and X ⪯ −𝟙 have no common point.
    let mut p = SpectrahedronProgram::<f64>::maximize();
    let x = p.add_variable("X", 2);
    p.add_objective(x, CMatrix::identity(2));
    p.add_nonneg(x);
    p.add_upper_bound(x, LinMap::Identity, -1.0).unwrap();
    let r = solve(&p, &SolverSettings { max_iter: 20_000, ..SolverSettings::default() }).unwrap();
    assert_eq!(r.status, SolveStatus::Infeasible);
}

#[test]
fn variable_without_cone_is_rejected() {
    let mut p = SpectrahedronProgram::<f64>::maximize();
    let t = p.add_variable("T", 2);
    p.add_objective(t, CMatrix::identity(2));
    assert!(solve(&p, &SolverSettings::default()).is_err());
}

#[test]
fn norm_ball_matches_grid_search() {
    let costs = [(0.3, [0.2, -0.5, 0.1]), (-0.7, [0.0, 0.4, 0.9]), (0.1, [1.2, 0.3, -0.2])];
    let grid = sphere_grid(300);
    for (c0, v) in costs {
        let r = solve(&operator_norm_ball(pauli_combo(c0, v)), &SolverSettings::default()).unwrap();
        assert_certified(&r);
        // T = a𝟙 + b·σ with |a| + |b| ≤ 1, objective 2(c0 a + v·b).
        let mut best = f64::NEG_INFINITY;
        for i in 0..=200 {
            let a = -1.0 + 2.0 * i as f64 / 200.0;
            let radius = 1.0 - a.abs();
            for dir in &grid {
                best = best.max(2.0 * (c0 * a + radius * dot3(v, *dir)));
            }
        }
        assert!((r.primal_value - best).abs() < 1e-4, "{} vs {best}", r.primal_value);
    }
}

#[test]
fn two_block_measurement_matches_grid_search() {
    let c1 = pauli_combo(0.2, [0.5, 0.1, -0.3]);
    let c2 = pauli_combo(-0.1, [-0.2, 0.6, 0.4]);
    let mut p = SpectrahedronProgram::maximize();
    let x = p.add_variable("X", 2);
    let y = p.add_variable("Y", 2);
    p.add_objective(x, c1);
    p.add_objective(y, c2);
    p.add_nonneg(x);
    p.add_nonneg(y);
    p.add_equality(vec![(x, LinMap::Identity), (y, LinMap::Identity)], CMatrix::identity(2));
    let r = solve(&p, &SolverSettings::default()).unwrap();
    assert_certified(&r);

    // X = a𝟙 + b·σ with 0 ⪯ X ⪯ 𝟙, Y = 𝟙 − X.
    let grid = sphere_grid(300);
    let mut best = f64::NEG_INFINITY;
    let (d0, dv) = (0.2 - (-0.1), [0.5 + 0.2, 0.1 - 0.6, -0.3 - 0.4]);
    for i in 0..=200 {
        let a = i as f64 / 200.0;
        let radius = a.min(1.0 - a);
        for dir in &grid {
            best = best.max(2.0 * (-0.1) + 2.0 * (d0 * a + radius * dot3(dv, *dir)));
        }
    }
    assert!((r.primal_value - best).abs() < 1e-4, "{} vs {best}", r.primal_value);
}

#[test]
fn bloch_ball_matches_grid_search() {
    let cost = pauli_combo(0.4, [-0.3, 0.8, 0.2]);
    let mut p = SpectrahedronProgram::maximize();
    let x = p.add_variable("rho", 2);
    p.add_objective(x, cost);
    p.add_nonneg(x);
    p.add_scalar_equality(x, CMatrix::identity(2), 1.0);
    let r = solve(&p, &SolverSettings::default()).unwrap();
    assert_certified(&r);
    let best = sphere_grid(300)
        .into_iter()
        .map(|dir| 0.4 + dot3([-0.3, 0.8, 0.2], dir))
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((r.primal_value - best).abs() < 1e-4);
}

#[test]
fn minimization_reports_original_sign() {
    let mut p = SpectrahedronProgram::<f64>::minimize();
    let x = p.add_variable("rho", 2);
    p.add_objective(x, CMatrix::from_real_diag(&[2.0, -3.0]));
    p.add_nonneg(x);
    p.add_scalar_equality(x, CMatrix::identity(2), 1.0);
    let r = solve(&p, &SolverSettings::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.primal_value + 3.0).abs() < 1e-6);
}

#[test]
fn objective_scaling_scales_the_optimum() {
    let base = operator_norm_ball(pauli_combo(0.1, [0.3, -0.2, 0.7]));
    let r1 = solve(&base, &SolverSettings::default()).unwrap();
    for lambda in [0.5, 3.0] {
        let r = solve(&base.scaled_objective(lambda), &SolverSettings::default()).unwrap();
        assert_certified(&r);
        assert!((r.primal_value - lambda * r1.primal_value).abs() <= 2e-7 * (1.0 + r.primal_value.abs()));
    }
}

#[test]
fn partial_transpose_constraints() {
    // PPT norm of a Bell state minus the maximally mixed state.
    let h = 0.5;
    let mut bell = CMatrix::<f64>::zeros(4, 4);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        bell[(i, j)] = c(h, 0.0);
    }
    let x = &bell - &CMatrix::identity(4).scale(0.25);
    let mut p = operator_norm_ball(x);
    let pt = LinMap::partial_transpose(vec![2, 2], vec![false, true]);
    p.add_upper_bound(0, pt.clone(), 1.0).unwrap();
    p.add_lower_bound(0, pt, 1.0).unwrap();
    let r = solve(&p, &SolverSettings::default()).unwrap();
    assert_certified(&r);
    // Isotropic closed form 2(d/(d+1))|p − q| with p = 1, q = 1/4.
    assert!((r.primal_value - 2.0 * (2.0 / 3.0) * 0.75).abs() < 1e-6, "{}", r.primal_value);
}

#[test]
fn program_json_round_trip() {
    let p = operator_norm_ball(pauli_combo(0.1, [0.3, -0.2, 0.7]));
    let back = SpectrahedronProgram::<f64>::from_json(&p.to_json().unwrap()).unwrap();
    assert_eq!(back, p);
}

#[test]
fn single_precision_solve() {
    let p = operator_norm_ball(pauli_combo(0.1, [0.3, -0.2, 0.7]).cast::<f32>());
    let r = solve(&p, &SolverSettings::<f32>::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    let expected = 2.0 * (0.1f32.abs().max((0.09f32 + 0.04 + 0.49).sqrt()));
    assert!((r.primal_value - expected).abs() < <f32 as Real>::tol(1e-6));
}
