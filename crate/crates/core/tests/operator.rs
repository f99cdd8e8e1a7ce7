use proptest::prelude::*;
use qdh_core::ensembles::{gue_traceless, random_density, sample_private_state, sample_shield_pair, SeedSpec};
use qdh_core::linalg::CMatrix;
use qdh_core::operator::*;
use qdh_core::zoo::{extremal_isotropic_povm, isotropic, max_entangled, IsotropicParams, SHIELD_A, SHIELD_B};
use qdh_core::C;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn cd(k: usize) -> SystemLayout {
    SystemLayout::bipartite("C", k, "D", k).unwrap()
}

fn max_diff(a: &HermitianOp<f64>, b: &HermitianOp<f64>) -> f64 {
    (a.matrix() - b.matrix()).max_abs()
}

fn rank(x: &HermitianOp<f64>) -> usize {
    x.eigenvalues().unwrap().iter().filter(|v| v.abs() > 1e-9).count()
}

#[test]
fn tensor_of_identities() {
    let a = HermitianOp::<f64>::identity(SystemLayout::single("X", 2).unwrap());
    let b = HermitianOp::<f64>::identity(SystemLayout::single("Y", 2).unwrap());
    let t = a.tensor(&b).unwrap();
    assert_eq!(t.layout().labels(), vec!["X", "Y"]);
    assert_eq!(t.matrix(), &CMatrix::identity(4));
}

#[test]
fn tensor_of_pure_states_is_pure() {
    let psi = max_entangled::<f64>(2).unwrap();
    let other = max_entangled_relabelled();
    let t = psi.tensor(&other).unwrap();
    assert!((t.op().trace() - 1.0).abs() < 1e-12);
    assert_eq!(rank(t.op()), 1);
}

fn max_entangled_relabelled() -> DensityState<f64> {
    qdh_core::zoo::max_entangled_on("E", "F", 2).unwrap()
}

#[test]
fn tensor_of_shields_has_unit_trace() {
    let (p, m) = sample_shield_pair::<f64>(2, &SeedSpec::new(1, 0)).unwrap();
    let m = m.relabel(SystemLayout::bipartite("E", 2, "F", 2).unwrap()).unwrap();
    assert!((p.tensor(&m).unwrap().op().trace() - 1.0).abs() < 1e-12);
}

#[test]
fn partial_transpose_of_maximally_entangled() {
    let psi = max_entangled::<f64>(2).unwrap();
    let g = psi.op().partial_transpose(&["D"]).unwrap();
    assert!((g.trace_norm().unwrap() - 2.0).abs() < 1e-12);
    let mut w = g.eigenvalues().unwrap();
    w.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (x, want) in w.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
        assert!((x - want).abs() < 1e-12);
    }
}

#[test]
fn partial_transpose_fixes_maximally_mixed() {
    let tau = DensityState::<f64>::maximally_mixed(cd(3));
    let g = tau.op().partial_transpose(&["D"]).unwrap();
    assert!(max_diff(&g, tau.op()) < 1e-15);
}

#[test]
fn partial_transpose_is_an_involution_on_shield_differences() {
    let ps = sample_private_state::<f64>(2, &SeedSpec::new(4, 1)).unwrap();
    let delta = ps.delta();
    let twice = delta.partial_transpose(&[SHIELD_B]).unwrap().partial_transpose(&[SHIELD_B]).unwrap();
    assert!(max_diff(&twice, &delta) < 1e-15);
    assert!((twice.trace_norm().unwrap() - delta.trace_norm().unwrap()).abs() < 1e-12);
}

#[test]
fn unknown_labels_are_errors() {
    let psi = max_entangled::<f64>(2).unwrap();
    assert!(psi.op().partial_transpose(&["Z"]).is_err());
    assert!(psi.op().partial_trace(&["Z"]).is_err());
}

#[test]
fn marginal_of_maximally_entangled_is_mixed() {
    let psi = max_entangled::<f64>(2).unwrap();
    let m = psi.op().partial_trace(&["D"]).unwrap();
    assert_eq!(m.layout().labels(), vec!["C"]);
    let want = HermitianOp::identity(m.layout().clone()).scale(0.5);
    assert!(max_diff(&m, &want) < 1e-15);
}

#[test]
fn partial_trace_of_product() {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let a = gue_traceless::<f64>(SystemLayout::single("X", 3).unwrap(), &mut rng).unwrap();
    let b = random_density::<f64>(SystemLayout::single("Y", 2).unwrap(), &mut rng).unwrap().into_op().scale(2.5);
    let r = a.tensor(&b).unwrap().partial_trace(&["Y"]).unwrap();
    assert!(max_diff(&r, &a.scale(b.trace())) < 1e-12);
    let all = a.tensor(&b).unwrap().partial_trace(&["X", "Y"]).unwrap();
    assert_eq!(all.dim(), 1);
    assert!((all.entry(0, 0).re - a.trace() * b.trace()).abs() < 1e-12);
}

#[test]
fn shield_trace_of_private_state_is_dephased_key() {
    let ps = sample_private_state::<f64>(4, &SeedSpec::new(2, 0)).unwrap();
    let key = ps.gamma().op().partial_trace(&[SHIELD_A, SHIELD_B]).unwrap();
    // (ψ⁺ + ψ⁻)/2 = diag(1/2, 0, 0, 1/2).
    let want = HermitianOp::from_real_diag(key.layout().clone(), &[0.5, 0.0, 0.0, 0.5]).unwrap();
    assert!(max_diff(&key, &want) < 1e-12);
}

#[test]
fn eigenvalues_of_identity_and_states() {
    let w = HermitianOp::<f64>::identity(cd(2)).eigenvalues().unwrap();
    assert!(w.iter().all(|x| (x - 1.0).abs() < 1e-14));
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    for _ in 0..5 {
        let rho = random_density::<f64>(cd(3), &mut rng).unwrap();
        let s: f64 = rho.op().eigenvalues().unwrap().iter().sum();
        assert!((s - 1.0).abs() < 1e-9);
    }
}

#[test]
fn schatten_norms() {
    let z = HermitianOp::<f64>::zeros(cd(2));
    for p in [Schatten::One, Schatten::Two, Schatten::Inf] {
        assert_eq!(z.schatten_norm(p).unwrap(), 0.0);
    }
    for d in [2, 4] {
        let ps = sample_private_state::<f64>(d, &SeedSpec::new(3, 0)).unwrap();
        let delta = ps.delta();
        assert!((delta.schatten_norm(Schatten::One).unwrap() - 2.0).abs() < 1e-10);
        let inf = delta.schatten_norm(Schatten::Inf).unwrap();
        assert!((inf - 2.0 / (d * d) as f64).abs() < 1e-10);
    }
}

#[test]
fn computational_povm_on_mixed_state() {
    let tau = DensityState::<f64>::maximally_mixed(SystemLayout::single("X", 5).unwrap());
    let p = apply_povm(&MeasurementPOVM::computational(tau.layout().clone()), &tau).unwrap();
    assert!(p.iter().all(|x| (x - 0.2).abs() < 1e-15));
}

#[test]
fn support_projector_separates_shields() {
    let (plus, minus) = sample_shield_pair::<f64>(2, &SeedSpec::new(5, 2)).unwrap();
    let m = MeasurementPOVM::binary(plus.op().scale(2.0)).unwrap();
    let p = apply_povm(&m, &plus).unwrap();
    assert!((p[0] - 1.0).abs() < 1e-10 && p[1].abs() < 1e-10);
    let q = apply_povm(&m, &minus).unwrap();
    assert!(q[0].abs() < 1e-10);
}

#[test]
fn extremal_isotropic_povm_outcomes() {
    for d in [2, 3] {
        let m = extremal_isotropic_povm::<f64>(d).unwrap();
        for p in [0.0, 0.3, 1.0] {
            let rho = isotropic::<f64>(IsotropicParams::new(d, p).unwrap()).unwrap();
            let probs = apply_povm(&m, &rho).unwrap();
            // Tr[(ψ + ψ⊥/(d+1))ι(p)] = p + (1−p)/(d+1).
            let want = p + (1.0 - p) / (d as f64 + 1.0);
            assert!((probs[0] - want).abs() < 1e-12);
            assert!((probs[0] + probs[1] - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn povm_layout_mismatch() {
    let m = MeasurementPOVM::<f64>::computational(cd(2));
    let rho = DensityState::<f64>::maximally_mixed(cd(3));
    assert!(apply_povm(&m, &rho).is_err());
}

#[test]
fn classical_divergences() {
    assert_eq!(classical_kl(&[0.3, 0.7], &[0.3, 0.7]), 0.0);
    assert!((classical_kl(&[1.0f64, 0.0], &[0.5, 0.5]) - 1.0).abs() < 1e-15);
    let v: f64 = 0.75 * (1.5f64).log2() + 0.25 * (0.5f64).log2();
    assert!((classical_kl(&[0.75, 0.25], &[0.5, 0.5]) - v).abs() < 1e-15);
    assert!((classical_kl(&[0.75f64, 0.25], &[0.5, 0.5]) - 0.18872).abs() < 1e-5);
    assert_eq!(classical_kl(&[0.5, 0.5], &[1.0, 0.0]), f64::INFINITY);
    assert_eq!(classical_tv(&[0.2, 0.8], &[0.2, 0.8]), 0.0);
    assert_eq!(classical_tv(&[1.0, 0.0], &[0.0, 1.0]), 2.0);
}

#[test]
fn classical_tv_of_isotropic_outcomes() {
    let d = 3;
    let m = extremal_isotropic_povm::<f64>(d).unwrap();
    let (p, q) = (0.8, 0.25);
    let a = apply_povm(&m, &isotropic::<f64>(IsotropicParams::new(d, p).unwrap()).unwrap()).unwrap();
    let b = apply_povm(&m, &isotropic::<f64>(IsotropicParams::new(d, q).unwrap()).unwrap()).unwrap();
    let want = 2.0 * (d as f64 / (d as f64 + 1.0)) * (p - q);
    assert!((classical_tv(&a, &b) - want).abs() < 1e-12);
}

#[test]
fn non_hermitian_input_is_rejected() {
    let mut m = CMatrix::<f64>::zeros(2, 2);
    m[(0, 1)] = C::new(1.0, 0.0);
    assert!(HermitianOp::new(SystemLayout::single("X", 2).unwrap(), m).is_err());
}

#[test]
fn json_round_trip() {
    let ps = sample_private_state::<f64>(2, &SeedSpec::new(6, 0)).unwrap();
    let s = ps.gamma().op().to_json().unwrap();
    let back = HermitianOp::<f64>::from_json(&s).unwrap();
    assert_eq!(&back, ps.gamma().op());
}

fn random_op(seed: u64, dims: (usize, usize)) -> HermitianOp<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let layout = SystemLayout::bipartite("C", dims.0, "D", dims.1).unwrap();
    let g = gue_traceless::<f64>(layout.clone(), &mut rng).unwrap();
    &g + &HermitianOp::identity(layout).scale(0.3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), da in 1usize..5, db in 1usize..5) {
        prop_assume!(da * db >= 2);
        let x = random_op(seed, (da, db));
        let (w, v) = x.eigh().unwrap();
        prop_assert!(w.windows(2).all(|p| p[0] <= p[1]));
        let n = x.dim();
        let diag = CMatrix::from_fn(n, n, |i, j| if i == j { C::new(w[i], 0.0) } else { C::new(0.0, 0.0) });
        let back = v.matmul(&diag).matmul(&v.adjoint());
        let err = (x.matrix() - &back).frobenius_norm();
        prop_assert!(err <= 1e-9 * x.matrix().frobenius_norm());
    }

    #[test]
    fn partial_transpose_is_an_isometric_involution(seed in any::<u64>(), da in 1usize..5, db in 1usize..5) {
        prop_assume!(da * db >= 2);
        let x = random_op(seed, (da, db));
        let g = x.partial_transpose(&["D"]).unwrap();
        prop_assert!((g.trace() - x.trace()).abs() < 1e-12);
        let n2 = |y: &HermitianOp<f64>| y.matrix().frobenius_norm();
        prop_assert!((n2(&g) - n2(&x)).abs() < 1e-10);
        prop_assert_eq!(g.partial_transpose(&["D"]).unwrap(), x);
    }

    #[test]
    fn partial_trace_is_adjoint_to_padding(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        prop_assume!(da * db >= 2 && da >= 2);
        let x = random_op(seed, (da, db));
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0xabc);
        let a = gue_traceless::<f64>(SystemLayout::single("C", da).unwrap(), &mut rng).unwrap();
        let padded = a.tensor(&HermitianOp::identity(SystemLayout::single("D", db).unwrap())).unwrap();
        let lhs = padded.inner(&x);
        let rhs = a.inner(&x.partial_trace(&["D"]).unwrap());
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn measurements_do_not_increase_trace_distance(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let layout = SystemLayout::single("X", d).unwrap();
        let rho = random_density::<f64>(layout.clone(), &mut rng).unwrap();
        let sigma = random_density::<f64>(layout.clone(), &mut rng).unwrap();
        let dist = (rho.op() - sigma.op()).trace_norm().unwrap();
        let h = gue_traceless::<f64>(layout.clone(), &mut rng).unwrap();
        let s = h.schatten_norm(Schatten::Inf).unwrap();
        let m = (&HermitianOp::identity(layout) + &h.scale(1.0 / s)).scale(0.5);
        let povm = MeasurementPOVM::binary(m).unwrap();
        let tv = classical_tv(&apply_povm(&povm, &rho).unwrap(), &apply_povm(&povm, &sigma).unwrap());
        prop_assert!(tv <= dist + 1e-12);
        let p = apply_povm(&povm, &rho).unwrap();
        prop_assert!(p.iter().all(|&x| x >= -1e-10));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
