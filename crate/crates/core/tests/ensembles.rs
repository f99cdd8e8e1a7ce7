use qdh_core::ensembles::*;
use qdh_core::linalg::CMatrix;
use qdh_core::operator::{DensityState, HermitianOp, Schatten};
use qdh_core::zoo::{bell, BellSign, KEY_A, KEY_B, SHIELD_A, SHIELD_B};

fn unitarity_defect(u: &CMatrix<f64>) -> f64 {
    (&u.adjoint().matmul(u) - &CMatrix::identity(u.rows())).max_abs()
}

#[test]
fn one_dimensional_haar_is_a_phase() {
    let u = sample_haar_unitary::<f64>(1, &SeedSpec::new(1, 0)).unwrap();
    assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
    assert!(sample_haar_unitary::<f64>(0, &SeedSpec::new(1, 0)).is_err());
}

#[test]
fn haar_unitaries_are_unitary() {
    for t in 0..5 {
        let u = sample_haar_unitary::<f64>(16, &SeedSpec::new(2, t)).unwrap();
        assert!(unitarity_defect(&u) < 1e-10);
    }
}

#[test]
fn haar_second_moment() {
    let n = 10_000;
    let dim = 8;
    let xs: Vec<f64> =
        (0..n).map(|t| sample_haar_unitary::<f64>(dim, &SeedSpec::new(3, t)).unwrap()[(0, 0)].norm_sqr()).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sigma = (var / n as f64).sqrt();
    assert!((mean - 1.0 / dim as f64).abs() <= 3.0 * sigma, "mean {mean} ± {sigma}");
}

#[test]
fn shield_pairs_are_complementary() {
    for d in [2, 4] {
        for t in 0..3 {
            let (p, m) = sample_shield_pair::<f64>(d, &SeedSpec::new(4, t)).unwrap();
            assert!(p.inner(&m).abs() < 1e-12);
            let n = d * d;
            let avg = (p.op() + m.op()).scale(0.5);
            let tau = HermitianOp::identity(avg.layout().clone()).scale(1.0 / n as f64);
            assert!((avg.matrix() - tau.matrix()).max_abs() < 1e-10);
            let rank = p.op().eigenvalues().unwrap().iter().filter(|x| x.abs() > 1e-9).count();
            assert_eq!(rank, n / 2);
        }
    }
}

#[test]
fn odd_dimensions_are_rejected() {
    assert!(sample_shield_pair::<f64>(3, &SeedSpec::new(0, 0)).is_err());
    assert!(sample_private_state::<f64>(5, &SeedSpec::new(0, 0)).is_err());
}

#[test]
fn private_state_key_attack_is_product() {
    for d in [2, 4] {
        let ps = sample_private_state::<f64>(d, &SeedSpec::new(5, 0)).unwrap();
        let g = ps.gamma();
        assert!((g.op().trace() - 1.0).abs() < 1e-12);
        assert!(g.op().min_eigenvalue().unwrap() > -1e-10);
        assert_eq!(g.layout().labels(), vec![KEY_A, SHIELD_A, KEY_B, SHIELD_B]);
        assert_eq!(g.layout().dims(), vec![2, d, 2, d]);

        let key = (bell::<f64>(BellSign::Plus).op() + bell::<f64>(BellSign::Minus).op()).scale(0.5);
        let shield = DensityState::<f64>::maximally_mixed(ps.shield_plus().layout().clone());
        let want = key.tensor(shield.op()).unwrap().permute(&[KEY_A, SHIELD_A, KEY_B, SHIELD_B]).unwrap();
        assert!((ps.key_attacked().op().matrix() - want.matrix()).max_abs() < 1e-12);
    }
}

#[test]
fn private_state_block_structure() {
    let d = 2;
    let ps = sample_private_state::<f64>(d, &SeedSpec::new(6, 1)).unwrap();
    let g = ps.gamma().permute(&[KEY_A, KEY_B, SHIELD_A, SHIELD_B]).unwrap();
    let n = d * d;
    let abs_delta = ps.delta().abs().unwrap();
    let delta = ps.delta();
    // Key basis |00⟩ = 0, |11⟩ = 3: corners ¼|Δ|, off-diagonal blocks ¼Δ, everything else zero.
    for a in 0..4 {
        for b in 0..4 {
            for i in 0..n {
                for j in 0..n {
                    let got = g.op().entry(a * n + i, b * n + j);
                    let want = match (a, b) {
                        (0, 0) | (3, 3) => abs_delta.entry(i, j) * 0.25,
                        (0, 3) | (3, 0) => delta.entry(i, j) * 0.25,
                        _ => qdh_core::C::new(0.0, 0.0),
                    };
                    assert!((got - want).norm() < 1e-12, "block ({a},{b}) entry ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn gue_samples() {
    for t in 0..5 {
        let g = sample_gue_traceless::<f64>(12, &SeedSpec::new(7, t)).unwrap();
        assert!(g.trace().abs() <= 1e-12 * 12.0);
        assert!(g.defect() <= 1e-14);
    }
    assert!(sample_gue_traceless::<f64>(1, &SeedSpec::new(7, 0)).is_err());
}

#[test]
fn gue_operator_norm_grows_like_square_root() {
    let mean_norm = |dim: usize| {
        (0..200)
            .map(|t| sample_gue_traceless::<f64>(dim, &SeedSpec::new(8, t)).unwrap().schatten_norm(Schatten::Inf).unwrap())
            .sum::<f64>()
            / 200.0
    };
    let ratio = mean_norm(64) / mean_norm(16);
    assert!((1.6..=2.4).contains(&ratio), "{ratio}");
}

#[test]
fn sampling_is_deterministic() {
    let a = sample_shield_pair::<f64>(4, &SeedSpec::new(9, 3)).unwrap();
    let b = sample_shield_pair::<f64>(4, &SeedSpec::new(9, 3)).unwrap();
    assert_eq!(a, b);
    let c = sample_shield_pair::<f64>(4, &SeedSpec::new(9, 4)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn shield_spectrum_is_fixed() {
    for d in [2, 4] {
        let (p, _) = sample_shield_pair::<f64>(d, &SeedSpec::new(10, 0)).unwrap();
        let n = d * d;
        let w = p.op().eigenvalues().unwrap();
        let zeros = w.iter().filter(|x| x.abs() < 1e-10).count();
        let tops = w.iter().filter(|x| (*x - 2.0 / n as f64).abs() < 1e-10).count();
        assert_eq!((zeros, tops), (n / 2, n / 2));
    }
}

#[test]
fn qubit_shield_differences_have_fixed_norms() {
    for t in 0..100 {
        let ps = sample_private_state::<f64>(2, &SeedSpec::new(12, t)).unwrap();
        let delta = ps.delta();
        assert!((delta.trace_norm().unwrap() - 2.0).abs() < 1e-10);
        assert!((delta.schatten_norm(Schatten::Inf).unwrap() - 0.5).abs() < 1e-10);
    }
}

#[test]
fn six_dimensional_shields_diagonalize() {
    // Trials whose half-rank shields once stalled the eigensolver.
    for t in [3, 11, 12, 13, 17] {
        let ps = sample_private_state::<f64>(6, &SeedSpec::new(20_240_601, t)).unwrap();
        assert!((ps.delta().trace_norm().unwrap() - 2.0).abs() < 1e-9);
        assert!(ps.gamma().op().eigenvalues().is_ok());
    }
}
