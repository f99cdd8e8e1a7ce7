use crate::scalar::Real;

/// Kullback-Leibler divergence in bits, with `0 log 0 = 0` and `+∞` off support.
pub fn classical_kl<R: Real>(p: &[R], q: &[R]) -> R {
    assert_eq!(p.len(), q.len(), "distributions must have equal length");
    let mut acc = R::zero();
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= R::zero() {
            continue;
        }
        if qi <= R::zero() {
            return R::infinity();
        }
        acc += pi * (pi / qi).log2();
    }
    acc
}

/// Total variation in the unnormalized convention `Σ|p_i − q_i|`.
pub fn classical_tv<R: Real>(p: &[R], q: &[R]) -> R {
    assert_eq!(p.len(), q.len(), "distributions must have equal length");
    p.iter().zip(q).map(|(&a, &b)| (a - b).abs()).sum()
}

/// Binary entropy in bits.
pub fn binary_entropy<R: Real>(x: R) -> R {
    entropy_term(x) + entropy_term(R::one() - x)
}

/// `−t log₂ t`, zero at `t = 0`.
pub fn entropy_term<R: Real>(t: R) -> R {
    if t <= R::zero() {
        R::zero()
    } else {
        -t * t.log2()
    }
}
