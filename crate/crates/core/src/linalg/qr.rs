use num_traits::{One, Zero};

use super::CMatrix;
use crate::scalar::{creal, Real, C};

/// Householder QR of a square matrix: `a = q r` with `q` unitary and `r` upper triangular.
pub fn qr<R: Real>(a: &CMatrix<R>) -> (CMatrix<R>, CMatrix<R>) {
    assert!(a.is_square(), "qr expects a square matrix");
    let n = a.rows();
    let mut r = a.clone();
    let mut q = CMatrix::<R>::identity(n);
    for k in 0..n {
        let x: Vec<C<R>> = (k..n).map(|i| r[(i, k)]).collect();
        let xnorm = x.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if xnorm == R::zero() {
            continue;
        }
        let phase = if x[0].norm() > R::zero() { x[0] / creal(x[0].norm()) } else { C::one() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2 = v.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr());
        if vnorm2 == R::zero() {
            continue;
        }
        let tau = R::lit(2.0) / vnorm2;
        // r <- H r on rows k.., columns k..
        for j in k..n {
            let mut dot = C::zero();
            for (ii, vi) in v.iter().enumerate() {
                dot += vi.conj() * r[(k + ii, j)];
            }
            let s = dot * tau;
            for (ii, vi) in v.iter().enumerate() {
                let upd = vi * s;
                r[(k + ii, j)] -= upd;
            }
        }
        // q <- q H on columns k..
        for i in 0..n {
            let mut dot = C::zero();
            for (ii, vi) in v.iter().enumerate() {
                dot += q[(i, k + ii)] * vi;
            }
            let s = dot * tau;
            for (ii, vi) in v.iter().enumerate() {
                let upd = s * vi.conj();
                q[(i, k + ii)] -= upd;
            }
        }
        for i in k + 1..n {
            r[(i, k)] = C::zero();
        }
    }
    (q, r)
}
