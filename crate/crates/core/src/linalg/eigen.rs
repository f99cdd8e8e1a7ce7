//! Hermitian eigensolver: complex Householder tridiagonalization followed by
//! implicit QL iterations on the (phase-rotated) real tridiagonal matrix.

use num_traits::{One, Zero};

use super::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{creal, Real, C};

const MAX_QL_ITER: usize = 64;

/// Eigen-decomposition `a = V diag(w) V^dagger`, eigenvalues ascending.
///
/// Only Hermitian input is meaningful; the strictly upper triangle is never
/// trusted beyond being the conjugate of the lower one.
pub fn eigh<R: Real>(a: &CMatrix<R>) -> Result<(Vec<R>, CMatrix<R>)> {
    let (w, z) = decompose(a, true)?;
    Ok((w, z.expect("vectors requested")))
}

/// Eigenvalues only, ascending.
pub fn eigvalsh<R: Real>(a: &CMatrix<R>) -> Result<Vec<R>> {
    decompose(a, false).map(|(w, _)| w)
}

struct Reflector<R> {
    start: usize,
    v: Vec<C<R>>,
    tau: R,
}

fn decompose<R: Real>(a: &CMatrix<R>, want_vectors: bool) -> Result<(Vec<R>, Option<CMatrix<R>>)> {
    assert!(a.is_square(), "eigh needs a square matrix");
    let n = a.rows();
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(|| CMatrix::zeros(0, 0))));
    }
    let mut b = a.hermitian_part();
    let reflectors = tridiagonalize(&mut b);

    let mut d: Vec<R> = (0..n).map(|i| b[(i, i)].re).collect();
    let mut e = vec![R::zero(); n];
    let mut phases = vec![C::<R>::one(); n];
    for i in 0..n.saturating_sub(1) {
        let off = b[(i + 1, i)];
        let mag = off.norm();
        e[i] = mag;
        phases[i + 1] = if mag > R::zero() { phases[i] * (off / creal(mag)) } else { phases[i] };
    }

    let mut z = if want_vectors {
        let mut q = CMatrix::<R>::identity(n);
        for r in reflectors.iter().rev() {
            apply_reflector_left(&mut q, r);
        }
        for i in 0..n {
            for j in 0..n {
                let v = q[(i, j)] * phases[j];
                q[(i, j)] = v;
            }
        }
        Some(q)
    } else {
        None
    };

    tql(&mut d, &mut e, z.as_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
    let w: Vec<R> = order.iter().map(|&i| d[i]).collect();
    let z = z.map(|z| CMatrix::from_fn(n, n, |i, j| z[(i, order[j])]));
    Ok((w, z))
}

/// Reduces `b` in place to Hermitian tridiagonal form, returning the reflectors.
fn tridiagonalize<R: Real>(b: &mut CMatrix<R>) -> Vec<Reflector<R>> {
    let n = b.rows();
    let mut out = Vec::new();
    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let m = n - start;
        let x: Vec<C<R>> = (start..n).map(|i| b[(i, k)]).collect();
        let xnorm = x.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        let tail = x[1..].iter().fold(R::zero(), |acc, z| acc + z.norm_sqr());
        if xnorm == R::zero() || tail <= R::epsilon() * R::epsilon() * xnorm * xnorm {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() > R::zero() { x0 / creal(x0.norm()) } else { C::one() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2 = v.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr());
        let tau = R::lit(2.0) / vnorm2;

        // p = tau * S v on the trailing block S.
        let mut p = vec![C::<R>::zero(); m];
        for (ii, pi) in p.iter_mut().enumerate() {
            let row = b.row(start + ii);
            let mut acc = C::zero();
            for (jj, vj) in v.iter().enumerate() {
                acc += row[start + jj] * vj;
            }
            *pi = acc * tau;
        }
        let vp = v.iter().zip(&p).fold(C::<R>::zero(), |acc, (vi, pi)| acc + vi.conj() * pi);
        let kfac = vp * (tau * R::lit(0.5));
        let w: Vec<C<R>> = p.iter().zip(&v).map(|(pi, vi)| pi - kfac * vi).collect();
        for ii in 0..m {
            for jj in 0..m {
                let upd = v[ii] * w[jj].conj() + w[ii] * v[jj].conj();
                b[(start + ii, start + jj)] -= upd;
            }
        }
        for i in start..n {
            b[(i, k)] = C::zero();
            b[(k, i)] = C::zero();
        }
        b[(start, k)] = alpha;
        b[(k, start)] = alpha.conj();
        out.push(Reflector { start, v, tau });
    }
    out
}

/// `q <- H q` with `H = I - tau v v^dagger` acting on rows `start..`.
fn apply_reflector_left<R: Real>(q: &mut CMatrix<R>, r: &Reflector<R>) {
    let n = q.cols();
    let mut proj = vec![C::<R>::zero(); n];
    for (ii, vi) in r.v.iter().enumerate() {
        let row = q.row(r.start + ii);
        let vc = vi.conj();
        for (pj, qj) in proj.iter_mut().zip(row) {
            *pj += vc * qj;
        }
    }
    for (ii, vi) in r.v.iter().enumerate() {
        let s = vi * r.tau;
        for j in 0..n {
            let upd = s * proj[j];
            q[(r.start + ii, j)] -= upd;
        }
    }
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix.
///
/// `e[i]` couples `d[i]` and `d[i+1]`; rotations are applied to the columns of `z`.
fn tql<R: Real>(d: &mut [R], e: &mut [R], mut z: Option<&mut CMatrix<R>>) -> Result<()> {
    let n = d.len();
    let two = R::lit(2.0);
    // Absolute deflation scale; the neighbour test alone stalls on clusters of zero eigenvalues.
    let norm = (0..n).fold(R::zero(), |acc, i| acc.max(d[i].abs() + e[i].abs()));
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = (d[m].abs() + d[m + 1].abs()).max(norm);
                if e[m].abs() <= R::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITER {
                return Err(Error::EigenNoConvergence { residual: e[l].abs().as_f64() });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(R::one());
            g = d[m] - d[l] + e[l] / (g + if g >= R::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (R::one(), R::one(), R::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == R::zero() {
                    d[i + 1] -= p;
                    e[m] = R::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    rotate_columns(z, i, s, c);
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = R::zero();
        }
    }
    Ok(())
}

fn rotate_columns<R: Real>(z: &mut CMatrix<R>, i: usize, s: R, c: R) {
    let n = z.rows();
    let cols = z.cols();
    let data = z.data_mut();
    for k in 0..n {
        let base = k * cols;
        let f = data[base + i + 1];
        let zi = data[base + i];
        data[base + i + 1] = zi * s + f * c;
        data[base + i] = zi * c - f * s;
    }
}

/// Applies `f` to the spectrum: `V diag(f(w)) V^dagger`.
pub fn spectral_map<R: Real>(w: &[R], v: &CMatrix<R>, f: impl Fn(R) -> R) -> CMatrix<R> {
    let n = w.len();
    let fw: Vec<R> = w.iter().map(|&x| f(x)).collect();
    let scaled = CMatrix::from_fn(n, n, |i, j| v[(i, j)] * fw[j]);
    scaled.matmul_adj(v)
}
