//! Index arithmetic for operators on tensor products of factors.
//!
//! Factor 0 is the most significant digit of a row-major basis index.

use super::CMatrix;
use crate::scalar::Real;

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// For each basis index, the part of its offset contributed by the masked factors.
fn masked_offsets(dims: &[usize], mask: &[bool]) -> Vec<usize> {
    let st = strides(dims);
    let total: usize = dims.iter().product();
    (0..total)
        .map(|idx| {
            let mut off = 0;
            for (f, (&d, &s)) in dims.iter().zip(&st).enumerate() {
                if mask[f] {
                    off += ((idx / s) % d) * s;
                }
            }
            off
        })
        .collect()
}

/// Transposes the factors selected by `mask`.
pub fn partial_transpose<R: Real>(m: &CMatrix<R>, dims: &[usize], mask: &[bool]) -> CMatrix<R> {
    let n = m.rows();
    debug_assert_eq!(n, dims.iter().product::<usize>());
    let sel = masked_offsets(dims, mask);
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let r2 = r - sel[r] + sel[c];
            let c2 = c - sel[c] + sel[r];
            out[(r2, c2)] = m[(r, c)];
        }
    }
    out
}

/// Traces out the factors selected by `mask`.
pub fn partial_trace<R: Real>(m: &CMatrix<R>, dims: &[usize], mask: &[bool]) -> CMatrix<R> {
    let st = strides(dims);
    let keep: Vec<usize> = (0..dims.len()).filter(|&f| !mask[f]).collect();
    let gone: Vec<usize> = (0..dims.len()).filter(|&f| mask[f]).collect();
    let offsets = |factors: &[usize]| -> Vec<usize> {
        let sub: Vec<usize> = factors.iter().map(|&f| dims[f]).collect();
        let sub_st = strides(&sub);
        let count: usize = sub.iter().product();
        (0..count)
            .map(|idx| {
                factors
                    .iter()
                    .enumerate()
                    .map(|(k, &f)| ((idx / sub_st[k]) % sub[k]) * st[f])
                    .sum()
            })
            .collect()
    };
    let ko = offsets(&keep);
    let to = offsets(&gone);
    let nk = ko.len();
    let mut out = CMatrix::zeros(nk, nk);
    for a in 0..nk {
        for b in 0..nk {
            let mut acc = num_complex::Complex::new(R::zero(), R::zero());
            for &t in &to {
                acc += m[(ko[a] + t, ko[b] + t)];
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// Adjoint of `partial_trace`: `x` on the kept factors becomes `x ⊗ 𝟙` on the masked ones,
/// laid out in the original factor order.
pub fn partial_trace_adjoint<R: Real>(x: &CMatrix<R>, dims: &[usize], mask: &[bool]) -> CMatrix<R> {
    let st = strides(dims);
    let total: usize = dims.iter().product();
    let keep: Vec<usize> = (0..dims.len()).filter(|&f| !mask[f]).collect();
    let sub: Vec<usize> = keep.iter().map(|&f| dims[f]).collect();
    let sub_st = strides(&sub);
    // Index in the kept space and the masked offset for every full index.
    let mut kept_idx = vec![0usize; total];
    let sel = masked_offsets(dims, mask);
    for (idx, slot) in kept_idx.iter_mut().enumerate() {
        *slot = keep
            .iter()
            .enumerate()
            .map(|(k, &f)| ((idx / st[f]) % dims[f]) * sub_st[k])
            .sum();
    }
    let mut out = CMatrix::zeros(total, total);
    for r in 0..total {
        for c in 0..total {
            if sel[r] == sel[c] {
                out[(r, c)] = x[(kept_idx[r], kept_idx[c])];
            }
        }
    }
    out
}

/// Reorders factors: output factor `i` is input factor `order[i]`.
pub fn permute_factors<R: Real>(m: &CMatrix<R>, dims: &[usize], order: &[usize]) -> CMatrix<R> {
    let map = permutation_map(dims, order);
    let n = map.len();
    CMatrix::from_fn(n, n, |i, j| m[(map[i], map[j])])
}

/// `map[new_index] = old_index` for the factor reordering `order`.
pub fn permutation_map(dims: &[usize], order: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let new_dims: Vec<usize> = order.iter().map(|&f| dims[f]).collect();
    let new_st = strides(&new_dims);
    let total: usize = dims.iter().product();
    (0..total)
        .map(|idx| {
            order
                .iter()
                .enumerate()
                .map(|(k, &f)| ((idx / new_st[k]) % new_dims[k]) * st[f])
                .sum()
        })
        .collect()
}
