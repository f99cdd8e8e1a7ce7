use super::sep::{sep_overlap_bracket, BracketOptions, DpsLevel};
use crate::error::{Error, Result};
use crate::operator::HermitianOp;
use crate::scalar::Real;
use crate::zoo::PrivateState;

/// `ε* = d²·sup_τ |Tr(τΔ)|` (upper endpoint of the separable-overlap bracket),
/// for which `γ ≤_SEP (1+ε*)γ̂` holds. Requires complementary shields.
pub fn sep_order_epsilon<R: Real>(ps: &PrivateState<R>, level: DpsLevel, opts: &BracketOptions<R>) -> Result<R> {
    if !ps.has_complementary_shields() {
        return Err(Error::Precondition("shields are not complementary".into()));
    }
    let overlap = sep_overlap_bracket(&ps.delta(), &PrivateState::<R>::shield_cut(), level, opts)?;
    let d = R::from_count(ps.d());
    Ok(d * d * overlap.upper)
}

/// `Tr((M⊗N)[(1+ε)γ̂ − γ])` for a product operator with `m` on `AA'` and `n` on `BB'`.
///
/// Non-negative values on every `M, N ⪰ 0` is the block criterion behind `γ ≤_SEP (1+ε)γ̂`.
pub fn sep_order_slack<R: Real>(
    ps: &PrivateState<R>,
    epsilon: R,
    m: &HermitianOp<R>,
    n: &HermitianOp<R>,
) -> Result<R> {
    let gamma = ps.gamma();
    let hat = ps.key_attacked();
    let diff = &hat.op().scale(R::one() + epsilon) - gamma.op();
    let labels: Vec<String> = gamma.layout().labels().into_iter().map(String::from).collect();
    let product = m.tensor(n)?.permute(&labels)?;
    Ok(product.inner(&diff))
}
