//! Named states and channels: Bell and maximally entangled states, isotropic
//! and Werner families, private states and their key-attacked versions.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::operator::{Cut, DensityState, HermitianOp, MeasurementPOVM, SystemLayout};
use crate::scalar::{creal, Real, C};

pub const KEY_A: &str = "A";
pub const KEY_B: &str = "B";
pub const SHIELD_A: &str = "A'";
pub const SHIELD_B: &str = "B'";

/// Which Bell state `(|00> ± |11>)/√2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellSign {
    Plus,
    Minus,
}

/// `ψ±` on the key systems `A:B`.
pub fn bell<R: Real>(sign: BellSign) -> DensityState<R> {
    let h = R::lit(0.5).sqrt();
    let s = match sign {
        BellSign::Plus => h,
        BellSign::Minus => -h,
    };
    let v = [creal(h), C::zero(), C::zero(), creal(s)];
    let layout = SystemLayout::bipartite(KEY_A, 2, KEY_B, 2).expect("static layout");
    DensityState::pure(layout, &v).expect("Bell vector is normalized")
}

/// Maximally entangled `ψ_k` on `C:D`.
pub fn max_entangled<R: Real>(k: usize) -> Result<DensityState<R>> {
    max_entangled_on("C", "D", k)
}

/// Maximally entangled `ψ_k` on factors `a:b`.
pub fn max_entangled_on<R: Real>(a: &str, b: &str, k: usize) -> Result<DensityState<R>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {k} < 2")));
    }
    let mut v = vec![C::<R>::zero(); k * k];
    for i in 0..k {
        v[i * k + i] = C::one();
    }
    DensityState::pure(SystemLayout::bipartite(a, k, b, k)?, &v)
}

/// Swap operator on `C^k ⊗ C^k`.
pub fn swap<R: Real>(k: usize) -> HermitianOp<R> {
    let n = k * k;
    let mut m = CMatrix::zeros(n, n);
    for i in 0..k {
        for j in 0..k {
            m[(i * k + j, j * k + i)] = C::one();
        }
    }
    HermitianOp::new(SystemLayout::bipartite("C", k, "D", k).expect("static layout"), m)
        .expect("swap is Hermitian")
}

/// Isotropic family parameters: local dimension and fidelity weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropicParams {
    pub d: usize,
    pub p: f64,
}

impl IsotropicParams {
    pub fn new(d: usize, p: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("isotropic dimension {d} < 2")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("fidelity weight {p} outside [0,1]")));
        }
        Ok(Self { d, p })
    }
}

/// `ι(p) = pψ + (1−p)(𝟙−ψ)/(d²−1)` on `C:D`.
pub fn isotropic<R: Real>(params: IsotropicParams) -> Result<DensityState<R>> {
    let IsotropicParams { d, p } = IsotropicParams::new(params.d, params.p)?;
    let psi = max_entangled::<R>(d)?.into_op();
    let p = R::lit(p);
    Ok(DensityState::new(isotropic_combination(&psi, p, R::one() - p, d))?)
}

/// `a ψ + b (𝟙−ψ)/(d²−1)`.
fn isotropic_combination<R: Real>(psi: &HermitianOp<R>, a: R, b: R, d: usize) -> HermitianOp<R> {
    let perp = &HermitianOp::identity(psi.layout().clone()) - psi;
    let norm = R::from_count(d * d - 1);
    &psi.scale(a) + &perp.scale(b / norm)
}

/// Projection onto the isotropic family: `Tr(Xψ)ψ + Tr(X(𝟙−ψ))ψ⊥`.
pub fn isotropic_twirl<R: Real>(x: &HermitianOp<R>) -> Result<HermitianOp<R>> {
    let dims = x.layout().dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::Dimension(format!("twirl needs two equal factors, got {}", x.layout())));
    }
    let k = dims[0];
    let labels = x.layout().labels();
    let psi = max_entangled_on::<R>(labels[0], labels[1], k)?.into_op();
    let a = x.inner(&psi);
    let b = x.trace() - a;
    Ok(isotropic_combination(&psi, a, b, k))
}

/// Normalized projectors onto the symmetric and antisymmetric subspaces of `C^k ⊗ C^k`.
pub fn sym_antisym<R: Real>(k: usize) -> Result<(DensityState<R>, DensityState<R>)> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {k} < 2")));
    }
    let f = swap::<R>(k);
    let id = HermitianOp::identity(f.layout().clone());
    let half = R::lit(0.5);
    let ps = (&id + &f).scale(half);
    let pa = (&id - &f).scale(half);
    Ok((DensityState::normalized(ps)?, DensityState::normalized(pa)?))
}

/// The two-outcome PPT measurement `(ψ + (𝟙−ψ)/(d+1), d(𝟙−ψ)/(d+1))` on `C:D`.
pub fn extremal_isotropic_povm<R: Real>(d: usize) -> Result<MeasurementPOVM<R>> {
    let psi = max_entangled::<R>(d)?.into_op();
    let perp = &HermitianOp::identity(psi.layout().clone()) - &psi;
    let dd = R::from_count(d);
    let first = &psi + &perp.scale(R::one() / (dd + R::one()));
    let second = perp.scale(dd / (dd + R::one()));
    MeasurementPOVM::new(vec![first, second])
}

/// Closed-form isotropic distinguishability values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoClosedForms {
    pub norm_dist: f64,
    pub relent_dist: f64,
    /// `None` when `p < 1/d`, where `ι(p)` is itself separable.
    pub norm_to_sep: Option<f64>,
    pub relent_to_sep: Option<f64>,
}

/// `x log₂(x/y)` with the usual conventions at zero.
fn eta(x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if y <= 0.0 {
        f64::INFINITY
    } else {
        x * (x.log2() - y.log2())
    }
}

fn check_weight(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("{name} = {x} outside [0,1]")));
    }
    Ok(())
}

pub fn iso_norm_dist(p: f64, q: f64, d: usize) -> Result<f64> {
    check_weight("p", p)?;
    check_weight("q", q)?;
    let d = d as f64;
    Ok(2.0 * d / (d + 1.0) * (p - q).abs())
}

/// Relative entropy between the extremal-measurement outcome distributions, in bits.
pub fn iso_relent_dist(p: f64, q: f64, d: usize) -> Result<f64> {
    check_weight("p", p)?;
    check_weight("q", q)?;
    let d = d as f64;
    Ok(d / (d + 1.0) * (eta(p + 1.0 / d, q + 1.0 / d) + eta(1.0 - p, 1.0 - q)))
}

pub fn iso_norm_to_sep(p: f64, d: usize) -> Result<f64> {
    check_weight("p", p)?;
    let df = d as f64;
    if p < 1.0 / df {
        return Err(Error::InvalidArgument(format!("p = {p} below the separability threshold 1/{d}")));
    }
    iso_norm_dist(p, 1.0 / df, d)
}

pub fn iso_relent_to_sep(p: f64, d: usize) -> Result<f64> {
    check_weight("p", p)?;
    let df = d as f64;
    if p < 1.0 / df {
        return Err(Error::InvalidArgument(format!("p = {p} below the separability threshold 1/{d}")));
    }
    iso_relent_dist(p, 1.0 / df, d)
}

pub fn iso_closed_forms(p: f64, q: f64, d: usize) -> Result<IsoClosedForms> {
    Ok(IsoClosedForms {
        norm_dist: iso_norm_dist(p, q, d)?,
        relent_dist: iso_relent_dist(p, q, d)?,
        norm_to_sep: iso_norm_to_sep(p, d).ok(),
        relent_to_sep: iso_relent_to_sep(p, d).ok(),
    })
}

/// Private state `½(ψ⁺⊗ρ⁺ + ψ⁻⊗ρ⁻)` on `A:A':B:B'`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrivateState<R> {
    gamma: DensityState<R>,
    shield_plus: DensityState<R>,
    shield_minus: DensityState<R>,
    d: usize,
}

fn shield_layout(layout: &SystemLayout) -> Result<SystemLayout> {
    let dims = layout.dims();
    if dims.len() != 2 {
        return Err(Error::Layout(format!("shield layout {layout} must have two factors")));
    }
    SystemLayout::bipartite(SHIELD_A, dims[0], SHIELD_B, dims[1])
}

impl<R: Real> PrivateState<R> {
    pub fn gamma(&self) -> &DensityState<R> {
        &self.gamma
    }

    pub fn shield_plus(&self) -> &DensityState<R> {
        &self.shield_plus
    }

    pub fn shield_minus(&self) -> &DensityState<R> {
        &self.shield_minus
    }

    /// Local shield dimension `|A'|`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// `ρ⁺ − ρ⁻` on `A':B'`.
    pub fn delta(&self) -> HermitianOp<R> {
        self.shield_plus.op() - self.shield_minus.op()
    }

    /// `ρ̄ = (ρ⁺ + ρ⁻)/2`.
    pub fn shield_average(&self) -> DensityState<R> {
        self.shield_plus.mix(R::lit(0.5), &self.shield_minus).expect("shields share a layout")
    }

    /// Key-attacked state `¼(ψ⁺+ψ⁻)⊗(ρ⁺+ρ⁻)`.
    pub fn key_attacked(&self) -> DensityState<R> {
        key_attack_map(&self.gamma).expect("private state has key systems")
    }

    /// `γ − γ̂`.
    pub fn gamma_minus_attacked(&self) -> HermitianOp<R> {
        self.gamma.op() - self.key_attacked().op()
    }

    /// The cut `AA':BB'`.
    pub fn cut() -> Cut {
        Cut::new([KEY_A, SHIELD_A], [KEY_B, SHIELD_B])
    }

    /// The cut `A':B'` of the shield system.
    pub fn shield_cut() -> Cut {
        Cut::new([SHIELD_A], [SHIELD_B])
    }

    /// Whether the shields are complementary: `ρ⁺ + ρ⁻ = 2𝟙/|A'B'|`.
    pub fn has_complementary_shields(&self) -> bool {
        let n = self.shield_plus.dim();
        let sum = self.shield_plus.op() + self.shield_minus.op();
        let target = CMatrix::<R>::identity(n).scale(R::lit(2.0) / R::from_count(n));
        (sum.matrix() - &target).max_abs() <= R::tol(1e-10)
    }
}

/// Builds `½(ψ⁺⊗ρ⁺ + ψ⁻⊗ρ⁻)`; the shields must be orthogonal states on one two-factor layout.
pub fn private_state<R: Real>(
    shield_plus: DensityState<R>,
    shield_minus: DensityState<R>,
) -> Result<PrivateState<R>> {
    if shield_plus.layout().dims() != shield_minus.layout().dims() {
        return Err(Error::Dimension("shields live on different spaces".into()));
    }
    let layout = shield_layout(shield_plus.layout())?;
    let shield_plus = shield_plus.relabel(layout.clone())?;
    let shield_minus = shield_minus.relabel(layout)?;
    let overlap = shield_plus.inner(&shield_minus);
    if !(overlap <= R::tol(1e-8)) {
        return Err(Error::Precondition(format!("shields overlap: Tr(ρ⁺ρ⁻) = {overlap}")));
    }
    let plus = bell::<R>(BellSign::Plus).tensor(&shield_plus)?;
    let minus = bell::<R>(BellSign::Minus).tensor(&shield_minus)?;
    let half = R::lit(0.5);
    let gamma = (&plus.op().scale(half) + &minus.op().scale(half))
        .permute(&[KEY_A, SHIELD_A, KEY_B, SHIELD_B])?;
    let d = shield_plus.layout().dims()[0];
    Ok(PrivateState { gamma: DensityState::new(gamma)?, shield_plus, shield_minus, d })
}

/// Key-attacked state of a private state.
pub fn key_attacked<R: Real>(ps: &PrivateState<R>) -> DensityState<R> {
    ps.key_attacked()
}

/// Dephases the key systems `A`, `B` in the computational basis.
pub fn key_attack_map<R: Real>(state: &DensityState<R>) -> Result<DensityState<R>> {
    let layout = state.layout();
    let ia = layout.index_of(KEY_A)?;
    let ib = layout.index_of(KEY_B)?;
    let dims = layout.dims();
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let key_digits = |idx: usize| ((idx / strides[ia]) % dims[ia], (idx / strides[ib]) % dims[ib]);
    let n = state.dim();
    let m = state.matrix();
    let out = CMatrix::from_fn(n, n, |i, j| if key_digits(i) == key_digits(j) { m[(i, j)] } else { C::zero() });
    DensityState::new(HermitianOp::new(layout.clone(), out)?)
}
