//! Brackets for the SEP-restricted norm and the separable overlap
//! `sup_{τ separable} |Tr(τX)|`.
//!
//! Upper endpoints come from PPT (level 1) or PPT plus one bosonic symmetric
//! extension of the right party (level 2). Lower endpoints are explicit
//! separable measurements or product states found by alternating optimization.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::ppt::ppt_norm_certified;
use crate::ensembles::ginibre;
use crate::error::{Error, Result};
use crate::linalg::{eigh, CMatrix};
use crate::operator::{Cut, HermitianOp, MeasurementPOVM, SystemLayout};
use crate::scalar::{creal, Real, C};
use crate::solver::{solve, LinMap, SolverSettings, SpectrahedronProgram};

/// Level of the symmetric-extension relaxation of the separable cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DpsLevel {
    /// PPT cone.
    One,
    /// PPT on every cut of a two-copy bosonic extension of the right party.
    Two,
}

impl DpsLevel {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(Error::InvalidArgument(format!("unsupported relaxation level {n}"))),
        }
    }

    pub fn number(self) -> u32 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }

    /// Level 2 when its extension `d_a·d_b²` fits under `cap`, otherwise level 1.
    pub fn capped(self, da: usize, db: usize, cap: usize) -> Self {
        match self {
            Self::Two if da * db * db > cap => Self::One,
            other => other,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BracketOptions<R> {
    pub settings: SolverSettings<R>,
    pub restarts: usize,
    pub sweeps: usize,
    /// Alternating optimization stops once a sweep improves by less than this.
    pub improvement_tol: R,
    pub seed: u64,
    /// Largest extension dimension `d_A·d_B²` accepted at level 2.
    pub extension_cap: usize,
}

impl<R: Real> Default for BracketOptions<R> {
    fn default() -> Self {
        Self {
            settings: SolverSettings::default(),
            restarts: 8,
            sweeps: 200,
            improvement_tol: R::tol(1e-8),
            seed: 0x5eed,
            extension_cap: 128,
        }
    }
}

/// Product vector `|a>⊗|b>` across a cut.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductVector<R> {
    pub left: Vec<C<R>>,
    pub right: Vec<C<R>>,
}

#[derive(Clone, Debug)]
pub enum LowerCertificate<R> {
    /// Separable two-outcome measurement attaining the lower endpoint.
    Measurement(MeasurementPOVM<R>),
    /// Product states attaining the lower endpoint.
    ProductStates(Vec<ProductVector<R>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct UpperCertificate<R> {
    pub level: DpsLevel,
    pub iterations: usize,
    pub gap: R,
}

/// Interval `[lower, upper]` with the objects that certify each end.
#[derive(Clone, Debug)]
pub struct NormBracket<R> {
    pub lower: R,
    pub upper: R,
    pub lower_certificate: LowerCertificate<R>,
    pub upper_certificate: UpperCertificate<R>,
}

/// `x` reordered so that the left party's factors come first.
struct Bipartite<R> {
    m: CMatrix<R>,
    da: usize,
    db: usize,
    grouped: SystemLayout,
    original: Vec<String>,
}

impl<R: Real> Bipartite<R> {
    fn new(x: &HermitianOp<R>, cut: &Cut) -> Result<Self> {
        let (da, db) = cut.party_dims(x.layout())?;
        let order: Vec<&str> = cut.left.iter().chain(&cut.right).map(String::as_str).collect();
        let grouped = x.permute(&order)?;
        Ok(Self {
            m: grouped.matrix().clone(),
            da,
            db,
            grouped: grouped.layout().clone(),
            original: x.layout().labels().into_iter().map(String::from).collect(),
        })
    }

    /// Operator on the grouped layout mapped back to the original factor order.
    fn to_original(&self, m: CMatrix<R>) -> Result<HermitianOp<R>> {
        HermitianOp::from_parts(self.grouped.clone(), m).permute(&self.original)
    }

    /// `Tr_B((𝟙 ⊗ b) X)`.
    fn contract_right(&self, b: &CMatrix<R>) -> CMatrix<R> {
        let (da, db) = (self.da, self.db);
        let mut out = CMatrix::zeros(da, da);
        for a in 0..da {
            for a2 in 0..da {
                let mut acc = C::zero();
                for j in 0..db {
                    for j2 in 0..db {
                        acc += self.m[(a * db + j, a2 * db + j2)] * b[(j2, j)];
                    }
                }
                out[(a, a2)] = acc;
            }
        }
        out
    }

    /// `Tr_A((a ⊗ 𝟙) X)`.
    fn contract_left(&self, a: &CMatrix<R>) -> CMatrix<R> {
        let (da, db) = (self.da, self.db);
        let mut out = CMatrix::zeros(db, db);
        for j in 0..db {
            for j2 in 0..db {
                let mut acc = C::zero();
                for i in 0..da {
                    for i2 in 0..da {
                        acc += self.m[(i * db + j, i2 * db + j2)] * a[(i2, i)];
                    }
                }
                out[(j, j2)] = acc;
            }
        }
        out
    }
}

fn sign_of<R: Real>(m: &CMatrix<R>) -> Result<(CMatrix<R>, R)> {
    let (w, v) = eigh(&m.hermitian_part())?;
    let norm = w.iter().map(|x| x.abs()).sum();
    let s = crate::linalg::spectral_map(&w, &v, |x| if x >= R::zero() { R::one() } else { -R::one() });
    Ok((s, norm))
}

fn top_eigvec<R: Real>(m: &CMatrix<R>) -> Result<(R, Vec<C<R>>)> {
    let (w, v) = eigh(&m.hermitian_part())?;
    let k = w.len() - 1;
    Ok((w[k], v.column(k)))
}

fn random_reflection<R: Real>(n: usize, rng: &mut ChaCha20Rng) -> Result<CMatrix<R>> {
    let g = ginibre::<R>(n, n, rng).hermitian_part();
    Ok(sign_of(&g)?.0)
}

fn random_unit<R: Real>(n: usize, rng: &mut ChaCha20Rng) -> Vec<C<R>> {
    let g = ginibre::<R>(n, 1, rng);
    let norm = g.frobenius_norm();
    g.data().iter().map(|z| z / creal(norm)).collect()
}

/// Best product reflection `A ⊗ B` by alternating sign updates.
fn reflection_seesaw<R: Real>(
    x: &Bipartite<R>,
    opts: &BracketOptions<R>,
    rng: &mut ChaCha20Rng,
) -> Result<(R, CMatrix<R>, CMatrix<R>)> {
    let mut b = random_reflection::<R>(x.db, rng)?;
    let mut a = CMatrix::identity(x.da);
    let mut value = R::neg_infinity();
    for _ in 0..opts.sweeps {
        let (a_new, _) = sign_of(&x.contract_right(&b))?;
        a = a_new;
        let (b_new, v) = sign_of(&x.contract_left(&a))?;
        b = b_new;
        let improved = v - value;
        value = v;
        if improved < opts.improvement_tol {
            break;
        }
    }
    Ok((value, a, b))
}

/// `Σ_i P_i ⊗ B_i` with `P_i` the eigenprojectors of `basis_of` and `B_i = sign(Tr_A((P_i⊗𝟙)X))`.
fn one_way_refinement<R: Real>(x: &Bipartite<R>, basis_of: &CMatrix<R>) -> Result<(R, CMatrix<R>)> {
    let (_, vecs) = eigh(&basis_of.hermitian_part())?;
    let mut t = CMatrix::zeros(x.da * x.db, x.da * x.db);
    let mut value = R::zero();
    for i in 0..x.da {
        let p = CMatrix::outer(&vecs.column(i));
        let (bi, v) = sign_of(&x.contract_left(&p))?;
        value += v;
        t += &p.kron(&bi);
    }
    Ok((value, t))
}

/// Best pure product overlap `max ⟨ab|X|ab⟩` by alternating top-eigenvector updates.
fn product_seesaw<R: Real>(
    x: &Bipartite<R>,
    opts: &BracketOptions<R>,
    rng: &mut ChaCha20Rng,
) -> Result<(R, ProductVector<R>)> {
    let mut b = random_unit::<R>(x.db, rng);
    let mut a = vec![C::zero(); x.da];
    let mut value = R::neg_infinity();
    for _ in 0..opts.sweeps {
        let (_, a_new) = top_eigvec(&x.contract_right(&CMatrix::outer(&b)))?;
        a = a_new;
        let (v, b_new) = top_eigvec(&x.contract_left(&CMatrix::outer(&a)))?;
        b = b_new;
        let improved = v - value;
        value = v;
        if improved < opts.improvement_tol {
            break;
        }
    }
    Ok((value, ProductVector { left: a, right: b }))
}

fn negated<R: Real>(x: &Bipartite<R>) -> Bipartite<R> {
    Bipartite { m: x.m.scale(-R::one()), da: x.da, db: x.db, grouped: x.grouped.clone(), original: x.original.clone() }
}

/// Best separable lower bound on the norm: product reflections, one-way
/// refinements of them, and `±(2|ab><ab| − 𝟙)`.
fn sep_norm_lower<R: Real>(x: &Bipartite<R>, opts: &BracketOptions<R>) -> Result<(R, CMatrix<R>)> {
    let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
    let n = x.da * x.db;
    let tr = x.m.trace().re;
    let mut best = (tr.abs(), CMatrix::identity(n).scale(if tr >= R::zero() { R::one() } else { -R::one() }));
    let consider = |value: R, t: CMatrix<R>, best: &mut (R, CMatrix<R>)| {
        if value > best.0 {
            *best = (value, t);
        }
    };
    let neg = negated(x);
    for _ in 0..opts.restarts.max(1) {
        let (v, a, b) = reflection_seesaw(x, opts, &mut rng)?;
        consider(v, a.kron(&b), &mut best);
        let (v, t) = one_way_refinement(x, &x.contract_right(&b))?;
        consider(v, t, &mut best);
        // The same refinement with the roles of the parties swapped.
        let swapped = Bipartite {
            m: crate::linalg::tensor::permute_factors(&x.m, &[x.da, x.db], &[1, 0]),
            da: x.db,
            db: x.da,
            grouped: x.grouped.clone(),
            original: x.original.clone(),
        };
        let (v, t) = one_way_refinement(&swapped, &x.contract_left(&a))?;
        consider(v, crate::linalg::tensor::permute_factors(&t, &[x.db, x.da], &[1, 0]), &mut best);

        for (sign, target) in [(R::one(), x), (-R::one(), &neg)] {
            let (ov, pv) = product_seesaw(target, opts, &mut rng)?;
            let proj = CMatrix::outer(&pv.left).kron(&CMatrix::outer(&pv.right));
            let t = &proj.scale(R::lit(2.0)) - &CMatrix::identity(n);
            // Tr(tX) for t = 2P − 𝟙, or its negation.
            let val = sign * (R::lit(2.0) * ov * sign - tr);
            let (val, t) = if val >= R::zero() { (val, t.scale(sign)) } else { (-val, t.scale(-sign)) };
            consider(val, t, &mut best);
        }
    }
    // Recompute exactly from the chosen operator.
    let value = best.1.trace_product(&x.m);
    Ok((value, best.1))
}

/// Isometry from `A ⊗ Sym²(B)` into `A ⊗ B ⊗ B`.
fn symmetric_isometry<R: Real>(da: usize, db: usize) -> CMatrix<R> {
    let s = db * (db + 1) / 2;
    let mut sym = CMatrix::<R>::zeros(db * db, s);
    let h = R::lit(0.5).sqrt();
    let mut col = 0;
    for i in 0..db {
        for j in i..db {
            if i == j {
                sym[(i * db + i, col)] = C::one();
            } else {
                sym[(i * db + j, col)] = creal(h);
                sym[(j * db + i, col)] = creal(h);
            }
            col += 1;
        }
    }
    CMatrix::<R>::identity(da).kron(&sym)
}

struct Extension<R> {
    v: CMatrix<R>,
    dims: Vec<usize>,
}

impl<R: Real> Extension<R> {
    fn new(da: usize, db: usize, cap: usize) -> Result<Self> {
        let size = da * db * db;
        if size > cap {
            return Err(Error::TooLarge(format!(
                "symmetric extension of dimension {size} exceeds the cap {cap}"
            )));
        }
        Ok(Self { v: symmetric_isometry(da, db), dims: vec![da, db, db] })
    }

    fn w_dim(&self) -> usize {
        self.v.cols()
    }

    /// `W ⪰ 0` plus positivity of the partial transposes on `B''` and `B'B''`.
    fn add_cone(&self, p: &mut SpectrahedronProgram<R>, w: usize) {
        p.add_nonneg(w);
        let n = self.v.rows();
        for mask in [vec![false, false, true], vec![false, true, true]] {
            let map = LinMap::Compose(vec![
                LinMap::Conjugate(self.v.clone()),
                LinMap::partial_transpose(self.dims.clone(), mask),
            ]);
            p.add_psd(w, map, CMatrix::zeros(n, n));
        }
    }

    /// `W ↦ Tr_{B''}(V W V†)`.
    fn reduce(&self) -> LinMap<R> {
        LinMap::Compose(vec![
            LinMap::Conjugate(self.v.clone()),
            LinMap::partial_trace(self.dims.clone(), vec![false, false, true]),
        ])
    }

    /// `V†(X ⊗ 𝟙)V`, so that `Tr(X·reduce(W)) = Tr(coeff·W)`.
    fn lift_objective(&self, x: &CMatrix<R>) -> CMatrix<R> {
        let db = self.dims[2];
        let lifted = x.kron(&CMatrix::identity(db));
        self.v.adjoint().matmul(&lifted).matmul(&self.v)
    }
}

/// SEP-norm bracket of `x` across `cut`.
pub fn sep_norm_bracket<R: Real>(
    x: &HermitianOp<R>,
    cut: &Cut,
    level: DpsLevel,
    opts: &BracketOptions<R>,
) -> Result<NormBracket<R>> {
    let bip = Bipartite::new(x, cut)?;
    let (upper, upper_certificate) = match level {
        DpsLevel::One => {
            let r = ppt_norm_certified(x, cut, &opts.settings)?;
            (r.value, UpperCertificate { level, iterations: r.iterations, gap: r.gap })
        }
        DpsLevel::Two => {
            let ext = Extension::new(bip.da, bip.db, opts.extension_cap)?;
            let mut p = SpectrahedronProgram::maximize();
            let wm = p.add_variable("M_ext", ext.w_dim());
            let wn = p.add_variable("N_ext", ext.w_dim());
            let c = ext.lift_objective(&bip.m);
            p.add_objective(wm, c.clone());
            p.add_objective(wn, c.scale(-R::one()));
            ext.add_cone(&mut p, wm);
            ext.add_cone(&mut p, wn);
            p.add_equality(vec![(wm, ext.reduce()), (wn, ext.reduce())], CMatrix::identity(bip.da * bip.db));
            let r = solve(&p, &opts.settings)?.require_optimal()?;
            (r.primal_value, UpperCertificate { level, iterations: r.iterations, gap: r.gap })
        }
    };
    let (lower, t) = sep_norm_lower(&bip, opts)?;
    let n = bip.da * bip.db;
    let m = (&CMatrix::identity(n) + &t).scale(R::lit(0.5));
    let povm = MeasurementPOVM::binary(bip.to_original(m)?)?;
    Ok(NormBracket { lower, upper, lower_certificate: LowerCertificate::Measurement(povm), upper_certificate })
}

/// `max Tr(τX)` over the level-`level` relaxation of separable states.
fn overlap_upper_one_sided<R: Real>(
    x: &HermitianOp<R>,
    bip: &Bipartite<R>,
    cut: &Cut,
    level: DpsLevel,
    opts: &BracketOptions<R>,
) -> Result<(R, usize, R)> {
    let mut p = SpectrahedronProgram::maximize();
    match level {
        DpsLevel::One => {
            let n = x.dim();
            let tau = p.add_variable("tau", n);
            p.add_objective(tau, x.matrix().clone());
            p.add_nonneg(tau);
            let mask = cut.right_mask(x.layout())?;
            p.add_psd(tau, LinMap::partial_transpose(x.layout().dims(), mask), CMatrix::zeros(n, n));
            p.add_scalar_equality(tau, CMatrix::identity(n), R::one());
        }
        DpsLevel::Two => {
            let ext = Extension::new(bip.da, bip.db, opts.extension_cap)?;
            let w = p.add_variable("tau_ext", ext.w_dim());
            p.add_objective(w, ext.lift_objective(&bip.m));
            ext.add_cone(&mut p, w);
            p.add_scalar_equality(w, CMatrix::identity(ext.w_dim()), R::one());
        }
    }
    let r = solve(&p, &opts.settings)?.require_optimal()?;
    Ok((r.primal_value, r.iterations, r.gap))
}

/// Bracket on `sup_{τ separable} |Tr(τx)|`.
pub fn sep_overlap_bracket<R: Real>(
    x: &HermitianOp<R>,
    cut: &Cut,
    level: DpsLevel,
    opts: &BracketOptions<R>,
) -> Result<NormBracket<R>> {
    let bip = Bipartite::new(x, cut)?;
    let neg_op = x.scale(-R::one());
    let neg = negated(&bip);
    let (up_pos, it1, gap1) = overlap_upper_one_sided(x, &bip, cut, level, opts)?;
    let (up_neg, it2, gap2) = overlap_upper_one_sided(&neg_op, &neg, cut, level, opts)?;
    let upper = up_pos.max(up_neg);

    let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
    let mut best: Option<(R, ProductVector<R>)> = None;
    for _ in 0..opts.restarts.max(1) {
        for target in [&bip, &neg] {
            let (v, pv) = product_seesaw(target, opts, &mut rng)?;
            if best.as_ref().map_or(true, |(b, _)| v > *b) {
                best = Some((v, pv));
            }
        }
    }
    let (lower, pv) = best.expect("at least one restart");
    let lower = lower.max(R::zero());
    Ok(NormBracket {
        lower,
        upper,
        lower_certificate: LowerCertificate::ProductStates(vec![pv]),
        upper_certificate: UpperCertificate { level, iterations: it1 + it2, gap: gap1.max(gap2) },
    })
}
