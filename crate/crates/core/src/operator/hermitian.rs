use std::ops::{Add, Deref, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};

use super::layout::SystemLayout;
use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh, spectral_map, tensor, CMatrix};
use crate::scalar::{Real, C};

/// Largest Hermiticity defect accepted by constructors.
pub const MAX_DEFECT: f64 = 1e-8;
/// Trace and positivity slack for density states.
pub const STATE_TOL: f64 = 1e-10;

/// Hermitian operator on a labelled tensor product.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOp<R> {
    layout: SystemLayout,
    m: CMatrix<R>,
    defect: R,
}

/// Schatten norm index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schatten {
    One,
    Two,
    Inf,
}

impl FromStr for Schatten {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Self::One),
            "2" => Ok(Self::Two),
            "inf" | "∞" => Ok(Self::Inf),
            _ => Err(Error::InvalidArgument(format!("unknown Schatten index `{s}`"))),
        }
    }
}

impl<R: Real> HermitianOp<R> {
    /// Symmetrizes `m` and records the defect; fails if it exceeds [`MAX_DEFECT`].
    pub fn new(layout: SystemLayout, m: CMatrix<R>) -> Result<Self> {
        let n = layout.total_dim();
        if !m.is_square() || m.rows() != n {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but layout {layout} has dimension {n}",
                m.rows(),
                m.cols()
            )));
        }
        let defect = m.hermiticity_defect();
        if !(defect <= R::tol(MAX_DEFECT)) {
            return Err(Error::NotHermitian { defect: defect.as_f64() });
        }
        Ok(Self { layout, m: m.hermitian_part(), defect })
    }

    /// For results that are Hermitian by construction; symmetrizes without checking.
    pub(crate) fn from_parts(layout: SystemLayout, m: CMatrix<R>) -> Self {
        debug_assert_eq!(layout.total_dim(), m.rows());
        let defect = m.hermiticity_defect();
        Self { layout, m: m.hermitian_part(), defect }
    }

    pub fn zeros(layout: SystemLayout) -> Self {
        let n = layout.total_dim();
        Self { layout, m: CMatrix::zeros(n, n), defect: R::zero() }
    }

    pub fn identity(layout: SystemLayout) -> Self {
        let n = layout.total_dim();
        Self { layout, m: CMatrix::identity(n), defect: R::zero() }
    }

    pub fn from_real_diag(layout: SystemLayout, diag: &[R]) -> Result<Self> {
        Self::new(layout, CMatrix::from_real_diag(diag))
    }

    /// Rank-one `|v><v|`.
    pub fn projector(layout: SystemLayout, v: &[C<R>]) -> Result<Self> {
        Self::new(layout, CMatrix::outer(v))
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix<R> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<R> {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    /// Hermiticity defect of the input this operator was built from.
    pub fn defect(&self) -> R {
        self.defect
    }

    pub fn trace(&self) -> R {
        self.m.trace().re
    }

    /// `Tr(self * other)`, real for Hermitian arguments.
    pub fn inner(&self, other: &Self) -> R {
        self.m.hs_inner(&other.m)
    }

    pub fn scale(&self, s: R) -> Self {
        Self { layout: self.layout.clone(), m: self.m.scale(s), defect: self.defect }
    }

    /// Same matrix under a different layout with equal total dimension.
    pub fn relabel(&self, layout: SystemLayout) -> Result<Self> {
        if layout.total_dim() != self.dim() {
            return Err(Error::Dimension(format!("cannot relabel {} as {layout}", self.layout)));
        }
        Ok(Self { layout, m: self.m.clone(), defect: self.defect })
    }

    pub fn same_layout(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::Dimension(format!("layouts {} and {} differ", self.layout, other.layout)));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_layout(other)?;
        Ok(Self::from_parts(self.layout.clone(), &self.m + &other.m))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_layout(other)?;
        Ok(Self::from_parts(self.layout.clone(), &self.m - &other.m))
    }

    /// `self ⊗ other` with concatenated layouts.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self::from_parts(layout, self.m.kron(&other.m)))
    }

    /// Transposes the named factors.
    pub fn partial_transpose<S: AsRef<str>>(&self, factors: &[S]) -> Result<Self> {
        let mask = self.layout.mask(factors)?;
        Ok(Self {
            layout: self.layout.clone(),
            m: tensor::partial_transpose(&self.m, &self.layout.dims(), &mask),
            defect: self.defect,
        })
    }

    /// Traces out the named factors; tracing everything leaves a 1x1 operator.
    pub fn partial_trace<S: AsRef<str>>(&self, factors: &[S]) -> Result<Self> {
        let mask = self.layout.mask(factors)?;
        let m = tensor::partial_trace(&self.m, &self.layout.dims(), &mask);
        Ok(Self::from_parts(self.layout.without(&mask), m))
    }

    /// Reorders factors to the given label order.
    pub fn permute<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        if labels.len() != self.layout.len() {
            return Err(Error::InvalidArgument("permutation must list every factor once".into()));
        }
        let order: Vec<usize> = labels.iter().map(|l| self.layout.index_of(l.as_ref())).collect::<Result<_>>()?;
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("permutation repeats a factor".into()));
            }
        }
        Ok(Self {
            layout: self.layout.reordered(&order),
            m: tensor::permute_factors(&self.m, &self.layout.dims(), &order),
            defect: self.defect,
        })
    }

    pub fn eigh(&self) -> Result<(Vec<R>, CMatrix<R>)> {
        eigh(&self.m)
    }

    pub fn eigenvalues(&self) -> Result<Vec<R>> {
        eigvalsh(&self.m)
    }

    pub fn min_eigenvalue(&self) -> Result<R> {
        Ok(self.eigenvalues()?[0])
    }

    pub fn max_eigenvalue(&self) -> Result<R> {
        Ok(*self.eigenvalues()?.last().expect("nonempty"))
    }

    pub fn schatten_norm(&self, p: Schatten) -> Result<R> {
        let w = self.eigenvalues()?;
        Ok(match p {
            Schatten::One => w.iter().map(|x| x.abs()).sum(),
            Schatten::Two => w.iter().map(|&x| x * x).sum::<R>().sqrt(),
            Schatten::Inf => w.iter().fold(R::zero(), |acc, x| acc.max(x.abs())),
        })
    }

    pub fn trace_norm(&self) -> Result<R> {
        self.schatten_norm(Schatten::One)
    }

    /// `f` applied to the spectrum.
    pub fn apply_fn(&self, f: impl Fn(R) -> R) -> Result<Self> {
        let (w, v) = self.eigh()?;
        Ok(Self::from_parts(self.layout.clone(), spectral_map(&w, &v, f)))
    }

    pub fn positive_part(&self) -> Result<Self> {
        self.apply_fn(|x| x.max(R::zero()))
    }

    pub fn abs(&self) -> Result<Self> {
        self.apply_fn(|x| x.abs())
    }

    /// `P₊ − P₋`, zero eigenvalues mapped to `+1`.
    pub fn sign(&self) -> Result<Self> {
        self.apply_fn(|x| if x >= R::zero() { R::one() } else { -R::one() })
    }

    /// Projector onto the nonnegative eigenspace.
    pub fn nonneg_projector(&self) -> Result<Self> {
        self.apply_fn(|x| if x >= R::zero() { R::one() } else { R::zero() })
    }

    pub fn is_psd(&self, tol: R) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    /// Entry `(i, j)` of the matrix.
    pub fn entry(&self, i: usize, j: usize) -> C<R> {
        self.m[(i, j)]
    }

    pub fn cast<S: Real>(&self) -> HermitianOp<S> {
        HermitianOp { layout: self.layout.clone(), m: self.m.cast(), defect: S::lit(self.defect.as_f64()) }
    }
}

impl<R: Real> Add<&HermitianOp<R>> for &HermitianOp<R> {
    type Output = HermitianOp<R>;

    /// Panics on layout mismatch; use [`HermitianOp::checked_add`] otherwise.
    fn add(self, rhs: &HermitianOp<R>) -> HermitianOp<R> {
        self.checked_add(rhs).expect("layouts must match")
    }
}

impl<R: Real> Sub<&HermitianOp<R>> for &HermitianOp<R> {
    type Output = HermitianOp<R>;

    fn sub(self, rhs: &HermitianOp<R>) -> HermitianOp<R> {
        self.checked_sub(rhs).expect("layouts must match")
    }
}

impl<R: Real> Neg for &HermitianOp<R> {
    type Output = HermitianOp<R>;

    fn neg(self) -> HermitianOp<R> {
        self.scale(-R::one())
    }
}

/// Unit-trace positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState<R> {
    op: HermitianOp<R>,
}

impl<R: Real> DensityState<R> {
    pub fn new(op: HermitianOp<R>) -> Result<Self> {
        let tol = R::tol(STATE_TOL);
        let tr = op.trace();
        if !((tr - R::one()).abs() <= tol) {
            return Err(Error::NotAState(format!("trace {tr}")));
        }
        let min = op.min_eigenvalue()?;
        if !(min >= -tol) {
            return Err(Error::NotAState(format!("minimum eigenvalue {min}")));
        }
        Ok(Self { op })
    }

    /// Normalizes `op` by its trace before validating.
    pub fn normalized(op: HermitianOp<R>) -> Result<Self> {
        let tr = op.trace();
        if !(tr > R::zero()) {
            return Err(Error::NotAState(format!("trace {tr} cannot be normalized")));
        }
        Self::new(op.scale(R::one() / tr))
    }

    /// Pure state `|v><v| / <v|v>`.
    pub fn pure(layout: SystemLayout, v: &[C<R>]) -> Result<Self> {
        Self::normalized(HermitianOp::projector(layout, v)?)
    }

    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let n = R::from_count(layout.total_dim());
        Self { op: HermitianOp::identity(layout).scale(R::one() / n) }
    }

    /// Computational basis state `|i><i|`.
    pub fn basis(layout: SystemLayout, i: usize) -> Result<Self> {
        let n = layout.total_dim();
        if i >= n {
            return Err(Error::InvalidArgument(format!("basis index {i} out of range {n}")));
        }
        let mut v = vec![C::zero(); n];
        v[i] = C::one();
        Self::pure(layout, &v)
    }

    pub fn op(&self) -> &HermitianOp<R> {
        &self.op
    }

    pub fn into_op(self) -> HermitianOp<R> {
        self.op
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self { op: self.op.tensor(&other.op)? })
    }

    pub fn partial_trace<S: AsRef<str>>(&self, factors: &[S]) -> Result<Self> {
        Ok(Self { op: self.op.partial_trace(factors)? })
    }

    pub fn permute<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        Ok(Self { op: self.op.permute(labels)? })
    }

    pub fn relabel(&self, layout: SystemLayout) -> Result<Self> {
        Ok(Self { op: self.op.relabel(layout)? })
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, w: R, other: &Self) -> Result<Self> {
        let op = self.op.scale(w).checked_add(&other.op.scale(R::one() - w))?;
        Self::new(op)
    }

    /// Partial transpose has no negative eigenvalue below `-tol`.
    pub fn is_ppt<S: AsRef<str>>(&self, factors: &[S], tol: R) -> Result<bool> {
        self.op.partial_transpose(factors)?.is_psd(tol)
    }
}

impl<R> Deref for DensityState<R> {
    type Target = HermitianOp<R>;

    fn deref(&self) -> &HermitianOp<R> {
        &self.op
    }
}

impl<R: Real> From<DensityState<R>> for HermitianOp<R> {
    fn from(s: DensityState<R>) -> Self {
        s.op
    }
}
