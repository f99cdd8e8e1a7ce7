use serde::{Deserialize, Serialize};

use super::maps::LinMap;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;

/// Index of a matrix variable in a [`SpectrahedronProgram`].
pub type VarId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub dim: usize,
}

/// `Σ map_t(X_{var_t}) = rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "R: Real")]
pub struct Equality<R> {
    pub terms: Vec<(VarId, LinMap<R>)>,
    pub rhs: CMatrix<R>,
}

/// `map(X_var) + constant ⪰ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "R: Real")]
pub struct PsdConstraint<R> {
    pub var: VarId,
    pub map: LinMap<R>,
    pub constant: CMatrix<R>,
}

/// Linear objective over Hermitian matrix variables subject to affine
/// equalities and linear matrix inequalities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "R: Real")]
pub struct SpectrahedronProgram<R> {
    pub sense: Sense,
    pub variables: Vec<Variable>,
    /// `Σ Tr(C_v X_v) + offset`.
    pub objective: Vec<(VarId, CMatrix<R>)>,
    pub offset: R,
    pub equalities: Vec<Equality<R>>,
    pub psd: Vec<PsdConstraint<R>>,
}

impl<R: Real> SpectrahedronProgram<R> {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            variables: Vec::new(),
            objective: Vec::new(),
            offset: R::zero(),
            equalities: Vec::new(),
            psd: Vec::new(),
        }
    }

    pub fn maximize() -> Self {
        Self::new(Sense::Maximize)
    }

    pub fn minimize() -> Self {
        Self::new(Sense::Minimize)
    }

    pub fn add_variable(&mut self, name: &str, dim: usize) -> VarId {
        self.variables.push(Variable { name: name.to_string(), dim });
        self.variables.len() - 1
    }

    pub fn dim(&self, v: VarId) -> usize {
        self.variables[v].dim
    }

    /// Adds `Tr(c X_v)` to the objective.
    pub fn add_objective(&mut self, v: VarId, c: CMatrix<R>) {
        self.objective.push((v, c));
    }

    pub fn add_equality(&mut self, terms: Vec<(VarId, LinMap<R>)>, rhs: CMatrix<R>) {
        self.equalities.push(Equality { terms, rhs });
    }

    /// `Tr(c X_v) = value`.
    pub fn add_scalar_equality(&mut self, v: VarId, c: CMatrix<R>, value: R) {
        let rhs = CMatrix::from_real_diag(&[value]);
        self.add_equality(vec![(v, LinMap::Functional(c))], rhs);
    }

    pub fn add_psd(&mut self, var: VarId, map: LinMap<R>, constant: CMatrix<R>) {
        self.psd.push(PsdConstraint { var, map, constant });
    }

    /// `X_v ⪰ 0`.
    pub fn add_nonneg(&mut self, var: VarId) {
        let n = self.dim(var);
        self.add_psd(var, LinMap::Identity, CMatrix::zeros(n, n));
    }

    /// `map(X_v) ⪯ bound·𝟙`.
    pub fn add_upper_bound(&mut self, var: VarId, map: LinMap<R>, bound: R) -> Result<()> {
        let m = map.output_dim(self.dim(var))?;
        let neg = LinMap::Compose(vec![map, LinMap::Scale(-R::one())]);
        self.add_psd(var, neg, CMatrix::identity(m).scale(bound));
        Ok(())
    }

    /// `map(X_v) ⪰ −bound·𝟙`.
    pub fn add_lower_bound(&mut self, var: VarId, map: LinMap<R>, bound: R) -> Result<()> {
        let m = map.output_dim(self.dim(var))?;
        self.add_psd(var, map, CMatrix::identity(m).scale(bound));
        Ok(())
    }

    /// Checks shapes and that every PSD map is a scaled isometry.
    pub fn validate(&self) -> Result<()> {
        let dim_of = |v: VarId| -> Result<usize> {
            self.variables
                .get(v)
                .map(|x| x.dim)
                .ok_or_else(|| Error::Solver(format!("unknown variable {v}")))
        };
        for (v, c) in &self.objective {
            let n = dim_of(*v)?;
            if c.rows() != n || c.cols() != n {
                return Err(Error::Dimension(format!("objective block for variable {v} has wrong size")));
            }
            if c.hermiticity_defect() > R::tol(1e-10) {
                return Err(Error::NotHermitian { defect: c.hermiticity_defect().as_f64() });
            }
        }
        for (k, eq) in self.equalities.iter().enumerate() {
            if eq.terms.is_empty() {
                return Err(Error::Solver(format!("equality {k} has no terms")));
            }
            for (v, map) in &eq.terms {
                let out = map.output_dim(dim_of(*v)?)?;
                if out != eq.rhs.rows() || !eq.rhs.is_square() {
                    return Err(Error::Dimension(format!("equality {k}: term maps to {out}, rhs is {}", eq.rhs.rows())));
                }
            }
        }
        let mut constrained = vec![false; self.variables.len()];
        for (k, c) in self.psd.iter().enumerate() {
            let n = dim_of(c.var)?;
            let out = c.map.output_dim(n)?;
            if c.constant.rows() != out || !c.constant.is_square() {
                return Err(Error::Dimension(format!("PSD constraint {k}: constant has wrong size")));
            }
            c.map.isometry_scale(n)?;
            constrained[c.var] = true;
        }
        if let Some(v) = constrained.iter().position(|&c| !c) {
            return Err(Error::Solver(format!(
                "variable `{}` appears in no PSD constraint",
                self.variables[v].name
            )));
        }
        Ok(())
    }

    /// Objective value at `x` (including the offset).
    pub fn objective_value(&self, x: &[CMatrix<R>]) -> R {
        self.objective.iter().fold(self.offset, |acc, (v, c)| acc + c.hs_inner(&x[*v]))
    }

    /// Returns the program with every objective coefficient multiplied by `s`.
    pub fn scaled_objective(&self, s: R) -> Self {
        let mut p = self.clone();
        for (_, c) in &mut p.objective {
            *c = c.scale(s);
        }
        p.offset *= s;
        p
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }
}
