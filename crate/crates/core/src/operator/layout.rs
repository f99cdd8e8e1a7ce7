use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered list of labelled tensor factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(String, usize)>", into = "Vec<(String, usize)>")]
pub struct SystemLayout {
    factors: Vec<(String, usize)>,
}

impl SystemLayout {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let factors: Vec<(String, usize)> = factors.into_iter().map(|(l, d)| (l.into(), d)).collect();
        let mut seen = HashSet::new();
        for (label, dim) in &factors {
            if *dim == 0 {
                return Err(Error::Layout(format!("factor `{label}` has dimension 0")));
            }
            if label.is_empty() {
                return Err(Error::Layout("empty factor label".into()));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::Layout(format!("duplicate label `{label}`")));
            }
        }
        Ok(Self { factors })
    }

    pub fn single(label: &str, dim: usize) -> Result<Self> {
        Self::new([(label, dim)])
    }

    /// Two factors `a`, `b` of the given dimensions.
    pub fn bipartite(a: &str, da: usize, b: &str, db: usize) -> Result<Self> {
        Self::new([(a, da), (b, db)])
    }

    /// Layout of a scalar (no factors).
    pub fn scalar() -> Self {
        Self { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[(String, usize)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|(_, d)| *d).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.factors.iter().map(|(l, _)| l.as_str()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|(_, d)| *d).product()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|(l, _)| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.factors[self.index_of(label)?].1)
    }

    /// Boolean mask over factors selecting `labels`.
    pub fn mask<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.factors.len()];
        for l in labels {
            mask[self.index_of(l.as_ref())?] = true;
        }
        Ok(mask)
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        Self::new(self.factors.iter().chain(&other.factors).cloned())
    }

    /// Layout with the masked factors removed.
    pub fn without(&self, mask: &[bool]) -> Self {
        Self {
            factors: self
                .factors
                .iter()
                .zip(mask)
                .filter(|(_, &m)| !m)
                .map(|(f, _)| f.clone())
                .collect(),
        }
    }

    /// Layout with factors reordered: position `i` holds factor `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        Self { factors: order.iter().map(|&i| self.factors[i].clone()).collect() }
    }

    /// Same dimensions, every label decorated with `suffix`.
    pub fn with_suffix(&self, suffix: &str) -> Self {
        Self { factors: self.factors.iter().map(|(l, d)| (format!("{l}{suffix}"), *d)).collect() }
    }
}

impl TryFrom<Vec<(String, usize)>> for SystemLayout {
    type Error = Error;

    fn try_from(v: Vec<(String, usize)>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SystemLayout> for Vec<(String, usize)> {
    fn from(l: SystemLayout) -> Self {
        l.factors
    }
}

impl fmt::Display for SystemLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|(l, d)| format!("{l}[{d}]")).collect();
        write!(f, "{}", parts.join("⊗"))
    }
}

/// Bipartition of a layout's labels into two parties.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

impl Cut {
    pub fn new<S: Into<String>>(
        left: impl IntoIterator<Item = S>,
        right: impl IntoIterator<Item = S>,
    ) -> Self {
        Self {
            left: left.into_iter().map(Into::into).collect(),
            right: right.into_iter().map(Into::into).collect(),
        }
    }

    /// Parses `"A,A':B,B'"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (l, r) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("cut `{s}` needs a `:`")))?;
        let split = |part: &str| -> Vec<String> {
            part.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
        };
        let cut = Self { left: split(l), right: split(r) };
        if cut.left.is_empty() || cut.right.is_empty() {
            return Err(Error::InvalidArgument(format!("cut `{s}` has an empty side")));
        }
        Ok(cut)
    }

    /// Cut of a two-factor layout between its factors.
    pub fn between_factors(layout: &SystemLayout) -> Result<Self> {
        if layout.len() != 2 {
            return Err(Error::InvalidArgument(format!("layout {layout} is not bipartite")));
        }
        let labels = layout.labels();
        Ok(Self::new([labels[0]], [labels[1]]))
    }

    /// Checks the cut covers every factor exactly once.
    pub fn validate(&self, layout: &SystemLayout) -> Result<()> {
        let mut count = vec![0usize; layout.len()];
        for l in self.left.iter().chain(&self.right) {
            count[layout.index_of(l)?] += 1;
        }
        if count.iter().any(|&c| c != 1) {
            return Err(Error::InvalidArgument(format!(
                "cut {self} does not partition layout {layout}"
            )));
        }
        Ok(())
    }

    /// Mask selecting the right party's factors.
    pub fn right_mask(&self, layout: &SystemLayout) -> Result<Vec<bool>> {
        self.validate(layout)?;
        layout.mask(&self.right)
    }

    /// Factor order placing the left party before the right one.
    pub fn grouping_order(&self, layout: &SystemLayout) -> Result<Vec<usize>> {
        self.validate(layout)?;
        self.left.iter().chain(&self.right).map(|l| layout.index_of(l)).collect()
    }

    /// Dimensions (left, right).
    pub fn party_dims(&self, layout: &SystemLayout) -> Result<(usize, usize)> {
        self.validate(layout)?;
        let prod = |ls: &[String]| -> Result<usize> {
            ls.iter().map(|l| layout.dim_of(l)).product()
        };
        Ok((prod(&self.left)?, prod(&self.right)?))
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.left.join(","), self.right.join(","))
    }
}
