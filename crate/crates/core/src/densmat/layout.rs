use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One labeled tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

/// Ordered tensor-product structure, leftmost factor most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    factors: Vec<Factor>,
}

impl SubsystemLayout {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidLayout("layout has no factors".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.dim == 0 {
                return Err(Error::InvalidLayout(format!("factor `{}` has dimension 0", f.label)));
            }
            if f.label.is_empty() {
                return Err(Error::InvalidLayout(format!("factor {i} has an empty label")));
            }
            if factors[..i].iter().any(|g| g.label == f.label) {
                return Err(Error::InvalidLayout(format!("duplicate label `{}`", f.label)));
            }
        }
        Ok(Self { factors })
    }

    /// Convenience constructor from `(label, dim)` pairs.
    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(label, dim)| Factor { label: label.to_owned(), dim }).collect())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim).collect()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.label.as_str())
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.factors[self.position(label)?].dim)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.factors.iter().any(|f| f.label == label)
    }

    /// Sub-layout holding the given labels, in this layout's order.
    pub fn select<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        for l in labels {
            self.position(l.as_ref())?;
        }
        let factors = self
            .factors
            .iter()
            .filter(|f| labels.iter().any(|l| l.as_ref() == f.label))
            .cloned()
            .collect();
        Self::new(factors)
    }

    /// Sub-layout without the given labels.
    pub fn without<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        for l in labels {
            self.position(l.as_ref())?;
        }
        let factors = self
            .factors
            .iter()
            .filter(|f| !labels.iter().any(|l| l.as_ref() == f.label))
            .cloned()
            .collect();
        Self::new(factors)
    }

    /// Splits a flat basis index into per-factor digits.
    pub(crate) fn digits(&self, mut index: usize, out: &mut [usize]) {
        for (slot, f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % f.dim;
            index /= f.dim;
        }
    }

    /// Joins per-factor digits selected by `positions` into a flat index over those factors.
    pub(crate) fn join(&self, digits: &[usize], positions: &[usize]) -> usize {
        positions.iter().fold(0, |acc, &p| acc * self.factors[p].dim + digits[p])
    }

    pub(crate) fn check_dim(&self, dim: usize, what: &str) -> Result<()> {
        if dim != self.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{what} has dimension {dim}, layout total is {}",
                self.total_dim()
            )));
        }
        Ok(())
    }
}

impl Serialize for SubsystemLayout {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.factors.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubsystemLayout {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let factors = Vec::<Factor>::deserialize(d)?;
        Self::new(factors).map_err(serde::de::Error::custom)
    }
}
