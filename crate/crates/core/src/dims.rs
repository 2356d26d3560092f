use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimError {
    #[error("dimension vector must be nonempty")]
    Empty,
    #[error("block sizes must be positive, got {0}")]
    NonPositive(i64),
    #[error("invalid block size `{0}`")]
    Parse(String),
}

/// Block sizes `(k₁,…,k_n)` of `A = M_{k₁}(ℂ) ⊕ ⋯ ⊕ M_{k_n}(ℂ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u64>")]
pub struct DimVector(Vec<u64>);

impl DimVector {
    pub fn new(k: Vec<u64>) -> Result<Self, DimError> {
        if k.is_empty() {
            return Err(DimError::Empty);
        }
        if k.contains(&0) {
            return Err(DimError::NonPositive(0));
        }
        Ok(DimVector(k))
    }

    /// `ℂⁿ`, the algebra behind the quantum permutation group.
    pub fn commutative(n: usize) -> Self {
        DimVector(vec![1; n.max(1)])
    }

    pub fn blocks(&self) -> &[u64] {
        &self.0
    }

    /// Number of blocks `n`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `dim A = Σ kᵢ²`.
    pub fn algebra_dimension(&self) -> u64 {
        self.0.iter().map(|k| k * k).sum()
    }

    pub fn gcd(&self) -> u64 {
        self.0.iter().fold(0, |g, &k| g.gcd(&k))
    }

    /// Warning for algebras below dimension 4, where the closed form is not asserted.
    pub fn scope_warning(&self) -> Option<String> {
        let dim = self.algebra_dimension();
        (dim < 4).then(|| {
            format!("scope: dim A = {dim} < 4; results are computed but the closed form is only asserted for dim A >= 4")
        })
    }
}

impl TryFrom<Vec<i64>> for DimVector {
    type Error = DimError;

    fn try_from(v: Vec<i64>) -> Result<Self, DimError> {
        let mut out = Vec::with_capacity(v.len());
        for x in v {
            if x <= 0 {
                return Err(DimError::NonPositive(x));
            }
            out.push(x as u64);
        }
        DimVector::new(out)
    }
}

impl From<DimVector> for Vec<u64> {
    fn from(d: DimVector) -> Self {
        d.0
    }
}

impl FromStr for DimVector {
    type Err = DimError;

    /// Comma-separated positive integers, e.g. `1,1,1,1`.
    fn from_str(s: &str) -> Result<Self, DimError> {
        let parts: Result<Vec<i64>, DimError> = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<i64>().map_err(|_| DimError::Parse(p.to_string())))
            .collect();
        DimVector::try_from(parts?)
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse() {
        let d: DimVector = "2, 4".parse().unwrap();
        assert_eq!(d.blocks(), &[2, 4]);
        assert_eq!(d.gcd(), 2);
        assert_eq!(d.algebra_dimension(), 20);
        assert!(matches!("".parse::<DimVector>(), Err(DimError::Empty)));
        assert!(matches!("1,0".parse::<DimVector>(), Err(DimError::NonPositive(0))));
        assert!(matches!("1,-3".parse::<DimVector>(), Err(DimError::NonPositive(-3))));
        assert!(matches!("1,x".parse::<DimVector>(), Err(DimError::Parse(_))));
    }

    #[test]
    fn scope() {
        assert!(DimVector::new(vec![1]).unwrap().scope_warning().is_some());
        assert!(DimVector::new(vec![1, 1, 1]).unwrap().scope_warning().is_some());
        assert!(DimVector::new(vec![2]).unwrap().scope_warning().is_none());
        assert!(DimVector::commutative(4).scope_warning().is_none());
    }

    #[test]
    fn serde_validates() {
        assert!(serde_json::from_str::<DimVector>("[1,2]").is_ok());
        assert!(serde_json::from_str::<DimVector>("[]").is_err());
        assert!(serde_json::from_str::<DimVector>("[0]").is_err());
    }
}
