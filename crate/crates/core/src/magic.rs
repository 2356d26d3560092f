//! Magic unitaries coming from permutations, and the rank of the classes of
//! `1` and `u_ij` inside `K₀(C(Sₙ)) = ℤ^{n!}`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::linalg::{invariant_factors, IntMatrix, LatticeSolver};

pub const DEFAULT_MAX_N: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MagicError {
    #[error("not a bijection of 0..{n}: {detail}")]
    NotBijective { n: usize, detail: String },
    #[error("n = {n} exceeds the cap {cap} ({n}! evaluation rows)")]
    TooLarge { n: usize, cap: usize },
    #[error("n must be at least 1")]
    Empty,
    #[error("magic relation fails: {0}")]
    Relation(String),
}

/// `u_ij ∈ {0,1}`, one character of `C(Sₙ)` evaluated on the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MagicMatrix {
    pub n: usize,
    pub entries: Vec<Vec<u8>>,
}

impl MagicMatrix {
    /// `u_ij* = u_ij = u_ij²` and every row and column sums to 1.
    pub fn check(&self) -> Result<(), MagicError> {
        let n = self.n;
        for (i, row) in self.entries.iter().enumerate() {
            if let Some(j) = row.iter().position(|&x| x * x != x) {
                return Err(MagicError::Relation(format!("u_{i}{j} is not a projection")));
            }
            let s: u32 = row.iter().map(|&x| u32::from(x)).sum();
            if s != 1 {
                return Err(MagicError::Relation(format!("row {i} sums to {s}")));
            }
        }
        for j in 0..n {
            let s: u32 = self.entries.iter().map(|r| u32::from(r[j])).sum();
            if s != 1 {
                return Err(MagicError::Relation(format!("column {j} sums to {s}")));
            }
        }
        Ok(())
    }
}

/// `u_ij = 1` iff `σ(i) = j`, for `σ` given on `0..n`.
pub fn permutation_to_magic(sigma: &[usize]) -> Result<MagicMatrix, MagicError> {
    let n = sigma.len();
    let mut seen = vec![false; n];
    for (i, &j) in sigma.iter().enumerate() {
        if j >= n {
            return Err(MagicError::NotBijective {
                n,
                detail: format!("σ({i}) = {j} is out of range"),
            });
        }
        if std::mem::replace(&mut seen[j], true) {
            return Err(MagicError::NotBijective {
                n,
                detail: format!("{j} is hit twice"),
            });
        }
    }
    let entries = (0..n)
        .map(|i| (0..n).map(|j| u8::from(sigma[i] == j)).collect())
        .collect();
    Ok(MagicMatrix { n, entries })
}

/// `n! × (n²+1)` matrix: rows are permutations in lexicographic order,
/// columns are `1` followed by `u_ij` in `(i,j)` lexicographic order.
pub fn evaluation_matrix(n: usize, exec: Execution) -> IntMatrix {
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let rows: Vec<Vec<u8>> = exec.map(&perms, |p| {
        let mut row = Vec::with_capacity(n * n + 1);
        row.push(1u8);
        for i in 0..n {
            for j in 0..n {
                row.push(u8::from(p[i] == j));
            }
        }
        row
    });
    IntMatrix::from_rows(&rows)
}

/// Column indices of `1` and `u_ij` with `i, j < n − 1`.
pub fn restricted_columns(n: usize) -> Vec<usize> {
    let m = n.saturating_sub(1);
    std::iter::once(0)
        .chain((0..m).flat_map(|i| (0..m).map(move |j| 1 + i * n + j)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorRank {
    pub n: usize,
    pub full_rank: usize,
    pub restricted_rank: usize,
    /// `(n−1)² + 1`.
    pub expected: usize,
    /// All nonzero invariant factors equal 1 for both spans, so each is a
    /// direct summand of `ℤ^{n!}`.
    pub saturated: bool,
}

impl GeneratorRank {
    pub fn matches(&self) -> bool {
        self.full_rank == self.expected && self.restricted_rank == self.expected
    }
}

pub fn generator_rank(n: usize, exec: Execution) -> Result<GeneratorRank, MagicError> {
    generator_rank_capped(n, DEFAULT_MAX_N, exec)
}

pub fn generator_rank_capped(n: usize, cap: usize, exec: Execution) -> Result<GeneratorRank, MagicError> {
    if n == 0 {
        return Err(MagicError::Empty);
    }
    if n > cap {
        return Err(MagicError::TooLarge { n, cap });
    }
    let full = evaluation_matrix(n, exec);
    let restricted = full.select_columns(&restricted_columns(n));
    let f_full = invariant_factors(&full);
    let f_res = invariant_factors(&restricted);
    let rank = |f: &[BigInt]| f.iter().filter(|d| !d.is_zero()).count();
    let units = |f: &[BigInt]| f.iter().filter(|d| !d.is_zero()).all(One::is_one);
    Ok(GeneratorRank {
        n,
        full_rank: rank(&f_full),
        restricted_rank: rank(&f_res),
        expected: (n - 1) * (n - 1) + 1,
        saturated: units(&f_full) && units(&f_res),
    })
}

/// The class of `1` is an integer combination of `u_i0, …, u_i(n−1)`.
pub fn unit_in_row_span(n: usize, i: usize, exec: Execution) -> bool {
    let full = evaluation_matrix(n, exec);
    let cols: Vec<usize> = (0..n).map(|j| 1 + i * n + j).collect();
    LatticeSolver::new(&full.select_columns(&cols)).contains(&full.column(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_magic_matrices() {
        let id = permutation_to_magic(&[0, 1, 2]).unwrap();
        assert_eq!(id.entries, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let swap = permutation_to_magic(&[1, 0]).unwrap();
        assert_eq!(swap.entries, vec![vec![0, 1], vec![1, 0]]);
        assert!(permutation_to_magic(&[0, 0]).is_err());
        assert!(permutation_to_magic(&[0, 2]).is_err());
    }

    #[test]
    fn all_permutations_are_magic() {
        for n in 1..=5 {
            for p in (0..n).permutations(n) {
                permutation_to_magic(&p).unwrap().check().unwrap();
            }
        }
        let bad = MagicMatrix {
            n: 2,
            entries: vec![vec![1, 1], vec![0, 0]],
        };
        assert!(bad.check().is_err());
    }

    #[test]
    fn evaluation_shapes() {
        let e = Execution::Sequential;
        assert_eq!(evaluation_matrix(1, e), IntMatrix::from_rows(&[[1, 1]]));
        let m2 = evaluation_matrix(2, e);
        assert_eq!(m2.shape(), (2, 5));
        assert_eq!(m2.rank(), 2);
        assert_eq!(evaluation_matrix(4, e).shape(), (24, 17));
    }

    #[test]
    fn ranks() {
        for (n, want) in [(1, 1), (2, 2), (3, 5), (4, 10), (5, 17)] {
            let r = generator_rank(n, Execution::default()).unwrap();
            assert_eq!((r.full_rank, r.restricted_rank), (want, want), "n = {n}");
            assert!(r.saturated);
        }
        assert!(matches!(generator_rank(8, Execution::default()), Err(MagicError::TooLarge { .. })));
    }

    #[test]
    fn row_sum_relation() {
        for i in 0..4 {
            assert!(unit_in_row_span(4, i, Execution::Sequential));
        }
    }
}
