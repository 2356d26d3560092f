//! Exact integer linear algebra: Smith and Hermite normal forms, kernels,
//! cokernels, integer linear systems and finitely generated abelian groups.

mod field;
mod group;
mod hermite;
mod matrix;
mod smith;

pub use field::{field_inverse, field_nullspace, field_rank, field_solve, Field};
pub use group::{fg_direct_sum, fg_group_isomorphic, FgAbelianGroup};
pub(crate) use group::bigint_strings;
pub use hermite::{hermite_normal_form, hermite_rows};
pub use matrix::IntMatrix;
pub use smith::{
    invariant_factors, is_divisibility_chain, rank, smith_normal_form, smith_right,
    SmithDecomposition,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix parse error: {0}")]
    Parse(String),
    #[error("shape error: {0}")]
    Shape(String),
}

/// Lattice basis of `{x ∈ ℤ^cols : A x = 0}` in Hermite normal form, so the
/// first nonzero coordinate of each vector is positive.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (factors, v) = smith_right(a);
    let r = factors.iter().take_while(|d| !d.is_zero()).count();
    let raw: Vec<Vec<BigInt>> = (r..a.cols()).map(|j| v.column(j)).collect();
    hermite_rows(&raw)
}

/// `coker(A) = ℤ^rows / A·ℤ^cols`.
pub fn cokernel(a: &IntMatrix) -> FgAbelianGroup {
    let factors = invariant_factors(a);
    let r = factors.iter().take_while(|d| !d.is_zero()).count();
    FgAbelianGroup::from_cyclic_orders(
        a.rows() - r,
        factors.into_iter().take(r),
    )
}

/// The kernel as an abstract group (always free).
pub fn kernel_group(a: &IntMatrix) -> FgAbelianGroup {
    FgAbelianGroup::free(a.cols() - rank(a))
}

/// Integer solutions of `A x = b`: a particular solution plus a kernel basis,
/// or `None` if the system has no integer solution.
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

pub fn solve_integer_system(a: &IntMatrix, b: &[BigInt]) -> Option<IntegerSolution> {
    let snf = smith_normal_form(a);
    let solver = LatticeSolver::from_decomposition(snf);
    let particular = solver.solve(b)?;
    Some(IntegerSolution {
        particular,
        kernel: solver.kernel(),
    })
}

/// Reusable solver for `A x = b` over ℤ with one decomposition and many
/// right-hand sides.
pub struct LatticeSolver {
    snf: SmithDecomposition,
    rank: usize,
}

impl LatticeSolver {
    pub fn new(a: &IntMatrix) -> Self {
        Self::from_decomposition(smith_normal_form(a))
    }

    fn from_decomposition(snf: SmithDecomposition) -> Self {
        let rank = snf.rank();
        LatticeSolver { snf, rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let (m, n) = self.snf.s.shape();
        if b.len() != m {
            return None;
        }
        let ub = self.snf.u.mul_vec(b);
        let mut y = vec![BigInt::zero(); n];
        for i in 0..m {
            if i < self.rank {
                let (q, r) = ub[i].div_rem(&self.snf.invariant_factors[i]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !ub[i].is_zero() {
                return None;
            }
        }
        Some(self.snf.v.mul_vec(&y))
    }

    /// Whether `b` lies in the column lattice of `A`.
    pub fn contains(&self, b: &[BigInt]) -> bool {
        self.solve(b).is_some()
    }

    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        let n = self.snf.v.cols();
        let raw: Vec<Vec<BigInt>> = (self.rank..n).map(|j| self.snf.v.column(j)).collect();
        hermite_rows(&raw)
    }
}

/// Normalises an integer vector so its first nonzero coordinate is positive.
pub fn normalize_sign(v: &mut [BigInt]) {
    if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        for x in v.iter_mut() {
            *x = -std::mem::take(x);
        }
    }
}
