//! K-theory of `C(G)` for `G = Qut(A)` from the boundary map
//! `∂: K₀(ℂ^{⊕n} ⊕ A) → K₀(A^{⊕n} ⊕ ℂ)`, i.e. `ℤⁿ ⊕ ℤⁿ → (ℤⁿ)ⁿ ⊕ ℤ`.
//!
//! `K₁ = ker ∂` and `K₀ = coker ∂`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::dims::DimVector;
use crate::linalg::{cokernel, kernel_basis, FgAbelianGroup, IntMatrix};

/// The `(n² + 1) × 2n` boundary matrix.
///
/// Row block `i` (rows `i·n .. i·n + n`) holds `k` as a column in column `i`
/// and `−kᵢ·𝟙` in the last `n` columns; the final row is `(−k | k)`.
pub fn boundary_matrix(k: &DimVector) -> IntMatrix {
    let kv = k.blocks();
    let n = kv.len();
    let mut m = IntMatrix::zeros(n * n + 1, 2 * n);
    for i in 0..n {
        for r in 0..n {
            let row = i * n + r;
            m[(row, i)] = BigInt::from(kv[r]);
            m[(row, n + r)] = -BigInt::from(kv[i]);
        }
    }
    for j in 0..n {
        m[(n * n, j)] = -BigInt::from(kv[j]);
        m[(n * n, n + j)] = BigInt::from(kv[j]);
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KTheoryResult {
    #[serde(rename = "K0")]
    pub k0: FgAbelianGroup,
    #[serde(rename = "K1")]
    pub k1: FgAbelianGroup,
    #[serde(skip)]
    pub boundary: IntMatrix,
    /// Generator of `ker ∂`, first nonzero coordinate positive.
    #[serde(serialize_with = "crate::linalg::bigint_strings::serialize")]
    pub kernel_generator: Vec<BigInt>,
}

pub fn k_theory(k: &DimVector) -> KTheoryResult {
    let boundary = boundary_matrix(k);
    let ker = kernel_basis(&boundary);
    KTheoryResult {
        k0: cokernel(&boundary),
        k1: FgAbelianGroup::free(ker.len()),
        kernel_generator: ker.into_iter().next().unwrap_or_default(),
        boundary,
    }
}

/// `(ℤ^{(n−1)²+1} ⊕ ℤ_d^{2n−1}, ℤ)` with `d = gcd(k₁,…,kₙ)`.
pub fn closed_form(k: &DimVector) -> (FgAbelianGroup, FgAbelianGroup) {
    let n = k.len();
    let d = BigInt::from(k.gcd());
    let k0 = FgAbelianGroup::from_cyclic_orders(
        (n - 1) * (n - 1) + 1,
        std::iter::repeat(d).take(2 * n - 1),
    );
    (k0, FgAbelianGroup::free(1))
}

/// `(k₁/d, …, kₙ/d, k₁/d, …, kₙ/d)`.
pub fn expected_kernel_generator(k: &DimVector) -> Vec<BigInt> {
    let d = k.gcd();
    let half: Vec<BigInt> = k.blocks().iter().map(|&x| BigInt::from(x / d)).collect();
    half.iter().chain(&half).cloned().collect()
}

/// Whether the boundary-map computation agrees with the closed form.
pub fn verify_theorem(k: &DimVector) -> bool {
    Verification::run(k).matches()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub dims: DimVector,
    pub computed: KTheoryResult,
    pub expected_k0: FgAbelianGroup,
    pub expected_k1: FgAbelianGroup,
    pub warnings: Vec<String>,
}

impl Verification {
    pub fn run(k: &DimVector) -> Self {
        let (expected_k0, expected_k1) = closed_form(k);
        Verification {
            dims: k.clone(),
            computed: k_theory(k),
            expected_k0,
            expected_k1,
            warnings: k.scope_warning().into_iter().collect(),
        }
    }

    pub fn matches(&self) -> bool {
        self.computed.k0.is_isomorphic(&self.expected_k0)
            && self.computed.k1.is_isomorphic(&self.expected_k1)
    }

    pub fn kernel_matches(&self) -> bool {
        self.computed.kernel_generator == expected_kernel_generator(&self.dims)
    }
}

/// `kᵢ aⱼ = kⱼ aᵢ` for the first half of a kernel vector, with the second
/// half equal to the first.
pub fn satisfies_kernel_relations(k: &DimVector, v: &[BigInt]) -> bool {
    let n = k.len();
    if v.len() != 2 * n || v[..n] != v[n..] {
        return false;
    }
    let kv = k.blocks();
    (0..n).all(|i| (0..n).all(|j| BigInt::from(kv[i]) * &v[j] == BigInt::from(kv[j]) * &v[i]))
}
