//! The length-one resolution `0 → C₁ → C₀ → C^red(G) → 0` with
//! `C₁ = ℂ^{⊕n} ⊕ A` and `C₀ = A^{⊕n} ⊕ ℂ`, and the two complexes of free
//! `ℤ[t]`-modules obtained by applying `KK^G(ℂ, −)` and `KK^G(A, −)`.
//!
//! Morphism groups between `ℂ` and `A` are `R(G) = ℤ[t]` when both ends
//! agree and `R^ω(G) = t^{1/2}ℤ[t]` otherwise. Each `R^ω` is trivialised on
//! its generator `t^{1/2}`, which turns every induced map into a plain
//! polynomial matrix. The `t`-action on the evaluation targets `ℤ` and `ℤⁿ`
//! is not fixed in advance: it is solved for from `d₀ ∘ d₁ = 0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dims::DimVector;
use crate::linalg::{cokernel, kernel_basis, IntMatrix, LatticeSolver};
use crate::repring::{Parity, Poly, RepRingElement};

pub const DEFAULT_DEGREE_BOUND: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("degree bound {0} is too small to certify anything (need at least 2)")]
    DegreeTooSmall(usize),
    #[error("no t-action makes d0 ∘ d1 vanish for {0}")]
    Inconsistent(String),
    #[error("the t-action is not determined by d0 ∘ d1 = 0 for {0}")]
    Underdetermined(String),
    #[error("entry of degree {0} in d1 makes the t-action constraint nonlinear")]
    Nonlinear(usize),
    #[error("unknown test object `{0}` (expected `c` or `a`)")]
    UnknownTestObject(String),
}

/// The object `X` in `KK^G(X, C_•)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestObject {
    #[serde(rename = "C")]
    Scalars,
    #[serde(rename = "A")]
    Algebra,
}

impl TestObject {
    pub const BOTH: [TestObject; 2] = [TestObject::Scalars, TestObject::Algebra];
}

impl fmt::Display for TestObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestObject::Scalars => "C",
            TestObject::Algebra => "A",
        })
    }
}

impl FromStr for TestObject {
    type Err = ResolutionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "c" | "C" => Ok(TestObject::Scalars),
            "a" | "A" => Ok(TestObject::Algebra),
            other => Err(ResolutionError::UnknownTestObject(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Summand {
    Scalars,
    Algebra,
}

impl From<TestObject> for Summand {
    fn from(x: TestObject) -> Self {
        match x {
            TestObject::Scalars => Summand::Scalars,
            TestObject::Algebra => Summand::Algebra,
        }
    }
}

fn hom_parity(from: Summand, to: Summand) -> Parity {
    if from == to {
        Parity::Integral
    } else {
        Parity::HalfIntegral
    }
}

fn c1_summands(n: usize) -> Vec<Summand> {
    let mut v = vec![Summand::Scalars; n];
    v.push(Summand::Algebra);
    v
}

fn c0_summands(n: usize) -> Vec<Summand> {
    let mut v = vec![Summand::Algebra; n];
    v.push(Summand::Scalars);
    v
}

/// `d₁ ∈ KK^G(C₁, C₀)` as a matrix over `R(G) ⊕ R^ω(G)`: entry `(i, j)` maps
/// the `j`-th summand of `C₁` to the `i`-th summand of `C₀`.
fn abstract_d1(k: &DimVector) -> Vec<Vec<RepRingElement>> {
    let n = k.len();
    let zero_half = RepRingElement::half_integral(Poly::zero());
    let zero_int = RepRingElement::integral(Poly::zero());
    let mut d = vec![vec![zero_int.clone(); n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            d[i][j] = if i == j { RepRingElement::sqrt_t() } else { zero_half.clone() };
        }
        let ki = BigInt::from(k.blocks()[i]);
        d[i][n] = RepRingElement::integral(Poly::constant(-ki.clone()));
        d[n][i] = RepRingElement::integral(Poly::constant(-ki));
    }
    d[n][n] = RepRingElement::sqrt_t();
    d
}

/// Matrix of `ℤ[t]`-module maps between free modules, with the parity of the
/// generator of each summand recorded before trivialisation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMatrix {
    pub row_parities: Vec<Parity>,
    pub col_parities: Vec<Parity>,
    pub entries: Vec<Vec<Poly>>,
}

impl ModuleMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.col_parities.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn max_degree(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Integer matrix of the map from degree `≤ dom_deg` to degree
    /// `≤ dom_deg + max_degree`, coordinates ordered slot-major.
    pub fn truncate(&self, dom_deg: usize) -> IntMatrix {
        let cod_deg = dom_deg + self.max_degree();
        let (dw, cw) = (dom_deg + 1, cod_deg + 1);
        let mut m = IntMatrix::zeros(self.rows() * cw, self.cols() * dw);
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                for (f, c) in self.entries[i][j].coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for e in 0..dw {
                        m[(i * cw + e + f, j * dw + e)] = c.clone();
                    }
                }
            }
        }
        m
    }
}

impl fmt::Display for ModuleMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `d₀` after applying `KK^G(X, −)`: generator of slot `i` goes to
/// `slot_images[i] ∈ ℤ^target_rank`, and `t` acts on the target by `t_action`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationMap {
    pub target_rank: usize,
    pub slot_images: Vec<Vec<BigInt>>,
    pub t_action: IntMatrix,
}

impl EvaluationMap {
    /// `p(T)·v`.
    pub fn act(&self, p: &Poly, v: &[BigInt]) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.target_rank];
        let mut power = v.to_vec();
        for (e, c) in p.coeffs().iter().enumerate() {
            if e > 0 {
                power = self.t_action.mul_vec(&power);
            }
            if c.is_zero() {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(&power) {
                *a += c * x;
            }
        }
        acc
    }

    /// Image of an element of the free module given slotwise.
    pub fn apply(&self, x: &[Poly]) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.target_rank];
        for (p, img) in x.iter().zip(&self.slot_images) {
            for (a, y) in acc.iter_mut().zip(self.act(p, img)) {
                *a += y;
            }
        }
        acc
    }

    /// Integer matrix on degrees `≤ deg`, coordinates ordered slot-major.
    pub fn truncate(&self, deg: usize) -> IntMatrix {
        let w = deg + 1;
        let mut m = IntMatrix::zeros(self.target_rank, self.slot_images.len() * w);
        for (i, img) in self.slot_images.iter().enumerate() {
            let mut power = img.clone();
            for e in 0..w {
                if e > 0 {
                    power = self.t_action.mul_vec(&power);
                }
                for (r, x) in power.iter().enumerate() {
                    m[(r, i * w + e)] = x.clone();
                }
            }
        }
        m
    }
}

/// `KK^G(X, C₁) → KK^G(X, C₀) → KK^G(X, C^red(G))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedComplex {
    pub dims: DimVector,
    pub test: TestObject,
    pub d1: ModuleMatrix,
    pub d0: EvaluationMap,
}

impl InducedComplex {
    /// Checks `d₀ ∘ d₁ = 0` column by column.
    pub fn composition_vanishes(&self) -> bool {
        (0..self.d1.cols()).all(|c| {
            let col: Vec<Poly> = (0..self.d1.rows()).map(|i| self.d1.entries[i][c].clone()).collect();
            self.d0.apply(&col).iter().all(Zero::is_zero)
        })
    }
}

fn induced_d1(k: &DimVector, test: TestObject) -> ModuleMatrix {
    let n = k.len();
    let x = Summand::from(test);
    let src: Vec<Parity> = c1_summands(n).into_iter().map(|s| hom_parity(x, s)).collect();
    let tgt: Vec<Parity> = c0_summands(n).into_iter().map(|s| hom_parity(x, s)).collect();
    let abs = abstract_d1(k);
    let entries = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| {
                    let e = &abs[i][j];
                    let half = e.parity().half_shift() + src[j].half_shift();
                    debug_assert_eq!(half % 2, tgt[i].half_shift());
                    let shift = (half - tgt[i].half_shift()) / 2;
                    e.poly().shift(shift as usize)
                })
                .collect()
        })
        .collect();
    ModuleMatrix {
        row_parities: tgt,
        col_parities: src,
        entries,
    }
}

/// Images of the slot generators under `d₀ = ε₁ ⊕ ⋯ ⊕ εₙ ⊕ u`.
fn slot_images(k: &DimVector, test: TestObject) -> Vec<Vec<BigInt>> {
    let n = k.len();
    let kv: Vec<BigInt> = k.blocks().iter().map(|&x| BigInt::from(x)).collect();
    match test {
        // The unit map ℂ → A composed with εⱼ gives kⱼ; u sends 1 to 1.
        TestObject::Scalars => {
            let mut v: Vec<Vec<BigInt>> = kv.iter().map(|x| vec![x.clone()]).collect();
            v.push(vec![BigInt::one()]);
            v
        }
        // εⱼ is the j-th basis vector; the generator of KK(A, ℂ) goes to k.
        TestObject::Algebra => {
            let mut v: Vec<Vec<BigInt>> = (0..n)
                .map(|j| (0..n).map(|r| BigInt::from((r == j) as u8)).collect())
                .collect();
            v.push(kv);
            v
        }
    }
}

fn target_rank(k: &DimVector, test: TestObject) -> usize {
    match test {
        TestObject::Scalars => 1,
        TestObject::Algebra => k.len(),
    }
}

/// Solves `d₀ ∘ d₁ = 0` for the matrix `T` of `t` on the evaluation target.
///
/// Entries of `d₁` have degree at most one, so each column contributes
/// equations `Σᵢ (aᵢ + bᵢ T)·vᵢ = 0` that are linear in the entries of `T`.
pub fn derive_t_action(k: &DimVector, test: TestObject) -> Result<IntMatrix, ResolutionError> {
    let d1 = induced_d1(k, test);
    if d1.max_degree() > 1 {
        return Err(ResolutionError::Nonlinear(d1.max_degree()));
    }
    let images = slot_images(k, test);
    let m = target_rank(k, test);
    let unknowns = m * m;
    let eqs = d1.cols() * m;
    let mut sys = IntMatrix::zeros(eqs, unknowns);
    let mut rhs = vec![BigInt::zero(); eqs];
    for c in 0..d1.cols() {
        for (i, img) in images.iter().enumerate() {
            let p = &d1.entries[i][c];
            let (a, b) = (p.coeff(0), p.coeff(1));
            for r in 0..m {
                let row = c * m + r;
                rhs[row] -= &a * &img[r];
                if b.is_zero() {
                    continue;
                }
                for s in 0..m {
                    sys[(row, r * m + s)] += &b * &img[s];
                }
            }
        }
    }
    let label = format!("{k} tested against {test}");
    let solver = LatticeSolver::new(&sys);
    let x = solver
        .solve(&rhs)
        .ok_or_else(|| ResolutionError::Inconsistent(label.clone()))?;
    if solver.rank() < unknowns {
        return Err(ResolutionError::Underdetermined(label));
    }
    IntMatrix::from_entries(m, m, x).map_err(|e| ResolutionError::Inconsistent(e.to_string()))
}

/// Closed form of the `t`-action: `[Σkᵢ²]` on `KK(ℂ, A)`, `k·kᵀ` on `KK(A, A)`.
pub fn expected_t_action(k: &DimVector, test: TestObject) -> IntMatrix {
    let kv = k.blocks();
    match test {
        TestObject::Scalars => IntMatrix::from_rows(&[[k.algebra_dimension()]]),
        TestObject::Algebra => {
            let rows: Vec<Vec<u64>> = kv.iter().map(|&a| kv.iter().map(|&b| a * b).collect()).collect();
            IntMatrix::from_rows(&rows)
        }
    }
}

/// Builds the induced complex with its derived `t`-action.
pub fn build_complex(k: &DimVector, test: TestObject) -> Result<InducedComplex, ResolutionError> {
    let t_action = derive_t_action(k, test)?;
    Ok(InducedComplex {
        dims: k.clone(),
        test,
        d1: induced_d1(k, test),
        d0: EvaluationMap {
            target_rank: target_rank(k, test),
            slot_images: slot_images(k, test),
            t_action,
        },
    })
}

/// Certificate of exactness of a truncated induced complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub dims: DimVector,
    pub test: TestObject,
    pub degree_bound: usize,
    /// Kernel elements of `d₀` are certified up to this polynomial degree.
    pub certified_degree: usize,
    pub composition_vanishes: bool,
    pub d1_injective: bool,
    pub kernel_in_image: bool,
    pub d0_surjective: bool,
    /// Rank of `ker d₀` on degrees `≤ certified_degree`.
    pub kernel_rank: usize,
    /// Derived matrix of `t` on the evaluation target, rows of decimal strings.
    pub t_action: Vec<Vec<String>>,
    /// Whether the derived action equals `τ = Σkᵢ²` resp. `T = k·kᵀ`.
    pub action_matches: bool,
    /// A kernel element of `d₀` not reached by `d₁`, slot-major coordinates.
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_bigints")]
    pub unreached: Option<Vec<BigInt>>,
    pub warnings: Vec<String>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.composition_vanishes && self.d1_injective && self.kernel_in_image && self.d0_surjective
    }
}

mod opt_bigints {
    use num_bigint::BigInt;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(ToString::to_string)),
            None => s.serialize_none(),
        }
    }
}

/// Certifies exactness of `KK^G(X, C_•)` on the truncation to degree `D`.
///
/// `d₁` raises degree by at most one, so kernel elements of degree `≤ D − 1`
/// are tested against the image of elements of degree `≤ D`.
pub fn check_exactness(
    k: &DimVector,
    test: TestObject,
    degree_bound: usize,
) -> Result<ExactnessReport, ResolutionError> {
    if degree_bound < 2 {
        return Err(ResolutionError::DegreeTooSmall(degree_bound));
    }
    let cx = build_complex(k, test)?;
    let certified = degree_bound - 1;
    let slots = cx.d1.rows();

    let d1_trunc = cx.d1.truncate(degree_bound);
    let image = LatticeSolver::new(&d1_trunc);
    let d1_injective = image.rank() == d1_trunc.cols();

    let d0_trunc = cx.d0.truncate(certified);
    let kernel = kernel_basis(&d0_trunc);
    let cod_w = degree_bound + cx.d1.max_degree() + 1;
    let unreached = kernel.iter().find_map(|v| {
        let mut lifted = vec![BigInt::zero(); slots * cod_w];
        for s in 0..slots {
            for e in 0..=certified {
                lifted[s * cod_w + e] = v[s * (certified + 1) + e].clone();
            }
        }
        (!image.contains(&lifted)).then(|| v.clone())
    });

    let d0_surjective = cokernel(&d0_trunc).is_trivial();

    Ok(ExactnessReport {
        dims: k.clone(),
        test,
        degree_bound,
        certified_degree: certified,
        composition_vanishes: cx.composition_vanishes(),
        d1_injective,
        kernel_in_image: unreached.is_none(),
        d0_surjective,
        kernel_rank: kernel.len(),
        t_action: cx
            .d0
            .t_action
            .row_vecs()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect(),
        action_matches: cx.d0.t_action == expected_t_action(k, test),
        unreached,
        warnings: k.scope_warning().into_iter().collect(),
    })
}
