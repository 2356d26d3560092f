//! Multi-matrix algebras `A = ⊕ M_{kᵢ}(ℂ)` with states given by blockwise
//! density matrices, GNS Gram matrices and the operator `μμ*`.
//!
//! Everything is exact over `ℚ(i)`. Bases are matrix units `e^{(b)}_{ij}`,
//! block-major, row-major within a block.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dims::DimVector;
use crate::linalg::field_inverse;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CStarError {
    #[error("density has {got} blocks, algebra has {expected}")]
    BlockCount { expected: usize, got: usize },
    #[error("density block {block} must be {size}x{size}")]
    BlockShape { block: usize, size: usize },
    #[error("density block {0} is not Hermitian")]
    NotHermitian(usize),
    #[error("density block {0} is not positive semidefinite")]
    NotPositive(usize),
    #[error("total trace of the density is {0}, expected 1")]
    TraceNotOne(String),
    #[error("state is not faithful (density block {0} is singular)")]
    NotFaithful(usize),
    #[error("invalid complex rational `{0}`")]
    Parse(String),
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ComplexQ {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ComplexQ { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        ComplexQ {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    /// `p/q` as a real number.
    pub fn ratio(p: i64, q: i64) -> Self {
        Self::real(BigRational::new(p.into(), q.into()))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        ComplexQ::new(BigRational::zero(), BigRational::one())
    }

    pub fn conj(&self) -> Self {
        ComplexQ::new(self.re.clone(), -&self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        ComplexQ::new(&self.re / &n, -&self.im / &n)
    }
}

impl Add for &ComplexQ {
    type Output = ComplexQ;
    fn add(self, rhs: &ComplexQ) -> ComplexQ {
        ComplexQ::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ComplexQ {
    type Output = ComplexQ;
    fn sub(self, rhs: &ComplexQ) -> ComplexQ {
        ComplexQ::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &ComplexQ {
    type Output = ComplexQ;
    fn mul(self, rhs: &ComplexQ) -> ComplexQ {
        ComplexQ::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &ComplexQ {
    type Output = ComplexQ;
    fn neg(self) -> ComplexQ {
        ComplexQ::new(-&self.re, -&self.im)
    }
}

impl crate::linalg::Field for ComplexQ {
    fn zero_like(&self) -> Self {
        ComplexQ::zero()
    }
    fn one_like(&self) -> Self {
        ComplexQ::one()
    }
    fn is_zero(&self) -> bool {
        ComplexQ::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl fmt::Display for ComplexQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im = if self.im.abs().is_one() {
            String::new()
        } else {
            self.im.abs().to_string()
        };
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{sign}{im}i")
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{sign}{im}i", self.re)
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return None;
    }
    BigRational::from_str(s).ok()
}

impl FromStr for ComplexQ {
    type Err = CStarError;

    /// Accepts `p/q`, `a+bi`, `a-b/ci`, `bi`, `i`, `-i`.
    fn from_str(s: &str) -> Result<Self, CStarError> {
        let err = || CStarError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix('i') else {
            return parse_rational(&t).map(ComplexQ::real).ok_or_else(err);
        };
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other).ok_or_else(err)?,
        };
        Ok(ComplexQ::new(parse_rational(re).ok_or_else(err)?, im))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Int(i64),
    Str(String),
}

impl RationalRepr {
    fn to_rational(&self) -> Result<BigRational, String> {
        match self {
            RationalRepr::Int(n) => Ok(BigRational::from_integer((*n).into())),
            RationalRepr::Str(s) => parse_rational(s).ok_or_else(|| format!("invalid rational `{s}`")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ComplexRepr {
    Int(i64),
    Str(String),
    Parts { re: RationalRepr, im: RationalRepr },
}

impl Serialize for ComplexQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.im.is_zero() {
            s.serialize_str(&self.re.to_string())
        } else {
            ComplexRepr::Parts {
                re: RationalRepr::Str(self.re.to_string()),
                im: RationalRepr::Str(self.im.to_string()),
            }
            .serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for ComplexQ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match ComplexRepr::deserialize(d)? {
            ComplexRepr::Int(n) => Ok(ComplexQ::from_int(n)),
            ComplexRepr::Str(s) => s.parse().map_err(D::Error::custom),
            ComplexRepr::Parts { re, im } => Ok(ComplexQ::new(
                re.to_rational().map_err(D::Error::custom)?,
                im.to_rational().map_err(D::Error::custom)?,
            )),
        }
    }
}

/// Dense square or rectangular matrix over `ℚ(i)`, row-major.
pub type CMatrix = Vec<Vec<ComplexQ>>;

pub fn c_identity(n: usize) -> CMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ComplexQ::one() } else { ComplexQ::zero() }).collect())
        .collect()
}

pub fn c_scalar(n: usize, x: &ComplexQ) -> CMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { x.clone() } else { ComplexQ::zero() }).collect())
        .collect()
}

pub fn c_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = ComplexQ::zero();
                    for (k, x) in row.iter().enumerate().take(inner) {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn c_adjoint(a: &CMatrix) -> CMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].conj()).collect()).collect()
}

pub fn c_trace(a: &CMatrix) -> ComplexQ {
    a.iter()
        .enumerate()
        .fold(ComplexQ::zero(), |acc, (i, r)| &acc + &r[i])
}

/// Signature test for a Hermitian matrix by symmetric pivoting.
/// Returns `(positive semidefinite, rank)`.
fn psd_rank(a: &CMatrix) -> (bool, usize) {
    let mut m = a.clone();
    let mut active: Vec<usize> = (0..m.len()).collect();
    let mut rank = 0;
    while !active.is_empty() {
        if active.iter().any(|&i| m[i][i].re.is_negative()) {
            return (false, rank);
        }
        let Some(pos) = active.iter().position(|&i| m[i][i].re.is_positive()) else {
            // A PSD matrix with zero diagonal is zero.
            let zero = active.iter().all(|&i| active.iter().all(|&j| m[i][j].is_zero()));
            return (zero, rank);
        };
        let p = active.swap_remove(pos);
        let inv = m[p][p].recip();
        for &i in &active {
            let f = &m[i][p] * &inv;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let v = &m[i][j] - &(&f * &m[p][j]);
                m[i][j] = v;
            }
        }
        rank += 1;
    }
    (true, rank)
}

pub fn is_hermitian(a: &CMatrix) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, r)| r.len() == a.len() && r.iter().enumerate().all(|(j, x)| *x == a[j][i].conj()))
}

/// Matrix unit `e_{row,col}` in block `block`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisLabel {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{}]({},{})", self.block + 1, self.row + 1, self.col + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinDimAlgebra {
    pub block_sizes: DimVector,
}

impl FinDimAlgebra {
    pub fn new(block_sizes: DimVector) -> Self {
        FinDimAlgebra { block_sizes }
    }

    pub fn commutative(n: usize) -> Self {
        Self::new(DimVector::commutative(n))
    }

    pub fn dimension(&self) -> usize {
        self.block_sizes.algebra_dimension() as usize
    }

    pub fn basis(&self) -> Vec<BasisLabel> {
        let mut out = Vec::with_capacity(self.dimension());
        for (block, &k) in self.block_sizes.blocks().iter().enumerate() {
            let k = k as usize;
            for row in 0..k {
                for col in 0..k {
                    out.push(BasisLabel { block, row, col });
                }
            }
        }
        out
    }

    pub fn index_of(&self, l: BasisLabel) -> usize {
        let kv = self.block_sizes.blocks();
        let offset: usize = kv[..l.block].iter().map(|&k| (k * k) as usize).sum();
        offset + l.row * kv[l.block] as usize + l.col
    }

    /// For each basis index `γ`, the pairs `(α, β)` with `e_α e_β = e_γ`.
    /// Products of matrix units are either zero or a single matrix unit.
    fn product_preimages(&self) -> Vec<Vec<(usize, usize)>> {
        let kv = self.block_sizes.blocks();
        let basis = self.basis();
        basis
            .iter()
            .map(|g| {
                (0..kv[g.block] as usize)
                    .map(|m| {
                        let a = BasisLabel { block: g.block, row: g.row, col: m };
                        let b = BasisLabel { block: g.block, row: m, col: g.col };
                        (self.index_of(a), self.index_of(b))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Element of `A`, one square matrix per block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgElement {
    pub blocks: Vec<CMatrix>,
}

impl AlgElement {
    pub fn zero(a: &FinDimAlgebra) -> Self {
        AlgElement {
            blocks: a
                .block_sizes
                .blocks()
                .iter()
                .map(|&k| c_scalar(k as usize, &ComplexQ::zero()))
                .collect(),
        }
    }

    pub fn unit(a: &FinDimAlgebra) -> Self {
        AlgElement {
            blocks: a.block_sizes.blocks().iter().map(|&k| c_identity(k as usize)).collect(),
        }
    }

    pub fn matrix_unit(a: &FinDimAlgebra, l: BasisLabel) -> Self {
        let mut x = Self::zero(a);
        x.blocks[l.block][l.row][l.col] = ComplexQ::one();
        x
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        AlgElement {
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| c_mul(a, b)).collect(),
        }
    }

    pub fn star(&self) -> Self {
        AlgElement {
            blocks: self.blocks.iter().map(c_adjoint).collect(),
        }
    }

    /// Coordinates in the matrix-unit basis.
    pub fn coordinates(&self) -> Vec<ComplexQ> {
        self.blocks.iter().flat_map(|b| b.iter().flatten().cloned()).collect()
    }
}

/// State `ω(x) = Σ Tr(Q_b x_b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgState {
    pub density: Vec<CMatrix>,
    pub faithful: bool,
}

impl AlgState {
    pub fn new(a: &FinDimAlgebra, density: Vec<CMatrix>) -> Result<Self, CStarError> {
        let kv = a.block_sizes.blocks();
        if density.len() != kv.len() {
            return Err(CStarError::BlockCount {
                expected: kv.len(),
                got: density.len(),
            });
        }
        let mut total = ComplexQ::zero();
        let mut faithful = true;
        for (b, (q, &k)) in density.iter().zip(kv).enumerate() {
            let k = k as usize;
            if q.len() != k || q.iter().any(|r| r.len() != k) {
                return Err(CStarError::BlockShape { block: b, size: k });
            }
            if !is_hermitian(q) {
                return Err(CStarError::NotHermitian(b));
            }
            let (psd, rank) = psd_rank(q);
            if !psd {
                return Err(CStarError::NotPositive(b));
            }
            faithful &= rank == k;
            total = &total + &c_trace(q);
        }
        if total != ComplexQ::one() {
            return Err(CStarError::TraceNotOne(total.to_string()));
        }
        Ok(AlgState { density, faithful })
    }

    /// `Q_b = (w_b / k_b)·1`, so that `ω(1_b) = w_b`.
    pub fn from_block_weights(a: &FinDimAlgebra, w: &[BigRational]) -> Result<Self, CStarError> {
        let kv = a.block_sizes.blocks();
        if w.len() != kv.len() {
            return Err(CStarError::BlockCount {
                expected: kv.len(),
                got: w.len(),
            });
        }
        let density = w
            .iter()
            .zip(kv)
            .map(|(wb, &k)| {
                let x = ComplexQ::real(wb / BigRational::from_integer(k.into()));
                c_scalar(k as usize, &x)
            })
            .collect();
        Self::new(a, density)
    }

    /// `ω(x) = Σ Tr(x_b) / Σ k_b`.
    pub fn normalized_trace(a: &FinDimAlgebra) -> Self {
        let kv = a.block_sizes.blocks();
        let total: u64 = kv.iter().sum();
        let w: Vec<BigRational> = kv
            .iter()
            .map(|&k| BigRational::new(k.into(), total.into()))
            .collect();
        Self::from_block_weights(a, &w).expect("normalized trace is a faithful state")
    }

    /// `Q_b = (k_b / dim A)·1`, the state making `A` a δ-form with `δ² = dim A`.
    pub fn plancherel(a: &FinDimAlgebra) -> Self {
        let kv = a.block_sizes.blocks();
        let dim = a.block_sizes.algebra_dimension();
        let w: Vec<BigRational> = kv
            .iter()
            .map(|&k| BigRational::new((k * k).into(), dim.into()))
            .collect();
        Self::from_block_weights(a, &w).expect("Plancherel state is faithful")
    }

    pub fn evaluate(&self, x: &AlgElement) -> ComplexQ {
        self.density
            .iter()
            .zip(&x.blocks)
            .fold(ComplexQ::zero(), |acc, (q, xb)| &acc + &c_trace(&c_mul(q, xb)))
    }

    fn require_faithful(&self) -> Result<(), CStarError> {
        match self.density.iter().position(|q| psd_rank(q).1 != q.len()) {
            Some(b) => Err(CStarError::NotFaithful(b)),
            None => Ok(()),
        }
    }
}

/// `G[α][β] = ω(e_α* e_β)` on matrix units.
///
/// For `α = (b,i,j)`, `β = (b,k,l)` this is `δ_{ik} Q_b[l][j]`; different
/// blocks are orthogonal.
pub fn gns_gram(a: &FinDimAlgebra, w: &AlgState) -> Result<CMatrix, CStarError> {
    w.require_faithful()?;
    let basis = a.basis();
    let n = basis.len();
    let mut g = vec![vec![ComplexQ::zero(); n]; n];
    for (x, l) in basis.iter().enumerate() {
        for (y, r) in basis.iter().enumerate() {
            if l.block == r.block && l.row == r.row {
                g[x][y] = w.density[l.block][r.col][l.col].clone();
            }
        }
    }
    Ok(g)
}

/// Matrix of `μμ*` on the GNS space of `A`, in matrix-unit coordinates.
///
/// With `G` the Gram matrix and `M` the structure matrix of `μ`,
/// `μ* = (G⊗G)⁻¹ M† G`, hence `μμ* = M (G⁻¹⊗G⁻¹) M† G`.
pub fn mu_mu_star(a: &FinDimAlgebra, w: &AlgState) -> Result<CMatrix, CStarError> {
    let g = gns_gram(a, w)?;
    let ginv = field_inverse(&g).ok_or(CStarError::NotFaithful(0))?;
    let pre = a.product_preimages();
    let n = g.len();
    let mut xp = vec![vec![ComplexQ::zero(); n]; n];
    for (gamma, pg) in pre.iter().enumerate() {
        for (delta, pd) in pre.iter().enumerate() {
            let mut acc = ComplexQ::zero();
            for &(a1, b1) in pg {
                for &(a0, b0) in pd {
                    let (x, y) = (&ginv[a1][a0], &ginv[b1][b0]);
                    if !x.is_zero() && !y.is_zero() {
                        acc = &acc + &(x * y);
                    }
                }
            }
            xp[gamma][delta] = acc;
        }
    }
    Ok(c_mul(&xp, &g))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DeltaForm {
    /// `μμ* = δ²·id`.
    Delta {
        #[serde(serialize_with = "rational_string")]
        delta_squared: BigRational,
        delta: f64,
    },
    /// Scalarity fails at `witness`: `μμ*(e_w) ≠ λ e_w` for `λ = μμ*[0][0]`.
    NotDelta {
        witness: BasisLabel,
        expected: ComplexQ,
        image: Vec<ComplexQ>,
    },
}

impl DeltaForm {
    pub fn delta_squared(&self) -> Option<&BigRational> {
        match self {
            DeltaForm::Delta { delta_squared, .. } => Some(delta_squared),
            DeltaForm::NotDelta { .. } => None,
        }
    }
}

fn rational_string<S: serde::Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn is_delta_form(a: &FinDimAlgebra, w: &AlgState) -> Result<DeltaForm, CStarError> {
    let x = mu_mu_star(a, w)?;
    let lambda = x[0][0].clone();
    let basis = a.basis();
    for (j, label) in basis.iter().enumerate() {
        let ok = (0..x.len()).all(|i| {
            if i == j {
                x[i][j] == lambda
            } else {
                x[i][j].is_zero()
            }
        });
        if !ok {
            return Ok(DeltaForm::NotDelta {
                witness: *label,
                expected: lambda,
                image: x.iter().map(|r| r[j].clone()).collect(),
            });
        }
    }
    // μμ* is positive, so λ is a positive rational.
    let delta_squared = lambda.re;
    Ok(DeltaForm::Delta {
        delta: rational_to_f64(&delta_squared).sqrt(),
        delta_squared,
    })
}

/// JSON input for the CLI: block sizes plus density blocks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateSpec {
    pub blocks: DimVector,
    pub density: Vec<CMatrix>,
}

impl StateSpec {
    pub fn build(self) -> Result<(FinDimAlgebra, AlgState), CStarError> {
        let a = FinDimAlgebra::new(self.blocks);
        let w = AlgState::new(&a, self.density)?;
        Ok((a, w))
    }
}

pub fn big_rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        big_rational(p, d)
    }

    fn alg(v: &[u64]) -> FinDimAlgebra {
        FinDimAlgebra::new(DimVector::new(v.to_vec()).unwrap())
    }

    /// `Tr(Q_b⁻¹)` on block `b`, the closed form of `μμ*`.
    fn block_scalar_oracle(a: &FinDimAlgebra, w: &AlgState) -> CMatrix {
        let mut diag = Vec::new();
        for (b, &k) in a.block_sizes.blocks().iter().enumerate() {
            let t = c_trace(&field_inverse(&w.density[b]).unwrap());
            diag.extend(std::iter::repeat(t).take((k * k) as usize));
        }
        let n = diag.len();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i].clone() } else { ComplexQ::zero() }).collect())
            .collect()
    }

    /// Cayley transform of a real skew matrix `[[0, s], [-s, 0]]`.
    fn rotation(s: BigRational) -> CMatrix {
        let one = BigRational::one();
        let d = &one + &s * &s;
        let c = (&one - &s * &s) / &d;
        let sn = (BigRational::from_integer(2.into()) * &s) / &d;
        vec![
            vec![ComplexQ::real(c.clone()), ComplexQ::real(-&sn)],
            vec![ComplexQ::real(sn), ComplexQ::real(c)],
        ]
    }

    #[test]
    fn parse_and_display() {
        for s in ["1/3", "-2", "1/2+1/3i", "1-i", "i", "-3/4i"] {
            let z: ComplexQ = s.parse().unwrap();
            assert_eq!(z.to_string(), s);
        }
        assert!("1/0x".parse::<ComplexQ>().is_err());
        let z: ComplexQ = serde_json::from_str(r#"{"re":"1/2","im":-1}"#).unwrap();
        assert_eq!(z, ComplexQ::new(q(1, 2), q(-1, 1)));
        assert_eq!(serde_json::to_string(&ComplexQ::ratio(2, 6)).unwrap(), r#""1/3""#);
    }

    #[test]
    fn gram_examples() {
        let c2 = FinDimAlgebra::commutative(2);
        let w = AlgState::from_block_weights(&c2, &[q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(gns_gram(&c2, &w).unwrap(), c_scalar(2, &ComplexQ::ratio(1, 2)));

        let w = AlgState::from_block_weights(&c2, &[q(1, 3), q(2, 3)]).unwrap();
        let g = gns_gram(&c2, &w).unwrap();
        assert_eq!(g[0][0], ComplexQ::ratio(1, 3));
        assert_eq!(g[1][1], ComplexQ::ratio(2, 3));
        assert!(g[0][1].is_zero());

        let m2 = alg(&[2]);
        let g = gns_gram(&m2, &AlgState::normalized_trace(&m2)).unwrap();
        assert_eq!(g, c_scalar(4, &ComplexQ::ratio(1, 2)));
    }

    #[test]
    fn gram_matches_direct_evaluation() {
        let a = alg(&[1, 2]);
        let h = vec![
            vec![ComplexQ::ratio(1, 3), ComplexQ::new(q(1, 12), q(1, 12))],
            vec![ComplexQ::new(q(1, 12), q(-1, 12)), ComplexQ::ratio(1, 2)],
        ];
        let w = AlgState::new(&a, vec![vec![vec![ComplexQ::ratio(1, 6)]], h]).unwrap();
        assert!(w.faithful);
        let g = gns_gram(&a, &w).unwrap();
        let basis = a.basis();
        for (x, l) in basis.iter().enumerate() {
            for (y, r) in basis.iter().enumerate() {
                let v = AlgElement::matrix_unit(&a, *l).star().mul(&AlgElement::matrix_unit(&a, *r));
                assert_eq!(g[x][y], w.evaluate(&v));
            }
        }
    }

    #[test]
    fn mu_mu_star_examples() {
        let c2 = FinDimAlgebra::commutative(2);
        let w = AlgState::from_block_weights(&c2, &[q(1, 3), q(2, 3)]).unwrap();
        let x = mu_mu_star(&c2, &w).unwrap();
        assert_eq!(x[0][0], ComplexQ::from_int(3));
        assert_eq!(x[1][1], ComplexQ::ratio(3, 2));
        assert!(x[0][1].is_zero() && x[1][0].is_zero());

        let m2 = alg(&[2]);
        let x = mu_mu_star(&m2, &AlgState::normalized_trace(&m2)).unwrap();
        assert_eq!(x, c_scalar(4, &ComplexQ::from_int(4)));

        for n in 1..=5 {
            let a = FinDimAlgebra::commutative(n);
            let x = mu_mu_star(&a, &AlgState::normalized_trace(&a)).unwrap();
            assert_eq!(x, c_scalar(n, &ComplexQ::from_int(n as i64)));
        }
    }

    #[test]
    fn agrees_with_block_oracle() {
        let a = alg(&[1, 2]);
        let h = vec![
            vec![ComplexQ::ratio(1, 4), ComplexQ::new(q(0, 1), q(1, 10))],
            vec![ComplexQ::new(q(0, 1), q(-1, 10)), ComplexQ::ratio(1, 2)],
        ];
        let w = AlgState::new(&a, vec![vec![vec![ComplexQ::ratio(1, 4)]], h]).unwrap();
        assert_eq!(mu_mu_star(&a, &w).unwrap(), block_scalar_oracle(&a, &w));
    }

    #[test]
    fn self_adjoint_in_gns_inner_product() {
        let a = alg(&[2, 1]);
        let w = AlgState::new(
            &a,
            vec![
                vec![
                    vec![ComplexQ::ratio(1, 2), ComplexQ::ratio(1, 5)],
                    vec![ComplexQ::ratio(1, 5), ComplexQ::ratio(1, 4)],
                ],
                vec![vec![ComplexQ::ratio(1, 4)]],
            ],
        )
        .unwrap();
        let g = gns_gram(&a, &w).unwrap();
        let x = mu_mu_star(&a, &w).unwrap();
        assert_eq!(c_mul(&g, &x), c_mul(&c_adjoint(&x), &g));
    }

    #[test]
    fn delta_forms() {
        let c4 = FinDimAlgebra::commutative(4);
        let d = is_delta_form(&c4, &AlgState::normalized_trace(&c4)).unwrap();
        assert_eq!(d.delta_squared(), Some(&q(4, 1)));
        assert!(matches!(d, DeltaForm::Delta { delta, .. } if (delta - 2.0).abs() < 1e-12));

        let m2 = alg(&[2]);
        let d = is_delta_form(&m2, &AlgState::normalized_trace(&m2)).unwrap();
        assert_eq!(d.delta_squared(), Some(&q(4, 1)));

        let c2 = FinDimAlgebra::commutative(2);
        let w = AlgState::from_block_weights(&c2, &[q(1, 3), q(2, 3)]).unwrap();
        match is_delta_form(&c2, &w).unwrap() {
            DeltaForm::NotDelta { witness, expected, image } => {
                assert_eq!(witness, BasisLabel { block: 1, row: 0, col: 0 });
                assert_eq!(expected, ComplexQ::from_int(3));
                assert_eq!(image[1], ComplexQ::ratio(3, 2));
            }
            other => panic!("unexpected {other:?}"),
        }

        let a = alg(&[1, 2, 3]);
        let d = is_delta_form(&a, &AlgState::plancherel(&a)).unwrap();
        assert_eq!(d.delta_squared(), Some(&q(14, 1)));
    }

    #[test]
    fn invariant_under_unitary_conjugation() {
        let m2 = alg(&[2]);
        let base = vec![vec![
            vec![ComplexQ::ratio(1, 3), ComplexQ::zero()],
            vec![ComplexQ::zero(), ComplexQ::ratio(2, 3)],
        ]];
        let w = AlgState::new(&m2, base.clone()).unwrap();
        let x0 = mu_mu_star(&m2, &w).unwrap();
        for s in [q(1, 2), q(2, 3), q(-5, 7)] {
            let u = rotation(s);
            assert_eq!(c_mul(&u, &c_adjoint(&u)), c_identity(2));
            let qd = c_mul(&c_mul(&u, &base[0]), &c_adjoint(&u));
            let w2 = AlgState::new(&m2, vec![qd]).unwrap();
            let x = mu_mu_star(&m2, &w2).unwrap();
            assert_eq!(x[0][0], x0[0][0]);
            assert_eq!(x, c_scalar(4, &x0[0][0]));
        }
    }

    #[test]
    fn invariant_under_block_permutation() {
        let a = alg(&[2, 2]);
        let w1 = AlgState::from_block_weights(&a, &[q(1, 4), q(3, 4)]).unwrap();
        let w2 = AlgState::from_block_weights(&a, &[q(3, 4), q(1, 4)]).unwrap();
        let x1 = mu_mu_star(&a, &w1).unwrap();
        let x2 = mu_mu_star(&a, &w2).unwrap();
        let mut d1: Vec<_> = (0..8).map(|i| x1[i][i].to_string()).collect();
        let mut d2: Vec<_> = (0..8).map(|i| x2[i][i].to_string()).collect();
        d1.sort();
        d2.sort();
        assert_eq!(d1, d2);
    }

    #[test]
    fn rejects_bad_states() {
        let c2 = FinDimAlgebra::commutative(2);
        assert!(matches!(
            AlgState::from_block_weights(&c2, &[q(1, 2), q(1, 3)]),
            Err(CStarError::TraceNotOne(_))
        ));
        assert!(matches!(
            AlgState::from_block_weights(&c2, &[q(3, 2), q(-1, 2)]),
            Err(CStarError::NotPositive(1))
        ));
        let w = AlgState::from_block_weights(&c2, &[q(1, 1), q(0, 1)]).unwrap();
        assert!(!w.faithful);
        assert!(matches!(gns_gram(&c2, &w), Err(CStarError::NotFaithful(1))));

        let m2 = alg(&[2]);
        let bad = vec![vec![
            vec![ComplexQ::ratio(1, 2), ComplexQ::i()],
            vec![ComplexQ::i(), ComplexQ::ratio(1, 2)],
        ]];
        assert!(matches!(AlgState::new(&m2, bad), Err(CStarError::NotHermitian(0))));
        let indefinite = vec![vec![
            vec![ComplexQ::ratio(1, 2), ComplexQ::one()],
            vec![ComplexQ::one(), ComplexQ::ratio(1, 2)],
        ]];
        assert!(matches!(AlgState::new(&m2, indefinite), Err(CStarError::NotPositive(0))));
    }

    #[test]
    fn state_spec_json() {
        let s: StateSpec =
            serde_json::from_str(r#"{"blocks":[1,1],"density":[[["1/3"]],[["2/3"]]]}"#).unwrap();
        let (a, w) = s.build().unwrap();
        assert!(is_delta_form(&a, &w).unwrap().delta_squared().is_none());
    }
}
