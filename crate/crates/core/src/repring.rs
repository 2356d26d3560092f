//! Fusion combinatorics of SU_q(2) and the representation ring of its
//! SO_q(3) quotient.
//!
//! Integral spins generate `R(G) ≅ ℤ[t]` with `t = [V(0)] + [V(1)]`;
//! half-integral spins generate the module `R^ω(G) ≅ t^{1/2}ℤ[t]` with
//! `t^{1/2} = [V(1/2)]`. Writing `s = [V(1/2)]`, the classes satisfy the
//! three-term recursion `[V(n + 1/2)] = s·[V(n)] − [V(n − 1/2)]`, so every
//! class is a polynomial in `s` of the parity of its spin.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepRingError {
    #[error("irreducible sum mixes integral and half-integral spins")]
    MixedParity,
    #[error("element is not effective: spin {spin} has multiplicity {multiplicity}")]
    NonEffective { spin: Spin, multiplicity: BigInt },
    #[error("module action requires an integral left factor")]
    HalfIntegralScalar,
}

/// An irreducible of SU_q(2), stored as twice its spin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Spin(pub u32);

impl Spin {
    pub const TRIVIAL: Spin = Spin(0);
    pub const FUNDAMENTAL: Spin = Spin(1);

    pub fn from_twice(twice: u32) -> Self {
        Spin(twice)
    }

    /// Spin `n` for integral `n`.
    pub fn integral(n: u32) -> Self {
        Spin(2 * n)
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn parity(self) -> Parity {
        if self.0 % 2 == 0 {
            Parity::Integral
        } else {
            Parity::HalfIntegral
        }
    }

    /// Classical dimension `2n + 1`.
    pub fn dimension(self) -> u64 {
        u64::from(self.0) + 1
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Integral,
    HalfIntegral,
}

impl Parity {
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Integral
        } else {
            Parity::HalfIntegral
        }
    }

    /// Exponent of `t^{1/2}` contributed by the generator, in half units.
    pub fn half_shift(self) -> u32 {
        match self {
            Parity::Integral => 0,
            Parity::HalfIntegral => 1,
        }
    }
}

/// Dense integer polynomial in `t`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Poly::new(vec![c.into()])
    }

    pub fn t() -> Self {
        Poly::monomial(1, 1)
    }

    pub fn monomial<T: Into<BigInt>>(degree: usize, c: T) -> Self {
        let mut v = vec![BigInt::zero(); degree + 1];
        v[degree] = c.into();
        Poly::new(v)
    }

    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.0.iter().cloned());
        Poly(v)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    /// Horner evaluation at an integer.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.0, "")
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt], prefix: &str) -> fmt::Result {
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        let mag = c.abs();
        let var = match (prefix.is_empty(), k) {
            (true, 0) => String::new(),
            (true, 1) => "t".into(),
            (true, k) => format!("t^{k}"),
            (false, 0) => prefix.to_string(),
            (false, 1) => format!("{prefix}t"),
            (false, k) => format!("{prefix}t^{k}"),
        };
        if var.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            f.write_str(&var)?;
        } else {
            write!(f, "{mag}{var}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// `Σ c_k t^k` (integral) or `Σ c_k t^{1/2} t^k` (half-integral).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepRingElement {
    parity: Parity,
    poly: Poly,
}

impl RepRingElement {
    pub fn new(parity: Parity, poly: Poly) -> Self {
        RepRingElement { parity, poly }
    }

    pub fn integral(poly: Poly) -> Self {
        Self::new(Parity::Integral, poly)
    }

    pub fn half_integral(poly: Poly) -> Self {
        Self::new(Parity::HalfIntegral, poly)
    }

    /// `t^{1/2}`.
    pub fn sqrt_t() -> Self {
        Self::half_integral(Poly::one())
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, RepRingError> {
        if self.parity != rhs.parity {
            return Err(RepRingError::MixedParity);
        }
        Ok(Self::new(self.parity, &self.poly + &rhs.poly))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, RepRingError> {
        if self.parity != rhs.parity {
            return Err(RepRingError::MixedParity);
        }
        Ok(Self::new(self.parity, &self.poly - &rhs.poly))
    }

    /// Product with the rule `t^{1/2}·t^{1/2} = t`.
    pub fn product(&self, rhs: &Self) -> Self {
        let mut poly = &self.poly * &rhs.poly;
        if self.parity == Parity::HalfIntegral && rhs.parity == Parity::HalfIntegral {
            poly = poly.shift(1);
        }
        Self::new(self.parity.combine(rhs.parity), poly)
    }

    /// Classical dimension, using `dim t = 4` and `dim t^{1/2} = 2`.
    pub fn dimension(&self) -> BigInt {
        let base = self.poly.eval(&BigInt::from(4));
        match self.parity {
            Parity::Integral => base,
            Parity::HalfIntegral => base * 2,
        }
    }
}

impl fmt::Display for RepRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parity {
            Parity::Integral => write_terms(f, self.poly.coeffs(), ""),
            Parity::HalfIntegral => write_terms(f, self.poly.coeffs(), "t^(1/2)"),
        }
    }
}

/// Action of `R(G)` on itself and on `R^ω(G)`.
pub fn module_action(p: &RepRingElement, x: &RepRingElement) -> Result<RepRingElement, RepRingError> {
    if p.parity != Parity::Integral {
        return Err(RepRingError::HalfIntegralScalar);
    }
    Ok(p.product(x))
}

/// Formal sum of irreducibles with nonnegative multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IrrepSum {
    mults: BTreeMap<Spin, BigInt>,
}

impl IrrepSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(spin: Spin) -> Self {
        let mut s = Self::zero();
        s.add_multiple(spin, BigInt::one());
        s
    }

    pub fn from_pairs<I: IntoIterator<Item = (Spin, u64)>>(pairs: I) -> Self {
        let mut s = Self::zero();
        for (spin, m) in pairs {
            s.add_multiple(spin, BigInt::from(m));
        }
        s
    }

    /// Builds a sum from signed multiplicities; negative entries are rejected.
    pub fn try_from_signed(mults: BTreeMap<Spin, BigInt>) -> Result<Self, RepRingError> {
        let mut s = Self::zero();
        for (spin, m) in mults {
            if m.is_negative() {
                return Err(RepRingError::NonEffective {
                    spin,
                    multiplicity: m,
                });
            }
            s.add_multiple(spin, m);
        }
        Ok(s)
    }

    fn add_multiple(&mut self, spin: Spin, m: BigInt) {
        if m.is_zero() {
            return;
        }
        let e = self.mults.entry(spin).or_default();
        *e += m;
    }

    pub fn multiplicity(&self, spin: Spin) -> BigInt {
        self.mults.get(&spin).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Spin, &BigInt)> {
        self.mults.iter().map(|(s, m)| (*s, m))
    }

    pub fn is_zero(&self) -> bool {
        self.mults.is_empty()
    }

    /// Common parity of all summands; `None` for the empty sum.
    pub fn parity(&self) -> Result<Option<Parity>, RepRingError> {
        let mut it = self.mults.keys().map(|s| s.parity());
        let Some(first) = it.next() else {
            return Ok(None);
        };
        if it.all(|p| p == first) {
            Ok(Some(first))
        } else {
            Err(RepRingError::MixedParity)
        }
    }

    pub fn dimension(&self) -> BigInt {
        self.iter().map(|(s, m)| m * BigInt::from(s.dimension())).sum()
    }

    pub fn sum(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (s, m) in rhs.iter() {
            out.add_multiple(s, m.clone());
        }
        out
    }

    /// Bilinear extension of [`fusion_tensor`].
    pub fn tensor(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ma) in self.iter() {
            for (b, mb) in rhs.iter() {
                let prod = ma * mb;
                for (c, _) in fusion_tensor(a, b).iter() {
                    out.add_multiple(c, prod.clone());
                }
            }
        }
        out
    }
}

impl fmt::Display for IrrepSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(s, m)| if m.is_one() { format!("V({s})") } else { format!("{m}V({s})") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Clebsch–Gordan rule: `V(m) ⊗ V(n) = ⨁_{k=|m−n|}^{m+n} V(k)`.
pub fn fusion_tensor(m: Spin, n: Spin) -> IrrepSum {
    let lo = m.0.abs_diff(n.0);
    let hi = m.0 + n.0;
    IrrepSum::from_pairs((lo..=hi).step_by(2).map(|k| (Spin(k), 1)))
}

/// Classes `[V(j/2)]` as polynomials in `s = [V(1/2)]`, `j = 0..=max_twice`.
fn chebyshev_table(max_twice: u32) -> Vec<Poly> {
    let s = Poly::t(); // the variable here is s, not t
    let mut table = vec![Poly::one()];
    if max_twice >= 1 {
        table.push(s.clone());
    }
    for j in 2..=max_twice as usize {
        let next = &(&s * &table[j - 1]) - &table[j - 2];
        table.push(next);
    }
    table
}

/// Splits an `s`-polynomial of a single parity into its `t`-coefficients.
fn s_to_t(spoly: &Poly, parity: Parity) -> Poly {
    let off = parity.half_shift() as usize;
    Poly::new(
        spoly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == off)
            .map(|(_, c)| c.clone())
            .collect(),
    )
}

fn t_to_s(p: &RepRingElement) -> Poly {
    let off = p.parity.half_shift() as usize;
    let Some(deg) = p.poly.degree() else {
        return Poly::zero();
    };
    let mut v = vec![BigInt::zero(); 2 * deg + off + 1];
    for (k, c) in p.poly.coeffs().iter().enumerate() {
        v[2 * k + off] = c.clone();
    }
    Poly::new(v)
}

/// Class of a sum of irreducibles in `ℤ[t]` or `t^{1/2}ℤ[t]`.
pub fn irreps_to_polynomial(x: &IrrepSum) -> Result<RepRingElement, RepRingError> {
    let parity = x.parity()?.unwrap_or(Parity::Integral);
    let max = x.iter().map(|(s, _)| s.0).max().unwrap_or(0);
    let table = chebyshev_table(max);
    let mut acc = Poly::zero();
    for (s, m) in x.iter() {
        acc = &acc + &table[s.0 as usize].scale(m);
    }
    Ok(RepRingElement::new(parity, s_to_t(&acc, parity)))
}

/// Inverse of [`irreps_to_polynomial`]; fails on non-effective classes.
pub fn polynomial_to_irreps(p: &RepRingElement) -> Result<IrrepSum, RepRingError> {
    Ok(IrrepSum::try_from_signed(polynomial_to_signed_irreps(p))?)
}

/// Signed multiplicities of a virtual class, by peeling leading terms off
/// the monic basis `[V(j/2)] = s^j + ⋯`.
pub fn polynomial_to_signed_irreps(p: &RepRingElement) -> BTreeMap<Spin, BigInt> {
    let mut rest = t_to_s(p);
    let mut out = BTreeMap::new();
    let Some(top) = rest.degree() else {
        return out;
    };
    let table = chebyshev_table(top as u32);
    while let Some(d) = rest.degree() {
        let c = rest.coeff(d);
        rest = &rest - &table[d].scale(&c);
        out.insert(Spin(d as u32), c);
    }
    out
}
