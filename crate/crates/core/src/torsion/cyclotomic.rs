//! Exact arithmetic in `ℚ(ζ_m)` in the power basis `1, ζ, …, ζ^{φ(m)−1}`.

use std::fmt;
use std::sync::Arc;

use nalgebra::Complex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cstar::rational_to_f64;

/// Coefficients of `Φ_m`, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m > 0);
    // x^m − 1
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in (1..m).filter(|d| m % d == 0) {
        num = exact_div_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, x) in den.iter().enumerate() {
            r[i + j] -= &c * x;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    m: u64,
    /// Monic `Φ_m`, lowest degree first.
    modulus: Vec<BigRational>,
    /// `ζ^j` reduced, for `0 ≤ j < m`.
    powers: Vec<Vec<BigRational>>,
}

impl CyclotomicField {
    pub fn new(m: u64) -> Arc<Self> {
        let m = m.max(1);
        let modulus: Vec<BigRational> = cyclotomic_polynomial(m)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let deg = modulus.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        for j in 0..m as usize {
            let mut v = vec![BigRational::zero(); j + 1];
            v[j] = BigRational::one();
            powers.push(reduce(v, &modulus, deg));
        }
        Arc::new(CyclotomicField { m, modulus, powers })
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// Remainder of `p` modulo the monic `modulus`, padded to `deg` coefficients.
fn reduce(mut p: Vec<BigRational>, modulus: &[BigRational], deg: usize) -> Vec<BigRational> {
    while p.len() > deg {
        let c = p.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let shift = p.len() - deg;
        for (j, x) in modulus[..deg].iter().enumerate() {
            p[shift + j] -= &c * x;
        }
    }
    p.resize(deg, BigRational::zero());
    p
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (j, x) in b.iter().enumerate() {
            r[shift + j] -= &c * x;
        }
        q[shift] = c;
        r = trim(r);
    }
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect()
}

/// Element of `ℚ(ζ_m)`.
#[derive(Clone, Debug)]
pub struct Cyc {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        self.field.m == other.field.m && self.coeffs == other.coeffs
    }
}

impl Eq for Cyc {}

impl Cyc {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Cyc {
            field: field.clone(),
            coeffs: vec![BigRational::zero(); field.degree()],
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::root(field, 0)
    }

    pub fn rational(field: &Arc<CyclotomicField>, q: BigRational) -> Self {
        let mut x = Self::zero(field);
        x.coeffs[0] = q;
        x
    }

    /// `ζ_m^a`.
    pub fn root(field: &Arc<CyclotomicField>, a: i64) -> Self {
        let j = a.rem_euclid(field.m as i64) as usize;
        Cyc {
            field: field.clone(),
            coeffs: field.powers[j].clone(),
        }
    }

    /// `Σ c_k ζ^k` for arbitrary exponents `k`.
    pub fn from_terms(field: &Arc<CyclotomicField>, terms: &[(i64, BigRational)]) -> Self {
        terms.iter().fold(Self::zero(field), |acc, (k, c)| {
            acc.add(&Self::root(field, *k).scale(c))
        })
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = poly_mul(&self.coeffs, &rhs.coeffs);
        Cyc {
            field: self.field.clone(),
            coeffs: reduce(p, &self.field.modulus, self.field.degree()),
        }
    }

    /// Inverse by the extended Euclidean algorithm against `Φ_m`.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let (mut r0, mut r1) = (self.field.modulus.clone(), trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = trim(poly_sub(&s0, &poly_mul(&q, &s1)));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant.
        let c = r0[0].recip();
        let s: Vec<BigRational> = s0.iter().map(|x| x * &c).collect();
        Cyc {
            field: self.field.clone(),
            coeffs: reduce(s, &self.field.modulus, self.field.degree()),
        }
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(&self.field);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&Self::root(&self.field, -(k as i64)).scale(c));
            }
        }
        out
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    pub fn to_complex(&self) -> Complex<f64> {
        let m = self.field.m as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / m;
                Complex::from_polar(rational_to_f64(c), theta)
            })
            .sum()
    }

    /// Nonzero `(k, c_k)` terms of the power-basis expansion.
    pub fn terms(&self) -> Vec<(i64, BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64, c.clone()))
            .collect()
    }

    /// `a` with `self = r·ζ_M^a` for some rational `r > 0`, where
    /// `M = lcm(2, m)` is the number of roots of unity in `ℚ(ζ_m)`.
    pub fn root_of_unity_phase(&self) -> Option<(u64, u64)> {
        let m = self.field.m;
        let big_m = m.lcm(&2);
        let zeta_big = if m % 2 == 0 {
            Self::root(&self.field, 1)
        } else {
            Self::root(&self.field, ((m + 1) / 2) as i64).neg()
        };
        let zeta_inv = zeta_big.inv();
        let mut x = self.clone();
        for a in 0..big_m {
            if x.coeffs[1..].iter().all(Zero::is_zero) && x.coeffs[0].is_positive() {
                return Some((a, big_m));
            }
            x = x.mul(&zeta_inv);
        }
        None
    }

    pub fn to_f64_string(&self) -> String {
        let z = self.to_complex();
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

impl crate::linalg::Field for Cyc {
    fn zero_like(&self) -> Self {
        Cyc::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Cyc::one(&self.field)
    }
    fn is_zero(&self) -> bool {
        Cyc::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Cyc::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Cyc::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Cyc::mul(self, rhs)
    }
    fn inv(&self) -> Self {
        Cyc::inv(self)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(8), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(5).len(), 5);
    }

    #[test]
    fn arithmetic() {
        let f = CyclotomicField::new(4);
        let i = Cyc::root(&f, 1);
        assert_eq!(i.mul(&i), Cyc::one(&f).neg());
        assert_eq!(i.conj(), i.neg());
        assert_eq!(Cyc::root(&f, 7), i.neg());

        let f = CyclotomicField::new(7);
        let x = Cyc::from_terms(
            &f,
            &[(0, BigRational::from_integer(2.into())), (3, BigRational::new(1.into(), 3.into()))],
        );
        assert_eq!(x.mul(&x.inv()), Cyc::one(&f));
        let z = x.to_complex() * x.inv().to_complex();
        assert!((z.re - 1.0).abs() < 1e-12 && z.im.abs() < 1e-12);
        let s: Cyc = (0..7).fold(Cyc::zero(&f), |a, k| a.add(&Cyc::root(&f, k)));
        assert!(s.is_zero());
    }

    #[test]
    fn phases() {
        let f = CyclotomicField::new(3);
        let half = BigRational::new(1.into(), 2.into());
        // −ζ₃ = ζ₆⁵ · 1 with ζ₆ = −ζ₃²
        let x = Cyc::root(&f, 1).neg().scale(&half);
        let (a, big_m) = x.root_of_unity_phase().unwrap();
        assert_eq!(big_m, 6);
        let z = x.to_complex();
        let theta = 2.0 * std::f64::consts::PI * a as f64 / 6.0;
        assert!((z.arg() - theta).sin().abs() < 1e-12 && (z.arg() - theta).cos() > 0.0);

        let f = CyclotomicField::new(4);
        let one_plus_i = Cyc::one(&f).add(&Cyc::root(&f, 1));
        assert!(one_plus_i.root_of_unity_phase().is_none());
        assert_eq!(Cyc::root(&f, 3).root_of_unity_phase(), Some((3, 4)));
    }
}
