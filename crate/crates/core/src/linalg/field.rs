//! Gaussian elimination over exact fields (rationals, Gaussian rationals,
//! cyclotomic fields).

use num_rational::BigRational;
use num_traits::{One, Zero};

pub trait Field: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiplicative inverse; callers never pass zero.
    fn inv(&self) -> Self;
}

impl Field for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
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

/// Reduced row echelon form in place; returns pivot columns.
fn rref<F: Field>(a: &mut [Vec<F>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv();
        for j in c..cols {
            a[r][j] = a[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..cols {
                if a[r][j].is_zero() {
                    continue;
                }
                let v = a[i][j].sub(&f.mul(&a[r][j]));
                a[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn field_rank<F: Field>(a: &[Vec<F>]) -> usize {
    let mut work = a.to_vec();
    rref(&mut work).len()
}

/// Basis of `{x : A x = 0}`; `zero` fixes the field element used for padding
/// when `A` has no rows.
pub fn field_nullspace<F: Field>(a: &[Vec<F>], cols: usize, zero: &F) -> Vec<Vec<F>> {
    let mut work = a.to_vec();
    let pivots = rref(&mut work);
    let zero = zero.zero_like();
    let one = zero.one_like();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); cols];
        v[free] = one.clone();
        for (r, &pc) in pivots.iter().enumerate() {
            let x = &work[r][free];
            if !x.is_zero() {
                v[pc] = zero.sub(x);
            }
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, or `None` if singular.
pub fn field_inverse<F: Field>(a: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let zero = a[0][0].zero_like();
    let one = zero.one_like();
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Some solution of `A x = b` with `A` of shape `rows × cols`, or `None`
/// if the system is inconsistent.
pub fn field_solve<F: Field>(a: &[Vec<F>], cols: usize, b: &[F]) -> Option<Vec<F>> {
    let zero = b.first()?.zero_like();
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![zero; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_inverse() {
        let a = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        let inv = field_inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![q(1, 1), q(-1, 1)], vec![q(-1, 1), q(2, 1)]]);
        assert!(field_inverse(&[vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]).is_none());
    }

    #[test]
    fn rational_nullspace() {
        let a = vec![vec![q(1, 1), q(2, 1), q(3, 1)]];
        let ns = field_nullspace(&a, 3, &q(0, 1));
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = a[0].iter().zip(v).fold(q(0, 1), |s, (x, y)| s + x * y);
            assert!(Zero::is_zero(&dot));
        }
        assert_eq!(field_rank(&a), 1);
    }

    #[test]
    fn rational_solve() {
        let a = vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(-1, 1)], vec![q(2, 1), q(0, 1)]];
        let x = field_solve(&a, 2, &[q(3, 1), q(1, 1), q(4, 1)]).unwrap();
        assert_eq!(x, vec![q(2, 1), q(1, 1)]);
        assert!(field_solve(&a, 2, &[q(3, 1), q(1, 1), q(5, 1)]).is_none());
    }
}
