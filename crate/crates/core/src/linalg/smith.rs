//! Smith normal form with unimodular transforms.
//!
//! Elimination always pivots on the nonzero entry of least absolute value in
//! the remaining submatrix and reduces with nearest-integer quotients, which
//! keeps the coefficients of the structured boundary matrices small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `U · A · V = S` with `S` diagonal, `U` and `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `S`, length `min(rows, cols)`, in divisibility-chain order
    /// with zeros trailing.
    #[serde(serialize_with = "super::bigint_strings::serialize")]
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().take_while(|d| !d.is_zero()).count()
    }

    /// Checks every structural invariant against the original matrix.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let (m, n) = a.shape();
        if self.u.shape() != (m, m) || self.v.shape() != (n, n) || self.s.shape() != (m, n) {
            return false;
        }
        if &(&self.u * a) * &self.v != self.s {
            return false;
        }
        if !self.u.determinant().abs().is_one() || !self.v.determinant().abs().is_one() {
            return false;
        }
        for i in 0..m {
            for j in 0..n {
                let on_diag = i == j;
                if !on_diag && !self.s[(i, j)].is_zero() {
                    return false;
                }
                if on_diag && self.s[(i, j)] != self.invariant_factors[i] {
                    return false;
                }
            }
        }
        is_divisibility_chain(&self.invariant_factors)
    }
}

/// True when `d₁ | d₂ | ⋯` with nonnegative entries and zeros only at the end.
pub fn is_divisibility_chain(factors: &[BigInt]) -> bool {
    if factors.iter().any(|d| d.is_negative()) {
        return false;
    }
    factors.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        }
    })
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let r = Reducer::run(a.clone(), true, true);
    SmithDecomposition {
        invariant_factors: r.factors(),
        s: r.a,
        u: r.u.expect("tracked"),
        v: r.v.expect("tracked"),
    }
}

/// Invariant factors only; skips the transform bookkeeping.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    // Fewer rows means cheaper row operations; factors are transpose-invariant.
    let work = if a.rows() > a.cols() { a.transpose() } else { a.clone() };
    Reducer::run(work, false, false).factors()
}

/// Diagonal form together with the right transform only: `U·A·V = S` for
/// some unimodular `U` that is not materialised.
pub fn smith_right(a: &IntMatrix) -> (Vec<BigInt>, IntMatrix) {
    let r = Reducer::run(a.clone(), false, true);
    (r.factors(), r.v.expect("tracked"))
}

pub fn rank(a: &IntMatrix) -> usize {
    invariant_factors(a).iter().take_while(|d| !d.is_zero()).count()
}

struct Reducer {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

/// Nearest-integer quotient, so the remainder satisfies `2|r| <= |d|`.
fn nearest_quotient(n: &BigInt, d: &BigInt) -> BigInt {
    let (mut q, r) = n.div_mod_floor(d);
    let twice = &r * 2u32;
    if twice.abs() > d.abs() {
        q += 1;
    }
    q
}

impl Reducer {
    fn run(a: IntMatrix, track_u: bool, track_v: bool) -> Self {
        let (m, n) = a.shape();
        let mut r = Reducer {
            u: track_u.then(|| IntMatrix::identity(m)),
            v: track_v.then(|| IntMatrix::identity(n)),
            a,
        };
        for t in 0..m.min(n) {
            if !r.eliminate(t) {
                break;
            }
        }
        r
    }

    fn factors(&self) -> Vec<BigInt> {
        let k = self.a.rows().min(self.a.cols());
        (0..k).map(|i| self.a[(i, i)].clone()).collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_row_multiple(dst, src, f);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, f);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_col_multiple(dst, src, f);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, f);
        }
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let (m, n) = self.a.shape();
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..m {
            for j in t..n {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if ax.is_one() {
                    return Some((i, j));
                }
                if best.as_ref().map_or(true, |(_, b)| &ax < b) {
                    best = Some(((i, j), ax));
                }
            }
        }
        best.map(|(p, _)| p)
    }

    /// Produces the `t`-th diagonal entry; returns false if the remaining
    /// submatrix is zero.
    fn eliminate(&mut self, t: usize) -> bool {
        let (m, n) = self.a.shape();
        loop {
            let Some((pi, pj)) = self.min_pivot(t) else {
                return false;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            let p = self.a[(t, t)].clone();

            let mut residue = false;
            for i in t + 1..m {
                if self.a[(i, t)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&self.a[(i, t)], &p);
                self.add_row(i, t, &-q);
                residue |= !self.a[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if self.a[(t, j)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&self.a[(t, j)], &p);
                self.add_col(j, t, &-q);
                residue |= !self.a[(t, j)].is_zero();
            }
            if residue {
                continue;
            }

            // Row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !(&self.a[(i, j)] % &p).is_zero())
            });
            if let Some(i) = offender {
                self.add_row(t, i, &BigInt::one());
                continue;
            }

            if p.is_negative() {
                self.a.negate_row(t);
                if let Some(u) = &mut self.u {
                    u.negate_row(t);
                }
            }
            return true;
        }
    }
}
