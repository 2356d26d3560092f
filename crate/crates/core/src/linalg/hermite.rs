use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Row-style Hermite normal form: echelon rows with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`. Zero rows are dropped,
/// so the result is a canonical basis of the row lattice.
pub fn hermite_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        // Euclid down the column until a single nonzero entry remains at row r.
        loop {
            let pivot = (r..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = pivot else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                for j in c..ncols {
                    let v = &q * &a[r][j];
                    a[i][j] -= v;
                }
                done &= a[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in &mut a[r] {
                *x = -std::mem::take(x);
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if q.is_zero() {
                continue;
            }
            for j in c..ncols {
                let v = &q * &a[r][j];
                a[i][j] -= v;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Hermite normal form of the row lattice of a matrix.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let h = hermite_rows(&a.row_vecs());
    let cols = a.cols();
    let rows = h.len();
    IntMatrix::from_entries(rows, cols, h.into_iter().flatten().collect()).expect("consistent shape")
}
