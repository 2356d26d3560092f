use std::fmt;
use std::ops::{Index, IndexMut, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Builds a matrix from machine-integer rows. Panics on ragged input.
    pub fn from_rows<R, T>(rows: &[R]) -> Self
    where
        R: AsRef<[T]>,
        T: Copy + Into<BigInt>,
    {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().map(|&x| x.into()));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn diagonal<T: Copy + Into<BigInt>>(rows: usize, cols: usize, diag: &[T]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate().take(rows.min(cols)) {
            m[(i, i)] = d.into();
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    /// Determinant by fraction-free (Bareiss) elimination. Square matrices only.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Rank over the rationals; agrees with the count of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        let mut a = self.row_vecs();
        let (m, n) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                let g = a[r][c].clone();
                for j in c..n {
                    let v = &a[i][j] * &g - &a[r][j] * &f;
                    a[i][j] = v;
                }
            }
            r += 1;
            if r == m {
                break;
            }
        }
        r
    }

    /// Renders the shared text format: `rows cols` then one line per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += f * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        let c = self.cols;
        for j in 0..c {
            if self.entries[src * c + j].is_zero() {
                continue;
            }
            let v = &self.entries[src * c + j] * f;
            self.entries[dst * c + j] += v;
        }
    }

    /// col[dst] += f * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        let c = self.cols;
        for i in 0..self.rows {
            if self.entries[i * c + src].is_zero() {
                continue;
            }
            let v = &self.entries[i * c + src] * f;
            self.entries[i * c + dst] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        let c = self.cols;
        for x in &mut self.entries[i * c..(i + 1) * c] {
            *x = -std::mem::take(x);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", line.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Rows of decimal strings, so entries of any size survive JSON.
impl serde::Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl FromStr for IntMatrix {
    type Err = LinalgError;

    /// Parses `rows cols` followed by `rows` lines of whitespace-separated integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| LinalgError::Parse("empty matrix text".into()))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(LinalgError::Parse(format!(
                "header must be `rows cols`, got `{header}`"
            )));
        }
        let parse_dim = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| LinalgError::Parse(format!("invalid dimension `{t}`")))
        };
        let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| LinalgError::Parse(format!("missing row {}", r + 1)))?;
            let before = entries.len();
            for tok in line.split_whitespace() {
                let v = tok
                    .parse::<BigInt>()
                    .map_err(|_| LinalgError::Parse(format!("invalid integer `{tok}` in row {}", r + 1)))?;
                entries.push(v);
            }
            if entries.len() - before != cols {
                return Err(LinalgError::Parse(format!(
                    "row {} has {} entries, expected {cols}",
                    r + 1,
                    entries.len() - before
                )));
            }
        }
        if let Some(extra) = lines.next() {
            return Err(LinalgError::Parse(format!("unexpected trailing line `{extra}`")));
        }
        Ok(IntMatrix { rows, cols, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let m: IntMatrix = "2 3\n1 -2 3\n0 0 7\n".parse().unwrap();
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m[(0, 1)], BigInt::from(-2));
        assert_eq!(m.to_text().parse::<IntMatrix>().unwrap(), m);
    }

    #[test]
    fn parse_rejects_bad_rows() {
        assert!("2 2\n1 2\n3\n".parse::<IntMatrix>().is_err());
        assert!("2 2\n1 2\n".parse::<IntMatrix>().is_err());
        assert!("1 1\nx\n".parse::<IntMatrix>().is_err());
        assert!("".parse::<IntMatrix>().is_err());
    }

    #[test]
    fn empty_matrix_text() {
        let m: IntMatrix = "0 3\n".parse().unwrap();
        assert_eq!(m.shape(), (0, 3));
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_rows(&[[2, -1, 0], [1, 3, 4], [0, 5, 1]]);
        // 2(3-20) + 1(1-0) = -33
        assert_eq!(m.determinant(), BigInt::from(-33));
        assert_eq!(IntMatrix::from_rows(&[[0, 1], [1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(IntMatrix::from_rows(&[[1, 2], [2, 4]]).determinant(), BigInt::zero());
    }

    #[test]
    fn rank_basic() {
        assert_eq!(IntMatrix::from_rows(&[[1, 1], [1, 1]]).rank(), 1);
        assert_eq!(IntMatrix::zeros(3, 2).rank(), 0);
        assert_eq!(IntMatrix::identity(4).rank(), 4);
    }
}
