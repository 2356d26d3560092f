use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::cyclotomic::{Cyc, CyclotomicField};
use super::group::FiniteGroup;
use super::TorsionError;
use crate::linalg::field_solve;

/// Sparse coordinate vector `Σ c_k e_k`.
pub type Terms = Vec<(usize, Cyc)>;

/// Finite dimensional *-algebra over `ℚ(ζ_m)` with a homogeneous basis graded
/// by a finite group.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedAlgebra {
    field: Arc<CyclotomicField>,
    group: FiniteGroup,
    labels: Vec<String>,
    grading: Vec<usize>,
    unit: Terms,
    /// `products[i][j] = e_i e_j`.
    products: Vec<Vec<Terms>>,
    /// `star[i] = e_i*`; the involution is conjugate-linear.
    star: Vec<Terms>,
}

fn to_dense(field: &Arc<CyclotomicField>, n: usize, t: &Terms) -> Vec<Cyc> {
    let mut v = vec![Cyc::zero(field); n];
    for (k, c) in t {
        v[*k] = v[*k].add(c);
    }
    v
}

fn to_sparse(v: Vec<Cyc>) -> Terms {
    v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
}

impl GradedAlgebra {
    pub fn new(
        field: Arc<CyclotomicField>,
        group: FiniteGroup,
        labels: Vec<String>,
        grading: Vec<usize>,
        unit: Terms,
        products: Vec<Vec<Terms>>,
        star: Vec<Terms>,
    ) -> Result<Self, TorsionError> {
        let n = grading.len();
        let bad = |m: String| Err(TorsionError::InvalidAlgebra(m));
        if n == 0 {
            return bad("algebra has no basis".into());
        }
        if labels.len() != n || star.len() != n || products.len() != n || products.iter().any(|r| r.len() != n) {
            return bad(format!("structure data must describe {n} basis elements"));
        }
        if let Some(&g) = grading.iter().find(|&&g| g >= group.order()) {
            return bad(format!("grading value {g} is not a group element"));
        }
        let in_range = |t: &Terms| t.iter().all(|(k, c)| *k < n && c.field().order() == field.order());
        if !in_range(&unit) || !star.iter().all(in_range) || !products.iter().flatten().all(in_range) {
            return bad("coefficient index or field out of range".into());
        }
        // Merge repeated indices and drop zero coefficients.
        let norm = |t: &Terms| to_sparse(to_dense(&field, n, t));
        let a = GradedAlgebra {
            unit: norm(&unit),
            products: products.iter().map(|r| r.iter().map(norm).collect()).collect(),
            star: star.iter().map(norm).collect(),
            field,
            group,
            labels,
            grading,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<(), TorsionError> {
        let n = self.dim();
        let g = &self.group;
        let bad = |m: String| Err(TorsionError::InvalidAlgebra(m));
        for i in 0..n {
            for j in 0..n {
                let want = g.mul(self.grading[i], self.grading[j]);
                if self.products[i][j].iter().any(|(k, _)| self.grading[*k] != want) {
                    return bad(format!("{}·{} leaves the graded component", self.labels[i], self.labels[j]));
                }
            }
            let want = g.inv(self.grading[i]);
            if self.star[i].iter().any(|(k, _)| self.grading[*k] != want) {
                return bad(format!("{}* is not in the inverse component", self.labels[i]));
            }
        }
        let unit = self.dense(&self.unit);
        for i in 0..n {
            let e = self.basis_vector(i);
            if self.mul(&unit, &e) != e || self.mul(&e, &unit) != e {
                return bad(format!("unit does not act trivially on {}", self.labels[i]));
            }
            if self.star_vec(&self.star_vec(&e)) != e {
                return bad(format!("involution is not involutive on {}", self.labels[i]));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.dense(&self.products[i][j]);
                let lhs = self.star_vec(&ij);
                let rhs = self.mul(&self.dense(&self.star[j]), &self.dense(&self.star[i]));
                if lhs != rhs {
                    return bad(format!("(xy)* = y*x* fails for x = {}, y = {}", self.labels[i], self.labels[j]));
                }
                for k in 0..n {
                    let left = self.mul(&ij, &self.basis_vector(k));
                    let right = self.mul(&self.basis_vector(i), &self.dense(&self.products[j][k]));
                    if left != right {
                        return bad(format!(
                            "associativity fails at ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Algebra of square matrices spanned by `mats`, graded by `grading`;
    /// structure constants are found by solving in the span.
    pub fn from_matrices(
        field: Arc<CyclotomicField>,
        group: FiniteGroup,
        grading: Vec<usize>,
        mats: Vec<Vec<Vec<Cyc>>>,
    ) -> Result<Self, TorsionError> {
        let n = mats.len();
        let d = mats.first().map_or(0, Vec::len);
        if n == 0 || mats.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
            return Err(TorsionError::InvalidAlgebra("matrices must be nonempty and square of one size".into()));
        }
        let flat = |m: &Vec<Vec<Cyc>>| -> Vec<Cyc> { m.iter().flatten().cloned().collect() };
        // Columns are the flattened basis matrices.
        let cols: Vec<Vec<Cyc>> = mats.iter().map(flat).collect();
        let a: Vec<Vec<Cyc>> = (0..d * d).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let express = |m: &Vec<Vec<Cyc>>| -> Result<Terms, TorsionError> {
            field_solve(&a, n, &flat(m))
                .map(to_sparse)
                .ok_or_else(|| TorsionError::InvalidAlgebra("span of the matrices is not closed".into()))
        };
        if crate::linalg::field_rank(&a) != n {
            return Err(TorsionError::InvalidAlgebra("matrices are linearly dependent".into()));
        }
        let matmul = |x: &Vec<Vec<Cyc>>, y: &Vec<Vec<Cyc>>| -> Vec<Vec<Cyc>> {
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| (0..d).fold(Cyc::zero(&field), |acc, k| acc.add(&x[i][k].mul(&y[k][j]))))
                        .collect()
                })
                .collect()
        };
        let adjoint = |x: &Vec<Vec<Cyc>>| -> Vec<Vec<Cyc>> {
            (0..d).map(|i| (0..d).map(|j| x[j][i].conj()).collect()).collect()
        };
        let identity: Vec<Vec<Cyc>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { Cyc::one(&field) } else { Cyc::zero(&field) }).collect())
            .collect();
        let unit = express(&identity)?;
        let mut products = Vec::with_capacity(n);
        for x in &mats {
            let row: Result<Vec<Terms>, _> = mats.iter().map(|y| express(&matmul(x, y))).collect();
            products.push(row?);
        }
        let star: Result<Vec<Terms>, _> = mats.iter().map(|x| express(&adjoint(x))).collect();
        let labels = (0..n).map(|i| format!("b{i}")).collect();
        Self::new(field, group, labels, grading, unit, products, star?)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn grading(&self) -> &[usize] {
        &self.grading
    }

    pub fn dim(&self) -> usize {
        self.grading.len()
    }

    pub fn product_terms(&self, i: usize, j: usize) -> &Terms {
        &self.products[i][j]
    }

    pub fn star_terms(&self, i: usize) -> &Terms {
        &self.star[i]
    }

    pub fn unit_vector(&self) -> Vec<Cyc> {
        self.dense(&self.unit)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Cyc> {
        let mut v = vec![Cyc::zero(&self.field); self.dim()];
        v[i] = Cyc::one(&self.field);
        v
    }

    pub fn dense(&self, t: &Terms) -> Vec<Cyc> {
        to_dense(&self.field, self.dim(), t)
    }

    pub fn mul(&self, x: &[Cyc], y: &[Cyc]) -> Vec<Cyc> {
        let mut out = vec![Cyc::zero(&self.field); self.dim()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a.mul(b);
                for (k, c) in &self.products[i][j] {
                    out[*k] = out[*k].add(&ab.mul(c));
                }
            }
        }
        out
    }

    pub fn star_vec(&self, x: &[Cyc]) -> Vec<Cyc> {
        let mut out = vec![Cyc::zero(&self.field); self.dim()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            let ac = a.conj();
            for (k, c) in &self.star[i] {
                out[*k] = out[*k].add(&ac.mul(c));
            }
        }
        out
    }

    /// `Tr(L_{e_k})` for each basis element.
    pub fn regular_traces(&self) -> Vec<Cyc> {
        (0..self.dim())
            .map(|k| {
                (0..self.dim()).fold(Cyc::zero(&self.field), |acc, l| {
                    let c = self.products[k][l]
                        .iter()
                        .find(|(i, _)| *i == l)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(|| Cyc::zero(&self.field));
                    acc.add(&c)
                })
            })
            .collect()
    }

    /// The same structure constants with the trivial one-element grading.
    pub fn ungraded(&self) -> Self {
        GradedAlgebra {
            group: FiniteGroup::cyclic(1),
            grading: vec![0; self.dim()],
            ..self.clone()
        }
    }
}

/// Coefficients as `[exponent, "p/q"]` pairs meaning `Σ c·ζ_m^exponent`.
pub type CoeffRepr = Vec<(i64, String)>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: usize,
    pub right: usize,
    pub terms: Vec<(usize, CoeffRepr)>,
}

/// JSON form of a graded algebra: either explicit structure constants or a
/// list of matrices spanning a *-subalgebra.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Structure {
        root_order: u64,
        group: FiniteGroup,
        labels: Vec<String>,
        grading: Vec<usize>,
        unit: Vec<(usize, CoeffRepr)>,
        products: Vec<ProductEntry>,
        star: Vec<Vec<(usize, CoeffRepr)>>,
    },
    Matrices {
        root_order: u64,
        group: FiniteGroup,
        grading: Vec<usize>,
        matrices: Vec<Vec<Vec<CoeffRepr>>>,
    },
}

fn parse_coeff(field: &Arc<CyclotomicField>, c: &CoeffRepr) -> Result<Cyc, TorsionError> {
    let mut terms = Vec::with_capacity(c.len());
    for (k, s) in c {
        let q: BigRational = s
            .trim()
            .parse()
            .map_err(|_| TorsionError::Parse(format!("invalid rational `{s}`")))?;
        terms.push((*k, q));
    }
    Ok(Cyc::from_terms(field, &terms))
}

fn render_coeff(c: &Cyc) -> CoeffRepr {
    c.terms().into_iter().map(|(k, q)| (k, q.to_string())).collect()
}

fn parse_terms(field: &Arc<CyclotomicField>, t: &[(usize, CoeffRepr)]) -> Result<Terms, TorsionError> {
    t.iter().map(|(k, c)| Ok((*k, parse_coeff(field, c)?))).collect()
}

fn render_terms(t: &Terms) -> Vec<(usize, CoeffRepr)> {
    t.iter().map(|(k, c)| (*k, render_coeff(c))).collect()
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<GradedAlgebra, TorsionError> {
        match self {
            AlgebraSpec::Structure {
                root_order,
                group,
                labels,
                grading,
                unit,
                products,
                star,
            } => {
                let field = CyclotomicField::new(*root_order);
                let n = grading.len();
                let mut prods = vec![vec![Terms::new(); n]; n];
                for p in products {
                    if p.left >= n || p.right >= n {
                        return Err(TorsionError::InvalidAlgebra(format!(
                            "product entry ({}, {}) out of range",
                            p.left, p.right
                        )));
                    }
                    prods[p.left][p.right] = parse_terms(&field, &p.terms)?;
                }
                let star: Result<Vec<Terms>, _> = star.iter().map(|t| parse_terms(&field, t)).collect();
                GradedAlgebra::new(
                    field.clone(),
                    group.clone(),
                    labels.clone(),
                    grading.clone(),
                    parse_terms(&field, unit)?,
                    prods,
                    star?,
                )
            }
            AlgebraSpec::Matrices {
                root_order,
                group,
                grading,
                matrices,
            } => {
                let field = CyclotomicField::new(*root_order);
                let mats: Result<Vec<Vec<Vec<Cyc>>>, TorsionError> = matrices
                    .iter()
                    .map(|m| {
                        m.iter()
                            .map(|r| r.iter().map(|c| parse_coeff(&field, c)).collect())
                            .collect()
                    })
                    .collect();
                GradedAlgebra::from_matrices(field, group.clone(), grading.clone(), mats?)
            }
        }
    }

    pub fn from_algebra(a: &GradedAlgebra) -> Self {
        let n = a.dim();
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !a.products[i][j].is_empty() {
                    products.push(ProductEntry {
                        left: i,
                        right: j,
                        terms: render_terms(&a.products[i][j]),
                    });
                }
            }
        }
        AlgebraSpec::Structure {
            root_order: a.field.order(),
            group: a.group.clone(),
            labels: a.labels.clone(),
            grading: a.grading.clone(),
            unit: render_terms(&a.unit),
            products,
            star: a.star.iter().map(render_terms).collect(),
        }
    }
}

impl Serialize for GradedAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AlgebraSpec::from_algebra(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        AlgebraSpec::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}
