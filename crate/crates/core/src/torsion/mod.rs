//! Group-graded finite dimensional *-algebras: ergodicity, extraction of the
//! supporting subgroup and 2-cocycle, twisted group algebras and Wedderburn
//! block sizes.

mod algebra;
mod cocycle;
mod cyclotomic;
mod group;

pub use algebra::{AlgebraSpec, CoeffRepr, GradedAlgebra, ProductEntry, Terms};
pub use cocycle::{cocycle_lattice_generators, sample_cocycle, Cocycle};
pub use cyclotomic::{cyclotomic_polynomial, Cyc, CyclotomicField};
pub use group::FiniteGroup;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{field_nullspace, field_rank};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorsionError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not ergodic: the identity component has dimension {0}")]
    NotErgodic(usize),
    #[error("component of group element {element} has dimension {dimension}, expected at most 1")]
    ComponentDimension { element: usize, dimension: usize },
    #[error("component of group element {0} contains no invertible element")]
    NotInvertible(usize),
    #[error("support is not a subgroup: {0}")]
    NotClosed(String),
    #[error("structure constant for ({0}, {1}) is not a positive multiple of a root of unity in the field")]
    PhaseNotRootOfUnity(usize, usize),
    #[error("algebra is not semisimple; radical element {0}")]
    NotSemisimple(String),
    #[error("inner product Tr(L_(x*y)) is not positive definite")]
    NotPositive,
    #[error("spectral clustering found {clusters:?} but the exact center has dimension {center}")]
    SpectralMismatch { center: usize, clusters: Vec<usize> },
}

/// `dim B_e = 1`.
pub fn is_ergodic(b: &GradedAlgebra) -> bool {
    identity_dimension(b) == 1
}

fn identity_dimension(b: &GradedAlgebra) -> usize {
    let e = b.group().identity();
    b.grading().iter().filter(|&&g| g == e).count()
}

/// Subgroup `H` supporting an ergodic graded algebra with one-dimensional
/// components, and the cocycle read off from `δ_s δ_t = ω(s,t) δ_{st}`.
#[derive(Clone, Debug, Serialize)]
pub struct TorsionData {
    /// Elements of the ambient grading group forming `H`, in the order used
    /// to index `H`.
    pub support: Vec<usize>,
    pub cocycle: Cocycle,
}

pub fn extract_torsion_data(b: &GradedAlgebra) -> Result<TorsionData, TorsionError> {
    let g = b.group();
    let dim_e = identity_dimension(b);
    if dim_e != 1 {
        return Err(TorsionError::NotErgodic(dim_e));
    }
    let e = g.identity();
    let mut basis_of = vec![None; g.order()];
    for (i, &s) in b.grading().iter().enumerate() {
        if basis_of[s].is_some() {
            let dimension = b.grading().iter().filter(|&&x| x == s).count();
            return Err(TorsionError::ComponentDimension { element: s, dimension });
        }
        basis_of[s] = Some(i);
    }
    let support: Vec<usize> = std::iter::once(e)
        .chain((0..g.order()).filter(|&s| s != e && basis_of[s].is_some()))
        .collect();
    let unit = b.unit_vector();
    let vec_of = |s: usize| -> Vec<Cyc> {
        if s == e {
            unit.clone()
        } else {
            b.basis_vector(basis_of[s].unwrap())
        }
    };
    for &s in &support {
        let x = vec_of(s);
        let xs = b.star_vec(&x);
        if b.mul(&xs, &x).iter().all(Cyc::is_zero) || b.mul(&x, &xs).iter().all(Cyc::is_zero) {
            return Err(TorsionError::NotInvertible(s));
        }
    }
    let h = g.subgroup(&support)?;
    let n = support.len();
    let mut phases = vec![vec![(0u64, 1u64); n]; n];
    for (i, &s) in support.iter().enumerate() {
        for (j, &t) in support.iter().enumerate() {
            let st = g.mul(s, t);
            let prod = b.mul(&vec_of(s), &vec_of(t));
            let target = vec_of(st);
            // prod = c · target with target a basis vector or the unit.
            let k = target.iter().position(|c| !c.is_zero()).unwrap();
            let c = prod[k].mul(&target[k].inv());
            if prod.iter().zip(&target).any(|(p, q)| *p != c.mul(q)) {
                return Err(TorsionError::NotClosed(format!("product of components {s} and {t}")));
            }
            phases[i][j] = c.root_of_unity_phase().ok_or(TorsionError::PhaseNotRootOfUnity(s, t))?;
        }
    }
    let big_m = phases.first().map_or(1, |r| r[0].1).max(1);
    let table = phases
        .iter()
        .map(|r| r.iter().map(|&(a, _)| a).collect())
        .collect();
    let cocycle = Cocycle::new(h, big_m, table)?;
    Ok(TorsionData { support, cocycle })
}

/// `C*_ω(H)`: basis `δ_s`, `δ_s δ_t = ω(s,t) δ_{st}`, `δ_s* = ω(s,s⁻¹)⁻¹ δ_{s⁻¹}`.
pub fn twisted_group_algebra(w: &Cocycle) -> GradedAlgebra {
    let g = w.group();
    let n = g.order();
    let field = CyclotomicField::new(w.root_order());
    let root = |a: u64| Cyc::root(&field, a as i64);
    let products = (0..n)
        .map(|s| (0..n).map(|t| vec![(g.mul(s, t), root(w.value(s, t)))]).collect())
        .collect();
    let star = (0..n)
        .map(|s| {
            let si = g.inv(s);
            vec![(si, Cyc::root(&field, -(w.value(s, si) as i64)))]
        })
        .collect();
    let labels = (0..n).map(|s| format!("d{s}")).collect();
    GradedAlgebra::new(
        field.clone(),
        g.clone(),
        labels,
        (0..n).collect(),
        vec![(g.identity(), Cyc::one(&field))],
        products,
        star,
    )
    .expect("twisted group algebra of a cocycle is a graded *-algebra")
}

/// Wedderburn block sizes `(m₁,…,m_r)` of a semisimple *-algebra, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub blocks: Vec<usize>,
    pub center_dimension: usize,
}

impl BlockDecomposition {
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|m| m * m).sum()
    }
}

/// Basis of the center, computed exactly.
pub fn center_basis(b: &GradedAlgebra) -> Vec<Vec<Cyc>> {
    let n = b.dim();
    let zero = Cyc::zero(b.field());
    // Σ_i x_i (c_ij^l − c_ji^l) = 0 for all j, l.
    let mut rows = Vec::with_capacity(n * n);
    for j in 0..n {
        let mut block = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for (l, c) in b.product_terms(i, j) {
                block[*l][i] = block[*l][i].add(c);
            }
            for (l, c) in b.product_terms(j, i) {
                block[*l][i] = block[*l][i].sub(c);
            }
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())));
    }
    field_nullspace(&rows, n, &zero)
}

/// `T[i][j] = Tr(L_{e_i e_j})`.
fn trace_form(b: &GradedAlgebra) -> Vec<Vec<Cyc>> {
    let n = b.dim();
    let tr = b.regular_traces();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    b.product_terms(i, j)
                        .iter()
                        .fold(Cyc::zero(b.field()), |acc, (k, c)| acc.add(&c.mul(&tr[*k])))
                })
                .collect()
        })
        .collect()
}

pub const CLUSTER_TOLERANCE: f64 = 1e-9;
const SPECTRAL_ATTEMPTS: usize = 8;

/// Block sizes from the spectrum of left multiplication by a random
/// self-adjoint central element: eigenvalue `λ_j` has multiplicity `m_j²`.
/// Clusters are cross-checked against the exact center dimension.
pub fn block_decomposition(b: &GradedAlgebra, seed: u64) -> Result<BlockDecomposition, TorsionError> {
    let n = b.dim();
    let t = trace_form(b);
    if field_rank(&t) < n {
        let zero = Cyc::zero(b.field());
        let w = field_nullspace(&t, n, &zero).into_iter().next().unwrap_or_default();
        let desc: Vec<String> = w
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})·{}", b.labels()[k]))
            .collect();
        return Err(TorsionError::NotSemisimple(desc.join(" + ")));
    }
    let center = center_basis(b);
    let r = center.len();
    let to_c = |v: &[Cyc]| -> Vec<Complex<f64>> { v.iter().map(Cyc::to_complex).collect() };

    // ⟨e_i, e_j⟩ = Tr(L_{e_i* e_j}) = Σ_a s_ia T[a][j].
    let mut p = DMatrix::<Complex<f64>>::zeros(n, n);
    for i in 0..n {
        for (a, s) in b.star_terms(i) {
            let s = s.to_complex();
            for j in 0..n {
                p[(i, j)] += s * t[*a][j].to_complex();
            }
        }
    }
    // Entry (i,j) is conj-linear in i; nalgebra wants P with x†Py.
    let p = (p.clone() + p.adjoint()).map(|z| z * 0.5);
    let chol = p.cholesky().ok_or(TorsionError::NotPositive)?;
    let r_mat = chol.l().adjoint();
    let r_inv = r_mat.clone().try_inverse().ok_or(TorsionError::NotPositive)?;

    let center_c: Vec<Vec<Complex<f64>>> = center.iter().map(|v| to_c(v)).collect();
    let center_star: Vec<Vec<Complex<f64>>> = center.iter().map(|v| to_c(&b.star_vec(v))).collect();
    let structure: Vec<Vec<Vec<(usize, Complex<f64>)>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| b.product_terms(i, j).iter().map(|(k, c)| (*k, c.to_complex())).collect())
                .collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Vec::new();
    for _ in 0..SPECTRAL_ATTEMPTS {
        let mut z = vec![Complex::new(0.0, 0.0); n];
        for (c, cs) in center_c.iter().zip(&center_star) {
            let w = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            for k in 0..n {
                z[k] += w * c[k] + w.conj() * cs[k];
            }
        }
        // (L_z)[l][j] = Σ_i z_i c_ij^l
        let mut lz = DMatrix::<Complex<f64>>::zeros(n, n);
        for (i, zi) in z.iter().enumerate() {
            for j in 0..n {
                for (l, c) in &structure[i][j] {
                    lz[(*l, j)] += zi * c;
                }
            }
        }
        let h = &r_mat * lz * &r_inv;
        let h = (h.clone() + h.adjoint()).map(|x| x * 0.5);
        let mut eig: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        let mut clusters: Vec<usize> = Vec::new();
        let mut prev: Option<f64> = None;
        for x in eig {
            match prev {
                Some(p) if (x - p).abs() <= CLUSTER_TOLERANCE * (1.0 + p.abs()) => {
                    *clusters.last_mut().unwrap() += 1;
                }
                _ => clusters.push(1),
            }
            prev = Some(x);
        }
        let sizes: Option<Vec<usize>> = clusters.iter().map(|&c| exact_sqrt(c)).collect();
        if let (true, Some(mut sizes)) = (clusters.len() == r, sizes) {
            sizes.sort_unstable();
            return Ok(BlockDecomposition {
                blocks: sizes,
                center_dimension: r,
            });
        }
        last = clusters;
    }
    Err(TorsionError::SpectralMismatch {
        center: r,
        clusters: last,
    })
}

fn exact_sqrt(c: usize) -> Option<usize> {
    let s = (c as f64).sqrt().round() as usize;
    (s * s == c).then_some(s)
}

/// The Pauli basis `1, σ_x, σ_z, σ_y` of `M₂(ℂ)` over `ℚ(i)`, graded by
/// `ℤ₂×ℤ₂` with `σ_x ↦ (1,0)`, `σ_z ↦ (0,1)`, `σ_y ↦ (1,1)`.
pub fn pauli_algebra() -> GradedAlgebra {
    let f = CyclotomicField::new(4);
    let (z, o, i) = (Cyc::zero(&f), Cyc::one(&f), Cyc::root(&f, 1));
    let mats = vec![
        vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
        vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]],
        vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]],
        vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]],
    ];
    let mut mats = mats;
    // index (a,b) = 2a + b: 0 = 1, 1 = σ_z (0,1), 2 = σ_x (1,0), 3 = σ_y (1,1)
    mats[1] = vec![vec![o.clone(), z.clone()], vec![z.clone(), o.neg()]];
    mats[2] = vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]];
    mats[3] = vec![vec![z.clone(), i.neg()], vec![i, z]];
    GradedAlgebra::from_matrices(f, FiniteGroup::named("Z2xZ2").unwrap(), vec![0, 1, 2, 3], mats)
        .expect("Pauli matrices span M2")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks(b: &GradedAlgebra) -> Vec<usize> {
        block_decomposition(b, 0).unwrap().blocks
    }

    #[test]
    fn ergodicity() {
        let z2 = twisted_group_algebra(&Cocycle::trivial(FiniteGroup::cyclic(2)));
        assert!(is_ergodic(&z2));
        assert!(!is_ergodic(&z2.ungraded()));
        assert!(is_ergodic(&pauli_algebra()));
    }

    #[test]
    fn pauli_extraction() {
        let data = extract_torsion_data(&pauli_algebra()).unwrap();
        assert_eq!(data.support, vec![0, 1, 2, 3]);
        let w = &data.cocycle;
        assert_eq!(w.root_order(), 4);
        // σ_x σ_z = −i σ_y and σ_z σ_x = i σ_y: the ratio is −1.
        let (x, zz) = (2, 1);
        assert_eq!(w.value(x, zz), 3);
        assert_eq!(w.value(zz, x), 1);
        assert_eq!((w.value(x, zz) + 4 - w.value(zz, x)) % 4, 2);
        assert_eq!(w.regular_class_count(), 1);
    }

    #[test]
    fn untwisted_extraction() {
        let g = FiniteGroup::cyclic(3);
        let data = extract_torsion_data(&twisted_group_algebra(&Cocycle::trivial(g.clone()))).unwrap();
        assert_eq!(data.cocycle.group(), &g);
        assert!(data.cocycle.is_trivial_table());
    }

    #[test]
    fn non_ergodic_rejected() {
        let b = twisted_group_algebra(&Cocycle::trivial(FiniteGroup::cyclic(2))).ungraded();
        assert_eq!(extract_torsion_data(&b).unwrap_err(), TorsionError::NotErgodic(2));
    }

    #[test]
    fn decompositions() {
        let triv = |g: FiniteGroup| twisted_group_algebra(&Cocycle::trivial(g));
        assert_eq!(blocks(&triv(FiniteGroup::cyclic(2))), vec![1, 1]);
        assert_eq!(blocks(&triv(FiniteGroup::cyclic(3))), vec![1, 1, 1]);
        assert_eq!(blocks(&triv(FiniteGroup::symmetric(3))), vec![1, 1, 2]);
        assert_eq!(blocks(&triv(FiniteGroup::quaternion())), vec![1, 1, 1, 1, 2]);
        assert_eq!(blocks(&twisted_group_algebra(&Cocycle::pauli())), vec![2]);
        assert_eq!(blocks(&pauli_algebra()), vec![2]);
        assert_eq!(blocks(&triv(FiniteGroup::symmetric(4))), vec![1, 1, 2, 3, 3]);
    }

    #[test]
    fn radical_detected() {
        // ℚ[x]/(x²) with x* = x, graded trivially.
        let f = CyclotomicField::new(1);
        let one = Cyc::one(&f);
        let g = FiniteGroup::cyclic(1);
        let products = vec![vec![vec![(0, one.clone())], vec![(1, one.clone())]], vec![vec![(1, one.clone())], vec![]]];
        let star = vec![vec![(0, one.clone())], vec![(1, one.clone())]];
        let b = GradedAlgebra::new(f, g, vec!["1".into(), "x".into()], vec![0, 0], vec![(0, one)], products, star)
            .unwrap();
        assert!(matches!(block_decomposition(&b, 0), Err(TorsionError::NotSemisimple(w)) if w.contains('x')));
    }

    #[test]
    fn json_roundtrip() {
        let b = twisted_group_algebra(&Cocycle::pauli());
        let s = serde_json::to_string(&b).unwrap();
        let back: GradedAlgebra = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        let w: Cocycle = serde_json::from_str(&serde_json::to_string(&Cocycle::pauli()).unwrap()).unwrap();
        assert_eq!(w, Cocycle::pauli());
    }
}
