use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qaut_core::cstar::{is_delta_form, AlgState, DeltaForm, FinDimAlgebra};
use qaut_core::dims::DimVector;
use qaut_core::ktheory::{closed_form, k_theory, satisfies_kernel_relations};
use qaut_core::linalg::{
    cokernel, hermite_normal_form, is_divisibility_chain, kernel_basis, smith_normal_form, IntMatrix,
    LatticeSolver,
};
use qaut_core::repring::{
    fusion_tensor, irreps_to_polynomial, polynomial_to_irreps, IrrepSum, Spin,
};
use qaut_core::torsion::{
    block_decomposition, cocycle_lattice_generators, sample_cocycle, twisted_group_algebra, FiniteGroup,
};

fn small_matrix(max: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(move |(m, n)| {
        proptest::collection::vec(proptest::collection::vec(-bound..=bound, n), m)
    })
}

fn cofactor_det(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Product of the first `i` invariant factors is the gcd of the `i × i` minors.
fn minors_gcd(a: &[Vec<i64>], i: usize) -> i64 {
    let (rows, cols) = (a.len(), a[0].len());
    let mut g = 0;
    for rs in (0..rows).combinations(i) {
        for cs in (0..cols).combinations(i) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c]).collect()).collect();
            g = gcd(g, cofactor_det(&sub));
        }
    }
    g
}

/// Random unimodular matrix as a product of elementary row operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            u.swap(i, (i + 1) % n);
            continue;
        }
        for k in 0..n {
            u[i][k] += c * u[j][k];
        }
    }
    IntMatrix::from_rows(&u)
}

fn dims_strategy(max_n: usize, max_k: u64) -> impl Strategy<Value = DimVector> {
    proptest::collection::vec(1..=max_k, 1..=max_n).prop_map(|k| DimVector::new(k).unwrap())
}

fn irrep_sum() -> impl Strategy<Value = IrrepSum> {
    (any::<bool>(), proptest::collection::vec((0u32..6, 1u64..4), 1..4)).prop_map(|(half, terms)| {
        IrrepSum::from_pairs(terms.into_iter().map(|(j, m)| (Spin::from_twice(2 * j + u32::from(half)), m)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_matches_minors(a in small_matrix(5, 9)) {
        let m = IntMatrix::from_rows(&a);
        let d = smith_normal_form(&m);
        prop_assert!(d.verify(&m));
        prop_assert!(is_divisibility_chain(&d.invariant_factors));
        let mut prod = BigInt::one();
        for (i, f) in d.invariant_factors.iter().enumerate() {
            prod *= f;
            prop_assert_eq!(prod.clone(), BigInt::from(minors_gcd(&a, i + 1)));
        }
    }

    #[test]
    fn cokernel_invariant_under_unimodular(
        a in small_matrix(4, 6),
        left in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6),
        right in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6),
    ) {
        let m = IntMatrix::from_rows(&a);
        let u = unimodular(m.rows(), &left);
        let v = unimodular(m.cols(), &right).transpose();
        prop_assert!(u.determinant().abs().is_one());
        let moved = &(&u * &m) * &v;
        prop_assert_eq!(cokernel(&m), cokernel(&moved));
        prop_assert_eq!(kernel_basis(&m).len(), kernel_basis(&moved).len());
    }

    #[test]
    fn hermite_keeps_row_lattice(a in small_matrix(4, 7)) {
        let m = IntMatrix::from_rows(&a);
        let h = hermite_normal_form(&m);
        prop_assert_eq!(hermite_normal_form(&h), h.clone());
        prop_assert_eq!(h.rank(), m.rank());
        // each original row lies in the lattice spanned by the rows of h and vice versa
        let ht = LatticeSolver::new(&h.transpose());
        let mt = LatticeSolver::new(&m.transpose());
        for i in 0..m.rows() {
            prop_assert!(ht.contains(m.row(i)));
        }
        for i in 0..h.rows() {
            prop_assert!(mt.contains(h.row(i)));
        }
    }

    #[test]
    fn kernel_vectors_are_kernel(a in small_matrix(5, 5)) {
        let m = IntMatrix::from_rows(&a);
        let ker = kernel_basis(&m);
        prop_assert_eq!(ker.len(), m.cols() - m.rank());
        for v in &ker {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn boundary_route_matches_closed_form(k in dims_strategy(5, 12)) {
        let r = k_theory(&k);
        let (k0, k1) = closed_form(&k);
        prop_assert!(r.k0.is_isomorphic(&k0), "{}: {} vs {}", k, r.k0, k0);
        prop_assert!(r.k1.is_isomorphic(&k1));
        prop_assert!(satisfies_kernel_relations(&k, &r.kernel_generator));
        prop_assert!(r.kernel_generator.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn k_theory_ignores_block_order(k in dims_strategy(4, 9), rot in 0usize..4) {
        let mut b = k.blocks().to_vec();
        let len = b.len();
        b.rotate_left(rot % len);
        let r = k_theory(&DimVector::new(b).unwrap());
        prop_assert_eq!(r.k0, k_theory(&k).k0);
    }

    #[test]
    fn class_map_is_a_ring_map(x in irrep_sum(), y in irrep_sum()) {
        let px = irreps_to_polynomial(&x).unwrap();
        let py = irreps_to_polynomial(&y).unwrap();
        let pxy = irreps_to_polynomial(&x.tensor(&y)).unwrap();
        prop_assert_eq!(&pxy, &px.product(&py));
        prop_assert_eq!(polynomial_to_irreps(&px).unwrap(), x.clone());
        prop_assert_eq!(px.dimension(), x.dimension());
    }

    #[test]
    fn fusion_is_commutative_and_dimensional(a in 0u32..12, b in 0u32..12) {
        let (m, n) = (Spin::from_twice(a), Spin::from_twice(b));
        let mn = fusion_tensor(m, n);
        prop_assert_eq!(&mn, &fusion_tensor(n, m));
        prop_assert_eq!(mn.dimension(), BigInt::from(m.dimension() * n.dimension()));
    }

    #[test]
    fn plancherel_is_delta_form(k in dims_strategy(3, 3)) {
        let alg = FinDimAlgebra::new(k.clone());
        let w = AlgState::plancherel(&alg);
        match is_delta_form(&alg, &w).unwrap() {
            DeltaForm::Delta { delta_squared, .. } => {
                prop_assert_eq!(delta_squared.to_string(), k.algebra_dimension().to_string());
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coboundaries_do_not_change_blocks(
        gi in 0usize..14,
        seed in any::<u64>(),
        f in proptest::collection::vec(0u64..8, 8),
    ) {
        let (_, g) = FiniteGroup::small_groups().swap_remove(gi);
        let m = g.order() as u64;
        let gens = cocycle_lattice_generators(&g, m);
        let w = sample_cocycle(&g, m, &gens, &mut ChaCha8Rng::seed_from_u64(seed));
        let shift: Vec<u64> = f.iter().take(g.order()).map(|x| x % m).collect();
        let w2 = w.times_coboundary(&shift);
        prop_assert_eq!(w.regular_class_count(), w2.regular_class_count());
        let d1 = block_decomposition(&twisted_group_algebra(&w), seed).unwrap();
        let d2 = block_decomposition(&twisted_group_algebra(&w2), seed ^ 1).unwrap();
        prop_assert_eq!(d1.blocks, d2.blocks);
    }
}
