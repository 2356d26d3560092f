use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::group::FiniteGroup;
use super::TorsionError;
use crate::linalg::{smith_right, IntMatrix};

/// Normalized 2-cocycle with values `exp(2πi·a/m)`, stored as exponents `a mod m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CocycleRepr", into = "CocycleRepr")]
pub struct Cocycle {
    group: FiniteGroup,
    root_order: u64,
    table: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct CocycleRepr {
    group: FiniteGroup,
    root_order: u64,
    table: Vec<Vec<u64>>,
}

impl TryFrom<CocycleRepr> for Cocycle {
    type Error = TorsionError;
    fn try_from(r: CocycleRepr) -> Result<Self, TorsionError> {
        Cocycle::new(r.group, r.root_order, r.table)
    }
}

impl From<Cocycle> for CocycleRepr {
    fn from(c: Cocycle) -> Self {
        CocycleRepr {
            group: c.group,
            root_order: c.root_order,
            table: c.table,
        }
    }
}

impl Cocycle {
    /// Checks shape, normalization and the cocycle identity
    /// `ω(s,t) ω(st,u) = ω(t,u) ω(s,tu)`. Exponents are reduced mod `m`.
    pub fn new(group: FiniteGroup, root_order: u64, table: Vec<Vec<u64>>) -> Result<Self, TorsionError> {
        let bad = |m: String| Err(TorsionError::InvalidCocycle(m));
        if root_order == 0 {
            return bad("root order must be positive".into());
        }
        let n = group.order();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return bad(format!("cocycle table must be {n}x{n}"));
        }
        let table: Vec<Vec<u64>> = table
            .into_iter()
            .map(|r| r.into_iter().map(|a| a % root_order).collect())
            .collect();
        let e = group.identity();
        if let Some(s) = (0..n).find(|&s| table[e][s] != 0 || table[s][e] != 0) {
            return bad(format!("not normalized at element {s}"));
        }
        let m = root_order;
        for s in 0..n {
            for t in 0..n {
                let st = group.mul(s, t);
                for u in 0..n {
                    let lhs = table[s][t] + table[st][u];
                    let rhs = table[t][u] + table[s][group.mul(t, u)];
                    if lhs % m != rhs % m {
                        return bad(format!("cocycle identity fails at ({s},{t},{u})"));
                    }
                }
            }
        }
        Ok(Cocycle {
            group,
            root_order,
            table,
        })
    }

    pub fn trivial(group: FiniteGroup) -> Self {
        let n = group.order();
        Cocycle {
            group,
            root_order: 1,
            table: vec![vec![0; n]; n],
        }
    }

    pub fn from_fn(
        group: FiniteGroup,
        root_order: u64,
        f: impl Fn(usize, usize) -> u64,
    ) -> Result<Self, TorsionError> {
        let n = group.order();
        let table = (0..n).map(|s| (0..n).map(|t| f(s, t)).collect()).collect();
        Self::new(group, root_order, table)
    }

    /// `ω((a₁,a₂),(b₁,b₂)) = (−1)^{a₁b₂}` on `ℤ₂×ℤ₂`, the cocycle of the Pauli
    /// matrices `σ_x ↔ (1,0)`, `σ_z ↔ (0,1)`.
    pub fn pauli() -> Self {
        let g = FiniteGroup::named("Z2xZ2").unwrap();
        Self::from_fn(g, 2, |s, t| ((s / 2) * (t % 2)) as u64).unwrap()
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn root_order(&self) -> u64 {
        self.root_order
    }

    pub fn table(&self) -> &[Vec<u64>] {
        &self.table
    }

    pub fn value(&self, s: usize, t: usize) -> u64 {
        self.table[s][t]
    }

    /// Same cocycle with exponents over a multiple `m'` of the root order.
    pub fn with_root_order(&self, m: u64) -> Result<Self, TorsionError> {
        if m == 0 || m % self.root_order != 0 {
            return Err(TorsionError::InvalidCocycle(format!(
                "{m} is not a multiple of {}",
                self.root_order
            )));
        }
        let f = m / self.root_order;
        Ok(Cocycle {
            group: self.group.clone(),
            root_order: m,
            table: self.table.iter().map(|r| r.iter().map(|a| a * f).collect()).collect(),
        })
    }

    /// `ω·∂f` with `∂f(s,t) = f(s) f(t) / f(st)`, `f` given by exponents mod `m`.
    /// `f` is shifted so that `f(e) = 0`, keeping the result normalized.
    pub fn times_coboundary(&self, f: &[u64]) -> Self {
        let m = self.root_order;
        let g = &self.group;
        let n = g.order();
        let fe = f[g.identity()] % m;
        let f: Vec<u64> = f.iter().map(|&x| (x % m + m - fe) % m).collect();
        let table = (0..n)
            .map(|s| {
                (0..n)
                    .map(|t| (self.table[s][t] + f[s] + f[t] + m - f[g.mul(s, t)]) % m)
                    .collect()
            })
            .collect();
        Cocycle::new(g.clone(), m, table).expect("coboundary twist stays a cocycle")
    }

    /// `s` is ω-regular when `ω(s,t) = ω(t,s)` for every `t` commuting with `s`.
    pub fn is_regular(&self, s: usize) -> bool {
        self.group
            .centralizer(s)
            .into_iter()
            .all(|t| self.table[s][t] == self.table[t][s])
    }

    /// Number of conjugacy classes of ω-regular elements, equal to the
    /// dimension of the center of the twisted group algebra.
    pub fn regular_class_count(&self) -> usize {
        self.group
            .conjugacy_classes()
            .iter()
            .filter(|c| self.is_regular(c[0]))
            .count()
    }

    pub fn is_trivial_table(&self) -> bool {
        self.table.iter().flatten().all(|&a| a == 0)
    }
}

/// Generators of the lattice of normalized cocycles with values in `μ_m`,
/// as exponent tables (index `(s−1)(n−1) + (t−1)` over non-identity elements).
pub fn cocycle_lattice_generators(g: &FiniteGroup, m: u64) -> Vec<Vec<Vec<u64>>> {
    let n = g.order();
    let e = g.identity();
    let others: Vec<usize> = (0..n).filter(|&x| x != e).collect();
    let var = |s: usize, t: usize| -> Option<usize> {
        let i = others.iter().position(|&x| x == s)?;
        let j = others.iter().position(|&x| x == t)?;
        Some(i * others.len() + j)
    };
    let vars = others.len() * others.len();
    if vars == 0 {
        return Vec::new();
    }
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for &s in &others {
        for &t in &others {
            for &u in &others {
                let mut row = vec![0i64; vars];
                let mut add = |a: usize, b: usize, sign: i64| {
                    if let Some(v) = var(a, b) {
                        row[v] += sign;
                    }
                };
                add(s, t, 1);
                add(g.mul(s, t), u, 1);
                add(t, u, -1);
                add(s, g.mul(t, u), -1);
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let a = if rows.is_empty() {
        IntMatrix::zeros(1, vars)
    } else {
        IntMatrix::from_rows(&rows)
    };
    let (factors, v) = smith_right(&a);
    let mb = BigInt::from(m);
    (0..vars)
        .map(|j| {
            let d = factors.get(j).cloned().unwrap_or_else(BigInt::zero);
            let scale = &mb / d.gcd(&mb);
            let mut table = vec![vec![0u64; n]; n];
            for &s in &others {
                for &t in &others {
                    let x = (&v[(var(s, t).unwrap(), j)] * &scale).mod_floor(&mb);
                    table[s][t] = x.to_u64().unwrap();
                }
            }
            table
        })
        .collect()
}

/// Random normalized cocycle with values in `μ_m` from the lattice generators.
pub fn sample_cocycle<R: Rng>(g: &FiniteGroup, m: u64, gens: &[Vec<Vec<u64>>], rng: &mut R) -> Cocycle {
    let n = g.order();
    let mut table = vec![vec![0u64; n]; n];
    for gen in gens {
        let c = rng.gen_range(0..m);
        for s in 0..n {
            for t in 0..n {
                table[s][t] = (table[s][t] + c * gen[s][t]) % m;
            }
        }
    }
    Cocycle::new(g.clone(), m, table).expect("lattice combination is a cocycle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pauli_is_nondegenerate() {
        let w = Cocycle::pauli();
        assert_eq!(w.regular_class_count(), 1);
        // generators (1,0) and (0,1): ω(x,y) − ω(y,x) = 1 mod 2, i.e. ratio −1.
        assert_eq!((w.value(2, 1) + 2 - w.value(1, 2)) % 2, 1);
    }

    #[test]
    fn rejects_non_cocycles() {
        let g = FiniteGroup::cyclic(3);
        // carry cocycle ⌊(s+t)/3⌋
        assert!(Cocycle::from_fn(g.clone(), 3, |s, t| ((s + t) / 3) as u64).is_ok());
        assert!(Cocycle::from_fn(g.clone(), 3, |s, t| if s == 0 || t == 0 { 0 } else { 1 }).is_err());
        assert!(Cocycle::from_fn(g.clone(), 3, |s, t| if s == 1 && t == 1 { 1 } else { 0 }).is_err());
        assert!(Cocycle::from_fn(g, 3, |_, _| 1).is_err());
    }

    #[test]
    fn trivial_counts_classes() {
        for (_, g) in FiniteGroup::small_groups() {
            let c = g.conjugacy_classes().len();
            assert_eq!(Cocycle::trivial(g).regular_class_count(), c);
        }
    }

    #[test]
    fn lattice_generators_are_cocycles() {
        for (name, g) in FiniteGroup::small_groups() {
            let m = g.order() as u64;
            for gen in cocycle_lattice_generators(&g, m) {
                assert!(Cocycle::new(g.clone(), m, gen).is_ok(), "{name}");
            }
        }
    }

    #[test]
    fn sampling_reaches_nontrivial_classes() {
        let g = FiniteGroup::named("Z2xZ2").unwrap();
        let gens = cocycle_lattice_generators(&g, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let counts: Vec<usize> = (0..40)
            .map(|_| sample_cocycle(&g, 4, &gens, &mut rng).regular_class_count())
            .collect();
        assert!(counts.contains(&1) && counts.contains(&4));
    }

    #[test]
    fn coboundary_preserves_regularity() {
        let w = Cocycle::pauli().with_root_order(4).unwrap();
        let w2 = w.times_coboundary(&[0, 1, 3, 2]);
        assert_ne!(w, w2);
        assert_eq!(w2.regular_class_count(), 1);
    }
}
