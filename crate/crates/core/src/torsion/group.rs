use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::TorsionError;

/// Finite group given by its Cayley table, `table[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    table: Vec<Vec<usize>>,
}

impl TryFrom<GroupRepr> for FiniteGroup {
    type Error = TorsionError;
    fn try_from(r: GroupRepr) -> Result<Self, TorsionError> {
        FiniteGroup::from_table(r.table)
    }
}

impl From<FiniteGroup> for GroupRepr {
    fn from(g: FiniteGroup) -> Self {
        GroupRepr { table: g.table }
    }
}

impl FiniteGroup {
    /// Validates the group axioms: closure, identity, inverses, associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, TorsionError> {
        let bad = |m: String| Err(TorsionError::InvalidGroup(m));
        let n = table.len();
        if n == 0 {
            return bad("empty Cayley table".into());
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {a} has {} entries, expected {n}", row.len()));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return bad(format!("entry {x} in row {a} is out of range"));
            }
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        else {
            return bad("no identity element".into());
        };
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverses.push(b),
                None => return bad(format!("element {a} has no inverse")),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return bad(format!("associativity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverses,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        let n = n.max(1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table).expect("cyclic group")
    }

    /// `(a₁,b₁)(a₂,b₂) = (a₁a₂, b₁b₂)`, element `(a,b)` at index `a·|B| + b`.
    pub fn direct_product(g: &Self, h: &Self) -> Self {
        let (n, m) = (g.order(), h.order());
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("direct product")
    }

    /// Dihedral group of order `2n`; `r^a s^b` at index `2a + b`.
    pub fn dihedral(n: usize) -> Self {
        let n = n.max(1);
        let idx = |a: usize, b: usize| 2 * a + b;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for a1 in 0..n {
            for b1 in 0..2 {
                for a2 in 0..n {
                    for b2 in 0..2 {
                        let a = if b1 == 0 { a1 + a2 } else { a1 + n - a2 } % n;
                        table[idx(a1, b1)][idx(a2, b2)] = idx(a, (b1 + b2) % 2);
                    }
                }
            }
        }
        Self::from_table(table).expect("dihedral group")
    }

    /// `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        let units: Vec<[i32; 4]> = (0..4)
            .flat_map(|k| {
                [1, -1].into_iter().map(move |s| {
                    let mut q = [0; 4];
                    q[k] = s;
                    q
                })
            })
            .collect();
        let mul = |p: [i32; 4], q: [i32; 4]| {
            [
                p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
                p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
                p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
                p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0],
            ]
        };
        let table = units
            .iter()
            .map(|&p| {
                units
                    .iter()
                    .map(|&q| units.iter().position(|&u| u == mul(p, q)).unwrap())
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("quaternion group")
    }

    /// Permutations of `0..n` in lexicographic order, `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Self {
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st: Vec<usize> = t.iter().map(|&i| s[i]).collect();
                        perms.binary_search(&st).unwrap()
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("symmetric group")
    }

    /// `Z<n>`, `D<n>` (order `2n`), `S<n>`, `Q8`, `V4`, and `x`-separated
    /// products such as `Z2xZ4`.
    pub fn named(name: &str) -> Result<Self, TorsionError> {
        let bad = || TorsionError::InvalidGroup(format!("unknown group `{name}`"));
        let mut out: Option<FiniteGroup> = None;
        for part in name.split(['x', '*']).map(str::trim) {
            let num = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1);
            let g = match part {
                "Q8" => Self::quaternion(),
                "V4" | "K4" => Self::direct_product(&Self::cyclic(2), &Self::cyclic(2)),
                p if p.starts_with('Z') || p.starts_with('C') => Self::cyclic(num(&p[1..]).ok_or_else(bad)?),
                p if p.starts_with('D') => Self::dihedral(num(&p[1..]).ok_or_else(bad)?),
                p if p.starts_with('S') => {
                    let n = num(&p[1..]).filter(|&n| n <= 6).ok_or_else(bad)?;
                    Self::symmetric(n)
                }
                _ => return Err(bad()),
            };
            out = Some(match out {
                None => g,
                Some(acc) => Self::direct_product(&acc, &g),
            });
        }
        out.ok_or_else(bad)
    }

    /// One representative of each isomorphism class of order at most 8.
    pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
        [
            "Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "S3", "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2", "D4",
            "Q8",
        ]
        .into_iter()
        .map(|n| (n, Self::named(n).unwrap()))
        .collect()
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let class: Vec<usize> = (0..n)
                .map(|g| self.mul(self.mul(g, s), self.inv(g)))
                .sorted()
                .dedup()
                .collect();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class);
        }
        classes
    }

    pub fn centralizer(&self, s: usize) -> Vec<usize> {
        (0..self.order())
            .filter(|&t| self.mul(s, t) == self.mul(t, s))
            .collect()
    }

    /// Subgroup on the given elements, re-indexed in the given order.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Self, TorsionError> {
        let pos = |x: usize| elements.iter().position(|&e| e == x);
        let mut table = Vec::with_capacity(elements.len());
        for &a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for &b in elements {
                let p = pos(self.mul(a, b)).ok_or_else(|| {
                    TorsionError::NotClosed(format!("{a}·{b} = {} leaves the support", self.mul(a, b)))
                })?;
                row.push(p);
            }
            table.push(row);
        }
        Self::from_table(table)
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order())
    }
}
