use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{invariant_factors, IntMatrix};

/// A finitely generated abelian group `ℤ^free ⊕ ℤ_{t₁} ⊕ ⋯ ⊕ ℤ_{t_r}` in
/// invariant-factor form: every `tᵢ > 1` and `tᵢ | tᵢ₊₁`.
///
/// Because the form is canonical, `==` is group isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "GroupRepr")]
pub struct FgAbelianGroup {
    free: usize,
    #[serde(with = "bigint_strings")]
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic<T: Into<BigInt>>(order: T) -> Self {
        Self::from_cyclic_orders(0, [order.into()])
    }

    /// `ℤ^free ⊕ ⨁ ℤ_{cᵢ}` for arbitrary orders; zeros contribute free
    /// summands and units vanish. The result is re-canonicalised.
    pub fn from_cyclic_orders<I>(free: usize, orders: I) -> Self
    where
        I: IntoIterator<Item = BigInt>,
    {
        let mut free = free;
        let mut finite = Vec::new();
        for c in orders {
            let c = c.abs();
            if c.is_zero() {
                free += 1;
            } else if !c.is_one() {
                finite.push(c);
            }
        }
        let torsion = if finite.len() <= 1 {
            finite
        } else {
            let k = finite.len();
            let mut diag = IntMatrix::zeros(k, k);
            for (i, c) in finite.into_iter().enumerate() {
                diag[(i, i)] = c;
            }
            invariant_factors(&diag)
                .into_iter()
                .filter(|d| !d.is_one())
                .collect()
        };
        FgAbelianGroup { free, torsion }
    }

    pub fn free_rank(&self) -> usize {
        self.free
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self == other
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_cyclic_orders(
            self.free + other.free,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }
}

#[derive(Deserialize)]
struct GroupRepr {
    free: usize,
    #[serde(with = "bigint_strings")]
    torsion: Vec<BigInt>,
}

impl From<GroupRepr> for FgAbelianGroup {
    fn from(r: GroupRepr) -> Self {
        FgAbelianGroup::from_cyclic_orders(r.free, r.torsion)
    }
}

/// Free functions mirroring the method API.
pub fn fg_group_isomorphic(g: &FgAbelianGroup, h: &FgAbelianGroup) -> bool {
    g.is_isomorphic(h)
}

pub fn fg_direct_sum(g: &FgAbelianGroup, h: &FgAbelianGroup) -> FgAbelianGroup {
    g.direct_sum(h)
}

impl fmt::Display for FgAbelianGroup {
    /// `Z^2 + Z_2^3`, `Z`, `Z_6`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == t).count();
            if run == 1 {
                parts.push(format!("Z_{t}"));
            } else {
                parts.push(format!("Z_{t}^{run}"));
            }
            i += run;
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub(crate) mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect()
    }
}
