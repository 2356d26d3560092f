//! Seeded random sweeps over dimension vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dims::DimVector;
use crate::exec::Execution;
use crate::ktheory::Verification;
use crate::resolution::{check_exactness, TestObject, DEFAULT_DEGREE_BOUND};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub samples: usize,
    pub max_n: usize,
    pub max_k: u64,
    pub seed: u64,
    /// `None` skips the resolution exactness check.
    pub degree_bound: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            samples: 50,
            max_n: 5,
            max_k: 6,
            seed: 0,
            degree_bound: Some(DEFAULT_DEGREE_BOUND),
        }
    }
}

/// `samples` vectors with `1 ≤ n ≤ max_n`, `1 ≤ kᵢ ≤ max_k`, from ChaCha8 seeded by `seed`.
pub fn sample_dims(cfg: &SweepConfig) -> Vec<DimVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.samples)
        .map(|_| {
            let n = rng.gen_range(1..=cfg.max_n.max(1));
            let k = (0..n).map(|_| rng.gen_range(1..=cfg.max_k.max(1))).collect();
            DimVector::new(k).expect("positive entries")
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub dims: DimVector,
    pub k0: String,
    pub k1: String,
    pub ktheory_matches: bool,
    pub kernel_matches: bool,
    /// Exactness and derived action for `(ℂ, A)`; absent when skipped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<[bool; 2]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

impl SweepEntry {
    pub fn passed(&self) -> bool {
        self.ktheory_matches
            && self.kernel_matches
            && self.errors.is_empty()
            && self.resolution.map_or(true, |r| r[0] && r[1])
    }
}

pub fn check_one(k: &DimVector, degree_bound: Option<usize>) -> SweepEntry {
    let v = Verification::run(k);
    let mut errors = Vec::new();
    let resolution = degree_bound.map(|d| {
        TestObject::BOTH.map(|test| match check_exactness(k, test, d) {
            Ok(r) => r.is_exact() && r.action_matches,
            Err(e) => {
                errors.push(e.to_string());
                false
            }
        })
    });
    SweepEntry {
        dims: k.clone(),
        k0: v.computed.k0.to_string(),
        k1: v.computed.k1.to_string(),
        ktheory_matches: v.matches(),
        kernel_matches: v.kernel_matches(),
        resolution,
        errors,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub entries: Vec<SweepEntry>,
    pub passed: usize,
    pub failed: usize,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Entries appear in sample order whatever the execution mode.
pub fn run_sweep(cfg: &SweepConfig, exec: Execution) -> SweepReport {
    let dims = sample_dims(cfg);
    let entries = exec.map(&dims, |k| check_one(k, cfg.degree_bound));
    let passed = entries.iter().filter(|e| e.passed()).count();
    SweepReport {
        config: cfg.clone(),
        failed: entries.len() - passed,
        passed,
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let cfg = SweepConfig {
            samples: 10,
            seed: 7,
            ..Default::default()
        };
        assert_eq!(sample_dims(&cfg), sample_dims(&cfg));
        let other = SweepConfig { seed: 8, ..cfg.clone() };
        assert_ne!(sample_dims(&cfg), sample_dims(&other));
        assert!(sample_dims(&cfg).iter().all(|d| d.len() <= 5 && d.blocks().iter().all(|&k| k <= 6)));
    }

    #[test]
    fn small_sweep_passes() {
        let cfg = SweepConfig {
            samples: 6,
            max_n: 3,
            max_k: 3,
            seed: 1,
            degree_bound: Some(6),
        };
        let seq = run_sweep(&cfg, Execution::Sequential);
        assert!(seq.all_passed(), "{seq:?}");
        assert_eq!(seq, run_sweep(&cfg, Execution::Parallel));
    }
}
