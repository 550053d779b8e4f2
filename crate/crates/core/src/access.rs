//! Monotone access structures over participants [0, n).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subsets::{mask_of, members};

/// Largest participant count for which access structures are enumerated.
pub const MAX_PARTICIPANTS: usize = 20;

/// Monotone access structure given by its minimal qualified sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessStructure {
    pub n: usize,
    pub minimal: Vec<Vec<usize>>,
}

impl AccessStructure {
    /// Reduces `sets` to its inclusion-minimal members.
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        if n > MAX_PARTICIPANTS {
            return Err(Error::Cutoff(format!(
                "{n} participants exceed {MAX_PARTICIPANTS}"
            )));
        }
        let mut masks: Vec<u64> = Vec::new();
        for s in &sets {
            if s.iter().any(|&i| i >= n) {
                return Err(Error::Parameter(format!("set {s:?} outside [{n}]")));
            }
            masks.push(mask_of(s));
        }
        masks.sort_by_key(|m| (m.count_ones(), *m));
        masks.dedup();
        let mut minimal: Vec<u64> = Vec::new();
        for m in masks {
            if !minimal.iter().any(|&q| q & m == q) {
                minimal.push(m);
            }
        }
        let mut minimal: Vec<Vec<usize>> = minimal.into_iter().map(members).collect();
        minimal.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        Ok(AccessStructure { n, minimal })
    }

    /// Structure whose qualified sets are those satisfying a monotone predicate.
    pub fn from_predicate(n: usize, qualified: impl Fn(&[usize]) -> bool) -> Result<Self> {
        if n > MAX_PARTICIPANTS {
            return Err(Error::Cutoff(format!(
                "{n} participants exceed {MAX_PARTICIPANTS}"
            )));
        }
        let sets = (0u64..1 << n)
            .map(members)
            .filter(|s| qualified(s))
            .collect();
        Self::new(n, sets)
    }

    /// All sets of size at least `m`.
    pub fn threshold(n: usize, m: usize) -> Result<Self> {
        Self::from_predicate(n, |s| s.len() >= m)
    }

    pub fn is_qualified(&self, set: &[usize]) -> bool {
        let m = mask_of(set);
        self.minimal.iter().any(|q| {
            let qm = mask_of(q);
            qm & m == qm
        })
    }

    /// Maximal non-qualified sets, in order of decreasing size then
    /// lexicographically.
    pub fn maximal_blocked(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let full = (1u64 << n) - 1;
        let mut out: Vec<Vec<usize>> = (0u64..1 << n)
            .filter(|&m| {
                let s = members(m);
                !self.is_qualified(&s)
                    && (0..n).all(|i| {
                        m >> i & 1 == 1 || {
                            let mut t = s.clone();
                            t.push(i);
                            self.is_qualified(&t)
                        }
                    })
            })
            .filter(|&m| m != full || self.minimal.is_empty())
            .map(members)
            .collect();
        out.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        out
    }

    pub fn min_qualified_size(&self) -> Option<usize> {
        self.minimal.iter().map(Vec::len).min()
    }

    pub fn max_blocked_size(&self) -> usize {
        self.maximal_blocked().iter().map(Vec::len).max().unwrap_or(0)
    }
}
