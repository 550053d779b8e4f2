//! Closed-form capacity bounds, the greedy recovery-set packing used by the
//! converse, and the share-size bound for perfect schemes with locality.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lrc::LocalityStructure;

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

/// Largest distance of an (n, k) code with locality r: n - k - ceil(k/r) + 2.
pub fn locality_distance_bound(n: usize, k: usize, r: usize) -> i64 {
    let (n, k, r) = (n as i64, k as i64, r as i64);
    n - k - ceil_div(k, r) + 2
}

/// Largest k from the black-box argument: m - l - floor((m - l)/(r + 1)).
pub fn naive_secrecy_bound(m: usize, l: usize, r: usize) -> i64 {
    let x = m as i64 - l as i64;
    x - x.div_euclid(r as i64 + 1)
}

/// Largest k: m - floor(m/(r + 1)) - l.
pub fn secrecy_bound(m: usize, l: usize, r: usize) -> i64 {
    let m = m as i64;
    m - m / (r as i64 + 1) - l as i64
}

/// Smallest m: k + l + ceil((k + l)/r) - 1.
pub fn min_m(k: usize, l: usize, r: usize) -> i64 {
    let x = (k + l) as i64;
    x + ceil_div(x, r as i64) - 1
}

/// y = x + ceil(x/r) - 1 and x_back = y - floor(y/(r+1)); always x_back = x.
pub fn roundtrip_claim(x: u64, r: u64) -> (u64, u64) {
    let y = x + x.div_ceil(r) - 1;
    (y, y - y / (r + 1))
}

/// Output of the greedy packing of recovery sets into an m-subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackedSet {
    /// M, |M| = m, sorted.
    pub set: Vec<usize>,
    /// Coordinates i with Lambda_i contained in M.
    pub covered: Vec<usize>,
    /// Distinct recovery groups fully inside M.
    pub groups_covered: usize,
    /// M minus one coordinate per fully contained group; M is a function of it.
    pub reduced: Vec<usize>,
}

/// Greedy construction of an m-subset holding many closed recovery sets
/// Lambda_t = R_t + {t}. The next t is always the smallest index outside M.
pub fn construct_m(loc: &LocalityStructure, m: usize) -> Result<PackedSet> {
    let n = loc.n;
    if m > n {
        return Err(Error::Parameter(format!("m = {m} exceeds n = {n}")));
    }
    let mut in_m = vec![false; n];
    let mut size = 0usize;
    let union_size = |in_m: &[bool], size: usize, t: usize| {
        size + loc.closure(t).iter().filter(|&&i| !in_m[i]).count()
    };
    let mut t = 0usize;
    if m > 0 {
        while union_size(&in_m, size, t) < m {
            for i in loc.closure(t) {
                if !in_m[i] {
                    in_m[i] = true;
                    size += 1;
                }
            }
            t = (0..n).find(|&i| !in_m[i]).expect("M is smaller than m < n");
        }
        if union_size(&in_m, size, t) <= m {
            for i in loc.closure(t) {
                in_m[i] = true;
            }
        } else {
            let fill: Vec<usize> = (0..n).filter(|&i| !in_m[i]).take(m - size).collect();
            for i in fill {
                in_m[i] = true;
            }
        }
    }
    let set: Vec<usize> = (0..n).filter(|&i| in_m[i]).collect();
    let covered: Vec<usize> = (0..n)
        .filter(|&i| loc.closure(i).iter().all(|&j| in_m[j]))
        .collect();
    // distinct closed sets among the covered coordinates; for a partition
    // these are the groups themselves
    let mut closures: Vec<Vec<usize>> = covered.iter().map(|&i| loc.closure(i)).collect();
    closures.sort();
    closures.dedup();
    let mut drop = vec![false; n];
    let mut groups_covered = 0;
    for c in &closures {
        // remove the largest member not already removed; it is recoverable
        // from the rest of its closed set
        if let Some(&i) = c.iter().rev().find(|&&i| !drop[i] && covered.contains(&i)) {
            if loc.recovery[i].iter().all(|&j| !drop[j]) {
                drop[i] = true;
                groups_covered += 1;
            }
        }
    }
    let reduced = set.iter().copied().filter(|&i| !drop[i]).collect();
    Ok(PackedSet {
        set,
        covered,
        groups_covered,
        reduced,
    })
}

/// Rate bound for (r, delta) cooperative repair with m = n:
/// r/(r + delta) - l/n.
pub fn coop_rate_bound(n: usize, r: usize, delta: usize, l: usize) -> Ratio<i64> {
    Ratio::new(r as i64, (r + delta) as i64) - Ratio::new(l as i64, n as i64)
}

/// k + l <= m - floor(m/(r + delta)) delta - h, h = (m mod (r + delta) - r)^+.
pub fn coop_general_bound(m: usize, r: usize, delta: usize) -> i64 {
    let (m, r, d) = (m as i64, r as i64, delta as i64);
    let h = (m % (r + d) - r).max(0);
    m - (m / (r + d)) * d - h
}

/// eta and the coefficient c with alpha >= c H(S) for perfect schemes with
/// locality r over n nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareSizeBound {
    pub eta: u32,
    pub coefficient: Ratio<i128>,
}

fn eta_cost(eta: u32, r: u32) -> Option<i128> {
    let groups = eta / (r + 1);
    let two = 2i128.checked_pow(eta)?;
    let base = ((r + 2) as i128).checked_pow(groups)?;
    Some(eta as i128 - groups as i128 + two - base + 1)
}

/// Largest multiple eta of r+1 with
/// eta - floor(eta/(r+1)) + 2^eta - (r+2)^(eta/(r+1)) + 1 <= n r/(r+1),
/// and coefficient (r+1)(2^eta - (r+2)^(eta/(r+1)))/(eta r).
pub fn share_size_bound(n: u64, r: u32) -> Result<ShareSizeBound> {
    if r == 0 || n % (r as u64 + 1) != 0 {
        return Err(Error::Parameter(format!(
            "(r+1) = {} must divide n = {n}",
            r + 1
        )));
    }
    let budget = (n / (r as u64 + 1) * r as u64) as i128;
    let mut best = None;
    let mut eta = r + 1;
    // the cost is increasing in eta, so stop at the first overflow
    while let Some(cost) = eta_cost(eta, r) {
        if cost > budget {
            break;
        }
        best = Some(eta);
        eta += r + 1;
    }
    let eta = best.ok_or_else(|| Error::Parameter("n too small for bound".into()))?;
    let groups = eta / (r + 1);
    let gap = 2i128.pow(eta) - ((r + 2) as i128).pow(groups);
    Ok(ShareSizeBound {
        eta,
        coefficient: Ratio::new((r as i128 + 1) * gap, eta as i128 * r as i128),
    })
}

/// Exact bound value for reports: integer or rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum BoundValue {
    Int(i64),
    Rational(String),
}

impl From<i64> for BoundValue {
    fn from(v: i64) -> Self {
        BoundValue::Int(v)
    }
}

impl From<Ratio<i64>> for BoundValue {
    fn from(v: Ratio<i64>) -> Self {
        if v.is_integer() {
            BoundValue::Int(v.to_integer())
        } else {
            BoundValue::Rational(format!("{}/{}", v.numer(), v.denom()))
        }
    }
}

impl From<Ratio<i128>> for BoundValue {
    fn from(v: Ratio<i128>) -> Self {
        if v.is_integer() {
            BoundValue::Int(v.to_integer() as i64)
        } else {
            BoundValue::Rational(format!("{}/{}", v.numer(), v.denom()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: BTreeMap<String, i64>,
    pub value: BoundValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<BTreeMap<String, BoundValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub satisfied: Option<bool>,
}

pub const BOUND_NAMES: &[&str] = &[
    "locality-distance",
    "naive-secrecy",
    "secrecy",
    "min-m",
    "roundtrip",
    "coop-rate",
    "coop-general",
    "share-size",
];

/// Evaluate a named bound from a parameter map.
pub fn evaluate(name: &str, params: &BTreeMap<String, i64>) -> Result<BoundReport> {
    let get = |key: &str| -> Result<usize> {
        let v = *params
            .get(key)
            .ok_or_else(|| Error::Parameter(format!("bound {name} needs parameter {key}")))?;
        usize::try_from(v).map_err(|_| Error::Parameter(format!("{key} must be non-negative")))
    };
    let get_or = |key: &str, default: usize| -> Result<usize> {
        if params.contains_key(key) {
            get(key)
        } else {
            Ok(default)
        }
    };
    let positive = |key: &str, v: usize| -> Result<usize> {
        if v == 0 {
            Err(Error::Parameter(format!("{key} must be at least 1")))
        } else {
            Ok(v)
        }
    };
    let mut inputs = BTreeMap::new();
    let mut record = |key: &str, v: usize| {
        inputs.insert(key.to_string(), v as i64);
        v
    };
    let mut extra = None;
    let value: BoundValue = match name {
        "locality-distance" => {
            let (n, k, r) = (record("n", get("n")?), record("k", get("k")?), record("r", positive("r", get("r")?)?));
            if k == 0 || k > n {
                return Err(Error::Parameter("need 1 <= k <= n".into()));
            }
            locality_distance_bound(n, k, r).into()
        }
        "naive-secrecy" | "secrecy" => {
            let m = record("m", get("m")?);
            let l = record("l", get_or("l", 0)?);
            let r = record("r", positive("r", get("r")?)?);
            if m <= l {
                return Err(Error::Parameter("need m > l".into()));
            }
            if name == "secrecy" {
                secrecy_bound(m, l, r).into()
            } else {
                naive_secrecy_bound(m, l, r).into()
            }
        }
        "min-m" => {
            let k = record("k", positive("k", get("k")?)?);
            let l = record("l", get_or("l", 0)?);
            let r = record("r", positive("r", get("r")?)?);
            min_m(k, l, r).into()
        }
        "roundtrip" => {
            let x = record("x", positive("x", get("x")?)?);
            let r = record("r", positive("r", get("r")?)?);
            let (y, back) = roundtrip_claim(x as u64, r as u64);
            extra = Some(BTreeMap::from([("x_back".to_string(), BoundValue::Int(back as i64))]));
            BoundValue::Int(y as i64)
        }
        "coop-rate" => {
            let n = record("n", positive("n", get("n")?)?);
            let r = record("r", positive("r", get("r")?)?);
            let d = record("delta", positive("delta", get("delta")?)?);
            let l = record("l", get_or("l", 0)?);
            coop_rate_bound(n, r, d, l).into()
        }
        "coop-general" => {
            let m = record("m", positive("m", get("m")?)?);
            let r = record("r", positive("r", get("r")?)?);
            let d = record("delta", positive("delta", get("delta")?)?);
            let general = coop_general_bound(m, r, d);
            let mut more = BTreeMap::new();
            if let Some(n) = params.get("n") {
                // at m = n both bounds apply; report the tighter
                let n = *n as usize;
                record("n", n);
                let rate = coop_rate_bound(n, r, d, 0) * Ratio::from_integer(n as i64);
                let rate_floor = rate.floor().to_integer();
                more.insert("rate_bound_total".to_string(), BoundValue::from(rate));
                more.insert("min".to_string(), BoundValue::Int(general.min(rate_floor)));
            }
            if !more.is_empty() {
                extra = Some(more);
            }
            general.into()
        }
        "share-size" => {
            let n = record("n", get("n")?);
            let r = record("r", positive("r", get("r")?)?);
            let b = share_size_bound(n as u64, r as u32)?;
            extra = Some(BTreeMap::from([("eta".to_string(), BoundValue::Int(b.eta as i64))]));
            b.coefficient.into()
        }
        other => {
            return Err(Error::Parameter(format!(
                "unknown bound {other}; expected one of {}",
                BOUND_NAMES.join(", ")
            )))
        }
    };
    Ok(BoundReport {
        name: name.to_string(),
        inputs,
        value,
        extra,
        satisfied: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_evaluated_values() {
        assert_eq!(locality_distance_bound(8, 6, 3), 2);
        assert_eq!(locality_distance_bound(4, 2, 1), 2);
        assert_eq!(locality_distance_bound(9, 4, 4), 9 - 4 + 1);
        assert_eq!(naive_secrecy_bound(7, 0, 3), 6);
        assert_eq!(naive_secrecy_bound(10, 1, 2), 6);
        assert_eq!(naive_secrecy_bound(4, 3, 5), 1);
        assert_eq!(secrecy_bound(7, 1, 3), 5);
        assert_eq!(secrecy_bound(5, 0, 5), 5);
        assert_eq!(secrecy_bound(10, 1, 2), 6);
        assert_eq!(min_m(5, 1, 3), 7);
        assert_eq!(min_m(1, 1, 1), 3);
        assert_eq!(min_m(6, 0, 6), 6);
        assert_eq!(roundtrip_claim(4, 2), (5, 4));
        assert_eq!(roundtrip_claim(1, 1), (1, 1));
        assert_eq!(roundtrip_claim(6, 3), (7, 6));
    }

    #[test]
    fn coop_values() {
        assert_eq!(coop_rate_bound(12, 2, 2, 1), Ratio::new(5, 12));
        assert_eq!(coop_rate_bound(6, 2, 2, 0), Ratio::new(1, 2));
        assert_eq!(coop_rate_bound(6, 2, 2, 1), Ratio::new(1, 3));
        assert_eq!(coop_general_bound(10, 3, 2), 6);
        assert_eq!(coop_general_bound(9, 3, 2), 6);
        assert_eq!(coop_general_bound(7, 3, 1), 6);
    }

    #[test]
    fn packing_traces() {
        let loc = LocalityStructure::partition(8, 3).unwrap();
        let p = construct_m(&loc, 7).unwrap();
        assert_eq!(p.set, vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(p.covered, vec![0, 1, 2, 3]);
        assert_eq!(p.groups_covered, 1);
        assert_eq!(p.reduced.len(), 6);

        let p = construct_m(&loc, 4).unwrap();
        assert_eq!(p.groups_covered, 1);
        assert_eq!(p.reduced.len(), 3);

        let p = construct_m(&loc, 8).unwrap();
        assert_eq!(p.groups_covered, 2);
        assert_eq!(p.reduced.len(), 6);
    }

    #[test]
    fn share_size_values() {
        let b = share_size_bound(512, 1).unwrap();
        assert_eq!(b.eta, 8);
        assert_eq!(b.coefficient, Ratio::new(175, 4));
        assert!(share_size_bound(4, 1).is_err());
        assert!(share_size_bound(5, 1).is_err());
    }

    #[test]
    fn evaluate_reports() {
        let params = BTreeMap::from([("m".into(), 7), ("l".into(), 1), ("r".into(), 3)]);
        let rep = evaluate("secrecy", &params).unwrap();
        assert_eq!(rep.value, BoundValue::Int(5));
        let rate = evaluate(
            "coop-rate",
            &BTreeMap::from([("n".into(), 12), ("r".into(), 2), ("delta".into(), 2), ("l".into(), 1)]),
        )
        .unwrap();
        assert_eq!(rate.value, BoundValue::Rational("5/12".into()));
        assert!(evaluate("nope", &params).is_err());
    }
}
