//! Exhaustive ground truth for tiny schemes: every (secret, randomness) pair
//! is pushed through the encoder and security, recovery and locality are
//! decided by exact counting over the resulting joint distribution.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::access::AccessStructure;
use crate::error::{Error, Result};
use crate::galois::{Elem, FieldSpec};
use crate::secret::{EncodingInput, SchemeParams, SecretSharingScheme};
use crate::subsets::{combinations, mask_of, members, subsets_up_to};

pub const DEFAULT_LIMIT: u128 = 1 << 20;
/// Largest participant count for full subset tables.
pub const TABLE_MAX_N: usize = 16;

/// Enumeration limit, overridable through `LRSS_ORACLE_LIMIT`.
pub fn default_limit() -> u128 {
    std::env::var("LRSS_ORACLE_LIMIT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_LIMIT)
}

/// Uniform joint distribution of (secret, shares). Every support point has
/// probability `1 / len()`. Share bundles are interned per participant.
#[derive(Clone, Debug)]
pub struct JointDistribution {
    pub n: usize,
    pub field: FieldSpec,
    /// Share-field order, the entropy base.
    pub order: u64,
    pub secret_count: u64,
    pub randomness_count: u64,
    /// Secret index of each support point.
    pub secrets: Vec<u64>,
    /// `shares[i][point]` is the interned bundle id of participant i.
    pub shares: Vec<Vec<u32>>,
    /// `bundles[i][id]` is the bundle behind an id.
    pub bundles: Vec<Vec<Vec<Elem>>>,
}

fn digits(mut index: u64, base: u64, len: usize) -> Vec<Elem> {
    (0..len)
        .map(|_| {
            let d = index % base;
            index /= base;
            Elem(d)
        })
        .collect()
}

pub fn enumerate_joint(scheme: &SecretSharingScheme, limit: u128) -> Result<JointDistribution> {
    let q = scheme.field.order() as u128;
    let secret_count = q.checked_pow(scheme.secret_len as u32).unwrap_or(u128::MAX);
    let randomness_count = q.checked_pow(scheme.randomness_len as u32).unwrap_or(u128::MAX);
    let total = secret_count.saturating_mul(randomness_count);
    if total > limit {
        return Err(Error::TooLargeForOracle(total, limit));
    }
    let n = scheme.n();
    let (sc, rc) = (secret_count as u64, randomness_count as u64);
    let mut secrets = Vec::with_capacity(total as usize);
    let mut shares = vec![Vec::with_capacity(total as usize); n];
    let mut bundles: Vec<Vec<Vec<Elem>>> = vec![Vec::new(); n];
    let mut intern: Vec<HashMap<Vec<Elem>, u32>> = vec![HashMap::new(); n];
    for s in 0..sc {
        let secret = digits(s, q as u64, scheme.secret_len);
        for r in 0..rc {
            let input = EncodingInput {
                secret: secret.clone(),
                randomness: digits(r, q as u64, scheme.randomness_len),
            };
            let c = scheme.encode(&input)?;
            secrets.push(s);
            for (i, (_, v)) in c.coords.into_iter().enumerate() {
                let next = bundles[i].len() as u32;
                let id = *intern[i].entry(v.clone()).or_insert_with(|| {
                    bundles[i].push(v);
                    next
                });
                shares[i].push(id);
            }
        }
    }
    Ok(JointDistribution {
        n,
        field: scheme.field.spec().clone(),
        order: scheme.field.order(),
        secret_count: sc,
        randomness_count: rc,
        secrets,
        shares,
        bundles,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Determined,
    Independent,
    Partial,
}

impl JointDistribution {
    pub fn len(&self) -> usize {
        self.secrets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.secrets.is_empty()
    }

    pub fn probability(&self) -> Ratio<u64> {
        Ratio::new(1, self.len() as u64)
    }

    fn key(&self, set: &[usize], point: usize) -> Vec<u32> {
        set.iter().map(|&i| self.shares[i][point]).collect()
    }

    /// Secret counts conditioned on each attainable assignment of `set`.
    fn conditional_counts(&self, set: &[usize]) -> HashMap<Vec<u32>, HashMap<u64, u64>> {
        let mut table: HashMap<Vec<u32>, HashMap<u64, u64>> = HashMap::new();
        for p in 0..self.len() {
            *table
                .entry(self.key(set, p))
                .or_default()
                .entry(self.secrets[p])
                .or_default() += 1;
        }
        table
    }

    /// Counts of each attainable assignment of `set`, optionally joined with
    /// the secret.
    fn marginal_counts(&self, set: &[usize], with_secret: bool) -> Vec<u64> {
        let mut table: HashMap<(Vec<u32>, u64), u64> = HashMap::new();
        for p in 0..self.len() {
            let s = if with_secret { self.secrets[p] } else { 0 };
            *table.entry((self.key(set, p), s)).or_default() += 1;
        }
        table.into_values().collect()
    }

    /// Entropy in units of log(order).
    pub fn entropy(&self, set: &[usize], with_secret: bool) -> f64 {
        let total = self.len() as f64;
        let h: f64 = self
            .marginal_counts(set, with_secret)
            .into_iter()
            .map(|c| {
                let pr = c as f64 / total;
                -pr * pr.ln()
            })
            .sum();
        h / (self.order as f64).ln()
    }

    pub fn secret_entropy(&self) -> f64 {
        (self.secret_count as f64).ln() / (self.order as f64).ln()
    }

    /// H(S | C_set).
    pub fn conditional_entropy(&self, set: &[usize]) -> f64 {
        self.entropy(set, true) - self.entropy(set, false)
    }

    /// Whether participant i's bundle is a function of the bundles of `from`.
    pub fn is_function_of(&self, i: usize, from: &[usize]) -> bool {
        let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
        (0..self.len()).all(|p| {
            let v = self.shares[i][p];
            *seen.entry(self.key(from, p)).or_insert(v) == v
        })
    }

    /// Number of distinct bundles participant i can hold.
    pub fn share_domain(&self, i: usize) -> usize {
        self.bundles[i].len()
    }
}

/// Exact verdict on what the shares of `set` reveal about the secret.
pub fn verdict(dist: &JointDistribution, set: &[usize]) -> Verdict {
    let table = dist.conditional_counts(set);
    if table.values().all(|c| c.len() == 1) {
        return Verdict::Determined;
    }
    let independent = table.values().all(|c| {
        c.len() as u64 == dist.secret_count && {
            let first = *c.values().next().expect("nonempty");
            c.values().all(|&x| x == first)
        }
    });
    if independent {
        Verdict::Independent
    } else {
        Verdict::Partial
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub pass: bool,
    pub witness: Option<Vec<usize>>,
}

impl Condition {
    fn from_witness(witness: Option<Vec<usize>>) -> Self {
        Condition {
            pass: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub params: SchemeParams,
    /// Every m-subset determines the secret.
    pub recovery: Condition,
    /// Every l-subset is independent of the secret.
    pub security: Condition,
    /// Every participant is a function of at most r others.
    pub locality: Condition,
    pub recovery_sets: Vec<Option<Vec<usize>>>,
    /// H(S) <= (m - floor(m/(r+1)) - l) * max_i H(C_i), checked when the
    /// other conditions hold.
    pub entropy_bound: Option<bool>,
    pub pass: bool,
}

/// Smallest set of at most r other participants that determines participant
/// i, trying `preferred` first.
pub fn find_recovery_set(
    dist: &JointDistribution,
    i: usize,
    r: usize,
    preferred: Option<&[usize]>,
) -> Option<Vec<usize>> {
    if let Some(set) = preferred {
        if set.len() <= r && !set.contains(&i) && dist.is_function_of(i, set) {
            return Some(set.to_vec());
        }
    }
    let others: Vec<usize> = (0..dist.n).filter(|&j| j != i).collect();
    subsets_up_to(others.len(), r)
        .map(|pick| pick.iter().map(|&x| others[x]).collect::<Vec<_>>())
        .find(|set| dist.is_function_of(i, set))
}

/// Recovery sets of size at most r for every participant.
pub fn locality_check(
    dist: &JointDistribution,
    r: usize,
    declared: Option<&[Vec<usize>]>,
) -> Vec<Option<Vec<usize>>> {
    (0..dist.n)
        .map(|i| find_recovery_set(dist, i, r, declared.map(|d| d[i].as_slice())))
        .collect()
}

pub fn audit_definition1(scheme: &SecretSharingScheme, dist: &JointDistribution) -> AuditReport {
    audit_definition1_with(scheme, dist, scheme.params.r)
}

/// Recovery, security and locality audit with an explicit locality budget.
pub fn audit_definition1_with(
    scheme: &SecretSharingScheme,
    dist: &JointDistribution,
    r: usize,
) -> AuditReport {
    let SchemeParams { n, m, l, .. } = scheme.params;
    let recovery =
        Condition::from_witness(combinations(n, m).find(|s| verdict(dist, s) != Verdict::Determined));
    let security = Condition::from_witness(
        combinations(n, l).find(|s| verdict(dist, s) != Verdict::Independent),
    );
    let recovery_sets = locality_check(dist, r, Some(&scheme.recovery));
    let locality = Condition::from_witness(
        recovery_sets
            .iter()
            .position(Option::is_none)
            .map(|i| vec![i]),
    );
    let pass = recovery.pass && security.pass && locality.pass;
    let entropy_bound = pass.then(|| {
        let max_share = (0..n)
            .map(|i| dist.entropy(&[i], false))
            .fold(0.0, f64::max);
        let budget = m as f64 - (m / (r + 1)) as f64 - l as f64;
        dist.secret_entropy() <= budget * max_share + 1e-9
    });
    AuditReport {
        params: scheme.params,
        recovery,
        security,
        locality,
        recovery_sets,
        entropy_bound,
        pass,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectAudit {
    pub pass: bool,
    /// First qualified set that does not determine the secret.
    pub qualified_failure: Option<Vec<usize>>,
    /// First non-qualified set that is not independent of the secret.
    pub blocked_failure: Option<Vec<usize>>,
    /// Every share domain is at least as large as the secret domain.
    pub share_size_ok: bool,
}

/// Checks every subset of participants against the access structure, in
/// order of size then lexicographically.
pub fn audit_perfect(dist: &JointDistribution, access: &AccessStructure) -> Result<PerfectAudit> {
    if access.n != dist.n {
        return Err(Error::Dimension(format!(
            "access structure on {} participants, scheme has {}",
            access.n, dist.n
        )));
    }
    if dist.n > TABLE_MAX_N {
        return Err(Error::Cutoff(format!("{} participants exceed {TABLE_MAX_N}", dist.n)));
    }
    let mut qualified_failure = None;
    let mut blocked_failure = None;
    for set in subsets_up_to(dist.n, dist.n) {
        let v = verdict(dist, &set);
        if access.is_qualified(&set) {
            if v != Verdict::Determined && qualified_failure.is_none() {
                qualified_failure = Some(set);
            }
        } else if v != Verdict::Independent && blocked_failure.is_none() {
            blocked_failure = Some(set);
        }
    }
    let pass = qualified_failure.is_none() && blocked_failure.is_none();
    let share_size_ok = (0..dist.n).all(|i| dist.share_domain(i) as u64 >= dist.secret_count);
    Ok(PerfectAudit {
        pass,
        qualified_failure,
        blocked_failure,
        share_size_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyEntry {
    pub set: Vec<usize>,
    pub conditional_entropy: f64,
    pub verdict: Verdict,
}

/// H(S | C_J) with its exact verdict for every J.
pub fn entropy_table(dist: &JointDistribution) -> Result<Vec<EntropyEntry>> {
    if dist.n > TABLE_MAX_N {
        return Err(Error::Cutoff(format!("{} participants exceed {TABLE_MAX_N}", dist.n)));
    }
    Ok(subsets_up_to(dist.n, dist.n)
        .map(|set| EntropyEntry {
            conditional_entropy: dist.conditional_entropy(&set),
            verdict: verdict(dist, &set),
            set,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegradationEntry {
    pub set: Vec<usize>,
    pub conditional_entropy: f64,
    /// m - floor(m/(r+1)) - |J|.
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegradationReport {
    pub threshold: usize,
    pub entries: Vec<DegradationEntry>,
    /// J minimizing H(S|C_J) - bound, smallest size then lexicographic.
    pub minimizer: Option<Vec<usize>>,
    pub satisfied: bool,
}

/// Gradual degradation: some J with l <= |J| <= m - floor(m/(r+1)) has
/// H(S | C_J) <= m - floor(m/(r+1)) - |J|.
pub fn gradual_degradation(dist: &JointDistribution, params: &SchemeParams) -> DegradationReport {
    let tol = 1e-9;
    let t = params.m - params.m / (params.r + 1);
    let mut entries = Vec::new();
    for size in params.l..=t.min(dist.n) {
        for set in combinations(dist.n, size) {
            entries.push(DegradationEntry {
                conditional_entropy: dist.conditional_entropy(&set),
                bound: t as i64 - size as i64,
                set,
            });
        }
    }
    let mut best: Option<(f64, &DegradationEntry)> = None;
    for e in &entries {
        let slack = e.conditional_entropy - e.bound as f64;
        if best.is_none_or(|(b, _)| slack < b - tol) {
            best = Some((slack, e));
        }
    }
    let satisfied = best.is_some_and(|(s, _)| s <= tol);
    DegradationReport {
        threshold: t,
        minimizer: best.map(|(_, e)| e.set.clone()),
        entries,
        satisfied,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolymatroidReport {
    /// phi(empty) = 0.
    pub p1: bool,
    /// Monotone.
    pub p2: bool,
    /// Submodular over all pairs of subsets.
    pub p3: bool,
    /// phi(A, S) = phi(A) on qualified A.
    pub pa: Option<bool>,
    /// phi(A, S) = phi(A) + 1 on non-qualified A.
    pub pb: Option<bool>,
    pub violation: Option<String>,
    pub pass: bool,
}

/// Polymatroid axioms for phi(A) = H(C_A) / H(S), plus the access-structure
/// identities when a structure is supplied.
pub fn polymatroid_check(
    dist: &JointDistribution,
    access: Option<&AccessStructure>,
    tol: f64,
) -> Result<PolymatroidReport> {
    let n = dist.n;
    if n > TABLE_MAX_N {
        return Err(Error::Cutoff(format!("{n} participants exceed {TABLE_MAX_N}")));
    }
    let hs = dist.secret_entropy();
    let size = 1usize << n;
    let phi: Vec<f64> = (0..size as u64)
        .map(|m| dist.entropy(&members(m), false) / hs)
        .collect();
    let mut violation = None;
    let p1 = phi[0].abs() <= tol;
    if !p1 {
        violation = Some(format!("phi(empty) = {}", phi[0]));
    }
    let mut p2 = true;
    for a in 0..size {
        for i in 0..n {
            if a >> i & 1 == 0 && phi[a] > phi[a | 1 << i] + tol {
                p2 = false;
                violation.get_or_insert_with(|| {
                    format!("phi decreases from {:?} adding {i}", members(a as u64))
                });
            }
        }
    }
    let mut p3 = true;
    for a in 0..size {
        for b in a + 1..size {
            if phi[a] + phi[b] + tol < phi[a | b] + phi[a & b] {
                p3 = false;
                violation.get_or_insert_with(|| {
                    format!(
                        "submodularity fails on {:?}, {:?}",
                        members(a as u64),
                        members(b as u64)
                    )
                });
            }
        }
    }
    let (mut pa, mut pb) = (None, None);
    if let Some(access) = access {
        let (mut okay_a, mut okay_b) = (true, true);
        for a in 0..size as u64 {
            let set = members(a);
            let joint = dist.entropy(&set, true) / hs;
            let p = phi[mask_of(&set) as usize];
            if access.is_qualified(&set) {
                if (joint - p).abs() > tol {
                    okay_a = false;
                    violation.get_or_insert_with(|| format!("Pa fails on {set:?}"));
                }
            } else if (joint - p - 1.0).abs() > tol {
                okay_b = false;
                violation.get_or_insert_with(|| format!("Pb fails on {set:?}"));
            }
        }
        pa = Some(okay_a);
        pb = Some(okay_b);
    }
    let pass = p1 && p2 && p3 && pa.unwrap_or(true) && pb.unwrap_or(true);
    Ok(PolymatroidReport {
        p1,
        p2,
        p3,
        pa,
        pb,
        violation,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Field;
    use crate::secret::shamir;

    #[test]
    fn shamir_three_two() {
        // GF(3) has no third nonzero evaluation point.
        assert!(shamir(3, 2, &Field::prime(3).unwrap()).is_err());
        let f = Field::prime(5).unwrap();
        let s = shamir(3, 2, &f).unwrap();
        let d = enumerate_joint(&s, DEFAULT_LIMIT).unwrap();
        assert_eq!(d.len(), 25);
        assert_eq!(d.probability(), Ratio::new(1, 25));
        assert_eq!(verdict(&d, &[]), Verdict::Independent);
        for i in 0..3 {
            assert_eq!(verdict(&d, &[i]), Verdict::Independent);
        }
        for pair in combinations(3, 2) {
            assert_eq!(verdict(&d, &pair), Verdict::Determined);
        }
        assert_eq!(verdict(&d, &[0, 1, 2]), Verdict::Determined);
    }

    #[test]
    fn limit_is_enforced() {
        let f = Field::prime(7).unwrap();
        let s = shamir(5, 3, &f).unwrap();
        assert_eq!(
            enumerate_joint(&s, 100).unwrap_err(),
            Error::TooLargeForOracle(343, 100)
        );
    }

    #[test]
    fn partial_leak_is_partial() {
        // Two secret symbols, participant 0 stores only the first.
        let f = Field::prime(2).unwrap();
        let code = crate::lrc::LinearCode::new(
            f.clone(),
            crate::galois::Matrix::from_u64(&[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap(),
            None,
        )
        .unwrap();
        let s = crate::secret::split_scheme(&code, 0).unwrap();
        let d = enumerate_joint(&s, DEFAULT_LIMIT).unwrap();
        assert_eq!(verdict(&d, &[0]), Verdict::Partial);
        assert!((d.conditional_entropy(&[0]) - 1.0).abs() < 1e-12);
        assert!((d.secret_entropy() - 2.0).abs() < 1e-12);
    }
}
