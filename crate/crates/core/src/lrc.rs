//! Linear locally repairable codes: the partitioned constructor, exact
//! distance and locality audits, maximal recoverability and a randomized MR
//! search.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::{vandermonde, Elem, Field, Matrix};
use crate::subsets::{combinations, Combinations};

/// Recovery structure of a code. `groups` is the partition {Q_j} when the
/// structure came from one; `recovery[i]` is R_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityStructure {
    pub n: usize,
    pub r: usize,
    pub groups: Vec<Vec<usize>>,
    pub recovery: Vec<Vec<usize>>,
}

impl LocalityStructure {
    /// Consecutive groups of size r+1 with R_i = Q(i) \ {i}.
    pub fn partition(n: usize, r: usize) -> Result<Self> {
        if r == 0 || n % (r + 1) != 0 {
            return Err(Error::Parameter(format!(
                "(r+1) = {} must divide n = {n}",
                r + 1
            )));
        }
        let groups = (0..n / (r + 1))
            .map(|j| (j * (r + 1)..(j + 1) * (r + 1)).collect())
            .collect();
        Self::from_groups(n, r, groups)
    }

    pub fn from_groups(n: usize, r: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for g in &groups {
            if g.len() != r + 1 {
                return Err(Error::Parameter(format!(
                    "group {g:?} does not have r+1 = {} members",
                    r + 1
                )));
            }
            for &i in g {
                if i >= n || seen[i] {
                    return Err(Error::Parameter(format!("groups do not partition [{n}]")));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Parameter(format!("groups do not partition [{n}]")));
        }
        let mut recovery = vec![Vec::new(); n];
        for g in &groups {
            for &i in g {
                recovery[i] = g.iter().copied().filter(|&j| j != i).collect();
            }
        }
        Ok(LocalityStructure {
            n,
            r,
            groups,
            recovery,
        })
    }

    /// Free-form recovery sets, accepted for auditing only.
    pub fn from_recovery(n: usize, r: usize, recovery: Vec<Vec<usize>>) -> Result<Self> {
        if recovery.len() != n {
            return Err(Error::Dimension(format!(
                "{} recovery sets for n = {n}",
                recovery.len()
            )));
        }
        for (i, set) in recovery.iter().enumerate() {
            if set.len() > r || set.iter().any(|&j| j >= n || j == i) {
                return Err(Error::Parameter(format!("invalid recovery set for {i}")));
            }
        }
        Ok(LocalityStructure {
            n,
            r,
            groups: Vec::new(),
            recovery,
        })
    }

    pub fn group_of(&self, i: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(&i))
    }

    /// Lambda_i = R_i with i added, sorted.
    pub fn closure(&self, i: usize) -> Vec<usize> {
        let mut v = self.recovery[i].clone();
        v.push(i);
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    pub field: Field,
    pub n: usize,
    pub dim: usize,
    /// n x dim; row i is the encoding vector of coordinate i.
    pub g: Matrix,
    pub locality: Option<LocalityStructure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeAudit {
    pub min_distance: usize,
    pub locality_verified: bool,
    pub optimal: bool,
    pub mr: bool,
}

/// Failing subset found by the maximal-recoverability check, with one
/// puncture pattern (one removed coordinate per group) whose survivors
/// contain it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MrWitness {
    pub punctured: Vec<usize>,
    pub subset: Vec<usize>,
}

const CODEWORD_LIMIT: u128 = 1 << 16;
const SUBSET_SCAN_MAX_N: usize = 24;

impl LinearCode {
    pub fn new(
        field: Field,
        g: Matrix,
        locality: Option<LocalityStructure>,
    ) -> Result<Self> {
        let n = g.rows();
        let dim = g.cols();
        if dim == 0 {
            return Err(Error::Parameter("code dimension must be positive".into()));
        }
        if g.to_rows().iter().flatten().any(|&e| !field.contains(e)) {
            return Err(Error::Parameter("generator entry outside the field".into()));
        }
        if g.rank(&field) != dim {
            return Err(Error::Parameter(format!(
                "generator of {dim} columns has rank {}",
                g.rank(&field)
            )));
        }
        if let Some(loc) = &locality {
            if loc.n != n {
                return Err(Error::Dimension(format!(
                    "locality for n = {} on a code of length {n}",
                    loc.n
                )));
            }
        }
        Ok(LinearCode {
            field,
            n,
            dim,
            g,
            locality,
        })
    }

    pub fn r(&self) -> Option<usize> {
        self.locality.as_ref().map(|l| l.r)
    }

    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>> {
        self.g.mul_vec(&self.field, message)
    }

    pub fn rank_of(&self, idx: &[usize]) -> usize {
        self.g.select_rows(idx).rank(&self.field)
    }

    /// Exact minimum Hamming weight over nonzero codewords.
    pub fn min_distance(&self) -> Result<usize> {
        let words = (self.field.order() as u128).saturating_pow(self.dim as u32);
        if words <= CODEWORD_LIMIT {
            return Ok(self.min_distance_by_codewords());
        }
        if self.n <= SUBSET_SCAN_MAX_N {
            return Ok(self.min_distance_by_subsets());
        }
        Err(Error::TooLargeForDistance(words))
    }

    /// Weight scan over every nonzero message.
    pub fn min_distance_by_codewords(&self) -> usize {
        let q = self.field.order();
        let mut msg = vec![Elem::ZERO; self.dim];
        let mut best = self.n;
        loop {
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == self.dim {
                    return best;
                }
                msg[pos] = Elem(msg[pos].0 + 1);
                if msg[pos].0 < q {
                    break;
                }
                msg[pos] = Elem::ZERO;
                pos += 1;
            }
            let c = self.g.mul_vec(&self.field, &msg).expect("dimensions agree");
            let w = c.iter().filter(|e| !e.is_zero()).count();
            best = best.min(w);
        }
    }

    /// d = n - max{|Z| : rank(G_Z) < dim}; a nonzero codeword vanishing on Z
    /// exists exactly when the rows of Z are rank deficient.
    pub fn min_distance_by_subsets(&self) -> usize {
        for z in (self.dim.saturating_sub(1)..self.n).rev() {
            if combinations(self.n, z).any(|s| self.rank_of(&s) < self.dim) {
                return self.n - z;
            }
        }
        self.n
    }

    /// Every row g_i lies in the span of the rows of R_i.
    pub fn verify_locality(&self) -> bool {
        let Some(loc) = &self.locality else {
            return false;
        };
        (0..self.n).all(|i| self.row_in_span(i, &loc.recovery[i]))
    }

    fn row_in_span(&self, i: usize, set: &[usize]) -> bool {
        let base = self.rank_of(set);
        let mut with: Vec<usize> = set.to_vec();
        with.push(i);
        self.rank_of(&with) == base
    }

    /// lambda_i with g_i = sum_{j in R_i} lambda_j g_j, in the order of R_i.
    pub fn repair_coefficients(&self) -> Result<Vec<Vec<Elem>>> {
        let loc = self
            .locality
            .as_ref()
            .ok_or_else(|| Error::Parameter("code has no locality structure".into()))?;
        (0..self.n)
            .map(|i| {
                let rows = self.g.select_rows(&loc.recovery[i]);
                rows.solve_row_combination(&self.field, self.g.row(i))
                    .map_err(|_| Error::NoLocalRelation(i))
            })
            .collect()
    }

    /// Solve for the message from a partial codeword. Arithmetic runs in `f`,
    /// which may be an extension of the code field.
    pub fn erasure_decode_in(&self, f: &Field, observed: &[(usize, Elem)]) -> Result<Vec<Elem>> {
        if observed.is_empty() {
            return Err(Error::Undecodable {
                rank: 0,
                needed: self.dim,
            });
        }
        let idx: Vec<usize> = observed.iter().map(|&(i, _)| i).collect();
        if idx.iter().any(|&i| i >= self.n) {
            return Err(Error::Parameter("coordinate out of range".into()));
        }
        let rows = self.g.select_rows(&idx);
        let rank = rows.rank(&self.field);
        if rank < self.dim {
            return Err(Error::Undecodable {
                rank,
                needed: self.dim,
            });
        }
        let values: Vec<Elem> = observed.iter().map(|&(_, v)| v).collect();
        rows.solve(f, &values)
            .map_err(|_| Error::InconsistentShares)
    }

    pub fn erasure_decode(&self, observed: &[(usize, Elem)]) -> Result<Vec<Elem>> {
        self.erasure_decode_in(&self.field, observed)
    }

    pub fn is_maximally_recoverable(&self) -> bool {
        self.mr_witness().is_none() && self.locality.as_ref().is_some_and(|l| !l.groups.is_empty())
    }

    pub fn mr_witness(&self) -> Option<MrWitness> {
        let loc = self.locality.as_ref()?;
        mr_witness(&self.field, &self.g, &loc.groups)
    }

    pub fn audit(&self) -> Result<CodeAudit> {
        let min_distance = self.min_distance()?;
        let locality_verified = self.verify_locality();
        let optimal = locality_verified
            && self.r().is_some_and(|r| {
                min_distance as i64 == crate::bounds::locality_distance_bound(self.n, self.dim, r)
            });
        Ok(CodeAudit {
            min_distance,
            locality_verified,
            optimal,
            mr: self.is_maximally_recoverable(),
        })
    }
}

/// Maximal recoverability of the code generated by `g` under the partition
/// `groups`: after puncturing one coordinate per group the rest must be MDS.
/// Equivalently every `cols`-subset meeting each group in at most r
/// coordinates has full rank. Returns the lexicographically first failure.
pub fn mr_witness(f: &Field, g: &Matrix, groups: &[Vec<usize>]) -> Option<MrWitness> {
    let dim = g.cols();
    let n = g.rows();
    let punctured_len = n - groups.len();
    let group_of = |i: usize| groups.iter().position(|q| q.contains(&i)).expect("partition");
    let pattern_for = |subset: &[usize]| -> Vec<usize> {
        groups
            .iter()
            .map(|q| *q.iter().find(|i| !subset.contains(i)).expect("room left"))
            .collect()
    };
    if dim > punctured_len {
        let subset: Vec<usize> = Vec::new();
        return Some(MrWitness {
            punctured: pattern_for(&subset),
            subset,
        });
    }
    let mut counts = vec![0usize; groups.len()];
    for subset in Combinations::new(n, dim) {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut covers_group = false;
        for &i in &subset {
            let j = group_of(i);
            counts[j] += 1;
            if counts[j] == groups[j].len() {
                covers_group = true;
            }
        }
        if covers_group {
            continue;
        }
        if g.select_rows(&subset).rank(f) < dim {
            return Some(MrWitness {
                punctured: pattern_for(&subset),
                subset,
            });
        }
    }
    None
}

/// Systematic MDS data symbols arranged r per group plus one parity per group
/// equal to the sum of the group's data coordinates.
pub fn build_partitioned_lrc(field: &Field, n: usize, dim: usize, r: usize) -> Result<LinearCode> {
    if dim == 0 {
        return Err(Error::Parameter("dimension must be positive".into()));
    }
    let loc = LocalityStructure::partition(n, r)?;
    let data_len = n / (r + 1) * r;
    if dim > data_len {
        return Err(Error::Parameter(format!(
            "dim {dim} exceeds n*r/(r+1) = {data_len}"
        )));
    }
    if field.order() < data_len as u64 {
        return Err(Error::Parameter(format!(
            "field of order {} too small for {data_len} evaluation points",
            field.order()
        )));
    }
    let points: Vec<Elem> = (0..data_len as u64).map(Elem).collect();
    let v = vandermonde(field, &points, dim);
    let top: Vec<usize> = (0..dim).collect();
    let sys = v.mul(field, &v.select_rows(&top).inverse(field)?)?;
    let mut g = Matrix::zeros(n, dim);
    for (j, group) in loc.groups.iter().enumerate() {
        let mut parity = vec![Elem::ZERO; dim];
        for (t, &coord) in group[..r].iter().enumerate() {
            let row = sys.row(j * r + t);
            for c in 0..dim {
                g.set(coord, c, row[c]);
                parity[c] = field.add(parity[c], row[c]);
            }
        }
        for (c, &v) in parity.iter().enumerate() {
            g.set(group[r], c, v);
        }
    }
    LinearCode::new(field.clone(), g, Some(loc))
}

/// Random group-respecting generator: r uniform rows per group and a parity
/// row that is a combination of them with nonzero coefficients.
pub fn random_group_code<R: Rng>(
    field: &Field,
    n: usize,
    dim: usize,
    r: usize,
    rng: &mut R,
) -> Result<Option<LinearCode>> {
    let loc = LocalityStructure::partition(n, r)?;
    let q = field.order();
    let mut g = Matrix::zeros(n, dim);
    for group in &loc.groups {
        let mut parity = vec![Elem::ZERO; dim];
        for &coord in &group[..r] {
            let lambda = Elem(rng.gen_range(1..q));
            for c in 0..dim {
                let v = Elem(rng.gen_range(0..q));
                g.set(coord, c, v);
                parity[c] = field.add(parity[c], field.mul(lambda, v));
            }
        }
        for (c, &v) in parity.iter().enumerate() {
            g.set(group[r], c, v);
        }
    }
    if g.rank(field) < dim {
        return Ok(None);
    }
    LinearCode::new(field.clone(), g, Some(loc)).map(Some)
}

/// Sample group-respecting generators until one is maximally recoverable.
pub fn search_mr_code(
    field: &Field,
    n: usize,
    dim: usize,
    r: usize,
    seed: u64,
    max_tries: usize,
) -> Result<LinearCode> {
    LocalityStructure::partition(n, r)?;
    if dim == 0 || dim > n / (r + 1) * r {
        return Err(Error::Parameter(format!(
            "dim {dim} outside [1, n*r/(r+1)]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_tries {
        if let Some(code) = random_group_code(field, n, dim, r, &mut rng)? {
            if code.is_maximally_recoverable() {
                return Ok(code);
            }
        }
    }
    Err(Error::NotFound(max_tries))
}
