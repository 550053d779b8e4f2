//! Repairable secret sharing on graphs: each node is repaired from its
//! (out-)neighbors. Exhaustive graph bounds, the matching scheme for
//! undirected graphs and cycle-packing schemes for directed graphs.

pub mod lp;

use std::collections::HashMap;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{vandermonde, Elem, Field, Matrix};
use crate::secret::{Precode, SchemeParams, SchemeTag, SecretSharingScheme};
use crate::subsets::members;

pub const GRAPH_MAX_N: usize = 20;
pub const CYCLE_MAX_N: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub n: usize,
    pub directed: bool,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Sorted, deduplicated edges; undirected edges are stored as (min, max).
    pub fn new(n: usize, directed: bool, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Parameter(format!("edge ({u},{v}) outside [{n}]")));
            }
            if u == v {
                return Err(Error::Parameter(format!("self-loop at {u}")));
            }
            norm.push(if directed { (u, v) } else { (u.min(v), u.max(v)) });
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(Graph {
            n,
            directed,
            edges: norm,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let g = Graph::new(self.n, self.directed, self.edges.clone())?;
        if g.edges.len() != self.edges.len() {
            return Err(Error::Parameter("duplicate edges".into()));
        }
        Ok(())
    }

    pub fn cycle(n: usize) -> Self {
        Graph::new(n, true, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("valid cycle")
    }

    pub fn undirected_cycle(n: usize) -> Self {
        Graph::new(n, false, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Graph::new(n, false, edges).expect("valid complete graph")
    }

    /// Out-neighbors when directed, neighbors otherwise, as a bitmask.
    pub fn neighbor_mask(&self, i: usize) -> u64 {
        self.edges.iter().fold(0u64, |m, &(u, v)| {
            if u == i {
                m | 1 << v
            } else if !self.directed && v == i {
                m | 1 << u
            } else {
                m
            }
        })
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        members(self.neighbor_mask(i))
    }

    fn check_size(&self, limit: usize) -> Result<()> {
        if self.n > limit {
            return Err(Error::Cutoff(format!("graph on {} vertices exceeds {limit}", self.n)));
        }
        Ok(())
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = if self.directed { (u, v) } else { (u.min(v), u.max(v)) };
        self.edges.binary_search(&e).is_ok()
    }

    /// N(U): neighbors of U outside U.
    pub fn neighborhood_mask(&self, u: u64) -> u64 {
        members(u)
            .into_iter()
            .fold(0u64, |m, i| m | self.neighbor_mask(i))
            & !u
    }

    fn is_independent(&self, mask: u64) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| mask >> u & 1 == 0 || mask >> v & 1 == 0)
    }

    /// Induced subgraph on `mask` has no directed cycle (Kahn's algorithm).
    fn is_induced_acyclic(&self, mask: u64) -> bool {
        let nodes = members(mask);
        let mut indeg: HashMap<usize, usize> = nodes.iter().map(|&v| (v, 0)).collect();
        for &(u, v) in &self.edges {
            if mask >> u & 1 == 1 && mask >> v & 1 == 1 {
                *indeg.get_mut(&v).expect("member") += 1;
            }
        }
        let mut stack: Vec<usize> = nodes.iter().copied().filter(|v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(u) = stack.pop() {
            seen += 1;
            for v in members(self.neighbor_mask(u) & mask) {
                let d = indeg.get_mut(&v).expect("member");
                *d -= 1;
                if *d == 0 {
                    stack.push(v);
                }
            }
        }
        seen == nodes.len()
    }

    /// Independent (undirected) or induced-acyclic (directed) vertex sets.
    fn is_admissible(&self, mask: u64) -> bool {
        if self.directed {
            self.is_induced_acyclic(mask)
        } else {
            self.is_independent(mask)
        }
    }

    /// Largest admissible set satisfying `extra`, lexicographically smallest
    /// among the largest.
    fn best_admissible(&self, extra: impl Fn(u64) -> bool) -> Result<Vec<usize>> {
        self.check_size(GRAPH_MAX_N)?;
        let mut best: Option<Vec<usize>> = None;
        for mask in 0u64..1 << self.n {
            if !extra(mask) || !self.is_admissible(mask) {
                continue;
            }
            let set = members(mask);
            let better = match &best {
                None => true,
                Some(b) => set.len() > b.len() || (set.len() == b.len() && set < *b),
            };
            if better {
                best = Some(set);
            }
        }
        Ok(best.unwrap_or_default())
    }
}

pub fn max_independent_set(g: &Graph) -> Result<Vec<usize>> {
    if g.directed {
        return Err(Error::Parameter("independent sets need an undirected graph".into()));
    }
    g.best_admissible(|_| true)
}

pub fn max_induced_acyclic(g: &Graph) -> Result<Vec<usize>> {
    if !g.directed {
        return Err(Error::Parameter("induced acyclic sets need a directed graph".into()));
    }
    g.best_admissible(|_| true)
}

/// Independent set for undirected graphs, induced acyclic set for directed.
pub fn max_admissible_set(g: &Graph) -> Result<Vec<usize>> {
    g.best_admissible(|_| true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphMBound {
    /// k + l + max |U|.
    pub value: usize,
    pub witness: Vec<usize>,
    /// Whether the bound still allows m <= n.
    pub feasible: bool,
}

/// m >= k + l + max{|U| : U admissible, |N(U)| <= k + l - 1}.
pub fn graph_lower_bound_m(g: &Graph, k: usize, l: usize) -> Result<GraphMBound> {
    let budget = (k + l).saturating_sub(1);
    let u = g.best_admissible(|m| (g.neighborhood_mask(m).count_ones() as usize) <= budget)?;
    let value = k + l + u.len();
    Ok(GraphMBound {
        value,
        feasible: value <= g.n,
        witness: u,
    })
}

/// k <= n - max|U| - l over admissible U.
pub fn graph_secrecy_bound(g: &Graph, l: usize) -> Result<i64> {
    let u = max_admissible_set(g)?;
    Ok(g.n as i64 - u.len() as i64 - l as i64)
}

/// Maximum matching by memoized search over the set of free vertices: the
/// lowest free vertex is matched to its smallest available neighbor first,
/// or left unmatched.
pub fn max_matching(g: &Graph) -> Result<Vec<(usize, usize)>> {
    if g.directed {
        return Err(Error::Parameter("matching needs an undirected graph".into()));
    }
    g.check_size(GRAPH_MAX_N)?;
    fn solve(g: &Graph, free: u64, memo: &mut HashMap<u64, usize>) -> usize {
        if free == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&free) {
            return v;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        let mut best = solve(g, rest, memo);
        for u in members(g.neighbor_mask(v) & rest) {
            best = best.max(1 + solve(g, rest & !(1 << u), memo));
        }
        memo.insert(free, best);
        best
    }
    let mut memo = HashMap::new();
    let mut free = (1u64 << g.n) - 1;
    let mut out = Vec::new();
    let mut target = solve(g, free, &mut memo);
    while target > 0 {
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        let pick = members(g.neighbor_mask(v) & rest)
            .into_iter()
            .find(|&u| 1 + solve(g, rest & !(1 << u), &mut memo) == target);
        match pick {
            Some(u) => {
                out.push((v, u));
                free = rest & !(1 << u);
                target -= 1;
            }
            None => free = rest,
        }
    }
    Ok(out)
}

fn distinct_points(field: &Field, count: usize) -> Result<Vec<Elem>> {
    if field.order() < count as u64 {
        return Err(Error::Parameter(format!(
            "field of order {} has fewer than {count} points",
            field.order()
        )));
    }
    Ok((0..count as u64).map(Elem).collect())
}

fn finish(mut scheme: SecretSharingScheme) -> Result<SecretSharingScheme> {
    scheme.params.m = scheme
        .recovery_threshold()
        .ok_or_else(|| Error::Construction("secret not recoverable from all nodes".into()))?;
    scheme.validate()?;
    Ok(scheme)
}

/// Matching scheme: x = V (randomness || secret) with V a square
/// Vandermonde matrix, symbol j stored on both ends of matching edge j.
/// Unmatched nodes store the constant 0.
pub fn build_matching_scheme(g: &Graph, l: usize, field: &Field) -> Result<SecretSharingScheme> {
    let matching = max_matching(g)?;
    let mu = matching.len();
    if mu == 0 || l >= mu {
        return Err(Error::Parameter(format!(
            "matching of size {mu} leaves no capacity at l = {l}"
        )));
    }
    let v = vandermonde(field, &distinct_points(field, mu)?, mu);
    let mut maps = vec![Matrix::zeros(1, mu); g.n];
    let mut recovery = vec![Vec::new(); g.n];
    for (j, &(a, b)) in matching.iter().enumerate() {
        maps[a] = v.select_rows(&[j]);
        maps[b] = v.select_rows(&[j]);
        recovery[a] = vec![b];
        recovery[b] = vec![a];
    }
    finish(SecretSharingScheme {
        tag: SchemeTag::GraphMatching,
        params: SchemeParams {
            n: g.n,
            k: mu - l,
            l,
            m: g.n,
            r: 1,
        },
        field: field.clone(),
        secret_len: mu - l,
        randomness_len: l,
        maps,
        precode: Precode::Identity,
        recovery,
        groups: Vec::new(),
    })
}

/// All simple directed cycles, each listed from its smallest vertex, in
/// lexicographic order.
pub fn enumerate_cycles(g: &Graph) -> Result<Vec<Vec<usize>>> {
    if !g.directed {
        return Err(Error::Parameter("cycle packing needs a directed graph".into()));
    }
    g.check_size(CYCLE_MAX_N)?;
    fn extend(g: &Graph, start: usize, path: &mut Vec<usize>, used: u64, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("nonempty");
        for v in members(g.neighbor_mask(last)) {
            if v == start {
                out.push(path.clone());
            } else if v > start && used >> v & 1 == 0 {
                path.push(v);
                extend(g, start, path, used | 1 << v, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..g.n {
        extend(g, s, &mut vec![s], 1 << s, &mut out);
    }
    out.sort();
    Ok(out)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Cycle weights n(C)/p with common denominator p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclePacking {
    pub cycles: Vec<Vec<usize>>,
    pub weights: Vec<Ratio<i64>>,
    pub p: i64,
    pub n_of_c: Vec<i64>,
}

impl CyclePacking {
    pub fn from_weights(cycles: Vec<Vec<usize>>, weights: Vec<Ratio<i64>>) -> Result<Self> {
        if cycles.len() != weights.len() {
            return Err(Error::Dimension("one weight per cycle required".into()));
        }
        let p = weights.iter().fold(1i64, |acc, w| acc / gcd(acc, *w.denom()) * w.denom());
        let n_of_c = weights
            .iter()
            .map(|w| (w * p).to_integer())
            .collect();
        Ok(CyclePacking {
            cycles,
            weights,
            p,
            n_of_c,
        })
    }

    /// K = sum of weights.
    pub fn value(&self) -> Ratio<i64> {
        self.weights.iter().fold(Ratio::zero(), |acc, w| acc + w)
    }

    /// Total symbols p*K.
    pub fn symbols(&self) -> usize {
        self.n_of_c.iter().sum::<i64>() as usize
    }

    /// Cycles exist in `g` and no vertex carries weight above 1.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut load = vec![Ratio::<i64>::zero(); g.n];
        for (c, w) in self.cycles.iter().zip(&self.weights) {
            if c.is_empty() || *w < Ratio::zero() {
                return Err(Error::Parameter("empty cycle or negative weight".into()));
            }
            let mut seen = 0u64;
            for (idx, &v) in c.iter().enumerate() {
                let next = c[(idx + 1) % c.len()];
                if v >= g.n || seen >> v & 1 == 1 || !g.has_edge(v, next) {
                    return Err(Error::Parameter(format!("{c:?} is not a simple cycle of the graph")));
                }
                seen |= 1 << v;
                load[v] += w;
            }
        }
        if load.iter().any(|l| *l > Ratio::from_integer(1)) {
            return Err(Error::Parameter("vertex load exceeds 1".into()));
        }
        Ok(())
    }
}

/// Maximum family of vertex-disjoint cycles, by exhaustive search over the
/// cycle list (earlier cycles preferred on ties).
pub fn max_disjoint_cycles(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let cycles = enumerate_cycles(g)?;
    let masks: Vec<u64> = cycles
        .iter()
        .map(|c| c.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    fn search(masks: &[u64], from: usize, used: u64, chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        for i in from..masks.len() {
            if masks[i] & used == 0 {
                chosen.push(i);
                search(masks, i + 1, used | masks[i], chosen, best);
                chosen.pop();
            }
        }
    }
    let mut best = Vec::new();
    search(&masks, 0, 0, &mut Vec::new(), &mut best);
    Ok(best.into_iter().map(|i| cycles[i].clone()).collect())
}

pub fn integral_packing(g: &Graph) -> Result<CyclePacking> {
    let cycles = max_disjoint_cycles(g)?;
    let weights = vec![Ratio::from_integer(1); cycles.len()];
    CyclePacking::from_weights(cycles, weights)
}

/// Exact LP optimum of max sum Pi(C) subject to per-vertex load <= 1;
/// cycles of zero weight are dropped.
pub fn fractional_cycle_packing(g: &Graph) -> Result<CyclePacking> {
    let cycles = enumerate_cycles(g)?;
    if cycles.is_empty() {
        return CyclePacking::from_weights(Vec::new(), Vec::new());
    }
    let c: Vec<lp::Q> = cycles.iter().map(|_| lp::q(1)).collect();
    let a: Vec<Vec<lp::Q>> = (0..g.n)
        .map(|v| {
            cycles
                .iter()
                .map(|cy| lp::q(cy.contains(&v) as i64))
                .collect()
        })
        .collect();
    let b: Vec<lp::Q> = (0..g.n).map(|_| lp::q(1)).collect();
    let (_, x) = lp::maximize(&c, &a, &b)?;
    let mut kept = Vec::new();
    let mut weights = Vec::new();
    for (cy, w) in cycles.into_iter().zip(x) {
        if !w.is_zero() {
            let num = w.numer().to_i64().ok_or_else(|| Error::Parameter("weight overflow".into()))?;
            let den = w.denom().to_i64().ok_or_else(|| Error::Parameter("weight overflow".into()))?;
            kept.push(cy);
            weights.push(Ratio::new(num, den));
        }
    }
    CyclePacking::from_weights(kept, weights)
}

/// Cycle scheme: x = V (randomness || secret) over p*K symbols with p*l of
/// them random; cycle C owns n(C) consecutive symbols and every vertex of C
/// stores them in its p slots. A vertex is repaired from its successor on
/// each incident cycle.
pub fn build_cycle_scheme(
    g: &Graph,
    packing: &CyclePacking,
    l: usize,
    field: &Field,
) -> Result<SecretSharingScheme> {
    if !g.directed {
        return Err(Error::Parameter("cycle scheme needs a directed graph".into()));
    }
    packing.validate(g)?;
    let p = packing.p as usize;
    let total = packing.symbols();
    if total <= p * l {
        return Err(Error::Parameter(format!(
            "pK = {total} leaves no capacity at pl = {}",
            p * l
        )));
    }
    let v = vandermonde(field, &distinct_points(field, total)?, total);
    let mut order: Vec<usize> = (0..packing.cycles.len()).collect();
    order.sort_by_key(|&i| (packing.cycles[i].iter().min().copied(), i));
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); g.n];
    let mut recovery: Vec<Vec<usize>> = vec![Vec::new(); g.n];
    let mut offset = 0usize;
    for &ci in &order {
        let cycle = &packing.cycles[ci];
        let count = packing.n_of_c[ci] as usize;
        if count == 0 {
            continue;
        }
        for (idx, &u) in cycle.iter().enumerate() {
            slots[u].extend(offset..offset + count);
            if slots[u].len() > p {
                return Err(Error::Construction(format!(
                    "vertex {u} needs more than {p} slots"
                )));
            }
            let succ = cycle[(idx + 1) % cycle.len()];
            if !recovery[u].contains(&succ) {
                recovery[u].push(succ);
            }
        }
        offset += count;
    }
    let maps = slots
        .iter()
        .map(|s| {
            let mut m = Matrix::zeros(p, total);
            for (slot, &coord) in s.iter().enumerate() {
                for c in 0..total {
                    m.set(slot, c, v.get(coord, c));
                }
            }
            m
        })
        .collect();
    for r in &mut recovery {
        r.sort_unstable();
    }
    let r = recovery.iter().map(Vec::len).max().unwrap_or(1).clamp(1, g.n - 1);
    finish(SecretSharingScheme {
        tag: SchemeTag::GraphCycle,
        params: SchemeParams {
            n: g.n,
            k: total - p * l,
            l,
            m: g.n,
            r,
        },
        field: field.clone(),
        secret_len: total - p * l,
        randomness_len: p * l,
        maps,
        precode: Precode::Identity,
        recovery,
        groups: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_two_cycles() -> Graph {
        Graph::new(4, true, vec![(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap()
    }

    fn bidirected_triangle() -> Graph {
        Graph::new(3, true, vec![(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn independent_and_acyclic_sets() {
        assert_eq!(max_independent_set(&Graph::undirected_cycle(4)).unwrap(), vec![0, 2]);
        assert_eq!(max_induced_acyclic(&Graph::cycle(4)).unwrap(), vec![0, 1, 2]);
        assert_eq!(max_independent_set(&Graph::complete(5)).unwrap().len(), 1);
        assert!(max_independent_set(&Graph::cycle(4)).is_err());
    }

    #[test]
    fn bounds_examples() {
        let g = two_two_cycles();
        let b = graph_lower_bound_m(&g, 1, 1).unwrap();
        assert_eq!(b.value, 3);
        assert_eq!(b.witness, vec![0]);
        let six = graph_lower_bound_m(&Graph::cycle(6), 2, 0).unwrap();
        assert_eq!(six.value, 7);
        assert!(!six.feasible);
        assert_eq!(graph_secrecy_bound(&Graph::undirected_cycle(4), 0).unwrap(), 2);
        assert_eq!(graph_secrecy_bound(&Graph::cycle(4), 0).unwrap(), 1);
        assert_eq!(graph_secrecy_bound(&Graph::complete(5), 1).unwrap(), 3);
    }

    #[test]
    fn matchings() {
        assert_eq!(max_matching(&Graph::undirected_cycle(4)).unwrap(), vec![(0, 1), (2, 3)]);
        let star = Graph::new(4, false, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(max_matching(&star).unwrap().len(), 1);
        let path = Graph::new(5, false, vec![(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(max_matching(&path).unwrap().len(), 2);
    }

    #[test]
    fn matching_scheme_on_c4() {
        let f = Field::prime(5).unwrap();
        let s = build_matching_scheme(&Graph::undirected_cycle(4), 0, &f).unwrap();
        assert_eq!(s.params.k, 2);
        let s1 = build_matching_scheme(&Graph::undirected_cycle(4), 1, &f).unwrap();
        assert_eq!(s1.params.k, 1);
        let empty = Graph::new(3, false, vec![]).unwrap();
        assert!(build_matching_scheme(&empty, 0, &f).is_err());
    }

    #[test]
    fn cycles_and_packings() {
        let g = two_two_cycles();
        assert_eq!(enumerate_cycles(&g).unwrap(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(integral_packing(&g).unwrap().value(), Ratio::from_integer(2));
        let frac = fractional_cycle_packing(&g).unwrap();
        assert_eq!(frac.value(), Ratio::from_integer(2));
        assert_eq!(frac.p, 1);
        assert_eq!(integral_packing(&Graph::cycle(4)).unwrap().value(), Ratio::from_integer(1));

        let t = bidirected_triangle();
        assert_eq!(enumerate_cycles(&t).unwrap().len(), 5);
        assert_eq!(integral_packing(&t).unwrap().value(), Ratio::from_integer(1));
        let frac = fractional_cycle_packing(&t).unwrap();
        assert_eq!(frac.value(), Ratio::new(3, 2));
        assert_eq!(frac.p, 2);
    }

    #[test]
    fn cycle_scheme_slots() {
        let f = Field::prime(5).unwrap();
        let t = bidirected_triangle();
        let frac = fractional_cycle_packing(&t).unwrap();
        let s = build_cycle_scheme(&t, &frac, 0, &f).unwrap();
        assert_eq!(s.secret_len, 3);
        assert!(s.maps.iter().all(|m| m.rows() == 2));
        let bad = CyclePacking::from_weights(
            vec![vec![0, 1], vec![1, 2]],
            vec![Ratio::from_integer(1), Ratio::from_integer(1)],
        )
        .unwrap();
        assert!(build_cycle_scheme(&t, &bad, 0, &f).is_err());
    }
}
