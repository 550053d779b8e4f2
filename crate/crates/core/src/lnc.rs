//! Information flow graph for locally repairable storage, exact max-flow
//! verification and random linear network code sampling with repair and
//! eavesdropper rank constraints.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{Elem, Field, FieldSpec, Matrix};
use crate::secret::{Precode, SchemeParams, SchemeTag, SecretSharingScheme};
use crate::subsets::{binomial, combinations};

pub const MAX_COLLECTORS: u128 = 1 << 16;
pub const SECURITY_MAX_L: usize = 4;
pub const SECURITY_MAX_N: usize = 12;
pub const DEFAULT_RETRIES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "kebab-case")]
pub enum Node {
    Source,
    F(usize),
    Gamma(usize),
    YIn(usize),
    YOut(usize),
    Dc(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowEdge {
    pub from: usize,
    pub to: usize,
    pub cap: u64,
    /// Source symbol carried by a unit edge out of the source.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symbol: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowNetwork {
    pub n: usize,
    pub k0: usize,
    pub m: usize,
    pub r: usize,
    pub nodes: Vec<Node>,
    pub edges: Vec<FlowEdge>,
    /// Storage nodes attached to each data collector.
    pub collectors: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn groups(&self) -> Vec<Vec<usize>> {
        (0..self.n / (self.r + 1))
            .map(|g| (g * (self.r + 1)..(g + 1) * (self.r + 1)).collect())
            .collect()
    }

    pub fn node_index(&self, node: Node) -> Option<usize> {
        self.nodes.iter().position(|&x| x == node)
    }

    fn push_node(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn push_edge(&mut self, from: usize, to: usize, cap: u64, symbol: Option<usize>) {
        self.edges.push(FlowEdge {
            from,
            to,
            cap,
            symbol,
        });
    }

    /// Sets the capacity of every edge between two nodes.
    pub fn set_capacity(&mut self, from: Node, to: Node, cap: u64) -> Result<()> {
        let (a, b) = match (self.node_index(from), self.node_index(to)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Parameter(format!("unknown node in {from:?} -> {to:?}"))),
        };
        let mut hit = false;
        for e in self.edges.iter_mut().filter(|e| e.from == a && e.to == b) {
            e.cap = cap;
            hit = true;
        }
        if !hit {
            return Err(Error::Parameter(format!("no edge {from:?} -> {to:?}")));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        check_params(self.n, self.k0, self.m, self.r)?;
        if self.edges.iter().any(|e| e.from >= self.nodes.len() || e.to >= self.nodes.len()) {
            return Err(Error::Parameter("edge endpoint out of range".into()));
        }
        Ok(())
    }
}

fn check_params(n: usize, k0: usize, m: usize, r: usize) -> Result<()> {
    if r == 0 || k0 == 0 || k0 % r != 0 {
        return Err(Error::Parameter(format!("r = {r} must divide k0 = {k0}")));
    }
    if n % (r + 1) != 0 {
        return Err(Error::Parameter(format!("r+1 = {} must divide n = {n}", r + 1)));
    }
    if m != k0 + k0 / r - 1 {
        return Err(Error::Parameter(format!(
            "m = {m} must equal k0 + k0/r - 1 = {}",
            k0 + k0 / r - 1
        )));
    }
    if m > n {
        return Err(Error::Parameter(format!("m = {m} exceeds n = {n}")));
    }
    Ok(())
}

/// Source symbol j feeds F_{j mod r}.
fn symbol_owner(j: usize, r: usize) -> usize {
    j % r
}

pub fn build_flow_graph(n: usize, k0: usize, m: usize, r: usize) -> Result<FlowNetwork> {
    check_params(n, k0, m, r)?;
    let t = binomial(n as u64, m as u64);
    if t > MAX_COLLECTORS {
        return Err(Error::Cutoff(format!("{t} data collectors exceed {MAX_COLLECTORS}")));
    }
    let mut net = FlowNetwork {
        n,
        k0,
        m,
        r,
        nodes: Vec::new(),
        edges: Vec::new(),
        collectors: combinations(n, m).collect(),
    };
    let x = net.push_node(Node::Source);
    let f: Vec<usize> = (0..r).map(|v| net.push_node(Node::F(v))).collect();
    let ngroups = n / (r + 1);
    let gamma: Vec<usize> = (0..ngroups).map(|g| net.push_node(Node::Gamma(g))).collect();
    let yin: Vec<usize> = (0..n).map(|i| net.push_node(Node::YIn(i))).collect();
    let yout: Vec<usize> = (0..n).map(|i| net.push_node(Node::YOut(i))).collect();
    for j in 0..k0 {
        net.push_edge(x, f[symbol_owner(j, r)], 1, Some(j));
    }
    for &fv in &f {
        for &gr in &gamma {
            net.push_edge(fv, gr, 1, None);
        }
    }
    for i in 0..n {
        net.push_edge(gamma[i / (r + 1)], yin[i], r as u64, None);
        net.push_edge(yin[i], yout[i], 1, None);
    }
    for mu in 0..net.collectors.len() {
        let dc = net.push_node(Node::Dc(mu));
        for i in net.collectors[mu].clone() {
            net.push_edge(yout[i], dc, 1, None);
        }
    }
    Ok(net)
}

/// Exact max-flow value by shortest augmenting paths.
pub fn max_flow(nodes: usize, edges: &[FlowEdge], source: usize, sink: usize) -> u64 {
    // Residual arcs stored in pairs: 2e forward, 2e+1 backward.
    let mut to = Vec::with_capacity(edges.len() * 2);
    let mut cap = Vec::with_capacity(edges.len() * 2);
    let mut adj = vec![Vec::new(); nodes];
    for e in edges {
        adj[e.from].push(to.len());
        to.push(e.to);
        cap.push(e.cap);
        adj[e.to].push(to.len());
        to.push(e.from);
        cap.push(0);
    }
    let mut flow = 0;
    loop {
        let mut prev: Vec<Option<usize>> = vec![None; nodes];
        let mut seen = vec![false; nodes];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &a in &adj[u] {
                if cap[a] > 0 && !seen[to[a]] {
                    seen[to[a]] = true;
                    prev[to[a]] = Some(a);
                    queue.push_back(to[a]);
                }
            }
        }
        if !seen[sink] || source == sink {
            return flow;
        }
        let mut bottleneck = u64::MAX;
        let mut v = sink;
        while let Some(a) = prev[v] {
            bottleneck = bottleneck.min(cap[a]);
            v = to[a ^ 1];
        }
        let mut v = sink;
        while let Some(a) = prev[v] {
            cap[a] -= bottleneck;
            cap[a ^ 1] += bottleneck;
            v = to[a ^ 1];
        }
        flow += bottleneck;
    }
}

pub fn min_cut(net: &FlowNetwork, source: Node, sink: Node) -> Result<u64> {
    let s = net
        .node_index(source)
        .ok_or_else(|| Error::Parameter(format!("unknown node {source:?}")))?;
    let t = net
        .node_index(sink)
        .ok_or_else(|| Error::Parameter(format!("unknown node {sink:?}")))?;
    Ok(max_flow(net.nodes.len(), &net.edges, s, t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MulticastReport {
    pub capacity: u64,
    /// Min-cut per data collector.
    pub cuts: Vec<u64>,
    pub pass: bool,
}

/// Min over all data collectors of the source-collector min-cut, compared
/// against k0.
pub fn verify_multicast_capacity(net: &FlowNetwork) -> Result<MulticastReport> {
    let cuts = (0..net.collectors.len())
        .map(|mu| min_cut(net, Node::Source, Node::Dc(mu)))
        .collect::<Result<Vec<_>>>()?;
    let capacity = cuts.iter().copied().min().unwrap_or(0);
    Ok(MulticastReport {
        capacity,
        pass: capacity == net.k0 as u64,
        cuts,
    })
}

/// Observed sets of size l with at most r nodes from any repair group.
pub fn eavesdropper_sets(n: usize, r: usize, l: usize) -> Vec<Vec<usize>> {
    combinations(n, l)
        .filter(|tau| {
            let mut count = vec![0usize; n / (r + 1) + 1];
            tau.iter().all(|&i| {
                count[i / (r + 1)] += 1;
                count[i / (r + 1)] <= r
            })
        })
        .collect()
}

/// Min-cut from the first l source symbols to a sink fed by the observed
/// storage nodes.
pub fn eavesdropper_min_cut(net: &FlowNetwork, tau: &[usize], l: usize) -> Result<u64> {
    if tau.iter().any(|&i| i >= net.n) {
        return Err(Error::Parameter(format!("observed set {tau:?} outside [{}]", net.n)));
    }
    let mut edges: Vec<FlowEdge> = net
        .edges
        .iter()
        .filter(|e| e.symbol.is_none_or(|j| j < l))
        .cloned()
        .collect();
    let sink = net.nodes.len();
    for &i in tau {
        let y = net.node_index(Node::YOut(i)).expect("storage node");
        edges.push(FlowEdge {
            from: y,
            to: sink,
            cap: 1,
            symbol: None,
        });
    }
    let source = net.node_index(Node::Source).expect("source");
    Ok(max_flow(net.nodes.len() + 1, &edges, source, sink))
}

/// Sampled edge coefficients and the resulting transfer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LncAssignment {
    pub field: FieldSpec,
    /// Per repair group, the r x k0 map from source symbols to the group's
    /// r incoming symbols.
    pub d: Vec<Vec<Vec<u64>>>,
    /// Per storage node, the r coefficients on its group's incoming symbols.
    pub node_coeffs: Vec<Vec<u64>>,
    /// n x k0 global transfer matrix, columns ordered s_1..s_k0.
    pub a: Vec<Vec<u64>>,
    pub l: usize,
    /// Failed samples before acceptance.
    pub retries: usize,
}

impl LncAssignment {
    pub fn transfer(&self) -> Result<Matrix> {
        Matrix::from_u64(&self.a)
    }

    /// N_i: coefficient rows of the other members of node i's group.
    pub fn local_matrix(&self, i: usize, r: usize) -> Result<Matrix> {
        let g = i / (r + 1);
        let rows: Vec<Vec<u64>> = (g * (r + 1)..(g + 1) * (r + 1))
            .filter(|&j| j != i)
            .map(|j| self.node_coeffs[j].clone())
            .collect();
        Matrix::from_u64(&rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintCheck {
    pub decodable: bool,
    pub repairable: bool,
    pub secure: bool,
    pub failure: Option<String>,
}

impl ConstraintCheck {
    pub fn pass(&self) -> bool {
        self.decodable && self.repairable && self.secure
    }
}

/// Checks (i) rank k0 on every collector, (ii) full-rank local matrices,
/// (iii) full-rank randomness columns on every admissible observed set.
pub fn check_constraints(
    net: &FlowNetwork,
    field: &Field,
    assignment: &LncAssignment,
) -> Result<ConstraintCheck> {
    let a = assignment.transfer()?;
    let l = assignment.l;
    if l > 0 && (l > SECURITY_MAX_L || net.n > SECURITY_MAX_N) {
        return Err(Error::Cutoff(format!(
            "security check limited to l <= {SECURITY_MAX_L}, n <= {SECURITY_MAX_N}"
        )));
    }
    let mut out = ConstraintCheck {
        decodable: true,
        repairable: true,
        secure: true,
        failure: None,
    };
    if let Some(c) = net
        .collectors
        .iter()
        .find(|c| a.select_rows(c).rank(field) < net.k0)
    {
        out.decodable = false;
        out.failure = Some(format!("collector {c:?} below rank {}", net.k0));
        return Ok(out);
    }
    for i in 0..net.n {
        if assignment.local_matrix(i, net.r)?.rank(field) < net.r {
            out.repairable = false;
            out.failure = Some(format!("local matrix of node {i} is singular"));
            return Ok(out);
        }
    }
    if l > 0 {
        let a1 = a.select_cols(0..l);
        if let Some(tau) = eavesdropper_sets(net.n, net.r, l)
            .into_iter()
            .find(|tau| a1.select_rows(tau).rank(field) < l)
        {
            out.secure = false;
            out.failure = Some(format!("observed set {tau:?} leaks"));
        }
    }
    Ok(out)
}

fn sample_assignment<R: Rng>(
    net: &FlowNetwork,
    field: &Field,
    l: usize,
    rng: &mut R,
) -> LncAssignment {
    let (n, k0, r) = (net.n, net.k0, net.r);
    let q = field.order();
    let ngroups = n / (r + 1);
    let mut d = Vec::with_capacity(ngroups);
    for _ in 0..ngroups {
        let mut rows = vec![vec![0u64; k0]; r];
        for (nu, row) in rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                if symbol_owner(j, r) == nu {
                    *x = rng.gen_range(0..q);
                }
            }
        }
        d.push(rows);
    }
    let node_coeffs: Vec<Vec<u64>> = (0..n)
        .map(|_| (0..r).map(|_| rng.gen_range(0..q)).collect())
        .collect();
    let a = (0..n)
        .map(|i| {
            let dg = &d[i / (r + 1)];
            (0..k0)
                .map(|j| {
                    (0..r)
                        .fold(Elem::ZERO, |acc, nu| {
                            field.add(
                                acc,
                                field.mul(Elem(node_coeffs[i][nu]), Elem(dg[nu][j])),
                            )
                        })
                        .value()
                })
                .collect()
        })
        .collect();
    LncAssignment {
        field: field.spec().clone(),
        d,
        node_coeffs,
        a,
        l,
        retries: 0,
    }
}

/// Turns an accepted assignment into an (n, k0-l, l, m, r) scheme with the
/// first l source symbols as randomness.
pub fn scheme_from_assignment(
    net: &FlowNetwork,
    field: &Field,
    assignment: &LncAssignment,
) -> Result<SecretSharingScheme> {
    let a = assignment.transfer()?;
    let l = assignment.l;
    let groups = net.groups();
    let recovery = (0..net.n)
        .map(|i| groups[i / (net.r + 1)].iter().copied().filter(|&j| j != i).collect())
        .collect();
    let scheme = SecretSharingScheme {
        tag: SchemeTag::Lnc,
        params: SchemeParams {
            n: net.n,
            k: net.k0 - l,
            l,
            m: net.m,
            r: net.r,
        },
        field: field.clone(),
        secret_len: net.k0 - l,
        randomness_len: l,
        maps: (0..net.n).map(|i| a.select_rows(&[i])).collect(),
        precode: Precode::Identity,
        recovery,
        groups,
    };
    scheme.validate()?;
    Ok(scheme)
}

/// Samples every coefficient uniformly until all constraints hold.
pub fn sample_lnc(
    net: &FlowNetwork,
    field: &Field,
    l: usize,
    seed: u64,
    max_retries: usize,
) -> Result<(LncAssignment, SecretSharingScheme)> {
    net.validate()?;
    if l >= net.k0 {
        return Err(Error::Parameter(format!("l = {l} must be below k0 = {}", net.k0)));
    }
    if !verify_multicast_capacity(net)?.pass {
        return Err(Error::Parameter("network fails the multicast capacity check".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..max_retries {
        let mut assignment = sample_assignment(net, field, l, &mut rng);
        if check_constraints(net, field, &assignment)?.pass() {
            assignment.retries = attempt;
            let scheme = scheme_from_assignment(net, field, &assignment)?;
            return Ok((assignment, scheme));
        }
    }
    Err(Error::SamplingFailed(max_retries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn network_shape() {
        let net = build_flow_graph(8, 6, 7, 3).unwrap();
        assert_eq!(net.collectors.len(), 8);
        assert_eq!(net.groups().len(), 2);
        assert!(build_flow_graph(8, 6, 6, 3).is_err());
        assert!(build_flow_graph(8, 5, 7, 3).is_err());
        assert!(build_flow_graph(4, 2, 3, 1).is_ok());
    }

    #[test]
    fn max_flow_on_parallel_paths() {
        let e = |from, to, cap| FlowEdge {
            from,
            to,
            cap,
            symbol: None,
        };
        let edges = vec![e(0, 1, 3), e(0, 2, 2), e(1, 3, 2), e(2, 3, 3), e(1, 2, 1)];
        assert_eq!(max_flow(4, &edges, 0, 3), 5);
        assert_eq!(max_flow(4, &edges, 3, 0), 0);
    }

    #[test]
    fn multicast_capacity() {
        for (n, k0, m, r) in [(8, 6, 7, 3), (4, 2, 3, 1), (6, 4, 5, 2)] {
            let net = build_flow_graph(n, k0, m, r).unwrap();
            let rep = verify_multicast_capacity(&net).unwrap();
            assert!(rep.pass, "{n},{k0},{m},{r}");
            assert!(rep.cuts.iter().all(|&c| c == k0 as u64));
        }
        let net = build_flow_graph(8, 6, 7, 3).unwrap();
        assert_eq!(min_cut(&net, Node::Source, Node::YOut(0)).unwrap(), 1);
    }

    #[test]
    fn perturbations_drop_capacity() {
        let mut small = build_flow_graph(4, 2, 3, 1).unwrap();
        small.set_capacity(Node::Gamma(0), Node::YIn(0), 0).unwrap();
        assert!(!verify_multicast_capacity(&small).unwrap().pass);

        let mut big = build_flow_graph(8, 6, 7, 3).unwrap();
        big.set_capacity(Node::Gamma(0), Node::YIn(0), 2).unwrap();
        assert!(verify_multicast_capacity(&big).unwrap().pass);
        big.set_capacity(Node::F(0), Node::Gamma(0), 0).unwrap();
        assert!(!verify_multicast_capacity(&big).unwrap().pass);
    }

    #[test]
    fn eavesdropper_cuts() {
        let net = build_flow_graph(8, 6, 7, 3).unwrap();
        let sets = eavesdropper_sets(8, 3, 2);
        assert_eq!(sets.len(), 28);
        for tau in &sets {
            assert_eq!(eavesdropper_min_cut(&net, tau, 2).unwrap(), 2);
        }
        assert_eq!(eavesdropper_sets(8, 3, 4).len(), 70 - 2);
    }

    #[test]
    fn sampling_small_instance() {
        let f = Field::prime(17).unwrap();
        let net = build_flow_graph(4, 2, 3, 1).unwrap();
        let (asg, scheme) = sample_lnc(&net, &f, 1, 3, DEFAULT_RETRIES).unwrap();
        assert_eq!(scheme.params, SchemeParams { n: 4, k: 1, l: 1, m: 3, r: 1 });
        assert!(check_constraints(&net, &f, &asg).unwrap().pass());
        assert!(sample_lnc(&net, &f, 2, 3, 4).is_err());
    }

    #[test]
    fn binary_field_fails() {
        let f = Field::prime(2).unwrap();
        let net = build_flow_graph(8, 6, 7, 3).unwrap();
        assert_eq!(
            sample_lnc(&net, &f, 1, 7, DEFAULT_RETRIES).unwrap_err(),
            Error::SamplingFailed(DEFAULT_RETRIES)
        );
    }
}
