//! Networks of entangled links.
//!
//! A [`Network`] is an undirected multigraph over dense integer node ids.
//! Each edge entry carries a multiplicity (parallel identical copies) and a
//! [`Payload`] describing the entangled state shared across that bond.
//! Lattice constructors attach integer node positions so that percolation
//! routines can detect wrapping clusters on tori; positions are in arbitrary
//! per-topology integer units and carry no physics.

mod lattice;
mod random;
mod transform;

pub use lattice::{
    dual, gen_cubic, gen_honeycomb, gen_square, gen_square_octagon, gen_triangular, Boundary,
    DualLattice,
};
pub use random::{gen_ba, gen_er, gen_ws};
pub use transform::{
    ghz_site_lattice, honeycomb_to_triangular, honeycomb_to_triangular_bx,
    honeycomb_to_triangular_sampled, q_swap, q_swap_bx, q_swap_protocol, SwapStrategy,
};

use crate::state::{BellOutcome, BitPhaseLink, PureLink, WernerLink};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("node {node} out of range for network with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self loop at node {node} is not allowed")]
    SelfLoop { node: usize },
    #[error("edge multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("{op} does not support this network: {reason}")]
    Unsupported { op: &'static str, reason: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("bad payload parameters: {0}")]
    BadPayload(#[from] crate::state::StateError),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// State attached to one bond of the network.
#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Pure(PureLink),
    Werner(WernerLink),
    BitPhase(BitPhaseLink),
    /// A perfect Bell pair; shorthand for `Pure(PureLink::BELL)`.
    Bell,
    /// A bond that exists combinatorially but carries no entangled state.
    Absent,
    /// Bookkeeping for a Bell-basis swap whose outcome has not been sampled:
    /// the four (probability, conditional link) branches of the swap.
    SwapOutcomes([BellOutcome; 4]),
}

impl Payload {
    /// The pure link carried by this payload, if it is pure-state-like.
    pub fn as_pure(&self) -> Option<PureLink> {
        match self {
            Payload::Pure(l) => Some(*l),
            Payload::Bell => Some(PureLink::BELL),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Pure(_) => "pure",
            Payload::Werner(_) => "werner",
            Payload::BitPhase(_) => "bitphase",
            Payload::Bell => "bell",
            Payload::Absent => "absent",
            Payload::SwapOutcomes(_) => "swapdist",
        }
    }

    fn params(&self) -> Vec<f64> {
        match self {
            Payload::Pure(l) => vec![l.phi1()],
            Payload::Werner(w) => vec![w.x()],
            Payload::BitPhase(b) => vec![b.eps_b(), b.eps_p()],
            Payload::Bell | Payload::Absent => vec![],
            Payload::SwapOutcomes(outs) => outs
                .iter()
                .flat_map(|o| [o.probability, o.link.phi1()])
                .collect(),
        }
    }

    fn from_parts(kind: &str, params: &[f64]) -> Result<Payload, String> {
        let want = |n: usize| -> Result<(), String> {
            if params.len() == n {
                Ok(())
            } else {
                Err(format!(
                    "payload kind {kind} expects {n} parameters, got {}",
                    params.len()
                ))
            }
        };
        match kind {
            "pure" => {
                want(1)?;
                Ok(Payload::Pure(PureLink::new(params[0]).map_err(|e| e.to_string())?))
            }
            "werner" => {
                want(1)?;
                Ok(Payload::Werner(WernerLink::new(params[0]).map_err(|e| e.to_string())?))
            }
            "bitphase" => {
                want(2)?;
                Ok(Payload::BitPhase(
                    BitPhaseLink::new(params[0], params[1]).map_err(|e| e.to_string())?,
                ))
            }
            "bell" => {
                want(0)?;
                Ok(Payload::Bell)
            }
            "absent" => {
                want(0)?;
                Ok(Payload::Absent)
            }
            "swapdist" => {
                want(8)?;
                let mut outs = [BellOutcome {
                    probability: 0.0,
                    link: PureLink::SEPARABLE,
                }; 4];
                for (m, out) in outs.iter_mut().enumerate() {
                    let p = params[2 * m];
                    if !(0.0..=1.0).contains(&p) {
                        return Err(format!("swapdist probability {p} out of [0, 1]"));
                    }
                    out.probability = p;
                    out.link = PureLink::new(params[2 * m + 1]).map_err(|e| e.to_string())?;
                }
                let total: f64 = outs.iter().map(|o| o.probability).sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(format!("swapdist probabilities sum to {total}, expected 1"));
                }
                Ok(Payload::SwapOutcomes(outs))
            }
            other => Err(format!("unknown payload kind {other}")),
        }
    }
}

/// One undirected bond. Parallel identical copies are expressed through
/// `multiplicity`; genuinely distinct parallel bonds are separate entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub multiplicity: u32,
    pub payload: Payload,
}

/// Family tag recording how a network was constructed. Transformations that
/// leave no recognizable family produce `General`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    SquareOpen { l: u32 },
    SquareTorus { l: u32 },
    TriangularTorus { l: u32 },
    HoneycombTorus { l: u32 },
    CubicTorus { l: u32 },
    SquareOctagonTorus { l: u32 },
    /// Site lattice of GHZ states grown on the square-octagon source.
    GhzSite { l: u32 },
    ErdosRenyi { n: u32 },
    WattsStrogatz { n: u32, k: u32 },
    BarabasiAlbert { n: u32, m: u32 },
    General,
}

impl Topology {
    pub fn as_str(&self) -> String {
        match self {
            Topology::SquareOpen { l } => format!("square-open:{l}"),
            Topology::SquareTorus { l } => format!("square-torus:{l}"),
            Topology::TriangularTorus { l } => format!("triangular:{l}"),
            Topology::HoneycombTorus { l } => format!("honeycomb:{l}"),
            Topology::CubicTorus { l } => format!("cubic:{l}"),
            Topology::SquareOctagonTorus { l } => format!("square-octagon:{l}"),
            Topology::GhzSite { l } => format!("ghz-site:{l}"),
            Topology::ErdosRenyi { n } => format!("er:{n}"),
            Topology::WattsStrogatz { n, k } => format!("ws:{n}:{k}"),
            Topology::BarabasiAlbert { n, m } => format!("ba:{n}:{m}"),
            Topology::General => "general".to_string(),
        }
    }

    pub fn parse(s: &str) -> Result<Topology, String> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or("");
        let mut num = || -> Result<u32, String> {
            parts
                .next()
                .ok_or_else(|| format!("topology {s} is missing a size field"))?
                .parse::<u32>()
                .map_err(|e| format!("topology {s}: {e}"))
        };
        let topo = match head {
            "square-open" => Topology::SquareOpen { l: num()? },
            "square-torus" => Topology::SquareTorus { l: num()? },
            "triangular" => Topology::TriangularTorus { l: num()? },
            "honeycomb" => Topology::HoneycombTorus { l: num()? },
            "cubic" => Topology::CubicTorus { l: num()? },
            "square-octagon" => Topology::SquareOctagonTorus { l: num()? },
            "ghz-site" => Topology::GhzSite { l: num()? },
            "er" => Topology::ErdosRenyi { n: num()? },
            "ws" => Topology::WattsStrogatz { n: num()?, k: num()? },
            "ba" => Topology::BarabasiAlbert { n: num()?, m: num()? },
            "general" => Topology::General,
            other => return Err(format!("unknown topology {other}")),
        };
        if parts.next().is_some() {
            return Err(format!("topology {s} has trailing fields"));
        }
        Ok(topo)
    }
}

/// Undirected multigraph of entangled bonds. Treated as immutable once built;
/// transformations return new networks.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    n: usize,
    pub(crate) edges: Vec<Edge>,
    pub(crate) topology: Topology,
    /// Integer node positions in per-topology units, used for winding and
    /// boundary detection. Only lattice constructors set these.
    pub(crate) positions: Option<Vec<[i64; 3]>>,
    /// Spatial period in position units per axis; 0 marks a non-periodic axis.
    pub(crate) period: Option<[i64; 3]>,
    /// Nodes designated as GHZ generators by the constructor, if any.
    pub(crate) generators: Vec<usize>,
}

impl Network {
    pub fn new(n: usize) -> Network {
        Network {
            n,
            edges: Vec::new(),
            topology: Topology::General,
            positions: None,
            period: None,
            generators: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn positions(&self) -> Option<&[[i64; 3]]> {
        self.positions.as_deref()
    }

    pub fn period(&self) -> Option<[i64; 3]> {
        self.period
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Adds one edge entry. Endpoints are stored in ascending order.
    pub fn add_edge(
        &mut self,
        u: usize,
        v: usize,
        multiplicity: u32,
        payload: Payload,
    ) -> Result<(), NetError> {
        for node in [u, v] {
            if node >= self.n {
                return Err(NetError::NodeOutOfRange { node, n: self.n });
            }
        }
        if u == v {
            return Err(NetError::SelfLoop { node: u });
        }
        if multiplicity == 0 {
            return Err(NetError::ZeroMultiplicity);
        }
        self.edges.push(Edge {
            u: u.min(v),
            v: u.max(v),
            multiplicity,
            payload,
        });
        Ok(())
    }

    /// Replaces every edge's multiplicity, e.g. to lay double bonds.
    pub fn with_multiplicity(mut self, multiplicity: u32) -> Network {
        assert!(multiplicity >= 1, "multiplicity must be at least 1");
        for e in &mut self.edges {
            e.multiplicity = multiplicity;
        }
        self
    }

    /// Number of incident edge entries (multiplicity not counted).
    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.u == node || e.v == node)
            .count()
    }

    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut deg = vec![0usize; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        let mut hist = BTreeMap::new();
        for d in deg {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    }

    /// Per-node incidence list of (edge index, other endpoint).
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((i, e.v));
            adj[e.v].push((i, e.u));
        }
        adj
    }

    /// Displacement of edge `e` from u to v in position units, wrapped to the
    /// shortest representative on periodic axes. None if positions are absent.
    pub fn edge_displacement(&self, e: usize) -> Option<[i64; 3]> {
        let pos = self.positions.as_ref()?;
        let edge = &self.edges[e];
        let period = self.period.unwrap_or([0, 0, 0]);
        let mut d = [0i64; 3];
        for k in 0..3 {
            let mut diff = pos[edge.v][k] - pos[edge.u][k];
            let p = period[k];
            if p > 0 {
                diff = diff.rem_euclid(p);
                if diff > p / 2 {
                    diff -= p;
                }
            }
            d[k] = diff;
        }
        Some(d)
    }

    /// Line-oriented text serialization. Exact round-trip.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "entnet v1");
        let _ = writeln!(out, "nodes {}", self.n);
        let _ = writeln!(out, "topology {}", self.topology.as_str());
        if let Some(p) = self.period {
            let _ = writeln!(out, "period {} {} {}", p[0], p[1], p[2]);
        }
        if !self.generators.is_empty() {
            let _ = write!(out, "generators");
            for g in &self.generators {
                let _ = write!(out, " {g}");
            }
            let _ = writeln!(out);
        }
        if let Some(pos) = &self.positions {
            for (i, p) in pos.iter().enumerate() {
                let _ = writeln!(out, "pos {i} {} {} {}", p[0], p[1], p[2]);
            }
        }
        for e in &self.edges {
            let _ = write!(out, "edge {} {} {} {}", e.u, e.v, e.multiplicity, e.payload.kind());
            for p in e.payload.params() {
                let _ = write!(out, " {p}");
            }
            let _ = writeln!(out);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Network, NetError> {
        let err = |line: usize, msg: String| NetError::Parse { line, msg };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| err(1, "empty input".to_string()))?;
        if header.trim() != "entnet v1" {
            return Err(err(1, format!("bad header {header:?}, expected \"entnet v1\"")));
        }
        let mut net: Option<Network> = None;
        let mut positions: Vec<(usize, [i64; 3])> = Vec::new();
        for (idx, raw) in lines {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tok = line.split_whitespace();
            let key = tok.next().unwrap();
            let rest: Vec<&str> = tok.collect();
            let parse_usize = |s: &str| -> Result<usize, NetError> {
                s.parse().map_err(|e| err(lineno, format!("bad integer {s:?}: {e}")))
            };
            let parse_i64 = |s: &str| -> Result<i64, NetError> {
                s.parse().map_err(|e| err(lineno, format!("bad integer {s:?}: {e}")))
            };
            match key {
                "nodes" => {
                    if rest.len() != 1 {
                        return Err(err(lineno, "nodes expects one field".to_string()));
                    }
                    net = Some(Network::new(parse_usize(rest[0])?));
                }
                "topology" => {
                    let net = net
                        .as_mut()
                        .ok_or_else(|| err(lineno, "topology before nodes".to_string()))?;
                    if rest.len() != 1 {
                        return Err(err(lineno, "topology expects one field".to_string()));
                    }
                    net.topology = Topology::parse(rest[0]).map_err(|m| err(lineno, m))?;
                }
                "period" => {
                    let net = net
                        .as_mut()
                        .ok_or_else(|| err(lineno, "period before nodes".to_string()))?;
                    if rest.len() != 3 {
                        return Err(err(lineno, "period expects three fields".to_string()));
                    }
                    net.period =
                        Some([parse_i64(rest[0])?, parse_i64(rest[1])?, parse_i64(rest[2])?]);
                }
                "generators" => {
                    let net = net
                        .as_mut()
                        .ok_or_else(|| err(lineno, "generators before nodes".to_string()))?;
                    net.generators = rest
                        .iter()
                        .map(|s| parse_usize(s))
                        .collect::<Result<_, _>>()?;
                }
                "pos" => {
                    if rest.len() != 4 {
                        return Err(err(lineno, "pos expects four fields".to_string()));
                    }
                    positions.push((
                        parse_usize(rest[0])?,
                        [parse_i64(rest[1])?, parse_i64(rest[2])?, parse_i64(rest[3])?],
                    ));
                }
                "edge" => {
                    let net = net
                        .as_mut()
                        .ok_or_else(|| err(lineno, "edge before nodes".to_string()))?;
                    if rest.len() < 4 {
                        return Err(err(lineno, "edge expects at least four fields".to_string()));
                    }
                    let u = parse_usize(rest[0])?;
                    let v = parse_usize(rest[1])?;
                    let m: u32 = rest[2]
                        .parse()
                        .map_err(|e| err(lineno, format!("bad multiplicity: {e}")))?;
                    let params: Vec<f64> = rest[4..]
                        .iter()
                        .map(|s| {
                            s.parse::<f64>()
                                .map_err(|e| err(lineno, format!("bad parameter {s:?}: {e}")))
                        })
                        .collect::<Result<_, _>>()?;
                    let payload =
                        Payload::from_parts(rest[3], &params).map_err(|m| err(lineno, m))?;
                    net.add_edge(u, v, m, payload).map_err(|e| match e {
                        NetError::Parse { .. } => e,
                        other => err(lineno, other.to_string()),
                    })?;
                }
                other => return Err(err(lineno, format!("unknown directive {other}"))),
            }
        }
        let mut net = net.ok_or_else(|| err(1, "missing nodes line".to_string()))?;
        if !positions.is_empty() {
            let mut pos = vec![[0i64; 3]; net.n];
            let mut seen = vec![false; net.n];
            for (i, p) in positions {
                if i >= net.n {
                    return Err(err(0, format!("pos index {i} out of range")));
                }
                pos[i] = p;
                seen[i] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(err(0, "pos lines must cover every node or none".to_string()));
            }
            net.positions = Some(pos);
        }
        Ok(net)
    }

    /// JSON serialization mirroring the text format. Exact round-trip.
    pub fn to_json(&self) -> String {
        let dto = NetDto {
            nodes: self.n,
            topology: self.topology.as_str(),
            period: self.period,
            generators: self.generators.clone(),
            positions: self.positions.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDto {
                    u: e.u,
                    v: e.v,
                    m: e.multiplicity,
                    kind: e.payload.kind().to_string(),
                    params: e.payload.params(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("network serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Network, NetError> {
        let dto: NetDto = serde_json::from_str(json)?;
        let mut net = Network::new(dto.nodes);
        net.topology = Topology::parse(&dto.topology)
            .map_err(|m| NetError::Parse { line: 0, msg: m })?;
        net.period = dto.period;
        net.generators = dto.generators;
        if let Some(pos) = dto.positions {
            if pos.len() != dto.nodes {
                return Err(NetError::Parse {
                    line: 0,
                    msg: format!("{} positions for {} nodes", pos.len(), dto.nodes),
                });
            }
            net.positions = Some(pos);
        }
        for e in dto.edges {
            let payload = Payload::from_parts(&e.kind, &e.params)
                .map_err(|m| NetError::Parse { line: 0, msg: m })?;
            net.add_edge(e.u, e.v, e.m, payload)?;
        }
        Ok(net)
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct NetDto {
    nodes: usize,
    topology: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    period: Option<[i64; 3]>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    generators: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    positions: Option<Vec<[i64; 3]>>,
    edges: Vec<EdgeDto>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct EdgeDto {
    u: usize,
    v: usize,
    m: u32,
    kind: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    params: Vec<f64>,
}

/// A walk through the network: `nodes[i]` connects to `nodes[i+1]` through
/// `edges[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDescriptor {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
}

impl PathDescriptor {
    pub fn hops(&self) -> usize {
        self.edges.len()
    }

    /// Checks internal consistency against the owning network.
    pub fn is_valid(&self, net: &Network) -> bool {
        if self.nodes.len() != self.edges.len() + 1 || self.nodes.is_empty() {
            return false;
        }
        self.edges.iter().enumerate().all(|(i, &e)| {
            net.edges().get(e).is_some_and(|edge| {
                (edge.u == self.nodes[i] && edge.v == self.nodes[i + 1])
                    || (edge.v == self.nodes[i] && edge.u == self.nodes[i + 1])
            })
        })
    }
}

/// Minimum-weight path from `a` to `b` under a nonnegative edge weight.
/// Ties resolve to the lexicographically smallest node sequence. Edges with
/// non-finite weight are treated as absent. Returns None if disconnected.
pub fn shortest_path<W>(net: &Network, a: usize, b: usize, weight: W) -> Option<PathDescriptor>
where
    W: Fn(&Edge) -> f64,
{
    let n = net.node_count();
    if a >= n || b >= n {
        return None;
    }
    if a == b {
        return Some(PathDescriptor {
            nodes: vec![a],
            edges: vec![],
        });
    }
    let adj = net.adjacency();
    let w = |e: usize| -> f64 {
        let wt = weight(&net.edges()[e]);
        debug_assert!(!wt.is_nan(), "edge weight must not be NaN");
        debug_assert!(wt.is_nan() || wt >= 0.0, "edge weight must be nonnegative");
        wt
    };

    // Distances to b. The walk below needs exact float equality between a
    // stored distance and the sum that produced it, so relaxation keeps sums
    // in the same operation order.
    let mut dist = vec![f64::INFINITY; n];
    dist[b] = 0.0;
    let mut heap = std::collections::BinaryHeap::new();
    heap.push(std::cmp::Reverse(HeapItem(0.0, b)));
    let mut settled = vec![false; n];
    while let Some(std::cmp::Reverse(HeapItem(d, u))) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        for &(e, v) in &adj[u] {
            let wt = w(e);
            if !wt.is_finite() {
                continue;
            }
            let nd = d + wt;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(std::cmp::Reverse(HeapItem(nd, v)));
            }
        }
    }
    if !dist[a].is_finite() {
        return None;
    }

    // Walk forward from a, at each step taking the smallest (node, edge)
    // that stays on a shortest path: weight(cur, w) + dist[w] == dist[cur]
    // holds exactly for the minimizing relaxation. Zero-weight edges can
    // create equal-distance plateaus, so backtrack over visited nodes.
    let mut stack = vec![(a, 0usize)];
    let mut visited = vec![false; n];
    visited[a] = true;
    let mut path_edges: Vec<usize> = Vec::new();
    loop {
        let (cur, tried) = *stack.last()?;
        if cur == b {
            break;
        }
        let mut candidates: Vec<(usize, usize)> = adj[cur]
            .iter()
            .filter(|&&(e, v)| {
                let wt = w(e);
                wt.is_finite() && wt + dist[v] == dist[cur] && !visited[v]
            })
            .map(|&(e, v)| (v, e))
            .collect();
        candidates.sort_unstable();
        if let Some(&(v, e)) = candidates.get(tried) {
            stack.last_mut().unwrap().1 += 1;
            visited[v] = true;
            path_edges.push(e);
            stack.push((v, 0));
        } else {
            // Dead end on a zero-weight plateau; undo this node.
            let (dead, _) = stack.pop()?;
            visited[dead] = false;
            if stack.is_empty() {
                return None;
            }
            path_edges.pop();
        }
    }
    Some(PathDescriptor {
        nodes: stack.iter().map(|&(v, _)| v).collect(),
        edges: path_edges,
    })
}

/// Heap entry ordered by distance, then node id for determinism.
struct HeapItem(f64, usize);

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0 && self.1 == other.1
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| self.1.cmp(&other.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_net() -> Network {
        let mut net = Network::new(5);
        net.add_edge(0, 1, 1, Payload::Bell).unwrap();
        net.add_edge(1, 2, 1, Payload::Bell).unwrap();
        net.add_edge(2, 4, 1, Payload::Bell).unwrap();
        net.add_edge(0, 3, 1, Payload::Bell).unwrap();
        net.add_edge(3, 4, 1, Payload::Bell).unwrap();
        net
    }

    #[test]
    fn add_edge_rejects_bad_input() {
        let mut net = Network::new(3);
        assert!(matches!(
            net.add_edge(0, 0, 1, Payload::Absent),
            Err(NetError::SelfLoop { node: 0 })
        ));
        assert!(matches!(
            net.add_edge(0, 3, 1, Payload::Absent),
            Err(NetError::NodeOutOfRange { node: 3, n: 3 })
        ));
        assert!(matches!(
            net.add_edge(0, 1, 0, Payload::Absent),
            Err(NetError::ZeroMultiplicity)
        ));
    }

    #[test]
    fn shortest_path_prefers_lexicographic_on_ties() {
        // Two hop-2 routes from 0 to 4: through 1..2 (3 hops) and through 3
        // (2 hops). With unit weights the 0-3-4 route wins; with equal-length
        // routes the smaller node sequence wins.
        let net = path_net();
        let p = shortest_path(&net, 0, 4, |_| 1.0).unwrap();
        assert_eq!(p.nodes, vec![0, 3, 4]);
        assert!(p.is_valid(&net));

        let mut tie = Network::new(4);
        tie.add_edge(0, 1, 1, Payload::Bell).unwrap();
        tie.add_edge(1, 3, 1, Payload::Bell).unwrap();
        tie.add_edge(0, 2, 1, Payload::Bell).unwrap();
        tie.add_edge(2, 3, 1, Payload::Bell).unwrap();
        let p = shortest_path(&tie, 0, 3, |_| 1.0).unwrap();
        assert_eq!(p.nodes, vec![0, 1, 3]);
    }

    #[test]
    fn shortest_path_handles_disconnection_and_weights() {
        let mut net = Network::new(4);
        net.add_edge(0, 1, 1, Payload::Bell).unwrap();
        net.add_edge(2, 3, 1, Payload::Bell).unwrap();
        assert!(shortest_path(&net, 0, 3, |_| 1.0).is_none());

        // Heavier direct edge loses to a light detour.
        let mut wnet = Network::new(3);
        wnet.add_edge(0, 2, 1, Payload::Bell).unwrap();
        wnet.add_edge(0, 1, 1, Payload::Absent).unwrap();
        wnet.add_edge(1, 2, 1, Payload::Absent).unwrap();
        let p = shortest_path(&wnet, 0, 2, |e| {
            if e.payload == Payload::Bell {
                5.0
            } else {
                1.0
            }
        })
        .unwrap();
        assert_eq!(p.nodes, vec![0, 1, 2]);
        assert_eq!(p.edges, vec![1, 2]);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let mut net = Network::new(4);
        net.topology = Topology::General;
        net.add_edge(0, 1, 2, Payload::Pure(PureLink::new(0.23456789012345678).unwrap()))
            .unwrap();
        net.add_edge(1, 2, 1, Payload::Werner(WernerLink::new(0.7).unwrap()))
            .unwrap();
        net.add_edge(2, 3, 1, Payload::BitPhase(BitPhaseLink::new(0.05, 0.125).unwrap()))
            .unwrap();
        net.add_edge(0, 3, 3, Payload::Bell).unwrap();
        net.add_edge(0, 2, 1, Payload::Absent).unwrap();
        let outs = crate::state::swap_pure_bell(
            PureLink::new(0.3).unwrap(),
            PureLink::new(0.15).unwrap(),
        );
        net.add_edge(1, 3, 1, Payload::SwapOutcomes(outs)).unwrap();
        net.positions = Some(vec![[0, 0, 0], [2, 0, 0], [2, 2, 0], [0, 2, 0]]);
        net.period = Some([4, 4, 0]);
        net.generators = vec![1, 3];

        let text = net.to_text();
        let back = Network::from_text(&text).unwrap();
        assert_eq!(net, back);
        assert_eq!(text, back.to_text());

        let json = net.to_json();
        let back = Network::from_json(&json).unwrap();
        assert_eq!(net, back);
        assert_eq!(json, back.to_json());
    }

    #[test]
    fn text_parse_reports_bad_lines() {
        let bad = "entnet v1\nnodes 2\nedge 0 1 1 pure 0.9\n";
        let e = Network::from_text(bad).unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");

        let bad = "entnet v1\nnodes 2\nedge 0 1 1 nosuch\n";
        assert!(Network::from_text(bad).is_err());

        let bad = "entnet v2\n";
        assert!(Network::from_text(bad).is_err());
    }

    #[test]
    fn displacement_wraps_on_torus() {
        let mut net = Network::new(2);
        net.add_edge(0, 1, 1, Payload::Bell).unwrap();
        net.positions = Some(vec![[0, 0, 0], [7, 0, 0]]);
        net.period = Some([8, 0, 0]);
        // 0 -> 7 wraps to -1 on a period-8 axis.
        assert_eq!(net.edge_displacement(0), Some([-1, 0, 0]));
    }
}
