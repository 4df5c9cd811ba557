//! Small-subgraph emergence in sparse random graphs.
//!
//! With p = N^z, the expected count of copies of a pattern F with n vertices
//! and l edges scales as N^{n + l z}, so F appears around z = -n/l. The
//! search for a copy is exact backtracking per sampled graph, not an
//! estimate: patterns are tiny, and degree plus partial-adjacency pruning
//! keeps the exhaustive no-copy case cheap in the sparse regime.

use super::PercError;
use crate::mc::{self, BinomialEstimate};
use crate::net::{gen_er, Network, Payload};

/// A small connected pattern graph to search for.
#[derive(Clone, Debug)]
pub struct SubgraphPattern {
    name: &'static str,
    n: usize,
    edges: Vec<(usize, usize)>,
    /// Visit order for the matcher: breadth-first from a max-degree vertex,
    /// so every vertex after the first anchors on an already-placed
    /// neighbor.
    order: Vec<usize>,
    /// Per visit position, the positions of earlier-placed pattern
    /// neighbors; the first entry is the anchor.
    back_edges: Vec<Vec<usize>>,
    degree: Vec<usize>,
    complete: bool,
}

impl SubgraphPattern {
    fn build(
        name: &'static str,
        n: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<SubgraphPattern, PercError> {
        if !(2..=6).contains(&n) {
            return Err(PercError::BadParameter(format!(
                "pattern {name}: {n} vertices outside the supported 2..=6"
            )));
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n || a == b || !seen.insert((a.min(b), a.max(b))) {
                return Err(PercError::BadParameter(format!(
                    "pattern {name}: bad edge ({a}, {b})"
                )));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let degree: Vec<usize> = adj.iter().map(Vec::len).collect();

        // Breadth-first order from a max-degree root.
        let root = (0..n).max_by_key(|&v| (degree[v], n - v)).unwrap();
        let mut order = vec![root];
        let mut placed = vec![false; n];
        placed[root] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !placed[w]).collect();
            next.sort_unstable();
            for w in next {
                placed[w] = true;
                order.push(w);
            }
        }
        if order.len() != n {
            return Err(PercError::BadParameter(format!(
                "pattern {name} is not connected"
            )));
        }
        let pos_of = {
            let mut p = vec![0usize; n];
            for (i, &v) in order.iter().enumerate() {
                p[v] = i;
            }
            p
        };
        let back_edges: Vec<Vec<usize>> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut back: Vec<usize> = adj[v]
                    .iter()
                    .map(|&w| pos_of[w])
                    .filter(|&j| j < i)
                    .collect();
                back.sort_unstable();
                back
            })
            .collect();
        let complete = edges.len() == n * (n - 1) / 2;
        Ok(SubgraphPattern {
            name,
            n,
            edges,
            order,
            back_edges,
            degree,
            complete,
        })
    }

    pub fn edge() -> SubgraphPattern {
        Self::build("edge", 2, vec![(0, 1)]).unwrap()
    }

    /// Path on three vertices.
    pub fn path3() -> SubgraphPattern {
        Self::build("path3", 3, vec![(0, 1), (1, 2)]).unwrap()
    }

    /// Star on four vertices (a tree of order 4).
    pub fn tree4() -> SubgraphPattern {
        Self::build("tree4", 4, vec![(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    pub fn triangle() -> SubgraphPattern {
        Self::build("triangle", 3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    pub fn cycle4() -> SubgraphPattern {
        Self::build("cycle4", 4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()
    }

    pub fn k4() -> SubgraphPattern {
        Self::build(
            "k4",
            4,
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        )
        .unwrap()
    }

    /// The six patterns of the emergence study, in threshold order.
    pub fn all() -> [SubgraphPattern; 6] {
        [
            Self::edge(),
            Self::path3(),
            Self::tree4(),
            Self::triangle(),
            Self::cycle4(),
            Self::k4(),
        ]
    }

    pub fn by_name(name: &str) -> Option<SubgraphPattern> {
        Self::all().into_iter().find(|p| p.name == name)
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Exponent at which the pattern emerges under p = N^z: z = -n/l.
    pub fn z_critical(&self) -> f64 {
        -(self.n as f64) / (self.edges.len() as f64)
    }

    /// Whether the host graph contains a (not necessarily induced) copy.
    /// Host adjacency lists must be sorted.
    pub fn contained_in(&self, adj: &[Vec<usize>]) -> bool {
        if adj.len() < self.n {
            return false;
        }
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; adj.len()];
        self.place(0, adj, &mut map, &mut used)
    }

    fn place(&self, pos: usize, adj: &[Vec<usize>], map: &mut [usize], used: &mut [bool]) -> bool {
        if pos == self.n {
            return true;
        }
        let pv = self.order[pos];
        let want_deg = self.degree[pv];
        // For a complete pattern every relabeling of a copy is a copy, so
        // host ids may be forced ascending along the visit order.
        let floor = if self.complete && pos > 0 {
            map[pos - 1]
        } else {
            usize::MAX
        };
        let try_host = |cand: usize, map: &mut [usize], used: &mut [bool]| -> bool {
            if used[cand]
                || adj[cand].len() < want_deg
                || (floor != usize::MAX && cand <= floor)
            {
                return false;
            }
            if !self.back_edges[pos]
                .iter()
                .all(|&j| adj[cand].binary_search(&map[j]).is_ok())
            {
                return false;
            }
            map[pos] = cand;
            used[cand] = true;
            if self.place(pos + 1, adj, map, used) {
                return true;
            }
            map[pos] = usize::MAX;
            used[cand] = false;
            false
        };
        if pos == 0 {
            (0..adj.len()).any(|cand| try_host(cand, map, used))
        } else {
            let anchor = map[self.back_edges[pos][0]];
            // Clone the anchor's list indexably without borrowing adj twice.
            (0..adj[anchor].len()).any(|i| try_host(adj[anchor][i], map, used))
        }
    }
}

/// Sorted deduplicated neighbor lists of a network.
pub(crate) fn host_adjacency(net: &Network) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); net.node_count()];
    for e in net.edges() {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Fraction of Erdos-Renyi G(n, p) samples containing at least one copy of
/// the pattern.
pub fn subgraph_emergence(
    n: usize,
    p: f64,
    pattern: &SubgraphPattern,
    trials: u64,
    seed: u64,
) -> Result<BinomialEstimate, PercError> {
    if !(2..=3000).contains(&n) {
        return Err(PercError::BadParameter(format!(
            "host size {n} outside the supported 2..=3000"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(PercError::BadParameter(format!("p {p} outside [0, 1]")));
    }
    Ok(mc::count_successes(seed, trials, |_, rng| {
        let net = gen_er(n, p, Payload::Absent, rng).expect("parameters validated");
        pattern.contained_in(&host_adjacency(&net))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::trial_rng;
    use rand::Rng;

    #[test]
    fn pattern_constants() {
        let all = SubgraphPattern::all();
        let expect = [
            ("edge", 2, 1, -2.0),
            ("path3", 3, 2, -1.5),
            ("tree4", 4, 3, -4.0 / 3.0),
            ("triangle", 3, 3, -1.0),
            ("cycle4", 4, 4, -1.0),
            ("k4", 4, 6, -2.0 / 3.0),
        ];
        for (pat, (name, n, l, z)) in all.iter().zip(expect) {
            assert_eq!(pat.name(), name);
            assert_eq!(pat.vertex_count(), n);
            assert_eq!(pat.edge_count(), l);
            assert!((pat.z_critical() - z).abs() < 1e-15);
        }
        assert!(SubgraphPattern::by_name("k4").is_some());
        assert!(SubgraphPattern::by_name("k5").is_none());
        assert!(SubgraphPattern::build("dup", 3, vec![(0, 1), (1, 0)]).is_err());
        assert!(SubgraphPattern::build("split", 4, vec![(0, 1), (2, 3)]).is_err());
        assert!(SubgraphPattern::build("big", 7, vec![(0, 1)]).is_err());
    }

    /// Oracle: try every injective vertex map.
    fn contains_naive(pat: &SubgraphPattern, adj: &[Vec<usize>]) -> bool {
        fn rec(
            pat: &SubgraphPattern,
            adj: &[Vec<usize>],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if map.len() == pat.n {
                return pat
                    .edges
                    .iter()
                    .all(|&(a, b)| adj[map[a]].binary_search(&map[b]).is_ok());
            }
            for v in 0..adj.len() {
                if !used[v] {
                    used[v] = true;
                    map.push(v);
                    if rec(pat, adj, map, used) {
                        return true;
                    }
                    map.pop();
                    used[v] = false;
                }
            }
            false
        }
        rec(pat, adj, &mut Vec::new(), &mut vec![false; adj.len()])
    }

    #[test]
    fn matcher_agrees_with_exhaustive_search() {
        let patterns = SubgraphPattern::all();
        let mut rng = trial_rng(23, 0);
        for _ in 0..300 {
            let n = 4 + (rng.gen::<u64>() % 4) as usize;
            let p = rng.gen::<f64>() * 0.6;
            let net = gen_er(n, p, Payload::Absent, &mut rng).unwrap();
            let adj = host_adjacency(&net);
            for pat in &patterns {
                assert_eq!(
                    pat.contained_in(&adj),
                    contains_naive(pat, &adj),
                    "pattern {} on n={n} p={p:.3}",
                    pat.name()
                );
            }
        }
    }

    #[test]
    fn emergence_extremes() {
        let edge = SubgraphPattern::edge();
        assert_eq!(subgraph_emergence(50, 0.0, &edge, 20, 1).unwrap().p_hat(), 0.0);
        let k4 = SubgraphPattern::k4();
        assert_eq!(subgraph_emergence(10, 1.0, &k4, 20, 1).unwrap().p_hat(), 1.0);
        assert!(subgraph_emergence(5000, 0.5, &edge, 1, 1).is_err());
        assert!(subgraph_emergence(50, 1.5, &edge, 1, 1).is_err());
    }

    #[test]
    fn triangle_appearance_tracks_z() {
        // Around z = -1 the appearance probability must climb steeply.
        let tri = SubgraphPattern::triangle();
        let n = 150usize;
        let p_of = |z: f64| (n as f64).powf(z);
        let low = subgraph_emergence(n, p_of(-1.5), &tri, 200, 8).unwrap();
        let high = subgraph_emergence(n, p_of(-0.5), &tri, 200, 8).unwrap();
        assert!(low.p_hat() < 0.2, "low {}", low.p_hat());
        assert!(high.p_hat() > 0.8, "high {}", high.p_hat());
    }
}
