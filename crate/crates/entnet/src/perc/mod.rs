//! Bond and site percolation on networks.
//!
//! Sampling draws one uniform per element in a fixed order, so two samples
//! from the same trial stream at different p are coupled: everything open at
//! the smaller p is open at the larger. Cluster finding is union-find with
//! integer displacement bookkeeping, which detects clusters that wrap a
//! periodic axis without any boundary heuristics; on open lattices spanning
//! falls back to touching opposite extremes.

mod cep;
mod emergence;

pub use cep::{
    cep_bond_probs, cep_percolate, multipartite_ghz_percolation, q_swap_threshold,
    q_swap_threshold_on, qep_honeycomb_compare, werner_no_go, GhzComparison, QSwapThresholds,
    QepComparison, WernerVerdict,
};
pub use emergence::{subgraph_emergence, SubgraphPattern};

use crate::mc::{self, BinomialEstimate};
use crate::net::{Edge, NetError, Network};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PercError {
    #[error("edge {edge} carries a {kind} payload, which has no conversion probability")]
    UnsupportedPayload { edge: usize, kind: &'static str },
    #[error("{0}")]
    Net(#[from] NetError),
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

/// RNG stream purposes for protocols that draw several independent
/// randomness streams per trial. Purpose 0 is the plain percolation draw.
pub(crate) mod purpose {
    pub const GHZ_SITE_ARM: u64 = 1;
    pub const GHZ_CEP_ARM: u64 = 2;
    pub const GRAPH: u64 = 3;
    pub const BONDS: u64 = 4;
}

/// One Monte Carlo realization: indicator per edge entry (bond mode) or per
/// node (site mode).
#[derive(Clone, Debug)]
pub struct PercSample {
    pub p: f64,
    pub open: Vec<bool>,
    pub site: bool,
}

/// Opens each edge entry independently with probability p. One uniform per
/// entry, in edge order. Multiplicity does not change the draw; protocols
/// that care about it fold multiplicity into a per-edge probability instead.
pub fn sample_bond<R: Rng>(net: &Network, p: f64, rng: &mut R) -> PercSample {
    sample_bond_with(net, rng, |_, _| p, p)
}

/// Bond sample with a per-edge probability.
pub(crate) fn sample_bond_with<R, F>(
    net: &Network,
    rng: &mut R,
    prob: F,
    p_label: f64,
) -> PercSample
where
    R: Rng,
    F: Fn(usize, &Edge) -> f64,
{
    let open = net
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| rng.gen::<f64>() < prob(i, e))
        .collect();
    PercSample {
        p: p_label,
        open,
        site: false,
    }
}

/// Occupies each node independently with probability p. One uniform per
/// node, in node order.
pub fn sample_site<R: Rng>(net: &Network, p: f64, rng: &mut R) -> PercSample {
    let open = (0..net.node_count()).map(|_| rng.gen::<f64>() < p).collect();
    PercSample {
        p,
        open,
        site: true,
    }
}

/// Union-find over node indices that tracks each node's integer displacement
/// to its root. A redundant union whose displacements disagree has closed a
/// loop around a periodic axis; the mismatch is the winding.
struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    size: Vec<usize>,
    offset: Vec<[i64; 3]>,
    winding: Vec<[bool; 3]>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
            size: vec![1; n],
            offset: vec![[0; 3]; n],
            winding: vec![[false; 3]; n],
        }
    }

    /// Root of x and the displacement pos(root) - pos(x), with full path
    /// compression.
    fn find(&mut self, x: usize) -> (usize, [i64; 3]) {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut chain = Vec::new();
        let mut cur = x;
        while cur != root {
            chain.push(cur);
            cur = self.parent[cur];
        }
        // Re-point the chain at the root, innermost node first, accumulating
        // displacements outward.
        let mut to_root = [0i64; 3];
        for &node in chain.iter().rev() {
            let mut d = self.offset[node];
            for k in 0..3 {
                d[k] += to_root[k];
            }
            self.offset[node] = d;
            self.parent[node] = root;
            to_root = d;
        }
        if x == root {
            (root, [0; 3])
        } else {
            (root, self.offset[x])
        }
    }

    /// Joins u and v given the displacement pos(v) - pos(u) along the edge.
    fn union(&mut self, u: usize, v: usize, disp: [i64; 3]) {
        let (ru, du) = self.find(u);
        let (rv, dv) = self.find(v);
        // Tree paths plus the edge give pos(ru) - pos(rv) = du - dv - disp.
        // When the roots already coincide the true difference is zero, so a
        // nonzero residue is a winding (a multiple of the period) on that
        // axis.
        let mut delta = [0i64; 3];
        for k in 0..3 {
            delta[k] = du[k] - dv[k] - disp[k];
        }
        if ru == rv {
            for (k, d) in delta.iter().enumerate() {
                if *d != 0 {
                    self.winding[ru][k] = true;
                }
            }
            return;
        }
        let (hi, lo, off) = if self.rank[ru] >= self.rank[rv] {
            // offset[rv] = pos(ru) - pos(rv) = delta.
            (ru, rv, delta)
        } else {
            (rv, ru, [-delta[0], -delta[1], -delta[2]])
        };
        self.parent[lo] = hi;
        self.offset[lo] = off;
        self.size[hi] += self.size[lo];
        for k in 0..3 {
            self.winding[hi][k] |= self.winding[lo][k];
        }
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
    }
}

/// Connected components of one percolation sample.
#[derive(Clone, Debug)]
pub struct Clusters {
    /// Cluster id per node. In site mode unoccupied nodes are singleton
    /// clusters marked ineligible.
    pub label: Vec<usize>,
    pub sizes: Vec<usize>,
    /// Per cluster, whether it wraps each periodic axis.
    pub winding: Vec<[bool; 3]>,
    /// Per cluster, whether it percolates: wraps a periodic axis, or touches
    /// both extremes of some axis on an open lattice.
    pub spanning: Vec<bool>,
    /// Bond mode: all true. Site mode: true only for occupied clusters.
    pub eligible: Vec<bool>,
    /// Largest eligible cluster (smallest id on ties), if any is eligible.
    pub largest: Option<usize>,
    node_count: usize,
}

impl Clusters {
    pub fn cluster_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest_fraction(&self) -> f64 {
        match self.largest {
            Some(c) => self.sizes[c] as f64 / self.node_count as f64,
            None => 0.0,
        }
    }

    pub fn has_spanning(&self) -> bool {
        self.spanning
            .iter()
            .zip(&self.eligible)
            .any(|(&s, &e)| s && e)
    }

    /// The theta indicator: `node` sits in the largest cluster and that
    /// cluster percolates.
    pub fn theta_indicator(&self, node: usize) -> bool {
        match self.largest {
            Some(c) => self.label[node] == c && self.spanning[c],
            None => false,
        }
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        let la = self.label[a];
        la == self.label[b] && self.eligible[la]
    }
}

/// Components of the open subgraph of one sample.
pub fn clusters(net: &Network, sample: &PercSample) -> Clusters {
    let n = net.node_count();
    let occupied: Option<&[bool]> = if sample.site {
        debug_assert_eq!(sample.open.len(), n);
        Some(&sample.open)
    } else {
        debug_assert_eq!(sample.open.len(), net.edges().len());
        None
    };
    let mut uf = UnionFind::new(n);
    for (i, e) in net.edges().iter().enumerate() {
        let open = match occupied {
            Some(occ) => occ[e.u] && occ[e.v],
            None => sample.open[i],
        };
        if open {
            let disp = net.edge_displacement(i).unwrap_or([0; 3]);
            uf.union(e.u, e.v, disp);
        }
    }

    let mut label = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut winding = Vec::new();
    for v in 0..n {
        let (root, _) = uf.find(v);
        if label[root] == usize::MAX {
            label[root] = sizes.len();
            sizes.push(uf.size[root]);
            winding.push(uf.winding[root]);
        }
        label[v] = label[root];
    }

    let k = sizes.len();
    let eligible: Vec<bool> = match occupied {
        None => vec![true; k],
        Some(occ) => {
            // Bonds only ever join occupied nodes, so occupation is uniform
            // within a cluster; any occupied member marks it eligible.
            let mut el = vec![false; k];
            for v in 0..n {
                if occ[v] {
                    el[label[v]] = true;
                }
            }
            el
        }
    };

    let period = net.period().unwrap_or([0; 3]);
    let periodic = period.iter().any(|&p| p > 0);
    let mut spanning: Vec<bool> = winding
        .iter()
        .map(|w| (0..3).any(|a| period[a] > 0 && w[a]))
        .collect();
    if !periodic {
        if let Some(pos) = net.positions() {
            // Open lattice: span = touch both global extremes of some axis.
            let mut gmin = [i64::MAX; 3];
            let mut gmax = [i64::MIN; 3];
            for p in pos {
                for a in 0..3 {
                    gmin[a] = gmin[a].min(p[a]);
                    gmax[a] = gmax[a].max(p[a]);
                }
            }
            let mut cmin = vec![[i64::MAX; 3]; k];
            let mut cmax = vec![[i64::MIN; 3]; k];
            for v in 0..n {
                let c = label[v];
                for a in 0..3 {
                    cmin[c][a] = cmin[c][a].min(pos[v][a]);
                    cmax[c][a] = cmax[c][a].max(pos[v][a]);
                }
            }
            for c in 0..k {
                spanning[c] = (0..3)
                    .any(|a| gmax[a] > gmin[a] && cmin[c][a] == gmin[a] && cmax[c][a] == gmax[a]);
            }
        }
    }

    let largest = (0..k)
        .filter(|&c| eligible[c])
        .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)));
    Clusters {
        label,
        sizes,
        winding,
        spanning,
        eligible,
        largest,
        node_count: n,
    }
}

/// Monte Carlo percolation estimates at one p.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PercEstimate {
    pub p: f64,
    pub theta_hat: f64,
    pub stderr: f64,
    pub spanning_prob: f64,
    pub largest_cluster_fraction: f64,
    pub trials: u64,
}

pub(crate) struct TrialStats {
    pub theta: bool,
    pub spanning: bool,
    pub lcf: f64,
}

pub(crate) fn stats_of(net: &Network, sample: &PercSample) -> TrialStats {
    let cl = clusters(net, sample);
    TrialStats {
        theta: cl.theta_indicator(0),
        spanning: cl.has_spanning(),
        lcf: cl.largest_fraction(),
    }
}

pub(crate) fn estimate_from(p: f64, stats: Vec<TrialStats>) -> PercEstimate {
    let trials = stats.len() as u64;
    let mut theta = 0u64;
    let mut span = 0u64;
    let mut lcf = 0.0f64;
    for s in &stats {
        theta += s.theta as u64;
        span += s.spanning as u64;
        lcf += s.lcf;
    }
    let theta_hat = theta as f64 / trials as f64;
    PercEstimate {
        p,
        theta_hat,
        stderr: (theta_hat * (1.0 - theta_hat) / trials as f64).sqrt(),
        spanning_prob: span as f64 / trials as f64,
        largest_cluster_fraction: lcf / trials as f64,
        trials,
    }
}

/// Bond percolation estimate at probability p.
pub fn percolate_bond(net: &Network, p: f64, trials: u64, seed: u64) -> PercEstimate {
    let stats = mc::collect_trials(seed, trials, |_, rng| {
        stats_of(net, &sample_bond(net, p, rng))
    });
    estimate_from(p, stats)
}

/// Site percolation estimate at occupation probability p.
pub fn percolate_site(net: &Network, p: f64, trials: u64, seed: u64) -> PercEstimate {
    let stats = mc::collect_trials(seed, trials, |_, rng| {
        stats_of(net, &sample_site(net, p, rng))
    });
    estimate_from(p, stats)
}

/// Theta and spanning estimates across a family of lattice sizes.
pub fn theta_and_spanning<G>(
    gen: G,
    sizes: &[u32],
    p: f64,
    trials: u64,
    seed: u64,
) -> Vec<(u32, PercEstimate)>
where
    G: Fn(u32) -> Network,
{
    sizes
        .iter()
        .map(|&l| (l, percolate_bond(&gen(l), p, trials, seed)))
        .collect()
}

/// Probability that nodes a and b land in one open cluster.
pub fn pair_connection_prob(
    net: &Network,
    p: f64,
    a: usize,
    b: usize,
    trials: u64,
    seed: u64,
) -> BinomialEstimate {
    mc::count_successes(seed, trials, |_, rng| {
        clusters(net, &sample_bond(net, p, rng)).connected(a, b)
    })
}

/// The node farthest from `reference` on a periodic lattice: positions offset
/// by half the period along every periodic axis.
pub fn antipodal_node(net: &Network, reference: usize) -> Option<usize> {
    let pos = net.positions()?;
    let period = net.period()?;
    if !period.iter().any(|&p| p > 0) {
        return None;
    }
    let mut target = pos[reference];
    for k in 0..3 {
        if period[k] > 0 {
            target[k] = (target[k] + period[k] / 2).rem_euclid(period[k]);
        }
    }
    (0..net.node_count()).min_by_key(|&v| {
        let mut d2 = 0i64;
        for k in 0..3 {
            let mut d = (pos[v][k] - target[k]).abs();
            if period[k] > 0 {
                d = d.min(period[k] - d);
            }
            d2 += d * d;
        }
        (d2, v)
    })
}

/// Known bond percolation thresholds, as (lattice name, p_c).
pub fn exact_thresholds() -> [(&'static str, f64); 4] {
    [
        ("square", 0.5),
        ("triangular", 2.0 * (std::f64::consts::PI / 18.0).sin()),
        ("honeycomb", 1.0 - 2.0 * (std::f64::consts::PI / 18.0).sin()),
        ("cubic", 0.248_812_6),
    ]
}

/// Bond threshold of a topology, when known.
pub fn exact_threshold(topology: &crate::net::Topology) -> Option<f64> {
    use crate::net::Topology::*;
    let table = exact_thresholds();
    match topology {
        SquareOpen { .. } | SquareTorus { .. } => Some(table[0].1),
        TriangularTorus { .. } => Some(table[1].1),
        HoneycombTorus { .. } => Some(table[2].1),
        CubicTorus { .. } => Some(table[3].1),
        _ => None,
    }
}

/// Threshold estimate from spanning-probability curves.
#[derive(Clone, Debug)]
pub struct ThresholdEstimate {
    /// Crossing point of the two largest sizes' spanning curves.
    pub p_c: f64,
    /// Half the gap between the half-spanning points of those sizes.
    pub uncertainty: f64,
    /// Per size, the p at which the spanning probability crosses 1/2.
    pub per_size: Vec<(u32, f64)>,
}

/// Spanning probability with shared uniforms: for a fixed seed this is
/// exactly nondecreasing in p, so bisection on it is well posed.
fn spanning_prob_at<S>(net: &Network, p: f64, trials: u64, seed: u64, sampler: &S) -> f64
where
    S: Fn(&Network, f64, &mut ChaCha8Rng) -> PercSample + Sync,
{
    mc::count_successes(seed, trials, |_, rng| {
        clusters(net, &sampler(net, p, rng)).has_spanning()
    })
    .p_hat()
}

fn half_spanning_point<S>(net: &Network, trials: u64, seed: u64, tol: f64, sampler: &S) -> f64
where
    S: Fn(&Network, f64, &mut ChaCha8Rng) -> PercSample + Sync,
{
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if spanning_prob_at(net, mid, trials, seed, sampler) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn threshold_estimate_with<G, S>(
    gen: G,
    sizes: &[u32],
    trials: u64,
    seed: u64,
    tol: f64,
    sampler: S,
) -> Result<ThresholdEstimate, PercError>
where
    G: Fn(u32) -> Network,
    S: Fn(&Network, f64, &mut ChaCha8Rng) -> PercSample + Sync,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(PercError::BadParameter(format!("tol {tol} must be > 0")));
    }
    let mut sorted: Vec<u32> = sizes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 2 {
        return Err(PercError::BadParameter(
            "threshold estimation needs two distinct sizes".to_string(),
        ));
    }
    let per_size: Vec<(u32, f64)> = sorted
        .iter()
        .map(|&l| {
            (
                l,
                half_spanning_point(&gen(l), trials, seed ^ u64::from(l), tol, &sampler),
            )
        })
        .collect();

    // Crossing of the two largest sizes: bisect the sign of S_big - S_small.
    // Away from the crossing the difference dwarfs Monte Carlo noise, and
    // fixed per-size seeds make each curve a deterministic step function of
    // p, so the bisection is well defined.
    let l_small = sorted[sorted.len() - 2];
    let l_big = sorted[sorted.len() - 1];
    let net_small = gen(l_small);
    let net_big = gen(l_big);
    let diff = |p: f64| {
        spanning_prob_at(&net_big, p, trials, seed ^ u64::from(l_big), &sampler)
            - spanning_prob_at(&net_small, p, trials, seed ^ u64::from(l_small), &sampler)
    };
    let p_small = per_size[per_size.len() - 2].1;
    let p_big = per_size[per_size.len() - 1].1;
    let mut lo = (p_small.min(p_big) - 0.05).max(0.0);
    let mut hi = (p_small.max(p_big) + 0.05).min(1.0);
    // Below the crossing the larger lattice spans less often, above it more
    // often. Widen until the bracket sees both signs, then bisect.
    for _ in 0..8 {
        if diff(lo) <= 0.0 && diff(hi) >= 0.0 {
            break;
        }
        lo = (lo - 0.05).max(0.0);
        hi = (hi + 0.05).min(1.0);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if diff(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdEstimate {
        p_c: 0.5 * (lo + hi),
        uncertainty: 0.5 * (p_big - p_small).abs(),
        per_size,
    })
}

/// Estimates the bond percolation threshold of a lattice family from the
/// crossing of spanning curves at the two largest sizes.
pub fn bond_threshold<G>(
    gen: G,
    sizes: &[u32],
    trials: u64,
    seed: u64,
    tol: f64,
) -> Result<ThresholdEstimate, PercError>
where
    G: Fn(u32) -> Network,
{
    threshold_estimate_with(gen, sizes, trials, seed, tol, |net, p, rng| {
        sample_bond(net, p, rng)
    })
}

/// Site percolation analogue of [`bond_threshold`].
pub fn site_threshold<G>(
    gen: G,
    sizes: &[u32],
    trials: u64,
    seed: u64,
    tol: f64,
) -> Result<ThresholdEstimate, PercError>
where
    G: Fn(u32) -> Network,
{
    threshold_estimate_with(gen, sizes, trials, seed, tol, |net, p, rng| {
        sample_site(net, p, rng)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::trial_rng;
    use crate::net::{gen_square, Boundary, Payload};

    #[test]
    fn sampling_extremes_and_coupling() {
        let net = gen_square(4, Boundary::Torus, Payload::Bell).unwrap();
        let mut rng = trial_rng(1, 0);
        assert!(sample_bond(&net, 0.0, &mut rng).open.iter().all(|&o| !o));
        assert!(sample_bond(&net, 1.0, &mut rng).open.iter().all(|&o| o));

        // Same stream, increasing p: open sets are nested.
        let lo = sample_bond(&net, 0.3, &mut trial_rng(7, 3));
        let hi = sample_bond(&net, 0.7, &mut trial_rng(7, 3));
        for (a, b) in lo.open.iter().zip(&hi.open) {
            assert!(!a || *b);
        }
        let lo = sample_site(&net, 0.2, &mut trial_rng(7, 4));
        let hi = sample_site(&net, 0.9, &mut trial_rng(7, 4));
        for (a, b) in lo.open.iter().zip(&hi.open) {
            assert!(!a || *b);
        }
    }

    #[test]
    fn clusters_match_bfs() {
        for inst in 0..1000u64 {
            let mut rng = trial_rng(11, inst);
            let n = 2 + (rng.gen::<u64>() % 19) as usize;
            let net = crate::net::gen_er(n, 0.3, Payload::Bell, &mut rng).unwrap();
            let sample = sample_bond(&net, 0.6, &mut rng);
            let cl = clusters(&net, &sample);

            let mut adj = vec![Vec::new(); n];
            for (i, e) in net.edges().iter().enumerate() {
                if sample.open[i] {
                    adj[e.u].push(e.v);
                    adj[e.v].push(e.u);
                }
            }
            let mut comp = vec![usize::MAX; n];
            let mut k = 0;
            for s in 0..n {
                if comp[s] != usize::MAX {
                    continue;
                }
                let mut queue = vec![s];
                comp[s] = k;
                while let Some(v) = queue.pop() {
                    for &w in &adj[v] {
                        if comp[w] == usize::MAX {
                            comp[w] = k;
                            queue.push(w);
                        }
                    }
                }
                k += 1;
            }
            assert_eq!(cl.cluster_count(), k, "instance {inst}");
            for a in 0..n {
                for b in (a + 1)..n {
                    assert_eq!(
                        cl.label[a] == cl.label[b],
                        comp[a] == comp[b],
                        "instance {inst} nodes {a},{b}"
                    );
                }
            }
            let total: usize = cl.sizes.iter().sum();
            assert_eq!(total, n);
        }
    }

    #[test]
    fn winding_detects_wraps() {
        let net = gen_square(4, Boundary::Torus, Payload::Bell).unwrap();
        // Horizontal +x edges of row 0 sit at even indices 2*(0*4+x); opening
        // all four closes a ring around the x axis.
        let mut open = vec![false; net.edges().len()];
        for x in 0..4 {
            open[2 * x] = true;
        }
        let sample = PercSample {
            p: 0.5,
            open,
            site: false,
        };
        let cl = clusters(&net, &sample);
        let ring = cl.label[0];
        assert!(cl.winding[ring][0]);
        assert!(!cl.winding[ring][1]);
        assert!(cl.spanning[ring]);
        assert_eq!(cl.sizes[ring], 4);

        // Three of the four edges reach the same nodes but do not wrap.
        let mut open = vec![false; net.edges().len()];
        for x in 0..3 {
            open[2 * x] = true;
        }
        let sample = PercSample {
            p: 0.5,
            open,
            site: false,
        };
        let cl = clusters(&net, &sample);
        assert!(!cl.has_spanning());
        assert_eq!(cl.sizes[cl.label[0]], 4);
    }

    #[test]
    fn open_boundary_spanning() {
        let net = gen_square(4, Boundary::Open, Payload::Bell).unwrap();
        let sample = sample_bond(&net, 1.0, &mut trial_rng(0, 0));
        let cl = clusters(&net, &sample);
        assert_eq!(cl.cluster_count(), 1);
        assert!(cl.has_spanning());
        assert!(cl.theta_indicator(0));

        let sample = sample_bond(&net, 0.0, &mut trial_rng(0, 0));
        let cl = clusters(&net, &sample);
        assert_eq!(cl.cluster_count(), 16);
        assert!(!cl.has_spanning());
    }

    #[test]
    fn site_mode_eligibility() {
        let net = gen_square(3, Boundary::Torus, Payload::Bell).unwrap();
        let sample = PercSample {
            p: 0.0,
            open: vec![false; 9],
            site: true,
        };
        let cl = clusters(&net, &sample);
        assert_eq!(cl.largest, None);
        assert_eq!(cl.largest_fraction(), 0.0);
        assert!(!cl.theta_indicator(0));
        assert!(!cl.has_spanning());

        let mut occ = vec![false; 9];
        occ[0] = true;
        occ[1] = true;
        let sample = PercSample {
            p: 0.2,
            open: occ,
            site: true,
        };
        let cl = clusters(&net, &sample);
        assert!(cl.connected(0, 1));
        assert!(!cl.connected(0, 2));
        assert_eq!(cl.sizes[cl.largest.unwrap()], 2);
        assert!((cl.largest_fraction() - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn percolate_regimes_on_square() {
        let net = gen_square(16, Boundary::Torus, Payload::Bell).unwrap();
        let low = percolate_bond(&net, 0.25, 400, 5);
        let high = percolate_bond(&net, 0.75, 400, 5);
        assert!(low.spanning_prob < 0.05, "low {}", low.spanning_prob);
        assert!(high.spanning_prob > 0.95, "high {}", high.spanning_prob);
        assert!(high.theta_hat > 0.9);
        assert!(low.largest_cluster_fraction < 0.2);
        assert!(high.largest_cluster_fraction > 0.8);
        assert_eq!(low.trials, 400);
        let expect = (low.theta_hat * (1.0 - low.theta_hat) / 400.0).sqrt();
        assert!((low.stderr - expect).abs() < 1e-15);
    }

    #[test]
    fn antipode_on_torus() {
        let net = gen_square(8, Boundary::Torus, Payload::Bell).unwrap();
        // Node 0 sits at the origin; its antipode is the center (4, 4) in
        // cell coordinates, index 4*8+4.
        assert_eq!(antipodal_node(&net, 0), Some(4 * 8 + 4));
        let open = gen_square(8, Boundary::Open, Payload::Bell).unwrap();
        assert_eq!(antipodal_node(&open, 0), None);
    }

    #[test]
    fn threshold_table_values() {
        let t = exact_thresholds();
        assert_eq!(t[0], ("square", 0.5));
        assert!((t[1].1 - 0.34729).abs() < 1e-5);
        assert!((t[2].1 - 0.65270).abs() < 1e-5);
        assert!((t[3].1 - 0.2488).abs() < 1e-3);
        assert!((t[1].1 + t[2].1 - 1.0).abs() < 1e-15);
        let sq = gen_square(4, Boundary::Torus, Payload::Bell).unwrap();
        assert_eq!(exact_threshold(sq.topology()), Some(0.5));
    }

    #[test]
    fn percolate_is_worker_independent() {
        let net = gen_square(8, Boundary::Torus, Payload::Bell).unwrap();
        let one = crate::mc::run_with_workers(Some(1), || percolate_bond(&net, 0.5, 200, 9));
        let many = crate::mc::run_with_workers(Some(8), || percolate_bond(&net, 0.5, 200, 9));
        assert_eq!(one, many);
    }
}
