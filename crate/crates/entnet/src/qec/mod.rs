//! Network-based error correction on the dual square lattice.
//!
//! Long-distance entanglement generation leaves independent link errors
//! behind; on the dual lattice these form chains whose endpoints are the
//! observable syndromes. The decoder pairs syndromes by exact minimum-weight
//! perfect matching and succeeds when the inferred correction differs from
//! the truth only by contractible loops.
//!
//! All threshold work runs on the torus, where syndrome counts are always
//! even and there are no boundary special cases; a correction then fails
//! exactly when the residual winds around one of the two cycles of the
//! torus. The open-boundary variant (chains may terminate on the top or
//! bottom edge, syndromes may match to the nearest of those boundaries) is
//! available through [`Boundary::Open`] but is not the default geometry.

mod matching;

pub use matching::{max_weight_matching, min_weight_pairing};

use crate::mc;
pub use crate::net::Boundary;
use crate::net::{Network, Payload, Topology};
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QecError {
    #[error("lattice size {l} invalid: need even L >= 4")]
    BadSize { l: u32 },
    #[error("error rate {p} outside [0, 1]")]
    BadRate { p: f64 },
    #[error("syndrome count {count} is odd; a torus pattern cannot produce this")]
    OddSyndrome { count: usize },
    #[error("syndrome vertex {vertex} out of range for L = {l}")]
    VertexOutOfRange { vertex: usize, l: u32 },
    #[error("geometry mismatch between error pattern and matching")]
    GeometryMismatch,
    #[error("residual syndrome is nonempty after correction: decoder invariant broken")]
    ResidualSyndrome,
    #[error("threshold scan needs {need}, got {got}")]
    BadScan { need: &'static str, got: String },
    #[error("failure-rate curves do not cross inside the scanned grid")]
    NoCrossing,
    #[error("network unsuitable for the bit-flip pipeline: {reason}")]
    BadNetwork { reason: String },
    #[error("bit-flip pipeline requires eps_p = 0 everywhere, found {eps_p}")]
    PhaseErrors { eps_p: f64 },
}

/// Dual-lattice edge indexing for an L x L patch, toroidal or open.
///
/// Torus: edge `2 (r L + c)` is horizontal from (r, c) to (r, c+1 mod L),
/// edge `2 (r L + c) + 1` is vertical from (r, c) to (r+1 mod L, c).
///
/// Open: horizontal and vertical interior edges first, then L stub edges from
/// the top boundary into row 0 and L stubs from row L-1 to the bottom
/// boundary. Chains may end on those stubs without leaving a syndrome. Both
/// geometries have exactly 2 L^2 edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Grid {
    l: usize,
    boundary: Boundary,
}

impl Grid {
    fn n_edges(&self) -> usize {
        2 * self.l * self.l
    }

    fn horizontal(&self, r: usize, c: usize) -> usize {
        match self.boundary {
            Boundary::Torus => 2 * (r * self.l + c),
            Boundary::Open => {
                debug_assert!(c + 1 < self.l);
                r * (self.l - 1) + c
            }
        }
    }

    fn vertical(&self, r: usize, c: usize) -> usize {
        match self.boundary {
            Boundary::Torus => 2 * (r * self.l + c) + 1,
            Boundary::Open => {
                debug_assert!(r + 1 < self.l);
                self.l * (self.l - 1) + r * self.l + c
            }
        }
    }

    fn top_stub(&self, c: usize) -> usize {
        debug_assert!(self.boundary == Boundary::Open);
        2 * self.l * (self.l - 1) + c
    }

    fn bottom_stub(&self, c: usize) -> usize {
        debug_assert!(self.boundary == Boundary::Open);
        2 * self.l * (self.l - 1) + self.l + c
    }

    /// Parity of flipped edges incident to vertex (r, c).
    fn vertex_parity(&self, flipped: &[bool], r: usize, c: usize) -> bool {
        let l = self.l;
        match self.boundary {
            Boundary::Torus => {
                flipped[self.horizontal(r, c)]
                    ^ flipped[self.horizontal(r, (c + l - 1) % l)]
                    ^ flipped[self.vertical(r, c)]
                    ^ flipped[self.vertical((r + l - 1) % l, c)]
            }
            Boundary::Open => {
                let mut parity = false;
                if c + 1 < l {
                    parity ^= flipped[self.horizontal(r, c)];
                }
                if c > 0 {
                    parity ^= flipped[self.horizontal(r, c - 1)];
                }
                parity ^= if r > 0 {
                    flipped[self.vertical(r - 1, c)]
                } else {
                    flipped[self.top_stub(c)]
                };
                parity ^= if r + 1 < l {
                    flipped[self.vertical(r, c)]
                } else {
                    flipped[self.bottom_stub(c)]
                };
                parity
            }
        }
    }

    /// Graph distance between two vertices: Manhattan, wrapped on the torus.
    fn dist(&self, a: usize, b: usize) -> usize {
        let l = self.l;
        let (ra, ca) = (a / l, a % l);
        let (rb, cb) = (b / l, b % l);
        let dr = ra.abs_diff(rb);
        let dc = ca.abs_diff(cb);
        match self.boundary {
            Boundary::Torus => dr.min(l - dr) + dc.min(l - dc),
            Boundary::Open => dr + dc,
        }
    }

    /// Distance from a vertex to the nearest absorbing boundary (open only).
    fn boundary_dist(&self, v: usize) -> usize {
        let r = v / self.l;
        (r + 1).min(self.l - r)
    }

    /// Deterministic minimal path between matched vertices: rows are aligned
    /// first, then columns, each leg taking the shorter wrap and preferring
    /// the increasing direction on exact ties. The walk starts from the
    /// smaller (row, col) endpoint, so equal inputs give equal paths.
    fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let l = self.l;
        let (a, b) = (a.min(b), a.max(b));
        let (mut r, mut c) = (a / l, a % l);
        let (rb, cb) = (b / l, b % l);
        let mut edges = Vec::with_capacity(self.dist(a, b));
        let (steps_r, up) = self.leg(r, rb);
        for _ in 0..steps_r {
            if up {
                edges.push(self.vertical(r, c));
                r = (r + 1) % l;
            } else {
                r = (r + l - 1) % l;
                edges.push(self.vertical(r, c));
            }
        }
        let (steps_c, right) = self.leg(c, cb);
        for _ in 0..steps_c {
            if right {
                edges.push(self.horizontal(r, c));
                c = (c + 1) % l;
            } else {
                c = (c + l - 1) % l;
                edges.push(self.horizontal(r, c));
            }
        }
        debug_assert!(edges.len() == self.dist(a, b));
        edges
    }

    /// Step count and direction (true = increasing) for one coordinate leg.
    fn leg(&self, from: usize, to: usize) -> (usize, bool) {
        let l = self.l;
        match self.boundary {
            Boundary::Open => {
                if to >= from {
                    (to - from, true)
                } else {
                    (from - to, false)
                }
            }
            Boundary::Torus => {
                let fwd = (to + l - from) % l;
                if 2 * fwd <= l {
                    (fwd, true)
                } else {
                    (l - fwd, false)
                }
            }
        }
    }

    /// Straight path from a vertex to its nearest boundary (open only),
    /// preferring the top on ties.
    fn boundary_path(&self, v: usize) -> Vec<usize> {
        let (r, c) = (v / self.l, v % self.l);
        let mut edges = Vec::new();
        if r < self.l - r {
            for rr in (0..r).rev() {
                edges.push(self.vertical(rr, c));
            }
            edges.push(self.top_stub(c));
        } else {
            for rr in r..self.l - 1 {
                edges.push(self.vertical(rr, c));
            }
            edges.push(self.bottom_stub(c));
        }
        edges
    }
}

fn check_size(l: u32) -> Result<(), QecError> {
    if l < 4 || !l.is_multiple_of(2) {
        return Err(QecError::BadSize { l });
    }
    Ok(())
}

/// One sampled pattern of defective dual-lattice links.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorPattern {
    l: u32,
    boundary: Boundary,
    /// Rate the pattern was sampled at; hand-built patterns record the
    /// realized flip fraction instead.
    p: f64,
    flipped: Vec<bool>,
}

impl ErrorPattern {
    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Flip indicator per dual edge, in the indexing documented on [`Grid`].
    pub fn flipped(&self) -> &[bool] {
        &self.flipped
    }

    pub fn flipped_count(&self) -> usize {
        self.flipped.iter().filter(|&&f| f).count()
    }

    /// Builds a pattern from explicit edge indices (tests and debugging).
    pub fn from_edges(l: u32, boundary: Boundary, edges: &[usize]) -> Result<ErrorPattern, QecError> {
        check_size(l)?;
        let grid = Grid { l: l as usize, boundary };
        let mut flipped = vec![false; grid.n_edges()];
        for &e in edges {
            if e >= flipped.len() {
                return Err(QecError::VertexOutOfRange { vertex: e, l });
            }
            flipped[e] ^= true;
        }
        let p = flipped.iter().filter(|&&f| f).count() as f64 / flipped.len() as f64;
        Ok(ErrorPattern { l, boundary, p, flipped })
    }

    fn grid(&self) -> Grid {
        Grid { l: self.l as usize, boundary: self.boundary }
    }
}

/// Flips every dual edge of the L x L torus independently with probability p.
pub fn sample_errors<R: Rng>(l: u32, p: f64, rng: &mut R) -> Result<ErrorPattern, QecError> {
    sample_errors_in(l, p, Boundary::Torus, rng)
}

/// [`sample_errors`] on either geometry.
pub fn sample_errors_in<R: Rng>(
    l: u32,
    p: f64,
    boundary: Boundary,
    rng: &mut R,
) -> Result<ErrorPattern, QecError> {
    check_size(l)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(QecError::BadRate { p });
    }
    let grid = Grid { l: l as usize, boundary };
    let flipped = (0..grid.n_edges()).map(|_| rng.gen::<f64>() < p).collect();
    Ok(ErrorPattern { l, boundary, p, flipped })
}

/// Dual vertices whose incident flipped-edge count is odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syndrome {
    l: u32,
    boundary: Boundary,
    /// Sorted vertex ids r * L + c.
    vertices: Vec<usize>,
}

impl Syndrome {
    /// Builds a syndrome from explicit vertex ids (tests and debugging).
    pub fn new(l: u32, boundary: Boundary, mut vertices: Vec<usize>) -> Result<Syndrome, QecError> {
        check_size(l)?;
        vertices.sort_unstable();
        vertices.dedup();
        if let Some(&v) = vertices.iter().find(|&&v| v >= (l as usize) * (l as usize)) {
            return Err(QecError::VertexOutOfRange { vertex: v, l });
        }
        Ok(Syndrome { l, boundary, vertices })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Endpoints of the error chains: all odd-parity dual vertices, sorted.
pub fn extract_syndromes(errors: &ErrorPattern) -> Syndrome {
    let grid = errors.grid();
    let l = grid.l;
    let mut vertices = Vec::new();
    for r in 0..l {
        for c in 0..l {
            if grid.vertex_parity(&errors.flipped, r, c) {
                vertices.push(r * l + c);
            }
        }
    }
    debug_assert!(
        errors.boundary == Boundary::Open || vertices.len() % 2 == 0,
        "torus chains always pair their endpoints"
    );
    Syndrome { l: errors.l, boundary: errors.boundary, vertices }
}

/// A decoded pairing of the syndromes with realized correction paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    l: u32,
    boundary: Boundary,
    /// Matched vertex pairs; `None` partners a vertex with the boundary
    /// (open geometry only).
    pairs: Vec<(usize, Option<usize>)>,
    /// Correction path per pair, as dual edge indices.
    paths: Vec<Vec<usize>>,
    total_weight: u64,
}

impl Matching {
    pub fn pairs(&self) -> &[(usize, Option<usize>)] {
        &self.pairs
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    /// Sum of pair graph distances, in lattice steps.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }
}

/// Pairs the syndromes at minimum total toroidal (or open) Manhattan
/// distance by exact blossom matching on the complete syndrome graph, then
/// realizes each pair as a deterministic minimal lattice path.
pub fn decode_mwpm(syndrome: &Syndrome) -> Result<Matching, QecError> {
    let grid = Grid { l: syndrome.l as usize, boundary: syndrome.boundary };
    let verts = &syndrome.vertices;
    let n = verts.len();
    if syndrome.boundary == Boundary::Torus && !n.is_multiple_of(2) {
        return Err(QecError::OddSyndrome { count: n });
    }
    let mut pairs = Vec::with_capacity(n / 2 + 1);
    match syndrome.boundary {
        Boundary::Torus => {
            for (a, b) in matching::min_weight_pairing(n, |i, j| grid.dist(verts[i], verts[j]) as i64)
            {
                pairs.push((verts[a], Some(verts[b])));
            }
        }
        Boundary::Open => {
            // Virtual partner i + n sits on the boundary nearest to syndrome
            // i; virtual-virtual pairs are free, so any subset of syndromes
            // may drain to the boundary while the rest pair up.
            const FORBIDDEN: i64 = 1 << 30;
            let d = |i: usize, j: usize| -> i64 {
                match (i < n, j < n) {
                    (true, true) => grid.dist(verts[i], verts[j]) as i64,
                    (false, false) => 0,
                    (true, false) => {
                        if j - n == i {
                            grid.boundary_dist(verts[i]) as i64
                        } else {
                            FORBIDDEN
                        }
                    }
                    (false, true) => d_swap(i, j, n, &grid, verts),
                }
            };
            fn d_swap(i: usize, j: usize, n: usize, grid: &Grid, verts: &[usize]) -> i64 {
                if i - n == j {
                    grid.boundary_dist(verts[j]) as i64
                } else {
                    1 << 30
                }
            }
            for (a, b) in matching::min_weight_pairing(2 * n, d) {
                match (a < n, b < n) {
                    (true, true) => pairs.push((verts[a], Some(verts[b]))),
                    (true, false) => pairs.push((verts[a], None)),
                    (false, true) => pairs.push((verts[b], None)),
                    (false, false) => {}
                }
            }
        }
    }
    let mut paths = Vec::with_capacity(pairs.len());
    let mut total_weight = 0;
    for &(a, b) in &pairs {
        let path = match b {
            Some(b) => grid.path(a, b),
            None => grid.boundary_path(a),
        };
        total_weight += path.len() as u64;
        paths.push(path);
    }
    Ok(Matching { l: syndrome.l, boundary: syndrome.boundary, pairs, paths, total_weight })
}

/// Outcome of one decoded trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialResult {
    /// No residual winding: the correction restored the logical state.
    pub success: bool,
    /// Odd residual winding around the horizontal cycle of the torus. Open
    /// geometry reports the single top-to-bottom crossing parity here.
    pub wind_x: bool,
    /// Odd residual winding around the vertical cycle (torus only).
    pub wind_y: bool,
}

/// Applies the correction to the error pattern and classifies the residual
/// homology: success exactly when both winding parities are even.
pub fn logical_check(errors: &ErrorPattern, matching: &Matching) -> Result<TrialResult, QecError> {
    if errors.l != matching.l || errors.boundary != matching.boundary {
        return Err(QecError::GeometryMismatch);
    }
    let grid = errors.grid();
    let l = grid.l;
    let mut residual = errors.flipped.clone();
    for path in &matching.paths {
        for &e in path {
            residual[e] ^= true;
        }
    }
    for r in 0..l {
        for c in 0..l {
            if grid.vertex_parity(&residual, r, c) {
                return Err(QecError::ResidualSyndrome);
            }
        }
    }
    let (wind_x, wind_y) = match errors.boundary {
        Boundary::Torus => {
            let wx = (0..l).filter(|&r| residual[grid.horizontal(r, l - 1)]).count() % 2 == 1;
            let wy = (0..l).filter(|&c| residual[grid.vertical(l - 1, c)]).count() % 2 == 1;
            (wx, wy)
        }
        Boundary::Open => {
            // A residual cycle class is nontrivial exactly when it carries a
            // top-to-bottom chain; count crossings of one interior cut.
            let cut = l / 2 - 1;
            let wx = (0..l).filter(|&c| residual[grid.vertical(cut, c)]).count() % 2 == 1;
            (wx, false)
        }
    };
    Ok(TrialResult { success: !wind_x && !wind_y, wind_x, wind_y })
}

/// Samples, extracts, decodes, and checks one trial.
pub fn run_trial<R: Rng>(
    l: u32,
    p: f64,
    boundary: Boundary,
    rng: &mut R,
) -> Result<TrialResult, QecError> {
    let errors = sample_errors_in(l, p, boundary, rng)?;
    let syndrome = extract_syndromes(&errors);
    let matching = decode_mwpm(&syndrome)?;
    logical_check(&errors, &matching)
}

/// Monte Carlo failure-rate estimate at one (L, p) point.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct FailureEstimate {
    pub l: u32,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    pub stderr: f64,
}

fn failure_rate_with(l: u32, p: f64, trials: u64, seed: u64, purpose: u64) -> FailureEstimate {
    let failures = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = mc::trial_rng_for(seed, t, purpose);
            let result = run_trial(l, p, Boundary::Torus, &mut rng)
                .expect("parameters were validated before the sweep");
            (!result.success) as u64
        })
        .sum();
    let est = mc::BinomialEstimate { successes: failures, trials };
    FailureEstimate {
        l,
        p,
        trials,
        failures,
        failure_rate: est.p_hat(),
        stderr: est.stderr(),
    }
}

/// Logical failure rate on the L x L torus from independent decoded trials.
pub fn logical_error_rate(l: u32, p: f64, trials: u64, seed: u64) -> Result<FailureEstimate, QecError> {
    check_size(l)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(QecError::BadRate { p });
    }
    if trials == 0 {
        return Err(QecError::BadScan { need: "at least one trial", got: "0".into() });
    }
    Ok(failure_rate_with(l, p, trials, seed, 0))
}

/// Failure-rate curve of one lattice size over the scanned error rates.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct FailureCurve {
    pub l: u32,
    pub points: Vec<FailureEstimate>,
}

/// Crossing-point threshold estimate with the per-size curves behind it.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct QecThreshold {
    /// Crossing of the failure-rate curves of the two largest sizes.
    pub p_c: f64,
    /// Half the grid gap bracketing the crossing.
    pub uncertainty: f64,
    pub curves: Vec<FailureCurve>,
}

/// Scans failure-rate curves over `p_grid` for each size and locates the
/// threshold as the crossing of the two largest sizes: below threshold the
/// larger lattice fails less, above it more, so their difference changes
/// sign exactly once on a grid spanning the transition.
pub fn threshold_estimate(
    sizes: &[u32],
    p_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<QecThreshold, QecError> {
    if sizes.len() < 2 {
        return Err(QecError::BadScan { need: "at least two sizes", got: format!("{}", sizes.len()) });
    }
    if p_grid.len() < 2 || p_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(QecError::BadScan {
            need: "an ascending grid of at least two error rates",
            got: format!("{} points", p_grid.len()),
        });
    }
    if sizes.len() > 64 || p_grid.len() > 256 {
        return Err(QecError::BadScan {
            need: "at most 64 sizes and 256 grid points",
            got: format!("{} sizes, {} points", sizes.len(), p_grid.len()),
        });
    }
    if trials == 0 {
        return Err(QecError::BadScan { need: "at least one trial", got: "0".into() });
    }
    for &l in sizes {
        check_size(l)?;
    }
    for &p in p_grid {
        if !(0.0..=1.0).contains(&p) {
            return Err(QecError::BadRate { p });
        }
    }
    let mut sorted: Vec<u32> = sizes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    // One purpose stream per (size, rate) cell so the whole scan replays
    // from a single master seed.
    let cell = |si: usize, pi: usize| 0x4000 | ((si as u64) << 8) | pi as u64;
    let curves: Vec<FailureCurve> = sorted
        .iter()
        .enumerate()
        .map(|(si, &l)| FailureCurve {
            l,
            points: p_grid
                .iter()
                .enumerate()
                .map(|(pi, &p)| failure_rate_with(l, p, trials, seed, cell(si, pi)))
                .collect(),
        })
        .collect();

    let small = &curves[curves.len() - 2].points;
    let large = &curves[curves.len() - 1].points;
    let diff: Vec<f64> = small
        .iter()
        .zip(large.iter())
        .map(|(s, l)| l.failure_rate - s.failure_rate)
        .collect();
    let mut found = None;
    for i in 0..diff.len() - 1 {
        if diff[i] <= 0.0 && diff[i + 1] > 0.0 {
            found = Some(i);
            break;
        }
    }
    let i = found.ok_or(QecError::NoCrossing)?;
    let (p0, p1) = (p_grid[i], p_grid[i + 1]);
    let (d0, d1) = (diff[i], diff[i + 1]);
    let p_c = if d1 == d0 { (p0 + p1) / 2.0 } else { p0 + (p1 - p0) * (-d0) / (d1 - d0) };
    Ok(QecThreshold { p_c, uncertainty: (p1 - p0) / 2.0, curves })
}

/// Runs one shot of the giant-GHZ bit-flip protocol on a square torus of
/// bit-flip-only links: every link that flips its qubit inverts the parity
/// checks around it, which is exactly an independent defect on the dual link
/// crossing it. The trial therefore samples defects at each link's eps_b,
/// then decodes as usual; success means the surviving long-distance pair
/// parity is correct.
pub fn ghz_bitflip_pipeline<R: Rng>(net: &Network, rng: &mut R) -> Result<TrialResult, QecError> {
    let l = match *net.topology() {
        Topology::SquareTorus { l } => l,
        ref other => {
            return Err(QecError::BadNetwork {
                reason: format!("need a square torus, got {}", other.as_str()),
            })
        }
    };
    check_size(l)?;
    let positions = net.positions().expect("square lattices always carry positions");
    let ll = l as usize;
    let grid = Grid { l: ll, boundary: Boundary::Torus };
    let mut flipped = vec![false; grid.n_edges()];
    let mut covered = vec![false; grid.n_edges()];
    let mut eps_sum = 0.0;
    for (k, edge) in net.edges().iter().enumerate() {
        let eps_b = match &edge.payload {
            Payload::BitPhase(bp) if bp.eps_p() == 0.0 => bp.eps_b(),
            Payload::BitPhase(bp) => return Err(QecError::PhaseErrors { eps_p: bp.eps_p() }),
            other => {
                return Err(QecError::BadNetwork {
                    reason: format!("need bitphase payloads, got {}", other.kind()),
                })
            }
        };
        if edge.multiplicity != 1 {
            return Err(QecError::BadNetwork {
                reason: format!("need single links, got multiplicity {}", edge.multiplicity),
            });
        }
        // Positions are in half-step units; each link is crossed by exactly
        // one dual link, which inherits the defect probability.
        let x = (positions[edge.u][0] / 2) as usize;
        let y = (positions[edge.u][1] / 2) as usize;
        let disp = net.edge_displacement(k).expect("positions exist");
        let dual = match (disp[0], disp[1]) {
            (2, 0) => grid.vertical((y + ll - 1) % ll, x),
            (-2, 0) => grid.vertical((y + ll - 1) % ll, (x + ll - 1) % ll),
            (0, 2) => grid.horizontal(y, (x + ll - 1) % ll),
            (0, -2) => grid.horizontal((y + ll - 1) % ll, (x + ll - 1) % ll),
            _ => {
                return Err(QecError::BadNetwork {
                    reason: format!("edge {k} is not a unit lattice link"),
                })
            }
        };
        debug_assert!(!covered[dual], "each link crosses a distinct dual link");
        covered[dual] = true;
        eps_sum += eps_b;
        flipped[dual] = rng.gen::<f64>() < eps_b;
    }
    debug_assert!(covered.iter().all(|&c| c), "link to dual-link map must be onto");
    let errors = ErrorPattern {
        l,
        boundary: Boundary::Torus,
        p: eps_sum / net.edges().len() as f64,
        flipped,
    };
    let syndrome = extract_syndromes(&errors);
    let matching = decode_mwpm(&syndrome)?;
    logical_check(&errors, &matching)
}
