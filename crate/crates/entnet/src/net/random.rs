//! Random graph constructors. All take the RNG by reference so callers
//! control seeding; the same seed always yields the same edge list.

use super::{NetError, Network, Payload, Topology};
use rand::Rng;
use std::collections::HashSet;

/// Erdos-Renyi G(n, p). Pair enumeration skips ahead geometrically, so the
/// cost is proportional to the number of edges rather than n^2.
pub fn gen_er<R: Rng>(
    n: usize,
    p: f64,
    payload: Payload,
    rng: &mut R,
) -> Result<Network, NetError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(NetError::Unsupported {
            op: "gen_er",
            reason: format!("edge probability {p} out of [0, 1]"),
        });
    }
    let mut net = Network::new(n);
    net.topology = Topology::ErdosRenyi { n: n as u32 };
    if n < 2 || p == 0.0 {
        return Ok(net);
    }
    let lq = (1.0 - p).ln();
    if !lq.is_finite() {
        for v in 1..n {
            for u in 0..v {
                net.add_edge(u, v, 1, payload.clone())?;
            }
        }
        return Ok(net);
    }
    // Batagelj-Brandes: walk the pairs (u, v) with u < v in column order,
    // jumping over runs of absent edges with geometric skips.
    let mut v: usize = 1;
    let mut w: i64 = -1;
    loop {
        let r: f64 = rng.gen();
        w += 1 + ((1.0 - r).ln() / lq).floor() as i64;
        while w >= v as i64 {
            w -= v as i64;
            v += 1;
            if v >= n {
                return Ok(net);
            }
        }
        net.add_edge(w as usize, v, 1, payload.clone())?;
    }
}

/// Watts-Strogatz ring rewiring. `k` must be even and below `n`; each node
/// starts with k/2 clockwise neighbors and every edge's far endpoint is
/// rewired with probability `p_rewire`, avoiding self loops and duplicates.
pub fn gen_ws<R: Rng>(
    n: usize,
    k: u32,
    p_rewire: f64,
    payload: Payload,
    rng: &mut R,
) -> Result<Network, NetError> {
    if k == 0 || !k.is_multiple_of(2) || (k as usize) >= n {
        return Err(NetError::Unsupported {
            op: "gen_ws",
            reason: format!("mean degree {k} must be even, positive and below n = {n}"),
        });
    }
    if !(0.0..=1.0).contains(&p_rewire) {
        return Err(NetError::Unsupported {
            op: "gen_ws",
            reason: format!("rewiring probability {p_rewire} out of [0, 1]"),
        });
    }
    let half = (k / 2) as usize;
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n * half);
    let mut present: HashSet<(usize, usize)> = HashSet::with_capacity(n * half);
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    for i in 0..n {
        for j in 1..=half {
            let far = (i + j) % n;
            pairs.push((i, far));
            present.insert(key(i, far));
        }
    }
    for pair in pairs.iter_mut() {
        if rng.gen::<f64>() >= p_rewire {
            continue;
        }
        let (near, far) = *pair;
        // A node wired to everyone has nowhere to rewire; leave it alone.
        let mut target = None;
        for _ in 0..64 {
            let cand = rng.gen_range(0..n);
            if cand != near && !present.contains(&key(near, cand)) {
                target = Some(cand);
                break;
            }
        }
        if let Some(t) = target {
            present.remove(&key(near, far));
            present.insert(key(near, t));
            *pair = (near, t);
        }
    }
    let mut net = Network::new(n);
    net.topology = Topology::WattsStrogatz {
        n: n as u32,
        k,
    };
    for (u, v) in pairs {
        net.add_edge(u, v, 1, payload.clone())?;
    }
    Ok(net)
}

/// Barabasi-Albert preferential attachment: a complete seed on m+1 nodes,
/// then each new node attaches to m distinct targets drawn with probability
/// proportional to degree.
pub fn gen_ba<R: Rng>(
    n: usize,
    m: u32,
    payload: Payload,
    rng: &mut R,
) -> Result<Network, NetError> {
    let mm = m as usize;
    if mm == 0 || n < mm + 1 {
        return Err(NetError::Unsupported {
            op: "gen_ba",
            reason: format!("need m >= 1 and n >= m + 1, got n = {n}, m = {m}"),
        });
    }
    let mut net = Network::new(n);
    net.topology = Topology::BarabasiAlbert {
        n: n as u32,
        m,
    };
    // Urn of edge endpoints; sampling it uniformly is degree-proportional.
    let mut urn: Vec<usize> = Vec::with_capacity(2 * mm * n);
    for v in 1..=mm {
        for u in 0..v {
            net.add_edge(u, v, 1, payload.clone())?;
            urn.extend([u, v]);
        }
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(mm);
    for v in (mm + 1)..n {
        chosen.clear();
        while chosen.len() < mm {
            let t = urn[rng.gen_range(0..urn.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            net.add_edge(t, v, 1, payload.clone())?;
            urn.extend([t, v]);
        }
    }
    Ok(net)
}
