//! Regular lattice constructors and combinatorial duals.
//!
//! All torus lattices index nodes cell by cell with x fastest, and lay edges
//! in a fixed per-cell order, so edge indices are stable and the dual maps
//! below can be written down explicitly. Positions use per-family integer
//! scales chosen so that dual positions stay integral:
//! square 2, triangular and honeycomb 6, square-octagon 4, cubic 2.

use super::{NetError, Network, Payload, Topology};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Torus,
}

fn check_min_size(op: &'static str, l: u32, min: u32) -> Result<(), NetError> {
    if l < min {
        return Err(NetError::Unsupported {
            op,
            reason: format!("side length {l} is below the minimum {min}"),
        });
    }
    Ok(())
}

/// L x L square lattice. Open boundaries give L^2 nodes and 2L(L-1) edges;
/// the torus keeps wrap edges for 2L^2 total.
pub fn gen_square(l: u32, boundary: Boundary, payload: Payload) -> Result<Network, NetError> {
    check_min_size("gen_square", l, 2)?;
    let ll = l as usize;
    let mut net = Network::new(ll * ll);
    let idx = |x: usize, y: usize| y * ll + x;
    match boundary {
        Boundary::Open => {
            net.topology = Topology::SquareOpen { l };
            for y in 0..ll {
                for x in 0..ll {
                    if x + 1 < ll {
                        net.add_edge(idx(x, y), idx(x + 1, y), 1, payload.clone())?;
                    }
                    if y + 1 < ll {
                        net.add_edge(idx(x, y), idx(x, y + 1), 1, payload.clone())?;
                    }
                }
            }
        }
        Boundary::Torus => {
            net.topology = Topology::SquareTorus { l };
            for y in 0..ll {
                for x in 0..ll {
                    net.add_edge(idx(x, y), idx((x + 1) % ll, y), 1, payload.clone())?;
                    net.add_edge(idx(x, y), idx(x, (y + 1) % ll), 1, payload.clone())?;
                }
            }
            net.period = Some([2 * l as i64, 2 * l as i64, 0]);
        }
    }
    let mut pos = vec![[0i64; 3]; ll * ll];
    for y in 0..ll {
        for x in 0..ll {
            pos[idx(x, y)] = [2 * x as i64, 2 * y as i64, 0];
        }
    }
    net.positions = Some(pos);
    Ok(net)
}

/// L x L triangular torus: square grid plus one diagonal per cell, degree 6.
pub fn gen_triangular(l: u32, payload: Payload) -> Result<Network, NetError> {
    check_min_size("gen_triangular", l, 2)?;
    let ll = l as usize;
    let mut net = Network::new(ll * ll);
    net.topology = Topology::TriangularTorus { l };
    let idx = |x: usize, y: usize| y * ll + x;
    for y in 0..ll {
        for x in 0..ll {
            let xr = (x + 1) % ll;
            let yu = (y + 1) % ll;
            net.add_edge(idx(x, y), idx(xr, y), 1, payload.clone())?;
            net.add_edge(idx(x, y), idx(x, yu), 1, payload.clone())?;
            net.add_edge(idx(x, y), idx(xr, yu), 1, payload.clone())?;
        }
    }
    let mut pos = vec![[0i64; 3]; ll * ll];
    for y in 0..ll {
        for x in 0..ll {
            pos[idx(x, y)] = [6 * x as i64, 6 * y as i64, 0];
        }
    }
    net.positions = Some(pos);
    net.period = Some([6 * l as i64, 6 * l as i64, 0]);
    Ok(net)
}

/// Honeycomb torus with L x L cells, two nodes per cell (2L^2 nodes, 3L^2
/// edges, degree 3). The layout matches `dual(gen_triangular(l))` exactly.
pub fn gen_honeycomb(l: u32, payload: Payload) -> Result<Network, NetError> {
    check_min_size("gen_honeycomb", l, 2)?;
    let ll = l as usize;
    let mut net = Network::new(2 * ll * ll);
    net.topology = Topology::HoneycombTorus { l };
    let d = |x: usize, y: usize| 2 * (y * ll + x);
    let u = |x: usize, y: usize| 2 * (y * ll + x) + 1;
    for y in 0..ll {
        for x in 0..ll {
            let yd = (y + ll - 1) % ll;
            let xl = (x + ll - 1) % ll;
            net.add_edge(u(x, y), d(x, y), 1, payload.clone())?;
            net.add_edge(u(x, y), d(x, yd), 1, payload.clone())?;
            net.add_edge(d(x, y), u(xl, y), 1, payload.clone())?;
        }
    }
    let mut pos = vec![[0i64; 3]; 2 * ll * ll];
    for y in 0..ll {
        for x in 0..ll {
            pos[d(x, y)] = [6 * x as i64 + 2, 6 * y as i64 + 4, 0];
            pos[u(x, y)] = [6 * x as i64 + 4, 6 * y as i64 + 2, 0];
        }
    }
    net.positions = Some(pos);
    net.period = Some([6 * l as i64, 6 * l as i64, 0]);
    Ok(net)
}

/// L x L x L simple cubic torus: 3L^3 edges, degree 6.
pub fn gen_cubic(l: u32, payload: Payload) -> Result<Network, NetError> {
    check_min_size("gen_cubic", l, 2)?;
    let ll = l as usize;
    let mut net = Network::new(ll * ll * ll);
    net.topology = Topology::CubicTorus { l };
    let idx = |x: usize, y: usize, z: usize| (z * ll + y) * ll + x;
    for z in 0..ll {
        for y in 0..ll {
            for x in 0..ll {
                net.add_edge(idx(x, y, z), idx((x + 1) % ll, y, z), 1, payload.clone())?;
                net.add_edge(idx(x, y, z), idx(x, (y + 1) % ll, z), 1, payload.clone())?;
                net.add_edge(idx(x, y, z), idx(x, y, (z + 1) % ll), 1, payload.clone())?;
            }
        }
    }
    let mut pos = vec![[0i64; 3]; ll * ll * ll];
    for z in 0..ll {
        for y in 0..ll {
            for x in 0..ll {
                pos[idx(x, y, z)] = [2 * x as i64, 2 * y as i64, 2 * z as i64];
            }
        }
    }
    net.positions = Some(pos);
    net.period = Some([2 * l as i64, 2 * l as i64, 2 * l as i64]);
    Ok(net)
}

/// Square-octagon torus with L x L cells of four nodes each (degree 3,
/// 6L^2 edges): a small diamond per cell bridged to its neighbors. Marks the
/// GHZ generator nodes used by the site-lattice transformation: within each
/// cell the diamond's north, east and south nodes each fuse a fixed pair of
/// their incident links.
pub fn gen_square_octagon(l: u32, payload: Payload) -> Result<Network, NetError> {
    check_min_size("gen_square_octagon", l, 2)?;
    let ll = l as usize;
    let mut net = Network::new(4 * ll * ll);
    net.topology = Topology::SquareOctagonTorus { l };
    // Sub-indices within a cell: 0 north, 1 east, 2 south, 3 west.
    let node = |i: usize, j: usize, sub: usize| 4 * (j * ll + i) + sub;
    for j in 0..ll {
        for i in 0..ll {
            let (n, e, s, w) = (node(i, j, 0), node(i, j, 1), node(i, j, 2), node(i, j, 3));
            net.add_edge(n, e, 1, payload.clone())?;
            net.add_edge(e, s, 1, payload.clone())?;
            net.add_edge(s, w, 1, payload.clone())?;
            net.add_edge(w, n, 1, payload.clone())?;
            net.add_edge(n, node(i, (j + 1) % ll, 2), 1, payload.clone())?;
            net.add_edge(e, node((i + 1) % ll, j, 3), 1, payload.clone())?;
        }
    }
    let mut pos = vec![[0i64; 3]; 4 * ll * ll];
    let mut generators = Vec::with_capacity(3 * ll * ll);
    for j in 0..ll {
        for i in 0..ll {
            let (bx, by) = (4 * i as i64, 4 * j as i64);
            pos[node(i, j, 0)] = [bx + 1, by + 2, 0];
            pos[node(i, j, 1)] = [bx + 2, by + 1, 0];
            pos[node(i, j, 2)] = [bx + 1, by, 0];
            pos[node(i, j, 3)] = [bx, by + 1, 0];
            generators.extend([node(i, j, 0), node(i, j, 1), node(i, j, 2)]);
        }
    }
    net.positions = Some(pos);
    net.period = Some([4 * l as i64, 4 * l as i64, 0]);
    net.generators = generators;
    Ok(net)
}

/// Dual of a supported torus lattice: one dual node per primal face, one dual
/// edge crossing each primal edge. `primal_edge[k]` is the primal edge that
/// dual edge `k` crosses; each dual edge inherits the crossed edge's payload
/// and multiplicity.
#[derive(Clone, Debug)]
pub struct DualLattice {
    pub network: Network,
    pub primal_edge: Vec<usize>,
}

/// Builds the dual. Supported: square torus (self-dual), triangular torus
/// (dual is the honeycomb) and honeycomb torus (dual is the triangular
/// lattice). Assumes the constructor layouts from this module; applying dual
/// twice returns the original lattice with the identity edge mapping.
pub fn dual(net: &Network) -> Result<DualLattice, NetError> {
    match net.topology {
        Topology::SquareTorus { l } => dual_square(net, l),
        Topology::TriangularTorus { l } => dual_triangular(net, l),
        Topology::HoneycombTorus { l } => dual_honeycomb(net, l),
        ref other => Err(NetError::Unsupported {
            op: "dual",
            reason: format!("no dual construction for topology {}", other.as_str()),
        }),
    }
}

fn dual_square(net: &Network, l: u32) -> Result<DualLattice, NetError> {
    let ll = l as usize;
    if net.edges().len() != 2 * ll * ll {
        return Err(NetError::Unsupported {
            op: "dual",
            reason: "square torus does not have the constructor edge layout".to_string(),
        });
    }
    // The primal sits on even or odd positions; its faces sit on the other
    // parity. The two cases use shifted face indexings chosen so that the
    // composition of both is the identity on edges.
    let odd_primal = net
        .positions()
        .map(|p| p[0][0].rem_euclid(2) == 1)
        .unwrap_or(false);
    let mut out = Network::new(ll * ll);
    out.topology = Topology::SquareTorus { l };
    let idx = |x: usize, y: usize| y * ll + x;
    let h = |x: usize, y: usize| 2 * idx(x, y);
    let v = |x: usize, y: usize| 2 * idx(x, y) + 1;
    let mut primal_edge = Vec::with_capacity(2 * ll * ll);
    for y in 0..ll {
        for x in 0..ll {
            let xr = (x + 1) % ll;
            let yu = (y + 1) % ll;
            out.add_edge(idx(x, y), idx(xr, y), 1, Payload::Absent)?;
            out.add_edge(idx(x, y), idx(x, yu), 1, Payload::Absent)?;
            if odd_primal {
                // Faces of the odd lattice indexed by their center (2x, 2y).
                primal_edge.push(v(x, (y + ll - 1) % ll));
                primal_edge.push(h((x + ll - 1) % ll, y));
            } else {
                // Faces indexed by their lower-left primal corner.
                primal_edge.push(v(xr, y));
                primal_edge.push(h(x, yu));
            }
        }
    }
    let offset = if odd_primal { 0 } else { 1 };
    finish_dual(net, out, primal_edge, |k| {
        let (x, y) = ((k % ll) as i64, (k / ll) as i64);
        [2 * x + offset, 2 * y + offset, 0]
    })
}

fn dual_triangular(net: &Network, l: u32) -> Result<DualLattice, NetError> {
    let ll = l as usize;
    if net.edges().len() != 3 * ll * ll {
        return Err(NetError::Unsupported {
            op: "dual",
            reason: "triangular torus does not have the constructor edge layout".to_string(),
        });
    }
    // Faces are the up and down triangles of each cell; they form the
    // honeycomb in exactly the gen_honeycomb layout, so build that and remap
    // payloads onto the crossed edges.
    let mut out = Network::new(2 * ll * ll);
    out.topology = Topology::HoneycombTorus { l };
    let d = |x: usize, y: usize| 2 * (y * ll + x);
    let u = |x: usize, y: usize| 2 * (y * ll + x) + 1;
    let cell = |x: usize, y: usize| 3 * (y * ll + x);
    let mut primal_edge = Vec::with_capacity(3 * ll * ll);
    for y in 0..ll {
        for x in 0..ll {
            let yd = (y + ll - 1) % ll;
            let xl = (x + ll - 1) % ll;
            out.add_edge(u(x, y), d(x, y), 1, Payload::Absent)?;
            out.add_edge(u(x, y), d(x, yd), 1, Payload::Absent)?;
            out.add_edge(d(x, y), u(xl, y), 1, Payload::Absent)?;
            primal_edge.push(cell(x, y) + 2);
            primal_edge.push(cell(x, y));
            primal_edge.push(cell(x, y) + 1);
        }
    }
    finish_dual(net, out, primal_edge, |k| {
        let (x, y) = (((k / 2) % ll) as i64, ((k / 2) / ll) as i64);
        if k % 2 == 0 {
            [6 * x + 2, 6 * y + 4, 0]
        } else {
            [6 * x + 4, 6 * y + 2, 0]
        }
    })
}

fn dual_honeycomb(net: &Network, l: u32) -> Result<DualLattice, NetError> {
    let ll = l as usize;
    if net.edges().len() != 3 * ll * ll {
        return Err(NetError::Unsupported {
            op: "dual",
            reason: "honeycomb torus does not have the constructor edge layout".to_string(),
        });
    }
    // Faces are hexagons, one per cell, giving back the triangular lattice.
    // The crossings invert the triangular-to-honeycomb map so that the double
    // dual is the identity.
    let mut out = Network::new(ll * ll);
    out.topology = Topology::TriangularTorus { l };
    let idx = |x: usize, y: usize| y * ll + x;
    let cell = |x: usize, y: usize| 3 * (y * ll + x);
    let mut primal_edge = Vec::with_capacity(3 * ll * ll);
    for y in 0..ll {
        for x in 0..ll {
            let xr = (x + 1) % ll;
            let yu = (y + 1) % ll;
            out.add_edge(idx(x, y), idx(xr, y), 1, Payload::Absent)?;
            out.add_edge(idx(x, y), idx(x, yu), 1, Payload::Absent)?;
            out.add_edge(idx(x, y), idx(xr, yu), 1, Payload::Absent)?;
            primal_edge.push(cell(x, y) + 1);
            primal_edge.push(cell(x, y) + 2);
            primal_edge.push(cell(x, y));
        }
    }
    finish_dual(net, out, primal_edge, |k| {
        let (x, y) = ((k % ll) as i64, (k / ll) as i64);
        [6 * x, 6 * y, 0]
    })
}

fn finish_dual(
    primal: &Network,
    mut out: Network,
    primal_edge: Vec<usize>,
    pos_of: impl Fn(usize) -> [i64; 3],
) -> Result<DualLattice, NetError> {
    debug_assert_eq!(out.edges().len(), primal_edge.len());
    debug_assert_eq!(out.edges().len(), primal.edges().len());
    for (k, &pe) in primal_edge.iter().enumerate() {
        let src = &primal.edges()[pe];
        out.edges[k].payload = src.payload.clone();
        out.edges[k].multiplicity = src.multiplicity;
    }
    out.positions = Some((0..out.node_count()).map(pos_of).collect());
    out.period = primal.period();
    Ok(DualLattice {
        network: out,
        primal_edge,
    })
}
