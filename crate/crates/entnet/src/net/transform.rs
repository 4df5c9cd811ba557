//! Network transformations that consume entangled bonds through swapping.

use super::{Edge, NetError, Network, Payload, Topology};
use crate::state::{sample_swap_pure_bell, swap_pure_bell, swap_pure_bx, PureLink};
use rand::Rng;
use std::collections::VecDeque;

/// Pulls the pure link out of a double-bond edge, or explains why it cannot.
fn double_bond_phi(edge: &Edge, op: &'static str) -> Result<PureLink, NetError> {
    if edge.multiplicity != 2 {
        return Err(NetError::Unsupported {
            op,
            reason: format!(
                "edge {}-{} has multiplicity {}, expected double bonds",
                edge.u, edge.v, edge.multiplicity
            ),
        });
    }
    edge.payload.as_pure().ok_or_else(|| NetError::Unsupported {
        op,
        reason: format!(
            "edge {}-{} carries a {} payload, expected a pure link",
            edge.u,
            edge.v,
            edge.payload.kind()
        ),
    })
}

/// Core of the honeycomb contraction. One sublattice of the double-bond
/// honeycomb is measured out: each removed node carries three double bonds,
/// and three swaps pair one link from each bond with one link from the next,
/// leaving a triangle among the three neighbors. Over all removed nodes the
/// kept sublattice becomes the triangular torus. `make` builds the payload of
/// each new edge from the two parent links and is called in the canonical
/// triangular edge order.
fn contract_honeycomb<F>(net: &Network, op: &'static str, mut make: F) -> Result<Network, NetError>
where
    F: FnMut(PureLink, PureLink) -> Payload,
{
    let l = match net.topology {
        Topology::HoneycombTorus { l } => l as usize,
        ref other => {
            return Err(NetError::Unsupported {
                op,
                reason: format!("expected a honeycomb torus, got {}", other.as_str()),
            })
        }
    };
    if net.edges().len() != 3 * l * l {
        return Err(NetError::Unsupported {
            op,
            reason: "honeycomb does not have the constructor edge layout".to_string(),
        });
    }
    let phi = |x: usize, y: usize, t: usize| -> Result<PureLink, NetError> {
        double_bond_phi(&net.edges()[3 * (y * l + x) + t], op)
    };
    let mut out = Network::new(l * l);
    out.topology = Topology::TriangularTorus { l: l as u32 };
    let idx = |x: usize, y: usize| y * l + x;
    for y in 0..l {
        for x in 0..l {
            let xr = (x + 1) % l;
            let yu = (y + 1) % l;
            // The removed node of cell (x, y) has bonds t=0 to its own cell's
            // kept node, t=1 to the cell below, and the next cell's t=2 bond
            // to the cell on its right. Its three swaps contribute the a-edge
            // of this cell and the b- and c-edges of the cell below, so the
            // canonical (a, b, c) order here draws on the removed nodes of
            // (x, y) and (x, y+1).
            let a = make(phi(xr, y, 2)?, phi(x, y, 0)?);
            out.add_edge(idx(x, y), idx(xr, y), 1, a)?;
            let b = make(phi(x, yu, 0)?, phi(x, yu, 1)?);
            out.add_edge(idx(x, y), idx(x, yu), 1, b)?;
            let c = make(phi(x, yu, 1)?, phi(xr, yu, 2)?);
            out.add_edge(idx(x, y), idx(xr, yu), 1, c)?;
        }
    }
    let mut pos = vec![[0i64; 3]; l * l];
    for y in 0..l {
        for x in 0..l {
            pos[idx(x, y)] = [6 * x as i64, 6 * y as i64, 0];
        }
    }
    out.positions = Some(pos);
    out.period = Some([6 * l as i64, 6 * l as i64, 0]);
    Ok(out)
}

/// Contracts a double-bond honeycomb torus to the triangular torus by
/// measuring out one sublattice with Bell-basis swaps. Each new edge records
/// the full four-outcome swap distribution; outcomes on different edges are
/// independent because every swap consumes its own pair of links.
pub fn honeycomb_to_triangular(net: &Network) -> Result<Network, NetError> {
    contract_honeycomb(net, "honeycomb_to_triangular", |a, b| {
        Payload::SwapOutcomes(swap_pure_bell(a, b))
    })
}

/// As [`honeycomb_to_triangular`], but samples one concrete outcome per new
/// edge. Edges consume randomness in the canonical triangular edge order.
pub fn honeycomb_to_triangular_sampled<R: Rng>(
    net: &Network,
    rng: &mut R,
) -> Result<Network, NetError> {
    contract_honeycomb(net, "honeycomb_to_triangular_sampled", |a, b| {
        Payload::Pure(sample_swap_pure_bell(a, b, rng))
    })
}

/// Deterministic variant swapping in the rotated Bell basis, which always
/// yields the concurrence product instead of a distribution over outcomes.
pub fn honeycomb_to_triangular_bx(net: &Network) -> Result<Network, NetError> {
    contract_honeycomb(net, "honeycomb_to_triangular_bx", |a, b| {
        Payload::Pure(swap_pure_bx(a, b))
    })
}

/// Grows the lattice of GHZ states over the square-octagon source: every
/// marked generator fuses two of its links into one GHZ on three nodes, and
/// two GHZ states are adjacent when they share a source node. With the
/// canonical generator pattern each source cell yields three GHZ sites and
/// six adjacencies, a 4-regular site lattice. Edges carry no state; the
/// occupation probability of a site is supplied by the percolation layer.
pub fn ghz_site_lattice(net: &Network) -> Result<Network, NetError> {
    let l = match net.topology {
        Topology::SquareOctagonTorus { l } => l as usize,
        ref other => {
            return Err(NetError::Unsupported {
                op: "ghz_site_lattice",
                reason: format!("expected the square-octagon source, got {}", other.as_str()),
            })
        }
    };
    if net.generators().is_empty() {
        return Err(NetError::Unsupported {
            op: "ghz_site_lattice",
            reason: "source lattice has no designated generator nodes".to_string(),
        });
    }
    let mut out = Network::new(3 * l * l);
    out.topology = Topology::GhzSite { l: l as u32 };
    // Per cell: site 0 from the north generator (fusing the west diamond edge
    // and the north bridge), site 1 from the east generator (north diamond
    // edge and east bridge), site 2 from the south generator (both south
    // diamond edges). Shared source nodes then give three in-cell
    // adjacencies, two through the west node of the next cell and one
    // through the south node above.
    let site = |i: usize, j: usize, s: usize| 3 * (j * l + i) + s;
    for j in 0..l {
        for i in 0..l {
            let il = (i + l - 1) % l;
            let jd = (j + l - 1) % l;
            out.add_edge(site(i, j, 0), site(i, j, 1), 1, Payload::Absent)?;
            out.add_edge(site(i, j, 1), site(i, j, 2), 1, Payload::Absent)?;
            out.add_edge(site(i, j, 0), site(i, j, 2), 1, Payload::Absent)?;
            out.add_edge(site(i, j, 0), site(il, j, 1), 1, Payload::Absent)?;
            out.add_edge(site(i, j, 2), site(il, j, 1), 1, Payload::Absent)?;
            out.add_edge(site(i, j, 2), site(i, jd, 0), 1, Payload::Absent)?;
        }
    }
    let mut pos = vec![[0i64; 3]; 3 * l * l];
    for j in 0..l {
        for i in 0..l {
            let (bx, by) = (4 * i as i64, 4 * j as i64);
            pos[site(i, j, 0)] = [bx + 1, by + 2, 0];
            pos[site(i, j, 1)] = [bx + 2, by + 1, 0];
            pos[site(i, j, 2)] = [bx + 1, by, 0];
        }
    }
    out.positions = Some(pos);
    out.period = Some([4 * l as i64, 4 * l as i64, 0]);
    Ok(out)
}

/// Incident double bonds of `node`, as (far endpoint, link), sorted by far
/// endpoint. Errors if the node's neighborhood is not swappable.
fn star_bonds(net: &Network, node: usize, op: &'static str) -> Result<Vec<(usize, PureLink)>, NetError> {
    if node >= net.node_count() {
        return Err(NetError::NodeOutOfRange {
            node,
            n: net.node_count(),
        });
    }
    let mut bonds: Vec<(usize, PureLink)> = Vec::new();
    for edge in net.edges() {
        let far = if edge.u == node {
            edge.v
        } else if edge.v == node {
            edge.u
        } else {
            continue;
        };
        bonds.push((far, double_bond_phi(edge, op)?));
    }
    bonds.sort_by_key(|&(far, _)| far);
    if bonds.len() < 3 {
        return Err(NetError::Unsupported {
            op,
            reason: format!("node {node} has degree {}, need at least 3", bonds.len()),
        });
    }
    if bonds.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(NetError::Unsupported {
            op,
            reason: format!("node {node} has parallel double bonds, cycle would degenerate"),
        });
    }
    Ok(bonds)
}

/// The q cycle edges produced by swapping out a star, in neighbor order.
/// `make` builds each edge's payload from the two parent links.
fn cycle_edges<F>(bonds: &[(usize, PureLink)], mut make: F) -> Vec<Edge>
where
    F: FnMut(PureLink, PureLink) -> Payload,
{
    let q = bonds.len();
    (0..q)
        .map(|k| {
            let (u, a) = bonds[k];
            let (v, b) = bonds[(k + 1) % q];
            Edge {
                u: u.min(v),
                v: u.max(v),
                multiplicity: 1,
                payload: make(a, b),
            }
        })
        .collect()
}

fn q_swap_with<F>(net: &Network, node: usize, op: &'static str, make: F) -> Result<Network, NetError>
where
    F: FnMut(PureLink, PureLink) -> Payload,
{
    let bonds = star_bonds(net, node, op)?;
    let mut out = Network::new(net.node_count());
    out.topology = Topology::General;
    out.positions = net.positions.clone();
    out.period = net.period;
    out.edges = net
        .edges()
        .iter()
        .filter(|e| e.u != node && e.v != node)
        .cloned()
        .collect();
    out.edges.extend(cycle_edges(&bonds, make));
    Ok(out)
}

/// Measures out one node whose q >= 3 incident edges are double bonds of
/// pure links, joining its neighbors in a q-cycle. Each cycle edge comes
/// from one Bell-basis swap of a link from each adjacent bond and records
/// the full outcome distribution, which keeps the bond's average
/// entanglement at the parent value. The q swaps consume disjoint links, so
/// the distributions on different cycle edges are independent. The node
/// keeps its id but ends up isolated.
pub fn q_swap(net: &Network, node: usize) -> Result<Network, NetError> {
    q_swap_with(net, node, "q_swap", |a, b| {
        Payload::SwapOutcomes(swap_pure_bell(a, b))
    })
}

/// Deterministic variant of [`q_swap`] swapping in the rotated basis, so
/// every cycle edge is a single pure link carrying the concurrence product
/// of its parents.
pub fn q_swap_bx(net: &Network, node: usize) -> Result<Network, NetError> {
    q_swap_with(net, node, "q_swap_bx", |a, b| {
        Payload::Pure(swap_pure_bx(a, b))
    })
}

/// Node visiting order for [`q_swap_protocol`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapStrategy {
    /// Swap nothing; the identity protocol.
    Never,
    /// Visit nodes in id order.
    Always,
    /// Visit nodes in breadth-first order from the smallest id of each
    /// component.
    BreadthFirst,
}

/// Applies q-swaps across the whole network. Every visited node that still
/// has a swappable star (degree >= 3, double bonds, distinct neighbors) is
/// measured out as in [`q_swap`], and its neighbors become ineligible: their
/// remaining bonds now sit next to consumed ones. Returns the transformed
/// network and the swapped nodes in execution order.
pub fn q_swap_protocol(net: &Network, strategy: SwapStrategy) -> (Network, Vec<usize>) {
    let n = net.node_count();
    let order: Vec<usize> = match strategy {
        SwapStrategy::Never => Vec::new(),
        SwapStrategy::Always => (0..n).collect(),
        SwapStrategy::BreadthFirst => {
            let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
            for e in net.edges() {
                adj[e.u].push(e.v);
                adj[e.v].push(e.u);
            }
            for list in &mut adj {
                list.sort_unstable();
                list.dedup();
            }
            let mut seen = vec![false; n];
            let mut order = Vec::with_capacity(n);
            let mut queue = VecDeque::new();
            for start in 0..n {
                if seen[start] {
                    continue;
                }
                seen[start] = true;
                queue.push_back(start);
                while let Some(v) = queue.pop_front() {
                    order.push(v);
                    for &w in &adj[v] {
                        if !seen[w] {
                            seen[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
            order
        }
    };

    let mut removed = vec![false; net.edges().len()];
    let mut blocked = vec![false; n];
    let mut new_edges: Vec<Edge> = Vec::new();
    let mut swapped = Vec::new();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in net.edges().iter().enumerate() {
        incident[e.u].push(i);
        incident[e.v].push(i);
    }
    for v in order {
        if blocked[v] {
            continue;
        }
        // Gather the still-present star around v and check swappability
        // inline: failures just leave the node alone.
        let mut bonds: Vec<(usize, PureLink)> = Vec::new();
        let mut ok = true;
        for &ei in &incident[v] {
            if removed[ei] {
                continue;
            }
            let e = &net.edges()[ei];
            let far = if e.u == v { e.v } else { e.u };
            match double_bond_phi(e, "q_swap_protocol") {
                Ok(phi) => bonds.push((far, phi)),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        bonds.sort_by_key(|&(far, _)| far);
        if !ok || bonds.len() < 3 || bonds.windows(2).any(|w| w[0].0 == w[1].0) {
            continue;
        }
        for &ei in &incident[v] {
            removed[ei] = true;
        }
        for &(far, _) in &bonds {
            blocked[far] = true;
        }
        blocked[v] = true;
        new_edges.extend(cycle_edges(&bonds, |a, b| {
            Payload::SwapOutcomes(swap_pure_bell(a, b))
        }));
        swapped.push(v);
    }

    let mut out = Network::new(n);
    out.topology = if swapped.is_empty() {
        net.topology.clone()
    } else {
        Topology::General
    };
    out.positions = net.positions.clone();
    out.period = net.period;
    out.generators = net.generators.clone();
    out.edges = net
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| !removed[i])
        .map(|(_, e)| e.clone())
        .collect();
    out.edges.extend(new_edges);
    (out, swapped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::trial_rng;
    use crate::net::{gen_honeycomb, gen_square, gen_square_octagon, Boundary};
    use crate::state::average_entanglement;

    fn double_hex(l: u32, phi1: f64) -> Network {
        gen_honeycomb(l, Payload::Pure(PureLink::new(phi1).unwrap()))
            .unwrap()
            .with_multiplicity(2)
    }

    #[test]
    fn contraction_yields_triangular_torus() {
        let net = double_hex(4, 0.3);
        let tri = honeycomb_to_triangular(&net).unwrap();
        assert_eq!(tri.node_count(), 16);
        assert_eq!(tri.edges().len(), 48);
        assert_eq!(tri.degree_histogram().get(&6), Some(&16));
        assert_eq!(*tri.topology(), Topology::TriangularTorus { l: 4 });
        for e in tri.edges() {
            let Payload::SwapOutcomes(outs) = &e.payload else {
                panic!("expected swap distributions");
            };
            let total: f64 = outs.iter().map(|o| o.probability).sum();
            assert!((total - 1.0).abs() < 1e-12);
            // Both parents share phi1 = 0.3, so the average entanglement of
            // each distribution is 2 * 0.3.
            assert!((average_entanglement(outs) - 0.6).abs() < 1e-12);
        }
    }

    #[test]
    fn contraction_of_bell_bonds_gives_bell_triangular() {
        let net = double_hex(3, 0.5);
        let tri = honeycomb_to_triangular(&net).unwrap();
        for e in tri.edges() {
            let Payload::SwapOutcomes(outs) = &e.payload else {
                panic!("expected swap distributions");
            };
            for o in outs {
                assert!(o.link.is_bell());
            }
        }
        let mut rng = trial_rng(5, 0);
        let sampled = honeycomb_to_triangular_sampled(&net, &mut rng).unwrap();
        for e in sampled.edges() {
            assert_eq!(e.payload.as_pure().unwrap(), PureLink::BELL);
        }
    }

    #[test]
    fn bx_contraction_multiplies_concurrences() {
        let net = double_hex(3, 0.2);
        let c = PureLink::new(0.2).unwrap().concurrence();
        let tri = honeycomb_to_triangular_bx(&net).unwrap();
        for e in tri.edges() {
            let link = e.payload.as_pure().unwrap();
            assert!((link.concurrence() - c * c).abs() < 1e-12);
        }
    }

    #[test]
    fn contraction_rejects_wrong_input() {
        let single = gen_honeycomb(3, Payload::Pure(PureLink::new(0.3).unwrap())).unwrap();
        assert!(honeycomb_to_triangular(&single).is_err());
        let square = gen_square(3, Boundary::Torus, Payload::Bell)
            .unwrap()
            .with_multiplicity(2);
        assert!(honeycomb_to_triangular(&square).is_err());
    }

    #[test]
    fn ghz_lattice_shape() {
        let src = gen_square_octagon(4, Payload::Pure(PureLink::new(0.25).unwrap())).unwrap();
        let site = ghz_site_lattice(&src).unwrap();
        assert_eq!(site.node_count(), 48);
        assert_eq!(site.edges().len(), 96);
        assert_eq!(site.degree_histogram().get(&4), Some(&48));
        assert!(site.positions().is_some());

        let not_src = gen_square(4, Boundary::Torus, Payload::Bell).unwrap();
        assert!(ghz_site_lattice(&not_src).is_err());
    }

    #[test]
    fn q_swap_star_becomes_cycle() {
        let phi = PureLink::from_concurrence(0.8).unwrap();
        let mut net = Network::new(5);
        for far in 1..=4 {
            net.add_edge(0, far, 2, Payload::Pure(phi)).unwrap();
        }
        let out = q_swap(&net, 0).unwrap();
        assert_eq!(out.degree(0), 0);
        assert_eq!(out.edges().len(), 4);
        let mut pairs: Vec<(usize, usize)> = out.edges().iter().map(|e| (e.u, e.v)).collect();
        pairs.sort_unstable();
        assert_eq!(pairs, vec![(1, 2), (1, 4), (2, 3), (3, 4)]);
        for e in out.edges() {
            let Payload::SwapOutcomes(outs) = &e.payload else {
                panic!("expected swap distributions");
            };
            // Bell-basis swaps keep the parents' average entanglement.
            assert!((average_entanglement(outs) - phi.entanglement()).abs() < 1e-12);
            assert_eq!(e.multiplicity, 1);
        }

        let bx = q_swap_bx(&net, 0).unwrap();
        for e in bx.edges() {
            let link = e.payload.as_pure().unwrap();
            assert!((link.concurrence() - 0.64).abs() < 1e-12);
        }
    }

    #[test]
    fn q_swap_accepts_odd_stars_and_rejects_small_ones() {
        let phi = Payload::Pure(PureLink::new(0.3).unwrap());
        let mut star5 = Network::new(6);
        for far in 1..=5 {
            star5.add_edge(0, far, 2, phi.clone()).unwrap();
        }
        let out = q_swap(&star5, 0).unwrap();
        assert_eq!(out.edges().len(), 5);

        let mut star2 = Network::new(3);
        star2.add_edge(0, 1, 2, phi.clone()).unwrap();
        star2.add_edge(0, 2, 2, phi.clone()).unwrap();
        assert!(q_swap(&star2, 0).is_err());

        let mut single = Network::new(4);
        for far in 1..=3 {
            single.add_edge(0, far, 1, phi.clone()).unwrap();
        }
        assert!(q_swap(&single, 0).is_err());
    }

    #[test]
    fn protocol_respects_conflicts() {
        let phi = Payload::Pure(PureLink::new(0.3).unwrap());
        let net = gen_square(4, Boundary::Torus, phi).unwrap().with_multiplicity(2);
        let (never, swapped) = q_swap_protocol(&net, SwapStrategy::Never);
        assert_eq!(never, net);
        assert!(swapped.is_empty());

        let adjacency: std::collections::HashSet<(usize, usize)> = net
            .edges()
            .iter()
            .map(|e| (e.u, e.v))
            .collect();
        for strategy in [SwapStrategy::Always, SwapStrategy::BreadthFirst] {
            let (out, swapped) = q_swap_protocol(&net, strategy);
            assert!(!swapped.is_empty());
            // No two swapped nodes were adjacent in the original network.
            for (i, &a) in swapped.iter().enumerate() {
                for &b in &swapped[i + 1..] {
                    let key = (a.min(b), a.max(b));
                    assert!(!adjacency.contains(&key), "{a} and {b} were adjacent");
                }
            }
            // Swapped nodes are isolated, their neighbors keep double bonds.
            for &v in &swapped {
                assert_eq!(out.degree(v), 0);
            }
        }
    }
}
