//! Quantum preprocessing of random networks: the q-swap threshold shift.
//!
//! On Erdos-Renyi double-bond networks, swapping out selected degree-k nodes
//! replaces their star with a cycle over the neighbors. The replacement
//! trades two conversion chances per contact for longer-range links and
//! shifts the entanglement value at which a giant connected component
//! appears. The protocol visits nodes in a degree-ordered (or breadth-first)
//! sweep and never swaps two adjacent nodes.

use entnet::net::SwapStrategy;
use entnet::perc::q_swap_threshold;

fn main() {
    let n = 2_000;
    let mean_degree = 4.0;
    let trials = 60;
    let seed = 17;
    let tol = 2e-3;

    println!("Erdos-Renyi, N = {n}, <k> = {mean_degree}, {trials} trials per bisection point");
    for (name, strategy) in [
        ("never (control)", SwapStrategy::Never),
        ("always", SwapStrategy::Always),
        ("breadth-first", SwapStrategy::BreadthFirst),
    ] {
        let th = q_swap_threshold(n, mean_degree, strategy, trials, seed, tol).unwrap();
        println!(
            "  {name:<16} baseline E_c = {:.4}, swapped E_c = {:.4}, reduction = {:+.1}%",
            th.baseline,
            th.swapped,
            100.0 * th.relative_reduction
        );
    }
    println!("\n(larger N sharpens the transition; the reduction grows toward its");
    println!(" sparse-graph limit of a few percent at this mean degree)");
}
