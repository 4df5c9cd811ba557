//! Entanglement percolation with and without the swap preprocessing step.
//!
//! On the double-bond honeycomb lattice, classical entanglement percolation
//! (CEP) converts each pair of partially entangled links independently.
//! Quantum entanglement percolation (QEP) first swaps out half the nodes,
//! contracting the lattice to a triangular one whose effective bond
//! probability equals the full leg entanglement. Between the two thresholds
//! only QEP percolates. Werner links, by contrast, admit a one-sided no-go
//! argument with no conversion step at all.

use entnet::perc::{qep_honeycomb_compare, werner_no_go};
use entnet::net::{gen_square, Boundary, Payload};
use entnet::state::PureLink;

fn main() {
    let l = 24;
    let trials = 400;
    let seed = 7;

    println!("double-bond honeycomb, L = {l}, {trials} paired trials per point");
    println!("  E      QEP span  CEP span  z");
    for e in [0.30, 0.33, 0.352, 0.37, 0.40] {
        let phi = PureLink::from_entanglement(e).unwrap();
        let cmp = qep_honeycomb_compare(phi, l, trials, seed).unwrap();
        println!(
            "  {e:.3}  {:>8.3}  {:>8.3}  {:+.1}",
            cmp.qep.spanning_prob,
            cmp.cep.spanning_prob,
            cmp.paired_spanning.z()
        );
    }

    let phi = PureLink::from_entanglement(0.352).unwrap();
    let cmp = qep_honeycomb_compare(phi, l, trials, seed).unwrap();
    println!(
        "\nthresholds: QEP percolates down to E = {:.5}, CEP only to E = {:.5}",
        cmp.qep_threshold, cmp.cep_threshold
    );
    println!(
        "at E = 0.352 the gap is {:.1} paired standard errors",
        cmp.paired_spanning.z()
    );

    // The same game is unwinnable with Werner links below the lattice
    // threshold: no local strategy can beat bond percolation at p = x.
    let square = gen_square(8, Boundary::Open, Payload::Bell).unwrap();
    println!("\nWerner no-go on the square lattice:");
    for x in [0.40, 0.55] {
        let v = werner_no_go(&square, x).unwrap();
        println!(
            "  x = {x:.2}: no_go = {:<5} (threshold {:.2}, separable = {})",
            v.no_go,
            v.threshold.unwrap(),
            v.separable
        );
    }
}
