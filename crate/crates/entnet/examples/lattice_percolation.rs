//! Bond percolation on the square lattice: spanning curves and thresholds.
//!
//! Sweeps the spanning probability through the transition for a few sizes,
//! then estimates the threshold from the crossing of the two largest sizes
//! and compares against the exact values for the standard lattices.

use entnet::net::{gen_square, Boundary, Payload};
use entnet::perc::{bond_threshold, exact_thresholds, percolate_bond};

fn main() {
    let sizes = [8u32, 16, 32];
    let trials = 2_000;
    let seed = 42;

    println!("spanning probability, square lattice ({trials} trials per point)");
    print!("  p     ");
    for l in sizes {
        print!("  L={l:<4}");
    }
    println!();
    let mut p = 0.40;
    while p <= 0.605 {
        print!("  {p:.3} ");
        for l in sizes {
            let net = gen_square(l, Boundary::Open, Payload::Bell).unwrap();
            let est = percolate_bond(&net, p, trials, seed);
            print!("  {:.3} ", est.spanning.p_hat());
        }
        println!();
        p += 0.025;
    }

    let est = bond_threshold(
        |l| gen_square(l, Boundary::Open, Payload::Bell).unwrap(),
        &sizes,
        trials,
        seed,
        1e-3,
    )
    .unwrap();
    println!("\ncrossing estimate: p_c = {:.4} +- {:.4} (exact 1/2)", est.p_c, est.uncertainty);
    for (l, p_half) in &est.per_size {
        println!("  L={l:<3} half-spanning at p = {p_half:.4}");
    }

    println!("\nexact bond thresholds:");
    for (name, p_c) in exact_thresholds() {
        println!("  {name:<16} {p_c:.5}");
    }
}
