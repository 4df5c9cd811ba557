//! Critical parameters of the hierarchical repeater maps.
//!
//! Locates the two critical swap qualities of the pure-state hierarchy, the
//! Werner quality below which the mixed hierarchy collapses, and the critical
//! leg entanglement of the centipede chain. Also prints a short scan of the
//! mixed map's fixed-point pair so the saddle-node collision at x_c is
//! visible.

use entnet::maps::{
    centipede_critical, hierarchical_mixed_fixed_points, hierarchical_pure_criticals,
    hierarchical_pure_step, iterate_to_fixed_point, mixed_x_critical, IterationConfig,
};

fn main() {
    let crit = hierarchical_pure_criticals(1e-6);
    println!("pure hierarchy:");
    println!("  mu_c    = {:.6}  (attractor is born; exact value 1/3)", crit.mu_c);
    println!("  mu_star = {:.6}  (attractor reaches E = 1)", crit.mu_star);

    // Sample trajectory just above mu_c: slow drift into a small attractor.
    let outcome = iterate_to_fixed_point(
        |e| hierarchical_pure_step(e, crit.mu_c + 0.01),
        0.999999,
        IterationConfig::default(),
    );
    println!(
        "  at mu_c + 0.01, iteration settles at E = {:.6} after {} steps",
        outcome.fixed_point.value().unwrap(),
        outcome.iterations
    );

    let x_c = mixed_x_critical();
    println!("\nmixed hierarchy: x_c = {x_c:.9} (= sqrt(18/19))");
    println!("  x        y_c       y_star");
    for k in 0..6 {
        let x = x_c + 0.002 * k as f64;
        match hierarchical_mixed_fixed_points(x) {
            Some(fp) => println!("  {x:.5}  {:.6}  {:.6}", fp.y_c, fp.y_star),
            None => println!("  {x:.5}  (no nontrivial fixed points)"),
        }
    }
    assert!(hierarchical_mixed_fixed_points(x_c - 1e-6).is_none());

    let e_c = centipede_critical(1e-6);
    println!("\ncentipede: E_c = {e_c:.6} (legs this entangled pull the spine to E = 1)");
}
