//! One-dimensional recursion maps for deterministic entanglement propagation
//! on hierarchical and centipede graphs.
//!
//! Each map advances one level of a nested purify-and-swap protocol, so the
//! long-distance behavior of the whole graph reduces to the fixed points of a
//! scalar map. The module provides the step maps, a generic fixed-point
//! iterator, and bisection-based detectors for the critical parameters where
//! a nontrivial fixed point is born or reaches 1.

/// One level of the hierarchical protocol on pure links:
/// E' = min{1, 2 - (1/4)(1 + sqrt(1 - mu E(2-E)))^3}.
///
/// The double bond swapped at parameter `mu` has concurrence squared
/// mu·E(2−E), so its larger Schmidt coefficient is
/// s0 = (1 + sqrt(1 - mu E(2-E)))/2; concentrating three copies
/// deterministically yields a link with larger coefficient max{1/2, s0^3}.
pub fn hierarchical_pure_step(e: f64, mu: f64) -> f64 {
    let s = (1.0 - mu * e * (2.0 - e)).max(0.0).sqrt();
    let cube = (1.0 + s) * (1.0 + s) * (1.0 + s);
    (2.0 - 0.25 * cube).clamp(0.0, 1.0)
}

/// One level of the hierarchical protocol on Werner links:
/// y' = (x^2 y / 6)(5 + 4 x^2 y - 3 x^4 y^2).
///
/// Equivalent to swapping two links into y~ = x^2 y, purifying two copies of
/// y~, and falling back to a spare copy on failure:
/// y' = p x'' + (1 - p) y~ with p = (1 + y~^2)/2.
pub fn hierarchical_mixed_step(x: f64, y: f64) -> f64 {
    let t = x * x * y;
    t / 6.0 * (5.0 + 4.0 * t - 3.0 * t * t)
}

/// One segment of the centipede protocol: the spine state with entanglement
/// `e` is extended through a purified double bond and concentrated with a
/// fresh leg whose larger Schmidt coefficient is `phi0`.
///
/// The double bond built from two legs carries mu = C^4 = (4 phi0 (1-phi0))^2,
/// the purified double-bond state has larger coefficient
/// s0 = (1 + sqrt(1 - mu E(2-E)))/2, and concentration with the leg gives
/// sigma0' = max{1/2, s0 phi0}, i.e. E' = min{1, 2 - phi0 (1 + sqrt(...))}.
pub fn centipede_step(e: f64, phi0: f64) -> f64 {
    let c2 = 4.0 * phi0 * (1.0 - phi0);
    let mu = c2 * c2;
    let s = (1.0 - mu * e * (2.0 - e)).max(0.0).sqrt();
    (2.0 - phi0 * (1.0 + s)).clamp(0.0, 1.0)
}

/// Swap parameter of the hierarchical double bond built from links of
/// entanglement `e`: mu = C^4 = (E(2-E))^2.
pub fn mu_of_entanglement(e: f64) -> f64 {
    let c2 = e * (2.0 - e);
    c2 * c2
}

/// Inverse of [`mu_of_entanglement`] on [0,1]: the link entanglement whose
/// double bond reaches swap parameter `mu`.
pub fn entanglement_of_mu(mu: f64) -> f64 {
    1.0 - (1.0 - mu.sqrt()).max(0.0).sqrt()
}

/// Where a fixed-point iteration ended up.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FixedPoint {
    /// Last iterate; a genuine fixed point only if the outcome converged.
    Value(f64),
    /// The trajectory left [0,1], which no well-formed map should allow.
    Diverged,
}

impl FixedPoint {
    pub fn value(&self) -> Option<f64> {
        match self {
            FixedPoint::Value(v) => Some(*v),
            FixedPoint::Diverged => None,
        }
    }
}

/// Full record of one fixed-point iteration.
#[derive(Clone, Debug)]
pub struct RecursionOutcome {
    /// Every iterate from the initial value onward (empty for untracked runs).
    pub trajectory: Vec<f64>,
    pub fixed_point: FixedPoint,
    pub converged: bool,
    /// Number of map applications performed.
    pub iterations: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct IterationConfig {
    pub tol: f64,
    pub max_iter: u64,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            tol: 1e-9,
            max_iter: 1_000_000,
        }
    }
}

// Slack for the out-of-domain check: the maps clamp to [0,1], so anything
// further out signals a broken map argument rather than roundoff.
const DOMAIN_SLACK: f64 = 1e-9;

fn iterate_impl<F: Fn(f64) -> f64>(
    map: F,
    init: f64,
    cfg: IterationConfig,
    record: bool,
) -> RecursionOutcome {
    assert!(cfg.tol > 0.0 && cfg.max_iter >= 1);
    let mut trajectory = Vec::new();
    if record {
        trajectory.push(init);
    }
    let mut current = init;
    for k in 1..=cfg.max_iter {
        let next = map(current);
        if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&next) {
            return RecursionOutcome {
                trajectory,
                fixed_point: FixedPoint::Diverged,
                converged: false,
                iterations: k,
            };
        }
        if record {
            trajectory.push(next);
        }
        if (next - current).abs() < cfg.tol {
            return RecursionOutcome {
                trajectory,
                fixed_point: FixedPoint::Value(next),
                converged: true,
                iterations: k,
            };
        }
        current = next;
    }
    RecursionOutcome {
        trajectory,
        fixed_point: FixedPoint::Value(current),
        converged: false,
        iterations: cfg.max_iter,
    }
}

/// Iterate `map` from `init` until successive values differ by less than
/// `cfg.tol`, recording the full trajectory. Stops unconverged after
/// `cfg.max_iter` applications, or marks divergence if an iterate leaves
/// [0,1] by more than 1e-9.
pub fn iterate_to_fixed_point<F: Fn(f64) -> f64>(
    map: F,
    init: f64,
    cfg: IterationConfig,
) -> RecursionOutcome {
    iterate_impl(map, init, cfg, true)
}

/// Same iteration without the trajectory, for tight bisection loops.
pub fn iterate_untracked<F: Fn(f64) -> f64>(
    map: F,
    init: f64,
    cfg: IterationConfig,
) -> RecursionOutcome {
    iterate_impl(map, init, cfg, false)
}

/// Bisection for the switching point of a monotone predicate: `pred` must be
/// false at `lo` and true at `hi`. Returns the midpoint of the final bracket,
/// which is within `tol` of the true threshold.
pub fn bisect<P: Fn(f64) -> bool>(mut lo: f64, mut hi: f64, tol: f64, pred: P) -> f64 {
    assert!(tol > 0.0 && lo < hi);
    debug_assert!(!pred(lo) && pred(hi), "predicate must switch inside the bracket");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Critical swap parameters of the pure hierarchical map.
#[derive(Clone, Copy, Debug)]
pub struct PureCriticals {
    /// Birth of a nontrivial attractor: below, every trajectory drains to 0.
    pub mu_c: f64,
    /// Perfect-output threshold: above, the attractor is exactly 1.
    pub mu_star: f64,
}

/// Locate both critical mu values of [`hierarchical_pure_step`] by bisection,
/// each within `tol`.
///
/// The detectors are operational: mu_c is the infimum of mu for which
/// iteration from 1 - 1e-6 settles above 1e-3, and mu_star the infimum for
/// which it reaches 1 within 1e-9 in at most 10^6 iterations.
pub fn hierarchical_pure_criticals(tol: f64) -> PureCriticals {
    let cfg = IterationConfig::default();
    let terminal = |mu: f64| -> f64 {
        iterate_untracked(|e| hierarchical_pure_step(e, mu), 1.0 - 1e-6, cfg)
            .fixed_point
            .value()
            .expect("step map cannot leave [0,1]")
    };
    let mu_c = bisect(0.0, 1.0, tol, |mu| terminal(mu) > 1e-3);
    let mu_star = bisect(0.0, 1.0, tol, |mu| terminal(mu) >= 1.0 - 1e-9);
    PureCriticals { mu_c, mu_star }
}

/// The pair of nontrivial fixed points of the mixed hierarchical map at
/// swap quality `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedFixedPoints {
    /// Unstable threshold: initial y below it decays to 0.
    pub y_c: f64,
    /// Stable attractor reached from any initial y above y_c.
    pub y_star: f64,
}

/// Werner quality below which the mixed map has no nontrivial fixed points.
pub fn mixed_x_critical() -> f64 {
    (18.0f64 / 19.0).sqrt()
}

/// Closed-form fixed points of [`hierarchical_mixed_step`] at quality `x`:
/// y = (2x -+ sqrt(19 x^2 - 18)) / (3 x^3), real only for x >= sqrt(18/19).
pub fn hierarchical_mixed_fixed_points(x: f64) -> Option<MixedFixedPoints> {
    let mut disc = 19.0 * x * x - 18.0;
    if disc < -1e-12 {
        return None;
    }
    // roundoff at the degenerate point x = sqrt(18/19) must not lose the root
    disc = disc.max(0.0);
    let root = disc.sqrt();
    let denom = 3.0 * x * x * x;
    Some(MixedFixedPoints {
        y_c: (2.0 * x - root) / denom,
        y_star: (2.0 * x + root) / denom,
    })
}

/// Critical leg entanglement of the centipede: the smallest E(phi) for which
/// the spine's stable fixed point equals 1. Found by bisection within `tol`,
/// iterating [`centipede_step`] with a spine seeded at the leg entanglement.
pub fn centipede_critical(tol: f64) -> f64 {
    let cfg = IterationConfig::default();
    let reaches_one = |e_leg: f64| -> bool {
        let phi0 = 1.0 - 0.5 * e_leg;
        iterate_untracked(|e| centipede_step(e, phi0), e_leg, cfg)
            .fixed_point
            .value()
            .expect("step map cannot leave [0,1]")
            >= 1.0 - 1e-9
    };
    bisect(1e-3, 1.0 - 1e-3, tol, reaches_one)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_step_boundaries() {
        for e in [0.0, 0.3, 0.7, 1.0] {
            assert_eq!(hierarchical_pure_step(e, 0.0), 0.0);
        }
        for mu in [0.0, 0.4, 1.0] {
            assert_eq!(hierarchical_pure_step(0.0, mu), 0.0);
        }
        assert_eq!(hierarchical_pure_step(1.0, 1.0), 1.0);
        assert!((hierarchical_pure_step(0.8, 0.5) - 0.7254230).abs() < 1e-5);
    }

    #[test]
    fn mixed_step_boundaries() {
        assert!((hierarchical_mixed_step(1.0, 1.0) - 1.0).abs() < 1e-15);
        for x in [0.0, 0.5, 1.0] {
            assert_eq!(hierarchical_mixed_step(x, 0.0), 0.0);
        }
        // stays inside [0,1] across the square
        for i in 0..=20 {
            for j in 0..=20 {
                let y = hierarchical_mixed_step(i as f64 / 20.0, j as f64 / 20.0);
                assert!((0.0..=1.0).contains(&y));
            }
        }
    }

    #[test]
    fn centipede_step_boundaries() {
        // Bell legs repair any spine state in one segment
        for e in [0.0, 0.2, 0.9] {
            assert_eq!(centipede_step(e, 0.5), 1.0);
        }
        // a dead spine is reseeded at the leg entanglement
        for phi0 in [0.6, 0.75, 0.9] {
            assert!((centipede_step(0.0, phi0) - 2.0 * (1.0 - phi0)).abs() < 1e-15);
        }
        // separable legs kill the spine
        assert_eq!(centipede_step(0.8, 1.0), 0.0);
    }

    #[test]
    fn mu_entanglement_inverse_pair() {
        for i in 0..=50 {
            let e = i as f64 / 50.0;
            let mu = mu_of_entanglement(e);
            assert!((entanglement_of_mu(mu) - e).abs() < 1e-12);
        }
        assert!((mu_of_entanglement(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn iterate_basics() {
        let out = iterate_to_fixed_point(|e| e, 0.3, IterationConfig::default());
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.fixed_point, FixedPoint::Value(0.3));
        assert_eq!(out.trajectory, vec![0.3, 0.3]);

        // subcritical mu drains to zero
        let out = iterate_to_fixed_point(
            |e| hierarchical_pure_step(e, 0.2),
            0.9,
            IterationConfig::default(),
        );
        assert!(out.converged);
        assert!(out.fixed_point.value().unwrap() < 1e-6);

        // supercritical mu finds the stable root of step(E) = E
        let out = iterate_to_fixed_point(
            |e| hierarchical_pure_step(e, 0.5),
            0.9,
            IterationConfig::default(),
        );
        let fp = out.fixed_point.value().unwrap();
        assert!(out.converged && fp > 0.1);
        assert!((hierarchical_pure_step(fp, 0.5) - fp).abs() < 1e-8);

        let diverging = iterate_to_fixed_point(|e| e + 0.5, 0.3, IterationConfig::default());
        assert_eq!(diverging.fixed_point, FixedPoint::Diverged);
        assert!(!diverging.converged);
    }

    #[test]
    fn pure_criticals_match_known_values() {
        let c = hierarchical_pure_criticals(1e-4);
        assert!((c.mu_c - 1.0 / 3.0).abs() < 1e-3, "mu_c = {}", c.mu_c);
        let mu_star_exact = 1.0 - (4.0f64.powf(1.0 / 3.0) - 1.0).powi(2);
        assert!(
            (c.mu_star - mu_star_exact).abs() < 1e-3,
            "mu_star = {}",
            c.mu_star
        );
        // critical link entanglement through mu = C^4
        assert!((entanglement_of_mu(c.mu_c) - 0.35).abs() < 0.01);
    }

    #[test]
    fn mixed_fixed_points_closed_form() {
        assert!(hierarchical_mixed_fixed_points(0.9).is_none());
        let at_one = hierarchical_mixed_fixed_points(1.0).unwrap();
        assert!((at_one.y_c - 1.0 / 3.0).abs() < 1e-12);
        assert!((at_one.y_star - 1.0).abs() < 1e-12);

        let xc = mixed_x_critical();
        let deg = hierarchical_mixed_fixed_points(xc).unwrap();
        assert!((deg.y_c - deg.y_star).abs() < 1e-6);
        assert!((deg.y_c - 19.0 / 27.0).abs() < 1e-6);

        // both branches really are fixed points
        for i in 1..=10 {
            let x = xc + (1.0 - xc) * i as f64 / 10.0;
            let fps = hierarchical_mixed_fixed_points(x).unwrap();
            for y in [fps.y_c, fps.y_star] {
                assert!((hierarchical_mixed_step(x, y) - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn centipede_critical_location() {
        let ec = centipede_critical(1e-5);
        assert!((ec - 0.6492).abs() < 2e-3, "E_c = {ec}");
        // exact characterization: at E_c the map is tangent to 1 at E = 1
        let phi0 = 1.0 - 0.5 * ec;
        let mu = mu_of_entanglement(ec);
        assert!((phi0 * (1.0 + (1.0 - mu).sqrt()) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn bisect_finds_threshold() {
        let t = bisect(0.0, 1.0, 1e-9, |x| x * x > 0.3);
        assert!((t - 0.3f64.sqrt()).abs() < 1e-8);
    }
}
