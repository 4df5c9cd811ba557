//! Deterministic Monte Carlo plumbing shared by the percolation, decoding,
//! and routing experiments.
//!
//! Every trial draws from its own counter-derived ChaCha stream, and results
//! are aggregated either as integer counts or in trial-index order. Estimates
//! are therefore reproducible bit for bit regardless of how many worker
//! threads run the trials, and any single trial can be replayed in isolation.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// RNG for one trial: an independent ChaCha8 stream per (seed, trial) pair.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    trial_rng_for(seed, trial, 0)
}

/// RNG for a sub-draw of one trial. Distinct purposes get distinct streams,
/// so adding a new consumer never shifts the draws of an existing one.
/// Purposes are limited to 16 bits, trial indices to 48.
pub fn trial_rng_for(seed: u64, trial: u64, purpose: u64) -> ChaCha8Rng {
    debug_assert!(purpose < (1 << 16) && trial < (1 << 48));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((trial << 16) | purpose);
    rng
}

/// Run a closure on a rayon pool with a fixed worker count, or inline on the
/// global pool when `workers` is `None`. Estimates do not depend on the
/// choice; this only controls parallelism.
pub fn run_with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        None => f(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("building a rayon pool cannot fail with valid settings")
            .install(f),
    }
}

/// Run `trials` independent predicate trials in parallel and count successes.
pub fn count_successes<F>(seed: u64, trials: u64, trial: F) -> BinomialEstimate
where
    F: Fn(u64, &mut ChaCha8Rng) -> bool + Sync,
{
    let successes = (0..trials)
        .into_par_iter()
        .map(|t| trial(t, &mut trial_rng(seed, t)) as u64)
        .sum();
    BinomialEstimate { successes, trials }
}

/// Run `trials` independent trials in parallel, collecting the per-trial
/// values in trial-index order.
pub fn collect_trials<T, F>(seed: u64, trials: u64, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| trial(t, &mut trial_rng(seed, t)))
        .collect()
}

/// Success-count estimate of a probability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BinomialEstimate {
    pub successes: u64,
    pub trials: u64,
}

impl BinomialEstimate {
    pub fn p_hat(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    /// Binomial standard error sqrt(p(1-p)/n).
    pub fn stderr(&self) -> f64 {
        let p = self.p_hat();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Normal-approximation distance to a reference probability, in standard
    /// errors of the estimate.
    pub fn z_against(&self, p: f64) -> f64 {
        let se = self.stderr();
        if se == 0.0 {
            if (self.p_hat() - p).abs() < f64::EPSILON {
                0.0
            } else {
                f64::INFINITY * (self.p_hat() - p).signum()
            }
        } else {
            (self.p_hat() - p) / se
        }
    }
}

/// Joint outcome counts of paired trials (same randomness, two protocols).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairedCounts {
    pub both: u64,
    pub first_only: u64,
    pub second_only: u64,
    pub neither: u64,
}

impl PairedCounts {
    pub fn add(&mut self, first: bool, second: bool) {
        match (first, second) {
            (true, true) => self.both += 1,
            (true, false) => self.first_only += 1,
            (false, true) => self.second_only += 1,
            (false, false) => self.neither += 1,
        }
    }

    pub fn merge(mut self, other: PairedCounts) -> PairedCounts {
        self.both += other.both;
        self.first_only += other.first_only;
        self.second_only += other.second_only;
        self.neither += other.neither;
        self
    }

    pub fn trials(&self) -> u64 {
        self.both + self.first_only + self.second_only + self.neither
    }

    pub fn p_first(&self) -> f64 {
        (self.both + self.first_only) as f64 / self.trials() as f64
    }

    pub fn p_second(&self) -> f64 {
        (self.both + self.second_only) as f64 / self.trials() as f64
    }

    /// Paired z statistic for P(first) > P(second): the mean per-trial
    /// difference over its standard error. Discordant pairs carry all the
    /// information; concordant pairs only stabilize the estimate.
    pub fn z(&self) -> f64 {
        let n = self.trials() as f64;
        let d = self.first_only as f64 - self.second_only as f64;
        let sum_d2 = (self.first_only + self.second_only) as f64;
        let denom2 = sum_d2 - d * d / n;
        if denom2 <= 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY * d.signum()
            }
        } else {
            d / denom2.sqrt()
        }
    }
}

/// Run paired trials in parallel: the closure reports (first, second) success
/// for one shared-randomness trial.
pub fn count_paired<F>(seed: u64, trials: u64, trial: F) -> PairedCounts
where
    F: Fn(u64, &mut ChaCha8Rng) -> (bool, bool) + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let (a, b) = trial(t, &mut trial_rng(seed, t));
            let mut c = PairedCounts::default();
            c.add(a, b);
            c
        })
        .reduce(PairedCounts::default, PairedCounts::merge)
}

/// Sample mean and its standard error.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_independent_and_stable() {
        let mut a = trial_rng(7, 0);
        let mut b = trial_rng(7, 1);
        let mut a2 = trial_rng(7, 0);
        let xa: f64 = a.gen();
        let xb: f64 = b.gen();
        assert_ne!(xa, xb);
        assert_eq!(xa, a2.gen::<f64>());

        let mut p = trial_rng_for(7, 0, 1);
        assert_ne!(trial_rng(7, 0).gen::<f64>(), p.gen::<f64>());
    }

    #[test]
    fn counting_is_worker_independent() {
        let run = |workers| {
            run_with_workers(Some(workers), || {
                count_successes(42, 10_000, |_, rng| rng.gen::<f64>() < 0.3)
            })
        };
        let one = run(1);
        let eight = run(8);
        assert_eq!(one, eight);
        assert!((one.p_hat() - 0.3).abs() < 5.0 * one.stderr());
    }

    #[test]
    fn collect_preserves_trial_order() {
        let xs = collect_trials(1, 100, |t, rng| (t, rng.gen::<u32>()));
        for (i, (t, _)) in xs.iter().enumerate() {
            assert_eq!(i as u64, *t);
        }
        let again = collect_trials(1, 100, |t, rng| (t, rng.gen::<u32>()));
        assert_eq!(xs, again);
    }

    #[test]
    fn paired_z_counts_discordant_pairs() {
        let mut c = PairedCounts::default();
        for _ in 0..60 {
            c.add(true, false);
        }
        for _ in 0..40 {
            c.add(false, true);
        }
        for _ in 0..900 {
            c.add(true, true);
        }
        assert_eq!(c.trials(), 1000);
        let z = c.z();
        assert!((z - 20.0 / (100.0f64 - 0.4).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mean_stderr_basics() {
        let (m, se) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert!((m - 2.5).abs() < 1e-15);
        let s2 = (2.25 + 0.25 + 0.25 + 2.25) / 3.0;
        assert!((se - (s2 / 4.0f64).sqrt()).abs() < 1e-15);
    }
}
