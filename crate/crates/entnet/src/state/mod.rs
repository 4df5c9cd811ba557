//! Exact algebra of single entangled links.
//!
//! Three link families cover everything the protocols need:
//!
//! - [`PureLink`]: a two-qubit pure state in Schmidt form, parametrized by the
//!   smaller Schmidt coefficient `phi1`.
//! - [`WernerLink`]: the isotropic mixture `x |Φ+⟩⟨Φ+| + (1−x)/4 · id`.
//! - [`BitPhaseLink`]: a Bell pair afflicted by independent bit and phase
//!   flips with probabilities `eps_b`, `eps_p`.
//!
//! Operations on these links (swapping, purification, conversion) are closed
//! over the parameters, so protocols never materialize state vectors. The
//! [`oracle`] submodule carries the dense density-matrix machinery used to
//! validate every closed form independently.

pub mod oracle;

use rand::Rng;
use thiserror::Error;

pub use oracle::DensityMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("schmidt coefficients must be nonnegative and sum to 1 (sum = {sum})")]
    BadSchmidt { sum: f64 },
    #[error("schmidt vectors have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("expected a {expected}-qubit density matrix, got dimension {dim}")]
    WrongDimension { expected: usize, dim: usize },
    #[error("density matrix must be square with power-of-two dimension (got {rows}x{cols})")]
    BadMatrix { rows: usize, cols: usize },
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64, StateError> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(StateError::OutOfRange {
            name,
            value,
            lo,
            hi,
        })
    }
}

/// Two-qubit pure state `√phi0 |00⟩ + √phi1 |11⟩` with `phi1 ≤ phi0`.
///
/// Only `phi1` is stored; `phi0 = 1 − phi1` is always derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureLink {
    phi1: f64,
}

impl PureLink {
    pub const BELL: PureLink = PureLink { phi1: 0.5 };
    pub const SEPARABLE: PureLink = PureLink { phi1: 0.0 };

    pub fn new(phi1: f64) -> Result<Self, StateError> {
        Ok(PureLink {
            phi1: check_range("phi1", phi1, 0.0, 0.5)?,
        })
    }

    /// Build from the entanglement E = 2·phi1 (the singlet conversion probability).
    pub fn from_entanglement(e: f64) -> Result<Self, StateError> {
        Ok(PureLink {
            phi1: check_range("E", e, 0.0, 1.0)? / 2.0,
        })
    }

    /// Build from the concurrence C = 2·√(phi0·phi1).
    pub fn from_concurrence(c: f64) -> Result<Self, StateError> {
        let c = check_range("C", c, 0.0, 1.0)?;
        // phi1 = (1 − √(1−C²))/2, written to avoid cancellation near C = 1.
        let s = (1.0 - c * c).max(0.0).sqrt();
        Ok(PureLink {
            phi1: (c * c / (1.0 + s) / 2.0).min(0.5),
        })
    }

    pub fn phi0(&self) -> f64 {
        1.0 - self.phi1
    }

    pub fn phi1(&self) -> f64 {
        self.phi1
    }

    /// E(φ) = 2·phi1: the optimal probability of converting the link into a
    /// Bell pair by a single local measurement.
    pub fn entanglement(&self) -> f64 {
        2.0 * self.phi1
    }

    pub fn concurrence(&self) -> f64 {
        2.0 * (self.phi0() * self.phi1).sqrt()
    }

    pub fn is_bell(&self) -> bool {
        self.phi1 == 0.5
    }

    pub fn schmidt(&self) -> SchmidtVector {
        SchmidtVector::new(vec![self.phi0(), self.phi1]).expect("valid by construction")
    }
}

/// Werner state `x |Φ+⟩⟨Φ+| + (1−x)/4 · id`, `x ∈ [0,1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WernerLink {
    x: f64,
}

impl WernerLink {
    pub const BELL: WernerLink = WernerLink { x: 1.0 };

    pub fn new(x: f64) -> Result<Self, StateError> {
        Ok(WernerLink {
            x: check_range("x", x, 0.0, 1.0)?,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn fidelity(&self) -> f64 {
        (3.0 * self.x + 1.0) / 4.0
    }

    pub fn concurrence(&self) -> f64 {
        (0.5 * (3.0 * self.x - 1.0)).max(0.0)
    }

    /// Entangled iff x > 1/3 (equivalently F > 1/2).
    pub fn is_entangled(&self) -> bool {
        self.x > 1.0 / 3.0
    }
}

/// Bell pair subjected to independent bit and phase flips.
///
/// In the Bell basis (Φ+, Ψ+, Φ−, Ψ−) the state is diagonal with weights
/// ((1−εb)(1−εp), εb(1−εp), (1−εb)εp, εb·εp).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BitPhaseLink {
    eps_b: f64,
    eps_p: f64,
}

impl BitPhaseLink {
    pub fn new(eps_b: f64, eps_p: f64) -> Result<Self, StateError> {
        Ok(BitPhaseLink {
            eps_b: check_range("eps_b", eps_b, 0.0, 0.5)?,
            eps_p: check_range("eps_p", eps_p, 0.0, 0.5)?,
        })
    }

    pub fn eps_b(&self) -> f64 {
        self.eps_b
    }

    pub fn eps_p(&self) -> f64 {
        self.eps_p
    }

    /// Bell-diagonal weights in the order (Φ+, Ψ+, Φ−, Ψ−).
    pub fn bell_weights(&self) -> [f64; 4] {
        let (b, p) = (self.eps_b, self.eps_p);
        [
            (1.0 - b) * (1.0 - p),
            b * (1.0 - p),
            (1.0 - b) * p,
            b * p,
        ]
    }

    pub fn fidelity(&self) -> f64 {
        (1.0 - self.eps_b) * (1.0 - self.eps_p)
    }

    /// Draw one (bit_flip, phase_flip) error pair. Consumes exactly two
    /// uniforms from `rng` regardless of the parameters.
    pub fn sample_errors<R: Rng + ?Sized>(&self, rng: &mut R) -> (bool, bool) {
        let bit = rng.gen::<f64>() < self.eps_b;
        let phase = rng.gen::<f64>() < self.eps_p;
        (bit, phase)
    }
}

/// Sorted Schmidt-coefficient vector (probabilities, nonincreasing).
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtVector {
    coeffs: Vec<f64>,
}

impl SchmidtVector {
    /// Validates nonnegativity and normalization (within 1e−12), then sorts
    /// the entries into nonincreasing order.
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self, StateError> {
        let sum: f64 = coeffs.iter().sum();
        if coeffs.iter().any(|&c| c.is_nan() || c < 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(StateError::BadSchmidt { sum });
        }
        coeffs.sort_by(|a, b| b.partial_cmp(a).expect("no NaN after validation"));
        Ok(SchmidtVector { coeffs })
    }

    /// The flat vector (1/d, …, 1/d): a maximally entangled state of Schmidt rank d.
    pub fn uniform(d: usize) -> Self {
        SchmidtVector {
            coeffs: vec![1.0 / d as f64; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Local noise parameters threaded through the noisy-operation layer.
///
/// `gate_eps` is the depolarizing weight added around an ideal gate,
/// `meas_eps` the readout error η of a single-qubit measurement, and `p2`
/// the reliability of a two-qubit gate (1 = perfect).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    gate_eps: f64,
    meas_eps: f64,
    p2: f64,
}

impl NoiseModel {
    pub const NOISELESS: NoiseModel = NoiseModel {
        gate_eps: 0.0,
        meas_eps: 0.0,
        p2: 1.0,
    };

    pub fn new(gate_eps: f64, meas_eps: f64, p2: f64) -> Result<Self, StateError> {
        Ok(NoiseModel {
            gate_eps: check_range("gate_eps", gate_eps, 0.0, 1.0)?,
            meas_eps: check_range("meas_eps", meas_eps, 0.0, 1.0)?,
            p2: check_range("p2", p2, f64::MIN_POSITIVE, 1.0)?,
        })
    }

    pub fn gate_eps(&self) -> f64 {
        self.gate_eps
    }

    pub fn meas_eps(&self) -> f64 {
        self.meas_eps
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    /// δ = 2η(1−η): probability that one readout error corrupts a two-outcome
    /// parity (two independent chances of flipping it, flips cancel in pairs).
    pub fn delta(&self) -> f64 {
        2.0 * self.meas_eps * (1.0 - self.meas_eps)
    }

    /// α = 1/p2² − 1: the gate-reliability penalty entering the purification
    /// gain formulas.
    pub fn alpha_noise(&self) -> f64 {
        1.0 / (self.p2 * self.p2) - 1.0
    }
}

/// Entanglement swapping of two Werner links. Outcome-independent:
/// x_out = x·x′ for every Bell measurement result.
pub fn swap_werner(a: WernerLink, b: WernerLink) -> WernerLink {
    WernerLink { x: a.x * b.x }
}

/// Entanglement swapping of two pure links, measured in the rotated Bell
/// basis B_X. All four outcomes coincide and carry C_out = C(a)·C(b).
pub fn swap_pure_bx(a: PureLink, b: PureLink) -> PureLink {
    let c = a.concurrence() * b.concurrence();
    PureLink::from_concurrence(c.min(1.0)).expect("product of concurrences stays in [0,1]")
}

/// One branch of a Bell-basis swap: the measurement outcome's probability and
/// the resulting link (after the outcome-dependent local correction).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellOutcome {
    pub probability: f64,
    pub link: PureLink,
}

/// Entanglement swapping of two pure links in the standard Bell basis.
///
/// Returns the exact outcome distribution in the order (Φ+, Φ−, Ψ+, Ψ−).
/// The Φ outcomes keep Schmidt weights ∝ (φ0φ0′, φ1φ1′), the Ψ outcomes
/// ∝ (φ0φ1′, φ1φ0′).
pub fn swap_pure_bell(a: PureLink, b: PureLink) -> [BellOutcome; 4] {
    let (p0, p1) = (a.phi0(), a.phi1());
    let (q0, q1) = (b.phi0(), b.phi1());

    let w_phi = p0 * q0 + p1 * q1;
    let phi = BellOutcome {
        probability: 0.5 * w_phi,
        link: PureLink {
            // p1·q1 ≤ p0·q0 always, so this is the smaller coefficient
            phi1: if w_phi > 0.0 { p1 * q1 / w_phi } else { 0.0 },
        },
    };

    let w_psi = p0 * q1 + p1 * q0;
    let psi = BellOutcome {
        probability: 0.5 * w_psi,
        link: PureLink {
            phi1: if w_psi > 0.0 {
                (p0 * q1).min(p1 * q0) / w_psi
            } else {
                0.0
            },
        },
    };

    [phi, phi, psi, psi]
}

/// Expected entanglement over the outcome distribution, Σ p_m·E(σ_m).
///
/// For a Bell-basis swap this equals 2·min{φ1, φ1′}: swapping conserves the
/// average entanglement of the weaker link.
pub fn average_entanglement(outcomes: &[BellOutcome]) -> f64 {
    outcomes
        .iter()
        .map(|o| o.probability * o.link.entanglement())
        .sum()
}

/// Draw one Bell-swap outcome. Consumes exactly one uniform.
pub fn sample_swap_pure_bell<R: Rng + ?Sized>(a: PureLink, b: PureLink, rng: &mut R) -> PureLink {
    let outcomes = swap_pure_bell(a, b);
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for o in &outcomes {
        acc += o.probability;
        if u < acc {
            return o.link;
        }
    }
    outcomes[3].link
}

/// Result of a probabilistic two-copy purification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Purified {
    pub link: WernerLink,
    pub p_success: f64,
}

/// Recurrence purification of two Werner links (bilateral CNOT, coincident
/// target measurement, twirl back to Werner form).
///
/// x″ = (x + x′ + 4xx′) / (3(1 + xx′)), succeeding with p = (1 + xx′)/2.
pub fn purify_werner(a: WernerLink, b: WernerLink) -> Purified {
    let xx = a.x * b.x;
    Purified {
        link: WernerLink {
            x: (a.x + b.x + 4.0 * xx) / (3.0 * (1.0 + xx)),
        },
        p_success: 0.5 * (1.0 + xx),
    }
}

/// True iff purifying `a` with `b` improves on `a` (output x above a.x).
pub fn purify_improves(a: WernerLink, b: WernerLink) -> bool {
    purify_werner(a, b).link.x > a.x
}

/// Deterministic concentration of two pure links into one.
///
/// The product state has Schmidt weights (φ0φ0′, φ0φ1′, φ1φ0′, φ1φ1′); the
/// best deterministically reachable two-qubit target has larger coefficient
/// σ0 = max{1/2, φ0·φ0′}.
pub fn purify_pure_pair(a: PureLink, b: PureLink) -> PureLink {
    let sigma0 = (a.phi0() * b.phi0()).max(0.5);
    PureLink { phi1: 1.0 - sigma0 }
}

/// Nielsen's criterion: deterministic LOCC conversion α → β exists iff α is
/// majorized by β (all prefix sums of α bounded by β's).
pub fn majorizes(alpha: &SchmidtVector, beta: &SchmidtVector) -> Result<bool, StateError> {
    if alpha.dim() != beta.dim() {
        return Err(StateError::DimensionMismatch(alpha.dim(), beta.dim()));
    }
    let mut sa = 0.0;
    let mut sb = 0.0;
    for (&a, &b) in alpha.coeffs.iter().zip(&beta.coeffs) {
        sa += a;
        sb += b;
        if sa > sb + 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Vidal's optimal conversion probability α → β:
/// min over n of tail(α, n) / tail(β, n), clamped to [0, 1].
pub fn conversion_prob(alpha: &SchmidtVector, beta: &SchmidtVector) -> Result<f64, StateError> {
    if alpha.dim() != beta.dim() {
        return Err(StateError::DimensionMismatch(alpha.dim(), beta.dim()));
    }
    let mut best = f64::INFINITY;
    let mut tail_a = 0.0;
    let mut tail_b = 0.0;
    // accumulate tails from the smallest coefficients upward
    for (&a, &b) in alpha.coeffs.iter().zip(&beta.coeffs).rev() {
        tail_a += a;
        tail_b += b;
        if tail_b > 0.0 {
            best = best.min(tail_a / tail_b);
        }
    }
    Ok(best.clamp(0.0, 1.0))
}
