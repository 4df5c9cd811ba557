//! Dense density-matrix oracle used to validate the closed-form link algebra.
//!
//! Everything here is deliberately explicit: states are full 2^n x 2^n
//! complex matrices, gates are embedded one tensor factor at a time, and
//! measurements enumerate projector branches. The closed forms in the parent
//! module are checked against these constructions on dense parameter grids
//! in the integration tests; nothing in the protocol layers depends on this
//! module at runtime.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{BitPhaseLink, NoiseModel, PureLink, StateError, WernerLink};

type CMat = DMatrix<Complex64>;
type CVec = DVector<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Density matrix of an n-qubit register.
///
/// Qubit 0 is the most significant bit of the basis index, i.e. the leftmost
/// tensor factor: basis state |q0 q1 ... q_{n-1}⟩ has index Σ q_k 2^(n-1-k).
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: CMat,
    n: usize,
}

impl DensityMatrix {
    /// Wrap a raw matrix. Must be square with power-of-two dimension; no
    /// physicality checks are made (see [`DensityMatrix::validate`]).
    pub fn from_matrix(mat: CMat) -> Result<Self, StateError> {
        let (rows, cols) = (mat.nrows(), mat.ncols());
        if rows != cols || rows == 0 || !rows.is_power_of_two() {
            return Err(StateError::BadMatrix { rows, cols });
        }
        Ok(DensityMatrix {
            n: rows.trailing_zeros() as usize,
            mat,
        })
    }

    /// |ψ⟩⟨ψ| of a (normalized) state vector.
    pub fn from_statevector(psi: &CVec) -> Result<Self, StateError> {
        let rho = psi * psi.adjoint();
        DensityMatrix::from_matrix(rho)
    }

    /// The two-qubit pure state √phi0 |00⟩ + √phi1 |11⟩.
    pub fn pure_link(l: PureLink) -> Self {
        DensityMatrix::from_statevector(&pure_link_vector(l)).expect("4-dim")
    }

    /// The Werner state x |Φ+⟩⟨Φ+| + (1−x)/4 id.
    pub fn werner(w: WernerLink) -> Self {
        let bell = DensityMatrix::bell();
        let mixed = DensityMatrix::maximally_mixed(2);
        mix(&[(w.x(), &bell), (1.0 - w.x(), &mixed)])
    }

    /// The Bell-diagonal state of a bit/phase flip channel.
    pub fn bitphase(l: BitPhaseLink) -> Self {
        let w = l.bell_weights(); // order (Φ+, Ψ+, Φ−, Ψ−)
        let basis = bell_basis_vectors(); // order (Φ+, Φ−, Ψ+, Ψ−)
        let weight_for = [w[0], w[2], w[1], w[3]];
        let mut mat = CMat::zeros(4, 4);
        for (v, &wk) in basis.iter().zip(&weight_for) {
            mat += (v * v.adjoint()).scale(wk);
        }
        DensityMatrix { mat, n: 2 }
    }

    /// |Φ+⟩⟨Φ+|.
    pub fn bell() -> Self {
        DensityMatrix::pure_link(PureLink::BELL)
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1 << n;
        DensityMatrix {
            mat: CMat::identity(d, d).scale(1.0 / d as f64),
            n,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Tensor product; `self` supplies the high-order qubits.
    pub fn kron(&self, other: &Self) -> Self {
        DensityMatrix {
            mat: self.mat.kronecker(&other.mat),
            n: self.n + other.n,
        }
    }

    /// U ρ U† for a full-register unitary.
    pub fn apply_unitary(&self, u: &CMat) -> Self {
        DensityMatrix {
            mat: u * &self.mat * u.adjoint(),
            n: self.n,
        }
    }

    /// Σ M ρ M† over a set of full-register Kraus operators.
    pub fn apply_kraus(&self, ops: &[CMat]) -> Self {
        let mut mat = CMat::zeros(self.mat.nrows(), self.mat.ncols());
        for m in ops {
            mat += m * &self.mat * m.adjoint();
        }
        DensityMatrix { mat, n: self.n }
    }

    /// Measurement branch P ρ P† / p with its probability p = tr(P ρ P†).
    /// A zero-probability branch is returned as the zero matrix.
    pub fn project(&self, p: &CMat) -> (Self, f64) {
        let raw = p * &self.mat * p.adjoint();
        let prob = raw.trace().re;
        let mat = if prob > 1e-300 {
            raw.scale(1.0 / prob)
        } else {
            CMat::zeros(raw.nrows(), raw.ncols())
        };
        (DensityMatrix { mat, n: self.n }, prob.max(0.0))
    }

    /// Reduced state on `keep` (strictly ascending qubit positions); all
    /// other qubits are traced out. The kept qubits keep their relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Self {
        assert!(
            keep.windows(2).all(|w| w[0] < w[1]) && keep.iter().all(|&q| q < self.n),
            "keep must be strictly ascending qubit positions"
        );
        let traced: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let dk = 1usize << keep.len();
        let dt = 1usize << traced.len();
        let assemble = |kept_bits: usize, traced_bits: usize| -> usize {
            let mut idx = 0;
            for (pos, &q) in keep.iter().enumerate() {
                idx |= ((kept_bits >> (keep.len() - 1 - pos)) & 1) << (self.n - 1 - q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                idx |= ((traced_bits >> (traced.len() - 1 - pos)) & 1) << (self.n - 1 - q);
            }
            idx
        };
        let mut out = CMat::zeros(dk, dk);
        for i in 0..dk {
            for j in 0..dk {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..dt {
                    acc += self.mat[(assemble(i, t), assemble(j, t))];
                }
                out[(i, j)] = acc;
            }
        }
        DensityMatrix {
            mat: out,
            n: keep.len(),
        }
    }

    /// ⟨ψ|ρ|ψ⟩ for a normalized pure state.
    pub fn fidelity_pure(&self, psi: &CVec) -> f64 {
        (psi.adjoint() * &self.mat * psi)[(0, 0)].re
    }

    /// Φ+ fidelity of a two-qubit state.
    pub fn fidelity_phi_plus(&self) -> f64 {
        assert_eq!(self.n, 2, "Φ+ fidelity needs a two-qubit state");
        0.5 * (self.mat[(0, 0)] + self.mat[(0, 3)] + self.mat[(3, 0)] + self.mat[(3, 3)]).re
    }

    /// Check the three density-matrix axioms within `tol`: Hermitian, unit
    /// trace, positive semidefinite.
    pub fn validate(&self, tol: f64) -> Result<(), String> {
        let herm_err = (&self.mat - self.mat.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm_err > tol {
            return Err(format!("not Hermitian (max |ρ − ρ†| = {herm_err:.3e})"));
        }
        let tr = self.mat.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(format!("trace = {tr} instead of 1"));
        }
        let herm = (&self.mat + self.mat.adjoint()).scale(0.5);
        let eigs = herm.symmetric_eigenvalues();
        if let Some(lo) = eigs.iter().cloned().reduce(f64::min) {
            if lo < -tol {
                return Err(format!("negative eigenvalue {lo:.3e}"));
            }
        }
        Ok(())
    }
}

/// Weighted mixture Σ wᵢ ρᵢ / Σ wᵢ; weights must be nonnegative with a
/// positive sum, states must share the register size.
pub fn mix(parts: &[(f64, &DensityMatrix)]) -> DensityMatrix {
    let n = parts[0].1.n;
    assert!(parts.iter().all(|(w, p)| *w >= 0.0 && p.n == n));
    let total: f64 = parts.iter().map(|(w, _)| w).sum();
    assert!(total > 0.0, "mixture weights sum to zero");
    let d = 1 << n;
    let mut mat = CMat::zeros(d, d);
    for (w, p) in parts {
        mat += p.mat.scale(w / total);
    }
    DensityMatrix { mat, n }
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn hadamard() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)])
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[
            c(0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            c(0.0),
        ],
    )
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

/// A single-qubit operator embedded at `qubit` in an n-qubit register.
pub fn embed_one(n: usize, qubit: usize, u: &CMat) -> CMat {
    assert!(qubit < n && u.nrows() == 2 && u.ncols() == 2);
    let mut out = CMat::identity(1, 1);
    for q in 0..n {
        if q == qubit {
            out = out.kronecker(u);
        } else {
            out = out.kronecker(&identity(2));
        }
    }
    out
}

/// CNOT with arbitrary control and target positions.
pub fn cnot(n: usize, control: usize, target: usize) -> CMat {
    assert!(control != target && control < n && target < n);
    let d = 1usize << n;
    let mut m = CMat::zeros(d, d);
    for b in 0..d {
        let flip = (b >> (n - 1 - control)) & 1 == 1;
        let out = if flip { b ^ (1 << (n - 1 - target)) } else { b };
        m[(out, b)] = c(1.0);
    }
    m
}

/// Projector onto fixed computational values of some qubits, e.g.
/// `&[(2, 0), (3, 0)]` selects basis states with qubits 2 and 3 both zero.
pub fn computational_projector(n: usize, assignments: &[(usize, u8)]) -> CMat {
    let d = 1usize << n;
    let mut m = CMat::zeros(d, d);
    'basis: for b in 0..d {
        for &(q, val) in assignments {
            if ((b >> (n - 1 - q)) & 1) as u8 != val {
                continue 'basis;
            }
        }
        m[(b, b)] = c(1.0);
    }
    m
}

/// The four Bell vectors in the order (Φ+, Φ−, Ψ+, Ψ−).
pub fn bell_basis_vectors() -> [CVec; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: [f64; 4]| CVec::from_iterator(4, a.iter().map(|&x| c(x)));
    [
        v([s, 0.0, 0.0, s]),
        v([s, 0.0, 0.0, -s]),
        v([0.0, s, s, 0.0]),
        v([0.0, s, -s, 0.0]),
    ]
}

/// The Bell basis rotated by a Hadamard on the first measured qubit.
///
/// Measuring two legs of a pure-link pair in this basis makes all four
/// outcomes equally likely (probability 1/4 each) whatever the Schmidt
/// coefficients, which is what turns swapping into the deterministic
/// concurrence product rule.
pub fn bx_basis_vectors() -> [CVec; 4] {
    let h = hadamard().kronecker(&identity(2));
    bell_basis_vectors().map(|v| &h * v)
}

fn pure_link_vector(l: PureLink) -> CVec {
    CVec::from_iterator(
        4,
        [l.phi0().sqrt(), 0.0, 0.0, l.phi1().sqrt()]
            .iter()
            .map(|&x| c(x)),
    )
}

/// Local corrections per Bell outcome (Φ+, Φ−, Ψ+, Ψ−), applied to the far
/// qubit of the second link to bring every branch back to Φ+ form.
fn swap_corrections() -> [CMat; 4] {
    [
        identity(2),
        pauli_z(),
        pauli_x(),
        pauli_z() * pauli_x(),
    ]
}

/// Outcome-resolved Werner swap computed from the dense 4-qubit state.
///
/// Register order [A, B, C, D] with links on (A,B) and (C,D). The Bell
/// measurement acts on (B,C), the outcome-dependent Pauli correction on D,
/// and each branch is twirled back to Werner form. Returns the four output
/// x values in the order (Φ+, Φ−, Ψ+, Ψ−); they coincide for Werner inputs.
pub fn swap_werner_oracle(a: WernerLink, b: WernerLink) -> [f64; 4] {
    let rho = DensityMatrix::werner(a).kron(&DensityMatrix::werner(b));
    let corrections = swap_corrections();
    let mut out = [0.0; 4];
    for (m, v) in bell_basis_vectors().iter().enumerate() {
        let proj4 = v * v.adjoint();
        let proj = identity(2).kronecker(&proj4).kronecker(&identity(2));
        let (post, p) = rho.project(&proj);
        if p <= 0.0 {
            continue; // never hit: Werner inputs give p = 1/4 per outcome
        }
        let ad = post.partial_trace(&[0, 3]);
        let corrected = ad.apply_unitary(&embed_one(2, 1, &corrections[m]));
        let (w, _) = depolarize_to_werner(&corrected).expect("two-qubit by construction");
        out[m] = w.x();
    }
    out
}

/// One recurrence purification step computed from the dense 4-qubit state.
///
/// Register order [A1, B1, A2, B2]: the first link is purified by the second.
/// Alice applies CNOT A1→A2, Bob CNOT B1→B2, both measure the sacrificial
/// link and keep coincident outcomes. Returns (output x, success probability).
pub fn purify_werner_oracle(a: WernerLink, b: WernerLink) -> (f64, f64) {
    let rho = DensityMatrix::werner(a).kron(&DensityMatrix::werner(b));
    let u = cnot(4, 0, 2) * cnot(4, 1, 3);
    let evolved = rho.apply_unitary(&u);
    let (b00, q00) = evolved.project(&computational_projector(4, &[(2, 0), (3, 0)]));
    let (b11, q11) = evolved.project(&computational_projector(4, &[(2, 1), (3, 1)]));
    let p = q00 + q11;
    let kept = mix(&[(q00, &b00), (q11, &b11)]);
    let reduced = kept.partial_trace(&[0, 1]);
    let (w, _) = depolarize_to_werner(&reduced).expect("two-qubit by construction");
    (w.x(), p)
}

/// Outcome-resolved pure-link swap in the standard Bell basis, computed from
/// the 16-dim statevector. Returns (probability, conditional phi1) per
/// outcome in the order (Φ+, Φ−, Ψ+, Ψ−).
pub fn swap_pure_bell_oracle(a: PureLink, b: PureLink) -> [(f64, f64); 4] {
    swap_pure_oracle_in(&bell_basis_vectors(), a, b)
}

/// Same swap measured in the rotated basis of [`bx_basis_vectors`]: all four
/// probabilities are exactly 1/4 and every conditional state has
/// C = C(a)·C(b).
pub fn swap_pure_bx_oracle(a: PureLink, b: PureLink) -> [(f64, f64); 4] {
    swap_pure_oracle_in(&bx_basis_vectors(), a, b)
}

fn swap_pure_oracle_in(basis: &[CVec; 4], a: PureLink, b: PureLink) -> [(f64, f64); 4] {
    let psi_a = pure_link_vector(a);
    let psi_b = pure_link_vector(b);
    let mut out = [(0.0, 0.0); 4];
    for (m, v) in basis.iter().enumerate() {
        // amplitude matrix on (A, D) after projecting (B, C) onto v;
        // full-register index is 8a + 4b + 2c + d
        let mut mm = [[Complex64::new(0.0, 0.0); 2]; 2];
        for ai in 0..2 {
            for d in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for bi in 0..2 {
                    for ci in 0..2 {
                        acc += v[2 * bi + ci].conj() * psi_a[2 * ai + bi] * psi_b[2 * ci + d];
                    }
                }
                mm[ai][d] = acc;
            }
        }
        // Schmidt coefficients of the branch are the eigenvalues of MM†/p
        let g00 = mm[0][0].norm_sqr() + mm[0][1].norm_sqr();
        let g11 = mm[1][0].norm_sqr() + mm[1][1].norm_sqr();
        let g01 = mm[0][0] * mm[1][0].conj() + mm[0][1] * mm[1][1].conj();
        let p = g00 + g11;
        if p <= 1e-300 {
            continue;
        }
        let half_diff = 0.5 * (g00 - g11);
        let disc = (half_diff * half_diff + g01.norm_sqr()).sqrt();
        let low = (0.5 * p - disc).max(0.0);
        out[m] = (p, (low / p).min(0.5));
    }
    out
}

/// Apply a full-register unitary with depolarizing weight `gate_eps` on the
/// qubits in `subset` (strictly ascending): the ideal result survives with
/// probability 1−ε, otherwise the subset is replaced by the maximally mixed
/// state while the remaining qubits keep the ideal marginal.
pub fn apply_noisy_gate(
    state: &DensityMatrix,
    u: &CMat,
    subset: &[usize],
    noise: NoiseModel,
) -> DensityMatrix {
    assert!(
        subset.windows(2).all(|w| w[0] < w[1]) && subset.iter().all(|&q| q < state.n),
        "subset must be strictly ascending qubit positions"
    );
    let ideal = state.apply_unitary(u);
    let eps = noise.gate_eps();
    if eps == 0.0 {
        return ideal;
    }
    let n = state.n;
    let rest: Vec<usize> = (0..n).filter(|q| !subset.contains(q)).collect();
    let marginal = ideal.partial_trace(&rest);
    // mixed_subset ⊗ marginal, interleaved back into register order
    let d = 1usize << n;
    let mixed_weight = 1.0 / (1u64 << subset.len()) as f64;
    let sub_bits = |i: usize| -> usize {
        subset
            .iter()
            .fold(0, |acc, &q| (acc << 1) | ((i >> (n - 1 - q)) & 1))
    };
    let rest_bits = |i: usize| -> usize {
        rest.iter()
            .fold(0, |acc, &q| (acc << 1) | ((i >> (n - 1 - q)) & 1))
    };
    let mut noisy = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            if sub_bits(i) == sub_bits(j) {
                noisy[(i, j)] = marginal.mat[(rest_bits(i), rest_bits(j))].scale(mixed_weight);
            }
        }
    }
    DensityMatrix {
        mat: ideal.mat.scale(1.0 - eps) + noisy.scale(eps),
        n,
    }
}

/// One branch of a noisy single-qubit measurement.
#[derive(Clone, Debug)]
pub struct MeasureOutcome {
    pub outcome: u8,
    pub probability: f64,
    pub post: DensityMatrix,
}

/// Computational-basis measurement of one qubit whose readout flips with
/// probability η = `meas_eps`. Both outcome branches are returned; each post
/// state keeps the measured qubit in place.
///
/// The Kraus pair is M0 = √(1−η)|0⟩⟨0| + √η|1⟩⟨1| and M1 with the roles
/// swapped, so M0†M0 + M1†M1 = id.
pub fn noisy_measure(
    state: &DensityMatrix,
    qubit: usize,
    noise: NoiseModel,
) -> [MeasureOutcome; 2] {
    assert!(qubit < state.n);
    let eta = noise.meas_eps();
    let kraus = |report0: f64, report1: f64| -> CMat {
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = c(report0.sqrt());
        m[(1, 1)] = c(report1.sqrt());
        embed_one(state.n, qubit, &m)
    };
    let m0 = kraus(1.0 - eta, eta);
    let m1 = kraus(eta, 1.0 - eta);
    let (post0, p0) = state.project(&m0);
    let (post1, p1) = state.project(&m1);
    [
        MeasureOutcome {
            outcome: 0,
            probability: p0,
            post: post0,
        },
        MeasureOutcome {
            outcome: 1,
            probability: p1,
            post: post1,
        },
    ]
}

/// Twirl a two-qubit state to Werner form: x = (4F − 1)/3 with F the Φ+
/// fidelity, clamped at 0. The flag reports F < 1/4, i.e. a state whose
/// literal twirl parameter would be negative; such states are separable and
/// map to x = 0.
pub fn depolarize_to_werner(state: &DensityMatrix) -> Result<(WernerLink, bool), StateError> {
    if state.n != 2 {
        return Err(StateError::WrongDimension {
            expected: 2,
            dim: state.mat.nrows(),
        });
    }
    let f = state.fidelity_phi_plus();
    let x = ((4.0 * f - 1.0) / 3.0).clamp(0.0, 1.0);
    Ok((WernerLink::new(x)?, f < 0.25))
}
