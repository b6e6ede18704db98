//! Physical parameters, basis bookkeeping and Hamiltonian construction for
//! the charge qubit + cavity system.
//!
//! # Unit conventions
//!
//! Energies are expressed in units with `ħ = 1`, `e = 1` and the gate
//! capacitance as the capacitance unit (`C_g = 1` for the stock parameter
//! sets). Dynamics is parameterized by the dimensionless scaled time
//! `tau = sqrt(e²·ω/2ħ)·t`, so the coupling that enters every trigonometric
//! argument is the capacitance ratio factor `γ = sqrt(C_j)/(C_g + C_j)`
//! and the detuning enters as `Δ/τ_scale` with `τ_scale = sqrt(ω/2)`.
//!
//! # Basis ordering
//!
//! The joint qubit⊗field basis is ordered as `index = 2·fock + qubit` with
//! `qubit = 0` for `|g⟩` and `1` for `|e⟩`. This keeps the qubit index the
//! fast one, which makes partial transpose and two-qubit projections plain
//! index arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::linalg::{c, hermitian_eigenvalues, hermiticity_defect, trace, CMat, CVec};

/// All physical and derived parameters of the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Josephson junction capacitance.
    pub c_j: f64,
    /// Gate capacitance (unit convention sets this to 1).
    pub c_g: f64,
    /// Dimensionless gate charge.
    pub n_g: f64,
    /// Josephson coupling energy.
    pub e_j: f64,
    /// Charging energy.
    pub e_c: f64,
    /// Cavity frequency.
    pub omega: f64,
    /// Initial cavity Fock number used by the stock initial states.
    pub n_photon: usize,
    /// Detuning `Δ = E_j − ω`.
    pub delta: f64,
    /// Capacitance coupling factor `γ = sqrt(C_j)/(C_g + C_j)`.
    pub gamma: f64,
    /// Coupling strength in scaled-time units; equals `γ` by convention.
    pub lambda_c: f64,
    /// Mixing angle `θ = arctan(E_j / (E_c·(1 − 2 n_g)))`, `π/2` at the
    /// degeneracy point.
    pub theta: f64,
    /// Gate offset `μ = 1 − n_g`.
    pub mu_gate: f64,
    /// Qubit transition frequency `ω_c = sqrt(E_j² + (4 E_c (1 − 2 n_g))²)`.
    pub omega_c: f64,
}

/// Derive the full parameter set from the six independent inputs.
///
/// The photon number defaults to zero; see [`ModelParams::with_photon_number`].
pub fn derive_params(
    c_j: f64,
    c_g: f64,
    n_g: f64,
    e_j: f64,
    e_c: f64,
    omega: f64,
) -> Result<ModelParams> {
    if !(c_j > 0.0) {
        return Err(SimError::Domain(format!("c_j must be positive, got {c_j}")));
    }
    if !(c_g > 0.0) {
        return Err(SimError::Domain(format!("c_g must be positive, got {c_g}")));
    }
    if !(0.0..=1.0).contains(&n_g) {
        return Err(SimError::Domain(format!("n_g must lie in [0, 1], got {n_g}")));
    }
    if !(omega > 0.0) {
        return Err(SimError::Domain(format!("omega must be positive, got {omega}")));
    }
    let gamma = c_j.sqrt() / (c_g + c_j);
    let charge_asym = e_c * (1.0 - 2.0 * n_g);
    let theta = if charge_asym == 0.0 {
        // Degeneracy point: limit of arctan(x/0+).
        std::f64::consts::FRAC_PI_2
    } else {
        (e_j / charge_asym).atan()
    };
    Ok(ModelParams {
        c_j,
        c_g,
        n_g,
        e_j,
        e_c,
        omega,
        n_photon: 0,
        delta: e_j - omega,
        gamma,
        lambda_c: gamma,
        theta,
        mu_gate: 1.0 - n_g,
        omega_c: (e_j * e_j + (4.0 * charge_asym).powi(2)).sqrt(),
    })
}

impl ModelParams {
    pub fn with_photon_number(mut self, n_photon: usize) -> Self {
        self.n_photon = n_photon;
        self
    }

    /// The scaled-time factor `τ_scale = sqrt(e²ω/2ħ) = sqrt(ω/2)`.
    pub fn tau_scale(&self) -> f64 {
        (self.omega / 2.0).sqrt()
    }

    /// Detuning expressed in scaled-time units, `Δ/τ_scale`. This is the
    /// quantity that competes with `γ` inside the generalized Rabi
    /// frequencies.
    pub fn delta_scaled(&self) -> f64 {
        self.delta / self.tau_scale()
    }
}

/// Effective two-level fields of the reduced charge-qubit Hamiltonian:
/// `B_z = E_cl·(1 − 2 n_j)`, `B_x = E_j`.
pub fn derive_two_level_fields(e_cl: f64, n_j: f64, e_j: f64) -> (f64, f64) {
    (e_cl * (1.0 - 2.0 * n_j), e_j)
}

/// Qubit level labels. `Ground` sits at the even basis indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QubitLevel {
    Ground,
    Excited,
}

impl QubitLevel {
    pub fn bit(self) -> usize {
        match self {
            QubitLevel::Ground => 0,
            QubitLevel::Excited => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            QubitLevel::Ground => 'g',
            QubitLevel::Excited => 'e',
        }
    }
}

/// Truncated qubit⊗Fock product space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertSpace {
    /// Highest retained Fock level `N`; the field space is `{0..=N}`.
    pub fock_cutoff: usize,
}

impl HilbertSpace {
    pub fn new(fock_cutoff: usize) -> Self {
        HilbertSpace { fock_cutoff }
    }

    /// Default cutoff for a parameter set: `N = n_photon + 4`. The
    /// excitation-conserving dynamics only ever populates Fock levels
    /// `{n−1, n, n+1}`, so this is exact for the RWA model and a documented
    /// truncation for the full Hamiltonian.
    pub fn for_params(params: &ModelParams) -> Self {
        HilbertSpace::new(params.n_photon + 4)
    }

    pub fn dim(&self) -> usize {
        2 * (self.fock_cutoff + 1)
    }

    /// Basis index of `|qubit, fock⟩`.
    pub fn index(&self, qubit: QubitLevel, fock: usize) -> usize {
        debug_assert!(fock <= self.fock_cutoff);
        2 * fock + qubit.bit()
    }

    /// Ordered basis labels, `(qubit, fock)` per index.
    pub fn labels(&self) -> Vec<(QubitLevel, usize)> {
        (0..self.dim())
            .map(|i| {
                let q = if i % 2 == 0 { QubitLevel::Ground } else { QubitLevel::Excited };
                (q, i / 2)
            })
            .collect()
    }

    /// Reject cutoffs that cannot hold the `{n−1, n, n+1}` support.
    pub fn check_cutoff(&self, params: &ModelParams) -> Result<()> {
        if self.fock_cutoff < params.n_photon + 2 {
            return Err(SimError::Domain(format!(
                "fock cutoff {} too small for n_photon {} (need at least n+2)",
                self.fock_cutoff, params.n_photon
            )));
        }
        Ok(())
    }
}

/// Pure state on a [`HilbertSpace`], kept normalized.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub amplitudes: CVec,
    pub space: HilbertSpace,
}

impl StateVector {
    pub fn new(amplitudes: CVec, space: HilbertSpace) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(SimError::Domain(format!(
                "state has {} amplitudes but the space has dim {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(SimError::Domain(format!(
                "state vector norm deviates from 1 by {:e}",
                (norm - 1.0).abs()
            )));
        }
        Ok(StateVector { amplitudes, space })
    }

    /// Basis state `|qubit, fock⟩`.
    pub fn basis(space: HilbertSpace, qubit: QubitLevel, fock: usize) -> Self {
        let mut v = CVec::zeros(space.dim());
        v[space.index(qubit, fock)] = c(1.0);
        StateVector { amplitudes: v, space }
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator {
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
            space: self.space,
        }
    }
}

/// Hermitian unit-trace operator on a [`HilbertSpace`].
#[derive(Debug, Clone)]
pub struct DensityOperator {
    pub matrix: CMat,
    pub space: HilbertSpace,
}

impl DensityOperator {
    /// Wrap a matrix after checking hermiticity and unit trace.
    pub fn new(matrix: CMat, space: HilbertSpace) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(SimError::Domain("density matrix shape mismatch".into()));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > 1e-12 {
            return Err(SimError::Invariant(format!(
                "density operator not Hermitian (defect {defect:e})"
            )));
        }
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(SimError::Invariant(format!(
                "density operator trace {tr} is not 1"
            )));
        }
        Ok(DensityOperator { matrix, space })
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).re
    }

    pub fn purity(&self) -> f64 {
        trace(&(&self.matrix * &self.matrix)).re
    }

    /// Population of `|qubit, fock⟩`. Levels above the cutoff hold zero
    /// weight by construction.
    pub fn population(&self, qubit: QubitLevel, fock: usize) -> f64 {
        if fock > self.space.fock_cutoff {
            return 0.0;
        }
        let i = self.space.index(qubit, fock);
        self.matrix[(i, i)].re
    }

    /// Full positivity check (eigensolve); separate from construction
    /// because it is the expensive part.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let vals = hermitian_eigenvalues(&self.matrix)?;
        Ok(vals[0])
    }
}

fn joint_zeros(space: HilbertSpace) -> CMat {
    CMat::zeros(space.dim(), space.dim())
}

/// `a†a ⊗ I` in the joint basis.
pub fn number_operator(space: HilbertSpace) -> CMat {
    let mut m = joint_zeros(space);
    for f in 0..=space.fock_cutoff {
        for q in 0..2 {
            m[(2 * f + q, 2 * f + q)] = c(f as f64);
        }
    }
    m
}

/// `I ⊗ σ_z` (+1 on `|e⟩`).
pub fn sigma_z(space: HilbertSpace) -> CMat {
    let mut m = joint_zeros(space);
    for f in 0..=space.fock_cutoff {
        m[(2 * f, 2 * f)] = c(-1.0);
        m[(2 * f + 1, 2 * f + 1)] = c(1.0);
    }
    m
}

/// `I ⊗ σ_x`.
pub fn sigma_x(space: HilbertSpace) -> CMat {
    let mut m = joint_zeros(space);
    for f in 0..=space.fock_cutoff {
        m[(2 * f, 2 * f + 1)] = c(1.0);
        m[(2 * f + 1, 2 * f)] = c(1.0);
    }
    m
}

/// Excitation-conserving coupling `a†σ₋ + σ₊a`.
pub fn jaynes_cummings_coupling(space: HilbertSpace) -> CMat {
    let mut m = joint_zeros(space);
    for f in 1..=space.fock_cutoff {
        // sigma_+ a |g,f> = sqrt(f) |e,f-1>
        let g_f = 2 * f;
        let e_fm1 = 2 * (f - 1) + 1;
        let amp = c((f as f64).sqrt());
        m[(e_fm1, g_f)] += amp;
        m[(g_f, e_fm1)] += amp;
    }
    m
}

/// Field displacement `a† + a` in the joint basis.
pub fn field_quadrature(space: HilbertSpace) -> CMat {
    let mut m = joint_zeros(space);
    for f in 1..=space.fock_cutoff {
        let amp = c((f as f64).sqrt());
        for q in 0..2 {
            m[(2 * f + q, 2 * (f - 1) + q)] += amp; // a†
            m[(2 * (f - 1) + q, 2 * f + q)] += amp; // a
        }
    }
    m
}

/// Total excitation number `a†a + σ₊σ₋`; commutes with the RWA Hamiltonian.
pub fn excitation_number(space: HilbertSpace) -> CMat {
    let mut m = number_operator(space);
    for f in 0..=space.fock_cutoff {
        m[(2 * f + 1, 2 * f + 1)] += c(1.0);
    }
    m
}

/// Rotating-wave Hamiltonian `H = ω a†a + (ω_c/2) σ_z − λ (a†σ₋ + σ₊a)`.
pub fn build_rwa_hamiltonian(params: &ModelParams, space: HilbertSpace) -> Result<CMat> {
    space.check_cutoff(params)?;
    let h = number_operator(space).scale(params.omega)
        + sigma_z(space).scale(params.omega_c / 2.0)
        - jaynes_cummings_coupling(space).scale(params.lambda_c);
    Ok(h.map(|z| z * c(1.0)))
}

/// Full qubit–cavity Hamiltonian
/// `H = ω a†a + ω_c σ_z − λ (μ − cosθ σ_z + sinθ σ_x)(a† + a)`.
pub fn build_full_hamiltonian(params: &ModelParams, space: HilbertSpace) -> Result<CMat> {
    space.check_cutoff(params)?;
    let mut drive = joint_zeros(space);
    for i in 0..space.dim() {
        drive[(i, i)] += c(params.mu_gate);
    }
    let drive = drive - sigma_z(space).scale(params.theta.cos())
        + sigma_x(space).scale(params.theta.sin());
    let quad = field_quadrature(space);
    Ok(number_operator(space).scale(params.omega) + sigma_z(space).scale(params.omega_c)
        - (&drive * &quad).scale(params.lambda_c))
}

/// RWA Hamiltonian in the rotating frame of `ω (a†a + σ₊σ₋)`, expressed in
/// scaled-time units: `H_rot = (Δ_s/2) σ_z − γ (a†σ₋ + σ₊a)` with
/// `Δ_s = Δ/τ_scale`.
///
/// The dropped frame term is a product of local unitaries on the qubit and
/// the field, so every entanglement and fidelity quantity reported by this
/// crate is unaffected by it; only inter-sector coherence phases differ
/// from the lab frame.
pub fn rotating_frame_hamiltonian(params: &ModelParams, space: HilbertSpace) -> Result<CMat> {
    space.check_cutoff(params)?;
    Ok(sigma_z(space).scale(params.delta_scaled() / 2.0)
        - jaynes_cummings_coupling(space).scale(params.lambda_c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, C64};
    use approx::assert_relative_eq;

    fn degenerate(c_j: f64, e_j: f64) -> ModelParams {
        derive_params(c_j, 1.0, 0.5, e_j, 1.0, 1.0).unwrap()
    }

    #[test]
    fn derive_params_examples() {
        let p = degenerate(2.5, 1.0);
        assert_relative_eq!(p.gamma, 2.5f64.sqrt() / 3.5, max_relative = 1e-15);
        assert_relative_eq!(p.gamma, 0.451754, max_relative = 1e-6);
        assert_eq!(p.delta, 0.0);
        assert_eq!(p.theta, std::f64::consts::FRAC_PI_2);
        assert_eq!(p.mu_gate, 0.5);

        // C_jg = 5/2 and 2/5 give the same coupling factor (sqrt(x)/(1+x)
        // symmetry under x -> 1/x).
        let q = degenerate(0.4, 1.0);
        assert_relative_eq!(q.gamma, p.gamma, max_relative = 1e-15);

        let r = degenerate(5.0, 1.1);
        assert_relative_eq!(r.delta, 0.1, max_relative = 1e-12);
        assert_relative_eq!(r.gamma, 5.0f64.sqrt() / 6.0, max_relative = 1e-15);
        assert_relative_eq!(r.gamma, 0.372678, max_relative = 1e-5);
    }

    #[test]
    fn derive_params_is_pure() {
        let a = derive_params(2.5, 1.0, 0.3, 1.2, 0.9, 1.0).unwrap();
        let b = derive_params(2.5, 1.0, 0.3, 1.2, 0.9, 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn derive_params_rejects_bad_inputs() {
        assert!(derive_params(0.0, 1.0, 0.5, 1.0, 1.0, 1.0).is_err());
        assert!(derive_params(1.0, -1.0, 0.5, 1.0, 1.0, 1.0).is_err());
        assert!(derive_params(1.0, 1.0, 1.5, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn omega_c_and_theta_off_degeneracy() {
        let p = derive_params(1.0, 1.0, 0.0, 1.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(p.omega_c, (1.0f64 + 64.0).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(p.theta, (0.5f64).atan(), max_relative = 1e-15);
    }

    #[test]
    fn two_level_fields() {
        assert_eq!(derive_two_level_fields(1.0, 0.5, 1.0), (0.0, 1.0));
        assert_eq!(derive_two_level_fields(2.0, 0.0, 0.5), (2.0, 0.5));
        assert_eq!(derive_two_level_fields(1.0, 1.0, 1.0), (-1.0, 1.0));
    }

    #[test]
    fn basis_ordering() {
        let s = HilbertSpace::new(3);
        assert_eq!(s.dim(), 8);
        assert_eq!(s.index(QubitLevel::Ground, 0), 0);
        assert_eq!(s.index(QubitLevel::Excited, 0), 1);
        assert_eq!(s.index(QubitLevel::Ground, 2), 4);
        let labels = s.labels();
        assert_eq!(labels[5], (QubitLevel::Excited, 2));
    }

    #[test]
    fn rwa_hamiltonian_decoupled_limit_is_diagonal() {
        let mut p = degenerate(2.5, 1.0);
        p.lambda_c = 0.0;
        let s = HilbertSpace::new(4);
        let h = build_rwa_hamiltonian(&p, s).unwrap();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                if i != j {
                    assert_eq!(h[(i, j)], C64::new(0.0, 0.0));
                }
            }
        }
        // diagonal entries omega*m ± omega_c/2
        assert_relative_eq!(h[(4, 4)].re, 2.0 - p.omega_c / 2.0, max_relative = 1e-14);
        assert_relative_eq!(h[(5, 5)].re, 2.0 + p.omega_c / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn rwa_sector_coupling_element() {
        let p = degenerate(2.5, 1.0);
        let s = HilbertSpace::new(4);
        let h = build_rwa_hamiltonian(&p, s).unwrap();
        let n = 1usize;
        let i = s.index(QubitLevel::Ground, n + 1);
        let j = s.index(QubitLevel::Excited, n);
        assert_relative_eq!(
            h[(i, j)].re,
            -p.lambda_c * ((n + 1) as f64).sqrt(),
            max_relative = 1e-14
        );
        assert_eq!(h[(i, j)].im, 0.0);
    }

    /// Element-wise fixture: the RWA Hamiltonian against an independent
    /// construction from explicit ladder/Pauli matrix products.
    #[test]
    fn rwa_hamiltonian_matches_hand_construction() {
        let mut p = degenerate(2.5, 1.0);
        p.lambda_c = 0.4518;
        let cutoff = 3usize;
        let s = HilbertSpace::new(cutoff);
        let h = build_rwa_hamiltonian(&p, s).unwrap();

        // Independent route: dense a, a†, sigma matrices and kron products.
        let fdim = cutoff + 1;
        let mut a = CMat::zeros(fdim, fdim);
        for f in 1..fdim {
            a[(f - 1, f)] = c((f as f64).sqrt());
        }
        let adag = a.adjoint();
        let id_f = CMat::identity(fdim, fdim);
        let mut sz = CMat::zeros(2, 2);
        sz[(0, 0)] = c(-1.0);
        sz[(1, 1)] = c(1.0);
        let mut sminus = CMat::zeros(2, 2);
        sminus[(0, 1)] = c(1.0); // |g><e|
        let splus = sminus.adjoint();
        let href = crate::linalg::kron(&(&adag * &a), &CMat::identity(2, 2)).scale(p.omega)
            + crate::linalg::kron(&id_f, &sz).scale(p.omega_c / 2.0)
            - (crate::linalg::kron(&adag, &sminus) + crate::linalg::kron(&a, &splus))
                .scale(p.lambda_c);
        assert!(max_abs_diff(&h, &href) < 1e-14);
    }

    #[test]
    fn full_hamiltonian_reduces_at_theta_pi_2_mu_0() {
        let mut p = degenerate(2.5, 1.0);
        p.mu_gate = 0.0; // theta = pi/2 already from the degeneracy point
        let s = HilbertSpace::new(3);
        let h = build_full_hamiltonian(&p, s).unwrap();
        let href = number_operator(s).scale(p.omega) + sigma_z(s).scale(p.omega_c)
            - (&sigma_x(s) * &field_quadrature(s)).scale(p.lambda_c);
        assert!(max_abs_diff(&h, &href) < 1e-14);
    }

    #[test]
    fn full_hamiltonian_decoupled_is_diagonal() {
        let mut p = degenerate(2.5, 1.0);
        p.lambda_c = 0.0;
        let s = HilbertSpace::new(3);
        let h = build_full_hamiltonian(&p, s).unwrap();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                if i != j {
                    assert_eq!(h[(i, j)].norm(), 0.0);
                }
            }
        }
    }

    /// Element-wise fixture for the full Hamiltonian at theta = pi/4.
    #[test]
    fn full_hamiltonian_matches_hand_construction() {
        let mut p = derive_params(2.5, 1.0, 0.25, 1.0, 1.0, 1.0).unwrap();
        p.theta = std::f64::consts::FRAC_PI_4;
        let cutoff = 2usize;
        let s = HilbertSpace::new(cutoff);
        let h = build_full_hamiltonian(&p, s).unwrap();

        let fdim = cutoff + 1;
        let mut a = CMat::zeros(fdim, fdim);
        for f in 1..fdim {
            a[(f - 1, f)] = c((f as f64).sqrt());
        }
        let adag = a.adjoint();
        let quad_f = &adag + &a;
        let id_f = CMat::identity(fdim, fdim);
        let id_q = CMat::identity(2, 2);
        let mut sz = CMat::zeros(2, 2);
        sz[(0, 0)] = c(-1.0);
        sz[(1, 1)] = c(1.0);
        let mut sx = CMat::zeros(2, 2);
        sx[(0, 1)] = c(1.0);
        sx[(1, 0)] = c(1.0);
        let qubit_part = id_q.scale(p.mu_gate) - sz.scale(p.theta.cos()) + sx.scale(p.theta.sin());
        let href = crate::linalg::kron(&(&adag * &a), &id_q).scale(p.omega)
            + crate::linalg::kron(&id_f, &sz).scale(p.omega_c)
            - crate::linalg::kron(&quad_f, &qubit_part).scale(p.lambda_c);
        assert!(max_abs_diff(&h, &href) < 1e-13);
    }

    #[test]
    fn hamiltonians_are_hermitian() {
        let p = derive_params(2.5, 1.0, 0.4, 1.3, 0.8, 1.0).unwrap();
        let s = HilbertSpace::new(5);
        for h in [
            build_rwa_hamiltonian(&p, s).unwrap(),
            build_full_hamiltonian(&p, s).unwrap(),
            rotating_frame_hamiltonian(&p, s).unwrap(),
        ] {
            assert!(hermiticity_defect(&h) < 1e-14);
        }
    }

    #[test]
    fn rwa_conserves_excitation_number() {
        let p = degenerate(2.5, 1.1);
        let s = HilbertSpace::new(5);
        let h = build_rwa_hamiltonian(&p, s).unwrap();
        let n_ex = excitation_number(s);
        let comm = &h * &n_ex - &n_ex * &h;
        assert!(comm.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn cutoff_too_small_is_rejected() {
        let p = degenerate(2.5, 1.0).with_photon_number(3);
        assert!(build_rwa_hamiltonian(&p, HilbertSpace::new(4)).is_err());
        assert!(build_rwa_hamiltonian(&p, HilbertSpace::new(5)).is_ok());
    }

    #[test]
    fn state_vector_norm_enforced() {
        let s = HilbertSpace::new(2);
        let mut v = CVec::zeros(s.dim());
        v[0] = c(0.5);
        assert!(StateVector::new(v, s).is_err());
        let b = StateVector::basis(s, QubitLevel::Excited, 1);
        let rho = b.density();
        assert_relative_eq!(rho.trace(), 1.0, max_relative = 1e-15);
        assert_eq!(rho.population(QubitLevel::Excited, 1), 1.0);
    }
}
