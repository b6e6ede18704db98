//! Time evolution of the qubit–cavity state, computed two independent ways:
//! an analytic per-sector solution for product initial states, and an
//! exact-diagonalization propagator that works for any state. The two must
//! agree to 1e-8 elementwise in the default mode; the sweep driver runs
//! either over a `tau` grid in parallel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::linalg::{c, hermitian_eigen, C64, CMat, CVec, I};
use crate::model::{
    rotating_frame_hamiltonian, DensityOperator, HilbertSpace, ModelParams, QubitLevel,
    StateVector,
};

/// Which generalized Rabi frequency enters the trigonometric arguments.
///
/// `Standard` uses `μ_n = sqrt(Δ_s²/4 + γ²n)`, the form validated by the
/// exact propagator. `LiteralFrequency` keeps the alternative printed form
/// `sqrt(Δ_s²/4 + γn)` inside the oscillation arguments (rescaled by `γ`)
/// for comparison runs; its normalization factors stay at the standard
/// `μ_n` so the state remains exactly normalized, but its time axis
/// deliberately differs from the exact dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuMode {
    #[default]
    Standard,
    LiteralFrequency,
}

/// Which evolution backend a sweep uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvolutionMode {
    #[default]
    ClosedForm,
    Oracle,
}

/// Supported initial states. All variants are a single qubit superposition
/// tensored with one Fock level, which is exactly the family the analytic
/// solution covers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitialState {
    /// `|g, n⟩`
    GroundFock(usize),
    /// `|e, n⟩`
    ExcitedFock(usize),
    /// `(α|g⟩ + β|e⟩) ⊗ |n⟩`, stored normalized.
    SuperposedQubitFock { alpha: C64, beta: C64, n: usize },
    /// Weighted superposition `a|g,n⟩ + (1−a)|e,n⟩`. The raw weights are
    /// generally unnormalized (`a = 1/2` gives norm² = 1/2); normalization
    /// is applied on construction and the raw weights kept for reporting.
    FigureThree { a: f64, n: usize },
}

impl InitialState {
    /// Normalizing constructor for the general superposition.
    pub fn superposed(alpha: C64, beta: C64, n: usize) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm > 1e-12) || !norm.is_finite() {
            return Err(SimError::Domain(
                "superposition amplitudes have zero or non-finite norm".into(),
            ));
        }
        Ok(InitialState::SuperposedQubitFock {
            alpha: alpha / norm,
            beta: beta / norm,
            n,
        })
    }

    pub fn figure_three(a: f64, n: usize) -> Result<Self> {
        let norm = a.hypot(1.0 - a);
        if !(norm > 1e-12) || !norm.is_finite() {
            return Err(SimError::Domain(format!(
                "weights (a, 1-a) = ({a}, {}) have zero or non-finite norm",
                1.0 - a
            )));
        }
        Ok(InitialState::FigureThree { a, n })
    }

    /// The Fock level the qubit superposition sits on.
    pub fn fock(&self) -> usize {
        match *self {
            InitialState::GroundFock(n)
            | InitialState::ExcitedFock(n)
            | InitialState::SuperposedQubitFock { n, .. }
            | InitialState::FigureThree { n, .. } => n,
        }
    }

    /// Normalized qubit amplitudes `(α, β)` on `(|g⟩, |e⟩)`.
    pub fn amplitudes(&self) -> (C64, C64) {
        match *self {
            InitialState::GroundFock(_) => (c(1.0), c(0.0)),
            InitialState::ExcitedFock(_) => (c(0.0), c(1.0)),
            InitialState::SuperposedQubitFock { alpha, beta, .. } => (alpha, beta),
            InitialState::FigureThree { a, .. } => {
                let norm = a.hypot(1.0 - a);
                (c(a / norm), c((1.0 - a) / norm))
            }
        }
    }

    /// Pre-normalization weights, for echoing into output headers.
    pub fn raw_weights(&self) -> (C64, C64) {
        match *self {
            InitialState::FigureThree { a, .. } => (c(a), c(1.0 - a)),
            _ => self.amplitudes(),
        }
    }

    pub fn state_vector(&self, space: HilbertSpace) -> Result<StateVector> {
        let n = self.fock();
        if n > space.fock_cutoff {
            return Err(SimError::Domain(format!(
                "initial Fock level {n} exceeds cutoff {}",
                space.fock_cutoff
            )));
        }
        let (alpha, beta) = self.amplitudes();
        let mut v = CVec::zeros(space.dim());
        v[space.index(QubitLevel::Ground, n)] = alpha;
        v[space.index(QubitLevel::Excited, n)] = beta;
        StateVector::new(v, space)
    }
}

/// Analytic coefficient set for the `n`-excitation sectors at one `tau`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosedFormCoeffs {
    pub mu_n: f64,
    pub mu_np1: f64,
    pub c_n: f64,
    pub c_np1: f64,
    /// Normalized sine `S_m = sin(arg_m)/μ_m` (limit `τ` as `μ_m → 0`).
    pub s_n: f64,
    pub s_np1: f64,
    /// `A = C²_{n+1} + (Δ_s²/4)·S²_{n+1}` — real by construction.
    pub a_coef: f64,
    /// `B = C²_{n+1} − (Δ_s²/4)·S²_{n+1} − i·Δ_s·S_{n+1}·C_{n+1}`.
    pub b_coef: C64,
    /// `C = i·S_n·(C_{n+1} + (i·Δ_s/2)·S_{n+1})`.
    pub c_coef: C64,
}

/// Cosine and normalized sine of one sector. The normalizer is always the
/// standard `μ_m`, which keeps `C² + μ²S² = 1` (state normalization) in
/// both modes; only the oscillation rate changes with the mode.
fn sector_cs(params: &ModelParams, m: usize, tau: f64, mode: MuMode) -> (f64, f64, f64) {
    let d = params.delta_scaled();
    let g = params.lambda_c;
    let mu = (d * d / 4.0 + g * g * m as f64).sqrt();
    let arg = match mode {
        MuMode::Standard => mu * tau,
        MuMode::LiteralFrequency => g * (d * d / 4.0 + g * m as f64).sqrt() * tau,
    };
    let cos = arg.cos();
    let sin = if mu < 1e-12 { tau } else { arg.sin() / mu };
    (cos, sin, mu)
}

pub fn closed_form_coeffs(
    params: &ModelParams,
    n: usize,
    tau: f64,
    mode: MuMode,
) -> ClosedFormCoeffs {
    let d = params.delta_scaled();
    let (c_n, s_n, mu_n) = sector_cs(params, n, tau, mode);
    let (c_np1, s_np1, mu_np1) = sector_cs(params, n + 1, tau, mode);
    ClosedFormCoeffs {
        mu_n,
        mu_np1,
        c_n,
        c_np1,
        s_n,
        s_np1,
        a_coef: c_np1 * c_np1 + d * d / 4.0 * s_np1 * s_np1,
        b_coef: c(c_np1 * c_np1 - d * d / 4.0 * s_np1 * s_np1)
            - I * c(d * s_np1 * c_np1),
        c_coef: I * c(s_n) * (c(c_np1) + I * c(d / 2.0) * c(s_np1)),
    }
}

/// Evolved state of `(α|g⟩+β|e⟩)⊗|n⟩` in the rotating frame, from the
/// per-sector analytic solution.
pub fn closed_form_psi(
    params: &ModelParams,
    init: &InitialState,
    space: HilbertSpace,
    tau: f64,
    mode: MuMode,
) -> Result<StateVector> {
    if tau < 0.0 || !tau.is_finite() {
        return Err(SimError::Domain(format!("tau must be finite and >= 0, got {tau}")));
    }
    let n = init.fock();
    if n + 1 > space.fock_cutoff {
        return Err(SimError::Domain(format!(
            "fock cutoff {} cannot hold level {}",
            space.fock_cutoff,
            n + 1
        )));
    }
    let (alpha, beta) = init.amplitudes();
    let d = params.delta_scaled();
    let g = params.lambda_c;
    let (c_n, s_n, _) = sector_cs(params, n, tau, mode);
    let (c_np1, s_np1, _) = sector_cs(params, n + 1, tau, mode);

    let mut v = CVec::zeros(space.dim());
    // |g,n> sector: couples to |e,n-1>.
    v[space.index(QubitLevel::Ground, n)] += alpha * (c(c_n) + I * c(d / 2.0 * s_n));
    if n >= 1 {
        v[space.index(QubitLevel::Excited, n - 1)] +=
            alpha * I * c(g * (n as f64).sqrt() * s_n);
    }
    // |e,n> sector: couples to |g,n+1>.
    v[space.index(QubitLevel::Excited, n)] += beta * (c(c_np1) - I * c(d / 2.0 * s_np1));
    v[space.index(QubitLevel::Ground, n + 1)] +=
        beta * I * c(g * ((n + 1) as f64).sqrt() * s_np1);

    let norm = v.norm();
    let deviation = (norm * norm - 1.0).abs();
    if deviation >= 1e-6 {
        return Err(SimError::ClosedFormInconsistency { tau, deviation });
    }
    StateVector::new(v.scale(1.0 / norm), space)
}

/// Analytic density operator `ρ(τ)`; see [`closed_form_psi`].
pub fn closed_form_rho(
    params: &ModelParams,
    init: &InitialState,
    space: HilbertSpace,
    tau: f64,
    mode: MuMode,
) -> Result<DensityOperator> {
    Ok(closed_form_psi(params, init, space, tau, mode)?.density())
}

/// Exact-diagonalization propagator for the rotating-frame Hamiltonian.
/// Diagonalizes once, then each time step costs two small matrix-vector
/// products.
pub struct Propagator {
    eigenvalues: Vec<f64>,
    eigenvectors: CMat,
    space: HilbertSpace,
}

impl Propagator {
    pub fn new(params: &ModelParams, space: HilbertSpace) -> Result<Self> {
        let h = rotating_frame_hamiltonian(params, space)?;
        let (eigenvalues, eigenvectors) = hermitian_eigen(&h)?;
        Ok(Propagator {
            eigenvalues,
            eigenvectors,
            space,
        })
    }

    /// `ψ(τ) = exp(−i H_rot τ) ψ₀`.
    pub fn evolve(&self, psi0: &StateVector, tau: f64) -> Result<StateVector> {
        if psi0.space != self.space {
            return Err(SimError::Domain("state/propagator space mismatch".into()));
        }
        let mut coeffs = self.eigenvectors.adjoint() * &psi0.amplitudes;
        for (k, z) in coeffs.iter_mut().enumerate() {
            *z *= C64::from_polar(1.0, -self.eigenvalues[k] * tau);
        }
        let v = &self.eigenvectors * coeffs;
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(SimError::Invariant(format!(
                "propagator lost norm by {:e}",
                (norm - 1.0).abs()
            )));
        }
        StateVector::new(v.scale(1.0 / norm), self.space)
    }
}

/// One-shot exact propagation; prefer [`Propagator`] for grids.
pub fn oracle_propagate(
    params: &ModelParams,
    space: HilbertSpace,
    psi0: &StateVector,
    tau: f64,
) -> Result<DensityOperator> {
    Ok(Propagator::new(params, space)?.evolve(psi0, tau)?.density())
}

fn check_grid(tau_grid: &[f64]) -> Result<()> {
    if tau_grid.iter().any(|t| !t.is_finite()) {
        return Err(SimError::Domain("tau grid contains non-finite values".into()));
    }
    if tau_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SimError::Domain("tau grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Evaluate `ρ(τ)` over a grid. Points are independent and computed in
/// parallel; the output order always matches the grid order.
pub fn sweep(
    params: &ModelParams,
    init: &InitialState,
    space: HilbertSpace,
    tau_grid: &[f64],
    mode: EvolutionMode,
    mu_mode: MuMode,
) -> Result<Vec<DensityOperator>> {
    check_grid(tau_grid)?;
    match mode {
        EvolutionMode::ClosedForm => tau_grid
            .par_iter()
            .map(|&tau| closed_form_rho(params, init, space, tau, mu_mode).map_err(|e| e.at_tau(tau)))
            .collect(),
        EvolutionMode::Oracle => {
            let prop = Propagator::new(params, space)?;
            let psi0 = init.state_vector(space)?;
            tau_grid
                .par_iter()
                .map(|&tau| {
                    prop.evolve(&psi0, tau)
                        .map(|s| s.density())
                        .map_err(|e| e.at_tau(tau))
                })
                .collect()
        }
    }
}

/// Evenly spaced grid `linspace(0, tau_max, steps)`.
pub fn tau_grid(tau_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || steps > 1_000_000 {
        return Err(SimError::Domain(format!(
            "steps must be in [2, 1e6], got {steps}"
        )));
    }
    if !(tau_max > 0.0) || !tau_max.is_finite() {
        return Err(SimError::Domain(format!("tau_max must be positive, got {tau_max}")));
    }
    Ok((0..steps)
        .map(|i| tau_max * i as f64 / (steps - 1) as f64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::model::{derive_params, excitation_number};
    use approx::assert_relative_eq;

    fn params(cjg: f64, delta: f64) -> ModelParams {
        derive_params(cjg, 1.0, 0.5, 1.0 + delta, 1.0, 1.0)
            .unwrap()
            .with_photon_number(1)
    }

    #[test]
    fn tau_zero_is_identity() {
        let p = params(2.5, 0.0);
        let s = HilbertSpace::for_params(&p);
        let rho = closed_form_rho(&p, &InitialState::GroundFock(1), s, 0.0, MuMode::Standard)
            .unwrap();
        assert_relative_eq!(rho.population(QubitLevel::Ground, 1), 1.0, epsilon = 1e-14);
        assert_relative_eq!(rho.purity(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn resonant_rabi_population() {
        // Independent 2x2-sector solution: P(|e,0>)(tau) = sin^2(g*tau).
        let p = params(2.5, 0.0);
        let s = HilbertSpace::for_params(&p);
        let psi0 = InitialState::GroundFock(1).state_vector(s).unwrap();
        let prop = Propagator::new(&p, s).unwrap();
        for tau in [0.3, 1.0, 2.2, 5.7] {
            let rho = prop.evolve(&psi0, tau).unwrap().density();
            assert_relative_eq!(
                rho.population(QubitLevel::Excited, 0),
                (p.lambda_c * tau).sin().powi(2),
                epsilon = 1e-12
            );
        }
        // Half/half populations at g*tau = pi/4.
        let rho = prop
            .evolve(&psi0, std::f64::consts::FRAC_PI_4 / p.lambda_c)
            .unwrap()
            .density();
        assert_relative_eq!(rho.population(QubitLevel::Ground, 1), 0.5, epsilon = 1e-12);
        assert_relative_eq!(rho.population(QubitLevel::Excited, 0), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn decoupled_limit_freezes_populations() {
        let mut p = params(2.5, 0.7);
        p.lambda_c = 0.0;
        let s = HilbertSpace::for_params(&p);
        let init = InitialState::superposed(c(0.6), c(0.8), 1).unwrap();
        let psi0 = init.state_vector(s).unwrap();
        let prop = Propagator::new(&p, s).unwrap();
        for tau in [0.5, 3.3, 9.9] {
            let rho = prop.evolve(&psi0, tau).unwrap().density();
            assert_relative_eq!(rho.population(QubitLevel::Ground, 1), 0.36, epsilon = 1e-12);
            assert_relative_eq!(rho.population(QubitLevel::Excited, 1), 0.64, epsilon = 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_oracle() {
        for cjg in [2.5, 0.4, 5.0] {
            for delta in [0.0, 0.5, 1.0] {
                let p = params(cjg, delta);
                let s = HilbertSpace::for_params(&p);
                let prop = Propagator::new(&p, s).unwrap();
                for init in [InitialState::GroundFock(1), InitialState::ExcitedFock(1)] {
                    let psi0 = init.state_vector(s).unwrap();
                    for k in 0..40 {
                        let tau = 10.0 * k as f64 / 39.0;
                        let a = closed_form_rho(&p, &init, s, tau, MuMode::Standard).unwrap();
                        let b = prop.evolve(&psi0, tau).unwrap().density();
                        assert!(
                            max_abs_diff(&a.matrix, &b.matrix) < 1e-10,
                            "cjg={cjg} delta={delta} tau={tau}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn excited_fock_detuned_point_check() {
        let p = params(2.5, 1.0);
        let s = HilbertSpace::for_params(&p);
        let a = closed_form_rho(&p, &InitialState::ExcitedFock(1), s, 2.0, MuMode::Standard)
            .unwrap();
        let psi0 = InitialState::ExcitedFock(1).state_vector(s).unwrap();
        let b = oracle_propagate(&p, s, &psi0, 2.0).unwrap();
        assert!(max_abs_diff(&a.matrix, &b.matrix) < 1e-8);
    }

    #[test]
    fn purity_and_excitation_conserved() {
        let p = params(5.0, 0.5);
        let s = HilbertSpace::for_params(&p);
        let init = InitialState::figure_three(0.5, 1).unwrap();
        let grid = tau_grid(10.0, 100).unwrap();
        let rhos = sweep(&p, &init, s, &grid, EvolutionMode::Oracle, MuMode::Standard).unwrap();
        let n_ex = excitation_number(s);
        let expect0 = (&rhos[0].matrix * &n_ex).diagonal().iter().map(|z| z.re).sum::<f64>();
        for rho in &rhos {
            assert!(rho.purity() > 1.0 - 1e-9);
            let ex: f64 = (&rho.matrix * &n_ex).diagonal().iter().map(|z| z.re).sum();
            assert!((ex - expect0).abs() < 1e-10);
        }
    }

    #[test]
    fn resonant_period() {
        // Populations of GroundFock(n) at delta=0 repeat with period pi/(g sqrt(n)).
        let p = params(2.5, 0.0).with_photon_number(2);
        let s = HilbertSpace::for_params(&p);
        let n = 2usize;
        let period = std::f64::consts::PI / (p.lambda_c * (n as f64).sqrt());
        let prop = Propagator::new(&p, s).unwrap();
        let psi0 = InitialState::GroundFock(n).state_vector(s).unwrap();
        for tau in [0.4, 1.3, 2.9] {
            let a = prop.evolve(&psi0, tau).unwrap().density();
            let b = prop.evolve(&psi0, tau + period).unwrap().density();
            for (q, f) in [(QubitLevel::Ground, n), (QubitLevel::Excited, n - 1)] {
                assert_relative_eq!(a.population(q, f), b.population(q, f), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn coeffs_invariants() {
        let p = params(2.5, 0.7);
        for tau in [0.3, 1.7, 4.4] {
            let k = closed_form_coeffs(&p, 1, tau, MuMode::Standard);
            let d = p.delta_scaled();
            assert_relative_eq!(
                k.a_coef,
                k.c_np1 * k.c_np1 + d * d / 4.0 * k.s_np1 * k.s_np1,
                epsilon = 1e-15
            );
            // sector normalization: C^2 + mu^2 S^2 = 1
            assert_relative_eq!(
                k.c_np1 * k.c_np1 + k.mu_np1 * k.mu_np1 * k.s_np1 * k.s_np1,
                1.0,
                epsilon = 1e-12
            );
        }
        // resonance: A = C^2_{n+1}, B real, C = i S_n C_{n+1}
        let p0 = params(2.5, 0.0);
        let k = closed_form_coeffs(&p0, 1, 1.1, MuMode::Standard);
        assert_relative_eq!(k.a_coef, k.c_np1 * k.c_np1, epsilon = 1e-15);
        assert_relative_eq!(k.b_coef.re, k.c_np1 * k.c_np1, epsilon = 1e-15);
        assert_eq!(k.b_coef.im, 0.0);
        assert_relative_eq!(k.c_coef.im, k.s_n * k.c_np1, epsilon = 1e-15);
        assert_eq!(k.c_coef.re, 0.0);
    }

    #[test]
    fn literal_frequency_mode_stays_normalized_but_differs() {
        let p = params(2.5, 0.0);
        let s = HilbertSpace::for_params(&p);
        let init = InitialState::GroundFock(1);
        let lit = closed_form_rho(&p, &init, s, 2.0, MuMode::LiteralFrequency).unwrap();
        assert_relative_eq!(lit.trace(), 1.0, epsilon = 1e-12);
        let std = closed_form_rho(&p, &init, s, 2.0, MuMode::Standard).unwrap();
        assert!(max_abs_diff(&lit.matrix, &std.matrix) > 1e-3);
    }

    #[test]
    fn figure_three_normalization() {
        let init = InitialState::figure_three(0.5, 1).unwrap();
        let (a, b) = init.amplitudes();
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(a.re, s2, epsilon = 1e-15);
        assert_relative_eq!(b.re, s2, epsilon = 1e-15);
        let (ra, rb) = init.raw_weights();
        assert_eq!((ra.re, rb.re), (0.5, 0.5));
        assert!(InitialState::superposed(c(0.0), c(0.0), 1).is_err());
    }

    #[test]
    fn sweep_orders_and_rejects_bad_grids() {
        let p = params(2.5, 0.0);
        let s = HilbertSpace::for_params(&p);
        let init = InitialState::GroundFock(1);
        let grid = tau_grid(1.0, 5).unwrap();
        let rhos = sweep(&p, &init, s, &grid, EvolutionMode::ClosedForm, MuMode::Standard).unwrap();
        assert_eq!(rhos.len(), 5);
        assert_relative_eq!(rhos[0].population(QubitLevel::Ground, 1), 1.0, epsilon = 1e-14);
        assert!(sweep(&p, &init, s, &[0.0, 0.0], EvolutionMode::Oracle, MuMode::Standard).is_err());
        assert!(sweep(&p, &init, s, &[0.0, f64::NAN], EvolutionMode::Oracle, MuMode::Standard).is_err());
        assert!(tau_grid(0.0, 10).is_err());
        assert!(tau_grid(1.0, 1).is_err());
    }

    #[test]
    fn ground_fock_zero_at_resonance() {
        // n = 0, delta = 0 exercises the mu -> 0 limit of the normalized sine.
        let p = params(2.5, 0.0).with_photon_number(0);
        let s = HilbertSpace::for_params(&p);
        let rho = closed_form_rho(&p, &InitialState::GroundFock(0), s, 3.0, MuMode::Standard)
            .unwrap();
        // |g,0> is dark under the RWA coupling.
        assert_relative_eq!(rho.population(QubitLevel::Ground, 0), 1.0, epsilon = 1e-12);
    }
}
