//! Self-validation suite: cross-checks the analytic solution against the
//! exact propagator, the literal-mode teleportation state against the full
//! protocol, and the global invariants. Hard checks gate the exit code;
//! soft checks only report the measured deviation of the deliberately
//! non-authoritative modes.

use serde::Serialize;
use std::fmt::Write as _;

use crate::entanglement::{analyze, Selection};
use crate::error::Result;
use crate::evolution::{
    closed_form_psi, closed_form_rho, tau_grid, InitialState, MuMode, Propagator,
};
use crate::linalg::{c, hermiticity_defect, max_abs_diff, trace};
use crate::model::{derive_params, excitation_number, HilbertSpace, ModelParams};
use crate::teleport::{
    average_fidelity, channel_from_rho, teleport_protocol, bob_state_literal, UnknownQubit,
    PSI_PLUS,
};

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub hard: bool,
    pub passed: bool,
    pub max_deviation: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, hard: bool, passed: bool, dev: f64, detail: String) {
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            hard,
            passed,
            max_deviation: dev,
            detail,
        });
    }

    pub fn all_hard_passed(&self) -> bool {
        self.checks.iter().all(|c| !c.hard || c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for ch in &self.checks {
            let _ = writeln!(
                out,
                "{} [{}] {} max_deviation={:.3e} {}",
                if ch.passed { "PASS" } else { "FAIL" },
                if ch.hard { "hard" } else { "soft" },
                ch.name,
                ch.max_deviation,
                ch.detail
            );
        }
        let _ = writeln!(
            out,
            "overall: {}",
            if self.all_hard_passed() {
                "all hard checks passed"
            } else {
                "HARD CHECK FAILURE"
            }
        );
        out
    }
}

fn params_for(cjg: f64, delta: f64) -> Result<ModelParams> {
    Ok(derive_params(cjg, 1.0, 0.5, 1.0 + delta, 1.0, 1.0)?.with_photon_number(1))
}

/// Max elementwise deviation of the analytic `ρ(τ)` (given mu mode) from
/// the exact propagator across the standard grid of parameter points.
fn mode_agreement_deviation(mu_mode: MuMode) -> Result<f64> {
    let grid = tau_grid(10.0, 100)?;
    let mut worst: f64 = 0.0;
    for cjg in [2.5, 0.4, 5.0] {
        for delta in [0.0, 0.5, 1.0] {
            let p = params_for(cjg, delta)?;
            let space = HilbertSpace::for_params(&p);
            let prop = Propagator::new(&p, space)?;
            for init in [InitialState::GroundFock(1), InitialState::ExcitedFock(1)] {
                let psi0 = init.state_vector(space)?;
                for &tau in &grid {
                    let a = closed_form_rho(&p, &init, space, tau, mu_mode)?;
                    let b = prop.evolve(&psi0, tau)?.density();
                    worst = worst.max(max_abs_diff(&a.matrix, &b.matrix));
                }
            }
        }
    }
    Ok(worst)
}

fn check_mode_agreement(report: &mut ValidationReport, hard_mu_mode: MuMode) -> Result<()> {
    let dev = mode_agreement_deviation(hard_mu_mode)?;
    report.push(
        "mode_agreement",
        true,
        dev < 1e-8,
        dev,
        format!(
            "analytic ({hard_mu_mode:?}) vs exact propagator, elementwise, tolerance 1e-8"
        ),
    );
    // Always measure the literal mode too, as a soft diagnostic.
    if hard_mu_mode != MuMode::LiteralFrequency {
        let lit = mode_agreement_deviation(MuMode::LiteralFrequency)?;
        report.push(
            "literal_frequency_deviation",
            false,
            true,
            lit,
            "measured divergence of the literal-frequency mode from the exact dynamics".into(),
        );
    }
    Ok(())
}

fn check_invariants(report: &mut ValidationReport) -> Result<()> {
    let grid = tau_grid(10.0, 120)?;
    let mut worst_trace: f64 = 0.0;
    let mut worst_herm: f64 = 0.0;
    let mut worst_purity: f64 = 0.0;
    let mut worst_excitation: f64 = 0.0;
    let mut worst_pt_trace: f64 = 0.0;
    for (cjg, delta, init) in [
        (2.5, 0.0, InitialState::GroundFock(1)),
        (2.5, 1.0, InitialState::ExcitedFock(1)),
        (5.0, 0.5, InitialState::figure_three(0.5, 1)?),
    ] {
        let p = params_for(cjg, delta)?;
        let space = HilbertSpace::for_params(&p);
        let prop = Propagator::new(&p, space)?;
        let psi0 = init.state_vector(space)?;
        let n_ex = excitation_number(space);
        let mut ex0 = None;
        for &tau in &grid {
            let rho = prop.evolve(&psi0, tau)?.density();
            worst_trace = worst_trace.max((rho.trace() - 1.0).abs());
            worst_herm = worst_herm.max(hermiticity_defect(&rho.matrix));
            worst_purity = worst_purity.max((rho.purity() - 1.0).abs());
            let ex = trace(&(&rho.matrix * &n_ex)).re;
            let e0 = *ex0.get_or_insert(ex);
            worst_excitation = worst_excitation.max((ex - e0).abs());
            let pt = crate::entanglement::partial_transpose_qubit(&rho);
            worst_pt_trace = worst_pt_trace.max((trace(&pt).re - 1.0).abs());
        }
    }
    report.push(
        "unitarity_trace",
        true,
        worst_trace < 1e-10,
        worst_trace,
        "|trace rho - 1| over all sweeps".into(),
    );
    report.push(
        "hermiticity",
        true,
        worst_herm < 1e-12,
        worst_herm,
        "max |rho - rho^dagger|".into(),
    );
    report.push(
        "purity",
        true,
        worst_purity < 1e-9,
        worst_purity,
        "pure inits stay pure (no dissipation in the model)".into(),
    );
    report.push(
        "excitation_conservation",
        true,
        worst_excitation < 1e-10,
        worst_excitation,
        "<a^dag a + sigma_+ sigma_-> constant along each sweep".into(),
    );
    report.push(
        "pt_trace_preserved",
        true,
        worst_pt_trace < 1e-10,
        worst_pt_trace,
        "partial transpose preserves the trace".into(),
    );
    Ok(())
}

fn check_ppt_concurrence(report: &mut ValidationReport) -> Result<()> {
    // On the pair support with negligible residual, PPT is necessary and
    // sufficient, so the two verdicts must agree pointwise.
    let grid = tau_grid(10.0, 200)?;
    let mut mismatches = 0usize;
    for (cjg, delta) in [(2.5, 0.0), (2.5, 1.0), (0.4, 0.0), (5.0, 0.5)] {
        let p = params_for(cjg, delta)?;
        let space = HilbertSpace::for_params(&p);
        let prop = Propagator::new(&p, space)?;
        let psi0 = InitialState::GroundFock(1).state_vector(space)?;
        for &tau in &grid {
            let rho = prop.evolve(&psi0, tau)?.density();
            let rep = analyze(&rho, 1, Selection::AdjacentPair, tau)?;
            if (rep.negativity > 1e-8) != (rep.concurrence > 1e-6) {
                mismatches += 1;
            }
        }
    }
    report.push(
        "ppt_concurrence_consistency",
        true,
        mismatches == 0,
        mismatches as f64,
        "(negativity > 1e-8) <=> (concurrence > 1e-6) on the pair support".into(),
    );
    Ok(())
}

fn check_teleport_limits(report: &mut ValidationReport) -> Result<()> {
    // Ideal channel from the resonant concurrence peak.
    let p = params_for(2.5, 0.0)?;
    let space = HilbertSpace::for_params(&p);
    let prop = Propagator::new(&p, space)?;
    let psi0 = InitialState::GroundFock(1).state_vector(space)?;
    let tau_star = std::f64::consts::FRAC_PI_4 / p.lambda_c;
    let rho = prop.evolve(&psi0, tau_star)?.density();
    let chan = channel_from_rho(&rho, 1, Selection::AdjacentPair)?;
    let input = UnknownQubit::new(c(0.6), c(0.8))?;
    let res = teleport_protocol(&chan, &input, tau_star)?;
    let dev_peak = (res.mean_fidelity - 1.0).abs();
    report.push(
        "peak_channel_fidelity",
        true,
        dev_peak < 1e-6,
        dev_peak,
        "channel at the resonant concurrence peak teleports perfectly".into(),
    );
    // Product channel stays under the classical bound.
    let rho0 = psi0.density();
    let chan0 = channel_from_rho(&rho0, 1, Selection::AdjacentPair)?;
    let favg0 = average_fidelity(&chan0);
    report.push(
        "classical_limit",
        true,
        favg0 <= 2.0 / 3.0 + 1e-9,
        favg0,
        "product channel input-averaged fidelity stays <= 2/3".into(),
    );
    Ok(())
}

fn check_lambda_zero(report: &mut ValidationReport) -> Result<()> {
    let mut p = params_for(2.5, 0.3)?;
    p.lambda_c = 0.0;
    let space = HilbertSpace::for_params(&p);
    let prop = Propagator::new(&p, space)?;
    let psi0 = InitialState::figure_three(0.5, 1)?.state_vector(space)?;
    let mut worst: f64 = 0.0;
    for &tau in &tau_grid(10.0, 60)? {
        let rho = prop.evolve(&psi0, tau)?.density();
        let rep = analyze(&rho, 1, Selection::AdjacentPair, tau)?;
        worst = worst.max(rep.negativity).max(rep.concurrence);
    }
    report.push(
        "decoupled_smoke",
        true,
        worst < 1e-10,
        worst,
        "no interaction -> every entanglement metric identically zero".into(),
    );
    Ok(())
}

fn check_eq_bob_vs_protocol(report: &mut ValidationReport) -> Result<()> {
    // literal-mode conditional state vs the psi+ branch of the full protocol.
    // The literal-mode formula is known not to reduce to the input at tau=0;
    // the deviation is measured and reported, not assumed zero.
    let p = params_for(2.5, 0.5)?;
    let space = HilbertSpace::for_params(&p);
    let prop = Propagator::new(&p, space)?;
    let psi0 = InitialState::GroundFock(1).state_vector(space)?;
    let input = UnknownQubit::new(c(0.6), c(0.8))?;
    let mut worst: f64 = 0.0;
    for &tau in &tau_grid(10.0, 100)? {
        let rho = prop.evolve(&psi0, tau)?.density();
        let chan = channel_from_rho(&rho, 1, Selection::AdjacentPair)?;
        let res = teleport_protocol(&chan, &input, tau)?;
        let literal = bob_state_literal(&p, 1, tau, &input, MuMode::Standard)?;
        let dev = max_abs_diff(&res.bob_states[PSI_PLUS], &literal);
        worst = worst.max(dev);
    }
    report.push(
        "literal_bob_state_deviation",
        false,
        true,
        worst,
        "literal conditional-state formula vs the psi+ branch of the protocol".into(),
    );
    Ok(())
}

fn check_closed_form_superposition(report: &mut ValidationReport) -> Result<()> {
    // The analytic path also covers superposed inits; cross-check one.
    let p = params_for(2.5, 1.0)?;
    let space = HilbertSpace::for_params(&p);
    let prop = Propagator::new(&p, space)?;
    let init = InitialState::figure_three(0.5, 1)?;
    let psi0 = init.state_vector(space)?;
    let mut worst: f64 = 0.0;
    for &tau in &tau_grid(10.0, 80)? {
        let a = closed_form_psi(&p, &init, space, tau, MuMode::Standard)?.density();
        let b = prop.evolve(&psi0, tau)?.density();
        worst = worst.max(max_abs_diff(&a.matrix, &b.matrix));
    }
    report.push(
        "superposed_mode_agreement",
        true,
        worst < 1e-8,
        worst,
        "analytic vs exact for the superposed initial state".into(),
    );
    Ok(())
}

/// Run the whole suite. `hard_mu_mode` selects which analytic mode the
/// hard mode-agreement check targets; forcing `LiteralFrequency` demonstrates
/// an intentional failure (the literal frequencies do not match the exact
/// dynamics).
pub fn run_validation(hard_mu_mode: MuMode) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    check_mode_agreement(&mut report, hard_mu_mode)?;
    check_invariants(&mut report)?;
    check_ppt_concurrence(&mut report)?;
    check_teleport_limits(&mut report)?;
    check_lambda_zero(&mut report)?;
    check_closed_form_superposition(&mut report)?;
    check_eq_bob_vs_protocol(&mut report)?;
    Ok(report)
}
