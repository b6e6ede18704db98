//! Sweep specifications, figure presets, and the CSV/JSON emitters behind
//! the command-line front end.
//!
//! Output schemas (stable; the header row must match these exactly):
//! - entanglement runs:
//!   `tau,pt_eig_1,pt_eig_2,pt_eig_3,pt_eig_4,pop_g_n,pop_e_nm1,pop_g_np1,pop_e_n,re_coh,im_coh,concurrence,negativity`
//! - teleport runs:
//!   `tau,p_phi_plus,p_phi_minus,p_psi_plus,p_psi_minus,f_psi_plus_cond,f_mean,f_avg_inputs`
//! - multi-curve fidelity figures: `tau` plus one `f_avg_*` column per curve.
//!
//! CSV files carry `#`-prefixed comment lines echoing the resolved
//! parameters, program version, and the first-peak location under both
//! `mu_mode`s so the time-axis reading can be compared against plots.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entanglement::{analyze, EntanglementReport, Selection};
use crate::error::{Result, SimError};
use crate::evolution::{
    closed_form_rho, closed_form_psi, sweep, tau_grid, EvolutionMode, InitialState, MuMode,
};
use crate::model::{derive_params, HilbertSpace, ModelParams};
use crate::search::refine_first_peak;
use crate::teleport::{channel_from_rho, fidelity_sweep, TeleportResult, UnknownQubit, PSI_PLUS};

pub const ENTANGLEMENT_HEADER: &str = "tau,pt_eig_1,pt_eig_2,pt_eig_3,pt_eig_4,pop_g_n,pop_e_nm1,pop_g_np1,pop_e_n,re_coh,im_coh,concurrence,negativity";
pub const TELEPORT_HEADER: &str =
    "tau,p_phi_plus,p_phi_minus,p_psi_plus,p_psi_minus,f_psi_plus_cond,f_mean,f_avg_inputs";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(SimError::Usage(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

/// Output families a custom sweep can request. Requesting `Fidelity`
/// switches the file to the teleport schema (which carries all fidelity
/// readings); every other kind is a column of the entanglement schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    PtEigs,
    Populations,
    Concurrence,
    Negativity,
    Coherences,
    Fidelity,
}

/// One experiment: parameter point, initial state, grid, and backend
/// switches. Mirrors the JSON config document; CLI flags override fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    /// Capacitance ratio `C_j/C_g` (with `C_g = 1`).
    pub cjg: f64,
    /// Detuning `Δ = E_j − ω` (sets `E_j = 1 + Δ` at `ω = 1`).
    pub delta: f64,
    pub n_photon: usize,
    /// Superposition weight: init `a|g,n⟩ + (1−a)|e,n⟩` when set,
    /// `|g,n⟩` otherwise.
    pub a: Option<f64>,
    pub tau_max: f64,
    pub steps: usize,
    pub mode: EvolutionMode,
    pub mu_mode: MuMode,
    pub selection: Selection,
    /// Fock truncation; defaults to `n_photon + 4`.
    pub fock_cutoff: Option<usize>,
    pub outputs: Vec<OutputKind>,
    /// Input state `(λ₁, λ₂)` for teleport runs (real amplitudes,
    /// normalized on use).
    pub input: (f64, f64),
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            cjg: 2.5,
            delta: 0.0,
            n_photon: 1,
            a: None,
            tau_max: 10.0,
            steps: 1000,
            mode: EvolutionMode::Oracle,
            mu_mode: MuMode::Standard,
            selection: Selection::AdjacentPair,
            fock_cutoff: None,
            outputs: vec![
                OutputKind::PtEigs,
                OutputKind::Populations,
                OutputKind::Concurrence,
                OutputKind::Negativity,
                OutputKind::Coherences,
            ],
            input: (0.6, 0.8),
        }
    }
}

impl SweepSpec {
    /// Check every field, reporting all problems at once.
    pub fn validate(&self) -> Result<()> {
        let mut issues = Vec::new();
        if !(self.cjg > 0.0) || !self.cjg.is_finite() {
            issues.push(format!("cjg must be a positive number, got {}", self.cjg));
        }
        if !self.delta.is_finite() {
            issues.push(format!("delta must be finite, got {}", self.delta));
        }
        if self.n_photon > 50 {
            issues.push(format!("n_photon {} is unreasonably large (max 50)", self.n_photon));
        }
        if let Some(a) = self.a {
            if !a.is_finite() || a.hypot(1.0 - a) < 1e-12 {
                issues.push(format!("superposition weight a = {a} is invalid"));
            }
        }
        if !(self.tau_max > 0.0) || !self.tau_max.is_finite() {
            issues.push(format!("tau_max must be positive, got {}", self.tau_max));
        }
        if self.steps < 2 || self.steps > 1_000_000 {
            issues.push(format!("steps must be in [2, 1000000], got {}", self.steps));
        }
        if let Some(cut) = self.fock_cutoff {
            if cut < self.n_photon + 2 {
                issues.push(format!(
                    "fock_cutoff {cut} too small for n_photon {} (need at least n+2)",
                    self.n_photon
                ));
            }
        }
        if self.selection == Selection::AdjacentPair && self.n_photon == 0 {
            issues.push("selection adjacent_pair needs n_photon >= 1".into());
        }
        if self.outputs.is_empty() {
            issues.push("outputs must name at least one quantity".into());
        }
        if self.input.0.hypot(self.input.1) < 1e-12 {
            issues.push("input amplitudes must not both vanish".into());
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(SimError::Usage(issues.join("; ")))
        }
    }

    pub fn params(&self) -> Result<ModelParams> {
        Ok(derive_params(self.cjg, 1.0, 0.5, 1.0 + self.delta, 1.0, 1.0)?
            .with_photon_number(self.n_photon))
    }

    pub fn init(&self) -> Result<InitialState> {
        match self.a {
            Some(a) => InitialState::figure_three(a, self.n_photon),
            None => Ok(InitialState::GroundFock(self.n_photon)),
        }
    }

    pub fn space(&self) -> HilbertSpace {
        HilbertSpace::new(self.fock_cutoff.unwrap_or(self.n_photon + 4))
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        tau_grid(self.tau_max, self.steps)
    }

    fn is_teleport(&self) -> bool {
        self.outputs.contains(&OutputKind::Fidelity)
    }
}

/// Figure identifiers; each binds the caption parameters of one panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FigureId {
    F1a,
    F1b,
    F1c,
    F1d,
    F1e,
    F1f,
    F2a,
    F2b,
    F3a,
    F3b,
    F4a,
    F4b,
    F5,
}

pub const ALL_FIGURES: [FigureId; 13] = [
    FigureId::F1a,
    FigureId::F1b,
    FigureId::F1c,
    FigureId::F1d,
    FigureId::F1e,
    FigureId::F1f,
    FigureId::F2a,
    FigureId::F2b,
    FigureId::F3a,
    FigureId::F3b,
    FigureId::F4a,
    FigureId::F4b,
    FigureId::F5,
];

impl FromStr for FigureId {
    type Err = SimError;
    fn from_str(s: &str) -> Result<Self> {
        use FigureId::*;
        Ok(match s {
            "1a" => F1a,
            "1b" => F1b,
            "1c" => F1c,
            "1d" => F1d,
            "1e" => F1e,
            "1f" => F1f,
            "2a" => F2a,
            "2b" => F2b,
            "3a" => F3a,
            "3b" => F3b,
            "4a" => F4a,
            "4b" => F4b,
            "5" => F5,
            other => {
                return Err(SimError::Usage(format!(
                    "unknown figure id '{other}' (expected 1a..1f, 2a, 2b, 3a, 3b, 4a, 4b or 5)"
                )))
            }
        })
    }
}

impl FigureId {
    pub fn as_str(&self) -> &'static str {
        use FigureId::*;
        match self {
            F1a => "1a",
            F1b => "1b",
            F1c => "1c",
            F1d => "1d",
            F1e => "1e",
            F1f => "1f",
            F2a => "2a",
            F2b => "2b",
            F3a => "3a",
            F3b => "3b",
            F4a => "4a",
            F4b => "4b",
            F5 => "5",
        }
    }
}

/// A resolved preset: description plus one labeled spec per curve.
pub struct FigurePreset {
    pub id: FigureId,
    pub description: &'static str,
    pub curves: Vec<(String, SweepSpec)>,
    /// Multi-curve presets emit one fidelity column per curve; single-curve
    /// presets use the full entanglement or teleport schema.
    pub multi_curve: bool,
}

fn ent_spec(cjg: f64, delta: f64) -> SweepSpec {
    SweepSpec {
        cjg,
        delta,
        ..SweepSpec::default()
    }
}

fn superposed_spec(delta: f64) -> SweepSpec {
    SweepSpec {
        cjg: 2.5,
        delta,
        a: Some(0.5),
        tau_max: 15.0,
        selection: Selection::TopTwoFock,
        ..SweepSpec::default()
    }
}

fn teleport_spec(cjg: f64, delta: f64, n_photon: usize) -> SweepSpec {
    SweepSpec {
        cjg,
        delta,
        n_photon,
        outputs: vec![OutputKind::Fidelity],
        ..SweepSpec::default()
    }
}

impl FigureId {
    pub fn preset(&self) -> FigurePreset {
        use FigureId::*;
        let (description, curves, multi): (_, Vec<(String, SweepSpec)>, _) = match self {
            F1a | F1c | F1e => (
                "entanglement dynamics, |g,1>, C_jg=5/2, delta=0",
                vec![("main".into(), ent_spec(2.5, 0.0))],
                false,
            ),
            F1b | F1d | F1f => (
                "entanglement dynamics, |g,1>, C_jg=5/2, delta=1",
                vec![("main".into(), ent_spec(2.5, 1.0))],
                false,
            ),
            F2a | F2b => (
                "entanglement dynamics, |g,1>, C_jg=2/5, delta=0",
                vec![("main".into(), ent_spec(0.4, 0.0))],
                false,
            ),
            F3a => (
                "entanglement of the superposed init a=0.5, C_jg=5/2, delta=0",
                vec![("main".into(), superposed_spec(0.0))],
                false,
            ),
            F3b => (
                "entanglement of the superposed init a=0.5, C_jg=5/2, delta=1",
                vec![("main".into(), superposed_spec(1.0))],
                false,
            ),
            F4a => (
                "teleportation fidelity, C_jg=5, n=1, delta in {0.1, 0.5, 1}",
                vec![
                    ("f_avg_delta_0.1".into(), teleport_spec(5.0, 0.1, 1)),
                    ("f_avg_delta_0.5".into(), teleport_spec(5.0, 0.5, 1)),
                    ("f_avg_delta_1".into(), teleport_spec(5.0, 1.0, 1)),
                ],
                true,
            ),
            F4b => (
                "teleportation fidelity, delta=0.1, n=1, C_jg in {5/3, 5/2, 5}",
                vec![
                    ("f_avg_cjg_5_3".into(), teleport_spec(5.0 / 3.0, 0.1, 1)),
                    ("f_avg_cjg_5_2".into(), teleport_spec(2.5, 0.1, 1)),
                    ("f_avg_cjg_5".into(), teleport_spec(5.0, 0.1, 1)),
                ],
                true,
            ),
            F5 => (
                "teleportation fidelity, C_jg=5, delta=0.1, n in {1, 2, 3}",
                vec![
                    ("f_avg_n1".into(), teleport_spec(5.0, 0.1, 1)),
                    ("f_avg_n2".into(), teleport_spec(5.0, 0.1, 2)),
                    ("f_avg_n3".into(), teleport_spec(5.0, 0.1, 3)),
                ],
                true,
            ),
        };
        FigurePreset {
            id: *self,
            description,
            curves,
            multi_curve: multi,
        }
    }
}

/// Fixed float formatting so output bytes are reproducible.
fn fmt_f(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.12e}")
    }
}

/// Run the entanglement pipeline over the spec's grid.
pub fn entanglement_rows(spec: &SweepSpec) -> Result<Vec<EntanglementReport>> {
    spec.validate()?;
    let params = spec.params()?;
    let init = spec.init()?;
    let space = spec.space();
    let grid = spec.grid()?;
    let rhos = sweep(&params, &init, space, &grid, spec.mode, spec.mu_mode)?;
    grid.iter()
        .zip(&rhos)
        .map(|(&tau, rho)| {
            analyze(rho, init.fock(), spec.selection, tau).map_err(|e| e.at_tau(tau))
        })
        .collect()
}

/// Run the teleportation pipeline over the spec's grid.
pub fn teleport_rows(spec: &SweepSpec) -> Result<Vec<TeleportResult>> {
    spec.validate()?;
    let params = spec.params()?;
    let init = spec.init()?;
    let space = spec.space();
    let grid = spec.grid()?;
    let input = UnknownQubit::new(crate::linalg::c(spec.input.0), crate::linalg::c(spec.input.1))?;
    fidelity_sweep(
        &params,
        &init,
        space,
        &grid,
        &input,
        spec.selection,
        spec.mode,
        spec.mu_mode,
    )
}

/// First concurrence peak (tau, value) under the given mu mode, via the
/// analytic solution; `None` when the series never rises above 0.05.
fn concurrence_peak(spec: &SweepSpec, mu_mode: MuMode) -> Result<Option<(f64, f64)>> {
    let params = spec.params()?;
    let init = spec.init()?;
    let space = spec.space();
    let grid = spec.grid()?;
    let eval = |tau: f64| -> Result<f64> {
        let rho = closed_form_rho(&params, &init, space, tau, mu_mode)?;
        crate::entanglement::concurrence(&crate::entanglement::project_two_qubit(
            &rho,
            init.fock(),
            spec.selection,
        )?)
    };
    let ys: Result<Vec<f64>> = grid.iter().map(|&t| eval(t)).collect();
    refine_first_peak(eval, &grid, &ys?, 0.05, 1e-6)
}

/// First input-averaged-fidelity peak under the given mu mode.
fn fidelity_peak(spec: &SweepSpec, mu_mode: MuMode) -> Result<Option<(f64, f64)>> {
    let params = spec.params()?;
    let init = spec.init()?;
    let space = spec.space();
    let grid = spec.grid()?;
    let eval = |tau: f64| -> Result<f64> {
        let rho = closed_form_psi(&params, &init, space, tau, mu_mode)?.density();
        let chan = channel_from_rho(&rho, init.fock(), spec.selection)?;
        Ok(crate::teleport::average_fidelity(&chan))
    };
    let ys: Result<Vec<f64>> = grid.iter().map(|&t| eval(t)).collect();
    refine_first_peak(eval, &grid, &ys?, 0.5, 1e-6)
}

fn peak_comment(label: &str, spec: &SweepSpec, teleport: bool) -> Result<String> {
    let mut out = String::new();
    for mode in [MuMode::Standard, MuMode::LiteralFrequency] {
        let peak = if teleport {
            fidelity_peak(spec, mode)?
        } else {
            concurrence_peak(spec, mode)?
        };
        let tag = match mode {
            MuMode::Standard => "standard",
            MuMode::LiteralFrequency => "literal_frequency",
        };
        match peak {
            Some((tau, value)) => {
                let _ = writeln!(
                    out,
                    "# first_peak {label} mu_mode={tag} tau={} value={}",
                    fmt_f(tau),
                    fmt_f(value)
                );
            }
            None => {
                let _ = writeln!(out, "# first_peak {label} mu_mode={tag} none");
            }
        }
    }
    Ok(out)
}

fn params_comment(label: &str, spec: &SweepSpec) -> Result<String> {
    let p = spec.params()?;
    let (w0, w1) = spec.init()?.raw_weights();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# curve {label}: cjg={} gamma={} delta={} delta_scaled={} n_photon={} init_weights=({}, {}) \
         mode={:?} mu_mode={:?} selection={:?} fock_cutoff={} steps={} tau_max={}",
        fmt_f(spec.cjg),
        fmt_f(p.gamma),
        fmt_f(spec.delta),
        fmt_f(p.delta_scaled()),
        spec.n_photon,
        fmt_f(w0.re),
        fmt_f(w1.re),
        spec.mode,
        spec.mu_mode,
        spec.selection,
        spec.space().fock_cutoff,
        spec.steps,
        spec.tau_max
    );
    Ok(s)
}

fn file_header(title: &str) -> String {
    format!(
        "# {title}\n# generated by cpb-sim v{}\n",
        env!("CARGO_PKG_VERSION")
    )
}

fn entanglement_csv(title: &str, spec: &SweepSpec) -> Result<String> {
    let rows = entanglement_rows(spec)?;
    let mut out = file_header(title);
    out.push_str(&params_comment("main", spec)?);
    out.push_str(&peak_comment("concurrence", spec, false)?);
    out.push_str(ENTANGLEMENT_HEADER);
    out.push('\n');
    for r in &rows {
        let cols = [
            r.tau,
            r.pt_support[0],
            r.pt_support[1],
            r.pt_support[2],
            r.pt_support[3],
            r.pop_g_n,
            r.pop_e_nm1,
            r.pop_g_np1,
            r.pop_e_n,
            r.coherence.re,
            r.coherence.im,
            r.concurrence,
            r.negativity,
        ];
        let line: Vec<String> = cols.iter().map(|&v| fmt_f(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn teleport_csv(title: &str, spec: &SweepSpec) -> Result<String> {
    let rows = teleport_rows(spec)?;
    let mut out = file_header(title);
    out.push_str(&params_comment("main", spec)?);
    out.push_str(&peak_comment("f_avg", spec, true)?);
    out.push_str(TELEPORT_HEADER);
    out.push('\n');
    for r in &rows {
        let cols = [
            r.tau,
            r.outcome_probs[0],
            r.outcome_probs[1],
            r.outcome_probs[2],
            r.outcome_probs[3],
            r.fidelities[PSI_PLUS],
            r.mean_fidelity,
            r.avg_over_inputs,
        ];
        let line: Vec<String> = cols.iter().map(|&v| fmt_f(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn multi_curve_csv(preset: &FigurePreset) -> Result<String> {
    let mut out = file_header(preset.description);
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let grid = preset.curves[0].1.grid()?;
    for (label, spec) in &preset.curves {
        out.push_str(&params_comment(label, spec)?);
        out.push_str(&peak_comment(label, spec, true)?);
        let rows = teleport_rows(spec)?;
        columns.push(rows.iter().map(|r| r.avg_over_inputs).collect());
    }
    out.push_str("tau");
    for (label, _) in &preset.curves {
        out.push(',');
        out.push_str(label);
    }
    out.push('\n');
    for (i, &tau) in grid.iter().enumerate() {
        out.push_str(&fmt_f(tau));
        for col in &columns {
            out.push(',');
            out.push_str(&fmt_f(col[i]));
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Serialize)]
struct JsonDocument<'a, T: Serialize> {
    title: &'a str,
    version: &'static str,
    curves: Vec<JsonCurve<'a, T>>,
}

#[derive(Serialize)]
struct JsonCurve<'a, T: Serialize> {
    label: &'a str,
    spec: &'a SweepSpec,
    rows: T,
}

fn render_json(preset_title: &str, curves: &[(String, SweepSpec)]) -> Result<String> {
    // JSON mirrors the CSV semantics with named fields per record.
    let mut rendered = Vec::new();
    for (label, spec) in curves {
        let value = if spec.is_teleport() {
            serde_json::to_value(teleport_rows(spec)?)
        } else {
            serde_json::to_value(entanglement_rows(spec)?)
        }
        .map_err(|e| SimError::Invariant(format!("json serialization failed: {e}")))?;
        rendered.push(JsonCurve {
            label: label.as_str(),
            spec,
            rows: value,
        });
    }
    let doc = JsonDocument {
        title: preset_title,
        version: env!("CARGO_PKG_VERSION"),
        curves: rendered,
    };
    serde_json::to_string_pretty(&doc)
        .map_err(|e| SimError::Invariant(format!("json serialization failed: {e}")))
}

fn write_out(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| SimError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Emit one figure preset to `out_path`.
pub fn run_figure(id: FigureId, out_path: &Path, format: Format) -> Result<()> {
    let preset = id.preset();
    for (_, spec) in &preset.curves {
        spec.validate()?;
    }
    let contents = match format {
        Format::Json => render_json(preset.description, &preset.curves)?,
        Format::Csv => {
            if preset.multi_curve {
                multi_curve_csv(&preset)?
            } else {
                let (_, spec) = &preset.curves[0];
                if spec.is_teleport() {
                    teleport_csv(preset.description, spec)?
                } else {
                    entanglement_csv(preset.description, spec)?
                }
            }
        }
    };
    write_out(out_path, &contents)
}

/// Emit a custom sweep to `out_path`.
pub fn run_custom(spec: &SweepSpec, out_path: &Path, format: Format) -> Result<()> {
    spec.validate()?;
    let title = "custom sweep";
    let contents = match format {
        Format::Json => render_json(title, &[("main".to_string(), spec.clone())])?,
        Format::Csv => {
            if spec.is_teleport() {
                teleport_csv(title, spec)?
            } else {
                entanglement_csv(title, spec)?
            }
        }
    };
    write_out(out_path, &contents)
}
