//! Acceptance gate: ten numbered criteria, one test and one printed
//! PASS/FAIL line each. Run with `--nocapture` to see the lines for
//! passing criteria as well.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cpb_sim::cli::{FigureId, Format, ALL_FIGURES};
use cpb_sim::entanglement::{
    analyze, concurrence, partial_transpose_qubit, project_two_qubit, two_qubit_negativity,
    Selection,
};
use cpb_sim::evolution::{closed_form_rho, tau_grid, InitialState, MuMode, Propagator};
use cpb_sim::linalg::{c, hermiticity_defect, max_abs_diff, trace, C64};
use cpb_sim::model::{derive_params, excitation_number, ModelParams};
use cpb_sim::search::{refine_first_dip, refine_first_peak, zero_runs};
use cpb_sim::teleport::{average_fidelity, channel_from_rho, teleport_protocol, UnknownQubit};
use cpb_sim::HilbertSpace;

fn params(cjg: f64, delta: f64) -> ModelParams {
    derive_params(cjg, 1.0, 0.5, 1.0 + delta, 1.0, 1.0)
        .unwrap()
        .with_photon_number(1)
}

fn verdict(n: usize, name: &str, pass: bool) -> bool {
    println!(
        "acceptance criterion {n} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

/// Concurrence of the pair projection along an oracle sweep.
fn concurrence_series(
    p: &ModelParams,
    init: &InitialState,
    grid: &[f64],
    selection: Selection,
) -> Vec<f64> {
    let s = HilbertSpace::for_params(p);
    let prop = Propagator::new(p, s).unwrap();
    let psi0 = init.state_vector(s).unwrap();
    grid.iter()
        .map(|&tau| {
            let rho = prop.evolve(&psi0, tau).unwrap().density();
            concurrence(&project_two_qubit(&rho, init.fock(), selection).unwrap()).unwrap()
        })
        .collect()
}

fn concurrence_at(p: &ModelParams, init: &InitialState, selection: Selection, tau: f64) -> f64 {
    let s = HilbertSpace::for_params(p);
    let psi0 = init.state_vector(s).unwrap();
    let rho = Propagator::new(p, s).unwrap().evolve(&psi0, tau).unwrap().density();
    concurrence(&project_two_qubit(&rho, init.fock(), selection).unwrap()).unwrap()
}

fn favg_series(p: &ModelParams, n: usize, grid: &[f64]) -> Vec<f64> {
    let s = HilbertSpace::for_params(p);
    let prop = Propagator::new(p, s).unwrap();
    let psi0 = InitialState::GroundFock(n).state_vector(s).unwrap();
    grid.iter()
        .map(|&tau| {
            let rho = prop.evolve(&psi0, tau).unwrap().density();
            average_fidelity(&channel_from_rho(&rho, n, Selection::AdjacentPair).unwrap())
        })
        .collect()
}

/// Parameter/init combinations shared by criteria 1 and 2.
fn agreement_cases() -> Vec<(ModelParams, InitialState)> {
    let mut cases = Vec::new();
    for cjg in [2.5, 0.4, 5.0] {
        for delta in [0.0, 0.5, 1.0] {
            for init in [InitialState::GroundFock(1), InitialState::ExcitedFock(1)] {
                cases.push((params(cjg, delta), init));
            }
        }
    }
    cases
}

#[test]
fn criterion_01_oracle_agreement() {
    let grid = tau_grid(10.0, 500).unwrap();
    let mut worst: f64 = 0.0;
    for (p, init) in agreement_cases() {
        let s = HilbertSpace::for_params(&p);
        let prop = Propagator::new(&p, s).unwrap();
        let psi0 = init.state_vector(s).unwrap();
        for &tau in &grid {
            let a = closed_form_rho(&p, &init, s, tau, MuMode::Standard).unwrap();
            let b = prop.evolve(&psi0, tau).unwrap().density();
            worst = worst.max(max_abs_diff(&a.matrix, &b.matrix));
        }
    }
    let pass = worst < 1e-8;
    println!("  max closed-form vs oracle deviation: {worst:.3e}");
    assert!(verdict(1, "oracle agreement", pass));
}

#[test]
fn criterion_02_unitarity_positivity_suite() {
    let grid = tau_grid(10.0, 500).unwrap();
    let mut pass = true;
    for (p, init) in agreement_cases() {
        let s = HilbertSpace::for_params(&p);
        let prop = Propagator::new(&p, s).unwrap();
        let psi0 = init.state_vector(s).unwrap();
        let n_ex = excitation_number(s);
        let ex0 = trace(&(&psi0.density().matrix * &n_ex)).re;
        for &tau in &grid {
            let rho = prop.evolve(&psi0, tau).unwrap().density();
            pass &= (rho.trace() - 1.0).abs() < 1e-10;
            pass &= hermiticity_defect(&rho.matrix) < 1e-12;
            pass &= (rho.purity() - 1.0).abs() < 1e-9;
            pass &= (trace(&(&rho.matrix * &n_ex)).re - ex0).abs() < 1e-10;
            pass &= (trace(&partial_transpose_qubit(&rho)).re - 1.0).abs() < 1e-10;
            pass &= rho.min_eigenvalue().unwrap() > -1e-10;
        }
    }
    assert!(verdict(2, "unitarity/positivity suite", pass));
}

#[test]
fn criterion_03_maximal_entanglement_at_resonance() {
    let p = params(2.5, 0.0);
    let init = InitialState::GroundFock(1);
    let grid = tau_grid(10.0, 1000).unwrap();
    let ys = concurrence_series(&p, &init, &grid, Selection::AdjacentPair);
    let (tau_star, c_max) = refine_first_peak(
        |tau| Ok(concurrence_at(&p, &init, Selection::AdjacentPair, tau)),
        &grid,
        &ys,
        0.5,
        1e-8,
    )
    .unwrap()
    .expect("a concurrence peak");
    let s = HilbertSpace::for_params(&p);
    let psi0 = init.state_vector(s).unwrap();
    let rho = Propagator::new(&p, s).unwrap().evolve(&psi0, tau_star).unwrap().density();
    let rep = analyze(&rho, 1, Selection::AdjacentPair, tau_star).unwrap();
    let pass = c_max >= 0.999999
        && (rep.pop_g_n - 0.5).abs() < 1e-6
        && (rep.pop_e_nm1 - 0.5).abs() < 1e-6;
    println!("  standard-mode peak: tau*={tau_star:.6} concurrence={c_max:.9}");

    // Literal-frequency mode: location reported only (the printed time
    // axis cannot be pinned; see the coefficient-mode docs).
    let lit_eval = |tau: f64| {
        let rho = closed_form_rho(&p, &init, s, tau, MuMode::LiteralFrequency)?;
        concurrence(&project_two_qubit(&rho, 1, Selection::AdjacentPair)?)
    };
    let lit_ys: Vec<f64> = grid.iter().map(|&t| lit_eval(t).unwrap()).collect();
    if let Some((lt, lv)) = refine_first_peak(lit_eval, &grid, &lit_ys, 0.5, 1e-8).unwrap() {
        println!("  literal-mode peak (reported, not asserted): tau*={lt:.6} concurrence={lv:.9}");
    }
    assert!(verdict(3, "maximal entanglement at resonance", pass));
}

#[test]
fn criterion_04_detuning_tradeoff() {
    let grid = tau_grid(10.0, 1000).unwrap();
    let init = InitialState::GroundFock(1);
    let p0 = params(2.5, 0.0);
    let p1 = params(2.5, 1.0);
    let c0 = concurrence_series(&p0, &init, &grid, Selection::AdjacentPair);
    let c1 = concurrence_series(&p1, &init, &grid, Selection::AdjacentPair);
    let max0 = c0.iter().cloned().fold(0.0, f64::max);
    let max1 = c1.iter().cloned().fold(0.0, f64::max);

    let sep0 = refine_first_dip(
        |tau| Ok(concurrence_at(&p0, &init, Selection::AdjacentPair, tau)),
        &grid,
        &c0,
        0.5,
        1e-2,
        1e-6,
    )
    .unwrap()
    .expect("resonant separability time");
    let sep1 = refine_first_dip(
        |tau| Ok(concurrence_at(&p1, &init, Selection::AdjacentPair, tau)),
        &grid,
        &c1,
        0.5,
        1e-2,
        1e-6,
    )
    .unwrap()
    .expect("detuned separability time");

    println!("  max concurrence: delta=0 -> {max0:.6}, delta=1 -> {max1:.6}");
    println!("  first separability time: delta=0 -> {:.4}, delta=1 -> {:.4}", sep0.0, sep1.0);
    let pass = max1 <= 0.99 && max1 < max0 && sep1.0 > sep0.0 + 1e-3;
    assert!(verdict(4, "detuning trade-off", pass));
}

#[test]
fn criterion_05_capacitance_ratio_effect() {
    // Note: the ratios 5/2 and 2/5 share the same gamma (sqrt(x)/(1+x)
    // symmetry), so "the C_jg direction" is exercised by an actual halving
    // of the effective coupling: solve sqrt(c)/(1+c) = gamma/2 for c < 1.
    let base = params(2.5, 0.0);
    let g_half = base.gamma / 2.0;
    let s_root = (1.0 - (1.0 - 4.0 * g_half * g_half).sqrt()) / (2.0 * g_half);
    let halved = params(s_root * s_root, 0.0);
    assert!((halved.gamma - g_half).abs() < 1e-12);

    let grid = tau_grid(20.0, 1500).unwrap();
    let init = InitialState::GroundFock(1);
    let mut peaks = Vec::new();
    for p in [&base, &halved] {
        let ys = concurrence_series(p, &init, &grid, Selection::AdjacentPair);
        let peak = refine_first_peak(
            |tau| Ok(concurrence_at(p, &init, Selection::AdjacentPair, tau)),
            &grid,
            &ys,
            0.5,
            1e-8,
        )
        .unwrap()
        .expect("first concurrence peak");
        peaks.push(peak);
    }
    println!(
        "  first peak: gamma={:.4} -> tau*={:.4} C={:.9}; gamma={:.4} -> tau*={:.4} C={:.9}",
        base.gamma, peaks[0].0, peaks[0].1, halved.gamma, peaks[1].0, peaks[1].1
    );
    let pass = peaks[1].0 > peaks[0].0 + 1e-3
        && (peaks[0].1 - 1.0).abs() < 1e-6
        && (peaks[1].1 - 1.0).abs() < 1e-6;
    assert!(verdict(5, "capacitance-ratio effect", pass));
}

#[test]
fn criterion_06_ppt_concurrence_consistency() {
    let mut pass = true;
    let mut points = 0usize;
    for id in ALL_FIGURES {
        for (_, spec) in id.preset().curves {
            let p = spec.params().unwrap();
            let init = spec.init().unwrap();
            if init.fock() == 0 {
                continue;
            }
            let s = spec.space();
            let prop = Propagator::new(&p, s).unwrap();
            let psi0 = init.state_vector(s).unwrap();
            for &tau in &spec.grid().unwrap() {
                let rho = prop.evolve(&psi0, tau).unwrap().density();
                let two = project_two_qubit(&rho, init.fock(), Selection::AdjacentPair).unwrap();
                let neg = two_qubit_negativity(&two).unwrap();
                let conc = concurrence(&two).unwrap();
                if (neg > 1e-8) != (conc > 1e-6) {
                    println!("  mismatch at figure {} tau={tau}: negativity={neg:.3e} concurrence={conc:.3e}", id.as_str());
                    pass = false;
                }
                points += 1;
            }
        }
    }
    println!("  checked {points} grid points across all presets");
    assert!(verdict(6, "PPT<=>concurrence consistency", pass));
}

#[test]
fn criterion_07_sudden_death_and_birth() {
    // Faithful check of the sudden-death/-birth claim for the superposed
    // init at delta=1: the concurrence of the projected state must vanish
    // (below 1e-6) on at least two disjoint tau intervals in [0, 15].
    // The global state stays pure under this dissipation-free model, so
    // the measure only dips to ~1e-4 at isolated points; the criterion is
    // expected to fail and is reported honestly rather than weakened.
    let preset = FigureId::F3b.preset();
    let spec = &preset.curves[0].1;
    let p = spec.params().unwrap();
    let init = spec.init().unwrap();
    let grid = spec.grid().unwrap();
    let ys = concurrence_series(&p, &init, &grid, spec.selection);
    let runs = zero_runs(&grid, &ys, 1e-6);
    let min_after_start = ys[5..].iter().cloned().fold(f64::INFINITY, f64::min);
    println!(
        "  zero-concurrence intervals (threshold 1e-6): {} | min concurrence after onset: {min_after_start:.3e}",
        runs.len()
    );
    let pass = runs.len() >= 2;
    assert!(verdict(7, "sudden death/birth intervals", pass));
}

#[test]
fn criterion_08_teleportation_limits() {
    // Bell channel: perfect for 20 random inputs.
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let bell = {
        let mut m = cpb_sim::linalg::CMat::zeros(4, 4);
        for (i, j) in [(1usize, 1usize), (1, 2), (2, 1), (2, 2)] {
            m[(i, j)] = c(0.5);
        }
        cpb_sim::entanglement::TwoQubitState {
            matrix: m,
            field_levels: (0, 1),
            residual_weight: 0.0,
            unfaithful: false,
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut pass = true;
    for _ in 0..20 {
        let input = UnknownQubit::new(
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
        )
        .unwrap();
        let r = teleport_protocol(&bell, &input, 0.0).unwrap();
        pass &= (r.mean_fidelity - 1.0).abs() < 1e-9;
    }

    // Product channel: input-averaged fidelity below the classical limit.
    let p = params(2.5, 0.0);
    let s = HilbertSpace::for_params(&p);
    let psi0 = InitialState::GroundFock(1).state_vector(s).unwrap();
    let product_chan = channel_from_rho(&psi0.density(), 1, Selection::AdjacentPair).unwrap();
    let favg0 = average_fidelity(&product_chan);
    pass &= favg0 <= 2.0 / 3.0 + 1e-9;

    // Channel at the concurrence peak: mean fidelity 1.
    let tau_star = std::f64::consts::FRAC_PI_4 / p.lambda_c;
    let rho = Propagator::new(&p, s).unwrap().evolve(&psi0, tau_star).unwrap().density();
    let peak_chan = channel_from_rho(&rho, 1, Selection::AdjacentPair).unwrap();
    let input = UnknownQubit::new(c(s2), C64::new(0.3, 0.64)).unwrap();
    let r = teleport_protocol(&peak_chan, &input, tau_star).unwrap();
    println!(
        "  product-channel f_avg={favg0:.6}; peak-channel mean fidelity={:.9}",
        r.mean_fidelity
    );
    pass &= (r.mean_fidelity - 1.0).abs() < 1e-6;
    assert!(verdict(8, "teleportation limits", pass));
}

#[test]
fn criterion_09_directional_fidelity() {
    let grid = tau_grid(10.0, 1000).unwrap();
    // Detuning ordering at C_jg=5, n=1.
    let maxima: Vec<f64> = [0.1, 0.5, 1.0]
        .iter()
        .map(|&d| {
            favg_series(&params(5.0, d), 1, &grid)
                .into_iter()
                .fold(0.0, f64::max)
        })
        .collect();
    println!(
        "  max f_avg over tau: delta=0.1 -> {:.6}, 0.5 -> {:.6}, 1 -> {:.6}",
        maxima[0], maxima[1], maxima[2]
    );
    let mut pass = maxima[0] > maxima[1] + 1e-6 && maxima[1] > maxima[2] + 1e-6;

    // Photon-number ordering of the first peak time at delta=0.1.
    let mut peak_times = Vec::new();
    for n in [1usize, 2, 3] {
        let p = params(5.0, 0.1).with_photon_number(n);
        let ys = favg_series(&p, n, &grid);
        let peak = refine_first_peak(
            |tau| {
                let s = HilbertSpace::for_params(&p);
                let psi0 = InitialState::GroundFock(n).state_vector(s)?;
                let rho = Propagator::new(&p, s)?.evolve(&psi0, tau)?.density();
                Ok(average_fidelity(&channel_from_rho(&rho, n, Selection::AdjacentPair)?))
            },
            &grid,
            &ys,
            0.75,
            1e-8,
        )
        .unwrap()
        .expect("first fidelity peak");
        peak_times.push(peak.0);
    }
    println!(
        "  first f_avg peak time: n=1 -> {:.4}, n=2 -> {:.4}, n=3 -> {:.4}",
        peak_times[0], peak_times[1], peak_times[2]
    );
    pass &= peak_times[0] > peak_times[1] + 1e-6 && peak_times[1] > peak_times[2] + 1e-6;
    assert!(verdict(9, "directional fidelity checks", pass));
}

#[test]
fn criterion_10_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut pass = true;
    for id in ALL_FIGURES {
        let mut outputs: Vec<Vec<u8>> = Vec::new();
        for (run, threads) in [(0usize, 1usize), (1, 1), (2, 4), (3, 4)] {
            let path = dir.path().join(format!("{}_{run}.csv", id.as_str()));
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| cpb_sim::cli::run_figure(id, &path, Format::Csv)).unwrap();
            outputs.push(std::fs::read(&path).unwrap());
        }
        if !outputs.iter().all(|o| *o == outputs[0]) {
            println!("  figure {} output differs across runs/threads", id.as_str());
            pass = false;
        }
    }
    assert!(verdict(10, "byte-identical figure output", pass));
}
