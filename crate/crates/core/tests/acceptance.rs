//! Acceptance criteria for the simulator and the experiment harness.
//!
//! Runs as a plain binary (`harness = false`) so that every criterion prints
//! exactly one `[PASS]` / `[FAIL]` line regardless of output capture:
//!
//!     cargo test --release --test acceptance
//!
//! Set `ACCEPTANCE_OUT=<dir>` to keep the emitted CSV files.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use common::*;
use qaoa_entangle::adapt::{Algorithm, Connectivity, Mode};
use qaoa_entangle::ansatz::{AnsatzProgram, Reference};
use qaoa_entangle::entanglement::{
    entropy, haar_baseline, project_qubit, Bipartition, LogBase, HAAR_MIDDLE_ENTROPY_6Q_BITS,
};
use qaoa_entangle::harness::io::read_csv;
use qaoa_entangle::harness::io::write_csv;
use qaoa_entangle::harness::{
    read_run_dir, run_delta_comparison, run_sweep, scatter_correlations, scatter_rows,
    spectrum_study_from_records, ExperimentConfig, ScatterRow, SweepOutcome,
};
use qaoa_entangle::problem::build_hamiltonian;
use qaoa_entangle::resources::{resources_to_threshold, CONVERGENCE_THRESHOLD};
use qaoa_entangle::sim::{PauliString, QuantumState};
use rand::Rng;

const BASE_SEED: u64 = 0;
const MAIN_INSTANCES: usize = 50;
const SYMMETRY_INSTANCES: usize = 20;
const DELTA_INSTANCES: usize = 30;
const SPECTRUM_GRAPHS: usize = 10;
const SPECTRUM_SAMPLES: usize = 200;
const HAAR_SAMPLES: usize = 10_000;
const LAYERS: usize = 15;

struct Outcome {
    pass: bool,
    summary: String,
}

fn verdict(pass: bool, summary: String) -> Outcome {
    Outcome { pass, summary }
}

struct Sweeps {
    out: PathBuf,
    full: SweepOutcome,
    ladder: SweepOutcome,
    linear: SweepOutcome,
    qaoa: SweepOutcome,
}

fn base_config(out: &std::path::Path) -> ExperimentConfig {
    ExperimentConfig {
        n_qubits: 6,
        n_instances: MAIN_INSTANCES,
        base_seed: BASE_SEED,
        mode: Mode::Preserve,
        p_max: Some(LAYERS),
        out: Some(out.to_path_buf()),
        ..Default::default()
    }
}

fn run_main_sweeps(out: PathBuf) -> Sweeps {
    let cfg = base_config(&out);
    let t = Instant::now();
    let sweep = |algo, pool| {
        run_sweep(&ExperimentConfig {
            algo,
            pool,
            ..cfg.clone()
        })
        .expect("sweep")
    };
    let s = Sweeps {
        full: sweep(Algorithm::Adapt, Connectivity::Full),
        ladder: sweep(Algorithm::Adapt, Connectivity::Ladder),
        linear: sweep(Algorithm::Adapt, Connectivity::Linear),
        qaoa: sweep(Algorithm::Qaoa, Connectivity::Full),
        out,
    };
    println!(
        "[INFO] main sweeps (4 x {MAIN_INSTANCES} instances) took {:.1}s",
        t.elapsed().as_secs_f64()
    );
    for o in [&s.full, &s.ladder, &s.linear, &s.qaoa] {
        if !o.failures.is_empty() {
            println!(
                "[INFO] {}: {} instance failures",
                o.config.label(),
                o.failures.len()
            );
        }
    }
    s
}

fn layer_row(o: &SweepOutcome, layer: usize) -> &qaoa_entangle::harness::AggregateRow {
    o.aggregate
        .iter()
        .find(|r| r.layer == layer)
        .expect("aggregate row")
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut r = rng(0xACCE);
    let mut failures = Vec::new();
    let cases = 100;
    for case in 0..cases {
        let n = r.random_range(2..=6);
        let g = random_graph(n, &mut r);
        let h = build_hamiltonian(&g, if case % 2 == 0 { 0.05 } else { 0.0 }).unwrap();

        let mut s = random_state(n, &mut r);
        for _ in 0..20 {
            if r.random_bool(0.4) {
                s.apply_diagonal_phases(h.diagonal(), r.random_range(-10.0..10.0));
            } else {
                s.apply_mixer_rotation(&random_mixer(n, &mut r), r.random_range(-10.0..10.0))
                    .unwrap();
            }
        }
        if (s.norm() - 1.0).abs() >= 1e-9 {
            failures.push(format!("norm case {case}"));
        }

        let start = random_state(n, &mut r);
        let m = random_mixer(n, &mut r);
        let beta = r.random_range(-20.0..20.0);
        let mut back = start.clone();
        back.apply_mixer_rotation(&m, beta).unwrap();
        back.apply_mixer_rotation(&m, -beta).unwrap();
        if max_diff(back.amplitudes(), start.amplitudes()) >= 1e-10 {
            failures.push(format!("inverse case {case}"));
        }

        let k = r.random_range(1..n);
        let cut = Bipartition::new(n, (0..k).collect()).unwrap();
        let sa = entropy(&start, &cut, LogBase::Two).unwrap();
        if (sa - entropy(&start, &cut.swapped(), LogBase::Two).unwrap()).abs() >= 1e-10 {
            failures.push(format!("entropy symmetry case {case}"));
        }
        let mut local = start.clone();
        for _ in 0..5 {
            let q = r.random_range(0..k);
            local.apply_string_rotation(
                &PauliString::new(vec![(q, random_pauli(&mut r))]).unwrap(),
                r.random_range(-4.0..4.0),
            );
        }
        if (sa - entropy(&local, &cut, LogBase::Two).unwrap()).abs() >= 1e-10 {
            failures.push(format!("local unitary case {case}"));
        }

        let q = r.random_range(0..n);
        let (p0, p1) = (
            project_qubit(&start, q, 0).unwrap().1,
            project_qubit(&start, q, 1).unwrap().1,
        );
        if (p0 + p1 - 1.0).abs() >= 1e-10 {
            failures.push(format!("projection case {case}"));
        }

        let analytic = start.commutator_expectation(&m, h.terms()).unwrap();
        let (a, hd, psi) = (
            mixer_matrix(n, &m),
            hamiltonian_matrix(&g, if case % 2 == 0 { 0.05 } else { 0.0 }),
            vector(&start),
        );
        let e = |b: f64| expectation(&hd, &(evolve(&a, b) * &psi));
        let d = 1e-3;
        let fd = (-e(2.0 * d) + 8.0 * e(d) - 8.0 * e(-d) + e(-2.0 * d)) / (12.0 * d);
        if (analytic - fd).abs() / analytic.abs().max(1e-3) >= 1e-6 {
            failures.push(format!("gradient case {case}: {analytic} vs {fd}"));
        }

        let small = 1 + case % 3;
        let gs = if small >= 2 {
            random_graph(small, &mut r)
        } else {
            qaoa_entangle::problem::WeightedGraph::new(1, vec![]).unwrap()
        };
        let hs = build_hamiltonian(&gs, 0.05).unwrap();
        let layers = r.random_range(1..4);
        let mixers: Vec<_> = (0..layers)
            .map(|_| {
                if small >= 2 {
                    random_mixer(small, &mut r)
                } else {
                    qaoa_entangle::sim::MixerOperator::SumY
                }
            })
            .collect();
        let params: Vec<f64> = (0..2 * layers).map(|_| r.random_range(-7.0..7.0)).collect();
        let program = AnsatzProgram::with_mixers(Reference::SymmetryBroken, mixers.clone());
        let got = program.evaluate(&params, &hs, small).unwrap();
        let hsd = hamiltonian_matrix(&gs, 0.05);
        let mut v = vector(&QuantumState::symmetry_broken(small).unwrap());
        for (mx, p) in mixers.iter().zip(params.chunks(2)) {
            v = evolve(&hsd, p[0]) * v;
            v = evolve(&mixer_matrix(small, mx), p[1]) * v;
        }
        if max_diff(got.amplitudes(), v.as_slice()) >= 1e-10 {
            failures.push(format!("dense oracle case {case}"));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let pass = failures.is_empty() && secs < 60.0;
    verdict(
        pass,
        format!(
            "exactness suite, {cases} random cases x 7 properties: {} failures ({}) in {secs:.1}s (< 60s)",
            failures.len(),
            failures.first().map_or("none", String::as_str)
        ),
    )
}

fn criterion_2(s: &Sweeps) -> Outcome {
    let mut worst = 0.0f64;
    let mut steps = 0;
    let mut odd_chosen = 0;
    for rec in s
        .full
        .records
        .iter()
        .filter(|r| r.instance_id < SYMMETRY_INSTANCES)
    {
        for l in &rec.layers[1..] {
            worst = worst.max(l.max_anticommuting_gradient.unwrap_or(f64::INFINITY));
            steps += 1;
            if l.mixer.as_ref().is_some_and(|m| m.anticommutes_with_flip()) {
                odd_chosen += 1;
            }
        }
    }
    verdict(
        worst < 1e-10 && steps == SYMMETRY_INSTANCES * LAYERS && odd_chosen == 0,
        format!(
            "symmetry selection rule over {SYMMETRY_INSTANCES} instances x {LAYERS} layers ({steps} steps): max |F-odd gradient| = {worst:.2e} (< 1e-10), F-odd selections = {odd_chosen}"
        ),
    )
}

fn criterion_3(s: &Sweeps) -> Outcome {
    let (a, q) = (layer_row(&s.full, LAYERS), layer_row(&s.qaoa, LAYERS));
    verdict(
        a.mean_norm_error < q.mean_norm_error && a.median_ent_middle < q.median_ent_middle,
        format!(
            "layer {LAYERS}: mean error ADAPT {:.4} < QAOA {:.4}; median middle-cut entropy ADAPT {:.4} < QAOA {:.4} bits",
            a.mean_norm_error, q.mean_norm_error, a.median_ent_middle, q.median_ent_middle
        ),
    )
}

fn criterion_4(s: &Sweeps) -> Outcome {
    let total = s.full.records.len();
    let reached = s
        .full
        .records
        .iter()
        .filter(|r| resources_to_threshold(r, CONVERGENCE_THRESHOLD).reached_threshold)
        .count();
    let rate = reached as f64 / MAIN_INSTANCES as f64;
    verdict(
        rate >= 0.85,
        format!(
            "ADAPT full pool reaches error <= {CONVERGENCE_THRESHOLD} within {LAYERS} layers on {reached}/{MAIN_INSTANCES} instances ({:.1}%, need >= 85%; {total} runs completed)",
            100.0 * rate
        ),
    )
}

fn criterion_5(s: &Sweeps) -> Outcome {
    let a = s.full.threshold_summary(CONVERGENCE_THRESHOLD);
    let q = s.qaoa.threshold_summary(CONVERGENCE_THRESHOLD);
    verdict(
        a.n_included > 0 && q.n_included > 0 && a.mean_cnot < q.mean_cnot,
        format!(
            "mean CNOTs to threshold: ADAPT {:.1} +- {:.1} ({} runs) < QAOA {:.1} +- {:.1} ({} runs)",
            a.mean_cnot, a.std_cnot, a.n_included, q.mean_cnot, q.std_cnot, q.n_included
        ),
    )
}

fn criterion_6(s: &Sweeps) -> Outcome {
    let fin = |o: &SweepOutcome| layer_row(o, LAYERS).mean_norm_error;
    let (f, la, li) = (fin(&s.full), fin(&s.ladder), fin(&s.linear));
    let early: Vec<(usize, f64, f64)> = (1..=5)
        .map(|l| {
            (
                l,
                layer_row(&s.full, l).mean_ent_middle,
                layer_row(&s.linear, l).mean_ent_middle,
            )
        })
        .collect();
    let early_ok = early.iter().all(|(_, a, b)| a >= b);
    println!(
        "[INFO] pool ordering Ladder <= Linear (statistical, not a criterion): {la:.4} vs {li:.4} -> {}",
        la <= li
    );
    let detail: Vec<String> = early
        .iter()
        .map(|(l, a, b)| format!("l{l} {a:.3}/{b:.3}"))
        .collect();
    verdict(
        f <= la && f <= li && early_ok,
        format!(
            "final mean error Full {f:.4} <= Ladder {la:.4}, Full <= Linear {li:.4}; early mean middle entropy Full/Linear: {}",
            detail.join(", ")
        ),
    )
}

fn criterion_7(out: &std::path::Path) -> Outcome {
    let cfg = ExperimentConfig {
        n_instances: DELTA_INSTANCES,
        out: Some(out.join("delta")),
        ..base_config(out)
    };
    let t = Instant::now();
    let deltas = [-0.5, -0.1, 0.1, 0.5];
    let d = run_delta_comparison(&cfg, &deltas).expect("delta comparison");
    println!(
        "[INFO] penalty sweeps (5 x {DELTA_INSTANCES} instances) took {:.1}s",
        t.elapsed().as_secs_f64()
    );
    let final_mean = |delta: f64| {
        let o = &d.variants.iter().find(|(x, _)| *x == delta).unwrap().1;
        layer_row(o, LAYERS).mean_norm_error
    };
    let (neg, pos) = (final_mean(-0.5), final_mean(0.5));
    let mut worst_early = 0.0f64;
    for &delta in &deltas {
        for row in d
            .series(delta)
            .into_iter()
            .filter(|r| (1..=3).contains(&r.layer))
        {
            worst_early = worst_early.max(row.mean_d_norm_error.abs());
        }
    }
    verdict(
        neg <= pos && worst_early < 0.02,
        format!(
            "final mean error delta=-0.5 {neg:.4} <= delta=+0.5 {pos:.4}; max |mean error difference| over layers 1-3 and delta in +-0.1,+-0.5 = {worst_early:.4} (< 0.02)"
        ),
    )
}

fn criterion_8(s: &Sweeps) -> Outcome {
    let t = Instant::now();
    let cfg = ExperimentConfig {
        n_instances: SPECTRUM_GRAPHS,
        ..base_config(&s.out)
    };
    let records: Vec<_> = s
        .full
        .records
        .iter()
        .filter(|r| r.instance_id < SPECTRUM_GRAPHS)
        .cloned()
        .collect();
    let study = spectrum_study_from_records(&cfg, &records, SPECTRUM_SAMPLES, HAAR_SAMPLES)
        .expect("spectrum study");
    let cut = Bipartition::middle(6).unwrap();
    let h1 = haar_baseline(6, &cut, HAAR_SAMPLES, 1001, LogBase::Two)
        .unwrap()
        .mean_entropy_middle;
    let h2 = haar_baseline(6, &cut, HAAR_SAMPLES, 2002, LogBase::Two)
        .unwrap()
        .mean_entropy_middle;
    println!(
        "[INFO] spectrum study took {:.1}s",
        t.elapsed().as_secs_f64()
    );
    for l in [1, 3, 5, 10, LAYERS] {
        if let (Some(a), Some(q)) = (
            study.adapt.iter().find(|x| x.layer == l),
            study.qaoa.iter().find(|x| x.layer == l),
        ) {
            println!(
                "[INFO] spectrum layer {l:2}: mean random-parameter S_middle ADAPT {:.4}, QAOA {:.4} bits",
                a.mean_entropy_middle, q.mean_entropy_middle
            );
        }
    }
    let haar = study.haar.mean_entropy_middle;
    let q = study
        .qaoa
        .iter()
        .find(|x| x.layer == LAYERS)
        .map_or(f64::NAN, |x| x.mean_entropy_middle);
    let a = study
        .adapt
        .iter()
        .find(|x| x.layer == LAYERS)
        .map_or(f64::NAN, |x| x.mean_entropy_middle);
    let seeds_agree = (h1 - h2).abs() / h1.max(h2) < 0.01;
    let constant_agrees =
        (haar - HAAR_MIDDLE_ENTROPY_6Q_BITS).abs() / HAAR_MIDDLE_ENTROPY_6Q_BITS < 0.01;
    let qaoa_close = (q - haar).abs() / haar < 0.10;
    verdict(
        seeds_agree && constant_agrees && qaoa_close && a < q,
        format!(
            "layer {LAYERS}: QAOA S_middle {q:.4} within 10% of Haar {haar:.4} ({:.1}%), ADAPT {a:.4} < QAOA; Haar seeds {h1:.4}/{h2:.4} agree within 1%, constant {HAAR_MIDDLE_ENTROPY_6Q_BITS}",
            100.0 * (q - haar).abs() / haar
        ),
    )
}

fn criterion_9(s: &Sweeps) -> Outcome {
    let mut runs = read_run_dir(&s.full.sweep_dir().unwrap()).unwrap();
    runs.extend(read_run_dir(&s.qaoa.sweep_dir().unwrap()).unwrap());
    let rows = scatter_rows(&runs);
    let path = s.out.join("scatter.csv");
    write_csv(&path, &rows).unwrap();
    let back: Vec<ScatterRow> = read_csv(&path).unwrap();
    let corr = scatter_correlations(&back);
    let header = std::fs::read_to_string(&path).unwrap();
    let header = header.lines().next().unwrap_or_default().to_string();
    let columns_ok = ["max_ent_middle", "final_norm_error", "algo"]
        .iter()
        .all(|c| header.contains(c));
    let reported: Vec<String> = corr
        .iter()
        .map(|(k, v)| format!("{k} rho = {v:.3}"))
        .collect();
    verdict(
        columns_ok && back.len() == runs.len() && corr.len() == 2,
        format!(
            "scatter emitted {} rows with columns [{header}]; Spearman max-entropy vs final error: {}",
            back.len(),
            reported.join(", ")
        ),
    )
}

fn main() {
    // `cargo test` passes harness flags such as `--list`; listing is empty.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let keep = std::env::var_os("ACCEPTANCE_OUT").map(PathBuf::from);
    let tmp = tempfile::tempdir().unwrap();
    let out = keep.unwrap_or_else(|| tmp.path().to_path_buf());

    let mut results = vec![(1, criterion_1())];
    let sweeps = run_main_sweeps(out.clone());
    results.push((2, criterion_2(&sweeps)));
    results.push((3, criterion_3(&sweeps)));
    results.push((4, criterion_4(&sweeps)));
    results.push((5, criterion_5(&sweeps)));
    results.push((6, criterion_6(&sweeps)));
    results.push((7, criterion_7(&out)));
    results.push((8, criterion_8(&sweeps)));
    results.push((9, criterion_9(&sweeps)));

    println!();
    for (n, r) in &results {
        println!(
            "[{}] criterion {n}: {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.summary
        );
    }
    let failed = results.iter().filter(|(_, r)| !r.pass).count();
    println!(
        "\nacceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
