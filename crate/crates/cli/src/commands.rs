use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use cqhe::cqsim::{bitstring, max_deviation, tv_distance, uniform, Circuit, CircuitBuilder, Distribution, Histogram, Instruction, StateVector};
use cqhe::oracle::{evolve_distribution, semiclassical_evolve, semiclassical_matrix, walk_unitary};
use cqhe::qhe::{compile_server, run_compiled, traces_to_csv, QheConfig, QheRun, ServerCompilation};
use cqhe::szegedy::{
    build_diffusion, build_semiclassical, build_update, build_walk_step, register_superposition, t_count,
    walk_initial_state, GraphSpec, Level, SemiclassicalSchedule,
};

use crate::inputs::{parse_weights, probability_vector, DistributionFile};
use crate::{
    BuildArgs, BuildKind, Command, CompareArgs, Format, OracleCommand, QheArgs, RunQheArgs, RunSemiclassicalArgs,
    RunWalkArgs, TcountArgs,
};

pub fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Build(a) => build(a),
        Command::Tcount(a) => tcount(a),
        Command::RunQhe(a) => run_qhe(a),
        Command::RunWalk(a) => run_walk(a),
        Command::RunSemiclassical(a) => run_semiclassical(a),
        Command::Compare(a) => compare(a),
        Command::Oracle(OracleCommand::Walk { graph, steps, init, out }) => oracle_walk(graph.spec()?, steps, &init, out),
        Command::Oracle(OracleCommand::Semiclassical { graph, tq, tf, p0, out }) => {
            oracle_semiclassical(graph.spec()?, tq, tf, &p0, out)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}.{suffix}", prefix.display()))
}

fn build(a: BuildArgs) -> Result<ExitCode> {
    let g = a.graph.spec()?;
    let w = match a.kind {
        BuildKind::Walk => build_walk_step(g, a.level)?,
        BuildKind::Update => build_update(g, a.level)?,
        BuildKind::Diffusion => build_diffusion(g, a.level),
        BuildKind::Semiclassical => build_semiclassical(g, SemiclassicalSchedule::new(a.tq, a.tf)?, a.level)?,
    };
    emit(a.out.as_deref(), &w.circuit.to_json())?;
    eprintln!(
        "{g}: {} qubits ({} ancillas), {} instructions, T-count {}",
        w.circuit.n_qubits(),
        w.ancilla_count,
        w.circuit.len(),
        w.tcount_actual
    );
    Ok(ExitCode::SUCCESS)
}

fn tcount(a: TcountArgs) -> Result<ExitCode> {
    let g = a.graph.spec()?;
    if let Some(eps) = a.eps {
        if !(eps > 0.0 && eps < 1.0) {
            bail!("--eps must lie in (0, 1), got {eps}");
        }
    }
    let report = t_count(g, a.eps);
    let compiled = match g {
        GraphSpec::Complete { .. } => None,
        _ => Some(build_walk_step(g, Level::CliffordT)?.tcount_actual),
    };
    let text = match a.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            if let Some(c) = compiled {
                v["compiled_T"] = c.into();
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Table => {
            let mut t = report.to_string();
            if let Some(c) = compiled {
                let _ = writeln!(t, "compiled   {c}");
            }
            t
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn config(q: &QheArgs, protected: Option<usize>) -> QheConfig {
    let mut c = QheConfig::new(q.mode, q.shots, q.seed);
    c.protected = protected;
    c.trace_keys = q.trace_keys;
    c
}

/// Writes the histograms, the report and the optional key trace.
fn write_run(q: &QheArgs, run: &QheRun, decrypted: &str, extra: serde_json::Value) -> Result<()> {
    let p = &q.out_prefix;
    fs::write(with_suffix(p, "encrypted.csv"), run.encrypted.to_csv())?;
    fs::write(with_suffix(p, "decrypted.csv"), decrypted)?;
    let mut report = serde_json::to_value(&run.report)?;
    report["within_bound"] = run.report.within_bound().into();
    report["mode"] = q.mode.to_string().into();
    report["shots"] = q.shots.into();
    report["seed"] = q.seed.into();
    if let serde_json::Value::Object(map) = extra {
        for (k, v) in map {
            report[k] = v;
        }
    }
    fs::write(with_suffix(p, "report.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    if q.trace_keys {
        fs::write(with_suffix(p, "keys.csv"), traces_to_csv(&run.traces))?;
    }
    Ok(())
}

fn compile(circuit: &Circuit, q: &QheArgs) -> Result<ServerCompilation> {
    Ok(compile_server(circuit, q.mode)?)
}

fn run_qhe(a: RunQheArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&a.circuit).with_context(|| format!("reading {}", a.circuit.display()))?;
    let circuit = Circuit::from_json(&text)?;
    let mut init = StateVector::zero(circuit.n_qubits());
    if let Some(path) = &a.init_circuit {
        let prep = Circuit::from_json(&fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)?;
        if !prep.is_unitary() || prep.n_qubits() > circuit.n_qubits() {
            bail!("the init circuit must be gate-only and no wider than the circuit");
        }
        for instr in prep.instructions() {
            if let Instruction::Gate { gate, qubits } = instr {
                init.apply_gate(*gate, qubits)?;
            }
        }
    }
    let comp = compile(&circuit, &a.qhe)?;
    let run = run_compiled(&comp, &init, &config(&a.qhe, a.protected))?;
    let decrypted = run.decrypted.to_csv();
    write_run(&a.qhe, &run, &decrypted, serde_json::json!({ "T": comp.t_count() }))?;
    Ok(ExitCode::SUCCESS)
}

/// Histogram CSV restricted to the graph's own nodes; returns the CSV and
/// the shots that landed on padding nodes.
fn node_histogram_csv(hist: &Histogram, g: GraphSpec) -> (String, u64) {
    let original = g.original_nodes();
    let mut out = String::from("bitstring,count\n");
    let mut padding = 0;
    for (&v, &c) in hist.raw_counts() {
        if original.contains(&v) {
            let _ = writeln!(out, "{},{c}", bitstring(v, hist.width()));
        } else {
            padding += c;
        }
    }
    (out, padding)
}

fn run_walk(a: RunWalkArgs) -> Result<ExitCode> {
    let g = a.graph.spec()?;
    let weights = parse_weights(&a.init)?;
    let original = g.original_nodes();
    if let Some((node, _)) = weights.iter().find(|(node, _)| !original.contains(node)) {
        bail!("node {node} is not a node of {g}");
    }
    let walk = build_walk_step(g, Level::CliffordT)?;
    let n = walk.n;
    let mut b = CircuitBuilder::new(walk.circuit.n_qubits(), n);
    for _ in 0..a.steps {
        b.extend(walk.circuit.instructions().iter().cloned());
    }
    for k in 0..n {
        b.measure(k, k);
    }
    let circuit = b.build()?;
    let init = walk_initial_state(&walk, &weights)?;
    let comp = compile(&circuit, &a.qhe)?;
    let run = run_compiled(&comp, &init, &config(&a.qhe, Some(2 * n)))?;
    let (decrypted, padding) = node_histogram_csv(&run.decrypted, g);
    if padding > 0 {
        eprintln!("warning: {padding} shots decrypted to padding nodes");
    }
    let extra = serde_json::json!({ "graph": g.to_string(), "steps": a.steps, "T": comp.t_count(), "padding_shots": padding });
    write_run(&a.qhe, &run, &decrypted, extra)?;
    Ok(ExitCode::SUCCESS)
}

fn steps_csv(hist: &Histogram, n: usize, steps: usize, nodes: &[usize]) -> String {
    let mut out = String::from("step,node,probability\n");
    for s in 0..=steps {
        let positions: Vec<usize> = (s * n..(s + 1) * n).collect();
        let m = hist.marginal(&positions);
        let total = m.shots() as f64;
        for &v in nodes {
            let _ = writeln!(out, "{s},{},{}", bitstring(v, n), m.get(v) as f64 / total);
        }
    }
    out
}

fn run_semiclassical(a: RunSemiclassicalArgs) -> Result<ExitCode> {
    let g = a.graph.spec()?;
    let schedule = SemiclassicalSchedule::new(a.tq, a.tf)?;
    let circuit = build_semiclassical(g, schedule, Level::CliffordT)?;
    let n = circuit.n;
    let p0 = probability_vector(&a.p0, g.circuit_nodes())?;
    let weights: Vec<(usize, f64)> = p0.iter().copied().enumerate().filter(|p| p.1 > 0.0).collect();
    let init = register_superposition(n, circuit.circuit.n_qubits(), &weights)?;
    let comp = compile(&circuit.circuit, &a.qhe)?;
    let run = run_compiled(&comp, &init, &config(&a.qhe, Some(2 * n)))?;
    let all: Vec<usize> = (0..g.circuit_nodes()).collect();
    fs::write(with_suffix(&a.qhe.out_prefix, "steps.csv"), steps_csv(&run.decrypted, n, a.tf, &g.original_nodes()))?;
    fs::write(with_suffix(&a.qhe.out_prefix, "encrypted-steps.csv"), steps_csv(&run.encrypted, n, a.tf, &all))?;
    let extra = serde_json::json!({ "graph": g.to_string(), "t_q": a.tq, "t_f": a.tf, "T": comp.t_count() });
    write_run(&a.qhe, &run, &run.decrypted.to_csv(), extra)?;
    Ok(ExitCode::SUCCESS)
}

fn uniform_like(file: &DistributionFile) -> DistributionFile {
    let w = file.label_width();
    match file {
        DistributionFile::Single(_) => DistributionFile::Single(uniform(w)),
        DistributionFile::Steps(s) => DistributionFile::Steps(s.keys().map(|&k| (k, uniform(w))).collect()),
    }
}

fn compare(a: CompareArgs) -> Result<ExitCode> {
    let first = DistributionFile::read(&a.first)?;
    let second = if a.second == "uniform" { uniform_like(&first) } else { DistributionFile::read(Path::new(&a.second))? };
    let pairs: BTreeMap<Option<usize>, (Distribution, Distribution)> = match (first, second) {
        (DistributionFile::Single(p), DistributionFile::Single(q)) => BTreeMap::from([(None, (p, q))]),
        (DistributionFile::Steps(p), DistributionFile::Steps(mut q)) => {
            if p.len() != q.len() || p.keys().any(|k| !q.contains_key(k)) {
                bail!("the two trajectories cover different steps");
            }
            p.into_iter().map(|(k, d)| (Some(k), (d, q.remove(&k).unwrap_or_default()))).collect()
        }
        _ => bail!("cannot compare a single distribution with a trajectory"),
    };
    let mut worst_tv: f64 = 0.0;
    let mut worst_dev: f64 = 0.0;
    for (step, (p, q)) in &pairs {
        let tv = tv_distance(p, q);
        let dev = max_deviation(p, q);
        if let Some(s) = step {
            println!("step {s} tv {tv:.6} max_deviation {dev:.6}");
        }
        worst_tv = worst_tv.max(tv);
        worst_dev = worst_dev.max(dev);
    }
    let pass = worst_tv <= a.threshold;
    println!("tv {worst_tv:.6}");
    println!("max_deviation {worst_dev:.6}");
    println!("threshold {}", a.threshold);
    println!("result {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn oracle_walk(g: GraphSpec, steps: usize, init: &str, out: Option<PathBuf>) -> Result<ExitCode> {
    let op = walk_unitary(&g.transition_matrix());
    let state = op.superposition(&parse_weights(init)?)?;
    let p = evolve_distribution(&op, &state, steps)?;
    let original = g.original_nodes();
    let stray: f64 = (0..p.len()).filter(|v| !original.contains(v)).map(|v| p[v]).sum();
    if stray > 1e-12 {
        bail!("{stray} probability on padding nodes; the initial state must stay on the graph's nodes");
    }
    let mut text = String::from("node,probability\n");
    for v in original {
        let _ = writeln!(text, "{},{}", bitstring(v, g.width()), p[v]);
    }
    emit(out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn oracle_semiclassical(g: GraphSpec, tq: usize, tf: usize, p0: &str, out: Option<PathBuf>) -> Result<ExitCode> {
    SemiclassicalSchedule::new(tq, tf)?;
    let gq = semiclassical_matrix(&g.transition_matrix(), tq)?;
    let p0 = probability_vector(p0, gq.dim())?;
    let traj = semiclassical_evolve(&p0, &gq, tf)?;
    let mut text = String::from("step,node,probability\n");
    for (s, p) in traj.iter().enumerate() {
        for v in g.original_nodes() {
            let _ = writeln!(text, "{s},{},{}", bitstring(v, g.width()), p[v]);
        }
    }
    emit(out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}
