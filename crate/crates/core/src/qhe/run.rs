use std::fmt::Write as _;

use rand::Rng;

use super::client::client_decrypt_run;
use super::compile::{compile_server, Mode, ServerCompilation};
use super::key::{bits_to_string, encrypt_in_place, gen_key, BellOutcome, PauliKey};
use super::script::XorCountReport;
use super::QheError;
use crate::cqsim::{run, run_with_cbits, shot_rng, Circuit, Histogram, StateVector};

#[derive(Clone, Debug)]
pub struct QheConfig {
    pub mode: Mode,
    pub shots: u64,
    pub seed: u64,
    /// Qubits `0..protected` are padded; the rest (decomposition ancillas)
    /// start unencrypted in `|0>`. `None` pads every qubit.
    pub protected: Option<usize>,
    pub trace_keys: bool,
}

impl QheConfig {
    pub fn new(mode: Mode, shots: u64, seed: u64) -> Self {
        QheConfig { mode, shots, seed, protected: None, trace_keys: false }
    }
}

/// One row of the key trace: what the client saw in a single shot.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyTrace {
    pub shot: u64,
    pub initial: PauliKey,
    pub bell: Vec<BellOutcome>,
    pub final_key: PauliKey,
    pub encrypted: String,
    pub decrypted: String,
}

#[derive(Clone, Debug)]
pub struct QheRun {
    pub encrypted: Histogram,
    pub decrypted: Histogram,
    pub report: XorCountReport,
    pub traces: Vec<KeyTrace>,
}

/// Result of one protocol shot.
#[derive(Clone, Debug)]
pub struct ShotResult {
    pub initial: PauliKey,
    pub final_key: PauliKey,
    pub bell: Vec<BellOutcome>,
    pub encrypted: Vec<bool>,
    pub decrypted: Vec<bool>,
}

fn padded_key(n: usize, protected: usize, rng: &mut impl Rng) -> Result<PauliKey, QheError> {
    if protected > n {
        return Err(QheError::KeyLength { expected: n, got: protected });
    }
    let mut key = PauliKey::zero(n);
    if protected > 0 {
        let k = gen_key(protected, rng)?;
        key.x_mut()[..protected].copy_from_slice(k.x());
        key.z_mut()[..protected].copy_from_slice(k.z());
    }
    Ok(key)
}

/// Key generation, encryption, server evaluation and client decryption for
/// a single shot, all driven by `rng`.
pub fn run_shot(
    comp: &ServerCompilation,
    init: &StateVector,
    protected: usize,
    rng: &mut impl Rng,
) -> Result<ShotResult, QheError> {
    if init.n_qubits() != comp.n {
        return Err(QheError::Mismatch(format!(
            "initial state has {} qubits, circuit {}",
            init.n_qubits(),
            comp.n
        )));
    }
    let initial = padded_key(comp.n, protected, rng)?;
    let mut state = init.clone();
    encrypt_in_place(&mut state, &initial, 0);
    let extra = comp.server_circuit.n_qubits() - comp.n;
    let state = if extra > 0 { state.with_ancillas(extra) } else { state };
    let c = comp.layout.outcomes;
    match comp.mode {
        Mode::Realistic => {
            let record = run(&comp.server_circuit, state, rng)?;
            let out = client_decrypt_run(comp, record.final_state, &record.cbits, &initial, rng)?;
            Ok(ShotResult {
                initial,
                final_key: out.final_key,
                bell: out.bell,
                encrypted: record.cbits,
                decrypted: out.decrypted,
            })
        }
        Mode::Simplified => {
            let layout = comp.layout;
            let mut cbits = vec![false; layout.total()];
            for q in 0..comp.n {
                cbits[layout.x(q)] = initial.x()[q];
                cbits[layout.z(q)] = initial.z()[q];
            }
            let record = run_with_cbits(&comp.server_circuit, state, cbits, rng)?;
            let bits = &record.cbits;
            let final_key = PauliKey::new(
                (0..comp.n).map(|q| bits[layout.x(q)]).collect(),
                (0..comp.n).map(|q| bits[layout.z(q)]).collect(),
            )?;
            let mut bell = Vec::with_capacity(comp.t_count());
            let mut log = record.measurement_log.iter().peekable();
            for (l, &at) in comp.bell_measurements.iter().enumerate() {
                while log.next_if(|(i, _)| *i < at).is_some() {}
                let r_b = log.next().map(|&(_, b)| b).unwrap_or(false);
                let r_a = log.next().map(|&(_, b)| b).unwrap_or(false);
                bell.push(BellOutcome { r_a, r_b, bell_index: l + 1 });
            }
            Ok(ShotResult {
                initial,
                final_key,
                bell,
                encrypted: bits[..c].to_vec(),
                decrypted: bits[c..2 * c].to_vec(),
            })
        }
    }
}

fn pack(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

/// Compiles `circuit`, then runs `config.shots` seeded protocol shots
/// starting from `init` (a state of the circuit's qubits).
pub fn run_qhe(circuit: &Circuit, init: &StateVector, config: &QheConfig) -> Result<QheRun, QheError> {
    let comp = compile_server(circuit, config.mode)?;
    run_compiled(&comp, init, config)
}

pub fn run_compiled(comp: &ServerCompilation, init: &StateVector, config: &QheConfig) -> Result<QheRun, QheError> {
    if config.shots == 0 {
        return Err(QheError::Mismatch("shot count must be at least 1".into()));
    }
    let width = comp.layout.outcomes;
    let protected = config.protected.unwrap_or(comp.n);
    let mut encrypted = Histogram::new(width);
    let mut decrypted = Histogram::new(width);
    let mut traces = Vec::new();
    for shot in 0..config.shots {
        let mut rng = shot_rng(config.seed, shot);
        let r = run_shot(comp, init, protected, &mut rng)?;
        encrypted.record(pack(&r.encrypted));
        decrypted.record(pack(&r.decrypted));
        if config.trace_keys {
            traces.push(KeyTrace {
                shot,
                encrypted: bits_to_string(&r.encrypted),
                decrypted: bits_to_string(&r.decrypted),
                initial: r.initial,
                bell: r.bell,
                final_key: r.final_key,
            });
        }
    }
    Ok(QheRun { encrypted, decrypted, report: comp.composed.report(), traces })
}

/// Key trace as CSV: initial key, Bell outcomes, final key, encrypted and
/// decrypted outcomes, one row per shot.
pub fn traces_to_csv(traces: &[KeyTrace]) -> String {
    let mut out = String::from("shot,initial_x,initial_z,bell_ra_rb,final_x,final_z,encrypted,decrypted\n");
    for t in traces {
        let bell: Vec<String> = t
            .bell
            .iter()
            .map(|o| format!("{}{}", u8::from(o.r_a), u8::from(o.r_b)))
            .collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            t.shot,
            bits_to_string(t.initial.x()),
            bits_to_string(t.initial.z()),
            bell.join(" "),
            bits_to_string(t.final_key.x()),
            bits_to_string(t.final_key.z()),
            t.encrypted,
            t.decrypted
        );
    }
    out
}
