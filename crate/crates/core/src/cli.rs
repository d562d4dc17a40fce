//! Command-line front end: problem loading, run artifacts, sweeps and the
//! thin report commands.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::engine::{self, Checkpoint, Engine, EngineConfig, Status, TrajectoryWriter};
use crate::error::{Error, Result};
use crate::fermion::{
    build_hamiltonian, build_number_operator, parse_fcidump, reference_state, Encoding, EncodingSpec,
    OccupationVector,
};
use crate::pauli::{HamiltonianJson, PauliString, PauliSum};
use crate::pool::{build_uccsd_pool, pool_report, real_rotation_pool, GeneratorPool, PoolReport};
use crate::reference::{exact_ground, SpectrumResult};
use crate::resources::{self, ResourceReport};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const CHECKPOINT_FILE: &str = "checkpoint.json";
pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianFormat {
    Fcidump,
    Json,
}

impl HamiltonianFormat {
    fn sniff(text: &str) -> Option<Self> {
        match text.trim_start().chars().next()? {
            '&' => Some(HamiltonianFormat::Fcidump),
            '{' => Some(HamiltonianFormat::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "avqite",
    version,
    about = "Adaptive variational imaginary time evolution"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve to the ground state and write trajectory, checkpoint and summary.
    Run(RunArgs),
    /// Run several Hamiltonians with shared settings and tabulate the results.
    Sweep(SweepArgs),
    /// Exact diagonalization of the qubit Hamiltonian.
    Ed(EdArgs),
    /// Build and list the operator pool.
    Pool(PoolArgs),
    /// Gate counts of the ansatz stored in a checkpoint.
    Resources(ResourcesArgs),
}

/// How to turn an input file into a qubit problem.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ProblemArgs {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    /// Input format; sniffed from the file when omitted.
    #[arg(long, value_enum)]
    pub format: Option<HamiltonianFormat>,
    #[arg(long, default_value = "jw")]
    pub encoding: Encoding,
    #[arg(long)]
    pub two_qubit_reduction: bool,
    /// Spatial orbitals held doubly occupied, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub freeze: Vec<usize>,
    /// Reference determinant over active spin orbitals, α block then β block.
    #[arg(long)]
    pub init_occ: Option<String>,
    /// Target particle number for the penalty and the ED sector.
    #[arg(long)]
    pub nelec: Option<usize>,
    /// JSON list of Pauli strings replacing the default pool.
    #[arg(long)]
    pub pool: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EngineArgs {
    #[arg(long, default_value_t = 0.05)]
    pub dtau: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub lcut: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub conv: f64,
    #[arg(long, default_value_t = 1.0)]
    pub penalty_alpha: f64,
    #[arg(long, default_value_t = 20_000)]
    pub max_steps: usize,
    #[arg(long, default_value_t = 1)]
    pub max_new_ops: usize,
}

impl Default for EngineArgs {
    fn default() -> Self {
        let d = EngineConfig::default();
        EngineArgs {
            dtau: d.dtau,
            lcut: d.l_cut,
            conv: d.conv_tol,
            penalty_alpha: d.penalty_alpha,
            max_steps: d.max_steps,
            max_new_ops: d.max_new_ops_per_step,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Reference-energy JSON (`reference_energy`, optional `reference_label`).
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub resume: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// `TAG=HAMILTONIAN[,REFERENCE]`, repeatable.
    #[arg(long = "point", required = true)]
    pub points: Vec<String>,
    #[command(flatten)]
    pub problem: SharedProblemArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long)]
    pub out: PathBuf,
}

/// Problem flags shared by every sweep point.
#[derive(Debug, Clone, Args)]
pub struct SharedProblemArgs {
    #[arg(long, value_enum)]
    pub format: Option<HamiltonianFormat>,
    #[arg(long, default_value = "jw")]
    pub encoding: Encoding,
    #[arg(long)]
    pub two_qubit_reduction: bool,
    #[arg(long, value_delimiter = ',')]
    pub freeze: Vec<usize>,
    #[arg(long)]
    pub init_occ: Option<String>,
    #[arg(long)]
    pub nelec: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct EdArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Directory for `spectrum.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PoolArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Directory for `pool.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ResourcesArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Write the synthesized circuit as OpenQASM 2.
    #[arg(long)]
    pub qasm: Option<PathBuf>,
}

/// Everything a run needs, echoed into the output directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub problem: ProblemArgs,
    pub engine: EngineArgs,
    pub reference: Option<PathBuf>,
    pub out: PathBuf,
    pub resume: Option<PathBuf>,
}

impl From<RunArgs> for RunManifest {
    fn from(a: RunArgs) -> Self {
        RunManifest {
            problem: a.problem,
            engine: a.engine,
            reference: a.reference,
            out: a.out,
            resume: a.resume,
        }
    }
}

impl RunManifest {
    pub fn engine_config(&self, n_mol: Option<usize>) -> EngineConfig {
        let e = &self.engine;
        EngineConfig {
            dtau: e.dtau,
            l_cut: e.lcut,
            conv_tol: e.conv,
            penalty_alpha: e.penalty_alpha,
            n_mol,
            max_steps: e.max_steps,
            max_new_ops_per_step: e.max_new_ops,
        }
    }
}

/// A qubit problem ready for the engine.
#[derive(Debug, Clone)]
pub struct Problem {
    pub hamiltonian: PauliSum,
    pub number_op: Option<PauliSum>,
    pub pool: GeneratorPool,
    pub reference: usize,
    pub n_mol: Option<usize>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn encoding_spec(args: &ProblemArgs, n_alpha: usize, n_beta: usize) -> EncodingSpec {
    let spec = match args.encoding {
        Encoding::JordanWigner => EncodingSpec::jordan_wigner(n_alpha, n_beta),
        Encoding::Parity => EncodingSpec::parity(n_alpha, n_beta, args.two_qubit_reduction),
    };
    EncodingSpec {
        two_qubit_reduction: args.two_qubit_reduction,
        ..spec
    }
    .with_frozen(args.freeze.clone())
}

fn load_pool_file(path: &Path, n_qubits: usize) -> Result<GeneratorPool> {
    let pool = GeneratorPool::from_json(&read_text(path)?)?;
    crate::error::check_qubits(n_qubits, pool.n_qubits())?;
    Ok(pool)
}

/// Read and map the Hamiltonian, build the number operator, reference
/// determinant and pool.
pub fn load_problem(args: &ProblemArgs) -> Result<Problem> {
    let text = read_text(&args.hamiltonian)?;
    let sniffed = HamiltonianFormat::sniff(&text);
    let format = match (args.format, sniffed) {
        (Some(f), Some(s)) if f != s => {
            return Err(Error::Config(format!(
                "{} looks like {s:?} but --format says {f:?}",
                args.hamiltonian.display()
            )))
        }
        (Some(f), _) | (None, Some(f)) => f,
        (None, None) => {
            return Err(Error::Config(format!(
                "cannot tell the format of {}; pass --format",
                args.hamiltonian.display()
            )))
        }
    };
    let occ = args
        .init_occ
        .as_deref()
        .map(str::parse::<OccupationVector>)
        .transpose()?;
    match format {
        HamiltonianFormat::Fcidump => {
            let ints = parse_fcidump(&text)?;
            let f = args.freeze.len();
            let m = ints
                .n_spatial()
                .checked_sub(f)
                .ok_or_else(|| Error::Config("more frozen orbitals than orbitals".into()))?;
            let occ = match occ {
                Some(o) => o,
                None => OccupationVector::hartree_fock(
                    m,
                    ints.n_alpha().saturating_sub(f),
                    ints.n_beta().saturating_sub(f),
                )?,
            };
            if occ.len() != 2 * m {
                return Err(Error::Config(format!(
                    "--init-occ has {} spin orbitals, the active space has {}",
                    occ.len(),
                    2 * m
                )));
            }
            let spec = encoding_spec(args, occ.alpha_count() + f, occ.beta_count() + f);
            let hamiltonian = build_hamiltonian(&ints, &spec)?;
            finish_problem(args, hamiltonian, &spec, &occ)
        }
        HamiltonianFormat::Json => {
            let json: HamiltonianJson = serde_json::from_str(&text)?;
            let hamiltonian = PauliSum::from_json(&json)?;
            let n = hamiltonian.n_qubits();
            match occ {
                Some(occ) => {
                    let spec = encoding_spec(args, occ.alpha_count(), occ.beta_count());
                    crate::error::check_qubits(spec.n_qubits(occ.len()), n)?;
                    finish_problem(args, hamiltonian, &spec, &occ)
                }
                None => {
                    if args.two_qubit_reduction {
                        return Err(Error::Config(
                            "a reduced qubit Hamiltonian needs --init-occ to fix the spin sectors".into(),
                        ));
                    }
                    let number_op = match args.nelec {
                        Some(_) => Some(unreduced_number_operator(args.encoding, n)?),
                        None => None,
                    };
                    let pool = match &args.pool {
                        Some(p) => load_pool_file(p, n)?,
                        None => real_rotation_pool(n)?,
                    };
                    Ok(Problem {
                        hamiltonian,
                        number_op,
                        pool,
                        reference: 0,
                        n_mol: args.nelec,
                    })
                }
            }
        }
    }
}

fn unreduced_number_operator(encoding: Encoding, n_qubits: usize) -> Result<PauliSum> {
    match encoding {
        Encoding::JordanWigner => {
            let mut terms = vec![(
                PauliString::identity(n_qubits),
                Complex64::new(n_qubits as f64 / 2.0, 0.0),
            )];
            for q in 0..n_qubits {
                terms.push((
                    PauliString::from_masks(n_qubits, 0, 1 << q)?,
                    Complex64::new(-0.5, 0.0),
                ));
            }
            PauliSum::from_terms(n_qubits, terms)
        }
        Encoding::Parity => {
            if !n_qubits.is_multiple_of(2) {
                return Err(Error::Config("parity register must be even".into()));
            }
            build_number_operator(&EncodingSpec::parity(0, 0, false), n_qubits)
        }
    }
}

fn finish_problem(
    args: &ProblemArgs,
    hamiltonian: PauliSum,
    spec: &EncodingSpec,
    occ: &OccupationVector,
) -> Result<Problem> {
    let n_so = occ.len();
    let reference = reference_state(occ, spec)?;
    let number_op = build_number_operator(spec, n_so)?;
    let pool = match &args.pool {
        Some(p) => load_pool_file(p, hamiltonian.n_qubits())?,
        None => build_uccsd_pool(n_so, &occ.occupied(), spec)?,
    };
    Ok(Problem {
        hamiltonian,
        number_op: Some(number_op),
        pool,
        reference,
        n_mol: Some(args.nelec.unwrap_or(occ.population())),
    })
}

/// Externally computed energy to compare against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceFile {
    pub reference_energy: f64,
    #[serde(default)]
    pub reference_label: Option<String>,
    #[serde(default)]
    pub hf_energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceComparison {
    pub label: Option<String>,
    pub reference_energy: f64,
    /// `E - E_ref`.
    pub error: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub status: Status,
    pub steps: usize,
    pub energy: f64,
    pub energy_penalized: f64,
    pub imag_energy: f64,
    pub mclachlan_l: f64,
    pub number_expectation: Option<f64>,
    pub n_operators: usize,
    pub pool_size: usize,
    pub operators: Vec<String>,
    pub thetas: Vec<f64>,
    pub resources: ResourceReport,
    pub reference: Option<ReferenceComparison>,
    pub trajectory_hash: String,
}

pub fn read_reference(path: &Path) -> Result<ReferenceFile> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

/// Drop trajectory rows past the checkpoint and check the rest against its hash.
fn truncate_trajectory(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    let text = read_text(path)?;
    let mut lines = text.split_inclusive('\n');
    let header = lines.next().unwrap_or_default().to_string();
    let rows: Vec<&str> = lines.take(checkpoint.steps_done).collect();
    if rows.len() != checkpoint.steps_done
        || engine::chain_hash(rows.iter().copied()) != checkpoint.trajectory_hash
    {
        return Err(Error::Checkpoint(format!(
            "{} does not match the checkpoint trajectory",
            path.display()
        )));
    }
    let kept: String = std::iter::once(header.as_str()).chain(rows).collect();
    write_atomic(path, kept.as_bytes())
}

/// Run the engine, writing artifacts into `manifest.out`.
pub fn cmd_run(manifest: &RunManifest) -> Result<RunSummary> {
    let problem = load_problem(&manifest.problem)?;
    let reference = manifest.reference.as_deref().map(read_reference).transpose()?;
    let cfg = manifest.engine_config(problem.n_mol);
    create_dir(&manifest.out)?;
    write_atomic(
        &manifest.out.join("manifest.json"),
        serde_json::to_string_pretty(manifest)?.as_bytes(),
    )?;

    let traj_path = manifest.out.join(TRAJECTORY_FILE);
    let ckpt_path = manifest.out.join(CHECKPOINT_FILE);
    let (mut engine, file) = match &manifest.resume {
        Some(path) => {
            let ckpt = Checkpoint::from_json(&read_text(path)?)?;
            let engine = Engine::resume(&ckpt, cfg, &problem.hamiltonian, problem.number_op, problem.pool)?;
            truncate_trajectory(&traj_path, &ckpt)?;
            let file = fs::OpenOptions::new()
                .append(true)
                .open(&traj_path)
                .map_err(|e| Error::io(&traj_path, e))?;
            (engine, TrajectoryWriter::new(file, false))
        }
        None => {
            let engine = Engine::new(
                cfg,
                &problem.hamiltonian,
                problem.number_op,
                problem.pool,
                problem.reference,
            )?;
            let mut file = fs::File::create(&traj_path).map_err(|e| Error::io(&traj_path, e))?;
            file.write_all(engine::TRAJECTORY_HEADER.as_bytes())
                .map_err(|e| Error::io(&traj_path, e))?;
            (engine, TrajectoryWriter::new(file, false))
        }
    };
    let mut writer = file;
    while let Some(record) = engine.step()? {
        writer.write(&record)?;
        write_atomic(&ckpt_path, engine.checkpoint().to_json().as_bytes())?;
    }
    write_atomic(&ckpt_path, engine.checkpoint().to_json().as_bytes())?;

    let summary = summarize(&engine, reference.as_ref());
    write_atomic(
        &manifest.out.join(SUMMARY_FILE),
        serde_json::to_string_pretty(&summary)?.as_bytes(),
    )?;
    Ok(summary)
}

fn summarize(engine: &Engine, reference: Option<&ReferenceFile>) -> RunSummary {
    let last = engine.last_record();
    let circuit = engine.circuit();
    let energy = last.map_or(f64::NAN, |r| r.energy);
    RunSummary {
        status: engine.status(),
        steps: engine.steps_done(),
        energy,
        energy_penalized: last.map_or(f64::NAN, |r| r.energy_penalized),
        imag_energy: last.map_or(f64::NAN, |r| r.imag_energy),
        mclachlan_l: last.map_or(f64::NAN, |r| r.mclachlan_l),
        number_expectation: last.and_then(|r| r.number_expectation),
        n_operators: circuit.n_params(),
        pool_size: engine.pool().len(),
        operators: circuit.gates.iter().map(|g| g.generator.to_string()).collect(),
        thetas: circuit.thetas(),
        resources: resources::report(circuit),
        reference: reference.map(|r| ReferenceComparison {
            label: r.reference_label.clone(),
            reference_energy: r.reference_energy,
            error: energy - r.reference_energy,
            abs_error: (energy - r.reference_energy).abs(),
        }),
        trajectory_hash: engine.trajectory_hash(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub tag: String,
    pub hamiltonian: PathBuf,
    pub reference: Option<PathBuf>,
}

impl std::str::FromStr for SweepPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, rest) = s
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("sweep point {s:?} is not TAG=HAMILTONIAN[,REFERENCE]")))?;
        let (ham, reference) = match rest.split_once(',') {
            Some((h, r)) => (h, Some(PathBuf::from(r))),
            None => (rest, None),
        };
        if tag.is_empty() || ham.is_empty() {
            return Err(Error::Config(format!("sweep point {s:?} has an empty field")));
        }
        Ok(SweepPoint {
            tag: tag.to_string(),
            hamiltonian: ham.into(),
            reference,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub tag: String,
    /// `converged`, `not_converged` or `failed`.
    pub status: String,
    pub energy: Option<f64>,
    pub reference_energy: Option<f64>,
    pub error: Option<f64>,
    pub n_operators: Option<usize>,
    pub message: String,
}

/// Run every point in its own subdirectory of `out`; failures are recorded
/// and do not stop the sweep. Writes `out/sweep.csv`.
pub fn cmd_sweep(
    points: &[SweepPoint],
    shared: &SharedProblemArgs,
    engine: &EngineArgs,
    out: &Path,
) -> Result<Vec<SweepRow>> {
    if points.is_empty() {
        return Err(Error::Config("a sweep needs at least one point".into()));
    }
    create_dir(out)?;
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        let manifest = RunManifest {
            problem: ProblemArgs {
                hamiltonian: p.hamiltonian.clone(),
                format: shared.format,
                encoding: shared.encoding,
                two_qubit_reduction: shared.two_qubit_reduction,
                freeze: shared.freeze.clone(),
                init_occ: shared.init_occ.clone(),
                nelec: shared.nelec,
                pool: None,
            },
            engine: engine.clone(),
            reference: p.reference.clone(),
            out: out.join(&p.tag),
            resume: None,
        };
        rows.push(match cmd_run(&manifest) {
            Ok(s) => SweepRow {
                tag: p.tag.clone(),
                status: match s.status {
                    Status::Converged => "converged",
                    _ => "not_converged",
                }
                .into(),
                energy: Some(s.energy),
                reference_energy: s.reference.as_ref().map(|r| r.reference_energy),
                error: s.reference.as_ref().map(|r| r.error),
                n_operators: Some(s.n_operators),
                message: String::new(),
            },
            Err(e) => SweepRow {
                tag: p.tag.clone(),
                status: "failed".into(),
                energy: None,
                reference_energy: None,
                error: None,
                n_operators: None,
                message: e.to_string(),
            },
        });
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    write_atomic(&out.join("sweep.csv"), &bytes)?;
    Ok(rows)
}

/// Exact ground state, in the particle-number sector when one is known.
pub fn cmd_ed(args: &ProblemArgs) -> Result<SpectrumResult> {
    let p = load_problem(args)?;
    match (&p.number_op, p.n_mol) {
        (Some(n), Some(k)) => exact_ground(&p.hamiltonian, Some(n), Some(k)),
        _ => exact_ground(&p.hamiltonian, None, None),
    }
}

pub fn cmd_pool(args: &ProblemArgs) -> Result<(GeneratorPool, PoolReport)> {
    let p = load_problem(args)?;
    let report = pool_report(&p.pool);
    Ok((p.pool, report))
}

pub fn cmd_resources(checkpoint: &Path) -> Result<(ResourceReport, resources::CircuitIR)> {
    let ckpt = Checkpoint::from_json(&read_text(checkpoint)?)?;
    let circuit = ckpt.circuit()?;
    let ir = resources::synthesize(&circuit);
    Ok((resources::count(&ir, circuit.n_params()), ir))
}

/// Exit codes: 0 converged (or report written), 2 finished without
/// converging, 1 error.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run(args) => {
            let s = cmd_run(&args.into())?;
            println!(
                "{:?} after {} steps: E = {:.10} Ha, {} operators",
                s.status, s.steps, s.energy, s.n_operators
            );
            if let Some(r) = &s.reference {
                println!("error vs reference: {:+.3e} Ha", r.error);
            }
            Ok(if s.status == Status::Converged { 0 } else { 2 })
        }
        Command::Sweep(args) => {
            let points = args
                .points
                .iter()
                .map(|s| s.parse())
                .collect::<Result<Vec<SweepPoint>>>()?;
            let rows = cmd_sweep(&points, &args.problem, &args.engine, &args.out)?;
            for r in &rows {
                println!(
                    "{:<12} {:<14} {:>16} {:>12} {:>4}",
                    r.tag,
                    r.status,
                    r.energy.map_or("-".into(), |e| format!("{e:.10}")),
                    r.error.map_or("-".into(), |e| format!("{e:+.3e}")),
                    r.n_operators.map_or("-".into(), |n| n.to_string()),
                );
            }
            Ok(if rows.iter().all(|r| r.status == "converged") {
                0
            } else {
                2
            })
        }
        Command::Ed(args) => {
            let s = cmd_ed(&args.problem)?;
            println!("ground energy {:.12}", s.ground_energy);
            if let Some(out) = &args.out {
                create_dir(out)?;
                write_atomic(
                    &out.join("spectrum.json"),
                    serde_json::to_string_pretty(&s)?.as_bytes(),
                )?;
            }
            Ok(0)
        }
        Command::Pool(args) => {
            let (pool, report) = cmd_pool(&args.problem)?;
            println!("{report}");
            if let Some(out) = &args.out {
                create_dir(out)?;
                write_atomic(&out.join("pool.json"), pool.to_json().as_bytes())?;
            }
            Ok(0)
        }
        Command::Resources(args) => {
            let (report, ir) = cmd_resources(&args.checkpoint)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if let Some(path) = &args.qasm {
                write_atomic(path, ir.to_qasm().as_bytes())?;
            }
            Ok(0)
        }
    }
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
