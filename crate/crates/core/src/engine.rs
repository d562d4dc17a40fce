//! The adaptive imaginary-time loop.
//!
//! Each step measures the penalized energy `E'`, stops once it changes by
//! less than `conv_tol`, otherwise grows the ansatz while the squared
//! McLachlan distance `L²` exceeds `l_cut` and takes an explicit Euler step `θ += Δτ·θ̇`.

use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{check_qubits, Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::pool::GeneratorPool;
use crate::statevector::{inner, inner_re, AnsatzCircuit, McLachlanSystem};

/// Candidates whose predicted distance is within this relative margin of the
/// best one count as tied; the lowest pool index wins.
pub const TIE_RELATIVE_TOL: f64 = 1e-10;

const CHECKPOINT_VERSION: u32 = 1;

pub const TRAJECTORY_HEADER: &str =
    "step,tau,energy,energy_penalized,imag_energy,mclachlan_L,n_operators,theta_dot_norm,number_expectation\n";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub dtau: f64,
    /// Threshold on `L²`, not `L`.
    pub l_cut: f64,
    pub conv_tol: f64,
    pub penalty_alpha: f64,
    /// Target particle number; the penalty is active only when this is set.
    pub n_mol: Option<usize>,
    pub max_steps: usize,
    pub max_new_ops_per_step: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            dtau: 0.05,
            l_cut: 1e-5,
            conv_tol: 1e-8,
            penalty_alpha: 1.0,
            n_mol: None,
            max_steps: 20_000,
            max_new_ops_per_step: 1,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dtau", self.dtau),
            ("l_cut", self.l_cut),
            ("conv_tol", self.conv_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.penalty_alpha >= 0.0 && self.penalty_alpha.is_finite()) {
            return Err(Error::Config(format!(
                "penalty_alpha must be non-negative, got {}",
                self.penalty_alpha
            )));
        }
        Ok(())
    }

    fn penalty_active(&self) -> bool {
        self.n_mol.is_some() && self.penalty_alpha > 0.0
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("config serializes").as_bytes())
    }
}

/// One row of the trajectory file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionRecord {
    pub step: usize,
    /// Imaginary time at which the energies were measured.
    pub tau: f64,
    /// `Re<H>`.
    pub energy: f64,
    /// `Re<H + α(N - n)²>`.
    pub energy_penalized: f64,
    pub imag_energy: f64,
    #[serde(rename = "mclachlan_L")]
    pub mclachlan_l: f64,
    pub n_operators: usize,
    pub theta_dot_norm: f64,
    pub number_expectation: Option<f64>,
}

impl EvolutionRecord {
    fn csv_line(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        w.serialize(self).expect("record serializes");
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf8")
    }
}

/// `H + α(N - n_mol)²`, or `H` itself when no penalty is configured.
pub fn effective_hamiltonian(
    h: &PauliSum,
    number_op: Option<&PauliSum>,
    cfg: &EngineConfig,
) -> Result<PauliSum> {
    if !cfg.penalty_active() {
        return Ok(h.clone());
    }
    let number_op =
        number_op.ok_or_else(|| Error::Config("a particle-number penalty needs a number operator".into()))?;
    check_qubits(h.n_qubits(), number_op.n_qubits())?;
    let n = cfg.n_mol.unwrap() as f64;
    let shifted = number_op - &PauliSum::constant(h.n_qubits(), Complex64::new(n, 0.0));
    let penalty = shifted
        .compose(&shifted)?
        .scale(Complex64::new(cfg.penalty_alpha, 0.0));
    h.try_add(&penalty)
}

/// Index of the candidate with the smallest predicted distance and that distance.
fn best_candidate(system: &McLachlanSystem, pool: &GeneratorPool) -> Result<(usize, f64)> {
    if pool.is_empty() {
        return Err(Error::Pool("cannot grow the ansatz from an empty pool".into()));
    }
    let scores = pool
        .generators()
        .iter()
        .map(|p| system.score_candidate(p))
        .collect::<Result<Vec<f64>>>()?;
    let best = scores.iter().cloned().fold(f64::INFINITY, f64::min);
    let margin = best * TIE_RELATIVE_TOL + f64::MIN_POSITIVE;
    let index = scores
        .iter()
        .position(|&s| s <= best + margin)
        .expect("non-empty scores");
    Ok((index, scores[index]))
}

/// Pool entry whose appending at `θ = 0` minimizes the McLachlan distance.
pub fn select_operator(
    circuit: &AnsatzCircuit,
    pool: &GeneratorPool,
    h_eff: &PauliSum,
) -> Result<(usize, f64)> {
    check_qubits(circuit.n_qubits, pool.n_qubits())?;
    best_candidate(&McLachlanSystem::evaluate(circuit, h_eff)?, pool)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Running,
    Converged,
    /// `max_steps` reached without convergence.
    Exhausted,
}

pub struct Engine {
    cfg: EngineConfig,
    h_eff: PauliSum,
    number_op: Option<PauliSum>,
    pool: GeneratorPool,
    circuit: AnsatzCircuit,
    steps_done: usize,
    tau: f64,
    prev_energy: Option<f64>,
    status: Status,
    /// Chained hash of every record emitted so far.
    chain: [u8; 32],
    last: Option<EvolutionRecord>,
}

impl Engine {
    pub fn new(
        cfg: EngineConfig,
        h: &PauliSum,
        number_op: Option<PauliSum>,
        pool: GeneratorPool,
        reference: usize,
    ) -> Result<Self> {
        cfg.validate()?;
        let n = h.n_qubits();
        check_qubits(n, pool.n_qubits())?;
        if let Some(num) = &number_op {
            check_qubits(n, num.n_qubits())?;
        }
        let h_eff = effective_hamiltonian(h, number_op.as_ref(), &cfg)?;
        let circuit = AnsatzCircuit::new(n, reference);
        crate::statevector::StateVector::basis(n, reference)?;
        let status = if cfg.max_steps == 0 {
            Status::Exhausted
        } else {
            Status::Running
        };
        Ok(Engine {
            cfg,
            h_eff,
            number_op,
            pool,
            circuit,
            steps_done: 0,
            tau: 0.0,
            prev_energy: None,
            status,
            chain: [0; 32],
            last: None,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn effective(&self) -> &PauliSum {
        &self.h_eff
    }

    pub fn circuit(&self) -> &AnsatzCircuit {
        &self.circuit
    }

    pub fn pool(&self) -> &GeneratorPool {
        &self.pool
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn steps_done(&self) -> usize {
        self.steps_done
    }

    pub fn last_record(&self) -> Option<&EvolutionRecord> {
        self.last.as_ref()
    }

    pub fn trajectory_hash(&self) -> String {
        hex(&self.chain)
    }

    /// One pass of the loop. Returns `None` once the run has finished.
    pub fn step(&mut self) -> Result<Option<EvolutionRecord>> {
        if self.status != Status::Running {
            return Ok(None);
        }
        let mut system = McLachlanSystem::evaluate(&self.circuit, &self.h_eff)?;
        let energy_penalized = system.energy.re;
        let converged = self
            .prev_energy
            .is_some_and(|prev| (energy_penalized - prev).abs() < self.cfg.conv_tol);

        let (penalty, number_expectation) = self.number_terms(&system)?;
        let record_base = |system: &McLachlanSystem, n_ops: usize| {
            let q = &system.quantities;
            EvolutionRecord {
                step: self.steps_done + 1,
                tau: self.tau,
                energy: energy_penalized - penalty,
                energy_penalized,
                imag_energy: system.energy.im,
                mclachlan_l: q.l,
                n_operators: n_ops,
                theta_dot_norm: q.theta_dot.iter().map(|x| x * x).sum::<f64>().sqrt(),
                number_expectation,
            }
        };

        if !converged {
            let mut added = 0;
            while system.quantities.l.powi(2) > self.cfg.l_cut && added < self.cfg.max_new_ops_per_step {
                let (index, predicted) = best_candidate(&system, &self.pool)?;
                if predicted >= system.quantities.l {
                    // no candidate reduces the distance
                    break;
                }
                self.circuit.push(self.pool.generators()[index], 0.0)?;
                system = McLachlanSystem::evaluate(&self.circuit, &self.h_eff)?;
                added += 1;
            }
        }
        let record = record_base(&system, self.circuit.n_params());

        if converged {
            self.status = Status::Converged;
        } else {
            let thetas: Vec<f64> = self
                .circuit
                .thetas()
                .iter()
                .zip(&system.quantities.theta_dot)
                .map(|(t, d)| t + self.cfg.dtau * d)
                .collect();
            self.circuit.set_thetas(&thetas);
            self.tau += self.cfg.dtau;
            self.prev_energy = Some(energy_penalized);
        }
        self.steps_done += 1;
        if self.status == Status::Running && self.steps_done >= self.cfg.max_steps {
            self.status = Status::Exhausted;
        }
        self.chain = chain_link(&self.chain, &record.csv_line());
        self.last = Some(record.clone());
        Ok(Some(record))
    }

    /// `(α<(N-n)²>, <N>)` for the current state.
    fn number_terms(&self, system: &McLachlanSystem) -> Result<(f64, Option<f64>)> {
        let Some(num) = &self.number_op else {
            return Ok((0.0, None));
        };
        let phi = system.state.amplitudes();
        let nphi = crate::statevector::apply_sum(num, &system.state)?;
        let n_exp = inner(phi, &nphi).re;
        let penalty = match self.cfg.n_mol {
            Some(target) if self.cfg.penalty_alpha > 0.0 => {
                let t = target as f64;
                let shifted: Vec<Complex64> = nphi.iter().zip(phi).map(|(a, b)| a - b * t).collect();
                self.cfg.penalty_alpha * inner_re(&shifted, &shifted)
            }
            _ => 0.0,
        };
        Ok((penalty, Some(n_exp)))
    }

    /// Step until convergence or `max_steps`, handing each record to `sink`.
    pub fn run(&mut self, mut sink: impl FnMut(&EvolutionRecord) -> Result<()>) -> Result<Status> {
        while let Some(record) = self.step()? {
            sink(&record)?;
        }
        Ok(self.status)
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            config: self.cfg.clone(),
            config_hash: self.cfg.hash(),
            hamiltonian_hash: sum_hash(&self.h_eff),
            pool_hash: pool_hash(&self.pool),
            n_qubits: self.circuit.n_qubits,
            reference: self.circuit.reference,
            generators: self
                .circuit
                .gates
                .iter()
                .map(|g| g.generator.to_string())
                .collect(),
            thetas: self
                .circuit
                .gates
                .iter()
                .map(|g| hexfloat::format(g.theta))
                .collect(),
            steps_done: self.steps_done,
            tau: hexfloat::format(self.tau),
            prev_energy_penalized: self.prev_energy.map(hexfloat::format),
            status: self.status,
            trajectory_hash: self.trajectory_hash(),
            last_record: self.last.clone(),
        }
    }

    /// Rebuild an engine from a checkpoint; the configuration, Hamiltonian
    /// and pool must be the ones the checkpoint was written with.
    pub fn resume(
        checkpoint: &Checkpoint,
        cfg: EngineConfig,
        h: &PauliSum,
        number_op: Option<PauliSum>,
        pool: GeneratorPool,
    ) -> Result<Self> {
        if checkpoint.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "version {} is not supported (expected {CHECKPOINT_VERSION})",
                checkpoint.version
            )));
        }
        if cfg.hash() != checkpoint.config_hash || cfg != checkpoint.config {
            return Err(Error::Checkpoint(
                "engine configuration differs from the checkpoint".into(),
            ));
        }
        let mut engine = Engine::new(cfg, h, number_op, pool, checkpoint.reference)?;
        if sum_hash(&engine.h_eff) != checkpoint.hamiltonian_hash {
            return Err(Error::Checkpoint(
                "Hamiltonian differs from the checkpoint".into(),
            ));
        }
        if pool_hash(&engine.pool) != checkpoint.pool_hash {
            return Err(Error::Checkpoint(
                "operator pool differs from the checkpoint".into(),
            ));
        }
        if checkpoint.generators.len() != checkpoint.thetas.len() {
            return Err(Error::Checkpoint("generator and angle counts differ".into()));
        }
        check_qubits(engine.circuit.n_qubits, checkpoint.n_qubits)?;
        for (g, t) in checkpoint.generators.iter().zip(&checkpoint.thetas) {
            let p: PauliString = g.parse()?;
            engine.circuit.push(p, hexfloat::parse(t)?)?;
        }
        engine.steps_done = checkpoint.steps_done;
        engine.tau = hexfloat::parse(&checkpoint.tau)?;
        engine.prev_energy = checkpoint
            .prev_energy_penalized
            .as_deref()
            .map(hexfloat::parse)
            .transpose()?;
        engine.status = checkpoint.status;
        engine.chain = unhex(&checkpoint.trajectory_hash)?;
        engine.last = checkpoint.last_record.clone();
        Ok(engine)
    }
}

/// Restart state. Floating-point values are C99 hexadecimal literals so a
/// resumed run is bitwise identical to an uninterrupted one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub config: EngineConfig,
    pub config_hash: String,
    pub hamiltonian_hash: String,
    pub pool_hash: String,
    pub n_qubits: usize,
    pub reference: usize,
    pub generators: Vec<String>,
    pub thetas: Vec<String>,
    pub steps_done: usize,
    pub tau: String,
    pub prev_energy_penalized: Option<String>,
    pub status: Status,
    pub trajectory_hash: String,
    pub last_record: Option<EvolutionRecord>,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The ansatz stored in the checkpoint.
    pub fn circuit(&self) -> Result<AnsatzCircuit> {
        let mut c = AnsatzCircuit::new(self.n_qubits, self.reference);
        for (g, t) in self.generators.iter().zip(&self.thetas) {
            c.push(g.parse()?, hexfloat::parse(t)?)?;
        }
        Ok(c)
    }
}

/// CSV trajectory sink that flushes after every row.
pub struct TrajectoryWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> TrajectoryWriter<W> {
    pub fn new(writer: W, with_header: bool) -> Self {
        TrajectoryWriter {
            inner: csv::WriterBuilder::new()
                .has_headers(with_header)
                .from_writer(writer),
        }
    }

    pub fn write(&mut self, record: &EvolutionRecord) -> Result<()> {
        self.inner.serialize(record)?;
        self.inner.flush().map_err(|e| Error::io("trajectory", e))?;
        Ok(())
    }
}

pub fn read_trajectory(text: &str) -> Result<Vec<EvolutionRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<std::result::Result<Vec<_>, _>>()?)
}

fn chain_link(prev: &[u8; 32], row: &str) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(prev);
    hasher.update(row.as_bytes());
    hasher.finalize().into()
}

/// Chained hash of trajectory rows as written (each with its newline).
pub fn chain_hash<'a>(rows: impl IntoIterator<Item = &'a str>) -> String {
    hex(&rows.into_iter().fold([0u8; 32], |acc, row| chain_link(&acc, row)))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

fn sum_hash(h: &PauliSum) -> String {
    sha256_hex(
        serde_json::to_string(&h.to_json())
            .expect("sum serializes")
            .as_bytes(),
    )
}

fn pool_hash(pool: &GeneratorPool) -> String {
    sha256_hex(pool.to_strings().join(",").as_bytes())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn unhex(s: &str) -> Result<[u8; 32]> {
    let bad = || Error::Checkpoint(format!("malformed hash {s:?}"));
    if s.len() != 64 {
        return Err(bad());
    }
    let mut out = [0u8; 32];
    for (i, byte) in out.iter_mut().enumerate() {
        *byte = u8::from_str_radix(&s[2 * i..2 * i + 2], 16).map_err(|_| bad())?;
    }
    Ok(out)
}

/// C99 `%a` formatting and parsing of `f64`, exact in both directions.
pub mod hexfloat {
    use crate::error::{Error, Result};

    const FRAC_BITS: u32 = 52;
    const FRAC_MASK: u64 = (1 << FRAC_BITS) - 1;

    pub fn format(x: f64) -> String {
        if x.is_nan() {
            return "nan".into();
        }
        let sign = if x.is_sign_negative() { "-" } else { "" };
        if x.is_infinite() {
            return format!("{sign}inf");
        }
        let bits = x.to_bits();
        let exp_field = ((bits >> FRAC_BITS) & 0x7ff) as i64;
        let frac = bits & FRAC_MASK;
        if exp_field == 0 && frac == 0 {
            return format!("{sign}0x0p+0");
        }
        let (lead, exp) = if exp_field == 0 {
            (0, -1022)
        } else {
            (1, exp_field - 1023)
        };
        let digits = format!("{frac:013x}");
        let digits = digits.trim_end_matches('0');
        let dot = if digits.is_empty() { "" } else { "." };
        format!("{sign}0x{lead}{dot}{digits}p{exp:+}")
    }

    pub fn parse(s: &str) -> Result<f64> {
        let bad = || Error::Checkpoint(format!("malformed hexadecimal float {s:?}"));
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let value = match body {
            "inf" => f64::INFINITY,
            "nan" => return Ok(f64::NAN),
            _ => {
                let body = body.strip_prefix("0x").ok_or_else(bad)?;
                let (mantissa, exp) = body.split_once('p').ok_or_else(bad)?;
                let exp: i64 = exp.parse().map_err(|_| bad())?;
                let (lead, digits) = mantissa.split_once('.').unwrap_or((mantissa, ""));
                if digits.len() > 13 || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
                    return Err(bad());
                }
                let frac = if digits.is_empty() {
                    0
                } else {
                    u64::from_str_radix(digits, 16).map_err(|_| bad())? << (4 * (13 - digits.len()))
                };
                match lead {
                    "1" if (-1022..=1023).contains(&exp) => {
                        f64::from_bits((((exp + 1023) as u64) << FRAC_BITS) | frac)
                    }
                    "0" if frac == 0 => 0.0,
                    "0" if exp == -1022 => f64::from_bits(frac),
                    _ => return Err(bad()),
                }
            }
        };
        Ok(if neg { -value } else { value })
    }
}
