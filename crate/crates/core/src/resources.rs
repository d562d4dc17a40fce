//! Gate-level synthesis of the ansatz and resource counts.
//!
//! Each rotation `exp(-iθP)` of weight `w ≥ 2` becomes a basis change onto
//! Z, a CNOT ladder that collects the parity on the last qubit of the
//! support, `RZ(2θ)`, and the mirrored un-computation: `2(w-1)` CNOTs.

use std::fmt::{self, Write as _};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::Letter;
use crate::statevector::{AnsatzCircuit, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Cnot,
    H,
    S,
    Sdg,
    Rz,
    Ry,
    Rx,
    X,
}

impl GateKind {
    fn arity(self) -> usize {
        if self == GateKind::Cnot {
            2
        } else {
            1
        }
    }

    fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rz | GateKind::Ry | GateKind::Rx)
    }

    fn qasm_name(self) -> &'static str {
        match self {
            GateKind::Cnot => "cx",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::Rz => "rz",
            GateKind::Ry => "ry",
            GateKind::Rx => "rx",
            GateKind::X => "x",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    /// Control first for CNOT.
    pub qubits: Vec<usize>,
    /// `R(φ) = exp(-iφσ/2)`.
    pub angle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CircuitIR {
    pub n_qubits: usize,
    pub ops: Vec<GateOp>,
}

impl CircuitIR {
    pub fn new(n_qubits: usize) -> Self {
        CircuitIR {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Result<()> {
        let invalid = |msg: String| Err(Error::Config(msg));
        if qubits.len() != kind.arity() {
            return invalid(format!(
                "{kind:?} acts on {} qubits, got {qubits:?}",
                kind.arity()
            ));
        }
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.n_qubits) {
            return invalid(format!("qubit {q} out of range for {} qubits", self.n_qubits));
        }
        if kind == GateKind::Cnot && qubits[0] == qubits[1] {
            return invalid("CNOT needs two distinct qubits".into());
        }
        if kind.is_rotation() != angle.is_some() {
            return invalid(format!("{kind:?}: angle must be given exactly for rotations"));
        }
        self.ops.push(GateOp {
            kind,
            qubits: qubits.to_vec(),
            angle,
        });
        Ok(())
    }

    /// OpenQASM 2 text.
    pub fn to_qasm(&self) -> String {
        let mut s = format!(
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{}];\n",
            self.n_qubits
        );
        for op in &self.ops {
            let args: Vec<String> = op.qubits.iter().map(|q| format!("q[{q}]")).collect();
            match op.angle {
                Some(a) => writeln!(s, "{}({a:.17e}) {};", op.kind.qasm_name(), args.join(",")),
                None => writeln!(s, "{} {};", op.kind.qasm_name(), args.join(",")),
            }
            .expect("write to string");
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ResourceReport {
    pub n_operators: usize,
    pub n_gates: usize,
    pub n_cnots: usize,
    pub depth: usize,
}

impl fmt::Display for ResourceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} operators, {} gates, {} CNOTs, depth {}",
            self.n_operators, self.n_gates, self.n_cnots, self.depth
        )
    }
}

/// Elementary-gate circuit preparing the same state as `circuit`.
pub fn synthesize(circuit: &AnsatzCircuit) -> CircuitIR {
    let n = circuit.n_qubits;
    let mut ir = CircuitIR::new(n);
    let mut push = |kind, qubits: &[usize], angle| {
        ir.push(kind, qubits, angle)
            .expect("synthesized gates are in range")
    };
    for q in 0..n {
        if circuit.reference >> q & 1 == 1 {
            push(GateKind::X, &[q], None);
        }
    }
    for gate in &circuit.gates {
        let p = &gate.generator;
        let support: Vec<usize> = p.support().collect();
        let angle = Some(2.0 * gate.theta);
        match support.as_slice() {
            [] => {}
            [q] => {
                let kind = match p.letter(*q) {
                    Letter::X => GateKind::Rx,
                    Letter::Y => GateKind::Ry,
                    _ => GateKind::Rz,
                };
                push(kind, &[*q], angle);
            }
            _ => {
                for &q in &support {
                    match p.letter(q) {
                        Letter::X => push(GateKind::H, &[q], None),
                        Letter::Y => {
                            push(GateKind::Sdg, &[q], None);
                            push(GateKind::H, &[q], None);
                        }
                        _ => {}
                    }
                }
                for w in support.windows(2) {
                    push(GateKind::Cnot, &[w[0], w[1]], None);
                }
                push(GateKind::Rz, &[*support.last().unwrap()], angle);
                for w in support.windows(2).rev() {
                    push(GateKind::Cnot, &[w[0], w[1]], None);
                }
                for &q in &support {
                    match p.letter(q) {
                        Letter::X => push(GateKind::H, &[q], None),
                        Letter::Y => {
                            push(GateKind::H, &[q], None);
                            push(GateKind::S, &[q], None);
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    ir
}

/// Totals and ASAP depth: each gate enters the first layer after the
/// latest layer occupied on any of its qubits.
pub fn count(ir: &CircuitIR, n_operators: usize) -> ResourceReport {
    let mut frontier = vec![0usize; ir.n_qubits];
    let mut depth = 0;
    let mut n_cnots = 0;
    for op in &ir.ops {
        let layer = op.qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
        for &q in &op.qubits {
            frontier[q] = layer;
        }
        depth = depth.max(layer);
        if op.kind == GateKind::Cnot {
            n_cnots += 1;
        }
    }
    ResourceReport {
        n_operators,
        n_gates: ir.ops.len(),
        n_cnots,
        depth,
    }
}

/// Synthesize and count in one go.
pub fn report(circuit: &AnsatzCircuit) -> ResourceReport {
    count(&synthesize(circuit), circuit.n_params())
}

/// Dense simulation of the gate list applied to `|0…0>`.
pub fn simulate(ir: &CircuitIR) -> Result<StateVector> {
    let mut v = StateVector::basis(ir.n_qubits, 0)?.into_amplitudes();
    for op in &ir.ops {
        apply_gate(&mut v, op);
    }
    StateVector::from_amplitudes(ir.n_qubits, v)
}

fn apply_gate(v: &mut [Complex64], op: &GateOp) {
    let zero = Complex64::default();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    if op.kind == GateKind::Cnot {
        let (c, t) = (1usize << op.qubits[0], 1usize << op.qubits[1]);
        for b in 0..v.len() {
            if b & c != 0 && b & t == 0 {
                v.swap(b, b | t);
            }
        }
        return;
    }
    let half = op.angle.unwrap_or(0.0) / 2.0;
    let (s, co) = half.sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // [[m00, m01], [m10, m11]]
    let m = match op.kind {
        GateKind::H => [one * r, one * r, one * r, -one * r],
        GateKind::X => [zero, one, one, zero],
        GateKind::S => [one, zero, zero, i],
        GateKind::Sdg => [one, zero, zero, -i],
        GateKind::Rz => [Complex64::new(co, -s), zero, zero, Complex64::new(co, s)],
        GateKind::Ry => [one * co, -one * s, one * s, one * co],
        GateKind::Rx => [one * co, -i * s, -i * s, one * co],
        GateKind::Cnot => unreachable!(),
    };
    let bit = 1usize << op.qubits[0];
    for b in 0..v.len() {
        if b & bit == 0 {
            let (a0, a1) = (v[b], v[b | bit]);
            v[b] = m[0] * a0 + m[1] * a1;
            v[b | bit] = m[2] * a0 + m[3] * a1;
        }
    }
}
