//! Dense state-vector kernels and the McLachlan linear system.
//!
//! Rotations are `exp(-iθP)` with no factor ½, so a single-parameter metric
//! is exactly 1. Tangent vectors are exact: the derivative with respect to
//! gate `k` inserts `-iP_k` right after gate `k`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_qubits, Error, Result};
use crate::pauli::{PauliString, PauliSum};

/// Eigenvalues of the metric below this fraction of the largest one are
/// treated as zero when solving for `θ̇`.
pub const PINV_RELATIVE_CUTOFF: f64 = 1e-6;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState")]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawState {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl TryFrom<RawState> for StateVector {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        StateVector::from_amplitudes(raw.n_qubits, raw.amps)
    }
}

impl StateVector {
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > 30 {
            return Err(Error::Numerical(format!(
                "{n_qubits} qubits exceed dense simulation limits"
            )));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Config(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::default(); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Wrap amplitudes as-is; the caller is responsible for normalization.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_qubits > 30 || amps.len() != 1usize << n_qubits {
            return Err(Error::Numerical(format!(
                "{} amplitudes do not match {n_qubits} qubits",
                amps.len()
            )));
        }
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
        n
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        inner(&self.amps, &other.amps)
    }

    /// In-place `exp(-iθP)`.
    pub fn rotate(&mut self, p: &PauliString, theta: f64) -> Result<()> {
        check_qubits(self.n_qubits, p.n_qubits())?;
        rotate_in_place(&mut self.amps, p, theta);
        Ok(())
    }

    pub fn apply_pauli(&self, p: &PauliString) -> Result<Vec<Complex64>> {
        check_qubits(self.n_qubits, p.n_qubits())?;
        let mut out = vec![Complex64::default(); self.amps.len()];
        apply_pauli_into(&self.amps, p, Complex64::new(1.0, 0.0), &mut out);
        Ok(out)
    }
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `Re<a|b>` without forming the imaginary part.
pub fn inner_re(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `out += coeff · P v`.
fn apply_pauli_into(v: &[Complex64], p: &PauliString, coeff: Complex64, out: &mut [Complex64]) {
    let x = p.x_mask() as usize;
    let z = p.z_mask() as usize;
    let c = coeff * crate::pauli::Phase::from_power(p.y_count()).to_complex();
    for (b, amp) in v.iter().enumerate() {
        if amp.re == 0.0 && amp.im == 0.0 {
            continue;
        }
        let term = c * amp;
        if (b & z).count_ones().is_multiple_of(2) {
            out[b ^ x] += term;
        } else {
            out[b ^ x] -= term;
        }
    }
}

fn rotate_in_place(v: &mut [Complex64], p: &PauliString, theta: f64) {
    let (s, c) = theta.sin_cos();
    let x = p.x_mask() as usize;
    if x == 0 {
        let z = p.z_mask() as usize;
        let plus = Complex64::new(c, -s);
        let minus = Complex64::new(c, s);
        for (b, amp) in v.iter_mut().enumerate() {
            *amp *= if (b & z).count_ones().is_multiple_of(2) {
                plus
            } else {
                minus
            };
        }
        return;
    }
    let pivot = 1usize << (usize::BITS - 1 - x.leading_zeros());
    let minus_i_sin = Complex64::new(0.0, -s);
    for b in 0..v.len() {
        if b & pivot != 0 {
            continue;
        }
        let partner = b ^ x;
        let (u, w) = (v[b], v[partner]);
        // P|partner> = c(partner)|b>, P|b> = c(b)|partner>
        v[b] = c * u + minus_i_sin * p.basis_phase(partner) * w;
        v[partner] = c * w + minus_i_sin * p.basis_phase(b) * u;
    }
}

/// `Σ c_P P|v>`, unnormalized.
pub fn apply_sum(s: &PauliSum, v: &StateVector) -> Result<Vec<Complex64>> {
    check_qubits(v.n_qubits(), s.n_qubits())?;
    Ok(apply_sum_raw(s, &v.amps))
}

pub(crate) fn apply_sum_raw(s: &PauliSum, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); v.len()];
    for (p, c) in s.iter() {
        apply_pauli_into(v, p, *c, &mut out);
    }
    out
}

/// `<v|s|v>`.
pub fn expectation(s: &PauliSum, v: &StateVector) -> Result<Complex64> {
    Ok(inner(&v.amps, &apply_sum(s, v)?))
}

/// Reference basis state followed by Pauli rotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzCircuit {
    pub n_qubits: usize,
    pub reference: usize,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub generator: PauliString,
    pub theta: f64,
}

impl AnsatzCircuit {
    pub fn new(n_qubits: usize, reference: usize) -> Self {
        AnsatzCircuit {
            n_qubits,
            reference,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(
        n_qubits: usize,
        reference: usize,
        gates: impl IntoIterator<Item = (PauliString, f64)>,
    ) -> Result<Self> {
        let mut c = Self::new(n_qubits, reference);
        for (generator, theta) in gates {
            c.push(generator, theta)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, generator: PauliString, theta: f64) -> Result<()> {
        check_qubits(self.n_qubits, generator.n_qubits())?;
        self.gates.push(Gate { generator, theta });
        Ok(())
    }

    pub fn n_params(&self) -> usize {
        self.gates.len()
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.gates.iter().map(|g| g.theta).collect()
    }

    pub fn set_thetas(&mut self, thetas: &[f64]) {
        for (g, &t) in self.gates.iter_mut().zip(thetas) {
            g.theta = t;
        }
    }
}

/// `∏_k exp(-iθ_k P_k)|reference>`, gate 0 applied first.
pub fn prepare(circuit: &AnsatzCircuit) -> Result<StateVector> {
    let mut v = StateVector::basis(circuit.n_qubits, circuit.reference)?;
    for g in &circuit.gates {
        v.rotate(&g.generator, g.theta)?;
    }
    Ok(v)
}

/// Metric, gradient and distance of the projected imaginary-time flow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McLachlanQuantities {
    /// `A_ij = Re<∂_iφ|∂_jφ>`.
    pub a: Vec<Vec<f64>>,
    /// `C_i = Re(-<∂_iφ|H|φ>)`.
    pub c: Vec<f64>,
    /// `<H†H> - |<H>|²`.
    pub var: f64,
    pub l: f64,
    pub theta_dot: Vec<f64>,
}

/// McLachlan distance for a given `θ̇`.
///
/// `L² = 2 (θ̇ᵀAθ̇ - 2Cᵀθ̇ + Var)`: the metric and gradient enter with the
/// same factor two as the variance, so `L` vanishes when the tangent space
/// captures the imaginary-time direction.
pub fn mclachlan_distance(a: &[Vec<f64>], c: &[f64], var: f64, theta_dot: &[f64]) -> f64 {
    let n = c.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += a[i][j] * theta_dot[i] * theta_dot[j];
        }
    }
    let lin: f64 = c.iter().zip(theta_dot).map(|(c, t)| c * t).sum();
    (2.0 * (quad - 2.0 * lin + var)).max(0.0).sqrt()
}

/// Eigen-decomposed metric for pseudo-inverse solves.
#[derive(Debug, Clone)]
struct MetricSolver {
    /// Retained eigenpairs `(λ_k, v_k)`.
    kept: Vec<(f64, DVector<f64>)>,
    lambda_max: f64,
}

impl MetricSolver {
    fn new(a: &DMatrix<f64>) -> Self {
        if a.nrows() == 0 {
            return MetricSolver {
                kept: Vec::new(),
                lambda_max: 0.0,
            };
        }
        let eig = SymmetricEigen::new(a.clone());
        let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
        let mut kept: Vec<(f64, DVector<f64>)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| lambda_max > 0.0 && l > PINV_RELATIVE_CUTOFF * lambda_max)
            .map(|(k, &l)| (l, eig.eigenvectors.column(k).into_owned()))
            .collect();
        kept.sort_by(|x, y| y.0.total_cmp(&x.0));
        MetricSolver { kept, lambda_max }
    }

    fn solve(&self, c: &DVector<f64>) -> DVector<f64> {
        let mut x = DVector::zeros(c.len());
        for (l, v) in &self.kept {
            x += v * (v.dot(c) / l);
        }
        x
    }

    /// Coordinates of `b` along the whitened retained eigenvectors.
    fn whiten(&self, b: &DVector<f64>) -> Vec<f64> {
        self.kept.iter().map(|(l, v)| v.dot(b) / l.sqrt()).collect()
    }
}

/// Everything needed to step the ansatz and to score candidate generators.
#[derive(Debug, Clone)]
pub struct McLachlanSystem {
    pub state: StateVector,
    /// `H|φ>`.
    pub h_state: Vec<Complex64>,
    /// `<φ|H|φ>`.
    pub energy: Complex64,
    pub tangents: Vec<Vec<Complex64>>,
    pub quantities: McLachlanQuantities,
    solver: MetricSolver,
    /// Whitened gradient `g_k`; `Σ g_k²` is the captured part of the variance.
    whitened_c: Vec<f64>,
}

impl McLachlanSystem {
    pub fn evaluate(circuit: &AnsatzCircuit, h: &PauliSum) -> Result<Self> {
        check_qubits(circuit.n_qubits, h.n_qubits())?;
        let n = circuit.n_params();

        let mut forward = Vec::with_capacity(n);
        let mut v = StateVector::basis(circuit.n_qubits, circuit.reference)?;
        for g in &circuit.gates {
            v.rotate(&g.generator, g.theta)?;
            forward.push(v.amps.clone());
        }
        let state = v;

        let mut tangents = Vec::with_capacity(n);
        for (k, psi) in forward.into_iter().enumerate() {
            let mut t = vec![Complex64::default(); psi.len()];
            apply_pauli_into(&psi, &circuit.gates[k].generator, -I, &mut t);
            for g in &circuit.gates[k + 1..] {
                rotate_in_place(&mut t, &g.generator, g.theta);
            }
            tangents.push(t);
        }

        let h_state = apply_sum_raw(h, &state.amps);
        let energy = inner(&state.amps, &h_state);
        let var = (inner(&h_state, &h_state).re - energy.norm_sqr()).max(0.0);

        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let val = inner_re(&tangents[i], &tangents[j]);
                a[(i, j)] = val;
                a[(j, i)] = val;
            }
        }
        let c = DVector::from_iterator(n, tangents.iter().map(|t| -inner_re(t, &h_state)));
        let solver = MetricSolver::new(&a);
        let theta_dot = solver.solve(&c);
        let whitened_c = solver.whiten(&c);

        let a_rows: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).iter().cloned().collect()).collect();
        let c_vec: Vec<f64> = c.iter().cloned().collect();
        let theta_dot: Vec<f64> = theta_dot.iter().cloned().collect();
        let l = mclachlan_distance(&a_rows, &c_vec, var, &theta_dot);
        Ok(McLachlanSystem {
            state,
            h_state,
            energy,
            tangents,
            quantities: McLachlanQuantities {
                a: a_rows,
                c: c_vec,
                var,
                l,
                theta_dot,
            },
            solver,
            whitened_c,
        })
    }

    /// Minimized distance after appending `exp(-i·0·P)`.
    ///
    /// The state is unchanged, so only the new tangent `-iP|φ>` is needed:
    /// its component orthogonal to the current tangent span adds
    /// `(c_new - Σ p_k g_k)² / |u|²` to the captured variance.
    pub fn score_candidate(&self, p: &PauliString) -> Result<f64> {
        check_qubits(self.state.n_qubits(), p.n_qubits())?;
        let mut t = vec![Complex64::default(); self.state.amps.len()];
        apply_pauli_into(&self.state.amps, p, -I, &mut t);
        let c_new = -inner_re(&t, &self.h_state);
        let b = DVector::from_iterator(
            self.tangents.len(),
            self.tangents.iter().map(|tj| inner_re(tj, &t)),
        );
        let proj = self.solver.whiten(&b);
        let residual_norm_sq = 1.0 - proj.iter().map(|x| x * x).sum::<f64>();
        let captured: f64 = self.whitened_c.iter().map(|g| g * g).sum();
        let mut gain = 0.0;
        if residual_norm_sq > PINV_RELATIVE_CUTOFF * self.solver.lambda_max.max(1.0) {
            let overlap = c_new - proj.iter().zip(&self.whitened_c).map(|(p, g)| p * g).sum::<f64>();
            gain = overlap * overlap / residual_norm_sq;
        }
        Ok((2.0 * (self.quantities.var - captured - gain)).max(0.0).sqrt())
    }
}

pub fn mclachlan(circuit: &AnsatzCircuit, h: &PauliSum) -> Result<McLachlanQuantities> {
    Ok(McLachlanSystem::evaluate(circuit, h)?.quantities)
}

/// Largest deviations of the analytic `C` and `A` from central differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteDifferenceReport {
    pub max_c_error: f64,
    pub max_a_error: f64,
}

/// Compare `C_i` with `-½ ∂E/∂θ_i` and `A` with overlaps of differenced
/// states. Meaningful for Hermitian `h`.
pub fn finite_difference_check(
    circuit: &AnsatzCircuit,
    h: &PauliSum,
    step: f64,
) -> Result<FiniteDifferenceReport> {
    let q = mclachlan(circuit, h)?;
    let thetas = circuit.thetas();
    let n = thetas.len();
    let shifted = |k: usize, delta: f64| -> Result<StateVector> {
        let mut c = circuit.clone();
        let mut t = thetas.clone();
        t[k] += delta;
        c.set_thetas(&t);
        prepare(&c)
    };
    let mut diffs = Vec::with_capacity(n);
    let mut max_c_error: f64 = 0.0;
    for k in 0..n {
        let plus = shifted(k, step)?;
        let minus = shifted(k, -step)?;
        let e_plus = expectation(h, &plus)?.re;
        let e_minus = expectation(h, &minus)?.re;
        let c_fd = -0.5 * (e_plus - e_minus) / (2.0 * step);
        max_c_error = max_c_error.max((c_fd - q.c[k]).abs());
        let d: Vec<Complex64> = plus
            .amps
            .iter()
            .zip(&minus.amps)
            .map(|(p, m)| (p - m) / (2.0 * step))
            .collect();
        diffs.push(d);
    }
    let mut max_a_error: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            max_a_error = max_a_error.max((inner_re(&diffs[i], &diffs[j]) - q.a[i][j]).abs());
        }
    }
    Ok(FiniteDifferenceReport {
        max_c_error,
        max_a_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn empty_circuit_is_reference() {
        let circ = AnsatzCircuit::new(3, 5);
        let v = prepare(&circ).unwrap();
        assert_eq!(v, StateVector::basis(3, 5).unwrap());
    }

    #[test]
    fn y_rotation_by_half_pi_flips() {
        let circ = AnsatzCircuit::with_gates(1, 0, [(p("Y"), FRAC_PI_2)]).unwrap();
        let v = prepare(&circ).unwrap();
        assert!((v.amplitudes()[0]).norm() < 1e-15);
        assert!((v.amplitudes()[1] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn inverse_gates_restore_reference() {
        let gates = [
            (p("XYZ"), 0.3),
            (p("YIX"), -1.1),
            (p("ZZI"), 0.7),
            (p("IYY"), 2.0),
        ];
        let circ = AnsatzCircuit::with_gates(3, 6, gates).unwrap();
        let mut v = prepare(&circ).unwrap();
        for g in circ.gates.iter().rev() {
            v.rotate(&g.generator, -g.theta).unwrap();
        }
        let fid = v.inner(&StateVector::basis(3, 6).unwrap()).norm();
        assert!((fid - 1.0).abs() < 1e-12);
    }

    #[test]
    fn apply_sum_examples() {
        let v = StateVector::basis(1, 1).unwrap();
        assert_eq!(apply_sum(&PauliSum::identity(1), &v).unwrap(), v.amplitudes());
        let z = PauliSum::single(p("Z"), c(1.0));
        assert_eq!(apply_sum(&z, &v).unwrap(), vec![c(0.0), c(-1.0)]);
        assert!(apply_sum(&PauliSum::identity(2), &v).is_err());
    }

    #[test]
    fn single_parameter_metric_is_one() {
        let circ = AnsatzCircuit::with_gates(2, 1, [(p("XY"), 0.4)]).unwrap();
        let h = PauliSum::from_terms(2, [(p("ZI"), c(0.5)), (p("XX"), c(0.2))]).unwrap();
        let q = mclachlan(&circ, &h).unwrap();
        assert!((q.a[0][0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenstate_is_stationary() {
        // |01> (qubit 1 set) is an eigenstate of Z0 + 0.5 Z1
        let h = PauliSum::from_terms(2, [(p("ZI"), c(1.0)), (p("IZ"), c(0.5))]).unwrap();
        let circ = AnsatzCircuit::with_gates(2, 2, [(p("YX"), 0.0), (p("XY"), 0.0)]).unwrap();
        let q = mclachlan(&circ, &h).unwrap();
        assert!(q.c.iter().all(|x| x.abs() < 1e-15));
        assert!(q.var.abs() < 1e-15);
        assert!(q.l.abs() < 1e-7);
    }

    #[test]
    fn zero_parameter_distance_is_twice_variance() {
        let h = PauliSum::from_terms(2, [(p("XI"), c(0.7)), (p("ZZ"), c(-0.3)), (p("IY"), c(0.1))]).unwrap();
        let circ = AnsatzCircuit::new(2, 0);
        let q = mclachlan(&circ, &h).unwrap();
        let v = StateVector::basis(2, 0).unwrap();
        let e = expectation(&h, &v).unwrap();
        let hh = expectation(&h.adjoint().compose(&h).unwrap(), &v).unwrap();
        let var = hh.re - e.norm_sqr();
        assert!((q.var - var).abs() < 1e-14);
        assert!((q.l * q.l - 2.0 * var).abs() < 1e-14);
    }

    #[test]
    fn expectation_of_non_hermitian_can_be_complex() {
        let h = PauliSum::from_terms(1, [(p("Z"), Complex64::new(1.0, 0.5))]).unwrap();
        let v = StateVector::basis(1, 0).unwrap();
        assert_eq!(expectation(&h, &v).unwrap(), Complex64::new(1.0, 0.5));
    }

    #[test]
    fn finite_differences_on_eigenstate_vanish() {
        let h = PauliSum::from_terms(2, [(p("ZI"), c(1.0)), (p("IZ"), c(0.5))]).unwrap();
        let circ = AnsatzCircuit::with_gates(2, 0, [(p("ZZ"), 0.3)]).unwrap();
        let r = finite_difference_check(&circ, &h, 1e-4).unwrap();
        assert!(r.max_c_error < 1e-10);
    }
}
