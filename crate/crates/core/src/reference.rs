//! Dense oracles: exact diagonalization, exact imaginary-time propagation and
//! a diagonal similarity transform that manufactures non-Hermitian operators
//! with a known spectrum.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_qubits, Error, Result};
use crate::pauli::PauliSum;
use crate::statevector::StateVector;

/// Largest register the dense oracles accept.
pub const MAX_DENSE_QUBITS: usize = 14;

const SECTOR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub n_qubits: usize,
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub ground_energy: f64,
    pub sector: Option<usize>,
    /// Right eigenvector of the ground eigenvalue, unit norm.
    pub ground_vector: StateVector,
}

fn check_dense(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::Numerical(format!(
            "{n_qubits} qubits exceed the dense diagonalization limit of {MAX_DENSE_QUBITS}"
        )));
    }
    Ok(())
}

/// Orthonormal basis of the `N = n_mol` eigenspace as dense columns.
fn sector_basis(number_op: &PauliSum, n_mol: usize) -> Result<DMatrix<Complex64>> {
    let dim = 1usize << number_op.n_qubits();
    let target = n_mol as f64;
    let cols: Vec<DVector<Complex64>> = if number_op.is_diagonal() {
        let mut diag = vec![Complex64::default(); dim];
        for (p, c) in number_op.iter() {
            for (b, d) in diag.iter_mut().enumerate() {
                *d += c * p.basis_phase(b);
            }
        }
        diag.iter()
            .enumerate()
            .filter(|(_, d)| (d.re - target).abs() < SECTOR_TOL)
            .map(|(b, _)| {
                let mut v = DVector::zeros(dim);
                v[b] = Complex64::new(1.0, 0.0);
                v
            })
            .collect()
    } else {
        if !number_op.is_hermitian() {
            return Err(Error::Config("number operator must be Hermitian".into()));
        }
        let eig = SymmetricEigen::new(number_op.to_dense());
        eig.eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| (l - target).abs() < SECTOR_TOL)
            .map(|(k, _)| eig.eigenvectors.column(k).into_owned())
            .collect()
    };
    if cols.is_empty() {
        return Err(Error::Config(format!("no states with {n_mol} particles")));
    }
    Ok(DMatrix::from_columns(&cols))
}

fn sort_eigenvalues(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Right eigenvector for the (simple) eigenvalue `lambda` by inverse iteration.
fn inverse_iteration(m: &DMatrix<Complex64>, lambda: Complex64) -> Result<DVector<Complex64>> {
    let d = m.nrows();
    let scale = m.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let shift = lambda + Complex64::new(1e-10 * scale, 0.0);
    let shifted = m - DMatrix::from_diagonal_element(d, d, shift);
    let lu = shifted.lu();
    let mut v = DVector::from_fn(d, |i, _| Complex64::new(1.0 + 0.01 * (i % 7) as f64, 0.0));
    v /= Complex64::new(v.norm(), 0.0);
    for _ in 0..4 {
        let w = lu
            .solve(&v)
            .ok_or_else(|| Error::Numerical("singular shift in inverse iteration".into()))?;
        let n = w.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::Numerical("inverse iteration diverged".into()));
        }
        v = w / Complex64::new(n, 0.0);
    }
    Ok(v)
}

/// Rotate the global phase so the largest amplitude is real and positive.
fn fix_phase(v: &mut [Complex64]) {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .unwrap_or_default();
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        v.iter_mut().for_each(|a| *a *= phase);
    }
}

/// Dense spectrum of `h`, optionally restricted to the `N = n_mol` sector.
///
/// Non-Hermitian input goes through a complex Schur decomposition; the ground
/// state is the eigenvalue with the lowest real part and its right
/// eigenvector.
pub fn exact_ground(
    h: &PauliSum,
    number_op: Option<&PauliSum>,
    n_mol: Option<usize>,
) -> Result<SpectrumResult> {
    let n = h.n_qubits();
    check_dense(n)?;
    let full = h.to_dense();
    let (m, basis) = match (number_op, n_mol) {
        (Some(num), Some(k)) => {
            check_qubits(n, num.n_qubits())?;
            let q = sector_basis(num, k)?;
            (q.adjoint() * &full * &q, Some(q))
        }
        (None, None) | (Some(_), None) => (full, None),
        (None, Some(_)) => {
            return Err(Error::Config("a sector needs a number operator".into()));
        }
    };

    let (mut eigenvalues, ground_local) = if h.is_hermitian() {
        let eig = SymmetricEigen::new(m);
        let k = (0..eig.eigenvalues.len())
            .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
            .expect("non-empty matrix");
        let vals: Vec<Complex64> = eig.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)).collect();
        (vals, eig.eigenvectors.column(k).into_owned())
    } else {
        let schur = m
            .clone()
            .try_schur(1e-14, 100_000)
            .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
        let mut vals: Vec<Complex64> = schur.unpack().1.diagonal().iter().copied().collect();
        sort_eigenvalues(&mut vals);
        let v = inverse_iteration(&m, vals[0])?;
        (vals, v)
    };
    sort_eigenvalues(&mut eigenvalues);

    let mut amps: Vec<Complex64> = match &basis {
        Some(q) => (q * ground_local).iter().copied().collect(),
        None => ground_local.iter().copied().collect(),
    };
    let nrm = crate::statevector::norm(&amps);
    amps.iter_mut().for_each(|a| *a /= nrm);
    fix_phase(&mut amps);

    Ok(SpectrumResult {
        n_qubits: n,
        ground_energy: eigenvalues[0].re,
        eigenvalues,
        sector: basis.map(|_| n_mol.unwrap()),
        ground_vector: StateVector::from_amplitudes(n, amps)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItePoint {
    pub tau: f64,
    /// `Re<ψ|H|ψ>` of the normalized propagated state.
    pub energy: f64,
    pub state: StateVector,
}

/// `e^{-Hτ}|v0>` normalized, at every point of a non-decreasing grid.
pub fn exact_ite(h: &PauliSum, v0: &StateVector, tau_grid: &[f64]) -> Result<Vec<ItePoint>> {
    let n = h.n_qubits();
    check_dense(n)?;
    check_qubits(n, v0.n_qubits())?;
    let m = h.to_dense();
    // Shifting by a Gershgorin lower bound keeps e^{-(H - s)dt} from
    // overflowing; normalization removes the shift.
    let dim = m.nrows();
    let s = (0..dim)
        .map(|i| {
            m[(i, i)].re
                - (0..dim)
                    .filter(|&j| j != i)
                    .map(|j| m[(i, j)].norm())
                    .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    let upper = (0..dim)
        .map(|i| {
            m[(i, i)].re
                + (0..dim)
                    .filter(|&j| j != i)
                    .map(|j| m[(i, j)].norm())
                    .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let spread = upper - s;
    let shifted = &m - DMatrix::from_diagonal_element(dim, dim, Complex64::new(s, 0.0));
    let mut v = DVector::from_column_slice(v0.amplitudes());
    let n0 = v.norm();
    if n0 == 0.0 {
        return Err(Error::Numerical("initial state has zero norm".into()));
    }
    v /= Complex64::new(n0, 0.0);

    let mut cache: Option<(u64, DMatrix<Complex64>)> = None;
    let mut tau = 0.0;
    let mut out = Vec::with_capacity(tau_grid.len());
    for &t in tau_grid {
        if t.is_nan() || t < tau {
            return Err(Error::Config(format!(
                "imaginary-time grid must be non-decreasing from 0, got {t} after {tau}"
            )));
        }
        let dt = t - tau;
        if dt > 0.0 {
            // sub-steps small enough that one factor cannot underflow a component
            let pieces = (dt * spread / 30.0).ceil().max(1.0);
            let sub = dt / pieces;
            let key = sub.to_bits();
            if cache.as_ref().map(|(k, _)| *k) != Some(key) {
                cache = Some((key, (&shifted * Complex64::new(-sub, 0.0)).exp()));
            }
            let prop = &cache.as_ref().unwrap().1;
            for _ in 0..pieces as usize {
                v = prop * v;
                let nv = v.norm();
                if !nv.is_finite() || nv <= 1e-300 {
                    return Err(Error::Numerical(format!(
                        "propagated norm underflow at tau = {t}: the start has no overlap with the low-lying states"
                    )));
                }
                v /= Complex64::new(nv, 0.0);
            }
        }
        tau = t;
        let hv = &m * &v;
        let energy = v.dotc(&hv).re;
        out.push(ItePoint {
            tau: t,
            energy,
            state: StateVector::from_amplitudes(n, v.iter().copied().collect())?,
        });
    }
    Ok(out)
}

/// `e^{-J} H e^{J}` for a real diagonal `J` (a sum of Z-type strings).
pub fn similarity_transform(h: &PauliSum, j: &PauliSum) -> Result<PauliSum> {
    let n = h.n_qubits();
    check_qubits(n, j.n_qubits())?;
    check_dense(n)?;
    if !j.is_diagonal() {
        return Err(Error::Config("similarity generator must be diagonal".into()));
    }
    if !j.is_hermitian() {
        return Err(Error::Config("similarity generator must be Hermitian".into()));
    }
    let dim = 1usize << n;
    let mut d = vec![0.0; dim];
    for (p, c) in j.iter() {
        for (b, x) in d.iter_mut().enumerate() {
            *x += (c * p.basis_phase(b)).re;
        }
    }
    let mut m = h.to_dense();
    for col in 0..dim {
        for row in 0..dim {
            m[(row, col)] *= (d[col] - d[row]).exp();
        }
    }
    PauliSum::from_dense(n, &m)
}
