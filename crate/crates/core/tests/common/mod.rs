#![allow(dead_code)]

use std::path::PathBuf;

use avqite::cli::{load_problem, Problem, ProblemArgs};
use avqite::fermion::Encoding;
use avqite::pauli::{PauliString, PauliSum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn reference_energy(system: &str) -> f64 {
    let text = std::fs::read_to_string(fixture(&format!("{system}.ref.json"))).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["reference_energy"].as_f64().unwrap()
}

pub fn hf_energy(system: &str) -> f64 {
    let text = std::fs::read_to_string(fixture(&format!("{system}.ref.json"))).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["hf_energy"].as_f64().unwrap()
}

pub fn problem_args(system: &str, encoding: Encoding, reduction: bool) -> ProblemArgs {
    ProblemArgs {
        hamiltonian: fixture(&format!("{system}.fcidump")),
        format: None,
        encoding,
        two_qubit_reduction: reduction,
        freeze: Vec::new(),
        init_occ: None,
        nelec: None,
        pool: None,
    }
}

/// Parity-encoded, two-qubit-reduced problem with the HF reference.
pub fn molecule(system: &str) -> Problem {
    load_problem(&problem_args(system, Encoding::Parity, true)).unwrap()
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn sum(n: usize, terms: &[(&str, f64)]) -> PauliSum {
    PauliSum::from_terms(
        n,
        terms
            .iter()
            .map(|(s, v)| (s.parse::<PauliString>().unwrap(), c(*v))),
    )
    .unwrap()
}

/// Random real symmetric matrix `Q D Qᵀ` with a known, non-degenerate ground
/// level, expanded in Pauli strings.
pub fn random_hamiltonian(n: usize, rng: &mut ChaCha8Rng) -> (PauliSum, f64) {
    let dim = 1 << n;
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
    let q = g.qr().q();
    let mut d: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    d.sort_by(f64::total_cmp);
    d[0] = d[1] - 0.3;
    let m = &q * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone())) * q.transpose();
    let mc = m.map(c);
    (PauliSum::from_dense(n, &mc).unwrap(), d[0])
}

/// Random diagonal Jastrow-like generator `Σ a_q Z_q + Σ b_qr Z_q Z_r`.
pub fn random_jastrow(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> PauliSum {
    let mut terms = Vec::new();
    for q in 0..n {
        terms.push((
            PauliString::from_masks(n, 0, 1 << q).unwrap(),
            c(rng.gen_range(-scale..scale)),
        ));
        for r in q + 1..n {
            let z = (1u64 << q) | (1 << r);
            terms.push((
                PauliString::from_masks(n, 0, z).unwrap(),
                c(rng.gen_range(-scale..scale)),
            ));
        }
    }
    PauliSum::from_terms(n, terms).unwrap()
}

pub fn dense_eigenvalues(h: &PauliSum) -> Vec<f64> {
    let mut v: Vec<f64> = h
        .to_dense()
        .map(|z| z.re)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}
