mod common;

use avqite::fermion::{build_number_operator, EncodingSpec, FermionMapper};
use avqite::pauli::PauliSum;
use avqite::reference::{exact_ground, exact_ite, similarity_transform};
use avqite::statevector::StateVector;
use common::*;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Two-site Hubbard model, α modes 0,1 and β modes 2,3, Jordan-Wigner.
fn hubbard(t: f64, u: f64) -> PauliSum {
    let m = FermionMapper::new(&EncodingSpec::jordan_wigner(1, 1), 4).unwrap();
    let mut terms: Vec<(Complex64, Vec<(usize, bool)>)> = Vec::new();
    for (a, b) in [(0, 1), (2, 3)] {
        terms.push((c(-t), vec![(a, true), (b, false)]));
        terms.push((c(-t), vec![(b, true), (a, false)]));
    }
    for site in 0..2 {
        let (up, dn) = (site, site + 2);
        terms.push((c(u), vec![(up, true), (up, false), (dn, true), (dn, false)]));
    }
    m.map_sum(terms.iter().map(|(k, ops)| (*k, ops.as_slice())))
        .unwrap()
}

fn double_occupancy(g: f64) -> PauliSum {
    let m = FermionMapper::new(&EncodingSpec::jordan_wigner(1, 1), 4).unwrap();
    let ops: Vec<Vec<(usize, bool)>> = (0..2)
        .map(|s| vec![(s, true), (s, false), (s + 2, true), (s + 2, false)])
        .collect();
    m.map_sum(ops.iter().map(|o| (c(g), o.as_slice()))).unwrap()
}

#[test]
fn gutzwiller_transformed_hubbard_keeps_the_analytic_ground_energy() {
    let (t, u) = (1.0f64, 4.0f64);
    let exact = (u - (u * u + 16.0 * t * t).sqrt()) / 2.0;
    let h = hubbard(t, u);
    let number = build_number_operator(&EncodingSpec::jordan_wigner(1, 1), 4).unwrap();
    let plain = exact_ground(&h, Some(&number), Some(2)).unwrap();
    assert!((plain.ground_energy - exact).abs() < 1e-10);

    let hbar = similarity_transform(&h, &double_occupancy(0.7)).unwrap();
    assert!(!hbar.is_hermitian());
    let tc = exact_ground(&hbar, Some(&number), Some(2)).unwrap();
    assert!((tc.ground_energy - exact).abs() < 1e-9, "{}", tc.ground_energy);
    assert!(tc.eigenvalues.iter().all(|z| z.im.abs() < 1e-9));
}

#[test]
fn similarity_transform_matches_dense_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (h, _) = random_hamiltonian(3, &mut rng);
    let j = random_jastrow(3, 0.4, &mut rng);
    let hbar = similarity_transform(&h, &j).unwrap();
    let d: Vec<Complex64> = j.to_dense().diagonal().iter().map(|z| z.exp()).collect();
    let e_plus = DMatrix::from_diagonal(&DVector::from_vec(d.clone()));
    let e_minus = DMatrix::from_diagonal(&DVector::from_vec(d.iter().map(|z| z.inv()).collect()));
    let dense = e_minus * h.to_dense() * e_plus;
    let worst = (dense - hbar.to_dense())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-12);
}

#[test]
fn spectrum_is_invariant_under_similarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let (h, ground) = random_hamiltonian(4, &mut rng);
        let hbar = similarity_transform(&h, &random_jastrow(4, 0.3, &mut rng)).unwrap();
        let a = exact_ground(&h, None, None).unwrap();
        let b = exact_ground(&hbar, None, None).unwrap();
        assert!((a.ground_energy - ground).abs() < 1e-10);
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).norm() < 1e-8, "{x} vs {y}");
        }
        // right eigenvector of H̄
        let hv = avqite::statevector::apply_sum(&hbar, &b.ground_vector).unwrap();
        let r: f64 = hv
            .iter()
            .zip(b.ground_vector.amplitudes())
            .map(|(x, v)| (x - v * b.ground_energy).norm_sqr())
            .sum();
        assert!(r.sqrt() < 1e-8);
    }
}

#[test]
fn sector_ground_matches_brute_force_restriction() {
    let h = hubbard(1.0, 2.5);
    let dense = h.to_dense();
    for k in 0..=4usize {
        let idx: Vec<usize> = (0..16).filter(|b: &usize| b.count_ones() as usize == k).collect();
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, s| dense[(idx[r], idx[s])].re);
        let brute = sub
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let number = build_number_operator(&EncodingSpec::jordan_wigner(1, 1), 4).unwrap();
        let r = exact_ground(&h, Some(&number), Some(k)).unwrap();
        assert!((r.ground_energy - brute).abs() < 1e-10, "sector {k}");
        assert_eq!(r.sector, Some(k));
    }
}

#[test]
fn imaginary_time_energy_decreases_to_the_ground_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (h, ground) = random_hamiltonian(3, &mut rng);
    let start = StateVector::from_amplitudes(3, vec![c(1.0); 8]).unwrap();
    let grid: Vec<f64> = (0..=400).map(|k| k as f64 * 0.1).collect();
    let path = exact_ite(&h, &start, &grid).unwrap();
    for w in path.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-12);
    }
    assert!((path.last().unwrap().energy - ground).abs() < 1e-8);
    assert!((path[0].state.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn dense_limits_are_enforced() {
    let h = PauliSum::identity(15);
    assert!(exact_ground(&h, None, None).is_err());
    assert!(similarity_transform(&sum(1, &[("X", 1.0)]), &sum(1, &[("X", 1.0)])).is_err());
}
