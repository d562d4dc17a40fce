mod common;

use avqite::cli::load_problem;
use avqite::fermion::{
    build_hamiltonian, build_number_operator, parse_fcidump, reference_state, Encoding, EncodingSpec,
    FermionMapper, OccupationVector,
};
use avqite::pauli::PauliSum;
use avqite::pool::build_uccsd_pool;
use avqite::reference::exact_ground;
use avqite::statevector::{expectation, StateVector};
use common::*;

fn integrals(system: &str) -> avqite::fermion::FermionIntegrals {
    parse_fcidump(&std::fs::read_to_string(fixture(&format!("{system}.fcidump"))).unwrap()).unwrap()
}

fn sector_ground(system: &str, encoding: Encoding, reduction: bool) -> f64 {
    let p = load_problem(&problem_args(system, encoding, reduction)).unwrap();
    exact_ground(&p.hamiltonian, p.number_op.as_ref(), p.n_mol)
        .unwrap()
        .ground_energy
}

#[test]
fn h2_sector_ground_is_fci_in_every_encoding() {
    let fci = reference_energy("h2_0.735");
    for (enc, red) in [
        (Encoding::JordanWigner, false),
        (Encoding::Parity, false),
        (Encoding::Parity, true),
    ] {
        let e = sector_ground("h2_0.735", enc, red);
        assert!((e - fci).abs() < 1e-8, "{enc:?} reduction={red}: {e} vs {fci}");
    }
}

#[test]
fn jw_and_parity_spectra_coincide() {
    let ints = integrals("h4_square_2.0");
    let jw = build_hamiltonian(&ints, &EncodingSpec::jordan_wigner(2, 2)).unwrap();
    let par = build_hamiltonian(&ints, &EncodingSpec::parity(2, 2, false)).unwrap();
    let (a, b) = (dense_eigenvalues(&jw), dense_eigenvalues(&par));
    let worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-9, "spectra differ by {worst}");
}

#[test]
fn reduced_hamiltonians_reach_fci() {
    for system in ["h4_square_2.0", "lih_2.25"] {
        let e = sector_ground(system, Encoding::Parity, true);
        let fci = reference_energy(system);
        assert!((e - fci).abs() < 1e-7, "{system}: {e} vs {fci}");
    }
}

#[test]
fn hartree_fock_determinant_energy() {
    for system in ["h2_0.735", "h4_square_2.0", "lih_2.25"] {
        let p = molecule(system);
        let n = p.hamiltonian.n_qubits();
        let phi = StateVector::basis(n, p.reference).unwrap();
        let e = expectation(&p.hamiltonian, &phi).unwrap().re;
        assert!((e - hf_energy(system)).abs() < 1e-8, "{system}: {e}");
        let num = expectation(p.number_op.as_ref().unwrap(), &phi).unwrap().re;
        assert!((num - p.n_mol.unwrap() as f64).abs() < 1e-12);
    }
}

#[test]
fn frozen_core_water() {
    let mut args = problem_args("h2o_1.5", Encoding::Parity, true);
    args.freeze = vec![0];
    let p = load_problem(&args).unwrap();
    assert_eq!(p.hamiltonian.n_qubits(), 10);
    assert_eq!(p.n_mol, Some(8));
    let phi = StateVector::basis(10, p.reference).unwrap();
    let e = expectation(&p.hamiltonian, &phi).unwrap().re;
    assert!((e - hf_energy("h2o_1.5")).abs() < 1e-8, "frozen HF energy {e}");
}

#[test]
fn transcorrelated_fixtures() {
    for (system, reduction) in [("h2_0.735_tc", false), ("lih_2.25_tc", true)] {
        let p = load_problem(&problem_args(system, Encoding::Parity, reduction)).unwrap();
        assert!(!p.hamiltonian.is_hermitian(), "{system} should be non-Hermitian");
        let r = exact_ground(&p.hamiltonian, p.number_op.as_ref(), p.n_mol).unwrap();
        let reference = reference_energy(system);
        assert!(
            (r.ground_energy - reference).abs() < 1e-7,
            "{system}: {} vs {reference}",
            r.ground_energy
        );
        assert!(r.eigenvalues[0].im.abs() < 1e-8);
    }
}

/// Mapped ladder operators obey the canonical anticommutation relations.
#[test]
fn anticommutation_audit() {
    for spec in [
        EncodingSpec::jordan_wigner(1, 1),
        EncodingSpec::parity(1, 1, false),
    ] {
        let m = FermionMapper::new(&spec, 6).unwrap();
        let op = |p: usize, dag: bool| m.map(&[(p, dag)]).unwrap();
        let anti = |a: &PauliSum, b: &PauliSum| &a.compose(b).unwrap() + &b.compose(a).unwrap();
        for p in 0..6 {
            for q in 0..6 {
                let ab = anti(&op(p, false), &op(q, true));
                let expected = if p == q {
                    PauliSum::identity(6)
                } else {
                    PauliSum::zero(6)
                };
                assert!(ab.max_coeff_diff(&expected) < 1e-12, "{{a_{p}, a†_{q}}}");
                assert!(anti(&op(p, false), &op(q, false)).is_empty());
            }
        }
    }
}

#[test]
fn reference_state_matches_number_operator_per_orbital() {
    let spec = EncodingSpec::parity(2, 1, false);
    let occ: OccupationVector = "110100".parse().unwrap();
    let idx = reference_state(&occ, &spec).unwrap();
    let m = FermionMapper::new(&spec, 6).unwrap();
    let phi = StateVector::basis(6, idx).unwrap();
    for (p, &bit) in occ.bits().iter().enumerate() {
        let n_p = m.map(&[(p, true), (p, false)]).unwrap();
        let v = expectation(&n_p, &phi).unwrap().re;
        assert!((v - bit as u8 as f64).abs() < 1e-12, "orbital {p}");
    }
    let total = build_number_operator(&spec, 6).unwrap();
    assert!((expectation(&total, &phi).unwrap().re - 3.0).abs() < 1e-12);
}

#[test]
fn pool_sizes_and_reduction_count() {
    let h4 = molecule("h4_square_2.0");
    assert_eq!((h4.pool.n_qubits(), h4.pool.len()), (6, 152));
    let lih = molecule("lih_2.25");
    assert_eq!((lih.pool.n_qubits(), lih.pool.len()), (10, 640));
    let occ = OccupationVector::hartree_fock(4, 2, 2).unwrap();
    let jw = build_uccsd_pool(8, &occ.occupied(), &EncodingSpec::jordan_wigner(2, 2)).unwrap();
    assert_eq!(jw.len(), 160);
}

#[test]
fn unsupported_inputs_are_errors() {
    let mut args = problem_args("h2_0.735", Encoding::Parity, true);
    args.init_occ = Some("101".into());
    assert!(load_problem(&args).is_err());
    args.init_occ = None;
    args.hamiltonian = fixture("missing.fcidump");
    let err = load_problem(&args).unwrap_err().to_string();
    assert!(err.contains("missing.fcidump"), "{err}");
}
