//! Exact diagonalization in a particle-number sector and exact imaginary-time
//! evolution from the Hartree-Fock determinant.
//!
//! cargo run --release --example exact_reference

use avqite::fermion::{
    build_hamiltonian, build_number_operator, parse_fcidump, reference_state, EncodingSpec, OccupationVector,
};
use avqite::reference::{exact_ground, exact_ite};
use avqite::statevector::StateVector;

pub fn run_example() -> avqite::Result<f64> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/lih_2.25.fcidump");
    let ints = parse_fcidump(&std::fs::read_to_string(path).map_err(|e| avqite::Error::io(path, e))?)?;
    let (na, nb) = (ints.n_alpha(), ints.n_beta());
    let spec = EncodingSpec::parity(na, nb, true);
    let h = build_hamiltonian(&ints, &spec)?;
    let number = build_number_operator(&spec, 2 * ints.n_spatial())?;

    let full = exact_ground(&h, None, None)?;
    let sector = exact_ground(&h, Some(&number), Some(na + nb))?;
    println!(
        "LiH, {} qubits: lowest level {:.10}, N = {} sector {:.10}",
        h.n_qubits(),
        full.ground_energy,
        na + nb,
        sector.ground_energy
    );

    let occ = OccupationVector::hartree_fock(ints.n_spatial(), na, nb)?;
    let start = StateVector::basis(h.n_qubits(), reference_state(&occ, &spec)?)?;
    let grid: Vec<f64> = (0..=10).map(|k| k as f64).collect();
    for p in exact_ite(&h, &start, &grid)? {
        println!(
            "tau {:>4.1}  E {:.10}  error {:.2e}",
            p.tau,
            p.energy,
            p.energy - sector.ground_energy
        );
    }
    Ok(sector.ground_energy)
}

fn main() -> avqite::Result<()> {
    run_example().map(|_| ())
}
