//! From FCIDUMP integrals to qubit Hamiltonians in two encodings.
//!
//! cargo run --example fermion_mapping

use avqite::fermion::{build_hamiltonian, parse_fcidump, reference_state, EncodingSpec, OccupationVector};
use avqite::statevector::{expectation, StateVector};

pub fn run_example() -> avqite::Result<Vec<(usize, f64)>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/h4_square_2.0.fcidump");
    let ints = parse_fcidump(&std::fs::read_to_string(path).map_err(|e| avqite::Error::io(path, e))?)?;
    let occ = OccupationVector::hartree_fock(ints.n_spatial(), ints.n_alpha(), ints.n_beta())?;
    let mut out = Vec::new();
    for (name, spec) in [
        (
            "jordan-wigner",
            EncodingSpec::jordan_wigner(ints.n_alpha(), ints.n_beta()),
        ),
        (
            "parity, reduced",
            EncodingSpec::parity(ints.n_alpha(), ints.n_beta(), true),
        ),
    ] {
        let h = build_hamiltonian(&ints, &spec)?;
        let r = reference_state(&occ, &spec)?;
        let e_hf = expectation(&h, &StateVector::basis(h.n_qubits(), r)?)?.re;
        println!(
            "{name:>16}: {} qubits, {} terms, HF {occ} -> |{r:b}>, E_HF = {e_hf:.10}",
            h.n_qubits(),
            h.len()
        );
        out.push((h.n_qubits(), e_hf));
    }
    Ok(out)
}

fn main() -> avqite::Result<()> {
    run_example().map(|_| ())
}
