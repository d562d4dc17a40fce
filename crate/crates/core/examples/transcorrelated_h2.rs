//! Evolution under a non-Hermitian (similarity-transformed) H2 Hamiltonian.
//!
//! cargo run --example transcorrelated_h2

use avqite::cli::{load_problem, ProblemArgs};
use avqite::engine::{Engine, EngineConfig};
use avqite::fermion::Encoding;
use avqite::reference::exact_ground;

pub fn run_example() -> avqite::Result<f64> {
    let args = ProblemArgs {
        hamiltonian: concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/h2_0.735_tc.fcidump").into(),
        format: None,
        encoding: Encoding::JordanWigner,
        two_qubit_reduction: false,
        freeze: vec![],
        init_occ: None,
        nelec: None,
        pool: None,
    };
    let p = load_problem(&args)?;
    println!("hermitian: {}", p.hamiltonian.is_hermitian());
    let ed = exact_ground(&p.hamiltonian, p.number_op.as_ref(), p.n_mol)?;
    let cfg = EngineConfig {
        n_mol: p.n_mol,
        ..Default::default()
    };
    let mut engine = Engine::new(cfg, &p.hamiltonian, p.number_op, p.pool, p.reference)?;
    engine.run(|_| Ok(()))?;
    let last = engine.last_record().expect("at least one step");
    println!(
        "E = {:.10} (imag {:.1e}), ED {:.10}, error {:.2e}, {} operators",
        last.energy,
        last.imag_energy,
        ed.ground_energy,
        last.energy - ed.ground_energy,
        last.n_operators
    );
    Ok(last.energy - ed.ground_energy)
}

fn main() -> avqite::Result<()> {
    run_example().map(|_| ())
}
