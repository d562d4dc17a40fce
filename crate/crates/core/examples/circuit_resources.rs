//! Gate counts and OpenQASM for a converged H2 ansatz.
//!
//! cargo run --example circuit_resources

use avqite::cli::{load_problem, ProblemArgs};
use avqite::engine::{Engine, EngineConfig};
use avqite::fermion::Encoding;
use avqite::resources::{count, synthesize, ResourceReport};

pub fn run_example() -> avqite::Result<ResourceReport> {
    let args = ProblemArgs {
        hamiltonian: concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/h2_0.735.fcidump").into(),
        format: None,
        encoding: Encoding::JordanWigner,
        two_qubit_reduction: false,
        freeze: vec![],
        init_occ: None,
        nelec: None,
        pool: None,
    };
    let p = load_problem(&args)?;
    let cfg = EngineConfig {
        n_mol: p.n_mol,
        ..Default::default()
    };
    let mut engine = Engine::new(cfg, &p.hamiltonian, p.number_op, p.pool, p.reference)?;
    engine.run(|_| Ok(()))?;
    let ir = synthesize(engine.circuit());
    let report = count(&ir, engine.circuit().n_params());
    println!("{report}");
    print!("{}", ir.to_qasm());
    Ok(report)
}

fn main() -> avqite::Result<()> {
    run_example().map(|_| ())
}
