//! Stop a run, serialize the checkpoint, and continue bit for bit.
//!
//! cargo run --example checkpoint_resume

use avqite::cli::{load_problem, ProblemArgs};
use avqite::engine::{Checkpoint, Engine, EngineConfig};
use avqite::fermion::Encoding;

pub fn run_example() -> avqite::Result<bool> {
    let args = ProblemArgs {
        hamiltonian: concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/h2_1.300.fcidump").into(),
        format: None,
        encoding: Encoding::Parity,
        two_qubit_reduction: true,
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

    let mut whole = Engine::new(
        cfg.clone(),
        &p.hamiltonian,
        p.number_op.clone(),
        p.pool.clone(),
        p.reference,
    )?;
    whole.run(|_| Ok(()))?;

    let mut first = Engine::new(
        cfg.clone(),
        &p.hamiltonian,
        p.number_op.clone(),
        p.pool.clone(),
        p.reference,
    )?;
    for _ in 0..10 {
        first.step()?;
    }
    let json = first.checkpoint().to_json();
    println!("checkpoint after 10 steps: {} bytes", json.len());
    let mut resumed = Engine::resume(
        &Checkpoint::from_json(&json)?,
        cfg,
        &p.hamiltonian,
        p.number_op,
        p.pool,
    )?;
    resumed.run(|_| Ok(()))?;

    let same = resumed.trajectory_hash() == whole.trajectory_hash();
    println!(
        "uninterrupted {}\nresumed       {}\nidentical: {same}",
        whole.trajectory_hash(),
        resumed.trajectory_hash()
    );
    Ok(same)
}

fn main() -> avqite::Result<()> {
    run_example().map(|_| ())
}
