//! Adaptive imaginary-time evolution of square H4 from the HF determinant.
//!
//! cargo run --release --example adaptive_evolution

use avqite::cli::{load_problem, ProblemArgs};
use avqite::engine::{Engine, EngineConfig};
use avqite::fermion::Encoding;

pub fn run_example() -> avqite::Result<(f64, usize)> {
    let args = ProblemArgs {
        hamiltonian: concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/h4_square_2.0.fcidump").into(),
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
    let mut engine = Engine::new(cfg, &p.hamiltonian, p.number_op, p.pool, p.reference)?;
    let status = engine.run(|r| {
        if r.step == 1 || r.step % 250 == 0 {
            println!(
                "step {:>5}  tau {:>7.2}  E {:.10}  L {:.2e}  ops {}",
                r.step, r.tau, r.energy, r.mclachlan_l, r.n_operators
            );
        }
        Ok(())
    })?;
    let last = engine.last_record().expect("at least one step");
    println!(
        "{status:?} after {} steps: E = {:.10}, {} operators",
        last.step, last.energy, last.n_operators
    );
    for g in &engine.circuit().gates {
        println!("  {}  {:+.6}", g.generator, g.theta);
    }
    Ok((last.energy, last.n_operators))
}

fn main() -> avqite::Result<()> {
    run_example().map(|_| ())
}
