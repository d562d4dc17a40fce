//! The particle-number penalty keeps the evolution in the right sector when a
//! lower level with the wrong electron count exists.
//!
//! cargo run --example penalty_sector

use avqite::engine::{Engine, EngineConfig};
use avqite::pauli::{PauliString, PauliSum};
use avqite::pool::real_rotation_pool;
use num_complex::Complex64;

pub fn run_example() -> avqite::Result<Vec<f64>> {
    // two sites in the X basis: N counts |-> states and (ZZ + YY)/2 hops
    // between them. Levels: N=0 at 0, N=1 at -1.0, N=2 at -0.8.
    let c = |x: f64| Complex64::new(x, 0.0);
    let number = PauliSum::from_terms(
        2,
        [
            (PauliString::identity(2), c(1.0)),
            ("XI".parse()?, c(-0.5)),
            ("IX".parse()?, c(-0.5)),
        ],
    )?;
    let hop = PauliSum::from_terms(2, [("ZZ".parse()?, c(0.3)), ("YY".parse()?, c(0.3))])?;
    let h = &number.scale(c(-0.4)) + &hop;
    let mut n_final = Vec::new();
    for alpha in [0.0, 1.0] {
        let cfg = EngineConfig {
            n_mol: Some(2),
            penalty_alpha: alpha,
            ..Default::default()
        };
        let mut engine = Engine::new(cfg, &h, Some(number.clone()), real_rotation_pool(2)?, 0)?;
        engine.run(|_| Ok(()))?;
        let last = engine.last_record().expect("at least one step");
        let n = last.number_expectation.unwrap_or(f64::NAN);
        println!(
            "alpha {alpha}: E = {:.8}, <N> = {n:.6}, E' = {:.8}",
            last.energy, last.energy_penalized
        );
        n_final.push(n);
    }
    Ok(n_final)
}

fn main() -> avqite::Result<()> {
    run_example().map(|_| ())
}
