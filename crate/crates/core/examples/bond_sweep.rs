//! H2 dissociation curve: one adaptive run per bond length, tabulated
//! against FCI.
//!
//! cargo run --release --example bond_sweep

use avqite::cli::{cmd_sweep, EngineArgs, SharedProblemArgs, SweepPoint, SweepRow};
use avqite::fermion::Encoding;

pub fn run_example() -> avqite::Result<Vec<SweepRow>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let points = ["0.500", "0.735", "0.900", "1.300", "1.700", "2.100"]
        .iter()
        .map(|r| format!("r{r}={dir}/h2_{r}.fcidump,{dir}/h2_{r}.ref.json").parse::<SweepPoint>())
        .collect::<avqite::Result<Vec<_>>>()?;
    let shared = SharedProblemArgs {
        format: None,
        encoding: Encoding::Parity,
        two_qubit_reduction: true,
        freeze: vec![],
        init_occ: None,
        nelec: None,
    };
    let out = std::env::temp_dir().join(format!("avqite-bond-sweep-{}", std::process::id()));
    let rows = cmd_sweep(&points, &shared, &EngineArgs::default(), &out)?;
    for r in &rows {
        println!(
            "{:<8} {:<10} E {:>14.10}  error {:+.2e}  ops {}",
            r.tag,
            r.status,
            r.energy.unwrap_or(f64::NAN),
            r.error.unwrap_or(f64::NAN),
            r.n_operators.unwrap_or(0)
        );
    }
    println!("table written to {}", out.join("sweep.csv").display());
    Ok(rows)
}

fn main() -> avqite::Result<()> {
    run_example().map(|_| ())
}
