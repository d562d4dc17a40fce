//! The UCCSD Pauli-string pool for H4 and where its strings come from.
//!
//! cargo run --example operator_pool

use avqite::fermion::{parse_fcidump, EncodingSpec, OccupationVector};
use avqite::pool::{build_uccsd_pool, pool_report};

pub fn run_example() -> avqite::Result<usize> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/h4_square_2.0.fcidump");
    let ints = parse_fcidump(&std::fs::read_to_string(path).map_err(|e| avqite::Error::io(path, e))?)?;
    let occ = OccupationVector::hartree_fock(ints.n_spatial(), ints.n_alpha(), ints.n_beta())?;
    let spec = EncodingSpec::parity(ints.n_alpha(), ints.n_beta(), true);
    let pool = build_uccsd_pool(2 * ints.n_spatial(), &occ.occupied(), &spec)?;
    let report = pool_report(&pool);
    for row in report.rows.iter().take(6) {
        println!(
            "{:>4} {} w={} from {}",
            row.index,
            row.pauli,
            row.weight,
            row.provenance.join(" ")
        );
    }
    println!("...");
    println!("weights: {:?}", report.weight_histogram);
    println!("{} generators, max weight {}", report.total, report.max_weight);
    Ok(report.total)
}

fn main() -> avqite::Result<()> {
    run_example().map(|_| ())
}
