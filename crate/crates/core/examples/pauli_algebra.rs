//! Multiplying Pauli strings and sums.
//!
//! cargo run --example pauli_algebra

use avqite::pauli::{PauliString, PauliSum};
use num_complex::Complex64;

pub fn run_example() -> avqite::Result<PauliSum> {
    let x: PauliString = "XIZ".parse()?;
    let y: PauliString = "YYI".parse()?;
    let (phase, product) = x.multiply(&y)?;
    println!(
        "{x} * {y} = {:?} {product}  (commute: {})",
        phase.to_complex(),
        x.commutes_with(&y)
    );

    let a = PauliSum::from_terms(3, [(x, Complex64::new(0.5, 0.0)), (y, Complex64::new(0.0, 0.25))])?;
    let sq = a.compose(&a.adjoint())?;
    println!("A A† has {} terms, hermitian: {}", sq.len(), sq.is_hermitian());
    for (p, c) in sq.iter() {
        println!("  {p}  {c:+.4}");
    }
    Ok(sq)
}

fn main() -> avqite::Result<()> {
    run_example().map(|_| ())
}
