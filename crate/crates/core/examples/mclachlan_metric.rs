//! Metric A, gradient C, variance and McLachlan distance for a small ansatz,
//! checked against central differences.
//!
//! cargo run --example mclachlan_metric

use avqite::pauli::PauliSum;
use avqite::statevector::{finite_difference_check, AnsatzCircuit, McLachlanSystem};
use num_complex::Complex64;

pub fn run_example() -> avqite::Result<f64> {
    let h = PauliSum::from_terms(
        3,
        [
            ("ZZI".parse()?, Complex64::new(0.8, 0.0)),
            ("IZZ".parse()?, Complex64::new(0.8, 0.0)),
            ("XII".parse()?, Complex64::new(-0.5, 0.0)),
            ("IXI".parse()?, Complex64::new(-0.5, 0.0)),
            ("IIX".parse()?, Complex64::new(-0.5, 0.0)),
        ],
    )?;
    let gates = [("YII", 0.3), ("IYI", -0.2), ("ZYI", 0.15), ("IZY", 0.4)];
    let circuit = AnsatzCircuit::with_gates(3, 0, gates.iter().map(|(s, t)| (s.parse().unwrap(), *t)))?;
    let sys = McLachlanSystem::evaluate(&circuit, &h)?;
    let q = &sys.quantities;
    println!("E = {:.8}, Var = {:.3e}, L = {:.3e}", sys.energy.re, q.var, q.l);
    for (row, c) in q.a.iter().zip(&q.c) {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:+.4}")).collect();
        println!("  [{}]   C {c:+.5}", cells.join(" "));
    }
    println!(
        "theta_dot = {:?}",
        q.theta_dot.iter().map(|x| format!("{x:+.4}")).collect::<Vec<_>>()
    );
    let fd = finite_difference_check(&circuit, &h, 1e-4)?;
    println!(
        "finite differences: C error {:.1e}, A error {:.1e}",
        fd.max_c_error, fd.max_a_error
    );
    Ok(fd.max_c_error.max(fd.max_a_error))
}

fn main() -> avqite::Result<()> {
    run_example().map(|_| ())
}
