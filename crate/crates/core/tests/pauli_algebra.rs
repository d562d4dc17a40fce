use avqite::pauli::{PauliString, PauliSum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Kronecker product of 2x2 letters, qubit 0 as the least significant factor.
fn kron_oracle(s: &str) -> DMatrix<Complex64> {
    let letter = |ch: char| -> DMatrix<Complex64> {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        match ch {
            'I' => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
            'X' => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            'Y' => DMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
            'Z' => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
            _ => unreachable!(),
        }
    };
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for ch in s.chars() {
        m = letter(ch).kronecker(&m);
    }
    m
}

fn pauli_text(n: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('I'), Just('X'), Just('Y'), Just('Z')], n)
        .prop_map(|v| v.into_iter().collect())
}

fn sum_strategy(n: usize) -> impl Strategy<Value = PauliSum> {
    proptest::collection::vec((pauli_text(n), -1.0..1.0f64, -1.0..1.0f64), 1..6).prop_map(move |terms| {
        PauliSum::from_terms(
            n,
            terms
                .into_iter()
                .map(|(s, re, im)| (s.parse().unwrap(), c(re, im))),
        )
        .unwrap()
    })
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn dense_string_matches_kronecker(s in pauli_text(4)) {
        let p: PauliString = s.parse().unwrap();
        prop_assert!(max_diff(&p.to_dense(), &kron_oracle(&s)) < 1e-14);
        prop_assert_eq!(p.to_string(), s);
    }

    #[test]
    fn product_matches_matrix_product(a in pauli_text(3), b in pauli_text(3)) {
        let (p, q): (PauliString, PauliString) = (a.parse().unwrap(), b.parse().unwrap());
        let (phase, r) = p.multiply(&q).unwrap();
        let lhs = r.to_dense() * phase.to_complex();
        prop_assert!(max_diff(&lhs, &(kron_oracle(&a) * kron_oracle(&b))) < 1e-14);
        let (back, _) = q.multiply(&p).unwrap();
        let same = phase == back;
        prop_assert_eq!(same, p.commutes_with(&q));
    }

    #[test]
    fn compose_matches_dense(a in sum_strategy(3), b in sum_strategy(3)) {
        let ab = a.compose(&b).unwrap();
        prop_assert!(max_diff(&ab.to_dense(), &(a.to_dense() * b.to_dense())) < 1e-12);
        // (ab)† = b†a†
        let lhs = ab.adjoint();
        let rhs = b.adjoint().compose(&a.adjoint()).unwrap();
        prop_assert!(lhs.max_coeff_diff(&rhs) < 1e-12);
    }

    #[test]
    fn dense_round_trip(a in sum_strategy(3)) {
        let back = PauliSum::from_dense(3, &a.to_dense()).unwrap();
        prop_assert!(back.max_coeff_diff(&a) < 1e-12);
    }

    #[test]
    fn addition_is_closed_and_cancels(a in sum_strategy(2), b in sum_strategy(2)) {
        let s = &(&a + &b) - &b;
        prop_assert!(s.max_coeff_diff(&a) < 1e-12);
        prop_assert!((&a - &a).is_empty());
    }
}

#[test]
fn hermitian_part_has_real_coefficients() {
    let h = PauliSum::from_terms(
        2,
        [
            ("XZ".parse().unwrap(), c(0.5, 0.0)),
            ("YY".parse().unwrap(), c(0.0, 0.2)),
        ],
    )
    .unwrap();
    assert!(!h.is_hermitian());
    let sym = (&h + &h.adjoint()).scale(c(0.5, 0.0));
    assert!(sym.is_hermitian());
    assert!(sym.coeff(&"YY".parse().unwrap()).norm() < 1e-15);
}

#[test]
fn json_round_trip() {
    let h = PauliSum::from_terms(
        3,
        [
            ("XIZ".parse().unwrap(), c(0.5, -0.25)),
            ("III".parse().unwrap(), c(-1.0, 0.0)),
        ],
    )
    .unwrap();
    let text = serde_json::to_string(&h.to_json()).unwrap();
    let back = PauliSum::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back, h);
}

#[test]
fn mismatched_sizes_are_rejected() {
    let a = PauliSum::identity(2);
    let b = PauliSum::identity(3);
    assert!(a.compose(&b).is_err());
    assert!(a.try_add(&b).is_err());
    assert!("XQ".parse::<PauliString>().is_err());
}
