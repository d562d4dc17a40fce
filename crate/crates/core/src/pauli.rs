//! Symplectic Pauli strings and weighted Pauli sums.
//!
//! A string on `n` qubits is stored as a pair of bitmasks. Qubit `k` carries
//! the letter I/X/Y/Z for the bit pair `(x_k, z_k)` = (0,0)/(1,0)/(1,1)/(0,1),
//! and the operator is `i^{|x & z|} X^x Z^z`. Bit `k` of a computational basis
//! index is the value of qubit `k`; rendered strings put qubit 0 leftmost.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_qubits, Error, Result};

/// Coefficients smaller than this are dropped after arithmetic.
pub const PRUNE_TOL: f64 = 1e-12;

pub const MAX_QUBITS: usize = 64;

/// A power of `i`: `+1`, `+i`, `-1`, `-i` for 0..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(power: u32) -> Self {
        Phase((power % 4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// An n-qubit Pauli word with canonical (+1) phase.
///
/// Ordering is lexicographic on `(n_qubits, z_mask, x_mask)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: usize,
    z: u64,
    x: u64,
}

fn qubit_mask(n_qubits: usize) -> u64 {
    if n_qubits == 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        PauliString { n_qubits, z: 0, x: 0 }
    }

    pub fn from_masks(n_qubits: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        if n_qubits > MAX_QUBITS || (x_mask | z_mask) & !qubit_mask(n_qubits) != 0 {
            return Err(Error::PauliString(format!(
                "masks x={x_mask:#b} z={z_mask:#b} exceed {n_qubits} qubits"
            )));
        }
        Ok(PauliString {
            n_qubits,
            z: z_mask,
            x: x_mask,
        })
    }

    /// Single-letter string acting on `qubit`.
    pub fn single(n_qubits: usize, qubit: usize, letter: Letter) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::PauliString(format!(
                "qubit {qubit} out of range for {n_qubits} qubits"
            )));
        }
        let (x, z) = letter.bits();
        Self::from_masks(n_qubits, (x as u64) << qubit, (z as u64) << qubit)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.x | self.z;
        (0..self.n_qubits).filter(move |q| mask >> q & 1 == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Only I and Z letters, i.e. diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Group product `self · other` as `(phase, canonical string)`.
    pub fn multiply(&self, other: &PauliString) -> Result<(Phase, PauliString)> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliString) -> (Phase, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let power = self.y_count() + other.y_count() + 2 * (self.z & other.x).count_ones() + 4
            - (x & z).count_ones() % 4;
        (
            Phase::from_power(power),
            PauliString {
                n_qubits: self.n_qubits,
                z,
                x,
            },
        )
    }

    /// Action on a basis state: `P|b> = c |b ^ x>`, returning `c`.
    #[inline]
    pub fn basis_phase(&self, basis: usize) -> Complex64 {
        let sign_flips = (basis as u64 & self.z).count_ones();
        Phase::from_power(self.y_count() + 2 * sign_flips).to_complex()
    }

    /// Restrict to the listed qubits (in order), which become qubits 0.. of the result.
    pub fn select_qubits(&self, keep: &[usize]) -> PauliString {
        let mut x = 0;
        let mut z = 0;
        for (new, &old) in keep.iter().enumerate() {
            x |= (self.x >> old & 1) << new;
            z |= (self.z >> old & 1) << new;
        }
        PauliString {
            n_qubits: keep.len(),
            z,
            x,
        }
    }

    /// Relabel qubit `k` as `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> PauliString {
        let mut x = 0;
        let mut z = 0;
        for (old, &new) in perm.iter().enumerate() {
            x |= (self.x >> old & 1) << new;
            z |= (self.z >> old & 1) << new;
        }
        PauliString {
            n_qubits: self.n_qubits,
            z,
            x,
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            m[(b ^ self.x as usize, b)] = self.basis_phase(b);
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.n_qubits).map(|q| self.letter(q).as_char()).collect();
        f.write_str(&s)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::PauliString(s.to_string()));
        }
        let mut x = 0u64;
        let mut z = 0u64;
        for (q, c) in s.chars().enumerate() {
            let letter = match c.to_ascii_uppercase() {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                _ => return Err(Error::PauliString(s.to_string())),
            };
            let (bx, bz) = letter.bits();
            x |= (bx as u64) << q;
            z |= (bz as u64) << q;
        }
        Ok(PauliString { n_qubits: n, z, x })
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A complex-weighted sum of Pauli strings; possibly non-Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        PauliSum {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::constant(n_qubits, Complex64::new(1.0, 0.0))
    }

    pub fn constant(n_qubits: usize, value: Complex64) -> Self {
        let mut s = Self::zero(n_qubits);
        s.add_term(PauliString::identity(n_qubits), value);
        s.prune();
        s
    }

    pub fn from_terms(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (PauliString, Complex64)>,
    ) -> Result<Self> {
        let mut s = Self::zero(n_qubits);
        for (p, c) in terms {
            check_qubits(n_qubits, p.n_qubits())?;
            s.add_term(p, c);
        }
        s.prune();
        Ok(s)
    }

    pub fn single(p: PauliString, coeff: Complex64) -> Self {
        let mut s = Self::zero(p.n_qubits());
        s.add_term(p, coeff);
        s.prune();
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    /// Coefficient of the identity string.
    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&PauliString::identity(self.n_qubits))
    }

    /// Accumulate without pruning; call [`PauliSum::prune`] afterwards.
    pub(crate) fn add_term(&mut self, p: PauliString, c: Complex64) {
        *self.terms.entry(p).or_default() += c;
    }

    pub(crate) fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOL);
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < PRUNE_TOL)
    }

    /// Every term is I/Z only.
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(PauliString::is_diagonal)
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut s = PauliSum {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(p, c)| (*p, c * factor)).collect(),
        };
        s.prune();
        s
    }

    pub fn try_add(&self, other: &PauliSum) -> Result<PauliSum> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        let mut s = self.clone();
        for (p, c) in &other.terms {
            s.add_term(*p, *c);
        }
        s.prune();
        Ok(s)
    }

    /// Operator product `self ∘ other`.
    pub fn compose(&self, other: &PauliSum) -> Result<PauliSum> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        let mut out = PauliSum::zero(self.n_qubits);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let (phase, r) = p.mul_unchecked(q);
                out.add_term(r, phase.to_complex() * a * b);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Largest coefficient magnitude difference against `other`.
    pub fn max_coeff_diff(&self, other: &PauliSum) -> f64 {
        let mut keys: Vec<&PauliString> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|p| (self.coeff(p) - other.coeff(p)).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for (p, c) in &self.terms {
            for b in 0..dim {
                m[(b ^ p.x_mask() as usize, b)] += c * p.basis_phase(b);
            }
        }
        m
    }

    /// Expand a dense `2^n × 2^n` matrix in the Pauli basis.
    ///
    /// For every x-mask the entries `M[b ^ x, b]` are Walsh–Hadamard
    /// transformed over `b` to recover the coefficients of all z-masks.
    pub fn from_dense(n_qubits: usize, m: &DMatrix<Complex64>) -> Result<PauliSum> {
        let dim = 1usize << n_qubits;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::Numerical(format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut out = PauliSum::zero(n_qubits);
        let mut buf = vec![Complex64::default(); dim];
        for x in 0..dim {
            for (b, slot) in buf.iter_mut().enumerate() {
                *slot = m[(b ^ x, b)];
            }
            // sum_b (-1)^{|b & z|} buf[b]
            let mut h = 1;
            while h < dim {
                for block in (0..dim).step_by(2 * h) {
                    for k in block..block + h {
                        let (u, v) = (buf[k], buf[k + h]);
                        buf[k] = u + v;
                        buf[k + h] = u - v;
                    }
                }
                h *= 2;
            }
            for (z, &total) in buf.iter().enumerate() {
                if total.norm() == 0.0 {
                    continue;
                }
                let p = PauliString::from_masks(n_qubits, x as u64, z as u64)?;
                // Tr(P† M) / 2^n with P† = i^{-y} Z^z X^x
                let c = total * Phase::from_power(4 - p.y_count() % 4).to_complex() / dim as f64;
                out.add_term(p, c);
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn to_json(&self) -> HamiltonianJson {
        let constant = self.constant_term();
        HamiltonianJson {
            n_qubits: self.n_qubits,
            constant: [constant.re, constant.im],
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| !p.is_identity())
                .map(|(p, c)| TermJson {
                    pauli: p.to_string(),
                    coeff: [c.re, c.im],
                })
                .collect(),
        }
    }

    pub fn from_json(json: &HamiltonianJson) -> Result<PauliSum> {
        let n = json.n_qubits;
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Config(format!(
                "n_qubits must be in 1..={MAX_QUBITS}, got {n}"
            )));
        }
        let mut s = PauliSum::zero(n);
        s.add_term(
            PauliString::identity(n),
            Complex64::new(json.constant[0], json.constant[1]),
        );
        for t in &json.terms {
            let p: PauliString = t.pauli.parse()?;
            check_qubits(n, p.n_qubits())?;
            s.add_term(p, Complex64::new(t.coeff[0], t.coeff[1]));
        }
        s.prune();
        Ok(s)
    }
}

impl Add for &PauliSum {
    type Output = PauliSum;
    fn add(self, rhs: &PauliSum) -> PauliSum {
        self.try_add(rhs).expect("qubit counts differ")
    }
}

impl Sub for &PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: &PauliSum) -> PauliSum {
        self.try_add(&-rhs).expect("qubit counts differ")
    }
}

impl Neg for &PauliSum {
    type Output = PauliSum;
    fn neg(self) -> PauliSum {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// On-disk qubit Hamiltonian.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HamiltonianJson {
    pub n_qubits: usize,
    #[serde(default)]
    pub constant: [f64; 2],
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub pauli: String,
    pub coeff: [f64; 2],
}
