//! Operator pools for the adaptive ansatz.
//!
//! The UCCSD pool holds every distinct Pauli string that appears in the qubit
//! image of a reference-based, spin-conserving single or double excitation
//! generator `T - T†`. Each string becomes one independently parameterized
//! rotation.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{EncodingSpec, FermionMapper};
use crate::pauli::{PauliString, PRUNE_TOL};

/// An excitation between spin orbitals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Excitation {
    Single { from: usize, to: usize },
    Double { from: [usize; 2], to: [usize; 2] },
}

impl Excitation {
    /// `(coefficient, ops)` for `T` and `-T†`.
    fn generator_terms(&self) -> [(Complex64, Vec<(usize, bool)>); 2] {
        let one = Complex64::new(1.0, 0.0);
        match *self {
            Excitation::Single { from, to } => [
                (one, vec![(to, true), (from, false)]),
                (-one, vec![(from, true), (to, false)]),
            ],
            Excitation::Double {
                from: [i, j],
                to: [a, b],
            } => [
                (one, vec![(a, true), (b, true), (j, false), (i, false)]),
                (-one, vec![(i, true), (j, true), (b, false), (a, false)]),
            ],
        }
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Excitation::Single { from, to } => write!(f, "{from}->{to}"),
            Excitation::Double { from, to } => {
                write!(f, "{},{}->{},{}", from[0], from[1], to[0], to[1])
            }
        }
    }
}

/// Spin-conserving singles and doubles out of `occupied`, in the order
/// singles (α, β), doubles (αα, αβ, ββ).
pub fn uccsd_excitations(n_spin_orbitals: usize, occupied: &[usize]) -> Vec<Excitation> {
    let m = n_spin_orbitals / 2;
    let occ = |spin: usize| -> Vec<usize> {
        occupied
            .iter()
            .copied()
            .filter(|&i| (i >= m) as usize == spin)
            .collect()
    };
    let virt = |spin: usize| -> Vec<usize> {
        (spin * m..(spin + 1) * m)
            .filter(|i| !occupied.contains(i))
            .collect()
    };
    let (oa, ob, va, vb) = (occ(0), occ(1), virt(0), virt(1));
    let mut out = Vec::new();
    for (o, v) in [(&oa, &va), (&ob, &vb)] {
        for &i in o {
            for &a in v {
                out.push(Excitation::Single { from: i, to: a });
            }
        }
    }
    let same_spin = |o: &[usize], v: &[usize], out: &mut Vec<Excitation>| {
        for (x, &i) in o.iter().enumerate() {
            for &j in &o[x + 1..] {
                for (y, &a) in v.iter().enumerate() {
                    for &b in &v[y + 1..] {
                        out.push(Excitation::Double {
                            from: [i, j],
                            to: [a, b],
                        });
                    }
                }
            }
        }
    };
    same_spin(&oa, &va, &mut out);
    for &i in &oa {
        for &j in &ob {
            for &a in &va {
                for &b in &vb {
                    out.push(Excitation::Double {
                        from: [i, j],
                        to: [a, b],
                    });
                }
            }
        }
    }
    same_spin(&ob, &vb, &mut out);
    out
}

/// Deduplicated Pauli strings with the excitations that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorPool {
    n_qubits: usize,
    generators: Vec<PauliString>,
    /// Per string, originating excitations in generation order.
    provenance: Vec<Vec<Excitation>>,
}

impl GeneratorPool {
    pub fn from_strings(n_qubits: usize, strings: Vec<PauliString>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for s in &strings {
            if s.n_qubits() != n_qubits {
                return Err(Error::Dimension {
                    expected: n_qubits,
                    found: s.n_qubits(),
                });
            }
            if s.is_identity() {
                return Err(Error::Pool("identity string in pool".into()));
            }
            if !seen.insert(*s) {
                return Err(Error::Pool(format!("duplicate pool string {s}")));
            }
        }
        let provenance = vec![Vec::new(); strings.len()];
        Ok(GeneratorPool {
            n_qubits,
            generators: strings,
            provenance,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn provenance(&self, index: usize) -> &[Excitation] {
        &self.provenance[index]
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.generators.iter().map(|p| p.to_string()).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let strings: Vec<PauliString> = serde_json::from_str(text)?;
        let n = strings
            .first()
            .map(PauliString::n_qubits)
            .ok_or_else(|| Error::Pool("empty pool file".into()))?;
        Self::from_strings(n, strings)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.generators).expect("strings serialize")
    }
}

/// UCCSD Pauli pool for the determinant with `occupied` active spin orbitals.
pub fn build_uccsd_pool(
    n_spin_orbitals: usize,
    occupied: &[usize],
    spec: &EncodingSpec,
) -> Result<GeneratorPool> {
    let excitations = uccsd_excitations(n_spin_orbitals, occupied);
    if excitations.is_empty() {
        return Err(Error::Pool(
            "no single or double excitations: every spin sector is either full or empty".into(),
        ));
    }
    let mapper = FermionMapper::new(spec, n_spin_orbitals)?;
    let mut found: BTreeMap<PauliString, Vec<Excitation>> = BTreeMap::new();
    for exc in excitations {
        let terms = exc.generator_terms();
        let image = mapper.map_sum(terms.iter().map(|(c, ops)| (*c, ops.as_slice())))?;
        for (p, c) in image.iter() {
            if c.re.abs() > PRUNE_TOL {
                return Err(Error::Pool(format!(
                    "generator {exc} maps to non-imaginary coefficient {c} on {p}"
                )));
            }
            if p.is_identity() {
                continue;
            }
            found.entry(*p).or_default().push(exc);
        }
    }
    let (generators, provenance) = found.into_iter().unzip();
    Ok(GeneratorPool {
        n_qubits: mapper.n_qubits(),
        generators,
        provenance,
    })
}

/// Every string with an odd number of Y letters: the generators of real
/// orthogonal rotations, enough to reach any real state.
pub fn real_rotation_pool(n_qubits: usize) -> Result<GeneratorPool> {
    if n_qubits == 0 || n_qubits > 10 {
        return Err(Error::Pool(format!(
            "complete real pool is limited to 1..=10 qubits, got {n_qubits}"
        )));
    }
    let mut strings = Vec::new();
    for x in 0..1u64 << n_qubits {
        for z in 0..1u64 << n_qubits {
            if (x & z).count_ones() % 2 == 1 {
                strings.push(PauliString::from_masks(n_qubits, x, z)?);
            }
        }
    }
    strings.sort();
    GeneratorPool::from_strings(n_qubits, strings)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolRow {
    pub index: usize,
    pub pauli: String,
    pub weight: usize,
    /// Originating excitations, first one is the primary provenance.
    pub provenance: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolReport {
    pub n_qubits: usize,
    pub total: usize,
    pub max_weight: usize,
    /// `weight_histogram[w]` strings have weight `w`.
    pub weight_histogram: Vec<usize>,
    pub rows: Vec<PoolRow>,
}

pub fn pool_report(pool: &GeneratorPool) -> PoolReport {
    let rows: Vec<PoolRow> = pool
        .generators
        .iter()
        .enumerate()
        .map(|(index, p)| PoolRow {
            index,
            pauli: p.to_string(),
            weight: p.weight(),
            provenance: pool.provenance[index].iter().map(|e| e.to_string()).collect(),
        })
        .collect();
    let max_weight = rows.iter().map(|r| r.weight).max().unwrap_or(0);
    let mut weight_histogram = vec![0; pool.n_qubits + 1];
    for r in &rows {
        weight_histogram[r.weight] += 1;
    }
    PoolReport {
        n_qubits: pool.n_qubits,
        total: rows.len(),
        max_weight,
        weight_histogram,
        rows,
    }
}

impl fmt::Display for PoolReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>5}  {:<w$}  {:>6}  provenance",
            "index",
            "pauli",
            "weight",
            w = self.n_qubits.max(5)
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>5}  {:<w$}  {:>6}  {}",
                r.index,
                r.pauli,
                r.weight,
                r.provenance.join(" "),
                w = self.n_qubits.max(5)
            )?;
        }
        write!(f, "{} generators, max weight {}", self.total, self.max_weight)
    }
}
