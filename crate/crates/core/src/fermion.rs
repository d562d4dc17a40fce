//! Second-quantized integrals and their qubit images.
//!
//! Two-electron integrals use chemist notation `(pq|rs)`, i.e. the Hamiltonian
//! is
//!
//! ```text
//! H = E_core + Σ h_pq a†_p a_q + ½ Σ (pq|rs) a†_p a†_r a_s a_q
//! ```
//!
//! over spin orbitals, with spin conserved along each `p→q` and `r→s` pair.
//! In physicist notation this is `V_pr^{qs} = (pq|rs)`.
//!
//! Spin orbitals are ordered α-block then β-block: spatial orbital `k` is
//! spin orbital `k` (α) and `k + m` (β) for `m` active spatial orbitals.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};

const SYMMETRY_TOL: f64 = 1e-10;

/// One- and two-electron integrals in a spatial-orbital basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionIntegrals {
    n_spatial: usize,
    n_electrons: usize,
    ms2: i64,
    core_energy: f64,
    h: Vec<Complex64>,
    v: Vec<Complex64>,
    hermitian: bool,
}

impl FermionIntegrals {
    /// `h` is row-major `n×n`, `v` is `(pq|rs)` at `((p*n + q)*n + r)*n + s`.
    pub fn new(
        n_spatial: usize,
        n_electrons: usize,
        ms2: i64,
        core_energy: f64,
        h: Vec<Complex64>,
        v: Vec<Complex64>,
        hermitian: bool,
    ) -> Result<Self> {
        let n = n_spatial;
        if n == 0 {
            return Err(Error::Config("at least one spatial orbital required".into()));
        }
        if h.len() != n * n || v.len() != n.pow(4) {
            return Err(Error::Config(format!(
                "integral arrays have {} / {} entries, expected {} / {}",
                h.len(),
                v.len(),
                n * n,
                n.pow(4)
            )));
        }
        if (n_electrons as i64 + ms2) % 2 != 0 || ms2.unsigned_abs() as usize > n_electrons {
            return Err(Error::Config(format!(
                "NELEC={n_electrons} and MS2={ms2} are inconsistent"
            )));
        }
        let ints = FermionIntegrals {
            n_spatial,
            n_electrons,
            ms2,
            core_energy,
            h,
            v,
            hermitian,
        };
        if hermitian {
            ints.check_symmetry()?;
        }
        Ok(ints)
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn ms2(&self) -> i64 {
        self.ms2
    }

    pub fn n_alpha(&self) -> usize {
        ((self.n_electrons as i64 + self.ms2) / 2) as usize
    }

    pub fn n_beta(&self) -> usize {
        ((self.n_electrons as i64 - self.ms2) / 2) as usize
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn h(&self, p: usize, q: usize) -> Complex64 {
        self.h[p * self.n_spatial + q]
    }

    /// Chemist-notation `(pq|rs)`.
    pub fn v(&self, p: usize, q: usize, r: usize, s: usize) -> Complex64 {
        let n = self.n_spatial;
        self.v[((p * n + q) * n + r) * n + s]
    }

    fn check_symmetry(&self) -> Result<()> {
        let n = self.n_spatial;
        for p in 0..n {
            for q in 0..n {
                if (self.h(p, q) - self.h(q, p).conj()).norm() > SYMMETRY_TOL {
                    return Err(Error::Config(format!("h[{p}][{q}] is not Hermitian")));
                }
                for r in 0..n {
                    for s in 0..n {
                        let x = self.v(p, q, r, s);
                        for (a, b, c, d) in eightfold(p, q, r, s) {
                            if (self.v(a, b, c, d) - x).norm() > SYMMETRY_TOL {
                                return Err(Error::Config(format!(
                                    "({p}{q}|{r}{s}) breaks 8-fold permutation symmetry"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Fold doubly occupied `frozen` orbitals into a constant and effective
    /// one-body terms, returning integrals over the remaining orbitals (in
    /// ascending original order).
    pub fn freeze(&self, frozen: &[usize]) -> Result<FermionIntegrals> {
        let n = self.n_spatial;
        let mut is_frozen = vec![false; n];
        for &f in frozen {
            if f >= n {
                return Err(Error::Encoding(format!(
                    "frozen orbital {f} out of range (norb = {n})"
                )));
            }
            if is_frozen[f] {
                return Err(Error::Encoding(format!("frozen orbital {f} listed twice")));
            }
            is_frozen[f] = true;
        }
        if 2 * frozen.len() > self.n_electrons || frozen.len() > self.n_alpha().min(self.n_beta()) {
            return Err(Error::Encoding(
                "frozen orbitals must be doubly occupied by the reference determinant".into(),
            ));
        }
        let active: Vec<usize> = (0..n).filter(|&k| !is_frozen[k]).collect();
        let m = active.len();
        if m == 0 {
            return Err(Error::Encoding("no active orbitals left after freezing".into()));
        }

        let mut core = Complex64::new(self.core_energy, 0.0);
        for &f in frozen {
            core += 2.0 * self.h(f, f);
            for &g in frozen {
                core += 2.0 * self.v(f, f, g, g) - self.v(f, g, g, f);
            }
        }
        if core.im.abs() > SYMMETRY_TOL {
            return Err(Error::Numerical(format!(
                "frozen-core constant acquired an imaginary part {:e}",
                core.im
            )));
        }

        let mut h = vec![Complex64::default(); m * m];
        for (i, &x) in active.iter().enumerate() {
            for (j, &y) in active.iter().enumerate() {
                let mut val = self.h(x, y);
                for &f in frozen {
                    val += self.v(x, y, f, f) + self.v(f, f, x, y)
                        - 0.5 * (self.v(x, f, f, y) + self.v(f, y, x, f));
                }
                h[i * m + j] = val;
            }
        }
        let mut v = vec![Complex64::default(); m.pow(4)];
        for (a, &p) in active.iter().enumerate() {
            for (b, &q) in active.iter().enumerate() {
                for (c, &r) in active.iter().enumerate() {
                    for (d, &s) in active.iter().enumerate() {
                        v[((a * m + b) * m + c) * m + d] = self.v(p, q, r, s);
                    }
                }
            }
        }
        Ok(FermionIntegrals {
            n_spatial: m,
            n_electrons: self.n_electrons - 2 * frozen.len(),
            ms2: self.ms2,
            core_energy: core.re,
            h,
            v,
            hermitian: self.hermitian,
        })
    }
}

fn eightfold(p: usize, q: usize, r: usize, s: usize) -> [(usize, usize, usize, usize); 8] {
    [
        (p, q, r, s),
        (q, p, r, s),
        (p, q, s, r),
        (q, p, s, r),
        (r, s, p, q),
        (s, r, p, q),
        (r, s, q, p),
        (s, r, q, p),
    ]
}

/// Parse an FCIDUMP file.
///
/// Header: `&FCI NORB=…,NELEC=…,MS2=…` up to `&END` or `/`. Records are
/// `value p q r s` with 1-based indices: `0 0 0 0` is the core energy,
/// `p q 0 0` a one-electron integral, anything else `(pq|rs)`. Records
/// `p 0 0 0` (orbital energies) are ignored, as is `ORBSYM`.
///
/// With `ITC=1` in the header every record is `re im p q r s` and no
/// permutational symmetry is applied; otherwise 8-fold (2-fold for `h`)
/// symmetry fills the unlisted entries.
pub fn parse_fcidump(text: &str) -> Result<FermionIntegrals> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let mut header = String::new();
    let mut header_end = None;
    for (no, line) in lines.by_ref() {
        let upper = line.to_ascii_uppercase();
        let trimmed = upper.trim();
        if let Some(idx) = trimmed.find("&END") {
            header.push_str(&trimmed[..idx]);
            header_end = Some(no);
            break;
        }
        if trimmed == "/" || trimmed.ends_with('/') {
            header.push_str(trimmed.trim_end_matches('/'));
            header_end = Some(no);
            break;
        }
        header.push_str(trimmed);
        header.push(' ');
    }
    let header_end = header_end.ok_or_else(|| Error::parse(1, "header is not terminated by &END or /"))?;
    let fields = parse_namelist(&header).map_err(|m| Error::parse(header_end, m))?;
    let get = |key: &str| -> Result<Option<i64>> {
        match fields.iter().find(|(k, _)| k == key) {
            None => Ok(None),
            Some((_, vals)) => match vals.first() {
                Some(v) => v
                    .parse::<i64>()
                    .map(Some)
                    .map_err(|_| Error::parse(header_end, format!("{key} has non-integer value {v:?}"))),
                None => Err(Error::parse(header_end, format!("{key} has no value"))),
            },
        }
    };
    if !header.trim_start().starts_with("&FCI") {
        return Err(Error::parse(1, "header must start with &FCI"));
    }
    let norb = get("NORB")?.ok_or_else(|| Error::parse(header_end, "NORB missing"))?;
    let nelec = get("NELEC")?.ok_or_else(|| Error::parse(header_end, "NELEC missing"))?;
    let ms2 = get("MS2")?.unwrap_or(0);
    let complex = get("ITC")?.unwrap_or(0) == 1;
    if norb <= 0 || nelec < 0 {
        return Err(Error::parse(
            header_end,
            format!("invalid NORB={norb} / NELEC={nelec}"),
        ));
    }
    let n = norb as usize;

    let mut h: Vec<Option<Complex64>> = vec![None; n * n];
    let mut v: Vec<Option<Complex64>> = vec![None; n.pow(4)];
    let mut core: Option<f64> = None;
    let mut seen = std::collections::HashSet::new();

    let expected_fields = if complex { 6 } else { 5 };
    for (no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != expected_fields {
            return Err(Error::parse(
                no,
                format!("expected {expected_fields} fields, found {}", tokens.len()),
            ));
        }
        let num = |t: &str| -> Result<f64> {
            t.replace(['D', 'd'], "e")
                .parse::<f64>()
                .map_err(|_| Error::parse(no, format!("bad number {t:?}")))
        };
        let value = if complex {
            Complex64::new(num(tokens[0])?, num(tokens[1])?)
        } else {
            Complex64::new(num(tokens[0])?, 0.0)
        };
        let mut idx = [0usize; 4];
        for (k, t) in tokens[expected_fields - 4..].iter().enumerate() {
            let i: i64 = t
                .parse()
                .map_err(|_| Error::parse(no, format!("bad index {t:?}")))?;
            if i < 0 || i > norb {
                return Err(Error::parse(no, format!("index {i} out of range 0..={norb}")));
            }
            idx[k] = i as usize;
        }
        if !seen.insert(idx) {
            return Err(Error::parse(
                no,
                format!(
                    "duplicate entry for indices {} {} {} {}",
                    idx[0], idx[1], idx[2], idx[3]
                ),
            ));
        }
        match idx {
            [0, 0, 0, 0] => {
                if value.im != 0.0 {
                    return Err(Error::parse(no, "core energy must be real"));
                }
                core = Some(value.re);
            }
            [p, 0, 0, 0] if p > 0 => {}
            [p, q, 0, 0] if p > 0 && q > 0 => {
                let (p, q) = (p - 1, q - 1);
                let targets: &[(usize, usize)] = if complex { &[(p, q)] } else { &[(p, q), (q, p)] };
                for &(a, b) in targets {
                    store(&mut h[a * n + b], value, no)?;
                }
            }
            [p, q, r, s] if p > 0 && q > 0 && r > 0 && s > 0 => {
                let (p, q, r, s) = (p - 1, q - 1, r - 1, s - 1);
                if complex {
                    store(&mut v[((p * n + q) * n + r) * n + s], value, no)?;
                } else {
                    for (a, b, c, d) in eightfold(p, q, r, s) {
                        store(&mut v[((a * n + b) * n + c) * n + d], value, no)?;
                    }
                }
            }
            _ => {
                return Err(Error::parse(
                    no,
                    format!("index pattern {idx:?} is neither core, one- nor two-electron"),
                ))
            }
        }
    }

    FermionIntegrals::new(
        n,
        nelec as usize,
        ms2,
        core.unwrap_or(0.0),
        h.into_iter().map(Option::unwrap_or_default).collect(),
        v.into_iter().map(Option::unwrap_or_default).collect(),
        !complex,
    )
}

fn store(slot: &mut Option<Complex64>, value: Complex64, line: usize) -> Result<()> {
    match slot {
        Some(old) if (*old - value).norm() > SYMMETRY_TOL => Err(Error::parse(
            line,
            format!("value {value} conflicts with symmetry-equivalent entry {old}"),
        )),
        _ => {
            *slot = Some(value);
            Ok(())
        }
    }
}

fn parse_namelist(header: &str) -> std::result::Result<Vec<(String, Vec<String>)>, String> {
    let body = header.trim().trim_start_matches("&FCI");
    let mut fields: Vec<(String, Vec<String>)> = Vec::new();
    for token in body.replace(',', " ").split_whitespace() {
        if let Some((key, rest)) = token.split_once('=') {
            if key.is_empty() {
                return Err(format!("malformed namelist token {token:?}"));
            }
            let mut vals = Vec::new();
            if !rest.is_empty() {
                vals.push(rest.to_string());
            }
            fields.push((key.to_string(), vals));
        } else {
            match fields.last_mut() {
                Some((_, vals)) => vals.push(token.to_string()),
                None => return Err(format!("value {token:?} before any key")),
            }
        }
    }
    Ok(fields)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    JordanWigner,
    Parity,
}

impl FromStr for Encoding {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jw" | "jordan_wigner" | "jordan-wigner" => Ok(Encoding::JordanWigner),
            "parity" => Ok(Encoding::Parity),
            _ => Err(Error::Config(format!("unknown encoding {s:?}"))),
        }
    }
}

/// How spin orbitals become qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingSpec {
    pub scheme: Encoding,
    pub two_qubit_reduction: bool,
    /// Total α electrons, frozen ones included.
    pub n_alpha: usize,
    /// Total β electrons, frozen ones included.
    pub n_beta: usize,
    #[serde(default)]
    pub frozen_spatial: Vec<usize>,
}

impl EncodingSpec {
    pub fn jordan_wigner(n_alpha: usize, n_beta: usize) -> Self {
        EncodingSpec {
            scheme: Encoding::JordanWigner,
            two_qubit_reduction: false,
            n_alpha,
            n_beta,
            frozen_spatial: Vec::new(),
        }
    }

    pub fn parity(n_alpha: usize, n_beta: usize, two_qubit_reduction: bool) -> Self {
        EncodingSpec {
            scheme: Encoding::Parity,
            two_qubit_reduction,
            n_alpha,
            n_beta,
            frozen_spatial: Vec::new(),
        }
    }

    pub fn with_frozen(mut self, frozen: Vec<usize>) -> Self {
        self.frozen_spatial = frozen;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.two_qubit_reduction && self.scheme != Encoding::Parity {
            return Err(Error::Encoding(
                "two-qubit reduction requires the parity encoding".into(),
            ));
        }
        let f = self.frozen_spatial.len();
        if f > self.n_alpha || f > self.n_beta {
            return Err(Error::Encoding(
                "frozen orbitals must be doubly occupied by the reference determinant".into(),
            ));
        }
        Ok(())
    }

    pub fn active_alpha(&self) -> usize {
        self.n_alpha - self.frozen_spatial.len()
    }

    pub fn active_beta(&self) -> usize {
        self.n_beta - self.frozen_spatial.len()
    }

    pub fn active_electrons(&self) -> usize {
        self.active_alpha() + self.active_beta()
    }

    /// Register width for `n_spin_orbitals` active spin orbitals.
    pub fn n_qubits(&self, n_spin_orbitals: usize) -> usize {
        if self.two_qubit_reduction {
            n_spin_orbitals - 2
        } else {
            n_spin_orbitals
        }
    }

    /// Qubits kept by the two-qubit reduction.
    fn kept_qubits(n_spin_orbitals: usize) -> Vec<usize> {
        let half = n_spin_orbitals / 2;
        (0..n_spin_orbitals)
            .filter(|&q| q != half - 1 && q != n_spin_orbitals - 1)
            .collect()
    }

    fn check_register(&self, n_spin_orbitals: usize) -> Result<()> {
        self.validate()?;
        if n_spin_orbitals == 0 || !n_spin_orbitals.is_multiple_of(2) {
            return Err(Error::Encoding(format!(
                "{n_spin_orbitals} spin orbitals: expected a positive even count"
            )));
        }
        if self.two_qubit_reduction && n_spin_orbitals < 4 {
            return Err(Error::Encoding(
                "two-qubit reduction needs at least 4 spin orbitals".into(),
            ));
        }
        if n_spin_orbitals > crate::pauli::MAX_QUBITS {
            return Err(Error::Encoding(format!(
                "{n_spin_orbitals} spin orbitals exceed register limit"
            )));
        }
        Ok(())
    }
}

/// Qubit image of a single ladder operator on the full (unreduced) register.
fn ladder_image(scheme: Encoding, n: usize, mode: usize, dagger: bool) -> PauliSum {
    let below: u64 = (1u64 << mode) - 1;
    let bit = 1u64 << mode;
    let above: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 } & !(below | bit);
    let half = Complex64::new(0.5, 0.0);
    let im_half = Complex64::new(0.0, if dagger { -0.5 } else { 0.5 });
    let (xs, ys) = match scheme {
        // (X ∓ iY)_j Z_{<j}
        Encoding::JordanWigner => (
            PauliString::from_masks(n, bit, below),
            PauliString::from_masks(n, bit, below | bit),
        ),
        // (Z_{j-1} X_j ∓ i Y_j) X_{>j}
        Encoding::Parity => {
            let prev = if mode > 0 { 1u64 << (mode - 1) } else { 0 };
            (
                PauliString::from_masks(n, bit | above, prev),
                PauliString::from_masks(n, bit | above, bit),
            )
        }
    };
    PauliSum::from_terms(n, [(xs.unwrap(), half), (ys.unwrap(), im_half)]).unwrap()
}

/// Replace the two parity qubits (`n/2 - 1`, `n - 1`) by their eigenvalues.
fn taper(sum: &PauliSum, spec: &EncodingSpec) -> Result<PauliSum> {
    let n = sum.n_qubits();
    let alpha_q = n / 2 - 1;
    let total_q = n - 1;
    let alpha_sign = if spec.active_alpha().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let total_sign = if spec.active_electrons().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let keep = EncodingSpec::kept_qubits(n);
    let mut out = PauliSum::zero(n - 2);
    for (p, c) in sum.iter() {
        if (p.x_mask() >> alpha_q) & 1 == 1 || (p.x_mask() >> total_q) & 1 == 1 {
            return Err(Error::Encoding(format!(
                "term {p} does not conserve the spin-sector parities removed by the reduction"
            )));
        }
        let mut sign = 1.0;
        if (p.z_mask() >> alpha_q) & 1 == 1 {
            sign *= alpha_sign;
        }
        if (p.z_mask() >> total_q) & 1 == 1 {
            sign *= total_sign;
        }
        out.add_term(p.select_qubits(&keep), c * sign);
    }
    out.prune();
    Ok(out)
}

/// Caches the ladder-operator images of one register.
pub struct FermionMapper {
    spec: EncodingSpec,
    n_spin_orbitals: usize,
    creators: Vec<PauliSum>,
    annihilators: Vec<PauliSum>,
}

impl FermionMapper {
    pub fn new(spec: &EncodingSpec, n_spin_orbitals: usize) -> Result<Self> {
        spec.check_register(n_spin_orbitals)?;
        let n = n_spin_orbitals;
        Ok(FermionMapper {
            spec: spec.clone(),
            n_spin_orbitals: n,
            creators: (0..n).map(|j| ladder_image(spec.scheme, n, j, true)).collect(),
            annihilators: (0..n).map(|j| ladder_image(spec.scheme, n, j, false)).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.spec.n_qubits(self.n_spin_orbitals)
    }

    /// Product on the unreduced register.
    fn product(&self, ops: &[(usize, bool)]) -> Result<PauliSum> {
        let mut acc = PauliSum::identity(self.n_spin_orbitals);
        for &(mode, dagger) in ops {
            if mode >= self.n_spin_orbitals {
                return Err(Error::Encoding(format!(
                    "orbital index {mode} out of range ({} spin orbitals)",
                    self.n_spin_orbitals
                )));
            }
            let op = if dagger {
                &self.creators[mode]
            } else {
                &self.annihilators[mode]
            };
            acc = acc.compose(op)?;
        }
        Ok(acc)
    }

    fn finish(&self, sum: &PauliSum) -> Result<PauliSum> {
        if self.spec.two_qubit_reduction {
            taper(sum, &self.spec)
        } else {
            Ok(sum.clone())
        }
    }

    /// Qubit image of `ops[0] · ops[1] · …`, each `(mode, is_creator)`.
    pub fn map(&self, ops: &[(usize, bool)]) -> Result<PauliSum> {
        if ops.is_empty() {
            return Err(Error::Encoding("empty operator product".into()));
        }
        self.finish(&self.product(ops)?)
    }

    /// Weighted sum of products, tapered once at the end.
    pub fn map_sum<'a>(
        &self,
        terms: impl IntoIterator<Item = (Complex64, &'a [(usize, bool)])>,
    ) -> Result<PauliSum> {
        let mut acc = PauliSum::zero(self.n_spin_orbitals);
        for (coeff, ops) in terms {
            let img = self.product(ops)?;
            for (p, c) in img.iter() {
                acc.add_term(*p, c * coeff);
            }
        }
        acc.prune();
        self.finish(&acc)
    }
}

/// Qubit image of a product of ladder operators, `(mode, is_creator)` in
/// left-to-right order.
pub fn map_fermion_term(
    ops: &[(usize, bool)],
    spec: &EncodingSpec,
    n_spin_orbitals: usize,
) -> Result<PauliSum> {
    FermionMapper::new(spec, n_spin_orbitals)?.map(ops)
}

/// Qubit Hamiltonian of `ints` after freezing `spec.frozen_spatial`.
pub fn build_hamiltonian(ints: &FermionIntegrals, spec: &EncodingSpec) -> Result<PauliSum> {
    spec.validate()?;
    if spec.n_alpha + spec.n_beta != ints.n_electrons() {
        return Err(Error::Encoding(format!(
            "encoding expects {} electrons, integrals describe {}",
            spec.n_alpha + spec.n_beta,
            ints.n_electrons()
        )));
    }
    let active = if spec.frozen_spatial.is_empty() {
        ints.clone()
    } else {
        ints.freeze(&spec.frozen_spatial)?
    };
    let m = active.n_spatial();
    let n_so = 2 * m;
    let mapper = FermionMapper::new(spec, n_so)?;

    let mut acc = PauliSum::constant(n_so, Complex64::new(active.core_energy(), 0.0));
    let mut add = |coeff: Complex64, ops: &[(usize, bool)]| -> Result<()> {
        if coeff.norm() == 0.0 {
            return Ok(());
        }
        for (p, c) in mapper.product(ops)?.iter() {
            acc.add_term(*p, c * coeff);
        }
        Ok(())
    };
    for sigma in 0..2 {
        let off = sigma * m;
        for p in 0..m {
            for q in 0..m {
                add(active.h(p, q), &[(p + off, true), (q + off, false)])?;
            }
        }
    }
    for sigma in 0..2 {
        for tau in 0..2 {
            let (os, ot) = (sigma * m, tau * m);
            for p in 0..m {
                for r in 0..m {
                    if sigma == tau && p == r {
                        continue;
                    }
                    for q in 0..m {
                        for s in 0..m {
                            if sigma == tau && q == s {
                                continue;
                            }
                            add(
                                0.5 * active.v(p, q, r, s),
                                &[(p + os, true), (r + ot, true), (s + ot, false), (q + os, false)],
                            )?;
                        }
                    }
                }
            }
        }
    }
    acc.prune();
    mapper.finish(&acc)
}

/// Qubit image of `Σ_i a†_i a_i` over the active spin orbitals.
pub fn build_number_operator(spec: &EncodingSpec, n_spin_orbitals: usize) -> Result<PauliSum> {
    let mapper = FermionMapper::new(spec, n_spin_orbitals)?;
    let ops: Vec<[(usize, bool); 2]> = (0..n_spin_orbitals).map(|i| [(i, true), (i, false)]).collect();
    mapper.map_sum(ops.iter().map(|o| (Complex64::new(1.0, 0.0), &o[..])))
}

/// Occupation of active spin orbitals, α block then β block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupationVector {
    bits: Vec<bool>,
}

impl OccupationVector {
    pub fn new(bits: Vec<bool>) -> Self {
        OccupationVector { bits }
    }

    /// Lowest `n_alpha` α and `n_beta` β orbitals occupied.
    pub fn hartree_fock(n_spatial: usize, n_alpha: usize, n_beta: usize) -> Result<Self> {
        if n_alpha > n_spatial || n_beta > n_spatial {
            return Err(Error::Encoding(format!(
                "{n_alpha}α/{n_beta}β electrons do not fit in {n_spatial} orbitals"
            )));
        }
        let mut bits = vec![false; 2 * n_spatial];
        bits[..n_alpha].iter_mut().for_each(|b| *b = true);
        bits[n_spatial..n_spatial + n_beta]
            .iter_mut()
            .for_each(|b| *b = true);
        Ok(OccupationVector { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn population(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn alpha_count(&self) -> usize {
        self.bits[..self.bits.len() / 2].iter().filter(|&&b| b).count()
    }

    pub fn beta_count(&self) -> usize {
        self.population() - self.alpha_count()
    }

    pub fn occupied(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i]).collect()
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for OccupationVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Config(format!(
                    "occupation {s:?} must contain only 0 and 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(OccupationVector::new)
    }
}

/// Computational-basis index of the encoded determinant.
pub fn reference_state(occ: &OccupationVector, spec: &EncodingSpec) -> Result<usize> {
    let n = occ.len();
    spec.check_register(n)?;
    if occ.alpha_count() != spec.active_alpha() || occ.beta_count() != spec.active_beta() {
        return Err(Error::Encoding(format!(
            "occupation {occ} has {}α/{}β electrons, encoding expects {}α/{}β",
            occ.alpha_count(),
            occ.beta_count(),
            spec.active_alpha(),
            spec.active_beta()
        )));
    }
    let qubits: Vec<bool> = match spec.scheme {
        Encoding::JordanWigner => occ.bits().to_vec(),
        Encoding::Parity => occ
            .bits()
            .iter()
            .scan(false, |parity, &b| {
                *parity ^= b;
                Some(*parity)
            })
            .collect(),
    };
    let qubits: Vec<bool> = if spec.two_qubit_reduction {
        EncodingSpec::kept_qubits(n)
            .into_iter()
            .map(|q| qubits[q])
            .collect()
    } else {
        qubits
    };
    Ok(qubits
        .iter()
        .enumerate()
        .fold(0usize, |acc, (q, &b)| acc | ((b as usize) << q)))
}

/// Render a basis index as a qubit bitstring, qubit 0 first.
pub fn basis_bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}
