//! Occupation-number configurations, excitation operators and target-state specs.
//!
//! A configuration is a fixed-width bit string, one bit per spin orbital. The
//! leftmost character of the textual form is qubit 0. Internally the bits are
//! packed into a `u64` so that the packed value is exactly the index of the
//! basis state in a statevector (qubit 0 is the most significant bit).
//!
//! Spin orbitals alternate: qubit `2k` is the spin-up partner of orbital `k`
//! and qubit `2k + 1` the spin-down partner.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest register a packed configuration can describe.
pub const MAX_QUBITS: usize = 64;

/// Coefficients below this magnitude are dropped before synthesis.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Allowed deviation of the squared norm of a state spec from one.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OnConfig {
    bits: u64,
    len: usize,
}

impl OnConfig {
    pub fn from_bits(bits: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_QUBITS {
            return Err(Error::TooManyQubits(len, MAX_QUBITS));
        }
        if len < 64 && bits >> len != 0 {
            return Err(Error::BadBitString(format!(
                "{bits:#b} does not fit in {len} bits"
            )));
        }
        Ok(Self { bits, len })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_bits(0, len)
    }

    /// Configuration with the given qubits occupied.
    pub fn from_occupied(len: usize, occupied: &[usize]) -> Result<Self> {
        let mut c = Self::zeros(len)?;
        for &q in occupied {
            if q >= len {
                return Err(Error::BadBitString(format!(
                    "qubit {q} outside register of {len}"
                )));
            }
            c = c.with(q, true);
        }
        Ok(c)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed value; equals the statevector index of this basis state.
    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// Bit mask of qubit `q` inside the packed value.
    #[inline]
    pub fn mask(len: usize, q: usize) -> u64 {
        1u64 << (len - 1 - q)
    }

    #[inline]
    pub fn get(&self, q: usize) -> bool {
        self.bits & Self::mask(self.len, q) != 0
    }

    #[must_use]
    pub fn with(&self, q: usize, value: bool) -> Self {
        let m = Self::mask(self.len, q);
        let bits = if value { self.bits | m } else { self.bits & !m };
        Self {
            bits,
            len: self.len,
        }
    }

    #[must_use]
    pub fn flipped(&self, q: usize) -> Self {
        Self {
            bits: self.bits ^ Self::mask(self.len, q),
            len: self.len,
        }
    }

    #[must_use]
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let (a, b) = (self.get(i), self.get(j));
        self.with(i, b).with(j, a)
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn occupied(&self) -> Vec<usize> {
        (0..self.len).filter(|&q| self.get(q)).collect()
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch(self.len, other.len));
        }
        Ok(())
    }
}

impl fmt::Display for OnConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len {
            f.write_str(if self.get(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for OnConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}>")
    }
}

impl serde::Serialize for OnConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for OnConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for OnConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.len() > MAX_QUBITS {
            return Err(Error::BadBitString(s.chars().take(80).collect()));
        }
        let mut bits = 0u64;
        for ch in s.chars() {
            bits <<= 1;
            match ch {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(Error::BadBitString(s.chars().take(80).collect())),
            }
        }
        Self::from_bits(bits, s.len())
    }
}

/// Hamming distance between two configurations.
pub fn hamming(x: &OnConfig, y: &OnConfig) -> Result<usize> {
    x.check_len(y)?;
    Ok((x.bits ^ y.bits).count_ones() as usize)
}

/// Ascending qubit indices on which `x` and `y` differ.
pub fn xor_support(x: &OnConfig, y: &OnConfig) -> Result<Vec<usize>> {
    x.check_len(y)?;
    let diff = x.bits ^ y.bits;
    Ok((0..x.len)
        .filter(|&q| diff & OnConfig::mask(x.len, q) != 0)
        .collect())
}

/// Hamming distance restricted to a subset of qubits.
pub(crate) fn restricted_distance(x: &OnConfig, y: &OnConfig, qubits: &[usize]) -> usize {
    qubits.iter().filter(|&&q| x.get(q) != y.get(q)).count()
}

/// Particle-conserving single or double excitation `a†_c.. a_a..`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExcitationOp {
    annihilate: Vec<usize>,
    create: Vec<usize>,
}

impl ExcitationOp {
    pub fn new(annihilate: Vec<usize>, create: Vec<usize>) -> Result<Self> {
        if annihilate.len() != create.len() || !(1..=2).contains(&annihilate.len()) {
            return Err(Error::BadExcitation(format!(
                "expected a single or double, got {} annihilations and {} creations",
                annihilate.len(),
                create.len()
            )));
        }
        let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&annihilate) || !increasing(&create) {
            return Err(Error::BadExcitation(
                "index lists must be strictly increasing".into(),
            ));
        }
        if annihilate.iter().any(|a| create.contains(a)) {
            return Err(Error::BadExcitation("annihilate and create overlap".into()));
        }
        Ok(Self { annihilate, create })
    }

    pub fn annihilate(&self) -> &[usize] {
        &self.annihilate
    }

    pub fn create(&self) -> &[usize] {
        &self.create
    }

    pub fn rank(&self) -> usize {
        self.annihilate.len()
    }

    /// Applies the operator to a basis configuration.
    ///
    /// Annihilations act first, then creations, each list in ascending order.
    /// Each ladder operator on mode `p` contributes `(-1)^(occupied modes < p)`.
    /// Returns `None` when the result vanishes.
    pub fn apply(&self, x: &OnConfig) -> Result<Option<(OnConfig, i8)>> {
        if let Some(&q) = self
            .annihilate
            .iter()
            .chain(&self.create)
            .find(|&&q| q >= x.len())
        {
            return Err(Error::BadExcitation(format!(
                "mode {q} outside register of {}",
                x.len()
            )));
        }
        let mut cur = *x;
        let mut sign = 1i8;
        let parity_below = |c: &OnConfig, p: usize| (0..p).filter(|&q| c.get(q)).count() % 2;
        for &a in &self.annihilate {
            if !cur.get(a) {
                return Ok(None);
            }
            if parity_below(&cur, a) == 1 {
                sign = -sign;
            }
            cur = cur.with(a, false);
        }
        for &c in &self.create {
            if cur.get(c) {
                return Ok(None);
            }
            if parity_below(&cur, c) == 1 {
                sign = -sign;
            }
            cur = cur.with(c, true);
        }
        Ok(Some((cur, sign)))
    }
}

impl fmt::Display for ExcitationOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{} -> {}", join(&self.annihilate), join(&self.create))
    }
}

pub fn apply_excitation(op: &ExcitationOp, x: &OnConfig) -> Result<Option<(OnConfig, i8)>> {
    op.apply(x)
}

/// Closed-shell reference with the lowest `n_elec` spin orbitals filled.
pub fn hartree_fock(n_orb: usize, n_elec: usize) -> Result<OnConfig> {
    check_closed_shell(n_orb, n_elec)?;
    let occ: Vec<usize> = (0..n_elec).collect();
    OnConfig::from_occupied(2 * n_orb, &occ)
}

fn check_closed_shell(n_orb: usize, n_elec: usize) -> Result<()> {
    if n_elec % 2 == 1 {
        return Err(Error::OddElectronCount(n_elec));
    }
    if n_elec > 2 * n_orb {
        return Err(Error::TooManyElectrons(n_elec, n_orb));
    }
    if n_orb == 0 || 2 * n_orb > MAX_QUBITS {
        return Err(Error::TooManyQubits(2 * n_orb, MAX_QUBITS));
    }
    Ok(())
}

/// All spin-conserving single and double excitations of the closed-shell
/// reference: singles first, then doubles, each in lexicographic index order.
pub fn cisd_excitations(n_orb: usize, n_elec: usize) -> Result<Vec<ExcitationOp>> {
    check_closed_shell(n_orb, n_elec)?;
    let nq = 2 * n_orb;
    let occ: Vec<usize> = (0..n_elec).collect();
    let virt: Vec<usize> = (n_elec..nq).collect();
    let spin = |q: usize| q % 2;
    let mut ops = Vec::new();
    for &i in &occ {
        for &a in &virt {
            if spin(i) == spin(a) {
                ops.push(ExcitationOp::new(vec![i], vec![a])?);
            }
        }
    }
    for (ii, &i) in occ.iter().enumerate() {
        for &j in &occ[ii + 1..] {
            for (aa, &a) in virt.iter().enumerate() {
                for &b in &virt[aa + 1..] {
                    let mut up_out = [spin(i), spin(j)];
                    let mut up_in = [spin(a), spin(b)];
                    up_out.sort_unstable();
                    up_in.sort_unstable();
                    if up_out == up_in {
                        ops.push(ExcitationOp::new(vec![i, j], vec![a, b])?);
                    }
                }
            }
        }
    }
    Ok(ops)
}

/// The reference followed by every configuration reachable by a
/// spin-conserving single or double excitation.
pub fn generate_cisd_configs(n_orb: usize, n_elec: usize) -> Result<Vec<OnConfig>> {
    let hf = hartree_fock(n_orb, n_elec)?;
    let mut out = vec![hf];
    for op in cisd_excitations(n_orb, n_elec)? {
        if let Some((c, _)) = op.apply(&hf)? {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Validated target state `sum_d c_d |x_d>` with real coefficients.
///
/// Entry order is preserved: for Givens synthesis the first entry is the
/// reference configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    n_qubits: usize,
    entries: Vec<(f64, OnConfig)>,
}

impl StateSpec {
    /// Validates and canonicalizes: checks the norm, drops coefficients below
    /// [`PRUNE_THRESHOLD`] and renormalizes the rest.
    pub fn new(n_qubits: usize, entries: Vec<(f64, OnConfig)>) -> Result<Self> {
        Self::build(n_qubits, entries, false)
    }

    /// Like [`StateSpec::new`] but rescales the coefficients to unit norm
    /// first. Meant for printed vectors whose digits were rounded.
    pub fn normalized(n_qubits: usize, entries: Vec<(f64, OnConfig)>) -> Result<Self> {
        Self::build(n_qubits, entries, true)
    }

    fn build(n_qubits: usize, mut entries: Vec<(f64, OnConfig)>, rescale: bool) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidState("empty state".into()));
        }
        for (c, x) in &entries {
            if x.len() != n_qubits {
                return Err(Error::LengthMismatch(n_qubits, x.len()));
            }
            if !c.is_finite() {
                return Err(Error::InvalidState(format!(
                    "non-finite coefficient for {x}"
                )));
            }
        }
        let w = entries[0].1.weight();
        if let Some((_, x)) = entries.iter().find(|(_, x)| x.weight() != w) {
            return Err(Error::InvalidState(format!(
                "mixed Hamming weights: {} has weight {}, expected {w}",
                x,
                x.weight()
            )));
        }
        for (i, (_, x)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(_, y)| y == x) {
                return Err(Error::InvalidState(format!("duplicate configuration {x}")));
            }
        }
        let norm2: f64 = entries.iter().map(|(c, _)| c * c).sum();
        if norm2 == 0.0 {
            return Err(Error::InvalidState("zero norm".into()));
        }
        if rescale {
            let s = norm2.sqrt();
            entries.iter_mut().for_each(|(c, _)| *c /= s);
        } else if (norm2 - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "squared norm {norm2} differs from 1"
            )));
        }
        entries.retain(|(c, _)| c.abs() >= PRUNE_THRESHOLD);
        if entries.is_empty() {
            return Err(Error::InvalidState("zero norm".into()));
        }
        // Skipping rescales within rounding keeps construction idempotent.
        let s: f64 = entries.iter().map(|(c, _)| c * c).sum::<f64>().sqrt();
        if (s - 1.0).abs() > 1e-15 {
            entries.iter_mut().for_each(|(c, _)| *c /= s);
        }
        Ok(Self { n_qubits, entries })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn entries(&self) -> &[(f64, OnConfig)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn configs(&self) -> Vec<OnConfig> {
        self.entries.iter().map(|e| e.1).collect()
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn weight(&self) -> usize {
        self.entries[0].1.weight()
    }

    pub fn coefficient_of(&self, x: &OnConfig) -> f64 {
        self.entries
            .iter()
            .find(|(_, y)| y == x)
            .map_or(0.0, |(c, _)| *c)
    }

    /// Same state with the largest-magnitude entry moved to the front
    /// (stable for the rest).
    #[must_use]
    pub fn reference_first(&self) -> Self {
        let mut best = 0;
        for (i, (c, _)) in self.entries.iter().enumerate() {
            if c.abs() > self.entries[best].0.abs() {
                best = i;
            }
        }
        let mut entries = self.entries.clone();
        let e = entries.remove(best);
        entries.insert(0, e);
        Self {
            n_qubits: self.n_qubits,
            entries,
        }
    }

    /// Same configurations in the given order with new coefficients.
    pub fn with_coefficients(&self, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != self.entries.len() {
            return Err(Error::LengthMismatch(self.entries.len(), coeffs.len()));
        }
        Self::new(
            self.n_qubits,
            coeffs.iter().copied().zip(self.configs()).collect(),
        )
    }
}

pub fn validate_spec(n_qubits: usize, entries: Vec<(f64, OnConfig)>) -> Result<StateSpec> {
    StateSpec::new(n_qubits, entries)
}
