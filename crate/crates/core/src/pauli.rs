//! Pauli words and real-coefficient Pauli sums.
//!
//! A word is stored in symplectic form `(x, z)` with the same bit layout as
//! basis-state indices (qubit 0 is the most significant bit), and denotes
//! `i^{|x & z|} X^x Z^z`, so a set bit in both masks is a `Y`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::config::MAX_QUBITS;
use crate::error::{Error, Result};

/// Default ceiling on the number of products formed by [`PauliSum::power`].
pub const DEFAULT_TERM_CAP: usize = 5_000_000;

/// Collected coefficients with magnitude below this are dropped.
const ZERO_COEFF: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord {
    n: usize,
    x: u64,
    z: u64,
}

/// Powers of `i`, indexed by exponent mod 4.
pub const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

impl PauliWord {
    pub fn identity(n: usize) -> Self {
        Self { n, x: 0, z: 0 }
    }

    pub fn from_masks(n: usize, x: u64, z: u64) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        let valid = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if (x | z) & !valid != 0 {
            return Err(Error::InvalidState("Pauli mask exceeds register".into()));
        }
        Ok(Self { n, x, z })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn letter(&self, q: usize) -> char {
        let m = 1u64 << (self.n - 1 - q);
        match (self.x & m != 0, self.z & m != 0) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    /// `self · other = i^k · word`; returns `(k mod 4, word)`.
    pub fn multiply(&self, other: &Self) -> Result<(u8, Self)> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> (u8, Self) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let out = Self { n: self.n, x, z };
        let e = self.y_count() as i64
            + other.y_count() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - out.y_count() as i64;
        (e.rem_euclid(4) as u8, out)
    }

    /// Image of basis state `i`: `P|i> = phase · |j>`.
    #[inline]
    pub fn apply_basis(&self, i: u64) -> (Complex64, u64) {
        let sign = ((self.z & i).count_ones() & 1) * 2;
        let e = (self.y_count() + sign) % 4;
        (I_POW[e as usize], i ^ self.x)
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        if n == 0 {
            return Err(Error::InvalidState("empty Pauli word".into()));
        }
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (q, ch) in s.chars().enumerate() {
            let m = 1u64 << (n - 1 - q);
            match ch.to_ascii_uppercase() {
                'I' => {}
                'X' => x |= m,
                'Y' => {
                    x |= m;
                    z |= m;
                }
                'Z' => z |= m,
                _ => return Err(Error::InvalidState(format!("bad Pauli letter {ch:?}"))),
            }
        }
        Ok(Self { n, x, z })
    }
}

/// Real linear combination of Pauli words on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliWord, f64>,
}

impl PauliSum {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (f64, PauliWord)>) -> Result<Self> {
        let mut s = Self::new(n);
        for (c, w) in terms {
            s.add_term(c, w)?;
        }
        s.simplify();
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliWord, f64)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn coefficient(&self, w: &PauliWord) -> f64 {
        self.terms.get(w).copied().unwrap_or(0.0)
    }

    /// Adds `c · w`, summing onto an existing entry.
    pub fn add_term(&mut self, c: f64, w: PauliWord) -> Result<()> {
        if w.n != self.n {
            return Err(Error::LengthMismatch(self.n, w.n));
        }
        if !c.is_finite() {
            return Err(Error::InvalidState("non-finite coefficient".into()));
        }
        *self.terms.entry(w).or_insert(0.0) += c;
        Ok(())
    }

    /// Drops entries whose magnitude fell below the zero threshold.
    pub fn simplify(&mut self) {
        self.terms.retain(|_, c| c.abs() > ZERO_COEFF);
    }

    /// Σ|h_r|, an upper bound on the spectral radius.
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// `Tr(H) / 2^n`.
    pub fn identity_coefficient(&self) -> f64 {
        self.coefficient(&PauliWord::identity(self.n))
    }

    /// The traceless part of the sum and the removed shift.
    pub fn centered(&self) -> (PauliSum, f64) {
        let shift = self.identity_coefficient();
        let mut c = self.clone();
        c.terms.remove(&PauliWord::identity(self.n));
        (c, shift)
    }

    pub fn scaled(&self, k: f64) -> PauliSum {
        let mut s = self.clone();
        s.terms.values_mut().for_each(|c| *c *= k);
        s.simplify();
        s
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        let mut s = self.clone();
        for (w, c) in other.terms() {
            s.add_term(c, *w)?;
        }
        s.simplify();
        Ok(s)
    }

    /// Product of two sums. The result must be Hermitian with real
    /// coefficients; an imaginary residue above `1e-12` relative to the
    /// operands' norms is an error.
    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        let mut acc: BTreeMap<PauliWord, Complex64> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (k, w) = a.mul_unchecked(b);
                *acc.entry(w).or_insert(Complex64::new(0.0, 0.0)) += I_POW[k as usize] * (ca * cb);
            }
        }
        let scale = (self.one_norm() * other.one_norm()).max(1.0);
        let mut out = PauliSum::new(self.n);
        for (w, c) in acc {
            if c.im.abs() > 1e-12 * scale {
                return Err(Error::Tolerance(format!(
                    "product is not Hermitian: imaginary coefficient {:e} on {w}",
                    c.im
                )));
            }
            if c.re.abs() > ZERO_COEFF {
                out.terms.insert(w, c.re);
            }
        }
        Ok(out)
    }

    /// Symbolic `H^m` with like terms collected.
    pub fn power(&self, m: u32, cap: usize) -> Result<PauliSum> {
        if m == 0 {
            return PauliSum::from_terms(self.n, [(1.0, PauliWord::identity(self.n))]);
        }
        let mut acc = self.clone();
        for _ in 1..m {
            let projected = acc.len().saturating_mul(self.len());
            if projected > cap {
                return Err(Error::TermCapExceeded { projected, cap });
            }
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// `out += H · amps` over basis-state amplitudes.
    pub fn apply_into(&self, amps: &[Complex64], out: &mut [Complex64]) {
        for (w, c) in &self.terms {
            for (i, a) in amps.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let (ph, j) = w.apply_basis(i as u64);
                out[j as usize] += ph * a * *c;
            }
        }
    }

    /// `<i| H |j>` for basis states.
    pub fn matrix_element(&self, i: u64, j: u64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (w, c) in &self.terms {
            if i ^ j == w.x {
                let (ph, _) = w.apply_basis(j);
                s += ph * *c;
            }
        }
        s
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, c) in &self.terms {
            writeln!(f, "{c:.17e} {w}")?;
        }
        Ok(())
    }
}

/// Free-function form of [`PauliWord::multiply`], returning the phase as a complex number.
pub fn word_multiply(a: &PauliWord, b: &PauliWord) -> Result<(Complex64, PauliWord)> {
    let (k, w) = a.multiply(b)?;
    Ok((I_POW[k as usize], w))
}

/// Free-function form of [`PauliSum::power`] with the default term cap.
pub fn sum_power(h: &PauliSum, m: u32) -> Result<PauliSum> {
    h.power(m, DEFAULT_TERM_CAP)
}
