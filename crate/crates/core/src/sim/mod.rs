//! Dense statevector simulation.
//!
//! Basis index `i` encodes qubit `q` in bit `n - 1 - q`, so the index of a
//! configuration equals its bit string read as a binary number.

mod dynamics;
mod spectrum;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::matrix::{gate_matrix, CMatrix};
use crate::circuit::{Circuit, Control, Gate};
use crate::config::{OnConfig, StateSpec};
use crate::error::{Error, Result};

pub use dynamics::{apply_hamiltonian, evolve, expectation, moments, MAX_MOMENT_ORDER};
pub use spectrum::{
    exact_spectrum, hamiltonian_matrix, pauli_decompose, sector_configs, spectral_range,
    subspace_diag, Spectrum, MAX_DENSE_QUBITS,
};

/// Largest register simulated densely.
pub const MAX_SIM_QUBITS: usize = 26;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_SIM_QUBITS {
        Err(Error::DimensionOverflow(n, MAX_SIM_QUBITS))
    } else {
        Ok(())
    }
}

impl StateVector {
    /// `|0…0>`.
    pub fn zero(n: usize) -> Result<Self> {
        check_size(n)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn basis(x: &OnConfig) -> Result<Self> {
        let mut s = Self::zero(x.len())?;
        s.amps[0] = ZERO;
        s.amps[x.index()] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Takes ownership of amplitudes, which must have unit norm.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        if amps.len() != 1 << n {
            return Err(Error::LengthMismatch(1 << n, amps.len()));
        }
        let s = Self { n, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("state norm {norm} is not 1")));
        }
        Ok(s)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        if amps.len() != 1 << n {
            return Err(Error::LengthMismatch(1 << n, amps.len()));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite norm".into()));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n, amps })
    }

    /// Target statevector of a state specification.
    pub fn from_spec(spec: &StateSpec) -> Result<Self> {
        let n = spec.n_qubits();
        check_size(n)?;
        let mut amps = vec![ZERO; 1 << n];
        for (c, x) in spec.entries() {
            amps[x.index()] += Complex64::new(*c, 0.0);
        }
        Self::normalized(n, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, x: &OnConfig) -> Complex64 {
        self.amps[x.index()]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        if let Some(q) = g.qubits().find(|&q| q >= self.n) {
            return Err(Error::InvalidGate(format!("qubit {q} outside register")));
        }
        let m = gate_matrix(g)?;
        apply_matrix(&mut self.amps, self.n, &g.targets, &g.controls, &m);
        Ok(())
    }

    /// Total probability on basis states outside `configs`.
    pub fn leakage(&self, configs: &[OnConfig]) -> f64 {
        let mut inside = vec![false; self.amps.len()];
        for x in configs {
            if x.len() == self.n {
                inside[x.index()] = true;
            }
        }
        self.amps
            .iter()
            .zip(&inside)
            .filter(|(_, &i)| !i)
            .map(|(a, _)| a.norm_sqr())
            .sum()
    }

    /// Largest amplitude magnitude outside `configs`.
    pub fn max_outside_amplitude(&self, configs: &[OnConfig]) -> f64 {
        let mut inside = vec![false; self.amps.len()];
        for x in configs {
            if x.len() == self.n {
                inside[x.index()] = true;
            }
        }
        self.amps
            .iter()
            .zip(&inside)
            .filter(|(_, &i)| !i)
            .map(|(a, _)| a.norm())
            .fold(0.0, f64::max)
    }

    /// Probability outside the Hamming-weight sector `w`.
    pub fn weight_leakage(&self, w: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i.count_ones() as usize != w)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Basis states with probability above `threshold`, as `(config, amplitude)`.
    pub fn support(&self, threshold: f64) -> Vec<(OnConfig, Complex64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > threshold)
            .map(|(i, a)| (OnConfig::from_bits(i as u64, self.n).expect("in range"), *a))
            .collect()
    }
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

pub fn run_circuit(c: &Circuit, input: &StateVector) -> Result<StateVector> {
    if c.n_qubits() != input.n {
        return Err(Error::LengthMismatch(c.n_qubits(), input.n));
    }
    if let Some(p) = c.parameters().into_iter().next() {
        return Err(Error::UnboundParameter(p));
    }
    let mut s = input.clone();
    for g in c.gates() {
        s.apply_gate(g)?;
    }
    Ok(s)
}

/// Required fidelity of a preparation circuit to its target.
pub const FIDELITY_TOL: f64 = 1e-9;
/// Largest amplitude tolerated outside the target support.
pub const SUPPORT_TOL: f64 = 1e-10;

/// Outcome of simulating a preparation circuit against its target state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub fidelity: f64,
    /// Probability outside the target configurations.
    pub leakage: f64,
    pub max_outside_amplitude: f64,
    /// Probability outside the target's Hamming-weight sector.
    pub weight_leakage: f64,
    pub passed: bool,
}

/// Checks fidelity, support exactness and weight-sector confinement.
pub fn verify_preparation(c: &Circuit, spec: &StateSpec) -> Result<Verification> {
    if c.n_qubits() != spec.n_qubits() {
        return Err(Error::LengthMismatch(spec.n_qubits(), c.n_qubits()));
    }
    let out = prepare(c)?;
    let target = StateVector::from_spec(spec)?;
    let configs = spec.configs();
    let fidelity = fidelity(&out, &target)?;
    let max_outside_amplitude = out.max_outside_amplitude(&configs);
    let weight_leakage = out.weight_leakage(spec.weight());
    Ok(Verification {
        fidelity,
        leakage: out.leakage(&configs),
        max_outside_amplitude,
        weight_leakage,
        passed: fidelity >= 1.0 - FIDELITY_TOL
            && max_outside_amplitude <= SUPPORT_TOL
            && weight_leakage <= SUPPORT_TOL * SUPPORT_TOL,
    })
}

/// Runs `c` on `|0…0>`.
pub fn prepare(c: &Circuit) -> Result<StateVector> {
    run_circuit(c, &StateVector::zero(c.n_qubits())?)
}

/// Applies a `2^k × 2^k` matrix on `targets` (first target most significant)
/// to every amplitude block whose control bits match.
pub(crate) fn apply_matrix(
    amps: &mut [Complex64],
    n: usize,
    targets: &[usize],
    controls: &[Control],
    m: &CMatrix,
) {
    let k = targets.len();
    let d = 1usize << k;
    let bit = |q: usize| 1usize << (n - 1 - q);
    let tmasks: Vec<usize> = targets.iter().map(|&q| bit(q)).collect();
    let tall = tmasks.iter().fold(0, |a, b| a | b);
    let (cmask, cval) = controls.iter().fold((0, 0), |(m, v), &(q, s)| {
        (m | bit(q), if s { v | bit(q) } else { v })
    });
    let offs: Vec<usize> = (0..d)
        .map(|s| {
            (0..k)
                .filter(|j| (s >> (k - 1 - j)) & 1 == 1)
                .fold(0, |a, j| a | tmasks[j])
        })
        .collect();
    let mat: Vec<Complex64> = (0..d)
        .flat_map(|r| (0..d).map(move |c| (r, c)))
        .map(|(r, c)| m[(r, c)])
        .collect();
    let mut buf = vec![ZERO; d];
    for base in 0..amps.len() {
        if base & tall != 0 || base & cmask != cval {
            continue;
        }
        for s in 0..d {
            buf[s] = amps[base | offs[s]];
        }
        for r in 0..d {
            let row = &mat[r * d..(r + 1) * d];
            amps[base | offs[r]] = row.iter().zip(&buf).map(|(a, b)| a * b).sum();
        }
    }
}
