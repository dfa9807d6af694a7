use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliWord};
use crate::sim::{evolve, expectation, spectral_range, StateVector};

/// Time series `Z_n = <ψ| exp(-i n τ H') |ψ>` for the centered `H' = H - shift`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QcelsSeries {
    pub tau: f64,
    /// `Tr(H) / 2^n`, removed before evolving and added back to estimates.
    pub shift: f64,
    pub z: Vec<Complex64>,
}

impl QcelsSeries {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Total evolution time `(N - 1) τ`.
    pub fn t_max(&self) -> f64 {
        self.tau * self.z.len().saturating_sub(1) as f64
    }

    /// `|Σ_n Z_n e^{i n τ E}|²` at an energy of the centered Hamiltonian.
    pub fn objective(&self, e: f64) -> f64 {
        let step = Complex64::from_polar(1.0, self.tau * e);
        let mut phase = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for z in &self.z {
            acc += z * phase;
            phase *= step;
        }
        acc.norm_sqr()
    }

    /// `d/dE` of [`QcelsSeries::objective`].
    pub fn objective_slope(&self, e: f64) -> f64 {
        let step = Complex64::from_polar(1.0, self.tau * e);
        let mut phase = Complex64::new(1.0, 0.0);
        let (mut s, mut ds) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (n, z) in self.z.iter().enumerate() {
            s += z * phase;
            ds += z * phase * Complex64::new(0.0, n as f64 * self.tau);
            phase *= step;
        }
        2.0 * (s.conj() * ds).re
    }
}

/// Largest admissible time step `2π / (E_max - E_min)`; infinite for a flat spectrum.
pub fn tau_bound(h: &PauliSum) -> Result<f64> {
    let (lo, hi) = spectral_range(h)?;
    let width = hi - lo;
    Ok(if width > 0.0 {
        2.0 * PI / width
    } else {
        f64::INFINITY
    })
}

fn checked_tau(h: &PauliSum, tau: f64, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidState("empty time series".into()));
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidState(format!(
            "time step {tau} must be positive"
        )));
    }
    let bound = tau_bound(h)?;
    if tau >= bound {
        return Err(Error::TimeStepTooLarge { tau, bound });
    }
    Ok(())
}

/// Evolves `ψ` under the centered Hamiltonian and records the overlaps.
pub fn qcels_series(psi: &StateVector, h: &PauliSum, tau: f64, n: usize) -> Result<QcelsSeries> {
    checked_tau(h, tau, n)?;
    let (hc, shift) = h.centered();
    let mut z = Vec::with_capacity(n);
    let mut phi = psi.clone();
    for k in 0..n {
        if k > 0 {
            phi = evolve(&phi, &hc, tau)?;
        }
        z.push(psi.inner(&phi)?);
    }
    Ok(QcelsSeries { tau, shift, z })
}

/// The same series read from the ancilla of the Hadamard-test state
/// `(|0>|ψ> + |1> U(τ)^n |ψ>) / √2` through `<X⊗I>` and `<Y⊗I>`.
pub fn hadamard_test_series(
    psi: &StateVector,
    h: &PauliSum,
    tau: f64,
    n: usize,
) -> Result<QcelsSeries> {
    checked_tau(h, tau, n)?;
    let (hc, shift) = h.centered();
    let nq = psi.n_qubits();
    let word =
        |letter: &str| -> Result<PauliWord> { format!("{letter}{}", "I".repeat(nq)).parse() };
    let xi = PauliSum::from_terms(nq + 1, [(1.0, word("X")?)])?;
    let yi = PauliSum::from_terms(nq + 1, [(1.0, word("Y")?)])?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut z = Vec::with_capacity(n);
    let mut phi = psi.clone();
    for k in 0..n {
        if k > 0 {
            phi = evolve(&phi, &hc, tau)?;
        }
        let amps: Vec<Complex64> = psi
            .amplitudes()
            .iter()
            .chain(phi.amplitudes())
            .map(|a| a * s)
            .collect();
        let big = StateVector::from_amplitudes(nq + 1, amps)?;
        z.push(Complex64::new(
            expectation(&big, &xi)?,
            expectation(&big, &yi)?,
        ));
    }
    Ok(QcelsSeries { tau, shift, z })
}

/// Energy maximizing the QCELS objective over `(-π/τ, π/τ)`, by a `10 N`
/// point grid scan refined with golden-section search.
///
/// The objective is flat at its peak, so comparing values cannot locate the
/// peak below about `1e-8`; a final bisection on the sign of the slope does.
pub fn qcels_estimate(series: &QcelsSeries) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::InvalidState("empty time series".into()));
    }
    let half = PI / series.tau;
    let points = 10 * series.len();
    let step = 2.0 * half / points as f64;
    let grid = |k: usize| -half + (k as f64 + 0.5) * step;
    let best = (0..points)
        .max_by(|&a, &b| {
            series
                .objective(grid(a))
                .total_cmp(&series.objective(grid(b)))
        })
        .expect("nonempty grid");
    let (mut a, mut b) = (grid(best) - step, grid(best) + step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (series.objective(c), series.objective(d));
    while b - a > 1e-10 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = series.objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = series.objective(d);
        }
    }
    let mid = (a + b) / 2.0;
    let (mut lo, mut hi) = (mid - 1e-6, mid + 1e-6);
    if series.objective_slope(lo) > 0.0 && series.objective_slope(hi) < 0.0 {
        for _ in 0..64 {
            let m = (lo + hi) / 2.0;
            if series.objective_slope(m) > 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        return Ok((lo + hi) / 2.0 + series.shift);
    }
    Ok(mid + series.shift)
}
