use num_complex::Complex64;

use super::StateVector;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

pub const MAX_MOMENT_ORDER: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const TAYLOR_TOL: f64 = 1e-17;
const MAX_TAYLOR_TERMS: usize = 80;

fn check(psi: &StateVector, h: &PauliSum) -> Result<()> {
    if psi.n_qubits() != h.n_qubits() {
        Err(Error::LengthMismatch(psi.n_qubits(), h.n_qubits()))
    } else {
        Ok(())
    }
}

fn apply(h: &PauliSum, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; v.len()];
    h.apply_into(v, &mut out);
    out
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `H|ψ>` (unnormalized).
pub fn apply_hamiltonian(psi: &StateVector, h: &PauliSum) -> Result<Vec<Complex64>> {
    check(psi, h)?;
    Ok(apply(h, psi.amplitudes()))
}

pub fn expectation(psi: &StateVector, h: &PauliSum) -> Result<f64> {
    let hv = apply_hamiltonian(psi, h)?;
    Ok(dot(psi.amplitudes(), &hv).re)
}

/// `(<H>, <H^2>, …, <H^m_max>)` by repeated application of `H`.
pub fn moments(psi: &StateVector, h: &PauliSum, m_max: usize) -> Result<Vec<f64>> {
    check(psi, h)?;
    if m_max > MAX_MOMENT_ORDER {
        return Err(Error::InvalidState(format!(
            "moment order {m_max} exceeds {MAX_MOMENT_ORDER}"
        )));
    }
    let half = m_max.div_ceil(2);
    let mut phi = vec![psi.amplitudes().to_vec()];
    for k in 1..=half {
        let next = apply(h, &phi[k - 1]);
        phi.push(next);
    }
    Ok((1..=m_max)
        .map(|m| dot(&phi[m.div_ceil(2)], &phi[m / 2]).re)
        .collect())
}

/// `exp(-i t H)|ψ>` by a Taylor series on slices with `|dt| Σ|h| <= 1`.
pub fn evolve(psi: &StateVector, h: &PauliSum, t: f64) -> Result<StateVector> {
    check(psi, h)?;
    if !t.is_finite() {
        return Err(Error::InvalidState("non-finite evolution time".into()));
    }
    let norm = h.one_norm();
    let slices = (t.abs() * norm).ceil().max(1.0) as usize;
    let dt = t / slices as f64;
    let mut v = psi.amplitudes().to_vec();
    let factor = Complex64::new(0.0, -dt);
    for _ in 0..slices {
        let mut term = v.clone();
        let mut sum = v.clone();
        let mut converged = false;
        for k in 1..=MAX_TAYLOR_TERMS {
            let mut next = apply(h, &term);
            let f = factor / k as f64;
            next.iter_mut().for_each(|a| *a *= f);
            let size = next.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            sum.iter_mut().zip(&next).for_each(|(s, a)| *s += a);
            term = next;
            if size < TAYLOR_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Tolerance(format!(
                "Taylor series for exp(-iHt) did not converge in {MAX_TAYLOR_TERMS} terms"
            )));
        }
        v = sum;
    }
    StateVector::normalized(psi.n_qubits(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliWord;

    fn z() -> PauliSum {
        PauliSum::from_terms(1, [(1.0, "Z".parse::<PauliWord>().unwrap())]).unwrap()
    }

    fn state(a: f64, b: f64) -> StateVector {
        StateVector::normalized(1, vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)]).unwrap()
    }

    #[test]
    fn plus_state_moments() {
        let m = moments(&state(1.0, 1.0), &z(), 4).unwrap();
        for (x, y) in m.iter().zip([0.0, 1.0, 0.0, 1.0]) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn two_point_moments() {
        // probabilities 0.9 / 0.1 on eigenvalues +1 / -1
        let m = moments(&state(0.9f64.sqrt(), 0.1f64.sqrt()), &z(), 4).unwrap();
        for (x, y) in m.iter().zip([0.8, 1.0, 0.8, 1.0]) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!((expectation(&state(1.0, 1.0), &z()).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn eigenstate_evolution_is_a_phase() {
        let psi = state(1.0, 0.0);
        let out = evolve(&psi, &z(), 0.7).unwrap();
        let expect = Complex64::from_polar(1.0, -0.7);
        assert!((out.amplitudes()[0] - expect).norm() < 1e-14);
        assert_eq!(evolve(&psi, &z(), 0.0).unwrap(), psi);
    }
}
