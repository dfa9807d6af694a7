use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::sim::{expectation, prepare, StateVector};

#[derive(Clone, Debug, PartialEq)]
pub struct VqeOptions {
    /// Random restarts in addition to the caller's starting point.
    pub restarts: usize,
    pub max_iterations: usize,
    /// Convergence threshold on the gradient ∞-norm.
    pub gradient_tol: f64,
    /// Central finite-difference step.
    pub fd_step: f64,
    pub seed: u64,
}

impl Default for VqeOptions {
    fn default() -> Self {
        Self {
            restarts: 3,
            max_iterations: 500,
            gradient_tol: 1e-8,
            fd_step: 1e-6,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VqeResult {
    /// Optimized values in the ansatz's parameter order.
    pub parameters: Vec<f64>,
    pub energy: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    #[serde(skip)]
    pub state: StateVector,
}

struct Objective<'a> {
    ansatz: &'a Circuit,
    h: &'a PauliSum,
    evaluations: usize,
}

impl Objective<'_> {
    fn state(&self, x: &[f64]) -> Result<StateVector> {
        prepare(&self.ansatz.bind_values(x)?)
    }

    fn value(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        expectation(&self.state(x)?, self.h)
    }

    fn gradient(&mut self, x: &[f64], step: f64) -> Result<Vec<f64>> {
        let mut g = Vec::with_capacity(x.len());
        let mut y = x.to_vec();
        for i in 0..x.len() {
            y[i] = x[i] + step;
            let up = self.value(&y)?;
            y[i] = x[i] - step;
            let down = self.value(&y)?;
            y[i] = x[i];
            g.push((up - down) / (2.0 * step));
        }
        Ok(g)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// One BFGS descent with Armijo backtracking. Returns `(x, f, iterations, converged)`.
fn bfgs(
    obj: &mut Objective,
    mut x: Vec<f64>,
    opts: &VqeOptions,
) -> Result<(Vec<f64>, f64, usize, bool)> {
    let k = x.len();
    let identity = |k: usize| -> Vec<Vec<f64>> {
        (0..k)
            .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect()
    };
    let mut hinv = identity(k);
    let mut f = obj.value(&x)?;
    let mut g = obj.gradient(&x, opts.fd_step)?;
    for it in 0..opts.max_iterations {
        if inf_norm(&g) < opts.gradient_tol {
            return Ok((x, f, it, true));
        }
        let mut p: Vec<f64> = hinv.iter().map(|row| -dot(row, &g)).collect();
        if dot(&p, &g) >= 0.0 {
            hinv = identity(k);
            p = g.iter().map(|v| -v).collect();
        }
        let slope = dot(&p, &g);
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + alpha * b).collect();
            let ft = obj.value(&trial)?;
            if ft <= f + 1e-4 * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha /= 2.0;
        }
        let Some((xn, fnew)) = accepted else {
            // No descent left at finite-difference resolution.
            return Ok((x, f, it, inf_norm(&g) < opts.gradient_tol.sqrt()));
        };
        let gn = obj.gradient(&xn, opts.fd_step)?;
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 {
            let hy: Vec<f64> = hinv.iter().map(|row| dot(row, &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..k {
                for j in 0..k {
                    hinv[i][j] +=
                        (sy + yhy) * s[i] * s[j] / (sy * sy) - (hy[i] * s[j] + s[i] * hy[j]) / sy;
                }
            }
        }
        x = xn;
        f = fnew;
        g = gn;
    }
    Ok((x, f, opts.max_iterations, inf_norm(&g) < opts.gradient_tol))
}

/// Minimizes `<ψ(θ)|H|ψ(θ)>` over the ansatz parameters from `theta0` (when
/// given) and from `opts.restarts` random starts in `[-π, π)`, keeping the best.
pub fn vqe_minimize(
    ansatz: &Circuit,
    h: &PauliSum,
    theta0: Option<&[f64]>,
    opts: &VqeOptions,
) -> Result<VqeResult> {
    if ansatz.n_qubits() != h.n_qubits() {
        return Err(Error::LengthMismatch(ansatz.n_qubits(), h.n_qubits()));
    }
    let k = ansatz.parameters().len();
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if let Some(t) = theta0 {
        if t.len() != k {
            return Err(Error::LengthMismatch(k, t.len()));
        }
        starts.push(t.to_vec());
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        starts.push((0..k).map(|_| rng.gen_range(-PI..PI)).collect());
    }
    if starts.is_empty() {
        starts.push(vec![0.0; k]);
    }
    let mut obj = Objective {
        ansatz,
        h,
        evaluations: 0,
    };
    let mut best: Option<(Vec<f64>, f64, usize, bool)> = None;
    let mut total_iterations = 0;
    for x0 in starts {
        let run = bfgs(&mut obj, x0, opts)?;
        total_iterations += run.2;
        if best.as_ref().is_none_or(|b| run.1 < b.1) {
            best = Some(run);
        }
    }
    let (parameters, energy, _, converged) = best.expect("at least one start");
    let state = obj.state(&parameters)?;
    Ok(VqeResult {
        parameters,
        energy,
        iterations: total_iterations,
        evaluations: obj.evaluations,
        converged,
        state,
    })
}
