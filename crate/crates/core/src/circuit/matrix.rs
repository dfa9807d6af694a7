//! Dense matrices for gates and small circuits.
//!
//! Multi-qubit matrices index basis states with the first target as the most
//! significant bit, matching the register convention.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::sim::apply_matrix;

pub type CMatrix = DMatrix<Complex64>;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Largest register for which [`circuit_unitary`] builds a dense matrix.
pub const MAX_UNITARY_QUBITS: usize = 12;

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

pub fn ry(theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    CMatrix::from_row_slice(2, 2, &[real(c), real(-s), real(s), real(c)])
}

pub fn rz(theta: f64) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::from_polar(1.0, -theta / 2.0),
            C0,
            C0,
            Complex64::from_polar(1.0, theta / 2.0),
        ],
    )
}

pub fn rx(theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    let m = Complex64::new(0.0, -s);
    CMatrix::from_row_slice(2, 2, &[real(c), m, m, real(c)])
}

/// `Rz(beta) Rx(alpha) Rz(-beta)`.
pub fn phased_x(alpha: f64, beta: f64) -> CMatrix {
    rz(beta) * rx(alpha) * rz(-beta)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[C0, C1, C1, C0])
}

pub fn cnot() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = C1;
    m[(1, 1)] = C1;
    m[(2, 3)] = C1;
    m[(3, 2)] = C1;
    m
}

pub fn swap() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = C1;
    m[(1, 2)] = C1;
    m[(2, 1)] = C1;
    m[(3, 3)] = C1;
    m
}

/// `exp(-i pi/4 Z⊗Z)`.
pub fn zz_max() -> CMatrix {
    let a = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let b = a.conj();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![a, b, b, a]))
}

/// Rotation between `|10>` and `|01>`: `|10> -> cos|10> + sin|01>`.
pub fn g2(theta: f64) -> CMatrix {
    givens_block(2, 0b10, 0b01, theta)
}

/// Rotation between `|1100>` and `|0011>`: `|1100> -> cos|1100> + sin|0011>`.
pub fn g4(theta: f64) -> CMatrix {
    givens_block(4, 0b1100, 0b0011, theta)
}

fn givens_block(k: usize, hi: usize, lo: usize, theta: f64) -> CMatrix {
    let (s, c) = theta.sin_cos();
    let mut m = CMatrix::identity(1 << k, 1 << k);
    m[(hi, hi)] = real(c);
    m[(lo, lo)] = real(c);
    m[(lo, hi)] = real(s);
    m[(hi, lo)] = real(-s);
    m
}

/// Matrix of the gate restricted to its targets (controls ignored).
pub fn gate_matrix(g: &Gate) -> Result<CMatrix> {
    let a = |i: usize| {
        g.angle(i)
            .ok_or_else(|| Error::UnboundParameter(g.angles[i].param_name().unwrap_or("").into()))
    };
    Ok(match g.kind {
        GateKind::X => pauli_x(),
        GateKind::Ry => ry(a(0)?),
        GateKind::Rz => rz(a(0)?),
        GateKind::PhasedX => phased_x(a(0)?, a(1)?),
        GateKind::Cnot => cnot(),
        GateKind::ZZMax => zz_max(),
        GateKind::Swap => swap(),
        GateKind::G2 => g2(a(0)?),
        GateKind::G4 => g4(a(0)?),
    })
}

/// Dense unitary of a bound circuit, column `j` being the image of basis state `j`.
pub fn circuit_unitary(c: &Circuit) -> Result<CMatrix> {
    let n = c.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::DimensionOverflow(n, MAX_UNITARY_QUBITS));
    }
    let dim = 1usize << n;
    let mats = c
        .gates()
        .iter()
        .map(gate_matrix)
        .collect::<Result<Vec<_>>>()?;
    let mut u = CMatrix::zeros(dim, dim);
    let mut col = vec![C0; dim];
    for j in 0..dim {
        col.iter_mut().for_each(|v| *v = C0);
        col[j] = C1;
        for (g, m) in c.gates().iter().zip(&mats) {
            apply_matrix(&mut col, n, &g.targets, &g.controls, m);
        }
        u.set_column(j, &nalgebra::DVector::from_column_slice(&col));
    }
    Ok(u)
}

/// `|Tr(A† B)| / dim`: 1 iff the matrices agree up to a global phase.
pub fn phase_insensitive_overlap(a: &CMatrix, b: &CMatrix) -> f64 {
    let dim = a.nrows() as f64;
    (a.adjoint() * b).trace().norm() / dim
}

/// Largest elementwise deviation between `b` and `a` after removing the best global phase.
pub fn distance_up_to_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    let t = (a.adjoint() * b).trace();
    let phase = if t.norm() > 0.0 { t / t.norm() } else { C1 };
    (a * phase - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
