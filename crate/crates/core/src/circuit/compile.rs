//! Gate-set compilation followed by peephole cleanup.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::decompose::{decompose_gate, ControlStyle};
use super::matrix::{self, CMatrix};
use super::{Circuit, Gate, GateKind, GateSet};
use crate::error::{Error, Result};

/// Rotations whose angle is within this distance of a multiple of 2π are dropped.
const ZERO_ANGLE: f64 = 1e-12;
const MAX_PASSES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    pub style: ControlStyle,
    pub peephole: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            style: ControlStyle::default(),
            peephole: true,
        }
    }
}

pub fn compile(c: &Circuit, target: GateSet) -> Result<Circuit> {
    compile_with(c, target, &CompileOptions::default())
}

pub fn compile_with(c: &Circuit, target: GateSet, opts: &CompileOptions) -> Result<Circuit> {
    if let Some(p) = c.parameters().into_iter().next() {
        return Err(Error::UnboundParameter(p));
    }
    let mut gates = Vec::new();
    for g in c.gates() {
        gates.extend(decompose_gate(g, target, opts.style)?);
    }
    if opts.peephole {
        gates = peephole(gates, target);
    }
    Circuit::from_gates(c.n_qubits(), gates)
}

// Rotation angles are 2π-periodic up to a global sign.
fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn near_zero_mod_2pi(a: f64) -> bool {
    wrap_angle(a).abs() < ZERO_ANGLE
}

fn is_identity(g: &Gate) -> bool {
    if !g.controls.is_empty() {
        return false;
    }
    match g.kind {
        GateKind::Ry | GateKind::Rz | GateKind::PhasedX | GateKind::G2 | GateKind::G4 => {
            let Some(a) = g.angle(0) else { return false };
            if matches!(g.kind, GateKind::G2 | GateKind::G4) {
                // Givens angles enter as cos θ/sin θ, so the period is 2π
                // without any phase ambiguity only at exactly 0.
                a.abs() < ZERO_ANGLE
            } else {
                near_zero_mod_2pi(a)
            }
        }
        _ => false,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Diagonal,
    XType,
    General,
}

fn role(g: &Gate, q: usize) -> Role {
    if !g.controls.is_empty() {
        return Role::General;
    }
    match g.kind {
        GateKind::Rz | GateKind::ZZMax => Role::Diagonal,
        GateKind::X => Role::XType,
        GateKind::PhasedX => match g.angle(1) {
            Some(b) if near_zero_mod_2pi(b) || near_zero_mod_2pi(b - PI) => Role::XType,
            _ => Role::General,
        },
        GateKind::Cnot => {
            if q == g.targets[0] {
                Role::Diagonal
            } else {
                Role::XType
            }
        }
        _ => Role::General,
    }
}

fn commute(a: &Gate, b: &Gate) -> bool {
    a.qubits().all(|q| {
        if !b.qubits().any(|p| p == q) {
            return true;
        }
        let (ra, rb) = (role(a, q), role(b, q));
        ra == rb && ra != Role::General
    })
}

fn same_pair(a: &Gate, b: &Gate) -> bool {
    let (x, y) = (&a.targets, &b.targets);
    (x[0] == y[0] && x[1] == y[1]) || (x[0] == y[1] && x[1] == y[0])
}

/// Product `b · a` (a applied first) when it reduces to at most two simpler gates.
fn merge(a: &Gate, b: &Gate) -> Option<Vec<Gate>> {
    if a.kind != b.kind || !a.controls.is_empty() || !b.controls.is_empty() {
        return None;
    }
    match a.kind {
        GateKind::X if a.targets == b.targets => Some(vec![]),
        GateKind::Cnot if a.targets == b.targets => Some(vec![]),
        GateKind::Swap if same_pair(a, b) => Some(vec![]),
        GateKind::ZZMax if same_pair(a, b) => {
            Some(vec![Gate::rz(a.targets[0], PI), Gate::rz(a.targets[1], PI)])
        }
        GateKind::Rz | GateKind::Ry if a.targets == b.targets => {
            let s = a.angle(0)? + b.angle(0)?;
            Some(vec![Gate {
                angles: vec![wrap_angle(s).into()],
                ..a.clone()
            }])
        }
        GateKind::PhasedX if a.targets == b.targets => {
            let (x, y) = (a.angle(0)?, b.angle(0)?);
            let (p, r) = (a.angle(1)?, b.angle(1)?);
            let alpha = if near_zero_mod_2pi(p - r) {
                x + y
            } else if near_zero_mod_2pi(p - r - PI) {
                x - y
            } else {
                return None;
            };
            Some(vec![Gate::phased_x(a.targets[0], wrap_angle(alpha), p)])
        }
        _ => None,
    }
}

fn cancel_and_merge(gates: Vec<Gate>) -> (Vec<Gate>, bool) {
    let mut out: Vec<Gate> = Vec::with_capacity(gates.len());
    let mut changed = false;
    'next: for g in gates {
        if is_identity(&g) {
            changed = true;
            continue;
        }
        for j in (0..out.len()).rev() {
            if let Some(rep) = merge(&out[j], &g) {
                changed = true;
                let rep: Vec<Gate> = rep.into_iter().filter(|r| !is_identity(r)).collect();
                out.splice(j..=j, rep);
                continue 'next;
            }
            if !commute(&out[j], &g) {
                break;
            }
        }
        out.push(g);
    }
    (out, changed)
}

/// Euler angles with `u ∝ Rz(a) Ry(b) Rz(c)`.
fn zyz_angles(u: &CMatrix) -> (f64, f64, f64) {
    // In SU(2) form u = [[α, -β*], [β, α*]] with
    // α = e^{-i(a+c)/2} cos(b/2), β = e^{i(a-c)/2} sin(b/2).
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let s = det.sqrt();
    let (alpha, beta) = (u[(0, 0)] / s, u[(1, 0)] / s);
    let b = 2.0 * beta.norm().atan2(alpha.norm());
    let sum = if alpha.norm() > 1e-12 {
        -2.0 * alpha.arg()
    } else {
        0.0
    };
    let diff = if beta.norm() > 1e-12 {
        2.0 * beta.arg()
    } else {
        0.0
    };
    ((sum + diff) / 2.0, b, (sum - diff) / 2.0)
}

fn resynthesize(u: &CMatrix, q: usize, set: GateSet) -> Vec<Gate> {
    let (a, b, c) = zyz_angles(u);
    let mut out = Vec::new();
    match set {
        GateSet::ZzNative => {
            // Rz(a) Ry(b) Rz(c) = Rz(a + c) · PhasedX(b, π/2 − c)
            if !near_zero_mod_2pi(b) {
                out.push(Gate::phased_x(q, b, wrap_angle(FRAC_PI_2 - c)));
            }
            if !near_zero_mod_2pi(a + c) {
                out.push(Gate::rz(q, wrap_angle(a + c)));
            }
        }
        GateSet::CxNative => {
            if !near_zero_mod_2pi(c) {
                out.push(Gate::rz(q, wrap_angle(c)));
            }
            if !near_zero_mod_2pi(b) {
                out.push(Gate::ry(q, b));
            }
            if !near_zero_mod_2pi(a) {
                out.push(Gate::rz(q, wrap_angle(a)));
            }
        }
    }
    out
}

fn single_qubit_runs(gates: Vec<Gate>, set: GateSet) -> (Vec<Gate>, bool) {
    let n = gates
        .iter()
        .flat_map(|g| g.qubits())
        .max()
        .map_or(0, |m| m + 1);
    let mut runs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut replace: Vec<Option<Vec<Gate>>> = vec![None; gates.len()];
    let mut changed = false;

    let mut flush = |run: &mut Vec<usize>, replace: &mut Vec<Option<Vec<Gate>>>| {
        if run.len() >= 2 {
            let mut u = CMatrix::identity(2, 2);
            for &i in run.iter() {
                u = matrix::gate_matrix(&gates[i]).expect("bound gate") * u;
            }
            let q = gates[run[0]].targets[0];
            let new = resynthesize(&u, q, set);
            if new.len() < run.len() {
                changed = true;
                for &i in run.iter() {
                    replace[i] = Some(Vec::new());
                }
                replace[*run.last().unwrap()] = Some(new);
            }
        }
        run.clear();
    };

    for (i, g) in gates.iter().enumerate() {
        if g.n_qubits_touched() == 1 && g.angles.iter().all(|a| a.value().is_some()) {
            runs[g.targets[0]].push(i);
        } else {
            for q in g.qubits() {
                flush(&mut runs[q], &mut replace);
            }
        }
    }
    for run in runs.iter_mut() {
        flush(run, &mut replace);
    }

    let mut out = Vec::with_capacity(gates.len());
    for (g, r) in gates.into_iter().zip(replace) {
        match r {
            Some(rep) => out.extend(rep),
            None => out.push(g),
        }
    }
    (out, changed)
}

/// Cancellation, rotation merging, zero-angle elision and single-qubit
/// resynthesis, repeated until nothing changes.
pub fn peephole(mut gates: Vec<Gate>, set: GateSet) -> Vec<Gate> {
    for _ in 0..MAX_PASSES {
        let (g1, c1) = cancel_and_merge(gates);
        let (g2, c2) = single_qubit_runs(g1, set);
        gates = g2;
        if !c1 && !c2 {
            break;
        }
    }
    gates
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::matrix::{circuit_unitary, distance_up_to_phase};
    use rand::{Rng, SeedableRng};

    #[test]
    fn xx_cancels() {
        let c = Circuit::from_gates(1, vec![Gate::x(0), Gate::x(0)]).unwrap();
        assert!(compile(&c, GateSet::CxNative).unwrap().is_empty());
        assert!(compile(&c, GateSet::ZzNative).unwrap().is_empty());
    }

    #[test]
    fn rz_merge() {
        let c = Circuit::from_gates(1, vec![Gate::rz(0, 0.3), Gate::rz(0, 0.4)]).unwrap();
        let out = compile(&c, GateSet::ZzNative).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out.gates()[0].kind, GateKind::Rz);
        assert!((out.gates()[0].angle(0).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn merges_through_commuting_gates() {
        let c = Circuit::from_gates(
            2,
            vec![Gate::rz(0, 0.3), Gate::zz_max(0, 1), Gate::rz(0, -0.3)],
        )
        .unwrap();
        let out = compile(&c, GateSet::ZzNative).unwrap();
        assert_eq!(out.len(), 1);
        let c = Circuit::from_gates(
            3,
            vec![Gate::cnot(0, 1), Gate::cnot(0, 2), Gate::cnot(0, 1)],
        )
        .unwrap();
        assert_eq!(compile(&c, GateSet::CxNative).unwrap().len(), 1);
    }

    #[test]
    fn unbound_rejected() {
        let c = Circuit::from_gates(1, vec![Gate::ry(0, super::super::Angle::param("t"))]).unwrap();
        assert!(matches!(
            compile(&c, GateSet::ZzNative),
            Err(Error::UnboundParameter(_))
        ));
    }

    fn random_gate(rng: &mut impl Rng, n: usize) -> Gate {
        let mut qs: Vec<usize> = (0..n).collect();
        let mut pick = || qs.remove(rng.gen_range(0..qs.len()));
        let (a, b, c, d) = (pick(), pick(), pick(), pick());
        let th: f64 = rng.gen_range(-PI..PI);
        match rng.gen_range(0..11) {
            0 => Gate::x(a),
            1 => Gate::ry(a, th),
            2 => Gate::rz(a, th),
            3 => Gate::phased_x(a, th, 0.5 * th),
            4 => Gate::cnot(a, b),
            5 => Gate::zz_max(a, b),
            6 => Gate::swap(a, b),
            7 => Gate::g2([a, b], th),
            8 => Gate::g4([a, b, c, d], th),
            9 => Gate::g2([a, b], th).control_wrap(&[(c, true)]).unwrap(),
            _ => Gate::ry(a, if rng.gen_bool(0.5) { 0.0 } else { th }),
        }
    }

    #[test]
    fn compile_preserves_unitary() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..25 {
            let n = rng.gen_range(4..=6);
            let gates: Vec<Gate> = (0..rng.gen_range(1..12))
                .map(|_| random_gate(&mut rng, n))
                .collect();
            let c = Circuit::from_gates(n, gates).unwrap();
            let u = circuit_unitary(&c).unwrap();
            for set in [GateSet::CxNative, GateSet::ZzNative] {
                let naive = compile_with(
                    &c,
                    set,
                    &CompileOptions {
                        peephole: false,
                        ..Default::default()
                    },
                )
                .unwrap();
                let out = compile(&c, set).unwrap();
                assert!(out
                    .gates()
                    .iter()
                    .all(|g| set.contains(g.kind) && g.controls.is_empty()));
                let dev = distance_up_to_phase(&u, &circuit_unitary(&out).unwrap());
                assert!(dev < 1e-10, "deviation {dev}");
                let two = |c: &Circuit| c.gates().iter().filter(|g| g.kind.arity() == 2).count();
                assert!(two(&out) <= two(&naive));
            }
        }
    }
}
