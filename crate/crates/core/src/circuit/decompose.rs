//! Lowering of high-level and controlled gates into native gate sets.
//!
//! Everything is first lowered to the CX-native set (CNOT, Ry, Rz, X). The
//! ZZ-native set is reached by rewriting CNOT, Ry and X afterwards.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{Angle, Control, Gate, GateKind, GateSet};
use crate::error::{Error, Result};

/// Control counts up to this size use the Gray-code construction for
/// multi-controlled rotations; larger counts split the controls in half.
pub const GRAY_CODE_LIMIT: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Y,
    Z,
}

impl Axis {
    fn gate(self, q: usize, theta: Angle) -> Gate {
        match self {
            Axis::Y => Gate::ry(q, theta),
            Axis::Z => Gate::rz(q, theta),
        }
    }
}

/// How external controls on a Givens gate are realized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ControlStyle {
    /// Every gate of the uncontrolled template receives the external controls.
    #[default]
    PerGate,
    /// Only the central multi-controlled rotation receives them; the basis
    /// change around it is left uncontrolled.
    CoreOnly,
}

fn x_conjugate(controls: &[Control], body: Vec<Gate>) -> Vec<Gate> {
    let flips: Vec<Gate> = controls
        .iter()
        .filter(|c| !c.1)
        .map(|c| Gate::x(c.0))
        .collect();
    if flips.is_empty() {
        return body;
    }
    let mut out = flips.clone();
    out.extend(body);
    out.extend(flips);
    out
}

/// Rotation about `axis` by `theta` on `target`, applied iff every control
/// holds its state. Output is CX-native.
pub fn mc_rotation(axis: Axis, theta: Angle, controls: &[Control], target: usize) -> Vec<Gate> {
    let ones: Vec<usize> = controls.iter().map(|c| c.0).collect();
    x_conjugate(controls, mc_rotation_ones(axis, &theta, &ones, target))
}

fn mc_rotation_ones(axis: Axis, theta: &Angle, ctrls: &[usize], t: usize) -> Vec<Gate> {
    let m = ctrls.len();
    if m == 0 {
        return vec![axis.gate(t, theta.clone())];
    }
    if m <= GRAY_CODE_LIMIT {
        return gray_code_rotation(axis, theta, ctrls, t);
    }
    // R(θ)[C1 ∪ C2] = R(θ/2)[C2] · X[C1] · R(−θ/2)[C2] · X[C1]
    let (c1, c2) = ctrls.split_at(m / 2);
    let mut out = mcx_ones(c1, t);
    out.extend(mc_rotation_ones(axis, &theta.scaled(-0.5), c2, t));
    out.extend(mcx_ones(c1, t));
    out.extend(mc_rotation_ones(axis, &theta.scaled(0.5), c2, t));
    out
}

// Uniformly-controlled decomposition with angle θ only on the all-ones pattern:
// 2^m rotations interleaved with CNOTs along a cyclic Gray code.
fn gray_code_rotation(axis: Axis, theta: &Angle, ctrls: &[usize], t: usize) -> Vec<Gate> {
    let m = ctrls.len();
    let len = 1usize << m;
    let gray = |k: usize| k ^ (k >> 1);
    let mut out = Vec::with_capacity(2 * len);
    for k in 0..len {
        let g = gray(k);
        let sign = if g.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        out.push(axis.gate(t, theta.scaled(sign / len as f64)));
        let changed = g ^ gray((k + 1) % len);
        let bit = changed.trailing_zeros() as usize;
        out.push(Gate::cnot(ctrls[bit], t));
    }
    out
}

/// Multi-controlled X. Output is CX-native.
pub fn mcx(controls: &[Control], target: usize) -> Vec<Gate> {
    let ones: Vec<usize> = controls.iter().map(|c| c.0).collect();
    x_conjugate(controls, mcx_ones(&ones, target))
}

fn mcx_ones(ctrls: &[usize], t: usize) -> Vec<Gate> {
    match ctrls.len() {
        0 => vec![Gate::x(t)],
        1 => vec![Gate::cnot(ctrls[0], t)],
        _ => {
            // X = Ry(π/2) Z Ry(−π/2)
            let mut out = vec![Gate::ry(t, -FRAC_PI_2)];
            out.extend(mc_phase_ones(PI, ctrls, t));
            out.push(Gate::ry(t, FRAC_PI_2));
            out
        }
    }
}

// diag(1, e^{iλ}) on t, controlled on all of ctrls; exact including phases.
// Phase(λ) = e^{iλ/2} Rz(λ), and the conditional e^{iλ/2} is itself a
// controlled phase on the last control.
fn mc_phase_ones(lambda: f64, ctrls: &[usize], t: usize) -> Vec<Gate> {
    let mut out = mc_rotation_ones(Axis::Z, &Angle::Const(lambda), ctrls, t);
    if let Some((&last, rest)) = ctrls.split_last() {
        out.extend(mc_phase_ones(lambda / 2.0, rest, last));
    }
    out
}

// Basis change, controlled central rotation, and pivot of a Givens template.
struct Template {
    basis: Vec<Gate>,
    core_controls: Vec<Control>,
    pivot: usize,
    core_angle: Angle,
}

fn givens_template(g: &Gate) -> Template {
    let theta = &g.angles[0];
    let t = &g.targets;
    match g.kind {
        GateKind::G2 => Template {
            basis: vec![Gate::cnot(t[0], t[1])],
            core_controls: vec![(t[1], true)],
            pivot: t[0],
            core_angle: theta.scaled(-2.0),
        },
        GateKind::G4 => Template {
            basis: vec![
                Gate::cnot(t[0], t[1]),
                Gate::cnot(t[2], t[3]),
                Gate::cnot(t[0], t[2]),
            ],
            core_controls: vec![(t[1], false), (t[2], true), (t[3], false)],
            pivot: t[0],
            core_angle: theta.scaled(-2.0),
        },
        _ => unreachable!("not a Givens gate"),
    }
}

fn wrap_all(gates: Vec<Gate>, controls: &[Control]) -> Vec<Gate> {
    gates
        .into_iter()
        .map(|mut g| {
            g.controls.extend_from_slice(controls);
            g
        })
        .collect()
}

/// Lowers `g` to CX-native gates.
pub fn lower_gate(g: &Gate, style: ControlStyle) -> Result<Vec<Gate>> {
    g.check()?;
    let ctl = &g.controls;
    let t = &g.targets;
    Ok(match g.kind {
        GateKind::X => mcx(ctl, t[0]),
        GateKind::Ry => mc_rotation(Axis::Y, g.angles[0].clone(), ctl, t[0]),
        GateKind::Rz => mc_rotation(Axis::Z, g.angles[0].clone(), ctl, t[0]),
        GateKind::PhasedX => {
            // PhasedX(α, β) = Rz(β − π/2) Ry(α) Rz(π/2 − β)
            let beta = g.angles[1]
                .value()
                .ok_or_else(|| Error::UnboundParameter("PhasedX phase".into()))?;
            let mut out = vec![Gate::rz(t[0], FRAC_PI_2 - beta)];
            out.extend(mc_rotation(Axis::Y, g.angles[0].clone(), ctl, t[0]));
            out.push(Gate::rz(t[0], beta - FRAC_PI_2));
            out
        }
        GateKind::Cnot => {
            let mut c = ctl.clone();
            c.push((t[0], true));
            mcx(&c, t[1])
        }
        GateKind::ZZMax => {
            let mut out = vec![Gate::cnot(t[0], t[1])];
            out.extend(mc_rotation(Axis::Z, Angle::Const(FRAC_PI_2), ctl, t[1]));
            out.push(Gate::cnot(t[0], t[1]));
            out
        }
        GateKind::Swap => {
            let mut c = ctl.clone();
            c.push((t[0], true));
            let mut out = vec![Gate::cnot(t[1], t[0])];
            out.extend(mcx(&c, t[1]));
            out.push(Gate::cnot(t[1], t[0]));
            out
        }
        GateKind::G2 | GateKind::G4 => {
            let tpl = givens_template(g);
            match style {
                ControlStyle::PerGate if !ctl.is_empty() => {
                    let bare = Gate {
                        controls: Vec::new(),
                        ..g.clone()
                    };
                    let mut out = Vec::new();
                    for p in lower_gate(&bare, style)? {
                        out.extend(lower_gate(&wrap_all(vec![p], ctl).remove(0), style)?);
                    }
                    out
                }
                _ => {
                    let mut cc = tpl.core_controls.clone();
                    cc.extend_from_slice(ctl);
                    let mut out = tpl.basis.clone();
                    out.extend(mc_rotation(Axis::Y, tpl.core_angle, &cc, tpl.pivot));
                    out.extend(tpl.basis.into_iter().rev());
                    out
                }
            }
        }
    })
}

fn cnot_to_zz(c: usize, t: usize) -> [Gate; 5] {
    // CNOT = Ry_t(π/2) · CZ · Ry_t(−π/2),  CZ ∝ ZZMax · Rz_c(−π/2) Rz_t(−π/2)
    [
        Gate::ry(t, -FRAC_PI_2),
        Gate::zz_max(c, t),
        Gate::rz(c, -FRAC_PI_2),
        Gate::rz(t, -FRAC_PI_2),
        Gate::ry(t, FRAC_PI_2),
    ]
}

fn cx_to_zz(g: Gate) -> Vec<Gate> {
    match g.kind {
        GateKind::Cnot => cnot_to_zz(g.targets[0], g.targets[1])
            .into_iter()
            .map(|p| cx_to_zz(p).remove(0))
            .collect(),
        GateKind::Ry => vec![Gate::phased_x(g.targets[0], g.angles[0].clone(), FRAC_PI_2)],
        GateKind::X => vec![Gate::phased_x(g.targets[0], PI, 0.0)],
        _ => vec![g],
    }
}

/// Expands `g` into gates of `target` without any peephole cleanup.
pub fn decompose_gate(g: &Gate, target: GateSet, style: ControlStyle) -> Result<Vec<Gate>> {
    if g.controls.is_empty() && target.contains(g.kind) {
        return Ok(vec![g.clone()]);
    }
    let cx = lower_gate(g, style)?;
    Ok(match target {
        GateSet::CxNative => cx,
        GateSet::ZzNative => cx.into_iter().flat_map(cx_to_zz).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::matrix::{self, circuit_unitary, distance_up_to_phase, CMatrix};
    use super::super::Circuit;
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};

    fn unitary(n: usize, gates: Vec<Gate>) -> CMatrix {
        circuit_unitary(&Circuit::from_gates(n, gates).unwrap()).unwrap()
    }

    /// Dense reference for a controlled gate built directly from the target matrix.
    fn controlled_reference(n: usize, g: &Gate) -> CMatrix {
        let base = matrix::gate_matrix(g).unwrap();
        let dim = 1usize << n;
        let bit = |i: usize, q: usize| (i >> (n - 1 - q)) & 1;
        let mut u = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            let active = g
                .controls
                .iter()
                .all(|&(q, s)| bit(col, q) == usize::from(s));
            if !active {
                u[(col, col)] = Complex64::new(1.0, 0.0);
                continue;
            }
            let sub = g.targets.iter().fold(0, |acc, &q| (acc << 1) | bit(col, q));
            for row_sub in 0..base.nrows() {
                let mut row = col;
                for (k, &q) in g.targets.iter().enumerate() {
                    let b = (row_sub >> (g.targets.len() - 1 - k)) & 1;
                    let m = 1 << (n - 1 - q);
                    row = if b == 1 { row | m } else { row & !m };
                }
                u[(row, col)] = base[(row_sub, sub)];
            }
        }
        u
    }

    fn check(n: usize, g: &Gate, set: GateSet, style: ControlStyle) {
        let d = decompose_gate(g, set, style).unwrap();
        assert!(d
            .iter()
            .all(|p| p.controls.is_empty() && set.contains(p.kind)));
        let dev = distance_up_to_phase(&controlled_reference(n, g), &unitary(n, d));
        assert!(dev < 1e-10, "{g} via {set}: deviation {dev}");
    }

    fn random_controls(rng: &mut impl Rng, n: usize, used: &[usize], k: usize) -> Vec<Control> {
        let mut free: Vec<usize> = (0..n).filter(|q| !used.contains(q)).collect();
        let mut out = Vec::new();
        for _ in 0..k.min(free.len()) {
            let q = free.remove(rng.gen_range(0..free.len()));
            out.push((q, rng.gen_bool(0.5)));
        }
        out
    }

    #[test]
    fn templates_match_reference_matrices() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..6 {
            let th = rng.gen_range(-PI..PI);
            let gates = [
                Gate::g2([0, 1], th),
                Gate::g2([1, 0], th),
                Gate::g4([0, 1, 2, 3], th),
                Gate::g4([3, 1, 0, 2], th),
                Gate::swap(0, 2),
                Gate::zz_max(1, 3),
                Gate::cnot(2, 0),
                Gate::ry(1, th),
                Gate::phased_x(0, th, 0.7),
                Gate::x(3),
            ];
            for g in &gates {
                for set in [GateSet::CxNative, GateSet::ZzNative] {
                    check(4, g, set, ControlStyle::PerGate);
                }
            }
        }
    }

    #[test]
    fn controlled_variants_match_reference_matrices() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(12);
        let n = 7;
        for k in 1..=3 {
            for _ in 0..3 {
                let th = rng.gen_range(-PI..PI);
                let base = [
                    Gate::g2([0, 1], th),
                    Gate::g4([0, 1, 2, 3], th),
                    Gate::swap(2, 4),
                    Gate::zz_max(1, 3),
                    Gate::ry(1, th),
                    Gate::rz(2, th),
                    Gate::phased_x(0, th, -0.3),
                    Gate::x(3),
                    Gate::cnot(0, 5),
                ];
                for g in &base {
                    let t = g.targets.clone();
                    let c = random_controls(&mut rng, n, &t, k);
                    let g = g.control_wrap(&c).unwrap();
                    for style in [ControlStyle::PerGate, ControlStyle::CoreOnly] {
                        check(n, &g, GateSet::CxNative, style);
                    }
                    check(n, &g, GateSet::ZzNative, ControlStyle::PerGate);
                }
            }
        }
    }

    #[test]
    fn many_controls_use_halving() {
        let n = 8;
        let c: Vec<Control> = (1..8).map(|q| (q, q % 3 != 0)).collect();
        check(
            n,
            &Gate::ry(0, 0.77).control_wrap(&c).unwrap(),
            GateSet::CxNative,
            ControlStyle::PerGate,
        );
        check(
            n,
            &Gate::x(0).control_wrap(&c).unwrap(),
            GateSet::CxNative,
            ControlStyle::PerGate,
        );
        let c5: Vec<Control> = (2..7).map(|q| (q, true)).collect();
        check(
            n,
            &Gate::g2([0, 1], -0.4).control_wrap(&c5).unwrap(),
            GateSet::CxNative,
            ControlStyle::CoreOnly,
        );
    }

    #[test]
    fn known_two_qubit_counts() {
        let count = |g: &Gate, set| {
            decompose_gate(g, set, ControlStyle::PerGate)
                .unwrap()
                .iter()
                .filter(|p| p.kind.arity() == 2)
                .count()
        };
        assert_eq!(count(&Gate::g2([0, 1], 0.3), GateSet::CxNative), 4);
        assert_eq!(count(&Gate::g4([0, 1, 2, 3], 0.3), GateSet::CxNative), 14);
        assert_eq!(count(&Gate::g4([0, 1, 2, 3], 0.3), GateSet::ZzNative), 14);
        let toffoli = Gate::cnot(0, 1).control_wrap(&[(2, true)]).unwrap();
        assert_eq!(count(&toffoli, GateSet::CxNative), 6);
    }

    #[test]
    fn weight_conservation_of_givens() {
        let n = 6;
        let g = Gate::g4([0, 2, 3, 5], 0.9)
            .control_wrap(&[(1, true), (4, false)])
            .unwrap();
        let u = controlled_reference(n, &g);
        let dec = unitary(
            n,
            decompose_gate(&g, GateSet::ZzNative, ControlStyle::PerGate).unwrap(),
        );
        assert!(distance_up_to_phase(&u, &dec) < 1e-10);
        for col in 0..(1usize << n) {
            for row in 0..(1usize << n) {
                if dec[(row, col)].norm() > 1e-10 {
                    assert_eq!(row.count_ones(), col.count_ones());
                }
            }
        }
    }
}
