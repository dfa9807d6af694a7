//! State preparation by a sequence of externally controlled Givens rotations.
//!
//! Starting from the reference configuration `x_1`, rotation `e` mixes `x_1`
//! with `x_e`. Single and double excitations use one G2/G4 gate; higher
//! excitations use a gadget of controlled SWAPs around a central G2. External
//! controls keep every rotation from touching configurations placed earlier.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::circuit::{Angle, Circuit, Control, Gate};
use crate::config::{hamming, restricted_distance, xor_support, OnConfig, StateSpec};
use crate::error::{Error, Result};

/// Below this the accumulated normalizer `∏ cos θ` is treated as zero.
pub const NORMALIZER_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ControlledSwap {
    pub pair: (usize, usize),
    pub controls: Vec<Control>,
}

/// Controlled-SWAP gadget realizing an excitation of order above two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HighOrderGadget {
    /// Value held by minority qubits (1 when at most half the qubits are occupied).
    pub q_minor: bool,
    pub swaps: Vec<ControlledSwap>,
    /// Central G2 targets: the qubit occupied in the swapped reference first.
    pub central: [usize; 2],
    pub central_controls: Vec<Control>,
    /// A swapped reference coincided with an earlier configuration.
    pub k_matches_ref: bool,
    /// The central controls fell back to the minority qubits of the swapped reference.
    pub minority_controls: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlannedRotation {
    /// Qubits where `x_1` and `x_e` differ: occupied-in-`x_1` first, each half ascending.
    pub targets: Vec<usize>,
    /// Excitation order (half the Hamming distance).
    pub order: usize,
    pub controls: Vec<Control>,
    pub gadget: Option<HighOrderGadget>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationPlan {
    pub n_qubits: usize,
    pub reference: OnConfig,
    pub rotations: Vec<PlannedRotation>,
}

impl RotationPlan {
    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    /// `(rotation index, control)` for every external control on a G2/G4 rotation.
    pub fn external_controls(&self) -> Vec<(usize, Control)> {
        self.rotations
            .iter()
            .enumerate()
            .flat_map(|(e, r)| r.controls.iter().map(move |c| (e, *c)))
            .collect()
    }
}

fn ordered_targets(x1: &OnConfig, xe: &OnConfig) -> Result<Vec<usize>> {
    let diff = xor_support(x1, xe)?;
    let (occ, empty): (Vec<usize>, Vec<usize>) = diff.into_iter().partition(|&q| x1.get(q));
    if occ.len() != empty.len() {
        return Err(Error::InvalidState(format!(
            "{x1} and {xe} differ in particle number"
        )));
    }
    Ok(occ.into_iter().chain(empty).collect())
}

/// Whether a G2 (`targets.len() == 2`) or G4 on `targets`, oriented on the
/// reference `x1`, acts nontrivially on `xp`.
fn rotation_touches(targets: &[usize], x1: &OnConfig, xp: &OnConfig) -> bool {
    if targets.len() == 2 {
        xp.get(targets[0]) != xp.get(targets[1])
    } else {
        let xe = targets.iter().fold(*x1, |x, &q| x.flipped(q));
        restricted_distance(x1, xp, targets) == targets.len()
            || restricted_distance(&xe, xp, targets) == targets.len()
    }
}

/// Lowest qubit outside `targets` where `xp` and `xe` differ.
fn separating_qubit(targets: &[usize], xp: &OnConfig, xe: &OnConfig) -> Result<usize> {
    (0..xe.len())
        .find(|q| !targets.contains(q) && xp.get(*q) != xe.get(*q))
        .ok_or_else(|| {
            Error::Synthesis(format!(
                "no external control separates {xp} from rotation target {xe}"
            ))
        })
}

/// Controls for a rotation on `targets` taking `reference` to `xe`, such that
/// none of `previous` is touched. One control is added per touched
/// configuration not already excluded by an earlier control.
fn rotation_controls(
    targets: &[usize],
    reference: &OnConfig,
    xe: &OnConfig,
    previous: &[OnConfig],
) -> Result<Vec<Control>> {
    let mut controls: Vec<Control> = Vec::new();
    for xp in previous {
        if !rotation_touches(targets, reference, xp) {
            continue;
        }
        if controls.iter().any(|&(q, s)| xp.get(q) != s) {
            continue;
        }
        let q = separating_qubit(targets, xp, xe)?;
        controls.push((q, reference.get(q)));
    }
    controls.sort_unstable();
    Ok(controls)
}

/// Gadget for `h(x_1, x_e) > 4`, given `configs = (x_1, …, x_e)`.
pub fn plan_high_order(configs: &[OnConfig]) -> Result<HighOrderGadget> {
    let (x1, xe) = match configs {
        [x1, .., xe] if configs.len() >= 2 => (*x1, *xe),
        _ => {
            return Err(Error::InvalidState(
                "need at least two configurations".into(),
            ))
        }
    };
    let h = hamming(&x1, &xe)?;
    if h <= 4 || h % 2 == 1 {
        return Err(Error::InvalidState(format!(
            "high-order gadget needs an even Hamming distance above 4, got {h}"
        )));
    }
    let n = x1.len();
    let q_minor = x1.weight() <= n / 2;
    let previous = &configs[1..configs.len() - 1];

    let mut xs = x1;
    let mut swaps = Vec::new();
    let mut k_matches_ref = false;
    while hamming(&xs, &xe)? > 2 {
        let i = (0..n)
            .find(|&q| xs.get(q) && !xe.get(q))
            .expect("excess occupation");
        let j = (0..n)
            .find(|&q| !xs.get(q) && xe.get(q))
            .expect("missing occupation");
        let controls: Vec<Control> = (0..n)
            .filter(|&q| q != i && q != j && xs.get(q) == q_minor)
            .map(|q| (q, q_minor))
            .collect();
        swaps.push(ControlledSwap {
            pair: (i, j),
            controls,
        });
        xs = xs.swapped(i, j);
        if previous.contains(&xs) {
            k_matches_ref = true;
        }
    }
    let central = {
        let t = ordered_targets(&xs, &xe)?;
        [t[0], t[1]]
    };

    // Images of the earlier configurations under the forward SWAP sequence:
    // the central rotation sees these, not the originals.
    let images: Vec<OnConfig> = previous
        .iter()
        .map(|x| {
            swaps.iter().fold(*x, |y, s| {
                let (i, j) = s.pair;
                let active = s.controls.iter().all(|&(q, v)| y.get(q) == v);
                if active {
                    y.swapped(i, j)
                } else {
                    y
                }
            })
        })
        .collect();
    let alg_controls = rotation_controls(&central, &xs, &xe, &images)?;

    let mut allow = true;
    if k_matches_ref {
        let ctrl_qubits: BTreeSet<usize> = alg_controls.iter().map(|c| c.0).collect();
        for s in &swaps {
            let swap_qubits: BTreeSet<usize> = s.controls.iter().map(|c| c.0).collect();
            if ctrl_qubits.is_subset(&swap_qubits)
                && ctrl_qubits.iter().all(|&q| xs.get(q) == q_minor)
            {
                allow = false;
            }
        }
    }
    let central_controls = if allow {
        alg_controls
    } else {
        (0..n)
            .filter(|q| !central.contains(q) && xs.get(*q) == q_minor)
            .map(|q| (q, q_minor))
            .collect()
    };
    Ok(HighOrderGadget {
        q_minor,
        swaps,
        central,
        central_controls,
        k_matches_ref,
        minority_controls: !allow,
    })
}

/// Rotation sequence and external controls for an ordered configuration list
/// whose first entry is the reference.
pub fn plan_rotations(configs: &[OnConfig]) -> Result<RotationPlan> {
    let Some(&x1) = configs.first() else {
        return Err(Error::InvalidState("empty configuration list".into()));
    };
    for (k, x) in configs.iter().enumerate() {
        if x.len() != x1.len() {
            return Err(Error::LengthMismatch(x1.len(), x.len()));
        }
        if configs[..k].contains(x) {
            return Err(Error::InvalidState(format!("duplicate configuration {x}")));
        }
    }
    let mut rotations = Vec::with_capacity(configs.len() - 1);
    for e in 1..configs.len() {
        let xe = configs[e];
        let targets = ordered_targets(&x1, &xe)?;
        let h = targets.len();
        if h % 2 == 1 {
            return Err(Error::InvalidState(format!(
                "odd Hamming distance between {x1} and {xe}"
            )));
        }
        let previous = &configs[1..e];
        let (controls, gadget) = if h <= 4 {
            (rotation_controls(&targets, &x1, &xe, previous)?, None)
        } else {
            (Vec::new(), Some(plan_high_order(&configs[..=e])?))
        };
        rotations.push(PlannedRotation {
            targets,
            order: h / 2,
            controls,
            gadget,
        });
    }
    Ok(RotationPlan {
        n_qubits: x1.len(),
        reference: x1,
        rotations,
    })
}

/// Rotation angles reproducing `coeffs` from the reference-first product
/// `c_1 = ∏ cos θ_d`, `c_{d+1} = sin θ_d ∏_{b<d} cos θ_b`.
///
/// A negative `c_1` is absorbed as a global sign.
pub fn angles_from_coefficients(coeffs: &[f64]) -> Result<Vec<f64>> {
    if coeffs.is_empty() {
        return Err(Error::InvalidState("no coefficients".into()));
    }
    let norm: f64 = coeffs.iter().map(|c| c * c).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!(
            "coefficients have norm² {norm}"
        )));
    }
    let sign = if coeffs[0] < 0.0 { -1.0 } else { 1.0 };
    let mut angles = Vec::with_capacity(coeffs.len() - 1);
    let mut normalizer = 1.0f64;
    for (d, c) in coeffs[1..].iter().enumerate() {
        if normalizer.abs() < NORMALIZER_FLOOR {
            if c.abs() < NORMALIZER_FLOOR {
                angles.push(0.0);
                continue;
            }
            return Err(Error::NormalizerUnderflow(d));
        }
        let s = (sign * c / normalizer).clamp(-1.0, 1.0);
        let theta = s.asin();
        angles.push(theta);
        normalizer *= theta.cos();
    }
    Ok(angles)
}

fn push_rotation(c: &mut Circuit, x1: &OnConfig, r: &PlannedRotation, theta: Angle) -> Result<()> {
    match &r.gadget {
        None => {
            let g = match r.targets.len() {
                2 => Gate::g2([r.targets[0], r.targets[1]], theta),
                4 => Gate::g4(
                    [r.targets[0], r.targets[1], r.targets[2], r.targets[3]],
                    theta,
                ),
                k => {
                    return Err(Error::Synthesis(format!(
                        "rotation on {k} qubits from {x1} needs a gadget"
                    )))
                }
            };
            c.push(g.control_wrap(&r.controls)?)
        }
        Some(gad) => {
            let swaps: Vec<Gate> = gad
                .swaps
                .iter()
                .map(|s| Gate::swap(s.pair.0, s.pair.1).control_wrap(&s.controls))
                .collect::<Result<_>>()?;
            c.extend(swaps.iter().cloned())?;
            c.push(Gate::g2(gad.central, theta).control_wrap(&gad.central_controls)?)?;
            c.extend(swaps.into_iter().rev())
        }
    }
}

/// Circuit preparing `|x_1>` and applying the planned rotations with the given angles.
pub fn circuit_from_plan(plan: &RotationPlan, angles: &[Angle]) -> Result<Circuit> {
    let mut c = Circuit::new(plan.n_qubits);
    for q in plan.reference.occupied() {
        c.push(Gate::x(q))?;
    }
    c.append(&rotations_from_plan(plan, angles)?)?;
    Ok(c)
}

/// The planned rotations alone: a weight-conserving unitary taking `|x_1>` to the target.
pub fn rotations_from_plan(plan: &RotationPlan, angles: &[Angle]) -> Result<Circuit> {
    if angles.len() != plan.len() {
        return Err(Error::LengthMismatch(plan.len(), angles.len()));
    }
    let mut c = Circuit::new(plan.n_qubits);
    for (r, a) in plan.rotations.iter().zip(angles) {
        push_rotation(&mut c, &plan.reference, r, a.clone())?;
    }
    Ok(c)
}

/// GR circuit for an ordered spec; the first entry is the reference.
pub fn synthesize_gr(spec: &StateSpec) -> Result<Circuit> {
    let plan = plan_rotations(&spec.configs())?;
    let angles = angles_from_coefficients(&spec.coefficients())?;
    circuit_from_plan(
        &plan,
        &angles.into_iter().map(Angle::Const).collect::<Vec<_>>(),
    )
}

/// Rotation part of [`synthesize_gr`], without the X gates preparing `|x_1>`.
pub fn synthesize_gr_rotations(spec: &StateSpec) -> Result<Circuit> {
    let plan = plan_rotations(&spec.configs())?;
    let angles = angles_from_coefficients(&spec.coefficients())?;
    rotations_from_plan(
        &plan,
        &angles.into_iter().map(Angle::Const).collect::<Vec<_>>(),
    )
}

/// GR circuit with one symbolic angle per rotation, named `{prefix}{k}`.
pub fn synthesize_gr_symbolic(configs: &[OnConfig], prefix: &str) -> Result<Circuit> {
    let plan = plan_rotations(configs)?;
    let angles: Vec<Angle> = (0..plan.len())
        .map(|k| Angle::param(format!("{prefix}{k}")))
        .collect();
    circuit_from_plan(&plan, &angles)
}

/// Layered ansatz of uncontrolled G2 and G4 gates acting on `reference`:
/// per layer, G2 on every same-spin neighbour pair `(q, q + 2)` and G4 on every
/// adjacent spatial-orbital pair `(2k, 2k + 1, 2k + 2, 2k + 3)`.
pub fn givens_fabric(reference: &OnConfig, layers: usize, prefix: &str) -> Result<Circuit> {
    let n = reference.len();
    let mut c = Circuit::new(n);
    for q in reference.occupied() {
        c.push(Gate::x(q))?;
    }
    let mut k = 0;
    let mut next = || {
        k += 1;
        Angle::param(format!("{prefix}{}", k - 1))
    };
    for _ in 0..layers {
        for q in 0..n.saturating_sub(2) {
            c.push(Gate::g2([q, q + 2], next()))?;
        }
        for o in (0..n.saturating_sub(3)).step_by(2) {
            c.push(Gate::g4([o, o + 1, o + 2, o + 3], next()))?;
        }
    }
    Ok(c)
}
