//! Sparse state preparation by pairwise merging of support strings.
//!
//! The disentangling circuit `U†` merges two support strings per step: CNOTs
//! from a pivot qubit make the pair differ only on the pivot, then a
//! controlled Ry folds the pair's amplitude onto the string with pivot 0.
//! After `D - 1` merges X gates clear the survivor. The preparation circuit is
//! `U`, the reversed inverse. Supports are sorted before every selection, so
//! the gate structure depends only on the set of strings.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::circuit::{Angle, Circuit, Control, Gate};
use crate::config::{hamming, xor_support, OnConfig, StateSpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeStep {
    /// The string folded into the survivor (pivot bit 1 before the CNOTs).
    pub merged: OnConfig,
    /// The surviving string (pivot bit 0).
    pub survivor: OnConfig,
    pub differing: Vec<usize>,
    pub pivot: usize,
    /// `(control, target)` CNOTs applied before the rotation in `U†`.
    pub cnots: Vec<(usize, usize)>,
    pub controls: Vec<Control>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SspPlan {
    pub n_qubits: usize,
    pub steps: Vec<MergeStep>,
    /// Qubits set in the final surviving string, cleared by X gates in `U†`.
    pub final_x: Vec<usize>,
}

/// Angle `β` with `(c1, c2) = r (cos β, sin β)`, `r = √(c1² + c2²)`, in `(−π, π]`.
pub fn merge_angle(c1: f64, c2: f64) -> Result<f64> {
    if c1 == 0.0 && c2 == 0.0 {
        return Err(Error::InvalidState(
            "cannot merge two zero amplitudes".into(),
        ));
    }
    Ok(c2.atan2(c1))
}

fn transform(x: &OnConfig, cnots: &[(usize, usize)]) -> OnConfig {
    cnots
        .iter()
        .fold(*x, |y, &(c, t)| if y.get(c) { y.flipped(t) } else { y })
}

/// Smallest control set found by greedy cover then pruning: qubits other than
/// the pivot, with the survivor's values, that exclude every string in `others`.
fn distinguishing_controls(survivor: &OnConfig, pivot: usize, others: &[OnConfig]) -> Vec<Control> {
    let n = survivor.len();
    let mut uncovered: Vec<&OnConfig> = others.iter().collect();
    let mut chosen: Vec<usize> = Vec::new();
    while !uncovered.is_empty() {
        let best = (0..n)
            .filter(|&q| q != pivot && !chosen.contains(&q))
            .max_by_key(|&q| {
                let cover = uncovered
                    .iter()
                    .filter(|z| z.get(q) != survivor.get(q))
                    .count();
                (cover, std::cmp::Reverse(q))
            })
            .expect("strings differing off the pivot always exist");
        chosen.push(best);
        uncovered.retain(|z| z.get(best) == survivor.get(best));
    }
    // Drop controls made redundant by later picks.
    let mut k = 0;
    while k < chosen.len() {
        let trial: Vec<usize> = chosen.iter().copied().filter(|&q| q != chosen[k]).collect();
        let still_covers = others
            .iter()
            .all(|z| trial.iter().any(|&q| z.get(q) != survivor.get(q)));
        if still_covers {
            chosen = trial;
        } else {
            k += 1;
        }
    }
    chosen.sort_unstable();
    chosen.into_iter().map(|q| (q, survivor.get(q))).collect()
}

fn merge_candidate(a: &OnConfig, b: &OnConfig, support: &[OnConfig]) -> MergeStep {
    let differing = xor_support(a, b).expect("equal lengths");
    let pivot = differing[0];
    let (survivor, merged) = if a.get(pivot) { (*b, *a) } else { (*a, *b) };
    let cnots: Vec<(usize, usize)> = differing[1..].iter().map(|&t| (pivot, t)).collect();
    let others: Vec<OnConfig> = support
        .iter()
        .filter(|z| *z != a && *z != b)
        .map(|z| transform(z, &cnots))
        .collect();
    let controls = distinguishing_controls(&survivor, pivot, &others);
    MergeStep {
        merged,
        survivor,
        differing,
        pivot,
        cnots,
        controls,
    }
}

/// Chooses the pair to merge from a canonically sorted support: fewest
/// differing qubits, then fewest controls, then lexicographic order.
pub fn select_merge_pair(support: &[OnConfig]) -> Result<MergeStep> {
    if support.len() < 2 {
        return Err(Error::InvalidState(
            "merging needs at least two strings".into(),
        ));
    }
    let mut sorted = support.to_vec();
    sorted.sort();
    let mut best: Option<((usize, usize, OnConfig, OnConfig), MergeStep)> = None;
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let (a, b) = (sorted[i], sorted[j]);
            let h = hamming(&a, &b)?;
            if let Some(((bh, _, _, _), _)) = &best {
                if h > *bh {
                    continue;
                }
            }
            let step = merge_candidate(&a, &b, &sorted);
            let key = (h, step.controls.len(), a, b);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, step));
            }
        }
    }
    Ok(best.expect("at least one pair").1)
}

/// Merge sequence for a set of strings; independent of coefficients and input order.
pub fn plan_ssp(configs: &[OnConfig]) -> Result<SspPlan> {
    let Some(first) = configs.first() else {
        return Err(Error::InvalidState("empty support".into()));
    };
    let n = first.len();
    let mut support: Vec<OnConfig> = configs.to_vec();
    support.sort();
    support.dedup();
    if support.len() != configs.len() {
        return Err(Error::InvalidState("duplicate configurations".into()));
    }
    if support.iter().any(|x| x.len() != n) {
        return Err(Error::LengthMismatch(n, 0));
    }
    let mut steps = Vec::with_capacity(support.len() - 1);
    while support.len() > 1 {
        let step = select_merge_pair(&support)?;
        support = support
            .iter()
            .filter(|z| **z != step.merged)
            .map(|z| transform(z, &step.cnots))
            .collect();
        support.sort();
        steps.push(step);
    }
    Ok(SspPlan {
        n_qubits: n,
        steps,
        final_x: support[0].occupied(),
    })
}

impl SspPlan {
    /// Merge angles for the given coefficients, one per step.
    pub fn angles(&self, spec: &StateSpec) -> Result<Vec<f64>> {
        let mut amp: BTreeMap<OnConfig, f64> =
            spec.entries().iter().map(|(c, x)| (*x, *c)).collect();
        let mut out = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            let c1 = amp.get(&step.survivor).copied();
            let c2 = amp.remove(&step.merged);
            let (Some(c1), Some(c2)) = (c1, c2) else {
                return Err(Error::InvalidState(
                    "spec does not match the merge plan".into(),
                ));
            };
            let beta = merge_angle(c1, c2)?;
            out.push(beta);
            amp = amp
                .into_iter()
                .map(|(z, c)| (transform(&z, &step.cnots), c))
                .collect();
            amp.insert(step.survivor, c1.hypot(c2));
        }
        Ok(out)
    }

    /// Gates of `U†`, grouped per merge step, with the final X layer as the last group.
    pub fn adjoint_steps(&self, angles: &[Angle]) -> Result<Vec<Vec<Gate>>> {
        if angles.len() != self.steps.len() {
            return Err(Error::LengthMismatch(self.steps.len(), angles.len()));
        }
        let mut groups = Vec::with_capacity(self.steps.len() + 1);
        for (step, beta) in self.steps.iter().zip(angles) {
            let mut g: Vec<Gate> = step.cnots.iter().map(|&(c, t)| Gate::cnot(c, t)).collect();
            g.push(Gate::ry(step.pivot, beta.scaled(-2.0)).control_wrap(&step.controls)?);
            groups.push(g);
        }
        groups.push(self.final_x.iter().map(|&q| Gate::x(q)).collect());
        Ok(groups)
    }

    /// Preparation circuit `U` with merge angles `β` (Ry angle `2β` in `U`).
    pub fn circuit(&self, angles: &[Angle]) -> Result<Circuit> {
        let groups = self.adjoint_steps(angles)?;
        let mut c = Circuit::new(self.n_qubits);
        for g in groups.iter().rev().flat_map(|g| g.iter().rev()) {
            c.push(g.inverse().expect("only X, CNOT and Ry in U†"))?;
        }
        Ok(c)
    }
}

pub fn synthesize_ssp(spec: &StateSpec) -> Result<Circuit> {
    let plan = plan_ssp(&spec.configs())?;
    let angles = plan.angles(spec)?;
    plan.circuit(&angles.into_iter().map(Angle::Const).collect::<Vec<_>>())
}

/// SSP circuit with one symbolic merge angle per step, named `{prefix}{k}`.
pub fn synthesize_ssp_symbolic(configs: &[OnConfig], prefix: &str) -> Result<Circuit> {
    let plan = plan_ssp(configs)?;
    let angles: Vec<Angle> = (0..plan.steps.len())
        .map(|k| Angle::param(format!("{prefix}{k}")))
        .collect();
    plan.circuit(&angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn cfgs(list: &[&str]) -> Vec<OnConfig> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn merge_angles() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((merge_angle(h, h).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(merge_angle(0.3, 0.0).unwrap(), 0.0);
        let r = 0.96814f64.hypot(0.25045);
        assert!((merge_angle(0.96814, -0.25045).unwrap() - (-0.25045 / r).asin()).abs() < 1e-15);
        assert!(merge_angle(0.0, 0.0).is_err());
    }

    #[test]
    fn pair_selection() {
        let s = select_merge_pair(&cfgs(&["00", "11"])).unwrap();
        assert_eq!(
            (s.survivor, s.merged, s.pivot),
            (cfgs(&["00"])[0], cfgs(&["11"])[0], 0)
        );
        assert!(select_merge_pair(&cfgs(&["0000"])).is_err());
        let s = select_merge_pair(&cfgs(&["1100", "1001", "0110", "0011"])).unwrap();
        assert_eq!(s.differing.len(), 2);
    }

    #[test]
    fn single_string() {
        let plan = plan_ssp(&cfgs(&["1100"])).unwrap();
        assert!(plan.steps.is_empty());
        assert_eq!(plan.final_x, vec![0, 1]);
    }

    #[test]
    fn two_string_plan_has_three_cnots() {
        let plan = plan_ssp(&cfgs(&["10110100", "01111000"])).unwrap();
        assert_eq!(plan.steps.len(), 1);
        assert_eq!(plan.steps[0].cnots.len(), 3);
        assert!(plan.steps[0].controls.is_empty());
    }
}
