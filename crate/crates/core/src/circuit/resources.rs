use std::collections::BTreeMap;

use serde::Serialize;

use super::{Circuit, Gate};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResourceCount {
    /// Tallies keyed by kind; controlled gates are keyed `C<k>-<kind>`.
    pub counts: BTreeMap<String, usize>,
    pub total: usize,
    /// Gates touching exactly two qubits (targets plus controls).
    pub two_qubit_total: usize,
    /// Gates touching three or more qubits.
    pub multi_qubit_total: usize,
    pub depth: usize,
}

impl ResourceCount {
    pub fn count(&self, key: &str) -> usize {
        self.counts.get(key).copied().unwrap_or(0)
    }
}

pub(crate) fn tally_key(g: &Gate) -> String {
    if g.controls.is_empty() {
        g.kind.name().to_string()
    } else {
        format!("C{}-{}", g.controls.len(), g.kind.name())
    }
}

pub fn count_resources(c: &Circuit) -> ResourceCount {
    let mut r = ResourceCount::default();
    let mut layer = vec![0usize; c.n_qubits()];
    for g in c.gates() {
        *r.counts.entry(tally_key(g)).or_default() += 1;
        r.total += 1;
        match g.n_qubits_touched() {
            2 => r.two_qubit_total += 1,
            k if k > 2 => r.multi_qubit_total += 1,
            _ => {}
        }
        let d = g.qubits().map(|q| layer[q]).max().unwrap_or(0) + 1;
        for q in g.qubits() {
            layer[q] = d;
        }
        r.depth = r.depth.max(d);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty() {
        assert_eq!(count_resources(&Circuit::new(3)), ResourceCount::default());
    }

    #[test]
    fn tallies_and_depth() {
        let mut c = Circuit::new(3);
        for (a, b) in [(0, 1), (1, 2), (0, 1)] {
            c.push(Gate::zz_max(a, b)).unwrap();
        }
        c.push(Gate::phased_x(2, 0.1, 0.2)).unwrap();
        c.push(Gate::phased_x(0, 0.1, 0.2)).unwrap();
        let r = count_resources(&c);
        assert_eq!(r.two_qubit_total, 3);
        assert_eq!(r.count("ZZMax"), 3);
        assert_eq!(r.count("PhasedX"), 2);
        assert_eq!(r.total, 5);
        assert_eq!(r.depth, 4);
        let g = Gate::g2([0, 2], 0.1).control_wrap(&[(1, true)]).unwrap();
        c.push(g).unwrap();
        let r = count_resources(&c);
        assert_eq!(r.count("C1-G2"), 1);
        assert_eq!(r.multi_qubit_total, 1);
    }
}
