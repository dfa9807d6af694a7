//! Gate-level circuit representation.
//!
//! Gates carry their target qubits, an optional list of external controls
//! (qubit, required state) and zero, one or two angles. Angles are radians
//! internally and may be symbolic (`scale * name`) until bound.

mod compile;
mod decompose;
pub mod matrix;
mod resources;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use compile::{compile, compile_with, peephole, CompileOptions};
pub use decompose::{
    decompose_gate, lower_gate, mc_rotation, mcx, Axis, ControlStyle, GRAY_CODE_LIMIT,
};
pub use resources::{count_resources, ResourceCount};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Angle {
    Const(f64),
    Param { name: String, scale: f64 },
}

impl Angle {
    pub fn param(name: impl Into<String>) -> Self {
        Angle::Param {
            name: name.into(),
            scale: 1.0,
        }
    }

    #[must_use]
    pub fn scaled(&self, k: f64) -> Self {
        match self {
            Angle::Const(v) => Angle::Const(v * k),
            Angle::Param { name, scale } => Angle::Param {
                name: name.clone(),
                scale: scale * k,
            },
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Angle::Const(v) => Some(*v),
            Angle::Param { .. } => None,
        }
    }

    pub fn param_name(&self) -> Option<&str> {
        match self {
            Angle::Param { name, .. } => Some(name),
            Angle::Const(_) => None,
        }
    }

    pub fn bind(&self, values: &BTreeMap<String, f64>) -> Result<Angle> {
        match self {
            Angle::Const(v) => Ok(Angle::Const(*v)),
            Angle::Param { name, scale } => values
                .get(name)
                .map(|v| Angle::Const(scale * v))
                .ok_or_else(|| Error::UnboundParameter(name.clone())),
        }
    }
}

impl From<f64> for Angle {
    fn from(v: f64) -> Self {
        Angle::Const(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Ry,
    Rz,
    PhasedX,
    Cnot,
    ZZMax,
    Swap,
    G2,
    G4,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::X,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::PhasedX,
        GateKind::Cnot,
        GateKind::ZZMax,
        GateKind::Swap,
        GateKind::G2,
        GateKind::G4,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::Ry | GateKind::Rz | GateKind::PhasedX => 1,
            GateKind::Cnot | GateKind::ZZMax | GateKind::Swap | GateKind::G2 => 2,
            GateKind::G4 => 4,
        }
    }

    pub fn n_angles(self) -> usize {
        match self {
            GateKind::Ry | GateKind::Rz | GateKind::G2 | GateKind::G4 => 1,
            GateKind::PhasedX => 2,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Ry => "Ry",
            GateKind::Rz => "Rz",
            GateKind::PhasedX => "PhasedX",
            GateKind::Cnot => "CNOT",
            GateKind::ZZMax => "ZZMax",
            GateKind::Swap => "SWAP",
            GateKind::G2 => "G2",
            GateKind::G4 => "G4",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| {
            k.name().eq_ignore_ascii_case(s)
                || (s.eq_ignore_ascii_case("CX") && *k == GateKind::Cnot)
        })
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// External control: the gate acts only when `qubit` holds `state`.
pub type Control = (usize, bool);

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<Control>,
    pub angles: Vec<Angle>,
}

impl Gate {
    pub fn new(
        kind: GateKind,
        targets: Vec<usize>,
        controls: Vec<Control>,
        angles: Vec<Angle>,
    ) -> Result<Self> {
        let g = Self {
            kind,
            targets,
            controls,
            angles,
        };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{} takes {} targets, got {}",
                self.kind,
                self.kind.arity(),
                self.targets.len()
            )));
        }
        if self.angles.len() != self.kind.n_angles() {
            return Err(Error::InvalidGate(format!(
                "{} takes {} angles, got {}",
                self.kind,
                self.kind.n_angles(),
                self.angles.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for q in self.qubits() {
            if !seen.insert(q) {
                return Err(Error::InvalidGate(format!(
                    "{} uses qubit {q} more than once",
                    self.kind
                )));
            }
        }
        for a in &self.angles {
            if let Angle::Const(v) = a {
                if !v.is_finite() {
                    return Err(Error::InvalidGate("non-finite angle".into()));
                }
            }
        }
        Ok(())
    }

    // Infallible constructors for primitives; callers guarantee distinct qubits.
    pub fn x(q: usize) -> Self {
        Self::raw(GateKind::X, vec![q], vec![])
    }

    pub fn ry(q: usize, theta: impl Into<Angle>) -> Self {
        Self::raw(GateKind::Ry, vec![q], vec![theta.into()])
    }

    pub fn rz(q: usize, theta: impl Into<Angle>) -> Self {
        Self::raw(GateKind::Rz, vec![q], vec![theta.into()])
    }

    pub fn phased_x(q: usize, alpha: impl Into<Angle>, beta: impl Into<Angle>) -> Self {
        Self::raw(GateKind::PhasedX, vec![q], vec![alpha.into(), beta.into()])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        debug_assert_ne!(control, target);
        Self::raw(GateKind::Cnot, vec![control, target], vec![])
    }

    pub fn zz_max(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b);
        Self::raw(GateKind::ZZMax, vec![a, b], vec![])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b);
        Self::raw(GateKind::Swap, vec![a, b], vec![])
    }

    pub fn g2(targets: [usize; 2], theta: impl Into<Angle>) -> Self {
        Self::raw(GateKind::G2, targets.to_vec(), vec![theta.into()])
    }

    pub fn g4(targets: [usize; 4], theta: impl Into<Angle>) -> Self {
        Self::raw(GateKind::G4, targets.to_vec(), vec![theta.into()])
    }

    fn raw(kind: GateKind, targets: Vec<usize>, angles: Vec<Angle>) -> Self {
        Self {
            kind,
            targets,
            controls: Vec::new(),
            angles,
        }
    }

    /// Adds external controls. Fails on overlap with targets or existing controls.
    pub fn control_wrap(&self, controls: &[Control]) -> Result<Self> {
        let mut g = self.clone();
        g.controls.extend_from_slice(controls);
        g.check()?;
        Ok(g)
    }

    /// Control qubits followed by targets.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls
            .iter()
            .map(|c| c.0)
            .chain(self.targets.iter().copied())
    }

    pub fn n_qubits_touched(&self) -> usize {
        self.controls.len() + self.targets.len()
    }

    pub fn is_parameterized(&self) -> bool {
        self.angles.iter().any(|a| matches!(a, Angle::Param { .. }))
    }

    pub fn angle(&self, i: usize) -> Option<f64> {
        self.angles.get(i).and_then(Angle::value)
    }

    pub fn bind(&self, values: &BTreeMap<String, f64>) -> Result<Self> {
        let angles = self
            .angles
            .iter()
            .map(|a| a.bind(values))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            angles,
            ..self.clone()
        })
    }

    /// Inverse gate with the same structure. `None` for ZZMax, whose inverse
    /// is not a single gate of this IR.
    pub fn inverse(&self) -> Option<Self> {
        let mut g = self.clone();
        match self.kind {
            GateKind::Ry | GateKind::Rz | GateKind::G2 | GateKind::G4 | GateKind::PhasedX => {
                g.angles[0] = g.angles[0].scaled(-1.0);
            }
            GateKind::ZZMax => return None,
            GateKind::X | GateKind::Cnot | GateKind::Swap => {}
        }
        Some(g)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.angles.is_empty() {
            let a: Vec<String> = self
                .angles
                .iter()
                .map(|a| match a {
                    Angle::Const(v) => format!("{v:.6}"),
                    Angle::Param { name, scale } => format!("{scale}*{name}"),
                })
                .collect();
            write!(f, "({})", a.join(", "))?;
        }
        write!(f, " {:?}", self.targets)?;
        if !self.controls.is_empty() {
            let c: Vec<String> = self
                .controls
                .iter()
                .map(|(q, s)| format!("{q}={}", u8::from(*s)))
                .collect();
            write!(f, " if {}", c.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.check()?;
        if let Some(q) = g.qubits().find(|&q| q >= self.n_qubits) {
            return Err(Error::InvalidGate(format!(
                "{} touches qubit {q} outside register of {}",
                g.kind, self.n_qubits
            )));
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::LengthMismatch(self.n_qubits, other.n_qubits));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Symbolic parameter names in order of first appearance.
    pub fn parameters(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for g in &self.gates {
            for a in &g.angles {
                if let Some(n) = a.param_name() {
                    if seen.insert(n.to_string()) {
                        out.push(n.to_string());
                    }
                }
            }
        }
        out
    }

    pub fn is_bound(&self) -> bool {
        !self.gates.iter().any(Gate::is_parameterized)
    }

    /// Substitutes values for every symbolic angle. The assignment must name
    /// exactly the circuit's parameters.
    pub fn bind_parameters(&self, values: &BTreeMap<String, f64>) -> Result<Circuit> {
        let params = self.parameters();
        if let Some(extra) = values.keys().find(|k| !params.contains(k)) {
            return Err(Error::UnknownParameter(extra.clone()));
        }
        if let Some(missing) = params.iter().find(|p| !values.contains_key(*p)) {
            return Err(Error::UnboundParameter(missing.clone()));
        }
        let gates = self
            .gates
            .iter()
            .map(|g| g.bind(values))
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit {
            n_qubits: self.n_qubits,
            gates,
        })
    }

    /// Binds parameters positionally, in [`Circuit::parameters`] order.
    pub fn bind_values(&self, values: &[f64]) -> Result<Circuit> {
        let params = self.parameters();
        if params.len() != values.len() {
            return Err(Error::LengthMismatch(params.len(), values.len()));
        }
        self.bind_parameters(&params.into_iter().zip(values.iter().copied()).collect())
    }

    /// Adjoint circuit: reversed order, each gate inverted.
    pub fn inverse(&self) -> Result<Circuit> {
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| {
                g.inverse().ok_or_else(|| {
                    Error::InvalidGate("inverse of ZZMax is not representable".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit {
            n_qubits: self.n_qubits,
            gates,
        })
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "circuit on {} qubits, {} gates",
            self.n_qubits,
            self.gates.len()
        )?;
        for g in &self.gates {
            writeln!(f, "  {g}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateSet {
    /// ZZMax, PhasedX, Rz.
    ZzNative,
    /// CNOT, Ry, Rz, X.
    CxNative,
}

impl GateSet {
    pub fn contains(self, kind: GateKind) -> bool {
        match self {
            GateSet::ZzNative => matches!(kind, GateKind::ZZMax | GateKind::PhasedX | GateKind::Rz),
            GateSet::CxNative => {
                matches!(
                    kind,
                    GateKind::Cnot | GateKind::Ry | GateKind::Rz | GateKind::X
                )
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateSet::ZzNative => "zz",
            GateSet::CxNative => "cx",
        }
    }
}

impl fmt::Display for GateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GateSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zz" | "zz-native" | "zznative" => Ok(GateSet::ZzNative),
            "cx" | "cx-native" | "cxnative" => Ok(GateSet::CxNative),
            _ => Err(Error::InvalidGate(format!("unknown gate set {s:?}"))),
        }
    }
}
