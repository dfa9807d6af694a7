//! Text and JSON formats: Hamiltonians, state specs, excitation lists,
//! circuits and versioned reports.
//!
//! Text formats are line based; `#` starts a comment and blank lines are
//! ignored. Bit strings and Pauli words put qubit 0 leftmost.

use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use crate::circuit::{Angle, Circuit, Gate, GateKind};
use crate::config::{ExcitationOp, OnConfig, StateSpec};
use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliWord};

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "mcprep/1";

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_coefficient(line: usize, s: &str) -> Result<f64> {
    let s = s.replace('\u{2212}', "-");
    let v: f64 = s.parse().map_err(|_| {
        if s.ends_with(['i', 'j']) {
            Error::parse(line, format!("non-real coefficient {s:?}"))
        } else {
            Error::parse(line, format!("bad coefficient {s:?}"))
        }
    })?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite coefficient {s:?}")));
    }
    Ok(v)
}

fn two_fields(line: usize, text: &str) -> Result<(&str, &str)> {
    let mut it = text.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(Error::parse(line, "expected \"<coefficient> <word>\"")),
    }
}

/// Parses `<coefficient> <Pauli word>` lines; repeated words are summed.
pub fn parse_hamiltonian(text: &str) -> Result<PauliSum> {
    let mut sum: Option<PauliSum> = None;
    for (line, body) in content_lines(text) {
        let (c, w) = two_fields(line, body)?;
        let c = parse_coefficient(line, c)?;
        let w: PauliWord = w
            .parse()
            .map_err(|e: Error| Error::parse(line, e.to_string()))?;
        let s = sum.get_or_insert_with(|| PauliSum::new(w.n_qubits()));
        if s.n_qubits() != w.n_qubits() {
            return Err(Error::parse(
                line,
                format!(
                    "word has {} qubits, expected {}",
                    w.n_qubits(),
                    s.n_qubits()
                ),
            ));
        }
        s.add_term(c, w)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        if !s.coefficient(&w).is_finite() {
            return Err(Error::parse(line, format!("coefficient of {w} overflows")));
        }
    }
    let mut sum = sum.ok_or_else(|| Error::parse(0, "no Hamiltonian terms"))?;
    sum.simplify();
    Ok(sum)
}

/// One term per line with 17 significant digits. An empty sum renders as a
/// zero identity term so the register size survives the round trip.
pub fn render_hamiltonian(h: &PauliSum) -> String {
    if h.is_empty() {
        return format!("0 {}\n", PauliWord::identity(h.n_qubits()));
    }
    h.terms().map(|(w, c)| format!("{c:.16e} {w}\n")).collect()
}

/// A parsed state file with its directives.
#[derive(Clone, Debug, PartialEq)]
pub struct StateFile {
    pub spec: StateSpec,
    /// `ordered`: keep the file's first entry as the GR reference.
    pub ordered: bool,
    /// `normalize`: coefficients were rescaled to unit norm on input.
    pub normalize: bool,
}

/// Parses `<coefficient> <bit string>` lines with optional `ordered` and
/// `normalize` directive lines.
pub fn parse_state_spec(text: &str) -> Result<StateFile> {
    let (mut ordered, mut normalize) = (false, false);
    let mut entries: Vec<(f64, OnConfig)> = Vec::new();
    for (line, body) in content_lines(text) {
        match body {
            "ordered" => ordered = true,
            "normalize" => normalize = true,
            _ => {
                let (c, x) = two_fields(line, body)?;
                let c = parse_coefficient(line, c)?;
                let x: OnConfig = x
                    .parse()
                    .map_err(|e: Error| Error::parse(line, e.to_string()))?;
                if let Some((_, y)) = entries.first() {
                    if y.len() != x.len() {
                        return Err(Error::parse(
                            line,
                            format!("bit string has {} qubits, expected {}", x.len(), y.len()),
                        ));
                    }
                }
                entries.push((c, x));
            }
        }
    }
    let Some((_, first)) = entries.first() else {
        return Err(Error::parse(0, "no state entries"));
    };
    let n = first.len();
    let spec = if normalize {
        StateSpec::normalized(n, entries)?
    } else {
        StateSpec::new(n, entries)?
    };
    Ok(StateFile {
        spec,
        ordered,
        normalize,
    })
}

pub fn render_state_spec(spec: &StateSpec, ordered: bool) -> String {
    let mut out = String::new();
    if ordered {
        out.push_str("ordered\n");
    }
    for (c, x) in spec.entries() {
        out.push_str(&format!("{c:.16e} {x}\n"));
    }
    out
}

fn index_list(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::parse(line, format!("bad orbital index {:?}", t.trim())))
        })
        .collect()
}

/// Parses excitation lines `a[,b] -> c[,d]`: annihilate `a, b`, create `c, d`.
pub fn parse_excitations(text: &str) -> Result<Vec<ExcitationOp>> {
    content_lines(text)
        .map(|(line, body)| {
            let (from, to) = body
                .split_once("->")
                .ok_or_else(|| Error::parse(line, "expected \"a,b -> c,d\""))?;
            ExcitationOp::new(index_list(line, from)?, index_list(line, to)?)
                .map_err(|e| Error::parse(line, e.to_string()))
        })
        .collect()
}

pub fn render_excitations(ops: &[ExcitationOp]) -> String {
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    ops.iter()
        .map(|op| format!("{} -> {}\n", join(op.annihilate()), join(op.create())))
        .collect()
}

fn angle_to_json(a: &Angle) -> Value {
    match a {
        Angle::Const(v) => json!(v),
        Angle::Param { name, scale } if *scale == 1.0 => json!(name),
        Angle::Param { name, scale } => json!(format!("{scale}*{name}")),
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn angle_from_json(v: &Value) -> Result<Angle> {
    match v {
        Value::Number(n) => {
            let x = n.as_f64().filter(|x| x.is_finite());
            x.map(Angle::Const)
                .ok_or_else(|| Error::Json(format!("angle {n} out of range")))
        }
        Value::String(s) => {
            let (scale, name) = match s.split_once('*') {
                Some((k, name)) => {
                    let k: f64 = k
                        .trim()
                        .parse()
                        .map_err(|_| Error::Json(format!("bad angle scale in {s:?}")))?;
                    (k, name.trim())
                }
                None => (1.0, s.trim()),
            };
            if !valid_name(name) || !scale.is_finite() {
                return Err(Error::Json(format!("bad symbolic angle {s:?}")));
            }
            Ok(Angle::Param {
                name: name.to_string(),
                scale,
            })
        }
        _ => Err(Error::Json(format!(
            "angle must be a number or string, got {v}"
        ))),
    }
}

/// Circuit as JSON. Numeric angles are in radians, with an informational
/// `angle_pi` copy in units of π that parsing ignores. A symbolic angle is
/// `"name"` or `"k*name"`, denoting `k` times the parameter. PhasedX carries `[α, β]`.
pub fn circuit_to_json(c: &Circuit) -> Value {
    let gates: Vec<Value> = c
        .gates()
        .iter()
        .map(|g| {
            let mut m = Map::new();
            m.insert("kind".into(), json!(g.kind.name()));
            m.insert("targets".into(), json!(g.targets));
            let controls: Vec<Value> = g
                .controls
                .iter()
                .map(|&(q, s)| json!([q, u8::from(s)]))
                .collect();
            m.insert("controls".into(), Value::Array(controls));
            match g.angles.as_slice() {
                [] => {}
                [a] => {
                    m.insert("angle".into(), angle_to_json(a));
                }
                many => {
                    m.insert("angle".into(), many.iter().map(angle_to_json).collect());
                }
            }
            let in_pi: Option<Vec<f64>> =
                g.angles.iter().map(|a| a.value().map(|v| v / PI)).collect();
            match in_pi.as_deref() {
                None | Some([]) => {}
                Some([a]) => {
                    m.insert("angle_pi".into(), json!(a));
                }
                Some(many) => {
                    m.insert("angle_pi".into(), json!(many));
                }
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "n_qubits": c.n_qubits(),
        "parameters": c.parameters(),
        "gates": gates,
    })
}

fn as_index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::Json(format!("{what} must be a non-negative integer, got {v}")))
}

fn gate_from_json(v: &Value) -> Result<Gate> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Json("gate must be an object".into()))?;
    let kind_name = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Json("gate needs a string \"kind\"".into()))?;
    let kind = GateKind::from_name(kind_name)
        .ok_or_else(|| Error::Json(format!("unknown gate kind {kind_name:?}")))?;
    let targets = obj
        .get("targets")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json("gate needs a \"targets\" array".into()))?
        .iter()
        .map(|t| as_index(t, "target"))
        .collect::<Result<Vec<_>>>()?;
    let controls = match obj.get("controls") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(list)) => list
            .iter()
            .map(|c| match c.as_array().map(Vec::as_slice) {
                Some([q, s]) => {
                    let q = as_index(q, "control qubit")?;
                    match s.as_u64() {
                        Some(0) => Ok((q, false)),
                        Some(1) => Ok((q, true)),
                        _ => Err(Error::Json(format!(
                            "control state must be 0 or 1, got {s}"
                        ))),
                    }
                }
                _ => Err(Error::Json(format!(
                    "control must be [qubit, state], got {c}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?,
        Some(other) => return Err(Error::Json(format!("bad controls {other}"))),
    };
    let angles = match obj.get("angle") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(list)) => list.iter().map(angle_from_json).collect::<Result<_>>()?,
        Some(a) => vec![angle_from_json(a)?],
    };
    Gate::new(kind, targets, controls, angles)
}

pub fn circuit_from_value(v: &Value) -> Result<Circuit> {
    let n = v
        .get("n_qubits")
        .map(|x| as_index(x, "n_qubits"))
        .transpose()?
        .ok_or_else(|| Error::Json("missing \"n_qubits\"".into()))?;
    let gates = v
        .get("gates")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json("missing \"gates\" array".into()))?;
    let gates = gates
        .iter()
        .map(gate_from_json)
        .collect::<Result<Vec<_>>>()?;
    Circuit::from_gates(n, gates)
}

pub fn circuit_from_json(text: &str) -> Result<Circuit> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    circuit_from_value(&v)
}

/// Wraps a report body with the schema tag and command name.
pub fn report(command: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    if let Value::Object(b) = body {
        m.extend(b);
    } else {
        m.insert("result".into(), body);
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(parse_hamiltonian("1.0 ZZ\n0.5 XI").unwrap().len(), 2);
        let empty = parse_hamiltonian("1.0 ZZ\n\u{2212}1.0 ZZ").unwrap();
        assert!(empty.is_empty());
        assert_eq!(
            parse_hamiltonian(&render_hamiltonian(&empty))
                .unwrap()
                .n_qubits(),
            2
        );
        assert!(matches!(
            parse_hamiltonian("0.25 QX"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_hamiltonian("1 ZZ\n1 Z"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_hamiltonian("1+2j ZZ"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn hamiltonian_round_trip_is_exact() {
        let h = parse_hamiltonian("# comment\n0.1 XY\n-0.30000000000000004 ZI # trailing\n1e-3 YY")
            .unwrap();
        assert_eq!(parse_hamiltonian(&render_hamiltonian(&h)).unwrap(), h);
    }

    #[test]
    fn state_spec_examples() {
        let f = parse_state_spec("1.0 1100").unwrap();
        assert_eq!(f.spec.len(), 1);
        assert!(parse_state_spec("0.5 1100\n0.5 0011").is_err());
        let row =
            "normalize\n0.9690 11110000\n-0.2345 11001100\n0.0546 10011001\n0.0547 01100110\n";
        let f = parse_state_spec(row).unwrap();
        assert_eq!((f.spec.len(), f.spec.weight(), f.normalize), (4, 4, true));
        let again = parse_state_spec(&render_state_spec(&f.spec, true)).unwrap();
        assert!(again.ordered);
        assert_eq!(again.spec, f.spec);
    }

    #[test]
    fn excitation_round_trip() {
        let ops = parse_excitations("0 -> 2\n0,1 -> 2,3\n").unwrap();
        assert_eq!(ops.len(), 2);
        assert_eq!(parse_excitations(&render_excitations(&ops)).unwrap(), ops);
        assert!(matches!(
            parse_excitations("0,1 -> 2"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn circuit_json_round_trip() {
        let mut c = Circuit::new(3);
        c.push(Gate::x(0)).unwrap();
        c.push(
            Gate::g2([0, 2], Angle::param("t0"))
                .control_wrap(&[(1, true)])
                .unwrap(),
        )
        .unwrap();
        c.push(Gate::ry(1, Angle::param("t1").scaled(-2.0)))
            .unwrap();
        c.push(Gate::phased_x(2, 0.5, PI / 2.0)).unwrap();
        c.push(Gate::cnot(2, 0).control_wrap(&[(1, false)]).unwrap())
            .unwrap();
        let v = circuit_to_json(&c);
        assert_eq!(v["gates"][3]["angle"], json!([0.5, PI / 2.0]));
        assert_eq!(v["gates"][3]["angle_pi"], json!([0.5 / PI, 0.5]));
        let back = circuit_from_value(&v).unwrap();
        assert_eq!(back.parameters(), vec!["t0".to_string(), "t1".to_string()]);
        assert_eq!(circuit_to_json(&back), v);
        assert!(circuit_from_json(
            "{\"n_qubits\": 1, \"gates\": [{\"kind\": \"CNOT\", \"targets\": [0]}]}"
        )
        .is_err());
    }

    #[test]
    fn report_carries_schema() {
        let r = report("spectrum", json!({"values": [1.0]}));
        assert_eq!(r["schema"], SCHEMA);
        assert_eq!(r["command"], "spectrum");
    }
}
