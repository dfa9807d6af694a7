mod common;

use mcprep::config::ExcitationOp;
use mcprep::io::{
    circuit_from_json, circuit_to_json, parse_excitations, parse_hamiltonian, parse_state_spec,
    render_excitations, render_hamiltonian, render_state_spec,
};
use mcprep::{Angle, Circuit, Error, Gate, GateKind, OnConfig, PauliWord};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn random_angle(rng: &mut impl Rng) -> Angle {
    match rng.gen_range(0..3) {
        0 => Angle::Const(rng.gen_range(-10.0..10.0)),
        1 => Angle::param(format!("p{}", rng.gen_range(0..4))),
        _ => Angle::param(format!("q_{}", rng.gen_range(0..3))).scaled(rng.gen_range(-3.0..3.0)),
    }
}

fn random_circuit(rng: &mut impl Rng) -> Circuit {
    let n = rng.gen_range(4..=7);
    let mut c = Circuit::new(n);
    for _ in 0..rng.gen_range(0..12) {
        let kind = GateKind::ALL[rng.gen_range(0..GateKind::ALL.len())];
        let mut qubits: Vec<usize> = (0..n).collect();
        qubits.shuffle(rng);
        let targets = qubits[..kind.arity()].to_vec();
        let k = rng.gen_range(0..=(n - kind.arity()).min(2));
        let controls = qubits[kind.arity()..kind.arity() + k]
            .iter()
            .map(|&q| (q, rng.gen_bool(0.5)))
            .collect();
        let angles = (0..kind.n_angles()).map(|_| random_angle(rng)).collect();
        c.push(Gate::new(kind, targets, controls, angles).unwrap())
            .unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hamiltonian_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(1..=8);
        let terms = rng.gen_range(0..10);
        let h = common::random_hamiltonian(&mut rng, n, terms);
        let text = render_hamiltonian(&h);
        let back = parse_hamiltonian(&text).unwrap();
        prop_assert_eq!(back.n_qubits(), n);
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(render_hamiltonian(&back), text);
    }

    #[test]
    fn state_file_round_trip(seed in any::<u64>(), ordered in any::<bool>()) {
        let s = common::random_spec(&mut StdRng::seed_from_u64(seed), 1..=12, 8);
        let text = render_state_spec(&s, ordered);
        let back = parse_state_spec(&text).unwrap();
        prop_assert_eq!(back.ordered, ordered);
        prop_assert_eq!(&back.spec, &s);
        prop_assert_eq!(render_state_spec(&back.spec, ordered), text);
    }

    #[test]
    fn excitation_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let ops: Vec<ExcitationOp> = (0..rng.gen_range(0..6))
            .map(|_| {
                let rank = rng.gen_range(1..=2);
                let mut modes: Vec<usize> = (0..12).collect();
                modes.shuffle(&mut rng);
                let (mut a, mut c) = (modes[..rank].to_vec(), modes[rank..2 * rank].to_vec());
                a.sort_unstable();
                c.sort_unstable();
                ExcitationOp::new(a, c).unwrap()
            })
            .collect();
        prop_assert_eq!(parse_excitations(&render_excitations(&ops)).unwrap(), ops);
    }

    #[test]
    fn circuit_json_round_trip(seed in any::<u64>()) {
        let c = random_circuit(&mut StdRng::seed_from_u64(seed));
        let v = circuit_to_json(&c);
        let back = circuit_from_json(&v.to_string()).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(circuit_to_json(&back), v);
    }

    #[test]
    fn word_text_round_trip(s in "[IXYZ]{1,20}") {
        let w: PauliWord = s.parse().unwrap();
        prop_assert_eq!(w.to_string(), s);
    }

    #[test]
    fn bit_string_round_trip(s in "[01]{1,64}") {
        let x: OnConfig = s.parse().unwrap();
        prop_assert_eq!(x.to_string(), s);
        prop_assert_eq!(x.len(), x.to_string().len());
    }
}

#[test]
fn hamiltonian_examples() {
    let h = parse_hamiltonian("1.0 ZZ\n0.5 XI").unwrap();
    assert_eq!(h.len(), 2);
    assert!(parse_hamiltonian("1.0 ZZ\n\u{2212}1.0 ZZ")
        .unwrap()
        .is_empty());
    assert!(matches!(
        parse_hamiltonian("0.25 QX"),
        Err(Error::Parse { line: 1, .. })
    ));
    assert!(matches!(
        parse_hamiltonian("# c\n1 ZZ\n0.5 ZZZ"),
        Err(Error::Parse { line: 3, .. })
    ));
    assert!(matches!(
        parse_hamiltonian("1e308 Z\n1e308 Z"),
        Err(Error::Parse { line: 2, .. })
    ));
    let err = parse_hamiltonian("0.5i ZZ").unwrap_err().to_string();
    assert!(err.contains("non-real"), "{err}");
    assert!(parse_hamiltonian("nan ZZ").is_err());
    let empty = parse_hamiltonian("1 XYZ\n-1 XYZ").unwrap();
    assert_eq!(
        parse_hamiltonian(&render_hamiltonian(&empty))
            .unwrap()
            .n_qubits(),
        3
    );
}

#[test]
fn state_file_examples() {
    let row = "0.9690 11110000\n-0.2345 11001100\n0.0546 10011001\n0.0547 01100110\n";
    assert!(
        parse_state_spec(row).is_err(),
        "printed rows are not normalized to 1e-12"
    );
    let f = parse_state_spec(&format!("normalize\n{row}")).unwrap();
    assert_eq!((f.spec.len(), f.spec.weight()), (4, 4));
    assert!(f.normalize && !f.ordered);
    let single = parse_state_spec("1.0 1100").unwrap();
    assert_eq!(single.spec.len(), 1);
    assert!(parse_state_spec("0.5 1100\n0.5 0011").is_err());
    assert!(parse_state_spec("1.0 1100\n0.0 110").is_err());
    assert!(parse_state_spec("0.6 1100\n0.8 1110").is_err());
    assert!(parse_state_spec("0.6 1100\n0.8 1100").is_err());
    assert!(parse_state_spec("# nothing\n").is_err());
}

#[test]
fn circuit_json_rejects_malformed_input() {
    for bad in [
        "",
        "[]",
        "{\"gates\": []}",
        "{\"n_qubits\": 2}",
        "{\"n_qubits\": 2, \"gates\": [{\"kind\": \"Nope\", \"targets\": [0]}]}",
        "{\"n_qubits\": 2, \"gates\": [{\"kind\": \"X\", \"targets\": [5]}]}",
        "{\"n_qubits\": 2, \"gates\": [{\"kind\": \"Ry\", \"targets\": [0]}]}",
        "{\"n_qubits\": 2, \"gates\": [{\"kind\": \"Ry\", \"targets\": [0], \"angle\": \"2*\"}]}",
        "{\"n_qubits\": 2, \"gates\": [{\"kind\": \"X\", \"targets\": [0], \"controls\": [[0, 1]]}]}",
        "{\"n_qubits\": 2, \"gates\": [{\"kind\": \"X\", \"targets\": [0], \"controls\": [[1, 2]]}]}",
    ] {
        assert!(circuit_from_json(bad).is_err(), "{bad}");
    }
    let ok = "{\"n_qubits\": 2, \"gates\": [{\"kind\": \"cx\", \"targets\": [0, 1]}, {\"kind\": \"Ry\", \"targets\": [1], \"angle\": 1.5}]}";
    let c = circuit_from_json(ok).unwrap();
    assert_eq!(c.gates()[1].angle(0), Some(1.5));
}
