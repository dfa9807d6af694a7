#![no_main]

use libfuzzer_sys::fuzz_target;
use mcprep::io::{parse_hamiltonian, render_hamiltonian};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(h) = parse_hamiltonian(text) else {
        return;
    };
    let again = parse_hamiltonian(&render_hamiltonian(&h)).expect("rendered sum parses");
    assert_eq!(h, again);
});
