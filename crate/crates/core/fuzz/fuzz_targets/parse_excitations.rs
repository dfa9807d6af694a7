#![no_main]

use libfuzzer_sys::fuzz_target;
use mcprep::io::{parse_excitations, render_excitations};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(ops) = parse_excitations(text) else {
        return;
    };
    let again = parse_excitations(&render_excitations(&ops)).expect("rendered list parses");
    assert_eq!(ops, again);
});
