#![no_main]

use libfuzzer_sys::fuzz_target;
use mcprep::io::{circuit_from_json, circuit_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(c) = circuit_from_json(text) else {
        return;
    };
    let again = circuit_from_json(&circuit_to_json(&c).to_string()).expect("emitted JSON parses");
    assert_eq!(c, again);
});
