#![no_main]

use libfuzzer_sys::fuzz_target;
use mcprep::io::{parse_state_spec, render_state_spec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = parse_state_spec(text) else {
        return;
    };
    let again = parse_state_spec(&render_state_spec(&file.spec, file.ordered))
        .expect("rendered spec parses");
    assert_eq!(file.spec, again.spec);
    assert_eq!(file.ordered, again.ordered);
});
