#![no_main]

use libfuzzer_sys::fuzz_target;
use mcprep::{OnConfig, PauliWord};

// Bit strings and Pauli words share one target: both are one token per input.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = text.parse::<OnConfig>() {
        assert_eq!(x.to_string().parse::<OnConfig>().unwrap(), x);
    }
    if let Ok(w) = text.parse::<PauliWord>() {
        assert_eq!(w.to_string().parse::<PauliWord>().unwrap(), w);
    }
});
