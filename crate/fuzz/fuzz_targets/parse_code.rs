#![no_main]

use libfuzzer_sys::fuzz_target;
use qkit::gf2codes::{format_code, parse_code};

fuzz_target!(|data: &str| {
    if let Ok(code) = parse_code(data) {
        // Whatever parses must survive a round trip unchanged.
        let again = parse_code(&format_code(&code)).expect("formatted code reparses");
        assert_eq!(again.n(), code.n());
        assert_eq!(again.k(), code.k());
    }
});
