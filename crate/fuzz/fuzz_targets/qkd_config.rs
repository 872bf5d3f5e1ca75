#![no_main]

use libfuzzer_sys::fuzz_target;
use qkit::bb84sim::parse_qkd_config;

fuzz_target!(|data: &str| {
    if let Ok(cfg) = parse_qkd_config(data) {
        let _ = cfg.resolve(Some(0));
    }
});
