#![no_main]

use libfuzzer_sys::fuzz_target;
use qkit::bb84sim::ProtocolTranscript;

fuzz_target!(|data: &str| {
    if let Ok(t) = ProtocolTranscript::from_json(data) {
        let _ = t.public_record();
        assert_eq!(ProtocolTranscript::from_json(&t.to_json()).ok(), Some(t));
    }
});
