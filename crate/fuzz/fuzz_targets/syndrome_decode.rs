#![no_main]

use libfuzzer_sys::fuzz_target;
use qkit::gf2codes::{BitString, LinearCode};

// First byte picks the code and the radius, the rest is the received word.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let code = match sel % 4 {
        0 => LinearCode::repetition3(),
        1 => LinearCode::parity3(),
        2 => LinearCode::hamming7(),
        _ => LinearCode::simplex7(),
    };
    let bits: Vec<bool> = rest.iter().map(|b| b & 1 == 1).collect();
    let Ok(decoder) = code.decoder(usize::from(sel >> 6)) else { return };
    if let Ok(Some(d)) = decoder.decode(&BitString::from_bools(&bits)) {
        assert!(code.contains(&d.codeword).expect("decoded word has block length"));
    }
});
