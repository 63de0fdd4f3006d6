#![no_main]

use libfuzzer_sys::fuzz_target;

use seqcol::io;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = io::parse_transverse(text);
});
