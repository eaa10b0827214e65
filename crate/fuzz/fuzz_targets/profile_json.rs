//! Smoothness-profile JSON: arbitrary bytes must parse-or-`Err` without
//! panicking, and accepted profiles must survive a write/read round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(profile) = lalpha_core::io::read_profile_json(data) {
        let mut buf = Vec::new();
        lalpha_core::io::write_profile_json(&mut buf, &profile).unwrap();
        lalpha_core::io::read_profile_json(buf.as_slice()).unwrap();
    }
});
