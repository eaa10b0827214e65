//! Environment-config JSON: decode arbitrary bytes without panicking, and
//! anything accepted must already satisfy its own validation.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(cfg) = lalpha_core::io::read_riverswim_config(data) {
        cfg.validate().unwrap();
        let json = serde_json::to_vec(&cfg).unwrap();
        lalpha_core::io::read_riverswim_config(json.as_slice()).unwrap();
    }
});
