//! The CSV reader must return `Err`, never panic, on arbitrary bytes; when it
//! accepts, the round-tripped serialization must parse back to the same shape.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(samples) = lalpha_core::io::read_samples_csv(data) {
        let mut buf = Vec::new();
        lalpha_core::io::write_samples_csv(&mut buf, &samples).unwrap();
        let back = lalpha_core::io::read_samples_csv(buf.as_slice()).unwrap();
        assert_eq!(back.observations().len(), samples.observations().len());
        assert_eq!(back.space().dim(), samples.space().dim());
    }
});
