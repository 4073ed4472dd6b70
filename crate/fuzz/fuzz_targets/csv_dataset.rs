#![no_main]

use ecoc::harness::parse_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(dataset) = parse_csv(text) {
        assert!(dataset.features().iter().flatten().all(|v| v.is_finite()));
        assert!(dataset.labels().iter().all(|&l| l < dataset.class_count()));
    }
});
