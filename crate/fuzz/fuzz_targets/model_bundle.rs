#![no_main]

use ecoc::harness::ModelBundle;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(bundle) = ModelBundle::decode(data) {
        assert_eq!(bundle.encode(), data);
    }
});
