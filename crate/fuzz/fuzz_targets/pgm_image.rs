#![no_main]

use ecoc::harness::ingest::encode_pgm;
use ecoc::harness::parse_pgm;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(image) = parse_pgm(data) {
        assert_eq!(image.pixels.len(), image.width * image.height);
        assert_eq!(parse_pgm(&encode_pgm(&image)).expect("re-encoded image parses"), image);
    }
});
