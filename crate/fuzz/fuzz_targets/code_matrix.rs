#![no_main]

use ecoc::codebook::CodeMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(matrix) = text.parse::<CodeMatrix>() {
        // Accepted matrices survive a text round trip and analyse cleanly.
        let again: CodeMatrix = matrix.to_text().parse().expect("round trip");
        assert_eq!(again, matrix);
        let analysis = matrix.analyze();
        assert!(analysis.min_row_distance >= 1);
    }
});
