#![no_main]

use expcone::parse::parse_block_point;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(b) = parse_block_point(s) {
        assert_eq!(b.m(), s.split(';').count());
        assert_eq!(b.dim(), 3 * b.m());
        assert!(b.is_finite());
    }
});
