#![no_main]

use expcone::parse::parse_point;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_point(s) {
        assert!(p.is_finite());
        let again = parse_point(&format!("{:?},{:?},{:?}", p.x, p.y, p.z)).unwrap();
        assert_eq!(again, p);
        // Projection must not panic on any finite input.
        let _ = expcone::geometry::project(p);
    }
});
