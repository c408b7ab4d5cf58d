#![no_main]

use expcone::frf::FrfExpr;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(psi) = FrfExpr::from_json(s) else { return };
    let back = FrfExpr::from_json(&psi.to_json().unwrap()).unwrap();
    assert_eq!(back, psi);
    for (eps, t) in [(0.0, 0.0), (1e-3, 1.0), (1.0, 10.0)] {
        if let Ok(v) = psi.eval(eps, t) {
            assert!(!v.is_nan());
        }
    }
});
