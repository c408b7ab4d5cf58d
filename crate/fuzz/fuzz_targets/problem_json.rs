#![no_main]

use expcone::feasibility::FeasibilityProblem;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(problem) = FeasibilityProblem::from_json(s) else { return };
    let back = FeasibilityProblem::from_json(&problem.to_json().unwrap()).unwrap();
    assert_eq!(back, problem);
    assert!(problem.l_basis.len() <= problem.dim());
    let _ = problem.certificate_space();
});
