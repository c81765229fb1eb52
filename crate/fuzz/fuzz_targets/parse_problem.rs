#![no_main]

use libfuzzer_sys::fuzz_target;
use wvu_core::problem::parse_problem;

fuzz_target!(|data: &[u8]| {
    if let Ok(problem) = parse_problem(data) {
        // anything accepted must survive a round trip and a full report
        let again = parse_problem(problem.to_json().as_bytes()).expect("re-serialized problem parses");
        assert_eq!(again, problem);
        let _ = wvu_cli::report::cmd_report_default(&problem);
    }
});
