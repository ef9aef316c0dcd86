#![no_main]

use libfuzzer_sys::fuzz_target;
use mucut_core::ExperimentReport;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<ExperimentReport>(data) {
        let _ = r.grid();
        serde_json::to_string(&r).unwrap();
    }
});
