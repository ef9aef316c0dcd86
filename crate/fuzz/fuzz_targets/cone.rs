#![no_main]

use libfuzzer_sys::fuzz_target;
use mucut_core::cones::{cut_plan, normal_form, verify_plan, Cone2, ConeN};

fuzz_target!(|data: &[u8]| {
    if let Ok(c) = serde_json::from_slice::<Cone2>(data) {
        let _ = normal_form(&c);
        assert!(verify_plan(&c, &cut_plan(&c)));
    }
    if let Ok(n) = serde_json::from_slice::<ConeN>(data) {
        let back: ConeN = serde_json::from_str(&serde_json::to_string(&n).unwrap()).unwrap();
        assert_eq!(back, n);
        let _ = n.to_cone2();
    }
});
