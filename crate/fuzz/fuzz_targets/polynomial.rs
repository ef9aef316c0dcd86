#![no_main]

use libfuzzer_sys::fuzz_target;
use mucut_core::Polynomial;

fuzz_target!(|data: &[u8]| {
    if let Ok(p) = serde_json::from_slice::<Polynomial>(data) {
        let back: Polynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        let _ = p.eval_int(3);
    }
});
