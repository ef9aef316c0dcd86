#![no_main]

use libfuzzer_sys::fuzz_target;
use mucut_core::{GaussianRational, Rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = text.parse::<Rational>() {
        assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
    }
    if let Ok(g) = serde_json::from_str::<GaussianRational>(text) {
        let back: GaussianRational = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }
});
