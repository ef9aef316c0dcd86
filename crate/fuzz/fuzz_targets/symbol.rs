#![no_main]

use libfuzzer_sys::fuzz_target;
use mucut_core::cut::pushforward_symbol;
use mucut_core::{LaurentSymbol, SymbolVariant};

fuzz_target!(|data: &[u8]| {
    let Ok(sigma) = serde_json::from_slice::<LaurentSymbol>(data) else { return };
    let back: LaurentSymbol = serde_json::from_str(&serde_json::to_string(&sigma).unwrap()).unwrap();
    assert_eq!(back, sigma);
    for v in [SymbolVariant::MPlusEven, SymbolVariant::MPlusPlus] {
        let _ = pushforward_symbol(&sigma, v);
    }
});
