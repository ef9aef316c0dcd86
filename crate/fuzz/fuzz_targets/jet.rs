#![no_main]

use libfuzzer_sys::fuzz_target;
use mucut_core::cut::{extends_smoothly, pullback_jet, Jet};
use mucut_core::SymbolVariant;

fuzz_target!(|data: &[u8]| {
    let Ok(j) = serde_json::from_slice::<Jet>(data) else { return };
    let back: Jet = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
    assert_eq!(back, j);
    let smooth = extends_smoothly(&j);
    for v in [SymbolVariant::MPlusEven, SymbolVariant::MPlusPlus] {
        assert_eq!(pullback_jet(&j, v).is_ok(), smooth);
    }
});
