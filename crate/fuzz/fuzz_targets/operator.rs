#![no_main]

use libfuzzer_sys::fuzz_target;
use mucut_core::operator::{commutant_factorize, commutator_entries, szego_commutes};
use mucut_core::{CanonicalOperator, Parity};

fuzz_target!(|data: &[u8]| {
    let Ok(a) = serde_json::from_slice::<CanonicalOperator>(data) else { return };
    let back: CanonicalOperator = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(back, a);
    for parity in [Parity::Full, Parity::Even] {
        let commutes = szego_commutes(&a, parity);
        assert_eq!(commutes, commutator_entries(&a, parity).is_empty());
        assert_eq!(commutes, commutant_factorize(&a, parity).is_ok());
    }
});
