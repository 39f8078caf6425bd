#![no_main]

use derham_core::expr::parse_element;
use derham_core::freealg::Alphabet;
use derham_core::symring::Ring;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let ring = Ring::laurent(&["q", "r"]);
    let alpha = Alphabet::calculus(2);
    if let Ok(e) = parse_element(&alpha, &ring, src) {
        let again = parse_element(&alpha, &ring, &e.to_string()).expect("rendered element parses");
        assert_eq!(again, e);
    }
});
