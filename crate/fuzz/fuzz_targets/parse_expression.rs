#![no_main]

use derham_core::expr::parse_expression;
use derham_core::symring::Ring;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let ring = Ring::laurent(&["q", "r", "Q"]);
    if let Ok(c) = parse_expression(&ring, src) {
        let again = parse_expression(&ring, &c.to_string()).expect("rendered coefficient parses");
        assert_eq!(again, c);
    }
});
