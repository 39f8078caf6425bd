#![no_main]

use derham_core::freealg::{Alphabet, Word};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let alpha = Alphabet::calculus(2);
    if let Ok(w) = Word::parse(&alpha, src) {
        assert_eq!(Word::parse(&alpha, &w.render(&alpha)).unwrap(), w);
    }
});
