#![no_main]

use derham_core::config::AlgebraConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = AlgebraConfig::from_json(src) {
        let _ = cfg.build();
    }
});
