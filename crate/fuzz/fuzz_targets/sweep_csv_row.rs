#![no_main]

use libfuzzer_sys::fuzz_target;
use wvu_cli::sweep::SweepRow;

fuzz_target!(|data: &[u8]| {
    if let Ok(line) = std::str::from_utf8(data) {
        if let Ok(row) = SweepRow::parse_csv_line(line) {
            let reparsed = SweepRow::parse_csv_line(&row.to_csv_line()).expect("formatted row parses");
            // NaN fields compare unequal, so compare the text form
            assert_eq!(reparsed.to_csv_line(), row.to_csv_line());
        }
    }
});
