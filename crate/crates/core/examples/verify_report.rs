//! Runs every check on each built-in model and prints the JSON reports.

use jetvar::models::{builtin, verify_model, BUILTIN_NAMES};

fn main() -> jetvar::Result<()> {
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    for name in BUILTIN_NAMES {
        let report = verify_model(&builtin(name)?, jobs);
        println!("{}", serde_json::to_string_pretty(&report).expect("serialisable report"));
    }
    Ok(())
}
