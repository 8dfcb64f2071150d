//! Reads a theory file, prints it back in canonical form and reports errors with a caret.

use jetvar::frontend::{parse, print_model};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/maxwell.theory").to_string());
    let text = std::fs::read_to_string(&path).expect("readable theory file");
    match parse(&text) {
        Ok(model) => print!("{}", print_model(&model)),
        Err(e) => eprintln!("{path}:{}:{}: {e}", e.line, e.column),
    }

    let broken = "theory \"t\";\ndim 2;\nfield a[2] even;\nlagrangian = a[0,1];\n";
    if let Err(e) = parse(broken) {
        eprintln!("\n{e}");
    }
}
