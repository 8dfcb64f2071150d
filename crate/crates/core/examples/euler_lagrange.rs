//! Euler–Lagrange components of a scalar with a quartic self-interaction.

use jetvar::frontend::{parse, render, render_latex};

const THEORY: &str = r#"
theory "phi-four";
dim 2;
index l, mu : base;
param g[2,2] metric = diag(1, -1);
field y even;
lagrangian = 1/2 * g[l,mu] * y[;l] * y[;mu] - 1/24 * y^4;
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = parse(THEORY)?;
    let el = model.euler_lagrange()?;
    for (field, e) in &el.components {
        let name = jetvar::frontend::render_var(&model.roster, field).0;
        println!("E_{name} = {}", render(&model.roster, e));
        println!("latex: {}", render_latex(&model.roster, e, false));
    }
    Ok(())
}
