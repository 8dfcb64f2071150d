//! Total derivatives, the horizontal antiderivative and the Lepage boundary term.

use jetvar::algebra::{GradedPoly, Parity};
use jetvar::frontend::render;
use jetvar::models::{FieldDecl, Role, Roster};

fn main() -> jetvar::Result<()> {
    let mut roster = Roster::new();
    roster.declare(FieldDecl::new("y", Role::Field, vec![], Parity::Even)).unwrap();
    let y = roster.get("y").unwrap().variable(&[]);
    let js = jetvar::calculus::JetSpace::new(2);

    let p = &GradedPoly::var(y.clone()) * &GradedPoly::var(y.prolong(1));
    let d0 = js.total_derivative(&p, 0)?;
    println!("d_0({}) = {}", render(&roster, &p), render(&roster, &d0));
    println!("d_0 d_1 = d_1 d_0: {}", js.total_derivative(&d0, 1)? == js.total_derivative(&js.total_derivative(&p, 1)?, 0)?);

    match js.horizontal_antiderivative(&d0)? {
        Some(sigma) => println!("antiderivative components: {:?}", sigma.components.iter().map(|c| render(&roster, c)).collect::<Vec<_>>()),
        None => println!("not a divergence"),
    }
    println!("EL of a divergence vanishes: {}", js.is_variationally_trivial(&d0)?);

    let l = &GradedPoly::var(y.prolong(0)).pow(2) - &GradedPoly::var(y.prolong(1)).pow(2);
    let decomposition = js.lepage_decompose(&l)?;
    println!("E_y = {}", render(&roster, &decomposition.euler_lagrange.get(&y)));
    Ok(())
}
