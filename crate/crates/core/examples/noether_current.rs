//! Noether current of spacetime translation for a free scalar, and its conservation law.

use jetvar::brst::noether_current;
use jetvar::frontend::render;
use jetvar::models::free_scalar;

fn main() -> jetvar::Result<()> {
    let model = free_scalar(2);
    let js = model.jet_space();
    let translation = model.derivation("translation")?;
    println!("variational symmetry: {}", translation.is_variational_symmetry(&js, &model.lagrangian)?);

    let current = noether_current(&js, translation, &model.lagrangian)?;
    for (lambda, j) in current.components.iter().enumerate() {
        println!("J^{lambda} = {}", render(&model.roster, j));
    }
    println!("d_λ J^λ = {}", render(&model.roster, &js.divergence(&current)?));
    Ok(())
}
