//! Metric-affine gauge gravitation: identities on placeholder Euler–Lagrange
//! components and the BRST operator of diffeomorphisms.

use std::time::Instant;

use jetvar::models::gravitation;

fn main() -> jetvar::Result<()> {
    let model = gravitation();
    println!("generators per identity: {}", model.tower[0].generators.len());
    let start = Instant::now();
    println!("identities on placeholders: {:?}", model.check_ni_placeholder()?.is_none());
    println!("gauge operator from identities: {:?}", model.check_gauge_operator()?.is_none());
    println!("BRST nilpotent: {:?}", model.check_brst_nilpotency()?.is_none());
    println!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
