//! su(2) Yang–Mills: Noether identities, Koszul–Tate and BRST nilpotency, master equation.

use jetvar::algebra::int;
use jetvar::brst::verify_ni;
use jetvar::frontend::render;
use jetvar::models::{su2_constants, yang_mills};

fn main() -> jetvar::Result<()> {
    let model = yang_mills(su2_constants());
    let js = model.jet_space();
    let el = model.euler_lagrange()?;
    let residuals = verify_ni(&js, &model.tower[0], &el, &model.roster.pairing())?;
    println!("identity residuals zero: {:?}", residuals.iter().map(|r| r.is_zero()).collect::<Vec<_>>());

    let theory = model.extended_theory();
    println!("KT nilpotent: {}", theory.kt_differential()?.is_nilpotent(&js)?);
    println!("gauge operator from identities matches: {}", Some(theory.gauge_operator()?) == model.gauge);

    let b = model.brst.as_ref().expect("builtin carries a BRST operator");
    println!("BRST nilpotent: {}", b.is_nilpotent(&js)?);
    let c0 = model.roster.get("c").unwrap().variable(&[0]);
    println!("b(c[0]) = {}", render(&model.roster, &b.component(&c0)));

    let mut f = su2_constants();
    f.set(vec![2, 0, 1], f.get(&[2, 0, 1]) + int(1));
    let mutated = yang_mills(f);
    println!("BRST nilpotent with f[2,0,1] shifted: {}", mutated.brst.unwrap().is_nilpotent(&js)?);

    let le = model.extended_lagrangian()?;
    println!("extended Lagrangian has {} terms", le.len());
    println!("master equation: {:?}", model.check_master_equation()?.is_none());
    Ok(())
}
