//! The antibracket on a toy field–ghost pair.

use jetvar::algebra::{GradedPoly, Parity};
use jetvar::brst::antibracket;
use jetvar::frontend::render;
use jetvar::models::{FieldDecl, Role, Roster};

fn main() -> jetvar::Result<()> {
    let mut roster = Roster::new();
    roster.declare(FieldDecl::new("y", Role::Field, vec![], Parity::Even)).unwrap();
    roster.declare(FieldDecl::new("c", Role::Ghost, vec![], Parity::Odd)).unwrap();
    for (bar, partner, parity) in [("ybar", "y", Parity::Odd), ("cbar", "c", Parity::Even)] {
        let mut d = FieldDecl::new(bar, Role::Antifield, vec![], parity);
        d.partner = Some(partner.into());
        roster.declare(d).unwrap();
    }
    let v = |n: &str| GradedPoly::var(roster.get(n).unwrap().variable(&[]));
    let js = jetvar::calculus::JetSpace::new(1);
    let pairing = roster.pairing();

    let l = &(&(&v("ybar") * &v("c")) * &v("y")) + &(&v("cbar") * &v("y"));
    println!("L      = {}", render(&roster, &l));
    println!("{{L,L}}  = {}", render(&roster, &antibracket(&js, &l, &l, &pairing)?));
    let odd = &v("ybar") * &(&v("y") * &v("y"));
    println!("{{K,K}}  = {}  for K = {}", render(&roster, &antibracket(&js, &odd, &odd, &pairing)?), render(&roster, &odd));
    Ok(())
}
