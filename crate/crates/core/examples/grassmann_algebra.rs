//! Graded-commutative arithmetic: odd generators anticommute and square to zero.

use jetvar::algebra::{GradedPoly, Parity};
use jetvar::frontend::render;
use jetvar::models::{FieldDecl, Role, Roster};

fn main() {
    let mut roster = Roster::new();
    roster.declare(FieldDecl::new("x", Role::Field, vec![], Parity::Even)).unwrap();
    roster.declare(FieldDecl::new("c", Role::Ghost, vec![2], Parity::Odd)).unwrap();
    let x = GradedPoly::var(roster.get("x").unwrap().variable(&[]));
    let c0 = GradedPoly::var(roster.get("c").unwrap().variable(&[0]));
    let c1 = GradedPoly::var(roster.get("c").unwrap().variable(&[1]));

    let p = &(&x * &c0) + &c1;
    println!("p        = {}", render(&roster, &p));
    println!("c0 c1    = {}", render(&roster, &(&c0 * &c1)));
    println!("c1 c0    = {}", render(&roster, &(&c1 * &c0)));
    println!("c0 c0    = {}", render(&roster, &(&c0 * &c0)));
    println!("p²       = {}", render(&roster, &(&p * &p)));

    let q = &(&x * &c0) * &c1;
    let v = roster.get("c").unwrap().variable(&[1]);
    println!("∂/∂c1 q  = {}  (left)", render(&roster, &q.left_partial(&v)));
    println!("q ∂/∂c1  = {}  (right)", render(&roster, &q.right_partial(&v)));
}
