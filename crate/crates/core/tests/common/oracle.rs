//! Randomised graded-algebra identities checked against the exterior-algebra
//! oracle.

use jetvar::algebra::{int, GradedPoly, Grading, Parity, VarKind, VariableId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exterior::{Dictionary, Ext};

pub const ODD_GENERATORS: usize = 10;
pub const EVEN_GENERATORS: usize = 3;

fn generators() -> (Vec<VariableId>, Vec<VariableId>) {
    let even = (0..EVEN_GENERATORS as u32).map(VariableId::even_field).collect();
    let odd = (0..ODD_GENERATORS as u32)
        .map(|s| VariableId::new(VarKind::Ghost, s, Grading::new(Parity::Odd, 1, 0)))
        .collect();
    (even, odd)
}

fn random_poly(rng: &mut ChaCha8Rng, even: &[VariableId], odd: &[VariableId], parity: Parity) -> GradedPoly {
    let mut p = GradedPoly::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let mut vars = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            vars.push(even[rng.gen_range(0..even.len())].clone());
        }
        let k = rng.gen_range(0..=3);
        let k = if k % 2 == parity.bit() { k } else { k + 1 };
        for _ in 0..k {
            vars.push(odd[rng.gen_range(0..odd.len())].clone());
        }
        let c = rng.gen_range(-5i64..=5);
        if c != 0 {
            p += GradedPoly::product(int(c), vars);
        }
    }
    p
}

fn parity_sign(a: Parity, b: Parity) -> jetvar::algebra::Coeff {
    if a.koszul(b) {
        int(-1)
    } else {
        int(1)
    }
}

/// The four identity families, cycled by case number.
pub const FAMILIES: [&str; 4] = ["commutation", "leibniz", "left-right", "even-partial"];

/// One randomised identity: `Ok(family)` when engine and oracle agree.
pub fn oracle_case(case: u64) -> Result<&'static str, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + case);
    let (even, odd) = generators();
    let dict = Dictionary::new(even.clone(), odd.clone(), case);
    let pa = if rng.gen() { Parity::Odd } else { Parity::Even };
    let pb = if rng.gen() { Parity::Odd } else { Parity::Even };
    let p = random_poly(&mut rng, &even, &odd, pa);
    let q = random_poly(&mut rng, &even, &odd, pb);
    let family = FAMILIES[(case % 4) as usize];
    let fail = |what: &str| Err(format!("case {case} ({family}): {what}"));
    match family {
        "commutation" => {
            // engine: pq − (−1)^{|p||q|} qp = 0; oracle agrees on both products
            let s = parity_sign(pa, pb);
            let sym = &(&p * &q) - &(&q * &p).scale(&s);
            if !sym.is_zero() {
                return fail("engine graded commutator is nonzero");
            }
            let ep = dict.embed(&p);
            let eq = dict.embed(&q);
            if dict.embed(&(&p * &q)) != ep.mul(&eq) {
                return fail("product disagrees with oracle");
            }
            if ep.mul(&eq).add(&eq.mul(&ep).scale(&-s)) != Ext::zero() {
                return fail("oracle graded commutator is nonzero");
            }
        }
        "leibniz" => {
            let v = &odd[rng.gen_range(0..odd.len())];
            let bit = dict.odd_bit(v);
            let engine = (&p * &q).left_partial(v);
            let sign = if pa.is_odd() { int(-1) } else { int(1) };
            let ep = dict.embed(&p);
            let eq = dict.embed(&q);
            let oracle = ep.left_odd(bit).mul(&eq).add(&ep.mul(&eq.left_odd(bit)).scale(&sign));
            if dict.embed(&engine) != oracle {
                return fail("left Leibniz rule disagrees");
            }
            let engine_r = (&p * &q).right_partial(v);
            let sign_r = if pb.is_odd() { int(-1) } else { int(1) };
            let oracle_r = ep.mul(&eq.right_odd(bit)).add(&ep.right_odd(bit).mul(&eq).scale(&sign_r));
            if dict.embed(&engine_r) != oracle_r {
                return fail("right Leibniz rule disagrees");
            }
        }
        "left-right" => {
            let v = &odd[rng.gen_range(0..odd.len())];
            let bit = dict.odd_bit(v);
            let left = p.left_partial(v);
            let right = p.right_partial(v);
            // right = (−1)^{[v]([p]+1)} left for homogeneous p
            let s = if pa.is_odd() { int(1) } else { int(-1) };
            if right != left.scale(&s) {
                return fail("engine right/left relation fails");
            }
            let ep = dict.embed(&p);
            if dict.embed(&left) != ep.left_odd(bit) || dict.embed(&right) != ep.right_odd(bit) {
                return fail("derivatives disagree with oracle");
            }
        }
        _ => {
            let v = &even[rng.gen_range(0..even.len())];
            let engine = (&p * &q).left_partial(v);
            let ep = dict.embed(&p);
            let eq = dict.embed(&q);
            let g = dict.even_slot_of(v);
            let oracle = ep.partial_even(g).mul(&eq).add(&ep.mul(&eq.partial_even(g)));
            if dict.embed(&engine) != oracle {
                return fail("even partial disagrees with oracle");
            }
            if p.left_partial(v) != p.right_partial(v) {
                return fail("even left and right partials differ");
            }
        }
    }
    Ok(family)
}

/// Runs `n` cases; returns the per-family counts or the first failure.
pub fn run_oracle_suite(n: u64) -> Result<[usize; 4], String> {
    let mut counts = [0; 4];
    for case in 0..n {
        let fam = oracle_case(case)?;
        counts[FAMILIES.iter().position(|f| *f == fam).expect("known family")] += 1;
    }
    Ok(counts)
}
