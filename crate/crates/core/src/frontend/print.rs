use std::fmt::Write;

use num_traits::{One, Signed};

use crate::algebra::{Coeff, GradedPoly, Monomial, VariableId};
use crate::models::{Role, Roster, TheoryModel};
use crate::symmetry::Derivation;

fn join(items: impl IntoIterator<Item = usize>, sep: &str) -> String {
    items
        .into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// A generator in file syntax, e.g. `a[0,1;2]` or `y[;0,0]`, and the weight
/// by which its coefficient must be scaled when printed this way.
pub fn render_var(roster: &Roster, v: &VariableId) -> (String, Coeff) {
    let jet: Vec<usize> = v.jet().indices().collect();
    if v.is_coordinate() {
        return (format!("x[{}]", v.slot()), Coeff::one());
    }
    let Some((decl, idx)) = roster.describe(v) else {
        return (format!("{v:?}"), Coeff::one());
    };
    let mut s = decl.name.clone();
    if !idx.is_empty() || !jet.is_empty() {
        s.push('[');
        s.push_str(&join(idx.iter().copied(), ","));
        if !jet.is_empty() {
            s.push(';');
            s.push_str(&join(jet, ","));
        }
        s.push(']');
    }
    (s, decl.print_weight(&idx))
}

fn coefficient_and_factors(roster: &Roster, m: &Monomial, c: &Coeff) -> (Coeff, Vec<(String, u32)>) {
    let mut coeff = c.clone();
    let mut factors = Vec::new();
    for (v, e) in m.even_part() {
        let (s, w) = render_var(roster, v);
        for _ in 0..*e {
            coeff *= &w;
        }
        factors.push((s, *e));
    }
    for v in m.odd_part() {
        let (s, w) = render_var(roster, v);
        coeff *= &w;
        factors.push((s, 1));
    }
    (coeff, factors)
}

/// A polynomial in file syntax; re-reading it reproduces the polynomial.
pub fn render(roster: &Roster, p: &GradedPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let (coeff, factors) = coefficient_and_factors(roster, m, c);
        let neg = coeff.is_negative();
        let mag = coeff.abs();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mut parts = Vec::new();
        if !mag.is_one() || factors.is_empty() {
            parts.push(mag.to_string());
        }
        for (s, e) in factors {
            parts.push(if e > 1 { format!("{s}^{e}") } else { s });
        }
        out.push_str(&parts.join("*"));
    }
    out
}

fn latex_name(name: &str) -> String {
    match name.strip_suffix("bar") {
        Some(stem) if !stem.is_empty() => format!("\\bar{{{stem}}}"),
        _ if name.chars().count() > 1 => format!("\\mathrm{{{name}}}"),
        _ => name.to_string(),
    }
}

fn latex_var(roster: &Roster, v: &VariableId, physics: bool) -> (String, Coeff) {
    let shift = usize::from(physics);
    let jet: Vec<usize> = v.jet().indices().map(|i| i + shift).collect();
    if v.is_coordinate() {
        return (format!("x^{{{}}}", v.slot() as usize + shift), Coeff::one());
    }
    let Some((decl, idx)) = roster.describe(v) else {
        return (format!("{v:?}"), Coeff::one());
    };
    let mut s = latex_name(&decl.name);
    if !idx.is_empty() || !jet.is_empty() {
        let _ = write!(s, "_{{{}", join(idx.iter().map(|i| i + shift), ""));
        if !jet.is_empty() {
            let _ = write!(s, ",{}", join(jet, ""));
        }
        s.push('}');
    }
    (s, decl.print_weight(&idx))
}

/// A polynomial as a LaTeX string; indices shift to 1-based under physics display.
pub fn render_latex(roster: &Roster, p: &GradedPoly, physics: bool) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let mut coeff = c.clone();
        let mut factors = Vec::new();
        let vars = m
            .even_part()
            .iter()
            .map(|(v, e)| (v, *e))
            .chain(m.odd_part().iter().map(|v| (v, 1)));
        for (v, e) in vars {
            let (s, w) = latex_var(roster, v, physics);
            for _ in 0..e {
                coeff *= &w;
            }
            factors.push(if e > 1 { format!("{{{s}}}^{{{e}}}") } else { s });
        }
        let neg = coeff.is_negative();
        let mag = coeff.abs();
        out.push_str(match (i, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        if !mag.is_one() || factors.is_empty() {
            if mag.denom().is_one() {
                out.push_str(&mag.numer().to_string());
            } else {
                let _ = write!(out, "\\frac{{{}}}{{{}}}", mag.numer(), mag.denom());
            }
            if !factors.is_empty() {
                out.push(' ');
            }
        }
        out.push_str(&factors.join(" "));
    }
    out
}

fn write_derivation(out: &mut String, roster: &Roster, head: &str, d: &Derivation) {
    let _ = writeln!(out, "{head} {{");
    for (v, p) in d.components() {
        let (name, w) = render_var(roster, v);
        debug_assert!(w.is_one(), "derivations act on fields and ghosts");
        let _ = writeln!(out, "  {name} -> {};", render(roster, p));
    }
    out.push_str("};\n");
}

/// The model as a theory document with every expression expanded.
pub fn print_model(m: &TheoryModel) -> String {
    let r = &m.roster;
    let mut out = String::new();
    let _ = writeln!(out, "theory \"{}\";", m.name);
    let _ = writeln!(out, "dim {};", m.dim);
    if let Some(n) = m.max_jet_order {
        let _ = writeln!(out, "max_jet_order {n};");
    }
    if m.physics_display {
        out.push_str("display physics;\n");
    }
    for t in &m.params {
        let _ = write!(out, "param {}[{}]", t.name, join(t.shape.iter().copied(), ","));
        if let Some(kw) = t.kind.keyword() {
            let _ = write!(out, " {kw}");
        }
        let entries: Vec<String> = t
            .entries
            .iter()
            .map(|(idx, v)| format!("[{}]: {v}", join(idx.iter().copied(), ",")))
            .collect();
        let _ = writeln!(out, " = {{ {} }};", entries.join(", "));
    }
    for d in r.decls() {
        if let Some(partner) = &d.partner {
            let _ = writeln!(out, "antifield {} of {partner} {};", d.name, d.parity);
            continue;
        }
        let _ = write!(out, "{} {}", d.role.keyword(), d.name);
        if !d.shape.is_empty() {
            let _ = write!(out, "[{}]", join(d.shape.iter().copied(), ","));
        }
        let _ = write!(out, " {}", d.parity);
        if d.symmetric {
            out.push_str(" symmetric");
        }
        if d.role == Role::Ghost && d.stage > 0 {
            let _ = write!(out, " stage {}", d.stage);
        }
        out.push_str(";\n");
    }
    let _ = writeln!(out, "lagrangian = {};", render(r, &m.lagrangian));
    for stage in &m.tower {
        for g in &stage.generators {
            let (ghost, _) = render_var(r, &g.ghost);
            let _ = writeln!(out, "ni {ghost} = {};", render(r, &g.to_poly()));
        }
    }
    if let Some(u) = &m.gauge {
        write_derivation(&mut out, r, "gauge", u);
    }
    if let Some(b) = &m.brst {
        write_derivation(&mut out, r, "brst", b);
    }
    for (name, d) in &m.derivations {
        write_derivation(&mut out, r, &format!("derivation {name} {}", d.parity()), d);
    }
    if let Some(le) = &m.extended {
        let _ = writeln!(out, "extended = {};", render(r, le));
    }
    out
}
