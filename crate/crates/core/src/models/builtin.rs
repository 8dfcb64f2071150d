use crate::algebra::{int, rat, Coeff, GradedPoly, MultiIndex, Parity, VariableId};
use crate::brst::{NiGenerator, NoetherIdentityData};
use crate::calculus::JetSpace;
use crate::symmetry::Derivation;
use crate::{Error, Result};

use super::{FieldDecl, ParamKind, ParamTensor, Role, TheoryModel};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 5] = [
    "free-scalar",
    "maxwell",
    "yang-mills-su2",
    "chern-simons-3d",
    "gravitation-gauge",
];

/// A fully populated built-in model.
pub fn builtin(name: &str) -> Result<TheoryModel> {
    match name {
        "free-scalar" => Ok(free_scalar(2)),
        "maxwell" => Ok(maxwell()),
        "yang-mills-su2" => Ok(yang_mills(su2_constants())),
        "chern-simons-3d" => Ok(chern_simons(su2_constants())),
        "gravitation-gauge" => Ok(gravitation()),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

/// `c^r_{pq} = ε_{rpq}`.
pub fn su2_constants() -> ParamTensor {
    ParamTensor::levi_civita("f", 3, ParamKind::Structure)
}

/// `diag(1, −1, …, −1)` on `n` values.
pub fn minkowski(n: usize) -> ParamTensor {
    let mut diag = vec![-1; n];
    diag[0] = 1;
    ParamTensor::diagonal("g", &diag, ParamKind::Metric)
}

struct Builder {
    model: TheoryModel,
}

impl Builder {
    fn new(name: &str, dim: usize) -> Self {
        Builder {
            model: TheoryModel::new(name, dim),
        }
    }

    fn declare(&mut self, decl: FieldDecl) {
        self.model
            .roster
            .declare(decl)
            .expect("built-in roster is consistent");
    }

    fn field(&mut self, name: &str, shape: Vec<usize>) {
        self.declare(FieldDecl::new(name, Role::Field, shape, Parity::Even));
    }

    fn ghost(&mut self, name: &str, shape: Vec<usize>) {
        self.declare(FieldDecl::new(name, Role::Ghost, shape, Parity::Odd));
    }

    fn antifield(&mut self, name: &str, partner: &str) {
        let p = self.model.roster.get(partner).expect("partner declared");
        let mut decl = FieldDecl::new(name, Role::Antifield, Vec::new(), p.parity.flip());
        decl.partner = Some(partner.to_string());
        self.declare(decl);
    }

    fn param(&mut self, p: ParamTensor) {
        self.model.params.push(p);
    }

    fn var(&self, name: &str, idx: &[usize]) -> VariableId {
        self.model
            .roster
            .get(name)
            .expect("declared")
            .variable(idx)
    }

    /// The component `name[idx; jet]` as a polynomial.
    fn jet(&self, name: &str, idx: &[usize], jet: &[usize]) -> GradedPoly {
        let decl = self.model.roster.get(name).expect("declared");
        let base = decl.component(idx);
        let multi = MultiIndex::from_indices(jet.iter().copied());
        base.map_vars(|v| v.with_jet(multi.clone()))
    }

    fn at(&self, name: &str, idx: &[usize]) -> GradedPoly {
        self.jet(name, idx, &[])
    }

    fn p(&self, name: &str, idx: &[usize]) -> Coeff {
        self.model.param(name).expect("declared").get(idx)
    }

    fn js(&self) -> JetSpace {
        self.model.jet_space()
    }

    fn identity(&self, ghost: &str, idx: &[usize], delta: &GradedPoly) -> NiGenerator {
        self.model
            .ni_generator(&self.var(ghost, idx), delta)
            .expect("ghost has antifield")
    }

    fn finish(self) -> TheoryModel {
        self.model
    }
}

fn scaled(p: &GradedPoly, c: &Coeff) -> GradedPoly {
    p.scale(c)
}

/// `½ g^{λμ} y_λ y_μ` over an `n`-dimensional Minkowski base, with the
/// translation `υ^y = y_0`.
pub fn free_scalar(n: usize) -> TheoryModel {
    let mut b = Builder::new("free-scalar", n);
    b.param(minkowski(n));
    b.field("y", vec![]);
    let mut l = GradedPoly::zero();
    for lam in 0..n {
        for mu in 0..n {
            let g = b.p("g", &[lam, mu]);
            if g != int(0) {
                l += scaled(&(&b.jet("y", &[], &[lam]) * &b.jet("y", &[], &[mu])), &(g * rat(1, 2)));
            }
        }
    }
    b.model.lagrangian = l;
    let translation = Derivation::new(Parity::Even).with(b.var("y", &[]), b.jet("y", &[], &[0]));
    b.model.derivations.insert("translation".into(), translation);
    b.model
}

/// Field strength `∂_λ a_μ − ∂_μ a_λ + c^r_{pq} a^p_λ a^q_μ` for family `a[r, λ]`.
fn field_strength(b: &Builder, f: Option<&str>, r: usize, lam: usize, mu: usize) -> GradedPoly {
    let color = |i: usize| if f.is_some() { vec![i, 0] } else { vec![0] };
    let idx = |i: usize, l: usize| {
        let mut v = color(i);
        *v.last_mut().unwrap() = l;
        if f.is_none() {
            v.truncate(1);
        }
        v
    };
    let mut out = &b.jet("a", &idx(r, mu), &[lam]) - &b.jet("a", &idx(r, lam), &[mu]);
    if let Some(f) = f {
        let n = b.model.param(f).unwrap().shape[0];
        for p in 0..n {
            for q in 0..n {
                let c = b.p(f, &[r, p, q]);
                if c != int(0) {
                    out += scaled(&(&b.at("a", &[p, lam]) * &b.at("a", &[q, mu])), &c);
                }
            }
        }
    }
    out
}

/// `−¼ g^{λμ} g^{νσ} F_{λν} F_{μσ}`, contracted with `h` over colors when present.
fn yang_mills_density(b: &Builder, colors: usize, structure: Option<&str>) -> GradedPoly {
    let n = b.model.dim;
    let mut l = GradedPoly::zero();
    for m in 0..colors {
        for nn in 0..colors {
            let h = if structure.is_some() { b.p("h", &[m, nn]) } else { int(1) };
            if h == int(0) {
                continue;
            }
            for lam in 0..n {
                for mu in 0..n {
                    let g1 = b.p("g", &[lam, mu]);
                    if g1 == int(0) {
                        continue;
                    }
                    for nu in 0..n {
                        for s in 0..n {
                            let g2 = b.p("g", &[nu, s]);
                            if g2 == int(0) {
                                continue;
                            }
                            let fa = field_strength(b, structure, m, lam, nu);
                            let fb = field_strength(b, structure, nn, mu, s);
                            let c = h.clone() * &g1 * &g2 * rat(-1, 4);
                            l += scaled(&(&fa * &fb), &c);
                        }
                    }
                }
            }
        }
    }
    l
}

/// Abelian gauge theory in four dimensions.
pub fn maxwell() -> TheoryModel {
    let mut b = Builder::new("maxwell", 4);
    b.param(minkowski(4));
    b.field("a", vec![4]);
    b.ghost("c", vec![]);
    b.antifield("abar", "a");
    b.antifield("cbar", "c");
    b.model.lagrangian = yang_mills_density(&b, 1, None);

    let mut delta = GradedPoly::zero();
    for l in 0..4 {
        delta -= b.jet("abar", &[l], &[l]);
    }
    let gen = b.identity("c", &[], &delta);
    b.model.tower = vec![NoetherIdentityData::new(0, vec![gen])];

    let mut u = Derivation::new(Parity::Odd);
    for l in 0..4 {
        u.set(b.var("a", &[l]), b.jet("c", &[], &[l]));
    }
    b.model.gauge = Some(u.clone());
    b.model.brst = Some(u);
    b.finish()
}

/// The gauge part `−c^r_{ji} c^j a^i_λ + c^r_λ` of the connection components.
fn connection_gauge(b: &Builder, f: &str, colors: usize) -> Derivation {
    let n = b.model.dim;
    let mut u = Derivation::new(Parity::Odd);
    for r in 0..colors {
        for lam in 0..n {
            let mut comp = b.jet("c", &[r], &[lam]);
            for j in 0..colors {
                for i in 0..colors {
                    let c = b.p(f, &[r, j, i]);
                    if c != int(0) {
                        comp -= scaled(&(&b.at("c", &[j]) * &b.at("a", &[i, lam])), &c);
                    }
                }
            }
            u.set(b.var("a", &[r, lam]), comp);
        }
    }
    u
}

/// `−½ c^r_{ij} c^i c^j`.
fn ghost_bracket(b: &Builder, f: &str, colors: usize) -> Vec<(VariableId, GradedPoly)> {
    (0..colors)
        .map(|r| {
            let mut comp = GradedPoly::zero();
            for i in 0..colors {
                for j in 0..colors {
                    let c = b.p(f, &[r, i, j]);
                    if c != int(0) {
                        comp += scaled(&(&b.at("c", &[i]) * &b.at("c", &[j])), &(c * rat(-1, 2)));
                    }
                }
            }
            (b.var("c", &[r]), comp)
        })
        .collect()
}

/// The color identity `−c^r_{ji} a^i_λ ā^λ_r − d_λ ā^λ_j`.
fn color_identity(b: &Builder, f: &str, colors: usize, j: usize) -> GradedPoly {
    let n = b.model.dim;
    let mut delta = GradedPoly::zero();
    for lam in 0..n {
        delta -= b.jet("abar", &[j, lam], &[lam]);
        for r in 0..colors {
            for i in 0..colors {
                let c = b.p(f, &[r, j, i]);
                if c != int(0) {
                    delta -= scaled(&(&b.at("a", &[i, lam]) * &b.at("abar", &[r, lam])), &c);
                }
            }
        }
    }
    delta
}

/// Yang–Mills theory of the given structure constants over Minkowski space.
pub fn yang_mills(f: ParamTensor) -> TheoryModel {
    let colors = f.shape[0];
    let mut b = Builder::new("yang-mills-su2", 4);
    b.param(f);
    b.param(ParamTensor::identity("h", colors, ParamKind::Metric));
    b.param(minkowski(4));
    b.field("a", vec![colors, 4]);
    b.ghost("c", vec![colors]);
    b.antifield("abar", "a");
    b.antifield("cbar", "c");
    b.model.lagrangian = yang_mills_density(&b, colors, Some("f"));

    let gens = (0..colors)
        .map(|j| b.identity("c", &[j], &color_identity(&b, "f", colors, j)))
        .collect();
    b.model.tower = vec![NoetherIdentityData::new(0, gens)];

    let u = connection_gauge(&b, "f", colors);
    let mut brst = u.clone();
    for (v, p) in ghost_bracket(&b, "f", colors) {
        brst.set(v, p);
    }
    for j in 0..colors {
        let mut d = Derivation::new(Parity::Even);
        for r in 0..colors {
            for lam in 0..4 {
                let mut comp = GradedPoly::zero();
                for i in 0..colors {
                    let c = b.p("f", &[r, j, i]);
                    if c != int(0) {
                        comp -= scaled(&b.at("a", &[i, lam]), &c);
                    }
                }
                d.set(b.var("a", &[r, lam]), comp);
            }
        }
        b.model.derivations.insert(format!("color{j}"), d);
    }
    b.model.gauge = Some(u);
    b.model.brst = Some(brst);
    b.finish()
}

/// `½ h_{mn} ε^{αβγ} a^m_α (F^n_{βγ} − ⅓ c^n_{pq} a^p_β a^q_γ)`.
fn chern_simons_density(b: &Builder, colors: usize) -> GradedPoly {
    let mut l = GradedPoly::zero();
    for m in 0..colors {
        for nn in 0..colors {
            let h = b.p("h", &[m, nn]);
            if h == int(0) {
                continue;
            }
            for (idx, eps) in &b.model.param("eps").unwrap().entries {
                let (al, be, ga) = (idx[0], idx[1], idx[2]);
                let mut inner = field_strength(b, Some("f"), nn, be, ga);
                for p in 0..colors {
                    for q in 0..colors {
                        let c = b.p("f", &[nn, p, q]);
                        if c != int(0) {
                            inner -= scaled(&(&b.at("a", &[p, be]) * &b.at("a", &[q, ga])), &(c * rat(1, 3)));
                        }
                    }
                }
                l += scaled(&(&b.at("a", &[m, al]) * &inner), &(h.clone() * eps * rat(1, 2)));
            }
        }
    }
    l
}

/// Local Chern–Simons theory on a three-dimensional base with gauge and
/// diffeomorphism ghosts.
pub fn chern_simons(f: ParamTensor) -> TheoryModel {
    let colors = f.shape[0];
    let n = 3;
    let mut b = Builder::new("chern-simons-3d", n);
    b.param(f);
    b.param(ParamTensor::identity("h", colors, ParamKind::Metric));
    b.param(ParamTensor::levi_civita("eps", n, ParamKind::LeviCivita));
    b.field("a", vec![colors, n]);
    b.ghost("c", vec![colors]);
    b.ghost("cv", vec![n]);
    b.antifield("abar", "a");
    b.antifield("cbar", "c");
    b.antifield("cvbar", "cv");
    b.model.lagrangian = chern_simons_density(&b, colors);

    let js = b.js();
    let mut gens: Vec<NiGenerator> = (0..colors)
        .map(|j| b.identity("c", &[j], &color_identity(&b, "f", colors, j)))
        .collect();
    for mu in 0..n {
        // −a^r_{μλ} ā^λ_r + d_λ(a^r_μ ā^λ_r)
        let mut delta = GradedPoly::zero();
        for r in 0..colors {
            for lam in 0..n {
                delta -= &b.jet("a", &[r, lam], &[mu]) * &b.at("abar", &[r, lam]);
                let inner = &b.at("a", &[r, mu]) * &b.at("abar", &[r, lam]);
                delta += js.total_derivative(&inner, lam).expect("within cap");
            }
        }
        gens.push(b.identity("cv", &[mu], &delta));
    }
    b.model.tower = vec![NoetherIdentityData::new(0, gens)];

    let mut u = connection_gauge(&b, "f", colors);
    for r in 0..colors {
        for lam in 0..n {
            let mut comp = u.component(&b.var("a", &[r, lam]));
            for mu in 0..n {
                comp -= &b.jet("cv", &[mu], &[lam]) * &b.at("a", &[r, mu]);
                comp -= &b.at("cv", &[mu]) * &b.jet("a", &[r, lam], &[mu]);
            }
            u.set(b.var("a", &[r, lam]), comp);
        }
    }
    let mut brst = u.clone();
    for (v, p) in ghost_bracket(&b, "f", colors) {
        brst.set(v, p);
    }
    for r in 0..colors {
        // transport of the gauge ghosts along the diffeomorphism ghost
        let mut comp = brst.component(&b.var("c", &[r]));
        for mu in 0..n {
            comp -= &b.at("cv", &[mu]) * &b.jet("c", &[r], &[mu]);
        }
        brst.set(b.var("c", &[r]), comp);
    }
    for lam in 0..n {
        let mut comp = GradedPoly::zero();
        for mu in 0..n {
            comp += &b.jet("cv", &[lam], &[mu]) * &b.at("cv", &[mu]);
        }
        brst.set(b.var("cv", &[lam]), comp);
    }
    b.model.gauge = Some(u);
    b.model.brst = Some(brst);
    b.finish()
}

/// Metric-affine gauge gravitation: a symmetric `σ^{αβ}`, a world connection
/// `k_μ{}^α{}_β` and vector ghosts `c^λ`, with no Lagrangian fixed.
pub fn gravitation() -> TheoryModel {
    let n = 4;
    let mut b = Builder::new("gravitation-gauge", n);
    b.param(ParamTensor::identity("delta", n, ParamKind::General));
    b.declare(FieldDecl::new("sigma", Role::Field, vec![n, n], Parity::Even).symmetric());
    b.field("k", vec![n, n, n]);
    b.ghost("cv", vec![n]);
    b.antifield("sbar", "sigma");
    b.antifield("kbar", "k");
    b.antifield("cvbar", "cv");

    let delta = |i: usize, j: usize| i == j;
    let mut gens = Vec::new();
    for l in 0..n {
        let mut d = GradedPoly::zero();
        for al in 0..n {
            for be in 0..n {
                // −(σ^{αβ}_λ + 2σ^{νβ}_ν δ^α_λ) σ̄_{αβ}
                let mut coeff = b.jet("sigma", &[al, be], &[l]);
                if delta(al, l) {
                    for nu in 0..n {
                        coeff += b.jet("sigma", &[nu, be], &[nu]).scale(&int(2));
                    }
                }
                d -= &coeff * &b.at("sbar", &[al, be]);
            }
        }
        for nu in 0..n {
            for be in 0..n {
                // −2σ^{νβ} d_ν σ̄_{λβ}
                d -= (&b.at("sigma", &[nu, be]) * &b.jet("sbar", &[l, be], &[nu])).scale(&int(2));
            }
        }
        for mu in 0..n {
            for al in 0..n {
                for be in 0..n {
                    let kbar = b.at("kbar", &[mu, al, be]);
                    let mut coeff = -b.jet("k", &[mu, al, be], &[l]);
                    if delta(al, l) {
                        for nu in 0..n {
                            coeff -= b.jet("k", &[mu, nu, be], &[nu]);
                        }
                    }
                    coeff += b.jet("k", &[mu, al, l], &[be]);
                    coeff += b.jet("k", &[l, al, be], &[mu]);
                    d += &coeff * &kbar;
                    for nu in 0..n {
                        let mut c2 = GradedPoly::zero();
                        if delta(al, l) {
                            c2 -= b.at("k", &[mu, nu, be]);
                        }
                        if delta(nu, be) {
                            c2 += b.at("k", &[mu, al, l]);
                        }
                        if delta(nu, mu) {
                            c2 += b.at("k", &[l, al, be]);
                        }
                        if !c2.is_zero() {
                            d += &c2 * &b.jet("kbar", &[mu, al, be], &[nu]);
                        }
                    }
                }
            }
        }
        for mu in 0..n {
            for be in 0..n {
                d += b.jet("kbar", &[mu, l, be], &[mu, be]);
            }
        }
        gens.push(b.identity("cv", &[l], &d));
    }
    b.model.tower = vec![NoetherIdentityData::new(0, gens)];

    let mut u = Derivation::new(Parity::Odd);
    for al in 0..n {
        for be in al..n {
            let mut comp = GradedPoly::zero();
            for nu in 0..n {
                comp += &b.at("sigma", &[nu, be]) * &b.jet("cv", &[al], &[nu]);
                comp += &b.at("sigma", &[al, nu]) * &b.jet("cv", &[be], &[nu]);
                comp -= &b.at("cv", &[nu]) * &b.jet("sigma", &[al, be], &[nu]);
            }
            u.set(b.var("sigma", &[al, be]), comp);
        }
    }
    for mu in 0..n {
        for al in 0..n {
            for be in 0..n {
                let mut comp = b.jet("cv", &[al], &[mu, be]);
                for nu in 0..n {
                    comp += &b.jet("cv", &[al], &[nu]) * &b.at("k", &[mu, nu, be]);
                    comp -= &b.jet("cv", &[nu], &[be]) * &b.at("k", &[mu, al, nu]);
                    comp -= &b.jet("cv", &[nu], &[mu]) * &b.at("k", &[nu, al, be]);
                    comp -= &b.at("cv", &[nu]) * &b.jet("k", &[mu, al, be], &[nu]);
                }
                u.set(b.var("k", &[mu, al, be]), comp);
            }
        }
    }
    let mut brst = u.clone();
    for l in 0..n {
        let mut comp = GradedPoly::zero();
        for mu in 0..n {
            comp += &b.jet("cv", &[l], &[mu]) * &b.at("cv", &[mu]);
        }
        brst.set(b.var("cv", &[l]), comp);
    }
    b.model.gauge = Some(u);
    b.model.brst = Some(brst);
    b.finish()
}
