use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebra::{GradedPoly, VariableId};
use crate::brst::{
    antibracket, check_master_equation, gauge_density, kt_residuals, noether_current, verify_ni,
};
use crate::calculus::JetSpace;
use crate::frontend::{render, render_var};
use crate::symmetry::Derivation;
use crate::{Result, ENGINE_VERSION};

use super::{Role, TheoryModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One row of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub residual: Option<String>,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub model: String,
    pub checks: Vec<CheckResult>,
    #[serde(rename = "engine-version")]
    pub engine_version: String,
}

impl ModelReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `None` on success, otherwise the residual text.
pub type Outcome = Result<Option<String>>;

type CheckFn<'a> = Box<dyn Fn() -> Outcome + Send + Sync + 'a>;

impl TheoryModel {
    fn show(&self, p: &GradedPoly) -> String {
        render(&self.roster, p)
    }

    fn show_at(&self, v: &VariableId, p: &GradedPoly) -> String {
        format!("{}: {}", render_var(&self.roster, v).0, self.show(p))
    }

    /// First nonzero entry of a residual map, rendered.
    fn first_residual(&self, residuals: &BTreeMap<VariableId, GradedPoly>) -> Option<String> {
        residuals.iter().next().map(|(v, p)| self.show_at(v, p))
    }

    /// Triviality of a density, with the offending EL component on failure.
    fn trivial(&self, js: &JetSpace, p: &GradedPoly) -> Outcome {
        Ok(js
            .triviality_residual(p)?
            .map(|(v, e)| format!("δ/δ{}: {}", render_var(&self.roster, &v).0, self.show(&e))))
    }

    pub fn check_parameters(&self) -> Outcome {
        let problems: Vec<String> = self.params.iter().flat_map(|t| t.validate()).collect();
        Ok((!problems.is_empty()).then(|| problems.join("; ")))
    }

    pub fn check_noether_identities(&self) -> Outcome {
        let js = self.jet_space();
        let el = self.euler_lagrange()?;
        let pairing = self.roster.pairing();
        let th = self.extended_theory();
        let kt = th.kt_differential()?;
        for stage in &self.tower {
            if stage.stage == 0 {
                let residuals = verify_ni(&js, stage, &el, &pairing)?;
                for (g, r) in stage.generators.iter().zip(residuals) {
                    if !r.is_zero() {
                        return Ok(Some(self.show_at(&g.ghost, &r)));
                    }
                }
            } else {
                for g in &stage.generators {
                    let r = kt.apply(&js, &kt.component(&g.antifield))?;
                    if !r.is_zero() {
                        return Ok(Some(self.show_at(&g.ghost, &r)));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn check_kt_nilpotency(&self) -> Outcome {
        let js = self.jet_space();
        let kt = self.extended_theory().kt_differential()?;
        Ok(self.first_residual(&kt_residuals(&js, &kt)?))
    }

    /// The gauge operator assembled from the identities equals the declared one.
    pub fn check_gauge_operator(&self) -> Outcome {
        let Some(declared) = &self.gauge else { return Ok(None) };
        let built = self.extended_theory().gauge_operator()?;
        let mut diff = BTreeMap::new();
        for v in declared.components().keys().chain(built.components().keys()) {
            let d = declared.component(v) - built.component(v);
            if !d.is_zero() {
                diff.insert(v.clone(), d);
            }
        }
        Ok(self.first_residual(&diff))
    }

    /// `Σ c^r Δ_r − Σ u^A s̄_A` is variationally trivial: the antifields stand in
    /// for Euler–Lagrange expressions obeying the identities, and the gauge
    /// operator then leaves any such Lagrangian invariant.
    pub fn check_ni_placeholder(&self) -> Outcome {
        let Some(u) = &self.gauge else { return Ok(None) };
        let js = self.jet_space();
        let mut density = GradedPoly::zero();
        for stage in self.tower.iter().filter(|s| s.stage == 0) {
            for g in &stage.generators {
                density += &GradedPoly::var(g.ghost.clone()) * &g.to_poly();
            }
        }
        for decl in self.roster.decls().iter().filter(|d| d.role == Role::Field) {
            let bar = self.roster.antifield_of(&decl.name);
            for idx in decl.components() {
                let comp = u.component(&decl.variable(&idx));
                if let (false, Some(bar)) = (comp.is_zero(), bar) {
                    density -= &comp * &GradedPoly::var(bar.variable(&idx));
                }
            }
        }
        self.trivial(&js, &density)
    }

    pub fn check_gauge_condition(&self) -> Outcome {
        let Some(u) = &self.gauge else { return Ok(None) };
        let el = self.euler_lagrange()?;
        self.trivial(&self.jet_space(), &gauge_density(u, &el))
    }

    pub fn check_brst_nilpotency(&self) -> Outcome {
        let Some(b) = &self.brst else { return Ok(None) };
        Ok(self.first_residual(&b.square_residuals(&self.jet_space())?))
    }

    /// On fields the BRST operator coincides with the gauge operator.
    pub fn check_brst_extends_gauge(&self) -> Outcome {
        let (Some(b), Some(u)) = (&self.brst, &self.gauge) else { return Ok(None) };
        let fields = self.roster.fields();
        let mut diff = BTreeMap::new();
        for v in &fields {
            let d = b.component(v) - u.component(v);
            if !d.is_zero() {
                diff.insert(v.clone(), d);
            }
        }
        Ok(self.first_residual(&diff))
    }

    pub fn check_master_equation(&self) -> Outcome {
        let js = self.jet_space();
        let le = match self.extended_lagrangian() {
            Ok(le) => le,
            Err(e) => return Ok(Some(e.to_string())),
        };
        let pairing = self.roster.pairing();
        if check_master_equation(&js, &le, &pairing)? {
            return Ok(None);
        }
        let bracket = antibracket(&js, &le, &le, &pairing)?;
        self.trivial(&js, &bracket)
    }

    pub fn check_symmetry(&self, d: &Derivation) -> Outcome {
        let js = self.jet_space();
        self.trivial(&js, &d.apply(&js, &self.lagrangian)?)
    }

    /// `Σ d_λ J^λ − Σ υ^A E_A = 0` for the Noether current of `d`.
    pub fn check_conservation(&self, d: &Derivation) -> Outcome {
        let js = self.jet_space();
        let j = match noether_current(&js, d, &self.lagrangian) {
            Ok(j) => j,
            Err(crate::Error::NotASymmetry) => return Ok(Some("not a variational symmetry".into())),
            Err(e) => return Err(e),
        };
        let el = self.euler_lagrange()?;
        let r = js.divergence(&j)? - gauge_density(d, &el);
        Ok((!r.is_zero()).then(|| self.show(&r)))
    }

    /// The applicable checks, in report order.
    pub fn checks(&self) -> Vec<(String, CheckFn<'_>)> {
        let mut out: Vec<(String, CheckFn<'_>)> = Vec::new();
        out.push(("parameters".into(), Box::new(|| self.check_parameters())));
        if !self.tower.is_empty() {
            out.push(("noether-identities".into(), Box::new(|| self.check_noether_identities())));
            out.push(("kt-nilpotency".into(), Box::new(|| self.check_kt_nilpotency())));
        }
        if self.gauge.is_some() {
            if !self.tower.is_empty() {
                out.push(("gauge-operator".into(), Box::new(|| self.check_gauge_operator())));
                out.push(("ni-placeholder".into(), Box::new(|| self.check_ni_placeholder())));
            }
            out.push(("gauge-condition".into(), Box::new(|| self.check_gauge_condition())));
        }
        if self.brst.is_some() {
            out.push(("brst-nilpotency".into(), Box::new(|| self.check_brst_nilpotency())));
            if self.gauge.is_some() {
                out.push(("brst-extends-gauge".into(), Box::new(|| self.check_brst_extends_gauge())));
            }
        }
        if self.brst.is_some() || self.extended.is_some() {
            out.push(("master-equation".into(), Box::new(|| self.check_master_equation())));
        }
        for (name, d) in &self.derivations {
            out.push((format!("symmetry:{name}"), Box::new(move || self.check_symmetry(d))));
            out.push((format!("conservation:{name}"), Box::new(move || self.check_conservation(d))));
        }
        out
    }
}

fn timed(name: String, f: &CheckFn<'_>) -> CheckResult {
    let start = Instant::now();
    let (status, residual) = match f() {
        Ok(None) => (Status::Pass, None),
        Ok(Some(r)) => (Status::Fail, Some(r)),
        Err(e) => (Status::Fail, Some(e.to_string())),
    };
    CheckResult {
        name,
        status,
        residual,
        millis: start.elapsed().as_millis() as u64,
    }
}

/// Runs every applicable check; with `jobs > 1` checks run on worker threads
/// and the report keeps the sequential order.
pub fn verify_model(m: &TheoryModel, jobs: usize) -> ModelReport {
    let checks = m.checks();
    let results: Vec<CheckResult> = if jobs <= 1 {
        checks.into_iter().map(|(n, f)| timed(n, &f)).collect()
    } else {
        let mut slots: Vec<Option<CheckResult>> = vec![None; checks.len()];
        let next = std::sync::atomic::AtomicUsize::new(0);
        let done = std::sync::Mutex::new(&mut slots);
        std::thread::scope(|s| {
            for _ in 0..jobs.min(checks.len()) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    let Some((name, f)) = checks.get(i) else { break };
                    let r = timed(name.clone(), f);
                    done.lock().expect("no panics while holding the lock")[i] = Some(r);
                });
            }
        });
        slots.into_iter().map(|r| r.expect("every check ran")).collect()
    };
    ModelReport {
        model: m.name.clone(),
        checks: results,
        engine_version: ENGINE_VERSION.to_string(),
    }
}
