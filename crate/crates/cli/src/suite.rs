//! Verification suites wrapping the berezin, conformal and quantize checks.

use berezin_core::berezin::{
    boundedness_report, check_berezin_relations, check_berezin_relations_for, check_s_form, gen_d, gen_f,
    gen_f_reversed, gen_sl2, toeplitz_limit_check, RelationCheck,
};
use berezin_core::conformal::{exact_identity_suite, gen_l, stray_bands, witt_defect};
use berezin_core::quantize::{
    derivation_defect_operator, op_quantize, product_defect, reduced_defect, Probe, Symbol, VField,
};
use berezin_core::verma_ops::Corrections;
use berezin_core::{BandOperator, GaussianRational, NormBound, Poly, RatFunc, Weight};
use serde_json::{json, Map, Value};

use crate::config::{RunConfig, Suite};
use crate::report::{decay_json, defect_json, float_json, norm_bound_json, operator_json, weight_fields};
use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: Option<Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub weight: Weight,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("suite".into(), json!(self.suite.name()));
        weight_fields(&mut m, &self.weight);
        m.insert("passed".into(), json!(self.passed()));
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut o = Map::new();
                o.insert("group".into(), json!(c.group));
                o.insert("name".into(), json!(c.name));
                o.insert("passed".into(), json!(c.passed));
                if let Some(d) = &c.detail {
                    o.insert("detail".into(), d.clone());
                }
                Value::Object(o)
            })
            .collect();
        m.insert("checks".into(), Value::Array(checks));
        Value::Object(m)
    }

    /// One line per check plus a total.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!("{} [{}] {}\n", if c.passed { "PASS" } else { "FAIL" }, c.group, c.name));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        s.push_str(&format!(
            "suite {} at h = {}: {} checks, {failed} failed\n",
            self.suite.name(),
            self.weight,
            self.checks.len()
        ));
        s
    }
}

struct Collector {
    group: &'static str,
    checks: Vec<Check>,
}

impl Collector {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: Option<Value>) {
        self.checks.push(Check { group: self.group, name: name.into(), passed, detail });
    }

    /// An exact identity; failing residuals are attached.
    fn relation(&mut self, c: &RelationCheck) {
        let detail = (!c.passed()).then(|| json!({"residual": operator_json(&c.residual)}));
        self.push(c.relation.clone(), c.passed(), detail);
    }

    fn equal(&mut self, name: &str, lhs: &BandOperator, rhs: &BandOperator) -> Result<(), CliError> {
        self.relation(&RelationCheck::new(name, lhs, rhs)?);
        Ok(())
    }
}

fn berezin_checks(cfg: &RunConfig, out: &mut Collector) -> Result<(), CliError> {
    let w = &cfg.weight;
    let c = check_berezin_relations(w);
    out.relation(&c.commuting);
    out.relation(&c.main);
    out.equal("adj(D) = F", &gen_d(w).adjoint(), &gen_f(w))?;
    out.equal("adj(F) = D", &gen_f(w).adjoint(), &gen_d(w))?;
    let reversed = check_berezin_relations_for(&gen_d(w), &gen_f_reversed(w))?;
    let witness = reversed.main.witness_band().map(|(d, f)| json!({"degree": d, "residual": f.to_string()}));
    out.push("reversed ordering violates the relation", !reversed.main.passed(), witness);
    if w.is_limit_point() {
        let t = toeplitz_limit_check(w)?;
        out.relation(&t.df_is_identity);
        out.relation(&t.fd_is_identity_minus_p0);
    } else {
        out.relation(&check_s_form(w)?.s_relation);
    }
    match boundedness_report(w, cfg.scan) {
        Ok(bounds) => {
            for (name, b) in bounds {
                let ok = matches!(b, NormBound::Bounded(x) if x.is_finite());
                out.push(format!("{name} is bounded"), ok, Some(norm_bound_json(&b)));
            }
        }
        Err(e) => out.push("boundedness", false, Some(json!(e.to_string()))),
    }
    Ok(())
}

fn sl2_checks(cfg: &RunConfig, out: &mut Collector) -> Result<(), CliError> {
    let w = &cfg.weight;
    let s = gen_sl2(w);
    let two = GaussianRational::from_int(2);
    out.equal("[L1, L-1] = 2 L0", &s.raise.commutator(&s.lower)?, &s.zero.scale(&two))?;
    out.equal("[L0, L-1] = L-1", &s.zero.commutator(&s.lower)?, &s.lower)?;
    out.equal("[L0, L1] = -L1", &s.zero.commutator(&s.raise)?, &s.raise.neg())?;
    out.equal("gen_L(-1) = z", &gen_l(-1, w)?, &s.lower)?;
    out.equal("gen_L(0) = xi + h", &gen_l(0, w)?, &s.zero)?;
    out.equal("gen_L(1) = z d^2 + 2h d", &gen_l(1, w)?, &s.raise)?;
    out.equal("adj(L1) = L-1", &s.raise.adjoint(), &s.lower)?;
    Ok(())
}

fn witt_checks(cfg: &RunConfig, out: &mut Collector) -> Result<(), CliError> {
    let w = &cfg.weight;
    for c in exact_identity_suite(w)? {
        out.relation(&c);
    }
    for m in -3..=3 {
        for n in -3..=3 {
            let d = witt_defect(m, n, w, cfg.n)?;
            let stray = stray_bands(&d);
            let ok = d.report.hs_verdict && stray.is_empty();
            let mut detail = json!({"decay_order_min": decay_json(d.report.decay_order_min())});
            if !ok {
                detail["defect"] = operator_json(&d.defect);
            }
            out.push(format!("Delta({m},{n}) is Hilbert-Schmidt"), ok, Some(detail));
            if w.is_limit_point() {
                out.push(format!("Delta({m},{n}) is finite rank"), d.defect.is_finite_rank(), None);
            }
        }
    }
    if w.is_limit_point() {
        let d = witt_defect(2, -2, w, cfg.n)?;
        let quarter = GaussianRational::from_frac(1, 4);
        let expect = BandOperator::finite_rank(w, Corrections::from([((0, 0), quarter.clone()), ((1, 1), quarter)]));
        out.push(
            "Delta(2,-2) = (P0 + P1)/4",
            d.defect == expect,
            Some(Value::Object(defect_json(&d.defect, &d.report))),
        );
    }
    Ok(())
}

fn quantize_checks(cfg: &RunConfig, out: &mut Collector) -> Result<(), CliError> {
    let w = &cfg.weight;
    let (z, zi) = (Symbol::monomial(1), Symbol::monomial(-1));
    let (d, f) = (gen_d(w), gen_f(w));
    let id = BandOperator::identity(w);
    out.equal("[L-1, F] = F^2", &gen_l(-1, w)?.commutator(&f)?, &f.pow(2))?;
    out.equal("[L1, F] = I", &gen_l(1, w)?.commutator(&f)?, &id)?;
    out.equal("[L1, D] = -D^2", &gen_l(1, w)?.commutator(&d)?, &d.pow(2).neg())?;
    out.equal("[L-1, D] = -I", &gen_l(-1, w)?.commutator(&d)?, &id.neg())?;
    for (k, m) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let defect = derivation_defect_operator(&VField::basis(k), &Symbol::monomial(m), w)?;
        out.equal(&format!("derivation defect (l{k}, z^{m}) = 0"), &defect, &BandOperator::zero(w))?;
    }
    let sym = Symbol::new([(1, GaussianRational::from_int(1)), (-2, GaussianRational::from_frac(1, 2))]);
    out.equal("Op(conj f) = adj Op(f), f = z + z^-2/2", &op_quantize(&sym.conj(), w), &op_quantize(&sym, w).adjoint())?;
    out.equal("Op(1) = I", &op_quantize(&Symbol::constant(GaussianRational::from_int(1)), w), &id)?;

    // DF − I = diag((1−2h)/(n+2h)), FD − I = diag((1−2h)/(n−1+2h))
    let one_minus_2h = &GaussianRational::from_int(1) - &w.two_h();
    let diag = |shift: GaussianRational| -> Result<BandOperator, CliError> {
        let phi = RatFunc::new(Poly::constant(one_minus_2h.clone()), Poly::linear(shift))?;
        Ok(BandOperator::make_band(w.clone(), [(0, phi)].into(), Corrections::new())?)
    };
    out.equal("Op(z^-1)Op(z) - I = diag((1-2h)/(n+2h))", &d.mul(&f)?.sub(&id)?, &diag(w.two_h())?)?;
    let fd_expect = if w.is_limit_point() {
        BandOperator::projector(w, 0).neg()
    } else {
        diag(&w.two_h() - &GaussianRational::from_int(1))?
    };
    out.equal("Op(z)Op(z^-1) - I = diag((1-2h)/(n-1+2h))", &f.mul(&d)?.sub(&id)?, &fd_expect)?;
    let trivial = product_defect(&Symbol::constant(GaussianRational::from_int(1)), &z, w, cfg.n)?;
    out.push("product_defect(1, z) = 0", trivial.operator.is_zero(), None);

    // the h = 1/2 index part removed, the remainder is HS
    let probe = Probe::Product(z, zi);
    let red = reduced_defect(&probe, w)?;
    let report = red.hs_report(cfg.n)?;
    out.push(
        "Op(z)Op(z^-1) - I + P0 is Hilbert-Schmidt",
        report.hs_verdict,
        Some(json!({"norm": float_json(report.hs_norm())})),
    );
    Ok(())
}

pub fn run_suite(cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    type Runner = fn(&RunConfig, &mut Collector) -> Result<(), CliError>;
    let groups: Vec<(&'static str, Runner)> = match cfg.suite {
        Suite::Berezin => vec![("berezin", berezin_checks)],
        Suite::Sl2 => vec![("sl2", sl2_checks)],
        Suite::Witt => vec![("witt", witt_checks)],
        Suite::Quantize => vec![("quantize", quantize_checks)],
        Suite::All => vec![
            ("berezin", berezin_checks as Runner),
            ("sl2", sl2_checks),
            ("witt", witt_checks),
            ("quantize", quantize_checks),
        ],
    };
    let mut checks = Vec::new();
    for (group, run) in groups {
        let mut c = Collector { group, checks: Vec::new() };
        run(cfg, &mut c)?;
        checks.extend(c.checks);
    }
    Ok(SuiteReport { suite: cfg.suite, weight: cfg.weight.clone(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Format;

    fn cfg(h: &str, suite: Suite) -> RunConfig {
        RunConfig::new(h, 64, 64, Format::Json, None, suite).unwrap()
    }

    #[test]
    fn suites_pass() {
        for h in ["1/2", "3/4", "1/1", "5/1"] {
            let r = run_suite(&cfg(h, Suite::All)).unwrap();
            assert!(r.passed(), "h = {h}:\n{}", r.summary());
        }
    }

    #[test]
    fn witt_at_half_has_witness() {
        let r = run_suite(&cfg("1/2", Suite::Witt)).unwrap();
        let c = r.checks.iter().find(|c| c.name == "Delta(2,-2) = (P0 + P1)/4").unwrap();
        assert!(c.passed);
        let detail = c.detail.as_ref().unwrap();
        assert_eq!(detail["operator"]["corrections"], json!([[0, 0, 1, 4, 0, 1], [1, 1, 1, 4, 0, 1]]));
    }

    #[test]
    fn report_is_deterministic() {
        let a = run_suite(&cfg("3/4", Suite::All)).unwrap().to_json();
        let b = run_suite(&cfg("3/4", Suite::All)).unwrap().to_json();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
