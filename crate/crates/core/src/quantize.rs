//! Quantization of Laurent symbols on the circle into the Berezin algebra and the
//! lifted action of vector fields, with their product and derivation defects.
//!
//! `Op(z^k) = F^k` and `Op(z^{−k}) = D^k` for `k ≥ 0`; vector fields use the
//! basis `ℓ_k = z^{1−k}∂_z`, which is lifted to `L_k`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::berezin::{gen_d, gen_f};
use crate::conformal::gen_l;
use crate::error::{Error, Result};
use crate::exact_scalar::GaussianRational;
use crate::verma_ops::{BandOperator, DefectReport, Weight};

/// Laurent polynomial `Σ c_k z^k` on `|z| = 1`; zero coefficients are pruned.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Symbol {
    coeffs: BTreeMap<i64, GaussianRational>,
}

impl Symbol {
    pub fn new(coeffs: impl IntoIterator<Item = (i64, GaussianRational)>) -> Self {
        let mut out = Symbol::default();
        for (k, c) in coeffs {
            out.add_term(k, &c);
        }
        out
    }

    pub fn zero() -> Self {
        Symbol::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new([(0, c)])
    }

    /// `z^k`.
    pub fn monomial(k: i64) -> Self {
        Self::new([(k, GaussianRational::from_int(1))])
    }

    fn add_term(&mut self, k: i64, c: &GaussianRational) {
        let e = self.coeffs.entry(k).or_insert_with(GaussianRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, GaussianRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Symbol) -> Symbol {
        let mut out = self.clone();
        for (k, c) in &o.coeffs {
            out.add_term(*k, c);
        }
        out
    }

    pub fn scale(&self, s: &GaussianRational) -> Symbol {
        Symbol::new(self.coeffs.iter().map(|(k, c)| (*k, c * s)))
    }

    pub fn mul(&self, o: &Symbol) -> Symbol {
        let mut out = Symbol::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }

    /// Pointwise conjugate on the circle: `conj(f)_k = conj(c_{−k})`.
    pub fn conj(&self) -> Symbol {
        Symbol::new(self.coeffs.iter().map(|(k, c)| (-k, c.conj())))
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.coeffs.iter().map(|(k, c)| format!("{c}·z^{k}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Vector field `Σ a_k ℓ_k` with `ℓ_k = z^{1−k}∂_z`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct VField {
    coeffs: BTreeMap<i64, GaussianRational>,
}

impl VField {
    pub fn new(coeffs: impl IntoIterator<Item = (i64, GaussianRational)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            let e: &mut GaussianRational = map.entry(k).or_insert_with(GaussianRational::zero);
            *e += &c;
        }
        map.retain(|_, c: &mut GaussianRational| !c.is_zero());
        VField { coeffs: map }
    }

    /// `ℓ_k`.
    pub fn basis(k: i64) -> Self {
        Self::new([(k, GaussianRational::from_int(1))])
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, GaussianRational> {
        &self.coeffs
    }

    /// Lie derivative of a symbol: `ℓ_k z^m = m·z^{m−k}`.
    pub fn act(&self, f: &Symbol) -> Symbol {
        let mut out = Symbol::zero();
        for (k, a) in &self.coeffs {
            for (m, c) in f.coeffs() {
                if *m != 0 {
                    out.add_term(m - k, &(&(a * c) * &GaussianRational::from_int(*m)));
                }
            }
        }
        out
    }
}

/// `Op(f) = Σ_{k≥0} c_k F^k + Σ_{k<0} c_k D^{−k}`.
pub fn op_quantize(f: &Symbol, weight: &Weight) -> BandOperator {
    let (d, fop) = (gen_d(weight), gen_f(weight));
    let mut out = BandOperator::zero(weight);
    for (&k, c) in f.coeffs() {
        let base = if k >= 0 { &fop } else { &d };
        let term = base.pow(k.unsigned_abs() as u32).scale(c);
        out = out.add(&term).expect("same weight");
    }
    out
}

/// A defect operator with its report.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantizationDefect {
    pub operator: BandOperator,
    pub report: DefectReport,
}

/// `Op(f)·Op(g) − Op(f·g)`.
pub fn product_defect_operator(f: &Symbol, g: &Symbol, weight: &Weight) -> BandOperator {
    op_quantize(f, weight)
        .mul(&op_quantize(g, weight))
        .and_then(|p| p.sub(&op_quantize(&f.mul(g), weight)))
        .expect("same weight")
}

pub fn product_defect(f: &Symbol, g: &Symbol, weight: &Weight, horizon: usize) -> Result<QuantizationDefect> {
    let operator = product_defect_operator(f, g, weight);
    let report = operator.hs_report(horizon)?;
    Ok(QuantizationDefect { operator, report })
}

/// `L_v = Σ a_k·L_k`.
pub fn lift_vfield(v: &VField, weight: &Weight) -> Result<BandOperator> {
    let mut out = BandOperator::zero(weight);
    for (&k, a) in v.coeffs() {
        out = out.add(&gen_l(k, weight)?.scale(a))?;
    }
    Ok(out)
}

/// `[L_v, Op(f)] − Op(ℓ_v f)`.
pub fn derivation_defect_operator(v: &VField, f: &Symbol, weight: &Weight) -> Result<BandOperator> {
    lift_vfield(v, weight)?.commutator(&op_quantize(f, weight))?.sub(&op_quantize(&v.act(f), weight))
}

pub fn derivation_defect(v: &VField, f: &Symbol, weight: &Weight, horizon: usize) -> Result<QuantizationDefect> {
    let operator = derivation_defect_operator(v, f, weight)?;
    let report = operator.hs_report(horizon)?;
    Ok(QuantizationDefect { operator, report })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Probe {
    Product(Symbol, Symbol),
    Derivation(VField, Symbol),
}

impl Probe {
    pub fn defect_operator(&self, weight: &Weight) -> Result<BandOperator> {
        match self {
            Probe::Product(f, g) => Ok(product_defect_operator(f, g, weight)),
            Probe::Derivation(v, f) => derivation_defect_operator(v, f, weight),
        }
    }
}

/// The defect at `weight` minus the finite-rank part of the same defect at
/// `h = 1/2`, carried over unchanged in the monomial basis.
///
/// At `h > 1/2` the index-type entries (such as the `−1` at `n = 0` of `FD − I`)
/// sit inside the rational bands and do not shrink with `ħ`; at `h = 1/2` they
/// become the correction table, which is what gets removed here.
pub fn reduced_defect(probe: &Probe, weight: &Weight) -> Result<BandOperator> {
    let index = probe.defect_operator(&Weight::half())?.corrections().clone();
    probe.defect_operator(weight)?.sub(&BandOperator::finite_rank(weight, index))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub weight: Weight,
    pub hbar: f64,
    /// HS norm of [`reduced_defect`].
    pub hs_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScalingFit {
    /// Least-squares slope of `log(norm)` against `log(ħ)` over all rows, and the
    /// slope between the two rows closest to `ħ = 0`.
    Slope { slope: f64, terminal_slope: f64 },
    /// Every defect vanished identically.
    ExactZero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingResult {
    pub rows: Vec<ScalingRow>,
    pub fit: ScalingFit,
}

/// Least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Measures how the HS norm of [`reduced_defect`] scales with `ħ`.
pub fn hbar_scaling(probe: &Probe, weights: &[Weight], horizon: usize) -> Result<ScalingResult> {
    if weights.len() < 4 {
        return Err(Error::InvalidArgument("scaling needs at least 4 weights".into()));
    }
    if let Some(w) = weights.iter().find(|w| w.is_limit_point()) {
        return Err(Error::InvalidArgument(format!("scaling weights must exceed 1/2, got {w}")));
    }
    let mut weights = weights.to_vec();
    weights.sort_by(|a, b| a.h().cmp(b.h()));
    let mut rows = Vec::with_capacity(weights.len());
    let mut all_zero = true;
    for w in weights {
        let op = reduced_defect(probe, &w)?;
        all_zero &= op.is_zero();
        let report = op.hs_report(horizon)?;
        if !report.hs_verdict {
            return Err(Error::InvalidArgument(format!(
                "defect at h = {w} is not Hilbert-Schmidt (band {:?})",
                report.offending_band
            )));
        }
        rows.push(ScalingRow { hbar: w.hbar().to_f64().unwrap_or(f64::NAN), hs_norm: report.hs_norm(), weight: w });
    }
    if all_zero {
        return Ok(ScalingResult { rows, fit: ScalingFit::ExactZero });
    }
    let points: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.hs_norm > 0.0).map(|r| (r.hbar.ln(), r.hs_norm.ln())).collect();
    if points.len() < 2 {
        return Err(Error::InvalidArgument("fewer than two nonzero norms to fit".into()));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    let slope = least_squares_slope(&xs, &ys);
    let terminal_slope = (ys[1] - ys[0]) / (xs[1] - xs[0]);
    Ok(ScalingResult { rows, fit: ScalingFit::Slope { slope, terminal_slope } })
}

/// `h_j = 1/2 + 2^{−j}`.
pub fn dyadic_weights(js: impl IntoIterator<Item = u32>) -> Vec<Weight> {
    js.into_iter()
        .map(|j| {
            let h =
                BigRational::new(1.into(), 2.into()) + BigRational::new(1.into(), num_bigint::BigInt::from(2).pow(j));
            Weight::new(h).expect("above 1/2")
        })
        .collect()
}
