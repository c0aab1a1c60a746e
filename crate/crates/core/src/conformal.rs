//! `q_R`-conformal generators `L_k` and their Witt defects
//! `Δ_{m,n} = [L_m, L_n] − (m − n)·L_{m+n}`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::berezin::{gen_d, gen_f, gen_sl2, RelationCheck};
use crate::error::{Error, Result};
use crate::exact_scalar::{DecayOrder, GaussianRational, Limit, Poly, RatFunc};
use crate::verma_ops::{BandOperator, DefectReport, Weight};

/// Largest `|k|` accepted by [`gen_l`].
pub const GENERATOR_CAP: i64 = 16;

/// `L_k = (ξ + (k+1)h)·∂_z^k` for `k ≥ 0` and
/// `L_{−j} = z^j·(ξ + (j+1)h) / ((ξ + 2h)…(ξ + 2h + j − 1))` for `j ≥ 1`.
pub fn gen_l(k: i64, weight: &Weight) -> Result<BandOperator> {
    if k.abs() > GENERATOR_CAP {
        return Err(Error::CapExceeded { k, cap: GENERATOR_CAP });
    }
    let h = weight.h_scalar();
    let j = k.unsigned_abs() as usize;
    let weight_shift = h.scale(&BigRational::from_integer((j as i64 + 1).into()));
    if k >= 0 {
        // ξ acts after ∂^k, on e_{n−k}
        let affine = Poly::linear(&weight_shift - &GaussianRational::from_int(k));
        let coeff = affine.mul(&Poly::falling_factorial(j));
        Ok(BandOperator::single_band(weight, -k, RatFunc::from_poly(coeff)))
    } else {
        let num = Poly::linear(weight_shift);
        let den = Poly::rising(&weight.two_h(), j);
        Ok(BandOperator::single_band(weight, j as i64, RatFunc::new(num, den)?))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WittDefect {
    pub m: i64,
    pub n: i64,
    pub weight: Weight,
    pub defect: BandOperator,
    pub report: DefectReport,
}

/// Exact `Δ_{m,n}` with its defect report (HS partial sums over columns `0..=horizon`).
pub fn witt_defect(m: i64, n: i64, weight: &Weight, horizon: usize) -> Result<WittDefect> {
    let defect = witt_defect_operator(m, n, weight)?;
    let report = defect.hs_report(horizon)?;
    Ok(WittDefect { m, n, weight: weight.clone(), defect, report })
}

pub fn witt_defect_operator(m: i64, n: i64, weight: &Weight) -> Result<BandOperator> {
    let (lm, ln) = (gen_l(m, weight)?, gen_l(n, weight)?);
    let target = gen_l(m + n, weight)?.scale(&GaussianRational::from_int(m - n));
    lm.commutator(&ln)?.sub(&target)
}

/// Exact identities among the generators at one weight.
pub fn exact_identity_suite(weight: &Weight) -> Result<Vec<RelationCheck>> {
    let l = |k| gen_l(k, weight);
    let c = |v: i64| GaussianRational::from_int(v);
    let mut checks = vec![
        RelationCheck::new("[L1, L-1] = 2 L0", &l(1)?.commutator(&l(-1)?)?, &l(0)?.scale(&c(2)))?,
        RelationCheck::new("[L2, L-1] = 3 L1", &l(2)?.commutator(&l(-1)?)?, &l(1)?.scale(&c(3)))?,
        RelationCheck::new("[L1, L2] = -L3", &l(1)?.commutator(&l(2)?)?, &l(3)?.neg())?,
    ];
    for k in -5..=5 {
        if k == 0 {
            continue;
        }
        checks.push(RelationCheck::new(
            format!("[L0, L{k}] = {} L{k}", -k),
            &l(0)?.commutator(&l(k)?)?,
            &l(k)?.scale(&c(-k)),
        )?);
    }
    for k in 1..=5 {
        checks.push(RelationCheck::new(format!("adj(L{k}) = L-{k}"), &l(k)?.adjoint(), &l(-k)?)?);
    }
    let sl2 = gen_sl2(weight);
    checks.push(RelationCheck::new("L-1 = z", &l(-1)?, &sl2.lower)?);
    checks.push(RelationCheck::new("L0 = xi + h", &l(0)?, &sl2.zero)?);
    checks.push(RelationCheck::new("L1 = z d^2 + 2h d", &l(1)?, &sl2.raise)?);
    checks.push(RelationCheck::new("adj(D) = F", &gen_d(weight).adjoint(), &gen_f(weight))?);
    Ok(checks)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub weight: Weight,
    pub m: i64,
    pub n: i64,
    pub hs_norm: f64,
    pub decay_order_min: DecayOrder,
    pub asymptotic_scalar: Limit,
    pub finite_rank_norm: f64,
}

/// Witt-defect measurements over a grid, ordered by `h`, then `m`, then `n`.
pub fn defect_sweep(pairs: &[(i64, i64)], weights: &[Weight], horizon: usize) -> Result<Vec<SweepRow>> {
    let mut weights = weights.to_vec();
    weights.sort_by(|a, b| a.h().cmp(b.h()));
    weights.dedup();
    let mut pairs = pairs.to_vec();
    pairs.sort_unstable();
    let cells: Vec<(Weight, (i64, i64))> =
        weights.iter().flat_map(|w| pairs.iter().map(move |p| (w.clone(), *p))).collect();
    cells
        .into_par_iter()
        .map(|(w, (m, n))| {
            let wd = witt_defect(m, n, &w, horizon)?;
            Ok(SweepRow {
                m,
                n,
                hs_norm: wd.report.hs_norm(),
                decay_order_min: wd.report.decay_order_min(),
                asymptotic_scalar: wd.report.asymptotic_scalar.clone(),
                finite_rank_norm: wd.report.finite_rank_norm(),
                weight: w,
            })
        })
        .collect()
}

/// Nonzero bands of `Δ_{m,n}` other than degree `−(m+n)`; empty when the
/// band bookkeeping holds.
pub fn stray_bands(defect: &WittDefect) -> BTreeMap<i64, RatFunc> {
    defect.defect.bands().iter().filter(|(&d, _)| d != -(defect.m + defect.n)).map(|(d, f)| (*d, f.clone())).collect()
}
