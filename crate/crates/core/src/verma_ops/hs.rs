//! Hilbert–Schmidt membership, certified HS norms and operator-norm bounds.
//!
//! Orthonormal entries of a band `d` are `φ_d(n)·√(w²_{n+d}/w²_n)`, so
//! `|entry(n)|²` is itself a real rational function of `n`. A band is
//! Hilbert–Schmidt iff that function decays at order at least 2.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{BandOperator, Corrections};
use crate::error::{Error, Result};
use crate::exact_scalar::{DecayOrder, GaussianRational, Limit, Poly, RatFunc};

/// Largest stretch of integers scanned explicitly when a tail majorant is not yet monotone.
const MAX_EXPLICIT_SCAN: u64 = 2_000_000;

/// Relative allowance for floating-point summation and evaluation error.
const ROUNDING_ALLOWANCE: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct BandDefect {
    pub degree: i64,
    pub coefficient: RatFunc,
    /// `|orthonormal entry(n)|²`.
    pub entry_sq: RatFunc,
    pub decay: DecayOrder,
    pub hilbert_schmidt: bool,
}

/// `partial_sum` covers columns `0..=n_used`; `partial_sum + tail_bound` bounds the
/// HS norm² from above (`tail_bound` is infinite when the operator is not HS).
#[derive(Clone, Debug, PartialEq)]
pub struct HsNormSq {
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub n_used: usize,
    /// Exact norm² for operators with no rational bands.
    pub exact_partial: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefectReport {
    pub bands: Vec<BandDefect>,
    pub corrections: Corrections,
    /// HS norm² of the correction table on its own, exact.
    pub finite_rank_norm_sq: BigRational,
    /// Limit at infinity of the diagonal band (zero without one).
    pub asymptotic_scalar: Limit,
    pub hs_verdict: bool,
    /// First band that fails the HS test.
    pub offending_band: Option<i64>,
    pub hs_norm_sq: HsNormSq,
}

impl DefectReport {
    /// Certified upper value `√(partial + tail)`.
    pub fn hs_norm(&self) -> f64 {
        (self.hs_norm_sq.partial_sum + self.hs_norm_sq.tail_bound).sqrt()
    }

    pub fn finite_rank_norm(&self) -> f64 {
        self.finite_rank_norm_sq.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Smallest `|entry|²` decay order over the bands; `Infinite` without bands.
    pub fn decay_order_min(&self) -> DecayOrder {
        self.bands.iter().map(|b| b.decay).min().unwrap_or(DecayOrder::Infinite)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormBound {
    Bounded(f64),
    Unbounded,
}

/// Neumaier-compensated sum.
#[derive(Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Upper bound on `sup_{n ≥ from} q(n)` for a real rational function with a finite
/// limit, using monotonicity beyond the root horizon of its forward difference.
fn eventual_sup(q: &RatFunc, from: u64) -> Option<f64> {
    let limit = match q.limit_at_infinity() {
        Limit::Finite(v) => v.to_f64_pair().0,
        Limit::Diverges => return None,
    };
    let horizon = q.forward_difference().sign_horizon().max(q.den().positive_root_bound()).max(from);
    if horizon - from > MAX_EXPLICIT_SCAN {
        return None;
    }
    let mut sup = limit;
    for n in from..=horizon {
        if q.den().eval_f64(n as f64) != 0.0 {
            sup = sup.max(q.eval_f64(n as f64));
        }
    }
    Some(sup)
}

/// Certified bound on `Σ_{n > m} g(n)` for a nonnegative real `g` of decay order `p ≥ 2`.
///
/// Uses the majorant `g(n) ≤ A·(n − a)^{−p}` where `a` matches the first
/// subleading term of `g`, and the midpoint integral bound for the convex majorant.
fn certified_tail(g: &RatFunc, p: i64, m: u64) -> f64 {
    debug_assert!(p >= 2);
    let Some((lead, num_sub, den_sub)) = g.real_leading_terms() else {
        return 0.0;
    };
    let p_rat = BigRational::from_integer(p.into());
    let mut a = (num_sub / &lead - den_sub) / &p_rat;
    let half_m = BigRational::new(m.into(), 2.into());
    if a > half_m {
        a = BigRational::zero();
    }
    let shifted = Poly::linear(GaussianRational::real(-a.clone()));
    let scale = (0..p).fold(Poly::one(), |acc, _| acc.mul(&shifted));
    let q = g.mul(&RatFunc::from_poly(scale));
    let Some(sup) = eventual_sup(&q, m + 1) else {
        return f64::INFINITY;
    };
    let base = m as f64 + 0.5 - a.to_f64().unwrap_or(f64::NAN);
    sup.max(0.0) * (1.0 + ROUNDING_ALLOWANCE) * base.powi(1 - p as i32) / (p - 1) as f64
}

impl BandOperator {
    /// `|orthonormal entry|²` of band `d` as a rational function.
    pub fn entry_sq(&self, d: i64) -> Option<RatFunc> {
        let nw = self.weight.norm_weights();
        self.bands.get(&d).map(|phi| phi.abs_sqr().mul(&nw.ratio(d)))
    }

    /// Squared orthonormal modulus of the exact entry at `(row, col)`.
    fn orthonormal_sq(&self, row: usize, col: usize) -> BigRational {
        let nw = self.weight.norm_weights();
        self.entry(row, col).norm_sqr() * nw.ratio_value(col, row)
    }

    /// Decides Hilbert–Schmidt membership and measures the HS norm² with
    /// columns `0..=n` summed explicitly and a certified bound for the rest.
    pub fn hs_report(&self, n: usize) -> Result<DefectReport> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("HS horizon N = {n} must be at least 2")));
        }
        let mut bands = Vec::new();
        let mut partial = Sum::default();
        let mut tail = 0.0f64;
        for (&d, phi) in &self.bands {
            let entry_sq = self.entry_sq(d).expect("band present");
            let decay = entry_sq.decay_order();
            let hs = decay.at_least(2);
            let start = (-d).max(0) as usize;
            let poles = phi.nonneg_integer_poles();
            let skip = |c: usize| {
                poles.contains(&(c as u64)) || self.corrections.contains_key(&(((c as i64) + d) as usize, c))
            };
            for c in start..=n {
                if !skip(c) {
                    partial.add(entry_sq.eval_f64(c as f64));
                }
            }
            if !hs {
                tail = f64::INFINITY;
            } else if let DecayOrder::Finite(p) = decay {
                let mut from = n.max(start) as u64;
                // the majorant needs a pole-free range
                let last_pole = entry_sq.nonneg_integer_poles().last().copied().unwrap_or(0);
                while from < last_pole {
                    from += 1;
                    if !skip(from as usize) && entry_sq.den().eval_f64(from as f64) != 0.0 {
                        tail += entry_sq.eval_f64(from as f64);
                    }
                }
                if start > n {
                    tail += entry_sq.eval_f64(start as f64);
                }
                tail += certified_tail(&entry_sq, p, from);
            }
            bands.push(BandDefect { degree: d, coefficient: phi.clone(), entry_sq, decay, hilbert_schmidt: hs });
        }
        let nw = self.weight.norm_weights();
        let mut exact_corr = BigRational::zero();
        let mut finite_rank = BigRational::zero();
        for (&(r, c), v) in &self.corrections {
            exact_corr += self.orthonormal_sq(r, c);
            finite_rank += v.norm_sqr() * nw.ratio_value(c, r);
        }
        let band_partial = partial.value();
        partial.add(exact_corr.to_f64().unwrap_or(f64::NAN));
        tail += band_partial.abs() * ROUNDING_ALLOWANCE;
        let offending_band = bands.iter().find(|b| !b.hilbert_schmidt).map(|b| b.degree);
        let asymptotic_scalar =
            self.bands.get(&0).map(RatFunc::limit_at_infinity).unwrap_or(Limit::Finite(GaussianRational::zero()));
        Ok(DefectReport {
            hs_verdict: offending_band.is_none(),
            offending_band,
            asymptotic_scalar,
            finite_rank_norm_sq: finite_rank,
            corrections: self.corrections.clone(),
            hs_norm_sq: HsNormSq {
                partial_sum: partial.value(),
                tail_bound: if self.bands.is_empty() { 0.0 } else { tail },
                n_used: n,
                exact_partial: self.bands.is_empty().then_some(exact_corr),
            },
            bands,
        })
    }

    /// Upper bound on the operator norm: the sum over bands of the supremum of
    /// their orthonormal entries plus the Frobenius norm of the correction table.
    ///
    /// Entries are scanned up to `scan`; beyond it the supremum is the larger of
    /// the next entry and the limit, which requires `|entry|²` to be monotone past
    /// `scan` (certified from the roots of its forward difference).
    pub fn op_norm_bound(&self, scan: usize) -> Result<NormBound> {
        if scan < 16 {
            return Err(Error::InvalidArgument(format!("scan horizon {scan} must be at least 16")));
        }
        let mut total = 0.0f64;
        for (&d, phi) in &self.bands {
            let g = self.entry_sq(d).expect("band present");
            if !g.decay_order().at_least(0) {
                return Ok(NormBound::Unbounded);
            }
            let limit = match g.limit_at_infinity() {
                Limit::Finite(v) => v.to_f64_pair().0,
                Limit::Diverges => return Ok(NormBound::Unbounded),
            };
            let horizon = g.forward_difference().sign_horizon().max(g.den().positive_root_bound());
            if horizon > scan as u64 + 1 {
                return Err(Error::MonotonicityUndecided { degree: d, needed: horizon });
            }
            let poles = phi.nonneg_integer_poles();
            let start = (-d).max(0) as usize;
            let mut sup = limit.max(0.0);
            for c in start..=scan + 1 {
                if !poles.contains(&(c as u64)) {
                    sup = sup.max(g.eval_f64(c as f64));
                }
            }
            total += sup.sqrt();
        }
        let nw = self.weight.norm_weights();
        let frob: BigRational = self.corrections.iter().map(|(&(r, c), v)| v.norm_sqr() * nw.ratio_value(c, r)).sum();
        total += frob.to_f64().unwrap_or(f64::NAN).sqrt();
        Ok(NormBound::Bounded(total))
    }
}
