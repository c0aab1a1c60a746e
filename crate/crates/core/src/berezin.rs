//! Lobachevskiĭ–Berezin generators `t = D = ∂_z`, `t* = F = z∘(ξ + 2h)⁻¹` and
//! exact checks of their defining relations.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact_scalar::{GaussianRational, Poly, RatFunc};
use crate::verma_ops::{BandOperator, NormBound, Weight};

/// `D e_n = n·e_{n−1}`.
pub fn gen_d(weight: &Weight) -> BandOperator {
    BandOperator::single_band(weight, -1, RatFunc::var())
}

/// `F e_n = e_{n+1} / (n + 2h)`: the rational function of `ξ` acts first.
pub fn gen_f(weight: &Weight) -> BandOperator {
    BandOperator::single_band(weight, 1, RatFunc::recip_poly(Poly::linear(weight.two_h())).expect("nonzero"))
}

/// The other ordering `(ξ + 2h)⁻¹∘z`, i.e. `e_n ↦ e_{n+1} / (n + 1 + 2h)`.
/// Kept only to show that it breaks the Berezin relation.
pub fn gen_f_reversed(weight: &Weight) -> BandOperator {
    let c = &weight.two_h() + &GaussianRational::one();
    BandOperator::single_band(weight, 1, RatFunc::recip_poly(Poly::linear(c)).expect("nonzero"))
}

/// `sl(2)` generators on `V_h`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2 {
    /// `L₋₁ = z`
    pub lower: BandOperator,
    /// `L₀ = z∂_z + h`
    pub zero: BandOperator,
    /// `L₁ = z∂_z² + 2h∂_z`
    pub raise: BandOperator,
}

pub fn gen_sl2(weight: &Weight) -> Sl2 {
    let lower = BandOperator::single_band(weight, 1, RatFunc::one());
    let zero = BandOperator::single_band(weight, 0, RatFunc::from_poly(Poly::linear(weight.h_scalar())));
    let shift = &weight.two_h() - &GaussianRational::one();
    let raise = BandOperator::single_band(weight, -1, RatFunc::from_poly(Poly::var().mul(&Poly::linear(shift))));
    Sl2 { lower, zero, raise }
}

/// Residual `lhs − rhs` of one operator identity.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub relation: String,
    pub residual: BandOperator,
}

impl RelationCheck {
    pub fn new(relation: impl Into<String>, lhs: &BandOperator, rhs: &BandOperator) -> Result<Self> {
        Ok(RelationCheck { relation: relation.into(), residual: lhs.sub(rhs)? })
    }

    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }

    /// Lowest-degree nonzero band of the residual, if any.
    pub fn witness_band(&self) -> Option<(i64, &RatFunc)> {
        self.residual.bands().iter().next().map(|(d, f)| (*d, f))
    }
}

/// Outcome of the two Berezin relations.
#[derive(Clone, Debug, PartialEq)]
pub struct BerezinCheck {
    /// `[DF, FD] = 0`
    pub commuting: RelationCheck,
    /// `ħ·[D, F] = (1 − DF)(1 − FD)`
    pub main: RelationCheck,
}

impl BerezinCheck {
    pub fn passed(&self) -> bool {
        self.commuting.passed() && self.main.passed()
    }
}

/// Checks `[tt*, t*t] = 0` and `ħ·[t, t*] = (1 − tt*)(1 − t*t)` for arbitrary
/// candidate generators `t`, `t*`.
///
/// The relation is multiplied through by `ħ = q_R⁻¹` so the same check is
/// well-posed at `h = 1/2`.
pub fn check_berezin_relations_for(t: &BandOperator, t_star: &BandOperator) -> Result<BerezinCheck> {
    let weight = t.weight();
    let id = BandOperator::identity(weight);
    let tts = t.mul(t_star)?;
    let tst = t_star.mul(t)?;
    let commuting = RelationCheck::new("[tt*, t*t] = 0", &tts.commutator(&tst)?, &BandOperator::zero(weight))?;
    let lhs = t.commutator(t_star)?.scale(&GaussianRational::real(weight.hbar()));
    let rhs = id.sub(&tts)?.mul(&id.sub(&tst)?)?;
    let main = RelationCheck::new("hbar [t, t*] = (1 - tt*)(1 - t*t)", &lhs, &rhs)?;
    Ok(BerezinCheck { commuting, main })
}

pub fn check_berezin_relations(weight: &Weight) -> BerezinCheck {
    check_berezin_relations_for(&gen_d(weight), &gen_f(weight)).expect("same weight")
}

/// Result of the `s = q_R^{-1/2} t` form of the relation.
#[derive(Clone, Debug, PartialEq)]
pub struct SFormCheck {
    /// `[s, s*] = (1 − q_R ss*)(1 − q_R s*s)` with `ss* = q_R⁻¹·tt*`, `s*s = q_R⁻¹·t*t`.
    pub s_relation: RelationCheck,
    pub berezin: BerezinCheck,
}

impl SFormCheck {
    pub fn passed(&self) -> bool {
        self.s_relation.passed() && self.berezin.passed()
    }
}

/// Verifies the `s`-form without materializing `√q_R`: every product of `s` with
/// `s*` carries exactly one factor `q_R⁻¹`, so the relation is checked on
/// `q_R⁻¹·DF`, `q_R⁻¹·FD`.
pub fn check_s_form(weight: &Weight) -> Result<SFormCheck> {
    let q = weight.q_r().ok_or(Error::QrUndefined)?;
    let sigma = GaussianRational::real(q.recip());
    let q = GaussianRational::real(q);
    debug_assert!((&q * &sigma).is_one());
    let (d, f) = (gen_d(weight), gen_f(weight));
    let id = BandOperator::identity(weight);
    let ss = d.mul(&f)?.scale(&sigma);
    let s_s = f.mul(&d)?.scale(&sigma);
    let lhs = ss.sub(&s_s)?;
    let rhs = id.sub(&ss.scale(&q))?.mul(&id.sub(&s_s.scale(&q))?)?;
    Ok(SFormCheck {
        s_relation: RelationCheck::new("[s, s*] = (1 - q ss*)(1 - q s*s)", &lhs, &rhs)?,
        berezin: check_berezin_relations(weight),
    })
}

/// At `h = 1/2`: `DF = I` and `FD = I − P₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzCheck {
    pub df_is_identity: RelationCheck,
    pub fd_is_identity_minus_p0: RelationCheck,
}

impl ToeplitzCheck {
    pub fn passed(&self) -> bool {
        self.df_is_identity.passed() && self.fd_is_identity_minus_p0.passed()
    }
}

pub fn toeplitz_limit_check(weight: &Weight) -> Result<ToeplitzCheck> {
    if !weight.is_limit_point() {
        return Err(Error::WeightMismatch);
    }
    let (d, f) = (gen_d(weight), gen_f(weight));
    let id = BandOperator::identity(weight);
    let p0 = BandOperator::projector(weight, 0);
    Ok(ToeplitzCheck {
        df_is_identity: RelationCheck::new("DF = I", &d.mul(&f)?, &id)?,
        fd_is_identity_minus_p0: RelationCheck::new("FD = I - P0", &f.mul(&d)?, &id.sub(&p0)?)?,
    })
}

/// Operator-norm bounds for `D`, `F`, `DF`, `FD`.
pub fn boundedness_report(weight: &Weight, scan: usize) -> Result<BTreeMap<&'static str, NormBound>> {
    let (d, f) = (gen_d(weight), gen_f(weight));
    let df = d.mul(&f)?;
    let fd = f.mul(&d)?;
    Ok(BTreeMap::from([
        ("D", d.op_norm_bound(scan)?),
        ("F", f.op_norm_bound(scan)?),
        ("DF", df.op_norm_bound(scan)?),
        ("FD", fd.op_norm_bound(scan)?),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalar::Poly;

    fn w(p: i64, q: i64) -> Weight {
        Weight::from_frac(p, q).unwrap()
    }

    fn q(p: i64, r: i64) -> GaussianRational {
        GaussianRational::from_frac(p, r)
    }

    #[test]
    fn generator_actions() {
        let h = w(1, 1);
        assert_eq!(gen_d(&h).apply(1), vec![(0, q(1, 1))]);
        assert_eq!(gen_f(&h).apply(2), vec![(3, q(1, 4))]);
        assert_eq!(gen_d(&h).adjoint(), gen_f(&h));
    }

    #[test]
    fn sl2_relations() {
        for h in [Weight::half(), w(3, 4), w(1, 1), w(5, 1)] {
            let s = gen_sl2(&h);
            let two_l0 = s.zero.scale(&q(2, 1));
            assert_eq!(s.raise.commutator(&s.lower).unwrap(), two_l0);
            assert_eq!(s.zero.commutator(&s.lower).unwrap(), s.lower);
        }
        assert_eq!(gen_sl2(&w(1, 1)).raise.apply(2), vec![(1, q(6, 1))]);
    }

    #[test]
    fn relations_hold_at_sampled_weights() {
        for h in [w(3, 4), w(1, 1), w(3, 2), w(5, 1), w(101, 200), Weight::half()] {
            let c = check_berezin_relations(&h);
            assert!(c.passed(), "h = {h}: {:?}", c);
        }
    }

    #[test]
    fn both_sides_at_h1() {
        // ħ[D,F] = diag(1/((n+2)(n+1))) at h = 1
        let h = w(1, 1);
        let c = gen_d(&h).commutator(&gen_f(&h)).unwrap();
        assert_eq!(c.band(0).unwrap(), &RatFunc::recip_poly(Poly::from_ints(&[2, 3, 1])).unwrap());
    }

    #[test]
    fn reversed_ordering_fails() {
        for h in [w(3, 4), w(1, 1), w(5, 1)] {
            let c = check_berezin_relations_for(&gen_d(&h), &gen_f_reversed(&h)).unwrap();
            assert!(!c.main.passed());
            let (deg, residual) = c.main.witness_band().unwrap();
            assert_eq!(deg, 0);
            assert!(!residual.is_zero());
        }
    }

    #[test]
    fn s_form() {
        assert!(check_s_form(&w(1, 1)).unwrap().passed());
        assert!(check_s_form(&w(3, 4)).unwrap().passed());
        assert_eq!(check_s_form(&Weight::half()).unwrap_err(), Error::QrUndefined);
    }

    #[test]
    fn toeplitz_limit() {
        assert!(toeplitz_limit_check(&Weight::half()).unwrap().passed());
        assert_eq!(toeplitz_limit_check(&w(1, 1)).unwrap_err(), Error::WeightMismatch);
        // away from the limit DF = diag((n+1)/(n+2)) ≠ I
        let h = w(1, 1);
        let df = gen_d(&h).mul(&gen_f(&h)).unwrap();
        let expect = RatFunc::new(Poly::from_ints(&[1, 1]), Poly::from_ints(&[2, 1])).unwrap();
        assert_eq!(df.band(0), Some(&expect));
    }

    #[test]
    fn bounded_for_all_weights() {
        for h in [Weight::half(), w(1, 1), w(5, 1)] {
            let r = boundedness_report(&h, 64).unwrap();
            assert_eq!(r["D"], NormBound::Bounded(1.0), "h = {h}");
            assert_eq!(r["F"], NormBound::Bounded(1.0), "h = {h}");
            assert!(r.values().all(|b| matches!(b, NormBound::Bounded(x) if x.is_finite())));
        }
    }
}
