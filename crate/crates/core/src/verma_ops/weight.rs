use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_scalar::{fmt_rational, GaussianRational, Poly, RatFunc};

/// Lowest weight `h ≥ 1/2` of the Verma module, with `ħ = 2h − 1` and `q_R = 1/ħ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    h: BigRational,
}

impl Weight {
    pub fn new(h: BigRational) -> Result<Self> {
        if h < BigRational::new(1.into(), 2.into()) {
            return Err(Error::WeightBelowHalf(fmt_rational(&h)));
        }
        Ok(Weight { h })
    }

    pub fn from_frac(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("zero denominator in weight".into()));
        }
        Self::new(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// The limit point `h = 1/2` (`q_R = ∞`).
    pub fn half() -> Self {
        Weight { h: BigRational::new(1.into(), 2.into()) }
    }

    /// The weight with `ħ = hbar`, i.e. `h = (1 + ħ)/2`.
    pub fn from_hbar(hbar: BigRational) -> Result<Self> {
        Self::new((hbar + BigRational::one()) / BigRational::from_integer(2.into()))
    }

    pub fn h(&self) -> &BigRational {
        &self.h
    }

    pub fn hbar(&self) -> BigRational {
        &self.h * BigRational::from_integer(2.into()) - BigRational::one()
    }

    /// `None` at the limit point.
    pub fn q_r(&self) -> Option<BigRational> {
        let hbar = self.hbar();
        (!hbar.is_zero()).then(|| hbar.recip())
    }

    pub fn is_limit_point(&self) -> bool {
        self.hbar().is_zero()
    }

    pub fn h_scalar(&self) -> GaussianRational {
        GaussianRational::real(self.h.clone())
    }

    pub fn two_h(&self) -> GaussianRational {
        GaussianRational::real(&self.h * BigRational::from_integer(2.into()))
    }

    pub fn norm_weights(&self) -> NormWeights {
        NormWeights { two_h: &self.h * BigRational::from_integer(2.into()) }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_rational(&self.h))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({self})")
    }
}

/// Squared norms `w²_n = ⟨e_n, e_n⟩ = n!·(2h)_n` of the monomial basis.
///
/// Fixed by `⟨e_0, e_0⟩ = 1` and `L₋₁† = L₁`; all Hilbert–Schmidt and operator
/// norms in this crate are taken in this inner product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormWeights {
    two_h: BigRational,
}

impl NormWeights {
    pub fn w2(&self, n: usize) -> BigRational {
        (0..n).fold(BigRational::one(), |acc, m| {
            acc * BigRational::from_integer(BigInt::from(m + 1))
                * (&self.two_h + BigRational::from_integer(BigInt::from(m)))
        })
    }

    /// `w²_to / w²_from`.
    pub fn ratio_value(&self, from: usize, to: usize) -> BigRational {
        let step = |m: usize| {
            BigRational::from_integer(BigInt::from(m + 1)) * (&self.two_h + BigRational::from_integer(BigInt::from(m)))
        };
        if to >= from {
            (from..to).fold(BigRational::one(), |acc, m| acc * step(m))
        } else {
            (to..from).fold(BigRational::one(), |acc, m| acc / step(m))
        }
    }

    /// `w²_{n+d} / w²_n` as a rational function of `n`.
    pub fn ratio(&self, d: i64) -> RatFunc {
        let two_h = GaussianRational::real(self.two_h.clone());
        if d >= 0 {
            let d = d as usize;
            RatFunc::from_poly(Poly::rising(&GaussianRational::one(), d).mul(&Poly::rising(&two_h, d)))
        } else {
            let k = d.unsigned_abs() as usize;
            let shift = GaussianRational::from_int(-(k as i64));
            let den = Poly::rising(&(&shift + &GaussianRational::one()), k).mul(&Poly::rising(&(&two_h + &shift), k));
            RatFunc::recip_poly(den).expect("nonzero product")
        }
    }
}
