//! Rational functions of the level variable `n` in canonical form.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{GaussianRational, Poly, ScalarError};

/// `num / den` with `gcd(num, den) = 1`, `den` monic, and zero stored as `0/1`.
///
/// The variable stands for the eigenvalue of `ξ = z∂_z` on `e_n = z^n`, so every
/// rational function of `ξ` becomes a `RatFunc` acting diagonally on the basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// `deg(den) - deg(num)`, with `Infinite` standing for the zero function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DecayOrder {
    Finite(i64),
    Infinite,
}

impl DecayOrder {
    pub fn at_least(self, k: i64) -> bool {
        self >= DecayOrder::Finite(k)
    }
}

impl fmt::Display for DecayOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecayOrder::Finite(k) => write!(f, "{k}"),
            DecayOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// Behaviour as `n → ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Finite(GaussianRational),
    Diverges,
}

/// Binary operation selector for [`rf_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

impl RatFunc {
    /// Builds the canonical form. Fails when `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
        let lead = den.leading().expect("nonzero denominator").inv().expect("nonzero");
        RatFunc { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(GaussianRational::from_int(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// `n`.
    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    /// `1 / p`; fails when `p` is zero.
    pub fn recip_poly(p: Poly) -> Result<Self, ScalarError> {
        Self::new(Poly::one(), p)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }

    /// Returns the constant value when the function is constant.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(GaussianRational::zero()),
            (Some(0), Some(0)) => Some(self.num.coeffs()[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return Self::canonical(self.num.add(&o.num), self.den.clone());
        }
        Self::canonical(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::canonical(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, ScalarError> {
        if o.is_zero() {
            return Err(ScalarError::DivisionByZeroFunction);
        }
        Ok(Self::canonical(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    pub fn scale(&self, c: &GaussianRational) -> RatFunc {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Coefficient-wise conjugate; equals pointwise conjugation at real `n`.
    pub fn conj(&self) -> RatFunc {
        RatFunc { num: self.num.conj(), den: self.den.conj() }
    }

    /// `|f(n)|²` as a rational function of real `n`. Has real coefficients.
    pub fn abs_sqr(&self) -> RatFunc {
        self.mul(&self.conj())
    }

    /// `f(n + s)`.
    pub fn shift(&self, s: i64) -> RatFunc {
        if s == 0 || self.is_zero() {
            return self.clone();
        }
        let s = GaussianRational::from_int(s);
        // a shift of a monic denominator stays monic and keeps coprimality
        RatFunc { num: self.num.shift(&s), den: self.den.shift(&s) }
    }

    pub fn eval(&self, k: i64) -> Result<GaussianRational, ScalarError> {
        let d = self.den.eval_int(k);
        if d.is_zero() {
            return Err(ScalarError::Pole(k));
        }
        let n = self.num.eval_int(k);
        Ok(&n / &d)
    }

    /// Floating-point evaluation of the real part; only meaningful for real functions.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn decay_order(&self) -> DecayOrder {
        match self.num.degree() {
            None => DecayOrder::Infinite,
            Some(dn) => DecayOrder::Finite(self.den.degree().unwrap_or(0) as i64 - dn as i64),
        }
    }

    pub fn limit_at_infinity(&self) -> Limit {
        match self.decay_order() {
            DecayOrder::Infinite => Limit::Finite(GaussianRational::zero()),
            DecayOrder::Finite(k) => match k.cmp(&0) {
                Ordering::Greater => Limit::Finite(GaussianRational::zero()),
                Ordering::Less => Limit::Diverges,
                Ordering::Equal => Limit::Finite(
                    self.num.leading().expect("nonzero numerator") / self.den.leading().expect("nonzero denominator"),
                ),
            },
        }
    }

    /// `f(n + 1) - f(n)`.
    pub fn forward_difference(&self) -> RatFunc {
        self.shift(1).sub(self)
    }

    /// Integer poles `k ≥ 0`, ascending.
    pub fn nonneg_integer_poles(&self) -> Vec<u64> {
        self.den.nonneg_integer_roots()
    }

    /// Every positive real root of numerator and denominator lies strictly below
    /// the returned value, so the sign is constant on `[horizon, ∞)`.
    pub fn sign_horizon(&self) -> u64 {
        self.num.positive_root_bound().max(self.den.positive_root_bound())
    }

    /// Sign of a real function for all sufficiently large `n`.
    pub fn eventual_sign(&self) -> i32 {
        self.num.leading_sign() * self.den.leading_sign()
    }

    /// Real parts of (leading numerator coefficient, next numerator coefficient,
    /// next denominator coefficient) for a nonzero real function.
    pub fn real_leading_terms(&self) -> Option<(BigRational, BigRational, BigRational)> {
        if !self.is_real() || self.is_zero() {
            return None;
        }
        let num = self.num.coeffs();
        let den = self.den.coeffs();
        let nl = num.last()?.re.clone();
        let nsub = if num.len() >= 2 { num[num.len() - 2].re.clone() } else { BigRational::zero() };
        let dsub = if den.len() >= 2 { den[den.len() - 2].re.clone() } else { BigRational::zero() };
        Some((nl, nsub, dsub))
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

/// Arithmetic dispatch used by callers that select the operation at runtime.
pub fn rf_arith(f: &RatFunc, g: &RatFunc, kind: ArithKind) -> Result<RatFunc, ScalarError> {
    Ok(match kind {
        ArithKind::Add => f.add(g),
        ArithKind::Sub => f.sub(g),
        ArithKind::Mul => f.mul(g),
        ArithKind::Div => f.div(g)?,
    })
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.coeffs()[0].is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(c: i64) -> Poly {
        Poly::linear(GaussianRational::from_int(c))
    }

    fn rf(num: Poly, den: Poly) -> RatFunc {
        RatFunc::new(num, den).unwrap()
    }

    #[test]
    fn add_to_constant() {
        let a = rf(Poly::var(), lin(1));
        let b = rf(Poly::one(), lin(1));
        assert_eq!(a.add(&b), RatFunc::one());
    }

    #[test]
    fn mul_cancels() {
        let a = rf(lin(1), lin(2));
        let b = rf(lin(2), lin(3));
        assert_eq!(a.mul(&b), rf(lin(1), lin(3)));
    }

    #[test]
    fn canonical_factorization() {
        let f = rf(Poly::from_ints(&[-1, 0, 1]), lin(-1));
        assert_eq!(f, RatFunc::from_poly(lin(1)));
        assert_eq!(f.den(), &Poly::one());
    }

    #[test]
    fn denominator_is_monic() {
        let f = rf(Poly::from_ints(&[3]), Poly::from_ints(&[4, 2]));
        assert_eq!(f.den(), &lin(2));
        assert_eq!(f.num(), &Poly::constant(GaussianRational::from_frac(3, 2)));
    }

    #[test]
    fn zero_is_unique() {
        let f = rf(Poly::zero(), lin(7));
        assert_eq!(f, RatFunc::zero());
        assert_eq!(f.den(), &Poly::one());
    }

    #[test]
    fn division_by_zero_function() {
        assert_eq!(RatFunc::one().div(&RatFunc::zero()), Err(ScalarError::DivisionByZeroFunction));
    }

    #[test]
    fn eval_examples() {
        // n/(n-1+2h) at h=1 → n/(n+1); at 3 → 3/4
        assert_eq!(rf(Poly::var(), lin(1)).eval(3).unwrap(), GaussianRational::from_frac(3, 4));
        // (2h-1)/(n+2h) at h=1, n=0 → 1/2
        assert_eq!(rf(Poly::one(), lin(2)).eval(0).unwrap(), GaussianRational::from_frac(1, 2));
        assert_eq!(rf(Poly::one(), lin(-1)).eval(1), Err(ScalarError::Pole(1)));
    }

    #[test]
    fn decay_orders() {
        assert_eq!(rf(Poly::one(), lin(1).mul(&lin(2))).decay_order(), DecayOrder::Finite(2));
        assert_eq!(rf(lin(1), lin(2)).decay_order(), DecayOrder::Finite(0));
        assert_eq!(RatFunc::zero().decay_order(), DecayOrder::Infinite);
        assert!(DecayOrder::Infinite > DecayOrder::Finite(i64::MAX));
    }

    #[test]
    fn limits() {
        assert_eq!(
            rf(Poly::from_ints(&[3, 2]), lin(1)).limit_at_infinity(),
            Limit::Finite(GaussianRational::from_int(2))
        );
        assert_eq!(rf(Poly::one(), lin(2)).limit_at_infinity(), Limit::Finite(GaussianRational::zero()));
        assert_eq!(rf(Poly::from_ints(&[0, 0, 1]), lin(1)).limit_at_infinity(), Limit::Diverges);
    }

    #[test]
    fn abs_sqr_is_real() {
        let f = rf(Poly::from_coeffs(vec![GaussianRational::i(), GaussianRational::from_int(2)]), lin(3));
        let a = f.abs_sqr();
        assert!(a.is_real());
        let v = f.eval(4).unwrap();
        assert_eq!(a.eval(4).unwrap().re, v.norm_sqr());
    }
}
