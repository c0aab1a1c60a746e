//! Dense univariate polynomials in the level variable `n` over the Gaussian rationals.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::GaussianRational;

/// Coefficients in ascending degree; never has a trailing zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `n`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    /// `n + c`.
    pub fn linear(c: GaussianRational) -> Self {
        Self::from_coeffs(vec![c, GaussianRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let len = self.coeffs.len().max(o.coeffs.len());
        let zero = GaussianRational::zero();
        Poly::from_coeffs(
            (0..len).map(|k| self.coeffs.get(k).unwrap_or(&zero) + o.coeffs.get(k).unwrap_or(&zero)).collect(),
        )
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn conj(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(GaussianRational::conj).collect() }
    }

    /// Euclidean division; panics when `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![GaussianRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &(&c * b);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_int(&self, k: i64) -> GaussianRational {
        if self.is_real() {
            let x = BigRational::from_integer(k.into());
            let mut acc = BigRational::zero();
            for c in self.coeffs.iter().rev() {
                acc = acc * &x + &c.re;
            }
            return GaussianRational::real(acc);
        }
        self.eval(&GaussianRational::from_int(k))
    }

    /// Real-part evaluation in floating point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.re.to_f64().unwrap_or(f64::NAN))
    }

    /// `p(n + s)`.
    pub fn shift(&self, s: &GaussianRational) -> Poly {
        if s.is_zero() || self.coeffs.len() <= 1 {
            return self.clone();
        }
        let lin = Poly::linear(s.clone());
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// `∏_{i=0}^{len-1} (n + start + i)`.
    pub fn rising(start: &GaussianRational, len: usize) -> Poly {
        (0..len).fold(Poly::one(), |acc, i| acc.mul(&Poly::linear(start + &GaussianRational::from_int(i as i64))))
    }

    /// `n (n-1) … (n-len+1)`.
    pub fn falling_factorial(len: usize) -> Poly {
        (0..len).fold(Poly::one(), |acc, i| acc.mul(&Poly::linear(GaussianRational::from_int(-(i as i64)))))
    }

    /// Cauchy bound `1 + max |a_i / a_d|` rounded up: every complex root has modulus below it.
    /// Computed exactly; `None` for constants.
    pub fn root_bound(&self) -> Option<u64> {
        let d = self.degree().filter(|&d| d > 0)?;
        let lead = self.coeffs[d].norm_sqr();
        let max_ratio =
            self.coeffs[..d]
                .iter()
                .map(|c| c.norm_sqr() / &lead)
                .fold(BigRational::zero(), |m, r| if r > m { r } else { m });
        // smallest integer s with s² ≥ max_ratio
        let approx = max_ratio.to_f64().unwrap_or(f64::MAX).sqrt();
        let mut s = BigRational::from_integer((approx.ceil() as u64).saturating_sub(1).into());
        while &s * &s < max_ratio {
            s += BigRational::one();
        }
        let s = s.to_integer().to_u64().unwrap_or(u64::MAX);
        Some(s.saturating_add(1))
    }

    /// Upper bound on the positive real roots of a real polynomial (Cauchy's rule on
    /// the coefficients whose sign differs from the leading one): every real root
    /// `x > 0` satisfies `x < bound`. Falls back to [`Poly::root_bound`] for
    /// non-real coefficients. `0` when there is no positive root.
    pub fn positive_root_bound(&self) -> u64 {
        let Some(d) = self.degree().filter(|&d| d > 0) else {
            return 0;
        };
        if !self.is_real() {
            return self.root_bound().unwrap_or(0);
        }
        let lead = &self.coeffs[d].re;
        let opposite: Vec<(usize, &BigRational)> = self.coeffs[..d]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.re.is_zero() && c.re.is_positive() != lead.is_positive())
            .map(|(k, c)| (k, &c.re))
            .collect();
        if opposite.is_empty() {
            return 0;
        }
        let count = opposite.len() as f64;
        let lead_abs = lead.abs().to_f64().unwrap_or(f64::MIN_POSITIVE);
        let bound = opposite
            .iter()
            .map(|(k, c)| {
                let ratio = count * c.abs().to_f64().unwrap_or(f64::MAX) / lead_abs;
                ratio.powf(1.0 / (d - k) as f64)
            })
            .fold(0.0f64, f64::max);
        // margin for the floating-point root extraction
        (bound * (1.0 + 1e-9)).ceil() as u64 + 1
    }

    /// All integer roots `k ≥ 0`, ascending.
    pub fn nonneg_integer_roots(&self) -> Vec<u64> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        if !self.coeffs.iter().all(GaussianRational::is_real) {
            // an integer root is a common root of the real and imaginary parts
            let re = Poly::from_coeffs(self.coeffs.iter().map(|c| GaussianRational::real(c.re.clone())).collect());
            let im = Poly::from_coeffs(self.coeffs.iter().map(|c| GaussianRational::real(c.im.clone())).collect());
            let g = re.gcd(&im);
            return if g.degree().unwrap_or(0) == 0 { Vec::new() } else { g.nonneg_integer_roots() };
        }
        (0..=self.positive_root_bound()).filter(|&k| self.eval_int(k as i64).is_zero()).collect()
    }

    /// Sign of the leading coefficient for real polynomials: `1`, `-1`, or `0` for zero.
    pub fn leading_sign(&self) -> i32 {
        match self.leading() {
            None => 0,
            Some(c) if c.re.is_positive() => 1,
            Some(_) => -1,
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "n")?,
                1 => write!(f, "{c}·n")?,
                _ if c.is_one() => write!(f, "n^{k}")?,
                _ => write!(f, "{c}·n^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = Poly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Poly::from_ints(&[0, 0]).is_zero());
    }

    #[test]
    fn division_identity() {
        let a = Poly::from_ints(&[-1, 0, 0, 1]);
        let b = Poly::from_ints(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, Poly::from_ints(&[1, 1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn gcd_is_monic() {
        // (n-1)(n+2) and 3(n-1)(n+5)
        let a = Poly::from_ints(&[-2, 1, 1]);
        let b = Poly::from_ints(&[-15, 12, 3]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-1, 1]));
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = Poly::from_ints(&[3, -1, 2, 5]);
        let s = p.shift(&GaussianRational::from_int(-2));
        for k in -4..6 {
            assert_eq!(s.eval_int(k), p.eval_int(k - 2));
        }
    }

    #[test]
    fn integer_roots() {
        // n (n-3) (n+2) (2n-1)
        let p = Poly::from_ints(&[0, -3, 1]).mul(&Poly::from_ints(&[2, 1])).mul(&Poly::from_ints(&[-1, 2]));
        assert_eq!(p.nonneg_integer_roots(), vec![0, 3]);
        assert!(Poly::from_ints(&[5]).nonneg_integer_roots().is_empty());
    }

    #[test]
    fn positive_root_bound() {
        // (n+10)(n+11): no positive roots
        assert_eq!(Poly::from_ints(&[110, 21, 1]).positive_root_bound(), 0);
        // (n-7)(n+30)
        let b = Poly::from_ints(&[-210, 23, 1]).positive_root_bound();
        assert!(b > 7 && b < 40, "{b}");
        // -(n-3)
        assert!(Poly::from_ints(&[3, -1]).positive_root_bound() > 3);
    }

    #[test]
    fn root_bound_dominates_roots() {
        let p = Poly::from_ints(&[-100, 0, 1]);
        assert!(p.root_bound().unwrap() > 10);
    }
}
