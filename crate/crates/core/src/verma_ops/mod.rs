//! Band operators on the Verma module `V_h`.
//!
//! An operator is a finite family of shift bands `e_n ↦ φ_d(n)·e_{n+d}` with
//! rational-function coefficients, plus a finite correction table in the monomial
//! basis. The action of a band at column `n` is `φ_d(n)` when `n + d ≥ 0` and `n` is
//! not a pole of `φ_d`; otherwise the band contributes nothing there. Every
//! operation computes its bands symbolically and then repairs the finitely many
//! boundary columns against the exact action of its operands, so the table
//! always holds `true entry − band entry`. With that convention two operators are
//! equal iff their band maps and correction tables are identical.

mod hs;
mod weight;

pub use hs::{BandDefect, DefectReport, HsNormSq, NormBound};
pub use weight::{NormWeights, Weight};

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_scalar::{GaussianRational, RatFunc};

/// Sparse column of an operator: row index to entry.
pub type Column = BTreeMap<usize, GaussianRational>;

/// Correction table keyed by `(row, col)` in the monomial basis.
pub type Corrections = BTreeMap<(usize, usize), GaussianRational>;

#[derive(Clone, PartialEq, Eq)]
pub struct BandOperator {
    weight: Weight,
    bands: BTreeMap<i64, RatFunc>,
    corrections: Corrections,
}

/// Binary operation selector for [`op_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpKind {
    Add,
    Sub,
    Mul,
    Commutator,
}

fn band_value(phi: &RatFunc, d: i64, col: usize) -> Option<GaussianRational> {
    if (col as i64) + d < 0 {
        return None;
    }
    phi.eval(col as i64).ok().filter(|v| !v.is_zero())
}

fn add_into(col: &mut Column, row: usize, v: &GaussianRational) {
    let e = col.entry(row).or_insert_with(GaussianRational::zero);
    *e += v;
    if e.is_zero() {
        col.remove(&row);
    }
}

impl BandOperator {
    /// Validated constructor for user-supplied band data.
    ///
    /// Lowering bands (`d < 0`) must vanish at `0 ≤ k < −d` and no band may have a
    /// pole at `n ≥ max(0, −d)`.
    pub fn make_band(weight: Weight, bands: BTreeMap<i64, RatFunc>, corrections: Corrections) -> Result<Self> {
        for (&d, phi) in &bands {
            if d < 0 {
                for k in 0..d.unsigned_abs() {
                    match phi.eval(k as i64) {
                        Ok(v) if v.is_zero() => {}
                        _ => return Err(Error::GuardViolation { degree: d, k }),
                    }
                }
            }
            let start = (-d).max(0) as u64;
            if let Some(&n) = phi.nonneg_integer_poles().iter().find(|&&n| n >= start) {
                return Err(Error::PoleInDomain { degree: d, n });
            }
        }
        Ok(Self::from_parts(weight, bands, corrections))
    }

    /// Drops zero bands and zero corrections without further validation.
    pub(crate) fn from_parts(weight: Weight, mut bands: BTreeMap<i64, RatFunc>, mut corrections: Corrections) -> Self {
        bands.retain(|_, f| !f.is_zero());
        corrections.retain(|_, v| !v.is_zero());
        BandOperator { weight, bands, corrections }
    }

    /// Single band with no corrections; panics on guard or pole violations.
    pub(crate) fn single_band(weight: &Weight, degree: i64, phi: RatFunc) -> Self {
        Self::make_band(weight.clone(), BTreeMap::from([(degree, phi)]), Corrections::new())
            .expect("generator band satisfies the guard")
    }

    pub fn zero(weight: &Weight) -> Self {
        Self::from_parts(weight.clone(), BTreeMap::new(), Corrections::new())
    }

    pub fn identity(weight: &Weight) -> Self {
        Self::from_parts(weight.clone(), BTreeMap::from([(0, RatFunc::one())]), Corrections::new())
    }

    /// Operator given by a correction table alone.
    pub fn finite_rank(weight: &Weight, corrections: Corrections) -> Self {
        Self::from_parts(weight.clone(), BTreeMap::new(), corrections)
    }

    /// Rank-one projector `P_k` onto `e_k`.
    pub fn projector(weight: &Weight, k: usize) -> Self {
        Self::from_parts(weight.clone(), BTreeMap::new(), Corrections::from([((k, k), GaussianRational::one())]))
    }

    /// `c·I`.
    pub fn scalar(weight: &Weight, c: GaussianRational) -> Self {
        Self::identity(weight).scale(&c)
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn bands(&self) -> &BTreeMap<i64, RatFunc> {
        &self.bands
    }

    pub fn band(&self, d: i64) -> Option<&RatFunc> {
        self.bands.get(&d)
    }

    pub fn corrections(&self) -> &Corrections {
        &self.corrections
    }

    pub fn is_zero(&self) -> bool {
        self.bands.is_empty() && self.corrections.is_empty()
    }

    /// Only a correction table, no rational bands.
    pub fn is_finite_rank(&self) -> bool {
        self.bands.is_empty()
    }

    /// The same bands with the correction table dropped.
    pub fn without_corrections(&self) -> Self {
        Self::from_parts(self.weight.clone(), self.bands.clone(), Corrections::new())
    }

    /// The correction table alone, as an operator.
    pub fn finite_rank_part(&self) -> Self {
        Self::from_parts(self.weight.clone(), BTreeMap::new(), self.corrections.clone())
    }

    /// `max |d|` over bands; `0` for finite-rank operators.
    pub fn band_width(&self) -> usize {
        self.bands.keys().map(|d| d.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Exact image of `e_n`.
    pub fn column(&self, n: usize) -> Column {
        let mut col = Column::new();
        for (&d, phi) in &self.bands {
            if let Some(v) = band_value(phi, d, n) {
                add_into(&mut col, (n as i64 + d) as usize, &v);
            }
        }
        for (&(r, c), v) in &self.corrections {
            if c == n {
                add_into(&mut col, r, v);
            }
        }
        col
    }

    /// Exact image of `e_n` as `(index, coefficient)` pairs, ascending by index.
    pub fn apply(&self, n: usize) -> Vec<(usize, GaussianRational)> {
        self.column(n).into_iter().collect()
    }

    /// Image of a finitely supported vector.
    pub fn apply_vec(&self, v: &Column) -> Column {
        let mut out = Column::new();
        for (&n, x) in v {
            for (r, y) in self.column(n) {
                add_into(&mut out, r, &(x * &y));
            }
        }
        out
    }

    /// Matrix entry `⟨e_row*⟩ A e_col` in the monomial basis.
    pub fn entry(&self, row: usize, col: usize) -> GaussianRational {
        let mut v = GaussianRational::zero();
        if let Some(phi) = self.bands.get(&(row as i64 - col as i64)) {
            if let Some(x) = band_value(phi, row as i64 - col as i64, col) {
                v += &x;
            }
        }
        if let Some(x) = self.corrections.get(&(row, col)) {
            v += x;
        }
        v
    }

    fn check_weight(&self, o: &BandOperator) -> Result<()> {
        if self.weight == o.weight {
            Ok(())
        } else {
            Err(Error::WeightMismatch)
        }
    }

    /// Builds the operator with `bands` whose exact columns are given by `truth`,
    /// filling the correction table on columns below `horizon`.
    fn normalize(
        weight: &Weight,
        bands: BTreeMap<i64, RatFunc>,
        horizon: usize,
        truth: impl Fn(usize) -> Column,
    ) -> Self {
        let mut op = Self::from_parts(weight.clone(), bands, Corrections::new());
        let mut corrections = Corrections::new();
        for col in 0..horizon {
            let mut diff = truth(col);
            for (r, v) in op.column(col) {
                add_into(&mut diff, r, &-v);
            }
            corrections.extend(diff.into_iter().map(|(r, v)| ((r, col), v)));
        }
        op.corrections = corrections;
        op
    }

    /// Column index beyond which the symbolic bands of a result built from
    /// `operands` agree with the exact action.
    fn boundary_horizon(operands: &[&BandOperator], result: &BTreeMap<i64, RatFunc>) -> usize {
        let band_sets = operands.iter().map(|op| &op.bands).chain(std::iter::once(result));
        let mut poles = 0usize;
        let mut width = 0usize;
        for bands in band_sets {
            for (d, phi) in bands {
                width = width.max(d.unsigned_abs() as usize);
                if let Some(&p) = phi.nonneg_integer_poles().last() {
                    poles = poles.max(p as usize + 1);
                }
            }
        }
        let corr = operands.iter().flat_map(|op| op.corrections.keys()).map(|&(r, c)| r.max(c) + 1).max().unwrap_or(0);
        poles + corr + 2 * width + 2
    }

    pub fn add(&self, o: &BandOperator) -> Result<Self> {
        self.check_weight(o)?;
        let mut bands = self.bands.clone();
        for (d, phi) in &o.bands {
            let e = bands.entry(*d).or_insert_with(RatFunc::zero);
            *e = e.add(phi);
        }
        bands.retain(|_, f| !f.is_zero());
        let horizon = Self::boundary_horizon(&[self, o], &bands);
        Ok(Self::normalize(&self.weight, bands, horizon, |c| {
            let mut col = self.column(c);
            for (r, v) in o.column(c) {
                add_into(&mut col, r, &v);
            }
            col
        }))
    }

    pub fn sub(&self, o: &BandOperator) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-GaussianRational::one())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.weight);
        }
        Self::from_parts(
            self.weight.clone(),
            self.bands.iter().map(|(d, f)| (*d, f.scale(c))).collect(),
            self.corrections.iter().map(|(k, v)| (*k, v * c)).collect(),
        )
    }

    /// Composition `self ∘ o`.
    pub fn mul(&self, o: &BandOperator) -> Result<Self> {
        self.check_weight(o)?;
        let mut bands: BTreeMap<i64, RatFunc> = BTreeMap::new();
        for (&d, phi) in &self.bands {
            for (&e, psi) in &o.bands {
                let term = phi.shift(e).mul(psi);
                let acc = bands.entry(d + e).or_insert_with(RatFunc::zero);
                *acc = acc.add(&term);
            }
        }
        bands.retain(|_, f| !f.is_zero());
        let horizon = Self::boundary_horizon(&[self, o], &bands);
        Ok(Self::normalize(&self.weight, bands, horizon, |c| self.apply_vec(&o.column(c))))
    }

    /// `[self, o] = self∘o − o∘self`.
    pub fn commutator(&self, o: &BandOperator) -> Result<Self> {
        self.mul(o)?.sub(&o.mul(self)?)
    }

    /// `self^k`, with `self^0 = I`.
    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(&self.weight), |acc, _| acc.mul(self).expect("same weight"))
    }

    /// Adjoint in the inner product `⟨e_n, e_m⟩ = δ_{nm} w²_n`.
    pub fn adjoint(&self) -> Self {
        let nw = self.weight.norm_weights();
        let bands: BTreeMap<i64, RatFunc> = self
            .bands
            .iter()
            .map(|(&d, phi)| (-d, phi.conj().mul(&nw.ratio(d)).shift(-d)))
            .filter(|(_, f)| !f.is_zero())
            .collect();
        let horizon = Self::boundary_horizon(&[self], &bands);
        Self::normalize(&self.weight, bands, horizon, |m| {
            let mut rows: Vec<usize> = self.bands.keys().filter_map(|&d| usize::try_from(m as i64 - d).ok()).collect();
            rows.extend(self.corrections.keys().filter(|(r, _)| *r == m).map(|&(_, c)| c));
            let mut col = Column::new();
            rows.sort_unstable();
            rows.dedup();
            for r in rows {
                let a = self.entry(m, r);
                if !a.is_zero() {
                    col.insert(r, a.conj().scale(&nw.ratio_value(r, m)));
                }
            }
            col
        })
    }

    /// Top-left `n × n` block in the monomial basis, row-major, exact.
    #[allow(clippy::needless_range_loop)]
    pub fn truncate_monomial(&self, n: usize) -> Vec<Vec<GaussianRational>> {
        let mut m = vec![vec![GaussianRational::zero(); n]; n];
        for c in 0..n {
            for (r, v) in self.column(c) {
                if r < n {
                    m[r][c] = v;
                }
            }
        }
        m
    }

    /// Top-left `n × n` block in the orthonormal basis `e_k / w_k`, row-major.
    #[allow(clippy::needless_range_loop)]
    pub fn truncate_orthonormal(&self, n: usize) -> Vec<Vec<Complex64>> {
        let nw = self.weight.norm_weights();
        let mut m = vec![vec![Complex64::zero(); n]; n];
        for c in 0..n {
            for (r, v) in self.column(c) {
                if r < n {
                    let s = nw.ratio_value(c, r).to_f64().unwrap_or(f64::NAN).sqrt();
                    let (re, im) = v.to_f64_pair();
                    m[r][c] = Complex64::new(re * s, im * s);
                }
            }
        }
        m
    }
}

/// Runtime-selected binary operation.
pub fn op_arith(a: &BandOperator, b: &BandOperator, kind: OpKind) -> Result<BandOperator> {
    match kind {
        OpKind::Add => a.add(b),
        OpKind::Sub => a.sub(b),
        OpKind::Mul => a.mul(b),
        OpKind::Commutator => a.commutator(b),
    }
}

impl std::fmt::Debug for BandOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = f.debug_struct("BandOperator");
        s.field("h", &self.weight);
        for (d, phi) in &self.bands {
            s.field(&format!("band[{d}]"), phi);
        }
        if !self.corrections.is_empty() {
            s.field("corrections", &self.corrections);
        }
        s.finish()
    }
}

impl std::fmt::Display for BandOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.bands.iter().map(|(d, phi)| format!("band[{d}]: {phi}")).collect();
        parts.extend(self.corrections.iter().map(|((r, c), v)| format!("({r},{c}) += {v}")));
        write!(f, "{}", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalar::Poly;

    fn w(p: i64, q: i64) -> Weight {
        Weight::from_frac(p, q).unwrap()
    }

    fn d_op(h: &Weight) -> BandOperator {
        BandOperator::single_band(h, -1, RatFunc::var())
    }

    fn f_op(h: &Weight) -> BandOperator {
        BandOperator::single_band(h, 1, RatFunc::recip_poly(Poly::linear(h.two_h())).unwrap())
    }

    fn q(p: i64, r: i64) -> GaussianRational {
        GaussianRational::from_frac(p, r)
    }

    #[test]
    fn make_band_d_is_derivative() {
        let h = w(1, 1);
        let d = BandOperator::make_band(h.clone(), BTreeMap::from([(-1, RatFunc::var())]), Corrections::new()).unwrap();
        assert_eq!(d.apply(3), vec![(2, q(3, 1))]);
        assert!(d.apply(0).is_empty());
    }

    #[test]
    fn unguarded_lowering_band_rejected() {
        let err = BandOperator::make_band(w(1, 1), BTreeMap::from([(-1, RatFunc::one())]), Corrections::new());
        assert_eq!(err.unwrap_err(), Error::GuardViolation { degree: -1, k: 0 });
    }

    #[test]
    fn pole_in_domain_rejected() {
        let phi = RatFunc::recip_poly(Poly::linear(GaussianRational::from_int(-3))).unwrap();
        let err = BandOperator::make_band(w(1, 1), BTreeMap::from([(0, phi)]), Corrections::new());
        assert_eq!(err.unwrap_err(), Error::PoleInDomain { degree: 0, n: 3 });
    }

    #[test]
    fn projector_via_corrections() {
        let h = w(1, 1);
        let p0 =
            BandOperator::make_band(h.clone(), BTreeMap::new(), Corrections::from([((0, 0), GaussianRational::one())]))
                .unwrap();
        assert_eq!(p0, BandOperator::projector(&h, 0));
        assert_eq!(p0.apply(0), vec![(0, GaussianRational::one())]);
        assert!(p0.apply(1).is_empty());
        assert_eq!(p0.mul(&p0).unwrap(), p0);
    }

    #[test]
    fn identity_is_neutral() {
        let h = w(3, 4);
        let i = BandOperator::identity(&h);
        for x in [d_op(&h), f_op(&h)] {
            assert_eq!(i.mul(&x).unwrap(), x);
            assert_eq!(x.mul(&i).unwrap(), x);
        }
    }

    #[test]
    fn f_action_at_h1() {
        let h = w(1, 1);
        assert_eq!(f_op(&h).apply(0), vec![(1, q(1, 2))]);
    }

    #[test]
    fn commutator_d_f_at_h1() {
        let h = w(1, 1);
        let c = d_op(&h).commutator(&f_op(&h)).unwrap();
        let expect = RatFunc::recip_poly(Poly::from_ints(&[2, 3, 1])).unwrap();
        assert_eq!(c.bands().len(), 1);
        assert_eq!(c.band(0), Some(&expect));
        assert!(c.corrections().is_empty());
    }

    #[test]
    fn fd_at_half_is_identity_minus_p0() {
        let h = Weight::half();
        let fd = f_op(&h).mul(&d_op(&h)).unwrap();
        let expect = BandOperator::identity(&h).sub(&BandOperator::projector(&h, 0)).unwrap();
        assert_eq!(fd, expect);
        assert_eq!(fd.band(0), Some(&RatFunc::one()));
        assert_eq!(fd.corrections().get(&(0, 0)), Some(&-GaussianRational::one()));
    }

    #[test]
    fn pole_cancellation_is_absorbed_by_corrections() {
        // (F∘D)∘D at h=1 has band n−1 of degree −1, whose value at n=0 is phantom;
        // composing with F again yields a pole at n=0 in the symbolic band.
        let h = w(1, 1);
        let (d, f) = (d_op(&h), f_op(&h));
        let fdd = f.mul(&d).unwrap().mul(&d).unwrap();
        let ffdd = f.mul(&fdd).unwrap();
        for n in 0..12 {
            let direct = f.apply_vec(&f.apply_vec(&d.apply_vec(&d.column(n))));
            assert_eq!(ffdd.column(n), direct, "column {n}");
        }
    }

    #[test]
    fn adjoint_d_is_f() {
        for h in [w(1, 2), w(3, 4), w(1, 1), w(5, 1)] {
            assert_eq!(d_op(&h).adjoint(), f_op(&h));
            assert_eq!(f_op(&h).adjoint(), d_op(&h));
        }
        let h = w(1, 1);
        assert_eq!(BandOperator::identity(&h).adjoint(), BandOperator::identity(&h));
    }

    #[test]
    fn weight_mismatch() {
        assert_eq!(d_op(&w(1, 1)).mul(&d_op(&w(3, 4))).unwrap_err(), Error::WeightMismatch);
    }

    #[test]
    fn truncations() {
        let h = w(1, 1);
        let m = d_op(&h).truncate_monomial(3);
        assert_eq!(m[0][1], q(1, 1));
        assert_eq!(m[1][2], q(2, 1));
        assert!(m[0][0].is_zero() && m[2][2].is_zero());
        let o = f_op(&Weight::half()).truncate_orthonormal(2);
        assert!((o[1][0].re - 1.0).abs() < 1e-15);
        let p = BandOperator::projector(&h, 0).truncate_orthonormal(3);
        assert_eq!(p[0][0], Complex64::one());
        assert_eq!(p.iter().flatten().filter(|z| !z.is_zero()).count(), 1);
    }
}
