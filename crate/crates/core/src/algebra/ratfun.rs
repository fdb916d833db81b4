use std::fmt;

use super::poly::Polynomial;
use super::scalar::Scalar;
use super::series::LaurentSeries;
use super::AlgebraError;

/// Quotient of two polynomials in `z`, denominator monic. In exact mode the
/// pair is additionally reduced to lowest terms.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<F: Scalar> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

impl<F: Scalar> RationalFunction<F> {
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let (num, den) = if F::EXACT && !num.is_zero() {
            let g = num.gcd(&den);
            (num.div_rem(&g)?.0, den.div_rem(&g)?.0)
        } else if num.is_zero() {
            let ctx = den.ctx().clone();
            (Polynomial::zero(&ctx), Polynomial::one(&ctx))
        } else {
            (num, den)
        };
        let inv = den.leading().and_then(|l| l.recip()).ok_or(AlgebraError::ZeroPolynomial)?;
        Ok(RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Polynomial<F>) -> Self {
        let ctx = p.ctx().clone();
        RationalFunction {
            num: p,
            den: Polynomial::one(&ctx),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn z(ctx: &F::Ctx) -> Self {
        Self::from_poly(Polynomial::z(ctx))
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.num.ctx()
    }

    pub fn num(&self) -> &Polynomial<F> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Value at `z`, `None` at a pole.
    pub fn eval(&self, z: &F) -> Option<F> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(z) / d)
    }

    pub fn add(&self, o: &Self) -> Self {
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(num, self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.num.scale(s), self.den.clone()).expect("nonzero denominator")
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Self::new(base.num.pow(k), base.den.pow(k))
    }

    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// `f'/f`.
    pub fn log_derivative(&self) -> Result<Self, AlgebraError> {
        self.derivative().div(self)
    }

    /// Order of vanishing at a finite point (negative for poles).
    pub fn order_at(&self, a: &F) -> i64 {
        if self.num.is_zero() {
            return i64::MAX;
        }
        self.num.root_multiplicity(a) as i64 - self.den.root_multiplicity(a) as i64
    }

    /// Order of vanishing at `z = ∞` in the coordinate `w = 1/z`.
    pub fn order_at_infinity(&self) -> i64 {
        match (self.num.degree(), self.den.degree()) {
            (Some(n), Some(d)) => d as i64 - n as i64,
            _ => i64::MAX,
        }
    }

    /// Laurent expansion in `t = z - a`, known to `O(t^order)`.
    pub fn series_at(&self, a: &F, order: i64) -> Result<LaurentSeries<F>, AlgebraError> {
        let v = self.den.root_multiplicity(a) as i64;
        let n = self.num.shift(a);
        let d = self.den.shift(a);
        Self::quotient_series(&n, &d, v, self.den.norm(), order)
    }

    /// Laurent expansion in `w = 1/z`, known to `O(w^order)`.
    pub fn series_at_infinity(&self, order: i64) -> Result<LaurentSeries<F>, AlgebraError> {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        // f(1/w) = w^(dd - dn) · rev(num)(w) / rev(den)(w)
        let shift = dd as i64 - dn as i64;
        let n = self.num.reversed(dn);
        let d = self.den.reversed(dd);
        let s = Self::quotient_series(&n, &d, 0, self.den.norm(), order - shift)?;
        Ok(s.shift(shift))
    }

    fn quotient_series(
        n: &Polynomial<F>,
        d: &Polynomial<F>,
        v: i64,
        scale: f64,
        order: i64,
    ) -> Result<LaurentSeries<F>, AlgebraError> {
        let ord_d = order.max(0) + 2 * v + 1;
        let ds = LaurentSeries::from_poly(d, ord_d).drop_below(v, scale)?;
        let ns = LaurentSeries::from_poly(n, order.max(0) + v + 1);
        Ok(ns.mul(&ds.recip()?).truncate(order))
    }

    pub fn map<G: Scalar>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G + Copy) -> RationalFunction<G> {
        RationalFunction::new(self.num.map(ctx, f), self.den.map(ctx, f))
            .expect("nonzero denominator")
    }
}

impl<F: Scalar> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::Q;

    fn p(v: &[i64]) -> Polynomial<Q> {
        Polynomial::new(v.iter().map(|&c| Q::from_i64(c, &())).collect(), &())
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let r = RationalFunction::new(p(&[-1, 0, 1]), p(&[2, 2])).unwrap();
        assert_eq!(r.num(), &p(&[-1, 1]).scale(&Q::new(1, 2)));
        assert_eq!(r.den(), &p(&[1]));
    }

    #[test]
    fn expansion_at_pole_and_infinity() {
        // 1/(z (1 - z)) at 0: 1/z + 1 + z + ...
        let r = RationalFunction::new(p(&[1]), p(&[0, 1, -1])).unwrap();
        let s = r.series_at(&Q::zero(&()), 4).unwrap();
        assert_eq!(s.val(), -1);
        for k in -1..4 {
            assert_eq!(s.coeff(k).unwrap(), Q::one(&()));
        }
        // at infinity: -w^2 / (1 - w) = -w^2 - w^3 - ...
        let si = r.series_at_infinity(5).unwrap();
        assert_eq!(si.val(), 2);
        assert_eq!(si.coeff(4).unwrap(), Q::from_i64(-1, &()));
        assert_eq!(r.order_at_infinity(), 2);
        assert_eq!(r.order_at(&Q::zero(&())), -1);
    }

    #[test]
    fn derivative_of_quotient() {
        let r = RationalFunction::new(p(&[1, 1]), p(&[1, 2])).unwrap();
        let d = r.derivative();
        // ((1+2z) - 2(1+z)) / (1+2z)^2 = -1/(1+2z)^2
        let want = RationalFunction::new(p(&[-1]), p(&[1, 4, 4])).unwrap();
        assert_eq!(d, want);
    }
}
