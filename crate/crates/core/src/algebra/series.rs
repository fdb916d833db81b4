use std::fmt;

use super::poly::Polynomial;
use super::scalar::Scalar;
use super::AlgebraError;

/// Truncated Laurent series `sum_{k = val}^{order - 1} c_k t^k + O(t^order)`.
///
/// Truncation is tracked pessimistically: every operation returns the largest
/// order that is fully determined by its operands. Reading a coefficient at or
/// beyond the order is an error, never an implicit zero.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<F: Scalar> {
    val: i64,
    coeffs: Vec<F>,
    order: i64,
    ctx: F::Ctx,
}

impl<F: Scalar> LaurentSeries<F> {
    /// Series with `coeffs[i]` the coefficient of `t^(val + i)`. Coefficients
    /// between the end of `coeffs` and `order` are known zeros.
    pub fn from_coeffs(val: i64, mut coeffs: Vec<F>, order: i64, ctx: &F::Ctx) -> Self {
        if order <= val {
            return Self::zero(ctx, order);
        }
        coeffs.resize((order - val) as usize, F::zero(ctx));
        let mut s = LaurentSeries {
            val,
            coeffs,
            order,
            ctx: ctx.clone(),
        };
        s.normalize();
        s
    }

    pub fn zero(ctx: &F::Ctx, order: i64) -> Self {
        LaurentSeries {
            val: order,
            coeffs: Vec::new(),
            order,
            ctx: ctx.clone(),
        }
    }

    pub fn one(ctx: &F::Ctx, order: i64) -> Self {
        Self::monomial(F::one(ctx), 0, order)
    }

    /// `c t^k + O(t^order)`.
    pub fn monomial(c: F, k: i64, order: i64) -> Self {
        let ctx = c.ctx();
        Self::from_coeffs(k, vec![c], order, &ctx)
    }

    /// The variable `t` itself.
    pub fn var(ctx: &F::Ctx, order: i64) -> Self {
        Self::monomial(F::one(ctx), 1, order)
    }

    pub fn from_poly(p: &Polynomial<F>, order: i64) -> Self {
        Self::from_coeffs(0, p.coeffs().to_vec(), order, p.ctx())
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    /// Degree of the first stored coefficient. Equals `order` for the zero
    /// series.
    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.first()
    }

    /// `(degree, coefficient)` pairs for every stored coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.val + i as i64, c))
    }

    pub fn coeff(&self, k: i64) -> Result<F, AlgebraError> {
        if k >= self.order {
            return Err(AlgebraError::TruncationTooShort {
                needed: k + 1,
                available: self.order,
            });
        }
        if k < self.val {
            return Ok(F::zero(&self.ctx));
        }
        Ok(self.coeffs[(k - self.val) as usize].clone())
    }

    fn at(&self, k: i64) -> Option<&F> {
        if k < self.val || k >= self.order {
            None
        } else {
            Some(&self.coeffs[(k - self.val) as usize])
        }
    }

    /// Largest coefficient modulus.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        if order <= self.val {
            return Self::zero(&self.ctx, order);
        }
        let mut s = self.clone();
        s.coeffs.truncate((order - self.val) as usize);
        s.order = order;
        s
    }

    /// Assert every coefficient of degree `< k` is negligible at `scale`, and
    /// drop them. Used where a leading term is zero in exact arithmetic but
    /// carries rounding noise in numeric mode.
    pub fn drop_below(&self, k: i64, scale: f64) -> Result<Self, AlgebraError> {
        for (d, c) in self.terms() {
            if d >= k {
                break;
            }
            if !c.is_negligible(scale) {
                return Err(AlgebraError::BadValuation(format!(
                    "coefficient of degree {d} is not negligible (|c| = {:e})",
                    c.norm()
                )));
            }
        }
        if k <= self.val {
            return Ok(self.clone());
        }
        let coeffs = self
            .terms()
            .filter(|(d, _)| *d >= k)
            .map(|(_, c)| c.clone())
            .collect();
        Ok(Self::from_coeffs(k, coeffs, self.order, &self.ctx))
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let val = self.val.min(o.val);
        if order <= val {
            return Self::zero(&self.ctx, order);
        }
        let mut coeffs = vec![F::zero(&self.ctx); (order - val) as usize];
        for (d, c) in self.terms().chain(o.terms()) {
            if d < order {
                coeffs[(d - val) as usize] += c;
            }
        }
        Self::from_coeffs(val, coeffs, order, &self.ctx)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            order: self.order,
            ctx: self.ctx.clone(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * s).collect();
        Self::from_coeffs(self.val, coeffs, self.order, &self.ctx)
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            val: self.val + k,
            coeffs: self.coeffs.clone(),
            order: self.order + k,
            ctx: self.ctx.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_capped(o, i64::MAX)
    }

    /// Product, truncated to at most `cap`.
    pub fn mul_capped(&self, o: &Self, cap: i64) -> Self {
        let val = self.val + o.val;
        let order = (self.order + o.val).min(o.order + self.val).min(cap);
        if order <= val {
            return Self::zero(&self.ctx, order);
        }
        let n = (order - val) as usize;
        let mut coeffs = vec![F::zero(&self.ctx); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                coeffs[i + j].add_mul(a, b);
            }
        }
        Self::from_coeffs(val, coeffs, order, &self.ctx)
    }

    /// Accumulate `a * b` into `self` in place, restricted to the degrees that
    /// `self` already covers. The caller is responsible for `a*b` being known
    /// to at least `self.order`.
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        let lo = a.val + b.val;
        if lo < self.val {
            let extra = (self.val - lo) as usize;
            let mut v = vec![F::zero(&self.ctx); extra];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.val = lo;
        }
        for (i, x) in a.coeffs.iter().enumerate() {
            let di = a.val + i as i64;
            if di + b.val >= self.order {
                break;
            }
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let d = di + b.val + j as i64;
                if d >= self.order {
                    break;
                }
                self.coeffs[(d - self.val) as usize].add_mul(x, y);
            }
        }
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        let a0 = self.leading().ok_or(AlgebraError::NotInvertible)?;
        let inv0 = a0.recip().ok_or(AlgebraError::NotInvertible)?;
        let v = self.val;
        let order = self.order - 2 * v;
        let n = (self.order - v) as usize;
        let mut b: Vec<F> = Vec::with_capacity(n);
        b.push(inv0.clone());
        for k in 1..n {
            let mut acc = F::zero(&self.ctx);
            for j in 1..=k {
                acc.add_mul(&self.coeffs[j], &b[k - j]);
            }
            b.push(-(acc * &inv0));
        }
        Ok(Self::from_coeffs(-v, b, order, &self.ctx))
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .terms()
            .map(|(d, c)| c.clone() * &F::from_i64(d, &self.ctx))
            .collect();
        Self::from_coeffs(self.val - 1, coeffs, self.order - 1, &self.ctx)
    }

    /// Term-wise antiderivative with zero integration constant.
    pub fn integrate(&self) -> Result<Self, AlgebraError> {
        if self.order <= -1 && self.val <= -1 {
            return Err(AlgebraError::TruncationTooShort {
                needed: 0,
                available: self.order,
            });
        }
        if let Some(r) = self.at(-1) {
            if !r.is_negligible(self.norm()) {
                return Err(AlgebraError::ResidueObstruction);
            }
        }
        let val = self.val + 1;
        let coeffs = self
            .terms()
            .map(|(d, c)| {
                if d == -1 {
                    F::zero(&self.ctx)
                } else {
                    c.clone() / F::from_i64(d + 1, &self.ctx)
                }
            })
            .collect();
        Ok(Self::from_coeffs(val, coeffs, self.order + 1, &self.ctx))
    }

    /// Coefficient of `t^-1`.
    pub fn residue(&self) -> Result<F, AlgebraError> {
        self.coeff(-1)
    }

    /// Splits `log f = log c + log(f / c)`, returning the constant `c` (whose
    /// logarithm is a branch datum the caller owns) and the single-valued
    /// series `log(f / c)`, which has zero constant term.
    pub fn log(&self) -> Result<(F, Self), AlgebraError> {
        if self.val != 0 {
            return Err(AlgebraError::LogValuation(self.val));
        }
        let c = self.leading().cloned().ok_or(AlgebraError::NotInvertible)?;
        let inv = c.recip().ok_or(AlgebraError::NotInvertible)?;
        let u = self.scale(&inv);
        let l = u.derivative().mul(&u.recip()?).integrate()?;
        Ok((c, l))
    }

    /// `exp` of a series with vanishing constant term.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        if self.val < 0 {
            return Err(AlgebraError::BadValuation(format!(
                "exp of a series with valuation {}",
                self.val
            )));
        }
        if self.val == 0 && !self.coeffs[0].is_zero() {
            return Err(AlgebraError::NonZeroConstant);
        }
        let n = self.order.max(0) as usize;
        let mut e: Vec<F> = Vec::with_capacity(n);
        if n == 0 {
            return Ok(Self::zero(&self.ctx, self.order));
        }
        e.push(F::one(&self.ctx));
        for k in 1..n {
            let mut acc = F::zero(&self.ctx);
            for j in 1..=k {
                if let Some(s) = self.at(j as i64) {
                    let w = s.clone() * &F::from_i64(j as i64, &self.ctx);
                    acc.add_mul(&w, &e[k - j]);
                }
            }
            e.push(acc / F::from_i64(k as i64, &self.ctx));
        }
        Ok(Self::from_coeffs(0, e, self.order, &self.ctx))
    }

    /// Square root; needs even valuation and a leading coefficient whose root
    /// lies in the ring.
    pub fn sqrt(&self) -> Result<Self, AlgebraError> {
        let lead = self.leading().ok_or(AlgebraError::NotInvertible)?;
        if self.val % 2 != 0 {
            return Err(AlgebraError::BadValuation(format!(
                "square root of a series with odd valuation {}",
                self.val
            )));
        }
        let r0 = lead.sqrt().ok_or(AlgebraError::NotInvertible)?;
        let inv = lead.recip().ok_or(AlgebraError::NotInvertible)?;
        let u: Vec<F> = self.coeffs.iter().map(|c| c.clone() * &inv).collect();
        let n = u.len();
        let two = F::from_i64(2, &self.ctx);
        let mut r: Vec<F> = Vec::with_capacity(n);
        r.push(F::one(&self.ctx));
        for k in 1..n {
            let mut acc = u[k].clone();
            for j in 1..k {
                let t = r[j].clone() * &r[k - j];
                acc -= &t;
            }
            r.push(acc / &two);
        }
        let half = self.val / 2;
        let s = Self::from_coeffs(half, r, half + n as i64, &self.ctx);
        Ok(s.scale(&r0))
    }

    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        if e == 0 {
            // The unit, known to the relative precision of the base.
            return Ok(Self::one(&self.ctx, self.order - self.val));
        }
        let mut b = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc: Option<Self> = None;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&b),
                    None => b.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc.expect("nonzero exponent"))
    }

    /// `f(g(t))` for `g` with positive valuation.
    pub fn compose(&self, g: &Self) -> Result<Self, AlgebraError> {
        if g.val < 1 || g.leading().is_none() {
            return Err(AlgebraError::BadValuation(format!(
                "composition needs an inner series of positive valuation, got {}",
                g.val
            )));
        }
        let cap = self.order.saturating_mul(g.val);
        let mut power = g.pow(self.val)?;
        let mut acc: Option<Self> = None;
        for k in self.val..self.order {
            let c = self.at(k).expect("in range");
            if !c.is_zero() {
                let term = power.scale(c);
                acc = Some(match acc {
                    Some(a) => a.add(&term),
                    None => term,
                });
            }
            if k + 1 < self.order {
                power = power.mul_capped(g, cap);
            }
        }
        Ok(match acc {
            Some(a) => a.truncate(cap),
            None => Self::zero(&self.ctx, cap.min(power.order)),
        })
    }

    /// Compositional inverse of a series with valuation one.
    pub fn reversion(&self) -> Result<Self, AlgebraError> {
        if self.val != 1 || self.leading().and_then(|c| c.recip()).is_none() {
            return Err(AlgebraError::BadValuation(format!(
                "reversion needs valuation 1 with invertible leading coefficient, got valuation {}",
                self.val
            )));
        }
        // Lagrange inversion: g_n = [t^(n-1)] (t / f)^n / n.
        let h = self.shift(-1).recip()?;
        let k = self.order;
        let mut coeffs = Vec::with_capacity(k.max(1) as usize);
        let mut hp = h.clone();
        for n in 1..k {
            if n > 1 {
                hp = hp.mul(&h);
            }
            let c = hp.coeff(n - 1)? / F::from_i64(n, &self.ctx);
            coeffs.push(c);
        }
        Ok(Self::from_coeffs(1, coeffs, k, &self.ctx))
    }

    /// `f(-t)`.
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .terms()
            .map(|(d, c)| if d % 2 == 0 { c.clone() } else { -c.clone() })
            .collect();
        Self::from_coeffs(self.val, coeffs, self.order, &self.ctx)
    }

    /// Largest modulus among coefficients whose degree parity is `odd`.
    pub fn parity_defect(&self, odd: bool) -> f64 {
        self.terms()
            .filter(|(d, _)| (d.rem_euclid(2) == 1) == odd)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn map<G: Scalar>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> LaurentSeries<G> {
        LaurentSeries::from_coeffs(self.val, self.coeffs.iter().map(f).collect(), self.order, ctx)
    }
}

impl<F: Scalar> fmt::Display for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, c) in self.terms() {
            if !c.is_zero() {
                write!(f, "({})t^{d} + ", c.render())?;
            }
        }
        write!(f, "O(t^{})", self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{Prec, C, Q};

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    fn series(val: i64, c: &[(i64, i64)], order: i64) -> LaurentSeries<Q> {
        LaurentSeries::from_coeffs(val, c.iter().map(|&(n, d)| q(n, d)).collect(), order, &())
    }

    #[test]
    fn residue_reads_minus_one_coefficient() {
        let s = series(-2, &[(3, 1), (5, 1), (7, 1)], 4);
        assert_eq!(s.residue().unwrap(), q(5, 1));
        let inv = series(-1, &[(1, 1)], 3);
        assert_eq!(inv.residue().unwrap(), q(1, 1));
        let hol = series(2, &[(1, 1)], 6);
        assert_eq!(hol.residue().unwrap(), q(0, 1));
        let short = series(-5, &[(1, 1)], -2);
        assert!(matches!(
            short.residue(),
            Err(AlgebraError::TruncationTooShort { .. })
        ));
    }

    #[test]
    fn reversion_of_z_plus_z_squared() {
        let f = series(1, &[(1, 1), (1, 1)], 5);
        let g = f.reversion().unwrap();
        let want = series(1, &[(1, 1), (-1, 1), (2, 1), (-5, 1)], 5);
        assert_eq!(g, want);
        let id = f.compose(&g).unwrap();
        assert_eq!(id, LaurentSeries::var(&(), 5));
    }

    #[test]
    fn reversion_of_identity_is_identity() {
        let f = LaurentSeries::<Q>::var(&(), 8);
        assert_eq!(f.reversion().unwrap(), f);
    }

    #[test]
    fn reversion_rejects_bad_valuation() {
        let f = series(2, &[(1, 1)], 6);
        assert!(matches!(f.reversion(), Err(AlgebraError::BadValuation(_))));
        let g = series(0, &[(1, 1), (1, 1)], 6);
        assert!(matches!(g.reversion(), Err(AlgebraError::BadValuation(_))));
    }

    #[test]
    fn log_of_one_plus_z() {
        let f = series(0, &[(1, 1), (1, 1)], 6);
        let (c, l) = f.log().unwrap();
        assert_eq!(c, q(1, 1));
        assert_eq!(l, series(1, &[(1, 1), (-1, 2), (1, 3), (-1, 4), (1, 5)], 6));
        let back = l.exp().unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn log_reports_branch_constant_separately() {
        let f = series(0, &[(-1, 1), (-1, 1)], 5); // -1 - z
        let (c, l) = f.log().unwrap();
        assert_eq!(c, q(-1, 1));
        assert_eq!(l.coeff(0).unwrap(), q(0, 1));
        assert_eq!(l.coeff(1).unwrap(), q(1, 1));
    }

    #[test]
    fn log_requires_valuation_zero() {
        let f = series(1, &[(1, 1)], 5);
        assert!(matches!(f.log(), Err(AlgebraError::LogValuation(1))));
    }

    #[test]
    fn integrate_and_differentiate() {
        let z = LaurentSeries::<Q>::var(&(), 6);
        let i = z.integrate().unwrap();
        assert_eq!(i, series(2, &[(1, 2)], 7));
        assert_eq!(i.derivative(), z);
        let with_residue = series(-1, &[(2, 1)], 3);
        assert!(matches!(
            with_residue.integrate(),
            Err(AlgebraError::ResidueObstruction)
        ));
    }

    #[test]
    fn truncation_is_pessimistic() {
        let a = series(-2, &[(1, 1), (1, 1)], 3);
        let b = series(1, &[(2, 1)], 4);
        let p = a.mul(&b);
        assert_eq!(p.val(), -1);
        assert_eq!(p.order(), (3 + 1).min(4 - 2));
        let s = a.add(&b);
        assert_eq!(s.order(), 3);
    }

    #[test]
    fn recip_round_trip() {
        let a = series(-1, &[(2, 1), (3, 1), (-1, 1)], 6);
        let r = a.recip().unwrap();
        let one = a.mul(&r);
        assert_eq!(one, LaurentSeries::one(&(), one.order()));
        assert_eq!(r.order(), 6 + 2);
    }

    #[test]
    fn sqrt_of_square() {
        let a = series(2, &[(4, 1), (4, 1), (1, 1)], 10); // (2t + t^2)^2
        let r = a.sqrt().unwrap();
        assert_eq!(r.truncate(5), series(1, &[(2, 1), (1, 1)], 5));
    }

    #[test]
    fn numeric_series_ops() {
        let p = Prec(128);
        let one = C::one(&p);
        let f = LaurentSeries::from_coeffs(1, vec![one.clone(), one.clone()], 12, &p);
        let g = f.reversion().unwrap();
        let id = f.compose(&g).unwrap();
        for (d, c) in id.terms() {
            let want = if d == 1 { 1.0 } else { 0.0 };
            assert!((c.norm() - want).abs() < 1e-30, "degree {d}");
        }
    }
}
