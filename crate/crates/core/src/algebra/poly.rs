use std::fmt;

use super::scalar::Scalar;
use super::AlgebraError;

/// Dense univariate polynomial, coefficients indexed by degree.
///
/// Trailing (top-degree) coefficients that are exactly zero are stripped, so
/// the leading coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<F: Scalar> {
    coeffs: Vec<F>,
    ctx: F::Ctx,
}

impl<F: Scalar> Polynomial<F> {
    pub fn new(mut coeffs: Vec<F>, ctx: &F::Ctx) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial {
            coeffs,
            ctx: ctx.clone(),
        }
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        Self::new(Vec::new(), ctx)
    }

    pub fn constant(c: F) -> Self {
        let ctx = c.ctx();
        Self::new(vec![c], &ctx)
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Self::constant(F::one(ctx))
    }

    /// The monomial `z`.
    pub fn z(ctx: &F::Ctx) -> Self {
        Self::new(vec![F::zero(ctx), F::one(ctx)], ctx)
    }

    /// `c * z^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let ctx = c.ctx();
        let mut v = vec![F::zero(&ctx); k];
        v.push(c);
        Self::new(v, &ctx)
    }

    /// `prod (z - r)`.
    pub fn from_roots(roots: &[F], ctx: &F::Ctx) -> Self {
        let mut p = Self::one(ctx);
        for r in roots {
            p = p.mul(&Self::new(vec![-r.clone(), F::one(ctx)], ctx));
        }
        p
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// Largest coefficient modulus.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: &F) -> F {
        let mut acc = F::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|k| self.coeff(k) + &other.coeff(k)).collect();
        Self::new(v, &self.ctx)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|k| self.coeff(k) - &other.coeff(k)).collect();
        Self::new(v, &self.ctx)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect(), &self.ctx)
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s).collect(), &self.ctx)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut v = vec![F::zero(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j].add_mul(a, b);
            }
        }
        Self::new(v, &self.ctx)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * &F::from_i64(k as i64, &self.ctx))
            .collect();
        Self::new(v, &self.ctx)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), AlgebraError> {
        let dl = d.leading().ok_or(AlgebraError::ZeroPolynomial)?;
        let inv = dl.recip().ok_or(AlgebraError::ZeroPolynomial)?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut q = vec![F::zero(&self.ctx); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() * &inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = c.clone() * dc;
                r[k + j] -= &t;
            }
            // Exact cancellation of the eliminated coefficient.
            r[k + dd] = F::zero(&self.ctx);
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q, &self.ctx), Self::new(r, &self.ctx)))
    }

    pub fn monic(&self) -> Self {
        match self.leading().and_then(|l| l.recip()) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor. Meaningful in exact mode; in numeric
    /// mode remainders are only cut when exactly zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Taylor shift: the coefficients of `p(a + t)` in `t`.
    pub fn shift(&self, a: &F) -> Self {
        let mut v = self.coeffs.clone();
        let n = v.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = v[j + 1].clone() * a;
                v[j] += &t;
            }
        }
        Self::new(v, &self.ctx)
    }

    /// `t^deg p(1/t)`: coefficients reversed, padded to `deg` if requested.
    pub fn reversed(&self, deg: usize) -> Self {
        let mut v = self.coeffs.clone();
        v.resize(deg + 1, F::zero(&self.ctx));
        v.reverse();
        Self::new(v, &self.ctx)
    }

    /// Multiplicity of `a` as a root. In numeric mode a Taylor-shift coefficient
    /// counts as zero when negligible against the sum of the terms producing it.
    pub fn root_multiplicity(&self, a: &F) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let s = self.shift(a);
        // bound on |Σ_i c_i C(i,k) a^(i-k)| for each shifted coefficient k
        let r = a.norm();
        let bound = |k: usize| {
            let mut b = 0.0f64;
            let mut binom = 1.0f64;
            for (i, c) in self.coeffs.iter().enumerate().skip(k) {
                if i > k {
                    binom = binom * i as f64 / (i - k) as f64;
                }
                b += c.norm() * binom * r.powi((i - k) as i32);
            }
            b
        };
        s.coeffs
            .iter()
            .enumerate()
            .take_while(|(k, c)| c.is_negligible(bound(*k)))
            .count()
    }

    pub fn map<G: Scalar>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Polynomial<G> {
        Polynomial::new(self.coeffs.iter().map(f).collect(), ctx)
    }
}

impl<F: Scalar> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({})", c.render())?,
                1 => write!(f, "({})*z", c.render())?,
                _ => write!(f, "({})*z^{k}", c.render())?,
            }
        }
        Ok(())
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
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // z^2 - 1
        let b = p(&[1, 1]); // z + 1
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[1, 2, 1])), b);
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let a = p(&[3, -2, 0, 5]);
        let s = a.shift(&Q::new(1, 2));
        for t in [-2i64, 0, 3] {
            let tq = Q::from_i64(t, &());
            assert_eq!(s.eval(&tq), a.eval(&(tq.clone() + &Q::new(1, 2))));
        }
    }

    #[test]
    fn root_multiplicity_exact() {
        let a = p(&[0, 0, 1, 1]); // z^2 (z + 1)
        assert_eq!(a.root_multiplicity(&Q::zero(&())), 2);
        assert_eq!(a.root_multiplicity(&Q::from_i64(-1, &())), 1);
        assert_eq!(a.root_multiplicity(&Q::from_i64(1, &())), 0);
    }
}
