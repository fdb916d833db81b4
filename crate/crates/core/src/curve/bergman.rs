use crate::algebra::{LaurentSeries, RationalFunction, Scalar};

use super::CurveError;

/// The fundamental differential of `P¹`, `B(z₁, z₂) = dz₁ dz₂ / (z₁ - z₂)²`.
///
/// On a genus-zero curve the A-period normalization is vacuous, so this is
/// the only choice. It is kept as a marker type; the recursion works with its
/// local expansions directly.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Bergman;

impl Bergman {
    /// Coefficient of `dz₁ dz₂`; `None` on the diagonal.
    pub fn eval<F: Scalar>(&self, z1: &F, z2: &F) -> Option<F> {
        let d = z1.clone() - z2;
        (d.clone() * &d).recip()
    }

    /// `B(z₁, z₁ + t) / (dz₁ dt) = t⁻²`.
    pub fn near_diagonal<F: Scalar>(&self, ctx: &F::Ctx, order: i64) -> LaurentSeries<F> {
        LaurentSeries::monomial(F::one(ctx), -2, order)
    }

    /// `Res_{z₂ → z₁} B(z₁, z₂) f(z₂)`, which reproduces `df(z₁)/dz₁`.
    pub fn reproduce<F: Scalar>(&self, f: &RationalFunction<F>, z1: &F) -> Result<F, CurveError> {
        let ctx = z1.ctx();
        let fs = f.series_at(z1, 3)?;
        Ok(self.near_diagonal(&ctx, 3).mul(&fs).residue()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Polynomial, Q};

    #[test]
    fn symmetric() {
        let b = Bergman;
        assert_eq!(b.eval(&Q::new(1, 2), &Q::new(3, 1)), b.eval(&Q::new(3, 1), &Q::new(1, 2)));
        assert_eq!(b.eval(&Q::new(1, 2), &Q::new(1, 2)), None);
    }

    #[test]
    fn reproduces_derivatives() {
        let b = Bergman;
        let z = RationalFunction::<Q>::z(&());
        assert_eq!(b.reproduce(&z, &Q::new(5, 7)).unwrap(), Q::new(1, 1));
        let z2 = RationalFunction::from_poly(Polynomial::monomial(Q::new(1, 1), 2));
        assert_eq!(b.reproduce(&z2, &Q::new(5, 7)).unwrap(), Q::new(10, 7));
    }
}
