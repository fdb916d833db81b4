use crate::algebra::{Polynomial, RationalFunction, Scalar};
use crate::toric::{MirrorPolynomial, ToricCounts};

use super::CurveError;

/// A rational parametrization `X = X(z)`, `Y = Y(z)` of `H(X, Y) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Parametrization<F: Scalar> {
    pub x: RationalFunction<F>,
    pub y: RationalFunction<F>,
    /// `true` when `z = Y` and `X` was solved for.
    pub transposed: bool,
}

/// Solve `H` for the variable it is linear in. `z = X` is preferred.
pub fn parametrize<F: Scalar>(
    h: &MirrorPolynomial<F>,
    counts: &ToricCounts,
    ctx: &F::Ctx,
) -> Result<Parametrization<F>, CurveError> {
    if counts.fg > 0 {
        return Err(CurveError::NotGenusZero(counts.fg));
    }
    let (ylo, yhi) = h.degree_range(false);
    let (xlo, xhi) = h.degree_range(true);
    let transposed = if yhi - ylo == 1 {
        false
    } else if xhi - xlo == 1 {
        true
    } else {
        return Err(CurveError::NotLinear);
    };
    // With u the uniformizer and v the solved variable, H = u^lo (A(u) + B(u) v) v^vlo.
    let (ulo, vlo) = if transposed { (ylo, xlo) } else { (xlo, ylo) };
    let mut a = vec![F::zero(ctx); (if transposed { yhi - ylo } else { xhi - xlo }) as usize + 1];
    let mut b = a.clone();
    for (&(m, n), c) in &h.terms {
        let (ue, ve) = if transposed { (n, m) } else { (m, n) };
        let idx = (ue - ulo) as usize;
        if ve == vlo {
            a[idx] += c;
        } else {
            b[idx] += c;
        }
    }
    let a = Polynomial::new(a, ctx);
    let b = Polynomial::new(b, ctx);
    let v = RationalFunction::new(a.neg(), b).map_err(CurveError::Algebra)?;
    let u = RationalFunction::z(ctx);
    let p = if transposed {
        Parametrization { x: v, y: u, transposed }
    } else {
        Parametrization { x: u, y: v, transposed }
    };
    check_parametrization(h, &p)?;
    Ok(p)
}

/// `H(X(z), Y(z))` as a rational function; must vanish identically.
pub fn check_parametrization<F: Scalar>(
    h: &MirrorPolynomial<F>,
    p: &Parametrization<F>,
) -> Result<(), CurveError> {
    let ctx = p.x.ctx().clone();
    let mut acc = RationalFunction::constant(F::zero(&ctx));
    let mut scale: f64 = 1.0;
    for (&(m, n), c) in &h.terms {
        let t = p
            .x
            .pow(m)
            .and_then(|xm| Ok(xm.mul(&p.y.pow(n)?)))
            .map_err(CurveError::Algebra)?
            .scale(c);
        scale = scale.max(t.num().norm());
        acc = acc.add(&t);
    }
    let bad = if F::EXACT {
        !acc.is_zero()
    } else {
        acc.num().coeffs().iter().any(|c| !c.is_negligible(scale))
    };
    if bad {
        return Err(CurveError::ParametrizationInvalid(format!("H(X(z), Y(z)) = {acc}")));
    }
    Ok(())
}
