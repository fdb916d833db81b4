use std::collections::BTreeMap;

use super::poly::Polynomial;
use super::ratfun::RationalFunction;
use super::scalar::Scalar;
use super::AlgebraError;

/// `r = polynomial + sum c_(i,k) / (z - poles[i])^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions<F: Scalar> {
    pub poles: Vec<F>,
    pub polynomial: Polynomial<F>,
    /// `(pole index, order) -> coefficient`; zero coefficients are omitted.
    pub parts: BTreeMap<(usize, usize), F>,
}

impl<F: Scalar> PartialFractions<F> {
    pub fn recombine(&self) -> RationalFunction<F> {
        let ctx = self.polynomial.ctx().clone();
        let mut acc = RationalFunction::from_poly(self.polynomial.clone());
        for ((i, k), c) in &self.parts {
            let lin = Polynomial::new(vec![-self.poles[*i].clone(), F::one(&ctx)], &ctx);
            let term = RationalFunction::new(Polynomial::constant(c.clone()), lin.pow(*k as u32))
                .expect("nonzero denominator");
            acc = acc.add(&term);
        }
        acc
    }
}

pub fn partial_fractions<F: Scalar>(
    r: &RationalFunction<F>,
    poles: &[F],
) -> Result<PartialFractions<F>, AlgebraError> {
    let den = r.den();
    let mut covered = 0usize;
    let mut parts = BTreeMap::new();
    for (i, a) in poles.iter().enumerate() {
        let m = den.root_multiplicity(a);
        covered += m;
        if m == 0 {
            continue;
        }
        let s = r.series_at(a, 0)?;
        for k in 1..=m {
            let c = s.coeff(-(k as i64))?;
            if !c.is_zero() {
                parts.insert((i, k), c);
            }
        }
    }
    let deg = den.degree().unwrap_or(0);
    if covered < deg {
        return Err(AlgebraError::MissingPole(format!(
            "{} of {} denominator roots unaccounted for",
            deg - covered,
            deg
        )));
    }
    let (polynomial, _) = r.num().div_rem(den)?;
    Ok(PartialFractions {
        poles: poles.to_vec(),
        polynomial,
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::Q;

    fn p(v: &[i64]) -> Polynomial<Q> {
        Polynomial::new(v.iter().map(|&c| Q::from_i64(c, &())).collect(), &())
    }

    #[test]
    fn simple_poles() {
        let r = RationalFunction::new(p(&[1]), p(&[-1, 0, 1])).unwrap();
        let pf = partial_fractions(&r, &[Q::new(1, 1), Q::new(-1, 1)]).unwrap();
        assert_eq!(pf.parts[&(0, 1)], Q::new(1, 2));
        assert_eq!(pf.parts[&(1, 1)], Q::new(-1, 2));
        assert_eq!(pf.recombine(), r);
    }

    #[test]
    fn polynomial_only() {
        let r = RationalFunction::from_poly(p(&[0, 1]));
        let pf = partial_fractions(&r, &[]).unwrap();
        assert!(pf.parts.is_empty());
        assert_eq!(pf.polynomial, p(&[0, 1]));
    }

    #[test]
    fn double_pole() {
        let r = RationalFunction::new(p(&[1]), p(&[0, 0, 1])).unwrap();
        let pf = partial_fractions(&r, &[Q::new(0, 1)]).unwrap();
        assert_eq!(pf.parts.len(), 1);
        assert_eq!(pf.parts[&(0, 2)], Q::new(1, 1));
    }

    #[test]
    fn missing_pole_detected() {
        let r = RationalFunction::new(p(&[1]), p(&[-1, 0, 1])).unwrap();
        assert!(matches!(
            partial_fractions(&r, &[Q::new(1, 1)]),
            Err(AlgebraError::MissingPole(_))
        ));
    }
}
