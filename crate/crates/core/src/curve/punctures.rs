use serde_json::{json, Value};

use crate::algebra::{poly_roots, LaurentSeries, LogValue, RationalFunction, Scalar};

use super::local::series_json;
use super::{CurveError, CurveKind, Location, SpectralCurve};

/// A point of `P¹` where `X` or `Y` has a zero or a pole.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePuncture<F: Scalar> {
    pub location: Location<F>,
    pub ord_x: i64,
    pub ord_y: i64,
    pub ord_xhat: i64,
}

impl<F: Scalar> CurvePuncture<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "z": self.location.render(),
            "ord_X": self.ord_x,
            "ord_Y": self.ord_y,
            "ord_Xhat": self.ord_xhat,
        })
    }
}

/// A brane puncture `p̄_ℓ`: a simple zero of `X̂` on the divisor `X = 0`.
#[derive(Clone, Debug)]
pub struct Puncture<F: Scalar> {
    pub location: Location<F>,
    pub branch_index: usize,
    /// `ρ_ℓ`: the local coordinate `s` (`z = z₀ + s`, or `z = 1/s` at `∞`)
    /// as a series in `w = X̂`.
    pub rho: LaurentSeries<F>,
    /// `log Y(p̄_ℓ)`, principal branch.
    pub log_y: LogValue<F>,
}

impl<F: Scalar> Puncture<F> {
    /// `z(w)`; a Laurent series when the puncture sits at `∞`.
    pub fn z_of_w(&self) -> Result<LaurentSeries<F>, CurveError> {
        Ok(match &self.location {
            Location::Finite(z0) => self
                .rho
                .add(&LaurentSeries::monomial(z0.clone(), 0, self.rho.order())),
            Location::Infinity => self.rho.recip()?,
        })
    }

    /// `dz/ds`: `1`, or `-1/s²` at `∞`.
    pub fn dz_ds(&self, order: i64) -> LaurentSeries<F> {
        let ctx = self.rho.ctx().clone();
        match &self.location {
            Location::Finite(_) => LaurentSeries::one(&ctx, order),
            Location::Infinity => LaurentSeries::monomial(-F::one(&ctx), -2, order),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "z": self.location.render(),
            "branch_index": self.branch_index,
            "rho": series_json(&self.rho),
            "logY_at": self.log_y.to_json(),
        })
    }
}

/// `f` in the local coordinate `s` at `loc`.
pub fn local_series<F: Scalar>(
    f: &RationalFunction<F>,
    loc: &Location<F>,
    order: i64,
) -> Result<LaurentSeries<F>, CurveError> {
    Ok(match loc {
        Location::Finite(z0) => f.series_at(z0, order)?,
        Location::Infinity => f.series_at_infinity(order)?,
    })
}

fn same_point<F: Scalar>(a: &F, b: &F) -> bool {
    let scale = a.norm().max(b.norm()).max(1.0);
    (a.clone() - b).norm() <= scale * F::tolerance(&a.ctx()).sqrt().max(if F::EXACT { 0.0 } else { 1e-30 })
        || a == b
}

impl<F: Scalar> SpectralCurve<F> {
    /// All zeros and poles of `X` and `Y`, finite points first.
    pub fn punctures(&self) -> Result<Vec<CurvePuncture<F>>, CurveError> {
        if self.kind != CurveKind::Toric {
            return Err(CurveError::NoBrane("plain curves have no punctures".into()));
        }
        let mut pts: Vec<F> = Vec::new();
        for p in [self.x.num(), self.x.den(), self.y.num(), self.y.den()] {
            if p.degree().unwrap_or(0) == 0 {
                continue;
            }
            for r in poly_roots(p)? {
                if !pts.iter().any(|q| same_point(q, &r.value)) {
                    pts.push(r.value);
                }
            }
        }
        pts.sort_by(|a, b| {
            let (ar, ai) = a.to_f64_pair();
            let (br, bi) = b.to_f64_pair();
            ar.total_cmp(&br).then(ai.total_cmp(&bi))
        });
        let mut locs: Vec<Location<F>> = pts.into_iter().map(Location::Finite).collect();
        locs.push(Location::Infinity);
        let out = locs
            .into_iter()
            .map(|loc| {
                let ord_x = loc.order_of(&self.x);
                let ord_y = loc.order_of(&self.y);
                CurvePuncture {
                    ord_xhat: ord_x + self.framing * ord_y,
                    location: loc,
                    ord_x,
                    ord_y,
                }
            })
            .filter(|p| p.ord_x != 0 || p.ord_y != 0)
            .collect();
        Ok(out)
    }

    /// The punctures on the brane divisor `X = 0` (points with `ord X > 0`
    /// and `ord Y = 0`), with `ρ_ℓ` expanded to `order`.
    pub fn brane_punctures(&self, order: i64) -> Result<Vec<Puncture<F>>, CurveError> {
        let all = self.punctures()?;
        let on_divisor: Vec<&CurvePuncture<F>> =
            all.iter().filter(|p| p.ord_x > 0 && p.ord_y == 0).collect();
        for p in &on_divisor {
            if p.ord_x > 1 {
                return Err(CurveError::PunctureCollision(format!(
                    "X vanishes to order {} at z = {}",
                    p.ord_x,
                    p.location.render()
                )));
            }
        }
        if let Some(t) = &self.toric {
            if on_divisor.len() as i64 != t.frame.m {
                return Err(CurveError::WrongMultiplicity {
                    expected: t.frame.m,
                    found: on_divisor.len() as i64,
                });
            }
        }
        if on_divisor.is_empty() {
            return Err(CurveError::NoBrane("X has no zero away from the zeros and poles of Y".into()));
        }
        on_divisor
            .iter()
            .enumerate()
            .map(|(l, p)| {
                let xs = local_series(&self.xhat, &p.location, order)?;
                let scale = xs.norm().max(1.0);
                let rho = xs.drop_below(1, scale)?.reversion()?;
                let ys = local_series(&self.y, &p.location, 1)?;
                let y0 = ys.coeff(0)?;
                Ok(Puncture {
                    location: p.location.clone(),
                    branch_index: l,
                    rho,
                    log_y: LogValue::principal(y0),
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Prec, Q, C};
    use crate::toric::validate_diagram;
    use std::collections::BTreeMap;

    #[test]
    fn c3_brane_puncture() {
        let d = validate_diagram(&[(0, 0), (1, 0), (0, 1)], &[[(0, 0), (1, 0), (0, 1)]]).unwrap();
        let c = SpectralCurve::<Q>::from_toric(&d, &BTreeMap::new(), None, None, 1, &()).unwrap();
        let all = c.punctures().unwrap();
        assert_eq!(all.len(), 3);
        let b = c.brane_punctures(10).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].location, Location::Finite(Q::new(0, 1)));
        assert_eq!(b[0].log_y.argument, Q::new(-1, 1));
        // X̂(ρ(w)) = w
        let xs = local_series(&c.xhat, &b[0].location, 10).unwrap();
        let id = xs.compose(&b[0].rho).unwrap();
        assert_eq!(id.coeff(1).unwrap(), Q::new(1, 1));
        for k in 2..9 {
            assert_eq!(id.coeff(k).unwrap(), Q::new(0, 1));
        }
        let p = Prec(128);
        assert!(b[0].log_y.value().is_none());
        let lv = LogValue::principal(C::from_f64(-1.0, 0.0, p)).value().unwrap();
        assert!((lv.im.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn a2_edge_has_three_punctures() {
        let d = validate_diagram(
            &[(0, 0), (1, 0), (0, 3)],
            &[[(0, 0), (1, 0), (0, 1)], [(0, 1), (1, 0), (0, 2)], [(0, 2), (1, 0), (0, 3)]],
        )
        .unwrap();
        let mut co = BTreeMap::new();
        co.insert((0, 2), Q::new(11, 36));
        co.insert((0, 3), Q::new(1, 36));
        let p = Prec(256);
        let cc: BTreeMap<_, _> = co.iter().map(|(k, v)| (*k, v.to_complex(256))).collect();
        let c = SpectralCurve::<C>::from_toric(&d, &cc, None, None, 1, &p).unwrap();
        assert!(c.toric.as_ref().unwrap().transposed);
        assert_eq!(c.critical.len(), 3);
        let b = c.brane_punctures(8).unwrap();
        assert_eq!(b.len(), 3);
        // Roots of (1 + z/2)(1 + z/3)(1 + z/6).
        let want = [-6.0, -3.0, -2.0];
        for (p, w) in b.iter().zip(want) {
            match &p.location {
                Location::Finite(z) => assert!((z.to_f64_pair().0 - w).abs() < 1e-30),
                Location::Infinity => panic!(),
            }
        }
    }
}
