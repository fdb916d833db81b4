use serde_json::{json, Value};

use crate::algebra::{LaurentSeries, LogValue, RationalFunction, Scalar};

use super::{CurveError, CurveKind};

/// A constant that is either a plain ring element or a logarithm carried
/// symbolically with its branch.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalConstant<F: Scalar> {
    Value(F),
    Log(LogValue<F>),
}

impl<F: Scalar> LocalConstant<F> {
    pub fn value(&self) -> Option<F> {
        match self {
            LocalConstant::Value(v) => Some(v.clone()),
            LocalConstant::Log(l) => l.value(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            LocalConstant::Value(v) => json!({ "value": v.render() }),
            LocalConstant::Log(l) => json!({ "log": l.to_json() }),
        }
    }
}

/// Local data at a simple critical point `a` of `x̂`, in `t = z - a`.
///
/// The canonical coordinate is `ζ` with `x̂ = u + ζ²`. Since `√c₂` need not be
/// rational, the expansions are stored in the rescaled coordinate
/// `η = ζ / √c₂`, which satisfies `x̂ = u + c₂ η²` and is rational whenever
/// the curve is.
#[derive(Clone, Debug)]
pub struct RamificationPoint<F: Scalar> {
    pub a: F,
    /// `x̂(a)`.
    pub u: LocalConstant<F>,
    /// `x̂ = u + c₂ t² + O(t³)`.
    pub c2: F,
    /// `√c₂`, when it exists in the ring.
    pub sqrt_c2: Option<F>,
    /// Expansion order in `t` (exclusive).
    pub order: i64,
    /// `x̂(a + t) - u`.
    pub xhat: LaurentSeries<F>,
    /// `η(t)`, valuation one.
    pub eta: LaurentSeries<F>,
    /// `t(η)`, the inverse of `eta`.
    pub eta_inv: LaurentSeries<F>,
    /// Deck transformation `t ↦ t̄`, equal to `η ↦ -η`.
    pub deck: LaurentSeries<F>,
    /// `y(a)` (`log Y(a)` for toric curves).
    pub y0: LocalConstant<F>,
    /// `y(a + t) - y(a)`.
    pub y: LaurentSeries<F>,
}

impl<F: Scalar> RamificationPoint<F> {
    pub fn expand(
        kind: CurveKind,
        xhat: &RationalFunction<F>,
        yfun: &RationalFunction<F>,
        a: &F,
        order: i64,
    ) -> Result<Self, CurveError> {
        let (u, l) = match kind {
            CurveKind::Toric => {
                let s = xhat.series_at(a, order)?;
                let (c, l) = s.log()?;
                (LocalConstant::Log(LogValue::principal(c)), l)
            }
            CurveKind::Plain => {
                let s = xhat.series_at(a, order)?;
                let c = s.coeff(0)?;
                let l = s.sub(&LaurentSeries::monomial(c.clone(), 0, order));
                (LocalConstant::Value(c), l)
            }
        };
        let scale = l.norm().max(1.0);
        let l = l.drop_below(2, scale).map_err(|_| {
            CurveError::DegenerateFraming(format!("dx̂ does not vanish at {}", a.render()))
        })?;
        let c2 = l.coeff(2)?;
        if c2.is_negligible(scale) {
            return Err(CurveError::NonSimpleRamification(a.render()));
        }
        let inv_c2 = c2.recip().ok_or_else(|| CurveError::NonSimpleRamification(a.render()))?;
        let eta = l.shift(-2).scale(&inv_c2).sqrt()?.shift(1);
        let eta_inv = eta.reversion()?;
        let deck = eta_inv.compose(&eta.neg())?;
        let (y0, y) = match kind {
            CurveKind::Toric => {
                let s = yfun.series_at(a, order)?;
                if s.val() != 0 {
                    return Err(CurveError::DegenerateFraming(format!(
                        "critical point {} is a puncture",
                        a.render()
                    )));
                }
                let (c, ly) = s.log()?;
                (LocalConstant::Log(LogValue::principal(c)), ly)
            }
            CurveKind::Plain => {
                let s = yfun.series_at(a, order)?;
                let c = s.coeff(0)?;
                let ly = s.sub(&LaurentSeries::monomial(c.clone(), 0, order));
                (LocalConstant::Value(c), ly)
            }
        };
        let rp = RamificationPoint {
            a: a.clone(),
            u,
            sqrt_c2: c2.sqrt(),
            c2,
            order,
            xhat: l,
            eta,
            eta_inv,
            deck,
            y0,
            y,
        };
        rp.check()?;
        Ok(rp)
    }

    fn check(&self) -> Result<(), CurveError> {
        let scale = self.xhat.norm().max(1.0);
        let t = LaurentSeries::var(self.xhat.ctx(), self.order);
        let dd = self.deck.compose(&self.deck)?.sub(&t);
        if dd.terms().any(|(_, c)| !c.is_negligible(scale)) {
            return Err(CurveError::Internal("deck transformation is not an involution".into()));
        }
        let dx = self.xhat.compose(&self.deck)?.sub(&self.xhat);
        if dx.terms().any(|(_, c)| !c.is_negligible(scale)) {
            return Err(CurveError::Internal("x̂ is not deck invariant".into()));
        }
        let e2 = self.eta.mul(&self.eta).scale(&self.c2).sub(&self.xhat);
        if e2.terms().any(|(_, c)| !c.is_negligible(scale)) {
            return Err(CurveError::Internal("x̂ - u != c2 η²".into()));
        }
        Ok(())
    }

    /// `ζ(t) = √c₂ η(t)`, when `√c₂` is in the ring.
    pub fn zeta_of_z(&self) -> Option<LaurentSeries<F>> {
        self.sqrt_c2.as_ref().map(|s| self.eta.scale(s))
    }

    /// `y - y(a)` as a series in `η`.
    pub fn y_in_eta(&self) -> Result<LaurentSeries<F>, CurveError> {
        Ok(self.y.compose(&self.eta_inv)?)
    }

    /// `dx̂/dt`.
    pub fn dxhat(&self) -> LaurentSeries<F> {
        self.xhat.derivative()
    }

    /// `y(t) - y(t̄)`; odd under the deck transformation.
    pub fn delta_y(&self) -> Result<LaurentSeries<F>, CurveError> {
        Ok(self.y.sub(&self.y.compose(&self.deck)?))
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "a": self.a.render(),
            "u": self.u.to_json(),
            "c2": self.c2.render(),
            "order": self.order,
            "eta": series_json(&self.eta),
            "deck": series_json(&self.deck),
            "y0": self.y0.to_json(),
            "y": series_json(&self.y),
        });
        if let Some(z) = self.zeta_of_z() {
            v["zeta_of_z"] = series_json(&z);
        }
        v
    }
}

pub fn series_json<F: Scalar>(s: &LaurentSeries<F>) -> Value {
    let terms: serde_json::Map<String, Value> = s
        .terms()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| (d.to_string(), Value::String(c.render())))
        .collect();
    json!({ "terms": terms, "order": s.order() })
}
