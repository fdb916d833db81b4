//! Genus-zero spectral curves: parametrization of the framed mirror curve,
//! ramification data, brane punctures and the fundamental differential.

pub mod bergman;
pub mod config;
pub mod local;
pub mod parametrize;
pub mod punctures;

pub use bergman::Bergman;
pub use config::{CurveConfig, CurveSource, Mode};
pub use local::{LocalConstant, RamificationPoint};
pub use parametrize::{parametrize, Parametrization};
pub use punctures::{CurvePuncture, Puncture};

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{poly_roots, AlgebraError, Polynomial, Prec, RationalFunction, Scalar, C};
use crate::toric::{
    brane::{transform_diagram, transform_polynomial},
    brane_frame, counts, default_brane_edge, BraneFrame, MirrorPolynomial, Point, ToricCounts,
    ToricDiagram, ToricError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("NotGenusZero: the mirror curve has genus {0}")]
    NotGenusZero(i64),
    #[error("NotLinear: H has degree > 1 in both X and Y; supply a parametrization")]
    NotLinear,
    #[error("ParametrizationInvalid: {0}")]
    ParametrizationInvalid(String),
    #[error("DegenerateFraming: {0}")]
    DegenerateFraming(String),
    #[error("RamificationAtInfinity: dx̂ vanishes at z = ∞; choose another framing")]
    RamificationAtInfinity,
    #[error("NonSimpleRamification: critical point {0} is not simple")]
    NonSimpleRamification(String),
    #[error("PunctureCollision: {0}")]
    PunctureCollision(String),
    #[error("WrongMultiplicity: expected {expected} brane punctures, found {found}")]
    WrongMultiplicity { expected: i64, found: i64 },
    #[error("NoBrane: {0}")]
    NoBrane(String),
    #[error("ConfigError: {0}")]
    Config(String),
    #[error("InternalCheckFailed: {0}")]
    Internal(String),
}

impl CurveError {
    pub fn kind(&self) -> &'static str {
        match self {
            CurveError::Toric(e) => e.kind(),
            CurveError::Algebra(e) => e.kind(),
            CurveError::NotGenusZero(_) => "NotGenusZero",
            CurveError::NotLinear => "NotLinear",
            CurveError::ParametrizationInvalid(_) => "ParametrizationInvalid",
            CurveError::DegenerateFraming(_) => "DegenerateFraming",
            CurveError::RamificationAtInfinity => "RamificationAtInfinity",
            CurveError::NonSimpleRamification(_) => "NonSimpleRamification",
            CurveError::PunctureCollision(_) => "PunctureCollision",
            CurveError::WrongMultiplicity { .. } => "WrongMultiplicity",
            CurveError::NoBrane(_) => "NoBrane",
            CurveError::Config(_) => "ConfigError",
            CurveError::Internal(_) => "InternalCheckFailed",
        }
    }

    /// Errors caused by the input rather than by the computation.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            CurveError::Toric(_)
                | CurveError::Config(_)
                | CurveError::ParametrizationInvalid(_)
                | CurveError::NoBrane(_)
                | CurveError::Algebra(AlgebraError::IrrationalRootsInExactMode)
                | CurveError::Algebra(AlgebraError::Parse(_))
        )
    }
}

/// `Toric`: `X, Y` are coordinates on `(C*)²`, `x̂ = log(X Y^f)`, `y = log Y`.
/// `Plain`: `x, y` are used as given, `Φ = y dx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Toric,
    Plain,
}

/// A point of `P¹`.
#[derive(Clone, Debug, PartialEq)]
pub enum Location<F: Scalar> {
    Finite(F),
    Infinity,
}

impl<F: Scalar> Location<F> {
    pub fn render(&self) -> String {
        match self {
            Location::Finite(z) => z.render(),
            Location::Infinity => "infinity".into(),
        }
    }

    /// Order of a rational function at this point (in `w = 1/z` at `∞`).
    pub fn order_of(&self, r: &RationalFunction<F>) -> i64 {
        match self {
            Location::Finite(z) => r.order_at(z),
            Location::Infinity => r.order_at_infinity(),
        }
    }
}

/// Data that only exists for curves built from a toric diagram.
#[derive(Clone, Debug)]
pub struct ToricData<F: Scalar> {
    /// The diagram as given.
    pub diagram: ToricDiagram,
    pub counts: ToricCounts,
    /// Brane-adapted frame; the polynomial below lives in its coordinates.
    pub frame: BraneFrame,
    pub adapted: ToricDiagram,
    pub mirror: MirrorPolynomial<F>,
    pub transposed: bool,
}

/// A genus-zero spectral curve with uniformizer `z` on `P¹`.
#[derive(Clone, Debug)]
pub struct SpectralCurve<F: Scalar> {
    pub kind: CurveKind,
    /// `X(z)` (or `x(z)` for plain curves).
    pub x: RationalFunction<F>,
    /// `Y(z)` (or `y(z)`).
    pub y: RationalFunction<F>,
    pub framing: i64,
    /// `X̂ = X Y^f` (or `x`).
    pub xhat: RationalFunction<F>,
    pub toric: Option<ToricData<F>>,
    /// Critical points of `x̂`, sorted by real then imaginary part.
    pub critical: Vec<F>,
    pub ctx: F::Ctx,
}

fn trim<F: Scalar>(p: &Polynomial<F>) -> Polynomial<F> {
    if F::EXACT {
        return p.clone();
    }
    let scale = p.norm();
    let mut c = p.coeffs().to_vec();
    while c.last().is_some_and(|x| x.is_negligible(scale)) {
        c.pop();
    }
    Polynomial::new(c, p.ctx())
}

impl<F: Scalar> SpectralCurve<F> {
    /// Mirror curve of a toric diagram with the given coefficients, framing
    /// and outer-brane edge (default: see [`default_brane_edge`]).
    pub fn from_toric(
        diagram: &ToricDiagram,
        coefficients: &std::collections::BTreeMap<Point, F>,
        gauge: Option<usize>,
        brane_edge: Option<[Point; 2]>,
        framing: i64,
        ctx: &F::Ctx,
    ) -> Result<Self, CurveError> {
        let c = counts(diagram)?;
        let h = crate::toric::mirror_polynomial(diagram, coefficients, gauge, ctx)?;
        let edge = brane_edge.unwrap_or_else(|| default_brane_edge(diagram));
        let frame = brane_frame(diagram, edge).map_err(|e| CurveError::NoBrane(e.to_string()))?;
        let adapted = transform_diagram(diagram, &frame)?;
        let mirror = transform_polynomial(&h, &frame);
        let p = parametrize(&mirror, &c, ctx)?;
        let mut curve = Self::assemble(CurveKind::Toric, p.x, p.y, framing, ctx)?;
        curve.toric = Some(ToricData {
            diagram: diagram.clone(),
            counts: c,
            frame,
            adapted,
            mirror,
            transposed: p.transposed,
        });
        curve.locate_critical_points()?;
        Ok(curve)
    }

    /// A curve given directly by `X(z), Y(z)` (toric) or `x(z), y(z)` (plain).
    pub fn from_parametrization(
        kind: CurveKind,
        x: RationalFunction<F>,
        y: RationalFunction<F>,
        framing: i64,
        ctx: &F::Ctx,
    ) -> Result<Self, CurveError> {
        let framing = if kind == CurveKind::Plain { 0 } else { framing };
        let mut curve = Self::assemble(kind, x, y, framing, ctx)?;
        curve.locate_critical_points()?;
        Ok(curve)
    }

    fn assemble(
        kind: CurveKind,
        x: RationalFunction<F>,
        y: RationalFunction<F>,
        framing: i64,
        ctx: &F::Ctx,
    ) -> Result<Self, CurveError> {
        if x.is_zero() || y.is_zero() {
            return Err(CurveError::ParametrizationInvalid("X and Y must be nonzero".into()));
        }
        let xhat = match kind {
            CurveKind::Toric => x.mul(&y.pow(framing)?),
            CurveKind::Plain => x.clone(),
        };
        Ok(SpectralCurve {
            kind,
            x,
            y,
            framing,
            xhat,
            toric: None,
            critical: Vec::new(),
            ctx: ctx.clone(),
        })
    }

    /// The form `dx̂ / dz` as `W / V`, with `W` the polynomial whose roots are
    /// candidate critical points.
    fn dxhat_parts(&self) -> (Polynomial<F>, Polynomial<F>) {
        let n = self.xhat.num();
        let d = self.xhat.den();
        let w = trim(&n.derivative().mul(d).sub(&n.mul(&d.derivative())));
        let v = match self.kind {
            CurveKind::Toric => n.mul(d),
            CurveKind::Plain => d.mul(d),
        };
        (w, v)
    }

    fn is_puncture_point(&self, z: &F) -> bool {
        let bad = |r: &RationalFunction<F>| {
            let s = r.num().norm().max(r.den().norm());
            r.num().eval(z).is_negligible(s) || r.den().eval(z).is_negligible(s)
        };
        match self.kind {
            CurveKind::Toric => bad(&self.x) || bad(&self.y),
            CurveKind::Plain => {
                let s = self.x.den().norm();
                self.x.den().eval(z).is_negligible(s)
            }
        }
    }

    fn locate_critical_points(&mut self) -> Result<(), CurveError> {
        let (w, v) = self.dxhat_parts();
        // Order at ∞ of (W/V) dz is deg V - deg W - 2.
        let dw = w.degree().map(|d| d as i64);
        let dv = v.degree().unwrap_or(0) as i64;
        if let Some(dw) = dw {
            if dv - dw - 2 > 0 {
                return Err(CurveError::RamificationAtInfinity);
            }
        }
        let roots = if w.degree().unwrap_or(0) == 0 {
            Vec::new()
        } else {
            poly_roots(&w)?
        };
        let mut crit = Vec::new();
        for r in roots {
            if self.is_puncture_point(&r.value) {
                continue;
            }
            if r.multiplicity > 1 {
                return Err(CurveError::DegenerateFraming(format!(
                    "critical point {} has multiplicity {}",
                    r.value.render(),
                    r.multiplicity
                )));
            }
            crit.push(r.value);
        }
        if let Some(t) = &self.toric {
            let expected = t.counts.expected_ramification();
            if crit.len() as i64 != expected {
                return Err(CurveError::DegenerateFraming(format!(
                    "framing {} gives {} critical points, expected 2fg - 2 + fn = {}",
                    self.framing,
                    crit.len(),
                    expected
                )));
            }
        }
        if crit.is_empty() {
            return Err(CurveError::DegenerateFraming("x̂ has no critical points".into()));
        }
        self.critical = crit;
        if self.kind == CurveKind::Toric {
            self.check_global_residues()?;
        }
        Ok(())
    }

    /// Sum of the residues of `dX̂/X̂` over `P¹` vanishes. Evaluated in the
    /// complex numbers so that irrational punctures are allowed in exact mode.
    pub fn check_global_residues(&self) -> Result<(), CurveError> {
        let bits = F::bits(&self.ctx).max(128);
        let p = Prec(bits);
        let xh = self.xhat.map(&p, |c| c.to_complex(bits));
        let lx = xh.log_derivative()?;
        let mut total = C::zero(&p);
        let mut scale = 1.0f64;
        for poly in [xh.num(), xh.den()] {
            if poly.degree().unwrap_or(0) == 0 {
                continue;
            }
            for r in poly_roots(poly)? {
                let res = lx.series_at(&r.value, 1)?.residue()?;
                scale = scale.max(res.norm());
                total += &res;
            }
        }
        // Res_∞ r(z)dz = -[w^1] r(1/w).
        let at_inf = lx.series_at_infinity(2)?.coeff(1)?;
        scale = scale.max(at_inf.norm());
        total -= &at_inf;
        if !total.is_negligible(scale * 1e6) {
            return Err(CurveError::Internal(format!(
                "residues of dX̂/X̂ sum to {}",
                total.render()
            )));
        }
        Ok(())
    }

    /// Local expansions at every critical point, to `order` in `z - a`.
    pub fn ramification(&self, order: i64) -> Result<Vec<RamificationPoint<F>>, CurveError> {
        self.critical
            .par_iter()
            .map(|a| RamificationPoint::expand(self.kind, &self.xhat, &self.y, a, order))
            .collect()
    }

    /// Number of ramification points predicted by the diagram, if any.
    pub fn expected_ramification(&self) -> Option<i64> {
        self.toric.as_ref().map(|t| t.counts.expected_ramification())
    }

    pub fn summary_json(&self) -> Value {
        let mut v = json!({
            "kind": match self.kind { CurveKind::Toric => "toric", CurveKind::Plain => "plain" },
            "X": self.x.to_string(),
            "Y": self.y.to_string(),
            "framing": self.framing,
            "Xhat": self.xhat.to_string(),
            "critical_points": self.critical.iter().map(|a| a.render()).collect::<Vec<_>>(),
        });
        if let Some(t) = &self.toric {
            v["counts"] = serde_json::to_value(t.counts).expect("serializable");
            v["brane_frame"] = t.frame.to_json();
            v["mirror_polynomial"] = t.mirror.to_json();
            v["transposed"] = json!(t.transposed);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Q;
    use crate::toric::validate_diagram;
    use std::collections::BTreeMap;

    fn c3(f: i64) -> Result<SpectralCurve<Q>, CurveError> {
        let d = validate_diagram(&[(0, 0), (1, 0), (0, 1)], &[[(0, 0), (1, 0), (0, 1)]]).unwrap();
        SpectralCurve::from_toric(&d, &BTreeMap::new(), None, None, f, &())
    }

    #[test]
    fn c3_critical_point_matches_hand_solution() {
        for f in 1..=3 {
            let c = c3(f).unwrap();
            assert_eq!(c.critical, vec![Q::new(-1, 1 + f)]);
        }
    }

    #[test]
    fn c3_zero_framing_is_degenerate() {
        assert_eq!(c3(0).unwrap_err().kind(), "DegenerateFraming");
    }

    #[test]
    fn conifold_framing_one_has_two_points() {
        let d = validate_diagram(
            &[(0, 0), (1, 0), (1, 1), (0, 1)],
            &[[(0, 0), (1, 0), (0, 1)], [(1, 0), (1, 1), (0, 1)]],
        )
        .unwrap();
        let p = Prec(256);
        let mut co = BTreeMap::new();
        co.insert((1, 1), C::from_f64(0.1, 0.0, p));
        let c = SpectralCurve::from_toric(&d, &co, None, None, 1, &p).unwrap();
        assert_eq!(c.critical.len(), 2);
        let q = C::from_f64(0.1, 0.0, p);
        for a in &c.critical {
            // q a² + 2a + 1 = 0
            let r = q.clone() * a * a + &(C::from_i64(2, &p) * a) + &C::one(&p);
            assert!(r.norm() < 1e-60);
        }
        let co0 = {
            let mut m = BTreeMap::new();
            m.insert((1, 1), C::from_f64(0.1, 0.0, p));
            m
        };
        let err = SpectralCurve::from_toric(&d, &co0, None, None, 0, &p).unwrap_err();
        assert_eq!(err.kind(), "DegenerateFraming");
    }

    #[test]
    fn airy_plain_curve() {
        let z = RationalFunction::<Q>::z(&());
        let c = SpectralCurve::from_parametrization(CurveKind::Plain, z.mul(&z), z.clone(), 0, &()).unwrap();
        assert_eq!(c.critical, vec![Q::new(0, 1)]);
        let r = c.ramification(12).unwrap();
        assert_eq!(r[0].c2, Q::new(1, 1));
        assert_eq!(r[0].deck.coeff(1).unwrap(), Q::new(-1, 1));
        assert_eq!(r[0].deck.coeff(2).unwrap(), Q::new(0, 1));
    }

    #[test]
    fn c3_local_data_is_consistent() {
        let c = c3(1).unwrap();
        let r = &c.ramification(14).unwrap()[0];
        // X̂ = -z - z² = 1/4 - (z + 1/2)²: x̂ = log(1/4) + log(1 - 4t²).
        assert_eq!(r.c2, Q::new(-4, 1));
        assert_eq!(r.deck.coeff(1).unwrap(), Q::new(-1, 1));
        assert_eq!(r.deck.coeff(2).unwrap(), Q::new(0, 1));
        assert!(r.sqrt_c2.is_none());
        match &r.u {
            LocalConstant::Log(l) => assert_eq!(l.argument, Q::new(1, 4)),
            _ => panic!("toric constant must be a log"),
        }
    }
}
