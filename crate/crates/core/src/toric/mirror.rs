use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::algebra::expr::parse_scalar;
use crate::algebra::Scalar;

use super::{cross, Point, ToricDiagram, ToricError};

/// `H(X, Y) = sum a_(m,n) X^m Y^n` over `P ∩ Z^2`, gauge-fixed so the three
/// vertices of one triangle carry coefficient 1.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorPolynomial<F: Scalar> {
    pub terms: BTreeMap<Point, F>,
    pub gauge: [Point; 3],
}

impl<F: Scalar> MirrorPolynomial<F> {
    /// Number of coefficients left free by the gauge (equals `p + s`).
    pub fn free_parameters(&self) -> usize {
        self.terms.len() - 3
    }

    /// `H(X, Y)`; `None` if a negative power hits a zero argument.
    pub fn eval(&self, x: &F, y: &F) -> Option<F> {
        let ctx = x.ctx();
        let mut acc = F::zero(&ctx);
        for (&(m, n), c) in &self.terms {
            acc += &(c.clone() * &x.pow_i64(m)? * &y.pow_i64(n)?);
        }
        Some(acc)
    }

    /// Range of exponents of `Y` (resp. `X` when `in_x`).
    pub fn degree_range(&self, in_x: bool) -> (i64, i64) {
        let e = |p: &Point| if in_x { p.0 } else { p.1 };
        let lo = self.terms.keys().map(e).min().unwrap_or(0);
        let hi = self.terms.keys().map(e).max().unwrap_or(0);
        (lo, hi)
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (&(m, n), c) in &self.terms {
            let mono = match (m, n) {
                (0, 0) => String::new(),
                _ => {
                    let mut s = String::new();
                    if m != 0 {
                        s += if m == 1 { "X".to_string() } else { format!("X^{m}") }.as_str();
                    }
                    if n != 0 {
                        s += if n == 1 { "Y".to_string() } else { format!("Y^{n}") }.as_str();
                    }
                    s
                }
            };
            let coef = if c.is_one() && !mono.is_empty() {
                String::new()
            } else if mono.is_empty() {
                c.render()
            } else {
                format!("({})*", c.render())
            };
            parts.push(format!("{coef}{mono}"));
        }
        parts.join(" + ")
    }

    pub fn to_json(&self) -> Value {
        let terms: serde_json::Map<String, Value> = self
            .terms
            .iter()
            .map(|(&(m, n), c)| (format!("{m},{n}"), Value::String(c.render())))
            .collect();
        json!({
            "terms": terms,
            "gauge": self.gauge.iter().map(|p| json!([p.0, p.1])).collect::<Vec<_>>(),
            "free_parameters": self.free_parameters(),
            "expression": self.render(),
        })
    }
}

/// Evaluate coefficient texts (numbers or parameter names) in the ring.
pub fn resolve_coefficients<F: Scalar>(
    d: &ToricDiagram,
    texts: &BTreeMap<Point, String>,
    params: &BTreeMap<String, F>,
    ctx: &F::Ctx,
) -> Result<BTreeMap<Point, F>, ToricError> {
    let mut out = BTreeMap::new();
    for (&p, t) in texts {
        if !d.contains(p) {
            return Err(ToricError::BadCoefficient(format!(
                "coefficient given at {p:?}, outside the polytope"
            )));
        }
        let v = parse_scalar(t, params, ctx)
            .map_err(|e| ToricError::BadCoefficient(format!("coefficient at {p:?}: {e}")))?;
        out.insert(p, v);
    }
    Ok(out)
}

pub fn mirror_polynomial<F: Scalar>(
    d: &ToricDiagram,
    coeffs: &BTreeMap<Point, F>,
    gauge: Option<usize>,
    ctx: &F::Ctx,
) -> Result<MirrorPolynomial<F>, ToricError> {
    let gi = gauge.unwrap_or_else(|| d.default_gauge());
    let g = *d.triangles.get(gi).ok_or(ToricError::BadGauge(gi))?;
    debug_assert!(cross(g[0], g[1], g[2]) != 0);
    let mut terms = BTreeMap::new();
    for p in d.lattice_points() {
        if g.contains(&p) {
            if let Some(c) = coeffs.get(&p) {
                if !c.is_one() {
                    return Err(ToricError::GaugeConflict(p));
                }
            }
            terms.insert(p, F::one(ctx));
            continue;
        }
        let c = coeffs.get(&p).ok_or(ToricError::MissingCoefficient(p))?;
        if c.is_zero() {
            return Err(ToricError::ZeroCoefficient(p));
        }
        terms.insert(p, c.clone());
    }
    let mut gs = g;
    gs.sort();
    Ok(MirrorPolynomial { terms, gauge: gs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Q;
    use crate::toric::validate_diagram;

    #[test]
    fn c3_is_forced() {
        let d = validate_diagram(&[(0, 0), (1, 0), (0, 1)], &[[(0, 0), (1, 0), (0, 1)]]).unwrap();
        let h = mirror_polynomial::<Q>(&d, &BTreeMap::new(), None, &()).unwrap();
        assert_eq!(h.render(), "1 + Y + X");
        assert_eq!(h.free_parameters(), 0);
    }

    #[test]
    fn conifold_needs_q() {
        let d = validate_diagram(
            &[(0, 0), (1, 0), (1, 1), (0, 1)],
            &[[(0, 0), (1, 0), (0, 1)], [(1, 0), (1, 1), (0, 1)]],
        )
        .unwrap();
        assert_eq!(
            mirror_polynomial::<Q>(&d, &BTreeMap::new(), None, &()),
            Err(ToricError::MissingCoefficient((1, 1)))
        );
        let mut c = BTreeMap::new();
        c.insert((1, 1), Q::new(1, 5));
        let h = mirror_polynomial(&d, &c, None, &()).unwrap();
        assert_eq!(h.free_parameters(), 1);
        assert_eq!(h.eval(&Q::new(1, 1), &Q::new(1, 1)).unwrap(), Q::new(16, 5));
        c.insert((1, 1), Q::new(0, 1));
        assert_eq!(
            mirror_polynomial(&d, &c, None, &()),
            Err(ToricError::ZeroCoefficient((1, 1)))
        );
    }
}
