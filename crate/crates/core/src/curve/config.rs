use std::collections::BTreeMap;

use serde_json::Value;

use crate::algebra::expr::{parse_rational_function, parse_scalar};
use crate::algebra::{Scalar, DEFAULT_PRECISION};
use crate::toric::{mirror::resolve_coefficients, DiagramInput, Point};

use super::{CurveError, CurveKind, SpectralCurve};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Numeric,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self, CurveError> {
        match s {
            "exact" => Ok(Mode::Exact),
            "numeric" => Ok(Mode::Numeric),
            other => Err(CurveError::Config(format!("mode must be \"exact\" or \"numeric\", got \"{other}\""))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveSource {
    Toric {
        diagram: DiagramInput,
        gauge: Option<usize>,
        brane_edge: Option<[Point; 2]>,
    },
    Parametrized {
        kind: CurveKind,
        x: String,
        y: String,
    },
}

/// A curve configuration file, before it is bound to a coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveConfig {
    pub name: Option<String>,
    pub source: CurveSource,
    pub framing: i64,
    pub mode: Option<Mode>,
    pub precision: Option<u32>,
    /// Parameter name to value text.
    pub parameters: BTreeMap<String, String>,
}

fn text(v: &Value, what: &str) -> Result<String, CurveError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(CurveError::Config(format!("{what} must be a string or number, got {other}"))),
    }
}

fn point(v: &Value) -> Result<Point, CurveError> {
    let a = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| CurveError::Config(format!("expected [x, y], got {v}")))?;
    match (a[0].as_i64(), a[1].as_i64()) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(CurveError::Config(format!("expected integer coordinates, got {v}"))),
    }
}

impl CurveConfig {
    pub fn from_json(v: &Value) -> Result<Self, CurveError> {
        let obj = v
            .as_object()
            .ok_or_else(|| CurveError::Config("configuration must be a JSON object".into()))?;
        let framing = match obj.get("framing") {
            None => 0,
            Some(f) => f
                .as_i64()
                .ok_or_else(|| CurveError::Config(format!("framing must be an integer, got {f}")))?,
        };
        let mode = obj
            .get("mode")
            .map(|m| {
                m.as_str()
                    .ok_or_else(|| CurveError::Config("mode must be a string".into()))
                    .and_then(Mode::parse)
            })
            .transpose()?;
        let precision = obj
            .get("precision")
            .map(|p| {
                p.as_u64()
                    .filter(|&b| b <= u32::MAX as u64)
                    .map(|b| b as u32)
                    .ok_or_else(|| CurveError::Config(format!("precision must be a positive integer, got {p}")))
            })
            .transpose()?;
        let mut parameters = BTreeMap::new();
        if let Some(p) = obj.get("parameters") {
            let p = p
                .as_object()
                .ok_or_else(|| CurveError::Config("parameters must be an object".into()))?;
            for (k, v) in p {
                parameters.insert(k.clone(), text(v, &format!("parameter {k}"))?);
            }
        }
        let name = obj.get("name").and_then(Value::as_str).map(str::to_string);
        let source = match (obj.get("diagram"), obj.get("parametrization")) {
            (Some(d), None) => {
                let diagram = DiagramInput::from_json(d)?;
                let gauge = obj
                    .get("gauge")
                    .map(|g| {
                        g.as_u64()
                            .map(|g| g as usize)
                            .ok_or_else(|| CurveError::Config(format!("gauge must be a triangle index, got {g}")))
                    })
                    .transpose()?;
                let brane_edge = obj
                    .get("brane_edge")
                    .map(|e| {
                        let a = e
                            .as_array()
                            .filter(|a| a.len() == 2)
                            .ok_or_else(|| CurveError::NoBrane(format!("brane_edge must be [[x1,y1],[x2,y2]], got {e}")))?;
                        Ok::<_, CurveError>([point(&a[0])?, point(&a[1])?])
                    })
                    .transpose()?;
                CurveSource::Toric {
                    diagram,
                    gauge,
                    brane_edge,
                }
            }
            (None, Some(p)) => {
                let p = p
                    .as_object()
                    .ok_or_else(|| CurveError::Config("parametrization must be an object".into()))?;
                let (kind, x, y) = match (p.get("X"), p.get("Y"), p.get("x"), p.get("y")) {
                    (Some(x), Some(y), None, None) => (CurveKind::Toric, x, y),
                    (None, None, Some(x), Some(y)) => (CurveKind::Plain, x, y),
                    _ => {
                        return Err(CurveError::Config(
                            "parametrization needs {\"X\",\"Y\"} (toric) or {\"x\",\"y\"} (plain)".into(),
                        ))
                    }
                };
                CurveSource::Parametrized {
                    kind,
                    x: text(x, "X")?,
                    y: text(y, "Y")?,
                }
            }
            (Some(_), Some(_)) => {
                return Err(CurveError::Config("give either \"diagram\" or \"parametrization\", not both".into()))
            }
            (None, None) => {
                return Err(CurveError::Config("configuration needs \"diagram\" or \"parametrization\"".into()))
            }
        };
        Ok(CurveConfig {
            name,
            source,
            framing,
            mode,
            precision,
            parameters,
        })
    }

    pub fn from_str(s: &str) -> Result<Self, CurveError> {
        let v: Value = serde_json::from_str(s).map_err(|e| CurveError::Config(format!("invalid JSON: {e}")))?;
        Self::from_json(&v)
    }

    pub fn mode_or_default(&self) -> Mode {
        self.mode.unwrap_or(Mode::Exact)
    }

    pub fn precision_or_default(&self) -> u32 {
        self.precision.unwrap_or(DEFAULT_PRECISION)
    }

    pub fn resolve_parameters<F: Scalar>(&self, ctx: &F::Ctx) -> Result<BTreeMap<String, F>, CurveError> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.parameters {
            let val = parse_scalar(v, &BTreeMap::new(), ctx)
                .map_err(|e| CurveError::Config(format!("parameter {k}: {e}")))?;
            out.insert(k.clone(), val);
        }
        Ok(out)
    }

    pub fn build<F: Scalar>(&self, ctx: &F::Ctx) -> Result<SpectralCurve<F>, CurveError> {
        let params = self.resolve_parameters::<F>(ctx)?;
        match &self.source {
            CurveSource::Toric {
                diagram,
                gauge,
                brane_edge,
            } => {
                let d = diagram.validate()?;
                let coeffs = resolve_coefficients(&d, &diagram.coefficients, &params, ctx)?;
                SpectralCurve::from_toric(&d, &coeffs, *gauge, *brane_edge, self.framing, ctx)
            }
            CurveSource::Parametrized { kind, x, y } => {
                let xr = parse_rational_function(x, &params, ctx)
                    .map_err(|e| CurveError::ParametrizationInvalid(format!("X: {e}")))?;
                let yr = parse_rational_function(y, &params, ctx)
                    .map_err(|e| CurveError::ParametrizationInvalid(format!("Y: {e}")))?;
                SpectralCurve::from_parametrization(*kind, xr, yr, self.framing, ctx)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Q;

    #[test]
    fn airy_config() {
        let c = CurveConfig::from_str(r#"{"parametrization": {"x": "z^2", "y": "z"}}"#).unwrap();
        let curve = c.build::<Q>(&()).unwrap();
        assert_eq!(curve.kind, CurveKind::Plain);
        assert_eq!(curve.critical, vec![Q::new(0, 1)]);
    }

    #[test]
    fn conifold_config_with_parameter() {
        let c = CurveConfig::from_str(
            r#"{"diagram": {"vertices": [[0,0],[1,0],[1,1],[0,1]],
                "triangles": [[[0,0],[1,0],[0,1]], [[1,0],[1,1],[0,1]]],
                "coefficients": {"1,1": "q"}},
                "parameters": {"q": "3/4"}, "framing": 1}"#,
        )
        .unwrap();
        // q z² + 2 z + 1 with q = 3/4 has roots -2 and -2/3.
        let curve = c.build::<Q>(&()).unwrap();
        assert_eq!(curve.critical, vec![Q::new(-2, 1), Q::new(-2, 3)]);
    }

    #[test]
    fn rejects_both_sources() {
        let e = CurveConfig::from_str(r#"{"diagram": {}, "parametrization": {}}"#).unwrap_err();
        assert!(e.is_config_error());
    }
}
