use serde_json::{json, Value};

use crate::algebra::{LogValue, Scalar};
use crate::curve::punctures::local_series;
use crate::curve::{Location, SpectralCurve};

use super::PotentialError;

/// `τ = (1/2πi) ∮ Φ` around one puncture, with `Φ = log Y dX̂/X̂`.
///
/// Near the puncture `Y = Y₀ s^b (1 + O(s))` and `dX̂/X̂ = (c/s + O(1)) ds`.
/// The loop integral splits into `c log Y₀`, the residue of the single-valued
/// remainder, and `b c · (1/2πi) ∮ log s ds/s`, which depends on where the
/// loop starts and is reported by its integer coefficient only.
#[derive(Clone, Debug, PartialEq)]
pub struct APeriod<F: Scalar> {
    pub puncture: usize,
    pub location: Location<F>,
    /// `c = ord X̂`.
    pub log_coefficient: i64,
    /// `Y₀`, with `log Y₀` on the principal branch.
    pub log_argument: LogValue<F>,
    /// `Res_s log(Y / (Y₀ s^b)) dX̂/X̂`.
    pub single_valued: F,
    /// `b c`.
    pub monodromy: i64,
}

impl<F: Scalar> APeriod<F> {
    /// `c log Y₀ + single_valued`, when logarithms are representable.
    pub fn value(&self) -> Option<F> {
        let ctx = self.single_valued.ctx();
        if self.log_coefficient == 0 {
            return Some(self.single_valued.clone());
        }
        let l = self.log_argument.value()?;
        Some(l * F::from_i64(self.log_coefficient, &ctx) + &self.single_valued)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "puncture": self.puncture,
            "z": self.location.render(),
            "log_coefficient": self.log_coefficient.to_string(),
            "log_argument": self.log_argument.to_json(),
            "single_valued": self.single_valued.render(),
            "monodromy": self.monodromy.to_string(),
        });
        if let Some(x) = self.value() {
            v["value"] = Value::String(x.render());
        }
        v
    }
}

/// The A-period at puncture `index` of `curve.punctures()`.
pub fn a_period<F: Scalar>(curve: &SpectralCurve<F>, index: usize) -> Result<APeriod<F>, PotentialError> {
    let all = curve.punctures()?;
    let p = all.get(index).ok_or_else(|| {
        PotentialError::Config(format!("puncture index {index} out of range (curve has {})", all.len()))
    })?;
    if let Location::Finite(z0) = &p.location {
        for a in &curve.critical {
            let scale = a.norm().max(z0.norm()).max(1.0);
            if (a.clone() - z0).is_negligible(scale) {
                return Err(PotentialError::NonIsolatedPuncture(format!(
                    "puncture {} is a ramification point",
                    z0.render()
                )));
            }
        }
    }
    let order = 6;
    let xs = local_series(&curve.xhat, &p.location, order)?;
    let ys = local_series(&curve.y, &p.location, order)?;
    let dlog = xs.derivative().div(&xs)?;
    let c = xs.val();
    let b = ys.val();
    let y0 = ys.leading().cloned().ok_or_else(|| PotentialError::Config("Y vanishes identically".into()))?;
    let (_, rest) = ys.shift(-b).log()?;
    let single_valued = rest.mul(&dlog).residue()?;
    Ok(APeriod {
        puncture: index,
        location: p.location.clone(),
        log_coefficient: c,
        log_argument: LogValue::principal(y0),
        single_valued,
        monodromy: b * c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Q;
    use crate::toric::validate_diagram;
    use std::collections::BTreeMap;

    #[test]
    fn c3_periods_are_constant() {
        let d = validate_diagram(&[(0, 0), (1, 0), (0, 1)], &[[(0, 0), (1, 0), (0, 1)]]).unwrap();
        let c = SpectralCurve::<Q>::from_toric(&d, &BTreeMap::new(), None, None, 1, &()).unwrap();
        let n = c.punctures().unwrap().len();
        for i in 0..n {
            let p = a_period(&c, i).unwrap();
            assert_eq!(p.single_valued, Q::new(0, 1));
        }
        assert_eq!(a_period(&c, n).unwrap_err().kind(), "ConfigError");
    }
}
