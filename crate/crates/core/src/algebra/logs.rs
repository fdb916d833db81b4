use serde_json::{json, Value};

use super::scalar::Scalar;

/// `Log(argument) + 2πi·branch`, with `Log` the principal branch.
///
/// In exact mode the logarithm of a rational is not representable, so the
/// value is kept symbolically and only differences of equal arguments on the
/// same branch are ever reduced.
#[derive(Clone, Debug, PartialEq)]
pub struct LogValue<F: Scalar> {
    pub argument: F,
    pub branch: i64,
}

impl<F: Scalar> LogValue<F> {
    pub fn principal(argument: F) -> Self {
        LogValue {
            argument,
            branch: 0,
        }
    }

    /// Numerical value, when the ring can represent it.
    pub fn value(&self) -> Option<F> {
        let ctx = self.argument.ctx();
        let l = self.argument.ln()?;
        if self.branch == 0 {
            return Some(l);
        }
        let tpi = F::two_pi_i(&ctx)?;
        Some(l + tpi * F::from_i64(self.branch, &ctx))
    }

    /// `self - other` when it is decidable: identical argument and branch give
    /// zero in either ring; otherwise the numeric values are subtracted.
    pub fn difference(&self, other: &Self) -> Option<F> {
        let ctx = self.argument.ctx();
        if self.argument == other.argument {
            let db = self.branch - other.branch;
            if db == 0 {
                return Some(F::zero(&ctx));
            }
            return Some(F::two_pi_i(&ctx)? * F::from_i64(db, &ctx));
        }
        Some(self.value()? - other.value()?)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "argument": self.argument.render(),
            "branch": self.branch,
        });
        if let Some(x) = self.value() {
            v["value"] = Value::String(x.render());
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{Prec, C, Q};

    #[test]
    fn log_minus_one_is_i_pi() {
        let p = Prec(128);
        let l = LogValue::principal(C::from_i64(-1, &p)).value().unwrap();
        let (re, im) = l.to_f64_pair();
        assert!(re.abs() < 1e-30);
        assert!((im - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn exact_differences_only_on_matching_arguments() {
        let a = LogValue::principal(Q::new(-1, 1));
        assert_eq!(a.difference(&a), Some(Q::new(0, 1)));
        let b = LogValue::principal(Q::new(2, 1));
        assert_eq!(a.difference(&b), None);
    }
}
