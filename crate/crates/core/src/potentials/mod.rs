//! Open potentials, A-periods and formal Laplace transforms built on the
//! recursion output.

pub mod annulus;
pub mod disk;
pub mod laplace;
pub mod open;
pub mod period;

pub use annulus::{annulus_potential, AnnulusReport};
pub use disk::{disk_integrand, disk_potential};
pub use laplace::{gaussian_moment, laplace_transform, LaplaceSeries};
pub use open::{open_potential, slot_integrals};
pub use period::{a_period, APeriod};

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{AlgebraError, LaurentSeries, Scalar};
use crate::curve::CurveError;
use crate::recursion::RecursionError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error(transparent)]
    Recursion(#[from] RecursionError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("BranchMismatch: {0}")]
    BranchMismatch(String),
    #[error("DiagonalResidual: {0}")]
    DiagonalResidual(String),
    #[error("NonIsolatedPuncture: {0}")]
    NonIsolatedPuncture(String),
    #[error("OddTruncation: requested power {requested}, local expansion known below {available}")]
    OddTruncation { requested: i64, available: i64 },
    #[error("ConfigError: {0}")]
    Config(String),
}

impl PotentialError {
    pub fn kind(&self) -> &'static str {
        match self {
            PotentialError::Recursion(e) => e.kind(),
            PotentialError::Curve(e) => e.kind(),
            PotentialError::Algebra(e) => e.kind(),
            PotentialError::BranchMismatch(_) => "BranchMismatch",
            PotentialError::DiagonalResidual(_) => "DiagonalResidual",
            PotentialError::NonIsolatedPuncture(_) => "NonIsolatedPuncture",
            PotentialError::OddTruncation { .. } => "OddTruncation",
            PotentialError::Config(_) => "ConfigError",
        }
    }

    pub fn is_config_error(&self) -> bool {
        match self {
            PotentialError::Recursion(e) => e.is_config_error(),
            PotentialError::Curve(e) => e.is_config_error(),
            PotentialError::Algebra(AlgebraError::IrrationalRootsInExactMode) => true,
            PotentialError::Config(_) => true,
            _ => false,
        }
    }
}

/// A truncated power series in `X₁, …, Xₙ`, each exponent at most `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiSeries<F: Scalar> {
    pub nvars: usize,
    pub degree: u32,
    pub terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Scalar> MultiSeries<F> {
    pub fn new(nvars: usize, degree: u32) -> Self {
        MultiSeries {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The univariate series `Σ_{1 ≤ k ≤ degree} s[k] X^k`.
    pub fn from_univariate(s: &LaurentSeries<F>, degree: u32) -> Result<Self, AlgebraError> {
        let mut m = Self::new(1, degree);
        for k in 0..=degree as i64 {
            let c = s.coeff(k)?;
            if !c.is_zero() {
                m.terms.insert(vec![k as u32], c);
            }
        }
        Ok(m)
    }

    pub fn get(&self, e: &[u32]) -> Option<&F> {
        self.terms.get(e)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: &F) {
        if e.iter().any(|&k| k > self.degree) || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => *v += c,
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    /// `self += c · Π_i f_i(X_i)` for univariate coefficient lists `f_i[k]`.
    pub fn add_tensor(&mut self, c: &F, factors: &[&[F]]) {
        fn rec<F: Scalar>(
            out: &mut MultiSeries<F>,
            factors: &[&[F]],
            i: usize,
            exps: &mut Vec<u32>,
            acc: &F,
        ) {
            if i == factors.len() {
                out.add_term(exps.clone(), acc);
                return;
            }
            for (k, f) in factors[i].iter().enumerate() {
                if f.is_zero() || k as u32 > out.degree {
                    continue;
                }
                exps.push(k as u32);
                let next = acc.clone() * f;
                rec(out, factors, i + 1, exps, &next);
                exps.pop();
            }
        }
        rec(self, factors, 0, &mut Vec::with_capacity(factors.len()), c);
    }

    /// Series with variables reordered: slot `i` of the result is slot `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::new(self.nvars, self.degree);
        for (e, c) in &self.terms {
            let ne: Vec<u32> = perm.iter().map(|&p| e[p]).collect();
            out.terms.insert(ne, c.clone());
        }
        out
    }

    /// Largest coefficient difference.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| match (self.terms.get(k), other.terms.get(k)) {
                (Some(a), Some(b)) => (a.clone() - b).norm(),
                (Some(a), None) | (None, Some(a)) => a.norm(),
                (None, None) => 0.0,
            })
            .fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn constant_term(&self) -> Option<&F> {
        self.terms.get(&vec![0; self.nvars])
    }

    /// Drop coefficients below `tol` (numeric noise) and exact zeros.
    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, c| !c.is_zero() && c.norm() > tol);
    }

    pub fn monomial_name(e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| if k == 1 { format!("X{}", i + 1) } else { format!("X{}^{}", i + 1, k) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (e, c) in &self.terms {
            m.insert(Self::monomial_name(e), Value::String(c.render()));
        }
        Value::Object(m)
    }
}

/// `F_{g,n}` split into components `(ℓ₁, …, ℓₙ)`, one per choice of brane
/// branch in each slot. Component `ℓ` is the coefficient of `ψ_{ℓ₁} ⊗ ⋯ ⊗ ψ_{ℓₙ}`,
/// where `ψ_ℓ = (1/m) Σ_k e^{2πikℓ/m} 1'_{k/m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenPotential<F: Scalar> {
    pub g: u32,
    pub n: u32,
    pub degree: u32,
    pub components: BTreeMap<Vec<usize>, MultiSeries<F>>,
}

impl<F: Scalar> OpenPotential<F> {
    pub const BASIS: &'static str = "psi_ell";

    /// One JSON object per component.
    pub fn to_json(&self, mode: &str, precision: Option<u32>) -> Value {
        let comps: Vec<Value> = self
            .components
            .iter()
            .map(|(l, s)| {
                let mut v = json!({
                    "g": self.g,
                    "n": self.n,
                    "component": l,
                    "series": s.to_json(),
                    "mode": mode,
                });
                if let Some(p) = precision {
                    v["precision"] = Value::String(p.to_string());
                }
                v
            })
            .collect();
        json!({
            "g": self.g,
            "n": self.n,
            "degree": self.degree,
            "basis": Self::BASIS,
            "components": comps,
        })
    }

    /// Largest deviation between component `ℓ` and the slot-permuted component.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n as usize;
        let mut worst: f64 = 0.0;
        for perm in crate::recursion::omega::distinct_permutations(&(0..n).collect::<Vec<_>>()) {
            for (l, s) in &self.components {
                let pl: Vec<usize> = perm.iter().map(|&p| l[p]).collect();
                if let Some(other) = self.components.get(&pl) {
                    worst = worst.max(s.permuted(&perm).max_deviation(other));
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Q;

    #[test]
    fn monomials_render() {
        assert_eq!(MultiSeries::<Q>::monomial_name(&[2, 0, 1]), "X1^2*X3");
        assert_eq!(MultiSeries::<Q>::monomial_name(&[0, 0]), "1");
    }

    #[test]
    fn tensor_and_permute() {
        let mut m = MultiSeries::<Q>::new(2, 3);
        let a = [Q::new(0, 1), Q::new(1, 1), Q::new(2, 1)];
        let b = [Q::new(0, 1), Q::new(0, 1), Q::new(3, 1)];
        m.add_tensor(&Q::new(1, 1), &[&a, &b]);
        assert_eq!(m.get(&[2, 2]), Some(&Q::new(6, 1)));
        let p = m.permuted(&[1, 0]);
        assert_eq!(p.get(&[2, 1]), Some(&Q::new(3, 1)));
    }
}
