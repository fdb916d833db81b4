use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::algebra::{LaurentSeries, Scalar};
use crate::curve::LocalConstant;
use crate::recursion::omega::distinct_permutations;
use crate::recursion::{OmegaTable, RecursionError};

use super::PotentialError;

/// `Γ((m+1)/2)/√π`, the Gaussian moment `∫ e^{η²/z} η^m dη / (√π (-z)^{(m+1)/2})`
/// for even `m`; zero for odd `m`.
pub fn gaussian_moment<F: Scalar>(m: i64, ctx: &F::Ctx) -> F {
    if m.rem_euclid(2) == 1 {
        return F::zero(ctx);
    }
    let k = m / 2;
    let mut v = F::one(ctx);
    if k >= 0 {
        // Γ(k + 1/2) = (k - 1/2) Γ(k - 1/2)
        for i in 0..k {
            v *= &F::from_ratio(2 * i + 1, 2, ctx);
        }
    } else {
        // Γ(x) = Γ(x + 1)/x
        for i in (k..0).rev() {
            v *= &F::from_ratio(2, 2 * i + 1, ctx);
        }
    }
    v
}

/// The formal Laplace transform of `ω_{g,n}` with every variable localized
/// at one ramification point.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacePoint<F: Scalar> {
    pub alpha: usize,
    /// `u_α`: the result reads `e^{u_α Σ 1/zᵢ}` times the series.
    pub u: LocalConstant<F>,
    /// `x̂ = u + c₂η²`.
    pub c2: F,
    /// Key: `(2p₁, …, 2pₙ)`, odd integers; value `κ` in
    /// `κ π^{n/2} Π (-zᵢ/c₂)^{pᵢ}`.
    pub terms: BTreeMap<Vec<i64>, F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaplaceSeries<F: Scalar> {
    pub g: u32,
    pub n: u32,
    /// Largest power of `η` kept per variable before transforming.
    pub order: i64,
    pub points: Vec<LaplacePoint<F>>,
}

fn half_power(two_p: i64) -> String {
    if two_p % 2 == 0 {
        (two_p / 2).to_string()
    } else {
        format!("{}/2", two_p)
    }
}

impl<F: Scalar> LaplaceSeries<F> {
    pub fn monomial_name(key: &[i64]) -> String {
        key.iter()
            .enumerate()
            .map(|(i, &p)| format!("(-z{}/c2)^({})", i + 1, half_power(p)))
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn to_json(&self) -> Value {
        let pts: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                let mut m = Map::new();
                for (k, v) in &p.terms {
                    m.insert(Self::monomial_name(k), Value::String(v.render()));
                }
                json!({
                    "alpha": p.alpha,
                    "u": p.u.to_json(),
                    "c2": p.c2.render(),
                    "prefactor": format!("pi^({})", half_power(self.n as i64)),
                    "series": Value::Object(m),
                })
            })
            .collect();
        json!({"g": self.g, "n": self.n, "order": self.order.to_string(), "points": pts})
    }
}

/// Local expansion in `η` at `alpha` of every `η`-basis form `ξ_{(β, j)}`,
/// per `dη`.
fn label_series<F: Scalar>(
    t: &OmegaTable<F>,
    bases: &[crate::recursion::LocalBasis<F>],
    alpha: usize,
    label: (usize, u32),
) -> Result<LaurentSeries<F>, PotentialError> {
    let b = &bases[alpha];
    let ctx = t.ctx().clone();
    let tau = &b.rp.eta_inv;
    let dtau = tau.derivative();
    let (beta, j) = label;
    let delta = b.rp.a.clone() - &bases[beta].rp.a;
    let base = tau.add(&LaurentSeries::monomial(delta, 0, tau.order()));
    let mut s = LaurentSeries::zero(&ctx, tau.order());
    let mut first = true;
    for k in 2..=j as usize {
        let a = bases[beta].a_coeff(j as usize, k);
        if a.is_zero() {
            continue;
        }
        let term = base.pow(-(k as i64))?.scale(&a);
        s = if first { term } else { s.add(&term) };
        first = false;
    }
    Ok(s.mul(&dtau))
}

/// `∫ e^{x̂₁/z₁ + ⋯ + x̂ₙ/zₙ} ω_{g,n}` by Gaussian moments of the local
/// `η`-expansion at each ramification point, keeping `η^m` with `m <= order`.
pub fn laplace_transform<F: Scalar>(
    t: &mut OmegaTable<F>,
    g: u32,
    n: u32,
    order: i64,
) -> Result<LaplaceSeries<F>, PotentialError> {
    if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(RecursionError::UnstablePair(g, n).into());
    }
    let form = t.omega(g, n)?.clone();
    let bases = t.bases_for(g, n, form.order)?;
    let ctx = t.ctx().clone();
    let labels: Vec<(usize, u32)> = {
        let mut v: Vec<(usize, u32)> = form.coeffs.keys().flatten().copied().collect();
        v.sort();
        v.dedup();
        v
    };
    let mut points = Vec::with_capacity(bases.len());
    for alpha in 0..bases.len() {
        let mut series = BTreeMap::new();
        for &l in &labels {
            let s = label_series(t, &bases, alpha, l)?;
            if s.order() <= order {
                return Err(PotentialError::OddTruncation {
                    requested: order,
                    available: s.order(),
                });
            }
            let scale = s.norm().max(1.0);
            let r = s.coeff(-1)?;
            if !r.is_negligible(scale) {
                return Err(RecursionError::Invariant(format!(
                    "ξ{:?} has residue {} in η at point {alpha}",
                    l,
                    r.render()
                ))
                .into());
            }
            // (m, Γ((m+1)/2)/√π · coefficient) for even m.
            let moments: Vec<(i64, F)> = s
                .terms()
                .filter(|(m, c)| *m <= order && m.rem_euclid(2) == 0 && !c.is_zero())
                .map(|(m, c)| (m, gaussian_moment::<F>(m, &ctx) * c))
                .collect();
            series.insert(l, moments);
        }
        let mut terms: BTreeMap<Vec<i64>, F> = BTreeMap::new();
        for (key, c) in &form.coeffs {
            for perm in distinct_permutations(key) {
                let mut partial: Vec<(Vec<i64>, F)> = vec![(Vec::new(), c.clone())];
                for l in &perm {
                    let mut next = Vec::new();
                    for (k, v) in &partial {
                        for (m, w) in &series[l] {
                            let mut k2 = k.clone();
                            k2.push(m + 1);
                            next.push((k2, v.clone() * w));
                        }
                    }
                    partial = next;
                }
                for (k, v) in partial {
                    *terms.entry(k).or_insert_with(|| F::zero(&ctx)) += &v;
                }
            }
        }
        if F::EXACT {
            terms.retain(|_, v| !v.is_zero());
        }
        let rp = &bases[alpha].rp;
        points.push(LaplacePoint {
            alpha,
            u: rp.u.clone(),
            c2: rp.c2.clone(),
            terms,
        });
    }
    Ok(LaplaceSeries {
        g,
        n,
        order,
        points,
    })
}
