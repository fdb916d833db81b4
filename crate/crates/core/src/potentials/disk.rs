use std::collections::BTreeMap;

use crate::algebra::{LaurentSeries, Scalar};
use crate::curve::punctures::local_series;
use crate::curve::SpectralCurve;

use super::{MultiSeries, OpenPotential, PotentialError};

/// `log Y(ρ_ℓ(w)) - log Y(p̄_ℓ)` for every brane branch `ℓ`, known to `w^degree`.
///
/// Both logarithms are taken on the branch of `p̄_ℓ`, so the constant terms
/// cancel identically and the series starts at `w¹`.
pub fn disk_integrand<F: Scalar>(
    curve: &SpectralCurve<F>,
    degree: u32,
) -> Result<Vec<LaurentSeries<F>>, PotentialError> {
    let order = degree as i64 + 1;
    let branes = curve.brane_punctures(order + 1)?;
    let mut out = Vec::with_capacity(branes.len());
    for p in &branes {
        let ys = local_series(&curve.y, &p.location, order + 1)?;
        let (y0, log) = ys.compose(&p.rho)?.log()?;
        let scale = y0.norm().max(1.0);
        if !(y0.clone() - &p.log_y.argument).is_negligible(scale) {
            return Err(PotentialError::BranchMismatch(format!(
                "Y at branch {} is {}, puncture records {}",
                p.branch_index,
                y0.render(),
                p.log_y.argument.render()
            )));
        }
        out.push(log.truncate(order));
    }
    Ok(out)
}

/// `F_{0,1}(X) = Σ_ℓ ∫₀^X (log Y(ρ_ℓ(X')) - log Y(p̄_ℓ)) dX'/X' ψ_ℓ`.
pub fn disk_potential<F: Scalar>(
    curve: &SpectralCurve<F>,
    degree: u32,
) -> Result<OpenPotential<F>, PotentialError> {
    let integrands = disk_integrand(curve, degree)?;
    let mut components = BTreeMap::new();
    for (l, s) in integrands.iter().enumerate() {
        // ∫ w^k dw/w = w^k / k
        let prim = s.shift(-1).integrate()?;
        let mut m = MultiSeries::from_univariate(&prim, degree)?;
        if !F::EXACT {
            m.prune(0.0);
        }
        components.insert(vec![l], m);
    }
    Ok(OpenPotential {
        g: 0,
        n: 1,
        degree,
        components,
    })
}
