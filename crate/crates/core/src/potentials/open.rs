use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::algebra::{LaurentSeries, Scalar};
use crate::curve::{Puncture, SpectralCurve};
use crate::recursion::omega::distinct_permutations;
use crate::recursion::{OmegaTable, RecursionError};

use super::{MultiSeries, OpenPotential, PotentialError};

/// `∫₀^X ρ_ℓ^* dz/(z - a)^k` as coefficients of `X^0..=X^degree`.
pub fn slot_integral<F: Scalar>(
    p: &Puncture<F>,
    a: &F,
    k: u32,
    degree: u32,
) -> Result<Vec<F>, PotentialError> {
    let z = p.z_of_w()?;
    let dz = z.derivative();
    let shifted = z.sub(&LaurentSeries::monomial(a.clone(), 0, z.order()));
    let integrand = shifted.pow(-(k as i64))?.mul(&dz);
    let prim = integrand.integrate()?;
    // Value at X = 0: the constant term of the primitive.
    let mut out = Vec::with_capacity(degree as usize + 1);
    out.push(F::zero(&a.ctx()));
    for d in 1..=degree as i64 {
        out.push(prim.coeff(d)?);
    }
    Ok(out)
}

/// Per-slot integrated pullbacks for every brane branch and every `(α, k)`
/// in `keys`.
pub fn slot_integrals<F: Scalar>(
    curve: &SpectralCurve<F>,
    keys: &BTreeSet<(usize, u32)>,
    degree: u32,
) -> Result<Vec<BTreeMap<(usize, u32), Vec<F>>>, PotentialError> {
    let branes = curve.brane_punctures(degree as i64 + 2)?;
    branes
        .par_iter()
        .map(|p| {
            keys.iter()
                .map(|&(alpha, k)| Ok(((alpha, k), slot_integral(p, &curve.critical[alpha], k, degree)?)))
                .collect()
        })
        .collect()
}

/// `F_{g,n}(X₁, …, Xₙ) = Σ ∫₀^{X₁}⋯∫₀^{Xₙ} (ρ_{ℓ₁} × ⋯ × ρ_{ℓₙ})^* ω_{g,n} ψ_{ℓ₁} ⊗ ⋯ ⊗ ψ_{ℓₙ}`.
pub fn open_potential<F: Scalar>(
    t: &mut OmegaTable<F>,
    g: u32,
    n: u32,
    degree: u32,
) -> Result<OpenPotential<F>, PotentialError> {
    if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(RecursionError::UnstablePair(g, n).into());
    }
    let pp = t.principal_parts(g, n)?;
    let keys: BTreeSet<(usize, u32)> = pp.keys().flatten().copied().collect();
    let slots = slot_integrals(&t.curve, &keys, degree)?;
    let m = slots.len();
    let comps: Vec<Vec<usize>> = (0..m.pow(n))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let l = c % m;
                    c /= m;
                    l
                })
                .collect()
        })
        .collect();
    let perms: Vec<(&F, Vec<Vec<(usize, u32)>>)> =
        pp.iter().map(|(k, v)| (v, distinct_permutations(k))).collect();
    let components: BTreeMap<Vec<usize>, MultiSeries<F>> = comps
        .into_par_iter()
        .map(|ls| {
            let mut s: MultiSeries<F> = MultiSeries::new(n as usize, degree);
            for (c, ps) in &perms {
                for p in ps {
                    let factors: Vec<&[F]> = ls.iter().zip(p).map(|(l, key)| slots[*l][key].as_slice()).collect();
                    s.add_tensor(*c, &factors);
                }
            }
            if !F::EXACT {
                s.prune(0.0);
            }
            (ls, s)
        })
        .collect();
    Ok(OpenPotential {
        g,
        n,
        degree,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Q;
    use crate::recursion::RecursionConfig;
    use crate::toric::validate_diagram;

    #[test]
    fn c3_pants_and_torus() {
        let d = validate_diagram(&[(0, 0), (1, 0), (0, 1)], &[[(0, 0), (1, 0), (0, 1)]]).unwrap();
        let c = SpectralCurve::<Q>::from_toric(&d, &BTreeMap::new(), None, None, 1, &()).unwrap();
        let mut t = OmegaTable::new(c, RecursionConfig::default());
        let f = open_potential(&mut t, 0, 3, 3).unwrap();
        let s = &f.components[&vec![0, 0, 0]];
        assert_eq!(s.constant_term(), None);
        assert_eq!(f.symmetry_defect(), 0.0);
        let f11 = open_potential(&mut t, 1, 1, 4).unwrap();
        assert!(!f11.components[&vec![0]].terms.is_empty());
    }
}
