//! Closed free energies `F_g = 1/(2g-2) Σ_α Res ω_{g,1} Φ̃` for `g >= 2`.

use crate::algebra::Scalar;

use super::{max_pole_order, OmegaTable, RecursionError};

/// Per-point contributions `Res_{t→0} ω_{g,1}(t) Φ̃(t)`, with `dΦ̃ = Φ`.
///
/// `Φ̃` is integrated term by term from the local expansion of `y dx̂`; the
/// constant `y(a)` piece only adds `y(a)(x̂ - u)`, whose residue against any
/// even-principal form is zero and is checked instead of added.
pub fn free_energy_terms<F: Scalar>(t: &mut OmegaTable<F>, g: u32) -> Result<Vec<F>, RecursionError> {
    if g < 2 {
        return Err(RecursionError::GenusTooLow(g));
    }
    let form = t.omega(g, 1)?.clone();
    let bases = t.bases_for(g, 1, form.order)?;
    let jmax = max_pole_order(g, 1);
    let ctx = t.ctx().clone();
    let mut out = Vec::with_capacity(bases.len());
    for (alpha, b) in bases.iter().enumerate() {
        let rp = &b.rp;
        let phi = rp.y.mul(&rp.dxhat()).integrate()?;
        let mut acc = F::zero(&ctx);
        let mut check = F::zero(&ctx);
        for j in (2..=jmax).step_by(2) {
            let Some(c) = form.get(&[(alpha, j as u32)]) else {
                continue;
            };
            for k in 2..=j {
                let a = b.a_coeff(j, k);
                if a.is_zero() {
                    continue;
                }
                let ca = c.clone() * &a;
                acc.add_mul(&ca, &phi.coeff(k as i64 - 1)?);
                check.add_mul(&ca, &rp.xhat.coeff(k as i64 - 1)?);
            }
        }
        let scale = acc.norm().max(1.0);
        let bad = if F::EXACT { !check.is_zero() } else { check.norm() > t.config.check_tolerance * scale };
        if bad {
            return Err(RecursionError::Invariant(format!(
                "Res ω_{{{g},1}} (x̂ - u) = {} at point {alpha}",
                check.render()
            )));
        }
        out.push(acc);
    }
    Ok(out)
}

pub fn free_energy<F: Scalar>(t: &mut OmegaTable<F>, g: u32) -> Result<F, RecursionError> {
    let terms = free_energy_terms(t, g)?;
    let ctx = t.ctx().clone();
    let mut s = F::zero(&ctx);
    for v in &terms {
        s += v;
    }
    let inv = F::from_i64(2 * g as i64 - 2, &ctx).recip().expect("g >= 2");
    Ok(s * &inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{RationalFunction, Q};
    use crate::curve::{CurveKind, SpectralCurve};
    use crate::recursion::RecursionConfig;
    use crate::toric::validate_diagram;

    fn c3(f: i64) -> OmegaTable<Q> {
        let d = validate_diagram(&[(0, 0), (1, 0), (0, 1)], &[[(0, 0), (1, 0), (0, 1)]]).unwrap();
        let c = SpectralCurve::from_toric(&d, &Default::default(), None, None, f, &()).unwrap();
        OmegaTable::new(c, RecursionConfig::default())
    }

    #[test]
    fn genus_guard() {
        let mut t = c3(1);
        assert_eq!(free_energy(&mut t, 1).unwrap_err().kind(), "GenusTooLow");
    }

    #[test]
    fn airy_free_energy_vanishes() {
        let z = RationalFunction::<Q>::z(&());
        let c = SpectralCurve::from_parametrization(CurveKind::Plain, z.mul(&z), z.clone(), 0, &()).unwrap();
        let mut t = OmegaTable::new(c, RecursionConfig::default());
        assert_eq!(free_energy(&mut t, 2).unwrap(), Q::new(0, 1));
    }

    #[test]
    fn c3_framing_independent() {
        let f1 = free_energy(&mut c3(1), 2).unwrap();
        let f2 = free_energy(&mut c3(2), 2).unwrap();
        assert_eq!(f1, Q::new(-1, 5760));
        assert_eq!(f1, f2);
        let g1 = free_energy(&mut c3(1), 3).unwrap();
        let g2 = free_energy(&mut c3(2), 3).unwrap();
        assert_eq!(g1, Q::new(-1, 1451520));
        assert_eq!(g1, g2);
    }
}
