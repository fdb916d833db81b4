//! Polynomial roots: Aberth iteration with Newton polishing in numeric mode,
//! rounding plus exact verification in rational mode.

use rug::{Float, Integer, Rational};

use super::poly::Polynomial;
use super::scalar::{nearest_with_denominator, Scalar, C, Q};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
pub struct Root<F: Scalar> {
    pub value: F,
    pub multiplicity: usize,
}

/// All roots of `p`, with multiplicities summing to `deg p`.
///
/// Roots are sorted by real part, then imaginary part, so the output order is
/// deterministic.
pub fn poly_roots<F: Scalar>(p: &Polynomial<F>) -> Result<Vec<Root<F>>, AlgebraError> {
    let deg = p.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let ctx = p.ctx().clone();
    let mut out = if F::EXACT {
        let q = p.map(&(), |c| Q(c.to_rational().expect("exact ring")));
        exact_roots(&q)?
            .into_iter()
            .map(|r| Root {
                value: F::from_rational(&r.value.0, &ctx),
                multiplicity: r.multiplicity,
            })
            .collect()
    } else {
        let prec = F::bits(&ctx);
        let c = p.map(&crate::algebra::Prec(prec + 64), |x| x.to_complex(prec + 64));
        numeric_roots(&c, prec)?
            .into_iter()
            .map(|r| Root {
                value: F::from_complex(&r.value, &ctx).expect("numeric ring"),
                multiplicity: r.multiplicity,
            })
            .collect::<Vec<_>>()
    };
    out.sort_by(|a, b| {
        let (ar, ai) = a.value.to_f64_pair();
        let (br, bi) = b.value.to_f64_pair();
        ar.total_cmp(&br).then(ai.total_cmp(&bi))
    });
    Ok(out)
}

fn exact_roots(p: &Polynomial<Q>) -> Result<Vec<Root<Q>>, AlgebraError> {
    let deg = p.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    // Square-free part: its roots are simple, so rounding is well conditioned.
    let g = p.gcd(&p.derivative());
    let sf = p.div_rem(&g)?.0;
    // Clear denominators: a rational root n/d in lowest terms of an integer
    // polynomial has d dividing the leading coefficient.
    let mut lcm = Integer::from(1);
    for c in sf.coeffs() {
        lcm.lcm_mut(c.0.denom());
    }
    let lead = Rational::from(&sf.leading().expect("nonzero").0 * &lcm);
    let lead_int = lead.numer().clone().abs();
    let approx = numeric_roots(
        &sf.map(&crate::algebra::Prec(320), |c| c.to_complex(320)),
        256,
    )?;
    let mut remaining = sf.clone();
    let mut found = Vec::new();
    for r in approx {
        let im = r.value.im.to_f64().abs();
        if im > 1e-20 * (1.0 + r.value.norm()) {
            continue;
        }
        let cand = Q(nearest_with_denominator(&r.value.re, &lead_int));
        if remaining.eval(&cand).is_zero() {
            let lin = Polynomial::new(vec![-cand.clone(), Q::new(1, 1)], &());
            remaining = remaining.div_rem(&lin)?.0;
            let m = p.root_multiplicity(&cand);
            found.push(Root {
                value: cand,
                multiplicity: m,
            });
        }
    }
    if remaining.degree() != Some(0) {
        return Err(AlgebraError::IrrationalRootsInExactMode);
    }
    debug_assert_eq!(found.iter().map(|r| r.multiplicity).sum::<usize>(), deg);
    Ok(found)
}

fn horner_with_derivative(p: &[C], z: &C) -> (C, C) {
    let prec = z.prec();
    let mut v = C::zero(&crate::algebra::Prec(prec));
    let mut d = v.clone();
    for c in p.iter().rev() {
        d *= z;
        d += &v;
        v *= z;
        v += c;
    }
    (v, d)
}

/// Numeric roots of a polynomial with complex coefficients. Clusters of
/// numerically coincident roots are merged and reported with multiplicity.
fn numeric_roots(p: &Polynomial<C>, target_bits: u32) -> Result<Vec<Root<C>>, AlgebraError> {
    let deg = p.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    let prec = p.leading().expect("nonzero").prec();
    let ctx = crate::algebra::Prec(prec);
    // Exact zero roots are split off first; they are common (punctures at 0).
    let zeros = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let mut roots: Vec<C> = Vec::new();
    let q = Polynomial::new(p.coeffs()[zeros..].to_vec(), &ctx).monic();
    let n = deg - zeros;
    if n > 0 {
        roots = aberth(&q, prec)?;
    }
    let mut out: Vec<Root<C>> = Vec::new();
    if zeros > 0 {
        out.push(Root {
            value: C::zero(&ctx),
            multiplicity: zeros,
        });
    }
    // Cluster.
    let tol = 2f64.powi(-(target_bits as i32) / 4);
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut cluster = vec![roots[i].clone()];
        for j in i + 1..roots.len() {
            if !used[j] {
                let d = (roots[i].clone() - &roots[j]).norm();
                if d < tol * (1.0 + roots[i].norm()) {
                    used[j] = true;
                    cluster.push(roots[j].clone());
                }
            }
        }
        let m = cluster.len();
        let mut centre = C::zero(&ctx);
        for c in &cluster {
            centre += c;
        }
        centre = centre / C::from_i64(m as i64, &ctx);
        // Polish on the (m-1)-th derivative, where the root is simple.
        let mut dp = q.clone();
        for _ in 1..m {
            dp = dp.derivative();
        }
        let coeffs = dp.coeffs().to_vec();
        for _ in 0..8 {
            let (v, d) = horner_with_derivative(&coeffs, &centre);
            if d.is_zero() {
                break;
            }
            centre -= &(v / d);
        }
        out.push(Root {
            value: centre,
            multiplicity: m,
        });
    }
    // Residual contract |p(r)| < eps * sum |a_i| |r|^i.
    let eps = 2f64.powi(-(target_bits as i32) / 2);
    for r in &out {
        let (v, _) = horner_with_derivative(p.coeffs(), &r.value);
        let rn = r.value.norm();
        let scale: f64 = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm() * rn.powi(i as i32))
            .sum();
        if v.norm() > eps * scale.max(f64::MIN_POSITIVE) && v.norm() > 0.0 {
            return Err(AlgebraError::RootFindingFailed(format!(
                "residual {:e} at root {}",
                v.norm(),
                r.value
            )));
        }
    }
    Ok(out)
}

fn aberth(q: &Polynomial<C>, prec: u32) -> Result<Vec<C>, AlgebraError> {
    let ctx = crate::algebra::Prec(prec);
    let n = q.degree().expect("nonzero");
    let coeffs = q.coeffs().to_vec();
    let deriv = q.derivative();
    // Initial radius from the geometric mean of the root moduli.
    let a0 = coeffs[0].norm();
    let r0 = if a0 > 0.0 { a0.powf(1.0 / n as f64) } else { 1.0 };
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            C::from_f64(r0 * th.cos(), r0 * th.sin(), ctx)
        })
        .collect();
    let stop = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8)).to_f64();
    let max_iter = 200 + 4 * prec as usize;
    let mut converged = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let (pv, _) = horner_with_derivative(&coeffs, &z[k]);
            let dv = deriv.eval(&z[k]);
            if pv.is_zero() {
                converged[k] = true;
                continue;
            }
            if dv.is_zero() {
                z[k] += &C::from_f64(1e-10, 1e-10, ctx);
                all = false;
                continue;
            }
            let w = pv / dv;
            let mut s = C::zero(&ctx);
            for j in 0..n {
                if j != k {
                    let diff = z[k].clone() - &z[j];
                    if let Some(inv) = diff.recip() {
                        s += &inv;
                    }
                }
            }
            let denom = C::one(&ctx) - w.clone() * &s;
            let step = match denom.recip() {
                Some(inv) => w * &inv,
                None => w,
            };
            let sn = step.norm();
            z[k] -= &step;
            if sn <= stop * (1.0 + z[k].norm()) {
                converged[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            return Ok(z);
        }
    }
    // Multiple roots converge only linearly; accept what is there and let the
    // clustering plus residual check decide.
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::Prec;

    fn pq(v: &[i64]) -> Polynomial<Q> {
        Polynomial::new(v.iter().map(|&c| Q::from_i64(c, &())).collect(), &())
    }

    #[test]
    fn exact_symmetric_pair() {
        let r = poly_roots(&pq(&[-1, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].value, Q::new(-1, 1));
        assert_eq!(r[1].value, Q::new(1, 1));
    }

    #[test]
    fn exact_rejects_irrational() {
        assert_eq!(
            poly_roots(&pq(&[1, 0, 1])),
            Err(AlgebraError::IrrationalRootsInExactMode)
        );
        assert_eq!(
            poly_roots(&pq(&[0, -2, 0, 1])),
            Err(AlgebraError::IrrationalRootsInExactMode)
        );
    }

    #[test]
    fn exact_multiplicities_and_fractions() {
        // (2z + 1)^2 (z - 3) z
        let p = pq(&[1, 2]).pow(2).mul(&pq(&[-3, 1])).mul(&pq(&[0, 1]));
        let r = poly_roots(&p).unwrap();
        let got: Vec<(Q, usize)> = r.into_iter().map(|r| (r.value, r.multiplicity)).collect();
        assert_eq!(
            got,
            vec![(Q::new(-1, 2), 2), (Q::new(0, 1), 1), (Q::new(3, 1), 1)]
        );
    }

    #[test]
    fn numeric_cubic_residuals() {
        let ctx = Prec(256);
        let p = pq(&[0, -2, 0, 1]).map(&ctx, |c| C::from_rational(&c.0, &ctx));
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 3);
        let eps = C::tolerance(&ctx);
        for root in &r {
            assert!(p.eval(&root.value).norm() < eps * p.norm());
        }
        let sq = r[2].value.clone() * &r[2].value;
        assert!((sq - C::from_i64(2, &ctx)).norm() < eps);
    }

    #[test]
    fn numeric_double_root_is_clustered() {
        let ctx = Prec(192);
        let p = pq(&[1, 2]).pow(2).mul(&pq(&[5, 0, 1]));
        let pc = p.map(&ctx, |c| C::from_rational(&c.0, &ctx));
        let r = poly_roots(&pc).unwrap();
        assert_eq!(r.iter().map(|x| x.multiplicity).sum::<usize>(), 4);
        let double = r.iter().find(|x| x.multiplicity == 2).unwrap();
        assert!((double.value.clone() + C::from_f64(0.5, 0.0, ctx)).norm() < 1e-40);
    }
}
