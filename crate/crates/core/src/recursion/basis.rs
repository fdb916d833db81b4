//! Local bases at a ramification point.
//!
//! With `t = z - a` and `η` the rescaled local coordinate (`x̂ = u + c₂η²`),
//! the basis form `ξ_j` is the principal part in `t` of `η^{-j} dη`:
//!
//! ```text
//! ξ_j = Σ_{k ≤ j} A[j][k] dz/(z - a)^k,    A[j][k] = [t^{-k}] η'(t) η(t)^{-j}
//! dz/(z - a)^k = Σ_{j ≤ k} P[k][j] ξ_j,    P[k][j] = [η^{-j}] τ'(η) τ(η)^{-k}
//! ```
//!
//! where `τ` is the inverse of `η`.

use crate::algebra::{AlgebraError, LaurentSeries, Scalar};
use crate::curve::{CurveError, RamificationPoint};

#[derive(Clone, Debug)]
pub struct LocalBasis<F: Scalar> {
    pub rp: RamificationPoint<F>,
    /// `a[j][k]` for `1 ≤ k ≤ j ≤ jmax`; index 0 unused.
    pub a: Vec<Vec<F>>,
    /// `p[k][j]` for `1 ≤ j ≤ k ≤ kmax`; index 0 unused.
    pub p: Vec<Vec<F>>,
}

impl<F: Scalar> LocalBasis<F> {
    pub fn new(rp: RamificationPoint<F>, jmax: usize, kmax: usize) -> Result<Self, AlgebraError> {
        let ctx = rp.eta.ctx().clone();
        let deta = rp.eta.derivative();
        let einv = rp.eta.recip()?;
        let mut a = vec![Vec::new()];
        let mut pow = LaurentSeries::one(&ctx, rp.eta.order());
        for j in 1..=jmax {
            pow = pow.mul(&einv);
            let f = deta.mul(&pow);
            let mut row = vec![F::zero(&ctx)];
            for k in 1..=j {
                row.push(f.coeff(-(k as i64))?);
            }
            a.push(row);
        }
        let tau = &rp.eta_inv;
        let dtau = tau.derivative();
        let tinv = tau.recip()?;
        let mut p = vec![Vec::new()];
        let mut pow = LaurentSeries::one(&ctx, tau.order());
        for k in 1..=kmax {
            pow = pow.mul(&tinv);
            let f = dtau.mul(&pow);
            let mut row = vec![F::zero(&ctx)];
            for j in 1..=k {
                row.push(f.coeff(-(j as i64))?);
            }
            p.push(row);
        }
        Ok(LocalBasis { rp, a, p })
    }

    pub fn jmax(&self) -> usize {
        self.a.len() - 1
    }

    pub fn kmax(&self) -> usize {
        self.p.len() - 1
    }

    /// `A[j][k]`, zero when `k > j`.
    pub fn a_coeff(&self, j: usize, k: usize) -> F {
        if k > j || j >= self.a.len() {
            F::zero(&self.rp.eta.ctx().clone())
        } else {
            self.a[j][k].clone()
        }
    }

    /// `P[k][j]`, zero when `j > k`.
    pub fn p_coeff(&self, k: usize, j: usize) -> F {
        if j > k || k >= self.p.len() {
            F::zero(&self.rp.eta.ctx().clone())
        } else {
            self.p[k][j].clone()
        }
    }
}

/// Series in `t` at one residue point `α` that the recursion needs.
#[derive(Clone, Debug)]
pub struct ResidueFrame<F: Scalar> {
    pub order: i64,
    /// `t̄ = d(t)`.
    pub deck: LaurentSeries<F>,
    pub ddeck: LaurentSeries<F>,
    /// `K_k(t)` for `k = 0..=kmax` (entries 0 and 1 are zero).
    pub kernel: Vec<LaurentSeries<F>>,
}

impl<F: Scalar> ResidueFrame<F> {
    /// `K_k(t) = (d(t)^{k-1} - t^{k-1}) / (2 (y(t) - y(d(t))) x̂'(t))`, the
    /// coefficient of `dz_n/(z_n - a)^k` in the recursion kernel.
    pub fn new(rp: &RamificationPoint<F>, kmax: usize, flip: bool) -> Result<Self, AlgebraError> {
        let ctx = rp.eta.ctx().clone();
        let order = rp.deck.order();
        let deck = rp.deck.clone();
        let ddeck = deck.derivative();
        let dy = rp.y.sub(&rp.y.compose(&deck)?);
        let scale = dy.norm().max(1.0);
        let dy = dy.drop_below(1, scale)?;
        let two = F::from_i64(if flip { -2 } else { 2 }, &ctx);
        let den = dy.mul(&rp.xhat.derivative()).scale(&two);
        let inv = den.recip()?;
        let t = LaurentSeries::var(&ctx, order);
        let mut kernel = vec![LaurentSeries::zero(&ctx, order), LaurentSeries::zero(&ctx, order)];
        let mut dp = deck.clone();
        let mut tp = t.clone();
        for _k in 2..=kmax {
            let num = dp.sub(&tp);
            kernel.push(num.mul(&inv));
            dp = dp.mul(&deck);
            tp = tp.mul(&t);
        }
        Ok(ResidueFrame {
            order,
            deck,
            ddeck,
            kernel,
        })
    }
}

/// The recursion kernel at one ramification point, as series in `η`.
#[derive(Clone, Debug)]
pub struct RecursionKernel<F: Scalar> {
    /// `2 (y(p) - y(p̄)) (dx̂/dη) / η`: odd, with nonzero `η¹` coefficient.
    pub denominator: LaurentSeries<F>,
    /// `∫_{p̄}^{p} B(z₀, ·) = dz₀ Σ_k b_k(η) / (z₀ - a)^k`, entries `b_k` for
    /// `k = 0..=kmax` (entry 0 is zero).
    pub b_primitive: Vec<LaurentSeries<F>>,
}

pub fn kernel_expansion<F: Scalar>(rp: &RamificationPoint<F>, kmax: usize) -> Result<RecursionKernel<F>, CurveError> {
    let ctx = rp.eta.ctx().clone();
    let y = rp.y_in_eta()?;
    let dy = y.sub(&y.reflect());
    let four_c2 = rp.c2.clone() * &F::from_i64(4, &ctx);
    let denominator = dy.scale(&four_c2);
    let scale = denominator.norm().max(1.0);
    if denominator.is_zero() || denominator.val() > 1 || denominator.coeff(1)?.is_negligible(scale) {
        return Err(CurveError::NonSimpleRamification(rp.a.render()));
    }
    let t = &rp.eta_inv;
    let tb = t.reflect();
    let order = t.order();
    let mut b_primitive = vec![LaurentSeries::zero(&ctx, order)];
    let mut tp = LaurentSeries::one(&ctx, order);
    let mut bp = LaurentSeries::one(&ctx, order);
    for _k in 1..=kmax {
        b_primitive.push(tp.sub(&bp));
        tp = tp.mul(t);
        bp = bp.mul(&tb);
    }
    Ok(RecursionKernel {
        denominator,
        b_primitive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{RationalFunction, Q};
    use crate::curve::CurveKind;

    fn airy(order: i64) -> RamificationPoint<Q> {
        let z = RationalFunction::<Q>::z(&());
        RamificationPoint::expand(CurveKind::Plain, &z.mul(&z), &z, &Q::new(0, 1), order).unwrap()
    }

    #[test]
    fn airy_basis_is_diagonal() {
        let b = LocalBasis::new(airy(16), 8, 8).unwrap();
        for j in 1..=8 {
            for k in 1..=j {
                let want = if j == k { Q::new(1, 1) } else { Q::new(0, 1) };
                assert_eq!(b.a_coeff(j, k), want);
                assert_eq!(b.p_coeff(j, k), want);
            }
        }
    }

    #[test]
    fn airy_kernel_by_hand() {
        // d = -t, y - y(d) = 2t, x̂' = 2t: K_k = ((-t)^{k-1} - t^{k-1}) / (8t²).
        let f = ResidueFrame::new(&airy(16), 6, false).unwrap();
        assert_eq!(f.kernel[2].coeff(-1).unwrap(), Q::new(-1, 4));
        assert_eq!(f.kernel[4].coeff(1).unwrap(), Q::new(-1, 4));
        assert!(f.kernel[3].is_zero());
    }

    #[test]
    fn airy_kernel_expansion() {
        // 2 (z - (-z)) · 2z / z = 8z.
        let k = kernel_expansion(&airy(12), 4).unwrap();
        assert_eq!(k.denominator.val(), 1);
        assert_eq!(k.denominator.coeff(1).unwrap(), Q::new(8, 1));
        assert_eq!(k.denominator.parity_defect(false), 0.0);
        assert!(k.b_primitive[1].is_zero());
        assert_eq!(k.b_primitive[2].coeff(1).unwrap(), Q::new(2, 1));
        // b_k → 0 as η → 0.
        for b in &k.b_primitive {
            assert!(b.is_zero() || b.val() >= 1);
        }
    }

    #[test]
    fn a_and_p_are_inverse() {
        let z = RationalFunction::<Q>::z(&());
        // X̂ = -z - z² at a = -1/2, y = log(-1 - z)
        let xh = z.mul(&z.add(&RationalFunction::constant(Q::new(1, 1)))).neg();
        let y = z.add(&RationalFunction::constant(Q::new(1, 1))).neg();
        let rp = RamificationPoint::expand(CurveKind::Toric, &xh, &y, &Q::new(-1, 2), 18).unwrap();
        let b = LocalBasis::new(rp, 10, 10).unwrap();
        for j in 1..=10 {
            for j2 in 1..=10 {
                // Σ_k A[j][k] P[k][j2] = δ
                let mut s = Q::new(0, 1);
                for k in 1..=10 {
                    s += &(b.a_coeff(j, k) * &b.p_coeff(k, j2));
                }
                let want = if j == j2 { Q::new(1, 1) } else { Q::new(0, 1) };
                assert_eq!(s, want, "j={j} j2={j2}");
            }
        }
    }
}
