use std::collections::BTreeMap;

use crate::algebra::{AlgebraError, LaurentSeries, Scalar};
use crate::curve::{Location, Puncture, SpectralCurve};

use super::{MultiSeries, OpenPotential, PotentialError};

/// Dense series in `(w₁, w₂)` truncated at total degree `cap`.
#[derive(Clone, Debug)]
struct Bivariate<F: Scalar> {
    cap: usize,
    /// `c[i][j]` multiplies `w₁^i w₂^j`, `i + j <= cap`.
    c: Vec<Vec<F>>,
}

impl<F: Scalar> Bivariate<F> {
    fn zero(cap: usize, ctx: &F::Ctx) -> Self {
        Bivariate {
            cap,
            c: (0..=cap).map(|i| vec![F::zero(ctx); cap + 1 - i]).collect(),
        }
    }

    fn ctx(&self) -> F::Ctx {
        self.c[0][0].ctx()
    }

    fn get(&self, i: usize, j: usize) -> &F {
        &self.c[i][j]
    }

    /// `f(w₁)` (`first`) or `f(w₂)`.
    fn univariate(f: &LaurentSeries<F>, first: bool, cap: usize) -> Result<Self, AlgebraError> {
        let mut b = Self::zero(cap, f.ctx());
        for k in 0..=cap {
            let v = f.coeff(k as i64)?;
            if first {
                b.c[k][0] = v;
            } else {
                b.c[0][k] = v;
            }
        }
        Ok(b)
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.cap, &self.ctx());
        for i1 in 0..=self.cap {
            for j1 in 0..=self.cap - i1 {
                let a = &self.c[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=self.cap - i1 - j1 {
                    for j2 in 0..=self.cap - i1 - j1 - i2 {
                        out.c[i1 + i2][j1 + j2].add_mul(a, &o.c[i2][j2]);
                    }
                }
            }
        }
        out
    }

    fn scale(&self, s: &F) -> Self {
        let mut out = self.clone();
        for row in &mut out.c {
            for v in row {
                *v *= s;
            }
        }
        out
    }

    fn sub_constant(&mut self, s: &F) {
        self.c[0][0] -= s;
    }

    /// Homogeneous part of degree `d`, as coefficients of `w₁^i w₂^{d-i}`.
    fn homogeneous(&self, d: usize) -> Vec<F> {
        (0..=d).map(|i| self.c[i][d - i].clone()).collect()
    }

    /// `1/self` for an invertible constant term, degree by degree.
    fn recip(&self) -> Result<Self, AlgebraError> {
        let ctx = self.ctx();
        let inv0 = self.c[0][0].recip().ok_or(AlgebraError::NotInvertible)?;
        let mut out = Self::zero(self.cap, &ctx);
        out.c[0][0] = inv0.clone();
        for d in 1..=self.cap {
            for i in 0..=d {
                let j = d - i;
                let mut acc = F::zero(&ctx);
                for i1 in 0..=i {
                    for j1 in 0..=j {
                        if i1 + j1 == 0 {
                            continue;
                        }
                        acc.add_mul(&self.c[i1][j1], &out.c[i - i1][j - j1]);
                    }
                }
                out.c[i][j] = -(acc * &inv0);
            }
        }
        Ok(out)
    }
}

/// `p / (w₁ - w₂)` for a homogeneous `p`, with the obstruction `p(1, 1)`.
fn divide_diagonal<F: Scalar>(p: &[F]) -> (Vec<F>, F) {
    let ctx = p[0].ctx();
    let d = p.len() - 1;
    let mut q = Vec::with_capacity(d);
    let mut prev = F::zero(&ctx);
    for a in p.iter().take(d) {
        // (w₁ - w₂) q has coefficient b_{i-1} - b_i at w₁^i w₂^{d-i}.
        let b = prev - a;
        q.push(b.clone());
        prev = b;
    }
    let residual = p.iter().fold(F::zero(&ctx), |acc, a| acc + a);
    (q, residual)
}

/// Diagonal pole data of the subtracted annulus integrand on one branch.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnulusReport<F: Scalar> {
    /// Per diagonal branch `ℓ`, the coefficients of `(w₁ - w₂)^{-2}` and
    /// `(w₁ - w₂)^{-1}` left after subtraction, one pair per total degree.
    pub diagonal_poles: BTreeMap<usize, Vec<(F, F)>>,
    pub max_residual: f64,
}

fn dz_parts<F: Scalar>(p: &Puncture<F>, cap: usize, first: bool) -> Result<(Bivariate<F>, Bivariate<F>), AlgebraError> {
    // (s, ds/dw) in the local coordinate of the puncture.
    let s = Bivariate::univariate(&p.rho, first, cap)?;
    let ds = Bivariate::univariate(&p.rho.derivative(), first, cap)?;
    Ok((s, ds))
}

/// The pulled-back integrand per `dw₁ dw₂`, with the diagonal double pole
/// removed on equal branches.
fn integrand<F: Scalar>(
    p1: &Puncture<F>,
    p2: &Puncture<F>,
    same: bool,
    cap: usize,
) -> Result<(Bivariate<F>, Vec<(F, F)>), AlgebraError> {
    let ctx = p1.rho.ctx().clone();
    if same {
        // ρ(w₁) - ρ(w₂) = (w₁ - w₂) Q(w₁, w₂), Q = Σ_k r_k h_{k-1}(w₁, w₂).
        let mut q = Bivariate::zero(cap, &ctx);
        for k in 1..=cap + 1 {
            let r = p1.rho.coeff(k as i64)?;
            if r.is_zero() {
                continue;
            }
            for i in 0..k {
                q.c[i][k - 1 - i] += &r;
            }
        }
        let (_, d1) = dz_parts(p1, cap, true)?;
        let (_, d2) = dz_parts(p1, cap, false)?;
        let qi = q.recip()?;
        let mut n = d1.mul(&d2).mul(&qi).mul(&qi);
        n.sub_constant(&F::one(&ctx));
        // N / (w₁ - w₂)², degree by degree.
        let mut out = Bivariate::zero(cap, &ctx);
        let mut poles = Vec::new();
        for d in 0..=cap {
            let h = n.homogeneous(d);
            if d == 0 {
                poles.push((h[0].clone(), F::zero(&ctx)));
                continue;
            }
            let (q1, r1) = divide_diagonal(&h);
            if d == 1 {
                poles.push((r1, q1[0].clone()));
                continue;
            }
            let (q2, r2) = divide_diagonal(&q1);
            poles.push((r1, r2));
            for (i, v) in q2.into_iter().enumerate() {
                out.c[i][d - 2 - i] = v;
            }
        }
        return Ok((out, poles));
    }
    let (s1, d1) = dz_parts(p1, cap, true)?;
    let (s2, d2) = dz_parts(p2, cap, false)?;
    let shifted = |s: &Bivariate<F>, loc: &Location<F>| -> Bivariate<F> {
        let mut z = s.clone();
        if let Location::Finite(z0) = loc {
            z.c[0][0] += z0;
        }
        z
    };
    // B = dz₁dz₂/(z₁ - z₂)², rewritten with z = 1/s at ∞.
    let (sign, e) = match (&p1.location, &p2.location) {
        (Location::Finite(_), Location::Finite(_)) => {
            let z1 = shifted(&s1, &p1.location);
            let z2 = shifted(&s2, &p2.location);
            let mut e = z1;
            for (ri, row) in e.c.iter_mut().enumerate() {
                for (ci, v) in row.iter_mut().enumerate() {
                    *v -= &z2.c[ri][ci];
                }
            }
            (F::one(&ctx), e)
        }
        (Location::Infinity, Location::Finite(_)) => {
            let mut e = s1.mul(&shifted(&s2, &p2.location)).scale(&-F::one(&ctx));
            e.c[0][0] += &F::one(&ctx);
            (-F::one(&ctx), e)
        }
        (Location::Finite(_), Location::Infinity) => {
            let mut e = s2.mul(&shifted(&s1, &p1.location)).scale(&-F::one(&ctx));
            e.c[0][0] += &F::one(&ctx);
            (-F::one(&ctx), e)
        }
        (Location::Infinity, Location::Infinity) => unreachable!("distinct branches share a location"),
    };
    let ei = e.recip()?;
    Ok((d1.mul(&d2).mul(&ei).mul(&ei).scale(&sign), Vec::new()))
}

/// `F_{0,2}(X₁, X₂) = Σ ∫₀^{X₁}∫₀^{X₂} ((ρ_{ℓ₁} × ρ_{ℓ₂})^* B - δ_{ℓ₁ℓ₂} dX'₁dX'₂/(X'₁ - X'₂)²) ψ_{ℓ₁} ⊗ ψ_{ℓ₂}`.
///
/// The subtraction is only made on equal branches; distinct branches meet at
/// distinct points of the curve and carry no diagonal pole.
pub fn annulus_potential<F: Scalar>(
    curve: &SpectralCurve<F>,
    degree: u32,
) -> Result<(OpenPotential<F>, AnnulusReport<F>), PotentialError> {
    let cap = 2 * degree as usize;
    let branes = curve.brane_punctures(cap as i64 + 3)?;
    let mut components = BTreeMap::new();
    let mut report = AnnulusReport {
        diagonal_poles: BTreeMap::new(),
        max_residual: 0.0,
    };
    for (l1, p1) in branes.iter().enumerate() {
        for (l2, p2) in branes.iter().enumerate() {
            let (a, poles) = integrand(p1, p2, l1 == l2, cap)?;
            let ctx = p1.rho.ctx().clone();
            let mut m = MultiSeries::new(2, degree);
            for i in 0..degree as usize {
                for j in 0..degree as usize {
                    let v = a.get(i, j);
                    if v.is_zero() {
                        continue;
                    }
                    let w = F::from_i64(((i + 1) * (j + 1)) as i64, &ctx);
                    m.add_term(vec![i as u32 + 1, j as u32 + 1], &(v.clone() / w));
                }
            }
            if l1 == l2 {
                let scale = m.norm().max(1.0);
                for (r1, r2) in &poles {
                    report.max_residual = report.max_residual.max(r1.norm()).max(r2.norm());
                    if !r1.is_negligible(scale) || !r2.is_negligible(scale) {
                        return Err(PotentialError::DiagonalResidual(format!(
                            "branch {l1}: leftover diagonal pole coefficients {} and {}",
                            r1.render(),
                            r2.render()
                        )));
                    }
                }
                report.diagonal_poles.insert(l1, poles);
            }
            components.insert(vec![l1, l2], m);
        }
    }
    Ok((
        OpenPotential {
            g: 0,
            n: 2,
            degree,
            components,
        },
        report,
    ))
}
