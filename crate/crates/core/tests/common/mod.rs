//! Reference computations written without the library's series, basis or
//! residue machinery: plain `num-rational` arithmetic on dense coefficient maps.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type R = BigRational;

pub fn r(n: i64, d: i64) -> R {
    R::new(n.into(), d.into())
}

/// An engine rational as a `BigRational`.
pub fn from_q(q: &remodel::algebra::Q) -> R {
    R::from_str(&q.to_string()).expect("rational renders as a/b")
}

pub fn to_f64(x: &R) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

// ---------------------------------------------------------------------------
// Airy curve x = z², y = z: the recursion evaluated literally at z = 0.

/// `ω_{g,n}` as `{(k₁, …, kₙ): c}` meaning `c Π dzᵢ / zᵢ^{kᵢ}`.
pub type Form = BTreeMap<Vec<u32>, R>;

/// Laurent terms in the integration variable `z`, coefficients polynomial in
/// `uᵢ = 1/zᵢ` of the outer variables: `{(power of z, exponents of u): c}`.
type Ser = BTreeMap<(i32, Vec<u32>), R>;

pub struct AiryOracle {
    memo: HashMap<(u32, u32), Form>,
    /// Largest power of `z` kept in expansions of `B(±z, zᵢ)`.
    depth: i32,
}

fn add_to(s: &mut Ser, k: (i32, Vec<u32>), c: R) {
    if c.is_zero() {
        return;
    }
    let e = s.entry(k).or_insert_with(R::zero);
    *e += c;
}

fn mul_ser(a: &Ser, b: &Ser, max_power: i32) -> Ser {
    let mut out = Ser::new();
    for ((pa, ea), ca) in a {
        for ((pb, eb), cb) in b {
            if pa + pb > max_power {
                continue;
            }
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            add_to(&mut out, (pa + pb, e), ca * cb);
        }
    }
    out
}

impl Default for AiryOracle {
    fn default() -> Self {
        AiryOracle {
            memo: HashMap::new(),
            depth: 48,
        }
    }
}

impl AiryOracle {
    /// `ω_{h,|vars|+1}(σz, z_vars…)` with `σ = ±1`, the slot at `σz` carrying
    /// the factor `d(σz) = σ dz`. `None` for `ω_{0,1} = 0`.
    fn at(&mut self, h: u32, vars: &[usize], sigma: i64, nglobal: usize) -> Option<Ser> {
        let m = vars.len() as u32 + 1;
        if (h, m) == (0, 1) {
            return None;
        }
        let sg = |k: i64| if sigma < 0 && k % 2 != 0 { -R::one() } else { R::one() };
        let mut s = Ser::new();
        if (h, m) == (0, 2) {
            // dz₁dz₂/(z₁ - z₂)² with z₁ = σz small: Σ (k+1) (σz)^k / z_v^{k+2}
            for k in 0..=self.depth {
                let mut e = vec![0; nglobal];
                e[vars[0]] = k as u32 + 2;
                add_to(&mut s, (k, e), R::from_integer((k + 1).into()) * sg(k as i64) * sg(1));
            }
            return Some(s);
        }
        for (e, c) in self.omega(h, m).clone() {
            let mut ge = vec![0; nglobal];
            for (i, &v) in vars.iter().enumerate() {
                ge[v] = e[i + 1];
            }
            add_to(&mut s, (-(e[0] as i32), ge), c * sg(e[0] as i64) * sg(1));
        }
        Some(s)
    }

    /// `ω_{g,n}` for `2g - 2 + n > 0`.
    pub fn omega(&mut self, g: u32, n: u32) -> &Form {
        assert!(n >= 1 && 2 * g as i64 - 2 + n as i64 > 0);
        if !self.memo.contains_key(&(g, n)) {
            let f = self.compute(g, n);
            self.memo.insert((g, n), f);
        }
        &self.memo[&(g, n)]
    }

    fn compute(&mut self, g: u32, n: u32) -> Form {
        let n = n as usize;
        // outer variables p_1 … p_{n-1} are indices 0 … n-2; p_n is n - 1
        let mut integrand = Ser::new();
        if g >= 1 {
            // ω_{g-1,n+1}(p, p̄, p_1, …, p_{n-1})
            if (g - 1, n + 1) == (0, 2) {
                // dz d(-z) / (z - (-z))²
                add_to(&mut integrand, (-2, vec![0; n]), r(-1, 4));
            } else {
                for (e, c) in self.omega(g - 1, n as u32 + 1).clone() {
                    let mut ge = vec![0; n];
                    for i in 0..n - 1 {
                        ge[i] = e[i + 2];
                    }
                    let sign = if e[1] % 2 == 0 { -R::one() } else { R::one() };
                    add_to(&mut integrand, (-((e[0] + e[1]) as i32), ge), c * sign);
                }
            }
        }
        for g1 in 0..=g {
            for mask in 0u32..(1 << (n - 1)) {
                let i: Vec<usize> = (0..n - 1).filter(|b| mask >> b & 1 == 1).collect();
                let j: Vec<usize> = (0..n - 1).filter(|b| mask >> b & 1 == 0).collect();
                // the partner ω_{0,1} vanishes; skip before touching ω_{g,n} itself
                if (g1, i.len()) == (0, 0) || (g - g1, j.len()) == (0, 0) {
                    continue;
                }
                let Some(a) = self.at(g1, &i, 1, n) else { continue };
                let Some(b) = self.at(g - g1, &j, -1, n) else { continue };
                for (k, c) in mul_ser(&a, &b, 0) {
                    add_to(&mut integrand, k, c);
                }
            }
        }
        // K = ∫_{ξ=z}^{-z} B(p_n, ξ) / (2(Φ(z) - Φ(-z))) = -2z/(z_n² - z²) / (8z² dz)
        //   = -(1/4) Σ_m z^{2m-1} u_n^{2m+2}
        let mut out = Form::new();
        for ((p, e), c) in integrand {
            if p > 0 || p % 2 != 0 {
                continue;
            }
            let m = (-p / 2) as u32;
            let mut e = e;
            e[n - 1] += 2 * m + 2;
            let v = out.entry(e).or_insert_with(R::zero);
            *v += c * r(-1, 4);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

// ---------------------------------------------------------------------------
// Open sector of 1 + X + Y + qXY = 0 near X = 0, Y = -1, X̂ = X Y^f.

/// Truncated power series in one variable `w`, `s[k]` the coefficient of `w^k`.
pub type Series = Vec<R>;

fn mul1(a: &[R], b: &[R], n: usize) -> Series {
    let mut out = vec![R::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn recip1(a: &[R], n: usize) -> Series {
    let inv0 = a[0].recip();
    let mut out = vec![R::zero(); n];
    out[0] = inv0.clone();
    for k in 1..n {
        let mut s = R::zero();
        for i in 1..=k.min(a.len() - 1) {
            s += &a[i] * &out[k - i];
        }
        out[k] = -s * &inv0;
    }
    out
}

fn pow1(a: &[R], e: i64, n: usize) -> Series {
    let base = if e < 0 { recip1(a, n) } else { a[..n.min(a.len())].to_vec() };
    let mut out = vec![R::zero(); n];
    out[0] = R::one();
    for _ in 0..e.abs() {
        out = mul1(&out, &base, n);
    }
    out
}

/// `log(a / a₀)` for `a₀ ≠ 0`.
fn log1(a: &[R], n: usize) -> Series {
    let u: Series = a.iter().map(|c| c / &a[0]).collect();
    let mut u1 = u.clone();
    u1[0] = R::zero();
    let mut out = vec![R::zero(); n];
    let mut p = vec![R::zero(); n];
    p[0] = R::one();
    for k in 1..n {
        p = mul1(&p, &u1, n);
        let sign = if k % 2 == 1 { R::one() } else { -R::one() };
        for i in 0..n {
            out[i] += &p[i] * &sign / R::from_integer((k as i64).into());
        }
    }
    out
}

/// `X(w)` and `Y(w)` on the branch through `(0, -1)` with `X Y^f = w`, by
/// fixed-point iteration of `Y = -(1 + X)/(1 + qX)`, `X = w Y^{-f}`.
pub fn brane_branch(q: &R, f: i64, n: usize) -> (Series, Series) {
    let mut y = vec![R::zero(); n];
    y[0] = -R::one();
    let mut x = vec![R::zero(); n];
    for _ in 0..=n {
        let yf = pow1(&y, -f, n);
        x = vec![R::zero(); n];
        for k in 1..n {
            x[k] = yf[k - 1].clone();
        }
        let mut num = x.clone();
        num[0] += R::one();
        let mut den: Series = x.iter().map(|c| c * q).collect();
        den[0] += R::one();
        y = mul1(&num, &recip1(&den, n), n).into_iter().map(|c| -c).collect();
    }
    (x, y)
}

/// Disk potential `Σ_d F_d X̂^d` with `F_d = [w^d] log(Y/Y₀) / d`, `d = 1..=degree`.
pub fn disk_series(q: &R, f: i64, degree: usize) -> Vec<R> {
    let n = degree + 1;
    let (_, y) = brane_branch(q, f, n + 1);
    let l = log1(&y, n);
    (1..=degree).map(|d| &l[d] / R::from_integer((d as i64).into())).collect()
}

/// `-C(2d-1, d-1)/d²`, the framing-one vertex disk coefficients.
pub fn c3_disk_closed_form(d: i64) -> R {
    let mut b = R::one();
    for i in 0..d - 1 {
        b = b * R::from_integer((2 * d - 1 - i).into()) / R::from_integer((i + 1).into());
    }
    -b / R::from_integer((d * d).into())
}

/// Bivariate series `{(i, j): c}` for `w₁^i w₂^j`, total degree at most `cap`.
pub type Bi = BTreeMap<(usize, usize), R>;

fn bmul(a: &Bi, b: &Bi, cap: usize) -> Bi {
    let mut out = Bi::new();
    for (&(i1, j1), x) in a {
        for (&(i2, j2), y) in b {
            if i1 + i2 + j1 + j2 > cap {
                continue;
            }
            *out.entry((i1 + i2, j1 + j2)).or_insert_with(R::zero) += x * y;
        }
    }
    out
}

/// Annulus potential as `{(i, j): c}` for `X̂₁^i X̂₂^j`, `1 <= i, j`, from
/// `log((ρ(w₁) - ρ(w₂)) / (w₁ - w₂))` with `ρ = X(w)`; its mixed derivative is
/// the subtracted integrand, so no diagonal division is needed.
pub fn annulus_series(q: &R, f: i64, degree: usize) -> BTreeMap<(usize, usize), R> {
    let cap = 2 * degree + 2;
    let (rho, _) = brane_branch(q, f, cap + 2);
    // (ρ(w₁) - ρ(w₂))/(w₁ - w₂) = Σ_k ρ_k h_{k-1}(w₁, w₂)
    let mut qq = Bi::new();
    for (k, c) in rho.iter().enumerate().skip(1) {
        for i in 0..k {
            if k - 1 <= cap {
                *qq.entry((i, k - 1 - i)).or_insert_with(R::zero) += c;
            }
        }
    }
    let q0 = qq[&(0, 0)].clone();
    let mut u: Bi = qq.iter().map(|(k, c)| (*k, c / &q0)).collect();
    u.remove(&(0, 0));
    let mut log = Bi::new();
    let mut p = Bi::new();
    p.insert((0, 0), R::one());
    for k in 1..=cap {
        p = bmul(&p, &u, cap);
        let sign = if k % 2 == 1 { R::one() } else { -R::one() };
        for (e, c) in &p {
            *log.entry(*e).or_insert_with(R::zero) += c * &sign / R::from_integer((k as i64).into());
        }
    }
    log.into_iter()
        .filter(|((i, j), c)| *i >= 1 && *j >= 1 && *i <= degree && *j <= degree && !c.is_zero())
        .collect()
}

/// `Γ((m+1)/2)/√π` for even `m` by the recurrences `Γ(x+1) = xΓ(x)` from `Γ(1/2) = √π`.
pub fn gamma_half_ratio(m: i64) -> R {
    assert!(m % 2 == 0);
    let target = r(m + 1, 2);
    let mut x = r(1, 2);
    let mut v = R::one();
    while x < target {
        v *= &x;
        x += R::one();
    }
    while x > target {
        x -= R::one();
        v /= &x;
    }
    v
}

/// Simpson's rule for `∫_{-L}^{L} t^m e^{-t²} dt / √π`.
pub fn gaussian_quadrature(m: i32) -> f64 {
    let (l, steps) = (12.0f64, 20000);
    let h = 2.0 * l / steps as f64;
    let f = |t: f64| t.powi(m) * (-t * t).exp();
    let mut s = f(-l) + f(l);
    for i in 1..steps {
        let t = -l + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(t);
    }
    s * h / 3.0 / std::f64::consts::PI.sqrt()
}

pub fn abs_diff(a: &R, b: &R) -> f64 {
    to_f64(&(a - b).abs())
}

// ---------------------------------------------------------------------------
// Lattice polygons.

pub type Pt = (i64, i64);

fn cross(o: Pt, a: Pt, b: Pt) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Counterclockwise strict hull.
pub fn hull(pts: &[Pt]) -> Vec<Pt> {
    let mut p = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut h: Vec<Pt> = Vec::new();
    for pass in 0..2 {
        let start = h.len();
        let it: Vec<Pt> = if pass == 0 { p.clone() } else { p.iter().rev().cloned().collect() };
        for q in it {
            while h.len() >= start + 2 && cross(h[h.len() - 2], h[h.len() - 1], q) <= 0 {
                h.pop();
            }
            h.push(q);
        }
        h.pop();
    }
    h
}

/// `(interior, boundary, twice the area)` by brute-force enumeration, and
/// the boundary count again from edge gcds.
pub fn pick_data(vertices: &[Pt]) -> (i64, i64, i64, i64) {
    let n = vertices.len();
    let area2: i64 = (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum::<i64>()
        .abs();
    let gcd_boundary: i64 = (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            gcd(b.0 - a.0, b.1 - a.1)
        })
        .sum();
    let (mut interior, mut boundary) = (0, 0);
    let (x0, x1) = (vertices.iter().map(|p| p.0).min().unwrap(), vertices.iter().map(|p| p.0).max().unwrap());
    let (y0, y1) = (vertices.iter().map(|p| p.1).min().unwrap(), vertices.iter().map(|p| p.1).max().unwrap());
    for x in x0..=x1 {
        for y in y0..=y1 {
            let c: Vec<i64> = (0..n).map(|i| cross(vertices[i], vertices[(i + 1) % n], (x, y))).collect();
            if c.iter().all(|&v| v > 0) {
                interior += 1;
            } else if c.iter().all(|&v| v >= 0) {
                boundary += 1;
            }
        }
    }
    (interior, boundary, area2, gcd_boundary)
}

/// Triangulation of the hull of `vertices` using the hull vertices plus the
/// listed `extra` lattice points, by successive splitting.
pub fn split_triangulation(vertices: &[Pt], extra: &[Pt]) -> Vec<[Pt; 3]> {
    let mut tris: Vec<[Pt; 3]> = (1..vertices.len() - 1)
        .map(|i| [vertices[0], vertices[i], vertices[i + 1]])
        .collect();
    for &p in extra {
        let mut next = Vec::new();
        for t in tris {
            let c = [cross(t[0], t[1], p), cross(t[1], t[2], p), cross(t[2], t[0], p)];
            if c.iter().any(|&v| v < 0) || t.contains(&p) {
                next.push(t);
                continue;
            }
            for i in 0..3 {
                // skip the degenerate piece when p lies on edge (t[i], t[i+1])
                if c[i] != 0 {
                    next.push([t[i], t[(i + 1) % 3], p]);
                }
            }
        }
        tris = next;
    }
    tris
}
