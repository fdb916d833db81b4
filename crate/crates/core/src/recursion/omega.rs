use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{AlgebraError, LaurentSeries, Scalar};
use crate::curve::SpectralCurve;

use super::basis::{LocalBasis, ResidueFrame};
use super::{default_order, max_pole_order, RecursionError};

/// `(α, j)`: the basis form `ξ_j` at ramification point `α`.
pub type Label = (usize, u32);

fn degree(l: &Label) -> i64 {
    l.1 as i64 / 2 - 1
}

fn key_degree(k: &[Label]) -> i64 {
    k.iter().map(degree).sum()
}

fn insert_sorted(s: &[Label], p: Label) -> Vec<Label> {
    let mut v = Vec::with_capacity(s.len() + 1);
    let pos = s.partition_point(|x| *x <= p);
    v.extend_from_slice(&s[..pos]);
    v.push(p);
    v.extend_from_slice(&s[pos..]);
    v
}

/// Summary of the invariants verified while computing one `ω_{g,n}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    /// Number of entries compared across different choices of special variable.
    pub symmetry_comparisons: usize,
    pub symmetry_max_deviation: f64,
    /// Largest odd-`j` coefficient in the special variable.
    pub parity_max: f64,
    /// Largest coefficient of `dz/(z - a)^k` with `k` above the pole bound.
    pub pole_max: f64,
    /// Largest residue in the special variable.
    pub residue_max: f64,
    /// Largest coefficient outside `Σ (j_i/2 - 1) <= 3g - 3 + n`.
    pub degree_max: f64,
    /// Extra label sets (odd labels, over-degree) whose output must vanish.
    pub audits: usize,
    pub audit_max: f64,
    /// Largest coefficient modulus, the scale for relative tolerances.
    pub scale: f64,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn to_json(&self) -> Value {
        json!({
            "symmetry_comparisons": self.symmetry_comparisons,
            "symmetry_max_deviation": format!("{:e}", self.symmetry_max_deviation),
            "parity_max": format!("{:e}", self.parity_max),
            "pole_max": format!("{:e}", self.pole_max),
            "residue_max": format!("{:e}", self.residue_max),
            "degree_max": format!("{:e}", self.degree_max),
            "audits": self.audits,
            "audit_max": format!("{:e}", self.audit_max),
            "scale": format!("{:e}", self.scale),
            "tolerance": format!("{:e}", self.tolerance),
        })
    }
}

/// `ω_{g,n} = Σ_M c[M] Σ_{orderings} Π_i ξ_{M_i}(z_i)`, where `M` runs over
/// sorted label multisets. Coefficients are per ordering, so the stored value
/// is the coefficient of any single monomial `Π ξ_{l_i}(z_i)` with `sort(l) = M`.
#[derive(Clone, Debug)]
pub struct MeromorphicForm<F: Scalar> {
    pub g: u32,
    pub n: u32,
    /// Expansion order `K` the form was computed at.
    pub order: i64,
    pub coeffs: BTreeMap<Vec<Label>, F>,
    pub report: CheckReport,
}

impl<F: Scalar> MeromorphicForm<F> {
    pub fn get(&self, key: &[Label]) -> Option<&F> {
        self.coeffs.get(key)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecursionConfig {
    /// Fixed `K` for every `(g, n)`; by default `K(g, n) = 2(3g-3+n) + 12`.
    pub order_override: Option<i64>,
    /// Added to the default `K(g, n)`.
    pub order_offset: i64,
    /// Test hook: negate the recursion kernel.
    pub flip_kernel_sign: bool,
    /// Label sets checked beyond those the recursion needs, per residue point.
    pub audit_budget: usize,
    /// Relative tolerance for numeric invariant checks; unused in exact mode.
    pub check_tolerance: f64,
}

impl Default for RecursionConfig {
    fn default() -> Self {
        RecursionConfig {
            order_override: None,
            order_offset: 0,
            flip_kernel_sign: false,
            audit_budget: 4,
            check_tolerance: 1e-40,
        }
    }
}

impl RecursionConfig {
    /// Tolerance `10^(-40 P / 256)`: `1e-40` at the default 256 bits.
    pub fn tolerance_for_bits(bits: u32) -> f64 {
        10f64.powf(-40.0 * bits as f64 / 256.0)
    }

    pub fn order_for(&self, g: u32, n: u32) -> i64 {
        self.order_override.unwrap_or(default_order(g, n) + self.order_offset)
    }
}

/// Memoized `ω_{g,n}` on one curve.
pub struct OmegaTable<F: Scalar> {
    pub curve: SpectralCurve<F>,
    pub config: RecursionConfig,
    memo: BTreeMap<(u32, u32), MeromorphicForm<F>>,
    bases: BTreeMap<(i64, usize), Arc<Vec<LocalBasis<F>>>>,
}

/// Everything the recursion reads at one residue point.
struct PointData<F: Scalar> {
    alpha: usize,
    frame: ResidueFrame<F>,
    e: HashMap<Label, LaurentSeries<F>>,
    ebar: HashMap<Label, LaurentSeries<F>>,
    /// `B(t, z)` and `B(t̄, z)` projected on `ξ_j(z)` at this point, by `j`.
    beta: Vec<LaurentSeries<F>>,
    betabar: Vec<LaurentSeries<F>>,
    /// `B(t, t̄) / (dt)²`.
    b_diag: LaurentSeries<F>,
}

type TKey = (bool, u32, Vec<Label>);

impl<F: Scalar> OmegaTable<F> {
    pub fn new(curve: SpectralCurve<F>, config: RecursionConfig) -> Self {
        OmegaTable {
            curve,
            config,
            memo: BTreeMap::new(),
            bases: BTreeMap::new(),
        }
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.curve.ctx
    }

    pub fn points(&self) -> usize {
        self.curve.critical.len()
    }

    /// Local bases at every ramification point, expanded to `order` in `t`,
    /// with `A` up to `jmax` and `P` up to `kmax`.
    pub fn bases(&mut self, order: i64, jmax: usize, kmax: usize) -> Result<Arc<Vec<LocalBasis<F>>>, RecursionError> {
        if let Some((_, b)) = self
            .bases
            .range((order, 0)..(order + 1, 0))
            .find(|(k, b)| k.1 >= kmax && b[0].jmax() >= jmax)
        {
            return Ok(b.clone());
        }
        let rps = self.curve.ramification(order)?;
        let b: Vec<LocalBasis<F>> = rps
            .into_par_iter()
            .map(|rp| LocalBasis::new(rp, jmax, kmax))
            .collect::<Result<_, _>>()?;
        let b = Arc::new(b);
        self.bases.insert((order, kmax), b.clone());
        Ok(b)
    }

    /// The bases `ω_{g,n}` is computed with at expansion order `k`.
    pub fn bases_for(&mut self, g: u32, n: u32, k: i64) -> Result<Arc<Vec<LocalBasis<F>>>, RecursionError> {
        let local_order = k + 4;
        let jmax = max_pole_order(g, n);
        let pmax = ((local_order - 3).max(0) as usize).max(jmax + 2);
        self.bases(local_order, jmax, pmax)
    }

    pub fn get(&self, g: u32, n: u32) -> Option<&MeromorphicForm<F>> {
        self.memo.get(&(g, n))
    }

    /// `ω_{g,n}`, computing and memoizing every stable `(g', n')` it depends on.
    pub fn omega(&mut self, g: u32, n: u32) -> Result<&MeromorphicForm<F>, RecursionError> {
        if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
            return Err(RecursionError::UnstablePair(g, n));
        }
        for (gg, nn) in dependency_order(g, n) {
            if !self.memo.contains_key(&(gg, nn)) {
                let f = self.compute(gg, nn)?;
                self.memo.insert((gg, nn), f);
            }
        }
        Ok(&self.memo[&(g, n)])
    }

    fn compute(&mut self, g: u32, n: u32) -> Result<MeromorphicForm<F>, RecursionError> {
        let k = self.config.order_for(g, n);
        match self.compute_at(g, n, k) {
            Err(RecursionError::Algebra(AlgebraError::TruncationTooShort { .. })) => self.compute_at(g, n, 2 * k),
            r => r,
        }
    }

    fn compute_at(&mut self, g: u32, n: u32, k: i64) -> Result<MeromorphicForm<F>, RecursionError> {
        let ctx = self.ctx().clone();
        let jmax = max_pole_order(g, n);
        let kmax = jmax + 2;
        let bases = self.bases_for(g, n, k)?;
        let npts = bases.len();
        let bound = 3 * g as i64 - 3 + n as i64;
        let exact = F::EXACT;

        let labels_in: Vec<Label> = (0..npts)
            .flat_map(|a| (2..=jmax as u32).step_by(2).map(move |j| (a, j)))
            .collect();

        let rs = enumerate_multisets(&labels_in, (n - 1) as usize, bound);
        let memo = &self.memo;

        let mut entries: BTreeMap<Vec<Label>, F> = BTreeMap::new();
        let mut report = CheckReport::default();
        let mut sym_pairs: Vec<(F, F)> = Vec::new();
        let mut zero_checks: Vec<(&'static str, F)> = Vec::new();

        for alpha in 0..npts {
            let pd = point_data(&bases, alpha, &labels_in, jmax, kmax, self.config.flip_kernel_sign)?;
            let audits = audit_sets(&rs, alpha, jmax, &labels_in, n, bound, self.config.audit_budget);
            let all_rs: Vec<(&Vec<Label>, bool)> =
                rs.iter().map(|r| (r, false)).chain(audits.iter().map(|r| (r, true))).collect();

            // Contractions T[g', S] needed by any W_R, computed once.
            let mut keys: BTreeSet<TKey> = BTreeSet::new();
            for (r, _) in &all_rs {
                collect_keys(r, g, n, &labels_in, &mut keys);
            }
            let keys: Vec<TKey> = keys.into_iter().collect();
            let tvals: Vec<Option<LaurentSeries<F>>> = keys
                .par_iter()
                .map(|(bar, gg, s)| contraction(memo, &pd, &labels_in, *bar, *gg, s))
                .collect::<Result<_, AlgebraError>>()?;
            let tcache: HashMap<TKey, Option<LaurentSeries<F>>> = keys.into_iter().zip(tvals).collect();

            let results: Vec<(Vec<F>, Vec<F>)> = all_rs
                .par_iter()
                .map(|(r, _)| {
                    let w = bracket(&pd, &tcache, r, g, n, &labels_in, &ctx)?;
                    let b = &bases[alpha];
                    // c_k = Res K_k W, coefficient of dz_n/(z_n - a)^k.
                    let mut c = vec![F::zero(&ctx); kmax + 1];
                    if let Some(w) = w {
                        for (kk, ck) in c.iter_mut().enumerate().skip(2) {
                            *ck = residue_of_product(&pd.frame.kernel[kk], &w)?;
                        }
                    }
                    let mut out = vec![F::zero(&ctx); jmax + 1];
                    for (j, oj) in out.iter_mut().enumerate().skip(1) {
                        for (kk, ck) in c.iter().enumerate().skip(j.max(1)).take(jmax + 1 - j.max(1)) {
                            if !ck.is_zero() {
                                oj.add_mul(ck, &b.p_coeff(kk, j));
                            }
                        }
                    }
                    let over: Vec<F> = c[jmax + 1..].to_vec();
                    Ok((out, over))
                })
                .collect::<Result<_, RecursionError>>()?;

            for ((r, is_audit), (out, over)) in all_rs.iter().zip(results) {
                for v in over {
                    zero_checks.push(("pole", v));
                }
                if *is_audit {
                    report.audits += 1;
                    for v in out.into_iter().skip(1) {
                        zero_checks.push(("audit", v));
                    }
                    continue;
                }
                for (j, v) in out.into_iter().enumerate().skip(1) {
                    if j == 1 {
                        zero_checks.push(("residue", v));
                        continue;
                    }
                    if j % 2 == 1 {
                        zero_checks.push(("parity", v));
                        continue;
                    }
                    let m = insert_sorted(r, (alpha, j as u32));
                    if key_degree(&m) > bound {
                        zero_checks.push(("degree", v));
                        continue;
                    }
                    match entries.get(&m) {
                        Some(prev) => sym_pairs.push((prev.clone(), v)),
                        None => {
                            entries.insert(m, v);
                        }
                    }
                }
            }
        }

        // A[j][1] = Res η^{-j} dη = 0: the z-basis never carries a residue.
        for b in bases.iter() {
            for j in 2..=jmax {
                zero_checks.push(("residue", b.a_coeff(j, 1)));
            }
        }

        let scale = entries.values().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        let tol = if exact { 0.0 } else { self.config.check_tolerance * scale.max(1.0) };
        report.scale = scale;
        report.tolerance = tol;
        let mut failures = Vec::new();
        for (what, v) in &zero_checks {
            let d = v.norm();
            let slot = match *what {
                "pole" => &mut report.pole_max,
                "audit" => &mut report.audit_max,
                "residue" => &mut report.residue_max,
                "parity" => &mut report.parity_max,
                _ => &mut report.degree_max,
            };
            *slot = slot.max(d);
            let bad = if exact { !v.is_zero() } else { d > tol };
            if bad {
                failures.push(format!("{what} check failed at ({g},{n}): |c| = {d:e}"));
            }
        }
        for (a, b) in &sym_pairs {
            let d = (a.clone() - b).norm();
            report.symmetry_comparisons += 1;
            report.symmetry_max_deviation = report.symmetry_max_deviation.max(d);
            let bad = if exact { a != b } else { d > tol };
            if bad {
                failures.push(format!("symmetry check failed at ({g},{n}): deviation {d:e}"));
            }
        }
        if !failures.is_empty() {
            failures.truncate(5);
            return Err(RecursionError::Invariant(failures.join("; ")));
        }
        if exact {
            entries.retain(|_, v| !v.is_zero());
        }
        Ok(MeromorphicForm {
            g,
            n,
            order: k,
            coeffs: entries,
            report,
        })
    }

    /// Principal parts in `z`: the coefficient of
    /// `Π dz_i/(z_i - a_{α_i})^{k_i}` for every sorted key `((α_i, k_i))`.
    pub fn principal_parts(&mut self, g: u32, n: u32) -> Result<BTreeMap<Vec<(usize, u32)>, F>, RecursionError> {
        let (order, coeffs) = {
            let f = self.omega(g, n)?;
            (f.order, f.coeffs.clone())
        };
        let bases = self.bases_for(g, n, order)?;
        let ctx = self.ctx().clone();
        Ok(to_principal_parts(&coeffs, &bases, &ctx))
    }

    /// `ω_{g,n}(z_1, …, z_n) / (dz_1 ⋯ dz_n)` at a point away from the poles.
    pub fn evaluate(&mut self, g: u32, n: u32, z: &[F]) -> Result<F, RecursionError> {
        let pp = self.principal_parts(g, n)?;
        let pts = self.curve.critical.clone();
        let ctx = self.ctx().clone();
        // (z_i - a_α)^{-k} once per slot and distinct label
        let mut labels: Vec<(usize, u32)> = pp.keys().flatten().cloned().collect();
        labels.sort();
        labels.dedup();
        let mut val = Vec::with_capacity(z.len());
        for zi in z {
            let mut row = Vec::with_capacity(labels.len());
            for &(alpha, k) in &labels {
                row.push((zi.clone() - &pts[alpha]).pow_i64(-(k as i64)).ok_or_else(|| {
                    RecursionError::Invariant("evaluation point on a pole".into())
                })?);
            }
            val.push(row);
        }
        let mut acc = F::zero(&ctx);
        for (key, c) in &pp {
            // distinct labels of the key with multiplicities
            let mut ids: Vec<(usize, u8)> = Vec::new();
            for l in key {
                let id = labels.binary_search(l).expect("label listed");
                match ids.last_mut() {
                    Some((last, m)) if *last == id => *m += 1,
                    _ => ids.push((id, 1)),
                }
            }
            let counts: Vec<u8> = ids.iter().map(|p| p.1).collect();
            let mut memo = HashMap::new();
            let s = assignment_sum(&val, &ids, 0, counts, &mut memo, &ctx);
            acc += &(s * c);
        }
        Ok(acc)
    }

    pub fn form_json(&mut self, g: u32, n: u32) -> Result<Value, RecursionError> {
        let pp = self.principal_parts(g, n)?;
        let f = self.omega(g, n)?.clone();
        let parts: Vec<Value> = pp
            .iter()
            .map(|(k, v)| {
                json!({
                    "poles": k.iter().map(|(a, kk)| json!([a, kk])).collect::<Vec<_>>(),
                    "coefficient": v.render(),
                })
            })
            .collect();
        let eta: Vec<Value> = f
            .coeffs
            .iter()
            .map(|(k, v)| {
                json!({
                    "labels": k.iter().map(|(a, j)| json!([a, j])).collect::<Vec<_>>(),
                    "coefficient": v.render(),
                })
            })
            .collect();
        Ok(json!({
            "g": g,
            "n": n,
            "order": f.order,
            "ramification_points": self.curve.critical.iter().map(|a| a.render()).collect::<Vec<_>>(),
            "principal_parts": parts,
            "eta_basis": eta,
            "checks": f.report.to_json(),
        }))
    }
}

/// Stable `(g', n')` needed by `ω_{g,n}`, ordered by `2g' - 2 + n'`.
pub fn dependency_order(g: u32, n: u32) -> Vec<(u32, u32)> {
    let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut stack = vec![(g, n)];
    while let Some((gg, nn)) = stack.pop() {
        if 2 * gg as i64 - 2 + nn as i64 <= 0 || !seen.insert((gg, nn)) {
            continue;
        }
        if gg >= 1 {
            stack.push((gg - 1, nn + 1));
        }
        for g1 in 0..=gg {
            for k in 0..nn {
                // ω_{g1, k+1} · ω_{g-g1, n-k}
                stack.push((g1, k + 1));
                stack.push((gg - g1, nn - k));
            }
        }
    }
    let mut v: Vec<(u32, u32)> = seen.into_iter().collect();
    v.sort_by_key(|&(gg, nn)| (2 * gg as i64 - 2 + nn as i64, gg, nn));
    v
}

/// Sorted multisets of `size` labels with total degree at most `bound`.
fn enumerate_multisets(labels: &[Label], size: usize, bound: i64) -> Vec<Vec<Label>> {
    fn rec(labels: &[Label], start: usize, left: usize, budget: i64, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..labels.len() {
            let d = degree(&labels[i]);
            if d > budget {
                continue;
            }
            cur.push(labels[i]);
            rec(labels, i, left - 1, budget - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(labels, 0, size, bound, &mut Vec::new(), &mut out);
    out
}

/// Extra label sets whose recursion output must vanish: sets with one odd
/// label at `alpha`, and sets above the degree bound.
fn audit_sets(
    rs: &[Vec<Label>],
    alpha: usize,
    jmax: usize,
    labels: &[Label],
    n: u32,
    bound: i64,
    budget: usize,
) -> Vec<Vec<Label>> {
    let mut out = Vec::new();
    if n < 2 || budget == 0 {
        return out;
    }
    for r in rs {
        if out.len() >= budget {
            break;
        }
        let mut v = r.clone();
        let last = v.pop().expect("nonempty");
        let odd = (alpha, (last.1 + 1).min(jmax as u32 - 1) | 1);
        out.push(insert_sorted(&v, odd));
    }
    let over = enumerate_multisets(labels, (n - 1) as usize, bound + 1)
        .into_iter()
        .filter(|r| key_degree(r) == bound + 1)
        .take(budget);
    out.extend(over);
    out
}

fn point_data<F: Scalar>(
    bases: &[LocalBasis<F>],
    alpha: usize,
    labels: &[Label],
    jmax: usize,
    kmax: usize,
    flip: bool,
) -> Result<PointData<F>, AlgebraError> {
    let b = &bases[alpha];
    let ctx = b.rp.eta.ctx().clone();
    let frame = ResidueFrame::new(&b.rp, kmax, flip)?;
    let order = frame.order;
    let d = &frame.deck;
    let dd = &frame.ddeck;
    let t = LaurentSeries::var(&ctx, order);

    // Powers (t + δ)^{-k} and (d + δ)^{-k}, with δ = a_α - a_β (δ = 0 for β = α).
    let powers = |base: &LaurentSeries<F>| -> Result<Vec<LaurentSeries<F>>, AlgebraError> {
        let inv = base.recip()?;
        let mut v = vec![LaurentSeries::one(&ctx, order)];
        for _ in 1..=jmax {
            let next = v.last().expect("nonempty").mul(&inv);
            v.push(next);
        }
        Ok(v)
    };
    let mut e = HashMap::new();
    let mut ebar = HashMap::new();
    for beta in 0..bases.len() {
        let delta = b.rp.a.clone() - &bases[beta].rp.a;
        let c = LaurentSeries::monomial(delta, 0, order);
        let tp = powers(&t.add(&c))?;
        let dp = powers(&d.add(&c))?;
        for &(lb, j) in labels.iter().filter(|l| l.0 == beta) {
            debug_assert_eq!(lb, beta);
            let mut s = LaurentSeries::zero(&ctx, order + jmax as i64);
            let mut sb = LaurentSeries::zero(&ctx, order + jmax as i64);
            for k in 2..=j as usize {
                let a = bases[beta].a_coeff(j as usize, k);
                if a.is_zero() {
                    continue;
                }
                s = s.add(&tp[k].scale(&a));
                sb = sb.add(&dp[k].scale(&a));
            }
            e.insert((beta, j), s);
            ebar.insert((beta, j), sb.mul(dd));
        }
    }

    // B(t, z) = Σ_k (k-1) t^{k-2} dz/(z-a)^k, and dz/(z-a)^k = Σ_j P[k][j] ξ_j.
    let kb = b.kmax();
    let mut beta = vec![LaurentSeries::zero(&ctx, order); jmax + 1];
    let mut betabar = vec![LaurentSeries::zero(&ctx, order); jmax + 1];
    let mut dpow = vec![LaurentSeries::one(&ctx, order)];
    for _ in 1..kb {
        let next = dpow.last().expect("nonempty").mul(d);
        dpow.push(next);
    }
    let bo = (kb as i64 - 1).min(order);
    for (j, (bj, bbj)) in beta.iter_mut().zip(betabar.iter_mut()).enumerate().skip(1) {
        let mut coeffs = vec![F::zero(&ctx); bo.max(0) as usize];
        let mut sb = LaurentSeries::zero(&ctx, bo);
        for k in j.max(2)..=kb {
            let p = b.p_coeff(k, j);
            if p.is_zero() || (k as i64 - 2) >= bo {
                continue;
            }
            let w = p * &F::from_i64(k as i64 - 1, &ctx);
            coeffs[k - 2] += &w;
            sb = sb.add(&dpow[k - 2].scale(&w));
        }
        *bj = LaurentSeries::from_coeffs(0, coeffs, bo, &ctx);
        *bbj = sb.mul(dd);
    }
    let diff = t.sub(d);
    let b_diag = dd.mul(&diff.mul(&diff).recip()?);
    Ok(PointData {
        alpha,
        frame,
        e,
        ebar,
        beta,
        betabar,
        b_diag,
    })
}

/// `Σ_p c_{g'}[S ∪ p] E_p` (or `Ē_p` when `bar`): `ω_{g', |S|+1}` with its
/// first slot at `t` (or `t̄`) and the others projected on the labels `S`.
fn contraction<F: Scalar>(
    memo: &BTreeMap<(u32, u32), MeromorphicForm<F>>,
    pd: &PointData<F>,
    labels: &[Label],
    bar: bool,
    g: u32,
    s: &[Label],
) -> Result<Option<LaurentSeries<F>>, AlgebraError> {
    let n = s.len() as u32 + 1;
    if g == 0 && n == 1 {
        return Ok(None);
    }
    if g == 0 && n == 2 {
        let (a, j) = s[0];
        if a != pd.alpha {
            return Ok(None);
        }
        let v = if bar { &pd.betabar } else { &pd.beta };
        return Ok(v.get(j as usize).filter(|x| !x.is_zero()).cloned());
    }
    let Some(form) = memo.get(&(g, n)) else {
        return Ok(None);
    };
    let table = if bar { &pd.ebar } else { &pd.e };
    let mut acc: Option<LaurentSeries<F>> = None;
    for p in labels {
        let key = insert_sorted(s, *p);
        if let Some(c) = form.coeffs.get(&key) {
            if c.is_zero() {
                continue;
            }
            let term = table[p].scale(c);
            acc = Some(match acc {
                Some(a) => a.add(&term),
                None => term,
            });
        }
    }
    Ok(acc)
}

fn sub_multisets(r: &[Label]) -> Vec<(Vec<Label>, Vec<Label>, u64)> {
    let mut groups: Vec<(Label, usize)> = Vec::new();
    for l in r {
        match groups.last_mut() {
            Some((g, m)) if g == l => *m += 1,
            _ => groups.push((*l, 1)),
        }
    }
    let mut out = Vec::new();
    let mut counts = vec![0usize; groups.len()];
    loop {
        let mut s = Vec::new();
        let mut rest = Vec::new();
        let mut mult = 1u64;
        for ((l, m), &c) in groups.iter().zip(&counts) {
            s.extend(std::iter::repeat_n(*l, c));
            rest.extend(std::iter::repeat_n(*l, m - c));
            mult *= binomial(*m as u64, c as u64);
        }
        out.push((s, rest, mult));
        let mut i = 0;
        loop {
            if i == groups.len() {
                return out;
            }
            if counts[i] < groups[i].1 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn collect_keys(r: &[Label], g: u32, n: u32, labels: &[Label], keys: &mut BTreeSet<TKey>) {
    if g >= 1 && !(g == 1 && n == 1) {
        for q in labels {
            keys.insert((false, g - 1, insert_sorted(r, *q)));
        }
    }
    for (s, rest, _) in sub_multisets(r) {
        for g1 in 0..=g {
            keys.insert((false, g1, s.clone()));
            keys.insert((true, g - g1, rest.clone()));
        }
    }
}

/// `W_R(t)`: the coefficient of `Π ξ_{R_i}(z_i)` in
/// `ω_{g-1,n+1}(t, t̄, z) + Σ' ω_{g1}(t, z_I) ω_{g2}(t̄, z_J)`, per `dt²`,
/// known through degree 0.
fn bracket<F: Scalar>(
    pd: &PointData<F>,
    tcache: &HashMap<TKey, Option<LaurentSeries<F>>>,
    r: &[Label],
    g: u32,
    n: u32,
    labels: &[Label],
    ctx: &F::Ctx,
) -> Result<Option<LaurentSeries<F>>, AlgebraError> {
    let mut w = LaurentSeries::zero(ctx, 1);
    let mut any = false;
    if g == 1 && n == 1 {
        w = w.add(&pd.b_diag);
        any = true;
    } else if g >= 1 {
        for q in labels {
            if let Some(Some(tv)) = tcache.get(&(false, g - 1, insert_sorted(r, *q))) {
                w = w.add(&pd.ebar[q].mul_capped(tv, 1));
                any = true;
            }
        }
    }
    for (s, rest, mult) in sub_multisets(r) {
        let m = F::from_i64(mult as i64, ctx);
        for g1 in 0..=g {
            let g2 = g - g1;
            if (g1 == 0 && s.is_empty()) || (g2 == 0 && rest.is_empty()) {
                continue;
            }
            let (Some(Some(f1)), Some(Some(f2))) =
                (tcache.get(&(false, g1, s.clone())), tcache.get(&(true, g2, rest.clone())))
            else {
                continue;
            };
            w = w.add(&f1.mul_capped(f2, 1).scale(&m));
            any = true;
        }
    }
    Ok(if any { Some(w) } else { None })
}

/// `Res_t K(t) W(t)`.
fn residue_of_product<F: Scalar>(k: &LaurentSeries<F>, w: &LaurentSeries<F>) -> Result<F, AlgebraError> {
    let ctx = k.ctx().clone();
    let mut acc = F::zero(&ctx);
    if k.is_zero() || w.is_zero() {
        return Ok(acc);
    }
    // Σ_i K[i] W[-1-i] over the degrees where both may be nonzero.
    let lo = k.val();
    let hi = -1 - w.val();
    for i in lo..=hi {
        let a = k.coeff(i)?;
        if a.is_zero() {
            continue;
        }
        acc.add_mul(&a, &w.coeff(-1 - i)?);
    }
    Ok(acc)
}

/// Distinct orderings of a sorted multiset.
/// `Σ Π_{i >= slot} val[i][label σ(i)]` over distinct assignments of the
/// remaining label multiset `counts` to slots `slot..`.
fn assignment_sum<F: Scalar>(
    val: &[Vec<F>],
    ids: &[(usize, u8)],
    slot: usize,
    counts: Vec<u8>,
    memo: &mut HashMap<Vec<u8>, F>,
    ctx: &F::Ctx,
) -> F {
    if slot == val.len() {
        return F::one(ctx);
    }
    if let Some(v) = memo.get(&counts) {
        return v.clone();
    }
    let mut acc = F::zero(ctx);
    for (j, &(id, _)) in ids.iter().enumerate() {
        if counts[j] == 0 {
            continue;
        }
        let mut rest = counts.clone();
        rest[j] -= 1;
        let tail = assignment_sum(val, ids, slot + 1, rest, memo, ctx);
        acc += &(tail * &val[slot][id]);
    }
    memo.insert(counts, acc.clone());
    acc
}

pub fn distinct_permutations<T: Clone + Ord>(sorted: &[T]) -> Vec<Vec<T>> {
    let mut v = sorted.to_vec();
    v.sort();
    let mut out = vec![v.clone()];
    // Next lexicographic permutation until exhausted.
    loop {
        let n = v.len();
        if n < 2 {
            return out;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
}

/// Convert `η`-basis coefficients to `z` principal parts.
pub fn to_principal_parts<F: Scalar>(
    coeffs: &BTreeMap<Vec<Label>, F>,
    bases: &[LocalBasis<F>],
    ctx: &F::Ctx,
) -> BTreeMap<Vec<(usize, u32)>, F> {
    let mut out: BTreeMap<Vec<(usize, u32)>, F> = BTreeMap::new();
    for (key, c) in coeffs {
        for seq in distinct_permutations(key) {
            // Expand Π_i Σ_k A[j_i][k] e_{(α_i, k)}, keep sorted z-sequences.
            let mut partial: Vec<(Vec<(usize, u32)>, F)> = vec![(Vec::new(), c.clone())];
            for &(alpha, j) in &seq {
                let mut next = Vec::new();
                for (zk, v) in &partial {
                    for k in 2..=j as usize {
                        let a = bases[alpha].a_coeff(j as usize, k);
                        if a.is_zero() {
                            continue;
                        }
                        let item = (alpha, k as u32);
                        if zk.last().is_some_and(|l| *l > item) {
                            continue;
                        }
                        let mut z2 = zk.clone();
                        z2.push(item);
                        next.push((z2, v.clone() * &a));
                    }
                }
                partial = next;
            }
            for (zk, v) in partial {
                *out.entry(zk).or_insert_with(|| F::zero(ctx)) += &v;
            }
        }
    }
    if F::EXACT {
        out.retain(|_, v| !v.is_zero());
    }
    out
}
