//! The bundled corpus run through every invariant, with per-check timing.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use crate::algebra::{Prec, Scalar, C, Q};
use crate::curve::CurveConfig;
use crate::potentials::{self, gaussian_moment};
use crate::recursion::{self, Label, OmegaTable, RecursionConfig};
use crate::toric::counts;

pub const AIRY: &str = include_str!("../../data/airy.json");
pub const C3_F1: &str = include_str!("../../data/c3_f1.json");
pub const C3_F2: &str = include_str!("../../data/c3_f2.json");
pub const CONIFOLD_F1: &str = include_str!("../../data/conifold_f1.json");
pub const CONIFOLD_F2: &str = include_str!("../../data/conifold_f2.json");
pub const CONIFOLD_EXACT: &str = include_str!("../../data/conifold_exact.json");
pub const C3_Z3: &str = include_str!("../../data/c3_z3.json");
pub const LOCAL_P2: &str = include_str!("../../data/local_p2.json");

/// `(name, config text)` for every bundled curve.
pub fn corpus() -> Vec<(&'static str, &'static str)> {
    vec![
        ("airy", AIRY),
        ("c3_f1", C3_F1),
        ("c3_f2", C3_F2),
        ("conifold_f1", CONIFOLD_F1),
        ("conifold_f2", CONIFOLD_F2),
        ("conifold_exact", CONIFOLD_EXACT),
        ("c3_z3", C3_Z3),
        ("local_p2", LOCAL_P2),
    ]
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SelftestOptions {
    pub flip_kernel_sign: bool,
    pub precision: u32,
    /// Print one line per check to stderr as it finishes.
    pub verbose: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            flip_kernel_sign: false,
            precision: 256,
            verbose: false,
        }
    }
}

type CheckResult = Result<String, String>;

fn exact(text: &str, flip: bool) -> Result<OmegaTable<Q>, String> {
    let cfg = CurveConfig::from_str(text).map_err(|e| e.to_string())?;
    let curve = cfg.build::<Q>(&()).map_err(|e| e.to_string())?;
    Ok(OmegaTable::new(
        curve,
        RecursionConfig {
            flip_kernel_sign: flip,
            check_tolerance: 0.0,
            ..RecursionConfig::default()
        },
    ))
}

fn numeric(text: &str, bits: u32, flip: bool) -> Result<OmegaTable<C>, String> {
    let cfg = CurveConfig::from_str(text).map_err(|e| e.to_string())?;
    let curve = cfg.build::<C>(&Prec(bits)).map_err(|e| e.to_string())?;
    Ok(OmegaTable::new(
        curve,
        RecursionConfig {
            flip_kernel_sign: flip,
            check_tolerance: RecursionConfig::tolerance_for_bits(bits),
            ..RecursionConfig::default()
        },
    ))
}

fn key(js: &[u32]) -> Vec<Label> {
    js.iter().map(|&j| (0usize, j)).collect()
}

/// Airy `ω_{g,n}` principal parts: `2^{-(2g-2+n)} ⟨Π τ_{dᵢ}⟩ Π (2dᵢ+1)!!` on
/// `Π dzᵢ/zᵢ^{2dᵢ+2}`, from tabulated intersection numbers.
pub fn airy_reference() -> Vec<((u32, u32), Vec<Label>, Q)> {
    vec![
        ((0, 3), key(&[2, 2, 2]), Q::new(1, 2)),
        ((1, 1), key(&[4]), Q::new(1, 16)),
        ((0, 4), key(&[2, 2, 2, 4]), Q::new(3, 4)),
        ((1, 2), key(&[2, 6]), Q::new(5, 32)),
        ((1, 2), key(&[4, 4]), Q::new(3, 32)),
        ((2, 1), key(&[10]), Q::new(105, 1024)),
    ]
}

fn check_identity_chain() -> CheckResult {
    let mut n = 0;
    for (name, text) in corpus() {
        let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let Some(d) = v.get("diagram") else { continue };
        let d = crate::toric::DiagramInput::from_json(d)
            .and_then(|d| d.validate())
            .map_err(|e| format!("{name}: {e}"))?;
        let c = counts(&d).map_err(|e| format!("{name}: {e}"))?;
        if c.chi != d.area2() {
            return Err(format!("{name}: chi != 2 Area"));
        }
        n += 1;
    }
    Ok(format!("{n} diagrams"))
}

fn check_ramification(bits: u32) -> CheckResult {
    let mut seen = Vec::new();
    for f in 1..=3 {
        let t = exact(&C3_F1.replace("\"framing\": 1", &format!("\"framing\": {f}")), false)?;
        let want = t.curve.expected_ramification().unwrap_or(-1);
        if t.points() as i64 != want || want != 1 {
            return Err(format!("C3 f={f}: {} points, expected {want}", t.points()));
        }
        seen.push(format!("c3 f={f}: {}", t.points()));
    }
    for text in [CONIFOLD_F1, CONIFOLD_F2] {
        let t = numeric(text, bits, false)?;
        if t.points() != 2 {
            return Err(format!("conifold: {} points, expected 2", t.points()));
        }
        seen.push(format!("conifold f={}: 2", t.curve.framing));
    }
    for text in [C3_F1, CONIFOLD_F1] {
        let cfg = CurveConfig::from_str(&text.replace("\"framing\": 1", "\"framing\": 0")).map_err(|e| e.to_string())?;
        match cfg.build::<C>(&Prec(bits)) {
            Err(e) if e.kind() == "DegenerateFraming" => {}
            other => return Err(format!("framing 0 gave {:?}", other.map(|c| c.critical.len()))),
        }
    }
    seen.push("f=0 degenerate".into());
    Ok(seen.join(", "))
}

fn check_airy(flip: bool) -> CheckResult {
    let mut t = exact(AIRY, flip)?;
    for ((g, n), k, want) in airy_reference() {
        let pp = t.principal_parts(g, n).map_err(|e| e.to_string())?;
        let got = pp.get(&k).cloned().unwrap_or(Q::new(0, 1));
        if got != want {
            return Err(format!("ω_{{{g},{n}}}{k:?} = {got}, expected {want}"));
        }
    }
    Ok("ω03 ω11 ω04 ω12 ω21".into())
}

fn structure<F: Scalar>(t: &mut OmegaTable<F>, max_chi: i64) -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut n_forms = 0;
    for chi in 1..=max_chi {
        for g in 0..=(chi as u32 + 2) / 2 {
            let n = chi + 2 - 2 * g as i64;
            if n < 1 {
                continue;
            }
            let f = t.omega(g, n as u32).map_err(|e| e.to_string())?;
            let r = &f.report;
            worst = worst
                .max(r.symmetry_max_deviation)
                .max(r.parity_max)
                .max(r.pole_max)
                .max(r.residue_max)
                .max(r.degree_max);
            n_forms += 1;
        }
    }
    Ok(format!("{n_forms} forms, worst defect {worst:e}"))
}

fn check_framing_c3(flip: bool) -> CheckResult {
    let mut a = exact(C3_F1, flip)?;
    let mut b = exact(C3_F2, flip)?;
    let mut out = Vec::new();
    for g in [2, 3] {
        let fa = recursion::free_energy(&mut a, g).map_err(|e| e.to_string())?;
        let fb = recursion::free_energy(&mut b, g).map_err(|e| e.to_string())?;
        if fa != fb {
            return Err(format!("F{g}: {fa} vs {fb}"));
        }
        out.push(format!("F{g} = {fa}"));
    }
    Ok(out.join(", "))
}

fn check_framing_conifold(bits: u32) -> CheckResult {
    let mut a = numeric(CONIFOLD_F1, bits, false)?;
    let mut b = numeric(CONIFOLD_F2, bits, false)?;
    let tol = 10f64.powf(-30.0 * bits as f64 / 256.0);
    let mut worst: f64 = 0.0;
    for g in [2, 3] {
        let fa = recursion::free_energy(&mut a, g).map_err(|e| e.to_string())?;
        let fb = recursion::free_energy(&mut b, g).map_err(|e| e.to_string())?;
        let d = (fa - &fb).norm();
        worst = worst.max(d);
        if d > tol {
            return Err(format!("F{g} differs by {d:e}"));
        }
    }
    Ok(format!("max difference {worst:e}"))
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn check_disk() -> CheckResult {
    let t = exact(C3_F1, false)?;
    let p = potentials::disk_potential(&t.curve, 8).map_err(|e| e.to_string())?;
    let s = &p.components[&vec![0]];
    for d in 1..=8i64 {
        let want = Q::new(-binomial(2 * d - 1, d - 1), d * d);
        let got = s.get(&[d as u32]).cloned().unwrap_or(Q::new(0, 1));
        if got != want {
            return Err(format!("X^{d}: {got}, expected {want}"));
        }
    }
    Ok("C3 f=1 through X^8".into())
}

/// The conifold disk at small `q` approaches the `C³` disk at the same framing.
pub fn conifold_degeneration(bits: u32, q: &str, degree: u32) -> Result<f64, String> {
    let text = CONIFOLD_F1.replace("\"1/10\"", &format!("\"{q}\""));
    let t = numeric(&text, bits, false)?;
    let p = potentials::disk_potential(&t.curve, degree).map_err(|e| e.to_string())?;
    let s = &p.components[&vec![0]];
    let mut worst: f64 = 0.0;
    for d in 1..=degree as i64 {
        let want = -(binomial(2 * d - 1, d - 1) as f64) / (d * d) as f64;
        let got = s.get(&[d as u32]).map(|c| c.to_f64_pair().0).unwrap_or(0.0);
        worst = worst.max((got - want).abs());
    }
    Ok(worst)
}

fn check_degeneration(bits: u32) -> CheckResult {
    let dev = conifold_degeneration(bits, "1/100000000", 6)?;
    if dev > 1e-5 {
        return Err(format!("deviation {dev:e} at q = 1e-8"));
    }
    Ok(format!("deviation {dev:e} at q = 1e-8"))
}

fn check_annulus() -> CheckResult {
    let t = exact(C3_F1, false)?;
    let (_, rep) = potentials::annulus_potential(&t.curve, 6).map_err(|e| e.to_string())?;
    if rep.max_residual != 0.0 {
        return Err(format!("residual {:e}", rep.max_residual));
    }
    Ok(format!("{} degrees", rep.diagonal_poles[&0].len()))
}

fn check_laplace(flip: bool) -> CheckResult {
    if gaussian_moment::<Q>(0, &()) != Q::new(1, 1) || !gaussian_moment::<Q>(1, &()).is_zero() {
        return Err("Gaussian moments".into());
    }
    let mut t = exact(AIRY, flip)?;
    let l = potentials::laplace_transform(&mut t, 1, 1, 6).map_err(|e| e.to_string())?;
    let got = l.points[0].terms.get(&vec![-3]).cloned().unwrap_or(Q::new(0, 1));
    if got != Q::new(1, 12) || l.points[0].terms.len() != 1 {
        return Err(format!("Airy ω11 transform {got}"));
    }
    Ok("√π (-z)^(1/2), odd moments, Airy ω11".into())
}

fn check_determinism() -> CheckResult {
    let mut count = 0;
    for text in [AIRY, C3_F1] {
        let mut a = exact(text, false)?;
        let mut b = exact(text, false)?;
        b.config.order_offset = 8;
        for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)] {
            let pa = a.principal_parts(g, n).map_err(|e| e.to_string())?;
            let pb = b.principal_parts(g, n).map_err(|e| e.to_string())?;
            if pa != pb {
                return Err(format!("ω_{{{g},{n}}} changed at K+8"));
            }
            count += pa.len();
        }
    }
    Ok(format!("{count} coefficients"))
}

fn check_periods() -> CheckResult {
    let t = exact(C3_F1, false)?;
    let n = t.curve.punctures().map_err(|e| e.to_string())?.len();
    for i in 0..n {
        let p = potentials::a_period(&t.curve, i).map_err(|e| e.to_string())?;
        if !p.single_valued.is_zero() {
            return Err(format!("puncture {i}: single-valued part {}", p.single_valued));
        }
    }
    Ok(format!("{n} punctures"))
}

fn check_orbifold(bits: u32) -> CheckResult {
    let mut t = numeric(C3_Z3, bits, false)?;
    let branes = t.curve.brane_punctures(6).map_err(|e| e.to_string())?;
    if branes.len() != 3 {
        return Err(format!("{} brane branches", branes.len()));
    }
    let s = structure(&mut t, 2)?;
    let d = potentials::disk_potential(&t.curve, 4).map_err(|e| e.to_string())?;
    Ok(format!("{} disk components, {s}", d.components.len()))
}

fn timed(name: &str, verbose: bool, f: impl FnOnce() -> CheckResult) -> CheckOutcome {
    let t0 = Instant::now();
    let r = f();
    let elapsed = t0.elapsed();
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if verbose {
        eprintln!(
            "[{}] {name} ({:.1} ms) {detail}",
            if passed { "pass" } else { "FAIL" },
            elapsed.as_secs_f64() * 1e3
        );
    }
    CheckOutcome {
        name: name.to_string(),
        passed,
        detail,
        elapsed,
    }
}

fn numeric_suite(bits: u32) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    let r = numeric(CONIFOLD_F1, bits, false).and_then(|mut t| structure(&mut t, 4));
    out.push(("structure.conifold_f1".to_string(), r.is_ok()));
    out.push(("framing.conifold".to_string(), check_framing_conifold(bits).is_ok()));
    out.push(("orbifold.c3_z3".to_string(), check_orbifold(bits).is_ok()));
    out
}

pub fn run(opts: &SelftestOptions) -> Vec<CheckOutcome> {
    let flip = opts.flip_kernel_sign;
    let bits = opts.precision;
    let v = opts.verbose;
    let mut out = vec![
        timed("toric.identity_chain", v, check_identity_chain),
        timed("curve.ramification_count", v, || check_ramification(bits)),
        timed("recursion.airy_oracle", v, || check_airy(flip)),
        timed("recursion.structure.c3_f1", v, || exact(C3_F1, flip).and_then(|mut t| structure(&mut t, 4))),
        timed("recursion.structure.conifold_exact", v, || {
            exact(CONIFOLD_EXACT, flip).and_then(|mut t| structure(&mut t, 3))
        }),
        timed("recursion.structure.conifold_f1", v, || {
            numeric(CONIFOLD_F1, bits, flip).and_then(|mut t| structure(&mut t, 4))
        }),
        timed("free_energy.framing.c3", v, || check_framing_c3(flip)),
        timed("free_energy.framing.conifold", v, || check_framing_conifold(bits)),
        timed("potentials.disk.c3_f1", v, check_disk),
        timed("potentials.disk.conifold_degeneration", v, || check_degeneration(bits)),
        timed("potentials.annulus.diagonal", v, check_annulus),
        timed("potentials.laplace", v, || check_laplace(flip)),
        timed("potentials.period.c3", v, check_periods),
        timed("orbifold.c3_z3", v, || check_orbifold(bits)),
        timed("determinism.k_plus_8", v, check_determinism),
    ];
    out.push(timed("precision.sweep_128_256", v, || {
        let a = numeric_suite(128);
        let b = numeric_suite(256);
        if a == b {
            Ok(format!("{} identical verdicts", a.len()))
        } else {
            Err(format!("128 bits: {a:?}, 256 bits: {b:?}"))
        }
    }));
    out
}

pub fn report_json(report: &[CheckOutcome]) -> Value {
    let checks: Vec<Value> = report
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
                "ms": format!("{:.3}", c.elapsed.as_secs_f64() * 1e3),
            })
        })
        .collect();
    let passed = report.iter().filter(|c| c.passed).count();
    let by_status: BTreeMap<&str, usize> =
        [("passed", passed), ("failed", report.len() - passed)].into_iter().collect();
    json!({"checks": checks, "summary": by_status})
}
