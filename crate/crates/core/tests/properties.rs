//! Randomized invariants, each checked against a route that does not share
//! the code under test.

mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;

use remodel::algebra::{LaurentSeries, Q};
use remodel::cli::selftest::{AIRY, C3_F1};
use remodel::curve::CurveConfig;
use remodel::potentials::{annulus_potential, disk_potential, gaussian_moment};
use remodel::recursion::{OmegaTable, RecursionConfig};
use remodel::toric::{counts, validate_diagram};

fn c3(f: i64) -> OmegaTable<Q> {
    let text = C3_F1.replace("\"framing\": 1", &format!("\"framing\": {f}"));
    let curve = CurveConfig::from_str(&text).unwrap().build::<Q>(&()).unwrap();
    OmegaTable::new(curve, RecursionConfig::default())
}

fn series(val: i64, coeffs: &[(i64, i64)], order: i64) -> LaurentSeries<Q> {
    LaurentSeries::from_coeffs(val, coeffs.iter().map(|&(a, b)| Q::new(a, b)).collect(), order, &())
}

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-9i64..=9, 1i64..=7)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn lattice_counts_agree_with_pick(pts in proptest::collection::vec((-3i64..=3, -3i64..=3), 3..8), fine in any::<bool>()) {
        let h = hull(&pts);
        prop_assume!(h.len() >= 3);
        let (interior, boundary, area2, _) = pick_data(&h);
        let tris = if fine {
            let mut extra = Vec::new();
            for x in -3..=3 {
                for y in -3..=3 {
                    let inside = (0..h.len()).all(|i| {
                        let (a, b) = (h[i], h[(i + 1) % h.len()]);
                        (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0) >= 0
                    });
                    if inside && !h.contains(&(x, y)) {
                        extra.push((x, y));
                    }
                }
            }
            split_triangulation(&h, &extra)
        } else {
            split_triangulation(&h, &[])
        };
        let d = validate_diagram(&h, &tris).unwrap();
        let c = counts(&d).unwrap();
        prop_assert_eq!(c.fg, interior);
        prop_assert_eq!(c.fn_, boundary);
        prop_assert_eq!(c.chi, area2);
        prop_assert_eq!(2 * c.fg - 2 + c.fn_, 1 + c.p + c.s + c.fg);
        if fine {
            prop_assert!(d.is_unimodular());
            prop_assert_eq!(tris.len() as i64, area2);
        }
    }

    #[test]
    fn log_exp_round_trip(cs in proptest::collection::vec(small_rational(), 1..8)) {
        let mut c = cs.clone();
        c[0] = (1, 1);
        let s = series(0, &c, 8);
        let (c0, l) = s.log().unwrap();
        prop_assert_eq!(c0, Q::new(1, 1));
        prop_assert_eq!(l.exp().unwrap(), s);
    }

    #[test]
    fn reversion_inverts_composition(lead in (1i64..=5, 1i64..=3), rest in proptest::collection::vec(small_rational(), 0..6)) {
        let mut c = vec![lead];
        c.extend(rest);
        let f = series(1, &c, 8);
        let g = f.reversion().unwrap();
        let id = f.compose(&g).unwrap();
        for k in 0..id.order() {
            let want = if k == 1 { Q::new(1, 1) } else { Q::new(0, 1) };
            prop_assert_eq!(id.coeff(k).unwrap(), want);
        }
    }

    #[test]
    fn airy_values_match_oracle(zs in proptest::collection::vec((1i64..=20, 1i64..=9, any::<bool>()), 4)) {
        let mut oracle = AiryOracle::default();
        let curve = CurveConfig::from_str(AIRY).unwrap().build::<Q>(&()).unwrap();
        let mut t = OmegaTable::new(curve, RecursionConfig::default());
        let pts: Vec<(Q, R)> = zs.iter().map(|&(a, b, s)| {
            let a = if s { a } else { -a };
            (Q::new(a, b), r(a, b))
        }).collect();
        for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)] {
            let z: Vec<Q> = pts[..n as usize].iter().map(|p| p.0.clone()).collect();
            let got = from_q(&t.evaluate(g, n, &z).unwrap());
            let mut want = R::zero();
            for (e, c) in oracle.omega(g, n) {
                let mut term = c.clone();
                for (i, &k) in e.iter().enumerate() {
                    term /= num_traits::pow(pts[i].1.clone(), k as usize);
                }
                want += term;
            }
            prop_assert_eq!(got, want, "ω_{{{},{}}}", g, n);
        }
    }

    #[test]
    fn omega_is_symmetric(zs in proptest::collection::vec((1i64..=30, 1i64..=11), 4), rot in 1usize..4) {
        let mut t = c3(1);
        let z: Vec<Q> = zs.iter().map(|&(a, b)| Q::new(a, b)).collect();
        // stay off the ramification point -1/2
        prop_assume!(z.iter().all(|p| *p != Q::new(-1, 2)));
        let mut w = z.clone();
        w.rotate_left(rot);
        prop_assert_eq!(t.evaluate(0, 4, &z).unwrap(), t.evaluate(0, 4, &w).unwrap());
        prop_assert_eq!(t.evaluate(1, 2, &z[..2]).unwrap(), t.evaluate(1, 2, &[z[1].clone(), z[0].clone()]).unwrap());
    }

    #[test]
    fn gaussian_moment_recurrence(k in -6i64..=8) {
        let m = 2 * k;
        let lhs = from_q(&gaussian_moment::<Q>(m + 2, &()));
        let rhs = from_q(&gaussian_moment::<Q>(m, &())) * r(m + 1, 2);
        prop_assert_eq!(lhs, rhs);
        prop_assert!(from_q(&gaussian_moment::<Q>(m + 1, &())).is_zero());
    }
}

#[test]
fn disk_matches_direct_integration_across_framings() {
    for f in [1, 2, 3, -2] {
        let t = c3(f);
        let p = disk_potential(&t.curve, 6).unwrap();
        let s = &p.components[&vec![0]];
        let want = disk_series(&R::zero(), f, 6);
        for d in 1..=6u32 {
            let got = s.get(&[d]).map(from_q).unwrap_or_else(R::zero);
            assert_eq!(got, want[d as usize - 1], "f = {f}, X^{d}");
        }
    }
}

#[test]
fn annulus_matches_log_difference_across_framings() {
    for f in [1, 2, 3] {
        let t = c3(f);
        let (p, rep) = annulus_potential(&t.curve, 4).unwrap();
        assert_eq!(rep.max_residual, 0.0);
        let s = &p.components[&vec![0, 0]];
        assert_eq!(s.permuted(&[1, 0]), *s);
        let want = annulus_series(&R::zero(), f, 4);
        for i in 1..=4u32 {
            for j in 1..=4u32 {
                let got = s.get(&[i, j]).map(from_q).unwrap_or_else(R::zero);
                let w = want.get(&(i as usize, j as usize)).cloned().unwrap_or_else(R::zero);
                assert_eq!(got, w, "f = {f}, X1^{i} X2^{j}");
            }
        }
    }
}

#[test]
fn conifold_disk_matches_direct_integration() {
    let text = remodel::cli::selftest::CONIFOLD_EXACT;
    let curve = CurveConfig::from_str(text).unwrap().build::<Q>(&()).unwrap();
    let p = disk_potential(&curve, 6).unwrap();
    let s = &p.components[&vec![0]];
    let f = curve.framing;
    let want = disk_series(&r(3, 4), f, 6);
    for d in 1..=6u32 {
        assert_eq!(s.get(&[d]).map(from_q).unwrap_or_else(R::zero), want[d as usize - 1], "X^{d}");
    }
}

#[test]
fn oracle_reproduces_intersection_numbers() {
    // ⟨τ₀³⟩ = 1, ⟨τ₁⟩ = 1/24, ⟨τ₄⟩₂ = 1/1152 in the normalization of the forms
    let mut o = AiryOracle::default();
    assert_eq!(o.omega(0, 3)[&vec![2, 2, 2]], r(1, 2));
    assert_eq!(o.omega(1, 1)[&vec![4]], r(1, 16));
    assert_eq!(o.omega(2, 1)[&vec![10]], r(1, 1152) * r(945, 8));
    assert!(o.omega(0, 3).values().all(|c| !c.is_zero()));
}
