mod common;

use common::{any_body, variants};
use ctd_core::bodies::{Body, MultiIndex2};
use ctd_core::compacta::{
    shilov_candidates, sup_norm_monomial, tau_circled, CircledSet2, Compact2, ModulusCurve, PlanarCompact, ProductSet,
};
use ctd_core::formulas::{delta_product_triangle, rumely_log_delta};
use ctd_core::vandermonde::{basis, fekete_search, log_vdm, q_n_ball, MonomialBasis};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

/// Fitted once over the variant list for `n ≤ 64` (the 1×2 rectangle
/// attains it at `n = 1`) and frozen.
const EHRHART_K: f64 = 4.0;

#[test]
fn lattice_count_grows_like_area() {
    for (name, body) in variants() {
        let vol = body.moments().unwrap().vol;
        for n in 1..=64u32 {
            let d = body.enumerate_lattice(n).unwrap().len() as f64;
            let dev = (d - (n * n) as f64 * vol).abs();
            assert!(dev <= EHRHART_K * n as f64, "{name} n={n}: |d_n - n² vol| = {dev}");
        }
    }
}

#[test]
fn degree_sum_ratio_tends_to_a_c() {
    for (name, body) in variants() {
        let a_c = body.moments().unwrap().a_c;
        for n in [8u32, 16, 32, 64] {
            let b = basis(&body, n).unwrap();
            let ratio = b.l_n as f64 / (n as f64 * b.d_n as f64);
            assert!((ratio - a_c).abs() <= 2.0 / (n as f64).sqrt(), "{name} n={n}: {ratio} vs {a_c}");
        }
    }
}

#[test]
fn face_integrals_sum_to_m_c() {
    for (name, body) in variants() {
        let m = body.moments().unwrap();
        let rel = (m.face_a + m.face_b - m.m_c).abs() / m.m_c;
        assert!(rel <= 1e-9, "{name}: {rel}");
    }
}

#[test]
fn q_n_per_cube_settles() {
    let s = Body::simplex();
    let v: Vec<f64> = [100u32, 200, 400].iter().map(|&n| q_n_ball(&s, n).unwrap() / (n as f64).powi(3)).collect();
    let (d1, d2) = ((v[1] - v[0]).abs(), (v[2] - v[1]).abs());
    assert!(d2 < d1, "{v:?}");
}

#[test]
fn greedy_beats_random_subsets() {
    let torus =
        Compact2::Product(ProductSet::new(PlanarCompact::disk(2.0).unwrap(), PlanarCompact::disk(0.5).unwrap()));
    let cands = shilov_candidates(&torus, 12).unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    for body in [Body::simplex(), Body::triangle(2.0, 1.0).unwrap()] {
        for n in [1u32, 2, 3] {
            let greedy = fekete_search(&cands, &body, n).unwrap();
            let b = basis(&body, n).unwrap();
            for _ in 0..100 {
                let pick: Vec<_> = cands.choose_multiple(&mut rng, b.d_n).copied().collect();
                let v = log_vdm(&pick, &b).unwrap();
                assert!(greedy.log_vdm >= v - 1e-12, "n={n}: random {v} > greedy {}", greedy.log_vdm);
            }
        }
    }
}

#[test]
fn log_vdm_ignores_ordering() {
    let torus =
        Compact2::Product(ProductSet::new(PlanarCompact::disk(1.0).unwrap(), PlanarCompact::disk(1.5).unwrap()));
    let cands = shilov_candidates(&torus, 8).unwrap();
    let body = Body::lp_ball(2.0).unwrap();
    let b = basis(&body, 2).unwrap();
    let mut rng = StdRng::seed_from_u64(11);
    let pts: Vec<_> = cands.choose_multiple(&mut rng, b.d_n).copied().collect();
    let base = log_vdm(&pts, &b).unwrap();
    assert!(base.is_finite());
    for _ in 0..50 {
        let mut p = pts.clone();
        p.shuffle(&mut rng);
        let mut indices = b.indices.clone();
        indices.shuffle(&mut rng);
        let shuffled = MonomialBasis { indices, ..b.clone() };
        let v = log_vdm(&p, &shuffled).unwrap();
        assert!((v - base).abs() <= 1e-10, "{v} vs {base}");
    }
}

#[test]
fn rumely_matches_product_triangle() {
    let mut rng = StdRng::seed_from_u64(3);
    use rand::Rng;
    for _ in 0..1000 {
        let a: f64 = rng.gen_range(0.1..10.0);
        let b: f64 = rng.gen_range(0.1..10.0);
        let re: f64 = rng.gen_range(-3.0..3.0);
        let rf: f64 = rng.gen_range(-3.0..3.0);
        let lhs = rumely_log_delta(a, b, re, rf);
        let rhs = delta_product_triangle(a, b, (-re).exp(), (-rf).exp()).unwrap().log_delta;
        assert!((lhs - rhs).abs() <= 1e-14 * (1.0 + rhs.abs()), "a={a} b={b}: {lhs} vs {rhs}");
    }
}

fn grid_probe() -> Vec<(f64, f64)> {
    (0..10).flat_map(|i| (0..10).map(move |j| (0.37 * i as f64, 0.53 * j as f64))).collect()
}

fn ball_or_curve() -> impl Strategy<Value = CircledSet2> {
    prop_oneof![
        (0.1f64..5.0).prop_map(|r| CircledSet2::ball(r).unwrap()),
        (0.1f64..5.0, 0.1f64..5.0).prop_map(|(a, b)| CircledSet2::polydisk(a, b).unwrap()),
        (0.3f64..3.0, 1.0f64..4.0).prop_map(|(r, q)| {
            let m = 200;
            let r1: Vec<f64> = (0..=m).map(|k| r * k as f64 / m as f64).collect();
            let h = r1.iter().map(|&x| r * (1.0 - (x / r).powf(q)).max(0.0).powf(1.0 / q)).collect();
            CircledSet2::ModulusCurve(ModulusCurve::new(r1, h).unwrap())
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_is_sorted_and_downward_closed(body in any_body(), n in 1u32..12) {
        let pts = body.enumerate_lattice(n).unwrap();
        prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(pts[0], MultiIndex2::new(0, 0));
        if body.is_lower_set() {
            for p in &pts {
                if p.j1 > 0 {
                    prop_assert!(pts.binary_search(&MultiIndex2::new(p.j1 - 1, p.j2)).is_ok());
                }
                if p.j2 > 0 {
                    prop_assert!(pts.binary_search(&MultiIndex2::new(p.j1, p.j2 - 1)).is_ok());
                }
            }
        }
    }

    #[test]
    fn scale_round_trip_keeps_gauge(body in any_body(), t in 0.1f64..10.0) {
        let back = body.scale(t).unwrap().scale(1.0 / t).unwrap();
        for (x, y) in grid_probe() {
            let (g0, g1) = (body.gauge(x, y).unwrap(), back.gauge(x, y).unwrap());
            prop_assert!((g0 - g1).abs() <= 1e-12 * g0.max(1.0), "({x},{y}): {g0} vs {g1}");
        }
    }

    #[test]
    fn gauge_is_homogeneous(body in any_body(), x in 0.0f64..5.0, y in 0.0f64..5.0, s in 0.1f64..10.0) {
        let g = body.gauge(x, y).unwrap();
        let gs = body.gauge(s * x, s * y).unwrap();
        prop_assert!((gs - s * g).abs() <= 1e-9 * gs.max(1.0));
    }

    #[test]
    fn face_integrals_sum_to_m_c_for_random_bodies(body in any_body()) {
        let m = body.moments().unwrap();
        prop_assert!((m.face_a + m.face_b - m.m_c).abs() <= 1e-9 * m.m_c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tau_scales_with_ball_radius(r in 0.05f64..20.0, t1 in 0.0f64..5.0, t2 in 0.0f64..5.0) {
        let unit = tau_circled(&CircledSet2::unit_ball(), (t1, t2));
        let scaled = tau_circled(&CircledSet2::ball(r).unwrap(), (t1, t2));
        let want = r.powf(t1 + t2) * unit;
        prop_assert!((scaled - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn monomial_sup_norm_root_is_tau(p in 1u32..6, q in 1u32..6, k in 1u32..8, r in 0.2f64..3.0) {
        // θ = (p, q)/den with α = kθ·den integral
        let ball = CircledSet2::ball(r).unwrap();
        let den = (p + q) as f64;
        let theta = (p as f64 / den, q as f64 / den);
        let scale = k * (p + q);
        let alpha = MultiIndex2::new(k * p, k * q);
        let norm = sup_norm_monomial(&Compact2::Circled(ball.clone()), alpha).unwrap();
        let root = norm.powf(1.0 / scale as f64);
        let tau = tau_circled(&ball, theta);
        prop_assert!((root - tau).abs() <= 1e-9 * tau);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn log_tau_is_midpoint_convex(
        k in ball_or_curve(),
        a in (0.0f64..3.0, 0.0f64..3.0),
        b in (0.0f64..3.0, 0.0f64..3.0),
    ) {
        let mid = k.log_tau(0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
        let avg = 0.5 * (k.log_tau(a.0, a.1) + k.log_tau(b.0, b.1));
        prop_assert!(mid <= avg + 1e-10, "mid {mid} avg {avg}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_points_have_unit_gauge(body in any_body(), u in 0.0f64..1.0) {
        let x = u * body.width();
        let y = body.profile(x);
        prop_assume!(x + y > 0.0);
        let g = body.gauge(x, y).unwrap();
        prop_assert!((g - 1.0).abs() <= 1e-12, "({x}, {y}): {g}");
    }
}
