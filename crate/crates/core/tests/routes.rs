mod common;

use std::f64::consts::{FRAC_PI_3, PI};

use common::{oracle_log_delta_ball, quarter_disk, quarter_disk_log_delta, square_log_delta};
use ctd_core::bodies::Body;
use ctd_core::compacta::{CircledSet2, ModulusCurve};
use ctd_core::formulas::{
    delta_ball_beta, delta_ball_gamma, delta_chebyshev, delta_product_general, DeltaResult, GammaForm,
};
use ctd_core::numerics::{integrate_1d, integrate_body, integrate_graph_region, log_gamma, QuadratureRule};

fn rule() -> QuadratureRule {
    QuadratureRule::default()
}

fn half_log_two_pi() -> f64 {
    0.5 * (2.0 * PI).ln()
}

fn cheb(body: &Body) -> DeltaResult {
    delta_chebyshev(body, &CircledSet2::unit_ball(), &rule()).unwrap()
}

#[test]
fn raabe_integral() {
    let v = integrate_1d(|z| log_gamma(z).unwrap(), 0.0, 1.0, &rule()).unwrap().value;
    assert!((v - half_log_two_pi()).abs() <= 1e-9, "{v}");
}

#[test]
fn shifted_raabe_integrals() {
    for x in [0.25f64, 1.0, 3.0] {
        let v = integrate_1d(|z| log_gamma(x + z).unwrap(), 0.0, 1.0, &rule()).unwrap().value;
        let want = x * (x.ln() - 1.0) + half_log_two_pi();
        assert!((v - want).abs() <= 1e-9, "x={x}: {v} vs {want}");
    }
}

#[test]
fn body_integral_is_additive() {
    let ball = CircledSet2::unit_ball();
    let phis: [Box<dyn Fn(f64, f64) -> f64>; 3] =
        [Box::new(|x, y| ball.log_tau(x, y)), Box::new(|x, y| x * (x + y).ln()), Box::new(|x, y| (x * y).sqrt() + 1.0)];
    for phi in &phis {
        let top = |x: f64| 1.0 - x;
        let whole = integrate_body(&Body::simplex(), phi, &rule()).unwrap().value;
        let left = integrate_graph_region(top, &[0.0, 0.5], phi, &rule()).unwrap().value;
        let right = integrate_graph_region(top, &[0.5, 1.0], phi, &rule()).unwrap().value;
        assert!((left + right - whole).abs() <= 1e-10, "{} vs {whole}", left + right);
    }
}

#[test]
fn ball_routes_agree() {
    let cases = [
        ("simplex", Body::simplex(), -0.25),
        ("square", Body::rectangle(1.0, 1.0).unwrap(), square_log_delta()),
        ("quarter disk", Body::lp_ball(2.0).unwrap(), quarter_disk_log_delta()),
    ];
    for (name, body, target) in cases {
        let c = cheb(&body);
        let g = delta_ball_gamma(&body, &rule(), GammaForm::Gamma).unwrap();
        let r = delta_ball_gamma(&body, &rule(), GammaForm::Raabe).unwrap();
        assert!((c.log_delta - g.log_delta).abs() <= 1e-6, "{name}: {} vs {}", c.log_delta, g.log_delta);
        assert!((g.log_delta - r.log_delta).abs() <= 1e-9, "{name}: {} vs {}", g.log_delta, r.log_delta);
        assert!((r.log_delta - target).abs() <= 1e-8, "{name}: {} vs {target}", r.log_delta);
        for res in [c, g, r] {
            assert!(res.residual < 1e-8, "{name}: residual {}", res.residual);
            assert_eq!(res.delta, res.log_delta.exp());
        }
    }
}

#[test]
fn sampled_quarter_disk_matches_beta_route() {
    let beta = delta_ball_beta(2.0, &rule()).unwrap();
    let g = delta_ball_gamma(&quarter_disk(200), &rule(), GammaForm::Gamma).unwrap();
    assert!((g.log_delta - beta.log_delta).abs() <= 1e-6, "{} vs {}", g.log_delta, beta.log_delta);
}

#[test]
fn nonconvex_body_routes_agree() {
    let body = Body::lp_ball(0.5).unwrap();
    let c = cheb(&body);
    let g = delta_ball_gamma(&body, &rule(), GammaForm::Gamma).unwrap();
    let oracle = oracle_log_delta_ball(0.5);
    assert!((c.log_delta - g.log_delta).abs() <= 1e-6);
    assert!((c.log_delta - oracle).abs() <= 1e-8, "{} vs oracle {oracle}", c.log_delta);
}

#[test]
fn beta_route_matches_oracle_across_p() {
    for p in [0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, f64::INFINITY] {
        let b = delta_ball_beta(p, &rule()).unwrap();
        let oracle = oracle_log_delta_ball(p);
        assert!((b.log_delta - oracle).abs() <= 1e-8, "p={p}: {} vs {oracle}", b.log_delta);
        assert!(b.residual < 1e-8);
    }
}

#[test]
fn delta_is_scale_invariant() {
    let bodies = [Body::simplex(), Body::triangle(2.0, 1.0).unwrap(), Body::lp_ball(2.0).unwrap(), quarter_disk(64)];
    for body in bodies {
        let base = cheb(&body).log_delta;
        for t in [0.5, 2.0, FRAC_PI_3] {
            let scaled = cheb(&body.scale(t).unwrap()).log_delta;
            assert!((scaled - base).abs() <= 1e-6, "t={t}: {scaled} vs {base}");
        }
    }
}

#[test]
fn p_sweep_is_lipschitz() {
    let ps: Vec<f64> = (0..=60).map(|i| 1.0 + 0.05 * i as f64).collect();
    let v: Vec<f64> = ps.iter().map(|&p| delta_ball_beta(p, &rule()).unwrap().log_delta).collect();
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            if ps[j] - ps[i] > 0.1 + 1e-12 {
                break;
            }
            assert!((v[j] - v[i]).abs() <= 0.2 * (ps[j] - ps[i]), "p={} q={}", ps[i], ps[j]);
        }
    }
}

#[test]
fn p_sweep_tends_to_square_value() {
    let v = delta_ball_beta(64.0, &rule()).unwrap().log_delta;
    assert!((v - square_log_delta()).abs() <= 5e-3, "{v}");
}

#[test]
fn symmetric_bodies_collapse_to_geometric_mean() {
    for p in [0.5, 1.0, 2.0, 3.0, f64::INFINITY] {
        let body = Body::lp_ball(p).unwrap();
        for (de, df) in [(4.0, 1.0), (0.3, 7.0), (1.0, 1.0)] {
            let r = delta_product_general(&body, de, df).unwrap();
            assert!((r.delta - (de * df).sqrt()).abs() <= 1e-12, "p={p}");
        }
    }
}

fn curve(r1: Vec<f64>, h: Vec<f64>) -> CircledSet2 {
    CircledSet2::ModulusCurve(ModulusCurve::new(r1, h).unwrap())
}

#[test]
fn flat_curve_matches_polydisk() {
    let flat = curve(vec![0.0, 0.5, 2.0], vec![0.7, 0.7, 0.7]);
    let poly = CircledSet2::polydisk(2.0, 0.7).unwrap();
    for (name, body) in common::variants() {
        let a = delta_chebyshev(&body, &flat, &rule()).unwrap();
        let b = delta_chebyshev(&body, &poly, &rule()).unwrap();
        assert!((a.log_delta - b.log_delta).abs() <= 1e-10, "{name}: {} vs {}", a.log_delta, b.log_delta);
    }
}

#[test]
fn sampled_sphere_curve_approaches_ball() {
    let m = 4096;
    let r1: Vec<f64> = (0..=m).map(|k| k as f64 / m as f64).collect();
    let h = r1.iter().map(|x| (1.0 - x * x).max(0.0).sqrt()).collect();
    let sampled = curve(r1, h);
    for body in [Body::simplex(), Body::lp_ball(2.0).unwrap(), Body::triangle(2.0, 1.0).unwrap()] {
        let a = delta_chebyshev(&body, &sampled, &rule()).unwrap().log_delta;
        let b = cheb(&body).log_delta;
        // an inscribed polygon: slightly smaller, within the sampling error
        assert!(a <= b + 1e-12 && b - a <= 1e-6, "{a} vs {b}");
    }
}
