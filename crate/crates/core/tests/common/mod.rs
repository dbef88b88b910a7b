#![allow(dead_code)]

use ctd_core::bodies::{Body, GraphProfile};
use proptest::prelude::*;

/// One body per variant, plus the shapes named throughout the tests.
pub fn variants() -> Vec<(&'static str, Body)> {
    vec![
        ("simplex", Body::simplex()),
        ("triangle(2,1)", Body::triangle(2.0, 1.0).unwrap()),
        ("rect(1,2)", Body::rectangle(1.0, 2.0).unwrap()),
        ("lp(1/2)", Body::lp_ball(0.5).unwrap()),
        ("lp(2)", Body::lp_ball(2.0).unwrap()),
        ("lp(3)", Body::lp_ball(3.0).unwrap()),
        ("lp(inf)", Body::lp_ball(f64::INFINITY).unwrap()),
        ("graph(quarter disk)", quarter_disk(64)),
    ]
}

/// `C₂` as a sampled graph body.
pub fn quarter_disk(m: usize) -> Body {
    Body::graph(GraphProfile::from_fn(|x| (1.0 - x * x).max(0.0).sqrt(), 1.0, m).unwrap()).unwrap()
}

pub fn any_body() -> impl Strategy<Value = Body> {
    prop_oneof![
        Just(Body::simplex()),
        (0.2f64..5.0, 0.2f64..5.0).prop_map(|(a, b)| Body::triangle(a, b).unwrap()),
        (0.2f64..5.0, 0.2f64..5.0).prop_map(|(a, b)| Body::rectangle(a, b).unwrap()),
        (0.3f64..8.0).prop_map(|p| Body::lp_ball(p).unwrap()),
        Just(Body::lp_ball(f64::INFINITY).unwrap()),
        (1.0f64..4.0, 0.5f64..2.0).prop_map(|(q, b)| {
            let f = move |x: f64| b * (1.0 - (x / b).powf(q)).max(0.0).powf(1.0 / q);
            Body::graph(GraphProfile::from_fn(f, b, 32).unwrap()).unwrap()
        }),
    ]
}

/// Tanh-sinh nodes and weights on `(0, 1)`; the double-exponential decay at
/// the ends absorbs logarithmic and algebraic endpoint behaviour.
fn tanh_sinh(h: f64, kmax: i32) -> Vec<(f64, f64)> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    (-kmax..=kmax)
        .map(|k| {
            let t = k as f64 * h;
            let u = half_pi * t.sinh();
            let x = 0.5 * (1.0 + u.tanh());
            let w = 0.5 * h * half_pi * t.cosh() / u.cosh().powi(2);
            (x, w)
        })
        .filter(|&(x, w)| x > 0.0 && x < 1.0 && w > 0.0)
        .collect()
}

/// `∫ u ln u du`.
fn g(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        0.5 * u * u * u.ln() - 0.25 * u * u
    }
}

/// `ln δ_{C_p}(𝔹)` computed independently of the library: the inner `dy`
/// integral of `ln τ` in closed form, the outer `dx` integral and `M_C` by
/// tanh-sinh on each side of the diagonal point of the body.
pub fn oracle_log_delta_ball(p: f64) -> f64 {
    let f = |x: f64| {
        if p.is_infinite() {
            1.0
        } else {
            (1.0 - x.powf(p)).max(0.0).powf(1.0 / p)
        }
    };
    let inner = |x: f64| {
        let h = f(x);
        let xlx = if x == 0.0 { 0.0 } else { x * x.ln() };
        0.5 * (h * xlx + g(h) - (g(x + h) - g(x)))
    };
    let moment = |x: f64| {
        let h = f(x);
        x * h + 0.5 * h * h
    };
    let split = if p.is_infinite() { 0.5 } else { 0.5f64.powf(1.0 / p) };
    let nodes = tanh_sinh(1.0 / 64.0, 256);
    let mut num = 0.0;
    let mut den = 0.0;
    for (lo, hi) in [(0.0, split), (split, 1.0)] {
        for &(t, w) in &nodes {
            let x = lo + (hi - lo) * t;
            num += w * (hi - lo) * inner(x);
            den += w * (hi - lo) * moment(x);
        }
    }
    num / den
}

/// `(1 − 4 ln 2)/6`, the square's value and the `p → ∞` limit.
pub fn square_log_delta() -> f64 {
    (1.0 - 4.0 * std::f64::consts::LN_2) / 6.0
}

/// `ln(√2 (√2 − 1)^{1/√2})`.
pub fn quarter_disk_log_delta() -> f64 {
    let s = std::f64::consts::SQRT_2;
    s.ln() + (s - 1.0).ln() / s
}
