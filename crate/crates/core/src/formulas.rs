//! Closed-form and quadrature evaluators for `δ_C(K)`.
//!
//! All routes report `ln δ` first; `delta` is derived from it.

use std::cell::Cell;
use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::bodies::{Body, BodyKind};
use crate::compacta::{green, robin_constant, CircledSet2, PlanarCompact};
use crate::numerics::special::ln_gamma_unchecked;
use crate::numerics::{integrate_1d, integrate_body, log_beta, Estimate, QuadratureRule};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    ChebyshevIntegral,
    ProductTriangle,
    ProductGeneral,
    BallBeta,
    BallGamma,
    Rumely,
}

impl Route {
    pub const ALL: [Route; 6] = [
        Route::ChebyshevIntegral,
        Route::ProductTriangle,
        Route::ProductGeneral,
        Route::BallBeta,
        Route::BallGamma,
        Route::Rumely,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Route::ChebyshevIntegral => "chebyshev-integral",
            Route::ProductTriangle => "product-triangle",
            Route::ProductGeneral => "product-general",
            Route::BallBeta => "ball-beta",
            Route::BallGamma => "ball-gamma",
            Route::Rumely => "rumely",
        }
    }

    pub fn from_label(s: &str) -> Option<Route> {
        Route::ALL.into_iter().find(|r| r.label() == s)
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaResult {
    pub route: Route,
    pub log_delta: f64,
    pub delta: f64,
    /// Quadrature error estimate in `log_delta`; zero for closed forms.
    pub residual: f64,
}

impl DeltaResult {
    fn new(route: Route, log_delta: f64, residual: f64) -> Self {
        Self { route, log_delta, delta: log_delta.exp(), residual }
    }
}

/// `ln δ_C(K) = (1/M_C) ∫∫_C ln τ(K, θ) dm(θ)`: the geometric mean of the
/// directional Chebyshev constants over `C`, raised to `1/A_C`.
pub fn delta_chebyshev(body: &Body, k: &CircledSet2, rule: &QuadratureRule) -> Result<DeltaResult> {
    let m = body.moments()?;
    let integral = match k {
        // kinks of ln τ along many rays; integrate over directions instead
        CircledSet2::ModulusCurve(_) => homogeneous_integral(body, |x, y| k.log_tau(x, y), rule)?,
        _ => integrate_body(body, |x, y| k.log_tau(x, y), rule)?,
    };
    Ok(DeltaResult::new(Route::ChebyshevIntegral, integral.value / m.m_c, integral.residual / m.m_c))
}

/// `∫∫_C φ dm` for `φ` positively homogeneous of degree one, written in
/// the coordinates `(x, y) = s(t, 1 − t)` as `∫_0^1 φ(t, 1 − t) ρ(t)³/3 dt`
/// with the radial function `ρ(t) = 1/gauge(t, 1 − t)`. The direction
/// interval is split at the body's corners.
fn homogeneous_integral<P: Fn(f64, f64) -> f64>(body: &Body, phi: P, rule: &QuadratureRule) -> Result<Estimate> {
    let mut cuts: Vec<f64> = body
        .breakpoints()
        .into_iter()
        .map(|x| (x, body.profile(x)))
        .filter(|&(x, y)| x + y > 0.0)
        .map(|(x, y)| x / (x + y))
        .chain([0.0, 1.0])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    let integrand = |t: f64| {
        let rho = body.gauge(t, 1.0 - t).map_or(f64::NAN, |g| 1.0 / g);
        phi(t, 1.0 - t) * rho.powi(3) / 3.0
    };
    let mut total = Estimate { value: 0.0, residual: 0.0 };
    for w in cuts.windows(2) {
        let e = integrate_1d(integrand, w[0], w[1], rule)?;
        total.value += e.value;
        total.residual += e.residual;
    }
    Ok(total)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {v}")))
    }
}

/// Triangle `T_{a,b}` on `E × F`: `δ = D(E)^{b/(a+b)} D(F)^{a/(a+b)}`.
pub fn delta_product_triangle(a: f64, b: f64, de: f64, df: f64) -> Result<DeltaResult> {
    for (name, v) in [("a", a), ("b", b), ("D(E)", de), ("D(F)", df)] {
        check_positive(name, v)?;
    }
    Ok(DeltaResult::new(Route::ProductTriangle, (b * de.ln() + a * df.ln()) / (a + b), 0.0))
}

/// General lower-set body on `E × F`: `δ = D(E)^{A/(A+B)} D(F)^{B/(A+B)}`
/// with the face integrals `A = ∫ x f(x) dx`, `B = ∫ y g(y) dy`.
pub fn delta_product_general(body: &Body, de: f64, df: f64) -> Result<DeltaResult> {
    check_positive("D(E)", de)?;
    check_positive("D(F)", df)?;
    let m = body.moments()?;
    let (a, b) = if body.is_symmetric() { (1.0, 1.0) } else { (m.face_a, m.face_b) };
    Ok(DeltaResult::new(Route::ProductGeneral, (a * de.ln() + b * df.ln()) / (a + b), 0.0))
}

/// `δ_{C_p}(𝔹)` from the two elementary integrals
/// `∫∫ x ln x` and `∫∫ x ln(x + y)` over `C_p` and the Beta-function form of
/// `M_{C_p} = (2/3p) B(1/p, 2/p)`. `p = ∞` is the unit square.
pub fn delta_ball_beta(p: f64, rule: &QuadratureRule) -> Result<DeltaResult> {
    let body = Body::lp_ball(p)?;
    let xlx = integrate_body(&body, |x, _| x * x.ln(), rule)?;
    let xlxy = integrate_body(&body, |x, y| x * (x + y).ln(), rule)?;
    let prefactor = if p.is_infinite() { 1.0 } else { 3.0 * p / (2.0 * log_beta(1.0 / p, 2.0 / p)?.exp()) };
    Ok(DeltaResult::new(
        Route::BallBeta,
        prefactor * (xlx.value - xlxy.value),
        prefactor * (xlx.residual + xlxy.residual),
    ))
}

/// How the inner `∫_0^1 ln Γ(t + z) dz` integrals are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaForm {
    /// Adaptive quadrature of `ln Γ`.
    Gamma,
    /// Closed form `t(ln t − 1) + ½ ln 2π`.
    Raabe,
}

/// The four integrals `I₁..I₄` of the Gamma-function formula for `δ_C(𝔹)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaIntegrals {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub area: f64,
    pub residual: f64,
}

/// `F(t) = ∫_0^1 ln Γ(t + z) dz`.
fn raabe_inner(t: f64, form: GammaForm) -> Result<f64> {
    match form {
        GammaForm::Raabe => {
            let tlt = if t == 0.0 { 0.0 } else { t * (t.ln() - 1.0) };
            Ok(tlt + 0.5 * (2.0 * PI).ln())
        }
        GammaForm::Gamma => {
            // ln Γ(u) = ln Γ(u + 1) − ln u moves the log singularity into an
            // elementary term; what is left is analytic on [t + 1, t + 2]
            let f = |z: f64| ln_gamma_unchecked(t + 1.0 + z);
            let smooth = smooth_rule().panel(&f, 0.0, 1.0).0;
            let tlt = if t == 0.0 { 0.0 } else { t * t.ln() };
            let log_part = (t + 1.0) * (t + 1.0).ln() - tlt - 1.0;
            let value = smooth - log_part;
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::Numeric { context: format!("ln Gamma integral at t = {t}"), residual: f64::INFINITY })
            }
        }
    }
}

/// Twelve Gauss nodes integrate `ln Γ` over a unit interval inside `[1, ∞)`
/// to rounding: the nearest pole is three half-widths away.
fn smooth_rule() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| QuadratureRule::new(12, 0, 1e-15).expect("fixed rule is valid"))
}

pub fn gamma_integrals(body: &Body, rule: &QuadratureRule, form: GammaForm) -> Result<GammaIntegrals> {
    let m = body.moments()?;
    let failure: Cell<Option<Error>> = Cell::new(None);
    let f = |t: f64| match raabe_inner(t, form) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };
    // I₁'s integrand is constant in y; memoize on x
    let last = Cell::new((f64::NAN, 0.0));
    let i1 = integrate_body(
        body,
        |x, _| {
            let (lx, lv) = last.get();
            if lx == x {
                return lv;
            }
            let v = f(x);
            last.set((x, v));
            v
        },
        rule,
    );
    let i2 = integrate_body(body, |_, y| f(y), rule);
    let i3 = integrate_body(body, |x, y| f(x + y), rule);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let (i1, i2, i3) = (i1?, i2?, i3?);
    Ok(GammaIntegrals {
        i1: i1.value,
        i2: i2.value,
        i3: i3.value,
        i4: m.m_c,
        area: m.vol,
        residual: i1.residual + i2.residual + i3.residual,
    })
}

/// `δ_C(𝔹) = exp((I₁ + I₂ − I₃ − ½ ln(2π)·area(C)) / (2 I₄))`.
pub fn delta_ball_gamma(body: &Body, rule: &QuadratureRule, form: GammaForm) -> Result<DeltaResult> {
    let g = gamma_integrals(body, rule, form)?;
    let log_delta = (g.i1 + g.i2 - g.i3 - 0.5 * (2.0 * PI).ln() * g.area) / (2.0 * g.i4);
    Ok(DeltaResult::new(Route::BallGamma, log_delta, g.residual / (2.0 * g.i4)))
}

/// `ln δ_{T_{a,b}}(E × F)` through the Robin-function identity:
/// `−(ab)²(ρ_E/a + ρ_F/b) / (3! M_C)` with `3! M_C = ab(a + b)`.
pub fn rumely_log_delta(a: f64, b: f64, rho_e: f64, rho_f: f64) -> f64 {
    let ab = a * b;
    -(ab * ab) * (rho_e / a + rho_f / b) / (ab * (a + b))
}

/// `V_{C,K}(z) = max(b g_E(z₁), a g_F(z₂))` for `C = T_{a,b}`, `K = E × F`.
pub fn extremal_product(a: f64, b: f64, e: &PlanarCompact, f: &PlanarCompact, z: [Complex64; 2]) -> Result<f64> {
    Ok((b * green(e, z[0])?).max(a * green(f, z[1])?))
}

/// C-Robin function of `V_{C,K}`: `max(b(ρ_E + ln|z₁|), a(ρ_F + ln|z₂|))`,
/// `-∞` at the origin.
pub fn c_robin_product(a: f64, b: f64, e: &PlanarCompact, f: &PlanarCompact, z: [Complex64; 2]) -> Result<f64> {
    let (rho_e, rho_f) = (robin_constant(e)?, robin_constant(f)?);
    Ok((b * (rho_e + z[0].norm().ln())).max(a * (rho_f + z[1].norm().ln())))
}

/// Logarithmic indicator `H_C(z) = max(b ln⁺|z₁|, a ln⁺|z₂|)` of `T_{a,b}`.
pub fn indicator_h(a: f64, b: f64, z: [Complex64; 2]) -> f64 {
    let lp = |w: Complex64| w.norm().ln().max(0.0);
    (b * lp(z[0])).max(a * lp(z[1]))
}

/// The `p` for which `body` is `C_p` up to dilation, if any.
pub fn lp_exponent(body: &Body) -> Option<f64> {
    match body.kind() {
        BodyKind::LpBall { p, .. } => Some(*p),
        BodyKind::Triangle { a, b } if a == b => Some(1.0),
        BodyKind::Rectangle { a, b } if a == b => Some(f64::INFINITY),
        _ => None,
    }
}
