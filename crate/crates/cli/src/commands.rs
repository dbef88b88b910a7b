use ctd_core::bodies::{Body, BodyKind};
use ctd_core::compacta::{transfinite_diameter_1d, Compact2};
use ctd_core::formulas::{
    delta_ball_beta, delta_ball_gamma, delta_chebyshev, delta_product_general, delta_product_triangle, lp_exponent,
    rumely_log_delta, DeltaResult, GammaForm, Route,
};
use ctd_core::numerics::QuadratureRule;
use ctd_core::vandermonde::{basis, delta_ball_qn, delta_trend, fekete_search};

use crate::input::{as_product, ball_radius};
use crate::table::{Cell, Table};
use crate::CliError;

/// Checks that `route` is defined for the pair, without computing anything.
pub fn check_route(route: Route, body: &Body, set: &Compact2) -> Result<(), CliError> {
    let mismatch = |why: &str| Err(CliError::Incompatible(format!("route {route}: {why}")));
    let triangle = matches!(body.kind(), BodyKind::Triangle { .. });
    match route {
        Route::ChebyshevIntegral if set.as_circled().is_none() => mismatch("needs a complete circled set"),
        Route::BallBeta if ball_radius(set).is_none() => mismatch("needs set=ball"),
        Route::BallBeta if lp_exponent(body).is_none() => mismatch("needs an lp, simplex or square body"),
        Route::BallGamma if ball_radius(set).is_none() => mismatch("needs set=ball"),
        Route::ProductTriangle | Route::Rumely | Route::ProductGeneral if as_product(set).is_none() => {
            mismatch("needs a product set")
        }
        Route::ProductTriangle | Route::Rumely if !triangle => mismatch("needs a triangle body"),
        Route::ProductGeneral if !body.is_lower_set() => mismatch("needs a lower-set body"),
        _ => Ok(()),
    }
}

fn shifted(mut r: DeltaResult, log_scale: f64) -> DeltaResult {
    r.log_delta += log_scale;
    r.delta = r.log_delta.exp();
    r
}

pub fn eval_route(route: Route, body: &Body, set: &Compact2, rule: &QuadratureRule) -> Result<DeltaResult, CliError> {
    check_route(route, body, set)?;
    let factors = || {
        let p = as_product(set).expect("checked product set");
        Ok::<_, CliError>((transfinite_diameter_1d(&p.e)?, transfinite_diameter_1d(&p.f)?))
    };
    let triangle = || match body.kind() {
        BodyKind::Triangle { a, b } => (*a, *b),
        _ => unreachable!("checked triangle body"),
    };
    let ln_r = || ball_radius(set).expect("checked ball").ln();
    Ok(match route {
        Route::ChebyshevIntegral => delta_chebyshev(body, &set.as_circled().expect("checked circled set"), rule)?,
        Route::BallBeta => shifted(delta_ball_beta(lp_exponent(body).expect("checked lp body"), rule)?, ln_r()),
        Route::BallGamma => shifted(delta_ball_gamma(body, rule, GammaForm::Gamma)?, ln_r()),
        Route::ProductTriangle => {
            let ((a, b), (de, df)) = (triangle(), factors()?);
            delta_product_triangle(a, b, de, df)?
        }
        Route::ProductGeneral => {
            let (de, df) = factors()?;
            delta_product_general(body, de, df)?
        }
        Route::Rumely => {
            let ((a, b), (de, df)) = (triangle(), factors()?);
            let log_delta = rumely_log_delta(a, b, -de.ln(), -df.ln());
            DeltaResult { route, log_delta, delta: log_delta.exp(), residual: 0.0 }
        }
    })
}

/// `None` selects every route defined for the pair.
pub fn delta(
    body: &Body,
    set: &Compact2,
    route: Option<Route>,
    rule: &QuadratureRule,
) -> Result<(Table, i32), CliError> {
    let routes: Vec<Route> = match route {
        Some(r) => {
            check_route(r, body, set)?;
            vec![r]
        }
        None => Route::ALL.into_iter().filter(|&r| check_route(r, body, set).is_ok()).collect(),
    };
    if routes.is_empty() {
        return Err(CliError::Incompatible("no route is defined for this body and set".into()));
    }
    let mut table = Table::new(&["route", "log_delta", "delta", "residual"]);
    let mut logs = Vec::new();
    let mut code = 0;
    for r in routes {
        match eval_route(r, body, set, rule) {
            Ok(d) => {
                logs.push(d.log_delta);
                table.push(vec![r.label().into(), d.log_delta.into(), d.delta.into(), d.residual.into()]);
            }
            Err(e) => {
                eprintln!("error: {e}");
                code = code.max(e.code());
                table.push(vec![r.label().into(), f64::NAN.into(), f64::NAN.into(), Cell::Empty]);
            }
        }
    }
    if route.is_none() && logs.len() > 1 {
        let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        table.push(vec!["spread".into(), (hi - lo).into(), Cell::Empty, Cell::Empty]);
    }
    Ok((table, code))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

pub fn sweep_values(from: f64, to: f64, steps: usize, scale: Scale) -> Result<Vec<f64>, CliError> {
    if !(from > 0.0 && from.is_finite() && to.is_finite() && to >= from) {
        return Err(CliError::Usage(format!("need 0 < from ≤ to, got from={from}, to={to}")));
    }
    if from == to {
        return Ok(vec![from]);
    }
    if steps < 2 {
        return Err(CliError::Usage(format!("need steps ≥ 2, got {steps}")));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            let t = i as f64 / last;
            match scale {
                Scale::Linear => from + (to - from) * t,
                Scale::Log => (from.ln() + (to.ln() - from.ln()) * t).exp(),
            }
        })
        .collect())
}

pub fn sweep_p(ps: &[f64], rule: &QuadratureRule) -> (Table, i32) {
    let mut table = Table::new(&["p", "log_delta", "delta"]);
    let mut code = 0;
    for &p in ps {
        match delta_ball_beta(p, rule) {
            Ok(d) => table.push(vec![p.into(), d.log_delta.into(), d.delta.into()]),
            Err(e) => {
                eprintln!("error: p={p}: {e}");
                code = 3;
                table.push(vec![p.into(), f64::NAN.into(), f64::NAN.into()]);
            }
        }
    }
    (table, code)
}

pub fn fekete(
    body: &Body,
    set: &Compact2,
    n: u32,
    resolution: usize,
) -> Result<ctd_core::vandermonde::FeketeResult, CliError> {
    let cands = ctd_core::compacta::shilov_candidates(set, resolution)?;
    Ok(fekete_search(&cands, body, n)?)
}

pub fn fekete_table(r: &ctd_core::vandermonde::FeketeResult) -> Table {
    let mut t = Table::new(&["n", "d_n", "l_n", "log_vdm", "delta_estimate"]);
    t.push(vec![u64::from(r.n).into(), (r.d_n as u64).into(), r.l_n.into(), r.log_vdm.into(), r.delta_estimate.into()]);
    t
}

/// Closed-form reference for the pair: product formulas on products, the
/// Beta (or Gamma) form on balls, the Chebyshev integral otherwise.
pub fn best_target(body: &Body, set: &Compact2, rule: &QuadratureRule) -> Result<DeltaResult, CliError> {
    let order =
        [Route::ProductTriangle, Route::ProductGeneral, Route::BallBeta, Route::BallGamma, Route::ChebyshevIntegral];
    let route = order
        .into_iter()
        .find(|&r| check_route(r, body, set).is_ok())
        .ok_or_else(|| CliError::Incompatible("no closed-form target for this body and set".into()))?;
    eval_route(route, body, set, rule)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Qn,
    Fekete,
}

pub fn check_n_list(ns: &[u32]) -> Result<(), CliError> {
    if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[1] <= w[0]) {
        let list: Vec<String> = ns.iter().map(u32::to_string).collect();
        return Err(CliError::Usage(format!(
            "n list must be positive and strictly increasing, got {}",
            list.join(",")
        )));
    }
    Ok(())
}

/// Estimates and target are `ln δ`; `gap` is their distance.
pub fn convergence(
    kind: Kind,
    body: &Body,
    set: &Compact2,
    ns: &[u32],
    resolution: usize,
    rule: &QuadratureRule,
) -> Result<Table, CliError> {
    check_n_list(ns)?;
    if kind == Kind::Qn && ball_radius(set).is_none() {
        return Err(CliError::Incompatible("kind qn needs set=ball".into()));
    }
    let target = best_target(body, set, rule)?.log_delta;
    let mut table = Table::new(&["n", "d_n", "l_n", "estimate", "target", "gap"]);
    let mut row = |n: u32, d_n: usize, l_n: u64, est: f64| {
        table.push(vec![
            u64::from(n).into(),
            (d_n as u64).into(),
            l_n.into(),
            est.into(),
            target.into(),
            (est - target).abs().into(),
        ]);
    };
    match kind {
        Kind::Qn => {
            let ln_r = ball_radius(set).expect("checked ball").ln();
            for &n in ns {
                let b = basis(body, n)?;
                row(n, b.d_n, b.l_n, delta_ball_qn(body, n)?.ln() + ln_r);
            }
        }
        Kind::Fekete => {
            for r in delta_trend(set, body, ns, resolution)? {
                row(r.n, r.d_n, r.l_n, r.log_vdm / r.l_n as f64);
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::{parse_body, parse_set};

    #[test]
    fn sweep_grid() {
        assert_eq!(sweep_values(1.0, 1.0, 2, Scale::Linear).unwrap(), vec![1.0]);
        assert_eq!(sweep_values(1.0, 4.0, 4, Scale::Linear).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        let log = sweep_values(1.0, 100.0, 3, Scale::Log).unwrap();
        assert!((log[1] - 10.0).abs() < 1e-12);
        assert!(sweep_values(0.0, 1.0, 2, Scale::Linear).is_err());
        assert!(sweep_values(1.0, 2.0, 1, Scale::Linear).is_err());
    }

    #[test]
    fn route_applicability() {
        let ball = parse_set("ball").unwrap();
        let torus = parse_set("product:disk(4)xdisk(1)").unwrap();
        let simplex = parse_body("simplex").unwrap();
        let tri = parse_body("triangle:a=2,b=1").unwrap();
        assert!(check_route(Route::BallBeta, &simplex, &ball).is_ok());
        assert!(check_route(Route::BallBeta, &tri, &ball).is_err());
        assert_eq!(check_route(Route::ProductTriangle, &tri, &ball).unwrap_err().code(), 2);
        assert!(check_route(Route::ChebyshevIntegral, &tri, &torus).is_ok());
        assert!(check_route(Route::Rumely, &parse_body("lp:p=2").unwrap(), &torus).is_err());
    }

    #[test]
    fn routes_agree_on_a_scaled_ball() {
        let ball = parse_set("ball:r=3").unwrap();
        let body = parse_body("lp:p=2").unwrap();
        let rule = QuadratureRule::default();
        let beta = eval_route(Route::BallBeta, &body, &ball, &rule).unwrap();
        let cheb = eval_route(Route::ChebyshevIntegral, &body, &ball, &rule).unwrap();
        assert!((beta.log_delta - cheb.log_delta).abs() < 1e-9);
    }

    #[test]
    fn product_routes_agree_on_triangles() {
        let set = parse_set("product:interval(-1,1)xdisk(2)").unwrap();
        let body = parse_body("triangle:a=2,b=1").unwrap();
        let rule = QuadratureRule::default();
        let tri = eval_route(Route::ProductTriangle, &body, &set, &rule).unwrap();
        let rum = eval_route(Route::Rumely, &body, &set, &rule).unwrap();
        assert!((tri.log_delta - rum.log_delta).abs() < 1e-14);
    }
}
