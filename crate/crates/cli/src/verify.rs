//! Built-in verification suite: each criterion compares computed values
//! with closed forms and known identities.
//!
//! Accuracy tolerances are multiplied by the `tol_scale` argument;
//! structural bounds (Lipschitz slope, lattice rate) are not.

use std::f64::consts::{FRAC_PI_3, LN_2, PI, SQRT_2};

use ctd_core::bodies::Body;
use ctd_core::compacta::{shilov_candidates, CircledSet2, Compact2, PlanarCompact, Point2, ProductSet};
use ctd_core::formulas::{
    delta_ball_beta, delta_ball_gamma, delta_chebyshev, delta_product_general, delta_product_triangle,
    rumely_log_delta, GammaForm,
};
use ctd_core::numerics::{integrate_1d, log_gamma, QuadratureRule};
use ctd_core::vandermonde::{basis, delta_ball_qn, delta_trend, fekete_search, richardson_log_n_over_n};
use num_complex::Complex64;

use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Test {
    /// `|measured − target| ≤ tol`.
    Within,
    /// `measured ≤ tol`.
    AtMost,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub target: Option<f64>,
    pub tol: f64,
    pub pass: bool,
}

struct Checks<'a> {
    scale: f64,
    rule: &'a QuadratureRule,
    out: Vec<Check>,
}

impl Checks<'_> {
    fn push(&mut self, label: impl Into<String>, measured: f64, target: Option<f64>, tol: f64, test: Test) {
        let pass = match test {
            Test::Within => (measured - target.unwrap_or(0.0)).abs() <= tol,
            Test::AtMost => measured <= tol,
        };
        self.out.push(Check { label: label.into(), measured, target, tol, pass });
    }

    fn within(&mut self, label: impl Into<String>, measured: f64, target: f64, tol: f64) {
        self.push(label, measured, Some(target), tol * self.scale, Test::Within);
    }

    fn at_most(&mut self, label: impl Into<String>, measured: f64, bound: f64) {
        self.push(label, measured, None, bound, Test::AtMost);
    }

    /// A failed computation becomes a failed check.
    fn value(&mut self, label: &str, r: ctd_core::Result<f64>) -> Option<f64> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.push(format!("{label}: {e}"), f64::NAN, None, 0.0, Test::AtMost);
                None
            }
        }
    }
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub tags: &'static [&'static str],
    run: fn(&mut Checks),
}

fn square() -> f64 {
    (1.0 - 4.0 * LN_2) / 6.0
}

fn quarter_disk() -> f64 {
    SQRT_2.ln() + (SQRT_2 - 1.0).ln() / SQRT_2
}

fn lp(p: f64) -> Body {
    Body::lp_ball(p).expect("valid exponent")
}

fn simplex_ball(c: &mut Checks) {
    let rule = c.rule.clone();
    if let Some(v) =
        c.value("chebyshev", delta_chebyshev(&Body::simplex(), &CircledSet2::unit_ball(), &rule).map(|d| d.log_delta))
    {
        c.within("ln δ simplex", v, -0.25, 1e-6);
    }
}

fn quarter_disk_ball(c: &mut Checks) {
    let rule = c.rule.clone();
    if let Some(v) = c.value("ball-beta p=2", delta_ball_beta(2.0, &rule).map(|d| d.log_delta)) {
        c.within("ball-beta p=2", v, quarter_disk(), 1e-8);
    }
    if let Some(v) =
        c.value("chebyshev p=2", delta_chebyshev(&lp(2.0), &CircledSet2::unit_ball(), &rule).map(|d| d.log_delta))
    {
        c.within("chebyshev p=2", v, quarter_disk(), 1e-6);
    }
}

fn square_ball(c: &mut Checks) {
    let rule = c.rule.clone();
    if let Some(v) = c.value("ball-beta p=inf", delta_ball_beta(f64::INFINITY, &rule).map(|d| d.log_delta)) {
        c.within("ball-beta p=inf", v, square(), 1e-10);
    }
    if let Some(v) = c.value("ball-beta p=64", delta_ball_beta(64.0, &rule).map(|d| d.log_delta)) {
        c.within("ball-beta p=64 vs limit", v, square(), 5e-3);
    }
}

fn gamma_routes(c: &mut Checks) {
    let rule = c.rule.clone();
    let cases = [
        ("simplex", Body::simplex(), -0.25),
        ("square", lp(f64::INFINITY), square()),
        ("C_2", lp(2.0), quarter_disk()),
    ];
    for (name, body, target) in cases {
        let g = c.value(name, delta_ball_gamma(&body, &rule, GammaForm::Gamma).map(|d| d.log_delta));
        let r = c.value(name, delta_ball_gamma(&body, &rule, GammaForm::Raabe).map(|d| d.log_delta));
        if let (Some(g), Some(r)) = (g, r) {
            c.within(format!("{name} gamma vs raabe"), g, r, 1e-9);
            c.within(format!("{name} gamma"), g, target, 1e-6);
            c.within(format!("{name} raabe"), r, target, 1e-6);
        }
    }
}

fn qn(c: &mut Checks) {
    let s = Body::simplex();
    let at = |n| delta_ball_qn(&s, n).map(f64::ln);
    let (v200, v400) = (c.value("q_n n=200", at(200)), c.value("q_n n=400", at(400)));
    if let (Some(v200), Some(v400)) = (v200, v400) {
        c.within("ln δ_n n=400", v400, -0.25, 2e-2);
        c.within("richardson(200,400)", richardson_log_n_over_n(200, v200, 400, v400), -0.25, 2e-3);
    }
}

fn product_triangle(c: &mut Checks) {
    if let Some(d) = c.value("product-triangle", delta_product_triangle(2.0, 1.0, 2.0, 0.5).map(|d| d.delta)) {
        c.within("δ(2,1; 2, 1/2)", d, 2f64.powf(-1.0 / 3.0), 1e-14);
        c.within("rumely vs ln δ", rumely_log_delta(2.0, 1.0, -LN_2, LN_2), d.ln(), 1e-14);
    }
}

fn product_general(c: &mut Checks) {
    let bodies = [
        ("C_1/2", lp(0.5)),
        ("simplex", Body::simplex()),
        ("C_2", lp(2.0)),
        ("C_3", lp(3.0)),
        ("square", lp(f64::INFINITY)),
    ];
    for (name, body) in bodies {
        if let Some(d) = c.value(name, delta_product_general(&body, 4.0, 1.0).map(|d| d.delta)) {
            c.within(format!("{name} on D=4,1"), d, 2.0, 1e-10);
        }
    }
    let rect = Body::rectangle(1.0, 2.0).expect("valid rectangle");
    if let Some(d) = c.value("rect(1,2)", delta_product_general(&rect, 4.0, 1.0).map(|d| d.delta)) {
        c.within("rect(1,2) on D=4,1", d, 4f64.powf(2.0 / 3.0), 1e-10);
    }
}

/// Exhaustive `max |det|` over `d`-subsets (`d ≤ 4`) by cofactor expansion
/// of the last column against every remaining candidate.
pub fn brute_force_log_vdm(cands: &[Point2], exps: &[(u32, u32)]) -> Option<f64> {
    let d = exps.len();
    if !(1..=4).contains(&d) || cands.len() < d {
        return None;
    }
    let rows: Vec<Vec<Complex64>> =
        cands.iter().map(|p| exps.iter().map(|&(a, b)| p[0].powu(a) * p[1].powu(b)).collect()).collect();
    // determinant of the columns `cols` restricted to the monomial rows `keep`
    fn det(cols: &[&[Complex64]], keep: &[usize]) -> Complex64 {
        match keep.len() {
            1 => cols[0][keep[0]],
            k => (0..k)
                .map(|i| {
                    let rest: Vec<usize> = keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &r)| r).collect();
                    let sign = if (i + k - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
                    cols[k - 1][keep[i]] * det(&cols[..k - 1], &rest) * sign
                })
                .sum(),
        }
    }
    let all: Vec<usize> = (0..d).collect();
    let mut best = 0.0f64;
    let mut idx: Vec<usize> = (0..d.saturating_sub(1)).collect();
    let n = rows.len();
    loop {
        // cofactors of the last column given the first d-1 columns
        let head: Vec<&[Complex64]> = idx.iter().map(|&i| rows[i].as_slice()).collect();
        let cof: Vec<Complex64> = (0..d)
            .map(|i| {
                let rest: Vec<usize> = all.iter().copied().filter(|&r| r != i).collect();
                let sign = if (i + d - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
                if d == 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    det(&head, &rest) * sign
                }
            })
            .collect();
        let start = idx.last().map_or(0, |&i| i + 1);
        for row in &rows[start..] {
            let v: Complex64 = cof.iter().zip(row).map(|(a, b)| a * b).sum();
            best = best.max(v.norm());
        }
        // next (d-1)-combination
        let k = idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                return Some(best.ln());
            }
            i -= 1;
            if idx[i] < n - 1 - (k - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn fekete(c: &mut Checks) {
    let sets = [("unit polydisk", 1.0, 1.0), ("disk(2)xdisk(1/2)", 2.0, 0.5)];
    let bodies = [("simplex", 1.0, 1.0), ("triangle(2,1)", 2.0, 1.0)];
    for (set_name, r1, r2) in sets {
        let k = Compact2::Product(ProductSet::new(PlanarCompact::Disk { r: r1 }, PlanarCompact::Disk { r: r2 }));
        for (body_name, a, b) in bodies {
            let body = Body::triangle(a, b).expect("valid triangle");
            let target = ((b * f64::ln(r1) + a * f64::ln(r2)) / (a + b)).exp();
            for res in [16, 24] {
                match delta_trend(&k, &body, &[1, 2, 3, 4], res) {
                    Ok(trend) => {
                        for r in trend {
                            let label = format!("{set_name} {body_name} res {res} n={}", r.n);
                            c.within(label, r.delta_estimate / target, 1.0, 0.05);
                        }
                    }
                    Err(e) => c.push(format!("{set_name} {body_name}: {e}"), f64::NAN, None, 0.0, Test::AtMost),
                }
            }
            let greedy = shilov_candidates(&k, 16).and_then(|cands| {
                let g = fekete_search(&cands, &body, 1)?;
                let exps: Vec<(u32, u32)> = basis(&body, 1)?.indices.iter().map(|m| (m.j1, m.j2)).collect();
                Ok((g.log_vdm, brute_force_log_vdm(&cands, &exps)))
            });
            let label = format!("{set_name} {body_name} n=1 greedy vs exhaustive");
            match greedy {
                Ok((g, Some(brute))) => c.within(label, g, brute, 1e-12),
                Ok((_, None)) => c.push(format!("{label}: d_n > 4"), f64::NAN, None, 0.0, Test::AtMost),
                Err(e) => c.push(format!("{label}: {e}"), f64::NAN, None, 0.0, Test::AtMost),
            }
        }
    }
}

fn scaling(c: &mut Checks) {
    let rule = c.rule.clone();
    let ball = CircledSet2::unit_ball();
    let bodies =
        [("simplex", Body::simplex()), ("C_2", lp(2.0)), ("triangle(2,1)", Body::triangle(2.0, 1.0).expect("valid"))];
    for (name, body) in bodies {
        let Some(base) = c.value(name, delta_chebyshev(&body, &ball, &rule).map(|d| d.log_delta)) else { continue };
        for t in [0.5, 2.0, FRAC_PI_3] {
            let scaled = body.scale(t).and_then(|b| delta_chebyshev(&b, &ball, &rule)).map(|d| d.log_delta);
            if let Some(v) = c.value(name, scaled) {
                c.within(format!("{name} scaled by {t:.4}"), v, base, 1e-6);
            }
        }
    }
    let ps: Vec<f64> = (0..=30).map(|i| 1.0 + 0.1 * i as f64).collect();
    let vals: Option<Vec<f64>> =
        ps.iter().map(|&p| c.value("sweep", delta_ball_beta(p, &rule).map(|d| d.log_delta))).collect();
    if let Some(v) = vals {
        let slope =
            ps.windows(2).zip(v.windows(2)).map(|(p, w)| (w[1] - w[0]).abs() / (p[1] - p[0])).fold(0.0, f64::max);
        c.at_most("max |Δ ln δ|/|Δp| on [1,4]", slope, 0.2);
    }
}

fn lattice(c: &mut Checks) {
    let bodies = [
        ("simplex", Body::simplex()),
        ("triangle(2,1)", Body::triangle(2.0, 1.0).expect("valid")),
        ("rect(1,2)", Body::rectangle(1.0, 2.0).expect("valid")),
        ("C_1/2", lp(0.5)),
        ("C_2", lp(2.0)),
        ("C_3", lp(3.0)),
        ("square", lp(f64::INFINITY)),
    ];
    for (name, body) in bodies {
        let Some(m) = c.value(name, body.moments().map(|m| m.a_c)) else { continue };
        for n in [8u32, 16, 32, 64] {
            let ratio = basis(&body, n).map(|b| b.l_n as f64 / (n as f64 * b.d_n as f64));
            if let Some(r) = c.value(name, ratio) {
                c.at_most(
                    format!("{name} |l_n/(n d_n) - A_C|·√n/2 n={n}"),
                    (r - m).abs() * (n as f64).sqrt() / 2.0,
                    1.0,
                );
            }
        }
        if let Some(rel) = c.value(name, body.moments().map(|m| (m.face_a + m.face_b) / m.m_c)) {
            c.within(format!("{name} (A+B)/M_C"), rel, 1.0, 1e-9);
        }
    }
}

fn special(c: &mut Checks) {
    let rule = c.rule.clone();
    for (label, x, want) in [("lnΓ(1)", 1.0, 0.0), ("lnΓ(1/2)", 0.5, 0.5 * PI.ln()), ("lnΓ(6)", 6.0, 120f64.ln())] {
        if let Some(v) = c.value(label, log_gamma(x)) {
            c.within(label, v, want, 1e-13);
        }
    }
    let raabe = integrate_1d(|z| log_gamma(z).unwrap_or(f64::NAN), 0.0, 1.0, &rule).map(|e| e.value);
    if let Some(v) = c.value("raabe", raabe) {
        c.within("∫₀¹ lnΓ", v, 0.5 * (2.0 * PI).ln(), 1e-9);
    }
    for z in [0.3, 0.7, 1.9] {
        for n in [2u32, 3, 5] {
            let nf = f64::from(n);
            let lhs = log_gamma(nf * z);
            let rhs = (0..n).map(|k| log_gamma(z + f64::from(k) / nf)).sum::<ctd_core::Result<f64>>();
            if let (Some(l), Some(r)) = (c.value("lnΓ", lhs), c.value("lnΓ", rhs)) {
                let r = r + (1.0 - nf) * 0.5 * (2.0 * PI).ln() + (nf * z - 0.5) * nf.ln();
                c.within(format!("multiplication z={z} n={n}"), l, r, 1e-10);
            }
        }
    }
}

pub const CRITERIA: [Criterion; 11] = [
    Criterion { id: 1, name: "ball on the simplex", tags: &["ball", "chebyshev"], run: simplex_ball },
    Criterion { id: 2, name: "ball on the quarter disk", tags: &["ball", "beta", "chebyshev"], run: quarter_disk_ball },
    Criterion { id: 3, name: "ball on the square", tags: &["ball", "beta", "sweep"], run: square_ball },
    Criterion { id: 4, name: "gamma route consistency", tags: &["ball", "gamma"], run: gamma_routes },
    Criterion { id: 5, name: "orthogonal-monomial asymptotics", tags: &["ball", "qn"], run: qn },
    Criterion { id: 6, name: "product formula on triangles", tags: &["product", "closed-form"], run: product_triangle },
    Criterion {
        id: 7,
        name: "product formula on general bodies",
        tags: &["product", "closed-form"],
        run: product_general,
    },
    Criterion { id: 8, name: "Fekete trend and exhaustive search", tags: &["fekete"], run: fekete },
    Criterion {
        id: 9,
        name: "scaling invariance and continuity in p",
        tags: &["ball", "chebyshev", "sweep"],
        run: scaling,
    },
    Criterion { id: 10, name: "lattice asymptotics and face integrals", tags: &["lattice"], run: lattice },
    Criterion { id: 11, name: "special functions", tags: &["special"], run: special },
];

pub fn selected(only: &[String]) -> Result<Vec<&'static Criterion>, String> {
    if only.is_empty() {
        return Ok(CRITERIA.iter().collect());
    }
    for f in only {
        if !CRITERIA.iter().any(|c| c.id.to_string() == *f || c.tags.contains(&f.as_str())) {
            return Err(format!("no criterion matches `{f}`"));
        }
    }
    Ok(CRITERIA
        .iter()
        .filter(|c| only.iter().any(|f| c.id.to_string() == *f || c.tags.contains(&f.as_str())))
        .collect())
}

pub fn run(criterion: &Criterion, rule: &QuadratureRule, tol_scale: f64) -> Vec<Check> {
    let mut checks = Checks { scale: tol_scale, rule, out: Vec::new() };
    (criterion.run)(&mut checks);
    checks.out
}

/// Runs the criteria in order; returns the table and the number that failed.
pub fn verify(criteria: &[&Criterion], rule: &QuadratureRule, tol_scale: f64) -> (Table, usize) {
    let mut table = Table::new(&["id", "criterion", "check", "measured", "target", "tolerance", "result"]);
    let mut failed = 0;
    for c in criteria {
        let checks = run(c, rule, tol_scale);
        let ok = !checks.is_empty() && checks.iter().all(|k| k.pass);
        if !ok {
            failed += 1;
        }
        for k in checks {
            table.push(vec![
                u64::from(c.id).into(),
                c.name.into(),
                k.label.into(),
                k.measured.into(),
                k.target.map_or(Cell::Empty, Cell::Num),
                k.tol.into(),
                if k.pass { "pass" } else { "fail" }.into(),
            ]);
        }
    }
    (table, failed)
}
