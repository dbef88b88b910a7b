use std::cell::{Cell, RefCell};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::bodies::Body;
use crate::{Error, Result};

/// Gauss-Legendre panel rule with adaptive bisection parameters.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    panel_order: usize,
    max_depth: u32,
    rel_tol: f64,
    /// `(node, weight)` pairs on `[-1, 1]`.
    nodes: Arc<[(f64, f64)]>,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::new(32, 40, 1e-11).expect("default rule is valid")
    }
}

impl QuadratureRule {
    pub fn new(panel_order: usize, max_depth: u32, rel_tol: f64) -> Result<Self> {
        if panel_order == 0 {
            return Err(Error::domain("panel_order must be positive"));
        }
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        Ok(Self { panel_order, max_depth, rel_tol, nodes: gauss_legendre(panel_order).into() })
    }

    pub fn panel_order(&self) -> usize {
        self.panel_order
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn with_rel_tol(&self, rel_tol: f64) -> Result<Self> {
        Self::new(self.panel_order, self.max_depth, rel_tol)
    }

    pub fn with_max_depth(&self, max_depth: u32) -> Self {
        Self { max_depth, ..self.clone() }
    }

    /// Nodes and weights on the reference interval `[-1, 1]`.
    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub(crate) fn panel<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> (f64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        for &(x, w) in self.nodes.iter() {
            let v = f(mid + half * x);
            sum += w * v;
            abs_sum += w * v.abs();
        }
        (sum * half, abs_sum * half.abs())
    }
}

/// Legendre roots by Newton iteration from the Tricomi initial guesses.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(x) and P_{n-1}(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pn1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
            x = 0.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

/// Value of an integral together with its accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub residual: f64,
}

struct Adaptive {
    value: f64,
    residual: f64,
    exhausted: bool,
    scale: f64,
    abs_tol: f64,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    abs: f64,
    err: f64,
    depth: u32,
}

/// Refines `whole` over `[a, b]` into two halves and reports the split.
fn split<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, depth: u32, rule: &QuadratureRule) -> [Panel; 2] {
    let mid = 0.5 * (a + b);
    let (l, la) = rule.panel(f, a, mid);
    let (r, ra) = rule.panel(f, mid, b);
    let err = (l + r - whole).abs();
    // the parent error is shared in proportion to each half's magnitude
    let share = |x: f64| if la + ra > 0.0 { err * x / (la + ra) } else { 0.5 * err };
    [
        Panel { a, b: mid, value: l, abs: la, err: share(la), depth: depth + 1 },
        Panel { a: mid, b, value: r, abs: ra, err: share(ra), depth: depth + 1 },
    ]
}

/// Heap key: largest error first, leftmost panel on ties.
struct Worst {
    err: f64,
    a: f64,
    slot: usize,
}

impl PartialEq for Worst {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Worst {}

impl PartialOrd for Worst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Worst {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Relative noise floor for integrands evaluated to machine precision.
const ROUNDING_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Two-half discrepancy above the noise floor of a panel.
fn excess(p: &Panel, floor: f64) -> f64 {
    (p.err - floor * p.abs).max(0.0)
}

/// Global adaptive scheme: the panel with the largest error is split until
/// the summed error meets `max(rel_tol · ∫|f|, abs_tol)` or every candidate
/// panel is at `max_depth`. Errors below `floor · ∫|f|` on a panel are treated as the
/// integrand's own noise and not refined.
fn adaptive<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, rule: &QuadratureRule, floor: f64, abs_tol: f64) -> Adaptive {
    let (whole, abs_whole) = rule.panel(f, lo, hi);
    let mut acc = Adaptive { value: whole, residual: 0.0, exhausted: false, scale: abs_whole, abs_tol };
    if abs_whole == 0.0 || !whole.is_finite() {
        return acc;
    }
    let mut panels: Vec<Option<Panel>> = Vec::new();
    let mut heap = BinaryHeap::new();
    let (mut total, mut scale) = (0.0, 0.0);
    let mut queue = vec![split(f, lo, hi, whole, 0, rule)];
    loop {
        for p in queue.drain(..).flatten() {
            total += excess(&p, floor);
            scale += p.abs;
            if p.depth < rule.max_depth && excess(&p, floor) > 0.0 {
                heap.push(Worst { err: p.err, a: p.a, slot: panels.len() });
            }
            panels.push(Some(p));
        }
        if !total.is_finite() || total <= (rule.rel_tol * scale).max(abs_tol) {
            break;
        }
        let Some(w) = heap.pop() else {
            acc.exhausted = true;
            break;
        };
        let p = panels[w.slot].take().expect("heap entries point at live panels");
        total -= excess(&p, floor);
        scale -= p.abs;
        queue.push(split(f, p.a, p.b, p.value, p.depth, rule));
    }
    // left-to-right summation keeps results reproducible
    let mut live: Vec<Panel> = panels.into_iter().flatten().collect();
    live.sort_by(|x, y| x.a.total_cmp(&y.a));
    acc.value = live.iter().map(|p| p.value).sum();
    acc.residual = live.iter().map(|p| p.err).sum();
    acc.scale = live.iter().map(|p| p.abs).sum();
    acc
}

fn check(acc: Adaptive, rule: &QuadratureRule, context: &str) -> Result<Estimate> {
    if !acc.value.is_finite() {
        return Err(Error::Numeric { context: context.to_string(), residual: f64::INFINITY });
    }
    let allowed = 10.0 * (rule.rel_tol * acc.scale).max(acc.abs_tol) + 1e3 * f64::EPSILON * acc.scale;
    if acc.exhausted && acc.residual > allowed {
        return Err(Error::Numeric { context: context.to_string(), residual: acc.residual });
    }
    Ok(Estimate { value: acc.value, residual: acc.residual })
}

/// Adaptive Gauss-Legendre integral of `f` over `[lo, hi]`.
///
/// The panel with the largest two-half discrepancy is bisected until the
/// summed discrepancy is within `rel_tol · ∫|f|`. Integrable
/// endpoint behaviour like `x ln x` needs no special casing because the
/// rule never evaluates `f` at panel endpoints.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rule: &QuadratureRule) -> Result<Estimate> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if lo == hi {
        return Ok(Estimate { value: 0.0, residual: 0.0 });
    }
    if lo > hi {
        let e = integrate_1d(f, hi, lo, rule)?;
        return Ok(Estimate { value: -e.value, residual: e.residual });
    }
    check(adaptive(&f, lo, hi, rule, ROUNDING_FLOOR, 0.0), rule, "integrate_1d")
}

/// Iterated integral `∫ ∫_0^{top(x)} φ(x, y) dy dx` over the region under a
/// nonnegative profile, with the outer integral split at `x_breaks`
/// (which must be increasing; the first and last entries are the limits).
pub fn integrate_graph_region<T, P>(top: T, x_breaks: &[f64], phi: P, rule: &QuadratureRule) -> Result<Estimate>
where
    T: Fn(f64) -> f64,
    P: Fn(f64, f64) -> f64,
{
    if x_breaks.len() < 2 {
        return Err(Error::domain("need at least two breakpoints"));
    }
    // inner integrals run a decade tighter so their noise does not drive the
    // outer bisection
    let inner_rule = rule.with_rel_tol(rule.rel_tol * 0.1)?;
    let outer_floor = (4.0 * inner_rule.rel_tol).max(ROUNDING_FLOOR);
    // a one-panel estimate of ∫∫|φ| lets inner integrals over thin slivers
    // stop at an absolute tolerance instead of chasing their own rel_tol
    let (lo, hi) = (x_breaks[0], x_breaks[x_breaks.len() - 1]);
    let coarse = |x: f64| {
        let h = top(x);
        if h > 0.0 {
            rule.panel(&|y| phi(x, y), 0.0, h).1
        } else {
            0.0
        }
    };
    let (_, magnitude) = rule.panel(&coarse, lo, hi);
    let inner_abs = if magnitude.is_finite() { 1e-2 * inner_rule.rel_tol * magnitude / (hi - lo) } else { 0.0 };
    let inner_residual = Cell::new(0.0f64);
    let inner_error: RefCell<Option<Error>> = RefCell::new(None);

    let outer = |x: f64| -> f64 {
        let h = top(x);
        if h <= 0.0 {
            return 0.0;
        }
        let acc = adaptive(&|y| phi(x, y), 0.0, h, &inner_rule, ROUNDING_FLOOR, inner_abs);
        inner_residual.set(inner_residual.get().max(acc.residual));
        match check(acc, &inner_rule, "integrate_body (inner)") {
            Ok(e) => e.value,
            Err(e) => {
                inner_error.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };

    let mut value = 0.0;
    let mut residual = 0.0;
    for w in x_breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let acc = adaptive(&outer, w[0], w[1], rule, outer_floor, 0.0);
        value += acc.value;
        residual += check(acc, rule, "integrate_body (outer)")?.residual;
    }
    if let Some(e) = inner_error.into_inner() {
        return Err(e);
    }
    residual += inner_residual.get() * (hi - lo);
    Ok(Estimate { value, residual })
}

/// `∫∫_C φ(x, y) dm` as an iterated integral under the body's upper profile.
pub fn integrate_body<P: Fn(f64, f64) -> f64>(body: &Body, phi: P, rule: &QuadratureRule) -> Result<Estimate> {
    let breaks = body.breakpoints();
    integrate_graph_region(|x| body.profile(x), &breaks, phi, rule)
}
