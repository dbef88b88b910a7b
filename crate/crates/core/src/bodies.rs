//! Bodies `C` in the positive quadrant, their lattice points and geometric
//! functionals.
//!
//! Every supported body is a lower set bounded by a nonincreasing profile
//! `y = f(x)` on `[0, b]` with `f(0) = a`; its inverse `x = g(y)` on `[0, a]`
//! describes the same outer face.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::numerics::log_beta;
use crate::{Error, Result};

/// Tolerance on the defining inequality for boundary membership.
const MEMBERSHIP_TOL: f64 = 1e-12;
/// Gauge values this close to an integer count as that integer in `deg_C`.
const DEGREE_SNAP: f64 = 1e-9;

/// A lattice exponent `(j1, j2) ∈ ℕ²`, ordered graded-lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex2 {
    pub j1: u32,
    pub j2: u32,
}

impl MultiIndex2 {
    pub const fn new(j1: u32, j2: u32) -> Self {
        Self { j1, j2 }
    }

    pub fn total(self) -> u32 {
        self.j1 + self.j2
    }
}

impl From<(u32, u32)> for MultiIndex2 {
    fn from((j1, j2): (u32, u32)) -> Self {
        Self { j1, j2 }
    }
}

impl Ord for MultiIndex2 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then(self.j1.cmp(&other.j1)).then(self.j2.cmp(&other.j2))
    }
}

impl PartialOrd for MultiIndex2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j1, self.j2)
    }
}

/// Piecewise-linear nonincreasing profile `f` sampled at strictly increasing
/// abscissae, from `(0, a)` down to `(b, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphProfile {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl GraphProfile {
    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if xs.len() != fs.len() || xs.len() < 2 {
            return Err(Error::domain("profile needs at least two (x, f) samples of equal length"));
        }
        if xs.iter().chain(&fs).any(|v| !v.is_finite()) {
            return Err(Error::domain("profile samples must be finite"));
        }
        if xs[0] != 0.0 {
            return Err(Error::domain(format!("profile must start at x = 0, got {}", xs[0])));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("profile abscissae must be strictly increasing"));
        }
        if fs.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::domain("profile must be nonincreasing"));
        }
        if !(fs[0] > 0.0) {
            return Err(Error::domain("profile must start at a positive height f(0) = a"));
        }
        if *fs.last().unwrap() != 0.0 {
            return Err(Error::domain("profile must end at f(b) = 0"));
        }
        Ok(Self { xs, fs })
    }

    /// Samples `f` at `x_k = b·sin(πk/(2m))`, which clusters nodes near
    /// `x = b` where profiles like `√(1 − x²)` have a vertical tangent.
    pub fn from_fn(f: impl Fn(f64) -> f64, b: f64, m: usize) -> Result<Self> {
        if m < 1 || !(b > 0.0) {
            return Err(Error::domain("from_fn needs m ≥ 1 and b > 0"));
        }
        let mut xs = Vec::with_capacity(m + 1);
        let mut fs = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let x = if k == m { b } else { b * (std::f64::consts::FRAC_PI_2 * k as f64 / m as f64).sin() };
            xs.push(x);
            fs.push(if k == m { 0.0 } else { f(x).max(0.0) });
        }
        Self::new(xs, fs)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn fs(&self) -> &[f64] {
        &self.fs
    }

    pub fn width(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    pub fn height(&self) -> f64 {
        self.fs[0]
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.fs[0];
        }
        if x >= self.width() {
            return 0.0;
        }
        let i = self.xs.partition_point(|&s| s <= x) - 1;
        let (x0, x1, f0, f1) = (self.xs[i], self.xs[i + 1], self.fs[i], self.fs[i + 1]);
        f0 + (f1 - f0) * (x - x0) / (x1 - x0)
    }

    /// `g(y) = sup{x : f(x) ≥ y}`.
    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return self.width();
        }
        if y >= self.height() {
            return 0.0;
        }
        // last sample with f ≥ y; f is nonincreasing
        let i = self.fs.partition_point(|&f| f >= y) - 1;
        let (x0, x1, f0, f1) = (self.xs[i], self.xs[i + 1], self.fs[i], self.fs[i + 1]);
        x0 + (x1 - x0) * (f0 - y) / (f0 - f1)
    }

    fn is_concave(&self) -> bool {
        let tol = MEMBERSHIP_TOL * self.height().max(1.0);
        self.xs.windows(3).zip(self.fs.windows(3)).all(|(x, f)| {
            let chord = f[0] + (f[2] - f[0]) * (x[1] - x[0]) / (x[2] - x[0]);
            f[1] >= chord - tol
        })
    }

    fn scaled(&self, t: f64) -> Self {
        Self { xs: self.xs.iter().map(|x| x * t).collect(), fs: self.fs.iter().map(|f| f * t).collect() }
    }
}

/// Variant of a body. `LpBall` with `p = ∞` is the square `[0, r]²`.
#[derive(Debug, Clone, PartialEq)]
pub enum BodyKind {
    /// Vertices `(0,0)`, `(b,0)`, `(0,a)`.
    Triangle {
        a: f64,
        b: f64,
    },
    /// `[0, b] × [0, a]`.
    Rectangle {
        a: f64,
        b: f64,
    },
    /// `{x, y ≥ 0 : x^p + y^p ≤ r^p}`.
    LpBall {
        p: f64,
        radius: f64,
    },
    Graph(GraphProfile),
}

/// A body `C ⊂ (ℝ⁺)²` pinched between two simplices, `εΣ ⊂ C ⊂ δΣ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Body {
    kind: BodyKind,
    eps: f64,
    delta: f64,
}

/// Geometric functionals of a body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    /// Area of `C`.
    pub vol: f64,
    /// `∫∫_C (x + y) dm`.
    pub m_c: f64,
    /// `M_C / vol`.
    pub a_c: f64,
    /// `∫_0^b x f(x) dx`.
    pub face_a: f64,
    /// `∫_0^a y g(y) dy`.
    pub face_b: f64,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("{name} must be a positive finite number, got {v}")))
    }
}

impl Body {
    pub fn simplex() -> Self {
        Self::triangle(1.0, 1.0).expect("unit simplex")
    }

    pub fn triangle(a: f64, b: f64) -> Result<Self> {
        let (a, b) = (positive("a", a)?, positive("b", b)?);
        Ok(Self { kind: BodyKind::Triangle { a, b }, eps: a.min(b), delta: a.max(b) })
    }

    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        let (a, b) = (positive("a", a)?, positive("b", b)?);
        Ok(Self { kind: BodyKind::Rectangle { a, b }, eps: a.min(b), delta: a + b })
    }

    /// `C_p` with unit radius; `p = f64::INFINITY` gives the unit square.
    pub fn lp_ball(p: f64) -> Result<Self> {
        Self::lp_ball_with_radius(p, 1.0)
    }

    pub fn lp_ball_with_radius(p: f64, radius: f64) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::domain(format!("p must be positive, got {p}")));
        }
        let r = positive("radius", radius)?;
        // max of x + y on C_p is 2^{1-1/p}·r; C_p ⊂ rΣ when p ≤ 1
        let corner = if p.is_infinite() { 2.0 } else { 2f64.powf(1.0 - 1.0 / p) };
        let (eps, delta) = if p >= 1.0 { (r, r * corner) } else { (r * corner, r) };
        Ok(Self { kind: BodyKind::LpBall { p, radius: r }, eps, delta })
    }

    /// A convex body bounded by a concave piecewise-linear profile.
    pub fn graph(profile: GraphProfile) -> Result<Self> {
        if !profile.is_concave() {
            return Err(Error::domain("graph profile must be concave (convex body)"));
        }
        let eps = profile.width().min(profile.height());
        let delta = profile.xs.iter().zip(&profile.fs).map(|(x, f)| x + f).fold(0.0, f64::max);
        Ok(Self { kind: BodyKind::Graph(profile), eps, delta })
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    /// `(ε, δ)` with `εΣ ⊂ C ⊂ δΣ`.
    pub fn simplex_bounds(&self) -> (f64, f64) {
        (self.eps, self.delta)
    }

    /// All supported variants are lower sets.
    pub fn is_lower_set(&self) -> bool {
        true
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self.kind, BodyKind::LpBall { p, .. } if p < 1.0)
    }

    /// Symmetric about the diagonal `y = x`.
    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            BodyKind::Triangle { a, b } | BodyKind::Rectangle { a, b } => a == b,
            BodyKind::LpBall { .. } => true,
            BodyKind::Graph(g) => {
                g.width() == g.height()
                    && g.xs.iter().zip(&g.fs).all(|(&x, &f)| (g.inverse(x) - f).abs() <= 1e-12 * g.height())
            }
        }
    }

    /// Extent along the `x` axis (`b`).
    pub fn width(&self) -> f64 {
        match &self.kind {
            BodyKind::Triangle { b, .. } | BodyKind::Rectangle { b, .. } => *b,
            BodyKind::LpBall { radius, .. } => *radius,
            BodyKind::Graph(g) => g.width(),
        }
    }

    /// Extent along the `y` axis (`a`).
    pub fn height(&self) -> f64 {
        match &self.kind {
            BodyKind::Triangle { a, .. } | BodyKind::Rectangle { a, .. } => *a,
            BodyKind::LpBall { radius, .. } => *radius,
            BodyKind::Graph(g) => g.height(),
        }
    }

    /// Upper profile `f(x)` for `x ∈ [0, b]`, zero beyond.
    pub fn profile(&self, x: f64) -> f64 {
        if x > self.width() {
            return 0.0;
        }
        let x = x.max(0.0);
        match &self.kind {
            BodyKind::Triangle { a, b } => (a * (1.0 - x / b)).max(0.0),
            BodyKind::Rectangle { a, .. } => *a,
            BodyKind::LpBall { p, radius } => {
                if p.is_infinite() {
                    *radius
                } else {
                    radius * (1.0 - (x / radius).powf(*p)).max(0.0).powf(1.0 / p)
                }
            }
            BodyKind::Graph(g) => g.eval(x),
        }
    }

    /// Inverse profile `g(y)` for `y ∈ [0, a]`.
    pub fn inverse_profile(&self, y: f64) -> f64 {
        if y > self.height() {
            return 0.0;
        }
        let y = y.max(0.0);
        match &self.kind {
            BodyKind::Triangle { a, b } => (b * (1.0 - y / a)).max(0.0),
            BodyKind::Rectangle { b, .. } => *b,
            BodyKind::LpBall { .. } => self.profile(y),
            BodyKind::Graph(g) => g.inverse(y),
        }
    }

    /// Abscissae where the profile may have a kink, including `0` and `b`.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            BodyKind::Graph(g) => g.xs.clone(),
            _ => vec![0.0, self.width()],
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> Result<bool> {
        if !(x >= 0.0 && y >= 0.0) {
            return Err(Error::domain(format!("point ({x}, {y}) has a negative coordinate")));
        }
        let inside = match &self.kind {
            BodyKind::Triangle { a, b } => x / b + y / a <= 1.0 + MEMBERSHIP_TOL,
            BodyKind::Rectangle { a, b } => x / b <= 1.0 + MEMBERSHIP_TOL && y / a <= 1.0 + MEMBERSHIP_TOL,
            BodyKind::LpBall { p, radius } => {
                let (u, v) = (x / radius, y / radius);
                if p.is_infinite() {
                    u.max(v) <= 1.0 + MEMBERSHIP_TOL
                } else {
                    u.powf(*p) + v.powf(*p) <= 1.0 + MEMBERSHIP_TOL
                }
            }
            BodyKind::Graph(g) => {
                let b = g.width();
                x <= b * (1.0 + MEMBERSHIP_TOL) && y <= g.eval(x.min(b)) + MEMBERSHIP_TOL * g.height()
            }
        };
        Ok(inside)
    }

    /// `inf{t > 0 : α/t ∈ C}`; zero at the origin.
    pub fn gauge(&self, j1: f64, j2: f64) -> Result<f64> {
        if !(j1 >= 0.0 && j2 >= 0.0) {
            return Err(Error::domain(format!("gauge argument ({j1}, {j2}) has a negative coordinate")));
        }
        if j1 == 0.0 && j2 == 0.0 {
            return Ok(0.0);
        }
        let g = match &self.kind {
            BodyKind::Triangle { a, b } => j1 / b + j2 / a,
            BodyKind::Rectangle { a, b } => (j1 / b).max(j2 / a),
            BodyKind::LpBall { p, radius } => {
                if p.is_infinite() {
                    j1.max(j2) / radius
                } else {
                    // scale out the larger coordinate to keep powf in range
                    let m = j1.max(j2);
                    m * ((j1 / m).powf(*p) + (j2 / m).powf(*p)).powf(1.0 / p) / radius
                }
            }
            BodyKind::Graph(g) => self.graph_gauge(g, j1, j2),
        };
        Ok(g)
    }

    /// Exact ray/boundary intersection: the ray `y = kx` leaves the body
    /// through the first profile segment that drops to or below it, or
    /// through the right edge `x = b`.
    fn graph_gauge(&self, g: &GraphProfile, j1: f64, j2: f64) -> f64 {
        if j1 == 0.0 {
            return j2 / g.fs[0];
        }
        let k = j2 / j1;
        for i in 0..g.xs.len() - 1 {
            let (xa, xb, fa, fb) = (g.xs[i], g.xs[i + 1], g.fs[i], g.fs[i + 1]);
            if fb <= k * xb {
                let m = (fb - fa) / (xb - xa);
                let x = (fa - m * xa) / (k - m);
                return j1 / x;
            }
        }
        j1 / g.width()
    }

    /// `deg_C(z^α)`: the smallest `n` with `α ∈ nC`.
    pub fn degree(&self, alpha: MultiIndex2) -> u32 {
        let g = self.gauge(alpha.j1 as f64, alpha.j2 as f64).expect("lattice points are nonnegative");
        let r = g.round();
        if (g - r).abs() <= DEGREE_SNAP {
            r as u32
        } else {
            g.ceil() as u32
        }
    }

    /// `nC ∩ ℕ²` in ascending grlex order.
    pub fn enumerate_lattice(&self, n: u32) -> Result<Vec<MultiIndex2>> {
        if n == 0 {
            return Err(Error::domain("dilation n must be at least 1"));
        }
        let nf = n as f64;
        let max1 = (nf * self.width() * (1.0 + MEMBERSHIP_TOL)).floor() as u32;
        let max2 = (nf * self.height() * (1.0 + MEMBERSHIP_TOL)).floor() as u32;
        let mut out = Vec::new();
        for j1 in 0..=max1 {
            for j2 in 0..=max2 {
                if self.contains(j1 as f64 / nf, j2 as f64 / nf)? {
                    out.push(MultiIndex2::new(j1, j2));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn moments(&self) -> Result<Moments> {
        let (vol, face_a, face_b, m_c) = match &self.kind {
            BodyKind::Triangle { a, b } => {
                let (a, b) = (*a, *b);
                (a * b / 2.0, a * b * b / 6.0, a * a * b / 6.0, a * b / 6.0 * (a + b))
            }
            BodyKind::Rectangle { a, b } => {
                let (a, b) = (*a, *b);
                (a * b, a * b * b / 2.0, a * a * b / 2.0, a * b / 2.0 * (a + b))
            }
            BodyKind::LpBall { p, radius } => {
                let r = *radius;
                if p.is_infinite() {
                    (r * r, r.powi(3) / 2.0, r.powi(3) / 2.0, r.powi(3))
                } else {
                    let p = *p;
                    let vol = r * r * log_beta(1.0 / p, 1.0 / p)?.exp() / (2.0 * p);
                    let face = r.powi(3) * log_beta(1.0 / p, 2.0 / p)?.exp() / (3.0 * p);
                    (vol, face, face, 2.0 * face)
                }
            }
            BodyKind::Graph(g) => graph_moments(g),
        };
        Ok(Moments { vol, m_c, a_c: m_c / vol, face_a, face_b })
    }

    /// The dilate `tC`, in the same variant family.
    pub fn scale(&self, t: f64) -> Result<Self> {
        let t = positive("scale factor", t)?;
        let kind = match &self.kind {
            BodyKind::Triangle { a, b } => BodyKind::Triangle { a: a * t, b: b * t },
            BodyKind::Rectangle { a, b } => BodyKind::Rectangle { a: a * t, b: b * t },
            BodyKind::LpBall { p, radius } => BodyKind::LpBall { p: *p, radius: radius * t },
            BodyKind::Graph(g) => BodyKind::Graph(g.scaled(t)),
        };
        Ok(Self { kind, eps: self.eps * t, delta: self.delta * t })
    }
}

/// Segment-exact moments of a piecewise-linear profile. Products of two
/// linear functions are quadratic, so Simpson's rule is exact per segment.
fn graph_moments(g: &GraphProfile) -> (f64, f64, f64, f64) {
    let simpson = |h: f64, v0: f64, vm: f64, v1: f64| h / 6.0 * (v0 + 4.0 * vm + v1);
    let (mut vol, mut face_a, mut half_sq) = (0.0, 0.0, 0.0);
    for (x, f) in g.xs.windows(2).zip(g.fs.windows(2)) {
        let h = x[1] - x[0];
        let (xm, fm) = (0.5 * (x[0] + x[1]), 0.5 * (f[0] + f[1]));
        vol += 0.5 * h * (f[0] + f[1]);
        face_a += simpson(h, x[0] * f[0], xm * fm, x[1] * f[1]);
        half_sq += 0.5 * simpson(h, f[0] * f[0], fm * fm, f[1] * f[1]);
    }
    // ∫ y g(y) dy along the inverse: walk the samples from (b, 0) up to (0, a)
    let mut face_b = 0.0;
    for (x, f) in g.xs.windows(2).zip(g.fs.windows(2)).rev() {
        let h = f[0] - f[1];
        if h <= 0.0 {
            continue;
        }
        let (ym, xm) = (0.5 * (f[0] + f[1]), 0.5 * (x[0] + x[1]));
        face_b += simpson(h, f[1] * x[1], ym * xm, f[0] * x[0]);
    }
    (vol, face_a, face_b, face_a + half_sq)
}
