//! Planar compacta with their univariate potential theory, and circled sets
//! in `ℂ²` whose monomial sup-norms are explicit.

use num_complex::Complex64;

use crate::bodies::MultiIndex2;
use crate::{Error, Result};

/// A point of `ℂ²`.
pub type Point2 = [Complex64; 2];

#[derive(Debug, Clone, PartialEq)]
pub enum PlanarCompact {
    Disk {
        r: f64,
    },
    Circle {
        r: f64,
    },
    Interval {
        lo: f64,
        hi: f64,
    },
    /// Finite candidate set for the univariate Fekete oracle.
    PointCloud(Vec<Complex64>),
}

impl PlanarCompact {
    pub fn disk(r: f64) -> Result<Self> {
        check_radius(r)?;
        Ok(Self::Disk { r })
    }

    pub fn circle(r: f64) -> Result<Self> {
        check_radius(r)?;
        Ok(Self::Circle { r })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::domain(format!("interval needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self::Interval { lo, hi })
    }

    pub fn point_cloud(points: Vec<Complex64>) -> Result<Self> {
        if distinct_count(&points) < 2 {
            return Err(Error::domain("point cloud needs at least two distinct points"));
        }
        Ok(Self::PointCloud(points))
    }

    /// Radius when the set is a disk or a circle centred at the origin.
    pub fn circled_radius(&self) -> Option<f64> {
        match self {
            Self::Disk { r } | Self::Circle { r } => Some(*r),
            _ => None,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Self::Disk { .. } => "disk",
            Self::Circle { .. } => "circle",
            Self::Interval { .. } => "interval",
            Self::PointCloud(_) => "point cloud",
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("radius must be positive, got {r}")))
    }
}

fn distinct_count(points: &[Complex64]) -> usize {
    let mut seen: Vec<(u64, u64)> = points.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Green function of `ℂ \ E` with pole at infinity.
pub fn green(e: &PlanarCompact, z: Complex64) -> Result<f64> {
    match e {
        PlanarCompact::Disk { r } => Ok((z.norm() / r).ln().max(0.0)),
        PlanarCompact::Interval { lo, hi } => {
            let w = (2.0 * z - (lo + hi)) / (hi - lo);
            let s = (w * w - 1.0).sqrt();
            let v = if (w + s).norm() >= 1.0 { w + s } else { w - s };
            Ok(v.norm().ln().max(0.0))
        }
        other => Err(Error::unsupported(format!("no closed-form Green function for a {}", other.name()))),
    }
}

/// `ρ_E = lim (g_E(z) − ln|z|)`.
pub fn robin_constant(e: &PlanarCompact) -> Result<f64> {
    match e {
        PlanarCompact::Disk { r } => Ok(-r.ln()),
        PlanarCompact::Interval { lo, hi } => Ok(-((hi - lo) / 4.0).ln()),
        other => Err(Error::unsupported(format!("no closed-form Robin constant for a {}", other.name()))),
    }
}

/// Univariate transfinite diameter (logarithmic capacity) `D(E)`.
pub fn transfinite_diameter_1d(e: &PlanarCompact) -> Result<f64> {
    match e {
        PlanarCompact::Circle { r } => Ok(*r),
        PlanarCompact::PointCloud(_) => {
            Err(Error::unsupported("a finite point cloud has zero capacity; use fekete_univariate"))
        }
        other => Ok((-robin_constant(other)?).exp()),
    }
}

pub const UNIVARIATE_SWEEPS: usize = 200;

/// Result of the univariate Fekete oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateFekete {
    pub points: Vec<Complex64>,
    /// `Σ_{i<j} ln|z_i − z_j|`.
    pub log_vdm: f64,
    /// `exp(2·log_vdm / (N(N−1)))`.
    pub estimate: f64,
}

/// Greedy Leja selection of `n` candidates followed by single-point exchange
/// sweeps until a sweep changes nothing (at most [`UNIVARIATE_SWEEPS`]).
pub fn fekete_univariate(candidates: &[Complex64], n: usize) -> Result<UnivariateFekete> {
    if n < 2 {
        return Err(Error::domain("need N ≥ 2 points"));
    }
    if distinct_count(candidates) < n {
        return Err(Error::domain(format!(
            "need at least {n} distinct candidates, got {}",
            distinct_count(candidates)
        )));
    }
    let potential = |c: Complex64, chosen: &[usize], skip: Option<usize>| -> f64 {
        chosen.iter().enumerate().filter(|&(k, _)| Some(k) != skip).map(|(_, &j)| (c - candidates[j]).norm().ln()).sum()
    };

    // Leja start: a point of maximal modulus
    let first = argmax(candidates.iter().map(|z| z.norm()), |_| true);
    let mut chosen = vec![first];
    while chosen.len() < n {
        let next = argmax(candidates.iter().map(|&c| potential(c, &chosen, None)), |i| !chosen.contains(&i));
        chosen.push(next);
    }
    for _ in 0..UNIVARIATE_SWEEPS {
        let mut changed = false;
        for i in 0..n {
            let current = potential(candidates[chosen[i]], &chosen, Some(i));
            let best = argmax(candidates.iter().map(|&c| potential(c, &chosen, Some(i))), |j| !chosen.contains(&j));
            if potential(candidates[best], &chosen, Some(i)) > current + 1e-12 * current.abs().max(1.0) {
                chosen[i] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let points: Vec<Complex64> = chosen.iter().map(|&i| candidates[i]).collect();
    let mut log_vdm = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            log_vdm += (points[i] - points[j]).norm().ln();
        }
    }
    let estimate = (2.0 * log_vdm / (n * (n - 1)) as f64).exp();
    Ok(UnivariateFekete { points, log_vdm, estimate })
}

/// Index of the first maximal value among admissible indices.
fn argmax(values: impl Iterator<Item = f64>, admissible: impl Fn(usize) -> bool) -> usize {
    let mut best = (usize::MAX, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if admissible(i) && (best.0 == usize::MAX || v > best.1) {
            best = (i, v);
        }
    }
    best.0
}

/// `E × F ⊂ ℂ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSet {
    pub e: PlanarCompact,
    pub f: PlanarCompact,
}

impl ProductSet {
    pub fn new(e: PlanarCompact, f: PlanarCompact) -> Self {
        Self { e, f }
    }

    /// The product as a polydisk when both factors are disks or circles
    /// centred at the origin.
    pub fn as_polydisk(&self) -> Option<CircledSet2> {
        Some(CircledSet2::Polydisk { r1: self.e.circled_radius()?, r2: self.f.circled_radius()? })
    }
}

/// Outer boundary `r2 = h(r1)` of the modulus region of a complete circled
/// set, piecewise linear and nonincreasing on `[0, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusCurve {
    r1: Vec<f64>,
    h: Vec<f64>,
    /// Slopes nonincreasing, so `ln r1`-weighted objectives are unimodal.
    concave: bool,
}

impl ModulusCurve {
    pub fn new(r1: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        if r1.len() != h.len() || r1.len() < 2 {
            return Err(Error::domain("modulus curve needs at least two (r1, h) samples"));
        }
        if r1.iter().chain(&h).any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::domain("modulus curve samples must be finite and nonnegative"));
        }
        if r1[0] != 0.0 || r1.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("modulus curve must start at r1 = 0 with strictly increasing r1"));
        }
        if h.windows(2).any(|w| w[1] > w[0]) || !(h[0] > 0.0) {
            return Err(Error::domain("modulus curve h must be nonincreasing with h(0) > 0"));
        }
        let slopes: Vec<f64> = (0..r1.len() - 1).map(|i| (h[i + 1] - h[i]) / (r1[i + 1] - r1[i])).collect();
        let tol = 1e-12 * slopes.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        let concave = slopes.windows(2).all(|w| w[1] <= w[0] + tol);
        Ok(Self { r1, h, concave })
    }

    pub fn r_max(&self) -> f64 {
        *self.r1.last().unwrap()
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return self.h[0];
        }
        if r >= self.r_max() {
            return *self.h.last().unwrap();
        }
        let i = self.r1.partition_point(|&s| s <= r) - 1;
        let t = (r - self.r1[i]) / (self.r1[i + 1] - self.r1[i]);
        self.h[i] + t * (self.h[i + 1] - self.h[i])
    }

    /// `max_{r1} θ1 ln r1 + θ2 ln h(r1)` over the outer boundary.
    ///
    /// On a segment `h = α + βr` the objective is concave with stationary
    /// point `r* = −θ1 α / (β(θ1 + θ2))`, so each segment contributes its
    /// value at `r*` clamped to the segment. For concave `h` the objective
    /// is concave overall and only the two segments around the best vertex
    /// are examined.
    fn log_sup(&self, t1: f64, t2: f64) -> f64 {
        if t1 == 0.0 {
            return t2 * self.h[0].ln();
        }
        if t2 == 0.0 {
            return t1 * self.r_max().ln();
        }
        let segments = self.r1.len() - 1;
        if !self.concave {
            return (0..segments).map(|i| self.segment_sup(i, t1, t2)).fold(f64::NEG_INFINITY, f64::max);
        }
        let at = |j: usize| {
            let (r, h) = (self.r1[j], self.h[j]);
            if r > 0.0 && h > 0.0 {
                t1 * r.ln() + t2 * h.ln()
            } else {
                f64::NEG_INFINITY
            }
        };
        let (mut lo, mut hi) = (0, segments);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if at(mid) < at(mid + 1) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let left = self.segment_sup(lo.saturating_sub(1), t1, t2);
        left.max(self.segment_sup(lo.min(segments - 1), t1, t2))
    }

    fn segment_sup(&self, i: usize, t1: f64, t2: f64) -> f64 {
        let (ra, rb, ha, hb) = (self.r1[i], self.r1[i + 1], self.h[i], self.h[i + 1]);
        let beta = (hb - ha) / (rb - ra);
        let r = if beta < 0.0 {
            let alpha = ha - beta * ra;
            (-t1 * alpha / (beta * (t1 + t2))).clamp(ra, rb)
        } else {
            rb
        };
        let h = if r == rb { hb } else { ha + beta * (r - ra) };
        if r > 0.0 && h > 0.0 {
            t1 * r.ln() + t2 * h.ln()
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// A complete 2-circled compact set, described by its modulus region.
#[derive(Debug, Clone, PartialEq)]
pub enum CircledSet2 {
    /// `|z1|² + |z2|² ≤ r²`.
    Ball {
        r: f64,
    },
    Polydisk {
        r1: f64,
        r2: f64,
    },
    ModulusCurve(ModulusCurve),
}

impl CircledSet2 {
    pub fn unit_ball() -> Self {
        Self::Ball { r: 1.0 }
    }

    pub fn ball(r: f64) -> Result<Self> {
        check_radius(r)?;
        Ok(Self::Ball { r })
    }

    pub fn polydisk(r1: f64, r2: f64) -> Result<Self> {
        check_radius(r1)?;
        check_radius(r2)?;
        Ok(Self::Polydisk { r1, r2 })
    }

    /// `ln τ(K, θ) = ln max_K |z1|^θ1 |z2|^θ2`, with `0⁰ = 1` on the axes.
    pub fn log_tau(&self, t1: f64, t2: f64) -> f64 {
        match self {
            Self::Ball { r } => {
                let s = t1 + t2;
                if s == 0.0 {
                    return 0.0;
                }
                // t ln(t/s) = −t ln(1 + u/t) stays accurate when u ≪ t
                let xlx = |t: f64, u: f64| if t == 0.0 { 0.0 } else { -t * (u / t).ln_1p() };
                s * r.ln() + 0.5 * (xlx(t1, t2) + xlx(t2, t1))
            }
            Self::Polydisk { r1, r2 } => t1 * r1.ln() + t2 * r2.ln(),
            Self::ModulusCurve(c) => c.log_sup(t1, t2),
        }
    }
}

/// A compact set in `ℂ²` accepted by the Fekete and sup-norm routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Compact2 {
    Product(ProductSet),
    Circled(CircledSet2),
}

impl Compact2 {
    /// The set as a circled set, if it is one.
    pub fn as_circled(&self) -> Option<CircledSet2> {
        match self {
            Self::Product(p) => p.as_polydisk(),
            Self::Circled(c) => Some(c.clone()),
        }
    }
}

impl From<ProductSet> for Compact2 {
    fn from(p: ProductSet) -> Self {
        Self::Product(p)
    }
}

impl From<CircledSet2> for Compact2 {
    fn from(c: CircledSet2) -> Self {
        Self::Circled(c)
    }
}

/// `‖z^α‖_K`, which for circled `K` is also the minimal sup-norm over the
/// monic class of `α`.
pub fn sup_norm_monomial(k: &Compact2, alpha: MultiIndex2) -> Result<f64> {
    let circled = k
        .as_circled()
        .ok_or_else(|| Error::unsupported("sup_norm_monomial needs a circled set or a product of disks"))?;
    let (j1, j2) = (alpha.j1 as f64, alpha.j2 as f64);
    Ok(match &circled {
        CircledSet2::Polydisk { r1, r2 } => r1.powf(j1) * r2.powf(j2),
        _ => circled.log_tau(j1, j2).exp(),
    })
}

/// Directional Chebyshev constant `τ(K, θ)` of a circled set.
pub fn tau_circled(k: &CircledSet2, theta: (f64, f64)) -> f64 {
    k.log_tau(theta.0, theta.1).exp()
}

/// Candidate points on the distinguished boundary of `K` for Fekete search.
///
/// Products of disks/circles give the `res × res` torus grid of scaled
/// roots of unity. Balls and modulus curves give `(ρ1 e^{is}, ρ2 e^{it})`
/// with `(ρ1, ρ2)` on `res/4 + 1` boundary moduli, dropping duplicate
/// points where a modulus vanishes.
pub fn shilov_candidates(k: &Compact2, resolution: usize) -> Result<Vec<Point2>> {
    if resolution < 3 {
        return Err(Error::domain(format!("resolution must be at least 3, got {resolution}")));
    }
    let roots: Vec<Complex64> = (0..resolution)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / resolution as f64))
        .collect();
    let torus = |r1: f64, r2: f64, out: &mut Vec<Point2>| {
        let first: Vec<Complex64> =
            if r1 == 0.0 { vec![Complex64::new(0.0, 0.0)] } else { roots.iter().map(|w| w * r1).collect() };
        let second: Vec<Complex64> =
            if r2 == 0.0 { vec![Complex64::new(0.0, 0.0)] } else { roots.iter().map(|w| w * r2).collect() };
        for &a in &first {
            for &b in &second {
                out.push([a, b]);
            }
        }
    };
    let mut out = Vec::new();
    match k {
        Compact2::Product(p) => {
            let c = p
                .as_polydisk()
                .ok_or_else(|| Error::unsupported("torus candidates need disk or circle factors centred at 0"))?;
            let CircledSet2::Polydisk { r1, r2 } = c else { unreachable!() };
            torus(r1, r2, &mut out);
        }
        Compact2::Circled(CircledSet2::Polydisk { r1, r2 }) => torus(*r1, *r2, &mut out),
        Compact2::Circled(c) => {
            if resolution < 4 {
                return Err(Error::domain("ball candidates need resolution ≥ 4"));
            }
            let m = resolution / 4;
            for i in 0..=m {
                let (rho1, rho2) = match c {
                    CircledSet2::Ball { r } => {
                        let phi = std::f64::consts::FRAC_PI_2 * i as f64 / m as f64;
                        // snap the axis endpoints so that cos(π/2) is exactly 0
                        let (s, co) = if i == m { (1.0, 0.0) } else { phi.sin_cos() };
                        (r * co, r * s)
                    }
                    CircledSet2::ModulusCurve(curve) => {
                        let r = curve.r_max() * i as f64 / m as f64;
                        (r, curve.eval(r))
                    }
                    CircledSet2::Polydisk { .. } => unreachable!(),
                };
                torus(rho1, rho2, &mut out);
            }
        }
    }
    Ok(out)
}
