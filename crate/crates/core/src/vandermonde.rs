//! Monomial bases of `Poly(nC)`, log-Vandermonde determinants and greedy
//! Fekete search, plus the ball's orthogonal-monomial asymptotics.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::bodies::{Body, MultiIndex2};
use crate::compacta::{shilov_candidates, Compact2, Point2};
use crate::linalg::Lu;
use crate::numerics::log_factorial;
use crate::{Error, Result};

/// Relative improvement an exchange must make to be accepted.
const EXCHANGE_GAIN: f64 = 1e-12;
const MAX_SWEEPS: usize = 20;

/// Number of Leja starting candidates tried by [`fekete_search`].
pub const LEJA_SEEDS: usize = 16;

/// Grlex-ordered monomial basis of `Poly(nC)`.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub body: Body,
    pub n: u32,
    pub indices: Vec<MultiIndex2>,
    /// `dim Poly(nC)`.
    pub d_n: usize,
    /// `Σ_j deg(e_j)` with the ordinary total degree `j1 + j2`, so that
    /// `l_n / (n d_n) → A_C`. The C-degree would give the mean gauge
    /// over `C` instead, which differs from `A_C` off the simplex.
    pub l_n: u64,
}

impl MonomialBasis {
    pub fn new(body: &Body, n: u32) -> Result<Self> {
        let indices = body.enumerate_lattice(n)?;
        let l_n = indices.iter().map(|&a| a.total() as u64).sum();
        Ok(Self { body: body.clone(), n, d_n: indices.len(), l_n, indices })
    }

    /// Matrix of basis values, row `i` = `e_i`, column `j` = point `j`.
    fn matrix(&self, points: &[Point2]) -> Vec<Complex64> {
        let (m1, m2) = self.indices.iter().fold((0, 0), |(a, b), ix| (a.max(ix.j1), b.max(ix.j2)));
        let cols = points.len();
        let mut out = vec![Complex64::new(0.0, 0.0); self.d_n * cols];
        for (j, p) in points.iter().enumerate() {
            let pow1 = powers(p[0], m1);
            let pow2 = powers(p[1], m2);
            for (i, ix) in self.indices.iter().enumerate() {
                out[i * cols + j] = pow1[ix.j1 as usize] * pow2[ix.j2 as usize];
            }
        }
        out
    }
}

fn powers(z: Complex64, m: u32) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(m as usize + 1);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..=m {
        v.push(acc);
        acc *= z;
    }
    v
}

/// `basis(C, n)`.
pub fn basis(body: &Body, n: u32) -> Result<MonomialBasis> {
    MonomialBasis::new(body, n)
}

/// `ln |det[e_i(ζ_j)]|`, or `-∞` for a singular configuration.
pub fn log_vdm(points: &[Point2], basis: &MonomialBasis) -> Result<f64> {
    if points.len() != basis.d_n {
        return Err(Error::domain(format!("expected {} points, got {}", basis.d_n, points.len())));
    }
    Ok(Lu::factor(basis.matrix(points), basis.d_n).log_abs_det())
}

/// Outcome of a Fekete search.
#[derive(Debug, Clone, Serialize)]
pub struct FeketeResult {
    pub n: u32,
    pub d_n: usize,
    pub l_n: u64,
    /// Lower bound for `ln V_n`.
    pub log_vdm: f64,
    /// `exp(log_vdm / l_n)`.
    pub delta_estimate: f64,
    #[serde(serialize_with = "points_as_rows")]
    pub points: Vec<Point2>,
}

fn points_as_rows<S: Serializer>(points: &[Point2], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(points.iter().map(|p| [p[0].re, p[0].im, p[1].re, p[1].im]))
}

/// Greedy Leja growth followed by single-point exchange sweeps, selecting
/// `d_n` of the candidates to maximize the Vandermonde determinant.
///
/// Single-point exchanges can stall at a local maximum (on the unit torus
/// with `C = Σ, n = 1` the first Leja sequence ends at `|det| = 4` while the
/// grid allows `≈ 5.15`), so the search is repeated from up to
/// [`LEJA_SEEDS`] evenly strided starting candidates and the best run is
/// kept. Ties go to the lowest index, so the result does not depend on
/// evaluation order.
pub fn fekete_search(candidates: &[Point2], body: &Body, n: u32) -> Result<FeketeResult> {
    let basis = MonomialBasis::new(body, n)?;
    let d = basis.d_n;
    if candidates.len() < d {
        return Err(Error::domain(format!("need at least {d} candidates, got {}", candidates.len())));
    }
    if basis.l_n == 0 {
        return Err(Error::domain("l_n = 0: nC contains only the origin"));
    }
    let cols = candidates.len();
    let m = basis.matrix(candidates);
    let stride = cols.div_ceil(LEJA_SEEDS).max(1);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for seed in (0..cols).step_by(stride) {
        let Some(start) = greedy_leja(&m, d, cols, seed) else { continue };
        let run = exchange_sweeps(&m, d, cols, start);
        let value = Lu::factor(submatrix(&m, d, cols, &run), d).log_abs_det();
        let better = match &best {
            None => true,
            Some((b, _)) => value > b + EXCHANGE_GAIN * b.abs().max(1.0),
        };
        if better {
            best = Some((value, run));
        }
    }
    let chosen = match best {
        Some((_, c)) => c,
        None => fill_remaining(Vec::new(), d, cols),
    };
    let points: Vec<Point2> = chosen.iter().map(|&i| candidates[i]).collect();
    let log_vdm = log_vdm(&points, &basis)?;
    Ok(FeketeResult { n, d_n: d, l_n: basis.l_n, log_vdm, delta_estimate: (log_vdm / basis.l_n as f64).exp(), points })
}

fn column(m: &[Complex64], rows: usize, cols: usize, j: usize) -> Vec<Complex64> {
    (0..rows).map(|i| m[i * cols + j]).collect()
}

fn submatrix(m: &[Complex64], rows: usize, cols: usize, chosen: &[usize]) -> Vec<Complex64> {
    let k = chosen.len();
    let mut out = Vec::with_capacity(rows * k);
    for i in 0..rows {
        out.extend(chosen.iter().map(|&j| m[i * cols + j]));
    }
    out
}

/// Index of the first maximal score, counting near-ties as ties.
fn first_max(scores: impl Iterator<Item = (usize, f64)>) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (j, s) in scores {
        match best {
            Some((_, b)) if s <= b * (1.0 + EXCHANGE_GAIN) => {}
            _ => best = Some((j, s)),
        }
    }
    best
}

/// Starting from `seed`, step `k` appends the candidate maximizing the Schur
/// complement of basis row `k`, i.e. `|det V_{k+1}| / |det V_k|`. `None` if
/// the candidates cannot span the basis.
fn greedy_leja(m: &[Complex64], d: usize, cols: usize, seed: usize) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = vec![seed];
    let mut taken = vec![false; cols];
    taken[seed] = true;
    for k in 1..d {
        let lu = Lu::factor(submatrix(m, k, cols, &chosen), k);
        let row: Vec<Complex64> = chosen.iter().map(|&j| m[k * cols + j]).collect();
        let y = lu.solve_transpose(&row);
        let score = |j: usize| -> f64 {
            let mut s = m[k * cols + j];
            for (i, yi) in y.iter().enumerate() {
                s -= yi * m[i * cols + j];
            }
            s.norm()
        };
        let (best, val) = first_max((0..cols).filter(|&j| !taken[j]).map(|j| (j, score(j))))?;
        if val == 0.0 || !val.is_finite() {
            return None;
        }
        chosen.push(best);
        taken[best] = true;
    }
    Some(chosen)
}

/// Replaces chosen point `i` by candidate `j` whenever `|(V⁻¹ M)_{ij}| > 1`,
/// which is exactly the determinant ratio of the swap.
fn exchange_sweeps(m: &[Complex64], d: usize, cols: usize, mut chosen: Vec<usize>) -> Vec<usize> {
    for _ in 0..MAX_SWEEPS {
        let mut changed = false;
        for i in 0..d {
            let lu = Lu::factor(submatrix(m, d, cols, &chosen), d);
            if lu.is_singular() {
                return chosen;
            }
            let taken: Vec<bool> = (0..cols).map(|j| chosen.contains(&j)).collect();
            // row i of V⁻¹ M: solve Vᵀ w = e_i, then w · M[:, j]
            let mut e = vec![Complex64::new(0.0, 0.0); d];
            e[i] = Complex64::new(1.0, 0.0);
            let w = lu.solve_transpose(&e);
            let ratio = |j: usize| -> f64 {
                let col = column(m, d, cols, j);
                w.iter().zip(&col).map(|(a, b)| a * b).sum::<Complex64>().norm()
            };
            if let Some((j, r)) = first_max((0..cols).filter(|&j| !taken[j]).map(|j| (j, ratio(j)))) {
                if r > 1.0 + EXCHANGE_GAIN {
                    chosen[i] = j;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    chosen
}

fn fill_remaining(mut chosen: Vec<usize>, d: usize, cols: usize) -> Vec<usize> {
    let mut j = 0;
    while chosen.len() < d && j < cols {
        if !chosen.contains(&j) {
            chosen.push(j);
        }
        j += 1;
    }
    chosen
}

/// Per-`n` Fekete estimates on the distinguished-boundary candidate grid.
pub fn delta_trend(k: &Compact2, body: &Body, n_list: &[u32], resolution: usize) -> Result<Vec<FeketeResult>> {
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("n list must be strictly increasing"));
    }
    let candidates = shilov_candidates(k, resolution)?;
    n_list.iter().map(|&n| fekete_search(&candidates, body, n)).collect()
}

/// `Q_n = Σ_{(a,b) ∈ nC} ln(a! b! / (a + b + 1)!)`, the log-product of squared
/// `L²(σ)` norms of the monomials on the sphere.
pub fn q_n_ball(body: &Body, n: u32) -> Result<f64> {
    let pts = body.enumerate_lattice(n)?;
    Ok(pts
        .iter()
        .map(|ix| {
            let (a, b) = (ix.j1 as u64, ix.j2 as u64);
            log_factorial(a) + log_factorial(b) - log_factorial(a + b + 1)
        })
        .sum())
}

/// Finite-`n` estimate `exp(vol·Q_n / (2 n d_n M_C))` of `δ_C(𝔹)`.
pub fn delta_ball_qn(body: &Body, n: u32) -> Result<f64> {
    let d_n = body.enumerate_lattice(n)?.len() as f64;
    let m = body.moments()?;
    let q = q_n_ball(body, n)?;
    Ok((m.vol * q / (2.0 * n as f64 * d_n * m.m_c)).exp())
}

/// Eliminates a leading `c·ln(n)/n` error term from two estimates of a limit.
pub fn richardson_log_n_over_n(n1: u32, v1: f64, n2: u32, v2: f64) -> f64 {
    let w = |n: u32| (n as f64).ln() / n as f64;
    let (w1, w2) = (w(n1), w(n2));
    (v2 * w1 - v1 * w2) / (w1 - w2)
}
