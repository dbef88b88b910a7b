//! Dense complex LU with partial pivoting, sized for Vandermonde matrices of
//! a few hundred rows.

use num_complex::Complex64;

/// Row-major square matrix factorized in place as `P A = L U`.
pub(crate) struct Lu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    singular: bool,
    log_abs_det: f64,
}

impl Lu {
    pub(crate) fn factor(mut a: Vec<Complex64>, n: usize) -> Self {
        debug_assert_eq!(a.len(), n * n);
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let floor = scale * f64::EPSILON * n as f64;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut log_abs_det = 0.0;
        let mut singular = scale == 0.0;
        for k in 0..n {
            let (p, pmag) =
                (k..n)
                    .map(|i| (i, a[i * n + k].norm()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmag <= floor {
                singular = true;
                break;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            log_abs_det += pmag.ln();
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let l = a[i * n + k] / pivot;
                a[i * n + k] = l;
                if l == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let u = a[k * n + j];
                    a[i * n + j] -= l * u;
                }
            }
        }
        Self { n, lu: a, perm, singular, log_abs_det: if singular { f64::NEG_INFINITY } else { log_abs_det } }
    }

    pub(crate) fn log_abs_det(&self) -> f64 {
        self.log_abs_det
    }

    pub(crate) fn is_singular(&self) -> bool {
        self.singular
    }

    #[cfg(test)]
    #[allow(clippy::needless_range_loop)]
    /// Solves `A x = b`.
    pub(crate) fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    /// Solves `Aᵀ x = b` (plain transpose, no conjugation).
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn solve_transpose(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ w = b, Lᵀ v = w, x = Pᵀ v
        let mut w = b.to_vec();
        for i in 0..n {
            let mut s = w[i];
            for j in 0..i {
                s -= self.lu[j * n + i] * w[j];
            }
            w[i] = s / self.lu[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = w[i];
            for j in i + 1..n {
                s -= self.lu[j * n + i] * w[j];
            }
            w[i] = s;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (k, &pk) in self.perm.iter().enumerate() {
            x[pk] = w[k];
        }
        x
    }
}
