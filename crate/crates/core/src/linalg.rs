//! Dense complex linear algebra at extended precision.

use crate::error::{Error, Result};
use crate::precision::Complex;

/// LU factorization with partial pivoting, row-major.
pub struct Lu {
    lu: Vec<Vec<Complex>>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(mut a: Vec<Vec<Complex>>) -> Result<Self> {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())
                .unwrap();
            if a[p][k].is_zero() {
                return Err(Error::IllConditioned {
                    lost_digits: f64::INFINITY,
                    guard_digits: 0,
                });
            }
            a.swap(k, p);
            perm.swap(k, p);
            let pivot = a[k][k].clone();
            for i in k + 1..n {
                let factor = &a[i][k] / &pivot;
                for j in k + 1..n {
                    let t = &factor * &a[k][j];
                    a[i][j] -= &t;
                }
                a[i][k] = factor;
            }
        }
        Ok(Lu { lu: a, perm })
    }

    pub fn solve(&self, b: &[Complex]) -> Vec<Complex> {
        let n = self.lu.len();
        let mut x: Vec<Complex> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                let t = &self.lu[i][j] * &x[j];
                x[i] -= &t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = &self.lu[i][j] * &x[j];
                x[i] -= &t;
            }
            x[i] = &x[i] / &self.lu[i][i];
        }
        x
    }

    /// Columns of the inverse.
    pub fn inverse(&self) -> Vec<Vec<Complex>> {
        let n = self.lu.len();
        let prec = self.lu[0][0].prec();
        (0..n)
            .map(|j| {
                let mut e = vec![Complex::zero(prec); n];
                e[j] = Complex::one(prec);
                self.solve(&e)
            })
            .collect()
    }
}

/// Infinity norm of a row-major matrix.
pub fn norm_inf_rows(a: &[Vec<Complex>]) -> f64 {
    a.iter()
        .map(|row| row.iter().map(|v| v.abs_f64()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Infinity norm of a matrix given by its columns.
pub fn norm_inf_cols(cols: &[Vec<Complex>]) -> f64 {
    if cols.is_empty() {
        return 0.0;
    }
    (0..cols[0].len())
        .map(|i| cols.iter().map(|c| c[i].abs_f64()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves `a x = b` and returns `x` with `log10` of the infinity-norm
/// condition number.
pub fn solve_with_condition(a: Vec<Vec<Complex>>, b: &[Complex]) -> Result<(Vec<Complex>, f64)> {
    let norm_a = norm_inf_rows(&a);
    let lu = Lu::factor(a)?;
    let x = lu.solve(b);
    let inv = lu.inverse();
    let cond = norm_a * norm_inf_cols(&inv);
    Ok((x, cond.log10()))
}

#[cfg(test)]
pub(crate) fn dot(a: &[Complex], b: &[Complex]) -> Complex {
    let prec = a.first().map(|v| v.prec()).unwrap_or(64);
    let mut s = Complex::zero(prec);
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let p = 200;
        let c = |a: f64, b: f64| Complex::from_f64(p, a, b);
        let a = vec![
            vec![c(2.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(3.0, 0.0), c(0.0, 2.0)],
            vec![c(0.0, 1.0), c(1.0, 1.0), c(4.0, 0.0)],
        ];
        let x_true = vec![c(1.0, -1.0), c(0.5, 0.25), c(-2.0, 3.0)];
        let b: Vec<Complex> = a.iter().map(|row| dot(row, &x_true)).collect();
        let (x, lc) = solve_with_condition(a, &b).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs_f64() < 1e-55);
        }
        assert!(lc > 0.0 && lc < 2.0);
    }
}
