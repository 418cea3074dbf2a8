//! Shared helpers for the integration tests: random convex quadratics and an
//! exact minimizer over the unit simplex by support enumeration.

#![allow(dead_code, clippy::needless_range_loop)]

use pvm::{Objective, QuadraticObjective};
use rand::Rng;

/// `P = A^T A + shift I` with `A` uniform in [-1, 1], `q` uniform in [-1, 1].
pub fn random_convex_quadratic(rng: &mut impl Rng, m: usize, shift: f64) -> QuadraticObjective {
    let a: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let mut p = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            p[i][j] = (0..m).map(|k| a[k][i] * a[k][j]).sum::<f64>();
        }
        p[i][i] += shift;
    }
    let q = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    QuadraticObjective::new(p, q).unwrap()
}

/// Dense Gaussian elimination with partial pivoting; `None` when singular.
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Minimum of a strictly convex quadratic over `{x >= 0, sum x = tau}` from the
/// KKT system of every candidate support.
pub fn simplex_minimum(f: &QuadraticObjective, tau: f64) -> (f64, Vec<f64>) {
    let m = f.dim();
    let mut best = (f64::INFINITY, vec![0.0; m]);
    for mask in 1u32..(1 << m) {
        let s: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let k = s.len();
        // [P_SS 1; 1^T 0] [x_S; nu] = [q_S; tau]
        let mut a = vec![vec![0.0; k + 1]; k + 1];
        let mut b = vec![0.0; k + 1];
        for (r, &i) in s.iter().enumerate() {
            for (c, &j) in s.iter().enumerate() {
                a[r][c] = f.entry(i, j);
            }
            a[r][k] = 1.0;
            a[k][r] = 1.0;
            b[r] = f.q()[i];
        }
        b[k] = tau;
        let Some(sol) = solve_linear(a, b) else { continue };
        if sol[..k].iter().any(|&v| v < -1e-12) {
            continue;
        }
        let mut x = vec![0.0; m];
        for (r, &i) in s.iter().enumerate() {
            x[i] = sol[r].max(0.0);
        }
        let value = f.value(&x);
        if value < best.0 {
            best = (value, x);
        }
    }
    best
}
