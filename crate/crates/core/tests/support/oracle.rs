//! Generic numerical maximizer of the Gaussian regression log-likelihood.
//!
//! Works on raw row data and knows nothing about the closed-form solution:
//! the objective is summed term by term from Gaussian log-densities, and it
//! is maximized with a damped Newton method whose gradient and Hessian come
//! from central finite differences. Scales are optimized on the log scale.

#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

/// Maximizer output for one component.
#[derive(Debug, Clone)]
pub struct OracleComponent {
    pub beta0: f64,
    pub beta1: Vec<f64>,
    pub sigma: f64,
}

/// `sum_j sum_i ln N(y_ij; b0_j + z_i . b1_j, sigma_j^2)`.
pub fn brute_log_likelihood(
    y: &[Vec<f64>],
    z: &[Vec<f64>],
    beta0: &[f64],
    beta1: &[Vec<f64>],
    sigma: &[f64],
) -> f64 {
    let mut total = 0.0;
    for (yi, zi) in y.iter().zip(z) {
        for j in 0..beta0.len() {
            let mean = beta0[j] + beta1[j].iter().zip(zi).map(|(b, x)| b * x).sum::<f64>();
            let s2 = sigma[j] * sigma[j];
            total += -0.5 * (2.0 * PI * s2).ln() - (yi[j] - mean).powi(2) / (2.0 * s2);
        }
    }
    total
}

fn unpack(theta: &[f64], g: usize, p: usize) -> (Vec<f64>, Vec<Vec<f64>>, Vec<f64>) {
    let width = p + 2;
    let mut b0 = Vec::with_capacity(g);
    let mut b1 = Vec::with_capacity(g);
    let mut s = Vec::with_capacity(g);
    for j in 0..g {
        let block = &theta[j * width..(j + 1) * width];
        b0.push(block[0]);
        b1.push(block[1..=p].to_vec());
        s.push(block[p + 1].exp());
    }
    (b0, b1, s)
}

/// Maximizes the joint log-likelihood over all `g * (p + 2)` parameters.
pub fn maximize(y: &[Vec<f64>], z: &[Vec<f64>]) -> Vec<OracleComponent> {
    let g = y[0].len();
    let p = z[0].len();
    let dim = g * (p + 2);
    let objective = |theta: &[f64]| {
        let (b0, b1, s) = unpack(theta, g, p);
        brute_log_likelihood(y, z, &b0, &b1, &s)
    };

    // Start at zero coefficients and unit scale.
    let mut theta = vec![0.0; dim];
    let mut value = objective(&theta);
    let mut damping = 1e-3;
    let h = 1e-4;

    for _ in 0..500 {
        let (grad, hess) = derivatives(&objective, &theta, h);
        // Solve (-H + damping * I) step = grad.
        let mut accepted = false;
        for _ in 0..60 {
            let mut a = vec![vec![0.0; dim]; dim];
            for r in 0..dim {
                for c in 0..dim {
                    a[r][c] = -hess[r][c];
                }
                a[r][r] += damping * (1.0 + hess[r][r].abs());
            }
            let Some(step) = solve(a, grad.clone()) else {
                damping *= 10.0;
                continue;
            };
            let candidate: Vec<f64> = theta.iter().zip(&step).map(|(t, d)| t + d).collect();
            let cand_value = objective(&candidate);
            if cand_value.is_finite() && cand_value >= value {
                let moved = step.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
                theta = candidate;
                value = cand_value;
                damping = (damping / 10.0).max(1e-15);
                accepted = true;
                if moved < 1e-13 {
                    return finish(&theta, g, p);
                }
                break;
            }
            damping *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    finish(&theta, g, p)
}

fn finish(theta: &[f64], g: usize, p: usize) -> Vec<OracleComponent> {
    let (b0, b1, s) = unpack(theta, g, p);
    (0..g)
        .map(|j| OracleComponent {
            beta0: b0[j],
            beta1: b1[j].clone(),
            sigma: s[j],
        })
        .collect()
}

fn derivatives(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = x.len();
    let at = |shifts: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(i, s) in shifts {
            y[i] += s;
        }
        f(&y)
    };
    let f0 = f(x);
    let mut grad = vec![0.0; d];
    let mut hess = vec![vec![0.0; d]; d];
    for i in 0..d {
        let fp = at(&[(i, h)]);
        let fm = at(&[(i, -h)]);
        grad[i] = (fp - fm) / (2.0 * h);
        hess[i][i] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in 0..i {
            let v = (at(&[(i, h), (j, h)]) - at(&[(i, h), (j, -h)]) - at(&[(i, -h), (j, h)])
                + at(&[(i, -h), (j, -h)]))
                / (4.0 * h * h);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    (grad, hess)
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}
