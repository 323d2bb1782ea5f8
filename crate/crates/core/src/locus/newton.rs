//! Damped Newton with a finite-difference Jacobian, and the least-squares
//! polynomial fit used to read off `c1, c2`.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Copy, Debug)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub fd_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 60, fd_step: 1e-7 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonResult {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| if x.is_nan() { f64::INFINITY } else { m.max(x.abs()) })
}

/// Solves the square system `f(x) = 0` from `x0`; `None` when it does not
/// reach `tol` in the max-norm.
pub fn newton<F>(f: F, x0: &[f64], opts: &NewtonOptions) -> Option<NewtonResult>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = f(&x);
    let mut rn = norm_inf(&r);
    for it in 0..opts.max_iter {
        if rn <= opts.tol {
            return Some(NewtonResult { x, residual: rn, iterations: it });
        }
        if !rn.is_finite() {
            return None;
        }
        let mut jac = DMatrix::zeros(r.len(), n);
        for j in 0..n {
            let h = opts.fd_step * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (fp, fm) = (f(&xp), f(&xm));
            for i in 0..r.len() {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let rhs = DVector::from_iterator(r.len(), r.iter().map(|v| -v));
        let step = jac.lu().solve(&rhs)?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let xt: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + lambda * d).collect();
            let rt = f(&xt);
            let rtn = norm_inf(&rt);
            if rtn < rn || rtn <= opts.tol {
                x = xt;
                r = rt;
                rn = rtn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return if rn <= opts.tol { Some(NewtonResult { x, residual: rn, iterations: it }) } else { None };
        }
    }
    (rn <= opts.tol).then_some(NewtonResult { x, residual: rn, iterations: opts.max_iter })
}

/// Least-squares polynomial fit `x ≈ Σ e_k y^k`, `k = 0..=degree`, with `y`
/// rescaled to `[-1, 1]` for conditioning. Returns `e`.
pub fn polyfit(samples: &[(f64, f64)], degree: usize) -> Option<Vec<f64>> {
    if samples.len() <= degree {
        return None;
    }
    let ymax = samples.iter().fold(0.0f64, |m, (y, _)| m.max(y.abs()));
    if ymax == 0.0 {
        return None;
    }
    let a = DMatrix::from_fn(samples.len(), degree + 1, |i, k| (samples[i].0 / ymax).powi(k as i32));
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let sol = a.svd(true, true).solve(&b, 1e-14).ok()?;
    Some(sol.iter().enumerate().map(|(k, v)| v / ymax.powi(k as i32)).collect())
}

/// `(c1, c2)` of `x = c1 y + c2 y² + …` from symmetric samples.
pub fn fit_c1_c2(samples: &[(f64, f64)]) -> Option<(f64, f64)> {
    let e = polyfit(samples, 8.min(samples.len().saturating_sub(1)))?;
    Some((e[1], e[2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_small_system() {
        let f = |v: &[f64]| vec![v[0] * v[0] + v[1] * v[1] - 1.0, v[0] - v[1]];
        let r = newton(f, &[1.0, 0.2], &NewtonOptions::default()).unwrap();
        let s = 0.5f64.sqrt();
        assert!((r.x[0] - s).abs() < 1e-12 && (r.x[1] - s).abs() < 1e-12);
    }

    #[test]
    fn reports_failure() {
        let f = |v: &[f64]| vec![v[0] * v[0] + 1.0];
        assert!(newton(f, &[0.5], &NewtonOptions::default()).is_none());
    }

    #[test]
    fn fit_recovers_coefficients() {
        let samples: Vec<(f64, f64)> = (1..=25)
            .flat_map(|k| {
                let y = 0.002 * k as f64;
                [y, -y]
            })
            .map(|y| (y, 3.0 * y * y - 2.0 * y.powi(3) + 7.0 * y.powi(4)))
            .collect();
        let (c1, c2) = fit_c1_c2(&samples).unwrap();
        assert!(c1.abs() < 1e-10);
        assert!((c2 - 3.0).abs() < 1e-9);
    }
}
