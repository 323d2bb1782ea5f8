//! Bi-germ strata in the model versal family
//! `F(x, y; a, b, c, d) = (x, xy + y³ + ay, xy² + cy⁴ + by + dy³)`.
//!
//! The family is weighted homogeneous (x, a of weight 2, y, d of weight 1,
//! b of weight 3), so each bi-germ stratum is a curve `t ↦ (x, y1, a, b, d)`
//! with `y2 = t`. Unknowns are scaled by `t^weight` and residuals by their
//! own weight, which makes the Newton system well conditioned for small `t`.

use serde::Serialize;

use crate::germ::{bigerm_condition, divided_coincidence, singular_residual, BigermKind, DensePoly2, GermError, JetChart};
use crate::locus::newton::{newton, NewtonOptions};

const WEIGHTS: [i32; 5] = [2, 1, 2, 3, 1];
/// Weights of `(g2_y, g3_y, divided coincidence ×2, condition)`.
const RESIDUAL_WEIGHTS: [i32; 5] = [2, 3, 1, 2, 2];

/// Chart-form map of the model family at fixed parameters.
pub fn model_map(a: f64, b: f64, c: f64, d: f64) -> JetChart {
    let mut g2 = DensePoly2::zero(4);
    g2.add(1, 1, 1.0);
    g2.add(0, 3, 1.0);
    g2.add(0, 1, a);
    let mut g3 = DensePoly2::zero(4);
    g3.add(1, 2, 1.0);
    g3.add(0, 4, c);
    g3.add(0, 1, b);
    g3.add(0, 3, d);
    JetChart::from_dense(g2, g3)
}

/// Printed parameter curve `(x, y1, a, b, d)` at `y2 = t` (leading terms).
pub fn printed_curve(kind: BigermKind, c: f64, t: f64) -> [f64; 5] {
    let (t2, t3) = (t * t, t * t * t);
    match kind {
        BigermKind::A0S1 => [-3.0 * c * t2, -2.0 * t, (3.0 * c - 3.0) * t2, (5.0 * c - 6.0) * t3, (2.0 - c) * t],
        BigermKind::A0S0Sq => [-3.0 * c * t2, -2.0 * t, (3.0 * c - 3.0) * t2, (14.0 * c - 6.0) * t3, (2.0 - 4.0 * c) * t],
        BigermKind::A0S0A1 => [-3.0 * c * t2, -2.0 * t, (3.0 * c - 3.0) * t2, (3.0 - 4.0 * c) * t3, (2.0 * c - 1.0) * t],
    }
}

/// Residuals at `z = (x, y1, a, b, d)`, `y2 = t`: singular point at `(x, y2)`,
/// image coincidence with `(x, y1)` (trivial root divided out), and the kind's condition.
pub fn model_residuals(kind: BigermKind, c: f64, t: f64, z: &[f64; 5]) -> Result<[f64; 5], GermError> {
    let [x, y1, a, b, d] = *z;
    let m = model_map(a, b, c, d);
    let s = singular_residual(&m, x, t);
    let q = divided_coincidence(&m, x, t, y1);
    let cond = bigerm_condition(kind, &m, x, t, y1)?;
    Ok([s[0], s[1], q[0], q[1], cond])
}

fn scale(v: &[f64; 5], w: &[i32; 5], t: f64, up: bool) -> [f64; 5] {
    let mut out = *v;
    for (o, &k) in out.iter_mut().zip(w) {
        let f = t.powi(k);
        *o = if up { *o * f } else { *o / f };
    }
    out
}

/// Residuals in weight-scaled form; independent of `t` on a homogeneous curve.
pub fn scaled_residuals(kind: BigermKind, c: f64, t: f64, z: &[f64; 5]) -> Result<[f64; 5], GermError> {
    Ok(scale(&model_residuals(kind, c, t, z)?, &RESIDUAL_WEIGHTS, t, false))
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjacencySample {
    pub y2: f64,
    pub printed: [f64; 5],
    pub solved: Option<[f64; 5]>,
    /// Max scaled residual at the printed point.
    pub printed_residual: f64,
    /// Max scaled distance between the Newton solution and the printed point.
    pub distance: Option<f64>,
    /// `y1 / y2` at the Newton solution (1 means the branches merged).
    pub branch_ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjacencyCheck {
    pub kind: BigermKind,
    pub c: f64,
    pub samples: Vec<AdjacencySample>,
    pub max_printed_residual: f64,
    pub max_distance: Option<f64>,
    pub pass: bool,
}

/// Newton-solves the bi-germ conditions at `y2 = t` for each sample, seeded
/// near the printed curve, and compares with the printed curve at `tol`.
pub fn check_adjacency(kind: BigermKind, c: f64, ys: &[f64], tol: f64) -> AdjacencyCheck {
    let opts = NewtonOptions::default();
    let samples: Vec<AdjacencySample> = ys
        .iter()
        .map(|&t| {
            let printed = printed_curve(kind, c, t);
            let lead = scale(&printed, &WEIGHTS, t, false);
            let printed_residual = scaled_residuals(kind, c, t, &printed)
                .map(|r| r.iter().fold(0.0f64, |m, v| m.max(v.abs())))
                .unwrap_or(f64::INFINITY);
            let f = |u: &[f64]| {
                let z = scale(&[u[0], u[1], u[2], u[3], u[4]], &WEIGHTS, t, true);
                scaled_residuals(kind, c, t, &z).map_or(vec![f64::NAN; 5], |r| r.to_vec())
            };
            let seed: Vec<f64> = lead.iter().map(|v| v * 1.02 + 1e-3).collect();
            let sol = newton(f, &seed, &opts).map(|r| [r.x[0], r.x[1], r.x[2], r.x[3], r.x[4]]);
            let distance = sol.map(|s| s.iter().zip(&lead).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())));
            AdjacencySample {
                y2: t,
                printed,
                solved: sol.map(|s| scale(&s, &WEIGHTS, t, true)),
                printed_residual,
                distance,
                branch_ratio: sol.map(|s| s[1]),
            }
        })
        .collect();
    let max_printed_residual = samples.iter().fold(0.0f64, |m, s| m.max(s.printed_residual));
    let max_distance = samples.iter().try_fold(0.0f64, |m, s| s.distance.map(|d| m.max(d)));
    let pass = max_printed_residual < tol && max_distance.is_some_and(|d| d < tol);
    AdjacencyCheck { kind, c, samples, max_printed_residual, max_distance, pass }
}

/// Twenty symmetric samples of `y2` in `[−0.1, 0.1] \ {0}`.
pub fn default_samples() -> Vec<f64> {
    (1..=10).flat_map(|k| [-0.01 * k as f64, 0.01 * k as f64]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_a0s1_and_a0s0a1_curves_solve_the_conditions() {
        for c in [-1.0, 2.0, 3.0] {
            for kind in [BigermKind::A0S1, BigermKind::A0S0A1] {
                let r = check_adjacency(kind, c, &default_samples(), 1e-8);
                assert!(r.pass, "{kind:?} c={c}: {} {:?}", r.max_printed_residual, r.max_distance);
            }
        }
    }

    #[test]
    fn scaled_residuals_are_weight_homogeneous() {
        let z1 = printed_curve(BigermKind::A0S0Sq, 2.0, 0.03);
        let z2 = printed_curve(BigermKind::A0S0Sq, 2.0, 0.07);
        let r1 = scaled_residuals(BigermKind::A0S0Sq, 2.0, 0.03, &z1).unwrap();
        let r2 = scaled_residuals(BigermKind::A0S0Sq, 2.0, 0.07, &z2).unwrap();
        for (a, b) in r1.iter().zip(&r2) {
            assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn singular_point_and_a0s1_substitution() {
        // x2 = −6c y² − 3d y + 6y² after solving the singular-point equations
        let (c, t) = (2.0, 0.05);
        let z = printed_curve(BigermKind::A0S1, c, t);
        let r = model_residuals(BigermKind::A0S1, c, t, &z).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-15));
        assert!((z[0] - (-6.0 * c * t * t - 3.0 * z[4] * t + 6.0 * t * t)).abs() < 1e-15);
    }
}
