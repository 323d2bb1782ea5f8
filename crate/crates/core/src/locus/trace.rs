//! Newton-continuation oracle for the seven loci.
//!
//! Each locus is traced in weighted coordinates adapted to the P3(c) origin:
//! with `t` the y-coordinate of the locus point, the chart point is
//! `x̄ = t²X`, the projection direction `u = tU` and, for bi-germs, the second
//! branch sits at `Y t`. The residuals are divided by their leading power of
//! `t` so the systems stay regular as `t → 0`. `(v, w)` are eliminated
//! exactly by the singular-point equations.

use rayon::prelude::*;

use super::family::{ProjectionFamily, SurfaceDerivs};
use super::newton::{fit_c1_c2, newton, NewtonOptions};
use super::{GermSource, LocusError, LocusGerm, LocusLabel};
use crate::germ::{crosscap_line_tangency, divided_coincidence, double_point_tangency, xi_phi, ChartMap, DensePoly2};
use crate::scalar::Scalar;
use crate::surface::SurfaceJet;

#[derive(Clone, Copy, Debug)]
pub struct TraceOptions {
    /// Half-width of the traced y-interval.
    pub y_range: f64,
    /// Total number of samples, split evenly between `y > 0` and `y < 0`.
    pub steps: usize,
    pub newton: NewtonOptions,
    pub parallel: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self { y_range: 0.05, steps: 50, newton: NewtonOptions::default(), parallel: true }
    }
}

/// A traced locus plus the value obtained with the opposite chart-change sign
/// (surface point `x̄ − u ȳ`), kept as a diagnostic.
#[derive(Clone, Debug)]
pub struct TraceOutcome {
    pub germ: LocusGerm<f64>,
    pub mirror_c2: Option<f64>,
    /// Number of distinct non-spurious roots found at the first step.
    pub roots: usize,
}

/// Which branch the locus point `(x, t)` belongs to.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Param {
    /// Singular point at `Y t`, regular point at `t`.
    Regular,
    /// Singular point at `t`, regular point at `Y t`.
    Singular,
}

struct Ctx {
    base: SurfaceDerivs,
    a32: f64,
    a44: f64,
    b33: f64,
    /// Ω coefficients `A, B, C` (flecnodal oracle only).
    omega: Option<[DensePoly2; 3]>,
    delta: Option<DensePoly2>,
}

fn checked_ctx<T: Scalar>(s: &SurfaceJet<T>) -> Result<(SurfaceJet<f64>, f64, f64, f64), LocusError> {
    let rep = s.detect_p3c()?;
    if let Some(f) = rep.failure {
        return Err(LocusError::NotP3c(f.to_string()));
    }
    if !rep.versal {
        return Err(LocusError::NonVersal);
    }
    Ok((s.to_f64(), rep.a32.to_f64(), rep.a44.to_f64(), rep.b33.to_f64()))
}

impl Ctx {
    fn new<T: Scalar>(s: &SurfaceJet<T>, label: LocusLabel) -> Result<Self, LocusError> {
        let (sf, a32, a44, b33) = checked_ctx(s)?;
        let omega = if label == LocusLabel::Flecnodal {
            let bde = crate::bde::asymptotic_bde(&sf)?;
            Some([DensePoly2::from_jet(&bde.a), DensePoly2::from_jet(&bde.b), DensePoly2::from_jet(&bde.c)])
        } else {
            None
        };
        let delta = if label == LocusLabel::Parabolic {
            Some(DensePoly2::from_jet(&sf.delta_polynomial()?))
        } else {
            None
        };
        Ok(Self { base: SurfaceDerivs::new(&sf), a32, a44, b33, omega, delta })
    }

    fn member(&self, u: f64, x: f64, y: f64) -> ProjectionFamily<'_> {
        let (v, w) = ProjectionFamily::singular_vw(&self.base, u, x, y);
        ProjectionFamily::new(&self.base, u, v, w)
    }

    fn nvars(&self, label: LocusLabel) -> usize {
        match label {
            LocusLabel::Parabolic => 1,
            l if l.is_bigerm() => 3,
            _ => 2,
        }
    }

    fn param(label: LocusLabel) -> Param {
        if label == LocusLabel::A0S1 {
            Param::Regular
        } else {
            Param::Singular
        }
    }

    /// Scaled residuals at parameter `t`.
    fn residual(&self, label: LocusLabel, t: f64, z: &[f64]) -> Vec<f64> {
        let t2 = t * t;
        match label {
            LocusLabel::Parabolic => {
                vec![self.delta.as_ref().map_or(f64::NAN, |d| d.d(0, 0, t2 * z[0], t)) / t2]
            }
            LocusLabel::Flecnodal => {
                let [a, b, c] = self.omega.as_ref().expect("flecnodal context");
                let (x, p) = (t2 * z[0], t * z[1]);
                let om = |i: usize, j: usize| a.d(i, j, x, t) + 2.0 * b.d(i, j, x, t) * p + c.d(i, j, x, t) * p * p;
                vec![om(0, 0) / t2, (om(0, 1) + p * om(1, 0)) / t]
            }
            LocusLabel::B2 | LocusLabel::S2 => {
                let (x, u) = (t2 * z[0], t * z[1]);
                let m = self.member(u, x, t);
                let cond = if label == LocusLabel::B2 { b2_condition(&m, x, t) } else { s2_condition(&m, x, t) };
                vec![xi_phi(&m, x, t) / t2, cond / t2]
            }
            LocusLabel::A0S1 | LocusLabel::A0S0A1 | LocusLabel::A0S0Sq => {
                let (x, u, y) = (t2 * z[0], t * z[1], z[2]);
                let (ys, yr) = match Self::param(label) {
                    Param::Regular => (y * t, t),
                    Param::Singular => (t, y * t),
                };
                let m = self.member(u, x, ys);
                let q = divided_coincidence(&m, x, ys, yr);
                let cond = match label {
                    LocusLabel::A0S1 => xi_phi(&m, x, ys),
                    LocusLabel::A0S0A1 => crosscap_line_tangency(&m, x, ys, yr),
                    _ => double_point_tangency(&m, x, ys, yr).unwrap_or(f64::NAN),
                };
                vec![q[0] / t2, q[1] / t, cond / t2]
            }
        }
    }

    /// Merged-branch system for `(A0S0)2`: both branches at the same point.
    fn merged_residual(&self, t: f64, z: &[f64]) -> Vec<f64> {
        let t2 = t * t;
        let (x, u) = (t2 * z[0], t * z[1]);
        let m = self.member(u, x, t);
        let q = divided_coincidence(&m, x, t, t);
        vec![q[0] / t2, q[1] / t]
    }

    /// Locus point `x` and its mirrored counterpart.
    fn point(&self, label: LocusLabel, t: f64, z: &[f64]) -> (f64, Option<f64>) {
        let t2 = t * t;
        match label {
            LocusLabel::Parabolic | LocusLabel::Flecnodal => (t2 * z[0], None),
            _ => (t2 * (z[0] + z[1]), Some(t2 * (z[0] - z[1]))),
        }
    }

    /// Rejects the spurious roots: `U = −3 b33` (where `ηηg → 0`, not a
    /// cross-cap) for local labels, merged branches for bi-germs.
    fn admissible(&self, label: LocusLabel, z: &[f64]) -> bool {
        if z.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match label {
            LocusLabel::B2 | LocusLabel::S2 => (z[1] + 3.0 * self.b33).abs() > 1e-2 * (1.0 + self.b33.abs()),
            l if l.is_bigerm() => (z[2] - 1.0).abs() > 0.05,
            _ => true,
        }
    }

    fn seeds(&self, label: LocusLabel) -> Vec<Vec<f64>> {
        match label {
            LocusLabel::Parabolic => (-8..=8).map(|k| vec![4.0 * k as f64]).collect(),
            LocusLabel::Flecnodal => grid(&[(-80.0, 80.0, 33), (-40.0, 40.0, 17)]),
            LocusLabel::B2 | LocusLabel::S2 => grid(&[(-80.0, 80.0, 33), (-12.0, 12.0, 25)]),
            _ => self.bigerm_seeds(label),
        }
    }

    /// Leading-order seeds from image coincidence: `U = −b33(2Y+1)` and `X`
    /// from the `t²` coefficient of `Q2`, written for the regular-point
    /// parametrization and rescaled for the singular one.
    fn bigerm_seeds(&self, label: LocusLabel) -> Vec<Vec<f64>> {
        let (a32, a44, b33) = (self.a32, self.a44, self.b33);
        let reg = |y: f64| {
            let u = -b33 * (2.0 * y + 1.0);
            let rest =
                u * u + 3.0 * a32 * u * y + 6.0 * a44 * y * y + (1.0 - y) * (a32 * u + 4.0 * a44 * y) + a44 * (1.0 - y).powi(2);
            (-rest / a32, u)
        };
        let n = 400;
        (0..=n)
            .map(|k| -10.0 + 20.0 * k as f64 / n as f64)
            .filter(|y: &f64| (y - 1.0).abs() >= 0.05 && (Self::param(label) == Param::Regular || y.abs() >= 0.05))
            .map(|y| match Self::param(label) {
                Param::Regular => {
                    let (x, u) = reg(y);
                    vec![x, u, y]
                }
                Param::Singular => {
                    let (x, u) = reg(1.0 / y);
                    vec![x * y * y, u * y, y]
                }
            })
            .collect()
    }
}

fn grid(axes: &[(f64, f64, usize)]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi, n) in axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |k| {
                    let mut q = p.clone();
                    q.push(lo + (hi - lo) * k as f64 / (n - 1) as f64);
                    q
                })
            })
            .collect();
    }
    out
}

/// `−g2_yyy g3_yy + g2_yy g3_yyy`.
fn b2_condition<M: ChartMap>(m: &M, x: f64, y: f64) -> f64 {
    -m.d(2, 0, 3, x, y) * m.d(3, 0, 2, x, y) + m.d(2, 0, 2, x, y) * m.d(3, 0, 3, x, y)
}

/// The six-term S2 determinant condition.
fn s2_condition<M: ChartMap>(m: &M, x: f64, y: f64) -> f64 {
    let g = |k, i, j| m.d(k, i, j, x, y);
    let (g3yy, g3xy, g2yy) = (g(3, 0, 2), g(3, 1, 1), g(2, 0, 2));
    -g(2, 2, 1) * g3yy.powi(3) + 2.0 * g3xy * g3yy * g3yy * g(2, 1, 2) - 2.0 * g3xy * g3yy * g2yy * g(3, 1, 2)
        + g2yy * g(3, 2, 1) * g3yy * g3yy
        - g3xy * g3xy * g(2, 0, 3) * g3yy
        + g3xy * g3xy * g2yy * g(3, 0, 3)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs() / (1.0 + y.abs())))
}

/// Distinct admissible roots at `t` from every seed.
fn roots_at<R, A>(res: &R, admissible: A, t: f64, seeds: &[Vec<f64>], opts: &NewtonOptions) -> Vec<Vec<f64>>
where
    R: Fn(f64, &[f64]) -> Vec<f64> + Sync,
    A: Fn(&[f64]) -> bool + Sync,
{
    let found: Vec<Vec<f64>> = seeds
        .par_iter()
        .filter_map(|s| newton(|z| res(t, z), s, opts).map(|r| r.x))
        .filter(|z| admissible(z))
        .collect();
    let mut uniq: Vec<Vec<f64>> = Vec::new();
    for z in found {
        if !uniq.iter().any(|u| dist(u, &z) < 1e-6) {
            uniq.push(z);
        }
    }
    uniq.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    uniq
}

struct Branch {
    /// `(y, x, x_mirror)`.
    points: Vec<(f64, f64, Option<f64>)>,
    roots: usize,
}

fn continue_branch<R, A, P>(
    label: LocusLabel,
    res: R,
    admissible: A,
    point: P,
    seeds: &[Vec<f64>],
    opts: &TraceOptions,
) -> Result<Branch, LocusError>
where
    R: Fn(f64, &[f64]) -> Vec<f64> + Sync,
    A: Fn(&[f64]) -> bool + Sync,
    P: Fn(f64, &[f64]) -> (f64, Option<f64>),
{
    let half = (opts.steps / 2).max(2);
    let dt = opts.y_range / half as f64;
    let mut points = Vec::with_capacity(2 * half);
    let mut pick: Option<Vec<f64>> = None;
    let mut nroots = 0;
    for sign in [1.0, -1.0] {
        let t1 = sign * dt;
        let roots = roots_at(&res, &admissible, t1, seeds, &opts.newton);
        let start = match &pick {
            None => {
                nroots = roots.len();
                roots.into_iter().next()
            }
            // The leading-order system is even in t, so the y < 0 side starts
            // from the root nearest the one chosen for y > 0.
            Some(p) => roots.into_iter().min_by(|a, b| dist(a, p).total_cmp(&dist(b, p))),
        };
        let mut z = start.ok_or(LocusError::NoBranch { label })?;
        if pick.is_none() {
            pick = Some(z.clone());
        }
        let mut last_good: Option<(f64, f64)> = None;
        for k in 1..=half {
            let t = sign * dt * k as f64;
            let r = newton(|q| res(t, q), &z, &opts.newton)
                .filter(|r| admissible(&r.x))
                .ok_or(LocusError::ContinuationFailure { label, y: t, last_good })?;
            z = r.x;
            let (x, xm) = point(t, &z);
            last_good = Some((t, x));
            points.push((t, x, xm));
        }
    }
    Ok(Branch { points, roots: nroots })
}

fn outcome(label: LocusLabel, b: Branch, source: GermSource) -> Result<TraceOutcome, LocusError> {
    let samples: Vec<(f64, f64)> = b.points.iter().map(|p| (p.0, p.1)).collect();
    let (c1, c2) = fit_c1_c2(&samples).ok_or(LocusError::NoBranch { label })?;
    let mirror: Option<Vec<(f64, f64)>> = b.points.iter().map(|p| p.2.map(|m| (p.0, m))).collect();
    let mirror_c2 = mirror.and_then(|m| fit_c1_c2(&m)).map(|f| f.1);
    Ok(TraceOutcome {
        germ: LocusGerm { label, c2, c1, series: None, samples, source },
        mirror_c2,
        roots: b.roots,
    })
}

/// Traces one locus and keeps the mirrored-chart diagnostic.
pub fn trace_locus_detailed<T: Scalar>(
    label: LocusLabel,
    s: &SurfaceJet<T>,
    opts: &TraceOptions,
) -> Result<TraceOutcome, LocusError> {
    let ctx = Ctx::new(s, label)?;
    let seeds = ctx.seeds(label);
    debug_assert!(seeds.iter().all(|z| z.len() == ctx.nvars(label)));
    let b = continue_branch(
        label,
        |t, z| ctx.residual(label, t, z),
        |z| ctx.admissible(label, z),
        |t, z| ctx.point(label, t, z),
        &seeds,
        opts,
    )?;
    outcome(label, b, GermSource::Oracle)
}

/// Oracle germ for `label`: refuses non-P3(c) and non-versal surfaces.
pub fn trace_locus<T: Scalar>(label: LocusLabel, s: &SurfaceJet<T>, opts: &TraceOptions) -> Result<LocusGerm<f64>, LocusError> {
    trace_locus_detailed(label, s, opts).map(|o| o.germ)
}

/// The merged `(A0S0)2` solutions (regular branch collapsed onto the
/// cross-cap). Not a bi-germ; reported only as a diagnostic.
pub fn trace_merged_a0s0sq<T: Scalar>(s: &SurfaceJet<T>, opts: &TraceOptions) -> Result<TraceOutcome, LocusError> {
    let label = LocusLabel::A0S0Sq;
    let ctx = Ctx::new(s, label)?;
    let seeds = grid(&[(-80.0, 80.0, 33), (-12.0, 12.0, 25)]);
    let b = continue_branch(
        label,
        |t, z| ctx.merged_residual(t, z),
        |z| z.iter().all(|v| v.is_finite()),
        |t, z| ctx.point(label, t, z),
        &seeds,
        opts,
    )?;
    outcome(label, b, GermSource::Oracle)
}

/// All seven loci, in `LocusLabel::ALL` order.
pub fn trace_all<T: Scalar>(s: &SurfaceJet<T>, opts: &TraceOptions) -> Vec<Result<TraceOutcome, LocusError>> {
    let run = |l: &LocusLabel| trace_locus_detailed(*l, s, opts);
    if opts.parallel {
        LocusLabel::ALL.par_iter().map(run).collect()
    } else {
        LocusLabel::ALL.iter().map(run).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::normal_form_surface;

    fn nf(a: f64, b: f64) -> SurfaceJet<f64> {
        normal_form_surface(a, b, None).unwrap()
    }

    #[test]
    fn b2_at_worked_point() {
        let g = trace_locus(LocusLabel::B2, &nf(-1.0, 1.0), &TraceOptions::default()).unwrap();
        assert!((g.c2 - 12.0).abs() < 1e-6, "{}", g.c2);
        assert!(g.c1.abs() < 1e-8);
    }

    #[test]
    fn parabolic_at_second_point() {
        let g = trace_locus(LocusLabel::Parabolic, &nf(2.0, -1.0), &TraceOptions::default()).unwrap();
        assert!((g.c2 + 27.0).abs() < 1e-6, "{}", g.c2);
    }

    #[test]
    fn s2_and_flecnodal_at_worked_point() {
        let s = nf(-1.0, 1.0);
        let o = TraceOptions::default();
        let gs = trace_locus(LocusLabel::S2, &s, &o).unwrap();
        let gf = trace_locus(LocusLabel::Flecnodal, &s, &o).unwrap();
        assert!((gs.c2 - 228.0 / 49.0).abs() < 1e-6, "{}", gs.c2);
        assert!((gf.c2 - 156.0 / 25.0).abs() < 1e-6, "{}", gf.c2);
    }

    #[test]
    fn bigerm_physical_and_mirrored_values() {
        let s = nf(-1.0, 1.0);
        let o = TraceOptions::default();
        let a = trace_locus_detailed(LocusLabel::A0S1, &s, &o).unwrap();
        assert!(a.germ.c2.abs() < 1e-6, "{}", a.germ.c2);
        assert!((a.mirror_c2.unwrap() - 2.0).abs() < 1e-6);
        let b = trace_locus_detailed(LocusLabel::A0S0A1, &s, &o).unwrap();
        assert!((b.germ.c2 - 0.75).abs() < 1e-6, "{}", b.germ.c2);
        assert!((b.mirror_c2.unwrap() - 3.75).abs() < 1e-6);
    }

    #[test]
    fn merged_a0s0sq_matches_printed_value_under_mirror() {
        let m = trace_merged_a0s0sq(&nf(-1.0, 1.0), &TraceOptions::default()).unwrap();
        assert!((m.mirror_c2.unwrap() - 9.0).abs() < 1e-6, "{:?}", m.mirror_c2);
    }

    #[test]
    fn refuses_non_versal() {
        // 4α + 6β² − 5β = 0 at β = 1, α = −1/4.
        let s = nf(-0.25, 1.0);
        assert!(matches!(trace_locus(LocusLabel::B2, &s, &TraceOptions::default()), Err(LocusError::NonVersal)));
    }
}
