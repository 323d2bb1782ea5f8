//! Binary differential equations `A dy² + 2B dx dy + C dx² = 0`.
//!
//! With `p = dx/dy` the equation reads `Ω(x, y, p) = A + 2Bp + Cp² = 0`.

use serde::Serialize;
use thiserror::Error;

use crate::jet::{Jet, JetError, MAX_BOUND};
use crate::locus::{GermSource, LocusGerm, LocusLabel};
use crate::scalar::Scalar;
use crate::surface::{GeometryError, SurfaceJet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BdeError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("non-generic configuration: {0} vanishes")]
    NonGeneric(&'static str),
    #[error("could not project seed ({x}, {y}, {p}) onto the criminant")]
    Projection { x: f64, y: f64, p: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bde<T> {
    pub a: Jet<T>,
    pub b: Jet<T>,
    pub c: Jet<T>,
}

/// The asymptotic-curve BDE: `A = bn − cm`, `2B = an − cl`, `C = am − bl`.
/// Products are kept exactly (no truncation of the polynomial surface).
pub fn asymptotic_bde<T: Scalar>(s: &SurfaceJet<T>) -> Result<Bde<T>, GeometryError> {
    let h = s.half_hessians()?;
    let h = h.with_bound((2 * h.a.bound()).clamp(2, MAX_BOUND - 2))?;
    let half = T::from_ratio(1, 2);
    Ok(Bde {
        a: &h.b * &h.n - &h.c * &h.m,
        b: (&h.a * &h.n - &h.c * &h.l).scale(&half),
        c: &h.a * &h.m - &h.b * &h.l,
    })
}

impl<T: Scalar> Bde<T> {
    pub fn new(a: Jet<T>, b: Jet<T>, c: Jet<T>) -> Result<Self, BdeError> {
        for j in [&b, &c] {
            if j.nvars() != a.nvars() || a.nvars() != 2 {
                return Err(JetError::DimensionMismatch { left: a.nvars(), right: j.nvars() }.into());
            }
        }
        Ok(Self { a, b, c })
    }

    /// `B² − AC`.
    pub fn discriminant(&self) -> Jet<T> {
        &(&self.b * &self.b) - &(&self.a * &self.c)
    }

    /// `Ω(x, y, p)` as a 3-variable jet of bound 8, exact for the surface BDE.
    pub fn omega(&self) -> Result<Jet<T>, JetError> {
        let lift = |j: &Jet<T>| j.lift_nvars(3).and_then(|l| l.with_bound(MAX_BOUND));
        let p = Jet::var(3, MAX_BOUND, 2)?;
        let two = T::from_i64(2);
        Ok(&(&lift(&self.a)? + &(&lift(&self.b)? * &p).scale(&two)) + &(&(&lift(&self.c)? * &p) * &p))
    }

    /// `ξ = pΩ_p ∂x + Ω_p ∂y − (Ω_y + pΩ_x) ∂p`, tangent to `Ω = 0`.
    pub fn lifted_field(&self) -> Result<LiftedField<T>, JetError> {
        let om = self.omega()?;
        let p = Jet::var(3, MAX_BOUND, 2)?;
        let (ox, oy, op) = (om.partial(0)?, om.partial(1)?, om.partial(2)?);
        let (ox, oy, op) = (ox.with_bound(MAX_BOUND)?, oy.with_bound(MAX_BOUND)?, op.with_bound(MAX_BOUND)?);
        Ok(LiftedField { fx: &p * &op, fy: op.clone(), fp: -(&oy + &(&p * &ox)), omega: om })
    }

    /// Real asymptotic directions at a point: roots of `C p² + 2B p + A`,
    /// counting `p = ∞` (the direction `dy = 0`) when `C` vanishes.
    pub fn directions_at(&self, x: f64, y: f64) -> Result<u8, JetError> {
        let f = self.to_f64();
        let (a, b, c) = (f.a.eval(&[x, y])?, f.b.eval(&[x, y])?, f.c.eval(&[x, y])?);
        let disc = b * b - a * c;
        let scale = 1e-12 * (a.abs() + b.abs() + c.abs()).max(1e-300);
        Ok(if a.abs() <= scale && b.abs() <= scale && c.abs() <= scale {
            u8::MAX
        } else if disc > scale * scale {
            2
        } else if disc < -scale * scale {
            0
        } else {
            1
        })
    }

    pub fn to_f64(&self) -> Bde<f64> {
        Bde { a: self.a.to_f64(), b: self.b.to_f64(), c: self.c.to_f64() }
    }

    /// Linear part at the origin of the field projected to the criminant,
    /// in coordinates `(y, p)` with `x` eliminated via `Ω = 0`.
    pub fn folded_linearization(&self) -> Result<[[f64; 2]; 2], BdeError> {
        let om = self.omega()?.to_f64();
        let d = |e: [u8; 3]| om.derivative(e).map(|j| j.eval_origin());
        let ox = d([1, 0, 0])?;
        if ox.abs() < 1e-14 {
            return Err(BdeError::NonGeneric("Omega_x at the folded point"));
        }
        let (oy, op) = (d([0, 1, 0])?, d([0, 0, 1])?);
        let (xy, xp) = (-oy / ox, -op / ox);
        let (opx, opy, opp) = (d([1, 0, 1])?, d([0, 1, 1])?, d([0, 0, 2])?);
        let (oxy, oyy) = (d([1, 1, 0])?, d([0, 2, 0])?);
        // G = Ω_y + pΩ_x at p = 0: G_x = Ω_xy, G_y = Ω_yy, G_p = Ω_yp + Ω_x.
        let (gx, gy, gp) = (oxy, oyy, opy + ox);
        Ok([[opy + xy * opx, opp + xp * opx], [-(gy + xy * gx), -(gp + xp * gx)]])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftedField<T> {
    pub fx: Jet<T>,
    pub fy: Jet<T>,
    pub fp: Jet<T>,
    pub omega: Jet<T>,
}

impl<T: Scalar> LiftedField<T> {
    /// `ξ(Ω)`, identically zero for a field tangent to the criminant.
    pub fn tangency_defect(&self) -> Result<Jet<T>, JetError> {
        let om = &self.omega;
        Ok(&(&(&self.fx * &om.partial(0)?.with_bound(MAX_BOUND)?) + &(&self.fy * &om.partial(1)?.with_bound(MAX_BOUND)?))
            + &(&self.fp * &om.partial(2)?.with_bound(MAX_BOUND)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FoldedType {
    FoldedSaddle,
    FoldedNode,
    FoldedFocus,
    NonGeneric,
}

impl std::fmt::Display for FoldedType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoldedClassification {
    pub kind: FoldedType,
    /// `q = −6β² − 4α + 5β`.
    pub q: f64,
    pub trace: f64,
    pub det: f64,
    /// `(re, im)` of both eigenvalues.
    pub eigenvalues: [(f64, f64); 2],
    pub threshold_kind: FoldedType,
    pub eigen_kind: FoldedType,
    pub agree: bool,
}

/// `q = −6β² − 4α + 5β`.
pub fn folded_q<T: Scalar>(alpha: &T, beta: &T) -> T {
    T::from_i64(5) * beta.clone() - T::from_i64(6) * beta.clone() * beta.clone() - T::from_i64(4) * alpha.clone()
}

/// Projected linearization on the normal form: `[[3β, 1], [6(α−β), ½ − 3β]]`.
pub fn normal_form_linearization<T: Scalar>(alpha: &T, beta: &T) -> [[T; 2]; 2] {
    let three = T::from_i64(3);
    [
        [three.clone() * beta.clone(), T::one()],
        [T::from_i64(6) * (alpha.clone() - beta.clone()), T::from_ratio(1, 2) - three * beta.clone()],
    ]
}

fn threshold_kind<T: Scalar>(q: &T) -> FoldedType {
    let edge = T::from_ratio(1, 24);
    if q.is_zero_at(1.0) || (q.clone() - edge.clone()).is_zero_at(1.0) {
        FoldedType::NonGeneric
    } else if *q < T::zero() {
        FoldedType::FoldedSaddle
    } else if *q < edge {
        FoldedType::FoldedNode
    } else {
        FoldedType::FoldedFocus
    }
}

/// Eigenvalue route: saddle iff `det < 0`, node iff `0 < det < tr²/4`, focus otherwise.
pub fn eigen_classify(m: &[[f64; 2]; 2]) -> (FoldedType, f64, f64, [(f64, f64); 2]) {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr / 4.0 - det;
    let eig = if disc >= 0.0 {
        let r = disc.sqrt();
        [(tr / 2.0 - r, 0.0), (tr / 2.0 + r, 0.0)]
    } else {
        let r = (-disc).sqrt();
        [(tr / 2.0, -r), (tr / 2.0, r)]
    };
    let gate = 1e-9 * (1.0 + tr * tr);
    let kind = if det.abs() <= gate || disc.abs() <= gate {
        FoldedType::NonGeneric
    } else if eig[0].1 == 0.0 && eig[0].0 * eig[1].0 < 0.0 {
        FoldedType::FoldedSaddle
    } else if eig[0].1 == 0.0 {
        FoldedType::FoldedNode
    } else {
        FoldedType::FoldedFocus
    };
    (kind, tr, det, eig)
}

/// Classifies the folded singularity of the normal-form BDE by both routes.
/// The eigenvalue route decides; `agree` records the cross-check.
pub fn classify_folded<T: Scalar>(alpha: &T, beta: &T) -> FoldedClassification {
    let q = folded_q(alpha, beta);
    let tk = threshold_kind(&q);
    let lin = normal_form_linearization(alpha, beta).map(|r| r.map(|v| v.to_f64()));
    let (ek, trace, det, eigenvalues) = eigen_classify(&lin);
    let kind = if tk == FoldedType::NonGeneric { FoldedType::NonGeneric } else { ek };
    FoldedClassification { kind, q: q.to_f64(), trace, det, eigenvalues, threshold_kind: tk, eigen_kind: ek, agree: tk == ek }
}

/// Classification from a surface BDE's own linearization (any chart where the
/// folded singularity sits at the origin with `p = 0`).
pub fn classify_bde<T: Scalar>(bde: &Bde<T>) -> Result<(FoldedType, [[f64; 2]; 2]), BdeError> {
    let lin = bde.folded_linearization()?;
    Ok((eigen_classify(&lin).0, lin))
}

/// 2-jet of the inflection (flecnodal) curve by elimination of `Ω = Ω_y + pΩ_x = 0`:
/// solve `Ω = 0` for `x(y, p)`, then `G(y, p) = 0` for `p(y)`.
#[derive(Clone, Debug)]
pub struct Inflection<T> {
    pub germ: LocusGerm<T>,
    /// `p(y)`.
    pub p_series: Jet<T>,
}

pub fn inflection_locus<T: Scalar>(bde: &Bde<T>) -> Result<Inflection<T>, BdeError> {
    let order = 4;
    let om = bde.omega()?.truncate(order);
    if om.coeff([1, 0, 0]).is_zero_at(1.0) {
        return Err(BdeError::NonGeneric("Omega_x at the origin"));
    }
    let xs = om.implicit_solve(0, order)?;
    let p = Jet::var(3, order, 2)?;
    let g = &om.partial(1)?.with_bound(order)? + &(&p * &om.partial(0)?.with_bound(order)?);
    let g = g.substitute(0, &xs)?;
    if g.coeff([0, 0, 1]).is_zero_at(1.0) {
        return Err(BdeError::NonGeneric("a32 - 6*b33"));
    }
    let ps = g.truncate(order - 1).implicit_solve(2, order - 1)?;
    let x_of_y = xs.substitute(2, &ps.with_bound(order)?)?.truncate(2);
    Ok(Inflection {
        germ: LocusGerm {
            label: LocusLabel::Flecnodal,
            c2: x_of_y.coeff([0, 2, 0]),
            c1: x_of_y.coeff([0, 1, 0]),
            series: Some(x_of_y),
            samples: Vec::new(),
            source: GermSource::Elimination,
        },
        p_series: ps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurveEnd {
    LeftBox,
    MaxSteps,
    Stalled,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralCurve {
    /// Projected `(x, y)` polyline.
    pub points: Vec<(f64, f64)>,
    /// Projected cusps, where `Ω_p` changes sign.
    pub cusps: Vec<(f64, f64)>,
    /// Net turns of `(y, p)` around the folded point.
    pub rotation: f64,
    pub end: CurveEnd,
}

#[derive(Clone, Copy, Debug)]
pub struct IntegrateOptions {
    pub step: f64,
    /// Half-width of the `(x, y)` box.
    pub half_width: f64,
    pub max_steps: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self { step: 1e-3, half_width: 0.3, max_steps: 200_000 }
    }
}

/// Float evaluator of the lifted field.
struct FieldEval {
    f: [Jet<f64>; 3],
    om: Jet<f64>,
    op: Jet<f64>,
    ox: Jet<f64>,
}

impl FieldEval {
    fn new<T: Scalar>(bde: &Bde<T>) -> Result<Self, JetError> {
        let lf = bde.to_f64().lifted_field()?;
        Ok(Self { op: lf.omega.partial(2)?, ox: lf.omega.partial(0)?, f: [lf.fx, lf.fy, lf.fp], om: lf.omega })
    }

    fn eval(&self, z: &[f64; 3]) -> [f64; 3] {
        let e = |j: &Jet<f64>| j.eval(z).unwrap_or(f64::NAN);
        [e(&self.f[0]), e(&self.f[1]), e(&self.f[2])]
    }

    /// 1-d Newton in `p` onto `Ω = 0`; falls back to Newton in `x` when no
    /// real `p` exists over the seed (elliptic side of the discriminant).
    fn project(&self, z: [f64; 3]) -> Option<[f64; 3]> {
        self.newton_in(z, 2, &self.op).or_else(|| self.newton_in(z, 0, &self.ox))
    }

    fn newton_in(&self, z: [f64; 3], var: usize, d: &Jet<f64>) -> Option<[f64; 3]> {
        let mut q = z;
        for _ in 0..50 {
            let r = self.om.eval(&q).ok()?;
            if r.abs() <= 1e-12 {
                return Some(q);
            }
            let dv = d.eval(&q).ok()?;
            if dv.abs() < 1e-14 {
                return None;
            }
            q[var] -= r / dv;
        }
        (self.om.eval(&q).ok()?.abs() <= 1e-9).then_some(q)
    }
}

fn rk4(fe: &FieldEval, z: &[f64; 3], h: f64) -> [f64; 3] {
    let add = |a: &[f64; 3], b: &[f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    let k1 = fe.eval(z);
    let k2 = fe.eval(&add(z, &k1, h / 2.0));
    let k3 = fe.eval(&add(z, &k2, h / 2.0));
    let k4 = fe.eval(&add(z, &k3, h));
    [0, 1, 2].map(|i| z[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Fixed-step RK4 integration of the lifted field from each seed `(x, y, p)`,
/// forward (`h > 0`) or backward in time. Seeds off `Ω = 0` beyond 1e−9 are
/// first projected by Newton in `p`.
pub fn integrate_curves<T: Scalar>(
    bde: &Bde<T>,
    seeds: &[[f64; 3]],
    opts: &IntegrateOptions,
) -> Result<Vec<IntegralCurve>, BdeError> {
    let fe = FieldEval::new(bde)?;
    seeds
        .iter()
        .map(|s| {
            let om = fe.om.eval(s)?;
            let z0 = if om.abs() > 1e-9 {
                fe.project(*s).ok_or(BdeError::Projection { x: s[0], y: s[1], p: s[2] })?
            } else {
                *s
            };
            Ok(integrate_one(&fe, z0, opts))
        })
        .collect()
}

fn integrate_one(fe: &FieldEval, z0: [f64; 3], opts: &IntegrateOptions) -> IntegralCurve {
    let mut z = z0;
    let mut points = vec![(z[0], z[1])];
    let mut cusps = Vec::new();
    let mut angle = 0.0;
    let mut prev_ang = z[2].atan2(z[1]);
    let mut prev_op = fe.op.eval(&z).unwrap_or(0.0);
    let mut end = CurveEnd::MaxSteps;
    for _ in 0..opts.max_steps {
        let zn = rk4(fe, &z, opts.step);
        if zn.iter().any(|v| !v.is_finite()) {
            end = CurveEnd::Stalled;
            break;
        }
        if (zn[0] - z[0]).abs() + (zn[1] - z[1]).abs() + (zn[2] - z[2]).abs() < 1e-16 {
            end = CurveEnd::Stalled;
            break;
        }
        z = zn;
        let op = fe.op.eval(&z).unwrap_or(0.0);
        if op * prev_op < 0.0 {
            cusps.push((z[0], z[1]));
        }
        prev_op = op;
        let a = z[2].atan2(z[1]);
        let mut da = a - prev_ang;
        if da > std::f64::consts::PI {
            da -= 2.0 * std::f64::consts::PI;
        } else if da < -std::f64::consts::PI {
            da += 2.0 * std::f64::consts::PI;
        }
        angle += da;
        prev_ang = a;
        points.push((z[0], z[1]));
        if z[0].abs() > opts.half_width || z[1].abs() > opts.half_width {
            end = CurveEnd::LeftBox;
            break;
        }
    }
    IntegralCurve { points, cusps, rotation: angle / (2.0 * std::f64::consts::PI), end }
}

/// Model `dx² + y dy² = 0` (smooth discriminant, cusped integral curves).
pub fn cusp_model() -> Bde<f64> {
    let y = Jet::var(2, 4, 1).expect("valid var");
    Bde { a: y, b: Jet::zero(2, 4).expect("valid"), c: Jet::constant(2, 4, 1.0).expect("valid") }
}

/// Model `dx² + (−x + λy²) dy² = 0`: folded saddle when `λ < 0`.
pub fn folded_model(lambda: f64) -> Bde<f64> {
    let x = Jet::var(2, 4, 0).expect("valid var");
    let y = Jet::var(2, 4, 1).expect("valid var");
    Bde { a: &(&y * &y).scale(&lambda) - &x, b: Jet::zero(2, 4).expect("valid"), c: Jet::constant(2, 4, 1.0).expect("valid") }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use crate::surface::normal_form_surface;

    #[test]
    fn normal_form_two_jet_of_omega() {
        let (al, be) = (rat(-1, 1), rat(1, 1));
        let s = normal_form_surface(al.clone(), be.clone(), None).unwrap();
        let om = asymptotic_bde(&s).unwrap().omega().unwrap().truncate(2);
        assert_eq!(om.coeff([0, 0, 2]), rat(1, 2));
        assert_eq!(om.coeff([0, 1, 1]), rat(3, 1) * be.clone());
        assert_eq!(om.coeff([1, 0, 0]), rat(-1, 2));
        assert_eq!(om.coeff([0, 2, 0]), rat(3, 1) * (be - al));
        assert_eq!(om.len(), 4);
    }

    #[test]
    fn discriminant_is_quarter_delta() {
        let s = normal_form_surface(rat(2, 1), rat(-1, 1), None).unwrap();
        let d = asymptotic_bde(&s).unwrap().discriminant();
        let delta = s.delta_polynomial().unwrap();
        assert_eq!(d.with_bound(delta.bound()).unwrap(), delta.scale(&rat(1, 4)));
    }

    #[test]
    fn lifted_field_is_tangent() {
        let s = normal_form_surface(rat(-1, 1), rat(1, 1), None).unwrap();
        let lf = asymptotic_bde(&s).unwrap().lifted_field().unwrap();
        assert!(lf.tangency_defect().unwrap().is_zero());
    }

    #[test]
    fn hyperbolic_and_elliptic_directions() {
        let x = Jet::<f64>::var(2, 5, 0).unwrap();
        let y = Jet::<f64>::var(2, 5, 1).unwrap();
        let hyp = SurfaceJet::new(&x * &x, &y * &y).unwrap();
        assert_eq!(asymptotic_bde(&hyp).unwrap().directions_at(0.0, 0.0).unwrap(), 2);
        let ell = SurfaceJet::new(&x * &y, &(&x * &x) - &(&y * &y)).unwrap();
        assert_eq!(asymptotic_bde(&ell).unwrap().directions_at(0.0, 0.0).unwrap(), 0);
    }

    #[test]
    fn linearization_matches_normal_form() {
        let (al, be) = (-1.0, 1.0);
        let s = normal_form_surface(al, be, None).unwrap();
        let lin = asymptotic_bde(&s).unwrap().folded_linearization().unwrap();
        let want = normal_form_linearization(&al, &be);
        for i in 0..2 {
            for j in 0..2 {
                assert!((lin[i][j] - want[i][j]).abs() < 1e-12, "{lin:?}");
            }
        }
        let m = normal_form_linearization(&0.3, &-0.7);
        let (_, tr, det, _) = eigen_classify(&m);
        assert!((tr - 0.5).abs() < 1e-14);
        assert!((det - 1.5 * folded_q(&0.3, &-0.7)).abs() < 1e-12);
    }

    #[test]
    fn sample_classifications() {
        let f = classify_folded(&rat(-1, 1), &rat(1, 1));
        assert_eq!((f.kind, f.q), (FoldedType::FoldedFocus, 3.0));
        assert!((f.det - 4.5).abs() < 1e-12 && f.agree);
        let f = classify_folded(&rat(2, 1), &rat(-1, 1));
        assert_eq!((f.kind, f.q), (FoldedType::FoldedSaddle, -19.0));
        let f = classify_folded(&-0.255, &1.0);
        assert_eq!(f.kind, FoldedType::FoldedNode);
        assert!((f.q - 0.02).abs() < 1e-12);
        assert_eq!(classify_folded(&Rational::from_integer(0.into()), &rat(0, 1)).kind, FoldedType::NonGeneric);
    }

    #[test]
    fn inflection_locus_exact() {
        let s = normal_form_surface(rat(-1, 1), rat(1, 1), None).unwrap();
        let inf = inflection_locus(&asymptotic_bde(&s).unwrap()).unwrap();
        assert_eq!(inf.germ.c2, rat(156, 25));
        assert_eq!(inf.germ.c1, rat(0, 1));
        // p = 12(−α + β)/(1 − 6β) y.
        assert_eq!(inf.p_series.coeff([0, 1, 0]), rat(-24, 5));
    }

    #[test]
    fn inflection_pivot_guard() {
        let s = normal_form_surface(rat(1, 2), rat(1, 6), None);
        if let Ok(s) = s {
            let r = inflection_locus(&asymptotic_bde(&s).unwrap());
            assert!(matches!(r, Err(BdeError::NonGeneric(_))));
        }
    }

    #[test]
    fn cusp_model_curves_cusp_on_discriminant() {
        let bde = cusp_model();
        let seeds: Vec<[f64; 3]> = [0.02, -0.03, 0.05].iter().map(|&x| [x, -0.01, 0.1]).collect();
        let curves = integrate_curves(&bde, &seeds, &IntegrateOptions { max_steps: 20_000, ..Default::default() }).unwrap();
        for c in &curves {
            assert!(!c.cusps.is_empty(), "no cusp from {:?}", c.points[0]);
            for &(_, y) in &c.cusps {
                assert!(y.abs() < 1e-2);
            }
        }
    }

    #[test]
    fn focus_winds_and_saddle_does_not() {
        let s = normal_form_surface(-1.0, 1.0, None).unwrap();
        let bde = asymptotic_bde(&s).unwrap();
        let c = integrate_curves(&bde, &[[0.0, 1e-3, 0.0]], &IntegrateOptions::default()).unwrap();
        assert!(c[0].rotation.abs() >= 1.0, "rotation {}", c[0].rotation);
        let saddle = folded_model(-1.0);
        let c = integrate_curves(&saddle, &[[0.0, 1e-3, 0.0]], &IntegrateOptions::default()).unwrap();
        assert!(c[0].rotation.abs() < 1.0);
        assert_eq!(classify_bde(&saddle).unwrap().0, FoldedType::FoldedSaddle);
    }
}
