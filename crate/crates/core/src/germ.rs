//! Corank-1 map germs from the plane to 3-space: Saji's criteria, cross-cap
//! detection and the residual systems for the bi-germs `A0S1`, `(A0S0)2` and `A0S0|A1`.

use serde::Serialize;
use thiserror::Error;

use crate::jet::{Jet, JetError};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GermError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("map germ components must be 2-variable jets")]
    BadComponents,
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("corank 2 germs are not supported")]
    Corank2,
    #[error("germ is not in chart form (x, g2, g3)")]
    NotChartForm,
    #[error("unknown bi-germ kind {0:?}")]
    UnknownKind(String),
    #[error("degenerate double-point system at the cross-cap")]
    DegenerateDoublePoint,
}

/// A map germ `(f¹, f², f³)` at a source point.
#[derive(Clone, Debug, PartialEq)]
pub struct MapGerm3<T> {
    pub comps: [Jet<T>; 3],
    pub point: [T; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GermLabel {
    Immersion,
    /// The cross-cap, also written S0.
    CrossCap,
    S1Plus,
    S1Minus,
    MoreDegenerate,
}

impl std::fmt::Display for GermLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GermLabel::Immersion => "Immersion",
            GermLabel::CrossCap => "CrossCap (S0)",
            GermLabel::S1Plus => "S1+",
            GermLabel::S1Minus => "S1-",
            GermLabel::MoreDegenerate => "MoreDegenerate",
        };
        f.write_str(s)
    }
}

type Vec3<T> = [T; 3];

fn det3<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>, c: &Vec3<T>) -> T {
    a[0].clone() * (b[1].clone() * c[2].clone() - b[2].clone() * c[1].clone())
        - a[1].clone() * (b[0].clone() * c[2].clone() - b[2].clone() * c[0].clone())
        + a[2].clone() * (b[0].clone() * c[1].clone() - b[1].clone() * c[0].clone())
}

fn cross<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn det3_jets<T: Scalar>(a: &[Jet<T>; 3], b: &[Jet<T>; 3], c: &[Jet<T>; 3]) -> Jet<T> {
    &a[0] * &(&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * &(&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * &(&b[0] * &c[1] - &b[1] * &c[0])
}

/// Directional derivative `v1 ∂x + v2 ∂y` of a 2-variable jet.
fn dir<T: Scalar>(f: &Jet<T>, v: &[T; 2]) -> Result<Jet<T>, JetError> {
    Ok(&f.partial(0)?.scale(&v[0]) + &f.partial(1)?.scale(&v[1]))
}

impl<T: Scalar> MapGerm3<T> {
    pub fn new(comps: [Jet<T>; 3], point: [T; 2]) -> Result<Self, GermError> {
        if comps.iter().any(|c| c.nvars() != 2) {
            return Err(GermError::BadComponents);
        }
        Ok(Self { comps, point })
    }

    pub fn at_origin(comps: [Jet<T>; 3]) -> Result<Self, GermError> {
        Self::new(comps, [T::zero(), T::zero()])
    }

    /// Components re-centred so the base point is the origin (values kept).
    pub fn centred(&self) -> Result<[Jet<T>; 3], GermError> {
        if self.point.iter().all(|v| v.is_zero()) {
            return Ok(self.comps.clone());
        }
        let mut out = Vec::with_capacity(3);
        for c in &self.comps {
            out.push(c.translate(&self.point)?);
        }
        Ok([out[0].clone(), out[1].clone(), out[2].clone()])
    }

    pub fn value(&self) -> Result<Vec3<T>, GermError> {
        let mut v = Vec::with_capacity(3);
        for c in &self.comps {
            v.push(c.eval(&self.point)?);
        }
        Ok([v[0].clone(), v[1].clone(), v[2].clone()])
    }

    /// Columns `∂x f(p)` and `∂y f(p)`.
    pub fn jacobian(&self) -> Result<[Vec3<T>; 2], GermError> {
        let mut cols = [Vec::new(), Vec::new()];
        for c in &self.comps {
            for (v, col) in cols.iter_mut().enumerate() {
                col.push(c.partial(v)?.eval(&self.point)?);
            }
        }
        let to3 = |v: &Vec<T>| [v[0].clone(), v[1].clone(), v[2].clone()];
        Ok([to3(&cols[0]), to3(&cols[1])])
    }

    fn scale(&self) -> f64 {
        self.comps.iter().map(|c| c.max_abs_coeff()).fold(1.0, f64::max)
    }

    /// Canonical constant frame `(ξ, η)` with `η` spanning `ker df(p)`.
    /// `Ok(None)` when `df(p)` has rank 2.
    pub fn kernel_frame(&self) -> Result<Option<([T; 2], [T; 2])>, GermError> {
        let [jx, jy] = self.jacobian()?;
        let s = self.scale();
        let zero = |v: &Vec3<T>| v.iter().all(|c| c.is_zero_at(s));
        if zero(&jx) && zero(&jy) {
            return Err(GermError::Corank2);
        }
        if !zero(&cross(&jx, &jy)) {
            return Ok(None);
        }
        let one = T::one();
        let z = T::zero();
        if zero(&jx) {
            return Ok(Some(([z, one.clone()], [one, T::zero()])));
        }
        // jy = λ jx with λ read off the largest entry of jx
        let k = (0..3)
            .max_by(|&i, &j| jx[i].to_f64().abs().partial_cmp(&jx[j].to_f64().abs()).unwrap())
            .unwrap();
        let lambda = jy[k].clone() / jx[k].clone();
        Ok(Some(([one.clone(), z], [-lambda, one])))
    }
}

/// `φ = det(ξf, ηf, ηηf)` for constant fields, with no kernel check.
pub fn phi_constant_frame<T: Scalar>(comps: &[Jet<T>; 3], xi: &[T; 2], eta: &[T; 2]) -> Result<Jet<T>, GermError> {
    let mut xf = Vec::new();
    let mut ef = Vec::new();
    let mut eef = Vec::new();
    for c in comps {
        let e = dir(c, eta)?;
        eef.push(dir(&e, eta)?);
        ef.push(e);
        xf.push(dir(c, xi)?);
    }
    let arr = |v: Vec<Jet<T>>| -> [Jet<T>; 3] { [v[0].clone(), v[1].clone(), v[2].clone()] };
    Ok(det3_jets(&arr(xf), &arr(ef), &arr(eef)))
}

/// Saji's function `φ = det(ξf, ηf, ηηf)` centred at the germ's base point.
pub fn saji_phi<T: Scalar>(f: &MapGerm3<T>, xi: &[T; 2], eta: &[T; 2]) -> Result<Jet<T>, GermError> {
    let comps = f.centred()?;
    let s = f.scale();
    let frame_det = xi[0].clone() * eta[1].clone() - xi[1].clone() * eta[0].clone();
    if frame_det.is_zero_at(1.0) {
        return Err(GermError::InvalidFrame("xi and eta are dependent".into()));
    }
    for c in &comps {
        if !dir(c, eta)?.eval_origin().is_zero_at(s) {
            return Err(GermError::InvalidFrame("eta is not in the kernel of df".into()));
        }
    }
    phi_constant_frame(&comps, xi, eta)
}

pub fn classify_germ<T: Scalar>(f: &MapGerm3<T>) -> Result<GermLabel, GermError> {
    let Some((xi, eta)) = f.kernel_frame()? else {
        return Ok(GermLabel::Immersion);
    };
    let phi = saji_phi(f, &xi, &eta)?;
    let s = phi.max_abs_coeff().max(1.0);
    let xphi = dir(&phi, &xi)?;
    if !xphi.eval_origin().is_zero_at(s) {
        return Ok(GermLabel::CrossCap);
    }
    let ephi = dir(&phi, &eta)?;
    if !ephi.eval_origin().is_zero_at(s) {
        return Ok(GermLabel::MoreDegenerate);
    }
    let hxx = dir(&xphi, &xi)?.eval_origin();
    let hxy = dir(&xphi, &eta)?.eval_origin();
    let hyy = dir(&ephi, &eta)?.eval_origin();
    let hess = hxx * hyy - hxy.clone() * hxy;
    if hess.is_zero_at(s * s) {
        return Ok(GermLabel::MoreDegenerate);
    }
    if hess > T::zero() {
        return Ok(GermLabel::S1Minus);
    }
    let comps = f.centred()?;
    let mut xf = Vec::new();
    let mut eef = Vec::new();
    for c in &comps {
        xf.push(dir(c, &xi)?.eval_origin());
        eef.push(dir(&dir(c, &eta)?, &eta)?.eval_origin());
    }
    let xf = [xf[0].clone(), xf[1].clone(), xf[2].clone()];
    let eef = [eef[0].clone(), eef[1].clone(), eef[2].clone()];
    if cross(&xf, &eef).iter().all(|c| c.is_zero_at(s)) {
        Ok(GermLabel::MoreDegenerate)
    } else {
        Ok(GermLabel::S1Plus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BigermKind {
    /// Regular sheet through an S1 point.
    A0S1,
    /// Regular sheet through a cross-cap, tangent to its double-point curve.
    A0S0Sq,
    /// Regular sheet containing the cross-cap's tangent line.
    A0S0A1,
}

impl std::str::FromStr for BigermKind {
    type Err = GermError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['(', ')', '_', '|', ' '], "").as_str() {
            "a0s1" => Ok(BigermKind::A0S1),
            "a0s02" => Ok(BigermKind::A0S0Sq),
            "a0s0a1" => Ok(BigermKind::A0S0A1),
            _ => Err(GermError::UnknownKind(s.to_string())),
        }
    }
}

/// Partial derivatives of a map in chart form `(x, g2(x,y), g3(x,y))`.
pub trait ChartMap {
    /// `∂x^i ∂y^j g_k (x, y)` for `k ∈ {2, 3}`.
    fn d(&self, k: usize, i: usize, j: usize, x: f64, y: f64) -> f64;
}

/// Dense bivariate polynomial with fast evaluation of any partial derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct DensePoly2 {
    n: usize,
    c: Vec<f64>,
}

const DENSE_MAX: usize = 12;

impl DensePoly2 {
    pub fn zero(degree: usize) -> Self {
        let n = (degree + 1).min(DENSE_MAX);
        Self { n, c: vec![0.0; n * n] }
    }

    pub fn from_jet(j: &Jet<f64>) -> Self {
        let mut p = Self::zero(j.degree().unwrap_or(0) as usize);
        for (e, v) in j.terms() {
            p.add(e[0] as usize, e[1] as usize, *v);
        }
        p
    }

    /// Adds `v x^i y^j`; the degree must already fit.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < self.n && j < self.n, "monomial x^{i} y^{j} exceeds capacity");
        self.c[i * self.n + j] += v;
    }

    /// `∂x^i ∂y^j p (x, y)`.
    pub fn d(&self, i: usize, j: usize, x: f64, y: f64) -> f64 {
        let n = self.n;
        if i >= n || j >= n {
            return 0.0;
        }
        let mut xp = [1.0; DENSE_MAX];
        let mut yp = [1.0; DENSE_MAX];
        for k in 1..n {
            xp[k] = xp[k - 1] * x;
            yp[k] = yp[k - 1] * y;
        }
        let mut acc = 0.0;
        for p in i..n {
            let fx = falling(p, i);
            for q in j..n {
                let c = self.c[p * n + q];
                if c != 0.0 {
                    acc += c * fx * falling(q, j) * xp[p - i] * yp[q - j];
                }
            }
        }
        acc
    }
}

fn falling(p: usize, i: usize) -> f64 {
    ((p - i + 1)..=p).fold(1.0, |a, k| a * k as f64)
}

/// Chart-form map given by two polynomials `g2`, `g3`.
#[derive(Clone, Debug)]
pub struct JetChart {
    g: [DensePoly2; 2],
}

impl JetChart {
    pub fn new(g2: &Jet<f64>, g3: &Jet<f64>) -> Self {
        Self { g: [DensePoly2::from_jet(g2), DensePoly2::from_jet(g3)] }
    }

    pub fn from_dense(g2: DensePoly2, g3: DensePoly2) -> Self {
        Self { g: [g2, g3] }
    }

    pub fn from_germ<T: Scalar>(f: &MapGerm3<T>) -> Result<Self, GermError> {
        require_chart_form(&f.comps)?;
        Ok(Self::new(&f.comps[1].to_f64(), &f.comps[2].to_f64()))
    }
}

impl ChartMap for JetChart {
    fn d(&self, k: usize, i: usize, j: usize, x: f64, y: f64) -> f64 {
        self.g[k - 2].d(i, j, x, y)
    }
}

fn require_chart_form<T: Scalar>(comps: &[Jet<T>; 3]) -> Result<(), GermError> {
    let x = Jet::var(2, comps[0].bound(), 0)?;
    if comps[0] == x {
        Ok(())
    } else {
        Err(GermError::NotChartForm)
    }
}

/// `(g2_y, g3_y)`: vanishes exactly at singular points of a chart-form map.
pub fn singular_residual<M: ChartMap + ?Sized>(m: &M, x: f64, y: f64) -> [f64; 2] {
    [m.d(2, 0, 1, x, y), m.d(3, 0, 1, x, y)]
}

/// `ξφ` at a singular point: `g2_xy g3_yy − g3_xy g2_yy`. Nonzero at cross-caps.
pub fn xi_phi<M: ChartMap + ?Sized>(m: &M, x: f64, y: f64) -> f64 {
    m.d(2, 1, 1, x, y) * m.d(3, 0, 2, x, y) - m.d(3, 1, 1, x, y) * m.d(2, 0, 2, x, y)
}

/// Image coincidence of `(x, ys)` and `(x, yr)` without the trivial root:
/// `[g(yr) − g(ys) − h g_y(ys)] / h²`, `h = yr − ys`, as a y-Taylor sum.
pub fn divided_coincidence<M: ChartMap + ?Sized>(m: &M, x: f64, ys: f64, yr: f64) -> [f64; 2] {
    let h = yr - ys;
    let mut out = [0.0; 2];
    for (slot, k) in out.iter_mut().zip([2, 3]) {
        let mut fact = 2.0;
        let mut hp = 1.0;
        let mut acc = 0.0;
        for order in 2..=10usize {
            acc += m.d(k, 0, order, x, ys) / fact * hp;
            fact *= (order + 1) as f64;
            hp *= h;
        }
        *slot = acc;
    }
    out
}

/// Limiting tangent of the double-point curve at a cross-cap `(x, ys)`:
/// `T = σ ξg + ½ ηηg`, where `(σ, θ)` solves
/// `[[g2_xy, g2_yy], [g3_xy, g3_yy]] (σ, θ) = −(1/6)(g2_yyy, g3_yyy)`.
pub fn double_point_tangent<M: ChartMap + ?Sized>(m: &M, x: f64, ys: f64) -> Result<[f64; 3], GermError> {
    let (a, b) = (m.d(2, 1, 1, x, ys), m.d(2, 0, 2, x, ys));
    let (c, d) = (m.d(3, 1, 1, x, ys), m.d(3, 0, 2, x, ys));
    let det = a * d - b * c;
    if det.abs() < 1e-300 {
        return Err(GermError::DegenerateDoublePoint);
    }
    let (r2, r3) = (-m.d(2, 0, 3, x, ys) / 6.0, -m.d(3, 0, 3, x, ys) / 6.0);
    let sigma = (r2 * d - b * r3) / det;
    Ok([sigma, sigma * m.d(2, 1, 0, x, ys) + 0.5 * b, sigma * m.d(3, 1, 0, x, ys) + 0.5 * d])
}

/// `det(v, g_x(x,yr), g_y(x,yr)) / h²`, the tangency of `v` with the regular sheet.
fn sheet_tangency<M: ChartMap + ?Sized>(m: &M, v: [f64; 3], x: f64, ys: f64, yr: f64) -> f64 {
    let gx = [1.0, m.d(2, 1, 0, x, yr), m.d(3, 1, 0, x, yr)];
    let gy = [0.0, m.d(2, 0, 1, x, yr), m.d(3, 0, 1, x, yr)];
    let h = yr - ys;
    det3(&v, &gx, &gy) / (h * h)
}

/// Cross-cap tangent line `ξg(x, ys)` against the regular sheet at `(x, yr)`.
pub fn crosscap_line_tangency<M: ChartMap + ?Sized>(m: &M, x: f64, ys: f64, yr: f64) -> f64 {
    let v = [1.0, m.d(2, 1, 0, x, ys), m.d(3, 1, 0, x, ys)];
    sheet_tangency(m, v, x, ys, yr)
}

/// Double-point limiting tangent at `(x, ys)` against the regular sheet at `(x, yr)`.
pub fn double_point_tangency<M: ChartMap + ?Sized>(m: &M, x: f64, ys: f64, yr: f64) -> Result<f64, GermError> {
    Ok(sheet_tangency(m, double_point_tangent(m, x, ys)?, x, ys, yr))
}

/// The bi-germ condition beyond singularity and coincidence, for one map.
pub fn bigerm_condition<M: ChartMap + ?Sized>(
    kind: BigermKind,
    m: &M,
    x: f64,
    ys: f64,
    yr: f64,
) -> Result<f64, GermError> {
    match kind {
        BigermKind::A0S1 => Ok(xi_phi(m, x, ys)),
        BigermKind::A0S0A1 => Ok(crosscap_line_tangency(m, x, ys, yr)),
        BigermKind::A0S0Sq => double_point_tangency(m, x, ys, yr),
    }
}

/// Residuals whose simultaneous vanishing characterizes a bi-germ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BigermResiduals {
    /// `f(s1) − f(s2)`.
    pub coincidence: [f64; 3],
    /// `(g2_y, g3_y)` at the singular branch.
    pub singular: [f64; 2],
    /// S1 test `ξφ` (`A0S1`) or an undivided tangency determinant.
    pub condition: f64,
}

impl BigermResiduals {
    pub fn max_abs(&self) -> f64 {
        self.coincidence.iter().chain(self.singular.iter()).chain([self.condition].iter()).fold(0.0, |m, v| m.max(v.abs()))
    }

    /// All residuals vanish to `tol` (1e-10 by default for unit-scaled jets).
    pub fn vanishes(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }
}

/// Residuals for a regular branch `branch1` and a singular branch `branch2`,
/// both in chart form. Tangency determinants are undivided here since
/// the two branches may come from different maps.
pub fn bigerm_conditions<T: Scalar>(
    kind: BigermKind,
    branch1: &MapGerm3<T>,
    branch2: &MapGerm3<T>,
) -> Result<BigermResiduals, GermError> {
    let c1 = JetChart::from_germ(branch1)?;
    let c2 = JetChart::from_germ(branch2)?;
    let v1 = branch1.value()?.map(|v| v.to_f64());
    let v2 = branch2.value()?.map(|v| v.to_f64());
    let [x1, y1] = [branch1.point[0].to_f64(), branch1.point[1].to_f64()];
    let [x2, y2] = [branch2.point[0].to_f64(), branch2.point[1].to_f64()];
    let coincidence = [v1[0] - v2[0], v1[1] - v2[1], v1[2] - v2[2]];
    let singular = singular_residual(&c2, x2, y2);
    let gx = [1.0, c1.d(2, 1, 0, x1, y1), c1.d(3, 1, 0, x1, y1)];
    let gy = [0.0, c1.d(2, 0, 1, x1, y1), c1.d(3, 0, 1, x1, y1)];
    let condition = match kind {
        BigermKind::A0S1 => xi_phi(&c2, x2, y2),
        BigermKind::A0S0A1 => det3(&[1.0, c2.d(2, 1, 0, x2, y2), c2.d(3, 1, 0, x2, y2)], &gx, &gy),
        BigermKind::A0S0Sq => det3(&double_point_tangent(&c2, x2, y2)?, &gx, &gy),
    };
    Ok(BigermResiduals { coincidence, singular, condition })
}
