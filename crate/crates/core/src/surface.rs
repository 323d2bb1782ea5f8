//! Monge-form surfaces `(x, y, f1(x,y), f2(x,y))` in 4-space.
//!
//! Coefficient indexing: `a(k, i)` multiplies `x^(k-i) y^i` in `f1`, and
//! `b(k, i)` does the same in `f2`. So `a(3,2)` is the `x y²` coefficient and
//! `a(4,4)` the `y⁴` coefficient. This is the only place the convention lives.

use serde::Serialize;
use thiserror::Error;

use crate::jet::{Jet, JetError};
use crate::locus::{GermSource, LocusGerm, LocusLabel};
use crate::scalar::Scalar;

/// Degree bound of surface jets.
pub const SURFACE_BOUND: u32 = 5;

/// Moduli excluded by the P3(c) genericity conditions.
pub const EXCLUDED_MODULI: [(i64, i64); 4] = [(0, 1), (1, 2), (1, 1), (3, 2)];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("chart error: {0}")]
    Chart(String),
    #[error("degenerate point: {0}")]
    Degenerate(String),
    #[error("invalid moduli: {0}")]
    InvalidModuli(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceJet<T> {
    f1: Jet<T>,
    f2: Jet<T>,
}

/// The half second partials `a = ½f1_xx, b = ½f1_xy, c = ½f1_yy` and `l, m, n` for `f2`.
#[derive(Clone, Debug)]
pub struct HalfHessians<T> {
    pub a: Jet<T>,
    pub b: Jet<T>,
    pub c: Jet<T>,
    pub l: Jet<T>,
    pub m: Jet<T>,
    pub n: Jet<T>,
}

impl<T: Scalar> HalfHessians<T> {
    pub fn with_bound(&self, bound: u32) -> Result<Self, JetError> {
        Ok(Self {
            a: self.a.with_bound(bound)?,
            b: self.b.with_bound(bound)?,
            c: self.c.with_bound(bound)?,
            l: self.l.with_bound(bound)?,
            m: self.m.with_bound(bound)?,
            n: self.n.with_bound(bound)?,
        })
    }

    /// `(an − cl)² − 4(am − bl)(bn − cm)`.
    pub fn delta(&self) -> Jet<T> {
        let h = &self.a * &self.n - &self.c * &self.l;
        let p = &self.a * &self.m - &self.b * &self.l;
        let q = &self.b * &self.n - &self.c * &self.m;
        &h * &h - (&p * &q).scale(&T::from_i64(4))
    }
}

impl<T: Scalar> SurfaceJet<T> {
    /// Validates a Monge pair: two variables, no constant or linear terms.
    pub fn new(f1: Jet<T>, f2: Jet<T>) -> Result<Self, GeometryError> {
        for (name, f) in [("f1", &f1), ("f2", &f2)] {
            if f.nvars() != 2 {
                return Err(GeometryError::InvalidSurface(format!("{name} must have 2 variables")));
            }
            let scale = f.max_abs_coeff();
            for e in [[0, 0, 0], [1, 0, 0], [0, 1, 0]] {
                if !f.coeff(e).is_zero_at(scale) {
                    return Err(GeometryError::InvalidSurface(format!(
                        "{name} has a nonzero constant or linear term"
                    )));
                }
            }
        }
        let f1 = f1.with_bound(f1.bound().max(2))?;
        let f2 = f2.with_bound(f2.bound().max(2))?;
        Ok(Self { f1, f2 })
    }

    /// Surface in the parabolic chart: `f1 = x² + Σ a_ki x^(k-i) y^i`,
    /// `f2 = xy + Σ b_ki x^(k-i) y^i` for `k = 3..=5`.
    pub fn parabolic_chart(a: &[((u8, u8), T)], b: &[((u8, u8), T)]) -> Result<Self, GeometryError> {
        let build = |lead: [u8; 3], tab: &[((u8, u8), T)]| -> Result<Jet<T>, GeometryError> {
            let mut terms = vec![(lead, T::one())];
            for ((k, i), c) in tab {
                if !(3..=5).contains(k) || i > k {
                    return Err(GeometryError::InvalidSurface(format!("coefficient index {k}{i} out of range")));
                }
                terms.push(([k - i, *i, 0], c.clone()));
            }
            Ok(Jet::from_terms(2, SURFACE_BOUND, terms)?)
        };
        Self::new(build([2, 0, 0], a)?, build([1, 1, 0], b)?)
    }

    pub fn f1(&self) -> &Jet<T> {
        &self.f1
    }

    pub fn f2(&self) -> &Jet<T> {
        &self.f2
    }

    /// Coefficient of `x^(k-i) y^i` in `f1`.
    pub fn a(&self, k: u8, i: u8) -> T {
        self.f1.c2(k - i, i)
    }

    /// Coefficient of `x^(k-i) y^i` in `f2`.
    pub fn b(&self, k: u8, i: u8) -> T {
        self.f2.c2(k - i, i)
    }

    pub fn to_f64(&self) -> SurfaceJet<f64> {
        SurfaceJet { f1: self.f1.to_f64(), f2: self.f2.to_f64() }
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> SurfaceJet<U> {
        SurfaceJet { f1: self.f1.map_coeffs(f), f2: self.f2.map_coeffs(f) }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.f1.max_abs_coeff().max(self.f2.max_abs_coeff())
    }

    pub fn quadratic_pair(&self) -> QuadraticPair<T> {
        let half = T::from_ratio(1, 2);
        QuadraticPair {
            a: self.f1.c2(2, 0),
            b: self.f1.c2(1, 1) * half.clone(),
            c: self.f1.c2(0, 2),
            l: self.f2.c2(2, 0),
            m: self.f2.c2(1, 1) * half,
            n: self.f2.c2(0, 2),
        }
    }

    pub fn half_hessians(&self) -> Result<HalfHessians<T>, JetError> {
        let half = T::from_ratio(1, 2);
        let d = |f: &Jet<T>, e: [u8; 3]| -> Result<Jet<T>, JetError> { Ok(f.derivative(e)?.scale(&half)) };
        Ok(HalfHessians {
            a: d(&self.f1, [2, 0, 0])?,
            b: d(&self.f1, [1, 1, 0])?,
            c: d(&self.f1, [0, 2, 0])?,
            l: d(&self.f2, [2, 0, 0])?,
            m: d(&self.f2, [1, 1, 0])?,
            n: d(&self.f2, [0, 2, 0])?,
        })
    }

    /// The discriminant δ as a jet, exact through the degree the surface jet determines.
    pub fn delta_jet(&self) -> Result<Jet<T>, GeometryError> {
        Ok(self.half_hessians()?.delta())
    }

    /// δ of the polynomial surface (the jet read as a polynomial), all degrees kept.
    pub fn delta_polynomial(&self) -> Result<Jet<T>, GeometryError> {
        let h = self.half_hessians()?;
        let deg = 2 * h.a.bound().max(1);
        Ok(h.with_bound(deg.min(crate::jet::MAX_BOUND))?.delta())
    }

    /// True when the 2-jet is exactly `(x², xy)` (within tolerance in float mode).
    pub fn is_parabolic_chart(&self) -> bool {
        let q = self.quadratic_pair();
        let one = T::one();
        let half = T::from_ratio(1, 2);
        (q.a - one).near_zero()
            && q.b.near_zero()
            && q.c.near_zero()
            && q.l.near_zero()
            && (q.m - half).near_zero()
            && q.n.near_zero()
    }

    fn require_parabolic_chart(&self) -> Result<(), GeometryError> {
        if self.is_parabolic_chart() {
            Ok(())
        } else {
            Err(GeometryError::Chart("2-jet is not (x^2, xy)".into()))
        }
    }

    /// Parabolic curve at the origin as a series `x = s(y)`, from series inversion of δ.
    pub fn parabolic_series(&self) -> Result<LocusGerm<T>, GeometryError> {
        self.require_parabolic_chart()?;
        let scale = self.max_abs_coeff();
        if self.a(3, 2).is_zero_at(scale) {
            return Err(GeometryError::Degenerate("a32 = 0: parabolic curve is singular".into()));
        }
        if !self.a(3, 3).is_zero_at(scale) {
            return Err(GeometryError::Degenerate("a33 != 0: the origin is not a P3(c) point".into()));
        }
        let delta = self.delta_jet()?;
        let s = delta.implicit_solve(0, delta.bound())?;
        Ok(LocusGerm {
            label: LocusLabel::Parabolic,
            c2: s.c2(0, 2),
            c1: s.c2(0, 1),
            series: Some(s),
            samples: Vec::new(),
            source: GermSource::SeriesInversion,
        })
    }

    /// Checks the P3(c) conditions, the modulus and versality at the origin.
    pub fn detect_p3c(&self) -> Result<P3Report<T>, GeometryError> {
        self.require_parabolic_chart()?;
        let scale = self.max_abs_coeff();
        let (a32, a33, a44, b33) = (self.a(3, 2), self.a(3, 3), self.a(4, 4), self.b(3, 3));
        let versality = T::from_i64(5) * a32.clone() * b33.clone()
            - T::from_i64(6) * b33.clone() * b33.clone()
            - T::from_i64(4) * a44.clone();
        let versal = !versality.is_zero_at(scale * scale);
        let normalized = self.normal_form_moduli();
        let alpha_in_excluded_list = normalized.as_ref().map(|(al, _)| in_excluded(al));
        let mut report = P3Report {
            is_p3c: false,
            failure: None,
            a32: a32.clone(),
            a33: a33.clone(),
            a44: a44.clone(),
            b33: b33.clone(),
            modulus_c: None,
            versal,
            versality,
            normalized,
            alpha_in_excluded_list,
        };
        if !a33.is_zero_at(scale) {
            report.failure = Some(P3Failure::A33Nonzero);
            return Ok(report);
        }
        let prod = b33.clone() * a32.clone() * a44.clone();
        if prod.is_zero_at(scale.powi(3)) {
            report.failure = Some(P3Failure::VanishingProduct);
            return Ok(report);
        }
        let c = a44 / (b33 * a32);
        report.modulus_c = Some(c.clone());
        if in_excluded(&c) {
            report.failure = Some(P3Failure::ExcludedModulus);
            return Ok(report);
        }
        report.is_p3c = true;
        Ok(report)
    }

    /// `(α, β)` when the surface is `(x² + xy² + αy⁴, xy + βy³ + φ)` with `φ` quartic.
    pub fn normal_form_moduli(&self) -> Option<(T, T)> {
        let scale = self.max_abs_coeff();
        let f1_ok = self.f1.terms().all(|(e, c)| match (e[0], e[1]) {
            (2, 0) | (1, 2) => (c.clone() - T::one()).is_zero_at(scale),
            (0, 4) => true,
            _ => c.is_zero_at(scale),
        }) && !self.f1.c2(1, 2).is_zero_at(scale);
        let f2_ok = self.f2.terms().all(|(e, c)| {
            let d = e[0] + e[1];
            match (e[0], e[1]) {
                (1, 1) => (c.clone() - T::one()).is_zero_at(scale),
                (0, 3) => true,
                _ if d == 4 => true,
                _ => c.is_zero_at(scale),
            }
        }) && (self.f2.c2(1, 1) - T::one()).is_zero_at(scale);
        if f1_ok && f2_ok && (self.f1.c2(2, 0) - T::one()).is_zero_at(scale) {
            Some((self.a(4, 4), self.b(3, 3)))
        } else {
            None
        }
    }
}

/// The 2-jet of δ as displayed in closed form for a surface in the parabolic chart.
/// Its `xy` coefficient carries `(b32 + a31) a32`; [`SurfaceJet::delta_jet`] gives `(2 b32 + a31) a32`.
pub fn printed_j2_delta<T: Scalar>(s: &SurfaceJet<T>) -> Result<Jet<T>, GeometryError> {
    let k = |n: i64| T::from_i64(n);
    let (a, b) = (|i, j| s.a(i, j), |i, j| s.b(i, j));
    let xx = b(3, 2) * b(3, 2) - k(2) * a(3, 1) * b(3, 2) + k(2) * a(3, 2) * b(3, 1) + a(4, 2)
        + (k(2) * b(3, 1) + k(3) * a(3, 0)) * a(3, 2);
    let xy = k(6) * b(3, 3) * b(3, 2) - k(6) * a(3, 1) * b(3, 3) + k(6) * a(3, 3) * b(3, 1) + k(3) * a(4, 3)
        + (b(3, 2) + a(3, 1)) * a(3, 2)
        + (k(6) * b(3, 1) + k(9) * a(3, 0)) * a(3, 3);
    let yy = k(3)
        * (k(3) * b(3, 3) * b(3, 3) - k(2) * a(3, 2) * b(3, 3) + k(2) * a(3, 3) * b(3, 2) + k(2) * a(4, 4)
            + (k(2) * b(3, 2) + a(3, 1)) * a(3, 3));
    let terms = [([1, 0, 0], a(3, 2)), ([0, 1, 0], k(3) * a(3, 3)), ([2, 0, 0], xx), ([1, 1, 0], xy), ([0, 2, 0], yy)];
    Ok(Jet::from_terms(2, 2, terms)?)
}

fn in_excluded<T: Scalar>(c: &T) -> bool {
    EXCLUDED_MODULI.iter().any(|&(n, d)| {
        let e = T::from_ratio(n, d);
        (c.clone() - e.clone()).is_zero_at(e.to_f64().abs())
    })
}

/// `6β² + 4α − 15β + 5`, which must not vanish on the normal form.
pub fn normal_form_gate<T: Scalar>(alpha: &T, beta: &T) -> T {
    T::from_i64(6) * beta.clone() * beta.clone() + T::from_i64(4) * alpha.clone() - T::from_i64(15) * beta.clone()
        + T::from_i64(5)
}

/// The normal form `(x² + xy² + αy⁴, xy + βy³ + φ)`, with `φ` an optional quartic form.
pub fn normal_form_surface<T: Scalar>(alpha: T, beta: T, phi: Option<&Jet<T>>) -> Result<SurfaceJet<T>, GeometryError> {
    let gate = normal_form_gate(&alpha, &beta);
    let scale = alpha.to_f64().abs().max(beta.to_f64().abs()).max(1.0);
    if gate.is_zero_at(scale * scale) {
        return Err(GeometryError::InvalidModuli("6*beta^2 + 4*alpha - 15*beta + 5 = 0".into()));
    }
    if alpha.is_zero_at(scale) || beta.is_zero_at(scale) {
        return Err(GeometryError::InvalidModuli("alpha*beta = 0".into()));
    }
    let c = alpha.clone() / beta.clone();
    if in_excluded(&c) {
        return Err(GeometryError::InvalidModuli(format!("modulus c = alpha/beta = {c} is excluded")));
    }
    let mut b_tab = vec![((3u8, 3u8), beta)];
    if let Some(phi) = phi {
        if phi.nvars() != 2 {
            return Err(GeometryError::InvalidModuli("phi must have 2 variables".into()));
        }
        for (e, v) in phi.terms() {
            if e[0] + e[1] != 4 {
                return Err(GeometryError::InvalidModuli("phi must be a quartic form".into()));
            }
            b_tab.push(((4, e[1]), v.clone()));
        }
    }
    SurfaceJet::parabolic_chart(&[((3, 2), T::one()), ((4, 4), alpha)], &b_tab)
}

/// Why a point failed the P3(c) test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum P3Failure {
    A33Nonzero,
    VanishingProduct,
    ExcludedModulus,
}

impl std::fmt::Display for P3Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            P3Failure::A33Nonzero => write!(f, "not a P3(c) point: a33 != 0"),
            P3Failure::VanishingProduct => write!(f, "not a P3(c) point: b33*a32*a44 = 0"),
            P3Failure::ExcludedModulus => write!(f, "not a P3(c) point: modulus c in {{0, 1/2, 1, 3/2}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct P3Report<T> {
    pub is_p3c: bool,
    pub failure: Option<P3Failure>,
    pub a32: T,
    pub a33: T,
    pub a44: T,
    pub b33: T,
    /// `a44 / (b33 a32)`, present once the product is nonzero.
    pub modulus_c: Option<T>,
    pub versal: bool,
    /// `5 a32 b33 − 6 b33² − 4 a44`.
    pub versality: T,
    pub normalized: Option<(T, T)>,
    /// Whether α itself lies in `{0, 1/2, 1, 3/2}` (informational only).
    pub alpha_in_excluded_list: Option<bool>,
}

/// `(Q1, Q2) = (a x² + 2b xy + c y², l x² + 2m xy + n y²)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticPair<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub l: T,
    pub m: T,
    pub n: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointKind {
    Hyperbolic,
    Elliptic,
    Parabolic,
    Inflection,
    DegenerateInflection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointClass {
    pub kind: PointKind,
    /// 2, 1 or 0 for hyperbolic, parabolic and elliptic points; `None` at inflections.
    pub asymptotic_directions: Option<u8>,
}

impl<T: Scalar> QuadraticPair<T> {
    pub fn from_forms(q1: [T; 3], q2: [T; 3]) -> Self {
        let half = T::from_ratio(1, 2);
        let [a, b2, c] = q1;
        let [l, m2, n] = q2;
        Self { a, b: b2 * half.clone(), c, l, m: m2 * half, n }
    }

    pub fn delta(&self) -> T {
        let (a, b, c, l, m, n) =
            (self.a.clone(), self.b.clone(), self.c.clone(), self.l.clone(), self.m.clone(), self.n.clone());
        let h = a.clone() * n.clone() - c.clone() * l.clone();
        h.clone() * h - T::from_i64(4) * (a * m.clone() - b.clone() * l) * (b * n - c * m)
    }

    fn scale(&self) -> f64 {
        [&self.a, &self.b, &self.c, &self.l, &self.m, &self.n]
            .iter()
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Rank of `[[a, b, c], [l, m, n]]`.
    pub fn rank(&self) -> usize {
        let s = self.scale();
        let rows = [[&self.a, &self.b, &self.c], [&self.l, &self.m, &self.n]];
        if rows.iter().flatten().all(|v| v.is_zero_at(s)) {
            return 0;
        }
        let minor = |i: usize, j: usize| rows[0][i].clone() * rows[1][j].clone() - rows[0][j].clone() * rows[1][i].clone();
        if [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| minor(i, j).is_zero_at(s * s)) {
            1
        } else {
            2
        }
    }
}

pub fn classify_point<T: Scalar>(q: &QuadraticPair<T>) -> PointClass {
    let s = q.scale();
    match q.rank() {
        0 => PointClass { kind: PointKind::DegenerateInflection, asymptotic_directions: None },
        1 => {
            let (a, b, c) = if [&q.a, &q.b, &q.c].iter().all(|v| v.is_zero_at(s)) {
                (&q.l, &q.m, &q.n)
            } else {
                (&q.a, &q.b, &q.c)
            };
            let det = a.clone() * c.clone() - b.clone() * b.clone();
            let kind = if det.is_zero_at(s * s) { PointKind::DegenerateInflection } else { PointKind::Inflection };
            PointClass { kind, asymptotic_directions: None }
        }
        _ => {
            let d = q.delta();
            if d.is_zero_at(s.powi(4)) {
                PointClass { kind: PointKind::Parabolic, asymptotic_directions: Some(1) }
            } else if d > T::zero() {
                PointClass { kind: PointKind::Hyperbolic, asymptotic_directions: Some(2) }
            } else {
                PointClass { kind: PointKind::Elliptic, asymptotic_directions: Some(0) }
            }
        }
    }
}

/// Result of moving a parabolic 2-jet to `(x², xy)`.
///
/// `surface.f = target · (old f ∘ source)`, with `source` acting on `(x', y')`.
#[derive(Clone, Debug)]
pub struct ChartChange<T> {
    pub surface: SurfaceJet<T>,
    pub source: [[T; 2]; 2],
    pub target: [[T; 2]; 2],
}

fn det2<T: Scalar>(m: &[[T; 2]; 2]) -> T {
    m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
}

/// Linear source/target change taking a parabolic point's 2-jet to `(x², xy)`.
/// The source change is chosen orientation-preserving.
pub fn to_parabolic_chart<T: Scalar>(s: &SurfaceJet<T>) -> Result<ChartChange<T>, GeometryError> {
    let q = s.quadratic_pair();
    let class = classify_point(&q);
    if class.kind != PointKind::Parabolic {
        return Err(GeometryError::Chart(format!("origin is {:?}, not parabolic", class.kind)));
    }
    let sc = q.scale();
    let (a, b, c, l, m, n) = (q.a.clone(), q.b.clone(), q.c.clone(), q.l.clone(), q.m.clone(), q.n.clone());
    let d1 = a.clone() * c.clone() - b.clone() * b.clone();
    let mid = a.clone() * n.clone() + c.clone() * l.clone() - T::from_i64(2) * b.clone() * m.clone();
    let (sw, rw) = if d1.is_zero_at(sc * sc) {
        (T::one(), T::zero())
    } else {
        (-mid / (T::from_i64(2) * d1), T::one())
    };
    let sa = sw.clone() * a.clone() + rw.clone() * l.clone();
    let sb = sw.clone() * b.clone() + rw.clone() * m.clone();
    let sc_ = sw.clone() * c.clone() + rw.clone() * n.clone();
    let (mut source, kappa) = if !sa.is_zero_at(sc) {
        ([[T::one() / sa.clone(), -sb / sa.clone()], [T::zero(), T::one()]], T::one() / sa)
    } else {
        ([[T::zero(), T::one()], [T::one(), T::zero()]], sc_)
    };
    if det2(&source) < T::zero() {
        source[0][1] = -source[0][1].clone();
        source[1][1] = -source[1][1].clone();
    }
    let other_is_f1 = !rw.is_zero();
    let o = if other_is_f1 { s.f1() } else { s.f2() };
    let o_new = o.linear_change(&source)?;
    let alpha_p = o_new.c2(2, 0);
    let beta_p = o_new.c2(1, 1);
    let t1 = [sw / kappa.clone(), rw / kappa];
    let ov = if other_is_f1 { [T::one(), T::zero()] } else { [T::zero(), T::one()] };
    let t2 = [
        (ov[0].clone() - alpha_p.clone() * t1[0].clone()) / beta_p.clone(),
        (ov[1].clone() - alpha_p * t1[1].clone()) / beta_p,
    ];
    let g1 = s.f1().linear_change(&source)?;
    let g2 = s.f2().linear_change(&source)?;
    let f1n = &g1.scale(&t1[0]) + &g2.scale(&t1[1]);
    let f2n = &g1.scale(&t2[0]) + &g2.scale(&t2[1]);
    let target = [t1, t2];
    Ok(ChartChange { surface: SurfaceJet::new(f1n, f2n)?, source, target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    fn qp(q1: [i64; 3], q2: [i64; 3]) -> QuadraticPair<Rational> {
        QuadraticPair::from_forms(q1.map(int), q2.map(int))
    }

    #[test]
    fn orbit_list_classification() {
        assert_eq!(classify_point(&qp([1, 0, 0], [0, 0, 1])).kind, PointKind::Hyperbolic);
        let e = classify_point(&qp([0, 1, 0], [1, 0, -1]));
        assert_eq!(e, PointClass { kind: PointKind::Elliptic, asymptotic_directions: Some(0) });
        let p = classify_point(&qp([1, 0, 0], [0, 1, 0]));
        assert_eq!(p, PointClass { kind: PointKind::Parabolic, asymptotic_directions: Some(1) });
        assert_eq!(classify_point(&qp([1, 0, 1], [0, 0, 0])).kind, PointKind::Inflection);
        assert_eq!(classify_point(&qp([1, 0, -1], [0, 0, 0])).kind, PointKind::Inflection);
        assert_eq!(classify_point(&qp([1, 0, 0], [0, 0, 0])).kind, PointKind::DegenerateInflection);
        assert_eq!(classify_point(&qp([0, 0, 0], [0, 0, 0])).kind, PointKind::DegenerateInflection);
    }

    #[test]
    fn delta_at_origin_of_basic_pairs() {
        assert_eq!(qp([1, 0, 0], [0, 1, 0]).delta(), int(0));
        assert_eq!(qp([1, 0, 0], [0, 0, 1]).delta(), int(1));
        let s = SurfaceJet::<Rational>::parabolic_chart(&[], &[]).unwrap();
        assert_eq!(s.delta_jet().unwrap().eval_origin(), int(0));
    }

    #[test]
    fn coefficient_accessors_follow_indexing() {
        let s = SurfaceJet::parabolic_chart(&[((3, 2), int(7)), ((4, 4), int(-1))], &[((3, 3), int(2))]).unwrap();
        assert_eq!(s.f1().c2(1, 2), int(7));
        assert_eq!(s.a(3, 2), int(7));
        assert_eq!(s.a(4, 4), int(-1));
        assert_eq!(s.b(3, 3), int(2));
        assert_eq!(s.f2().c2(0, 3), int(2));
    }

    #[test]
    fn parabolic_series_worked_points() {
        let s = normal_form_surface(int(-1), int(1), None).unwrap();
        let g = s.parabolic_series().unwrap();
        assert_eq!(g.c2, int(3));
        assert_eq!(g.c1, int(0));
        let s = normal_form_surface(int(2), int(-1), None).unwrap();
        assert_eq!(s.parabolic_series().unwrap().c2, int(-27));
    }

    #[test]
    fn parabolic_series_needs_a32() {
        let s = SurfaceJet::parabolic_chart(&[((4, 4), int(1))], &[((3, 3), int(1))]).unwrap();
        assert!(matches!(s.parabolic_series(), Err(GeometryError::Degenerate(_))));
    }

    #[test]
    fn detect_p3c_examples() {
        let s = SurfaceJet::parabolic_chart(&[((3, 2), int(1)), ((4, 4), int(-1))], &[((3, 3), int(1))]).unwrap();
        let r = s.detect_p3c().unwrap();
        assert!(r.is_p3c);
        assert_eq!(r.modulus_c, Some(int(-1)));
        assert!(r.versal);
        assert_eq!(r.versality, int(3));

        let s = SurfaceJet::parabolic_chart(&[((3, 2), int(2)), ((4, 4), int(6))], &[((3, 3), int(3))]).unwrap();
        let r = s.detect_p3c().unwrap();
        assert!(!r.is_p3c);
        assert_eq!(r.failure, Some(P3Failure::ExcludedModulus));

        let s = SurfaceJet::parabolic_chart(&[((3, 2), int(1)), ((3, 3), int(1)), ((4, 4), int(-1))], &[((3, 3), int(1))])
            .unwrap();
        let r = s.detect_p3c().unwrap();
        assert_eq!(r.failure, Some(P3Failure::A33Nonzero));
        assert_eq!(r.failure.unwrap().to_string(), "not a P3(c) point: a33 != 0");
    }

    #[test]
    fn detect_p3c_rejects_other_charts() {
        let f1 = Jet::from_terms(2, 5, [([2, 0, 0], int(1))]).unwrap();
        let f2 = Jet::from_terms(2, 5, [([0, 2, 0], int(1))]).unwrap();
        let s = SurfaceJet::new(f1, f2).unwrap();
        assert!(matches!(s.detect_p3c(), Err(GeometryError::Chart(_))));
    }

    #[test]
    fn normal_form_gates() {
        assert!(normal_form_surface(int(-1), int(1), None).is_ok());
        // 6β² + 4α − 15β + 5 = 0 at β = 1, α = 1
        assert!(normal_form_surface(int(1), int(1), None).is_err());
        assert!(normal_form_surface(rat(1, 2), int(1), None).is_err());
        let s = normal_form_surface(int(-1), int(1), None).unwrap();
        assert_eq!(s.normal_form_moduli(), Some((int(-1), int(1))));
        assert_eq!(s.detect_p3c().unwrap().normalized, Some((int(-1), int(1))));
    }

    #[test]
    fn normal_form_with_quartic_tail() {
        let phi = Jet::from_terms(2, 5, [([4, 0, 0], int(1)), ([2, 2, 0], rat(1, 3))]).unwrap();
        let s = normal_form_surface(int(-1), int(1), Some(&phi)).unwrap();
        assert_eq!(s.b(4, 0), int(1));
        assert_eq!(s.b(4, 2), rat(1, 3));
        assert_eq!(s.normal_form_moduli(), Some((int(-1), int(1))));
        let bad = Jet::from_terms(2, 5, [([3, 0, 0], int(1))]).unwrap();
        assert!(normal_form_surface(int(-1), int(1), Some(&bad)).is_err());
    }

    #[test]
    fn chart_helper_reaches_x2_xy() {
        // (x², xy) after x -> x + 2y, y -> x + y and mixing Q2 += 5 Q1
        let f1 = Jet::from_terms(2, 5, [([2, 0, 0], int(1)), ([1, 1, 0], int(4)), ([0, 2, 0], int(4)), ([0, 3, 0], int(1))])
            .unwrap();
        let f2 = Jet::from_terms(2, 5, [([2, 0, 0], int(6)), ([1, 1, 0], int(23)), ([0, 2, 0], int(22)), ([3, 0, 0], int(2))])
            .unwrap();
        let s = SurfaceJet::new(f1, f2).unwrap();
        assert_eq!(classify_point(&s.quadratic_pair()).kind, PointKind::Parabolic);
        let ch = to_parabolic_chart(&s).unwrap();
        assert!(ch.surface.is_parabolic_chart(), "{:?}", ch.surface.quadratic_pair());
        assert!(det2(&ch.source) > int(0));
        assert_ne!(det2(&ch.target), int(0));
    }

    #[test]
    fn chart_helper_refuses_hyperbolic() {
        let f1 = Jet::from_terms(2, 5, [([2, 0, 0], int(1))]).unwrap();
        let f2 = Jet::from_terms(2, 5, [([0, 2, 0], int(1))]).unwrap();
        assert!(to_parabolic_chart(&SurfaceJet::new(f1, f2).unwrap()).is_err());
    }

    fn random_chart(seed: i64) -> SurfaceJet<Rational> {
        let mut v = seed;
        let mut next = || {
            v = (v * 1103515245 + 12345).rem_euclid(1 << 31);
            int(v % 11 - 5)
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        for k in 3u8..=5 {
            for i in 0..=k {
                a.push(((k, i), next()));
                b.push(((k, i), next()));
            }
        }
        SurfaceJet::parabolic_chart(&a, &b).unwrap()
    }

    #[test]
    fn j2_delta_matches_display_except_xy() {
        for seed in 1..40 {
            let s = random_chart(seed);
            let got = s.delta_jet().unwrap().truncate(2);
            let shown = printed_j2_delta(&s).unwrap();
            for e in [[0, 0, 0], [1, 0, 0], [0, 1, 0], [2, 0, 0], [0, 2, 0]] {
                assert_eq!(got.coeff(e), shown.coeff(e), "{e:?}");
            }
            assert_eq!(got.coeff([1, 1, 0]) - shown.coeff([1, 1, 0]), s.a(3, 2) * s.b(3, 2));
        }
    }
}
