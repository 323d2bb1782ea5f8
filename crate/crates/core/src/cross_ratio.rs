//! Cross-ratios of the tangent lines at the P3(c)-point and recovery of `(α, β)`.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::locus::closed::all_normalized;
use crate::locus::{LocusError, LocusGerm, LocusLabel};
use crate::scalar::{Rational, Scalar};

/// Slope gap below which two float lines count as coincident.
pub const COINCIDENT_TOL: f64 = 1e-12;
/// Threshold on `1 − 4ρ2 + 3ρ3` for the generic α branch.
pub const GENERIC_TOL: f64 = 1e-9;
/// Matching tolerance for the ρ4 selector.
pub const RHO4_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrossRatioError {
    #[error("cross-ratio undefined: lines {0} and {1} coincide")]
    Coincident(usize, usize),
    #[error("rho1 = 1/2: beta is undefined")]
    UndefinedBeta,
    #[error("no alpha candidate reproduces rho4 = {0}")]
    InconsistentInvariants(String),
    #[error("degenerate branch quadratic has no real root")]
    NoRealRoot,
    #[error("missing germ for {0}")]
    MissingGerm(LocusLabel),
    #[error(transparent)]
    Locus(#[from] LocusError),
}

/// A line through the origin of the contact plane: slope `c`, or `l_g`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SlopeLine<T> {
    Slope(T),
    Vertical,
}

impl<T: Scalar> SlopeLine<T> {
    /// Homogeneous coordinates `[c : 1]` or `[1 : 0]`.
    fn homog(&self) -> (T, T) {
        match self {
            SlopeLine::Slope(c) => (c.clone(), T::one()),
            SlopeLine::Vertical => (T::one(), T::zero()),
        }
    }
}

fn det<T: Scalar>(p: &(T, T), q: &(T, T)) -> T {
    p.0.clone() * q.1.clone() - p.1.clone() * q.0.clone()
}

/// `(l1, l2 : l3, l4) = (c3−c1)(c4−c2) / ((c3−c2)(c4−c1))`, in homogeneous
/// form so that a vertical `l2` gives `(c3−c1)/(c4−c1)`.
pub fn cross_ratio<T: Scalar>(
    l1: &SlopeLine<T>,
    l2: &SlopeLine<T>,
    l3: &SlopeLine<T>,
    l4: &SlopeLine<T>,
) -> Result<T, CrossRatioError> {
    let p = [l1.homog(), l2.homog(), l3.homog(), l4.homog()];
    for i in 0..4 {
        for j in i + 1..4 {
            let d = det(&p[i], &p[j]);
            let gone = if T::EXACT { d.is_zero() } else { d.to_f64().abs() <= COINCIDENT_TOL };
            if gone {
                return Err(CrossRatioError::Coincident(i + 1, j + 1));
            }
        }
    }
    Ok(det(&p[2], &p[0]) * det(&p[3], &p[1]) / (det(&p[2], &p[1]) * det(&p[3], &p[0])))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossRatioSet<T> {
    /// `(l_P, l_B : l_S, l_F)`.
    pub rho1: T,
    /// `(l_P, l_g : l_s01, l_s02)`.
    pub rho2: T,
    /// `(l_P, l_g : l_s1, l_s02)`.
    pub rho3: T,
    /// `(l_P, l_g : l_B, l_s02)`, used only to pick between α roots.
    pub rho4: T,
}

/// Invariants from the seven c-values in `LocusLabel::ALL` order.
pub fn cr_invariants<T: Scalar>(c: &[T; 7]) -> Result<CrossRatioSet<T>, CrossRatioError> {
    let s = |i: usize| SlopeLine::Slope(c[i].clone());
    let g = SlopeLine::Vertical;
    let [p, b, sk, f, s02, s1, s01] = [0, 1, 2, 3, 4, 5, 6].map(s);
    Ok(CrossRatioSet {
        rho1: cross_ratio(&p, &b, &sk, &f)?,
        rho2: cross_ratio(&p, &g, &s01, &s02)?,
        rho3: cross_ratio(&p, &g, &s1, &s02)?,
        rho4: cross_ratio(&p, &g, &b, &s02)?,
    })
}

/// Invariants from germs (any order; every label must be present).
pub fn cr_invariants_from_germs<T: Scalar>(germs: &[LocusGerm<T>]) -> Result<CrossRatioSet<T>, CrossRatioError> {
    let mut c = Vec::with_capacity(7);
    for l in LocusLabel::ALL {
        let g = germs.iter().find(|g| g.label == l).ok_or(CrossRatioError::MissingGerm(l))?;
        c.push(g.c2.clone());
    }
    let c: [T; 7] = c.try_into().expect("seven labels");
    cr_invariants(&c)
}

/// Forward map `(α, β) ↦ ρ` through the normalized closed forms.
pub fn invariants_at<T: Scalar>(alpha: &T, beta: &T) -> Result<CrossRatioSet<T>, CrossRatioError> {
    cr_invariants(&all_normalized(alpha, beta)?)
}

/// `ρ2 = (1/24) γ3 / (β(α + β² − β))`, printed rational form.
pub fn printed_rho2<T: Scalar>(alpha: &T, beta: &T) -> T {
    let (a, b) = (alpha.clone(), beta.clone());
    let b2 = b.clone() * b.clone();
    crate::locus::closed::gamma3(&a, &b) / (T::from_i64(24) * b.clone() * (-b + b2 + a))
}

/// `ρ3 = (1/6) γ2 / (β(3α − 4β + 4β²))`, printed rational form.
pub fn printed_rho3<T: Scalar>(alpha: &T, beta: &T) -> T {
    let (a, b) = (alpha.clone(), beta.clone());
    let b2 = b.clone() * b.clone();
    crate::locus::closed::gamma2(&a, &b)
        / (T::from_i64(6) * b.clone() * (T::from_i64(3) * a - T::from_i64(4) * b + T::from_i64(4) * b2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    Generic,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recovery<T> {
    pub beta: T,
    pub alpha_candidates: Vec<T>,
    pub alpha_selected: T,
    pub branch: Branch,
}

/// `β = (ρ1 − 1)/(3(2ρ1 − 1))`.
pub fn recover_beta<T: Scalar>(rho1: &T) -> Result<T, CrossRatioError> {
    let d = T::from_i64(3) * (T::from_i64(2) * rho1.clone() - T::one());
    if d.is_zero_at(1.0) {
        return Err(CrossRatioError::UndefinedBeta);
    }
    Ok((rho1.clone() - T::one()) / d)
}

/// Square root in `T`: exact for rational perfect squares, float otherwise.
fn sqrt_scalar<T: Scalar>(v: &T) -> Option<T> {
    if *v < T::zero() {
        return None;
    }
    if T::EXACT {
        if let Some(r) = v.to_rational().as_ref().and_then(exact_rational_sqrt) {
            return Some(T::from_rational(&r));
        }
    }
    let f = v.to_f64().sqrt();
    crate::scalar::rational_from_f64(f).map(|q| T::from_rational(&q))
}

fn exact_rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let isqrt = |n: &BigInt| -> Option<BigInt> {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rational::new(isqrt(q.numer())?, isqrt(q.denom())?))
}

/// Inverts the invariants. Generic branch: `α = 4(ρ2 − ρ3)β(β − 1)/(1 − 4ρ2 + 3ρ3)`.
/// Degenerate branch: roots of the ρ2 relation
/// `16α² + (48β² − 32β − 24ρ2β)α + 36β⁴ − 60β³ + 21β² + 24ρ2β² − 24ρ2β³ = 0`,
/// selected by the forward value of ρ4.
pub fn recover_moduli<T: Scalar>(rho: &CrossRatioSet<T>) -> Result<Recovery<T>, CrossRatioError> {
    let k = |n: i64| T::from_i64(n);
    let beta = recover_beta(&rho.rho1)?;
    let (r2, r3) = (rho.rho2.clone(), rho.rho3.clone());
    let den = T::one() - k(4) * r2.clone() + k(3) * r3.clone();
    let generic = if T::EXACT { !den.is_zero() } else { den.to_f64().abs() > GENERIC_TOL };
    if generic {
        let alpha = k(4) * (r2 - r3) * beta.clone() * (beta.clone() - T::one()) / den;
        return Ok(Recovery { beta, alpha_candidates: vec![alpha.clone()], alpha_selected: alpha, branch: Branch::Generic });
    }
    let b = beta.clone();
    let b2 = b.clone() * b.clone();
    let b3 = b2.clone() * b.clone();
    let qa = k(16);
    let qb = k(48) * b2.clone() - k(32) * b.clone() - k(24) * r2.clone() * b.clone();
    let qc = k(36) * b2.clone() * b2.clone() - k(60) * b3.clone() + k(21) * b2.clone() + k(24) * r2.clone() * b2
        - k(24) * r2 * b3;
    let disc = qb.clone() * qb.clone() - k(4) * qa.clone() * qc;
    let root = sqrt_scalar(&disc).ok_or(CrossRatioError::NoRealRoot)?;
    let two_a = k(2) * qa;
    let candidates = vec![(-qb.clone() - root.clone()) / two_a.clone(), (-qb + root) / two_a];
    let target = rho.rho4.to_f64();
    let selected = candidates
        .iter()
        .filter_map(|a| {
            let r4 = invariants_at(a, &beta).ok()?.rho4;
            let gap = (r4.to_f64() - target).abs();
            (gap <= RHO4_TOL * target.abs().max(1.0)).then_some((gap, a.clone()))
        })
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .map(|x| x.1)
        .ok_or_else(|| CrossRatioError::InconsistentInvariants(rho.rho4.to_string()))?;
    Ok(Recovery { beta, alpha_candidates: candidates, alpha_selected: selected, branch: Branch::Degenerate })
}

/// The α formula exactly as printed, kept for comparison only.
pub fn printed_alpha<T: Scalar>(rho: &CrossRatioSet<T>) -> Option<T> {
    let k = |n: i64| T::from_i64(n);
    let (r1, r2, r3) = (rho.rho1.clone(), rho.rho2.clone(), rho.rho3.clone());
    let num = (k(80) * r2.clone() * r1.clone() - k(32) * r2.clone() + k(20) * r3.clone() * r1.clone() - k(8) * r3.clone()
        + k(42) * r1.clone()
        - k(21))
        * (r1.clone() - T::one());
    let m = k(2) * r1 - T::one();
    let den = k(9) * (k(3) * r3 + T::one() + k(12) * r2) * m.clone() * m;
    (!den.is_zero_at(1.0)).then(|| num / den)
}

/// JSON-facing report `{rho1, rho2, rho3, rho4, beta, alpha_candidates, alpha_selected, branch}`.
#[derive(Clone, Debug, Serialize)]
pub struct RecoveryReport {
    pub rho1: String,
    pub rho2: String,
    pub rho3: String,
    pub rho4: String,
    pub beta: String,
    pub alpha_candidates: Vec<String>,
    pub alpha_selected: String,
    pub branch: Branch,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_alpha_consistent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RecoveryReport {
    /// `literal` adds the printed α formula and whether it matches any candidate.
    pub fn new<T: Scalar>(rho: &CrossRatioSet<T>, rec: &Recovery<T>, literal: bool) -> Self {
        let s = |v: &T| v.to_string();
        let (printed_alpha, consistent, note) = if literal {
            let pa = printed_alpha(rho);
            let ok = pa.as_ref().map(|p| rec.alpha_candidates.iter().any(|c| (c.to_f64() - p.to_f64()).abs() <= 1e-9));
            let note = match ok {
                Some(false) => Some(
                    "printed alpha formula matches no preimage; it disagrees with the verified rho2, rho3 expressions"
                        .to_string(),
                ),
                None => Some("printed alpha formula has a vanishing denominator here".to_string()),
                Some(true) => None,
            };
            (pa.as_ref().map(s), ok, note)
        } else {
            (None, None, None)
        };
        Self {
            rho1: s(&rho.rho1),
            rho2: s(&rho.rho2),
            rho3: s(&rho.rho3),
            rho4: s(&rho.rho4),
            beta: s(&rec.beta),
            alpha_candidates: rec.alpha_candidates.iter().map(s).collect(),
            alpha_selected: s(&rec.alpha_selected),
            branch: rec.branch,
            printed_alpha,
            printed_alpha_consistent: consistent,
            note,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn sl(n: i64, d: i64) -> SlopeLine<Rational> {
        SlopeLine::Slope(rat(n, d))
    }

    #[test]
    fn basic_values() {
        assert_eq!(cross_ratio(&sl(0, 1), &sl(1, 1), &sl(2, 1), &sl(3, 1)).unwrap(), rat(4, 3));
        let r = cross_ratio(&sl(3, 1), &SlopeLine::Vertical, &sl(15, 4), &sl(9, 1)).unwrap();
        assert_eq!(r, rat(1, 8));
        assert!(matches!(cross_ratio(&sl(1, 1), &sl(1, 1), &sl(2, 1), &sl(3, 1)), Err(CrossRatioError::Coincident(1, 2))));
    }

    #[test]
    fn float_coincidence_tolerance() {
        let l = |c: f64| SlopeLine::Slope(c);
        assert!(cross_ratio(&l(1.0), &l(1.0 + 1e-13), &l(2.0), &l(3.0)).is_err());
        assert!(cross_ratio(&l(1.0), &l(1.0 + 1e-6), &l(2.0), &l(3.0)).is_ok());
    }

    #[test]
    fn worked_invariants() {
        let r = invariants_at(&int(-1), &int(1)).unwrap();
        assert_eq!((r.rho1.clone(), r.rho2.clone(), r.rho3.clone(), r.rho4.clone()), (rat(2, 5), rat(1, 8), rat(-1, 6), rat(3, 2)));
        let r = invariants_at(&int(2), &int(-1)).unwrap();
        assert_eq!((r.rho1, r.rho2, r.rho3), (rat(4, 7), rat(-341, 96), rat(-353, 84)));
    }

    #[test]
    fn printed_rho_forms_agree() {
        for (a, b) in [(int(-1), int(1)), (int(2), int(-1)), (rat(3, 7), rat(-2, 5)), (rat(-5, 3), rat(7, 4))] {
            let r = invariants_at(&a, &b).unwrap();
            assert_eq!(r.rho2, printed_rho2(&a, &b));
            assert_eq!(r.rho3, printed_rho3(&a, &b));
            let b3 = int(3) * b.clone();
            assert_eq!(r.rho1, (b3 - int(1)) / (int(6) * b.clone() - int(1)));
        }
    }

    #[test]
    fn degenerate_point_uses_rho4() {
        let rho = invariants_at(&int(-1), &int(1)).unwrap();
        let rec = recover_moduli(&rho).unwrap();
        assert_eq!(rec.branch, Branch::Degenerate);
        assert_eq!(rec.beta, int(1));
        let mut c = rec.alpha_candidates.clone();
        c.sort();
        assert_eq!(c, vec![int(-1), rat(3, 16)]);
        assert_eq!(rec.alpha_selected, int(-1));
        // The other root shares rho1..rho3 but not rho4.
        let other = invariants_at(&rat(3, 16), &int(1)).unwrap();
        assert_eq!((other.rho1, other.rho2, other.rho3), (rho.rho1.clone(), rho.rho2.clone(), rho.rho3.clone()));
        assert_ne!(other.rho4, rho.rho4);
        let other_rec = recover_moduli(&invariants_at(&rat(3, 16), &int(1)).unwrap()).unwrap();
        assert_eq!(other_rec.alpha_selected, rat(3, 16));
    }

    #[test]
    fn generic_branch_exact() {
        let rec = recover_moduli(&invariants_at(&int(2), &int(-1)).unwrap()).unwrap();
        assert_eq!((rec.beta, rec.alpha_selected, rec.branch), (int(-1), int(2), Branch::Generic));
    }

    #[test]
    fn undefined_beta() {
        assert!(matches!(recover_beta(&rat(1, 2)), Err(CrossRatioError::UndefinedBeta)));
        assert_eq!(recover_beta(&rat(1, 3)).unwrap(), rat(2, 3));
    }

    #[test]
    fn printed_alpha_is_seven_halves() {
        let rho = CrossRatioSet { rho1: rat(2, 5), rho2: rat(1, 8), rho3: rat(-1, 6), rho4: rat(3, 2) };
        assert_eq!(printed_alpha(&rho), Some(rat(7, 2)));
        let rep = RecoveryReport::new(&rho, &recover_moduli(&rho).unwrap(), true);
        assert_eq!(rep.printed_alpha_consistent, Some(false));
        assert_eq!(rep.alpha_selected, "-1");
    }

    #[test]
    fn bad_rho4_is_inconsistent() {
        let rho = CrossRatioSet { rho1: rat(2, 5), rho2: rat(1, 8), rho3: rat(-1, 6), rho4: rat(7, 1) };
        assert!(matches!(recover_moduli(&rho), Err(CrossRatioError::InconsistentInvariants(_))));
    }
}
