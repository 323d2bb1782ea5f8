//! Closed-form quadratic coefficients of the seven germs and their pairwise differences.

use serde::Serialize;

use super::{LocusError, LocusLabel};
use crate::scalar::Scalar;

fn k<T: Scalar>(n: i64) -> T {
    T::from_i64(n)
}

fn guard<T: Scalar>(label: LocusLabel, d: &T, scale: f64, locus: &'static str) -> Result<(), LocusError> {
    if d.is_zero_at(scale) {
        Err(LocusError::NonGeneric { label, locus })
    } else {
        Ok(())
    }
}

/// Quadratic coefficient `c` of `x = c y² + o(y²)` in terms of `a32, a44, b33`.
pub fn closed_form_c<T: Scalar>(label: LocusLabel, a32: &T, a44: &T, b33: &T) -> Result<T, LocusError> {
    let (p, a, b) = (a32.clone(), a44.clone(), b33.clone());
    let s = [p.to_f64(), a.to_f64(), b.to_f64()].iter().fold(1.0f64, |m, v| m.max(v.abs()));
    guard(label, &p, s, "a32")?;
    let p2 = p.clone() * p.clone();
    let p3 = p2.clone() * p.clone();
    let b2 = b.clone() * b.clone();
    let b3 = b2.clone() * b.clone();
    let a2 = a.clone() * a.clone();
    Ok(match label {
        LocusLabel::Parabolic => (k::<T>(6) * p.clone() * b.clone() - k::<T>(9) * b2 - k::<T>(6) * a) / p,
        LocusLabel::B2 => {
            let d = p.clone() - k::<T>(2) * b.clone();
            guard(label, &d, s, "a32 - 2*b33")?;
            let num = k::<T>(3) * p3 * b.clone() - k::<T>(4) * p2.clone() * b2.clone() - k::<T>(3) * a.clone() * p2
                - k::<T>(8) * a.clone() * p.clone() * b.clone()
                + k::<T>(12) * a.clone() * b2
                + k::<T>(8) * a2;
            k::<T>(2) * num / (p * d.clone() * d)
        }
        LocusLabel::S2 => {
            let d = p.clone() + k::<T>(6) * b.clone();
            guard(label, &d, s, "a32 + 6*b33")?;
            let num = p3 * b.clone() + k::<T>(48) * p2.clone() * b2.clone() - k::<T>(72) * p.clone() * b3
                - a.clone() * p2
                - k::<T>(72) * a.clone() * p.clone() * b.clone()
                + k::<T>(36) * a.clone() * b2
                + k::<T>(24) * a2;
            k::<T>(6) * num / (p * d.clone() * d)
        }
        LocusLabel::Flecnodal => {
            let d = p.clone() - k::<T>(6) * b.clone();
            guard(label, &d, s, "a32 - 6*b33")?;
            let f1 = p.clone() * b.clone() - a.clone();
            let f2 = k::<T>(24) * p.clone() * b.clone() - k::<T>(36) * b2 + p2 - k::<T>(24) * a;
            k::<T>(6) * f1 * f2 / (p * d.clone() * d)
        }
        LocusLabel::A0S0Sq => (k::<T>(12) * p.clone() * b.clone() - k::<T>(9) * b2 - k::<T>(6) * a) / p,
        LocusLabel::A0S1 => {
            let d = k::<T>(4) * p.clone() * b.clone() - k::<T>(4) * b2.clone() - k::<T>(3) * a.clone();
            guard(label, &d, s * s, "4*a32*b33 - 4*b33^2 - 3*a44")?;
            let num = k::<T>(3) * p2 * b2.clone() - k::<T>(4) * p.clone() * a.clone() * b.clone()
                + k::<T>(3) * a.clone() * b2
                + k::<T>(2) * a2;
            num / (p * d)
        }
        LocusLabel::A0S0A1 => {
            let d = p.clone() * b.clone() - b2.clone() - a.clone();
            guard(label, &d, s * s, "a32*b33 - b33^2 - a44")?;
            let num = k::<T>(3) * p2 * b2.clone() - k::<T>(16) * p.clone() * a.clone() * b.clone()
                + k::<T>(12) * a.clone() * b2
                + k::<T>(8) * a2;
            num / (k::<T>(4) * d * p)
        }
    })
}

/// Closed forms on the normal form (`a32 = 1, a44 = α, b33 = β`).
pub fn closed_form_normalized<T: Scalar>(label: LocusLabel, alpha: &T, beta: &T) -> Result<T, LocusError> {
    closed_form_c(label, &T::one(), alpha, beta)
}

/// All seven normalized closed forms in `LocusLabel::ALL` order.
pub fn all_normalized<T: Scalar>(alpha: &T, beta: &T) -> Result<[T; 7], LocusError> {
    let v: Vec<T> = LocusLabel::ALL
        .iter()
        .map(|&l| closed_form_normalized(l, alpha, beta))
        .collect::<Result<_, _>>()?;
    Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone(), v[5].clone(), v[6].clone()])
}

/// The normalized displays as printed, including the two that disagree with
/// the general-coefficient forms: S2 printed with `66β²` and A0S1 printed
/// with an extra leading minus sign.
pub fn printed_normalized<T: Scalar>(label: LocusLabel, alpha: &T, beta: &T) -> Result<T, LocusError> {
    let (a, b) = (alpha.clone(), beta.clone());
    let b2 = b.clone() * b.clone();
    match label {
        LocusLabel::S2 => {
            let d = k::<T>(6) * b.clone() + k::<T>(1);
            guard(label, &d, 1.0, "6*beta + 1")?;
            let num = k::<T>(36) * a.clone() * b2.clone() - k::<T>(72) * b2.clone() * b.clone()
                + k::<T>(24) * a.clone() * a.clone()
                - k::<T>(72) * a.clone() * b.clone()
                + k::<T>(66) * b2
                - a
                + b;
            Ok(k::<T>(6) * num / (d.clone() * d))
        }
        LocusLabel::A0S1 => {
            let d = -k::<T>(4) * b2.clone() - k::<T>(3) * a.clone() + k::<T>(4) * b.clone();
            guard(label, &d, 1.0, "-4*beta^2 - 3*alpha + 4*beta")?;
            let num = k::<T>(3) * a.clone() * b2.clone() + k::<T>(2) * a.clone() * a.clone()
                - k::<T>(4) * a * b
                + k::<T>(3) * b2;
            Ok(-(num / d))
        }
        _ => closed_form_normalized(label, alpha, beta),
    }
}

/// Bi-germ coefficients re-derived for the physical surface point (`x̄ + uȳ`)
/// on the normal form; used only as a diagnostic next to the closed forms.
pub fn rederived_bigerm<T: Scalar>(label: LocusLabel, alpha: &T, beta: &T) -> Option<T> {
    let (a, b) = (alpha.clone(), beta.clone());
    let b2 = b.clone() * b.clone();
    match label {
        LocusLabel::A0S1 => {
            let d = k::<T>(3) * a.clone() + k::<T>(4) * b2.clone() - k::<T>(4) * b.clone();
            if d.near_zero() {
                return None;
            }
            let num = k::<T>(2) * a.clone() * a.clone() + k::<T>(3) * a.clone() * b2.clone()
                - k::<T>(2) * a * b
                - b2;
            Some(-(num / d))
        }
        LocusLabel::A0S0A1 => {
            let d = k::<T>(4) * (a.clone() + b2.clone() - b.clone());
            if d.near_zero() {
                return None;
            }
            let num = k::<T>(8) * a.clone() * a.clone() + k::<T>(12) * a.clone() * b2.clone()
                - k::<T>(8) * a * b
                - b2;
            Some(-(num / d))
        }
        _ => None,
    }
}

/// One pairwise difference identity `lhs = rhs`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck<T> {
    pub name: &'static str,
    #[serde(skip)]
    pub lhs: T,
    #[serde(skip)]
    pub rhs: T,
    pub holds: bool,
    /// Set when the entry carries a corrected printed denominator or numerator.
    pub note: Option<&'static str>,
}

/// `K = (4α + 6β² − 5β)²`.
pub fn k_factor<T: Scalar>(alpha: &T, beta: &T) -> T {
    let g = k::<T>(4) * alpha.clone() + k::<T>(6) * beta.clone() * beta.clone() - k::<T>(5) * beta.clone();
    g.clone() * g
}

/// `4α + 6β² − 9β`.
pub fn g5<T: Scalar>(alpha: &T, beta: &T) -> T {
    k::<T>(4) * alpha.clone() + k::<T>(6) * beta.clone() * beta.clone() - k::<T>(9) * beta.clone()
}

/// `48β²α − 60β³ + 36β⁴ − 38βα + 21β² + 16α²`.
pub fn gamma2<T: Scalar>(a: &T, b: &T) -> T {
    let b2 = b.clone() * b.clone();
    k::<T>(48) * b2.clone() * a.clone() - k::<T>(60) * b2.clone() * b.clone() + k::<T>(36) * b2.clone() * b2.clone()
        - k::<T>(38) * b.clone() * a.clone()
        + k::<T>(21) * b2
        + k::<T>(16) * a.clone() * a.clone()
}

/// `−60β³ + 36β⁴ + 48β²α + 21β² − 32βα + 16α²`.
pub fn gamma3<T: Scalar>(a: &T, b: &T) -> T {
    let b2 = b.clone() * b.clone();
    -k::<T>(60) * b2.clone() * b.clone() + k::<T>(36) * b2.clone() * b2.clone() + k::<T>(48) * b2.clone() * a.clone()
        + k::<T>(21) * b2
        - k::<T>(32) * b.clone() * a.clone()
        + k::<T>(16) * a.clone() * a.clone()
}

/// The twelve pairwise differences of the normalized closed forms, each
/// against its factored right-hand side.
pub fn difference_identities<T: Scalar>(alpha: &T, beta: &T) -> Result<Vec<IdentityCheck<T>>, LocusError> {
    let (a, b) = (alpha.clone(), beta.clone());
    let [cp, cb, cs, cf, cs02, cs1, cs01] = all_normalized(&a, &b)?;
    let kk = k_factor(&a, &b);
    let g4 = k::<T>(4) * a.clone() + k::<T>(6) * b.clone() * b.clone() - k::<T>(5) * b.clone();
    let g5v = g5(&a, &b);
    let one = T::one();
    let sq = |v: T| v.clone() * v;
    let m2 = k::<T>(2) * b.clone() - one.clone();
    let p6 = one.clone() + k::<T>(6) * b.clone();
    let m6 = k::<T>(6) * b.clone() - one.clone();
    let d1 = k::<T>(3) * a.clone() - k::<T>(4) * b.clone() + k::<T>(4) * b.clone() * b.clone();
    let d2 = -b.clone() + b.clone() * b.clone() + a.clone();
    let rows: Vec<(&'static str, T, T, Option<&'static str>)> = vec![
        ("c_P - c_B", cp.clone() - cb.clone(), -kk.clone() / sq(m2.clone()), None),
        ("c_P - c_S", cp.clone() - cs.clone(), -k::<T>(9) * kk.clone() / sq(p6.clone()), None),
        ("c_P - c_F", cp.clone() - cf.clone(), -k::<T>(9) * kk.clone() / sq(m6.clone()), None),
        (
            "c_B - c_S",
            cb.clone() - cs.clone(),
            k::<T>(8) * m6.clone() * kk.clone() / (sq(m2.clone()) * sq(p6.clone())),
            None,
        ),
        (
            "c_B - c_F",
            cb.clone() - cf.clone(),
            k::<T>(8) * (k::<T>(3) * b.clone() - one.clone()) * kk.clone() / (sq(m2.clone()) * sq(m6.clone())),
            Some("denominator (1+6β)² printed; (6β−1)² holds"),
        ),
        (
            "c_S - c_F",
            cs.clone() - cf.clone(),
            -k::<T>(216) * b.clone() * kk.clone() / (sq(m6.clone()) * sq(p6.clone())),
            None,
        ),
        ("c_P - c_s02", cp.clone() - cs02.clone(), -k::<T>(6) * b.clone(), None),
        ("c_P - c_s1", cp.clone() - cs1.clone(), -gamma2(&a, &b) / d1.clone(), None),
        ("c_P - c_s01", cp - cs01.clone(), -gamma3(&a, &b) / (k::<T>(4) * d2.clone()), None),
        ("c_s02 - c_s1", cs02.clone() - cs1.clone(), -(g5v.clone() * g4.clone()) / d1.clone(), None),
        ("c_s02 - c_s01", cs02 - cs01.clone(), -(g5v.clone() * g4.clone()) / (k::<T>(4) * d2.clone()), None),
        ("c_s1 - c_s01", cs1 - cs01, a * g5v * g4 / (k::<T>(4) * d1 * d2), None),
    ];
    Ok(rows
        .into_iter()
        .map(|(name, lhs, rhs, note)| {
            let scale = lhs.to_f64().abs().max(rhs.to_f64().abs());
            let holds = (lhs.clone() - rhs.clone()).is_zero_at(scale);
            IdentityCheck { name, lhs, rhs, holds, note }
        })
        .collect())
}

/// The `c_B − c_F` identity with the denominator exactly as printed.
pub fn printed_b_minus_f<T: Scalar>(alpha: &T, beta: &T) -> Result<IdentityCheck<T>, LocusError> {
    let cb = closed_form_normalized(LocusLabel::B2, alpha, beta)?;
    let cf = closed_form_normalized(LocusLabel::Flecnodal, alpha, beta)?;
    let b = beta.clone();
    let one = T::one();
    let m2 = k::<T>(2) * b.clone() - one.clone();
    let p6 = one.clone() + k::<T>(6) * b.clone();
    let rhs = k::<T>(8) * (k::<T>(3) * b - one) * k_factor(alpha, beta) / (m2.clone() * m2 * p6.clone() * p6);
    let lhs = cb - cf;
    let holds = (lhs.clone() - rhs.clone()).is_zero_at(lhs.to_f64().abs().max(1.0));
    Ok(IdentityCheck { name: "c_B - c_F (as printed)", lhs, rhs, holds, note: Some("printed denominator") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    fn at(a: Rational, b: Rational) -> [Rational; 7] {
        all_normalized(&a, &b).unwrap()
    }

    #[test]
    fn worked_point_minus_one_one() {
        let v = at(int(-1), int(1));
        assert_eq!(v, [int(3), int(12), rat(228, 49), rat(156, 25), int(9), int(2), rat(15, 4)]);
    }

    #[test]
    fn worked_point_two_minus_one() {
        let v = at(int(2), int(-1));
        assert_eq!(v[0], int(-27));
        assert_eq!(v[4], int(-33));
        assert_eq!(v[5], rat(-25, 14));
        assert_eq!(v[6], rat(-91, 16));
    }

    #[test]
    fn local_ordering_example_values() {
        let v = at(int(1), int(-1));
        assert_eq!(v[0], int(-21));
        assert_eq!(v[1], int(4));
        assert_eq!(v[3], rat(996, 49));
        assert_eq!(v[2], int(60));
    }

    #[test]
    fn general_form_at_worked_point_matches_hand_values() {
        let c = closed_form_c(LocusLabel::B2, &int(1), &int(-1), &int(1)).unwrap();
        assert_eq!(c, int(12));
        // c_P - c_B = -K/(2β-1)² = -9 at (-1, 1)
        assert_eq!(int(3) - c, int(-9));
    }

    #[test]
    fn printed_normalized_discrepancies() {
        let (a, b) = (int(-1), int(1));
        assert_ne!(printed_normalized(LocusLabel::S2, &a, &b).unwrap(), rat(228, 49));
        assert_eq!(printed_normalized(LocusLabel::A0S1, &a, &b).unwrap(), int(-2));
        assert_eq!(printed_normalized(LocusLabel::B2, &a, &b).unwrap(), int(12));
    }

    #[test]
    fn denominators_are_guarded() {
        let e = closed_form_c(LocusLabel::B2, &int(2), &int(1), &int(1)).unwrap_err();
        assert!(matches!(e, LocusError::NonGeneric { label: LocusLabel::B2, .. }));
        assert!(closed_form_c(LocusLabel::Parabolic, &int(0), &int(1), &int(1)).is_err());
    }

    #[test]
    fn difference_identities_hold_at_samples() {
        for (a, b) in [(int(-1), int(1)), (int(2), int(-1)), (rat(3, 7), rat(-5, 11))] {
            for id in difference_identities(&a, &b).unwrap() {
                assert!(id.holds, "{} fails at ({a}, {b})", id.name);
            }
            assert!(!printed_b_minus_f(&a, &b).unwrap().holds);
        }
    }

    #[test]
    fn rederived_values() {
        assert_eq!(rederived_bigerm(LocusLabel::A0S1, &int(-1), &int(1)), Some(int(0)));
        assert_eq!(rederived_bigerm(LocusLabel::A0S1, &int(2), &int(-1)), Some(rat(-17, 14)));
        assert_eq!(rederived_bigerm(LocusLabel::A0S0A1, &int(-1), &int(1)), Some(rat(3, 4)));
    }
}
