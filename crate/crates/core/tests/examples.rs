//! Worked examples across the modules, checked through the public API.

use p3c_core::atlas::{configuration_signature, local_ordering, multilocal_region};
use p3c_core::bde::{asymptotic_bde, classify_folded, inflection_locus, FoldedType};
use p3c_core::cross_ratio::{cross_ratio, invariants_at, recover_moduli, Branch, CrossRatioSet, SlopeLine};
use p3c_core::germ::{classify_germ, GermLabel, MapGerm3};
use p3c_core::jet::Jet;
use p3c_core::locus::closed::{all_normalized, closed_form_c};
use p3c_core::locus::LocusLabel;
use p3c_core::scalar::{int, rat, Rational};
use p3c_core::surface::{classify_point, normal_form_surface, PointKind, QuadraticPair, SurfaceJet};

fn j2(terms: &[([u8; 2], i64)]) -> Jet<Rational> {
    Jet::from_terms(2, 4, terms.iter().map(|&([i, k], c)| ([i, k, 0], int(c)))).unwrap()
}

fn forms(q1: [i64; 3], q2: [i64; 3]) -> QuadraticPair<Rational> {
    QuadraticPair::from_forms(q1.map(int), q2.map(int))
}

#[test]
fn jet_products_and_derivatives() {
    let x = j2(&[([1, 0], 1)]);
    let y = j2(&[([0, 1], 1)]);
    assert_eq!(x.checked_mul(&y).unwrap(), j2(&[([1, 1], 1)]));

    let lin = |s: i64| Jet::from_terms(2, 1, [([0, 0, 0], int(1)), ([1, 0, 0], int(s))]).unwrap();
    assert_eq!(lin(1).checked_mul(&lin(-1)).unwrap(), Jet::constant(2, 1, int(1)).unwrap());

    let f = j2(&[([1, 0], 1), ([0, 2], 1)]);
    assert_eq!(f.pow(2), j2(&[([2, 0], 1), ([1, 2], 2), ([0, 4], 1)]));

    let x2y = j2(&[([2, 1], 1)]);
    assert_eq!(x2y.partial(0).unwrap().coeff([1, 1, 0]), int(2));
    assert!(j2(&[([2, 0], 1)]).partial(1).unwrap().is_zero());

    let s = j2(&[([1, 0], 1), ([0, 2], -1)]).implicit_solve(0, 4).unwrap();
    assert_eq!(s, Jet::from_terms(2, 4, [([0, 2, 0], int(1))]).unwrap());
}

#[test]
fn point_classes() {
    assert_eq!(forms([1, 0, 0], [0, 1, 0]).delta(), int(0));
    assert_eq!(forms([1, 0, 0], [0, 0, 1]).delta(), int(1));
    let hyp = classify_point(&forms([1, 0, 0], [0, 0, 1]));
    assert_eq!((hyp.kind, hyp.asymptotic_directions), (PointKind::Hyperbolic, Some(2)));
    let ell = classify_point(&forms([0, 1, 0], [1, 0, -1]));
    assert_eq!((ell.kind, ell.asymptotic_directions), (PointKind::Elliptic, Some(0)));
    assert_eq!(classify_point(&forms([1, 0, 1], [0, 0, 0])).kind, PointKind::Inflection);
    let par = classify_point(&forms([1, 0, 0], [0, 1, 0]));
    assert_eq!((par.kind, par.asymptotic_directions), (PointKind::Parabolic, Some(1)));
}

#[test]
fn coefficient_values_at_two_points() {
    let c = all_normalized(&int(-1), &int(1)).unwrap();
    assert_eq!(c, [int(3), int(12), rat(228, 49), rat(156, 25), int(9), int(2), rat(15, 4)]);
    let c = all_normalized(&int(2), &int(-1)).unwrap();
    assert_eq!(c[0], int(-27));
    assert_eq!(c[4], int(-33));
    assert_eq!(c[5], rat(-25, 14));
    assert_eq!(c[6], rat(-91, 16));
}

#[test]
fn parabolic_coefficient_in_general_symbols() {
    for (a32, a44, b33) in [(rat(2, 3), int(-5), rat(1, 7)), (int(-3), rat(9, 4), int(2)), (int(1), int(0), rat(-1, 2))] {
        let expected = (int(6) * a32.clone() * b33.clone() - int(9) * b33.clone() * b33.clone() - int(6) * a44.clone()) / a32.clone();
        assert_eq!(closed_form_c(LocusLabel::Parabolic, &a32, &a44, &b33).unwrap(), expected.clone());
        let s = SurfaceJet::parabolic_chart(&[((3, 2), a32), ((4, 4), a44)], &[((3, 3), b33)]).unwrap();
        assert_eq!(s.parabolic_series().unwrap().c2, expected);
    }
}

#[test]
fn p3_detection() {
    let s = SurfaceJet::parabolic_chart(&[((3, 2), int(1)), ((4, 4), int(-1))], &[((3, 3), int(1))]).unwrap();
    let r = s.detect_p3c().unwrap();
    assert!(r.is_p3c && r.versal);
    assert_eq!(r.modulus_c, Some(int(-1)));

    let s = SurfaceJet::parabolic_chart(&[((3, 2), int(2)), ((4, 4), int(6))], &[((3, 3), int(3))]).unwrap();
    let r = s.detect_p3c().unwrap();
    assert!(!r.is_p3c);
    assert!(r.failure.is_some());

    let s = SurfaceJet::parabolic_chart(&[((3, 2), int(1)), ((3, 3), int(1))], &[((3, 3), int(1))]).unwrap();
    assert_eq!(s.detect_p3c().unwrap().failure.unwrap().to_string(), "not a P3(c) point: a33 != 0");

    assert!(normal_form_surface(int(-1), int(1), None).is_ok());
    // 6β² + 4α − 15β + 5 = 0 at β = 1 means α = 1.
    assert!(normal_form_surface(int(1), int(1), None).is_err());
}

#[test]
fn germ_classes() {
    let g = |f: [Jet<Rational>; 3]| classify_germ(&MapGerm3::at_origin(f).unwrap()).unwrap();
    let x = j2(&[([1, 0], 1)]);
    assert_eq!(g([x.clone(), j2(&[([0, 1], 1)]), j2(&[])]), GermLabel::Immersion);
    assert_eq!(g([x.clone(), j2(&[([0, 2], 1)]), j2(&[([1, 1], 1)])]), GermLabel::CrossCap);
    assert_eq!(g([x.clone(), j2(&[([0, 2], 1)]), j2(&[([0, 3], 1), ([2, 1], -1)])]), GermLabel::S1Minus);
    let p3 = [x, j2(&[([1, 1], 1), ([0, 3], 1)]), j2(&[([1, 2], 1), ([0, 4], 3)])];
    assert_eq!(g(p3), GermLabel::MoreDegenerate);
}

#[test]
fn cross_ratios_and_recovery() {
    let s = |n: i64| SlopeLine::Slope(int(n));
    assert_eq!(cross_ratio(&s(0), &s(1), &s(2), &s(3)).unwrap(), rat(4, 3));
    let v = SlopeLine::Vertical;
    let q = |r: Rational| SlopeLine::Slope(r);
    assert_eq!(cross_ratio(&s(3), &v, &q(rat(15, 4)), &s(9)).unwrap(), rat(1, 8));

    let rho = invariants_at(&int(-1), &int(1)).unwrap();
    assert_eq!((rho.rho1.clone(), rho.rho2.clone(), rho.rho3.clone()), (rat(2, 5), rat(1, 8), rat(-1, 6)));
    let rec = recover_moduli(&rho).unwrap();
    assert_eq!(rec.branch, Branch::Degenerate);
    assert_eq!(rec.alpha_candidates.len(), 2);
    assert!(rec.alpha_candidates.contains(&rat(3, 16)));
    assert_eq!((rec.alpha_selected, rec.beta), (int(-1), int(1)));

    let rho = invariants_at(&int(2), &int(-1)).unwrap();
    assert_eq!((rho.rho1.clone(), rho.rho2.clone(), rho.rho3.clone()), (rat(4, 7), rat(-341, 96), rat(-353, 84)));
    let rec = recover_moduli(&CrossRatioSet { rho4: int(0), ..rho }).unwrap();
    assert_eq!((rec.branch, rec.alpha_selected, rec.beta), (Branch::Generic, int(2), int(-1)));
}

#[test]
fn folded_types_and_inflections() {
    let k = |a: Rational, b: Rational| classify_folded(&a, &b);
    let focus = k(int(-1), int(1));
    assert_eq!(focus.kind, FoldedType::FoldedFocus);
    assert_eq!(focus.q, 3.0);
    assert!((focus.det - 4.5).abs() < 1e-12);
    assert_eq!(k(int(2), int(-1)).kind, FoldedType::FoldedSaddle);
    assert_eq!(k(rat(-51, 200), int(1)).kind, FoldedType::FoldedNode);

    let bde = asymptotic_bde(&normal_form_surface(int(-1), int(1), None).unwrap()).unwrap();
    assert_eq!(inflection_locus(&bde).unwrap().germ.c2, rat(156, 25));
}

#[test]
fn orderings_and_regions() {
    assert_eq!(local_ordering(&int(1), &int(-1)).case, Some(1));
    let o = local_ordering(&int(-1), &int(1));
    assert_eq!(o.case, Some(4));
    assert_eq!(o.matches_rule, Some(true));
    assert!(!local_ordering(&int(-1), &rat(1, 6)).boundary.is_empty());

    assert_eq!(multilocal_region(&int(-1), &int(1)).id(), Some(7));
    assert_eq!(multilocal_region(&int(2), &int(-1)).id(), Some(2));
    assert!(multilocal_region(&int(1), &int(0)).boundary.iter().any(|b| b.contains("gamma1")));

    assert_eq!(configuration_signature(&int(-1), &int(1)).signs, [1, 1, 1, 1]);
    assert_eq!(configuration_signature(&int(1), &int(-1)).signs, [-1, 1, 1, 1]);
    let sing = configuration_signature(&rat(1, 4), &rat(1, 2));
    assert!(sing.singular_points.iter().any(|p| p.distance < 1e-12));
}
