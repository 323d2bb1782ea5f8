//! The ten acceptance checks, shared by `p3c verify` and the `acceptance` test target.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adjacency::{check_adjacency, default_samples};
use crate::atlas::{local_ordering, multilocal_region};
use crate::bde::{asymptotic_bde, classify_folded, inflection_locus, FoldedType};
use crate::cross_ratio::{invariants_at, printed_alpha, recover_moduli, Branch, CrossRatioSet, RecoveryReport};
use crate::germ::BigermKind;
use crate::locus::closed::{all_normalized, difference_identities};
use crate::locus::reconcile::{reconcile_surface, C1_TOL, C2_TOL};
use crate::locus::{LocusLabel, TraceOptions};
use crate::scalar::{int, rat, Rational, Scalar};
use crate::surface::{normal_form_surface, printed_j2_delta, SurfaceJet};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub elapsed_s: f64,
    pub budget_s: f64,
    /// Failed sub-checks (or a short summary when all passed).
    pub details: Vec<String>,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} {}: {} ({:.2}s / {:.0}s)",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed_s,
            self.budget_s
        )
    }
}

/// Collects named boolean checks.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
    passed: usize,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Display>(&mut self, name: &str, got: Option<T>, want: T) {
        let ok = got.as_ref() == Some(&want);
        self.check(ok, || match got {
            Some(g) => format!("{name}: got {g}, want {want}"),
            None => format!("{name}: unavailable, want {want}"),
        });
    }
}

fn finish(id: u8, title: &'static str, budget: f64, start: Instant, checks: Checks, summary: String) -> CriterionResult {
    let elapsed = start.elapsed().as_secs_f64();
    let mut details = checks.failed;
    let in_time = elapsed < budget;
    if !in_time {
        details.push(format!("runtime {elapsed:.2}s exceeds {budget}s"));
    }
    let pass = details.is_empty();
    if pass {
        details.push(summary);
    }
    CriterionResult { id, title, pass, elapsed_s: elapsed, budget_s: budget, details }
}

/// `(α, β)` where the surface, all seven coefficients and versality are defined.
pub fn admissible<T: Scalar>(alpha: &T, beta: &T) -> bool {
    let versal = T::from_i64(4) * alpha.clone() + T::from_i64(6) * beta.clone() * beta.clone() - T::from_i64(5) * beta.clone();
    normal_form_surface(alpha.clone(), beta.clone(), None).is_ok()
        && all_normalized(alpha, beta).is_ok()
        && !versal.is_zero_at(1.0)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.gen_range(1..=24i64);
    rat(rng.gen_range(-2 * d..=2 * d), d)
}

fn random_admissible_rationals(rng: &mut ChaCha8Rng, n: usize) -> Vec<(Rational, Rational)> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (a, b) = (random_rational(rng), random_rational(rng));
        if admissible(&a, &b) {
            out.push((a, b));
        }
    }
    out
}

/// Shared part of criteria 1 and 2.
fn worked_point(
    c: &mut Checks,
    alpha: Rational,
    beta: Rational,
    coeffs: &[(LocusLabel, Rational)],
    rho1: Rational,
    folded: FoldedType,
    pattern: &str,
) {
    let vals = all_normalized(&alpha, &beta).ok();
    for (label, want) in coeffs {
        let idx = LocusLabel::ALL.iter().position(|l| l == label).unwrap_or(0);
        c.eq(&format!("c_{}", label.short()), vals.as_ref().map(|v| v[idx].clone()), want.clone());
    }
    let rho = invariants_at(&alpha, &beta).ok();
    c.eq("rho1", rho.as_ref().map(|r| r.rho1.clone()), rho1);
    c.eq("folded type", Some(classify_folded(&alpha, &beta).kind.to_string()), folded.to_string());
    c.eq("multilocal pattern", Some(multilocal_region(&alpha, &beta).pattern_text), pattern.to_string());
    // Independent routes: series inversion of δ and elimination on the BDE.
    if let Ok(s) = normal_form_surface(alpha.clone(), beta.clone(), None) {
        c.eq("c_P by series inversion", s.parabolic_series().ok().map(|g| g.c2), vals.as_ref().map_or(int(0), |v| v[0].clone()));
        let inf = asymptotic_bde(&s).ok().and_then(|b| inflection_locus(&b).ok()).map(|i| i.germ.c2);
        c.eq("c_F by elimination", inf, vals.as_ref().map_or(int(0), |v| v[3].clone()));
    } else {
        c.check(false, || "normal form rejected".into());
    }
    match difference_identities(&alpha, &beta) {
        Ok(ids) => {
            for id in ids {
                c.check(id.holds, || format!("identity {} fails", id.name));
            }
        }
        Err(e) => c.check(false, || format!("identities: {e}")),
    }
}

pub fn criterion1() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checks::default();
    use LocusLabel::*;
    let coeffs = [
        (Parabolic, int(3)),
        (B2, int(12)),
        (S2, rat(228, 49)),
        (Flecnodal, rat(156, 25)),
        (A0S0Sq, int(9)),
        (A0S1, int(2)),
        (A0S0A1, rat(15, 4)),
    ];
    worked_point(&mut c, int(-1), int(1), &coeffs, rat(2, 5), FoldedType::FoldedFocus, "s1<P<s01<s02");
    let rho = invariants_at(&int(-1), &int(1)).ok();
    c.eq("rho2", rho.as_ref().map(|r| r.rho2.clone()), rat(1, 8));
    c.eq("rho3", rho.as_ref().map(|r| r.rho3.clone()), rat(-1, 6));
    let n = c.passed;
    finish(1, "worked point (-1, 1), exact", 1.0, start, c, format!("{n} exact checks"))
}

pub fn criterion2() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checks::default();
    use LocusLabel::*;
    let coeffs = [(Parabolic, int(-27)), (A0S0Sq, int(-33)), (A0S1, rat(-25, 14)), (A0S0A1, rat(-91, 16))];
    worked_point(&mut c, int(2), int(-1), &coeffs, rat(4, 7), FoldedType::FoldedSaddle, "s02<P<s01<s1");
    let rec = invariants_at(&int(2), &int(-1)).ok().and_then(|r| recover_moduli(&r).ok());
    c.eq("recovered beta", rec.as_ref().map(|r| r.beta.clone()), int(-1));
    c.eq("recovered alpha", rec.as_ref().map(|r| r.alpha_selected.clone()), int(2));
    c.check(rec.as_ref().is_some_and(|r| r.branch == Branch::Generic), || "recovery did not use the generic branch".into());
    let n = c.passed;
    finish(2, "worked point (2, -1), exact", 1.0, start, c, format!("{n} exact checks"))
}

pub fn criterion3(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = random_admissible_rationals(&mut rng, 120);
    let mut count = 0;
    for (a, b) in &pts {
        match difference_identities(a, b) {
            Ok(ids) => {
                count = ids.len();
                for id in ids {
                    c.check(id.holds, || format!("{} fails at ({a}, {b})", id.name));
                }
            }
            Err(e) => c.check(false, || format!("({a}, {b}): {e}")),
        }
    }
    finish(3, "difference identities, exact", 10.0, start, c, format!("{count} identities at {} random points", pts.len()))
}

/// Random float points kept away from every pole and gate by `margin`.
fn well_separated_points(rng: &mut ChaCha8Rng, n: usize, margin: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    while out.len() < n {
        let (a, b): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let gates = [
            a,
            b,
            1.0 - 2.0 * b,
            1.0 + 6.0 * b,
            1.0 - 6.0 * b,
            3.0 * a - 4.0 * b + 4.0 * b * b,
            a + b * b - b,
            4.0 * a + 6.0 * b * b - 5.0 * b,
            6.0 * b * b + 4.0 * a - 15.0 * b + 5.0,
        ];
        let c = a / b;
        let moduli_ok = [0.0, 0.5, 1.0, 1.5].iter().all(|e| (c - e).abs() > margin);
        if gates.iter().all(|g| g.abs() > margin) && moduli_ok {
            out.push((a, b));
        }
    }
    out
}

pub fn criterion4(seed: u64, n: usize) -> CriterionResult {
    let start = Instant::now();
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = TraceOptions::default();
    let pts = well_separated_points(&mut rng, n.max(10), 0.2);
    let mut failures: std::collections::BTreeMap<&'static str, (usize, usize)> = Default::default();
    for &(a, b) in &pts {
        let rep = normal_form_surface(a, b, None).map_err(|e| e.to_string()).and_then(|s| reconcile_surface(&s, &opts).map_err(|e| e.to_string()));
        match rep {
            Ok(r) => {
                for (row, label) in r.rows.iter().zip(LocusLabel::ALL) {
                    if !row.pass {
                        let e = failures.entry(label.name()).or_default();
                        e.0 += 1;
                        if row.closed.zip(row.mirror).is_some_and(|(x, m)| (x - m).abs() <= C2_TOL) {
                            e.1 += 1;
                        }
                    }
                }
            }
            Err(e) => c.check(false, || format!("({a:.4}, {b:.4}): {e}")),
        }
    }
    for (label, (k, mirrored)) in &failures {
        c.check(false, || {
            format!(
                "{label}: {k} of {} points outside |dc2| <= {C2_TOL:e} or |c1| < {C1_TOL:e} ({mirrored} match the closed form only with the opposite-sign chart change)",
                pts.len()
            )
        });
    }
    finish(4, "oracle reconciliation, seven loci", 60.0, start, c, format!("7 labels at {} random points", pts.len()))
}

pub fn criterion5(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = random_admissible_rationals(&mut rng, 120);
    let mut tried = 0;
    for (a, b) in &pts {
        let Ok(rho) = invariants_at(a, b) else {
            continue;
        };
        tried += 1;
        match recover_moduli(&rho) {
            Ok(r) => c.check(r.beta == *b && r.alpha_selected == *a, || {
                format!("({a}, {b}) recovered as ({}, {}) on {:?} branch", r.alpha_selected, r.beta, r.branch)
            }),
            Err(e) => c.check(false, || format!("({a}, {b}): {e}")),
        }
    }
    c.check(tried >= 100, || format!("only {tried} points had defined invariants"));
    // Float round trip at 1e-9.
    for (a, b) in pts.iter().take(100) {
        let (af, bf) = (a.to_f64(), b.to_f64());
        if let Ok(r) = invariants_at(&af, &bf).and_then(|rho| recover_moduli(&rho)) {
            c.check((r.alpha_selected - af).abs() <= 1e-9 && (r.beta - bf).abs() <= 1e-9, || {
                format!("float ({af}, {bf}) recovered as ({}, {})", r.alpha_selected, r.beta)
            });
        }
    }
    // The degenerate point: 1 − 4ρ2 + 3ρ3 = 0 at β = 1.
    let deg = invariants_at(&int(-1), &int(1)).and_then(|rho| recover_moduli(&rho));
    match deg {
        Ok(r) => {
            c.check(r.branch == Branch::Degenerate && r.alpha_candidates.len() == 2, || "degenerate branch not taken".into());
            c.check(r.alpha_selected == int(-1) && r.beta == int(1), || format!("degenerate point resolved to ({}, {})", r.alpha_selected, r.beta));
        }
        Err(e) => c.check(false, || format!("degenerate point: {e}")),
    }
    finish(5, "moduli round trip", 10.0, start, c, format!("{tried} exact round trips plus the degenerate point"))
}

pub fn criterion6() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checks::default();
    let n = 50;
    let mut compared = 0;
    for j in 0..n {
        for i in 0..n {
            let a = -2.0 + 4.0 * i as f64 / (n - 1) as f64;
            let b = -2.0 + 4.0 * j as f64 / (n - 1) as f64;
            let q = -6.0 * b * b - 4.0 * a + 5.0 * b;
            if q.abs() < 1e-6 || (q - 1.0 / 24.0).abs() < 1e-6 {
                continue;
            }
            compared += 1;
            let f = classify_folded(&a, &b);
            c.check(f.agree, || format!("({a}, {b}): threshold {:?} vs eigenvalues {:?}", f.threshold_kind, f.eigen_kind));
        }
    }
    for (a, b, want) in [
        (int(-1), int(1), FoldedType::FoldedFocus),
        (int(2), int(-1), FoldedType::FoldedSaddle),
        (rat(-51, 200), int(1), FoldedType::FoldedNode),
    ] {
        let f = classify_folded(&a, &b);
        c.check(f.kind == want && f.agree, || format!("({a}, {b}): got {:?}, want {want:?}", f.kind));
    }
    finish(6, "folded classification concordance", 5.0, start, c, format!("{compared} grid points plus 3 samples"))
}

pub fn criterion7(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < 10_000 {
        let (a, b): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if !admissible(&a, &b) {
            continue;
        }
        let o = local_ordering(&a, &b);
        if !o.boundary.is_empty() {
            continue;
        }
        done += 1;
        c.check(o.matches_rule == Some(true), || format!("({a}, {b}): {} vs rule case {:?}", o.pattern_text, o.case));
    }
    finish(7, "local ordering against the beta-interval rule", 5.0, start, c, format!("{done} random points, no counterexample"))
}

pub fn criterion8() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checks::default();
    let ys = default_samples();
    for cm in [-1.0, 2.0, 3.0] {
        for kind in [BigermKind::A0S1, BigermKind::A0S0Sq, BigermKind::A0S0A1] {
            let r = check_adjacency(kind, cm, &ys, 1e-8);
            c.check(r.pass, || {
                let name = match kind {
                    BigermKind::A0S1 => "A0S1",
                    BigermKind::A0S0Sq => "(A0S0)2",
                    BigermKind::A0S0A1 => "A0S0|A1",
                };
                format!(
                    "{name} c={cm}: printed-curve residual {:.3e}, Newton distance {}",
                    r.max_printed_residual,
                    r.max_distance.map_or("no solution near the printed curve".to_string(), |d| format!("{d:.3e}"))
                )
            });
        }
    }
    finish(8, "model family bi-germ curves", 10.0, start, c, format!("3 curves x 3 moduli x {} samples", ys.len()))
}

/// Integers in `-5..=5` for every `a_ki, b_ki`, `k = 3..=5`.
fn random_chart(rng: &mut ChaCha8Rng) -> SurfaceJet<Rational> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for k in 3u8..=5 {
        for i in 0..=k {
            a.push(((k, i), int(rng.gen_range(-5..=5))));
            b.push(((k, i), int(rng.gen_range(-5..=5))));
        }
    }
    SurfaceJet::parabolic_chart(&a, &b).expect("valid chart")
}

pub fn criterion9(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = [([0, 0, 0], "1"), ([1, 0, 0], "x"), ([0, 1, 0], "y"), ([2, 0, 0], "x^2"), ([1, 1, 0], "xy"), ([0, 2, 0], "y^2")];
    let mut bad = vec![0usize; names.len()];
    let trials = 120;
    for _ in 0..trials {
        let s = random_chart(&mut rng);
        let (Ok(d), Ok(p)) = (s.delta_jet(), printed_j2_delta(&s)) else {
            c.check(false, || "delta unavailable".into());
            continue;
        };
        for (k, (e, _)) in names.iter().enumerate() {
            if d.coeff(*e) != p.coeff(*e) {
                bad[k] += 1;
            }
        }
    }
    for (k, (_, name)) in names.iter().enumerate() {
        c.check(bad[k] == 0, || format!("{name} coefficient differs from the printed expansion in {} of {trials} random jets", bad[k]));
    }
    finish(9, "j2 delta against the printed expansion", 1.0, start, c, format!("6 coefficients over {trials} random jets"))
}

pub fn criterion10() -> CriterionResult {
    let start = Instant::now();
    let mut c = Checks::default();
    let rho4 = invariants_at(&int(-1), &int(1)).map(|r| r.rho4).unwrap_or_else(|_| int(0));
    let rho = CrossRatioSet { rho1: rat(2, 5), rho2: rat(1, 8), rho3: rat(-1, 6), rho4 };
    c.eq("printed alpha", printed_alpha(&rho), rat(7, 2));
    match recover_moduli(&rho) {
        Ok(rec) => {
            let rep = RecoveryReport::new(&rho, &rec, true);
            c.eq("report printed_alpha", rep.printed_alpha.clone(), "7/2".to_string());
            c.check(rep.printed_alpha_consistent == Some(false) && rep.note.is_some(), || "inconsistency not flagged".into());
            c.eq("recovered alpha", Some(rec.alpha_selected), int(-1));
        }
        Err(e) => c.check(false, || format!("recovery: {e}")),
    }
    finish(10, "printed alpha formula flagged", 1.0, start, c, "printed formula gives 7/2 and is flagged".into())
}

/// All ten criteria in order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion1(),
        criterion2(),
        criterion3(seed),
        criterion4(seed, 10),
        criterion5(seed),
        criterion6(),
        criterion7(seed),
        criterion8(),
        criterion9(seed),
        criterion10(),
    ]
}

pub fn total_time(results: &[CriterionResult]) -> Duration {
    Duration::from_secs_f64(results.iter().map(|r| r.elapsed_s).sum())
}
