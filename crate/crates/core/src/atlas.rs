//! Relative positions of the seven curves in the `(α, β)`-plane.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::locus::closed::{closed_form_normalized, gamma2, gamma3};
use crate::locus::LocusLabel;
use crate::scalar::Scalar;
use crate::svg::{contour, palette, Svg};

/// Zero tolerance for boundary polynomials, relative to their term sizes.
pub const BOUNDARY_TOL: f64 = 1e-9;

use LocusLabel::{A0S0A1 as S01, A0S0Sq as S02, A0S1 as S1, Parabolic as P};

/// The 22 listed multi-local orderings, entry `k` at index `k − 1`.
pub const REGION_LIST: [[LocusLabel; 4]; 22] = [
    [P, S02, S01, S1],
    [S02, P, S01, S1],
    [S02, P, S1, S01],
    [S02, S01, S1, P],
    [S1, S01, S02, P],
    [S1, S01, P, S02],
    [S1, P, S01, S02],
    [P, S1, S01, S02],
    [P, S02, S01, S1],
    [P, S1, S01, S02],
    [P, S01, S02, S1],
    [P, S02, S1, S01],
    [P, S1, S01, S02],
    [P, S01, S02, S1],
    [S01, P, S02, S1],
    [P, S1, S02, S01],
    [S01, S1, P, S02],
    [P, S01, S1, S02],
    [P, S01, S1, S02],
    [S01, P, S1, S02],
    [S01, S02, S1, P],
    [S02, S01, P, S1],
];

pub fn pattern_string(p: &[LocusLabel]) -> String {
    p.iter().map(|l| l.short()).collect::<Vec<_>>().join("<")
}

fn sorted_by_value<T: Scalar>(mut v: Vec<(LocusLabel, T)>) -> (Vec<LocusLabel>, bool) {
    v.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let tie = v.windows(2).any(|w| {
        let d = w[1].1.clone() - w[0].1.clone();
        d.is_zero_at(w[0].1.to_f64().abs().max(w[1].1.to_f64().abs()))
    });
    (v.into_iter().map(|x| x.0).collect(), tie)
}

/// `true` when `value` vanishes relative to `scale`, exactly in rational mode.
fn vanishes<T: Scalar>(value: &T, scale: f64) -> bool {
    if T::EXACT {
        value.is_zero_at(1.0)
    } else {
        value.to_f64().abs() <= BOUNDARY_TOL * scale.max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalOrdering {
    /// Labels sorted by increasing coefficient.
    pub pattern: Vec<LocusLabel>,
    pub pattern_text: String,
    /// Case `1..=4` of the β-interval rule, `None` on a boundary.
    pub case: Option<u8>,
    pub rule_pattern: Option<Vec<LocusLabel>>,
    pub matches_rule: Option<bool>,
    pub boundary: Vec<String>,
}

/// β-interval rule: β<0 → P<B<F<S; 0<β<1/6 → P<B<S<F; 1/6<β<1/3 → P<S<B<F; β>1/3 → P<S<F<B.
pub fn rule_ordering<T: Scalar>(beta: &T) -> Option<(u8, [LocusLabel; 4])> {
    use LocusLabel::{Flecnodal as F, Parabolic as P, B2 as B, S2 as S};
    let at = |n, d| T::from_ratio(n, d);
    let on = |v: T| vanishes(&(beta.clone() - v), 1.0);
    if on(T::zero()) || on(at(1, 6)) || on(at(1, 3)) {
        return None;
    }
    Some(if *beta < T::zero() {
        (1, [P, B, F, S])
    } else if *beta < at(1, 6) {
        (2, [P, B, S, F])
    } else if *beta < at(1, 3) {
        (3, [P, S, B, F])
    } else {
        (4, [P, S, F, B])
    })
}

/// Direct comparison of `c_P, c_B, c_S, c_F`, checked against the β-interval rule.
pub fn local_ordering<T: Scalar>(alpha: &T, beta: &T) -> LocalOrdering {
    use LocusLabel::{Flecnodal as F, Parabolic as P, B2 as B, S2 as S};
    let mut boundary = Vec::new();
    let k4 = T::from_i64(4) * alpha.clone() + T::from_i64(6) * beta.clone() * beta.clone() - T::from_i64(5) * beta.clone();
    if vanishes(&k4, 4.0 * alpha.to_f64().abs() + 6.0 * beta.to_f64().powi(2) + 5.0 * beta.to_f64().abs()) {
        boundary.push("K = 0 (4α + 6β² − 5β = 0)".to_string());
    }
    for (n, d, name) in [(0, 1, "β = 0"), (1, 6, "β = 1/6"), (1, 3, "β = 1/3")] {
        if vanishes(&(beta.clone() - T::from_ratio(n, d)), 1.0) {
            boundary.push(name.to_string());
        }
    }
    let mut vals = Vec::new();
    for l in [P, B, S, F] {
        match closed_form_normalized(l, alpha, beta) {
            Ok(v) => vals.push((l, v)),
            Err(e) => boundary.push(format!("{l}: {e}")),
        }
    }
    let (pattern, tie) = sorted_by_value(vals);
    if tie && boundary.is_empty() {
        boundary.push("coincident coefficients".to_string());
    }
    let rule = rule_ordering(beta);
    let case = if boundary.is_empty() { rule.map(|r| r.0) } else { None };
    let rule_pattern = rule.map(|r| r.1.to_vec());
    let matches_rule = if boundary.is_empty() { rule_pattern.as_ref().map(|r| *r == pattern) } else { None };
    LocalOrdering { pattern_text: pattern_string(&pattern), pattern, case, rule_pattern, matches_rule, boundary }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum RegionMatch {
    /// Lowest listed entry with this ordering, plus any repeated entries.
    Listed { id: u8, aliases: Vec<u8> },
    Unmatched,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultilocalRegion {
    pub pattern: Vec<LocusLabel>,
    pub pattern_text: String,
    pub region: RegionMatch,
    /// γ-curves (and poles) the point lies on.
    pub boundary: Vec<String>,
}

impl MultilocalRegion {
    pub fn id(&self) -> Option<u8> {
        match self.region {
            RegionMatch::Listed { id, .. } => Some(id),
            RegionMatch::Unmatched => None,
        }
    }
}

/// Matches an ordering against the printed list.
pub fn match_region(pattern: &[LocusLabel]) -> RegionMatch {
    let ids: Vec<u8> =
        REGION_LIST.iter().enumerate().filter(|(_, r)| r.as_slice() == pattern).map(|(i, _)| i as u8 + 1).collect();
    match ids.split_first() {
        Some((&id, rest)) => RegionMatch::Listed { id, aliases: rest.to_vec() },
        None => RegionMatch::Unmatched,
    }
}

/// `(name, value, scale)` for γ1…γ6 at `(α, β)`.
pub fn gamma_values<T: Scalar>(alpha: &T, beta: &T) -> [(&'static str, T, f64); 6] {
    let (a, b) = (alpha.to_f64().abs(), beta.to_f64().abs());
    let k = |n: i64| T::from_i64(n);
    let s2 = 48.0 * b * b * a + 60.0 * b.powi(3) + 36.0 * b.powi(4) + 38.0 * b * a + 21.0 * b * b + 16.0 * a * a;
    let s3 = 48.0 * b * b * a + 60.0 * b.powi(3) + 36.0 * b.powi(4) + 32.0 * b * a + 21.0 * b * b + 16.0 * a * a;
    [
        ("gamma1", beta.clone(), 1.0),
        ("gamma2", gamma2(alpha, beta), s2),
        ("gamma3", gamma3(alpha, beta), s3),
        ("gamma4", k(4) * alpha.clone() + k(6) * beta.clone() * beta.clone() - k(5) * beta.clone(), 4.0 * a + 6.0 * b * b + 5.0 * b),
        ("gamma5", k(4) * alpha.clone() + k(6) * beta.clone() * beta.clone() - k(9) * beta.clone(), 4.0 * a + 6.0 * b * b + 9.0 * b),
        ("gamma6", alpha.clone(), 1.0),
    ]
}

/// Ordering of `c_P, c_s02, c_s1, c_s01` by direct comparison, then matched.
pub fn multilocal_region<T: Scalar>(alpha: &T, beta: &T) -> MultilocalRegion {
    let mut boundary: Vec<String> =
        gamma_values(alpha, beta).into_iter().filter(|(_, v, s)| vanishes(v, *s)).map(|(n, _, _)| n.to_string()).collect();
    let mut vals = Vec::new();
    for l in [P, S02, S1, S01] {
        match closed_form_normalized(l, alpha, beta) {
            Ok(v) => vals.push((l, v)),
            Err(e) => boundary.push(format!("{l}: {e}")),
        }
    }
    let (pattern, tie) = sorted_by_value(vals);
    if tie && boundary.is_empty() {
        boundary.push("coincident coefficients".to_string());
    }
    let region = if boundary.is_empty() && pattern.len() == 4 { match_region(&pattern) } else { RegionMatch::Unmatched };
    MultilocalRegion { pattern_text: pattern_string(&pattern), pattern, region, boundary }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularPointFlag {
    pub curve: &'static str,
    pub point: (f64, f64),
    pub distance: f64,
    /// Whether the listed point actually satisfies the curve equation.
    pub on_curve: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigurationSignature {
    /// Signs of `(c_P, c_B, c_S, c_F)`; 0 for vanishing or undefined.
    pub signs: [i8; 4],
    /// `(sign c_P, sign c_X)` classes for `X = B, S, F`, as `"+-"` strings.
    pub classes: [String; 3],
    pub generic: bool,
    pub flags: Vec<String>,
    pub singular_points: Vec<SingularPointFlag>,
}

const SQRT17: f64 = 4.123105625617661;

/// Printed singular points of `c_B = 0`, `c_S = 0`, `c_F = 0`.
pub fn listed_singular_points() -> Vec<(&'static str, (f64, f64))> {
    vec![
        ("c_B = 0", (0.25, 0.5)),
        ("c_S = 0", (0.25, -1.0 / 6.0)),
        ("c_S = 0", ((-79.0 - 17.0 * SQRT17) / 96.0, (-5.0 - SQRT17) / 12.0)),
        ("c_S = 0", ((-79.0 + 17.0 * SQRT17) / 96.0, (-5.0 + SQRT17) / 12.0)),
        ("c_F = 0", (1.0 / 48.0, 0.0)),
        ("c_F = 0", (1.0 / 6.0, 1.0 / 6.0)),
        ("c_F = 0", (-1.0 / 6.0, -1.0 / 6.0)),
    ]
}

/// Numerator of the label's closed form (cleared of its denominator), or
/// `None` when the denominator itself vanishes.
fn numerator_at(label: LocusLabel, a: f64, b: f64) -> Option<f64> {
    let den = match label {
        LocusLabel::B2 => (1.0 - 2.0 * b).powi(2),
        LocusLabel::S2 => (1.0 + 6.0 * b).powi(2),
        LocusLabel::Flecnodal => (1.0 - 6.0 * b).powi(2),
        _ => 1.0,
    };
    if den.abs() < 1e-12 {
        return None;
    }
    closed_form_normalized(label, &a, &b).ok().map(|c| c * den)
}

fn sign<T: Scalar>(v: &T) -> i8 {
    if vanishes(v, 1.0) {
        0
    } else if *v > T::zero() {
        1
    } else {
        -1
    }
}

/// Sign vector of `(c_P, c_B, c_S, c_F)` and proximity to the listed singular points.
pub fn configuration_signature<T: Scalar>(alpha: &T, beta: &T) -> ConfigurationSignature {
    use LocusLabel::{Flecnodal as F, Parabolic as P, B2 as B, S2 as S};
    let mut flags = Vec::new();
    let mut signs = [0i8; 4];
    for (i, l) in [P, B, S, F].into_iter().enumerate() {
        match closed_form_normalized(l, alpha, beta) {
            Ok(v) => {
                signs[i] = sign(&v);
                if signs[i] == 0 {
                    flags.push(format!("c_{} = 0", l.short()));
                }
            }
            Err(e) => flags.push(format!("c_{} undefined: {e}", l.short())),
        }
    }
    let ch = |s: i8| match s {
        1 => '+',
        -1 => '-',
        _ => '0',
    };
    let classes = [1, 2, 3].map(|j| format!("{}{}", ch(signs[0]), ch(signs[j])));
    let (a, b) = (alpha.to_f64(), beta.to_f64());
    let mut singular_points = Vec::new();
    for (curve, pt) in listed_singular_points() {
        let distance = ((a - pt.0).powi(2) + (b - pt.1).powi(2)).sqrt();
        if distance <= 1e-9 {
            let label = match curve {
                "c_B = 0" => B,
                "c_S = 0" => S,
                _ => F,
            };
            // On the curve when the numerator vanishes, or the form is 0/0.
            let on_curve = numerator_at(label, pt.0, pt.1).is_none_or(|v| v.abs() < 1e-9);
            flags.push(format!("near listed singular point of {curve} at ({:.6}, {:.6})", pt.0, pt.1));
            singular_points.push(SingularPointFlag { curve, point: pt, distance, on_curve });
        }
    }
    let generic = flags.is_empty();
    ConfigurationSignature { signs, classes, generic, flags, singular_points }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionReport {
    pub local: LocalOrdering,
    pub multilocal: MultilocalRegion,
    pub boundary_flags: Vec<String>,
    pub configuration: ConfigurationSignature,
}

pub fn region_report<T: Scalar>(alpha: &T, beta: &T) -> RegionReport {
    let local = local_ordering(alpha, beta);
    let multilocal = multilocal_region(alpha, beta);
    let configuration = configuration_signature(alpha, beta);
    let mut boundary_flags: Vec<String> = local.boundary.iter().chain(multilocal.boundary.iter()).cloned().collect();
    boundary_flags.dedup();
    RegionReport { local, multilocal, boundary_flags, configuration }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridCell {
    pub alpha: f64,
    pub beta: f64,
    pub pattern: String,
    pub region: Option<u8>,
    pub boundary: bool,
}

/// `n × n` samples at cell centres of `[lo, hi]²`, rows by increasing β.
pub fn atlas_grid(n: usize, lo: f64, hi: f64) -> Vec<GridCell> {
    let h = (hi - lo) / n as f64;
    (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % n, k / n);
            let (a, b) = (lo + (i as f64 + 0.5) * h, lo + (j as f64 + 0.5) * h);
            let m = multilocal_region(&a, &b);
            GridCell { alpha: a, beta: b, region: m.id(), boundary: !m.boundary.is_empty(), pattern: m.pattern_text }
        })
        .collect()
}

/// CSV with columns `alpha, beta, pattern, region`.
pub fn write_grid_csv<W: Write>(cells: &[GridCell], w: W) -> Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["alpha", "beta", "pattern", "region"])?;
    for c in cells {
        let region = match (c.boundary, c.region) {
            (true, _) => "boundary".to_string(),
            (false, Some(id)) => id.to_string(),
            (false, None) => "unmatched".to_string(),
        };
        out.write_record([format!("{}", c.alpha), format!("{}", c.beta), c.pattern.clone(), region])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternCensus {
    pub pattern: String,
    pub region: Option<u8>,
    pub cells: usize,
    /// 4-connected components among grid cells with this pattern.
    pub components: usize,
    /// A sample `(α, β)` in the pattern.
    pub sample: (f64, f64),
}

/// Connectivity audit of the grid: cells and components per observed ordering.
pub fn connectivity_audit(cells: &[GridCell], n: usize) -> Vec<PatternCensus> {
    let mut by_pattern: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (k, c) in cells.iter().enumerate() {
        if !c.boundary {
            by_pattern.entry(c.pattern.clone()).or_default().push(k);
        }
    }
    let mut out = Vec::new();
    for (pattern, idx) in by_pattern {
        let mut mark = vec![false; cells.len()];
        let member: std::collections::HashSet<usize> = idx.iter().copied().collect();
        let mut components = 0;
        for &start in &idx {
            if mark[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            mark[start] = true;
            while let Some(k) = stack.pop() {
                let (i, j) = (k % n, k / n);
                let mut nb = Vec::with_capacity(4);
                if i > 0 {
                    nb.push(k - 1);
                }
                if i + 1 < n {
                    nb.push(k + 1);
                }
                if j > 0 {
                    nb.push(k - n);
                }
                if j + 1 < n {
                    nb.push(k + n);
                }
                for q in nb {
                    if !mark[q] && member.contains(&q) {
                        mark[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        let c0 = &cells[idx[0]];
        out.push(PatternCensus { pattern, region: c0.region, cells: idx.len(), components, sample: (c0.alpha, c0.beta) });
    }
    out
}

/// `(α, β)`-plane picture: cells coloured by region, γ-curves on top.
pub fn atlas_svg(cells: &[GridCell], n: usize, lo: f64, hi: f64) -> String {
    let mut svg = Svg::new(640.0, 640.0, [lo, hi, lo, hi]);
    let h = (hi - lo) / n as f64;
    let mut keys: BTreeMap<&str, usize> = BTreeMap::new();
    for c in cells {
        let next = keys.len();
        let key = *keys.entry(c.pattern.as_str()).or_insert(next);
        let fill = if c.boundary { "#ffffff".to_string() } else { palette(c.region.map_or(100 + key, |r| r as usize)) };
        svg.rect(c.alpha - h / 2.0, c.beta - h / 2.0, h * 1.02, h * 1.02, &fill);
    }
    let curves: [(&str, Box<dyn Fn(f64, f64) -> f64>); 6] = [
        ("#000", Box::new(|_a, b| b)),
        ("#c00", Box::new(|a, b| gamma2(&a, &b))),
        ("#00c", Box::new(|a, b| gamma3(&a, &b))),
        ("#070", Box::new(|a, b| 4.0 * a + 6.0 * b * b - 5.0 * b)),
        ("#a0a", Box::new(|a, b| 4.0 * a + 6.0 * b * b - 9.0 * b)),
        ("#444", Box::new(|a, _b| a)),
    ];
    let cn = n.min(300);
    for (stroke, f) in &curves {
        for (p, q) in contour(f.as_ref(), cn, [lo, hi, lo, hi]) {
            svg.line(p, q, stroke, 1.2);
        }
    }
    svg.axes();
    svg.text(hi - 0.08 * (hi - lo), lo + 0.02 * (hi - lo), 12.0, "alpha");
    svg.text(lo + 0.01 * (hi - lo), hi - 0.03 * (hi - lo), 12.0, "beta");
    svg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locus::closed::all_normalized;
    use crate::scalar::{int, rat, Rational};
    use LocusLabel::{Flecnodal as F, Parabolic as PP, B2 as B, S2 as S};

    #[test]
    fn local_examples() {
        let o = local_ordering(&int(1), &int(-1));
        assert_eq!(o.pattern, vec![PP, B, F, S]);
        assert_eq!((o.case, o.matches_rule), (Some(1), Some(true)));
        let o = local_ordering(&int(-1), &int(1));
        assert_eq!(o.pattern, vec![PP, S, F, B]);
        assert_eq!(o.case, Some(4));
        let o = local_ordering(&int(1), &rat(1, 6));
        assert!(!o.boundary.is_empty() && o.case.is_none());
    }

    #[test]
    fn multilocal_examples() {
        let m = multilocal_region(&int(-1), &int(1));
        assert_eq!(m.pattern_text, "s1<P<s01<s02");
        assert_eq!(m.id(), Some(7));
        let m = multilocal_region(&int(2), &int(-1));
        assert_eq!(m.pattern_text, "s02<P<s01<s1");
        assert_eq!(m.id(), Some(2));
        let m = multilocal_region(&int(1), &int(0));
        assert!(m.boundary.iter().any(|b| b == "gamma1"));
    }

    #[test]
    fn duplicated_entries_report_aliases() {
        assert_eq!(match_region(&REGION_LIST[7]), RegionMatch::Listed { id: 8, aliases: vec![10, 13] });
        assert_eq!(match_region(&REGION_LIST[18]), RegionMatch::Listed { id: 18, aliases: vec![19] });
        assert_eq!(match_region(&[S01, S02, P, S1]), RegionMatch::Unmatched);
    }

    #[test]
    fn signatures() {
        let c = configuration_signature(&int(-1), &int(1));
        assert_eq!(c.signs, [1, 1, 1, 1]);
        assert!(c.generic);
        let c = configuration_signature(&int(1), &int(-1));
        assert_eq!(c.signs, [-1, 1, 1, 1]);
        let c = configuration_signature(&rat(1, 4), &rat(1, 2));
        assert!(!c.generic);
        assert!(c.singular_points.iter().any(|s| s.curve == "c_B = 0" && s.on_curve));
        let c = configuration_signature(&rat(1, 48), &int(0));
        let f = c.singular_points.iter().find(|s| s.curve == "c_F = 0").unwrap();
        assert!(!f.on_curve);
    }

    #[test]
    fn gammas_are_factors_of_differences() {
        for (a, b) in [(rat(3, 7), rat(-2, 5)), (rat(-5, 3), rat(7, 4)), (int(2), int(-1))] {
            let c: [Rational; 7] = all_normalized(&a, &b).unwrap();
            let b2 = b.clone() * b.clone();
            let d1 = int(3) * a.clone() - int(4) * b.clone() + int(4) * b2.clone();
            let d2 = a.clone() + b2 - b.clone();
            assert_eq!((c[0].clone() - c[5].clone()) * d1, -gamma2(&a, &b));
            assert_eq!((c[0].clone() - c[6].clone()) * int(4) * d2, -gamma3(&a, &b));
        }
    }

    #[test]
    fn grid_csv_and_audit() {
        let cells = atlas_grid(20, -2.0, 2.0);
        assert_eq!(cells.len(), 400);
        let mut buf = Vec::new();
        write_grid_csv(&cells, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 401);
        let audit = connectivity_audit(&cells, 20);
        assert!(audit.iter().map(|a| a.cells).sum::<usize>() <= 400);
        assert!(atlas_svg(&cells, 20, -2.0, 2.0).contains("<rect"));
    }
}
