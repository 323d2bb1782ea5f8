//! The `analyze` report: P3 test, the seven coefficients by both routes,
//! invariants, folded type and region data for one surface.

use serde_json::{json, Value};

use crate::atlas::region_report;
use crate::bde::{asymptotic_bde, classify_bde, classify_folded, inflection_locus};
use crate::cross_ratio::{cr_invariants, recover_moduli, RecoveryReport};
use crate::io::{float, num};
use crate::locus::closed::{closed_form_c, difference_identities, printed_b_minus_f};
use crate::locus::reconcile::{known_discrepancies, reconcile_surface, C1_TOL};
use crate::locus::{LocusLabel, TraceOptions};
use crate::scalar::Scalar;
use crate::surface::SurfaceJet;

#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    pub trace: TraceOptions,
    /// Oracle agreement tolerance on `c2`.
    pub tol: f64,
    pub oracle: bool,
    pub literal_alpha: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { trace: TraceOptions::default(), tol: crate::locus::reconcile::C2_TOL, oracle: true, literal_alpha: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    NotP3c(String),
    NonVersal,
}

pub struct Analysis {
    pub status: Status,
    pub report: Value,
}

fn err(e: impl std::fmt::Display) -> Value {
    json!({ "error": e.to_string() })
}

pub fn analyze<T: Scalar>(s: &SurfaceJet<T>, opts: &AnalyzeOptions) -> Result<Analysis, crate::surface::GeometryError> {
    let rep = s.detect_p3c()?;
    let mode = if T::EXACT { "exact" } else { "float" };
    let p3 = json!({
        "is_p3c": rep.is_p3c,
        "failure": rep.failure.map(|f| f.to_string()),
        "a32": num(&rep.a32),
        "a33": num(&rep.a33),
        "a44": num(&rep.a44),
        "b33": num(&rep.b33),
        "modulus_c": rep.modulus_c.as_ref().map(num),
        "versal": rep.versal,
        "versality": num(&rep.versality),
        "normalized": rep.normalized.as_ref().map(|(a, b)| json!({ "alpha": num(a), "beta": num(b) })),
        "alpha_in_excluded_list": rep.alpha_in_excluded_list,
    });
    if let Some(f) = rep.failure {
        let msg = f.to_string();
        return Ok(Analysis {
            status: Status::NotP3c(msg.clone()),
            report: json!({ "mode": mode, "status": msg, "p3": p3 }),
        });
    }
    let status = if rep.versal { Status::Ok } else { Status::NonVersal };

    let closed: Vec<_> = LocusLabel::ALL.iter().map(|&l| closed_form_c(l, &rep.a32, &rep.a44, &rep.b33)).collect();
    let run_oracle = opts.oracle && rep.versal;
    let oracle = if run_oracle { reconcile_surface(s, &opts.trace).ok() } else { None };
    let mut c_values = Vec::new();
    for (k, &label) in LocusLabel::ALL.iter().enumerate() {
        let row = oracle.as_ref().and_then(|r| r.row(label));
        let closed_f = closed[k].as_ref().ok().map(|v| v.to_f64());
        let delta = closed_f.zip(row.and_then(|r| r.oracle)).map(|(c, o)| c - o);
        let pass = row.map(|r| delta.is_some_and(|d| d.abs() <= opts.tol) && r.oracle_c1.is_some_and(|c| c.abs() < C1_TOL));
        c_values.push(json!({
            "label": label.name(),
            "name": format!("c_{}", label.short()),
            "closed": closed[k].as_ref().map_or_else(err, num),
            "oracle": row.and_then(|r| r.oracle).map(float),
            "oracle_c1": row.and_then(|r| r.oracle_c1).map(float),
            "mirror": row.and_then(|r| r.mirror).map(float),
            "printed": row.and_then(|r| r.printed).map(float),
            "rederived": row.and_then(|r| r.rederived).map(float),
            "delta": delta.map(float),
            "pass": pass,
            "note": row.and_then(|r| r.note.clone()),
        }));
    }
    let oracle_info = json!({
        "enabled": run_oracle,
        "reason": if !rep.versal { Some("non-versal") } else if !opts.oracle { Some("disabled by request") } else { None },
        "tolerance": opts.tol,
        "y_range": opts.trace.y_range,
        "steps": opts.trace.steps,
    });

    let values: Option<[T; 7]> = closed.iter().map(|r| r.as_ref().ok().cloned()).collect::<Option<Vec<_>>>().and_then(|v| v.try_into().ok());
    let (cross, recovery) = match values.as_ref().map(cr_invariants) {
        Some(Ok(rho)) => {
            let cross = json!({ "rho1": num(&rho.rho1), "rho2": num(&rho.rho2), "rho3": num(&rho.rho3), "rho4": num(&rho.rho4) });
            let rec = recover_moduli(&rho).map_or_else(err, |r| {
                serde_json::to_value(RecoveryReport::new(&rho, &r, opts.literal_alpha)).unwrap_or(Value::Null)
            });
            (cross, rec)
        }
        Some(Err(e)) => (err(&e), err(&e)),
        None => (err("a coefficient is undefined"), err("a coefficient is undefined")),
    };

    let folded = match asymptotic_bde(s) {
        Ok(bde) => {
            let mut f = match classify_bde(&bde) {
                Ok((kind, lin)) => json!({ "kind": kind, "linearization": lin }),
                Err(e) => err(e),
            };
            if let Some((a, b)) = &rep.normalized {
                f["normal_form"] = serde_json::to_value(classify_folded(a, b)).unwrap_or(Value::Null);
            }
            match inflection_locus(&bde) {
                Ok(inf) => f["inflection_c2"] = num(&inf.germ.c2),
                Err(e) => f["inflection_c2"] = err(e),
            }
            f
        }
        Err(e) => err(e),
    };

    let (identities, region) = match &rep.normalized {
        Some((a, b)) => {
            let ids = match difference_identities(a, b) {
                Ok(v) => v
                    .into_iter()
                    .chain(printed_b_minus_f(a, b).ok())
                    .map(|c| json!({ "name": c.name, "lhs": num(&c.lhs), "rhs": num(&c.rhs), "holds": c.holds, "note": c.note }))
                    .collect(),
                Err(e) => vec![err(e)],
            };
            (Value::Array(ids), serde_json::to_value(region_report(a, b)).unwrap_or(Value::Null))
        }
        None => (Value::Null, Value::Null),
    };

    let status_text = match status {
        Status::Ok => "ok",
        Status::NonVersal => "non-versal",
        Status::NotP3c(_) => unreachable!(),
    };
    let report = json!({
        "mode": mode,
        "status": status_text,
        "p3": p3,
        "oracle": oracle_info,
        "c_values": c_values,
        "identities": identities,
        "cross_ratios": cross,
        "recovery": recovery,
        "folded": folded,
        "region": region,
        "discrepancies": known_discrepancies(),
    });
    Ok(Analysis { status, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};
    use crate::surface::normal_form_surface;

    fn quick() -> AnalyzeOptions {
        AnalyzeOptions { oracle: false, ..Default::default() }
    }

    #[test]
    fn worked_point_report() {
        let s = normal_form_surface(int(-1), int(1), None).unwrap();
        let a = analyze(&s, &quick()).unwrap();
        assert_eq!(a.status, Status::Ok);
        let r = &a.report;
        assert_eq!(r["c_values"][0]["closed"], "3");
        assert_eq!(r["c_values"][2]["closed"], "228/49");
        assert_eq!(r["cross_ratios"]["rho1"], "2/5");
        assert_eq!(r["folded"]["kind"], "FoldedFocus");
        assert_eq!(r["region"]["multilocal"]["region"]["Listed"]["id"], 7);
        assert_eq!(r["folded"]["inflection_c2"], "156/25");
    }

    #[test]
    fn a33_is_reported() {
        let s = SurfaceJet::<Rational>::parabolic_chart(&[((3, 2), int(1)), ((3, 3), int(1)), ((4, 4), int(-1))], &[((3, 3), int(1))])
            .unwrap();
        let a = analyze(&s, &quick()).unwrap();
        assert_eq!(a.status, Status::NotP3c("not a P3(c) point: a33 != 0".into()));
        assert_eq!(a.report["status"], "not a P3(c) point: a33 != 0");
    }

    #[test]
    fn non_versal_disables_oracle() {
        let s = normal_form_surface(rat(-1, 4), int(1), None).unwrap();
        let a = analyze(&s, &AnalyzeOptions::default()).unwrap();
        assert_eq!(a.status, Status::NonVersal);
        assert_eq!(a.report["status"], "non-versal");
        assert_eq!(a.report["oracle"]["enabled"], false);
    }

    #[test]
    fn float_mode_uses_numbers() {
        let s = normal_form_surface(2.0f64, -1.0, None).unwrap();
        let a = analyze(&s, &quick()).unwrap();
        assert_eq!(a.report["c_values"][0]["closed"], json!(-27.0));
        assert_eq!(a.report["folded"]["kind"], "FoldedSaddle");
    }
}
