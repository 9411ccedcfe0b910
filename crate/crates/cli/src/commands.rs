use std::fmt::Write as _;

use serde_json::{json, Value};
use toric_core::{
    bk_bound, bk_verify, bkk_count, bound_l, estimate_l_lower, jd_presentation, mahler_measure, place_heights,
    BkReport, LSource, MahlerOptions, Method,
};

use crate::format::{self, int_json, rat_json, FormatError, Source};

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Core(#[from] toric_core::Error),
    #[error("{0}")]
    Usage(String),
}

pub struct Report {
    pub text: String,
    pub json: Value,
    /// False when a numeric goal was missed; the process then exits with status 3.
    pub within_tolerance: bool,
}

impl Report {
    fn exact(text: String, json: Value) -> Report {
        Report { text, json, within_tolerance: true }
    }
}

fn io(path: &str, e: std::io::Error) -> CommandError {
    CommandError::Format(FormatError::Io { path: path.into(), message: e.to_string() })
}

pub fn check(path: &str) -> Result<Report, CommandError> {
    let fan = format::load_fan(&Source::read(path)?)?;
    let smooth = fan.is_smooth();
    let complete = fan.is_complete()?;
    let flags = match (smooth, complete) {
        (true, true) => "smooth complete".to_string(),
        (s, c) => {
            format!("{}, {}", if s { "smooth" } else { "not smooth" }, if c { "complete" } else { "not complete" })
        }
    };
    let text = format!("{flags}, {} rays, {} maximal cones\n", fan.rays().len(), fan.maximal_cones().len());
    let json = json!({
        "valid": true,
        "smooth": smooth,
        "complete": complete,
        "rays": fan.rays().len(),
        "maximal_cones": fan.maximal_cones().len(),
    });
    Ok(Report::exact(text, json))
}

pub fn normal_fan(path: &str, fan_out: Option<&str>, divisor_out: Option<&str>) -> Result<Report, CommandError> {
    let polytope = format::load_polytope(&Source::read(path)?)?;
    let (fan, divisor) = polytope.normal_fan()?;
    let fan_doc = format::fan_json(&fan);
    let divisor_doc = format::divisor_json(&fan, &divisor);
    let mut text = String::new();
    for (doc, out) in [(&fan_doc, fan_out), (&divisor_doc, divisor_out)] {
        let body = serde_json::to_string_pretty(doc).expect("serializable");
        match out {
            Some(p) => {
                std::fs::write(p, body + "\n").map_err(|e| io(p, e))?;
                writeln!(text, "wrote {p}").unwrap();
            }
            None => writeln!(text, "{body}").unwrap(),
        }
    }
    Ok(Report::exact(text, json!({ "fan": fan_doc, "divisor": divisor_doc })))
}

pub fn degree(fan_path: &str, divisor_paths: &[String]) -> Result<Report, CommandError> {
    let fan = format::load_fan(&Source::read(fan_path)?)?;
    let divisors =
        divisor_paths.iter().map(|p| format::load_divisor(&Source::read(p)?, &fan)).collect::<Result<Vec<_>, _>>()?;
    let deg = toric_core::degree(&fan, &divisors)?;
    Ok(Report::exact(format!("{deg}\n"), json!({ "degree": int_json(&deg) })))
}

pub fn mixed_volume(paths: &[String]) -> Result<Report, CommandError> {
    let polytopes = paths.iter().map(|p| format::load_polytope(&Source::read(p)?)).collect::<Result<Vec<_>, _>>()?;
    let v = toric_core::mixed_volume(&polytopes)?;
    Ok(Report::exact(format!("{v}\n"), json!({ "mixed_volume": rat_json(&v) })))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::ClosedForm => "closed form",
        Method::Jensen => "Jensen",
        Method::Numeric => "midpoint grid",
    }
}

pub fn mahler(path: &str, opts: &MahlerOptions) -> Result<Report, CommandError> {
    let system = format::load_system(&Source::read(path)?)?;
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut ok = true;
    for (i, p) in system.polynomials.iter().enumerate() {
        let e = mahler_measure(p, opts)?;
        ok &= e.error <= opts.tol;
        writeln!(
            text,
            "M(P{}) = {:.12} ± {:.3e} ({}, grid {})",
            i + 1,
            e.value,
            e.error,
            method_name(e.method),
            e.grid
        )
        .unwrap();
        entries.push(json!({
            "value": e.value,
            "error": e.error,
            "tolerance": opts.tol,
            "method": method_name(e.method),
            "grid": e.grid,
        }));
    }
    Ok(Report { text, json: json!({ "mahler": entries }), within_tolerance: ok })
}

pub fn height(path: &str, point: &str) -> Result<Report, CommandError> {
    let polytope = format::load_polytope(&Source::read(path)?)?;
    let x = point.split(',').map(format::parse_rat).collect::<Result<Vec<_>, _>>().map_err(CommandError::Usage)?;
    let places = place_heights(&polytope, &x)?;
    let value = places.value();
    let mut text = format!("{value:.12}\n");
    writeln!(text, "  real place: max |x^m| = {}", places.archimedean).unwrap();
    for (p, e) in &places.finite {
        writeln!(text, "  p = {p}: max |x^m|_p = p^{e}").unwrap();
    }
    let json = json!({
        "height": value,
        "archimedean_max": rat_json(&places.archimedean),
        "finite": places.finite.iter().map(|(p, e)| json!({ "prime": int_json(p), "exponent": int_json(e) })).collect::<Vec<_>>(),
    });
    Ok(Report::exact(text, json))
}

fn bk_lines(report: &BkReport, text: &mut String) -> Vec<Value> {
    let mut terms = Vec::new();
    for i in 0..report.volumes.len() {
        let m = &report.mahler[i];
        let l = report.l_bounds[i];
        let l_text = match l {
            Some(l) => format!(
                "{:.12} ({})",
                l.value,
                if l.source == LSource::Own { "own polytope" } else { "total polytope" }
            ),
            None => "unused".into(),
        };
        writeln!(text, "P{}: V = {}, M = {:.12} ± {:.3e}, L <= {l_text}", i + 1, report.volumes[i], m.value, m.error)
            .unwrap();
        terms.push(json!({
            "mixed_volume": rat_json(&report.volumes[i]),
            "mahler": m.value,
            "mahler_error": m.error,
            "l_bound": l.map(|l| l.value),
            "l_source": l.map(|l| if l.source == LSource::Own { "own" } else { "total" }),
        }));
    }
    writeln!(text, "RHS = {:.12} ± {:.3e}", report.rhs, report.rhs_error).unwrap();
    writeln!(text, "BKK count = {}", report.bkk).unwrap();
    terms
}

pub fn bk(path: &str, opts: &MahlerOptions) -> Result<Report, CommandError> {
    let system = format::load_system(&Source::read(path)?)?;
    let mut text = String::new();
    if system.roots.is_empty() {
        let report = bk_bound(&system.polynomials, opts)?;
        let terms = bk_lines(&report, &mut text);
        let ok = report.rhs_error <= opts.tol;
        let json = json!({ "terms": terms, "rhs": report.rhs, "rhs_error": report.rhs_error, "tolerance": opts.tol, "bkk": int_json(&report.bkk) });
        return Ok(Report { text, json, within_tolerance: ok });
    }
    let v = bk_verify(&system.polynomials, &system.roots, opts)?;
    let terms = bk_lines(&v.report, &mut text);
    writeln!(text, "LHS = {:.12}", v.lhs).unwrap();
    writeln!(text, "slack = {:.12}", v.slack).unwrap();
    writeln!(text, "{}", if v.holds { "inequality holds" } else { "inequality FAILS" }).unwrap();
    let json = json!({
        "terms": terms,
        "rhs": v.report.rhs,
        "rhs_error": v.report.rhs_error,
        "tolerance": opts.tol,
        "bkk": int_json(&v.report.bkk),
        "lhs": v.lhs,
        "slack": v.slack,
        "holds": v.holds,
    });
    Ok(Report { text, json, within_tolerance: v.holds && v.report.rhs_error <= opts.tol })
}

pub fn bkk(path: &str) -> Result<Report, CommandError> {
    let system = format::load_system(&Source::read(path)?)?;
    let n = bkk_count(&system.polynomials)?;
    Ok(Report::exact(format!("{n}\n"), json!({ "bkk": int_json(&n) })))
}

pub fn estimate_l(path: &str, samples: usize, grid: usize, seed: u64) -> Result<Report, CommandError> {
    let polytope = format::load_polytope(&Source::read(path)?)?;
    let lower = estimate_l_lower(&polytope, samples, grid, seed)?;
    let upper = bound_l(&polytope).ok();
    let mut text = format!("L >= {lower:.12}\n");
    if let Some(u) = upper {
        writeln!(text, "L <= {u:.12}").unwrap();
    }
    let json = json!({ "lower": lower, "upper": upper, "samples": samples, "grid": grid, "seed": seed });
    Ok(Report::exact(text, json))
}

pub fn jd(path: &str) -> Result<Report, CommandError> {
    let fan = format::load_fan(&Source::read(path)?)?;
    let p = jd_presentation(&fan)?;
    let json = json!({
        "variables": p.num_rays,
        "nonfaces": p.nonfaces,
        "linear": p.linear.iter().map(|row| row.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(Report::exact(p.to_string(), json))
}
