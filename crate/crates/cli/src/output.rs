//! Report rendering: JSON, flat CSV, and human-readable text.

use std::fmt::Write as _;

use pryce_core::ccwz::{self, PhaseSpacePoint, StandardCoordsSolution};
use pryce_core::report::{OutputFormat, RunConfig, VerificationReport};
use serde::Serialize;

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize to JSON");
    s.push('\n');
    s
}

fn csv_from_rows(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory CSV write");
    for row in rows {
        w.write_record(&row).expect("in-memory CSV write");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{c:.12e}")).collect();
    format!("({})", parts.join(", "))
}

pub fn render_verification(report: &VerificationReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => csv_from_rows(
            &["suite", "id", "max_residual", "samples", "passed", "tolerance"],
            report
                .records
                .iter()
                .map(|r| {
                    vec![
                        report.suite.clone(),
                        r.id.clone(),
                        format!("{:e}", r.max_residual),
                        r.samples.to_string(),
                        r.passed.to_string(),
                        format!("{:e}", r.tolerance),
                    ]
                })
                .collect(),
        ),
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "suite {} (version {})", report.suite, report.version);
            for r in &report.records {
                let relation = if r.expect_violation { ">" } else { "<" };
                let _ = writeln!(
                    s,
                    "{} {}  residual {:.3e} {relation} {:.0e}  [{} samples]",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.id,
                    r.max_residual,
                    r.tolerance,
                    r.samples
                );
            }
            for n in &report.notes {
                let _ = writeln!(s, "note: {n}");
            }
            let failed = report.failures().count();
            let _ = writeln!(
                s,
                "{}: {} of {} identities passed",
                if report.passed { "PASSED" } else { "FAILED" },
                report.records.len() - failed,
                report.records.len()
            );
            s
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RotateReport {
    pub command: &'static str,
    pub config: RunConfig,
    pub axis: u8,
    pub angle: f64,
    pub input: PhaseSpacePoint,
    pub closed_form: PhaseSpacePoint,
    pub rk4: PhaseSpacePoint,
    /// `rk4 - closed_form`, componentwise.
    pub difference: PhaseSpacePoint,
    pub max_difference: f64,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl RotateReport {
    pub fn new(
        config: RunConfig,
        axis: u8,
        angle: f64,
        input: PhaseSpacePoint,
        closed_form: PhaseSpacePoint,
        rk4: PhaseSpacePoint,
        timestamp: Option<u64>,
    ) -> Self {
        let diff = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        Self {
            command: "rotate",
            config,
            axis,
            angle,
            input,
            closed_form,
            rk4,
            difference: PhaseSpacePoint::new(diff(rk4.p, closed_form.p), diff(rk4.x, closed_form.x)),
            max_difference: rk4.distance(&closed_form),
            version: pryce_core::VERSION,
            timestamp,
        }
    }
}

fn point_row(name: &str, pt: &PhaseSpacePoint) -> Vec<String> {
    let mut row = vec![name.to_string()];
    row.extend(pt.p.iter().chain(&pt.x).map(|c| format!("{c:e}")));
    row
}

pub fn render_rotate(report: &RotateReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => csv_from_rows(
            &["quantity", "p1", "p2", "p3", "x1", "x2", "x3"],
            vec![
                point_row("input", &report.input),
                point_row("closed_form", &report.closed_form),
                point_row("rk4", &report.rk4),
                point_row("difference", &report.difference),
            ],
        ),
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "rotation about axis {} by {} (lambda = {}, {} RK4 steps)",
                report.axis, report.angle, report.config.lambda, report.config.steps
            );
            for (name, pt) in [
                ("input", &report.input),
                ("closed form", &report.closed_form),
                ("rk4", &report.rk4),
                ("difference", &report.difference),
            ] {
                let _ = writeln!(s, "{name:>12}: p = {}  X = {}", fmt_vec(&pt.p), fmt_vec(&pt.x));
            }
            let _ = writeln!(s, "max difference: {:.3e}", report.max_difference);
            s
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StandardCoordsReport {
    pub command: &'static str,
    pub config: RunConfig,
    pub input: PhaseSpacePoint,
    pub xi: [f64; 2],
    pub psi_numeric: [f64; 3],
    pub psi_analytic: [f64; 3],
    pub psi_tilde: [f64; 3],
    pub y: [f64; 3],
    pub residual: f64,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl StandardCoordsReport {
    pub fn new(config: RunConfig, input: PhaseSpacePoint, sol: &StandardCoordsSolution, timestamp: Option<u64>) -> Self {
        Self {
            command: "standard-coords",
            config,
            input,
            xi: [sol.coords.xi.xi1, sol.coords.xi.xi2],
            psi_numeric: sol.coords.psi,
            psi_analytic: sol.analytic_psi,
            psi_tilde: sol.homogeneous_psi,
            y: ccwz::linearize(&sol.coords),
            residual: sol.residual(),
            version: pryce_core::VERSION,
            timestamp,
        }
    }
}

pub fn render_standard_coords(report: &StandardCoordsReport, format: OutputFormat) -> String {
    let rows: [(&str, &[f64]); 5] = [
        ("xi", &report.xi),
        ("psi_numeric", &report.psi_numeric),
        ("psi_analytic", &report.psi_analytic),
        ("psi_tilde", &report.psi_tilde),
        ("y", &report.y),
    ];
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let mut out: Vec<Vec<String>> = rows
                .iter()
                .map(|(name, v)| {
                    let mut row = vec![name.to_string()];
                    row.extend((0..3).map(|i| v.get(i).map(|c| format!("{c:e}")).unwrap_or_default()));
                    row
                })
                .collect();
            out.push(vec!["residual".into(), format!("{:e}", report.residual), String::new(), String::new()]);
            csv_from_rows(&["quantity", "c1", "c2", "c3"], out)
        }
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "standard coordinates at p = {}, X = {} (lambda = {})",
                fmt_vec(&report.input.p),
                fmt_vec(&report.input.x),
                report.config.lambda
            );
            for (name, v) in rows {
                let _ = writeln!(s, "{name:>12}: {}", fmt_vec(v));
            }
            let _ = writeln!(s, "    residual: {:.3e}", report.residual);
            s
        }
    }
}
