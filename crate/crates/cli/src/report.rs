//! Report records and their JSON / CSV encodings.
//!
//! Non-finite numbers are written as JSON `null` and as empty CSV fields.

use std::io::Write;

use serde::Serialize;
use shintani::kernel::ShintaniDatum;
use shintani::lfunction::Config;
use shintani::quadrature::ContourRadius;
use shintani::suite::Case;

use crate::problem::Cplx;

pub fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub series_tol: f64,
    pub series_max_box: Option<usize>,
    pub quad_h: f64,
    pub quad_angular_h: f64,
    pub quad_panel_width: f64,
    pub quad_circle_panels: usize,
    pub quad_cutoff: f64,
    pub quad_margin: f64,
    /// `null` means the automatic radius.
    pub contour_radius: Option<f64>,
}

impl From<&Config> for ConfigEcho {
    fn from(c: &Config) -> Self {
        Self {
            series_tol: c.series.tol,
            series_max_box: c.series.max_box,
            quad_h: c.quad.h,
            quad_angular_h: c.quad.angular_h,
            quad_panel_width: c.quad.panel_width,
            quad_circle_panels: c.quad.circle_panels,
            quad_cutoff: c.quad.cutoff,
            quad_margin: c.quad.margin,
            contour_radius: match c.quad.contour_radius {
                ContourRadius::Auto => None,
                ContourRadius::Fixed(v) => Some(v),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ProblemEcho {
    pub r: usize,
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub chi: Vec<u8>,
    pub variant: &'static str,
    pub method: &'static str,
}

#[derive(Debug, Serialize)]
pub struct EvalRecord {
    pub index: usize,
    pub s: Vec<Cplx>,
    pub value: Option<Cplx>,
    pub err: Option<f64>,
    pub method: Option<&'static str>,
    pub error: Option<String>,
    /// For the completed and R variants: L_χ itself and the exact factor relating it to `value`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized: Option<Cplx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<Cplx>,
}

#[derive(Debug, Serialize)]
pub struct EvalSummary {
    pub cases: usize,
    pub errors: usize,
}

#[derive(Debug, Serialize)]
pub struct EvalReport {
    pub command: &'static str,
    pub problem: ProblemEcho,
    pub config: ConfigEcho,
    pub seed: Option<u64>,
    pub cases: Vec<EvalRecord>,
    pub summary: EvalSummary,
}

#[derive(Debug, Serialize)]
pub struct CheckEcho {
    pub r: usize,
    pub samples: usize,
    pub tol: f64,
    pub kmax: u32,
    pub taylor_order: usize,
    #[serde(flatten)]
    pub eval: ConfigEcho,
}

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub index: usize,
    pub label: String,
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub chi: Option<Vec<u8>>,
    pub s: Option<Vec<Cplx>>,
    pub k: Option<Vec<f64>>,
    pub lhs: Option<Cplx>,
    pub rhs: Option<Cplx>,
    pub err: Option<f64>,
    pub residual: Option<f64>,
    pub error: Option<String>,
}

impl From<&Case> for CheckRecord {
    fn from(c: &Case) -> Self {
        let ok = !c.failed();
        Self {
            index: c.index,
            label: c.label.clone(),
            a: c.datum.matrix().to_vec(),
            x: c.datum.x().to_vec(),
            y: c.datum.y().to_vec(),
            chi: c.chi.as_ref().map(|p| p.bits().to_vec()),
            s: c.s.as_ref().map(|p| p.values().iter().map(|v| Cplx::from(*v)).collect()),
            k: c.k.clone(),
            lhs: ok.then(|| c.lhs.into()),
            rhs: ok.then(|| c.rhs.into()),
            err: if ok { finite(c.err) } else { None },
            residual: if ok { finite(c.residual) } else { None },
            error: c.error.clone().or_else(|| (!ok).then(|| "non-finite residual".to_string())),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckSummary {
    pub cases: usize,
    pub errors: usize,
    pub max_residual: Option<f64>,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub command: &'static str,
    pub kind: &'static str,
    pub seed: u64,
    pub config: CheckEcho,
    pub cases: Vec<CheckRecord>,
    pub summary: CheckSummary,
}

pub fn echo_problem(d: &ShintaniDatum, chi: &[u8], variant: &'static str, method: &'static str) -> ProblemEcho {
    ProblemEcho {
        r: d.r(),
        a: d.matrix().to_vec(),
        x: d.x().to_vec(),
        y: d.y().to_vec(),
        chi: chi.to_vec(),
        variant,
        method,
    }
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, report: &T) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, report)?;
    writeln!(out)
}

/// Shortest round-trip decimal form.
fn num(v: f64) -> String {
    if !v.is_finite() {
        String::new()
    } else if v != 0.0 && (v.abs() < 1e-5 || v.abs() >= 1e16) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn joined<T>(v: &[T], f: impl Fn(&T) -> String) -> String {
    v.iter().map(f).collect::<Vec<_>>().join(";")
}

pub fn write_eval_csv(out: &mut dyn Write, rep: &EvalReport) -> csv::Result<()> {
    let r = rep.problem.r;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["index".to_string()];
    for j in 0..r {
        header.push(format!("s{j}_re"));
        header.push(format!("s{j}_im"));
    }
    header.extend(
        [
            "value_re",
            "value_im",
            "err",
            "method",
            "error",
            "normalized_re",
            "normalized_im",
            "factor_re",
            "factor_im",
        ]
        .map(String::from),
    );
    w.write_record(&header)?;
    for c in &rep.cases {
        let mut row = vec![c.index.to_string()];
        for v in &c.s {
            row.push(num(v.re));
            row.push(num(v.im));
        }
        row.push(opt(c.value.map(|z| z.re)));
        row.push(opt(c.value.map(|z| z.im)));
        row.push(opt(c.err));
        row.push(c.method.unwrap_or_default().to_string());
        row.push(c.error.clone().unwrap_or_default());
        for z in [c.normalized, c.factor] {
            row.push(opt(z.map(|z| z.re)));
            row.push(opt(z.map(|z| z.im)));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_check_csv(out: &mut dyn Write, rep: &CheckReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "index", "label", "A", "x", "y", "chi", "s_re", "s_im", "k", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "err", "residual",
        "error",
    ])?;
    for c in &rep.cases {
        let mut row = vec![
            c.index.to_string(),
            c.label.clone(),
            joined(&c.a, |v| num(*v)),
            joined(&c.x, |v| num(*v)),
            joined(&c.y, |v| num(*v)),
            c.chi.as_ref().map(|b| joined(b, u8::to_string)).unwrap_or_default(),
            c.s.as_ref().map(|s| joined(s, |z| num(z.re))).unwrap_or_default(),
            c.s.as_ref().map(|s| joined(s, |z| num(z.im))).unwrap_or_default(),
            c.k.as_ref().map(|k| joined(k, |v| num(*v))).unwrap_or_default(),
        ];
        for z in [c.lhs, c.rhs] {
            row.push(opt(z.map(|z| z.re)));
            row.push(opt(z.map(|z| z.im)));
        }
        row.push(opt(c.err));
        row.push(opt(c.residual));
        row.push(c.error.clone().unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
