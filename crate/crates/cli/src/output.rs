//! CSV and JSON emission. Floats in CSV carry 17 significant digits.

use std::io::Write;

use qwrca::verify::VerifyReport;
use serde::Serialize;

use crate::config::{Format, Mode};
use crate::error::{CliError, CliResult};
use crate::run::{Outcome, Report};

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

/// Header and rows of a table.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write<W: Write>(&self, out: W) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| CliError::Failed(format!("csv: {e}"));
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn report_table(report: &Report) -> Table {
    match report {
        Report::Qw(r) => Table {
            header: vec![
                "n", "k", "left_re", "left_im", "right_re", "right_im", "prob", "left_sq",
                "right_sq",
            ],
            rows: r
                .steps
                .iter()
                .flat_map(|s| {
                    s.sites.iter().map(move |site| {
                        vec![
                            s.n.to_string(),
                            site.k.to_string(),
                            float(site.left.re),
                            float(site.left.im),
                            float(site.right.re),
                            float(site.right.im),
                            float(site.prob),
                            float(s.left_sq),
                            float(s.right_sq),
                        ]
                    })
                })
                .collect(),
        },
        Report::Rca(r) => Table {
            header: vec!["n", "k", "re", "im", "sq", "norm_sq", "first_moment"],
            rows: r
                .records
                .iter()
                .map(|rec| {
                    let s = &r.summary[rec.n];
                    vec![
                        rec.n.to_string(),
                        rec.k.to_string(),
                        float(rec.re),
                        float(rec.im),
                        float(rec.prob_or_sq),
                        float(s.norm_sq),
                        float(s.first_moment),
                    ]
                })
                .collect(),
        },
        Report::Classify(r) => Table {
            header: vec![
                "theta",
                "c",
                "in_phi_perp",
                "perp_branch",
                "in_phi_star",
                "star_center",
                "star_edges",
                "star_edge_cross",
                "star_phase",
                "steps",
                "symmetric_violation",
                "moment_violation",
                "conserved_violation",
                "moment_witness",
                "norm_witness",
            ],
            rows: vec![vec![
                float(r.theta),
                float(r.c),
                r.in_phi_perp.to_string(),
                r.perp_branch
                    .map(|b| {
                        serde_json::to_value(b)
                            .expect("unit enum")
                            .as_str()
                            .unwrap_or_default()
                            .to_owned()
                    })
                    .unwrap_or_default(),
                r.in_phi_star.to_string(),
                float(r.star_residuals.center),
                float(r.star_residuals.edges),
                float(r.star_residuals.edge_cross),
                float(r.star_residuals.phase),
                r.symmetric.steps_checked.to_string(),
                float(r.symmetric.max_violation),
                float(r.zero_moment.max_violation),
                float(r.conserved.max_violation),
                float(r.moment_witness),
                float(r.norm_witness),
            ]],
        },
        Report::Norms(r) => Table {
            header: vec![
                "n",
                "direct",
                "parseval",
                "closed_form",
                "steady",
                "oscillatory",
            ],
            rows: r
                .rows
                .iter()
                .map(|x| {
                    vec![
                        x.n.to_string(),
                        float(x.direct),
                        float(x.parseval),
                        float(x.closed_form),
                        float(x.steady),
                        float(x.oscillatory),
                    ]
                })
                .collect(),
        },
        Report::Limits(r) => Table {
            header: vec!["theta", "left_limit", "right_limit", "norm_limit"],
            rows: vec![vec![
                float(r.theta),
                opt(r.left_limit),
                opt(r.right_limit),
                opt(r.norm_limit),
            ]],
        },
    }
}

pub fn verify_table(report: &VerifyReport) -> Table {
    Table {
        header: vec![
            "suite",
            "passed",
            "cases",
            "max_violation",
            "tolerance",
            "detail",
        ],
        rows: report
            .suites
            .iter()
            .map(|s| {
                vec![
                    s.name.to_owned(),
                    s.passed.to_string(),
                    s.cases.to_string(),
                    float(s.max_violation),
                    float(s.tolerance),
                    s.detail.clone(),
                ]
            })
            .collect(),
    }
}

/// Per-step (or per-run) summary columns used by the sweep table.
pub fn summary_header(mode: Mode) -> Vec<&'static str> {
    match mode {
        Mode::Qw => vec!["left_sq", "right_sq", "total"],
        Mode::Rca => vec!["norm_sq", "first_moment"],
        Mode::Classify => vec![
            "in_phi_perp",
            "in_phi_star",
            "symmetric_violation",
            "moment_violation",
            "conserved_violation",
        ],
        Mode::Norms => vec!["direct", "parseval", "closed_form"],
        Mode::Limits => vec!["left_limit", "right_limit", "norm_limit"],
        Mode::Verify => vec![],
    }
}

/// `(n, values)` pairs; `n` is `None` for modes without a time axis.
pub fn summary_rows(report: &Report) -> Vec<(Option<usize>, Vec<String>)> {
    match report {
        Report::Qw(r) => r
            .steps
            .iter()
            .map(|s| {
                (
                    Some(s.n),
                    vec![float(s.left_sq), float(s.right_sq), float(s.total)],
                )
            })
            .collect(),
        Report::Rca(r) => r
            .summary
            .iter()
            .map(|s| (Some(s.n), vec![float(s.norm_sq), float(s.first_moment)]))
            .collect(),
        Report::Classify(r) => vec![(
            None,
            vec![
                r.in_phi_perp.to_string(),
                r.in_phi_star.to_string(),
                float(r.symmetric.max_violation),
                float(r.zero_moment.max_violation),
                float(r.conserved.max_violation),
            ],
        )],
        Report::Norms(r) => r
            .rows
            .iter()
            .map(|x| {
                (
                    Some(x.n),
                    vec![float(x.direct), float(x.parseval), float(x.closed_form)],
                )
            })
            .collect(),
        Report::Limits(r) => vec![(
            None,
            vec![opt(r.left_limit), opt(r.right_limit), opt(r.norm_limit)],
        )],
    }
}

pub fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut out, value)
        .map_err(|e| CliError::Failed(format!("json: {e}")))?;
    writeln!(out)?;
    Ok(())
}

pub fn write_outcome<W: Write>(out: W, outcome: &Outcome, format: Format) -> CliResult<()> {
    match (outcome, format) {
        (Outcome::Report(r), Format::Json) => write_json(out, r),
        (Outcome::Report(r), Format::Csv) => report_table(r).write(out),
        (Outcome::Verify(v), Format::Json) => write_json(out, v),
        (Outcome::Verify(v), Format::Csv) => verify_table(v).write(out),
    }
}
