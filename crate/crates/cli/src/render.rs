//! Text, CSV and JSON renderings of tables and reports.

use std::fmt::Write as _;

use clap::ValueEnum;
use lagroc_core::fuzz::FuzzReport;
use lagroc_core::{CoupleAudit, ExtReal, Function, Role, Table, WeakDualityReport};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Structured,
}

fn aligned(rows: &[Vec<String>]) -> String {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|j| {
            rows.iter()
                .filter_map(|r| r.get(j))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (j, cell) in row.iter().enumerate() {
            if j + 1 == row.len() {
                line.push_str(cell);
            } else {
                let _ = write!(line, "{cell:<w$}  ", w = widths[j]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn csv_line<S: AsRef<str>>(cells: &[S]) -> String {
    let quoted: Vec<String> = cells
        .iter()
        .map(|c| {
            let c = c.as_ref();
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.to_string()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

pub fn function<R: Role>(f: &Function<R>, format: Format) -> String {
    match format {
        Format::Text => {
            let mut rows = vec![vec![R::NAME.to_string(), "value".to_string()]];
            rows.extend(f.iter().map(|(l, v)| vec![l.to_string(), v.to_string()]));
            aligned(&rows)
        }
        Format::Csv => {
            let mut out = csv_line(&[R::NAME, "value"]);
            for (l, v) in f.iter() {
                out.push_str(&csv_line(&[l.to_string(), v.to_string()]));
            }
            out
        }
        Format::Structured => pretty(&json!({
            "set": R::NAME,
            "labels": f.domain().labels(),
            "values": f.values(),
        })),
    }
}

pub fn table<R: Role, C: Role>(t: &Table<R, C>, format: Format) -> String {
    let corner = format!("{}\\{}", R::NAME, C::NAME);
    let header: Vec<String> = std::iter::once(corner)
        .chain(t.cols().labels().iter().cloned())
        .collect();
    let body = (0..t.rows().len()).map(|i| {
        std::iter::once(t.rows().label(i).to_string())
            .chain(t.row_values(i).iter().map(ExtReal::to_string))
            .collect::<Vec<_>>()
    });
    match format {
        Format::Text => {
            let mut rows = vec![header];
            rows.extend(body);
            aligned(&rows)
        }
        Format::Csv => {
            let mut out = csv_line(&header);
            for r in body {
                out.push_str(&csv_line(&r));
            }
            out
        }
        Format::Structured => pretty(&json!({
            "rows": R::NAME,
            "cols": C::NAME,
            "row_labels": t.rows().labels(),
            "col_labels": t.cols().labels(),
            "values": t.to_rows(),
        })),
    }
}

pub fn weak_duality(rep: &WeakDualityReport, format: Format) -> String {
    let gap = rep.gap.map_or_else(|| "n/a".to_string(), |g| g.to_string());
    let fields = [
        ("base_point", rep.base_point.clone()),
        ("primal_value", rep.primal_value.to_string()),
        ("dual_value", rep.dual_value.to_string()),
        ("tight", rep.tight.to_string()),
        ("gap", gap),
    ];
    match format {
        Format::Text => aligned(
            &fields
                .iter()
                .map(|(k, v)| vec![k.replace('_', " "), v.clone()])
                .collect::<Vec<_>>(),
        ),
        Format::Csv => {
            let mut out = csv_line(&["field", "value"]);
            for (k, v) in &fields {
                out.push_str(&csv_line(&[*k, v.as_str()]));
            }
            out
        }
        Format::Structured => pretty(&serde_json::to_value(rep).expect("report serializes")),
    }
}

const ITEMS: [(&str, &str); 6] = [
    ("i", "inequality"),
    ("i", "minimality probe"),
    ("ii", "inf/sup transform equalities"),
    ("iii", "row-wise conjugate duality"),
    ("iv", "conjugate + R rows c-convex"),
    ("v", "conjugate + -L rows c'-convex"),
];

pub fn audit(a: &CoupleAudit, format: Format) -> String {
    let verdicts = [
        a.item_i_inequality,
        a.item_i_minimality_probe,
        a.item_ii,
        a.item_iii,
        a.item_iv,
        a.item_v,
    ];
    match format {
        Format::Text => {
            let rows: Vec<Vec<String>> = ITEMS
                .iter()
                .zip(verdicts)
                .map(|((item, what), v)| vec![format!("({item})"), what.to_string(), v.to_string()])
                .collect();
            let mut out = aligned(&rows);
            let verdict = if a.is_couple() { "couple" } else { "not a couple" };
            let _ = writeln!(out, "verdict: {verdict}");
            if a.consistency_alarm {
                out.push_str("ALARM: items (ii)-(v) disagree\n");
            }
            if !a.witnesses.is_empty() {
                out.push_str("witnesses:\n");
                for w in &a.witnesses {
                    let mut at = format!("u={}", w.u);
                    if let Some(x) = &w.x {
                        let _ = write!(at, " x={x}");
                    }
                    if let Some(y) = &w.y {
                        let _ = write!(at, " y={y}");
                    }
                    let _ = writeln!(out, "  [{}] {at}: {}", w.item, w.description);
                }
            }
            out
        }
        Format::Csv => {
            let mut out = csv_line(&["item", "check", "verdict"]);
            for ((item, what), v) in ITEMS.iter().zip(verdicts) {
                out.push_str(&csv_line(&[*item, *what, if v { "true" } else { "false" }]));
            }
            out
        }
        Format::Structured => pretty(&serde_json::to_value(a).expect("audit serializes")),
    }
}

pub fn fuzz(rep: &FuzzReport, max_set_size: usize, grid: &str, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = format!(
                "fuzz: {} instances, seed {}, max set size {max_set_size}, grid {grid}\n",
                rep.instances, rep.seed
            );
            let mut rows = vec![vec!["check".to_string(), "passed".into(), "failed".into()]];
            rows.extend(
                rep.checks
                    .iter()
                    .map(|(k, t)| vec![k.to_string(), t.passed.to_string(), t.failed.to_string()]),
            );
            out.push_str(&aligned(&rows));
            let _ = writeln!(out, "strict inequality instances: {}", rep.strict_inequality_instances);
            let _ = writeln!(
                out,
                "perturbed couples: {} still couples, {} broken",
                rep.perturbations_still_couples, rep.perturbations_broken
            );
            match &rep.first_failure {
                None => out.push_str("result: PASS\n"),
                Some(f) => {
                    let _ = writeln!(
                        out,
                        "result: FAIL ({} failed checks; first: {} at instance {}, seed {}, instance seed {})",
                        rep.total_failed(),
                        f.check,
                        f.index,
                        rep.seed,
                        f.instance_seed
                    );
                    let _ = writeln!(out, "detail: {}", f.detail);
                }
            }
            out
        }
        Format::Csv => {
            let mut out = csv_line(&["check", "passed", "failed"]);
            for (k, t) in &rep.checks {
                out.push_str(&csv_line(&[k.to_string(), t.passed.to_string(), t.failed.to_string()]));
            }
            out
        }
        Format::Structured => pretty(&serde_json::to_value(rep).expect("report serializes")),
    }
}
