//! Plain-text summaries.

use std::fmt::Write as _;

use dmplan_core::decomposition::Verdict;

use crate::report::{PartReport, Report};

pub struct Style {
    pub color: bool,
}

impl Style {
    fn paint(&self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    fn verdict(&self, v: Verdict) -> String {
        let (code, word) = match v {
            Verdict::Well => ("32", "well"),
            Verdict::Over => ("31", "over"),
            Verdict::Under => ("33", "under"),
            Verdict::Mixed => ("35", "mixed"),
        };
        self.paint(code, word)
    }

    fn bold(&self, s: &str) -> String {
        self.paint("1", s)
    }
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(" ")
    }
}

/// Rows padded to the widest cell of each column.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c + 1 == r.len() {
                line.push_str(cell);
            } else {
                let _ = write!(line, "{cell:<w$}  ", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn part_row(label: &str, p: &PartReport) -> Vec<String> {
    vec![
        label.to_string(),
        p.components.len().to_string(),
        list(&p.equations),
        list(&p.unknowns),
    ]
}

pub fn analysis(r: &Report, style: &Style) -> String {
    let mut out = format!("{} {}\n\n", style.bold("verdict:"), style.verdict(r.verdict));
    let rows = vec![
        vec!["part".into(), "components".into(), "equations".into(), "unknowns".into()],
        part_row("G1 well", &r.parts.g1),
        part_row("G2 over", &r.parts.g2),
        part_row("G3 under", &r.parts.g3),
    ];
    out.push_str(&table(&rows));
    out.push('\n');
    out.push_str(&table(&[
        vec!["discarded equations".into(), list(&r.discarded_equations)],
        vec!["free parameters".into(), list(&r.free_parameters)],
    ]));
    out
}

pub fn plan(r: &Report, style: &Style) -> String {
    let mut out = format!("{} {}\n\n", style.bold("verdict:"), style.verdict(r.verdict));
    let mut rows = vec![vec![
        "block".into(),
        "part".into(),
        "equations".into(),
        "unknowns".into(),
        "after".into(),
    ]];
    for b in &r.blocks {
        let after: Vec<String> = b.depends_on.iter().map(usize::to_string).collect();
        rows.push(vec![
            b.index.to_string(),
            serde_json::to_value(b.part).unwrap().as_str().unwrap_or("").to_string(),
            list(&b.equations),
            list(&b.unknowns),
            list(&after),
        ]);
    }
    out.push_str(&table(&rows));
    out.push('\n');
    out.push_str(&table(&[
        vec!["discarded equations".into(), list(&r.discarded_equations)],
        vec!["free parameters".into(), list(&r.free_parameters)],
    ]));
    out
}
