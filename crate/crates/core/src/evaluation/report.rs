use serde::{Deserialize, Serialize};

/// One line of the overview table. Times are per element, in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverviewRow {
    pub name: String,
    pub raw_tp: f64,
    pub normalized_tp: f64,
    pub precompute_seconds: f64,
    pub matching_seconds: f64,
}

fn sorted(rows: &[OverviewRow]) -> Vec<&OverviewRow> {
    let mut v: Vec<&OverviewRow> = rows.iter().collect();
    v.sort_by(|a, b| b.raw_tp.total_cmp(&a.raw_tp).then_with(|| a.name.cmp(&b.name)));
    v
}

const HEADERS: [&str; 4] = ["NAME", "TRUE POSITIVE (norm.)", "PRE COMPUTING (s)", "MATCHING (s)"];

/// Plain-text table, best raw score first.
pub fn overview_text(rows: &[OverviewRow]) -> String {
    let cells: Vec<[String; 4]> = sorted(rows)
        .into_iter()
        .map(|r| {
            [
                r.name.clone(),
                format!("{:.5} ({:.5})", r.raw_tp, r.normalized_tp),
                format!("{:.5}", r.precompute_seconds),
                format!("{:.5}", r.matching_seconds),
            ]
        })
        .collect();
    let mut widths = HEADERS.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cols: [&str; 4]| {
        let mut s = String::new();
        for (i, (c, w)) in cols.iter().zip(widths).enumerate() {
            if i > 0 {
                s.push_str(" | ");
            }
            s.push_str(c);
            if i < 3 {
                s.extend(std::iter::repeat(' ').take(w - c.chars().count()));
            }
        }
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(HEADERS);
    let sep: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&sep.join("-+-"));
    out.push('\n');
    for row in &cells {
        out.push_str(&line([&row[0], &row[1], &row[2], &row[3]]));
    }
    out
}

fn tex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '_' | '&' | '%' | '$' | '#' | '{' | '}' => {
                out.push('\\');
                out.push(ch);
            }
            '\\' => out.push_str("\\textbackslash{}"),
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            c => out.push(c),
        }
    }
    out
}

/// LaTeX `tabular` block with the same rows and order as [`overview_text`].
pub fn overview_tex(rows: &[OverviewRow]) -> String {
    let mut out = String::from("\\begin{tabular}{|c||c|c|c|}\n\\hline\n");
    out.push_str("NAME (PARAMETERS) & TRUE POSITIVE (norm.) & PRE COMPUTING (s) & MATCHING (s)\\\\ \\hline\n");
    for r in sorted(rows) {
        out.push_str(&format!(
            "{} & {:.5}  ({:.5})& {:.5} & {:.5}\\\\ \\hline\n",
            tex_escape(&r.name),
            r.raw_tp,
            r.normalized_tp,
            r.precompute_seconds,
            r.matching_seconds
        ));
    }
    out.push_str("\\end{tabular}\n");
    out
}

/// `(text, tex)`.
pub fn overview_report(rows: &[OverviewRow]) -> (String, String) {
    (overview_text(rows), overview_tex(rows))
}
