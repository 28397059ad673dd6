use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::args::Format;
use sadic_core::Provenance;

/// Flat rendering of a result for csv and text output.
pub trait Tabular {
    fn header() -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<R> {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub results: Vec<R>,
    pub provenance: Provenance,
    pub version: String,
}

impl<R> Report<R> {
    pub fn new(command: &str, params: BTreeMap<String, String>, results: Vec<R>, provenance: Provenance) -> Self {
        Report {
            command: command.to_string(),
            params,
            results,
            provenance,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Builds a params map from `(name, value)` pairs.
#[macro_export]
macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = std::collections::BTreeMap::new();
        $(m.insert($k.to_string(), $v.to_string());)*
        m
    }};
}

pub fn render<R: Serialize + Tabular>(report: &Report<R>, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(R::header()).expect("in-memory write");
            for r in &report.results {
                for row in r.rows() {
                    w.write_record(&row).expect("in-memory write");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
        }
        Format::Text => {
            let header: Vec<String> = R::header().into_iter().map(String::from).collect();
            let rows: Vec<Vec<String>> = report.results.iter().flat_map(Tabular::rows).collect();
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let mut out = format!("# {} ({})\n", report.command, report.provenance);
            for line in std::iter::once(&header).chain(&rows) {
                let cells: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                out.push_str(cells.join("  ").trim_end());
                out.push('\n');
            }
            out
        }
    }
}

pub fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn float(x: f64) -> String {
    format!("{x}")
}
