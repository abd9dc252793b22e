//! Norm tables in text, CSV and JSON.
//!
//! Text and CSV show four decimals (`{:.4}` rounds exact ties to even);
//! JSON keeps full precision.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// One state with its norms over ℝ and ℂ. Missing entries are `None`, e.g.
/// the real norms of a complex tensor.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub name: String,
    pub nuclear_r: Option<f64>,
    pub nuclear_c: Option<f64>,
    pub spectral_r: Option<f64>,
    pub spectral_c: Option<f64>,
}

impl NormRow {
    pub fn product_r(&self) -> Option<f64> {
        Some(self.nuclear_r? * self.spectral_r?)
    }

    pub fn product_c(&self) -> Option<f64> {
        Some(self.nuclear_c? * self.spectral_c?)
    }

    fn cells(&self) -> [Option<f64>; 6] {
        [self.nuclear_r, self.nuclear_c, self.spectral_r, self.spectral_c, self.product_r(), self.product_c()]
    }
}

pub const HEADERS: [&str; 7] = ["name", "nuclear_R", "nuclear_C", "spectral_R", "spectral_C", "P_R", "P_C"];

pub fn four(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.4}"),
        None => "--".to_string(),
    }
}

#[derive(Serialize)]
struct JsonRow<'a> {
    #[serde(flatten)]
    row: &'a NormRow,
    product_r: Option<f64>,
    product_c: Option<f64>,
}

pub fn emit_report(rows: &[NormRow], format: Format) -> String {
    match format {
        Format::Table => table(
            &HEADERS,
            &rows
                .iter()
                .map(|r| std::iter::once(r.name.clone()).chain(r.cells().into_iter().map(four)).collect())
                .collect::<Vec<_>>(),
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(HEADERS).expect("in-memory write");
            for r in rows {
                let mut rec = vec![r.name.clone()];
                rec.extend(r.cells().into_iter().map(|c| c.map(|v| format!("{v:.4}")).unwrap_or_default()));
                w.write_record(&rec).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
        }
        Format::Json => {
            let out: Vec<JsonRow> =
                rows.iter().map(|row| JsonRow { row, product_r: row.product_r(), product_c: row.product_c() }).collect();
            let mut s = serde_json::to_string_pretty(&out).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

/// Left-aligned first column, right-aligned rest.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i == 0 {
                s += &format!("{c:<w$}");
            } else {
                s += &format!("  {c:>w$}");
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}
