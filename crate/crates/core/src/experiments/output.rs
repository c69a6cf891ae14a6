//! CSV and JSON emitters for experiment rows.
//!
//! CSV: one header row followed by one row per record, columns in struct
//! field order, absent optional values left empty. JSON: a single object
//! `{"version", "seed", "config", "rows"}`.

use std::io::Write;

use serde::Serialize;

/// Writes `rows` as CSV with a header line.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(std::io::Error::other)?;
    }
    w.flush()
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

#[derive(Serialize)]
struct Document<'a, C: Serialize, T: Serialize> {
    version: &'static str,
    seed: Option<u64>,
    config: &'a C,
    rows: &'a [T],
}

/// Pretty-printed JSON document with a trailing newline.
pub fn to_json<C: Serialize, T: Serialize>(config: &C, seed: Option<u64>, rows: &[T]) -> String {
    let doc = Document {
        version: env!("CARGO_PKG_VERSION"),
        seed,
        config,
        rows,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("rows serialize");
    s.push('\n');
    s
}
