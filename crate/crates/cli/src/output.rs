//! CSV and JSON emission: floats at 17 significant digits (round-trip
//! exact), atomic file writes via temp + rename.

use std::io::Write;
use std::path::Path;

pub fn fmt_f64(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        // keep integers readable; still round-trip exact
        format!("{v:.1}")
    } else {
        format!("{v:.16e}")
    }
}

pub struct Csv {
    buf: String,
    cols: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        Csv { buf: format!("{}\n", header.join(",")), cols: header.len() }
    }

    pub fn row(&mut self, cells: &[String]) {
        assert_eq!(cells.len(), self.cols, "csv row width mismatch");
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn row_f64(&mut self, cells: &[f64]) {
        let cells: Vec<String> = cells.iter().map(|&v| fmt_f64(v)).collect();
        self.row(&cells);
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Minimal JSON value for the flat summaries this tool emits.
pub enum Json {
    Num(f64),
    Int(i64),
    Str(String),
    Bool(bool),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn render(&self) -> String {
        match self {
            Json::Num(v) => {
                if v.is_finite() {
                    fmt_f64(*v)
                } else {
                    format!("\"{v}\"")
                }
            }
            Json::Int(v) => format!("{v}"),
            Json::Str(s) => format!("\"{}\"", escape(s)),
            Json::Bool(b) => format!("{b}"),
            Json::Arr(items) => {
                let inner: Vec<String> = items.iter().map(|j| j.render()).collect();
                format!("[{}]", inner.join(","))
            }
            Json::Obj(pairs) => {
                let inner: Vec<String> = pairs
                    .iter()
                    .map(|(k, v)| format!("\"{}\":{}", escape(k), v.render()))
                    .collect();
                format!("{{{}}}", inner.join(","))
            }
        }
    }
}

fn escape(s: &str) -> String {
    s.chars()
        .flat_map(|c| match c {
            '"' => "\\\"".chars().collect::<Vec<_>>(),
            '\\' => "\\\\".chars().collect(),
            '\n' => "\\n".chars().collect(),
            c => vec![c],
        })
        .collect()
}

/// Write atomically: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

/// Send a finished table either to a file (atomic) or stdout.
pub fn emit(dest: &str, content: &str) -> std::io::Result<()> {
    if dest.is_empty() {
        print!("{content}");
        Ok(())
    } else {
        write_atomic(Path::new(dest), content.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_roundtrip() {
        for v in [std::f64::consts::PI, 1.0 / 3.0, 6.62607015e-34, -0.0, 2.0] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s} -> {back}");
        }
    }

    #[test]
    fn json_escaping() {
        let j = Json::Obj(vec![("a\"b".into(), Json::Str("x\\y".into()))]);
        assert_eq!(j.render(), "{\"a\\\"b\":\"x\\\\y\"}");
    }
}
