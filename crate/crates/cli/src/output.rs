//! Report rendering. JSON is pretty-printed; CSV is either a `key,value`
//! listing of the flattened JSON or, for series, gnuplot-ready columns with
//! the scalar fields as leading `#` lines. Numbers are printed with the same
//! text in both formats.

use clap::ValueEnum;
use serde_json::Value;

use mucut_core::ExperimentReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

enum Shape {
    Flat,
    /// `columns` name JSON paths to parallel arrays; they are left out of
    /// the `#` header lines.
    Columns {
        header: Vec<String>,
        columns: Vec<String>,
    },
    /// One row per object of the array at `path`.
    Records {
        path: String,
        fields: Vec<String>,
    },
}

pub(crate) struct Output {
    json: Value,
    shape: Shape,
    /// Exit with the domain code even though a report was produced.
    pub success: bool,
}

impl Output {
    pub fn flat(json: Value) -> Self {
        Output { json, shape: Shape::Flat, success: true }
    }

    /// Columns `(header, JSON path)`; every path must hold an array of the
    /// same length.
    pub fn columns(json: Value, cols: &[(&str, &str)]) -> Self {
        Output {
            json,
            shape: Shape::Columns {
                header: cols.iter().map(|c| c.0.to_string()).collect(),
                columns: cols.iter().map(|c| c.1.to_string()).collect(),
            },
            success: true,
        }
    }

    pub fn records(json: Value, path: &str, fields: &[&str]) -> Self {
        Output {
            json,
            shape: Shape::Records { path: path.to_string(), fields: fields.iter().map(|f| f.to_string()).collect() },
            success: true,
        }
    }

    pub fn report(r: &ExperimentReport) -> Self {
        let json = serde_json::to_value(r).expect("reports serialize");
        let grid_matches = r.grid().is_some_and(|g| g.len() == r.observed.len());
        if grid_matches {
            Output::columns(json, &[("grid", "params.grid"), ("observed", "observed"), ("predicted", "predicted")])
        } else {
            Output::columns(json, &[("observed", "observed"), ("predicted", "predicted")])
        }
    }

    pub fn failed(mut self) -> Self {
        self.success = false;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        match &self.shape {
            Shape::Flat => {
                writer.write_record(["key", "value"]).expect("in-memory write");
                for (k, v) in flatten(&self.json, &[]) {
                    writer.write_record([k, v]).expect("in-memory write");
                }
            }
            Shape::Columns { header, columns } => {
                let mut comments = String::new();
                for (k, v) in flatten(&self.json, columns) {
                    comments.push_str(&format!("# {k} = {v}\n"));
                }
                writer.write_record(header).expect("in-memory write");
                let arrays: Vec<&Vec<Value>> = columns
                    .iter()
                    .map(|path| lookup(&self.json, path).and_then(Value::as_array).expect("column is an array"))
                    .collect();
                let rows = arrays.first().map_or(0, |a| a.len());
                for i in 0..rows {
                    writer.write_record(arrays.iter().map(|a| cell(&a[i]))).expect("in-memory write");
                }
                let body = String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8");
                return comments + &body;
            }
            Shape::Records { path, fields } => {
                let mut comments = String::new();
                for (k, v) in flatten(&self.json, std::slice::from_ref(path)) {
                    comments.push_str(&format!("# {k} = {v}\n"));
                }
                writer.write_record(fields).expect("in-memory write");
                let records = lookup(&self.json, path).and_then(Value::as_array).expect("records are an array");
                for r in records {
                    writer
                        .write_record(fields.iter().map(|f| r.get(f).map_or(String::new(), cell)))
                        .expect("in-memory write");
                }
                let body = String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8");
                return comments + &body;
            }
        }
        String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
    }
}

fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |v, key| v.get(key))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "null".to_string(),
        other => other.to_string(),
    }
}

/// Dotted-path listing of every scalar; array elements are indexed.
fn flatten(v: &Value, skip: &[String]) -> Vec<(String, String)> {
    fn walk(v: &Value, path: String, skip: &[String], out: &mut Vec<(String, String)>) {
        if skip.contains(&path) {
            return;
        }
        let join = |key: &str| if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
        match v {
            Value::Object(m) if !m.is_empty() => {
                for (k, x) in m {
                    walk(x, join(k), skip, out);
                }
            }
            Value::Array(a) if !a.is_empty() => {
                for (i, x) in a.iter().enumerate() {
                    walk(x, join(&i.to_string()), skip, out);
                }
            }
            Value::Object(_) => out.push((path, "{}".to_string())),
            Value::Array(_) => out.push((path, "[]".to_string())),
            scalar => out.push((path, cell(scalar))),
        }
    }
    let mut out = Vec::new();
    walk(v, String::new(), skip, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flat_csv_lists_paths() {
        let out = Output::flat(json!({"a": {"b": [1, 2.5]}, "c": "x,y", "d": []}));
        assert_eq!(out.render(Format::Csv), "key,value\na.b.0,1\na.b.1,2.5\nc,\"x,y\"\nd,[]\n");
    }

    #[test]
    fn columns_csv() {
        let out = Output::columns(json!({"n": 3, "x": [1, 2], "y": [0.5, 0.25]}), &[("x", "x"), ("y", "y")]);
        assert_eq!(out.render(Format::Csv), "# n = 3\nx,y\n1,0.5\n2,0.25\n");
    }
}
