//! Input documents: a matrix, a clutter or a graph, read from the
//! line-oriented text format or from JSON.
//!
//! Text format. Rows are separated by newlines or `/`; `#` starts a comment.
//! The first row is a header:
//!
//! ```text
//! matrix 3 3 / 1 1 0 / 0 1 1 / 1 0 1
//! graph 5 / 1 2 / 2 3 / 3 4 / 4 5 / 5 1
//! clutter 3 / 1 2 / 2 3 / 1 3
//! ```
//!
//! Vertex indices are 1-based. A matrix lists its rows; its columns are
//! the vectors `v_1, ..., v_q`.

use monalg::arith::ExactMatrix;
use monalg::clutters::{incidence_matrix, Clutter, Graph};
use monalg::Error;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputDocument {
    Matrix(Vec<Vec<i64>>),
    Clutter(Clutter),
    Graph(Graph),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validation {
    /// Non-negative entries and no zero row or column.
    Strict,
    /// Shape only; used for arbitrary cone generators.
    Shape,
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn validation_error(rule: &str, detail: impl std::fmt::Display) -> Error {
    Error::domain(format!("validation rule `{rule}` violated: {detail}"))
}

/// Rows of tokens; `/` and newlines end a row.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    fn flush<'a>(line: &'a str, ln: usize, start: &mut Option<usize>, end: usize, cur: &mut Vec<Token<'a>>) {
        if let Some(b) = start.take() {
            cur.push(Token { text: &line[b..end], line: ln + 1, column: line[..b].chars().count() + 1 });
        }
    }
    let mut rows = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut current = Vec::new();
        let mut start: Option<usize> = None;
        for (i, c) in line.char_indices() {
            if c == '/' {
                flush(line, ln, &mut start, i, &mut current);
                rows.push(std::mem::take(&mut current));
            } else if c.is_whitespace() {
                flush(line, ln, &mut start, i, &mut current);
            } else if start.is_none() {
                start = Some(i);
            }
        }
        flush(line, ln, &mut start, line.len(), &mut current);
        rows.push(current);
    }
    rows.retain(|r| !r.is_empty());
    rows
}

fn integer(t: &Token<'_>) -> Result<i64, Error> {
    t.text
        .parse::<i64>()
        .map_err(|_| parse_error(t.line, t.column, format!("expected an integer, found `{}`", t.text)))
}

fn count(t: &Token<'_>, what: &str) -> Result<usize, Error> {
    let v = integer(t)?;
    usize::try_from(v).map_err(|_| parse_error(t.line, t.column, format!("{what} must be non-negative")))
}

fn vertex(t: &Token<'_>, n: usize) -> Result<usize, Error> {
    let v = integer(t)?;
    if v < 1 || v as usize > n {
        return Err(parse_error(t.line, t.column, format!("vertex {v} is outside 1..{n}")));
    }
    Ok(v as usize - 1)
}

/// Reads a document in the text format and validates it strictly.
pub fn parse_input(text: &str) -> Result<InputDocument, Error> {
    parse_input_with(text, Validation::Strict)
}

pub fn parse_input_with(text: &str, validation: Validation) -> Result<InputDocument, Error> {
    let rows = tokenize(text);
    let Some((header, body)) = rows.split_first() else {
        return Err(parse_error(1, 1, "empty input"));
    };
    let kind = &header[0];
    let end = rows.last().and_then(|r| r.last()).map_or((1, 1), |t| (t.line, t.column + t.text.len()));
    let expect_args = |k: usize| -> Result<(), Error> {
        if header.len() != k + 1 {
            let t = header.get(k + 1).unwrap_or(kind);
            return Err(parse_error(t.line, t.column, format!("`{}` header takes {k} numbers", kind.text)));
        }
        Ok(())
    };
    let doc = match kind.text {
        "matrix" => {
            expect_args(2)?;
            let r = count(&header[1], "row count")?;
            let c = count(&header[2], "column count")?;
            if body.len() != r {
                let (line, column) = body.get(r).map_or(end, |row| (row[0].line, row[0].column));
                return Err(parse_error(line, column, format!("expected {r} rows, found {}", body.len())));
            }
            let mut out = Vec::with_capacity(r);
            for row in body {
                if row.len() != c {
                    let t = row.get(c).unwrap_or(&row[row.len() - 1]);
                    return Err(parse_error(t.line, t.column, format!("expected {c} entries, found {}", row.len())));
                }
                out.push(row.iter().map(integer).collect::<Result<Vec<_>, _>>()?);
            }
            InputDocument::Matrix(out)
        }
        "graph" => {
            expect_args(1)?;
            let n = count(&header[1], "vertex count")?;
            let mut edges = Vec::with_capacity(body.len());
            for row in body {
                if row.len() != 2 {
                    return Err(parse_error(row[0].line, row[0].column, "a graph edge has exactly two vertices"));
                }
                edges.push((vertex(&row[0], n)?, vertex(&row[1], n)?));
            }
            InputDocument::Graph(Graph::new(n, edges).map_err(|e| validation_error("simple-graph", message(e)))?)
        }
        "clutter" => {
            expect_args(1)?;
            let n = count(&header[1], "vertex count")?;
            let edges = body
                .iter()
                .map(|row| row.iter().map(|t| vertex(t, n)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            if edges.is_empty() {
                return Err(validation_error("nonempty-clutter", "a clutter needs at least one edge"));
            }
            InputDocument::Clutter(Clutter::new(n, edges).map_err(|e| validation_error("clutter-antichain", message(e)))?)
        }
        other => {
            return Err(parse_error(
                kind.line,
                kind.column,
                format!("unknown input kind `{other}`; expected matrix, graph or clutter"),
            ))
        }
    };
    doc.validate(validation)?;
    Ok(doc)
}

fn message(e: Error) -> String {
    match e {
        Error::Domain(m) => m,
        other => other.to_string(),
    }
}

fn json_error(e: serde_json::Error) -> Error {
    parse_error(e.line().max(1), e.column().max(1), e.to_string())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Error> {
    v.get(key).ok_or_else(|| parse_error(1, 1, format!("missing field `{key}`")))
}

fn int_list(v: &Value, what: &str) -> Result<Vec<i64>, Error> {
    v.as_array()
        .ok_or_else(|| parse_error(1, 1, format!("{what} must be an array")))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| parse_error(1, 1, format!("{what} must contain integers"))))
        .collect()
}

/// Reads the JSON form: `{"kind": "matrix", "rows": [[..], ..]}` or
/// `{"kind": "graph" | "clutter", "vertices": n, "edges": [[..], ..]}`.
pub fn parse_json_input(text: &str, validation: Validation) -> Result<InputDocument, Error> {
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    let kind = field(&v, "kind")?.as_str().ok_or_else(|| parse_error(1, 1, "`kind` must be a string"))?;
    let edges = |n: usize| -> Result<Vec<Vec<usize>>, Error> {
        let list = field(&v, "edges")?.as_array().ok_or_else(|| parse_error(1, 1, "`edges` must be an array"))?;
        list.iter()
            .map(|e| {
                int_list(e, "an edge")?
                    .into_iter()
                    .map(|x| {
                        if x < 1 || x as usize > n {
                            Err(parse_error(1, 1, format!("vertex {x} is outside 1..{n}")))
                        } else {
                            Ok(x as usize - 1)
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let vertices = || -> Result<usize, Error> {
        field(&v, "vertices")?
            .as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| parse_error(1, 1, "`vertices` must be a non-negative integer"))
    };
    let doc = match kind {
        "matrix" => {
            let rows = field(&v, "rows")?.as_array().ok_or_else(|| parse_error(1, 1, "`rows` must be an array"))?;
            let rows: Vec<Vec<i64>> = rows.iter().map(|r| int_list(r, "a row")).collect::<Result<_, _>>()?;
            if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
                return Err(parse_error(1, 1, "matrix rows must be nonempty and of equal length"));
            }
            InputDocument::Matrix(rows)
        }
        "graph" => {
            let n = vertices()?;
            let mut pairs = Vec::new();
            for e in edges(n)? {
                if e.len() != 2 {
                    return Err(parse_error(1, 1, "a graph edge has exactly two vertices"));
                }
                pairs.push((e[0], e[1]));
            }
            InputDocument::Graph(Graph::new(n, pairs).map_err(|e| validation_error("simple-graph", message(e)))?)
        }
        "clutter" => {
            let n = vertices()?;
            let e = edges(n)?;
            if e.is_empty() {
                return Err(validation_error("nonempty-clutter", "a clutter needs at least one edge"));
            }
            InputDocument::Clutter(Clutter::new(n, e).map_err(|e| validation_error("clutter-antichain", message(e)))?)
        }
        other => return Err(parse_error(1, 1, format!("unknown input kind `{other}`"))),
    };
    doc.validate(validation)?;
    Ok(doc)
}

impl InputDocument {
    pub fn kind(&self) -> &'static str {
        match self {
            InputDocument::Matrix(_) => "matrix",
            InputDocument::Clutter(_) => "clutter",
            InputDocument::Graph(_) => "graph",
        }
    }

    fn validate(&self, validation: Validation) -> Result<(), Error> {
        let InputDocument::Matrix(rows) = self else { return Ok(()) };
        if rows.is_empty() || rows[0].is_empty() {
            return Err(validation_error("nonempty-matrix", "the matrix has no entries"));
        }
        if validation == Validation::Shape {
            return Ok(());
        }
        for (i, r) in rows.iter().enumerate() {
            if let Some(j) = r.iter().position(|&x| x < 0) {
                return Err(validation_error("nonnegative-entries", format!("entry ({}, {}) is negative", i + 1, j + 1)));
            }
            if r.iter().all(|&x| x == 0) {
                return Err(validation_error("no-zero-row", format!("row {} is zero", i + 1)));
            }
        }
        if let Some(j) = (0..rows[0].len()).find(|&j| rows.iter().all(|r| r[j] == 0)) {
            return Err(validation_error("no-zero-column", format!("column {} is zero", j + 1)));
        }
        Ok(())
    }

    /// Canonical text form; parsing it gives back the same document.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            InputDocument::Matrix(rows) => {
                out.push_str(&format!("matrix {} {}\n", rows.len(), rows[0].len()));
                for r in rows {
                    out.push_str(&r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
                    out.push('\n');
                }
            }
            InputDocument::Clutter(c) => {
                out.push_str(&format!("clutter {}\n", c.vertex_count()));
                for e in c.edges() {
                    out.push_str(&e.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" "));
                    out.push('\n');
                }
            }
            InputDocument::Graph(g) => {
                out.push_str(&format!("graph {}\n", g.vertex_count()));
                for (u, v) in g.edges() {
                    out.push_str(&format!("{} {}\n", u + 1, v + 1));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        match self {
            InputDocument::Matrix(rows) => json!({"kind": "matrix", "rows": rows}),
            InputDocument::Clutter(c) => json!({
                "kind": "clutter",
                "vertices": c.vertex_count(),
                "edges": c.edges().iter().map(|e| e.iter().map(|v| v + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
            InputDocument::Graph(g) => json!({
                "kind": "graph",
                "vertices": g.vertex_count(),
                "edges": g.edges().iter().map(|(u, v)| [u + 1, v + 1]).collect::<Vec<_>>(),
            }),
        }
    }

    /// SHA-256 of the canonical text form.
    pub fn digest(&self) -> String {
        format!("sha256:{:x}", Sha256::digest(self.to_text().as_bytes()))
    }

    /// The matrix `A` whose columns are the vectors of the document; for
    /// clutters and graphs, the incidence matrix.
    pub fn matrix(&self) -> Result<ExactMatrix, Error> {
        match self {
            InputDocument::Matrix(rows) => ExactMatrix::from_rows_i64(rows),
            InputDocument::Clutter(c) => incidence_matrix(c),
            InputDocument::Graph(g) => g.incidence_matrix(),
        }
    }

    /// Columns of the matrix as vectors.
    pub fn columns(&self) -> Result<Vec<Vec<i64>>, Error> {
        match self {
            InputDocument::Matrix(rows) => Ok((0..rows[0].len()).map(|j| rows.iter().map(|r| r[j]).collect()).collect()),
            _ => self.matrix()?.integer_columns(),
        }
    }

    pub fn clutter(&self) -> Result<Clutter, Error> {
        match self {
            InputDocument::Clutter(c) => Ok(c.clone()),
            InputDocument::Graph(g) => Ok(g.as_clutter()),
            InputDocument::Matrix(_) => Clutter::from_incidence(&self.matrix()?),
        }
    }

    pub fn graph(&self) -> Result<Graph, Error> {
        match self {
            InputDocument::Graph(g) => Ok(g.clone()),
            InputDocument::Clutter(c) if c.edges().iter().all(|e| e.len() == 2) => {
                Graph::new(c.vertex_count(), c.edges().iter().map(|e| (e[0], e[1])).collect())
            }
            InputDocument::Matrix(_) => InputDocument::Clutter(self.clutter()?).graph(),
            _ => Err(Error::domain("input is not a graph: every edge must have two vertices")),
        }
    }
}
