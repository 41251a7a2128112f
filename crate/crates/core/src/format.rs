//! Plain-text input formats. Node indices in text are 1-based.
//!
//! Matrix:
//! ```text
//! 3
//! 0  1  0
//! -1 0  1
//! 0 -1  0
//! ```
//! Diagram (weights are positive; `color` lines are optional):
//! ```text
//! diagram 3
//! 1 2 1
//! 2 3 2
//! color 2 black
//! ```
//! `#` starts a comment anywhere on a line.

use crate::error::{Error, Result};
use crate::model::{Color, Diagram, ExchangeMatrix, Matrix};

/// Either kind of parsed input.
#[derive(Clone, Debug)]
pub enum Input {
    Matrix(ExchangeMatrix),
    Diagram(Diagram),
}

struct Tok<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Non-empty lines split into tokens, comments stripped.
fn lines(src: &str) -> Vec<Vec<Tok<'_>>> {
    let mut out = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut toks = Vec::new();
        let mut start = None;
        for (i, c) in body
            .char_indices()
            .chain(std::iter::once((body.len(), ' ')))
        {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    toks.push(Tok {
                        line: ln + 1,
                        column: s + 1,
                        text: &body[s..i],
                    });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if !toks.is_empty() {
            out.push(toks);
        }
    }
    out
}

fn int<T: std::str::FromStr>(t: &Tok<'_>, what: &str) -> Result<T> {
    t.text.parse().map_err(|_| {
        perr(
            t.line,
            t.column,
            format!("expected {}, found '{}'", what, t.text),
        )
    })
}

fn node(t: &Tok<'_>, n: usize) -> Result<usize> {
    let v: usize = int(t, "node index")?;
    if v == 0 || v > n {
        return Err(perr(
            t.line,
            t.column,
            format!("node index {} outside 1..={}", v, n),
        ));
    }
    Ok(v - 1)
}

/// Parses either format, chosen by the first token.
pub fn parse_input(src: &str) -> Result<Input> {
    let ls = lines(src);
    match ls.first().and_then(|l| l.first()) {
        Some(t) if t.text == "diagram" => parse_diagram(src).map(Input::Diagram),
        Some(_) => parse_matrix(src).map(Input::Matrix),
        None => Err(perr(1, 1, "empty input")),
    }
}

/// Raw integer matrix, without the skew-symmetrizability check.
pub fn parse_raw_matrix(src: &str) -> Result<Matrix> {
    let ls = lines(src);
    let header = ls.first().ok_or_else(|| perr(1, 1, "empty input"))?;
    if header.len() != 1 {
        return Err(perr(
            header[1].line,
            header[1].column,
            "header must contain only the matrix order",
        ));
    }
    let n: usize = int(&header[0], "matrix order")?;
    if ls.len() - 1 != n {
        let (line, column) = ls
            .get(n + 1)
            .map(|l| (l[0].line, l[0].column))
            .unwrap_or((ls.last().unwrap()[0].line + 1, 1));
        return Err(perr(
            line,
            column,
            format!("expected {} matrix rows, found {}", n, ls.len() - 1),
        ));
    }
    let mut rows = Vec::with_capacity(n);
    for l in &ls[1..] {
        if l.len() != n {
            let col = l
                .get(n)
                .map(|t| t.column)
                .unwrap_or(l.last().unwrap().column);
            return Err(perr(
                l[0].line,
                col,
                format!("expected {} entries, found {}", n, l.len()),
            ));
        }
        rows.push(
            l.iter()
                .map(|t| int::<i64>(t, "integer"))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Matrix::from_rows(&rows)
}

pub fn parse_matrix(src: &str) -> Result<ExchangeMatrix> {
    ExchangeMatrix::new(parse_raw_matrix(src)?)
}

pub fn parse_diagram(src: &str) -> Result<Diagram> {
    let ls = lines(src);
    let header = ls.first().ok_or_else(|| perr(1, 1, "empty input"))?;
    if header[0].text != "diagram" || header.len() != 2 {
        return Err(perr(
            header[0].line,
            header[0].column,
            "expected 'diagram <n>'",
        ));
    }
    let n: usize = int(&header[1], "node count")?;
    let mut d = Diagram::new(n);
    for l in &ls[1..] {
        if l[0].text == "color" {
            if l.len() != 3 {
                return Err(perr(
                    l[0].line,
                    l[0].column,
                    "expected 'color <node> white|black'",
                ));
            }
            let v = node(&l[1], n)?;
            let c = match l[2].text {
                "white" => Color::White,
                "black" => Color::Black,
                other => {
                    return Err(perr(
                        l[2].line,
                        l[2].column,
                        format!("unknown color '{}'", other),
                    ))
                }
            };
            d.set_color(v, c);
            continue;
        }
        if l.len() != 3 {
            return Err(perr(
                l[0].line,
                l[0].column,
                "expected '<tail> <head> <weight>'",
            ));
        }
        let t = node(&l[0], n)?;
        let h = node(&l[1], n)?;
        let w: u64 = int(&l[2], "positive weight")?;
        if w == 0 {
            return Err(perr(l[2].line, l[2].column, "edge weight must be positive"));
        }
        d.add_edge(t, h, w)
            .map_err(|e| perr(l[0].line, l[0].column, e.to_string()))?;
    }
    Ok(d)
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut s = format!("{}\n", m.order());
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}

pub fn write_diagram(d: &Diagram) -> String {
    let mut s = format!("diagram {}\n", d.node_count());
    for e in d.edges() {
        s.push_str(&format!("{} {} {}\n", e.tail + 1, e.head + 1, e.weight));
    }
    for (v, c) in d.colors().iter().enumerate() {
        match c {
            Color::White => s.push_str(&format!("color {} white\n", v + 1)),
            Color::Black => s.push_str(&format!("color {} black\n", v + 1)),
            Color::Uncolored => {}
        }
    }
    s
}
