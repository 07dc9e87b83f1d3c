//! Text formats shared by the library and the command line.
//!
//! ```text
//! p=3 k=2 mod=[1,0,1]          field header (mod optional when parsing)
//! [0,1]                        element, coordinates low degree first
//! d=(1,2) m=3 lambda=[2,1]     band
//! (-1:[1])(2:[0,1])            Laurent polynomial, "0" for zero
//! ```
//!
//! A triple file is a field header, a line `N=<components> n=<rank>`, one line
//! `splitting <c> : <deg:mult,...>` per component (`-` when empty), then for every node
//! `node <j> inf` and `node <j> zero`, each followed by `n` rows of elements. A Laurent
//! matrix file is a field header, `n=<size>` and `n` rows of Laurent polynomials. Blank
//! lines and lines starting with `#` are ignored.

use crate::band::BandData;
use crate::birkhoff::SplittingType;
use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::laurent::{Laurent, LaurentMatrix};
use crate::matrix::Mat;
use crate::triple::{CycleGeometry, NodeGluing, Triple};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn list(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().collect::<Vec<_>>().join(",")
}

pub fn field_header(f: &Field) -> String {
    format!("p={} k={} mod=[{}]", f.p(), f.k(), list(f.modulus().iter().map(u64::to_string)))
}

fn key_value<'a>(token: &'a str, key: &str) -> Result<&'a str> {
    token
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| parse_err(format!("expected {key}=..., found {token:?}")))
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| parse_err(format!("bad number {s:?}")))
}

fn bracketed<'a>(s: &'a str, open: char, close: char) -> Result<&'a str> {
    s.trim()
        .strip_prefix(open)
        .and_then(|r| r.strip_suffix(close))
        .ok_or_else(|| parse_err(format!("expected {open}...{close}, found {s:?}")))
}

fn parse_list<T: std::str::FromStr>(inner: &str) -> Result<Vec<T>> {
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(parse_num).collect()
}

pub fn parse_field_header(line: &str) -> Result<Field> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() < 2 || tokens.len() > 3 {
        return Err(parse_err(format!("bad field header {line:?}")));
    }
    let p: u64 = parse_num(key_value(tokens[0], "p")?)?;
    let k: usize = parse_num(key_value(tokens[1], "k")?)?;
    match tokens.get(2) {
        Some(t) => Field::new(p, k, parse_list(bracketed(key_value(t, "mod")?, '[', ']')?)?),
        None => Field::default_for(p, k),
    }
}

pub fn element(f: &Field, e: Elem) -> String {
    format!("[{}]", list(f.coords(e).iter().map(u64::to_string)))
}

pub fn parse_element(f: &Field, s: &str) -> Result<Elem> {
    f.from_coords(&parse_list::<u64>(bracketed(s, '[', ']')?)?)
}

pub fn band_line(f: &Field, b: &BandData) -> String {
    format!(
        "d=({}) m={} lambda={}",
        list(b.d.iter().map(i64::to_string)),
        b.m,
        element(f, b.lambda)
    )
}

/// Parses a band line; validity against a geometry is left to the caller.
pub fn parse_band_line(f: &Field, line: &str) -> Result<BandData> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != 3 {
        return Err(parse_err(format!("bad band line {line:?}")));
    }
    let d = parse_list(bracketed(key_value(tokens[0], "d")?, '(', ')')?)?;
    let m = parse_num(key_value(tokens[1], "m")?)?;
    let lambda = parse_element(f, key_value(tokens[2], "lambda")?)?;
    Ok(BandData::new(d, m, lambda))
}

pub fn laurent(f: &Field, x: &Laurent) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.terms().map(|(e, c)| format!("({e}:{})", element(f, c))).collect()
}

pub fn parse_laurent(f: &Field, s: &str) -> Result<Laurent> {
    let s = s.trim();
    if s == "0" {
        return Ok(Laurent::zero());
    }
    let mut terms = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let close = rest.find(')').ok_or_else(|| parse_err(format!("unclosed term in {s:?}")))?;
        let inner = bracketed(&rest[..=close], '(', ')')?;
        let (e, c) = inner.split_once(':').ok_or_else(|| parse_err(format!("bad term {inner:?}")))?;
        let e: i64 = parse_num(e)?;
        if terms.last().is_some_and(|&(prev, _)| prev >= e) {
            return Err(parse_err(format!("exponents must increase in {s:?}")));
        }
        terms.push((e, parse_element(f, c)?));
        rest = &rest[close + 1..];
    }
    if terms.is_empty() {
        return Err(parse_err("empty Laurent polynomial"));
    }
    Ok(Laurent::from_terms(terms, f))
}

pub fn write_laurent_matrix(f: &Field, m: &LaurentMatrix) -> String {
    let mut out = format!("{}\nn={}\n", field_header(f), m.size());
    for i in 0..m.size() {
        let row: Vec<String> = m.row(i).iter().map(|x| laurent(f, x)).collect();
        out += &row.join(" ");
        out.push('\n');
    }
    out
}

struct Lines<'a> {
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let inner = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        Lines { inner: Box::new(inner) }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.inner.next().ok_or_else(|| parse_err(format!("unexpected end of input, expected {what}")))
    }

    fn finish(&mut self) -> Result<()> {
        match self.inner.next() {
            Some((no, l)) => Err(parse_err(format!("line {no}: trailing content {l:?}"))),
            None => Ok(()),
        }
    }
}

pub fn parse_laurent_matrix(text: &str) -> Result<(Field, LaurentMatrix)> {
    let mut lines = Lines::new(text);
    let f = parse_field_header(lines.next("field header")?.1)?;
    let n: usize = parse_num(key_value(lines.next("size line")?.1, "n")?)?;
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n {
        let (no, line) = lines.next("matrix row")?;
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.len() != n {
            return Err(parse_err(format!("line {no}: expected {n} entries")));
        }
        for tok in row {
            entries.push(parse_laurent(&f, tok)?);
        }
    }
    lines.finish()?;
    Ok((f.clone(), LaurentMatrix::new(n, entries)?))
}

pub fn parse_splitting(s: &str) -> Result<SplittingType> {
    let s = s.trim();
    if s == "-" {
        return Ok(SplittingType::default());
    }
    let parts = s
        .split(',')
        .map(|p| {
            let (d, m) = p.split_once(':').ok_or_else(|| parse_err(format!("bad splitting part {p:?}")))?;
            let m: usize = parse_num(m)?;
            if m == 0 {
                return Err(parse_err("zero multiplicity"));
            }
            Ok((parse_num(d)?, m))
        })
        .collect::<Result<Vec<(i64, usize)>>>()?;
    if parts.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(parse_err(format!("splitting degrees must increase in {s:?}")));
    }
    Ok(SplittingType::new(parts))
}

fn write_matrix(f: &Field, m: &Mat, out: &mut String) {
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&e| element(f, e)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

pub fn write_triple(t: &Triple) -> String {
    let f = t.field();
    let n_comp = t.geometry().components();
    let mut out = format!("{}\nN={} n={}\n", field_header(f), n_comp, t.rank());
    for c in 0..n_comp {
        out += &format!("splitting {c} : {}\n", t.splitting(c));
    }
    for j in 0..n_comp {
        out += &format!("node {j} inf\n");
        write_matrix(f, &t.node(j).at_infinity, &mut out);
        out += &format!("node {j} zero\n");
        write_matrix(f, &t.node(j).at_zero, &mut out);
    }
    out
}

fn read_matrix(f: &Field, lines: &mut Lines, n: usize) -> Result<Mat> {
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let (no, line) = lines.next("matrix row")?;
        let row = line.split_whitespace().map(|tok| parse_element(f, tok)).collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(parse_err(format!("line {no}: expected {n} entries")));
        }
        rows.push(row);
    }
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    Mat::from_rows(rows)
}

fn expect_line(lines: &mut Lines, expected: &str) -> Result<()> {
    let (no, line) = lines.next(expected)?;
    if line.split_whitespace().collect::<Vec<_>>() != expected.split_whitespace().collect::<Vec<_>>() {
        return Err(parse_err(format!("line {no}: expected {expected:?}, found {line:?}")));
    }
    Ok(())
}

pub fn parse_triple(text: &str) -> Result<Triple> {
    let mut lines = Lines::new(text);
    let f = parse_field_header(lines.next("field header")?.1)?;
    let (no, dims) = lines.next("N=... n=...")?;
    let tokens: Vec<&str> = dims.split_whitespace().collect();
    if tokens.len() != 2 {
        return Err(parse_err(format!("line {no}: expected N=... n=...")));
    }
    let n_comp: usize = parse_num(key_value(tokens[0], "N")?)?;
    let n: usize = parse_num(key_value(tokens[1], "n")?)?;
    let geometry = CycleGeometry::new(n_comp)?;
    let mut splittings = Vec::with_capacity(n_comp);
    for c in 0..n_comp {
        let (no, line) = lines.next("splitting line")?;
        let spec = line
            .strip_prefix("splitting")
            .and_then(|r| r.trim_start().strip_prefix(&c.to_string()))
            .and_then(|r| r.trim_start().strip_prefix(':'))
            .ok_or_else(|| parse_err(format!("line {no}: expected \"splitting {c} : ...\"")))?;
        let s = parse_splitting(spec)?;
        if s.rank() != n {
            return Err(parse_err(format!("line {no}: splitting has rank {} but n={n}", s.rank())));
        }
        splittings.push(s);
    }
    let mut nodes = Vec::with_capacity(n_comp);
    for j in 0..n_comp {
        expect_line(&mut lines, &format!("node {j} inf"))?;
        let at_infinity = read_matrix(&f, &mut lines, n)?;
        expect_line(&mut lines, &format!("node {j} zero"))?;
        let at_zero = read_matrix(&f, &mut lines, n)?;
        nodes.push(NodeGluing { at_infinity, at_zero });
    }
    lines.finish()?;
    if n == 0 {
        return Ok(Triple::zero(geometry, f));
    }
    Triple::new(geometry, f, splittings, nodes)
}

/// Field header of the output field, then one band per line.
pub fn write_decomposition(d: &Decomposition) -> String {
    let mut out = field_header(&d.field);
    out.push('\n');
    for b in &d.bands {
        out += &band_line(&d.field, b);
        out.push('\n');
    }
    out
}
