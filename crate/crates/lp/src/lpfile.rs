//! Reading and writing the CPLEX LP text format (minimization subset).
//!
//! Supported: `Minimize`, `Subject To`, `Bounds` and `End` sections, `<=`,
//! `=`, `>=` rows, explicit bounds including `free` and `-inf`. Output is
//! deterministic: variables in index order, one bound line per variable
//! whose bounds differ from the format default `[0, +inf)`.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::{LpError, LpInstance, Sense};

const TERMS_PER_LINE: usize = 8;

/// Maps arbitrary labels onto names the LP format accepts.
pub fn sanitize_name(label: &str) -> String {
    let mut s: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '_' })
        .collect();
    let needs_prefix = match s.chars().next() {
        None => true,
        Some(c) => c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E',
    };
    if needs_prefix {
        s.insert(0, '_');
    }
    s
}

fn unique_names(count: usize, label: impl Fn(usize) -> Option<String>, fallback: &str) -> Vec<String> {
    let mut seen = HashSet::with_capacity(count);
    (0..count)
        .map(|j| {
            let base = sanitize_name(&label(j).unwrap_or_else(|| format!("{fallback}{j}")));
            let name = if seen.contains(&base) { format!("{base}_{j}") } else { base };
            seen.insert(name.clone());
            name
        })
        .collect()
}

/// Variable names as they appear in written LP files.
pub fn variable_names(lp: &LpInstance) -> Vec<String> {
    unique_names(lp.num_vars(), |j| lp.var_name(j).map(str::to_owned), "x")
}

fn fmt_num(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

fn write_terms(out: &mut String, terms: impl Iterator<Item = (f64, String)>) {
    for (k, (a, name)) in terms.enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if a.is_sign_negative() { '-' } else { '+' };
        let _ = write!(out, " {sign} {} {name}", fmt_num(a.abs()));
    }
}

/// Renders `lp` as an LP-format document.
pub fn write_lp(lp: &LpInstance) -> String {
    let names = variable_names(lp);
    let row_names = unique_names(lp.num_rows(), |i| lp.rows()[i].name.clone(), "c");
    let mut out = String::new();
    out.push_str("\\ swc-lp interchange\nMinimize\n obj:");
    write_terms(&mut out, lp.cost().iter().zip(&names).map(|(&c, n)| (c, n.clone())));
    out.push_str("\nSubject To\n");
    for (row, rname) in lp.rows().iter().zip(&row_names) {
        let _ = write!(out, " {rname}:");
        if row.coeffs.is_empty() && !names.is_empty() {
            let _ = write!(out, " + 0 {}", names[0]);
        }
        write_terms(&mut out, row.coeffs.iter().map(|&(j, a)| (a, names[j].clone())));
        let _ = writeln!(out, " {} {}", row.sense.symbol(), fmt_num(row.rhs));
    }
    out.push_str("Bounds\n");
    for (j, name) in names.iter().enumerate() {
        let (l, u) = (lp.lower()[j], lp.upper()[j]);
        if l == 0.0 && u == f64::INFINITY {
            continue;
        }
        if l == f64::NEG_INFINITY && u == f64::INFINITY {
            let _ = writeln!(out, " {name} free");
        } else if l == u {
            let _ = writeln!(out, " {name} = {}", fmt_num(l));
        } else if u == f64::INFINITY {
            let _ = writeln!(out, " {name} >= {}", fmt_num(l));
        } else {
            let _ = writeln!(out, " {} <= {name} <= {}", fmt_num(l), fmt_num(u));
        }
    }
    out.push_str("End\n");
    out
}

pub fn write_lp_file(lp: &LpInstance, path: impl AsRef<Path>) -> Result<(), LpError> {
    std::fs::write(path, write_lp(lp))?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Colon,
    Cmp(Sense),
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Tok>, LpError> {
    let err = |message: String| LpError::Parse { line: lineno, message };
    let b = line.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        match c {
            ' ' | '\t' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1
            }
            ':' => {
                toks.push(Tok::Colon);
                i += 1
            }
            '<' | '>' | '=' => {
                let next = b.get(i + 1).map(|&x| x as char);
                let (sense, len) = match (c, next) {
                    ('<', Some('=')) | ('=', Some('<')) => (Sense::Le, 2),
                    ('>', Some('=')) | ('=', Some('>')) => (Sense::Ge, 2),
                    ('<', _) => (Sense::Le, 1),
                    ('>', _) => (Sense::Ge, 1),
                    _ => (Sense::Eq, 1),
                };
                toks.push(Tok::Cmp(sense));
                i += len;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < b.len() && ((b[i] as char).is_ascii_digit() || b[i] == b'.') {
                    i += 1;
                }
                if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                    let mut k = i + 1;
                    if k < b.len() && (b[k] == b'+' || b[k] == b'-') {
                        k += 1;
                    }
                    if k < b.len() && (b[k] as char).is_ascii_digit() {
                        while k < b.len() && (b[k] as char).is_ascii_digit() {
                            k += 1;
                        }
                        i = k;
                    }
                }
                let text = &line[start..i];
                let v: f64 = text.parse().map_err(|_| err(format!("bad number `{text}`")))?;
                toks.push(Tok::Num(v));
            }
            c if c.is_ascii_alphabetic() || "_!\"#$%&()/,;?@`'{}|~[]".contains(c) => {
                let start = i;
                while i < b.len() {
                    let ch = b[i] as char;
                    if ch.is_ascii_alphanumeric() || "_.!\"#$%&()/,;?@`'{}|~[]".contains(ch) {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let word = &line[start..i];
                let lw = word.to_ascii_lowercase();
                if lw == "inf" || lw == "infinity" {
                    toks.push(Tok::Num(f64::INFINITY));
                } else {
                    toks.push(Tok::Ident(word.to_owned()));
                }
            }
            _ => return Err(err(format!("unexpected character `{c}`"))),
        }
    }
    Ok(toks)
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    End,
}

fn section_keyword(line: &str) -> Option<(Section, &str)> {
    let trimmed = line.trim_start();
    let lower = trimmed.to_ascii_lowercase();
    for (kw, sec) in [
        ("minimize", Section::Objective),
        ("minimise", Section::Objective),
        ("minimum", Section::Objective),
        ("min", Section::Objective),
        ("subject to", Section::Constraints),
        ("such that", Section::Constraints),
        ("s.t.", Section::Constraints),
        ("st", Section::Constraints),
        ("bounds", Section::Bounds),
        ("bound", Section::Bounds),
        ("end", Section::End),
    ] {
        if lower.starts_with(kw) {
            let rest = &trimmed[kw.len()..];
            // keyword must stand alone (not a prefix of a name like `stock:`)
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                return Some((sec, rest));
            }
        }
    }
    if lower.starts_with("max") {
        return Some((Section::End, "max"));
    }
    None
}

struct Builder {
    lp: LpInstance,
    index: HashMap<String, usize>,
}

impl Builder {
    fn var(&mut self, name: &str) -> usize {
        if let Some(&j) = self.index.get(name) {
            return j;
        }
        let j = self.lp.add_named_var(name, 0.0, f64::INFINITY, 0.0);
        self.index.insert(name.to_owned(), j);
        j
    }
}

/// Parses a linear expression `[+|-] [coef] name ...` from `toks[*pos..]`,
/// stopping at a comparison operator or the end of the slice.
fn parse_expr(
    b: &mut Builder,
    toks: &[Tok],
    pos: &mut usize,
    line: usize,
) -> Result<Vec<(usize, f64)>, LpError> {
    let mut terms = Vec::new();
    while *pos < toks.len() {
        if matches!(toks[*pos], Tok::Cmp(_)) {
            break;
        }
        let mut sign = 1.0;
        while let Some(t @ (Tok::Plus | Tok::Minus)) = toks.get(*pos) {
            if *t == Tok::Minus {
                sign = -sign;
            }
            *pos += 1;
        }
        let mut coef = 1.0;
        if let Some(Tok::Num(v)) = toks.get(*pos) {
            coef = *v;
            *pos += 1;
        }
        match toks.get(*pos) {
            Some(Tok::Ident(name)) => {
                let j = b.var(name);
                terms.push((j, sign * coef));
                *pos += 1;
            }
            other => {
                return Err(LpError::Parse { line, message: format!("expected variable name, found {other:?}") })
            }
        }
    }
    Ok(terms)
}

fn parse_signed_number(toks: &[Tok], pos: &mut usize, line: usize) -> Result<f64, LpError> {
    let mut sign = 1.0;
    while let Some(t @ (Tok::Plus | Tok::Minus)) = toks.get(*pos) {
        if *t == Tok::Minus {
            sign = -sign;
        }
        *pos += 1;
    }
    match toks.get(*pos) {
        Some(Tok::Num(v)) => {
            *pos += 1;
            Ok(sign * v)
        }
        other => Err(LpError::Parse { line, message: format!("expected number, found {other:?}") }),
    }
}

/// Splits an optional leading `name :` label off a token list.
fn take_label(toks: &[Tok]) -> (Option<String>, usize) {
    match (toks.first(), toks.get(1)) {
        (Some(Tok::Ident(n)), Some(Tok::Colon)) => (Some(n.clone()), 2),
        _ => (None, 0),
    }
}

fn parse_bound(b: &mut Builder, toks: &[Tok], line: usize) -> Result<(), LpError> {
    let bad = |m: &str| LpError::Parse { line, message: m.to_owned() };
    // `name free`
    if let [Tok::Ident(name), Tok::Ident(kw)] = toks {
        if kw.eq_ignore_ascii_case("free") {
            let j = b.var(name);
            b.lp.set_bounds(j, f64::NEG_INFINITY, f64::INFINITY);
            return Ok(());
        }
    }
    let mut pos = 0;
    if let Some(Tok::Ident(name)) = toks.first() {
        // `name op value`
        let j = b.var(name);
        pos += 1;
        let Some(Tok::Cmp(sense)) = toks.get(pos) else { return Err(bad("expected comparison")) };
        pos += 1;
        let v = parse_signed_number(toks, &mut pos, line)?;
        let (l, u) = (b.lp.lower()[j], b.lp.upper()[j]);
        match sense {
            Sense::Le => b.lp.set_bounds(j, if v < 0.0 && l == 0.0 { f64::NEG_INFINITY } else { l }, v),
            Sense::Ge => b.lp.set_bounds(j, v, u),
            Sense::Eq => b.lp.set_bounds(j, v, v),
        }
        return if pos == toks.len() { Ok(()) } else { Err(bad("trailing tokens in bound")) };
    }
    // `value op name [op value]`
    let v1 = parse_signed_number(toks, &mut pos, line)?;
    let Some(Tok::Cmp(s1)) = toks.get(pos) else { return Err(bad("expected comparison")) };
    pos += 1;
    let Some(Tok::Ident(name)) = toks.get(pos) else { return Err(bad("expected variable name")) };
    pos += 1;
    let j = b.var(name);
    let (mut l, mut u) = (b.lp.lower()[j], b.lp.upper()[j]);
    match s1 {
        Sense::Le => l = v1,
        Sense::Ge => u = v1,
        Sense::Eq => {
            l = v1;
            u = v1;
        }
    }
    if let Some(Tok::Cmp(s2)) = toks.get(pos) {
        pos += 1;
        let v2 = parse_signed_number(toks, &mut pos, line)?;
        match s2 {
            Sense::Le => u = v2,
            Sense::Ge => l = v2,
            Sense::Eq => {
                l = v2;
                u = v2;
            }
        }
    }
    if pos != toks.len() {
        return Err(bad("trailing tokens in bound"));
    }
    b.lp.set_bounds(j, l, u);
    Ok(())
}

/// Parses an LP-format document into an instance. Variables are numbered
/// in order of first appearance.
pub fn parse_lp(text: &str) -> Result<LpInstance, LpError> {
    let mut b = Builder { lp: LpInstance::new(), index: HashMap::new() };
    let mut section = Section::Preamble;
    let mut pending: Vec<Tok> = Vec::new();
    let mut pending_line = 0;
    let mut objective: Vec<(usize, f64)> = Vec::new();

    let flush_row = |b: &mut Builder, toks: &[Tok], line: usize| -> Result<(), LpError> {
        let (name, mut pos) = take_label(toks);
        let coeffs = parse_expr(b, toks, &mut pos, line)?;
        let Some(Tok::Cmp(sense)) = toks.get(pos) else {
            return Err(LpError::Parse { line, message: "constraint without comparison".into() });
        };
        pos += 1;
        let rhs = parse_signed_number(toks, &mut pos, line)?;
        if pos != toks.len() {
            return Err(LpError::Parse { line, message: "trailing tokens after right-hand side".into() });
        }
        match name {
            Some(n) => b.lp.add_named_row(n, coeffs, *sense, rhs),
            None => b.lp.add_row(coeffs, *sense, rhs),
        };
        Ok(())
    };

    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = match raw.find('\\') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut body = line;
        if let Some((sec, rest)) = section_keyword(line) {
            if rest == "max" {
                return Err(LpError::Parse { line: lineno, message: "only minimization is supported".into() });
            }
            if section == Section::Constraints && !pending.is_empty() {
                flush_row(&mut b, &pending, pending_line)?;
                pending.clear();
            }
            section = sec;
            body = rest;
            if body.trim().is_empty() {
                continue;
            }
        }
        let toks = tokenize(body, lineno)?;
        match section {
            Section::Preamble => {
                return Err(LpError::Parse { line: lineno, message: "content before objective section".into() })
            }
            Section::Objective => {
                let (_, start) = if objective.is_empty() && pending.is_empty() { take_label(&toks) } else { (None, 0) };
                pending.extend_from_slice(&toks[start..]);
                let mut pos = 0;
                let terms = parse_expr(&mut b, &pending, &mut pos, lineno)?;
                objective.extend(terms);
                pending.clear();
            }
            Section::Constraints => {
                // A row is complete once a comparison and its right-hand side are seen.
                if pending.is_empty() {
                    pending_line = lineno;
                }
                pending.extend(toks);
                if let Some(cmp) = pending.iter().position(|t| matches!(t, Tok::Cmp(_))) {
                    if pending[cmp + 1..].iter().any(|t| matches!(t, Tok::Num(_))) {
                        flush_row(&mut b, &pending, pending_line)?;
                        pending.clear();
                    }
                }
            }
            Section::Bounds => parse_bound(&mut b, &toks, lineno)?,
            Section::End => break,
        }
    }
    if !pending.is_empty() {
        return Err(LpError::Parse { line: pending_line, message: "unterminated constraint".into() });
    }
    for (j, c) in objective {
        let cur = b.lp.cost()[j];
        b.lp.set_cost(j, cur + c);
    }
    Ok(b.lp)
}

pub fn read_lp_file(path: impl AsRef<Path>) -> Result<LpInstance, LpError> {
    parse_lp(&std::fs::read_to_string(path)?)
}
