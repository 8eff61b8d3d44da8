//! Text formats for algebras and equation sets.
//!
//! Algebra files hold any number of blocks:
//!
//! ```text
//! algebra B
//! elements b1 b2
//! op zero/0 = b1
//! op and/2 = b1 b1 b1 b2   # row-major, leftmost argument most significant
//! end
//! ```
//!
//! Equation files declare variables and then list equations:
//!
//! ```text
//! vars x y
//! eq and(x, y) = and(y, x)
//! ```
//!
//! A `#` starts a comment. Line and column numbers in errors are 1-based.

use std::fmt::Write as _;

use crate::algebra::{is_identifier, table_len, validate_algebra, FiniteAlgebra, RawAlgebra, RawOperation};
use crate::error::ParseError;
use crate::term::{Equation, EquationSet, Term};

type Parsed<T> = std::result::Result<T, ParseError>;

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

/// Whitespace-separated tokens with their 1-based columns, comment stripped.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn identifier(line: usize, (col, tok): (usize, &str), what: &str) -> Parsed<String> {
    if is_identifier(tok) {
        Ok(tok.to_string())
    } else {
        Err(err(line, col, format!("invalid {what} `{tok}`")))
    }
}

struct Block {
    raw: RawAlgebra,
    line: usize,
    has_elements: bool,
}

/// Parses and validates every algebra block in `text`.
pub fn parse_algebra_file(text: &str) -> Parsed<Vec<FiniteAlgebra>> {
    let mut out = Vec::new();
    let mut current: Option<Block> = None;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let toks = tokens(line);
        let Some(&(col, keyword)) = toks.first() else { continue };
        match keyword {
            "algebra" => {
                if current.is_some() {
                    return Err(err(ln, col, "`algebra` inside an unterminated block"));
                }
                if toks.len() != 2 {
                    return Err(err(ln, col, "expected `algebra <name>`"));
                }
                let name = identifier(ln, toks[1], "algebra name")?;
                if out.iter().any(|a: &FiniteAlgebra| a.name() == name) {
                    return Err(err(ln, toks[1].0, format!("duplicate algebra `{name}`")));
                }
                current = Some(Block { raw: RawAlgebra { name, ..Default::default() }, line: ln, has_elements: false });
            }
            "elements" => {
                let block = current.as_mut().ok_or_else(|| err(ln, col, "`elements` outside a block"))?;
                if block.has_elements {
                    return Err(err(ln, col, "second `elements` line"));
                }
                for &t in &toks[1..] {
                    let e = identifier(ln, t, "element")?;
                    if block.raw.carrier.contains(&e) {
                        return Err(err(ln, t.0, format!("duplicate element `{e}`")));
                    }
                    block.raw.carrier.push(e);
                }
                if block.raw.carrier.is_empty() {
                    return Err(err(ln, col, "empty carrier"));
                }
                block.has_elements = true;
            }
            "op" => {
                let block = current.as_mut().ok_or_else(|| err(ln, col, "`op` outside a block"))?;
                if !block.has_elements {
                    return Err(err(ln, col, "`op` before `elements`"));
                }
                let op = parse_op(ln, &toks, &block.raw)?;
                block.raw.operations.push(op);
            }
            "end" => {
                let block = current.take().ok_or_else(|| err(ln, col, "`end` outside a block"))?;
                if toks.len() != 1 {
                    return Err(err(ln, toks[1].0, "unexpected token after `end`"));
                }
                if !block.has_elements {
                    return Err(err(ln, col, "block has no `elements` line"));
                }
                let alg = validate_algebra(&block.raw).map_err(|r| err(block.line, 1, r.to_string()))?;
                out.push(alg);
            }
            other => return Err(err(ln, col, format!("unknown keyword `{other}`"))),
        }
    }
    if let Some(block) = current {
        return Err(err(block.line, 1, format!("algebra `{}` is missing `end`", block.raw.name)));
    }
    Ok(out)
}

fn parse_op(ln: usize, toks: &[(usize, &str)], raw: &RawAlgebra) -> Parsed<RawOperation> {
    let col = toks[0].0;
    let &(scol, decl) = toks.get(1).ok_or_else(|| err(ln, col, "expected `op <name>/<arity> = …`"))?;
    let (name, arity) = decl.split_once('/').ok_or_else(|| err(ln, scol, "expected `<name>/<arity>`"))?;
    if !is_identifier(name) {
        return Err(err(ln, scol, format!("invalid symbol `{name}`")));
    }
    let arity: usize = arity.parse().map_err(|_| err(ln, scol + name.len() + 1, format!("invalid arity `{arity}`")))?;
    if raw.operations.iter().any(|o| o.name == name) {
        return Err(err(ln, scol, format!("duplicate symbol `{name}`")));
    }
    match toks.get(2) {
        Some(&(_, "=")) => {}
        Some(&(c, t)) => return Err(err(ln, c, format!("expected `=`, found `{t}`"))),
        None => return Err(err(ln, scol + decl.len(), "expected `=`")),
    }
    let values = &toks[3..];
    let expected = table_len(raw.carrier.len(), arity);
    if values.len() != expected {
        let c = values.first().map_or(toks[2].0, |v| v.0);
        return Err(err(ln, c, format!("expected {expected} values, found {}", values.len())));
    }
    for &(c, v) in values {
        if !raw.carrier.iter().any(|e| e == v) {
            return Err(err(ln, c, format!("unknown element `{v}`")));
        }
    }
    Ok(RawOperation { name: name.to_string(), arity, values: values.iter().map(|v| v.1.to_string()).collect() })
}

pub fn serialize_algebra(alg: &FiniteAlgebra) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "algebra {}", alg.name());
    let _ = writeln!(s, "elements {}", alg.carrier().join(" "));
    for (si, sym) in alg.signature().symbols().iter().enumerate() {
        let vals: Vec<&str> = alg.table(si).iter().map(|&v| alg.element(v)).collect();
        let _ = writeln!(s, "op {}/{} = {}", sym.name, sym.arity, vals.join(" "));
    }
    s.push_str("end\n");
    s
}

/// Blocks separated by a blank line.
pub fn serialize_algebras<'a>(algs: impl IntoIterator<Item = &'a FiniteAlgebra>) -> String {
    algs.into_iter().map(serialize_algebra).collect::<Vec<_>>().join("\n")
}

/// Parses an equation file; each `vars` line applies to the `eq` lines after it.
pub fn parse_equation_file(text: &str, name: &str) -> Parsed<EquationSet> {
    let mut vars: Option<Vec<String>> = None;
    let mut equations = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let body = line.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.len() - trimmed.len();
        let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed.trim_end(), ""));
        match kw {
            "vars" => {
                let toks = tokens(rest);
                let offset = indent + kw.len() + 1;
                let mut declared = Vec::new();
                for (c, t) in toks {
                    let v = identifier(ln, (c + offset, t), "variable")?;
                    if declared.contains(&v) {
                        return Err(err(ln, c + offset, format!("duplicate variable `{v}`")));
                    }
                    declared.push(v);
                }
                vars = Some(declared);
            }
            "eq" => {
                let declared = vars.as_deref().unwrap_or(&[]);
                let offset = indent + kw.len() + 1;
                let eq = Equation::parse(rest, declared)
                    .map_err(|e| err(ln, offset + e.offset + 1, e.message))?;
                equations.push(eq);
            }
            other => return Err(err(ln, indent + 1, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(EquationSet::new(name, equations))
}

pub fn serialize_equations(eqs: &EquationSet) -> String {
    let mut s = String::new();
    let mut current: Option<&[String]> = None;
    for e in &eqs.equations {
        if current != Some(e.vars.as_slice()) {
            let _ = writeln!(s, "vars {}", e.vars.join(" "));
            current = Some(&e.vars);
        }
        let _ = writeln!(s, "eq {e}");
    }
    s
}

/// Parses a single term against declared variable names (for the `eval` command).
pub fn parse_term(text: &str, vars: &[String]) -> Parsed<Term> {
    Term::parse(text, vars).map_err(|e| err(1, e.offset + 1, e.message))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::presets::preset;

    #[test]
    fn empty_and_comment_only_files() {
        assert!(parse_algebra_file("").unwrap().is_empty());
        assert!(parse_algebra_file("# nothing\n\n").unwrap().is_empty());
    }

    #[test]
    fn round_trip_fixtures() {
        let algs = [boolean2(), boolean4(), lattice2(), z2()];
        let text = serialize_algebras(&algs);
        assert_eq!(parse_algebra_file(&text).unwrap(), algs);
    }

    #[test]
    fn short_table() {
        let text = "algebra B\nelements b1 b2\nop and/2 = b1 b1 b1\nend\n";
        let e = parse_algebra_file(text).unwrap_err();
        assert_eq!((e.line, e.message.as_str()), (3, "expected 4 values, found 3"));
    }

    #[test]
    fn positioned_errors() {
        let cases = [
            ("algebra B\nelements b1 b1\nend\n", 2, 13, "duplicate element"),
            ("algebra B\nelements b1\nop f/1 = b2\nend\n", 3, 10, "unknown element"),
            ("algebra B\nelements b1\nop f/x = b1\nend\n", 3, 6, "invalid arity"),
            ("algebra B\nelements b1\n", 1, 1, "missing `end`"),
            ("algebra B\nop f/0 = b1\nend\n", 2, 1, "before `elements`"),
            ("frobnicate\n", 1, 1, "unknown keyword"),
            ("algebra 9B\n", 1, 9, "invalid algebra name"),
            ("algebra B\nelements b1\nop f/0 b1\nend\n", 3, 8, "expected `=`"),
            ("algebra B\nelements b1\nop f/0 = b1\nop f/1 = b1\nend\n", 4, 4, "duplicate symbol"),
            ("algebra B\nelements b1\nend\nalgebra B\nelements c\nend\n", 4, 9, "duplicate algebra"),
        ];
        for (text, line, column, msg) in cases {
            let e = parse_algebra_file(text).unwrap_err();
            assert_eq!((e.line, e.column), (line, column), "{text:?}: {e}");
            assert!(e.message.contains(msg), "{text:?}: {e}");
        }
    }

    #[test]
    fn equations_round_trip() {
        for name in ["group", "boolean-algebra", "vector-space(3)"] {
            let eqs = preset(name).unwrap();
            let back = parse_equation_file(&serialize_equations(&eqs), name).unwrap();
            let strip = |s: &EquationSet| s.equations.iter().map(|e| (e.to_string(), e.vars.clone())).collect::<Vec<_>>();
            assert_eq!(strip(&back), strip(&eqs));
        }
    }

    #[test]
    fn equation_errors() {
        let e = parse_equation_file("vars x\neq f(x, y) = x\n", "t").unwrap_err();
        assert_eq!((e.line, e.column), (2, 9));
        assert!(parse_equation_file("eq x = x\n", "t").is_err());
        assert!(parse_equation_file("vars x x\n", "t").is_err());
        assert!(parse_equation_file("law x\n", "t").is_err());
        assert!(parse_equation_file("", "t").unwrap().equations.is_empty());
    }
}
