//! Terms over declared variables, equations and equation sets.
//!
//! Text syntax is prefix application: `and(x, or(y, one()))`. Bare identifiers
//! are variables and must be declared; nullary symbols carry empty parentheses.

use std::fmt;

use crate::algebra::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// Index into the owning equation's variable list.
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    /// Number of application nodes.
    pub fn applications(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::applications).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(_, args) => args.iter().filter_map(Term::max_var).max(),
        }
    }

    /// Every (symbol, arity) pair used, in first-occurrence order.
    pub fn symbols(&self, out: &mut Vec<(String, usize)>) {
        if let Term::App(s, args) = self {
            if !out.iter().any(|(n, a)| n == s && *a == args.len()) {
                out.push((s.clone(), args.len()));
            }
            for a in args {
                a.symbols(out);
            }
        }
    }

    pub fn display<'a>(&'a self, vars: &'a [String]) -> TermDisplay<'a> {
        TermDisplay { term: self, vars }
    }

    /// Parses `text` against the declared variable names.
    pub fn parse(text: &str, vars: &[String]) -> Result<Term, TermParseError> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(t)
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    vars: &'a [String],
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => match self.vars.get(*v) {
                Some(name) => write!(f, "{name}"),
                None => write!(f, "?{v}"),
            },
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", a.display(self.vars))?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Parse failure inside a single term; `offset` is a byte offset into the term text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for TermParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> TermParseError {
        TermParseError { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String, TermParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
        } else {
            Err(self.error("expected identifier"))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn term(&mut self) -> Result<Term, TermParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let name = self.ident()?;
        if self.peek() != Some(b'(') {
            return match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(Term::Var(i)),
                None => Err(TermParseError {
                    offset: start,
                    message: format!("undeclared variable `{name}`"),
                }),
            };
        }
        self.pos += 1;
        let mut args = Vec::new();
        if self.peek() == Some(b')') {
            self.pos += 1;
            return Ok(Term::App(name, args));
        }
        loop {
            args.push(self.term()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(Term::App(name, args));
                }
                _ => return Err(self.error("expected `,` or `)`")),
            }
        }
    }
}

/// `lhs ≈ rhs`, quantified over exactly `vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub vars: Vec<String>,
    /// Free-form tag grouping equations that came from one law.
    pub label: String,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term, vars: Vec<String>) -> Result<Self, String> {
        Self::labeled(lhs, rhs, vars, "")
    }

    pub fn labeled(
        lhs: Term,
        rhs: Term,
        vars: Vec<String>,
        label: impl Into<String>,
    ) -> Result<Self, String> {
        for v in &vars {
            if !is_identifier(v) {
                return Err(format!("invalid variable name `{v}`"));
            }
        }
        let used = lhs.max_var().into_iter().chain(rhs.max_var()).max();
        if let Some(m) = used {
            if m >= vars.len() {
                return Err(format!("variable #{m} is not declared"));
            }
        }
        Ok(Equation { lhs, rhs, vars, label: label.into() })
    }

    /// Parses `lhs = rhs` against `vars`.
    pub fn parse(text: &str, vars: &[String]) -> Result<Self, TermParseError> {
        let eq = text.find('=').ok_or(TermParseError {
            offset: text.len(),
            message: "expected `=`".into(),
        })?;
        let lhs = Term::parse(&text[..eq], vars)?;
        let rhs = Term::parse(&text[eq + 1..], vars).map_err(|mut e| {
            e.offset += eq + 1;
            e
        })?;
        Ok(Equation { lhs, rhs, vars: vars.to_vec(), label: String::new() })
    }

    pub fn symbols(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        self.lhs.symbols(&mut out);
        self.rhs.symbols(&mut out);
        out
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs.display(&self.vars), self.rhs.display(&self.vars))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSet {
    pub name: String,
    pub equations: Vec<Equation>,
}

impl EquationSet {
    pub fn new(name: impl Into<String>, equations: Vec<Equation>) -> Self {
        EquationSet { name: name.into(), equations }
    }

    /// Distinct labels in order; one per law as originally stated.
    pub fn laws(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for e in &self.equations {
            if !out.contains(&e.label.as_str()) {
                out.push(&e.label);
            }
        }
        out
    }

    pub fn symbols(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for e in &self.equations {
            for s in e.symbols() {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }
}
