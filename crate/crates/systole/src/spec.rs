//! The form-spec mini-language.
//!
//! ```text
//! spec  := term ("+" term)*
//! term  := ["-"] [count] atom
//! atom  := "H" | "E8" | "I(" p "," q ")" | "(" d ("," d)* ")" | "M[" row ("," row)* "]"
//! row   := "[" int ("," int)* "]"
//! ```
//!
//! `count` binds tighter than `+`, so `2H + -E8` is `H ⊕ H ⊕ (-E8)`.
//! Whitespace is allowed between tokens.

use std::fmt;

use systole_core::quadform::{build_diagonal, build_diagonal_entries, build_e8, build_h, direct_sum, negate, E8Sign, GramMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    H,
    E8,
    I(usize, usize),
    Diagonal(Vec<i64>),
    Matrix(Vec<Vec<i64>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub negated: bool,
    pub count: usize,
    pub atom: Atom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSpec {
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn unsigned(&mut self) -> Result<usize, ParseError> {
        let at = self.pos;
        match self.digits() {
            Some(d) => d.parse().map_err(|_| ParseError { position: at, message: "number too large".into() }),
            None => self.err("expected a nonnegative integer"),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat(b'-');
        let at = self.pos;
        let Some(d) = self.digits() else { return self.err("expected an integer") };
        let text = if neg { format!("-{d}") } else { d.to_string() };
        text.parse().map_err(|_| ParseError { position: at, message: "integer out of range".into() })
    }

    fn int_list(&mut self, open: u8, close: u8) -> Result<Vec<i64>, ParseError> {
        self.expect(open)?;
        let mut out = vec![self.integer()?];
        while self.eat(b',') {
            out.push(self.integer()?);
        }
        self.expect(close)?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.peek() {
            Some(b'H') => {
                self.pos += 1;
                Ok(Atom::H)
            }
            Some(b'E') => {
                self.pos += 1;
                if self.src.get(self.pos) == Some(&b'8') {
                    self.pos += 1;
                    Ok(Atom::E8)
                } else {
                    self.err("expected 'E8'")
                }
            }
            Some(b'I') => {
                self.pos += 1;
                self.expect(b'(')?;
                let p = self.unsigned()?;
                self.expect(b',')?;
                let q = self.unsigned()?;
                self.expect(b')')?;
                if p + q == 0 {
                    return self.err("I(0,0) is empty");
                }
                Ok(Atom::I(p, q))
            }
            Some(b'(') => Ok(Atom::Diagonal(self.int_list(b'(', b')')?)),
            Some(b'M') => {
                self.pos += 1;
                self.expect(b'[')?;
                let start = self.pos;
                let mut rows = vec![self.int_list(b'[', b']')?];
                while self.eat(b',') {
                    rows.push(self.int_list(b'[', b']')?);
                }
                self.expect(b']')?;
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(ParseError { position: start, message: "matrix must be square".into() });
                }
                if (0..n).any(|i| (0..i).any(|j| rows[i][j] != rows[j][i])) {
                    return Err(ParseError { position: start, message: "matrix must be symmetric".into() });
                }
                Ok(Atom::Matrix(rows))
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let negated = self.eat(b'-');
        let count = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let at = self.pos;
            let c = self.unsigned()?;
            if c == 0 {
                return Err(ParseError { position: at, message: "multiplicity must be positive".into() });
            }
            c
        } else {
            1
        };
        Ok(Term { negated, count, atom: self.atom()? })
    }
}

impl FormSpec {
    pub fn parse(src: &str) -> Result<FormSpec, ParseError> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let mut terms = vec![p.term()?];
        while p.eat(b'+') {
            terms.push(p.term()?);
        }
        if p.peek().is_some() {
            return p.err("expected '+' or end of input");
        }
        Ok(FormSpec { terms })
    }

    pub fn build(&self) -> Result<GramMatrix, systole_core::Error> {
        let mut acc: Option<GramMatrix> = None;
        for t in &self.terms {
            let base = match &t.atom {
                Atom::H => build_h(),
                Atom::E8 => build_e8(E8Sign::Positive),
                Atom::I(p, q) => build_diagonal(*p, *q)?,
                Atom::Diagonal(d) => build_diagonal_entries(d)?,
                Atom::Matrix(rows) => GramMatrix::from_rows(rows)?,
            };
            let base = if t.negated { negate(&base) } else { base };
            for _ in 0..t.count {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => direct_sum(&a, &base),
                });
            }
        }
        Ok(acc.expect("at least one term"))
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::H => f.write_str("H"),
            Atom::E8 => f.write_str("E8"),
            Atom::I(p, q) => write!(f, "I({p},{q})"),
            Atom::Diagonal(d) => write!(f, "({})", join(d)),
            Atom::Matrix(rows) => {
                let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", join(r))).collect();
                write!(f, "M[{}]", rows.join(","))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("-")?;
        }
        if self.count != 1 {
            write!(f, "{}", self.count)?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms.iter().map(Term::to_string).collect();
        f.write_str(&terms.join(" + "))
    }
}
