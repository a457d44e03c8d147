//! Text format for polynomial systems.
//!
//! ```text
//! # comments run to the end of the line
//! vars x1 x2;
//! x1^2 - 2*x1*x2 + 5;
//! 3*x2^2 - 8*x1*x2;
//! ```
//!
//! A `vars` declaration binds the variables in order; each following
//! `;`-terminated statement is one generator built from `+`, `-`, `*`, `^`,
//! integer/decimal literals and declared variables. Implicit multiplication
//! is a syntax error.

use std::fmt;

use realvar_core::poly::Monomial;
use realvar_core::{PolySystem, Polynomial};

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Plus,
    Minus,
    Star,
    Caret,
    Semi,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            match c {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.bump();
                }
                b'#' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.bump();
                    }
                }
                b'+' => out.push(self.one(Tok::Plus)),
                b'-' => out.push(self.one(Tok::Minus)),
                b'*' => out.push(self.one(Tok::Star)),
                b'^' => out.push(self.one(Tok::Caret)),
                b';' => out.push(self.one(Tok::Semi)),
                b'0'..=b'9' | b'.' => out.push(self.number()?),
                c if c.is_ascii_alphabetic() || c == b'_' => out.push(self.ident()),
                other => {
                    return Err(self.error(format!("unexpected character '{}'", other as char)))
                }
            }
        }
        Ok(out)
    }

    fn one(&mut self, t: Tok) -> Spanned {
        let (l, c) = (self.line, self.col);
        self.bump();
        (t, l, c)
    }

    fn number(&mut self) -> Result<Spanned, ParseError> {
        let (l, c) = (self.line, self.col);
        let start = self.pos;
        let mut seen_dot = false;
        let mut seen_exp = false;
        while self.pos < self.src.len() {
            let ch = self.src[self.pos];
            match ch {
                b'0'..=b'9' => {
                    self.bump();
                }
                b'.' if !seen_dot && !seen_exp => {
                    seen_dot = true;
                    self.bump();
                }
                b'e' | b'E' if !seen_exp => {
                    seen_exp = true;
                    self.bump();
                    if self.pos < self.src.len()
                        && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
                    {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(format!("bad numeric literal '{}'", text)))?;
        Ok((Tok::Number(value), l, c))
    }

    fn ident(&mut self) -> Spanned {
        let (l, c) = (self.line, self.col);
        let start = self.pos;
        while self.pos < self.src.len() {
            let ch = self.src[self.pos];
            if ch.is_ascii_alphanumeric() || ch == b'_' {
                self.bump();
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        (Tok::Ident(text), l, c)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    vars: Vec<String>,
}

impl Parser {
    fn error_at(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or_else(|| {
                self.toks
                    .last()
                    .map(|&(_, l, c)| (l, c + 1))
                    .unwrap_or((1, 1))
            });
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_semi(&mut self) -> Result<(), ParseError> {
        match self.next() {
            Some(Tok::Semi) => Ok(()),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error_at("expected ';'"))
            }
        }
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    // polynomial := ['-'] term (('+'|'-') term)*
    fn polynomial(&mut self) -> Result<Polynomial, ParseError> {
        let n = self.vars.len();
        let mut acc = Polynomial::zero(n);
        let mut sign = 1.0;
        match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                sign = -1.0;
            }
            Some(Tok::Plus) => {
                self.next();
            }
            _ => {}
        }
        loop {
            let term = self.term(sign)?;
            acc = acc.add(&term);
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    sign = 1.0;
                }
                Some(Tok::Minus) => {
                    self.next();
                    sign = -1.0;
                }
                Some(Tok::Semi) | None => return Ok(acc),
                _ => return Err(self.error_at("expected '+', '-' or ';'")),
            }
        }
    }

    // term := factor ('*' factor)*
    fn term(&mut self, sign: f64) -> Result<Polynomial, ParseError> {
        let n = self.vars.len();
        let mut coeff = sign;
        let mut exps = vec![0u32; n];
        self.factor(&mut coeff, &mut exps)?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.next();
            self.factor(&mut coeff, &mut exps)?;
        }
        Ok(Polynomial::monomial(Monomial::new(exps), coeff))
    }

    // factor := number | var ('^' int)?
    fn factor(&mut self, coeff: &mut f64, exps: &mut [u32]) -> Result<(), ParseError> {
        match self.next() {
            Some(Tok::Number(v)) => {
                *coeff *= v;
                Ok(())
            }
            Some(Tok::Ident(name)) => {
                let idx = self.var_index(&name).ok_or_else(|| {
                    self.pos = self.pos.saturating_sub(1);
                    self.error_at(format!("undeclared variable '{}'", name))
                })?;
                let mut power = 1u32;
                if matches!(self.peek(), Some(Tok::Caret)) {
                    self.next();
                    match self.next() {
                        Some(Tok::Number(v)) => {
                            if v.fract() != 0.0 || v < 0.0 || v > u32::MAX as f64 {
                                self.pos = self.pos.saturating_sub(1);
                                return Err(self.error_at("exponent must be a non-negative integer"));
                            }
                            power = v as u32;
                        }
                        _ => {
                            self.pos = self.pos.saturating_sub(1);
                            return Err(self.error_at("expected an integer exponent after '^'"));
                        }
                    }
                }
                exps[idx] += power;
                Ok(())
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error_at("expected a number or a variable"))
            }
        }
    }
}

/// Parse the system text format.
pub fn parse_system(text: &str) -> Result<PolySystem, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars: Vec::new(),
    };
    // vars declaration
    match p.next() {
        Some(Tok::Ident(kw)) if kw == "vars" => {}
        _ => {
            p.pos = p.pos.saturating_sub(1);
            return Err(p.error_at("input must start with a 'vars' declaration"));
        }
    }
    while let Some(tok) = p.peek() {
        match tok {
            Tok::Ident(name) => {
                if name == "vars" {
                    return Err(p.error_at("duplicate 'vars' keyword"));
                }
                let name = name.clone();
                if p.vars.contains(&name) {
                    return Err(p.error_at(format!("variable '{}' declared twice", name)));
                }
                p.vars.push(name);
                p.next();
            }
            Tok::Semi => break,
            _ => return Err(p.error_at("expected a variable name or ';'")),
        }
    }
    p.expect_semi()?;
    if p.vars.is_empty() {
        return Err(p.error_at("at least one variable must be declared"));
    }

    let mut gens = Vec::new();
    while p.peek().is_some() {
        let poly = p.polynomial()?;
        p.expect_semi()?;
        if poly.is_zero() {
            return Err(p.error_at("zero polynomial is not a valid generator"));
        }
        gens.push(poly);
    }
    if gens.is_empty() {
        return Err(p.error_at("no generators given"));
    }
    let n = p.vars.len();
    PolySystem::new(n, gens).map_err(|e| ParseError {
        line: 1,
        col: 1,
        message: e.to_string(),
    })
}

/// Render a system back into the input grammar (used by round-trip tests).
pub fn print_system(sys: &PolySystem) -> String {
    let mut out = String::from("vars");
    for i in 0..sys.num_vars() {
        out.push_str(&format!(" x{}", i + 1));
    }
    out.push_str(";\n");
    for g in sys.generators() {
        out.push_str(&format!("{};\n", g));
    }
    out
}
