//! Lexer and recursive-descent parser for session files.
//!
//! ```text
//! session  := stmt*
//! stmt     := "ring" IDENT "=" ringspec ";"
//!           | "der" IDENT "=" expr ";"
//!           | "bracket" "[" IDENT "," IDENT "]" "=" expr ";"
//!           | "syz" expr ";"
//!           | "el" IDENT "=" expr ";"
//!           | COMMAND (expr ("," expr)*)? ";"
//! ringspec := "Q" "[" IDENT ("," IDENT)* "]" ("/" "(" expr ")")? ("order" IDENT)?
//! expr     := term (("+" | "-") term)*
//! term     := unary ("*" unary)*
//! unary    := "-" unary | power
//! power    := atom ("^" INT)?
//! atom     := INT ("/" INT)? | IDENT | "(" expr ")" | "[" expr "," expr "]"
//! ```
//!
//! Comments run from `#` or `//` to the end of the line. Errors carry the
//! position and the tokens that would have been accepted.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rinehart_core::polyring::Rational;

use crate::ast::{Expr, Pos, RingDecl, SessionFile, Stmt, COMMANDS, KEYWORDS, ORDERS};

const MAX_DEPTH: usize = 200;

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse::<BigInt>().expect("ascii digits");
            out.push((Tok::Int(n), pos));
            continue;
        }
        if "+-*^/()[],;=".contains(c) {
            out.push((Tok::Sym(c), pos));
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError { pos, message: format!("unexpected character `{c}`"), expected: Vec::new() });
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    depth: usize,
}

fn quoted(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| format!("`{s}`")).collect()
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, at: 0, depth: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: Vec<String>) -> ParseError {
        ParseError { pos: self.pos(), message: format!("unexpected {}", self.peek()), expected }
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![format!("`{c}`")]))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(vec![what.to_string()])),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(vec![format!("`{kw}`")])),
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(vec!["end of input".into()]))
        }
    }

    fn session(&mut self) -> Result<SessionFile, ParseError> {
        let mut file = SessionFile::default();
        while *self.peek() != Tok::Eof {
            file.positions.push(self.pos());
            file.stmts.push(self.stmt()?);
        }
        Ok(file)
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let head = match self.peek().clone() {
            Tok::Ident(s) => s,
            _ => {
                let mut expected = quoted(KEYWORDS);
                expected.extend(["a command".to_string()]);
                return Err(self.error(expected));
            }
        };
        let stmt = match head.as_str() {
            "ring" => {
                self.bump();
                let name = self.expect_ident("a ring name")?;
                self.expect_sym('=')?;
                let mut decl = self.ring_spec()?;
                decl.name = name;
                Stmt::Ring(decl)
            }
            "der" | "el" => {
                self.bump();
                let name = self.expect_ident("a name")?;
                self.expect_sym('=')?;
                let expr = self.expr()?;
                if head == "der" {
                    Stmt::Der { name, expr }
                } else {
                    Stmt::El { name, expr }
                }
            }
            "bracket" => {
                self.bump();
                self.expect_sym('[')?;
                let left = self.expect_ident("a generator name")?;
                self.expect_sym(',')?;
                let right = self.expect_ident("a generator name")?;
                self.expect_sym(']')?;
                self.expect_sym('=')?;
                Stmt::Bracket { left, right, expr: self.expr()? }
            }
            "syz" => {
                self.bump();
                Stmt::Syz { expr: self.expr()? }
            }
            cmd if COMMANDS.contains(&cmd) => {
                self.bump();
                let mut args = Vec::new();
                if !self.is_sym(';') {
                    args.push(self.expr()?);
                    while self.is_sym(',') {
                        self.bump();
                        args.push(self.expr()?);
                    }
                }
                Stmt::Command { name: head.clone(), args }
            }
            _ => {
                let mut expected = quoted(KEYWORDS);
                expected.extend(quoted(COMMANDS));
                return Err(ParseError { pos: self.pos(), message: format!("unknown statement `{head}`"), expected });
            }
        };
        self.expect_sym(';')?;
        Ok(stmt)
    }

    /// `Q[x, y] / (f) order lex`; the name is filled in by the caller.
    fn ring_spec(&mut self) -> Result<RingDecl, ParseError> {
        self.expect_keyword("Q")?;
        self.expect_sym('[')?;
        let mut vars = vec![self.expect_ident("a variable name")?];
        while self.is_sym(',') {
            self.bump();
            vars.push(self.expect_ident("a variable name")?);
        }
        self.expect_sym(']')?;
        let mut modulus = None;
        if self.is_sym('/') {
            self.bump();
            self.expect_sym('(')?;
            modulus = Some(self.expr()?);
            self.expect_sym(')')?;
        }
        let mut order = None;
        if *self.peek() == Tok::Ident("order".into()) {
            self.bump();
            let o = self.expect_ident("a monomial order")?;
            if !ORDERS.contains(&o.as_str()) {
                self.at -= 1;
                return Err(self.error(quoted(ORDERS)));
            }
            order = Some(o);
        }
        Ok(RingDecl { name: String::new(), vars, modulus, order })
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError { pos: self.pos(), message: "expression nested too deeply".into(), expected: Vec::new() });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut e = self.term()?;
        loop {
            if self.is_sym('+') {
                self.bump();
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.is_sym('-') {
                self.bump();
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        while self.is_sym('*') {
            self.bump();
            e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.is_sym('-') {
            self.bump();
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.is_sym('^') {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Tok::Int(n) => {
                    let k = u32::try_from(&n).map_err(|_| ParseError {
                        pos,
                        message: format!("exponent {n} is too large"),
                        expected: Vec::new(),
                    })?;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => {
                    self.at -= 1;
                    return Err(self.error(vec!["an integer exponent".into()]));
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if self.is_sym('/') {
                    self.bump();
                    let pos = self.pos();
                    match self.peek().clone() {
                        Tok::Int(d) if !d.is_zero() => {
                            self.bump();
                            Ok(Expr::Num(Rational::new(n, d)))
                        }
                        Tok::Int(_) => Err(ParseError { pos, message: "zero denominator".into(), expected: Vec::new() }),
                        _ => Err(self.error(vec!["an integer denominator".into()])),
                    }
                } else {
                    Ok(Expr::Num(Rational::from_integer(n)))
                }
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expr::Ident(s))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                self.bump();
                let a = self.expr()?;
                self.expect_sym(',')?;
                let b = self.expr()?;
                self.expect_sym(']')?;
                Ok(Expr::Commutator(Box::new(a), Box::new(b)))
            }
            _ => Err(self.error(vec!["a number".into(), "an identifier".into(), "`(`".into(), "`[`".into()])),
        }
    }
}

pub fn parse(src: &str) -> Result<SessionFile, ParseError> {
    let mut p = Parser::new(src)?;
    p.session()
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// A ring given as `Q[x,y]/(x*y)`, as accepted by `--ring`.
pub fn parse_ring_spec(src: &str) -> Result<RingDecl, ParseError> {
    let mut p = Parser::new(src)?;
    let mut decl = p.ring_spec()?;
    p.expect_eof()?;
    decl.name = "R".into();
    Ok(decl)
}
