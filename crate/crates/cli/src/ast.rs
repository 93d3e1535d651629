//! Syntax tree of session files and its pretty-printer.
//!
//! Printing inserts only the parentheses the grammar needs, and the output
//! parses back to an identical tree.

use std::fmt;

use num_traits::One;
use rinehart_core::polyring::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    /// A nonnegative rational literal such as `3` or `3/2`.
    Num(Rational),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// `[u, v]`
    Commutator(Box<Expr>, Box<Expr>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingDecl {
    pub name: String,
    pub vars: Vec<String>,
    pub modulus: Option<Expr>,
    pub order: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Stmt {
    Ring(RingDecl),
    Der { name: String, expr: Expr },
    Bracket { left: String, right: String, expr: Expr },
    Syz { expr: Expr },
    El { name: String, expr: Expr },
    Command { name: String, args: Vec<Expr> },
}

/// 1-based source position.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SessionFile {
    pub stmts: Vec<Stmt>,
    pub positions: Vec<Pos>,
}

pub const COMMANDS: &[&str] = &[
    "nf",
    "mult",
    "symbol",
    "symmetrize",
    "counit",
    "coproduct",
    "primitive",
    "level",
    "eval",
    "logder",
    "verify",
    "fiber",
];

pub const KEYWORDS: &[&str] = &["ring", "der", "bracket", "syz", "el"];

pub const ORDERS: &[&str] = &["grevlex", "grlex", "lex"];

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Ident(_) | Expr::Commutator(..) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Expr::Ident(s) => write!(f, "{s}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.write_at(f, 3)
            }
            Expr::Add(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " + ")?;
                b.write_at(f, 2)
            }
            Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " - ")?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)
            }
            Expr::Pow(a, k) => {
                a.write_at(f, 5)?;
                write!(f, "^{k}")
            }
            Expr::Commutator(a, b) => {
                write!(f, "[")?;
                a.write_at(f, 0)?;
                write!(f, ", ")?;
                b.write_at(f, 0)?;
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Display for RingDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ring {} = Q[{}]", self.name, self.vars.join(", "))?;
        if let Some(m) = &self.modulus {
            write!(f, " / ({m})")?;
        }
        if let Some(o) = &self.order {
            write!(f, " order {o}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Ring(r) => write!(f, "{r};"),
            Stmt::Der { name, expr } => write!(f, "der {name} = {expr};"),
            Stmt::Bracket { left, right, expr } => write!(f, "bracket [{left}, {right}] = {expr};"),
            Stmt::Syz { expr } => write!(f, "syz {expr};"),
            Stmt::El { name, expr } => write!(f, "el {name} = {expr};"),
            Stmt::Command { name, args } => {
                write!(f, "{name}")?;
                for (i, a) in args.iter().enumerate() {
                    write!(f, "{}{a}", if i == 0 { " " } else { ", " })?;
                }
                write!(f, ";")
            }
        }
    }
}

impl fmt::Display for SessionFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
