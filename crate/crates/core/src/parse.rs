//! Text syntax for terms and formulas.
//!
//! Precedence from loosest to tightest: `<->`, `->`, `or`, `and`, `not`,
//! comparisons, `+` and binary `-`, unary `-`, `*`, `^`. Quantifiers are
//! written `exists v . body` and `forall v . body`; the body extends as far
//! to the right as possible.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::formula::{Atom, CFormula, Formula, RelOp};
use crate::number::Rational;
use crate::term::{Term, Variable};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Dot,
    EqEq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
    Arrow,
    DoubleArrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", tok_text(t)),
        }
    }
}

fn tok_text(t: &Tok) -> &'static str {
    match t {
        Tok::Plus => "+",
        Tok::Minus => "-",
        Tok::Star => "*",
        Tok::Caret => "^",
        Tok::Slash => "/",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::Dot => ".",
        Tok::EqEq => "==",
        Tok::Ne => "!=",
        Tok::Le => "<=",
        Tok::Lt => "<",
        Tok::Ge => ">=",
        Tok::Gt => ">",
        Tok::Arrow => "->",
        Tok::DoubleArrow => "<->",
        _ => "",
    }
}

const KEYWORDS: &[&str] = &[
    "and", "or", "not", "exists", "forall", "T", "F", "I", "Re", "Im", "conj",
];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'#')
            {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((Tok::Num(n), start));
            continue;
        }
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::DoubleArrow, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with("==") {
            (Tok::EqEq, 2)
        } else if rest.starts_with("!=") {
            (Tok::Ne, 2)
        } else if rest.starts_with("<=") {
            (Tok::Le, 2)
        } else if rest.starts_with(">=") {
            (Tok::Ge, 2)
        } else {
            let t = match c {
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'^' => Tok::Caret,
                b'/' => Tok::Slash,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'.' => Tok::Dot,
                b'<' => Tok::Lt,
                b'>' => Tok::Gt,
                _ => {
                    let ch = rest.chars().next().unwrap();
                    return Err(Error::syntax(text, i, format!("unexpected character `{ch}`")));
                }
            };
            (t, 1)
        };
        out.push((tok, i));
        i += len;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

/// Parser settings.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept variable names ending in `__re` or `__im`.
    pub allow_reserved: bool,
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    opts: ParseOptions,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::syntax(self.text, self.offset(), msg))
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{}`, found {}", tok_text(&t), self.peek().describe()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn formula(&mut self) -> Result<CFormula> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<CFormula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<CFormula> {
        let mut parts = vec![self.conjunction()?];
        while self.is_kw("or") {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<CFormula> {
        let mut parts = vec![self.negation()?];
        while self.is_kw("and") {
            self.bump();
            parts.push(self.negation()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn negation(&mut self) -> Result<CFormula> {
        if self.is_kw("not") {
            self.bump();
            return Ok(Formula::not(self.negation()?));
        }
        if self.is_kw("exists") || self.is_kw("forall") {
            let exists = self.is_kw("exists");
            self.bump();
            let v = self.variable()?;
            self.expect(Tok::Dot)?;
            let body = Box::new(self.formula()?);
            return Ok(if exists {
                Formula::Exists(v, body)
            } else {
                Formula::Forall(v, body)
            });
        }
        if self.is_kw("T") {
            self.bump();
            return Ok(Formula::Top);
        }
        if self.is_kw("F") {
            self.bump();
            return Ok(Formula::Bot);
        }
        if *self.peek() == Tok::LParen {
            let save = self.pos;
            match self.comparison() {
                Ok(a) => return Ok(a),
                Err(first) => {
                    let reached = self.pos;
                    self.pos = save;
                    self.bump();
                    match self.formula().and_then(|f| {
                        self.expect(Tok::RParen)?;
                        Ok(f)
                    }) {
                        Ok(f) => return Ok(f),
                        Err(second) => {
                            // Report whichever reading got further.
                            return Err(if reached >= self.pos { first } else { second });
                        }
                    }
                }
            }
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<CFormula> {
        let lhs = self.term()?;
        let rel = match self.peek() {
            Tok::EqEq => RelOp::Eq,
            Tok::Ne => RelOp::Ne,
            Tok::Le | Tok::Ge => RelOp::Le,
            Tok::Lt | Tok::Gt => RelOp::Lt,
            t => {
                return self.err(format!("expected a relation, found {}", t.describe()));
            }
        };
        let swap = matches!(self.peek(), Tok::Ge | Tok::Gt);
        self.bump();
        let rhs = self.term()?;
        let atom = if swap {
            Atom::new(rhs, rel, lhs)
        } else {
            Atom::new(lhs, rel, rhs)
        };
        Ok(Formula::Atom(atom))
    }

    fn variable(&mut self) -> Result<Variable> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let v = Variable::new(&s);
                if v.is_reserved() && !self.opts.allow_reserved {
                    return self.err(format!(
                        "variable names ending in `__re` or `__im` are reserved: `{s}`"
                    ));
                }
                if s.starts_with('#') || s.contains("##") {
                    return self.err(format!("invalid variable name `{s}`"));
                }
                self.bump();
                Ok(v)
            }
            t => self.err(format!("expected a variable, found {}", t.describe())),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Term::add(acc, self.unary()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = Term::add(acc, Term::neg(self.unary()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Term> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Term::neg(self.unary()?));
        }
        self.product()
    }

    fn product(&mut self) -> Result<Term> {
        let mut acc = self.power()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = Term::mul(acc, self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Term> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            return match self.bump() {
                Tok::Num(n) => match u32::try_from(n) {
                    Ok(k) => Ok(Term::pow(base, k)),
                    Err(_) => self.err("exponent too large"),
                },
                t => self.err(format!("expected an exponent, found {}", t.describe())),
            };
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Num(d) if !d.is_zero() => Ok(Term::Const(Rational::new(n, d))),
                        Tok::Num(_) => self.err("zero denominator"),
                        t => self.err(format!("expected a denominator, found {}", t.describe())),
                    }
                } else {
                    Ok(Term::Const(Rational::from_integer(n)))
                }
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => match s.as_str() {
                "I" => {
                    self.bump();
                    Ok(Term::I)
                }
                "Re" | "Im" | "conj" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let t = self.term()?;
                    self.expect(Tok::RParen)?;
                    Ok(match s.as_str() {
                        "Re" => Term::re(t),
                        "Im" => Term::im(t),
                        _ => Term::conj(t),
                    })
                }
                _ => Ok(Term::Var(self.variable()?)),
            },
            t => self.err(format!("expected a term, found {}", t.describe())),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() != Tok::Eof {
            return self.err(format!("unexpected {}", self.peek().describe()));
        }
        Ok(())
    }
}

fn parser(text: &str, opts: ParseOptions) -> Result<Parser<'_>> {
    Ok(Parser {
        text,
        toks: lex(text)?,
        pos: 0,
        opts,
    })
}

pub fn parse_formula_with(text: &str, opts: ParseOptions) -> Result<CFormula> {
    let mut p = parser(text, opts)?;
    if *p.peek() == Tok::Eof {
        return p.err("empty formula");
    }
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a formula; auxiliary `__re`/`__im` names are rejected.
pub fn parse_formula(text: &str) -> Result<CFormula> {
    parse_formula_with(text, ParseOptions::default())
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = parser(text, ParseOptions::default())?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a single atom such as `Re(R) > 0`.
pub fn parse_atom(text: &str) -> Result<Atom> {
    match parse_formula(text)? {
        Formula::Atom(a) => Ok(a),
        _ => Err(Error::syntax(text, 0, "expected a single atom")),
    }
}
