//! Expression syntax for forms: `+ - * / ^`, `d()`, `conj()`, `exp()`, `E(k, …)`, `i`.
//!
//! `^` is the wedge product; with an integer literal on the right it is the wedge power.
//! `*` multiplies (wedge with a function). `/` divides by a nonzero constant.
//! Literals: `3`, `3/4`, `2i`, `1/2i` (the last is `i/2`); after `^` a number is never a fraction.

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::{CoeffFn, GaussRational};
use crate::error::{Error, Result};
use crate::exterior::{Form, ModelRef};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num { value: GaussRational, integer: Option<u32> },
    Ident(String),
    Op(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

/// Failure inside an expression, with a byte offset into it.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

fn lex(src: &str) -> std::result::Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let is_ident = |c: u8| c.is_ascii_alphanumeric() || c == b'_';
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let num: BigInt = src[start..i].parse().expect("digits");
            let mut den = BigInt::one();
            let after_caret = matches!(out.last(), Some(Token { tok: Tok::Op('^'), .. }));
            if !after_caret && i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                let s = i + 1;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                den = src[s..i].parse().expect("digits");
                if den.is_zero() {
                    return Err(ExprError { offset: start, message: "zero denominator".into() });
                }
            }
            let q = BigRational::new(num, den.clone());
            let imaginary = i < bytes.len() && bytes[i] == b'i' && !(i + 1 < bytes.len() && is_ident(bytes[i + 1]));
            if imaginary {
                i += 1;
            } else if i < bytes.len() && is_ident(bytes[i]) {
                return Err(ExprError { offset: i, message: "expected an operator after a number".into() });
            }
            let integer = if !imaginary && den.is_one() { u32::try_from(q.to_integer()).ok() } else { None };
            let value = if imaginary { GaussRational::new(BigRational::zero(), q) } else { GaussRational::real(q) };
            out.push(Token { tok: Tok::Num { value, integer }, pos: start });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && is_ident(bytes[i]) {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(src[start..i].to_string()), pos: start });
            continue;
        }
        if b"+-*/^(),".contains(&c) {
            out.push(Token { tok: Tok::Op(c as char), pos: start });
            i += 1;
            continue;
        }
        let ch = src[start..].chars().next().expect("char");
        return Err(ExprError { offset: start, message: format!("unexpected character `{ch}`") });
    }
    out.push(Token { tok: Tok::End, pos: src.len() });
    Ok(out)
}

/// Names visible to an expression besides generators and variables.
pub type Bindings = IndexMap<String, Form>;

struct Parser<'a> {
    toks: Vec<Token>,
    at: usize,
    model: &'a ModelRef,
    bindings: &'a Bindings,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> std::result::Result<T, ExprError> {
        Err(ExprError { offset, message: message.into() })
    }

    fn lift<T>(&self, offset: usize, r: Result<T>) -> std::result::Result<T, ExprError> {
        r.map_err(|e| ExprError { offset, message: e.to_string() })
    }

    fn expect(&mut self, c: char) -> std::result::Result<(), ExprError> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            self.err(self.pos(), format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> std::result::Result<Form, ExprError> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.lift(pos, acc.try_add(&rhs))?;
                }
                Tok::Op('-') => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.lift(pos, acc.try_sub(&rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Form, ExprError> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.lift(pos, acc.wedge(&rhs))?;
                }
                Tok::Op('/') => {
                    self.bump();
                    let at = self.pos();
                    let rhs = self.unary()?;
                    let c = match (rhs.degree(), rhs.terms().values().next()) {
                        (Some(0), Some(f)) => f.constant_value(),
                        _ => None,
                    };
                    let Some(c) = c else {
                        return self.err(at, "division by a non-constant");
                    };
                    let inv = self.lift(at, c.inv())?;
                    acc = acc.scale_c(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<Form, ExprError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            let f = self.unary()?;
            return Ok(f.scale_c(&GaussRational::from_int(-1)));
        }
        if *self.peek() == Tok::Op('+') {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<Form, ExprError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        let pos = self.pos();
        self.bump();
        if let Tok::Num { integer: Some(n), .. } = self.peek().clone() {
            self.bump();
            let mut acc = Form::one(self.model);
            for _ in 0..n {
                acc = self.lift(pos, acc.wedge(&base))?;
            }
            return Ok(acc);
        }
        let rhs = self.power()?;
        self.lift(pos, base.wedge(&rhs))
    }

    fn args(&mut self) -> std::result::Result<Vec<(usize, Form)>, ExprError> {
        self.expect('(')?;
        let mut out = Vec::new();
        if *self.peek() == Tok::Op(')') {
            self.bump();
            return Ok(out);
        }
        loop {
            let p = self.pos();
            out.push((p, self.expr()?));
            match self.peek() {
                Tok::Op(',') => {
                    self.bump();
                }
                Tok::Op(')') => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.err(self.pos(), "expected `,` or `)`"),
            }
        }
    }

    fn one_arg(&mut self, name: &str, pos: usize) -> std::result::Result<Form, ExprError> {
        let mut a = self.args()?;
        if a.len() != 1 {
            return self.err(pos, format!("`{name}` takes one argument"));
        }
        Ok(a.remove(0).1)
    }

    fn atom(&mut self) -> std::result::Result<Form, ExprError> {
        let t = self.bump();
        match t.tok {
            Tok::Num { value, .. } => Ok(Form::constant(self.model, value)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let call = *self.peek() == Tok::Op('(');
                match (name.as_str(), call) {
                    ("d", true) => Ok(self.one_arg("d", t.pos)?.d()),
                    ("conj", true) => Ok(self.one_arg("conj", t.pos)?.conj()),
                    ("exp", true) => {
                        let a = self.one_arg("exp", t.pos)?;
                        self.lift(t.pos, a.exp())
                    }
                    ("E", true) => {
                        let args = self.args()?;
                        let mut k = Vec::new();
                        for (p, a) in args {
                            let c = match (a.degree(), a.is_zero()) {
                                (_, true) => Some(GaussRational::zero()),
                                (Some(0), false) => a.terms().values().next().and_then(CoeffFn::constant_value),
                                _ => None,
                            };
                            let int = c
                                .filter(|c| c.im.is_zero() && c.re.is_integer())
                                .and_then(|c| i64::try_from(c.re.to_integer()).ok());
                            match int {
                                Some(v) => k.push(v),
                                None => return self.err(p, "character exponents must be integers"),
                            }
                        }
                        let angles = self.model.vars().angle_len();
                        if k.len() != angles {
                            return self.err(t.pos, format!("E expects {angles} exponents, got {}", k.len()));
                        }
                        Ok(Form::function(self.model, CoeffFn::character(k)))
                    }
                    (_, true) => self.err(t.pos, format!("unknown function `{name}`")),
                    ("i", false) => Ok(Form::constant(self.model, GaussRational::i())),
                    _ => self.name(&name, t.pos),
                }
            }
            Tok::End => self.err(t.pos, "unexpected end of expression"),
            Tok::Op(c) => self.err(t.pos, format!("unexpected `{c}`")),
        }
    }

    fn name(&self, name: &str, pos: usize) -> std::result::Result<Form, ExprError> {
        if let Some(f) = self.bindings.get(name) {
            return Ok(f.clone());
        }
        if let Some(i) = self.model.index_of(name) {
            return Ok(Form::generator(self.model, i));
        }
        if let Ok(v) = self.model.vars().lookup(name) {
            let f = self.lift(pos, CoeffFn::var(v))?;
            return Ok(Form::function(self.model, f));
        }
        self.err(pos, format!("unknown name `{name}`"))
    }
}

/// Parse and evaluate `src` on `model`.
pub fn parse_form(src: &str, model: &ModelRef, bindings: &Bindings) -> std::result::Result<Form, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, model, bindings };
    let f = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err(p.pos(), "unexpected trailing input");
    }
    Ok(f)
}

/// Convenience wrapper mapping failures to [`Error::Parse`] at line 1.
pub fn parse_expr(src: &str, model: &ModelRef) -> Result<Form> {
    parse_form(src, model, &Bindings::new()).map_err(|e| Error::Parse {
        line: 1,
        column: e.offset + 1,
        message: e.message,
    })
}

/// Parse a Gaussian-rational constant such as `1/2 - 3i`.
pub fn parse_constant(src: &str) -> Result<GaussRational> {
    let m = crate::catalog::flat_t2();
    let f = parse_expr(src, &m)?;
    if f.is_zero() {
        return Ok(GaussRational::zero());
    }
    match (f.degree(), f.terms().values().next().and_then(CoeffFn::constant_value)) {
        (Some(0), Some(c)) => Ok(c),
        _ => Err(Error::Parse { line: 1, column: 1, message: format!("`{src}` is not a constant") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn literals_and_precedence() {
        assert_eq!(parse_constant("1/2i").unwrap(), GaussRational::from_parts((0, 1), (1, 2)));
        assert_eq!(parse_constant("3/4+1/2i").unwrap(), GaussRational::from_parts((3, 4), (1, 2)));
        assert_eq!(parse_constant("-(1+i)*(1-i)").unwrap(), GaussRational::from_int(-2));
        assert_eq!(parse_constant("2^3/4").unwrap(), GaussRational::from_int(2));
        assert_eq!(parse_constant("i^2").unwrap(), GaussRational::from_int(-1));
    }

    #[test]
    fn wedge_and_power() {
        let m = catalog::complex_torus(1);
        let f = parse_expr("(dz + dzb)^2", &m).unwrap();
        assert!(f.is_zero());
        let w = parse_expr("i/2*dz^dzb", &m).unwrap();
        assert_eq!(w.conj(), w);
    }

    #[test]
    fn display_round_trips() {
        let m = catalog::chart_bundle(1, 1);
        for src in ["(1+i)*z^2*zb*dz^dzb - 1/2i*E(1,-1)*dt1", "z*E(0,2)*dzb + 3", "dz^dt1^dt2"] {
            let f = parse_expr(src, &m).unwrap();
            assert_eq!(parse_expr(&f.to_string(), &m).unwrap(), f, "{f}");
        }
    }

    #[test]
    fn located_errors() {
        let m = catalog::complex_torus(1);
        let e = parse_form("dz ^ dw", &m, &Bindings::new()).unwrap_err();
        assert_eq!(e.offset, 5);
        let e = parse_form("dz +", &m, &Bindings::new()).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(parse_form("dz / dzb", &m, &Bindings::new()).is_err());
        assert!(parse_form("E(1)", &m, &Bindings::new()).is_err());
        assert!(parse_form("dz $", &m, &Bindings::new()).is_err());
    }
}
