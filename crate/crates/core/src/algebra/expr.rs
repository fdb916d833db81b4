//! Parser for rational-function expressions in `z`, e.g. `-(1+z)/(1+q*z)`.
//!
//! Grammar: numbers (`2`, `0.5`, `3/4` via division, `1e-3`), the variable
//! `z`, named parameters, the imaginary unit `i` (numeric mode only), `+ - * /`,
//! integer powers `^`, parentheses and implicit multiplication (`2z`, `q z`).

use std::collections::BTreeMap;

use super::poly::Polynomial;
use super::ratfun::RationalFunction;
use super::scalar::{parse_rational, Scalar};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, AlgebraError> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            // exponent part: e or E followed by optional sign and digits
            if i + 1 < cs.len()
                && (cs[i] == 'e' || cs[i] == 'E')
                && (cs[i + 1].is_ascii_digit()
                    || ((cs[i + 1] == '-' || cs[i + 1] == '+')
                        && i + 2 < cs.len()
                        && cs[i + 2].is_ascii_digit()))
            {
                i += 2;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push(Tok::Num(cs[st..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(AlgebraError::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a, F: Scalar> {
    toks: Vec<Tok>,
    pos: usize,
    params: &'a BTreeMap<String, F>,
    ctx: F::Ctx,
}

impl<F: Scalar> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction<F>, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction<F>, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(AlgebraError::Parse("division by zero".into()));
                }
                acc = acc.div(&d)?;
            } else if matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction<F>, AlgebraError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction<F>, AlgebraError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    n.parse::<i64>()
                        .map_err(|_| AlgebraError::Parse(format!("exponent '{n}' is not an integer")))?
                }
                _ => return Err(AlgebraError::Parse("expected integer exponent".into())),
            };
            let e = if neg { -e } else { e };
            if e < 0 && base.is_zero() {
                return Err(AlgebraError::Parse("zero to a negative power".into()));
            }
            return base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction<F>, AlgebraError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let r = parse_rational(&n)
                    .ok_or_else(|| AlgebraError::Parse(format!("bad number '{n}'")))?;
                Ok(RationalFunction::constant(F::from_rational(&r, &self.ctx)))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                if id == "z" {
                    return Ok(RationalFunction::z(&self.ctx));
                }
                if let Some(v) = self.params.get(&id) {
                    return Ok(RationalFunction::constant(v.clone()));
                }
                if id == "i" {
                    return F::imag_unit(&self.ctx)
                        .map(RationalFunction::constant)
                        .ok_or_else(|| AlgebraError::Parse("'i' is not available in exact mode".into()));
                }
                Err(AlgebraError::Parse(format!("unknown identifier '{id}'")))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(AlgebraError::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(AlgebraError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse `s` into a rational function of `z`.
pub fn parse_rational_function<F: Scalar>(
    s: &str,
    params: &BTreeMap<String, F>,
    ctx: &F::Ctx,
) -> Result<RationalFunction<F>, AlgebraError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(AlgebraError::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        params,
        ctx: ctx.clone(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(AlgebraError::Parse(format!(
            "trailing input at token {}",
            p.pos
        )));
    }
    Ok(e)
}

/// Parse a scalar (no `z`).
pub fn parse_scalar<F: Scalar>(
    s: &str,
    params: &BTreeMap<String, F>,
    ctx: &F::Ctx,
) -> Result<F, AlgebraError> {
    let r = parse_rational_function(s, params, ctx)?;
    if r.num().degree().unwrap_or(0) > 0 || r.den().degree().unwrap_or(0) > 0 {
        return Err(AlgebraError::Parse(format!("'{s}' depends on z")));
    }
    let c = r.num().coeff(0);
    Ok(c / r.den().coeff(0))
}

/// `p` as a polynomial when the expression has a constant denominator.
pub fn as_polynomial<F: Scalar>(r: &RationalFunction<F>) -> Option<Polynomial<F>> {
    if r.den().degree() == Some(0) {
        Some(r.num().clone())
    } else {
        None
    }
}
