//! Expression language for field and function inputs: integer literals,
//! the symbols `t`, `t1`, `t2`, `x`, `y`, the operators `+ - * / ^` with
//! literal integer exponents, parentheses, and a truncation marker
//! `O(t1^a*t2^b)`. Precedence: `^` binds tightest, then unary minus, then
//! `* /`, then `+ -`.

use std::collections::BTreeMap;

use tamesym::field::{Fp, PrimeField};
use tamesym::geometry::{LinearForm, RationalFn1, RationalFnXY};
use tamesym::series::{LaurentSeries, TwoLocalElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// Byte offset of the failure and what was expected.
    Syntax { pos: usize, msg: String },
    UnsupportedFactor(String),
    ZeroDenominator,
    Other(String),
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseError::Syntax { pos, msg } => write!(f, "syntax error at offset {pos}: {msg}"),
            ParseError::UnsupportedFactor(m) => write!(f, "unsupported factor: {m}"),
            ParseError::ZeroDenominator => write!(f, "division by a possibly-zero denominator"),
            ParseError::Other(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: i64 = text[start..i].parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: "integer literal out of range".into(),
                })?;
                out.push((Tok::Int(n), start));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric()) {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character '{c}'") })
            }
        }
    }
    Ok(out)
}

/// Abstract syntax. `BigO` holds the per-variable exponents of the marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    Int(i64),
    Var(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
    BigO(BTreeMap<String, i64>),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::Syntax { pos: self.here(), msg: format!("expected {what}") })
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = self.int_literal()?;
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn int_literal(&mut self) -> Result<i64, ParseError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(n)) => Ok(if neg { -n } else { n }),
            _ => {
                self.pos -= 1;
                Err(ParseError::Syntax { pos: self.here(), msg: "expected integer exponent".into() })
            }
        }
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Ast::Int(n)),
            Some(Tok::Ident(name)) if name == "O" => {
                self.expect(Tok::LParen, "'(' after O")?;
                let marker = self.big_o_monomial()?;
                self.expect(Tok::RParen, "')' closing O(...)")?;
                Ok(Ast::BigO(marker))
            }
            Some(Tok::Ident(name)) => Ok(Ast::Var(name)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            other => {
                if other.is_some() {
                    self.pos -= 1;
                }
                Err(ParseError::Syntax { pos: self.here(), msg: "expected a value".into() })
            }
        }
    }

    fn big_o_monomial(&mut self) -> Result<BTreeMap<String, i64>, ParseError> {
        let mut exps = BTreeMap::new();
        loop {
            match self.bump() {
                Some(Tok::Ident(v)) => {
                    let e = if self.peek() == Some(&Tok::Caret) {
                        self.pos += 1;
                        self.int_literal()?
                    } else {
                        1
                    };
                    *exps.entry(v).or_insert(0) += e;
                }
                _ => {
                    self.pos -= 1;
                    return Err(ParseError::Syntax {
                        pos: self.here(),
                        msg: "expected a variable inside O(...)".into(),
                    });
                }
            }
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
                continue;
            }
            return Ok(exps);
        }
    }
}

pub fn parse(text: &str) -> Result<Ast, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::Syntax { pos: p.here(), msg: "trailing input".into() });
    }
    Ok(ast)
}

/// Relative precision used when an expression forces a series division.
pub const DIV_REL_PREC: i64 = 32;

fn check_var(name: &str, allowed: &[&str]) -> Result<(), ParseError> {
    if allowed.contains(&name) {
        Ok(())
    } else {
        Err(ParseError::UnsupportedFactor(format!(
            "symbol '{name}' is not available in this context"
        )))
    }
}

/// Evaluate in the one-variable series context (symbol `t`).
pub fn eval_series1(ast: &Ast, field: PrimeField) -> Result<LaurentSeries, ParseError> {
    match ast {
        Ast::Int(n) => Ok(LaurentSeries::constant(field, *n)),
        Ast::Var(v) => {
            check_var(v, &["t"])?;
            Ok(LaurentSeries::exact(field, &[(1, 1)]))
        }
        Ast::Neg(a) => Ok(eval_series1(a, field)?.neg()),
        Ast::Add(a, b) => Ok(eval_series1(a, field)?.add(&eval_series1(b, field)?)),
        Ast::Sub(a, b) => Ok(eval_series1(a, field)?.sub(&eval_series1(b, field)?)),
        Ast::Mul(a, b) => Ok(eval_series1(a, field)?.mul(&eval_series1(b, field)?)),
        Ast::Div(a, b) => {
            let d = eval_series1(b, field)?;
            let inv = d.inv(DIV_REL_PREC).map_err(|_| ParseError::ZeroDenominator)?;
            Ok(eval_series1(a, field)?.mul(&inv))
        }
        Ast::Pow(a, e) => {
            let base = eval_series1(a, field)?;
            base.pow(*e, DIV_REL_PREC).map_err(|_| ParseError::ZeroDenominator)
        }
        Ast::BigO(exps) => {
            for v in exps.keys() {
                check_var(v, &["t"])?;
            }
            Ok(LaurentSeries::zero_mod(field, *exps.get("t").unwrap_or(&0)))
        }
    }
}

struct Val2 {
    elem: TwoLocalElement,
    inner_cap: Option<i64>,
    outer_cap: Option<i64>,
}

fn eval2(ast: &Ast, field: PrimeField) -> Result<Val2, ParseError> {
    let plain = |elem| Val2 { elem, inner_cap: None, outer_cap: None };
    let merge = |a: Option<i64>, b: Option<i64>| match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    };
    let no_caps = |v: &Val2, what: &str| -> Result<(), ParseError> {
        if v.inner_cap.is_some() || v.outer_cap.is_some() {
            Err(ParseError::UnsupportedFactor(format!(
                "O(...) markers may only be added, not used under {what}"
            )))
        } else {
            Ok(())
        }
    };
    match ast {
        Ast::Int(n) => Ok(plain(TwoLocalElement::constant(field, *n))),
        Ast::Var(v) => {
            check_var(v, &["t1", "t2"])?;
            let (i, j) = if v == "t1" { (1, 0) } else { (0, 1) };
            Ok(plain(TwoLocalElement::monomial(field, Fp(1), i, j)))
        }
        Ast::Neg(a) => {
            let v = eval2(a, field)?;
            Ok(Val2 { elem: v.elem.neg(), ..v })
        }
        Ast::Add(a, b) | Ast::Sub(a, b) => {
            let x = eval2(a, field)?;
            let y = eval2(b, field)?;
            let elem = if matches!(ast, Ast::Add(..)) {
                x.elem.add(&y.elem)
            } else {
                x.elem.sub(&y.elem)
            };
            Ok(Val2 {
                elem,
                inner_cap: merge(x.inner_cap, y.inner_cap),
                outer_cap: merge(x.outer_cap, y.outer_cap),
            })
        }
        Ast::Mul(a, b) => {
            let x = eval2(a, field)?;
            let y = eval2(b, field)?;
            no_caps(&x, "multiplication")?;
            no_caps(&y, "multiplication")?;
            Ok(plain(x.elem.mul(&y.elem)))
        }
        Ast::Div(a, b) => {
            let x = eval2(a, field)?;
            let y = eval2(b, field)?;
            no_caps(&x, "division")?;
            no_caps(&y, "division")?;
            let inv = y
                .elem
                .inv(DIV_REL_PREC, DIV_REL_PREC)
                .map_err(|_| ParseError::ZeroDenominator)?;
            Ok(plain(x.elem.mul(&inv)))
        }
        Ast::Pow(a, e) => {
            let x = eval2(a, field)?;
            no_caps(&x, "powers")?;
            x.elem
                .pow(*e, DIV_REL_PREC, DIV_REL_PREC)
                .map(plain)
                .map_err(|_| ParseError::ZeroDenominator)
        }
        Ast::BigO(exps) => {
            for v in exps.keys() {
                check_var(v, &["t1", "t2"])?;
            }
            let inner_cap = exps.get("t1").copied();
            let outer_cap = exps.get("t2").copied();
            let elem = match outer_cap {
                Some(b) => TwoLocalElement::zero_mod(field, b),
                None => TwoLocalElement::zero(field),
            };
            Ok(Val2 { elem, inner_cap, outer_cap })
        }
    }
}

/// Evaluate in the two-variable series context (symbols `t1`, `t2`).
pub fn eval_series2(ast: &Ast, field: PrimeField) -> Result<TwoLocalElement, ParseError> {
    let v = eval2(ast, field)?;
    let mut out = v.elem;
    if let Some(a) = v.inner_cap {
        out = out.truncate_inner_abs(a);
    }
    if let Some(b) = v.outer_cap {
        out = out.truncate_outer_abs(b);
    }
    Ok(out)
}

/// Normalized linear datum for structural factoring: either an affine-linear
/// combination or a factored product.
enum RatVal {
    Lin { alpha: Fp, beta: Fp, gamma: Fp },
    Product { constant: Fp, factors: Vec<(LinearForm, i64)> },
}

fn lin_to_product(field: PrimeField, alpha: Fp, beta: Fp, gamma: Fp) -> Result<RatVal, ParseError> {
    if field.is_zero(beta) && field.is_zero(gamma) {
        if field.is_zero(alpha) {
            return Err(ParseError::UnsupportedFactor("the zero function".into()));
        }
        return Ok(RatVal::Product { constant: alpha, factors: vec![] });
    }
    Ok(RatVal::Product {
        constant: field.one(),
        factors: vec![(LinearForm { alpha, beta, gamma }, 1)],
    })
}

/// Append `l^e` to a factor list, merging proportional factors and folding
/// the proportionality scalar into the constant.
fn push_factor(
    field: PrimeField,
    constant: &mut Fp,
    factors: &mut Vec<(LinearForm, i64)>,
    l: LinearForm,
    e: i64,
) -> Result<(), ParseError> {
    for (lp, ep) in factors.iter_mut() {
        // l = r * lp for a scalar r exactly when all three ratios match.
        let pairs = [(l.alpha, lp.alpha), (l.beta, lp.beta), (l.gamma, lp.gamma)];
        let mut ratio = None;
        let mut proportional = true;
        for (a, b) in pairs {
            match (field.is_zero(a), field.is_zero(b)) {
                (true, true) => {}
                (false, false) => {
                    let r = field.div(a, b).expect("nonzero");
                    match ratio {
                        None => ratio = Some(r),
                        Some(r0) if r0 == r => {}
                        _ => proportional = false,
                    }
                }
                _ => proportional = false,
            }
        }
        if proportional {
            let r = ratio.unwrap_or(field.one());
            *constant = field.mul(*constant, field.pow(r, e).expect("nonzero ratio"));
            *ep += e;
            if *ep == 0 {
                let lp = *lp;
                factors.retain(|(f, _)| *f != lp);
            }
            return Ok(());
        }
    }
    factors.push((l, e));
    Ok(())
}

fn eval_rat(ast: &Ast, field: PrimeField, vars: &[&str]) -> Result<RatVal, ParseError> {
    match ast {
        Ast::Int(n) => Ok(RatVal::Lin { alpha: field.elt(*n), beta: field.zero(), gamma: field.zero() }),
        Ast::Var(v) => {
            check_var(v, vars)?;
            // In the one-variable rational context the symbol rides in the
            // beta slot.
            if v == "x" || v == "t" {
                Ok(RatVal::Lin { alpha: field.zero(), beta: field.one(), gamma: field.zero() })
            } else {
                Ok(RatVal::Lin { alpha: field.zero(), beta: field.zero(), gamma: field.one() })
            }
        }
        Ast::Neg(a) => match eval_rat(a, field, vars)? {
            RatVal::Lin { alpha, beta, gamma } => Ok(RatVal::Lin {
                alpha: field.neg(alpha),
                beta: field.neg(beta),
                gamma: field.neg(gamma),
            }),
            RatVal::Product { constant, factors } => {
                Ok(RatVal::Product { constant: field.neg(constant), factors })
            }
        },
        Ast::Add(a, b) | Ast::Sub(a, b) => {
            let sub = matches!(ast, Ast::Sub(..));
            let (x, y) = (eval_rat(a, field, vars)?, eval_rat(b, field, vars)?);
            // Sums are only admissible between affine-linear combinations;
            // a factored constant re-enters as a linear datum.
            let as_lin = |v: RatVal| -> Result<(Fp, Fp, Fp), ParseError> {
                match v {
                    RatVal::Lin { alpha, beta, gamma } => Ok((alpha, beta, gamma)),
                    RatVal::Product { constant, factors } if factors.is_empty() => {
                        Ok((constant, field.zero(), field.zero()))
                    }
                    // A scaled single linear factor folds back to linear.
                    RatVal::Product { constant, factors }
                        if factors.len() == 1 && factors[0].1 == 1 =>
                    {
                        let l = factors[0].0;
                        Ok((
                            field.mul(constant, l.alpha),
                            field.mul(constant, l.beta),
                            field.mul(constant, l.gamma),
                        ))
                    }
                    _ => Err(ParseError::UnsupportedFactor(
                        "sums are only supported between linear expressions".into(),
                    )),
                }
            };
            let (a1, b1, c1) = as_lin(x)?;
            let (a2, b2, c2) = as_lin(y)?;
            let op = if sub { PrimeField::sub } else { PrimeField::add };
            Ok(RatVal::Lin {
                alpha: op(&field, a1, a2),
                beta: op(&field, b1, b2),
                gamma: op(&field, c1, c2),
            })
        }
        Ast::Mul(a, b) | Ast::Div(a, b) => {
            let div = matches!(ast, Ast::Div(..));
            let to_product = |v: RatVal| -> Result<(Fp, Vec<(LinearForm, i64)>), ParseError> {
                match v {
                    RatVal::Lin { alpha, beta, gamma } => match lin_to_product(field, alpha, beta, gamma)? {
                        RatVal::Product { constant, factors } => Ok((constant, factors)),
                        _ => unreachable!(),
                    },
                    RatVal::Product { constant, factors } => Ok((constant, factors)),
                }
            };
            let (c1, f1) = to_product(eval_rat(a, field, vars)?)?;
            let (c2, f2) = to_product(eval_rat(b, field, vars)?)?;
            let mut constant = if div {
                field.mul(c1, field.inv(c2).map_err(|_| ParseError::ZeroDenominator)?)
            } else {
                field.mul(c1, c2)
            };
            let mut factors = Vec::new();
            for (l, e) in f1 {
                push_factor(field, &mut constant, &mut factors, l, e)?;
            }
            for (l, e) in f2 {
                push_factor(field, &mut constant, &mut factors, l, if div { -e } else { e })?;
            }
            Ok(RatVal::Product { constant, factors })
        }
        Ast::Pow(a, e) => {
            let (c, fs) = match eval_rat(a, field, vars)? {
                RatVal::Lin { alpha, beta, gamma } => match lin_to_product(field, alpha, beta, gamma)? {
                    RatVal::Product { constant, factors } => (constant, factors),
                    _ => unreachable!(),
                },
                RatVal::Product { constant, factors } => (constant, factors),
            };
            if *e < 0 && field.is_zero(c) {
                return Err(ParseError::ZeroDenominator);
            }
            let mut constant = field.pow(c, *e).map_err(|_| ParseError::ZeroDenominator)?;
            let mut factors = Vec::new();
            for (l, ee) in fs {
                push_factor(field, &mut constant, &mut factors, l, ee * e)?;
            }
            Ok(RatVal::Product { constant, factors })
        }
        Ast::BigO(_) => Err(ParseError::UnsupportedFactor(
            "O(...) markers have no meaning for rational functions".into(),
        )),
    }
}

/// Evaluate in the split rational context over the plane (`x`, `y`).
pub fn eval_rational_xy(ast: &Ast, field: PrimeField) -> Result<RationalFnXY, ParseError> {
    let (constant, factors) = match eval_rat(ast, field, &["x", "y"])? {
        RatVal::Lin { alpha, beta, gamma } => match lin_to_product(field, alpha, beta, gamma)? {
            RatVal::Product { constant, factors } => (constant, factors),
            _ => unreachable!(),
        },
        RatVal::Product { constant, factors } => (constant, factors),
    };
    RationalFnXY::new(field, constant, factors)
        .map_err(|e| ParseError::UnsupportedFactor(e.to_string()))
}

/// Evaluate in the split rational context over the line (`t`): factors are
/// normalized to monic `t - a`.
pub fn eval_rational_t(ast: &Ast, field: PrimeField) -> Result<RationalFn1, ParseError> {
    let (mut constant, factors) = match eval_rat(ast, field, &["t"])? {
        RatVal::Lin { alpha, beta, gamma } => match lin_to_product(field, alpha, beta, gamma)? {
            RatVal::Product { constant, factors } => (constant, factors),
            _ => unreachable!(),
        },
        RatVal::Product { constant, factors } => (constant, factors),
    };
    let mut roots = Vec::new();
    for (l, e) in factors {
        // beta t + alpha = beta (t - (-alpha / beta)).
        debug_assert!(field.is_zero(l.gamma));
        if field.is_zero(l.beta) {
            return Err(ParseError::UnsupportedFactor(format!("factor {l} has no root in t")));
        }
        constant = field.mul(constant, field.pow(l.beta, e).expect("nonzero"));
        let root = field.neg(field.div(l.alpha, l.beta).expect("nonzero"));
        roots.push((root, e));
    }
    RationalFn1::new(field, constant, roots).map_err(|e| ParseError::UnsupportedFactor(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn parse_positions() {
        // The spec's syntax-error example: "t1^" fails at offset 3.
        match parse("t1^") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse("3*t1^-2*t2 + t2^2 + O(t2^5)").is_ok());
        assert!(parse("(x-1)*(y)^2/(x-2)").is_ok());
        match parse("t1 + ") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn series2_with_marker() {
        let k = f7();
        let ast = parse("3*t1^-2*t2 + t2^2 + O(t2^5)").unwrap();
        let e = eval_series2(&ast, k).unwrap();
        assert_eq!(e.outer_prec(), Some(5));
        assert_eq!(e.rank2_val().unwrap(), tamesym::series::Rank2Val::new(-2, 1));
    }

    #[test]
    fn series1_round_trip() {
        let k = f7();
        let ast = parse("(1-t)^-1").unwrap();
        let s = eval_series1(&ast, k).unwrap();
        assert_eq!(s.coeff(0).unwrap(), Fp(1));
        assert_eq!(s.coeff(1).unwrap(), Fp(1));
        assert_eq!(s.coeff(2).unwrap(), Fp(1));
        let bad = parse("1/(t - t)").unwrap();
        assert!(matches!(eval_series1(&bad, k), Err(ParseError::ZeroDenominator)));
    }

    #[test]
    fn rational_xy_factored() {
        let k = f7();
        let ast = parse("(x-1)*(y)^2/(x-2)").unwrap();
        let f = eval_rational_xy(&ast, k).unwrap();
        assert_eq!(f.factors().len(), 3);
        // Proportional factors merge: (2x + 2y) * (x + y) = 2 (x+y)^2.
        let ast = parse("(2*x+2*y)*(x+y)").unwrap();
        let f = eval_rational_xy(&ast, k).unwrap();
        assert_eq!(f.factors().len(), 1);
        assert_eq!(f.factors()[0].1, 2);
        // Non-linear sums are rejected.
        let ast = parse("x*x + 1").unwrap();
        assert!(matches!(
            eval_rational_xy(&ast, k),
            Err(ParseError::UnsupportedFactor(_))
        ));
    }

    #[test]
    fn rational_t_normalizes_roots() {
        let k = f7();
        // 2t - 4 = 2 (t - 2).
        let ast = parse("2*t - 4").unwrap();
        let f = eval_rational_t(&ast, k).unwrap();
        assert_eq!(f.factors(), &[(Fp(2), 1)]);
        // Cancellation to zero is rejected.
        let ast = parse("t - t").unwrap();
        assert!(eval_rational_t(&ast, k).is_err());
    }

    #[test]
    fn unary_minus_binds_below_power() {
        let k = f7();
        // -t^2 parses as -(t^2): leading coefficient -1 at exponent 2.
        let ast = parse("-t^2").unwrap();
        let s = eval_series1(&ast, k).unwrap();
        assert_eq!(s.leading().unwrap(), (2, Fp(6)));
    }
}
