use num_bigint::BigInt;

use super::ast::{AExp, BExp, Stmt, WhileState};
use crate::syntax::{Cursor, ParseError};

pub const KEYWORDS: &[&str] = &[
    "skip", "if", "then", "else", "while", "do", "true", "false", "and", "not",
];

pub fn parse_stmt(src: &str) -> Result<Stmt, ParseError> {
    let mut c = Cursor::new(src)?;
    let s = stmt(&mut c)?;
    c.expect_end()?;
    Ok(s)
}

pub fn parse_aexp(src: &str) -> Result<AExp, ParseError> {
    let mut c = Cursor::new(src)?;
    let a = aexp(&mut c)?;
    c.expect_end()?;
    Ok(a)
}

pub fn parse_bexp(src: &str) -> Result<BExp, ParseError> {
    let mut c = Cursor::new(src)?;
    let b = bexp(&mut c)?;
    c.expect_end()?;
    Ok(b)
}

/// `x = 3, fac = 1`; separators are optional and the empty text is the all-zero state.
pub fn parse_state(src: &str) -> Result<WhileState, ParseError> {
    let mut c = Cursor::new(src)?;
    let mut st = WhileState::new();
    while !c.at_end() {
        let x = c.ident(KEYWORDS)?;
        c.expect_sym("=")?;
        let v = c
            .signed_literal()
            .ok_or_else(|| c.error("expected an integer"))?;
        st = st.with(&x, v.parse::<BigInt>().expect("digits"));
        c.eat_sym(",");
    }
    Ok(st)
}

pub(crate) fn stmt(c: &mut Cursor) -> Result<Stmt, ParseError> {
    let first = simple(c)?;
    if c.eat_sym(";") {
        Ok(Stmt::seq(first, stmt(c)?))
    } else {
        Ok(first)
    }
}

fn simple(c: &mut Cursor) -> Result<Stmt, ParseError> {
    if c.eat_keyword("skip") {
        return Ok(Stmt::Skip);
    }
    if c.eat_keyword("if") {
        let b = bexp(c)?;
        c.expect_keyword("then")?;
        let s1 = simple(c)?;
        c.expect_keyword("else")?;
        let s2 = simple(c)?;
        return Ok(Stmt::if_then_else(b, s1, s2));
    }
    if c.eat_keyword("while") {
        let b = bexp(c)?;
        c.expect_keyword("do")?;
        let body = simple(c)?;
        return Ok(Stmt::while_do(b, body));
    }
    if c.eat_sym("(") {
        let s = stmt(c)?;
        c.expect_sym(")")?;
        return Ok(s);
    }
    let x = c.ident(KEYWORDS)?;
    c.expect_sym(":=")?;
    Ok(Stmt::Assign(x, aexp(c)?))
}

pub(crate) fn aexp(c: &mut Cursor) -> Result<AExp, ParseError> {
    let mut acc = term(c)?;
    loop {
        if c.eat_sym("+") {
            acc = AExp::Add(Box::new(acc), Box::new(term(c)?));
        } else if c.eat_sym("-") {
            acc = AExp::Sub(Box::new(acc), Box::new(term(c)?));
        } else {
            return Ok(acc);
        }
    }
}

fn term(c: &mut Cursor) -> Result<AExp, ParseError> {
    let mut acc = atom(c)?;
    while c.eat_sym("*") {
        acc = AExp::Mul(Box::new(acc), Box::new(atom(c)?));
    }
    Ok(acc)
}

fn atom(c: &mut Cursor) -> Result<AExp, ParseError> {
    if let Some(n) = c.signed_literal() {
        return Ok(AExp::Num(n.parse().expect("digits")));
    }
    if c.eat_sym("(") {
        let a = aexp(c)?;
        c.expect_sym(")")?;
        return Ok(a);
    }
    Ok(AExp::Var(c.ident(KEYWORDS)?))
}

pub(crate) fn bexp(c: &mut Cursor) -> Result<BExp, ParseError> {
    let mut acc = bnot(c)?;
    while c.eat_keyword("and") || c.eat_sym("∧") || c.eat_sym("&&") {
        acc = BExp::And(Box::new(acc), Box::new(bnot(c)?));
    }
    Ok(acc)
}

fn bnot(c: &mut Cursor) -> Result<BExp, ParseError> {
    if c.eat_keyword("not") || c.eat_sym("¬") || c.eat_sym("!") {
        return Ok(BExp::Not(Box::new(bnot(c)?)));
    }
    if c.eat_keyword("true") {
        return Ok(BExp::True);
    }
    if c.eat_keyword("false") {
        return Ok(BExp::False);
    }
    if let Ok(b) = c.attempt(comparison) {
        return Ok(b);
    }
    if c.eat_sym("(") {
        let b = bexp(c)?;
        c.expect_sym(")")?;
        return Ok(b);
    }
    Err(c.error(format!("expected a boolean expression, found {}", c.peek())))
}

fn comparison(c: &mut Cursor) -> Result<BExp, ParseError> {
    let a = aexp(c)?;
    if c.eat_sym("=") {
        Ok(BExp::Eq(a, aexp(c)?))
    } else if c.eat_sym("<") {
        Ok(BExp::Lt(a, aexp(c)?))
    } else if c.eat_sym("<=") || c.eat_sym("≤") {
        Ok(BExp::Not(Box::new(BExp::Lt(aexp(c)?, a))))
    } else {
        Err(c.error(format!("expected a comparison, found {}", c.peek())))
    }
}
