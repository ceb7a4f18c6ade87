use std::sync::Arc;

use super::ast::{BinOp, Expr};
use crate::syntax::{Cursor, ParseError, Token};

pub const KEYWORDS: &[&str] = &[
    "true", "false", "nil", "if", "then", "else", "listcase", "of", "letrec", "in", "not", "and",
];

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut c = Cursor::new(src)?;
    let e = expr(&mut c)?;
    c.expect_end()?;
    Ok(Arc::try_unwrap(e).unwrap_or_else(|e| (*e).clone()))
}

fn lambda_sym(c: &mut Cursor) -> bool {
    c.eat_sym("\\") || c.eat_sym("λ")
}

fn expr(c: &mut Cursor) -> Result<Arc<Expr>, ParseError> {
    if lambda_sym(c) {
        let x = c.ident(KEYWORDS)?;
        c.expect_sym(".")?;
        return Ok(Arc::new(Expr::Lam(x, expr(c)?)));
    }
    if c.eat_keyword("letrec") {
        let f = c.ident(KEYWORDS)?;
        c.expect_sym("=")?;
        if !lambda_sym(c) {
            return Err(c.error("letrec must bind a λ-abstraction"));
        }
        let x = c.ident(KEYWORDS)?;
        c.expect_sym(".")?;
        let bound = expr(c)?;
        c.expect_keyword("in")?;
        let body = expr(c)?;
        return Ok(Arc::new(Expr::LetRec { f, x, bound, body }));
    }
    if c.eat_keyword("if") {
        let cond = expr(c)?;
        c.expect_keyword("then")?;
        let a = expr(c)?;
        c.expect_keyword("else")?;
        let b = expr(c)?;
        return Ok(Arc::new(Expr::If(cond, a, b)));
    }
    if c.eat_keyword("listcase") {
        let scrutinee = expr(c)?;
        c.expect_keyword("of")?;
        c.expect_sym("(")?;
        let on_nil = expr(c)?;
        c.expect_sym(",")?;
        let on_cons = expr(c)?;
        c.expect_sym(")")?;
        return Ok(Arc::new(Expr::ListCase(scrutinee, on_nil, on_cons)));
    }
    conjunction(c)
}

fn conjunction(c: &mut Cursor) -> Result<Arc<Expr>, ParseError> {
    let mut acc = negation(c)?;
    while c.eat_keyword("and") || c.eat_sym("∧") || c.eat_sym("&&") {
        acc = Arc::new(Expr::And(acc, negation(c)?));
    }
    Ok(acc)
}

fn negation(c: &mut Cursor) -> Result<Arc<Expr>, ParseError> {
    if c.eat_keyword("not") || c.eat_sym("¬") || c.eat_sym("!") {
        return Ok(Arc::new(Expr::Not(negation(c)?)));
    }
    comparison(c)
}

fn comparison(c: &mut Cursor) -> Result<Arc<Expr>, ParseError> {
    let a = cons(c)?;
    let bin = |op, a, b| Arc::new(Expr::Bin(op, a, b));
    if c.eat_sym("=") {
        Ok(bin(BinOp::Eq, a, cons(c)?))
    } else if c.eat_sym("<") {
        Ok(bin(BinOp::Lt, a, cons(c)?))
    } else if c.eat_sym("<=") || c.eat_sym("≤") {
        let b = cons(c)?;
        Ok(Arc::new(Expr::Not(bin(BinOp::Lt, b, a))))
    } else if c.eat_sym(">") {
        Ok(bin(BinOp::Lt, cons(c)?, a))
    } else if c.eat_sym(">=") || c.eat_sym("≥") {
        let b = cons(c)?;
        Ok(Arc::new(Expr::Not(bin(BinOp::Lt, a, b))))
    } else {
        Ok(a)
    }
}

fn cons(c: &mut Cursor) -> Result<Arc<Expr>, ParseError> {
    let head = sum(c)?;
    if c.eat_sym("::") {
        Ok(Arc::new(Expr::Cons(head, cons(c)?)))
    } else {
        Ok(head)
    }
}

fn sum(c: &mut Cursor) -> Result<Arc<Expr>, ParseError> {
    let mut acc = product(c)?;
    loop {
        let op = if c.eat_sym("+") {
            BinOp::Add
        } else if c.eat_sym("-") {
            BinOp::Sub
        } else {
            return Ok(acc);
        };
        acc = Arc::new(Expr::Bin(op, acc, product(c)?));
    }
}

fn product(c: &mut Cursor) -> Result<Arc<Expr>, ParseError> {
    let mut acc = application(c)?;
    loop {
        let op = if c.eat_sym("*") {
            BinOp::Mul
        } else if c.eat_sym("/") {
            BinOp::Div
        } else {
            return Ok(acc);
        };
        acc = Arc::new(Expr::Bin(op, acc, application(c)?));
    }
}

fn application(c: &mut Cursor) -> Result<Arc<Expr>, ParseError> {
    let mut acc = if c.is_sym("-") {
        let pos = c.pos();
        let text = c
            .signed_literal()
            .ok_or_else(|| c.error("expected an expression, found `-`"))?;
        Arc::new(Expr::Int(int(&text, pos)?))
    } else {
        atom(c)?
    };
    while starts_atom(c) {
        acc = Arc::new(Expr::App(acc, atom(c)?));
    }
    Ok(acc)
}

fn starts_atom(c: &Cursor) -> bool {
    match c.peek() {
        Token::Num(_) => true,
        Token::Sym(s) => *s == "(",
        Token::Ident(s) => ["true", "false", "nil"].contains(&s.as_str()) || !KEYWORDS.contains(&s.as_str()),
        Token::Eof => false,
    }
}

fn int(text: &str, pos: crate::syntax::Pos) -> Result<i64, ParseError> {
    text.parse()
        .map_err(|_| ParseError::new(pos, format!("integer literal `{text}` out of range")))
}

fn atom(c: &mut Cursor) -> Result<Arc<Expr>, ParseError> {
    let pos = c.pos();
    match c.peek().clone() {
        Token::Num(n) => {
            c.bump();
            Ok(Arc::new(Expr::Int(int(&n, pos)?)))
        }
        Token::Sym("(") => {
            c.bump();
            let e = expr(c)?;
            c.expect_sym(")")?;
            Ok(e)
        }
        Token::Ident(s) if s == "true" || s == "false" => {
            c.bump();
            Ok(Arc::new(Expr::Bool(s == "true")))
        }
        Token::Ident(s) if s == "nil" => {
            c.bump();
            Ok(Arc::new(Expr::Nil))
        }
        _ => Ok(Arc::new(Expr::Var(c.ident(KEYWORDS)?))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(src: &str) {
        let e = parse_expr(src).unwrap();
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{src} printed as {e}");
    }

    #[test]
    fn precedence() {
        let e = parse_expr("f x y + 1 :: nil").unwrap();
        let Expr::Cons(h, _) = e else { panic!() };
        assert!(matches!(&*h, Expr::Bin(BinOp::Add, f, _) if matches!(**f, Expr::App(..))));
        assert!(matches!(parse_expr("not a < b and c").unwrap(), Expr::And(..)));
    }

    #[test]
    fn cons_is_right_associative() {
        let e = parse_expr("1 :: 2 :: nil").unwrap();
        assert!(matches!(e, Expr::Cons(_, ref t) if matches!(**t, Expr::Cons(..))));
    }

    #[test]
    fn less_or_equal_desugars() {
        assert_eq!(parse_expr("i <= j").unwrap(), parse_expr("not (j < i)").unwrap());
    }

    #[test]
    fn letrec_requires_lambda() {
        assert!(parse_expr("letrec f = 3 in f").is_err());
        assert!(parse_expr("letrec f = \\x. f x in f 1").is_ok());
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "λx. x + 1",
            "(λx. x) 3",
            "f (-3) (g x)",
            "x - -3",
            "(1 :: nil) :: nil",
            "(if a then b else c) d",
            "listcase l of (0, \\h.\\t. h + 1)",
            "letrec f = \\x. if x < 1 then 0 else f (x - 1) in f 5",
            "not (a and b)",
            "(a = b) = c",
            "1 - (2 - 3)",
        ] {
            round_trip(src);
        }
    }
}
