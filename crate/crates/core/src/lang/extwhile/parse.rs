use std::collections::BTreeMap;
use std::sync::Arc;

use super::ast::{AExp, AOp, BExp, COp, Function, Program, Stmt};
use super::state::ExtState;
use crate::syntax::{Cursor, ParseError};

pub const KEYWORDS: &[&str] = &[
    "skip", "if", "then", "else", "while", "do", "true", "false", "and", "not", "var", "array",
    "call", "fun", "returns", "mem", "next",
];

fn literal(c: &mut Cursor) -> Result<i64, ParseError> {
    let pos = c.pos();
    let text = c
        .signed_literal()
        .ok_or_else(|| c.error(format!("expected an integer, found {}", c.peek())))?;
    text.parse()
        .map_err(|_| ParseError::new(pos, format!("integer literal `{text}` out of range")))
}

/// A program file: function definitions followed by an optional main statement.
pub fn parse_program(src: &str) -> Result<(Program, Option<Stmt>), ParseError> {
    let mut c = Cursor::new(src)?;
    let mut program = Program::default();
    let mut call_sites = Vec::new();
    while c.is_keyword("fun") {
        let pos = c.pos();
        c.bump();
        let name = c.ident(KEYWORDS)?;
        let params = name_list(&mut c)?;
        let mut returns = Vec::new();
        if c.eat_keyword("returns") {
            returns = if c.is_sym("(") {
                name_list(&mut c)?
            } else {
                vec![c.ident(KEYWORDS)?]
            };
        }
        for (i, p) in params.iter().enumerate() {
            if params[..i].contains(p) {
                return Err(ParseError::new(pos, format!("duplicate parameter `{p}` in `{name}`")));
            }
        }
        c.expect_sym("{")?;
        let body = stmt(&mut c)?;
        c.expect_sym("}")?;
        call_sites.push((pos, body.clone()));
        if program.functions.contains_key(&name) {
            return Err(ParseError::new(pos, format!("function `{name}` defined twice")));
        }
        program.functions.insert(
            name,
            Function {
                params,
                returns,
                body: Arc::new(body),
            },
        );
    }
    let main = if c.at_end() {
        None
    } else {
        let pos = c.pos();
        let s = stmt(&mut c)?;
        call_sites.push((pos, s.clone()));
        Some(s)
    };
    c.expect_end()?;
    for (pos, s) in &call_sites {
        check_arity(&program, s).map_err(|m| ParseError::new(*pos, m))?;
    }
    Ok((program, main))
}

/// Checks every call to a defined function against its signature.
/// Calls to undefined functions are accepted (they are stuck at run time).
pub fn check_arity(program: &Program, s: &Stmt) -> Result<(), String> {
    for (f, args, recv) in s.calls() {
        if let Some(fun) = program.get(f) {
            if fun.params.len() != args || fun.returns.len() != recv {
                return Err(format!(
                    "call to `{f}` with {args} arguments and {recv} receivers; `{f}` takes {} and returns {}",
                    fun.params.len(),
                    fun.returns.len()
                ));
            }
        }
    }
    Ok(())
}

fn name_list(c: &mut Cursor) -> Result<Vec<String>, ParseError> {
    c.expect_sym("(")?;
    let mut out = Vec::new();
    if c.eat_sym(")") {
        return Ok(out);
    }
    loop {
        out.push(c.ident(KEYWORDS)?);
        if c.eat_sym(")") {
            return Ok(out);
        }
        c.expect_sym(",")?;
    }
}

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

fn stmt(c: &mut Cursor) -> Result<Stmt, ParseError> {
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
    if c.eat_keyword("var") {
        return Ok(Stmt::VarDecl(c.ident(KEYWORDS)?));
    }
    if c.eat_keyword("array") {
        let x = c.ident(KEYWORDS)?;
        c.expect_sym("[")?;
        let pos = c.pos();
        let n = literal(c)?;
        if n < 0 {
            return Err(ParseError::new(pos, "array size must be non-negative"));
        }
        c.expect_sym("]")?;
        return Ok(Stmt::ArrayDecl(x, n));
    }
    if c.eat_keyword("call") {
        let fun = c.ident(KEYWORDS)?;
        c.expect_sym("(")?;
        let mut args = Vec::new();
        while !c.is_sym(";") && !c.is_sym(")") {
            args.push(aexp(c)?);
            if !c.eat_sym(",") {
                break;
            }
        }
        let mut receivers = Vec::new();
        if c.eat_sym(";") {
            while !c.is_sym(")") {
                receivers.push(c.ident(KEYWORDS)?);
                if !c.eat_sym(",") {
                    break;
                }
            }
        }
        c.expect_sym(")")?;
        return Ok(Stmt::Call {
            fun,
            args,
            receivers,
        });
    }
    if c.eat_keyword("if") {
        let b = bexp(c)?;
        c.expect_keyword("then")?;
        let s1 = simple(c)?;
        c.expect_keyword("else")?;
        let s2 = simple(c)?;
        return Ok(Stmt::If(b, Arc::new(s1), Arc::new(s2)));
    }
    if c.eat_keyword("while") {
        let b = bexp(c)?;
        c.expect_keyword("do")?;
        let body = simple(c)?;
        return Ok(Stmt::While(b, Arc::new(body)));
    }
    if c.eat_sym("(") {
        let s = stmt(c)?;
        c.expect_sym(")")?;
        return Ok(s);
    }
    let x = c.ident(KEYWORDS)?;
    if c.eat_sym("[") {
        let i = aexp(c)?;
        c.expect_sym("]")?;
        c.expect_sym(":=")?;
        return Ok(Stmt::ArrayAssign(x, i, aexp(c)?));
    }
    c.expect_sym(":=")?;
    Ok(Stmt::Assign(x, aexp(c)?))
}

fn aexp(c: &mut Cursor) -> Result<AExp, ParseError> {
    let mut acc = term(c)?;
    loop {
        let op = if c.eat_sym("+") {
            AOp::Add
        } else if c.eat_sym("-") {
            AOp::Sub
        } else {
            return Ok(acc);
        };
        acc = AExp::bin(op, acc, term(c)?);
    }
}

fn term(c: &mut Cursor) -> Result<AExp, ParseError> {
    let mut acc = atom(c)?;
    loop {
        let op = if c.eat_sym("*") {
            AOp::Mul
        } else if c.eat_sym("/") {
            AOp::Div
        } else {
            return Ok(acc);
        };
        acc = AExp::bin(op, acc, atom(c)?);
    }
}

fn atom(c: &mut Cursor) -> Result<AExp, ParseError> {
    if matches!(c.peek(), crate::syntax::Token::Num(_))
        || (c.is_sym("-") && matches!(c.peek_at(1), crate::syntax::Token::Num(_)))
    {
        return Ok(AExp::Num(literal(c)?));
    }
    if c.eat_sym("(") {
        let a = aexp(c)?;
        c.expect_sym(")")?;
        return Ok(a);
    }
    let x = c.ident(KEYWORDS)?;
    if c.eat_sym("[") {
        let i = aexp(c)?;
        c.expect_sym("]")?;
        return Ok(AExp::Index(x, Box::new(i)));
    }
    Ok(AExp::Name(x))
}

fn bexp(c: &mut Cursor) -> Result<BExp, ParseError> {
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
    let not = |b: BExp| BExp::Not(Box::new(b));
    if c.eat_sym("=") {
        Ok(BExp::Cmp(COp::Eq, a, aexp(c)?))
    } else if c.eat_sym("<") {
        Ok(BExp::Cmp(COp::Lt, a, aexp(c)?))
    } else if c.eat_sym("<=") || c.eat_sym("≤") {
        Ok(not(BExp::Cmp(COp::Lt, aexp(c)?, a)))
    } else if c.eat_sym(">") {
        Ok(BExp::Cmp(COp::Lt, aexp(c)?, a))
    } else if c.eat_sym(">=") || c.eat_sym("≥") {
        Ok(not(BExp::Cmp(COp::Lt, a, aexp(c)?)))
    } else {
        Err(c.error(format!("expected a comparison, found {}", c.peek())))
    }
}

/// Initial or printed states.
///
/// Name section: `x = 3`, `S = [1, 3, 5] @ 2` (array of size 2+3 holding the
/// list from index 2), `T[5]` (zero array). Arrays are allocated in order from
/// the next fresh location, which starts at 0. Optional `mem loc:val, ...` and
/// `next N` sections, separated by `;`, override memory and the next location.
pub fn parse_state(src: &str) -> Result<ExtState, ParseError> {
    let mut c = Cursor::new(src)?;
    let mut st = ExtState::default();
    let mut mem = BTreeMap::new();
    let mut next = None;
    loop {
        if c.at_end() {
            break;
        }
        if c.eat_keyword("mem") {
            while !c.at_end() && !c.is_sym(";") {
                let loc = literal(&mut c)?;
                c.expect_sym(":")?;
                mem.insert(loc, literal(&mut c)?);
                c.eat_sym(",");
            }
        } else if c.eat_keyword("next") {
            next = Some(literal(&mut c)?);
        } else {
            while !c.at_end() && !c.is_sym(";") {
                st = binding(&mut c, st)?;
                c.eat_sym(",");
            }
        }
        if !c.eat_sym(";") {
            break;
        }
    }
    c.expect_end()?;
    for (loc, v) in mem {
        st = st.with_loc(loc, v);
    }
    if let Some(n) = next {
        st.nextloc = n;
    }
    Ok(st)
}

fn binding(c: &mut Cursor, st: ExtState) -> Result<ExtState, ParseError> {
    let x = c.ident(KEYWORDS)?;
    if c.eat_sym("[") {
        let pos = c.pos();
        let n = literal(c)?;
        if n < 0 {
            return Err(ParseError::new(pos, "array size must be non-negative"));
        }
        c.expect_sym("]")?;
        return Ok(st.alloc(&x, &vec![0; n as usize]));
    }
    c.expect_sym("=")?;
    if c.eat_sym("[") {
        let mut items = Vec::new();
        while !c.is_sym("]") {
            items.push(literal(c)?);
            if !c.eat_sym(",") {
                break;
            }
        }
        c.expect_sym("]")?;
        let mut offset = 0;
        if c.eat_sym("@") {
            let pos = c.pos();
            offset = literal(c)?;
            if offset < 0 {
                return Err(ParseError::new(pos, "array offset must be non-negative"));
            }
        }
        let mut contents = vec![0; offset as usize];
        contents.extend(items);
        return Ok(st.alloc(&x, &contents));
    }
    Ok(st.with_name(&x, literal(c)?))
}
