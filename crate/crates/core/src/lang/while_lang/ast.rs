use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AExp {
    Num(BigInt),
    Var(String),
    Add(Box<AExp>, Box<AExp>),
    Sub(Box<AExp>, Box<AExp>),
    Mul(Box<AExp>, Box<AExp>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BExp {
    True,
    False,
    Eq(AExp, AExp),
    Lt(AExp, AExp),
    And(Box<BExp>, Box<BExp>),
    Not(Box<BExp>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Stmt {
    Skip,
    Assign(String, AExp),
    Seq(Arc<Stmt>, Arc<Stmt>),
    If(BExp, Arc<Stmt>, Arc<Stmt>),
    While(BExp, Arc<Stmt>),
}

impl AExp {
    pub fn num(n: impl Into<BigInt>) -> Self {
        AExp::Num(n.into())
    }

    pub fn var(x: &str) -> Self {
        AExp::Var(x.to_string())
    }
}

impl Stmt {
    pub fn assign(x: &str, a: AExp) -> Self {
        Stmt::Assign(x.to_string(), a)
    }

    pub fn seq(a: Stmt, b: Stmt) -> Self {
        Stmt::Seq(Arc::new(a), Arc::new(b))
    }

    pub fn while_do(b: BExp, body: Stmt) -> Self {
        Stmt::While(b, Arc::new(body))
    }

    pub fn if_then_else(b: BExp, s1: Stmt, s2: Stmt) -> Self {
        Stmt::If(b, Arc::new(s1), Arc::new(s2))
    }
}

/// A total map from variables to integers; unmentioned variables are 0.
///
/// Equality and hashing ignore entries holding 0, so `{m=0}` equals `{}`.
/// Printing keeps every stored entry.
#[derive(Debug, Clone, Default)]
pub struct WhileState {
    vars: BTreeMap<String, BigInt>,
}

impl WhileState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: &str) -> BigInt {
        self.vars.get(x).cloned().unwrap_or_default()
    }

    pub fn set(&self, x: &str, v: BigInt) -> Self {
        let mut vars = self.vars.clone();
        vars.insert(x.to_string(), v);
        WhileState { vars }
    }

    pub fn with(mut self, x: &str, v: impl Into<BigInt>) -> Self {
        self.vars.insert(x.to_string(), v.into());
        self
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &BigInt)> {
        self.vars.iter()
    }

    fn nonzero(&self) -> impl Iterator<Item = (&String, &BigInt)> {
        self.vars.iter().filter(|(_, v)| !v.is_zero())
    }
}

impl PartialEq for WhileState {
    fn eq(&self, other: &Self) -> bool {
        self.nonzero().eq(other.nonzero())
    }
}

impl Eq for WhileState {}

impl Hash for WhileState {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for (k, v) in self.nonzero() {
            k.hash(state);
            v.hash(state);
        }
    }
}

impl fmt::Display for WhileState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

pub fn aeval(a: &AExp, s: &WhileState) -> BigInt {
    match a {
        AExp::Num(n) => n.clone(),
        AExp::Var(x) => s.get(x),
        AExp::Add(a1, a2) => aeval(a1, s) + aeval(a2, s),
        AExp::Sub(a1, a2) => aeval(a1, s) - aeval(a2, s),
        AExp::Mul(a1, a2) => aeval(a1, s) * aeval(a2, s),
    }
}

pub fn beval(b: &BExp, s: &WhileState) -> bool {
    match b {
        BExp::True => true,
        BExp::False => false,
        BExp::Eq(a1, a2) => aeval(a1, s) == aeval(a2, s),
        BExp::Lt(a1, a2) => aeval(a1, s) < aeval(a2, s),
        BExp::And(b1, b2) => beval(b1, s) && beval(b2, s),
        BExp::Not(b) => !beval(b, s),
    }
}

// Printing mirrors the parser's precedence so that printed text parses back.

impl fmt::Display for AExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AExp::Num(n) => write!(f, "{n}"),
            AExp::Var(x) => write!(f, "{x}"),
            AExp::Add(a, b) => write!(f, "{a} + {}", Term(b)),
            AExp::Sub(a, b) => write!(f, "{a} - {}", Term(b)),
            AExp::Mul(a, b) => write!(f, "{} * {}", Term(a), Atom(b)),
        }
    }
}

struct Term<'a>(&'a AExp);
struct Atom<'a>(&'a AExp);

impl fmt::Display for Term<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            AExp::Add(..) | AExp::Sub(..) => write!(f, "({})", self.0),
            a => write!(f, "{a}"),
        }
    }
}

impl fmt::Display for Atom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            AExp::Num(_) | AExp::Var(_) => write!(f, "{}", self.0),
            a => write!(f, "({a})"),
        }
    }
}

impl fmt::Display for BExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BExp::And(a, b) => match **b {
                BExp::And(..) => write!(f, "{a} and ({b})"),
                _ => write!(f, "{a} and {b}"),
            },
            BExp::Not(b) => match **b {
                BExp::And(..) => write!(f, "not ({b})"),
                _ => write!(f, "not {b}"),
            },
            BExp::True => write!(f, "true"),
            BExp::False => write!(f, "false"),
            BExp::Eq(a, b) => write!(f, "{a} = {b}"),
            BExp::Lt(a, b) => write!(f, "{a} < {b}"),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Skip => write!(f, "skip"),
            Stmt::Assign(x, a) => write!(f, "{x} := {a}"),
            Stmt::Seq(a, b) => write!(f, "{}; {b}", Simple(a)),
            Stmt::If(b, s1, s2) => write!(f, "if {b} then {} else {}", Simple(s1), Simple(s2)),
            Stmt::While(b, s) => write!(f, "while {b} do {}", Simple(s)),
        }
    }
}

struct Simple<'a>(&'a Stmt);

impl fmt::Display for Simple<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Stmt::Seq(..) => write!(f, "({})", self.0),
            s => write!(f, "{s}"),
        }
    }
}
