use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Lt,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Bin(BinOp, Arc<Expr>, Arc<Expr>),
    Not(Arc<Expr>),
    And(Arc<Expr>, Arc<Expr>),
    If(Arc<Expr>, Arc<Expr>, Arc<Expr>),
    Nil,
    Cons(Arc<Expr>, Arc<Expr>),
    /// `listcase e of (on_nil, on_cons)`.
    ListCase(Arc<Expr>, Arc<Expr>, Arc<Expr>),
    Var(String),
    App(Arc<Expr>, Arc<Expr>),
    Lam(String, Arc<Expr>),
    /// `letrec f = λx. bound in body`.
    LetRec {
        f: String,
        x: String,
        bound: Arc<Expr>,
        body: Arc<Expr>,
    },
}

/// Fully evaluated expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Canonical {
    Int(i64),
    Bool(bool),
    Lam(String, Arc<Expr>),
    Nil,
    Cons(Arc<Canonical>, Arc<Canonical>),
}

impl Expr {
    pub fn var(x: &str) -> Arc<Expr> {
        Arc::new(Expr::Var(x.to_string()))
    }

    pub fn app(f: Arc<Expr>, a: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::App(f, a))
    }

    pub fn lam(x: &str, body: Arc<Expr>) -> Arc<Expr> {
        Arc::new(Expr::Lam(x.to_string(), body))
    }
}

impl Canonical {
    pub fn to_expr(&self) -> Arc<Expr> {
        Arc::new(match self {
            Canonical::Int(n) => Expr::Int(*n),
            Canonical::Bool(b) => Expr::Bool(*b),
            Canonical::Lam(x, e) => Expr::Lam(x.clone(), Arc::clone(e)),
            Canonical::Nil => Expr::Nil,
            Canonical::Cons(h, t) => Expr::Cons(h.to_expr(), t.to_expr()),
        })
    }

    /// The list canonical form holding `items`.
    pub fn list(items: &[i64]) -> Canonical {
        items.iter().rev().fold(Canonical::Nil, |acc, v| {
            Canonical::Cons(Arc::new(Canonical::Int(*v)), Arc::new(acc))
        })
    }

    /// The integer list a list canonical form represents; `None` when some
    /// element is not an integer or the spine does not end in `nil`.
    pub fn int_list(&self) -> Option<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Canonical::Nil => return Some(out),
                Canonical::Cons(h, t) => match **h {
                    Canonical::Int(v) => {
                        out.push(v);
                        cur = t;
                    }
                    _ => return None,
                },
                _ => return None,
            }
        }
    }
}

/// Recognizes canonical forms.
pub fn as_canonical(e: &Expr) -> Option<Canonical> {
    match e {
        Expr::Int(n) => Some(Canonical::Int(*n)),
        Expr::Bool(b) => Some(Canonical::Bool(*b)),
        Expr::Lam(x, body) => Some(Canonical::Lam(x.clone(), Arc::clone(body))),
        Expr::Nil => Some(Canonical::Nil),
        Expr::Cons(h, t) => Some(Canonical::Cons(
            Arc::new(as_canonical(h)?),
            Arc::new(as_canonical(t)?),
        )),
        _ => None,
    }
}

/// Substitutes `c` for the variable `x` in `e`, without renaming bound variables.
pub fn subst(e: &Arc<Expr>, x: &str, c: &Canonical) -> Arc<Expr> {
    let go = |e: &Arc<Expr>| subst(e, x, c);
    match &**e {
        Expr::Int(_) | Expr::Bool(_) | Expr::Nil => Arc::clone(e),
        Expr::Var(y) if y == x => c.to_expr(),
        Expr::Var(_) => Arc::clone(e),
        Expr::Bin(op, a, b) => Arc::new(Expr::Bin(*op, go(a), go(b))),
        Expr::Not(a) => Arc::new(Expr::Not(go(a))),
        Expr::And(a, b) => Arc::new(Expr::And(go(a), go(b))),
        Expr::If(a, b, d) => Arc::new(Expr::If(go(a), go(b), go(d))),
        Expr::Cons(a, b) => Arc::new(Expr::Cons(go(a), go(b))),
        Expr::ListCase(a, b, d) => Arc::new(Expr::ListCase(go(a), go(b), go(d))),
        Expr::App(a, b) => Arc::new(Expr::App(go(a), go(b))),
        Expr::Lam(y, _) if y == x => Arc::clone(e),
        Expr::Lam(y, body) => Arc::new(Expr::Lam(y.clone(), go(body))),
        Expr::LetRec { f, x: y, bound, body } => {
            // The bound λ is substituted as a λ-abstraction: its own binder may shadow `x`.
            let bound = if y == x { Arc::clone(bound) } else { go(bound) };
            let body = if f == x { Arc::clone(body) } else { go(body) };
            Arc::new(Expr::LetRec {
                f: f.clone(),
                x: y.clone(),
                bound,
                body,
            })
        }
    }
}

// Printing levels, loosest first; the parser uses the same table.
const BINDER: u8 = 0;
const AND: u8 = 1;
const NOT: u8 = 2;
pub(super) const CMP: u8 = 3;
const CONS: u8 = 4;
const SUM: u8 = 5;
const PRODUCT: u8 = 6;
const APP: u8 = 7;
const ATOM: u8 = 8;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Lam(..) | Expr::LetRec { .. } | Expr::If(..) | Expr::ListCase(..) => BINDER,
        Expr::And(..) => AND,
        Expr::Not(_) => NOT,
        Expr::Bin(BinOp::Eq | BinOp::Lt, ..) => CMP,
        Expr::Cons(..) => CONS,
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => SUM,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => PRODUCT,
        Expr::App(..) => APP,
        Expr::Int(n) if *n < 0 => APP,
        _ => ATOM,
    }
}

struct At<'a>(&'a Expr, u8);

impl fmt::Display for At<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if level(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Bool(b) => write!(f, "{b}"),
            Expr::Nil => write!(f, "nil"),
            Expr::Var(x) => write!(f, "{x}"),
            Expr::Bin(op, a, b) => {
                let (sym, l, r) = match op {
                    BinOp::Add => ("+", SUM, PRODUCT),
                    BinOp::Sub => ("-", SUM, PRODUCT),
                    BinOp::Mul => ("*", PRODUCT, APP),
                    BinOp::Div => ("/", PRODUCT, APP),
                    BinOp::Eq => ("=", CONS, CONS),
                    BinOp::Lt => ("<", CONS, CONS),
                };
                write!(f, "{} {sym} {}", At(a, l), At(b, r))
            }
            Expr::Not(a) => write!(f, "not {}", At(a, NOT)),
            Expr::And(a, b) => write!(f, "{} and {}", At(a, AND), At(b, NOT)),
            Expr::If(c, a, b) => write!(f, "if {c} then {a} else {b}"),
            Expr::Cons(h, t) => write!(f, "{}::{}", At(h, SUM), At(t, CONS)),
            Expr::ListCase(e, a, b) => write!(f, "listcase {e} of ({a}, {b})"),
            Expr::App(a, b) => write!(f, "{} {}", At(a, APP), At(b, ATOM)),
            Expr::Lam(x, body) => write!(f, "λ{x}. {body}"),
            Expr::LetRec { f: g, x, bound, body } => {
                write!(f, "letrec {g} = λ{x}. {bound} in {body}")
            }
        }
    }
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}
