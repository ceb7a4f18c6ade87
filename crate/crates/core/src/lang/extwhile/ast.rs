use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum COp {
    Eq,
    Lt,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AExp {
    Num(i64),
    /// A variable or an array identifier; both read the store directly.
    Name(String),
    Index(String, Box<AExp>),
    Bin(AOp, Box<AExp>, Box<AExp>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BExp {
    True,
    False,
    Cmp(COp, AExp, AExp),
    And(Box<BExp>, Box<BExp>),
    Not(Box<BExp>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Stmt {
    Skip,
    VarDecl(String),
    ArrayDecl(String, i64),
    Assign(String, AExp),
    ArrayAssign(String, AExp, AExp),
    Seq(Arc<Stmt>, Arc<Stmt>),
    If(BExp, Arc<Stmt>, Arc<Stmt>),
    While(BExp, Arc<Stmt>),
    Call {
        fun: String,
        args: Vec<AExp>,
        receivers: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Function {
    pub params: Vec<String>,
    pub returns: Vec<String>,
    pub body: Arc<Stmt>,
}

/// Function table. Identifiers without an entry are undefined functions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub functions: BTreeMap<String, Function>,
}

impl Program {
    pub fn get(&self, f: &str) -> Option<&Function> {
        self.functions.get(f)
    }
}

impl AExp {
    pub fn name(x: &str) -> Self {
        AExp::Name(x.to_string())
    }

    pub fn bin(op: AOp, a: AExp, b: AExp) -> Self {
        AExp::Bin(op, Box::new(a), Box::new(b))
    }
}

impl Stmt {
    pub fn seq(a: Stmt, b: Stmt) -> Self {
        Stmt::Seq(Arc::new(a), Arc::new(b))
    }

    /// Calls reachable in this statement, for arity checking.
    pub fn calls(&self) -> Vec<(&str, usize, usize)> {
        let mut out = Vec::new();
        self.collect_calls(&mut out);
        out
    }

    fn collect_calls<'a>(&'a self, out: &mut Vec<(&'a str, usize, usize)>) {
        match self {
            Stmt::Seq(a, b) | Stmt::If(_, a, b) => {
                a.collect_calls(out);
                b.collect_calls(out);
            }
            Stmt::While(_, s) => s.collect_calls(out),
            Stmt::Call {
                fun,
                args,
                receivers,
            } => out.push((fun, args.len(), receivers.len())),
            _ => {}
        }
    }
}

impl fmt::Display for AOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AOp::Add => "+",
            AOp::Sub => "-",
            AOp::Mul => "*",
            AOp::Div => "/",
        })
    }
}

fn prec(a: &AExp) -> u8 {
    match a {
        AExp::Bin(AOp::Add | AOp::Sub, ..) => 1,
        AExp::Bin(AOp::Mul | AOp::Div, ..) => 2,
        _ => 3,
    }
}

struct Paren<'a>(&'a AExp, u8);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if prec(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for AExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AExp::Num(n) => write!(f, "{n}"),
            AExp::Name(x) => write!(f, "{x}"),
            AExp::Index(x, i) => write!(f, "{x}[{i}]"),
            AExp::Bin(op, a, b) => {
                let p = prec(self);
                write!(f, "{} {op} {}", Paren(a, p), Paren(b, p + 1))
            }
        }
    }
}

impl fmt::Display for BExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BExp::True => write!(f, "true"),
            BExp::False => write!(f, "false"),
            BExp::Cmp(COp::Eq, a, b) => write!(f, "{a} = {b}"),
            BExp::Cmp(COp::Lt, a, b) => write!(f, "{a} < {b}"),
            BExp::Not(b) => match &**b {
                BExp::Cmp(COp::Lt, x, y) => write!(f, "{y} <= {x}"),
                BExp::And(..) => write!(f, "not ({b})"),
                _ => write!(f, "not {b}"),
            },
            BExp::And(a, b) => match &**b {
                BExp::And(..) => write!(f, "{a} and ({b})"),
                _ => write!(f, "{a} and {b}"),
            },
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

fn comma_list<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Skip => write!(f, "skip"),
            Stmt::VarDecl(x) => write!(f, "var {x}"),
            Stmt::ArrayDecl(x, n) => write!(f, "array {x}[{n}]"),
            Stmt::Assign(x, a) => write!(f, "{x} := {a}"),
            Stmt::ArrayAssign(x, i, a) => write!(f, "{x}[{i}] := {a}"),
            Stmt::Seq(a, b) => write!(f, "{}; {b}", Simple(a)),
            Stmt::If(b, s1, s2) => write!(f, "if {b} then {} else {}", Simple(s1), Simple(s2)),
            Stmt::While(b, s) => write!(f, "while {b} do {}", Simple(s)),
            Stmt::Call {
                fun,
                args,
                receivers,
            } if receivers.is_empty() => write!(f, "call {fun}({})", comma_list(args)),
            Stmt::Call {
                fun,
                args,
                receivers,
            } => write!(f, "call {fun}({}; {})", comma_list(args), comma_list(receivers)),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, fun) in &self.functions {
            write!(f, "fun {name}({})", fun.params.join(", "))?;
            if !fun.returns.is_empty() {
                write!(f, " returns ({})", fun.returns.join(", "))?;
            }
            writeln!(f, " {{ {} }}", fun.body)?;
        }
        Ok(())
    }
}
