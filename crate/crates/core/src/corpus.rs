//! Seeded configuration corpora for the checkers and the test suites.

use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lang::extwhile::{self as ext, merge_program, ExtConfig, ExtLang, ExtState, Program};
use crate::lang::fun::{merge_expr, BinOp, Canonical, Expr};
use crate::lang::while_lang::{self as wl, factorial_program, WhileConfig, WhileState};

fn rng(seed: u64, stream: &str) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64)));
    r
}

/// The factorial program started with `m` for each `m` in `ms`.
pub fn fac_corpus(ms: impl IntoIterator<Item = i64>) -> Vec<WhileConfig> {
    ms.into_iter()
        .map(|m| WhileConfig::new(factorial_program(), WhileState::new().with("m", m)))
        .collect()
}

/// A call of the array-merging function on two sorted fragments of `S`
/// starting at index `l`, writing into a separate array `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeInstance {
    pub l: i64,
    pub first: Vec<i64>,
    pub second: Vec<i64>,
    /// Initial contents of `S[0..l-1]` and of the whole of `T`.
    pub padding: Vec<i64>,
    pub target: Vec<i64>,
}

impl MergeInstance {
    pub fn m(&self) -> i64 {
        self.l + self.first.len() as i64 - 1
    }

    pub fn h(&self) -> i64 {
        self.m() + self.second.len() as i64
    }

    pub fn state(&self) -> ExtState {
        let mut s = self.padding.clone();
        s.extend(&self.first);
        s.extend(&self.second);
        ExtState::default().alloc("S", &s).alloc("T", &self.target)
    }

    pub fn config(&self) -> ExtConfig {
        let stmt = ext::Stmt::Call {
            fun: "merge".into(),
            args: vec![
                ext::AExp::name("S"),
                ext::AExp::name("T"),
                ext::AExp::Num(self.l),
                ext::AExp::Num(self.m()),
                ext::AExp::Num(self.h()),
            ],
            receivers: vec![],
        };
        ExtConfig::new(Arc::new(stmt), self.state(), Arc::clone(&merge_program().program))
    }
}

fn sorted_list(r: &mut impl Rng, lens: std::ops::RangeInclusive<usize>, lo: i64, hi: i64) -> Vec<i64> {
    let len = r.gen_range(lens);
    let mut v: Vec<i64> = (0..len).map(|_| r.gen_range(lo..=hi)).collect();
    v.sort();
    v
}

/// Fragments of length 1 to 5 with values in -3..3, `l` in {0, 1, 2}.
pub fn merge_instances(n: usize, seed: u64) -> Vec<MergeInstance> {
    let mut r = rng(seed, "merge-array");
    (0..n)
        .map(|_| {
            let l = r.gen_range(0..=2);
            let first = sorted_list(&mut r, 1..=5, -3, 3);
            let second = sorted_list(&mut r, 1..=5, -3, 3);
            let padding = (0..l).map(|_| r.gen_range(-3..=3)).collect();
            let size = l as usize + first.len() + second.len();
            let target = (0..size).map(|_| r.gen_range(-3..=3)).collect();
            MergeInstance {
                l,
                first,
                second,
                padding,
                target,
            }
        })
        .collect()
}

/// Pairs of sorted lists of length 0 to 5 with values in -5..5.
pub fn list_pairs(n: usize, seed: u64) -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut r = rng(seed, "list-pairs");
    (0..n)
        .map(|_| {
            let a = sorted_list(&mut r, 0..=5, -5, 5);
            let b = sorted_list(&mut r, 0..=5, -5, 5);
            (a, b)
        })
        .collect()
}

pub fn merge_list_corpus(pairs: &[(Vec<i64>, Vec<i64>)]) -> Vec<Arc<Expr>> {
    pairs
        .iter()
        .map(|(a, b)| merge_expr(&Canonical::list(a), &Canonical::list(b)))
        .collect()
}

// ---- random programs ----

/// Whether generated statements may contain loops (and recursion, for the
/// functional language).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loops {
    Allowed,
    Forbidden,
}

const WHILE_VARS: [&str; 3] = ["x", "y", "z"];

fn while_aexp(r: &mut impl Rng, depth: u32) -> wl::AExp {
    if depth == 0 || r.gen_bool(0.4) {
        return if r.gen_bool(0.5) {
            wl::AExp::Num(BigInt::from(r.gen_range(-3..=3)))
        } else {
            wl::AExp::var(WHILE_VARS.choose(r).unwrap())
        };
    }
    let (a, b) = (Box::new(while_aexp(r, depth - 1)), Box::new(while_aexp(r, depth - 1)));
    match r.gen_range(0..3) {
        0 => wl::AExp::Add(a, b),
        1 => wl::AExp::Sub(a, b),
        _ => wl::AExp::Mul(a, b),
    }
}

fn while_bexp(r: &mut impl Rng, depth: u32) -> wl::BExp {
    match r.gen_range(0..if depth == 0 { 4 } else { 6 }) {
        0 => wl::BExp::True,
        1 => wl::BExp::False,
        2 => wl::BExp::Eq(while_aexp(r, 1), while_aexp(r, 1)),
        3 => wl::BExp::Lt(while_aexp(r, 1), while_aexp(r, 1)),
        4 => wl::BExp::And(Box::new(while_bexp(r, depth - 1)), Box::new(while_bexp(r, depth - 1))),
        _ => wl::BExp::Not(Box::new(while_bexp(r, depth - 1))),
    }
}

fn while_stmt(r: &mut impl Rng, depth: u32, loops: Loops) -> wl::Stmt {
    let choices = match (depth, loops) {
        (0, _) => 2,
        (_, Loops::Forbidden) => 4,
        (_, Loops::Allowed) => 5,
    };
    match r.gen_range(0..choices) {
        0 => wl::Stmt::Skip,
        1 => wl::Stmt::assign(WHILE_VARS.choose(r).unwrap(), while_aexp(r, 2)),
        2 => wl::Stmt::seq(while_stmt(r, depth - 1, loops), while_stmt(r, depth - 1, loops)),
        3 => wl::Stmt::if_then_else(
            while_bexp(r, 1),
            while_stmt(r, depth - 1, loops),
            while_stmt(r, depth - 1, loops),
        ),
        _ => {
            // Count a variable towards a bound so that many loops terminate.
            let x = WHILE_VARS.choose(r).unwrap();
            let bound = wl::AExp::Num(BigInt::from(r.gen_range(0..=3)));
            let step = wl::Stmt::assign(x, wl::AExp::Add(Box::new(wl::AExp::var(x)), Box::new(wl::AExp::num(1))));
            let body = wl::Stmt::seq(while_stmt(r, depth - 1, loops), step);
            let guard = if r.gen_bool(0.8) {
                wl::BExp::Lt(wl::AExp::var(x), bound)
            } else {
                while_bexp(r, 1)
            };
            wl::Stmt::while_do(guard, body)
        }
    }
}

fn while_state(r: &mut impl Rng) -> WhileState {
    WHILE_VARS
        .iter()
        .fold(WhileState::new(), |s, x| s.with(x, r.gen_range(-3..=3)))
}

pub fn random_while_configs(n: usize, seed: u64, loops: Loops) -> Vec<WhileConfig> {
    let mut r = rng(seed, "while");
    (0..n)
        .map(|_| WhileConfig::new(Arc::new(while_stmt(&mut r, 3, loops)), while_state(&mut r)))
        .collect()
}

/// Small helper functions called by random extended-While statements.
pub const EXT_HELPERS: &str = "\
fun inc(a) returns r { r := a + 1 }
fun put(X, i, v) { X[i] := v }
fun swap(a, b) returns (c, d) { c := b; d := a }
";

pub fn ext_helpers() -> Arc<Program> {
    static P: LazyLock<Arc<Program>> =
        LazyLock::new(|| Arc::new(ext::parse_program(EXT_HELPERS).expect("helpers parse").0));
    Arc::clone(&P)
}

const EXT_VARS: [&str; 3] = ["x", "y", "v"];

/// Mostly in bounds for the three-element array `A`.
fn ext_index(r: &mut impl Rng) -> ext::AExp {
    if r.gen_bool(0.85) {
        ext::AExp::Num(r.gen_range(0..=2))
    } else {
        ext::AExp::Num(*[-1, 3].choose(r).unwrap())
    }
}

fn ext_aexp(r: &mut impl Rng, depth: u32) -> ext::AExp {
    if depth == 0 || r.gen_bool(0.4) {
        return match r.gen_range(0..3) {
            0 => ext::AExp::Num(r.gen_range(-2..=3)),
            1 => ext::AExp::name(EXT_VARS.choose(r).unwrap()),
            _ => ext::AExp::Index("A".into(), Box::new(ext_index(r))),
        };
    }
    let op = *[ext::AOp::Add, ext::AOp::Sub, ext::AOp::Mul, ext::AOp::Div].choose(r).unwrap();
    ext::AExp::bin(op, ext_aexp(r, depth - 1), ext_aexp(r, depth - 1))
}

fn ext_bexp(r: &mut impl Rng, depth: u32) -> ext::BExp {
    match r.gen_range(0..if depth == 0 { 4 } else { 6 }) {
        0 => ext::BExp::True,
        1 => ext::BExp::False,
        2 => ext::BExp::Cmp(ext::COp::Eq, ext_aexp(r, 1), ext_aexp(r, 1)),
        3 => ext::BExp::Cmp(ext::COp::Lt, ext_aexp(r, 1), ext_aexp(r, 1)),
        4 => ext::BExp::And(Box::new(ext_bexp(r, depth - 1)), Box::new(ext_bexp(r, depth - 1))),
        _ => ext::BExp::Not(Box::new(ext_bexp(r, depth - 1))),
    }
}

fn ext_stmt(r: &mut impl Rng, depth: u32, loops: Loops) -> ext::Stmt {
    let choices = match (depth, loops) {
        (0, _) => 7,
        (_, Loops::Forbidden) => 9,
        (_, Loops::Allowed) => 10,
    };
    let var = |r: &mut _| EXT_VARS.choose(r).unwrap().to_string();
    match r.gen_range(0..choices) {
        0 => ext::Stmt::Skip,
        1 if r.gen_bool(0.7) => ext::Stmt::VarDecl("v".into()),
        1 => ext::Stmt::VarDecl(var(r)),
        2 => ext::Stmt::ArrayDecl("B".into(), r.gen_range(0..=2)),
        3 => ext::Stmt::Assign(var(r), ext_aexp(r, 2)),
        4 => {
            let i = if r.gen_bool(0.7) { ext_index(r) } else { ext_aexp(r, 1) };
            ext::Stmt::ArrayAssign("A".into(), i, ext_aexp(r, 1))
        }
        5 => ext::Stmt::Call {
            fun: "inc".into(),
            args: vec![ext_aexp(r, 1)],
            receivers: vec![var(r)],
        },
        6 => {
            if r.gen_bool(0.5) {
                ext::Stmt::Call {
                    fun: "put".into(),
                    args: vec![ext::AExp::name("A"), ext_aexp(r, 0), ext_aexp(r, 1)],
                    receivers: vec![],
                }
            } else {
                ext::Stmt::Call {
                    fun: "swap".into(),
                    args: vec![ext_aexp(r, 0), ext_aexp(r, 0)],
                    receivers: vec![var(r), var(r)],
                }
            }
        }
        7 => ext::Stmt::seq(ext_stmt(r, depth - 1, loops), ext_stmt(r, depth - 1, loops)),
        8 => ext::Stmt::If(
            ext_bexp(r, 1),
            Arc::new(ext_stmt(r, depth - 1, loops)),
            Arc::new(ext_stmt(r, depth - 1, loops)),
        ),
        _ => {
            let x = var(r);
            let step = ext::Stmt::Assign(x.clone(), ext::AExp::bin(ext::AOp::Add, ext::AExp::name(&x), ext::AExp::Num(1)));
            let guard = ext::BExp::Cmp(ext::COp::Lt, ext::AExp::name(&x), ext::AExp::Num(r.gen_range(0..=3)));
            ext::Stmt::While(guard, Arc::new(ext::Stmt::seq(ext_stmt(r, depth - 1, loops), step)))
        }
    }
}

fn ext_state(r: &mut impl Rng) -> ExtState {
    let mut st = ExtState::default();
    for x in ["x", "y"] {
        st = st.with_name(x, r.gen_range(-2..=3));
    }
    let contents: Vec<i64> = (0..3).map(|_| r.gen_range(-3..=3)).collect();
    st.alloc("A", &contents)
}

pub fn random_ext_configs(n: usize, seed: u64, loops: Loops) -> Vec<ExtConfig> {
    let mut r = rng(seed, "extwhile");
    let lang = ExtLang::new(ext_helpers());
    (0..n)
        .map(|_| lang.config(Arc::new(ext_stmt(&mut r, 3, loops)), ext_state(&mut r)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ty {
    Int,
    Bool,
    List,
}

const TYPES: [Ty; 3] = [Ty::Int, Ty::Bool, Ty::List];

/// Mostly well-typed expressions of type `ty`; about one subterm in ten
/// ignores the expected type so that stuck configurations show up too.
struct FunGen<'r, R: Rng> {
    r: &'r mut R,
    env: Vec<(String, Ty)>,
    loops: Loops,
    fresh: usize,
}

impl<R: Rng> FunGen<'_, R> {
    fn fresh(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    fn any_ty(&mut self) -> Ty {
        *TYPES.choose(self.r).unwrap()
    }

    fn leaf(&mut self, ty: Ty) -> Arc<Expr> {
        let vars: Vec<String> = self.env.iter().filter(|(_, t)| *t == ty).map(|(x, _)| x.clone()).collect();
        if !vars.is_empty() && self.r.gen_bool(0.5) {
            return Expr::var(vars.choose(self.r).unwrap());
        }
        if self.r.gen_bool(0.03) {
            return Expr::var("free");
        }
        Arc::new(match ty {
            Ty::Int => Expr::Int(self.r.gen_range(-3..=3)),
            Ty::Bool => Expr::Bool(self.r.gen_bool(0.5)),
            Ty::List => Expr::Nil,
        })
    }

    fn expr(&mut self, ty: Ty, depth: u32) -> Arc<Expr> {
        let ty = if self.r.gen_bool(0.1) { self.any_ty() } else { ty };
        if depth == 0 || self.r.gen_bool(0.2) {
            return self.leaf(ty);
        }
        let d = depth - 1;
        match self.r.gen_range(0..if self.loops == Loops::Allowed { 6 } else { 5 }) {
            // Let-style application of a λ.
            0 => {
                let arg_ty = self.any_ty();
                let x = self.fresh();
                let arg = self.expr(arg_ty, d);
                self.env.push((x.clone(), arg_ty));
                let body = self.expr(ty, d);
                self.env.pop();
                Expr::app(Expr::lam(&x, body), arg)
            }
            1 => Arc::new(Expr::If(self.expr(Ty::Bool, d), self.expr(ty, d), self.expr(ty, d))),
            2 => {
                let on_nil = self.expr(ty, d);
                let (h, t) = (self.fresh(), self.fresh());
                self.env.push((h.clone(), Ty::Int));
                self.env.push((t.clone(), Ty::List));
                let on_cons = self.expr(ty, d);
                self.env.truncate(self.env.len() - 2);
                Arc::new(Expr::ListCase(self.expr(Ty::List, d), on_nil, Expr::lam(&h, Expr::lam(&t, on_cons))))
            }
            5 => self.countdown(ty, d),
            _ => self.typed(ty, d),
        }
    }

    fn typed(&mut self, ty: Ty, d: u32) -> Arc<Expr> {
        match ty {
            Ty::Int => {
                let op = *[BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div].choose(self.r).unwrap();
                Arc::new(Expr::Bin(op, self.expr(Ty::Int, d), self.expr(Ty::Int, d)))
            }
            Ty::Bool => match self.r.gen_range(0..3) {
                0 => {
                    let op = if self.r.gen_bool(0.5) { BinOp::Eq } else { BinOp::Lt };
                    Arc::new(Expr::Bin(op, self.expr(Ty::Int, d), self.expr(Ty::Int, d)))
                }
                1 => Arc::new(Expr::Not(self.expr(Ty::Bool, d))),
                _ => Arc::new(Expr::And(self.expr(Ty::Bool, d), self.expr(Ty::Bool, d))),
            },
            Ty::List => Arc::new(Expr::Cons(self.expr(Ty::Int, d), self.expr(Ty::List, d))),
        }
    }

    /// `letrec f = λa. if a < 1 then e else f (a - 1) in f n`.
    fn countdown(&mut self, ty: Ty, d: u32) -> Arc<Expr> {
        let (f, a) = (self.fresh(), self.fresh());
        self.env.push((a.clone(), Ty::Int));
        let base = self.expr(ty, d);
        self.env.pop();
        let var_a = Expr::var(&a);
        let guard = Arc::new(Expr::Bin(BinOp::Lt, Arc::clone(&var_a), Arc::new(Expr::Int(1))));
        let pred = Arc::new(Expr::Bin(BinOp::Sub, var_a, Arc::new(Expr::Int(1))));
        let bound = Arc::new(Expr::If(guard, base, Expr::app(Expr::var(&f), pred)));
        Arc::new(Expr::LetRec {
            f: f.clone(),
            x: a,
            bound,
            body: Expr::app(Expr::var(&f), Arc::new(Expr::Int(self.r.gen_range(-1..=3)))),
        })
    }
}

pub fn random_fun_exprs(n: usize, seed: u64, loops: Loops) -> Vec<Arc<Expr>> {
    let mut r = rng(seed, "fun");
    (0..n)
        .map(|_| {
            let depth = r.gen_range(1..=4);
            let ty = *TYPES.choose(&mut r).unwrap();
            let mut g = FunGen {
                r: &mut r,
                env: Vec::new(),
                loops,
                fresh: 0,
            };
            g.expr(ty, depth)
        })
        .collect()
}
