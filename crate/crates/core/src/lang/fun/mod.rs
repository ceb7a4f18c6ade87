//! An eager functional language with integers, booleans, lists and
//! recursive functions, evaluated by substitution.

mod ast;
mod parse;

use std::sync::{Arc, LazyLock};

pub use ast::{as_canonical, subst, BinOp, Canonical, Expr};
pub use parse::parse_expr;

use crate::kernel::{Language, Rule, RuleApplication};
use crate::syntax::{strip_angles, ParseError};

type FRule = Rule<Arc<Expr>, Canonical>;
type FApp = RuleApplication<Arc<Expr>, Canonical>;

#[derive(Debug, Clone, Copy)]
pub struct FunLang {
    /// Offer only the canonical axiom for canonical expressions. Without it a
    /// canonical cons also gets the cons rule, which derives the same result.
    pub canonical_pruning: bool,
}

impl Default for FunLang {
    fn default() -> Self {
        FunLang {
            canonical_pruning: true,
        }
    }
}

fn conclude_with(premise: Arc<Expr>) -> FApp {
    FApp::need(premise, |c| Some(FApp::Conclude(c.clone())))
}

fn apply_int(op: BinOp, a: i64, b: i64) -> Option<Canonical> {
    Some(match op {
        BinOp::Add => Canonical::Int(a.checked_add(b)?),
        BinOp::Sub => Canonical::Int(a.checked_sub(b)?),
        BinOp::Mul => Canonical::Int(a.checked_mul(b)?),
        BinOp::Div => Canonical::Int(a.checked_div(b)?),
        BinOp::Eq => Canonical::Bool(a == b),
        BinOp::Lt => Canonical::Bool(a < b),
    })
}

fn cons_rule(h: &Arc<Expr>, t: &Arc<Expr>) -> FRule {
    let t = Arc::clone(t);
    Rule::new(
        "cons",
        FApp::need(Arc::clone(h), move |ch| {
            let ch = Arc::new(ch.clone());
            Some(FApp::need(Arc::clone(&t), move |ct| {
                Some(FApp::Conclude(Canonical::Cons(Arc::clone(&ch), Arc::new(ct.clone()))))
            }))
        }),
    )
}

fn branch_on(name: &'static str, guard: &Arc<Expr>, want: bool, then: &Arc<Expr>) -> FRule {
    let then = Arc::clone(then);
    Rule::new(
        name,
        FApp::need(Arc::clone(guard), move |g| {
            (*g == Canonical::Bool(want)).then(|| conclude_with(Arc::clone(&then)))
        }),
    )
}

impl FunLang {
    fn rules_for(&self, e: &Arc<Expr>) -> Vec<FRule> {
        if let Some(c) = as_canonical(e) {
            let mut rules = vec![Rule::axiom("canonical", c)];
            if let (false, Expr::Cons(h, t)) = (self.canonical_pruning, &**e) {
                rules.push(cons_rule(h, t));
            }
            return rules;
        }
        match &**e {
            Expr::Bin(op, a, b) => {
                let (op, b) = (*op, Arc::clone(b));
                let app = FApp::need(Arc::clone(a), move |ca| {
                    let Canonical::Int(x) = *ca else { return None };
                    Some(FApp::need(Arc::clone(&b), move |cb| {
                        let Canonical::Int(y) = *cb else { return None };
                        Some(FApp::Conclude(apply_int(op, x, y)?))
                    }))
                });
                vec![Rule::new("binop", app)]
            }
            Expr::Not(a) => vec![Rule::new(
                "not",
                FApp::need(Arc::clone(a), |c| match c {
                    Canonical::Bool(v) => Some(FApp::Conclude(Canonical::Bool(!v))),
                    _ => None,
                }),
            )],
            Expr::And(a, b) => {
                let b = Arc::clone(b);
                let app = FApp::need(Arc::clone(a), move |ca| {
                    let Canonical::Bool(x) = *ca else { return None };
                    Some(FApp::need(Arc::clone(&b), move |cb| {
                        let Canonical::Bool(y) = *cb else { return None };
                        Some(FApp::Conclude(Canonical::Bool(x && y)))
                    }))
                });
                vec![Rule::new("and", app)]
            }
            Expr::If(g, a, b) => vec![
                branch_on("if-true", g, true, a),
                branch_on("if-false", g, false, b),
            ],
            Expr::Cons(h, t) => vec![cons_rule(h, t)],
            Expr::ListCase(scrutinee, on_nil, on_cons) => {
                let on_nil = Arc::clone(on_nil);
                let on_cons = Arc::clone(on_cons);
                vec![
                    Rule::new(
                        "listcase-nil",
                        FApp::need(Arc::clone(scrutinee), move |c| {
                            (*c == Canonical::Nil).then(|| conclude_with(Arc::clone(&on_nil)))
                        }),
                    ),
                    Rule::new(
                        "listcase-cons",
                        FApp::need(Arc::clone(scrutinee), move |c| match c {
                            Canonical::Cons(h, t) => Some(conclude_with(Expr::app(
                                Expr::app(Arc::clone(&on_cons), h.to_expr()),
                                t.to_expr(),
                            ))),
                            _ => None,
                        }),
                    ),
                ]
            }
            Expr::App(f, a) => {
                let a = Arc::clone(a);
                let app = FApp::need(Arc::clone(f), move |cf| {
                    let Canonical::Lam(x, body) = cf else { return None };
                    let (x, body) = (x.clone(), Arc::clone(body));
                    Some(FApp::need(Arc::clone(&a), move |ca| {
                        Some(conclude_with(subst(&body, &x, ca)))
                    }))
                });
                vec![Rule::new("app", app)]
            }
            Expr::LetRec { f, x, bound, body } if x != f => {
                let unfolded = Expr::app(
                    Expr::lam(f, Arc::clone(body)),
                    Expr::lam(
                        x,
                        Arc::new(Expr::LetRec {
                            f: f.clone(),
                            x: x.clone(),
                            bound: Arc::clone(bound),
                            body: Arc::clone(bound),
                        }),
                    ),
                );
                vec![Rule::new("letrec", conclude_with(unfolded))]
            }
            _ => vec![],
        }
    }
}

impl Language for FunLang {
    type Config = Arc<Expr>;
    type Result = Canonical;

    fn name(&self) -> &'static str {
        "fun"
    }

    fn rules(&self, config: &Arc<Expr>) -> Vec<FRule> {
        self.rules_for(config)
    }

    fn parse_config(&self, text: &str) -> Result<Arc<Expr>, ParseError> {
        Ok(Arc::new(parse_expr(strip_angles(text))?))
    }

    fn parse_result(&self, text: &str) -> Result<Canonical, ParseError> {
        let e = parse_expr(text)?;
        as_canonical(&e).ok_or_else(|| ParseError {
            line: 1,
            col: 1,
            message: format!("`{e}` is not a canonical form"),
        })
    }

    fn show_config(&self, config: &Arc<Expr>) -> String {
        config.to_string()
    }

    fn show_result(&self, result: &Canonical) -> String {
        result.to_string()
    }

    fn describe_stuck(&self, config: &Arc<Expr>) -> String {
        match &**config {
            Expr::Var(x) => format!("stuck: free variable `{x}`"),
            e => format!("stuck at {e}"),
        }
    }
}

/// Source of the bundled list-merging expression, with `l1` and `l2` as the
/// placeholders [`merge_expr`] fills in.
pub const MERGE_SOURCE: &str = "\
letrec merge = \\x. \\x'.
  listcase x of (x',
    \\i. \\r. listcase x' of (x,
      \\i'. \\r'. if i <= i' then i :: merge r x' else i' :: merge x r'))
in merge l1 l2
";

/// Pieces of the merge expression the specification recognizes.
pub struct MergeTemplates {
    pub letrec: Arc<Expr>,
    /// `λx. letrec merge = λx. λx'. L in λx'. L`, the function of the form
    /// that recurs during evaluation.
    pub unfolded: Arc<Expr>,
}

pub fn merge_templates() -> &'static MergeTemplates {
    static T: LazyLock<MergeTemplates> = LazyLock::new(|| {
        let letrec = Arc::new(parse_expr(MERGE_SOURCE).expect("bundled expression parses"));
        let Expr::LetRec { f, x, bound, .. } = &*letrec else {
            unreachable!("merge source is a letrec")
        };
        let unfolded = Expr::lam(
            x,
            Arc::new(Expr::LetRec {
                f: f.clone(),
                x: x.clone(),
                bound: Arc::clone(bound),
                body: Arc::clone(bound),
            }),
        );
        MergeTemplates { letrec, unfolded }
    });
    &T
}

/// The merge expression applied to two canonical lists.
pub fn merge_expr(l1: &Canonical, l2: &Canonical) -> Arc<Expr> {
    let e = merge_templates().letrec.clone();
    let e = subst(&e, "l1", l1);
    subst(&e, "l2", l2)
}

/// The recurring form `F l1 l2`.
pub fn merge_unfolded(l1: &Canonical, l2: &Canonical) -> Arc<Expr> {
    Expr::app(
        Expr::app(Arc::clone(&merge_templates().unfolded), l1.to_expr()),
        l2.to_expr(),
    )
}
