//! The While language: assignments, sequencing, conditionals and loops over
//! an integer store.

mod ast;
mod parse;

use std::fmt;
use std::sync::{Arc, LazyLock};

pub use ast::{aeval, beval, AExp, BExp, Stmt, WhileState};
pub use parse::{parse_aexp, parse_bexp, parse_state, parse_stmt};

use crate::kernel::{Language, Rule, RuleApplication};
use crate::syntax::{split_top_level, strip_angles, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WhileConfig {
    pub stmt: Arc<Stmt>,
    pub state: WhileState,
}

impl WhileConfig {
    pub fn new(stmt: Arc<Stmt>, state: WhileState) -> Self {
        WhileConfig { stmt, state }
    }
}

impl fmt::Display for WhileConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{} | {}⟩", self.stmt, self.state)
    }
}

type WRule = Rule<WhileConfig, WhileState>;
type WApp = RuleApplication<WhileConfig, WhileState>;

#[derive(Debug, Clone, Copy, Default)]
pub struct WhileLang;

impl WhileLang {
    fn rules_for(stmt: &Arc<Stmt>, s: &WhileState) -> Vec<WRule> {
        match &**stmt {
            Stmt::Skip => vec![Rule::axiom("skip", s.clone())],
            Stmt::Assign(x, a) => vec![Rule::axiom("assign", s.set(x, aeval(a, s)))],
            Stmt::Seq(s1, s2) => {
                let s2 = Arc::clone(s2);
                let body = WApp::need(WhileConfig::new(Arc::clone(s1), s.clone()), move |mid| {
                    Some(WApp::need(WhileConfig::new(Arc::clone(&s2), mid.clone()), |fin| {
                        Some(WApp::Conclude(fin.clone()))
                    }))
                });
                vec![Rule::new("seq", body)]
            }
            Stmt::If(b, s1, s2) => {
                let (name, branch) = if beval(b, s) {
                    ("if-true", s1)
                } else {
                    ("if-false", s2)
                };
                let body = WApp::need(WhileConfig::new(Arc::clone(branch), s.clone()), |fin| {
                    Some(WApp::Conclude(fin.clone()))
                });
                vec![Rule::new(name, body)]
            }
            Stmt::While(b, body) => {
                if !beval(b, s) {
                    return vec![Rule::axiom("while-false", s.clone())];
                }
                let whole = Arc::clone(stmt);
                let app = WApp::need(WhileConfig::new(Arc::clone(body), s.clone()), move |mid| {
                    Some(WApp::need(WhileConfig::new(Arc::clone(&whole), mid.clone()), |fin| {
                        Some(WApp::Conclude(fin.clone()))
                    }))
                });
                vec![Rule::new("while-true", app)]
            }
        }
    }
}

impl Language for WhileLang {
    type Config = WhileConfig;
    type Result = WhileState;

    fn name(&self) -> &'static str {
        "while"
    }

    fn rules(&self, config: &WhileConfig) -> Vec<WRule> {
        Self::rules_for(&config.stmt, &config.state)
    }

    /// `stmt | state`, optionally wrapped in `⟨ ⟩`.
    fn parse_config(&self, text: &str) -> Result<WhileConfig, ParseError> {
        let inner = strip_angles(text);
        let (stmt, state) = split_top_level(inner, '|').unwrap_or((inner, ""));
        Ok(WhileConfig::new(Arc::new(parse_stmt(stmt)?), parse_state(state)?))
    }

    fn parse_result(&self, text: &str) -> Result<WhileState, ParseError> {
        parse_state(text)
    }

    fn show_config(&self, config: &WhileConfig) -> String {
        config.to_string()
    }

    fn show_result(&self, result: &WhileState) -> String {
        result.to_string()
    }
}

/// The factorial loop `while 1 < m do (m := m - 1; fac := fac * m)`.
pub fn factorial_loop() -> Arc<Stmt> {
    static W: LazyLock<Arc<Stmt>> = LazyLock::new(|| {
        Arc::new(parse_stmt("while 1 < m do (m := m - 1; fac := fac * m)").expect("bundled"))
    });
    Arc::clone(&W)
}

/// The factorial program `fac := m; <factorial loop>`.
pub fn factorial_program() -> Arc<Stmt> {
    static S: LazyLock<Arc<Stmt>> = LazyLock::new(|| {
        Arc::new(Stmt::Seq(
            Arc::new(Stmt::assign("fac", AExp::var("m"))),
            factorial_loop(),
        ))
    });
    Arc::clone(&S)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{derive_all, derive_one, SampleBudget};

    fn cfg(stmt: &str, state: &str) -> WhileConfig {
        WhileLang.parse_config(&format!("{stmt} | {state}")).unwrap()
    }

    fn only_rule(c: &WhileConfig) -> WRule {
        let mut rules = WhileLang.rules(c);
        assert_eq!(rules.len(), 1);
        rules.pop().unwrap()
    }

    fn st(text: &str) -> WhileState {
        parse_state(text).unwrap()
    }

    #[test]
    fn rule_skip() {
        let r = only_rule(&cfg("skip", "x = 1"));
        assert_eq!(r.name, "skip");
        assert!(matches!(r.body, WApp::Conclude(ref s) if *s == st("x = 1")));
    }

    #[test]
    fn rule_assign() {
        let r = only_rule(&cfg("x := 5", "x = 1, y = 2"));
        assert_eq!(r.name, "assign");
        assert!(matches!(r.body, WApp::Conclude(ref s) if *s == st("x = 5, y = 2")));
    }

    #[test]
    fn rule_seq_threads_intermediate_state() {
        let r = only_rule(&cfg("x := 1; y := x", "x = 0"));
        assert_eq!(r.name, "seq");
        let mid = st("x = 7");
        let (premises, fin) = r
            .body
            .instantiate(|c| Some(if c.stmt.to_string() == "x := 1" { mid.clone() } else { st("x = 7, y = 7") }))
            .unwrap();
        assert_eq!(premises[0].0, cfg("x := 1", "x = 0"));
        assert_eq!(premises[1].0, cfg("y := x", "x = 7"));
        assert_eq!(fin, st("x = 7, y = 7"));
    }

    #[test]
    fn rule_if_true() {
        let r = only_rule(&cfg("if 0 < x then y := 1 else y := 2", "x = 3"));
        assert_eq!(r.name, "if-true");
        assert_eq!(r.body.premise(), Some(&cfg("y := 1", "x = 3")));
        let (_, fin) = r.body.instantiate(|_| Some(st("q = 9"))).unwrap();
        assert_eq!(fin, st("q = 9"));
    }

    #[test]
    fn rule_if_false() {
        let r = only_rule(&cfg("if 0 < x then y := 1 else y := 2", "x = 0"));
        assert_eq!(r.name, "if-false");
        assert_eq!(r.body.premise(), Some(&cfg("y := 2", "x = 0")));
    }

    #[test]
    fn rule_while_true() {
        let c = cfg("while 1 < m do m := m - 1", "m = 3");
        let r = only_rule(&c);
        assert_eq!(r.name, "while-true");
        let (premises, fin) = r
            .body
            .instantiate(|p| Some(if p.stmt.to_string() == "m := m - 1" { st("m = 2") } else { st("m = 1") }))
            .unwrap();
        assert_eq!(premises[0].0, cfg("m := m - 1", "m = 3"));
        assert_eq!(premises[1].0, WhileConfig::new(Arc::clone(&c.stmt), st("m = 2")));
        assert_eq!(fin, st("m = 1"));
    }

    #[test]
    fn rule_while_false() {
        let r = only_rule(&cfg("while 1 < m do m := m - 1", "m = 1"));
        assert_eq!(r.name, "while-false");
        assert!(matches!(r.body, WApp::Conclude(ref s) if *s == st("m = 1")));
    }

    #[test]
    fn derive_all_examples() {
        let b = SampleBudget::default();
        let skip = cfg("skip", "m = 4");
        let e = derive_all(&WhileLang, &skip, &b.with_depth(1));
        assert_eq!(e.results.into_iter().collect::<Vec<_>>(), vec![st("m = 4")]);
        assert!(!e.exhausted);

        let w = WhileConfig::new(factorial_loop(), st("m = 1"));
        let e = derive_all(&WhileLang, &w, &b.with_depth(1));
        assert_eq!(e.results.len(), 1);
        assert!(!e.exhausted);

        let fac = WhileConfig::new(factorial_program(), st("m = 3"));
        let e = derive_all(&WhileLang, &fac, &b.with_depth(10));
        assert_eq!(e.results.into_iter().collect::<Vec<_>>(), vec![st("fac = 6, m = 1")]);
        assert!(!e.exhausted);
    }

    #[test]
    fn derive_one_examples() {
        let b = SampleBudget::default();
        assert_eq!(derive_one(&WhileLang, &cfg("skip", "x = 2"), &b), Some(st("x = 2")));
        let fac = WhileConfig::new(factorial_program(), st("m = 4"));
        assert_eq!(derive_one(&WhileLang, &fac, &b).unwrap().get("fac"), 24.into());
    }

    #[test]
    fn shallow_budget_reports_exhaustion() {
        let fac = WhileConfig::new(factorial_program(), st("m = 5"));
        let e = derive_all(&WhileLang, &fac, &SampleBudget::default().with_depth(4));
        assert!(e.results.is_empty());
        assert!(e.exhausted);
    }

    #[test]
    fn config_round_trip() {
        let c = WhileConfig::new(factorial_program(), st("m = 3"));
        assert_eq!(WhileLang.parse_config(&WhileLang.show_config(&c)).unwrap(), c);
    }
}
