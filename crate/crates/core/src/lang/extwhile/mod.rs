//! While extended with local declarations, stack-allocated arrays and
//! functions taking arrays by reference.

mod ast;
mod parse;
mod state;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock};

pub use ast::{AExp, AOp, BExp, COp, Function, Program, Stmt};
pub use parse::{check_arity, parse_aexp, parse_bexp, parse_program, parse_state, parse_stmt};
pub use state::{aeval, beval, call_fin, call_ini, ArityError, ExtState, Store};

use crate::kernel::{Language, Rule, RuleApplication};
use crate::syntax::{split_top_level, strip_angles, ParseError};

/// A statement, a state and the program supplying function bodies.
#[derive(Debug, Clone)]
pub struct ExtConfig {
    pub stmt: Arc<Stmt>,
    pub state: ExtState,
    pub program: Arc<Program>,
}

impl ExtConfig {
    pub fn new(stmt: Arc<Stmt>, state: ExtState, program: Arc<Program>) -> Self {
        ExtConfig {
            stmt,
            state,
            program,
        }
    }

    fn with(&self, stmt: Arc<Stmt>, state: ExtState) -> Self {
        ExtConfig::new(stmt, state, Arc::clone(&self.program))
    }
}

impl PartialEq for ExtConfig {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.stmt, &other.stmt) || self.stmt == other.stmt)
            && self.state == other.state
            && (Arc::ptr_eq(&self.program, &other.program) || self.program == other.program)
    }
}

impl Eq for ExtConfig {}

impl Hash for ExtConfig {
    // The program rarely differs between configurations that meet in one
    // table, so it is left out of the hash.
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.stmt.hash(h);
        self.state.hash(h);
    }
}

impl fmt::Display for ExtConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{} | {}⟩", self.stmt, self.state)
    }
}

type ERule = Rule<ExtConfig, ExtState>;
type EApp = RuleApplication<ExtConfig, ExtState>;

/// The language, together with the program used when parsing configurations.
#[derive(Debug, Clone, Default)]
pub struct ExtLang {
    pub program: Arc<Program>,
}

impl ExtLang {
    pub fn new(program: Arc<Program>) -> Self {
        ExtLang { program }
    }

    pub fn config(&self, stmt: Arc<Stmt>, state: ExtState) -> ExtConfig {
        ExtConfig::new(stmt, state, Arc::clone(&self.program))
    }
}

fn conclude_with_premise(premise: ExtConfig) -> EApp {
    EApp::need(premise, |fin| Some(EApp::Conclude(fin.clone())))
}

fn ext_rules(c: &ExtConfig) -> Vec<ERule> {
    let st = &c.state;
    match &*c.stmt {
        Stmt::Skip => vec![Rule::axiom("skip", st.clone())],
        Stmt::VarDecl(x) => match st.get(x) {
            None => vec![Rule::axiom("var-decl", st.clone().with_name(x, 0))],
            Some(_) => vec![],
        },
        Stmt::ArrayDecl(x, n) => match (st.get(x), st.nextloc.checked_add(*n)) {
            (None, Some(next)) => {
                let mut out = st.clone().with_name(x, st.nextloc);
                out.nextloc = next;
                vec![Rule::axiom("array-decl", out)]
            }
            _ => vec![],
        },
        Stmt::Assign(x, a) => match (aeval(a, st), st.get(x)) {
            (Some(v), Some(_)) => vec![Rule::axiom("assign", st.clone().with_name(x, v))],
            _ => vec![],
        },
        Stmt::ArrayAssign(x, a1, a2) => {
            let target = (|| {
                let base = st.get(x)?;
                let i = aeval(a1, st)?;
                let v = aeval(a2, st)?;
                let loc = base.checked_add(i)?;
                (i >= 0 && loc < st.nextloc).then_some((loc, v))
            })();
            match target {
                Some((loc, v)) => vec![Rule::axiom("array-assign", st.clone().with_loc(loc, v))],
                None => vec![],
            }
        }
        Stmt::If(b, s1, s2) => match beval(b, st) {
            Some(true) => vec![Rule::new("if-true", conclude_with_premise(c.with(Arc::clone(s1), st.clone())))],
            Some(false) => vec![Rule::new("if-false", conclude_with_premise(c.with(Arc::clone(s2), st.clone())))],
            None => vec![],
        },
        Stmt::While(b, body) => match beval(b, st) {
            Some(true) => {
                let whole = c.clone();
                let app = EApp::need(c.with(Arc::clone(body), st.clone()), move |mid| {
                    Some(conclude_with_premise(whole.with(Arc::clone(&whole.stmt), mid.clone())))
                });
                vec![Rule::new("while-true", app)]
            }
            Some(false) => vec![Rule::axiom("while-false", st.clone())],
            None => vec![],
        },
        Stmt::Seq(s1, s2) => {
            let next = c.with(Arc::clone(s2), st.clone());
            let app = EApp::need(c.with(Arc::clone(s1), st.clone()), move |mid| {
                Some(conclude_with_premise(next.with(Arc::clone(&next.stmt), mid.clone())))
            });
            vec![Rule::new("seq", app)]
        }
        Stmt::Call {
            fun,
            args,
            receivers,
        } => {
            let Some(f) = c.program.get(fun) else {
                return vec![];
            };
            let Some(vals) = args.iter().map(|a| aeval(a, st)).collect::<Option<Vec<_>>>() else {
                return vec![];
            };
            let Ok(ini) = call_ini(&st.store, &f.params, &vals, &f.returns) else {
                return vec![];
            };
            if f.returns.len() != receivers.len() {
                return vec![];
            }
            let before = st.clone();
            let returns = f.returns.clone();
            let receivers = receivers.clone();
            let premise = c.with(Arc::clone(&f.body), ExtState::new(ini, st.nextloc));
            let app = EApp::need(premise, move |after| {
                let store = call_fin(&before.store, &after.store, &returns, &receivers).ok()?;
                Some(EApp::Conclude(ExtState::new(store, before.nextloc)))
            });
            vec![Rule::new("call", app)]
        }
    }
}

impl Language for ExtLang {
    type Config = ExtConfig;
    type Result = ExtState;

    fn name(&self) -> &'static str {
        "extwhile"
    }

    fn rules(&self, config: &ExtConfig) -> Vec<ERule> {
        ext_rules(config)
    }

    /// `stmt | state`, optionally wrapped in `⟨ ⟩`; calls resolve against `self.program`.
    fn parse_config(&self, text: &str) -> Result<ExtConfig, ParseError> {
        let inner = strip_angles(text);
        let (stmt, state) = split_top_level(inner, '|').unwrap_or((inner, ""));
        let stmt = parse_stmt(stmt)?;
        check_arity(&self.program, &stmt).map_err(|m| ParseError {
            line: 1,
            col: 1,
            message: m,
        })?;
        Ok(self.config(Arc::new(stmt), parse_state(state)?))
    }

    fn parse_result(&self, text: &str) -> Result<ExtState, ParseError> {
        parse_state(text)
    }

    fn show_config(&self, config: &ExtConfig) -> String {
        config.to_string()
    }

    fn show_result(&self, result: &ExtState) -> String {
        result.to_string()
    }
}

/// Source of the bundled array-merging program.
pub const MERGE_SOURCE: &str = "\
fun merge(S, T, i, m, n) {
  var j; var k;
  j := m + 1; k := i;
  while i <= m and j <= n do (
    (if S[i] <= S[j] then (T[k] := S[i]; i := i + 1) else (T[k] := S[j]; j := j + 1));
    k := k + 1
  );
  while i <= m do (T[k] := S[i]; i := i + 1; k := k + 1);
  while j <= n do (T[k] := S[j]; j := j + 1; k := k + 1)
}
";

/// The merge program and its three loops, shared so that comparisons hit the pointer fast path.
pub struct MergeProgram {
    pub program: Arc<Program>,
    pub body: Arc<Stmt>,
    /// The main merging loop.
    pub merge_loop: Arc<Stmt>,
    /// The loop copying the rest of the first fragment.
    pub tail_first: Arc<Stmt>,
    /// The loop copying the rest of the second fragment.
    pub tail_second: Arc<Stmt>,
}

pub fn merge_program() -> &'static MergeProgram {
    static P: LazyLock<MergeProgram> = LazyLock::new(|| {
        let (program, _) = parse_program(MERGE_SOURCE).expect("bundled program parses");
        let body = Arc::clone(&program.functions["merge"].body);
        let mut stmts = Vec::new();
        let mut cur = Arc::clone(&body);
        while let Stmt::Seq(a, b) = &*cur {
            stmts.push(Arc::clone(a));
            let next = Arc::clone(b);
            cur = next;
        }
        stmts.push(cur);
        let n = stmts.len();
        MergeProgram {
            program: Arc::new(program),
            body,
            merge_loop: Arc::clone(&stmts[n - 3]),
            tail_first: Arc::clone(&stmts[n - 2]),
            tail_second: Arc::clone(&stmts[n - 1]),
        }
    });
    &P
}
