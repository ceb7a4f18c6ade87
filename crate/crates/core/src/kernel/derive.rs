//! Plain semantic derivations, independent of any specification.

use indexmap::IndexSet;

use super::language::{Language, RuleApplication};
use super::spec::SampleBudget;

/// Results of an enumeration, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration<R: std::hash::Hash + Eq> {
    pub results: IndexSet<R>,
    /// Set iff some branch was cut by the depth bound.
    pub exhausted: bool,
}

impl<R: std::hash::Hash + Eq> Enumeration<R> {
    pub fn empty() -> Self {
        Enumeration {
            results: IndexSet::new(),
            exhausted: false,
        }
    }
}

/// All `ρ` with a derivation tree for `(config, ρ)` of height at most
/// `budget.max_depth`.
///
/// Enumeration order: `rules(config)` order, then premise-result order.
pub fn derive_all<L: Language + ?Sized>(
    lang: &L,
    config: &L::Config,
    budget: &SampleBudget,
) -> Enumeration<L::Result> {
    derive(lang, config, budget.max_depth)
}

fn derive<L: Language + ?Sized>(lang: &L, config: &L::Config, depth: usize) -> Enumeration<L::Result> {
    let rules = lang.rules(config);
    let mut out = Enumeration::empty();
    if depth == 0 {
        out.exhausted = !rules.is_empty();
        return out;
    }
    for rule in &rules {
        complete(lang, &rule.body, depth - 1, &mut out);
    }
    out
}

fn complete<L: Language + ?Sized>(
    lang: &L,
    app: &RuleApplication<L::Config, L::Result>,
    depth: usize,
    out: &mut Enumeration<L::Result>,
) {
    match app {
        RuleApplication::Conclude(r) => {
            out.results.insert(r.clone());
        }
        RuleApplication::Need { premise, rest } => {
            let sub = derive(lang, premise, depth);
            out.exhausted |= sub.exhausted;
            for r in &sub.results {
                if let Some(next) = rest(r) {
                    complete(lang, &next, depth, out);
                }
            }
        }
    }
}

/// Outcome of a single first-found evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluation<C, R> {
    Value(R),
    /// No rule applies to this (sub-)configuration.
    Stuck(C),
    OutOfFuel,
}

/// Depth-first evaluation that commits to the first result of each premise.
///
/// Complete for deterministic languages; for others it may miss results that
/// need a later premise result, but whatever it returns is derivable.
pub fn evaluate<L: Language + ?Sized>(
    lang: &L,
    config: &L::Config,
    budget: &SampleBudget,
) -> Evaluation<L::Config, L::Result> {
    eval(lang, config, budget.max_depth)
}

fn eval<L: Language + ?Sized>(
    lang: &L,
    config: &L::Config,
    depth: usize,
) -> Evaluation<L::Config, L::Result> {
    let rules = lang.rules(config);
    if rules.is_empty() {
        return Evaluation::Stuck(config.clone());
    }
    if depth == 0 {
        return Evaluation::OutOfFuel;
    }
    let mut failure = None;
    for rule in &rules {
        match eval_app(lang, config, &rule.body, depth - 1) {
            Evaluation::Value(r) => return Evaluation::Value(r),
            other => {
                failure.get_or_insert(other);
            }
        }
    }
    failure.unwrap_or(Evaluation::Stuck(config.clone()))
}

fn eval_app<L: Language + ?Sized>(
    lang: &L,
    owner: &L::Config,
    app: &RuleApplication<L::Config, L::Result>,
    depth: usize,
) -> Evaluation<L::Config, L::Result> {
    let mut app = app.clone();
    loop {
        match app {
            RuleApplication::Conclude(r) => return Evaluation::Value(r),
            RuleApplication::Need { premise, rest } => match eval(lang, &premise, depth) {
                Evaluation::Value(r) => match rest(&r) {
                    Some(next) => app = next,
                    None => return Evaluation::Stuck(owner.clone()),
                },
                other => return other,
            },
        }
    }
}

/// Fast path for one result; a member of [`derive_all`] when present.
pub fn derive_one<L: Language + ?Sized>(
    lang: &L,
    config: &L::Config,
    budget: &SampleBudget,
) -> Option<L::Result> {
    match evaluate(lang, config, budget) {
        Evaluation::Value(r) => Some(r),
        _ => None,
    }
}

/// Every configuration visited while deriving `config` (itself included),
/// in pre-order of first visit.
pub fn reachable<L: Language + ?Sized>(
    lang: &L,
    config: &L::Config,
    budget: &SampleBudget,
) -> IndexSet<L::Config> {
    let mut seen = IndexSet::new();
    visit(lang, config, budget.max_depth, &mut seen);
    seen
}

fn visit<L: Language + ?Sized>(
    lang: &L,
    config: &L::Config,
    depth: usize,
    seen: &mut IndexSet<L::Config>,
) -> IndexSet<L::Result> {
    seen.insert(config.clone());
    let mut results = IndexSet::new();
    if depth == 0 {
        return results;
    }
    for rule in lang.rules(config) {
        let mut frontier = vec![rule.body];
        while let Some(app) = frontier.pop() {
            match app {
                RuleApplication::Conclude(r) => {
                    results.insert(r);
                }
                RuleApplication::Need { premise, rest } => {
                    let sub = visit(lang, &premise, depth - 1, seen);
                    // Reverse so that the stack pops in candidate order.
                    let mut nexts: Vec<_> = sub.iter().filter_map(|r| rest(r)).collect();
                    nexts.reverse();
                    frontier.extend(nexts);
                }
            }
        }
    }
    results
}
