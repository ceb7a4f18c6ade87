//! Validity, verification, soundness and refinement checks over a corpus.

use std::sync::Arc;

use indexmap::IndexSet;
use serde::Serialize;

use super::derive::{derive_all, reachable};
use super::infer::{replay, InferTree, Inferrer, ReplayError, TraceStep};
use super::language::Language;
use super::spec::{Param, SampleBudget, SpecSet, Specification, TrivialSpec};

/// Reports list at most this many counterexamples; `stats.violations` keeps the full count.
pub const MAX_REPORTED: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// No violation found, but some enumeration was cut by the depth bound.
    BudgetExhausted,
    /// The check's own precondition did not hold (e.g. verification failed before a cross-check).
    PreconditionFailed,
}

/// What produced a counterexample, and therefore how its trace replays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// A semantic derivation whose result lies outside the specified set.
    Derivation,
    /// A specification-aware inference whose result lies outside the specified set.
    Inference,
    /// A derivable result that inference failed to reach.
    Unreached,
    /// A member of the second specification's set missing from the first's.
    Refinement,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample<C, R> {
    pub source: Source,
    pub param: Param,
    pub config: String,
    pub result: String,
    pub expected: String,
    pub trace: Vec<TraceStep>,
    #[serde(skip)]
    pub evidence: Option<Arc<InferTree<C, R>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckStats {
    pub configs_checked: usize,
    pub results_inferred: usize,
    /// Configurations whose enumeration was cut by the depth bound.
    pub depth_hit: usize,
    pub rejected_samples: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport<C, R> {
    pub check: &'static str,
    pub spec: String,
    pub status: Status,
    pub counterexamples: Vec<Counterexample<C, R>>,
    pub stats: CheckStats,
    pub budget: SampleBudget,
}

impl<C, R> CheckReport<C, R> {
    fn new(check: &'static str, spec: String, budget: &SampleBudget) -> Self {
        CheckReport {
            check,
            spec,
            status: Status::Pass,
            counterexamples: Vec::new(),
            stats: CheckStats::default(),
            budget: *budget,
        }
    }

    fn record(&mut self, cx: Counterexample<C, R>) {
        self.stats.violations += 1;
        if self.counterexamples.len() < MAX_REPORTED {
            self.counterexamples.push(cx);
        }
    }

    fn finish(mut self) -> Self {
        self.status = if !self.counterexamples.is_empty() {
            Status::Fail
        } else if self.stats.depth_hit > 0 {
            Status::BudgetExhausted
        } else {
            Status::Pass
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// The corpus followed by every configuration reachable from it, deduplicated.
pub fn with_reachable<L: Language + ?Sized>(
    lang: &L,
    corpus: &[L::Config],
    budget: &SampleBudget,
) -> IndexSet<L::Config> {
    let mut all: IndexSet<L::Config> = corpus.iter().cloned().collect();
    for config in corpus {
        all.extend(reachable(lang, config, budget));
    }
    all
}

/// Corpus entries plus reachable sub-configurations where `spec` is constrained at `param`.
fn harvest<L: Language + ?Sized, S: Specification<L> + ?Sized>(
    spec: &S,
    param: &Param,
    corpus: &[L::Config],
    closure: &IndexSet<L::Config>,
) -> IndexSet<L::Config> {
    let mut out: IndexSet<L::Config> = corpus.iter().cloned().collect();
    out.extend(
        closure
            .iter()
            .filter(|c| !spec.at(param, c).is_universe())
            .cloned(),
    );
    out
}

fn derivation_tree<L: Language + ?Sized>(
    lang: &L,
    config: &L::Config,
    result: &L::Result,
    budget: &SampleBudget,
) -> Option<Arc<InferTree<L::Config, L::Result>>> {
    Inferrer::new(lang, &TrivialSpec, Param::Unit, *budget)
        .run(config)
        .results
        .get(result)
        .cloned()
}

fn counterexample<L: Language + ?Sized>(
    lang: &L,
    source: Source,
    param: &Param,
    config: &L::Config,
    result: &L::Result,
    expected: String,
    evidence: Option<Arc<InferTree<L::Config, L::Result>>>,
) -> Counterexample<L::Config, L::Result> {
    Counterexample {
        source,
        param: *param,
        config: lang.show_config(config),
        result: lang.show_result(result),
        expected,
        trace: evidence.as_ref().map(|t| t.steps(lang)).unwrap_or_default(),
        evidence,
    }
}

/// Checks that every derivable result of each corpus configuration (and of
/// each reachable configuration the specification constrains) is admitted.
pub fn check_valid<L: Language + ?Sized, S: Specification<L> + ?Sized>(
    lang: &L,
    spec: &S,
    corpus: &[L::Config],
    budget: &SampleBudget,
) -> CheckReport<L::Config, L::Result> {
    let mut report = CheckReport::new("check-valid", spec.name(), budget);
    let closure = with_reachable(lang, corpus, budget);
    for param in spec.params() {
        for config in harvest(spec, &param, corpus, &closure) {
            report.stats.configs_checked += 1;
            let SpecSet::Constrained(set) = spec.at(&param, &config) else {
                continue;
            };
            let derived = derive_all(lang, &config, budget);
            report.stats.results_inferred += derived.results.len();
            report.stats.depth_hit += usize::from(derived.exhausted);
            for r in derived.results.iter().filter(|r| !set.contains(r)) {
                let tree = derivation_tree(lang, &config, r, budget);
                report.record(counterexample(
                    lang,
                    Source::Derivation,
                    &param,
                    &config,
                    r,
                    set.describe().to_string(),
                    tree,
                ));
            }
        }
    }
    report.finish()
}

/// Checks that every result inferable with the help of the specification is
/// admitted, over the corpus and every reachable configuration it constrains.
///
/// A failure is a genuine violation; a pass is evidence within the budget.
pub fn check_verif<L: Language + ?Sized, S: Specification<L> + ?Sized>(
    lang: &L,
    spec: &S,
    corpus: &[L::Config],
    budget: &SampleBudget,
) -> CheckReport<L::Config, L::Result> {
    let mut report = CheckReport::new("check-verif", spec.name(), budget);
    let closure = with_reachable(lang, corpus, budget);
    for param in spec.params() {
        for config in harvest(spec, &param, corpus, &closure) {
            report.stats.configs_checked += 1;
            let SpecSet::Constrained(set) = spec.at(&param, &config) else {
                continue;
            };
            let inference = Inferrer::new(lang, spec, param, *budget).run(&config);
            report.stats.results_inferred += inference.results.len();
            report.stats.depth_hit += usize::from(inference.exhausted);
            report.stats.rejected_samples += inference.rejected_samples;
            for (r, tree) in inference.results.iter().filter(|(r, _)| !set.contains(r)) {
                report.record(counterexample(
                    lang,
                    Source::Inference,
                    &param,
                    &config,
                    r,
                    set.describe().to_string(),
                    Some(Arc::clone(tree)),
                ));
            }
        }
    }
    report.finish()
}

/// Self-test of the engine against soundness: requires a non-failing
/// verification, then checks validity and that every derivable result is
/// also inferable when premise sampling is extended with derived results.
pub fn check_soundness_crosscheck<L: Language + ?Sized, S: Specification<L> + ?Sized>(
    lang: &L,
    spec: &S,
    corpus: &[L::Config],
    budget: &SampleBudget,
) -> CheckReport<L::Config, L::Result> {
    let verif = check_verif(lang, spec, corpus, budget);
    if verif.status == Status::Fail {
        let mut report = CheckReport::new("crosscheck", spec.name(), budget);
        report.stats = verif.stats;
        report.status = Status::PreconditionFailed;
        return report;
    }
    let mut report = check_valid(lang, spec, corpus, budget);
    report.check = "crosscheck";
    report.stats.depth_hit += verif.stats.depth_hit;
    let closure = with_reachable(lang, corpus, budget);
    for param in spec.params() {
        for config in &closure {
            report.stats.configs_checked += 1;
            let derived = derive_all(lang, config, budget);
            let inferred = Inferrer::new(lang, spec, param, *budget)
                .derivation_informed()
                .run(config);
            report.stats.results_inferred += inferred.results.len();
            report.stats.depth_hit += usize::from(derived.exhausted);
            for r in derived.results.iter().filter(|r| !inferred.results.contains_key(*r)) {
                let tree = derivation_tree(lang, config, r, budget);
                report.record(counterexample(
                    lang,
                    Source::Unreached,
                    &param,
                    config,
                    r,
                    "a result inferable with the specification".to_string(),
                    tree,
                ));
            }
        }
    }
    report.finish()
}

/// Parameter values two specifications are compared at.
fn shared_params<L: Language, A: Specification<L> + ?Sized, B: Specification<L> + ?Sized>(
    s1: &A,
    s2: &B,
) -> Vec<Param> {
    let p1 = s1.params();
    if p1 == [Param::Unit] {
        s2.params()
    } else {
        p1
    }
}

/// Checks, by sampling `s2`, that `s1`'s sets contain `s2`'s sets over the
/// corpus and its reachable configurations.
pub fn spec_refines<L, A, B>(
    lang: &L,
    s1: &A,
    s2: &B,
    corpus: &[L::Config],
    budget: &SampleBudget,
) -> CheckReport<L::Config, L::Result>
where
    L: Language,
    A: Specification<L> + ?Sized,
    B: Specification<L> + ?Sized,
{
    let mut report = CheckReport::new("refines", format!("{} ⊇ {}", s1.name(), s2.name()), budget);
    let closure = with_reachable(lang, corpus, budget);
    for param in shared_params(s1, s2) {
        for config in &closure {
            report.stats.configs_checked += 1;
            let SpecSet::Constrained(outer) = s1.at(&param, config) else {
                continue;
            };
            let inner = match s2.at(&param, config) {
                SpecSet::Universe => {
                    report.stats.violations += 1;
                    if report.counterexamples.len() < MAX_REPORTED {
                        report.counterexamples.push(Counterexample {
                            source: Source::Refinement,
                            param,
                            config: lang.show_config(config),
                            result: "any result".to_string(),
                            expected: outer.describe().to_string(),
                            trace: Vec::new(),
                            evidence: None,
                        });
                    }
                    continue;
                }
                SpecSet::Constrained(inner) => inner,
            };
            let (members, rejected) = inner.members(budget);
            report.stats.rejected_samples += rejected;
            report.stats.results_inferred += members.len();
            for r in members.iter().filter(|r| !outer.contains(r)) {
                report.record(counterexample(
                    lang,
                    Source::Refinement,
                    &param,
                    config,
                    r,
                    outer.describe().to_string(),
                    None,
                ));
            }
        }
    }
    report.finish()
}

/// Replays a counterexample's evidence tree and returns the reconstructed result.
///
/// Inference counterexamples replay against `spec`; derivation-backed ones
/// against the trivial specification. Refinement counterexamples carry no tree.
pub fn replay_counterexample<L: Language + ?Sized, S: Specification<L> + ?Sized>(
    lang: &L,
    spec: &S,
    cx: &Counterexample<L::Config, L::Result>,
) -> Option<Result<L::Result, ReplayError>> {
    let tree = cx.evidence.as_ref()?;
    Some(match cx.source {
        Source::Inference => replay(lang, spec, &cx.param, tree),
        _ => replay(lang, &TrivialSpec, &Param::Unit, tree),
    })
}
