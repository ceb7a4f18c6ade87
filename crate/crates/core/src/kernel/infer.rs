//! Specification-aware inference.
//!
//! A premise whose configuration the specification says nothing about is
//! inferred recursively; a premise the specification constrains draws its
//! result from the constrained set instead of recursing. Recursion through
//! loops and recursive calls is cut exactly where the specification supplies
//! an invariant or contract.

use std::sync::Arc;

use indexmap::{IndexMap, IndexSet};
use serde::Serialize;
use thiserror::Error;

use super::derive::{derive_all, Enumeration};
use super::language::{Language, RuleApplication};
use super::spec::{Param, SampleBudget, SpecSet, Specification};

/// How one premise obtained its result.
#[derive(Debug)]
pub enum Premise<C, R> {
    /// Inferred recursively (the specification says nothing about the premise).
    Inferred(Arc<InferTree<C, R>>),
    /// Taken from the constrained set the specification assigns to the premise.
    Assumed { config: C, result: R, set: String },
}

impl<C, R> Premise<C, R> {
    pub fn config(&self) -> &C {
        match self {
            Premise::Inferred(t) => &t.config,
            Premise::Assumed { config, .. } => config,
        }
    }

    pub fn result(&self) -> &R {
        match self {
            Premise::Inferred(t) => &t.result,
            Premise::Assumed { result, .. } => result,
        }
    }
}

impl<C: Clone, R: Clone> Clone for Premise<C, R> {
    fn clone(&self) -> Self {
        match self {
            Premise::Inferred(t) => Premise::Inferred(Arc::clone(t)),
            Premise::Assumed { config, result, set } => Premise::Assumed {
                config: config.clone(),
                result: result.clone(),
                set: set.clone(),
            },
        }
    }
}

/// Evidence that `result` is inferable from `config`.
#[derive(Debug)]
pub struct InferTree<C, R> {
    pub config: C,
    pub rule: &'static str,
    /// Position of the rule in `rules(config)`.
    pub rule_index: usize,
    pub premises: Vec<Premise<C, R>>,
    pub result: R,
}

impl<C, R> InferTree<C, R> {
    pub fn height(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(|p| match p {
                Premise::Inferred(t) => t.height(),
                Premise::Assumed { .. } => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Pre-order walk over every rule instance and assumed premise.
    pub fn steps<L>(&self, lang: &L) -> Vec<TraceStep>
    where
        L: Language<Config = C, Result = R> + ?Sized,
    {
        let mut out = Vec::new();
        self.collect_steps(lang, 0, &mut out);
        out
    }

    fn collect_steps<L>(&self, lang: &L, depth: usize, out: &mut Vec<TraceStep>)
    where
        L: Language<Config = C, Result = R> + ?Sized,
    {
        out.push(TraceStep {
            depth,
            rule: Some(self.rule.to_string()),
            config: lang.show_config(&self.config),
            result: lang.show_result(&self.result),
            assumed_from: None,
        });
        for p in &self.premises {
            match p {
                Premise::Inferred(t) => t.collect_steps(lang, depth + 1, out),
                Premise::Assumed { config, result, set } => out.push(TraceStep {
                    depth: depth + 1,
                    rule: None,
                    config: lang.show_config(config),
                    result: lang.show_result(result),
                    assumed_from: Some(set.clone()),
                }),
            }
        }
    }
}

/// One line of a printed derivation or inference trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub depth: usize,
    /// Rule applied at this step; `None` for a premise result taken from the specification.
    pub rule: Option<String>,
    pub config: String,
    pub result: String,
    pub assumed_from: Option<String>,
}

/// Inference outcome: each result with the first evidence tree found for it.
#[derive(Debug)]
pub struct Inference<C, R> {
    pub results: IndexMap<R, Arc<InferTree<C, R>>>,
    pub exhausted: bool,
    /// Sampled elements that failed their own set's membership test.
    pub rejected_samples: usize,
}

impl<C, R: std::hash::Hash + Eq + Clone> Inference<C, R> {
    fn empty() -> Self {
        Inference {
            results: IndexMap::new(),
            exhausted: false,
            rejected_samples: 0,
        }
    }

    pub fn enumeration(&self) -> Enumeration<R> {
        Enumeration {
            results: self.results.keys().cloned().collect::<IndexSet<R>>(),
            exhausted: self.exhausted,
        }
    }
}

/// Where premise results for constrained premises come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// The set's own sampler.
    Sampler,
    /// The sampler, extended with the premise's derivable results that the set
    /// admits. Makes inference exact with respect to semantic derivations.
    DerivationInformed,
}

/// The inference engine for one specification and parameter value.
pub struct Inferrer<'a, L: Language + ?Sized, S: Specification<L> + ?Sized> {
    pub lang: &'a L,
    pub spec: &'a S,
    pub param: Param,
    pub budget: SampleBudget,
    pub sampling: Sampling,
}

impl<'a, L: Language + ?Sized, S: Specification<L> + ?Sized> Inferrer<'a, L, S> {
    pub fn new(lang: &'a L, spec: &'a S, param: Param, budget: SampleBudget) -> Self {
        Inferrer {
            lang,
            spec,
            param,
            budget,
            sampling: Sampling::Sampler,
        }
    }

    pub fn derivation_informed(mut self) -> Self {
        self.sampling = Sampling::DerivationInformed;
        self
    }

    pub fn run(&self, config: &L::Config) -> Inference<L::Config, L::Result> {
        self.infer(config, self.budget.max_depth)
    }

    fn infer(&self, config: &L::Config, depth: usize) -> Inference<L::Config, L::Result> {
        let rules = self.lang.rules(config);
        let mut out = Inference::empty();
        if depth == 0 {
            out.exhausted = !rules.is_empty();
            return out;
        }
        for (index, rule) in rules.iter().enumerate() {
            let head = Head {
                config,
                rule: rule.name,
                index,
            };
            self.walk(&head, &rule.body, depth - 1, Vec::new(), &mut out);
        }
        out
    }

    fn walk(
        &self,
        head: &Head<'_, L::Config>,
        app: &RuleApplication<L::Config, L::Result>,
        depth: usize,
        premises: Vec<Premise<L::Config, L::Result>>,
        out: &mut Inference<L::Config, L::Result>,
    ) {
        match app {
            RuleApplication::Conclude(r) => {
                out.results.entry(r.clone()).or_insert_with(|| {
                    Arc::new(InferTree {
                        config: head.config.clone(),
                        rule: head.rule,
                        rule_index: head.index,
                        premises,
                        result: r.clone(),
                    })
                });
            }
            RuleApplication::Need { premise, rest } => {
                for candidate in self.candidates(premise, depth, out) {
                    if let Some(next) = rest(candidate.result()) {
                        let mut extended = premises.clone();
                        extended.push(candidate);
                        self.walk(head, &next, depth, extended, out);
                    }
                }
            }
        }
    }

    fn candidates(
        &self,
        premise: &L::Config,
        depth: usize,
        out: &mut Inference<L::Config, L::Result>,
    ) -> Vec<Premise<L::Config, L::Result>> {
        match self.spec.at(&self.param, premise) {
            SpecSet::Universe => {
                let sub = self.infer(premise, depth);
                out.exhausted |= sub.exhausted;
                out.rejected_samples += sub.rejected_samples;
                sub.results.into_values().map(Premise::Inferred).collect()
            }
            SpecSet::Constrained(set) => {
                let (members, rejected) = set.members(&self.budget);
                out.rejected_samples += rejected;
                let mut chosen: IndexSet<L::Result> = members.into_iter().collect();
                if self.sampling == Sampling::DerivationInformed {
                    let derived = derive_all(self.lang, premise, &self.budget.with_depth(depth));
                    chosen.extend(derived.results.into_iter().filter(|r| set.contains(r)));
                }
                chosen
                    .into_iter()
                    .map(|result| Premise::Assumed {
                        config: premise.clone(),
                        result,
                        set: set.describe().to_string(),
                    })
                    .collect()
            }
        }
    }
}

struct Head<'c, C> {
    config: &'c C,
    rule: &'static str,
    index: usize,
}

/// Results inferable from `config` with the help of `spec` at `param`.
///
/// Every returned result is genuinely inferable (sampled premise results are
/// members of their sets), so this under-approximates the inferable set.
pub fn infer_results<L: Language + ?Sized, S: Specification<L> + ?Sized>(
    lang: &L,
    spec: &S,
    param: &Param,
    config: &L::Config,
    budget: &SampleBudget,
) -> Enumeration<L::Result> {
    Inferrer::new(lang, spec, *param, *budget).run(config).enumeration()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("rule #{index} (`{name}`) no longer applies to {config}")]
    MissingRule {
        index: usize,
        name: String,
        config: String,
    },
    #[error("premise {position} of `{rule}` is {found}, the rule asks for {expected}")]
    PremiseMismatch {
        rule: String,
        position: usize,
        expected: String,
        found: String,
    },
    #[error("premise result {result} does not fit rule `{rule}`")]
    Rejected { rule: String, result: String },
    #[error("rule `{rule}` has {expected} premises, trace records {found}")]
    Arity {
        rule: String,
        expected: usize,
        found: usize,
    },
    #[error("assumed result {result} for {config} is not a member of the specification's set")]
    NotAMember { config: String, result: String },
    #[error("premise {config} was inferred although the specification constrains it")]
    ShouldBeAssumed { config: String },
    #[error("premise {config} was assumed although the specification says nothing about it")]
    ShouldBeInferred { config: String },
    #[error("rule `{rule}` concludes {actual}, trace records {recorded}")]
    WrongConclusion {
        rule: String,
        actual: String,
        recorded: String,
    },
}

/// Re-runs the rule instances of `tree`, feeding recorded premise results
/// back through them, and returns the reconstructed conclusion result.
///
/// Also re-validates that assumed premise results belong to the sets the
/// specification assigns, and that inferred premises are unconstrained.
pub fn replay<L: Language + ?Sized, S: Specification<L> + ?Sized>(
    lang: &L,
    spec: &S,
    param: &Param,
    tree: &InferTree<L::Config, L::Result>,
) -> Result<L::Result, ReplayError> {
    let rules = lang.rules(&tree.config);
    let rule = rules
        .get(tree.rule_index)
        .filter(|r| r.name == tree.rule)
        .ok_or_else(|| ReplayError::MissingRule {
            index: tree.rule_index,
            name: tree.rule.to_string(),
            config: lang.show_config(&tree.config),
        })?;
    let mut app = rule.body.clone();
    let mut recorded = tree.premises.iter();
    let mut position = 0;
    loop {
        match app {
            RuleApplication::Conclude(r) => {
                if recorded.next().is_some() {
                    return Err(ReplayError::Arity {
                        rule: tree.rule.to_string(),
                        expected: position,
                        found: tree.premises.len(),
                    });
                }
                if r != tree.result {
                    return Err(ReplayError::WrongConclusion {
                        rule: tree.rule.to_string(),
                        actual: lang.show_result(&r),
                        recorded: lang.show_result(&tree.result),
                    });
                }
                return Ok(r);
            }
            RuleApplication::Need { premise, rest } => {
                let step = recorded.next().ok_or_else(|| ReplayError::Arity {
                    rule: tree.rule.to_string(),
                    expected: position + 1,
                    found: tree.premises.len(),
                })?;
                if step.config() != &premise {
                    return Err(ReplayError::PremiseMismatch {
                        rule: tree.rule.to_string(),
                        position,
                        expected: lang.show_config(&premise),
                        found: lang.show_config(step.config()),
                    });
                }
                let result = match step {
                    Premise::Inferred(sub) => {
                        if !spec.at(param, &sub.config).is_universe() {
                            return Err(ReplayError::ShouldBeAssumed {
                                config: lang.show_config(&sub.config),
                            });
                        }
                        replay(lang, spec, param, sub)?
                    }
                    Premise::Assumed { config, result, .. } => match spec.at(param, config) {
                        SpecSet::Universe => {
                            return Err(ReplayError::ShouldBeInferred {
                                config: lang.show_config(config),
                            })
                        }
                        SpecSet::Constrained(set) if !set.contains(result) => {
                            return Err(ReplayError::NotAMember {
                                config: lang.show_config(config),
                                result: lang.show_result(result),
                            })
                        }
                        SpecSet::Constrained(_) => result.clone(),
                    },
                };
                app = rest(&result).ok_or_else(|| ReplayError::Rejected {
                    rule: tree.rule.to_string(),
                    result: lang.show_result(&result),
                })?;
                position += 1;
            }
        }
    }
}
