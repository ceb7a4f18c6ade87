use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::syntax::ParseError;

/// Continuation of a rule instance once the result of its pending premise is known.
///
/// Returns `None` when the premise result does not fit the rule's pattern (for
/// instance an `if-true` rule whose guard evaluated to `false`); the rule
/// instance then contributes nothing.
pub type Continuation<C, R> = Arc<dyn Fn(&R) -> Option<RuleApplication<C, R>> + Send + Sync>;

/// One instantiated semantic rule, with premises surfaced left to right.
///
/// Later premise configurations may depend on the results of earlier ones, so
/// each premise carries the remainder of the rule as a continuation.
pub enum RuleApplication<C, R> {
    Conclude(R),
    Need { premise: C, rest: Continuation<C, R> },
}

impl<C: Clone, R: Clone> Clone for RuleApplication<C, R> {
    fn clone(&self) -> Self {
        match self {
            RuleApplication::Conclude(r) => RuleApplication::Conclude(r.clone()),
            RuleApplication::Need { premise, rest } => RuleApplication::Need {
                premise: premise.clone(),
                rest: Arc::clone(rest),
            },
        }
    }
}

impl<C: Debug, R: Debug> Debug for RuleApplication<C, R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RuleApplication::Conclude(r) => f.debug_tuple("Conclude").field(r).finish(),
            RuleApplication::Need { premise, .. } => {
                f.debug_struct("Need").field("premise", premise).finish_non_exhaustive()
            }
        }
    }
}

impl<C: Clone, R: Clone> RuleApplication<C, R> {
    pub fn need(
        premise: C,
        rest: impl Fn(&R) -> Option<RuleApplication<C, R>> + Send + Sync + 'static,
    ) -> Self {
        RuleApplication::Need {
            premise,
            rest: Arc::new(rest),
        }
    }

    /// Flattens the rule by choosing each premise result with `choose`.
    ///
    /// Yields the `(premise, result)` list and the conclusion result, i.e. the
    /// flat rule predicate instance. `None` if `choose` declines a premise or a
    /// chosen result does not fit the rule.
    pub fn instantiate(&self, mut choose: impl FnMut(&C) -> Option<R>) -> Option<(Vec<(C, R)>, R)> {
        let mut premises = Vec::new();
        let mut app = self.clone();
        loop {
            match app {
                RuleApplication::Conclude(r) => return Some((premises, r)),
                RuleApplication::Need { premise, rest } => {
                    let r = choose(&premise)?;
                    let next = rest(&r)?;
                    premises.push((premise, r));
                    app = next;
                }
            }
        }
    }

    pub fn premise(&self) -> Option<&C> {
        match self {
            RuleApplication::Need { premise, .. } => Some(premise),
            RuleApplication::Conclude(_) => None,
        }
    }
}

/// A named rule instance whose conclusion configuration is the one `rules` was asked about.
pub struct Rule<C, R> {
    pub name: &'static str,
    pub body: RuleApplication<C, R>,
}

impl<C: Clone, R: Clone> Clone for Rule<C, R> {
    fn clone(&self) -> Self {
        Rule {
            name: self.name,
            body: self.body.clone(),
        }
    }
}

impl<C: Debug, R: Debug> Debug for Rule<C, R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Rule")
            .field("name", &self.name)
            .field("body", &self.body)
            .finish()
    }
}

impl<C: Clone, R: Clone> Rule<C, R> {
    pub fn axiom(name: &'static str, result: R) -> Self {
        Rule {
            name,
            body: RuleApplication::Conclude(result),
        }
    }

    pub fn new(name: &'static str, body: RuleApplication<C, R>) -> Self {
        Rule { name, body }
    }
}

/// A language given by its big-step rules.
///
/// `rules` must be pure, and must return an empty list exactly for stuck
/// configurations.
pub trait Language: Send + Sync {
    type Config: Clone + Eq + Hash + Debug + Send + Sync + 'static;
    type Result: Clone + Eq + Hash + Debug + Send + Sync + 'static;

    fn name(&self) -> &'static str;

    fn rules(&self, config: &Self::Config) -> Vec<Rule<Self::Config, Self::Result>>;

    fn parse_config(&self, text: &str) -> Result<Self::Config, ParseError>;

    fn parse_result(&self, text: &str) -> Result<Self::Result, ParseError>;

    fn show_config(&self, config: &Self::Config) -> String;

    fn show_result(&self, result: &Self::Result) -> String;

    fn describe_stuck(&self, config: &Self::Config) -> String {
        format!("stuck at {}", self.show_config(config))
    }
}
