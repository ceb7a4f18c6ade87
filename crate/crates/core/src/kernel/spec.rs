use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use indexmap::IndexSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::derive::derive_all;
use super::language::Language;

/// Exploration limits shared by every engine operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SampleBudget {
    /// Maximum derivation-tree height (nested rule applications).
    pub max_depth: usize,
    /// Samples drawn from each constrained result set.
    pub max_samples: usize,
    pub seed: u64,
}

impl Default for SampleBudget {
    fn default() -> Self {
        SampleBudget {
            max_depth: 64,
            max_samples: 16,
            seed: 0,
        }
    }
}

impl SampleBudget {
    pub fn new(max_depth: usize, max_samples: usize, seed: u64) -> Self {
        SampleBudget {
            max_depth,
            max_samples,
            seed,
        }
    }

    pub fn with_depth(self, max_depth: usize) -> Self {
        SampleBudget { max_depth, ..self }
    }

    /// Deterministic generator keyed by the seed and `key`.
    pub fn rng_for<K: Hash + ?Sized>(&self, key: &K) -> ChaCha8Rng {
        let mut h = DefaultHasher::new();
        self.seed.hash(&mut h);
        key.hash(&mut h);
        ChaCha8Rng::seed_from_u64(h.finish())
    }
}

/// Value of a specification's global parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Param {
    Unit,
    Int(i64),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Unit => write!(f, "()"),
            Param::Int(v) => write!(f, "{v}"),
        }
    }
}

type Membership<R> = Arc<dyn Fn(&R) -> bool + Send + Sync>;
type Sampler<R> = Arc<dyn Fn(&SampleBudget) -> Vec<R> + Send + Sync>;

/// A set of result configurations described by a membership test and a sampler.
pub struct Constrained<R> {
    contains: Membership<R>,
    sample: Sampler<R>,
    describe: String,
}

impl<R> Clone for Constrained<R> {
    fn clone(&self) -> Self {
        Constrained {
            contains: Arc::clone(&self.contains),
            sample: Arc::clone(&self.sample),
            describe: self.describe.clone(),
        }
    }
}

impl<R> Constrained<R> {
    pub fn new(
        describe: impl Into<String>,
        contains: impl Fn(&R) -> bool + Send + Sync + 'static,
        sample: impl Fn(&SampleBudget) -> Vec<R> + Send + Sync + 'static,
    ) -> Self {
        Constrained {
            contains: Arc::new(contains),
            sample: Arc::new(sample),
            describe: describe.into(),
        }
    }

    pub fn contains(&self, r: &R) -> bool {
        (self.contains)(r)
    }

    /// Raw sampler output. Callers that need members only should use [`Self::members`].
    pub fn sample(&self, budget: &SampleBudget) -> Vec<R> {
        (self.sample)(budget)
    }

    /// Sampled elements that pass the membership test, plus the number rejected.
    pub fn members(&self, budget: &SampleBudget) -> (Vec<R>, usize) {
        let raw = self.sample(budget);
        let total = raw.len();
        let kept: Vec<R> = raw.into_iter().filter(|r| self.contains(r)).collect();
        let rejected = total - kept.len();
        (kept, rejected)
    }

    pub fn describe(&self) -> &str {
        &self.describe
    }
}

/// What a specification says about one configuration.
pub enum SpecSet<R> {
    /// No information: every result configuration is admissible.
    Universe,
    Constrained(Constrained<R>),
}

impl<R> Clone for SpecSet<R> {
    fn clone(&self) -> Self {
        match self {
            SpecSet::Universe => SpecSet::Universe,
            SpecSet::Constrained(c) => SpecSet::Constrained(c.clone()),
        }
    }
}

impl<R> SpecSet<R> {
    pub fn contains(&self, r: &R) -> bool {
        match self {
            SpecSet::Universe => true,
            SpecSet::Constrained(c) => c.contains(r),
        }
    }

    pub fn is_universe(&self) -> bool {
        matches!(self, SpecSet::Universe)
    }

    pub fn describe(&self) -> String {
        match self {
            SpecSet::Universe => "all results".to_string(),
            SpecSet::Constrained(c) => c.describe.clone(),
        }
    }

    pub fn constrained(&self) -> Option<&Constrained<R>> {
        match self {
            SpecSet::Constrained(c) => Some(c),
            SpecSet::Universe => None,
        }
    }
}

/// A parameterized map from configurations to admissible result sets.
///
/// Configurations a specification does not speak about map to
/// [`SpecSet::Universe`].
pub trait Specification<L: Language + ?Sized>: Send + Sync {
    fn name(&self) -> String;

    /// Finite parameter domain; `[Param::Unit]` for unparameterized specifications.
    fn params(&self) -> Vec<Param> {
        vec![Param::Unit]
    }

    fn at(&self, param: &Param, config: &L::Config) -> SpecSet<L::Result>;
}

impl<L: Language + ?Sized, S: Specification<L> + ?Sized> Specification<L> for &S {
    fn name(&self) -> String {
        (**self).name()
    }
    fn params(&self) -> Vec<Param> {
        (**self).params()
    }
    fn at(&self, param: &Param, config: &L::Config) -> SpecSet<L::Result> {
        (**self).at(param, config)
    }
}

impl<L: Language + ?Sized, S: Specification<L> + ?Sized> Specification<L> for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn params(&self) -> Vec<Param> {
        (**self).params()
    }
    fn at(&self, param: &Param, config: &L::Config) -> SpecSet<L::Result> {
        (**self).at(param, config)
    }
}

/// The specification that says nothing anywhere.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrivialSpec;

impl<L: Language + ?Sized> Specification<L> for TrivialSpec {
    fn name(&self) -> String {
        "trivial".into()
    }

    fn at(&self, _: &Param, _: &L::Config) -> SpecSet<L::Result> {
        SpecSet::Universe
    }
}

/// Bounded stand-in for the most informative specification: every
/// configuration maps to its results derivable within `budget.max_depth`.
pub struct StarSpec<L: Language + 'static> {
    lang: Arc<L>,
    budget: SampleBudget,
}

impl<L: Language + 'static> StarSpec<L> {
    pub fn new(lang: Arc<L>, budget: SampleBudget) -> Self {
        StarSpec { lang, budget }
    }
}

/// Builds the bounded most-informative specification for `lang`.
pub fn star_spec<L: Language + 'static>(lang: Arc<L>, budget: SampleBudget) -> StarSpec<L> {
    StarSpec::new(lang, budget)
}

impl<L: Language + 'static> Specification<L> for StarSpec<L> {
    fn name(&self) -> String {
        format!("star(depth {})", self.budget.max_depth)
    }

    fn at(&self, _: &Param, config: &L::Config) -> SpecSet<L::Result> {
        let lazy = Arc::new(LazyDerivation {
            lang: Arc::clone(&self.lang),
            config: config.clone(),
            budget: self.budget,
            cell: OnceLock::new(),
        });
        let for_sample = Arc::clone(&lazy);
        SpecSet::Constrained(Constrained::new(
            format!("all derivable results (depth ≤ {})", self.budget.max_depth),
            move |r| lazy.get().contains(r),
            move |_| for_sample.get().iter().cloned().collect(),
        ))
    }
}

struct LazyDerivation<L: Language> {
    lang: Arc<L>,
    config: L::Config,
    budget: SampleBudget,
    cell: OnceLock<IndexSet<L::Result>>,
}

impl<L: Language> LazyDerivation<L> {
    fn get(&self) -> &IndexSet<L::Result> {
        self.cell
            .get_or_init(|| derive_all(self.lang.as_ref(), &self.config, &self.budget).results)
    }
}
