//! Language-independent engine: derivations, specification-aware inference and checks.

pub mod check;
pub mod derive;
pub mod infer;
pub mod language;
pub mod spec;

pub use check::{
    check_soundness_crosscheck, check_valid, check_verif, replay_counterexample, spec_refines,
    with_reachable, CheckReport, CheckStats, Counterexample, Source, Status,
};
pub use derive::{derive_all, derive_one, evaluate, reachable, Enumeration, Evaluation};
pub use infer::{infer_results, replay, InferTree, Inference, Inferrer, Premise, ReplayError, TraceStep};
pub use language::{Continuation, Language, Rule, RuleApplication};
pub use spec::{star_spec, Constrained, Param, SampleBudget, SpecSet, Specification, StarSpec, TrivialSpec};
