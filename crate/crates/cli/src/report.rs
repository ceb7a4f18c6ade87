//! Command execution and report rendering.

use std::fmt::Write as _;

use bigstep_core::kernel::{
    check_soundness_crosscheck, check_valid, check_verif, derive_all, evaluate, star_spec, CheckReport, Evaluation,
    Language, SampleBudget, Specification, Status, TraceStep,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{Command, Format};
use crate::setup::{CliError, Plan, SpecChoice};

pub const SCHEMA_VERSION: &str = "1";

pub mod exit {
    pub const OK: u8 = 0;
    pub const FAIL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const STUCK: u8 = 3;
    pub const BUDGET: u8 = 4;
}

pub struct Outcome {
    pub output: String,
    pub code: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum RunStatus {
    Result,
    Stuck,
    BudgetExhausted,
}

impl RunStatus {
    fn code(self) -> u8 {
        match self {
            RunStatus::Result => exit::OK,
            RunStatus::Stuck => exit::STUCK,
            RunStatus::BudgetExhausted => exit::BUDGET,
        }
    }
}

pub fn execute<L: Language + 'static>(
    cmd: Command,
    plan: Plan<L>,
    budget: SampleBudget,
    format: Format,
) -> Result<Outcome, CliError> {
    let Plan { lang, spec, corpus } = plan;
    match cmd {
        Command::Run | Command::Derive => {
            let [config] = &corpus[..] else {
                return Err(CliError::Usage(format!(
                    "{} takes exactly one configuration, got {}",
                    cmd.name(),
                    corpus.len()
                )));
            };
            Ok(if cmd == Command::Run {
                run(&*lang, config, &budget, format)
            } else {
                derive(&*lang, config, &budget, format)
            })
        }
        Command::StarCheck => {
            if matches!(spec, SpecChoice::Bundled(_)) {
                return Err(CliError::Usage("star-check always uses the star specification; drop --spec".into()));
            }
            let star = star_spec(lang.clone(), budget);
            let report = check_verif(&*lang, &star, &corpus, &budget);
            Ok(check_outcome(cmd, &*lang, &report, corpus.len(), format))
        }
        Command::CheckValid | Command::CheckVerif | Command::Crosscheck => {
            let star;
            let spec: &dyn Specification<L> = match &spec {
                SpecChoice::Bundled(s) => s.as_ref(),
                SpecChoice::Star => {
                    star = star_spec(lang.clone(), budget);
                    &star
                }
                SpecChoice::None => return Err(CliError::Usage(format!("{} needs --spec", cmd.name()))),
            };
            let report = match cmd {
                Command::CheckValid => check_valid(&*lang, spec, &corpus, &budget),
                Command::CheckVerif => check_verif(&*lang, spec, &corpus, &budget),
                _ => check_soundness_crosscheck(&*lang, spec, &corpus, &budget),
            };
            Ok(check_outcome(cmd, &*lang, &report, corpus.len(), format))
        }
    }
}

fn run<L: Language>(lang: &L, config: &L::Config, budget: &SampleBudget, format: Format) -> Outcome {
    let (status, text, result, stuck_at) = match evaluate(lang, config, budget) {
        Evaluation::Value(r) => {
            let shown = lang.show_result(&r);
            (RunStatus::Result, shown.clone(), Some(shown), None)
        }
        Evaluation::Stuck(c) => (RunStatus::Stuck, lang.describe_stuck(&c), None, Some(lang.show_config(&c))),
        Evaluation::OutOfFuel => (
            RunStatus::BudgetExhausted,
            format!("budget exhausted: no result within depth {}", budget.max_depth),
            None,
            None,
        ),
    };
    let output = match format {
        Format::Text => text + "\n",
        Format::Structured => document(json!({
            "command": "run",
            "lang": lang.name(),
            "config": lang.show_config(config),
            "status": status,
            "result": result,
            "stuck_at": stuck_at,
            "budget": budget,
        })),
    };
    Outcome {
        output,
        code: status.code(),
    }
}

fn derive<L: Language>(lang: &L, config: &L::Config, budget: &SampleBudget, format: Format) -> Outcome {
    let all = derive_all(lang, config, budget);
    let results: Vec<String> = all.results.iter().map(|r| lang.show_result(r)).collect();
    let status = if !results.is_empty() {
        RunStatus::Result
    } else if all.exhausted {
        RunStatus::BudgetExhausted
    } else {
        RunStatus::Stuck
    };
    let output = match format {
        Format::Text => {
            let mut out = String::new();
            for r in &results {
                writeln!(out, "{r}").unwrap();
            }
            match status {
                RunStatus::Stuck => writeln!(out, "stuck: no derivation").unwrap(),
                RunStatus::BudgetExhausted => {
                    writeln!(out, "budget exhausted: no result within depth {}", budget.max_depth).unwrap()
                }
                RunStatus::Result if all.exhausted => {
                    writeln!(out, "(some branches were cut at depth {})", budget.max_depth).unwrap()
                }
                RunStatus::Result => {}
            }
            out
        }
        Format::Structured => document(json!({
            "command": "derive",
            "lang": lang.name(),
            "config": lang.show_config(config),
            "status": status,
            "results": results,
            "exhausted": all.exhausted,
            "budget": budget,
        })),
    };
    Outcome {
        output,
        code: status.code(),
    }
}

fn check_code(status: Status) -> u8 {
    match status {
        Status::Pass => exit::OK,
        Status::Fail | Status::PreconditionFailed => exit::FAIL,
        Status::BudgetExhausted => exit::BUDGET,
    }
}

fn status_word(status: Status) -> &'static str {
    match status {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::BudgetExhausted => "budget exhausted",
        Status::PreconditionFailed => "precondition failed (verification does not pass)",
    }
}

fn check_outcome<L: Language>(
    cmd: Command,
    lang: &L,
    report: &CheckReport<L::Config, L::Result>,
    corpus_size: usize,
    format: Format,
) -> Outcome {
    let output = match format {
        Format::Text => render_check(cmd, report, corpus_size),
        Format::Structured => document(json!({
            "command": cmd.name(),
            "lang": lang.name(),
            "spec": report.spec,
            "status": report.status,
            "corpus_size": corpus_size,
            "counterexamples": report.counterexamples,
            "stats": report.stats,
            "budget": report.budget,
        })),
    };
    Outcome {
        output,
        code: check_code(report.status),
    }
}

fn render_check<C, R>(cmd: Command, report: &CheckReport<C, R>, corpus_size: usize) -> String {
    let mut out = String::new();
    let s = &report.stats;
    let b = &report.budget;
    writeln!(out, "{} {}: {}", cmd.name(), report.spec, status_word(report.status)).unwrap();
    writeln!(
        out,
        "  corpus {corpus_size}, configurations checked {}, results inferred {}, depth-bound hits {}, rejected samples {}, violations {}",
        s.configs_checked, s.results_inferred, s.depth_hit, s.rejected_samples, s.violations
    )
    .unwrap();
    writeln!(out, "  budget: depth {}, samples {}, seed {}", b.max_depth, b.max_samples, b.seed).unwrap();
    let shown = report.counterexamples.len();
    for (i, cx) in report.counterexamples.iter().enumerate() {
        let source = serde_json::to_value(cx.source).unwrap();
        writeln!(out, "counterexample {} of {} [{}, param {}]", i + 1, s.violations, source.as_str().unwrap_or(""), cx.param).unwrap();
        writeln!(out, "  configuration: {}", cx.config).unwrap();
        writeln!(out, "  result:        {}", cx.result).unwrap();
        writeln!(out, "  expected:      {}", cx.expected).unwrap();
        if !cx.trace.is_empty() {
            writeln!(out, "  trace:").unwrap();
            for step in &cx.trace {
                writeln!(out, "    {}", trace_line(step)).unwrap();
            }
        }
    }
    if s.violations > shown {
        writeln!(out, "({} more not shown)", s.violations - shown).unwrap();
    }
    out
}

fn trace_line(step: &TraceStep) -> String {
    let indent = "  ".repeat(step.depth);
    let rule = step.rule.as_deref().unwrap_or("spec");
    let mut line = format!("{indent}[{rule}] {} ⇓ {}", step.config, step.result);
    if let Some(from) = &step.assumed_from {
        write!(line, "  (assumed from {from})").unwrap();
    }
    line
}

fn document(mut body: serde_json::Value) -> String {
    body.as_object_mut()
        .expect("report bodies are objects")
        .insert("schema_version".into(), SCHEMA_VERSION.into());
    let mut s = serde_json::to_string_pretty(&body).expect("reports serialize");
    s.push('\n');
    s
}
