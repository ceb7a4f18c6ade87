use std::collections::BTreeMap;
use std::sync::Arc;

use bigstep_core::corpus::{fac_corpus, list_pairs, merge_instances, merge_list_corpus};
use bigstep_core::kernel::{with_reachable, Language, Param, SampleBudget, Specification};
use bigstep_core::lang::extwhile::{merge_program, AExp, ExtConfig, ExtLang, ExtState, Stmt};
use bigstep_core::lang::fun::{as_canonical, merge_expr, merge_unfolded, parse_expr, Canonical, FunLang};
use bigstep_core::lang::while_lang::{factorial_loop, factorial_program, WhileConfig, WhileLang, WhileState};
use bigstep_core::speclib::{occ, occ_add, FacSpec, MglistSpec, MsortSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn occurrences_of_a_concatenation_add_up(
        a in prop::collection::vec(-4i64..4, 0..=8),
        b in prop::collection::vec(-4i64..4, 0..=8),
    ) {
        let joined = [a.clone(), b.clone()].concat();
        prop_assert_eq!(occ(&joined), occ_add(&occ(&a), &occ(&b)));
        prop_assert_eq!(occ(&joined).total(), joined.len());
    }

    #[test]
    fn canonical_lists_round_trip(v in prop::collection::vec(-50i64..50, 0..=8)) {
        let c = Canonical::list(&v);
        prop_assert_eq!(c.int_list(), Some(v));
        let reparsed = as_canonical(&parse_expr(&c.to_string()).unwrap()).unwrap();
        prop_assert_eq!(reparsed, c);
    }
}

fn assert_samplers_valid<L: Language, S: Specification<L>>(lang: &L, spec: &S, corpus: &[L::Config], budget: &SampleBudget) -> usize {
    let mut constrained = 0;
    for config in with_reachable(lang, corpus, budget) {
        for param in spec.params() {
            if let Some(set) = spec.at(&param, &config).constrained() {
                constrained += 1;
                let samples = set.sample(budget);
                assert!(!samples.is_empty(), "{} has no samples at {}", spec.name(), lang.show_config(&config));
                for s in samples {
                    assert!(set.contains(&s), "{}: sample {} rejected at {}", spec.name(), lang.show_result(&s), lang.show_config(&config));
                }
            }
        }
    }
    constrained
}

#[test]
fn every_sampled_member_is_a_member() {
    let b = SampleBudget::default();
    assert!(assert_samplers_valid(&WhileLang, &FacSpec::default(), &fac_corpus(1..=8), &b) > 0);
    assert!(assert_samplers_valid(&WhileLang, &FacSpec::mutant(), &fac_corpus(1..=8), &b) > 0);
    let ext = ExtLang::new(Arc::clone(&merge_program().program));
    let calls: Vec<ExtConfig> = merge_instances(40, 8).iter().map(|m| m.config()).collect();
    let b = SampleBudget::default().with_depth(256);
    assert!(assert_samplers_valid(&ext, &MsortSpec::default(), &calls, &b) > 0);
    assert!(assert_samplers_valid(&ext, &MsortSpec::mutant(), &calls, &b) > 0);
    let lists = merge_list_corpus(&list_pairs(40, 8));
    let b = SampleBudget::default().with_depth(512);
    assert!(assert_samplers_valid(&FunLang::default(), &MglistSpec::default(), &lists, &b) > 0);
    assert!(assert_samplers_valid(&FunLang::default(), &MglistSpec::mutant(), &lists, &b) > 0);
}

// ---- guard completeness ----

fn is_sorted(v: &[i64]) -> bool {
    v.windows(2).all(|w| w[0] <= w[1])
}

fn slice(st: &ExtState, x: &str, lo: i64, hi: i64) -> Vec<i64> {
    let base = st.get(x).unwrap();
    (lo..=hi).map(|i| st.load(base + i)).collect()
}

fn disjoint(st: &ExtState, x: &str, y: &str, lo: i64, hi: i64) -> bool {
    let (a, b) = (st.get(x).unwrap(), st.get(y).unwrap());
    a + hi < b + lo || b + hi < a + lo
}

fn var(st: &ExtState, x: &str) -> i64 {
    st.get(x).unwrap()
}

type Conjuncts = Vec<(&'static str, bool)>;

fn main_loop_guard(l: i64, st: &ExtState) -> Conjuncts {
    let [i, j, k, m, n] = ["i", "j", "k", "m", "n"].map(|x| var(st, x));
    let at = |x: &str, idx: i64| st.load(var(st, x) + idx);
    vec![
        ("0 <= l", 0 <= l),
        ("l <= i", l <= i),
        ("i <= m", i <= m),
        ("m < j", m < j),
        ("j <= n", j <= n),
        ("k = i+j-m-1", k == i + j - m - 1),
        ("next elements bound the filled prefix", k < l + 1 || (at("S", i) >= at("T", k - 1) && at("S", j) >= at("T", k - 1))),
        ("sorted S[i..m]", is_sorted(&slice(st, "S", i, m))),
        ("sorted S[j..n]", is_sorted(&slice(st, "S", j, n))),
        ("sorted T[l..k-1]", is_sorted(&slice(st, "T", l, k - 1))),
        ("sep", disjoint(st, "S", "T", l, n)),
    ]
}

fn tail_guard(first: bool, l: i64, st: &ExtState) -> Conjuncts {
    let [i, j, k, m, n] = ["i", "j", "k", "m", "n"].map(|x| var(st, x));
    let mut out = vec![("0 <= l", 0 <= l)];
    if first {
        out.extend([("l <= i", l <= i), ("i <= m", i <= m), ("m < n", m < n), ("j = n+1", j == n + 1)]);
    } else {
        out.extend([("l <= m", l <= m), ("m < j", m < j), ("j <= n", j <= n), ("i = m+1", i == m + 1)]);
    }
    out.extend([("k = i+j-m-1", k == i + j - m - 1), ("sep", disjoint(st, "S", "T", l, n))]);
    out
}

fn call_guard(l: i64, c: &ExtConfig) -> Conjuncts {
    let Stmt::Call { args, .. } = &*c.stmt else { unreachable!() };
    let num = |a: &AExp| match a {
        AExp::Num(v) => *v,
        _ => unreachable!(),
    };
    let (lv, m, h) = (num(&args[2]), num(&args[3]), num(&args[4]));
    let st = &c.state;
    vec![
        ("l = param", lv == l),
        ("0 <= l", 0 <= lv),
        ("l <= m", lv <= m),
        ("m < h", m < h),
        ("sorted first", is_sorted(&slice(st, "S", lv, m))),
        ("sorted second", is_sorted(&slice(st, "S", m + 1, h))),
        ("sep", disjoint(st, "S", "T", lv, h)),
    ]
}

fn mutate_state(st: &ExtState, r: &mut impl Rng) -> ExtState {
    let st = st.clone();
    match r.gen_range(0..4) {
        // Keeps k = i+j-m-1 intact, and j = n+1 too when n moves along.
        3 => {
            let d = [-1, 1][r.gen_range(0..2)];
            let names: &[&str] = [&["j", "k"][..], &["j", "k", "n"], &["i", "k"]][r.gen_range(0..3)];
            names.iter().fold(st, |st, x| {
                let v = st.get(x).unwrap() + d;
                st.with_name(x, v)
            })
        }
        0 => {
            let x = ["i", "j", "k", "m", "n"][r.gen_range(0..5)];
            let v = st.get(x).unwrap() + [-1, 1][r.gen_range(0..2)];
            st.with_name(x, v)
        }
        1 => {
            let x = ["S", "T"][r.gen_range(0..2)];
            let v = st.get(x).unwrap() + r.gen_range(-4..=4);
            st.with_name(x, v)
        }
        _ => {
            let loc = r.gen_range(0..st.nextloc.max(1));
            st.with_loc(loc, r.gen_range(-3..=3))
        }
    }
}

fn mutate_call(c: &ExtConfig, r: &mut impl Rng) -> ExtConfig {
    let Stmt::Call { fun, args, receivers } = &*c.stmt else { unreachable!() };
    if r.gen_bool(0.5) {
        let mut args = args.clone();
        let idx = r.gen_range(2..5);
        if let AExp::Num(v) = args[idx] {
            args[idx] = AExp::Num(v + [-1, 1][r.gen_range(0..2)]);
        }
        let stmt = Stmt::Call { fun: fun.clone(), args, receivers: receivers.clone() };
        // T sits right after S in the corpus, so a lower l also needs room below T.
        let mut st = c.state.clone();
        if r.gen_bool(0.5) {
            let v = st.get("T").unwrap() + r.gen_range(1..=4);
            st = st.with_name("T", v);
        }
        return ExtConfig::new(Arc::new(stmt), st, Arc::clone(&c.program));
    }
    let st = c.state.clone();
    let st = if r.gen_bool(0.3) {
        let v = st.get("T").unwrap() + r.gen_range(-6..=2);
        st.with_name("T", v)
    } else {
        let loc = r.gen_range(0..st.nextloc);
        st.with_loc(loc, r.gen_range(-3..=3))
    };
    ExtConfig::new(Arc::clone(&c.stmt), st, Arc::clone(&c.program))
}

/// Checks that the specification is constrained exactly when every conjunct
/// holds, and that each conjunct alone was seen failing.
struct GuardTally {
    lone_failures: BTreeMap<&'static str, usize>,
}

impl GuardTally {
    fn new() -> Self {
        GuardTally { lone_failures: BTreeMap::new() }
    }

    fn record(&mut self, conjuncts: &Conjuncts, constrained: bool, what: &dyn std::fmt::Display) {
        let failing: Vec<&str> = conjuncts.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
        assert_eq!(constrained, failing.is_empty(), "{what}: failing {failing:?}");
        if let [only] = failing[..] {
            *self.lone_failures.entry(only).or_default() += 1;
        }
    }

    fn assert_covers(&self, conjuncts: &Conjuncts) {
        for (name, _) in conjuncts {
            assert!(self.lone_failures.get(name).copied().unwrap_or(0) > 0, "`{name}` never failed alone: {:?}", self.lone_failures);
        }
    }
}

#[test]
fn merge_spec_guards_are_complete() {
    let mp = merge_program();
    let ext = ExtLang::new(Arc::clone(&mp.program));
    let spec = MsortSpec::default().with_params(vec![-1, 0, 1, 2]);
    let budget = SampleBudget::default().with_depth(256);
    let calls: Vec<ExtConfig> = merge_instances(40, 2).iter().map(|m| m.config()).collect();
    let closure = with_reachable(&ext, &calls, &budget);
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let (mut main, mut tail1, mut tail2, mut call) = (GuardTally::new(), GuardTally::new(), GuardTally::new(), GuardTally::new());
    let mut shapes = (None, None, None, None);
    let is = |c: &ExtConfig, s: &Arc<Stmt>| Arc::ptr_eq(&c.stmt, s) || c.stmt == *s;
    for base in closure.iter() {
        let is_call = matches!(&*base.stmt, Stmt::Call { .. });
        let at_loop = [&mp.merge_loop, &mp.tail_first, &mp.tail_second].iter().any(|s| is(base, s));
        if !is_call && !at_loop {
            for l in [-1, 0, 1, 2] {
                assert!(spec.at(&Param::Int(l), base).is_universe(), "{base}");
            }
            continue;
        }
        for _ in 0..12 {
            let c = if is_call {
                mutate_call(base, &mut r)
            } else {
                ExtConfig::new(Arc::clone(&base.stmt), mutate_state(&base.state, &mut r), Arc::clone(&base.program))
            };
            for l in [-1, 0, 1, 2] {
                let constrained = !spec.at(&Param::Int(l), &c).is_universe();
                let (tally, guard, slot) = if is_call {
                    (&mut call, call_guard(l, &c), &mut shapes.3)
                } else if is(&c, &mp.merge_loop) {
                    (&mut main, main_loop_guard(l, &c.state), &mut shapes.0)
                } else if is(&c, &mp.tail_first) {
                    (&mut tail1, tail_guard(true, l, &c.state), &mut shapes.1)
                } else {
                    (&mut tail2, tail_guard(false, l, &c.state), &mut shapes.2)
                };
                tally.record(&guard, constrained, &c);
                slot.get_or_insert(guard);
            }
        }
    }
    main.assert_covers(&shapes.0.unwrap());
    tail1.assert_covers(&shapes.1.unwrap());
    tail2.assert_covers(&shapes.2.unwrap());
    call.assert_covers(&shapes.3.unwrap());
}

#[test]
fn factorial_spec_guards() {
    let spec = FacSpec::default();
    let at = |stmt, m: i64| spec.at(&Param::Unit, &WhileConfig::new(stmt, WhileState::new().with("m", m).with("fac", 2)));
    for stmt in [factorial_program(), factorial_loop()] {
        assert!(!at(stmt.clone(), 1).is_universe());
        assert!(at(stmt.clone(), 0).is_universe());
        assert!(at(stmt, -2).is_universe());
    }
}

#[test]
fn list_merge_spec_guards() {
    let spec = MglistSpec::default();
    let at = |e| spec.at(&Param::Unit, &e).is_universe();
    let (sorted, unsorted) = (Canonical::list(&[1, 2]), Canonical::list(&[2, 1]));
    let booleans = as_canonical(&parse_expr("true :: nil").unwrap()).unwrap();
    for make in [merge_expr, merge_unfolded] {
        assert!(!at(make(&sorted, &sorted)));
        assert!(at(make(&unsorted, &sorted)));
        assert!(at(make(&sorted, &unsorted)));
        assert!(at(make(&booleans, &sorted)));
        assert!(at(make(&Canonical::Int(3), &sorted)));
    }
    assert!(at(Arc::new(parse_expr("(λx. λy. x) (1 :: nil) nil").unwrap())));
}
