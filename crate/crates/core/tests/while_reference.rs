//! The While rules against a direct recursive interpreter.

use bigstep_core::corpus::{fac_corpus, random_while_configs, Loops};
use bigstep_core::kernel::{derive_all, derive_one, SampleBudget};
use bigstep_core::lang::while_lang::{AExp, BExp, Stmt, WhileLang, WhileState};
use num_bigint::BigInt;

fn a(e: &AExp, s: &WhileState) -> BigInt {
    match e {
        AExp::Num(n) => n.clone(),
        AExp::Var(x) => s.get(x),
        AExp::Add(x, y) => a(x, s) + a(y, s),
        AExp::Sub(x, y) => a(x, s) - a(y, s),
        AExp::Mul(x, y) => a(x, s) * a(y, s),
    }
}

fn b(e: &BExp, s: &WhileState) -> bool {
    match e {
        BExp::True => true,
        BExp::False => false,
        BExp::Eq(x, y) => a(x, s) == a(y, s),
        BExp::Lt(x, y) => a(x, s) < a(y, s),
        BExp::And(x, y) => b(x, s) && b(y, s),
        BExp::Not(x) => !b(x, s),
    }
}

/// `None` when more than `fuel` loop iterations run.
fn run(st: &Stmt, s: WhileState, fuel: &mut u32) -> Option<WhileState> {
    Some(match st {
        Stmt::Skip => s,
        Stmt::Assign(x, e) => {
            let v = a(e, &s);
            s.set(x, v)
        }
        Stmt::Seq(p, q) => {
            let s = run(p, s, fuel)?;
            run(q, s, fuel)?
        }
        Stmt::If(g, p, q) => run(if b(g, &s) { p } else { q }, s, fuel)?,
        Stmt::While(g, body) => {
            let mut s = s;
            while b(g, &s) {
                *fuel = fuel.checked_sub(1)?;
                s = run(body, s, fuel)?;
            }
            s
        }
    })
}

#[test]
fn random_programs_agree_with_reference() {
    let budget = SampleBudget::default();
    let mut compared = 0;
    for c in random_while_configs(500, 3, Loops::Allowed) {
        let all = derive_all(&WhileLang, &c, &budget);
        assert!(all.results.len() <= 1, "deterministic language: {c}");
        let mut fuel = 50;
        match run(&c.stmt, c.state.clone(), &mut fuel) {
            Some(expected) if !all.exhausted => {
                assert_eq!(all.results.first(), Some(&expected), "{c}");
                assert_eq!(derive_one(&WhileLang, &c, &budget).as_ref(), Some(&expected));
                compared += 1;
            }
            None => assert!(all.results.is_empty() && all.exhausted, "{c}"),
            _ => {}
        }
    }
    assert!(compared > 400, "only {compared} configurations compared");
}

#[test]
fn factorial_is_exact() {
    let budget = SampleBudget::default().with_depth(256);
    let mut expected = BigInt::from(1);
    for (m, c) in (1..=30).zip(fac_corpus(1..=30)) {
        expected *= m;
        let out = derive_one(&WhileLang, &c, &budget).unwrap();
        assert_eq!(out.get("fac"), expected, "m = {m}");
        assert_eq!(out.get("m"), BigInt::from(1));
    }
}

#[test]
fn factorial_of_five_prints() {
    let out = derive_one(&WhileLang, &fac_corpus([5])[0], &SampleBudget::default()).unwrap();
    assert_eq!(out.to_string(), "fac=120, m=1");
}
