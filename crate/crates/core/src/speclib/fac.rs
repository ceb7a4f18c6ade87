use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::Rng;

use crate::kernel::{Constrained, Param, SampleBudget, SpecSet, Specification};
use crate::lang::while_lang::{factorial_loop, factorial_program, WhileConfig, WhileLang, WhileState};

pub fn factorial(n: &BigInt) -> BigInt {
    let mut acc = BigInt::one();
    let mut i = BigInt::from(2);
    while &i <= n {
        acc *= &i;
        i += 1;
    }
    acc
}

/// Final value of `fac` for the factorial program and its loop.
#[derive(Debug, Clone, Copy, Default)]
pub struct FacSpec {
    /// Claim `m! + 1` for the whole program instead of `m!`.
    pub mutant: bool,
}

impl FacSpec {
    pub fn mutant() -> Self {
        FacSpec { mutant: true }
    }
}

/// States where `fac` holds `target`; everything else is free.
fn fac_is(describe: String, pre: WhileState, target: BigInt) -> SpecSet<WhileState> {
    let want = target.clone();
    SpecSet::Constrained(Constrained::new(
        describe,
        move |r: &WhileState| r.get("fac") == want,
        move |budget: &SampleBudget| {
            let mut rng = budget.rng_for(&("fac", pre.to_string(), target.to_string()));
            let others: Vec<String> = pre
                .entries()
                .map(|(k, _)| k.clone())
                .filter(|k| k != "fac" && k != "m")
                .collect();
            let base = pre.set("fac", target.clone());
            let mut out = vec![base.set("m", BigInt::one())];
            while out.len() < budget.max_samples {
                let mut s = base.set("m", BigInt::from(rng.gen_range(-3..=9)));
                if !others.is_empty() && rng.gen_bool(0.5) {
                    let x = &others[rng.gen_range(0..others.len())];
                    s = s.set(x, BigInt::from(rng.gen_range(-50..=50)));
                }
                out.push(s);
            }
            out.truncate(budget.max_samples.max(1));
            out
        },
    ))
}

impl Specification<WhileLang> for FacSpec {
    fn name(&self) -> String {
        if self.mutant { "fac-mutant" } else { "fac" }.into()
    }

    fn at(&self, _: &Param, config: &WhileConfig) -> SpecSet<WhileState> {
        let s = &config.state;
        let m = s.get("m");
        if !m.is_positive() {
            return SpecSet::Universe;
        }
        if Arc::ptr_eq(&config.stmt, &factorial_program()) || *config.stmt == *factorial_program() {
            let target = factorial(&m) + u32::from(self.mutant);
            return fac_is(format!("fac = {target}"), s.clone(), target);
        }
        if Arc::ptr_eq(&config.stmt, &factorial_loop()) || *config.stmt == *factorial_loop() {
            let fac = s.get("fac");
            let target = &fac * factorial(&(&m - 1));
            return fac_is(format!("fac = {fac}·({m}-1)! = {target}"), s.clone(), target);
        }
        SpecSet::Universe
    }
}
