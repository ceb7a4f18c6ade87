use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::algebra::{element, elems, occ, preserved, sep, sorted, ArrayFragment, Item};
use crate::kernel::{Constrained, Param, SampleBudget, SpecSet, Specification};
use crate::lang::extwhile::{aeval, merge_program, AExp, ExtConfig, ExtLang, ExtState, Stmt};

/// Contracts for the array-merging function and its three loops, with the
/// start index `l` of the merged fragments as global parameter.
#[derive(Debug, Clone)]
pub struct MsortSpec {
    /// Omit sortedness of the filled target prefix from the main loop's postcondition.
    pub mutant: bool,
    pub params: Vec<i64>,
}

impl Default for MsortSpec {
    fn default() -> Self {
        MsortSpec {
            mutant: false,
            params: vec![0, 1, 2],
        }
    }
}

impl MsortSpec {
    pub fn mutant() -> Self {
        MsortSpec {
            mutant: true,
            ..Self::default()
        }
    }

    pub fn with_params(self, params: Vec<i64>) -> Self {
        MsortSpec { params, ..self }
    }
}

fn frag(x: &str, low: i64, high: i64) -> ArrayFragment {
    ArrayFragment::new(x, low, high)
}

fn sorted_frag(x: &str, low: i64, high: i64, st: &ExtState) -> bool {
    elems(&frag(x, low, high), st).is_some_and(|v| sorted(&v))
}

fn write(mut st: ExtState, base: i64, values: &[i64]) -> ExtState {
    for (off, v) in values.iter().enumerate() {
        st = st.with_loc(base + off as i64, *v);
    }
    st
}

fn scramble(st: ExtState, base: i64, len: i64, rng: &mut impl Rng) -> ExtState {
    let values: Vec<i64> = (0..len).map(|_| rng.gen_range(-9..=9)).collect();
    write(st, base, &values)
}

/// Keeps the sampler's candidates that pass `contains`, at most `max_samples`.
fn keep(candidates: Vec<ExtState>, contains: &dyn Fn(&ExtState) -> bool, max: usize) -> Vec<ExtState> {
    let mut out: Vec<ExtState> = Vec::new();
    for c in candidates {
        if out.len() >= max.max(1) {
            break;
        }
        if contains(&c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
struct LoopVars {
    l: i64,
    i: i64,
    j: i64,
    k: i64,
    m: i64,
    n: i64,
}

impl LoopVars {
    fn read(l: i64, st: &ExtState) -> Option<Self> {
        Some(LoopVars {
            l,
            i: st.get("i")?,
            j: st.get("j")?,
            k: st.get("k")?,
            m: st.get("m")?,
            n: st.get("n")?,
        })
    }

    fn sources_separate(&self, st: &ExtState) -> bool {
        sep(&frag("S", self.l, self.n), &frag("T", self.l, self.n), st)
    }
}

fn reads_after(st: &ExtState) -> Option<(i64, i64, i64)> {
    Some((st.get("i")?, st.get("j")?, st.get("k")?))
}

impl MsortSpec {
    fn call_entry(&self, l: i64, config: &ExtConfig) -> SpecSet<ExtState> {
        let Stmt::Call { fun, args, receivers } = &*config.stmt else {
            return SpecSet::Universe;
        };
        if fun != "merge" || args.len() != 5 || !receivers.is_empty() {
            return SpecSet::Universe;
        }
        let (AExp::Name(x), AExp::Name(y)) = (&args[0], &args[1]) else {
            return SpecSet::Universe;
        };
        let st = &config.state;
        let vals: Option<Vec<i64>> = args[2..].iter().map(|a| aeval(a, st)).collect();
        let Some(&[lv, m, h]) = vals.as_deref() else {
            return SpecSet::Universe;
        };
        let pre = lv == l
            && 0 <= l
            && l <= m
            && m < h
            && sorted_frag(x, l, m, st)
            && sorted_frag(x, m + 1, h, st)
            && sep(&frag(x, l, h), &frag(y, l, h), st);
        if !pre {
            return SpecSet::Universe;
        }
        let source = elems(&frag(x, l, h), st).expect("separation implies declared");
        let want = occ(&source);
        let target = frag(y, l, h);
        let contains = {
            let target = target.clone();
            move |r: &ExtState| elems(&target, r).is_some_and(|t| sorted(&t) && occ(&t) == want)
        };
        let describe = format!("{y}[{l}..{h}] sorted with the occurrences of {x}[{l}..{h}]");
        let (x, pre_state) = (x.clone(), st.clone());
        let check = contains.clone();
        let sample = move |budget: &SampleBudget| {
            let mut rng = budget.rng_for(&("msort-call", pre_state.to_string()));
            let mut merged = source.clone();
            merged.sort();
            let ybase = pre_state.get(&target.array).expect("declared");
            let xbase = pre_state.get(&x).expect("declared");
            let natural = write(pre_state.clone(), ybase + l, &merged);
            let mut candidates = vec![natural.clone()];
            for _ in 1..budget.max_samples {
                candidates.push(scramble(natural.clone(), xbase + l, h - l + 1, &mut rng));
            }
            keep(candidates, &check, budget.max_samples)
        };
        SpecSet::Constrained(Constrained::new(
            describe,
            contains,
            sample,
        ))
    }

    fn merge_loop_entry(&self, l: i64, st: &ExtState) -> SpecSet<ExtState> {
        let Some(v) = LoopVars::read(l, st) else {
            return SpecSet::Universe;
        };
        let LoopVars { i, j, k, m, n, .. } = v;
        let boundary = k < l + 1 || {
            let last = element(st, "T", k - 1);
            element(st, "S", i) >= last && element(st, "S", j) >= last
        };
        let pre = 0 <= l
            && l <= i
            && i <= m
            && m < j
            && j <= n
            && k == i + j - m - 1
            && boundary
            && sorted_frag("S", i, m, st)
            && sorted_frag("S", j, n, st)
            && sorted_frag("T", l, k - 1, st)
            && v.sources_separate(st);
        if !pre {
            return SpecSet::Universe;
        }
        let mutant = self.mutant;
        let pre_state = st.clone();
        let contains = move |r: &ExtState| {
            let Some((i2, j2, k2)) = reads_after(r) else {
                return false;
            };
            let range = (i <= i2 && i2 == m + 1 && j <= j2 && j2 <= n)
                || (j <= j2 && j2 == n + 1 && i <= i2 && i2 <= m);
            if !range || k2 != k + i2 - i + j2 - j {
                return false;
            }
            let kept = [
                Item::var("m"),
                Item::var("n"),
                Item::var("S"),
                Item::var("T"),
                Item::frag("S", l, n),
                Item::frag("T", l, k - 1),
            ];
            if !preserved(&pre_state, r, &kept) {
                return false;
            }
            let scanned = match (
                elems(&frag("S", i, i2 - 1), &pre_state),
                elems(&frag("S", j, j2 - 1), &pre_state),
                elems(&frag("T", k, k2 - 1), r),
            ) {
                (Some(a), Some(b), Some(t)) => &occ(&a) + &occ(&b) == occ(&t),
                _ => false,
            };
            let last = element(r, "T", k2 - 1);
            scanned
                && (mutant || sorted_frag("T", l, k2 - 1, r))
                && (!(i2 <= m && k2 > l) || element(r, "S", i2) >= last)
                && (!(j2 <= n && k2 > l) || element(r, "S", j2) >= last)
        };
        let check = contains.clone();
        let pre_state = st.clone();
        let sample = move |budget: &SampleBudget| {
            let mut rng = budget.rng_for(&("msort-loop", mutant, pre_state.to_string()));
            let s = |idx: i64| element(&pre_state, "S", idx).expect("declared");
            let tbase = pre_state.get("T").expect("declared");
            // Where the loop itself stops.
            let (mut a, mut b) = (i, j);
            while a <= m && b <= n {
                if s(a) <= s(b) {
                    a += 1;
                } else {
                    b += 1;
                }
            }
            let mut ends = vec![(a, b)];
            let mut others: Vec<(i64, i64)> = (j..=n)
                .map(|b| (m + 1, b))
                .chain((i..=m).map(|a| (a, n + 1)))
                .filter(|p| *p != (a, b))
                .collect();
            others.shuffle(&mut rng);
            ends.extend(others);
            let build = |(i2, j2): (i64, i64), arrange: &dyn Fn(Vec<i64>) -> Vec<i64>| {
                let mut written: Vec<i64> = (i..i2).chain(j..j2).map(s).collect();
                written.sort();
                let k2 = k + i2 - i + j2 - j;
                let st = pre_state.clone().with_name("i", i2).with_name("j", j2).with_name("k", k2);
                (write(st, tbase + k, &arrange(written)), k2)
            };
            let mut candidates = Vec::new();
            if mutant {
                // Unsorted but ending in the maximum, so the boundary conjuncts still hold.
                let descending_then_max = |w: Vec<i64>| {
                    let Some((&max, rest)) = w.split_last() else { return w };
                    let mut v: Vec<i64> = rest.iter().rev().copied().collect();
                    v.push(max);
                    v
                };
                candidates.push(build(ends[0], &descending_then_max).0);
            }
            for (idx, end) in ends.into_iter().enumerate() {
                let (st, k2) = build(end, &|w| w);
                if idx > 0 && k2 <= n {
                    let st = scramble(st, tbase + k2, n - k2 + 1, &mut rng);
                    candidates.push(st);
                } else {
                    candidates.push(st);
                }
            }
            keep(candidates, &check, budget.max_samples)
        };
        let what = if self.mutant { "mutated main-loop contract" } else { "main-loop contract" };
        SpecSet::Constrained(Constrained::new(
            format!("{what} (l={l}, i={i}, j={j}, k={k}, m={m}, n={n})"),
            contains,
            sample,
        ))
    }

    /// One of the two loops copying what is left of a source fragment.
    fn tail_entry(&self, l: i64, st: &ExtState, first: bool) -> SpecSet<ExtState> {
        let Some(v) = LoopVars::read(l, st) else {
            return SpecSet::Universe;
        };
        let LoopVars { i, j, k, m, n, .. } = v;
        let shape = if first {
            0 <= l && l <= i && i <= m && m < n && j == n + 1
        } else {
            0 <= l && l <= m && m < j && j <= n && i == m + 1
        };
        if !(shape && k == i + j - m - 1 && v.sources_separate(st)) {
            return SpecSet::Universe;
        }
        // (index variable, its start, its final value)
        let (var, from, to) = if first { ("i", i, m + 1) } else { ("j", j, n + 1) };
        let pre_state = st.clone();
        let contains = move |r: &ExtState| {
            let Some((i2, j2, k2)) = reads_after(r) else {
                return false;
            };
            let (moved, fixed_ok) = if first { (i2, j2 == j) } else { (j2, i2 == i) };
            let kept = [Item::var("m"), Item::var("n"), Item::var("T"), Item::frag("T", l, k - 1)];
            moved >= from
                && moved == to
                && fixed_ok
                && k2 == k + moved - from
                && preserved(&pre_state, r, &kept)
                && matches!(
                    (elems(&frag("S", from, moved - 1), &pre_state), elems(&frag("T", k, k2 - 1), r)),
                    (Some(a), Some(b)) if a == b
                )
        };
        let check = contains.clone();
        let pre_state = st.clone();
        let sample = move |budget: &SampleBudget| {
            let mut rng = budget.rng_for(&("msort-tail", first, pre_state.to_string()));
            let copied = elems(&frag("S", from, to - 1), &pre_state).expect("declared");
            let k2 = k + to - from;
            let tbase = pre_state.get("T").expect("declared");
            let sbase = pre_state.get("S").expect("declared");
            let natural = write(pre_state.clone().with_name(var, to).with_name("k", k2), tbase + k, &copied);
            let mut candidates = vec![natural.clone()];
            for _ in 1..budget.max_samples {
                // The source array is not mentioned by this contract.
                candidates.push(scramble(natural.clone(), sbase + l, n - l + 1, &mut rng));
            }
            keep(candidates, &check, budget.max_samples)
        };
        SpecSet::Constrained(Constrained::new(
            format!("copy S[{from}..{}] to T[{k}..{}]", to - 1, k + to - from - 1),
            contains,
            sample,
        ))
    }
}

impl Specification<ExtLang> for MsortSpec {
    fn name(&self) -> String {
        if self.mutant { "msort-mutant" } else { "msort" }.into()
    }

    fn params(&self) -> Vec<Param> {
        self.params.iter().map(|l| Param::Int(*l)).collect()
    }

    fn at(&self, param: &Param, config: &ExtConfig) -> SpecSet<ExtState> {
        let Param::Int(l) = *param else {
            return SpecSet::Universe;
        };
        let mp = merge_program();
        let same_program = Arc::ptr_eq(&config.program, &mp.program)
            || config.program.get("merge") == mp.program.get("merge");
        if !same_program {
            return SpecSet::Universe;
        }
        let is = |s: &Arc<Stmt>| Arc::ptr_eq(&config.stmt, s) || config.stmt == *s;
        if matches!(&*config.stmt, Stmt::Call { .. }) {
            self.call_entry(l, config)
        } else if is(&mp.merge_loop) {
            self.merge_loop_entry(l, &config.state)
        } else if is(&mp.tail_first) {
            self.tail_entry(l, &config.state, true)
        } else if is(&mp.tail_second) {
            self.tail_entry(l, &config.state, false)
        } else {
            SpecSet::Universe
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::extwhile::parse_state;
    use crate::kernel::Language;

    fn lang() -> ExtLang {
        ExtLang::new(Arc::clone(&merge_program().program))
    }

    fn call(state: &str) -> ExtConfig {
        lang().parse_config(&format!("call merge(S, T, 0, 1, 2) | {state}")).unwrap()
    }

    #[test]
    fn call_entry_accepts_merged_target() {
        let c = call("S = [1, 3, 2], T = [0, 0, 0]");
        let set = MsortSpec::default().at(&Param::Int(0), &c);
        let good = c.state.clone().with_loc(3, 1).with_loc(4, 2).with_loc(5, 3);
        assert!(set.contains(&good));
        assert!(!set.contains(&c.state.clone().with_loc(3, 3).with_loc(4, 2).with_loc(5, 1)));
        assert!(MsortSpec::default().at(&Param::Int(1), &c).is_universe());
    }

    #[test]
    fn call_entry_requires_sorted_halves() {
        assert!(MsortSpec::default().at(&Param::Int(0), &call("S = [3, 1, 2], T = [0, 0, 0]")).is_universe());
    }

    #[test]
    fn merge_loop_fixes_the_target_index() {
        let mp = merge_program();
        let st = parse_state("S = [1, 3, 2], T = [0, 0, 0], i = 0, j = 2, k = 0, m = 1, n = 2").unwrap();
        let c = ExtConfig::new(Arc::clone(&mp.merge_loop), st.clone(), Arc::clone(&mp.program));
        let set = MsortSpec::default().at(&Param::Int(0), &c);
        let post = st.with_name("i", 1).with_name("j", 3).with_name("k", 2).with_loc(3, 1).with_loc(4, 2);
        assert!(set.contains(&post));
        assert!(!set.contains(&post.clone().with_name("k", 3)));
    }

    #[test]
    fn overlapping_fragments_are_unconstrained() {
        let mp = merge_program();
        let st = parse_state("S = 0, T = 1, i = 0, j = 2, k = 0, m = 1, n = 2; mem 0:1, 1:3, 2:2; next 4").unwrap();
        let c = ExtConfig::new(Arc::clone(&mp.merge_loop), st, Arc::clone(&mp.program));
        assert!(MsortSpec::default().at(&Param::Int(0), &c).is_universe());
    }
}
