use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::ast::{AExp, AOp, BExp, COp};

/// Names map to optional integers (absent = undefined); locations map to
/// integers with default 0. Zero-valued locations are never stored, so
/// structural equality is extensional.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Store {
    names: BTreeMap<String, i64>,
    mem: BTreeMap<i64, i64>,
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn name(&self, x: &str) -> Option<i64> {
        self.names.get(x).copied()
    }

    pub fn load(&self, loc: i64) -> i64 {
        self.mem.get(&loc).copied().unwrap_or(0)
    }

    pub fn set_name(&mut self, x: &str, v: Option<i64>) {
        match v {
            Some(v) => self.names.insert(x.to_string(), v),
            None => self.names.remove(x),
        };
    }

    pub fn store(&mut self, loc: i64, v: i64) {
        if v == 0 {
            self.mem.remove(&loc);
        } else {
            self.mem.insert(loc, v);
        }
    }

    pub fn names(&self) -> impl Iterator<Item = (&String, &i64)> {
        self.names.iter()
    }

    /// Non-zero locations.
    pub fn memory(&self) -> impl Iterator<Item = (&i64, &i64)> {
        self.mem.iter()
    }

    fn with_names(&self, names: BTreeMap<String, i64>) -> Store {
        Store {
            names,
            mem: self.mem.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ExtState {
    pub store: Store,
    /// Next fresh location for arrays.
    pub nextloc: i64,
}

impl ExtState {
    pub fn new(store: Store, nextloc: i64) -> Self {
        ExtState { store, nextloc }
    }

    pub fn get(&self, x: &str) -> Option<i64> {
        self.store.name(x)
    }

    pub fn load(&self, loc: i64) -> i64 {
        self.store.load(loc)
    }

    pub fn with_name(mut self, x: &str, v: i64) -> Self {
        self.store.set_name(x, Some(v));
        self
    }

    pub fn with_loc(mut self, loc: i64, v: i64) -> Self {
        self.store.store(loc, v);
        self
    }

    /// Declares `x` as an array with `contents`, at the next fresh location.
    pub fn alloc(mut self, x: &str, contents: &[i64]) -> Self {
        let base = self.nextloc;
        self.store.set_name(x, Some(base));
        for (i, v) in contents.iter().enumerate() {
            self.store.store(base + i as i64, *v);
        }
        self.nextloc += contents.len() as i64;
        self
    }
}

impl fmt::Display for ExtState {
    /// `x=1, S=0; mem 0:4, 1:5; next 2`, which [`super::parse_state`] reads back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.store.names().map(|(k, v)| format!("{k}={v}")).collect();
        let mem: Vec<String> = self.store.memory().map(|(k, v)| format!("{k}:{v}")).collect();
        write!(f, "{}", names.join(", "))?;
        if !names.is_empty() {
            write!(f, "; ")?;
        }
        if !mem.is_empty() {
            write!(f, "mem {}; ", mem.join(", "))?;
        }
        write!(f, "next {}", self.nextloc)
    }
}

pub fn aeval(a: &AExp, st: &ExtState) -> Option<i64> {
    match a {
        AExp::Num(n) => Some(*n),
        AExp::Name(x) => st.get(x),
        AExp::Index(x, i) => {
            let base = st.get(x)?;
            let i = aeval(i, st)?;
            let loc = base.checked_add(i)?;
            (i >= 0 && loc < st.nextloc).then(|| st.load(loc))
        }
        AExp::Bin(op, a, b) => {
            let (a, b) = (aeval(a, st)?, aeval(b, st)?);
            match op {
                AOp::Add => a.checked_add(b),
                AOp::Sub => a.checked_sub(b),
                AOp::Mul => a.checked_mul(b),
                AOp::Div => a.checked_div(b),
            }
        }
    }
}

pub fn beval(b: &BExp, st: &ExtState) -> Option<bool> {
    match b {
        BExp::True => Some(true),
        BExp::False => Some(false),
        BExp::Cmp(op, a1, a2) => {
            let (x, y) = (aeval(a1, st)?, aeval(a2, st)?);
            Some(match op {
                COp::Eq => x == y,
                COp::Lt => x < y,
            })
        }
        // True only when both sides are true; undefined sides count as false.
        BExp::And(b1, b2) => Some(beval(b1, st) == Some(true) && beval(b2, st) == Some(true)),
        BExp::Not(b) => beval(b, st).map(|v| !v),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArityError {
    #[error("{expected} parameters but {found} arguments")]
    Arguments { expected: usize, found: usize },
    #[error("{expected} return variables but {found} receivers")]
    Returns { expected: usize, found: usize },
}

/// The callee's initial store: parameters bound to the argument values,
/// return variables to 0, every other name undefined, locations kept.
pub fn call_ini(
    store: &Store,
    params: &[String],
    vals: &[i64],
    returns: &[String],
) -> Result<Store, ArityError> {
    if params.len() != vals.len() {
        return Err(ArityError::Arguments {
            expected: params.len(),
            found: vals.len(),
        });
    }
    let mut names = BTreeMap::new();
    for r in returns {
        names.insert(r.clone(), 0);
    }
    // A name that is both a parameter and a return variable takes the argument.
    for (p, v) in params.iter().zip(vals).rev() {
        names.insert(p.clone(), *v);
    }
    Ok(store.with_names(names))
}

/// The caller's store after a call: receivers take the callee's return
/// values, other names come from before the call, locations from after it.
pub fn call_fin(
    before: &Store,
    after: &Store,
    returns: &[String],
    receivers: &[String],
) -> Result<Store, ArityError> {
    if returns.len() != receivers.len() {
        return Err(ArityError::Returns {
            expected: returns.len(),
            found: receivers.len(),
        });
    }
    let mut names = before.names.clone();
    let mut assigned = Vec::new();
    for (r, y) in returns.iter().zip(receivers) {
        if assigned.contains(&y) {
            continue;
        }
        assigned.push(y);
        match after.name(r) {
            Some(v) => names.insert(y.clone(), v),
            None => names.remove(y),
        };
    }
    Ok(after.with_names(names))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::extwhile::parse::{parse_aexp, parse_bexp};

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn undeclared_array_is_undefined() {
        assert_eq!(aeval(&parse_aexp("X").unwrap(), &ExtState::default()), None);
    }

    #[test]
    fn indexed_read_within_bounds() {
        let st = ExtState::new(Store::new(), 105)
            .with_name("X", 100)
            .with_name("i", 2)
            .with_loc(102, 42);
        assert_eq!(aeval(&parse_aexp("X[i]").unwrap(), &st), Some(42));
    }

    #[test]
    fn indexed_read_rejects_negative_and_out_of_bounds() {
        let st = ExtState::new(Store::new(), 105).with_name("X", 100);
        assert_eq!(aeval(&parse_aexp("X[-1]").unwrap(), &st), None);
        assert_eq!(aeval(&parse_aexp("X[5]").unwrap(), &st), None);
        assert_eq!(aeval(&parse_aexp("X[4]").unwrap(), &st), Some(0));
    }

    #[test]
    fn arithmetic_is_strict_and_checked() {
        let st = ExtState::default().with_name("x", 7);
        assert_eq!(aeval(&parse_aexp("x / 2").unwrap(), &st), Some(3));
        assert_eq!(aeval(&parse_aexp("-7 / 2").unwrap(), &st), Some(-3));
        assert_eq!(aeval(&parse_aexp("x / 0").unwrap(), &st), None);
        assert_eq!(aeval(&parse_aexp("x + y").unwrap(), &st), None);
        let big = ExtState::default().with_name("x", i64::MAX);
        assert_eq!(aeval(&parse_aexp("x + 1").unwrap(), &big), None);
    }

    #[test]
    fn boolean_evaluation() {
        let st = ExtState::default().with_name("i", 2).with_name("m", 5);
        assert_eq!(beval(&BExp::True, &st), Some(true));
        assert_eq!(beval(&parse_bexp("i <= m").unwrap(), &st), Some(true));
        assert_eq!(beval(&parse_bexp("X[0] < 1").unwrap(), &st), None);
        assert_eq!(beval(&parse_bexp("not X[0] < 1").unwrap(), &st), None);
        assert_eq!(beval(&parse_bexp("X[0] < 1 and true").unwrap(), &st), Some(false));
    }

    #[test]
    fn call_ini_binds_parameters() {
        let store = ExtState::default()
            .with_name("z", 9)
            .with_loc(100, 5)
            .store;
        let ini = call_ini(&store, &names(&["X", "i"]), &[100, 2], &[]).unwrap();
        assert_eq!(ini.name("X"), Some(100));
        assert_eq!(ini.name("i"), Some(2));
        assert_eq!(ini.name("z"), None);
        assert_eq!(ini.load(100), 5);
    }

    #[test]
    fn call_ini_zeroes_return_variables() {
        let ini = call_ini(&Store::new(), &[], &[], &names(&["r"])).unwrap();
        assert_eq!(ini.name("r"), Some(0));
    }

    #[test]
    fn call_ini_without_names_keeps_only_memory() {
        let store = ExtState::default().with_name("a", 1).with_loc(3, 4).store;
        let ini = call_ini(&store, &[], &[], &[]).unwrap();
        assert_eq!(ini.names().count(), 0);
        assert_eq!(ini.load(3), 4);
    }

    #[test]
    fn call_ini_rejects_arity_mismatch() {
        assert!(call_ini(&Store::new(), &names(&["x"]), &[], &[]).is_err());
    }

    #[test]
    fn call_fin_copies_return_values() {
        let before = ExtState::default().with_name("y", 1).with_name("q", 4).store;
        let after = ExtState::default().with_name("r", 7).store;
        let fin = call_fin(&before, &after, &names(&["r"]), &names(&["y"])).unwrap();
        assert_eq!(fin.name("y"), Some(7));
        assert_eq!(fin.name("q"), Some(4));
        assert_eq!(fin.name("r"), None);
    }

    #[test]
    fn call_fin_keeps_callee_memory_effects() {
        let before = ExtState::default().with_loc(100, 1).store;
        let after = ExtState::default().with_loc(100, 8).store;
        let fin = call_fin(&before, &after, &[], &[]).unwrap();
        assert_eq!(fin.load(100), 8);
    }

    #[test]
    fn call_fin_without_returns_mixes_stores() {
        let before = ExtState::default().with_name("a", 1).with_loc(0, 1).store;
        let after = ExtState::default().with_name("b", 2).with_loc(1, 3).store;
        let fin = call_fin(&before, &after, &[], &[]).unwrap();
        assert_eq!(fin.name("a"), Some(1));
        assert_eq!(fin.name("b"), None);
        assert_eq!((fin.load(0), fin.load(1)), (0, 3));
        assert!(call_fin(&before, &after, &names(&["r"]), &[]).is_err());
    }
}
