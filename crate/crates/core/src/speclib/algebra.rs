use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use crate::lang::extwhile::ExtState;
use crate::lang::fun::Canonical;

/// Occurrence counts of integers in a list. Only positive counts are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OccMap(BTreeMap<i64, usize>);

impl OccMap {
    pub fn get(&self, i: i64) -> usize {
        self.0.get(&i).copied().unwrap_or(0)
    }

    /// Sum of all counts, i.e. the length of the counted list.
    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }
}

impl fmt::Display for OccMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(k, v)| format!("{k}↦{v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn occ(list: &[i64]) -> OccMap {
    let mut m = BTreeMap::new();
    for &i in list {
        *m.entry(i).or_insert(0) += 1;
    }
    OccMap(m)
}

/// Pointwise sum.
pub fn occ_add(a: &OccMap, b: &OccMap) -> OccMap {
    let mut m = a.0.clone();
    for (k, v) in &b.0 {
        *m.entry(*k).or_insert(0) += v;
    }
    OccMap(m)
}

impl Add for &OccMap {
    type Output = OccMap;
    fn add(self, rhs: &OccMap) -> OccMap {
        occ_add(self, rhs)
    }
}

/// Ascending, duplicates allowed.
pub fn sorted(list: &[i64]) -> bool {
    list.windows(2).all(|w| w[0] <= w[1])
}

/// The elements of array `array` from index `low` to `high`, inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrayFragment {
    pub array: String,
    pub low: i64,
    pub high: i64,
}

impl ArrayFragment {
    pub fn new(array: &str, low: i64, high: i64) -> Self {
        ArrayFragment {
            array: array.to_string(),
            low,
            high,
        }
    }

    pub fn len(&self) -> usize {
        (self.high - self.low + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Memory locations covered in `st`, or `None` when the array is undeclared.
    pub fn locations(&self, st: &ExtState) -> Option<std::ops::RangeInclusive<i64>> {
        let base = st.get(&self.array)?;
        Some(base + self.low..=base + self.high)
    }
}

impl fmt::Display for ArrayFragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}..{}]", self.array, self.low, self.high)
    }
}

pub fn elems(frag: &ArrayFragment, st: &ExtState) -> Option<Vec<i64>> {
    Some(frag.locations(st)?.map(|loc| st.load(loc)).collect())
}

/// `X[i]` read straight from memory (no bounds check).
pub fn element(st: &ExtState, array: &str, i: i64) -> Option<i64> {
    Some(st.load(st.get(array)? + i))
}

/// The two fragments occupy disjoint memory.
pub fn sep(a: &ArrayFragment, b: &ArrayFragment, st: &ExtState) -> bool {
    match (st.get(&a.array), st.get(&b.array)) {
        (Some(la), Some(lb)) => la + a.high < lb + b.low || lb + b.high < la + a.low,
        _ => false,
    }
}

/// A variable (or array identifier) or an array fragment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Item {
    Var(String),
    Frag(ArrayFragment),
}

impl Item {
    pub fn var(x: &str) -> Self {
        Item::Var(x.to_string())
    }

    pub fn frag(x: &str, low: i64, high: i64) -> Self {
        Item::Frag(ArrayFragment::new(x, low, high))
    }
}

/// Each item has the same value in both states. An array identifier compares
/// by base location; a fragment compares element by element, each state read
/// through its own base.
pub fn preserved(st: &ExtState, st2: &ExtState, items: &[Item]) -> bool {
    items.iter().all(|item| match item {
        Item::Var(x) => st.get(x) == st2.get(x),
        Item::Frag(f) if f.is_empty() => true,
        Item::Frag(f) => match (elems(f, st), elems(f, st2)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
    })
}

/// The integer list a canonical form represents.
pub fn list_of_lstcfm(c: &Canonical) -> Option<Vec<i64>> {
    c.int_list()
}

/// Stable merge of two lists, the reference the samplers build witnesses with.
pub fn merge_lists(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
