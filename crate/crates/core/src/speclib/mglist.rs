use std::sync::Arc;

use super::algebra::{list_of_lstcfm, merge_lists, occ, sorted};
use crate::kernel::{Constrained, Param, SampleBudget, SpecSet, Specification};
use crate::lang::fun::{as_canonical, merge_templates, Canonical, Expr, FunLang};

/// Contract of the list-merging expression, stated both for the expression
/// itself and for the unfolded recursive function applied to two lists.
#[derive(Debug, Clone, Copy, Default)]
pub struct MglistSpec {
    /// Only require a sorted list of the right length.
    pub mutant: bool,
}

impl MglistSpec {
    pub fn mutant() -> Self {
        MglistSpec { mutant: true }
    }
}

fn sorted_list(e: &Arc<Expr>) -> Option<Vec<i64>> {
    as_canonical(e).and_then(|c| list_of_lstcfm(&c)).filter(|l| sorted(l))
}

/// The two list arguments, if `e` is the merge expression or the unfolded
/// function applied to canonical sorted lists.
pub fn merge_arguments(e: &Arc<Expr>) -> Option<(Vec<i64>, Vec<i64>)> {
    let t = merge_templates();
    let args = |body: &Arc<Expr>, head: &dyn Fn(&Arc<Expr>) -> bool| match &**body {
        Expr::App(f, b) => match &**f {
            Expr::App(h, a) if head(h) => Some((sorted_list(a)?, sorted_list(b)?)),
            _ => None,
        },
        _ => None,
    };
    match (&**e, &*t.letrec) {
        (
            Expr::LetRec { f, x, bound, body },
            Expr::LetRec {
                f: tf,
                x: tx,
                bound: tb,
                ..
            },
        ) => {
            if f != tf || x != tx || !(Arc::ptr_eq(bound, tb) || bound == tb) {
                return None;
            }
            args(body, &|h| matches!(&**h, Expr::Var(v) if v == f))
        }
        (Expr::App(..), _) => args(e, &|h| Arc::ptr_eq(h, &t.unfolded) || *h == t.unfolded),
        _ => None,
    }
}

impl Specification<FunLang> for MglistSpec {
    fn name(&self) -> String {
        if self.mutant { "mglist-mutant" } else { "mglist" }.into()
    }

    fn at(&self, _: &Param, config: &Arc<Expr>) -> SpecSet<Canonical> {
        let Some((l1, l2)) = merge_arguments(config) else {
            return SpecSet::Universe;
        };
        let merged = merge_lists(&l1, &l2);
        let mutant = self.mutant;
        let want = occ(&merged);
        let len = merged.len();
        let contains = move |r: &Canonical| {
            list_of_lstcfm(r).is_some_and(|l| {
                sorted(&l) && if mutant { l.len() == len } else { occ(&l) == want }
            })
        };
        let sample = move |budget: &SampleBudget| {
            let mut out = Vec::new();
            if mutant {
                // Right length, sorted, wrong elements.
                let low = merged.first().map_or(0, |v| v - 1);
                out.push(Canonical::list(&vec![low; len]));
            }
            out.push(Canonical::list(&merged));
            out.dedup();
            out.truncate(budget.max_samples.max(1));
            out
        };
        let describe = if mutant {
            format!("sorted lists of length {len}")
        } else {
            format!("the sorted merge of {l1:?} and {l2:?}")
        };
        SpecSet::Constrained(Constrained::new(describe, contains, sample))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::fun::{merge_expr, merge_unfolded, parse_expr};

    fn list(v: &[i64]) -> Canonical {
        Canonical::list(v)
    }

    #[test]
    fn merge_expression_entry() {
        let set = MglistSpec::default().at(&Param::Unit, &merge_expr(&list(&[1]), &list(&[2])));
        assert!(set.contains(&list(&[1, 2])));
        assert!(!set.contains(&list(&[2, 1])));
        assert!(!set.contains(&list(&[1, 1])));
    }

    #[test]
    fn unfolded_entry() {
        let set = MglistSpec::default().at(&Param::Unit, &merge_unfolded(&list(&[1, 3]), &list(&[2])));
        assert!(set.contains(&list(&[1, 2, 3])));
    }

    #[test]
    fn other_shapes_are_unconstrained() {
        let spec = MglistSpec::default();
        assert!(spec.at(&Param::Unit, &Arc::new(parse_expr("λy. y").unwrap())).is_universe());
        assert!(spec.at(&Param::Unit, &merge_expr(&list(&[2, 1]), &list(&[]))).is_universe());
        assert!(spec.at(&Param::Unit, &merge_expr(&Canonical::Int(1), &list(&[]))).is_universe());
    }

    #[test]
    fn mutant_only_checks_length() {
        let set = MglistSpec::mutant().at(&Param::Unit, &merge_expr(&list(&[1]), &list(&[2])));
        assert!(set.contains(&list(&[5, 5])));
        assert!(!set.contains(&list(&[1])));
    }
}
