//! Helper algebra for array and list specifications, and the bundled
//! specifications for the three example programs.

mod algebra;
mod fac;
mod mglist;
mod msort;

pub use algebra::{
    element, elems, list_of_lstcfm, merge_lists, occ, occ_add, preserved, sep, sorted, ArrayFragment, Item,
    OccMap,
};
pub use fac::{factorial, FacSpec};
pub use mglist::{merge_arguments, MglistSpec};
pub use msort::MsortSpec;
