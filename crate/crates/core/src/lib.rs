// Dense index loops over square matrices read better than iterator chains.
#![allow(clippy::needless_range_loop)]

pub mod bitset;
pub mod dynkin;
pub mod poset;
pub mod axioms;
pub mod heap_periodic;
pub mod weyl;
pub mod rep;
pub mod io;
pub mod cli;
