#![no_std]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod arith;
pub mod error;
pub mod hyperboloid;
pub mod lll;
pub mod quadform;
pub mod search;
pub mod signrev;
pub mod svp;

pub use error::{Error, Result};
