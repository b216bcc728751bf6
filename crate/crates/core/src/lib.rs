#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod basis;
pub mod collocation;
pub mod conservation;
pub mod error;
mod numeric;
pub mod order;
pub mod spatial;
pub mod reference;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use order::FractionalOrder;
