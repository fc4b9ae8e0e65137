#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod backlund;
pub mod dd;
pub mod diffpoly;
pub mod error;
pub mod families;
pub mod jet;
pub mod lattice;
pub mod numerics;
pub mod output;
pub mod verify;

pub use error::{Error, Result};
