//! Fibered semi-groups, fibered bimodules and the cylinder double functor of
//! a local theory on a finite cobordism model.
//!
//! Everything here is finite and exhaustively checkable. Sets are sorted
//! slices of [`Token`]s, maps are index tables, and every construction comes
//! with a validator that returns a [`Report`] of per-diagram records.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bimod;
pub mod ccob;
pub mod cyl;
pub mod error;
pub mod finset;
pub mod fsgrp;
pub mod report;
pub mod theory;
pub mod token;
pub mod universe;

pub use error::{Error, Result};
pub use finset::{FinMap, FinSet};
pub use fsgrp::{FiberedSemiGroup, FsgMorphism};
pub use report::{Record, Report};
pub use token::Token;
