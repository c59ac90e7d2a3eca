//! Exact arithmetic for quantum integers over commutative rings.
//!
//! The [`ring`] layer provides runtime rings with canonical normal forms;
//! [`qnum`], [`cyclotomic`], [`qrational`] and [`twisted`] build q-states,
//! q-binomials, cyclotomic factorizations, rational q-states and twisted
//! powers on top of it.

// dense matrix code reads better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod cyclotomic;
pub mod error;
pub mod parse;
pub mod qnum;
pub mod qrational;
pub mod ring;
pub mod twisted;
pub mod verify;

pub use error::{Error, Result};
pub use parse::{parse_elem, parse_ring};
pub use qnum::{FlatnessCertificate, QCharResult, QContext};
pub use ring::{Elem, Order, QPoly, Ring};
