#![no_std]

extern crate alloc;

pub mod arith;
pub mod classno;
pub mod cycring;
pub mod detkit;
pub mod error;
pub mod matrices;
pub mod subfield;
pub mod verify;

pub use cycring::{CycElt, ComplexApprox};
pub use error::{Error, Result};
