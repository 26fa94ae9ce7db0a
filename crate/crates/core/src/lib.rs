//! Finite-resolution laboratory for the continuous-extension problem on compact
//! metric spaces.
//!
//! Spaces are represented by dyadic ε-nets carrying exact structural annotations
//! (path components, clopen atoms, retraction data). Maps are sampled on nets and
//! carry a declared modulus of continuity. Extendibility of a map `φ: Z → X` over a
//! space pair `(Y, Z)` is established by certificates: an explicit extension, or one
//! of four obstruction schemas that are re-checked from the raw net data.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, rendering and the
//! command-line front end live in the `extenlab` crate.

#![no_std]

extern crate alloc;

pub mod certificates;
pub mod dyadic;
pub mod error;
pub mod maps;
pub mod metric;
pub mod num;
pub mod reproduce;
pub mod spaces;

pub use dyadic::Resolution;
pub use error::{Error, Result};
