//! Exact algebra and incidence geometry for unitals in regular nearfield
//! planes.
//!
//! Everything here is a pure function of immutable tables, so the crate is
//! `no_std` (it needs `alloc`). File formats, the table cache, reports and the
//! command line live in the `unital-forge` companion crate.
//!
//! Arithmetic starts in [`gf`] (discrete-log tables for GF(p^n)) and
//! [`nearfield`] (Dickson's N(n, q) and its multiplicative subgroups).
//! [`plane`] builds the projective plane over a nearfield, and
//! [`collineation`] covers Andre's φ/γ maps, group closure and stabilizers.
//! Point sets, design checks and the stabilizer structure report are in
//! [`unital`]; O'Nan configurations are in [`onan`]; the all-ones
//! polynomial h_k is in [`polyfn`]. Every exhaustive loop goes through an
//! [`exec::Executor`].

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod collineation;
pub mod exec;
pub mod gf;
pub mod nearfield;
pub mod onan;
pub mod plane;
pub mod polyfn;
pub mod unital;

pub mod arith;

pub use collineation::{Collineation, CollineationGroup, Kind};
pub use exec::{Executor, Serial};
pub use gf::{Constants, Elem, Field, GfError};
pub use nearfield::{Nearfield, NearfieldError};
pub use plane::{Line, LineId, Plane, Point, PointId};
pub use unital::PointSet;

