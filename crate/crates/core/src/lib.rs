//! Root systems on graphs: realization axioms, reduced-word combinatorics,
//! and dual fans for Matsumoto graphs.
//!
//! A Matsumoto graph is a connected graph whose edges carry rays in a real
//! vector space subject to four local axioms; crossing a compact edge
//! exchanges exactly one pair of opposite rays, while infinite edges carry
//! rays with no opposite. The crate builds such graphs from Coxeter and
//! Cartan data, checks the axioms with explicit witnesses, rewrites
//! shortest paths into each other through rank-2 cells, transports edge
//! colorings, and reconstructs graphs from their dual chamber fans.
//!
//! Everything is generic over a [`scalar::Scalar`] backend: exact rational
//! arithmetic for crystallographic data, floating point with a global
//! tolerance otherwise. The crate is `no_std` (with `alloc`); IO and file
//! formats live in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod braid;
pub mod coloring;
pub mod dual;
pub mod error;
pub mod generators;
pub mod graph;
pub mod iso;
pub mod scalar;

pub use error::{Error, Result};
pub use graph::{MGraph, Path, Report, RootId, SlotTarget, VertexId};
pub use scalar::{set_tolerance, tolerance, Ray, Scalar};
