//! Construction, verification and symmetry analysis of biplanes, the
//! symmetric 2-(v,k,2) designs.
//!
//! Points and blocks are 0-based inside the library. Every external
//! representation (JSON files, cycle notation, CLI output) is 1-based.
//!
//! Module map:
//!
//! * [`design`] incidence structures, parameter arithmetic, duality, BRC.
//! * [`perm`] permutations, cycle types and Schreier–Sims groups.
//! * [`aut`] automorphism groups, canonical forms and isomorphism.
//! * [`diffset`] group tables, difference sets, developments, Lander's test.
//! * [`fixcert`] fixed-point certificates and the (121,16,2) tables.
//! * [`cartdecomp`] cartesian decompositions and the Pell arithmetic.
//! * [`catalog`] the known small biplanes.

pub mod arith;
pub mod aut;
pub mod cartdecomp;
pub mod catalog;
pub mod design;
pub mod diffset;
mod error;
pub mod fixcert;
pub mod io;
pub mod par;
pub mod perm;

pub use error::{Error, Result};

pub use aut::{are_isomorphic, automorphism_group, canonical_form, AutResult, CanonicalCertificate};
pub use design::{Design, DesignParams, VerifyReport};
pub use perm::{CycleType, Perm, PermGroup};
