//! Exact arithmetic for Drinfeld modules and abelian Anderson t-modules over
//! finite base rings: skew polynomial rings, the associated t-motives,
//! isogenies with their duals, torsion group schemes through the finite
//! shtuka correspondence, and truncated local shtukas.
//!
//! The coefficient ring A is always `F_q[t]`; base rings are finite fields
//! containing F_q or truncated algebras `k[eps]/(eps^N)` over them. All
//! computations are exact and deterministic.

pub mod codec;
pub mod error;
pub mod ext;
pub mod fppoly;
pub mod isogeny;
pub mod linalg;
pub mod local;
pub mod pmat;
pub mod poly;
pub mod ring;
pub mod selfcheck;
pub mod shtuka;
pub mod skew;
pub mod tmodule;
pub mod tmotive;

pub use error::{Error, Result};
pub use ring::{CoeffRing, RingElem, RingKind};
