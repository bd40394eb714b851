//! Exact symbolic calculus for Jacquet modules of induced representations of
//! p-adic symplectic groups.
//!
//! The calculus works in the Grothendieck rings R(GL) and R(Sp) with basis
//! elements indexed by multisets of Zelevinsky segments over formal
//! supercuspidal labels. It provides:
//!
//! - the comultiplication `m*` on R(GL) (Jacquet restriction to maximal Levi
//!   subgroups of the general linear groups), both as a fold over segment
//!   cuts and as a direct cut-vector enumeration used as its oracle;
//! - the twisted comultiplication `M* = (m (x) 1).(~ (x) m*).s.m*` and the
//!   coaction `mu*(pi |x sigma) = M*(pi) |x (1 (x) sigma)` computing Jacquet
//!   modules of induced classes `Z(D_1) x ... x Z(D_r) |x sigma`;
//! - multiplicity analysis with exhaustive desk-scale verification that the
//!   Jacquet-module multiplicity of admissible classes never exceeds 2, and
//!   that multiplicity 2 forces a self-dual GL factor;
//! - an expression grammar, deterministic rendering, and a JSON schema for
//!   all of the above.
//!
//! Everything is exact integer combinatorics; there is no floating point
//! anywhere.

pub mod analysis;
pub mod error;
pub mod expr;
pub mod hopf;
pub mod json;
pub mod model;
pub mod render;
pub mod segments;
pub mod sum;

pub use error::{Error, Result};
pub use expr::{parse_expression, Expr, SessionDeclarations};
pub use model::{GLClass, LabelId, Segment, SpClass, SpLabelId, Universe};
pub use sum::{FormalSum, GlPairSum, GlTripleSum, LeviSum};
