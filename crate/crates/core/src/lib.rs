//! Twisted forms of `μ_p` as Frobenius kernels of elliptic curves over finite
//! fields.
//!
//! Over `F_q` with `q = p^n` the twisted forms of `μ_p` are classified by
//! `F_q^x / F_q^{x(p-1)} ≅ F_p^x`. An ordinary curve `E` carries the form
//! given by the class of its Hasse invariant `A_p`, and the trace of Frobenius
//! satisfies `β ≡ φ([A_p]) mod p`. Together with `β^2 < 4q` this decides which
//! forms occur; this crate computes all of it by brute force and checks the
//! pieces against each other.

pub mod cli;
pub mod curve;
pub mod forms;
pub mod gf;
pub mod poly;
pub mod search;
pub mod verify;

pub use curve::{CurveError, FrobeniusData, HasseLevel, TwistKind, WeierstrassCurve};
pub use forms::{ClassGroup, FrobeniusKernelClass, PTorsionDescription, UnitClass};
pub use gf::{FieldCtx, FieldElement, GfError};
pub use poly::{Polynomial, PolyError};
pub use search::{census, find_curve_with_class, RealizabilityReport, SearchMode};
