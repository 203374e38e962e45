//! Skew-product automorphisms of crossed products `A ⋊_α Z`.
//!
//! Coefficient algebras are the noncommutative torus (with the circle as its
//! one-generator commutative corner) and continuous functions on the
//! one-point compactification of `Z`. Phases are tracked exactly over a
//! declared rationally independent symbol basis so that solvability of every
//! cohomological equation is decided without floating-point thresholds.

pub mod algebra;
pub mod angle;
pub mod cohomology;
pub mod crossed;
pub mod ergodicity;
pub mod error;
pub mod json;
pub mod lattice;
pub mod phase;
pub mod presets;
pub mod skew;

pub use algebra::{AlgebraContext, AlgebraKind, Automorphism, BasisKey, Element, Mono, ScalarMonomial};
pub use angle::{angle_combine, minimal_level, solve_character, solve_phase_relation, Angle, Symbol, SymbolBasis};
pub use crossed::CrossedElement;
pub use error::{Error, Result};
pub use phase::PhasedScalar;
pub use skew::{BaseFamily, Flags, SkewSystem, ValidationReport};
