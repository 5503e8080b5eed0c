//! Combinatorics of fine mixed subdivisions of a dilated simplex `nΔ_{d-1}`.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`] and [`tournament`]: permutations of `[n]`, their two canonical
//!   cycle factorizations, and acyclic tournaments read as permutations.
//! * [`system`]: systems of permutations on the edges of `nΔ_{d-1}`, their
//!   acyclicity, duality, deletion and contraction, simplex positions, tables
//!   of positions and the spread-out test.
//! * [`subdivision`]: exact fine mixed subdivisions (labelled Minkowski cells),
//!   geometric validation in exact rational arithmetic, the Cayley trick and
//!   the subdivision-level duality/deletion/contraction.
//! * [`lozenge`]: the `d = 3` engine (lozenge tilings, routings, triangle
//!   positions and the constructive realization of acyclic systems).
//! * [`verify`]: exhaustive enumerators and theorem checkers.
//!
//! All labels exposed by the public API are 1-indexed: colors (summand
//! indices) run over `1..=n` and letters (simplex vertices) over `1..=d`.

pub mod error;
pub mod json;
pub mod letters;
pub mod lozenge;
pub mod parallel;
pub mod perm;
pub mod subdivision;
pub mod system;
pub mod tournament;
pub mod verify;

pub use error::{Error, Result};
pub use letters::Letters;
pub use lozenge::{LozengeTiling, Routing};
pub use perm::{AscendingFactorization, DescendingFactorization, Permutation};
pub use subdivision::{FineMixedSubdivision, MixedCell, ValidationError};
pub use system::{SimplexPositionList, SystemOfPermutations, TableOfPositions};
pub use tournament::Tournament;
