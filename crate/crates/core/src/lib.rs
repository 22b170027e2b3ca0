//! Orthogonal-Buekenhout-Metz unitals in PG(2,q²), their pedals (sets of
//! feet of external points), and exhaustive checks of their line structure.
//!
//! The layers build on each other:
//! - [`field`]: GF(p) ⊂ GF(q) ⊂ GF(q²) with conjugation, trace and norm;
//! - [`plane`]: normalized points and lines, incidence tables;
//! - [`unital`]: OBM and Hermitian unitals, tangents, blocking-set checks;
//! - [`pedal`]: feet, line censuses, trace classes, arc partitions;
//! - [`conic`]: conics through five points;
//! - [`elation`]: the elation group with centre `P_∞` and its pedal orbits.

pub mod conic;
pub mod elation;
pub mod error;
pub mod field;
pub mod pedal;
pub mod plane;
pub mod unital;

pub use error::{Error, Result};
pub use field::{Backend, FieldCtx, Fq, Fq2};
pub use plane::{Line, Plane, Point};
pub use unital::{UnitalModel, UnitalParams};
