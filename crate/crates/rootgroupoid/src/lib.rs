//! Root groupoids of Kac-Moody superalgebras, computed exactly.
//!
//! A Cartan datum `(A, p)` seeds a groupoid whose objects carry ordered
//! sets of simple roots and whose generating arrows are reflexions. This
//! crate explores the skeleton and spine of that groupoid, extracts the
//! principal roots and the Weyl group, enumerates real and imaginary roots,
//! and computes the groups of D-equivalent vertices.

#![allow(clippy::needless_range_loop)]

pub mod exact;
pub mod cartan;
pub mod groupoid;
pub mod roots;
pub mod families;
pub mod symmetry;
