//! Finite graph categories realized inside abelian groups.
//!
//! The crate builds the category algebra of finite graph morphisms, a
//! degree-capped symbolic model of a Corner-type group realizing that algebra,
//! the functor on finite graphs obtained by cutting the group with identity
//! idempotents, and the orthogonality / reflection machinery for graphs.

pub mod graph;
pub mod zlattice;
pub mod algebra;
pub mod corner;
pub mod gfun;
pub mod ortho;
