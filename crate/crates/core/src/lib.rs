//! Exact computations around quantum automorphism groups of finite
//! dimensional C*-algebras: K-theory from the boundary map, the projective
//! resolution and its exactness, δ-forms, torsion in discrete duals, and the
//! magic-unitary rank check.

pub mod cstar;
pub mod dims;
pub mod exec;
pub mod ktheory;
pub mod linalg;
pub mod magic;
pub mod repring;
pub mod resolution;
pub mod sweep;
pub mod torsion;
