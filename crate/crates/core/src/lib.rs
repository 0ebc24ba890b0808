//! Exact computation of `B`-restricted clique polynomials and their largest
//! negative root, together with the spectral and homomorphism checks built
//! on them.

pub mod bitset;
pub mod clique;
pub mod cpoly;
pub mod graph;
pub mod hom;
pub mod poly;
pub mod roots;
pub mod selftest;
pub mod spectral;
