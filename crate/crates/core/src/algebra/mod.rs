mod element;
mod monomial;
mod morphism;
mod presentation;
mod rewrite;

pub use element::{ideal_membership, ideal_piece, Element};
pub use monomial::{Monomial, Poly};
pub use morphism::{find_isomorphism, morphism_kernel, AlgebraMorphism};
pub use presentation::{AlgebraPresentation, Generator};
pub use rewrite::{RewriteSystem, Ring};
