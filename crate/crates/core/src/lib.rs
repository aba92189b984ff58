//! Frame and Riesz-sequence density checks for orbits of projective
//! representations under lattices.
//!
//! Two settings share the [`frames`] layer:
//!
//! * [`finite_gabor`]: time-frequency shifts on `ℂⁿ` over subgroups of
//!   `ℤₙ × ℤₙ`, verified exactly and exhaustively;
//! * [`bergman`]: weighted Bergman spaces on the upper half-plane with
//!   orbits of Fuchsian lattices from [`fuchsian`], studied on finite
//!   sections.
//!
//! [`hyperbolic`] has the geometry and quadrature, [`linalg`] the dense
//! Hermitian eigensolver everything else rests on.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bergman;
pub mod finite_gabor;
pub mod frames;
pub mod fuchsian;
pub mod hyperbolic;
pub mod linalg;

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/finite.md")]
    mod finite {}
    #[doc = include_str!("../../../book/src/hyperbolic.md")]
    mod hyperbolic {}
    #[doc = include_str!("../../../book/src/bergman.md")]
    mod bergman {}
    #[doc = include_str!("../../../book/src/density.md")]
    mod density {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
