//! Exact combinatorics of integral affine Weyl groups, metaplectic dual groups,
//! level duality and Hecke algebroids for central extensions of loop groups.
//!
//! All arithmetic is over `Z` and `Q`. The modules build on each other in the
//! order `exact`, `rootdata`, `affine`, `integral`, then `metaplectic`,
//! `duality`, `hecke` and `soergel`.

pub mod affine;
pub mod exact;
pub mod rootdata;
pub mod integral;
pub mod metaplectic;
pub mod duality;
pub mod hecke;
pub mod soergel;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/root-data.md")]
    mod root_data {}
    #[doc = include_str!("../../../book/src/affine.md")]
    mod affine {}
    #[doc = include_str!("../../../book/src/integral.md")]
    mod integral {}
    #[doc = include_str!("../../../book/src/metaplectic.md")]
    mod metaplectic {}
    #[doc = include_str!("../../../book/src/duality.md")]
    mod duality {}
    #[doc = include_str!("../../../book/src/hecke.md")]
    mod hecke {}
    #[doc = include_str!("../../../book/src/soergel.md")]
    mod soergel {}
}
