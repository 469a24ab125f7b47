//! Exact rank analysis of face-splitting matrices of point pairs in `P^2 x P^2`.
//!
//! For `k <= 6` pairs `(x_i, y_i)` the matrix `Z_k` has rows `x_i ⊗ y_i`. The crate
//! computes its rank over the rationals ([`facesplit`]), explains every rank drop by a
//! verifiable geometric condition ([`classify`]), constructs deficient configurations
//! ([`synthesis`]) and builds the cubic surface and double six attached to six pairs
//! with a rank drop ([`surface`]).
//!
//! ```
//! use rankdrop::classify::classify;
//! use rankdrop::facesplit::Config;
//!
//! let c = Config::of(&[[1, 2, 3], [1, 2, 3]], &[[4, 5, 6], [8, 10, 12]]);
//! assert!(classify(&c).deficient);
//! ```

pub mod classify;
pub mod facesplit;
pub mod invariants;
pub mod linalg;
pub mod projective;
pub mod sampling;
pub mod surface;
pub mod synthesis;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/projective.md")]
    mod projective {}
    #[doc = include_str!("../../../book/src/face-splitting.md")]
    mod face_splitting {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/synthesis.md")]
    mod synthesis {}
    #[doc = include_str!("../../../book/src/cubic-surface.md")]
    mod cubic_surface {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
