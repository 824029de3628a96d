//! Displacement structure of matrices and of their inverses.
//!
//! A matrix is *structured* when one of its displaced forms
//! `∇_{Z,N} A = A - Z A N` or `Δ_{Z,N} A = Z A - A N` has small rank. This
//! crate computes those displacements and their ranks (exactly over the
//! rationals, or by SVD threshold over `f64`), builds Toeplitz, Hankel and
//! circulant families, forms the inverse-like maps whose structure is
//! studied (inverse, regularized inverse, Schur complement, Moore-Penrose
//! pseudo-inverse) and checks every displacement-rank bound relating them.
//!
//! ```
//! use dispkit::{displacement, matrix::shift_matrix, structured, QMatrix};
//!
//! let t: QMatrix = structured::toeplitz_i64(&[2, 1, 3, 4, 2], &[2, 4, 3, 1, 2]).unwrap();
//! let s: QMatrix = shift_matrix(5);
//! let d = displacement::nabla(&t, &s, &s.transpose()).unwrap();
//! assert_eq!(dispkit::rank::exact_rank(&d).rank, 2);
//! ```

pub mod displacement;
pub mod elim;
pub mod error;
pub mod inverses;
pub mod io;
pub mod matrix;
pub mod pattern;
pub mod psym;
pub mod rank;
pub mod scalar;
pub mod structured;
pub mod subspace;
pub mod svd;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{FMatrix, Matrix, QMatrix};
pub use rank::{RankMethod, RankReport};
pub use scalar::{Rational, Scalar};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/displacement.md")]
    mod displacement {}
    #[doc = include_str!("../../../book/src/structured.md")]
    mod structured {}
    #[doc = include_str!("../../../book/src/inverses.md")]
    mod inverses {}
    #[doc = include_str!("../../../book/src/p-symmetry.md")]
    mod p_symmetry {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
