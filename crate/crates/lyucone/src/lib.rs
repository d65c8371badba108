//! Exact-arithmetic kernels for Lyubeznik tables of cone vertices in
//! characteristic p > 0.
//!
//! The library computes the tables λ_{i,j} and dim (M_0)_{i,j} attached to a
//! homogeneous ideal I ⊆ F_p[x_0,…,x_n], where
//! M = Ext^{n+1−i}(Ext^{n+1−j}(R/I, R), R) carries a natural Frobenius action
//! and λ_{i,j} is the dimension of its stable part. Everything is exact over
//! the prime field: Gröbner bases, graded free resolutions, Ext modules as
//! subquotients, the Frobenius comparison maps, and the stabilized rank of
//! the degree-zero Frobenius matrix.
//!
//! Entry points:
//! - [`lyubeznik::ConeInput`] validates an input ideal and fixes n and d.
//! - [`lyubeznik::compute_tables`] produces both tables plus per-cell data.
//! - [`embeddings`] generates Veronese / linear re-embeddings and compares
//!   invariant tables across them.
//! - [`oracle`] recomputes tables for monomial ideals through Taylor
//!   complexes and dense linear algebra, sharing no code with the Gröbner
//!   pipeline.
//! - [`input`] parses and renders the `ring p k names… / generators…` file
//!   grammar used by the CLI and the browser demo.
//!
//! ```
//! use lyucone::input::parse_input;
//! use lyucone::lyubeznik::compute_tables;
//!
//! // A point in the projective line over F_2: the table is a single 1 at
//! // the highest cell (d+1, d+1) = (1, 1).
//! let cone = parse_input("ring 2 2 x0 x1\nx0\n").unwrap();
//! let set = compute_tables(&cone).unwrap();
//! assert_eq!(set.lambda.entries, vec![vec![0, 0], vec![0, 1]]);
//! assert_eq!(set.m0.entries[1][1], 1);
//! ```

pub mod embeddings;
pub mod error;
pub mod field;
pub mod frobenius;
pub mod groebner;
pub mod homalg;
pub mod input;
pub mod lyubeznik;
pub mod matrix;
pub mod oracle;
pub mod resolution;
pub mod ring;
pub mod stable;

pub use error::Error;
pub use ring::{Ideal, Monomial, PolyRingCtx, Polynomial, RingRef};
