//! Dimension of the stable part of a p-linear endomorphism.
//!
//! Over F_p the scalars are Frobenius-fixed, so iterating the p-linear map
//! on a fixed basis is plain matrix iteration: the descending chain
//! f(V) ⊇ f²(V) ⊇ … stabilizes within r = dim V steps and
//! dim ⋂ f^i(V) = rank(A^r). Ranks of iterated products are invariant
//! under field extension, which is why the prime field suffices.

use crate::field::FpMat;
use crate::frobenius::PLinearEndo;

/// rank(A^s) for the first power s ≥ r reached by repeated squaring.
pub fn stable_dimension(endo: &PLinearEndo) -> usize {
    let r = endo.size();
    if r == 0 {
        return 0;
    }
    let mut b = endo.matrix.clone();
    let mut s = 1usize;
    while s < r {
        b = b.mul_mat(&b);
        s *= 2;
    }
    b.rank()
}

/// rank(A), rank(A²), …, rank(A^r); the tail is the stable dimension.
pub fn rank_sequence(endo: &PLinearEndo) -> Vec<usize> {
    let r = endo.size();
    let mut out = Vec::with_capacity(r);
    let mut b = FpMat::identity(endo.matrix.p, r);
    for _ in 0..r {
        b = b.mul_mat(&endo.matrix);
        out.push(b.rank());
    }
    out
}
