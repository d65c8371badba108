//! Degree-preserving maps of twisted graded free modules.
//!
//! A `GradedMatrix` represents a map ⊕_c R(−b_c) → ⊕_r R(−a_r); entry (r, c)
//! is zero or homogeneous of degree b_c − a_r. Twist vectors are explicit
//! data, never inferred from entries, and the homogeneity invariant is
//! checked at construction.

use crate::error::{Error, Result};
use crate::ring::{Polynomial, RingRef};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMatrix {
    ring: RingRef,
    row_twists: Vec<i64>,
    col_twists: Vec<i64>,
    entries: Vec<Polynomial>,
}

impl GradedMatrix {
    pub fn new(
        ring: &RingRef,
        row_twists: Vec<i64>,
        col_twists: Vec<i64>,
        entries: Vec<Polynomial>,
    ) -> GradedMatrix {
        assert_eq!(entries.len(), row_twists.len() * col_twists.len());
        let m = GradedMatrix { ring: ring.clone(), row_twists, col_twists, entries };
        m.assert_graded();
        m
    }

    pub fn zero(ring: &RingRef, row_twists: Vec<i64>, col_twists: Vec<i64>) -> GradedMatrix {
        let entries = vec![Polynomial::zero(ring); row_twists.len() * col_twists.len()];
        GradedMatrix { ring: ring.clone(), row_twists, col_twists, entries }
    }

    pub fn identity(ring: &RingRef, twists: Vec<i64>) -> GradedMatrix {
        let n = twists.len();
        let mut m = Self::zero(ring, twists.clone(), twists);
        for i in 0..n {
            *m.entry_mut(i, i) = Polynomial::one(ring);
        }
        m
    }

    pub fn from_columns(
        ring: &RingRef,
        row_twists: Vec<i64>,
        cols: Vec<(i64, Vec<Polynomial>)>,
    ) -> GradedMatrix {
        let mut col_twists = Vec::with_capacity(cols.len());
        let rows = row_twists.len();
        let mut entries = vec![Polynomial::zero(ring); rows * cols.len()];
        for (c, (tw, comps)) in cols.iter().enumerate() {
            assert_eq!(comps.len(), rows);
            col_twists.push(*tw);
            for r in 0..rows {
                entries[r * cols.len() + c] = comps[r].clone();
            }
        }
        GradedMatrix::new(ring, row_twists, col_twists, entries)
    }

    fn assert_graded(&self) {
        for r in 0..self.nrows() {
            for c in 0..self.ncols() {
                let e = self.entry(r, c);
                let want = self.col_twists[c] - self.row_twists[r];
                assert!(
                    e.is_homogeneous_of(want),
                    "entry ({r},{c}) = {e} not homogeneous of degree {want}"
                );
            }
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.row_twists.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_twists.len()
    }

    pub fn row_twists(&self) -> &[i64] {
        &self.row_twists
    }

    pub fn col_twists(&self) -> &[i64] {
        &self.col_twists
    }

    pub fn entry(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.ncols() + c]
    }

    pub(crate) fn entry_mut(&mut self, r: usize, c: usize) -> &mut Polynomial {
        let n = self.ncols();
        &mut self.entries[r * n + c]
    }

    pub fn column(&self, c: usize) -> Vec<Polynomial> {
        (0..self.nrows()).map(|r| self.entry(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn compose(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if *self.ring != *other.ring {
            return Err(Error::ContextMismatch);
        }
        assert_eq!(
            self.col_twists, other.row_twists,
            "composition twist mismatch"
        );
        let rows = self.nrows();
        let cols = other.ncols();
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let mut acc = Polynomial::zero(&self.ring);
                for k in 0..self.ncols() {
                    let prod = self.entry(r, k).mul(other.entry(k, c))?;
                    acc = acc.add(&prod);
                }
                entries.push(acc);
            }
        }
        Ok(GradedMatrix::new(&self.ring, self.row_twists.clone(), other.col_twists.clone(), entries))
    }

    /// Horizontal concatenation; row twists must agree.
    pub fn hstack(&self, other: &GradedMatrix) -> GradedMatrix {
        assert_eq!(self.row_twists, other.row_twists);
        let rows = self.nrows();
        let cols = self.ncols() + other.ncols();
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..self.ncols() {
                entries.push(self.entry(r, c).clone());
            }
            for c in 0..other.ncols() {
                entries.push(other.entry(r, c).clone());
            }
        }
        let mut col_twists = self.col_twists.clone();
        col_twists.extend_from_slice(&other.col_twists);
        GradedMatrix::new(&self.ring, self.row_twists.clone(), col_twists, entries)
    }

    pub fn map_entries(
        &self,
        row_twists: Vec<i64>,
        col_twists: Vec<i64>,
        f: impl Fn(&Polynomial) -> Polynomial,
    ) -> GradedMatrix {
        let entries = self.entries.iter().map(f).collect();
        GradedMatrix::new(&self.ring, row_twists, col_twists, entries)
    }

    /// Keeps the given rows/columns, in order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> GradedMatrix {
        let row_twists = rows.iter().map(|&r| self.row_twists[r]).collect();
        let col_twists: Vec<i64> = cols.iter().map(|&c| self.col_twists[c]).collect();
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.entry(r, c).clone());
            }
        }
        GradedMatrix::new(&self.ring, row_twists, col_twists, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PolyRingCtx;

    #[test]
    fn construction_checks_degrees() {
        let r = PolyRingCtx::new(2, vec!["x".into(), "y".into()]).unwrap();
        let x = Polynomial::variable(&r, 0);
        // [x]: R(-1) -> R is degree-preserving.
        let m = GradedMatrix::new(&r, vec![0], vec![1], vec![x.clone()]);
        assert_eq!(m.entry(0, 0), &x);
    }

    #[test]
    #[should_panic(expected = "not homogeneous")]
    fn construction_rejects_bad_twist() {
        let r = PolyRingCtx::new(2, vec!["x".into(), "y".into()]).unwrap();
        let x = Polynomial::variable(&r, 0);
        let _ = GradedMatrix::new(&r, vec![0], vec![2], vec![x]);
    }

    #[test]
    fn compose_zero() {
        let r = PolyRingCtx::new(2, vec!["x".into(), "y".into()]).unwrap();
        let x = Polynomial::variable(&r, 0);
        let y = Polynomial::variable(&r, 1);
        // Koszul: d1 = [x y], d2 = [y, -x]^T; d1 d2 = 0.
        let d1 = GradedMatrix::new(&r, vec![0], vec![1, 1], vec![x.clone(), y.clone()]);
        let d2 = GradedMatrix::new(&r, vec![1, 1], vec![2], vec![y.clone(), x.neg()]);
        assert!(d1.compose(&d2).unwrap().is_zero());
    }
}
