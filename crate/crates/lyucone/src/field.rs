//! Arithmetic in the prime field F_p and dense matrices over it.
//!
//! Scalars are `u32` values reduced to `[0, p)`. The modulus travels with the
//! ring context rather than with each scalar, so the helpers here take `p`
//! explicitly. `FpMat` is the workhorse for degree-piece linear algebra:
//! exact Gaussian elimination gives ranks, solutions and row-echelon data.

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn add(p: u32, a: u32, b: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(p: u32, a: u32, b: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg(p: u32, a: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(p: u32, a: u32, b: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(p: u32, mut base: u32, mut exp: u64) -> u32 {
    let mut acc = 1u32 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(p, acc, base);
        }
        base = mul(p, base, base);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse by Fermat: a^(p-2) for a != 0.
pub fn inv(p: u32, a: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero");
    pow(p, a, p as u64 - 2)
}

/// Dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMat {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl FpMat {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1 % p;
        }
        m
    }

    pub fn from_rows(p: u32, rows: Vec<Vec<u32>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| v % p));
        }
        FpMat { p, rows: r, cols: c, data }
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[u32]) {
        assert_eq!(v.len(), self.rows);
        for (r, &x) in v.iter().enumerate() {
            self[(r, c)] = x % self.p;
        }
    }

    pub fn mul_mat(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.p, other.p);
        let p = self.p;
        let mut out = FpMat::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = add(p, out[(i, j)], mul(p, a, other[(k, j)]));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.p;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u32;
                for j in 0..self.cols {
                    acc = add(p, acc, mul(p, self[(i, j)], v[j]));
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self[(r, col)] != 0) else {
                continue;
            };
            self.swap_rows(row, pr);
            let piv_inv = inv(p, self[(row, col)]);
            for j in col..self.cols {
                self[(row, j)] = mul(p, self[(row, j)], piv_inv);
            }
            for r in 0..self.rows {
                if r != row && self[(r, col)] != 0 {
                    let factor = self[(r, col)];
                    for j in col..self.cols {
                        let t = mul(p, factor, self[(row, j)]);
                        self[(r, j)] = sub(p, self[(r, j)], t);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, one column vector per basis element.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1 % p;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = neg(p, m[(r, free)]);
            }
            basis.push(v);
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let t = self[(a, j)];
            self[(a, j)] = self[(b, j)];
            self[(b, j)] = t;
        }
    }
}

impl std::ops::Index<(usize, usize)> for FpMat {
    type Output = u32;
    fn index(&self, (r, c): (usize, usize)) -> &u32 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FpMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u32 {
        &mut self.data[r * self.cols + c]
    }
}

/// Solves A x = b, free variables set to zero. `None` when inconsistent.
#[derive(Debug, Clone)]
pub struct FpSolver {
    echelon: FpMat,
    transform: FpMat,
    pivots: Vec<usize>,
}

impl FpSolver {
    pub fn new(a: &FpMat) -> Self {
        let p = a.p;
        // Row-reduce [A | I], keeping the transform so each solve is a
        // matrix-vector product plus back-reads.
        let mut aug = FpMat::zeros(p, a.rows, a.cols + a.rows);
        for r in 0..a.rows {
            for c in 0..a.cols {
                aug[(r, c)] = a[(r, c)];
            }
            aug[(r, a.cols + r)] = 1 % p;
        }
        // rref restricted to the A-block: run elimination manually so pivots
        // never land in the transform block.
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == aug.rows {
                break;
            }
            let Some(pr) = (row..aug.rows).find(|&r| aug[(r, col)] != 0) else {
                continue;
            };
            aug.swap_rows(row, pr);
            let piv_inv = inv(p, aug[(row, col)]);
            for j in 0..aug.cols {
                aug[(row, j)] = mul(p, aug[(row, j)], piv_inv);
            }
            for r in 0..aug.rows {
                if r != row && aug[(r, col)] != 0 {
                    let factor = aug[(r, col)];
                    for j in 0..aug.cols {
                        let t = mul(p, factor, aug[(row, j)]);
                        aug[(r, j)] = sub(p, aug[(r, j)], t);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let mut echelon = FpMat::zeros(p, a.rows, a.cols);
        let mut transform = FpMat::zeros(p, a.rows, a.rows);
        for r in 0..a.rows {
            for c in 0..a.cols {
                echelon[(r, c)] = aug[(r, c)];
            }
            for c in 0..a.rows {
                transform[(r, c)] = aug[(r, a.cols + c)];
            }
        }
        FpSolver { echelon, transform, pivots }
    }

    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let y = self.transform.mul_vec(b);
        let rank = self.pivots.len();
        // Rows past the rank must vanish for consistency.
        if y[rank..].iter().any(|&v| v != 0) {
            return None;
        }
        let mut x = vec![0u32; self.echelon.cols];
        for (r, &pc) in self.pivots.iter().enumerate() {
            x[pc] = y[r];
        }
        // Pivot rows may still involve free columns; with free vars pinned to
        // zero the pivot value is exactly y[r].
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(5));
        assert!(!is_prime(1));
        assert!(!is_prime(4));
        assert!(!is_prime(9));
    }

    #[test]
    fn scalar_ops() {
        assert_eq!(add(5, 3, 4), 2);
        assert_eq!(sub(5, 1, 3), 3);
        assert_eq!(mul(5, 3, 4), 2);
        assert_eq!(inv(5, 3), 2);
        assert_eq!(pow(3, 2, 3), 2);
    }

    #[test]
    fn rank_and_kernel() {
        let m = FpMat::from_rows(2, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solver_consistent_and_not() {
        let a = FpMat::from_rows(3, vec![vec![1, 2], vec![2, 1], vec![0, 0]]);
        let s = FpSolver::new(&a);
        let x = s.solve(&[0, 0, 0]).unwrap();
        assert_eq!(x, vec![0, 0]);
        let x = s.solve(&[1, 2, 0]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![1, 2, 0]);
        assert!(s.solve(&[0, 0, 1]).is_none());
    }
}
