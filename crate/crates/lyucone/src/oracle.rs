//! Independent verifier for monomial ideals.
//!
//! Taylor complexes give explicit resolutions of R/I and R/I^\[p\], and the
//! comparison chain map between them is diagonal: on the basis element of a
//! subset S it is multiplication by lcm_S^(p−1). Everything downstream
//! (kernels, minimal generators, lifts, the degree-zero Frobenius matrix)
//! is done by dense degree-by-degree linear algebra inside a degree window,
//! raised until two consecutive windows agree. No code is shared with the
//! Gröbner, resolution or homalg modules; even the rank routine is local.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field;
use crate::lyubeznik::{ConeInput, LyubeznikTable};
use crate::ring::{Monomial, Polynomial, RingRef};

// ---------------------------------------------------------------------
// Local dense linear algebra (kept separate from field::FpMat on purpose).

/// Echelon accumulator over F_p: rows normalized to pivot 1.
struct Echelon {
    p: u32,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    fn new(p: u32) -> Echelon {
        Echelon { p, rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vec<u32>) -> Vec<u32> {
        for (piv, row) in &self.rows {
            let f = v[*piv];
            if f != 0 {
                for k in 0..v.len() {
                    let t = field::mul(self.p, f, row[k]);
                    v[k] = field::sub(self.p, v[k], t);
                }
            }
        }
        v
    }

    /// Insert; true when the vector added a new pivot.
    fn insert(&mut self, v: Vec<u32>) -> bool {
        let mut v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = field::inv(self.p, v[piv]);
        for x in v.iter_mut() {
            *x = field::mul(self.p, *x, inv);
        }
        self.rows.push((piv, v));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Kernel of the matrix whose columns are given (each of length `rows`):
/// basis vectors of length cols.
fn kernel_of_columns(p: u32, rows: usize, cols: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = cols.len();
    if n == 0 {
        return Vec::new();
    }
    // Eliminate on transposed augmented data: track combinations.
    // aug[i] = (column i, unit vector e_i); reduce columns left to right.
    let mut ech: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new(); // pivot, col, combo
    let mut kernel = Vec::new();
    for i in 0..n {
        let mut col = cols[i].clone();
        assert_eq!(col.len(), rows);
        let mut combo = vec![0u32; n];
        combo[i] = 1;
        for (piv, bcol, bcombo) in &ech {
            let f = col[*piv];
            if f != 0 {
                for k in 0..rows {
                    let t = field::mul(p, f, bcol[k]);
                    col[k] = field::sub(p, col[k], t);
                }
                for k in 0..n {
                    let t = field::mul(p, f, bcombo[k]);
                    combo[k] = field::sub(p, combo[k], t);
                }
            }
        }
        match col.iter().position(|&x| x != 0) {
            Some(piv) => {
                let inv = field::inv(p, col[piv]);
                for x in col.iter_mut() {
                    *x = field::mul(p, *x, inv);
                }
                for x in combo.iter_mut() {
                    *x = field::mul(p, *x, inv);
                }
                ech.push((piv, col, combo));
            }
            None => kernel.push(combo),
        }
    }
    kernel
}

/// First solution of (columns)·x = b, free variables zero.
fn solve_columns(p: u32, rows: usize, cols: &[Vec<u32>], b: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(b.len(), rows);
    let n = cols.len();
    let mut ech: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new();
    for i in 0..n {
        let mut col = cols[i].clone();
        let mut combo = vec![0u32; n];
        combo[i] = 1;
        for (piv, bcol, bcombo) in &ech {
            let f = col[*piv];
            if f != 0 {
                for k in 0..rows {
                    let t = field::mul(p, f, bcol[k]);
                    col[k] = field::sub(p, col[k], t);
                }
                for k in 0..n {
                    let t = field::mul(p, f, bcombo[k]);
                    combo[k] = field::sub(p, combo[k], t);
                }
            }
        }
        if let Some(piv) = col.iter().position(|&x| x != 0) {
            let inv = field::inv(p, col[piv]);
            for x in col.iter_mut() {
                *x = field::mul(p, *x, inv);
            }
            for x in combo.iter_mut() {
                *x = field::mul(p, *x, inv);
            }
            ech.push((piv, col, combo));
        }
    }
    let mut rest = b.to_vec();
    let mut x = vec![0u32; n];
    for (piv, bcol, bcombo) in &ech {
        let f = rest[*piv];
        if f != 0 {
            for k in 0..rows {
                let t = field::mul(p, f, bcol[k]);
                rest[k] = field::sub(p, rest[k], t);
            }
            for k in 0..n {
                let t = field::mul(p, f, bcombo[k]);
                x[k] = field::add(p, x[k], t);
            }
        }
    }
    if rest.iter().any(|&v| v != 0) {
        return None;
    }
    Some(x)
}

fn rank_dense(p: u32, mat: &[Vec<u32>]) -> usize {
    let mut ech = Echelon::new(p);
    for row in mat {
        ech.insert(row.clone());
    }
    ech.rank()
}

/// rank(A), rank(A²), …, rank(A^n); the tail is the stable dimension.
fn rank_sequence_dense(p: u32, mat: &[Vec<u32>]) -> Vec<usize> {
    let n = mat.len();
    let mut out = Vec::with_capacity(n);
    let mut b: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect();
    for _ in 0..n {
        b = mat_mul_dense(p, &b, mat);
        out.push(rank_dense(p, &b));
    }
    out
}

fn mat_mul_dense(p: u32, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = a.len();
    let mut out = vec![vec![0u32; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                let t = field::mul(p, a[i][k], b[k][j]);
                out[i][j] = field::add(p, out[i][j], t);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------
// Degree pieces of twisted free modules (oracle-local).

struct Piece {
    index: Vec<(usize, Monomial)>,
    lookup: BTreeMap<(usize, Vec<u32>), usize>,
}

impl Piece {
    fn new(ring: &RingRef, twists: &[i64], m: i64) -> Piece {
        let mut index = Vec::new();
        for (coord, &a) in twists.iter().enumerate() {
            for mono in ring.monomials_of_degree(m - a) {
                index.push((coord, mono));
            }
        }
        let lookup = index
            .iter()
            .enumerate()
            .map(|(i, (c, mo))| ((*c, mo.exps().to_vec()), i))
            .collect();
        Piece { index, lookup }
    }

    fn dim(&self) -> usize {
        self.index.len()
    }

    fn vectorize(&self, comps: &[Polynomial]) -> Vec<u32> {
        let mut v = vec![0u32; self.index.len()];
        for (coord, poly) in comps.iter().enumerate() {
            for (mono, coeff) in poly.terms() {
                let idx = self.lookup[&(coord, mono.exps().to_vec())];
                v[idx] = *coeff;
            }
        }
        v
    }

    fn to_polys(&self, ring: &RingRef, ncomps: usize, v: &[u32]) -> Vec<Polynomial> {
        let mut terms: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); ncomps];
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                let (coord, mono) = &self.index[i];
                terms[*coord].push((mono.clone(), c));
            }
        }
        terms.into_iter().map(|t| Polynomial::from_terms(ring, t)).collect()
    }
}

/// Polynomial matrix described by columns, with explicit twists.
#[derive(Debug, Clone)]
struct PolyCols {
    row_twists: Vec<i64>,
    col_twists: Vec<i64>,
    cols: Vec<Vec<Polynomial>>,
}

impl PolyCols {
    fn empty(row_twists: Vec<i64>) -> PolyCols {
        PolyCols { row_twists, col_twists: vec![], cols: vec![] }
    }

    fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Transposed matrix with negated twists.
    fn dual(&self, ring: &RingRef) -> PolyCols {
        let row_twists: Vec<i64> = self.col_twists.iter().map(|&t| -t).collect();
        let col_twists: Vec<i64> = self.row_twists.iter().map(|&t| -t).collect();
        let mut cols = vec![vec![Polynomial::zero(ring); row_twists.len()]; col_twists.len()];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, e) in col.iter().enumerate() {
                cols[r][c] = e.clone();
            }
        }
        PolyCols { row_twists, col_twists, cols }
    }

    fn bracket(&self, q: i64, e: u32) -> PolyCols {
        PolyCols {
            row_twists: self.row_twists.iter().map(|&t| t * q).collect(),
            col_twists: self.col_twists.iter().map(|&t| t * q).collect(),
            cols: self
                .cols
                .iter()
                .map(|col| col.iter().map(|p| p.pow_p(e)).collect())
                .collect(),
        }
    }

    /// All vectorized degree-m multiples of the columns.
    fn multiples_at(&self, ring: &RingRef, piece: &Piece, m: i64) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for (c, col) in self.cols.iter().enumerate() {
            let d = self.col_twists[c];
            for mono in ring.monomials_of_degree(m - d) {
                let scaled: Vec<Polynomial> = col.iter().map(|p| p.scale(&mono, 1)).collect();
                out.push(piece.vectorize(&scaled));
            }
        }
        out
    }
}

// ---------------------------------------------------------------------
// Taylor complexes.

/// The full Taylor complex of a list of monomials: stage q is free on the
/// q-element subsets (in binary order), twisted by deg lcm_S.
#[derive(Debug)]
pub struct TaylorComplex {
    ring: RingRef,
    gens: Vec<Monomial>,
    stage_masks: Vec<Vec<u32>>,
    stage_twists: Vec<Vec<i64>>,
    diffs: Vec<PolyCols>,
}

impl TaylorComplex {
    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    /// Homological length (number of generators).
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn twists(&self, stage: usize) -> &[i64] {
        &self.stage_twists[stage]
    }

    /// Entry list of d_q as (row, col, polynomial) triples, for inspection.
    pub fn differential_entries(&self, q: usize) -> Vec<(usize, usize, Polynomial)> {
        let d = &self.diffs[q - 1];
        let mut out = Vec::new();
        for (c, col) in d.cols.iter().enumerate() {
            for (r, e) in col.iter().enumerate() {
                if !e.is_zero() {
                    out.push((r, c, e.clone()));
                }
            }
        }
        out
    }
}

fn subset_lcm(ring: &RingRef, gens: &[Monomial], mask: u32) -> Monomial {
    let mut acc = ring.one_monomial();
    for (i, g) in gens.iter().enumerate() {
        if mask & (1 << i) != 0 {
            acc = ring.mono_lcm(&acc, g);
        }
    }
    acc
}

/// Taylor complex with deterministic (binary-order) subset bases.
pub fn taylor_resolution(ring: &RingRef, gens: &[Monomial]) -> Result<TaylorComplex> {
    let r = gens.len();
    if r > 10 {
        return Err(Error::ResourceCap { what: format!("Taylor complex on {r} generators") });
    }
    for g in gens {
        assert!(g.degree() > 0, "taylor_resolution needs nonconstant monomials");
    }
    let p = ring.p();
    let mut stage_masks: Vec<Vec<u32>> = vec![Vec::new(); r + 1];
    for mask in 0u32..(1 << r) {
        stage_masks[mask.count_ones() as usize].push(mask);
    }
    let stage_twists: Vec<Vec<i64>> = stage_masks
        .iter()
        .map(|masks| masks.iter().map(|&m| subset_lcm(ring, gens, m).degree()).collect())
        .collect();

    let mut diffs = Vec::new();
    for q in 1..=r {
        let prev_pos: BTreeMap<u32, usize> = stage_masks[q - 1]
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i))
            .collect();
        let mut cols = Vec::new();
        for &mask in &stage_masks[q] {
            let lcm_s = subset_lcm(ring, gens, mask);
            let mut col = vec![Polynomial::zero(ring); stage_masks[q - 1].len()];
            let mut sign = 1u32 % p;
            for i in 0..r as u32 {
                if mask & (1 << i) == 0 {
                    continue;
                }
                let sub = mask & !(1 << i);
                let lcm_t = subset_lcm(ring, gens, sub);
                let ratio = lcm_t.quotient_into(&lcm_s).expect("lcm divides");
                col[prev_pos[&sub]] = Polynomial::monomial_term(ring, ratio, sign);
                sign = field::neg(p, sign);
            }
            cols.push(col);
        }
        diffs.push(PolyCols {
            row_twists: stage_twists[q - 1].clone(),
            col_twists: stage_twists[q].clone(),
            cols,
        });
    }

    let t = TaylorComplex { ring: ring.clone(), gens: gens.to_vec(), stage_masks, stage_twists, diffs };
    assert_taylor_valid(&t);
    Ok(t)
}

/// d² = 0, and the Frobenius comparison (multiplication by lcm_S^(p−1) on
/// e_S) commutes with the differentials: both asserted exactly.
fn assert_taylor_valid(t: &TaylorComplex) {
    let ring = &t.ring;
    let p = ring.p();
    for q in 2..=t.len() {
        let d1 = &t.diffs[q - 2];
        let d2 = &t.diffs[q - 1];
        for (c, col) in d2.cols.iter().enumerate() {
            let _ = c;
            let mut acc = vec![Polynomial::zero(ring); d1.row_twists.len()];
            for (k, e) in col.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                for (r, f) in d1.cols[k].iter().enumerate() {
                    acc[r] = acc[r].add(&f.mul(e).expect("same ring"));
                }
            }
            assert!(acc.iter().all(|x| x.is_zero()), "Taylor d² != 0");
        }
    }
    // Comparison map: c_{q-1} ∘ d^[p]_q = d_q ∘ c_q entrywise.
    for q in 1..=t.len() {
        let d = &t.diffs[q - 1];
        for (c, &mask_s) in t.stage_masks[q].iter().enumerate() {
            let lcm_s = subset_lcm(ring, &t.gens, mask_s);
            let diag_s = Polynomial::monomial_term(ring, lcm_s.pow_scale(p - 1), 1);
            for (r, &mask_t) in t.stage_masks[q - 1].iter().enumerate() {
                let e = &d.cols[c][r];
                let lcm_t = subset_lcm(ring, &t.gens, mask_t);
                let diag_t = Polynomial::monomial_term(ring, lcm_t.pow_scale(p - 1), 1);
                let lhs = diag_t.mul(&e.pow_p(1)).expect("same ring");
                let rhs = e.mul(&diag_s).expect("same ring");
                assert_eq!(lhs, rhs, "Frobenius comparison does not commute");
            }
        }
    }
}

// ---------------------------------------------------------------------
// Windowed module calculus for one column.

struct ColumnStages {
    /// Q_0 generators as polynomial columns in the ambient T_{t1}^∨.
    q0: PolyCols,
    /// D_k: Q_k → Q_{k−1} for k ≥ 1 (cols over the previous stage coords).
    maps: Vec<PolyCols>,
    /// θ_k: Q_k → Q_k^\[p\], cols over the bracketed stage coords.
    thetas: Vec<PolyCols>,
}

struct ColumnBuilder<'a> {
    ring: RingRef,
    p: u32,
    taylor: &'a TaylorComplex,
    t1: usize,
    window: i64,
}

impl<'a> ColumnBuilder<'a> {
    fn ambient_twists(&self) -> Vec<i64> {
        self.taylor.twists(self.t1).iter().map(|&t| -t).collect()
    }

    fn delta_out(&self) -> Option<PolyCols> {
        if self.t1 < self.taylor.len() {
            Some(self.taylor.diffs[self.t1].dual(&self.ring))
        } else {
            None
        }
    }

    fn delta_in(&self) -> Option<PolyCols> {
        if self.t1 >= 1 {
            Some(self.taylor.diffs[self.t1 - 1].dual(&self.ring))
        } else {
            None
        }
    }

    /// Kernel pieces of δ_out inside the ambient, one degree at a time.
    fn ambient_kernel_at(&self, twists: &[i64], m: i64, piece: &Piece) -> Vec<Vec<u32>> {
        match self.delta_out() {
            None => {
                // Everything is a kernel element.
                (0..piece.dim())
                    .map(|i| {
                        let mut v = vec![0u32; piece.dim()];
                        v[i] = 1;
                        v
                    })
                    .collect()
            }
            Some(delta) => {
                let target = Piece::new(&self.ring, &delta.row_twists, m);
                let _ = twists;
                let cols: Vec<Vec<u32>> = (0..piece.dim())
                    .map(|i| {
                        let (coord, mono) = &piece.index[i];
                        let img: Vec<Polynomial> =
                            delta.cols[*coord].iter().map(|e| e.scale(mono, 1)).collect();
                        target.vectorize(&img)
                    })
                    .collect();
                kernel_of_columns(self.p, target.dim(), &cols)
            }
        }
    }

    /// Minimal generators of E = ker(δ_out)/im(δ_in) found inside the
    /// window, as ambient polynomial columns.
    fn e_generators(&self) -> PolyCols {
        let ambient = self.ambient_twists();
        if ambient.is_empty() {
            return PolyCols::empty(ambient);
        }
        let lo = *ambient.iter().min().unwrap();
        let hi = lo + self.window;
        let delta_in = self.delta_in();
        let mut gens = PolyCols::empty(ambient.clone());
        let mut prev_kernel_polys: Vec<Vec<Polynomial>> = Vec::new();
        for m in lo..=hi {
            let piece = Piece::new(&self.ring, &ambient, m);
            if piece.dim() == 0 {
                prev_kernel_polys = Vec::new();
                continue;
            }
            let kernel = self.ambient_kernel_at(&ambient, m, &piece);
            let mut span = Echelon::new(self.p);
            if let Some(din) = &delta_in {
                for v in din.multiples_at(&self.ring, &piece, m) {
                    span.insert(v);
                }
            }
            for polys in &prev_kernel_polys {
                for var in 0..self.ring.nvars() {
                    let x = Polynomial::variable(&self.ring, var);
                    let scaled: Vec<Polynomial> =
                        polys.iter().map(|p| p.mul(&x).expect("same ring")).collect();
                    span.insert(piece.vectorize(&scaled));
                }
            }
            let mut kernel_polys = Vec::new();
            for v in &kernel {
                let polys = piece.to_polys(&self.ring, ambient.len(), v);
                if span.insert(v.clone()) {
                    gens.col_twists.push(m);
                    gens.cols.push(polys.clone());
                }
                kernel_polys.push(polys);
            }
            prev_kernel_polys = kernel_polys;
        }
        gens
    }

    /// Minimal generators of ker(map into E) for stage 1, and of ker(D_k)
    /// for later stages, as polynomial columns over the source stage.
    fn kernel_generators(
        &self,
        src_twists: &[i64],
        src_cols: &PolyCols,
        quotient_im: Option<&PolyCols>,
    ) -> PolyCols {
        let mut gens = PolyCols::empty(src_twists.to_vec());
        if src_twists.is_empty() {
            return gens;
        }
        let lo = *src_twists.iter().min().unwrap();
        let hi = lo + self.window;
        let target_twists = &src_cols.row_twists;
        let mut prev_kernel_polys: Vec<Vec<Polynomial>> = Vec::new();
        for m in lo..=hi {
            let src_piece = Piece::new(&self.ring, src_twists, m);
            if src_piece.dim() == 0 {
                prev_kernel_polys = Vec::new();
                continue;
            }
            let tgt_piece = Piece::new(&self.ring, target_twists, m);
            // Columns: images of the source basis, then (for stage 1) the
            // allowed image slack.
            let mut cols: Vec<Vec<u32>> = Vec::with_capacity(src_piece.dim());
            for i in 0..src_piece.dim() {
                let (coord, mono) = &src_piece.index[i];
                let img: Vec<Polynomial> =
                    src_cols.cols[*coord].iter().map(|e| e.scale(mono, 1)).collect();
                cols.push(tgt_piece.vectorize(&img));
            }
            let n_src = cols.len();
            if let Some(im) = quotient_im {
                cols.extend(im.multiples_at(&self.ring, &tgt_piece, m));
            }
            let combined_kernel = kernel_of_columns(self.p, tgt_piece.dim(), &cols);
            // Project to the source block and re-reduce to a basis.
            let mut basis = Echelon::new(self.p);
            let mut kernel_vecs = Vec::new();
            for v in combined_kernel {
                let head = v[..n_src].to_vec();
                if basis.insert(head.clone()) {
                    kernel_vecs.push(head);
                }
            }
            let mut span = Echelon::new(self.p);
            for polys in &prev_kernel_polys {
                for var in 0..self.ring.nvars() {
                    let x = Polynomial::variable(&self.ring, var);
                    let scaled: Vec<Polynomial> =
                        polys.iter().map(|p| p.mul(&x).expect("same ring")).collect();
                    span.insert(src_piece.vectorize(&scaled));
                }
            }
            let mut kernel_polys = Vec::new();
            for v in &kernel_vecs {
                let polys = src_piece.to_polys(&self.ring, src_twists.len(), v);
                if span.insert(v.clone()) {
                    gens.col_twists.push(m);
                    gens.cols.push(polys.clone());
                }
                kernel_polys.push(polys);
            }
            prev_kernel_polys = kernel_polys;
        }
        gens
    }

    /// Solve for θ_0: express ψ(g_a) over the bracketed generators plus the
    /// bracketed image; None when the window is insufficient.
    fn theta0(&self, q0: &PolyCols) -> Option<PolyCols> {
        let p = self.p;
        let q = p as i64;
        let ambient = self.ambient_twists();
        let ambient_br: Vec<i64> = ambient.iter().map(|&t| t * q).collect();
        let q0_br = q0.bracket(q, 1);
        let din_br = self.delta_in().map(|d| d.bracket(q, 1));
        let mut theta = PolyCols {
            row_twists: q0_br.col_twists.clone(),
            col_twists: q0.col_twists.clone(),
            cols: Vec::new(),
        };
        for (a, ga) in q0.cols.iter().enumerate() {
            let da = q0.col_twists[a];
            let piece = Piece::new(&self.ring, &ambient_br, da);
            // ψ(g_a): multiply component S by lcm_S^(p−1).
            let psi: Vec<Polynomial> = ga
                .iter()
                .enumerate()
                .map(|(s, comp)| {
                    let lcm_s = subset_lcm(&self.ring, &self.taylor.gens, self.taylor.stage_masks[self.t1][s]);
                    comp.scale(&lcm_s.pow_scale(p - 1), 1)
                })
                .collect();
            let target = piece.vectorize(&psi);
            // Expansion columns: monomial multiples of bracketed generators
            // first, then the bracketed image slack.
            let mut cols: Vec<Vec<u32>> = Vec::new();
            let mut col_info: Vec<(usize, Monomial)> = Vec::new();
            for (b, gb) in q0_br.cols.iter().enumerate() {
                let db = q0_br.col_twists[b];
                for mono in self.ring.monomials_of_degree(da - db) {
                    let scaled: Vec<Polynomial> = gb.iter().map(|p| p.scale(&mono, 1)).collect();
                    cols.push(piece.vectorize(&scaled));
                    col_info.push((b, mono));
                }
            }
            let n_gen_cols = cols.len();
            if let Some(im) = &din_br {
                cols.extend(im.multiples_at(&self.ring, &piece, da));
            }
            let x = solve_columns(p, piece.dim(), &cols, &target)?;
            let mut col = vec![Polynomial::zero(&self.ring); q0.ncols()];
            for (k, &coeff) in x[..n_gen_cols].iter().enumerate() {
                if coeff != 0 {
                    let (b, mono) = &col_info[k];
                    col[*b] = col[*b]
                        .add(&Polynomial::monomial_term(&self.ring, mono.clone(), coeff));
                }
            }
            theta.cols.push(col);
        }
        Some(theta)
    }

    /// Solve for θ_k over θ_{k−1}: D^\[p\]_k θ_k = θ_{k−1} D_k.
    fn theta_step(&self, dk: &PolyCols, theta_prev: &PolyCols) -> Option<PolyCols> {
        let p = self.p;
        let q = p as i64;
        let dk_br = dk.bracket(q, 1);
        let mut theta = PolyCols {
            row_twists: dk_br.col_twists.clone(),
            col_twists: dk.col_twists.clone(),
            cols: Vec::new(),
        };
        for (a, col_a) in dk.cols.iter().enumerate() {
            let da = dk.col_twists[a];
            // RHS = θ_{k−1} · (D_k column a) over the bracketed previous stage.
            let nrows_br = theta_prev.row_twists.len();
            let mut rhs = vec![Polynomial::zero(&self.ring); nrows_br];
            for (b, e) in col_a.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                for (bp, f) in theta_prev.cols[b].iter().enumerate() {
                    rhs[bp] = rhs[bp].add(&f.mul(e).expect("same ring"));
                }
            }
            let piece = Piece::new(&self.ring, &theta_prev.row_twists, da);
            let target = piece.vectorize(&rhs);
            let mut cols: Vec<Vec<u32>> = Vec::new();
            let mut col_info: Vec<(usize, Monomial)> = Vec::new();
            for (b, gb) in dk_br.cols.iter().enumerate() {
                let db = dk_br.col_twists[b];
                for mono in self.ring.monomials_of_degree(da - db) {
                    let scaled: Vec<Polynomial> = gb.iter().map(|p| p.scale(&mono, 1)).collect();
                    cols.push(piece.vectorize(&scaled));
                    col_info.push((b, mono));
                }
            }
            let x = solve_columns(p, piece.dim(), &cols, &target)?;
            let mut col = vec![Polynomial::zero(&self.ring); dk.ncols()];
            for (k, &coeff) in x.iter().enumerate() {
                if coeff != 0 {
                    let (b, mono) = &col_info[k];
                    col[*b] = col[*b]
                        .add(&Polynomial::monomial_term(&self.ring, mono.clone(), coeff));
                }
            }
            theta.cols.push(col);
        }
        Some(theta)
    }

    fn build(&self, stages_needed: usize) -> Option<ColumnStages> {
        let q0 = self.e_generators();
        if q0.ncols() == 0 {
            return Some(ColumnStages { q0, maps: vec![], thetas: vec![] });
        }
        let mut maps: Vec<PolyCols> = Vec::new();
        for k in 1..=stages_needed {
            let (src_twists, src_cols, quotient) = if k == 1 {
                (q0.col_twists.clone(), &q0, self.delta_in())
            } else {
                let prev = &maps[k - 2];
                (prev.col_twists.clone(), prev, None)
            };
            let next = self.kernel_generators(&src_twists, src_cols, quotient.as_ref());
            let stop = next.ncols() == 0;
            maps.push(next);
            if stop {
                break;
            }
        }
        let mut thetas = Vec::new();
        thetas.push(self.theta0(&q0)?);
        for dk in &maps {
            if dk.ncols() == 0 {
                break;
            }
            let next = self.theta_step(dk, thetas.last().unwrap())?;
            thetas.push(next);
        }
        Some(ColumnStages { q0, maps, thetas })
    }
}

impl ColumnStages {
    fn stage_twists(&self, k: usize) -> &[i64] {
        if k == 0 {
            &self.q0.col_twists
        } else if k <= self.maps.len() {
            &self.maps[k - 1].col_twists
        } else {
            &[]
        }
    }

    fn stage_map(&self, k: usize) -> Option<&PolyCols> {
        if k >= 1 && k <= self.maps.len() {
            Some(&self.maps[k - 1])
        } else {
            None
        }
    }
}

/// λ and the iterated-rank sequence for one cell (fixed t2) of a built
/// column; None when the lift data is missing inside the window.
fn cell_lambda(ring: &RingRef, col: &ColumnStages, t2: usize) -> Option<(u64, Vec<usize>)> {
    let p = ring.p();
    let twists = col.stage_twists(t2);
    if twists.is_empty() {
        return Some((0, vec![]));
    }
    let dual_twists: Vec<i64> = twists.iter().map(|&t| -t).collect();
    let piece0 = Piece::new(ring, &dual_twists, 0);
    if piece0.dim() == 0 {
        return Some((0, vec![]));
    }

    // Kernel of D_{t2+1}^∨ in degree 0.
    let ker_vecs: Vec<Vec<u32>> = match col.stage_map(t2 + 1) {
        None => (0..piece0.dim())
            .map(|i| {
                let mut v = vec![0u32; piece0.dim()];
                v[i] = 1;
                v
            })
            .collect(),
        Some(dnext) => {
            let tgt_twists: Vec<i64> = dnext.col_twists.iter().map(|&t| -t).collect();
            let tgt_piece = Piece::new(ring, &tgt_twists, 0);
            let cols: Vec<Vec<u32>> = (0..piece0.dim())
                .map(|i| {
                    let (coord, mono) = &piece0.index[i];
                    // (D^∨ v)_a = Σ_b D[b][a]... here v = mono·e_coord.
                    let img: Vec<Polynomial> = (0..dnext.ncols())
                        .map(|a| dnext.cols[a][*coord].scale(mono, 1))
                        .collect();
                    tgt_piece.vectorize(&img)
                })
                .collect();
            kernel_of_columns(p, tgt_piece.dim(), &cols)
        }
    };

    // Image of D_{t2}^∨ in degree 0.
    let mut im_vecs: Vec<Vec<u32>> = Vec::new();
    if t2 >= 1 {
        if let Some(dt) = col.stage_map(t2) {
            let src_twists: Vec<i64> = dt.row_twists.iter().map(|&t| -t).collect();
            let src_piece = Piece::new(ring, &src_twists, 0);
            for i in 0..src_piece.dim() {
                let (coord, mono) = &src_piece.index[i];
                let img: Vec<Polynomial> = (0..dt.ncols())
                    .map(|a| dt.cols[a][*coord].scale(mono, 1))
                    .collect();
                im_vecs.push(piece0.vectorize(&img));
            }
        }
    }

    // Basis of M_0: image columns first, then kernel columns.
    let mut ech = Echelon::new(p);
    for v in &im_vecs {
        ech.insert(v.clone());
    }
    let mut reps: Vec<Vec<u32>> = Vec::new();
    for v in &ker_vecs {
        if ech.insert(v.clone()) {
            reps.push(v.clone());
        }
    }
    let s = reps.len();
    if s == 0 {
        return Some((0, vec![]));
    }

    // Frobenius matrix on the representatives.
    let theta_t2 = col.thetas.get(t2)?;
    let mut solver_cols = im_vecs.clone();
    solver_cols.extend(reps.iter().cloned());
    let mut f0 = vec![vec![0u32; s]; s];
    for (cidx, rep) in reps.iter().enumerate() {
        let polys = piece0.to_polys(ring, twists.len(), rep);
        let polys_br: Vec<Polynomial> = polys.iter().map(|p0| p0.pow_p(1)).collect();
        // w = θ^∨ (v^[p]): w_b = Σ_{b'} θ[b'][b] · v^[p]_{b'}.
        let mut w = vec![Polynomial::zero(ring); twists.len()];
        for (b, wb) in w.iter_mut().enumerate() {
            for (bp, vb) in polys_br.iter().enumerate() {
                if vb.is_zero() {
                    continue;
                }
                let coeff = &theta_t2.cols[b][bp];
                if !coeff.is_zero() {
                    *wb = wb.add(&coeff.mul(vb).expect("same ring"));
                }
            }
        }
        let wv = piece0.vectorize(&w);
        let x = solve_columns(p, piece0.dim(), &solver_cols, &wv)?;
        for rr in 0..s {
            f0[rr][cidx] = x[im_vecs.len() + rr];
        }
    }
    let seq = rank_sequence_dense(p, &f0);
    let stable = seq.last().copied().unwrap_or(0) as u64;
    Some((stable, seq))
}

// ---------------------------------------------------------------------
// Driver.

fn monomial_generators(cone: &ConeInput) -> Result<Vec<Monomial>> {
    let mut gens = Vec::new();
    for (index, g) in cone.ideal().generators().iter().enumerate() {
        if g.num_terms() != 1 {
            return Err(Error::NonMonomialInput { index, terms: g.num_terms() });
        }
        gens.push(g.lead().unwrap().0.clone());
    }
    Ok(gens)
}

fn table_with_window(
    cone: &ConeInput,
    gens: &[Monomial],
    window: i64,
) -> Option<(Vec<Vec<u64>>, Vec<Vec<Vec<usize>>>)> {
    let ring = cone.ring().clone();
    let taylor = taylor_resolution(&ring, gens).ok()?;
    let n = cone.n();
    let d = cone.d();
    let mut table = vec![vec![0u64; d + 2]; d + 2];
    let mut seqs = vec![vec![Vec::new(); d + 2]; d + 2];
    #[allow(clippy::needless_range_loop)]
    for j in 0..=d + 1 {
        let t1 = n + 1 - j;
        if t1 > taylor.len() {
            continue; // Ext beyond the resolution length vanishes.
        }
        let builder =
            ColumnBuilder { ring: ring.clone(), p: ring.p(), taylor: &taylor, t1, window };
        let max_t2 = n + 1;
        let stages = builder.build(max_t2 + 1)?;
        for i in 0..=d + 1 {
            let t2 = n + 1 - i;
            let (lambda, seq) = cell_lambda(&ring, &stages, t2)?;
            table[i][j] = lambda;
            seqs[i][j] = seq;
        }
    }
    Some((table, seqs))
}

/// Full Lyubeznik table for a monomial ideal, computed through Taylor
/// complexes and dense windowed linear algebra. The window starts at
/// 3(n+1) and doubles until two consecutive windows agree; a hard cap
/// yields OracleInconclusive rather than a possibly wrong answer.
pub fn oracle_lyubeznik_monomial(cone: &ConeInput) -> Result<LyubeznikTable> {
    oracle_lyubeznik_with_ranks(cone).map(|(table, _)| table)
}

/// As above, also returning per-cell iterated-rank sequences of the
/// Frobenius matrix; these are similarity invariants, so they must match
/// the pipeline's sequences exactly.
pub fn oracle_lyubeznik_with_ranks(
    cone: &ConeInput,
) -> Result<(LyubeznikTable, Vec<Vec<Vec<usize>>>)> {
    let gens = monomial_generators(cone)?;
    let base = 3 * (cone.n() as i64 + 1);
    let mut prev: Option<(Vec<Vec<u64>>, Vec<Vec<Vec<usize>>>)> = None;
    for k in 0..4 {
        let window = base << k;
        match table_with_window(cone, &gens, window) {
            None => {
                prev = None;
            }
            Some(result) => {
                if prev.as_ref() == Some(&result) {
                    let (tab, seqs) = result;
                    return Ok((LyubeznikTable { d: cone.d(), entries: tab }, seqs));
                }
                prev = Some(result);
            }
        }
    }
    Err(Error::OracleInconclusive)
}
