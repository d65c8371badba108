//! Lyubeznik tables and M_0-dimension tables for a cone input.
//!
//! For X = Proj(R/I) ⊂ P^n with d = dim X, the table entry λ_{i,j} for
//! 0 ≤ i, j ≤ d+1 is the stable dimension of the Frobenius matrix on the
//! degree-zero piece of Ext^{n+1−i}(Ext^{n+1−j}(R/I, R), R), and the
//! companion table records dim (M_0)_{i,j} itself, an embedding-independent
//! upper bound for λ_{i,j}. Shared sub-results (the resolution of R/I, its
//! bracket, the comparison chain map, and per-column data) are built once;
//! cells of one column reuse the column's resolutions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius::ConePipeline;
use crate::groebner::quotient_dimension;
use crate::ring::{Ideal, RingRef};
use crate::stable::{rank_sequence, stable_dimension};

/// Validated input: homogeneous proper ideal with nonempty Proj.
/// d is recomputed from a Gröbner basis, never trusted from metadata.
#[derive(Debug, Clone)]
pub struct ConeInput {
    ring: RingRef,
    ideal: Ideal,
    n: usize,
    d: usize,
}

impl ConeInput {
    pub fn new(ring: RingRef, ideal: Ideal) -> Result<ConeInput> {
        if **ideal.ring() != *ring {
            return Err(Error::ContextMismatch);
        }
        let dim = quotient_dimension(&ideal)?;
        if dim == 0 {
            return Err(Error::EmptyScheme);
        }
        let n = ring.nvars() - 1;
        Ok(ConeInput { ring, ideal, n, d: dim - 1 })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// Projective ambient dimension: nvars − 1.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of X = Proj(R/I).
    pub fn d(&self) -> usize {
        self.d
    }
}

/// Krull dimension of R/I.
pub fn krull_dimension(ideal: &Ideal) -> Result<usize> {
    quotient_dimension(ideal)
}

/// (d+2) × (d+2) table of λ_{i,j}, rows indexed by i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LyubeznikTable {
    pub d: usize,
    pub entries: Vec<Vec<u64>>,
}

/// (d+2) × (d+2) table of dim_k (M_0)_{i,j}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct M0Table {
    pub d: usize,
    pub entries: Vec<Vec<u64>>,
}

/// Everything one cell yields: both table entries plus the iterated-rank
/// sequence of the Frobenius matrix (recorded as comparison evidence).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub i: usize,
    pub j: usize,
    pub lambda: u64,
    pub m0: u64,
    pub rank_seq: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableSet {
    pub d: usize,
    /// Computed inclusive ranges; cells outside them are left at zero.
    pub i_range: (usize, usize),
    pub j_range: (usize, usize),
    pub lambda: LyubeznikTable,
    pub m0: M0Table,
    pub cells: Vec<CellReport>,
}

/// Inclusive cell ranges for partial table computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellFilter {
    pub i0: usize,
    pub i1: usize,
    pub j0: usize,
    pub j1: usize,
}

impl CellFilter {
    pub fn full(d: usize) -> CellFilter {
        CellFilter { i0: 0, i1: d + 1, j0: 0, j1: d + 1 }
    }

    fn clamp(&self, d: usize) -> CellFilter {
        CellFilter {
            i0: self.i0.min(d + 1),
            i1: self.i1.min(d + 1),
            j0: self.j0.min(d + 1),
            j1: self.j1.min(d + 1),
        }
    }
}

fn column_cells(
    pipeline: &ConePipeline,
    j: usize,
    i0: usize,
    i1: usize,
) -> Vec<CellReport> {
    let col = pipeline.column(j);
    let mut out = Vec::with_capacity(i1 + 1 - i0);
    for i in i0..=i1 {
        let cell = pipeline.cell(&col, i);
        let s = stable_dimension(&cell.endo) as u64;
        let seq = rank_sequence(&cell.endo);
        assert!(s <= cell.m0_dim as u64);
        out.push(CellReport { i, j, lambda: s, m0: cell.m0_dim as u64, rank_seq: seq });
    }
    out
}

/// Both tables over the filtered cell range; cells outside the filter stay
/// zero. `minimal` picks minimalized resolutions in the pipeline (the
/// tables are invariant under the choice). With `jobs > 1`, columns are
/// fanned out to scoped worker threads; assembly is by index, so the result
/// does not depend on completion order.
pub fn compute_tables_jobs(
    cone: &ConeInput,
    minimal: bool,
    filter: CellFilter,
    jobs: usize,
) -> Result<TableSet> {
    let pipeline = ConePipeline::new(&cone.ideal, minimal)?;
    debug_assert_eq!(pipeline.d, cone.d);
    let d = cone.d;
    let filter = filter.clamp(d);
    let js: Vec<usize> = (filter.j0..=filter.j1).collect();

    let mut column_reports: Vec<Vec<CellReport>> = Vec::new();
    if jobs <= 1 || js.len() <= 1 {
        for &j in &js {
            column_reports.push(column_cells(&pipeline, j, filter.i0, filter.i1));
        }
    } else {
        let workers = jobs.min(js.len());
        let mut slots: Vec<Option<Vec<CellReport>>> = vec![None; js.len()];
        std::thread::scope(|scope| {
            let pipeline = &pipeline;
            let js = &js;
            let mut handles = Vec::new();
            for w in 0..workers {
                handles.push(scope.spawn(move || {
                    let mut mine = Vec::new();
                    for (idx, &j) in js.iter().enumerate() {
                        if idx % workers == w {
                            mine.push((idx, column_cells(pipeline, j, filter.i0, filter.i1)));
                        }
                    }
                    mine
                }));
            }
            for h in handles {
                for (idx, reports) in h.join().expect("worker panicked") {
                    slots[idx] = Some(reports);
                }
            }
        });
        column_reports = slots.into_iter().map(|s| s.expect("all columns computed")).collect();
    }

    let mut lambda = vec![vec![0u64; d + 2]; d + 2];
    let mut m0 = vec![vec![0u64; d + 2]; d + 2];
    let mut cells = Vec::new();
    for reports in column_reports {
        for c in reports {
            lambda[c.i][c.j] = c.lambda;
            m0[c.i][c.j] = c.m0;
            cells.push(c);
        }
    }
    cells.sort_by_key(|c| (c.i, c.j));
    Ok(TableSet {
        d,
        i_range: (filter.i0, filter.i1),
        j_range: (filter.j0, filter.j1),
        lambda: LyubeznikTable { d, entries: lambda },
        m0: M0Table { d, entries: m0 },
        cells,
    })
}

pub fn compute_tables_filtered(
    cone: &ConeInput,
    minimal: bool,
    filter: CellFilter,
) -> Result<TableSet> {
    compute_tables_jobs(cone, minimal, filter, 1)
}

pub fn compute_tables(cone: &ConeInput) -> Result<TableSet> {
    compute_tables_filtered(cone, true, CellFilter::full(cone.d))
}

/// λ_{i,j}; out-of-range cells are 0 by convention.
pub fn lyubeznik_number(cone: &ConeInput, i: i64, j: i64) -> Result<u64> {
    let max = cone.d as i64 + 1;
    if i < 0 || j < 0 || i > max || j > max {
        return Ok(0);
    }
    let set = compute_tables_filtered(
        cone,
        true,
        CellFilter { i0: i as usize, i1: i as usize, j0: j as usize, j1: j as usize },
    )?;
    Ok(set.lambda.entries[i as usize][j as usize])
}

pub fn lyubeznik_table(cone: &ConeInput) -> Result<LyubeznikTable> {
    Ok(compute_tables(cone)?.lambda)
}

/// dim (M_0)_{i,j}; out-of-range cells are 0 by convention.
pub fn m0_dimension(cone: &ConeInput, i: i64, j: i64) -> Result<u64> {
    let max = cone.d as i64 + 1;
    if i < 0 || j < 0 || i > max || j > max {
        return Ok(0);
    }
    let set = compute_tables_filtered(
        cone,
        true,
        CellFilter { i0: i as usize, i1: i as usize, j0: j as usize, j1: j as usize },
    )?;
    Ok(set.m0.entries[i as usize][j as usize])
}

pub fn m0_table(cone: &ConeInput) -> Result<M0Table> {
    Ok(compute_tables(cone)?.m0)
}
