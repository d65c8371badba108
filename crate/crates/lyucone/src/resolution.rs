//! Graded free resolutions of finitely presented modules.
//!
//! Resolutions are built non-minimally by iterated syzygy computation and
//! can be minimalized afterwards by splitting off unit entries; downstream
//! code must not assume minimality. d_t ∘ d_{t+1} = 0 is asserted for every
//! resolution produced.

use crate::field;
use crate::groebner::syzygies;
use crate::matrix::GradedMatrix;
use crate::ring::{Polynomial, RingRef};

/// Generators-and-relations form: the module is coker(relations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub gens_twists: Vec<i64>,
    pub relations: GradedMatrix,
}

impl Presentation {
    pub fn new(gens_twists: Vec<i64>, relations: GradedMatrix) -> Presentation {
        assert_eq!(relations.row_twists(), &gens_twists[..]);
        Presentation { gens_twists, relations }
    }

    /// Presentation of a cyclic quotient R/I.
    pub fn cyclic(ideal: &crate::ring::Ideal) -> Presentation {
        let ring = ideal.ring();
        let cols: Vec<(i64, Vec<Polynomial>)> = ideal
            .generators()
            .iter()
            .map(|g| {
                let d = match g.homogeneity() {
                    crate::ring::Homogeneity::Homogeneous(d) => d,
                    _ => unreachable!("ideal generators are homogeneous and nonzero"),
                };
                (d, vec![g.clone()])
            })
            .collect();
        let relations = GradedMatrix::from_columns(ring, vec![0], cols);
        Presentation { gens_twists: vec![0], relations }
    }

    pub fn ring(&self) -> &RingRef {
        self.relations.ring()
    }

    /// dim_k of the degree-m piece of coker(relations).
    pub fn quotient_degree_dim(&self, m: i64) -> usize {
        let ring = self.ring();
        let ambient = free_degree_basis_size(ring, &self.gens_twists, m);
        if ambient == 0 {
            return 0;
        }
        let span = span_rank_in_degree(ring, &self.relations, m);
        ambient - span
    }
}

/// Number of monomial basis elements of ⊕ R(−a_c) in degree m.
pub fn free_degree_basis_size(ring: &RingRef, twists: &[i64], m: i64) -> usize {
    twists
        .iter()
        .map(|&a| ring.monomials_of_degree(m - a).len())
        .sum()
}

/// Rank of the degree-m piece of the column span of a matrix.
pub fn span_rank_in_degree(ring: &RingRef, a: &GradedMatrix, m: i64) -> usize {
    let basis = enumerate_free_basis(ring, a.row_twists(), m);
    if basis.index.is_empty() {
        return 0;
    }
    let mut cols: Vec<Vec<u32>> = Vec::new();
    for c in 0..a.ncols() {
        let d = a.col_twists()[c];
        let col = a.column(c);
        for mono in ring.monomials_of_degree(m - d) {
            let scaled: Vec<Polynomial> = col.iter().map(|p| p.scale(&mono, 1)).collect();
            cols.push(basis.vectorize(&scaled));
        }
    }
    if cols.is_empty() {
        return 0;
    }
    let rows = basis.index.len();
    let mut m0 = field::FpMat::zeros(ring.p(), rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        m0.set_column(j, col);
    }
    m0.rank()
}

/// Deterministic monomial basis of a free module's degree-m piece.
#[derive(Debug, Clone)]
pub struct FreeDegreeBasis {
    pub index: Vec<(usize, crate::ring::Monomial)>,
    lookup: std::collections::BTreeMap<(usize, Vec<u32>), usize>,
}

impl FreeDegreeBasis {
    pub fn vectorize(&self, comps: &[Polynomial]) -> Vec<u32> {
        let mut v = vec![0u32; self.index.len()];
        for (coord, poly) in comps.iter().enumerate() {
            for (mono, coeff) in poly.terms() {
                let key = (coord, mono.exps().to_vec());
                let idx = *self
                    .lookup
                    .get(&key)
                    .unwrap_or_else(|| panic!("term outside degree piece"));
                v[idx] = *coeff;
            }
        }
        v
    }
}

pub fn enumerate_free_basis(ring: &RingRef, twists: &[i64], m: i64) -> FreeDegreeBasis {
    let mut index = Vec::new();
    for (coord, &a) in twists.iter().enumerate() {
        for mono in ring.monomials_of_degree(m - a) {
            index.push((coord, mono));
        }
    }
    let lookup = index
        .iter()
        .enumerate()
        .map(|(i, (c, m))| ((*c, m.exps().to_vec()), i))
        .collect();
    FreeDegreeBasis { index, lookup }
}

/// d_1, …, d_L with d_t ∘ d_{t+1} = 0 and exactness at every computed step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeResolution {
    diffs: Vec<GradedMatrix>,
}

impl FreeResolution {
    pub(crate) fn from_diffs(diffs: Vec<GradedMatrix>) -> FreeResolution {
        let res = FreeResolution { diffs };
        assert_compositions_zero(&res);
        res
    }

    pub fn ring(&self) -> &RingRef {
        self.diffs[0].ring()
    }

    pub fn len(&self) -> usize {
        self.diffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diffs.is_empty()
    }

    /// d_t for 1 ≤ t ≤ len.
    pub fn diff(&self, t: usize) -> &GradedMatrix {
        &self.diffs[t - 1]
    }

    /// Twists of F_t (t = 0 is the presentation's generator row).
    pub fn twists(&self, t: usize) -> &[i64] {
        if t == 0 {
            self.diffs[0].row_twists()
        } else {
            self.diffs[t - 1].col_twists()
        }
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        let mut b = vec![self.twists(0).len()];
        for t in 1..=self.len() {
            b.push(self.twists(t).len());
        }
        b
    }

    /// The presentation matrix of the resolved module.
    pub fn augmentation(&self) -> &GradedMatrix {
        &self.diffs[0]
    }
}

/// Resolves coker(P) to homological degree `length` by iterated syzygies.
pub fn free_resolution(p: &Presentation, length: usize) -> FreeResolution {
    assert!(length >= 1);
    let mut diffs = Vec::with_capacity(length);
    diffs.push(p.relations.clone());
    for t in 1..length {
        let next = syzygies(&diffs[t - 1]);
        diffs.push(next);
    }
    FreeResolution::from_diffs(diffs)
}

fn assert_compositions_zero(res: &FreeResolution) {
    for t in 1..res.len() {
        assert!(
            res.diff(t).compose(res.diff(t + 1)).expect("same ring").is_zero(),
            "d_{t} ∘ d_{} != 0",
            t + 1
        );
    }
}

/// Homotopy-equivalent resolution with no unit entries in any differential.
pub fn minimalize(res: &FreeResolution) -> FreeResolution {
    minimalize_from(res, 1)
}

/// Minimalize cancelling units only in d_t for t ≥ first_stage. With
/// first_stage = 2 the presentation row F_0 is left untouched, which
/// downstream comparison maps expressed over those generators rely on.
pub fn minimalize_from(res: &FreeResolution, first_stage: usize) -> FreeResolution {
    let ring = res.ring().clone();
    let p = ring.p();
    let mut ds: Vec<GradedMatrix> = res.diffs.clone();

    while let Some((t, r, c)) =
        find_unit(&ds[first_stage - 1..]).map(|(t, r, c)| (t + first_stage - 1, r, c))
    {
        let u = constant_of(ds[t].entry(r, c)).expect("unit entry");
        let u_inv = field::inv(p, u);

        // Clear row r by column operations; mirror on the next differential.
        let lambdas: Vec<(usize, Polynomial)> = (0..ds[t].ncols())
            .filter(|&j| j != c && !ds[t].entry(r, j).is_zero())
            .map(|j| (j, ds[t].entry(r, j).scale_coeff(u_inv)))
            .collect();
        for (j, lambda) in &lambdas {
            for i in 0..ds[t].nrows() {
                let delta = ds[t].entry(i, c).mul(lambda).expect("same ring");
                let new = ds[t].entry(i, *j).sub(&delta);
                *ds[t].entry_mut(i, *j) = new;
            }
            if t + 1 < ds.len() {
                for col in 0..ds[t + 1].ncols() {
                    let delta = lambda.mul(ds[t + 1].entry(*j, col)).expect("same ring");
                    let new = ds[t + 1].entry(c, col).add(&delta);
                    *ds[t + 1].entry_mut(c, col) = new;
                }
            }
        }
        // Clear column c by row operations; mirror on the previous one.
        let mus: Vec<(usize, Polynomial)> = (0..ds[t].nrows())
            .filter(|&i| i != r && !ds[t].entry(i, c).is_zero())
            .map(|i| (i, ds[t].entry(i, c).scale_coeff(u_inv)))
            .collect();
        for (i, mu) in &mus {
            // Row r is now u·e_c, so the op only touches column c.
            let delta = mu.mul(ds[t].entry(r, c)).expect("same ring");
            let new = ds[t].entry(*i, c).sub(&delta);
            *ds[t].entry_mut(*i, c) = new;
            if t > 0 {
                for row in 0..ds[t - 1].nrows() {
                    let delta = ds[t - 1].entry(row, *i).mul(mu).expect("same ring");
                    let new = ds[t - 1].entry(row, r).add(&delta);
                    *ds[t - 1].entry_mut(row, r) = new;
                }
            }
        }

        // Drop the split-off summand.
        if t + 1 < ds.len() {
            for col in 0..ds[t + 1].ncols() {
                assert!(ds[t + 1].entry(c, col).is_zero(), "row of cancelled column not zero");
            }
            ds[t + 1] = delete_row(&ds[t + 1], c);
        }
        if t > 0 {
            for row in 0..ds[t - 1].nrows() {
                assert!(ds[t - 1].entry(row, r).is_zero(), "column of cancelled row not zero");
            }
            ds[t - 1] = delete_col(&ds[t - 1], r);
        }
        ds[t] = delete_row_col(&ds[t], r, c);
    }

    FreeResolution::from_diffs(ds)
}

fn find_unit(ds: &[GradedMatrix]) -> Option<(usize, usize, usize)> {
    for (t, d) in ds.iter().enumerate() {
        for r in 0..d.nrows() {
            for c in 0..d.ncols() {
                if constant_of(d.entry(r, c)).is_some() {
                    return Some((t, r, c));
                }
            }
        }
    }
    None
}

fn constant_of(p: &Polynomial) -> Option<u32> {
    match p.lead() {
        Some((m, c)) if m.is_one() => Some(c),
        _ => None,
    }
}

fn delete_row(m: &GradedMatrix, r: usize) -> GradedMatrix {
    let rows: Vec<usize> = (0..m.nrows()).filter(|&i| i != r).collect();
    let cols: Vec<usize> = (0..m.ncols()).collect();
    m.submatrix(&rows, &cols)
}

fn delete_col(m: &GradedMatrix, c: usize) -> GradedMatrix {
    let rows: Vec<usize> = (0..m.nrows()).collect();
    let cols: Vec<usize> = (0..m.ncols()).filter(|&j| j != c).collect();
    m.submatrix(&rows, &cols)
}

fn delete_row_col(m: &GradedMatrix, r: usize, c: usize) -> GradedMatrix {
    let rows: Vec<usize> = (0..m.nrows()).filter(|&i| i != r).collect();
    let cols: Vec<usize> = (0..m.ncols()).filter(|&j| j != c).collect();
    m.submatrix(&rows, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{column_gb, normal_form, ModuleElement};
    use crate::ring::{Ideal, PolyRingCtx, Polynomial};

    fn ring(p: u64, names: &[&str]) -> RingRef {
        PolyRingCtx::new(p, names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn ideal(r: &RingRef, gens: Vec<Polynomial>) -> Ideal {
        Ideal::new(r, gens).unwrap()
    }

    /// ker d_t = im d_{t+1}: both inclusions, degree-exact.
    fn assert_exact(res: &FreeResolution) {
        for t in 1..res.len() {
            let ker = syzygies(res.diff(t));
            let gb = column_gb(res.diff(t + 1));
            for c in 0..ker.ncols() {
                let v = ModuleElement::new(res.ring(), ker.row_twists().to_vec(), ker.column(c));
                assert!(normal_form(&v, &gb).is_zero(), "not exact at step {t}");
            }
        }
    }

    fn hilbert_checks(p: &Presentation, res: &FreeResolution, max_deg: i64) {
        let ring = p.ring();
        for m in 0..=max_deg {
            let mut alt: i64 = free_degree_basis_size(ring, res.twists(0), m) as i64;
            let mut sign = -1i64;
            for t in 1..=res.len() {
                alt += sign * free_degree_basis_size(ring, res.twists(t), m) as i64;
                sign = -sign;
            }
            assert_eq!(alt, p.quotient_degree_dim(m) as i64, "Hilbert mismatch at degree {m}");
        }
    }

    #[test]
    fn koszul_two_variables() {
        let r = ring(2, &["x0", "x1"]);
        let i = ideal(&r, vec![Polynomial::variable(&r, 0), Polynomial::variable(&r, 1)]);
        let pres = Presentation::cyclic(&i);
        let res = free_resolution(&pres, 3);
        assert_eq!(res.twists(0), &[0]);
        assert_eq!(res.twists(1), &[1, 1]);
        assert_eq!(res.twists(2), &[2]);
        assert_eq!(res.twists(3), &[] as &[i64]);
        assert_exact(&res);
        hilbert_checks(&pres, &res, 8);
    }

    #[test]
    fn principal_ideal() {
        let r = ring(2, &["x0", "x1"]);
        let f = Polynomial::variable(&r, 0).mul(&Polynomial::variable(&r, 1)).unwrap();
        let pres = Presentation::cyclic(&ideal(&r, vec![f]));
        let res = free_resolution(&pres, 2);
        assert_eq!(res.twists(1), &[2]);
        assert_eq!(res.twists(2), &[] as &[i64]);
        hilbert_checks(&pres, &res, 8);
    }

    fn twisted_cubic(r: &RingRef) -> Ideal {
        let m = |e: &[u32]| Polynomial::monomial_term(r, r.monomial(e.to_vec()), 1);
        let g1 = m(&[1, 0, 1, 0]).sub(&m(&[0, 2, 0, 0]));
        let g2 = m(&[0, 1, 0, 1]).sub(&m(&[0, 0, 2, 0]));
        let g3 = m(&[1, 0, 0, 1]).sub(&m(&[0, 1, 1, 0]));
        ideal(r, vec![g1, g2, g3])
    }

    #[test]
    fn twisted_cubic_minimal_betti() {
        let r = ring(2, &["x0", "x1", "x2", "x3"]);
        let pres = Presentation::cyclic(&twisted_cubic(&r));
        let res = free_resolution(&pres, 5);
        let min = minimalize(&res);
        assert_eq!(min.betti_numbers(), vec![1, 3, 2, 0, 0, 0]);
        assert_eq!(min.twists(1), &[2, 2, 2]);
        assert_eq!(min.twists(2), &[3, 3]);
        hilbert_checks(&pres, &min, 8);
        assert_exact(&min);
        // Idempotent.
        assert_eq!(minimalize(&min), min);
    }

    #[test]
    fn minimalize_keeps_minimal_input() {
        let r = ring(2, &["x0", "x1"]);
        let pres = Presentation::cyclic(&ideal(
            &r,
            vec![Polynomial::variable(&r, 0), Polynomial::variable(&r, 1)],
        ));
        let res = free_resolution(&pres, 3);
        assert_eq!(minimalize(&res), res);
    }

    #[test]
    fn minimalize_cancels_identity_summand() {
        let r = ring(3, &["x0", "x1"]);
        let x0 = Polynomial::variable(&r, 0);
        let x1 = Polynomial::variable(&r, 1);
        // Pad the Koszul d1 with an identity block: F0 = R ⊕ R(-5),
        // F1 = R(-1)^2 ⊕ R(-5), d1 = diag([x0 x1], [1]).
        let d1 = GradedMatrix::new(
            &r,
            vec![0, 5],
            vec![1, 1, 5],
            vec![
                x0.clone(),
                x1.clone(),
                Polynomial::zero(&r),
                Polynomial::zero(&r),
                Polynomial::zero(&r),
                Polynomial::one(&r),
            ],
        );
        let d2 = GradedMatrix::new(
            &r,
            vec![1, 1, 5],
            vec![2],
            vec![x1.clone(), x0.neg(), Polynomial::zero(&r)],
        );
        let res = FreeResolution::from_diffs(vec![d1, d2]);
        let min = minimalize(&res);
        assert_eq!(min.betti_numbers(), vec![1, 2, 1]);
        assert_eq!(min.twists(1), &[1, 1]);
    }

    #[test]
    fn zero_ideal_resolution() {
        let r = ring(2, &["x0", "x1"]);
        let pres = Presentation::cyclic(&Ideal::zero(&r));
        let res = free_resolution(&pres, 3);
        assert_eq!(res.betti_numbers(), vec![1, 0, 0, 0]);
        hilbert_checks(&pres, &res, 4);
    }

    #[test]
    fn minimalization_preserves_quotient_dims() {
        let r = ring(2, &["x0", "x1"]);
        let m = |e: &[u32]| Polynomial::monomial_term(&r, r.monomial(e.to_vec()), 1);
        let pres = Presentation::cyclic(&ideal(&r, vec![m(&[2, 0]), m(&[1, 1])]));
        let res = free_resolution(&pres, 3);
        let min = minimalize(&res);
        for deg in 0..=6 {
            assert_eq!(
                pres.quotient_degree_dim(deg),
                Presentation::new(min.twists(0).to_vec(), min.augmentation().clone())
                    .quotient_degree_dim(deg)
            );
        }
    }
}
