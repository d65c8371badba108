//! Alternative embeddings of the same projective scheme, and comparison of
//! invariant tables across them.
//!
//! The Veronese re-embedding is computed as an elimination kernel: one new
//! variable y_α per degree-t monomial x^α (enumerated in descending
//! lexicographic order of exponent tuples, so y0 = x0^t), a block order
//! with the x-block dominant, and selection of the x-free basis elements.
//! Equality of the M_0 tables across embeddings of one scheme is a theorem
//! and is surfaced as a verdict; equality of the λ tables is evidence for
//! the open embedding-independence question and only ever reported.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FpMat;
use crate::groebner::{buchberger, ModuleElement};
use crate::lyubeznik::{compute_tables, ConeInput, TableSet};
use crate::ring::{Ideal, MonoOrder, PolyRingCtx, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Original,
    Veronese { t: u32 },
    LinearAugment,
    CoordinateChange,
}

#[derive(Debug, Clone)]
pub struct EmbeddingPresentation {
    pub cone: ConeInput,
    pub provenance: Provenance,
}

impl EmbeddingPresentation {
    pub fn original(cone: ConeInput) -> EmbeddingPresentation {
        EmbeddingPresentation { cone, provenance: Provenance::Original }
    }
}

/// Degree-t monomial exponent tuples in descending lexicographic order.
fn veronese_exponents(nvars: usize, t: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn fill(exps: &mut Vec<u32>, var: usize, rem: u32, out: &mut Vec<Vec<u32>>) {
        if var + 1 == exps.len() {
            exps[var] = rem;
            out.push(exps.clone());
            exps[var] = 0;
            return;
        }
        // Descending lex: largest exponent on the earliest variable first.
        for e in (0..=rem).rev() {
            exps[var] = e;
            fill(exps, var + 1, rem - e, out);
        }
        exps[var] = 0;
    }
    fill(&mut exps, 0, t, &mut out);
    out
}

fn fresh_names(base: &str, count: usize, taken: &[String]) -> Vec<String> {
    let mut prefix = base.to_string();
    loop {
        let candidate: Vec<String> = (0..count).map(|i| format!("{prefix}{i}")).collect();
        if candidate.iter().all(|n| !taken.contains(n)) {
            return candidate;
        }
        prefix.push('_');
    }
}

/// Defining ideal of the t-uple re-embedding, by elimination.
pub fn veronese_ideal(cone: &ConeInput, t: u32, max_vars: usize) -> Result<ConeInput> {
    assert!(t >= 1);
    let ring = cone.ring();
    let p = ring.p();
    let k = ring.nvars();
    let alphas = veronese_exponents(k, t);
    let nv_new = alphas.len();
    if nv_new > max_vars {
        return Err(Error::ResourceCap {
            what: format!("veronese t={t} needs {nv_new} variables (cap {max_vars})"),
        });
    }
    let y_names = fresh_names("y", nv_new, ring.names());

    // Elimination ring: x-block first (weight 1), y-block after (weight t).
    let mut names = ring.names().to_vec();
    names.extend(y_names.iter().cloned());
    let mut weights = vec![1i64; k];
    weights.extend(std::iter::repeat_n(t as i64, nv_new));
    let elim = PolyRingCtx::with_weights(p, names, weights, MonoOrder::Block { first: k });

    let lift_poly = |g: &Polynomial| -> Polynomial {
        let terms = g
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut exps = m.exps().to_vec();
                exps.extend(std::iter::repeat_n(0u32, nv_new));
                (elim.monomial(exps), *c)
            })
            .collect();
        Polynomial::from_terms(&elim, terms)
    };

    let mut gens: Vec<ModuleElement> = Vec::new();
    for g in cone.ideal().generators() {
        gens.push(ModuleElement::new(&elim, vec![0], vec![lift_poly(g)]));
    }
    for (idx, alpha) in alphas.iter().enumerate() {
        let mut y_exps = vec![0u32; k + nv_new];
        y_exps[k + idx] = 1;
        let mut x_exps = alpha.clone();
        x_exps.extend(std::iter::repeat_n(0u32, nv_new));
        let rel = Polynomial::monomial_term(&elim, elim.monomial(y_exps), 1)
            .sub(&Polynomial::monomial_term(&elim, elim.monomial(x_exps), 1));
        gens.push(ModuleElement::new(&elim, vec![0], vec![rel]));
    }
    let gb = buchberger(&elim, &[0], &gens);

    // x-free basis elements form a basis of the elimination ideal.
    let out_ring = PolyRingCtx::new(p as u64, y_names)?;
    let mut out_gens = Vec::new();
    for e in gb.elements() {
        let poly = &e.comps()[0];
        let x_free = poly.terms().iter().all(|(m, _)| m.exps()[..k].iter().all(|&x| x == 0));
        if !x_free {
            continue;
        }
        let terms = poly
            .terms()
            .iter()
            .map(|(m, c)| (out_ring.monomial(m.exps()[k..].to_vec()), *c))
            .collect();
        out_gens.push(Polynomial::from_terms(&out_ring, terms));
    }
    let ideal = Ideal::new(&out_ring, out_gens)?;
    ConeInput::new(out_ring, ideal)
}

/// Same scheme inside P^(n+1): append a fresh variable and add it to the
/// ideal.
pub fn linear_augment(cone: &ConeInput) -> ConeInput {
    let ring = cone.ring();
    let k = ring.nvars();
    let new_name = (k..)
        .map(|m| format!("x{m}"))
        .find(|n| !ring.names().contains(n))
        .expect("unbounded candidate sequence");
    let mut names = ring.names().to_vec();
    names.push(new_name);
    let new_ring = PolyRingCtx::new(ring.p() as u64, names).expect("valid ring");
    let lift = |g: &Polynomial| -> Polynomial {
        let terms = g
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut exps = m.exps().to_vec();
                exps.push(0);
                (new_ring.monomial(exps), *c)
            })
            .collect();
        Polynomial::from_terms(&new_ring, terms)
    };
    let mut gens: Vec<Polynomial> = cone.ideal().generators().iter().map(lift).collect();
    gens.push(Polynomial::variable(&new_ring, k));
    let ideal = Ideal::new(&new_ring, gens).expect("homogeneous");
    ConeInput::new(new_ring, ideal).expect("same scheme, one more variable")
}

/// Invertible linear change of coordinates `x_i -> sum_j M[i][j]·x_j`.
pub fn coordinate_change(cone: &ConeInput, mat: &FpMat) -> Result<ConeInput> {
    let ring = cone.ring().clone();
    let k = ring.nvars();
    assert_eq!(mat.rows, k);
    assert_eq!(mat.cols, k);
    assert_eq!(mat.p, ring.p());
    if mat.rank() != k {
        return Err(Error::InvalidRing("coordinate change must be invertible".into()));
    }
    let images: Vec<Polynomial> = (0..k)
        .map(|i| {
            let mut acc = Polynomial::zero(&ring);
            for j in 0..k {
                acc = acc.add(&Polynomial::variable(&ring, j).scale_coeff(mat[(i, j)]));
            }
            acc
        })
        .collect();
    let gens: Vec<Polynomial> = cone
        .ideal()
        .generators()
        .iter()
        .map(|g| g.substitute(&ring, &images))
        .collect();
    let ideal = Ideal::new(&ring, gens)?;
    ConeInput::new(ring, ideal)
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingReport {
    pub provenance: Provenance,
    pub ring: String,
    pub ideal: Vec<String>,
    pub d: usize,
    pub tables: TableSet,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub equal: bool,
    pub first_differing_cell: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub inputs: Vec<EmbeddingReport>,
    /// Equality here is forced when the inputs present the same scheme.
    pub m0_verdict: Verdict,
    /// Reported as evidence only; inequality would be a finding, not an error.
    pub lambda_verdict: Verdict,
    /// Number of distinct λ values per cell across the embeddings.
    pub distinct_lambda_values: Vec<Vec<usize>>,
}

impl ComparisonReport {
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        for (idx, e) in self.inputs.iter().enumerate() {
            writeln!(s, "embedding {idx}: {:?} over {}", e.provenance, e.ring).unwrap();
            writeln!(s, "  ideal: [{}]", e.ideal.join(", ")).unwrap();
            writeln!(s, "  d = {}", e.d).unwrap();
        }
        let fmt_verdict = |v: &Verdict| match (v.equal, v.first_differing_cell) {
            (true, _) => "EQUAL".to_string(),
            (false, Some((i, j))) => format!("UNEQUAL (first differing cell ({i},{j}))"),
            (false, None) => "UNEQUAL".to_string(),
        };
        writeln!(s, "m0 tables: {}", fmt_verdict(&self.m0_verdict)).unwrap();
        writeln!(s, "lambda tables: {}", fmt_verdict(&self.lambda_verdict)).unwrap();
        for e in &self.inputs {
            writeln!(s, "rank sequences ({:?}):", e.provenance).unwrap();
            for c in &e.tables.cells {
                if !c.rank_seq.is_empty() {
                    writeln!(s, "  cell ({},{}): {:?}", c.i, c.j, c.rank_seq).unwrap();
                }
            }
        }
        s
    }
}

fn table_verdict(tables: &[&Vec<Vec<u64>>]) -> Verdict {
    let first = tables[0];
    for other in &tables[1..] {
        for i in 0..first.len() {
            for j in 0..first.len() {
                if first[i][j] != other[i][j] {
                    return Verdict { equal: false, first_differing_cell: Some((i, j)) };
                }
            }
        }
    }
    Verdict { equal: true, first_differing_cell: None }
}

/// Tables for every embedding plus equality verdicts. The computed d must
/// agree across inputs; a mismatch signals that they do not present the
/// same scheme.
pub fn compare_invariants(embeddings: &[EmbeddingPresentation]) -> Result<ComparisonReport> {
    assert!(embeddings.len() >= 2, "compare_invariants needs at least two embeddings");
    let d0 = embeddings[0].cone.d() as i64;
    for e in &embeddings[1..] {
        if e.cone.d() as i64 != d0 {
            return Err(Error::DimensionMismatch { left: d0, right: e.cone.d() as i64 });
        }
    }
    let mut inputs = Vec::new();
    for e in embeddings {
        let tables = compute_tables(&e.cone)?;
        inputs.push(EmbeddingReport {
            provenance: e.provenance.clone(),
            ring: format!(
                "F_{}[{}]",
                e.cone.ring().p(),
                e.cone.ring().names().join(",")
            ),
            ideal: e.cone.ideal().generators().iter().map(|g| g.to_string()).collect(),
            d: e.cone.d(),
            tables,
        });
    }
    let m0s: Vec<&Vec<Vec<u64>>> = inputs.iter().map(|e| &e.tables.m0.entries).collect();
    let lambdas: Vec<&Vec<Vec<u64>>> = inputs.iter().map(|e| &e.tables.lambda.entries).collect();
    let m0_verdict = table_verdict(&m0s);
    let lambda_verdict = table_verdict(&lambdas);
    let d = d0 as usize;
    let mut distinct = vec![vec![0usize; d + 2]; d + 2];
    for i in 0..=d + 1 {
        for j in 0..=d + 1 {
            let mut vals: Vec<u64> = lambdas.iter().map(|t| t[i][j]).collect();
            vals.sort_unstable();
            vals.dedup();
            distinct[i][j] = vals.len();
        }
    }
    Ok(ComparisonReport {
        inputs,
        m0_verdict,
        lambda_verdict,
        distinct_lambda_values: distinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(p: u64) -> ConeInput {
        let r = PolyRingCtx::new(p, vec!["x0".into(), "x1".into()]).unwrap();
        ConeInput::new(r.clone(), Ideal::zero(&r)).unwrap()
    }

    #[test]
    fn veronese_identity_reembedding() {
        let r = PolyRingCtx::new(2, vec!["x0".into(), "x1".into()]).unwrap();
        let f = Polynomial::variable(&r, 0);
        let c = ConeInput::new(r.clone(), Ideal::new(&r, vec![f]).unwrap()).unwrap();
        let v = veronese_ideal(&c, 1, 64).unwrap();
        assert_eq!(v.d(), c.d());
        assert_eq!(v.ring().nvars(), 2);
        // Isomorphic copy: one linear generator.
        assert_eq!(v.ideal().generators().len(), 1);
        assert_eq!(v.ideal().generators()[0].to_string(), "y0");
    }

    #[test]
    fn veronese_conic() {
        let c = p1(2);
        let v = veronese_ideal(&c, 2, 64).unwrap();
        assert_eq!(v.ring().nvars(), 3);
        assert_eq!(v.ideal().generators().len(), 1);
        // y0 y2 − y1² (signs vanish over F_2).
        assert_eq!(v.ideal().generators()[0].to_string(), "y1^2 + y0*y2");
        assert_eq!(v.d(), 1);
    }

    #[test]
    fn veronese_twisted_cubic() {
        let c = p1(2);
        let v = veronese_ideal(&c, 3, 64).unwrap();
        assert_eq!(v.ring().nvars(), 4);
        let gens: Vec<String> =
            v.ideal().generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(gens.len(), 3);
        // The three quadrics of the twisted cubic.
        assert!(gens.contains(&"y1^2 + y0*y2".to_string()));
        assert!(gens.contains(&"y2^2 + y1*y3".to_string()));
        assert!(gens.contains(&"y1*y2 + y0*y3".to_string()));
        assert_eq!(v.d(), 1);
    }

    #[test]
    fn veronese_output_is_x_free_by_construction() {
        let r = PolyRingCtx::new(3, vec!["x0".into(), "x1".into(), "x2".into()]).unwrap();
        let f = Polynomial::variable(&r, 0).mul(&Polynomial::variable(&r, 1)).unwrap();
        let c = ConeInput::new(r.clone(), Ideal::new(&r, vec![f]).unwrap()).unwrap();
        let v = veronese_ideal(&c, 2, 64).unwrap();
        // Already in a pure y-ring; names must all be fresh y's.
        assert!(v.ring().names().iter().all(|n| n.starts_with('y')));
        assert_eq!(v.d(), c.d());
    }

    #[test]
    fn veronese_resource_guard() {
        let c = p1(2);
        assert!(matches!(
            veronese_ideal(&c, 9, 5).unwrap_err(),
            Error::ResourceCap { .. }
        ));
    }

    #[test]
    fn linear_augment_examples() {
        let r = PolyRingCtx::new(2, vec!["x0".into(), "x1".into()]).unwrap();
        let f = Polynomial::variable(&r, 0);
        let c = ConeInput::new(r.clone(), Ideal::new(&r, vec![f]).unwrap()).unwrap();
        let a = linear_augment(&c);
        assert_eq!(a.ring().names(), &["x0", "x1", "x2"]);
        assert_eq!(a.ideal().generators().len(), 2);
        assert_eq!(a.d(), c.d());
        let aa = linear_augment(&a);
        assert_eq!(aa.ring().nvars(), 4);
        assert_eq!(aa.ideal().generators().len(), 3);

        let z = linear_augment(&p1(2));
        assert_eq!(z.ideal().generators().len(), 1);
        assert_eq!(z.ideal().generators()[0].to_string(), "x2");
    }

    #[test]
    fn compare_p1_with_conic() {
        let c = p1(2);
        let conic = veronese_ideal(&c, 2, 64).unwrap();
        let report = compare_invariants(&[
            EmbeddingPresentation::original(c),
            EmbeddingPresentation { cone: conic, provenance: Provenance::Veronese { t: 2 } },
        ])
        .unwrap();
        assert!(report.m0_verdict.equal, "{:?}", report.m0_verdict);
        assert!(report.lambda_verdict.equal);
        assert!(report.distinct_lambda_values.iter().flatten().all(|&c| c == 1));
    }

    #[test]
    fn compare_point_with_augment() {
        let r = PolyRingCtx::new(2, vec!["x0".into(), "x1".into()]).unwrap();
        let f = Polynomial::variable(&r, 0);
        let c = ConeInput::new(r.clone(), Ideal::new(&r, vec![f]).unwrap()).unwrap();
        let aug = linear_augment(&c);
        let report = compare_invariants(&[
            EmbeddingPresentation::original(c),
            EmbeddingPresentation { cone: aug, provenance: Provenance::LinearAugment },
        ])
        .unwrap();
        assert!(report.m0_verdict.equal);
        assert!(report.lambda_verdict.equal);
    }

    #[test]
    fn dimension_mismatch_detected() {
        let c1 = p1(2);
        let r = PolyRingCtx::new(2, vec!["x0".into(), "x1".into()]).unwrap();
        let f = Polynomial::variable(&r, 0);
        let c2 = ConeInput::new(r.clone(), Ideal::new(&r, vec![f]).unwrap()).unwrap();
        assert!(matches!(
            compare_invariants(&[
                EmbeddingPresentation::original(c1),
                EmbeddingPresentation::original(c2),
            ])
            .unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn coordinate_change_preserves_table() {
        let r = PolyRingCtx::new(3, vec!["x0".into(), "x1".into(), "x2".into()]).unwrap();
        let f = Polynomial::variable(&r, 0).mul(&Polynomial::variable(&r, 1)).unwrap();
        let c = ConeInput::new(r.clone(), Ideal::new(&r, vec![f]).unwrap()).unwrap();
        // Unipotent change x0 ↦ x0 + 2 x2.
        let mut m = FpMat::identity(3, 3);
        m[(0, 2)] = 2;
        let moved = coordinate_change(&c, &m).unwrap();
        let a = compute_tables(&c).unwrap();
        let b = compute_tables(&moved).unwrap();
        assert_eq!(a.lambda, b.lambda);
        assert_eq!(a.m0, b.m0);
    }
}
