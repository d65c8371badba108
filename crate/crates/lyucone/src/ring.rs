//! The standard-graded polynomial ring R = F_p[x_0,…,x_n] and its elements.
//!
//! Monomials are dense exponent tuples with a cached (weighted) degree.
//! Polynomials keep their terms sorted descending in the ring's monomial
//! order, with no zero coefficients, so equality is structural and every
//! operation is deterministic. The only orders in play are grevlex (the
//! single order supported for ideal bases) and a block elimination order
//! used internally for Veronese kernels.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field;

/// Monomial order attached to a ring context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonoOrder {
    /// Graded reverse lexicographic.
    Grevlex,
    /// Block order eliminating the first `first` variables: grevlex on the
    /// leading block, ties broken by grevlex on the rest.
    Block { first: usize },
}

#[derive(Debug, PartialEq, Eq)]
pub struct PolyRingCtx {
    p: u32,
    names: Vec<String>,
    weights: Vec<i64>,
    order: MonoOrder,
}

pub type RingRef = Arc<PolyRingCtx>;

impl PolyRingCtx {
    /// Standard ring: every variable has degree 1, grevlex order.
    pub fn new(p: u64, names: Vec<String>) -> Result<RingRef> {
        if !field::is_prime(p) {
            return Err(Error::NonPrimeField { p });
        }
        if names.is_empty() {
            return Err(Error::InvalidRing("need at least one variable".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(Error::InvalidRing(format!("duplicate variable name {n}")));
            }
        }
        let weights = vec![1; names.len()];
        Ok(Arc::new(PolyRingCtx { p: p as u32, names, weights, order: MonoOrder::Grevlex }))
    }

    /// Weighted ring with an explicit order; used for elimination.
    pub(crate) fn with_weights(
        p: u32,
        names: Vec<String>,
        weights: Vec<i64>,
        order: MonoOrder,
    ) -> RingRef {
        assert_eq!(names.len(), weights.len());
        assert!(weights.iter().all(|&w| w >= 1));
        Arc::new(PolyRingCtx { p, names, weights, order })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> MonoOrder {
        self.order
    }

    pub fn is_standard(&self) -> bool {
        self.order == MonoOrder::Grevlex && self.weights.iter().all(|&w| w == 1)
    }

    pub fn monomial(&self, exps: Vec<u32>) -> Monomial {
        assert_eq!(exps.len(), self.nvars(), "exponent tuple length mismatch");
        let deg = exps.iter().zip(&self.weights).map(|(&e, &w)| e as i64 * w).sum();
        Monomial { exps, deg }
    }

    pub fn one_monomial(&self) -> Monomial {
        self.monomial(vec![0; self.nvars()])
    }

    pub fn mono_lcm(&self, a: &Monomial, b: &Monomial) -> Monomial {
        let exps = a.exps.iter().zip(&b.exps).map(|(&x, &y)| x.max(y)).collect();
        self.monomial(exps)
    }

    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.order {
            MonoOrder::Grevlex => grevlex_cmp(a, b),
            MonoOrder::Block { first } => {
                let block = grevlex_cmp_slice(&a.exps[..first], &b.exps[..first]);
                if block != Ordering::Equal {
                    return block;
                }
                grevlex_cmp_slice(&a.exps[first..], &b.exps[first..])
            }
        }
    }

    /// All monomials of a given (weight-1) degree, descending in grevlex.
    pub fn monomials_of_degree(&self, deg: i64) -> Vec<Monomial> {
        debug_assert!(self.weights.iter().all(|&w| w == 1));
        if deg < 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.nvars()];
        fill_monomials(self, &mut exps, 0, deg as u32, &mut out);
        out.sort_unstable_by(|a, b| self.cmp_mono(b, a));
        out
    }
}

fn fill_monomials(
    ring: &PolyRingCtx,
    exps: &mut Vec<u32>,
    var: usize,
    remaining: u32,
    out: &mut Vec<Monomial>,
) {
    if var + 1 == exps.len() {
        exps[var] = remaining;
        out.push(ring.monomial(exps.clone()));
        exps[var] = 0;
        return;
    }
    for e in 0..=remaining {
        exps[var] = e;
        fill_monomials(ring, exps, var + 1, remaining - e, out);
    }
    exps[var] = 0;
}

/// Dense exponent tuple with cached weighted degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
    deg: i64,
}

impl Monomial {
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> i64 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(&a, &b)| a + b).collect();
        Monomial { exps, deg: self.deg + other.deg }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    /// other / self, when it divides.
    pub fn quotient_into(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps = other.exps.iter().zip(&self.exps).map(|(&a, &b)| a - b).collect();
        Some(Monomial { exps, deg: other.deg - self.deg })
    }

    pub fn pow_scale(&self, factor: u32) -> Monomial {
        let exps = self.exps.iter().map(|&e| e * factor).collect();
        Monomial { exps, deg: self.deg * factor as i64 }
    }
}

/// Grevlex: total degree first; ties broken right to left, the smaller
/// exponent at the last differing position winning.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    grevlex_cmp_slice(&a.exps, &b.exps)
}

/// Plain lexicographic comparison of exponent tuples.
pub fn lex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.exps.cmp(&b.exps)
}

fn grevlex_cmp_slice(a: &[u32], b: &[u32]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    for (x, y) in a.iter().zip(b.iter()).rev() {
        match x.cmp(y) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// Whether a polynomial is zero, homogeneous of one degree, or mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(i64),
    Mixed,
}

/// Element of R: terms sorted descending in the ring's order.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<(Monomial, u32)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Polynomial {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &RingRef, c: u32) -> Polynomial {
        let c = c % ring.p;
        if c == 0 {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(ring.one_monomial(), c)] }
    }

    pub fn one(ring: &RingRef) -> Polynomial {
        Self::constant(ring, 1)
    }

    pub fn variable(ring: &RingRef, i: usize) -> Polynomial {
        let mut exps = vec![0u32; ring.nvars()];
        exps[i] = 1;
        Self::from_terms(ring, vec![(ring.monomial(exps), 1)])
    }

    pub fn monomial_term(ring: &RingRef, mono: Monomial, coeff: u32) -> Polynomial {
        Self::from_terms(ring, vec![(mono, coeff)])
    }

    /// Normalizing constructor: sorts descending, merges, drops zeros.
    pub fn from_terms(ring: &RingRef, mut terms: Vec<(Monomial, u32)>) -> Polynomial {
        let p = ring.p;
        terms.sort_unstable_by(|a, b| ring.cmp_mono(&b.0, &a.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % p;
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => {
                    *lc = field::add(p, *lc, c);
                }
                _ => out.push((m, c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        Polynomial { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<(&Monomial, u32)> {
        self.terms.first().map(|(m, c)| (m, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let Some((first, _)) = self.terms.first() else {
            return Homogeneity::Zero;
        };
        let d = first.degree();
        if self.terms.iter().all(|(m, _)| m.degree() == d) {
            Homogeneity::Homogeneous(d)
        } else {
            Homogeneity::Mixed
        }
    }

    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        match self.homogeneity() {
            Homogeneity::Zero => true,
            Homogeneity::Homogeneous(e) => e == d,
            Homogeneity::Mixed => false,
        }
    }

    fn check_ctx(&self, other: &Polynomial) -> Result<()> {
        if *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_ctx(other).expect("polynomial addition across rings");
        let p = self.ring.p;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < self.terms.len() && j < other.terms.len() {
            match self.ring.cmp_mono(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field::add(p, self.terms[i].1, other.terms[j].1);
                    if c != 0 {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        let p = self.ring.p;
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), field::neg(p, *c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    /// Multiply by a single term.
    pub fn scale(&self, mono: &Monomial, coeff: u32) -> Polynomial {
        let p = self.ring.p;
        let coeff = coeff % p;
        if coeff == 0 {
            return Self::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.mul(mono), field::mul(p, *c, coeff)))
            .collect();
        // A term multiple preserves strict descending order.
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale_coeff(&self, coeff: u32) -> Polynomial {
        self.scale(&self.ring.one_monomial(), coeff)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ctx(other)?;
        let p = self.ring.p;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), field::mul(p, *ca, *cb)));
            }
        }
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    /// a^(p^e) by the characteristic-p fast path: exponents scale by p^e and
    /// each coefficient is raised to p^e (the identity on F_p).
    pub fn pow_p(&self, e: u32) -> Polynomial {
        let p = self.ring.p;
        let q_u64 = (p as u64).pow(e);
        let q = u32::try_from(q_u64).expect("p^e overflows u32");
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.pow_scale(q), field::pow(p, *c, q_u64)))
            .collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            e >>= 1;
        }
        acc
    }

    /// Substitute `images[i]` for variable i. Images live in `target`.
    pub fn substitute(&self, target: &RingRef, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ring.nvars());
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, *c);
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e)).expect("same ring");
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || m.is_one() {
                factors.push(format!("{c}"));
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.names[i].clone()),
                    _ => factors.push(format!("{}^{e}", self.ring.names[i])),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Homogeneous ideal, given by (not necessarily minimal) generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    ring: RingRef,
    gens: Vec<Polynomial>,
}

impl Ideal {
    /// Drops zero generators; every remaining generator must be homogeneous.
    pub fn new(ring: &RingRef, gens: Vec<Polynomial>) -> Result<Ideal> {
        let mut kept = Vec::new();
        for (index, g) in gens.into_iter().enumerate() {
            if **g.ring() != **ring {
                return Err(Error::ContextMismatch);
            }
            match g.homogeneity() {
                Homogeneity::Zero => {}
                Homogeneity::Homogeneous(_) => kept.push(g),
                Homogeneity::Mixed => return Err(Error::NonHomogeneous { index }),
            }
        }
        Ok(Ideal { ring: ring.clone(), gens: kept })
    }

    pub fn zero(ring: &RingRef) -> Ideal {
        Ideal { ring: ring.clone(), gens: Vec::new() }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring2() -> RingRef {
        PolyRingCtx::new(2, vec!["x0".into(), "x1".into()]).unwrap()
    }

    fn ring3() -> RingRef {
        PolyRingCtx::new(3, vec!["x0".into(), "x1".into()]).unwrap()
    }

    fn var(r: &RingRef, i: usize) -> Polynomial {
        Polynomial::variable(r, i)
    }

    #[test]
    fn freshmans_dream_char2() {
        let r = ring2();
        let s = var(&r, 0).add(&var(&r, 1));
        let sq = s.mul(&s).unwrap();
        let expected = var(&r, 0).pow(2).add(&var(&r, 1).pow(2));
        assert_eq!(sq, expected);
    }

    #[test]
    fn simple_product() {
        let r = ring2();
        let prod = var(&r, 0).mul(&var(&r, 1)).unwrap();
        let m = r.monomial(vec![1, 1]);
        assert_eq!(prod, Polynomial::monomial_term(&r, m, 1));
    }

    #[test]
    fn sum_of_cubes_char3() {
        let r = ring3();
        let (x, y) = (var(&r, 0), var(&r, 1));
        let a = x.add(&y);
        // x^2 - xy + y^2 = x^2 + 2xy + y^2 over F_3
        let b = x.pow(2).add(&x.mul(&y).unwrap().scale_coeff(2)).add(&y.pow(2));
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod, x.pow(3).add(&y.pow(3)));
    }

    #[test]
    fn pow_p_cases() {
        let r = ring2();
        let s = var(&r, 0).add(&var(&r, 1));
        assert_eq!(s.pow_p(1), var(&r, 0).pow(2).add(&var(&r, 1).pow(2)));
        assert_eq!(s.pow_p(0), s);

        let r3 = ring3();
        let two_x = var(&r3, 0).scale_coeff(2);
        // (2x)^3 = 8x^3 = 2x^3 over F_3
        assert_eq!(two_x.pow_p(1), var(&r3, 0).pow(3).scale_coeff(2));
    }

    #[test]
    fn grevlex_examples() {
        let r = ring2();
        let a = r.monomial(vec![2, 0]);
        let b = r.monomial(vec![1, 1]);
        assert_eq!(grevlex_cmp(&a, &b), Ordering::Greater);

        let r3v = PolyRingCtx::new(2, vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let a = r3v.monomial(vec![0, 2, 0]);
        let b = r3v.monomial(vec![1, 0, 1]);
        assert_eq!(grevlex_cmp(&a, &b), Ordering::Greater);
        assert_eq!(grevlex_cmp(&a, &a), Ordering::Equal);
    }

    #[test]
    fn homogeneity_detection() {
        let r = ring2();
        let h = var(&r, 0).mul(&var(&r, 1)).unwrap();
        assert_eq!(h.homogeneity(), Homogeneity::Homogeneous(2));
        let mixed = var(&r, 0).add(&var(&r, 1).pow(2));
        assert_eq!(mixed.homogeneity(), Homogeneity::Mixed);
        assert_eq!(Polynomial::zero(&r).homogeneity(), Homogeneity::Zero);
    }

    #[test]
    fn product_preserves_homogeneous_degree() {
        let r = ring3();
        let a = var(&r, 0).pow(2).add(&var(&r, 1).pow(2));
        let b = var(&r, 0).mul(&var(&r, 1)).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.homogeneity(), Homogeneity::Homogeneous(4));
    }

    #[test]
    fn display_and_order() {
        let r = ring3();
        let f = var(&r, 1).pow(3).add(&var(&r, 0).pow(2).mul(&var(&r, 1)).unwrap().scale_coeff(2));
        assert_eq!(f.to_string(), "2*x0^2*x1 + x1^3");
    }

    #[test]
    fn monomials_of_degree_enumeration() {
        let r = ring2();
        let ms = r.monomials_of_degree(2);
        let strs: Vec<Vec<u32>> = ms.iter().map(|m| m.exps().to_vec()).collect();
        assert_eq!(strs, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert!(r.monomials_of_degree(-1).is_empty());
    }

    #[test]
    fn ideal_rejects_mixed() {
        let r = ring2();
        let mixed = var(&r, 0).add(&var(&r, 1).pow(2));
        assert_eq!(
            Ideal::new(&r, vec![mixed]).unwrap_err(),
            Error::NonHomogeneous { index: 0 }
        );
    }

    #[test]
    fn ring_validation() {
        assert!(matches!(
            PolyRingCtx::new(4, vec!["x".into()]).unwrap_err(),
            Error::NonPrimeField { p: 4 }
        ));
        assert!(PolyRingCtx::new(2, vec!["x".into(), "x".into()]).is_err());
    }

    #[test]
    fn block_order_eliminates() {
        // x-block dominant: any monomial with x beats any pure-y monomial.
        let r = PolyRingCtx::with_weights(
            2,
            vec!["x".into(), "y".into()],
            vec![1, 2],
            MonoOrder::Block { first: 1 },
        );
        let x = r.monomial(vec![1, 0]);
        let y3 = r.monomial(vec![0, 3]);
        assert_eq!(r.cmp_mono(&x, &y3), Ordering::Greater);
    }
}
