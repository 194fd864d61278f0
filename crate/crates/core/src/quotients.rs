//! Subalgebras `A(n)` and `E(1)`, the quotients `A//B = A / A·B⁺`, and the
//! membership checks built on them.
//!
//! A [`QuotientContext`] holds, for every degree up to its cap, the left ideal
//! `A·B⁺` as an echelon basis in admissible coordinates together with a
//! complement of admissible sequences that gives coordinates on the quotient.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::basis_theorem::alpha;
use crate::error::{Error, Result};
use crate::f2linalg::{BitMatrix, BitVector, Echelon, TrackedEchelon};
use crate::serre_cartan::{
    admissible_basis, normalize, product, AdmissibleSeq, BasisIndex, Element, Word,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubalgebraKind {
    /// Generated by `Sq^1, Sq^2, ..., Sq^{2^n}`.
    A(u32),
    /// Exterior on `Q_0 = Sq^1` and `Q_1 = Sq^3 + Sq^2 Sq^1`.
    E1,
    /// The ground field; the quotient is the whole algebra.
    Trivial,
}

impl fmt::Display for SubalgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubalgebraKind::A(n) => write!(f, "A({n})"),
            SubalgebraKind::E1 => f.write_str("E(1)"),
            SubalgebraKind::Trivial => f.write_str("F2"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraSpec {
    kind: SubalgebraKind,
    generators: Vec<Element>,
}

impl SubalgebraSpec {
    pub fn a(n: u32) -> Self {
        Self {
            kind: SubalgebraKind::A(n),
            generators: (0..=n).map(|i| Element::sq(1 << i)).collect(),
        }
    }

    pub fn e1() -> Self {
        let q1 = Element::from_terms(
            3,
            [
                AdmissibleSeq::new(&[3]).unwrap(),
                AdmissibleSeq::new(&[2, 1]).unwrap(),
            ],
        )
        .unwrap();
        Self {
            kind: SubalgebraKind::E1,
            generators: vec![Element::sq(1), q1],
        }
    }

    pub fn trivial() -> Self {
        Self {
            kind: SubalgebraKind::Trivial,
            generators: Vec::new(),
        }
    }

    pub fn kind(&self) -> SubalgebraKind {
        self.kind
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }
}

/// A basis of the subalgebra in each degree `0..=max_degree`, built as the
/// multiplicative closure of the generators.
pub fn subalgebra_basis(spec: &SubalgebraSpec, max_degree: u32) -> Vec<Vec<Element>> {
    let mut basis: Vec<Vec<Element>> = vec![vec![Element::unit()]];
    for d in 1..=max_degree {
        let index = admissible_basis(d);
        let mut ech = Echelon::new(index.len());
        let mut here = Vec::new();
        for g in &spec.generators {
            let gd = g.degree();
            if gd > d {
                continue;
            }
            for x in &basis[(d - gd) as usize] {
                let p = product(g, x);
                if ech.insert(index.vector(&p)) {
                    here.push(p);
                }
            }
        }
        basis.push(here);
    }
    basis
}

/// One degree of a quotient.
#[derive(Debug)]
pub struct DegreeSlice {
    degree: u32,
    basis: Arc<BasisIndex>,
    ideal: Echelon,
    complement: Vec<AdmissibleSeq>,
    /// Ideal rows first (tracked as `0..ideal_rank`), then complement units.
    solver: TrackedEchelon,
}

impl DegreeSlice {
    fn build(degree: u32, sub_basis: &[Vec<Element>]) -> Self {
        let basis = admissible_basis(degree);
        let n = basis.len();
        let mut ideal = Echelon::new(n);
        'outer: for k in 1..=degree {
            for s in &sub_basis[k as usize] {
                for seq in admissible_basis(degree - k).seqs() {
                    if ideal.is_full() {
                        break 'outer;
                    }
                    let p = product(&Element::from_seq(seq.clone()), s);
                    ideal.insert(basis.vector(&p));
                }
            }
        }

        let mut solver = TrackedEchelon::new(n, n);
        for row in ideal.to_matrix().rows() {
            solver.insert(row.clone());
        }
        let mut complement = Vec::new();
        for (i, seq) in basis.seqs().iter().enumerate() {
            if solver.rank() == n {
                break;
            }
            if solver.echelon().contains(&BitVector::unit(n, i)) {
                continue;
            }
            solver.insert(BitVector::unit(n, i));
            complement.push(seq.clone());
        }
        debug_assert_eq!(ideal.rank() + complement.len(), n);
        Self {
            degree,
            basis,
            ideal,
            complement,
            solver,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn basis(&self) -> &BasisIndex {
        &self.basis
    }

    pub fn ideal(&self) -> &Echelon {
        &self.ideal
    }

    pub fn ideal_rank(&self) -> usize {
        self.ideal.rank()
    }

    pub fn complement(&self) -> &[AdmissibleSeq] {
        &self.complement
    }

    pub fn quotient_dim(&self) -> usize {
        self.complement.len()
    }

    /// Coordinates of `v` on the complement.
    fn reduce_vector(&self, v: &BitVector) -> BitVector {
        let r = self.ideal.rank();
        let combo = self
            .solver
            .express(v)
            .expect("ideal plus complement spans the degree");
        let mut out = BitVector::zeros(self.complement.len());
        for i in combo.support().filter(|&i| i >= r) {
            out.flip(i - r);
        }
        out
    }

    /// Whether `v` lies in `span{e_i : keep(seq_i)} + ideal`; when it does,
    /// returns the part supported on the kept sequences.
    fn representative<F: Fn(&AdmissibleSeq) -> bool>(
        &self,
        v: &BitVector,
        keep: F,
    ) -> Option<BitVector> {
        let n = self.basis.len();
        let kept: Vec<usize> = (0..n).filter(|&i| keep(&self.basis.seqs()[i])).collect();
        let r = self.ideal.rank();
        let mut t = TrackedEchelon::new(n, r + kept.len());
        for row in self.ideal.to_matrix().rows() {
            t.insert(row.clone());
        }
        for &i in &kept {
            t.insert(BitVector::unit(n, i));
        }
        let combo = t.express(v)?;
        let mut rep = BitVector::zeros(n);
        for j in combo.support().filter(|&j| j >= r) {
            rep.flip(kept[j - r]);
        }
        Some(rep)
    }
}

/// `A//B` truncated at `max_degree`.
#[derive(Debug)]
pub struct QuotientContext {
    spec: SubalgebraSpec,
    max_degree: u32,
    sub_basis: Vec<Vec<Element>>,
    slices: Vec<DegreeSlice>,
}

impl QuotientContext {
    pub fn new(spec: SubalgebraSpec, max_degree: u32) -> Self {
        let sub_basis = subalgebra_basis(&spec, max_degree);
        let slices = crate::par_map_degrees(max_degree, |d| DegreeSlice::build(d, &sub_basis));
        Self {
            spec,
            max_degree,
            sub_basis,
            slices,
        }
    }

    pub fn spec(&self) -> &SubalgebraSpec {
        &self.spec
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn subalgebra_basis(&self) -> &[Vec<Element>] {
        &self.sub_basis
    }

    pub fn slice(&self, d: u32) -> Result<&DegreeSlice> {
        self.slices.get(d as usize).ok_or(Error::DegreeOverflow {
            degree: d,
            max: self.max_degree,
        })
    }

    /// Echelonized ideal slice in admissible coordinates.
    pub fn ideal_slice(&self, d: u32) -> Result<BitMatrix> {
        Ok(self.slice(d)?.ideal.to_matrix())
    }

    pub fn quotient_dim(&self, d: u32) -> Result<usize> {
        Ok(self.slice(d)?.quotient_dim())
    }

    pub fn complement(&self, d: u32) -> Result<&[AdmissibleSeq]> {
        Ok(self.slice(d)?.complement())
    }

    /// Quotient coordinates of `x` over the complement of its degree.
    pub fn reduce(&self, x: &Element) -> Result<BitVector> {
        let s = self.slice(x.degree())?;
        Ok(s.reduce_vector(&s.basis.vector(x)))
    }

    /// The complement sequences carrying a nonzero coordinate of `x`.
    pub fn reduce_terms(&self, x: &Element) -> Result<Vec<AdmissibleSeq>> {
        let s = self.slice(x.degree())?;
        Ok(self
            .reduce(x)?
            .support()
            .map(|i| s.complement[i].clone())
            .collect())
    }

    pub fn is_zero_in_quotient(&self, x: &Element) -> Result<bool> {
        let s = self.slice(x.degree())?;
        Ok(s.ideal.contains(&s.basis.vector(x)))
    }

    /// Rank of the images of `rows` in the quotient.
    pub fn independence_rank(&self, d: u32, rows: &[Element]) -> Result<usize> {
        let s = self.slice(d)?;
        let mut ech = s.ideal.clone();
        let base = ech.rank();
        for r in rows {
            if r.degree() != d {
                return Err(Error::Inhomogeneous {
                    left: d,
                    right: r.degree(),
                });
            }
            ech.insert(s.basis.vector(r));
        }
        Ok(ech.rank() - base)
    }

    /// If `x ≡ y` modulo the ideal for some `y` spanned by sequences
    /// accepted by `keep`, returns such a `y`.
    pub fn representative<F>(&self, x: &Element, keep: F) -> Result<Option<Element>>
    where
        F: Fn(&AdmissibleSeq) -> bool,
    {
        let s = self.slice(x.degree())?;
        Ok(s.representative(&s.basis.vector(x), keep)
            .map(|v| s.basis.element(&v)))
    }

    /// Membership in `T_b` modulo the ideal.
    pub fn in_t_mod_ideal(&self, x: &Element, b: u32) -> Result<bool> {
        Ok(self.representative(x, |s| s.leading() <= b)?.is_some())
    }

    /// Membership in `E_r` (excess at most `r`) modulo the ideal.
    pub fn in_e_mod_ideal(&self, x: &Element, r: i64) -> Result<bool> {
        Ok(self.representative(x, |s| s.excess() <= r)?.is_some())
    }

    fn require_kind(&self, want: &str, ok: bool) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "this check needs a {want} context, got {}",
                self.spec.kind
            )))
        }
    }
}

/// Result of a membership check, with the representative that proves it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Membership {
    pub degree: u32,
    pub element: String,
    pub bound: i64,
    pub member: bool,
    /// The witness `y ≡ x`, printed, when `member` holds.
    pub witness: Option<String>,
}

fn membership(x: &Element, bound: i64, rep: Option<Element>) -> Membership {
    Membership {
        degree: x.degree(),
        element: x.to_string(),
        bound,
        member: rep.is_some(),
        witness: rep.map(|y| y.to_string()),
    }
}

/// How `m` is split in the inductive step for `Sq^{m+1} ∈ T_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnDecomposition {
    /// `m + 1 = 2^ell`.
    Terminating { ell: u32 },
    /// `m = 2a + b`.
    Split { a: u64, b: u64 },
}

pub fn an_decompose(m: u64) -> Result<AnDecomposition> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let ks: Vec<u32> = (0..64).rev().filter(|&k| m >> k & 1 == 1).collect();
    let ell = ks.len();
    let s = (0..ell - 1)
        .find(|&i| ks[i] > ks[i + 1] + 1)
        .map_or(ell, |i| i + 1);
    if s == ell && ks[ell - 1] == 0 {
        return Ok(AnDecomposition::Terminating { ell: ell as u32 });
    }
    let a = ks[..s].iter().map(|&k| 1u64 << (k - 1)).sum();
    let b = ks[s..].iter().map(|&k| 1u64 << k).sum();
    Ok(AnDecomposition::Split { a, b })
}

/// `Sq^{m+1} ∈ T_m` in `A//A(n)`, for `alpha(m) <= n`.
pub fn verify_prop_an(ctx: &QuotientContext, m: u32) -> Result<Membership> {
    let SubalgebraKind::A(n) = ctx.spec.kind else {
        return Err(Error::Precondition(format!(
            "this check needs an A(n) context, got {}",
            ctx.spec.kind
        )));
    };
    if alpha(m as u64) > n {
        return Err(Error::Precondition(format!("alpha({m}) > {n}")));
    }
    let x = Element::sq(m + 1);
    let rep = ctx.representative(&x, |s| s.leading() <= m)?;
    Ok(membership(&x, m as i64, rep))
}

fn check_j(n: u32, j: &AdmissibleSeq) -> Result<u32> {
    let head = (1u32 << (n + 1)) + 1;
    if j.leading() != head {
        return Err(Error::Precondition(format!(
            "{j} must start with 2^{} + 1 = {head}",
            n + 1
        )));
    }
    Ok(head)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StringkReport {
    pub membership: Membership,
    /// Membership at the sharper bound `2^{n+1} - 1` (reported, not required).
    pub strengthened: bool,
}

/// `Sq^J ∈ T_{2^{n+1}}` in `A//A(1)` for admissible `J = (2^{n+1}+1, ...)`.
pub fn verify_stringk(ctx: &QuotientContext, n: u32, j: &AdmissibleSeq) -> Result<StringkReport> {
    ctx.require_kind("A(1)", ctx.spec.kind == SubalgebraKind::A(1))?;
    let head = check_j(n, j)?;
    let x = Element::from_seq(j.clone());
    let bound = head - 1;
    let rep = ctx.representative(&x, |s| s.leading() <= bound)?;
    let strengthened = ctx.in_t_mod_ideal(&x, bound - 1)?;
    Ok(StringkReport {
        membership: membership(&x, bound as i64, rep),
        strengthened,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InductionReport {
    pub degree: u32,
    /// The word `Sq^{2^n+i_0} ... Sq^{2^{n-k}+i_k} Sq^{2^{n-k}+1}`.
    pub word: Vec<u32>,
    pub product_in_t: bool,
    pub difference_in_t: bool,
}

impl InductionReport {
    pub fn passed(&self) -> bool {
        self.product_in_t && self.difference_in_t
    }
}

/// The word whose product is compared with `Sq^{2^{n+1}+1} Sq^{tail}`.
pub fn induction_word(n: u32, tail: &[u32]) -> Result<Word> {
    if tail.is_empty() {
        return Err(Error::Precondition("tail must be nonempty".into()));
    }
    let mut j = vec![(1u32 << (n + 1)) + 1];
    j.extend_from_slice(tail);
    AdmissibleSeq::new(&j)?;
    let k = tail.len() - 1;
    if k as u32 > n {
        return Err(Error::Precondition(format!(
            "tail of length {} is too long for n = {n}",
            tail.len()
        )));
    }
    let mut w: Vec<u32> = tail
        .iter()
        .enumerate()
        .map(|(t, &i)| (1u32 << (n - t as u32)) + i)
        .collect();
    w.push((1u32 << (n - k as u32)) + 1);
    Word::new(&w)
}

pub fn verify_induction(ctx: &QuotientContext, n: u32, tail: &[u32]) -> Result<InductionReport> {
    ctx.require_kind("A(1)", ctx.spec.kind == SubalgebraKind::A(1))?;
    let word = induction_word(n, tail)?;
    let bound = 1u32 << (n + 1);
    let prod = normalize(&word);
    let mut j = vec![bound + 1];
    j.extend_from_slice(tail);
    let sq_j = Element::from_seq(AdmissibleSeq::new(&j)?);
    let diff = prod.checked_add(&sq_j)?;
    Ok(InductionReport {
        degree: prod.degree(),
        word: word.entries().to_vec(),
        product_in_t: ctx.in_t_mod_ideal(&prod, bound)?,
        difference_in_t: ctx.in_t_mod_ideal(&diff, bound)?,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExcessReport {
    pub membership: Membership,
    pub excess: i64,
    /// `e(J) - max e(K)` over the witness terms, when the witness is nonzero.
    pub excess_gap: Option<i64>,
}

/// `Sq^J ∈ E_{e(J)-2}` in `A//A(1)`.
pub fn verify_excess_lemma(
    ctx: &QuotientContext,
    n: u32,
    j: &AdmissibleSeq,
) -> Result<ExcessReport> {
    ctx.require_kind("A(1)", ctx.spec.kind == SubalgebraKind::A(1))?;
    check_j(n, j)?;
    let x = Element::from_seq(j.clone());
    let e = j.excess();
    let rep = ctx.representative(&x, |s| s.excess() <= e - 2)?;
    let excess_gap = rep
        .as_ref()
        .and_then(|y| y.terms().map(AdmissibleSeq::excess).max())
        .map(|m| e - m);
    Ok(ExcessReport {
        membership: membership(&x, e - 2, rep),
        excess: e,
        excess_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::LazyLock;

    static A1: LazyLock<QuotientContext> =
        LazyLock::new(|| QuotientContext::new(SubalgebraSpec::a(1), 16));

    fn seq(e: &[u32]) -> AdmissibleSeq {
        AdmissibleSeq::new(e).unwrap()
    }

    fn dims(basis: &[Vec<Element>]) -> Vec<usize> {
        basis.iter().map(Vec::len).collect()
    }

    #[test]
    fn subalgebra_sizes() {
        let e1 = subalgebra_basis(&SubalgebraSpec::e1(), 8);
        assert_eq!(dims(&e1), vec![1, 1, 0, 1, 1, 0, 0, 0, 0]);
        let a1 = subalgebra_basis(&SubalgebraSpec::a(1), 8);
        assert_eq!(a1.iter().map(Vec::len).sum::<usize>(), 8);
        assert_eq!(dims(&a1)[6], 1);
        assert!(dims(&a1)[7..].iter().all(|&x| x == 0));
        let a0 = subalgebra_basis(&SubalgebraSpec::a(0), 4);
        assert_eq!(dims(&a0), vec![1, 1, 0, 0, 0]);
        let a2 = subalgebra_basis(&SubalgebraSpec::a(2), 24);
        assert_eq!(a2.iter().map(Vec::len).sum::<usize>(), 64);
    }

    #[test]
    fn small_quotient_dims() {
        let got: Vec<usize> = (0..=8).map(|d| A1.quotient_dim(d).unwrap()).collect();
        assert_eq!(got, vec![1, 0, 0, 0, 1, 0, 1, 1, 1]);
        assert_eq!(A1.slice(1).unwrap().ideal_rank(), 1);
        assert_eq!(A1.slice(0).unwrap().ideal_rank(), 0);
        let b4 = admissible_basis(4).len();
        assert_eq!(A1.slice(4).unwrap().ideal_rank(), b4 - 1);
    }

    #[test]
    fn reductions() {
        assert!(A1.reduce(&Element::sq(1)).unwrap().is_zero());
        let u = A1.reduce(&Element::unit()).unwrap();
        assert_eq!(u.support().collect::<Vec<_>>(), vec![0]);
        assert_eq!(
            A1.reduce(&Element::sq(5)).unwrap(),
            A1.reduce(&Element::from_seq(seq(&[4, 1]))).unwrap()
        );
    }

    #[test]
    fn t_membership() {
        assert!(A1.in_t_mod_ideal(&Element::zero(7), 1).unwrap());
        assert!(A1.in_t_mod_ideal(&Element::sq(5), 4).unwrap());
        let full = QuotientContext::new(SubalgebraSpec::trivial(), 6);
        assert!(!full.in_t_mod_ideal(&Element::sq(5), 4).unwrap());
        assert!(full.in_t_mod_ideal(&Element::sq(5), 5).unwrap());
    }

    #[test]
    fn decompositions() {
        assert_eq!(
            an_decompose(5).unwrap(),
            AnDecomposition::Split { a: 2, b: 1 }
        );
        assert_eq!(
            an_decompose(6).unwrap(),
            AnDecomposition::Split { a: 3, b: 0 }
        );
        assert_eq!(
            an_decompose(3).unwrap(),
            AnDecomposition::Terminating { ell: 2 }
        );
        assert!(an_decompose(0).is_err());
        for m in 1..200u64 {
            if let AnDecomposition::Split { a, b } = an_decompose(m).unwrap() {
                assert_eq!(2 * a + b, m);
            }
        }
    }

    #[test]
    fn prop_an_examples() {
        assert!(verify_prop_an(&A1, 2).unwrap().member);
        assert!(verify_prop_an(&A1, 4).unwrap().member);
        assert!(verify_prop_an(&A1, 3).is_err());
        let a2 = QuotientContext::new(SubalgebraSpec::a(2), 8);
        assert!(verify_prop_an(&a2, 6).unwrap().member);
        assert!(matches!(
            verify_prop_an(&A1, 16),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn stringk_examples() {
        assert!(
            verify_stringk(&A1, 1, &seq(&[5]))
                .unwrap()
                .membership
                .member
        );
        assert!(
            verify_stringk(&A1, 1, &seq(&[5, 2]))
                .unwrap()
                .membership
                .member
        );
        assert!(
            verify_stringk(&A1, 2, &seq(&[9, 4]))
                .unwrap()
                .membership
                .member
        );
        assert!(verify_stringk(&A1, 2, &seq(&[8, 4])).is_err());
    }

    #[test]
    fn induction_examples() {
        assert_eq!(induction_word(1, &[2]).unwrap().entries(), &[4, 3]);
        assert!(verify_induction(&A1, 1, &[2]).unwrap().passed());
        assert!(verify_induction(&A1, 2, &[4]).unwrap().passed());
        assert!(verify_induction(&A1, 2, &[4, 2]).unwrap().passed());
        assert!(verify_induction(&A1, 1, &[3]).is_err());
    }

    #[test]
    fn excess_examples() {
        let r = verify_excess_lemma(&A1, 1, &seq(&[5])).unwrap();
        assert!(r.membership.member);
        assert_eq!(r.excess, 5);
        assert!(
            verify_excess_lemma(&A1, 1, &seq(&[5, 2]))
                .unwrap()
                .membership
                .member
        );
    }

    #[test]
    fn complement_excess_identity() {
        for d in 0..=16 {
            for k in A1.complement(d).unwrap() {
                assert_eq!(k.excess(), 2 * k.leading() as i64 - k.degree() as i64);
            }
        }
    }
}
