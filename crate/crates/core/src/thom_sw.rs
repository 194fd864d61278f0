//! Steenrod squares acting on Stiefel–Whitney classes and on the Thom class.
//!
//! `H*(BO)` is modeled as the polynomial algebra on `w_1, w_2, ...`; the BSO
//! model sets `w_1 = 0`. Squares act on generators by the Wu formula and on
//! products by the Cartan formula. A [`ThomElement`] `U·p` is acted on through
//! `Sq^n U = U w_n`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::serre_cartan::{binom_mod2, AdmissibleSeq, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    /// All `w_i`, `i >= 1`.
    Bo,
    /// `w_1 = 0`.
    Bso,
}

impl Model {
    fn allows(self, index: u32) -> bool {
        match self {
            Model::Bo => index >= 1,
            Model::Bso => index >= 2,
        }
    }
}

type Indices = SmallVec<[u32; 8]>;

/// A monomial `w_{j_1} w_{j_2} ...`, stored as its generator indices in
/// descending order with repetition.
///
/// The ordering is Thom's: higher degree is larger; in equal degree compare
/// the descending index lists lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SWMonomial(Indices);

impl SWMonomial {
    pub fn one() -> Self {
        Self(Indices::new())
    }

    pub fn w(i: u32) -> Self {
        assert!(i >= 1, "w_0 is the unit, use SWMonomial::one");
        Self(Indices::from_slice(&[i]))
    }

    /// From generator indices in any order; zeros (`w_0 = 1`) are dropped.
    pub fn from_indices(indices: &[u32]) -> Self {
        let mut v: Indices = indices.iter().copied().filter(|&i| i > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Self(v)
    }

    /// From an exponent map `index -> exponent`.
    pub fn from_exponents(exps: &BTreeMap<u32, u32>) -> Self {
        let mut v = Indices::new();
        for (&i, &e) in exps.iter().rev() {
            v.extend(std::iter::repeat_n(i, e as usize));
        }
        Self(v)
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn exponents(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &i in &self.0 {
            *m.entry(i).or_insert(0) += 1;
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// A single generator to the first power.
    pub fn is_indecomposable(&self) -> bool {
        self.0.len() == 1
    }

    pub fn mul(&self, other: &SWMonomial) -> SWMonomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Indices::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] >= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        SWMonomial(out)
    }
}

impl Ord for SWMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for SWMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn monomial_order(a: &SWMonomial, b: &SWMonomial) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for SWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, e) in self.exponents().into_iter().rev() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "w[{i}]")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A homogeneous polynomial in the Stiefel–Whitney classes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SWPolynomial {
    degree: u32,
    terms: BTreeSet<SWMonomial>,
}

impl SWPolynomial {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            terms: BTreeSet::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_monomial(SWMonomial::one())
    }

    pub fn w(i: u32) -> Self {
        if i == 0 {
            Self::one()
        } else {
            Self::from_monomial(SWMonomial::w(i))
        }
    }

    pub fn from_monomial(m: SWMonomial) -> Self {
        Self {
            degree: m.degree(),
            terms: BTreeSet::from([m]),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = SWMonomial>>(degree: u32, terms: I) -> Result<Self> {
        let mut p = Self::zero(degree);
        for m in terms {
            if m.degree() != degree {
                return Err(Error::Inhomogeneous {
                    left: degree,
                    right: m.degree(),
                });
            }
            p.toggle(m);
        }
        Ok(p)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Monomials from largest to smallest in Thom's order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &SWMonomial> + ExactSizeIterator {
        self.terms.iter().rev()
    }

    pub fn contains(&self, m: &SWMonomial) -> bool {
        self.terms.contains(m)
    }

    pub fn leading(&self) -> Option<&SWMonomial> {
        self.terms.last()
    }

    fn toggle(&mut self, m: SWMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn checked_add(&self, other: &SWPolynomial) -> Result<SWPolynomial> {
        if self.degree != other.degree {
            return Err(Error::Inhomogeneous {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(SWPolynomial {
            degree: self.degree,
            terms: self
                .terms
                .symmetric_difference(&other.terms)
                .cloned()
                .collect(),
        })
    }

    fn add_assign(&mut self, other: &SWPolynomial) {
        debug_assert_eq!(self.degree, other.degree);
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn mul(&self, other: &SWPolynomial) -> SWPolynomial {
        let mut out = SWPolynomial::zero(self.degree + other.degree);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    /// Drops every monomial involving a generator the model sets to zero.
    pub fn restrict(&self, model: Model) -> SWPolynomial {
        SWPolynomial {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|m| m.0.iter().all(|&i| model.allows(i)))
                .cloned()
                .collect(),
        }
    }

    /// The part made of single generators, i.e. the class modulo decomposables.
    pub fn indecomposable_part(&self) -> SWPolynomial {
        SWPolynomial {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|m| m.is_indecomposable())
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for SWPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, m) in self.terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SWPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SWPolynomial(deg {}: {})", self.degree, self)
    }
}

/// `U · p` in the Thom spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThomElement(pub SWPolynomial);

impl ThomElement {
    pub fn thom_class() -> Self {
        Self(SWPolynomial::one())
    }

    pub fn polynomial(&self) -> &SWPolynomial {
        &self.0
    }
}

impl fmt::Display for ThomElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            f.write_str("0")
        } else if self.0.len() == 1 && self.0.leading().is_some_and(SWMonomial::is_one) {
            f.write_str("U")
        } else {
            write!(f, "U*({})", self.0)
        }
    }
}

/// `Sq^i(w_j)` by the Wu formula.
pub fn wu_sq(i: u32, j: u32, model: Model) -> SWPolynomial {
    assert!(j >= 1, "wu_sq needs j >= 1");
    let degree = i + j;
    if !model.allows(j) || i > j {
        return SWPolynomial::zero(degree);
    }
    if i == 0 {
        return SWPolynomial::w(j);
    }
    if i == j {
        return SWPolynomial::from_monomial(SWMonomial::from_indices(&[j, j]));
    }
    let mut out = SWPolynomial::zero(degree);
    for t in 0..=i {
        if binom_mod2((j + t - i - 1) as u64, t as u64) {
            out.toggle(SWMonomial::from_indices(&[i - t, j + t]));
        }
    }
    out.restrict(model)
}

/// `Sq^a` of a monomial by the Cartan formula over its factors.
pub fn sq_on_monomial(a: u32, m: &SWMonomial, model: Model) -> SWPolynomial {
    let base = m.degree();
    // partial[x] = Sq^x of the product of the factors seen so far
    let mut partial: Vec<SWPolynomial> = (0..=a).map(SWPolynomial::zero).collect();
    partial[0] = SWPolynomial::one();
    let mut seen = 0;
    for &j in m.indices() {
        let mut next: Vec<SWPolynomial> =
            (0..=a).map(|x| SWPolynomial::zero(seen + j + x)).collect();
        for (x, slot) in next.iter_mut().enumerate() {
            let x = x as u32;
            for y in x.saturating_sub(j)..=x {
                let left = &partial[y as usize];
                if left.is_zero() {
                    continue;
                }
                let right = wu_sq(x - y, j, model);
                if !right.is_zero() {
                    slot.add_assign(&left.mul(&right));
                }
            }
        }
        partial = next;
        seen += j;
    }
    debug_assert_eq!(partial[a as usize].degree(), base + a);
    partial.swap_remove(a as usize)
}

pub fn sq_on_polynomial(a: u32, p: &SWPolynomial, model: Model) -> SWPolynomial {
    let mut out = SWPolynomial::zero(p.degree() + a);
    for m in &p.terms {
        out.add_assign(&sq_on_monomial(a, m, model));
    }
    out
}

/// Applies `Sq^{w_1} ... Sq^{w_n}` right to left.
pub fn sq_word_on_polynomial(word: &[u32], p: &SWPolynomial, model: Model) -> SWPolynomial {
    word.iter()
        .rev()
        .fold(p.clone(), |acc, &a| sq_on_polynomial(a, &acc, model))
}

/// `Sq^a(U p) = sum_j U w_{a-j} Sq^j(p)`.
pub fn sq_on_thom(a: u32, u: &ThomElement, model: Model) -> ThomElement {
    let p = &u.0;
    let mut out = SWPolynomial::zero(p.degree() + a);
    for j in 0..=a {
        let wk = SWPolynomial::w(a - j).restrict(model);
        if wk.is_zero() {
            continue;
        }
        let sj = sq_on_polynomial(j, p, model);
        if !sj.is_zero() {
            out.add_assign(&wk.mul(&sj));
        }
    }
    ThomElement(out)
}

pub fn sq_word_on_thom(word: &Word, u: &ThomElement, model: Model) -> ThomElement {
    word.entries()
        .iter()
        .rev()
        .fold(u.clone(), |acc, &a| sq_on_thom(a, &acc, model))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThomLemmaReport {
    pub sequence: AdmissibleSeq,
    pub expected: String,
    pub leading: Option<String>,
    pub terms: usize,
    pub passed: bool,
}

/// `Sq^I(U)` has leading monomial `w_{i_1} ... w_{i_k}`.
pub fn verify_thom_lemma(seq: &AdmissibleSeq) -> ThomLemmaReport {
    let image = sq_word_on_thom(&seq.as_word(), &ThomElement::thom_class(), Model::Bo);
    let expected = SWMonomial::from_indices(seq.entries());
    let leading = image.0.leading().cloned();
    ThomLemmaReport {
        sequence: seq.clone(),
        expected: expected.to_string(),
        leading: leading.as_ref().map(ToString::to_string),
        terms: image.0.len(),
        passed: leading.as_ref() == Some(&expected),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BspinCheck {
    pub label: String,
    pub indecomposable: String,
    pub expected: String,
    pub passed: bool,
}

/// In the BSO model, `Sq^{2^k} w_{2^k+1}` and `Sq^{(2^n, ..., 2, 1)} w_2` are
/// both `w_{2^{k+1}+1}` (resp. `w_{2^{n+1}+1}`) modulo decomposables.
pub fn verify_bspin_formulas(max_k: u32, max_n: u32) -> Vec<BspinCheck> {
    let mut out = Vec::new();
    for k in 0..=max_k {
        let p = sq_on_polynomial(1 << k, &SWPolynomial::w((1 << k) + 1), Model::Bso);
        let expected = SWPolynomial::w((1 << (k + 1)) + 1);
        let ind = p.indecomposable_part();
        out.push(BspinCheck {
            label: format!("Sq^{}(w[{}])", 1u32 << k, (1u32 << k) + 1),
            indecomposable: ind.to_string(),
            expected: expected.to_string(),
            passed: ind == expected,
        });
    }
    for n in 0..=max_n {
        let word: Vec<u32> = (0..=n).rev().map(|i| 1u32 << i).collect();
        let p = sq_word_on_polynomial(&word, &SWPolynomial::w(2), Model::Bso);
        let expected = SWPolynomial::w((1 << (n + 1)) + 1);
        let ind = p.indecomposable_part();
        out.push(BspinCheck {
            label: format!("Sq^{word:?}(w[2])"),
            indecomposable: ind.to_string(),
            expected: expected.to_string(),
            passed: ind == expected,
        });
    }
    out
}
