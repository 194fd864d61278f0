//! The Serre–Cartan (admissible) basis.
//!
//! An admissible sequence `(i_1, ..., i_k)` satisfies `i_s >= 2 i_{s+1}`; the
//! corresponding composites `Sq^I` form a basis of the mod-2 Steenrod algebra.
//! Products are reduced to this basis with the Adem relations, see [`adem`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub mod adem;
pub mod enumerate;
pub mod rewrite;

pub use adem::{adem_expand, mul_sq, normalize, product};
pub use enumerate::{admissible_basis, enumerate_admissible, BasisIndex};
pub use rewrite::{normalize_with, Strategy};

pub(crate) type Entries = SmallVec<[u32; 8]>;

/// `C(n, k) mod 2`: one exactly when the binary digits of `k` are a subset of
/// those of `n` (Lucas).
#[inline]
pub fn binom_mod2(n: u64, k: u64) -> bool {
    k <= n && n & k == k
}

/// An admissible sequence. The empty sequence is the unit.
///
/// The derived ordering is ascending lexicographic; the canonical listing
/// order used for matrices and output is the reverse of it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<u32>", try_from = "Vec<u32>")]
pub struct AdmissibleSeq(pub(crate) Entries);

impl AdmissibleSeq {
    pub fn unit() -> Self {
        Self(Entries::new())
    }

    pub fn new(entries: &[u32]) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::Precondition(format!(
                "sequence {entries:?} has a zero entry"
            )));
        }
        if !is_admissible(entries) {
            return Err(Error::Precondition(format!(
                "sequence {entries:?} is not admissible"
            )));
        }
        Ok(Self(Entries::from_slice(entries)))
    }

    pub(crate) fn from_entries_unchecked(entries: Entries) -> Self {
        debug_assert!(is_admissible(&entries) && entries.iter().all(|&e| e > 0));
        Self(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `i_1 - i_2 - ... - i_k`, zero for the unit.
    pub fn excess(&self) -> i64 {
        match self.0.split_first() {
            None => 0,
            Some((&first, rest)) => first as i64 - rest.iter().map(|&e| e as i64).sum::<i64>(),
        }
    }

    /// First entry, zero for the unit.
    pub fn leading(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Concatenation as a word (generally not admissible).
    pub fn concat(&self, other: &AdmissibleSeq) -> Word {
        let mut w: Vec<u32> = self.0.to_vec();
        w.extend_from_slice(&other.0);
        Word(w)
    }

    pub fn as_word(&self) -> Word {
        Word(self.0.to_vec())
    }
}

impl From<AdmissibleSeq> for Vec<u32> {
    fn from(s: AdmissibleSeq) -> Self {
        s.0.to_vec()
    }
}

impl TryFrom<Vec<u32>> for AdmissibleSeq {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(&v)
    }
}

impl fmt::Display for AdmissibleSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        f.write_str("Sq[")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for AdmissibleSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

pub fn is_admissible(entries: &[u32]) -> bool {
    entries.windows(2).all(|w| w[0] >= 2 * w[1])
}

/// A composite `Sq^{w_1} ... Sq^{w_n}` with positive exponents, not
/// necessarily admissible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub(crate) Vec<u32>);

impl Word {
    pub fn new(entries: &[u32]) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::Precondition(format!(
                "word {entries:?} has a zero entry"
            )));
        }
        Ok(Self(entries.to_vec()))
    }

    /// Drops zero entries (`Sq^0` is the identity).
    pub fn from_exponents(entries: &[u32]) -> Self {
        Self(entries.iter().copied().filter(|&e| e > 0).collect())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_admissible(&self) -> bool {
        is_admissible(&self.0)
    }
}

/// A homogeneous element of the Steenrod algebra in admissible coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Element {
    degree: u32,
    terms: BTreeSet<AdmissibleSeq>,
}

impl Element {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            terms: BTreeSet::new(),
        }
    }

    pub fn unit() -> Self {
        Self::from_seq(AdmissibleSeq::unit())
    }

    /// `Sq^n`; `Sq^0` is the unit.
    pub fn sq(n: u32) -> Self {
        if n == 0 {
            Self::unit()
        } else {
            Self::from_seq(AdmissibleSeq(Entries::from_slice(&[n])))
        }
    }

    pub fn from_seq(seq: AdmissibleSeq) -> Self {
        let degree = seq.degree();
        Self {
            degree,
            terms: BTreeSet::from([seq]),
        }
    }

    /// Sums the given sequences mod 2. All must have degree `degree`.
    pub fn from_terms<I: IntoIterator<Item = AdmissibleSeq>>(
        degree: u32,
        terms: I,
    ) -> Result<Self> {
        let mut e = Self::zero(degree);
        for t in terms {
            if t.degree() != degree {
                return Err(Error::Inhomogeneous {
                    left: degree,
                    right: t.degree(),
                });
            }
            e.toggle(t);
        }
        Ok(e)
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

    pub fn contains(&self, seq: &AdmissibleSeq) -> bool {
        self.terms.contains(seq)
    }

    /// Terms in canonical (descending lexicographic) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &AdmissibleSeq> + ExactSizeIterator {
        self.terms.iter().rev()
    }

    pub(crate) fn toggle(&mut self, seq: AdmissibleSeq) {
        debug_assert_eq!(seq.degree(), self.degree);
        if !self.terms.remove(&seq) {
            self.terms.insert(seq);
        }
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        if self.degree != other.degree {
            return Err(Error::Inhomogeneous {
                left: self.degree,
                right: other.degree,
            });
        }
        let terms = self
            .terms
            .symmetric_difference(&other.terms)
            .cloned()
            .collect();
        Ok(Element {
            degree: self.degree,
            terms,
        })
    }

    /// Largest leading entry among the terms; zero for the unit or zero element.
    pub fn max_leading(&self) -> u32 {
        self.terms
            .iter()
            .map(AdmissibleSeq::leading)
            .max()
            .unwrap_or(0)
    }

    /// Whether every term has leading entry at most `b`, i.e. membership in
    /// `T_b` without passing to a quotient.
    pub fn in_t(&self, b: u32) -> bool {
        self.max_leading() <= b
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element(deg {}: {})", self.degree, self)
    }
}

/// The case bound `n` with `Sq^a T_b ⊂ T_n`, for `a, b > 0`.
pub fn left_action_bound(a: u32, b: u32) -> u32 {
    if a >= 2 * b {
        a
    } else if a >= b {
        2 * b - 1
    } else {
        a + b
    }
}

/// Outcome of checking `Sq^a T_b ⊂ T_n` over a range of `a`, `b`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LeftActionReport {
    pub instances: usize,
    /// `(a, I, observed leading entry, bound)` for every violation.
    pub violations: Vec<(u32, AdmissibleSeq, u32, u32)>,
    /// For each `b`, a witness `(a, I)` with `b <= a < 2b` and `I` in `T_b`
    /// whose product has leading entry `2b - 1`. Witnesses with `i_1 = b` are
    /// preferred; `b = 1` only has the unit (`Sq^1 Sq^1 = 0`).
    pub sharpness: Vec<(u32, Option<(u32, AdmissibleSeq)>)>,
}

impl LeftActionReport {
    pub fn passed(&self, sharp_b_max: u32) -> bool {
        self.violations.is_empty()
            && self
                .sharpness
                .iter()
                .filter(|(b, _)| *b <= sharp_b_max)
                .all(|(_, w)| w.is_some())
    }
}

/// Checks the leading-entry bound for `Sq^a Sq^I` over `1 <= a <= a_max`,
/// `1 <= b <= b_max`, and admissible `I` with `i_1 = b`, `|I| <= degree_cap`.
pub fn check_left_action(a_max: u32, b_max: u32, degree_cap: u32) -> LeftActionReport {
    let mut report = LeftActionReport::default();
    for b in 1..=b_max {
        let mut witness = None;
        let seqs: Vec<AdmissibleSeq> = (b..=degree_cap)
            .flat_map(|d| admissible_basis(d).seqs().to_vec())
            .filter(|s| s.leading() == b)
            .collect();
        for a in 1..=a_max {
            let bound = left_action_bound(a, b);
            for seq in &seqs {
                report.instances += 1;
                let prod = mul_sq(a, seq);
                let lead = prod.max_leading();
                if lead > bound {
                    report.violations.push((a, seq.clone(), lead, bound));
                }
                if witness.is_none() && lead == 2 * b - 1 && a >= b && a < 2 * b {
                    witness = Some((a, seq.clone()));
                }
            }
        }
        if witness.is_none() {
            // fall back to the rest of T_b (leading entry below b, unit included)
            let lower: Vec<AdmissibleSeq> = (0..=degree_cap)
                .flat_map(|d| admissible_basis(d).seqs().to_vec())
                .filter(|s| s.leading() < b)
                .collect();
            witness = (b..2 * b)
                .flat_map(|a| lower.iter().map(move |s| (a, s)))
                .find(|(a, s)| mul_sq(*a, s).max_leading() == 2 * b - 1)
                .map(|(a, s)| (a, s.clone()));
        }
        report.sharpness.push((b, witness));
    }
    report
}
