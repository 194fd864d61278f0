//! Adem relations and the memoized left action of `Sq^a` on the admissible
//! basis.
//!
//! `Sq^a Sq^I` is reduced by expanding the leftmost pair `Sq^a Sq^{i_1}` and
//! recursing into the tail, which is the same as repeatedly rewriting the
//! rightmost inadmissible pair of the word. Both tables below are pure
//! functions of their keys, so concurrent fills are harmless.

use std::collections::BTreeSet;
use std::sync::{Arc, LazyLock};

use dashmap::DashMap;

use super::{binom_mod2, AdmissibleSeq, Element, Entries, Word};
use crate::error::{Error, Result};

static ADEM_MEMO: LazyLock<DashMap<(u32, u32), Arc<Element>>> = LazyLock::new(DashMap::new);
static MUL_MEMO: LazyLock<DashMap<(u32, AdmissibleSeq), Arc<Element>>> =
    LazyLock::new(DashMap::new);

fn adem_compute(a: u32, b: u32) -> Element {
    let mut out = Element::zero(a + b);
    let lo = (a + 1).saturating_sub(b);
    for i in lo..=a / 2 {
        if binom_mod2((b - 1 - i) as u64, (a - 2 * i) as u64) {
            let mut e = Entries::new();
            e.push(a + b - i);
            if i > 0 {
                e.push(i);
            }
            out.toggle(AdmissibleSeq::from_entries_unchecked(e));
        }
    }
    out
}

/// Expands the inadmissible product `Sq^a Sq^b` (`0 < a < 2b`) by the Adem
/// relation.
pub fn adem_expand(a: u32, b: u32) -> Result<Element> {
    if a == 0 || b == 0 {
        return Err(Error::Precondition(format!(
            "Adem relation needs positive exponents, got ({a}, {b})"
        )));
    }
    if a >= 2 * b {
        return Err(Error::Precondition(format!(
            "Sq^{a} Sq^{b} is already admissible"
        )));
    }
    Ok((*adem_cached(a, b)).clone())
}

pub(crate) fn adem_cached(a: u32, b: u32) -> Arc<Element> {
    if let Some(hit) = ADEM_MEMO.get(&(a, b)) {
        return Arc::clone(&hit);
    }
    let value = Arc::new(adem_compute(a, b));
    ADEM_MEMO.entry((a, b)).or_insert(value).clone()
}

/// Snapshot of the Adem table, sorted by key.
pub fn adem_memo_entries() -> Vec<((u32, u32), Element)> {
    let mut out: Vec<_> = ADEM_MEMO
        .iter()
        .map(|kv| (*kv.key(), (**kv.value()).clone()))
        .collect();
    out.sort_by_key(|(k, _)| *k);
    out
}

/// Preloads Adem expansions, e.g. from an on-disk cache. The batch is rejected
/// as a whole unless every entry is exactly the expansion of `Sq^a Sq^b`.
pub fn seed_adem_memo<I: IntoIterator<Item = ((u32, u32), Element)>>(entries: I) -> Result<usize> {
    let mut staged = Vec::new();
    for ((a, b), e) in entries {
        if a == 0 || b == 0 || a >= 2 * b {
            return Err(Error::Precondition(format!(
                "({a}, {b}) is not an Adem key"
            )));
        }
        if e != adem_compute(a, b) {
            return Err(Error::Precondition(format!(
                "wrong expansion for ({a}, {b})"
            )));
        }
        staged.push(((a, b), Arc::new(e)));
    }
    let n = staged.len();
    for (k, v) in staged {
        ADEM_MEMO.insert(k, v);
    }
    Ok(n)
}

/// Drops every memoized value.
pub fn clear_memos() {
    ADEM_MEMO.clear();
    MUL_MEMO.clear();
}

/// `Sq^a · Sq^I` in admissible coordinates.
pub fn mul_sq(a: u32, seq: &AdmissibleSeq) -> Arc<Element> {
    if a == 0 {
        return Arc::new(Element::from_seq(seq.clone()));
    }
    if seq.leading() == 0 || a >= 2 * seq.leading() {
        let mut e = Entries::with_capacity(seq.len() + 1);
        e.push(a);
        e.extend_from_slice(&seq.0);
        return Arc::new(Element::from_seq(AdmissibleSeq::from_entries_unchecked(e)));
    }
    let key = (a, seq.clone());
    if let Some(hit) = MUL_MEMO.get(&key) {
        return Arc::clone(&hit);
    }
    let value = Arc::new(mul_sq_uncached(a, seq));
    MUL_MEMO.entry(key).or_insert(value).clone()
}

fn mul_sq_uncached(a: u32, seq: &AdmissibleSeq) -> Element {
    let b = seq.0[0];
    let tail = AdmissibleSeq::from_entries_unchecked(Entries::from_slice(&seq.0[1..]));
    let mut acc = Toggle::default();
    for pair in adem_cached(a, b).terms() {
        let (c, e) = (pair.0[0], pair.0.get(1).copied().unwrap_or(0));
        if e == 0 {
            acc.add_all(&mul_sq(c, &tail));
        } else {
            for t in mul_sq(e, &tail).terms() {
                acc.add_all(&mul_sq(c, t));
            }
        }
    }
    acc.into_element(a + seq.degree())
}

/// Applies the word `w` on the left of the admissible sequence `seq`.
pub(crate) fn apply_word(w: &[u32], seq: &AdmissibleSeq) -> Element {
    let mut current = Element::from_seq(seq.clone());
    for &a in w.iter().rev() {
        if a == 0 {
            continue;
        }
        let mut acc = Toggle::default();
        for t in current.terms() {
            acc.add_all(&mul_sq(a, t));
        }
        current = acc.into_element(current.degree() + a);
    }
    current
}

/// The admissible normal form of `Sq^w`.
pub fn normalize(w: &Word) -> Element {
    apply_word(&w.0, &AdmissibleSeq::unit())
}

/// Product in the Steenrod algebra.
pub fn product(x: &Element, y: &Element) -> Element {
    let degree = x.degree() + y.degree();
    let mut acc = Toggle::default();
    for i in x.terms() {
        for j in y.terms() {
            acc.add_all(&apply_word(&i.0, j));
        }
    }
    acc.into_element(degree)
}

/// Mod-2 accumulator for terms.
#[derive(Default)]
pub(crate) struct Toggle(BTreeSet<AdmissibleSeq>);

impl Toggle {
    pub(crate) fn add(&mut self, t: &AdmissibleSeq) {
        if !self.0.remove(t) {
            self.0.insert(t.clone());
        }
    }

    pub(crate) fn add_all(&mut self, e: &Element) {
        for t in e.terms() {
            self.add(t);
        }
    }

    pub(crate) fn into_element(self, degree: u32) -> Element {
        Element::from_terms(degree, self.0).expect("homogeneous by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(e: &[u32]) -> AdmissibleSeq {
        AdmissibleSeq::new(e).unwrap()
    }

    fn el(d: u32, ts: &[&[u32]]) -> Element {
        Element::from_terms(d, ts.iter().map(|t| seq(t))).unwrap()
    }

    #[test]
    fn adem_examples() {
        assert_eq!(adem_expand(1, 2).unwrap(), el(3, &[&[3]]));
        assert_eq!(adem_expand(2, 2).unwrap(), el(4, &[&[3, 1]]));
        assert!(adem_expand(3, 2).unwrap().is_zero());
        assert_eq!(adem_expand(2, 3).unwrap(), el(5, &[&[5], &[4, 1]]));
        assert!(adem_expand(1, 1).unwrap().is_zero());
    }

    #[test]
    fn adem_rejects_admissible_pairs() {
        assert!(matches!(adem_expand(4, 2), Err(Error::Precondition(_))));
        assert!(adem_expand(0, 3).is_err());
    }

    #[test]
    fn normalize_examples() {
        let w = |e: &[u32]| Word::new(e).unwrap();
        assert_eq!(normalize(&w(&[5, 2])), el(7, &[&[5, 2]]));
        assert_eq!(normalize(&w(&[2, 2, 2])), el(6, &[&[5, 1]]));
        assert!(normalize(&w(&[1, 1])).is_zero());
        assert_eq!(normalize(&w(&[1, 1])).degree(), 2);
        assert_eq!(normalize(&w(&[])), Element::unit());
    }

    #[test]
    fn product_examples() {
        assert_eq!(product(&Element::unit(), &Element::sq(4)), Element::sq(4));
        let s12 = product(&Element::sq(1), &Element::sq(2));
        assert_eq!(s12, el(3, &[&[3]]));
        let s21 = product(&Element::sq(2), &Element::sq(1));
        let q1 = s12.checked_add(&s21).unwrap();
        assert_eq!(q1, el(3, &[&[3], &[2, 1]]));
    }

    #[test]
    fn seeding_rejects_garbage() {
        assert!(seed_adem_memo([((4, 2), Element::zero(6))]).is_err());
        assert!(seed_adem_memo([((1, 2), Element::zero(4))]).is_err());
        assert!(seed_adem_memo([((1, 2), Element::zero(3))]).is_err());
        assert_eq!(seed_adem_memo([((1, 2), Element::sq(3))]).unwrap(), 1);
    }
}
