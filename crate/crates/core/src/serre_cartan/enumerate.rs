use std::collections::HashMap;
use std::sync::{Arc, LazyLock};

use dashmap::DashMap;

use super::{AdmissibleSeq, Element, Entries};
use crate::f2linalg::BitVector;

/// Admissible sequences of degree `d` whose entries all satisfy `allowed`,
/// whose last entry is at least `min_last`, and whose excess is at most
/// `max_excess` when given. Sorted in descending lexicographic order.
///
/// Degree 0 always yields the unit.
pub fn enumerate_admissible<F>(
    d: u32,
    allowed: F,
    min_last: u32,
    max_excess: Option<i64>,
) -> Vec<AdmissibleSeq>
where
    F: Fn(u32) -> bool,
{
    if d == 0 {
        return vec![AdmissibleSeq::unit()];
    }
    let mut out = Vec::new();
    let mut prefix = Entries::new();
    for first in (1..=d).rev() {
        // excess = 2 i_1 - d
        if let Some(m) = max_excess {
            if 2 * first as i64 - d as i64 > m {
                continue;
            }
        }
        if !allowed(first) {
            continue;
        }
        prefix.push(first);
        extend(
            d - first,
            first / 2,
            &allowed,
            min_last,
            &mut prefix,
            &mut out,
        );
        prefix.pop();
    }
    out
}

fn extend<F: Fn(u32) -> bool>(
    remaining: u32,
    max_next: u32,
    allowed: &F,
    min_last: u32,
    prefix: &mut Entries,
    out: &mut Vec<AdmissibleSeq>,
) {
    if remaining == 0 {
        if prefix.last().is_some_and(|&l| l >= min_last) {
            out.push(AdmissibleSeq::from_entries_unchecked(prefix.clone()));
        }
        return;
    }
    for next in (1..=max_next.min(remaining)).rev() {
        // an admissible tail after `next` has degree at most next - 1
        if remaining - next >= next {
            break;
        }
        // entries decrease, so every entry is bounded below by the last one
        if next < min_last || !allowed(next) {
            continue;
        }
        prefix.push(next);
        extend(remaining - next, next / 2, allowed, min_last, prefix, out);
        prefix.pop();
    }
}

/// The admissible basis of one degree with a coordinate lookup.
#[derive(Debug)]
pub struct BasisIndex {
    degree: u32,
    seqs: Vec<AdmissibleSeq>,
    index: HashMap<AdmissibleSeq, usize>,
}

impl BasisIndex {
    fn build(degree: u32) -> Self {
        let seqs = enumerate_admissible(degree, |_| true, 1, None);
        let index = seqs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self {
            degree,
            seqs,
            index,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn seqs(&self) -> &[AdmissibleSeq] {
        &self.seqs
    }

    pub fn index_of(&self, s: &AdmissibleSeq) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Coordinates of `x`, which must have this degree.
    pub fn vector(&self, x: &Element) -> BitVector {
        assert_eq!(
            x.degree(),
            self.degree,
            "element degree does not match basis"
        );
        let mut v = BitVector::zeros(self.seqs.len());
        for t in x.terms() {
            v.flip(self.index[t]);
        }
        v
    }

    pub fn element(&self, v: &BitVector) -> Element {
        Element::from_terms(self.degree, v.support().map(|i| self.seqs[i].clone()))
            .expect("basis elements share a degree")
    }
}

static BASES: LazyLock<DashMap<u32, Arc<BasisIndex>>> = LazyLock::new(DashMap::new);

/// The full admissible basis in degree `d` (cached).
pub fn admissible_basis(d: u32) -> Arc<BasisIndex> {
    if let Some(b) = BASES.get(&d) {
        return Arc::clone(&b);
    }
    let b = Arc::new(BasisIndex::build(d));
    BASES.entry(d).or_insert(b).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seqs(v: &[&[u32]]) -> Vec<AdmissibleSeq> {
        v.iter().map(|e| AdmissibleSeq::new(e).unwrap()).collect()
    }

    /// Exhaustive oracle: every composition of `d`, filtered.
    fn brute(d: u32) -> Vec<Vec<u32>> {
        fn go(rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if rem == 0 {
                out.push(cur.clone());
                return;
            }
            for x in 1..=rem {
                cur.push(x);
                go(rem - x, cur, out);
                cur.pop();
            }
        }
        let mut all = Vec::new();
        go(d, &mut Vec::new(), &mut all);
        let mut adm: Vec<Vec<u32>> = all
            .into_iter()
            .filter(|c| super::super::is_admissible(c))
            .collect();
        adm.sort();
        adm.reverse();
        adm
    }

    #[test]
    fn degree_seven() {
        assert_eq!(
            enumerate_admissible(7, |_| true, 1, None),
            seqs(&[&[7], &[6, 1], &[5, 2], &[4, 2, 1]])
        );
    }

    #[test]
    fn constrained() {
        let not_two_power_plus_one = |i: u32| !(i >= 3 && (i - 1).is_power_of_two());
        assert_eq!(
            enumerate_admissible(4, not_two_power_plus_one, 4, None),
            seqs(&[&[4]])
        );
        assert_eq!(
            enumerate_admissible(0, |_| false, 9, None),
            vec![AdmissibleSeq::unit()]
        );
    }

    #[test]
    fn matches_brute_force() {
        for d in 1..=16 {
            let got: Vec<Vec<u32>> = enumerate_admissible(d, |_| true, 1, None)
                .into_iter()
                .map(|s| s.entries().to_vec())
                .collect();
            assert_eq!(got, brute(d), "degree {d}");
        }
    }

    #[test]
    fn excess_filter() {
        let all = enumerate_admissible(12, |_| true, 1, None);
        let low = enumerate_admissible(12, |_| true, 1, Some(2));
        let expect: Vec<_> = all.into_iter().filter(|s| s.excess() <= 2).collect();
        assert_eq!(low, expect);
    }
}
