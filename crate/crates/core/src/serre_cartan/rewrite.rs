//! Literal term rewriting on words with a selectable redex strategy.
//!
//! This is the slow path: it keeps a mod-2 multiset of words and rewrites one
//! inadmissible adjacent pair at a time until every word is admissible. It
//! exists to check that the normal form does not depend on where rewriting
//! starts; [`super::normalize`] is the memoized production path.

use std::collections::BTreeSet;

use super::adem::adem_cached;
use super::{AdmissibleSeq, Element, Entries, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Rightmost,
    Leftmost,
}

fn find_redex(w: &[u32], strategy: Strategy) -> Option<usize> {
    let mut pairs = w.windows(2).enumerate().filter(|(_, p)| p[0] < 2 * p[1]);
    match strategy {
        Strategy::Leftmost => pairs.next().map(|(i, _)| i),
        Strategy::Rightmost => pairs.next_back().map(|(i, _)| i),
    }
}

pub fn normalize_with(word: &Word, strategy: Strategy) -> Element {
    let degree = word.degree();
    let mut pending: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut done: BTreeSet<AdmissibleSeq> = BTreeSet::new();
    pending.insert(word.0.clone());

    while let Some(w) = pending.pop_first() {
        let Some(i) = find_redex(&w, strategy) else {
            let s = AdmissibleSeq::from_entries_unchecked(Entries::from_slice(&w));
            if !done.remove(&s) {
                done.insert(s);
            }
            continue;
        };
        for pair in adem_cached(w[i], w[i + 1]).terms() {
            let mut next = Vec::with_capacity(w.len());
            next.extend_from_slice(&w[..i]);
            next.extend(pair.entries().iter().copied());
            next.extend_from_slice(&w[i + 2..]);
            if !pending.remove(&next) {
                pending.insert(next);
            }
        }
    }
    Element::from_terms(degree, done).expect("rewriting preserves degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::serre_cartan::normalize;

    #[test]
    fn strategies_agree_on_small_words() {
        for w in [
            &[2, 2, 2][..],
            &[1, 2, 1, 2],
            &[3, 3, 3],
            &[1, 1],
            &[2, 4, 8],
        ] {
            let w = Word::new(w).unwrap();
            let r = normalize_with(&w, Strategy::Rightmost);
            let l = normalize_with(&w, Strategy::Leftmost);
            assert_eq!(r, l, "{w:?}");
            assert_eq!(r, normalize(&w), "{w:?}");
        }
    }
}
