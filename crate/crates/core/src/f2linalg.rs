//! Dense linear algebra over the field with two elements.
//!
//! Vectors are packed into 64-bit words. [`Echelon`] is the workhorse: an
//! incrementally maintained row-echelon basis that answers "did this row
//! enlarge the span?" without re-reducing. [`TrackedEchelon`] additionally
//! remembers which inserted rows each basis row is built from, so a vector in
//! the span can be written as a combination of the inserted rows.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector in `F_2^length`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    /// Builds a vector from its support. Indices may repeat; repeats cancel.
    pub fn from_support<I: IntoIterator<Item = usize>>(len: usize, support: I) -> Result<Self> {
        let mut v = Self::zeros(len);
        for i in support {
            if i >= len {
                return Err(Error::Dimension {
                    expected: len,
                    found: i + 1,
                });
            }
            v.flip(i);
        }
        Ok(v)
    }

    /// Parses a string of `0`/`1` characters, leftmost character is index 0.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let chars: Vec<char> = bits.chars().filter(|c| !c.is_whitespace()).collect();
        let mut v = Self::zeros(chars.len());
        for (i, c) in chars.iter().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => {
                    return Err(Error::Parse {
                        position: i,
                        message: format!("unexpected character {c:?} in bit string"),
                    })
                }
            }
        }
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// `self += other`. Panics in debug builds on a length mismatch.
    #[inline]
    pub fn add_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD_BITS + t)
                }
            })
        })
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A matrix over `F_2` stored as a list of rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    column_count: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn new(column_count: usize) -> Self {
        Self {
            column_count,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(column_count: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != column_count) {
            return Err(Error::Dimension {
                expected: column_count,
                found: bad.len(),
            });
        }
        Ok(Self { column_count, rows })
    }

    /// Convenience constructor from bit strings such as `["110", "011"]`.
    pub fn from_bit_strings(rows: &[&str]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|s| BitVector::from_bits(s))
            .collect::<Result<Vec<_>>>()?;
        let cols = rows.first().map_or(0, BitVector::len);
        Self::from_rows(cols, rows)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            column_count: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            column_count: cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn column_count(&self) -> usize {
        self.column_count
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.column_count {
            return Err(Error::Dimension {
                expected: self.column_count,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }
}

/// Row-echelon form with the same row span. Zero rows are dropped and pivot
/// columns strictly increase down the rows.
pub fn echelonize(m: &BitMatrix) -> BitMatrix {
    let mut ech = Echelon::new(m.column_count);
    for row in &m.rows {
        ech.insert(row.clone());
    }
    ech.into_matrix()
}

pub fn rank(m: &BitMatrix) -> usize {
    let mut ech = Echelon::new(m.column_count);
    m.rows.iter().filter(|r| ech.insert((*r).clone())).count()
}

pub fn in_span(v: &BitVector, m: &BitMatrix) -> Result<bool> {
    if v.len() != m.column_count {
        return Err(Error::Dimension {
            expected: m.column_count,
            found: v.len(),
        });
    }
    let mut ech = Echelon::new(m.column_count);
    for row in &m.rows {
        ech.insert(row.clone());
    }
    Ok(ech.contains(v))
}

/// Incrementally maintained row-echelon basis.
///
/// Rows are kept sorted by pivot (lowest set coordinate), so reduction is a
/// single pass in pivot order.
#[derive(Clone, Debug)]
pub struct Echelon {
    column_count: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
    /// `pivot_row[c]` is the row whose pivot is column `c`.
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(column_count: usize) -> Self {
        Self {
            column_count,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; column_count],
        }
    }

    pub fn column_count(&self) -> usize {
        self.column_count
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.column_count
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis in place; the result is zero iff `v` was
    /// in the span.
    pub fn reduce_in_place(&self, v: &mut BitVector) {
        debug_assert_eq!(v.len(), self.column_count);
        // Row with pivot p only touches columns >= p, so a single left-to-right
        // sweep over set bits suffices.
        let mut start = 0;
        while let Some(c) = next_one_from(v, start) {
            if let Some(r) = self.pivot_row[c] {
                v.add_assign(&self.rows[r]);
            }
            start = c + 1;
        }
    }

    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut w = v.clone();
        self.reduce_in_place(&mut w);
        w
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts a row; returns whether the rank grew.
    pub fn insert(&mut self, mut v: BitVector) -> bool {
        self.reduce_in_place(&mut v);
        match v.first_one() {
            None => false,
            Some(p) => {
                self.push_reduced(p, v);
                true
            }
        }
    }

    fn push_reduced(&mut self, pivot: usize, v: BitVector) {
        let idx = self.rows.len();
        self.rows.push(v);
        self.pivots.push(pivot);
        self.pivot_row[pivot] = Some(idx);
    }

    /// Returns the basis as a matrix, rows in increasing pivot order.
    pub fn into_matrix(self) -> BitMatrix {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Option<BitVector>> = self.rows.into_iter().map(Some).collect();
        BitMatrix {
            column_count: self.column_count,
            rows: order.into_iter().map(|i| rows[i].take().unwrap()).collect(),
        }
    }

    pub fn to_matrix(&self) -> BitMatrix {
        self.clone().into_matrix()
    }
}

fn next_one_from(v: &BitVector, start: usize) -> Option<usize> {
    if start >= v.len {
        return None;
    }
    let mut k = start / WORD_BITS;
    let mut w = v.words[k] & (!0u64 << (start % WORD_BITS));
    loop {
        if w != 0 {
            return Some(k * WORD_BITS + w.trailing_zeros() as usize);
        }
        k += 1;
        if k >= v.words.len() {
            return None;
        }
        w = v.words[k];
    }
}

/// An [`Echelon`] that records, for every basis row, which inserted rows it is
/// the sum of.
#[derive(Clone, Debug)]
pub struct TrackedEchelon {
    basis: Echelon,
    combos: Vec<BitVector>,
    inserted: usize,
    capacity: usize,
}

impl TrackedEchelon {
    /// `capacity` bounds the number of rows that will ever be inserted.
    pub fn new(column_count: usize, capacity: usize) -> Self {
        Self {
            basis: Echelon::new(column_count),
            combos: Vec::new(),
            inserted: 0,
            capacity,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn echelon(&self) -> &Echelon {
        &self.basis
    }

    fn reduce_tracked(&self, v: &mut BitVector, combo: &mut BitVector) {
        let mut start = 0;
        while let Some(c) = next_one_from(v, start) {
            if let Some(r) = self.basis.pivot_row[c] {
                v.add_assign(&self.basis.rows[r]);
                combo.add_assign(&self.combos[r]);
            }
            start = c + 1;
        }
    }

    /// Inserts the next row (its index is the number of earlier inserts).
    /// Returns whether the rank grew.
    pub fn insert(&mut self, mut v: BitVector) -> bool {
        assert!(
            self.inserted < self.capacity,
            "tracked echelon capacity exceeded"
        );
        let mut combo = BitVector::unit(self.capacity, self.inserted);
        self.inserted += 1;
        self.reduce_tracked(&mut v, &mut combo);
        match v.first_one() {
            None => false,
            Some(p) => {
                self.basis.push_reduced(p, v);
                self.combos.push(combo);
                true
            }
        }
    }

    /// Writes `v` as a sum of inserted rows, or `None` if `v` is not in the span.
    /// Only independent rows (those whose insert grew the rank) appear.
    pub fn express(&self, v: &BitVector) -> Option<BitVector> {
        let mut v = v.clone();
        let mut combo = BitVector::zeros(self.capacity);
        self.reduce_tracked(&mut v, &mut combo);
        v.is_zero().then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_bit_strings(rows).unwrap()
    }

    #[test]
    fn identity_is_already_echelon() {
        let id = BitMatrix::identity(3);
        assert_eq!(echelonize(&id), id);
        assert_eq!(rank(&id), 3);
    }

    #[test]
    fn zero_matrix_echelonizes_to_nothing() {
        let z = BitMatrix::zero(2, 4);
        let e = echelonize(&z);
        assert_eq!(e.row_count(), 0);
        assert_eq!(e.column_count(), 4);
        assert_eq!(rank(&z), 0);
    }

    #[test]
    fn dependent_rows() {
        let a = m(&["110", "011", "101"]);
        let e = echelonize(&a);
        assert_eq!(e.row_count(), 2);
        assert_eq!(rank(&a), 2);
        assert_eq!(echelonize(&e), e);
    }

    #[test]
    fn span_membership() {
        let a = m(&["110", "011"]);
        assert!(in_span(&BitVector::zeros(3), &a).unwrap());
        assert!(in_span(&BitVector::from_bits("101").unwrap(), &a).unwrap());
        assert!(!in_span(&BitVector::from_bits("100").unwrap(), &a).unwrap());
        assert!(matches!(
            in_span(&BitVector::zeros(4), &a),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn support_out_of_range() {
        assert!(BitVector::from_support(3, [3]).is_err());
        let v = BitVector::from_support(130, [0, 64, 129, 64]).unwrap();
        assert_eq!(v.support().collect::<Vec<_>>(), vec![0, 129]);
    }

    #[test]
    fn tracked_express() {
        let mut t = TrackedEchelon::new(3, 3);
        assert!(t.insert(BitVector::from_bits("110").unwrap()));
        assert!(t.insert(BitVector::from_bits("011").unwrap()));
        assert!(!t.insert(BitVector::from_bits("101").unwrap()));
        let c = t.express(&BitVector::from_bits("101").unwrap()).unwrap();
        assert_eq!(c.support().collect::<Vec<_>>(), vec![0, 1]);
        assert!(t.express(&BitVector::from_bits("100").unwrap()).is_none());
    }

    #[test]
    fn pivots_increase_after_echelonize() {
        let a = m(&["0011", "1100", "0110", "1111"]);
        let e = echelonize(&a);
        let piv: Vec<usize> = e.rows().iter().map(|r| r.first_one().unwrap()).collect();
        assert!(piv.windows(2).all(|w| w[0] < w[1]));
    }
}
