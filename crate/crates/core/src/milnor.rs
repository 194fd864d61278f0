//! The Milnor basis `Sq(r_1, r_2, ...)`, its product, the antipode, and the
//! change of basis to and from admissible coordinates.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, LazyLock};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::f2linalg::{BitVector, TrackedEchelon};
use crate::serre_cartan::{admissible_basis, product, AdmissibleSeq, Element};

type Entries = SmallVec<[u32; 6]>;

/// Degree of the `i`-th Milnor generator dual to `xi_i`, `i >= 1`.
#[inline]
pub fn generator_degree(i: usize) -> u32 {
    (1u32 << i) - 1
}

/// A Milnor sequence with trailing zeros trimmed. The empty sequence is the
/// unit `Sq()`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<u32>", from = "Vec<u32>")]
pub struct MilnorSeq(Entries);

impl MilnorSeq {
    pub fn new(entries: &[u32]) -> Self {
        let mut e = Entries::from_slice(entries);
        while e.last() == Some(&0) {
            e.pop();
        }
        Self(e)
    }

    pub fn unit() -> Self {
        Self(Entries::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &r)| r * generator_degree(i + 1))
            .sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<MilnorSeq> for Vec<u32> {
    fn from(s: MilnorSeq) -> Self {
        s.0.to_vec()
    }
}

impl From<Vec<u32>> for MilnorSeq {
    fn from(v: Vec<u32>) -> Self {
        Self::new(&v)
    }
}

impl fmt::Display for MilnorSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        f.write_str("M[")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for MilnorSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sq{:?}", self.0.as_slice())
    }
}

/// A homogeneous element in Milnor coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MilnorElement {
    degree: u32,
    terms: BTreeSet<MilnorSeq>,
}

impl MilnorElement {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            terms: BTreeSet::new(),
        }
    }

    pub fn unit() -> Self {
        Self::from_seq(MilnorSeq::unit())
    }

    pub fn from_seq(s: MilnorSeq) -> Self {
        Self {
            degree: s.degree(),
            terms: BTreeSet::from([s]),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = MilnorSeq>>(degree: u32, terms: I) -> Result<Self> {
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

    /// Terms in descending lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &MilnorSeq> + ExactSizeIterator {
        self.terms.iter().rev()
    }

    fn toggle(&mut self, s: MilnorSeq) {
        if !self.terms.remove(&s) {
            self.terms.insert(s);
        }
    }

    pub fn checked_add(&self, other: &MilnorElement) -> Result<MilnorElement> {
        if self.degree != other.degree {
            return Err(Error::Inhomogeneous {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(MilnorElement {
            degree: self.degree,
            terms: self
                .terms
                .symmetric_difference(&other.terms)
                .cloned()
                .collect(),
        })
    }
}

impl fmt::Display for MilnorElement {
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

impl fmt::Debug for MilnorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MilnorElement(deg {}: {})", self.degree, self)
    }
}

/// Milnor sequences of total degree `d`, in descending lexicographic order.
pub fn milnor_basis(d: u32) -> Vec<MilnorSeq> {
    if d == 0 {
        return vec![MilnorSeq::unit()];
    }
    let mut top = 1;
    while generator_degree(top + 1) <= d {
        top += 1;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; top];
    fill(d, top, &mut cur, &mut out);
    out.sort();
    out.reverse();
    out
}

fn fill(rem: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<MilnorSeq>) {
    if i == 1 {
        cur[0] = rem;
        out.push(MilnorSeq::new(cur));
        return;
    }
    let g = generator_degree(i);
    for r in 0..=rem / g {
        cur[i - 1] = r;
        fill(rem - r * g, i - 1, cur, out);
    }
    cur[i - 1] = 0;
}

/// Product of two Milnor basis elements via Milnor matrices.
pub fn milnor_product_basis(r: &MilnorSeq, s: &MilnorSeq) -> MilnorElement {
    let rows = r.0.len();
    let cols = s.0.len();
    let mut out = MilnorElement::zero(r.degree() + s.degree());
    // x[i][j] for 1 <= i <= rows, 1 <= j <= cols
    let mut x = vec![vec![0u32; cols + 1]; rows + 1];
    let mut row_left: Vec<u32> = std::iter::once(0).chain(r.0.iter().copied()).collect();
    let mut col_left: Vec<u32> = std::iter::once(0).chain(s.0.iter().copied()).collect();
    matrices(
        1,
        1,
        rows,
        cols,
        &mut x,
        &mut row_left,
        &mut col_left,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn matrices(
    i: usize,
    j: usize,
    rows: usize,
    cols: usize,
    x: &mut Vec<Vec<u32>>,
    row_left: &mut Vec<u32>,
    col_left: &mut Vec<u32>,
    out: &mut MilnorElement,
) {
    if i > rows || cols == 0 {
        if let Some(t) = diagonal_sums(rows, cols, x, row_left, col_left) {
            out.toggle(t);
        }
        return;
    }
    let (ni, nj) = if j == cols { (i + 1, 1) } else { (i, j + 1) };
    let max = (row_left[i] >> j).min(col_left[j]);
    for v in 0..=max {
        x[i][j] = v;
        row_left[i] -= v << j;
        col_left[j] -= v;
        matrices(ni, nj, rows, cols, x, row_left, col_left, out);
        row_left[i] += v << j;
        col_left[j] += v;
    }
    x[i][j] = 0;
}

/// Diagonal sums `t_n = sum_{i+j=n} x_ij`, or `None` when some diagonal's
/// multinomial coefficient is even.
fn diagonal_sums(
    rows: usize,
    cols: usize,
    x: &[Vec<u32>],
    row_left: &[u32],
    col_left: &[u32],
) -> Option<MilnorSeq> {
    let entry = |i: usize, j: usize| -> u32 {
        match (i, j) {
            (0, 0) => 0,
            (i, 0) => row_left[i],
            (0, j) => col_left[j],
            (i, j) => x[i][j],
        }
    };
    let mut t = Entries::new();
    for n in 1..=rows + cols {
        let mut seen = 0u32;
        let mut sum = 0u32;
        for i in n.saturating_sub(cols)..=n.min(rows) {
            let v = entry(i, n - i);
            if seen & v != 0 {
                return None;
            }
            seen |= v;
            sum += v;
        }
        t.push(sum);
    }
    Some(MilnorSeq::new(&t))
}

pub fn milnor_product(x: &MilnorElement, y: &MilnorElement) -> MilnorElement {
    let mut out = MilnorElement::zero(x.degree + y.degree);
    for r in &x.terms {
        for s in &y.terms {
            for t in milnor_product_basis(r, s).terms {
                out.toggle(t);
            }
        }
    }
    out
}

/// Per-degree change of basis between admissible and Milnor coordinates.
struct Conversion {
    milnor: Vec<MilnorSeq>,
    milnor_index: HashMap<MilnorSeq, usize>,
    images: Vec<BitVector>,
    solver: TrackedEchelon,
}

static CONVERSIONS: LazyLock<DashMap<u32, Arc<Conversion>>> = LazyLock::new(DashMap::new);

/// `Sq^{i_1} ... Sq^{i_k}` multiplied out in the Milnor basis.
pub fn admissible_seq_to_milnor(seq: &AdmissibleSeq) -> MilnorElement {
    let mut acc = MilnorElement::unit();
    for &i in seq.entries() {
        acc = milnor_product(&acc, &MilnorElement::from_seq(MilnorSeq::new(&[i])));
    }
    acc
}

fn conversion(d: u32) -> Arc<Conversion> {
    if let Some(c) = CONVERSIONS.get(&d) {
        return Arc::clone(&c);
    }
    let adm = admissible_basis(d);
    let milnor = milnor_basis(d);
    let milnor_index: HashMap<MilnorSeq, usize> = milnor
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    assert_eq!(milnor.len(), adm.len(), "basis sizes differ in degree {d}");
    let mut solver = TrackedEchelon::new(milnor.len(), adm.len());
    let mut images = Vec::with_capacity(adm.len());
    for seq in adm.seqs() {
        let m = admissible_seq_to_milnor(seq);
        let mut v = BitVector::zeros(milnor.len());
        for t in m.terms() {
            v.flip(milnor_index[t]);
        }
        let grew = solver.insert(v.clone());
        assert!(grew, "change of basis is singular in degree {d}");
        images.push(v);
    }
    let c = Arc::new(Conversion {
        milnor,
        milnor_index,
        images,
        solver,
    });
    CONVERSIONS.entry(d).or_insert(c).clone()
}

pub fn admissible_to_milnor(x: &Element) -> MilnorElement {
    let d = x.degree();
    let conv = conversion(d);
    let adm = admissible_basis(d);
    let mut v = BitVector::zeros(conv.milnor.len());
    for t in x.terms() {
        v.add_assign(&conv.images[adm.index_of(t).expect("admissible term")]);
    }
    MilnorElement::from_terms(d, v.support().map(|i| conv.milnor[i].clone())).expect("homogeneous")
}

pub fn milnor_to_admissible(x: &MilnorElement) -> Element {
    let d = x.degree();
    let conv = conversion(d);
    let mut v = BitVector::zeros(conv.milnor.len());
    for t in x.terms() {
        v.flip(conv.milnor_index[t]);
    }
    let combo = conv
        .solver
        .express(&v)
        .expect("change of basis is invertible");
    admissible_basis(d).element(&combo)
}

static CHI_SQ: LazyLock<DashMap<u32, Arc<Element>>> = LazyLock::new(DashMap::new);

/// `chi(Sq^n) = sum_{i=1..n} Sq^i chi(Sq^{n-i})`.
pub fn antipode_sq(n: u32) -> Arc<Element> {
    if n == 0 {
        return Arc::new(Element::unit());
    }
    if let Some(v) = CHI_SQ.get(&n) {
        return Arc::clone(&v);
    }
    let mut acc = Element::zero(n);
    for i in 1..=n {
        acc = acc
            .checked_add(&product(&Element::sq(i), &antipode_sq(n - i)))
            .expect("same degree");
    }
    let v = Arc::new(acc);
    CHI_SQ.entry(n).or_insert(v).clone()
}

/// The antipode in admissible coordinates: `chi(Sq^I) = chi(Sq^{i_k}) ... chi(Sq^{i_1})`.
pub fn antipode(x: &Element) -> Element {
    let mut out = Element::zero(x.degree());
    for seq in x.terms() {
        let mut acc = Element::unit();
        for &i in seq.entries() {
            acc = product(&antipode_sq(i), &acc);
        }
        out = out.checked_add(&acc).expect("same degree");
    }
    out
}

pub fn milnor_antipode(x: &MilnorElement) -> MilnorElement {
    admissible_to_milnor(&antipode(&milnor_to_admissible(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> MilnorElement {
        MilnorElement::from_seq(MilnorSeq::new(e))
    }

    fn adm(d: u32, ts: &[&[u32]]) -> Element {
        Element::from_terms(d, ts.iter().map(|t| AdmissibleSeq::new(t).unwrap())).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(MilnorSeq::new(&[8, 4, 2, 1]).degree(), 49);
        assert_eq!(MilnorSeq::new(&[0, 1, 0, 0]).entries(), &[0, 1]);
    }

    #[test]
    fn products() {
        assert!(milnor_product(&m(&[1]), &m(&[1])).is_zero());
        let q1 = milnor_product(&m(&[1]), &m(&[2]))
            .checked_add(&milnor_product(&m(&[2]), &m(&[1])))
            .unwrap();
        assert_eq!(q1, m(&[0, 1]));
        let x = m(&[3, 1]);
        assert_eq!(milnor_product(&MilnorElement::unit(), &x), x);
        assert_eq!(milnor_product(&x, &MilnorElement::unit()), x);
    }

    #[test]
    fn conversions() {
        assert_eq!(milnor_to_admissible(&m(&[4])), Element::sq(4));
        assert_eq!(milnor_to_admissible(&m(&[0, 1])), adm(3, &[&[3], &[2, 1]]));
        assert_eq!(admissible_to_milnor(&adm(3, &[&[3], &[2, 1]])), m(&[0, 1]));
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(antipode(&Element::sq(1)), Element::sq(1));
        assert_eq!(antipode(&Element::sq(2)), Element::sq(2));
        assert_eq!(antipode(&Element::sq(3)), adm(3, &[&[2, 1]]));
    }

    #[test]
    fn basis_counts() {
        assert_eq!(milnor_basis(0), vec![MilnorSeq::unit()]);
        assert_eq!(
            milnor_basis(3),
            vec![MilnorSeq::new(&[3]), MilnorSeq::new(&[0, 1])]
        );
        for d in 0..=30 {
            assert_eq!(
                milnor_basis(d).len(),
                admissible_basis(d).len(),
                "degree {d}"
            );
        }
    }
}
