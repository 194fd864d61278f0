use std::sync::LazyLock;

use proptest::prelude::*;

use steenrod::basis_theorem::{
    candidate_basis_bo, conjecture_basis_an, gf_dims_bo, partition_counts,
};
use steenrod::f2linalg::{echelonize, in_span, rank, BitMatrix, BitVector};
use steenrod::milnor::{antipode_sq, milnor_basis, milnor_to_admissible, MilnorElement};
use steenrod::parse::{parse_element, parse_sw_polynomial};
use steenrod::quotients::{QuotientContext, SubalgebraSpec};
use steenrod::serre_cartan::{
    admissible_basis, mul_sq, normalize, product, AdmissibleSeq, Element, Word,
};
use steenrod::thom_sw::{wu_sq, Model, SWPolynomial};

static A1: LazyLock<QuotientContext> =
    LazyLock::new(|| QuotientContext::new(SubalgebraSpec::a(1), 30));

fn bit_rows(cols: usize, max_rows: usize) -> impl Strategy<Value = BitMatrix> {
    prop::collection::vec(prop::collection::vec(any::<bool>(), cols), 0..=max_rows).prop_map(
        move |rows| {
            let rows = rows
                .into_iter()
                .map(|r| {
                    BitVector::from_support(
                        cols,
                        r.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
                    )
                    .unwrap()
                })
                .collect();
            BitMatrix::from_rows(cols, rows).unwrap()
        },
    )
}

fn element_of_degree(d: u32) -> impl Strategy<Value = Element> {
    let n = admissible_basis(d).len();
    prop::collection::vec(any::<bool>(), n).prop_map(move |mask| {
        let basis = admissible_basis(d);
        let terms = basis
            .seqs()
            .iter()
            .zip(mask)
            .filter(|(_, m)| *m)
            .map(|(s, _)| s.clone());
        Element::from_terms(d, terms).unwrap()
    })
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(1u32..=10, 1..=5).prop_map(|v| Word::new(&v).unwrap())
}

proptest! {
    #[test]
    fn rank_is_bounded(m in bit_rows(12, 16)) {
        let r = rank(&m);
        prop_assert!(r <= m.row_count().min(12));
    }

    #[test]
    fn echelon_is_idempotent_and_spans_the_same(m in bit_rows(10, 12)) {
        let e = echelonize(&m);
        prop_assert_eq!(echelonize(&e), e.clone());
        prop_assert_eq!(rank(&e), rank(&m));
        for row in m.rows() {
            prop_assert!(in_span(row, &e).unwrap());
        }
    }

    #[test]
    fn sums_of_rows_stay_in_span(m in bit_rows(9, 8), pick in prop::collection::vec(any::<bool>(), 8)) {
        let mut v = BitVector::zeros(9);
        for (row, take) in m.rows().iter().zip(pick) {
            if take {
                v.add_assign(row);
            }
        }
        prop_assert!(in_span(&v, &m).unwrap());
    }

    #[test]
    fn normal_forms_are_admissible_and_stable(w in word()) {
        let x = normalize(&w);
        prop_assert_eq!(x.degree(), w.degree());
        for t in x.terms() {
            prop_assert!(t.as_word().is_admissible());
            prop_assert_eq!(normalize(&t.as_word()), Element::from_seq(t.clone()));
        }
    }

    #[test]
    fn printed_normal_forms_reparse(w in word()) {
        let x = normalize(&w);
        let y = parse_element(&x.to_string()).unwrap();
        if x.is_zero() {
            prop_assert!(y.is_zero());
        } else {
            prop_assert_eq!(y, x);
        }
    }

    #[test]
    fn product_is_bilinear((x, y, z) in (0u32..=8, 0u32..=8).prop_flat_map(|(a, b)| {
        (element_of_degree(a), element_of_degree(a), element_of_degree(b))
    })) {
        let lhs = product(&x.checked_add(&y).unwrap(), &z);
        let rhs = product(&x, &z).checked_add(&product(&y, &z)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn left_action_stays_in_bound(a in 1u32..=12, d in 1u32..=20, pick in any::<prop::sample::Index>()) {
        let basis = admissible_basis(d);
        let seq = pick.get(basis.seqs()).clone();
        let b = seq.leading();
        let lead = mul_sq(a, &seq).max_leading();
        prop_assert!(lead <= steenrod::serre_cartan::left_action_bound(a, b));
    }

    #[test]
    fn t_filtration_is_nested(x in (1u32..=16).prop_flat_map(element_of_degree), b in 0u32..16) {
        if x.in_t(b) {
            prop_assert!(x.in_t(b + 1));
        }
        if A1.in_t_mod_ideal(&x, b).unwrap() {
            prop_assert!(A1.in_t_mod_ideal(&x, b + 1).unwrap());
        }
    }

    #[test]
    fn quotient_reduction_is_linear((x, y) in (0u32..=24).prop_flat_map(|d| (element_of_degree(d), element_of_degree(d)))) {
        let mut sum = A1.reduce(&x).unwrap();
        sum.add_assign(&A1.reduce(&y).unwrap());
        prop_assert_eq!(A1.reduce(&x.checked_add(&y).unwrap()).unwrap(), sum);
    }

    #[test]
    fn ideal_elements_reduce_to_zero(x in (0u32..=18).prop_flat_map(element_of_degree), pick in any::<prop::sample::Index>()) {
        let generators = [Element::sq(1), Element::sq(2)];
        let g = pick.get(&generators);
        if x.degree() + g.degree() <= 30 {
            prop_assert!(A1.is_zero_in_quotient(&product(&x, g)).unwrap());
        }
    }

    #[test]
    fn polynomials_reparse(text in prop::collection::vec(prop::collection::vec(1u32..=4, 1..=3), 1..=4)) {
        let terms: Vec<String> = text
            .iter()
            .filter(|m| m.iter().sum::<u32>() == text[0].iter().sum::<u32>())
            .map(|m| m.iter().map(|i| format!("w[{i}]")).collect::<Vec<_>>().join("*"))
            .collect();
        let p = parse_sw_polynomial(&terms.join(" + ")).unwrap();
        if !p.is_zero() {
            prop_assert_eq!(parse_sw_polynomial(&p.to_string()).unwrap(), p);
        }
    }
}

#[test]
fn wu_formula_invariants() {
    for model in [Model::Bo, Model::Bso] {
        for j in 1..=12 {
            for i in 0..=j {
                let p = wu_sq(i, j, model);
                assert_eq!(p.degree(), i + j);
                assert_eq!(p.restrict(model), p);
            }
            let w = if model == Model::Bso && j == 1 {
                SWPolynomial::zero(1)
            } else {
                SWPolynomial::w(j)
            };
            assert_eq!(wu_sq(0, j, model), w);
        }
    }
    assert_eq!(wu_sq(1, 2, Model::Bo).to_string(), "w[3] + w[2]*w[1]");
    assert_eq!(wu_sq(1, 2, Model::Bso), SWPolynomial::w(3));
}

#[test]
fn antipode_of_sq_is_the_sum_of_milnor_basis() {
    for n in 0..=24 {
        let all = MilnorElement::from_terms(n, milnor_basis(n)).unwrap();
        assert_eq!(*antipode_sq(n), milnor_to_admissible(&all), "n = {n}");
    }
}

#[test]
fn bo_dimension_series() {
    let dims = gf_dims_bo(56);
    for d in 0..=56 {
        assert_eq!(
            dims[d as usize],
            candidate_basis_bo(d).len() as u64,
            "d = {d}"
        );
    }
    assert_eq!(&dims[..9], &[1, 0, 0, 0, 1, 0, 1, 1, 1]);
    assert_eq!(partition_counts(&[1], 5), vec![1; 6]);
    assert_eq!(partition_counts(&[1, 2], 4), vec![1, 1, 2, 2, 3]);
}

#[test]
fn first_conjecture_basis_is_the_bo_basis() {
    for d in 0..=56 {
        assert_eq!(conjecture_basis_an(1, d), candidate_basis_bo(d), "d = {d}");
    }
}

#[test]
fn zeroth_conjecture_basis_spans_the_quotient_by_sq1() {
    let a0 = QuotientContext::new(SubalgebraSpec::a(0), 24);
    for d in 0..=24 {
        let rows: Vec<Element> = conjecture_basis_an(0, d)
            .into_iter()
            .map(Element::from_seq)
            .collect();
        let dim = a0.quotient_dim(d).unwrap();
        assert_eq!(rows.len(), dim, "d = {d}");
        assert_eq!(a0.independence_rank(d, &rows).unwrap(), dim, "d = {d}");
    }
}

#[test]
fn generator_ideal_matches_the_augmentation_ideal() {
    for d in 1..=24 {
        let slice = A1.slice(d).unwrap();
        let mut from_generators = steenrod::f2linalg::Echelon::new(slice.basis().len());
        for g in [Element::sq(1), Element::sq(2)] {
            if g.degree() > d {
                continue;
            }
            for s in admissible_basis(d - g.degree()).seqs() {
                let x = product(&Element::from_seq(s.clone()), &g);
                from_generators.insert(slice.basis().vector(&x));
            }
        }
        assert_eq!(from_generators.rank(), slice.ideal_rank(), "d = {d}");
    }
}

#[test]
fn unit_sequence_is_neutral() {
    let u = Element::from_seq(AdmissibleSeq::unit());
    for d in 0..=10 {
        for s in admissible_basis(d).seqs() {
            let x = Element::from_seq(s.clone());
            assert_eq!(product(&u, &x), x);
            assert_eq!(product(&x, &u), x);
        }
    }
}
