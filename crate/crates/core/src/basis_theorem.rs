//! Admissible bases for `H*(bo) = A//A(1)` and `H*(bu) = A//E(1)`, the
//! generating-function dimension oracles, and the degree-by-degree checks
//! that the candidate sets really are bases.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::milnor::{milnor_antipode, milnor_to_admissible, MilnorElement, MilnorSeq};
use crate::quotients::{QuotientContext, SubalgebraKind};
use crate::serre_cartan::{enumerate_admissible, normalize, AdmissibleSeq, Element};

pub fn alpha(n: u64) -> u32 {
    n.count_ones()
}

/// `i = 2^n + 1` for some `n >= 1`.
pub fn is_two_power_plus_one(i: u32) -> bool {
    i >= 3 && (i - 1).is_power_of_two()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleTag {
    Bo,
    Bu,
    AnConjecture(u32),
}

impl ModuleTag {
    pub fn candidates(&self, d: u32) -> Vec<AdmissibleSeq> {
        match *self {
            ModuleTag::Bo => candidate_basis_bo(d),
            ModuleTag::Bu => candidate_basis_bu(d),
            ModuleTag::AnConjecture(n) => conjecture_basis_an(n, d),
        }
    }

    pub fn subalgebra(&self) -> SubalgebraKind {
        match *self {
            ModuleTag::Bo => SubalgebraKind::A(1),
            ModuleTag::Bu => SubalgebraKind::E1,
            ModuleTag::AnConjecture(n) => SubalgebraKind::A(n),
        }
    }
}

impl fmt::Display for ModuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleTag::Bo => f.write_str("bo"),
            ModuleTag::Bu => f.write_str("bu"),
            ModuleTag::AnConjecture(n) => write!(f, "an_conjecture({n})"),
        }
    }
}

impl FromStr for ModuleTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "bo" => return Ok(ModuleTag::Bo),
            "bu" => return Ok(ModuleTag::Bu),
            _ => {}
        }
        let inner = s
            .strip_prefix("an_conjecture(")
            .or_else(|| s.strip_prefix("an("))
            .and_then(|r| r.strip_suffix(')'));
        match inner.map(str::parse::<u32>) {
            Some(Ok(n)) => Ok(ModuleTag::AnConjecture(n)),
            _ => Err(Error::Parse {
                position: 0,
                message: format!("unknown module {s:?}; expected bo, bu or an(n)"),
            }),
        }
    }
}

impl Serialize for ModuleTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ModuleTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Admissible, last entry at least 4, no entry of the form `2^n + 1`.
pub fn candidate_basis_bo(d: u32) -> Vec<AdmissibleSeq> {
    enumerate_admissible(d, |i| !is_two_power_plus_one(i), 4, None)
}

/// As for `bo` but with last entry at least 2.
pub fn candidate_basis_bu(d: u32) -> Vec<AdmissibleSeq> {
    enumerate_admissible(d, |i| !is_two_power_plus_one(i), 2, None)
}

/// Admissible, last entry at least `2^{n+1}`, every entry with
/// `alpha(i - 1) > n`.
pub fn conjecture_basis_an(n: u32, d: u32) -> Vec<AdmissibleSeq> {
    enumerate_admissible(d, |i| alpha(i as u64 - 1) > n, 1 << (n + 1), None)
}

/// Coefficients of `prod 1/(1 - t^w)` through `t^max_d`.
pub fn partition_counts(weights: &[u32], max_d: u32) -> Vec<u64> {
    let mut c = vec![0u64; max_d as usize + 1];
    c[0] = 1;
    for &w in weights {
        let w = w as usize;
        for d in w..c.len() {
            c[d] += c[d - w];
        }
    }
    c
}

/// Weights `4, 6, 7, 15, 31, ...` truncated at `max_d`.
pub fn bo_weights(max_d: u32) -> Vec<u32> {
    let mut w = vec![4, 6];
    let mut i = 3;
    while (1u32 << i) - 1 <= max_d {
        w.push((1 << i) - 1);
        i += 1;
    }
    w.retain(|&x| x <= max_d.max(1));
    w
}

pub fn gf_dims_bo(max_d: u32) -> Vec<u64> {
    partition_counts(&bo_weights(max_d), max_d)
}

/// `dims_bu(d) = dims_bo(d) + dims_bo(d - 2)`.
pub fn gf_dims_bu(max_d: u32) -> Vec<u64> {
    let bo = gf_dims_bo(max_d);
    (0..=max_d as usize)
        .map(|d| bo[d] + if d >= 2 { bo[d - 2] } else { 0 })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisReport {
    pub module: ModuleTag,
    pub degree: u32,
    pub candidates: Vec<AdmissibleSeq>,
    pub candidate_count: usize,
    pub quotient_dim: usize,
    pub independence_rank: usize,
    pub admissible_dim: usize,
    pub ideal_rank: usize,
    pub spanning: bool,
    pub verdict: Verdict,
}

impl BasisReport {
    pub const TSV_HEADER: &'static str = "degree\tcount\tdim\trank\tverdict";

    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.degree,
            self.candidate_count,
            self.quotient_dim,
            self.independence_rank,
            self.verdict
        )
    }
}

fn check_tag(ctx: &QuotientContext, tag: ModuleTag) -> Result<()> {
    if ctx.spec().kind() != tag.subalgebra() {
        return Err(Error::TagMismatch {
            tag: tag.to_string(),
            subalgebra: ctx.spec().kind().to_string(),
        });
    }
    Ok(())
}

/// Checks that the images of `rows` form a basis of the quotient in degree `d`.
fn basis_report(
    ctx: &QuotientContext,
    module: ModuleTag,
    d: u32,
    candidates: Vec<AdmissibleSeq>,
    rows: &[Element],
) -> Result<BasisReport> {
    let slice = ctx.slice(d)?;
    let quotient_dim = slice.quotient_dim();
    let independence_rank = ctx.independence_rank(d, rows)?;
    let admissible_dim = slice.basis().len();
    let ideal_rank = slice.ideal_rank();
    let candidate_count = rows.len();
    let spanning = ideal_rank + independence_rank == admissible_dim;
    let ok = candidate_count == quotient_dim && quotient_dim == independence_rank && spanning;
    Ok(BasisReport {
        module,
        degree: d,
        candidates,
        candidate_count,
        quotient_dim,
        independence_rank,
        admissible_dim,
        ideal_rank,
        spanning,
        verdict: Verdict::from_bool(ok),
    })
}

pub fn verify_theorem(ctx: &QuotientContext, module: ModuleTag, d: u32) -> Result<BasisReport> {
    check_tag(ctx, module)?;
    let candidates = module.candidates(d);
    let rows: Vec<Element> = candidates.iter().cloned().map(Element::from_seq).collect();
    basis_report(ctx, module, d, candidates, &rows)
}

/// [`verify_theorem`] for every degree `0..=max`, in degree order.
pub fn verify_theorem_range(
    ctx: &QuotientContext,
    module: ModuleTag,
    max: u32,
) -> Result<Vec<BasisReport>> {
    crate::par_map_degrees(max, |d| verify_theorem(ctx, module, d))
        .into_iter()
        .collect()
}

/// The `bo` candidates in degree `d` together with `Sq^I Sq^2` for the `bo`
/// candidates `I` in degree `d - 2`, checked as a basis of `A//E(1)`.
pub fn verify_bu_suffix(ctx: &QuotientContext, d: u32) -> Result<BasisReport> {
    check_tag(ctx, ModuleTag::Bu)?;
    let mut candidates = candidate_basis_bo(d);
    let mut rows: Vec<Element> = candidates.iter().cloned().map(Element::from_seq).collect();
    if d >= 2 {
        for i in candidate_basis_bo(d - 2) {
            // bo candidates end in an entry >= 4, so I·2 stays admissible
            let mut e = i.entries().to_vec();
            e.push(2);
            let word = crate::serre_cartan::Word::new(&e)?;
            rows.push(normalize(&word));
            candidates.push(AdmissibleSeq::new(&e)?);
        }
    }
    basis_report(ctx, ModuleTag::Bu, d, candidates, &rows)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Degree49Report {
    pub milnor_element: String,
    pub degree: u32,
    pub antipode_term_count: usize,
    /// Complement sequences with a nonzero coordinate in `A//A(2)`.
    pub quotient_coordinates: Vec<AdmissibleSeq>,
    pub quotient_dim: usize,
    pub conjecture_count: usize,
    pub verdict: Verdict,
}

/// The antipode of `Sq(8,4,2,1)` survives in `A//A(2)` while the conjectured
/// basis is empty in its degree.
pub fn verify_degree49(ctx: &QuotientContext) -> Result<Degree49Report> {
    if ctx.spec().kind() != SubalgebraKind::A(2) {
        return Err(Error::TagMismatch {
            tag: ModuleTag::AnConjecture(2).to_string(),
            subalgebra: ctx.spec().kind().to_string(),
        });
    }
    let m = MilnorElement::from_seq(MilnorSeq::new(&[8, 4, 2, 1]));
    let chi = milnor_to_admissible(&milnor_antipode(&m));
    let d = chi.degree();
    let coords = ctx.reduce_terms(&chi)?;
    let conjecture_count = conjecture_basis_an(2, d).len();
    let quotient_dim = ctx.quotient_dim(d)?;
    let ok = !coords.is_empty() && conjecture_count == 0;
    Ok(Degree49Report {
        milnor_element: m.to_string(),
        degree: d,
        antipode_term_count: chi.len(),
        quotient_coordinates: coords,
        quotient_dim,
        conjecture_count,
        verdict: Verdict::from_bool(ok),
    })
}
