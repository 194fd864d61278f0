use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use steenrod::basis_theorem::{
    alpha, verify_bu_suffix, verify_degree49, verify_theorem_range, BasisReport, ModuleTag,
};
use steenrod::quotients::{
    verify_excess_lemma, verify_induction, verify_prop_an, verify_stringk, QuotientContext,
    SubalgebraSpec,
};
use steenrod::serre_cartan::{
    admissible_basis, check_left_action, enumerate_admissible, AdmissibleSeq,
};
use steenrod::thom_sw::{verify_bspin_formulas, verify_thom_lemma};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TheoremBo,
    TheoremBu,
    TheoremAn,
    PropBasic,
    PropAn,
    Stringk,
    Induction,
    Excess,
    ThomLemma,
    Bspin,
    Degree49,
}

impl Suite {
    pub fn name(self) -> String {
        self.to_possible_value().unwrap().get_name().to_string()
    }
}

#[derive(Args, Clone, Debug, Default, Serialize)]
pub struct Ranges {
    /// Largest degree checked (suite default if omitted).
    #[arg(long)]
    pub max_degree: Option<u32>,
    /// prop-basic: largest a in Sq^a.
    #[arg(long)]
    pub a_max: Option<u32>,
    /// prop-basic: largest leading entry b.
    #[arg(long)]
    pub b_max: Option<u32>,
    /// prop-basic: largest degree |I|.
    #[arg(long)]
    pub degree_cap: Option<u32>,
    /// prop-basic: largest b whose bound 2b-1 must be attained.
    #[arg(long)]
    pub sharp_b_max: Option<u32>,
    /// prop-an, theorem-an: the subalgebra A(n). prop-an runs A(1) and A(2)
    /// when omitted; theorem-an defaults to A(2).
    #[arg(long)]
    pub n: Option<u32>,
    /// prop-an: largest m.
    #[arg(long)]
    pub m_max: Option<u32>,
    /// stringk, excess, induction, bspin: largest n.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// bspin: largest k.
    #[arg(long)]
    pub k_max: Option<u32>,
    /// theorem-bu: largest degree of the suffix-basis check.
    #[arg(long)]
    pub suffix_max: Option<u32>,
}

#[derive(Serialize)]
pub struct Row {
    pub check: String,
    pub degree: Option<u32>,
    pub passed: bool,
    pub detail: Value,
    #[serde(skip)]
    pub tsv: String,
}

#[derive(Serialize)]
pub struct Outcome {
    pub suite: Suite,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    pub parameters: Value,
    pub summary: String,
    pub results: Vec<Row>,
    #[serde(skip)]
    pub tsv_header: String,
}

pub const GENERIC_TSV_HEADER: &str = "check\tdegree\tverdict";

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn row(check: String, degree: Option<u32>, passed: bool, detail: Value) -> Row {
    let deg = degree.map_or("-".to_string(), |d| d.to_string());
    let tsv = format!("{check}\t{deg}\t{}", verdict(passed));
    Row {
        check,
        degree,
        passed,
        detail,
        tsv,
    }
}

fn basis_row(check: &str, r: BasisReport) -> anyhow::Result<Row> {
    Ok(Row {
        check: check.to_string(),
        degree: Some(r.degree),
        passed: r.verdict.is_pass(),
        tsv: format!("{check}\t{}", r.tsv_row()),
        detail: serde_json::to_value(r)?,
    })
}

fn j_sequences(n: u32, max: u32) -> Vec<AdmissibleSeq> {
    let head = (1u32 << (n + 1)) + 1;
    (head..=max)
        .flat_map(|d| enumerate_admissible(d, |_| true, 1, None))
        .filter(|s| s.leading() == head)
        .collect()
}

pub fn run(suite: Suite, r: &Ranges) -> anyhow::Result<Outcome> {
    let mut tsv_header = GENERIC_TSV_HEADER.to_string();
    let mut summary = String::new();
    let parameters;
    let mut rows = Vec::new();
    match suite {
        Suite::TheoremBo => {
            let max = r.max_degree.unwrap_or(56);
            parameters = json!({ "max_degree": max });
            let ctx = QuotientContext::new(SubalgebraSpec::a(1), max);
            for rep in verify_theorem_range(&ctx, ModuleTag::Bo, max)? {
                rows.push(basis_row("basis", rep)?);
            }
            tsv_header = format!("check\t{}", BasisReport::TSV_HEADER);
        }
        Suite::TheoremBu => {
            let max = r.max_degree.unwrap_or(56);
            let suffix = r.suffix_max.unwrap_or(40).min(max);
            parameters = json!({ "max_degree": max, "suffix_max": suffix });
            let ctx = QuotientContext::new(SubalgebraSpec::e1(), max);
            for rep in verify_theorem_range(&ctx, ModuleTag::Bu, max)? {
                rows.push(basis_row("basis", rep)?);
            }
            for d in 0..=suffix {
                rows.push(basis_row("suffix", verify_bu_suffix(&ctx, d)?)?);
            }
            tsv_header = format!("check\t{}", BasisReport::TSV_HEADER);
        }
        Suite::TheoremAn => {
            let n = r.n.unwrap_or(2);
            let max = r.max_degree.unwrap_or(49);
            parameters = json!({ "n": n, "max_degree": max });
            let ctx = QuotientContext::new(SubalgebraSpec::a(n), max);
            for rep in verify_theorem_range(&ctx, ModuleTag::AnConjecture(n), max)? {
                rows.push(basis_row("basis", rep)?);
            }
            tsv_header = format!("check\t{}", BasisReport::TSV_HEADER);
        }
        Suite::PropBasic => {
            let (a_max, b_max) = (r.a_max.unwrap_or(24), r.b_max.unwrap_or(24));
            let cap = r.degree_cap.unwrap_or(48);
            let sharp = r.sharp_b_max.unwrap_or(12.min(b_max));
            parameters =
                json!({ "a_max": a_max, "b_max": b_max, "degree_cap": cap, "sharp_b_max": sharp });
            let rep = check_left_action(a_max, b_max, cap);
            for (b, witness) in &rep.sharpness {
                let violations: Vec<Value> = rep
                    .violations
                    .iter()
                    .filter(|(_, s, _, _)| s.leading() == *b)
                    .map(|(a, s, lead, bound)| json!({ "a": a, "sequence": s.to_string(), "leading": lead, "bound": bound }))
                    .collect();
                let ok = violations.is_empty() && (*b > sharp || witness.is_some());
                let witness = witness
                    .as_ref()
                    .map(|(a, s)| json!({ "a": a, "sequence": s.to_string() }));
                rows.push(row(
                    format!("b={b}"),
                    None,
                    ok,
                    json!({ "b": b, "violations": violations, "sharpness_witness": witness }),
                ));
            }
            summary = format!("{} products checked", rep.instances);
        }
        Suite::PropAn => {
            let cases: Vec<(u32, u32)> = match r.n {
                Some(n) => vec![(n, r.m_max.unwrap_or(48))],
                None => vec![(1, r.m_max.unwrap_or(48)), (2, r.m_max.unwrap_or(40))],
            };
            parameters = json!({ "cases": cases.iter().map(|(n, m)| json!({ "n": n, "m_max": m })).collect::<Vec<_>>() });
            for (n, m_max) in cases {
                let ctx = QuotientContext::new(SubalgebraSpec::a(n), m_max + 1);
                for m in (1..=m_max).filter(|&m| alpha(m as u64) <= n) {
                    let mem = verify_prop_an(&ctx, m)?;
                    rows.push(row(
                        format!("A({n}) m={m}"),
                        Some(m + 1),
                        mem.member,
                        serde_json::to_value(mem)?,
                    ));
                }
            }
        }
        Suite::Stringk | Suite::Excess => {
            let n_max = r.n_max.unwrap_or(3);
            let max = r.max_degree.unwrap_or(40);
            parameters = json!({ "n_max": n_max, "max_degree": max });
            let ctx = QuotientContext::new(SubalgebraSpec::a(1), max);
            for n in 0..=n_max {
                for j in j_sequences(n, max) {
                    let (ok, detail) = if suite == Suite::Stringk {
                        let rep = verify_stringk(&ctx, n, &j)?;
                        (rep.membership.member, serde_json::to_value(rep)?)
                    } else {
                        let rep = verify_excess_lemma(&ctx, n, &j)?;
                        (rep.membership.member, serde_json::to_value(rep)?)
                    };
                    rows.push(row(format!("n={n} J={j}"), Some(j.degree()), ok, detail));
                }
            }
        }
        Suite::Induction => {
            let n_max = r.n_max.unwrap_or(3);
            let max = r.max_degree.unwrap_or(36);
            parameters = json!({ "n_max": n_max, "max_degree": max });
            let ctx = QuotientContext::new(SubalgebraSpec::a(1), max);
            for n in 0..=n_max {
                let head = (1u32 << (n + 1)) + 1;
                for d in 1..=max.saturating_sub(head) {
                    for tail in enumerate_admissible(d, |_| true, 1, None) {
                        if tail.leading() > 1 << n || tail.len() > n as usize + 1 {
                            continue;
                        }
                        let rep = verify_induction(&ctx, n, tail.entries())?;
                        rows.push(row(
                            format!("n={n} tail={tail}"),
                            Some(rep.degree),
                            rep.passed(),
                            serde_json::to_value(&rep)?,
                        ));
                    }
                }
            }
        }
        Suite::ThomLemma => {
            let max = r.max_degree.unwrap_or(18);
            parameters = json!({ "max_degree": max });
            for d in 0..=max {
                for s in admissible_basis(d).seqs() {
                    let rep = verify_thom_lemma(s);
                    rows.push(row(
                        rep.sequence.to_string(),
                        Some(d),
                        rep.passed,
                        serde_json::to_value(&rep)?,
                    ));
                }
            }
        }
        Suite::Bspin => {
            let (k_max, n_max) = (r.k_max.unwrap_or(4), r.n_max.unwrap_or(4));
            parameters = json!({ "k_max": k_max, "n_max": n_max });
            for c in verify_bspin_formulas(k_max, n_max) {
                rows.push(row(
                    c.label.clone(),
                    None,
                    c.passed,
                    serde_json::to_value(&c)?,
                ));
            }
        }
        Suite::Degree49 => {
            parameters = json!({});
            let ctx = QuotientContext::new(SubalgebraSpec::a(2), 49);
            let rep = verify_degree49(&ctx)?;
            summary = format!(
                "chi({}) is {} in A//A(2); {} conjecture candidates",
                rep.milnor_element,
                if rep.quotient_coordinates.is_empty() {
                    "zero"
                } else {
                    "nonzero"
                },
                rep.conjecture_count
            );
            rows.push(row(
                "degree49".into(),
                Some(rep.degree),
                rep.verdict.is_pass(),
                serde_json::to_value(&rep)?,
            ));
        }
    }
    let failures = rows.iter().filter(|r| !r.passed).count();
    Ok(Outcome {
        suite,
        passed: failures == 0,
        checks: rows.len(),
        failures,
        parameters,
        summary,
        results: rows,
        tsv_header,
    })
}
