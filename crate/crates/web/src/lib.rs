//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes plain strings and returns a JSON string. The same
//! functions without the `wasm_bindgen` wrapper are public so they can be
//! tested natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use steenrod::basis_theorem::{gf_dims_bo, gf_dims_bu, ModuleTag};
use steenrod::milnor::{admissible_to_milnor, antipode};
use steenrod::parse::parse_element;
use steenrod::quotients::{QuotientContext, SubalgebraKind, SubalgebraSpec};
use steenrod::Error;

/// Degrees above this are refused to keep the page responsive.
pub const MAX_DEGREE: u32 = 64;

fn message(e: Error) -> String {
    match e {
        Error::Parse { position, message } => format!("column {}: {message}", position + 1),
        other => other.to_string(),
    }
}

fn module_spec(module: &str) -> Result<(ModuleTag, SubalgebraSpec), String> {
    let tag: ModuleTag = module.parse().map_err(message)?;
    let spec = match tag.subalgebra() {
        SubalgebraKind::A(n) if n > 3 => return Err("A(n) is limited to n <= 3 here".into()),
        SubalgebraKind::A(n) => SubalgebraSpec::a(n),
        SubalgebraKind::E1 => SubalgebraSpec::e1(),
        SubalgebraKind::Trivial => SubalgebraSpec::trivial(),
    };
    Ok((tag, spec))
}

fn check_degree(d: u32) -> Result<(), String> {
    if d > MAX_DEGREE {
        Err(format!("degree {d} is above the demo limit {MAX_DEGREE}"))
    } else {
        Ok(())
    }
}

/// Normal form, antipode and Milnor form of an expression.
pub fn evaluate_json(expr: &str) -> Result<Value, String> {
    let x = parse_element(expr).map_err(message)?;
    check_degree(x.degree())?;
    let chi = antipode(&x);
    Ok(json!({
        "degree": x.degree(),
        "normal_form": x.to_string(),
        "milnor": admissible_to_milnor(&x).to_string(),
        "antipode": chi.to_string(),
        "antipode_milnor": admissible_to_milnor(&chi).to_string(),
    }))
}

/// Candidate count, generating-function dimension and quotient dimension per degree.
pub fn dims_json(module: &str, max_degree: u32) -> Result<Value, String> {
    check_degree(max_degree)?;
    let (tag, spec) = module_spec(module)?;
    let ctx = QuotientContext::new(spec, max_degree);
    let oracle = match tag {
        ModuleTag::Bo | ModuleTag::AnConjecture(1) => Some(gf_dims_bo(max_degree)),
        ModuleTag::Bu => Some(gf_dims_bu(max_degree)),
        ModuleTag::AnConjecture(_) => None,
    };
    let mut rows = Vec::new();
    for d in 0..=max_degree {
        rows.push(json!({
            "degree": d,
            "candidates": tag.candidates(d).len(),
            "oracle": oracle.as_ref().map(|o| o[d as usize]),
            "dim": ctx.quotient_dim(d).map_err(message)?,
        }));
    }
    Ok(json!({ "module": tag.to_string(), "rows": rows }))
}

/// The class of an expression in the quotient for `module`, written in the
/// complement basis.
pub fn reduce_json(module: &str, expr: &str) -> Result<Value, String> {
    let (tag, spec) = module_spec(module)?;
    let x = parse_element(expr).map_err(message)?;
    check_degree(x.degree())?;
    let ctx = QuotientContext::new(spec, x.degree());
    let terms = ctx.reduce_terms(&x).map_err(message)?;
    let class: Vec<String> = terms.iter().map(ToString::to_string).collect();
    Ok(json!({
        "module": tag.to_string(),
        "degree": x.degree(),
        "normal_form": x.to_string(),
        "class": if class.is_empty() { "0".to_string() } else { class.join(" + ") },
        "zero": class.is_empty(),
        "quotient_dim": ctx.quotient_dim(x.degree()).map_err(message)?,
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn evaluate(expr: &str) -> Result<String, JsError> {
    to_js(evaluate_json(expr))
}

#[wasm_bindgen]
pub fn dims(module: &str, max_degree: u32) -> Result<String, JsError> {
    to_js(dims_json(module, max_degree))
}

#[wasm_bindgen]
pub fn reduce(module: &str, expr: &str) -> Result<String, JsError> {
    to_js(reduce_json(module, expr))
}
