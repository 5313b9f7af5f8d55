//! Browser bindings: quadratic class groups, family discriminants and the
//! dihedral row checks. Each function returns JSON text.

use dihedral_core::families::{candidate, Family};
use dihedral_core::quadforms::{class_group, ClassGroupOptions};
use dihedral_core::verifier::{verify_instance, DihedralInstance};
use serde_json::json;
use wasm_bindgen::prelude::*;

pub fn class_group_json(disc: &str) -> Result<String, String> {
    let d: i64 = disc.trim().parse().map_err(|_| format!("{disc:?} is not an integer"))?;
    let g = class_group(d, &ClassGroupOptions::default()).map_err(|e| e.to_string())?;
    let ranks: Vec<_> = g
        .structure
        .primes()
        .into_iter()
        .map(|p| json!({"p": p, "rank": g.structure.p_rank(p), "part": g.structure.p_part(p).to_string()}))
        .collect();
    Ok(json!({
        "disc": d,
        "structure": g.structure.to_string(),
        "class_number": g.class_number().to_string(),
        "primes": ranks,
    })
    .to_string())
}

pub fn family_json(family: &str, parameter: &str) -> Result<String, String> {
    let fam: Family = family.parse().map_err(|e: dihedral_core::families::FamilyError| e.to_string())?;
    let t: i64 = parameter.trim().parse().map_err(|_| format!("{parameter:?} is not an integer"))?;
    let c = candidate(fam, t).map_err(|e| e.to_string())?;
    Ok(json!({
        "family": c.family.to_string(),
        "parameter": c.parameter,
        "polynomial": c.polynomial_string(),
        "d": c.d,
        "fundamental": c.fundamental,
        "p": c.p,
    })
    .to_string())
}

/// Checks for a row over `Q` with `k` imaginary; `cl_l` may be empty.
pub fn verify_json(p: u32, cl_k: &str, cl_big_k: &str, cl_l: &str) -> Result<String, String> {
    let parse = |s: &str| s.parse().map_err(|e| format!("{s:?}: {e}"));
    let p = p as u64;
    if p < 3 || !dihedral_core::arith::is_prime_u64(p) {
        return Err(format!("p = {p} must be an odd prime"));
    }
    let mut inst = DihedralInstance::over_q(p, "input", "1", "1", None);
    inst.cl_k = parse(cl_k)?;
    inst.cl_big_k = parse(cl_big_k)?;
    inst.cl_l = if cl_l.trim().is_empty() { None } else { Some(parse(cl_l)?) };
    serde_json::to_string(&verify_instance(&inst, 0)).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = classGroup)]
pub fn class_group_js(disc: &str) -> Result<String, JsValue> {
    class_group_json(disc).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = familyCandidate)]
pub fn family_js(family: &str, parameter: &str) -> Result<String, JsValue> {
    family_json(family, parameter).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = verifyRow)]
pub fn verify_js(p: u32, cl_k: &str, cl_big_k: &str, cl_l: &str) -> Result<String, JsValue> {
    verify_json(p, cl_k, cl_big_k, cl_l).map_err(|e| JsValue::from_str(&e))
}
