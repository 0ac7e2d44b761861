//! Browser bindings: each export takes plain numbers and returns a JSON string.

use debranges::classifier::classify;
use debranges::defect::{mixed_gram, DEFECT_TOL};
use debranges::fock::rotation_matrix;
use debranges::forge::bior_construct;
use debranges::spectral::{gen_lacunary, gen_power_separated, MassRule, SpectralData};
use debranges::TailModel;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// `family` is `lacunary` (parameter = ratio, `t_n = q^n`) or `power` (parameter = exponent).
pub fn family_data(family: &str, param: f64, count: usize, mass: &str) -> Result<SpectralData, String> {
    let rule = MassRule::parse(mass).map_err(|e| e.to_string())?;
    let data = match family {
        "lacunary" => gen_lacunary(param, count, param, &rule),
        "power" => gen_power_separated(param, count, &rule),
        other => return Err(format!("unknown family `{other}`")),
    };
    data.map_err(|e| e.to_string())
}

pub fn classify_value(family: &str, param: f64, count: usize, mass: &str) -> Result<Value, String> {
    let data = family_data(family, param, count, mass)?;
    let r = classify(&data);
    Ok(json!({
        "verdict": format!("{:?}", r.verdict),
        "lacunary": format!("{:?}", r.lacunary),
        "sup_c": r.sup_c.prefix_max,
        "c_constants": r.c_constants,
        "mass_sum": r.mass_sum.total(),
        "caveats": r.caveats,
    }))
}

pub fn rotation_value(family: &str, param: f64, count: usize, mass: &str, theta: f64) -> Result<Value, String> {
    let data = family_data(family, param, count, mass)?;
    let r = rotation_matrix(&data, theta).map_err(|e| e.to_string())?;
    Ok(json!({
        "theta": theta,
        "column_norms": r.column_norms(),
        "bound": r.bound(),
    }))
}

/// Biorthogonal system of defect `n` on `t = 1..count`, `μ = t⁻⁶`.
pub fn defect_value(n: usize, count: usize) -> Result<Value, String> {
    let t: Vec<f64> = (1..=count).map(|i| i as f64).collect();
    let mu: Vec<f64> = t.iter().map(|x| x.powi(-6)).collect();
    let data = SpectralData::new(t, mu, TailModel::power(1.0, -6.0)).map_err(|e| e.to_string())?;
    let b = bior_construct(&data, n).map_err(|e| e.to_string())?;
    let lambda = b.generating_function.zeros.clone();
    let g = mixed_gram(&data, &b.generating_function, &lambda, &[], count, DEFECT_TOL).map_err(|e| e.to_string())?;
    let top = g.singular_values[0];
    Ok(json!({
        "defect": n,
        "truncation": g.truncation,
        "estimate": g.defect_estimate,
        "relative_singular_values": g.singular_values.iter().map(|s| s / top).collect::<Vec<_>>(),
        "tol": DEFECT_TOL,
    }))
}

fn export(v: Result<Value, String>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = classifyFamily)]
pub fn classify_family(family: &str, param: f64, count: usize, mass: &str) -> Result<String, JsError> {
    export(classify_value(family, param, count, mass))
}

#[wasm_bindgen(js_name = rotationNorms)]
pub fn rotation_norms(family: &str, param: f64, count: usize, mass: &str, theta: f64) -> Result<String, JsError> {
    export(rotation_value(family, param, count, mass, theta))
}

#[wasm_bindgen(js_name = biorDefect)]
pub fn bior_defect(n: usize, count: usize) -> Result<String, JsError> {
    export(defect_value(n, count))
}
