//! Browser bindings for the table computations.
//!
//! Three operations are exposed to the demo page: compute both tables for
//! an ideal file, produce the Veronese re-embedding as a new ideal file,
//! and compare invariant tables across generated embeddings. The plain
//! functions are target-independent (and unit-tested natively); the
//! wasm-bindgen wrappers live behind the wasm32 cfg.

use serde::Serialize;

use lyucone::embeddings::{
    compare_invariants, linear_augment, veronese_ideal, EmbeddingPresentation, Provenance,
};
use lyucone::input::{parse_input, render_input};
use lyucone::lyubeznik::{compute_tables, TableSet};

const DEMO_MAX_VARS: usize = 12;

#[derive(Serialize)]
struct TablesDoc {
    p: u32,
    vars: Vec<String>,
    ideal: Vec<String>,
    d: usize,
    tables: TableSet,
}

/// Both tables plus per-cell rank sequences, as a JSON document.
pub fn tables_json(input: &str) -> Result<String, String> {
    let cone = parse_input(input).map_err(|e| e.to_string())?;
    if cone.ring().nvars() > DEMO_MAX_VARS {
        return Err(format!("demo caps rings at {DEMO_MAX_VARS} variables"));
    }
    let tables = compute_tables(&cone).map_err(|e| e.to_string())?;
    let doc = TablesDoc {
        p: cone.ring().p(),
        vars: cone.ring().names().to_vec(),
        ideal: cone.ideal().generators().iter().map(|g| g.to_string()).collect(),
        d: cone.d(),
        tables,
    };
    serde_json::to_string(&doc).map_err(|e| e.to_string())
}

/// The t-uple Veronese re-embedding, rendered in the ideal-file grammar.
pub fn veronese_text(input: &str, t: u32) -> Result<String, String> {
    if t < 1 {
        return Err("t must be at least 1".into());
    }
    let cone = parse_input(input).map_err(|e| e.to_string())?;
    let re = veronese_ideal(&cone, t, DEMO_MAX_VARS).map_err(|e| e.to_string())?;
    Ok(render_input(&re))
}

/// Comparison report across the input and its generated re-embeddings.
pub fn compare_json(input: &str, veronese_t: u32, augment: bool) -> Result<String, String> {
    let cone = parse_input(input).map_err(|e| e.to_string())?;
    let mut embeddings = vec![EmbeddingPresentation::original(cone.clone())];
    if veronese_t >= 1 {
        let re = veronese_ideal(&cone, veronese_t, DEMO_MAX_VARS).map_err(|e| e.to_string())?;
        embeddings.push(EmbeddingPresentation {
            cone: re,
            provenance: Provenance::Veronese { t: veronese_t },
        });
    }
    if augment {
        embeddings.push(EmbeddingPresentation {
            cone: linear_augment(&cone),
            provenance: Provenance::LinearAugment,
        });
    }
    if embeddings.len() < 2 {
        return Err("enable the Veronese or the linear augmentation to compare".into());
    }
    let report = compare_invariants(&embeddings).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    fn lift(result: Result<String, String>) -> Result<String, JsValue> {
        result.map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn tables_json(input: &str) -> Result<String, JsValue> {
        lift(super::tables_json(input))
    }

    #[wasm_bindgen]
    pub fn veronese_text(input: &str, t: u32) -> Result<String, JsValue> {
        lift(super::veronese_text(input, t))
    }

    #[wasm_bindgen]
    pub fn compare_json(input: &str, veronese_t: u32, augment: bool) -> Result<String, JsValue> {
        lift(super::compare_json(input, veronese_t, augment))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_json_smoke() {
        let doc = tables_json("ring 2 2 x0 x1\nx0*x1\n").unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(v["d"], 0);
        assert_eq!(v["tables"]["lambda"]["entries"][1][1], 1);
    }

    #[test]
    fn veronese_text_smoke() {
        let out = veronese_text("ring 2 2 x0 x1\n", 2).unwrap();
        assert_eq!(out, "ring 2 3 y0 y1 y2\ny1^2 + y0*y2\n");
    }

    #[test]
    fn compare_json_smoke() {
        let doc = compare_json("ring 2 2 x0 x1\n", 2, false).unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(v["m0_verdict"]["equal"], true);
        assert_eq!(v["lambda_verdict"]["equal"], true);
    }

    #[test]
    fn errors_are_strings() {
        assert!(tables_json("ring 4 1 x\n").unwrap_err().contains("not prime"));
        assert!(compare_json("ring 2 2 x0 x1\n", 0, false).is_err());
    }
}
