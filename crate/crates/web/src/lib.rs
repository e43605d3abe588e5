//! wasm-bindgen exports for the static demo page in `www/`.
//!
//! Each export returns a JSON string; the plain-Rust versions are `pub` so
//! they can be tested natively.

use entcert_core::distill::{hamming_filter, kept, yield_of};
use entcert_core::measures::{pair_reductions, ppt_or_distill_oracle, tripartite_cut_entropies, tripartite_lower_bound};
use entcert_core::mregs::{rates_ghz_epr_w, RateResult};
use entcert_core::states::{make_ghz, make_w};
use entcert_core::{BoundInterval, Cut, MultiState, PureVector};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

type Out = Result<Value, String>;

fn text<E: ToString>(e: E) -> String {
    e.to_string()
}

/// Rates for GHZ + EPR → W given an interval for the W measure.
pub fn rate_window_json(lo: f64, hi: f64) -> Out {
    let iv = BoundInterval::new(lo, hi, "lower", "upper").map_err(text)?;
    Ok(match rates_ghz_epr_w(&iv) {
        RateResult::Feasible {
            n_over_nw,
            nghz_over_nw,
        } => json!({
            "status": "feasible",
            "n_over_nw": [n_over_nw.lo, n_over_nw.hi],
            "nghz_over_nw": [nghz_over_nw.lo, nghz_over_nw.hi],
        }),
        RateResult::Infeasible(c) => json!({
            "status": "infeasible",
            "certificate": c.inequality,
            "derivation": c.derivation,
        }),
        RateResult::Undetermined { reason } => json!({ "status": "undetermined", "reason": reason }),
    })
}

/// `cos θ |GHZ⟩ + sin θ |W⟩`: cut entropies, pair-reduction PPT data and the
/// pair-reduction lower bound on the tri-partite measure.
pub fn superposition_json(theta: f64) -> Out {
    let amps = make_ghz().amplitudes().scale(theta.cos()) + make_w().amplitudes().scale(theta.sin());
    let psi = PureVector::normalized(amps, vec![2, 2, 2]).map_err(text)?;
    let sigma = psi.density();
    let cuts = tripartite_cut_entropies(&psi).map_err(text)?;
    let cut = Cut::isolate(0, 2).map_err(text)?;
    let mut pairs = Vec::new();
    for (name, r) in ["AB", "AC", "BC"].iter().zip(pair_reductions(&sigma).map_err(text)?) {
        pairs.push(json!({
            "pair": name,
            "entropy": r.entropy(),
            "min_pt_eigenvalue": r.min_pt_eigenvalue(&cut).map_err(text)?,
        }));
    }
    let lower = tripartite_lower_bound(&sigma, ppt_or_distill_oracle).map_err(text)?;
    Ok(json!({
        "cut_entropies": cuts,
        "pairs": pairs,
        "lower_bound": lower,
    }))
}

/// Two-copy excitation filtering on `p|00⟩⟨00| + (1−p)|Ψ⁺⟩⟨Ψ⁺|`.
pub fn filter_json(p: f64) -> Out {
    if !(0.0..=1.0).contains(&p) {
        return Err(format!("weight must lie in [0, 1], got {p}"));
    }
    let zero = PureVector::basis(&[0, 0], vec![2, 2]).map_err(text)?;
    let one_zero = PureVector::basis(&[1, 0], vec![2, 2]).map_err(text)?;
    let zero_one = PureVector::basis(&[0, 1], vec![2, 2]).map_err(text)?;
    let psi_plus = PureVector::normalized(zero_one.amplitudes() + one_zero.amplitudes(), vec![2, 2]).map_err(text)?;
    let rho = MultiState::mixture(&[(p, &zero), (1.0 - p, &psi_plus)]).map_err(text)?;
    let outcomes = hamming_filter(&rho).map_err(text)?;
    let branches: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({ "branch": [o.branch.0, o.branch.1], "probability": o.probability }))
        .collect();
    let k = kept(&outcomes);
    Ok(json!({
        "branches": branches,
        "kept_probability": k.map_or(0.0, |o| o.probability),
        "kept_ebits": k.map_or(0.0, |o| o.ebits_certified),
        "yield": yield_of(&outcomes, 2),
    }))
}

fn to_js(r: Out) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn rate_window(lo: f64, hi: f64) -> Result<String, JsError> {
    to_js(rate_window_json(lo, hi))
}

#[wasm_bindgen]
pub fn superposition(theta: f64) -> Result<String, JsError> {
    to_js(superposition_json(theta))
}

#[wasm_bindgen]
pub fn filter_mixture(p: f64) -> Result<String, JsError> {
    to_js(filter_json(p))
}
