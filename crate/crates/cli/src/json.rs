//! JSON encodings of the core value types. Rationals are always `"num/den"`
//! strings so that values survive the round trip exactly.

use rinehart_core::bialgebra::{JetElement, UTensor};
use rinehart_core::derivation::Derivation;
use rinehart_core::display::format_combination;
use rinehart_core::enveloping::{STensor, UAlgebra, UElement, Word};
use rinehart_core::linalg::Matrix;
use rinehart_core::polyring::{rational_to_string, Poly, Rational, RingCtx};
use rinehart_core::report::CheckReport;
use serde_json::{json, Value};

pub fn rational(q: &Rational) -> Value {
    Value::String(rational_to_string(q))
}

pub fn poly(ring: &RingCtx, p: &Poly) -> Value {
    let terms: Vec<Value> = p
        .sorted_terms(ring.order())
        .into_iter()
        .map(|(m, c)| json!({ "coeff": rational(c), "exponents": m.exponents() }))
        .collect();
    json!({ "text": ring.fmt_poly(p), "terms": terms })
}

pub fn derivation(ring: &RingCtx, d: &Derivation) -> Value {
    let coeffs: Vec<Value> = d.coeffs().iter().map(|c| poly(ring, c)).collect();
    json!({ "text": d.display(ring), "coefficients": coeffs })
}

pub fn word(alg: &UAlgebra, w: &Word) -> Value {
    json!({ "letters": w.letters(), "text": word_text(alg, w) })
}

fn word_text(alg: &UAlgebra, w: &Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.render(alg.names())
    }
}

pub fn element(alg: &UAlgebra, u: &UElement) -> Value {
    let terms: Vec<Value> =
        u.terms().rev().map(|(w, c)| json!({ "word": word(alg, w), "coeff": poly(alg.ring(), c) })).collect();
    json!({ "text": alg.display(u), "terms": terms })
}

pub fn symmetric(alg: &UAlgebra, t: &STensor) -> Value {
    let terms: Vec<Value> =
        t.terms().map(|(w, c)| json!({ "word": word(alg, w), "coeff": poly(alg.ring(), c) })).collect();
    json!({ "text": t.display(alg.ring(), alg.names()), "terms": terms })
}

/// Binary tensors as `sum left_word ⊗ right_element`.
pub fn tensor(alg: &UAlgebra, t: &UTensor) -> Value {
    let terms: Vec<Value> = t
        .components(alg)
        .iter()
        .map(|(w, u)| json!({ "left_word": word(alg, w), "right_element": element(alg, u) }))
        .collect();
    json!({ "text": t.display(alg), "terms": terms })
}

pub fn jet_text(alg: &UAlgebra, j: &JetElement) -> String {
    let parts: Vec<(String, &Poly)> = j.entries().map(|(w, v)| (format!("δ({})", word_text(alg, w)), v)).collect();
    let s = format_combination(alg.ring(), parts);
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

pub fn jet(alg: &UAlgebra, j: &JetElement) -> Value {
    let entries: Vec<Value> =
        j.entries().map(|(w, v)| json!({ "word": word(alg, w), "value": poly(alg.ring(), v) })).collect();
    json!({ "order": j.order(), "text": jet_text(alg, j), "entries": entries })
}

pub fn matrix(m: &Matrix) -> Value {
    let rows: Vec<Vec<Value>> = (0..m.rows()).map(|i| m.row(i).iter().map(rational).collect()).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": rows })
}

pub fn checks(report: &CheckReport) -> Value {
    Value::Array(
        report
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "status": c.status.as_str(), "witness": c.witness, "note": c.note }))
            .collect(),
    )
}
