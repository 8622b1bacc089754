//! JSON encodings. Rationals are always `"num/den"` strings; object keys are sorted.

use serde_json::{json, Value};

use crate::exact::{rat_to_string, Rational};
use crate::mzv::{AsymExp, Monomial, ZCombo};
use crate::numeric::Report;
use crate::partial_fractions::PFTable;
use crate::symmetric::{ConstrainedDecomp, Tags};

pub fn rational(r: &Rational) -> Value {
    Value::String(rat_to_string(r))
}

fn words(m: &Monomial) -> Value {
    Value::Array(m.words().iter().map(|w| json!(w.entries())).collect())
}

pub fn combo(c: &ZCombo) -> Value {
    let monomials: Vec<Value> = c
        .terms()
        .iter()
        .map(|(m, coeff)| json!({"words": words(m), "c": rational(coeff)}))
        .collect();
    json!({ "monomials": monomials })
}

/// The constant term under `"monomials"` and every coefficient under `"h_poly"`.
pub fn asym(q: &AsymExp) -> Value {
    let h_poly: Vec<Value> = q.coeffs().iter().map(combo).collect();
    let mut out = combo(&q.constant_term());
    out["h_poly"] = Value::Array(h_poly);
    out
}

fn tags(t: Tags) -> Value {
    json!({"qprime": t.qprime, "qsecond": t.qsecond})
}

/// Tagged monomial expansion plus the generator-level terms.
pub fn constrained(d: &ConstrainedDecomp) -> Value {
    let monomials: Vec<Value> = d
        .tagged_monomials()
        .iter()
        .map(|(m, c, t)| json!({"words": words(m), "c": rational(c), "tags": tags(*t)}))
        .collect();
    let terms: Vec<Value> = d
        .terms
        .iter()
        .map(|t| {
            json!({
                "pairs": t.key.pairs,
                "anti": t.key.anti,
                "c": rational(&t.coeff),
                "tags": tags(t.tags()),
            })
        })
        .collect();
    json!({"monomials": monomials, "terms": terms})
}

pub fn pf_table(t: &PFTable) -> Value {
    let entries: Vec<Value> = t
        .coeffs
        .iter()
        .map(|((j, s), c)| json!({"j": j, "s": s, "c": rational(c)}))
        .collect();
    json!({"n": t.n, "A": t.a, "p": t.p, "entries": entries})
}

pub fn report(r: &Report) -> Value {
    json!({
        "status": r.status(),
        "lhs": r.lhs,
        "rhs": r.rhs,
        "diff": r.diff,
        "bound": r.bound,
    })
}
