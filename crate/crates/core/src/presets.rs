//! Series specifications: named presets, the parametrized well-poised family, and inline polynomials.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exact::{int, parse_rational, rat, MPoly, Rational};
use crate::mzv::{Monomial, Word, ZCombo};
use crate::symmetry::{family_polynomial, FamilyParams};

/// Which pipeline a series goes through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Ordered sum, general reducer.
    General,
    /// Ordered sum, orbit-symmetrized pipeline (n even, `P ∈ 𝒜_p`).
    Symmetric,
    /// Box sum over `[1, ∞)^p`.
    Decoupled,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Mode::General),
            "symmetric" => Ok(Mode::Symmetric),
            "decoupled" => Ok(Mode::Decoupled),
            other => Err(Error::Input(format!(
                "unknown mode '{other}' (expected general, symmetric or decoupled)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::General => "general",
            Mode::Symmetric => "symmetric",
            Mode::Decoupled => "decoupled",
        })
    }
}

/// A fully expanded series `Σ P(k̲)/Π(k_i)_{n+1}^A` with its pipeline.
#[derive(Clone, Debug)]
pub struct SeriesSpec {
    pub name: Option<String>,
    pub n: u32,
    pub a: u32,
    pub poly: MPoly,
    pub mode: Mode,
    /// Published closed form, when known.
    pub expected: Option<ZCombo>,
}

impl SeriesSpec {
    pub fn p(&self) -> usize {
        self.poly.arity()
    }
}

pub const PRESET_NAMES: [&str; 5] = [
    "paper-ex-depth2",
    "paper-ex-depth3",
    "sorokin-n0",
    "decoupled-zero-c3",
    "decoupled-zero-d3",
];

fn word(v: &[u32]) -> ZCombo {
    ZCombo::word(Word::new(v.to_vec()))
}

fn unit_vec(p: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); p];
    v[i] = Rational::one();
    v
}

/// `Π_{i<j} (X_i − X_j)(X_i + X_j + 1)`, optionally times `Π (X_i + 1/2)`.
fn three_variable_numerator(with_centre: bool) -> MPoly {
    let p = 3;
    let mut out = MPoly::one(p);
    if with_centre {
        for i in 0..p {
            out = &out * &MPoly::linear(&unit_vec(p, i), rat(1, 2));
        }
    }
    for i in 0..p {
        for k in i + 1..p {
            let mut diff = unit_vec(p, i);
            diff[k] = -Rational::one();
            let mut sum = unit_vec(p, i);
            sum[k] = Rational::one();
            out = &out * &MPoly::linear(&diff, Rational::zero());
            out = &out * &MPoly::linear(&sum, Rational::one());
        }
    }
    out
}

/// Expands a named preset.
pub fn preset(name: &str) -> Result<SeriesSpec> {
    let spec = match name {
        "paper-ex-depth2" => {
            let fp = FamilyParams { n: 1, p: 2, r: 1, t: 1, eps: 1 };
            let expected = ZCombo::constant(int(-1156))
                .add(&word(&[3]).scale(&int(891)))
                .add(&word(&[5]).scale(&rat(189, 2)))
                .add(&word(&[5, 3]).sub(&word(&[3, 5])).scale(&int(78)));
            SeriesSpec {
                name: Some(name.into()),
                n: 1,
                a: 7,
                poly: family_polynomial(&fp, 7)?,
                mode: Mode::General,
                expected: Some(expected),
            }
        }
        "paper-ex-depth3" => {
            let z3 = word(&[3]);
            let expected = ZCombo::constant(rat(-1, 4))
                .sub(&z3)
                .add(&word(&[5]).scale(&rat(1, 4)))
                .add(&z3.mul(&z3))
                .sub(&word(&[7]).scale(&rat(1, 4)));
            SeriesSpec {
                name: Some(name.into()),
                n: 1,
                a: 4,
                poly: three_variable_numerator(true),
                mode: Mode::General,
                expected: Some(expected),
            }
        }
        "sorokin-n0" => SeriesSpec {
            name: Some(name.into()),
            n: 0,
            a: 2,
            poly: MPoly::var(2, 1),
            mode: Mode::General,
            expected: Some(word(&[2, 1]).add(&word(&[3]))),
        },
        "decoupled-zero-c3" | "decoupled-zero-d3" => SeriesSpec {
            name: Some(name.into()),
            n: 1,
            a: 4,
            poly: three_variable_numerator(name.ends_with("c3")),
            mode: Mode::Decoupled,
            expected: Some(ZCombo::zero()),
        },
        other => {
            return Err(Error::Input(format!(
                "unknown preset '{other}' (known: {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(spec)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    r: u32,
    t: u32,
    eps: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    e: Vec<u32>,
    c: serde_json::Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoly {
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    n: Option<u32>,
    #[serde(rename = "A")]
    a: Option<u32>,
    p: Option<usize>,
    poly: Option<RawPoly>,
    preset: Option<String>,
    params: Option<RawFamily>,
    mode: Option<String>,
}

fn parse_coeff(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => {
            parse_rational(s).ok_or_else(|| Error::Input(format!("bad rational '{s}'")))
        }
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(int)
            .ok_or_else(|| Error::Input(format!("coefficient {n} must be an integer or \"num/den\""))),
        other => Err(Error::Input(format!("bad coefficient {other}"))),
    }
}

/// Parses a series spec from JSON.
///
/// Accepted shapes: `{"n":1,"A":7,"p":2,"poly":{"terms":[{"e":[1,0],"c":"3/2"}]}}`,
/// `{"n":2,"A":4,"p":3,"preset":"family","params":{"r":0,"t":0,"eps":0}}` and
/// `{"preset":"paper-ex-depth2"}`; each may carry `"mode"`.
pub fn parse_spec(text: &str) -> Result<SeriesSpec> {
    let raw: RawSpec =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("spec JSON: {e}")))?;
    let mode = raw.mode.as_deref().map(Mode::from_str).transpose()?;
    let mut spec = match (raw.preset.as_deref(), raw.poly) {
        (Some("family"), None) => {
            let (Some(n), Some(a), Some(p), Some(fp)) = (raw.n, raw.a, raw.p, raw.params) else {
                return Err(Error::Input(
                    "family spec needs n, A, p and params {r, t, eps}".into(),
                ));
            };
            let params = FamilyParams { n, p, r: fp.r, t: fp.t, eps: fp.eps };
            SeriesSpec {
                name: None,
                n,
                a,
                poly: family_polynomial(&params, a)?,
                mode: if n % 2 == 0 { Mode::Symmetric } else { Mode::General },
                expected: None,
            }
        }
        (Some(name), None) => {
            if raw.n.is_some() || raw.a.is_some() || raw.p.is_some() || raw.params.is_some() {
                return Err(Error::Input(format!(
                    "named preset '{name}' does not take n, A, p or params"
                )));
            }
            preset(name)?
        }
        (None, Some(poly)) => {
            let (Some(n), Some(a), Some(p)) = (raw.n, raw.a, raw.p) else {
                return Err(Error::Input("inline spec needs n, A and p".into()));
            };
            if raw.params.is_some() {
                return Err(Error::Input("params only apply to the family preset".into()));
            }
            let mut out = MPoly::zero(p);
            for t in &poly.terms {
                if t.e.len() != p {
                    return Err(Error::Input(format!(
                        "exponent {:?} has length {} but p = {p}",
                        t.e,
                        t.e.len()
                    )));
                }
                out.add_term(t.e.clone(), parse_coeff(&t.c)?);
            }
            SeriesSpec {
                name: None,
                n,
                a,
                poly: out,
                mode: Mode::General,
                expected: None,
            }
        }
        (Some(_), Some(_)) => {
            return Err(Error::Input("give either preset or poly, not both".into()))
        }
        (None, None) => return Err(Error::Input("spec needs preset or poly".into())),
    };
    if spec.a == 0 {
        return Err(Error::Input("A must be ≥ 1".into()));
    }
    if let Some(m) = mode {
        spec.mode = m;
    }
    Ok(spec)
}

/// Parses `"3,5"` (or `"3 5"`) into a word.
pub fn parse_word(text: &str) -> Result<Word> {
    let entries: std::result::Result<Vec<u32>, _> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse::<u32>)
        .collect();
    match entries {
        Ok(v) if v.iter().all(|&s| s >= 1) => Ok(Word::new(v)),
        _ => Err(Error::Input(format!(
            "'{text}' is not a word (comma-separated integers ≥ 1)"
        ))),
    }
}

/// Parses `{"monomials":[{"words":[[5,3]],"c":"78/1"}, ...]}` into a combo.
pub fn parse_combo(text: &str) -> Result<ZCombo> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("combo JSON: {e}")))?;
    let monomials = v
        .get("monomials")
        .and_then(|m| m.as_array())
        .ok_or_else(|| Error::Input("combo JSON needs a \"monomials\" array".into()))?;
    let mut out = ZCombo::zero();
    for m in monomials {
        let words = m
            .get("words")
            .and_then(|w| w.as_array())
            .ok_or_else(|| Error::Input("monomial needs \"words\"".into()))?;
        let mut ws = Vec::new();
        for w in words {
            let entries: Option<Vec<u32>> = w.as_array().and_then(|a| {
                a.iter()
                    .map(|x| x.as_u64().and_then(|y| u32::try_from(y).ok()).filter(|&y| y >= 1))
                    .collect()
            });
            let entries = entries.ok_or_else(|| Error::Input(format!("bad word {w}")))?;
            ws.push(Word::new(entries));
        }
        let c = parse_coeff(
            m.get("c")
                .ok_or_else(|| Error::Input("monomial needs \"c\"".into()))?,
        )?;
        out.add_term(Monomial::new(ws), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{check_family_constraints, family_polynomial_unchecked, is_in_ap};

    #[test]
    fn presets_expand() {
        for name in PRESET_NAMES {
            let s = preset(name).unwrap();
            assert_eq!(s.name.as_deref(), Some(name));
            assert!(s.expected.is_some());
        }
        assert!(preset("nope").is_err());
    }

    #[test]
    fn depth_three_preset_is_the_family_member_with_one_more_power() {
        // Dividing out X(X+1) from the ε=1, r=t=0 family lowers A from 5 to 4.
        let fp = FamilyParams { n: 1, p: 3, r: 0, t: 0, eps: 1 };
        assert!(check_family_constraints(&fp, 4).is_err());
        check_family_constraints(&fp, 5).unwrap();
        let mut reduced = three_variable_numerator(true);
        for i in 0..3 {
            let x = MPoly::var(3, i);
            reduced = &reduced * &(&x * &(&x + &MPoly::one(3)));
        }
        assert_eq!(reduced, family_polynomial_unchecked(&fp));
        assert!(is_in_ap(&preset("paper-ex-depth3").unwrap().poly, 1, 4));
    }

    #[test]
    fn decoupled_presets_are_antisymmetric() {
        let c3 = preset("decoupled-zero-c3").unwrap();
        let d3 = preset("decoupled-zero-d3").unwrap();
        let swap = [1usize, 0, 2];
        assert_eq!(c3.poly.permute_vars(&swap), -&c3.poly);
        assert_eq!(d3.poly.permute_vars(&swap), -&d3.poly);
        assert!(!is_in_ap(&d3.poly, 1, 4));
    }

    #[test]
    fn spec_parsing() {
        let s = parse_spec(r#"{"n":1,"A":7,"p":2,"preset":"family","params":{"r":1,"t":1,"eps":1}}"#)
            .unwrap();
        assert_eq!(s.poly, preset("paper-ex-depth2").unwrap().poly);
        assert_eq!(s.mode, Mode::General);
        let s = parse_spec(r#"{"n":0,"A":2,"p":2,"poly":{"terms":[{"e":[0,1],"c":"1/1"}]},"mode":"general"}"#)
            .unwrap();
        assert_eq!(s.poly, MPoly::var(2, 1));
        let s = parse_spec(r#"{"preset":"decoupled-zero-d3"}"#).unwrap();
        assert_eq!(s.mode, Mode::Decoupled);
        for bad in [
            "{",
            r#"{"n":1}"#,
            r#"{"preset":"x"}"#,
            r#"{"n":1,"A":2,"p":1,"poly":{"terms":[{"e":[0,1],"c":1}]}}"#,
            r#"{"n":1,"A":2,"p":1,"poly":{"terms":[]},"mode":"fast"}"#,
        ] {
            assert!(parse_spec(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn word_and_combo_parsing() {
        assert_eq!(parse_word("3,5").unwrap(), Word::new(vec![3, 5]));
        assert!(parse_word("3,0").is_err());
        assert!(parse_word("x").is_err());
        let c = parse_combo(r#"{"monomials":[{"words":[[5,3]],"c":"78/1"},{"words":[],"c":-2}]}"#)
            .unwrap();
        assert_eq!(c, word(&[5, 3]).scale(&int(78)).add(&ZCombo::constant(int(-2))));
    }
}
