//! Runs a [`SeriesSpec`] through its pipeline and checks results numerically.

use crate::error::{Error, Result};
use crate::mzv::{normalize, AsymExp, ZCombo};
use crate::numeric::{compare, eval_combo, eval_series_direct, verify_identity, Report, SeriesInput};
use crate::exact::Rational;
use crate::partial_fractions::{decompose_multivariate, denominator_certificate, integrality_scale};
use crate::presets::{Mode, SeriesSpec};
use crate::reducer::{decompose_decoupled, Reducer};
use crate::symmetric::{decompose_symmetric_series, SymmetricDecomp};

#[derive(Clone, Debug)]
pub struct Options {
    pub digits: u32,
    pub tol: f64,
    pub truncation: u64,
    pub strict_denominators: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            digits: crate::numeric::DEFAULT_DIGITS,
            tol: crate::numeric::IDENTITY_TOL,
            truncation: 2000,
            strict_denominators: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Decomposition {
    General(AsymExp),
    Symmetric(SymmetricDecomp),
    Decoupled(ZCombo),
}

impl Decomposition {
    /// The limit value as a combination of convergent words.
    pub fn value(&self) -> ZCombo {
        match self {
            Decomposition::General(q) => q.constant_term(),
            Decomposition::Symmetric(d) => d.value.clone(),
            Decomposition::Decoupled(c) => c.clone(),
        }
    }
}

pub fn decompose(spec: &SeriesSpec, opts: &Options) -> Result<Decomposition> {
    if opts.strict_denominators {
        certify_denominators(spec)?;
    }
    match spec.mode {
        Mode::General => Ok(Decomposition::General(
            Reducer::new().decompose_series(&spec.poly, spec.n, spec.a)?,
        )),
        Mode::Symmetric => Ok(Decomposition::Symmetric(decompose_symmetric_series(
            &spec.poly, spec.n, spec.a,
        )?)),
        Mode::Decoupled => Ok(Decomposition::Decoupled(decompose_decoupled(
            &spec.poly, spec.n, spec.a,
        )?)),
    }
}

/// Runs the denominator certificate on `D·P`, where `D` is the least integer making
/// `D·P / n!^{A·p}` an integer polynomial.
pub fn certify_denominators(spec: &SeriesSpec) -> Result<()> {
    let normalized = spec.poly.scale(&integrality_scale(spec.n, spec.a, spec.p()).recip());
    let clear = Rational::from_integer(normalized.coefficient_denominator());
    let table = decompose_multivariate(&spec.poly.scale(&clear), spec.n, spec.a)?;
    denominator_certificate(&table).map(|_| ())
}

/// Outcome of checking a decomposition against a closed form and the series itself.
#[derive(Clone, Debug)]
pub struct Verification {
    /// Engine value against the expected closed form.
    pub identity: Report,
    /// Engine value against direct summation.
    pub direct: Report,
    /// Whether the two combos agree after stuffle normalization.
    pub formal: bool,
}

impl Verification {
    pub fn pass(&self) -> bool {
        self.identity.pass && self.direct.pass
    }
}

pub fn verify(spec: &SeriesSpec, expected: &ZCombo, opts: &Options) -> Result<Verification> {
    let engine = decompose(spec, opts)?.value();
    let lhs = eval_combo(&engine, opts.digits)?;
    let rhs = eval_combo(expected, opts.digits)?;
    let shown = opts.digits.min(30);
    let identity = compare(&lhs, &rhs, opts.tol, shown);
    let input = SeriesInput {
        poly: spec.poly.clone(),
        n: spec.n,
        a: spec.a,
        decoupled: spec.mode == Mode::Decoupled,
    };
    let direct = verify_identity(&engine, &input, opts.tol, opts.truncation, opts.digits)?;
    let formal = normalize(&engine)? == normalize(expected)?;
    Ok(Verification {
        identity,
        direct,
        formal,
    })
}

/// Direct evaluation of a spec (for diagnostics).
pub fn direct_value(spec: &SeriesSpec, opts: &Options) -> Result<crate::numeric::SeriesValue> {
    let input = SeriesInput {
        poly: spec.poly.clone(),
        n: spec.n,
        a: spec.a,
        decoupled: spec.mode == Mode::Decoupled,
    };
    eval_series_direct(&input, opts.truncation, opts.digits)
}

/// Whether an error signals a failed check rather than bad input.
pub fn is_check_failure(e: &Error) -> bool {
    matches!(e, Error::Invariant(_) | Error::Certificate { .. })
}
