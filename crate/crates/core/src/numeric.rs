//! High-precision numeric evaluation with explicit error bounds.
//!
//! Values are binary fixed-point big integers (`mantissa / 2^bits`). Every
//! evaluator returns a bound on `|value − true value|` covering truncation and
//! rounding.
//!
//! * Depth-1 zeta values use Euler–Maclaurin with exact Bernoulli numbers.
//! * Deeper words use the duality split at 1/2:
//!   `ζ(w) = Σ_k Li_{dual(rev(w_{<k}))}(1/2) · Li_{w_{≥k}}(1/2)` over the letters of `w`
//!   in the alphabet `{x0, x1}`, where every polylogarithm converges like `2^{−m}`.
//! * Direct series evaluation sums the product-form summand of each monomial of `P`
//!   with prefix tables and bounds the tail from per-variable decay exponents.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, harmonic, int, inv_pow, rat_to_f64, MPoly, Rational};
use crate::mzv::{AsymExp, Word, ZCombo};
use crate::partial_fractions::{decompose_univariate, is_convergent_degree};

/// Default precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 64;
/// Default tolerance for identity checks between combos.
pub const IDENTITY_TOL: f64 = 1e-8;
/// Default tolerance for checks against direct series evaluation.
pub const DIRECT_TOL: f64 = 1e-6;

/// Working binary precision for a requested number of decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
}

fn ulp(bits: u32) -> f64 {
    2f64.powi(-(bits as i32))
}

/// Rounds `x / 2^shift` to the nearest integer.
fn round_shift(x: &BigInt, shift: u32) -> BigInt {
    if shift == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (shift - 1);
    if x.is_negative() {
        -((-x + &half) >> shift)
    } else {
        (x + half) >> shift
    }
}

/// Rounds `num / den` (den > 0) to the nearest integer.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = num.div_mod_floor(den);
    if &r * &two >= *den {
        q + 1
    } else {
        q
    }
}

/// A real number with a rigorous absolute error bound.
#[derive(Clone, PartialEq)]
pub struct NumericValue {
    mantissa: BigInt,
    bits: u32,
    error: f64,
}

impl NumericValue {
    pub fn zero(bits: u32) -> Self {
        NumericValue {
            mantissa: BigInt::zero(),
            bits,
            error: 0.0,
        }
    }

    /// Nearest fixed-point value; the bound is half an ulp (zero when exact).
    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        let scaled = r.numer() << bits;
        let mantissa = round_div(&scaled, r.denom());
        let exact = (&mantissa * r.denom()) == scaled;
        NumericValue {
            mantissa,
            bits,
            error: if exact { 0.0 } else { ulp(bits) / 2.0 },
        }
    }

    pub fn with_error(mut self, extra: f64) -> Self {
        self.error += extra;
        self
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn error_bound(&self) -> f64 {
        self.error
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.mantissa.bits().saturating_sub(60) as u32;
        let m = (&self.mantissa >> shift).to_f64().unwrap_or(0.0);
        m * 2f64.powi(shift as i32 - self.bits as i32)
    }

    /// Exact rational value of the stored approximation.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mantissa.clone(), BigInt::one() << self.bits)
    }

    fn magnitude_bound(&self) -> f64 {
        self.to_f64().abs() + self.error
    }

    pub fn add(&self, other: &NumericValue) -> NumericValue {
        assert_eq!(self.bits, other.bits, "precision mismatch");
        NumericValue {
            mantissa: &self.mantissa + &other.mantissa,
            bits: self.bits,
            error: self.error + other.error,
        }
    }

    pub fn sub(&self, other: &NumericValue) -> NumericValue {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NumericValue {
        NumericValue {
            mantissa: -&self.mantissa,
            bits: self.bits,
            error: self.error,
        }
    }

    pub fn mul(&self, other: &NumericValue) -> NumericValue {
        assert_eq!(self.bits, other.bits, "precision mismatch");
        let mantissa = round_shift(&(&self.mantissa * &other.mantissa), self.bits);
        let a = self.to_f64().abs();
        let b = other.to_f64().abs();
        NumericValue {
            mantissa,
            bits: self.bits,
            error: a * other.error + b * self.error + self.error * other.error + ulp(self.bits),
        }
    }

    pub fn scale(&self, c: &Rational) -> NumericValue {
        let mantissa = round_div(&(&self.mantissa * c.numer()), c.denom());
        NumericValue {
            mantissa,
            bits: self.bits,
            error: rat_to_f64(c).abs() * self.error + ulp(self.bits),
        }
    }

    pub fn abs_diff(&self, other: &NumericValue) -> f64 {
        self.sub(other).to_f64().abs()
    }

    /// Decimal rendering with `digits` places after the point.
    pub fn to_decimal(&self, digits: u32) -> String {
        let ten = BigInt::from(10).pow(digits);
        let scaled = round_shift(&(&self.mantissa * &ten), self.bits);
        let neg = scaled.sign() == Sign::Minus;
        let abs = scaled.abs();
        let (ip, fp) = abs.div_rem(&ten);
        let mut frac = fp.to_string();
        while frac.len() < digits as usize {
            frac.insert(0, '0');
        }
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{frac}")
        }
    }
}

impl fmt::Debug for NumericValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:e}", self.to_decimal(20), self.error)
    }
}

fn bernoulli_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_m` (with `B_1 = −1/2`).
pub fn bernoulli(m: usize) -> Rational {
    let mut t = bernoulli_table().lock().expect("bernoulli table poisoned");
    while t.len() <= m {
        let k = t.len();
        // Σ_{i=0}^{k} C(k+1, i) B_i = 0
        let mut acc = Rational::zero();
        for (i, b) in t.iter().enumerate() {
            acc += Rational::from_integer(binomial(k as u64 + 1, i as u64)) * b;
        }
        t.push(-acc / int(k as i64 + 1));
    }
    t[m].clone()
}

/// `Σ_{k ≥ a} 1/k^s` for integer `s ≥ 2`, `a ≥ 1`, via Euler–Maclaurin.
///
/// Returns the rational approximation and a bound on its error.
pub fn hurwitz_rational(s: u32, a: u64, bits: u32) -> (Rational, f64) {
    assert!(s >= 2, "Hurwitz sum needs s ≥ 2");
    let m = a.max(bits as u64 / 2 + 16);
    let target = ulp(bits + 4);
    let mut sum = Rational::zero();
    for k in a..m {
        sum += inv_pow(k, s);
    }
    let mr = int(m as i64);
    sum += num_traits::pow(mr.clone(), s as usize - 1).recip() / int(s as i64 - 1);
    sum += inv_pow(m, s) / int(2);
    // Terms B_{2i}/(2i)! · s(s+1)…(s+2i−2) · M^{−s−2i+1}.
    let mut rising = int(s as i64); // (s)_{2i−1}, starting at i = 1
    let mut fact = int(2); // (2i)!
    let mut mpow = num_traits::pow(mr.clone(), (s + 1) as usize); // M^{s+2i−1}
    let mut i = 1u32;
    loop {
        let term = bernoulli(2 * i as usize) / &fact * &rising / &mpow;
        // next term magnitude bounds the remainder
        let next_rising = &rising * int((s + 2 * i - 1) as i64) * int((s + 2 * i) as i64);
        let next_fact = &fact * int((2 * i + 1) as i64) * int((2 * i + 2) as i64);
        let next_mpow = &mpow * &mr * &mr;
        let next = bernoulli(2 * i as usize + 2) / &next_fact * &next_rising / &next_mpow;
        sum += term;
        let bound = 2.0 * rat_to_f64(&next).abs();
        if bound < target || i > 400 {
            return (sum, bound);
        }
        rising = next_rising;
        fact = next_fact;
        mpow = next_mpow;
        i += 1;
    }
}

/// `Li_{u1,…,ur}(1/2) = Σ_{m1>…>mr≥1} 2^{−m1} Π m_i^{−u_i}` in fixed point.
fn polylog_half(u: &[u32], bits: u32) -> NumericValue {
    if u.is_empty() {
        return NumericValue::from_rational(&Rational::one(), bits);
    }
    let r = u.len();
    let guard = 16u32;
    let wbits = bits + guard;
    let terms = (wbits + 8 * r as u32 + 24) as u64;
    let one = BigInt::one() << wbits;
    // cum[i] = Σ over strictly smaller deeper indices for level i (0-based); cum[r−1] = 1
    let mut cum: Vec<BigInt> = vec![BigInt::zero(); r];
    cum[r - 1] = one.clone();
    let mut total = BigInt::zero();
    let mut ops = 0u64;
    for m in 1..=terms {
        let mut t: Vec<BigInt> = Vec::with_capacity(r);
        for (i, &ui) in u.iter().enumerate() {
            let den = BigInt::from(m).pow(ui);
            t.push(&cum[i] / &den);
            ops += 1;
        }
        total += &t[0] >> (m as usize);
        for i in 1..r {
            cum[i - 1] += &t[i];
        }
    }
    // Truncation: Σ_{m>M} 2^{−m} (1 + ln m)^{r−1} ≤ 2·(M+1)^{r−1}·2^{−M}.
    let tail = 2.0 * ((terms + 1) as f64).powi(r as i32 - 1) * 2f64.powi(-(terms as i32));
    let rounding = (ops as f64 + terms as f64) * ((terms as f64).powi(r as i32)) * ulp(wbits);
    NumericValue {
        mantissa: round_shift(&total, guard),
        bits,
        error: tail + rounding + ulp(bits),
    }
}

/// Letters of a word: `s ↦ x0^{s−1} x1`, encoded as 0/1.
fn letters(w: &[u32]) -> Vec<u8> {
    let mut out = Vec::new();
    for &s in w {
        out.extend(std::iter::repeat_n(0u8, s as usize - 1));
        out.push(1);
    }
    out
}

/// Parses letters ending in `x1` back into a composition.
fn composition(letters: &[u8]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut run = 0u32;
    for &l in letters {
        if l == 0 {
            run += 1;
        } else {
            out.push(run + 1);
            run = 0;
        }
    }
    debug_assert_eq!(run, 0, "letters must end in x1");
    out
}

fn zeta_cache() -> &'static Mutex<HashMap<(Word, u32), NumericValue>> {
    static CACHE: OnceLock<Mutex<HashMap<(Word, u32), NumericValue>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Value of a convergent MZV word at the binary precision `bits`.
pub fn zeta_value_bits(w: &Word, bits: u32) -> Result<NumericValue> {
    if !w.is_convergent() {
        return Err(Error::Divergent(w.to_string()));
    }
    if w.depth() == 0 {
        return Ok(NumericValue::from_rational(&Rational::one(), bits));
    }
    let key = (w.clone(), bits);
    if let Some(v) = zeta_cache().lock().expect("zeta cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let value = if w.depth() == 1 {
        let (r, err) = hurwitz_rational(w.entries()[0], 1, bits);
        NumericValue::from_rational(&r, bits).with_error(err)
    } else {
        duality_split(w.entries(), bits)
    };
    zeta_cache()
        .lock()
        .expect("zeta cache poisoned")
        .insert(key, value.clone());
    Ok(value)
}

fn duality_split(w: &[u32], bits: u32) -> NumericValue {
    let a = letters(w);
    let len = a.len();
    let mut total = NumericValue::zero(bits);
    for k in 0..=len {
        let right = composition(&a[k..]);
        let left_letters: Vec<u8> = a[..k].iter().rev().map(|&l| 1 - l).collect();
        let left = composition(&left_letters);
        let lv = polylog_half(&left, bits);
        let rv = polylog_half(&right, bits);
        total = total.add(&lv.mul(&rv));
    }
    total
}

/// Value of a convergent word at `digits` decimal digits.
pub fn zeta_value(w: &Word, digits: u32) -> Result<NumericValue> {
    zeta_value_bits(w, bits_for_digits(digits))
}

/// Evaluates a combo of convergent words.
pub fn eval_combo_bits(c: &ZCombo, bits: u32) -> Result<NumericValue> {
    let mut total = NumericValue::zero(bits);
    for (m, coeff) in c.terms() {
        let mut prod = NumericValue::from_rational(&Rational::one(), bits);
        for w in m.words() {
            prod = prod.mul(&zeta_value_bits(w, bits)?);
        }
        total = total.add(&prod.scale(coeff));
    }
    Ok(total)
}

pub fn eval_combo(c: &ZCombo, digits: u32) -> Result<NumericValue> {
    eval_combo_bits(c, bits_for_digits(digits))
}

/// Evaluates `Σ c_i(value) · h^i`.
pub fn eval_asym_bits(q: &AsymExp, h: &NumericValue) -> Result<NumericValue> {
    let bits = h.bits();
    let mut total = NumericValue::zero(bits);
    let mut power = NumericValue::from_rational(&Rational::one(), bits);
    for c in q.coeffs() {
        total = total.add(&eval_combo_bits(c, bits)?.mul(&power));
        power = power.mul(h);
    }
    Ok(total)
}

/// The original series `Σ P(k̲)/Π(k_i)_{n+1}^A`, either over `k1 ≥ … ≥ kp ≥ 1`
/// (ordered) or over the full box `[1..∞)^p` (decoupled).
#[derive(Clone, Debug)]
pub struct SeriesInput {
    pub poly: MPoly,
    pub n: u32,
    pub a: u32,
    pub decoupled: bool,
}

/// Direct evaluation result: the value (partial sum plus any tail correction) and a
/// divergence flag. Divergent inputs carry an infinite error bound.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: NumericValue,
    pub divergent: bool,
}

fn pochhammer_u64(k: u64, len: u32) -> BigInt {
    (0..len as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(k + i))
}

/// Upper bound for `Σ_{k>K} k^{r−d}` with `d = A(n+1)` (uses `(k)_{n+1} ≥ k^{n+1}`).
fn tail_power_bound(r: u32, d: u32, kmax: u64) -> f64 {
    let e = d as f64 - r as f64;
    (kmax as f64).powf(1.0 - e) / (e - 1.0)
}

/// An ordered sum `Σ_{k1≥…≥kp} Π k_i^{r_i−d}` converges iff every outer block
/// `k1 ≥ … ≥ km` has total decay `Σ_{i≤m} (d − r_i) > m`.
fn ordered_convergent(poly: &MPoly, d: u32) -> bool {
    poly.terms().keys().all(|e| {
        let mut decay = 0i64;
        e.iter().enumerate().all(|(m, &r)| {
            decay += d as i64 - r as i64;
            decay > m as i64 + 1
        })
    })
}

/// Bound on the part of `Σ_{k1≥…≥kp} Π k_i^{r_i−d}` with `k1 > K`.
///
/// Inner variables with decay `e > 1` contribute their full sums; those with `e ≤ 1`
/// are bounded by `Σ_{i≤k} i^{−e} ≤ k^{1−e}(1 + ln k)`. What remains is
/// `∫_K^∞ x^{−E} (1+ln x)^L dx`, evaluated in closed form.
fn ordered_tail_bound(e: &[u32], d: u32, kmax: u64, sums: &HashMap<u32, f64>) -> f64 {
    let mut big_e = d as f64 - e[0] as f64;
    let mut logs = 0i32;
    let mut constant = 1.0;
    for &r in &e[1..] {
        let decay = d as f64 - r as f64;
        if decay > 1.0 {
            constant *= sums[&r] + tail_power_bound(r, d, kmax);
        } else {
            big_e -= 1.0 - decay;
            logs += 1;
        }
    }
    let k = kmax as f64;
    let lk = 1.0 + k.ln();
    // the integrand must be decreasing on [K, ∞)
    if big_e <= 1.0 || big_e * lk <= logs as f64 {
        return f64::INFINITY;
    }
    // ∫_{ln K}^∞ e^{−(E−1)u} (1+u)^L du = K^{1−E} Σ_i L!/(L−i)! (1+ln K)^{L−i} / (E−1)^{i+1}
    let mut integral = 0.0;
    let mut falling = 1.0;
    for i in 0..=logs {
        integral += falling * lk.powi(logs - i) / (big_e - 1.0).powi(i + 1);
        falling *= (logs - i) as f64;
    }
    constant * k.powf(1.0 - big_e) * integral
}

/// Evaluates the series directly up to `K` in every variable.
///
/// Ordered sums carry the bound `Σ|c| · T_{α_1}(K) · Π_{i≥2} F_{α_i}` where `T` bounds the
/// tail of the outermost variable and `F` the full inner sums. Box sums and `p = 1`
/// factor into one-dimensional series whose tails are evaluated exactly from partial
/// fractions.
pub fn eval_series_direct(input: &SeriesInput, kmax: u64, digits: u32) -> Result<SeriesValue> {
    if kmax == 0 {
        return Err(Error::Input("truncation K must be ≥ 1".into()));
    }
    let out_bits = bits_for_digits(digits);
    let SeriesInput { poly, n, a, decoupled } = input;
    let (n, a) = (*n, *a);
    let p = poly.arity();
    // Guard bits absorb the per-term rounding, so the rounding share of the bound
    // does not grow with K.
    let ops = (4.0 * p as f64 * kmax as f64 + 4.0) * 16f64.powi(p as i32);
    let guard = ops.log2().ceil() as u32 + 2;
    let bits = out_bits + guard;
    let d = a * (n + 1);
    let divergent = if *decoupled || p == 1 {
        !is_convergent_degree(poly, n, a)
    } else {
        !ordered_convergent(poly, d)
    };
    // Per-exponent values f_r(k) = k^r / (k)_{n+1}^A at k = 1..K.
    let mut tables: HashMap<u32, Vec<BigInt>> = HashMap::new();
    let mut sums_f64: HashMap<u32, f64> = HashMap::new();
    for e in poly.terms().keys() {
        for &r in e {
            tables.entry(r).or_insert_with(|| {
                (1..=kmax)
                    .map(|k| {
                        let num = BigInt::from(k).pow(r) << bits;
                        num / num_traits::pow(pochhammer_u64(k, n + 1), a as usize)
                    })
                    .collect()
            });
        }
    }
    for (&r, t) in &tables {
        let s: BigInt = t.iter().sum();
        sums_f64.insert(r, NumericValue { mantissa: s, bits, error: 0.0 }.to_f64());
    }
    if !divergent && (*decoupled || p == 1) {
        // Box sums factor into one-dimensional series, each completed with its exact tail.
        let mut full: HashMap<u32, NumericValue> = HashMap::new();
        for (&r, t) in &tables {
            let s: BigInt = t.iter().sum();
            let partial = NumericValue {
                mantissa: round_shift(&s, guard),
                bits: out_bits,
                error: ulp(out_bits),
            };
            let (tail_value, tail_err) = univariate_tail(&MPoly::from_terms(1, [(vec![r], Rational::one())]), n, a, kmax, out_bits)?;
            full.insert(r, partial.add(&tail_value).with_error(tail_err));
        }
        let mut value = NumericValue::zero(out_bits);
        for (e, c) in poly.terms() {
            let mut prod = NumericValue::from_rational(&Rational::one(), out_bits);
            for r in e {
                prod = prod.mul(&full[r]);
            }
            value = value.add(&prod.scale(c));
        }
        return Ok(SeriesValue { value, divergent });
    }
    let mut total = BigInt::zero();
    let mut coeff_mass = 0.0f64;
    let mut tail = 0.0f64;
    let mut monomial_cache: HashMap<Vec<u32>, BigInt> = HashMap::new();
    for (e, c) in poly.terms() {
        let value = monomial_cache
            .entry(e.clone())
            .or_insert_with(|| {
                if *decoupled || p == 1 {
                    let mut acc = BigInt::one() << bits;
                    for r in e {
                        let s: BigInt = tables[r].iter().sum();
                        acc = (acc * s) >> bits;
                    }
                    acc
                } else {
                    nested_sum(e, &tables, bits, kmax)
                }
            })
            .clone();
        total += round_div(&(value * c.numer()), c.denom());
        let cabs = rat_to_f64(c).abs();
        coeff_mass += cabs;
        if !divergent {
            tail += cabs * ordered_tail_bound(e, d, kmax, &sums_f64);
        }
    }
    let mut value = NumericValue {
        mantissa: round_shift(&total, guard),
        bits: out_bits,
        error: 0.0,
    };
    value.error = if divergent {
        f64::INFINITY
    } else {
        tail + coeff_mass.max(1.0) * ulp(out_bits)
    };
    Ok(SeriesValue { value, divergent })
}

fn nested_sum(e: &[u32], tables: &HashMap<u32, Vec<BigInt>>, bits: u32, kmax: u64) -> BigInt {
    let p = e.len();
    let k = kmax as usize;
    // g[m] = Σ_{inner chains with outer index ≤ m}
    let mut g: Vec<BigInt> = vec![BigInt::one() << bits; k];
    for level in (0..p).rev() {
        let f = &tables[&e[level]];
        let mut running = BigInt::zero();
        let mut next = Vec::with_capacity(k);
        for m in 0..k {
            running += (&f[m] * &g[m]) >> bits;
            next.push(running.clone());
        }
        g = next;
    }
    g[k - 1].clone()
}

/// Tail `Σ_{k>K} P(k)/(k)_{n+1}^A` for a univariate `P` via its partial fractions:
/// `Σ_{j,s≥2} E_{j,s} ζ(s; K+j+1) − Σ_j E_{j,1} (H_{K+j} − H_K)`.
fn univariate_tail(poly: &MPoly, n: u32, a: u32, kmax: u64, bits: u32) -> Result<(NumericValue, f64)> {
    let row = decompose_univariate(poly, n, a)?;
    let mut exact = Rational::zero();
    let mut err = 0.0;
    for (&(j, s), e) in &row.entries {
        if s == 1 {
            exact -= e * (harmonic(1, kmax + j as u64) - harmonic(1, kmax));
        } else {
            let (h, herr) = hurwitz_rational(s, kmax + j as u64 + 1, bits);
            exact += e * h;
            err += rat_to_f64(e).abs() * herr;
        }
    }
    let v = NumericValue::from_rational(&exact, bits);
    let e0 = v.error;
    Ok((NumericValue { error: 0.0, ..v }, err + e0))
}

/// Outcome of a numeric comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
    pub diff: String,
    pub bound: String,
}

impl Report {
    pub fn status(&self) -> &'static str {
        if self.pass {
            "pass"
        } else {
            "fail"
        }
    }
}

/// Compares two values: PASS iff `|lhs − rhs| ≤ tol + bound(lhs) + bound(rhs)`.
pub fn compare(lhs: &NumericValue, rhs: &NumericValue, tol: f64, digits: u32) -> Report {
    let diff = lhs.sub(rhs);
    let bound = lhs.error_bound() + rhs.error_bound();
    let d = diff.to_f64().abs();
    Report {
        pass: d <= tol + bound,
        lhs: lhs.to_decimal(digits),
        rhs: rhs.to_decimal(digits),
        diff: format!("{d:.3e}"),
        bound: format!("{bound:.3e}"),
    }
}

/// Compares a combo against the direct evaluation of a series.
pub fn verify_identity(
    decomp: &ZCombo,
    series: &SeriesInput,
    tol: f64,
    kmax: u64,
    digits: u32,
) -> Result<Report> {
    let rhs = eval_combo(decomp, digits)?;
    let lhs = eval_series_direct(series, kmax, digits)?;
    Ok(compare(&lhs.value, &rhs, tol, digits.min(30)))
}

/// Largest magnitude a value may have given its bound (used by callers combining bounds).
pub fn magnitude(v: &NumericValue) -> f64 {
    v.magnitude_bound()
}
