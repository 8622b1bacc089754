//! Exact arithmetic substrate: rationals, harmonic numbers, `d_n`, sparse
//! multivariate polynomials and Pochhammer expansions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `1 / base^exp` for a positive integer base.
pub fn inv_pow(base: u64, exp: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(base).pow(exp))
}

/// `num/den` string with the denominator always present.
pub fn rat_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den`, `num`, or a plain decimal integer string.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Rational::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// `lcm(1, …, n)`, equal to 1 for `n ∈ {0, 1}`.
pub fn dn_lcm(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)))
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)` for non-negative arguments.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn harmonic_tables() -> &'static RwLock<HashMap<u32, Vec<Rational>>> {
    static TABLES: OnceLock<RwLock<HashMap<u32, Vec<Rational>>>> = OnceLock::new();
    TABLES.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Exact generalized harmonic number `H_M^{(s)} = Σ_{t=1}^{M} 1/t^s`.
///
/// Prefix tables are memoized per order and extended on demand.
pub fn harmonic(s: u32, m: u64) -> Rational {
    let idx = m as usize;
    if let Some(v) = harmonic_tables()
        .read()
        .expect("harmonic table poisoned")
        .get(&s)
        .and_then(|t| t.get(idx))
    {
        return v.clone();
    }
    let mut guard = harmonic_tables().write().expect("harmonic table poisoned");
    let table = guard.entry(s).or_insert_with(|| vec![Rational::zero()]);
    while table.len() <= idx {
        let t = table.len() as u64;
        let next = table.last().expect("table seeded") + inv_pow(t, s);
        table.push(next);
    }
    table[idx].clone()
}

/// Uncached reference implementation of [`harmonic`].
pub fn harmonic_direct(s: u32, m: u64) -> Rational {
    (1..=m).fold(Rational::zero(), |acc, t| acc + inv_pow(t, s))
}

/// `Σ_{t=lo}^{hi} 1/t^s`, zero when the range is empty.
pub fn harmonic_range(s: u32, lo: u64, hi: u64) -> Rational {
    if hi < lo {
        Rational::zero()
    } else {
        harmonic(s, hi) - harmonic(s, lo.saturating_sub(1))
    }
}

/// Sparse multivariate polynomial over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(arity: usize) -> Self {
        MPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = MPoly::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    pub fn one(arity: usize) -> Self {
        MPoly::constant(arity, Rational::one())
    }

    /// The variable `X_i` (0-based index).
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index {i} out of range for arity {arity}");
        let mut e = vec![0; arity];
        e[i] = 1;
        let mut p = MPoly::zero(arity);
        p.add_term(e, Rational::one());
        p
    }

    /// `Σ coeffs[i]·X_i + c0`.
    pub fn linear(coeffs: &[Rational], c0: Rational) -> Self {
        let arity = coeffs.len();
        let mut p = MPoly::constant(arity, c0);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; arity];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = MPoly::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent vector length must equal arity");
            p.add_term(e, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `c·X^e`, dropping the entry if it cancels.
    pub fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Degree in variable `i`; 0 for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MPoly::zero(self.arity);
        }
        MPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MPoly::one(self.arity);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.arity);
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += term;
        }
        total
    }

    /// Substitutes `X_i ↦ a·X_i + b`.
    pub fn substitute_affine(&self, i: usize, a: &Rational, b: &Rational) -> Self {
        let mut lin = vec![Rational::zero(); self.arity];
        lin[i] = a.clone();
        let image = MPoly::linear(&lin, b.clone());
        let max_deg = self.degree_in(i);
        let powers: Vec<MPoly> = std::iter::successors(Some(MPoly::one(self.arity)), |p| {
            Some(p * &image)
        })
        .take(max_deg as usize + 1)
        .collect();
        let mut out = MPoly::zero(self.arity);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[i] = 0;
            let mono = MPoly::from_terms(self.arity, [(rest, c.clone())]);
            out = &out + &(&mono * &powers[e[i] as usize]);
        }
        out
    }

    /// Renames variables: the variable at position `i` moves to position `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.arity);
        MPoly::from_terms(
            self.arity,
            self.terms.iter().map(|(e, c)| {
                let mut ne = vec![0; self.arity];
                for (i, &k) in e.iter().enumerate() {
                    ne[perm[i]] = k;
                }
                (ne, c.clone())
            }),
        )
    }

    /// Rising product `Π_{i=0}^{len−1} (self + i)`.
    pub fn rising(&self, len: u32) -> Self {
        let mut acc = MPoly::one(self.arity);
        for i in 0..len {
            let factor = self + &MPoly::constant(self.arity, int(i as i64));
            acc = &acc * &factor;
        }
        acc
    }

    /// Coefficients of a univariate polynomial, lowest degree first.
    pub fn univariate_coeffs(&self) -> Vec<Rational> {
        assert_eq!(self.arity, 1, "univariate_coeffs needs arity 1");
        let deg = self.degree_in(0) as usize;
        let mut out = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            out[e[0] as usize] = c.clone();
        }
        out
    }

    /// Lowest common denominator of all coefficients.
    pub fn coefficient_denominator(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

/// `Π_{i=0}^{L−1} (X + a + i)` in one variable.
pub fn pochhammer(a: &Rational, len: u32) -> MPoly {
    MPoly::linear(&[Rational::one()], a.clone()).rising(len)
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut out = MPoly::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("X{}", i + 1)
                    } else {
                        format!("X{}^{}", i + 1, k)
                    }
                })
                .collect();
            if vars.is_empty() || !abs.is_one() {
                write!(f, "{abs}")?;
                if !vars.is_empty() {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", vars.join("*"))?;
        }
        Ok(())
    }
}

/// Converts a rational to the nearest-ish `f64` (for diagnostics and bounds only).
///
/// Numerator and denominator are each reduced to their top 64 bits separately, so
/// the result keeps full relative precision whatever their sizes.
pub fn rat_to_f64(r: &Rational) -> f64 {
    fn top_bits(x: &BigInt) -> (f64, i64) {
        let shift = (x.bits() as i64 - 64).max(0);
        let m = (x >> shift as usize).to_f64().unwrap_or(0.0);
        (m, shift)
    }
    if r.numer().is_zero() {
        return 0.0;
    }
    let (a, ea) = top_bits(r.numer());
    let (b, eb) = top_bits(r.denom());
    let exp = (ea - eb).clamp(-2000, 2000) as i32;
    let q = a / b;
    // Split the power so intermediate factors stay finite.
    q * 2f64.powi(exp / 2) * 2f64.powi(exp - exp / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_to_f64_handles_wide_operands() {
        let big = BigInt::one() << 1100usize;
        let r = Rational::new(BigInt::from(3) << 1000usize, big.clone());
        assert!((rat_to_f64(&r) - 3.0 * 2f64.powi(-100)).abs() < 1e-40);
        let r = Rational::new(big, BigInt::from(7));
        assert!(rat_to_f64(&r).is_infinite());
        assert_eq!(rat_to_f64(&rat(-5, 4)), -1.25);
    }

    #[test]
    fn dn_lcm_small_values() {
        assert_eq!(dn_lcm(0), BigInt::from(1));
        assert_eq!(dn_lcm(1), BigInt::from(1));
        assert_eq!(dn_lcm(4), BigInt::from(12));
        assert_eq!(dn_lcm(6), BigInt::from(60));
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(1, 1), int(1));
        assert_eq!(harmonic(1, 3), rat(11, 6));
        assert_eq!(harmonic(3, 2), rat(9, 8));
        assert_eq!(harmonic(2, 0), int(0));
    }

    #[test]
    fn harmonic_cache_is_transparent() {
        for s in 1..=4 {
            for m in [0u64, 1, 7, 40, 13] {
                assert_eq!(harmonic(s, m), harmonic_direct(s, m));
            }
        }
    }

    #[test]
    fn pochhammer_examples() {
        let x = MPoly::var(1, 0);
        assert_eq!(pochhammer(&int(0), 2), &(&x * &x) + &x);
        let x3 = x.pow(3);
        assert_eq!(pochhammer(&int(-1), 3), &x3 - &x);
        assert_eq!(pochhammer(&rat(5, 7), 0), MPoly::one(1));
    }

    #[test]
    fn affine_substitution() {
        // P = X1^2 X2, X1 -> -X1 - 2
        let p = MPoly::from_terms(2, [(vec![2, 1], int(1))]);
        let q = p.substitute_affine(0, &int(-1), &int(-2));
        let expect = MPoly::from_terms(
            2,
            [(vec![2, 1], int(1)), (vec![1, 1], int(4)), (vec![0, 1], int(4))],
        );
        assert_eq!(q, expect);
    }

    #[test]
    fn permute_vars_swaps() {
        let p = MPoly::from_terms(2, [(vec![3, 1], int(2))]);
        assert_eq!(
            p.permute_vars(&[1, 0]),
            MPoly::from_terms(2, [(vec![1, 3], int(2))])
        );
    }

    #[test]
    fn rational_string_roundtrip() {
        let r = rat(-189, 2);
        assert_eq!(rat_to_string(&r), "-189/2");
        assert_eq!(parse_rational("-189/2"), Some(r));
        assert_eq!(parse_rational("78"), Some(int(78)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(rat_to_string(&int(78)), "78/1");
    }
}
