//! Multiple zeta value words, the stuffle (quasi-shuffle) product,
//! ζ*-regularization and polynomials in the harmonic symbol `H`.
//!
//! An [`AsymExp`] `Σ c_i H^i` stands for a sequence `f(N)` with
//! `f(N) − Σ c_i·H_N^i = O(N^{−1+ε})`. Products of such expansions are again
//! valid expansions because a polynomial in `H_N` times `O(N^{−1+ε})` stays in
//! the error class.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{inv_pow, Rational};
use crate::perm;

/// A composition `(s1, …, sr)`; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn new(entries: impl Into<Vec<u32>>) -> Self {
        let v = entries.into();
        assert!(v.iter().all(|&s| s >= 1), "word entries must be ≥ 1");
        Word(v)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_convergent(&self) -> bool {
        self.0.first().is_none_or(|&s| s >= 2)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "ζ({})", parts.join(","))
    }
}

/// A product of words, stored as a sorted multiset. The empty product is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<Word>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut words: Vec<Word>) -> Self {
        words.retain(|w| w.depth() > 0);
        words.sort();
        Monomial(words)
    }

    pub fn word(w: Word) -> Self {
        Monomial::new(vec![w])
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(Word::weight).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut words = self.0.clone();
        words.extend(other.0.iter().cloned());
        Monomial::new(words)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// ℚ-linear combination of monomials; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZCombo {
    terms: BTreeMap<Monomial, Rational>,
}

impl ZCombo {
    pub fn zero() -> Self {
        ZCombo::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut z = ZCombo::zero();
        z.add_term(Monomial::unit(), c);
        z
    }

    pub fn one() -> Self {
        ZCombo::constant(Rational::one())
    }

    pub fn word(w: Word) -> Self {
        let mut z = ZCombo::zero();
        z.add_term(Monomial::word(w), Rational::one());
        z
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut z = ZCombo::zero();
        for (m, c) in terms {
            z.add_term(m, c);
        }
        z
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add_scaled(&mut self, other: &ZCombo, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn add(&self, other: &ZCombo) -> ZCombo {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &ZCombo) -> ZCombo {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> ZCombo {
        let mut out = ZCombo::zero();
        out.add_scaled(self, c);
        out
    }

    /// Formal product: monomials multiply as multisets of words.
    pub fn mul(&self, other: &ZCombo) -> ZCombo {
        let mut out = ZCombo::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Largest weight among monomials (0 for constants and the zero combo).
    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(Monomial::weight).max().unwrap_or(0)
    }

    /// Iterates over every word occurring in any monomial.
    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys().flat_map(|m| m.words().iter())
    }
}

impl fmt::Debug for ZCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ZCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let a = c.abs();
            if m.is_unit() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial `Σ c_i H^i` with [`ZCombo`] coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AsymExp {
    coeffs: Vec<ZCombo>,
}

impl AsymExp {
    pub fn zero() -> Self {
        AsymExp::default()
    }

    pub fn constant(c: ZCombo) -> Self {
        AsymExp::from_coeffs(vec![c])
    }

    pub fn rational(c: Rational) -> Self {
        AsymExp::constant(ZCombo::constant(c))
    }

    pub fn one() -> Self {
        AsymExp::rational(Rational::one())
    }

    /// The symbol `H` itself.
    pub fn h() -> Self {
        AsymExp::from_coeffs(vec![ZCombo::zero(), ZCombo::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<ZCombo>) -> Self {
        while coeffs.last().is_some_and(ZCombo::is_zero) {
            coeffs.pop();
        }
        AsymExp { coeffs }
    }

    pub fn coeffs(&self) -> &[ZCombo] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ZCombo {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Constant term `Q(0)`.
    pub fn constant_term(&self) -> ZCombo {
        self.coeff(0)
    }

    /// Degree in `H`; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_scaled(&mut self, other: &AsymExp, c: &Rational) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), ZCombo::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_scaled(b, c);
        }
        let trimmed = std::mem::take(&mut self.coeffs);
        *self = AsymExp::from_coeffs(trimmed);
    }

    pub fn add(&self, other: &AsymExp) -> AsymExp {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &AsymExp) -> AsymExp {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scale(&self, c: &Rational) -> AsymExp {
        AsymExp::from_coeffs(self.coeffs.iter().map(|z| z.scale(c)).collect())
    }

    pub fn mul(&self, other: &AsymExp) -> AsymExp {
        if self.is_zero() || other.is_zero() {
            return AsymExp::zero();
        }
        let mut out = vec![ZCombo::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = a.mul(b);
                out[i + j].add_scaled(&prod, &Rational::one());
            }
        }
        AsymExp::from_coeffs(out)
    }

    /// Multiplies by `H`.
    pub fn mul_h(&self) -> AsymExp {
        if self.is_zero() {
            return AsymExp::zero();
        }
        let mut c = vec![ZCombo::zero()];
        c.extend(self.coeffs.iter().cloned());
        AsymExp::from_coeffs(c)
    }

    /// Applies [`normalize`] to every coefficient.
    pub fn normalized(&self) -> Result<AsymExp> {
        Ok(AsymExp::from_coeffs(
            self.coeffs.iter().map(normalize).collect::<Result<_>>()?,
        ))
    }
}

impl fmt::Debug for AsymExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AsymExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("({c})*H"),
                _ => format!("({c})*H^{i}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn stuffle_rec(a: &[u32], b: &[u32], out: &mut BTreeMap<Vec<u32>, BigInt>, prefix: &mut Vec<u32>) {
    if a.is_empty() || b.is_empty() {
        let mut w = prefix.clone();
        w.extend_from_slice(a);
        w.extend_from_slice(b);
        *out.entry(w).or_insert_with(BigInt::zero) += 1;
        return;
    }
    prefix.push(a[0]);
    stuffle_rec(&a[1..], b, out, prefix);
    prefix.pop();
    prefix.push(b[0]);
    stuffle_rec(a, &b[1..], out, prefix);
    prefix.pop();
    prefix.push(a[0] + b[0]);
    stuffle_rec(&a[1..], &b[1..], out, prefix);
    prefix.pop();
}

/// Quasi-shuffle product of two words, with integer multiplicities.
pub fn stuffle_counts(w1: &Word, w2: &Word) -> BTreeMap<Word, BigInt> {
    let mut out = BTreeMap::new();
    stuffle_rec(&w1.0, &w2.0, &mut out, &mut Vec::new());
    out.into_iter().map(|(k, v)| (Word(k), v)).collect()
}

/// Quasi-shuffle product of two words as a combination of single words.
pub fn stuffle(w1: &Word, w2: &Word) -> ZCombo {
    ZCombo::from_terms(
        stuffle_counts(w1, w2)
            .into_iter()
            .map(|(w, c)| (Monomial::word(w), Rational::from_integer(c))),
    )
}

/// Rewrites a weak chain `Σ_{k1≥…≥kq}` as the sum over its `2^{q−1}` contractions.
pub fn weak_to_strict(s: &[u32]) -> ZCombo {
    let mut out = ZCombo::zero();
    if s.is_empty() {
        return ZCombo::one();
    }
    let q = s.len();
    for mask in 0u32..(1 << (q - 1)) {
        let mut word = vec![s[0]];
        for (i, &e) in s.iter().enumerate().skip(1) {
            if mask & (1 << (i - 1)) != 0 {
                *word.last_mut().expect("non-empty") += e;
            } else {
                word.push(e);
            }
        }
        out.add_term(Monomial::word(Word(word)), Rational::one());
    }
    out
}

fn regularize_cache() -> &'static RwLock<HashMap<Word, AsymExp>> {
    static CACHE: OnceLock<RwLock<HashMap<Word, AsymExp>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The unique polynomial `Q` with `ζ_N(w) = Q(H_N) + O(N^{−1+ε})`; `Q(0) = ζ*(w)`.
///
/// Leading 1s are peeled with `(1)⋆tail = m·w + (words with fewer leading 1s)`,
/// which is exact at every finite `N`.
pub fn regularize_word(w: &Word) -> AsymExp {
    if let Some(q) = regularize_cache().read().expect("cache poisoned").get(w) {
        return q.clone();
    }
    let q = regularize_uncached(w);
    regularize_cache()
        .write()
        .expect("cache poisoned")
        .insert(w.clone(), q.clone());
    q
}

fn regularize_uncached(w: &Word) -> AsymExp {
    if w.is_convergent() {
        return AsymExp::constant(if w.depth() == 0 {
            ZCombo::one()
        } else {
            ZCombo::word(w.clone())
        });
    }
    let m = w.0.iter().take_while(|&&s| s == 1).count();
    let tail = Word(w.0[1..].to_vec());
    let mut acc = regularize_word(&tail).mul_h();
    for (other, c) in stuffle_counts(&Word(vec![1]), &tail) {
        if other == *w {
            debug_assert_eq!(c, BigInt::from(m));
            continue;
        }
        acc.add_scaled(&regularize_word(&other), &-Rational::from_integer(c));
    }
    acc.scale(&Rational::new(BigInt::one(), BigInt::from(m)))
}

/// Antisymmetrized word `Σ_σ ε_σ (s_σ(1), …, s_σ(p))`; the empty input gives 1.
pub fn zeta_as(s: &[u32]) -> ZCombo {
    let mut out = ZCombo::zero();
    for p in perm::permutations(s.len()) {
        let w: Vec<u32> = p.iter().map(|&i| s[i]).collect();
        out.add_term(Monomial::new(vec![Word(w)]), Rational::from_integer(perm::sign(&p).into()));
    }
    out
}

/// Expands every product monomial into single words via the stuffle product.
pub fn normalize(c: &ZCombo) -> Result<ZCombo> {
    let mut out = ZCombo::zero();
    for (m, coeff) in c.terms() {
        if m.words().len() > 1 {
            if let Some(bad) = m.words().iter().find(|w| !w.is_convergent()) {
                return Err(Error::Divergent(bad.to_string()));
            }
        }
        let mut acc: BTreeMap<Word, BigInt> = BTreeMap::new();
        acc.insert(Word::empty(), BigInt::one());
        for w in m.words() {
            let mut next = BTreeMap::new();
            for (u, k) in &acc {
                for (v, k2) in stuffle_counts(u, w) {
                    *next.entry(v).or_insert_with(BigInt::zero) += k * &k2;
                }
            }
            acc = next;
        }
        for (w, k) in acc {
            let mono = if w.depth() == 0 {
                Monomial::unit()
            } else {
                Monomial::word(w)
            };
            out.add_term(mono, coeff * Rational::from_integer(k));
        }
    }
    Ok(out)
}

/// Exact strict partial sum `ζ_N(w) = Σ_{N≥k1>…>kr≥1} Π k_i^{−s_i}`.
pub fn zeta_partial(w: &Word, n: u64) -> Rational {
    // inner[k] holds the sum over the innermost levels with outer index < k
    let r = w.depth();
    if r == 0 {
        return Rational::one();
    }
    let mut level: Vec<Rational> = vec![Rational::one(); n as usize + 2];
    for (d, &s) in w.0.iter().enumerate().rev() {
        let mut next = vec![Rational::zero(); n as usize + 2];
        let mut running = Rational::zero();
        for k in 1..=n {
            // level[k] = value of deeper levels restricted to indices < k (strict)
            running += inv_pow(k, s) * &level[k as usize];
            next[k as usize + 1] = running.clone();
        }
        if d == 0 {
            return running;
        }
        level = next;
    }
    unreachable!("loop returns at the outermost level")
}

/// Exact weak partial sum `Σ_{N≥k1≥…≥kr≥1} Π k_i^{−s_i}`.
pub fn weak_partial(s: &[u32], n: u64) -> Rational {
    if s.is_empty() {
        return Rational::one();
    }
    let mut level: Vec<Rational> = vec![Rational::one(); n as usize + 1];
    for (d, &e) in s.iter().enumerate().rev() {
        let mut next = vec![Rational::zero(); n as usize + 1];
        let mut running = Rational::zero();
        for k in 1..=n {
            running += inv_pow(k, e) * &level[k as usize];
            next[k as usize] = running.clone();
        }
        if d == 0 {
            return running;
        }
        level = next;
    }
    unreachable!("loop returns at the outermost level")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{harmonic, int, rat};

    fn w(v: &[u32]) -> Word {
        Word::new(v.to_vec())
    }

    fn single(words: &[(&[u32], i64)]) -> ZCombo {
        ZCombo::from_terms(words.iter().map(|(v, c)| (Monomial::word(w(v)), int(*c))))
    }

    #[test]
    fn stuffle_examples() {
        assert_eq!(stuffle(&w(&[2]), &w(&[3])), single(&[(&[2, 3], 1), (&[3, 2], 1), (&[5], 1)]));
        assert_eq!(stuffle(&w(&[1]), &w(&[1])), single(&[(&[1, 1], 2), (&[2], 1)]));
        assert_eq!(stuffle(&w(&[2]), &Word::empty()), single(&[(&[2], 1)]));
    }

    #[test]
    fn weak_to_strict_examples() {
        assert_eq!(weak_to_strict(&[4]), single(&[(&[4], 1)]));
        assert_eq!(weak_to_strict(&[2, 3]), single(&[(&[2, 3], 1), (&[5], 1)]));
        assert_eq!(
            weak_to_strict(&[1, 1, 1]),
            single(&[(&[1, 1, 1], 1), (&[2, 1], 1), (&[1, 2], 1), (&[3], 1)])
        );
    }

    #[test]
    fn regularize_examples() {
        assert_eq!(regularize_word(&w(&[1])), AsymExp::h());
        let q11 = regularize_word(&w(&[1, 1]));
        let expect = AsymExp::from_coeffs(vec![
            ZCombo::word(w(&[2])).scale(&rat(-1, 2)),
            ZCombo::zero(),
            ZCombo::constant(rat(1, 2)),
        ]);
        assert_eq!(q11, expect);
        let q12 = regularize_word(&w(&[1, 2]));
        let expect = AsymExp::from_coeffs(vec![
            single(&[(&[2, 1], -1), (&[3], -1)]),
            ZCombo::word(w(&[2])),
        ]);
        assert_eq!(q12, expect);
        assert_eq!(regularize_word(&w(&[3, 1])), AsymExp::constant(ZCombo::word(w(&[3, 1]))));
    }

    #[test]
    fn zeta_as_examples() {
        assert_eq!(zeta_as(&[5]), single(&[(&[5], 1)]));
        assert_eq!(zeta_as(&[3, 5]), single(&[(&[3, 5], 1), (&[5, 3], -1)]));
        assert!(zeta_as(&[3, 3]).is_zero());
        assert_eq!(zeta_as(&[]), ZCombo::one());
    }

    #[test]
    fn normalize_examples() {
        let m35 = ZCombo::from_terms([(Monomial::new(vec![w(&[3]), w(&[5])]), int(1))]);
        assert_eq!(normalize(&m35).unwrap(), single(&[(&[3, 5], 1), (&[5, 3], 1), (&[8], 1)]));
        assert_eq!(normalize(&ZCombo::word(w(&[7]))).unwrap(), ZCombo::word(w(&[7])));
        let m33 = ZCombo::from_terms([(Monomial::new(vec![w(&[3]), w(&[3])]), int(1))]);
        assert_eq!(normalize(&m33).unwrap(), single(&[(&[3, 3], 2), (&[6], 1)]));
        let bad = ZCombo::from_terms([(Monomial::new(vec![w(&[1]), w(&[3])]), int(1))]);
        assert!(normalize(&bad).is_err());
    }

    #[test]
    fn partial_sums_match_harmonic() {
        assert_eq!(zeta_partial(&w(&[1]), 10), harmonic(1, 10));
        // ζ_N(1,1) = (H^2 − H^(2))/2
        let h = harmonic(1, 12);
        let h2 = harmonic(2, 12);
        assert_eq!(zeta_partial(&w(&[1, 1]), 12), (&h * &h - h2) / int(2));
        assert_eq!(weak_partial(&[2, 1], 9), zeta_partial(&w(&[2, 1]), 9) + zeta_partial(&w(&[3]), 9));
    }
}
