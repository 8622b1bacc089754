//! Orbit-symmetrized sums for even `n` and the structurally constrained driver.
//!
//! For an index point `(j̲, s̲)` the orbit sum is
//!
//! ```text
//! O(j̲, s̲) = Σ_{N≥k1≥…≥kp≥1} Σ_{σ, ε̲} ε_σ Π ε_i^{s_i+1} Π 1/(k_σ(i) + ε_i·j_i)^{s_i},
//! ```
//!
//! with `ε·j` meaning `j` or `n − j`. Summing the signs first gives
//! `O = Σ_{k strictly decreasing} det[G_i(k_l)]` with
//! `G_i(k) = (k+j_i)^{−s_i} + (−1)^{s_i+1} (k+n−j_i)^{−s_i}`, so `O` is antisymmetric
//! under joint permutations of the slots, picks up `(−1)^{s_i+1}` under `j_i ↦ n − j_i`,
//! and vanishes when two slots coincide.
//!
//! At the centre `j̲ = (n/2, …)` every `G_i` is `2(k+n/2)^{−s_i}` for odd `s_i` (zero
//! otherwise), and the strict sum over `(n/2, N+n/2]` splits into antisymmetrized
//! zeta values times finite sums over `[1, n/2]`.
//!
//! Away from the centre one coordinate is raised at a time. Raising `j_1` changes row 1
//! by a telescoping difference; summing it out leaves
//!
//! * a boundary term `(−1)^p β · O_{p−1}(rows 2..p)`, with
//!   `β = (j_1+1)^{−s_1} + (−1)^{s_1} (n−j_1)^{−s_1}`;
//! * for every other row `θ`, a depth-one sum `Φ_θ = Σ_λ Ψ(λ) G_θ(λ)` of two merged factors
//!   times `O_{p−2}` of the remaining rows, with sign `−(−1)^θ`;
//! * coincidence terms, which are determinants with a repeated column and cancel
//!   (checked explicitly by [`b_cancellation_check`]).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{harmonic, int, inv_pow, MPoly, Rational};
use crate::mzv::{regularize_word, zeta_partial, AsymExp, Monomial, Word, ZCombo};
use crate::partial_fractions::{check_degrees, decompose_multivariate};
use crate::perm;
use crate::reducer::{merge_pair, LocalFraction};
use crate::symmetry::{is_in_ap, orbit, Point};

/// A generator product `Π ζ_N(pairs) × ζ^as_N(anti)`.
///
/// `pairs` are depth-one factors coming from merged pairs of slots; `anti` is the
/// antisymmetrized word `Σ_σ ε_σ ζ_N(anti_σ)`, stored sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenKey {
    pub pairs: Vec<u32>,
    pub anti: Vec<u32>,
}

impl GenKey {
    pub fn unit() -> Self {
        GenKey {
            pairs: Vec::new(),
            anti: Vec::new(),
        }
    }

    fn entries(&self) -> impl Iterator<Item = u32> + '_ {
        self.pairs.iter().chain(self.anti.iter()).copied()
    }

    /// Expansion in `H` of the partial-sum generator.
    pub fn to_asym(&self) -> AsymExp {
        let mut out = AsymExp::one();
        for &e in &self.pairs {
            out = out.mul(&regularize_word(&Word::new(vec![e])));
        }
        out.mul(&anti_asym(&self.anti))
    }

    /// Regularized constant term as a combination of convergent words.
    pub fn constant_combo(&self) -> ZCombo {
        let mut out = ZCombo::one();
        for &e in &self.pairs {
            out = out.mul(&regularize_word(&Word::new(vec![e])).constant_term());
        }
        out.mul(&anti_asym(&self.anti).constant_term())
    }
}

fn anti_asym(u: &[u32]) -> AsymExp {
    let mut out = AsymExp::zero();
    for p in perm::permutations(u.len()) {
        let w: Vec<u32> = p.iter().map(|&i| u[i]).collect();
        out.add_scaled(&regularize_word(&Word::new(w)), &int(perm::sign(&p) as i64));
    }
    out
}

/// Rational combination of generator products.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenCombo {
    terms: BTreeMap<GenKey, Rational>,
}

impl GenCombo {
    pub fn zero() -> Self {
        GenCombo::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut out = GenCombo::zero();
        out.add_term(GenKey::unit(), c);
        out
    }

    pub fn one() -> Self {
        GenCombo::constant(Rational::one())
    }

    /// `ζ_N(e)` as a paired factor.
    pub fn pair(e: u32) -> Self {
        let mut out = GenCombo::zero();
        out.add_term(
            GenKey {
                pairs: vec![e],
                anti: Vec::new(),
            },
            Rational::one(),
        );
        out
    }

    /// `ζ^as_N(u)`, sorted into canonical order (zero when entries repeat).
    pub fn anti(u: &[u32]) -> Self {
        let sign = perm::sorting_sign(u);
        let mut out = GenCombo::zero();
        if sign != 0 {
            let mut sorted = u.to_vec();
            sorted.sort_unstable();
            out.add_term(
                GenKey {
                    pairs: Vec::new(),
                    anti: sorted,
                },
                int(sign as i64),
            );
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<GenKey, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &GenKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, key: GenKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &GenCombo, c: &Rational) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> GenCombo {
        let mut out = GenCombo::zero();
        out.add_scaled(self, c);
        out
    }

    /// Product; at most one factor of each term may carry an antisymmetric part.
    pub fn mul(&self, other: &GenCombo) -> GenCombo {
        let mut out = GenCombo::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                assert!(
                    k1.anti.is_empty() || k2.anti.is_empty(),
                    "product of two antisymmetric parts"
                );
                let mut pairs = k1.pairs.clone();
                pairs.extend_from_slice(&k2.pairs);
                pairs.sort_unstable();
                let anti = if k1.anti.is_empty() {
                    k2.anti.clone()
                } else {
                    k1.anti.clone()
                };
                out.add_term(GenKey { pairs, anti }, c1 * c2);
            }
        }
        out
    }

    /// Expansion in `H`, stuffle-normalized.
    pub fn to_asym(&self) -> Result<AsymExp> {
        let mut out = AsymExp::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&k.to_asym(), c);
        }
        out.normalized()
    }
}

/// Tags of one constrained term: `q′` paired factors and an antisymmetric part of depth `q″`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tags {
    pub qprime: usize,
    pub qsecond: usize,
}

/// One term `c · Π ζ(s′_i) · ζ^as(s″)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedTerm {
    pub key: GenKey,
    pub coeff: Rational,
}

impl ConstrainedTerm {
    pub fn tags(&self) -> Tags {
        Tags {
            qprime: self.key.pairs.len(),
            qsecond: self.key.anti.len(),
        }
    }
}

/// A combination of generator products with shape tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedDecomp {
    pub terms: Vec<ConstrainedTerm>,
}

impl ConstrainedDecomp {
    pub fn from_gens(g: &GenCombo) -> Self {
        ConstrainedDecomp {
            terms: g
                .terms()
                .iter()
                .map(|(k, c)| ConstrainedTerm {
                    key: k.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    /// Expanded combination (regularized constants for divergent generators).
    pub fn combo(&self) -> ZCombo {
        let mut out = ZCombo::zero();
        for t in &self.terms {
            out.add_scaled(&t.key.constant_combo(), &t.coeff);
        }
        out
    }

    /// Expansion with one entry per monomial of each term, carrying that term's tags.
    pub fn tagged_monomials(&self) -> Vec<(Monomial, Rational, Tags)> {
        let mut out = Vec::new();
        for t in &self.terms {
            let pairs: Vec<Word> = t.key.pairs.iter().map(|&e| Word::new(vec![e])).collect();
            let u = &t.key.anti;
            for p in perm::permutations(u.len()) {
                let mut words = pairs.clone();
                if !u.is_empty() {
                    words.push(Word::new(p.iter().map(|&i| u[i]).collect::<Vec<_>>()));
                }
                out.push((
                    Monomial::new(words),
                    &t.coeff * int(perm::sign(&p) as i64),
                    t.tags(),
                ));
            }
        }
        out
    }

    /// Checks odd entries, `s′ ≤ 2A−1`, `s″ ≤ A` and `2q′ + q″ ≤ p` on every term.
    pub fn check_structure(&self, p: usize, a: u32) -> Result<()> {
        let mut failures = Vec::new();
        for t in &self.terms {
            let k = &t.key;
            if let Some(e) = k.entries().find(|e| e % 2 == 0) {
                failures.push(format!("{k:?}: even entry {e}"));
            }
            if let Some(e) = k.pairs.iter().find(|&&e| e + 1 > 2 * a) {
                failures.push(format!("{k:?}: paired entry {e} > 2A−1"));
            }
            if let Some(e) = k.anti.iter().find(|&&e| e > a) {
                failures.push(format!("{k:?}: antisymmetric entry {e} > A"));
            }
            let Tags { qprime, qsecond } = t.tags();
            if 2 * qprime + qsecond > p {
                failures.push(format!("{k:?}: 2q′+q″ = {} > p = {p}", 2 * qprime + qsecond));
            }
        }
        if failures.is_empty() {
            Ok(())
        } else {
            Err(Error::Invariant(failures.join("; ")))
        }
    }
}

type OrbitCacheKey = (u32, Vec<u32>, Vec<u32>);

/// Memoized evaluator of orbit sums.
#[derive(Default)]
pub struct OrbitEngine {
    cache: Mutex<HashMap<OrbitCacheKey, GenCombo>>,
}

fn sign_rat(negative: bool) -> Rational {
    if negative {
        -Rational::one()
    } else {
        Rational::one()
    }
}

impl OrbitEngine {
    pub fn new() -> Self {
        OrbitEngine::default()
    }

    /// `O(j̲, s̲)` as a combination of generator products.
    pub fn orbit_sum(&self, n: u32, j: &[u32], s: &[u32]) -> Result<GenCombo> {
        if n % 2 == 1 {
            return Err(Error::OddN(n));
        }
        if j.len() != s.len() {
            return Err(Error::Input("j and s must have the same length".into()));
        }
        if let Some(&bad) = j.iter().find(|&&x| x > n) {
            return Err(Error::IndexOutOfRange { j: bad, n });
        }
        if s.contains(&0) {
            return Err(Error::Input("exponents must be ≥ 1".into()));
        }
        Ok(self.orbit_rec(n, j, s))
    }

    fn orbit_rec(&self, n: u32, j: &[u32], s: &[u32]) -> GenCombo {
        if j.is_empty() {
            return GenCombo::one();
        }
        let m = n / 2;
        // Reflect towards the upper half, then sort slots by decreasing j.
        let mut negative = false;
        let mut slots: Vec<(u32, u32)> = Vec::with_capacity(j.len());
        for (&ji, &si) in j.iter().zip(s) {
            if ji < m {
                negative ^= si % 2 == 0;
                slots.push((n - ji, si));
            } else {
                slots.push((ji, si));
            }
        }
        let keyed: Vec<(std::cmp::Reverse<u32>, u32)> =
            slots.iter().map(|&(a, b)| (std::cmp::Reverse(a), b)).collect();
        let sort_sign = perm::sorting_sign(&keyed);
        if sort_sign == 0 {
            return GenCombo::zero();
        }
        negative ^= sort_sign < 0;
        slots.sort_by_key(|&(a, b)| (std::cmp::Reverse(a), b));
        let cj: Vec<u32> = slots.iter().map(|x| x.0).collect();
        let cs: Vec<u32> = slots.iter().map(|x| x.1).collect();
        let key = (n, cj.clone(), cs.clone());
        let cached = self.cache.lock().expect("orbit cache poisoned").get(&key).cloned();
        let value = match cached {
            Some(v) => v,
            None => {
                let v = self.canonical(n, &cj, &cs);
                self.cache
                    .lock()
                    .expect("orbit cache poisoned")
                    .insert(key, v.clone());
                v
            }
        };
        value.scale(&sign_rat(negative))
    }

    fn canonical(&self, n: u32, j: &[u32], s: &[u32]) -> GenCombo {
        let m = n / 2;
        if j[0] == m {
            return center_gens(n, s);
        }
        let mut lower = j.to_vec();
        lower[0] -= 1;
        let mut out = self.orbit_rec(n, &lower, s);
        out.add_scaled(&self.step(n, &lower, s), &Rational::one());
        out
    }

    /// `O(j̲ + e_1) − O(j̲)` for `j_1 ≤ n − 1`.
    fn step(&self, n: u32, j: &[u32], s: &[u32]) -> GenCombo {
        let p = j.len();
        let (j1, s1) = (j[0], s[0]);
        let mut beta = inv_pow(j1 as u64 + 1, s1);
        let tail = inv_pow((n - j1) as u64, s1);
        if s1 % 2 == 0 {
            beta += tail;
        } else {
            beta -= tail;
        }
        let mut out = self
            .orbit_rec(n, &j[1..], &s[1..])
            .scale(&(beta * sign_rat(p % 2 == 1)));
        for theta in 1..p {
            let phi = phi_theta(n, j1, s1, j[theta], s[theta]);
            let rest_j: Vec<u32> = (1..p).filter(|&i| i != theta).map(|i| j[i]).collect();
            let rest_s: Vec<u32> = (1..p).filter(|&i| i != theta).map(|i| s[i]).collect();
            let inner = self.orbit_rec(n, &rest_j, &rest_s);
            // −(−1)^θ with θ counted from 1
            let sign = sign_rat(theta % 2 == 1);
            out.add_scaled(&phi.mul(&inner), &sign);
        }
        out
    }
}

/// `Ψ(λ) = Σ_{v ∈ {j, j+1}} [(λ+v)^{−s} + (−1)^s (λ+n−v)^{−s}]` as `(shift, coeff)` pairs.
fn psi_terms(n: u32, j1: u32, s1: u32) -> Vec<(u32, Rational)> {
    let sg = sign_rat(s1 % 2 == 1);
    vec![
        (j1, Rational::one()),
        (n - j1, sg.clone()),
        (j1 + 1, Rational::one()),
        (n - j1 - 1, sg),
    ]
}

/// `G(λ) = (λ+j)^{−s} + (−1)^{s+1} (λ+n−j)^{−s}` as `(shift, coeff)` pairs.
fn g_terms(n: u32, j: u32, s: u32) -> Vec<(u32, Rational)> {
    vec![(j, Rational::one()), (n - j, sign_rat(s.is_multiple_of(2)))]
}

/// `Φ_θ = Σ_{λ=1}^{N} Ψ(λ) G_θ(λ)` with `Σ_{λ≤N} (λ+x)^{−e} → ζ_N(e) − H_x^{(e)}`.
fn phi_theta(n: u32, j1: u32, s1: u32, jt: u32, st: u32) -> GenCombo {
    let mut local = LocalFraction::default();
    for (a, ca) in psi_terms(n, j1, s1) {
        for (b, cb) in g_terms(n, jt, st) {
            let c = &ca * &cb;
            for (slot, v) in merge_pair(a, s1, b, st).terms {
                local.add_term(slot, &c * v);
            }
        }
    }
    let mut out = GenCombo::zero();
    let mut harmonic_mass = Rational::zero();
    for (&(x, e), c) in &local.terms {
        if e == 1 {
            harmonic_mass += c;
        } else {
            out.add_scaled(&GenCombo::pair(e), c);
        }
        out.add_term(GenKey::unit(), -(c * harmonic(e, x as u64)));
    }
    assert!(
        harmonic_mass.is_zero(),
        "merged pair kept a divergent simple pole"
    );
    out
}

/// Finite strict sum `Σ_{m ≥ ℓ_r > … > ℓ_1 ≥ 1} Π ℓ_i^{−t_i}` (last index largest).
fn finite_last_largest(t: &[u32], m: u32) -> Rational {
    let rev: Vec<u32> = t.iter().rev().copied().collect();
    zeta_partial(&Word::new(rev), m as u64)
}

fn center_gens(n: u32, s: &[u32]) -> GenCombo {
    let p = s.len();
    if s.iter().any(|x| x % 2 == 0) {
        return GenCombo::zero();
    }
    let m = n / 2;
    let mut out = GenCombo::zero();
    for mask in 0u32..(1 << p) {
        let t: Vec<usize> = (0..p).filter(|i| mask & (1 << i) != 0).collect();
        let u: Vec<usize> = (0..p).filter(|i| mask & (1 << i) == 0).collect();
        let order: Vec<usize> = u.iter().chain(t.iter()).copied().collect();
        let split_sign = perm::sign(&order);
        let mut finite = Rational::zero();
        for tau in perm::permutations(t.len()) {
            let vals: Vec<u32> = tau.iter().map(|&i| s[t[i]]).collect();
            finite += int(perm::sign(&tau) as i64) * finite_last_largest(&vals, m);
        }
        if finite.is_zero() {
            continue;
        }
        let sign = if t.len().is_multiple_of(2) { split_sign } else { -split_sign };
        let coeff = finite * int(sign as i64) * int(1i64 << p);
        let us: Vec<u32> = u.iter().map(|&i| s[i]).collect();
        out.add_scaled(&GenCombo::anti(&us), &coeff);
    }
    out
}

/// Orbit sum at the centre `j̲ = (n/2, …, n/2)`.
pub fn center_base_case(n: u32, s: &[u32]) -> Result<AsymExp> {
    if n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    center_gens(n, s).to_asym()
}

/// An orbit sum together with its expansion in `H`.
#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub gens: GenCombo,
    pub asym: AsymExp,
}

impl OrbitDecomposition {
    pub fn constrained(&self) -> ConstrainedDecomp {
        ConstrainedDecomp::from_gens(&self.gens)
    }
}

/// `O(j̲, s̲)` with a fresh engine.
pub fn orbit_decompose(n: u32, j: &[u32], s: &[u32]) -> Result<OrbitDecomposition> {
    let gens = OrbitEngine::new().orbit_sum(n, j, s)?;
    let asym = gens.to_asym()?;
    Ok(OrbitDecomposition { gens, asym })
}

/// Result of the symmetric driver.
#[derive(Clone, Debug)]
pub struct SymmetricDecomp {
    pub decomp: ConstrainedDecomp,
    pub gens: GenCombo,
    pub value: ZCombo,
}

/// Decomposes `Σ_{N≥k1≥…≥kp≥1} P(k̲)/Π(k_i)_{n+1}^A` for `P ∈ 𝒜_p` and even `n` by
/// averaging over orbits of the partial-fraction table.
pub fn decompose_symmetric_series(poly: &MPoly, n: u32, a: u32) -> Result<SymmetricDecomp> {
    let p = poly.arity();
    let mut failures = Vec::new();
    if n % 2 == 1 {
        failures.push(format!("n = {n} is odd"));
    }
    if !is_in_ap(poly, n, a) {
        failures.push("P is not in the well-poised class (antisymmetry or reflection fails)".into());
    }
    if a == 0 {
        failures.push("A must be ≥ 1".into());
    } else if let Err(e) = check_degrees(poly, (a * (n + 1)).saturating_sub(2)) {
        failures.push(e.to_string());
    }
    if !failures.is_empty() {
        return Err(Error::Precondition(failures.join("; ")));
    }
    let table = decompose_multivariate(poly, n, a)?;
    let engine = OrbitEngine::new();
    let group_order = (1u64 << p) * (1..=p as u64).product::<u64>();
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    let mut gens = GenCombo::zero();
    for (j, s) in table.coeffs.keys() {
        let point: Point = (j.clone(), s.clone());
        if seen.contains(&point) {
            continue;
        }
        let (key, members) = orbit(&point, n)?;
        seen.extend(members);
        let (rj, rs) = &key.representative;
        let c = table.get(rj, rs);
        if c.is_zero() {
            continue;
        }
        let weight = c * Rational::new((key.size as i64).into(), (group_order as i64).into());
        gens.add_scaled(&engine.orbit_sum(n, rj, rs)?, &weight);
    }
    let asym = gens.to_asym()?;
    if asym.degree() > 0 {
        return Err(Error::Invariant(format!(
            "symmetric expansion has H-degree {}",
            asym.degree()
        )));
    }
    let bad: Vec<String> = gens
        .terms()
        .keys()
        .filter(|k| k.entries().any(|e| e == 1))
        .map(|k| format!("{k:?}"))
        .collect();
    if !bad.is_empty() {
        return Err(Error::Invariant(format!(
            "generators with an entry 1 kept non-zero coefficients: {}",
            bad.join(", ")
        )));
    }
    let decomp = ConstrainedDecomp::from_gens(&gens);
    decomp.check_structure(p, a)?;
    let value = asym.constant_term();
    debug_assert_eq!(crate::mzv::normalize(&decomp.combo()).ok().as_ref(), Some(&value));
    Ok(SymmetricDecomp { decomp, gens, value })
}

type FactorKey = Vec<Vec<(u32, u32)>>;

fn expand_slot(factors: &[Vec<(u32, Rational)>], exps: &[u32]) -> Vec<(Vec<(u32, u32)>, Rational)> {
    let mut acc: Vec<(Vec<(u32, u32)>, Rational)> = vec![(Vec::new(), Rational::one())];
    for (f, &e) in factors.iter().zip(exps) {
        let mut next = Vec::new();
        for (key, c) in &acc {
            for (shift, cf) in f {
                let mut k = key.clone();
                k.push((*shift, e));
                next.push((k, c * cf));
            }
        }
        acc = next;
    }
    for (k, _) in acc.iter_mut() {
        k.sort_unstable();
    }
    acc
}

/// Computes every coincidence term of the step raising `j_1` at `(j̲, s̲)` as a formal
/// product of factors per summation slot and returns whether their signed sum is zero.
///
/// The step exists only for `j_1 < n` and `j_i ≤ n`.
pub fn b_cancellation_check(n: u32, j: &[u32], s: &[u32]) -> Result<bool> {
    if j.len() != s.len() {
        return Err(Error::Input("j and s must have the same length".into()));
    }
    if let Some(&bad) = j.iter().find(|&&v| v > n) {
        return Err(Error::IndexOutOfRange { j: bad, n });
    }
    if j.first().is_some_and(|&j1| j1 >= n) {
        return Err(Error::IndexOutOfRange { j: j[0] + 1, n });
    }
    let p = j.len();
    if p < 2 {
        return Ok(true);
    }
    let psi = psi_terms(n, j[0], s[0]);
    let g: Vec<Vec<(u32, Rational)>> = (0..p).map(|i| g_terms(n, j[i], s[i])).collect();
    let mut total: BTreeMap<FactorKey, Rational> = BTreeMap::new();
    for theta in 1..p {
        let rest: Vec<usize> = (1..p).filter(|&i| i != theta).collect();
        let q = rest.len();
        let theta_sign = if theta % 2 == 0 { 1 } else { -1 };
        for pi in perm::permutations(q) {
            let sign = theta_sign * perm::sign(&pi);
            for d in 0..q {
                // slots in order; slot c carries row rest[pi[c]], slot d also Ψ and G_θ
                let mut expanded: Vec<(FactorKey, Rational)> = vec![(Vec::new(), int(sign as i64))];
                for c in 0..q {
                    let row = rest[pi[c]];
                    let slot = if c == d {
                        expand_slot(
                            &[psi.clone(), g[theta].clone(), g[row].clone()],
                            &[s[0], s[theta], s[row]],
                        )
                    } else {
                        expand_slot(&[g[row].clone()], &[s[row]])
                    };
                    let mut next = Vec::new();
                    for (key, cv) in &expanded {
                        for (sk, sc) in &slot {
                            let mut k = key.clone();
                            k.push(sk.clone());
                            next.push((k, cv * sc));
                        }
                    }
                    expanded = next;
                }
                for (k, c) in expanded {
                    *total.entry(k).or_insert_with(Rational::zero) += c;
                }
            }
        }
    }
    Ok(total.values().all(|c| c.is_zero()))
}

/// Largest `|c|` among the coefficients (used by denominator checks).
pub fn max_abs_coeff(g: &GenCombo) -> Rational {
    g.terms()
        .values()
        .map(|c| c.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
}
