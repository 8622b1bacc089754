//! General reduction of shifted nested harmonic sums
//! `Σ_{N≥k1≥…≥kq≥1} Π 1/(k_i+a_i)^{s_i}` to polynomials in `H` with MZV coefficients,
//! plus the decoupled (box-summed) engine.
//!
//! A shift is lowered by telescoping over its own variable:
//! `Σ_{k=L}^{U} [f(k+1) − f(k)] = f(U+1) − f(L)` with `U`, `L` the neighbouring
//! variables. The upper end merges into the outer neighbour (or is an error term
//! when the neighbour is `N`), the lower end merges into the inner neighbour
//! (or is the constant `f(1)` at the innermost slot).

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, harmonic, int, inv_pow, MPoly, Rational};
use crate::mzv::{regularize_word, weak_to_strict, AsymExp, Monomial, Word, ZCombo};
use crate::partial_fractions::{decompose_multivariate, is_convergent_degree, PFTable};

/// One factor `1/(k + shift)^exp`.
pub type Slot = (u32, u32);

/// A nested sum with slots ordered from the outermost variable inwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub slots: Vec<Slot>,
    pub coeff: Rational,
}

impl Chain {
    pub fn new(slots: Vec<Slot>, coeff: Rational) -> Self {
        assert!(slots.iter().all(|&(_, s)| s >= 1), "exponents must be ≥ 1");
        Chain { slots, coeff }
    }

    pub fn unit(slots: Vec<Slot>) -> Self {
        Chain::new(slots, Rational::one())
    }

    pub fn depth(&self) -> usize {
        self.slots.len()
    }

    pub fn weight(&self) -> u32 {
        self.slots.iter().map(|&(_, s)| s).sum()
    }

    /// Termination measure `q + Σ a_i + Σ s_i`.
    pub fn measure(&self) -> u32 {
        self.slots.len() as u32 + self.slots.iter().map(|&(a, s)| a + s).sum::<u32>()
    }
}

/// A one-variable rational function `Σ c/(k + shift)^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LocalFraction {
    pub terms: BTreeMap<Slot, Rational>,
}

impl LocalFraction {
    pub fn single(shift: u32, exp: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((shift, exp), Rational::one());
        LocalFraction { terms }
    }

    pub fn add_term(&mut self, slot: Slot, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(slot).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&slot);
        }
    }

    /// Value at a rational point away from the poles.
    pub fn eval(&self, k: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(a, s), c)| c / num_traits::pow(k + int(a as i64), s as usize))
            .fold(Rational::zero(), |x, y| x + y)
    }
}

/// `1/((k+a)^s (k+b)^t)` in partial-fraction normal form.
pub fn merge_pair(a: u32, s: u32, b: u32, t: u32) -> LocalFraction {
    let mut out = LocalFraction::default();
    if a == b {
        out.add_term((a, s + t), Rational::one());
        return out;
    }
    // Expand each factor around the other's pole.
    let mut expand = |x: u32, sx: u32, y: u32, sy: u32| {
        let delta = int(y as i64 - x as i64);
        for m in 0..sx {
            let sign = if m % 2 == 0 { int(1) } else { int(-1) };
            let c = sign
                * Rational::from_integer(binomial((sy + m - 1) as u64, m as u64))
                / num_traits::pow(delta.clone(), (sy + m) as usize);
            out.add_term((x, sx - m), c);
        }
    };
    expand(a, s, b, t);
    expand(b, t, a, s);
    out
}

/// Exact product of two local fractions.
pub fn merge_slot(f1: &LocalFraction, f2: &LocalFraction) -> LocalFraction {
    let mut out = LocalFraction::default();
    for (&(a, s), c1) in &f1.terms {
        for (&(b, t), c2) in &f2.terms {
            let prod = c1 * c2;
            for (slot, c) in merge_pair(a, s, b, t).terms {
                out.add_term(slot, &prod * c);
            }
        }
    }
    out
}

/// Result of lowering one shift by 1.
#[derive(Clone, Debug)]
pub struct ShiftStep {
    /// The input chain with the chosen shift lowered by one.
    pub lowered: Chain,
    /// Depth `q−1` chains from the neighbour attachments and the innermost boundary.
    pub corrections: Vec<Chain>,
    /// When the outermost slot is stepped, the dropped `1/(N+a)^s × rest` term,
    /// recorded as `(a, s, rest)`. It is `O(log^{q−1} N / N)`.
    pub dropped_outer: Option<(u32, u32, Chain)>,
}

/// Lowers the shift of slot `i` by one via telescoping.
pub fn shift_step(chain: &Chain, i: usize) -> Result<ShiftStep> {
    let (a, s) = chain.slots[i];
    if a == 0 {
        return Err(Error::ZeroShift(i));
    }
    let q = chain.slots.len();
    let mut lowered = chain.clone();
    lowered.slots[i].0 = a - 1;
    let mut rest = chain.slots.clone();
    rest.remove(i);
    let mut corrections = Vec::new();
    let mut dropped_outer = None;

    // Upper end: + 1/(k_{i−1} + a)^s.
    if i == 0 {
        dropped_outer = Some((a, s, Chain::new(rest.clone(), chain.coeff.clone())));
    } else {
        let (b, t) = chain.slots[i - 1];
        for ((c, e), v) in merge_pair(a, s, b, t).terms {
            let mut slots = rest.clone();
            slots[i - 1] = (c, e);
            corrections.push(Chain::new(slots, &chain.coeff * v));
        }
    }
    // Lower end: − 1/(k_{i+1} + a − 1)^s, or the constant −1/a^s at the innermost slot.
    if i + 1 == q {
        corrections.push(Chain::new(rest, -&chain.coeff * inv_pow(a as u64, s)));
    } else {
        let (b, t) = chain.slots[i + 1];
        for ((c, e), v) in merge_pair(a - 1, s, b, t).terms {
            let mut slots = rest.clone();
            slots[i] = (c, e);
            corrections.push(Chain::new(slots, -&chain.coeff * v));
        }
    }
    Ok(ShiftStep {
        lowered,
        corrections,
        dropped_outer,
    })
}

/// Memoizing reducer; the cache is keyed on slot lists with the coefficient factored out.
#[derive(Default)]
pub struct Reducer {
    cache: Mutex<HashMap<Vec<Slot>, AsymExp>>,
}

impl Reducer {
    pub fn new() -> Self {
        Reducer::default()
    }

    /// Reduces a chain to its expansion in `H` (coefficient included).
    pub fn reduce_chain(&self, chain: &Chain) -> Result<AsymExp> {
        let base = self.reduce_slots(&chain.slots, chain.measure())?;
        Ok(base.scale(&chain.coeff))
    }

    fn reduce_slots(&self, slots: &[Slot], budget: u32) -> Result<AsymExp> {
        if let Some(hit) = self.cache.lock().expect("reducer cache poisoned").get(slots) {
            return Ok(hit.clone());
        }
        let unit = Chain::unit(slots.to_vec());
        if unit.measure() > budget {
            return Err(Error::Invariant(format!(
                "termination measure increased at {slots:?}"
            )));
        }
        let value = self.reduce_uncached(&unit)?;
        self.cache
            .lock()
            .expect("reducer cache poisoned")
            .insert(slots.to_vec(), value.clone());
        Ok(value)
    }

    fn reduce_uncached(&self, chain: &Chain) -> Result<AsymExp> {
        let slots = &chain.slots;
        if slots.is_empty() {
            return Ok(AsymExp::one());
        }
        let max_shift = slots.iter().map(|&(a, _)| a).max().expect("non-empty");
        if max_shift == 0 {
            let exps: Vec<u32> = slots.iter().map(|&(_, s)| s).collect();
            let mut out = AsymExp::zero();
            for (m, c) in weak_to_strict(&exps).terms() {
                let w = m.words()[0].clone();
                out.add_scaled(&regularize_word(&w), c);
            }
            return Ok(out);
        }
        // Largest shift first, innermost slot on ties.
        let i = (0..slots.len())
            .rev()
            .find(|&i| slots[i].0 == max_shift)
            .expect("max exists");
        let step = shift_step(chain, i)?;
        let budget = chain.measure() - 1;
        let mut out = self.reduce_slots(&step.lowered.slots, budget)?;
        for c in &step.corrections {
            out.add_scaled(&self.reduce_slots(&c.slots, budget)?, &c.coeff);
        }
        Ok(out)
    }

    /// Sums `C × reduce_chain` over a partial-fraction table.
    pub fn reduce_table(&self, table: &PFTable) -> Result<AsymExp> {
        let mut out = AsymExp::zero();
        for ((j, s), c) in &table.coeffs {
            let slots: Vec<Slot> = j.iter().copied().zip(s.iter().copied()).collect();
            out.add_scaled(&self.reduce_slots(&slots, u32::MAX)?, c);
        }
        Ok(out)
    }

    /// Expansion of `Σ_{N≥k1≥…≥kp≥1} P(k̲)/Π(k_i)_{n+1}^A`.
    pub fn decompose_series(&self, poly: &MPoly, n: u32, a: u32) -> Result<AsymExp> {
        let table = decompose_multivariate(poly, n, a)?;
        let out = self.reduce_table(&table)?;
        if is_convergent_degree(poly, n, a) && out.degree() > 0 {
            let top = out.normalized()?;
            if top.degree() > 0 {
                return Err(Error::Invariant(format!(
                    "convergent series produced H-degree {}",
                    top.degree()
                )));
            }
            return Ok(top);
        }
        Ok(out)
    }
}

/// Convenience wrapper around a fresh [`Reducer`].
pub fn reduce_chain(chain: &Chain) -> Result<AsymExp> {
    Reducer::new().reduce_chain(chain)
}

/// Convenience wrapper around a fresh [`Reducer`].
pub fn decompose_series(poly: &MPoly, n: u32, a: u32) -> Result<AsymExp> {
    Reducer::new().decompose_series(poly, n, a)
}

fn depth_one(s: u32) -> ZCombo {
    if s == 1 {
        // ζ*(1) = 0
        ZCombo::zero()
    } else {
        ZCombo::word(Word::new(vec![s]))
    }
}

/// Constant term of `Σ_{k ≤ N} 1/(k+j)^s = ζ_{N+j}(s) − H_j^{(s)}`.
fn shifted_single(j: u32, s: u32) -> ZCombo {
    let mut z = depth_one(s);
    z.add_term(Monomial::unit(), -harmonic(s, j as u64));
    z
}

/// Constant term of the decoupled sum `Σ_{k̲ ∈ [1..N]^p} P(k̲)/Π(k_i)_{n+1}^A`.
///
/// Entries are grouped into classes under `j_i ↦ n − j_i`. When a class carries the
/// sign pattern `(−1)^{s_i+1}` of the well-poised relation, its contribution factors
/// into `Π ((1 + (−1)^{s+1}) ζ*(s) − H_j^{(s)} − (−1)^{s+1} H_{n−j}^{(s)})`
/// (centre slots contribute `ζ*(s) − H_{n/2}^{(s)}`); other classes are summed
/// entry by entry.
pub fn decompose_decoupled(poly: &MPoly, n: u32, a: u32) -> Result<ZCombo> {
    let bound = a * (n + 1) - 2;
    crate::partial_fractions::check_degrees(poly, bound)?;
    let table = decompose_multivariate(poly, n, a)?;
    let p = table.p;
    // (reflected shifts, exponents) -> members (shifts, coefficient)
    type Classes = BTreeMap<(Vec<u32>, Vec<u32>), Vec<(Vec<u32>, Rational)>>;
    let mut classes = Classes::new();
    for ((j, s), c) in &table.coeffs {
        let rep: Vec<u32> = j.iter().map(|&x| x.min(n - x)).collect();
        classes
            .entry((rep, s.clone()))
            .or_default()
            .push((j.clone(), c.clone()));
    }
    let mut out = ZCombo::zero();
    for ((rep, s), members) in classes {
        let c_rep = members
            .iter()
            .find(|(j, _)| *j == rep)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero);
        let paired = class_is_paired(&rep, &s, n, &members, &c_rep);
        if paired {
            let mut prod = ZCombo::constant(c_rep);
            for i in 0..p {
                prod = prod.mul(&paired_factor(rep[i], s[i], n));
            }
            out = out.add(&prod);
        } else {
            for (j, c) in members {
                let mut prod = ZCombo::constant(c);
                for i in 0..p {
                    prod = prod.mul(&shifted_single(j[i], s[i]));
                }
                out = out.add(&prod);
            }
        }
    }
    Ok(out)
}

fn class_is_paired(
    rep: &[u32],
    s: &[u32],
    n: u32,
    members: &[(Vec<u32>, Rational)],
    c_rep: &Rational,
) -> bool {
    let expected: BTreeMap<Vec<u32>, Rational> = class_members(rep, n)
        .into_iter()
        .map(|j| {
            let mut sign = Rational::one();
            for i in 0..rep.len() {
                if j[i] != rep[i] && s[i].is_multiple_of(2) {
                    sign = -sign;
                }
            }
            (j, sign * c_rep)
        })
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let actual: BTreeMap<Vec<u32>, Rational> = members.iter().cloned().collect();
    expected == actual
}

fn class_members(rep: &[u32], n: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &r in rep {
        let mut next = Vec::new();
        for prefix in &out {
            let mut a = prefix.clone();
            a.push(r);
            next.push(a);
            if n - r != r {
                let mut b = prefix.clone();
                b.push(n - r);
                next.push(b);
            }
        }
        out = next;
    }
    out
}

fn paired_factor(j: u32, s: u32, n: u32) -> ZCombo {
    if 2 * j == n {
        return shifted_single(j, s);
    }
    let odd = s % 2 == 1;
    let mut z = if odd {
        depth_one(s).scale(&int(2))
    } else {
        ZCombo::zero()
    };
    let sign = if odd { int(1) } else { int(-1) };
    z.add_term(
        Monomial::unit(),
        -harmonic(s, j as u64) - sign * harmonic(s, (n - j) as u64),
    );
    z
}

/// Exact partial sum of a chain at finite `N`.
pub fn chain_partial_sum(slots: &[Slot], n: u64) -> Rational {
    if slots.is_empty() {
        return Rational::one();
    }
    let mut level = vec![Rational::one(); n as usize + 1];
    for (d, &(a, s)) in slots.iter().enumerate().rev() {
        let mut next = vec![Rational::zero(); n as usize + 1];
        let mut running = Rational::zero();
        for k in 1..=n {
            running += Rational::new(BigInt::one(), BigInt::from(k + a as u64).pow(s)) * &level[k as usize];
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
    use crate::exact::rat;
    use crate::mzv::Word;

    fn lf(terms: &[((u32, u32), Rational)]) -> LocalFraction {
        let mut f = LocalFraction::default();
        for (k, v) in terms {
            f.add_term(*k, v.clone());
        }
        f
    }

    #[test]
    fn merge_examples() {
        assert_eq!(merge_pair(0, 1, 1, 1), lf(&[((0, 1), int(1)), ((1, 1), int(-1))]));
        assert_eq!(merge_pair(1, 2, 1, 1), lf(&[((1, 3), int(1))]));
        assert_eq!(
            merge_pair(0, 1, 2, 2),
            lf(&[((0, 1), rat(1, 4)), ((2, 1), rat(-1, 4)), ((2, 2), rat(-1, 2))])
        );
    }

    #[test]
    fn merge_matches_product_at_points() {
        for (a, s, b, t) in [(0, 3, 2, 2), (1, 1, 3, 4), (2, 2, 0, 3)] {
            let f = merge_pair(a, s, b, t);
            for k in [rat(1, 3), int(5), rat(-7, 2)] {
                let direct = Rational::one()
                    / (num_traits::pow(&k + int(a as i64), s as usize)
                        * num_traits::pow(&k + int(b as i64), t as usize));
                assert_eq!(f.eval(&k), direct);
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let r = Reducer::new();
        let z2 = r.reduce_chain(&Chain::unit(vec![(0, 2)])).unwrap();
        assert_eq!(z2, AsymExp::constant(ZCombo::word(Word::new(vec![2]))));
        let z21 = r.reduce_chain(&Chain::unit(vec![(0, 2), (0, 1)])).unwrap();
        let expect = ZCombo::word(Word::new(vec![2, 1])).add(&ZCombo::word(Word::new(vec![3])));
        assert_eq!(z21, AsymExp::constant(expect));
        let h1 = r.reduce_chain(&Chain::unit(vec![(1, 1)])).unwrap();
        assert_eq!(h1, AsymExp::h().sub(&AsymExp::one()));
    }

    #[test]
    fn shift_step_depth_two_instance() {
        // K(1,0) − K(0,0) with s = (1,1): −Σ 1/k² plus the dropped outer term.
        let chain = Chain::unit(vec![(1, 1), (0, 1)]);
        let step = shift_step(&chain, 0).unwrap();
        assert_eq!(step.lowered.slots, vec![(0, 1), (0, 1)]);
        assert_eq!(step.corrections.len(), 1);
        assert_eq!(step.corrections[0].slots, vec![(0, 2)]);
        assert_eq!(step.corrections[0].coeff, int(-1));
        assert!(step.dropped_outer.is_some());
    }

    #[test]
    fn shift_step_is_exact_at_finite_n() {
        let n = 50u64;
        let chain = Chain::unit(vec![(2, 3), (1, 1), (2, 2)]);
        for i in 0..3 {
            let step = shift_step(&chain, i).unwrap();
            let mut rhs = chain_partial_sum(&step.lowered.slots, n);
            for c in &step.corrections {
                rhs += &c.coeff * chain_partial_sum(&c.slots, n);
            }
            if let Some((a, s, rest)) = &step.dropped_outer {
                rhs += &rest.coeff * chain_partial_sum(&rest.slots, n) * inv_pow(n + *a as u64, *s);
            }
            assert_eq!(rhs, chain_partial_sum(&chain.slots, n), "slot {i}");
        }
    }

    #[test]
    fn zero_shift_is_rejected() {
        assert!(matches!(shift_step(&Chain::unit(vec![(0, 2)]), 0), Err(Error::ZeroShift(0))));
    }

    #[test]
    fn decoupled_examples() {
        let z = decompose_decoupled(&MPoly::one(2), 0, 3).unwrap();
        let m = Monomial::new(vec![Word::new(vec![3]), Word::new(vec![3])]);
        assert_eq!(z, ZCombo::from_terms([(m, int(1))]));
        let z = decompose_decoupled(&MPoly::one(1), 0, 3).unwrap();
        assert_eq!(z, ZCombo::word(Word::new(vec![3])));
    }

    #[test]
    fn decoupled_paired_and_unpaired_agree() {
        // A non-symmetric numerator takes the entry-by-entry route; compare with a direct sum.
        let x = MPoly::var(1, 0);
        let z = decompose_decoupled(&x, 1, 2).unwrap();
        // k/(k(k+1))^2 = 1/(k(k+1)^2) = 1/k − 1/(k+1) − 1/(k+1)^2 → sum = 1 − (ζ(2) − 1) = 2 − ζ(2)
        let expect = ZCombo::constant(int(2)).sub(&ZCombo::word(Word::new(vec![2])));
        assert_eq!(z, expect);
    }
}
