//! Partial-fraction tables `C[s̲; j̲]` of `P(k̲) / Π (k_i)_{n+1}^A`.
//!
//! Univariate rows come from Taylor expansion at each pole `k = −j`; the
//! multivariate table is the tensor product of rows over the monomials of `P`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, dn_lcm, int, MPoly, Rational};

/// Univariate decomposition `numerator / (k)_{n+1}^A = Σ E_{j,s} / (k+j)^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateRow {
    pub degree: u32,
    pub n: u32,
    pub a: u32,
    /// Keyed by `(j, s)`.
    pub entries: BTreeMap<(u32, u32), Rational>,
}

impl UnivariateRow {
    pub fn get(&self, j: u32, s: u32) -> Rational {
        self.entries.get(&(j, s)).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Truncated power series in `u`, coefficients `[u^0 .. u^len)`.
fn series_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Series of `(u + c)^{−A}` for `c ≠ 0`, truncated to `len` terms.
fn inverse_power_series(c: i64, a: u32, len: usize) -> Vec<Rational> {
    let c = int(c);
    let base = num_traits::pow(c.clone(), a as usize).recip();
    let mut out = Vec::with_capacity(len);
    let mut cpow = base;
    for m in 0..len {
        let sign = if m % 2 == 0 { int(1) } else { int(-1) };
        let b = Rational::from_integer(binomial((a as u64) + m as u64 - 1, m as u64));
        out.push(sign * b * &cpow);
        cpow /= &c;
    }
    out
}

/// Decomposes a one-variable numerator over `(k)_{n+1}^A`.
pub fn decompose_univariate(numerator: &MPoly, n: u32, a: u32) -> Result<UnivariateRow> {
    assert_eq!(numerator.arity(), 1, "univariate decomposition needs arity 1");
    let bound = a * (n + 1) - 1;
    let degree = numerator.degree_in(0);
    if degree > bound && !numerator.is_zero() {
        return Err(Error::DegreeBound { var: 1, degree, bound });
    }
    let len = a as usize;
    let mut entries = BTreeMap::new();
    for j in 0..=n {
        let shifted = numerator.substitute_affine(0, &Rational::one(), &int(-(j as i64)));
        let mut g = shifted.univariate_coeffs();
        g.resize(len.max(g.len()), Rational::zero());
        g.truncate(len);
        for i in 0..=n {
            if i == j {
                continue;
            }
            let s = inverse_power_series(i as i64 - j as i64, a, len);
            g = series_mul(&g, &s, len);
        }
        for s in 1..=a {
            let c = &g[(a - s) as usize];
            if !c.is_zero() {
                entries.insert((j, s), c.clone());
            }
        }
    }
    Ok(UnivariateRow { degree, n, a, entries })
}

/// Coefficient table of the multivariate decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PFTable {
    pub n: u32,
    pub a: u32,
    pub p: usize,
    /// Keyed by `(j̲, s̲)`, iterated lexicographically.
    pub coeffs: BTreeMap<(Vec<u32>, Vec<u32>), Rational>,
}

impl PFTable {
    pub fn get(&self, j: &[u32], s: &[u32]) -> Rational {
        self.coeffs
            .get(&(j.to_vec(), s.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Evaluates `Σ C[s̲;j̲] Π 1/(x_i + j_i)^{s_i}` at a rational point.
    pub fn recombine_at(&self, x: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for ((j, s), c) in &self.coeffs {
            let mut term = c.clone();
            for i in 0..self.p {
                let base = &x[i] + int(j[i] as i64);
                term /= num_traits::pow(base, s[i] as usize);
            }
            total += term;
        }
        total
    }
}

/// Checks that every variable has degree at most `bound`.
pub fn check_degrees(p: &MPoly, bound: u32) -> Result<()> {
    for i in 0..p.arity() {
        let d = p.degree_in(i);
        if d > bound {
            return Err(Error::DegreeBound { var: i + 1, degree: d, bound });
        }
    }
    Ok(())
}

/// True when every variable has degree at most `A(n+1) − 2`, i.e. the series converges.
pub fn is_convergent_degree(p: &MPoly, n: u32, a: u32) -> bool {
    let bound = a * (n + 1);
    (0..p.arity()).all(|i| p.degree_in(i) + 2 <= bound)
}

/// Decomposes `P / Π (X_i)_{n+1}^A` into its partial-fraction table.
pub fn decompose_multivariate(poly: &MPoly, n: u32, a: u32) -> Result<PFTable> {
    let p = poly.arity();
    check_degrees(poly, a * (n + 1) - 1)?;
    let mut rows: HashMap<u32, UnivariateRow> = HashMap::new();
    for e in poly.terms().keys() {
        for &r in e {
            if let std::collections::hash_map::Entry::Vacant(v) = rows.entry(r) {
                let mono = MPoly::from_terms(1, [(vec![r], Rational::one())]);
                v.insert(decompose_univariate(&mono, n, a)?);
            }
        }
    }
    let mut acc: BTreeMap<(Vec<u32>, Vec<u32>), Rational> = BTreeMap::new();
    for (e, c) in poly.terms() {
        // Tensor product of the univariate rows of each exponent.
        let factors: Vec<Vec<(&(u32, u32), &Rational)>> =
            e.iter().map(|r| rows[r].entries.iter().collect()).collect();
        let mut idx = vec![0usize; p];
        if factors.iter().any(Vec::is_empty) {
            continue;
        }
        loop {
            let mut j = Vec::with_capacity(p);
            let mut s = Vec::with_capacity(p);
            let mut v = c.clone();
            for (i, f) in factors.iter().enumerate() {
                let ((jj, ss), val) = f[idx[i]];
                j.push(*jj);
                s.push(*ss);
                v *= val;
            }
            *acc.entry((j, s)).or_insert_with(Rational::zero) += v;
            let mut k = 0;
            loop {
                if k == p {
                    break;
                }
                idx[k] += 1;
                if idx[k] < factors[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == p {
                break;
            }
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(PFTable { n, a, p, coeffs: acc })
}

/// True iff `Σ_{j_i} C[…, s_i = 1, …; …, j_i, …] = 0` for all other indices fixed.
pub fn check_row_sums(table: &PFTable, i: usize) -> bool {
    let mut sums: BTreeMap<(Vec<u32>, Vec<u32>), Rational> = BTreeMap::new();
    for ((j, s), c) in &table.coeffs {
        if s[i] != 1 {
            continue;
        }
        let mut jr = j.clone();
        jr.remove(i);
        let mut sr = s.clone();
        sr.remove(i);
        *sums.entry((jr, sr)).or_insert_with(Rational::zero) += c;
    }
    sums.values().all(Zero::is_zero)
}

/// Certified exponent `e = A·p − Σ s_i` for one table entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedEntry {
    pub j: Vec<u32>,
    pub s: Vec<u32>,
    pub exponent: u32,
}

/// Verifies `d_n^{A·p − Σs}·C[s̲;j̲] ∈ ℤ` for every entry.
pub fn denominator_certificate(table: &PFTable) -> Result<Vec<CertifiedEntry>> {
    let dn = dn_lcm(table.n);
    let total = table.a * table.p as u32;
    let mut out = Vec::with_capacity(table.coeffs.len());
    for ((j, s), c) in &table.coeffs {
        let exponent = total - s.iter().sum::<u32>();
        let scaled = c * Rational::from_integer(num_traits::pow(dn.clone(), exponent as usize));
        if !scaled.is_integer() {
            return Err(Error::Certificate { j: j.clone(), s: s.clone(), exponent });
        }
        out.push(CertifiedEntry { j: j.clone(), s: s.clone(), exponent });
    }
    Ok(out)
}

/// `Π_{i} (X_i)_{n+1}^A` evaluated at a rational point.
pub fn denominator_at(x: &[Rational], n: u32, a: u32) -> Rational {
    let mut d = Rational::one();
    for xi in x {
        let mut poch = Rational::one();
        for t in 0..=n {
            poch *= xi + int(t as i64);
        }
        d *= num_traits::pow(poch, a as usize);
    }
    d
}

/// `n!^{A·p}`: numerators of the form `n!^{A·p}·Q` with `Q` integral have certified denominators.
pub fn integrality_scale(n: u32, a: u32, p: usize) -> Rational {
    Rational::from_integer(num_traits::pow(crate::exact::factorial(n), (a as usize) * p))
}
