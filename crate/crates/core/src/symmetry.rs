//! The hyperoctahedral group `(ℤ/2)^p ⋊ S_p` acting on index points `(j̲, s̲)`,
//! membership in the well-poised class `𝒜_p`, and the parametrized numerator family.
//!
//! Convention: a group element `(ε̲, γ)` first replaces `j_i` by `n − j_i` in every
//! slot `i` with `ε_i = −1`, then moves slot `i` to position `γ(i)`. The signs are
//! indexed by source slot. With this convention
//! `(ε̲, γ)·(ε̲′, γ′) = ((ε̲∘γ′)·ε̲′, γ∘γ′)` makes [`act`] a left group action.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, rat, MPoly, Rational};
use crate::perm;

/// An index point `(j̲, s̲)`.
pub type Point = (Vec<u32>, Vec<u32>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    /// `signs[i] ∈ {−1, +1}` applies to source slot `i`.
    pub signs: Vec<i8>,
    /// `perm[i]` is the destination position of source slot `i`.
    pub perm: Vec<usize>,
}

impl GroupElement {
    pub fn identity(p: usize) -> Self {
        GroupElement {
            signs: vec![1; p],
            perm: (0..p).collect(),
        }
    }

    pub fn new(signs: Vec<i8>, perm: Vec<usize>) -> Self {
        assert_eq!(signs.len(), perm.len());
        assert!(signs.iter().all(|&e| e == 1 || e == -1));
        let mut seen = vec![false; perm.len()];
        for &i in &perm {
            assert!(i < perm.len() && !seen[i], "perm must be a bijection");
            seen[i] = true;
        }
        GroupElement { signs, perm }
    }

    pub fn arity(&self) -> usize {
        self.perm.len()
    }

    /// Group law matching [`act`]: `act(a.compose(b), x) = act(a, act(b, x))`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let signs = (0..self.arity())
            .map(|i| other.signs[i] * self.signs[other.perm[i]])
            .collect();
        GroupElement {
            signs,
            perm: perm::compose(&self.perm, &other.perm),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let inv = perm::inverse(&self.perm);
        let signs = (0..self.arity()).map(|i| self.signs[inv[i]]).collect();
        GroupElement { signs, perm: inv }
    }

    /// Signature `ε_γ` of the permutation part.
    pub fn signature(&self) -> i32 {
        perm::sign(&self.perm)
    }

    /// The factor `ε_γ·Π ε_i^{s_i+1}` relating table coefficients along an orbit.
    pub fn coefficient_sign(&self, s: &[u32]) -> i32 {
        let mut sign = self.signature();
        for (e, &si) in self.signs.iter().zip(s) {
            if *e == -1 && (si + 1) % 2 == 1 {
                sign = -sign;
            }
        }
        sign
    }
}

/// All `2^p·p!` elements of the group.
pub fn all_elements(p: usize) -> Vec<GroupElement> {
    let perms = perm::permutations(p);
    let mut out = Vec::with_capacity(perms.len() << p);
    for mask in 0u32..(1 << p) {
        let signs: Vec<i8> = (0..p).map(|i| if mask & (1 << i) != 0 { -1 } else { 1 }).collect();
        for pm in &perms {
            out.push(GroupElement {
                signs: signs.clone(),
                perm: pm.clone(),
            });
        }
    }
    out
}

/// Applies `g` to `(j̲, s̲)`; `s̲` is permuted but never sign-flipped.
pub fn act(g: &GroupElement, point: &Point, n: u32) -> Result<Point> {
    let (j, s) = point;
    let p = g.arity();
    if j.len() != p || s.len() != p {
        return Err(Error::Input(format!(
            "point arity {} does not match group arity {p}",
            j.len()
        )));
    }
    if let Some(&bad) = j.iter().find(|&&x| x > n) {
        return Err(Error::IndexOutOfRange { j: bad, n });
    }
    let mut nj = vec![0; p];
    let mut ns = vec![0; p];
    for i in 0..p {
        let v = if g.signs[i] == -1 { n - j[i] } else { j[i] };
        nj[g.perm[i]] = v;
        ns[g.perm[i]] = s[i];
    }
    Ok((nj, ns))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitKey {
    pub representative: Point,
    pub size: usize,
    pub stabilizer: usize,
}

/// Enumerates the orbit of `point`; the representative is the lexicographic minimum.
pub fn orbit(point: &Point, n: u32) -> Result<(OrbitKey, Vec<Point>)> {
    let p = point.0.len();
    let group = all_elements(p);
    let mut set = BTreeSet::new();
    let mut stabilizer = 0;
    for g in &group {
        let img = act(g, point, n)?;
        if img == *point {
            stabilizer += 1;
        }
        set.insert(img);
    }
    let elements: Vec<Point> = set.into_iter().collect();
    let key = OrbitKey {
        representative: elements[0].clone(),
        size: elements.len(),
        stabilizer,
    };
    debug_assert_eq!(key.size * key.stabilizer, group.len());
    Ok((key, elements))
}

/// Membership in `𝒜_p`: `S_p`-antisymmetry plus `P(−X_1 − n, …) = (−1)^{A(n+1)+1} P`.
pub fn is_in_ap(poly: &MPoly, n: u32, a: u32) -> bool {
    let p = poly.arity();
    for i in 0..p.saturating_sub(1) {
        let mut swap: Vec<usize> = (0..p).collect();
        swap.swap(i, i + 1);
        if poly.permute_vars(&swap) != -poly {
            return false;
        }
    }
    if p == 0 {
        return true;
    }
    let reflected = poly.substitute_affine(0, &-Rational::one(), &-int(n as i64));
    let sign = if (a * (n + 1) + 1).is_multiple_of(2) { int(1) } else { int(-1) };
    reflected == poly.scale(&sign)
}

/// Parameters `(n, p, r, t, ε)` of the family numerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    pub n: u32,
    pub p: usize,
    pub r: u32,
    pub t: u32,
    pub eps: u32,
}

/// Checks the parity and size constraints of the family against `A`.
pub fn check_family_constraints(fp: &FamilyParams, a: u32) -> Result<()> {
    let FamilyParams { n, p, r, t, eps } = *fp;
    let mut failures = Vec::new();
    if eps % 2 != ((a + 1) * (n + 1) + 1) % 2 {
        failures.push(format!(
            "parity: eps = {eps} must be ≡ (A+1)(n+1)+1 = {} (mod 2)",
            (a + 1) * (n + 1) + 1
        ));
    }
    let lhs = eps as u64 + (4 * r as u64 + 2) * p as u64 + 2 * t as u64;
    let rhs = (a as u64).saturating_sub(1) * (n as u64 + 1) + 4 * r as u64;
    if a == 0 || lhs > rhs {
        failures.push(format!(
            "size: eps + (4r+2)p + 2t = {lhs} must be ≤ (A−1)(n+1) + 4r = {rhs}"
        ));
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Error::Constraint(failures.join("; ")))
    }
}

/// Expanded numerator
/// `Π(X_i+n/2)^ε · Π_{i<j}(X_i−X_j−r)_{2r+1}(X_i+X_j+n−r)_{2r+1} · Π(X_i−t)_{2t+n+1}`.
pub fn family_polynomial_unchecked(fp: &FamilyParams) -> MPoly {
    let FamilyParams { n, p, r, t, eps } = *fp;
    let half_n = rat(n as i64, 2);
    let mut out = MPoly::one(p);
    let unit = |i: usize, c: i64| {
        let mut v = vec![Rational::zero(); p];
        v[i] = int(c);
        v
    };
    for i in 0..p {
        let centre = MPoly::linear(&unit(i, 1), half_n.clone());
        out = &out * &centre.pow(eps);
        let tail = MPoly::linear(&unit(i, 1), -int(t as i64));
        out = &out * &tail.rising(2 * t + n + 1);
    }
    for i in 0..p {
        for k in i + 1..p {
            let mut diff = unit(i, 1);
            diff[k] = int(-1);
            let mut sum = unit(i, 1);
            sum[k] = int(1);
            let d = MPoly::linear(&diff, -int(r as i64)).rising(2 * r + 1);
            let s = MPoly::linear(&sum, int(n as i64 - r as i64)).rising(2 * r + 1);
            out = &out * &d;
            out = &out * &s;
        }
    }
    out
}

/// Family numerator after validating the parity and size constraints for `A`.
pub fn family_polynomial(fp: &FamilyParams, a: u32) -> Result<MPoly> {
    check_family_constraints(fp, a)?;
    Ok(family_polynomial_unchecked(fp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(j: &[u32], s: &[u32]) -> Point {
        (j.to_vec(), s.to_vec())
    }

    #[test]
    fn act_examples() {
        let g = GroupElement::new(vec![-1], vec![0]);
        assert_eq!(act(&g, &pt(&[0], &[2]), 4).unwrap(), pt(&[4], &[2]));
        let g = GroupElement::new(vec![1, 1], vec![1, 0]);
        assert_eq!(act(&g, &pt(&[0, 1], &[3, 5]), 2).unwrap(), pt(&[1, 0], &[5, 3]));
        let g = GroupElement::new(vec![-1, 1], vec![1, 0]);
        assert_eq!(act(&g, &pt(&[0, 1], &[3, 5]), 2).unwrap(), pt(&[1, 2], &[5, 3]));
        assert!(act(&g, &pt(&[0, 3], &[3, 5]), 2).is_err());
    }

    #[test]
    fn orbit_examples() {
        let (k, _) = orbit(&pt(&[1], &[2]), 2).unwrap();
        assert_eq!(k.size, 1);
        let (k, els) = orbit(&pt(&[0, 1], &[3, 3]), 2).unwrap();
        assert_eq!(k.size, 4);
        let js: BTreeSet<Vec<u32>> = els.iter().map(|(j, _)| j.clone()).collect();
        let expect: BTreeSet<Vec<u32>> =
            [vec![0, 1], vec![2, 1], vec![1, 0], vec![1, 2]].into_iter().collect();
        assert_eq!(js, expect);
        assert_eq!(k.representative, pt(&[0, 1], &[3, 3]));
        // j = 1 = n − 1 is fixed by the sign on its slot, so the stabilizer has order 2
        let (k, _) = orbit(&pt(&[0, 1], &[3, 5]), 2).unwrap();
        assert_eq!((k.size, k.stabilizer), (4, 2));
        let (k, _) = orbit(&pt(&[0, 1], &[3, 5]), 3).unwrap();
        assert_eq!((k.size, k.stabilizer), (8, 1));
    }

    #[test]
    fn inverse_is_two_sided() {
        for g in all_elements(3) {
            assert_eq!(g.compose(&g.inverse()), GroupElement::identity(3));
            assert_eq!(g.inverse().compose(&g), GroupElement::identity(3));
        }
    }

    #[test]
    fn membership_examples() {
        assert!(is_in_ap(&MPoly::var(1, 0), 0, 2));
        let d = &MPoly::var(2, 0) - &MPoly::var(2, 1);
        assert!(!is_in_ap(&d, 0, 2));
    }

    #[test]
    fn family_examples() {
        let fp = FamilyParams { n: 2, p: 1, r: 0, t: 0, eps: 0 };
        let x = MPoly::var(1, 0);
        let expect = &(&x * &(&x + &MPoly::one(1))) * &(&x + &MPoly::constant(1, int(2)));
        assert_eq!(family_polynomial(&fp, 2).unwrap(), expect);

        let fp = FamilyParams { n: 0, p: 2, r: 0, t: 0, eps: 1 };
        let x1 = MPoly::var(2, 0);
        let x2 = MPoly::var(2, 1);
        let expect = &(&(&x1.pow(2) * &x2.pow(2)) * &(&x1 - &x2)) * &(&x1 + &x2);
        assert_eq!(family_polynomial(&fp, 7).unwrap(), expect);
        assert!(is_in_ap(&expect, 0, 7));

        let fp = FamilyParams { n: 1, p: 3, r: 0, t: 0, eps: 1 };
        let xs: Vec<MPoly> = (0..3).map(|i| MPoly::var(3, i)).collect();
        let half = MPoly::constant(3, rat(1, 2));
        let one = MPoly::one(3);
        let mut expect = MPoly::one(3);
        for x in &xs {
            expect = &expect * &(x + &half);
            expect = &expect * &(x * &(x + &one));
        }
        for i in 0..3 {
            for k in i + 1..3 {
                expect = &expect * &(&xs[i] - &xs[k]);
                expect = &expect * &(&(&xs[i] + &xs[k]) + &one);
            }
        }
        assert_eq!(family_polynomial(&fp, 5).unwrap(), expect);
        assert!(family_polynomial(&fp, 4).is_err());
    }

    #[test]
    fn constraint_errors_name_the_condition() {
        let fp = FamilyParams { n: 2, p: 2, r: 0, t: 0, eps: 0 };
        let err = family_polynomial(&fp, 3).unwrap_err().to_string();
        assert!(err.contains("parity"), "{err}");
        let fp = FamilyParams { n: 2, p: 3, r: 1, t: 0, eps: 0 };
        let err = family_polynomial(&fp, 4).unwrap_err().to_string();
        assert!(err.contains("size"), "{err}");
    }
}
