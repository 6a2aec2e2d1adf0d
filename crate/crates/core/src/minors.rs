//! Minors of the generic matrix, the adjugate of C11, y_{ij}, the map φ, and
//! the Jacobi and Muir-type determinantal identities.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::fraction::LocalizedElement;
use crate::superpoly::{Ambient, SuperPoly};

/// All permutations of 0..s in lex order, flagged `true` when odd.
pub fn signed_permutations(s: usize) -> Vec<(bool, Vec<usize>)> {
    (0..s)
        .permutations(s)
        .map(|perm| {
            let inversions = perm.iter().tuple_combinations().filter(|(a, b)| a > b).count();
            (inversions % 2 == 1, perm)
        })
        .collect()
}

fn check_spec(amb: Ambient, rows: &[usize], cols: &[usize]) -> Result<()> {
    if rows.len() != cols.len() {
        return Err(Error::usage(format!("ragged minor: {} rows, {} columns", rows.len(), cols.len())));
    }
    for &i in rows.iter().chain(cols) {
        amb.check_index(i)?;
    }
    Ok(())
}

fn has_repeat(v: &[usize]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.windows(2).any(|w| w[0] == w[1])
}

/// C(rows|cols) by the Leibniz formula, factors multiplied in row order.
pub fn minor(amb: Ambient, rows: &[usize], cols: &[usize]) -> Result<SuperPoly> {
    check_spec(amb, rows, cols)?;
    if has_repeat(rows) || has_repeat(cols) {
        return Ok(SuperPoly::zero(amb));
    }
    let mut terms = SuperPoly::zero(amb);
    for (odd, perm) in signed_permutations(rows.len()) {
        let mut t = SuperPoly::one(amb);
        for (a, &b) in perm.iter().enumerate() {
            t = t.mul(&SuperPoly::gen(amb, rows[a], cols[b]));
        }
        terms = if odd { terms.sub(&t) } else { terms.add(&t) };
    }
    Ok(terms)
}

/// C(rows|cols) by Laplace expansion along the first row.
pub fn minor_laplace(amb: Ambient, rows: &[usize], cols: &[usize]) -> Result<SuperPoly> {
    check_spec(amb, rows, cols)?;
    if rows.is_empty() {
        return Ok(SuperPoly::one(amb));
    }
    let mut total = SuperPoly::zero(amb);
    for b in 0..cols.len() {
        let rest_cols: Vec<usize> = cols.iter().enumerate().filter(|&(k, _)| k != b).map(|(_, &c)| c).collect();
        let sub = minor_laplace(amb, &rows[1..], &rest_cols)?;
        let t = SuperPoly::gen(amb, rows[0], cols[b]).mul(&sub);
        total = if b % 2 == 1 { total.sub(&t) } else { total.add(&t) };
    }
    Ok(total)
}

/// Determinants of C11 submatrices keyed by (row mask, column mask), built by
/// cofactor expansion along the first selected row.
struct C11Minors {
    amb: Ambient,
    memo: HashMap<(u32, u32), SuperPoly>,
}

impl C11Minors {
    fn new(amb: Ambient) -> Self {
        C11Minors { amb, memo: HashMap::new() }
    }

    fn get(&mut self, rows: u32, cols: u32) -> SuperPoly {
        if rows == 0 {
            return SuperPoly::one(self.amb);
        }
        if let Some(p) = self.memo.get(&(rows, cols)) {
            return p.clone();
        }
        let r = rows.trailing_zeros() as usize;
        let mut total = SuperPoly::zero(self.amb);
        let mut k = 0;
        let mut rest = cols;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let sub = self.get(rows & !(1 << r), cols & !(1 << c));
            let t = SuperPoly::gen(self.amb, r + 1, c + 1).mul(&sub);
            total = if k % 2 == 1 { total.sub(&t) } else { total.add(&t) };
            k += 1;
        }
        self.memo.insert((rows, cols), total.clone());
        total
    }
}

/// D = det C11 (cached per ambient).
pub fn det_c11(amb: Ambient) -> SuperPoly {
    amb.cache().det_c11.get_or_init(|| adjugate_table(amb).1).clone()
}

/// D22 = det C22 (cached per ambient).
pub fn det_c22(amb: Ambient) -> SuperPoly {
    amb.cache()
        .det_c22
        .get_or_init(|| {
            let idx: Vec<usize> = (amb.m() + 1..=amb.size()).collect();
            minor(amb, &idx, &idx).expect("C22 indices in range")
        })
        .clone()
}

fn adjugate_table(amb: Ambient) -> (Vec<Vec<SuperPoly>>, SuperPoly) {
    let m = amb.m();
    let mut memo = C11Minors::new(amb);
    let full = (1u32 << m) - 1;
    let d = memo.get(full, full);
    let mut table = vec![vec![SuperPoly::zero(amb); m]; m];
    for (i, row) in table.iter_mut().enumerate() {
        for (s, entry) in row.iter_mut().enumerate() {
            // A_{is} = (−1)^{i+s} det(C11 without row s and column i)
            let minor = memo.get(full & !(1 << s), full & !(1 << i));
            *entry = if (i + s) % 2 == 1 { minor.neg() } else { minor };
        }
    }
    (table, d)
}

/// The adjugate A of C11, A_{is} at `[i-1][s-1]`; Σ_a A_{ia} c_{as} = δ_{is} D.
pub fn adjugate(amb: Ambient) -> Vec<Vec<SuperPoly>> {
    amb.cache().adjugate.get_or_init(|| adjugate_table(amb).0).clone()
}

pub fn adjugate_entry(amb: Ambient, i: usize, s: usize) -> SuperPoly {
    let cache = amb.cache();
    let table = cache.adjugate.get_or_init(|| adjugate_table(amb).0);
    table[i - 1][s - 1].clone()
}

/// Σ_a A_{ia} c_{as} − δ_{is} D for every (i, s); all zero when the law holds.
pub fn adjugate_law_holds(amb: Ambient) -> bool {
    let m = amb.m();
    let d = det_c11(amb);
    (1..=m).all(|i| {
        (1..=m).all(|s| {
            let sum = (1..=m).fold(SuperPoly::zero(amb), |acc, a| {
                acc.add(&adjugate_entry(amb, i, a).mul(&SuperPoly::gen(amb, a, s)))
            });
            let target = if i == s { d.clone() } else { SuperPoly::zero(amb) };
            sum == target
        })
    })
}

fn build_y(amb: Ambient) -> Vec<Vec<LocalizedElement>> {
    let (m, n) = (amb.m(), amb.n());
    (1..=m)
        .map(|i| {
            (m + 1..=m + n)
                .map(|j| {
                    let num = (1..=m).fold(SuperPoly::zero(amb), |acc, a| {
                        acc.add(&adjugate_entry(amb, i, a).mul(&SuperPoly::gen(amb, a, j)))
                    });
                    LocalizedElement::new(num, 1, 0)
                })
                .collect()
        })
        .collect()
}

/// y_{ij} = (Σ_a A_{ia} c_{aj}) / D for i ≤ m < j.
pub fn y(amb: Ambient, i: usize, j: usize) -> Result<LocalizedElement> {
    let m = amb.m();
    if i == 0 || i > m || j <= m || j > amb.size() {
        return Err(Error::usage(format!("y[{i},{j}] needs 1 ≤ i ≤ {m} < j ≤ {}", amb.size())));
    }
    let cache = amb.cache();
    let table = cache.y.get_or_init(|| build_y(amb));
    Ok(table[i - 1][j - m - 1].clone())
}

fn build_phi22(amb: Ambient) -> Vec<Vec<LocalizedElement>> {
    let (m, size) = (amb.m(), amb.size());
    (m + 1..=size)
        .map(|k| {
            (m + 1..=size)
                .map(|l| {
                    let mut out = LocalizedElement::from_poly(SuperPoly::gen(amb, k, l));
                    for a in 1..=m {
                        let t = y(amb, a, l).unwrap().mul_poly_left(&SuperPoly::gen(amb, k, a));
                        out = out.sub(&t);
                    }
                    out
                })
                .collect()
        })
        .collect()
}

/// φ(c_{kl}): identity on C11 and C21, y on C12, C22 − C21·Y on C22.
pub fn phi(amb: Ambient, k: usize, l: usize) -> Result<LocalizedElement> {
    amb.check_index(k)?;
    amb.check_index(l)?;
    let m = amb.m();
    match (k <= m, l <= m) {
        (_, true) => Ok(LocalizedElement::from_poly(SuperPoly::gen(amb, k, l))),
        (true, false) => y(amb, k, l),
        (false, false) => {
            let cache = amb.cache();
            let table = cache.phi22.get_or_init(|| build_phi22(amb));
            Ok(table[k - m - 1][l - m - 1].clone())
        }
    }
}

/// M(ab|cd): the (m−2)-minor of C11 without rows a, b and columns c, d;
/// zero when a = b or c = d.
pub fn complementary_minor(amb: Ambient, a: usize, b: usize, c: usize, d: usize) -> SuperPoly {
    if a == b || c == d {
        return SuperPoly::zero(amb);
    }
    let m = amb.m();
    let rows: Vec<usize> = (1..=m).filter(|&r| r != a && r != b).collect();
    let cols: Vec<usize> = (1..=m).filter(|&s| s != c && s != d).collect();
    minor(amb, &rows, &cols).expect("indices within C11")
}

/// A_{ia}A_{kb} − A_{ka}A_{ib} = ±D·M(ab, ki): sign (−1)^{a+b+k+i} for a < b,
/// the opposite for a > b, and both sides zero when a = b.
pub fn jacobi_identity_check(amb: Ambient, i: usize, k: usize, a: usize, b: usize) -> Result<bool> {
    let m = amb.m();
    if m < 2 {
        return Err(Error::usage("the Jacobi identity needs m ≥ 2"));
    }
    if !(1..=m).contains(&i) || !(1..=m).contains(&k) || !(1..=m).contains(&a) || !(1..=m).contains(&b) {
        return Err(Error::usage("Jacobi indices must lie in 1..=m"));
    }
    if i >= k {
        return Err(Error::usage("the Jacobi identity is stated for i < k"));
    }
    let lhs = adjugate_entry(amb, i, a)
        .mul(&adjugate_entry(amb, k, b))
        .sub(&adjugate_entry(amb, k, a).mul(&adjugate_entry(amb, i, b)));
    let mut rhs = det_c11(amb).mul(&complementary_minor(amb, a, b, k, i));
    let mut exponent = a + b + k + i;
    if a > b {
        exponent += 1;
    }
    if exponent % 2 == 1 {
        rhs = rhs.neg();
    }
    Ok(lhs == rhs)
}

/// C(k₁..k_j, l) = Σ_a C(k₁..k_j, a) y_{al} together with the auxiliary
/// adjugate identity Σ_a C(k₁..k_j, a) A_{as} = (−1)^{s+j+1} C(1..ŝ..j+1 | k) D.
pub fn muir_identity_check(amb: Ambient, ks: &[usize], l: usize) -> Result<bool> {
    let m = amb.m();
    let j = ks.len();
    if j >= m {
        return Err(Error::usage(format!("need j < m, got j = {j}")));
    }
    if ks.iter().any(|&k| k == 0 || k > m) {
        return Err(Error::usage("k indices must lie in 1..=m"));
    }
    if l <= m || l > amb.size() {
        return Err(Error::usage("l must lie in m+1..=m+n"));
    }
    let rows: Vec<usize> = (1..=j + 1).collect();
    let with = |last: usize| -> SuperPoly {
        let mut cols = ks.to_vec();
        cols.push(last);
        minor(amb, &rows, &cols).expect("minor indices in range")
    };
    let lhs = LocalizedElement::from_poly(with(l));
    let rhs = (1..=m).fold(LocalizedElement::zero(amb), |acc, a| {
        acc.add(&y(amb, a, l).unwrap().mul_poly_left(&with(a)))
    });
    if !lhs.loc_eq(&rhs) {
        return Ok(false);
    }
    let d = det_c11(amb);
    for s in 1..=m {
        let sum = (1..=m).fold(SuperPoly::zero(amb), |acc, a| acc.add(&with(a).mul(&adjugate_entry(amb, a, s))));
        let expected = if s <= j + 1 {
            let rows_hat: Vec<usize> = (1..=j + 1).filter(|&r| r != s).collect();
            let base = minor(amb, &rows_hat, ks)?.mul(&d);
            if (s + j + 1) % 2 == 1 {
                base.neg()
            } else {
                base
            }
        } else {
            SuperPoly::zero(amb)
        };
        if sum != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

impl LocalizedElement {
    /// p · self with p placed on the left.
    pub fn mul_poly_left(&self, p: &SuperPoly) -> LocalizedElement {
        self.with_numerator(p.mul(self.numerator()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Characteristic;

    fn amb(m: usize, n: usize) -> Ambient {
        Ambient::new(m, n, Characteristic::Zero).unwrap()
    }

    fn c(a: Ambient, i: usize, j: usize) -> SuperPoly {
        SuperPoly::generator(a, i, j).unwrap()
    }

    #[test]
    fn minor_examples() {
        let a = amb(2, 1);
        assert_eq!(minor(a, &[1], &[1]).unwrap(), c(a, 1, 1));
        assert!(minor(a, &[1, 2], &[1, 1]).unwrap().is_zero());
        assert_eq!(minor(a, &[1, 2], &[1, 2]).unwrap(), det_c11(a));
        assert!(minor(a, &[1, 2], &[1]).is_err());
    }

    #[test]
    fn permutation_signs() {
        let perms = signed_permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().filter(|(odd, _)| *odd).count(), 3);
    }

    #[test]
    fn adjugate_law_small() {
        for m in 1..=4 {
            assert!(adjugate_law_holds(amb(m, 1)), "m = {m}");
        }
    }

    #[test]
    fn y_examples() {
        let a = amb(1, 1);
        assert!(y(a, 1, 2).unwrap().loc_eq(&LocalizedElement::new(c(a, 1, 2), 1, 0)));
        let b = amb(2, 1);
        let expected = c(b, 2, 2).mul(&c(b, 1, 3)).sub(&c(b, 1, 2).mul(&c(b, 2, 3)));
        assert!(y(b, 1, 3).unwrap().loc_eq(&LocalizedElement::new(expected, 1, 0)));
        assert!(y(b, 3, 3).is_err());
    }

    #[test]
    fn y_weight() {
        let b = amb(2, 2);
        let w = y(b, 1, 4).unwrap().weight().unwrap();
        assert_eq!(w, crate::weights::Weight::parse("-1,0|0,1").unwrap());
    }

    #[test]
    fn phi_examples() {
        let a = amb(2, 2);
        assert!(phi(a, 1, 1).unwrap().loc_eq(&LocalizedElement::from_poly(c(a, 1, 1))));
        assert!(phi(a, 1, 3).unwrap().loc_eq(&y(a, 1, 3).unwrap()));
        let expected = LocalizedElement::from_poly(c(a, 3, 3))
            .sub(&y(a, 1, 3).unwrap().mul_poly_left(&c(a, 3, 1)))
            .sub(&y(a, 2, 3).unwrap().mul_poly_left(&c(a, 3, 2)));
        assert!(phi(a, 3, 3).unwrap().loc_eq(&expected));
        assert!(phi(a, 3, 1).unwrap().loc_eq(&LocalizedElement::from_poly(c(a, 3, 1))));
    }

    #[test]
    fn jacobi_m2_and_m3() {
        let a = amb(2, 1);
        assert!(jacobi_identity_check(a, 1, 2, 1, 2).unwrap());
        assert!(jacobi_identity_check(a, 1, 2, 1, 1).unwrap());
        let b = amb(3, 1);
        for i in 1..=3 {
            for k in i + 1..=3 {
                for x in 1..=3 {
                    for y in 1..=3 {
                        assert!(jacobi_identity_check(b, i, k, x, y).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn muir_examples() {
        assert!(muir_identity_check(amb(1, 1), &[], 2).unwrap());
        assert!(muir_identity_check(amb(2, 1), &[1], 3).unwrap());
        let b = amb(3, 1);
        for k in 1..=3 {
            assert!(muir_identity_check(b, &[k], 4).unwrap());
        }
    }

    #[test]
    fn laplace_matches_leibniz() {
        let a = amb(2, 2);
        let rows = [1, 3, 4];
        let cols = [2, 4, 1];
        assert_eq!(minor(a, &rows, &cols).unwrap(), minor_laplace(a, &rows, &cols).unwrap());
    }
}
