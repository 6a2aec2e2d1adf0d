//! Weights, tableaux, bideterminants and the highest vector.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraction::LocalizedElement;
use crate::minors;
use crate::superpoly::{Ambient, SuperPoly};

/// A weight (λ⁺|λ⁻) of GL(m|n).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub plus: Vec<i64>,
    pub minus: Vec<i64>,
}

impl Weight {
    pub fn new(plus: Vec<i64>, minus: Vec<i64>) -> Self {
        Weight { plus, minus }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        Weight { plus: vec![0; m], minus: vec![0; n] }
    }

    pub fn m(&self) -> usize {
        self.plus.len()
    }

    pub fn n(&self) -> usize {
        self.minus.len()
    }

    pub fn check_sizes(&self, m: usize, n: usize) -> Result<()> {
        if self.m() != m || self.n() != n {
            return Err(Error::usage(format!(
                "weight {self} does not have shape ({m}|{n})"
            )));
        }
        Ok(())
    }

    pub fn is_dominant(&self) -> bool {
        self.plus.windows(2).all(|w| w[0] >= w[1]) && self.minus.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_polynomial(&self) -> bool {
        self.plus.last().map_or(true, |&x| x >= 0) && self.minus.last().map_or(true, |&x| x >= 0)
    }

    /// Components as one sequence of length m+n.
    pub fn to_vec(&self) -> Vec<i64> {
        self.plus.iter().chain(self.minus.iter()).copied().collect()
    }

    pub fn from_vec(v: &[i64], m: usize) -> Self {
        Weight { plus: v[..m].to_vec(), minus: v[m..].to_vec() }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight {
            plus: self.plus.iter().zip(&other.plus).map(|(a, b)| a + b).collect(),
            minus: self.minus.iter().zip(&other.minus).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight {
            plus: self.plus.iter().map(|a| a * k).collect(),
            minus: self.minus.iter().map(|a| a * k).collect(),
        }
    }

    /// δ⁺_i, 1-based.
    pub fn delta_plus(m: usize, n: usize, i: usize) -> Weight {
        let mut w = Weight::zero(m, n);
        w.plus[i - 1] = 1;
        w
    }

    /// δ⁻_j, 1-based within the minus block.
    pub fn delta_minus(m: usize, n: usize, j: usize) -> Weight {
        let mut w = Weight::zero(m, n);
        w.minus[j - 1] = 1;
        w
    }

    /// β = (1,…,1|−1,…,−1), the weight of Ber.
    pub fn beta(m: usize, n: usize) -> Weight {
        Weight { plus: vec![1; m], minus: vec![-1; n] }
    }

    /// λ_{ij} = λ − δ⁺_i + δ⁻_j with j in 1..=n.
    pub fn lambda_ij(&self, i: usize, j: usize) -> Weight {
        let mut w = self.clone();
        w.plus[i - 1] -= 1;
        w.minus[j - 1] += 1;
        w
    }

    /// Parses "2,1|1,0", optionally wrapped in brackets or parentheses.
    pub fn parse(text: &str) -> Result<Weight> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
        let (a, b) = t
            .split_once('|')
            .ok_or_else(|| Error::parse(format!("weight '{text}' needs the form plus|minus")))?;
        let list = |s: &str| -> Result<Vec<i64>> {
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|x| x.parse::<i64>().map_err(|_| Error::parse(format!("bad weight entry '{x}'"))))
                .collect()
        };
        Ok(Weight { plus: list(a)?, minus: list(b)? })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.plus.iter().map(|x| x.to_string()).collect();
        let q: Vec<String> = self.minus.iter().map(|x| x.to_string()).collect();
        write!(f, "({}|{})", p.join(","), q.join(","))
    }
}

/// Returns (λ + λ⁻_n β, t) with λ = (λ + λ⁻_n β) + tβ, so H⁰(λ) ≅ H⁰(λ + λ⁻_n β) ⊗ Ber^t.
pub fn normalize_berezinian(lambda: &Weight) -> Result<(Weight, i64)> {
    if !lambda.is_dominant() {
        return Err(Error::usage(format!("{lambda} is not dominant")));
    }
    // β pairs to zero with every odd root, so shifting by λ⁻_n·β clears the
    // last minus entry without moving any ω_ij.
    let t = *lambda.minus.last().unwrap_or(&0);
    Ok((lambda.add(&Weight::beta(lambda.m(), lambda.n()).scale(t)), -t))
}

/// A partition, weakly decreasing with trailing zeros removed.
pub fn partition(parts: &[i64]) -> Vec<usize> {
    parts.iter().filter(|&&x| x > 0).map(|&x| x as usize).collect()
}

/// Conjugate partition.
pub fn transpose(p: &[usize]) -> Vec<usize> {
    let first = p.first().copied().unwrap_or(0);
    (1..=first).map(|k| p.iter().filter(|&&x| x >= k).count()).collect()
}

pub fn is_partition(p: &[usize]) -> bool {
    p.windows(2).all(|w| w[0] >= w[1])
}

/// A filling of a Young diagram; `rows[a][b]` is the entry in row a, column b.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tableau {
    pub shape: Vec<usize>,
    pub cells: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(cells: Vec<Vec<usize>>) -> Result<Self> {
        let shape: Vec<usize> = cells.iter().map(|r| r.len()).collect();
        if !is_partition(&shape) || shape.contains(&0) {
            return Err(Error::usage(format!("tableau rows {shape:?} do not form a partition")));
        }
        Ok(Tableau { shape, cells })
    }

    /// Entries of column b (0-based) from top to bottom.
    pub fn column(&self, b: usize) -> Vec<usize> {
        self.cells.iter().take_while(|r| r.len() > b).map(|r| r[b]).collect()
    }

    pub fn num_columns(&self) -> usize {
        self.shape.first().copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().flatten().copied()
    }

    /// Rows weakly increase, columns strictly increase.
    pub fn is_semistandard(&self) -> bool {
        let rows_ok = self.cells.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]));
        let cols_ok = (0..self.num_columns()).all(|b| self.column(b).windows(2).all(|w| w[0] < w[1]));
        rows_ok && cols_ok
    }

    /// The basic tableau whose row a is filled with `offset + a`.
    pub fn basic(shape: &[usize], offset: usize) -> Tableau {
        Tableau {
            shape: shape.to_vec(),
            cells: shape.iter().enumerate().map(|(a, &len)| vec![offset + a + 1; len]).collect(),
        }
    }

    /// All semistandard tableaux of the given shape with entries in `alphabet`
    /// (an increasing list), in lexicographic order of their row words.
    pub fn semistandard(shape: &[usize], alphabet: &[usize]) -> Vec<Tableau> {
        let mut out = Vec::new();
        let mut cells: Vec<Vec<usize>> = shape.iter().map(|&l| Vec::with_capacity(l)).collect();
        fill_ssyt(shape, alphabet, 0, 0, &mut cells, &mut out);
        out
    }
}

fn fill_ssyt(
    shape: &[usize],
    alphabet: &[usize],
    row: usize,
    col: usize,
    cells: &mut Vec<Vec<usize>>,
    out: &mut Vec<Tableau>,
) {
    if row == shape.len() {
        out.push(Tableau { shape: shape.to_vec(), cells: cells.clone() });
        return;
    }
    if col == shape[row] {
        fill_ssyt(shape, alphabet, row + 1, 0, cells, out);
        return;
    }
    for &x in alphabet {
        if col > 0 && x < cells[row][col - 1] {
            continue;
        }
        if row > 0 && x <= cells[row - 1][col] {
            continue;
        }
        cells[row].push(x);
        fill_ssyt(shape, alphabet, row, col + 1, cells, out);
        cells[row].pop();
    }
}

/// D⁺(i₁..i_s): rows 1..s of C₁₁ against columns i₁..i_s.
pub fn dplus(amb: Ambient, cols: &[usize]) -> Result<SuperPoly> {
    let m = amb.m();
    if cols.len() > m {
        return Err(Error::usage(format!("D⁺ takes at most m = {m} columns")));
    }
    if let Some(&bad) = cols.iter().find(|&&i| i == 0 || i > m) {
        return Err(Error::usage(format!("D⁺ column {bad} outside 1..={m}")));
    }
    let rows: Vec<usize> = (1..=cols.len()).collect();
    minors::minor(amb, &rows, cols)
}

/// D⁻(j₁..j_s): determinant of φ(c[m+a, j_b]).
pub fn dminus(amb: Ambient, cols: &[usize]) -> Result<LocalizedElement> {
    let (m, n) = (amb.m(), amb.n());
    if cols.len() > n {
        return Err(Error::usage(format!("D⁻ takes at most n = {n} columns")));
    }
    if let Some(&bad) = cols.iter().find(|&&j| j <= m || j > m + n) {
        return Err(Error::usage(format!("D⁻ column {bad} outside {}..={}", m + 1, m + n)));
    }
    let s = cols.len();
    if s == 0 {
        return Ok(LocalizedElement::one(amb));
    }
    let mut seen = cols.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() < s {
        return Ok(LocalizedElement::zero(amb));
    }
    let mut total = LocalizedElement::zero(amb);
    for (sign, perm) in minors::signed_permutations(s) {
        let mut term = LocalizedElement::one(amb);
        for (a, &b) in perm.iter().enumerate() {
            term = term.mul(&minors::phi(amb, m + a + 1, cols[b])?);
        }
        total = if sign { total.sub(&term) } else { total.add(&term) };
    }
    Ok(total)
}

/// B⁺(I) = product over columns of D⁺(column entries).
pub fn bideterminant_plus(amb: Ambient, t: &Tableau) -> Result<SuperPoly> {
    let mut out = SuperPoly::one(amb);
    for b in 0..t.num_columns() {
        out = out.mul(&dplus(amb, &t.column(b))?);
    }
    Ok(out)
}

/// B⁻(J) = product over columns of D⁻(column entries).
pub fn bideterminant_minus(amb: Ambient, t: &Tableau) -> Result<LocalizedElement> {
    let mut out = LocalizedElement::one(amb);
    for b in 0..t.num_columns() {
        out = out.mul(&dminus(amb, &t.column(b))?);
    }
    Ok(out)
}

/// Content of a multi-index as a weight: counts of each symbol in 1..=m+n.
pub fn content(amb: Ambient, entries: impl Iterator<Item = usize>) -> Weight {
    let mut v = vec![0i64; amb.size()];
    for e in entries {
        v[e - 1] += 1;
    }
    Weight::from_vec(&v, amb.m())
}

/// Exponents of D⁺(1..a) (a = 1..m) and D⁻(m+1..m+b) (b = 1..n) in v.
/// Only the last plus exponent may be negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighestFactors {
    pub plus: Vec<i64>,
    pub minus: Vec<i64>,
}

impl HighestFactors {
    pub fn of(lambda: &Weight) -> Self {
        let diffs = |v: &[i64]| -> Vec<i64> {
            (0..v.len()).map(|a| v[a] - v.get(a + 1).copied().unwrap_or(0)).collect()
        };
        HighestFactors { plus: diffs(&lambda.plus), minus: diffs(&lambda.minus) }
    }

    /// Evaluates Π D⁺(1..a)^{e_a} Π D⁻(m+1..m+b)^{f_b}. A negative exponent on
    /// the full D⁺(1..m) = D becomes a denominator; any other negative
    /// exponent is an error.
    pub fn evaluate(&self, amb: Ambient) -> Result<LocalizedElement> {
        let m = amb.m();
        let mut out = LocalizedElement::one(amb);
        for (a, &e) in self.plus.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let cols: Vec<usize> = (1..=a + 1).collect();
            if e < 0 {
                if a + 1 != m {
                    return Err(Error::usage(format!("negative power of D⁺(1..{})", a + 1)));
                }
                out = out.mul(&LocalizedElement::new(SuperPoly::one(amb), (-e) as u32, 0));
            } else {
                out = out.mul(&LocalizedElement::from_poly(dplus(amb, &cols)?.pow(e as u32)));
            }
        }
        for (b, &f) in self.minus.iter().enumerate() {
            if f == 0 {
                continue;
            }
            if f < 0 {
                return Err(Error::usage(format!("negative power of D⁻({}..{})", m + 1, m + b + 1)));
            }
            let cols: Vec<usize> = (m + 1..=m + b + 1).collect();
            out = out.mul(&dminus(amb, &cols)?.pow(f as u32));
        }
        Ok(out)
    }
}

/// v = v⁺v⁻ for a dominant weight with λ⁻_n ≥ 0.
pub fn highest_vector(amb: Ambient, lambda: &Weight) -> Result<LocalizedElement> {
    lambda.check_sizes(amb.m(), amb.n())?;
    if !lambda.is_dominant() {
        return Err(Error::usage(format!("{lambda} is not dominant")));
    }
    if *lambda.minus.last().unwrap() < 0 {
        return Err(Error::usage(format!(
            "{lambda} has negative last minus entry; apply the Berezinian normalization first"
        )));
    }
    let v = HighestFactors::of(lambda).evaluate(amb)?;
    debug_assert!(v.weight().as_ref() == Some(lambda));
    Ok(v)
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
    fn weight_parsing_and_display() {
        let w = Weight::parse("[2,1|1,0]").unwrap();
        assert_eq!(w, Weight::new(vec![2, 1], vec![1, 0]));
        assert_eq!(w.to_string(), "(2,1|1,0)");
        assert!(Weight::parse("2,1").is_err());
        assert!(Weight::parse("2,x|1").is_err());
    }

    #[test]
    fn berezinian_examples() {
        let (w, t) = normalize_berezinian(&Weight::parse("2,1|1,1").unwrap()).unwrap();
        assert_eq!((w, t), (Weight::parse("3,2|0,0").unwrap(), -1));
        let (w, t) = normalize_berezinian(&Weight::parse("3,1|2,0").unwrap()).unwrap();
        assert_eq!((w, t), (Weight::parse("3,1|2,0").unwrap(), 0));
        let (w, t) = normalize_berezinian(&Weight::parse("0|-2").unwrap()).unwrap();
        assert_eq!((w, t), (Weight::parse("-2|0").unwrap(), 2));
    }

    #[test]
    fn dplus_examples() {
        let a = amb(2, 1);
        assert_eq!(dplus(a, &[1]).unwrap(), c(a, 1, 1));
        assert_eq!(dplus(a, &[1, 2]).unwrap(), c(a, 1, 1).mul(&c(a, 2, 2)).sub(&c(a, 1, 2).mul(&c(a, 2, 1))));
        assert!(dplus(a, &[1, 1]).unwrap().is_zero());
        assert!(dplus(a, &[1, 2, 1]).is_err());
    }

    #[test]
    fn dminus_examples() {
        let a = amb(1, 1);
        let expected = LocalizedElement::new(c(a, 1, 1).mul(&c(a, 2, 2)).sub(&c(a, 2, 1).mul(&c(a, 1, 2))), 1, 0);
        assert!(dminus(a, &[2]).unwrap().loc_eq(&expected));
        let b = amb(1, 2);
        assert!(dminus(b, &[3, 3]).unwrap().is_zero());
        assert!(dminus(b, &[]).unwrap().loc_eq(&LocalizedElement::one(b)));
    }

    #[test]
    fn bideterminant_examples() {
        let a = amb(2, 1);
        assert_eq!(bideterminant_plus(a, &Tableau::new(vec![vec![1]]).unwrap()).unwrap(), c(a, 1, 1));
        let t = Tableau::basic(&[2, 1], 0);
        let b = bideterminant_plus(a, &t).unwrap();
        let d = dplus(a, &[1, 2]).unwrap();
        assert_eq!(b, c(a, 1, 1).mul(&d));
        assert_eq!(b.weight_of().unwrap(), Weight::parse("2,1|0").unwrap());
    }

    #[test]
    fn highest_vector_examples() {
        let a = amb(2, 2);
        assert!(highest_vector(a, &Weight::zero(2, 2)).unwrap().loc_eq(&LocalizedElement::one(a)));
        let b = amb(1, 1);
        let v = highest_vector(b, &Weight::parse("1|1").unwrap()).unwrap();
        let expected = c(b, 1, 1).mul(&c(b, 2, 2)).sub(&c(b, 2, 1).mul(&c(b, 1, 2)));
        assert!(v.loc_eq(&LocalizedElement::from_poly(expected)));
        let v = highest_vector(b, &Weight::parse("-1|0").unwrap()).unwrap();
        assert!(v.loc_eq(&LocalizedElement::new(SuperPoly::one(b), 1, 0)));
        assert!(highest_vector(a, &Weight::parse("1,2|0,0").unwrap()).is_err());
        assert!(highest_vector(a, &Weight::parse("1,0|0,-1").unwrap()).is_err());
    }

    #[test]
    fn semistandard_counts() {
        // shape (2,1) over {1,2,3}: 8 tableaux
        assert_eq!(Tableau::semistandard(&[2, 1], &[1, 2, 3]).len(), 8);
        assert!(Tableau::semistandard(&[2, 1], &[1, 2, 3]).iter().all(|t| t.is_semistandard()));
        assert_eq!(Tableau::semistandard(&[1, 1, 1], &[1, 2]).len(), 0);
    }

    #[test]
    fn transpose_is_involution() {
        for p in [vec![3, 1], vec![4, 4, 2, 1], vec![], vec![1, 1, 1]] {
            assert_eq!(transpose(&transpose(&p)), p);
        }
        assert_eq!(transpose(&[3, 1]), vec![2, 1, 1]);
    }
}
