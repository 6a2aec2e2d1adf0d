//! Littlewood–Richardson coefficients by brute-force enumeration, and the
//! admissible-pair count they are compared with.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::floors::{self, AdmissiblePair};
use crate::weights::{is_partition, transpose, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LrCount {
    pub count: u64,
    /// Set when the shapes cannot carry any filling (size mismatch, inner ⊄ outer).
    pub degenerate: Option<String>,
}

/// A filling of outer/inner; `rows[r]` holds the entries of row r from left to right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkewTableau {
    pub outer: Vec<usize>,
    pub inner: Vec<usize>,
    pub rows: Vec<Vec<usize>>,
}

impl SkewTableau {
    fn inner_at(&self, r: usize) -> usize {
        self.inner.get(r).copied().unwrap_or(0)
    }

    /// Entry at (row, absolute column), if that cell belongs to the skew shape.
    pub fn entry(&self, r: usize, c: usize) -> Option<usize> {
        let start = self.inner_at(r);
        (r < self.outer.len() && c >= start && c < self.outer[r]).then(|| self.rows[r][c - start])
    }

    pub fn is_semistandard(&self) -> bool {
        for r in 0..self.outer.len() {
            if !self.rows[r].windows(2).all(|w| w[0] <= w[1]) {
                return false;
            }
            if r == 0 {
                continue;
            }
            for c in self.inner_at(r)..self.outer[r] {
                if let (Some(up), Some(here)) = (self.entry(r - 1, c), self.entry(r, c)) {
                    if up >= here {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Right to left along each row, rows top to bottom.
    pub fn reverse_reading_word(&self) -> Vec<usize> {
        self.rows.iter().flat_map(|row| row.iter().rev().copied()).collect()
    }

    pub fn content(&self, len: usize) -> Vec<usize> {
        let mut v = vec![0; len];
        for e in self.rows.iter().flatten() {
            v[e - 1] += 1;
        }
        v
    }
}

/// Every prefix has at least as many k's as (k+1)'s.
pub fn is_lattice_word(word: &[usize]) -> bool {
    let top = word.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0usize; top + 2];
    for &x in word {
        counts[x] += 1;
        if x > 1 && counts[x] > counts[x - 1] {
            return false;
        }
    }
    true
}

fn check_shapes(outer: &[usize], inner: &[usize], content: &[usize]) -> Result<Option<String>> {
    for (name, p) in [("outer", outer), ("inner", inner), ("content", content)] {
        if !is_partition(p) {
            return Err(Error::usage(format!("{name} {p:?} is not a partition")));
        }
    }
    if inner.len() > outer.len() || inner.iter().zip(outer).any(|(a, b)| a > b) {
        return Ok(Some(format!("{inner:?} ⊄ {outer:?}")));
    }
    let size = |p: &[usize]| p.iter().sum::<usize>();
    if size(outer) != size(inner) + size(content) {
        return Ok(Some(format!("|{outer:?}| ≠ |{inner:?}| + |{content:?}|")));
    }
    Ok(None)
}

struct ReadingSearch<'a> {
    outer: &'a [usize],
    inner: &'a [usize],
    content: &'a [usize],
    rows: Vec<Vec<usize>>,
    used: Vec<usize>,
    collect: bool,
    found: Vec<SkewTableau>,
    count: u64,
}

impl ReadingSearch<'_> {
    fn start(&self, r: usize) -> usize {
        self.inner.get(r).copied().unwrap_or(0)
    }

    /// Fills cells in reverse reading order, keeping the word a lattice word.
    fn run(&mut self, r: usize, c: usize) {
        if r == self.outer.len() {
            self.count += 1;
            if self.collect {
                let rows = self.rows.iter().map(|row| row.iter().rev().copied().collect()).collect();
                self.found.push(SkewTableau { outer: self.outer.to_vec(), inner: self.inner.to_vec(), rows });
            }
            return;
        }
        if c == self.start(r) {
            self.run(r + 1, self.outer.get(r + 1).copied().unwrap_or(0));
            return;
        }
        let col = c - 1;
        let right = self.rows[r].last().copied();
        let above = (r > 0 && col >= self.start(r - 1) && col < self.outer[r - 1])
            .then(|| self.rows[r - 1][self.outer[r - 1] - 1 - col]);
        for x in 1..=self.content.len() {
            if right.is_some_and(|v| x > v) || above.is_some_and(|v| x <= v) {
                continue;
            }
            if self.used[x - 1] == self.content[x - 1] || (x > 1 && self.used[x - 1] == self.used[x - 2]) {
                continue;
            }
            self.used[x - 1] += 1;
            self.rows[r].push(x);
            self.run(r, col);
            self.rows[r].pop();
            self.used[x - 1] -= 1;
        }
    }
}

/// C^{outer}_{inner, content}: semistandard fillings of outer/inner with the
/// given content whose reverse reading word is a lattice word.
pub fn lr_coefficient(outer: &[usize], inner: &[usize], content: &[usize]) -> Result<LrCount> {
    if let Some(reason) = check_shapes(outer, inner, content)? {
        return Ok(LrCount { count: 0, degenerate: Some(reason) });
    }
    let mut s = search(outer, inner, content, false);
    s.run(0, outer.first().copied().unwrap_or(0));
    Ok(LrCount { count: s.count, degenerate: None })
}

pub fn lr_tableaux(outer: &[usize], inner: &[usize], content: &[usize]) -> Result<Vec<SkewTableau>> {
    if check_shapes(outer, inner, content)?.is_some() {
        return Ok(Vec::new());
    }
    let mut s = search(outer, inner, content, true);
    s.run(0, outer.first().copied().unwrap_or(0));
    Ok(s.found)
}

fn search<'a>(outer: &'a [usize], inner: &'a [usize], content: &'a [usize], collect: bool) -> ReadingSearch<'a> {
    ReadingSearch {
        outer,
        inner,
        content,
        rows: vec![Vec::new(); outer.len()],
        used: vec![0; content.len()],
        collect,
        found: Vec::new(),
        count: 0,
    }
}

/// The same count by a different route: columns left to right, cells top to
/// bottom, semistandard only, with the lattice and content tests at the end.
pub fn lr_coefficient_columnwise(outer: &[usize], inner: &[usize], content: &[usize]) -> Result<LrCount> {
    if let Some(reason) = check_shapes(outer, inner, content)? {
        return Ok(LrCount { count: 0, degenerate: Some(reason) });
    }
    let start = |r: usize| inner.get(r).copied().unwrap_or(0);
    let mut cells = Vec::new();
    for c in 0..outer.first().copied().unwrap_or(0) {
        for r in 0..outer.len() {
            if c >= start(r) && c < outer[r] {
                cells.push((r, c));
            }
        }
    }
    let mut tab = SkewTableau {
        outer: outer.to_vec(),
        inner: inner.to_vec(),
        rows: (0..outer.len()).map(|r| vec![0; outer[r] - start(r)]).collect(),
    };
    let mut count = 0;
    fill_columns(&cells, 0, content.len(), content, &mut tab, &mut count);
    Ok(LrCount { count, degenerate: None })
}

fn fill_columns(
    cells: &[(usize, usize)],
    idx: usize,
    alphabet: usize,
    content: &[usize],
    tab: &mut SkewTableau,
    count: &mut u64,
) {
    if idx == cells.len() {
        if tab.content(alphabet) == content && is_lattice_word(&tab.reverse_reading_word()) {
            *count += 1;
        }
        return;
    }
    let (r, c) = cells[idx];
    let start = tab.inner_at(r);
    for x in 1..=alphabet {
        if c > start && tab.rows[r][c - 1 - start] > x {
            continue;
        }
        if r > 0 && tab.entry(r - 1, c).is_some_and(|up| up >= x) {
            continue;
        }
        tab.rows[r][c - start] = x;
        fill_columns(cells, idx + 1, alphabet, content, tab, count);
    }
    tab.rows[r][c - start] = 0;
}

/// outer/inner is a horizontal strip: at most one cell in each column.
pub fn is_horizontal_strip(outer: &[usize], inner: &[usize]) -> bool {
    if inner.len() > outer.len() || inner.iter().zip(outer).any(|(a, b)| a > b) {
        return false;
    }
    (1..outer.len()).all(|r| outer[r] <= inner.get(r - 1).copied().unwrap_or(0))
}

/// Number of admissible (K|L) with the given content. λ + content must be
/// dominant for these to index primitive vectors; otherwise the count is 0.
pub fn admissible_count(lambda: &Weight, content: &Weight) -> Result<u64> {
    let (m, n) = (lambda.m(), lambda.n());
    content.check_sizes(m, n)?;
    if content.plus.iter().any(|&x| x > 0) || content.minus.iter().any(|&x| x < 0) {
        return Err(Error::usage(format!("{content} is not the content of a pair (needs x⁺ ≤ 0 ≤ x⁻)")));
    }
    let k = -content.plus.iter().sum::<i64>();
    if k != content.minus.iter().sum::<i64>() {
        return Ok(0);
    }
    if !lambda.add(content).is_dominant() {
        return Ok(0);
    }
    Ok(AdmissiblePair::all(m, n, k as usize).iter().filter(|p| p.content(m, n) == *content).count() as u64)
}

/// Transpose of the (m|n)-hook partition of λ; needs λ⁺_m ≥ n and λ⁻ ≥ 0.
pub fn hook_transpose(lambda: &Weight) -> Result<Vec<usize>> {
    let (m, n) = (lambda.m(), lambda.n());
    if !lambda.is_dominant() || lambda.plus[m - 1] < n as i64 || lambda.minus[n - 1] < 0 {
        return Err(Error::usage(format!("{lambda} is not an (m|n)-hook weight with λ⁺_m ≥ n")));
    }
    let mut out: Vec<usize> = lambda.minus.iter().map(|&x| m + x as usize).collect();
    let plus: Vec<usize> = lambda.plus.iter().map(|&x| x as usize).collect();
    out.extend(transpose(&plus).into_iter().skip(n));
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FwedgeInstance {
    pub lambda: Weight,
    pub pair: AdmissiblePair,
    pub sigma: Weight,
    pub outer: Vec<usize>,
    pub inner: Vec<usize>,
    pub content: Vec<usize>,
    pub admissible: u64,
    pub lr: u64,
    pub pass: bool,
}

/// Hypotheses of the count equality: (I|J)-robust, σ = λ_{I|J} dominant, σ_m ≥ n.
pub fn fwedge_hypotheses(lambda: &Weight, p: &AdmissiblePair) -> bool {
    let sigma = floors::lambda_pair(lambda, p);
    floors::is_robust(lambda, p) && sigma.is_dominant() && sigma.plus[lambda.m() - 1] >= lambda.n() as i64
}

pub fn fwedge_check(lambda: &Weight, p: &AdmissiblePair) -> Result<FwedgeInstance> {
    let (m, n) = (lambda.m(), lambda.n());
    if !fwedge_hypotheses(lambda, p) {
        return Err(Error::usage(format!("hypotheses fail for λ = {lambda}, {p:?}")));
    }
    let sigma = floors::lambda_pair(lambda, p);
    let outer = hook_transpose(lambda)?;
    let inner = transpose(&sigma.plus.iter().map(|&x| x as usize).collect::<Vec<_>>());
    let content: Vec<usize> = sigma.minus.iter().filter(|&&x| x > 0).map(|&x| x as usize).collect();
    let admissible = admissible_count(lambda, &p.content(m, n))?;
    let lr = lr_coefficient(&outer, &inner, &content)?.count;
    Ok(FwedgeInstance {
        lambda: lambda.clone(),
        pair: p.clone(),
        sigma,
        outer,
        inner,
        content,
        admissible,
        lr,
        pass: admissible == lr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_coefficients() {
        assert_eq!(lr_coefficient(&[1], &[], &[1]).unwrap().count, 1);
        assert_eq!(lr_coefficient(&[2, 1], &[1], &[1, 1]).unwrap().count, 1);
        assert_eq!(lr_coefficient(&[2, 1], &[1], &[2]).unwrap().count, 1);
        assert_eq!(lr_coefficient(&[3, 2, 1], &[2, 1], &[2, 1]).unwrap().count, 2);
        let bad = lr_coefficient(&[2], &[1], &[2]).unwrap();
        assert_eq!(bad.count, 0);
        assert!(bad.degenerate.is_some());
    }

    #[test]
    fn both_orders_agree() {
        for (o, i, c) in [
            (vec![3, 2, 1], vec![2, 1], vec![2, 1]),
            (vec![4, 3, 2], vec![2, 1], vec![3, 2, 1]),
            (vec![3, 3], vec![1], vec![3, 2]),
        ] {
            assert_eq!(lr_coefficient(&o, &i, &c).unwrap(), lr_coefficient_columnwise(&o, &i, &c).unwrap());
        }
    }

    #[test]
    fn admissible_counts() {
        let l = Weight::parse("4,4|2,0").unwrap();
        assert_eq!(admissible_count(&l, &Weight::parse("-1,-1|1,1").unwrap()).unwrap(), 2);
        assert_eq!(admissible_count(&l, &Weight::zero(2, 2)).unwrap(), 1);
        assert_eq!(admissible_count(&l, &Weight::parse("-2,0|2,0").unwrap()).unwrap(), 0);
    }

    #[test]
    fn hook_shape() {
        assert_eq!(hook_transpose(&Weight::parse("4,3|2,0").unwrap()).unwrap(), vec![4, 2, 2, 1]);
    }
}
