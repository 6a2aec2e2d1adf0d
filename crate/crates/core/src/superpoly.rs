//! Sparse supercommutative polynomials in the generators c[i,j] of A(m|n).
//!
//! A monomial stores one exponent per generator plus a bitmask of the odd
//! generators it contains; Koszul signs are computed from the masks and
//! absorbed into coefficients.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::scalar::{Characteristic, Scalar};
use crate::weights::Weight;

/// Largest supported m+n.
pub const MAX_SIZE: usize = 6;
/// Number of exponent slots in a monomial.
pub const MAX_GENS: usize = MAX_SIZE * MAX_SIZE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u32) -> Self {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }
}

/// Sizes (m, n) together with the characteristic. Cheap to copy; cached
/// objects (D, D22, adjugate, y) are looked up through [`Ambient::cache`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ambient {
    m: u8,
    n: u8,
    ch: Characteristic,
}

impl Ambient {
    pub fn new(m: usize, n: usize, ch: Characteristic) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::usage("m and n must be at least 1"));
        }
        if m + n > MAX_SIZE {
            return Err(Error::usage(format!("m+n = {} exceeds the supported maximum {MAX_SIZE}", m + n)));
        }
        if ch == Characteristic::Prime(2) {
            return Err(Error::usage("characteristic 2 is not supported"));
        }
        Ok(Ambient { m: m as u8, n: n as u8, ch })
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn size(&self) -> usize {
        (self.m + self.n) as usize
    }

    pub fn characteristic(&self) -> Characteristic {
        self.ch
    }

    pub fn with_characteristic(&self, ch: Characteristic) -> Ambient {
        Ambient { ch, ..*self }
    }

    /// Parity of an index in 1..=m+n.
    pub fn index_parity(&self, i: usize) -> Parity {
        if i <= self.m() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn gen_parity(&self, row: usize, col: usize) -> Parity {
        self.index_parity(row).add(self.index_parity(col))
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.size() {
            return Err(Error::usage(format!("index {i} outside 1..={}", self.size())));
        }
        Ok(())
    }

    /// Slot of c[row,col]; slots follow the lexicographic order on (row, col).
    pub fn gen_index(&self, row: usize, col: usize) -> usize {
        (row - 1) * self.size() + (col - 1)
    }

    pub fn gen_of(&self, idx: usize) -> (usize, usize) {
        (idx / self.size() + 1, idx % self.size() + 1)
    }

    pub fn scalar(&self, v: i64) -> Scalar {
        Scalar::from_i64(v, self.ch)
    }

    pub fn cache(&self) -> Arc<AmbientCache> {
        static REGISTRY: OnceLock<Mutex<HashMap<Ambient, Arc<AmbientCache>>>> = OnceLock::new();
        let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = reg.lock().expect("ambient registry poisoned");
        guard.entry(*self).or_insert_with(|| Arc::new(AmbientCache::default())).clone()
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GL({}|{}) char {}", self.m, self.n, self.ch)
    }
}

/// Lazily computed per-ambient objects, shared read-only after construction.
#[derive(Default)]
pub struct AmbientCache {
    pub(crate) det_c11: OnceLock<SuperPoly>,
    pub(crate) det_c22: OnceLock<SuperPoly>,
    pub(crate) adjugate: OnceLock<Vec<Vec<SuperPoly>>>,
    pub(crate) y: OnceLock<Vec<Vec<crate::fraction::LocalizedElement>>>,
    pub(crate) phi22: OnceLock<Vec<Vec<crate::fraction::LocalizedElement>>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_GENS],
    odd: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; MAX_GENS], odd: 0 };

    pub fn generator(amb: &Ambient, row: usize, col: usize) -> Monomial {
        let idx = amb.gen_index(row, col);
        let mut m = Monomial::ONE;
        m.exps[idx] = 1;
        if amb.gen_parity(row, col) == Parity::Odd {
            m.odd = 1u64 << idx;
        }
        m
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        self.exps[idx] as u32
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.count_ones())
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// (slot, exponent) pairs in canonical order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e as u32))
    }

    /// Product with Koszul sign; `None` when an odd generator repeats.
    /// The boolean is `true` for a negative sign.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut rest = other.odd;
        while rest != 0 {
            let y = rest.trailing_zeros();
            swaps += (self.odd >> (y + 1)).count_ones();
            rest &= rest - 1;
        }
        let mut exps = [0u8; MAX_GENS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps[i].checked_add(other.exps[i]).expect("exponent overflow (limit 255)");
        }
        Some((swaps % 2 == 1, Monomial { exps, odd: self.odd | other.odd }))
    }

    /// `q` with `q * divisor = ±self`, if the divisor's factors are contained in self.
    pub fn quotient(&self, divisor: &Monomial) -> Option<Monomial> {
        if divisor.odd & !self.odd != 0 {
            return None;
        }
        let mut exps = [0u8; MAX_GENS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exps[i].checked_sub(divisor.exps[i])?;
        }
        Some(Monomial { exps, odd: self.odd & !divisor.odd })
    }

    /// Removes one copy of a generator slot (must be present).
    pub(crate) fn without_one(&self, idx: usize) -> Monomial {
        let mut m = *self;
        m.exps[idx] -= 1;
        if m.exps[idx] == 0 {
            m.odd &= !(1u64 << idx);
        }
        m
    }

    /// Splits into the factors with slot ≤ idx and those with slot > idx.
    pub(crate) fn split_after(&self, idx: usize) -> (Monomial, Monomial) {
        let mut lo = Monomial::ONE;
        let mut hi = Monomial::ONE;
        lo.exps[..=idx].copy_from_slice(&self.exps[..=idx]);
        hi.exps[idx + 1..].copy_from_slice(&self.exps[idx + 1..]);
        let low_mask = if idx + 1 >= 64 { u64::MAX } else { (1u64 << (idx + 1)) - 1 };
        lo.odd = self.odd & low_mask;
        hi.odd = self.odd & !low_mask;
        (lo, hi)
    }
}

impl Ord for Monomial {
    /// Term order: fewer odd factors ranks higher, then lexicographic on the
    /// exponent vector. Compatible with multiplication on nonzero products,
    /// and a pure-even leading term never annihilates under multiplication.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .odd
            .count_ones()
            .cmp(&self.odd.count_ones())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors().map(|(i, e)| format!("#{i}^{e}")).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// An element of A(m|n): terms sorted by decreasing monomial order, no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperPoly {
    amb: Ambient,
    terms: Vec<(Monomial, Scalar)>,
}

const PARALLEL_MUL_THRESHOLD: usize = 40_000;

impl SuperPoly {
    pub fn zero(amb: Ambient) -> Self {
        SuperPoly { amb, terms: Vec::new() }
    }

    pub fn one(amb: Ambient) -> Self {
        Self::constant(amb, amb.scalar(1))
    }

    pub fn constant(amb: Ambient, c: Scalar) -> Self {
        Self::from_terms(amb, vec![(Monomial::ONE, c)])
    }

    pub fn from_i64(amb: Ambient, c: i64) -> Self {
        Self::constant(amb, amb.scalar(c))
    }

    pub fn generator(amb: Ambient, row: usize, col: usize) -> Result<Self> {
        amb.check_index(row)?;
        amb.check_index(col)?;
        Ok(Self::from_terms(amb, vec![(Monomial::generator(&amb, row, col), amb.scalar(1))]))
    }

    /// c[row,col], panicking on bad indices; for internal use with checked loops.
    pub(crate) fn gen(amb: Ambient, row: usize, col: usize) -> Self {
        Self::generator(amb, row, col).expect("generator index in range")
    }

    pub fn monomial(amb: Ambient, m: Monomial, c: Scalar) -> Self {
        Self::from_terms(amb, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(amb: Ambient, terms: Vec<(Monomial, Scalar)>) -> Self {
        let mut acc: FxHashMap<Monomial, Scalar> = FxHashMap::default();
        for (m, c) in terms {
            accumulate(&mut acc, m, c);
        }
        Self::from_map(amb, acc)
    }

    fn from_map(amb: Ambient, acc: FxHashMap<Monomial, Scalar>) -> Self {
        let mut terms: Vec<(Monomial, Scalar)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        SuperPoly { amb, terms }
    }

    pub fn ambient(&self) -> Ambient {
        self.amb
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(self.amb.scalar(0)),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Common parity of all terms; zero counts as even. `None` if mixed.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.iter().map(|(m, _)| m.parity());
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some(p) => p,
        };
        it.all(|p| p == first).then_some(first)
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Some(Parity::Even)
    }

    fn check_same(&self, other: &SuperPoly) {
        assert_eq!(self.amb, other.amb, "mixed ambients or characteristics in polynomial arithmetic");
    }

    pub fn try_mul(&self, other: &SuperPoly) -> Result<SuperPoly> {
        if self.amb != other.amb {
            return Err(Error::usage(format!("cannot multiply over {} and {}", self.amb, other.amb)));
        }
        Ok(self.mul(other))
    }

    pub fn try_add(&self, other: &SuperPoly) -> Result<SuperPoly> {
        if self.amb != other.amb {
            return Err(Error::usage(format!("cannot add over {} and {}", self.amb, other.amb)));
        }
        Ok(self.add(other))
    }

    pub fn add(&self, other: &SuperPoly) -> SuperPoly {
        self.check_same(other);
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1.add(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        SuperPoly { amb: self.amb, terms: out }
    }

    pub fn neg(&self) -> SuperPoly {
        SuperPoly { amb: self.amb, terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn sub(&self, other: &SuperPoly) -> SuperPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> SuperPoly {
        if c.is_zero() {
            return SuperPoly::zero(self.amb);
        }
        SuperPoly { amb: self.amb, terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect() }
    }

    pub fn scale_i64(&self, k: i64) -> SuperPoly {
        self.scale(&self.amb.scalar(k))
    }

    pub fn mul(&self, other: &SuperPoly) -> SuperPoly {
        self.check_same(other);
        if self.is_zero() || other.is_zero() {
            return SuperPoly::zero(self.amb);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let work = self.terms.len() * other.terms.len();
        if work >= PARALLEL_MUL_THRESHOLD && self.terms.len() >= 8 {
            use rayon::prelude::*;
            let chunk = (self.terms.len() / rayon::current_num_threads().max(1)).max(4);
            let partial: Vec<SuperPoly> = self
                .terms
                .par_chunks(chunk)
                .map(|part| {
                    let mut acc = FxHashMap::default();
                    mul_into(&mut acc, part, &other.terms);
                    SuperPoly::from_map(self.amb, acc)
                })
                .collect();
            return partial.into_iter().fold(SuperPoly::zero(self.amb), |s, p| s.add(&p));
        }
        let mut acc = FxHashMap::default();
        acc.reserve(self.terms.len().max(other.terms.len()) * 2);
        mul_into(&mut acc, &self.terms, &other.terms);
        SuperPoly::from_map(self.amb, acc)
    }

    pub fn pow(&self, e: u32) -> SuperPoly {
        let mut result = SuperPoly::one(self.amb);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Column content of every term, if they all agree.
    pub fn weight_of(&self) -> Option<Weight> {
        let first = self.terms.first()?;
        let w = monomial_weight(&self.amb, &first.0);
        for (m, _) in &self.terms[1..] {
            if monomial_weight(&self.amb, m) != w {
                return None;
            }
        }
        Some(w)
    }

    /// Quotient by an even divisor, by leading-term elimination.
    pub fn exact_divide(&self, b: &SuperPoly) -> Result<Option<SuperPoly>> {
        if b.amb != self.amb {
            return Err(Error::usage("exact_divide across different ambients"));
        }
        if b.is_zero() {
            return Err(Error::usage("division by the zero polynomial"));
        }
        if !b.is_even() {
            return Err(Error::usage("exact_divide requires an even divisor"));
        }
        if let Some(c) = b.as_constant() {
            return Ok(Some(self.scale(&c.inv())));
        }
        let (lead_m, lead_c) = b.terms[0].clone();
        let lead_inv = lead_c.inv();
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let Some(t) = m.quotient(&lead_m) else {
                return Ok(None);
            };
            let (neg, check) = t.mul(&lead_m).expect("quotient times divisor is nonzero");
            debug_assert!(check == m);
            let mut coef = c.mul(&lead_inv);
            if neg {
                coef = coef.neg();
            }
            let step = SuperPoly::monomial(self.amb, t, coef.clone());
            rem = rem.sub(&step.mul(b));
            quotient.push((t, coef));
        }
        let q = SuperPoly::from_terms(self.amb, quotient);
        if lead_m.odd_mask() != 0 && q.mul(b) != *self {
            // nilpotent divisor: elimination is not conclusive
            return Ok(None);
        }
        Ok(Some(q))
    }

    /// Same polynomial with every coefficient lifted to characteristic zero.
    pub fn lift(&self) -> SuperPoly {
        let amb = self.amb.with_characteristic(Characteristic::Zero);
        SuperPoly { amb, terms: self.terms.iter().map(|(m, c)| (*m, c.lift())).collect() }
    }

    /// Reduction of an integral characteristic-zero polynomial into `ch`.
    pub fn reduce_into(&self, ch: Characteristic) -> Result<SuperPoly> {
        let amb = self.amb.with_characteristic(ch);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let r = c.to_rational();
            if !r.is_integer() {
                return Err(Error::internal(format!(
                    "non-integral coefficient {c} where a ℤ-form element was expected"
                )));
            }
            terms.push((*m, Scalar::from_bigint(r.numer(), ch)));
        }
        Ok(SuperPoly::from_terms(amb, terms))
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| render_term(&self.amb, m, c)).collect();
        parts.join(" ")
    }

    pub fn parse(amb: Ambient, text: &str) -> Result<SuperPoly> {
        Parser::new(amb, text).poly()
    }
}

fn accumulate(acc: &mut FxHashMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    match acc.get_mut(&m) {
        Some(x) => *x = x.add(&c),
        None => {
            acc.insert(m, c);
        }
    }
}

fn mul_into(acc: &mut FxHashMap<Monomial, Scalar>, a: &[(Monomial, Scalar)], b: &[(Monomial, Scalar)]) {
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((neg, m)) = ma.mul(mb) {
                let mut c = ca.mul(cb);
                if neg {
                    c = c.neg();
                }
                accumulate(acc, m, c);
            }
        }
    }
}

pub(crate) fn monomial_weight(amb: &Ambient, m: &Monomial) -> Weight {
    let size = amb.size();
    let mut content = vec![0i64; size];
    for (idx, e) in m.factors() {
        content[idx % size] += e as i64;
    }
    let minus = content.split_off(amb.m());
    Weight::new(content, minus)
}

fn render_term(amb: &Ambient, m: &Monomial, c: &Scalar) -> String {
    let sign = if c.is_negative() { '-' } else { '+' };
    let mut s = format!("{sign}{}", c.abs_string());
    for (idx, e) in m.factors() {
        let (r, col) = amb.gen_of(idx);
        s.push_str(&format!("·c[{r},{col}]"));
        if e > 1 {
            s.push_str(&format!("^{e}"));
        }
    }
    s
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperPoly({})", self.render())
    }
}

struct Parser<'a> {
    amb: Ambient,
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(amb: Ambient, src: &'a str) -> Self {
        Parser { amb, chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, _src: src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(format!("expected '{c}' at position {}", self.pos)))
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(format!("expected a number at position {start}")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::parse(format!("number out of range: {s}")))
    }

    fn poly(&mut self) -> Result<SuperPoly> {
        let mut total = SuperPoly::zero(self.amb);
        if self.peek().is_none() {
            return Err(Error::parse("empty polynomial"));
        }
        if self.chars == ['0'] {
            return Ok(total);
        }
        let mut first = true;
        while self.peek().is_some() {
            let negative = if self.eat('-') {
                true
            } else if self.eat('+') {
                false
            } else if first {
                false
            } else {
                return Err(Error::parse(format!("expected '+' or '-' at position {}", self.pos)));
            };
            first = false;
            total = total.add(&self.term(negative)?);
        }
        Ok(total)
    }

    fn term(&mut self, negative: bool) -> Result<SuperPoly> {
        let ch = self.amb.characteristic();
        let mut coef = Scalar::one(ch);
        let mut have_factor = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let num = self.number()?;
            let mut r = num_rational::BigRational::from_integer(num.into());
            if self.eat('/') {
                let den = self.number()?;
                if den == 0 {
                    return Err(Error::parse("zero denominator"));
                }
                r /= num_rational::BigRational::from_integer(den.into());
            }
            coef = Scalar::from_rational_in(&r, ch).map_err(|e| Error::parse(e.to_string()))?;
            have_factor = true;
        }
        let mut poly = SuperPoly::constant(self.amb, if negative { coef.neg() } else { coef });
        loop {
            let save = self.pos;
            let sep = self.eat('·') || self.eat('*');
            if self.peek() != Some('c') {
                self.pos = save;
                break;
            }
            if have_factor && !sep {
                return Err(Error::parse(format!("missing '·' at position {}", self.pos)));
            }
            self.expect('c')?;
            self.expect('[')?;
            let r = self.number()? as usize;
            self.expect(',')?;
            let c = self.number()? as usize;
            self.expect(']')?;
            let mut e = 1u32;
            if self.eat('^') {
                e = self.number()? as u32;
            }
            let g = SuperPoly::generator(self.amb, r, c).map_err(|e| Error::parse(e.to_string()))?;
            poly = poly.mul(&g.pow(e));
            have_factor = true;
        }
        if !have_factor {
            return Err(Error::parse(format!("empty term at position {}", self.pos)));
        }
        Ok(poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amb(m: usize, n: usize) -> Ambient {
        Ambient::new(m, n, Characteristic::Zero).unwrap()
    }

    fn c(a: Ambient, i: usize, j: usize) -> SuperPoly {
        SuperPoly::generator(a, i, j).unwrap()
    }

    #[test]
    fn odd_square_vanishes() {
        let a = amb(2, 1);
        assert!(c(a, 1, 3).mul(&c(a, 1, 3)).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let a = amb(2, 1);
        let x = c(a, 1, 3).mul(&c(a, 2, 3));
        let y = c(a, 2, 3).mul(&c(a, 1, 3));
        assert_eq!(x, y.neg());
        assert_eq!(x.render(), "+1·c[1,3]·c[2,3]");
    }

    #[test]
    fn even_generators_commute() {
        let a = amb(2, 1);
        let x = c(a, 1, 1).mul(&c(a, 2, 2));
        assert_eq!(x, c(a, 2, 2).mul(&c(a, 1, 1)));
        assert_eq!(x.render(), "+1·c[1,1]·c[2,2]");
    }

    #[test]
    fn weight_examples() {
        let a = amb(2, 1);
        let w = c(a, 1, 2).mul(&c(a, 3, 2)).weight_of().unwrap();
        assert_eq!(w, Weight::new(vec![0, 2], vec![0]));
        assert!(c(a, 1, 1).add(&c(a, 1, 2)).weight_of().is_none());
        assert!(SuperPoly::zero(a).weight_of().is_none());
    }

    #[test]
    fn divide_examples() {
        let a = amb(2, 1);
        let d = c(a, 1, 1).mul(&c(a, 2, 2)).sub(&c(a, 1, 2).mul(&c(a, 2, 1)));
        assert_eq!(d.mul(&c(a, 1, 2)).exact_divide(&d).unwrap(), Some(c(a, 1, 2)));
        assert_eq!(c(a, 1, 1).exact_divide(&c(a, 2, 2)).unwrap(), None);
        assert_eq!(SuperPoly::zero(a).exact_divide(&d).unwrap(), Some(SuperPoly::zero(a)));
        assert!(d.exact_divide(&SuperPoly::zero(a)).is_err());
        assert!(d.exact_divide(&c(a, 1, 3)).is_err());
    }

    #[test]
    fn divide_by_divisor_with_odd_terms() {
        let a = amb(2, 2);
        // an even divisor whose lower terms contain odd pairs
        let b = c(a, 3, 3).mul(&c(a, 1, 1)).sub(&c(a, 3, 1).mul(&c(a, 1, 3)));
        let q = c(a, 2, 4).mul(&c(a, 1, 2)).add(&c(a, 4, 4));
        assert_eq!(q.mul(&b).exact_divide(&b).unwrap(), Some(q));
    }

    #[test]
    fn mixed_ambients_are_rejected() {
        let a = amb(2, 1);
        let b = amb(1, 2);
        assert!(c(a, 1, 1).try_mul(&c(b, 1, 1)).is_err());
        let p = Ambient::new(2, 1, Characteristic::Prime(3)).unwrap();
        assert!(c(a, 1, 1).try_add(&c(p, 1, 1)).is_err());
    }

    #[test]
    fn render_parse_round_trip() {
        let a = amb(2, 2);
        let x = c(a, 1, 1).pow(3).scale_i64(-2).add(&c(a, 1, 3).mul(&c(a, 2, 4)).scale(&Scalar::Int(1).div(&Scalar::Int(3))));
        let text = x.render();
        assert_eq!(SuperPoly::parse(a, &text).unwrap(), x);
        assert_eq!(SuperPoly::parse(a, " c[2,4] * c[1,3] ").unwrap(), c(a, 1, 3).mul(&c(a, 2, 4)).neg());
        assert_eq!(SuperPoly::parse(a, "0").unwrap(), SuperPoly::zero(a));
        assert!(SuperPoly::parse(a, "c[9,1]").is_err());
        assert!(SuperPoly::parse(a, "+").is_err());
    }

    #[test]
    fn modular_parse() {
        let a = Ambient::new(1, 1, Characteristic::Prime(5)).unwrap();
        let x = SuperPoly::parse(a, "-1·c[1,1] +1/2·c[1,1]").unwrap();
        // -1 + 3 = 2 mod 5
        assert_eq!(x.render(), "+2·c[1,1]");
    }
}
