//! The structured model ⊕F_r: coefficients in K[G] next to exterior monomials
//! in the odd coordinates y_{ij}, its embedding into K[G], the vectors
//! π⁺_i, π⁻_j, π_{ij}, π_{I|J}, primitivity, and the maps φ_r.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::derivation::{self, SuperDerivationOp};
use crate::error::{Error, Result};
use crate::fraction::LocalizedElement;
use crate::linalg::{Echelon, SparseVec};
use crate::minors;
use crate::scalar::Scalar;
use crate::superpoly::{Ambient, Monomial, SuperPoly};
use crate::weights::{self, HighestFactors, Tableau, Weight};

/// (i, j) with i ≤ m < j, indexing y_{ij}.
pub type Pair = (usize, usize);

fn check_pair(amb: Ambient, (i, j): Pair) -> Result<()> {
    let m = amb.m();
    if i == 0 || i > m || j <= m || j > amb.size() {
        return Err(Error::usage(format!("pair ({i},{j}) needs 1 ≤ i ≤ {m} < j ≤ {}", amb.size())));
    }
    Ok(())
}

/// y_{i₁j₁}…y_{i_rj_r}, pairs strictly increasing (i first, then j).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExteriorMonomial(Vec<Pair>);

impl ExteriorMonomial {
    pub fn one() -> Self {
        ExteriorMonomial(Vec::new())
    }

    pub fn new(amb: Ambient, pairs: Vec<Pair>) -> Result<Self> {
        for &p in &pairs {
            check_pair(amb, p)?;
        }
        if !pairs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::usage(format!("pairs {pairs:?} are not strictly increasing")));
        }
        Ok(ExteriorMonomial(pairs))
    }

    /// Sorts a product of y's. `None` when a pair repeats; otherwise the flag
    /// is `true` when the reordering is odd.
    pub fn sorted(pairs: &[Pair]) -> Option<(bool, Self)> {
        let mut v = pairs.to_vec();
        let mut odd = false;
        for a in 1..v.len() {
            let mut b = a;
            while b > 0 && v[b - 1] > v[b] {
                v.swap(b - 1, b);
                odd = !odd;
                b -= 1;
            }
            if b > 0 && v[b - 1] == v[b] {
                return None;
            }
        }
        Some((odd, ExteriorMonomial(v)))
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Σ (j_s − i_s) with j counted from 1 inside the odd block.
    pub fn height(&self, m: usize) -> i64 {
        self.0.iter().map(|&(i, j)| (j - m) as i64 - i as i64).sum()
    }

    pub fn weight(&self, amb: Ambient) -> Weight {
        let (m, n) = (amb.m(), amb.n());
        let mut w = Weight::zero(m, n);
        for &(i, j) in &self.0 {
            w.plus[i - 1] -= 1;
            w.minus[j - m - 1] += 1;
        }
        w
    }

    pub fn wedge(&self, other: &ExteriorMonomial) -> Option<(bool, ExteriorMonomial)> {
        let joined: Vec<Pair> = self.0.iter().chain(&other.0).copied().collect();
        Self::sorted(&joined)
    }

    pub fn embed(&self, amb: Ambient) -> Result<LocalizedElement> {
        let mut out = LocalizedElement::one(amb);
        for &(i, j) in &self.0 {
            out = out.mul(&minors::y(amb, i, j)?);
        }
        Ok(out)
    }
}

/// Σ_A w_A ⊗ y_A. Terms of different lengths may coexist; `floor()` reports
/// the common length when there is one.
#[derive(Clone, Debug)]
pub struct FloorElement {
    amb: Ambient,
    terms: BTreeMap<ExteriorMonomial, LocalizedElement>,
}

#[derive(Serialize)]
struct TermView {
    pairs: Vec<[usize; 2]>,
    coefficient: String,
}

#[derive(Serialize)]
struct FloorView {
    floor: Option<usize>,
    terms: Vec<TermView>,
}

impl Serialize for FloorElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(mono, c)| TermView {
                pairs: mono.pairs().iter().map(|&(i, j)| [i, j]).collect(),
                coefficient: c.render(),
            })
            .collect();
        FloorView { floor: self.floor(), terms }.serialize(s)
    }
}

impl FloorElement {
    pub fn zero(amb: Ambient) -> Self {
        FloorElement { amb, terms: BTreeMap::new() }
    }

    pub fn term(mono: ExteriorMonomial, coeff: LocalizedElement) -> Self {
        let mut out = FloorElement::zero(coeff.ambient());
        out.add_term(mono, coeff);
        out
    }

    /// w ⊗ 1 on floor 0.
    pub fn scalar_part(w: LocalizedElement) -> Self {
        Self::term(ExteriorMonomial::one(), w)
    }

    pub fn ambient(&self) -> Ambient {
        self.amb
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExteriorMonomial, &LocalizedElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &ExteriorMonomial) -> Option<&LocalizedElement> {
        self.terms.get(mono)
    }

    pub fn floor(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(|k| k.len());
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    pub fn add_term(&mut self, mono: ExteriorMonomial, coeff: LocalizedElement) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&mono) {
            Some(old) => {
                let sum = old.add(&coeff);
                if !sum.is_zero() {
                    self.terms.insert(mono, sum);
                }
            }
            None => {
                self.terms.insert(mono, coeff);
            }
        }
    }

    pub fn add(&self, other: &FloorElement) -> FloorElement {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> FloorElement {
        self.map_coefficients(|c| c.neg())
    }

    pub fn sub(&self, other: &FloorElement) -> FloorElement {
        self.add(&other.neg())
    }

    pub fn scale_i64(&self, k: i64) -> FloorElement {
        self.map_coefficients(|c| c.scale_i64(k))
    }

    pub fn scale(&self, c: &Scalar) -> FloorElement {
        self.map_coefficients(|x| x.scale(c))
    }

    /// Multiplies every coefficient by an even w.
    pub fn mul_coefficient(&self, w: &LocalizedElement) -> FloorElement {
        self.map_coefficients(|c| c.mul(w))
    }

    fn map_coefficients(&self, f: impl Fn(&LocalizedElement) -> LocalizedElement) -> FloorElement {
        let mut out = FloorElement::zero(self.amb);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(v));
        }
        out
    }

    /// (Σ w_A y_A)(Σ u_B y_B) with even coefficients.
    pub fn wedge(&self, other: &FloorElement) -> FloorElement {
        let mut out = FloorElement::zero(self.amb);
        for (a, w) in &self.terms {
            for (b, u) in &other.terms {
                if let Some((odd, ab)) = a.wedge(b) {
                    let c = w.mul(u);
                    out.add_term(ab, if odd { c.neg() } else { c });
                }
            }
        }
        out
    }

    pub fn loc_eq(&self, other: &FloorElement) -> bool {
        let zero = LocalizedElement::zero(self.amb);
        self.terms.keys().chain(other.terms.keys()).all(|k| {
            let a = self.terms.get(k).unwrap_or(&zero);
            let b = other.terms.get(k).unwrap_or(&zero);
            a.loc_eq(b)
        })
    }

    pub fn embed(&self) -> Result<LocalizedElement> {
        let mut out = LocalizedElement::zero(self.amb);
        for (mono, w) in &self.terms {
            out = out.add(&w.mul(&mono.embed(self.amb)?));
        }
        Ok(out)
    }

    /// Common weight of all terms, if homogeneous.
    pub fn weight(&self) -> Option<Weight> {
        let mut out: Option<Weight> = None;
        for (mono, w) in &self.terms {
            let t = w.weight()?.add(&mono.weight(self.amb));
            match &out {
                Some(prev) if *prev != t => return None,
                _ => out = Some(t),
            }
        }
        out
    }

    /// The terms of maximal height.
    pub fn leading(&self) -> Vec<(&ExteriorMonomial, &LocalizedElement)> {
        let m = self.amb.m();
        let Some(top) = self.terms.keys().map(|k| k.height(m)).max() else {
            return Vec::new();
        };
        self.terms.iter().filter(|(k, _)| k.height(m) == top).collect()
    }

    pub fn reduce(&self) -> FloorElement {
        self.map_coefficients(|c| c.reduce())
    }
}

/// Which condition of the first-floor construction fails for (i, j), if any.
pub fn first_floor_violation(lambda: &Weight, i: usize, j: usize) -> Option<String> {
    let (m, n) = (lambda.m(), lambda.n());
    if i == 0 || i > m || j == 0 || j > n {
        return Some(format!("(i, j) = ({i}, {j}) outside 1..={m} × 1..={n}"));
    }
    if let Some(v) = plus_violation(lambda, i) {
        return Some(v);
    }
    minus_violation(lambda, j)
}

fn plus_violation(lambda: &Weight, i: usize) -> Option<String> {
    let m = lambda.m();
    if i < m && lambda.plus[i - 1] == lambda.plus[i] {
        return Some(format!("λ⁺_{i} ≠ λ⁺_{} fails for λ = {lambda}", i + 1));
    }
    if i == m && lambda.plus[m - 1] == 0 {
        return Some(format!("λ⁺_{m} ≠ 0 fails for λ = {lambda}"));
    }
    None
}

fn minus_violation(lambda: &Weight, j: usize) -> Option<String> {
    if j > 1 && lambda.minus[j - 2] == lambda.minus[j - 1] {
        return Some(format!("λ⁻_{} ≠ λ⁻_{j} fails for λ = {lambda}", j - 1));
    }
    None
}

fn check_weight(amb: Ambient, lambda: &Weight) -> Result<()> {
    lambda.check_sizes(amb.m(), amb.n())?;
    if !lambda.is_dominant() {
        return Err(Error::usage(format!("{lambda} is not dominant")));
    }
    if *lambda.minus.last().unwrap() < 0 {
        return Err(Error::usage(format!(
            "{lambda} has negative last minus entry; apply the Berezinian normalization first"
        )));
    }
    Ok(())
}

/// ρ_{i|j} = Σ_{r ≥ i} Σ_{s ≤ j} (−1)^{s+j} D⁺(1..i−1, r) D⁻(m+1..m̂+s..m+j) y_{r,m+s}
/// on floor 1, with j counted inside the odd block.
pub fn rho(amb: Ambient, i: usize, j: usize) -> Result<FloorElement> {
    let (m, n) = (amb.m(), amb.n());
    if i == 0 || i > m || j == 0 || j > n {
        return Err(Error::usage(format!("ρ_({i}|{j}) needs 1 ≤ i ≤ {m}, 1 ≤ j ≤ {n}")));
    }
    let mut out = FloorElement::zero(amb);
    for r in i..=m {
        let mut plus_cols: Vec<usize> = (1..i).collect();
        plus_cols.push(r);
        let plus = LocalizedElement::from_poly(weights::dplus(amb, &plus_cols)?);
        for s in 1..=j {
            let minus_cols: Vec<usize> = (m + 1..=m + j).filter(|&c| c != m + s).collect();
            let mut c = plus.mul(&weights::dminus(amb, &minus_cols)?);
            if (s + j) % 2 == 1 {
                c = c.neg();
            }
            out.add_term(ExteriorMonomial(vec![(r, m + s)]), c);
        }
    }
    Ok(out)
}

/// Splits Π D⁺(1..a)^{e_a} Π D⁻(m+1..m+b)^{f_b} into the part with nonnegative
/// exponents (a negative power of D⁺(1..m) = D stays there as a denominator)
/// and the deficit Q made of the remaining negative exponents.
fn split_factors(amb: Ambient, f: &HighestFactors) -> Result<(LocalizedElement, LocalizedElement)> {
    let m = amb.m();
    let keep = |a: usize, e: i64| e > 0 || (a + 1 == m && e < 0);
    let pos = HighestFactors {
        plus: f.plus.iter().enumerate().map(|(a, &e)| if keep(a, e) { e } else { 0 }).collect(),
        minus: f.minus.iter().map(|&e| e.max(0)).collect(),
    };
    let deficit = HighestFactors {
        plus: f.plus.iter().enumerate().map(|(a, &e)| if keep(a, e) { 0 } else { (-e).max(0) }).collect(),
        minus: f.minus.iter().map(|&e| (-e).max(0)).collect(),
    };
    Ok((pos.evaluate(amb)?, deficit.evaluate(amb)?))
}

fn pi_ij_unchecked(amb: Ambient, lambda: &Weight, i: usize, j: usize) -> Result<FloorElement> {
    let mut f = HighestFactors::of(lambda);
    f.plus[i - 1] -= 1;
    if j > 1 {
        f.minus[j - 2] -= 1;
    }
    let (pos, deficit) = split_factors(amb, &f)?;
    if !deficit.loc_eq(&LocalizedElement::one(amb)) {
        return Err(Error::internal(format!("π_{i}{j} for {lambda} left a denominator")));
    }
    Ok(rho(amb, i, j)?.mul_coefficient(&pos))
}

/// π_{ij} on floor 1, with j in 1..=n. Weight λ − δ⁺_i + δ⁻_j.
pub fn pi_ij(amb: Ambient, lambda: &Weight, i: usize, j: usize) -> Result<FloorElement> {
    check_weight(amb, lambda)?;
    if let Some(v) = first_floor_violation(lambda, i, j) {
        return Err(Error::usage(format!("π_{{{i}{j}}} undefined: {v}")));
    }
    pi_ij_unchecked(amb, lambda, i, j)
}

/// π⁺_i for n = 1.
pub fn pi_plus(amb: Ambient, lambda: &Weight, i: usize) -> Result<FloorElement> {
    if amb.n() != 1 {
        return Err(Error::usage("π⁺_i is defined for n = 1"));
    }
    pi_ij(amb, lambda, i, 1)
}

/// π⁻_j for m = 1; no condition on λ⁺.
pub fn pi_minus(amb: Ambient, lambda: &Weight, j: usize) -> Result<FloorElement> {
    if amb.m() != 1 {
        return Err(Error::usage("π⁻_j is defined for m = 1"));
    }
    check_weight(amb, lambda)?;
    if j == 0 || j > amb.n() {
        return Err(Error::usage(format!("j = {j} outside 1..={}", amb.n())));
    }
    if let Some(v) = minus_violation(lambda, j) {
        return Err(Error::usage(format!("π⁻_{j} undefined: {v}")));
    }
    pi_ij_unchecked(amb, lambda, 1, j)
}

/// (I|J) with i's in 1..=m and j's in 1..=n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AdmissiblePair {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

impl AdmissiblePair {
    pub fn new(m: usize, n: usize, i: Vec<usize>, j: Vec<usize>) -> Result<Self> {
        if i.len() != j.len() {
            return Err(Error::usage(format!("I = {i:?} and J = {j:?} differ in length")));
        }
        if let Some(bad) = i.iter().find(|&&x| x == 0 || x > m) {
            return Err(Error::usage(format!("I entry {bad} outside 1..={m}")));
        }
        if let Some(bad) = j.iter().find(|&&x| x == 0 || x > n) {
            return Err(Error::usage(format!("J entry {bad} outside 1..={n}")));
        }
        let ok = (1..i.len()).all(|s| i[s - 1] < i[s] || (i[s - 1] == i[s] && j[s - 1] < j[s]));
        if !ok {
            return Err(Error::usage(format!("({i:?}|{j:?}) is not admissible")));
        }
        Ok(AdmissiblePair { i, j })
    }

    /// Parses "1,2|1,2" (j in 1..=n).
    pub fn parse(m: usize, n: usize, text: &str) -> Result<Self> {
        let (a, b) = text
            .split_once('|')
            .ok_or_else(|| Error::parse(format!("pair spec '{text}' needs a '|'")))?;
        let list = |s: &str| -> Result<Vec<usize>> {
            s.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::parse(format!("bad index '{t}'"))))
                .collect()
        };
        Self::new(m, n, list(a)?, list(b)?)
    }

    pub fn len(&self) -> usize {
        self.i.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i.is_empty()
    }

    /// cont(I|J): −(multiplicities of I) | (multiplicities of J).
    pub fn content(&self, m: usize, n: usize) -> Weight {
        let mut w = Weight::zero(m, n);
        for (&a, &b) in self.i.iter().zip(&self.j) {
            w.plus[a - 1] -= 1;
            w.minus[b - 1] += 1;
        }
        w
    }

    pub fn height(&self) -> i64 {
        self.i.iter().zip(&self.j).map(|(&a, &b)| b as i64 - a as i64).sum()
    }

    pub fn monomial(&self, m: usize) -> ExteriorMonomial {
        ExteriorMonomial(self.i.iter().zip(&self.j).map(|(&a, &b)| (a, m + b)).collect())
    }

    /// Every admissible pair of length k.
    pub fn all(m: usize, n: usize, k: usize) -> Vec<AdmissiblePair> {
        let cells: Vec<(usize, usize)> = (1..=m).cartesian_product(1..=n).collect();
        let mut out = Vec::new();
        admissible_rec(&cells, k, &mut Vec::new(), &mut out);
        out
    }
}

fn admissible_rec(cells: &[(usize, usize)], k: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<AdmissiblePair>) {
    if cur.len() == k {
        out.push(AdmissiblePair { i: cur.iter().map(|c| c.0).collect(), j: cur.iter().map(|c| c.1).collect() });
        return;
    }
    // i weakly increasing; within equal i the j's strictly increase, across
    // different i the j's are free.
    for &c in cells {
        if let Some(&last) = cur.last() {
            if c.0 < last.0 || (c.0 == last.0 && c.1 <= last.1) {
                continue;
            }
        }
        cur.push(c);
        admissible_rec(cells, k, cur, out);
        cur.pop();
    }
}

/// Exponent vectors of v_{I|J} = v / Π D⁺(1..i_s) D⁻(m+1..m+j_s−1).
pub fn v_factors(lambda: &Weight, p: &AdmissiblePair) -> HighestFactors {
    let mut f = HighestFactors::of(lambda);
    for (&a, &b) in p.i.iter().zip(&p.j) {
        f.plus[a - 1] -= 1;
        if b > 1 {
            f.minus[b - 2] -= 1;
        }
    }
    f
}

/// λ is (I|J)-robust when v_{I|J} is a polynomial.
pub fn is_robust(lambda: &Weight, p: &AdmissiblePair) -> bool {
    let f = v_factors(lambda, p);
    f.plus.iter().chain(&f.minus).all(|&e| e >= 0)
}

/// λ_{I|J} = λ + cont(I|J).
pub fn lambda_pair(lambda: &Weight, p: &AdmissiblePair) -> Weight {
    lambda.add(&p.content(lambda.m(), lambda.n()))
}

/// v_{I|J}·ρ_{I|J} kept as a numerator over the declared deficit Q, so that
/// non-robust candidates can still be combined before dividing.
#[derive(Clone, Debug)]
pub struct PiCandidate {
    weight: Weight,
    numerator: FloorElement,
    denominator: LocalizedElement,
}

/// Outcome of dividing a candidate by its declared denominator.
#[derive(Clone, Debug)]
pub enum Resolution {
    InModule(FloorElement),
    NotInModule { reason: String },
}

impl Resolution {
    pub fn element(&self) -> Option<&FloorElement> {
        match self {
            Resolution::InModule(x) => Some(x),
            Resolution::NotInModule { .. } => None,
        }
    }
}

impl PiCandidate {
    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn numerator(&self) -> &FloorElement {
        &self.numerator
    }

    pub fn denominator(&self) -> &LocalizedElement {
        &self.denominator
    }

    /// a·self + b·other; both must share weight and denominator.
    pub fn combine(&self, a: i64, other: &PiCandidate, b: i64) -> Result<PiCandidate> {
        if self.weight != other.weight {
            return Err(Error::usage(format!("cannot combine weights {} and {}", self.weight, other.weight)));
        }
        if !self.denominator.loc_eq(&other.denominator) {
            return Err(Error::usage("cannot combine candidates with different denominators"));
        }
        Ok(PiCandidate {
            weight: self.weight.clone(),
            numerator: self.numerator.scale_i64(a).add(&other.numerator.scale_i64(b)),
            denominator: self.denominator.clone(),
        })
    }

    /// Divides every coefficient by the declared denominator.
    pub fn resolve(&self) -> Result<Resolution> {
        let amb = self.numerator.ambient();
        let q = self.denominator.reduce();
        if q.d22_exp() != 0 {
            return Err(Error::internal("declared denominator involves D22"));
        }
        if q.numerator().as_constant().is_some_and(|c| c.is_one()) && q.d_exp() == 0 {
            return Ok(Resolution::InModule(self.numerator.clone()));
        }
        let d_back = LocalizedElement::from_poly(minors::det_c11(amb).pow(q.d_exp()));
        let mut out = FloorElement::zero(amb);
        for (mono, c) in self.numerator.terms() {
            match c.numerator().exact_divide(q.numerator())? {
                Some(quot) => {
                    let coeff = LocalizedElement::new(quot, c.d_exp(), c.d22_exp()).mul(&d_back);
                    out.add_term(mono.clone(), coeff);
                }
                None => {
                    let pairs = mono.pairs().iter().map(|(i, j)| format!("{i}{j}")).join(",");
                    return Ok(Resolution::NotInModule {
                        reason: format!("coefficient of y[{pairs}] is not divisible by the declared denominator"),
                    });
                }
            }
        }
        Ok(Resolution::InModule(out))
    }
}

/// v_{I|J}·ρ_{i₁|j₁}⋯ρ_{i_k|j_k} before division by the deficit.
pub fn pi_candidate(amb: Ambient, lambda: &Weight, p: &AdmissiblePair) -> Result<PiCandidate> {
    check_weight(amb, lambda)?;
    let checked = AdmissiblePair::new(amb.m(), amb.n(), p.i.clone(), p.j.clone())?;
    let target = lambda_pair(lambda, &checked);
    if !target.is_dominant() {
        return Err(Error::usage(format!("λ_(I|J) = {target} is not dominant")));
    }
    let (pos, deficit) = split_factors(amb, &v_factors(lambda, &checked))?;
    let mut rho_prod = FloorElement::scalar_part(LocalizedElement::one(amb));
    for (&a, &b) in checked.i.iter().zip(&checked.j) {
        rho_prod = rho_prod.wedge(&rho(amb, a, b)?);
    }
    Ok(PiCandidate { weight: target, numerator: rho_prod.mul_coefficient(&pos), denominator: deficit })
}

/// π_{I|J}, or "not in module" when some coefficient leaves K[G].
pub fn pi_pair(amb: Ambient, lambda: &Weight, p: &AdmissiblePair) -> Result<Resolution> {
    pi_candidate(amb, lambda, p)?.resolve()
}

/// Integer combinations (entries in −bound..=bound, first nonzero entry
/// positive) of the π_{K|L} with the given content whose division succeeds.
/// Only candidates with a non-trivial denominator are combined.
pub fn denominator_clearing_combinations(
    amb: Ambient,
    lambda: &Weight,
    content: &Weight,
    bound: i64,
) -> Result<Vec<(Vec<(AdmissiblePair, i64)>, FloorElement)>> {
    let k = (-content.plus.iter().sum::<i64>()) as usize;
    let pairs: Vec<AdmissiblePair> = AdmissiblePair::all(amb.m(), amb.n(), k)
        .into_iter()
        .filter(|p| p.content(amb.m(), amb.n()) == *content && !is_robust(lambda, p))
        .collect();
    let cands: Vec<PiCandidate> = pairs.iter().map(|p| pi_candidate(amb, lambda, p)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    if cands.is_empty() {
        return Ok(out);
    }
    let ranges = (0..cands.len()).map(|_| -bound..=bound).multi_cartesian_product();
    for coeffs in ranges {
        match coeffs.iter().find(|&&c| c != 0) {
            Some(&c) if c > 0 => {}
            _ => continue,
        }
        if coeffs.iter().fold(0i64, |g, &c| num_integer::gcd(g, c)) != 1 {
            continue;
        }
        let mut acc = PiCandidate {
            weight: cands[0].weight.clone(),
            numerator: FloorElement::zero(amb),
            denominator: cands[0].denominator.clone(),
        };
        for (c, cand) in coeffs.iter().zip(&cands) {
            if *c != 0 {
                acc = acc.combine(1, cand, *c)?;
            }
        }
        if acc.numerator.is_zero() {
            continue;
        }
        if let Resolution::InModule(x) = acc.resolve()? {
            out.push((pairs.iter().cloned().zip(coeffs).filter(|(_, c)| *c != 0).collect(), x));
        }
    }
    Ok(out)
}

/// The even simple directions (l+1, l).
pub fn even_simple_directions(amb: Ambient) -> Vec<(usize, usize)> {
    let (m, size) = (amb.m(), amb.size());
    (1..m).chain(m + 1..size).map(|l| (l + 1, l)).collect()
}

/// Annihilation by every even simple lowering direction (and, in positive
/// characteristic, by all of its divided powers).
pub fn is_primitive_loc(x: &LocalizedElement) -> Result<bool> {
    if x.is_zero() {
        return Ok(true);
    }
    if x.weight().is_none() {
        return Err(Error::usage("is_primitive needs a weight-homogeneous element"));
    }
    let amb = x.ambient();
    let modular = matches!(amb.characteristic(), crate::scalar::Characteristic::Prime(_));
    let bound = x.numerator().degree();
    let results: Vec<Result<bool>> = even_simple_directions(amb)
        .into_par_iter()
        .map(|(k, l)| {
            if modular {
                Ok(derivation::divided_powers(k, l, x, bound.max(1))?.iter().all(|y| y.is_zero()))
            } else {
                let op = SuperDerivationOp::basic(amb, k, l)?;
                Ok(derivation::apply_loc(&op, x)?.is_zero())
            }
        })
        .collect();
    for r in results {
        if !r? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_primitive(x: &FloorElement) -> Result<bool> {
    if x.weight().is_none() && !x.is_zero() {
        return Err(Error::usage("is_primitive needs a weight-homogeneous element"));
    }
    is_primitive_loc(&x.embed()?)
}

/// Σ_A (w_A) _{i₁j₁}D ⋯ _{i_rj_r}D computed in K[G].
pub fn phi_r_raw(x: &FloorElement) -> Result<LocalizedElement> {
    let amb = x.ambient();
    let parts: Vec<Result<LocalizedElement>> = x
        .terms
        .par_iter()
        .map(|(mono, w)| {
            let ops: Vec<SuperDerivationOp> =
                mono.pairs().iter().map(|&(i, j)| SuperDerivationOp::basic(amb, i, j)).collect::<Result<_>>()?;
            derivation::apply_seq(&ops, w)
        })
        .collect();
    let mut out = LocalizedElement::zero(amb);
    for p in parts {
        out = out.add(&p?);
    }
    Ok(out)
}

/// φ_r re-expressed in the floor basis.
pub fn phi_r(x: &FloorElement) -> Result<FloorElement> {
    match extract(&phi_r_raw(x)?)? {
        Decomposition::Floors(f) => Ok(f),
        Decomposition::NotRepresentable { reason } => {
            Err(Error::internal(format!("φ_r output left the structured model: {reason}")))
        }
    }
}

/// Result of reading an element of K[G] in floor coordinates.
#[derive(Clone, Debug)]
pub enum Decomposition {
    Floors(FloorElement),
    NotRepresentable { reason: String },
}

impl Decomposition {
    pub fn floors(&self) -> Option<&FloorElement> {
        match self {
            Decomposition::Floors(f) => Some(f),
            Decomposition::NotRepresentable { .. } => None,
        }
    }
}

/// Images of the generators under C12 ↦ C11·Y, C22 ↦ Z + C21·Y, written in the
/// same slots: y_{aj} sits in slot (a, j) and z_{kl} in slot (k, l).
struct Substitution {
    amb: Ambient,
    powers: HashMap<(usize, u32), SuperPoly>,
}

impl Substitution {
    fn new(amb: Ambient) -> Self {
        Substitution { amb, powers: HashMap::new() }
    }

    fn image(&self, slot: usize) -> SuperPoly {
        let amb = self.amb;
        let m = amb.m();
        let (row, col) = amb.gen_of(slot);
        let g = |r, c| SuperPoly::gen(amb, r, c);
        if col <= m {
            return g(row, col);
        }
        let mut out = if row <= m { SuperPoly::zero(amb) } else { g(row, col) };
        for a in 1..=m {
            out = out.add(&g(row, a).mul(&g(a, col)));
        }
        out
    }

    fn power(&mut self, slot: usize, e: u32) -> SuperPoly {
        if let Some(p) = self.powers.get(&(slot, e)) {
            return p.clone();
        }
        let p = if e == 1 { self.image(slot) } else { self.power(slot, e - 1).mul(&self.image(slot)) };
        self.powers.insert((slot, e), p.clone());
        p
    }

    fn apply(&mut self, p: &SuperPoly) -> SuperPoly {
        let amb = self.amb;
        let mut terms = Vec::new();
        for (mono, c) in p.terms() {
            let mut acc = SuperPoly::constant(amb, c.clone());
            for (slot, e) in mono.factors() {
                acc = acc.mul(&self.power(slot, e));
                if acc.is_zero() {
                    break;
                }
            }
            terms.extend(acc.terms().iter().cloned());
        }
        SuperPoly::from_terms(amb, terms)
    }
}

/// Numerators (in c₁₁, z coordinates) of each exterior monomial, over D^s.
fn split_new_coordinates(x: &LocalizedElement) -> std::result::Result<(BTreeMap<ExteriorMonomial, SuperPoly>, u32), String> {
    let amb = x.ambient();
    let m = amb.m();
    let x = x.reduce();
    if x.d22_exp() > 0 {
        return Err("denominator involves D22".into());
    }
    let sub = Substitution::new(amb).apply(x.numerator());
    let mut groups: BTreeMap<ExteriorMonomial, Vec<(Monomial, Scalar)>> = BTreeMap::new();
    for (mono, c) in sub.terms() {
        let mut pairs = Vec::new();
        let mut even = *mono;
        for (slot, _) in mono.factors() {
            let (row, col) = amb.gen_of(slot);
            match (row <= m, col <= m) {
                (false, true) => return Err(format!("C21 variable c[{row},{col}] remains after substitution")),
                (true, false) => {
                    pairs.push((row, col));
                    even = even.without_one(slot);
                }
                _ => {}
            }
        }
        groups.entry(ExteriorMonomial(pairs)).or_default().push((even, c.clone()));
    }
    let out = groups.into_iter().map(|(k, v)| (k, SuperPoly::from_terms(amb, v))).filter(|(_, p)| !p.is_zero()).collect();
    Ok((out, x.d_exp()))
}

/// A polynomial in c₁₁ and z slots mapped back with z_{kl} ↦ φ(c_{kl}).
fn back_to_raw(amb: Ambient, p: &SuperPoly, d_exp: u32, cache: &mut HashMap<(usize, u32), LocalizedElement>) -> Result<LocalizedElement> {
    let m = amb.m();
    let mut by_z: BTreeMap<Vec<(usize, u32)>, Vec<(Monomial, Scalar)>> = BTreeMap::new();
    for (mono, c) in p.terms() {
        let mut z = Vec::new();
        let mut rest = *mono;
        for (slot, e) in mono.factors() {
            let (row, _) = amb.gen_of(slot);
            if row > m {
                z.push((slot, e));
                for _ in 0..e {
                    rest = rest.without_one(slot);
                }
            }
        }
        by_z.entry(z).or_default().push((rest, c.clone()));
    }
    let mut out = LocalizedElement::zero(amb);
    for (z, c11) in by_z {
        let mut term = LocalizedElement::from_poly(SuperPoly::from_terms(amb, c11));
        for (slot, e) in z {
            let f = match cache.get(&(slot, e)) {
                Some(f) => f.clone(),
                None => {
                    let (row, col) = amb.gen_of(slot);
                    let f = minors::phi(amb, row, col)?.pow(e);
                    cache.insert((slot, e), f.clone());
                    f
                }
            };
            term = term.mul(&f);
        }
        out = out.add(&term);
    }
    Ok(out.divide_by_powers(d_exp, 0))
}

/// Reads x in floor coordinates by the change of variables; no check that
/// the coefficients lie in a particular H⁰_{G_ev}(λ).
pub fn extract(x: &LocalizedElement) -> Result<Decomposition> {
    let amb = x.ambient();
    let (groups, s) = match split_new_coordinates(x) {
        Ok(g) => g,
        Err(reason) => return Ok(Decomposition::NotRepresentable { reason }),
    };
    let mut cache = HashMap::new();
    let mut out = FloorElement::zero(amb);
    for (mono, p) in groups {
        out.add_term(mono, back_to_raw(amb, &p, s, &mut cache)?);
    }
    Ok(Decomposition::Floors(out))
}

/// Polynomial in c₁₁ and z slots for D⁺-bideterminants of T times z-minors of T'.
fn basis_polynomial(amb: Ambient, plus: &Tableau, minus: &Tableau) -> Result<SuperPoly> {
    let m = amb.m();
    let mut out = weights::bideterminant_plus(amb, plus)?;
    for b in 0..minus.num_columns() {
        let cols = minus.column(b);
        let rows: Vec<usize> = (m + 1..=m + cols.len()).collect();
        out = out.mul(&minors::minor(amb, &rows, &cols)?);
    }
    Ok(out)
}

fn to_sparse(p: &SuperPoly) -> SparseVec<Monomial> {
    p.terms().iter().cloned().collect()
}

/// Whether W / D^s, read in c₁₁ and z coordinates, lies in H⁰_{G_ev}(λ).
fn in_even_module(amb: Ambient, lambda: &Weight, w: &SuperPoly, s: u32) -> Result<bool> {
    let (m, n) = (amb.m(), amb.n());
    let Some(weight) = w.weight_of() else {
        return Ok(false);
    };
    let lm = lambda.plus[m - 1];
    let shift = lm - s as i64;
    let plus_shape = weights::partition(&lambda.plus.iter().map(|&x| x - lm).collect::<Vec<_>>());
    let minus_shape = weights::partition(&lambda.minus);
    let plus_content: Vec<i64> = weight.plus.iter().map(|&x| x - shift - s as i64).collect();
    let d = minors::det_c11(amb);
    let (target, scale) = if shift >= 0 { (w.clone(), d.pow(shift as u32)) } else { (w.mul(&d.pow((-shift) as u32)), SuperPoly::one(amb)) };
    let plus_alphabet: Vec<usize> = (1..=m).collect();
    let minus_alphabet: Vec<usize> = (m + 1..=m + n).collect();
    let count = |t: &Tableau, lo: usize, len: usize| -> Vec<i64> {
        let mut v = vec![0i64; len];
        for e in t.entries() {
            v[e - lo] += 1;
        }
        v
    };
    let pluses: Vec<Tableau> = Tableau::semistandard(&plus_shape, &plus_alphabet)
        .into_iter()
        .filter(|t| count(t, 1, m) == plus_content)
        .collect();
    let minuses: Vec<Tableau> = Tableau::semistandard(&minus_shape, &minus_alphabet)
        .into_iter()
        .filter(|t| count(t, m + 1, n) == weight.minus)
        .collect();
    let mut ech = Echelon::new(amb.characteristic());
    for tp in &pluses {
        for tm in &minuses {
            ech.insert(to_sparse(&basis_polynomial(amb, tp, tm)?.mul(&scale)));
        }
    }
    Ok(ech.solve(to_sparse(&target)).is_some())
}

/// Inverse of embed on the image of ⊕F_r for λ: floor coordinates whose
/// coefficients all lie in H⁰_{G_ev}(λ), or "not representable".
pub fn floor_decompose(x: &LocalizedElement, lambda: &Weight) -> Result<Decomposition> {
    let amb = x.ambient();
    check_weight(amb, lambda)?;
    let (groups, s) = match split_new_coordinates(x) {
        Ok(g) => g,
        Err(reason) => return Ok(Decomposition::NotRepresentable { reason }),
    };
    let mut cache = HashMap::new();
    let mut out = FloorElement::zero(amb);
    for (mono, p) in groups {
        if !in_even_module(amb, lambda, &p, s)? {
            let pairs = mono.pairs().iter().map(|(i, j)| format!("{i}{j}")).join(",");
            return Ok(Decomposition::NotRepresentable {
                reason: format!("coefficient of y[{pairs}] is outside the even module for {lambda}"),
            });
        }
        out.add_term(mono, back_to_raw(amb, &p, s, &mut cache)?);
    }
    Ok(Decomposition::Floors(out))
}

/// ω_{ij} = λ⁺_i + λ⁻_j + m + 1 − i − j.
pub fn omega(lambda: &Weight, i: usize, j: usize) -> i64 {
    lambda.plus[i - 1] + lambda.minus[j - 1] + lambda.m() as i64 + 1 - i as i64 - j as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Characteristic;

    fn amb(m: usize, n: usize) -> Ambient {
        Ambient::new(m, n, Characteristic::Zero).unwrap()
    }

    fn w(s: &str) -> Weight {
        Weight::parse(s).unwrap()
    }

    #[test]
    fn sort_signs() {
        assert_eq!(ExteriorMonomial::sorted(&[(2, 3), (1, 3)]).unwrap().0, true);
        assert_eq!(ExteriorMonomial::sorted(&[(1, 3), (2, 3)]).unwrap().0, false);
        assert!(ExteriorMonomial::sorted(&[(1, 3), (1, 3)]).is_none());
        let (odd, mono) = ExteriorMonomial::sorted(&[(2, 4), (1, 4), (1, 3)]).unwrap();
        assert!(odd);
        assert_eq!(mono.pairs(), &[(1, 3), (1, 4), (2, 4)]);
    }

    #[test]
    fn embed_y13() {
        let a = amb(2, 1);
        let x = FloorElement::term(ExteriorMonomial::new(a, vec![(1, 3)]).unwrap(), LocalizedElement::one(a));
        let expect = LocalizedElement::parse(a, "+1·c[2,2]·c[1,3] -1·c[1,2]·c[2,3] / D^1").unwrap();
        assert!(x.embed().unwrap().loc_eq(&expect));
    }

    #[test]
    fn pi_ij_preconditions() {
        let a = amb(2, 2);
        let err = pi_ij(a, &w("2,2|1,0"), 1, 1).unwrap_err();
        assert!(err.to_string().contains("λ⁺_1 ≠ λ⁺_2"), "{err}");
        let err = pi_ij(a, &w("2,1|1,1"), 1, 2).unwrap_err();
        assert!(err.to_string().contains("λ⁻_1 ≠ λ⁻_2"), "{err}");
        let err = pi_ij(a, &w("2,0|1,0"), 2, 1).unwrap_err();
        assert!(err.to_string().contains("λ⁺_2 ≠ 0"), "{err}");
    }

    #[test]
    fn pi_ij_weight_and_leading_term() {
        let a = amb(2, 2);
        let l = w("2,1|1,0");
        let v = weights::highest_vector(a, &l).unwrap();
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let p = pi_ij(a, &l, i, j).unwrap();
            assert_eq!(p.weight().unwrap(), l.lambda_ij(i, j));
            let lead = p.leading();
            assert_eq!(lead.len(), 1);
            assert_eq!(lead[0].0.pairs(), &[(i, 2 + j)]);
            assert!(lead[0].1.loc_eq(&v));
        }
    }

    #[test]
    fn pi_ij_primitive_and_eigen() {
        let a = amb(2, 2);
        let l = w("2,1|1,0");
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let p = pi_ij(a, &l, i, j).unwrap();
            assert!(is_primitive(&p).unwrap(), "π_{i}{j}");
            let lhs = phi_r_raw(&p).unwrap();
            let rhs = p.embed().unwrap().scale_i64(omega(&l, i, j));
            assert!(lhs.loc_eq(&rhs), "φ₁(π_{i}{j})");
        }
        assert_eq!(omega(&l, 2, 2), 0);
    }

    #[test]
    fn v_times_y_is_not_primitive() {
        let a = amb(2, 1);
        let l = w("2,1|0");
        let v = weights::highest_vector(a, &l).unwrap();
        let x = FloorElement::term(ExteriorMonomial::new(a, vec![(1, 3)]).unwrap(), v.clone());
        assert!(!is_primitive(&x).unwrap());
        assert!(is_primitive(&FloorElement::scalar_part(v)).unwrap());
    }

    #[test]
    fn inhomogeneous_is_usage_error() {
        let a = amb(2, 1);
        let x = FloorElement::scalar_part(LocalizedElement::parse(a, "+1·c[1,1] +1·c[1,2]").unwrap());
        assert!(matches!(is_primitive(&x), Err(Error::Usage(_))));
    }

    #[test]
    fn extract_round_trip() {
        let a = amb(2, 2);
        let l = w("2,1|1,0");
        let p = pi_ij(a, &l, 1, 2).unwrap();
        let back = floor_decompose(&p.embed().unwrap(), &l).unwrap();
        assert!(back.floors().unwrap().loc_eq(&p));
        let raw = LocalizedElement::parse(a, "+1·c[3,1]").unwrap();
        assert!(floor_decompose(&raw, &l).unwrap().floors().is_none());
    }

    #[test]
    fn gl22_combination() {
        let a = amb(2, 2);
        let l = w("3,3|1,0");
        let p1 = AdmissiblePair::new(2, 2, vec![1, 2], vec![1, 2]).unwrap();
        let p2 = AdmissiblePair::new(2, 2, vec![1, 2], vec![2, 1]).unwrap();
        let c1 = pi_candidate(a, &l, &p1).unwrap();
        let c2 = pi_candidate(a, &l, &p2).unwrap();
        assert!(c1.resolve().unwrap().element().is_none());
        assert!(c2.resolve().unwrap().element().is_none());
        let sum = c1.combine(-1, &c2, -1).unwrap().resolve().unwrap();
        let x = sum.element().expect("combination lies in the module");
        assert!(is_primitive(x).unwrap());
    }

    #[test]
    fn admissible_enumeration() {
        let all = AdmissiblePair::all(2, 2, 2);
        // (1,1)(1,2), (1,x)(2,y) × 4, (2,1)(2,2)
        assert_eq!(all.len(), 6);
        assert!(AdmissiblePair::new(2, 2, vec![1, 1], vec![2, 1]).is_err());
    }
}
