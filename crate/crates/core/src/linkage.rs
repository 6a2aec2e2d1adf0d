//! ω_{ij}, typicality, ρ and the bilinear form, the canonical alcove,
//! Donkin's block criterion for GL(k), even and odd linkage, link chains.

use std::collections::{BTreeSet, HashMap, VecDeque};

use itertools::Itertools;
use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::floors::AdmissiblePair;
use crate::scalar::Characteristic;
use crate::weights::Weight;

pub fn omega(lambda: &Weight, i: usize, j: usize) -> i64 {
    crate::floors::omega(lambda, i, j)
}

fn vanishes(x: i64, ch: Characteristic) -> bool {
    match ch {
        Characteristic::Zero => x == 0,
        Characteristic::Prime(p) => x.rem_euclid(p as i64) == 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaGrid {
    pub values: Vec<Vec<i64>>,
}

impl OmegaGrid {
    pub fn of(lambda: &Weight) -> Self {
        let (m, n) = (lambda.m(), lambda.n());
        OmegaGrid { values: (1..=m).map(|i| (1..=n).map(|j| omega(lambda, i, j)).collect()).collect() }
    }

    /// Cells (i, j) with ω_{ij} vanishing in the given characteristic.
    pub fn zeros(&self, ch: Characteristic) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if vanishes(v, ch) {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn is_typical(&self, ch: Characteristic) -> bool {
        self.zeros(ch).is_empty()
    }
}

pub fn is_typical(lambda: &Weight, ch: Characteristic) -> bool {
    OmegaGrid::of(lambda).is_typical(ch)
}

/// Coordinates of a weight in ε₁..ε_{m+n}.
pub type RationalWeight = Vec<Rational64>;

/// Positive roots of GL(m|n) as (a, b) meaning ε_a − ε_b, split by parity.
pub fn positive_roots(m: usize, n: usize) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let size = m + n;
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for a in 1..=size {
        for b in a + 1..=size {
            if (a <= m) == (b <= m) {
                even.push((a, b));
            } else {
                odd.push((a, b));
            }
        }
    }
    (even, odd)
}

/// Half the sum of positive even roots minus half the sum of positive odd roots.
pub fn rho(m: usize, n: usize) -> RationalWeight {
    let (even, odd) = positive_roots(m, n);
    let mut v = vec![Rational64::from_integer(0); m + n];
    let half = Rational64::new(1, 2);
    for (a, b) in even {
        v[a - 1] += half;
        v[b - 1] -= half;
    }
    for (a, b) in odd {
        v[a - 1] -= half;
        v[b - 1] += half;
    }
    v
}

/// (ε_i, ε_j) = δ_ij (−1)^{|ε_i|}.
#[derive(Clone, Copy, Debug)]
pub struct BilinearForm {
    pub m: usize,
    pub n: usize,
}

impl BilinearForm {
    pub fn signature(&self) -> Vec<i64> {
        (1..=self.m + self.n).map(|i| if i <= self.m { 1 } else { -1 }).collect()
    }

    pub fn pair(&self, x: &[Rational64], y: &[Rational64]) -> Rational64 {
        x.iter().zip(y).zip(self.signature()).map(|((a, b), s)| a * b * s).sum()
    }
}

pub fn to_rational(lambda: &Weight) -> RationalWeight {
    lambda.to_vec().into_iter().map(Rational64::from_integer).collect()
}

fn root(size: usize, a: usize, b: usize) -> RationalWeight {
    let mut v = vec![Rational64::from_integer(0); size];
    v[a - 1] += 1;
    v[b - 1] -= 1;
    v
}

fn shifted(lambda: &Weight) -> RationalWeight {
    let r = rho(lambda.m(), lambda.n());
    to_rational(lambda).into_iter().zip(r).map(|(a, b)| a + b).collect()
}

/// (λ + ρ, ε_i − ε_{m+j}), which equals ω_{ij}(λ).
pub fn omega_via_form(lambda: &Weight, i: usize, j: usize) -> Rational64 {
    let (m, n) = (lambda.m(), lambda.n());
    BilinearForm { m, n }.pair(&shifted(lambda), &root(m + n, i, m + j))
}

/// 0 < (λ+ρ, β^∨) < p over positive even coroots. In the odd block the form
/// is negative definite, so β^∨ = −β there.
pub fn in_alcove(lambda: &Weight, p: u32) -> Result<bool> {
    if p < 3 {
        return Err(Error::usage("the alcove needs an odd prime p"));
    }
    let (m, n) = (lambda.m(), lambda.n());
    let form = BilinearForm { m, n };
    let x = shifted(lambda);
    let (even, _) = positive_roots(m, n);
    let p = Rational64::from_integer(p as i64);
    Ok(even.into_iter().all(|(a, b)| {
        let mut beta = root(m + n, a, b);
        if a > m {
            beta.iter_mut().for_each(|c| *c = -*c);
        }
        let v = form.pair(&x, &beta);
        v > Rational64::from_integer(0) && v < p
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum DExponent {
    Finite(u32),
    /// No consecutive differences to constrain (a single entry).
    All,
}

fn valuation(mut x: i64, p: i64) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Largest d with μ_i − μ_{i+1} ≡ −1 (mod p^d) for every i.
pub fn d_exponent(mu: &[i64], p: u32) -> Result<DExponent> {
    if p < 3 || !crate::scalar::is_prime(p) {
        return Err(Error::usage(format!("d_exponent needs an odd prime, got {p}")));
    }
    if !mu.windows(2).all(|w| w[0] >= w[1]) {
        return Err(Error::usage(format!("{mu:?} is not dominant")));
    }
    Ok(mu
        .windows(2)
        .map(|w| valuation(w[0] - w[1] + 1, p as i64))
        .min()
        .map_or(DExponent::All, DExponent::Finite))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DonkinWitness {
    pub d: DExponent,
    /// σ as a 1-based image list: σ(i) = sigma[i−1].
    pub sigma: Vec<usize>,
}

/// Donkin's criterion for GL(k) blocks. Shifting both weights by a common
/// constant changes nothing, so non-polynomial dominant weights are accepted.
pub fn donkin_linked(mu: &[i64], nu: &[i64], p: u32) -> Result<Option<DonkinWitness>> {
    if mu.len() != nu.len() {
        return Err(Error::usage("donkin_linked needs weights of equal length"));
    }
    let d = d_exponent(mu, p)?;
    if d_exponent(nu, p)? != d {
        return Ok(None);
    }
    let key = |v: &[i64], i: usize| -> i64 {
        let x = v[i] - (i as i64 + 1);
        match d {
            DExponent::Finite(d) => x.rem_euclid((p as i64).pow(d + 1)),
            DExponent::All => x,
        }
    };
    // Match equal residues greedily; equal classes are interchangeable.
    let mut pool: HashMap<i64, Vec<usize>> = HashMap::new();
    for b in (0..nu.len()).rev() {
        pool.entry(key(nu, b)).or_default().push(b);
    }
    let mut sigma = Vec::with_capacity(mu.len());
    for a in 0..mu.len() {
        match pool.get_mut(&key(mu, a)).and_then(|v| v.pop()) {
            Some(b) => sigma.push(b + 1),
            None => return Ok(None),
        }
    }
    Ok(Some(DonkinWitness { d, sigma }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvenWitness {
    pub plus: DonkinWitness,
    pub minus: DonkinWitness,
}

pub fn even_linked(lambda: &Weight, mu: &Weight, p: u32) -> Result<Option<EvenWitness>> {
    if lambda.m() != mu.m() || lambda.n() != mu.n() {
        return Err(Error::usage("even_linked needs weights of the same shape"));
    }
    let Some(plus) = donkin_linked(&lambda.plus, &mu.plus, p)? else {
        return Ok(None);
    };
    let Some(minus) = donkin_linked(&lambda.minus, &mu.minus, p)? else {
        return Ok(None);
    };
    Ok(Some(EvenWitness { plus, minus }))
}

/// λ_{I'|J'} applied one pair at a time.
pub fn lambda_steps(lambda: &Weight, i: &[usize], j: &[usize]) -> Weight {
    i.iter().zip(j).fold(lambda.clone(), |acc, (&a, &b)| acc.lambda_ij(a, b))
}

/// Whether the sequence satisfies the chained conditions ω ≡ 0.
pub fn chain_condition(lambda: &Weight, i: &[usize], j: &[usize], ch: Characteristic) -> bool {
    let mut cur = lambda.clone();
    for (&a, &b) in i.iter().zip(j) {
        if !vanishes(omega(&cur, a, b), ch) {
            return false;
        }
        cur = cur.lambda_ij(a, b);
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddWitness {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

/// Condition C(I|J): some rearrangement satisfies the chained ω ≡ 0 conditions.
pub fn odd_linked(lambda: &Weight, p: &AdmissiblePair, ch: Characteristic) -> Result<Option<OddWitness>> {
    let (m, n) = (lambda.m(), lambda.n());
    lambda.check_sizes(m, n)?;
    let checked = AdmissiblePair::new(m, n, p.i.clone(), p.j.clone())?;
    let k = checked.len();
    let mut seen = BTreeSet::new();
    for pi in (0..k).permutations(k) {
        let ip: Vec<usize> = pi.iter().map(|&s| checked.i[s]).collect();
        for pj in (0..k).permutations(k) {
            let jp: Vec<usize> = pj.iter().map(|&s| checked.j[s]).collect();
            if !seen.insert((ip.clone(), jp.clone())) {
                continue;
            }
            if chain_condition(lambda, &ip, &jp, ch) {
                return Ok(Some(OddWitness { i: ip, j: jp }));
            }
        }
    }
    Ok(None)
}

/// Same W_af dot-orbit: per block, equal residue multisets of λ_a − a mod p
/// and equal block sums.
pub fn same_affine_orbit(lambda: &Weight, mu: &Weight, p: u32) -> bool {
    let block = |a: &[i64], b: &[i64]| {
        let res = |v: &[i64]| -> Vec<i64> {
            v.iter().enumerate().map(|(i, &x)| (x - i as i64).rem_euclid(p as i64)).sorted().collect()
        };
        a.iter().sum::<i64>() == b.iter().sum::<i64>() && res(a) == res(b)
    };
    block(&lambda.plus, &mu.plus) && block(&lambda.minus, &mu.minus)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkStep {
    /// α = ε_{m+j} − ε_i, recorded as (i, j).
    pub i: usize,
    pub j: usize,
    pub weight: Weight,
}

/// Breadth-first search for odd steps λ ↦ λ + α with (λ+ρ, α) = 0 ending in the
/// W_af dot-orbit of `target`.
pub fn link_chain_search(lambda: &Weight, target: &Weight, p: u32, max_steps: usize) -> Result<Option<Vec<LinkStep>>> {
    let (m, n) = (lambda.m(), lambda.n());
    target.check_sizes(m, n)?;
    if p < 3 {
        return Err(Error::usage("link_chain_search needs an odd prime p"));
    }
    let mut queue = VecDeque::from([(lambda.clone(), Vec::<LinkStep>::new())]);
    let mut visited = BTreeSet::from([lambda.to_vec()]);
    while let Some((cur, chain)) = queue.pop_front() {
        if same_affine_orbit(&cur, target, p) {
            return Ok(Some(chain));
        }
        if chain.len() == max_steps {
            continue;
        }
        for i in 1..=m {
            for j in 1..=n {
                if omega(&cur, i, j) != 0 {
                    continue;
                }
                let next = cur.lambda_ij(i, j);
                if visited.insert(next.to_vec()) {
                    let mut c = chain.clone();
                    c.push(LinkStep { i, j, weight: next.clone() });
                    queue.push_back((next, c));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Weight {
        Weight::parse(s).unwrap()
    }

    #[test]
    fn omega_grids() {
        assert_eq!(OmegaGrid::of(&w("2,1|1,0")).values, vec![vec![4, 2], vec![2, 0]]);
        let g = OmegaGrid::of(&w("2,2|0,0"));
        assert_eq!(g.values, vec![vec![3, 2], vec![2, 1]]);
        assert!(g.is_typical(Characteristic::Zero));
        assert!(!g.is_typical(Characteristic::Prime(3)));
    }

    #[test]
    fn rho_small() {
        let r = rho(2, 1);
        let ints: Vec<Rational64> = [0, -1, 1].iter().map(|&x| Rational64::from_integer(x)).collect();
        assert_eq!(r, ints);
    }

    #[test]
    fn alcove_examples() {
        assert!(in_alcove(&w("0|0"), 3).unwrap());
        assert!(in_alcove(&w("1,0|0"), 5).unwrap());
        assert!(!in_alcove(&w("5,0|0"), 5).unwrap());
    }

    #[test]
    fn d_exponents() {
        assert_eq!(d_exponent(&[1, 0], 5).unwrap(), DExponent::Finite(0));
        assert_eq!(d_exponent(&[4, 0], 5).unwrap(), DExponent::Finite(1));
        assert_eq!(d_exponent(&[7], 3).unwrap(), DExponent::All);
    }

    #[test]
    fn donkin_examples() {
        assert!(donkin_linked(&[1, 0], &[1, 0], 3).unwrap().is_some());
        assert!(donkin_linked(&[1, 0], &[4, 3], 3).unwrap().is_some());
        assert!(donkin_linked(&[1, 0], &[2, 0], 3).unwrap().is_none());
        assert!(donkin_linked(&[7], &[7], 3).unwrap().is_some());
        assert!(donkin_linked(&[7], &[10], 3).unwrap().is_none());
    }

    #[test]
    fn odd_linked_basics() {
        let l = w("2,1|1,0");
        let empty = AdmissiblePair::new(2, 2, vec![], vec![]).unwrap();
        assert!(odd_linked(&l, &empty, Characteristic::Zero).unwrap().is_some());
        let p22 = AdmissiblePair::new(2, 2, vec![2], vec![2]).unwrap();
        assert!(odd_linked(&l, &p22, Characteristic::Zero).unwrap().is_some());
        let p11 = AdmissiblePair::new(2, 2, vec![1], vec![1]).unwrap();
        assert!(odd_linked(&l, &p11, Characteristic::Zero).unwrap().is_none());
    }

    #[test]
    fn chain_single_step() {
        let l = w("2,1|1,0");
        assert_eq!(link_chain_search(&l, &l, 3, 2).unwrap().unwrap().len(), 0);
        let chain = link_chain_search(&l, &l.lambda_ij(2, 2), 3, 1).unwrap().unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!((chain[0].i, chain[0].j), (2, 2));
    }
}
