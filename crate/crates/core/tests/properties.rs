use std::collections::BTreeMap;

use itertools::Itertools;
use proptest::prelude::*;

use superinduce_core::floors::{self, AdmissiblePair, ExteriorMonomial, FloorElement};
use superinduce_core::linalg::{self, SparseVec};
use superinduce_core::linkage;
use superinduce_core::lr;
use superinduce_core::minors;
use superinduce_core::scalar::Characteristic;
use superinduce_core::superpoly::{Ambient, Monomial};
use superinduce_core::weights::{self, Weight};

fn partition(max_len: usize, max_part: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..=max_part, 0..=max_len).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v.retain(|&x| x > 0);
        v
    })
}

fn dominant(m: usize, n: usize, max: i64) -> impl Strategy<Value = Weight> {
    let sorted = |len: usize| {
        prop::collection::vec(0..=max, len).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        })
    };
    (sorted(m), sorted(n)).prop_map(|(p, q)| Weight::new(p, q))
}

fn contains(outer: &[usize], inner: &[usize]) -> bool {
    inner.len() <= outer.len() && inner.iter().zip(outer).all(|(a, b)| a <= b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lr_orders_agree(outer in partition(4, 5), inner in partition(3, 4), content in partition(3, 4)) {
        prop_assume!(contains(&outer, &inner));
        let a = lr::lr_coefficient(&outer, &inner, &content).unwrap();
        let b = lr::lr_coefficient_columnwise(&outer, &inner, &content).unwrap();
        prop_assert_eq!(a.count, b.count);
        let tableaux = lr::lr_tableaux(&outer, &inner, &content).unwrap();
        prop_assert_eq!(tableaux.len() as u64, a.count);
        for t in &tableaux {
            prop_assert!(t.is_semistandard());
            prop_assert!(lr::is_lattice_word(&t.reverse_reading_word()));
        }
    }

    #[test]
    fn transpose_is_an_involution(p in partition(6, 6)) {
        let t = weights::transpose(&p);
        prop_assert!(weights::is_partition(&t));
        prop_assert_eq!(t.iter().sum::<usize>(), p.iter().sum::<usize>());
        prop_assert_eq!(weights::transpose(&t), p);
    }

    /// c^λ_{μ,(k)} is 1 on horizontal strips and 0 otherwise.
    #[test]
    fn pieri_rule(outer in partition(4, 5), inner in partition(4, 5)) {
        prop_assume!(contains(&outer, &inner));
        let k = outer.iter().sum::<usize>() - inner.iter().sum::<usize>();
        let c = lr::lr_coefficient(&outer, &inner, &[k]).unwrap().count;
        let strip = lr::is_horizontal_strip(&outer, &inner);
        prop_assert_eq!(c, u64::from(strip && k > 0) + u64::from(k == 0));
    }

    #[test]
    fn omega_is_invariant_under_berezinian_twist(
        plus in prop::collection::vec(-6i64..=6, 1..=3),
        minus in prop::collection::vec(-6i64..=6, 1..=3),
        t in -5i64..=5,
    ) {
        let lambda = Weight::new(plus, minus);
        let (m, n) = (lambda.m(), lambda.n());
        let twisted = lambda.add(&Weight::beta(m, n).scale(t));
        for (i, j) in (1..=m).cartesian_product(1..=n) {
            prop_assert_eq!(linkage::omega(&lambda, i, j), linkage::omega(&twisted, i, j));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// The unique highest-height term of π_ij is y_{i,m+j}.
    #[test]
    fn pi_ij_leading_term(lambda in dominant(2, 2, 4), i in 1usize..=2, j in 1usize..=2) {
        prop_assume!(floors::first_floor_violation(&lambda, i, j).is_none());
        let a = Ambient::new(2, 2, Characteristic::Zero).unwrap();
        let x = floors::pi_ij(a, &lambda, i, j).unwrap();
        let lead = x.leading();
        prop_assert_eq!(lead.len(), 1);
        prop_assert_eq!(lead[0].0.pairs(), &[(i, 2 + j)][..]);
        prop_assert_eq!(x.weight(), Some(lambda.lambda_ij(i, j)));
    }

    /// Swapping two odd factors changes the sign of the wedge and of φ_2.
    #[test]
    fn wedge_koszul_sign(a in (1usize..=2, 1usize..=2), b in (1usize..=2, 1usize..=2)) {
        prop_assume!(a != b);
        let amb = Ambient::new(2, 2, Characteristic::Zero).unwrap();
        let ra = floors::rho(amb, a.0, a.1).unwrap();
        let rb = floors::rho(amb, b.0, b.1).unwrap();
        let ab = ra.wedge(&rb);
        let ba = rb.wedge(&ra);
        prop_assert!(ab.add(&ba).is_zero());
        let (pa, pb) = (floors::phi_r_raw(&ab).unwrap(), floors::phi_r_raw(&ba).unwrap());
        prop_assert!(pa.add(&pb).is_zero());
        prop_assert!(ra.wedge(&ra).is_zero());
    }
}

/// Coefficients brought to the common denominator D^s D22^t and flattened.
fn flatten(x: &FloorElement, s: u32, t: u32) -> SparseVec<(ExteriorMonomial, Monomial)> {
    let amb = x.ambient();
    let mut out = BTreeMap::new();
    for (mono, c) in x.terms() {
        let num = c
            .numerator()
            .mul(&minors::det_c11(amb).pow(s - c.d_exp()))
            .mul(&minors::det_c22(amb).pow(t - c.d22_exp()));
        for (m, v) in num.terms() {
            out.insert((mono.clone(), *m), v.clone());
        }
    }
    out
}

#[test]
fn robust_pi_pairs_of_equal_content_are_independent() {
    let amb = Ambient::new(2, 2, Characteristic::Zero).unwrap();
    let mut families = 0;
    for lambda in [Weight::new(vec![4, 3], vec![2, 0]), Weight::new(vec![5, 3], vec![3, 1]), Weight::new(vec![4, 2], vec![3, 1])] {
        let pairs = AdmissiblePair::all(2, 2, 2);
        let groups: BTreeMap<Weight, Vec<&AdmissiblePair>> =
            pairs.iter().fold(BTreeMap::new(), |mut acc, p| {
                acc.entry(p.content(2, 2)).or_default().push(p);
                acc
            });
        for (content, group) in groups {
            let target = lambda.add(&content);
            if !target.is_dominant() || !group.iter().all(|p| floors::is_robust(&lambda, p)) {
                continue;
            }
            let xs: Vec<FloorElement> = group
                .iter()
                .map(|p| floors::pi_pair(amb, &lambda, p).unwrap().element().cloned().expect("robust"))
                .collect();
            let s = xs.iter().flat_map(|x| x.terms().map(|(_, c)| c.d_exp())).max().unwrap_or(0);
            let t = xs.iter().flat_map(|x| x.terms().map(|(_, c)| c.d22_exp())).max().unwrap_or(0);
            let rank = linalg::rank(Characteristic::Zero, xs.iter().map(|x| flatten(x, s, t)));
            assert_eq!(rank, xs.len(), "λ = {lambda}, content {content}");
            families += 1;
        }
    }
    assert!(families > 0);
}

#[test]
fn donkin_linkage_is_an_equivalence() {
    for p in [3, 5] {
        for k in 1..=3 {
            let ws: Vec<Vec<i64>> = (0..k)
                .map(|_| 0..=6i64)
                .multi_cartesian_product()
                .filter(|v| v.windows(2).all(|w| w[0] >= w[1]))
                .collect();
            let linked = |a: &[i64], b: &[i64]| linkage::donkin_linked(a, b, p).unwrap().is_some();
            let rel: Vec<Vec<bool>> = ws.iter().map(|a| ws.iter().map(|b| linked(a, b)).collect()).collect();
            for x in 0..ws.len() {
                assert!(rel[x][x], "reflexive at {:?}", ws[x]);
                for y in 0..ws.len() {
                    assert_eq!(rel[x][y], rel[y][x], "symmetric at {:?} {:?}", ws[x], ws[y]);
                    if rel[x][y] {
                        for z in 0..ws.len() {
                            assert!(!rel[y][z] || rel[x][z], "transitive at {:?} {:?} {:?}", ws[x], ws[y], ws[z]);
                        }
                    }
                }
            }
        }
    }
}

/// Donkin's criterion against a brute-force search over all permutations.
#[test]
fn donkin_matches_permutation_search() {
    let p = 3u32;
    let ws: Vec<Vec<i64>> =
        (0..3).map(|_| 0..=5i64).multi_cartesian_product().filter(|v| v.windows(2).all(|w| w[0] >= w[1])).collect();
    for a in &ws {
        for b in &ws {
            let d = linkage::d_exponent(a, p).unwrap();
            let same_d = d == linkage::d_exponent(b, p).unwrap();
            let modulus = match d {
                linkage::DExponent::Finite(d) => Some((p as i64).pow(d + 1)),
                linkage::DExponent::All => None,
            };
            let brute = same_d
                && (0..3).permutations(3).any(|s| {
                    (0..3).all(|i| {
                        let (x, y) = (a[i] - i as i64, b[s[i]] - s[i] as i64);
                        modulus.map_or(x == y, |q| (x - y).rem_euclid(q) == 0)
                    })
                });
            assert_eq!(linkage::donkin_linked(a, b, p).unwrap().is_some(), brute, "{a:?} {b:?}");
        }
    }
}
