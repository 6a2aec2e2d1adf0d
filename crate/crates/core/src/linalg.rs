//! Exact sparse row reduction over the coefficient field.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use crate::scalar::{Characteristic, Scalar};

pub type SparseVec<K> = BTreeMap<K, Scalar>;

struct Row<K> {
    vec: SparseVec<K>,
    combo: Vec<Scalar>,
}

/// Incremental echelon form. Each row's pivot is its largest key, scaled to 1,
/// and remembers which combination of inserted vectors produced it.
pub struct Echelon<K: Ord + Clone + Hash> {
    ch: Characteristic,
    rows: HashMap<K, Row<K>>,
    inserted: usize,
}

fn axpy<K: Ord + Clone>(target: &mut SparseVec<K>, c: &Scalar, x: &SparseVec<K>) {
    for (k, v) in x {
        let delta = c.mul(v);
        match target.get_mut(k) {
            Some(t) => {
                *t = t.add(&delta);
                if t.is_zero() {
                    target.remove(k);
                }
            }
            None => {
                target.insert(k.clone(), delta);
            }
        }
    }
}

fn combo_axpy(target: &mut Vec<Scalar>, c: &Scalar, x: &[Scalar]) {
    if target.len() < x.len() {
        let ch = c.characteristic();
        target.resize(x.len(), Scalar::zero(ch));
    }
    for (t, v) in target.iter_mut().zip(x) {
        *t = t.add(&c.mul(v));
    }
}

impl<K: Ord + Clone + Hash> Echelon<K> {
    pub fn new(ch: Characteristic) -> Self {
        Echelon { ch, rows: HashMap::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows; returns the remainder and the
    /// combination of inserted vectors that was subtracted.
    fn reduce(&self, mut v: SparseVec<K>) -> (SparseVec<K>, Vec<Scalar>) {
        let mut used = vec![Scalar::zero(self.ch); self.inserted];
        let mut done: SparseVec<K> = BTreeMap::new();
        while let Some((k, c)) = v.pop_last() {
            match self.rows.get(&k) {
                Some(row) => {
                    let mut rest = row.vec.clone();
                    rest.remove(&k);
                    axpy(&mut v, &c.neg(), &rest);
                    combo_axpy(&mut used, &c, &row.combo);
                }
                None => {
                    done.insert(k, c);
                }
            }
        }
        (done, used)
    }

    /// Adds a vector; `true` when it was independent of the previous ones.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let (rem, used) = self.reduce(v);
        let Some((pivot, lead)) = rem.last_key_value().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.inv();
        let vec: SparseVec<K> = rem.into_iter().map(|(k, c)| (k, c.mul(&inv))).collect();
        let mut combo = vec![Scalar::zero(self.ch); self.inserted];
        combo[index] = Scalar::one(self.ch);
        combo_axpy(&mut combo, &Scalar::one(self.ch).neg(), &used);
        let combo = combo.into_iter().map(|c| c.mul(&inv)).collect();
        self.rows.insert(pivot, Row { vec, combo });
        true
    }

    /// Coefficients x with Σ x_i v_i = target over the inserted vectors, if any.
    pub fn solve(&self, target: SparseVec<K>) -> Option<Vec<Scalar>> {
        let (rem, mut used) = self.reduce(target);
        if !rem.is_empty() {
            return None;
        }
        used.resize(self.inserted, Scalar::zero(self.ch));
        Some(used)
    }
}

pub fn rank<K: Ord + Clone + Hash>(ch: Characteristic, vectors: impl IntoIterator<Item = SparseVec<K>>) -> usize {
    let mut e = Echelon::new(ch);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, c)| (k, Scalar::Int(c))).collect()
    }

    #[test]
    fn rank_and_solve() {
        let mut e = Echelon::new(Characteristic::Zero);
        assert!(e.insert(v(&[(0, 1), (1, 2)])));
        assert!(e.insert(v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(v(&[(0, 2), (1, 5), (2, 1)])));
        assert_eq!(e.rank(), 2);
        let x = e.solve(v(&[(0, 1), (1, 3), (2, 1)])).unwrap();
        assert_eq!(x[0], Scalar::Int(1));
        assert_eq!(x[1], Scalar::Int(1));
        assert!(e.solve(v(&[(3, 1)])).is_none());
    }

    #[test]
    fn modular_rank() {
        let p = Characteristic::Prime(3);
        let a: SparseVec<u32> = [(0, Scalar::from_i64(1, p)), (1, Scalar::from_i64(1, p))].into();
        let b: SparseVec<u32> = [(0, Scalar::from_i64(2, p)), (1, Scalar::from_i64(5, p))].into();
        assert_eq!(rank(p, [a.clone(), b.clone()]), 1);
        let az: SparseVec<u32> = [(0, Scalar::Int(1)), (1, Scalar::Int(1))].into();
        let bz: SparseVec<u32> = [(0, Scalar::Int(2)), (1, Scalar::Int(5))].into();
        assert_eq!(rank(Characteristic::Zero, [az, bz]), 2);
    }
}
