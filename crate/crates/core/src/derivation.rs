//! Right superderivations _{kl}D on A(m|n) and K[G], their divided powers,
//! and the binomial diagonal operators.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraction::LocalizedElement;
use crate::minors;
use crate::scalar::{factorial, Characteristic, Scalar};
use crate::superpoly::{Ambient, Monomial, Parity, SuperPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OpKind {
    Basic { k: usize, l: usize },
    Divided { k: usize, l: usize, r: u32 },
    Binomial { k: usize, r: u32 },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SuperDerivationOp {
    amb: Ambient,
    kind: OpKind,
}

impl SuperDerivationOp {
    pub fn basic(amb: Ambient, k: usize, l: usize) -> Result<Self> {
        amb.check_index(k)?;
        amb.check_index(l)?;
        Ok(SuperDerivationOp { amb, kind: OpKind::Basic { k, l } })
    }

    /// _{kl}^{(r)}D; only for even (k, l).
    pub fn divided(amb: Ambient, k: usize, l: usize, r: u32) -> Result<Self> {
        amb.check_index(k)?;
        amb.check_index(l)?;
        if r == 0 {
            return Err(Error::usage("divided powers need r ≥ 1"));
        }
        if amb.index_parity(k) != amb.index_parity(l) {
            return Err(Error::usage(format!("D[{k},{l}] is odd and has no divided powers")));
        }
        Ok(SuperDerivationOp { amb, kind: OpKind::Divided { k, l, r } })
    }

    /// binom(_{kk}D, r), evaluated as _{kk}D(_{kk}D+1)…(_{kk}D+r−1)/r!.
    pub fn binomial(amb: Ambient, k: usize, r: u32) -> Result<Self> {
        amb.check_index(k)?;
        if r == 0 {
            return Err(Error::usage("binomial operators need r ≥ 1"));
        }
        Ok(SuperDerivationOp { amb, kind: OpKind::Binomial { k, r } })
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn ambient(&self) -> Ambient {
        self.amb
    }

    pub fn parity(&self) -> Parity {
        match self.kind {
            OpKind::Basic { k, l } => self.amb.index_parity(k).add(self.amb.index_parity(l)),
            _ => Parity::Even,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == Parity::Odd
    }

    /// Weight added to a homogeneous element: ε_l − ε_k for _{kl}D.
    pub fn weight_shift(&self) -> Vec<i64> {
        let mut w = vec![0i64; self.amb.size()];
        match self.kind {
            OpKind::Basic { k, l } => {
                w[k - 1] -= 1;
                w[l - 1] += 1;
            }
            OpKind::Divided { k, l, r } => {
                w[k - 1] -= r as i64;
                w[l - 1] += r as i64;
            }
            OpKind::Binomial { .. } => {}
        }
        w
    }

    pub fn label(&self) -> String {
        match self.kind {
            OpKind::Basic { k, l } => format!("D[{k},{l}]"),
            OpKind::Divided { k, l, r } => format!("D[{k},{l}]^({r})"),
            OpKind::Binomial { k, r } => format!("binom(D[{k},{k}],{r})"),
        }
    }

    fn check_ambient(&self, other: Ambient) -> Result<()> {
        if self.amb != other {
            return Err(Error::usage(format!("{} is defined over {}, element over {}", self.label(), self.amb, other)));
        }
        Ok(())
    }
}

impl fmt::Debug for SuperDerivationOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.label(), self.amb)
    }
}

impl fmt::Display for SuperDerivationOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The operator through which the matrix unit e_{kl} acts: _{lk}D.
pub fn matrix_unit_op(amb: Ambient, k: usize, l: usize) -> Result<SuperDerivationOp> {
    SuperDerivationOp::basic(amb, l, k)
}

/// [e_ab, e_cd] = δ_bc e_ad − (−1)^{(|a|+|b|)(|c|+|d|)} δ_ad e_cb as
/// (coefficient, (row, column)) pairs.
pub fn matrix_unit_bracket(amb: Ambient, a: usize, b: usize, c: usize, d: usize) -> Vec<(i64, (usize, usize))> {
    let p = amb.index_parity(a).add(amb.index_parity(b));
    let q = amb.index_parity(c).add(amb.index_parity(d));
    let sign = if p == Parity::Odd && q == Parity::Odd { -1 } else { 1 };
    let mut out = Vec::new();
    if b == c {
        out.push((1, (a, d)));
    }
    if a == d {
        out.push((-sign, (c, b)));
    }
    out
}

/// (x)_{kl}D on a polynomial by the super-Leibniz rule, term by term.
fn basic_poly(amb: Ambient, k: usize, l: usize, x: &SuperPoly) -> SuperPoly {
    let op_odd = amb.index_parity(k) != amb.index_parity(l);
    let mut out: Vec<(Monomial, Scalar)> = Vec::new();
    for (mono, coeff) in x.terms() {
        for (slot, e) in mono.factors() {
            let (row, col) = amb.gen_of(slot);
            if col != k {
                continue;
            }
            // mono = lo · g^e · hi; the factor g^e becomes e·g^{e−1}·c_{row,l}
            let (head, hi) = mono.split_after(slot);
            let lo = head.without_one(slot);
            let replacement = Monomial::generator(&amb, row, l);
            let Some((s1, m1)) = lo.mul(&replacement) else { continue };
            let Some((s2, m2)) = m1.mul(&hi) else { continue };
            let leibniz = op_odd && hi.parity() == Parity::Odd;
            let mut c = coeff.mul_i64(e as i64);
            if s1 ^ s2 ^ leibniz {
                c = c.neg();
            }
            out.push((m2, c));
        }
    }
    SuperPoly::from_terms(amb, out)
}

enum Shift {
    Zero,
    Multiple(Scalar),
    General(SuperPoly),
}

fn classify(derived: SuperPoly, base: &SuperPoly) -> Shift {
    if derived.is_zero() {
        return Shift::Zero;
    }
    let (bm, bc) = base.leading().expect("nonzero determinant");
    if let Some((dm, dc)) = derived.leading() {
        if dm == bm {
            let c = dc.div(bc);
            if base.scale(&c) == derived {
                return Shift::Multiple(c);
            }
        }
    }
    Shift::General(derived)
}

/// Quotient rule for N / (D^s D22^t). Denominator exponents grow only when
/// (D)_{kl}D or (D22)_{kl}D is not a scalar multiple of the determinant.
fn basic_loc(k: usize, l: usize, x: &LocalizedElement) -> LocalizedElement {
    let amb = x.ambient();
    let n = x.numerator();
    let (s, t) = (x.d_exp(), x.d22_exp());
    let d = minors::det_c11(amb);
    let d22 = minors::det_c22(amb);
    let sd = if s > 0 { classify(basic_poly(amb, k, l, &d), &d) } else { Shift::Zero };
    let st = if t > 0 { classify(basic_poly(amb, k, l, &d22), &d22) } else { Shift::Zero };
    let bump_s = matches!(sd, Shift::General(_));
    let bump_t = matches!(st, Shift::General(_));
    let widen = |p: &SuperPoly| {
        let mut p = p.clone();
        if bump_s {
            p = p.mul(&d);
        }
        if bump_t {
            p = p.mul(&d22);
        }
        p
    };
    let mut num = widen(&basic_poly(amb, k, l, n));
    let mut shift = Scalar::zero(amb.characteristic());
    if let Shift::Multiple(c) = &sd {
        shift = shift.add(&c.mul_i64(s as i64));
    }
    if let Shift::Multiple(c) = &st {
        shift = shift.add(&c.mul_i64(t as i64));
    }
    if !shift.is_zero() {
        num = num.sub(&widen(n).scale(&shift));
    }
    if let Shift::General(dd) = &sd {
        let mut term = n.mul(dd);
        if bump_t {
            term = term.mul(&d22);
        }
        num = num.sub(&term.scale_i64(s as i64));
    }
    if let Shift::General(dd) = &st {
        let mut term = n.clone();
        if bump_s {
            term = term.mul(&d);
        }
        num = num.sub(&term.mul(dd).scale_i64(t as i64));
    }
    LocalizedElement::new(num, s + bump_s as u32, t + bump_t as u32)
}

fn inverse_factorial(r: u32) -> Scalar {
    Scalar::from_rational(BigRational::new(BigInt::from(1), factorial(r)))
}

/// Runs `f` on the characteristic-zero lift, divides by r!, and reduces back.
fn through_lift(
    x: &LocalizedElement,
    r: u32,
    f: impl Fn(&LocalizedElement) -> LocalizedElement,
) -> Result<LocalizedElement> {
    let ch = x.ambient().characteristic();
    match ch {
        Characteristic::Zero => Ok(f(x).scale(&inverse_factorial(r))),
        Characteristic::Prime(_) => {
            let lifted = f(&x.lift()).scale(&inverse_factorial(r));
            lifted.reduce_into(ch)
        }
    }
}

pub fn apply_loc(op: &SuperDerivationOp, x: &LocalizedElement) -> Result<LocalizedElement> {
    op.check_ambient(x.ambient())?;
    match op.kind {
        OpKind::Basic { k, l } => Ok(basic_loc(k, l, x)),
        OpKind::Divided { k, l, r } => through_lift(x, r, |y| (0..r).fold(y.clone(), |acc, _| basic_loc(k, l, &acc))),
        OpKind::Binomial { k, r } => through_lift(x, r, |y| {
            (0..r).fold(y.clone(), |acc, i| basic_loc(k, k, &acc).add(&acc.scale_i64(i as i64)))
        }),
    }
}

pub fn apply_poly(op: &SuperDerivationOp, a: &SuperPoly) -> Result<SuperPoly> {
    op.check_ambient(a.ambient())?;
    if let OpKind::Basic { k, l } = op.kind {
        return Ok(basic_poly(a.ambient(), k, l, a));
    }
    let out = apply_loc(op, &LocalizedElement::from_poly(a.clone()))?;
    debug_assert_eq!((out.d_exp(), out.d22_exp()), (0, 0));
    Ok(out.numerator().clone())
}

/// (x)_{kl}^{(r)}D for r = 1, 2, … up to `max_r`, built as x^{(r)} = (x^{(r−1)})_{kl}D / r
/// over ℤ and reduced back. Stops once the ℤ-form result vanishes, since all
/// later divided powers vanish with it.
pub fn divided_powers(k: usize, l: usize, x: &LocalizedElement, max_r: u32) -> Result<Vec<LocalizedElement>> {
    let amb = x.ambient();
    amb.check_index(k)?;
    amb.check_index(l)?;
    let ch = amb.characteristic();
    let mut current = x.lift();
    let mut out = Vec::new();
    for r in 1..=max_r {
        let next = basic_loc(k, l, &current);
        current = next.scale(&Scalar::from_rational(BigRational::new(BigInt::from(1), BigInt::from(r))));
        if current.is_zero() {
            break;
        }
        out.push(current.reduce_into(ch)?);
    }
    Ok(out)
}

/// (x) op₁ op₂ … op_r, composed left to right.
pub fn apply_seq(ops: &[SuperDerivationOp], x: &LocalizedElement) -> Result<LocalizedElement> {
    ops.iter().try_fold(x.clone(), |acc, op| apply_loc(op, &acc))
}

/// Compares the supercommutator of two basic right actions on `sample` with
/// the bracket of the corresponding matrix units. Right actions reverse the
/// order: [_{ij}D, _{kl}D] acts as [e_{lk}, e_{ji}] translated back.
pub fn bracket_check_loc(a: &SuperDerivationOp, b: &SuperDerivationOp, sample: &LocalizedElement) -> Result<bool> {
    let (OpKind::Basic { k: i, l: j }, OpKind::Basic { k, l }) = (a.kind, b.kind) else {
        return Err(Error::usage("bracket_check needs two basic derivations"));
    };
    a.check_ambient(sample.ambient())?;
    b.check_ambient(sample.ambient())?;
    let amb = sample.ambient();
    let ab = apply_loc(b, &apply_loc(a, sample)?)?;
    let ba = apply_loc(a, &apply_loc(b, sample)?)?;
    let lhs = if a.is_odd() && b.is_odd() { ab.add(&ba) } else { ab.sub(&ba) };
    let mut rhs = LocalizedElement::zero(amb);
    for (coeff, (r, c)) in matrix_unit_bracket(amb, l, k, j, i) {
        let op = matrix_unit_op(amb, r, c)?;
        rhs = rhs.add(&apply_loc(&op, sample)?.scale_i64(coeff));
    }
    Ok(lhs.loc_eq(&rhs))
}

pub fn bracket_check(a: &SuperDerivationOp, b: &SuperDerivationOp, sample: &SuperPoly) -> Result<bool> {
    bracket_check_loc(a, b, &LocalizedElement::from_poly(sample.clone()))
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

    fn basic(a: Ambient, k: usize, l: usize) -> SuperDerivationOp {
        SuperDerivationOp::basic(a, k, l).unwrap()
    }

    #[test]
    fn generator_rule() {
        let a = amb(2, 1);
        assert_eq!(apply_poly(&basic(a, 1, 2), &c(a, 1, 1)).unwrap(), c(a, 1, 2));
        assert!(apply_poly(&basic(a, 2, 1), &c(a, 1, 1)).unwrap().is_zero());
    }

    #[test]
    fn leibniz_even() {
        let a = amb(2, 1);
        let x = c(a, 1, 1).mul(&c(a, 2, 1));
        let expected = c(a, 1, 2).mul(&c(a, 2, 1)).add(&c(a, 1, 1).mul(&c(a, 2, 2)));
        assert_eq!(apply_poly(&basic(a, 1, 2), &x).unwrap(), expected);
    }

    #[test]
    fn leibniz_in_the_odd_block() {
        // D[3,4] is even at m = 2, so no sign appears
        let a = amb(2, 2);
        let x = c(a, 1, 3).mul(&c(a, 2, 3));
        let expected = c(a, 1, 4).mul(&c(a, 2, 3)).add(&c(a, 1, 3).mul(&c(a, 2, 4)));
        assert_eq!(apply_poly(&basic(a, 3, 4), &x).unwrap(), expected);
    }

    #[test]
    fn odd_operator_sign() {
        // (c11 c23) D[1,3] = −c13 c23: the odd operator passes the odd c23
        let a = amb(2, 2);
        let x = c(a, 1, 1).mul(&c(a, 2, 3));
        let expected = c(a, 1, 3).mul(&c(a, 2, 3)).neg();
        assert_eq!(apply_poly(&basic(a, 1, 3), &x).unwrap(), expected);
    }

    #[test]
    fn quotient_rule_examples() {
        let a = amb(2, 1);
        let y13 = minors::y(a, 1, 3).unwrap();
        assert!(apply_loc(&basic(a, 1, 3), &y13).unwrap().loc_eq(&LocalizedElement::zero(a)));
        assert!(apply_loc(&basic(a, 3, 1), &y13).unwrap().loc_eq(&LocalizedElement::one(a)));
        let inv_d = LocalizedElement::new(SuperPoly::one(a), 1, 0);
        assert!(apply_loc(&basic(a, 1, 2), &inv_d).unwrap().loc_eq(&LocalizedElement::zero(a)));
        let d11 = apply_loc(&basic(a, 1, 1), &inv_d).unwrap();
        assert!(d11.loc_eq(&inv_d.neg()));
        assert_eq!(d11.d_exp(), 1);
    }

    #[test]
    fn divided_powers() {
        let a = amb(2, 1);
        let x = c(a, 1, 1).pow(3);
        let op = SuperDerivationOp::divided(a, 1, 2, 2).unwrap();
        let expected = c(a, 1, 1).mul(&c(a, 1, 2).pow(2)).scale_i64(3);
        assert_eq!(apply_poly(&op, &x).unwrap(), expected);
        assert!(SuperDerivationOp::divided(a, 1, 3, 2).is_err());

        let p = Ambient::new(2, 1, Characteristic::Prime(3)).unwrap();
        let xp = SuperPoly::generator(p, 1, 1).unwrap().pow(3);
        let opp = SuperDerivationOp::divided(p, 1, 2, 3).unwrap();
        assert_eq!(apply_poly(&opp, &xp).unwrap(), SuperPoly::generator(p, 1, 2).unwrap().pow(3));
    }

    #[test]
    fn binomial_operator() {
        let a = amb(2, 1);
        let x = c(a, 1, 1).pow(3);
        let op = SuperDerivationOp::binomial(a, 1, 2).unwrap();
        // rising factorial: 3·4/2 = 6
        assert_eq!(apply_poly(&op, &x).unwrap(), x.scale_i64(6));
    }

    #[test]
    fn bracket_examples() {
        let a = amb(2, 1);
        assert!(bracket_check(&basic(a, 1, 3), &basic(a, 1, 3), &c(a, 1, 1)).unwrap());
        assert!(bracket_check(&basic(a, 1, 2), &basic(a, 2, 1), &c(a, 1, 1)).unwrap());
        assert!(bracket_check(&basic(a, 1, 3), &basic(a, 3, 2), &c(a, 1, 2)).unwrap());
        assert!(bracket_check(&basic(a, 1, 3), &basic(a, 3, 2), &c(a, 1, 1)).unwrap());
    }

    #[test]
    fn bracket_exhaustive_on_generators() {
        let a = amb(2, 1);
        for ops in (0..81).map(|x| (x / 27 + 1, x / 9 % 3 + 1, x / 3 % 3 + 1, x % 3 + 1)) {
            let (i, j, k, l) = ops;
            for r in 1..=3 {
                for s in 1..=3 {
                    let x = c(a, r, s).mul(&c(a, 3, 3));
                    assert!(bracket_check(&basic(a, i, j), &basic(a, k, l), &x).unwrap(), "{ops:?} on c{r}{s}c33");
                }
            }
        }
    }
}
