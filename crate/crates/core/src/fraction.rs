//! K[G]: fractions numerator / (D^s · D22^t) with D = det C11, D22 = det C22.

use std::fmt;

use crate::error::{Error, Result};
use crate::minors;
use crate::scalar::{Characteristic, Scalar};
use crate::superpoly::{Ambient, Parity, SuperPoly};
use crate::weights::Weight;

#[derive(Clone)]
pub struct LocalizedElement {
    num: SuperPoly,
    d_exp: u32,
    d22_exp: u32,
}

impl LocalizedElement {
    pub fn new(num: SuperPoly, d_exp: u32, d22_exp: u32) -> Self {
        LocalizedElement { num, d_exp, d22_exp }
    }

    pub fn from_poly(num: SuperPoly) -> Self {
        Self::new(num, 0, 0)
    }

    pub fn zero(amb: Ambient) -> Self {
        Self::from_poly(SuperPoly::zero(amb))
    }

    pub fn one(amb: Ambient) -> Self {
        Self::from_poly(SuperPoly::one(amb))
    }

    pub fn constant(amb: Ambient, c: Scalar) -> Self {
        Self::from_poly(SuperPoly::constant(amb, c))
    }

    pub fn ambient(&self) -> Ambient {
        self.num.ambient()
    }

    pub fn numerator(&self) -> &SuperPoly {
        &self.num
    }

    pub fn d_exp(&self) -> u32 {
        self.d_exp
    }

    pub fn d22_exp(&self) -> u32 {
        self.d22_exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn parity(&self) -> Option<Parity> {
        self.num.parity()
    }

    /// Numerator rewritten over D^s D22^t with s, t at least the current exponents.
    fn numerator_over(&self, s: u32, t: u32) -> SuperPoly {
        let amb = self.ambient();
        let mut num = self.num.clone();
        if s > self.d_exp {
            num = num.mul(&minors::det_c11(amb).pow(s - self.d_exp));
        }
        if t > self.d22_exp {
            num = num.mul(&minors::det_c22(amb).pow(t - self.d22_exp));
        }
        num
    }

    pub fn add(&self, other: &LocalizedElement) -> LocalizedElement {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let s = self.d_exp.max(other.d_exp);
        let t = self.d22_exp.max(other.d22_exp);
        let num = self.numerator_over(s, t).add(&other.numerator_over(s, t));
        LocalizedElement::new(num, s, t)
    }

    pub fn try_add(&self, other: &LocalizedElement) -> Result<LocalizedElement> {
        if self.ambient() != other.ambient() {
            return Err(Error::usage("loc_add across different ambients"));
        }
        Ok(self.add(other))
    }

    pub fn neg(&self) -> LocalizedElement {
        LocalizedElement::new(self.num.neg(), self.d_exp, self.d22_exp)
    }

    pub fn sub(&self, other: &LocalizedElement) -> LocalizedElement {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LocalizedElement) -> LocalizedElement {
        if self.is_zero() || other.is_zero() {
            return LocalizedElement::zero(self.ambient());
        }
        LocalizedElement::new(self.num.mul(&other.num), self.d_exp + other.d_exp, self.d22_exp + other.d22_exp)
    }

    pub fn try_mul(&self, other: &LocalizedElement) -> Result<LocalizedElement> {
        if self.ambient() != other.ambient() {
            return Err(Error::usage("loc_mul across different ambients"));
        }
        Ok(self.mul(other))
    }

    pub fn mul_poly(&self, p: &SuperPoly) -> LocalizedElement {
        LocalizedElement::new(self.num.mul(p), self.d_exp, self.d22_exp)
    }

    pub fn scale(&self, c: &Scalar) -> LocalizedElement {
        LocalizedElement::new(self.num.scale(c), self.d_exp, self.d22_exp)
    }

    pub fn scale_i64(&self, k: i64) -> LocalizedElement {
        LocalizedElement::new(self.num.scale_i64(k), self.d_exp, self.d22_exp)
    }

    pub fn pow(&self, e: u32) -> LocalizedElement {
        LocalizedElement::new(self.num.pow(e), self.d_exp * e, self.d22_exp * e)
    }

    /// Multiplies the denominator by D^ds D22^dt.
    pub fn divide_by_powers(&self, ds: u32, dt: u32) -> LocalizedElement {
        LocalizedElement::new(self.num.clone(), self.d_exp + ds, self.d22_exp + dt)
    }

    /// Equality in K[G], decided over a common denominator.
    pub fn loc_eq(&self, other: &LocalizedElement) -> bool {
        assert_eq!(self.ambient(), other.ambient(), "loc_eq across different ambients");
        if self.d_exp == other.d_exp && self.d22_exp == other.d22_exp {
            return self.num == other.num;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let s = self.d_exp.max(other.d_exp);
        let t = self.d22_exp.max(other.d22_exp);
        self.numerator_over(s, t) == other.numerator_over(s, t)
    }

    /// The polynomial represented, when the denominator divides the numerator.
    pub fn is_polynomial(&self) -> Option<SuperPoly> {
        let reduced = self.reduce();
        (reduced.d_exp == 0 && reduced.d22_exp == 0).then_some(reduced.num)
    }

    /// Cancels factors of D and D22 from the numerator while possible.
    pub fn reduce(&self) -> LocalizedElement {
        let amb = self.ambient();
        if self.is_zero() {
            return LocalizedElement::zero(amb);
        }
        let mut out = self.clone();
        let d = minors::det_c11(amb);
        while out.d_exp > 0 {
            match out.num.exact_divide(&d).expect("D is even and nonzero") {
                Some(q) => {
                    out.num = q;
                    out.d_exp -= 1;
                }
                None => break,
            }
        }
        let d22 = minors::det_c22(amb);
        while out.d22_exp > 0 {
            match out.num.exact_divide(&d22).expect("D22 is even and nonzero") {
                Some(q) => {
                    out.num = q;
                    out.d22_exp -= 1;
                }
                None => break,
            }
        }
        out
    }

    /// Weight of numerator minus the weights of the denominator factors.
    pub fn weight(&self) -> Option<Weight> {
        let amb = self.ambient();
        let (m, n) = (amb.m(), amb.n());
        let w = self.num.weight_of()?;
        let d = Weight::new(vec![self.d_exp as i64; m], vec![0; n]);
        let d22 = Weight::new(vec![0; m], vec![self.d22_exp as i64; n]);
        Some(w.sub(&d).sub(&d22))
    }

    pub fn lift(&self) -> LocalizedElement {
        LocalizedElement::new(self.num.lift(), self.d_exp, self.d22_exp)
    }

    pub fn reduce_into(&self, ch: Characteristic) -> Result<LocalizedElement> {
        Ok(LocalizedElement::new(self.num.reduce_into(ch)?, self.d_exp, self.d22_exp))
    }

    pub(crate) fn with_numerator(&self, num: SuperPoly) -> LocalizedElement {
        LocalizedElement::new(num, self.d_exp, self.d22_exp)
    }

    pub fn render(&self) -> String {
        format!("{} / D^{} D22^{}", self.num.render(), self.d_exp, self.d22_exp)
    }

    pub fn parse(amb: Ambient, text: &str) -> Result<LocalizedElement> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = compact.rfind("/D^") else {
            return Ok(LocalizedElement::from_poly(SuperPoly::parse(amb, &compact)?));
        };
        let num = SuperPoly::parse(amb, &compact[..pos])?;
        let tail = &compact[pos + 3..];
        let (s, t) = match tail.split_once("D22^") {
            Some((s, t)) => (s, t),
            None => (tail, "0"),
        };
        let s: u32 = s.parse().map_err(|_| Error::parse(format!("bad D exponent '{s}'")))?;
        let t: u32 = t.parse().map_err(|_| Error::parse(format!("bad D22 exponent '{t}'")))?;
        Ok(LocalizedElement::new(num, s, t))
    }
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Loc({})", self.render())
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
    fn add_over_d() {
        let a = amb(2, 1);
        let x = LocalizedElement::new(c(a, 1, 1), 1, 0);
        assert!(x.add(&x).loc_eq(&LocalizedElement::new(c(a, 1, 1).scale_i64(2), 1, 0)));
    }

    #[test]
    fn d_over_d_is_one() {
        let a = amb(2, 1);
        let x = LocalizedElement::new(minors::det_c11(a), 1, 0);
        assert!(x.loc_eq(&LocalizedElement::one(a)));
        let y = LocalizedElement::new(c(a, 1, 2), 1, 0).mul(&LocalizedElement::from_poly(minors::det_c11(a)));
        assert_eq!(y.is_polynomial(), Some(c(a, 1, 2)));
        assert!(y.reduce().loc_eq(&LocalizedElement::from_poly(c(a, 1, 2))));
        assert_eq!(y.reduce().d_exp(), 0);
    }

    #[test]
    fn equality_examples() {
        let a = amb(2, 1);
        let d = minors::det_c11(a);
        assert!(LocalizedElement::new(c(a, 1, 1).mul(&d), 1, 0).loc_eq(&LocalizedElement::from_poly(c(a, 1, 1))));
        assert!(!LocalizedElement::new(c(a, 1, 1), 1, 0).loc_eq(&LocalizedElement::new(c(a, 1, 2), 1, 0)));
        assert!(LocalizedElement::new(SuperPoly::zero(a), 1, 0).loc_eq(&LocalizedElement::zero(a)));
    }

    #[test]
    fn is_polynomial_examples() {
        let a = amb(2, 1);
        assert_eq!(LocalizedElement::new(c(a, 1, 2), 1, 0).is_polynomial(), None);
        assert_eq!(LocalizedElement::new(SuperPoly::zero(a), 1, 0).is_polynomial(), Some(SuperPoly::zero(a)));
        let b = amb(1, 2);
        let x = LocalizedElement::new(c(b, 2, 2).mul(&minors::det_c22(b)), 0, 1);
        assert_eq!(x.is_polynomial(), Some(c(b, 2, 2)));
    }

    #[test]
    fn text_round_trip() {
        let a = amb(2, 2);
        let x = LocalizedElement::new(c(a, 1, 3).mul(&c(a, 2, 4)).sub(&c(a, 1, 1)), 2, 1);
        let back = LocalizedElement::parse(a, &x.render()).unwrap();
        assert_eq!(back.render(), x.render());
        assert_eq!(x.render(), "-1·c[1,1] +1·c[1,3]·c[2,4] / D^2 D22^1");
        let half = LocalizedElement::parse(a, "+1/2·c[1,1] / D^1 D22^0").unwrap();
        assert_eq!(half.d_exp(), 1);
    }

    #[test]
    fn weight_subtracts_denominators() {
        let a = amb(2, 1);
        let x = LocalizedElement::new(c(a, 1, 3), 1, 0);
        assert_eq!(x.weight().unwrap(), Weight::parse("-1,-1|1").unwrap());
    }
}
