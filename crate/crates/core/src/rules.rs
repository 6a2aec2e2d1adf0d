//! Closed-form actions of basic superderivations on y_{ij}, φ(c_{ij}) and the
//! determinants D⁺, D⁻, kept as formal expressions over those symbols.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::derivation::{OpKind, SuperDerivationOp};
use crate::error::{Error, Result};
use crate::fraction::LocalizedElement;
use crate::minors;
use crate::superpoly::Ambient;
use crate::weights;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "symbol", content = "indices")]
pub enum Symbol {
    /// y_{ij}, i ≤ m < j.
    Y(usize, usize),
    /// φ(c_{ij}), both indices > m.
    Phi(usize, usize),
    /// D⁺(i₁, …, i_s) = C(1..s | i₁..i_s).
    DPlus(Vec<usize>),
    /// D⁻(j₁, …, j_s), the minor of φ(C22) on rows m+1..m+s.
    DMinus(Vec<usize>),
}

impl Symbol {
    pub fn validate(&self, amb: Ambient) -> Result<()> {
        let (m, size) = (amb.m(), amb.size());
        let plus = |i: usize| (1..=m).contains(&i);
        let minus = |j: usize| j > m && j <= size;
        let ok = match self {
            Symbol::Y(i, j) => plus(*i) && minus(*j),
            Symbol::Phi(i, j) => minus(*i) && minus(*j),
            Symbol::DPlus(is) => !is.is_empty() && is.len() <= m && is.iter().all(|&i| plus(i)),
            Symbol::DMinus(js) => !js.is_empty() && js.len() <= amb.n() && js.iter().all(|&j| minus(j)),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::usage(format!("{self} is out of range for {amb}")))
        }
    }

    pub fn evaluate(&self, amb: Ambient) -> Result<LocalizedElement> {
        self.validate(amb)?;
        match self {
            Symbol::Y(i, j) => minors::y(amb, *i, *j),
            Symbol::Phi(i, j) => minors::phi(amb, *i, *j),
            Symbol::DPlus(is) => Ok(LocalizedElement::from_poly(weights::dplus(amb, is)?)),
            Symbol::DMinus(js) => weights::dminus(amb, js),
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).join(",")
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Y(i, j) => write!(f, "y[{i},{j}]"),
            Symbol::Phi(i, j) => write!(f, "phi(c[{i},{j}])"),
            Symbol::DPlus(is) => write!(f, "D+({})", join(is)),
            Symbol::DMinus(js) => write!(f, "D-({})", join(js)),
        }
    }
}

/// coefficient · ordered product of symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormalTerm {
    pub coeff: i64,
    pub factors: Vec<Symbol>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FormalExpr {
    pub terms: Vec<FormalTerm>,
}

impl FormalExpr {
    pub fn zero() -> Self {
        FormalExpr::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut e = FormalExpr::zero();
        e.push(c, vec![]);
        e
    }

    fn push(&mut self, coeff: i64, factors: Vec<Symbol>) {
        if coeff != 0 {
            self.terms.push(FormalTerm { coeff, factors });
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, amb: Ambient) -> Result<LocalizedElement> {
        let mut total = LocalizedElement::zero(amb);
        for term in &self.terms {
            let mut prod = LocalizedElement::one(amb);
            for s in &term.factors {
                prod = prod.mul(&s.evaluate(amb)?);
            }
            total = total.add(&prod.scale_i64(term.coeff));
        }
        Ok(total)
    }
}

impl fmt::Display for FormalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts = self.terms.iter().map(|t| {
            let body = if t.factors.is_empty() { "1".to_string() } else { t.factors.iter().join("·") };
            format!("{}{}·{}", if t.coeff < 0 { "-" } else { "+" }, t.coeff.unsigned_abs(), body)
        });
        f.write_str(&parts.collect::<Vec<_>>().join(" "))
    }
}

/// Which closed form applies; named by target and by the block of (k, l).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    YOddRaise,
    YOddLower,
    YEvenMinus,
    YEvenPlus,
    PhiOddRaise,
    PhiOddLower,
    PhiEvenMinus,
    PhiEvenPlus,
    DMinusOddRaise,
    DMinusOddLower,
    DMinusEvenMinus,
    DMinusEvenPlus,
    DPlusOddRaise,
    DPlusEvenPlus,
    DPlusFromMinusRow,
}

impl Rule {
    pub const ALL: [Rule; 15] = [
        Rule::YOddRaise,
        Rule::YOddLower,
        Rule::YEvenMinus,
        Rule::YEvenPlus,
        Rule::PhiOddRaise,
        Rule::PhiOddLower,
        Rule::PhiEvenMinus,
        Rule::PhiEvenPlus,
        Rule::DMinusOddRaise,
        Rule::DMinusOddLower,
        Rule::DMinusEvenMinus,
        Rule::DMinusEvenPlus,
        Rule::DPlusOddRaise,
        Rule::DPlusEvenPlus,
        Rule::DPlusFromMinusRow,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Rule::YOddRaise => "y.k<=m<l",
            Rule::YOddLower => "y.l<=m<k",
            Rule::YEvenMinus => "y.k,l>m",
            Rule::YEvenPlus => "y.k,l<=m",
            Rule::PhiOddRaise => "phi.k<=m<l",
            Rule::PhiOddLower => "phi.l<=m<k",
            Rule::PhiEvenMinus => "phi.k,l>m",
            Rule::PhiEvenPlus => "phi.k,l<=m",
            Rule::DMinusOddRaise => "dminus.k<=m<l",
            Rule::DMinusOddLower => "dminus.l<=m<k",
            Rule::DMinusEvenMinus => "dminus.k,l>m",
            Rule::DMinusEvenPlus => "dminus.k,l<=m",
            Rule::DPlusOddRaise => "dplus.k<=m<l",
            Rule::DPlusEvenPlus => "dplus.k,l<=m",
            Rule::DPlusFromMinusRow => "dplus.k>m",
        }
    }

    /// The closed form, with i, k ≤ m and j, l > m unless the id says otherwise.
    pub fn formula(&self) -> &'static str {
        match self {
            Rule::YOddRaise => "(y_ij)D_kl = y_il y_kj",
            Rule::YOddLower => "(y_ij)D_lk = δ_ik δ_jl",
            Rule::YEvenMinus => "(y_ij)D_kl = δ_jk y_il",
            Rule::YEvenPlus => "(y_ij)D_kl = -δ_li y_kj",
            Rule::PhiOddRaise => "(φ(c_ij))D_kl = φ(c_il) y_kj",
            Rule::PhiOddLower => "(φ(c_ij))D_lk = 0",
            Rule::PhiEvenMinus => "(φ(c_ij))D_kl = δ_jk φ(c_il)",
            Rule::PhiEvenPlus => "(φ(c_ij))D_kl = 0",
            Rule::DMinusOddRaise => "(D-(j_1..j_s))D_kl = Σ_t D-(j_1..l..j_s) y_{k j_t}",
            Rule::DMinusOddLower => "(D-(j_1..j_s))D_lk = 0",
            Rule::DMinusEvenMinus => "(D-(j_1..j_s))D_kl = Σ_{t: j_t=k} D-(j_1..l..j_s)",
            Rule::DMinusEvenPlus => "(D-(j_1..j_s))D_kl = 0",
            Rule::DPlusOddRaise => "(D+(i_1..i_s))D_kl = Σ_a D+(i_1..a..i_s) y_al where i_t = k",
            Rule::DPlusEvenPlus => "(D+(i_1..i_s))D_kl = D+(i_1..l..i_s) where i_t = k",
            Rule::DPlusFromMinusRow => "(D+(i_1..i_s))D_kl = 0 for k > m",
        }
    }
}

fn replace(v: &[usize], t: usize, x: usize) -> Vec<usize> {
    let mut out = v.to_vec();
    out[t] = x;
    out
}

/// The closed-form right-hand side for a basic derivation applied to `target`.
pub fn structured_rule(op: &SuperDerivationOp, target: &Symbol) -> Result<(Rule, FormalExpr)> {
    let OpKind::Basic { k, l } = op.kind() else {
        return Err(Error::usage("structured rules cover basic derivations only"));
    };
    let amb = op.ambient();
    target.validate(amb)?;
    let m = amb.m();
    let (k_plus, l_plus) = (k <= m, l <= m);
    let mut e = FormalExpr::zero();
    let rule = match target {
        Symbol::Y(i, j) => match (k_plus, l_plus) {
            (true, false) => {
                e.push(1, vec![Symbol::Y(*i, l), Symbol::Y(k, *j)]);
                Rule::YOddRaise
            }
            (false, true) => {
                if *i == l && *j == k {
                    e = FormalExpr::constant(1);
                }
                Rule::YOddLower
            }
            (false, false) => {
                if *j == k {
                    e.push(1, vec![Symbol::Y(*i, l)]);
                }
                Rule::YEvenMinus
            }
            (true, true) => {
                if l == *i {
                    e.push(-1, vec![Symbol::Y(k, *j)]);
                }
                Rule::YEvenPlus
            }
        },
        Symbol::Phi(i, j) => match (k_plus, l_plus) {
            (true, false) => {
                e.push(1, vec![Symbol::Phi(*i, l), Symbol::Y(k, *j)]);
                Rule::PhiOddRaise
            }
            (false, true) => Rule::PhiOddLower,
            (false, false) => {
                if *j == k {
                    e.push(1, vec![Symbol::Phi(*i, l)]);
                }
                Rule::PhiEvenMinus
            }
            (true, true) => Rule::PhiEvenPlus,
        },
        Symbol::DMinus(js) => match (k_plus, l_plus) {
            (true, false) => {
                for (t, &jt) in js.iter().enumerate() {
                    e.push(1, vec![Symbol::DMinus(replace(js, t, l)), Symbol::Y(k, jt)]);
                }
                Rule::DMinusOddRaise
            }
            (false, true) => Rule::DMinusOddLower,
            (false, false) => {
                for (t, &jt) in js.iter().enumerate() {
                    if jt == k {
                        e.push(1, vec![Symbol::DMinus(replace(js, t, l))]);
                    }
                }
                Rule::DMinusEvenMinus
            }
            (true, true) => Rule::DMinusEvenPlus,
        },
        Symbol::DPlus(is) => {
            if is.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::usage("D⁺ rules need strictly increasing indices"));
            }
            let hit = is.iter().position(|&i| i == k);
            match (k_plus, l_plus) {
                (true, false) => {
                    if let Some(t) = hit {
                        for a in 1..=m {
                            e.push(1, vec![Symbol::DPlus(replace(is, t, a)), Symbol::Y(a, l)]);
                        }
                    }
                    Rule::DPlusOddRaise
                }
                (true, true) => {
                    if let Some(t) = hit {
                        e.push(1, vec![Symbol::DPlus(replace(is, t, l))]);
                    }
                    Rule::DPlusEvenPlus
                }
                (false, _) => Rule::DPlusFromMinusRow,
            }
        }
    };
    Ok((rule, e))
}

/// Every target the closed forms cover at this ambient: all y_{ij}, all
/// φ(c_{ij}) in C22, all increasing D⁺ index sets and all D⁻ tuples.
pub fn all_targets(amb: Ambient) -> Vec<Symbol> {
    let (m, n, size) = (amb.m(), amb.n(), amb.size());
    let mut out = Vec::new();
    for i in 1..=m {
        for j in m + 1..=size {
            out.push(Symbol::Y(i, j));
        }
    }
    for i in m + 1..=size {
        for j in m + 1..=size {
            out.push(Symbol::Phi(i, j));
        }
    }
    for s in 1..=m {
        for is in (1..=m).combinations(s) {
            out.push(Symbol::DPlus(is));
        }
    }
    for s in 1..=n {
        for js in std::iter::repeat(m + 1..=size).take(s).multi_cartesian_product() {
            out.push(Symbol::DMinus(js));
        }
    }
    out
}

/// One comparison of a closed form against the quotient-rule computation.
#[derive(Clone, Debug, Serialize)]
pub struct RuleCheck {
    pub rule: &'static str,
    pub formula: &'static str,
    pub op: String,
    pub target: String,
    pub rhs: String,
    pub pass: bool,
}

pub fn check_rule(op: &SuperDerivationOp, target: &Symbol) -> Result<RuleCheck> {
    let amb = op.ambient();
    let (rule, expr) = structured_rule(op, target)?;
    let raw = crate::derivation::apply_loc(op, &target.evaluate(amb)?)?;
    let closed = expr.evaluate(amb)?;
    Ok(RuleCheck {
        rule: rule.id(),
        formula: rule.formula(),
        op: op.label(),
        target: target.to_string(),
        rhs: expr.to_string(),
        pass: raw.loc_eq(&closed),
    })
}

/// All (op, target) pairs at this ambient, checked in parallel.
pub fn check_all(amb: Ambient) -> Result<Vec<RuleCheck>> {
    use rayon::prelude::*;
    let size = amb.size();
    let targets = all_targets(amb);
    let mut jobs = Vec::new();
    for k in 1..=size {
        for l in 1..=size {
            for t in &targets {
                jobs.push((SuperDerivationOp::basic(amb, k, l)?, t.clone()));
            }
        }
    }
    jobs.par_iter().map(|(op, t)| check_rule(op, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Characteristic;

    fn amb(m: usize, n: usize) -> Ambient {
        Ambient::new(m, n, Characteristic::Zero).unwrap()
    }

    fn basic(a: Ambient, k: usize, l: usize) -> SuperDerivationOp {
        SuperDerivationOp::basic(a, k, l).unwrap()
    }

    #[test]
    fn examples() {
        let a = amb(2, 2);
        let (rule, e) = structured_rule(&basic(a, 2, 4), &Symbol::Y(1, 3)).unwrap();
        assert_eq!(rule, Rule::YOddRaise);
        assert_eq!(e.to_string(), "+1·y[1,4]·y[2,3]");

        let b = amb(2, 1);
        let (_, e) = structured_rule(&basic(b, 1, 3), &Symbol::DMinus(vec![3])).unwrap();
        assert_eq!(e.to_string(), "+1·D-(3)·y[1,3]");
        let (rule, e) = structured_rule(&basic(b, 3, 1), &Symbol::DPlus(vec![1, 2])).unwrap();
        assert_eq!(rule, Rule::DPlusFromMinusRow);
        assert!(e.is_zero());
    }

    #[test]
    fn out_of_range_targets() {
        let a = amb(2, 1);
        assert!(structured_rule(&basic(a, 1, 3), &Symbol::Y(3, 3)).is_err());
        assert!(structured_rule(&basic(a, 1, 3), &Symbol::DPlus(vec![2, 1])).is_err());
        let div = SuperDerivationOp::divided(a, 1, 2, 2).unwrap();
        assert!(structured_rule(&div, &Symbol::Y(1, 3)).is_err());
    }

    #[test]
    fn every_rule_small() {
        for (m, n) in [(1, 1), (2, 1), (1, 2)] {
            let checks = check_all(amb(m, n)).unwrap();
            let failed: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
            assert!(failed.is_empty(), "({m},{n}): {failed:?}");
        }
    }
}
