//! Rational functions num/den over ℚ, normalized by content and monomial factors only.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::mpoly::MPoly;
use super::rat::{rbig, Rat};
use crate::error::{GciError, Result};

#[derive(Clone, Debug)]
pub struct RatFn {
    num: MPoly,
    den: MPoly,
}

impl RatFn {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(GciError::Structural("zero denominator".into()));
        }
        if num.arity() != den.arity() {
            return Err(GciError::Usage(
                "arity mismatch between numerator and denominator".into(),
            ));
        }
        Ok(RatFn::normalized(num, den))
    }

    pub fn from_poly(p: MPoly) -> Self {
        let den = MPoly::one(p.arity());
        RatFn { num: p, den }
    }

    pub fn constant(arity: usize, c: Rat) -> Self {
        RatFn::from_poly(MPoly::constant(arity, c))
    }

    pub fn zero(arity: usize) -> Self {
        RatFn::from_poly(MPoly::zero(arity))
    }

    fn normalized(num: MPoly, den: MPoly) -> Self {
        let arity = num.arity();
        if num.is_zero() {
            return RatFn {
                num,
                den: MPoly::one(arity),
            };
        }
        // cancel the common monomial factor
        let gn = num.monomial_gcd();
        let gd = den.monomial_gcd();
        let g: Vec<u32> = gn.iter().zip(&gd).map(|(a, b)| *a.min(b)).collect();
        let (mut num, mut den) = if g.iter().any(|&k| k > 0) {
            (num.div_monomial(&g).unwrap(), den.div_monomial(&g).unwrap())
        } else {
            (num, den)
        };
        // a denominator that divides the numerator exactly is cleared
        if !den.is_constant() && den.num_terms() <= num.num_terms() {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = MPoly::one(arity);
            }
        }
        // joint content reduction
        let (ln, gn) = num.content_parts();
        let (ld, gd) = den.content_parts();
        let l = num_integer::Integer::lcm(&ln, &ld);
        let g = num_integer::Integer::gcd(&gn, &gd);
        let factor = Rat::new(l, g);
        let mut num = num.scale(&factor);
        let mut den = den.scale(&factor);
        if den.is_negative_leading() {
            num = -&num;
            den = -&den;
        }
        if den.is_constant() {
            let c = den.constant_term();
            if !c.is_one() {
                num = num.scale(&(Rat::one() / c));
                den = MPoly::one(arity);
            }
        }
        RatFn { num, den }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn arity(&self) -> usize {
        self.num.arity()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this function equals, when the denominator divides the numerator.
    pub fn as_poly(&self) -> Option<MPoly> {
        if self.den.is_constant() {
            return Some(self.num.scale(&(Rat::one() / self.den.constant_term())));
        }
        self.num.div_exact(&self.den)
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(GciError::Pole(
                "denominator vanishes at evaluation point".into(),
            ));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Substitutes each variable by a rational function of a common arity.
    pub fn subst(&self, subs: &[RatFn]) -> Result<RatFn> {
        Ok(subst_poly(&self.num, subs)? / subst_poly(&self.den, subs)?)
    }

    pub fn deriv(&self, var: usize) -> RatFn {
        let n = &(&self.num.deriv(var) * &self.den) - &(&self.num * &self.den.deriv(var));
        let d = &self.den * &self.den;
        RatFn::normalized(n, d)
    }

    pub fn pow(&self, k: i32) -> RatFn {
        if k >= 0 {
            RatFn::normalized(self.num.pow(k as u32), self.den.pow(k as u32))
        } else {
            assert!(!self.num.is_zero(), "negative power of zero");
            RatFn::normalized(self.den.pow((-k) as u32), self.num.pow((-k) as u32))
        }
    }

    pub fn scale(&self, c: &Rat) -> RatFn {
        RatFn::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn recip(&self) -> Result<RatFn> {
        if self.num.is_zero() {
            return Err(GciError::Structural("reciprocal of zero".into()));
        }
        Ok(RatFn::normalized(self.den.clone(), self.num.clone()))
    }
}

fn subst_poly(p: &MPoly, subs: &[RatFn]) -> Result<RatFn> {
    if subs.len() != p.arity() {
        return Err(GciError::Usage("need one substitute per variable".into()));
    }
    let target = subs.first().map(|r| r.arity()).unwrap_or(0);
    let mut out = RatFn::zero(target);
    let mut cache: Vec<Vec<RatFn>> = subs
        .iter()
        .map(|r| vec![RatFn::constant(target, Rat::one()), r.clone()])
        .collect();
    for (e, c) in p.terms() {
        let mut t = RatFn::constant(target, c.clone());
        for (i, &k) in e.iter().enumerate() {
            let k = k as usize;
            while cache[i].len() <= k {
                let next = &cache[i][cache[i].len() - 1] * &subs[i];
                cache[i].push(next);
            }
            if k > 0 {
                t = &t * &cache[i][k];
            }
        }
        out = &out + &t;
    }
    Ok(out)
}

/// a = b decided by cross-multiplication.
pub fn ratfn_eq(a: &RatFn, b: &RatFn) -> Result<bool> {
    if a.arity() != b.arity() {
        return Err(GciError::Usage("arity mismatch".into()));
    }
    Ok(&a.num * &b.den == &b.num * &a.den)
}

impl PartialEq for RatFn {
    fn eq(&self, o: &RatFn) -> bool {
        ratfn_eq(self, o).unwrap_or(false)
    }
}

impl<'a> Add<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn add(self, o: &'a RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::normalized(&self.num + &o.num, self.den.clone());
        }
        RatFn::normalized(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<'a> Sub<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn sub(self, o: &'a RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::normalized(&self.num - &o.num, self.den.clone());
        }
        RatFn::normalized(
            &(&self.num * &o.den) - &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<'a> Mul<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn mul(self, o: &'a RatFn) -> RatFn {
        RatFn::normalized(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a> Div<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn div(self, o: &'a RatFn) -> RatFn {
        assert!(!o.num.is_zero(), "division by the zero rational function");
        RatFn::normalized(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Div for RatFn {
    type Output = RatFn;
    fn div(self, o: RatFn) -> RatFn {
        &self / &o
    }
}

impl Add for RatFn {
    type Output = RatFn;
    fn add(self, o: RatFn) -> RatFn {
        &self + &o
    }
}

impl Sub for RatFn {
    type Output = RatFn;
    fn sub(self, o: RatFn) -> RatFn {
        &self - &o
    }
}

impl Mul for RatFn {
    type Output = RatFn;
    fn mul(self, o: RatFn) -> RatFn {
        &self * &o
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Rational functions of (s, t).
pub mod st {
    use super::*;
    use crate::exact::mpoly::st as p;

    pub fn s() -> RatFn {
        RatFn::from_poly(p::s())
    }
    pub fn t() -> RatFn {
        RatFn::from_poly(p::t())
    }
    pub fn ci(x: i64) -> RatFn {
        RatFn::constant(2, rbig(x.into()))
    }
    pub fn c(x: Rat) -> RatFn {
        RatFn::constant(2, x)
    }
    pub fn show(f: &RatFn) -> String {
        if f.den().is_constant() {
            p::show(&f.num().scale(&(Rat::one() / f.den().constant_term())))
        } else {
            format!("({}) / ({})", p::show(f.num()), p::show(f.den()))
        }
    }

    pub fn zero() -> RatFn {
        RatFn::zero(2)
    }
}
