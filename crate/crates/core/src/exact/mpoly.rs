//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::Rat;

/// Terms keyed by exponent vector; the map order is lexicographic, so the last key is the
/// lex-leading monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero(arity: usize) -> Self {
        MPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rat) -> Self {
        let mut p = MPoly::zero(arity);
        if !c.is_zero() {
            p.terms.insert(vec![0; arity], c);
        }
        p
    }

    pub fn one(arity: usize) -> Self {
        MPoly::constant(arity, Rat::one())
    }

    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index out of range");
        let mut e = vec![0; arity];
        e[i] = 1;
        MPoly::monomial(e, Rat::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Rat) -> Self {
        let mut p = MPoly::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds from (exponents, coefficient) pairs, merging duplicates.
    pub fn from_terms(arity: usize, it: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = MPoly::zero(arity);
        for (e, c) in it {
            assert_eq!(e.len(), arity, "exponent vector length must equal arity");
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial in variable `var` from coefficients c_0, c_1, …
    pub fn univariate(arity: usize, var: usize, coeffs: &[Rat]) -> Self {
        let mut p = MPoly::zero(arity);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; arity];
            e[var] = k as u32;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.arity])
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Total degree; −1 for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum::<i64>())
            .max()
            .unwrap_or(-1)
    }

    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|e| e[var] as i64).max().unwrap_or(-1)
    }

    /// Smallest exponent of `var` over all terms (0 for the zero polynomial).
    pub fn min_degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Vec<u32>, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.arity);
        }
        MPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(self.arity);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.arity, "evaluation point has wrong length");
        let maxdeg: Vec<u32> = (0..self.arity)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Rat>> = (0..self.arity)
            .map(|i| {
                let mut v = vec![Rat::one()];
                for k in 1..=maxdeg[i] as usize {
                    let next = &v[k - 1] * &x[i];
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= &powers[i][k as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes variable i by `subs[i]`; all substitutes share one target arity.
    pub fn subst(&self, subs: &[MPoly]) -> MPoly {
        assert_eq!(subs.len(), self.arity, "need one substitute per variable");
        let target = subs.first().map(|p| p.arity).unwrap_or(0);
        let mut cache: Vec<Vec<MPoly>> = subs
            .iter()
            .map(|p| vec![MPoly::one(p.arity), p.clone()])
            .collect();
        let mut out = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
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
        out
    }

    pub fn deriv(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(self.arity);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut f = e.clone();
                f[var] -= 1;
                out.add_term(f, c * Rat::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// Reorders/renames variables: variable i becomes variable `perm[i]` of a polynomial of
    /// arity `new_arity`.
    pub fn rename(&self, perm: &[usize], new_arity: usize) -> MPoly {
        let mut out = MPoly::zero(new_arity);
        for (e, c) in &self.terms {
            let mut f = vec![0u32; new_arity];
            for (i, &k) in e.iter().enumerate() {
                f[perm[i]] += k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Divides by the monomial with exponents `m`, if every term is divisible.
    pub fn div_monomial(&self, m: &[u32]) -> Option<MPoly> {
        let mut out = MPoly::zero(self.arity);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            for i in 0..self.arity {
                if f[i] < m[i] {
                    return None;
                }
                f[i] -= m[i];
            }
            out.terms.insert(f, c.clone());
        }
        Some(out)
    }

    pub fn mul_monomial(&self, m: &[u32]) -> MPoly {
        MPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Largest monomial dividing every term.
    pub fn monomial_gcd(&self) -> Vec<u32> {
        (0..self.arity).map(|i| self.min_degree_in(i)).collect()
    }

    /// Exact division in lex order; `None` when `g` does not divide `self`.
    pub fn div_exact(&self, g: &MPoly) -> Option<MPoly> {
        let (lg_e, lg_c) = g.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut q = MPoly::zero(self.arity);
        while let Some((le, lc)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let mut e = le.clone();
            for i in 0..self.arity {
                if e[i] < lg_e[i] {
                    return None;
                }
                e[i] -= lg_e[i];
            }
            let c = &lc / &lg_c;
            let t = MPoly::monomial(e, c);
            r = &r - &(&t * g);
            q = &q + &t;
        }
        Some(q)
    }

    /// (lcm of coefficient denominators, gcd of coefficient numerators).
    pub fn content_parts(&self) -> (BigInt, BigInt) {
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        (l, g)
    }

    /// True when swapping variables a and b leaves the polynomial unchanged.
    pub fn is_symmetric_in(&self, a: usize, b: usize) -> bool {
        let mut perm: Vec<usize> = (0..self.arity).collect();
        perm.swap(a, b);
        &self.rename(&perm, self.arity) == self
    }

    pub fn is_antisymmetric_in(&self, a: usize, b: usize) -> bool {
        let mut perm: Vec<usize> = (0..self.arity).collect();
        perm.swap(a, b);
        self.rename(&perm, self.arity) == -self
    }

    /// Human-readable form with the given variable names.
    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let n = names
                        .get(i)
                        .map(|s| s.to_string())
                        .unwrap_or_else(|| format!("x{i}"));
                    if k == 1 {
                        n
                    } else {
                        format!("{n}^{k}")
                    }
                })
                .collect();
            let cs = if c.is_integer() {
                c.numer().to_string()
            } else {
                format!("({c})")
            };
            let s = if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono.join("*")
            } else if (-c).is_one() {
                format!("-{}", mono.join("*"))
            } else {
                format!("{}*{}", cs, mono.join("*"))
            };
            parts.push(s);
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }

    pub fn is_negative_leading(&self) -> bool {
        self.leading()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, o: &'a MPoly) -> MPoly {
        assert_eq!(self.arity, o.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, o: &'a MPoly) -> MPoly {
        assert_eq!(self.arity, o.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, o: &'a MPoly) -> MPoly {
        assert_eq!(self.arity, o.arity, "arity mismatch");
        let mut acc: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                match acc.get_mut(&e) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MPoly {
            arity: self.arity,
            terms: acc,
        }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, o: MPoly) -> MPoly {
        &self + &o
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, o: MPoly) -> MPoly {
        &self - &o
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, o: MPoly) -> MPoly {
        &self * &o
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.arity).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.fmt_with(&refs))
    }
}

/// Polynomial ring in (s, t): variable 0 is s, variable 1 is t.
pub mod st {
    use super::*;

    pub fn s() -> MPoly {
        MPoly::var(2, 0)
    }
    pub fn t() -> MPoly {
        MPoly::var(2, 1)
    }
    pub fn c(x: Rat) -> MPoly {
        MPoly::constant(2, x)
    }
    pub fn ci(x: i64) -> MPoly {
        MPoly::constant(2, Rat::from_integer(x.into()))
    }
    pub fn show(p: &MPoly) -> String {
        p.fmt_with(&["s", "t"])
    }
}
