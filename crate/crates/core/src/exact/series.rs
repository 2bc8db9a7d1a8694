//! Truncated power series in one variable and in the chiral pair (u, v).

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::mpoly::MPoly;
use super::rat::Rat;
use super::ratfn::RatFn;
use crate::error::{GciError, Result};

/// Σ_{k ≤ order} c_k x^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series1 {
    coeffs: Vec<Rat>,
}

impl Series1 {
    pub fn zero(order: usize) -> Self {
        Series1 {
            coeffs: vec![Rat::zero(); order + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least a constant term");
        Series1 { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Series1 {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, Rat::zero());
        Series1 { coeffs: c }
    }

    pub fn scale(&self, c: &Rat) -> Series1 {
        Series1 {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by x^k, keeping the order.
    pub fn shift(&self, k: isize) -> Series1 {
        let n = self.coeffs.len() as isize;
        let coeffs = (0..n)
            .map(|i| {
                let j = i - k;
                if j >= 0 && j < n {
                    self.coeffs[j as usize].clone()
                } else {
                    Rat::zero()
                }
            })
            .collect();
        Series1 { coeffs }
    }

    pub fn mul(&self, o: &Series1) -> Series1 {
        let n = self.order().min(o.order());
        let mut c = vec![Rat::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if !o.coeffs[j].is_zero() {
                    c[i + j] += &self.coeffs[i] * &o.coeffs[j];
                }
            }
        }
        Series1 { coeffs: c }
    }

    /// Leading zero count (None for the zero series).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

/// Σ_{i+j ≤ N} c_{ij} u^i v^j with total-degree truncation; dense triangular storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series2 {
    order: usize,
    coeffs: Vec<Rat>,
}

fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

impl Series2 {
    pub fn zero(order: usize) -> Self {
        Series2 {
            order,
            coeffs: vec![Rat::zero(); (order + 1) * (order + 2) / 2],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Series2::zero(order);
        s.coeffs[0] = Rat::one();
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        if i + j > self.order {
            return Rat::zero();
        }
        self.coeffs[idx(i, j)].clone()
    }

    pub fn get_ref(&self, i: usize, j: usize) -> &Rat {
        &self.coeffs[idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Rat) {
        assert!(
            i + j <= self.order,
            "exponent pair exceeds truncation order"
        );
        self.coeffs[idx(i, j)] = c;
    }

    pub fn add_at(&mut self, i: usize, j: usize, c: &Rat) {
        if i + j <= self.order {
            self.coeffs[idx(i, j)] += c;
        }
    }

    /// Nonzero coefficients as ((i, j), c).
    pub fn nonzero(&self) -> Vec<((usize, usize), Rat)> {
        let mut out = Vec::new();
        for d in 0..=self.order {
            for j in 0..=d {
                let c = &self.coeffs[idx(d - j, j)];
                if !c.is_zero() {
                    out.push(((d - j, j), c.clone()));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Polynomial in (u, v) truncated at total degree `order`.
    pub fn from_poly(p: &MPoly, order: usize) -> Self {
        assert_eq!(p.arity(), 2, "Series2 needs a bivariate polynomial");
        let mut s = Series2::zero(order);
        for (e, c) in p.terms() {
            let (i, j) = (e[0] as usize, e[1] as usize);
            if i + j <= order {
                s.coeffs[idx(i, j)] += c;
            }
        }
        s
    }

    pub fn to_poly(&self) -> MPoly {
        MPoly::from_terms(
            2,
            self.nonzero()
                .into_iter()
                .map(|((i, j), c)| (vec![i as u32, j as u32], c)),
        )
    }

    /// F(v)·a(u) − F(u)·a(v) style outer combination: Σ x_i y_j u^i v^j.
    pub fn outer(x: &Series1, y: &Series1, order: usize) -> Self {
        let mut s = Series2::zero(order);
        for i in 0..=order.min(x.order()) {
            let xi = x.coeff(i);
            if xi.is_zero() {
                continue;
            }
            for j in 0..=(order - i).min(y.order()) {
                let yj = y.coeff(j);
                if !yj.is_zero() {
                    s.coeffs[idx(i, j)] = &xi * &yj;
                }
            }
        }
        s
    }

    pub fn truncate(&self, order: usize) -> Series2 {
        let mut s = Series2::zero(order);
        for d in 0..=order.min(self.order) {
            for j in 0..=d {
                s.coeffs[idx(d - j, j)] = self.coeffs[idx(d - j, j)].clone();
            }
        }
        s
    }

    pub fn scale(&self, c: &Rat) -> Series2 {
        Series2 {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by u^a v^b within the same order.
    pub fn shift(&self, a: usize, b: usize) -> Series2 {
        let mut s = Series2::zero(self.order);
        if a + b > self.order {
            return s;
        }
        for d in 0..=(self.order - a - b) {
            for j in 0..=d {
                let i = d - j;
                s.coeffs[idx(i + a, j + b)] = self.coeffs[idx(i, j)].clone();
            }
        }
        s
    }

    /// u ↔ v.
    pub fn swap(&self) -> Series2 {
        let mut s = Series2::zero(self.order);
        for d in 0..=self.order {
            for j in 0..=d {
                s.coeffs[idx(j, d - j)] = self.coeffs[idx(d - j, j)].clone();
            }
        }
        s
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.swap() == -self
    }

    pub fn is_symmetric(&self) -> bool {
        &self.swap() == self
    }

    /// Coefficient of v^k as a series in u (order N − k).
    pub fn v_coeff(&self, k: usize) -> Series1 {
        if k > self.order {
            return Series1::zero(0);
        }
        Series1::from_coeffs(
            (0..=(self.order - k))
                .map(|i| self.coeffs[idx(i, k)].clone())
                .collect(),
        )
    }

    pub fn mul(&self, o: &Series2) -> Series2 {
        let n = self.order.min(o.order);
        let mut s = Series2::zero(n);
        let a: Vec<((usize, usize), Rat)> = self.truncate(n).nonzero();
        let b: Vec<((usize, usize), Rat)> = o.truncate(n).nonzero();
        for ((i1, j1), c1) in &a {
            for ((i2, j2), c2) in &b {
                if i1 + j1 + i2 + j2 <= n {
                    s.coeffs[idx(i1 + i2, j1 + j2)] += c1 * c2;
                }
            }
        }
        s
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Series2> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(GciError::PoleAtOrigin(
                "series has zero constant term".into(),
            ));
        }
        let inv0 = Rat::one() / &c0;
        let n = self.order;
        let mut r = Series2::zero(n);
        r.coeffs[0] = inv0.clone();
        let nz = self.nonzero();
        for d in 1..=n {
            for j in 0..=d {
                let i = d - j;
                // Σ_{(a,b) ≠ (0,0)} s_{ab} r_{i−a, j−b} = −s_00 r_{ij}
                let mut acc = Rat::zero();
                for ((a, b), c) in &nz {
                    if (*a, *b) == (0, 0) || *a > i || *b > j {
                        continue;
                    }
                    acc += c * &r.coeffs[idx(i - a, j - b)];
                }
                r.coeffs[idx(i, j)] = -(acc * &inv0);
            }
        }
        Ok(r)
    }

    /// Exact division of an antisymmetric series by (u − v); the result has order N − 1.
    pub fn div_antisym(&self) -> Result<Series2> {
        series2_div_antisym(self)
    }
}

/// g with (u − v)·g = f through order N − 1, for antisymmetric f.
pub fn series2_div_antisym(f: &Series2) -> Result<Series2> {
    if !f.is_antisymmetric() {
        return Err(GciError::Structural(
            "numerator is not antisymmetric under u <-> v".into(),
        ));
    }
    let n = f.order;
    if n == 0 {
        return Ok(Series2::zero(0));
    }
    let mut g = Series2::zero(n - 1);
    // (u − v)g at (i, j): g_{i−1, j} − g_{i, j−1} = f_{ij}; solve along each diagonal from j = 0
    for d in 0..n {
        // coefficient (d+1, 0) of f fixes g_{d,0}; then g_{d−j, j} = g_{d−j+1, j−1}... via f_{d−j+1, j}
        g.coeffs[idx(d, 0)] = f.coeffs[idx(d + 1, 0)].clone();
        for j in 1..=d {
            let i = d - j;
            // f_{i+1, j} = g_{i, j} − g_{i+1, j−1}
            let v = &f.coeffs[idx(i + 1, j)] + &g.coeffs[idx(i + 1, j - 1)];
            g.coeffs[idx(i, j)] = v;
        }
        // the last equation f_{0, d+1} = −g_{0, d} must hold
        if f.coeffs[idx(0, d + 1)] != -g.coeffs[idx(0, d)].clone() {
            return Err(GciError::Structural(
                "residue in division by (u - v)".into(),
            ));
        }
    }
    Ok(g)
}

/// Expansion of f(s, t) with s = uv, t = (1−u)(1−v) to total order N.
pub fn expand_to_chiral(f: &RatFn, order: usize) -> Result<Series2> {
    if f.arity() != 2 {
        return Err(GciError::Usage(
            "expand_to_chiral needs a function of (s, t)".into(),
        ));
    }
    let num = chiral_poly(f.num());
    let den = chiral_poly(f.den());
    let dser = Series2::from_poly(&den, order);
    if dser.get(0, 0).is_zero() {
        return Err(GciError::PoleAtOrigin(
            "denominator vanishes at u = v = 0".into(),
        ));
    }
    let nser = Series2::from_poly(&num, order);
    if den.is_constant() {
        return Ok(nser.scale(&(Rat::one() / den.constant_term())));
    }
    Ok(nser.mul(&dser.inverse()?))
}

/// p(s, t) → p(uv, (1−u)(1−v)) as a polynomial in (u, v).
pub fn chiral_poly(p: &MPoly) -> MPoly {
    let u = MPoly::var(2, 0);
    let v = MPoly::var(2, 1);
    let one = MPoly::one(2);
    let s = &u * &v;
    let t = &(&one - &u) * &(&one - &v);
    p.subst(&[s, t])
}

/// Rewrites a symmetric polynomial in (u, v) through e1 = u + v, e2 = uv (result variables
/// 0 = e1, 1 = e2).
pub fn symmetric_reduce(p: &MPoly) -> Result<MPoly> {
    if p.arity() != 2 {
        return Err(GciError::Usage(
            "symmetric_reduce needs a bivariate polynomial".into(),
        ));
    }
    if !p.is_symmetric_in(0, 1) {
        return Err(GciError::Structural(
            "polynomial is not symmetric in u, v".into(),
        ));
    }
    let u = MPoly::var(2, 0);
    let v = MPoly::var(2, 1);
    let e1 = &u + &v;
    let e2 = &u * &v;
    let mut r = p.clone();
    let mut out = MPoly::zero(2);
    // repeatedly strip the lex-leading monomial u^a v^b (a ≥ b) with c·e1^{a−b} e2^b
    while let Some((e, c)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
        let (a, b) = (e[0], e[1]);
        if a < b {
            return Err(GciError::Structural(
                "leading monomial not of the form u^a v^b with a >= b".into(),
            ));
        }
        let term = &e1.pow(a - b) * &e2.pow(b);
        r = &r - &term.scale(&c);
        out.add_term(vec![a - b, b], c);
    }
    Ok(out)
}

impl<'a> Add<&'a Series2> for &'a Series2 {
    type Output = Series2;
    fn add(self, o: &'a Series2) -> Series2 {
        let n = self.order.min(o.order);
        let mut s = self.truncate(n);
        for (k, c) in o.truncate(n).coeffs.iter().enumerate() {
            s.coeffs[k] += c;
        }
        s
    }
}

impl<'a> Sub<&'a Series2> for &'a Series2 {
    type Output = Series2;
    fn sub(self, o: &'a Series2) -> Series2 {
        let n = self.order.min(o.order);
        let mut s = self.truncate(n);
        for (k, c) in o.truncate(n).coeffs.iter().enumerate() {
            s.coeffs[k] -= c;
        }
        s
    }
}

impl<'a> Mul<&'a Series2> for &'a Series2 {
    type Output = Series2;
    fn mul(self, o: &'a Series2) -> Series2 {
        Series2::mul(self, o)
    }
}

impl Neg for &Series2 {
    type Output = Series2;
    fn neg(self) -> Series2 {
        Series2 {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
