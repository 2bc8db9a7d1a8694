//! Elements of ℚ(i), and more generally pairs (re, im) over any commutative ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::mpoly::MPoly;
use super::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gauss<T> {
    pub re: T,
    pub im: T,
}

pub type GaussRat = Gauss<Rat>;
pub type GaussPoly = Gauss<MPoly>;

impl<T> Gauss<T> {
    pub fn new(re: T, im: T) -> Self {
        Gauss { re, im }
    }
}

impl<T: Clone> Gauss<T>
where
    for<'a> &'a T: Neg<Output = T>,
{
    pub fn conj(&self) -> Self {
        Gauss {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// Multiplication by i.
    pub fn times_i(&self) -> Self {
        Gauss {
            re: -&self.im,
            im: self.re.clone(),
        }
    }
}

impl GaussRat {
    pub fn zero() -> Self {
        Gauss {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }
    pub fn one() -> Self {
        Gauss {
            re: Rat::one(),
            im: Rat::zero(),
        }
    }
    pub fn i() -> Self {
        Gauss {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }
    pub fn real(r: Rat) -> Self {
        Gauss {
            re: r,
            im: Rat::zero(),
        }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    pub fn scale(&self, c: &Rat) -> Self {
        Gauss {
            re: &self.re * c,
            im: &self.im * c,
        }
    }
}

impl GaussPoly {
    pub fn real(p: MPoly) -> Self {
        let im = MPoly::zero(p.arity());
        Gauss { re: p, im }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<'a, T> Add<&'a Gauss<T>> for &'a Gauss<T>
where
    &'a T: Add<&'a T, Output = T>,
{
    type Output = Gauss<T>;
    fn add(self, o: &'a Gauss<T>) -> Gauss<T> {
        Gauss {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl<'a, T> Sub<&'a Gauss<T>> for &'a Gauss<T>
where
    &'a T: Sub<&'a T, Output = T>,
{
    type Output = Gauss<T>;
    fn sub(self, o: &'a Gauss<T>) -> Gauss<T> {
        Gauss {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl<'a, T> Neg for &'a Gauss<T>
where
    &'a T: Neg<Output = T>,
{
    type Output = Gauss<T>;
    fn neg(self) -> Gauss<T> {
        Gauss {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl<'a, T> Mul<&'a Gauss<T>> for &'a Gauss<T>
where
    T: Add<T, Output = T> + Sub<T, Output = T>,
    &'a T: Mul<&'a T, Output = T>,
{
    type Output = Gauss<T>;
    fn mul(self, o: &'a Gauss<T>) -> Gauss<T> {
        Gauss {
            re: (&self.re * &o.re) - (&self.im * &o.im),
            im: (&self.re * &o.im) + (&self.im * &o.re),
        }
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}
