//! q-series with half-integer exponents. Keys are doubled exponents: key k stands for q^{k/2}.

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::rat::{rat_to_f64, Rat};
use crate::error::{GciError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: BTreeMap<i64, Rat>,
    min_exp: i64,
    max_exp: i64,
}

impl QSeries {
    /// Empty series on the window [min_exp, max_exp] of doubled exponents.
    pub fn zero(min_exp: i64, max_exp: i64) -> Self {
        QSeries {
            coeffs: BTreeMap::new(),
            min_exp,
            max_exp,
        }
    }

    /// Integer-exponent series Σ c_n q^n for n in [0, order].
    pub fn from_integer_coeffs(coeffs: &[Rat]) -> Self {
        let mut s = QSeries::zero(0, 2 * (coeffs.len() as i64 - 1));
        for (n, c) in coeffs.iter().enumerate() {
            s.add_at(2 * n as i64, c);
        }
        s
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn max_exp(&self) -> i64 {
        self.max_exp
    }

    pub fn add_at(&mut self, key: i64, c: &Rat) {
        if key < self.min_exp || key > self.max_exp || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(key).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    /// Coefficient of q^{key/2}.
    pub fn coeff(&self, key: i64) -> Rat {
        self.coeffs.get(&key).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of q^n.
    pub fn coeff_int(&self, n: i64) -> Rat {
        self.coeff(2 * n)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.coeffs.iter()
    }

    pub fn is_integral_exponent(&self) -> bool {
        self.coeffs.keys().all(|k| k % 2 == 0)
    }

    pub fn scale(&self, c: &Rat) -> QSeries {
        let mut s = QSeries::zero(self.min_exp, self.max_exp);
        for (k, v) in &self.coeffs {
            s.add_at(*k, &(v * c));
        }
        s
    }

    /// Restricts the window to keys ≤ max_key.
    pub fn truncate(&self, max_key: i64) -> QSeries {
        let mut s = QSeries::zero(self.min_exp, max_key.min(self.max_exp));
        for (k, v) in &self.coeffs {
            s.add_at(*k, v);
        }
        s
    }

    /// True when coefficients agree for every key ≤ max_key.
    pub fn agrees_through(&self, o: &QSeries, max_key: i64) -> bool {
        let lo = self.min_exp.min(o.min_exp);
        (lo..=max_key).all(|k| self.coeff(k) == o.coeff(k))
    }

    /// First key ≤ max_key where the two series differ.
    pub fn first_difference(&self, o: &QSeries, max_key: i64) -> Option<i64> {
        let lo = self.min_exp.min(o.min_exp);
        (lo..=max_key).find(|&k| self.coeff(k) != o.coeff(k))
    }

    /// Numeric value at τ together with a truncation-error estimate.
    pub fn eval(&self, tau: Complex64) -> Result<(Complex64, f64)> {
        qseries_eval(self, tau)
    }
}

/// q ↦ −q^{1/2} on an integer-exponent series.
pub fn halfperiod_substitute(s: &QSeries) -> Result<QSeries> {
    if !s.is_integral_exponent() || s.min_exp % 2 != 0 {
        return Err(GciError::Usage(
            "half-period substitution needs an integer-exponent series".into(),
        ));
    }
    let mut out = QSeries::zero(s.min_exp / 2, s.max_exp / 2);
    for (k, c) in &s.coeffs {
        let n = k / 2;
        let c = if n % 2 == 0 { c.clone() } else { -c };
        out.add_at(n, &c);
    }
    Ok(out)
}

const SAFETY: f64 = 10.0;

/// Sum with q^{1/2} = e^{iπτ}; the bound extrapolates the last stored terms geometrically.
pub fn qseries_eval(s: &QSeries, tau: Complex64) -> Result<(Complex64, f64)> {
    if tau.im <= 0.0 {
        return Err(GciError::Usage("Im tau must be positive".into()));
    }
    let x = (Complex64::i() * std::f64::consts::PI * tau).exp();
    let ax = x.norm();
    let mut acc = Complex64::zero();
    for (k, c) in &s.coeffs {
        acc += x.powi(*k as i32) * rat_to_f64(c);
    }
    let last: Vec<f64> = s
        .coeffs
        .iter()
        .rev()
        .take(3)
        .map(|(k, c)| rat_to_f64(&c.abs()) * ax.powi(*k as i32))
        .collect();
    let tail_seed = last.iter().cloned().fold(0.0, f64::max);
    let bound = if s.coeffs.keys().next_back().copied().unwrap_or(0) < s.max_exp {
        // no stored term near the window edge: the series is exact up to rounding
        f64::EPSILON * acc.norm().max(1.0) * SAFETY
    } else {
        SAFETY * tail_seed * ax / (1.0 - ax) + f64::EPSILON * acc.norm().max(1.0)
    };
    if !bound.is_finite() || bound > 1e-3 * (acc.norm() + 1.0) {
        return Err(GciError::Precision(format!(
            "series window too short at tau = {tau} (bound {bound:e})"
        )));
    }
    Ok((acc, bound))
}

impl<'a> Add<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn add(self, o: &'a QSeries) -> QSeries {
        let mut s = QSeries::zero(self.min_exp.min(o.min_exp), self.max_exp.min(o.max_exp));
        for (k, v) in self.coeffs.iter().chain(o.coeffs.iter()) {
            s.add_at(*k, v);
        }
        s
    }
}

impl<'a> Sub<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn sub(self, o: &'a QSeries) -> QSeries {
        let mut s = QSeries::zero(self.min_exp.min(o.min_exp), self.max_exp.min(o.max_exp));
        for (k, v) in &self.coeffs {
            s.add_at(*k, v);
        }
        for (k, v) in &o.coeffs {
            s.add_at(*k, &(-v));
        }
        s
    }
}
