//! Point configurations, squared intervals, cross-ratios, chiral variables and the crossing
//! action of S₃ on functions of (s, t).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GciError, Result};
use crate::exact::rat::{binomial, rat, rat_sqrt, serde_rat, Rat};
use crate::exact::ratfn::{st, RatFn};

pub type Point = [Rat; 4];

pub fn point(c: [i64; 4]) -> Point {
    c.map(|x| Rat::from_integer(x.into()))
}

pub fn unit(mu: usize) -> Point {
    let mut p = point([0, 0, 0, 0]);
    p[mu] = Rat::one();
    p
}

pub fn sub(a: &Point, b: &Point) -> Point {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2], &a[3] - &b[3]]
}

pub fn dot(a: &Point, b: &Point) -> Rat {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2] + &a[3] * &b[3]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    pub points: Vec<Point>,
}

impl PointConfig {
    pub fn new(points: Vec<Point>) -> Self {
        PointConfig { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// ρᵢⱼ with zero-based indices.
    pub fn rho(&self, i: usize, j: usize) -> Rat {
        let d = sub(&self.points[i], &self.points[j]);
        dot(&d, &d)
    }

    pub fn is_nondegenerate(&self) -> bool {
        let n = self.points.len();
        (0..n).all(|i| (i + 1..n).all(|j| !self.rho(i, j).is_zero()))
    }

    /// Points reordered by `order` (zero-based indices into this configuration).
    pub fn permuted(&self, order: &[usize]) -> PointConfig {
        PointConfig {
            points: order.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    pub fn translated(&self, a: &Point) -> PointConfig {
        PointConfig {
            points: self
                .points
                .iter()
                .map(|p| [&p[0] + &a[0], &p[1] + &a[1], &p[2] + &a[2], &p[3] + &a[3]])
                .collect(),
        }
    }
}

/// ρᵢⱼ = Σ_μ (zᵢ^μ − zⱼ^μ)², zero-based indices.
pub fn squared_interval(config: &PointConfig, i: usize, j: usize) -> Result<Rat> {
    let n = config.len();
    if i >= n || j >= n {
        return Err(GciError::Usage(format!(
            "index out of range: ({i}, {j}) for {n} points"
        )));
    }
    Ok(config.rho(i, j))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossRatios {
    pub s: Rat,
    pub t: Rat,
}

/// s = ρ₁₂ρ₃₄/(ρ₁₃ρ₂₄), t = ρ₁₄ρ₂₃/(ρ₁₃ρ₂₄).
pub fn cross_ratios(config: &PointConfig) -> Result<CrossRatios> {
    if config.len() != 4 {
        return Err(GciError::Usage(
            "cross-ratios need exactly four points".into(),
        ));
    }
    let r = |i, j| config.rho(i, j);
    let den = r(0, 2) * r(1, 3);
    if den.is_zero() {
        return Err(GciError::Degenerate("rho13 * rho24 = 0".into()));
    }
    Ok(CrossRatios {
        s: r(0, 1) * r(2, 3) / &den,
        t: r(0, 3) * r(1, 2) / &den,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiralPair {
    pub e1: Rat,
    pub e2: Rat,
    pub discriminant: Rat,
    /// (u, v) with u ≤ v, when the discriminant is a rational square.
    pub roots: Option<(Rat, Rat)>,
}

/// e1 = u + v = 1 + s − t, e2 = uv = s.
pub fn chiral_from_st(s: &Rat, t: &Rat) -> ChiralPair {
    let e1 = Rat::one() + s - t;
    let e2 = s.clone();
    let discriminant = &e1 * &e1 - Rat::from_integer(4.into()) * &e2;
    let roots = rat_sqrt(&discriminant).map(|r| {
        let half = rat(1, 2);
        let u = (&e1 - &r) * &half;
        let v = (&e1 + &r) * &half;
        (u, v)
    });
    ChiralPair {
        e1,
        e2,
        discriminant,
        roots,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum S3Gen {
    S12,
    S23,
    S13,
}

/// s12·f = t^{2d−3} f(s/t, 1/t); s23·f = s^{2d−3} f(1/s, t/s); s13·f = f(t, s).
pub fn s3_action(gen: S3Gen, f: &RatFn, d: i32) -> Result<RatFn> {
    if d < 2 {
        return Err(GciError::Usage("s3_action needs d >= 2".into()));
    }
    let (s, t) = (st::s(), st::t());
    let w = 2 * d - 3;
    Ok(match gen {
        S3Gen::S12 => {
            let ti = t.recip()?;
            &t.pow(w) * &f.subst(&[&s * &ti, ti.clone()])?
        }
        S3Gen::S23 => {
            let si = s.recip()?;
            &s.pow(w) * &f.subst(&[si.clone(), &t * &si])?
        }
        S3Gen::S13 => f.subst(&[t, s])?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinLabel {
    #[serde(with = "serde_rat")]
    pub d: Rat,
    #[serde(with = "serde_rat")]
    pub j1: Rat,
    #[serde(with = "serde_rat")]
    pub j2: Rat,
}

impl SpinLabel {
    pub fn new(d: Rat, j1: Rat, j2: Rat) -> Result<Self> {
        let two = Rat::from_integer(2.into());
        for x in [&d, &j1, &j2] {
            if !(x * &two).is_integer() {
                return Err(GciError::Usage(format!("{x} is not a half-integer")));
            }
        }
        if j1.is_negative() || j2.is_negative() {
            return Err(GciError::Usage("spin labels must be nonnegative".into()));
        }
        Ok(SpinLabel { d, j1, j2 })
    }

    pub fn scalar(d: Rat) -> Self {
        SpinLabel {
            d,
            j1: Rat::zero(),
            j2: Rat::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    /// Some Nᵢ equals 0 (accepted, but worth flagging).
    pub zero_n: bool,
    pub n_values: Vec<Rat>,
}

/// Each Nᵢ = dᵢ + jᵢ₁ + jᵢ₂ a nonnegative integer, ½ΣNᵢ and Σdᵢ integers.
pub fn gci_3pt_admissible(labels: &[SpinLabel; 3]) -> Admissibility {
    let n_values: Vec<Rat> = labels.iter().map(|l| &l.d + &l.j1 + &l.j2).collect();
    let each = n_values.iter().all(|n| n.is_integer() && !n.is_negative());
    let sum_n: Rat = n_values.iter().fold(Rat::zero(), |a, b| a + b);
    let half = (sum_n / Rat::from_integer(2.into())).is_integer();
    let sum_d = labels
        .iter()
        .fold(Rat::zero(), |a, l| a + &l.d)
        .is_integer();
    let zero_n = n_values.iter().any(|n| n.is_zero());
    Admissibility {
        admissible: each && half && sum_d,
        zero_n,
        n_values,
    }
}

/// (N, ε) = (d + j₁ + j₂, (−1)^{2j₁+2j₂}).
pub fn locality_exponent(label: &SpinLabel) -> Result<(i64, i8)> {
    let n = &label.d + &label.j1 + &label.j2;
    if !n.is_integer() || n.is_negative() {
        return Err(GciError::Inadmissible(format!(
            "N = {n} is not a nonnegative integer"
        )));
    }
    let twice = (&label.j1 + &label.j2) * Rat::from_integer(2.into());
    let odd = (twice.to_integer() % BigInt::from(2)) != BigInt::zero();
    let n: i64 = n
        .to_integer()
        .try_into()
        .map_err(|_| GciError::Usage("N too large".into()))?;
    Ok((n, if odd { -1 } else { 1 }))
}

/// d(m, D) = C(m+D−1, D−1) − C(m+D−3, D−1).
pub fn harmonic_dimension(m: u64, dim: u64) -> Result<BigInt> {
    if dim < 2 {
        return Err(GciError::Usage("D must be at least 2".into()));
    }
    let (m, dim) = (m as i64, dim as i64);
    Ok(binomial(m + dim - 1, dim - 1) - binomial(m + dim - 3, dim - 1))
}

/// Random rational configuration of `n` points, numerators in [−9, 9], denominators in
/// {1, 2, 3}, with all pairwise intervals nonzero.
pub fn random_config<R: Rng>(rng: &mut R, n: usize) -> PointConfig {
    loop {
        let points: Vec<Point> = (0..n)
            .map(|_| std::array::from_fn(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=3))))
            .collect();
        let c = PointConfig { points };
        if c.is_nondegenerate() {
            return c;
        }
    }
}
