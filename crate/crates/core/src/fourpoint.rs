//! Crossing-symmetric truncated 4-point functions of a d = 4 (and d = 2) scalar.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GciError, Result};
use crate::exact::mpoly::{st as p, MPoly};
use crate::exact::rat::{serde_rat, Rat};
use crate::exact::ratfn::{st as f, RatFn};
use crate::kinematics::{cross_ratios, s3_action, PointConfig, S3Gen};

/// Parameters (a₀, a₁, a₂, b, c) of the 4-point function and the 2-point normalization B.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PWParams {
    #[serde(with = "serde_rat", default = "Rat::zero")]
    pub a0: Rat,
    #[serde(with = "serde_rat", default = "Rat::zero")]
    pub a1: Rat,
    #[serde(with = "serde_rat", default = "Rat::zero")]
    pub a2: Rat,
    #[serde(with = "serde_rat", default = "Rat::zero")]
    pub b: Rat,
    #[serde(with = "serde_rat", default = "Rat::zero")]
    pub c: Rat,
    #[serde(rename = "B", with = "serde_rat", default = "Rat::zero")]
    pub big_b: Rat,
}

impl Default for PWParams {
    fn default() -> Self {
        PWParams::zero()
    }
}

impl PWParams {
    pub fn zero() -> Self {
        PWParams {
            a0: Rat::zero(),
            a1: Rat::zero(),
            a2: Rat::zero(),
            b: Rat::zero(),
            c: Rat::zero(),
            big_b: Rat::zero(),
        }
    }

    pub fn new(a0: Rat, a1: Rat, a2: Rat, b: Rat, c: Rat, big_b: Rat) -> Self {
        PWParams {
            a0,
            a1,
            a2,
            b,
            c,
            big_b,
        }
    }

    /// The k-th unit direction among (a₀, a₁, a₂, b, c), B = 0.
    pub fn unit(k: usize) -> Self {
        let mut p = PWParams::zero();
        match k {
            0 => p.a0 = Rat::one(),
            1 => p.a1 = Rat::one(),
            2 => p.a2 = Rat::one(),
            3 => p.b = Rat::one(),
            4 => p.c = Rat::one(),
            _ => panic!("unit direction index must be < 5"),
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        if self.big_b < Rat::zero() {
            return Err(GciError::Usage("B must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &PWParams) -> PWParams {
        PWParams {
            a0: &self.a0 + &o.a0,
            a1: &self.a1 + &o.a1,
            a2: &self.a2 + &o.a2,
            b: &self.b + &o.b,
            c: &self.c + &o.c,
            big_b: &self.big_b + &o.big_b,
        }
    }

    /// [a₀, a₁, a₂, b, c].
    pub fn linear_coords(&self) -> [Rat; 5] {
        [
            self.a0.clone(),
            self.a1.clone(),
            self.a2.clone(),
            self.b.clone(),
            self.c.clone(),
        ]
    }
}

/// Crossing-symmetric polynomial P₄(s, t) of total degree ≤ 5.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P4Poly {
    pub poly: MPoly,
}

fn q1() -> MPoly {
    let (s, t) = (p::s(), p::t());
    &(&p::ci(1) + &s.pow(2)) + &t.pow(2)
}

fn q2() -> MPoly {
    let (s, t) = (p::s(), p::t());
    &(&s + &t) + &(&s * &t)
}

/// Random parameters: a₀…c with numerators in [−9, 9] and denominators in {1, 2, 3};
/// B ≥ 0.
pub fn random_params<R: rand::Rng>(rng: &mut R) -> PWParams {
    let mut r = || crate::exact::rat::rat(rng.gen_range(-9..=9), rng.gen_range(1..=3));
    let (a0, a1, a2, b, c) = (r(), r(), r(), r(), r());
    let big_b = num_traits::Signed::abs(&r());
    PWParams::new(a0, a1, a2, b, c, big_b)
}

/// J₀, J₁, J₂.
pub fn basis_j_big(nu: u32) -> Result<MPoly> {
    let (s, t) = (p::s(), p::t());
    let one = p::ci(1);
    Ok(match nu {
        0 => {
            let a = &s.pow(2) * &(&one + &s);
            let b = &t.pow(2) * &(&one + &t);
            let c = &(&s.pow(2) * &t.pow(2)) * &(&s + &t);
            &(&a + &b) + &c
        }
        1 => {
            let a = &(&s * &(&one - &s)) * &(&one - &s.pow(2));
            let b = &(&t * &(&one - &t)) * &(&one - &t.pow(2));
            let br = &(&(&s - &t) * &(&s.pow(2) - &t.pow(2)))
                - &q1().scale(&Rat::from_integer(2.into()));
            let c = &(&s * &t) * &br;
            &(&a + &b) + &c
        }
        2 => {
            let a = &(&one + &t.pow(3)) * &(&(&(&one + &s) - &t).pow(2) - &s);
            let b = (&s * &(&one - &t)).scale(&Rat::from_integer(3.into()));
            let c = &s.pow(3) * &(&(&(&one + &t) - &s).pow(2) - &t);
            &(&a - &b) + &c
        }
        _ => {
            return Err(GciError::Usage(format!(
                "J_nu is defined for nu in 0..=2, got {nu}"
            )))
        }
    })
}

/// Q₁ = 1 + s² + t², Q₂ = s + t + st.
pub fn basis_q(j: u32) -> Result<MPoly> {
    match j {
        1 => Ok(q1()),
        2 => Ok(q2()),
        _ => Err(GciError::Usage(format!(
            "Q_j is defined for j in 1..=2, got {j}"
        ))),
    }
}

/// The twist-two functions j₀, j₁, j₂.
pub fn basis_j_small(nu: u32) -> Result<RatFn> {
    let (s, t) = (f::s(), f::t());
    let one = f::ci(1);
    let ti = t.recip()?;
    Ok(match nu {
        0 => &one + &ti,
        1 => {
            let r = &(&one - &t) * &ti;
            let a = &r.pow(2) * &(&(&one + &t) - &s);
            let b = &(&s * &ti).scale(&Rat::from_integer(2.into()));
            &a - b
        }
        2 => {
            let t3i = ti.pow(3);
            let a = &(&one + &t3i) * &(&(&(&one + &s) - &t).pow(2) - &s);
            let b = (&(&s * &(&one - &t)) * &t3i).scale(&Rat::from_integer(3.into()));
            &a - &b
        }
        _ => {
            return Err(GciError::Usage(format!(
                "j_nu is defined for nu in 0..=2, got {nu}"
            )))
        }
    })
}

/// P₄ = Σ a_ν J_ν + st[b(Q₁ − 2Q₂) + c Q₂].
pub fn assemble_p4(params: &PWParams) -> P4Poly {
    let mut poly = MPoly::zero(2);
    for (nu, a) in [&params.a0, &params.a1, &params.a2].into_iter().enumerate() {
        if !a.is_zero() {
            poly = &poly + &basis_j_big(nu as u32).unwrap().scale(a);
        }
    }
    let st = &p::s() * &p::t();
    let bq = (&q1() - &q2().scale(&Rat::from_integer(2.into()))).scale(&params.b);
    let cq = q2().scale(&params.c);
    poly = &poly + &(&st * &(&bq + &cq));
    P4Poly { poly }
}

/// s12·P = P and s23·P = P with weights 2d − 3.
pub fn crossing_check(poly: &MPoly, d: i32) -> Result<bool> {
    let f = RatFn::from_poly(poly.clone());
    Ok(s3_action(S3Gen::S12, &f, d)? == f && s3_action(S3Gen::S23, &f, d)? == f)
}

#[derive(Clone, Debug)]
pub struct EigenResult {
    pub lambda: Rat,
    pub sigma: u32,
    /// (λ(1+s13+s23)[t³j_ν] − t³j_ν)/s^σ.
    pub q: RatFn,
}

/// Verifies J_ν = λ_ν(1 + s13 + s23)[t³j_ν] and the order of vanishing of the remainder at s = 0.
pub fn eigen_check(nu: u32) -> Result<EigenResult> {
    let big_j = basis_j_big(nu)?;
    let t3j = &f::t().pow(3) * &basis_j_small(nu)?;
    let sym = &(&t3j + &s3_action(S3Gen::S13, &t3j, 4)?) + &s3_action(S3Gen::S23, &t3j, 4)?;
    let sym_poly = sym.as_poly().ok_or_else(|| {
        GciError::Structural(format!("symmetrization of t^3 j_{nu} is not a polynomial"))
    })?;
    let (_, lj) = big_j
        .leading()
        .ok_or_else(|| GciError::Structural("J_nu vanishes".into()))?;
    let (le, ls) = sym_poly
        .leading()
        .ok_or_else(|| GciError::Structural("symmetrization vanishes".into()))?;
    if big_j.leading().map(|(e, _)| e) != Some(le) {
        return Err(GciError::Structural(format!(
            "J_{nu} is not proportional to its symmetrization"
        )));
    }
    let lambda = lj / ls;
    if sym_poly.scale(&lambda) != big_j {
        return Err(GciError::Structural(format!(
            "J_{nu} != lambda (1+s13+s23)[t^3 j_{nu}]"
        )));
    }
    let diff = &sym.scale(&lambda) - &t3j;
    if diff.is_zero() {
        return Err(GciError::Structural(
            "remainder vanishes identically".into(),
        ));
    }
    // the denominator is a power of t, so the s-adic valuation sits in the numerator
    if diff.den().min_degree_in(0) != 0 || diff.den().degree_in(0) != 0 {
        return Err(GciError::Structural("unexpected s in denominator".into()));
    }
    let sigma = diff.num().min_degree_in(0);
    let q = RatFn::new(
        diff.num().div_monomial(&[sigma, 0]).unwrap(),
        diff.den().clone(),
    )?;
    let at_zero: Vec<_> = q.num().terms().filter(|(e, _)| e[0] == 0).collect();
    if at_zero.is_empty() {
        return Err(GciError::Structural("q(0, t) vanishes".into()));
    }
    Ok(EigenResult { lambda, sigma, q })
}

/// ⌊d²/3⌋.
pub fn crossing_dimension(d: u32) -> Result<u32> {
    if d < 2 {
        return Err(GciError::Usage("d must be at least 2".into()));
    }
    Ok(d * d / 3)
}

/// Dimension of the crossing-symmetric subspace of polynomials of degree ≤ 2d − 3, by exact
/// linear algebra on the monomial basis.
pub fn crossing_dimension_bruteforce(d: u32) -> Result<u32> {
    if d < 2 {
        return Err(GciError::Usage("d must be at least 2".into()));
    }
    let w = 2 * d - 3;
    let monos: Vec<(u32, u32)> = (0..=w)
        .flat_map(|a| (0..=(w - a)).map(move |b| (a, b)))
        .collect();
    let index = |a: u32, b: u32| monos.iter().position(|&m| m == (a, b));
    // s12: s^a t^b ↦ s^a t^{w−a−b}; s23: s^a t^b ↦ s^{w−a−b} t^b
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for img in [
        |a: u32, b: u32, w: u32| (a, w - a - b),
        |a: u32, b: u32, w: u32| (w - a - b, b),
    ] {
        for (k, &(a, b)) in monos.iter().enumerate() {
            let (a2, b2) = img(a, b, w);
            let j = index(a2, b2).unwrap();
            // row expresses coefficient equality c_k − c_{image} = 0 in the image basis
            let mut r = vec![Rat::zero(); monos.len()];
            r[k] += Rat::one();
            r[j] -= Rat::one();
            rows.push(r);
        }
    }
    let rank = rank(rows, monos.len());
    Ok((monos.len() - rank) as u32)
}

fn rank(mut rows: Vec<Vec<Rat>>, ncols: usize) -> usize {
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let pv = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = &rows[i][c] / &pv;
                for k in c..ncols {
                    let delta = &factor * &rows[r][k];
                    rows[i][k] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}

/// (ρ₁₃ρ₂₄)^{d−2}(ρ₁₂ρ₂₃ρ₃₄ρ₁₄)^{1−d}·P(s, t).
pub fn truncated_4pt_value(poly: &MPoly, config: &PointConfig, d: i32) -> Result<Rat> {
    if config.len() != 4 {
        return Err(GciError::Usage(
            "truncated 4-point value needs four points".into(),
        ));
    }
    let r = |i, j| config.rho(i, j);
    let ring = r(0, 1) * r(1, 2) * r(2, 3) * r(0, 3);
    let diag = r(0, 2) * r(1, 3);
    if ring.is_zero() || diag.is_zero() {
        return Err(GciError::Degenerate(
            "vanishing interval in 4-point prefactor".into(),
        ));
    }
    let cr = cross_ratios(config)?;
    let val = poly.eval(&[cr.s, cr.t]);
    Ok(pow_i(&diag, d - 2) * pow_i(&ring, 1 - d) * val)
}

pub(crate) fn pow_i(x: &Rat, k: i32) -> Rat {
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        Rat::one() / num_traits::pow(x.clone(), (-k) as usize)
    }
}

/// The crossing-symmetric d = 2 polynomial c(1 + s + t).
pub fn d2_polynomial(c: &Rat) -> MPoly {
    (&(&p::ci(1) + &p::s()) + &p::t()).scale(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{rat, ri};

    #[test]
    fn basis_values() {
        assert_eq!(basis_j_big(0).unwrap().eval(&[ri(1), ri(1)]), ri(6));
        assert_eq!(basis_j_big(1).unwrap().eval(&[ri(0), ri(1)]), ri(0));
        assert_eq!(basis_j_big(2).unwrap().eval(&[ri(0), ri(0)]), ri(1));
        assert_eq!(basis_q(1).unwrap().eval(&[ri(1), ri(1)]), ri(3));
        assert_eq!(
            basis_j_small(0).unwrap().eval(&[rat(7, 3), ri(1)]).unwrap(),
            ri(2)
        );
        assert_eq!(
            basis_j_small(2).unwrap().eval(&[ri(0), ri(2)]).unwrap(),
            rat(9, 8)
        );
        assert!(basis_j_big(3).is_err());
    }

    #[test]
    fn q_identity() {
        let (s, t) = (p::s(), p::t());
        let lhs = &basis_q(1).unwrap() - &basis_q(2).unwrap().scale(&ri(2));
        let rhs = &(&(&p::ci(1) - &s) - &t).pow(2) - &(&s * &t).scale(&ri(4));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn crossing_of_bases() {
        for nu in 0..3 {
            assert!(crossing_check(&basis_j_big(nu).unwrap(), 4).unwrap());
        }
        assert!(!crossing_check(&p::s(), 4).unwrap());
        assert!(crossing_check(&d2_polynomial(&ri(3)), 2).unwrap());
        assert!(crossing_check(&assemble_p4(&PWParams::unit(3)).poly, 4).unwrap());
        assert!(crossing_check(&assemble_p4(&PWParams::unit(4)).poly, 4).unwrap());
    }

    #[test]
    fn eigen_relations() {
        let want = [(ri(1), 2), (ri(1), 1), (rat(1, 2), 3)];
        for nu in 0..3 {
            let e = eigen_check(nu).unwrap();
            assert_eq!((e.lambda, e.sigma), want[nu as usize]);
        }
    }

    #[test]
    fn dimensions() {
        for (d, n) in [(2, 1), (3, 3), (4, 5), (5, 8), (6, 12)] {
            assert_eq!(crossing_dimension(d).unwrap(), n);
            assert_eq!(crossing_dimension_bruteforce(d).unwrap(), n);
        }
    }

    #[test]
    fn b_direction() {
        let (s, t) = (p::s(), p::t());
        let st = &s * &t;
        let want = &(&st * &(&(&p::ci(1) - &s) - &t).pow(2)) - &st.pow(2).scale(&ri(4));
        assert_eq!(assemble_p4(&PWParams::unit(3)).poly, want);
    }
}
