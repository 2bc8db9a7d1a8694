//! Symmetrization of bilocal 2n-point functions over constrained pairings, λ fitting and
//! the twist-two consistency of the result.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{GciError, Result};
use crate::exact::rat::{fmt_rat, rat_to_f64, Rat};
use crate::fourpoint::{basis_j_big, basis_j_small, truncated_4pt_value};
use crate::freefield::{orbit_enumerate, pairings, set_partitions};
use crate::kinematics::{cross_ratios, PointConfig};

/// n index pairs partitioning {0, …, 2n−1}; first pair starts at 0, each pair increasing,
/// first elements increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairingPattern {
    pub pairs: Vec<(usize, usize)>,
}

impl PairingPattern {
    /// The points in slot order (i₁, i₂, …, i₂ₙ).
    pub fn order(&self) -> Vec<usize> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

impl fmt::Display for PairingPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.pairs {
            write!(f, "({}{})", a + 1, b + 1)?;
        }
        Ok(())
    }
}

/// The (2n−1)!! patterns in lexicographic order.
pub fn enumerate_patterns(n: usize) -> Result<Vec<PairingPattern>> {
    if n == 0 {
        return Err(GciError::Usage("n must be at least 1".into()));
    }
    let pts: Vec<usize> = (0..2 * n).collect();
    Ok(pairings(&pts)
        .into_iter()
        .map(|pairs| PairingPattern { pairs })
        .collect())
}

/// Evaluates ⟨V₁(z₁, z₂) V₁(z₃, z₄) ⋯⟩ on an even configuration.
pub trait BilocalCorrelator {
    fn eval(&self, config: &PointConfig) -> Result<Rat>;
}

impl<F> BilocalCorrelator for F
where
    F: Fn(&PointConfig) -> Result<Rat>,
{
    fn eval(&self, config: &PointConfig) -> Result<Rat> {
        self(config)
    }
}

/// ⟨V₁⁽²⁾V₁⁽²⁾⟩ through its partial-wave content j₂(s, t)/(ρ₁₃ρ₂₄); four points only.
pub fn v1_maxwell_4pt(config: &PointConfig) -> Result<Rat> {
    match config.len() {
        2 => Ok(Rat::zero()),
        4 => {
            let cr = cross_ratios(config)?;
            let j = basis_j_small(2)?.eval(&[cr.s, cr.t])?;
            Ok(j / (config.rho(0, 2) * config.rho(1, 3)))
        }
        _ => Err(GciError::Usage(
            "the j2 bilocal is only available at four points".into(),
        )),
    }
}

/// Truncated 4-point function of ℒ⁽²⁾ normalized by J₂.
pub fn l2_reference_4pt(config: &PointConfig) -> Result<Rat> {
    if config.len() != 4 {
        return Err(GciError::Usage(
            "the J2 reference is only available at four points".into(),
        ));
    }
    truncated_4pt_value(&basis_j_big(2)?, config, 4)
}

fn prefactor(config: &PointConfig, slots: &[(usize, usize)]) -> Result<Rat> {
    let mut p = Rat::one();
    for &(a, b) in slots {
        let r = config.rho(a, b);
        if r.is_zero() {
            return Err(GciError::Degenerate(format!(
                "rho{}{} = 0 in prefactor",
                a + 1,
                b + 1
            )));
        }
        p /= &r * &r * &r;
    }
    Ok(p)
}

/// w₁ for the given bilocal slots: Π ρ⁻³ times the bilocal correlator.
pub fn w1<C: BilocalCorrelator + ?Sized>(
    v1: &C,
    config: &PointConfig,
    slots: &[(usize, usize)],
) -> Result<Rat> {
    let pre = prefactor(config, slots)?;
    let idx: Vec<usize> = slots.iter().flat_map(|&(a, b)| [a, b]).collect();
    Ok(pre * v1.eval(&config.permuted(&idx))?)
}

/// w₁ᵗ by the truncation recursion over partitions of the slots into at least two blocks.
/// With vanishing one-point functions this subtracts nothing for n < 4 and the three
/// pair products at n = 4.
pub fn w1_truncated<C: BilocalCorrelator + ?Sized>(
    v1: &C,
    config: &PointConfig,
    slots: &[(usize, usize)],
) -> Result<Rat> {
    if slots.len() < 2 {
        return Err(GciError::Usage("w1_truncated needs n >= 2".into()));
    }
    let mut memo = HashMap::new();
    let all: Vec<usize> = (0..slots.len()).collect();
    truncated_rec(v1, config, slots, &all, &mut memo)
}

fn truncated_rec<C: BilocalCorrelator + ?Sized>(
    v1: &C,
    config: &PointConfig,
    slots: &[(usize, usize)],
    block: &[usize],
    memo: &mut HashMap<Vec<usize>, Rat>,
) -> Result<Rat> {
    if let Some(v) = memo.get(block) {
        return Ok(v.clone());
    }
    let sub: Vec<(usize, usize)> = block.iter().map(|&k| slots[k]).collect();
    let mut v = w1(v1, config, &sub)?;
    if block.len() > 1 {
        for part in set_partitions(block) {
            if part.len() < 2 {
                continue;
            }
            let mut prod = Rat::one();
            for b in &part {
                prod *= truncated_rec(v1, config, slots, b, memo)?;
                if prod.is_zero() {
                    break;
                }
            }
            v -= prod;
        }
    }
    memo.insert(block.to_vec(), v.clone());
    Ok(v)
}

/// λ Σ′ w₁ᵗ over all patterns; zero for an odd number of points.
pub fn symmetrized_wt<C: BilocalCorrelator + ?Sized>(
    lambda: &Rat,
    v1: &C,
    config: &PointConfig,
) -> Result<Rat> {
    let m = config.len();
    if m % 2 == 1 {
        return Ok(Rat::zero());
    }
    if m < 4 {
        return Err(GciError::Usage("symmetrization needs n >= 2".into()));
    }
    if lambda.is_zero() {
        return Ok(Rat::zero());
    }
    let mut acc = Rat::zero();
    for p in enumerate_patterns(m / 2)? {
        acc += w1_truncated(v1, config, &p.pairs)?;
    }
    Ok(lambda * acc)
}

/// The exact ratio reference/Σ′w₁ᵗ, required to be the same at every configuration.
pub fn fit_lambda<R, C>(reference: &R, v1: &C, configs: &[PointConfig]) -> Result<Rat>
where
    R: BilocalCorrelator + ?Sized,
    C: BilocalCorrelator + ?Sized,
{
    if configs.len() < 2 {
        return Err(GciError::Usage(
            "fit_lambda needs at least two configurations".into(),
        ));
    }
    let mut lambda: Option<Rat> = None;
    for (k, c) in configs.iter().enumerate() {
        let r = reference.eval(c)?;
        let s = symmetrized_wt(&Rat::one(), v1, c)?;
        if s.is_zero() {
            if r.is_zero() {
                continue;
            }
            return Err(GciError::NotSymmetrizable(format!(
                "symmetrized sum vanishes at configuration {k}"
            )));
        }
        let ratio = r / s;
        match &lambda {
            None => lambda = Some(ratio),
            Some(l) if *l != ratio => {
                return Err(GciError::NotSymmetrizable(format!(
                    "ratio {} at configuration {k} differs from {}",
                    fmt_rat(&ratio),
                    fmt_rat(l)
                )))
            }
            _ => {}
        }
    }
    match lambda {
        Some(l) if !l.is_zero() => Ok(l),
        _ => Err(GciError::NotSymmetrizable(
            "reference vanishes at every configuration".into(),
        )),
    }
}

/// The fully expanded Weyl symmetrization: every pattern times every pole structure of the
/// orbit. Returns the number of elementary contributions and their sum.
pub fn weyl_elementary_expansion(
    n: usize,
    c_n: &Rat,
    config: &PointConfig,
) -> Result<(usize, Rat)> {
    if config.len() != 2 * n {
        return Err(GciError::Usage(format!("expected {} points", 2 * n)));
    }
    let orbit = orbit_enumerate(n, c_n)?;
    let mut count = 0;
    let mut acc = Rat::zero();
    for p in enumerate_patterns(n)? {
        let sub = config.permuted(&p.order());
        let mut inner = Rat::zero();
        for term in &orbit {
            inner += term.eval(&sub)?;
            count += 1;
        }
        acc += prefactor(config, &p.pairs)? * inner;
    }
    Ok((count, acc))
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    /// (ρ₁₂, |ρ₁₂³(wᵗ − w₁ᵗ)|) along the sequence.
    pub samples: Vec<(f64, f64)>,
    pub exponent: f64,
    pub exact_zero: bool,
    pub passed: bool,
}

/// ρ₁₂³(λΣ′w₁ᵗ − w₁ᵗ(12; 34; …)) along z₂ = z₁ + δe₁ (ρ₁₂ = δ²), with the leading power in
/// ρ₁₂ fitted by least squares on the logarithms.
pub fn twist2_consistency<C: BilocalCorrelator + ?Sized>(
    lambda: &Rat,
    v1: &C,
    base: &PointConfig,
    deltas: &[Rat],
    tolerance: f64,
) -> Result<DecayReport> {
    let m = base.len();
    if m < 4 || !m.is_multiple_of(2) {
        return Err(GciError::Usage(
            "twist-2 consistency needs 2n >= 4 points".into(),
        ));
    }
    if deltas.len() < 4 {
        return Err(GciError::Usage("need at least four sequence terms".into()));
    }
    let slots: Vec<(usize, usize)> = (0..m / 2).map(|k| (2 * k, 2 * k + 1)).collect();
    let mut samples = Vec::new();
    let mut exact_zero = true;
    for d in deltas {
        let mut pts = base.points.clone();
        pts[1] = pts[0].clone();
        pts[1][0] += d;
        let cfg = PointConfig::new(pts);
        if !cfg.is_nondegenerate() {
            return Err(GciError::Degenerate(
                "configuration along the sequence is degenerate".into(),
            ));
        }
        let rho12 = cfg.rho(0, 1);
        let diff = symmetrized_wt(lambda, v1, &cfg)? - w1_truncated(v1, &cfg, &slots)?;
        let val = &rho12 * &rho12 * &rho12 * diff;
        if !val.is_zero() {
            exact_zero = false;
        }
        samples.push((rat_to_f64(&rho12), rat_to_f64(&val).abs()));
    }
    if exact_zero {
        return Ok(DecayReport {
            samples,
            exponent: f64::INFINITY,
            exact_zero,
            passed: true,
        });
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.1 > 0.0)
        .map(|&(e, v)| (e.ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(GciError::Precision(
            "too few nonzero samples for a fit".into(),
        ));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let exponent = sxy / sxx;
    Ok(DecayReport {
        samples,
        exponent,
        exact_zero,
        passed: exponent >= 1.0 - tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{rat, ri};
    use crate::freefield::{l0_truncated, l1_truncated, v1_scalar_npoint, v1_weyl_npoint};
    use crate::kinematics::random_config;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn configs(n: usize, k: usize, seed: u64) -> Vec<PointConfig> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..k).map(|_| random_config(&mut rng, 2 * n)).collect()
    }

    #[test]
    fn pattern_counts() {
        let p2 = enumerate_patterns(2).unwrap();
        assert_eq!(
            p2.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            ["(12)(34)", "(13)(24)", "(14)(23)"]
        );
        assert_eq!(enumerate_patterns(1).unwrap().len(), 1);
        assert_eq!(enumerate_patterns(3).unwrap().len(), 15);
    }

    #[test]
    fn lambdas_n2() {
        let cs = configs(2, 4, 11);
        assert_eq!(
            fit_lambda(&l0_truncated, &v1_scalar_npoint, &cs).unwrap(),
            ri(1)
        );
        assert_eq!(
            fit_lambda(&l1_truncated, &v1_weyl_npoint, &cs).unwrap(),
            ri(1)
        );
        assert_eq!(
            fit_lambda(&l2_reference_4pt, &v1_maxwell_4pt, &cs).unwrap(),
            rat(1, 2)
        );
    }

    #[test]
    fn six_point_ratios() {
        let cs = configs(3, 20, 33);
        assert_eq!(
            fit_lambda(&l1_truncated, &v1_weyl_npoint, &cs).unwrap(),
            ri(1)
        );
        assert_eq!(
            fit_lambda(&l0_truncated, &v1_scalar_npoint, &cs[..5]).unwrap(),
            ri(1)
        );
    }

    #[test]
    fn elementary_expansion_matches() {
        let cs = configs(3, 2, 8);
        for c in &cs {
            let (count, v) = weyl_elementary_expansion(3, &ri(1), c).unwrap();
            assert_eq!(count, 120);
            assert_eq!(v, symmetrized_wt(&ri(1), &v1_weyl_npoint, c).unwrap());
        }
        let c2 = configs(2, 1, 9).remove(0);
        let (count, v) = weyl_elementary_expansion(2, &ri(-2), &c2).unwrap();
        assert_eq!(count, 6);
        assert_eq!(v, symmetrized_wt(&ri(1), &v1_weyl_npoint, &c2).unwrap());
    }

    #[test]
    fn zero_reference_fails() {
        let cs = configs(2, 3, 2);
        let zero = |_: &PointConfig| Ok(Rat::zero());
        assert!(fit_lambda(&zero, &v1_scalar_npoint, &cs).is_err());
    }

    #[test]
    fn factorized_input_truncates_to_zero() {
        // a purely disconnected 8-point input: products of 4-point values over pair partitions
        let cs = configs(4, 1, 5);
        let four = |c: &PointConfig| -> Result<Rat> {
            let mut t = Rat::zero();
            for (x, y) in [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))] {
                let pick = |p: (usize, usize)| [2 * p.0, 2 * p.0 + 1, 2 * p.1, 2 * p.1 + 1];
                let a = v1_scalar_npoint(&c.permuted(&pick(x)))?;
                let b = v1_scalar_npoint(&c.permuted(&pick(y)))?;
                t += a * b;
            }
            Ok(t)
        };
        let v = |c: &PointConfig| -> Result<Rat> {
            match c.len() {
                8 => four(c),
                4 => v1_scalar_npoint(c),
                _ => Ok(Rat::zero()),
            }
        };
        let slots = [(0, 1), (2, 3), (4, 5), (6, 7)];
        assert!(w1_truncated(&v, &cs[0], &slots).unwrap().is_zero());
    }

    #[test]
    fn decay_exponents() {
        let base = configs(2, 1, 21).remove(0);
        let deltas: Vec<Rat> = (3..9).map(|k| rat(1, 1 << k)).collect();
        let r0 = twist2_consistency(&ri(1), &v1_scalar_npoint, &base, &deltas, 0.1).unwrap();
        assert!(r0.passed && (r0.exponent - 2.0).abs() < 0.1, "{r0:?}");
        let bad = twist2_consistency(&ri(2), &v1_scalar_npoint, &base, &deltas, 0.1).unwrap();
        assert!(!bad.passed && bad.exponent.abs() < 0.1, "{bad:?}");
    }
}
