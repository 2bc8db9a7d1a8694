//! Conformal partial waves of the truncated 4-point function: twist extraction, structure
//! constants, positivity and the OPE kernel coefficients.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{GciError, Result};
use crate::exact::mpoly::MPoly;
use crate::exact::rat::{beta_int, binomial, factorial, fmt_rat, pochhammer, rat_to_f64, ri, Rat};
use crate::exact::ratfn::{st as f, RatFn};
use crate::exact::series::{chiral_poly, expand_to_chiral, symmetric_reduce, Series1, Series2};
use crate::fourpoint::{assemble_p4, basis_j_big, basis_q, PWParams};

/// Σ_{n ≤ N} (a)ₙ(b)ₙ/(n!(c)ₙ) xⁿ, with F(0,0;0;x) ≡ 1.
pub fn hypergeom_series(a: i64, b: i64, c: i64, order: usize) -> Result<Series1> {
    let mut coeffs = vec![Rat::zero(); order + 1];
    let mut term = Rat::one();
    for (n, slot) in coeffs.iter_mut().enumerate() {
        if term.is_zero() {
            break;
        }
        *slot = term.clone();
        let n = n as i64;
        let num = ri(a + n) * ri(b + n);
        if num.is_zero() {
            term = Rat::zero();
            continue;
        }
        if c + n == 0 {
            return Err(GciError::PoleInParameters(format!(
                "F({a},{b};{c};x) has a pole at order {}",
                n + 1
            )));
        }
        term = term * num / (ri(n + 1) * ri(c + n));
    }
    Ok(Series1::from_coeffs(coeffs))
}

/// Default truncation order for twist K and spin L.
pub fn default_order(max_twist: usize, max_spin: usize) -> usize {
    2 * max_spin + 2 * max_twist + 8
}

/// Chiral expansions of the six terms the left-hand side is linear in: t⁻³J₀, t⁻³J₁, t⁻³J₂,
/// t⁻³st(Q₁−2Q₂), t⁻³stQ₂ and s³(1+t⁻⁴).
#[derive(Clone, Debug)]
pub struct LhsBasis {
    order: usize,
    pieces: Vec<Series2>,
}

impl LhsBasis {
    pub fn new(order: usize) -> Result<Self> {
        let (s, t) = (f::s(), f::t());
        let t3i = t.pow(-3);
        let st = &s * &t;
        let mut pieces = Vec::with_capacity(6);
        for nu in 0..3 {
            let j = RatFn::from_poly(basis_j_big(nu)?);
            pieces.push(expand_to_chiral(&(&t3i * &j), order)?);
        }
        let q1 = RatFn::from_poly(basis_q(1)?);
        let q2 = RatFn::from_poly(basis_q(2)?);
        let bq = &q1 - &q2.scale(&ri(2));
        pieces.push(expand_to_chiral(&(&(&t3i * &st) * &bq), order)?);
        pieces.push(expand_to_chiral(&(&(&t3i * &st) * &q2), order)?);
        let norm = &s.pow(3) * &(&f::ci(1) + &t.pow(-4));
        pieces.push(expand_to_chiral(&norm, order)?);
        Ok(LhsBasis { order, pieces })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn eval(&self, p: &PWParams) -> Series2 {
        let mut out = Series2::zero(self.order);
        let coords = p.linear_coords();
        for (c, piece) in coords.iter().zip(&self.pieces) {
            if !c.is_zero() {
                out = &out + &piece.scale(c);
            }
        }
        let b2 = &p.big_b * &p.big_b;
        if !b2.is_zero() {
            out = &out + &self.pieces[5].scale(&b2);
        }
        out
    }
}

/// Chiral expansion of t⁻³P₄ + B²s³(1+t⁻⁴) to total order N.
pub fn lhs_series(p: &PWParams, order: usize) -> Result<Series2> {
    Ok(LhsBasis::new(order)?.eval(p))
}

/// Independent route: (1−x)^{−k} by the binomial series, multiplied into the substituted
/// polynomial coefficient by coefficient.
pub fn lhs_series_oracle(p: &PWParams, order: usize) -> Series2 {
    let inv_pow = |k: i64| -> Series1 {
        Series1::from_coeffs(
            (0..=order as i64)
                .map(|i| Rat::from_integer(binomial(i + k - 1, k - 1)))
                .collect(),
        )
    };
    let (a3, a4) = (inv_pow(3), inv_pow(4));
    let tinv3 = Series2::outer(&a3, &a3, order);
    let tinv4 = Series2::outer(&a4, &a4, order);
    let up = chiral_poly(&assemble_p4(p).poly);
    let mut out = Series2::zero(order);
    for (e, c) in up.terms() {
        let (i, j) = (e[0] as usize, e[1] as usize);
        for ((a, b), w) in tinv3.nonzero() {
            out.add_at(i + a, j + b, &(c * &w));
        }
    }
    let b2 = &p.big_b * &p.big_b;
    if !b2.is_zero() {
        out.add_at(3, 3, &b2);
        for ((a, b), w) in tinv4.nonzero() {
            out.add_at(a + 3, b + 3, &(&b2 * &w));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct TwistLevel {
    pub kappa: usize,
    /// g_κ(u) = u·f_κ(u, 0).
    pub g: Series1,
    pub f: Series2,
    /// Remainder coefficients checked to vanish before extracting this level.
    pub vanishing_checked: usize,
}

#[derive(Clone, Debug)]
pub struct TwistTower {
    pub max_twist: usize,
    pub order: usize,
    pub levels: Vec<TwistLevel>,
}

impl TwistTower {
    pub fn level(&self, kappa: usize) -> Option<&TwistLevel> {
        self.levels.get(kappa.checked_sub(1)?)
    }
}

pub fn twist_extract(p: &PWParams, max_twist: usize, order: usize) -> Result<TwistTower> {
    twist_extract_series(&lhs_series(p, order)?, max_twist)
}

/// Recursive extraction of f₁, …, f_K from a symmetric (u, v) series.
pub fn twist_extract_series(lhs: &Series2, max_twist: usize) -> Result<TwistTower> {
    let n = lhs.order();
    if max_twist == 0 {
        return Err(GciError::Usage("max twist must be at least 1".into()));
    }
    if n + 3 < 2 * max_twist + 1 {
        return Err(GciError::Usage(format!(
            "order {n} too small for twist {max_twist}"
        )));
    }
    let mut rem = lhs.clone();
    let mut levels = Vec::with_capacity(max_twist);
    for kappa in 1..=max_twist {
        let k1 = kappa - 1;
        let mut checked = 0;
        for ((i, j), c) in rem.nonzero() {
            if i < k1 || j < k1 {
                return Err(GciError::Inconsistency(format!(
                    "twist {kappa}: remainder coefficient of u^{i} v^{j} is {} instead of 0",
                    fmt_rat(&c)
                )));
            }
        }
        for d in 0..=n {
            checked += (0..=d).filter(|&j| j < k1 || d - j < k1).count();
        }
        let m = n + 3 - 2 * kappa;
        let mut g = vec![Rat::zero(); m + 1];
        for (i, gi) in g.iter_mut().enumerate().skip(1) {
            *gi = rem.get(i - 1 + k1, k1);
        }
        let g = Series1::from_coeffs(g);
        let hyp = hypergeom_series(k1 as i64, k1 as i64, 2 * k1 as i64, m)?;
        let num = &Series2::outer(&g, &hyp, m) - &Series2::outer(&hyp, &g, m);
        let fk = num.div_antisym()?;
        let mut shifted = Series2::zero(n);
        for ((i, j), c) in fk.nonzero() {
            shifted.add_at(i + k1, j + k1, &c);
        }
        rem = &rem - &shifted;
        levels.push(TwistLevel {
            kappa,
            g,
            f: fk,
            vanishing_checked: checked,
        });
    }
    Ok(TwistTower {
        max_twist,
        order: n,
        levels,
    })
}

/// f₁ = (g(u) − g(v))/(u − v), g(x) = x(1−x)⁻³P₄(0, 1−x), rewritten in (s, t).
pub fn f1_rational(p: &PWParams) -> Result<RatFn> {
    let p4 = assemble_p4(p).poly;
    let x = MPoly::var(1, 0);
    let one = MPoly::one(1);
    let px = p4.subst(&[MPoly::zero(1), &one - &x]);
    let u = MPoly::var(2, 0);
    let v = MPoly::var(2, 1);
    let one2 = MPoly::one(2);
    let pu = px.subst(std::slice::from_ref(&u));
    let pv = px.subst(std::slice::from_ref(&v));
    let num = &(&(&u * &pu) * &(&one2 - &v).pow(3)) - &(&(&v * &pv) * &(&one2 - &u).pow(3));
    let q = num
        .div_exact(&(&u - &v))
        .ok_or_else(|| GciError::Structural("numerator not divisible by u - v".into()))?;
    let red = symmetric_reduce(&q)?;
    let (s, t) = (MPoly::var(2, 0), MPoly::var(2, 1));
    let e1 = &(&one2 + &s) - &t;
    let sym = red.subst(&[e1, s]);
    RatFn::new(sym, t.pow(3))
}

/// s∂²_s f + t∂²_t f + (s+t−1)∂_s∂_t f + 2(∂_s + ∂_t)f.
pub fn laplace_st(fun: &RatFn) -> Result<RatFn> {
    let (s, t) = (f::s(), f::t());
    let fs = fun.deriv(0);
    let ft = fun.deriv(1);
    let fss = fs.deriv(0);
    let ftt = ft.deriv(1);
    let fst = fs.deriv(1);
    let mixed = &(&(&s + &t) - &f::ci(1)) * &fst;
    let first = (&fs + &ft).scale(&ri(2));
    Ok(&(&(&(&s * &fss) + &(&t * &ftt)) + &mixed) + &first)
}

/// t³f₁(0, t) as a univariate polynomial.
pub fn f1_boundary_poly(f1: &RatFn) -> Result<MPoly> {
    let t = MPoly::var(1, 0);
    let full = &f::t().pow(3) * f1;
    let poly = full
        .as_poly()
        .ok_or_else(|| GciError::Structural("t^3 f1 is not a polynomial".into()))?;
    Ok(poly.subst(&[MPoly::zero(1), t]))
}

/// True when deg p ≤ 5 and t⁵p(1/t) = p(t).
pub fn is_palindromic_quintic(p: &MPoly) -> bool {
    if p.total_degree() > 5 {
        return false;
    }
    (0..=5u32).all(|k| p.coeff(&[k]) == p.coeff(&[5 - k]))
}

/// B_{κℓ}, ℓ ≤ L, from g_κ(u) = u Σ_ℓ B_{κℓ} u^{2ℓ} F(2ℓ+κ, 2ℓ+κ; 4ℓ+2κ; u). Even powers of
/// g/u fix the constants; odd powers through 2L+1 must then agree.
pub fn solve_structure_constants(g: &Series1, kappa: usize, max_spin: usize) -> Result<Vec<Rat>> {
    let top = 2 * max_spin + 1;
    if g.order() < top + 1 {
        return Err(GciError::Usage(format!(
            "series order {} too small for spin {max_spin} (need {})",
            g.order(),
            top + 1
        )));
    }
    if !g.coeff(0).is_zero() {
        return Err(GciError::Structural("g(0) must vanish".into()));
    }
    let h: Vec<Rat> = (0..=top).map(|i| g.coeff(i + 1)).collect();
    let mut fitted = vec![Rat::zero(); top + 1];
    let mut out = Vec::with_capacity(max_spin + 1);
    for l in 0..=max_spin {
        let b = &h[2 * l] - &fitted[2 * l];
        let a = (2 * l + kappa) as i64;
        let hyp = hypergeom_series(a, a, 2 * a, top - 2 * l)?;
        for (k, c) in hyp.coeffs().iter().enumerate() {
            fitted[2 * l + k] += &b * c;
        }
        if fitted[2 * l + 1] != h[2 * l + 1] {
            return Err(GciError::Structural(format!(
                "twist {kappa}: odd coefficient u^{} not reproduced ({} vs {})",
                2 * l + 1,
                fmt_rat(&fitted[2 * l + 1]),
                fmt_rat(&h[2 * l + 1])
            )));
        }
        out.push(b);
    }
    Ok(out)
}

/// Structure constants keyed by (κ, ℓ).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureConstants {
    pub entries: BTreeMap<(usize, usize), Rat>,
}

impl StructureConstants {
    pub fn get(&self, kappa: usize, l: usize) -> Option<&Rat> {
        self.entries.get(&(kappa, l))
    }
}

/// Full decomposition to twist K and spin L with the default order.
pub fn decompose(p: &PWParams, max_twist: usize, max_spin: usize) -> Result<StructureConstants> {
    let tower = twist_extract(p, max_twist, default_order(max_twist, max_spin))?;
    decompose_tower(&tower, max_spin)
}

pub fn decompose_tower(tower: &TwistTower, max_spin: usize) -> Result<StructureConstants> {
    let mut sc = StructureConstants::default();
    for lvl in &tower.levels {
        for (l, b) in solve_structure_constants(&lvl.g, lvl.kappa, max_spin)?
            .into_iter()
            .enumerate()
        {
            sc.entries.insert((lvl.kappa, l), b);
        }
    }
    Ok(sc)
}

/// Closed forms for κ = 1, 2, 3.
pub fn closed_form_b(kappa: usize, l: usize, p: &PWParams) -> Result<Rat> {
    let lr = ri(l as i64);
    let li = l as i64;
    let two = ri(2);
    Ok(match kappa {
        1 => {
            let inner = &two * &p.a1 + ri((2 * li - 1) * (li + 1)) * &p.a2;
            let v = &two * &p.a0 + ri(2 * li * (2 * li + 1)) * inner;
            v / Rat::from_integer(binomial(4 * li, 2 * li))
        }
        2 => {
            let inner = ri((li + 1) * (2 * li + 1)) * &p.a1 + &two * &p.b;
            let v = &lr * ri(2 * li + 3) * inner + &p.c;
            v / Rat::from_integer(binomial(4 * li + 1, 2 * li))
        }
        3 => {
            let inner =
                ri((li + 2) * (2 * li + 1)) * (&two * &p.a0 + &p.a1) - ri(6) * &p.b + ri(4) * &p.c;
            let v = ri((li + 1) * (2 * li + 3)) * inner - &p.c;
            v / (two * Rat::from_integer(binomial(4 * li + 3, 2 * li + 1)))
        }
        _ => return Err(GciError::Usage(format!("no closed form for twist {kappa}"))),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Admissible,
    Trivial,
    Rejected,
}

#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub name: String,
    pub value: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaugeBox {
    pub holds: bool,
    /// a₁ + a₂ > 0 fails.
    pub trivial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub conditions: Vec<Condition>,
    pub necessary: bool,
    /// First (κ, ℓ, B) with negative closed-form value.
    pub closed_form_violation: Option<(usize, usize, String)>,
    pub closed_form_scanned: usize,
    /// Solver values for twists above 3 (depend on B).
    pub solver_entries: Vec<(usize, usize, String)>,
    pub solver_violation: Option<(usize, usize, String)>,
    pub gauge_box: Option<GaugeBox>,
    pub verdict: Verdict,
}

/// Necessary conditions, a closed-form scan over κ ≤ 3 and ℓ ≤ L, and solver values for
/// 3 < κ ≤ K up to spin `solver_spin`.
pub fn positivity_check(
    p: &PWParams,
    l_scan: usize,
    max_twist: usize,
    solver_spin: usize,
) -> Result<PositivityReport> {
    let zero = Rat::zero();
    let cond = |name: &str, v: Rat| Condition {
        name: name.into(),
        holds: v >= zero,
        value: fmt_rat(&v),
    };
    let conditions = vec![
        cond("a0 >= 0", p.a0.clone()),
        cond("a1 >= 0", p.a1.clone()),
        cond("a2 >= 0", p.a2.clone()),
        cond("3a1 + b >= 0", ri(3) * &p.a1 + &p.b),
        cond("c >= 0", p.c.clone()),
        cond(
            "6(2a0 + a1 - 3b) + 11c >= 0",
            ri(6) * (ri(2) * &p.a0 + &p.a1 - ri(3) * &p.b) + ri(11) * &p.c,
        ),
    ];
    let necessary = conditions.iter().all(|c| c.holds);
    let mut closed_form_violation = None;
    let mut scanned = 0;
    'scan: for kappa in 1..=3 {
        for l in 0..=l_scan {
            let b = closed_form_b(kappa, l, p)?;
            scanned += 1;
            if b.is_negative() {
                closed_form_violation = Some((kappa, l, fmt_rat(&b)));
                break 'scan;
            }
        }
    }
    let mut solver_entries = Vec::new();
    let mut solver_violation = None;
    if max_twist > 3 {
        let sc = decompose(p, max_twist, solver_spin)?;
        for ((kappa, l), b) in sc.entries.range((4, 0)..) {
            if b.is_negative() && solver_violation.is_none() {
                solver_violation = Some((*kappa, *l, fmt_rat(b)));
            }
            solver_entries.push((*kappa, *l, fmt_rat(b)));
        }
    }
    let gauge_box = (p.a0.is_zero() && p.c.is_zero()).then(|| {
        let holds = !p.a1.is_negative()
            && !p.a2.is_negative()
            && p.b >= -(ri(3) * &p.a1)
            && p.b <= &p.a1 / ri(3);
        GaugeBox {
            holds,
            trivial: (&p.a1 + &p.a2).is_zero(),
        }
    });
    let ok = necessary
        && closed_form_violation.is_none()
        && solver_violation.is_none()
        && gauge_box.as_ref().is_none_or(|g| g.holds);
    let verdict = match (ok, gauge_box.as_ref().is_some_and(|g| g.trivial)) {
        (false, _) => Verdict::Rejected,
        (true, true) => Verdict::Trivial,
        (true, false) => Verdict::Admissible,
    };
    Ok(PositivityReport {
        conditions,
        necessary,
        closed_form_violation,
        closed_form_scanned: scanned,
        solver_entries,
        solver_violation,
        gauge_box,
        verdict,
    })
}

/// Coefficient of t₁^m t₂^n in the OPE kernel:
/// (−1)ⁿ B(ℓ+κ+n+m, ℓ+κ+n) / (4ⁿ B(ℓ+κ, ℓ+κ) m! n! (2ℓ+2κ−1)ₙ).
pub fn kernel_coeff(kappa: u64, l: u64, m: u64, n: u64) -> Result<Rat> {
    if kappa == 0 {
        return Err(GciError::Usage("kappa must be at least 1".into()));
    }
    let a = l + kappa;
    let num = beta_int(a + n + m, a + n);
    let den = num_traits::pow(ri(4), n as usize)
        * beta_int(a, a)
        * Rat::from_integer(factorial(m) * factorial(n))
        * pochhammer(&ri(2 * a as i64 - 1), n);
    let v = num / den;
    Ok(if n % 2 == 1 { -v } else { v })
}

/// Gauss–Legendre nodes and weights on [0, 1].
pub fn gauss_legendre(npts: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(npts);
    for i in 0..npts {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (npts as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=npts {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = npts as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 + x) / 2.0, w / 2.0));
    }
    out
}

/// The kernel coefficient with the Beta integral evaluated by quadrature.
pub fn kernel_coeff_quadrature(kappa: u64, l: u64, m: u64, n: u64) -> f64 {
    let a = (l + kappa) as i32;
    let fact = |k: u64| (1..=k).map(|x| x as f64).product::<f64>();
    let integral: f64 = gauss_legendre(40)
        .into_iter()
        .map(|(x, w)| w * (x * (1.0 - x)).powi(a + n as i32 - 1) * x.powi(m as i32))
        .sum();
    let beta_aa = fact(a as u64 - 1).powi(2) / fact(2 * a as u64 - 1);
    let poch: f64 = (0..n).map(|k| (2 * a as u64 - 1 + k) as f64).product();
    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
    sign * integral / (4f64.powi(n as i32) * beta_aa * fact(m) * fact(n) * poch)
}

/// The twist-2 reconstruction against the logarithmic form
/// [v ln(1−u) g(v) − u ln(1−v) g(u)] / (uv(u−v)) built from the plain log series.
pub fn f2_log_form_check(tower: &TwistTower) -> Result<bool> {
    let lvl = tower
        .level(2)
        .ok_or_else(|| GciError::Usage("tower has no twist-2 level".into()))?;
    let m = lvl.g.order();
    let log1m = Series1::from_coeffs(
        (0..=m)
            .map(|k| {
                if k == 0 {
                    Rat::zero()
                } else {
                    -Rat::new(1.into(), k.into())
                }
            })
            .collect(),
    );
    let xg = lvl.g.shift(1);
    let num = &Series2::outer(&log1m, &xg, m) - &Series2::outer(&xg, &log1m, m);
    let q = num.div_antisym()?;
    let ord = m - 3;
    let mut form = Series2::zero(ord);
    for ((i, j), c) in q.nonzero() {
        if i == 0 || j == 0 {
            return Err(GciError::Structural("log form not divisible by uv".into()));
        }
        form.add_at(i - 1, j - 1, &c);
    }
    Ok(form == lvl.f.truncate(ord))
}

/// Numeric cross-check of B values against decimals.
pub fn b_decimal(b: &Rat) -> f64 {
    rat_to_f64(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;
    use crate::fourpoint::basis_j_small;

    #[test]
    fn hypergeometric() {
        let f0 = hypergeom_series(0, 0, 0, 5).unwrap();
        assert_eq!(f0.coeffs()[0], ri(1));
        assert!(f0.coeffs()[1..].iter().all(|c| c.is_zero()));
        let f1 = hypergeom_series(1, 1, 2, 6).unwrap();
        for n in 0..=6 {
            assert_eq!(f1.coeff(n), rat(1, n as i64 + 1));
        }
        assert!(hypergeom_series(1, 1, -1, 4).is_err());
    }

    #[test]
    fn lhs_constant_and_oracle() {
        let p = PWParams::unit(0);
        assert_eq!(lhs_series(&p, 4).unwrap().get(0, 0), ri(2));
        let mut q = PWParams::new(rat(1, 2), ri(-1), rat(2, 3), ri(3), rat(-5, 7), ri(2));
        assert_eq!(lhs_series(&q, 6).unwrap(), lhs_series_oracle(&q, 6));
        q.big_b = Rat::zero();
        assert_eq!(lhs_series(&q, 6).unwrap(), lhs_series_oracle(&q, 6));
    }

    #[test]
    fn twist_one_for_j0() {
        let tower = twist_extract(&PWParams::unit(0), 2, 10).unwrap();
        // u(2 − u)/(1 − u) = 2u + u² + u³ + …
        let g = &tower.levels[0].g;
        assert_eq!(g.coeff(0), ri(0));
        assert_eq!(g.coeff(1), ri(2));
        for k in 2..=g.order() {
            assert_eq!(g.coeff(k), ri(1));
        }
    }

    #[test]
    fn f1_matches_small_basis() {
        for nu in 0..2 {
            assert_eq!(
                f1_rational(&PWParams::unit(nu)).unwrap(),
                basis_j_small(nu as u32).unwrap()
            );
        }
        assert!(f1_rational(&PWParams::zero()).unwrap().is_zero());
    }

    #[test]
    fn laplace_examples() {
        for nu in 0..3 {
            assert!(laplace_st(&basis_j_small(nu).unwrap()).unwrap().is_zero());
        }
        assert_eq!(laplace_st(&f::s()).unwrap(), f::ci(2));
    }

    #[test]
    fn solver_small_cases() {
        let sc = decompose(&PWParams::unit(0), 3, 2).unwrap();
        assert_eq!(sc.get(1, 0), Some(&ri(2)));
        let sc = decompose(&PWParams::unit(4), 3, 2).unwrap();
        assert_eq!(sc.get(2, 0), Some(&ri(1)));
        assert!(decompose(&PWParams::zero(), 3, 2)
            .unwrap()
            .entries
            .values()
            .all(|b| b.is_zero()));
    }

    #[test]
    fn closed_form_examples() {
        let p = PWParams::new(ri(1), ri(1), ri(1), ri(0), ri(0), ri(0));
        assert_eq!(closed_form_b(1, 0, &p).unwrap(), ri(2));
        assert_eq!(closed_form_b(1, 1, &p).unwrap(), rat(1, 3) + ri(4));
        assert_eq!(closed_form_b(2, 0, &PWParams::unit(4)).unwrap(), ri(1));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_coeff(1, 1, 0, 0).unwrap(), ri(1));
        assert_eq!(kernel_coeff(1, 1, 1, 0).unwrap(), rat(1, 2));
        assert_eq!(kernel_coeff(1, 1, 0, 1).unwrap(), rat(-1, 60));
    }

    #[test]
    fn positivity_examples() {
        let mk = |b: Rat| PWParams::new(ri(0), ri(1), ri(0), b, ri(0), ri(0));
        assert_eq!(
            positivity_check(&mk(rat(1, 3)), 10, 3, 0).unwrap().verdict,
            Verdict::Admissible
        );
        assert_eq!(
            positivity_check(&mk(ri(1)), 10, 3, 0).unwrap().verdict,
            Verdict::Rejected
        );
        assert_eq!(
            positivity_check(&PWParams::zero(), 10, 3, 0)
                .unwrap()
                .verdict,
            Verdict::Trivial
        );
    }
}

#[cfg(test)]
mod closed_form_agreement {
    use super::*;
    use crate::exact::rat::rat;

    #[test]
    fn units_and_mixed() {
        let basis = LhsBasis::new(default_order(3, 10)).unwrap();
        let mut sets: Vec<PWParams> = (0..5).map(PWParams::unit).collect();
        sets.push(PWParams::new(
            rat(1, 2),
            ri(-1),
            rat(2, 3),
            ri(3),
            rat(-5, 7),
            ri(2),
        ));
        for p in sets {
            let tower = twist_extract_series(&basis.eval(&p), 3).unwrap();
            let sc = decompose_tower(&tower, 10).unwrap();
            for kappa in 1..=3 {
                let lmax = if kappa == 3 { 8 } else { 10 };
                for l in 0..=lmax {
                    assert_eq!(
                        sc.get(kappa, l).unwrap(),
                        &closed_form_b(kappa, l, &p).unwrap(),
                        "k={kappa} l={l} p={p:?}"
                    );
                }
            }
            assert!(f2_log_form_check(&tower).unwrap());
        }
    }
}
