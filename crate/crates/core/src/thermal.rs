//! Thermal (Gibbs) states of free fields: Eisenstein series, energy mean values, elliptic
//! functions and KMS checks.
//!
//! q-series coefficients stay exact; complex evaluation is plain f64 with reported bounds.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{GciError, Result};
use crate::exact::qseries::{halfperiod_substitute, QSeries};
use crate::exact::rat::{binomial, divisor_sigma, factorial, rat, rbig, ri, Rat};

type C = Complex64;

fn ci() -> C {
    C::new(0.0, 1.0)
}

/// Bernoulli number Bₖ (B₁ = −1/2) from Σ_{j<k+1} C(k+1, j) B_j = 0.
pub fn bernoulli(k: usize) -> Rat {
    let mut b: Vec<Rat> = vec![Rat::one()];
    for m in 1..=k {
        let mut s = Rat::zero();
        for (j, bj) in b.iter().enumerate() {
            s += rbig(binomial(m as i64 + 1, j as i64)) * bj;
        }
        b.push(-s / ri(m as i64 + 1));
    }
    b.swap_remove(k)
}

/// G₂ₖ = −B₂ₖ/4k + Σ σ₂ₖ₋₁(n) qⁿ through qᴺ.
pub fn eisenstein_g(k: usize, n: usize) -> Result<QSeries> {
    if k == 0 || n == 0 {
        return Err(GciError::Usage(
            "eisenstein_g needs k >= 1 and N >= 1".into(),
        ));
    }
    let mut s = QSeries::zero(0, 2 * n as i64);
    s.add_at(0, &(-bernoulli(2 * k) / ri(4 * k as i64)));
    for m in 1..=n as u64 {
        s.add_at(2 * m as i64, &rbig(divisor_sigma(2 * k as u32 - 1, m)));
    }
    Ok(s)
}

/// Adds c·qⁿ/(1−s·qⁿ) with q = q^{key/2}: key step `step`, sign s = ±1.
fn add_lambert(s: &mut QSeries, step: i64, c: &Rat, alternating: bool) {
    if step <= 0 {
        return;
    }
    let mut j = 1;
    while j * step <= s.max_exp() {
        let c = if alternating && j % 2 == 0 {
            -c.clone()
        } else {
            c.clone()
        };
        s.add_at(j * step, &c);
        j += 1;
    }
}

/// One-particle degeneracy weight of the scalar mode n in D = 2d₀ + 2:
/// (2/(2d₀)!)·n·n²(n²−1)⋯(n²−(d₀−1)²).
pub fn scalar_mode_weight(d0: u64, n: u64) -> Rat {
    let mut p = BigInt::from(2 * n);
    for i in 0..d0 {
        p *= BigInt::from(n * n) - BigInt::from(i * i);
    }
    Rat::new(p, factorial(2 * d0))
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalarEnergy {
    pub dimension: u64,
    #[serde(skip)]
    pub series: QSeries,
    pub vacuum: String,
    pub warnings: Vec<String>,
}

/// Known vacuum constants: 1/240 for D = 4, −31/(12·7!) for D = 6.
pub fn scalar_vacuum_constant(dim: u64) -> Option<Rat> {
    match dim {
        4 => Some(rat(1, 240)),
        6 => Some(Rat::new(BigInt::from(-31), BigInt::from(12) * factorial(7))),
        _ => None,
    }
}

/// E(d₀) + Σ_{n ≥ d₀} weight(n) qⁿ/(1−qⁿ) through qᴺ.
pub fn energy_mean_scalar(dim: u64, n: usize, vacuum: Option<Rat>) -> Result<ScalarEnergy> {
    if dim < 4 || !dim.is_multiple_of(2) {
        return Err(GciError::UnsupportedDimension(format!(
            "D = {dim}: only even D >= 4"
        )));
    }
    let d0 = (dim - 2) / 2;
    let mut warnings = Vec::new();
    let e = match (vacuum, scalar_vacuum_constant(dim)) {
        (Some(v), _) => v,
        (None, Some(v)) => v,
        (None, None) => {
            warnings.push(format!("no vacuum constant known for D = {dim}; using 0"));
            Rat::zero()
        }
    };
    let mut s = QSeries::zero(0, 2 * n as i64);
    s.add_at(0, &e);
    for m in d0.max(1)..=n as u64 {
        add_lambert(&mut s, 2 * m as i64, &scalar_mode_weight(d0, m), false);
    }
    if dim == 6 && n >= 2 {
        warnings.push(format!(
            "mode n=2 carries weight {} (term 2q^2/(1-q^2)); expansions starting at n=3 omit it",
            crate::exact::rat::fmt_rat(&scalar_mode_weight(2, 2))
        ));
    }
    Ok(ScalarEnergy {
        dimension: dim,
        series: s,
        vacuum: crate::exact::rat::fmt_rat(&e),
        warnings,
    })
}

/// Constant term of ¼{8G₄(τ) − G₄((τ+1)/2) + G₂((τ+1)/2) − 2G₂(τ)}.
pub fn weyl_vacuum_energy() -> Rat {
    rat(17, 960)
}

/// Weyl fluctuation sum E₀ + Σ (2n+1)n(n+1) q^{n+½}/(1+q^{n+½}) through qᴺ.
pub fn energy_mean_weyl(n: usize, e0: &Rat) -> QSeries {
    let mut s = QSeries::zero(0, 2 * n as i64);
    s.add_at(0, e0);
    for m in 1..=n as i64 {
        add_lambert(&mut s, 2 * m + 1, &ri((2 * m + 1) * m * (m + 1)), true);
    }
    s
}

/// ¼{a·G₄((τ+1)/2) + b·G₄(τ) + c·G₂((τ+1)/2) + d·G₂(τ)} as a q^{½}-series through qᴺ.
fn weyl_combination(n: usize, coeffs: [i64; 4]) -> Result<QSeries> {
    let g4 = eisenstein_g(2, n)?;
    let g2 = eisenstein_g(1, n)?;
    let g4h = halfperiod_substitute(&eisenstein_g(2, 2 * n)?)?;
    let g2h = halfperiod_substitute(&eisenstein_g(1, 2 * n)?)?;
    let parts = [
        (&g4h, coeffs[0]),
        (&g4, coeffs[1]),
        (&g2h, coeffs[2]),
        (&g2, coeffs[3]),
    ];
    let mut acc = QSeries::zero(0, 2 * n as i64);
    for (s, c) in parts {
        acc = &acc + &s.scale(&rat(c, 4));
    }
    Ok(acc)
}

/// The literal modular line ¼{G₄((τ+1)/2) − 8G₄(τ) − G₂((τ+1)/2) + 2G₂(τ)}.
pub fn weyl_modular_literal(n: usize) -> Result<QSeries> {
    weyl_combination(n, [1, -8, -1, 2])
}

/// The sign-reversed line ¼{8G₄(τ) − G₄((τ+1)/2) + G₂((τ+1)/2) − 2G₂(τ)}.
pub fn weyl_modular_corrected(n: usize) -> Result<QSeries> {
    weyl_combination(n, [-1, 8, 1, -2])
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylEnergyReport {
    pub order: usize,
    /// E₀ fixed by the constant term of the literal line.
    pub e0_literal: String,
    pub literal_equal: bool,
    /// First doubled exponent where the literal line and the fluctuation sum disagree.
    pub literal_first_mismatch: Option<i64>,
    pub e0_corrected: String,
    pub corrected_equal: bool,
}

/// Compares the fluctuation sum with both modular lines, E₀ fixed by their constant terms.
pub fn weyl_energy_report(n: usize) -> Result<WeylEnergyReport> {
    let lit = weyl_modular_literal(n)?;
    let cor = weyl_modular_corrected(n)?;
    let e_lit = lit.coeff(0);
    let e_cor = cor.coeff(0);
    let max = 2 * n as i64;
    let line_lit = energy_mean_weyl(n, &e_lit);
    let line_cor = energy_mean_weyl(n, &e_cor);
    Ok(WeylEnergyReport {
        order: n,
        e0_literal: crate::exact::rat::fmt_rat(&e_lit),
        literal_equal: line_lit.agrees_through(&lit, max),
        literal_first_mismatch: line_lit.first_difference(&lit, max),
        e0_corrected: crate::exact::rat::fmt_rat(&e_cor),
        corrected_equal: line_cor.agrees_through(&cor, max),
    })
}

/// F = 2G₂(τ) − G₂((τ+1)/2) as a q^{½}-series through qᴺ.
pub fn theta_form_f(n: usize) -> Result<QSeries> {
    let g2 = eisenstein_g(1, n)?.scale(&ri(2));
    let g2h = halfperiod_substitute(&eisenstein_g(1, 2 * n)?)?;
    Ok(&g2 - &g2h)
}

fn check_tau(tau: C) -> Result<()> {
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(GciError::Usage(format!(
            "Im tau must be positive (tau = {tau})"
        )));
    }
    Ok(())
}

pub fn nome(tau: C) -> C {
    (2.0 * PI * ci() * tau).exp()
}

/// Parses "0.3+1.2i", "1.1i", "2i", "-0.5+0.8i".
pub fn parse_tau(s: &str) -> Result<C> {
    let bad = || GciError::Usage(format!("cannot parse tau '{s}' (expected a+bi)"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let body = t.strip_suffix('i').ok_or_else(bad)?;
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(k, ch)| (ch == '+' || ch == '-') && !body[..k].ends_with(['e', 'E']))
        .map(|(k, _)| k)
        .last();
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let tau = C::new(re, im);
    check_tau(tau)?;
    Ok(tau)
}

/// G₂ₖ(τ) by direct Lambert summation to N terms; returns (value, tail bound).
pub fn eisenstein_numeric(k: usize, tau: C, n: usize) -> Result<(C, f64)> {
    check_tau(tau)?;
    if k == 0 {
        return Err(GciError::Usage("k >= 1".into()));
    }
    let q = nome(tau);
    let aq = q.norm();
    let c0 = crate::exact::rat::rat_to_f64(&(-bernoulli(2 * k) / ri(4 * k as i64)));
    let mut acc = C::new(c0, 0.0);
    let mut qn = C::new(1.0, 0.0);
    for m in 1..=n {
        qn *= q;
        acc += (m as f64).powi(2 * k as i32 - 1) * qn / (C::new(1.0, 0.0) - qn);
    }
    let next = ((n + 1) as f64).powi(2 * k as i32 - 1) * aq.powi(n as i32 + 1)
        / (1.0 - aq.powi(n as i32 + 1));
    let bound = 10.0 * next / (1.0 - aq) + 1e-15 * acc.norm().max(1.0) * n as f64;
    if !bound.is_finite() || bound > 1e-6 {
        return Err(GciError::Precision(format!(
            "Lambert sum for G{} not converged at tau = {tau}",
            2 * k
        )));
    }
    Ok((acc, bound))
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularResidual {
    pub s_residual: f64,
    pub t_residual: f64,
    pub bound: f64,
    pub max: f64,
}

/// Weight-2k residuals of G₂ₖ under S: τ ↦ −1/τ and T: τ ↦ τ+1.
pub fn modular_check_g(k: usize, tau: C, n: usize) -> Result<ModularResidual> {
    if k < 2 {
        return Err(GciError::Usage(
            "modular_check_g needs k >= 2 (use g2_anomaly_check for k = 1)".into(),
        ));
    }
    let (g, b0) = eisenstein_numeric(k, tau, n)?;
    let (gs, b1) = eisenstein_numeric(k, -1.0 / tau, n)?;
    let (gt, b2) = eisenstein_numeric(k, tau + 1.0, n)?;
    let s = (gs * tau.powi(-2 * k as i32) - g).norm();
    let t = (gt - g).norm();
    let bound = b0 + b1 * tau.norm().powi(-2 * k as i32) + b2;
    Ok(ModularResidual {
        s_residual: s,
        t_residual: t,
        bound,
        max: s.max(t),
    })
}

/// Residual of τ⁻²G₂(−1/τ) = G₂(τ) + i/(4πτ).
pub fn g2_anomaly_check(tau: C, n: usize) -> Result<f64> {
    let (g, _) = eisenstein_numeric(1, tau, n)?;
    let (gs, _) = eisenstein_numeric(1, -1.0 / tau, n)?;
    Ok((gs / (tau * tau) - g - ci() / (4.0 * PI * tau)).norm())
}

fn f_numeric(tau: C, n: usize) -> Result<C> {
    let (g, _) = eisenstein_numeric(1, tau, n)?;
    let (gh, _) = eisenstein_numeric(1, (tau + 1.0) / 2.0, n)?;
    Ok(2.0 * g - gh)
}

#[derive(Clone, Debug, Serialize)]
pub struct Weight2Residual {
    pub s_residual: f64,
    pub t2_residual: f64,
}

/// τ⁻²F(−1/τ) = F(τ) and F(τ+2) = F(τ).
pub fn weight2_check(tau: C, n: usize) -> Result<Weight2Residual> {
    check_tau(tau)?;
    let f = f_numeric(tau, n)?;
    let fs = f_numeric(-1.0 / tau, n)?;
    let ft = f_numeric(tau + 2.0, n)?;
    Ok(Weight2Residual {
        s_residual: (fs / (tau * tau) - f).norm(),
        t2_residual: (ft - f).norm(),
    })
}

/// (csc w, cot w) through exponentials of the decaying sign, safe for large |Im w|.
fn csc_cot(w: C) -> Result<(C, C)> {
    let one = C::new(1.0, 0.0);
    let (e, flip) = if w.im >= 0.0 {
        ((ci() * w).exp(), false)
    } else {
        ((-ci() * w).exp(), true)
    };
    let e2 = e * e;
    let den = if flip { one - e2 } else { e2 - one };
    if den.norm() < 1e-13 {
        return Err(GciError::Pole(format!("sin vanishes at {w}")));
    }
    let csc = 2.0 * ci() * e / den;
    let cot = if flip {
        ci() * (one + e2) / (one - e2)
    } else {
        ci() * (e2 + one) / (e2 - one)
    };
    Ok((csc, cot))
}

fn series_nome_check(zeta: C, tau: C) -> Result<()> {
    check_tau(tau)?;
    if zeta.im.abs() >= tau.im {
        return Err(GciError::Precision(
            "|Im zeta| must stay below Im tau for the q-expansion".into(),
        ));
    }
    Ok(())
}

/// p₁(ζ, τ) = π cot πζ + 4π Σ_{n≤N} qⁿ/(1−qⁿ) sin 2πnζ.
pub fn elliptic_p1(zeta: C, tau: C, n: usize) -> Result<C> {
    series_nome_check(zeta, tau)?;
    let (_, cot) = csc_cot(PI * zeta)?;
    let q = nome(tau);
    let mut acc = PI * cot;
    let mut qn = C::new(1.0, 0.0);
    for m in 1..=n {
        qn *= q;
        acc += 4.0 * PI * qn / (1.0 - qn) * (2.0 * PI * m as f64 * zeta).sin();
    }
    Ok(acc)
}

/// Symmetric lattice window Σ_{|m|≤M} π cot π(ζ + mτ), the Euler-summed row of the double sum.
pub fn elliptic_p1_lattice(zeta: C, tau: C, m: usize) -> Result<C> {
    check_tau(tau)?;
    let mut acc = C::zero();
    for k in -(m as i64)..=m as i64 {
        let (_, cot) = csc_cot(PI * (zeta + k as f64 * tau))?;
        acc += PI * cot;
    }
    Ok(acc)
}

/// p₁¹¹ (k = 1) and p₂¹¹ = −∂ζ p₁¹¹ (k = 2), summed over |n| ≤ N.
pub fn elliptic_p_k11(k: u32, zeta: C, tau: C, n: usize) -> Result<C> {
    check_tau(tau)?;
    let mut acc = C::zero();
    for m in -(n as i64)..=n as i64 {
        let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let (csc, cot) = csc_cot(PI * (zeta + m as f64 * tau))?;
        acc += sign
            * match k {
                1 => PI * csc,
                2 => PI * PI * cot * csc,
                _ => {
                    return Err(GciError::Usage(
                        "only p_1^11 and p_2^11 are available".into(),
                    ))
                }
            };
    }
    Ok(acc)
}

fn check_alpha(alpha: f64) -> Result<f64> {
    let s = (2.0 * PI * alpha).sin();
    if s.abs() < 1e-12 {
        return Err(GciError::Degenerate("sin 2 pi alpha = 0".into()));
    }
    Ok(s)
}

/// Scalar vacuum function −1/(4 sin πζ₊ sin πζ₋).
pub fn scalar_vacuum_2pt(zeta: C, alpha: f64) -> Result<C> {
    let (a, _) = csc_cot(PI * (zeta + alpha))?;
    let (b, _) = csc_cot(PI * (zeta - alpha))?;
    Ok(-0.25 * a * b)
}

/// Scalar Gibbs function (p₁(ζ₊) − p₁(ζ₋))/(4π sin 2πα).
pub fn gibbs_scalar_2pt(zeta: C, alpha: f64, tau: C, n: usize) -> Result<C> {
    let s = check_alpha(alpha)?;
    Ok((elliptic_p1(zeta + alpha, tau, n)? - elliptic_p1(zeta - alpha, tau, n)?) / (4.0 * PI * s))
}

/// The same function from its mode expansion w₀ + 2Σ qⁿ/(1−qⁿ)·sin 2πnα/sin 2πα·cos 2πnζ.
pub fn gibbs_scalar_modes(zeta: C, alpha: f64, tau: C, n: usize) -> Result<C> {
    let s = check_alpha(alpha)?;
    series_nome_check(zeta, tau)?;
    let q = nome(tau);
    let mut acc = scalar_vacuum_2pt(zeta, alpha)?;
    let mut qn = C::new(1.0, 0.0);
    for m in 1..=n {
        qn *= q;
        let mf = m as f64;
        acc += 2.0 * qn / (1.0 - qn)
            * ((2.0 * PI * mf * alpha).sin() / s)
            * (2.0 * PI * mf * zeta).cos();
    }
    Ok(acc)
}

/// 2×2 complex matrix.
pub type CMat2 = [[C; 2]; 2];

fn mat_scale(m: &CMat2, c: C) -> CMat2 {
    [[m[0][0] * c, m[0][1] * c], [m[1][0] * c, m[1][1] * c]]
}

fn mat_add(a: &CMat2, b: &CMat2) -> CMat2 {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

pub fn mat_dist(a: &CMat2, b: &CMat2) -> f64 {
    (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (a[i][j] - b[i][j]).norm())
        .fold(0.0, f64::max)
}

/// z̸⁺ = z₄ − z·Q with Q_j = −iσ_j, for complex z.
pub fn slash_conj_complex(z: &[C; 4]) -> CMat2 {
    let i = ci();
    // z·Q = −i(z₁σ₁ + z₂σ₂ + z₃σ₃)
    let zq = [
        [-i * z[2], -i * (z[0] - i * z[1])],
        [-i * (z[0] + i * z[1]), i * z[2]],
    ];
    [[z[3] - zq[0][0], -zq[0][1]], [-zq[1][0], z[3] - zq[1][1]]]
}

fn dot_c(a: &[C; 4], b: &[C; 4]) -> C {
    (0..4).map(|k| a[k] * b[k]).sum()
}

/// Isotropic pair (v, v̄) with u₁ = e^{iπα}v + e^{−iπα}v̄, u₂ = e^{−iπα}v + e^{iπα}v̄, and α
/// from cos 2πα = u₁·u₂, α ∈ (0, ½).
pub fn isotropic_pair(u1: &[f64; 4], u2: &[f64; 4]) -> Result<(f64, [C; 4], [C; 4])> {
    let n1: f64 = u1.iter().map(|x| x * x).sum();
    let n2: f64 = u2.iter().map(|x| x * x).sum();
    if (n1 - 1.0).abs() > 1e-12 || (n2 - 1.0).abs() > 1e-12 {
        return Err(GciError::Usage("u1 and u2 must be unit vectors".into()));
    }
    let c: f64 = (0..4).map(|k| u1[k] * u2[k]).sum();
    let alpha = c.clamp(-1.0, 1.0).acos() / (2.0 * PI);
    let s = (2.0 * PI * alpha).sin();
    if s.abs() < 1e-9 {
        return Err(GciError::Degenerate("u1 and u2 are collinear".into()));
    }
    let e = (ci() * PI * alpha).exp();
    let det = 2.0 * ci() * s;
    let v: [C; 4] = std::array::from_fn(|k| (e * u1[k] - e.conj() * u2[k]) / det);
    let vb: [C; 4] = std::array::from_fn(|k| (e * u2[k] - e.conj() * u1[k]) / det);
    Ok((alpha, v, vb))
}

/// Isotropy residuals |v·v|, |v̄·v̄|, |2v·v̄ − 1|.
pub fn isotropy_residual(v: &[C; 4], vb: &[C; 4]) -> f64 {
    dot_c(v, v)
        .norm()
        .max(dot_c(vb, vb).norm())
        .max((2.0 * dot_c(v, vb) - 1.0).norm())
}

/// Weyl vacuum function i/(8 sin πζ₋ sin πζ₊)·(v̸⁺/sin πζ₋ + v̸̄⁺/sin πζ₊).
pub fn weyl_vacuum_2pt(zeta: C, u1: &[f64; 4], u2: &[f64; 4]) -> Result<CMat2> {
    let (alpha, v, vb) = isotropic_pair(u1, u2)?;
    let (cm, _) = csc_cot(PI * (zeta - alpha))?;
    let (cp, _) = csc_cot(PI * (zeta + alpha))?;
    let pre = ci() / 8.0 * cm * cp;
    Ok(mat_add(
        &mat_scale(&slash_conj_complex(&v), pre * cm),
        &mat_scale(&slash_conj_complex(&vb), pre * cp),
    ))
}

/// The vacuum function in partial fractions over sin πζ±; coincides with `weyl_vacuum_2pt`.
pub fn weyl_vacuum_2pt_partial(zeta: C, u1: &[f64; 4], u2: &[f64; 4]) -> Result<CMat2> {
    let (alpha, v, vb) = isotropic_pair(u1, u2)?;
    let s = (2.0 * PI * alpha).sin();
    let cot2a = (2.0 * PI * alpha).cos() / s;
    let (cm, km) = csc_cot(PI * (zeta - alpha))?;
    let (cp, kp) = csc_cot(PI * (zeta + alpha))?;
    let a = km * cm - cot2a * cm + cp / s;
    let b = kp * cp + cot2a * cp - cm / s;
    let pre = ci() / (8.0 * s);
    Ok(mat_add(
        &mat_scale(&slash_conj_complex(&v), pre * a),
        &mat_scale(&slash_conj_complex(&vb), -pre * b),
    ))
}

/// Weyl Gibbs function from p₁¹¹, p₂¹¹; the p₂¹¹ terms enter divided by π so that the q → 0
/// limit is the vacuum function.
pub fn gibbs_weyl_2pt(zeta: C, u1: &[f64; 4], u2: &[f64; 4], tau: C, n: usize) -> Result<CMat2> {
    let (alpha, v, vb) = isotropic_pair(u1, u2)?;
    let s = (2.0 * PI * alpha).sin();
    let cot2a = (2.0 * PI * alpha).cos() / s;
    let (zm, zp) = (zeta - alpha, zeta + alpha);
    let p1m = elliptic_p_k11(1, zm, tau, n)?;
    let p1p = elliptic_p_k11(1, zp, tau, n)?;
    let p2m = elliptic_p_k11(2, zm, tau, n)?;
    let p2p = elliptic_p_k11(2, zp, tau, n)?;
    let a = p2m / PI - cot2a * p1m + p1p / s;
    let b = p2p / PI + cot2a * p1p - p1m / s;
    let pre = ci() / (8.0 * PI * s);
    Ok(mat_add(
        &mat_scale(&slash_conj_complex(&v), pre * a),
        &mat_scale(&slash_conj_complex(&vb), -pre * b),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ThermalModel {
    /// Massless scalar in D = 4.
    Scalar,
    /// Weyl field in D = 4.
    Weyl,
}

#[derive(Clone, Debug, Serialize)]
pub struct KmsReport {
    pub window: usize,
    /// Translate sum against the closed form.
    pub closed_form_residual: f64,
    /// w(ζ+τ) ∓ w(ζ) from the translate sums.
    pub tau_shift_residual: f64,
    /// w(ζ+1) ∓ w(ζ) from the translate sums.
    pub unit_shift_residual: f64,
    pub edge_bound: f64,
    pub passed: bool,
}

/// Translate sum Σ_{|k|≤K} (−1)^{2k d} w₀(ζ + kτ) against the closed Gibbs function, plus the
/// (anti)periodicity in ζ ↦ ζ+1 and ζ ↦ ζ+τ; every residual must sit under the edge bound.
pub fn kms_translate_sum_check(
    model: ThermalModel,
    zeta: f64,
    alpha: f64,
    tau: C,
    window: usize,
    tol: f64,
) -> Result<KmsReport> {
    if window < 3 {
        return Err(GciError::Usage("the translate window needs K >= 3".into()));
    }
    check_tau(tau)?;
    let z = C::new(zeta, 0.0);
    let (u1, u2) = unit_pair(alpha);
    let (sign, w0): (f64, Box<dyn Fn(C) -> Result<CMat2>>) = match model {
        ThermalModel::Scalar => (
            1.0,
            Box::new(move |x| {
                let v = scalar_vacuum_2pt(x, alpha)?;
                Ok([[v, C::zero()], [C::zero(), C::zero()]])
            }),
        ),
        ThermalModel::Weyl => (-1.0, Box::new(move |x| weyl_vacuum_2pt(x, &u1, &u2))),
    };
    let translate = |x: C, kmax: i64| -> Result<CMat2> {
        let mut acc = [[C::zero(); 2]; 2];
        for k in -kmax..=kmax {
            let sg = if k.rem_euclid(2) == 1 { sign } else { 1.0 };
            acc = mat_add(&acc, &mat_scale(&w0(x + k as f64 * tau)?, C::new(sg, 0.0)));
        }
        Ok(acc)
    };
    let k = window as i64;
    // edge terms of the truncated sum, extrapolated geometrically
    let aq = nome(tau).norm();
    let tail = |x: C| -> Result<f64> {
        let a = mat_norm(&w0(x + (k + 1) as f64 * tau)?);
        let b = mat_norm(&w0(x - (k + 1) as f64 * tau)?);
        Ok((a + b) / (1.0 - aq.sqrt()))
    };
    let edge_bound = 4.0 * tail(z)?.max(tail(z + tau)?) + 1e-13;
    let wk = translate(z, k)?;
    let closed = match model {
        ThermalModel::Scalar => {
            let v = gibbs_scalar_2pt(z, alpha, tau, 4 * window + 40)?;
            [[v, C::zero()], [C::zero(), C::zero()]]
        }
        ThermalModel::Weyl => gibbs_weyl_2pt(z, &u1, &u2, tau, 4 * window + 40)?,
    };
    let closed_form_residual = mat_dist(&wk, &closed);
    let tau_shift_residual = mat_dist(&translate(z + tau, k)?, &mat_scale(&wk, C::new(sign, 0.0)));
    let unit_shift_residual = mat_dist(&translate(z + 1.0, k)?, &mat_scale(&wk, C::new(sign, 0.0)));
    let passed = closed_form_residual <= edge_bound.max(tol)
        && tau_shift_residual <= 2.0 * edge_bound
        && unit_shift_residual <= tol.max(1e-12);
    Ok(KmsReport {
        window,
        closed_form_residual,
        tau_shift_residual,
        unit_shift_residual,
        edge_bound,
        passed,
    })
}

fn mat_norm(m: &CMat2) -> f64 {
    m.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Unit vectors u₁ = e₄, u₂ = cos 2πα e₄ + sin 2πα e₁.
pub fn unit_pair(alpha: f64) -> ([f64; 4], [f64; 4]) {
    let (s, c) = (2.0 * PI * alpha).sin_cos();
    ([0.0, 0.0, 0.0, 1.0], [s, 0.0, 0.0, c])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(6), rat(1, 42));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(-bernoulli(4) / ri(8), rat(1, 240));
    }

    #[test]
    fn eisenstein_coefficients() {
        let g4 = eisenstein_g(2, 10).unwrap();
        assert_eq!(g4.coeff_int(0), rat(1, 240));
        assert_eq!(g4.coeff_int(2), ri(9));
        assert_eq!(eisenstein_g(1, 3).unwrap().coeff_int(0), rat(-1, 24));
    }

    #[test]
    fn scalar_energies() {
        let e4 = energy_mean_scalar(4, 100, None).unwrap();
        assert!(e4
            .series
            .agrees_through(&eisenstein_g(2, 100).unwrap(), 200));
        let e6 = energy_mean_scalar(6, 100, None).unwrap();
        let rhs =
            (&eisenstein_g(3, 100).unwrap() - &eisenstein_g(2, 100).unwrap()).scale(&rat(1, 12));
        assert!(e6.series.agrees_through(&rhs, 200));
        assert_eq!(e6.series.coeff_int(0), rat(-31, 60480));
        assert_eq!(scalar_mode_weight(2, 3), ri(18));
        assert_eq!(scalar_mode_weight(2, 4), ri(80));
        assert_eq!(scalar_mode_weight(2, 2), ri(2));
        assert!(!e6.warnings.is_empty());
        assert!(energy_mean_scalar(5, 4, None).is_err());
        assert!(!energy_mean_scalar(8, 4, None).unwrap().warnings.is_empty());
    }

    #[test]
    fn weyl_lines() {
        let r = weyl_energy_report(25).unwrap();
        assert_eq!(r.e0_literal, "-17/960");
        assert_eq!(r.e0_corrected, "17/960");
        assert!(r.corrected_equal);
        assert!(!r.literal_equal);
        assert!(r.literal_first_mismatch.is_some());
        let s = energy_mean_weyl(3, &weyl_vacuum_energy());
        assert_eq!(s.coeff(3), ri(6));
    }

    #[test]
    fn theta_series() {
        let f = theta_form_f(10).unwrap();
        assert_eq!(f.coeff(0), rat(-1, 24));
        // q^{1/2} = e^{iπτ} is fixed by τ ↦ τ+2
        assert!(f.terms().any(|(k, _)| k % 2 == 1));
    }

    #[test]
    fn parse_tau_forms() {
        assert_eq!(parse_tau("1.1i").unwrap(), C::new(0.0, 1.1));
        assert_eq!(parse_tau("0.3+1.2i").unwrap(), C::new(0.3, 1.2));
        assert_eq!(parse_tau("-0.5+2i").unwrap(), C::new(-0.5, 2.0));
        assert!(parse_tau("1.2").is_err());
        assert!(parse_tau("0.3-1.2i").is_err());
    }

    #[test]
    fn modular_numerics() {
        for tau in [C::new(0.0, 1.1), C::new(0.3, 1.2)] {
            assert!(modular_check_g(2, tau, 200).unwrap().max < 1e-10);
            assert!(modular_check_g(3, tau, 200).unwrap().max < 1e-10);
        }
        for tau in [C::new(0.0, 1.3), C::new(0.0, 1.0), C::new(0.1, 4.0)] {
            assert!(g2_anomaly_check(tau, 300).unwrap() < 1e-10);
        }
        let w = weight2_check(C::new(0.0, 1.3), 300).unwrap();
        assert!(w.s_residual < 1e-8 && w.t2_residual < 1e-12, "{w:?}");
    }

    #[test]
    fn p1_forms() {
        let tau = C::new(0.0, 2.0);
        assert!(elliptic_p1(C::new(0.5, 0.0), tau, 40).unwrap().norm() < 1e-12);
        let z = C::new(0.23, 0.0);
        let a = elliptic_p1(z, C::new(0.1, 1.5), 60).unwrap();
        let b = elliptic_p1_lattice(z, C::new(0.1, 1.5), 30).unwrap();
        assert!((a - b).norm() < 1e-10, "{a} {b}");
        assert!(
            (elliptic_p1(-z, tau, 40).unwrap() + elliptic_p1(z, tau, 40).unwrap()).norm() < 1e-12
        );
        assert!(elliptic_p1(C::new(1.0, 0.0), tau, 10).is_err());
    }

    #[test]
    fn pk11_periodicity() {
        let tau = C::new(0.0, 1.5);
        let z = C::new(0.23, 0.0);
        for k in [1, 2] {
            let p = elliptic_p_k11(k, z, tau, 40).unwrap();
            assert!((elliptic_p_k11(k, z + 1.0, tau, 40).unwrap() + p).norm() < 1e-8);
            assert!((elliptic_p_k11(k, z + tau, tau, 40).unwrap() + p).norm() < 1e-8);
        }
        let h = 1e-5;
        let fd = -(elliptic_p_k11(1, z + h, tau, 40).unwrap()
            - elliptic_p_k11(1, z - h, tau, 40).unwrap())
            / (2.0 * h);
        let p2 = elliptic_p_k11(2, z, tau, 40).unwrap();
        assert!((fd - p2).norm() / p2.norm() < 1e-6);
    }

    #[test]
    fn scalar_gibbs() {
        let (z, a, tau) = (C::new(0.13, 0.0), 0.37, C::new(0.0, 1.5));
        let p = gibbs_scalar_2pt(z, a, tau, 60).unwrap();
        let m = gibbs_scalar_modes(z, a, tau, 60).unwrap();
        assert!((p - m).norm() < 1e-12);
        let vac = gibbs_scalar_2pt(z, a, C::new(0.0, 12.0), 10).unwrap();
        assert!((vac - scalar_vacuum_2pt(z, a).unwrap()).norm() < 1e-12);
        assert!(gibbs_scalar_2pt(z, 0.5, tau, 10).is_err());
    }

    #[test]
    fn weyl_gibbs() {
        let (u1, u2) = unit_pair(0.37);
        let (_, v, vb) = isotropic_pair(&u1, &u2).unwrap();
        assert!(isotropy_residual(&v, &vb) < 1e-13);
        let z = C::new(0.13, 0.0);
        let a = weyl_vacuum_2pt(z, &u1, &u2).unwrap();
        let b = weyl_vacuum_2pt_partial(z, &u1, &u2).unwrap();
        assert!(mat_dist(&a, &b) < 1e-12);
        let tau = C::new(0.0, 1.5);
        let w = gibbs_weyl_2pt(z, &u1, &u2, tau, 40).unwrap();
        let w1 = gibbs_weyl_2pt(z + 1.0, &u1, &u2, tau, 40).unwrap();
        assert!(mat_dist(&w1, &mat_scale(&w, C::new(-1.0, 0.0))) < 1e-8);
        let cold = gibbs_weyl_2pt(z, &u1, &u2, C::new(0.0, 10.0), 10).unwrap();
        assert!(mat_dist(&cold, &a) < 1e-10);
        assert!(isotropic_pair(&u1, &u1).is_err());
    }

    #[test]
    fn kms_sums() {
        let tau = C::new(0.0, 1.5);
        let s = kms_translate_sum_check(ThermalModel::Scalar, 0.13, 0.37, tau, 8, 1e-8).unwrap();
        assert!(s.passed && s.closed_form_residual < 1e-8, "{s:?}");
        let w = kms_translate_sum_check(ThermalModel::Weyl, 0.13, 0.37, tau, 8, 1e-8).unwrap();
        assert!(w.passed, "{w:?}");
        let s4 =
            kms_translate_sum_check(ThermalModel::Scalar, 0.13, 0.37, C::new(0.0, 0.4), 4, 1e-8)
                .unwrap();
        let s8 =
            kms_translate_sum_check(ThermalModel::Scalar, 0.13, 0.37, C::new(0.0, 0.4), 8, 1e-8)
                .unwrap();
        assert!(
            s8.closed_form_residual < s4.closed_form_residual * 1e-2,
            "{s4:?} {s8:?}"
        );
    }
}
