//! Quaternion realization of 4-vectors and exact Wick correlators of the free-field bilocals
//! V₁⁽⁰⁾ = :φφ: and V₁⁽¹⁾ (Weyl), together with the composite fields ℒ⁽⁰⁾, ℒ⁽¹⁾.

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{GciError, Result};
use crate::exact::gauss::Gauss;
use crate::exact::mpoly::MPoly;
use crate::exact::rat::{ri, Rat};
use crate::kinematics::{random_config, sub, Point, PointConfig};

/// Minimal commutative ring interface for matrix entries.
pub trait Ring: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
}

impl Ring for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(self.arity())
    }
    fn one_like(&self) -> Self {
        MPoly::one(self.arity())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        *self == 0.0
    }
}

impl<T: Ring> Ring for Gauss<T> {
    fn zero_like(&self) -> Self {
        Gauss::new(self.re.zero_like(), self.re.zero_like())
    }
    fn one_like(&self) -> Self {
        Gauss::new(self.re.one_like(), self.re.zero_like())
    }
    fn add(&self, o: &Self) -> Self {
        Gauss::new(self.re.add(&o.re), self.im.add(&o.im))
    }
    fn sub(&self, o: &Self) -> Self {
        Gauss::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }
    fn mul(&self, o: &Self) -> Self {
        Gauss::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }
    fn neg(&self) -> Self {
        Gauss::new(self.re.neg(), self.im.neg())
    }
    fn is_zero_elem(&self) -> bool {
        self.re.is_zero_elem() && self.im.is_zero_elem()
    }
}

/// 2×2 matrix over a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<T> {
    pub e: [[T; 2]; 2],
}

impl<T: Ring> Mat2<T> {
    pub fn identity_like(x: &T) -> Self {
        let (z, o) = (x.zero_like(), x.one_like());
        Mat2 {
            e: [[o.clone(), z.clone()], [z, o]],
        }
    }

    pub fn scalar(c: T) -> Self {
        let z = c.zero_like();
        Mat2 {
            e: [[c.clone(), z.clone()], [z, c]],
        }
    }

    pub fn mul(&self, o: &Mat2<T>) -> Mat2<T> {
        let m = |i: usize, j: usize| {
            self.e[i][0]
                .mul(&o.e[0][j])
                .add(&self.e[i][1].mul(&o.e[1][j]))
        };
        Mat2 {
            e: [[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]],
        }
    }

    pub fn add(&self, o: &Mat2<T>) -> Mat2<T> {
        let m = |i: usize, j: usize| self.e[i][j].add(&o.e[i][j]);
        Mat2 {
            e: [[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]],
        }
    }

    pub fn scale(&self, c: &T) -> Mat2<T> {
        let m = |i: usize, j: usize| self.e[i][j].mul(c);
        Mat2 {
            e: [[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]],
        }
    }

    pub fn neg(&self) -> Mat2<T> {
        let m = |i: usize, j: usize| self.e[i][j].neg();
        Mat2 {
            e: [[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]],
        }
    }

    pub fn trace(&self) -> T {
        self.e[0][0].add(&self.e[1][1])
    }
}

pub type Quat = Mat2<Gauss<Rat>>;

/// z̸ = z₄ + z·Q or z̸⁺ = z₄ − z·Q, with Q_j = −iσ_j.
pub fn slash_generic<T: Ring>(z: &[T; 4], conjugate: bool) -> Mat2<Gauss<T>> {
    let g = |re: T, im: T| Gauss::new(re, im);
    let (z1, z2, z3, z4) = (&z[0], &z[1], &z[2], &z[3]);
    let sg = |x: T| if conjugate { x.neg() } else { x };
    Mat2 {
        e: [
            [g(z4.clone(), sg(z3.neg())), g(sg(z2.neg()), sg(z1.neg()))],
            [
                g(sg(z2.clone()), sg(z1.neg())),
                g(z4.clone(), sg(z3.clone())),
            ],
        ],
    }
}

pub fn slash(z: &Point, conjugate: bool) -> Quat {
    slash_generic(z, conjugate)
}

/// Determinant of the 4×4 matrix with columns a, b, c, d.
pub fn det4_generic<T: Ring>(a: &[T; 4], b: &[T; 4], c: &[T; 4], d: &[T; 4]) -> T {
    let cols = [a, b, c, d];
    let mut acc = a[0].zero_like();
    for perm in permutations(4) {
        let mut term = a[0].one_like();
        for (row, &col) in perm.iter().enumerate() {
            term = term.mul(&cols[col][row]);
        }
        acc = if perm_sign(&perm) > 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

pub fn det4(a: &Point, b: &Point, c: &Point, d: &Point) -> Rat {
    det4_generic(a, b, c, d)
}

fn dot_generic<T: Ring>(a: &[T; 4], b: &[T; 4]) -> T {
    (0..4).fold(a[0].zero_like(), |acc, k| acc.add(&a[k].mul(&b[k])))
}

fn trace4_sides<T: Ring>(a: &[T; 4], b: &[T; 4], c: &[T; 4], d: &[T; 4]) -> (Gauss<T>, Gauss<T>) {
    let lhs = slash_generic(a, false)
        .mul(&slash_generic(b, true))
        .mul(&slash_generic(c, false))
        .mul(&slash_generic(d, true))
        .trace();
    let two = a[0].one_like().add(&a[0].one_like());
    let ab_cd = dot_generic(a, b).mul(&dot_generic(c, d));
    let ac_bd = dot_generic(a, c).mul(&dot_generic(b, d));
    let ad_bc = dot_generic(a, d).mul(&dot_generic(b, c));
    let rhs = two.mul(&ab_cd.sub(&ac_bd).add(&ad_bc).add(&det4_generic(a, b, c, d)));
    (lhs, Gauss::new(rhs, a[0].zero_like()))
}

/// tr(a̸ b̸⁺ c̸ d̸⁺) = 2[(ab)(cd) − (ac)(bd) + (ad)(bc) + det(a, b, c, d)].
pub fn trace4_identity_check(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let (l, r) = trace4_sides(a, b, c, d);
    l == r
}

fn coord_vectors(count: usize) -> (usize, Vec<[MPoly; 4]>) {
    let arity = 4 * count;
    let vs = (0..count)
        .map(|k| std::array::from_fn(|mu| MPoly::var(arity, 4 * k + mu)))
        .collect();
    (arity, vs)
}

/// The four-vector trace identity as a polynomial identity in 16 coordinates.
pub fn trace4_identity_symbolic() -> bool {
    let (_, v) = coord_vectors(4);
    let (l, r) = trace4_sides(&v[0], &v[1], &v[2], &v[3]);
    l == r
}

/// z̸w̸⁺ + w̸z̸⁺ = 2(zw) = z̸⁺w̸ + w̸⁺z̸ in 8 coordinates.
pub fn anticommutation_symbolic() -> bool {
    let (_, v) = coord_vectors(2);
    let (z, w) = (&v[0], &v[1]);
    let two_zw = dot_generic(z, w).scale(&ri(2));
    let want = Mat2::scalar(Gauss::new(two_zw.clone(), two_zw.zero_like()));
    let a = slash_generic(z, false)
        .mul(&slash_generic(w, true))
        .add(&slash_generic(w, false).mul(&slash_generic(z, true)));
    let b = slash_generic(z, true)
        .mul(&slash_generic(w, false))
        .add(&slash_generic(w, true).mul(&slash_generic(z, false)));
    a == want && b == want
}

fn diff<T: Ring>(z: &[[T; 4]], i: usize, j: usize) -> [T; 4] {
    std::array::from_fn(|mu| z[i][mu].sub(&z[j][mu]))
}

fn interval_sides<T: Ring>(z: &[[T; 4]]) -> bool {
    let rho = |i, j| {
        let d = diff(z, i, j);
        dot_generic(&d, &d)
    };
    let two = z[0][0].one_like().add(&z[0][0].one_like());
    let lhs1 = two.mul(&dot_generic(&diff(z, 0, 1), &diff(z, 1, 2)));
    let rhs1 = rho(0, 2).sub(&rho(0, 1)).sub(&rho(1, 2));
    let lhs2 = two.mul(&dot_generic(&diff(z, 0, 1), &diff(z, 2, 3)));
    let rhs2 = rho(0, 3).add(&rho(1, 2)).sub(&rho(0, 2)).sub(&rho(1, 3));
    let lhs3 = two.mul(&dot_generic(&diff(z, 2, 3), &diff(z, 0, 3)));
    let rhs3 = rho(2, 3).add(&rho(0, 3)).sub(&rho(0, 2));
    let lhs4 = two.mul(&dot_generic(&diff(z, 0, 3), &diff(z, 1, 2)));
    let rhs4 = rho(0, 2).add(&rho(1, 3)).sub(&rho(0, 1)).sub(&rho(2, 3));
    lhs1 == rhs1 && lhs2 == rhs2 && lhs3 == rhs3 && lhs4 == rhs4
}

/// 2z₁₂·z₂₃ = ρ₁₃ − ρ₁₂ − ρ₂₃, 2z₁₂·z₃₄ = ρ₁₄ + ρ₂₃ − ρ₁₃ − ρ₂₄ and their companions.
pub fn interval_identities(config: &PointConfig) -> Result<bool> {
    if config.len() != 4 {
        return Err(GciError::Usage(
            "interval identities need four points".into(),
        ));
    }
    Ok(interval_sides(&config.points))
}

pub fn interval_identities_symbolic() -> bool {
    let (_, v) = coord_vectors(4);
    interval_sides(&v)
}

fn a3_sides<T: Ring>(z: &[[T; 4]]) -> (Gauss<T>, Gauss<T>) {
    let s = |i, j, c| slash_generic(&diff(z, i, j), c);
    let t = s(0, 1, false)
        .mul(&s(1, 2, true))
        .mul(&s(2, 3, false))
        .mul(&s(0, 3, true))
        .add(
            &s(0, 1, false)
                .mul(&s(0, 3, true))
                .mul(&s(2, 3, false))
                .mul(&s(1, 2, true)),
        )
        .trace();
    let d =
        |a: (usize, usize), b: (usize, usize)| dot_generic(&diff(z, a.0, a.1), &diff(z, b.0, b.1));
    let four = z[0][0].one_like().add(&z[0][0].one_like());
    let four = four.add(&four);
    let r = d((0, 1), (1, 2))
        .mul(&d((2, 3), (0, 3)))
        .sub(&d((0, 1), (2, 3)).mul(&d((0, 3), (1, 2))))
        .add(&d((0, 1), (0, 3)).mul(&d((1, 2), (2, 3))));
    (t, Gauss::new(four.mul(&r), z[0][0].zero_like()))
}

/// The two-orientation trace over the first pole structure equals
/// 4[(z₁₂z₂₃)(z₃₄z₁₄) − (z₁₂z₃₄)(z₁₄z₂₃) + (z₁₂z₁₄)(z₂₃z₃₄)].
pub fn a3_identity_check(config: &PointConfig) -> bool {
    let (l, r) = a3_sides(&config.points);
    l == r
}

pub fn a3_identity_symbolic() -> bool {
    let (_, v) = coord_vectors(4);
    let (l, r) = a3_sides(&v);
    l == r
}

/// Constant relating the two-trace formula for the bilocal Weyl 4-point function to
/// j₁/(ρ₁₃ρ₂₄): the trace formula gives exactly twice j₁.
pub const WEYL_BILOCAL_NORM: i64 = 2;

/// The two-trace combination for ⟨V₁⁽¹⁾(z₁, z₂) V₁⁽¹⁾(z₃, z₄)⟩.
pub fn v1_weyl_4pt(config: &PointConfig) -> Result<Rat> {
    if config.len() != 4 {
        return Err(GciError::Usage("v1_weyl_4pt needs four points".into()));
    }
    for (i, j) in [(0, 3), (1, 2), (0, 2), (1, 3)] {
        if config.rho(i, j).is_zero() {
            return Err(GciError::Degenerate(format!("rho{}{} = 0", i + 1, j + 1)));
        }
    }
    let z = &config.points;
    let s = |i: usize, j: usize, c: bool| slash(&sub(&z[i], &z[j]), c);
    let first = s(0, 1, false)
        .mul(
            &s(1, 2, true)
                .mul(&s(2, 3, false))
                .mul(&s(0, 3, true))
                .add(&s(0, 3, true).mul(&s(2, 3, false)).mul(&s(1, 2, true))),
        )
        .trace();
    let second = s(0, 1, false)
        .mul(
            &s(1, 3, true)
                .mul(&s(2, 3, false))
                .mul(&s(0, 2, true))
                .add(&s(0, 2, true).mul(&s(2, 3, false)).mul(&s(1, 3, true))),
        )
        .trace();
    let r = |i, j| config.rho(i, j);
    let d1 = r(0, 3) * r(0, 3) * r(1, 2) * r(1, 2);
    let d2 = r(0, 2) * r(0, 2) * r(1, 3) * r(1, 3);
    let v = first
        .scale(&(Rat::one() / d1))
        .sub(&second.scale(&(Rat::one() / d2)));
    if !v.im.is_zero() {
        return Err(GciError::Structural("trace combination is not real".into()));
    }
    Ok(v.re)
}

/// Pole pairs of a cycle ordering (c₁, …, c₂ₙ): (c₂, c₃), (c₄, c₅), …, (c₂ₙ, c₁).
pub fn pole_pairs(cycle: &[usize]) -> Vec<(usize, usize)> {
    let m = cycle.len();
    (0..m / 2)
        .map(|k| (cycle[2 * k + 1], cycle[(2 * k + 2) % m]))
        .collect()
}

fn cycle_vectors<T: Ring>(z: &[[T; 4]], cycle: &[usize]) -> Vec<[T; 4]> {
    let m = cycle.len();
    (0..m)
        .map(|k| {
            if k + 1 < m {
                diff(z, cycle[k], cycle[k + 1])
            } else {
                diff(z, cycle[0], cycle[m - 1])
            }
        })
        .collect()
}

/// tr(w₁ w₂⁺ w₃ ⋯ w₂ₙ⁺) + tr(w₁ w₂ₙ⁺ w₂ₙ₋₁ ⋯ w₂⁺), with wₖ = z_{cₖ} − z_{cₖ₊₁} and
/// w₂ₙ = z_{c₁} − z_{c₂ₙ}.
fn cycle_trace_vectors<T: Ring>(w: &[[T; 4]]) -> Gauss<T> {
    let m = w.len();
    let mut fwd = slash_generic(&w[0], false);
    for (k, wk) in w.iter().enumerate().skip(1) {
        fwd = fwd.mul(&slash_generic(wk, k % 2 == 1));
    }
    let mut bwd = slash_generic(&w[0], false);
    for (step, k) in (1..m).rev().enumerate() {
        bwd = bwd.mul(&slash_generic(&w[k], step % 2 == 0));
    }
    fwd.trace().add(&bwd.trace())
}

pub fn cycle_trace_2n(config: &PointConfig, cycle: &[usize]) -> Result<Rat> {
    let m = cycle.len();
    if !(4..=8).contains(&m) || !m.is_multiple_of(2) {
        return Err(GciError::Usage(
            "cycle traces are supported for n = 2, 3, 4".into(),
        ));
    }
    check_cycle(config, cycle)?;
    let v = cycle_trace_vectors(&cycle_vectors(&config.points, cycle));
    if !v.im.is_zero() {
        return Err(GciError::Structural("cycle trace is not real".into()));
    }
    Ok(v.re)
}

fn check_cycle(config: &PointConfig, cycle: &[usize]) -> Result<()> {
    let mut seen = vec![false; config.len()];
    for &c in cycle {
        if c >= config.len() || seen[c] {
            return Err(GciError::Usage(
                "cycle must list distinct point indices".into(),
            ));
        }
        seen[c] = true;
    }
    for (a, b) in pole_pairs(cycle) {
        if config.rho(a, b).is_zero() {
            return Err(GciError::Degenerate(format!(
                "pole pair rho{}{} = 0",
                a + 1,
                b + 1
            )));
        }
    }
    Ok(())
}

/// Elementary contribution: cycle trace over the squared pole-pair intervals.
pub fn elementary_value(config: &PointConfig, cycle: &[usize]) -> Result<Rat> {
    let num = cycle_trace_2n(config, cycle)?;
    let den = pole_pairs(cycle).iter().fold(Rat::one(), |acc, &(a, b)| {
        let r = config.rho(a, b);
        acc * &r * &r
    });
    Ok(num / den)
}

/// The six-point elementary contribution 𝒲(12; 34; 56) written out term by term.
pub fn elementary_6pt_explicit(config: &PointConfig) -> Result<Rat> {
    if config.len() != 6 {
        return Err(GciError::Usage("six points required".into()));
    }
    let r = |i: usize, j: usize| config.rho(i - 1, j - 1);
    let num = r(1, 2) * (r(3, 4) * r(5, 6) - r(3, 5) * r(4, 6) + r(3, 6) * r(4, 5))
        - r(1, 3) * (r(2, 4) * r(5, 6) - r(2, 5) * r(4, 6) + r(2, 6) * r(4, 5))
        + r(1, 4) * (r(2, 3) * r(5, 6) - r(2, 5) * r(3, 6) + r(2, 6) * r(3, 5))
        - r(1, 5) * (r(2, 3) * r(4, 6) - r(2, 4) * r(3, 6) + r(2, 6) * r(3, 4))
        + r(1, 6) * (r(2, 3) * r(4, 5) - r(2, 4) * r(3, 5) + r(2, 5) * r(3, 4));
    let den = r(1, 6) * r(2, 3) * r(4, 5);
    if den.is_zero() {
        return Err(GciError::Degenerate("pole pair interval vanishes".into()));
    }
    Ok(num / (&den * &den))
}

/// All perfect matchings of `pts`, the first element paired in increasing order.
pub fn pairings(pts: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if pts.is_empty() {
        return vec![vec![]];
    }
    let a = pts[0];
    let mut out = Vec::new();
    for k in 1..pts.len() {
        let rest: Vec<usize> = pts[1..]
            .iter()
            .enumerate()
            .filter(|(i, _)| i + 1 != k)
            .map(|(_, &x)| x)
            .collect();
        for mut tail in pairings(&rest) {
            let mut p = vec![(a, pts[k])];
            p.append(&mut tail);
            out.push(p);
        }
    }
    out
}

/// (−1)^{crossings} for a matching of positions.
pub fn crossing_sign(p: &[(usize, usize)]) -> i32 {
    let mut crossings = 0;
    for (x, &(a, b)) in p.iter().enumerate() {
        let (a, b) = (a.min(b), a.max(b));
        for &(c, d) in &p[x + 1..] {
            let (c, d) = (c.min(d), c.max(d));
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                crossings += 1;
            }
        }
    }
    if crossings % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Index of the ρ-variable for the pair {i, j} among C(m, 2).
pub fn rho_var_index(i: usize, j: usize, m: usize) -> usize {
    let (a, b) = (i.min(j), i.max(j));
    a * (2 * m - a - 1) / 2 + (b - a - 1)
}

/// c_n Σ_pairings sign·Π ρ in the ρ-variables of the points, signs taken with respect to the
/// positions in `ordering`.
pub fn wick_numerator(n: usize, ordering: &[usize], c_n: &Rat) -> Result<MPoly> {
    if n < 2 || ordering.len() != 2 * n {
        return Err(GciError::Usage(
            "wick_numerator needs n >= 2 and an ordering of 2n points".into(),
        ));
    }
    let m = 2 * n;
    let nv = m * (m - 1) / 2;
    let mut out = MPoly::zero(nv);
    let positions: Vec<usize> = (0..m).collect();
    for p in pairings(&positions) {
        let mut e = vec![0u32; nv];
        for &(a, b) in &p {
            e[rho_var_index(ordering[a], ordering[b], m)] += 1;
        }
        out.add_term(e, ri(crossing_sign(&p) as i64) * c_n);
    }
    Ok(out)
}

/// The ρ-values of a configuration in `rho_var_index` order.
pub fn rho_values(config: &PointConfig) -> Vec<Rat> {
    let m = config.len();
    let mut v = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            v.push(config.rho(i, j));
        }
    }
    v
}

/// Pfaffian of ρ taken in cycle order.
pub fn rho_pfaffian(config: &PointConfig, cycle: &[usize]) -> Rat {
    let positions: Vec<usize> = (0..cycle.len()).collect();
    let mut acc = Rat::zero();
    for p in pairings(&positions) {
        let prod = p
            .iter()
            .fold(Rat::one(), |a, &(x, y)| a * config.rho(cycle[x], cycle[y]));
        acc += ri(crossing_sign(&p) as i64) * prod;
    }
    acc
}

/// c_n fitted as trace/Pfaffian at one random configuration.
pub fn fit_cn<R: Rng>(n: usize, rng: &mut R) -> Result<Rat> {
    let cycle: Vec<usize> = (0..2 * n).collect();
    for _ in 0..100 {
        let cfg = random_config(rng, 2 * n);
        let pf = rho_pfaffian(&cfg, &cycle);
        if !pf.is_zero() {
            return Ok(cycle_trace_2n(&cfg, &cycle)? / pf);
        }
    }
    Err(GciError::Degenerate(
        "Pfaffian vanished at every sampled configuration".into(),
    ))
}

/// Symbolic check: cycle trace = c_n·Pf(ρ) as polynomials in the 4(2n−1) independent
/// components of the difference vectors.
pub fn wick_trace_symbolic(n: usize, c_n: &Rat) -> Result<bool> {
    let m = 2 * n;
    let (arity, free) = coord_vectors(m - 1);
    // points z_k = w_1 + … + w_k with z_0 = 0, so that w_k = z_{k−1} − z_k up to sign
    let mut pts: Vec<[MPoly; 4]> = vec![std::array::from_fn(|_| MPoly::zero(arity))];
    for w in &free {
        let last = pts.last().unwrap().clone();
        pts.push(std::array::from_fn(|mu| &last[mu] + &w[mu]));
    }
    let cycle: Vec<usize> = (0..m).collect();
    let tr = cycle_trace_vectors(&cycle_vectors(&pts, &cycle));
    if !tr.im.is_zero() {
        return Ok(false);
    }
    let rho: Vec<MPoly> = {
        let mut v = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let d = diff(&pts, i, j);
                v.push(dot_generic(&d, &d));
            }
        }
        v
    };
    let wick = wick_numerator(n, &cycle, c_n)?;
    Ok(wick.subst(&rho) == tr.re)
}

/// A single pole-structure contribution to the 2n-point function of V₁⁽¹⁾.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementaryTerm {
    pub n: usize,
    pub cycle: Vec<usize>,
    pub numerator: MPoly,
    pub pole_pairs: Vec<(usize, usize)>,
}

impl ElementaryTerm {
    pub fn eval(&self, config: &PointConfig) -> Result<Rat> {
        let num = self.numerator.eval(&rho_values(config));
        let mut den = Rat::one();
        for &(a, b) in &self.pole_pairs {
            let r = config.rho(a, b);
            if r.is_zero() {
                return Err(GciError::Degenerate(format!(
                    "pole pair rho{}{} = 0",
                    a + 1,
                    b + 1
                )));
            }
            den = den * &r * &r;
        }
        Ok(num / den)
    }
}

/// Cycles through the bilocal pairs (0,1), (2,3), …: pair order with the first pair fixed
/// and an orientation per pair. Every undirected cycle appears twice.
fn oriented_cycles(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for perm in permutations(n - 1) {
        let order: Vec<usize> = std::iter::once(0)
            .chain(perm.iter().map(|&k| k + 1))
            .collect();
        for mask in 0..(1u32 << n) {
            let mut c = Vec::with_capacity(2 * n);
            for (slot, &pair) in order.iter().enumerate() {
                let (a, b) = (2 * pair, 2 * pair + 1);
                if mask >> slot & 1 == 0 {
                    c.extend([a, b]);
                } else {
                    c.extend([b, a]);
                }
            }
            out.push(c);
        }
    }
    out
}

fn normalized_poles(cycle: &[usize]) -> Vec<(usize, usize)> {
    let mut p: Vec<(usize, usize)> = pole_pairs(cycle)
        .into_iter()
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    p.sort();
    p
}

/// The orbit of pole structures of the 2n-point function; 2^{n−1}(n−1)! elements.
pub fn orbit_enumerate(n: usize, c_n: &Rat) -> Result<Vec<ElementaryTerm>> {
    if n < 2 {
        return Err(GciError::Usage("orbit_enumerate needs n >= 2".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for cycle in oriented_cycles(n) {
        let key = normalized_poles(&cycle);
        if seen.insert(key) {
            out.push(ElementaryTerm {
                n,
                numerator: wick_numerator(n, &cycle, c_n)?,
                pole_pairs: pole_pairs(&cycle),
                cycle,
            });
        }
    }
    Ok(out)
}

fn inv(r: Rat, a: usize, b: usize) -> Result<Rat> {
    if r.is_zero() {
        return Err(GciError::Degenerate(format!("rho{}{} = 0", a + 1, b + 1)));
    }
    Ok(Rat::one() / r)
}

/// Connected 2n-point function of V₁⁽⁰⁾ over the bilocal pairs (0,1), (2,3), …: one-loop
/// cycles with propagator ρ⁻¹.
pub fn v1_scalar_connected(config: &PointConfig) -> Result<Rat> {
    let m = config.len();
    if m < 4 || !m.is_multiple_of(2) {
        return Ok(Rat::zero());
    }
    let mut acc = Rat::zero();
    for cycle in oriented_cycles(m / 2) {
        let mut t = Rat::one();
        for (a, b) in pole_pairs(&cycle) {
            t *= inv(config.rho(a, b), a, b)?;
        }
        acc += t;
    }
    Ok(acc / ri(2))
}

/// Full 2n-point function of V₁⁽⁰⁾: matchings avoiding the bilocal pairs, weight Π ρ⁻¹.
pub fn v1_scalar_npoint(config: &PointConfig) -> Result<Rat> {
    let m = config.len();
    if !m.is_multiple_of(2) || m == 0 {
        return Err(GciError::Usage(
            "V1 correlators need an even number of points".into(),
        ));
    }
    let pts: Vec<usize> = (0..m).collect();
    let mut acc = Rat::zero();
    for p in pairings(&pts) {
        if p.iter().any(|&(a, b)| a / 2 == b / 2) {
            continue;
        }
        let mut t = Rat::one();
        for &(a, b) in &p {
            t *= inv(config.rho(a, b), a, b)?;
        }
        acc += t;
    }
    Ok(acc)
}

/// Connected 2n-point function of V₁⁽¹⁾ over the bilocal pairs (0,1), (2,3), …
pub fn v1_weyl_connected(config: &PointConfig) -> Result<Rat> {
    let m = config.len();
    if m < 4 || !m.is_multiple_of(2) {
        return Ok(Rat::zero());
    }
    let n = m / 2;
    let z = &config.points;
    let mut acc = Gauss::<Rat>::zero();
    for perm in permutations(n - 1) {
        let order: Vec<usize> = std::iter::once(0)
            .chain(perm.iter().map(|&k| k + 1))
            .collect();
        for mask in 0..(1u32 << n) {
            // orientation bit 1: ψ⁺ at the first point of the pair
            let ends = |slot: usize| {
                let (a, b) = (2 * order[slot], 2 * order[slot] + 1);
                if mask >> slot & 1 == 1 {
                    (a, b, false)
                } else {
                    (b, a, true)
                }
            };
            let mut prod = Quat::scalar(Gauss::<Rat>::one());
            for slot in 0..n {
                let (x, y, negate) = ends(slot);
                let (a, b) = if negate { (y, x) } else { (x, y) };
                let mut mk = slash(&sub(&z[a], &z[b]), false);
                if negate {
                    mk = mk.neg();
                }
                let (xn, _, _) = ends((slot + 1) % n);
                let r = config.rho(y, xn);
                let r2 = inv(&r * &r, y, xn)?;
                prod = prod
                    .mul(&mk)
                    .mul(&slash(&sub(&z[y], &z[xn]), true).scale(&Gauss::<Rat>::real(r2)));
            }
            acc = acc.sub(&prod.trace());
        }
    }
    if !acc.im.is_zero() {
        return Err(GciError::Structural("Weyl loop sum is not real".into()));
    }
    Ok(acc.re)
}

/// Full correlator from a connected one: sum over set partitions of the bilocal slots into
/// blocks of size ≥ 2 of products of connected functions.
pub fn full_from_connected<F>(config: &PointConfig, connected: F) -> Result<Rat>
where
    F: Fn(&PointConfig) -> Result<Rat>,
{
    let m = config.len();
    if !m.is_multiple_of(2) {
        return Err(GciError::Usage(
            "V1 correlators need an even number of points".into(),
        ));
    }
    let slots: Vec<usize> = (0..m / 2).collect();
    let mut acc = Rat::zero();
    for part in set_partitions(&slots) {
        if part.iter().any(|b| b.len() < 2) {
            continue;
        }
        let mut t = Rat::one();
        for block in &part {
            let idx: Vec<usize> = block.iter().flat_map(|&s| [2 * s, 2 * s + 1]).collect();
            t *= connected(&config.permuted(&idx))?;
        }
        acc += t;
    }
    Ok(acc)
}

pub fn v1_weyl_npoint(config: &PointConfig) -> Result<Rat> {
    full_from_connected(config, v1_weyl_connected)
}

/// Truncated 2n-point function of ℒ⁽⁰⁾ = φϕ (dimensions 1 and 3): Hamiltonian cycles with
/// alternating ρ⁻¹ and ρ⁻³ edges.
pub fn l0_truncated(config: &PointConfig) -> Result<Rat> {
    let m = config.len();
    if m < 2 || !m.is_multiple_of(2) {
        return Ok(Rat::zero());
    }
    let mut acc = Rat::zero();
    for perm in permutations(m - 1) {
        let cyc: Vec<usize> = std::iter::once(0)
            .chain(perm.iter().map(|&k| k + 1))
            .collect();
        if m > 2 && cyc[1] > cyc[m - 1] {
            continue;
        }
        for start in 0..2 {
            let mut t = Rat::one();
            for k in 0..m {
                let (a, b) = (cyc[k], cyc[(k + 1) % m]);
                let r = inv(config.rho(a, b), a, b)?;
                t *= if (k + start) % 2 == 0 {
                    r
                } else {
                    &r * &r * &r
                };
            }
            acc += t;
        }
    }
    Ok(acc)
}

/// Truncated 2n-point function of ℒ⁽¹⁾ = ψ⁺χ + χ⁺ψ: directed loops alternating the ψ
/// propagator ρ⁻²z̸⁺ and the χ propagator ρ⁻³z̸.
pub fn l1_truncated(config: &PointConfig) -> Result<Rat> {
    let m = config.len();
    if m < 2 || !m.is_multiple_of(2) {
        return Ok(Rat::zero());
    }
    let z = &config.points;
    let mut acc = Gauss::<Rat>::zero();
    for perm in permutations(m - 1) {
        let cyc: Vec<usize> = std::iter::once(0)
            .chain(perm.iter().map(|&k| k + 1))
            .collect();
        for start in 0..2 {
            let mut prod = Quat::scalar(Gauss::<Rat>::one());
            for k in 0..m {
                let (y, x) = (cyc[k], cyc[(k + 1) % m]);
                let r = config.rho(y, x);
                let g = if (k + start) % 2 == 0 {
                    slash(&sub(&z[y], &z[x]), false).scale(&Gauss::<Rat>::real(inv(
                        &r * &r * &r,
                        y,
                        x,
                    )?))
                } else {
                    slash(&sub(&z[y], &z[x]), true).scale(&Gauss::<Rat>::real(inv(&r * &r, y, x)?))
                };
                prod = prod.mul(&g);
            }
            acc = acc.sub(&prod.trace());
        }
    }
    if !acc.im.is_zero() {
        return Err(GciError::Structural("loop sum is not real".into()));
    }
    Ok(acc.re)
}

/// Permutations of 0..k in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub fn perm_sign(p: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All set partitions of `items`, blocks in order of first element.
pub fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for part in set_partitions(rest) {
        // first element alone, or added to each block
        let mut alone = vec![vec![first]];
        alone.extend(part.iter().cloned());
        out.push(alone);
        for k in 0..part.len() {
            let mut p = part.clone();
            p[k].insert(0, first);
            p.sort_by_key(|b| b[0]);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;
    use crate::fourpoint::basis_j_small;
    use crate::kinematics::{cross_ratios, point, unit};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn slash_examples() {
        let id = slash(&unit(3), false);
        assert_eq!(id, Quat::scalar(Gauss::<Rat>::one()));
        let e3 = slash(&unit(2), false);
        assert_eq!(e3.e[0][0], Gauss::new(ri(0), ri(-1)));
        assert_eq!(e3.e[1][1], Gauss::new(ri(0), ri(1)));
        assert!(anticommutation_symbolic());
    }

    #[test]
    fn det_examples() {
        let e = |k| unit(k);
        assert_eq!(det4(&e(0), &e(1), &e(2), &e(3)), ri(1));
        assert_eq!(det4(&e(1), &e(0), &e(2), &e(3)), ri(-1));
        assert_eq!(det4(&e(0), &e(0), &e(2), &e(3)), ri(0));
        assert!(trace4_identity_check(&e(0), &e(1), &e(2), &e(3)));
        assert!(trace4_identity_check(&e(3), &e(3), &e(3), &e(3)));
    }

    #[test]
    fn symbolic_identities() {
        assert!(trace4_identity_symbolic());
        assert!(interval_identities_symbolic());
        assert!(a3_identity_symbolic());
    }

    #[test]
    fn weyl_4pt_is_twice_j1() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let j1 = basis_j_small(1).unwrap();
        for _ in 0..10 {
            let c = random_config(&mut rng, 4);
            let cr = cross_ratios(&c).unwrap();
            let v = v1_weyl_4pt(&c).unwrap() * c.rho(0, 2) * c.rho(1, 3);
            assert_eq!(v, ri(WEYL_BILOCAL_NORM) * j1.eval(&[cr.s, cr.t]).unwrap());
            assert_eq!(v1_weyl_connected(&c).unwrap(), v1_weyl_4pt(&c).unwrap());
        }
    }

    #[test]
    fn scalar_4pt_is_j0() {
        let c = PointConfig::new(vec![
            point([0, 0, 0, 0]),
            point([1, 0, 0, 0]),
            point([0, 2, 0, 0]),
            point([0, 0, 1, 3]),
        ]);
        let cr = cross_ratios(&c).unwrap();
        let v = v1_scalar_npoint(&c).unwrap() * c.rho(0, 2) * c.rho(1, 3);
        assert_eq!(v, basis_j_small(0).unwrap().eval(&[cr.s, cr.t]).unwrap());
        assert_eq!(
            v1_scalar_connected(&c).unwrap(),
            v1_scalar_npoint(&c).unwrap()
        );
    }

    #[test]
    fn cn_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(fit_cn(2, &mut rng).unwrap(), ri(-2));
        assert_eq!(fit_cn(3, &mut rng).unwrap(), ri(1));
        assert_eq!(fit_cn(4, &mut rng).unwrap(), rat(-1, 2));
        assert!(wick_trace_symbolic(2, &ri(-2)).unwrap());
        assert!(!wick_trace_symbolic(2, &ri(2)).unwrap());
    }

    #[test]
    fn six_point_explicit() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let c = random_config(&mut rng, 6);
            assert_eq!(
                elementary_value(&c, &[0, 1, 2, 3, 4, 5]).unwrap(),
                elementary_6pt_explicit(&c).unwrap()
            );
        }
    }

    #[test]
    fn six_point_symbolic() {
        assert!(wick_trace_symbolic(3, &ri(1)).unwrap());
    }

    #[test]
    fn orbits() {
        for (n, k) in [(2, 2), (3, 8), (4, 48)] {
            assert_eq!(orbit_enumerate(n, &ri(1)).unwrap().len(), k);
        }
        assert_eq!(pairings(&[0, 1, 2, 3, 4, 5]).len(), 15);
    }

    #[test]
    fn scalar_full_from_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_config(&mut rng, 8);
        assert_eq!(
            full_from_connected(&c, v1_scalar_connected).unwrap(),
            v1_scalar_npoint(&c).unwrap()
        );
    }
}
