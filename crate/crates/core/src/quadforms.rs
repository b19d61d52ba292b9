//! Norm equations `N(alpha) = ±p` in quadratic fields, decided by binary
//! quadratic forms.
//!
//! The integers of `Q(sqrt D)` have norm form `f0 = (1, D mod 2, (D mod 2 - D)/4)`.
//! A prime `p` is a norm `m = ±p` iff some form `(m, b, c)` of
//! discriminant `D` is properly equivalent to `f0`:
//!
//! * `D < 0`: Gauss reduction gives a unique reduced representative.
//! * `D > 0`: reduced forms fall into `rho`-cycles, and two reduced forms are
//!   equivalent iff they lie on the same cycle.
//!
//! `(m, b, c)` and `(m, -b, c)` are improperly equivalent and `f0` is
//! ambiguous, so one square root `b` of `D` mod `4p` suffices. Transformation
//! matrices are carried along every reduction step so that each solvable
//! answer ships a witness `(x, y)` with `f0(x, y) = m`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::arith::{self, factor, isqrt, jacobi};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        BigInt::from(self.a) * x * x + BigInt::from(self.b) * x * y + BigInt::from(self.c) * y * y
    }

    /// Reduced in the sense of Gauss: for `D < 0`, `|b| <= a <= c` with
    /// `b >= 0` on the boundary; for `D > 0`, `0 < b < sqrt D` and
    /// `sqrt D - b < 2|a| < sqrt D + b`.
    pub fn is_reduced(&self) -> bool {
        let d = self.disc();
        if d < 0 {
            let ab = self.b.abs();
            ab <= self.a
                && self.a <= self.c
                && ((ab != self.a && self.a != self.c) || self.b >= 0)
        } else {
            let s = isqrt(d as u64) as i64;
            let two_a = 2 * self.a.abs();
            self.b > 0 && self.b <= s && sqrt_lt(d, two_a + self.b) && lt_sqrt(two_a - self.b, d)
        }
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

// sqrt(d) < x, for non-square d > 0
fn sqrt_lt(d: i64, x: i64) -> bool {
    x > 0 && (x as i128) * (x as i128) > d as i128
}

// x < sqrt(d), for non-square d > 0
fn lt_sqrt(x: i64, d: i64) -> bool {
    x <= 0 || (x as i128) * (x as i128) < d as i128
}

/// 2x2 integer matrix acting on forms by `f -> f ∘ M`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Mat2 {
    m: [[BigInt; 2]; 2],
}

impl Mat2 {
    fn identity() -> Self {
        Self::from_i64([[1, 0], [0, 1]])
    }

    fn from_i64(m: [[i64; 2]; 2]) -> Self {
        Self {
            m: m.map(|row| row.map(BigInt::from)),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| &self.m[i][0] * &o.m[0][j] + &self.m[i][1] * &o.m[1][j];
        Self {
            m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    /// `M^{-1} e_1` for `det M = 1`.
    fn inverse_first_column(&self) -> (BigInt, BigInt) {
        (self.m[1][1].clone(), -self.m[1][0].clone())
    }

    fn apply(&self, v: &(BigInt, BigInt)) -> (BigInt, BigInt) {
        (
            &self.m[0][0] * &v.0 + &self.m[0][1] * &v.1,
            &self.m[1][0] * &v.0 + &self.m[1][1] * &v.1,
        )
    }
}

/// `x -> x + k y`
fn translate(f: &QuadraticForm, k: i64) -> QuadraticForm {
    QuadraticForm::new(f.a, f.b + 2 * f.a * k, f.a * k * k + f.b * k + f.c)
}

/// Normalize and swap until reduced (positive definite forms).
fn reduce_definite(f: QuadraticForm) -> (QuadraticForm, Mat2) {
    let mut f = f;
    let mut m = Mat2::identity();
    loop {
        // bring b into (-a, a]
        let k = (f.a - f.b).div_euclid(2 * f.a);
        if k != 0 {
            f = translate(&f, k);
            m = m.mul(&Mat2::from_i64([[1, k], [0, 1]]));
        }
        if f.a > f.c || (f.a == f.c && f.b < 0) {
            f = QuadraticForm::new(f.c, -f.b, f.a);
            m = m.mul(&Mat2::from_i64([[0, -1], [1, 0]]));
            continue;
        }
        debug_assert!(f.is_reduced());
        return (f, m);
    }
}

/// One `rho` step: `(a, b, c) -> (c, b', (b'^2 - D) / 4c)` with
/// `b' = -b mod 2c` placed in the standard range, via the proper matrix
/// `[[0, -1], [1, t]]`.
fn rho(f: &QuadraticForm, d: i64, s: i64) -> (QuadraticForm, i64) {
    let c = f.c;
    let two_c = 2 * c.abs();
    let b_new = if c.abs() as i128 * c.abs() as i128 > d as i128 {
        // -|c| < b' <= |c|
        let r = (-f.b).rem_euclid(two_c);
        if r > c.abs() {
            r - two_c
        } else {
            r
        }
    } else {
        // largest b' < sqrt D
        s - (s + f.b).rem_euclid(two_c)
    };
    let t = (b_new + f.b) / (2 * c);
    let a_new = c;
    let c_new = (b_new * b_new - d) / (4 * c);
    (QuadraticForm::new(a_new, b_new, c_new), t)
}

fn rho_matrix(t: i64) -> Mat2 {
    Mat2::from_i64([[0, -1], [1, t]])
}

/// Apply `rho` until reduced (indefinite forms).
fn reduce_indefinite(f: QuadraticForm) -> (QuadraticForm, Mat2) {
    let d = f.disc();
    let s = isqrt(d as u64) as i64;
    let mut f = f;
    let mut m = Mat2::identity();
    while !f.is_reduced() {
        let (g, t) = rho(&f, d, s);
        f = g;
        m = m.mul(&rho_matrix(t));
    }
    (f, m)
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => arith::is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && arith::is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Fundamental discriminant of `Q(sqrt(disc))`.
///
/// # Panics
/// If `disc` is zero or a perfect square.
pub fn fundamental_part(disc: &BigInt) -> i64 {
    use num_traits::ToPrimitive;
    let sign = if disc.is_negative() { -1 } else { 1 };
    let m = disc.abs().to_u64().expect("discriminant too large for u64");
    assert!(m != 0, "zero discriminant");
    let mut core = 1u64;
    for &(p, e) in factor(m).factors() {
        if e % 2 == 1 {
            core *= p;
        }
    }
    let core = sign * core as i64;
    assert!(core != 1, "square discriminant");
    if core.rem_euclid(4) == 1 {
        core
    } else {
        4 * core
    }
}

/// Fundamental discriminants `D != 1` with `|D|` dividing `n`: the quadratic
/// subfields of `Q(zeta_n)`.
pub fn quadratic_subfield_discs(n: u64) -> Vec<i64> {
    let mut out: Vec<i64> = factor(n)
        .divisors()
        .into_iter()
        .skip(1)
        .flat_map(|m| [m as i64, -(m as i64)])
        .filter(|&d| is_fundamental(d))
        .collect();
    out.sort_unstable();
    out
}

/// The norm form of the maximal order of discriminant `d`.
pub fn principal_form(d: i64) -> Result<QuadraticForm> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let r = d.rem_euclid(2);
    Ok(QuadraticForm::new(1, r, (r - d) / 4))
}

/// The cycle of reduced forms equivalent to the principal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormCycle {
    pub disc: i64,
    pub forms: Vec<QuadraticForm>,
}

impl FormCycle {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn position(&self, f: &QuadraticForm) -> Option<usize> {
        self.forms.iter().position(|g| g == f)
    }
}

pub fn principal_cycle(d: i64) -> Result<FormCycle> {
    if d <= 0 || arith::is_square(d) {
        return Err(Error::NotFundamental(d));
    }
    let f0 = principal_form(d)?;
    let (start, _) = reduce_indefinite(f0);
    let s = isqrt(d as u64) as i64;
    let mut forms = vec![start];
    let mut f = start;
    loop {
        let (g, _) = rho(&f, d, s);
        if g == start {
            break;
        }
        forms.push(g);
        f = g;
    }
    Ok(FormCycle { disc: d, forms })
}

/// Why an equation has no solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// `(D | p) = -1`: no prime of degree one above `p`.
    Inert,
    /// `D < 0`, target negative: the norm form is positive definite.
    PositiveDefinite,
    /// The reduced form of `(±p, b, c)` is not in the principal class.
    NonPrincipal { reduced: QuadraticForm },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormOutcome {
    /// `f0(x, y) = sign * p`.
    Solvable { x: BigInt, y: BigInt },
    ProvablyUnsolvable(Obstruction),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormDecision {
    pub outcome: NormOutcome,
    pub sign: i8,
    pub disc: i64,
    pub p: u64,
}

impl NormDecision {
    pub fn is_unsolvable(&self) -> bool {
        matches!(self.outcome, NormOutcome::ProvablyUnsolvable(_))
    }

    /// Re-checks the recorded answer: a witness by evaluation, an
    /// obstruction by repeating the equivalence test from scratch.
    pub fn replay(&self) -> bool {
        match &self.outcome {
            NormOutcome::Solvable { x, y } => principal_form(self.disc)
                .map(|f0| f0.eval(x, y) == BigInt::from(self.sign) * BigInt::from(self.p))
                .unwrap_or(false),
            NormOutcome::ProvablyUnsolvable(_) => {
                solve_norm(self.disc, self.p, self.sign).is_ok_and(|d| d.outcome == self.outcome)
            }
            NormOutcome::Unknown => false,
        }
    }
}

const WORD_LIMIT: u64 = 1 << 30;

/// Decides `N(alpha) = sign * p` for integers `alpha` of `Q(sqrt d)`.
pub fn solve_norm(d: i64, p: u64, sign: i8) -> Result<NormDecision> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    if p == 2 || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p as i64));
    }
    if p >= WORD_LIMIT || d.unsigned_abs() >= WORD_LIMIT {
        return Err(Error::OutOfRange(format!("D = {d}, p = {p}")));
    }
    if d % p as i64 == 0 {
        return Err(Error::Ramified { p, disc: d });
    }
    assert!(sign == 1 || sign == -1, "sign must be ±1");
    let decision = |outcome| NormDecision {
        outcome,
        sign,
        disc: d,
        p,
    };
    if jacobi(d, p) == -1 {
        return Ok(decision(NormOutcome::ProvablyUnsolvable(Obstruction::Inert)));
    }
    if d < 0 && sign < 0 {
        return Ok(decision(NormOutcome::ProvablyUnsolvable(
            Obstruction::PositiveDefinite,
        )));
    }
    let m = sign as i64 * p as i64;
    // b^2 = D mod 4p: root mod p, then fix parity to match D
    let mut b = arith::sqrt_mod_prime(d, p)?.expect("split prime has a root") as i64;
    if (b - d).rem_euclid(2) != 0 {
        b += p as i64;
    }
    let f = QuadraticForm::new(m, b, (b * b - d) / (4 * m));
    debug_assert_eq!(f.disc(), d);
    let f0 = principal_form(d)?;

    let found = if d < 0 {
        let (g, mg) = reduce_definite(f);
        (g == f0).then(|| mg.inverse_first_column())
    } else {
        let (g, mg) = reduce_indefinite(f);
        let cycle = principal_cycle(d)?;
        match cycle.position(&g) {
            None => {
                return Ok(decision(NormOutcome::ProvablyUnsolvable(
                    Obstruction::NonPrincipal { reduced: g },
                )))
            }
            Some(i) => {
                // f0 ∘ P = g for P = (reduction of f0) then i rho steps
                let s = isqrt(d as u64) as i64;
                let (mut h, mut pm) = reduce_indefinite(f0);
                for _ in 0..i {
                    let (next, t) = rho(&h, d, s);
                    h = next;
                    pm = pm.mul(&rho_matrix(t));
                }
                debug_assert_eq!(h, g);
                Some(pm.apply(&mg.inverse_first_column()))
            }
        }
    };
    match found {
        None => {
            let (g, _) = reduce_definite(f);
            Ok(decision(NormOutcome::ProvablyUnsolvable(
                Obstruction::NonPrincipal { reduced: g },
            )))
        }
        Some((x, y)) => {
            assert_eq!(
                f0.eval(&x, &y),
                BigInt::from(m),
                "witness failed re-evaluation for D = {d}, m = {m}"
            );
            Ok(decision(NormOutcome::Solvable { x, y }))
        }
    }
}

/// Per-discriminant principal cycles, shared between many decisions.
#[derive(Default)]
pub struct CycleCache {
    cycles: HashMap<i64, FormCycle>,
}

impl CycleCache {
    pub fn get(&mut self, d: i64) -> Result<&FormCycle> {
        if !self.cycles.contains_key(&d) {
            let c = principal_cycle(d)?;
            self.cycles.insert(d, c);
        }
        Ok(&self.cycles[&d])
    }
}

/// Smallest unit `(u + v sqrt D)/2 > 1` by brute force over `v`.
#[cfg(test)]
pub(crate) fn brute_fundamental_unit_v(d: i64) -> u64 {
    (1u64..)
        .find(|&v| {
            let t = d as i128 * (v as i128) * (v as i128);
            [t - 4, t + 4]
                .iter()
                .any(|&x| x >= 0 && arith::is_square(x as i64))
        })
        .unwrap()
}

/// Representation oracle independent of form reduction: scans `y >= 0`
/// and solves the quadratic in `x`. For `D > 0` every solution class has a
/// member with `0 <= y <= (sqrt|m| + 1)(v + 2)` where `v` comes from the
/// fundamental unit, so the scan is exhaustive.
#[cfg(test)]
pub(crate) fn brute_represents(d: i64, m: i64) -> Option<(i64, i64)> {
    let bound = if d < 0 {
        isqrt((4 * m.unsigned_abs() / d.unsigned_abs()) as u64) as i64 + 1
    } else {
        let v = brute_fundamental_unit_v(d) as i64;
        (isqrt(m.unsigned_abs()) as i64 + 1) * (v + 2)
    };
    let r = d.rem_euclid(2);
    for y in 0..=bound {
        let disc = d as i128 * (y as i128) * (y as i128) + 4 * m as i128;
        if disc < 0 {
            continue;
        }
        let s = isqrt(disc as u64) as i128;
        if s * s != disc {
            continue;
        }
        let num = -(r as i128) * y as i128 + s;
        debug_assert!(num % 2 == 0);
        return Some(((num / 2) as i64, y));
    }
    None
}
