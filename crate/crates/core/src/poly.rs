//! Dense univariate polynomials over `Z` with exact big-integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Coefficients stored lowest degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().expect("degree of the zero polynomial")
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of zero")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.leading().is_one()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|i| self.coeff(i) + other.coeff(i))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|i| self.coeff(i) - other.coeff(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Exact division of every coefficient by `k`.
    pub fn div_exact(&self, k: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(k);
                    debug_assert!(r.is_zero(), "inexact coefficient division");
                    q
                })
                .collect(),
        )
    }

    /// Remainder after division by a monic polynomial.
    pub fn rem_monic(&self, modulus: &Self) -> Self {
        assert!(modulus.is_monic(), "rem_monic needs a monic modulus");
        let d = modulus.deg();
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let lead = r.pop().expect("nonempty");
            if lead.is_zero() {
                continue;
            }
            let shift = r.len() - d;
            for (i, m) in modulus.coeffs[..d].iter().enumerate() {
                r[shift + i] -= &lead * m;
            }
        }
        Self::new(r)
    }

    /// Quotient and remainder by a monic polynomial.
    pub fn div_rem_monic(&self, modulus: &Self) -> (Self, Self) {
        assert!(modulus.is_monic(), "div_rem_monic needs a monic modulus");
        let d = modulus.deg();
        let mut r = self.coeffs.clone();
        if r.len() <= d {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![BigInt::zero(); r.len() - d];
        while r.len() > d {
            let lead = r.pop().expect("nonempty");
            let shift = r.len() - d;
            if !lead.is_zero() {
                for (i, m) in modulus.coeffs[..d].iter().enumerate() {
                    r[shift + i] -= &lead * m;
                }
            }
            q[shift] = lead;
        }
        (Self::new(q), Self::new(r))
    }

    /// `self(x^k)`
    pub fn compose_power(&self, k: usize) -> Self {
        let mut out = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self::new(out)
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.deg();
        let lb = b.leading().clone();
        let mut r = self.clone();
        let Some(da) = self.degree() else {
            return r;
        };
        if da < db {
            return r;
        }
        let mut e = da - db + 1;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().clone();
            let shifted = Self::new(
                std::iter::repeat(BigInt::zero())
                    .take(dr - db)
                    .chain(b.coeffs.iter().map(|c| c * &lr))
                    .collect(),
            );
            r = r.scale(&lb).sub(&shifted);
            e -= 1;
        }
        r.scale(&num_traits::pow(lb, e))
    }

    /// Resultant by the subresultant PRS, exact over `Z`.
    pub fn resultant(&self, other: &Self) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let ca = self.content();
        let cb = other.content();
        let mut a = self.div_exact(&ca);
        let mut b = other.div_exact(&cb);
        let t = num_traits::pow(ca, b.deg()) * num_traits::pow(cb, a.deg());
        let mut s = BigInt::one();
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                s = -s;
            }
        }
        if b.deg() == 0 {
            return s * t * num_traits::pow(b.leading().clone(), a.deg());
        }
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let (da, db) = (a.deg(), b.deg());
            let delta = da - db;
            if da % 2 == 1 && db % 2 == 1 {
                s = -s;
            }
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return BigInt::zero();
            }
            a = b;
            b = r.div_exact(&(&g * num_traits::pow(h.clone(), delta)));
            g = a.leading().clone();
            // h <- g^delta / h^(delta - 1), exact
            h = if delta == 0 {
                h
            } else {
                num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1)
            };
            if b.deg() == 0 {
                let da = a.deg();
                let lb = b.leading().clone();
                let hh = if da == 0 {
                    h
                } else {
                    num_traits::pow(lb, da) / num_traits::pow(h, da - 1)
                };
                return s * t * hh;
            }
        }
    }

    /// Discriminant `(-1)^(d(d-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let d = self.deg();
        if d == 0 {
            return BigInt::zero();
        }
        if d == 1 {
            return BigInt::one();
        }
        let r = self.resultant(&self.derivative()) / self.leading();
        if (d * (d - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Nonzero discriminant, i.e. no repeated roots.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) | Some(1) => true,
            Some(_) => !self.discriminant().is_zero(),
        }
    }

    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Fraction-free determinant of `a(C_g)` for the companion matrix `C_g`.
    //! Independent of the PRS route; used to check resultants.
    use super::*;

    pub fn companion_norm(g: &Poly, a: &Poly) -> BigInt {
        let d = g.degree().unwrap();
        // column j of C holds x * x^j mod g
        let mut c = vec![vec![BigInt::zero(); d]; d];
        for i in 1..d {
            c[i][i - 1] = BigInt::one();
        }
        for i in 0..d {
            c[i][d - 1] = -g.coeff(i);
        }
        let identity = |k: &BigInt| {
            let mut m = vec![vec![BigInt::zero(); d]; d];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = k.clone();
            }
            m
        };
        let matmul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| {
            let mut out = vec![vec![BigInt::zero(); d]; d];
            for i in 0..d {
                for k in 0..d {
                    if x[i][k].is_zero() {
                        continue;
                    }
                    for j in 0..d {
                        out[i][j] += &x[i][k] * &y[k][j];
                    }
                }
            }
            out
        };
        let mut m = identity(&BigInt::zero());
        for coeff in a.coeffs().iter().rev() {
            m = matmul(&m, &c);
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += coeff;
            }
        }
        bareiss_det(m)
    }

    pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
        let n = m.len();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }
}
