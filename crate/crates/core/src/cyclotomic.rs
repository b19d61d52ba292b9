//! Subfields of `Q(zeta_n)` and their defining polynomials.
//!
//! The fixed field of `H ⊆ (Z/nZ)*` is generated by a small integer
//! combination `theta = sum_k c_k eta_k` of the sums
//! `eta_k = sum_{h in H} zeta^{k h}`. Its characteristic polynomial is
//! obtained exactly: power sums `Tr_K(theta^j) = Tr(theta^j) / |H|`, where the
//! absolute trace of a representative in `Z[x]/(x^n - 1)` is
//! `sum_i r_i c_n(i)` with `c_n` the Ramanujan sum, then Newton's identities.
//! When the result is not squarefree `theta` lies in a proper subfield and
//! the next combination in a fixed schedule is tried.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abelian::{self, Subgroup};
use crate::arith::{self, factor, gcd};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// `c_n(j) = mu(n/g) phi(n) / phi(n/g)`, `g = gcd(j, n)`.
pub fn ramanujan_sum(n: u64, j: i64) -> i64 {
    let g = gcd(j.unsigned_abs() % n, n);
    let g = if g == 0 { n } else { g };
    let m = n / g;
    let fm = factor(m);
    fm.moebius() * (arith::euler_phi(n) / fm.phi()) as i64
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u64) -> Poly {
    let f = factor(n);
    let mut phi = Poly::from_i64(&[-1, 1]);
    let mut radical = 1u64;
    for p in f.primes() {
        let (q, r) = phi.compose_power(p as usize).div_rem_monic(&phi);
        debug_assert!(r.is_zero());
        phi = q;
        radical *= p;
    }
    phi.compose_power((n / radical) as usize)
}

/// An element of `Z[x]/(x^n - 1)`, read as a value at `zeta_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycElement {
    n: u64,
    coeffs: Vec<BigInt>,
}

impl CycElement {
    pub fn zero(n: u64) -> Self {
        Self {
            n,
            coeffs: vec![BigInt::zero(); n as usize],
        }
    }

    pub fn from_integer(n: u64, k: BigInt) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[0] = k;
        e
    }

    /// `zeta_n^k`
    pub fn zeta_power(n: u64, k: i64) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[k.rem_euclid(n as i64) as usize] = BigInt::one();
        e
    }

    pub fn from_coeffs(n: u64, coeffs: &[i64]) -> Self {
        let mut e = Self::zero(n);
        for (i, &c) in coeffs.iter().enumerate() {
            e.coeffs[i % n as usize] += c;
        }
        e
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn add_integer(&self, k: &BigInt) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += k;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n as usize;
        let (sparse, dense) = if self.nnz() <= other.nnz() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in sparse.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in dense.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[(i + j) % n] += a * b;
                }
            }
        }
        Self {
            n: self.n,
            coeffs: out,
        }
    }

    fn nnz(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Absolute trace `Tr_{Q(zeta_n)/Q}` of the value.
    pub fn trace(&self) -> BigInt {
        let n = self.n;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| c * ramanujan_sum(n, j as i64))
            .sum()
    }

    /// The representative reduced modulo `Phi_n`.
    pub fn reduce(&self) -> Poly {
        Poly::new(self.coeffs.clone()).rem_monic(&cyclotomic_poly(self.n))
    }

    /// Exact test that the value at `zeta_n` vanishes.
    pub fn value_is_zero(&self) -> bool {
        self.reduce().is_zero()
    }

    /// The value as a rational integer, when it is one.
    pub fn integer_value(&self) -> Option<BigInt> {
        let r = self.reduce();
        match r.degree() {
            None => Some(BigInt::zero()),
            Some(0) => Some(r.coeff(0)),
            _ => None,
        }
    }
}

/// `sum_i shape[i] * sum_{h in H} zeta_n^{exponents[i] h}`.
pub fn period_element(h: &Subgroup, exponents: &[u64], shape: &[i64]) -> CycElement {
    let n = h.modulus();
    let mut out = CycElement::zero(n);
    let elems = h.elements();
    for (&k, &c) in exponents.iter().zip(shape) {
        if c == 0 {
            continue;
        }
        for &x in &elems {
            out.coeffs[(k * x % n) as usize] += c;
        }
    }
    out
}

/// A subfield of `Q(zeta_n)` with a defining polynomial.
#[derive(Clone, Debug)]
pub struct SubfieldDescriptor {
    pub n: u64,
    pub subgroup: Subgroup,
    pub degree: u64,
    pub minpoly: Poly,
    pub poly_disc: BigInt,
    /// Period exponents `k_i`, one per distinct nonzero period.
    pub exponents: Vec<u64>,
    /// Coefficients of the generator `sum_i shape[i] eta_{k_i}`.
    pub shape: Vec<i64>,
}

impl SubfieldDescriptor {
    pub fn generator(&self) -> CycElement {
        period_element(&self.subgroup, &self.exponents, &self.shape)
    }

    /// Evaluates the minimal polynomial at the generator in exact
    /// cyclotomic arithmetic and checks the value is zero.
    pub fn verify_annihilates(&self) -> bool {
        let theta = self.generator();
        let mut acc = CycElement::zero(self.n);
        for c in self.minpoly.coeffs().iter().rev() {
            acc = acc.mul(&theta).add_integer(c);
        }
        acc.value_is_zero()
    }
}

impl fmt::Display for SubfieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.degree, self.minpoly)
    }
}

/// The generator schedule: `(1)`, then for each length `L >= 2` every vector
/// starting with 1, ending in 1 or 2, with middle entries in `{0, 1, 2}`, in
/// lexicographic order.
pub fn shape_schedule(max_len: usize) -> impl Iterator<Item = Vec<i64>> {
    let first = (max_len >= 1).then(|| vec![1i64]).into_iter();
    let rest = (2..=max_len).flat_map(|len| {
        let middle = len - 2;
        let count = 3usize.pow(middle as u32) * 2;
        (0..count).map(move |mut code| {
            let mut v = vec![0i64; len];
            v[0] = 1;
            v[len - 1] = (code % 2) as i64 + 1;
            code /= 2;
            for i in (1..len - 1).rev() {
                v[i] = (code % 3) as i64;
                code /= 3;
            }
            v
        })
    });
    first.chain(rest)
}

const MAX_SHAPE_ATTEMPTS: usize = 2000;
const MAX_PERIODS: usize = 40;

/// Exact defining polynomial of the fixed field of `h`.
pub fn subfield_minpoly(h: &Subgroup) -> Result<SubfieldDescriptor> {
    let n = h.modulus();
    let degree = h.index();
    let algebra = OrbitAlgebra::new(n, &h.elements());
    // first the plain periods eta_1..eta_d; when those vanish (composite n)
    // fall back to a basis of nonzero periods
    let mut plain: Vec<u64> = (1..=degree.max(1)).collect();
    let mut memo = HashMap::new();
    if degree > 1 && !plain.iter().any(|&k| algebra.period_nonzero(k, &mut memo)) {
        plain.clear();
    }
    let basis = algebra.period_basis(MAX_PERIODS);
    let candidates = shape_schedule(plain.len())
        .map(|s| (&plain, s))
        .chain(shape_schedule(basis.len()).map(|s| (&basis, s)));
    let mut attempts = 0;
    for (exponents, shape) in candidates.take(MAX_SHAPE_ATTEMPTS) {
        attempts += 1;
        let charpoly = algebra.charpoly(exponents, &shape, degree as usize);
        if charpoly.is_squarefree() {
            let poly_disc = charpoly.discriminant();
            return Ok(SubfieldDescriptor {
                n,
                subgroup: h.clone(),
                degree,
                minpoly: charpoly,
                poly_disc,
                exponents: exponents[..shape.len()].to_vec(),
                shape,
            });
        }
    }
    Err(Error::NoPrimitiveElement {
        n,
        degree,
        attempts,
    })
}

/// One descriptor per subfield of degree at most `max_degree`, ordered by
/// degree and then by minimal-polynomial coefficients.
pub fn subfields(n: u64, max_degree: u64) -> Result<Vec<SubfieldDescriptor>> {
    let group = abelian::unit_group(n)?;
    let mut out = abelian::subgroups(&group, Some(max_degree))
        .iter()
        .map(subfield_minpoly)
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.degree.cmp(&b.degree).then_with(|| a.minpoly.cmp(&b.minpoly)));
    Ok(out)
}

/// `Z[x]/(x^n - 1)` restricted to elements invariant under multiplication of
/// exponents by `H`: one coefficient per `H`-orbit of `Z/nZ`.
struct OrbitAlgebra {
    n: usize,
    subgroup: Vec<u64>,
    orbit_of: Vec<u32>,
    reps: Vec<usize>,
    /// `|orbit| * c_n(rep)`
    trace_weight: Vec<i64>,
}

impl OrbitAlgebra {
    fn new(n: u64, h: &[u64]) -> Self {
        let nu = n as usize;
        let mut orbit_of = vec![u32::MAX; nu];
        let mut reps = Vec::new();
        let mut trace_weight = Vec::new();
        for r in 0..nu {
            if orbit_of[r] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            let mut size = 0i64;
            for &x in h {
                let y = (r as u64 * x % n) as usize;
                if orbit_of[y] == u32::MAX {
                    orbit_of[y] = id;
                    size += 1;
                }
            }
            reps.push(r);
            trace_weight.push(size * ramanujan_sum(n, r as i64));
        }
        Self {
            n: nu,
            subgroup: h.to_vec(),
            orbit_of,
            reps,
            trace_weight,
        }
    }

    /// Exponents `k = 1, 2, ...` with one per `H`-orbit, skipping those whose
    /// period `eta_k` vanishes. For composite `n` most periods can vanish,
    /// e.g. every `eta_k` with `9 ∤ k` when `n = 27` and `|H| = 9`.
    fn period_basis(&self, max: usize) -> Vec<u64> {
        let mut nonzero: HashMap<u64, bool> = HashMap::new();
        let mut used = vec![false; self.reps.len()];
        let mut out = Vec::new();
        for k in 1..self.n as u64 {
            if out.len() == max {
                break;
            }
            let o = self.orbit_of[k as usize] as usize;
            if used[o] {
                continue;
            }
            used[o] = true;
            if self.period_nonzero(k, &mut nonzero) {
                out.push(k);
            }
        }
        out
    }

    /// Whether `eta_k != 0`. `eta_k` and `eta_g` are conjugate for
    /// `g = gcd(k, n)`; the test uses `Tr(eta_g * conj(eta_g)) =
    /// |H| sum_u c_n(g (1 - u))`, which is positive unless `eta_g = 0`.
    fn period_nonzero(&self, k: u64, memo: &mut HashMap<u64, bool>) -> bool {
        let n = self.n as u64;
        let g = arith::gcd(k, n);
        *memo.entry(g).or_insert_with(|| {
            self.subgroup
                .iter()
                .map(|&u| {
                    let j = g * ((n + 1 - u) % n) % n;
                    ramanujan_sum(n, arith::gcd(j, n) as i64)
                })
                .sum::<i64>()
                != 0
        })
    }

    /// Sparse residue list of `sum_i shape[i] eta_{exponents[i]}`.
    fn generator(&self, exponents: &[u64], shape: &[i64]) -> Vec<(usize, i64)> {
        let n = self.n as u64;
        let mut dense = vec![0i64; self.n];
        for (&k, &c) in exponents.iter().zip(shape) {
            if c != 0 {
                for &x in &self.subgroup {
                    dense[(k * x % n) as usize] += c;
                }
            }
        }
        dense
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .collect()
    }

    fn mul_sparse(&self, x: &[BigInt], theta: &[(usize, i64)]) -> Vec<BigInt> {
        let n = self.n;
        self.reps
            .iter()
            .map(|&m| {
                let mut acc = BigInt::zero();
                for &(r, c) in theta {
                    let o = self.orbit_of[(m + n - r) % n] as usize;
                    if !x[o].is_zero() {
                        acc += &x[o] * c;
                    }
                }
                acc
            })
            .collect()
    }

    fn trace(&self, x: &[BigInt]) -> BigInt {
        x.iter()
            .zip(&self.trace_weight)
            .filter(|(c, w)| !c.is_zero() && **w != 0)
            .map(|(c, &w)| c * w)
            .sum()
    }

    /// Characteristic polynomial of `theta` over `Q`, restricted to the fixed
    /// field, i.e. `prod_{cosets} (x - sigma(theta))`.
    fn charpoly(&self, exponents: &[u64], shape: &[i64], degree: usize) -> Poly {
        let theta = self.generator(exponents, shape);
        let mut x: Vec<BigInt> = vec![BigInt::zero(); self.reps.len()];
        x[self.orbit_of[0] as usize] = BigInt::one();
        let order = BigInt::from(self.subgroup.len());
        let mut power_sums = Vec::with_capacity(degree);
        for _ in 0..degree {
            x = self.mul_sparse(&x, &theta);
            let (q, r) = self.trace(&x).div_rem(&order);
            debug_assert!(r.is_zero(), "trace not divisible by |H|");
            power_sums.push(q);
        }
        newton_to_poly(&power_sums)
    }
}

/// Monic polynomial with the given power sums `p_1..p_d` of its roots.
fn newton_to_poly(power_sums: &[BigInt]) -> Poly {
    let d = power_sums.len();
    let mut e = vec![BigInt::one()];
    for k in 1..=d {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &power_sums[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Newton identity left a remainder");
        e.push(q);
    }
    let mut coeffs = vec![BigInt::zero(); d + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[d - k] = if k % 2 == 0 { ek } else { -ek };
    }
    Poly::new(coeffs)
}
