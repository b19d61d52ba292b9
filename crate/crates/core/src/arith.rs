//! Machine-word number theory: primality, factoring, residue symbols and
//! modular square roots.
//!
//! Everything here works on `u64`/`i64`. The moduli that appear in the
//! classifier are below `2·10^4`, but each routine is correct on its whole
//! input range.

use crate::error::{Error, Result};

/// Prime factorization of a positive integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Euler's totient of the factored value.
    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Möbius function of the factored value.
    pub fn moebius(&self) -> i64 {
        if self.is_squarefree() {
            if self.factors.len() % 2 == 0 {
                1
            } else {
                -1
            }
        } else {
            0
        }
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u64);
    r * r == n as u64
}

// Jaeschke / Sinclair: this base set is a proof of primality for all n < 2^64.
const MR_BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Canonical factorization; `factor(1)` has no factors.
///
/// # Panics
/// On `n == 0`.
pub fn factor(n: u64) -> Factorization {
    assert!(n >= 1, "factor(0) is undefined");
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut m);
    let mut p = 3;
    while p <= TRIAL_LIMIT && p * p <= m {
        push(p, &mut m);
        p += 2;
    }
    if m > 1 {
        let mut rest = Vec::new();
        split_large(m, &mut rest);
        rest.sort_unstable();
        let mut i = 0;
        while i < rest.len() {
            let q = rest[i];
            let mut e = 0;
            while i < rest.len() && rest[i] == q {
                e += 1;
                i += 1;
            }
            factors.push((q, e));
        }
    }
    Factorization { value: n, factors }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let r = isqrt(n);
    if r * r == n {
        split_large(r, out);
        split_large(r, out);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

// Brent's variant; `n` odd composite with no factor below the trial limit.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn is_squarefree(n: u64) -> bool {
    factor(n).is_squarefree()
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).phi()
}

pub fn moebius(n: u64) -> i64 {
    factor(n).moebius()
}

/// Jacobi symbol `(a | n)` for odd positive `n`.
///
/// # Panics
/// If `n` is even or zero.
pub fn jacobi(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        (a, n) = (n, a);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// A square root of `a` modulo an odd prime `p` (Tonelli–Shanks), or `None`
/// when `a` is a non-residue. The smaller of the two roots is returned.
pub fn sqrt_mod_prime(a: i64, p: u64) -> Result<Option<u64>> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p as i64));
    }
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return Ok(Some(0));
    }
    if jacobi(a as i64, p) != 1 {
        return Ok(None);
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while jacobi(z as i64, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Ok(Some(r.min(p - r)))
}

/// Multiplicative order of `a` modulo `n`, given `phi = φ(n)` factored.
pub fn multiplicative_order(a: u64, n: u64, phi: &Factorization) -> u64 {
    let mut ord = phi.value();
    for &(q, _) in phi.factors() {
        while ord % q == 0 && pow_mod(a, ord / q, n) == 1 {
            ord /= q;
        }
    }
    ord
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let phi = factor(p - 1);
    (2..p)
        .find(|&g| phi.primes().all(|q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sieve(limit: usize) -> Vec<bool> {
        let mut is = vec![true; limit];
        is[0] = false;
        is[1] = false;
        let mut i = 2;
        while i * i < limit {
            if is[i] {
                let mut j = i * i;
                while j < limit {
                    is[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        is
    }

    #[test]
    fn primality_matches_sieve_below_a_million() {
        let s = sieve(1_000_000);
        for (n, &expected) in s.iter().enumerate() {
            assert_eq!(is_prime(n as u64), expected, "n = {n}");
        }
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(2459));
        assert!(!is_prime(1));
        assert!(is_prime(19997));
        assert!(!is_prime(0));
        // strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_615));
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor(46).factors(), &[(2, 1), (23, 1)]);
        assert_eq!(factor(60).factors(), &[(2, 2), (3, 1), (5, 1)]);
        assert_eq!(factor(19996).factors(), &[(2, 2), (4999, 1)]);
        assert!(factor(1).factors().is_empty());
        // two primes above the trial-division limit
        let big = 1_000_003u64 * 1_000_033;
        assert_eq!(factor(big).factors(), &[(1_000_003, 1), (1_000_033, 1)]);
        assert_eq!(factor(1_000_003u64.pow(2)).factors(), &[(1_000_003, 2)]);
    }

    #[test]
    fn squarefree_and_square_examples() {
        assert!(is_squarefree(23));
        assert!(!is_squarefree(12));
        assert!(is_squarefree(4999));
        assert!(is_square(0));
        assert!(!is_square(165));
        assert!(is_square(9));
        assert!(!is_square(-4));
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(5, 11), 1);
        assert_eq!(jacobi(12345, 1), 1);
        assert_eq!(jacobi(2, 15), 1);
        assert_eq!(jacobi(-1, 7), -1);
        assert_eq!(jacobi(21, 15), 0);
    }

    #[test]
    fn sqrt_examples() {
        let r = sqrt_mod_prime(5, 11).unwrap().unwrap();
        assert!(r == 4 || r == 7);
        assert_eq!(sqrt_mod_prime(0, 13).unwrap(), Some(0));
        let r = sqrt_mod_prime(2, 7).unwrap().unwrap();
        assert!(r == 3 || r == 4);
        assert_eq!(sqrt_mod_prime(3, 7).unwrap(), None);
        assert!(sqrt_mod_prime(3, 15).is_err());
        assert!(sqrt_mod_prime(1, 2).is_err());
    }

    #[test]
    fn sqrt_exhaustive_small_primes() {
        for p in primes_between(3, 400) {
            for a in 0..p {
                let scan: Vec<u64> = (0..p).filter(|r| r * r % p == a).collect();
                match sqrt_mod_prime(a as i64, p).unwrap() {
                    Some(r) => assert!(scan.contains(&r)),
                    None => assert!(scan.is_empty()),
                }
            }
        }
    }

    #[test]
    fn divisors_phi_moebius() {
        assert_eq!(factor(12).divisors(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(46), 22);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(1), 1);
        for n in 1..500u64 {
            let brute = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            assert_eq!(euler_phi(n), brute);
        }
    }

    proptest! {
        #[test]
        fn factor_round_trips(n in 1u64..5_000_000) {
            let f = factor(n);
            let product: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(product, n);
            prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.primes().all(is_prime));
            prop_assert_eq!(f.is_squarefree(), f.factors().iter().all(|&(_, e)| e == 1));
        }

        #[test]
        fn jacobi_is_euler_criterion(idx in 0usize..300, a in -10_000i64..10_000) {
            let primes = primes_between(3, 2000);
            let p = primes[idx % primes.len()];
            let e = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
            let expected = if e == 0 { 0 } else if e == 1 { 1 } else { -1 };
            prop_assert_eq!(jacobi(a, p), expected);
        }

        #[test]
        fn sqrt_mod_prime_is_a_root(idx in 0usize..300, a in -10_000i64..10_000) {
            let primes = primes_between(3, 2000);
            let p = primes[idx % primes.len()];
            match sqrt_mod_prime(a, p).unwrap() {
                Some(r) => prop_assert_eq!(mul_mod(r, r, p), a.rem_euclid(p as i64) as u64),
                None => prop_assert_eq!(jacobi(a, p), -1),
            }
        }
    }
}
