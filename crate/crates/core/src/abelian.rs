//! The unit group `(Z/nZ)*` and its subgroups.
//!
//! `(Z/nZ)*` is presented as `Z^k / diag(d_1, ..., d_k) Z^k` with explicit
//! generators, `d_{i+1} | d_i`. A subgroup is the image of a lattice `M`
//! with `diag(d) Z^k ⊆ M ⊆ Z^k`, stored as the column-style Hermite normal
//! form of `M`: upper triangular, positive diagonal, and every entry right
//! of a pivot reduced into `[0, pivot)`. Distinct subgroups have distinct
//! HNFs, so enumeration over admissible HNFs is duplicate-free.

use std::sync::Arc;

use crate::arith::{self, factor, gcd, mul_mod, multiplicative_order, pow_mod};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroup {
    modulus: u64,
    cyclic_orders: Vec<u64>,
    generators: Vec<u64>,
}

impl UnitGroup {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Invariant factors `d_1, ..., d_k` with `d_{i+1} | d_i`.
    pub fn cyclic_orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.cyclic_orders.len()
    }

    pub fn order(&self) -> u64 {
        self.cyclic_orders.iter().product()
    }

    /// `prod g_i^{v_i} mod n`
    pub fn eval(&self, exponents: &[u64]) -> u64 {
        self.generators
            .iter()
            .zip(exponents)
            .fold(1 % self.modulus, |acc, (&g, &e)| {
                mul_mod(acc, pow_mod(g, e, self.modulus), self.modulus)
            })
    }
}

/// Invariant-factor decomposition of `(Z/nZ)*` with explicit generators.
pub fn unit_group(n: u64) -> Result<UnitGroup> {
    if n < 3 {
        return Err(Error::ModulusTooSmall(n));
    }
    // cyclic primary components: (prime l, l-power order, generator mod n)
    let mut components: Vec<(u64, u64, u64)> = Vec::new();
    let f = factor(n);
    for &(p, e) in f.factors() {
        let pe = p.pow(e);
        let cofactor = n / pe;
        // lift a residue mod p^e to one that is 1 mod the cofactor
        let lift = |r: u64| crt_pair(r, pe, 1, cofactor);
        let mut local: Vec<(u64, u64)> = Vec::new(); // (order, generator mod p^e)
        if p == 2 {
            match e {
                1 => {}
                2 => local.push((2, 3)),
                _ => {
                    local.push((2, pe - 1));
                    local.push((pe / 4, 5));
                }
            }
        } else {
            let mut g = arith::primitive_root(p);
            if e > 1 && pow_mod(g, p - 1, p * p) == 1 {
                g += p;
            }
            local.push(((p - 1) * p.pow(e - 1), g));
        }
        for (order, g) in local {
            let of = factor(order);
            for &(l, k) in of.factors() {
                let lk = l.pow(k);
                let gl = pow_mod(g, order / lk, pe);
                components.push((l, lk, lift(gl)));
            }
        }
    }
    // group by prime, largest first; the i-th invariant factor combines the
    // i-th largest component of every prime
    let mut by_prime: std::collections::BTreeMap<u64, Vec<(u64, u64)>> = Default::default();
    for (l, order, g) in components {
        by_prime.entry(l).or_default().push((order, g));
    }
    let mut rank = 0;
    for comps in by_prime.values_mut() {
        comps.sort_unstable_by(|a, b| b.cmp(a));
        rank = rank.max(comps.len());
    }
    let mut cyclic_orders = vec![1u64; rank];
    let mut generators = vec![1u64; rank];
    for comps in by_prime.values() {
        for (i, &(order, g)) in comps.iter().enumerate() {
            cyclic_orders[i] *= order;
            generators[i] = mul_mod(generators[i], g, n);
        }
    }
    Ok(UnitGroup {
        modulus: n,
        cyclic_orders,
        generators,
    })
}

fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    // m1, m2 coprime; find x = r1 mod m1, x = r2 mod m2
    let m = m1 * m2;
    let inv = mod_inverse(m1 % m2, m2);
    let t = mul_mod((r2 + m2 - r1 % m2) % m2, inv, m2);
    (r1 + m1 * t) % m
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "not invertible");
    old_s.rem_euclid(m as i128) as u64
}

/// A subgroup of a [`UnitGroup`], encoded by the HNF of its exponent lattice.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<UnitGroup>,
    hnf: Vec<Vec<u64>>,
    index: u64,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent.modulus == other.parent.modulus && self.hnf == other.hnf
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn parent(&self) -> &UnitGroup {
        &self.parent
    }

    pub fn modulus(&self) -> u64 {
        self.parent.modulus
    }

    /// Row-major HNF; column `j` is an exponent vector of a generator.
    pub fn hnf(&self) -> &[Vec<u64>] {
        &self.hnf
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn order(&self) -> u64 {
        self.parent.order() / self.index
    }

    /// Residues generating the subgroup, one per HNF column.
    pub fn generator_residues(&self) -> Vec<u64> {
        let k = self.parent.rank();
        (0..k)
            .map(|j| {
                let col: Vec<u64> = (0..k).map(|i| self.hnf[i][j]).collect();
                self.parent.eval(&col)
            })
            .collect()
    }

    /// Sorted residues mod n lying in the subgroup.
    pub fn elements(&self) -> Vec<u64> {
        let n = self.parent.modulus;
        let mut member = vec![false; n as usize];
        let mut elems = vec![1 % n];
        member[(1 % n) as usize] = true;
        for g in self.generator_residues() {
            let base = elems.clone();
            let mut power = g;
            while !member[power as usize] {
                for &e in &base {
                    let x = mul_mod(e, power, n);
                    if !member[x as usize] {
                        member[x as usize] = true;
                        elems.push(x);
                    }
                }
                power = mul_mod(power, g, n);
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Whether the exponent vector lies in the lattice (mod the relations).
    pub fn contains_exponents(&self, v: &[u64]) -> bool {
        let k = self.parent.rank();
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for i in (0..k).rev() {
            let d = self.parent.cyclic_orders[i] as i128;
            // relations d_i e_i are in the lattice, so reduce first
            w[i] = w[i].rem_euclid(d);
            let pivot = self.hnf[i][i] as i128;
            if w[i] % pivot != 0 {
                return false;
            }
            let c = w[i] / pivot;
            for (r, wr) in w.iter_mut().enumerate().take(i + 1) {
                *wr -= c * self.hnf[r][i] as i128;
            }
        }
        true
    }
}

fn lattice_contains(hnf: &[Vec<u64>], v: &[i128]) -> bool {
    let k = hnf.len();
    let mut w = v.to_vec();
    for i in (0..k).rev() {
        let pivot = hnf[i][i] as i128;
        if w[i] % pivot != 0 {
            return false;
        }
        let c = w[i] / pivot;
        for (r, wr) in w.iter_mut().enumerate().take(i + 1) {
            *wr -= c * hnf[r][i] as i128;
        }
    }
    true
}

/// All subgroups (of index at most `max_index`, when given), ordered by
/// index and then lexicographically by HNF.
pub fn subgroups(group: &UnitGroup, max_index: Option<u64>) -> Vec<Subgroup> {
    let parent = Arc::new(group.clone());
    let k = group.rank();
    let limit = max_index.unwrap_or(u64::MAX);
    let mut out = Vec::new();
    let divisor_lists: Vec<Vec<u64>> = group
        .cyclic_orders
        .iter()
        .map(|&d| factor(d).divisors())
        .collect();

    let mut diag = vec![0u64; k];
    enumerate_diagonals(&divisor_lists, 0, 1, limit, &mut diag, &mut |diag| {
        let mut hnf = vec![vec![0u64; k]; k];
        for i in 0..k {
            hnf[i][i] = diag[i];
        }
        // free slots: (i, j) with j > i, each ranging over [0, diag[i])
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        fill_offdiagonal(&slots, 0, &mut hnf, &mut |hnf| {
            let ok = (0..k).all(|j| {
                let mut v = vec![0i128; k];
                v[j] = group.cyclic_orders[j] as i128;
                lattice_contains(hnf, &v)
            });
            if ok {
                out.push(Subgroup {
                    parent: Arc::clone(&parent),
                    hnf: hnf.to_vec(),
                    index: diag.iter().product(),
                });
            }
        });
    });
    out.sort_by(|a, b| a.index.cmp(&b.index).then_with(|| a.hnf.cmp(&b.hnf)));
    out
}

fn enumerate_diagonals(
    divisors: &[Vec<u64>],
    pos: usize,
    product: u64,
    limit: u64,
    diag: &mut Vec<u64>,
    visit: &mut dyn FnMut(&[u64]),
) {
    if pos == divisors.len() {
        visit(diag);
        return;
    }
    for &h in &divisors[pos] {
        let Some(next) = product.checked_mul(h) else {
            break;
        };
        if next > limit {
            break;
        }
        diag[pos] = h;
        enumerate_diagonals(divisors, pos + 1, next, limit, diag, visit);
    }
}

fn fill_offdiagonal(
    slots: &[(usize, usize)],
    pos: usize,
    hnf: &mut Vec<Vec<u64>>,
    visit: &mut dyn FnMut(&[Vec<u64>]),
) {
    if pos == slots.len() {
        visit(hnf);
        return;
    }
    let (i, j) = slots[pos];
    for x in 0..hnf[i][i] {
        hnf[i][j] = x;
        fill_offdiagonal(slots, pos + 1, hnf, visit);
    }
    hnf[i][j] = 0;
}

/// The subgroup generated by a set of residues (used by tests and callers
/// that start from residues rather than exponent lattices).
pub fn subgroup_generated_by(group: &UnitGroup, residues: &[u64]) -> Subgroup {
    let n = group.modulus;
    let mut member = vec![false; n as usize];
    let mut set = vec![1 % n];
    member[(1 % n) as usize] = true;
    for &g in residues {
        let g = g % n;
        let base = set.clone();
        let mut power = g;
        while !member[power as usize] {
            for &e in &base {
                let x = mul_mod(e, power, n);
                if !member[x as usize] {
                    member[x as usize] = true;
                    set.push(x);
                }
            }
            power = mul_mod(power, g, n);
        }
    }
    let index = group.order() / set.len() as u64;
    subgroups(group, Some(index))
        .into_iter()
        .find(|h| h.index == index && h.generator_residues().iter().all(|&r| member[r as usize]))
        .expect("every generated subgroup appears in the enumeration")
}

/// Order of each generator, for invariant checks.
pub fn generator_orders(group: &UnitGroup) -> Vec<u64> {
    let phi = factor(group.order());
    group
        .generators
        .iter()
        .map(|&g| multiplicative_order(g, group.modulus, &phi))
        .collect()
}

/// Sanity condition on a residue: coprime to the modulus.
pub fn is_unit(a: u64, n: u64) -> bool {
    gcd(a, n) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn units(n: u64) -> Vec<u64> {
        (1..n).filter(|&a| gcd(a, n) == 1).collect()
    }

    /// Every subgroup is generated by at most `rank` elements, so closing
    /// all subsets of size <= rank finds every subgroup.
    /// Every subgroup, found by adjoining one unit at a time to subgroups
    /// already found, starting from the trivial one.
    fn brute_subgroups(n: u64) -> BTreeSet<Vec<u64>> {
        let u = units(n);
        let adjoin = |h: &[u64], g: u64| -> Vec<u64> {
            let mut set: BTreeSet<u64> = h.iter().copied().collect();
            let mut power = g;
            while !set.contains(&power) {
                for &x in h {
                    set.insert(mul_mod(x, power, n));
                }
                power = mul_mod(power, g, n);
            }
            set.into_iter().collect()
        };
        let mut found = BTreeSet::from([vec![1 % n]]);
        let mut queue = vec![vec![1 % n]];
        while let Some(h) = queue.pop() {
            for &g in &u {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let bigger = adjoin(&h, g);
                if found.insert(bigger.clone()) {
                    queue.push(bigger);
                }
            }
        }
        found
    }

    #[test]
    fn invariant_factor_examples() {
        assert_eq!(unit_group(46).unwrap().cyclic_orders(), &[22]);
        assert_eq!(unit_group(8).unwrap().cyclic_orders(), &[2, 2]);
        assert_eq!(unit_group(24).unwrap().cyclic_orders(), &[2, 2, 2]);
        assert_eq!(unit_group(15).unwrap().cyclic_orders(), &[4, 2]);
        assert!(unit_group(2).is_err());
    }

    #[test]
    fn unit_group_invariants_small_moduli() {
        for n in 3..=300u64 {
            let g = unit_group(n).unwrap();
            assert_eq!(g.order(), arith::euler_phi(n), "n = {n}");
            assert!(g.cyclic_orders().windows(2).all(|w| w[0] % w[1] == 0));
            assert_eq!(generator_orders(&g), g.cyclic_orders(), "n = {n}");
            // generators produce every unit exactly once
            let mut seen = BTreeSet::new();
            let k = g.rank();
            let mut idx = vec![0u64; k];
            loop {
                seen.insert(g.eval(&idx));
                let mut i = 0;
                while i < k {
                    idx[i] += 1;
                    if idx[i] < g.cyclic_orders()[i] {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
            assert_eq!(seen.into_iter().collect::<Vec<_>>(), units(n), "n = {n}");
        }
    }

    #[test]
    fn subgroup_counts() {
        let c22 = unit_group(46).unwrap();
        let subs = subgroups(&c22, None);
        assert_eq!(subs.iter().map(|h| h.index()).collect::<Vec<_>>(), vec![1, 2, 11, 22]);
        assert_eq!(subgroups(&unit_group(8).unwrap(), None).len(), 5);
        // (Z/15)* = C4 x C2
        assert_eq!(subgroups(&unit_group(15).unwrap(), None).len(), 8);
    }

    #[test]
    fn subgroup_enumeration_matches_brute_force() {
        for n in 3..=200u64 {
            let g = unit_group(n).unwrap();
            let ours: BTreeSet<Vec<u64>> = subgroups(&g, None).iter().map(|h| h.elements()).collect();
            assert_eq!(ours.len(), subgroups(&g, None).len(), "duplicates for n = {n}");
            assert_eq!(ours, brute_subgroups(n), "n = {n}");
        }
    }

    #[test]
    fn elements_examples() {
        let g = unit_group(23).unwrap();
        let h = subgroups(&g, Some(2)).into_iter().find(|h| h.index() == 2).unwrap();
        assert_eq!(h.elements(), vec![1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18]);
        let trivial = subgroups(&g, None).into_iter().last().unwrap();
        assert_eq!(trivial.elements(), vec![1]);
        let full = &subgroups(&unit_group(10).unwrap(), None)[0];
        assert_eq!(full.elements(), vec![1, 3, 7, 9]);
    }

    #[test]
    fn elements_are_closed_and_sized() {
        for n in [24u64, 60, 63, 91, 120, 168, 200] {
            let g = unit_group(n).unwrap();
            for h in subgroups(&g, None) {
                let e = h.elements();
                assert_eq!(e.len() as u64 * h.index(), g.order());
                let set: BTreeSet<u64> = e.iter().copied().collect();
                for &a in &e {
                    for &b in &e {
                        assert!(set.contains(&mul_mod(a, b, n)));
                    }
                }
            }
        }
    }

    #[test]
    fn max_index_filters_and_orders() {
        let g = unit_group(120).unwrap();
        let all = subgroups(&g, None);
        let small = subgroups(&g, Some(4));
        assert_eq!(
            small.len(),
            all.iter().filter(|h| h.index() <= 4).count()
        );
        assert!(small.windows(2).all(|w| w[0].index() <= w[1].index()));
    }

    #[test]
    fn generated_subgroup_lookup() {
        let g = unit_group(5).unwrap();
        let h = subgroup_generated_by(&g, &[4]);
        assert_eq!(h.elements(), vec![1, 4]);
        let g12 = unit_group(12).unwrap();
        let h = subgroup_generated_by(&g12, &[7]);
        assert_eq!(h.elements(), vec![1, 7]);
        assert!(h.contains_exponents(&vec![0; g12.rank()]));
    }
}
