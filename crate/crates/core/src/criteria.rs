//! The Endo–Miyata criteria for `p = 2q + 1` and `p = 8q + 1`, and the
//! reference data shipped with the crate.
//!
//! Reference data is compiled in from `data/`: plain text, one prime per
//! line, and `result_rows.txt` with lines `p,d_plus,d_minus,grh`,
//! `p,RATIONAL` or `p,UNDETERMINED`. See `docs/FIXTURES.md` for checksums.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, is_square, is_squarefree, primes_between};
use crate::error::{Error, Result};

/// `p = 2q + 1`, `q = 3 mod 4` squarefree, and neither `4p - q` nor `q + 1`
/// a square.
pub fn em_criterion_i(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let q = (p - 1) / 2;
    q % 4 == 3
        && is_squarefree(q)
        && !is_square((4 * p - q) as i64)
        && !is_square((q + 1) as i64)
}

/// `p = 8q + 1`, `q != 3 mod 4` squarefree, and neither `p - q` nor
/// `p - 4q` a square.
pub fn em_criterion_ii(p: u64) -> bool {
    if p < 9 || (p - 1) % 8 != 0 {
        return false;
    }
    let q = (p - 1) / 8;
    q % 4 != 3 && is_squarefree(q) && !is_square((p - q) as i64) && !is_square((p - 4 * q) as i64)
}

/// Primes below `limit` passing each criterion.
pub fn em_tables(limit: u64) -> (Vec<u64>, Vec<u64>) {
    let primes = if limit > 3 {
        primes_between(3, limit - 1)
    } else {
        Vec::new()
    };
    let first = primes.iter().copied().filter(|&p| em_criterion_i(p)).collect();
    let second = primes.iter().copied().filter(|&p| em_criterion_ii(p)).collect();
    (first, second)
}

/// One line of the reference scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResultRow {
    Degrees { d_plus: u64, d_minus: u64, grh: bool },
    Rational,
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct FixtureSets {
    /// Known rational: `p <= 43` and `61, 67, 71`.
    pub r: Vec<u64>,
    /// Undetermined by the reference scan.
    pub u: Vec<u64>,
    /// Not stably rational only under GRH.
    pub x: Vec<u64>,
    pub s0: Vec<u64>,
    pub s1: Vec<u64>,
    pub t0: Vec<u64>,
    pub t1: Vec<u64>,
    pub table1: Vec<u64>,
    pub table2: Vec<u64>,
    pub result_rows: BTreeMap<u64, ResultRow>,
    /// `(p, l_plus, l_minus)` starting offsets into the reference subfield
    /// order for the `S0` and `S1` runs. Documentation only.
    pub offsets: Vec<(u64, u64, u64)>,
}

pub(crate) const RAW_FIXTURES: [(&str, &str); 11] = [
    ("set_r.txt", include_str!("../data/set_r.txt")),
    ("set_u.txt", include_str!("../data/set_u.txt")),
    ("set_x.txt", include_str!("../data/set_x.txt")),
    ("set_s0.txt", include_str!("../data/set_s0.txt")),
    ("set_s1.txt", include_str!("../data/set_s1.txt")),
    ("set_t0.txt", include_str!("../data/set_t0.txt")),
    ("set_t1.txt", include_str!("../data/set_t1.txt")),
    ("table1.txt", include_str!("../data/table1.txt")),
    ("table2.txt", include_str!("../data/table2.txt")),
    ("result_rows.txt", include_str!("../data/result_rows.txt")),
    ("offsets.txt", include_str!("../data/offsets.txt")),
];

fn raw(name: &str) -> &'static str {
    RAW_FIXTURES.iter().find(|(n, _)| *n == name).unwrap().1
}

fn fixture_err(name: &str, line: usize, message: impl std::fmt::Display) -> Error {
    Error::Fixture {
        name: name.to_owned(),
        message: format!("line {}: {message}", line + 1),
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn int(name: &str, line: usize, s: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| fixture_err(name, line, format!("not an integer: {s:?}")))
}

pub fn parse_prime_list(name: &str, text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (i, l) in lines(text) {
        let p = int(name, i, l)?;
        if !is_prime(p) {
            return Err(fixture_err(name, i, format!("{p} is not prime")));
        }
        if out.last().is_some_and(|&q| q >= p) {
            return Err(fixture_err(name, i, "not strictly increasing"));
        }
        out.push(p);
    }
    Ok(out)
}

pub fn parse_result_rows(name: &str, text: &str) -> Result<BTreeMap<u64, ResultRow>> {
    let mut out = BTreeMap::new();
    for (i, l) in lines(text) {
        let fields: Vec<&str> = l.split(',').map(str::trim).collect();
        let p = int(name, i, fields[0])?;
        let row = match &fields[1..] {
            ["RATIONAL"] => ResultRow::Rational,
            ["UNDETERMINED"] => ResultRow::Undetermined,
            [dp, dm, g] => ResultRow::Degrees {
                d_plus: int(name, i, dp)?,
                d_minus: int(name, i, dm)?,
                grh: match *g {
                    "0" => false,
                    "1" => true,
                    _ => return Err(fixture_err(name, i, "grh flag must be 0 or 1")),
                },
            },
            _ => return Err(fixture_err(name, i, format!("unrecognized row {l:?}"))),
        };
        if out.insert(p, row).is_some() {
            return Err(fixture_err(name, i, format!("duplicate prime {p}")));
        }
    }
    Ok(out)
}

fn parse_offsets(name: &str, text: &str) -> Result<Vec<(u64, u64, u64)>> {
    lines(text)
        .map(|(i, l)| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 3 {
                return Err(fixture_err(name, i, "expected p,l_plus,l_minus"));
            }
            Ok((int(name, i, f[0])?, int(name, i, f[1])?, int(name, i, f[2])?))
        })
        .collect()
}

impl FixtureSets {
    pub fn load() -> Result<Self> {
        let list = |n: &str| parse_prime_list(n, raw(n));
        Ok(Self {
            r: list("set_r.txt")?,
            u: list("set_u.txt")?,
            x: list("set_x.txt")?,
            s0: list("set_s0.txt")?,
            s1: list("set_s1.txt")?,
            t0: list("set_t0.txt")?,
            t1: list("set_t1.txt")?,
            table1: list("table1.txt")?,
            table2: list("table2.txt")?,
            result_rows: parse_result_rows("result_rows.txt", raw("result_rows.txt"))?,
            offsets: parse_offsets("offsets.txt", raw("offsets.txt"))?,
        })
    }

    /// The compiled-in fixtures, parsed once.
    pub fn embedded() -> &'static Self {
        static CELL: OnceLock<FixtureSets> = OnceLock::new();
        CELL.get_or_init(|| Self::load().expect("embedded fixtures are well-formed"))
    }

    pub fn in_r(&self, p: u64) -> bool {
        self.r.binary_search(&p).is_ok()
    }

    pub fn in_u(&self, p: u64) -> bool {
        self.u.binary_search(&p).is_ok()
    }

    pub fn in_x(&self, p: u64) -> bool {
        self.x.binary_search(&p).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sha2::{Digest, Sha256};

    #[test]
    fn criterion_examples() {
        assert!(em_criterion_i(47));
        assert!(!em_criterion_i(59));
        assert!(!em_criterion_i(7));
        assert!(em_criterion_ii(113));
        assert!(!em_criterion_ii(17));
        assert!(em_criterion_ii(19889));
    }

    #[test]
    fn table_examples() {
        assert_eq!(em_tables(200).0, vec![47, 79, 167, 191]);
        assert_eq!(em_tables(250).1, vec![113, 137, 233]);
        assert_eq!(em_tables(3), (vec![], vec![]));
    }

    #[test]
    fn tables_match_fixtures() {
        let f = FixtureSets::embedded();
        let (t1, t2) = em_tables(20000);
        assert_eq!(t1, f.table1);
        assert_eq!(t2, f.table2);
        assert_eq!(f.table1.len(), 394);
        assert_eq!(f.table2.len(), 189);
        assert_eq!(&f.table1[..4], &[47, 79, 167, 191]);
        assert_eq!(&f.table2[f.table2.len() - 2..], &[19793, 19889]);
    }

    #[test]
    fn fixture_sizes_and_relations() {
        let f = FixtureSets::embedded();
        let sizes = [
            f.r.len(),
            f.u.len(),
            f.x.len(),
            f.s0.len(),
            f.s1.len(),
            f.t0.len(),
            f.t1.len(),
        ];
        assert_eq!(sizes, [17, 18, 28, 40, 8, 20, 1]);
        assert!(f.s1.iter().all(|&p| f.in_x(p)));
        assert!(f.t1.iter().all(|&p| f.in_x(p)));
        let disjoint = [&f.r, &f.u, &f.x, &f.s0, &f.t0];
        for (i, a) in disjoint.iter().enumerate() {
            for b in &disjoint[i + 1..] {
                assert!(a.iter().all(|p| !b.contains(p)));
            }
        }
        assert!(f.table1.iter().chain(&f.table2).all(|&p| !f.in_r(p)));
    }

    #[test]
    fn result_rows_cover_primes_below_20000() {
        let f = FixtureSets::embedded();
        let keys: Vec<u64> = f.result_rows.keys().copied().collect();
        assert_eq!(keys, primes_between(2, 19999));
        assert_eq!(keys.len(), 2262);
        for (&p, row) in &f.result_rows {
            match row {
                ResultRow::Rational => assert!(f.in_r(p)),
                ResultRow::Undetermined => assert!(f.in_u(p)),
                ResultRow::Degrees { grh: true, .. } => assert!(f.in_x(p), "{p}"),
                ResultRow::Degrees { .. } => assert!(!f.in_r(p) && !f.in_u(p) && !f.in_x(p)),
            }
        }
        let quadratic = f
            .result_rows
            .values()
            .filter(|r| **r == ResultRow::Degrees { d_plus: 2, d_minus: 2, grh: false })
            .count();
        assert_eq!(quadratic, 1808);
        assert_eq!(
            f.result_rows[&47],
            ResultRow::Degrees { d_plus: 2, d_minus: 2, grh: false }
        );
        assert_eq!(
            f.result_rows[&59],
            ResultRow::Degrees { d_plus: 28, d_minus: 4, grh: true }
        );
        assert_eq!(f.result_rows[&251], ResultRow::Undetermined);
    }

    #[test]
    fn fixture_checksums_match_docs() {
        let docs = include_str!("../../../docs/FIXTURES.md");
        for (name, text) in RAW_FIXTURES {
            let digest = Sha256::digest(text.as_bytes());
            let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
            let line = docs
                .lines()
                .find(|l| l.contains(&format!("`{name}`")))
                .unwrap_or_else(|| panic!("{name} missing from FIXTURES.md"));
            assert!(line.contains(&hex), "checksum of {name} changed: {hex}");
        }
    }

    #[test]
    fn malformed_fixtures_are_rejected() {
        assert!(parse_prime_list("t", "5\n3\n").is_err());
        assert!(parse_prime_list("t", "4\n").is_err());
        assert!(parse_prime_list("t", "x\n").is_err());
        assert!(parse_result_rows("t", "5,2,2,7\n").is_err());
        assert!(parse_result_rows("t", "5,RATIONAL\n5,RATIONAL\n").is_err());
        assert!(parse_result_rows("t", "5,Ratioal\n").is_err());
    }
}
