//! Norm equations `N_F(alpha) = t` in fields `F = Q[x]/(g)` of any degree.
//!
//! Two directions: [`certificate_search`] looks for a solution with small
//! coordinates in the power basis, and [`BackendClient`] hands the full
//! decision (including nonexistence) to an external program over a
//! line-delimited JSON protocol. Anything the backend claims to have solved
//! is re-checked here with [`norm_of`].

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::Value;
use thiserror::Error;

use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormProblem {
    pub minpoly: Poly,
    pub target: BigInt,
}

impl NormProblem {
    /// # Panics
    /// If `minpoly` is not monic and squarefree of positive degree.
    pub fn new(minpoly: Poly, target: impl Into<BigInt>) -> Self {
        assert!(
            minpoly.degree().is_some_and(|d| d > 0) && minpoly.is_monic(),
            "minimal polynomial must be monic of positive degree"
        );
        assert!(minpoly.is_squarefree(), "minimal polynomial must be squarefree");
        Self {
            minpoly,
            target: target.into(),
        }
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }
}

/// `N(a(theta))` for a root `theta` of the monic `g`: the product of `a` over
/// all roots of `g`, i.e. `Res(g, a)`.
pub fn norm_of(g: &Poly, a: &Poly) -> BigInt {
    debug_assert!(g.is_monic());
    if a.is_zero() {
        return BigInt::zero();
    }
    let a = if a.degree() >= g.degree() {
        a.rem_monic(g)
    } else {
        a.clone()
    };
    if a.is_zero() {
        return BigInt::zero();
    }
    if a.degree() == Some(0) {
        return num_traits::pow(a.coeff(0), g.degree().unwrap());
    }
    g.resultant(&a)
}

/// Complex roots of a squarefree polynomial by Aberth iteration, polished
/// with Newton steps.
pub fn complex_roots(g: &Poly) -> Vec<Complex64> {
    let d = g.degree().unwrap_or(0);
    if d == 0 {
        return Vec::new();
    }
    let lead = g.leading().to_f64().unwrap();
    let c: Vec<f64> = g
        .coeffs()
        .iter()
        .map(|x| x.to_f64().unwrap() / lead)
        .collect();
    let eval = |z: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for &k in c.iter().rev() {
            dv = dv * z + v;
            v = v * z + k;
        }
        (v, dv)
    };
    // Cauchy bound for the starting circle
    let radius = 1.0 + c[..d].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            Complex64::from_polar(
                radius * 0.5,
                2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (v, dv) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = eval(*r);
            if dv.norm() > 0.0 {
                *r -= v / dv;
            }
        }
    }
    z
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Vec<BigInt>),
    /// The whole box was covered without a hit.
    Exhausted,
    /// The node budget ran out first.
    BudgetExceeded,
}

/// Searches `a = sum a_j theta^j` with `|a_j| <= bound` and `N(a) = target`.
/// A miss proves nothing about the equation.
pub fn certificate_search(prob: &NormProblem, bound: u32) -> Option<Vec<BigInt>> {
    match certificate_search_budgeted(prob, bound, u64::MAX) {
        SearchOutcome::Found(a) => Some(a),
        _ => None,
    }
}

/// Relative slack on every floating-point bound; pruning only fires when
/// the estimate clears the target by more than this.
const SLACK: f64 = 1e-6;

/// Depth-first search from the top coefficient down, values in the order
/// `0, 1, -1, 2, -2, ...`. A partial assignment is cut off when, at every
/// embedding, the reachable values of `|a(theta_i)|` lie in an annulus whose
/// radii multiply to something clearly above or clearly below `|target|`.
pub fn certificate_search_budgeted(prob: &NormProblem, bound: u32, budget: u64) -> SearchOutcome {
    let g = &prob.minpoly;
    let d = prob.degree();
    let target_abs = prob.target.abs().to_f64().unwrap_or(f64::INFINITY);
    let roots = complex_roots(g);
    // powers[i][j] = theta_i^j
    let powers: Vec<Vec<Complex64>> = roots
        .iter()
        .map(|&r| {
            let mut v = Vec::with_capacity(d);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..d {
                v.push(acc);
                acc *= r;
            }
            v
        })
        .collect();
    // tail[i][k] = bound * sum_{j < k} |theta_i^j|, the most the free low
    // coefficients can move embedding i
    let b = bound as f64;
    let tail: Vec<Vec<f64>> = powers
        .iter()
        .map(|pw| {
            let mut t = vec![0.0; d + 1];
            for j in 0..d {
                t[j + 1] = t[j] + b * pw[j].norm();
            }
            t
        })
        .collect();
    let values: Vec<i64> = std::iter::once(0)
        .chain((1..=bound as i64).flat_map(|v| [v, -v]))
        .collect();

    let mut search = Search {
        g,
        target: &prob.target,
        target_abs,
        d,
        powers: &powers,
        tail: &tail,
        values: &values,
        coeffs: vec![0; d],
        partial: vec![Complex64::new(0.0, 0.0); roots.len()],
        nodes: 0,
        budget,
    };
    match search.descend(d) {
        Ok(Some(a)) => SearchOutcome::Found(a),
        Ok(None) => SearchOutcome::Exhausted,
        Err(()) => SearchOutcome::BudgetExceeded,
    }
}

struct Search<'a> {
    g: &'a Poly,
    target: &'a BigInt,
    target_abs: f64,
    d: usize,
    powers: &'a [Vec<Complex64>],
    tail: &'a [Vec<f64>],
    values: &'a [i64],
    coeffs: Vec<i64>,
    /// `sum_{j >= free} a_j theta_i^j` for the assigned coefficients
    partial: Vec<Complex64>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Coefficients `0..free` are still unassigned.
    fn descend(&mut self, free: usize) -> Result<Option<Vec<BigInt>>, ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        if self.pruned(free) {
            return Ok(None);
        }
        if free == 0 {
            return Ok(self.check_leaf());
        }
        let j = free - 1;
        for &v in self.values {
            self.coeffs[j] = v;
            let vf = v as f64;
            for (i, pw) in self.powers.iter().enumerate() {
                self.partial[i] += pw[j] * vf;
            }
            let found = self.descend(j);
            for (i, pw) in self.powers.iter().enumerate() {
                self.partial[i] -= pw[j] * vf;
            }
            self.coeffs[j] = 0;
            if let Some(a) = found? {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    fn pruned(&self, free: usize) -> bool {
        if free == self.d {
            return false;
        }
        let mut lo = 1.0f64;
        let mut hi = 1.0f64;
        for (i, z) in self.partial.iter().enumerate() {
            let m = z.norm();
            let t = self.tail[i][free];
            lo *= (m - t).max(0.0) * (1.0 - SLACK);
            hi *= (m + t) * (1.0 + SLACK);
        }
        lo > self.target_abs * (1.0 + SLACK) || hi < self.target_abs * (1.0 - SLACK)
    }

    fn check_leaf(&self) -> Option<Vec<BigInt>> {
        if self.coeffs.iter().all(|&c| c == 0) {
            return None;
        }
        let a = Poly::from_i64(&self.coeffs);
        (norm_of(self.g, &a) == *self.target).then(|| self.coeffs.iter().map(|&c| c.into()).collect())
    }
}

/// How to start the backend: program and arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackendCommand {
    pub program: String,
    pub args: Vec<String>,
}

impl BackendCommand {
    /// Whitespace-separated command line; `None` when blank.
    pub fn parse(line: &str) -> Option<Self> {
        let mut words = line.split_whitespace().map(str::to_owned);
        let program = words.next()?;
        Some(Self {
            program,
            args: words.collect(),
        })
    }
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("backend unavailable")]
    Unavailable,

    #[error("failed to start backend `{program}`: {source}")]
    Spawn {
        program: String,
        source: std::io::Error,
    },

    #[error("backend i/o failed: {0}")]
    Io(#[from] std::io::Error),

    #[error("backend process exited before answering")]
    Exited,

    #[error("malformed backend response: {0}")]
    Malformed(String),

    #[error("backend witness has norm {found}, expected {expected}")]
    BadWitness { expected: BigInt, found: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackendOutcome {
    Solvable(Vec<BigInt>),
    ProvablyUnsolvable,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackendDecision {
    pub outcome: BackendOutcome,
    /// The backend proved its class-group data, unconditionally or (with
    /// `grh`) under GRH.
    pub certified: bool,
    pub grh: bool,
}

impl BackendDecision {
    /// A nonexistence claim this caller may rely on.
    pub fn is_accepted_obstruction(&self) -> bool {
        self.outcome == BackendOutcome::ProvablyUnsolvable && self.certified
    }
}

/// One backend child process.
pub struct BackendClient {
    command: BackendCommand,
    child: Child,
    stdin: Option<ChildStdin>,
    stdout: BufReader<ChildStdout>,
    next_id: u64,
}

impl BackendClient {
    pub fn spawn(command: &BackendCommand) -> Result<Self, BackendError> {
        let mut child = Command::new(&command.program)
            .args(&command.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|source| BackendError::Spawn {
                program: command.program.clone(),
                source,
            })?;
        let stdin = child.stdin.take();
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok(Self {
            command: command.clone(),
            child,
            stdin,
            stdout,
            next_id: 1,
        })
    }

    pub fn command(&self) -> &BackendCommand {
        &self.command
    }

    pub fn decide(
        &mut self,
        prob: &NormProblem,
        grh_allowed: bool,
    ) -> Result<BackendDecision, BackendError> {
        let id = self.next_id;
        self.next_id += 1;
        let line = encode_request(id, prob);
        let stdin = self.stdin.as_mut().ok_or(BackendError::Exited)?;
        stdin.write_all(line.as_bytes())?;
        stdin.write_all(b"\n")?;
        stdin.flush()?;
        let mut reply = String::new();
        if self.stdout.read_line(&mut reply)? == 0 {
            return Err(BackendError::Exited);
        }
        let decision = parse_response(&reply, id, prob.degree())?;
        finish_decision(decision, prob, grh_allowed)
    }
}

impl Drop for BackendClient {
    fn drop(&mut self) {
        // closing stdin lets a well-behaved backend exit on its own
        self.stdin.take();
        if !matches!(self.child.try_wait(), Ok(Some(_))) {
            let _ = self.child.kill();
        }
        let _ = self.child.wait();
    }
}

fn encode_request(id: u64, prob: &NormProblem) -> String {
    let coeffs: Vec<String> = prob.minpoly.coeffs().iter().map(|c| c.to_string()).collect();
    format!(
        "{{\"id\":{},\"minpoly\":[{}],\"target\":{}}}",
        id,
        coeffs.join(","),
        prob.target
    )
}

fn json_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        _ => None,
    }
}

pub(crate) fn parse_response(
    line: &str,
    id: u64,
    degree: usize,
) -> Result<BackendDecision, BackendError> {
    let bad = |m: &str| BackendError::Malformed(format!("{m}: {}", line.trim_end()));
    let v: Value = serde_json::from_str(line).map_err(|e| bad(&e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| bad("not an object"))?;
    let got_id = obj.get("id").and_then(json_int).ok_or_else(|| bad("missing id"))?;
    if got_id != BigInt::from(id) {
        return Err(bad(&format!("expected id {id}")));
    }
    let flag = |k: &str| match obj.get(k) {
        None => Ok(false),
        Some(Value::Bool(b)) => Ok(*b),
        Some(_) => Err(bad(&format!("`{k}` is not a boolean"))),
    };
    let certified = flag("certified")?;
    let grh = flag("grh")?;
    let outcome = match obj.get("outcome").and_then(Value::as_str) {
        Some("solvable") => {
            let w = obj
                .get("witness")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("solvable without witness"))?;
            let w: Vec<BigInt> = w
                .iter()
                .map(json_int)
                .collect::<Option<_>>()
                .ok_or_else(|| bad("non-integer witness coefficient"))?;
            if w.len() > degree {
                return Err(bad("witness longer than the field degree"));
            }
            BackendOutcome::Solvable(w)
        }
        Some("unsolvable") => BackendOutcome::ProvablyUnsolvable,
        Some("unknown") => BackendOutcome::Unknown,
        _ => return Err(bad("unknown outcome")),
    };
    Ok(BackendDecision {
        outcome,
        certified,
        grh,
    })
}

fn finish_decision(
    mut decision: BackendDecision,
    prob: &NormProblem,
    grh_allowed: bool,
) -> Result<BackendDecision, BackendError> {
    match &decision.outcome {
        BackendOutcome::Solvable(w) => {
            let found = norm_of(&prob.minpoly, &Poly::new(w.clone()));
            if found != prob.target {
                return Err(BackendError::BadWitness {
                    expected: prob.target.clone(),
                    found,
                });
            }
        }
        BackendOutcome::ProvablyUnsolvable if decision.grh && !grh_allowed => {
            decision.outcome = BackendOutcome::Unknown;
        }
        _ => {}
    }
    Ok(decision)
}

/// Reusable backend processes, one per concurrent caller.
pub struct BackendPool {
    command: BackendCommand,
    idle: Mutex<Vec<BackendClient>>,
}

impl BackendPool {
    pub fn new(command: BackendCommand) -> Self {
        Self {
            command,
            idle: Mutex::new(Vec::new()),
        }
    }

    pub fn command(&self) -> &BackendCommand {
        &self.command
    }

    pub fn decide(
        &self,
        prob: &NormProblem,
        grh_allowed: bool,
    ) -> Result<BackendDecision, BackendError> {
        let client = self.idle.lock().unwrap().pop();
        let mut client = match client {
            Some(c) => c,
            None => BackendClient::spawn(&self.command)?,
        };
        let result = client.decide(prob, grh_allowed);
        // a client that failed mid-conversation may be out of sync
        if result.is_ok() {
            self.idle.lock().unwrap().push(client);
        }
        result
    }
}

/// Forwards `prob` to the configured backend.
pub fn backend_decide(
    backend: Option<&BackendPool>,
    prob: &NormProblem,
    grh_allowed: bool,
) -> Result<BackendDecision, BackendError> {
    backend
        .ok_or(BackendError::Unavailable)?
        .decide(prob, grh_allowed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::cyclotomic_poly;
    use crate::arith;
    use crate::poly::oracle::companion_norm;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn norm_examples() {
        let g = p(&[-1, 1, 1]);
        assert_eq!(norm_of(&g, &p(&[0, 1])), BigInt::from(-1));
        assert_eq!(norm_of(&g, &p(&[2, 1])), BigInt::from(1));
        assert_eq!(norm_of(&p(&[1, 0, 1]), &p(&[2, 1])), BigInt::from(5));
        assert_eq!(norm_of(&g, &Poly::one()), BigInt::from(1));
        assert_eq!(norm_of(&g, &Poly::zero()), BigInt::zero());
        assert_eq!(norm_of(&p(&[1, 0, 1]), &p(&[3])), BigInt::from(9));
    }

    #[test]
    fn certificate_examples() {
        let prob = NormProblem::new(p(&[1, 0, 1]), 5);
        let a = certificate_search(&prob, 2).unwrap();
        assert_eq!(norm_of(&prob.minpoly, &Poly::new(a.clone())), BigInt::from(5));
        assert_eq!(a, vec![BigInt::from(2), BigInt::from(1)]);

        let prob = NormProblem::new(p(&[1, -1, 1]), 7);
        let a = certificate_search(&prob, 2).unwrap();
        assert_eq!(norm_of(&prob.minpoly, &Poly::new(a)), BigInt::from(7));

        let prob = NormProblem::new(p(&[6, 1, 1]), 47);
        assert_eq!(certificate_search(&prob, 10), None);
    }

    /// Plain enumeration of the box, no pruning.
    fn brute_box(g: &Poly, target: i64, bound: i64) -> bool {
        let d = g.degree().unwrap();
        let mut a = vec![-bound; d];
        loop {
            if norm_of(g, &p(&a)) == BigInt::from(target) {
                return true;
            }
            let mut i = 0;
            loop {
                if i == d {
                    return false;
                }
                a[i] += 1;
                if a[i] <= bound {
                    break;
                }
                a[i] = -bound;
                i += 1;
            }
        }
    }

    #[test]
    fn pruned_search_matches_box_enumeration() {
        let fields = [
            cyclotomic_poly(5),
            cyclotomic_poly(8),
            cyclotomic_poly(12),
            p(&[-1, 1, 1]),
            p(&[2, 1, 1]),
            p(&[-2, 0, 0, 1]),
            p(&[1, -3, 0, 1]),
        ];
        for g in &fields {
            for t in [-13i64, -7, -5, -3, 2, 3, 5, 7, 11, 13, 17, 29] {
                let prob = NormProblem::new(g.clone(), t);
                let ours = certificate_search(&prob, 2);
                if let Some(a) = &ours {
                    assert_eq!(norm_of(g, &Poly::new(a.clone())), BigInt::from(t));
                }
                assert_eq!(ours.is_some(), brute_box(g, t, 2), "g = {g}, t = {t}");
            }
        }
    }

    #[test]
    fn cyclotomic_certificates_for_small_primes() {
        for (n, t) in [(4u64, 5i64), (6, 7), (10, 11), (12, 13)] {
            let prob = NormProblem::new(cyclotomic_poly(n), t);
            let a = certificate_search(&prob, 3).expect("witness in the box");
            assert_eq!(norm_of(&prob.minpoly, &Poly::new(a)), BigInt::from(t));
        }
    }

    #[test]
    fn budget_is_reported() {
        let prob = NormProblem::new(cyclotomic_poly(16), 17);
        assert_eq!(
            certificate_search_budgeted(&prob, 3, 10),
            SearchOutcome::BudgetExceeded
        );
    }

    #[test]
    fn roots_are_accurate() {
        for n in [5u64, 7, 12, 15, 16, 21, 24] {
            let g = cyclotomic_poly(n);
            let mut roots = complex_roots(&g);
            roots.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
            let mut expected: Vec<Complex64> = (1..n)
                .filter(|&k| arith::gcd(k, n) == 1)
                .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
                .collect();
            expected.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
            for (r, e) in roots.iter().zip(&expected) {
                assert!((r - e).norm() < 1e-10, "n = {n}");
            }
        }
    }

    #[test]
    fn request_encoding() {
        let prob = NormProblem::new(p(&[1, 0, 1]), -5);
        assert_eq!(
            encode_request(3, &prob),
            r#"{"id":3,"minpoly":[1,0,1],"target":-5}"#
        );
    }

    #[test]
    fn response_parsing() {
        let d = parse_response(
            r#"{"id":4,"outcome":"unsolvable","certified":true,"grh":false}"#,
            4,
            2,
        )
        .unwrap();
        assert!(d.is_accepted_obstruction());
        let d = parse_response(r#"{"id":1,"outcome":"solvable","witness":[2,1]}"#, 1, 2).unwrap();
        assert_eq!(d.outcome, BackendOutcome::Solvable(vec![2.into(), 1.into()]));
        let big = parse_response(
            r#"{"id":1,"outcome":"solvable","witness":[123456789012345678901234567890,1]}"#,
            1,
            2,
        )
        .unwrap();
        assert!(matches!(big.outcome, BackendOutcome::Solvable(_)));
        for bad in [
            "nonsense",
            r#"{"id":2,"outcome":"unknown"}"#,
            r#"{"id":1,"outcome":"maybe"}"#,
            r#"{"id":1,"outcome":"solvable"}"#,
            r#"{"id":1,"outcome":"solvable","witness":[1,2,3]}"#,
            r#"{"id":1,"outcome":"unknown","grh":"yes"}"#,
        ] {
            assert!(
                matches!(parse_response(bad, 1, 2), Err(BackendError::Malformed(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn decisions_are_reverified_and_downgraded() {
        let prob = NormProblem::new(p(&[1, 0, 1]), 5);
        let wrong = BackendDecision {
            outcome: BackendOutcome::Solvable(vec![1.into(), 1.into()]),
            certified: true,
            grh: false,
        };
        assert!(matches!(
            finish_decision(wrong, &prob, false),
            Err(BackendError::BadWitness { .. })
        ));
        let grh_only = BackendDecision {
            outcome: BackendOutcome::ProvablyUnsolvable,
            certified: true,
            grh: true,
        };
        assert_eq!(
            finish_decision(grh_only.clone(), &prob, false).unwrap().outcome,
            BackendOutcome::Unknown
        );
        assert_eq!(
            finish_decision(grh_only, &prob, true).unwrap().outcome,
            BackendOutcome::ProvablyUnsolvable
        );
    }

    #[test]
    fn missing_backend_is_an_error() {
        let prob = NormProblem::new(p(&[1, 0, 1]), 5);
        let err = backend_decide(None, &prob, false).unwrap_err();
        assert_eq!(err.to_string(), "backend unavailable");
        let pool = BackendPool::new(BackendCommand::parse("/nonexistent/backend --flag").unwrap());
        assert!(matches!(
            backend_decide(Some(&pool), &prob, false),
            Err(BackendError::Spawn { .. })
        ));
        assert_eq!(BackendCommand::parse("   "), None);
    }

    fn monic_squarefree() -> impl Strategy<Value = Poly> {
        (1usize..=6)
            .prop_flat_map(|d| prop::collection::vec(-9i64..=9, d))
            .prop_map(|mut c| {
                c.push(1);
                Poly::from_i64(&c)
            })
            .prop_filter("squarefree", |g| g.is_squarefree())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn norm_matches_companion_determinant(
            g in monic_squarefree(),
            a in prop::collection::vec(-9i64..=9, 1..=6),
        ) {
            let d = g.degree().unwrap();
            let a = Poly::from_i64(&a[..a.len().min(d)]);
            prop_assert_eq!(norm_of(&g, &a), companion_norm(&g, &a));
            prop_assert_eq!(norm_of(&g, &Poly::one()), BigInt::from(1));
        }

        #[test]
        fn norm_is_multiplicative(
            g in monic_squarefree(),
            a in prop::collection::vec(-9i64..=9, 1..=6),
            b in prop::collection::vec(-9i64..=9, 1..=6),
        ) {
            let a = Poly::from_i64(&a);
            let b = Poly::from_i64(&b);
            let ab = a.mul(&b).rem_monic(&g);
            prop_assert_eq!(norm_of(&g, &ab), norm_of(&g, &a) * norm_of(&g, &b));
        }
    }
}
