//! A scripted norm-equation backend.
//!
//! Usage: `noether-replay RULES.jsonl`
//!
//! Each rule is a JSON object with a `target` and optional `degree` or
//! `minpoly` to narrow the match, plus the response fields (`outcome`,
//! `witness`, `certified`, `grh`). Requests are answered by the first
//! matching rule, or `unknown` when nothing matches.

use std::fs;
use std::io::{self, BufRead, Write};

use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value};

struct Rule {
    target: Value,
    degree: Option<u64>,
    minpoly: Option<Value>,
    response: Map<String, Value>,
}

impl Rule {
    fn parse(line: &str) -> Result<Self> {
        let mut obj = match serde_json::from_str(line)? {
            Value::Object(o) => o,
            _ => bail!("rule is not an object: {line}"),
        };
        let target = obj.remove("target").context("rule without target")?;
        let degree = match obj.remove("degree") {
            None => None,
            Some(d) => Some(d.as_u64().context("degree must be an integer")?),
        };
        let minpoly = obj.remove("minpoly");
        Ok(Self {
            target,
            degree,
            minpoly,
            response: obj,
        })
    }

    fn matches(&self, minpoly: &[Value], target: &Value) -> bool {
        same_int(&self.target, target)
            && self.degree.map_or(true, |d| minpoly.len() as u64 == d + 1)
            && self.minpoly.as_ref().map_or(true, |m| {
                m.as_array().is_some_and(|m| {
                    m.len() == minpoly.len() && m.iter().zip(minpoly).all(|(a, b)| same_int(a, b))
                })
            })
    }
}

fn same_int(a: &Value, b: &Value) -> bool {
    a.to_string() == b.to_string()
}

fn main() -> Result<()> {
    let path = std::env::args().nth(1).context("usage: noether-replay RULES.jsonl")?;
    let text = fs::read_to_string(&path).with_context(|| format!("reading {path}"))?;
    let rules: Vec<Rule> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(Rule::parse)
        .collect::<Result<_>>()?;

    let stdin = io::stdin();
    let mut stdout = io::stdout().lock();
    for line in stdin.lock().lines() {
        let request: Value = serde_json::from_str(&line?)?;
        let id = request.get("id").cloned().context("request without id")?;
        let minpoly = request
            .get("minpoly")
            .and_then(Value::as_array)
            .context("request without minpoly")?;
        let target = request.get("target").context("request without target")?;
        let mut reply = match rules.iter().find(|r| r.matches(minpoly, target)) {
            Some(r) => r.response.clone(),
            None => json!({"outcome": "unknown", "certified": false, "grh": false})
                .as_object()
                .unwrap()
                .clone(),
        };
        reply.insert("id".into(), id);
        writeln!(stdout, "{}", Value::Object(reply))?;
        stdout.flush()?;
    }
    Ok(())
}
