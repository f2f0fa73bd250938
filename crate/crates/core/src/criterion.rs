//! The Möbius-weighted factorization criterion, evaluated over every object
//! and every ordered pair `(b, c)` of flag elements.
//!
//! For a pair the value is `Σ_{a ≤ b} μ(a) · (dim a − dim(a ∩ c))`, where
//! `μ(a)` is the two-variable `μ(a, b)` in [`MuMode::Standard`] and the
//! one-variable recursion from the minimum in [`MuMode::Literal`]. A
//! representation passes when no value is negative.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::flag::FlagAssignment;
use crate::linalg::Subspace;
use crate::poset::{MobiusTable, SubspacePoset};
use crate::rep::Representation;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MuMode {
    #[default]
    Standard,
    Literal,
}

impl MuMode {
    pub fn other(self) -> MuMode {
        match self {
            MuMode::Standard => MuMode::Literal,
            MuMode::Literal => MuMode::Standard,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MuMode::Standard => "standard",
            MuMode::Literal => "literal",
        }
    }
}

impl fmt::Display for MuMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MuMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" => Ok(MuMode::Standard),
            "literal" => Ok(MuMode::Literal),
            other => Err(format!("unknown mu mode `{other}` (expected standard or literal)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionValue {
    pub object: String,
    pub b: Subspace,
    pub c: Subspace,
    pub value: i64,
    pub mu_mode: MuMode,
}

impl CriterionValue {
    fn to_json(&self) -> Value {
        json!({
            "object": self.object,
            "b_dim": self.b.dim(),
            "b_basis": self.b.basis().to_json(),
            "c_dim": self.c.dim(),
            "c_basis": self.c.basis().to_json(),
            "value": self.value,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeSummary {
    pub mu_mode: MuMode,
    pub verdict: Verdict,
    pub witness_count: usize,
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub verdict: Verdict,
    pub mu_mode: MuMode,
    /// Every negative pair, sorted by object id, then `b`, then `c`.
    pub witnesses: Vec<CriterionValue>,
    pub poset_sizes: Vec<(String, usize)>,
    pub pairs_evaluated: usize,
    /// The same check under the other μ mode.
    pub other_mode: ModeSummary,
    pub elapsed: Duration,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Deterministic JSON; timing is only included on request.
    pub fn to_json(&self, include_timing: bool) -> Value {
        let mut v = json!({
            "verdict": self.verdict,
            "mu_mode": self.mu_mode,
            "witnesses": self.witnesses.iter().map(CriterionValue::to_json).collect::<Vec<_>>(),
            "poset_sizes": self.poset_sizes.iter().map(|(o, n)| json!({"object": o, "size": n})).collect::<Vec<_>>(),
            "pairs_evaluated": self.pairs_evaluated,
            "other_mode": {
                "mu_mode": self.other_mode.mu_mode,
                "verdict": self.other_mode.verdict,
                "witness_count": self.other_mode.witness_count,
            },
            "modes_diverge": self.verdict != self.other_mode.verdict,
        });
        if include_timing {
            v["elapsed_ms"] = json!(self.elapsed.as_secs_f64() * 1e3);
        }
        v
    }
}

/// Precomputed data for evaluating many pairs on one poset.
pub struct PairEvaluator<'a> {
    poset: &'a SubspacePoset,
    mobius: &'a MobiusTable,
    dims: Vec<i64>,
    /// `meet_dims[a][c] = dim(a ∩ c)`
    meet_dims: Vec<Vec<i64>>,
}

impl<'a> PairEvaluator<'a> {
    pub fn new(poset: &'a SubspacePoset, mobius: &'a MobiusTable) -> Self {
        let n = poset.len();
        let dims: Vec<i64> = poset.elements().iter().map(|s| s.dim() as i64).collect();
        let mut meet_dims = vec![vec![0i64; n]; n];
        for a in 0..n {
            for c in a..n {
                let d = dims[poset.meet(a, c)];
                meet_dims[a][c] = d;
                meet_dims[c][a] = d;
            }
        }
        PairEvaluator { poset, mobius, dims, meet_dims }
    }

    pub fn value(&self, b: usize, c: usize, mode: MuMode) -> i64 {
        (0..=b)
            .filter(|&a| self.poset.leq(a, b))
            .map(|a| {
                let mu = match mode {
                    MuMode::Standard => self.mobius.two(a, b),
                    MuMode::Literal => self.mobius.one_var[a],
                };
                mu * (self.dims[a] - self.meet_dims[a][c])
            })
            .sum()
    }

    /// All negative pairs as `(b, c, value)` index triples, in index order.
    pub fn negative_pairs(&self, mode: MuMode) -> Vec<(usize, usize, i64)> {
        let n = self.poset.len();
        let mut out = Vec::new();
        for b in 0..n {
            for c in 0..n {
                let v = self.value(b, c, mode);
                if v < 0 {
                    out.push((b, c, v));
                }
            }
        }
        out
    }
}

/// The exact criterion sum for one pair of poset elements.
pub fn evaluate_pair(p: &SubspacePoset, mu: &MobiusTable, b: &Subspace, c: &Subspace, mode: MuMode) -> Result<i64> {
    let bi = p.index_of(b).ok_or(Error::ElementNotInPoset)?;
    let ci = p.index_of(c).ok_or(Error::ElementNotInPoset)?;
    Ok(PairEvaluator::new(p, mu).value(bi, ci, mode))
}

/// Whether every pair on a single poset is nonnegative.
pub fn poset_passes(p: &SubspacePoset, mode: MuMode) -> bool {
    let mu = p.mobius();
    PairEvaluator::new(p, &mu).negative_pairs(mode).is_empty()
}

pub fn check_representation(r: &Representation, flag: &FlagAssignment, mode: MuMode) -> CriterionReport {
    let start = Instant::now();
    let mut witnesses = Vec::new();
    let mut other_count = 0;
    let mut pairs = 0;
    for (o, p) in flag.posets().iter().enumerate() {
        let mu = p.mobius();
        let eval = PairEvaluator::new(p, &mu);
        pairs += p.len() * p.len();
        for (b, c, value) in eval.negative_pairs(mode) {
            witnesses.push(CriterionValue {
                object: r.objects()[o].id.clone(),
                b: p.element(b).clone(),
                c: p.element(c).clone(),
                value,
                mu_mode: mode,
            });
        }
        other_count += eval.negative_pairs(mode.other()).len();
    }
    witnesses.sort_by(|x, y| (&x.object, &x.b, &x.c).cmp(&(&y.object, &y.b, &y.c)));
    let verdict = if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail };
    CriterionReport {
        verdict,
        mu_mode: mode,
        witnesses,
        poset_sizes: flag.posets().iter().enumerate().map(|(o, p)| (r.objects()[o].id.clone(), p.len())).collect(),
        pairs_evaluated: pairs,
        other_mode: ModeSummary {
            mu_mode: mode.other(),
            verdict: if other_count == 0 { Verdict::Pass } else { Verdict::Fail },
            witness_count: other_count,
        },
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::{compute_flag, FlagLimits};
    use crate::linalg::Field;
    use crate::poset::build_poset;
    use crate::rep::fixtures::{BISECTION, TRISECTION};
    use crate::rep::parse_representation;

    const Q: Field = Field::Rational;

    fn line(v: &[i64]) -> Subspace {
        Subspace::span_ints(Q, 2, &[v])
    }

    fn diamond() -> SubspacePoset {
        build_poset([Subspace::zero(Q, 2), line(&[1, 0]), line(&[0, 1]), Subspace::full(Q, 2)]).unwrap()
    }

    fn three_lines() -> SubspacePoset {
        build_poset([Subspace::zero(Q, 2), line(&[1, 0]), line(&[0, 1]), line(&[1, 1]), Subspace::full(Q, 2)]).unwrap()
    }

    #[test]
    fn three_lines_full_against_zero_is_minus_one() {
        let p = three_lines();
        let mu = p.mobius();
        let v = evaluate_pair(&p, &mu, &Subspace::full(Q, 2), &Subspace::zero(Q, 2), MuMode::Standard).unwrap();
        assert_eq!(v, -1);
    }

    #[test]
    fn diamond_full_against_zero_is_zero() {
        let p = diamond();
        let mu = p.mobius();
        let v = evaluate_pair(&p, &mu, &Subspace::full(Q, 2), &Subspace::zero(Q, 2), MuMode::Standard).unwrap();
        assert_eq!(v, 0);
    }

    #[test]
    fn contained_pairs_vanish() {
        for p in [diamond(), three_lines()] {
            let mu = p.mobius();
            for b in p.elements() {
                for c in p.elements() {
                    if c.contains(b).unwrap() {
                        for mode in [MuMode::Standard, MuMode::Literal] {
                            assert_eq!(evaluate_pair(&p, &mu, b, c, mode).unwrap(), 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mu_modes_diverge_on_diamond() {
        let p = diamond();
        let mu = p.mobius();
        let (b, c) = (line(&[1, 0]), line(&[0, 1]));
        assert_eq!(evaluate_pair(&p, &mu, &b, &c, MuMode::Literal).unwrap(), -1);
        assert_eq!(evaluate_pair(&p, &mu, &b, &c, MuMode::Standard).unwrap(), 1);
    }

    #[test]
    fn element_not_in_poset() {
        let p = diamond();
        let mu = p.mobius();
        let r = evaluate_pair(&p, &mu, &line(&[1, 1]), &Subspace::zero(Q, 2), MuMode::Standard);
        assert_eq!(r, Err(Error::ElementNotInPoset));
    }

    #[test]
    fn chains_always_pass() {
        let p = build_poset([Subspace::zero(Q, 3), Subspace::span_ints(Q, 3, &[&[1, 2, 3]]), Subspace::full(Q, 3)])
            .unwrap();
        assert!(poset_passes(&p, MuMode::Standard));
    }

    #[test]
    fn trisection_fails_with_witness() {
        let r = parse_representation(TRISECTION.as_bytes()).unwrap();
        let flag = compute_flag(&r, FlagLimits::default()).unwrap();
        let rep = check_representation(&r, &flag, MuMode::Standard);
        assert_eq!(rep.verdict, Verdict::Fail);
        assert!(rep.witnesses.iter().any(|w| w.object == "plane" && w.b.is_full() && w.c.is_zero() && w.value == -1));
    }

    #[test]
    fn bisection_passes() {
        let r = parse_representation(BISECTION.as_bytes()).unwrap();
        let flag = compute_flag(&r, FlagLimits::default()).unwrap();
        let rep = check_representation(&r, &flag, MuMode::Standard);
        assert_eq!(rep.verdict, Verdict::Pass);
        assert!(rep.witnesses.is_empty());
        let j = rep.to_json(false);
        assert_eq!(j["verdict"], "pass");
        assert!(j.get("elapsed_ms").is_none());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("literal".parse::<MuMode>(), Ok(MuMode::Literal));
        assert!("other".parse::<MuMode>().is_err());
    }
}
