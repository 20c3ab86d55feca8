//! Seeded property suites and the JSON report they produce.
//!
//! Every suite walks a grid of `(d, r, k)` configurations and a number of
//! sample indices. Each sample draws from its own RNG stream, derived from
//! the suite, the configuration and the index, so samples can be evaluated
//! in parallel and the report is still assembled in index order.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::blowup::{
    attach_aux, aux_count_identity, corner_identity_check, enumerate_minor_indices, f_map_level1,
    monomial_span_check, phi1_values, product_minor_expansion, relation_six_term, segre,
    skew_coords, MinorIndex, ProjectivePoint,
};
use crate::document::TupleDocument;
use crate::error::{Error, Result};
use crate::exactla::{projectively_equal, Rational};
use crate::forms::{BinaryForm, FormTuple};
use crate::sample::{Sampler, DEFAULT_BOUND};
use crate::strata::{
    classify_point, minor_jacobian, phi_k, stratum_codimension, verify_dimension, PointKind,
    StratumParam,
};
use crate::sylvester::{b_criterion, build_matrix, in_stratum, rank_increment, RankIncrement};

/// Witnesses kept per check.
pub const MAX_WITNESSES: usize = 5;

/// The property suites. Each has a descriptive name and a short alias.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    StratumRank,
    BSubmatrix,
    RankIncrement,
    Dimension,
    Jacobian,
    CornerExpansion,
    MonomialSpan,
    SixTerm,
    FMap,
    ProductExpansion,
    AuxCount,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::StratumRank,
        Suite::BSubmatrix,
        Suite::RankIncrement,
        Suite::Dimension,
        Suite::Jacobian,
        Suite::CornerExpansion,
        Suite::MonomialSpan,
        Suite::SixTerm,
        Suite::FMap,
        Suite::ProductExpansion,
        Suite::AuxCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::StratumRank => "stratum-rank",
            Suite::BSubmatrix => "b-submatrix",
            Suite::RankIncrement => "rank-increment",
            Suite::Dimension => "dimension",
            Suite::Jacobian => "jacobian",
            Suite::CornerExpansion => "corner-expansion",
            Suite::MonomialSpan => "monomial-span",
            Suite::SixTerm => "six-term",
            Suite::FMap => "fmap",
            Suite::ProductExpansion => "product-expansion",
            Suite::AuxCount => "auxcount",
        }
    }

    pub fn alias(self) -> &'static str {
        match self {
            Suite::StratumRank => "lemma21",
            Suite::BSubmatrix => "lemma24",
            Suite::RankIncrement => "kakie",
            Suite::Dimension => "dimension",
            Suite::Jacobian => "jacobian",
            Suite::CornerExpansion => "eq31",
            Suite::MonomialSpan => "monomials",
            Suite::SixTerm => "relations",
            Suite::FMap => "fmap",
            Suite::ProductExpansion => "expansion",
            Suite::AuxCount => "auxcount",
        }
    }

    fn tag(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") as u64 + 1
    }

    /// Default grid: `d`, `r`, `k` ranges and sample count. A `k` range of
    /// `None` means every `k` in `1..=d`.
    fn defaults(self) -> Defaults {
        let d14 = (1, 4);
        let r02 = (0, 2);
        match self {
            Suite::StratumRank | Suite::RankIncrement => Defaults::new(d14, r02, None, 500),
            Suite::BSubmatrix => Defaults::new(d14, r02, None, 200),
            Suite::Dimension => Defaults::new(d14, r02, None, 1),
            Suite::Jacobian => Defaults::new((1, 3), (1, 2), None, 100),
            Suite::CornerExpansion => Defaults::new((4, 4), (2, 2), None, 50),
            Suite::MonomialSpan => Defaults::new((2, 4), (0, 0), Some((1, 2)), 1),
            Suite::SixTerm => Defaults::new((2, 4), (1, 2), None, 100),
            Suite::FMap => Defaults::new((3, 3), (1, 2), None, 100),
            Suite::ProductExpansion => Defaults::new((1, 4), (1, 2), None, 100),
            Suite::AuxCount => Defaults::new((0, 0), (0, 0), Some((1, 8)), 1),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == key || suite.alias() == key)
            .ok_or_else(|| {
                let known = Suite::ALL.iter().map(|s| s.alias()).join(", ");
                Error::Parse(format!("unknown suite {s:?} (known: {known})"))
            })
    }
}

struct Defaults {
    d: (usize, usize),
    r: (usize, usize),
    k: Option<(usize, usize)>,
    n: usize,
}

impl Defaults {
    fn new(d: (usize, usize), r: (usize, usize), k: Option<(usize, usize)>, n: usize) -> Self {
        Self { d, r, k, n }
    }
}

/// A parameter range from the command line: `"4"` (up to 4, starting at the
/// suite's minimum), `"2..4"` or `"2..=4"` (both inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: Option<usize>,
    pub hi: usize,
}

impl Span {
    pub fn upto(hi: usize) -> Self {
        Self { lo: None, hi }
    }

    pub fn between(lo: usize, hi: usize) -> Self {
        Self { lo: Some(lo), hi }
    }

    fn resolve(self, default_lo: usize) -> (usize, usize) {
        (self.lo.unwrap_or(default_lo), self.hi)
    }
}

impl FromStr for Span {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad range {s:?}")))
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let (lo, hi) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
                if lo > hi {
                    return Err(Error::Parse(format!("empty range {s:?}")));
                }
                Ok(Span::between(lo, hi))
            }
            None => Ok(Span::upto(num(s)?)),
        }
    }
}

/// Flags accepted by every suite. Unset ranges take the suite's defaults.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyParams {
    pub d: Option<Span>,
    pub r: Option<Span>,
    pub k: Option<Span>,
    pub n: Option<usize>,
    pub seed: u64,
    pub bound: i64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            d: None,
            r: None,
            k: None,
            n: None,
            seed: 0,
            bound: DEFAULT_BOUND,
        }
    }
}

impl VerifyParams {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// Parameters after defaults are applied; echoed in the report.
#[derive(Debug, Clone, Serialize)]
struct Grid {
    d: (usize, usize),
    r: (usize, usize),
    k: Option<(usize, usize)>,
    n: usize,
    bound: i64,
}

impl Grid {
    fn resolve(suite: Suite, p: &VerifyParams) -> Self {
        let def = suite.defaults();
        let span = |given: Option<Span>, fallback: (usize, usize)| {
            given.map_or(fallback, |s| s.resolve(fallback.0))
        };
        Grid {
            d: span(p.d, def.d),
            r: span(p.r, def.r),
            k: match (p.k, def.k) {
                (Some(s), Some(f)) => Some(s.resolve(f.0)),
                (Some(s), None) => Some(s.resolve(1)),
                (None, f) => f,
            },
            n: p.n.unwrap_or(def.n),
            bound: p.bound,
        }
    }

    fn ds(&self) -> RangeInclusive<usize> {
        self.d.0.max(1)..=self.d.1
    }

    fn rs(&self) -> RangeInclusive<usize> {
        self.r.0..=self.r.1
    }

    /// `k` values valid for degree `d`, restricted to the requested range.
    fn ks(&self, d: usize) -> RangeInclusive<usize> {
        let (lo, hi) = self.k.unwrap_or((1, d));
        lo.max(1)..=hi.min(d)
    }

    /// All `(d, r)` pairs, or `(d, r, k)` triples when `with_k`.
    fn configs(&self, with_k: bool) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for d in self.ds() {
            for r in self.rs() {
                if with_k {
                    out.extend(self.ks(d).map(|k| (d, r, k)));
                } else {
                    out.push((d, r, 0));
                }
            }
        }
        out
    }
}

/// Outcome of one named check inside a suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Diagnostic checks are reported but do not decide the suite.
    pub diagnostic: bool,
    pub cases: usize,
    pub failures: usize,
    pub details: Value,
    /// Up to [`MAX_WITNESSES`] failing inputs.
    pub witnesses: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    /// SHA-256 of the canonical JSON of the command and its parameters.
    pub inputs_digest: String,
    pub seed: u64,
    pub params: Value,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
    pub runtime_ms: u64,
}

impl Report {
    pub fn new(
        command: &str,
        seed: u64,
        params: Value,
        checks: Vec<CheckOutcome>,
        runtime_ms: u64,
    ) -> Self {
        let canonical = json!({ "command": command, "params": params, "seed": seed });
        let inputs_digest = hex::encode(Sha256::digest(canonical.to_string().as_bytes()));
        let passed = checks.iter().all(|c| c.passed || c.diagnostic);
        Self {
            command: command.to_string(),
            inputs_digest,
            seed,
            params,
            checks,
            passed,
            runtime_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with `runtime_ms` zeroed, for comparing runs.
    pub fn canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.runtime_ms = 0;
        serde_json::to_string(&copy).expect("report serializes")
    }

    pub fn human(&self) -> String {
        let mut out = format!(
            "{}: {} (seed {}, {} ms)\n",
            self.command,
            if self.passed { "PASS" } else { "FAIL" },
            self.seed,
            self.runtime_ms
        );
        for c in &self.checks {
            let status = match (c.passed, c.diagnostic) {
                (true, _) => "pass",
                (false, true) => "note",
                (false, false) => "FAIL",
            };
            out.push_str(&format!(
                "  {status:4} {:<40} {} cases, {} failures\n",
                c.name, c.cases, c.failures
            ));
            if c.cases == 1 && !c.details.is_null() {
                out.push_str(&format!("       {}\n", c.details));
            }
            for w in &c.witnesses {
                out.push_str(&format!("       witness: {w}\n"));
            }
        }
        out
    }
}

/// One observation: which check, whether it held, and a witness if not.
struct Obs {
    check: usize,
    ok: bool,
    witness: Option<Value>,
}

fn obs(check: usize, ok: bool, witness: impl FnOnce() -> Value) -> Obs {
    Obs {
        check,
        ok,
        witness: (!ok).then(witness),
    }
}

/// Folds observations into outcomes, in order.
struct Tally {
    outcomes: Vec<CheckOutcome>,
}

impl Tally {
    fn new(names: &[&str]) -> Self {
        Self {
            outcomes: names
                .iter()
                .map(|n| CheckOutcome {
                    name: n.to_string(),
                    passed: true,
                    diagnostic: false,
                    cases: 0,
                    failures: 0,
                    details: Value::Null,
                    witnesses: Vec::new(),
                })
                .collect(),
        }
    }

    fn diagnostic(mut self, check: usize) -> Self {
        self.outcomes[check].diagnostic = true;
        self
    }

    fn add(&mut self, o: Obs) {
        let c = &mut self.outcomes[o.check];
        c.cases += 1;
        if !o.ok {
            c.failures += 1;
            c.passed = false;
            if c.witnesses.len() < MAX_WITNESSES {
                c.witnesses.extend(o.witness);
            }
        }
    }

    fn extend(&mut self, all: impl IntoIterator<Item = Vec<Obs>>) {
        for batch in all {
            for o in batch {
                self.add(o);
            }
        }
    }

    fn detail(&mut self, check: usize, details: Value) {
        self.outcomes[check].details = details;
    }

    fn finish(self) -> Vec<CheckOutcome> {
        self.outcomes
    }
}

fn doc(t: &FormTuple) -> Value {
    serde_json::to_value(TupleDocument::from_tuple(t)).expect("document serializes")
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Runs every `(config, index)` job in parallel and returns the results in
/// job order.
fn fan_out<C, T, F>(configs: &[C], n: usize, f: F) -> Vec<T>
where
    C: Sync,
    T: Send,
    F: Fn(&C, usize) -> T + Sync,
{
    let jobs: Vec<(usize, usize)> = (0..configs.len()).cartesian_product(0..n).collect();
    jobs.par_iter().map(|&(c, i)| f(&configs[c], i)).collect()
}

/// Runs one suite.
pub fn run_suite(suite: Suite, params: &VerifyParams) -> Result<Report> {
    let start = Instant::now();
    let grid = Grid::resolve(suite, params);
    let seed = params.seed;
    let checks = match suite {
        Suite::StratumRank => stratum_rank(&grid, seed, true),
        Suite::RankIncrement => stratum_rank(&grid, seed, false),
        Suite::BSubmatrix => b_submatrix(&grid, seed),
        Suite::Dimension => dimension(&grid, seed),
        Suite::Jacobian => jacobian(&grid, seed),
        Suite::CornerExpansion => corner(&grid, seed),
        Suite::MonomialSpan => monomials(&grid),
        Suite::SixTerm => six_term(&grid, seed),
        Suite::FMap => fmap(&grid, seed),
        Suite::ProductExpansion => product_expansion(&grid, seed),
        Suite::AuxCount => auxcount(&grid),
    }?;
    let runtime_ms = start.elapsed().as_millis() as u64;
    let params = serde_json::to_value(&grid).expect("grid serializes");
    Ok(Report::new(
        &format!("verify {}", suite.name()),
        seed,
        params,
        checks,
        runtime_ms,
    ))
}

fn sampler(grid: &Grid, seed: u64, suite: Suite, tags: &[usize]) -> Sampler {
    let mut all = vec![suite.tag()];
    all.extend(tags.iter().map(|&t| t as u64));
    Sampler::derived(seed, &all, grid.bound)
}

/// A tuple drawn generically, in `R_k`, or in `R_{k-1}`, by `i mod 3`, with a
/// random target `k`.
fn mixed_tuple(
    s: &mut Sampler,
    d: usize,
    r: usize,
    i: usize,
) -> Result<(FormTuple, &'static str, usize)> {
    let k = 1 + s.below(d);
    Ok(match i % 3 {
        0 => (s.generic(d, r), "generic", k),
        1 => (s.in_stratum(d, r, k)?, "in_stratum", k),
        _ if k >= 2 => (s.in_stratum(d, r, k - 1)?, "in_lower_stratum", k),
        _ => (s.in_stratum(d, r, 1)?, "in_stratum", 1),
    })
}

/// `in_stratum(t, k) <=> mult >= d - k + 1` for every `k`, monotonicity in
/// `k`, and the rank increment. With `full = false` only the increment.
fn stratum_rank(grid: &Grid, seed: u64, full: bool) -> Result<Vec<CheckOutcome>> {
    let suite = if full {
        Suite::StratumRank
    } else {
        Suite::RankIncrement
    };
    let configs = grid.configs(false);
    let results = fan_out(&configs, grid.n, |&(d, r, _), i| -> Result<Vec<Obs>> {
        let mut s = sampler(grid, seed, suite, &[d, r, i]);
        let (t, mode, _) = mixed_tuple(&mut s, d, r, i)?;
        let mult = t.common_root_multiplicity()?;
        let mut out = Vec::new();
        let mut prev_in = false;
        for k in 1..=d {
            let inside = in_stratum(&t, k)?;
            let w = || json!({ "tuple": doc(&t), "mode": mode, "k": k, "multiplicity": mult, "in_stratum": inside });
            if full {
                out.push(obs(0, inside == (mult + k > d), w));
                out.push(obs(1, !prev_in || inside, w));
            }
            prev_in = inside;
            if k >= 2 {
                if let Some(inc) = increment(&t, k)? {
                    out.push(obs(if full { 2 } else { 0 }, inc.holds(), || {
                        json!({ "tuple": doc(&t), "k": k, "rank_prev": inc.rank_prev, "rank": inc.rank })
                    }));
                }
            }
        }
        Ok(out)
    });
    let names: &[&str] = if full {
        &["oracle-equivalence", "monotone-in-k", "rank-increment"]
    } else {
        &["rank-increment"]
    };
    let mut tally = Tally::new(names);
    tally.extend(results.into_iter().collect::<Result<Vec<_>>>()?);
    Ok(tally.finish())
}

/// The rank increment when `A_{k-1}` is rank-deficient, `None` otherwise.
fn increment(t: &FormTuple, k: usize) -> Result<Option<RankIncrement>> {
    match rank_increment(t, k) {
        Ok(inc) => Ok(Some(inc)),
        Err(Error::PreconditionNotMet(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The distinct-pair criterion against `rank A_k < 2k`; the repeated-row
/// reading as a diagnostic.
fn b_submatrix(grid: &Grid, seed: u64) -> Result<Vec<CheckOutcome>> {
    let configs = grid.configs(true);
    let results = fan_out(
        &configs,
        grid.n,
        |&(d, r, k), i| -> Result<(Vec<Obs>, bool)> {
            let mut s = sampler(grid, seed, Suite::BSubmatrix, &[d, r, k, i]);
            let t = match i % 3 {
                0 => s.generic(d, r),
                1 => s.in_stratum(d, r, k)?,
                _ => s.in_stratum(d, r, k.saturating_sub(1).max(1))?,
            };
            let b = b_criterion(&t, k)?;
            let w = || {
                json!({ "tuple": doc(&t), "k": k, "rank_deficient": b.rank_deficient,
                           "all_distinct_b_deficient": b.all_distinct_b_deficient })
            };
            Ok((
                vec![obs(0, b.holds(), w), obs(1, b.holds_with_repeats(), w)],
                b.rank_deficient,
            ))
        },
    );
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let deficient = results.iter().filter(|(_, d)| *d).count();
    let mut tally = Tally::new(&["distinct-pair-criterion", "repeated-row-reading"]).diagnostic(1);
    tally.detail(0, json!({ "rank_deficient_samples": deficient, "full_rank_samples": results.len() - deficient }));
    tally.extend(results.into_iter().map(|(o, _)| o));
    Ok(tally.finish())
}

fn dimension(grid: &Grid, seed: u64) -> Result<Vec<CheckOutcome>> {
    let configs = grid.configs(true);
    let results: Vec<_> = configs
        .par_iter()
        .map(|&(d, r, k)| {
            let s = crate::sample::derive_seed(
                seed,
                &[Suite::Dimension.tag(), d as u64, r as u64, k as u64],
            );
            verify_dimension(d, r, k, s)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::new(&["cone-jacobian-rank"]);
    let mut attempts = Vec::new();
    for c in results {
        attempts.push(json!([c.d, c.r, c.k, c.attempts]));
        tally.add(obs(0, c.passed(), || {
            serde_json::to_value(&c).expect("serializes")
        }));
    }
    tally.detail(0, json!({ "d_r_k_attempts": attempts }));
    Ok(tally.finish())
}

/// Jacobian of the `2k x 2k` minors: zero on `R_{k-1}`, rank equal to the
/// codimension on `R_k \ R_{k-1}`, and the classification agrees.
fn jacobian(grid: &Grid, seed: u64) -> Result<Vec<CheckOutcome>> {
    let configs = grid.configs(true);
    let results = fan_out(&configs, grid.n, |&(d, r, k), i| -> Result<Vec<Obs>> {
        let mut s = sampler(grid, seed, Suite::Jacobian, &[d, r, k, i]);
        let mut out = Vec::new();
        if k >= 2 {
            let t = s.in_stratum(d, r, k - 1)?;
            let j = minor_jacobian(&t, k)?;
            out.push(obs(0, j.is_zero(), || json!({ "tuple": doc(&t), "k": k })));
            let c = classify_point(&t, k)?;
            out.push(obs(
                2,
                c.kind == PointKind::SingularPoint && c.consistent(),
                || json!({ "tuple": doc(&t), "k": k, "classification": c }),
            ));
        }
        let t = s.in_open_stratum(d, r, k)?;
        let codim = stratum_codimension(d, r, k)?;
        let rank = minor_jacobian(&t, k)?.rank();
        out.push(obs(
            1,
            rank == codim,
            || json!({ "tuple": doc(&t), "k": k, "rank": rank, "codimension": codim }),
        ));
        let c = classify_point(&t, k)?;
        out.push(obs(
            2,
            c.kind == PointKind::SmoothPoint && c.consistent(),
            || json!({ "tuple": doc(&t), "k": k, "classification": c }),
        ));
        if i % 10 == 0 {
            let scaled = t.scale(&Rational::from_integer(s.nonzero_int().into()));
            let c2 = classify_point(&scaled, k)?;
            out.push(obs(
                3,
                c2.kind == c.kind,
                || json!({ "tuple": doc(&scaled), "k": k }),
            ));
        }
        Ok(out)
    });
    let mut tally = Tally::new(&[
        "lower-stratum-jacobian-vanishes",
        "open-stratum-rank-equals-codimension",
        "classification",
        "homothety-invariance",
    ]);
    tally.extend(results.into_iter().collect::<Result<Vec<_>>>()?);
    Ok(tally.finish())
}

fn corner(grid: &Grid, seed: u64) -> Result<Vec<CheckOutcome>> {
    let fills: Vec<_> = (0..grid.n)
        .into_par_iter()
        .map(|i| {
            corner_identity_check(crate::sample::derive_seed(
                seed,
                &[Suite::CornerExpansion.tag(), i as u64],
            ))
        })
        .collect();
    let mut tally = Tally::new(&["sides-agree", "block-diagonal-factors"]);
    let nonzero = fills.iter().filter(|c| !c.lhs.is_zero()).count();
    for c in &fills {
        let w = || serde_json::to_value(c).expect("serializes");
        tally.add(obs(0, c.sides_agree(), w));
        tally.add(obs(1, c.lhs_factors(), w));
    }
    tally.detail(0, json!({ "nonzero_fills": nonzero }));
    Ok(tally.finish())
}

/// The default pairs, or every `(d, k)` of the requested ranges.
fn monomials(grid: &Grid) -> Result<Vec<CheckOutcome>> {
    let pairs: Vec<(usize, usize)> = grid
        .ds()
        .flat_map(|d| grid.ks(d).map(move |k| (d, k)))
        .filter(|&(d, k)| d - k <= 3 && k <= 2)
        .collect();
    let mut tally = Tally::new(&["monomial-span"]);
    let mut ranks = Vec::new();
    for (d, k) in pairs {
        let m = monomial_span_check(d, k)?;
        ranks.push(json!([d, k, m.rank, m.expected]));
        tally.add(obs(0, m.passed(), || {
            serde_json::to_value(&m).expect("serializes")
        }));
    }
    tally.detail(0, json!({ "d_k_rank_expected": ranks }));
    Ok(tally.finish())
}

/// Every six-term relation: zero on `phi_1` of points built in `R_2`; on
/// generic tuples outside `R_2` some relation is nonzero, and each equals
/// the matching `4 x 4` minor of `A_2`.
fn six_term(grid: &Grid, seed: u64) -> Result<Vec<CheckOutcome>> {
    let configs: Vec<_> = grid
        .configs(false)
        .into_iter()
        .filter(|&(d, r, _)| d >= 2 && r >= 1)
        .collect();
    let results = fan_out(&configs, grid.n, |&(d, r, _), i| -> Result<Vec<Obs>> {
        let mut s = sampler(grid, seed, Suite::SixTerm, &[d, r, i]);
        let indices = enumerate_minor_indices(d, r, 2);
        let args = |idx: &MinorIndex| -> ([usize; 4], [usize; 4]) {
            (
                idx.rows.clone().try_into().expect("four rows"),
                idx.cols.clone().try_into().expect("four columns"),
            )
        };
        let mut out = Vec::new();

        let t = s.in_stratum(d, r, 2)?;
        let u = phi1_values(&t);
        let bad: Vec<&MinorIndex> = indices
            .iter()
            .filter(|idx| {
                let (rows, cols) = args(idx);
                !relation_six_term(&u, rows, cols).is_zero()
            })
            .collect();
        out.push(obs(
            0,
            bad.is_empty(),
            || json!({ "tuple": doc(&t), "index": bad[0] }),
        ));

        let mut t = s.generic(d, r);
        while in_stratum(&t, 2)? {
            t = s.tuple(d, r);
        }
        let u = phi1_values(&t);
        let a2 = build_matrix(&t, 2)?;
        let mut any_nonzero = false;
        let mut mismatch = None;
        for idx in &indices {
            let (rows, cols) = args(idx);
            let rel = relation_six_term(&u, rows, cols);
            any_nonzero |= !rel.is_zero();
            if mismatch.is_none() && rel != idx.value_in(a2.matrix(), r) {
                mismatch = Some(idx.clone());
            }
        }
        out.push(obs(1, any_nonzero, || json!({ "tuple": doc(&t) })));
        out.push(obs(
            2,
            mismatch.is_none(),
            || json!({ "tuple": doc(&t), "index": mismatch }),
        ));
        Ok(out)
    });
    let mut tally = Tally::new(&[
        "vanish-on-constructed-r2-points",
        "some-relation-nonzero-off-r2",
        "equals-laplace-minor",
    ]);
    tally.extend(results.into_iter().collect::<Result<Vec<_>>>()?);
    Ok(tally.finish())
}

/// `(mu, tau, nu)` with `tau` a limit of the `2 x 2` minors along `mu`.
struct FPoint {
    mu: FormTuple,
    tau: Vec<Rational>,
    nu: ProjectivePoint,
    exceptional: bool,
}

impl FPoint {
    fn same(&self, other: &FPoint) -> bool {
        projectively_equal(&self.mu.flat_coeffs(), &other.mu.flat_coeffs())
            && projectively_equal(&self.tau, &other.tau)
            && self.nu == other.nu
    }

    fn to_json(&self) -> Value {
        json!({ "mu": doc(&self.mu), "tau": strs(&self.tau), "nu": strs(self.nu.coords()),
                "exceptional": self.exceptional })
    }
}

/// Generic `mu` of degree 1 with `tau` a nonzero multiple of its minors.
fn generic_mu(s: &mut Sampler, r: usize) -> (FormTuple, Vec<Rational>) {
    loop {
        let mu = s.tuple(1, r);
        let minors = phi1_values(&mu).values;
        if minors.iter().any(|x| !x.is_zero()) {
            let c = Rational::from_integer(s.nonzero_int().into());
            return (mu, minors.iter().map(|x| x * &c).collect());
        }
    }
}

/// `c ∧ a` for a random `a` not parallel to `c`.
fn wedge_direction(s: &mut Sampler, c: &[Rational]) -> Vec<Rational> {
    loop {
        let a = s.vector(c.len());
        let tau: Vec<Rational> = (0..c.len())
            .tuple_combinations()
            .map(|(i, j)| &c[i] * &a[j] - &c[j] * &a[i])
            .collect();
        if tau.iter().any(|x| !x.is_zero()) {
            return tau;
        }
    }
}

/// `mu = c w^T` of rank one, with an exceptional direction.
fn exceptional_mu(s: &mut Sampler, r: usize) -> (FormTuple, Vec<Rational>) {
    let c = s.nonzero_vector(r + 1);
    let w = s.nonzero_vector(2);
    let forms = c
        .iter()
        .map(|ci| BinaryForm::new(w.iter().map(|wj| ci * wj).collect()))
        .collect();
    let mu = FormTuple::new(forms).expect("c and w nonzero");
    let tau = wedge_direction(s, &c);
    (mu, tau)
}

fn random_fpoint(s: &mut Sampler, d: usize, r: usize, exceptional: bool) -> FPoint {
    let (mu, tau) = if exceptional {
        exceptional_mu(s, r)
    } else {
        generic_mu(s, r)
    };
    let nu = ProjectivePoint::new(s.nonzero_vector(d)).expect("nonzero");
    FPoint {
        mu,
        tau,
        nu,
        exceptional,
    }
}

/// A second point differing from `p` in a way chosen by `variant`.
fn partner(s: &mut Sampler, p: &FPoint, d: usize, r: usize, variant: usize) -> FPoint {
    match variant {
        0 => {
            let exceptional = s.coin();
            random_fpoint(s, d, r, exceptional)
        }
        1 => FPoint {
            nu: ProjectivePoint::new(s.nonzero_vector(d)).expect("nonzero"),
            mu: p.mu.clone(),
            tau: p.tau.clone(),
            exceptional: p.exceptional,
        },
        2 => {
            let exceptional = s.coin();
            let (mu, tau) = if exceptional {
                exceptional_mu(s, r)
            } else {
                generic_mu(s, r)
            };
            FPoint {
                mu,
                tau,
                nu: p.nu.clone(),
                exceptional,
            }
        }
        _ => {
            // Same mu and nu, another limit direction: needs a rank-one mu.
            let c: Vec<Rational> = {
                let w =
                    p.mu.forms()
                        .iter()
                        .find(|f| !f.is_zero())
                        .expect("nonzero")
                        .coeffs()
                        .to_vec();
                let pivot = w.iter().position(|x| !x.is_zero()).expect("nonzero");
                p.mu.forms()
                    .iter()
                    .map(|f| &f.coeffs()[pivot] / &w[pivot])
                    .collect()
            };
            FPoint {
                mu: p.mu.clone(),
                tau: wedge_direction(s, &c),
                nu: p.nu.clone(),
                exceptional: true,
            }
        }
    }
}

/// Commutativity of `F` with the projections, the Segre form of level one,
/// agreement with `phi_1` off the exceptional divisor, and injectivity.
fn fmap(grid: &Grid, seed: u64) -> Result<Vec<CheckOutcome>> {
    let configs: Vec<_> = grid
        .configs(false)
        .into_iter()
        .filter(|&(_, r, _)| r >= 1)
        .collect();
    let results =
        fan_out(
            &configs,
            grid.n,
            |&(d, r, _), i| -> Result<(Vec<Obs>, bool)> {
                let mut s = sampler(grid, seed, Suite::FMap, &[d, r, i]);
                let variant = i % 4;
                // The last variant moves tau at fixed mu, which needs a rank-one mu.
                let p = random_fpoint(&mut s, d, r, variant == 3 || i % 5 == 1);
                let fp = f_map_level1(&p.mu, &p.tau, &p.nu)?;
                let mut out = Vec::new();

                let param =
                    StratumParam::new(2, p.mu.clone(), BinaryForm::new(p.nu.coords().to_vec()))?;
                let product = phi_k(&param);
                out.push(obs(
                    0,
                    projectively_equal(&fp.levels[0], &product.flat_coeffs()),
                    || p.to_json(),
                ));

                let tau_pt = ProjectivePoint::new(p.tau.clone())?;
                let skew = ProjectivePoint::new(skew_coords(&p.nu))?;
                out.push(obs(
                    1,
                    fp.levels[1] == segre(&tau_pt, &skew).coords(),
                    || p.to_json(),
                ));

                if !p.exceptional {
                    let u = phi1_values(&product).values;
                    out.push(obs(2, projectively_equal(&fp.levels[1], &u), || {
                        p.to_json()
                    }));
                }

                let mut q = partner(&mut s, &p, d, r, variant);
                let mut tries = 0;
                while q.same(&p) && tries < 100 {
                    q = partner(&mut s, &p, d, r, variant);
                    tries += 1;
                }
                // For r = 1 the exceptional fibre is a single point, so the last
                // variant has no distinct partner.
                let distinct = !q.same(&p);
                if distinct {
                    let fq = f_map_level1(&q.mu, &q.tau, &q.nu)?;
                    out.push(obs(3, !fp.projectively_equal(&fq), || {
                json!({ "first": p.to_json(), "second": q.to_json(), "variant": variant })
            }));
                }
                Ok((out, distinct))
            },
        );
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let skipped = results.iter().filter(|(_, distinct)| !distinct).count();
    let mut tally = Tally::new(&[
        "projection-commutes",
        "level1-is-segre-of-tau-and-skew",
        "level1-is-phi1-off-exceptional",
        "injective",
    ]);
    tally.detail(3, json!({ "pairs_without_distinct_partner": skipped }));
    tally.extend(results.into_iter().map(|(o, _)| o));
    Ok(tally.finish())
}

/// Every minor index with `s = 1` and `s = 2` on random `(g, p)`, `k`
/// cycling through `1..=d`.
fn product_expansion(grid: &Grid, seed: u64) -> Result<Vec<CheckOutcome>> {
    let configs: Vec<_> = grid
        .configs(false)
        .into_iter()
        .filter(|&(_, r, _)| r >= 1)
        .collect();
    let results = fan_out(&configs, grid.n, |&(d, r, _), i| -> Result<Vec<Obs>> {
        let mut s = sampler(grid, seed, Suite::ProductExpansion, &[d, r, i]);
        let ks: Vec<usize> = grid.ks(d).collect();
        if ks.is_empty() {
            return Ok(Vec::new());
        }
        let k = ks[i % ks.len()];
        let g = s.tuple(k - 1, r);
        let p = s.nonzero_form(d - k + 1);
        let mut out = Vec::new();
        for sz in 1..=2 {
            let mut bad = None;
            let mut cases = 0;
            for idx in enumerate_minor_indices(d, r, sz) {
                cases += 1;
                let e = product_minor_expansion(&g, &p, &idx)?;
                if !e.passed() {
                    bad = Some(e);
                    break;
                }
            }
            if cases > 0 {
                out.push(obs(
                    sz - 1,
                    bad.is_none(),
                    || json!({ "g": doc(&g), "p": strs(p.coeffs()), "expansion": bad }),
                ));
            }
        }
        Ok(out)
    });
    let mut tally = Tally::new(&["s1-all-minors", "s2-all-minors"]);
    tally.extend(results.into_iter().collect::<Result<Vec<_>>>()?);
    Ok(tally.finish())
}

/// The aux-count identity, and for `k >= 2` the shape of the attached tree
/// on the first root index of half-size `k + 1`.
fn auxcount(grid: &Grid) -> Result<Vec<CheckOutcome>> {
    let (lo, hi) = grid.k.unwrap_or((1, 8));
    let mut tally = Tally::new(&["count-identity", "tree-total-size"]);
    for k in lo.max(1)..=hi {
        tally.add(obs(0, aux_count_identity(k), || json!({ "k": k })));
        if k >= 2 {
            let n = 2 * (k + 1);
            let root = MinorIndex::new((0..n).map(|a| a % 2).collect(), (0..n).collect())?;
            let tree = attach_aux(&root)?;
            let total = tree.total_size();
            let expected = 1usize << (k + 1);
            tally.add(obs(
                1,
                total == expected,
                || json!({ "k": k, "total": total, "expected": expected }),
            ));
        }
    }
    Ok(tally.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> VerifyParams {
        VerifyParams {
            n: Some(6),
            ..VerifyParams::with_seed(seed)
        }
    }

    #[test]
    fn names_and_aliases_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(s.alias().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("lemma99".parse::<Suite>(), Err(Error::Parse(_))));
    }

    #[test]
    fn spans() {
        assert_eq!("4".parse::<Span>().unwrap(), Span::upto(4));
        assert_eq!("1..8".parse::<Span>().unwrap(), Span::between(1, 8));
        assert_eq!("2..=3".parse::<Span>().unwrap(), Span::between(2, 3));
        assert!("3..1".parse::<Span>().is_err());
        assert!("x".parse::<Span>().is_err());
    }

    #[test]
    fn every_suite_passes_small() {
        for s in Suite::ALL {
            let mut p = small(3);
            if s == Suite::Jacobian || s == Suite::FMap || s == Suite::ProductExpansion {
                p.d = Some(Span::upto(3));
            }
            let report = run_suite(s, &p).unwrap();
            assert!(report.passed, "{}", report.human());
            assert!(
                report.checks.iter().all(|c| c.diagnostic || c.cases > 0),
                "{}",
                report.human()
            );
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let p = small(11);
        let a = run_suite(Suite::StratumRank, &p).unwrap();
        let b = run_suite(Suite::StratumRank, &p).unwrap();
        assert_eq!(a.canonical_json(), b.canonical_json());
        let c = run_suite(Suite::StratumRank, &small(12)).unwrap();
        assert_ne!(a.inputs_digest, c.inputs_digest);
    }
}
