//! The acceptance criteria, each at full size with a fixed seed. Prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use mapstrata::blowup::monomial_span_check;
use mapstrata::verify::{run_suite, Report, Span, Suite, VerifyParams};

const SEED: u64 = 20_240_601;

type Criterion = fn() -> (bool, String);

fn params(d: Option<Span>, r: Option<Span>, n: usize) -> VerifyParams {
    VerifyParams {
        d,
        r,
        n: Some(n),
        ..VerifyParams::with_seed(SEED)
    }
}

fn run(suite: Suite, p: &VerifyParams) -> Report {
    run_suite(suite, p).unwrap_or_else(|e| panic!("{suite}: {e}"))
}

/// Named checks all passed, each with at least `min_cases` cases.
fn checks(report: &Report, names: &[&str], min_cases: usize) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &name in names {
        let c = report
            .checks
            .iter()
            .find(|c| c.name == name)
            .unwrap_or_else(|| panic!("{} has no check {name}", report.command));
        ok &= c.passed && c.cases >= min_cases;
        parts.push(format!("{name} {}/{}", c.cases - c.failures, c.cases));
        if !c.passed {
            parts.push(format!(
                "witness {}",
                c.witnesses
                    .first()
                    .map(|w| w.to_string())
                    .unwrap_or_default()
            ));
        }
    }
    (ok, parts.join(", "))
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn strata_oracle() -> (bool, String) {
    let r = run(
        Suite::StratumRank,
        &params(Some(Span::between(1, 4)), Some(Span::between(0, 2)), 500),
    );
    // 12 configurations of 500 tuples, one case per k.
    checks(&r, &["oracle-equivalence", "monotone-in-k"], 12 * 500)
}

fn dimension() -> (bool, String) {
    let r = run(
        Suite::Dimension,
        &params(Some(Span::between(1, 4)), Some(Span::between(0, 2)), 1),
    );
    // sum over d <= 4 of d, times three values of r.
    checks(&r, &["cone-jacobian-rank"], 30)
}

fn jacobian() -> (bool, String) {
    let names = [
        "lower-stratum-jacobian-vanishes",
        "open-stratum-rank-equals-codimension",
        "classification",
    ];
    let main = run(
        Suite::Jacobian,
        &params(Some(Span::between(1, 3)), Some(Span::between(1, 2)), 100),
    );
    let spot = run(
        Suite::Jacobian,
        &params(Some(Span::between(4, 4)), Some(Span::between(1, 2)), 10),
    );
    let (a, sa) = checks(&main, &names, 100);
    let (b, sb) = checks(&spot, &names, 10);
    (a && b, format!("d<=3: {sa}; d=4: {sb}"))
}

fn increment() -> (bool, String) {
    let sweep = run(
        Suite::StratumRank,
        &params(Some(Span::between(1, 4)), Some(Span::between(0, 2)), 500),
    );
    let own = run(
        Suite::RankIncrement,
        &params(Some(Span::between(1, 4)), Some(Span::between(0, 2)), 500),
    );
    let (a, sa) = checks(&sweep, &["rank-increment"], 1);
    let (b, sb) = checks(&own, &["rank-increment"], 1);
    (a && b, format!("in sweep: {sa}; standalone: {sb}"))
}

fn b_submatrix() -> (bool, String) {
    let r = run(
        Suite::BSubmatrix,
        &params(Some(Span::between(1, 4)), Some(Span::between(0, 2)), 200),
    );
    // 30 (d, r, k) configurations of 200 tuples.
    checks(&r, &["distinct-pair-criterion"], 30 * 200)
}

fn corner() -> (bool, String) {
    let r = run(Suite::CornerExpansion, &params(None, None, 50));
    checks(&r, &["sides-agree", "block-diagonal-factors"], 50)
}

fn relations() -> (bool, String) {
    let r = run(
        Suite::SixTerm,
        &params(Some(Span::between(2, 4)), Some(Span::between(1, 2)), 100),
    );
    checks(
        &r,
        &[
            "vanish-on-constructed-r2-points",
            "some-relation-nonzero-off-r2",
        ],
        100,
    )
}

fn monomials() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, k) in [(2, 1), (3, 1), (4, 1), (3, 2), (4, 2)] {
        let expected = if k == 1 {
            binom(d + 1, 2)
        } else {
            binom(d + k, 2 * k)
        };
        let m = monomial_span_check(d, k).expect("within limits");
        ok &= m.passed() && m.rank == expected;
        parts.push(format!("(d={d},k={k}) rank {}/{expected}", m.rank));
    }
    (ok, parts.join(", "))
}

fn fmap() -> (bool, String) {
    let r = run(
        Suite::FMap,
        &params(Some(Span::between(3, 3)), Some(Span::between(1, 2)), 100),
    );
    checks(
        &r,
        &[
            "projection-commutes",
            "level1-is-segre-of-tau-and-skew",
            "injective",
        ],
        100,
    )
}

fn expansion() -> (bool, String) {
    let r = run(
        Suite::ProductExpansion,
        &params(Some(Span::between(1, 4)), Some(Span::between(1, 2)), 100),
    );
    checks(&r, &["s1-all-minors", "s2-all-minors"], 100)
}

fn determinism() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for suite in Suite::ALL {
        let p = params(None, None, 10);
        let a = run(suite, &p);
        let b = run(suite, &p);
        let same = a.canonical_json() == b.canonical_json();
        ok &= same;
        if !same {
            parts.push(format!("{suite} differs"));
        }
    }
    parts.push(format!("{} suites run twice", Suite::ALL.len()));
    (ok, parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("1 strata vs common-root oracle", strata_oracle),
        ("2 stratum dimension", dimension),
        ("3 singular locus by Jacobian", jacobian),
        ("4 rank increment", increment),
        ("5 B-submatrix criterion", b_submatrix),
        ("6 corner expansion", corner),
        ("7 six-term relations", relations),
        ("8 monomial spanning", monomials),
        ("9 F-map commutativity and injectivity", fmap),
        ("10 product-minor expansion", expansion),
        ("11 deterministic reports", determinism),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        let start = Instant::now();
        let (ok, summary) = criterion();
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name} ({:.1}s): {summary}",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
