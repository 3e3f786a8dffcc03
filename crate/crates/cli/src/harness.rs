//! The reproduction table: every published value recomputed from scratch.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nq_core::analysis::{
    central_section_exponent, compare_canonical, gamma_exponent, is_in_gamma,
    isomorphism_certificate, lower_central_data, torsion_decomposition, Comparison,
};
use nq_core::document::{ConfigEcho, ResultDocument};
use nq_core::nq::{
    image_of_expr, nilpotent_quotient, verify_laws, NqConfig, NqResult, Termination,
};
use nq_core::oracle;
use nq_core::parse::{parse_input, parse_word};
use nq_core::pcpres::{ExponentVector, PcBuilder, PcPresentation};
use nq_core::zlinalg::{hnf, snf, IntMatrix};

use crate::job::{run_source, RunOptions};

pub const RIGHT3_PAIR: &str = include_str!("../inputs/right3_engel_pair.nq");
pub const RIGHT3_SINGLE: &str = include_str!("../inputs/right3_engel_single.nq");
pub const RIGHT4_SINGLE: &str = include_str!("../inputs/right4_engel_single.nq");
pub const RIGHT4_PAIR_C7: &str = include_str!("../inputs/right4_engel_pair_c7.nq");
pub const RIGHT4_PAIR_C8: &str = include_str!("../inputs/right4_engel_pair_c8.nq");
pub const ENGEL4: &str = include_str!("../inputs/engel4_two_generator.nq");
pub const FREE_RANK2: &str = include_str!("../inputs/free_rank2_c8.nq");

/// Law samples used when re-verifying every computed quotient.
pub const VERIFY_SAMPLES: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

/// One checked value.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

impl Check {
    fn eq(name: &str, expected: impl fmt::Display, computed: impl fmt::Display) -> Check {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let status = if expected == computed {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            name: name.to_string(),
            expected,
            computed,
            status,
        }
    }

    fn holds(name: &str, expected: &str, computed: impl fmt::Display, ok: bool) -> Check {
        Check {
            name: name.to_string(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    fn error(name: &str, expected: &str, e: impl fmt::Display) -> Check {
        Check {
            name: name.to_string(),
            expected: expected.to_string(),
            computed: format!("error: {}", e),
            status: Status::Fail,
        }
    }
}

/// A numbered criterion and its checks.
#[derive(Clone, Debug)]
pub struct Row {
    pub id: usize,
    pub title: String,
    pub checks: Vec<Check>,
    pub skipped: bool,
    pub seconds: f64,
}

impl Row {
    pub fn status(&self) -> Status {
        if self.skipped {
            Status::Skipped
        } else if self.checks.iter().all(|c| c.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "[{}] criterion {}: {} ({:.1}s)\n",
            self.status(),
            self.id,
            self.title,
            self.seconds
        );
        for c in &self.checks {
            s.push_str(&format!(
                "    [{}] {}: expected {}, computed {}\n",
                c.status, c.name, c.expected, c.computed
            ));
        }
        s
    }
}

#[derive(Clone, Debug, Default)]
pub struct HarnessOptions {
    pub include_long: bool,
    /// Result documents are written here, and long runs resume from them.
    pub output: Option<PathBuf>,
}

/// Quotients computed by earlier rows and reused by later ones.
#[derive(Default)]
struct Computed {
    quotients: Vec<(String, NqResult)>,
}

impl Computed {
    fn get(&self, name: &str) -> Option<&NqResult> {
        self.quotients
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r)
    }
}

fn compute(
    name: &str,
    source: &str,
    opts: &HarnessOptions,
    computed: &mut Computed,
) -> Result<NqResult, String> {
    if let Some(r) = computed.get(name) {
        return Ok(r.clone());
    }
    let r = match &opts.output {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
            let mut ro = RunOptions::new(dir.join(format!("{}.nq", name)));
            ro.output = Some(dir.join(format!("{}.json", name)));
            ro.samples = 0;
            let out = run_source(source, &ro).map_err(|f| f.message)?;
            match out.document {
                Some(d) if out.exit == crate::job::Exit::Ok => {
                    d.to_result().map_err(|e| e.to_string())?
                }
                _ => return Err(out.report),
            }
        }
        None => {
            let input = parse_input(source).map_err(|e| e.to_string())?;
            nilpotent_quotient(&input, &NqConfig::default()).map_err(|e| e.to_string())?
        }
    };
    computed.quotients.push((name.to_string(), r.clone()));
    Ok(r)
}

fn element(r: &NqResult, word: &str) -> Result<ExponentVector, String> {
    let expr = parse_word(word, &r.input.symbols).map_err(|e| e.to_string())?;
    image_of_expr(r, &expr).map_err(|e| e.to_string())
}

fn order_of(r: &NqResult, word: &str) -> String {
    match element(r, word).and_then(|x| r.presentation.element_order(&x).map_err(|e| e.to_string()))
    {
        Ok(Some(o)) => o.to_string(),
        Ok(None) => "infinite".to_string(),
        Err(e) => format!("error: {}", e),
    }
}

fn in_gamma(r: &NqResult, word: &str, k: usize) -> String {
    match element(r, word) {
        Ok(x) => is_in_gamma(&r.presentation, &x, k).to_string(),
        Err(e) => format!("error: {}", e),
    }
}

fn show<T: fmt::Display, E: fmt::Display>(v: Result<T, E>) -> String {
    match v {
        Ok(x) => x.to_string(),
        Err(e) => format!("error: {}", e),
    }
}

fn show_opt<E: fmt::Display>(v: Result<Option<BigInt>, E>) -> String {
    match v {
        Ok(Some(x)) => x.to_string(),
        Ok(None) => "not abelian".to_string(),
        Err(e) => format!("error: {}", e),
    }
}

fn stabilized_at(r: &NqResult) -> String {
    format!("{} ({})", r.class_achieved, r.termination.name())
}

fn row(id: usize, title: &str, f: impl FnOnce() -> Vec<Check>) -> Row {
    let t = Instant::now();
    let checks = f();
    Row {
        id,
        title: title.to_string(),
        checks,
        skipped: false,
        seconds: t.elapsed().as_secs_f64(),
    }
}

/// Checks of the first criterion against a computed quotient.
pub fn right3_pair_checks(r: &NqResult) -> Vec<Check> {
    let p = &r.presentation;
    vec![
        Check::eq("class", "6 (stabilized)", stabilized_at(r)),
        Check::eq("order [a^-1,c,c,c]", 2, order_of(r, "[a^-1,c,c,c]")),
        Check::eq("order [a*b,c,c,c]", 4, order_of(r, "[a*b,c,c,c]")),
        Check::eq(
            "[a^-1,c,c,c] in gamma_5",
            true,
            in_gamma(r, "[a^-1,c,c,c]", 5),
        ),
        Check::eq(
            "[a*b,c,c,c] in gamma_5",
            true,
            in_gamma(r, "[a*b,c,c,c]", 5),
        ),
        Check::eq(
            "exponent gamma_5/gamma_6",
            10,
            show(central_section_exponent(p, 5)),
        ),
        Check::eq("exponent gamma_6", 2, show_opt(gamma_exponent(p, 6))),
        Check::eq(
            "[a,c,b,c,c]^2 in gamma_6",
            true,
            in_gamma(r, "[a,c,b,c,c]^2", 6),
        ),
    ]
}

fn right3_pair(opts: &HarnessOptions, c: &mut Computed) -> Row {
    row(
        1,
        "right 3-Engel elements a, b in <a, b, c>",
        || match compute("right3_engel_pair", RIGHT3_PAIR, opts, c) {
            Ok(r) => right3_pair_checks(&r),
            Err(e) => vec![Check::error("quotient", "class 6 (stabilized)", e)],
        },
    )
}

fn right3_single(opts: &HarnessOptions, c: &mut Computed) -> Row {
    row(2, "one right 3-Engel element a in <a, c>", || {
        let r = match compute("right3_engel_single", RIGHT3_SINGLE, opts, c) {
            Ok(r) => r,
            Err(e) => return vec![Check::error("quotient", "class <= 5", e)],
        };
        let stable = r.termination == Termination::Stabilized && r.class_achieved <= 5;
        vec![
            Check::holds("class", "<= 5 (stabilized)", stabilized_at(&r), stable),
            Check::eq(
                "exponent gamma_5",
                2,
                show_opt(gamma_exponent(&r.presentation, 5)),
            ),
        ]
    })
}

fn right4_single(opts: &HarnessOptions, c: &mut Computed) -> Row {
    row(3, "one right 4-Engel element u in <u, v>", || {
        let r = match compute("right4_engel_single", RIGHT4_SINGLE, opts, c) {
            Ok(r) => r,
            Err(e) => return vec![Check::error("quotient", "class 8 (stabilized)", e)],
        };
        vec![
            Check::eq("class", "8 (stabilized)", stabilized_at(&r)),
            Check::eq("order [u^-1,v,v,v,v]", 375, order_of(&r, "[u^-1,v,v,v,v]")),
        ]
    })
}

fn right4_pair(opts: &HarnessOptions, c: &mut Computed) -> Row {
    row(
        4,
        "right 4-Engel elements s, t in <s, t, g>, class 7",
        || {
            let r = match compute("right4_engel_pair_c7", RIGHT4_PAIR_C7, opts, c) {
                Ok(r) => r,
                Err(e) => return vec![Check::error("quotient", "class 7", e)],
            };
            vec![
                Check::eq("class", "7 (reached_max_class)", stabilized_at(&r)),
                Check::eq("order [s*t,g,g,g,g]", 300, order_of(&r, "[s*t,g,g,g,g]")),
            ]
        },
    )
}

fn right4_pair_long(opts: &HarnessOptions, c: &mut Computed) -> Row {
    let title = "right 4-Engel elements s, t in <s, t, g>, class 8";
    if !opts.include_long {
        return Row {
            id: 5,
            title: title.to_string(),
            checks: Vec::new(),
            skipped: true,
            seconds: 0.0,
        };
    }
    row(5, title, || {
        let r = match compute("right4_engel_pair_c8", RIGHT4_PAIR_C8, opts, c) {
            Ok(r) => r,
            Err(e) => return vec![Check::error("quotient", "class 8", e)],
        };
        vec![
            Check::eq("class", "8 (reached_max_class)", stabilized_at(&r)),
            Check::eq(
                "exponent gamma_8",
                60,
                show_opt(gamma_exponent(&r.presentation, 8)),
            ),
        ]
    })
}

fn engel4(opts: &HarnessOptions, c: &mut Computed) -> Row {
    row(
        6,
        "two-generator 4-Engel group against the torsion-free quotient of M",
        || {
            let e = match compute("engel4_two_generator", ENGEL4, opts, c) {
                Ok(r) => r,
                Err(err) => return vec![Check::error("quotient", "stabilized", err)],
            };
            let m = match compute("right4_engel_single", RIGHT4_SINGLE, opts, c) {
                Ok(r) => r,
                Err(err) => return vec![Check::error("quotient M", "class 8", err)],
            };
            let mut checks = vec![Check::holds(
                "E(2,4) stabilizes",
                "stabilized",
                stabilized_at(&e),
                e.termination == Termination::Stabilized,
            )];
            let t = match torsion_decomposition(&m) {
                Ok(t) => t,
                Err(err) => {
                    checks.push(Check::error("torsion of M", "{2,3,5}-group", err));
                    return checks;
                }
            };
            let primes: Vec<String> = t
                .torsion_order_primes
                .iter()
                .map(|p| p.to_string())
                .collect();
            let allowed = t
                .torsion_order_primes
                .iter()
                .all(|p| [2, 3, 5].iter().any(|&q| *p == BigInt::from(q)));
            checks.push(Check::holds(
                "torsion primes of M",
                "subset of {2, 3, 5}",
                format!("{{{}}} (|T| = {})", primes.join(", "), t.torsion_order),
                allowed,
            ));
            checks.push(Check::eq(
                "class of E(2,4) equals class of M/T",
                e.class_achieved,
                t.quotient.presentation.class(),
            ));
            let cmp = match torsion_decomposition(&e) {
                Ok(te) if te.torsion_order.is_one() => {
                    compare_canonical(&t.quotient.presentation, &te.quotient.presentation)
                }
                Ok(te) => Comparison::Different(format!(
                    "E(2,4) has torsion of order {}",
                    te.torsion_order
                )),
                Err(err) => Comparison::Different(err.to_string()),
            };
            checks.push(Check::eq(
                "compare_canonical(M/T, E(2,4))",
                "equal",
                match &cmp {
                    Comparison::Equal => "equal".to_string(),
                    Comparison::Different(w) => format!("different: {}", w),
                },
            ));
            checks.push(match isomorphism_certificate(&e, &t.quotient) {
                Ok(cert) => Check::holds(
                    "homomorphism E(2,4) -> M/T with equal Hirsch length",
                    "holds",
                    format!(
                        "homomorphism {}, hirsch {} and {}",
                        cert.homomorphism, cert.source_hirsch, cert.target_hirsch
                    ),
                    cert.holds(),
                ),
                Err(err) => Check::error("homomorphism E(2,4) -> M/T", "holds", err),
            });
            checks.push(Check::holds(
                "class of E(2,4) at most 6",
                "<= 6",
                e.class_achieved,
                e.class_achieved <= 6,
            ));
            checks
        },
    )
}

/// Ranks of the layers of a presentation, by weight.
fn free_ranks(p: &PcPresentation) -> Result<Vec<usize>, String> {
    let lcs = lower_central_data(p).map_err(|e| e.to_string())?;
    Ok(lcs.layers.iter().map(|l| l.invariants.free_rank).collect())
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let rows = rng.gen_range(1..=4);
    let cols = rng.gen_range(1..=4);
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect())
        .collect()
}

fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Checks HNF and SNF of `count` random matrices against determinantal divisors.
pub fn matrix_oracle_failures(count: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..count {
        let m = random_matrix(&mut rng);
        let cols = m[0].len();
        let big = to_big(&m);
        let a = IntMatrix::from_rows(cols, &big).expect("rectangular");
        let expected = oracle::elementary_divisors(&big, cols);
        let (s, _, _) = snf(&a);
        let diag: Vec<BigInt> = (0..s.rows().min(s.cols()))
            .map(|k| s.row(k)[k].clone())
            .filter(|d| !d.is_zero())
            .collect();
        let (h, _) = hnf(&a);
        let hd = oracle::determinantal_divisors(&h.row_vecs(), cols);
        if diag != expected || hd != oracle::determinantal_divisors(&big, cols) {
            failures.push(format!("{:?}", m));
        }
    }
    failures
}

/// Compares collection in the Heisenberg group with unitriangular matrices.
pub fn unitriangular_failures(count: usize, seed: u64) -> Vec<String> {
    let mut b = PcBuilder::graded(vec![1, 1, 2]);
    b.set_comm(1, 0, vec![(2, 1)]);
    let p = b.build().expect("heisenberg presentation");
    // g_0 -> X, g_1 -> Y, and [Y, X] = Z^-1 for the elementary Z
    let to_matrix = |v: &ExponentVector| {
        let s = v.as_slice();
        (
            BigInt::from(s[0]),
            BigInt::from(s[1]),
            BigInt::from(s[0]) * s[1] - s[2],
        )
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..count {
        let len = rng.gen_range(1..=8);
        let word: Vec<(usize, i64)> = (0..len)
            .map(|_| (rng.gen_range(0..3), rng.gen_range(-5..=5)))
            .filter(|&(_, e)| e != 0)
            .collect();
        let mut expected = (BigInt::zero(), BigInt::zero(), BigInt::zero());
        for &(g, e) in &word {
            let unit = match g {
                0 => (BigInt::one(), BigInt::zero(), BigInt::zero()),
                1 => (BigInt::zero(), BigInt::one(), BigInt::zero()),
                _ => (BigInt::zero(), BigInt::zero(), -BigInt::one()),
            };
            expected = oracle::unitriangular_mul(expected, oracle::unitriangular_pow(&unit, e));
        }
        match p.collect(&word) {
            Ok(v) if to_matrix(&v) == expected => {}
            other => failures.push(format!("{:?} -> {:?}", word, other)),
        }
    }
    failures
}

/// Finite presented groups whose nilpotent quotients have at most 200 elements.
pub const FINITE_INPUTS: &[&str] = &[
    "generators: a b\nrelators: a^4, b^4, [a,b]",
    "generators: a b\nrelators: a^8, b^2, (a*b)^2",
    "generators: a b\nrelators: a^4, a^2*b^-2, b^-1*a*b*a",
    "generators: a b\nrelators: a^3, b^3, [a,b,a], [a,b,b]",
    "generators: a b\nrelators: a^5, b^5\nmax_class: 2",
    "generators: a b\nvariables: x\nlaws: x^3",
    "generators: a b c\nrelators: a^2, b^2, c^3\nmax_class: 2",
    "generators: a b\nrelators: a^2, b^2\nmax_class: 4",
    "generators: a\nrelators: a^12",
];

/// Compares `element_order` with repeated multiplication on every element
/// of small finite quotients, and the element count with the product of
/// the relative orders.
pub fn finite_order_failures() -> Vec<String> {
    let mut failures = Vec::new();
    for src in FINITE_INPUTS {
        let r = match parse_input(src)
            .map_err(|e| e.to_string())
            .and_then(|i| nilpotent_quotient(&i, &NqConfig::default()).map_err(|e| e.to_string()))
        {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{:?}: {}", src, e));
                continue;
            }
        };
        let p = &r.presentation;
        let order: i64 = p.rel_orders().iter().product();
        let elements = match oracle::enumerate_elements(p, 200) {
            Ok(Some(e)) => e,
            other => {
                failures.push(format!(
                    "{:?}: enumeration {:?}",
                    src,
                    other.map(|o| o.map(|v| v.len()))
                ));
                continue;
            }
        };
        if elements.len() as i64 != order || p.rel_orders().contains(&0) {
            failures.push(format!(
                "{:?}: {} elements, relative orders {:?}",
                src,
                elements.len(),
                p.rel_orders()
            ));
        }
        for x in &elements {
            let fast = p.element_order(x).ok().flatten();
            let slow = oracle::order_by_powers(p, x, 200)
                .ok()
                .flatten()
                .map(BigInt::from);
            if fast != slow || fast.is_none() {
                failures.push(format!(
                    "{:?}: {:?} has order {:?}, expected {:?}",
                    src,
                    x.as_slice(),
                    fast,
                    slow
                ));
            }
        }
    }
    failures
}

fn summarize(failures: &[String]) -> (String, bool) {
    match failures.first() {
        None => ("no mismatch".to_string(), true),
        Some(f) => (format!("{} mismatches, first {}", failures.len(), f), false),
    }
}

/// Serialized document of a fresh computation, without timings.
fn document_bytes(source: &str) -> Result<String, String> {
    let input = parse_input(source).map_err(|e| e.to_string())?;
    let config = NqConfig::default();
    let r = nilpotent_quotient(&input, &config).map_err(|e| e.to_string())?;
    let doc = ResultDocument::from_result(&r, ConfigEcho::from_config(&config, 0), false)
        .map_err(|e| e.to_string())?;
    Ok(doc.to_string_pretty())
}

fn properties(opts: &HarnessOptions, c: &mut Computed) -> Row {
    row(7, "oracle and property checks", || {
        let mut checks = Vec::new();
        match compute("free_rank2_c8", FREE_RANK2, opts, c)
            .and_then(|r| free_ranks(&r.presentation))
        {
            Ok(ranks) => {
                let witt: Vec<usize> = (1..=8).map(|k| oracle::witt(2, k) as usize).collect();
                checks.push(Check::eq(
                    "free rank-2 layer ranks",
                    format!("{:?}", witt),
                    format!("{:?}", ranks),
                ));
            }
            Err(e) => checks.push(Check::error(
                "free rank-2 layer ranks",
                "[2, 1, 2, 3, 6, 9, 18, 30]",
                e,
            )),
        }
        let (s, ok) = summarize(&matrix_oracle_failures(1000, 7));
        checks.push(Check::holds(
            "HNF/SNF against determinantal divisors (1000 matrices)",
            "no mismatch",
            s,
            ok,
        ));
        let (s, ok) = summarize(&unitriangular_failures(1000, 11));
        checks.push(Check::holds(
            "collection against unitriangular matrices (1000 words)",
            "no mismatch",
            s,
            ok,
        ));
        let (s, ok) = summarize(&finite_order_failures());
        checks.push(Check::holds(
            "element orders against brute force",
            "no mismatch",
            s,
            ok,
        ));
        for (name, r) in &c.quotients {
            let verdict = match verify_laws(r, VERIFY_SAMPLES, 2024) {
                Ok(None) => ("no counterexample".to_string(), true),
                Ok(Some(ce)) => (format!("counterexample {:?}", ce.value.as_slice()), false),
                Err(e) => (format!("error: {}", e), false),
            };
            checks.push(Check::holds(
                &format!("{} samples of every law in {}", VERIFY_SAMPLES, name),
                "no counterexample",
                verdict.0,
                verdict.1,
            ));
        }
        for (name, src) in [
            ("right3_engel_pair", RIGHT3_PAIR),
            ("engel4_two_generator", ENGEL4),
        ] {
            let same = match (document_bytes(src), document_bytes(src)) {
                (Ok(a), Ok(b)) => (if a == b { "identical" } else { "differ" }).to_string(),
                (Err(e), _) | (_, Err(e)) => format!("error: {}", e),
            };
            checks.push(Check::eq(
                &format!("rerun of {} is byte-identical", name),
                "identical",
                same,
            ));
        }
        checks
    })
}

/// Computes every row in order. `on_row` sees each row as it finishes.
pub fn verify_paper(opts: &HarnessOptions, mut on_row: impl FnMut(&Row)) -> Vec<Row> {
    let mut computed = Computed::default();
    let steps: [fn(&HarnessOptions, &mut Computed) -> Row; 7] = [
        right3_pair,
        right3_single,
        right4_single,
        right4_pair,
        right4_pair_long,
        engel4,
        properties,
    ];
    let mut rows = Vec::new();
    for step in steps {
        let r = step(opts, &mut computed);
        on_row(&r);
        rows.push(r);
    }
    rows
}

/// True when no executed row failed.
pub fn all_passed(rows: &[Row]) -> bool {
    rows.iter().all(|r| r.status() != Status::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracles_agree_on_small_samples() {
        assert!(matrix_oracle_failures(50, 3).is_empty());
        assert!(unitriangular_failures(50, 5).is_empty());
    }

    #[test]
    fn skipped_rows_do_not_fail() {
        let row = right4_pair_long(&HarnessOptions::default(), &mut Computed::default());
        assert_eq!(row.status(), Status::Skipped);
        assert!(all_passed(&[row]));
    }

    #[test]
    fn row_status_follows_checks() {
        let row = Row {
            id: 9,
            title: "sample".into(),
            checks: vec![Check::eq("x", 1, 1), Check::eq("y", 2, 3)],
            skipped: false,
            seconds: 0.0,
        };
        assert_eq!(row.status(), Status::Fail);
        assert!(row.render().contains("[FAIL] y: expected 2, computed 3"));
    }
}
