//! The `run` and `query` subcommands.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use nq_core::analysis::{
    central_section_exponent, compare_canonical, gamma_exponent, hirsch_length, is_in_gamma,
    isomorphism_certificate, torsion_decomposition, Comparison,
};
use nq_core::document::{ConfigEcho, ResultDocument};
use nq_core::nq::{
    image_of_expr, nilpotent_quotient_with, verify_laws, InstanceStrategy, NqConfig, NqResult,
    Termination,
};
use nq_core::parse::{format_input, parse_input, parse_word};
use nq_core::words::SymbolKind;
use nq_core::{AnalysisError, DocError, NqError};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Verification = 1,
    Input = 2,
    Budget = 3,
}

/// Failure carrying the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            exit: Exit::Input,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure {
            exit: Exit::Verification,
            message: message.into(),
        }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Io(_) | DocError::Json(_) | DocError::Malformed(_) | DocError::Word(_) => {
                Failure::input(e.to_string())
            }
            DocError::Pc(_) => Failure::input(e.to_string()),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::WeightOutOfRange { .. } | AnalysisError::Ungraded => {
                Failure::input(e.to_string())
            }
            _ => Failure::verification(e.to_string()),
        }
    }
}

impl From<NqError> for Failure {
    fn from(e: NqError) -> Self {
        match e {
            NqError::Word(_) => Failure::input(e.to_string()),
            NqError::Budget { .. } => Failure {
                exit: Exit::Budget,
                message: e.to_string(),
            },
            _ => Failure::verification(e.to_string()),
        }
    }
}

/// Parses `90`, `90s`, `15m` or `2h`.
pub fn parse_duration(s: &str) -> Result<Duration, String> {
    let s = s.trim();
    let (num, mul) = match s.chars().last() {
        Some('s') => (&s[..s.len() - 1], 1),
        Some('m') => (&s[..s.len() - 1], 60),
        Some('h') => (&s[..s.len() - 1], 3600),
        _ => (s, 1),
    };
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("invalid duration `{}`", s))?;
    if v <= 0.0 || !v.is_finite() {
        return Err(format!("duration must be positive: `{}`", s));
    }
    Ok(Duration::from_secs_f64(v * mul as f64))
}

/// Parses a byte count with an optional `K`, `M` or `G` suffix.
pub fn parse_bytes(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let (num, mul) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1u64 << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    let v: u64 = num
        .trim()
        .parse()
        .map_err(|_| format!("invalid size `{}`", s))?;
    if v == 0 {
        return Err(format!("size must be positive: `{}`", s));
    }
    v.checked_mul(mul)
        .ok_or_else(|| format!("size too large: `{}`", s))
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub max_class: Option<usize>,
    pub strategy: InstanceStrategy,
    pub samples: usize,
    pub seed: u64,
    pub time_budget: Option<Duration>,
    pub memory_budget: Option<u64>,
    pub torsion_free: bool,
    pub escalate: bool,
    pub timings: bool,
}

impl RunOptions {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        RunOptions {
            input: input.into(),
            output: None,
            max_class: None,
            strategy: InstanceStrategy::WeightedBox,
            samples: 16,
            seed: 1,
            time_budget: None,
            memory_budget: None,
            torsion_free: false,
            escalate: true,
            timings: false,
        }
    }

    pub fn output_path(&self) -> PathBuf {
        self.output
            .clone()
            .unwrap_or_else(|| self.input.with_extension("result.json"))
    }

    fn engine_config(&self) -> NqConfig {
        NqConfig {
            max_class: self.max_class,
            strategy: self.strategy,
            check_samples: self.samples.min(16),
            seed: self.seed,
            time_budget: self.time_budget,
            memory_budget: self.memory_budget,
            torsion_free: self.torsion_free,
            escalate: self.escalate,
        }
    }
}

/// Outcome of a run: the document written and the exit status.
pub struct RunOutcome {
    pub exit: Exit,
    pub document: Option<ResultDocument>,
    pub report: String,
}

fn resumable(path: &Path, normalized_input: &str, echo: &ConfigEcho) -> Option<NqResult> {
    let doc = ResultDocument::read(path).ok()?;
    let same = doc.input == normalized_input
        && doc.config.torsion_free == echo.torsion_free
        && doc.config.strategy == echo.strategy
        && doc.counterexample.is_none();
    if !same {
        return None;
    }
    doc.to_result().ok()
}

fn summary(doc: &ResultDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "class {} ({})",
        doc.class_achieved,
        doc.termination.name()
    );
    let _ = writeln!(s, "generators {}", doc.presentation.len());
    for l in &doc.layers {
        let t: Vec<String> = l.torsion.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(
            s,
            "layer {}: free rank {}, torsion [{}]",
            l.weight,
            l.free_rank,
            t.join(", ")
        );
    }
    s
}

/// Computes the quotient described by `opts`, checkpointing after every
/// class and resuming from a compatible document at the output path.
pub fn run(opts: &RunOptions) -> Result<RunOutcome, Failure> {
    let text = std::fs::read_to_string(&opts.input)
        .map_err(|e| Failure::input(format!("cannot read {}: {}", opts.input.display(), e)))?;
    run_source(&text, opts)
}

/// As [`run`], with the input text supplied directly; `opts.input` only
/// names it in messages and in the default output path.
pub fn run_source(text: &str, opts: &RunOptions) -> Result<RunOutcome, Failure> {
    let input = parse_input(text)
        .map_err(|e| Failure::input(format!("{}: {}", opts.input.display(), e)))?;
    let config = opts.engine_config();
    let echo = ConfigEcho::from_config(&config, opts.samples);
    let out_path = opts.output_path();
    let normalized = format_input(&input);
    let mut report = String::new();

    let resume = resumable(&out_path, &normalized, &echo);
    if let Some(r) = &resume {
        let _ = writeln!(report, "resuming from class {}", r.class_achieved);
    }
    let mut last: Option<NqResult> = resume.clone();
    let mut checkpoint = |r: &NqResult| -> Result<(), NqError> {
        last = Some(r.clone());
        let doc = ResultDocument::from_result(r, echo.clone(), opts.timings)
            .map_err(|e| NqError::Internal(e.to_string()))?;
        doc.write_atomic(&out_path)
            .map_err(|e| NqError::Internal(e.to_string()))
    };
    let result = match nilpotent_quotient_with(&input, &config, resume, &mut checkpoint) {
        Ok(r) => r,
        Err(NqError::Budget { reason, last_class }) => {
            let partial = match last {
                Some(mut r) => {
                    r.termination = Termination::ReachedMaxClass;
                    r
                }
                None => {
                    let _ = writeln!(report, "budget exceeded ({}) before class 1", reason);
                    return Ok(RunOutcome {
                        exit: Exit::Budget,
                        document: None,
                        report,
                    });
                }
            };
            let doc = ResultDocument::from_result(&partial, echo, opts.timings)?;
            doc.write_atomic(&out_path)?;
            let _ = writeln!(
                report,
                "budget exceeded ({}); partial result through class {} written",
                reason, last_class
            );
            report.push_str(&summary(&doc));
            return Ok(RunOutcome {
                exit: Exit::Budget,
                document: Some(doc),
                report,
            });
        }
        Err(e) => return Err(e.into()),
    };

    let mut doc = ResultDocument::from_result(&result, echo, opts.timings)?;
    let mut exit = Exit::Ok;
    if opts.samples > 0 {
        if let Some(c) = verify_laws(&result, opts.samples, opts.seed)? {
            let table = &result.input.symbols;
            let what = match (c.relator, c.law) {
                (Some(i), _) => format!("relator {}", i + 1),
                (_, Some(i)) => format!("law {}", i + 1),
                _ => "check".to_string(),
            };
            let assignment: Vec<String> = c
                .assignment
                .iter()
                .map(|(s, v)| format!("{} = {:?}", table.name(*s), v.as_slice()))
                .collect();
            doc.counterexample = Some(format!(
                "{} fails with {} giving {:?}",
                what,
                assignment.join(", "),
                c.value.as_slice()
            ));
            exit = Exit::Verification;
        }
    }
    doc.write_atomic(&out_path)?;
    report.push_str(&summary(&doc));
    if let Some(c) = &doc.counterexample {
        let _ = writeln!(report, "counterexample: {}", c);
    }
    let _ = writeln!(report, "written to {}", out_path.display());
    Ok(RunOutcome {
        exit,
        document: Some(doc),
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Order(String),
    InGamma(String, usize),
    ExponentGamma(usize),
    Torsion,
    Compare { other: PathBuf, torsion_free: bool },
}

impl Query {
    /// Reads a query from its command words.
    pub fn parse(words: &[String]) -> Result<Query, Failure> {
        let usage = || {
            Failure::input(
                "expected one of: order <word> | in-gamma <word> <k> | exponent-gamma <k> | torsion | compare [--torsion-free] <other-result>",
            )
        };
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Failure::input(format!("`{}` is not a weight", s)))
        };
        match words.first().map(String::as_str) {
            Some("order") if words.len() == 2 => Ok(Query::Order(words[1].clone())),
            Some("in-gamma") if words.len() == 3 => {
                Ok(Query::InGamma(words[1].clone(), num(&words[2])?))
            }
            Some("exponent-gamma") if words.len() == 2 => Ok(Query::ExponentGamma(num(&words[1])?)),
            Some("torsion") if words.len() == 1 => Ok(Query::Torsion),
            Some("compare") if words.len() == 2 => Ok(Query::Compare {
                other: words[1].clone().into(),
                torsion_free: false,
            }),
            Some("compare") if words.len() == 3 && words[1] == "--torsion-free" => {
                Ok(Query::Compare {
                    other: words[2].clone().into(),
                    torsion_free: true,
                })
            }
            _ => Err(usage()),
        }
    }
}

/// Image of a word over the input generators.
fn element(r: &NqResult, text: &str) -> Result<nq_core::pcpres::ExponentVector, Failure> {
    let table = &r.input.symbols;
    let expr = parse_word(text, table).map_err(|e| Failure::input(e.to_string()))?;
    if let Some(s) = expr
        .symbols()
        .into_iter()
        .find(|&s| table.kind(s) != SymbolKind::Generator)
    {
        return Err(Failure::input(format!(
            "`{}` is not a generator",
            table.name(s)
        )));
    }
    Ok(image_of_expr(r, &expr)?)
}

/// Answers `query` about the stored result and returns the report text.
pub fn query(doc: &ResultDocument, q: &Query) -> Result<String, Failure> {
    let r = doc.to_result()?;
    let p = &r.presentation;
    let mut out = String::new();
    match q {
        Query::Order(w) => {
            let x = element(&r, w)?;
            let order = p
                .element_order(&x)
                .map_err(|e| Failure::verification(e.to_string()))?;
            let _ = writeln!(
                out,
                "{}",
                order.map_or("infinite".to_string(), |o| o.to_string())
            );
        }
        Query::InGamma(w, k) => {
            let x = element(&r, w)?;
            if *k == 0 || *k > p.class() + 1 {
                return Err(AnalysisError::WeightOutOfRange {
                    k: *k,
                    class: p.class(),
                }
                .into());
            }
            let _ = writeln!(out, "{}", is_in_gamma(p, &x, *k));
        }
        Query::ExponentGamma(k) => {
            let e = central_section_exponent(p, *k)?;
            let _ = writeln!(out, "section {}", e);
            if let Some(g) = gamma_exponent(p, *k)? {
                let _ = writeln!(out, "subgroup {}", g);
            }
        }
        Query::Torsion => {
            let t = torsion_decomposition(&r)?;
            let primes: Vec<String> = t
                .torsion_order_primes
                .iter()
                .map(|p| p.to_string())
                .collect();
            let _ = writeln!(out, "order {}", t.torsion_order);
            let _ = writeln!(out, "primes {{{}}}", primes.join(", "));
            for (k, d) in t.torsion_layer_divisors.iter().enumerate() {
                let d: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "layer {}: [{}]", k + 1, d.join(", "));
            }
            let qp = &t.quotient.presentation;
            let _ = writeln!(
                out,
                "quotient class {} generators {} hirsch {}",
                qp.class(),
                qp.len(),
                hirsch_length(qp)
            );
        }
        Query::Compare {
            other,
            torsion_free,
        } => {
            let other = ResultDocument::read(other)?.to_result()?;
            let (a, b) = if *torsion_free {
                (
                    torsion_decomposition(&r)?.quotient,
                    torsion_decomposition(&other)?.quotient,
                )
            } else {
                (r.clone(), other)
            };
            match compare_canonical(&a.presentation, &b.presentation) {
                Comparison::Equal => {
                    let _ = writeln!(out, "equal");
                }
                Comparison::Different(w) => {
                    let _ = writeln!(out, "different: {}", w);
                }
            }
            if *torsion_free {
                let c = isomorphism_certificate(&b, &a)?;
                let _ = writeln!(
                    out,
                    "certificate {}: homomorphism {}, torsion-free {} and {}, hirsch {} and {}",
                    if c.holds() { "holds" } else { "fails" },
                    c.homomorphism,
                    c.source_torsion_free,
                    c.target_torsion_free,
                    c.source_hirsch,
                    c.target_hirsch
                );
            }
        }
    }
    Ok(out)
}
