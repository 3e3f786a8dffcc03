//! The nilpotent quotient algorithm with identical relations.
//!
//! Each step takes a consistent class-`c` quotient, adds a central tail
//! generator to every relation that does not define a generator, and then
//! computes the lattice of tail relations forced by consistency, by the
//! input relators and by instances of the laws. The surviving tails form
//! the next lower-central layer.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{NqError, PcError};
use crate::pcpres::{Definition, ExponentVector, PcBuilder, PcPresentation, SparseWord};
use crate::words::{GroupInput, Law, SymbolId, SymbolKind, SymbolTable};
use crate::zlinalg::{saturate, EchelonLattice, SparseRow};

/// How law variables are instantiated during an extension step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InstanceStrategy {
    /// Every variable runs over the pc generators.
    Generators,
    /// Pc generators and products of two pc generators.
    GeneratorsPlusPairs,
    /// Every product `g_1^{e_1} ... g_n^{e_n}` with `e_i >= 0` and weighted
    /// degree `sum e_i * wt(g_i)` bounded by the room left in the new layer.
    WeightedBox,
}

impl InstanceStrategy {
    pub fn name(self) -> &'static str {
        match self {
            InstanceStrategy::Generators => "generators",
            InstanceStrategy::GeneratorsPlusPairs => "generators_plus_pairs",
            InstanceStrategy::WeightedBox => "weighted_box",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "generators" => Some(InstanceStrategy::Generators),
            "generators_plus_pairs" | "pairs" => Some(InstanceStrategy::GeneratorsPlusPairs),
            "weighted_box" | "box" => Some(InstanceStrategy::WeightedBox),
            _ => None,
        }
    }

    fn escalate(self) -> Option<Self> {
        match self {
            InstanceStrategy::Generators => Some(InstanceStrategy::GeneratorsPlusPairs),
            InstanceStrategy::GeneratorsPlusPairs => Some(InstanceStrategy::WeightedBox),
            InstanceStrategy::WeightedBox => None,
        }
    }
}

impl fmt::Display for InstanceStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct NqConfig {
    /// Overrides the class bound of the input when set.
    pub max_class: Option<usize>,
    pub strategy: InstanceStrategy,
    /// Escalate the strategy when a sampled law instance fails.
    pub escalate: bool,
    /// Random law instances checked after every class, when escalation is on.
    pub check_samples: usize,
    pub seed: u64,
    pub time_budget: Option<Duration>,
    /// Resident memory limit in bytes.
    pub memory_budget: Option<u64>,
    /// Kill the torsion of every new layer.
    pub torsion_free: bool,
}

impl Default for NqConfig {
    fn default() -> Self {
        NqConfig {
            max_class: None,
            strategy: InstanceStrategy::WeightedBox,
            escalate: true,
            check_samples: 16,
            seed: 1,
            time_budget: None,
            memory_budget: None,
            torsion_free: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The next layer is trivial: this is the largest nilpotent quotient.
    Stabilized,
    ReachedMaxClass,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Stabilized => "stabilized",
            Termination::ReachedMaxClass => "reached_max_class",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassStats {
    pub class: usize,
    pub tails: usize,
    pub rows: usize,
    pub new_generators: usize,
    pub strategy: InstanceStrategy,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct NqResult {
    pub presentation: PcPresentation,
    /// Image of every input generator.
    pub images: Vec<ExponentVector>,
    pub class_achieved: usize,
    pub termination: Termination,
    pub stats: Vec<ClassStats>,
    pub input: GroupInput,
}

/// Source of a tail in the covering presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TailSource {
    Power(usize),
    Comm { j: usize, i: usize },
    Image(usize),
}

impl TailSource {
    fn definition(self) -> Definition {
        match self {
            TailSource::Power(i) => Definition::Power(i),
            TailSource::Comm { j, i } => Definition::Commutator { j, i },
            TailSource::Image(k) => Definition::Image(k),
        }
    }
}

struct Cover {
    pres: PcPresentation,
    n_old: usize,
    sources: Vec<TailSource>,
    images: Vec<ExponentVector>,
}

enum StepOutcome {
    Extended(PcPresentation, Vec<ExponentVector>, ClassStats),
    Stable(ClassStats),
}

/// Failure inside a step that a stronger instance set may avoid.
enum StepError {
    Fatal(NqError),
    LawFailsBelow,
}

impl From<NqError> for StepError {
    fn from(e: NqError) -> Self {
        StepError::Fatal(e)
    }
}

impl From<PcError> for StepError {
    fn from(e: PcError) -> Self {
        StepError::Fatal(NqError::Pc(e))
    }
}

struct Budget {
    start: Instant,
    time: Option<Duration>,
    memory: Option<u64>,
    last_class: usize,
}

impl Budget {
    fn check(&self) -> Result<(), NqError> {
        if let Some(t) = self.time {
            if self.start.elapsed() > t {
                return Err(NqError::Budget {
                    reason: format!("time budget of {:?}", t),
                    last_class: self.last_class,
                });
            }
        }
        if let (Some(m), Some(rss)) = (self.memory, resident_bytes()) {
            if rss > m {
                return Err(NqError::Budget {
                    reason: format!("memory budget of {} bytes", m),
                    last_class: self.last_class,
                });
            }
        }
        Ok(())
    }
}

fn resident_bytes() -> Option<u64> {
    let s = std::fs::read_to_string("/proc/self/statm").ok()?;
    let pages: u64 = s.split_whitespace().nth(1)?.parse().ok()?;
    Some(pages * 4096)
}

/// Computes the largest nilpotent quotient of the input, up to the class
/// bound when one is given.
pub fn nilpotent_quotient(input: &GroupInput, config: &NqConfig) -> Result<NqResult, NqError> {
    nilpotent_quotient_with(input, config, None, &mut |_| Ok(()))
}

/// Like [`nilpotent_quotient`], optionally resuming from an earlier partial
/// result and reporting every completed class to `on_class`.
pub fn nilpotent_quotient_with(
    input: &GroupInput,
    config: &NqConfig,
    resume: Option<NqResult>,
    on_class: &mut dyn FnMut(&NqResult) -> Result<(), NqError>,
) -> Result<NqResult, NqError> {
    input.validate()?;
    let mut strategy = config.strategy;
    loop {
        let mut cfg = config.clone();
        cfg.strategy = strategy;
        let start = if strategy == config.strategy {
            resume.clone()
        } else {
            None
        };
        match run(input, &cfg, start, on_class) {
            Err(StepError::LawFailsBelow) => {
                match strategy.escalate().filter(|_| config.escalate) {
                    Some(s) => strategy = s,
                    None => {
                        return Err(NqError::Internal(
                            "law instances insufficient at the strongest strategy".into(),
                        ))
                    }
                }
            }
            Err(StepError::Fatal(e)) => return Err(e),
            Ok(r) => return Ok(r),
        }
    }
}

fn run(
    input: &GroupInput,
    config: &NqConfig,
    resume: Option<NqResult>,
    on_class: &mut dyn FnMut(&NqResult) -> Result<(), NqError>,
) -> Result<NqResult, StepError> {
    let max_class = config.max_class.or(input.max_class);
    let mut budget = Budget {
        start: Instant::now(),
        time: config.time_budget,
        memory: config.memory_budget,
        last_class: 0,
    };
    let mut state = match resume {
        Some(r) if r.termination == Termination::Stabilized => return Ok(r),
        Some(r) => r,
        None => NqResult {
            presentation: PcPresentation::trivial(),
            images: vec![ExponentVector::identity(0); input.generators.len()],
            class_achieved: 0,
            termination: Termination::ReachedMaxClass,
            stats: Vec::new(),
            input: input.clone(),
        },
    };
    budget.last_class = state.class_achieved;
    loop {
        if max_class.is_some_and(|m| state.class_achieved >= m) {
            state.termination = Termination::ReachedMaxClass;
            return Ok(state);
        }
        budget.check()?;
        match extend_one_class(&state, input, config, &budget)? {
            StepOutcome::Stable(stats) => {
                state.stats.push(stats);
                state.termination = Termination::Stabilized;
                on_class(&state)?;
                return Ok(state);
            }
            StepOutcome::Extended(pres, images, stats) => {
                state.presentation = pres;
                state.images = images;
                state.class_achieved += 1;
                state.stats.push(stats);
                budget.last_class = state.class_achieved;
                if config.check_samples > 0 && config.escalate {
                    let seed = config.seed.wrapping_add(state.class_achieved as u64);
                    if verify_laws(&state, config.check_samples, seed)?.is_some() {
                        return Err(StepError::LawFailsBelow);
                    }
                }
                on_class(&state)?;
            }
        }
    }
}

fn build_cover(p: &PcPresentation, images: &[ExponentVector]) -> Result<Cover, NqError> {
    let n = p.len();
    let c = p.class();
    let defs = p.definitions();
    let defined_power: Vec<bool> = (0..n)
        .map(|i| defs.contains(&Some(Definition::Power(i))))
        .collect();
    let mut sources = Vec::new();
    for i in 0..n {
        if p.rel_order(i) != 0 && !defined_power[i] {
            sources.push(TailSource::Power(i));
        }
    }
    let defined_comm: std::collections::HashSet<(usize, usize)> = defs
        .iter()
        .filter_map(|d| match d {
            Some(Definition::Commutator { j, i }) => Some((*j, *i)),
            _ => None,
        })
        .collect();
    for j in 0..n {
        for i in 0..j {
            if p.weight(i) + p.weight(j) <= c + 1 && !defined_comm.contains(&(j, i)) {
                sources.push(TailSource::Comm { j, i });
            }
        }
    }
    for k in 0..images.len() {
        if !defs.contains(&Some(Definition::Image(k))) {
            sources.push(TailSource::Image(k));
        }
    }
    let m = sources.len();
    let mut weights = p.weights().to_vec();
    weights.extend(std::iter::repeat_n(c + 1, m));
    let mut b = PcBuilder::graded(weights);
    let mut image_tail = vec![None; images.len()];
    for i in 0..n {
        b.rel_orders[i] = p.rel_order(i);
        b.powers[i] = p.power(i).to_vec();
        b.definitions[i] = p.definition(i);
        for k in 0..i {
            b.comms[i][k] = p.comm(i, k).to_vec();
        }
    }
    for (t, s) in sources.iter().enumerate() {
        match *s {
            TailSource::Power(i) => b.powers[i].push((n + t, 1)),
            TailSource::Comm { j, i } => b.comms[j][i].push((n + t, 1)),
            TailSource::Image(k) => image_tail[k] = Some(n + t),
        }
    }
    let pres = b.build()?;
    let images = images
        .iter()
        .zip(image_tail)
        .map(|(img, tail)| {
            let mut v = img.as_slice().to_vec();
            v.resize(n + m, 0);
            if let Some(t) = tail {
                v[t] = 1;
            }
            ExponentVector::from_vec(v)
        })
        .collect();
    Ok(Cover {
        pres,
        n_old: n,
        sources,
        images,
    })
}

/// Tail part of a cover element that must lie in the tail subgroup.
fn tail_row(v: &ExponentVector, n_old: usize) -> Option<SparseRow> {
    if v.as_slice()[..n_old].iter().any(|&e| e != 0) {
        return None;
    }
    Some(
        v.as_slice()[n_old..]
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != 0)
            .map(|(c, e)| (c, BigInt::from(*e)))
            .collect(),
    )
}

fn extend_one_class(
    state: &NqResult,
    input: &GroupInput,
    config: &NqConfig,
    budget: &Budget,
) -> Result<StepOutcome, StepError> {
    let started = Instant::now();
    let p = &state.presentation;
    let c = state.class_achieved;
    let cover = build_cover(p, &state.images)?;
    let n = cover.n_old;
    let m = cover.sources.len();
    let mut stats = ClassStats {
        class: c + 1,
        tails: m,
        rows: 0,
        new_generators: 0,
        strategy: config.strategy,
        elapsed: Duration::ZERO,
    };
    if m == 0 {
        stats.elapsed = started.elapsed();
        return Ok(StepOutcome::Stable(stats));
    }
    let mut lattice = EchelonLattice::new(m);
    let mut rows = 0usize;
    let mut bad: Option<String> = None;
    cover.pres.for_each_test_word(true, &mut |t, lhs, rhs| {
        let diff: Vec<i64> = lhs
            .as_slice()
            .iter()
            .zip(rhs.as_slice())
            .map(|(a, b)| a - b)
            .collect();
        match tail_row(&ExponentVector::from_vec(diff), n) {
            Some(r) => {
                rows += 1;
                lattice.insert(r);
            }
            None => {
                if bad.is_none() {
                    bad = Some(format!("{:?}: {:?} vs {:?}", t, lhs, rhs));
                }
            }
        }
        Ok(())
    })?;
    if let Some(b) = bad {
        return Err(
            NqError::Internal(format!("class {} quotient is inconsistent: {}", c, b)).into(),
        );
    }
    budget.check()?;

    let table = &input.symbols;
    let image_of: HashMap<SymbolId, usize> = input
        .generators
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, k))
        .collect();
    for rel in &input.relators {
        let v = rel
            .expr
            .eval(&cover.pres, &mut |s| Ok(cover.images[image_of[&s]].clone()))?;
        match tail_row(&v, n) {
            Some(r) => {
                rows += 1;
                lattice.insert(r);
            }
            None => {
                return Err(
                    NqError::Internal(format!("relator fails in the class {} quotient", c)).into(),
                )
            }
        }
    }

    let zero_tail = |v: &ExponentVector| {
        let mut x = v.as_slice().to_vec();
        x.resize(n + m, 0);
        ExponentVector::from_vec(x)
    };
    for law in &input.laws {
        let vars: Vec<SymbolId> = law.variables.iter().copied().collect();
        let mut failure = false;
        let mut count = 0usize;
        for_each_instance(p, law, table, config.strategy, c, &mut |assignment| {
            count += 1;
            if count.is_multiple_of(64) {
                budget.check()?;
            }
            let lifted: HashMap<SymbolId, ExponentVector> = vars
                .iter()
                .zip(assignment)
                .map(|(&s, v)| (s, zero_tail(v)))
                .collect();
            let v = law.expr.eval(&cover.pres, &mut |s| {
                Ok(match lifted.get(&s) {
                    Some(x) => x.clone(),
                    None => cover.images[image_of[&s]].clone(),
                })
            })?;
            match tail_row(&v, n) {
                Some(r) => {
                    rows += 1;
                    lattice.insert(r);
                }
                None => failure = true,
            }
            Ok(())
        })
        .map_err(StepError::Fatal)?;
        if failure {
            return Err(StepError::LawFailsBelow);
        }
        for &s in &vars {
            let sigma = law.body.exponent_sum(s);
            if !sigma.is_zero() {
                for t in 0..m {
                    rows += 1;
                    lattice.insert(vec![(t, sigma.clone())]);
                }
            }
        }
    }
    budget.check()?;
    stats.rows = rows;

    let hnf = if config.torsion_free {
        let mat = saturate(&lattice.to_matrix());
        let mut l = EchelonLattice::new(m);
        for r in mat.row_vecs() {
            l.insert(
                r.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect(),
            );
        }
        l.into_hnf()
    } else {
        lattice.into_hnf()
    };

    // classify tail columns
    let mut new_index: Vec<Option<usize>> = vec![None; m];
    let mut orders = Vec::new();
    let mut defs = Vec::new();
    for col in 0..m {
        let eliminated = hnf.get(&col).is_some_and(|r| r[0].1.is_one());
        if !eliminated {
            new_index[col] = Some(n + orders.len());
            orders.push(hnf.get(&col).map_or(Ok(0), |r| to_i64(&r[0].1))?);
            defs.push(cover.sources[col].definition());
        }
    }
    let s = orders.len();
    stats.new_generators = s;
    if s == 0 {
        stats.elapsed = started.elapsed();
        return Ok(StepOutcome::Stable(stats));
    }
    // value of each tail as a word in the surviving generators
    let rest_word = |row: &SparseRow| -> Result<SparseWord, StepError> {
        row[1..]
            .iter()
            .map(|(c2, v)| {
                let g = new_index[*c2]
                    .ok_or_else(|| NqError::Internal("eliminated column above a pivot".into()))?;
                Ok((g, -to_i64(v)?))
            })
            .collect()
    };
    let mut tail_value: Vec<SparseWord> = Vec::with_capacity(m);
    for col in 0..m {
        tail_value.push(match new_index[col] {
            Some(g) => vec![(g, 1)],
            None => rest_word(&hnf[&col])?,
        });
    }

    let mut weights = p.weights().to_vec();
    weights.extend(std::iter::repeat_n(c + 1, s));
    let mut b = PcBuilder::graded(weights);
    for i in 0..n {
        b.rel_orders[i] = p.rel_order(i);
        b.powers[i] = p.power(i).to_vec();
        b.definitions[i] = p.definition(i);
        for k in 0..i {
            b.comms[i][k] = p.comm(i, k).to_vec();
        }
    }
    let mut image_extra: Vec<SparseWord> = vec![Vec::new(); state.images.len()];
    for (col, src) in cover.sources.iter().enumerate() {
        let val = tail_value[col].clone();
        match *src {
            TailSource::Power(i) => b.powers[i].extend(val),
            TailSource::Comm { j, i } => b.comms[j][i].extend(val),
            TailSource::Image(k) => image_extra[k] = val,
        }
    }
    for col in 0..m {
        if let Some(g) = new_index[col] {
            b.rel_orders[g] = orders[g - n];
            b.definitions[g] = Some(defs[g - n]);
            if orders[g - n] != 0 {
                b.powers[g] = rest_word(&hnf[&col])?;
            }
        }
    }
    let pres = b.build()?;
    let violations = pres.consistency_violations(true)?;
    if let Some(v) = violations.first() {
        return Err(NqError::Internal(format!(
            "class {} presentation inconsistent at {:?}",
            c + 1,
            v.test
        ))
        .into());
    }
    let mut images = Vec::with_capacity(state.images.len());
    for (img, extra) in state.images.iter().zip(&image_extra) {
        let mut w = img.to_sparse();
        w.extend(extra.iter().copied());
        images.push(pres.collect(&w)?);
    }
    stats.elapsed = started.elapsed();
    Ok(StepOutcome::Extended(pres, images, stats))
}

fn to_i64(v: &BigInt) -> Result<i64, NqError> {
    v.to_i64().ok_or(NqError::Pc(PcError::Overflow))
}

/// Lower bound on the weight of a law instance.
fn instance_weight(law: &Law, table: &SymbolTable, var_weight: &HashMap<SymbolId, usize>) -> usize {
    law.expr.min_weight(&|s| match table.kind(s) {
        SymbolKind::Generator => 1,
        SymbolKind::Variable => var_weight.get(&s).copied().unwrap_or(usize::MAX),
    })
}

fn support_weight(p: &PcPresentation, v: &ExponentVector) -> usize {
    v.leading().map_or(usize::MAX, |g| p.weight(g))
}

/// Calls `f` with every variable assignment (in the order of the law's
/// variables) that the strategy selects over the class-`class` quotient
/// `p`, skipping assignments whose instance has weight above `class + 1`.
pub fn for_each_instance(
    p: &PcPresentation,
    law: &Law,
    table: &SymbolTable,
    strategy: InstanceStrategy,
    class: usize,
    f: &mut dyn FnMut(&[ExponentVector]) -> Result<(), NqError>,
) -> Result<(), NqError> {
    let vars: Vec<SymbolId> = law.variables.iter().copied().collect();
    let k = vars.len();
    let n = p.len();
    let limit = class + 1;
    let keep = |assignment: &[ExponentVector]| {
        let w: HashMap<SymbolId, usize> = vars
            .iter()
            .zip(assignment)
            .map(|(&s, v)| (s, support_weight(p, v)))
            .collect();
        instance_weight(law, table, &w) <= limit
    };
    match strategy {
        InstanceStrategy::Generators | InstanceStrategy::GeneratorsPlusPairs => {
            let mut pool: Vec<ExponentVector> =
                (0..n).map(|g| ExponentVector::unit(n, g)).collect();
            if strategy == InstanceStrategy::GeneratorsPlusPairs {
                for i in 0..n {
                    for j in i..n {
                        pool.push(p.collect(&[(i, 1), (j, 1)])?);
                    }
                }
            }
            if pool.is_empty() {
                return Ok(());
            }
            let mut idx = vec![0usize; k];
            loop {
                let a: Vec<ExponentVector> = idx.iter().map(|&i| pool[i].clone()).collect();
                if keep(&a) {
                    f(&a)?;
                }
                let mut pos = k;
                loop {
                    if pos == 0 {
                        return Ok(());
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < pool.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        InstanceStrategy::WeightedBox => {
            let degree = limit.saturating_sub(law.shift(table));
            let slots = k * n;
            let mut e = vec![0i64; slots];
            let mut err = None;
            box_points(p, &mut e, 0, degree, &mut |e| {
                if err.is_some() {
                    return;
                }
                let res = (|| {
                    let mut a = Vec::with_capacity(k);
                    for v in 0..k {
                        let w: SparseWord = (0..n)
                            .filter(|&g| e[v * n + g] != 0)
                            .map(|g| (g, e[v * n + g]))
                            .collect();
                        a.push(p.collect(&w)?);
                    }
                    if keep(&a) {
                        f(&a)?;
                    }
                    Ok(())
                })();
                if let Err(x) = res {
                    err = Some(x);
                }
            });
            err.map_or(Ok(()), Err)
        }
    }
}

fn box_points(
    p: &PcPresentation,
    e: &mut [i64],
    slot: usize,
    room: usize,
    f: &mut dyn FnMut(&[i64]),
) {
    if slot == e.len() {
        f(e);
        return;
    }
    let n = p.len();
    let w = p.weight(slot % n);
    let mut k = 0;
    loop {
        e[slot] = k as i64;
        box_points(p, e, slot + 1, room - k * w, f);
        k += 1;
        if k * w > room {
            break;
        }
    }
    e[slot] = 0;
}

/// Collects the instance set as explicit assignments.
pub fn instance_set(
    p: &PcPresentation,
    law: &Law,
    table: &SymbolTable,
    strategy: InstanceStrategy,
    class: usize,
) -> Result<Vec<Vec<ExponentVector>>, NqError> {
    let mut out = Vec::new();
    for_each_instance(p, law, table, strategy, class, &mut |a| {
        out.push(a.to_vec());
        Ok(())
    })?;
    Ok(out)
}

/// A law instance or relator that fails in a computed quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Index into the relators when `law` is `None`.
    pub relator: Option<usize>,
    pub law: Option<usize>,
    pub assignment: Vec<(SymbolId, ExponentVector)>,
    pub value: ExponentVector,
}

/// Substitutes `samples` pseudo-random elements into every law and checks
/// every relator image. Returns the first failure.
pub fn verify_laws(
    r: &NqResult,
    samples: usize,
    seed: u64,
) -> Result<Option<Counterexample>, NqError> {
    let p = &r.presentation;
    let input = &r.input;
    let image_of: HashMap<SymbolId, usize> = input
        .generators
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, k))
        .collect();
    for (ri, rel) in input.relators.iter().enumerate() {
        let v = rel
            .expr
            .eval(p, &mut |s| Ok(r.images[image_of[&s]].clone()))?;
        if !v.is_identity() {
            return Ok(Some(Counterexample {
                relator: Some(ri),
                law: None,
                assignment: Vec::new(),
                value: v,
            }));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        for (li, law) in input.laws.iter().enumerate() {
            let mut assignment = BTreeMap::new();
            for &s in &law.variables {
                assignment.insert(s, p.random_element(&mut rng)?);
            }
            let v = law.expr.eval(p, &mut |s| {
                Ok(match assignment.get(&s) {
                    Some(x) => x.clone(),
                    None => r.images[image_of[&s]].clone(),
                })
            })?;
            if !v.is_identity() {
                return Ok(Some(Counterexample {
                    relator: None,
                    law: Some(li),
                    assignment: assignment.into_iter().collect(),
                    value: v,
                }));
            }
        }
    }
    Ok(None)
}

/// Image of an input word under the recorded epimorphism.
pub fn image_of_expr(r: &NqResult, expr: &crate::words::Expr) -> Result<ExponentVector, NqError> {
    let mut err = None;
    let v = expr.eval(&r.presentation, &mut |s| match r.input.generator_index(s) {
        Some(k) => Ok(r.images[k].clone()),
        None => {
            err = Some(NqError::Internal(format!(
                "`{}` is not a generator",
                r.input.symbols.name(s)
            )));
            Ok(r.presentation.identity())
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Expr, Relator, SymbolTable};

    pub(crate) fn input(
        gens: &[&str],
        vars: &[&str],
        laws: &[fn(&[SymbolId]) -> Expr],
    ) -> GroupInput {
        let mut symbols = SymbolTable::new();
        let generators: Vec<SymbolId> = gens
            .iter()
            .map(|g| symbols.declare(g, SymbolKind::Generator).unwrap())
            .collect();
        let variables: Vec<SymbolId> = vars
            .iter()
            .map(|v| symbols.declare(v, SymbolKind::Variable).unwrap())
            .collect();
        let mut all = generators.clone();
        all.extend(&variables);
        let laws = laws
            .iter()
            .map(|l| Law::new(l(&all), &symbols).unwrap())
            .collect();
        GroupInput {
            symbols,
            generators,
            variables,
            relators: Vec::new(),
            laws,
            max_class: None,
        }
    }

    fn layer_sizes(r: &NqResult) -> Vec<usize> {
        let p = &r.presentation;
        (1..=r.class_achieved)
            .map(|k| (0..p.len()).filter(|&g| p.weight(g) == k).count())
            .collect()
    }

    #[test]
    fn free_nilpotent_ranks_follow_witt() {
        for (rank, classes) in [(2usize, 6usize), (3, 4)] {
            let names: Vec<String> = (0..rank).map(|i| format!("a{}", i)).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let inp = input(&refs, &[], &[]);
            let cfg = NqConfig {
                max_class: Some(classes),
                ..Default::default()
            };
            let r = nilpotent_quotient(&inp, &cfg).unwrap();
            assert_eq!(r.termination, Termination::ReachedMaxClass);
            let expect: Vec<usize> = (1..=classes as u64)
                .map(|k| crate::oracle::witt(rank as u64, k) as usize)
                .collect();
            assert_eq!(layer_sizes(&r), expect);
            assert!(r.presentation.rel_orders().iter().all(|&m| m == 0));
        }
    }

    #[test]
    fn abelian_law_stabilizes_at_class_one() {
        let inp = input(
            &["a", "b"],
            &["y", "z"],
            &[|s| Expr::Comm(vec![Expr::Sym(s[2]), Expr::Sym(s[3])])],
        );
        let r = nilpotent_quotient(&inp, &NqConfig::default()).unwrap();
        assert_eq!(r.termination, Termination::Stabilized);
        assert_eq!(r.class_achieved, 1);
        assert_eq!(r.presentation.len(), 2);
        assert!(verify_laws(&r, 50, 3).unwrap().is_none());
    }

    #[test]
    fn relators_and_exponent_laws() {
        // <a, b | a^4, b^2, law x^2> is elementary abelian of order 4
        let mut inp = input(
            &["a", "b"],
            &["x"],
            &[|s| Expr::Power(Box::new(Expr::Sym(s[2])), BigInt::from(2))],
        );
        inp.relators.push(Relator::new(Expr::Power(
            Box::new(Expr::Sym(inp.generators[0])),
            BigInt::from(4),
        )));
        let r = nilpotent_quotient(&inp, &NqConfig::default()).unwrap();
        assert_eq!(r.termination, Termination::Stabilized);
        assert_eq!(r.presentation.rel_orders(), &[2, 2]);

        // exponent 3 on two generators: order 27, class 2
        let inp = input(
            &["a", "b"],
            &["x"],
            &[|s| Expr::Power(Box::new(Expr::Sym(s[2])), BigInt::from(3))],
        );
        let r = nilpotent_quotient(&inp, &NqConfig::default()).unwrap();
        assert_eq!(r.termination, Termination::Stabilized);
        assert_eq!(r.class_achieved, 2);
        assert_eq!(r.presentation.rel_orders(), &[3, 3, 3]);
        assert!(verify_laws(&r, 100, 9).unwrap().is_none());
    }

    #[test]
    fn empty_input_is_trivial() {
        let inp = input(&[], &[], &[]);
        let r = nilpotent_quotient(&inp, &NqConfig::default()).unwrap();
        assert_eq!(r.class_achieved, 0);
        assert_eq!(r.termination, Termination::Stabilized);
        assert!(r.presentation.is_empty());
    }

    #[test]
    fn instance_enumeration() {
        let inp = input(
            &["a", "b"],
            &["x"],
            &[|s| {
                Expr::Comm(vec![
                    Expr::Sym(s[0]),
                    Expr::Sym(s[2]),
                    Expr::Sym(s[2]),
                    Expr::Sym(s[2]),
                    Expr::Sym(s[2]),
                ])
            }],
        );
        let cfg = NqConfig {
            max_class: Some(1),
            ..Default::default()
        };
        let r = nilpotent_quotient(&inp, &cfg).unwrap();
        let law = &inp.laws[0];
        let set = instance_set(
            &r.presentation,
            law,
            &inp.symbols,
            InstanceStrategy::Generators,
            100,
        )
        .unwrap();
        assert_eq!(
            set,
            vec![
                vec![ExponentVector::unit(2, 0)],
                vec![ExponentVector::unit(2, 1)]
            ]
        );
        // weight pruning: 1 + 4 * 1 = 5 exceeds 4
        let set = instance_set(
            &r.presentation,
            law,
            &inp.symbols,
            InstanceStrategy::Generators,
            3,
        )
        .unwrap();
        assert!(set.is_empty());

        let two = input(
            &["a", "b", "c"],
            &["y", "z"],
            &[|s| Expr::Comm(vec![Expr::Sym(s[3]), Expr::Sym(s[4])])],
        );
        let r = nilpotent_quotient(&two, &cfg).unwrap();
        let set = instance_set(
            &r.presentation,
            &two.laws[0],
            &two.symbols,
            InstanceStrategy::Generators,
            10,
        )
        .unwrap();
        assert_eq!(set.len(), 9);
    }
}
