//! Persistent result documents.
//!
//! Documents are JSON objects with sorted keys. Every integer is written as
//! a decimal string and every relation word as a list of `"index:exponent"`
//! strings, so files compare cleanly with text tools.

use std::path::Path;
use std::time::Duration;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::analysis::lower_central_data;
use crate::error::DocError;
use crate::nq::{ClassStats, InstanceStrategy, NqConfig, NqResult, Termination};
use crate::parse::{format_input, parse_input};
use crate::pcpres::{Definition, ExponentVector, PcBuilder, PcPresentation, SparseWord};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Settings recorded with a result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigEcho {
    pub max_class: Option<usize>,
    pub strategy: InstanceStrategy,
    pub escalate: bool,
    pub verify_samples: usize,
    pub seed: u64,
    pub time_budget_ms: Option<u64>,
    pub memory_budget: Option<u64>,
    pub torsion_free: bool,
}

impl ConfigEcho {
    pub fn from_config(c: &NqConfig, verify_samples: usize) -> Self {
        ConfigEcho {
            max_class: c.max_class,
            strategy: c.strategy,
            escalate: c.escalate,
            verify_samples,
            seed: c.seed,
            time_budget_ms: c.time_budget.map(|d| d.as_millis() as u64),
            memory_budget: c.memory_budget,
            torsion_free: c.torsion_free,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerRow {
    pub weight: usize,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRow {
    pub class: usize,
    pub tails: usize,
    pub rows: usize,
    pub new_generators: usize,
    pub strategy: InstanceStrategy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultDocument {
    pub engine_version: String,
    pub config: ConfigEcho,
    /// Normalized input text.
    pub input: String,
    pub presentation: PcPresentation,
    pub images: Vec<ExponentVector>,
    pub class_achieved: usize,
    pub termination: Termination,
    pub layers: Vec<LayerRow>,
    pub classes: Vec<ClassRow>,
    /// Description of a failed law or relator check.
    pub counterexample: Option<String>,
    /// Milliseconds spent on each class; absent unless requested.
    pub timings_ms: Option<Vec<u64>>,
}

impl ResultDocument {
    pub fn from_result(r: &NqResult, config: ConfigEcho, timings: bool) -> Result<Self, DocError> {
        let layers = match lower_central_data(&r.presentation) {
            Ok(l) => l
                .layers
                .iter()
                .map(|l| LayerRow {
                    weight: l.weight,
                    free_rank: l.invariants.free_rank,
                    torsion: l.invariants.torsion.clone(),
                })
                .collect(),
            Err(e) => return Err(DocError::Malformed(e.to_string())),
        };
        Ok(ResultDocument {
            engine_version: ENGINE_VERSION.to_string(),
            config,
            input: format_input(&r.input),
            presentation: r.presentation.clone(),
            images: r.images.clone(),
            class_achieved: r.class_achieved,
            termination: r.termination,
            layers,
            classes: r
                .stats
                .iter()
                .map(|s| ClassRow {
                    class: s.class,
                    tails: s.tails,
                    rows: s.rows,
                    new_generators: s.new_generators,
                    strategy: s.strategy,
                })
                .collect(),
            counterexample: None,
            timings_ms: timings.then(|| {
                r.stats
                    .iter()
                    .map(|s| s.elapsed.as_millis() as u64)
                    .collect()
            }),
        })
    }

    /// Rebuilds the engine state, e.g. to resume or to answer queries.
    pub fn to_result(&self) -> Result<NqResult, DocError> {
        let input = parse_input(&self.input)?;
        let stats = self
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| ClassStats {
                class: c.class,
                tails: c.tails,
                rows: c.rows,
                new_generators: c.new_generators,
                strategy: c.strategy,
                elapsed: Duration::from_millis(
                    self.timings_ms
                        .as_ref()
                        .and_then(|t| t.get(i))
                        .copied()
                        .unwrap_or(0),
                ),
            })
            .collect();
        Ok(NqResult {
            presentation: self.presentation.clone(),
            images: self.images.clone(),
            class_achieved: self.class_achieved,
            termination: self.termination,
            stats,
            input,
        })
    }

    pub fn to_json(&self) -> Value {
        let p = &self.presentation;
        let generators: Vec<Value> = (0..p.len())
            .map(|g| {
                json!({
                    "weight": int(p.weight(g)),
                    "rel_order": int(p.rel_order(g)),
                    "power": word_json(p.power(g)),
                    "definition": p.definition(g).map(definition_str),
                })
            })
            .collect();
        let mut comms = Vec::new();
        for j in 0..p.len() {
            for i in 0..j {
                if !p.comm(j, i).is_empty() {
                    comms
                        .push(json!({ "j": int(j), "i": int(i), "word": word_json(p.comm(j, i)) }));
                }
            }
        }
        let c = &self.config;
        json!({
            "engine_version": self.engine_version,
            "config": {
                "max_class": c.max_class.map(int),
                "strategy": c.strategy.name(),
                "escalate": c.escalate,
                "verify_samples": int(c.verify_samples),
                "seed": int(c.seed),
                "time_budget_ms": c.time_budget_ms.map(int),
                "memory_budget": c.memory_budget.map(int),
                "torsion_free": c.torsion_free,
            },
            "input": self.input,
            "presentation": {
                "graded": p.is_graded(),
                "generators": generators,
                "commutators": comms,
            },
            "images": self.images.iter().map(|v| word_json(&v.to_sparse())).collect::<Vec<_>>(),
            "class_achieved": int(self.class_achieved),
            "termination": self.termination.name(),
            "layers": self.layers.iter().map(|l| json!({
                "weight": int(l.weight),
                "free_rank": int(l.free_rank),
                "torsion": l.torsion.iter().map(int).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "classes": self.classes.iter().map(|c| json!({
                "class": int(c.class),
                "tails": int(c.tails),
                "rows": int(c.rows),
                "new_generators": int(c.new_generators),
                "strategy": c.strategy.name(),
            })).collect::<Vec<_>>(),
            "counterexample": self.counterexample,
            "timings_ms": self.timings_ms.as_ref().map(|t| t.iter().map(int).collect::<Vec<_>>()),
        })
    }

    pub fn to_string_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(v: &Value) -> Result<Self, DocError> {
        let o = obj(v, "document")?;
        let c = obj(field(o, "config")?, "config")?;
        let strategy_name = string(field(c, "strategy")?, "strategy")?;
        let config = ConfigEcho {
            max_class: opt(field(c, "max_class")?, |v| num(v, "max_class"))?,
            strategy: InstanceStrategy::from_name(strategy_name)
                .ok_or_else(|| malformed(format!("unknown strategy `{}`", strategy_name)))?,
            escalate: boolean(field(c, "escalate")?, "escalate")?,
            verify_samples: num(field(c, "verify_samples")?, "verify_samples")?,
            seed: num(field(c, "seed")?, "seed")?,
            time_budget_ms: opt(field(c, "time_budget_ms")?, |v| num(v, "time_budget_ms"))?,
            memory_budget: opt(field(c, "memory_budget")?, |v| num(v, "memory_budget"))?,
            torsion_free: boolean(field(c, "torsion_free")?, "torsion_free")?,
        };

        let po = obj(field(o, "presentation")?, "presentation")?;
        let graded = boolean(field(po, "graded")?, "graded")?;
        let gens = arr(field(po, "generators")?, "generators")?;
        let n = gens.len();
        let mut b = if graded {
            PcBuilder::graded(vec![1; n])
        } else {
            PcBuilder::ungraded(n)
        };
        for (g, gv) in gens.iter().enumerate() {
            let go = obj(gv, "generator")?;
            b.weights[g] = num(field(go, "weight")?, "weight")?;
            b.rel_orders[g] = num(field(go, "rel_order")?, "rel_order")?;
            b.powers[g] = word(field(go, "power")?)?;
            b.definitions[g] = opt(field(go, "definition")?, parse_definition)?;
        }
        for cv in arr(field(po, "commutators")?, "commutators")? {
            let co = obj(cv, "commutator")?;
            let j: usize = num(field(co, "j")?, "j")?;
            let i: usize = num(field(co, "i")?, "i")?;
            if i >= j || j >= n {
                return Err(malformed(format!("commutator index pair ({}, {})", j, i)));
            }
            b.comms[j][i] = word(field(co, "word")?)?;
        }
        let presentation = b.build()?;
        let images = arr(field(o, "images")?, "images")?
            .iter()
            .map(|w| Ok(ExponentVector::from_sparse(n, &word(w)?)))
            .collect::<Result<Vec<_>, DocError>>()?;
        let termination = match string(field(o, "termination")?, "termination")? {
            "stabilized" => Termination::Stabilized,
            "reached_max_class" => Termination::ReachedMaxClass,
            t => return Err(malformed(format!("unknown termination `{}`", t))),
        };
        let layers = arr(field(o, "layers")?, "layers")?
            .iter()
            .map(|l| {
                let lo = obj(l, "layer")?;
                Ok(LayerRow {
                    weight: num(field(lo, "weight")?, "weight")?,
                    free_rank: num(field(lo, "free_rank")?, "free_rank")?,
                    torsion: arr(field(lo, "torsion")?, "torsion")?
                        .iter()
                        .map(bigint)
                        .collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<Vec<_>, DocError>>()?;
        let classes = arr(field(o, "classes")?, "classes")?
            .iter()
            .map(|c| {
                let co = obj(c, "class")?;
                let s = string(field(co, "strategy")?, "strategy")?;
                Ok(ClassRow {
                    class: num(field(co, "class")?, "class")?,
                    tails: num(field(co, "tails")?, "tails")?,
                    rows: num(field(co, "rows")?, "rows")?,
                    new_generators: num(field(co, "new_generators")?, "new_generators")?,
                    strategy: InstanceStrategy::from_name(s)
                        .ok_or_else(|| malformed(format!("unknown strategy `{}`", s)))?,
                })
            })
            .collect::<Result<Vec<_>, DocError>>()?;
        let timings_ms = opt(field(o, "timings_ms")?, |t| {
            arr(t, "timings_ms")?
                .iter()
                .map(|x| num(x, "timing"))
                .collect::<Result<Vec<u64>, _>>()
        })?;
        Ok(ResultDocument {
            engine_version: string(field(o, "engine_version")?, "engine_version")?.to_string(),
            config,
            input: string(field(o, "input")?, "input")?.to_string(),
            presentation,
            images,
            class_achieved: num(field(o, "class_achieved")?, "class_achieved")?,
            termination,
            layers,
            classes,
            counterexample: opt(field(o, "counterexample")?, |v| {
                Ok(string(v, "counterexample")?.to_string())
            })?,
            timings_ms,
        })
    }

    pub fn parse(text: &str) -> Result<Self, DocError> {
        Self::from_json(&serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, DocError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Writes to a temporary file next to `path` and renames it into place.
    pub fn write_atomic(&self, path: &Path) -> Result<(), DocError> {
        let dir = path
            .parent()
            .filter(|d| !d.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        let name = path
            .file_name()
            .ok_or_else(|| malformed(format!("bad output path {}", path.display())))?;
        let tmp = dir.join(format!(
            ".{}.tmp{}",
            name.to_string_lossy(),
            std::process::id()
        ));
        std::fs::write(&tmp, self.to_string_pretty())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

fn int<T: ToString>(x: T) -> Value {
    Value::String(x.to_string())
}

fn word_json(w: &[(usize, i64)]) -> Value {
    Value::Array(
        w.iter()
            .map(|(g, e)| Value::String(format!("{}:{}", g, e)))
            .collect(),
    )
}

fn definition_str(d: Definition) -> String {
    match d {
        Definition::Image(k) => format!("image:{}", k),
        Definition::Commutator { j, i } => format!("commutator:{},{}", j, i),
        Definition::Power(i) => format!("power:{}", i),
    }
}

fn parse_definition(v: &Value) -> Result<Definition, DocError> {
    let s = string(v, "definition")?;
    let bad = || malformed(format!("definition `{}`", s));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let idx = |t: &str| t.parse::<usize>().map_err(|_| bad());
    match kind {
        "image" => Ok(Definition::Image(idx(rest)?)),
        "power" => Ok(Definition::Power(idx(rest)?)),
        "commutator" => {
            let (j, i) = rest.split_once(',').ok_or_else(bad)?;
            Ok(Definition::Commutator {
                j: idx(j)?,
                i: idx(i)?,
            })
        }
        _ => Err(bad()),
    }
}

fn malformed(msg: String) -> DocError {
    DocError::Malformed(msg)
}

fn field<'v>(o: &'v Map<String, Value>, key: &str) -> Result<&'v Value, DocError> {
    o.get(key)
        .ok_or_else(|| malformed(format!("missing field `{}`", key)))
}

fn obj<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>, DocError> {
    v.as_object()
        .ok_or_else(|| malformed(format!("{} must be an object", what)))
}

fn arr<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>, DocError> {
    v.as_array()
        .ok_or_else(|| malformed(format!("{} must be an array", what)))
}

fn string<'v>(v: &'v Value, what: &str) -> Result<&'v str, DocError> {
    v.as_str()
        .ok_or_else(|| malformed(format!("{} must be a string", what)))
}

fn boolean(v: &Value, what: &str) -> Result<bool, DocError> {
    v.as_bool()
        .ok_or_else(|| malformed(format!("{} must be a boolean", what)))
}

fn num<T: std::str::FromStr>(v: &Value, what: &str) -> Result<T, DocError> {
    let s = string(v, what)?;
    s.parse()
        .map_err(|_| malformed(format!("{} `{}` is not a valid integer", what, s)))
}

fn bigint(v: &Value) -> Result<BigInt, DocError> {
    num(v, "integer")
}

fn opt<T>(v: &Value, f: impl FnOnce(&Value) -> Result<T, DocError>) -> Result<Option<T>, DocError> {
    if v.is_null() {
        Ok(None)
    } else {
        f(v).map(Some)
    }
}

fn word(v: &Value) -> Result<SparseWord, DocError> {
    arr(v, "word")?
        .iter()
        .map(|x| {
            let s = string(x, "letter")?;
            let (g, e) = s
                .split_once(':')
                .ok_or_else(|| malformed(format!("letter `{}`", s)))?;
            let g = g
                .parse()
                .map_err(|_| malformed(format!("letter `{}`", s)))?;
            let e = e
                .parse()
                .map_err(|_| malformed(format!("letter `{}`", s)))?;
            Ok((g, e))
        })
        .collect()
}
