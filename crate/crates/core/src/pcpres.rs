//! Weighted nilpotent polycyclic presentations and collection from the left.
//!
//! Generators `g_0 .. g_{n-1}` carry nondecreasing weights. Relations are
//!
//! * `g_i^{m_i} = w_i` for every generator of finite relative order `m_i`,
//!   with `w_i` a normal word in generators of index `> i`;
//! * `[g_j, g_i] = c_ji` for `i < j`, with `c_ji` a normal word in
//!   generators of index `> j`.
//!
//! In a weight-graded presentation the generators of weight `>= k` generate
//! the `k`-th term of the lower central series, and two generators whose
//! weights sum past the class commute. The collector uses that to move
//! only the part of the collected prefix that fails to commute.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::PcError;
use crate::words::GroupOps;

/// A normal word stored sparsely: `(generator, exponent)` with increasing
/// generators and nonzero exponents.
pub type SparseWord = Vec<(usize, i64)>;

/// Normal form of an element: one exponent per pc generator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExponentVector(Vec<i64>);

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl ExponentVector {
    pub fn identity(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn from_vec(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }

    pub fn unit(n: usize, g: usize) -> Self {
        let mut v = vec![0; n];
        v[g] = 1;
        ExponentVector(v)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn leading(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0)
    }

    pub fn to_sparse(&self) -> SparseWord {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != 0)
            .map(|(g, e)| (g, *e))
            .collect()
    }

    pub fn from_sparse(n: usize, w: &[(usize, i64)]) -> Self {
        let mut v = vec![0; n];
        for &(g, e) in w {
            v[g] += e;
        }
        ExponentVector(v)
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

/// How a generator entered the presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Definition {
    /// Image of the input generator with this index.
    Image(usize),
    /// Defined by the relation `[g_j, g_i]`.
    Commutator { j: usize, i: usize },
    /// Defined by the power relation of `g_i`.
    Power(usize),
}

/// Raw relation data of a presentation; becomes a [`PcPresentation`] once
/// validated and its collection tables are built.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PcBuilder {
    pub weights: Vec<usize>,
    /// 0 means infinite.
    pub rel_orders: Vec<i64>,
    pub powers: Vec<SparseWord>,
    /// `comms[j][i]` for `i < j` holds `[g_j, g_i]`.
    pub comms: Vec<Vec<SparseWord>>,
    pub definitions: Vec<Option<Definition>>,
    pub graded: bool,
}

impl PcBuilder {
    /// Graded draft with the given weights and every relation trivial.
    pub fn graded(weights: Vec<usize>) -> Self {
        let n = weights.len();
        PcBuilder {
            weights,
            rel_orders: vec![0; n],
            powers: vec![Vec::new(); n],
            comms: (0..n).map(|j| vec![Vec::new(); j]).collect(),
            definitions: vec![None; n],
            graded: true,
        }
    }

    /// Draft without a lower-central grading; nothing is assumed to commute.
    pub fn ungraded(n: usize) -> Self {
        let mut b = PcBuilder::graded(vec![1; n]);
        b.graded = false;
        b
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn set_power(&mut self, i: usize, order: i64, rhs: SparseWord) -> &mut Self {
        self.rel_orders[i] = order;
        self.powers[i] = rhs;
        self
    }

    pub fn set_comm(&mut self, j: usize, i: usize, rhs: SparseWord) -> &mut Self {
        self.comms[j][i] = rhs;
        self
    }

    pub fn build(self) -> Result<PcPresentation, PcError> {
        PcPresentation::from_builder(self)
    }
}

/// Derived data used by the collector.
#[derive(Clone, Debug, Default)]
struct Tables {
    /// `conj[j][i] = g_j^{g_i}` for `i < j < central_from`.
    conj: Vec<Vec<SparseWord>>,
    /// `conj_inv[j][i] = g_j^{g_i^{-1}}`.
    conj_inv: Vec<Vec<SparseWord>>,
    /// Exclusive bound of the generators that may fail to commute with `g_i`.
    move_end: Vec<usize>,
    central_from: usize,
}

#[derive(Clone, Debug)]
pub struct PcPresentation {
    raw: PcBuilder,
    class_bound: usize,
    tables: Tables,
    step_limit: u64,
}

impl PartialEq for PcPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw
    }
}

impl Eq for PcPresentation {}

enum Frame<'a> {
    Single {
        g: usize,
        e: i64,
    },
    Word {
        w: &'a [(usize, i64)],
        pos: usize,
        reps: i64,
        inv: bool,
    },
    /// `w^mul` for a word whose letters commute pairwise.
    Scaled {
        w: &'a [(usize, i64)],
        pos: usize,
        mul: i64,
    },
    Owned {
        w: SparseWord,
        pos: usize,
    },
}

/// Central parts of conjugation words still owed to the vector, counted per `(k, g, sign)`.
#[derive(Default)]
struct Pending {
    counts: Vec<i64>,
    touched: Vec<usize>,
    /// Bound past which no non-central entry of the vector is nonzero.
    top: usize,
}

thread_local! {
    static PENDING_POOL: std::cell::RefCell<Vec<Pending>> = const { std::cell::RefCell::new(Vec::new()) };
}

struct Ctx<'a> {
    rel_orders: &'a [i64],
    powers: &'a [SparseWord],
    conj: &'a [Vec<SparseWord>],
    conj_inv: &'a [Vec<SparseWord>],
    move_end: &'a [usize],
    weights: &'a [usize],
    class_bound: usize,
    central_from: usize,
    step_limit: u64,
}

impl<'a> Ctx<'a> {
    fn run(&self, v: &mut [i64], stack: &mut Vec<Frame<'a>>) -> Result<(), PcError> {
        let mut steps: u64 = 0;
        let mut pending = PENDING_POOL
            .with(|p| p.borrow_mut().pop())
            .unwrap_or_default();
        pending.top = v[..self.central_from]
            .iter()
            .rposition(|&x| x != 0)
            .map_or(0, |i| i + 1);
        let mut result = Ok(());
        loop {
            if let Err(e) = self.drain(v, stack, &mut steps, &mut pending) {
                result = Err(e);
                break;
            }
            if pending.touched.is_empty() {
                break;
            }
            if let Err(e) = self.flush(v, stack, &mut pending) {
                result = Err(e);
                break;
            }
        }
        for idx in pending.touched.drain(..) {
            pending.counts[idx] = 0;
        }
        if result.is_ok() {
            result = self.reduce_central(v);
        }
        PENDING_POOL.with(|p| p.borrow_mut().push(pending));
        result
    }

    fn flush(
        &self,
        v: &mut [i64],
        stack: &mut Vec<Frame<'a>>,
        pending: &mut Pending,
    ) -> Result<(), PcError> {
        let cf = self.central_from;
        for idx in std::mem::take(&mut pending.touched) {
            let q = std::mem::take(&mut pending.counts[idx]);
            if q == 0 {
                continue;
            }
            let table = if idx % 2 == 0 {
                self.conj
            } else {
                self.conj_inv
            };
            let w = &table[idx / 2 / cf][idx / 2 % cf];
            let cut = w.partition_point(|&(l, _)| l < cf);
            for &(l, x) in &w[cut..] {
                self.add(v, l, x.checked_mul(q).ok_or(PcError::Overflow)?, stack)?;
            }
        }
        Ok(())
    }

    fn drain(
        &self,
        v: &mut [i64],
        stack: &mut Vec<Frame<'a>>,
        steps: &mut u64,
        pending: &mut Pending,
    ) -> Result<(), PcError> {
        while let Some(top) = stack.last_mut() {
            let (g, e) = match top {
                Frame::Single { g, e } => {
                    let r = (*g, *e);
                    stack.pop();
                    r
                }
                Frame::Word { w, pos, reps, inv } => {
                    let (g, e) = if *inv {
                        let (g, e) = w[w.len() - 1 - *pos];
                        (g, -e)
                    } else {
                        w[*pos]
                    };
                    *pos += 1;
                    if *pos == w.len() {
                        *pos = 0;
                        *reps -= 1;
                        if *reps == 0 {
                            stack.pop();
                        }
                    }
                    (g, e)
                }
                Frame::Scaled { w, pos, mul } => {
                    let (g, e) = w[*pos];
                    let e = e.checked_mul(*mul).ok_or(PcError::Overflow)?;
                    *pos += 1;
                    if *pos == w.len() {
                        stack.pop();
                    }
                    (g, e)
                }
                Frame::Owned { w, pos } => {
                    let (g, e) = w[*pos];
                    *pos += 1;
                    if *pos == w.len() {
                        stack.pop();
                    }
                    (g, e)
                }
            };
            if e == 0 {
                continue;
            }
            *steps += 1;
            if *steps > self.step_limit {
                return Err(PcError::CollectionLimit);
            }
            self.apply(v, g, e, stack, pending)?;
        }
        Ok(())
    }

    #[inline]
    fn apply(
        &self,
        v: &mut [i64],
        g: usize,
        e: i64,
        stack: &mut Vec<Frame<'a>>,
        pending: &mut Pending,
    ) -> Result<(), PcError> {
        if g >= self.central_from {
            return self.add(v, g, e, stack);
        }
        let end = self.move_end[g].min(pending.top);
        pending.top = pending.top.max(g + 1);
        let Some(start) = (g + 1..end).find(|&k| v[k] != 0) else {
            return self.add(v, g, e, stack);
        };
        if end == pending.top {
            pending.top = g + 1;
        }
        let s = e.signum();
        if e != s {
            stack.push(Frame::Single { g, e: e - s });
        }
        let table = if s > 0 { self.conj } else { self.conj_inv };
        let cf = self.central_from;
        if pending.counts.len() < 2 * cf * cf {
            pending.counts.resize(2 * cf * cf, 0);
        }
        for k in (start..end).rev() {
            let a = v[k];
            if a != 0 {
                v[k] = 0;
                let w = &table[k][g];
                let cut = w.partition_point(|&(l, _)| l < cf);
                if cut < w.len() {
                    let idx = 2 * (k * cf + g) + usize::from(s < 0);
                    let c = &mut pending.counts[idx];
                    if *c == 0 {
                        pending.touched.push(idx);
                    }
                    *c = c.checked_add(a).ok_or(PcError::Overflow)?;
                }
                let w = &w[..cut];
                if cut == 1 && w[0] == (k, 1) {
                    stack.push(Frame::Single { g: k, e: a });
                } else if 2 * self.weights[k] + self.weights[g] > self.class_bound {
                    // g_k commutes with its commutator, and those letters pairwise
                    stack.push(Frame::Scaled { w, pos: 0, mul: a });
                } else {
                    self.push_power(stack, w, a)?;
                }
            }
        }
        self.add(v, g, s, stack)
    }

    /// Central exponents are left unreduced during collection; this brings them into range.
    fn reduce_central(&self, v: &mut [i64]) -> Result<(), PcError> {
        for g in self.central_from..v.len() {
            let m = self.rel_orders[g];
            if m != 0 && !(0..m).contains(&v[g]) {
                let q = v[g].div_euclid(m);
                v[g] = v[g].rem_euclid(m);
                for &(l, x) in &self.powers[g] {
                    let d = x.checked_mul(q).ok_or(PcError::Overflow)?;
                    v[l] = v[l].checked_add(d).ok_or(PcError::Overflow)?;
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn add(
        &self,
        v: &mut [i64],
        g: usize,
        e: i64,
        stack: &mut Vec<Frame<'a>>,
    ) -> Result<(), PcError> {
        if g >= self.central_from {
            v[g] = match v[g].checked_add(e) {
                Some(x) => x,
                None => {
                    self.reduce_central(v)?;
                    v[g].checked_add(e).ok_or(PcError::Overflow)?
                }
            };
            return Ok(());
        }
        let x = v[g].checked_add(e).ok_or(PcError::Overflow)?;
        let m = self.rel_orders[g];
        if m != 0 && !(0..m).contains(&x) {
            let q = x.div_euclid(m);
            v[g] = x.rem_euclid(m);
            let w = &self.powers[g];
            if w.is_empty() {
                // trivial power relation
            } else if 2 * self.weights[g] > self.class_bound {
                stack.push(Frame::Scaled { w, pos: 0, mul: q });
            } else {
                self.push_power(stack, w, q)?;
            }
        } else {
            v[g] = x;
        }
        Ok(())
    }

    /// Pushes `w^q`; long powers are evaluated by repeated squaring first.
    fn push_power(
        &self,
        stack: &mut Vec<Frame<'a>>,
        w: &'a [(usize, i64)],
        q: i64,
    ) -> Result<(), PcError> {
        if q.abs() <= 2 {
            stack.push(Frame::Word {
                w,
                pos: 0,
                reps: q.abs(),
                inv: q < 0,
            });
            return Ok(());
        }
        let n = self.rel_orders.len();
        let mut base = vec![0; n];
        let start: SparseWord = if q > 0 {
            w.to_vec()
        } else {
            w.iter().rev().map(|&(g, e)| (g, -e)).collect()
        };
        self.collect_owned(&mut base, start)?;
        let mut acc = vec![0; n];
        let mut k = q.unsigned_abs();
        loop {
            if k & 1 == 1 {
                self.collect_owned(&mut acc, trim(&base))?;
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            let b = trim(&base);
            self.collect_owned(&mut base, b)?;
        }
        let out = trim(&acc);
        if !out.is_empty() {
            stack.push(Frame::Owned { w: out, pos: 0 });
        }
        Ok(())
    }

    fn collect_owned(&self, v: &mut [i64], word: SparseWord) -> Result<(), PcError> {
        if word.is_empty() {
            return Ok(());
        }
        let mut stack = vec![Frame::Owned { w: word, pos: 0 }];
        self.run(v, &mut stack)
    }

    fn collect(&self, v: &mut [i64], word: &'a [(usize, i64)]) -> Result<(), PcError> {
        if word.is_empty() {
            return Ok(());
        }
        let mut stack = vec![Frame::Word {
            w: word,
            pos: 0,
            reps: 1,
            inv: false,
        }];
        self.run(v, &mut stack)
    }
}

fn trim(v: &[i64]) -> SparseWord {
    v.iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(g, e)| (g, *e))
        .collect()
}

const DEFAULT_STEP_LIMIT: u64 = 1 << 40;

impl PcPresentation {
    /// The trivial group.
    pub fn trivial() -> Self {
        PcBuilder::graded(Vec::new())
            .build()
            .expect("trivial presentation")
    }

    fn from_builder(mut raw: PcBuilder) -> Result<Self, PcError> {
        let n = raw.weights.len();
        for (name, len) in [
            ("rel_orders", raw.rel_orders.len()),
            ("powers", raw.powers.len()),
            ("comms", raw.comms.len()),
            ("definitions", raw.definitions.len()),
        ] {
            if len != n {
                return Err(PcError::Malformed(format!(
                    "{} has length {}, expected {}",
                    name, len, n
                )));
            }
        }
        if raw.weights.windows(2).any(|w| w[0] > w[1]) {
            return Err(PcError::Malformed("weights must be nondecreasing".into()));
        }
        if raw.weights.contains(&0) {
            return Err(PcError::Malformed("weights must be positive".into()));
        }
        for i in 0..n {
            let m = raw.rel_orders[i];
            if m < 0 || m == 1 {
                return Err(PcError::Malformed(format!(
                    "relative order {} of generator {}",
                    m, i
                )));
            }
            if m == 0 && !raw.powers[i].is_empty() {
                return Err(PcError::Malformed(format!(
                    "power relation on infinite generator {}",
                    i
                )));
            }
            check_word(&raw.powers[i], i, n)?;
            if raw.comms[i].len() != i {
                return Err(PcError::Malformed(format!(
                    "commutator row {} has wrong length",
                    i
                )));
            }
            for c in &raw.comms[i] {
                check_word(c, i, n)?;
            }
        }
        let class_bound = if raw.graded {
            raw.weights.last().copied().unwrap_or(0)
        } else {
            usize::MAX / 4
        };
        if raw.graded {
            for j in 0..n {
                for i in 0..j {
                    let need = raw.weights[i] + raw.weights[j];
                    let c = &raw.comms[j][i];
                    if need > class_bound && !c.is_empty() {
                        return Err(PcError::Ungraded(format!(
                            "[g{}, g{}] must be trivial",
                            j, i
                        )));
                    }
                    if let Some(&(g, _)) = c.iter().find(|&&(g, _)| raw.weights[g] < need) {
                        return Err(PcError::Ungraded(format!(
                            "[g{}, g{}] involves g{} of low weight",
                            j, i, g
                        )));
                    }
                }
                if let Some(&(g, _)) = raw.powers[j]
                    .iter()
                    .find(|&&(g, _)| raw.weights[g] < raw.weights[j])
                {
                    return Err(PcError::Ungraded(format!(
                        "power of g{} involves g{} of lower weight",
                        j, g
                    )));
                }
            }
        }
        let mut p = PcPresentation {
            raw: raw.clone(),
            class_bound,
            tables: Tables::default(),
            step_limit: DEFAULT_STEP_LIMIT,
        };
        p.build_tables()?;
        // bring relation words into normal form
        let mut changed = false;
        for i in 0..n {
            if !p.is_normal(&raw.powers[i]) {
                raw.powers[i] = p.collect(&raw.powers[i])?.to_sparse();
                changed = true;
            }
            for k in 0..i {
                if !p.is_normal(&raw.comms[i][k]) {
                    raw.comms[i][k] = p.collect(&raw.comms[i][k])?.to_sparse();
                    changed = true;
                }
            }
        }
        if changed {
            p.raw = raw;
            p.build_tables()?;
        }
        Ok(p)
    }

    fn is_normal(&self, w: &[(usize, i64)]) -> bool {
        w.windows(2).all(|p| p[0].0 < p[1].0)
            && w.iter().all(|&(g, e)| {
                let m = self.raw.rel_orders[g];
                e != 0 && (m == 0 || (0..m).contains(&e))
            })
    }

    fn build_tables(&mut self) -> Result<(), PcError> {
        let n = self.len();
        let w = &self.raw.weights;
        let central_from = if self.raw.graded {
            // generators whose weight plus the minimal weight exceeds the class
            let min_w = w.first().copied().unwrap_or(1);
            w.iter()
                .position(|&x| x + min_w > self.class_bound)
                .unwrap_or(n)
        } else {
            n
        };
        let move_end: Vec<usize> = (0..n)
            .map(|i| {
                if i >= central_from {
                    return i + 1;
                }
                let lim = self.class_bound.saturating_sub(w[i]);
                let e = w.partition_point(|&x| x <= lim);
                e.min(central_from).max(i + 1)
            })
            .collect();
        let mut conj: Vec<Vec<SparseWord>> = Vec::with_capacity(central_from);
        for j in 0..central_from {
            let row = (0..j)
                .map(|i| {
                    let mut word = Vec::with_capacity(self.raw.comms[j][i].len() + 1);
                    word.push((j, 1));
                    word.extend_from_slice(&self.raw.comms[j][i]);
                    word
                })
                .collect();
            conj.push(row);
        }
        let mut conj_inv: Vec<Vec<SparseWord>> =
            (0..central_from).map(|j| vec![Vec::new(); j]).collect();
        let mut scratch = vec![0i64; n];
        for i in (0..central_from).rev() {
            for j in (i + 1..move_end[i]).rev() {
                // g_j^{g_i^-1} = g_j z with z = (c^-1)^{g_i^-1}, c = [g_j, g_i]
                let c = &self.raw.comms[j][i];
                let z = if c.is_empty() {
                    Vec::new()
                } else {
                    let ctx = Ctx {
                        rel_orders: &self.raw.rel_orders,
                        powers: &self.raw.powers,
                        conj: &conj,
                        conj_inv: &conj_inv,
                        move_end: &move_end,
                        weights: &self.raw.weights,
                        class_bound: self.class_bound,
                        central_from,
                        step_limit: self.step_limit,
                    };
                    scratch.iter_mut().for_each(|x| *x = 0);
                    let units: Vec<[(usize, i64); 1]> = c.iter().map(|&(k, _)| [(k, 1)]).collect();
                    let mut stack: Vec<Frame> = Vec::with_capacity(c.len());
                    for (idx, &(k, a)) in c.iter().enumerate() {
                        let a = -a;
                        let w: &[(usize, i64)] = if k < move_end[i] {
                            &conj_inv[k][i]
                        } else {
                            &units[idx]
                        };
                        stack.push(Frame::Word {
                            w,
                            pos: 0,
                            reps: a.abs(),
                            inv: a < 0,
                        });
                    }
                    ctx.run(&mut scratch, &mut stack)?;
                    trim(&scratch)
                };
                let mut word = Vec::with_capacity(z.len() + 1);
                word.push((j, 1));
                word.extend(z);
                conj_inv[j][i] = word;
            }
        }
        self.tables = Tables {
            conj,
            conj_inv,
            move_end,
            central_from,
        };
        Ok(())
    }

    fn ctx(&self) -> Ctx<'_> {
        Ctx {
            rel_orders: &self.raw.rel_orders,
            powers: &self.raw.powers,
            conj: &self.tables.conj,
            conj_inv: &self.tables.conj_inv,
            move_end: &self.tables.move_end,
            weights: &self.raw.weights,
            class_bound: self.class_bound,
            central_from: self.tables.central_from,
            step_limit: self.step_limit,
        }
    }

    pub fn with_step_limit(mut self, limit: u64) -> Self {
        self.step_limit = limit;
        self
    }

    pub fn len(&self) -> usize {
        self.raw.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> usize {
        self.raw.weights[i]
    }

    pub fn weights(&self) -> &[usize] {
        &self.raw.weights
    }

    /// 0 for infinite.
    pub fn rel_order(&self, i: usize) -> i64 {
        self.raw.rel_orders[i]
    }

    pub fn rel_orders(&self) -> &[i64] {
        &self.raw.rel_orders
    }

    pub fn power(&self, i: usize) -> &[(usize, i64)] {
        &self.raw.powers[i]
    }

    /// `[g_j, g_i]` for `i < j`.
    pub fn comm(&self, j: usize, i: usize) -> &[(usize, i64)] {
        &self.raw.comms[j][i]
    }

    pub fn definition(&self, i: usize) -> Option<Definition> {
        self.raw.definitions[i]
    }

    pub fn definitions(&self) -> &[Option<Definition>] {
        &self.raw.definitions
    }

    pub fn is_graded(&self) -> bool {
        self.raw.graded
    }

    /// Largest weight; the nilpotency class for engine-built presentations.
    pub fn class(&self) -> usize {
        if self.raw.graded {
            self.class_bound
        } else {
            0
        }
    }

    pub fn central_from(&self) -> usize {
        self.tables.central_from
    }

    pub fn builder(&self) -> PcBuilder {
        self.raw.clone()
    }

    pub fn identity(&self) -> ExponentVector {
        ExponentVector::identity(self.len())
    }

    fn check_word(&self, word: &[(usize, i64)]) -> Result<(), PcError> {
        match word.iter().find(|&&(g, _)| g >= self.len()) {
            Some(&(g, _)) => Err(PcError::IndexOutOfRange(g)),
            None => Ok(()),
        }
    }

    fn check_vec(&self, v: &ExponentVector) -> Result<(), PcError> {
        if v.len() != self.len() {
            return Err(PcError::LengthMismatch {
                expected: self.len(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Normal form of a word in the pc generators.
    pub fn collect(&self, word: &[(usize, i64)]) -> Result<ExponentVector, PcError> {
        self.check_word(word)?;
        let mut v = vec![0; self.len()];
        self.ctx().collect(&mut v, word)?;
        Ok(ExponentVector(v))
    }

    /// Multiplies the normal form `v` on the right by `word`, in place.
    pub fn collect_onto(
        &self,
        v: &mut ExponentVector,
        word: &[(usize, i64)],
    ) -> Result<(), PcError> {
        self.check_vec(v)?;
        self.check_word(word)?;
        self.ctx().collect(&mut v.0, word)
    }

    pub fn multiply(
        &self,
        u: &ExponentVector,
        v: &ExponentVector,
    ) -> Result<ExponentVector, PcError> {
        self.check_vec(u)?;
        self.check_vec(v)?;
        let mut out = u.clone();
        let w = v.to_sparse();
        self.ctx().collect(&mut out.0, &w)?;
        Ok(out)
    }

    pub fn invert(&self, u: &ExponentVector) -> Result<ExponentVector, PcError> {
        self.check_vec(u)?;
        let w: SparseWord = u
            .to_sparse()
            .into_iter()
            .rev()
            .map(|(g, e)| (g, -e))
            .collect();
        let mut out = vec![0; self.len()];
        self.ctx().collect(&mut out, &w)?;
        Ok(ExponentVector(out))
    }

    pub fn power_of(&self, u: &ExponentVector, e: &BigInt) -> Result<ExponentVector, PcError> {
        GroupOps::pow(self, u, e)
    }

    /// `v^-1 u v`.
    pub fn conjugate(
        &self,
        u: &ExponentVector,
        v: &ExponentVector,
    ) -> Result<ExponentVector, PcError> {
        let vi = self.invert(v)?;
        let x = self.multiply(&vi, u)?;
        self.multiply(&x, v)
    }

    /// `[u, v] = u^-1 v^-1 u v`, computed as `(v u)^-1 (u v)`.
    pub fn commutator(
        &self,
        u: &ExponentVector,
        v: &ExponentVector,
    ) -> Result<ExponentVector, PcError> {
        let uv = self.multiply(u, v)?;
        let vu = self.multiply(v, u)?;
        let vui = self.invert(&vu)?;
        self.multiply(&vui, &uv)
    }

    pub fn left_normed_comm_elems(&self, xs: &[ExponentVector]) -> Result<ExponentVector, PcError> {
        let (first, rest) = xs.split_first().ok_or(PcError::EmptyList)?;
        let mut acc = first.clone();
        for x in rest {
            acc = self.commutator(&acc, x)?;
        }
        Ok(acc)
    }

    /// Order of an element; `None` for infinite order.
    pub fn element_order(&self, x: &ExponentVector) -> Result<Option<BigInt>, PcError> {
        self.check_vec(x)?;
        let mut total = BigInt::one();
        let mut cur = x.clone();
        while let Some(i) = cur.leading() {
            let m = self.rel_order(i);
            if m == 0 {
                return Ok(None);
            }
            let o = m / cur[i].gcd(&m);
            total *= o;
            cur = self.power_of(&cur, &BigInt::from(o))?;
        }
        Ok(Some(total))
    }

    /// Pseudo-random normal form with word exponents drawn from `[-3, 3]`.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Result<ExponentVector, PcError> {
        let w: SparseWord = (0..self.len())
            .map(|g| (g, rng.gen_range(-3..=3)))
            .filter(|&(_, e)| e != 0)
            .collect();
        self.collect(&w)
    }

    /// Evaluates the standard consistency test words and returns every
    /// pair of differing normal forms. With `prune`, test words whose
    /// weight exceeds the class are skipped (valid for graded
    /// presentations only).
    pub fn consistency_violations(&self, prune: bool) -> Result<Vec<Violation>, PcError> {
        let mut out = Vec::new();
        self.for_each_test_word(prune && self.raw.graded, &mut |t, l, r| {
            if l != r {
                out.push(Violation {
                    test: t,
                    lhs: l,
                    rhs: r,
                });
            }
            Ok(())
        })?;
        Ok(out)
    }

    /// Runs `f(test, lhs, rhs)` over the consistency test words.
    pub fn for_each_test_word<F>(&self, prune: bool, f: &mut F) -> Result<(), PcError>
    where
        F: FnMut(TestWord, ExponentVector, ExponentVector) -> Result<(), PcError>,
    {
        let n = self.len();
        let lim = self.tables.central_from;
        let w = &self.raw.weights;
        let cb = self.class_bound;
        let ok2 = |a: usize, b: usize| !prune || w[a] + w[b] <= cb;
        let ctx = self.ctx();
        let unit = |g: usize| ExponentVector::unit(n, g);
        // g_j g_i, collected, reused by the associativity tests
        for j in 0..lim {
            for i in 0..j {
                if !ok2(i, j) {
                    continue;
                }
                let mut ji = unit(j);
                ctx.collect(&mut ji.0, &[(i, 1)])?;
                let ji_word = ji.to_sparse();
                for k in j + 1..lim {
                    if prune && w[i] + w[j] + w[k] > cb {
                        break;
                    }
                    let mut lhs = unit(k);
                    ctx.collect(&mut lhs.0, &[(j, 1), (i, 1)])?;
                    let mut rhs = unit(k);
                    ctx.collect(&mut rhs.0, &ji_word)?;
                    f(TestWord::Associativity { k, j, i }, lhs, rhs)?;
                }
                if self.rel_order(j) != 0 {
                    let m = self.rel_order(j);
                    let mut lhs = ExponentVector::from_sparse(n, self.power(j));
                    ctx.collect(&mut lhs.0, &[(i, 1)])?;
                    let mut rhs = identity_with(n, j, m - 1);
                    ctx.collect(&mut rhs.0, &ji_word)?;
                    f(TestWord::PowerLeft { j, i }, lhs, rhs)?;
                }
                if self.rel_order(i) != 0 {
                    let m = self.rel_order(i);
                    let mut lhs = unit(j);
                    ctx.collect(&mut lhs.0, &[(i, m - 1)])?;
                    ctx.collect(&mut lhs.0, &[(i, 1)])?;
                    let mut rhs = unit(j);
                    ctx.collect(&mut rhs.0, self.power(i))?;
                    f(TestWord::PowerRight { j, i }, lhs, rhs)?;
                }
                let mut lhs = unit(j);
                ctx.collect(&mut lhs.0, &[(i, -1)])?;
                ctx.collect(&mut lhs.0, &[(i, 1)])?;
                f(TestWord::Inverse { j, i }, lhs, unit(j))?;
            }
        }
        for i in 0..lim {
            let m = self.rel_order(i);
            if m == 0 || (prune && 2 * w[i] > cb) {
                continue;
            }
            let mut lhs = ExponentVector::from_sparse(n, self.power(i));
            ctx.collect(&mut lhs.0, &[(i, 1)])?;
            let mut rhs = unit(i);
            ctx.collect(&mut rhs.0, self.power(i))?;
            f(TestWord::PowerSelf { i }, lhs, rhs)?;
        }
        Ok(())
    }
}

fn identity_with(n: usize, g: usize, e: i64) -> ExponentVector {
    let mut v = ExponentVector::identity(n);
    v.0[g] = e;
    v
}

fn check_word(w: &[(usize, i64)], after: usize, n: usize) -> Result<(), PcError> {
    for &(g, _) in w {
        if g >= n {
            return Err(PcError::IndexOutOfRange(g));
        }
        if g <= after {
            return Err(PcError::Malformed(format!(
                "relation word of g{} involves g{}",
                after, g
            )));
        }
    }
    Ok(())
}

/// Identifies a consistency test word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestWord {
    /// `(g_k g_j) g_i = g_k (g_j g_i)`
    Associativity { k: usize, j: usize, i: usize },
    /// `(g_j^m) g_i = g_j^{m-1} (g_j g_i)`
    PowerLeft { j: usize, i: usize },
    /// `(g_j g_i^{m-1}) g_i = g_j (g_i^m)`
    PowerRight { j: usize, i: usize },
    /// `(g_j g_i^-1) g_i = g_j`
    Inverse { j: usize, i: usize },
    /// `(g_i^m) g_i = g_i (g_i^m)`
    PowerSelf { i: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub test: TestWord,
    pub lhs: ExponentVector,
    pub rhs: ExponentVector,
}

/// Consistency check with weight pruning for graded presentations.
pub fn consistency_check(p: &PcPresentation) -> Result<Vec<Violation>, PcError> {
    p.consistency_violations(true)
}

impl GroupOps for PcPresentation {
    type Elem = ExponentVector;
    type Error = PcError;

    fn identity(&self) -> ExponentVector {
        ExponentVector::identity(self.len())
    }
    fn mul(&self, a: &ExponentVector, b: &ExponentVector) -> Result<ExponentVector, PcError> {
        self.multiply(a, b)
    }
    fn inv(&self, a: &ExponentVector) -> Result<ExponentVector, PcError> {
        self.invert(a)
    }
    fn pow(&self, a: &ExponentVector, e: &BigInt) -> Result<ExponentVector, PcError> {
        if e.is_zero() {
            return Ok(self.identity());
        }
        let base = if e.is_negative() {
            self.invert(a)?
        } else {
            a.clone()
        };
        let n = e.abs();
        // short exponents: repeated collection of the sparse word
        if let Some(k) = n.to_i64() {
            if k <= 4 {
                let w = base.to_sparse();
                let mut out = base.clone();
                for _ in 1..k {
                    self.ctx().collect(&mut out.0, &w)?;
                }
                return Ok(out);
            }
        }
        let mut acc = self.identity();
        let mut sq = base;
        let mut n = n;
        while !n.is_zero() {
            if n.is_odd() {
                acc = self.multiply(&acc, &sq)?;
            }
            n >>= 1;
            if !n.is_zero() {
                sq = self.multiply(&sq, &sq)?;
            }
        }
        Ok(acc)
    }
    fn comm(&self, a: &ExponentVector, b: &ExponentVector) -> Result<ExponentVector, PcError> {
        self.commutator(a, b)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Free nilpotent class 2 on two generators: `[g1, g0] = g2`.
    pub(crate) fn heisenberg() -> PcPresentation {
        let mut b = PcBuilder::graded(vec![1, 1, 2]);
        b.set_comm(1, 0, vec![(2, 1)]);
        b.build().unwrap()
    }

    /// Unitriangular 3x3 integer matrices `(a, b, c)` for
    /// `[[1, a, c], [0, 1, b], [0, 0, 1]]`; an independent model of the
    /// Heisenberg group.
    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    struct Uni(i64, i64, i64);

    impl Uni {
        fn mul(self, o: Uni) -> Uni {
            Uni(self.0 + o.0, self.1 + o.1, self.2 + o.2 + self.0 * o.1)
        }
        fn pow(self, e: i64) -> Uni {
            let base = if e < 0 {
                Uni(-self.0, -self.1, -self.2 + self.0 * self.1)
            } else {
                self
            };
            (0..e.abs()).fold(Uni(0, 0, 0), |acc, _| acc.mul(base))
        }
    }

    // g0 = x, g1 = y, g2 = [y, x] = y^-1 x^-1 y x
    fn gens() -> [Uni; 3] {
        let x = Uni(1, 0, 0);
        let y = Uni(0, 1, 0);
        let z = y.pow(-1).mul(x.pow(-1)).mul(y).mul(x);
        [x, y, z]
    }

    fn eval_uni(v: &ExponentVector) -> Uni {
        let g = gens();
        (0..3).fold(Uni(0, 0, 0), |acc, i| acc.mul(g[i].pow(v[i])))
    }

    fn eval_word(w: &[(usize, i64)]) -> Uni {
        let g = gens();
        w.iter()
            .fold(Uni(0, 0, 0), |acc, &(i, e)| acc.mul(g[i].pow(e)))
    }

    #[test]
    fn collect_basic() {
        let p = heisenberg();
        assert!(p.collect(&[]).unwrap().is_identity());
        let v = p.collect(&[(1, 1), (0, 1)]).unwrap();
        assert_eq!(v.as_slice(), &[1, 1, 1]);
        assert_eq!(eval_uni(&v), eval_word(&[(1, 1), (0, 1)]));
        assert!(matches!(
            p.collect(&[(3, 1)]),
            Err(PcError::IndexOutOfRange(3))
        ));
    }

    #[test]
    fn collect_agrees_with_matrix_model() {
        let p = heisenberg();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let len = rng.gen_range(0..10);
            let w: SparseWord = (0..len)
                .map(|_| (rng.gen_range(0..3), rng.gen_range(-4..=4)))
                .collect();
            let v = p.collect(&w).unwrap();
            assert_eq!(eval_uni(&v), eval_word(&w), "word {:?}", w);
        }
        for m in 1..20 {
            assert!(p.collect(&[(0, m), (0, -m)]).unwrap().is_identity());
        }
    }

    #[test]
    fn consistency_examples() {
        let mut b = PcBuilder::graded(vec![1, 1, 1]);
        b.graded = true;
        let abelian = b.build().unwrap();
        assert!(consistency_check(&abelian).unwrap().is_empty());
        assert!(heisenberg()
            .consistency_violations(false)
            .unwrap()
            .is_empty());

        // g0^2 = g2 with g2 of order 2, [g1, g0] = g2: dihedral of order 8
        let mut b = PcBuilder::graded(vec![1, 1, 2]);
        b.set_power(0, 2, vec![])
            .set_power(1, 2, vec![(2, 1)])
            .set_power(2, 2, vec![]);
        b.set_comm(1, 0, vec![(2, 1)]);
        let d8 = b.clone().build().unwrap();
        assert!(d8.consistency_violations(false).unwrap().is_empty());
        // g2 of order 3 clashes with g2 = [g1, g0] and g1^2 = g2
        let mut bad = b.clone();
        bad.set_power(2, 3, vec![]);
        let bad = bad.build().unwrap();
        assert!(!bad.consistency_violations(false).unwrap().is_empty());
    }

    #[test]
    fn element_orders() {
        let p = heisenberg();
        assert_eq!(p.element_order(&p.identity()).unwrap(), Some(BigInt::one()));
        assert_eq!(p.element_order(&ExponentVector::unit(3, 0)).unwrap(), None);
        let mut b = PcBuilder::graded(vec![1]);
        b.set_power(0, 6, vec![]);
        let c6 = b.build().unwrap();
        assert_eq!(
            c6.element_order(&ExponentVector::unit(1, 0)).unwrap(),
            Some(BigInt::from(6))
        );
        assert_eq!(
            c6.element_order(&ExponentVector::from_vec(vec![4]))
                .unwrap(),
            Some(BigInt::from(3))
        );
    }

    #[test]
    fn trivial_group() {
        let t = PcPresentation::trivial();
        assert!(t.collect(&[]).unwrap().is_empty());
        assert!(consistency_check(&t).unwrap().is_empty());
        assert_eq!(t.element_order(&t.identity()).unwrap(), Some(BigInt::one()));
    }

    #[test]
    fn element_ops() {
        let p = heisenberg();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let u = p.random_element(&mut rng).unwrap();
            let v = p.random_element(&mut rng).unwrap();
            assert!(p.commutator(&u, &p.identity()).unwrap().is_identity());
            let lhs = p.invert(&p.multiply(&u, &v).unwrap()).unwrap();
            let rhs = p
                .multiply(&p.invert(&v).unwrap(), &p.invert(&u).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(eval_uni(&p.commutator(&u, &v).unwrap()), {
                let (a, b) = (eval_uni(&u), eval_uni(&v));
                a.pow(-1).mul(b.pow(-1)).mul(a).mul(b)
            });
        }
        let x = ExponentVector::unit(3, 1);
        assert_eq!(
            p.left_normed_comm_elems(std::slice::from_ref(&x)).unwrap(),
            x
        );
        assert!(p
            .left_normed_comm_elems(&[x, p.identity()])
            .unwrap()
            .is_identity());
        assert!(matches!(
            p.left_normed_comm_elems(&[]),
            Err(PcError::EmptyList)
        ));

        let mut b = PcBuilder::graded(vec![1, 1]);
        b.set_power(0, 4, vec![]);
        let ab = b.build().unwrap();
        for _ in 0..20 {
            let u = ab.random_element(&mut rng).unwrap();
            let v = ab.random_element(&mut rng).unwrap();
            assert!(ab.commutator(&u, &v).unwrap().is_identity());
        }
    }

    #[test]
    fn malformed_inputs_rejected() {
        let mut b = PcBuilder::graded(vec![1, 1]);
        b.set_comm(1, 0, vec![(1, 1)]);
        assert!(b.build().is_err());
        let mut b = PcBuilder::graded(vec![1, 1, 1]);
        b.set_comm(1, 0, vec![(2, 1)]);
        assert!(matches!(b.build(), Err(PcError::Ungraded(_))));
    }
}
