//! Symbols, freely reduced words, commutator expressions and laws.
//!
//! Commutators follow the convention `[u, v] = u^-1 v^-1 u v` and longer
//! brackets are left-normed: `[u, v, w] = [[u, v], w]`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::WordError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Generator,
    Variable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub kind: SymbolKind,
}

pub type SymbolId = usize;

/// Declared symbols; names are unique and a symbol's kind never changes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    symbols: Vec<Symbol>,
    by_name: HashMap<String, SymbolId>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: &str, kind: SymbolKind) -> Result<SymbolId, WordError> {
        if self.by_name.contains_key(name) {
            return Err(WordError::DuplicateSymbol(name.to_string()));
        }
        let id = self.symbols.len();
        self.symbols.push(Symbol {
            name: name.to_string(),
            kind,
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn get(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id]
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id].name
    }

    pub fn kind(&self, id: SymbolId) -> SymbolKind {
        self.symbols[id].kind
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &Symbol)> {
        self.symbols.iter().enumerate()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub symbol: SymbolId,
    pub exp: BigInt,
}

/// A freely reduced word in run-length form. Adjacent letters never share a
/// symbol and no exponent is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    pub fn letter(symbol: SymbolId, exp: impl Into<BigInt>) -> Self {
        let mut w = Word::identity();
        w.push(symbol, exp.into());
        w
    }

    pub fn symbol(symbol: SymbolId) -> Self {
        Word::letter(symbol, 1)
    }

    pub fn from_letters<I: IntoIterator<Item = (SymbolId, BigInt)>>(letters: I) -> Self {
        let mut w = Word::identity();
        for (s, e) in letters {
            w.push(s, e);
        }
        w
    }

    fn push(&mut self, symbol: SymbolId, exp: BigInt) {
        if exp.is_zero() {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.symbol == symbol {
                last.exp += exp;
                if last.exp.is_zero() {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(Letter { symbol, exp });
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of runs.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.symbol, l.exp.clone());
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word::from_letters(
            self.letters
                .iter()
                .rev()
                .map(|l| (l.symbol, -l.exp.clone())),
        )
    }

    pub fn pow(&self, e: &BigInt) -> Word {
        if e.is_zero() || self.is_identity() {
            return Word::identity();
        }
        if self.letters.len() == 1 {
            let l = &self.letters[0];
            return Word::letter(l.symbol, &l.exp * e);
        }
        let base = if e.is_negative() {
            self.inverse()
        } else {
            self.clone()
        };
        let mut n = e.abs();
        let mut acc = Word::identity();
        let mut sq = base;
        while !n.is_zero() {
            if (&n & BigInt::one()).is_one() {
                acc = acc.mul(&sq);
            }
            n >>= 1;
            if !n.is_zero() {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// `[u, v] = u^-1 v^-1 u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().mul(&v.inverse()).mul(u).mul(v)
    }

    pub fn symbols(&self) -> BTreeSet<SymbolId> {
        self.letters.iter().map(|l| l.symbol).collect()
    }

    pub fn exponent_sum(&self, symbol: SymbolId) -> BigInt {
        self.letters
            .iter()
            .filter(|l| l.symbol == symbol)
            .map(|l| l.exp.clone())
            .sum()
    }

    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> WordDisplay<'a> {
        WordDisplay { word: self, table }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    table: &'a SymbolTable,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return write!(f, "1");
        }
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", self.table.name(l.symbol))?;
            if !l.exp.is_one() {
                write!(f, "^{}", l.exp)?;
            }
        }
        Ok(())
    }
}

/// Left-normed commutator of a nonempty list of words.
pub fn left_normed_commutator(ws: &[Word]) -> Result<Word, WordError> {
    let (first, rest) = ws.split_first().ok_or(WordError::EmptyCommutator)?;
    Ok(rest
        .iter()
        .fold(first.clone(), |acc, w| Word::commutator(&acc, w)))
}

/// The Engel word `[a, b, ..., b]` with `n` copies of `b`.
pub fn engel_word(a: &Word, b: &Word, n: usize) -> Word {
    (0..n).fold(a.clone(), |acc, _| Word::commutator(&acc, b))
}

/// Abstract group operations, so that expressions can be evaluated in the
/// free group as well as in polycyclic quotients.
pub trait GroupOps {
    type Elem: Clone;
    type Error;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Self::Error>;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, Self::Error>;

    fn pow(&self, a: &Self::Elem, e: &BigInt) -> Result<Self::Elem, Self::Error> {
        let base = if e.is_negative() {
            self.inv(a)?
        } else {
            a.clone()
        };
        let mut n = e.abs();
        let mut acc = self.identity();
        let mut sq = base;
        while !n.is_zero() {
            if (&n & BigInt::one()).is_one() {
                acc = self.mul(&acc, &sq)?;
            }
            n >>= 1;
            if !n.is_zero() {
                sq = self.mul(&sq, &sq)?;
            }
        }
        Ok(acc)
    }

    fn comm(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, Self::Error> {
        let ai = self.inv(a)?;
        let bi = self.inv(b)?;
        let x = self.mul(&ai, &bi)?;
        let x = self.mul(&x, a)?;
        self.mul(&x, b)
    }
}

/// The free group on all declared symbols.
pub struct FreeGroup;

impl GroupOps for FreeGroup {
    type Elem = Word;
    type Error = std::convert::Infallible;

    fn identity(&self) -> Word {
        Word::identity()
    }
    fn mul(&self, a: &Word, b: &Word) -> Result<Word, Self::Error> {
        Ok(a.mul(b))
    }
    fn inv(&self, a: &Word) -> Result<Word, Self::Error> {
        Ok(a.inverse())
    }
    fn pow(&self, a: &Word, e: &BigInt) -> Result<Word, Self::Error> {
        Ok(a.pow(e))
    }
}

/// Parsed word syntax. Kept next to the expanded word so that quotient
/// computations can evaluate brackets structurally instead of letter by
/// letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Identity,
    Sym(SymbolId),
    Product(Vec<Expr>),
    Power(Box<Expr>, BigInt),
    Comm(Vec<Expr>),
}

impl Expr {
    pub fn eval<G, F>(&self, group: &G, value: &mut F) -> Result<G::Elem, G::Error>
    where
        G: GroupOps,
        F: FnMut(SymbolId) -> Result<G::Elem, G::Error>,
    {
        match self {
            Expr::Identity => Ok(group.identity()),
            Expr::Sym(s) => value(*s),
            Expr::Product(parts) => {
                let mut acc: Option<G::Elem> = None;
                for p in parts {
                    let v = p.eval(group, value)?;
                    acc = Some(match acc {
                        None => v,
                        Some(a) => group.mul(&a, &v)?,
                    });
                }
                Ok(acc.unwrap_or_else(|| group.identity()))
            }
            Expr::Power(base, e) => {
                let b = base.eval(group, value)?;
                group.pow(&b, e)
            }
            Expr::Comm(parts) => {
                let mut it = parts.iter();
                let mut acc = match it.next() {
                    Some(p) => p.eval(group, value)?,
                    None => return Ok(group.identity()),
                };
                for p in it {
                    let v = p.eval(group, value)?;
                    acc = group.comm(&acc, &v)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn to_word(&self) -> Word {
        match self.eval(&FreeGroup, &mut |s| Ok(Word::symbol(s))) {
            Ok(w) => w,
            Err(e) => match e {},
        }
    }

    pub fn symbols(&self) -> BTreeSet<SymbolId> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<SymbolId>) {
        match self {
            Expr::Identity => {}
            Expr::Sym(s) => {
                out.insert(*s);
            }
            Expr::Product(ps) | Expr::Comm(ps) => ps.iter().for_each(|p| p.collect_symbols(out)),
            Expr::Power(b, _) => b.collect_symbols(out),
        }
    }

    /// Lower bound for the lower-central weight of the value, given a lower
    /// bound for every symbol. Brackets add weights; products and powers
    /// take the minimum.
    pub fn min_weight(&self, weight: &dyn Fn(SymbolId) -> usize) -> usize {
        match self {
            Expr::Identity => usize::MAX,
            Expr::Sym(s) => weight(*s),
            Expr::Product(ps) => ps
                .iter()
                .map(|p| p.min_weight(weight))
                .min()
                .unwrap_or(usize::MAX),
            Expr::Power(b, _) => b.min_weight(weight),
            Expr::Comm(ps) => ps
                .iter()
                .map(|p| p.min_weight(weight))
                .fold(0usize, |a, b| a.saturating_add(b)),
        }
    }

    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, table }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    table: &'a SymbolTable,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(e: &Expr, t: &SymbolTable, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match e {
                Expr::Identity => write!(f, "1"),
                Expr::Sym(s) => write!(f, "{}", t.name(*s)),
                Expr::Product(ps) => {
                    write!(f, "(")?;
                    for (i, p) in ps.iter().enumerate() {
                        if i > 0 {
                            write!(f, "*")?;
                        }
                        go(p, t, f)?;
                    }
                    write!(f, ")")
                }
                Expr::Power(b, n) => {
                    if matches!(**b, Expr::Power(..)) {
                        write!(f, "(")?;
                        go(b, t, f)?;
                        write!(f, ")^{}", n)
                    } else {
                        go(b, t, f)?;
                        write!(f, "^{}", n)
                    }
                }
                Expr::Comm(ps) => {
                    write!(f, "[")?;
                    for (i, p) in ps.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        go(p, t, f)?;
                    }
                    write!(f, "]")
                }
            }
        }
        go(self.expr, self.table, f)
    }
}

/// A defining relator over generators only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relator {
    pub expr: Expr,
    pub word: Word,
}

impl Relator {
    pub fn new(expr: Expr) -> Self {
        let word = expr.to_word();
        Relator { expr, word }
    }
}

/// An identical relation: a word that must vanish under every substitution
/// of group elements for its variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Law {
    pub body: Word,
    pub expr: Expr,
    pub variables: BTreeSet<SymbolId>,
}

impl Law {
    pub fn new(expr: Expr, table: &SymbolTable) -> Result<Self, WordError> {
        let variables: BTreeSet<SymbolId> = expr
            .symbols()
            .into_iter()
            .filter(|&s| table.kind(s) == SymbolKind::Variable)
            .collect();
        if variables.is_empty() {
            return Err(WordError::NoVariable(expr.display(table).to_string()));
        }
        let body = expr.to_word();
        Ok(Law {
            body,
            expr,
            variables,
        })
    }

    /// Lower bound on the filtration shift of the law: the weight of its
    /// value when every generator counts 1 and every variable counts 0.
    pub fn shift(&self, table: &SymbolTable) -> usize {
        let w = self.expr.min_weight(&|s| match table.kind(s) {
            SymbolKind::Generator => 1,
            SymbolKind::Variable => 0,
        });
        if w == usize::MAX {
            0
        } else {
            w
        }
    }
}

/// Replaces every variable occurrence in the law body by its image.
pub fn substitute(
    law: &Law,
    assignment: &HashMap<SymbolId, Word>,
    table: &SymbolTable,
) -> Result<Word, WordError> {
    let mut out = Word::identity();
    for l in law.body.letters() {
        if law.variables.contains(&l.symbol) {
            let img = assignment
                .get(&l.symbol)
                .ok_or_else(|| WordError::MissingAssignment(table.name(l.symbol).to_string()))?;
            out = out.mul(&img.pow(&l.exp));
        } else {
            out = out.mul(&Word::letter(l.symbol, l.exp.clone()));
        }
    }
    Ok(out)
}

/// A finitely presented group together with identical relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupInput {
    pub symbols: SymbolTable,
    pub generators: Vec<SymbolId>,
    pub variables: Vec<SymbolId>,
    pub relators: Vec<Relator>,
    pub laws: Vec<Law>,
    pub max_class: Option<usize>,
}

impl GroupInput {
    /// Checks the declaration invariants: relators mention generators only,
    /// laws mention declared symbols and at least one variable.
    pub fn validate(&self) -> Result<(), WordError> {
        for r in &self.relators {
            for s in r.expr.symbols() {
                if self.symbols.kind(s) == SymbolKind::Variable {
                    return Err(WordError::VariableInRelator(
                        self.symbols.name(s).to_string(),
                    ));
                }
            }
        }
        for l in &self.laws {
            if l.variables.is_empty() {
                return Err(WordError::NoVariable(
                    l.expr.display(&self.symbols).to_string(),
                ));
            }
        }
        if self.max_class == Some(0) {
            return Err(WordError::Invalid("max_class must be positive".into()));
        }
        Ok(())
    }

    /// Position of a generator symbol in the generator list.
    pub fn generator_index(&self, s: SymbolId) -> Option<usize> {
        self.generators.iter().position(|&g| g == s)
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators
            .iter()
            .map(|&g| self.symbols.name(g).to_string())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> (SymbolTable, SymbolId, SymbolId, SymbolId, SymbolId) {
        let mut t = SymbolTable::new();
        let a = t.declare("a", SymbolKind::Generator).unwrap();
        let b = t.declare("b", SymbolKind::Generator).unwrap();
        let c = t.declare("c", SymbolKind::Generator).unwrap();
        let x = t.declare("x", SymbolKind::Variable).unwrap();
        (t, a, b, c, x)
    }

    fn w(letters: &[(SymbolId, i64)]) -> Word {
        Word::from_letters(letters.iter().map(|&(s, e)| (s, BigInt::from(e))))
    }

    #[test]
    fn free_reduction() {
        let (_, a, b, ..) = table();
        assert!(w(&[(a, 1), (a, -1)]).is_identity());
        assert_eq!(w(&[(a, 2), (b, 1), (b, -1), (a, 3)]), w(&[(a, 5)]));
    }

    #[test]
    fn commutator_convention() {
        let (_, a, b, ..) = table();
        let c = Word::commutator(&Word::symbol(a), &Word::symbol(b));
        assert_eq!(c, w(&[(a, -1), (b, -1), (a, 1), (b, 1)]));
        assert_eq!(
            c.inverse(),
            Word::commutator(&Word::symbol(b), &Word::symbol(a))
        );
    }

    #[test]
    fn left_normed_cases() {
        let (_, a, b, ..) = table();
        let (wa, wb) = (Word::symbol(a), Word::symbol(b));
        assert_eq!(
            left_normed_commutator(std::slice::from_ref(&wa)).unwrap(),
            wa
        );
        assert!(left_normed_commutator(&[wa.clone(), Word::identity()])
            .unwrap()
            .is_identity());
        assert!(matches!(
            left_normed_commutator(&[]),
            Err(WordError::EmptyCommutator)
        ));
        let four =
            left_normed_commutator(&[wa.clone(), wb.clone(), wb.clone(), wb.clone(), wb.clone()])
                .unwrap();
        assert_eq!(four, engel_word(&wa, &wb, 4));
    }

    #[test]
    fn engel_word_small_n() {
        let (_, a, b, ..) = table();
        let (wa, wb) = (Word::symbol(a), Word::symbol(b));
        assert_eq!(engel_word(&wa, &wb, 0), wa);
        assert_eq!(
            engel_word(&wa, &wb, 1),
            w(&[(a, -1), (b, -1), (a, 1), (b, 1)])
        );
        assert!(engel_word(&Word::identity(), &wb, 3).is_identity());
    }

    /// Independent oracle: expand a left-normed bracket by naive string
    /// rewriting over signed single letters, then cancel adjacent inverses.
    fn naive_bracket(parts: &[Vec<(usize, i8)>]) -> Vec<(usize, i8)> {
        fn inv(u: &[(usize, i8)]) -> Vec<(usize, i8)> {
            u.iter().rev().map(|&(s, e)| (s, -e)).collect()
        }
        let mut acc = parts[0].clone();
        for p in &parts[1..] {
            let mut s = inv(&acc);
            s.extend(inv(p));
            s.extend(acc.iter().copied());
            s.extend(p.iter().copied());
            acc = s;
        }
        let mut out: Vec<(usize, i8)> = Vec::new();
        for l in acc {
            if let Some(&last) = out.last() {
                if last.0 == l.0 && last.1 == -l.1 {
                    out.pop();
                    continue;
                }
            }
            out.push(l);
        }
        out
    }

    #[test]
    fn substitute_product_matches_naive_expansion() {
        let (t, a, b, c, x) = table();
        let expr = Expr::Comm(vec![
            Expr::Sym(a),
            Expr::Sym(x),
            Expr::Sym(x),
            Expr::Sym(x),
            Expr::Sym(x),
        ]);
        let law = Law::new(expr, &t).unwrap();
        let mut asg = HashMap::new();
        asg.insert(x, w(&[(b, 1), (c, 1)]));
        let got = substitute(&law, &asg, &t).unwrap();
        let bc = vec![(b, 1i8), (c, 1i8)];
        let naive = naive_bracket(&[vec![(a, 1)], bc.clone(), bc.clone(), bc.clone(), bc]);
        let expect = Word::from_letters(naive.into_iter().map(|(s, e)| (s, BigInt::from(e))));
        assert_eq!(got, expect);

        asg.insert(x, Word::identity());
        assert!(substitute(&law, &asg, &t).unwrap().is_identity());
        asg.insert(x, Word::symbol(b));
        assert_eq!(
            substitute(&law, &asg, &t).unwrap(),
            engel_word(&Word::symbol(a), &Word::symbol(b), 4)
        );
        assert!(matches!(
            substitute(&law, &HashMap::new(), &t),
            Err(WordError::MissingAssignment(_))
        ));
    }

    #[test]
    fn law_requires_variable() {
        let (t, a, b, ..) = table();
        let e = Expr::Comm(vec![Expr::Sym(a), Expr::Sym(b)]);
        assert!(Law::new(e, &t).is_err());
    }

    #[test]
    fn law_shift() {
        let (t, a, _, _, x) = table();
        let l = Law::new(
            Expr::Comm(vec![Expr::Sym(a), Expr::Sym(x), Expr::Sym(x)]),
            &t,
        )
        .unwrap();
        assert_eq!(l.shift(&t), 1);
        let l = Law::new(Expr::Comm(vec![Expr::Sym(x), Expr::Sym(x)]), &t).unwrap();
        assert_eq!(l.shift(&t), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word_strategy() -> impl Strategy<Value = Word> {
            proptest::collection::vec((0usize..3, -3i64..=3), 0..12).prop_map(|ls| {
                Word::from_letters(ls.into_iter().map(|(s, e)| (s, BigInt::from(e))))
            })
        }

        proptest! {
            #[test]
            fn inverse_cancels(u in word_strategy()) {
                prop_assert!(u.mul(&u.inverse()).is_identity());
                prop_assert!(u.inverse().mul(&u).is_identity());
            }

            #[test]
            fn reduction_idempotent(u in word_strategy()) {
                let again = Word::from_letters(u.letters().iter().map(|l| (l.symbol, l.exp.clone())));
                prop_assert_eq!(again, u);
            }

            #[test]
            fn commutator_inverse_swaps(u in word_strategy(), v in word_strategy()) {
                prop_assert_eq!(Word::commutator(&u, &v).inverse(), Word::commutator(&v, &u));
            }

            #[test]
            fn substitution_respects_powers(v in word_strategy(), n in -4i64..=4) {
                let mut t = SymbolTable::new();
                for name in ["a", "b", "c"] { t.declare(name, SymbolKind::Generator).unwrap(); }
                let x = t.declare("x", SymbolKind::Variable).unwrap();
                let law = Law::new(Expr::Power(Box::new(Expr::Sym(x)), BigInt::from(n)), &t).unwrap();
                let mut asg = HashMap::new();
                asg.insert(x, v.clone());
                prop_assert_eq!(substitute(&law, &asg, &t).unwrap(), v.pow(&BigInt::from(n)));
            }
        }
    }
}
