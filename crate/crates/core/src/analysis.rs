//! Structural invariants of computed quotients.
//!
//! Lower central terms are read off the generator weights, which is valid
//! for the graded presentations built by [`crate::nq`].

use std::collections::BTreeSet;
use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::AnalysisError;
use crate::nq::{nilpotent_quotient, NqConfig, NqResult};
use crate::pcpres::{Definition, ExponentVector, PcBuilder, PcPresentation};
use crate::zlinalg::{abelian_invariants, hnf, AbelianInvariants, IntMatrix};

/// One lower central layer `γ_k / γ_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub weight: usize,
    /// Generators of weight `>= k`; they generate `γ_k`.
    pub gamma: Range<usize>,
    /// Generators of weight exactly `k`.
    pub generators: Range<usize>,
    pub invariants: AbelianInvariants,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcsData {
    /// `layers[k - 1]` describes `γ_k / γ_{k+1}`.
    pub layers: Vec<Layer>,
}

impl LcsData {
    /// Number of nontrivial layers.
    pub fn class(&self) -> usize {
        self.layers
            .iter()
            .rposition(|l| !l.invariants.is_trivial())
            .map_or(0, |i| i + 1)
    }

    pub fn layer(&self, k: usize) -> Option<&Layer> {
        k.checked_sub(1).and_then(|i| self.layers.get(i))
    }
}

fn require_graded(p: &PcPresentation) -> Result<(), AnalysisError> {
    if p.is_graded() {
        Ok(())
    } else {
        Err(AnalysisError::Ungraded)
    }
}

/// Range of the generators of weight exactly `k`.
fn weight_range(p: &PcPresentation, k: usize) -> Range<usize> {
    let w = p.weights();
    w.partition_point(|&x| x < k)..w.partition_point(|&x| x <= k)
}

/// Invariants of the layer spanned by `range`: power relations read modulo
/// generators of higher weight.
fn layer_invariants(
    p: &PcPresentation,
    range: &Range<usize>,
) -> Result<AbelianInvariants, AnalysisError> {
    let rows = layer_relations(p, range);
    let m = IntMatrix::from_rows(range.len(), &rows)?;
    Ok(abelian_invariants(&m, range.len())?)
}

fn layer_relations(p: &PcPresentation, range: &Range<usize>) -> Vec<Vec<BigInt>> {
    let mut rows = Vec::new();
    for g in range.clone() {
        let m = p.rel_order(g);
        if m == 0 {
            continue;
        }
        let mut row = vec![BigInt::zero(); range.len()];
        row[g - range.start] = BigInt::from(m);
        for &(l, e) in p.power(g) {
            if range.contains(&l) {
                row[l - range.start] -= e;
            }
        }
        rows.push(row);
    }
    rows
}

pub fn lower_central_data(p: &PcPresentation) -> Result<LcsData, AnalysisError> {
    require_graded(p)?;
    let class = p.class();
    let mut layers = Vec::with_capacity(class);
    for k in 1..=class {
        let generators = weight_range(p, k);
        let invariants = layer_invariants(p, &generators)?;
        layers.push(Layer {
            weight: k,
            gamma: generators.start..p.len(),
            generators,
            invariants,
        });
    }
    Ok(LcsData { layers })
}

/// Whether `x` lies in `γ_k`.
pub fn is_in_gamma(p: &PcPresentation, x: &ExponentVector, k: usize) -> bool {
    x.as_slice()
        .iter()
        .enumerate()
        .all(|(g, &e)| e == 0 || p.weight(g) >= k)
}

/// Exponent of `γ_k / γ_{k+1}`; 0 when the layer has free rank.
pub fn central_section_exponent(p: &PcPresentation, k: usize) -> Result<BigInt, AnalysisError> {
    require_graded(p)?;
    let class = p.class();
    if k == 0 || k > class + 1 {
        return Err(AnalysisError::WeightOutOfRange { k, class });
    }
    Ok(layer_invariants(p, &weight_range(p, k))?.exponent())
}

/// Exponent of the subgroup `γ_k` itself when it is abelian, which holds
/// once `2k` exceeds the class; 0 when it has free rank.
pub fn gamma_exponent(p: &PcPresentation, k: usize) -> Result<Option<BigInt>, AnalysisError> {
    require_graded(p)?;
    let class = p.class();
    if k == 0 || k > class + 1 {
        return Err(AnalysisError::WeightOutOfRange { k, class });
    }
    if 2 * k <= class {
        return Ok(None);
    }
    let range = p.weights().partition_point(|&x| x < k)..p.len();
    Ok(Some(layer_invariants(p, &range)?.exponent()))
}

/// Number of infinite cyclic factors.
pub fn hirsch_length(p: &PcPresentation) -> usize {
    p.rel_orders().iter().filter(|&&m| m == 0).count()
}

#[derive(Clone, Debug)]
pub struct TorsionDecomposition {
    pub torsion_order: BigInt,
    pub torsion_order_primes: BTreeSet<BigInt>,
    /// `torsion_layer_divisors[k - 1]`: elementary divisors of the image of
    /// the torsion subgroup in `γ_k / γ_{k+1}`.
    pub torsion_layer_divisors: Vec<Vec<BigInt>>,
    /// The torsion-free quotient, graded by its isolator series.
    pub quotient: NqResult,
    /// Image of every pc generator of the input presentation.
    pub projection: Vec<ExponentVector>,
    /// Normal forms generating the torsion subgroup.
    pub torsion_generators: Vec<ExponentVector>,
}

/// Images of the pc generators of `source` in `target`, determined by the
/// definitions of the generators and the images of the input generators.
pub fn project_via_definitions(
    source: &NqResult,
    target: &PcPresentation,
    generator_images: &[ExponentVector],
) -> Result<Vec<ExponentVector>, AnalysisError> {
    let p = &source.presentation;
    let mut proj: Vec<ExponentVector> = Vec::with_capacity(p.len());
    let eval =
        |proj: &[ExponentVector], word: &[(usize, i64)]| -> Result<ExponentVector, AnalysisError> {
            let mut acc = target.identity();
            for &(l, e) in word {
                let y = target.power_of(&proj[l], &BigInt::from(e))?;
                acc = target.multiply(&acc, &y)?;
            }
            Ok(acc)
        };
    for g in 0..p.len() {
        let (word, value) = match p.definition(g) {
            Some(Definition::Image(k)) => {
                let img = generator_images.get(k).ok_or_else(|| {
                    AnalysisError::Verification(format!("no image for input generator {}", k))
                })?;
                (source.images[k].to_sparse(), img.clone())
            }
            Some(Definition::Commutator { j, i }) => (
                p.comm(j, i).to_vec(),
                target.commutator(&proj[j], &proj[i])?,
            ),
            Some(Definition::Power(i)) => (
                p.power(i).to_vec(),
                target.power_of(&proj[i], &BigInt::from(p.rel_order(i)))?,
            ),
            None => {
                return Err(AnalysisError::Verification(format!(
                    "generator {} has no definition",
                    g
                )))
            }
        };
        let at = word.iter().position(|&(l, _)| l == g);
        let ok = at.is_some_and(|a| word[a].1 == 1 && a + 1 == word.len());
        let Some(at) = at.filter(|_| ok) else {
            return Err(AnalysisError::Verification(format!(
                "definition of generator {} is not of the form u*g",
                g
            )));
        };
        let before = eval(&proj, &word[..at])?;
        proj.push(target.multiply(&target.invert(&before)?, &value)?);
    }
    Ok(proj)
}

/// Checks that `images` of the pc generators of `source` satisfy every
/// relation of its presentation in `target`, i.e. define a homomorphism.
pub fn respects_relations(
    source: &PcPresentation,
    target: &PcPresentation,
    images: &[ExponentVector],
) -> Result<bool, AnalysisError> {
    let eval = |word: &[(usize, i64)]| -> Result<ExponentVector, AnalysisError> {
        let mut acc = target.identity();
        for &(l, e) in word {
            acc = target.multiply(&acc, &target.power_of(&images[l], &BigInt::from(e))?)?;
        }
        Ok(acc)
    };
    for g in 0..source.len() {
        let m = source.rel_order(g);
        if m != 0 && target.power_of(&images[g], &BigInt::from(m))? != eval(source.power(g))? {
            return Ok(false);
        }
        for i in 0..g {
            if target.commutator(&images[g], &images[i])? != eval(source.comm(g, i))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Induced generating sequence of a subgroup, one entry per leading index.
struct Sifter<'a> {
    p: &'a PcPresentation,
    table: Vec<Option<ExponentVector>>,
}

impl<'a> Sifter<'a> {
    fn new(p: &'a PcPresentation) -> Self {
        Sifter {
            p,
            table: vec![None; p.len()],
        }
    }

    fn add(&mut self, x: ExponentVector) -> Result<(), AnalysisError> {
        let p = self.p;
        let mut queue = vec![x];
        while let Some(mut x) = queue.pop() {
            while let Some(d) = x.leading() {
                let m = p.rel_order(d);
                let Some(y) = &self.table[d] else {
                    let z = self.normalize(x, d)?;
                    self.close(&z, d, &mut queue)?;
                    self.table[d] = Some(z);
                    break;
                };
                let (a, b) = (x[d], y[d]);
                if a % b == 0 {
                    let q = y_power(p, y, -(a / b))?;
                    x = p.multiply(&x, &q)?;
                    continue;
                }
                let eg = b.extended_gcd(&a);
                let z = p.multiply(&y_power(p, y, eg.x)?, &y_power(p, &x, eg.y)?)?;
                let z = self.normalize(z, d)?;
                debug_assert!(m == 0 || m % z[d] == 0);
                let old = self.table[d].take().expect("entry present");
                self.close(&z, d, &mut queue)?;
                self.table[d] = Some(z);
                queue.push(old);
                queue.push(x);
                break;
            }
        }
        Ok(())
    }

    /// Scales `x` so that its leading exponent is positive and, for a
    /// finite relative order, divides it.
    fn normalize(&self, x: ExponentVector, d: usize) -> Result<ExponentVector, AnalysisError> {
        let m = self.p.rel_order(d);
        if m == 0 {
            if x[d] < 0 {
                return Ok(self.p.invert(&x)?);
            }
            return Ok(x);
        }
        let eg = x[d].extended_gcd(&m);
        let s = eg.x.rem_euclid(m / eg.gcd);
        y_power(self.p, &x, s)
    }

    /// Queues the commutators of a new entry with the table and its
    /// relative power.
    fn close(
        &self,
        z: &ExponentVector,
        d: usize,
        queue: &mut Vec<ExponentVector>,
    ) -> Result<(), AnalysisError> {
        let m = self.p.rel_order(d);
        if m != 0 {
            queue.push(y_power(self.p, z, m / z[d])?);
        }
        for (e, y) in self.table.iter().enumerate() {
            if let Some(y) = y {
                if e != d {
                    queue.push(self.p.commutator(z, y)?);
                }
            }
        }
        Ok(())
    }
}

fn y_power(
    p: &PcPresentation,
    x: &ExponentVector,
    e: i64,
) -> Result<ExponentVector, AnalysisError> {
    Ok(p.power_of(x, &BigInt::from(e))?)
}

/// Presentation of `A x B` with the generators of `a` first.
fn direct_product(a: &PcPresentation, b: &PcPresentation) -> Result<PcPresentation, AnalysisError> {
    let (na, nb) = (a.len(), b.len());
    let mut d = PcBuilder::ungraded(na + nb);
    for (p, off) in [(a, 0), (b, na)] {
        let shift = |w: &[(usize, i64)]| w.iter().map(|&(g, e)| (g + off, e)).collect::<Vec<_>>();
        for g in 0..p.len() {
            d.set_power(g + off, p.rel_order(g), shift(p.power(g)));
            for i in 0..g {
                d.set_comm(g + off, i + off, shift(p.comm(g, i)));
            }
        }
    }
    Ok(d.build()?)
}

fn prime_factors(n: &BigInt) -> BTreeSet<BigInt> {
    let mut out = BTreeSet::new();
    let mut n = n.abs();
    let mut q = BigInt::from(2);
    while &q * &q <= n {
        while (&n % &q).is_zero() {
            out.insert(q.clone());
            n /= &q;
        }
        q += 1;
    }
    if n > BigInt::one() {
        out.insert(n);
    }
    out
}

/// Invariants of `S / R` where `S` is spanned by `span` together with the
/// rows `rel` of `R`.
fn relative_invariants(
    dim: usize,
    rel: &[Vec<BigInt>],
    span: &[Vec<BigInt>],
) -> Result<AbelianInvariants, AnalysisError> {
    let mut rows = rel.to_vec();
    rows.extend(span.iter().cloned());
    if rows.is_empty() {
        return Ok(AbelianInvariants::default());
    }
    let (h, _) = hnf(&IntMatrix::from_rows(dim, &rows)?);
    let basis: Vec<(usize, Vec<BigInt>)> = (0..h.rows())
        .filter(|&r| !h.is_zero_row(r))
        .map(|r| {
            let row = h.row(r).to_vec();
            (
                row.iter().position(|x| !x.is_zero()).expect("nonzero row"),
                row,
            )
        })
        .collect();
    let mut coords = Vec::with_capacity(rel.len());
    for r in rel {
        let mut cur = r.clone();
        let mut x = vec![BigInt::zero(); basis.len()];
        for (i, (c, b)) in basis.iter().enumerate() {
            let (q, rem) = cur[*c].div_rem(&b[*c]);
            if !rem.is_zero() {
                return Err(AnalysisError::Verification(
                    "relation outside its span".into(),
                ));
            }
            for (t, v) in cur.iter_mut().zip(b) {
                *t -= &q * v;
            }
            x[i] = q;
        }
        coords.push(x);
    }
    Ok(abelian_invariants(
        &IntMatrix::from_rows(basis.len(), &coords)?,
        basis.len(),
    )?)
}

/// Torsion subgroup `T` of a computed quotient `G`.
///
/// `G / T` is computed directly by rerunning the quotient algorithm with
/// every new layer saturated; `T` is then the kernel of the projection,
/// found by sifting the graph of the projection in `G/T x G`.
pub fn torsion_decomposition(r: &NqResult) -> Result<TorsionDecomposition, AnalysisError> {
    let config = NqConfig {
        max_class: Some(r.class_achieved),
        strategy: r
            .stats
            .last()
            .map_or(NqConfig::default().strategy, |s| s.strategy),
        check_samples: 0,
        torsion_free: true,
        ..NqConfig::default()
    };
    let quotient = nilpotent_quotient(&r.input, &config)?;
    let q = &quotient.presentation;
    for k in 1..=q.class() {
        if !layer_invariants(q, &weight_range(q, k))?.torsion.is_empty() {
            return Err(AnalysisError::Verification(format!(
                "layer {} of the torsion-free quotient has torsion",
                k
            )));
        }
    }
    let p = &r.presentation;
    let projection = project_via_definitions(r, q, &quotient.images)?;
    for (k, img) in r.images.iter().enumerate() {
        let mut acc = q.identity();
        for (g, &e) in img.as_slice().iter().enumerate() {
            acc = q.multiply(&acc, &q.power_of(&projection[g], &BigInt::from(e))?)?;
        }
        if acc != quotient.images[k] {
            return Err(AnalysisError::Verification(format!(
                "projection disagrees on input generator {}",
                k
            )));
        }
    }
    if !respects_relations(p, q, &projection)? {
        return Err(AnalysisError::Verification(
            "projection is not a homomorphism".into(),
        ));
    }

    let (na, n) = (q.len(), p.len());
    let prod = direct_product(q, p)?;
    let mut sifter = Sifter::new(&prod);
    for g in 0..n {
        let mut v = projection[g].as_slice().to_vec();
        v.resize(na + n, 0);
        v[na + g] = 1;
        sifter.add(ExponentVector::from_vec(v))?;
    }
    let mut torsion_order = BigInt::one();
    let mut torsion_generators = Vec::new();
    for (d, entry) in sifter.table.iter().enumerate().skip(na) {
        if let Some(x) = entry {
            let m = prod.rel_order(d);
            if m == 0 {
                return Err(AnalysisError::Verification(
                    "kernel of the projection is infinite".into(),
                ));
            }
            torsion_order *= m / x[d];
            torsion_generators.push(ExponentVector::from_vec(x.as_slice()[na..].to_vec()));
        }
    }

    let mut torsion_layer_divisors = Vec::new();
    let mut layered = BigInt::one();
    for k in 1..=p.class() {
        let range = weight_range(p, k);
        let span: Vec<Vec<BigInt>> = torsion_generators
            .iter()
            .filter(|t| t.leading().is_some_and(|l| range.contains(&l)))
            .map(|t| {
                t.as_slice()[range.clone()]
                    .iter()
                    .map(|&e| BigInt::from(e))
                    .collect()
            })
            .collect();
        let inv = relative_invariants(range.len(), &layer_relations(p, &range), &span)?;
        if inv.free_rank != 0 {
            return Err(AnalysisError::Verification(format!(
                "torsion image in layer {} is infinite",
                k
            )));
        }
        layered *= inv.torsion_order();
        torsion_layer_divisors.push(inv.torsion);
    }
    if layered != torsion_order {
        return Err(AnalysisError::Verification(format!(
            "layer orders multiply to {} but the torsion subgroup has order {}",
            layered, torsion_order
        )));
    }
    Ok(TorsionDecomposition {
        torsion_order_primes: prime_factors(&torsion_order),
        torsion_order,
        torsion_layer_divisors,
        quotient,
        projection,
        torsion_generators,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    Different(String),
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        *self == Comparison::Equal
    }
}

/// Compares two presentations generator by generator.
pub fn compare_canonical(a: &PcPresentation, b: &PcPresentation) -> Comparison {
    if a.is_graded() != b.is_graded() {
        return Comparison::Different("only one presentation is graded".into());
    }
    if a.len() != b.len() {
        return Comparison::Different(format!("{} generators vs {}", a.len(), b.len()));
    }
    for g in 0..a.len() {
        if a.weight(g) != b.weight(g) {
            return Comparison::Different(format!(
                "weight of generator {}: {} vs {}",
                g,
                a.weight(g),
                b.weight(g)
            ));
        }
        if a.rel_order(g) != b.rel_order(g) {
            return Comparison::Different(format!(
                "relative order of generator {}: {} vs {}",
                g,
                a.rel_order(g),
                b.rel_order(g)
            ));
        }
        if a.power(g) != b.power(g) {
            return Comparison::Different(format!("power relation of generator {}", g));
        }
        for i in 0..g {
            if a.comm(g, i) != b.comm(g, i) {
                return Comparison::Different(format!("commutator relation [g{}, g{}]", g, i));
            }
        }
    }
    Comparison::Equal
}

/// Certificate that `source` and `target` are isomorphic: the input
/// generators of `source` map onto those of `target`, the map respects
/// every relation of `source`, both groups are torsion-free and their
/// Hirsch lengths agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomorphismCertificate {
    pub homomorphism: bool,
    pub source_torsion_free: bool,
    pub target_torsion_free: bool,
    pub source_hirsch: usize,
    pub target_hirsch: usize,
}

impl IsomorphismCertificate {
    pub fn holds(&self) -> bool {
        self.homomorphism
            && self.source_torsion_free
            && self.target_torsion_free
            && self.source_hirsch == self.target_hirsch
    }
}

/// Builds the certificate for the map sending input generator `k` of
/// `source` to input generator `k` of `target`.
pub fn isomorphism_certificate(
    source: &NqResult,
    target: &NqResult,
) -> Result<IsomorphismCertificate, AnalysisError> {
    if source.images.len() != target.images.len() {
        return Err(AnalysisError::Verification(
            "different numbers of input generators".into(),
        ));
    }
    let tp = &target.presentation;
    let images = project_via_definitions(source, tp, &target.images)?;
    let homomorphism = respects_relations(&source.presentation, tp, &images)?;
    let torsion_free = |r: &NqResult| -> Result<bool, AnalysisError> {
        Ok(torsion_decomposition(r)?.torsion_order.is_one())
    };
    Ok(IsomorphismCertificate {
        homomorphism,
        source_torsion_free: torsion_free(source)?,
        target_torsion_free: torsion_free(target)?,
        source_hirsch: hirsch_length(&source.presentation),
        target_hirsch: hirsch_length(tp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_input;

    fn quotient(text: &str, max_class: Option<usize>) -> NqResult {
        let input = parse_input(text).unwrap();
        nilpotent_quotient(
            &input,
            &NqConfig {
                max_class,
                ..NqConfig::default()
            },
        )
        .unwrap()
    }

    fn free_abelian(rank: usize) -> NqResult {
        let names: Vec<String> = (0..rank).map(|i| format!("a{}", i)).collect();
        let mut text = format!(
            "generators: {}\nlaws: [x, y]\nvariables: x y\n",
            names.join(" ")
        );
        if rank == 0 {
            text = "generators:\n".into();
        }
        quotient(&text, None)
    }

    #[test]
    fn free_abelian_layers() {
        let r = free_abelian(2);
        let lcs = lower_central_data(&r.presentation).unwrap();
        assert_eq!(lcs.class(), 1);
        assert_eq!(
            lcs.layers[0].invariants,
            AbelianInvariants {
                torsion: vec![],
                free_rank: 2
            }
        );
        assert_eq!(
            central_section_exponent(&r.presentation, 2).unwrap(),
            BigInt::one()
        );
        assert_eq!(hirsch_length(&free_abelian(3).presentation), 3);
    }

    #[test]
    fn free_nilpotent_layers() {
        let r = quotient("generators: a b", Some(3));
        let lcs = lower_central_data(&r.presentation).unwrap();
        let ranks: Vec<usize> = lcs.layers.iter().map(|l| l.invariants.free_rank).collect();
        assert_eq!(ranks, vec![2, 1, 2]);
        assert_eq!(lcs.layer(2).unwrap().gamma, 2..r.presentation.len());
        let two = quotient("generators: a b", Some(2));
        assert_eq!(hirsch_length(&two.presentation), 3);
        assert!(matches!(
            central_section_exponent(&two.presentation, 4),
            Err(AnalysisError::WeightOutOfRange { k: 4, class: 2 })
        ));
    }

    #[test]
    fn abelian_tail_exponent() {
        // dihedral of order 16: γ_2 = <a^2> is cyclic of order 4
        let r = quotient("generators: a b\nrelators: a^8, b^2, (a b)^2", None);
        let p = &r.presentation;
        assert_eq!(p.class(), 3);
        assert_eq!(gamma_exponent(p, 1).unwrap(), None);
        assert_eq!(gamma_exponent(p, 2).unwrap(), Some(BigInt::from(4)));
        assert_eq!(gamma_exponent(p, 4).unwrap(), Some(BigInt::one()));
    }

    #[test]
    fn gamma_membership() {
        let r = quotient("generators: a b", Some(3));
        let p = &r.presentation;
        assert!(is_in_gamma(p, &p.identity(), 7));
        assert!(!is_in_gamma(p, &r.images[0], 2));
        let c = p.commutator(&r.images[0], &r.images[1]).unwrap();
        assert!(is_in_gamma(p, &c, 2));
        assert!(!is_in_gamma(p, &c, 3));
    }

    #[test]
    fn finite_group_has_no_hirsch_length() {
        let r = quotient("generators: a b\nrelators: a^4, b^2, b^-1 a b a", None);
        assert_eq!(hirsch_length(&r.presentation), 0);
    }

    #[test]
    fn torsion_of_cyclic_times_integers() {
        let r = quotient("generators: a b\nrelators: b^6, [a, b]", None);
        let t = torsion_decomposition(&r).unwrap();
        assert_eq!(t.torsion_order, BigInt::from(6));
        let primes: Vec<BigInt> = t.torsion_order_primes.iter().cloned().collect();
        assert_eq!(primes, vec![BigInt::from(2), BigInt::from(3)]);
        let q = &t.quotient.presentation;
        assert_eq!(q.len(), 1);
        assert_eq!(hirsch_length(q), 1);
    }

    #[test]
    fn torsion_free_input_is_its_own_quotient() {
        let r = quotient("generators: a b", Some(3));
        let t = torsion_decomposition(&r).unwrap();
        assert!(t.torsion_order.is_one());
        assert!(t.torsion_order_primes.is_empty());
        assert!(t.torsion_layer_divisors.iter().all(|d| d.is_empty()));
        assert!(compare_canonical(&t.quotient.presentation, &r.presentation).is_equal());
    }

    #[test]
    fn comparison() {
        let r = quotient("generators: a b", Some(3));
        assert!(compare_canonical(&r.presentation, &r.presentation).is_equal());
        let a2 = free_abelian(2);
        let a3 = free_abelian(3);
        assert!(matches!(
            compare_canonical(&a2.presentation, &a3.presentation),
            Comparison::Different(_)
        ));
    }

    #[test]
    fn certificate_for_identical_groups() {
        let r = quotient("generators: a b", Some(3));
        let s = quotient("generators: u v", Some(3));
        let c = isomorphism_certificate(&r, &s).unwrap();
        assert!(c.holds(), "{:?}", c);
        let f = quotient("generators: u v\nrelators: u^2", Some(3));
        assert!(!isomorphism_certificate(&r, &f).unwrap().holds());
    }
}
