//! Truncated graded modules over a presented algebra and the dimension tables of its
//! projective scheme: tail Homs `Hom(A_{≥m}, M)_j`, Γ-recovery, the χ condition,
//! cohomology of the structure sheaf, Kronecker endomorphism dimensions and the Euler-series
//! invariant.
//!
//! Shift convention: `M[n]_i = M_{n+i}`. A degree-`j` map raises degrees by `j`, so
//! `Hom(M, N)_j = Hom(M, N[j])_0`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::coherence::{present_minimal, RightIdealPresentation};
use crate::error::{Error, Result};
use crate::groebner::{complete_polys, preferred_order, GroebnerBasis};
use crate::hilbert::{euler_poly_test, hilbert_series, EulerTest, RationalSeries};
use crate::linalg::{sparse_from_entries, sparse_mod_p, FpEchelon, SparseEchelon, SparseVec};
use crate::poly::NcPolynomial;
use crate::presentation::AlgebraPresentation;
use crate::quadratic::{left_factors, zhang_regular_check, zhang_twist, GradedAutomorphism, RegularityReport};
use crate::scalar::{Field, Scalar};
use crate::word::Word;

pub const SHIFT_CONVENTION: &str = "M[n]_i = M_(n+i); Hom(M, N)_j = Hom(M, N[j])_0";

/// Prime used for modular rank bounds over Q.
const MODULAR_PRIME: u32 = 2_147_483_647;
/// Hom systems over Q with more unknowns than this are first ranked modulo a prime.
const EXACT_LIMIT: usize = 4000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleRelation {
    pub degree: i32,
    /// One entry per generator; entry `i` is homogeneous of degree `degree - d_i` or zero.
    pub components: Vec<NcPolynomial>,
}

/// Cokernel of a map of free graded right modules, known on a window of degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedGradedModule {
    pub generator_degrees: Vec<i32>,
    pub relations: Vec<ModuleRelation>,
    pub window: (i32, i32),
    /// Images of the generators in `A` when the module is a right ideal.
    pub embedding: Option<Vec<NcPolynomial>>,
}

impl TruncatedGradedModule {
    pub fn free(generator_degrees: Vec<i32>, window: (i32, i32)) -> Self {
        TruncatedGradedModule {
            generator_degrees,
            relations: Vec::new(),
            window,
            embedding: None,
        }
    }

    /// `A` itself.
    pub fn algebra(window: (i32, i32)) -> Self {
        Self::free(vec![0], window)
    }

    /// `k = A / A_{≥1}`.
    pub fn residue_field(pres: &AlgebraPresentation, window: (i32, i32)) -> Self {
        let f = pres.field();
        let relations = pres
            .weights()
            .iter()
            .enumerate()
            .map(|(i, &w)| ModuleRelation {
                degree: w as i32,
                components: vec![NcPolynomial::generator(f, i)],
            })
            .collect();
        TruncatedGradedModule {
            generator_degrees: vec![0],
            relations,
            window,
            embedding: None,
        }
    }

    /// The right ideal presented by `ip`, with its embedding into `A`.
    pub fn from_ideal(ip: &RightIdealPresentation, window: (i32, i32)) -> Self {
        TruncatedGradedModule {
            generator_degrees: ip.generator_degrees.iter().map(|&d| d as i32).collect(),
            relations: ip
                .syzygies
                .iter()
                .map(|s| ModuleRelation {
                    degree: s.degree as i32,
                    components: s.components.clone(),
                })
                .collect(),
            window,
            embedding: Some(ip.generators.clone()),
        }
    }

    /// `M[k]`.
    pub fn shift(&self, k: i32) -> Self {
        TruncatedGradedModule {
            generator_degrees: self.generator_degrees.iter().map(|d| d - k).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| ModuleRelation {
                    degree: r.degree - k,
                    components: r.components.clone(),
                })
                .collect(),
            window: (self.window.0 - k, self.window.1 - k),
            embedding: None,
        }
    }

    pub fn direct_sum(&self, other: &Self, field: Field) -> Self {
        let (a, b) = (self.generator_degrees.len(), other.generator_degrees.len());
        let zero = NcPolynomial::zero(field);
        let mut relations = Vec::new();
        for r in &self.relations {
            let mut c = r.components.clone();
            c.resize(a + b, zero.clone());
            relations.push(ModuleRelation {
                degree: r.degree,
                components: c,
            });
        }
        for r in &other.relations {
            let mut c = vec![zero.clone(); a];
            c.extend(r.components.iter().cloned());
            relations.push(ModuleRelation {
                degree: r.degree,
                components: c,
            });
        }
        let mut generator_degrees = self.generator_degrees.clone();
        generator_degrees.extend(&other.generator_degrees);
        TruncatedGradedModule {
            generator_degrees,
            relations,
            window: (self.window.0.max(other.window.0), self.window.1.min(other.window.1)),
            embedding: None,
        }
    }

    pub fn min_generator_degree(&self) -> Option<i32> {
        self.generator_degrees.iter().copied().min()
    }

    /// Checks the relation matrix against the generator degrees.
    pub fn validate(&self, weights: &[u32]) -> Result<()> {
        if self.window.0 > self.window.1 {
            return Err(Error::Parameter(format!("empty window {:?}", self.window)));
        }
        for (k, r) in self.relations.iter().enumerate() {
            if r.components.len() != self.generator_degrees.len() {
                return Err(Error::Parameter(format!(
                    "relation {k} has {} components for {} generators",
                    r.components.len(),
                    self.generator_degrees.len()
                )));
            }
            for (c, &d) in r.components.iter().zip(&self.generator_degrees) {
                if c.is_zero() {
                    continue;
                }
                let ok = c.homogeneous_degree(weights).map(|e| e as i32 == r.degree - d);
                if ok != Some(true) {
                    return Err(Error::Parameter(format!(
                        "relation {k}: component is not homogeneous of degree {}",
                        r.degree - d
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `M_t`: free coordinates `(generator, normal word)` modulo the relation row space.
struct Slice {
    index: HashMap<(usize, Word), u32>,
    free: Vec<(usize, Word)>,
    rels: SparseEchelon,
    /// Free coordinate of each quotient basis vector.
    quotient: Vec<u32>,
    qpos: HashMap<u32, u32>,
}

impl Slice {
    fn dim(&self) -> usize {
        self.quotient.len()
    }
}

/// Lazily built degree slices of one module.
struct SliceCache<'a> {
    gb: &'a GroebnerBasis,
    module: &'a TruncatedGradedModule,
    slices: HashMap<i32, Slice>,
}

impl<'a> SliceCache<'a> {
    fn new(gb: &'a GroebnerBasis, module: &'a TruncatedGradedModule) -> Self {
        SliceCache {
            gb,
            module,
            slices: HashMap::new(),
        }
    }

    fn ensure(&mut self, t: i32) -> Result<()> {
        if self.slices.contains_key(&t) {
            return Ok(());
        }
        if t > self.module.window.1 {
            return Err(Error::WindowTooNarrow {
                required: t,
                window: self.module.window.1,
            });
        }
        let (gb, m) = (self.gb, self.module);
        let field = gb.field();
        let mut free = Vec::new();
        for (i, &d) in m.generator_degrees.iter().enumerate() {
            if d <= t {
                for w in gb.normal_words((t - d) as u32)? {
                    free.push((i, w));
                }
            }
        }
        let index: HashMap<(usize, Word), u32> =
            free.iter().cloned().enumerate().map(|(k, key)| (key, k as u32)).collect();
        let mut rels = SparseEchelon::new(field);
        for r in &m.relations {
            if r.degree > t {
                continue;
            }
            for v in gb.normal_words((t - r.degree) as u32)? {
                let mut entries = Vec::new();
                for (i, c) in r.components.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let nf = gb.normal_form(&c.mul_word_right(&v))?;
                    for (u, x) in nf.terms() {
                        entries.push((index[&(i, u.clone())], x.clone()));
                    }
                }
                rels.insert(sparse_from_entries(field, entries));
            }
        }
        let quotient: Vec<u32> = (0..free.len() as u32).filter(|&c| !rels.is_pivot(c)).collect();
        let qpos = quotient.iter().enumerate().map(|(k, &c)| (c, k as u32)).collect();
        self.slices.insert(
            t,
            Slice {
                index,
                free,
                rels,
                quotient,
                qpos,
            },
        );
        Ok(())
    }

    fn dim(&mut self, t: i32) -> Result<usize> {
        if self.module.min_generator_degree().is_none_or(|d| t < d) {
            return Ok(0);
        }
        self.ensure(t)?;
        Ok(self.slices[&t].dim())
    }

    /// Quotient coordinates of `q · a`, where `q` is basis vector `k` of `M_t` and `a` is
    /// homogeneous of degree `e`.
    fn act(&mut self, t: i32, k: usize, a: &NcPolynomial, e: i32) -> Result<SparseVec> {
        self.ensure(t)?;
        self.ensure(t + e)?;
        let (i, w) = {
            let s = &self.slices[&t];
            s.free[s.quotient[k] as usize].clone()
        };
        let nf = self.gb.normal_form(&a.mul_word_left(&w))?;
        let dst = &self.slices[&(t + e)];
        let v = sparse_from_entries(
            self.gb.field(),
            nf.terms().map(|(u, c)| (dst.index[&(i, u.clone())], c.clone())),
        );
        let v = if dst.rels.rank() == 0 { v } else { dst.rels.reduce_full(&v) };
        Ok(v.into_iter().map(|(c, x)| (dst.qpos[&c], x)).collect())
    }
}

enum Echelon {
    Exact(SparseEchelon),
    Modular(FpEchelon, u32),
}

impl Echelon {
    fn for_field(field: Field) -> Self {
        match field {
            Field::Prime(p) => Echelon::Modular(FpEchelon::new(p), p),
            Field::Rational => Echelon::Exact(SparseEchelon::new(field)),
        }
    }

    /// `None` when a coefficient cannot be reduced modulo the prime.
    fn insert(&mut self, v: SparseVec) -> Option<bool> {
        match self {
            Echelon::Exact(e) => Some(e.insert(v)),
            Echelon::Modular(e, p) => Some(e.insert(sparse_mod_p(&v, *p)?)),
        }
    }

    fn rank(&self) -> usize {
        match self {
            Echelon::Exact(e) => e.rank(),
            Echelon::Modular(e, _) => e.rank(),
        }
    }
}

/// Block offsets of the degree-`j` Hom system: unknowns per generator, equations per relation.
fn hom_layout(src: &TruncatedGradedModule, tgt: &mut SliceCache, j: i32) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut unknowns = vec![0];
    for &d in &src.generator_degrees {
        let n = tgt.dim(d + j)?;
        unknowns.push(unknowns.last().unwrap() + n);
    }
    let mut equations = vec![0];
    for r in &src.relations {
        let n = tgt.dim(r.degree + j)?;
        equations.push(equations.last().unwrap() + n);
    }
    Ok((unknowns, equations))
}

/// Feeds the columns of the degree-`j` Hom system to `sink`: column `(g, k)` is the image
/// under every relation of the candidate sending generator `g` to basis vector `k`.
fn hom_columns(
    src: &TruncatedGradedModule,
    tgt: &mut SliceCache,
    j: i32,
    sink: &mut dyn FnMut(SparseVec) -> bool,
) -> Result<bool> {
    let (unknowns, equations) = hom_layout(src, tgt, j)?;
    for (g, &d) in src.generator_degrees.iter().enumerate() {
        for k in 0..unknowns[g + 1] - unknowns[g] {
            let mut col = Vec::new();
            for (s, r) in src.relations.iter().enumerate() {
                let c = &r.components[g];
                if c.is_zero() {
                    continue;
                }
                let off = equations[s] as u32;
                col.extend(tgt.act(d + j, k, c, r.degree - d)?.into_iter().map(|(i, x)| (i + off, x)));
            }
            if !sink(col) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn hom_rank(src: &TruncatedGradedModule, tgt: &mut SliceCache, j: i32, mut ech: Echelon) -> Result<Option<usize>> {
    let mut ok = true;
    hom_columns(src, tgt, j, &mut |v| {
        ok = ech.insert(v).is_some();
        ok
    })?;
    Ok(ok.then(|| ech.rank()))
}

/// Rank modulo a prime of the maps `g ↦ a·g` for `a` normal of degree `j`, a lower bound
/// for the Hom dimension when the source is a right ideal and the target is `A` shifted.
fn left_multiplication_rank(
    src: &TruncatedGradedModule,
    tgt: &mut SliceCache,
    j: i32,
    p: u32,
) -> Result<Option<usize>> {
    let Some(emb) = &src.embedding else { return Ok(None) };
    let t = tgt.module;
    if t.generator_degrees.len() != 1 || !t.relations.is_empty() {
        return Ok(None);
    }
    let g0 = t.generator_degrees[0];
    if j < g0 {
        return Ok(Some(0));
    }
    let (unknowns, _) = hom_layout(src, tgt, j)?;
    let gb = tgt.gb;
    let mut ech = FpEchelon::new(p);
    for a in gb.normal_words((j - g0) as u32)? {
        let mut v = Vec::new();
        for (g, e) in emb.iter().enumerate() {
            let t = src.generator_degrees[g] + j;
            let nf = gb.normal_form(&e.mul_word_left(&a))?;
            tgt.ensure(t)?;
            let idx = &tgt.slices[&t].index;
            v.extend(nf.terms().map(|(u, c)| (idx[&(0, u.clone())] + unknowns[g] as u32, c.clone())));
        }
        let Some(row) = sparse_mod_p(&sparse_from_entries(gb.field(), v), p) else {
            return Ok(None);
        };
        ech.insert(row);
    }
    Ok(Some(ech.rank()))
}

fn hom_dim_cached(src: &TruncatedGradedModule, tgt: &mut SliceCache, j: i32) -> Result<usize> {
    let (unknowns, _) = hom_layout(src, tgt, j)?;
    let n = *unknowns.last().unwrap();
    let field = tgt.gb.field();
    if field == Field::Rational && n > EXACT_LIMIT {
        // rank mod p ≤ rank over Q, so the kernel is squeezed between the two bounds
        if let Some(lb) = left_multiplication_rank(src, tgt, j, MODULAR_PRIME)? {
            let ech = Echelon::Modular(FpEchelon::new(MODULAR_PRIME), MODULAR_PRIME);
            if let Some(r) = hom_rank(src, tgt, j, ech)? {
                if n - r == lb {
                    return Ok(lb);
                }
            }
        }
    }
    let r = hom_rank(src, tgt, j, Echelon::for_field(field))?.expect("exact rank");
    Ok(n - r)
}

/// `dim Hom_A(M, N)_j`, solving the linear system of degree-`j` generator images that
/// respect every relation of `M`.
pub fn truncated_hom(gb: &GroebnerBasis, m: &TruncatedGradedModule, n: &TruncatedGradedModule, j: i32) -> Result<usize> {
    m.validate(gb.weights())?;
    n.validate(gb.weights())?;
    let mut cache = SliceCache::new(gb, n);
    hom_dim_cached(m, &mut cache, j)
}

/// `dim M_t`.
pub fn module_dim(gb: &GroebnerBasis, m: &TruncatedGradedModule, t: i32) -> Result<usize> {
    SliceCache::new(gb, m).dim(t)
}

fn max_weight(gb: &GroebnerBasis) -> u32 {
    gb.weights().iter().copied().max().unwrap_or(1)
}

/// Degree through which the syzygies of `A_{≥m}` are computed.
fn tail_bound(gb: &GroebnerBasis, m: u32, max_relation_degree: u32) -> u32 {
    m + 2 * max_weight(gb) + max_relation_degree
}

/// `A_{≥m}` presented by normal words in degrees `m..m+maxweight-1` and its syzygies through
/// `bound`.
pub fn tail_ideal(gb: &GroebnerBasis, m: u32, bound: u32) -> Result<RightIdealPresentation> {
    if m == 0 {
        return Err(Error::Parameter("tail cutoff must be positive".into()));
    }
    let field = gb.field();
    let mut gens: Vec<Word> = Vec::new();
    let mut degs = Vec::new();
    for t in m..m + max_weight(gb) {
        let words = gb.normal_words(t)?;
        let pos: HashMap<&Word, u32> = words.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
        let mut ech = SparseEchelon::new(field);
        for (g, &dg) in gens.iter().zip(&degs) {
            for v in gb.normal_words(t - dg)? {
                let nf = gb.normal_form(&NcPolynomial::monomial(field.one(), g.concat(&v)))?;
                ech.insert(sparse_from_entries(field, nf.terms().map(|(u, c)| (pos[u], c.clone()))));
            }
        }
        for (i, w) in words.iter().enumerate() {
            if ech.insert(vec![(i as u32, field.one())]) {
                gens.push(w.clone());
                degs.push(t);
            }
        }
    }
    let polys = gens.into_iter().map(|w| NcPolynomial::monomial(field.one(), w)).collect();
    present_minimal(gb, polys, degs, Vec::new(), bound)
}

/// Limit over the tail cutoff `m` of a dimension at internal degree `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableEntry {
    pub j: i32,
    pub m_values: Vec<u32>,
    /// `None` where the value could not be computed at that cutoff.
    pub dims: Vec<Option<usize>>,
    /// Equal values over the last three cutoffs.
    pub stabilized: bool,
    pub value: Option<usize>,
}

impl StableEntry {
    fn new(j: i32, m_values: Vec<u32>, dims: Vec<Option<usize>>) -> Self {
        let tail = &dims[dims.len().saturating_sub(3)..];
        let stabilized = tail.len() == 3 && tail.iter().all(|d| d.is_some() && *d == tail[0]);
        StableEntry {
            j,
            value: if stabilized { tail[0] } else { None },
            m_values,
            dims,
            stabilized,
        }
    }
}

/// Cutoffs `m₀..m₀+2` with `m₀ = max(1, -j)`.
fn cutoffs(j: i32) -> Vec<u32> {
    let m0 = (-j).max(1) as u32;
    (m0..m0 + 3).collect()
}

/// `Hom(A_{≥m}, A)_j` and, when `A_{≥m}` has projective dimension at most one through the
/// computed range, `Ext¹(A_{≥m}, A)_j`.
struct TailValues {
    hom: usize,
    ext1: Option<usize>,
}

struct TailScan {
    gb: GroebnerBasis,
    hilbert: Vec<u128>,
    values: HashMap<(u32, i32), TailValues>,
}

fn scan_tails(pres: &AlgebraPresentation, js: &[i32], with_ext: bool) -> Result<TailScan> {
    let maxrel = pres.max_relation_degree();
    let mut jobs: Vec<(u32, Vec<i32>)> = Vec::new();
    for &j in js {
        for m in cutoffs(j) {
            match jobs.iter_mut().find(|(mm, _)| *mm == m) {
                Some((_, v)) => v.push(j),
                None => jobs.push((m, vec![j])),
            }
        }
    }
    let probe = complete_polys(pres.field(), pres.relations(), &preferred_order(pres), 1, false);
    let top = jobs
        .iter()
        .map(|(m, v)| tail_bound(&probe, *m, maxrel) as i32 + v.iter().copied().max().unwrap_or(0).max(0))
        .max()
        .unwrap_or(1) as u32;
    let gb = complete_polys(pres.field(), pres.relations(), &preferred_order(pres), top, false);
    let hilbert = gb.normal_word_counts(top)?;
    let a = |t: i32| if t < 0 || t > top as i32 { 0 } else { hilbert[t as usize] as usize };
    let results: Vec<Result<Vec<((u32, i32), TailValues)>>> = jobs
        .par_iter()
        .map(|(m, js)| {
            let bound = tail_bound(&gb, *m, maxrel);
            let ip = tail_ideal(&gb, *m, bound)?;
            if !ip.betti().stabilized {
                return Err(Error::Inconclusive(format!(
                    "syzygies of A_(>={m}) not stabilized by degree {bound}"
                )));
            }
            // no second syzygies: dim F1_t equals the kernel dimension of F0 -> A_{≥m}
            let pd1 = (0..=bound as i32).all(|t| {
                let f1: usize = ip.syzygies.iter().map(|s| a(t - s.degree as i32)).sum();
                let f0: usize = ip.generator_degrees.iter().map(|&d| a(t - d as i32)).sum();
                let img = if t >= *m as i32 { a(t) } else { 0 };
                f1 + img == f0
            });
            let src = TruncatedGradedModule::from_ideal(&ip, (*m as i32, bound as i32));
            let tgt = TruncatedGradedModule::algebra((0, top as i32));
            let mut cache = SliceCache::new(&gb, &tgt);
            let mut out = Vec::new();
            for &j in js {
                let hom = hom_dim_cached(&src, &mut cache, j)?;
                let ext1 = (with_ext && pd1)
                    .then(|| {
                        let f1: usize = ip.syzygies.iter().map(|s| a(s.degree as i32 + j)).sum();
                        let f0: usize = ip.generator_degrees.iter().map(|&d| a(d as i32 + j)).sum();
                        (f1 + hom).checked_sub(f0)
                    })
                    .flatten();
                out.push(((*m, j), TailValues { hom, ext1 }));
            }
            Ok(out)
        })
        .collect();
    let mut values = HashMap::new();
    for r in results {
        values.extend(r?);
    }
    Ok(TailScan { gb, hilbert, values })
}

impl TailScan {
    fn entry(&self, j: i32, ext: bool) -> StableEntry {
        let ms = cutoffs(j);
        let dims = ms
            .iter()
            .map(|m| {
                let v = &self.values[&(*m, j)];
                if ext {
                    v.ext1
                } else {
                    Some(v.hom)
                }
            })
            .collect();
        StableEntry::new(j, ms, dims)
    }
}

fn require_regular(pres: &AlgebraPresentation) -> Result<RegularityReport> {
    let reg = zhang_regular_check(pres);
    if !reg.is_regular {
        return Err(Error::Unsupported(format!(
            "not a verified regular algebra of dimension two: {}",
            reg.reason.clone().unwrap_or_default()
        )));
    }
    Ok(reg)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaRecovery {
    pub convention: &'static str,
    pub regular: bool,
    /// Stabilized `dim Hom(A_{≥m}, A)_i` for `0 ≤ i ≤ D`.
    pub entries: Vec<StableEntry>,
    pub hilbert: Vec<u128>,
    pub matches: Vec<bool>,
    pub holds: bool,
}

/// Recovers `dim A_i` as the stabilized `dim Hom(A_{≥m}, A)_i` for `0 ≤ i ≤ d`.
pub fn gamma_recovery(pres: &AlgebraPresentation, d: u32) -> Result<GammaRecovery> {
    let js: Vec<i32> = (0..=d as i32).collect();
    let scan = scan_tails(pres, &js, false)?;
    let entries: Vec<StableEntry> = js.iter().map(|&j| scan.entry(j, false)).collect();
    let hilbert = scan.hilbert[..=d as usize].to_vec();
    let matches: Vec<bool> = entries
        .iter()
        .zip(&hilbert)
        .map(|(e, &h)| e.value == Some(h as usize))
        .collect();
    Ok(GammaRecovery {
        convention: SHIFT_CONVENTION,
        regular: zhang_regular_check(pres).is_regular,
        holds: matches.iter().all(|&m| m),
        entries,
        hilbert,
        matches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub convention: &'static str,
    pub window: (i32, i32),
    /// `dim H⁰(𝒜)_j = lim dim Hom(A_{≥m}, A)_j`.
    pub h0: Vec<StableEntry>,
    /// `dim H¹(𝒜)_j = lim dim Ext¹(A_{≥m}, A)_j`.
    pub h1: Vec<StableEntry>,
    /// Every tail ideal used has projective dimension one through its certified degree, so
    /// `Ext²(A_{≥m}, A) = 0`.
    pub h2_vanishes: bool,
    /// Fitted `c` with `dim H¹_j = dim A_(c-j)` on every stabilized entry.
    pub dual_shift: Option<i32>,
}

pub fn cohomology_dims(pres: &AlgebraPresentation, d: u32) -> Result<CohomologyTable> {
    require_regular(pres)?;
    let d = d as i32;
    let js: Vec<i32> = (-d..=d).collect();
    let scan = scan_tails(pres, &js, true)?;
    let h0: Vec<StableEntry> = js.iter().map(|&j| scan.entry(j, false)).collect();
    let h1: Vec<StableEntry> = js.iter().map(|&j| scan.entry(j, true)).collect();
    let h2_vanishes = scan.values.values().all(|v| v.ext1.is_some());
    let hmax = scan.hilbert.len() as i32 - 1;
    let a = |t: i32| if t < 0 { Some(0) } else if t > hmax { None } else { Some(scan.hilbert[t as usize] as usize) };
    let known: Vec<(i32, usize)> = h1.iter().filter_map(|e| e.value.map(|v| (e.j, v))).collect();
    let dual_shift = if known.iter().all(|&(_, v)| v == 0) {
        None
    } else {
        (-4 * d - 4..=2 * d).find(|&c| known.iter().all(|&(j, v)| a(c - j) == Some(v)))
    };
    Ok(CohomologyTable {
        convention: SHIFT_CONVENTION,
        window: (-d, d),
        h0,
        h1,
        h2_vanishes,
        dual_shift,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiRow {
    pub j: i32,
    /// `-j`; for `M = k` the classes sit at internal degrees `0`, `d_i` and `s`.
    pub internal_degree: i32,
    pub ext: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiReport {
    pub convention: &'static str,
    pub gorenstein_shift: u32,
    pub window: (i32, i32),
    /// Rows with a nonzero entry.
    pub rows: Vec<ChiRow>,
    pub totals: [usize; 3],
    /// `Ext^i` vanishes on the last three degrees of the window.
    pub finite: [bool; 3],
}

/// Graded dimensions of `Ext^i(k, M)`, `i = 0, 1, 2`, from the resolution
/// `0 → A[-s] → ⊕ A[-d_i] → A → k → 0` of a regular algebra of dimension two.
pub fn chi_check(pres: &AlgebraPresentation, module: &TruncatedGradedModule, d: i32) -> Result<ChiReport> {
    let reg = require_regular(pres)?;
    module.validate(&pres.weights())?;
    let s = reg.gorenstein_shift as i32;
    let Some(lo) = module.min_generator_degree() else {
        return Err(Error::Parameter("module has no generators".into()));
    };
    if module.window.1 < s + d {
        return Err(Error::WindowTooNarrow {
            required: s + d,
            window: module.window.1,
        });
    }
    let top = (s + d - lo).max(pres.max_relation_degree() as i32) as u32;
    let gb = complete_polys(pres.field(), pres.relations(), &preferred_order(pres), top, false);
    let weights: Vec<i32> = pres.weights().iter().map(|&w| w as i32).collect();
    let d0 = TruncatedGradedModule::residue_field(pres, (0, 0));
    let d1 = TruncatedGradedModule {
        generator_degrees: weights.clone(),
        relations: vec![ModuleRelation {
            degree: s,
            components: left_factors(&pres.relations()[0], pres.n()),
        }],
        window: (0, s),
        embedding: None,
    };
    let mut cache = SliceCache::new(&gb, module);
    let mut all = Vec::new();
    for j in lo - s..=d {
        let k0 = hom_dim_cached(&d0, &mut cache, j)?;
        let r0 = cache.dim(j)? - k0;
        let k1 = hom_dim_cached(&d1, &mut cache, j)?;
        let mid: usize = weights.iter().map(|&w| cache.dim(w + j)).sum::<Result<usize>>()?;
        let r1 = mid - k1;
        all.push(ChiRow {
            j,
            internal_degree: -j,
            ext: [k0, k1 - r0, cache.dim(s + j)? - r1],
        });
    }
    let mut totals = [0; 3];
    let mut finite = [true; 3];
    for (k, row) in all.iter().enumerate() {
        for i in 0..3 {
            totals[i] += row.ext[i];
            if k + 3 >= all.len() && row.ext[i] != 0 {
                finite[i] = false;
            }
        }
    }
    Ok(ChiReport {
        convention: SHIFT_CONVENTION,
        gorenstein_shift: reg.gorenstein_shift,
        window: (lo - s, d),
        rows: all.into_iter().filter(|r| r.ext != [0; 3]).collect(),
        totals,
        finite,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KroneckerReport {
    pub n: usize,
    /// `(Hom(𝒜,𝒜), Hom(𝒜,s𝒜), Hom(s𝒜,𝒜), Hom(s𝒜,s𝒜))`.
    pub dims: [Option<usize>; 4],
    pub expected: [usize; 4],
    /// Left multiplications by the generators give independent maps `𝒜 → s𝒜`.
    pub arrows_independent: bool,
    pub holds: bool,
}

pub fn kronecker_endo(pres: &AlgebraPresentation) -> Result<KroneckerReport> {
    require_regular(pres)?;
    if !pres.is_degree_one_generated() {
        return Err(Error::Unsupported("Kronecker dimensions need degree-one generators".into()));
    }
    let n = pres.n();
    let scan = scan_tails(pres, &[-1, 0, 1], false)?;
    let [h_m, h0, h1] = [-1, 0, 1].map(|j| scan.entry(j, false).value);
    let dims = [h0, h1, h_m, h0];
    let expected = [1, n, 0, 1];
    let gb = &scan.gb;
    let ip = tail_ideal(gb, 1, tail_bound(gb, 1, pres.max_relation_degree()))?;
    let src = TruncatedGradedModule::from_ideal(&ip, (1, ip.certified_degree as i32));
    let tgt = TruncatedGradedModule::algebra((0, gb.certified_degree() as i32));
    let p = match pres.field() {
        Field::Prime(p) => p,
        Field::Rational => MODULAR_PRIME,
    };
    let arrows = left_multiplication_rank(&src, &mut SliceCache::new(gb, &tgt), 1, p)?;
    let arrows_independent = arrows == Some(n);
    Ok(KroneckerReport {
        n,
        holds: arrows_independent && dims.iter().zip(expected).all(|(d, e)| *d == Some(e)),
        dims,
        expected,
        arrows_independent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeInvariants {
    pub n: usize,
    pub hilbert: RationalSeries,
    pub kronecker_dims: [Option<usize>; 4],
    pub cohomology: CohomologyTable,
    pub gorenstein_shift: u32,
}

pub fn scheme_invariants(pres: &AlgebraPresentation, d: u32) -> Result<SchemeInvariants> {
    let reg = require_regular(pres)?;
    let kron = kronecker_endo(pres)?;
    Ok(SchemeInvariants {
        n: pres.n(),
        hilbert: RationalSeries::regular_two(&pres.weights(), reg.gorenstein_shift),
        kronecker_dims: kron.dims,
        cohomology: cohomology_dims(pres, d)?,
        gorenstein_shift: reg.gorenstein_shift,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SchemeVerdict {
    NonIsomorphic { obstruction_degree: u32 },
    Indistinguishable,
}

/// A diagonal automorphism twisting the first algebra into the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistWitness {
    pub sigma: Vec<String>,
    pub twisted_relation: String,
    pub hilbert_preserved: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeComparison {
    pub n_a: usize,
    pub n_b: usize,
    /// `H_A` tested against the generator count of `B`, and vice versa.
    pub euler_a: EulerTest,
    pub euler_b: EulerTest,
    pub verdict: SchemeVerdict,
    pub message: String,
    pub hilbert_equal: bool,
    pub twist: Option<TwistWitness>,
}

/// Compares two regular degree-one generated algebras of dimension two by the Euler-series
/// invariant `H(z)(1 - nz + z²)`.
pub fn distinguish_schemes(a: &AlgebraPresentation, b: &AlgebraPresentation, d: u32) -> Result<SchemeComparison> {
    for p in [a, b] {
        require_regular(p)?;
        if !p.is_degree_one_generated() {
            return Err(Error::Unsupported("scheme comparison needs degree-one generators".into()));
        }
    }
    let d = d.max(4);
    let (ha, hb) = (hilbert_series(a, d), hilbert_series(b, d));
    let (n_a, n_b) = (a.n(), b.n());
    let euler_a = euler_poly_test(&ha, n_b as i128, d)?;
    let euler_b = euler_poly_test(&hb, n_a as i128, d)?;
    let obstruction = [&euler_a, &euler_b]
        .iter()
        .filter_map(|e| match e {
            EulerTest::Fails { degree, .. } => Some(*degree),
            EulerTest::Polynomial { .. } => None,
        })
        .min();
    let (verdict, message) = match obstruction {
        Some(deg) => (
            SchemeVerdict::NonIsomorphic { obstruction_degree: deg },
            format!("non-isomorphic schemes (Euler obstruction at degree {deg})"),
        ),
        None => (SchemeVerdict::Indistinguishable, "indistinguishable by this invariant".to_string()),
    };
    let twist = if n_a == n_b { find_twist(a, b, d)? } else { None };
    Ok(SchemeComparison {
        n_a,
        n_b,
        euler_a,
        euler_b,
        verdict,
        message,
        hilbert_equal: ha == hb,
        twist,
    })
}

/// Searches diagonal automorphisms with small entries whose twist of `a` has the relation of `b`.
fn find_twist(a: &AlgebraPresentation, b: &AlgebraPresentation, d: u32) -> Result<Option<TwistWitness>> {
    let f = a.field();
    let n = a.n();
    if f != b.field() || a.relations().len() != 1 || b.relations().len() != 1 || n > 4 {
        return Ok(None);
    }
    let mut values: Vec<Scalar> = Vec::new();
    for (p, q) in [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (-3, 1), (1, 3), (-1, 3)] {
        let v = f.from_rational(&num_rational::BigRational::new(p.into(), q.into()))?;
        if !values.contains(&v) {
            values.push(v);
        }
    }
    let order = a.default_order();
    let rb = &b.relations()[0];
    let lb = rb.leading_term(&order).map(|t| t.1.clone());
    let total = values.len().pow(n as u32 - 1);
    for code in 0..total {
        let mut m = crate::linalg::DegreeMatrix::zeros(f, n, n);
        m.set(0, 0, f.one());
        let mut c = code;
        for i in 1..n {
            m.set(i, i, values[c % values.len()].clone());
            c /= values.len();
        }
        let sigma = GradedAutomorphism::linear(&m);
        let Ok(tw) = zhang_twist(a, &sigma) else { continue };
        let rt = &tw.relations()[0];
        let (Some(lt), Some(lb)) = (rt.leading_term(&order).map(|t| t.1.clone()), lb.clone()) else {
            continue;
        };
        if rt.scale(&(&lb * &lt.inv())) == *rb {
            return Ok(Some(TwistWitness {
                sigma: sigma.images.iter().map(|p| a.poly_to_string(p)).collect(),
                twisted_relation: tw.poly_to_string(rt),
                hilbert_preserved: hilbert_series(&tw, d) == hilbert_series(a, d),
            }));
        }
    }
    Ok(None)
}
