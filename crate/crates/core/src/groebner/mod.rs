//! Degree-bounded two-sided Gröbner bases for homogeneous ideals of the free algebra, normal
//! forms and normal-word enumeration.
//!
//! Internally every word is stored with letters relabelled by their rank in the monomial
//! order. For words of one degree the natural `Vec` order is then the reverse of the
//! monomial order, so the leading term of a homogeneous polynomial held in a `BTreeMap` is
//! its first entry.

pub mod automaton;
pub mod right;
pub mod ufnarovski;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::NcPolynomial;
use crate::presentation::AlgebraPresentation;
use crate::scalar::{Field, Scalar};
use crate::word::{MonomialOrder, Word};

pub use automaton::Automaton;
pub use right::{right_gb, RightGroebnerBasis};
pub use ufnarovski::{ufnarovski_growth, Growth, UfnarovskiGraph};

pub(crate) type RWord = Vec<u16>;
pub(crate) type RPoly = BTreeMap<RWord, Scalar>;

/// A monic rewriting rule `lead -> -tail` in ranked letters.
#[derive(Clone, Debug)]
pub(crate) struct Rule {
    pub lead: RWord,
    pub tail: Vec<(RWord, Scalar)>,
    pub degree: u32,
}

impl Rule {
    fn from_poly(mut p: RPoly, degree: u32) -> Rule {
        let (lead, c) = p.pop_first().expect("nonzero");
        let inv = c.inv();
        Rule {
            lead,
            tail: p.into_iter().map(|(w, a)| (w, &a * &inv)).collect(),
            degree,
        }
    }
}

/// Weighted degree of a ranked word.
pub(crate) fn rdegree(w: &[u16], rweights: &[u32]) -> u32 {
    w.iter().map(|&l| rweights[l as usize]).sum()
}

pub(crate) fn add_to(p: &mut RPoly, w: RWord, c: Scalar) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match p.entry(w) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Rule set together with a matching automaton over the leading words.
#[derive(Clone, Debug)]
pub(crate) struct Reducer {
    pub rules: Vec<Rule>,
    pub automaton: Automaton,
}

impl Reducer {
    fn new(n: usize, rweights: &[u32], rules: Vec<Rule>) -> Self {
        let pats: Vec<&[u16]> = rules.iter().map(|r| r.lead.as_slice()).collect();
        let automaton = Automaton::new(n, rweights, &pats);
        Reducer { rules, automaton }
    }

    /// Full normal form: repeatedly rewrites the largest reducible term.
    pub fn reduce(&self, mut work: RPoly) -> RPoly {
        let mut out = RPoly::new();
        while let Some((w, c)) = work.pop_first() {
            match self.automaton.find(&w) {
                None => {
                    out.insert(w, c);
                }
                Some((pos, ri)) => {
                    let r = &self.rules[ri];
                    let end = pos + r.lead.len();
                    for (t, a) in &r.tail {
                        let mut nw = Vec::with_capacity(w.len() - r.lead.len() + t.len());
                        nw.extend_from_slice(&w[..pos]);
                        nw.extend_from_slice(t);
                        nw.extend_from_slice(&w[end..]);
                        add_to(&mut work, nw, -&(&c * a));
                    }
                }
            }
        }
        out
    }

    pub fn is_normal(&self, w: &[u16]) -> bool {
        self.automaton.run(w).is_some()
    }
}

#[derive(Clone, Debug)]
enum Candidate {
    Input(RPoly),
    Overlap { g: usize, h: usize, k: usize },
}

/// A two-sided Gröbner basis certified through `certified_degree`; `complete` means every
/// ambiguity in every degree resolves, so the basis is valid in all degrees.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    field: Field,
    order: MonomialOrder,
    rweights: Vec<u32>,
    reducer: Reducer,
    certified_degree: u32,
    complete: bool,
}

pub fn two_sided_gb(pres: &AlgebraPresentation, order: &MonomialOrder, bound: u32) -> Result<GroebnerBasis> {
    if order.weights() != pres.weights().as_slice() {
        return Err(Error::Parameter("order weights differ from the presentation".into()));
    }
    if bound < pres.max_relation_degree() {
        return Err(Error::Parameter(format!(
            "degree bound {} is below the maximal relation degree {}",
            bound,
            pres.max_relation_degree()
        )));
    }
    Ok(gb_from_polys(pres.field(), pres.relations(), order, bound))
}

/// Completion of an arbitrary list of homogeneous polynomials (degree-one elements allowed).
pub fn gb_from_polys(field: Field, polys: &[NcPolynomial], order: &MonomialOrder, bound: u32) -> GroebnerBasis {
    complete_polys(field, polys, order, bound, true)
}

/// As [`gb_from_polys`]; with `check_overlaps = false` the ambiguities above `bound` are not
/// examined and `complete` is reported as `false` whenever any remain.
pub fn complete_polys(field: Field, polys: &[NcPolynomial], order: &MonomialOrder, bound: u32, check_overlaps: bool) -> GroebnerBasis {
    let n = order.weights().len();
    let rweights = order.ranked_weights();
    let mut pending: BTreeMap<u32, Vec<Candidate>> = BTreeMap::new();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        let d = p.homogeneous_degree(order.weights()).expect("homogeneous input");
        pending.entry(d).or_default().push(Candidate::Input(to_ranked(p, order)));
    }
    let mut reducer = Reducer::new(n, &rweights, Vec::new());
    while let Some((&d, _)) = pending.first_key_value() {
        if d > bound {
            break;
        }
        let cands = pending.remove(&d).unwrap();
        let reduced: Vec<RPoly> = cands
            .par_iter()
            .map(|c| reducer.reduce(spoly(c, &reducer.rules)))
            .filter(|p| !p.is_empty())
            .collect();
        let rows = echelonize(reduced);
        if rows.is_empty() {
            continue;
        }
        let first_new = reducer.rules.len();
        let mut rules = std::mem::take(&mut reducer.rules);
        rules.extend(rows.into_iter().map(|r| Rule::from_poly(r, d)));
        for i in first_new..rules.len() {
            for j in 0..rules.len() {
                push_overlaps(&rules, i, j, &rweights, &mut pending);
                if j < first_new {
                    push_overlaps(&rules, j, i, &rweights, &mut pending);
                }
            }
        }
        reducer = Reducer::new(n, &rweights, rules);
    }
    let complete = (check_overlaps || pending.is_empty())
        && pending
        .values()
        .flatten()
        .collect::<Vec<_>>()
        .par_iter()
        .all(|c| reducer.reduce(spoly(c, &reducer.rules)).is_empty());
    GroebnerBasis {
        field,
        order: order.clone(),
        rweights,
        reducer,
        certified_degree: bound,
        complete,
    }
}

/// Deg-lex order chosen to keep completion small: for a single relation, prefer a precedence
/// under which the leading word has no self-overlap, since such a relation is already a
/// complete basis.
pub fn preferred_order(pres: &AlgebraPresentation) -> MonomialOrder {
    let w = pres.weights();
    let default = MonomialOrder::default_for(&w);
    if pres.relations().len() != 1 {
        return default;
    }
    let rel = &pres.relations()[0];
    let self_overlaps = |o: &MonomialOrder| {
        let lw = rel.leading_word(o).expect("nonzero relation").letters().to_vec();
        (1..lw.len()).any(|k| lw[..k] == lw[lw.len() - k..])
    };
    if !self_overlaps(&default) {
        return default;
    }
    for a in 0..w.len() {
        let mut prec: Vec<usize> = default.precedence().into_iter().filter(|&g| g != a).collect();
        prec.insert(0, a);
        let o = MonomialOrder::new(prec, &w).expect("permutation");
        if !self_overlaps(&o) {
            return o;
        }
    }
    default
}

fn spoly(c: &Candidate, rules: &[Rule]) -> RPoly {
    match c {
        Candidate::Input(p) => p.clone(),
        Candidate::Overlap { g, h, k } => {
            let (g, h) = (&rules[*g], &rules[*h]);
            let u = &g.lead[..g.lead.len() - k];
            let v = &h.lead[*k..];
            let mut s = RPoly::new();
            for (t, a) in &g.tail {
                let mut w = t.clone();
                w.extend_from_slice(v);
                add_to(&mut s, w, a.clone());
            }
            for (t, a) in &h.tail {
                let mut w = u.to_vec();
                w.extend_from_slice(t);
                add_to(&mut s, w, -a);
            }
            s
        }
    }
}

fn push_overlaps(rules: &[Rule], i: usize, j: usize, rweights: &[u32], pending: &mut BTreeMap<u32, Vec<Candidate>>) {
    let (a, b) = (&rules[i].lead, &rules[j].lead);
    for k in 1..a.len().min(b.len()) {
        if a[a.len() - k..] == b[..k] {
            let d = rules[i].degree + rules[j].degree - rdegree(&b[..k], rweights);
            pending.entry(d).or_default().push(Candidate::Overlap { g: i, h: j, k });
        }
    }
}

/// Reduced row echelon form of homogeneous polynomials of one degree; rows are monic and
/// sorted by leading word.
pub(crate) fn echelonize(polys: Vec<RPoly>) -> Vec<RPoly> {
    let mut rows: BTreeMap<RWord, RPoly> = BTreeMap::new();
    for mut p in polys {
        while let Some((lead, c)) = p.first_key_value().map(|(w, c)| (w.clone(), c.clone())) {
            match rows.get(&lead) {
                Some(r) => {
                    for (w, a) in r {
                        add_to(&mut p, w.clone(), -&(&c * a));
                    }
                }
                None => {
                    let inv = c.inv();
                    let p: RPoly = p.into_iter().map(|(w, a)| (w, &a * &inv)).collect();
                    rows.insert(lead, p);
                    break;
                }
            }
        }
    }
    let mut rows: Vec<RPoly> = rows.into_values().collect();
    for i in (0..rows.len()).rev() {
        for j in i + 1..rows.len() {
            let lead = rows[j].first_key_value().unwrap().0.clone();
            if let Some(c) = rows[i].get(&lead).cloned() {
                let rj = rows[j].clone();
                for (w, a) in rj {
                    add_to(&mut rows[i], w, -&(&c * &a));
                }
            }
        }
    }
    rows
}

pub(crate) fn to_ranked(p: &NcPolynomial, order: &MonomialOrder) -> RPoly {
    p.terms().map(|(w, c)| (order.to_ranked(w).0, c.clone())).collect()
}

pub(crate) fn from_ranked(field: Field, p: &RPoly, order: &MonomialOrder) -> NcPolynomial {
    NcPolynomial::from_map(
        field,
        p.iter().map(|(w, c)| (order.from_ranked(&Word(w.clone())), c.clone())).collect(),
    )
}

impl GroebnerBasis {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn weights(&self) -> &[u32] {
        self.order.weights()
    }

    pub fn n(&self) -> usize {
        self.rweights.len()
    }

    pub fn certified_degree(&self) -> u32 {
        self.certified_degree
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.reducer.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reducer.rules.is_empty()
    }

    /// Monic basis elements in original letters, ordered by degree then leading word.
    pub fn elements(&self) -> Vec<NcPolynomial> {
        self.reducer
            .rules
            .iter()
            .map(|r| {
                let mut p = RPoly::new();
                p.insert(r.lead.clone(), self.field.one());
                for (w, c) in &r.tail {
                    p.insert(w.clone(), c.clone());
                }
                from_ranked(self.field, &p, &self.order)
            })
            .collect()
    }

    pub fn leading_words(&self) -> Vec<Word> {
        self.reducer
            .rules
            .iter()
            .map(|r| self.order.from_ranked(&Word(r.lead.clone())))
            .collect()
    }

    /// Number of basis elements in each degree.
    pub fn elements_by_degree(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for r in &self.reducer.rules {
            *m.entry(r.degree).or_insert(0) += 1;
        }
        m
    }

    /// Largest degree in which results are valid, `None` when valid in all degrees.
    pub fn valid_through(&self) -> Option<u32> {
        (!self.complete).then_some(self.certified_degree)
    }

    pub fn check_degree(&self, d: u32) -> Result<()> {
        if self.complete || d <= self.certified_degree {
            Ok(())
        } else {
            Err(Error::AboveCertification {
                requested: d,
                certified: self.certified_degree,
            })
        }
    }

    pub fn normal_form(&self, p: &NcPolynomial) -> Result<NcPolynomial> {
        if let Some(d) = p.max_degree(self.weights()) {
            self.check_degree(d)?;
        }
        let r = self.reducer.reduce(to_ranked(p, &self.order));
        Ok(from_ranked(self.field, &r, &self.order))
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.reducer.is_normal(&self.order.to_ranked(w).0)
    }

    /// Normal words of weighted degree `d`, ascending in the monomial order.
    pub fn normal_words(&self, d: u32) -> Result<Vec<Word>> {
        self.check_degree(d)?;
        let mut out = Vec::new();
        self.reducer.automaton.enumerate(0, d, &mut out);
        Ok(out
            .into_iter()
            .rev()
            .map(|w| self.order.from_ranked(&Word(w)))
            .collect())
    }

    /// Number of normal words in each degree `0..=max`.
    pub fn normal_word_counts(&self, max: u32) -> Result<Vec<u128>> {
        self.check_degree(max)?;
        Ok(self.reducer.automaton.count_by_weight(max))
    }

    pub(crate) fn reducer(&self) -> &Reducer {
        &self.reducer
    }

    pub(crate) fn rweights(&self) -> &[u32] {
        &self.rweights
    }

    pub(crate) fn ranked(&self, p: &NcPolynomial) -> RPoly {
        to_ranked(p, &self.order)
    }

    pub(crate) fn unranked(&self, p: &RPoly) -> NcPolynomial {
        from_ranked(self.field, p, &self.order)
    }

    /// Normal words of degree `d` in ranked letters, ascending in ranked `Vec` order.
    pub(crate) fn ranked_normal_words(&self, d: u32) -> Vec<RWord> {
        let mut out = Vec::new();
        self.reducer.automaton.enumerate(0, d, &mut out);
        out
    }
}
