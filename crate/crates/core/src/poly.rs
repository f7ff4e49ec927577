//! Noncommutative polynomials: finite maps from words to nonzero scalars.

use std::collections::BTreeMap;

use crate::scalar::{Field, Scalar};
use crate::word::{MonomialOrder, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcPolynomial {
    field: Field,
    terms: BTreeMap<Word, Scalar>,
}

impl NcPolynomial {
    pub fn zero(field: Field) -> Self {
        NcPolynomial {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: Field) -> Self {
        Self::monomial(field.one(), Word::empty())
    }

    pub fn monomial(c: Scalar, w: Word) -> Self {
        let mut p = Self::zero(c.field());
        p.add_term(w, c);
        p
    }

    pub fn generator(field: Field, i: usize) -> Self {
        Self::monomial(field.one(), Word::letter(i))
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut p = Self::zero(field);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &NcPolynomial) -> NcPolynomial {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &NcPolynomial) -> NcPolynomial {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), -c);
        }
        r
    }

    pub fn scale(&self, c: &Scalar) -> NcPolynomial {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        NcPolynomial {
            field: self.field,
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    pub fn neg(&self) -> NcPolynomial {
        self.scale(&-&self.field.one())
    }

    pub fn mul(&self, o: &NcPolynomial) -> NcPolynomial {
        let mut r = Self::zero(self.field);
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                r.add_term(u.concat(v), a * b);
            }
        }
        r
    }

    pub fn mul_word_left(&self, w: &Word) -> NcPolynomial {
        NcPolynomial {
            field: self.field,
            terms: self.terms.iter().map(|(u, c)| (w.concat(u), c.clone())).collect(),
        }
    }

    pub fn mul_word_right(&self, w: &Word) -> NcPolynomial {
        NcPolynomial {
            field: self.field,
            terms: self.terms.iter().map(|(u, c)| (u.concat(w), c.clone())).collect(),
        }
    }

    /// `Some(d)` when every term has weighted degree `d` (zero counts as homogeneous of any degree,
    /// reported as `None`).
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Option<u32> {
        let mut it = self.terms.keys().map(|w| w.degree(weights));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self, weights: &[u32]) -> bool {
        self.is_zero() || self.homogeneous_degree(weights).is_some()
    }

    pub fn max_degree(&self, weights: &[u32]) -> Option<u32> {
        self.terms.keys().map(|w| w.degree(weights)).max()
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn components(&self, weights: &[u32]) -> BTreeMap<u32, NcPolynomial> {
        let mut out: BTreeMap<u32, NcPolynomial> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.degree(weights))
                .or_insert_with(|| Self::zero(self.field))
                .terms
                .insert(w.clone(), c.clone());
        }
        out
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Word, &Scalar)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn leading_word(&self, order: &MonomialOrder) -> Option<&Word> {
        self.leading_term(order).map(|(w, _)| w)
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self, order: &MonomialOrder) -> NcPolynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Word, Scalar)> {
        let mut v: Vec<(Word, Scalar)> = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn map_words(&self, f: impl Fn(&Word) -> Word) -> NcPolynomial {
        let mut r = Self::zero(self.field);
        for (w, c) in &self.terms {
            r.add_term(f(w), c.clone());
        }
        r
    }

    /// Substitutes `images[i]` for generator `i`.
    pub fn substitute(&self, images: &[NcPolynomial]) -> NcPolynomial {
        let mut r = Self::zero(self.field);
        for (w, c) in &self.terms {
            let mut t = NcPolynomial::monomial(c.clone(), Word::empty());
            for &l in w.letters() {
                t = t.mul(&images[l as usize]);
            }
            r = r.add(&t);
        }
        r
    }

    /// Largest generator index used, plus one.
    pub fn generator_span(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|w| w.letters().iter())
            .map(|&l| l as usize + 1)
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn from_map(field: Field, terms: BTreeMap<Word, Scalar>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        NcPolynomial { field, terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: usize) -> NcPolynomial {
        NcPolynomial::generator(Field::Rational, i)
    }

    #[test]
    fn noncommutative_product() {
        let (x, y) = (g(0), g(1));
        let p = x.add(&y).mul(&x.sub(&y));
        let q = Field::Rational;
        let expect = NcPolynomial::from_terms(
            q,
            [
                (Word::from_letters(&[0, 0]), q.one()),
                (Word::from_letters(&[0, 1]), q.from_i64(-1)),
                (Word::from_letters(&[1, 0]), q.one()),
                (Word::from_letters(&[1, 1]), q.from_i64(-1)),
            ],
        );
        assert_eq!(p, expect);
    }

    #[test]
    fn zero_scale_and_concat() {
        let b = g(0).mul(&g(1)).sub(&g(1).mul(&g(0)));
        assert!(b.scale(&Field::Rational.zero()).is_zero());
        let xyz = g(0).mul(&g(1)).mul(&g(2));
        assert_eq!(xyz.len(), 1);
        assert!(xyz.coeff(&Word::from_letters(&[0, 1, 2])).is_one());
    }

    #[test]
    fn components_split_by_degree() {
        let p = g(0).add(&g(1).mul(&g(0)));
        let c = p.components(&[1, 1]);
        assert_eq!(c.len(), 2);
        assert_eq!(p.homogeneous_degree(&[1, 1]), None);
        assert_eq!(g(1).mul(&g(0)).homogeneous_degree(&[1, 2]), Some(3));
    }
}
