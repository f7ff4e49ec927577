//! Right Gröbner bases of homogeneous right ideals in a presented algebra. Elements live in
//! normal form modulo the ambient two-sided basis; reduction only uses right multiples.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use super::{add_to, echelonize, rdegree, GroebnerBasis, RPoly, RWord, Rule};
use crate::error::Result;
use crate::poly::NcPolynomial;
use crate::word::Word;

#[derive(Clone, Debug)]
pub struct RightGroebnerBasis {
    ambient: GroebnerBasis,
    rules: Vec<Rule>,
    index: HashMap<RWord, usize>,
    lengths: BTreeSet<usize>,
    certified_degree: u32,
    complete: bool,
}

#[derive(Clone, Debug)]
enum Candidate {
    Input(RPoly),
    Obstruction { f: usize, q: RWord },
}

pub fn right_gb(gens: &[NcPolynomial], ambient: &GroebnerBasis, bound: u32) -> Result<RightGroebnerBasis> {
    ambient.check_degree(bound)?;
    let rw = ambient.rweights().to_vec();
    let mut pending: BTreeMap<u32, Vec<Candidate>> = BTreeMap::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let d = g
            .homogeneous_degree(ambient.weights())
            .ok_or_else(|| crate::error::Error::Parameter("right ideal generator is not homogeneous".into()))?;
        let p = ambient.reducer().reduce(ambient.ranked(g));
        pending.entry(d).or_default().push(Candidate::Input(p));
    }
    let mut basis = RightGroebnerBasis {
        ambient: ambient.clone(),
        rules: Vec::new(),
        index: HashMap::new(),
        lengths: BTreeSet::new(),
        certified_degree: bound,
        complete: false,
    };
    while let Some((&d, _)) = pending.first_key_value() {
        if d > bound {
            break;
        }
        let cands = pending.remove(&d).unwrap();
        let reduced: Vec<RPoly> = cands
            .par_iter()
            .map(|c| basis.reduce_ranked(basis.candidate(c)))
            .filter(|p| !p.is_empty())
            .collect();
        for row in echelonize(reduced) {
            let rule = Rule::from_poly(row, d);
            let f = basis.rules.len();
            for amb in &ambient.reducer().rules {
                let (p, l) = (&rule.lead, &amb.lead);
                for k in 1..=p.len().min(l.len().saturating_sub(1)) {
                    if p[p.len() - k..] == l[..k] {
                        let q = l[k..].to_vec();
                        let e = d + rdegree(&q, &rw);
                        pending.entry(e).or_default().push(Candidate::Obstruction { f, q });
                    }
                }
            }
            basis.index.insert(rule.lead.clone(), f);
            basis.lengths.insert(rule.lead.len());
            basis.rules.push(rule);
        }
    }
    basis.complete = ambient.is_complete()
        && pending
            .values()
            .flatten()
            .collect::<Vec<_>>()
            .par_iter()
            .all(|c| basis.reduce_ranked(basis.candidate(c)).is_empty());
    Ok(basis)
}

impl RightGroebnerBasis {
    fn candidate(&self, c: &Candidate) -> RPoly {
        match c {
            Candidate::Input(p) => p.clone(),
            Candidate::Obstruction { f, q } => {
                let r = &self.rules[*f];
                let mut p = RPoly::new();
                let mut lw = r.lead.clone();
                lw.extend_from_slice(q);
                p.insert(lw, self.ambient.field().one());
                for (t, a) in &r.tail {
                    let mut w = t.clone();
                    w.extend_from_slice(q);
                    add_to(&mut p, w, a.clone());
                }
                self.ambient.reducer().reduce(p)
            }
        }
    }

    fn prefix_match(&self, w: &[u16]) -> Option<usize> {
        self.lengths
            .iter()
            .take_while(|&&l| l <= w.len())
            .find_map(|&l| self.index.get(&w[..l]).copied())
    }

    /// Right reduction of a polynomial already in ambient normal form.
    pub(crate) fn reduce_ranked(&self, mut work: RPoly) -> RPoly {
        let mut out = RPoly::new();
        while let Some((w, c)) = work.pop_first() {
            match self.prefix_match(&w) {
                None => {
                    out.insert(w, c);
                }
                Some(fi) => {
                    let r = &self.rules[fi];
                    let v = &w[r.lead.len()..];
                    let mut t = RPoly::new();
                    for (u, a) in &r.tail {
                        let mut x = u.clone();
                        x.extend_from_slice(v);
                        add_to(&mut t, x, a.clone());
                    }
                    for (x, a) in self.ambient.reducer().reduce(t) {
                        add_to(&mut work, x, -&(&c * &a));
                    }
                }
            }
        }
        out
    }

    pub fn ambient(&self) -> &GroebnerBasis {
        &self.ambient
    }

    pub fn certified_degree(&self) -> u32 {
        self.certified_degree
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn elements(&self) -> Vec<NcPolynomial> {
        self.rules
            .iter()
            .map(|r| {
                let mut p = RPoly::new();
                p.insert(r.lead.clone(), self.ambient.field().one());
                p.extend(r.tail.iter().cloned());
                self.ambient.unranked(&p)
            })
            .collect()
    }

    pub fn leading_words(&self) -> Vec<Word> {
        let o = self.ambient.order();
        self.rules.iter().map(|r| o.from_ranked(&Word(r.lead.clone()))).collect()
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        if self.complete || d <= self.certified_degree {
            Ok(())
        } else {
            Err(crate::error::Error::AboveCertification {
                requested: d,
                certified: self.certified_degree,
            })
        }
    }

    /// Normal form modulo the right ideal.
    pub fn reduce(&self, p: &NcPolynomial) -> Result<NcPolynomial> {
        if let Some(d) = p.max_degree(self.ambient.weights()) {
            self.check_degree(d)?;
        }
        let r = self.ambient.reducer().reduce(self.ambient.ranked(p));
        Ok(self.ambient.unranked(&self.reduce_ranked(r)))
    }

    pub fn contains(&self, p: &NcPolynomial) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// `dim J_d` for `d = 0..=max`: normal words with a leading word as prefix.
    pub fn dims(&self, max: u32) -> Result<Vec<u128>> {
        self.check_degree(max)?;
        let aut = &self.ambient.reducer().automaton;
        let table = aut.continuation_counts(max);
        let mut out = vec![0u128; max as usize + 1];
        for r in &self.rules {
            if r.degree > max {
                continue;
            }
            let s = aut.run(&r.lead).expect("leading words are normal");
            for d in r.degree..=max {
                out[d as usize] += table[s][(d - r.degree) as usize];
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::two_sided_gb;
    use crate::presentation::parse_presentation;

    #[test]
    fn monomial_chain_generators_are_closed() {
        let p = parse_presentation("field Q; gens x1 x2 x3; rel x1*x2 + x2*x3 + x3*x1;").unwrap();
        let g = two_sided_gb(&p, &p.default_order(), 10).unwrap();
        let gens = vec![p.parse_poly("x1*x3").unwrap(), p.parse_poly("x1^2*x3").unwrap()];
        let r = right_gb(&gens, &g, 10).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.is_complete());
        assert!(!r.contains(&p.parse_poly("x1^3*x3").unwrap()).unwrap());
        assert!(r.contains(&p.parse_poly("x1^2*x3*x2*x1").unwrap()).unwrap());
    }

    #[test]
    fn commutative_plane_ideals() {
        let p = parse_presentation("field Q; gens x y; rel x*y - y*x;").unwrap();
        let g = two_sided_gb(&p, &p.default_order(), 8).unwrap();
        // normal words are y^a x^b, so yA has the single leading word y
        let r = right_gb(&[p.parse_poly("y").unwrap()], &g, 8).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r.is_complete());
        assert!(r.contains(&p.parse_poly("x*y*x").unwrap()).unwrap());
        assert!(!r.contains(&p.parse_poly("x*x").unwrap()).unwrap());
        assert_eq!(r.dims(4).unwrap(), vec![0, 1, 2, 3, 4]);
        // xA needs the leading words y^k x under this order
        let r = right_gb(&[p.parse_poly("x").unwrap()], &g, 8).unwrap();
        assert_eq!(r.len(), 8);
        assert!(!r.is_complete());
        assert_eq!(r.dims(4).unwrap(), vec![0, 1, 2, 3, 4]);
        let o = crate::word::MonomialOrder::new(vec![1, 0], &[1, 1]).unwrap();
        let g2 = two_sided_gb(&p, &o, 8).unwrap();
        let r = right_gb(&[p.parse_poly("x").unwrap()], &g2, 8).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r.is_complete());
        let r2 = right_gb(&[p.parse_poly("x").unwrap(), p.parse_poly("y").unwrap()], &g, 8).unwrap();
        assert_eq!(r2.len(), 2);
        assert_eq!(r2.dims(3).unwrap(), vec![0, 2, 3, 4]);
    }
}
