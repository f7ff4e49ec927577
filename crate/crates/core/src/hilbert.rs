//! Truncated integer power series, Hilbert series of presented algebras, the Hilbert-series
//! test for strongly free sets and the Euler-polynomial test.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{complete_polys, preferred_order, GroebnerBasis};
use crate::linalg::{sparse_from_entries, SparseEchelon};
use crate::poly::NcPolynomial;
use crate::presentation::AlgebraPresentation;
use crate::word::{MonomialOrder, Word};

/// Integer power series known through degree `trunc`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSeriesTrunc {
    coeffs: Vec<i128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Reciprocal,
}

impl PowerSeriesTrunc {
    /// Series with the given coefficients `a_0..=a_D`; missing coefficients are zero.
    pub fn new(coeffs: Vec<i128>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        PowerSeriesTrunc { coeffs }
    }

    /// Polynomial `p` viewed as a series truncated at `trunc`.
    pub fn from_poly(p: &[i128], trunc: u32) -> Self {
        let mut c = vec![0; trunc as usize + 1];
        for (i, &a) in p.iter().enumerate().take(c.len()) {
            c[i] = a;
        }
        PowerSeriesTrunc { coeffs: c }
    }

    pub fn one(trunc: u32) -> Self {
        Self::from_poly(&[1], trunc)
    }

    pub fn trunc(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn coeff(&self, d: u32) -> i128 {
        self.coeffs.get(d as usize).copied().unwrap_or(0)
    }

    pub fn truncate(&self, trunc: u32) -> Self {
        Self::from_poly(&self.coeffs, trunc)
    }

    fn common(&self, o: &Self) -> usize {
        self.coeffs.len().min(o.coeffs.len())
    }

    pub fn add(&self, o: &Self) -> Self {
        let m = self.common(o);
        Self::new((0..m).map(|i| self.coeffs[i] + o.coeffs[i]).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let m = self.common(o);
        Self::new((0..m).map(|i| self.coeffs[i] - o.coeffs[i]).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.common(o);
        let mut c = vec![0i128; m];
        for i in 0..m {
            if self.coeffs[i] == 0 {
                continue;
            }
            for j in 0..m - i {
                c[i + j] += self.coeffs[i] * o.coeffs[j];
            }
        }
        Self::new(c)
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 != 1 && a0 != -1 {
            return Err(Error::Parameter(format!(
                "constant term {a0} is not invertible over the integers"
            )));
        }
        let m = self.coeffs.len();
        let mut r = vec![0i128; m];
        r[0] = a0;
        for d in 1..m {
            let s: i128 = (1..=d).map(|i| self.coeffs[i] * r[d - i]).sum();
            r[d] = -s * a0;
        }
        Ok(Self::new(r))
    }

    /// First degree with a nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<(u32, i128)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, &c)| c != 0)
            .map(|(i, &c)| (i as u32, c))
    }

    /// `f(-z)`.
    pub fn alternate(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
                .collect(),
        )
    }
}

impl fmt::Display for PowerSeriesTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] (trunc {})", body.join(", "), self.trunc())
    }
}

pub fn series_arith(a: &PowerSeriesTrunc, b: &PowerSeriesTrunc, op: SeriesOp) -> Result<PowerSeriesTrunc> {
    Ok(match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Sub => a.sub(b),
        SeriesOp::Mul => a.mul(b),
        SeriesOp::Reciprocal => a.reciprocal()?,
    })
}

/// Quotient of integer polynomials in ascending powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalSeries {
    pub numerator: Vec<i128>,
    pub denominator: Vec<i128>,
}

impl RationalSeries {
    pub fn expand(&self, trunc: u32) -> Result<PowerSeriesTrunc> {
        let den = PowerSeriesTrunc::from_poly(&self.denominator, trunc).reciprocal()?;
        Ok(PowerSeriesTrunc::from_poly(&self.numerator, trunc).mul(&den))
    }

    /// `1 / (1 - Σ z^{d_i} + z^{deg b})`, the series of a regular algebra of dimension two.
    pub fn regular_two(weights: &[u32], relation_degree: u32) -> Self {
        let mut den = vec![0i128; relation_degree.max(*weights.iter().max().unwrap_or(&0)) as usize + 1];
        den[0] = 1;
        for &w in weights {
            den[w as usize] -= 1;
        }
        den[relation_degree as usize] += 1;
        RationalSeries {
            numerator: vec![1],
            denominator: den,
        }
    }
}

pub fn render_poly_z(p: &[i128]) -> String {
    let mut out = String::new();
    for (i, &c) in p.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        match (i, mag) {
            (0, m) => out.push_str(&m.to_string()),
            (_, 1) => {}
            (_, m) => out.push_str(&m.to_string()),
        }
        match i {
            0 => {}
            1 => out.push('z'),
            _ => out.push_str(&format!("z^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &[i128]| {
            let s = render_poly_z(p);
            if p.iter().filter(|c| **c != 0).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{} / {}", wrap(&self.numerator), wrap(&self.denominator))
    }
}

pub fn hilbert_from_gb(gb: &GroebnerBasis, trunc: u32) -> Result<PowerSeriesTrunc> {
    let c = gb.normal_word_counts(trunc)?;
    Ok(PowerSeriesTrunc::new(c.into_iter().map(|x| x as i128).collect()))
}

/// Hilbert series of a presentation through `trunc`, via a basis certified to that degree.
pub fn hilbert_series(pres: &AlgebraPresentation, trunc: u32) -> PowerSeriesTrunc {
    let gb = complete_polys(pres.field(), pres.relations(), &preferred_order(pres), trunc, false);
    hilbert_from_gb(&gb, trunc).expect("certified through trunc")
}

/// `Σ_{x ∈ X} z^{deg x}`.
pub fn generator_series(degrees: &[u32], trunc: u32) -> PowerSeriesTrunc {
    let mut c = vec![0i128; trunc as usize + 1];
    for &d in degrees {
        if d <= trunc {
            c[d as usize] += 1;
        }
    }
    PowerSeriesTrunc::new(c)
}

/// One product `w · x · v` with `w` normal in `A/(X)`, `x ∈ X` and `v` normal in `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductTerm {
    pub left: Word,
    pub x_index: usize,
    pub right: Word,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum StronglyFree {
    Certified { degree: u32 },
    Refuted {
        degree: u32,
        defect: i128,
        /// A vanishing combination of products `w·x·v` in `A`, when small enough to compute.
        witness: Option<Vec<ProductTerm>>,
    },
}

#[derive(Clone, Debug)]
pub struct StronglyFreeReport {
    pub verdict: StronglyFree,
    pub h_a: PowerSeriesTrunc,
    pub h_b: PowerSeriesTrunc,
    /// `(1/H_A + Σ z^{deg x}) - 1/H_B`.
    pub defect_series: PowerSeriesTrunc,
    pub order: MonomialOrder,
}

/// Largest product count for which a refutation witness is searched.
const WITNESS_LIMIT: i128 = 20_000;

pub fn default_degree(pres: &AlgebraPresentation) -> u32 {
    2 * pres.max_relation_degree() + 6
}

pub fn strongly_free_check(pres: &AlgebraPresentation, x: &[NcPolynomial], trunc: u32) -> Result<StronglyFreeReport> {
    let w = pres.weights();
    let mut degs = Vec::new();
    for p in x {
        let d = p
            .homogeneous_degree(&w)
            .ok_or_else(|| Error::Parameter("elements of X must be nonzero and homogeneous".into()))?;
        if p.field() != pres.field() || p.generator_span() > pres.n() {
            return Err(Error::Parameter("X must lie in the algebra".into()));
        }
        degs.push(d);
    }
    let maxx = degs.iter().copied().max().unwrap_or(0);
    if trunc < maxx + 2 {
        return Err(Error::Parameter(format!(
            "degree bound {trunc} must be at least max deg X + 2 = {}",
            maxx + 2
        )));
    }
    let order = preferred_order(pres);
    let gba = complete_polys(pres.field(), pres.relations(), &order, trunc, false);
    let mut rels_b = pres.relations().to_vec();
    rels_b.extend(x.iter().cloned());
    let gbb = complete_polys(pres.field(), &rels_b, &order, trunc, false);
    let h_a = hilbert_from_gb(&gba, trunc)?;
    let h_b = hilbert_from_gb(&gbb, trunc)?;
    let lhs = h_a.reciprocal()?.add(&generator_series(&degs, trunc));
    let defect_series = lhs.sub(&h_b.reciprocal()?);
    let verdict = match defect_series.first_nonzero() {
        None => StronglyFree::Certified { degree: trunc },
        Some((d, c)) => {
            let expected = h_b.mul(&generator_series(&degs, trunc)).mul(&h_a).coeff(d);
            let witness = (expected <= WITNESS_LIMIT)
                .then(|| dependency_witness(&gba, &gbb, x, &degs, d))
                .flatten();
            StronglyFree::Refuted {
                degree: d,
                defect: c,
                witness,
            }
        }
    };
    Ok(StronglyFreeReport {
        verdict,
        h_a,
        h_b,
        defect_series,
        order,
    })
}

/// Products `w·x·v` of degree `d` spanning `I_d`; returns the terms and their normal forms.
pub(crate) fn bxa_products(
    gba: &GroebnerBasis,
    gbb: &GroebnerBasis,
    x: &[NcPolynomial],
    degs: &[u32],
    d: u32,
) -> Vec<((Word, usize, Word), NcPolynomial)> {
    let mut out = Vec::new();
    for d1 in 0..=d {
        let lefts = gbb.normal_words(d1).expect("certified");
        for (xi, &dx) in degs.iter().enumerate() {
            if d1 + dx > d {
                continue;
            }
            let rights = gba.normal_words(d - d1 - dx).expect("certified");
            for l in &lefts {
                let lx = x[xi].mul_word_left(l);
                for r in &rights {
                    let prod = gba.normal_form(&lx.mul_word_right(r)).expect("certified");
                    out.push(((l.clone(), xi, r.clone()), prod));
                }
            }
        }
    }
    out
}

fn dependency_witness(
    gba: &GroebnerBasis,
    gbb: &GroebnerBasis,
    x: &[NcPolynomial],
    degs: &[u32],
    d: u32,
) -> Option<Vec<ProductTerm>> {
    let products = bxa_products(gba, gbb, x, degs, d);
    let field = gba.field();
    let mut cols: HashMap<Word, u32> = HashMap::new();
    let mut ech = SparseEchelon::with_history(field);
    for (i, (_, p)) in products.iter().enumerate() {
        let v = sparse_from_entries(
            field,
            p.terms().map(|(w, c)| {
                let k = cols.len() as u32;
                (*cols.entry(w.clone()).or_insert(k), c.clone())
            }),
        );
        if let Some(dep) = ech.insert_tracked(v, i as u32) {
            return Some(
                dep.into_iter()
                    .map(|(j, c)| {
                        let (l, xi, r) = products[j as usize].0.clone();
                        ProductTerm {
                            left: l,
                            x_index: xi,
                            right: r,
                            coefficient: c.to_string(),
                        }
                    })
                    .collect(),
            );
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum EulerTest {
    /// `H·(1 - nz + z²)` is a polynomial of degree at most 2 through the truncation.
    Polynomial { coefficients: Vec<i128> },
    /// `degree`/`coefficient`: first nonzero coefficient of positive degree;
    /// `tail_degree`: first nonzero coefficient of degree at least 3.
    Fails {
        degree: u32,
        coefficient: i128,
        tail_degree: u32,
        tail_coefficient: i128,
    },
}

pub fn euler_poly_test(h: &PowerSeriesTrunc, n: i128, trunc: u32) -> Result<EulerTest> {
    if trunc < 4 {
        return Err(Error::Parameter("the Euler test needs a truncation degree of at least 4".into()));
    }
    if h.trunc() < trunc {
        return Err(Error::Parameter(format!(
            "series known only through degree {}, requested {trunc}",
            h.trunc()
        )));
    }
    let prod = h.truncate(trunc).mul(&PowerSeriesTrunc::from_poly(&[1, -n, 1], trunc));
    let tail = (3..=trunc).find(|&d| prod.coeff(d) != 0);
    Ok(match tail {
        None => {
            let mut c: Vec<i128> = prod.coeffs()[..3].to_vec();
            while c.len() > 1 && *c.last().unwrap() == 0 {
                c.pop();
            }
            EulerTest::Polynomial { coefficients: c }
        }
        Some(t) => {
            let first = (1..=trunc).find(|&d| prod.coeff(d) != 0).unwrap();
            EulerTest::Fails {
                degree: first,
                coefficient: prod.coeff(first),
                tail_degree: t,
                tail_coefficient: prod.coeff(t),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    #[test]
    fn reciprocal_examples() {
        let s = PowerSeriesTrunc::from_poly(&[1, -3, 1], 4);
        let r = series_arith(&s, &s, SeriesOp::Reciprocal).unwrap();
        assert_eq!(r.coeffs(), &[1, 3, 8, 21, 55]);
        assert_eq!(r.mul(&s), PowerSeriesTrunc::one(4));
        assert!(PowerSeriesTrunc::from_poly(&[2, 1], 4).reciprocal().is_err());
        assert_eq!(r.to_string(), "[1, 3, 8, 21, 55] (trunc 4)");
        let q = RationalSeries::regular_two(&[1, 1, 1], 2);
        assert_eq!(q.to_string(), "1 / (1 - 3z + z^2)");
        assert_eq!(q.expand(4).unwrap(), r);
    }

    #[test]
    fn hilbert_examples() {
        let free = parse_presentation("field Q; gens a b c;").unwrap();
        assert_eq!(hilbert_series(&free, 4).coeffs(), &[1, 3, 9, 27, 81]);
        let cyc = parse_presentation("field Q; gens x1 x2 x3; rel x1*x2 + x2*x3 + x3*x1;").unwrap();
        assert_eq!(hilbert_series(&cyc, 5).coeffs(), &[1, 3, 8, 21, 55, 144]);
        let wt = parse_presentation("field Q; gens x:1 y:2; rel x*y - y*x - x^3;").unwrap();
        let expect = RationalSeries {
            numerator: vec![1],
            denominator: vec![1, -1, -1, 1],
        };
        assert_eq!(hilbert_series(&wt, 10), expect.expand(10).unwrap());
    }

    #[test]
    fn strongly_free_examples() {
        let a = parse_presentation("field Q; gens x1 x2 x3 x4; rel x1^2 + x2^2 + x3^2 + x4^2;").unwrap();
        let x = vec![a.parse_poly("x3").unwrap(), a.parse_poly("x4").unwrap()];
        let r = strongly_free_check(&a, &x, 10).unwrap();
        assert_eq!(r.verdict, StronglyFree::Certified { degree: 10 });

        let a = parse_presentation("field Q; gens x; rel x^2;").unwrap();
        let r = strongly_free_check(&a, &[a.parse_poly("x").unwrap()], 4).unwrap();
        match r.verdict {
            StronglyFree::Refuted { degree, defect, witness } => {
                assert_eq!((degree, defect), (2, 1));
                assert!(witness.is_some());
            }
            v => panic!("{v:?}"),
        }

        // k[x,y]/(y) = k[x] is too small for {y} to be strongly free
        let a = parse_presentation("field Q; gens x y; rel x*y - y*x;").unwrap();
        let r = strongly_free_check(&a, &[a.parse_poly("y").unwrap()], 6).unwrap();
        match r.verdict {
            StronglyFree::Refuted { degree, defect, witness } => {
                assert_eq!((degree, defect), (2, 1));
                let wit = witness.unwrap();
                let mut sum = NcPolynomial::zero(a.field());
                for t in &wit {
                    let c = a.field().from_rational(&t.coefficient.parse().unwrap()).unwrap();
                    let term = NcPolynomial::monomial(c, t.left.concat(&Word::letter(1)).concat(&t.right));
                    sum = sum.add(&term);
                }
                let gb = crate::groebner::two_sided_gb(&a, &a.default_order(), 6).unwrap();
                assert!(gb.normal_form(&sum).unwrap().is_zero());
            }
            v => panic!("{v:?}"),
        }
        assert!(strongly_free_check(&a, &[a.parse_poly("y").unwrap()], 2).is_err());
    }

    #[test]
    fn euler_examples() {
        let h = RationalSeries::regular_two(&[1, 1, 1], 2).expand(8).unwrap();
        assert_eq!(euler_poly_test(&h, 3, 8).unwrap(), EulerTest::Polynomial { coefficients: vec![1] });
        match euler_poly_test(&h, 4, 8).unwrap() {
            EulerTest::Fails { degree, coefficient, .. } => assert_eq!((degree, coefficient), (1, -1)),
            v => panic!("{v:?}"),
        }
        assert_eq!(
            euler_poly_test(&PowerSeriesTrunc::one(6), 5, 6).unwrap(),
            EulerTest::Polynomial { coefficients: vec![1, -5, 1] }
        );
    }
}
