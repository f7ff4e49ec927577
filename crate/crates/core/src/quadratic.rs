//! Quadratic tensors of relations, rank-two projections, regularity of one-relator algebras,
//! Koszul duals and twists by graded automorphisms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::two_sided_gb;
use crate::linalg::DegreeMatrix;
use crate::poly::NcPolynomial;
use crate::presentation::{AlgebraPresentation, Generator};
use crate::scalar::{Field, Scalar};
use crate::word::Word;

/// `b = Σ M_ij x_i x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticTensor {
    pub m: DegreeMatrix,
}

impl QuadraticTensor {
    pub fn new(m: DegreeMatrix) -> Self {
        assert_eq!(m.rows(), m.cols(), "tensor matrix must be square");
        QuadraticTensor { m }
    }

    /// Reads the coefficient matrix of a polynomial whose words all have length two.
    pub fn from_poly(b: &NcPolynomial, n: usize) -> Result<Self> {
        let mut m = DegreeMatrix::zeros(b.field(), n, n);
        for (w, c) in b.terms() {
            match w.letters() {
                [i, j] if (*i as usize) < n && (*j as usize) < n => m.set(*i as usize, *j as usize, c.clone()),
                _ => return Err(Error::Unsupported("relation is not quadratic in the generators".into())),
            }
        }
        Ok(QuadraticTensor { m })
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn field(&self) -> Field {
        self.m.field()
    }

    pub fn to_poly(&self) -> NcPolynomial {
        let n = self.n();
        let mut p = NcPolynomial::zero(self.field());
        for i in 0..n {
            for j in 0..n {
                p.add_term(Word::from_letters(&[i, j]), self.m.get(i, j).clone());
            }
        }
        p
    }
}

pub fn tensor_rank(t: &QuadraticTensor) -> usize {
    t.m.rank()
}

/// `b = x·y` for a rank-one tensor, as coefficient vectors of the two linear forms.
pub fn rank_one_factor(t: &QuadraticTensor) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let r = tensor_rank(t);
    if r != 1 {
        return Err(Error::RankMismatch(r, "rank 1"));
    }
    let n = t.n();
    let r0 = (0..n).find(|&i| (0..n).any(|j| !t.m.get(i, j).is_zero())).unwrap();
    let v: Vec<Scalar> = t.m.row(r0).to_vec();
    let j0 = (0..n).find(|&j| !v[j].is_zero()).unwrap();
    let inv = v[j0].inv();
    let u: Vec<Scalar> = (0..n).map(|i| t.m.get(i, j0) * &inv).collect();
    Ok((u, v))
}

/// `b = Σ_k l_k a_k` with `rank(b)` terms: `a_k` are the reduced row basis of the
/// coefficient matrix and `l_k` collect its pivot columns.
pub fn minimal_decomposition(t: &QuadraticTensor) -> Vec<(Vec<Scalar>, Vec<Scalar>)> {
    let rows = t.m.row_space();
    let n = t.n();
    rows.into_iter()
        .map(|a| {
            let piv = a.iter().position(|c| !c.is_zero()).expect("nonzero row");
            let l = (0..n).map(|i| t.m.get(i, piv).clone()).collect();
            (l, a)
        })
        .collect()
}

/// A projection `P: V -> k²` with `rank(P M Pᵀ) = 2`; `w` is a basis of `ker P`.
#[derive(Clone, Debug)]
pub struct Rank2Split {
    pub p: DegreeMatrix,
    pub w: Vec<Vec<Scalar>>,
    pub b_prime: QuadraticTensor,
}

pub(crate) fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut s = a[0].field().zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s = &s + &(x * y);
        }
    }
    s
}

pub(crate) fn mat_vec(m: &DegreeMatrix, v: &[Scalar]) -> Vec<Scalar> {
    (0..m.rows()).map(|i| dot(m.row(i), v)).collect()
}

/// Vectors with first nonzero entry 1 and other entries from `vals`, by support size, then
/// support positions, then values.
pub fn normalized_vectors(field: Field, n: usize, vals: &[i64]) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for s in 1..=n {
        for support in combinations(n, s) {
            let mut idx = vec![0usize; s - 1];
            loop {
                let mut v = vec![field.zero(); n];
                v[support[0]] = field.one();
                for (k, &pos) in support[1..].iter().enumerate() {
                    v[pos] = field.from_i64(vals[idx[k]]);
                }
                if support.iter().all(|&p| !v[p].is_zero()) {
                    out.push(v);
                }
                let mut k = s as isize - 2;
                while k >= 0 {
                    idx[k as usize] += 1;
                    if idx[k as usize] < vals.len() {
                        break;
                    }
                    idx[k as usize] = 0;
                    k -= 1;
                }
                if k < 0 {
                    break;
                }
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn det2(a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar) -> Scalar {
    &(a * d) - &(b * c)
}

fn independent(u: &[Scalar], v: &[Scalar]) -> bool {
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if !det2(&u[i], &u[j], &v[i], &v[j]).is_zero() {
                return true;
            }
        }
    }
    false
}

fn try_pairs(t: &QuadraticTensor, cands: &[Vec<Scalar>]) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    let mv: Vec<Vec<Scalar>> = cands.iter().map(|v| mat_vec(&t.m, v)).collect();
    for i in 0..cands.len() {
        let a = dot(&cands[i], &mv[i]);
        for j in i + 1..cands.len() {
            let b = dot(&cands[i], &mv[j]);
            let c = dot(&cands[j], &mv[i]);
            let d = dot(&cands[j], &mv[j]);
            if !det2(&a, &b, &c, &d).is_zero() && independent(&cands[i], &cands[j]) {
                return Some((cands[i].clone(), cands[j].clone()));
            }
        }
    }
    None
}

/// Kernel basis of the rows, each normalized to first nonzero entry 1.
pub fn normalized_kernel(rows: &DegreeMatrix) -> Vec<Vec<Scalar>> {
    rows.kernel()
        .into_iter()
        .map(|v| {
            let f = v.iter().find(|c| !c.is_zero()).unwrap().inv();
            v.iter().map(|c| c * &f).collect()
        })
        .collect()
}

pub fn rank2_subspace(t: &QuadraticTensor) -> Result<Rank2Split> {
    rank2_subspace_seeded(t, 0)
}

pub fn rank2_subspace_seeded(t: &QuadraticTensor, seed: u64) -> Result<Rank2Split> {
    let r = tensor_rank(t);
    if r < 2 {
        return Err(Error::RankMismatch(r, "rank at least 2 (use rank_one_factor)"));
    }
    let (n, field) = (t.n(), t.field());
    let mut found = try_pairs(t, &normalized_vectors(field, n, &[1, -1]));
    if found.is_none() {
        found = try_pairs(t, &normalized_vectors(field, n, &[1, -1, 2, -2, 3, -3]));
    }
    if found.is_none() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10_000 {
            let row = |rng: &mut ChaCha8Rng| -> Vec<Scalar> { (0..n).map(|_| random_scalar(field, rng)).collect() };
            let cands = vec![row(&mut rng), row(&mut rng)];
            if let Some(p) = try_pairs(t, &cands) {
                found = Some(p);
                break;
            }
        }
    }
    let (a, b) = found.ok_or_else(|| Error::Inconclusive("no rank-two projection found".into()))?;
    let p = DegreeMatrix::from_rows(field, vec![a, b]);
    let b_prime = QuadraticTensor::new(p.mul(&t.m).mul(&p.transpose()));
    assert_eq!(b_prime.m.rank(), 2, "projection must have rank two");
    Ok(Rank2Split {
        w: normalized_kernel(&p),
        p,
        b_prime,
    })
}

/// A seeded random one-relator quadratic presentation `k<x1..xn | b>` with `b ≠ 0`.
pub fn random_quadratic_presentation(field: Field, n: usize, seed: u64) -> Result<AlgebraPresentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| random_scalar(field, &mut rng)).collect()).collect();
        let t = QuadraticTensor::new(DegreeMatrix::from_rows(field, rows));
        if tensor_rank(&t) > 0 {
            return AlgebraPresentation::standard(field, n, vec![t.to_poly()]);
        }
    }
}

pub(crate) fn random_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.gen_range(-10..=10)),
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
    }
}

/// Graded analogue for a relation pairing `p` lowest-weight with `p` highest-weight
/// generators: a low form `l` and a high form `h` whose cross coefficients
/// `lᵀ M_lh h` and `hᵀ M_hl l` are both nonzero. `m_lh[i][j]` is the coefficient of
/// `low_i high_j`, `m_hl[j][i]` that of `high_j low_i`.
pub fn graded_rank2_pair(m_lh: &DegreeMatrix, m_hl: &DegreeMatrix) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    let field = m_lh.field();
    let (pl, ph) = (m_lh.rows(), m_lh.cols());
    for vals in [&[1i64, -1][..], &[1, -1, 2, -2, 3, -3][..]] {
        let lows = normalized_vectors(field, pl, vals);
        let highs = normalized_vectors(field, ph, vals);
        for l in &lows {
            let lm = mat_vec(&m_lh.transpose(), l);
            for h in &highs {
                let hm = mat_vec(&m_hl.transpose(), h);
                if !dot(&lm, h).is_zero() && !dot(&hm, l).is_zero() {
                    return Some((l.clone(), h.clone()));
                }
            }
        }
    }
    None
}

/// Images of the generators under a weight-preserving algebra endomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAutomorphism {
    pub images: Vec<NcPolynomial>,
}

impl GradedAutomorphism {
    pub fn identity(field: Field, n: usize) -> Self {
        GradedAutomorphism {
            images: (0..n).map(|i| NcPolynomial::generator(field, i)).collect(),
        }
    }

    /// Linear substitution `x_i -> Σ_j a[i][j] x_j`.
    pub fn linear(a: &DegreeMatrix) -> Self {
        let f = a.field();
        GradedAutomorphism {
            images: (0..a.rows())
                .map(|i| {
                    NcPolynomial::from_terms(f, (0..a.cols()).map(|j| (Word::letter(j), a.get(i, j).clone())))
                })
                .collect(),
        }
    }

    pub fn apply(&self, p: &NcPolynomial) -> NcPolynomial {
        p.substitute(&self.images)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedAutomorphism) -> GradedAutomorphism {
        GradedAutomorphism {
            images: other.images.iter().map(|p| self.apply(p)).collect(),
        }
    }

    pub fn power(&self, k: u32) -> GradedAutomorphism {
        let f = self.images.first().map_or(Field::Rational, |p| p.field());
        let mut r = GradedAutomorphism::identity(f, self.images.len());
        for _ in 0..k {
            r = self.compose(&r);
        }
        r
    }

    pub fn preserves_weights(&self, weights: &[u32]) -> bool {
        self.images.len() == weights.len()
            && self
                .images
                .iter()
                .zip(weights)
                .all(|(p, &w)| !p.is_zero() && p.homogeneous_degree(weights) == Some(w))
    }

    /// Matrix of the induced map on the span of weight-`w` generators modulo decomposables.
    pub fn linear_part(&self, weights: &[u32], w: u32) -> DegreeMatrix {
        let f = self.images.first().map_or(Field::Rational, |p| p.field());
        let idx: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] == w).collect();
        let rows = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.images[i].coeff(&Word::letter(j))).collect())
            .collect();
        DegreeMatrix::from_rows(f, rows)
    }

    pub fn is_invertible(&self, weights: &[u32]) -> bool {
        if !self.preserves_weights(weights) {
            return false;
        }
        let mut ws: Vec<u32> = weights.to_vec();
        ws.dedup();
        ws.iter().all(|&w| self.linear_part(weights, w).is_invertible())
    }
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub is_regular: bool,
    pub n: usize,
    /// Tensor rank of the relation (degree-one case) or of its top-weight pairing part.
    pub rank: usize,
    pub degree_pairing_ok: bool,
    pub sigma: Option<GradedAutomorphism>,
    pub tau: Option<GradedAutomorphism>,
    /// The right-factor automorphism failed invertibility although `sigma` passed.
    pub tau_inconclusive: bool,
    pub gorenstein_shift: u32,
    pub noetherian: bool,
    pub reason: Option<String>,
}

/// Printable form of a [`RegularityReport`], automorphisms rendered over the presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularitySummary {
    pub is_regular: bool,
    pub n: usize,
    pub rank: usize,
    pub degree_pairing_ok: bool,
    pub sigma: Option<Vec<String>>,
    pub tau: Option<Vec<String>>,
    pub tau_inconclusive: bool,
    pub gorenstein_shift: u32,
    pub noetherian: bool,
    pub reason: Option<String>,
}

impl RegularityReport {
    pub fn summary(&self, pres: &AlgebraPresentation) -> RegularitySummary {
        let render = |a: &Option<GradedAutomorphism>| {
            a.as_ref()
                .map(|a| a.images.iter().map(|p| pres.poly_to_string(p)).collect())
        };
        RegularitySummary {
            is_regular: self.is_regular,
            n: self.n,
            rank: self.rank,
            degree_pairing_ok: self.degree_pairing_ok,
            sigma: render(&self.sigma),
            tau: render(&self.tau),
            tau_inconclusive: self.tau_inconclusive,
            gorenstein_shift: self.gorenstein_shift,
            noetherian: self.noetherian,
            reason: self.reason.clone(),
        }
    }
}

/// Coefficient matrices of the part of `b` built from one lowest-weight and one
/// highest-weight letter: `(M_lh, M_hl)` over the `p` lowest and `p` highest generators.
pub fn top_pair(b: &NcPolynomial, weights: &[u32]) -> (Vec<usize>, Vec<usize>, DegreeMatrix, DegreeMatrix) {
    let n = weights.len();
    let (dmin, dmax) = (weights[0], weights[n - 1]);
    let low: Vec<usize> = (0..n).filter(|&i| weights[i] == dmin).collect();
    let high: Vec<usize> = (0..n).filter(|&i| weights[i] == dmax).collect();
    let f = b.field();
    let mut lh = DegreeMatrix::zeros(f, low.len(), high.len());
    let mut hl = DegreeMatrix::zeros(f, high.len(), low.len());
    for (w, c) in b.terms() {
        if let [a, bb] = w.letters() {
            let (a, bb) = (*a as usize, *bb as usize);
            if let (Some(i), Some(j)) = (low.iter().position(|&x| x == a), high.iter().position(|&x| x == bb)) {
                lh.set(i, j, c.clone());
            }
            if let (Some(j), Some(i)) = (high.iter().position(|&x| x == a), low.iter().position(|&x| x == bb)) {
                hl.set(j, i, c.clone());
            }
        }
    }
    (low, high, lh, hl)
}

/// Left factors: `b = Σ x_i c_i`.
pub(crate) fn left_factors(b: &NcPolynomial, n: usize) -> Vec<NcPolynomial> {
    let mut c = vec![NcPolynomial::zero(b.field()); n];
    for (w, a) in b.terms() {
        let l = w.letters();
        c[l[0] as usize].add_term(Word(l[1..].to_vec()), a.clone());
    }
    c
}

/// Right factors: `b = Σ r_i x_i`.
fn right_factors(b: &NcPolynomial, n: usize) -> Vec<NcPolynomial> {
    let mut c = vec![NcPolynomial::zero(b.field()); n];
    for (w, a) in b.terms() {
        let l = w.letters();
        c[l[l.len() - 1] as usize].add_term(Word(l[..l.len() - 1].to_vec()), a.clone());
    }
    c
}

pub fn zhang_regular_check(pres: &AlgebraPresentation) -> RegularityReport {
    let n = pres.n();
    let weights = pres.weights();
    let mut rep = RegularityReport {
        is_regular: false,
        n,
        rank: 0,
        degree_pairing_ok: false,
        sigma: None,
        tau: None,
        tau_inconclusive: false,
        gorenstein_shift: 0,
        noetherian: false,
        reason: None,
    };
    if pres.relations().len() != 1 {
        rep.reason = Some(format!("{} relations; regularity test needs exactly one", pres.relations().len()));
        return rep;
    }
    let b = &pres.relations()[0];
    let deg = b.homogeneous_degree(&weights).unwrap();
    rep.gorenstein_shift = deg;
    let uniform = weights.iter().all(|&w| w == weights[0]);
    rep.rank = if uniform {
        QuadraticTensor::from_poly(b, n).map(|t| tensor_rank(&t)).unwrap_or(0)
    } else {
        let (_, _, lh, hl) = top_pair(b, &weights);
        let (pl, ph) = (lh.rows(), lh.cols());
        let mut m = DegreeMatrix::zeros(b.field(), pl + ph, pl + ph);
        for i in 0..pl {
            for j in 0..ph {
                m.set(i, pl + j, lh.get(i, j).clone());
                m.set(pl + j, i, hl.get(j, i).clone());
            }
        }
        m.rank()
    };
    rep.degree_pairing_ok = (0..n).all(|i| weights[i] + weights[n - 1 - i] == deg);
    if n < 2 {
        rep.reason = Some("fewer than two generators".into());
        return rep;
    }
    if !rep.degree_pairing_ok {
        rep.reason = Some(format!("relation degree {deg} is not d_i + d_(n+1-i) for all i"));
        return rep;
    }
    let lf = left_factors(b, n);
    let sigma = GradedAutomorphism {
        images: (0..n).map(|j| lf[n - 1 - j].clone()).collect(),
    };
    let rf = right_factors(b, n);
    let tau = GradedAutomorphism {
        images: (0..n).map(|j| rf[n - 1 - j].clone()).collect(),
    };
    let s_ok = sigma.is_invertible(&weights);
    let t_ok = tau.is_invertible(&weights);
    rep.is_regular = s_ok;
    rep.tau_inconclusive = s_ok && !t_ok;
    if !s_ok {
        rep.reason = Some(if uniform {
            format!("tensor rank {} is less than n = {n}", rep.rank)
        } else {
            "left-factor map is not invertible modulo decomposables".into()
        });
    }
    rep.noetherian = rep.is_regular && n == 2;
    rep.sigma = Some(sigma);
    rep.tau = Some(tau);
    rep
}

/// Koszul dual of a quadratic algebra generated in degree one.
pub fn koszul_dual(pres: &AlgebraPresentation) -> Result<AlgebraPresentation> {
    if !pres.is_degree_one_generated() || pres.relation_degrees().iter().any(|&d| d != 2) {
        return Err(Error::Unsupported("Koszul duals need degree-one generators and quadratic relations".into()));
    }
    let n = pres.n();
    let f = pres.field();
    let order = pres.default_order();
    let mut words: Vec<Word> = (0..n * n).map(|k| Word::from_letters(&[k / n, k % n])).collect();
    words.sort_by(|a, b| order.cmp(b, a));
    let rows: Vec<Vec<Scalar>> = pres
        .relations()
        .iter()
        .map(|r| words.iter().map(|w| r.coeff(w)).collect())
        .collect();
    let kernel = if rows.is_empty() {
        (0..n * n)
            .map(|k| (0..n * n).map(|j| if j == k { f.one() } else { f.zero() }).collect())
            .collect()
    } else {
        DegreeMatrix::from_rows(f, rows).kernel()
    };
    let rels = kernel
        .into_iter()
        .map(|v| NcPolynomial::from_terms(f, words.iter().cloned().zip(v)))
        .collect();
    let gens = pres
        .generators()
        .iter()
        .map(|g| Generator {
            index: g.index,
            name: format!("d{}", g.name),
            weight: 1,
        })
        .collect();
    AlgebraPresentation::new(f, gens, rels)
}

/// Twist by a single graded automorphism: the relations of the twisted algebra are
/// `Φ⁻¹(r)` where `Φ(x_a v) = x_a σ^{d_a}(Φ(v))` on each degree slice.
pub fn zhang_twist(pres: &AlgebraPresentation, sigma: &GradedAutomorphism) -> Result<AlgebraPresentation> {
    let weights = pres.weights();
    if !sigma.is_invertible(&weights) {
        return Err(Error::NotAnAutomorphism("map is not an invertible graded automorphism".into()));
    }
    let f = pres.field();
    let gb = two_sided_gb(pres, &pres.default_order(), pres.max_relation_degree().max(1))?;
    for (i, r) in pres.relations().iter().enumerate() {
        if !gb.normal_form(&sigma.apply(r))?.is_zero() {
            return Err(Error::NotAnAutomorphism(format!("image of relation {} is not in the ideal", i + 1)));
        }
    }
    let free = AlgebraPresentation::new(f, pres.generators().to_vec(), vec![])?;
    let gbf = two_sided_gb(&free, &free.default_order(), 1)?;
    let maxw = weights.iter().copied().max().unwrap_or(1);
    let powers: Vec<GradedAutomorphism> = (0..=maxw).map(|k| sigma.power(k)).collect();
    let mut rels = Vec::new();
    for r in pres.relations() {
        let d = r.homogeneous_degree(&weights).unwrap();
        let words = {
            let mut w = gbf.normal_words(d)?;
            w.reverse();
            w
        };
        let pos: std::collections::HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        // column j of phi = Φ(words[j])
        let mut phi = DegreeMatrix::zeros(f, words.len(), words.len());
        for (j, w) in words.iter().enumerate() {
            let img = phi_word(w, &weights, &powers);
            for (u, c) in img.terms() {
                phi.set(pos[u], j, c.clone());
            }
        }
        let inv = phi.inverse().ok_or_else(|| Error::NotAnAutomorphism("twist map is singular".into()))?;
        let target: Vec<Scalar> = words.iter().map(|w| r.coeff(w)).collect();
        let sol = NcPolynomial::from_terms(f, words.iter().cloned().zip(mat_vec(&inv, &target)));
        // keep the leading coefficient of the original relation
        let order = pres.default_order();
        let lc = r.leading_term(&order).unwrap().1.clone();
        let lc_new = sol.leading_term(&order).unwrap().1.inv();
        rels.push(sol.scale(&(&lc * &lc_new)));
    }
    AlgebraPresentation::new(f, pres.generators().to_vec(), rels)
}

fn phi_word(w: &Word, weights: &[u32], powers: &[GradedAutomorphism]) -> NcPolynomial {
    let l = w.letters();
    let f = powers[0].images.first().map_or(Field::Rational, |p| p.field());
    if l.len() <= 1 {
        return NcPolynomial::monomial(f.one(), w.clone());
    }
    let a = l[0] as usize;
    let rest = phi_word(&Word(l[1..].to_vec()), weights, powers);
    powers[weights[a] as usize].apply(&rest).mul_word_left(&Word::letter(a))
}
