//! Finite presentations of graded right ideals, Betti tables, and coherence certificates for
//! one-relator algebras.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{complete_polys, preferred_order, right_gb, GroebnerBasis};
use crate::hilbert::{bxa_products, generator_series, hilbert_from_gb, hilbert_series, strongly_free_check, StronglyFree};
use crate::linalg::{sparse_from_entries, DegreeMatrix, SparseEchelon, SparseVec};
use crate::poly::NcPolynomial;
use crate::presentation::AlgebraPresentation;
use crate::quadratic::{
    dot, graded_rank2_pair, mat_vec, normalized_vectors, rank2_subspace, rank_one_factor, tensor_rank,
    top_pair, zhang_regular_check, GradedAutomorphism, QuadraticTensor, RegularityReport, RegularitySummary,
};
use crate::scalar::{Field, Scalar};
use crate::word::Word;

/// A relation `Σ g_i · components[i] = 0` among the ideal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syzygy {
    pub degree: u32,
    pub components: Vec<NcPolynomial>,
}

#[derive(Clone, Debug)]
pub struct RightIdealPresentation {
    /// Minimal generators in normal form, sorted by degree.
    pub generators: Vec<NcPolynomial>,
    pub generator_degrees: Vec<u32>,
    /// Minimal syzygies through `certified_degree`.
    pub syzygies: Vec<Syzygy>,
    pub certified_degree: u32,
    pub minimal: bool,
    /// Positions of the input generators dropped as redundant.
    pub pruned: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub tor1: BTreeMap<u32, usize>,
    pub tor2: BTreeMap<u32, usize>,
    pub certified_degree: u32,
    /// No new minimal syzygy in the last three degrees.
    pub stabilized: bool,
}

impl BettiTable {
    pub fn tor1_total(&self) -> usize {
        self.tor1.values().sum()
    }

    pub fn tor2_total(&self) -> usize {
        self.tor2.values().sum()
    }

    /// Coefficients `0..=trunc` of `Σ tor_i(d) z^d` for `i = 1, 2`.
    pub fn series(&self, i: u32, trunc: u32) -> Vec<i128> {
        let m = if i == 1 { &self.tor1 } else { &self.tor2 };
        let mut c = vec![0i128; trunc as usize + 1];
        for (&d, &k) in m {
            if d <= trunc {
                c[d as usize] += k as i128;
            }
        }
        c
    }
}

impl RightIdealPresentation {
    /// Checks that every syzygy vanishes in `A`.
    pub fn verify(&self, gb: &GroebnerBasis) -> Result<bool> {
        for s in &self.syzygies {
            let mut total = NcPolynomial::zero(gb.field());
            for (g, a) in self.generators.iter().zip(&s.components) {
                total = total.add(&g.mul(a));
            }
            if !gb.normal_form(&total)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn betti(&self) -> BettiTable {
        let mut tor1 = BTreeMap::new();
        for &d in &self.generator_degrees {
            *tor1.entry(d).or_insert(0) += 1;
        }
        let mut tor2 = BTreeMap::new();
        for s in &self.syzygies {
            *tor2.entry(s.degree).or_insert(0) += 1;
        }
        let top = self.certified_degree.saturating_sub(2);
        let stabilized = !self.syzygies.iter().any(|s| s.degree >= top);
        BettiTable {
            tor1,
            tor2,
            certified_degree: self.certified_degree,
            stabilized,
        }
    }
}

struct WordCache<'a> {
    gb: &'a GroebnerBasis,
    words: HashMap<u32, Vec<Word>>,
}

impl WordCache<'_> {
    fn get(&mut self, d: u32) -> Result<&[Word]> {
        if !self.words.contains_key(&d) {
            let w = self.gb.normal_words(d)?;
            self.words.insert(d, w);
        }
        Ok(&self.words[&d])
    }
}

/// Minimal generators and minimal syzygies of the right ideal generated by `gens`, through
/// degree `bound`. Syzygies are found degree by degree as a complement of
/// `(earlier syzygies)·A_+` inside the kernel of `⊕ A[-d_i] → A`.
pub fn ideal_presentation(
    gb: &GroebnerBasis,
    gens: &[NcPolynomial],
    bound: u32,
) -> Result<(RightIdealPresentation, BettiTable)> {
    gb.check_degree(bound)?;
    let w = gb.weights().to_vec();
    let mut inputs = Vec::new();
    let mut pruned = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        if g.is_zero() {
            pruned.push(k);
            continue;
        }
        let d = g
            .homogeneous_degree(&w)
            .ok_or_else(|| Error::Parameter(format!("ideal generator {} is not homogeneous", k + 1)))?;
        if d > bound {
            return Err(Error::Parameter(format!(
                "ideal generator {} has degree {d} above the bound {bound}",
                k + 1
            )));
        }
        inputs.push((d, k, gb.normal_form(g)?));
    }
    inputs.sort_by_key(|(d, k, _)| (*d, *k));
    let mut kept: Vec<NcPolynomial> = Vec::new();
    let mut degs = Vec::new();
    for (d, k, g) in inputs {
        if g.is_zero() || right_gb(&kept, gb, d)?.contains(&g)? {
            pruned.push(k);
        } else {
            kept.push(g);
            degs.push(d);
        }
    }
    pruned.sort_unstable();
    let pres = present_minimal(gb, kept, degs, pruned, bound)?;
    let betti = pres.betti();
    Ok((pres, betti))
}

/// Syzygies of generators already known to be minimal.
pub(crate) fn present_minimal(
    gb: &GroebnerBasis,
    kept: Vec<NcPolynomial>,
    degs: Vec<u32>,
    pruned: Vec<usize>,
    bound: u32,
) -> Result<RightIdealPresentation> {
    let field = gb.field();
    let jd = right_gb(&kept, gb, bound)?.dims(bound)?;
    let mut cache = WordCache {
        gb,
        words: HashMap::new(),
    };
    let mut syz: Vec<Syzygy> = Vec::new();
    for d in 0..=bound {
        let mut basis: Vec<(usize, Word)> = Vec::new();
        for (i, &di) in degs.iter().enumerate() {
            if di <= d {
                basis.extend(cache.get(d - di)?.iter().map(|v| (i, v.clone())));
            }
        }
        let dim_k = basis.len() as u128 - jd[d as usize];
        if dim_k == 0 {
            continue;
        }
        let cols: HashMap<(usize, Word), u32> =
            basis.iter().enumerate().map(|(c, key)| (key.clone(), c as u32)).collect();
        let mut dec = SparseEchelon::new(field);
        for s in &syz {
            if s.degree >= d {
                continue;
            }
            let rights = cache.get(d - s.degree)?.to_vec();
            for v in &rights {
                let mut entries = Vec::new();
                for (i, a) in s.components.iter().enumerate() {
                    for (u, c) in gb.normal_form(&a.mul_word_right(v))?.terms() {
                        entries.push((cols[&(i, u.clone())], c.clone()));
                    }
                }
                dec.insert(sparse_from_entries(field, entries));
            }
        }
        let new = dim_k - dec.rank() as u128;
        if new == 0 {
            continue;
        }
        let mut image = SparseEchelon::with_history(field);
        let mut wcols: HashMap<Word, u32> = HashMap::new();
        let mut found = 0u128;
        for (c, (i, v)) in basis.iter().enumerate() {
            let p = gb.normal_form(&kept[*i].mul_word_right(v))?;
            let sv = sparse_from_entries(
                field,
                p.terms().map(|(u, a)| {
                    let k = wcols.len() as u32;
                    (*wcols.entry(u.clone()).or_insert(k), a.clone())
                }),
            );
            if let Some(dep) = image.insert_tracked(sv, c as u32) {
                if dec.insert(dep.clone()) {
                    syz.push(to_syzygy(field, d, &dep, &basis, kept.len()));
                    found += 1;
                    if found == new {
                        break;
                    }
                }
            }
        }
        debug_assert_eq!(found, new, "kernel dimension mismatch in degree {d}");
    }
    Ok(RightIdealPresentation {
        generators: kept,
        generator_degrees: degs,
        syzygies: syz,
        certified_degree: bound,
        minimal: true,
        pruned,
    })
}

fn to_syzygy(field: Field, d: u32, dep: &SparseVec, basis: &[(usize, Word)], m: usize) -> Syzygy {
    let mut components = vec![NcPolynomial::zero(field); m];
    for (c, a) in dep {
        let (i, v) = &basis[*c as usize];
        components[*i].add_term(v.clone(), a.clone());
    }
    Syzygy { degree: d, components }
}

/// Basis of `A` used for ideal computations: the preferred order, truncated at `bound`.
fn truncated_basis(pres: &AlgebraPresentation, bound: u32) -> GroebnerBasis {
    complete_polys(pres.field(), pres.relations(), &preferred_order(pres), bound, false)
}

/// Graded dimensions of `Tor_1` and `Tor_2` of `A/J` through `bound`, `J` generated by `gens`.
pub fn tor_betti(pres: &AlgebraPresentation, gens: &[NcPolynomial], bound: u32) -> Result<BettiTable> {
    Ok(ideal_presentation(&truncated_basis(pres, bound), gens, bound)?.1)
}

/// Betti table of the augmentation ideal, i.e. `Tor_1(k, k)` and `Tor_2(k, k)`.
pub fn augmentation_betti(pres: &AlgebraPresentation, bound: u32) -> Result<BettiTable> {
    let gens: Vec<NcPolynomial> = (0..pres.n()).map(|i| NcPolynomial::generator(pres.field(), i)).collect();
    tor_betti(pres, &gens, bound)
}

/// Graded dimension check of `Tor_1^A ⊕ Tor_2^B ≅ Tor_1^B ⊕ Tor_2^A ⊕ kX` and of the Euler
/// characteristics of the higher Tor groups, computed from the two augmentation ideals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorIdentity {
    pub degree: u32,
    pub lhs: Vec<i128>,
    pub rhs: Vec<i128>,
    /// `1/H - 1 + Tor_1 - Tor_2 = Σ_{i≥3} (-1)^i Tor_i` for `A` and `B`.
    pub higher_a: Vec<i128>,
    pub higher_b: Vec<i128>,
    pub holds: bool,
}

pub fn tor_identity_check(
    a: &AlgebraPresentation,
    b: &AlgebraPresentation,
    x_degrees: &[u32],
    bound: u32,
) -> Result<TorIdentity> {
    let ta = augmentation_betti(a, bound)?;
    let tb = augmentation_betti(b, bound)?;
    let xs = generator_series(x_degrees, bound);
    let add = |p: &[i128], q: &[i128]| p.iter().zip(q).map(|(x, y)| x + y).collect::<Vec<_>>();
    let lhs = add(&ta.series(1, bound), &tb.series(2, bound));
    let rhs = add(&add(&tb.series(1, bound), &ta.series(2, bound)), xs.coeffs());
    let higher = |pres: &AlgebraPresentation, t: &BettiTable| -> Result<Vec<i128>> {
        let inv = hilbert_series(pres, bound).reciprocal()?;
        let (t1, t2) = (t.series(1, bound), t.series(2, bound));
        Ok((0..=bound as usize)
            .map(|d| inv.coeffs()[d] - i128::from(d == 0) + t1[d] - t2[d])
            .collect())
    };
    let higher_a = higher(a, &ta)?;
    let higher_b = higher(b, &tb)?;
    let holds = lhs == rhs && higher_a == higher_b;
    Ok(TorIdentity {
        degree: bound,
        lhs,
        rhs,
        higher_a,
        higher_b,
        holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// The relation is a product of two linear forms.
    Monomial,
    /// Two generators and a regular relation.
    Noetherian,
    /// `A/(X)` is regular on two generators with `X` strongly free.
    Rnci,
}

#[derive(Clone, Debug)]
pub struct CoherenceCertificate {
    pub kind: CertificateKind,
    pub n: usize,
    /// Tensor rank of the relation, or of its top-weight pairing.
    pub rank: usize,
    /// Monomial kind: `b = (u·x)(v·x)`.
    pub factors: Option<(Vec<Scalar>, Vec<Scalar>)>,
    /// `C` with `x_i = Σ_k C[k][i] u_k` in the new generators `u_k`.
    pub base_change: Option<DegreeMatrix>,
    /// Basis of the span of `X` in the original linear coordinates.
    pub w: Vec<Vec<Scalar>>,
    /// Positions of `X` among the new generators.
    pub x: Vec<usize>,
    /// The algebra in the new generators.
    pub a_prime: Option<AlgebraPresentation>,
    /// `A'/(X)` on the two remaining generators.
    pub b: Option<AlgebraPresentation>,
    pub strongly_free_degree: Option<u32>,
    pub regularity: Option<RegularityReport>,
}

/// JSON-ready view of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub kind: CertificateKind,
    pub n: usize,
    pub rank: usize,
    pub factors: Option<[String; 2]>,
    pub base_change: Option<Vec<Vec<String>>>,
    pub w: Vec<Vec<String>>,
    /// Elements of `X` written in the original generators.
    pub x: Vec<String>,
    pub a_prime: Option<String>,
    pub b: Option<String>,
    pub strongly_free_degree: Option<u32>,
    pub regularity: Option<RegularitySummary>,
}

fn vec_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn linear_form(field: Field, v: &[Scalar]) -> NcPolynomial {
    NcPolynomial::from_terms(field, v.iter().enumerate().map(|(i, c)| (Word::letter(i), c.clone())))
}

impl CoherenceCertificate {
    fn basic(kind: CertificateKind, n: usize, rank: usize) -> Self {
        CoherenceCertificate {
            kind,
            n,
            rank,
            factors: None,
            base_change: None,
            w: Vec::new(),
            x: Vec::new(),
            a_prime: None,
            b: None,
            strongly_free_degree: None,
            regularity: None,
        }
    }

    /// `X` as elements of the original algebra: columns of `C⁻¹`.
    pub fn x_elements(&self, field: Field) -> Vec<NcPolynomial> {
        let Some(c) = &self.base_change else {
            return Vec::new();
        };
        let t = c.inverse().expect("base change is invertible");
        self.x
            .iter()
            .map(|&k| linear_form(field, &(0..t.rows()).map(|i| t.get(i, k).clone()).collect::<Vec<_>>()))
            .collect()
    }

    pub fn report(&self, pres: &AlgebraPresentation) -> CertificateReport {
        let f = pres.field();
        CertificateReport {
            kind: self.kind,
            n: self.n,
            rank: self.rank,
            factors: self
                .factors
                .as_ref()
                .map(|(u, v)| [pres.poly_to_string(&linear_form(f, u)), pres.poly_to_string(&linear_form(f, v))]),
            base_change: self
                .base_change
                .as_ref()
                .map(|c| (0..c.rows()).map(|i| vec_strings(c.row(i))).collect()),
            w: self.w.iter().map(|v| vec_strings(v)).collect(),
            x: self.x_elements(f).iter().map(|p| pres.poly_to_string(p)).collect(),
            a_prime: self.a_prime.as_ref().map(|p| p.render()),
            b: self.b.as_ref().map(|p| p.render()),
            strongly_free_degree: self.strongly_free_degree,
            regularity: self.regularity.as_ref().map(|r| match &self.b {
                Some(b) => r.summary(b),
                None => r.summary(pres),
            }),
        }
    }
}

fn outside_scope(msg: &str) -> Error {
    Error::Unsupported(format!("outside proved scope: {msg}"))
}

/// Certificate of right graded coherence for a one-relator algebra: the relation is a product
/// of linear forms, the algebra is Noetherian, or a base change exhibits a strongly free set
/// `X` of generators with a regular two-generator quotient.
pub fn rnci_extract(pres: &AlgebraPresentation, bound: u32) -> Result<CoherenceCertificate> {
    if pres.relations().len() != 1 {
        return Err(Error::Parameter(format!(
            "expected exactly one relation, found {}",
            pres.relations().len()
        )));
    }
    let w = pres.weights();
    let b = &pres.relations()[0];
    let deg = b.homogeneous_degree(&w).expect("validated relation");
    if w.iter().all(|&x| x == w[0]) {
        if deg != 2 * w[0] {
            return Err(outside_scope("single relation that is not quadratic in the generators"));
        }
        quadratic_certificate(pres, bound)
    } else {
        weighted_certificate(pres, bound)
    }
}

fn quadratic_certificate(pres: &AlgebraPresentation, bound: u32) -> Result<CoherenceCertificate> {
    let n = pres.n();
    let t = QuadraticTensor::from_poly(&pres.relations()[0], n)?;
    let rank = tensor_rank(&t);
    if rank == 1 {
        let mut c = CoherenceCertificate::basic(CertificateKind::Monomial, n, rank);
        c.factors = Some(rank_one_factor(&t)?);
        return Ok(c);
    }
    if n == 2 {
        let mut c = CoherenceCertificate::basic(CertificateKind::Noetherian, n, rank);
        c.regularity = Some(zhang_regular_check(pres));
        return Ok(c);
    }
    let split = rank2_subspace(&t)?;
    let c = complete_rows(&split.p, &t.m);
    let mut cert = finish_rnci(pres, c, [0, 1], bound)?;
    cert.rank = rank;
    cert.w = split.w;
    Ok(cert)
}

/// Extends the two rows of `p` to an invertible matrix. An extra row `r` with `r M rᵀ = 0`
/// and `r M ≠ 0` is preferred: under a suitable order the new relation then leads with two
/// distinct letters and is its own Gröbner basis.
fn complete_rows(p: &DegreeMatrix, m: &DegreeMatrix) -> DegreeMatrix {
    let (f, n) = (p.field(), p.cols());
    let mut rows: Vec<Vec<Scalar>> = (0..p.rows()).map(|i| p.row(i).to_vec()).collect();
    let mt = m.transpose();
    let rank_with = |rows: &[Vec<Scalar>], r: &[Scalar]| {
        let mut all = rows.to_vec();
        all.push(r.to_vec());
        DegreeMatrix::from_rows(f, all).rank()
    };
    let iso = isotropic_rows(m).find(|r| {
        mat_vec(&mt, r).iter().any(|c| !c.is_zero()) && rank_with(&rows, r) == rows.len() + 1
    });
    rows.extend(iso);
    for i in 0..n {
        if rows.len() == n {
            break;
        }
        let e: Vec<Scalar> = (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect();
        if rank_with(&rows, &e) == rows.len() + 1 {
            rows.push(e);
        }
    }
    DegreeMatrix::from_rows(f, rows)
}

/// Vectors `r` with `r M rᵀ = 0`: for small base vectors `a` and each unit direction `e_k`,
/// the roots `t` of the quadratic `q(a + t e_k)`.
fn isotropic_rows(m: &DegreeMatrix) -> impl Iterator<Item = Vec<Scalar>> + '_ {
    let (f, n) = (m.field(), m.rows());
    let q = move |v: &[Scalar]| dot(v, &mat_vec(m, v));
    let two = f.from_i64(2);
    normalized_vectors(f, n, &[1, -1, 2, -2, 3, -3])
        .into_iter()
        .flat_map(move |a| (0..n).map(move |k| (a.clone(), k)))
        .flat_map(move |(a, k)| {
            // q(a + t e_k) = q(a) + t·lin + t²·m_kk
            let qa = q(&a);
            let lin = &dot(&a, &(0..n).map(|i| m.get(i, k).clone()).collect::<Vec<_>>()) + &dot(m.row(k), &a);
            let mkk = m.get(k, k).clone();
            let roots: Vec<Scalar> = if qa.is_zero() {
                vec![f.zero()]
            } else if mkk.is_zero() {
                if lin.is_zero() {
                    vec![]
                } else {
                    vec![-&(&qa * &lin.inv())]
                }
            } else {
                let disc = &(&lin * &lin) - &(&(&f.from_i64(4) * &mkk) * &qa);
                match disc.sqrt() {
                    Some(s) => {
                        let den = (&two * &mkk).inv();
                        vec![&(&s - &lin) * &den, &(&(-&s) - &lin) * &den]
                    }
                    None => vec![],
                }
            };
            roots.into_iter().map(move |t| {
                let mut r = a.clone();
                r[k] = &r[k] + &t;
                r
            })
        })
        .filter(|r| r.iter().any(|c| !c.is_zero()))
}

fn weighted_certificate(pres: &AlgebraPresentation, bound: u32) -> Result<CoherenceCertificate> {
    let n = pres.n();
    let w = pres.weights();
    let f = pres.field();
    let rep = zhang_regular_check(pres);
    if !rep.is_regular {
        return Err(outside_scope(&format!(
            "weighted relation that is not regular ({})",
            rep.reason.clone().unwrap_or_default()
        )));
    }
    if n == 2 {
        let mut c = CoherenceCertificate::basic(CertificateKind::Noetherian, n, rep.rank);
        c.regularity = Some(rep);
        return Ok(c);
    }
    let (low, high, lh, hl) = top_pair(&pres.relations()[0], &w);
    let (l, h) = graded_rank2_pair(&lh, &hl).ok_or_else(|| {
        Error::Inconclusive("the top-weight pairing has rank at most one, contradicting regularity".into())
    })?;
    let mut c = DegreeMatrix::identity(f, n);
    let low_rows = complement(f, vec![l], low.len());
    let mut high_rows = complement(f, vec![h], high.len());
    high_rows.rotate_left(1);
    for (blk, rows) in [(&low, &low_rows), (&high, &high_rows)] {
        for (ri, row) in rows.iter().enumerate() {
            for (ci, v) in row.iter().enumerate() {
                c.set(blk[ri], blk[ci], v.clone());
            }
        }
    }
    let mut cert = finish_rnci(pres, c, [0, n - 1], bound)?;
    cert.rank = rep.rank;
    let t = cert.base_change.as_ref().unwrap().inverse().expect("invertible");
    cert.w = cert
        .x
        .iter()
        .map(|&k| (0..n).map(|i| t.get(i, k).clone()).collect())
        .collect();
    Ok(cert)
}

/// `first` followed by unit vectors completing it to a basis of `k^len`.
fn complement(f: Field, first: Vec<Vec<Scalar>>, len: usize) -> Vec<Vec<Scalar>> {
    let mut rows = first;
    for i in 0..len {
        if rows.len() == len {
            break;
        }
        let e: Vec<Scalar> = (0..len).map(|j| if i == j { f.one() } else { f.zero() }).collect();
        let mut all = rows.clone();
        all.push(e.clone());
        if DegreeMatrix::from_rows(f, all).rank() == rows.len() + 1 {
            rows.push(e);
        }
    }
    rows
}

/// Applies the base change `C`, keeps the generators in `keep`, and certifies the rest.
fn finish_rnci(pres: &AlgebraPresentation, c: DegreeMatrix, keep: [usize; 2], bound: u32) -> Result<CoherenceCertificate> {
    let (a_prime, b) = base_change(pres, &c, keep)?;
    let n = pres.n();
    let x: Vec<usize> = (0..n).filter(|k| !keep.contains(k)).collect();
    let xs: Vec<NcPolynomial> = x.iter().map(|&k| NcPolynomial::generator(pres.field(), k)).collect();
    let sf = strongly_free_check(&a_prime, &xs, bound)?;
    if let StronglyFree::Refuted { degree, defect, .. } = sf.verdict {
        return Err(Error::Inconclusive(format!(
            "X is not strongly free: Hilbert defect {defect} in degree {degree}; certificate withheld"
        )));
    }
    let reg = zhang_regular_check(&b);
    if !reg.is_regular || reg.n != 2 {
        return Err(Error::Inconclusive(format!(
            "quotient is not regular on two generators: {}",
            reg.reason.clone().unwrap_or_default()
        )));
    }
    let mut cert = CoherenceCertificate::basic(CertificateKind::Rnci, n, 0);
    cert.base_change = Some(c);
    cert.x = x;
    cert.a_prime = Some(a_prime);
    cert.b = Some(b);
    cert.strongly_free_degree = Some(bound);
    cert.regularity = Some(reg);
    Ok(cert)
}

/// `A'` (relation rewritten in the generators `u_k` with `x_i = Σ_k C[k][i] u_k`) and the
/// quotient of `A'` by all `u_k` outside `keep`.
pub fn base_change(pres: &AlgebraPresentation, c: &DegreeMatrix, keep: [usize; 2]) -> Result<(AlgebraPresentation, AlgebraPresentation)> {
    let n = pres.n();
    let f = pres.field();
    let w = pres.weights();
    if c.rows() != n || c.cols() != n || !c.is_invertible() {
        return Err(Error::Parameter("base change must be an invertible n x n matrix".into()));
    }
    let sub = GradedAutomorphism::linear(&c.transpose());
    let rels: Vec<NcPolynomial> = pres.relations().iter().map(|r| sub.apply(r)).collect();
    let names: Vec<String> = (1..=n).map(|k| format!("u{k}")).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let a_prime = AlgebraPresentation::with_weights(f, &name_refs, &w, rels.clone())?;
    let proj: Vec<NcPolynomial> = (0..n)
        .map(|k| match keep.iter().position(|&j| j == k) {
            Some(p) => NcPolynomial::generator(f, p),
            None => NcPolynomial::zero(f),
        })
        .collect();
    let brels: Vec<NcPolynomial> = rels.iter().map(|r| r.substitute(&proj)).filter(|r| !r.is_zero()).collect();
    let b = AlgebraPresentation::with_weights(
        f,
        &[name_refs[keep[0]], name_refs[keep[1]]],
        &[w[keep[0]], w[keep[1]]],
        brels,
    )?;
    Ok((a_prime, b))
}

/// Independent re-check of a certificate against the original presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub kind: CertificateKind,
    /// The stored data is consistent with the relation (factorisation, base change, quotient).
    pub consistent: bool,
    pub quotient_regular: bool,
    pub tor_identity: Option<TorIdentity>,
    pub valid: bool,
}

pub fn verify_certificate(pres: &AlgebraPresentation, cert: &CoherenceCertificate, tor_degree: u32) -> Result<CertificateCheck> {
    let f = pres.field();
    let b = &pres.relations()[0];
    let mut check = CertificateCheck {
        kind: cert.kind,
        consistent: false,
        quotient_regular: false,
        tor_identity: None,
        valid: false,
    };
    match cert.kind {
        CertificateKind::Monomial => {
            let (u, v) = cert.factors.as_ref().ok_or_else(|| Error::Parameter("missing factors".into()))?;
            check.consistent = linear_form(f, u).mul(&linear_form(f, v)) == *b;
            check.quotient_regular = true;
            check.valid = check.consistent;
        }
        CertificateKind::Noetherian => {
            let reg = zhang_regular_check(pres);
            check.consistent = pres.n() == 2;
            check.quotient_regular = reg.is_regular;
            check.valid = check.consistent && reg.is_regular;
        }
        CertificateKind::Rnci => {
            let (c, b_pres) = match (&cert.base_change, &cert.b) {
                (Some(c), Some(bp)) => (c, bp),
                _ => return Err(Error::Parameter("incomplete rnci certificate".into())),
            };
            let keep: Vec<usize> = (0..pres.n()).filter(|k| !cert.x.contains(k)).collect();
            let keep: [usize; 2] = keep
                .try_into()
                .map_err(|_| Error::Parameter("an rnci certificate keeps exactly two generators".into()))?;
            let (a2, b2) = base_change(pres, c, keep)?;
            check.consistent = cert.a_prime.as_ref() == Some(&a2) && b2 == *b_pres;
            check.quotient_regular = zhang_regular_check(b_pres).is_regular;
            let x_degrees: Vec<u32> = cert.x.iter().map(|&k| pres.weights()[k]).collect();
            let tor = tor_identity_check(pres, b_pres, &x_degrees, tor_degree)?;
            check.valid = check.consistent && check.quotient_regular && tor.holds;
            check.tor_identity = Some(tor);
        }
    }
    Ok(check)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FreeBasisVerdict {
    /// Dimensions agree through `degree`; the products `B'·X·A` were also checked to be
    /// linearly independent through `direct_degree`.
    Holds { degree: u32, direct_degree: u32 },
    Fails { degree: u32, actual: i128, expected: i128 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeBasisReport {
    pub verdict: FreeBasisVerdict,
    /// `dim I_d = dim A_d - dim B_d`.
    pub ideal_dims: Vec<i128>,
    /// Coefficients of `H_B · Σ z^{deg x} · H_A`.
    pub expected_dims: Vec<i128>,
}

/// Largest product count per degree for the direct independence check.
const DIRECT_LIMIT: i128 = 5_000;

/// Checks that the ideal generated by `x` is a free right module on `B'·X`.
pub fn ideal_free_basis_check(pres: &AlgebraPresentation, x: &[NcPolynomial], bound: u32) -> Result<FreeBasisReport> {
    let w = pres.weights();
    let mut degs = Vec::new();
    for p in x {
        degs.push(
            p.homogeneous_degree(&w)
                .ok_or_else(|| Error::Parameter("elements of X must be nonzero and homogeneous".into()))?,
        );
    }
    let order = preferred_order(pres);
    let gba = complete_polys(pres.field(), pres.relations(), &order, bound, false);
    let mut rels_b = pres.relations().to_vec();
    rels_b.extend(x.iter().cloned());
    let gbb = complete_polys(pres.field(), &rels_b, &order, bound, false);
    let h_a = hilbert_from_gb(&gba, bound)?;
    let h_b = hilbert_from_gb(&gbb, bound)?;
    let ideal_dims: Vec<i128> = h_a.sub(&h_b).coeffs().to_vec();
    let expected_dims: Vec<i128> = h_b.mul(&generator_series(&degs, bound)).mul(&h_a).coeffs().to_vec();
    if let Some(d) = (0..=bound as usize).find(|&d| ideal_dims[d] != expected_dims[d]) {
        return Ok(FreeBasisReport {
            verdict: FreeBasisVerdict::Fails {
                degree: d as u32,
                actual: ideal_dims[d],
                expected: expected_dims[d],
            },
            ideal_dims,
            expected_dims,
        });
    }
    let mut direct_degree = 0;
    for d in 1..=bound {
        if expected_dims[d as usize] > DIRECT_LIMIT {
            break;
        }
        let mut ech = SparseEchelon::new(pres.field());
        let mut cols: HashMap<Word, u32> = HashMap::new();
        for (_, p) in bxa_products(&gba, &gbb, x, &degs, d) {
            ech.insert(sparse_from_entries(
                pres.field(),
                p.terms().map(|(u, c)| {
                    let k = cols.len() as u32;
                    (*cols.entry(u.clone()).or_insert(k), c.clone())
                }),
            ));
        }
        if ech.rank() as i128 != expected_dims[d as usize] {
            return Ok(FreeBasisReport {
                verdict: FreeBasisVerdict::Fails {
                    degree: d,
                    actual: ech.rank() as i128,
                    expected: expected_dims[d as usize],
                },
                ideal_dims,
                expected_dims,
            });
        }
        direct_degree = d;
    }
    Ok(FreeBasisReport {
        verdict: FreeBasisVerdict::Holds {
            degree: bound,
            direct_degree,
        },
        ideal_dims,
        expected_dims,
    })
}

/// The relation `x_1x_2 + x_2x_3 + ... + x_nx_1`.
pub fn cyclic_presentation(field: Field, n: usize) -> Result<AlgebraPresentation> {
    let b = NcPolynomial::from_terms(field, (0..n).map(|i| (Word::from_letters(&[i, (i + 1) % n]), field.one())));
    AlgebraPresentation::standard(field, n, vec![b])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainWitness {
    pub n: usize,
    pub t_max: u32,
    pub bound: u32,
    /// `quotients[t-1][d] = dim (I_t / I_{t-1})_d`.
    pub quotients: Vec<Vec<u128>>,
    /// `x_1^t x_3^s` lies in `I_t` but not in `I_{t-1}` for all `s ≥ 1` with `t + s ≤ bound`.
    pub witnesses_verified: bool,
    pub strictly_ascending: bool,
    pub verdict: String,
}

/// Right ideals `I_t = (x_1x_3, x_1^2x_3, ..., x_1^t x_3)` in the cyclic algebra.
pub fn chain_witness(n: usize, t_max: u32, bound: u32) -> Result<ChainWitness> {
    if n < 3 {
        return Err(Error::Parameter("the chain needs n >= 3 generators".into()));
    }
    if t_max < 1 || bound < t_max + 3 {
        return Err(Error::Parameter(format!(
            "need t_max >= 1 and bound >= t_max + 3 (got t_max = {t_max}, bound = {bound})"
        )));
    }
    let f = Field::Rational;
    let pres = cyclic_presentation(f, n)?;
    let gb = crate::groebner::two_sided_gb(&pres, &pres.default_order(), bound)?;
    let gen = |t: u32, s: u32| {
        let mut l = vec![0usize; t as usize];
        l.extend(std::iter::repeat_n(2, s as usize));
        NcPolynomial::monomial(f.one(), Word::from_letters(&l))
    };
    let mut ideals = vec![right_gb(&[], &gb, bound)?];
    for t in 1..=t_max {
        let gens: Vec<NcPolynomial> = (1..=t).map(|k| gen(k, 1)).collect();
        ideals.push(right_gb(&gens, &gb, bound)?);
    }
    let dims: Vec<Vec<u128>> = ideals.iter().map(|r| r.dims(bound)).collect::<Result<_>>()?;
    let quotients: Vec<Vec<u128>> = (1..=t_max as usize)
        .map(|t| dims[t].iter().zip(&dims[t - 1]).map(|(a, b)| a - b).collect())
        .collect();
    let mut witnesses_verified = true;
    for t in 1..=t_max {
        for s in 1..=bound - t {
            let m = gen(t, s);
            if !ideals[t as usize].contains(&m)? || ideals[t as usize - 1].contains(&m)? {
                witnesses_verified = false;
            }
        }
    }
    let strictly_ascending = (1..=t_max).all(|t| (t + 2..=bound).all(|d| quotients[t as usize - 1][d as usize] >= 1));
    let verdict = if strictly_ascending {
        format!("strictly ascending with infinite-dimensional quotients (evidence to degree {bound})")
    } else {
        "not strictly ascending within the bound".to_string()
    };
    Ok(ChainWitness {
        n,
        t_max,
        bound,
        quotients,
        witnesses_verified,
        strictly_ascending,
        verdict,
    })
}
