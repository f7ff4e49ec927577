//! Randomized invariants checked against brute-force linear algebra on the free algebra.

use std::collections::HashMap;

use ncline::coherence::ideal_presentation;
use ncline::groebner::{gb_from_polys, right_gb, two_sided_gb, GroebnerBasis};
use ncline::hilbert::hilbert_series;
use ncline::linalg::{DegreeMatrix, SparseEchelon, SparseVec};
use ncline::poly::NcPolynomial;
use ncline::presentation::AlgebraPresentation;
use ncline::qgr::{chi_check, cohomology_dims, gamma_recovery, TruncatedGradedModule};
use ncline::quadratic::{koszul_dual, zhang_twist, GradedAutomorphism};
use ncline::scalar::Field;
use ncline::word::{MonomialOrder, Word};
use proptest::prelude::*;

const F5: Field = Field::Prime(5);

fn words(n: usize, d: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..d {
        out = out
            .iter()
            .flat_map(|w| (0..n).map(move |a| w.concat(&Word::letter(a))))
            .collect();
    }
    out
}

fn poly_from(field: Field, terms: &[(Vec<usize>, i64)]) -> NcPolynomial {
    NcPolynomial::from_terms(field, terms.iter().map(|(w, c)| (Word::from_letters(w), field.from_i64(*c))))
}

/// `Σ c[k] w_k` over all words of length `d` in `n` letters.
fn homogeneous(field: Field, n: usize, d: usize, coeffs: &[i64]) -> NcPolynomial {
    NcPolynomial::from_terms(field, words(n, d).into_iter().zip(coeffs.iter().map(|&c| field.from_i64(c))))
}

fn coords(p: &NcPolynomial, index: &HashMap<Word, u32>) -> SparseVec {
    let mut v: SparseVec = p.terms().map(|(w, c)| (index[w], c.clone())).collect();
    v.sort_by_key(|e| e.0);
    v
}

/// `dim (k<x>/(rels))_d` by ranking every `u·r·v` in the free algebra.
fn brute_dims(field: Field, n: usize, rels: &[NcPolynomial], max: usize) -> Vec<u128> {
    (0..=max)
        .map(|d| {
            let ws = words(n, d);
            let index: HashMap<Word, u32> = ws.iter().cloned().enumerate().map(|(i, w)| (w, i as u32)).collect();
            let mut ech = SparseEchelon::new(field);
            for r in rels {
                let k = r.terms().next().map_or(0, |(w, _)| w.len());
                if k > d {
                    continue;
                }
                for a in 0..=d - k {
                    for u in words(n, a) {
                        for v in words(n, d - k - a) {
                            ech.insert(coords(&r.mul_word_left(&u).mul_word_right(&v), &index));
                        }
                    }
                }
            }
            (ws.len() - ech.rank()) as u128
        })
        .collect()
}

fn cyclic3(field: Field) -> GroebnerBasis {
    let b = homogeneous(field, 3, 2, &[0, 1, 0, 0, 0, 1, 1, 0, 0]);
    let pres = AlgebraPresentation::standard(field, 3, vec![b]).unwrap();
    two_sided_gb(&pres, &pres.default_order(), 8).unwrap()
}

fn small_poly() -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((prop::collection::vec(0usize..3, 0..4), -3i64..4), 0..5)
}

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(F5), Just(Field::Prime(101))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in field_strategy(), a in small_poly(), b in small_poly(), c in small_poly()) {
        let (a, b, c) = (poly_from(f, &a), poly_from(f, &b), poly_from(f, &c));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&NcPolynomial::one(f)), a.clone());
    }

    #[test]
    fn normal_form_is_a_projection(p in small_poly(), u in prop::collection::vec(0usize..3, 0..3), v in prop::collection::vec(0usize..3, 0..3)) {
        let gb = cyclic3(F5);
        let p = poly_from(F5, &p);
        let nf = gb.normal_form(&p).unwrap();
        prop_assert_eq!(gb.normal_form(&nf).unwrap(), nf.clone());
        for (w, _) in nf.terms() {
            prop_assert!(gb.is_normal(w));
        }
        let b = homogeneous(F5, 3, 2, &[0, 1, 0, 0, 0, 1, 1, 0, 0]);
        let shifted = p.add(&b.mul_word_left(&Word::from_letters(&u)).mul_word_right(&Word::from_letters(&v)));
        prop_assert_eq!(gb.normal_form(&shifted).unwrap(), nf);
    }

    #[test]
    fn slices_match_brute_force(
        n in 2usize..4,
        r1 in prop::collection::vec(-2i64..3, 9),
        r2 in prop::collection::vec(-2i64..3, 9),
        two in any::<bool>(),
    ) {
        let mut rels = vec![homogeneous(F5, n, 2, &r1[..n * n])];
        if two {
            rels.push(homogeneous(F5, n, 2, &r2[..n * n]));
        }
        let order = MonomialOrder::default_for(&vec![1; n]);
        let gb = gb_from_polys(F5, &rels, &order, 5);
        let counts = gb.normal_word_counts(5).unwrap();
        prop_assert_eq!(counts, brute_dims(F5, n, &rels, 5));
    }

    #[test]
    fn right_ideal_membership(
        n in 2usize..4,
        rel in prop::collection::vec(-2i64..3, 9),
        g1 in prop::collection::vec(-2i64..3, 3),
        g2 in prop::collection::vec(-2i64..3, 3),
        q1 in prop::collection::vec(-2i64..3, 9),
        q2 in prop::collection::vec(-2i64..3, 9),
        inside in any::<bool>(),
        noise in prop::collection::vec(-2i64..3, 27),
    ) {
        let b = homogeneous(F5, n, 2, &rel[..n * n]);
        prop_assume!(!b.is_zero());
        let order = MonomialOrder::default_for(&vec![1; n]);
        let gb = gb_from_polys(F5, &[b], &order, 5);
        let gens: Vec<NcPolynomial> = [&g1, &g2].iter().map(|g| homogeneous(F5, n, 1, &g[..n])).filter(|g| !g.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let mut p = NcPolynomial::zero(F5);
        for (g, q) in gens.iter().zip([&q1, &q2]) {
            p = p.add(&g.mul(&homogeneous(F5, n, 2, &q[..n * n])));
        }
        if !inside {
            p = p.add(&homogeneous(F5, n, 3, &noise[..n * n * n]));
        }
        let rgb = right_gb(&gens, &gb, 4).unwrap();
        let index: HashMap<Word, u32> = words(n, 3).into_iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
        let mut ech = SparseEchelon::new(F5);
        for g in &gens {
            for w in words(n, 2) {
                ech.insert(coords(&gb.normal_form(&g.mul_word_right(&w)).unwrap(), &index));
            }
        }
        let oracle = ech.contains(&coords(&gb.normal_form(&p).unwrap(), &index));
        prop_assert_eq!(rgb.contains(&p).unwrap(), oracle);
        if inside {
            prop_assert!(oracle);
        }
    }

    #[test]
    fn twists_preserve_hilbert_series(
        n in 2usize..4,
        q in prop::collection::vec(1i64..5, 3),
        s in prop::collection::vec(1i64..5, 3),
    ) {
        let mut rels = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                rels.push(poly_from(F5, &[(vec![j, i], 1), (vec![i, j], -q[k])]));
                k += 1;
            }
        }
        let pres = AlgebraPresentation::standard(F5, n, rels).unwrap();
        let mut m = DegreeMatrix::zeros(F5, n, n);
        for i in 0..n {
            m.set(i, i, F5.from_i64(s[i]));
        }
        let twisted = zhang_twist(&pres, &GradedAutomorphism::linear(&m)).unwrap();
        let h = hilbert_series(&pres, 6);
        let ht = hilbert_series(&twisted, 6);
        prop_assert_eq!(h.coeffs(), ht.coeffs());
        // q-polynomial rings have the Hilbert series of the commutative polynomial ring
        let mut binom = [1i128; 7];
        for _ in 1..n {
            for d in 1..7 {
                binom[d] += binom[d - 1];
            }
        }
        prop_assert_eq!(h.coeffs(), &binom[..]);
    }

    #[test]
    fn koszul_numerical_identity(n in 2usize..5, m in prop::collection::vec(-2i64..3, 16)) {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| m[i * n..(i + 1) * n].to_vec()).collect();
        let mat = DegreeMatrix::from_i64(F5, &rows);
        prop_assume!(mat.is_invertible());
        let b = homogeneous(F5, n, 2, &m[..n * n]);
        let pres = AlgebraPresentation::standard(F5, n, vec![b]).unwrap();
        let dual = koszul_dual(&pres).unwrap();
        let trunc = 8;
        let ha = hilbert_series(&pres, trunc);
        let hd = hilbert_series(&dual, trunc);
        prop_assert_eq!(&hd.coeffs()[..3], &[1, n as i128, 1][..]);
        for d in 0..=trunc as usize {
            let c: i128 = (0..=d).map(|i| ha.coeffs()[i] * hd.coeffs()[d - i] * if (d - i) % 2 == 0 { 1 } else { -1 }).sum();
            prop_assert_eq!(c, i128::from(d == 0));
        }
    }

    #[test]
    fn rank_plus_nullity(
        f in field_strategy(),
        r in 1usize..6,
        c in 1usize..6,
        e in prop::collection::vec(-3i64..4, 25),
    ) {
        let rows: Vec<Vec<i64>> = (0..r).map(|i| e[i * 5..i * 5 + c].to_vec()).collect();
        let m = DegreeMatrix::from_i64(f, &rows);
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), c);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for v in &kernel {
            for i in 0..r {
                let mut s = f.zero();
                for j in 0..c {
                    s = &s + &(m.get(i, j) * &v[j]);
                }
                prop_assert!(s.is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// Random finitely generated right ideals of a coherent algebra: the computed syzygies
    /// vanish, stop appearing, and reproduce every `dim J_d` from the free cover.
    #[test]
    fn syzygies_reconstruct_ideal_dimensions(
        gens in prop::collection::vec((1usize..3, prop::collection::vec(-2i64..3, 9)), 1..4),
    ) {
        let bound = 8u32;
        let gb = cyclic3(F5);
        let input: Vec<NcPolynomial> = gens.iter().map(|(d, c)| homogeneous(F5, 3, *d, &c[..3usize.pow(*d as u32)])).collect();
        prop_assume!(input.iter().any(|g| !gb.normal_form(g).unwrap().is_zero()));
        let (pres, betti) = ideal_presentation(&gb, &input, bound).unwrap();
        prop_assert!(pres.verify(&gb).unwrap());
        prop_assert!(betti.stabilized);

        let rgb = right_gb(&input, &gb, bound).unwrap();
        let rdims = rgb.dims(bound).unwrap();
        let nw: Vec<Vec<Word>> = (0..=bound).map(|d| gb.normal_words(d).unwrap()).collect();
        for d in 1..=bound {
            let index: HashMap<Word, u32> = nw[d as usize].iter().cloned().enumerate().map(|(i, w)| (w, i as u32)).collect();
            let mut span = SparseEchelon::new(F5);
            for (g, &dg) in pres.generators.iter().zip(&pres.generator_degrees) {
                if dg <= d {
                    for w in &nw[(d - dg) as usize] {
                        span.insert(coords(&gb.normal_form(&g.mul_word_right(w)).unwrap(), &index));
                    }
                }
            }
            let j_d = span.rank();
            prop_assert_eq!(rdims[d as usize], j_d as u128);

            // free cover coordinates: (generator, normal word of degree d - d_g)
            let mut offset = HashMap::new();
            let mut total = 0u32;
            for (k, &dg) in pres.generator_degrees.iter().enumerate() {
                if dg <= d {
                    for (i, w) in nw[(d - dg) as usize].iter().enumerate() {
                        offset.insert((k, w.clone()), total + i as u32);
                    }
                    total += nw[(d - dg) as usize].len() as u32;
                }
            }
            let mut kernel = SparseEchelon::new(F5);
            for s in pres.syzygies.iter().filter(|s| s.degree <= d) {
                for w in &nw[(d - s.degree) as usize] {
                    let mut v: SparseVec = Vec::new();
                    for (k, c) in s.components.iter().enumerate() {
                        for (u, a) in gb.normal_form(&c.mul_word_right(w)).unwrap().terms() {
                            v.push((offset[&(k, u.clone())], a.clone()));
                        }
                    }
                    v.sort_by_key(|e| e.0);
                    kernel.insert(v);
                }
            }
            prop_assert_eq!(total as usize - kernel.rank(), j_d, "degree {}", d);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Random regular one-relator algebras: sections of twisting sheaves recover the
    /// algebra, H^2 of the twists vanishes, and Ext of k and A is finite with the
    /// Gorenstein totals.
    #[test]
    fn tails_of_regular_algebras(n in 2usize..4, m in prop::collection::vec(-2i64..3, 9)) {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| m[i * n..(i + 1) * n].to_vec()).collect();
        prop_assume!(DegreeMatrix::from_i64(F5, &rows).is_invertible());
        let pres = AlgebraPresentation::standard(F5, n, vec![homogeneous(F5, n, 2, &m[..n * n])]).unwrap();

        let gamma = gamma_recovery(&pres, 5).unwrap();
        prop_assert!(gamma.holds);
        let a = hilbert_series(&pres, 5);
        for e in &gamma.entries {
            prop_assert_eq!(e.value.map(|v| v as i128), Some(a.coeffs()[e.j as usize]));
        }

        let coh = cohomology_dims(&pres, 3).unwrap();
        prop_assert!(coh.h2_vanishes);

        let k = chi_check(&pres, &TruncatedGradedModule::residue_field(&pres, (0, 6)), 4).unwrap();
        prop_assert_eq!(k.finite, [true; 3]);
        prop_assert_eq!(k.totals, [1, n, 1]);
        let alg = chi_check(&pres, &TruncatedGradedModule::algebra((0, 6)), 4).unwrap();
        prop_assert_eq!(alg.totals, [0, 0, 1]);
    }
}
