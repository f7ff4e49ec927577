//! Acceptance suite: one PASS/FAIL line per criterion with the time spent in library calls.
//! Expected values come from oracles written here (recurrences, closed-form series,
//! brute-force spans), not from the library's own bookkeeping.

use std::collections::{HashMap, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ncline::coherence::{chain_witness, cyclic_presentation, ideal_free_basis_check, rnci_extract, verify_certificate, CertificateKind, FreeBasisVerdict};
use ncline::groebner::{two_sided_gb, GroebnerBasis};
use ncline::hilbert::{hilbert_series, strongly_free_check, StronglyFree};
use ncline::linalg::{DegreeMatrix, SparseEchelon, SparseVec};
use ncline::poly::NcPolynomial;
use ncline::presentation::{parse_presentation, AlgebraPresentation};
use ncline::qgr::{chi_check, distinguish_schemes, gamma_recovery, kronecker_endo, SchemeVerdict, TruncatedGradedModule};
use ncline::quadratic::{koszul_dual, random_quadratic_presentation, tensor_rank, zhang_regular_check, zhang_twist, GradedAutomorphism, QuadraticTensor};
use ncline::scalar::{Field, Scalar};
use ncline::word::{MonomialOrder, Word};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

/// Accumulates time spent inside library calls.
#[derive(Default)]
struct Clock(Duration);

impl Clock {
    fn run<T>(&mut self, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.0 += t.elapsed();
        out
    }
}

fn fixture(name: &str) -> AlgebraPresentation {
    let path = format!("{}/fixtures/{name}.alg", env!("CARGO_MANIFEST_DIR"));
    parse_presentation(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn lib<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// `a_d = n a_{d-1} - a_{d-2}`: the Hilbert series `1 / (1 - n z + z^2)`.
fn one_relator_series(n: i128, len: usize) -> Vec<i128> {
    let mut a = vec![1, n];
    while a.len() < len {
        let k = a.len();
        a.push(n * a[k - 1] - a[k - 2]);
    }
    a.truncate(len);
    a
}

fn sum_of_squares(field: Field, n: usize) -> AlgebraPresentation {
    let b = NcPolynomial::from_terms(field, (0..n).map(|i| (Word::from_letters(&[i, i]), field.one())));
    AlgebraPresentation::standard(field, n, vec![b]).unwrap()
}

fn c1(clock: &mut Clock) -> Check {
    let pres = fixture("cyclic3");
    let b = &pres.relations()[0];
    let oracle = one_relator_series(3, 11);
    let orders = MonomialOrder::all_orders(&[1, 1, 1]);
    ensure!(orders.len() == 6, "expected 6 precedences, got {}", orders.len());
    for order in &orders {
        let gb = clock.run(|| two_sided_gb(&pres, order, 10)).map_err(|e| e.to_string())?;
        ensure!(gb.is_complete(), "incomplete under {:?}", order.precedence());
        let els = gb.elements();
        ensure!(els.len() == 1, "{} elements under {:?}", els.len(), order.precedence());
        let (w, c) = b.terms().next().unwrap();
        let ratio = &els[0].coeff(w) * &c.inv();
        ensure!(els[0].sub(&b.scale(&ratio)).is_zero(), "basis element is not a multiple of b");
        let counts: Vec<i128> = lib(gb.normal_word_counts(10))?.into_iter().map(|x| x as i128).collect();
        ensure!(counts == oracle, "counts {counts:?} under {:?}", order.precedence());
    }
    Ok(format!("6 precedences, counts {:?}", oracle))
}

fn c2(clock: &mut Clock) -> Check {
    let pres = fixture("noncoherent");
    let (y, z, x) = (1usize, 2usize, 0usize);
    ensure!(pres.names() == ["x", "y", "z"], "unexpected generator names {:?}", pres.names());
    let order = lib(MonomialOrder::new(vec![y, z, x], &pres.weights()))?;
    let gb = clock.run(|| two_sided_gb(&pres, &order, 6)).map_err(|e| e.to_string())?;
    ensure!(!gb.is_complete(), "reported complete");
    let by_deg = gb.elements_by_degree();
    for d in 3..=6 {
        ensure!(by_deg.get(&d).copied().unwrap_or(0) >= 1, "no new element in degree {d}");
    }
    // by hand: yz -> zy and zx -> 0; the overlap y.z.x gives zyx, and y.(z y^k x) gives z y^{k+1} x
    let els = gb.elements();
    for k in 1..=4 {
        let mut l = vec![z];
        l.extend(std::iter::repeat_n(y, k));
        l.push(x);
        let m = NcPolynomial::monomial(pres.field().one(), Word::from_letters(&l));
        ensure!(els.contains(&m), "missing z y^{k} x");
    }
    Ok(format!("new elements by degree {:?}, complete = false", by_deg))
}

fn c3(clock: &mut Clock) -> Check {
    let mut times = Vec::new();
    for n in 3..=6usize {
        let f = Field::Rational;
        let pres = sum_of_squares(f, n);
        let x: Vec<NcPolynomial> = (2..n).map(|i| NcPolynomial::generator(f, i)).collect();
        let start = clock.0;
        let sf = clock.run(|| strongly_free_check(&pres, &x, 10)).map_err(|e| e.to_string())?;
        ensure!(sf.verdict == StronglyFree::Certified { degree: 10 }, "n = {n}: {:?}", sf.verdict);
        let fb = clock.run(|| ideal_free_basis_check(&pres, &x, 10)).map_err(|e| e.to_string())?;
        ensure!(matches!(fb.verdict, FreeBasisVerdict::Holds { degree: 10, .. }), "n = {n}: {:?}", fb.verdict);
        let dt = clock.0 - start;
        ensure!(dt < Duration::from_secs(5), "n = {n} took {dt:?}");
        times.push(format!("n={n} {:.2}s", dt.as_secs_f64()));
        // H_A = 1/(1 - n z + z^2); B = k<x1, x2 | x1^2 + x2^2> has H_B = 1/(1-z)^2
        let a = one_relator_series(n as i128, 11);
        let hb: Vec<i128> = (0..11).map(|d| d + 1).collect();
        let dims: Vec<i128> = (0..11).map(|d| a[d] - hb[d]).collect();
        let product: Vec<i128> = (0..11)
            .map(|d| (1..=d).map(|i| hb[i - 1] * (n as i128 - 2) * a[d - i]).sum())
            .collect();
        ensure!(dims == product, "n = {n}: oracle identity fails, {dims:?} vs {product:?}");
        ensure!(fb.ideal_dims[..11] == dims[..], "n = {n}: ideal dims {:?}", fb.ideal_dims);
        ensure!(fb.expected_dims[..11] == product[..], "n = {n}: expected dims {:?}", fb.expected_dims);
    }
    Ok(times.join(", "))
}

fn c4(clock: &mut Clock) -> Check {
    let mut counts: HashMap<String, usize> = HashMap::new();
    let mut rechecked = 0;
    for field in [Field::Rational, Field::Prime(5), Field::Prime(101)] {
        for n in 3..=5 {
            for seed in 0..50u64 {
                let pres = lib(random_quadratic_presentation(field, n, seed))?;
                let cert = clock
                    .run(|| rnci_extract(&pres, 10))
                    .map_err(|e| format!("{field} n = {n} seed {seed}: {e}"))?;
                *counts.entry(format!("{:?}", cert.kind)).or_default() += 1;
                if cert.kind == CertificateKind::Rnci {
                    let check = clock
                        .run(|| verify_certificate(&pres, &cert, 5))
                        .map_err(|e| format!("{field} n = {n} seed {seed}: {e}"))?;
                    ensure!(check.valid, "{field} n = {n} seed {seed}: certificate failed re-check: {check:?}");
                    ensure!(check.tor_identity.is_some(), "{field} n = {n} seed {seed}: no Tor identity");
                    rechecked += 1;
                }
            }
        }
    }
    let mut kinds: Vec<String> = counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
    kinds.sort();
    Ok(format!("450 presentations, {}, {rechecked} re-validated", kinds.join(" ")))
}

/// `dim (I_t)_d` by ranking the normal forms of `x_1^k x_3 w`, `k <= t`, `w` any normal word.
fn chain_oracle(gb: &GroebnerBasis, t: usize, d: u32) -> usize {
    let f = gb.field();
    let basis = gb.normal_words(d).unwrap();
    let index: HashMap<Word, u32> = basis.iter().cloned().enumerate().map(|(i, w)| (w, i as u32)).collect();
    let mut ech = SparseEchelon::new(f);
    for k in 1..=t {
        if k as u32 + 1 > d {
            continue;
        }
        let mut l = vec![0usize; k];
        l.push(2);
        let g = Word::from_letters(&l);
        for w in gb.normal_words(d - k as u32 - 1).unwrap() {
            let p = gb.normal_form(&NcPolynomial::monomial(f.one(), g.concat(&w))).unwrap();
            let mut v: SparseVec = p.terms().map(|(u, c)| (index[u], c.clone())).collect();
            v.sort_by_key(|e| e.0);
            ech.insert(v);
        }
    }
    ech.rank()
}

fn c5(clock: &mut Clock) -> Check {
    let cw = clock.run(|| chain_witness(3, 4, 12)).map_err(|e| e.to_string())?;
    for t in 1..=4usize {
        for d in t + 2..=12 {
            ensure!(cw.quotients[t - 1][d] >= 1, "dim (I_{t}/I_{})_{d} = 0", t - 1);
        }
    }
    ensure!(cw.witnesses_verified && cw.strictly_ascending, "witness flags {:?}", (cw.witnesses_verified, cw.strictly_ascending));
    let pres = cyclic_presentation(Field::Rational, 3).unwrap();
    let gb = two_sided_gb(&pres, &pres.default_order(), 8).unwrap();
    for t in 1..=4usize {
        for d in 0..=8u32 {
            let q = chain_oracle(&gb, t, d) - chain_oracle(&gb, t - 1, d);
            ensure!(cw.quotients[t - 1][d as usize] == q as u128, "t = {t}, d = {d}: {} vs oracle {q}", cw.quotients[t - 1][d as usize]);
        }
    }
    Ok(format!("quotient dims for t = 1: {:?}; oracle agrees through degree 8", cw.quotients[0]))
}

fn c6(clock: &mut Clock) -> Check {
    let binomial_plane: Vec<usize> = (0..=6).map(|d| d + 1).collect();
    let cyclic: Vec<usize> = one_relator_series(3, 7).into_iter().map(|x| x as usize).collect();
    // 1/((1-z)(1-z^2))
    let weighted: Vec<usize> = (0..=6).map(|d| d / 2 + 1).collect();
    let cases = [
        ("commutative_plane", binomial_plane.clone()),
        ("quantum_plane", binomial_plane),
        ("cyclic3", cyclic),
        ("weighted", weighted),
    ];
    let mut notes = Vec::new();
    for (name, oracle) in cases {
        let pres = fixture(name);
        let g = clock.run(|| gamma_recovery(&pres, 6)).map_err(|e| format!("{name}: {e}"))?;
        let got: Vec<Option<usize>> = g.entries.iter().map(|e| e.value).collect();
        let want: Vec<Option<usize>> = oracle.iter().map(|&v| Some(v)).collect();
        ensure!(got == want, "{name}: sections {got:?}, expected {want:?}");
        ensure!(g.holds && g.entries.iter().all(|e| e.stabilized), "{name}: not stabilized");
        notes.push(format!("{name} ok"));
    }
    Ok(notes.join(", "))
}

fn c7(clock: &mut Clock) -> Check {
    for n in 2..=4 {
        let pres = cyclic_presentation(Field::Rational, n).unwrap();
        let k = clock.run(|| kronecker_endo(&pres)).map_err(|e| format!("n = {n}: {e}"))?;
        ensure!(k.dims == [Some(1), Some(n), Some(0), Some(1)], "n = {n}: {:?}", k.dims);
        ensure!(k.holds && k.arrows_independent, "n = {n}: {k:?}");
    }
    Ok("(1, n, 0, 1) for n = 2, 3, 4".into())
}

/// Coefficient rows over the words `x_i x_j`, dual generators identified by index.
fn quadric_rows(rels: &[NcPolynomial], n: usize) -> Vec<Vec<Scalar>> {
    rels.iter()
        .map(|r| (0..n * n).map(|k| r.coeff(&Word::from_letters(&[k / n, k % n]))).collect())
        .collect()
}

fn c8(clock: &mut Clock) -> Check {
    for n in 3..=6usize {
        let f = Field::Rational;
        let pres = sum_of_squares(f, n);
        let dual = clock.run(|| koszul_dual(&pres)).map_err(|e| e.to_string())?;
        let hd = clock.run(|| hilbert_series(&dual, 10));
        let mut expect = [0i128; 11];
        expect[0] = 1;
        expect[1] = n as i128;
        expect[2] = 1;
        ensure!(hd.coeffs() == &expect[..], "n = {n}: dual series {:?}", hd.coeffs());
        ensure!(hd.coeffs().iter().sum::<i128>() == n as i128 + 2, "n = {n}: total dimension");
        // x_i x_j (i != j) and x_i^2 - x_1^2
        let mut target = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    target.push(NcPolynomial::monomial(f.one(), Word::from_letters(&[i, j])));
                }
            }
            if i > 0 {
                target.push(NcPolynomial::from_terms(f, [(Word::from_letters(&[i, i]), f.one()), (Word::from_letters(&[0, 0]), f.from_i64(-1))]));
            }
        }
        let a = quadric_rows(dual.relations(), n);
        let b = quadric_rows(&target, n);
        let both: Vec<Vec<Scalar>> = a.iter().chain(&b).cloned().collect();
        let (ra, rb, rab) = (
            DegreeMatrix::from_rows(f, a).rank(),
            DegreeMatrix::from_rows(f, b).rank(),
            DegreeMatrix::from_rows(f, both).rank(),
        );
        ensure!(ra == n * n - 1 && rb == ra && rab == ra, "n = {n}: relation spans differ (ranks {ra}, {rb}, {rab})");
        let ha = one_relator_series(n as i128, 11);
        for d in 0..=10usize {
            let c: i128 = (0..=d).map(|i| ha[i] * expect[d - i] * if (d - i) % 2 == 0 { 1 } else { -1 }).sum();
            ensure!(c == i128::from(d == 0), "n = {n}: H_A(z) H_dual(-z) has coefficient {c} at z^{d}");
        }
        let ha_lib = clock.run(|| hilbert_series(&pres, 10));
        ensure!(ha_lib.coeffs() == &ha[..], "n = {n}: H_A {:?}", ha_lib.coeffs());
    }
    Ok("n = 3..6: relation spans equal, H_dual = 1 + nz + z^2, identity through degree 10".into())
}

fn c9(clock: &mut Clock) -> Check {
    let (p3, p4) = (fixture("p1_3"), fixture("p1_4"));
    let cmp = clock.run(|| distinguish_schemes(&p3, &p4, 10)).map_err(|e| e.to_string())?;
    // H_{P3}(z) (1 - 4z + z^2) = 1 + (3 - 4) z + ..., so the obstruction sits in degree 1
    let h3 = one_relator_series(3, 2);
    let first = h3[1] - 4 * h3[0];
    ensure!(first != 0, "oracle: no obstruction in degree 1");
    ensure!(cmp.verdict == SchemeVerdict::NonIsomorphic { obstruction_degree: 1 }, "P1_3 vs P1_4: {:?}", cmp.verdict);

    let (plane, quantum) = (fixture("commutative_plane"), fixture("quantum_plane"));
    let cmp = clock.run(|| distinguish_schemes(&plane, &quantum, 10)).map_err(|e| e.to_string())?;
    ensure!(cmp.verdict == SchemeVerdict::Indistinguishable, "planes: {:?}", cmp.verdict);
    let w = cmp.twist.ok_or("no twist witness")?;
    ensure!(w.hilbert_preserved, "twist witness does not preserve the series");
    // re-apply the witness independently
    let images = w.sigma.iter().map(|s| plane.parse_poly(s)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let twisted = lib(zhang_twist(&plane, &GradedAutomorphism { images }))?;
    let gbq = lib(two_sided_gb(&quantum, &quantum.default_order(), 2))?;
    ensure!(lib(gbq.normal_form(&twisted.relations()[0]))?.is_zero(), "twisted relation {} is not a multiple of xy - 2yx", twisted.poly_to_string(&twisted.relations()[0]));
    let (ht, hq) = (hilbert_series(&twisted, 10), hilbert_series(&quantum, 10));
    let plane_oracle: Vec<i128> = (0..=10).map(|d| d + 1).collect();
    ensure!(ht.coeffs() == &plane_oracle[..] && hq.coeffs() == &plane_oracle[..], "series differ");
    Ok(format!("P1_3 vs P1_4 obstructed in degree 1; twist sigma = {:?}", w.sigma))
}

fn c10(clock: &mut Clock) -> Check {
    let weighted = fixture("weighted");
    let rep = clock.run(|| zhang_regular_check(&weighted));
    ensure!(rep.is_regular && rep.gorenstein_shift == 3, "weighted: {rep:?}");
    let sigma = rep.sigma.clone().ok_or("no sigma")?;
    ensure!(sigma.is_invertible(&weighted.weights()), "sigma not invertible");
    let gbw = lib(two_sided_gb(&weighted, &weighted.default_order(), 3))?;
    ensure!(lib(gbw.normal_form(&sigma.apply(&weighted.relations()[0])))?.is_zero(), "sigma does not preserve the relation");
    let rank_one = fixture("rank_one");
    let rep1 = clock.run(|| zhang_regular_check(&rank_one));
    ensure!(!rep1.is_regular && rep1.rank == 1, "xy: {rep1:?}");

    let regular = ["commutative_plane", "quantum_plane", "cyclic3", "p1_3_deformed", "p1_4", "sum_of_squares4", "weighted"];
    for name in regular {
        let pres = fixture(name);
        let weights = pres.weights();
        let s = pres.relation_degrees()[0] as i32;
        let module = TruncatedGradedModule::residue_field(&pres, (0, s + 3));
        let chi = clock.run(|| chi_check(&pres, &module, 3)).map_err(|e| format!("{name}: {e}"))?;
        let mut expect: HashMap<i32, [usize; 3]> = HashMap::new();
        expect.entry(0).or_default()[0] += 1;
        for &w in &weights {
            expect.entry(w as i32).or_default()[1] += 1;
        }
        expect.entry(s).or_default()[2] += 1;
        let got: HashMap<i32, [usize; 3]> = chi.rows.iter().map(|r| (r.internal_degree, r.ext)).collect();
        ensure!(got == expect, "{name}: Ext rows {got:?}, expected {expect:?}");
        ensure!(chi.totals == [1, pres.n(), 1] && chi.finite == [true; 3], "{name}: totals {:?}", chi.totals);
    }
    Ok(format!("sigma = {:?}; chi(k) = (1, n, 1) on {} fixtures", rep.summary(&weighted).sigma, regular.len()))
}

/// Minimal number of rank-one summands for every `n x n` matrix over F_3, by breadth-first
/// search from zero; matrices are encoded in base 3, row-major.
fn f3_rank_table(n: usize) -> Vec<u8> {
    let size = 3usize.pow((n * n) as u32);
    let vectors: Vec<Vec<usize>> = (1..3usize.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = k % 3;
                    k /= 3;
                    d
                })
                .collect()
        })
        .collect();
    let mut rank_one: Vec<Vec<usize>> = Vec::new();
    for u in &vectors {
        for v in &vectors {
            let m: Vec<usize> = (0..n * n).map(|k| u[k / n] * v[k % n] % 3).collect();
            if !rank_one.contains(&m) {
                rank_one.push(m);
            }
        }
    }
    let decode = |mut c: usize| -> Vec<usize> {
        (0..n * n)
            .map(|_| {
                let d = c % 3;
                c /= 3;
                d
            })
            .collect()
    };
    let encode = |m: &[usize]| m.iter().rev().fold(0usize, |acc, &d| acc * 3 + d);
    let mut dist = vec![u8::MAX; size];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        let m = decode(c);
        for r in &rank_one {
            let sum: Vec<usize> = m.iter().zip(r).map(|(a, b)| (a + b) % 3).collect();
            let e = encode(&sum);
            if dist[e] == u8::MAX {
                dist[e] = dist[c] + 1;
                queue.push_back(e);
            }
        }
    }
    dist
}

fn c11(clock: &mut Clock) -> Check {
    let f = Field::Prime(3);
    let mut total = 0;
    for n in 1..=3usize {
        let table = f3_rank_table(n);
        for (code, &r) in table.iter().enumerate() {
            let mut c = code;
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let d = c % 3;
                            c /= 3;
                            d as i64
                        })
                        .collect()
                })
                .collect();
            let t = QuadraticTensor::new(DegreeMatrix::from_i64(f, &rows));
            let got = clock.run(|| tensor_rank(&t));
            ensure!(got == r as usize, "n = {n}, matrix {rows:?}: rank {got}, search says {r}");
        }
        total += table.len();
    }
    Ok(format!("{total} tensors over F3 (n = 1, 2, 3)"))
}

type Criterion = (u32, &'static str, u64, fn(&mut Clock) -> Check);

const CRITERIA: [Criterion; 11] = [
    (1, "Groebner finiteness", 1, c1),
    (2, "infinite basis detection", 1, c2),
    (3, "strongly free certification", 20, c3),
    (4, "coherence pipeline robustness", 60, c4),
    (5, "non-Noetherian witness", 5, c5),
    (6, "sections recover the algebra", 30, c6),
    (7, "Kronecker dimensions", 30, c7),
    (8, "Koszul dual of a sum of squares", 1, c8),
    (9, "scheme distinguishing", 1, c9),
    (10, "regularity and Ext of k", 5, c10),
    (11, "tensor rank against exhaustive search", 60, c11),
];

fn main() -> ExitCode {
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (num, title, limit, f) in CRITERIA {
        if only.is_some_and(|o| o != num) {
            continue;
        }
        let mut clock = Clock::default();
        let wall = Instant::now();
        let outcome = f(&mut clock);
        let secs = clock.0.as_secs_f64();
        let (status, detail) = match outcome {
            Ok(_) if clock.0 > Duration::from_secs(limit) => ("FAIL", format!("over the {limit} s budget")),
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {num:>2} {status} {secs:>8.3} s (limit {limit} s, wall {:.3} s)  {title}: {detail}",
            wall.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
