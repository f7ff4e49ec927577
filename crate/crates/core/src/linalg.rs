//! Exact linear algebra over the ground field: dense reduced row echelon forms for small
//! matrices and an incremental sparse echelon for degree slices.

use std::collections::{BTreeMap, HashMap};

use crate::scalar::{Field, Scalar};

/// Dense matrix over the ground field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

/// Result of a row reduction.
#[derive(Clone, Debug)]
pub struct RrefReport {
    pub rref: DegreeMatrix,
    pub pivots: Vec<usize>,
}

impl RrefReport {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let m = &self.rref;
        let field = m.field;
        let free: Vec<usize> = (0..m.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![field.zero(); m.cols];
                v[f] = field.one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    v[p] = -&m.data[r][f];
                }
                v
            })
            .collect()
    }
}

impl DegreeMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        DegreeMatrix {
            field,
            rows,
            cols,
            data: vec![vec![field.zero(); cols]; rows],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i][i] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        DegreeMatrix {
            field,
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r][c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r]
    }

    pub fn transpose(&self) -> DegreeMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c][r] = self.data[r][c].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &DegreeMatrix) -> DegreeMatrix {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    if !o.data[k][j].is_zero() {
                        m.data[i][j] = &m.data[i][j] + &(&self.data[i][k] * &o.data[k][j]);
                    }
                }
            }
        }
        m
    }

    /// Reduced row echelon form with the leftmost nonzero entry of the first available row as
    /// pivot.
    pub fn rref(&self) -> RrefReport {
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].inv();
            for x in a[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in c..self.cols {
                        if !a[r][j].is_zero() {
                            a[i][j] = &a[i][j] - &(&f * &a[r][j]);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        RrefReport {
            rref: DegreeMatrix {
                field: self.field,
                rows: self.rows,
                cols: self.cols,
                data: a,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        self.rref().kernel()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<DegreeMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][n + i] = self.field.one();
        }
        let red = aug.rref();
        if red.pivots.len() < n || red.pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i][j] = red.rref.data[i][n + j].clone();
            }
        }
        Some(inv)
    }

    /// Nonzero rows of the reduced echelon form: a canonical basis of the row space.
    pub fn row_space(&self) -> Vec<Vec<Scalar>> {
        let red = self.rref();
        red.rref.data.into_iter().take(red.pivots.len()).collect()
    }
}

/// Sparse vector: strictly increasing column indices with nonzero entries.
pub type SparseVec = Vec<(u32, Scalar)>;

/// `a + c * b`.
pub fn axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = c * &b[j].1;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_sparse(v: &SparseVec, c: &Scalar) -> SparseVec {
    v.iter().map(|(i, x)| (*i, x * c)).filter(|(_, x)| !x.is_zero()).collect()
}

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn sparse_from_entries(field: Field, entries: impl IntoIterator<Item = (u32, Scalar)>) -> SparseVec {
    let mut m: BTreeMap<u32, Scalar> = BTreeMap::new();
    for (i, c) in entries {
        let e = m.entry(i).or_insert_with(|| field.zero());
        *e = &*e + &c;
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

#[derive(Clone, Debug)]
struct EchelonRow {
    row: SparseVec,
    history: SparseVec,
}

/// Incremental semi-echelon form. Each stored row is monic at its leading (smallest) column.
/// With history tracking, vectors that reduce to zero yield linear dependencies among the
/// inserted vectors.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    field: Field,
    pivots: HashMap<u32, EchelonRow>,
    track: bool,
}

impl SparseEchelon {
    pub fn new(field: Field) -> Self {
        SparseEchelon {
            field,
            pivots: HashMap::new(),
            track: false,
        }
    }

    pub fn with_history(field: Field) -> Self {
        SparseEchelon {
            field,
            pivots: HashMap::new(),
            track: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.pivots.keys().copied().collect();
        v.sort_unstable();
        v
    }

    /// Inserts `v`; returns `true` when it was independent of the rows already present.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        self.insert_tracked(v, 0).is_none()
    }

    /// Inserts `v` labelled `id`. Returns the dependency (combination of labels summing to
    /// zero) when `v` lies in the span of earlier rows and history is tracked.
    pub fn insert_tracked(&mut self, v: SparseVec, id: u32) -> Option<SparseVec> {
        let mut row = v;
        let mut hist: SparseVec = if self.track {
            vec![(id, self.field.one())]
        } else {
            Vec::new()
        };
        loop {
            let Some((lead, c)) = row.first().cloned() else {
                return Some(hist);
            };
            match self.pivots.get(&lead) {
                Some(p) => {
                    let neg = -&c;
                    row = axpy(&row, &neg, &p.row);
                    if self.track {
                        hist = axpy(&hist, &neg, &p.history);
                    }
                }
                None => {
                    let inv = c.inv();
                    let row = scale_sparse(&row, &inv);
                    let history = if self.track { scale_sparse(&hist, &inv) } else { hist };
                    self.pivots.insert(lead, EchelonRow { row, history });
                    return None;
                }
            }
        }
    }

    /// Reduces every pivot column of `v` away; the result is a canonical representative of
    /// `v` modulo the row space.
    pub fn reduce_full(&self, v: &SparseVec) -> SparseVec {
        let mut work: BTreeMap<u32, Scalar> = v.iter().cloned().collect();
        let mut cur = 0u32;
        loop {
            let next = work.range(cur..).next().map(|(k, c)| (*k, c.clone()));
            let Some((col, c)) = next else { break };
            if let Some(p) = self.pivots.get(&col) {
                for (j, x) in &p.row {
                    let e = work.entry(*j).or_insert_with(|| self.field.zero());
                    *e = &*e - &(&c * x);
                    if e.is_zero() {
                        work.remove(j);
                    }
                }
            } else {
                cur = col + 1;
            }
        }
        work.into_iter().collect()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_full(v).is_empty()
    }
}

/// Semi-echelon form over `F_p` with machine-word entries, for large sparse rank
/// computations. Rows are stored monic at their leading column.
#[derive(Clone, Debug)]
pub struct FpEchelon {
    p: u64,
    pivots: HashMap<u32, Vec<(u32, u32)>>,
}

impl FpEchelon {
    pub fn new(p: u32) -> Self {
        FpEchelon {
            p: p as u64,
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn inv(&self, a: u64) -> u64 {
        let (mut r, mut b, mut e) = (1u64, a % self.p, self.p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }

    /// Inserts a row given as `(column, value)` pairs sorted by column with nonzero values.
    pub fn insert(&mut self, mut row: Vec<(u32, u32)>) -> bool {
        let p = self.p;
        while let Some(&(lead, c)) = row.first() {
            let Some(piv) = self.pivots.get(&lead) else {
                let inv = self.inv(c as u64);
                for e in row.iter_mut() {
                    e.1 = (e.1 as u64 * inv % p) as u32;
                }
                self.pivots.insert(lead, row);
                return true;
            };
            // row -= c * piv
            let neg = p - c as u64;
            let mut out = Vec::with_capacity(row.len() + piv.len());
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < piv.len() {
                if j == piv.len() || (i < row.len() && row[i].0 < piv[j].0) {
                    out.push(row[i]);
                    i += 1;
                } else if i == row.len() || piv[j].0 < row[i].0 {
                    out.push((piv[j].0, (neg * piv[j].1 as u64 % p) as u32));
                    j += 1;
                } else {
                    let v = (row[i].1 as u64 + neg * piv[j].1 as u64) % p;
                    if v != 0 {
                        out.push((row[i].0, v as u32));
                    }
                    i += 1;
                    j += 1;
                }
            }
            row = out;
        }
        false
    }
}

/// Reduces an exact sparse vector modulo `p`; `None` when a denominator vanishes.
pub fn sparse_mod_p(v: &SparseVec, p: u32) -> Option<Vec<(u32, u32)>> {
    let f = Field::Prime(p);
    let mut out = Vec::with_capacity(v.len());
    for (i, c) in v {
        let r = match c {
            Scalar::Fp { v, p: q } if *q == p => Scalar::Fp { v: *v, p },
            other => f.from_rational(&other.to_rational()).ok()?,
        };
        if let Scalar::Fp { v, .. } = r {
            if v != 0 {
                out.push((*i, v));
            }
        }
    }
    Some(out)
}
