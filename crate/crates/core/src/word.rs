//! Words of the free algebra and deg-lex orders on them.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};

/// A monomial of the free algebra: a sequence of generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Word(pub Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i as u16])
    }

    pub fn from_letters(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&i| i as u16).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    /// Weighted degree.
    pub fn degree(&self, weights: &[u32]) -> u32 {
        self.0.iter().map(|&l| weights[l as usize]).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// First position at which `other` occurs as a factor.
    pub fn find(&self, other: &Word) -> Option<usize> {
        if other.len() > self.len() {
            return None;
        }
        (0..=self.len() - other.len()).find(|&i| self.0[i..i + other.len()] == other.0[..])
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }
}

/// Deg-lex order: weighted degree first, then lexicographic by a generator precedence
/// (earlier in `precedence` means larger).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialOrder {
    precedence: Vec<u16>,
    #[serde(skip)]
    rank: Vec<u16>,
    #[serde(skip)]
    weights: Vec<u32>,
}

impl MonomialOrder {
    pub fn new(precedence: Vec<usize>, weights: &[u32]) -> Result<Self> {
        let n = weights.len();
        let mut rank = vec![u16::MAX; n];
        if precedence.len() != n {
            return Err(Error::Parameter(format!(
                "precedence has {} entries for {} generators",
                precedence.len(),
                n
            )));
        }
        for (r, &g) in precedence.iter().enumerate() {
            if g >= n || rank[g] != u16::MAX {
                return Err(Error::Parameter("precedence is not a permutation".into()));
            }
            rank[g] = r as u16;
        }
        Ok(MonomialOrder {
            precedence: precedence.iter().map(|&g| g as u16).collect(),
            rank,
            weights: weights.to_vec(),
        })
    }

    /// Heavier generators first, then by index. For degree-one generated algebras this is
    /// `x_1 > x_2 > ... > x_n`.
    pub fn default_for(weights: &[u32]) -> Self {
        let mut prec: Vec<usize> = (0..weights.len()).collect();
        prec.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
        MonomialOrder::new(prec, weights).expect("valid permutation")
    }

    pub fn precedence(&self) -> Vec<usize> {
        self.precedence.iter().map(|&g| g as usize).collect()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn rank_of(&self, gen: usize) -> usize {
        self.rank[gen] as usize
    }

    pub fn cmp(&self, a: &Word, b: &Word) -> Ordering {
        let da = a.degree(&self.weights);
        let db = b.degree(&self.weights);
        da.cmp(&db).then_with(|| {
            for (x, y) in a.0.iter().zip(&b.0) {
                if x != y {
                    // lower rank is the larger letter
                    return self.rank[*y as usize].cmp(&self.rank[*x as usize]);
                }
            }
            a.len().cmp(&b.len())
        })
    }

    /// Relabels letters by rank, so that among words of equal degree the natural
    /// `Vec` order is the reverse of this order.
    pub fn to_ranked(&self, w: &Word) -> Word {
        Word(w.0.iter().map(|&l| self.rank[l as usize]).collect())
    }

    pub fn from_ranked(&self, w: &Word) -> Word {
        Word(w.0.iter().map(|&r| self.precedence[r as usize]).collect())
    }

    /// Generator weights indexed by rank.
    pub fn ranked_weights(&self) -> Vec<u32> {
        self.precedence
            .iter()
            .map(|&g| self.weights[g as usize])
            .collect()
    }

    /// All permutations of `0..n` as orders (used to exercise order independence).
    pub fn all_orders(weights: &[u32]) -> Vec<MonomialOrder> {
        let n = weights.len();
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            out.push(MonomialOrder::new(p.to_vec(), weights).expect("permutation"))
        });
        out
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}
