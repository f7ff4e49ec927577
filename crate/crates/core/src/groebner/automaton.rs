//! Aho–Corasick automaton over a set of obstruction words. States reachable without passing
//! through a terminal state correspond to normal words; counting paths by weight gives
//! Hilbert coefficients without listing words.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
pub struct Automaton {
    n: usize,
    weights: Vec<u32>,
    goto: Vec<Vec<u32>>,
    /// Length of the shortest pattern ending at this state, if any.
    hit: Vec<Option<u32>>,
    /// Index of that pattern.
    hit_pattern: Vec<u32>,
}

impl Automaton {
    /// `weights` are indexed by letter.
    pub fn new(n: usize, weights: &[u32], patterns: &[&[u16]]) -> Self {
        let mut goto: Vec<Vec<u32>> = vec![vec![u32::MAX; n]];
        let mut hit: Vec<Option<u32>> = vec![None];
        let mut hit_pattern: Vec<u32> = vec![u32::MAX];
        for (pi, p) in patterns.iter().enumerate() {
            let mut s = 0usize;
            for &a in p.iter() {
                let nx = goto[s][a as usize];
                s = if nx == u32::MAX {
                    goto.push(vec![u32::MAX; n]);
                    hit.push(None);
                    hit_pattern.push(u32::MAX);
                    let id = goto.len() - 1;
                    goto[s][a as usize] = id as u32;
                    id
                } else {
                    nx as usize
                };
            }
            if hit[s].is_none_or(|l| l > p.len() as u32) {
                hit[s] = Some(p.len() as u32);
                hit_pattern[s] = pi as u32;
            }
        }
        let mut fail = vec![0u32; goto.len()];
        let mut queue = VecDeque::new();
        for a in 0..n {
            let t = goto[0][a];
            if t == u32::MAX {
                goto[0][a] = 0;
            } else {
                fail[t as usize] = 0;
                queue.push_back(t as usize);
            }
        }
        while let Some(s) = queue.pop_front() {
            let f = fail[s] as usize;
            if let Some(lf) = hit[f] {
                if hit[s].is_none_or(|ls| lf < ls) {
                    hit[s] = Some(lf);
                    hit_pattern[s] = hit_pattern[f];
                }
            }
            for a in 0..n {
                let t = goto[s][a];
                if t == u32::MAX {
                    goto[s][a] = goto[f][a];
                } else {
                    fail[t as usize] = goto[f][a];
                    queue.push_back(t as usize);
                }
            }
        }
        Automaton {
            n,
            weights: weights.to_vec(),
            goto,
            hit,
            hit_pattern,
        }
    }

    pub fn states(&self) -> usize {
        self.goto.len()
    }

    pub fn step(&self, s: usize, a: u16) -> usize {
        self.goto[s][a as usize] as usize
    }

    pub fn is_dead(&self, s: usize) -> bool {
        self.hit[s].is_some()
    }

    /// State after reading `w` from the root, or `None` if `w` contains a pattern.
    pub fn run(&self, w: &[u16]) -> Option<usize> {
        let mut s = 0;
        for &a in w {
            s = self.step(s, a);
            if self.is_dead(s) {
                return None;
            }
        }
        Some(s)
    }

    /// First occurrence of a pattern in `w`: `(start, pattern index)`.
    pub fn find(&self, w: &[u16]) -> Option<(usize, usize)> {
        let mut s = 0;
        for (i, &a) in w.iter().enumerate() {
            s = self.step(s, a);
            if let Some(l) = self.hit[s] {
                return Some((i + 1 - l as usize, self.hit_pattern[s] as usize));
            }
        }
        None
    }

    /// `table[s][e]` = number of words of weight `e` that can be appended in state `s`
    /// without completing a pattern.
    pub fn continuation_counts(&self, max_weight: u32) -> Vec<Vec<u128>> {
        let m = max_weight as usize;
        let ns = self.states();
        let mut table = vec![vec![0u128; m + 1]; ns];
        for (s, row) in table.iter_mut().enumerate() {
            if !self.is_dead(s) {
                row[0] = 1;
            }
        }
        for e in 1..=m {
            for s in 0..ns {
                if self.is_dead(s) {
                    continue;
                }
                let mut total = 0u128;
                for a in 0..self.n {
                    let w = self.weights[a] as usize;
                    if w > e {
                        continue;
                    }
                    let t = self.goto[s][a] as usize;
                    if !self.is_dead(t) {
                        total += table[t][e - w];
                    }
                }
                table[s][e] = total;
            }
        }
        table
    }

    /// Number of pattern-avoiding words of each weight `0..=max_weight`.
    pub fn count_by_weight(&self, max_weight: u32) -> Vec<u128> {
        let m = max_weight as usize;
        let ns = self.states();
        let mut cur: Vec<Vec<u128>> = vec![vec![0; ns]; m + 1];
        cur[0][0] = 1;
        for e in 0..m {
            for s in 0..ns {
                let c = cur[e][s];
                if c == 0 {
                    continue;
                }
                for a in 0..self.n {
                    let e2 = e + self.weights[a] as usize;
                    if e2 > m {
                        continue;
                    }
                    let t = self.goto[s][a] as usize;
                    if !self.is_dead(t) {
                        cur[e2][t] += c;
                    }
                }
            }
        }
        cur.iter().map(|row| row.iter().sum()).collect()
    }

    /// All pattern-avoiding words of weight exactly `d`, in increasing letter-lex order,
    /// starting from state `start` (words are the appended suffixes).
    pub fn enumerate(&self, start: usize, d: u32, out: &mut Vec<Vec<u16>>) {
        let mut buf = Vec::new();
        self.dfs(start, d, &mut buf, out);
    }

    fn dfs(&self, s: usize, left: u32, buf: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if left == 0 {
            out.push(buf.clone());
            return;
        }
        for a in 0..self.n {
            let w = self.weights[a];
            if w > left {
                continue;
            }
            let t = self.goto[s][a] as usize;
            if self.is_dead(t) {
                continue;
            }
            buf.push(a as u16);
            self.dfs(t, left - w, buf, out);
            buf.pop();
        }
    }
}
