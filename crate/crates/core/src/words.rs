//! Words over a carrier `0..n` and the budgeted word scanner shared by every
//! checker: exhaustive up to `max_len` when `n^max_len ≤ budget`, otherwise
//! every word of length at most 2 plus `budget` seeded samples of longer
//! words. Work is sharded with rayon; shards are merged in a fixed order so
//! results do not depend on thread scheduling.

use std::ops::Deref;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::Elem;

/// A finite sequence of element ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Word(pub Vec<Elem>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn concat(&self, other: &[Elem]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }
}

impl Deref for Word {
    type Target = [Elem];
    fn deref(&self) -> &[Elem] {
        &self.0
    }
}

impl From<Vec<Elem>> for Word {
    fn from(v: Vec<Elem>) -> Self {
        Word(v)
    }
}

impl From<&[Elem]> for Word {
    fn from(v: &[Elem]) -> Self {
        Word(v.to_vec())
    }
}

pub const DEFAULT_MAX_LEN: usize = 4;
pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const DEFAULT_SEED: u64 = 42;

const SAMPLE_CHUNK: u64 = 4096;

/// How a scan covers `W(L)`.
#[derive(Clone, Copy, Debug)]
pub struct ScanPlan {
    pub n: usize,
    pub max_len: usize,
    pub budget: u64,
    pub seed: u64,
}

impl ScanPlan {
    pub fn new(n: usize, max_len: usize, budget: u64, seed: u64) -> Self {
        ScanPlan { n, max_len, budget, seed }
    }

    pub fn exhaustive(&self) -> bool {
        match (self.n as u64).checked_pow(self.max_len as u32) {
            Some(total) => total <= self.budget,
            None => false,
        }
    }

    /// Runs `visit` on every planned word. Each shard gets its own
    /// accumulator from `init`; shards are folded left to right with `merge`.
    pub fn scan<A, I, V, M>(&self, init: I, visit: V, merge: M) -> ScanOutcome<A>
    where
        A: Send,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, &[Elem]) + Sync,
        M: Fn(A, A) -> A,
    {
        let n = self.n;
        let exhaustive = self.exhaustive();
        let full_len = if exhaustive { self.max_len } else { self.max_len.min(2) };

        let mut acc = init();
        visit(&mut acc, &[]);
        let mut count = 1u64;

        for len in 1..=full_len {
            let shards: Vec<A> = (0..n)
                .into_par_iter()
                .map(|first| {
                    let mut a = init();
                    let mut word = vec![0; len];
                    word[0] = first;
                    loop {
                        visit(&mut a, &word);
                        if !advance(&mut word[1..], n) {
                            break;
                        }
                    }
                    a
                })
                .collect();
            for s in shards {
                acc = merge(acc, s);
            }
            count += (n as u64).pow(len as u32);
        }

        if !exhaustive && self.max_len > 2 && n > 0 {
            let chunks = self.budget.div_ceil(SAMPLE_CHUNK);
            let (budget, seed, max_len) = (self.budget, self.seed, self.max_len);
            let shards: Vec<A> = (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(chunk);
                    let mut a = init();
                    let take = SAMPLE_CHUNK.min(budget - chunk * SAMPLE_CHUNK);
                    let mut word = Vec::with_capacity(max_len);
                    for _ in 0..take {
                        let len = rng.gen_range(3..=max_len);
                        word.clear();
                        word.extend((0..len).map(|_| rng.gen_range(0..n)));
                        visit(&mut a, &word);
                    }
                    a
                })
                .collect();
            for s in shards {
                acc = merge(acc, s);
            }
            count += self.budget;
        }

        ScanOutcome { acc, words: count, exhaustive }
    }
}

pub struct ScanOutcome<A> {
    pub acc: A,
    pub words: u64,
    pub exhaustive: bool,
}

/// Odometer increment; false once every position has wrapped.
pub fn advance(word: &mut [Elem], n: usize) -> bool {
    for slot in word.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Visits every word of length `len` over `0..n` in lexicographic order.
pub fn for_each_word_of_len(n: usize, len: usize, mut f: impl FnMut(&[Elem])) {
    if len > 0 && n == 0 {
        return;
    }
    let mut word = vec![0; len];
    loop {
        f(&word);
        if !advance(&mut word, n) {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_scan_counts_every_word() {
        let plan = ScanPlan::new(3, 3, 1000, 0);
        assert!(plan.exhaustive());
        let out = plan.scan(|| 0u64, |a, _| *a += 1, |a, b| a + b);
        assert_eq!(out.acc, 1 + 3 + 9 + 27);
        assert_eq!(out.words, 40);
    }

    #[test]
    fn sampled_scan_is_seed_deterministic() {
        let plan = ScanPlan::new(10, 4, 5000, 7);
        assert!(!plan.exhaustive());
        let run = || {
            plan.scan(
                Vec::new,
                |a: &mut Vec<Vec<Elem>>, w| a.push(w.to_vec()),
                |mut a, b| {
                    a.extend(b);
                    a
                },
            )
        };
        let (x, y) = (run(), run());
        assert_eq!(x.acc, y.acc);
        assert_eq!(x.acc.len() as u64, 1 + 10 + 100 + 5000);
        let other = ScanPlan::new(10, 4, 5000, 8).scan(
            Vec::new,
            |a: &mut Vec<Vec<Elem>>, w| a.push(w.to_vec()),
            |mut a, b| {
                a.extend(b);
                a
            },
        );
        assert_ne!(x.acc, other.acc);
    }

    #[test]
    fn lexicographic_enumeration() {
        let mut seen = Vec::new();
        for_each_word_of_len(2, 2, |w| seen.push(w.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
