//! Slow reference implementations for cross-checking the fast paths.
//!
//! Nothing here is used by the decision procedures themselves.

use std::collections::HashMap;

use crate::portrait::Portrait;
use crate::quotient::{extend_reduced, CosetSet, QuotientTables};
use crate::words::{sections, Letter, ReducedWord};

/// Generator portraits at a fixed depth.
pub struct DepthAction {
    depth: usize,
    gens: [Portrait; 4],
}

impl DepthAction {
    pub fn new(depth: usize) -> Self {
        DepthAction {
            depth,
            gens: Letter::ALL.map(|x| Portrait::generator(x, depth)),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn generator(&self, x: Letter) -> &Portrait {
        &self.gens[x.index()]
    }

    pub fn of_word(&self, w: &ReducedWord) -> Portrait {
        self.of_letters(w.letters())
    }

    pub fn of_letters(&self, letters: &[Letter]) -> Portrait {
        letters
            .iter()
            .fold(Portrait::identity(self.depth), |acc, x| {
                acc.compose(&self.gens[x.index()])
            })
    }
}

/// Depth at which the actions of two words of total length `n` must differ
/// if the words are different elements.
///
/// A non-trivial stabilizer word of length `m` splits into sections of
/// length at most `⌊(m+1)/2⌋`, so after `⌈log₂ m⌉` levels either some
/// section leaves the stabilizer (visible one level down) or it is a single
/// letter, and `d = (1, b)` is the slowest of those, needing three more levels.
pub fn sufficient_depth(n: usize) -> usize {
    let mut levels = 0;
    let mut m = n.max(1);
    while m > 1 {
        m = m.div_ceil(2);
        levels += 1;
    }
    levels + 4
}

/// Compares the actions of `u` and `v` on the tree truncated at `max_depth`.
pub fn word_equal_oracle(u: &ReducedWord, v: &ReducedWord, max_depth: usize) -> bool {
    let act = DepthAction::new(max_depth);
    act.of_word(u) == act.of_word(v)
}

/// Equality decided by portraits at [`sufficient_depth`].
pub fn oracle_equal(u: &ReducedWord, v: &ReducedWord) -> bool {
    word_equal_oracle(u, v, sufficient_depth(u.len() + v.len()))
}

/// First reduced `x` in shortlex order with `|x| ≤ max_len` and `u = x⁻¹ v x`,
/// found by comparing tree actions.
pub fn brute_conjugator(u: &ReducedWord, v: &ReducedWord, max_len: usize) -> Option<ReducedWord> {
    if u.a_parity() != v.a_parity() {
        return None;
    }
    let act = DepthAction::new(sufficient_depth(u.len() + v.len() + 2 * max_len));
    let pu = act.of_word(u);
    let pv = act.of_word(v);
    let mut layer: Vec<(ReducedWord, Portrait)> =
        vec![(ReducedWord::identity(), Portrait::identity(act.depth()))];
    for len in 0..=max_len {
        for (x, px) in &layer {
            if px.inverse().compose(&pv).compose(px) == pu {
                return Some(x.clone());
            }
        }
        if len == max_len {
            break;
        }
        let words: Vec<ReducedWord> = layer.iter().map(|(x, _)| x.clone()).collect();
        let parents: HashMap<&ReducedWord, &Portrait> = layer.iter().map(|(x, p)| (x, p)).collect();
        let next: Vec<(ReducedWord, Portrait)> = extend_reduced(&words)
            .into_iter()
            .map(|x| {
                let (last, prefix) = x.letters().split_last().expect("non-empty");
                let parent = ReducedWord::from_reduced(prefix.to_vec());
                let p = parents[&parent].compose(act.generator(*last));
                (x, p)
            })
            .collect();
        layer = next;
    }
    None
}

/// Non-conjugacy certified by an invariant: different `a`-parity, or coset
/// images that are not conjugate in the 16-element quotient.
pub fn quotient_certifies_nonconjugate(u: &ReducedWord, v: &ReducedWord) -> bool {
    let t = QuotientTables::global();
    u.a_parity() != v.a_parity() || !t.cosets_conjugate(t.coset(u), t.coset(v))
}

/// Direct memoized evaluation of the Q-set recursion on word pairs.
pub struct NaiveSolver<'q> {
    tables: &'q QuotientTables,
    memo: HashMap<(ReducedWord, ReducedWord), CosetSet>,
}

impl<'q> NaiveSolver<'q> {
    pub fn new(tables: &'q QuotientTables) -> Self {
        NaiveSolver {
            tables,
            memo: HashMap::new(),
        }
    }

    pub fn q(&mut self, u: &ReducedWord, v: &ReducedWord) -> CosetSet {
        if u.a_parity() != v.a_parity() {
            return CosetSet::EMPTY;
        }
        if u.len() <= 1 && v.len() <= 1 {
            // 1, a, b, c, d are pairwise non-conjugate
            return if u == v {
                self.tables.base_q_of(u).expect("short word")
            } else {
                CosetSet::EMPTY
            };
        }
        let key = (u.clone(), v.clone());
        if let Some(&q) = self.memo.get(&key) {
            return q;
        }
        let t = self.tables;
        let (u0, u1) = sections(u);
        let (v0, v1) = sections(v);
        let q = if u.is_even() {
            let q00 = self.q(&u0, &v0);
            let q11 = self.q(&u1, &v1);
            let q10 = self.q(&u1, &v0);
            let q01 = self.q(&u0, &v1);
            t.q_even(q00, q11, q10, q01)
        } else {
            let prod = self.q(&u0.mul(&u1), &v0.mul(&v1));
            t.q_odd_words(prod, &u0, &u1, &v0, &v1)
        };
        self.memo.insert(key, q);
        q
    }
}

pub fn naive_q(u: &ReducedWord, v: &ReducedWord) -> CosetSet {
    NaiveSolver::new(QuotientTables::global()).q(u, v)
}

pub fn naive_conjugate(u: &ReducedWord, v: &ReducedWord) -> bool {
    !naive_q(u, v).is_empty()
}
