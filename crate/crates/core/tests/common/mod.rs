#![allow(dead_code)]

use grigorchuk::{Letter, ReducedWord};
use rand::Rng;

pub const NON_A: [Letter; 3] = [Letter::B, Letter::C, Letter::D];

/// Uniformly random reduced word of length exactly `n` with a random
/// starting type.
pub fn random_reduced(rng: &mut impl Rng, n: usize) -> ReducedWord {
    let mut letters = Vec::with_capacity(n);
    let mut a_next = rng.gen_bool(0.5);
    for _ in 0..n {
        letters.push(if a_next {
            Letter::A
        } else {
            NON_A[rng.gen_range(0..3)]
        });
        a_next = !a_next;
    }
    ReducedWord::from_reduced(letters)
}

/// Random reduced word with length uniform in `0..=max_len`.
pub fn random_up_to(rng: &mut impl Rng, max_len: usize) -> ReducedWord {
    let n = rng.gen_range(0..=max_len);
    random_reduced(rng, n)
}

/// Random reduced word with log-uniform length in `1..=max_len`.
pub fn random_log_uniform(rng: &mut impl Rng, max_len: usize) -> ReducedWord {
    let n = (rng.gen_range(0.0..(max_len as f64).ln())).exp().round() as usize;
    random_reduced(rng, n.clamp(1, max_len))
}

pub fn w(s: &str) -> ReducedWord {
    ReducedWord::parse(s).unwrap()
}
