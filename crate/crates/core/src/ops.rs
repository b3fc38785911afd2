//! Elementary-operation counter.
//!
//! Every letter scanned, trie edge followed and constant-size coset-set
//! operation bumps a thread-local counter. Scaling tests read it to check
//! that work grows linearly with input size.

use std::cell::Cell;

thread_local! {
    static OPS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub fn tick(n: u64) {
    OPS.with(|c| c.set(c.get().wrapping_add(n)));
}

pub fn reset() {
    OPS.with(|c| c.set(0));
}

pub fn count() -> u64 {
    OPS.with(|c| c.get())
}

/// Runs `f` and returns its result with the number of operations it took.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let before = count();
    let out = f();
    (out, count() - before)
}
