//! Tries over `{a, b, c, d}` plus a separator symbol.
//!
//! One trie stores the universe of words, another stores the labels of the
//! conjugacy table. Insert and lookup walk one edge per key symbol.

use crate::ops;
use crate::words::{Letter, ReducedWord};

/// Key alphabet: the four letters and a separator.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Symbol {
    Letter(Letter),
    Sep,
}

impl Symbol {
    #[inline]
    fn slot(self) -> usize {
        match self {
            Symbol::Letter(x) => x.index(),
            Symbol::Sep => 4,
        }
    }
}

const NONE: u32 = u32::MAX;
const ALPHABET: usize = 5;

#[derive(Clone, Debug)]
struct Node {
    next: [u32; ALPHABET],
    payload: u32,
}

impl Node {
    fn new() -> Self {
        Node {
            next: [NONE; ALPHABET],
            payload: NONE,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trie<P> {
    nodes: Vec<Node>,
    payloads: Vec<P>,
}

impl<P> Default for Trie<P> {
    fn default() -> Self {
        Trie::new()
    }
}

impl<P> Trie<P> {
    pub fn new() -> Self {
        Trie {
            nodes: vec![Node::new()],
            payloads: Vec::new(),
        }
    }

    /// Number of marked keys.
    pub fn len(&self) -> usize {
        self.payloads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payloads.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn walk_or_create<I: IntoIterator<Item = Symbol>>(&mut self, key: I) -> usize {
        let mut v = 0usize;
        for s in key {
            ops::tick(1);
            let slot = s.slot();
            let next = self.nodes[v].next[slot];
            v = if next == NONE {
                let id = self.nodes.len();
                self.nodes.push(Node::new());
                self.nodes[v].next[slot] = id as u32;
                id
            } else {
                next as usize
            };
        }
        v
    }

    fn walk<I: IntoIterator<Item = Symbol>>(&self, key: I) -> Option<usize> {
        let mut v = 0usize;
        for s in key {
            ops::tick(1);
            let next = self.nodes[v].next[s.slot()];
            if next == NONE {
                return None;
            }
            v = next as usize;
        }
        Some(v)
    }

    /// Marks `key`, creating its payload with `make` if it was absent.
    /// Returns the payload and whether it was newly inserted.
    pub fn get_or_insert_with<I, F>(&mut self, key: I, make: F) -> (&mut P, bool)
    where
        I: IntoIterator<Item = Symbol>,
        F: FnOnce() -> P,
    {
        let v = self.walk_or_create(key);
        let fresh = self.nodes[v].payload == NONE;
        if fresh {
            self.nodes[v].payload = self.payloads.len() as u32;
            self.payloads.push(make());
        }
        let slot = self.nodes[v].payload as usize;
        (&mut self.payloads[slot], fresh)
    }

    /// Inserts `payload` under `key`. If the key is already present the
    /// existing payload is kept and returned, and `payload` is dropped.
    pub fn insert<I: IntoIterator<Item = Symbol>>(&mut self, key: I, payload: P) -> Option<&P> {
        let mut payload = Some(payload);
        let (p, fresh) = self.get_or_insert_with(key, || payload.take().expect("payload"));
        if fresh {
            None
        } else {
            Some(&*p)
        }
    }

    pub fn get<I: IntoIterator<Item = Symbol>>(&self, key: I) -> Option<&P> {
        let v = self.walk(key)?;
        match self.nodes[v].payload {
            NONE => None,
            slot => Some(&self.payloads[slot as usize]),
        }
    }

    pub fn get_mut<I: IntoIterator<Item = Symbol>>(&mut self, key: I) -> Option<&mut P> {
        let v = self.walk(key)?;
        match self.nodes[v].payload {
            NONE => None,
            slot => Some(&mut self.payloads[slot as usize]),
        }
    }

    pub fn contains<I: IntoIterator<Item = Symbol>>(&self, key: I) -> bool {
        self.get(key).is_some()
    }

    /// Payloads in lexicographic key order (prefixes before extensions,
    /// letters in order `a < b < c < d`, separator last).
    pub fn lex_payloads(&self) -> Vec<&P> {
        let mut out = Vec::with_capacity(self.payloads.len());
        // (node, next slot to explore)
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        if self.nodes[0].payload != NONE {
            out.push(&self.payloads[self.nodes[0].payload as usize]);
        }
        while let Some(top) = stack.last_mut() {
            let (v, slot) = *top;
            if slot == ALPHABET {
                stack.pop();
                continue;
            }
            top.1 += 1;
            let child = self.nodes[v].next[slot];
            if child == NONE {
                continue;
            }
            ops::tick(1);
            let child = child as usize;
            if self.nodes[child].payload != NONE {
                out.push(&self.payloads[self.nodes[child].payload as usize]);
            }
            stack.push((child, 0));
        }
        out
    }
}

/// Key of a plain word.
pub fn word_key(w: &ReducedWord) -> impl Iterator<Item = Symbol> + '_ {
    w.letters().iter().map(|&x| Symbol::Letter(x))
}

/// Label `w0,w1,` of a row whose words split into a pair.
pub fn pair_key<'a>(w0: &'a ReducedWord, w1: &'a ReducedWord) -> impl Iterator<Item = Symbol> + 'a {
    word_key(w0)
        .chain(std::iter::once(Symbol::Sep))
        .chain(word_key(w1))
        .chain(std::iter::once(Symbol::Sep))
}

/// Label `,w` of a row of odd words. The leading separator keeps it apart
/// from pair labels, which contain exactly two separators.
pub fn single_key(w: &ReducedWord) -> impl Iterator<Item = Symbol> + '_ {
    std::iter::once(Symbol::Sep).chain(word_key(w))
}

/// Stable shortlex order as a permutation of `keys`: lexicographic trie
/// traversal followed by a counting sort on length.
pub fn shortlex_order_indices(keys: &[ReducedWord]) -> Vec<usize> {
    let mut trie: Trie<Vec<usize>> = Trie::new();
    for (i, k) in keys.iter().enumerate() {
        trie.get_or_insert_with(word_key(k), Vec::new).0.push(i);
    }
    let lex: Vec<usize> = trie
        .lex_payloads()
        .into_iter()
        .flat_map(|ids| ids.iter().copied())
        .collect();
    let max_len = keys.iter().map(|k| k.len()).max().unwrap_or(0);
    let mut starts = vec![0usize; max_len + 2];
    for k in keys {
        starts[k.len() + 1] += 1;
    }
    for i in 1..starts.len() {
        starts[i] += starts[i - 1];
    }
    let mut out = vec![0usize; keys.len()];
    for i in lex {
        ops::tick(1);
        let l = keys[i].len();
        out[starts[l]] = i;
        starts[l] += 1;
    }
    out
}

pub fn shortlex_order(keys: &[ReducedWord]) -> Vec<ReducedWord> {
    shortlex_order_indices(keys)
        .into_iter()
        .map(|i| keys[i].clone())
        .collect()
}
