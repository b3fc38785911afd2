//! Finite-depth portraits of tree automorphisms.
//!
//! A portrait of depth `n` stores one swap bit per internal vertex of the
//! binary tree truncated at level `n`, in level-major order: the root is
//! vertex 0 and the children of vertex `k` are `2k+1` (prefix 0) and `2k+2`
//! (prefix 1). Products read left to right: `g·h` applies `g` first.

use crate::words::{Letter, ReducedWord};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Portrait {
    depth: usize,
    bits: Vec<u64>,
}

fn vertex_count(depth: usize) -> usize {
    (1usize << depth) - 1
}

impl Portrait {
    pub fn identity(depth: usize) -> Self {
        assert!(depth < 30, "portrait depth {depth} too large");
        Portrait {
            depth,
            bits: vec![0; vertex_count(depth).div_ceil(64).max(1)],
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    #[inline]
    pub fn bit(&self, v: usize) -> bool {
        (self.bits[v >> 6] >> (v & 63)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, v: usize, on: bool) {
        if on {
            self.bits[v >> 6] |= 1 << (v & 63);
        } else {
            self.bits[v >> 6] &= !(1 << (v & 63));
        }
    }

    /// The truncation of `a`, `b`, `c` or `d`, following
    /// `a = swap`, `b = (a, c)`, `c = (a, d)`, `d = (1, b)`.
    pub fn generator(x: Letter, depth: usize) -> Self {
        let mut p = Portrait::identity(depth);
        // (vertex, level, generator at that vertex)
        let mut stack = vec![(0usize, 0usize, x)];
        while let Some((v, level, g)) = stack.pop() {
            if level >= depth {
                continue;
            }
            let (left, right) = match g {
                Letter::A => {
                    p.set(v, true);
                    continue;
                }
                Letter::B => (Some(Letter::A), Some(Letter::C)),
                Letter::C => (Some(Letter::A), Some(Letter::D)),
                Letter::D => (None, Some(Letter::B)),
            };
            if let Some(l) = left {
                stack.push((2 * v + 1, level + 1, l));
            }
            if let Some(r) = right {
                stack.push((2 * v + 2, level + 1, r));
            }
        }
        p
    }

    /// Image of every internal vertex under `self`.
    fn vertex_images(&self) -> Vec<usize> {
        let n = vertex_count(self.depth);
        let mut img = vec![0usize; n];
        let inner = vertex_count(self.depth.saturating_sub(1));
        for k in 0..inner {
            let m = img[k];
            let s = self.bit(k) as usize;
            for i in 0..2 {
                img[2 * k + 1 + i] = 2 * m + 1 + (i ^ s);
            }
        }
        img
    }

    /// `self · other`.
    pub fn compose(&self, other: &Portrait) -> Portrait {
        assert_eq!(self.depth, other.depth);
        let img = self.vertex_images();
        let mut out = Portrait::identity(self.depth);
        for (v, &iv) in img.iter().enumerate() {
            out.set(v, self.bit(v) ^ other.bit(iv));
        }
        out
    }

    pub fn inverse(&self) -> Portrait {
        // g⁻¹ has bit at g(v) equal to g's bit at v.
        let img = self.vertex_images();
        let mut out = Portrait::identity(self.depth);
        for (v, &iv) in img.iter().enumerate() {
            out.set(iv, self.bit(v));
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn of_word(w: &ReducedWord, depth: usize) -> Portrait {
        let gens: Vec<Portrait> = Letter::ALL
            .iter()
            .map(|&x| Portrait::generator(x, depth))
            .collect();
        w.letters()
            .iter()
            .fold(Portrait::identity(depth), |acc, x| {
                acc.compose(&gens[x.index()])
            })
    }

    /// Whether the automorphism fixes both vertices of level 1.
    pub fn fixes_level_one(&self) -> bool {
        self.depth == 0 || !self.bit(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(s).unwrap()
    }

    #[test]
    fn generators_are_involutions() {
        for depth in 1..6 {
            for x in Letter::ALL {
                let g = Portrait::generator(x, depth);
                assert!(g.compose(&g).is_identity());
            }
        }
    }

    #[test]
    fn relations_hold() {
        for depth in 1..8 {
            let [_, b, c, d] = Letter::ALL.map(|x| Portrait::generator(x, depth));
            assert_eq!(b.compose(&c), d);
            assert_eq!(c.compose(&d), b);
            assert_eq!(d.compose(&b), c);
            assert!(Portrait::of_word(&w("adadadad"), depth).is_identity());
        }
        assert!(!Portrait::of_word(&w("dadadad"), 4).is_identity());
        assert!(!Portrait::of_word(&w("a"), 1).is_identity());
    }

    #[test]
    fn inverse_and_associativity() {
        let depth = 5;
        let x = Portrait::of_word(&w("abacabad"), depth);
        let y = Portrait::of_word(&w("dacab"), depth);
        let z = Portrait::of_word(&w("bada"), depth);
        assert!(x.compose(&x.inverse()).is_identity());
        assert_eq!(x.compose(&y).compose(&z), x.compose(&y.compose(&z)));
        assert_eq!(
            x.inverse(),
            Portrait::of_word(&w("abacabad").inverse(), depth)
        );
    }
}
