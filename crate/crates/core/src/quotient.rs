//! The 16-element quotient by `K`, the normal closure of `abab`.
//!
//! Everything here is derived at start-up from finite tree actions: the
//! quotient group, the set `L` of coset pairs that have a preimage under
//! the splitting map, the lift table on `L`, and the base Q-sets of the
//! generators.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::ops;
use crate::portrait::Portrait;
use crate::words::{equal, sections, Letter, ReducedWord};

pub const ORDER: usize = 16;
pub const DEFAULT_MAX_DEPTH: usize = 8;
/// Longest conjugator the base Q-set sandwich will try.
pub const SANDWICH_MAX_LEN: usize = 24;
const MAX_GROUP_ELEMENTS: usize = 1 << 20;

/// A coset of `K`; index 0 is `K` itself.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct CosetId(pub u8);

impl CosetId {
    pub const IDENTITY: CosetId = CosetId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CosetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of the 16 cosets.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default)]
pub struct CosetSet(pub u16);

impl CosetSet {
    pub const EMPTY: CosetSet = CosetSet(0);
    pub const FULL: CosetSet = CosetSet(u16::MAX);

    pub fn single(g: CosetId) -> Self {
        CosetSet(1 << g.0)
    }

    #[inline]
    pub fn contains(self, g: CosetId) -> bool {
        self.0 >> g.0 & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, g: CosetId) {
        self.0 |= 1 << g.0;
    }

    pub fn union(self, other: CosetSet) -> CosetSet {
        CosetSet(self.0 | other.0)
    }

    pub fn intersection(self, other: CosetSet) -> CosetSet {
        CosetSet(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: CosetSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = CosetId> {
        (0..ORDER as u8)
            .filter(move |&i| self.0 >> i & 1 == 1)
            .map(CosetId)
    }

    pub fn first(self) -> Option<CosetId> {
        self.iter().next()
    }
}

impl FromIterator<CosetId> for CosetSet {
    fn from_iter<I: IntoIterator<Item = CosetId>>(iter: I) -> Self {
        let mut s = CosetSet::EMPTY;
        for g in iter {
            s.insert(g);
        }
        s
    }
}

impl fmt::Debug for CosetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|g| g.0)).finish()
    }
}

impl fmt::Display for CosetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", g.0)?;
        }
        write!(f, "}}")
    }
}

/// The five precomputed Q-sets `Q(1,1)`, `Q(a,a)`, `Q(b,b)`, `Q(c,c)`, `Q(d,d)`,
/// with the two sides of the sandwich that certified them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseQ {
    pub identity: CosetSet,
    /// Indexed by `Letter::index()`.
    pub generators: [CosetSet; 4],
    /// Greatest fixpoint (upper bound) per generator.
    pub upper: [CosetSet; 4],
    /// Coset images of brute-forced centralizing words (lower bound).
    pub lower: [CosetSet; 4],
    /// Length of the longest word the lower-bound search had to scan.
    pub witness_len: usize,
}

impl BaseQ {
    pub fn of_letter(&self, x: Letter) -> CosetSet {
        self.generators[x.index()]
    }
}

pub struct QuotientTables {
    pub mul: [[CosetId; ORDER]; ORDER],
    pub inv: [CosetId; ORDER],
    pub gen_coset: [CosetId; 4],
    /// `lift[g0][g1]` is defined exactly on `L`.
    pub lift: [[Option<CosetId>; ORDER]; ORDER],
    pub base_q: BaseQ,
    /// The least `n` with `St(n) ≤ K`.
    pub stabilizer_depth: usize,
    /// Order of the finite group acting on the truncated tree at that depth.
    pub truncated_order: usize,
}

impl fmt::Debug for QuotientTables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuotientTables")
            .field("gen_coset", &self.gen_coset)
            .field("stabilizer_depth", &self.stabilizer_depth)
            .field("base_q", &self.base_q)
            .finish_non_exhaustive()
    }
}

/// Finite group given by an explicit element list and right multiplication
/// by the four generators.
struct TruncatedGroup {
    elements: Vec<Portrait>,
    index: HashMap<Portrait, usize>,
}

impl TruncatedGroup {
    fn generate(gens: &[Portrait], depth: usize, cap: usize) -> Option<Self> {
        let id = Portrait::identity(depth);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut head = 0;
        while head < elements.len() {
            let e = elements[head].clone();
            head += 1;
            for g in gens {
                let p = e.compose(g);
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return None;
                    }
                    index.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
        }
        Some(TruncatedGroup { elements, index })
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    /// Normal closure of `r` when the group is generated by the involutions `gens`.
    fn normal_closure(&self, r: &Portrait, gens: &[Portrait]) -> Vec<usize> {
        // conjugacy class of r
        let mut class = vec![r.clone()];
        let mut seen = HashMap::from([(r.clone(), ())]);
        let mut head = 0;
        while head < class.len() {
            let x = class[head].clone();
            head += 1;
            for g in gens {
                let y = g.compose(&x).compose(g);
                if seen.insert(y.clone(), ()).is_none() {
                    class.push(y);
                }
            }
        }
        // subgroup generated by the class
        let id = self.elements[0].clone();
        let mut members = vec![id.clone()];
        let mut inside = HashMap::from([(id, ())]);
        let mut head = 0;
        while head < members.len() {
            let x = members[head].clone();
            head += 1;
            for c in &class {
                let y = x.compose(c);
                if inside.insert(y.clone(), ()).is_none() {
                    members.push(y);
                }
            }
        }
        members.iter().map(|p| self.index[p]).collect()
    }
}

impl QuotientTables {
    /// Process-wide tables built with the default depth cap. Panics if the
    /// build fails, which would mean the tree model itself is wrong.
    pub fn global() -> &'static QuotientTables {
        static TABLES: OnceLock<QuotientTables> = OnceLock::new();
        TABLES.get_or_init(|| {
            QuotientTables::build(DEFAULT_MAX_DEPTH).expect("quotient construction failed")
        })
    }

    /// Builds the tables, truncating the tree at depths `1..=max_depth`
    /// until the image of `K` has index 16.
    pub fn build(max_depth: usize) -> Result<QuotientTables> {
        let relator = ReducedWord::parse("abab")?;
        for depth in 1..=max_depth {
            let gens: Vec<Portrait> = Letter::ALL
                .iter()
                .map(|&x| Portrait::generator(x, depth))
                .collect();
            let group = TruncatedGroup::generate(&gens, depth, MAX_GROUP_ELEMENTS)
                .ok_or(Error::BuildDivergence { cap: depth })?;
            let r = Portrait::of_word(&relator, depth);
            let normal = group.normal_closure(&r, &gens);
            if group.len() / normal.len() != ORDER {
                continue;
            }
            return Self::from_truncation(&group, &normal, &gens, depth);
        }
        Err(Error::BuildDivergence { cap: max_depth })
    }

    fn from_truncation(
        group: &TruncatedGroup,
        normal: &[usize],
        gens: &[Portrait],
        depth: usize,
    ) -> Result<QuotientTables> {
        // Cosets in order of first appearance in the breadth-first element list.
        let mut coset_of = vec![usize::MAX; group.len()];
        let mut reps = Vec::new();
        for e in 0..group.len() {
            if coset_of[e] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(e);
            for &n in normal {
                let p = group.elements[e].compose(&group.elements[n]);
                coset_of[group.index[&p]] = id;
            }
        }
        debug_assert_eq!(reps.len(), ORDER);
        let mut mul = [[CosetId::IDENTITY; ORDER]; ORDER];
        for i in 0..ORDER {
            for j in 0..ORDER {
                let p = group.elements[reps[i]].compose(&group.elements[reps[j]]);
                mul[i][j] = CosetId(coset_of[group.index[&p]] as u8);
            }
        }
        let mut inv = [CosetId::IDENTITY; ORDER];
        for i in 0..ORDER {
            let j = (0..ORDER)
                .find(|&j| mul[i][j] == CosetId::IDENTITY)
                .expect("quotient element without inverse");
            inv[i] = CosetId(j as u8);
        }
        let mut gen_coset = [CosetId::IDENTITY; 4];
        for (x, g) in gens.iter().enumerate() {
            gen_coset[x] = CosetId(coset_of[group.index[g]] as u8);
        }

        let mut tables = QuotientTables {
            mul,
            inv,
            gen_coset,
            lift: [[None; ORDER]; ORDER],
            base_q: BaseQ {
                identity: CosetSet::FULL,
                generators: [CosetSet::FULL; 4],
                upper: [CosetSet::FULL; 4],
                lower: [CosetSet::EMPTY; 4],
                witness_len: 0,
            },
            stabilizer_depth: depth,
            truncated_order: group.len(),
        };
        tables.lift = tables.derive_lift()?;
        tables.base_q = tables.derive_base_q(SANDWICH_MAX_LEN)?;
        Ok(tables)
    }

    /// Closes the images `(wK, φ₀(w)K, φ₁(w)K)` of the stabilizer generators
    /// `b, c, d, aba, aca, ada` under multiplication and reads off `L` and the
    /// lift as the projection of that subgroup.
    fn derive_lift(&self) -> Result<[[Option<CosetId>; ORDER]; ORDER]> {
        let gens: Vec<[CosetId; 3]> = ["b", "c", "d", "aba", "aca", "ada"]
            .iter()
            .map(|s| {
                let w = ReducedWord::parse(s).expect("literal");
                let (w0, w1) = sections(&w);
                [self.coset(&w), self.coset(&w0), self.coset(&w1)]
            })
            .collect();
        let start = [CosetId::IDENTITY; 3];
        let mut seen = vec![start];
        let mut inside = std::collections::HashSet::from([start]);
        let mut head = 0;
        while head < seen.len() {
            let t = seen[head];
            head += 1;
            for g in &gens {
                let next = [
                    self.mul(t[0], g[0]),
                    self.mul(t[1], g[1]),
                    self.mul(t[2], g[2]),
                ];
                if inside.insert(next) {
                    seen.push(next);
                }
            }
        }
        let mut lift = [[None; ORDER]; ORDER];
        for [w, w0, w1] in seen {
            match lift[w0.index()][w1.index()] {
                None => lift[w0.index()][w1.index()] = Some(w),
                Some(prev) if prev == w => {}
                Some(_) => return Err(Error::LiftNotSingleValued(w0.0, w1.0)),
            }
        }
        Ok(lift)
    }

    /// Certifies `Q(x, x)` for the generators: an upper bound from the
    /// greatest fixpoint of the splitting equations and a lower bound from
    /// explicit centralizing words, which must meet.
    fn derive_base_q(&self, max_len: usize) -> Result<BaseQ> {
        let full = CosetSet::FULL;
        let e = CosetId::IDENTITY;
        let qa = self.q_odd(full, [e, e, e, e]);

        // b = (a, c), c = (a, d), d = (1, b); cross terms pair a with b, c, d
        // or 1 with b, which are never conjugate.
        let [_, mut xb, mut xc, mut xd] = [full; 4];
        loop {
            let nb = self.q_even(qa, xc, CosetSet::EMPTY, CosetSet::EMPTY);
            let nc = self.q_even(qa, xd, CosetSet::EMPTY, CosetSet::EMPTY);
            let nd = self.q_even(full, xb, CosetSet::EMPTY, CosetSet::EMPTY);
            if (nb, nc, nd) == (xb, xc, xd) {
                break;
            }
            (xb, xc, xd) = (nb, nc, nd);
        }
        let upper = [qa, xb, xc, xd];

        let letters: Vec<ReducedWord> = Letter::ALL
            .iter()
            .map(|&x| ReducedWord::letter(x))
            .collect();
        let mut lower = [CosetSet::EMPTY; 4];
        let mut layer = vec![ReducedWord::identity()];
        for len in 0..=max_len {
            for x in &layer {
                let cx = self.coset(x);
                for (i, g) in letters.iter().enumerate() {
                    if !lower[i].contains(cx) && equal(&g.mul(x), &x.mul(g)) {
                        lower[i].insert(cx);
                    }
                }
            }
            for i in 0..4 {
                if !lower[i].is_subset(upper[i]) {
                    // a witness outside the fixpoint means the equations are wrong
                    return Err(Error::SandwichGap { max_len: len });
                }
            }
            if lower == upper {
                return Ok(BaseQ {
                    identity: full,
                    generators: upper,
                    upper,
                    lower,
                    witness_len: len,
                });
            }
            layer = extend_reduced(&layer);
        }
        Err(Error::SandwichGap { max_len })
    }

    #[inline]
    pub fn mul(&self, g: CosetId, h: CosetId) -> CosetId {
        self.mul[g.index()][h.index()]
    }

    #[inline]
    pub fn inv(&self, g: CosetId) -> CosetId {
        self.inv[g.index()]
    }

    pub fn a_coset(&self) -> CosetId {
        self.gen_coset[Letter::A.index()]
    }

    /// `wK`, in one pass over the word.
    pub fn coset(&self, w: &ReducedWord) -> CosetId {
        self.coset_of(w.letters())
    }

    pub fn coset_of(&self, letters: &[Letter]) -> CosetId {
        ops::tick(letters.len() as u64);
        letters.iter().fold(CosetId::IDENTITY, |acc, x| {
            self.mul(acc, self.gen_coset[x.index()])
        })
    }

    pub fn lift(&self, g0: CosetId, g1: CosetId) -> Option<CosetId> {
        self.lift[g0.index()][g1.index()]
    }

    pub fn in_l(&self, g0: CosetId, g1: CosetId) -> bool {
        self.lift(g0, g1).is_some()
    }

    /// All pairs of `L`.
    pub fn l_pairs(&self) -> Vec<(CosetId, CosetId, CosetId)> {
        let mut out = Vec::new();
        for i in 0..ORDER {
            for j in 0..ORDER {
                if let Some(g) = self.lift[i][j] {
                    out.push((CosetId(i as u8), CosetId(j as u8), g));
                }
            }
        }
        out
    }

    pub fn set_inverse(&self, s: CosetSet) -> CosetSet {
        s.iter().map(|g| self.inv(g)).collect()
    }

    /// `{ g·h : g ∈ s, h ∈ t }`.
    pub fn set_product(&self, s: CosetSet, t: CosetSet) -> CosetSet {
        ops::tick(1);
        let mut out = CosetSet::EMPTY;
        for g in s.iter() {
            for h in t.iter() {
                out.insert(self.mul(g, h));
            }
        }
        out
    }

    pub fn set_right_mul(&self, s: CosetSet, h: CosetId) -> CosetSet {
        s.iter().map(|g| self.mul(g, h)).collect()
    }

    /// `lift(S0 × S1)`: lifts of the pairs of `S0 × S1` that lie in `L`.
    pub fn lift_set_product(&self, s0: CosetSet, s1: CosetSet) -> CosetSet {
        ops::tick(1);
        let mut out = CosetSet::EMPTY;
        for g0 in s0.iter() {
            for g1 in s1.iter() {
                if let Some(g) = self.lift(g0, g1) {
                    out.insert(g);
                }
            }
        }
        out
    }

    /// Q-set of two stabilizer elements from the Q-sets of their sections:
    /// `lift[Q(u0,v0) × Q(u1,v1)] ∪ lift[Q(u1,v0) × Q(u0,v1)]·a`.
    pub fn q_even(
        &self,
        q_u0v0: CosetSet,
        q_u1v1: CosetSet,
        q_u1v0: CosetSet,
        q_u0v1: CosetSet,
    ) -> CosetSet {
        let straight = self.lift_set_product(q_u0v0, q_u1v1);
        let crossed = self.lift_set_product(q_u1v0, q_u0v1);
        straight.union(self.set_right_mul(crossed, self.a_coset()))
    }

    /// Q-set of `u = (u0,u1)a`, `v = (v0,v1)a` from `Q(u0u1, v0v1)`. The
    /// section cosets are passed as `[u0, u1, v0, v1]`.
    pub fn q_odd(&self, q_prod: CosetSet, sections: [CosetId; 4]) -> CosetSet {
        ops::tick(1);
        let [_u0, u1, v0, v1] = sections;
        let u1_inv = self.inv(u1);
        let v0_inv = self.inv(v0);
        let a = self.a_coset();
        let mut out = CosetSet::EMPTY;
        for g in q_prod.iter() {
            // x ∈ St(1): x = (g, v1 g u1⁻¹)
            if let Some(x) = self.lift(g, self.mul(self.mul(v1, g), u1_inv)) {
                out.insert(x);
            }
            // x ∉ St(1): xa = (g u1⁻¹, v0⁻¹ g)
            if let Some(x) = self.lift(self.mul(g, u1_inv), self.mul(v0_inv, g)) {
                out.insert(self.mul(x, a));
            }
        }
        out
    }

    /// Word-level convenience for [`q_odd`](Self::q_odd).
    pub fn q_odd_words(
        &self,
        q_prod: CosetSet,
        u0: &ReducedWord,
        u1: &ReducedWord,
        v0: &ReducedWord,
        v1: &ReducedWord,
    ) -> CosetSet {
        self.q_odd(
            q_prod,
            [
                self.coset(u0),
                self.coset(u1),
                self.coset(v0),
                self.coset(v1),
            ],
        )
    }

    /// Base Q-set for a word of length at most one.
    pub fn base_q_of(&self, w: &ReducedWord) -> Option<CosetSet> {
        match w.letters() {
            [] => Some(self.base_q.identity),
            [x] => Some(self.base_q.of_letter(*x)),
            _ => None,
        }
    }

    /// Whether `g` and `h` are conjugate in the 16-element group.
    pub fn cosets_conjugate(&self, g: CosetId, h: CosetId) -> bool {
        (0..ORDER as u8).any(|k| {
            let k = CosetId(k);
            self.mul(self.mul(self.inv(k), h), k) == g
        })
    }

    /// Tab-separated dump of every table.
    pub fn dump_tsv(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# stabilizer_depth\t{}\n", self.stabilizer_depth));
        s.push_str(&format!("# truncated_order\t{}\n", self.truncated_order));
        s.push_str("# gen_coset\n");
        for x in Letter::ALL {
            s.push_str(&format!("{}\t{}\n", x.to_char(), self.gen_coset[x.index()]));
        }
        s.push_str("# mul\n");
        for row in &self.mul {
            let cells: Vec<String> = row.iter().map(|g| g.to_string()).collect();
            s.push_str(&cells.join("\t"));
            s.push('\n');
        }
        s.push_str("# inv\n");
        let cells: Vec<String> = self.inv.iter().map(|g| g.to_string()).collect();
        s.push_str(&cells.join("\t"));
        s.push('\n');
        s.push_str("# lift\tg0\tg1\tg\n");
        for (g0, g1, g) in self.l_pairs() {
            s.push_str(&format!("lift\t{g0}\t{g1}\t{g}\n"));
        }
        s.push_str("# base_q\n");
        s.push_str(&format!("1\t{}\n", self.base_q.identity));
        for x in Letter::ALL {
            s.push_str(&format!("{}\t{}\n", x.to_char(), self.base_q.of_letter(x)));
        }
        s
    }
}

/// All reduced words one letter longer than the words of `layer`.
pub fn extend_reduced(layer: &[ReducedWord]) -> Vec<ReducedWord> {
    let mut next = Vec::new();
    for w in layer {
        let last_is_a = w.letters().last().map(|x| x.is_a());
        for x in Letter::ALL {
            let ok = match last_is_a {
                None => true,
                Some(true) => !x.is_a(),
                Some(false) => x.is_a(),
            };
            if ok {
                let mut letters = w.letters().to_vec();
                letters.push(x);
                next.push(ReducedWord::from_reduced(letters));
            }
        }
    }
    next
}

/// All reduced words of length at most `max_len`, in shortlex order.
pub fn reduced_words_up_to(max_len: usize) -> Vec<ReducedWord> {
    let mut out = Vec::new();
    let mut layer = vec![ReducedWord::identity()];
    for _ in 0..=max_len {
        out.extend(layer.iter().cloned());
        layer = extend_reduced(&layer);
    }
    out
}
