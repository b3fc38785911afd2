//! Explicit conjugators.
//!
//! A pair of coordinates `(x0, x1)` whose cosets lie in `L` is lifted to a
//! stabilizer word through the substitutions `τ₀`, `τ₁`. The search follows
//! the splitting of `u` and `v` down to words of norm below 9, where
//! conjugators are read from a precomputed table.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::engine::{solve_with, Children, RecordId, Solution};
use crate::error::{Error, Result};
use crate::oracle::DepthAction;
use crate::portrait::Portrait;
use crate::quotient::{extend_reduced, CosetId, CosetSet, QuotientTables, SANDWICH_MAX_LEN};
use crate::sptree::{small_norm_words, CORE_NORM, SMALL_NORM_MAX_LEN};
use crate::words::{equal, norm, phi_pair, sections, Letter, NormWeights, ReducedWord, Reducer};

const TAU0: [&[Letter]; 4] = [
    &[Letter::C],
    &[Letter::A, Letter::D, Letter::A],
    &[Letter::A, Letter::B, Letter::A],
    &[Letter::A, Letter::C, Letter::A],
];
const TAU1: [&[Letter]; 4] = [
    &[Letter::A, Letter::C, Letter::A],
    &[Letter::D],
    &[Letter::B],
    &[Letter::C],
];

/// `τ₀` or `τ₁` applied letter by letter, then reduced.
///
/// `τ₀(w)` splits as `(w, δ)` and `τ₁(w)` as `(δ, w)` with `δ ∈ ⟨a, d⟩`.
pub fn tau(which: u8, w: &ReducedWord) -> ReducedWord {
    let table = if which == 0 { &TAU0 } else { &TAU1 };
    let mut r = Reducer::with_capacity(3 * w.len());
    for &x in w.letters() {
        r.extend(table[x.index()].iter().copied());
    }
    r.finish()
}

/// The `⟨a, d⟩` coordinate left behind by `τ₀` (or `τ₁`, they agree).
fn tau_shadow(w: &ReducedWord) -> Vec<Letter> {
    w.letters()
        .iter()
        .filter_map(|x| match x {
            Letter::A => Some(Letter::D),
            Letter::B => None,
            Letter::C | Letter::D => Some(Letter::A),
        })
        .collect()
}

/// Canonical word of an element of the dihedral group `⟨a, d⟩` of order 8:
/// alternating, at most four letters, with `adad` for the central element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DihedralWord(ReducedWord);

impl DihedralWord {
    pub fn word(&self) -> &ReducedWord {
        &self.0
    }

    pub fn into_word(self) -> ReducedWord {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn dihedral_normalize(letters: &[Letter]) -> Result<DihedralWord> {
    let mut r = Reducer::with_capacity(letters.len());
    for &x in letters {
        match x {
            Letter::A | Letter::D => r.push(x),
            other => return Err(Error::NotDihedral(other.to_char())),
        }
    }
    // a reduced word over {a, d} alternates, so it is fixed by its first
    // letter and its length
    let w = r.finish();
    let Some(&first) = w.letters().first() else {
        return Ok(DihedralWord(w));
    };
    let other = if first == Letter::A {
        Letter::D
    } else {
        Letter::A
    };
    let n = w.len() % 8;
    let alternate = |start: Letter, len: usize| -> ReducedWord {
        let mut letters = Vec::with_capacity(len);
        for i in 0..len {
            letters.push(if i % 2 == 0 {
                start
            } else if start == Letter::A {
                Letter::D
            } else {
                Letter::A
            });
        }
        ReducedWord::from_reduced(letters)
    };
    let canon = match n {
        0 => ReducedWord::identity(),
        4 => alternate(Letter::A, 4),
        n if n < 4 => alternate(first, n),
        // s₁…sₙ = (sₙ₊₁…s₈)⁻¹, which has 8 - n letters and ends in s₁'s partner
        n => {
            let last = if n % 2 == 1 { first } else { other };
            let start = if last == Letter::A {
                Letter::D
            } else {
                Letter::A
            };
            alternate(start, 8 - n).inverse()
        }
    };
    Ok(DihedralWord(canon))
}

/// Sizes of one lift, kept for checking `|x| ≤ 2(|x0| + |x1|) + 10`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct LiftRecord {
    pub x0_len: usize,
    pub x1_len: usize,
    pub x_len: usize,
}

impl LiftRecord {
    pub fn bound(&self) -> usize {
        2 * (self.x0_len + self.x1_len) + 10
    }

    pub fn within_bound(&self) -> bool {
        self.x_len <= self.bound()
    }
}

pub fn lift_word(x0: &ReducedWord, x1: &ReducedWord) -> Result<ReducedWord> {
    lift_word_with(QuotientTables::global(), x0, x1).map(|(x, _)| x)
}

/// A stabilizer word splitting as `(x0, x1)`.
pub fn lift_word_with(
    tables: &QuotientTables,
    x0: &ReducedWord,
    x1: &ReducedWord,
) -> Result<(ReducedWord, LiftRecord)> {
    if !tables.in_l(tables.coset(x0), tables.coset(x1)) {
        return Err(Error::NotLiftable);
    }
    let z0 = tau(0, x0);
    let delta0 = dihedral_normalize(&tau_shadow(x0))?;
    let rest = delta0.word().inverse().mul(x1);
    let z1 = tau(1, &rest);
    let delta1 = dihedral_normalize(&tau_shadow(&rest))?;
    if !delta1.is_identity() {
        return Err(Error::LiftResidual(delta1.word().to_string()));
    }
    let x = z0.mul(&z1);
    let (y0, y1) = phi_pair(&x)?;
    if !equal(&y0, x0) || !equal(&y1, x1) {
        return Err(Error::LiftResidual(format!("sections of {x}")));
    }
    let rec = LiftRecord {
        x0_len: x0.len(),
        x1_len: x1.len(),
        x_len: x.len(),
    };
    assert!(
        rec.within_bound(),
        "lift of ({x0}, {x1}) has length {}",
        x.len()
    );
    Ok((x, rec))
}

/// Explicit conjugators for every pair of words of norm below 9 and every
/// coset of their Q-set.
#[derive(Clone, Debug)]
pub struct BaseConjTable {
    words: Vec<ReducedWord>,
    index: HashMap<ReducedWord, usize>,
    slots: HashMap<(usize, usize, CosetId), ReducedWord>,
    max_witness_len: usize,
}

impl BaseConjTable {
    pub fn global() -> &'static BaseConjTable {
        static BASE: OnceLock<BaseConjTable> = OnceLock::new();
        BASE.get_or_init(|| {
            build_base_conj_table(QuotientTables::global())
                .expect("base conjugator table is complete")
        })
    }

    pub fn words(&self) -> &[ReducedWord] {
        &self.words
    }

    pub fn contains_word(&self, w: &ReducedWord) -> bool {
        self.index.contains_key(w)
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    /// Longest stored conjugator.
    pub fn max_witness_len(&self) -> usize {
        self.max_witness_len
    }

    /// The stored `x` with `u = x⁻¹ v x` and coset `g`.
    pub fn get(&self, u: &ReducedWord, v: &ReducedWord, g: CosetId) -> Option<&ReducedWord> {
        let (&i, &j) = (self.index.get(u)?, self.index.get(v)?);
        self.slots.get(&(i, j, g))
    }

    /// `(u, v, g, x)` for every slot.
    pub fn iter(
        &self,
    ) -> impl Iterator<Item = (&ReducedWord, &ReducedWord, CosetId, &ReducedWord)> {
        self.slots
            .iter()
            .map(|(&(i, j, g), x)| (&self.words[i], &self.words[j], g, x))
    }
}

/// Depth of the portraits used to shortlist candidate targets. Equality is
/// always confirmed with the word problem.
const FILTER_DEPTH: usize = 6;

pub fn build_base_conj_table(tables: &QuotientTables) -> Result<BaseConjTable> {
    let words = small_norm_words(&NormWeights::exact());
    debug_assert!(words.iter().all(|w| w.len() <= SMALL_NORM_MAX_LEN));
    let index: HashMap<ReducedWord, usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let sol = solve_with(tables, &words)?;
    let n = words.len();

    // open[j] lists the (i, g) slots still missing for target v = words[j]
    let mut open: Vec<HashSet<(usize, CosetId)>> = vec![HashSet::new(); n];
    for i in 0..n {
        for (j, open_j) in open.iter_mut().enumerate() {
            open_j.extend(sol.q_between_inputs(i, j).iter().map(|g| (i, g)));
        }
    }
    let mut remaining: usize = open.iter().map(|o| o.len()).sum();

    let act = DepthAction::new(FILTER_DEPTH);
    let portraits: Vec<Portrait> = words.iter().map(|w| act.of_word(w)).collect();
    let mut by_portrait: HashMap<&Portrait, Vec<usize>> = HashMap::new();
    for (i, p) in portraits.iter().enumerate() {
        by_portrait.entry(p).or_default().push(i);
    }

    let mut slots = HashMap::new();
    let mut max_witness_len = 0;
    let mut layer: Vec<(ReducedWord, Portrait)> =
        vec![(ReducedWord::identity(), Portrait::identity(FILTER_DEPTH))];
    let mut len = 0;
    while remaining > 0 {
        if len > SANDWICH_MAX_LEN {
            return Err(Error::BaseIncomplete {
                missing: remaining,
                max_len: SANDWICH_MAX_LEN,
            });
        }
        for (x, px) in &layer {
            let g = tables.coset(x);
            let px_inv = px.inverse();
            for j in 0..n {
                if open[j].is_empty() {
                    continue;
                }
                let py = px_inv.compose(&portraits[j]).compose(px);
                let Some(cands) = by_portrait.get(&py) else {
                    continue;
                };
                let mut y: Option<ReducedWord> = None;
                for &i in cands {
                    if !open[j].contains(&(i, g)) {
                        continue;
                    }
                    let y = y.get_or_insert_with(|| words[j].conjugate_by(x));
                    if equal(&words[i], y) {
                        open[j].remove(&(i, g));
                        remaining -= 1;
                        max_witness_len = len;
                        slots.insert((i, j, g), x.clone());
                    }
                }
            }
        }
        let parents: HashMap<&ReducedWord, &Portrait> = layer.iter().map(|(x, p)| (x, p)).collect();
        let prefixes: Vec<ReducedWord> = layer.iter().map(|(x, _)| x.clone()).collect();
        let next: Vec<(ReducedWord, Portrait)> = extend_reduced(&prefixes)
            .into_iter()
            .map(|x| {
                let (last, prefix) = x.letters().split_last().expect("non-empty");
                let p = parents[&ReducedWord::from_reduced(prefix.to_vec())]
                    .compose(act.generator(*last));
                (x, p)
            })
            .collect();
        layer = next;
        len += 1;
    }
    Ok(BaseConjTable {
        words,
        index,
        slots,
        max_witness_len,
    })
}

/// Which branch of the splitting produced a conjugator.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Branch {
    Trivial,
    Base,
    /// `u, v` in the stabilizer, `x` in the stabilizer.
    EvenStraight,
    /// `u, v` in the stabilizer, `x` outside it.
    EvenCrossed,
    /// `u, v` outside the stabilizer, `x` in it.
    OddStraight,
    /// `u, v` and `x` outside the stabilizer.
    OddCrossed,
}

/// One recursion step: the pair sizes, the longest conjugator it was built
/// from, and the result length.
#[derive(Copy, Clone, Debug)]
pub struct LevelRecord {
    pub branch: Branch,
    pub u_len: usize,
    pub v_len: usize,
    pub child_len: usize,
    pub x_len: usize,
}

impl LevelRecord {
    /// `4 L + 4(|u| + |v|) + 11`.
    pub fn bound(&self) -> usize {
        4 * self.child_len + 4 * (self.u_len + self.v_len) + 11
    }

    pub fn within_bound(&self) -> bool {
        matches!(self.branch, Branch::Trivial | Branch::Base) || self.x_len <= self.bound()
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchTrace {
    pub levels: Vec<LevelRecord>,
    pub lifts: Vec<LiftRecord>,
}

impl SearchTrace {
    pub fn all_within_bounds(&self) -> bool {
        self.levels.iter().all(LevelRecord::within_bound)
            && self.lifts.iter().all(LiftRecord::within_bound)
    }
}

/// Recursive conjugator construction over a solved universe.
pub struct ConjugatorSearch<'q> {
    sol: Solution<'q>,
    base: &'q BaseConjTable,
    memo: HashMap<(RecordId, RecordId, CosetId), ReducedWord>,
    trace: SearchTrace,
}

impl<'q> ConjugatorSearch<'q> {
    pub fn new(
        tables: &'q QuotientTables,
        base: &'q BaseConjTable,
        u: &ReducedWord,
        v: &ReducedWord,
    ) -> Self {
        let sol = solve_with(tables, &[u.clone(), v.clone()])
            .expect("conjugacy table row exceeded its capacity");
        ConjugatorSearch {
            sol,
            base,
            memo: HashMap::new(),
            trace: SearchTrace::default(),
        }
    }

    pub fn trace(&self) -> &SearchTrace {
        &self.trace
    }

    pub fn into_trace(self) -> SearchTrace {
        self.trace
    }

    /// `Q(u, v)` for the two words the search was built for.
    pub fn q(&self) -> CosetSet {
        self.sol.q_between_inputs(0, 1)
    }

    /// Conjugator in coset `g` (or any coset when `None`), absent when the
    /// words are not conjugate or `g ∉ Q(u, v)`.
    pub fn run(&mut self, g: Option<CosetId>) -> Option<ReducedWord> {
        let q = self.q();
        let g = match g {
            Some(g) if q.contains(g) => g,
            Some(_) => return None,
            None => q.first()?,
        };
        let ids = self.sol.input_ids();
        let (u, v) = (ids[0], ids[1]);
        Some(self.find(u, v, g))
    }

    fn word(&self, id: RecordId) -> &ReducedWord {
        &self.sol.table().record(id).word
    }

    fn q_set(&self, x: RecordId, y: RecordId) -> CosetSet {
        self.sol.table().q_set(x, y)
    }

    fn lift(&mut self, x0: &ReducedWord, x1: &ReducedWord) -> ReducedWord {
        let tables = self.sol.table().tables();
        let (x, rec) = lift_word_with(tables, x0, x1).expect("coset pair lies in L");
        self.trace.lifts.push(rec);
        x
    }

    fn is_small(w: &ReducedWord) -> bool {
        w.len() <= SMALL_NORM_MAX_LEN && norm(w) < CORE_NORM
    }

    /// `x` with `u = x⁻¹ v x` and coset `g`, given `g ∈ Q(u, v)`.
    fn find(&mut self, u: RecordId, v: RecordId, g: CosetId) -> ReducedWord {
        if let Some(x) = self.memo.get(&(u, v, g)) {
            return x.clone();
        }
        let (uw, vw) = (self.word(u).clone(), self.word(v).clone());
        let (x, branch, child_len) = if u == v && g == CosetId::IDENTITY {
            (ReducedWord::identity(), Branch::Trivial, 0)
        } else if Self::is_small(&uw) && Self::is_small(&vw) {
            let x = self
                .base
                .get(&uw, &vw, g)
                .unwrap_or_else(|| panic!("no base conjugator for ({uw}, {vw}, {g})"))
                .clone();
            (x, Branch::Base, 0)
        } else {
            self.split(u, v, g, &uw, &vw)
        };
        self.trace.levels.push(LevelRecord {
            branch,
            u_len: uw.len(),
            v_len: vw.len(),
            child_len,
            x_len: x.len(),
        });
        self.memo.insert((u, v, g), x.clone());
        x
    }

    fn split(
        &mut self,
        u: RecordId,
        v: RecordId,
        g: CosetId,
        uw: &ReducedWord,
        vw: &ReducedWord,
    ) -> (ReducedWord, Branch, usize) {
        let t = self.sol.table().tables();
        let a = ReducedWord::letter(Letter::A);
        let (uc, vc) = (
            self.sol.table().record(u).children,
            self.sol.table().record(v).children,
        );
        match (uc, vc) {
            (Children::Pair(u0, u1), Children::Pair(v0, v1)) => {
                let pick = |s0: CosetSet, s1: CosetSet, target: CosetId| {
                    s0.iter()
                        .flat_map(|g0| s1.iter().map(move |g1| (g0, g1)))
                        .find(|&(g0, g1)| t.lift(g0, g1) == Some(target))
                };
                if let Some((g0, g1)) = pick(self.q_set(u0, v0), self.q_set(u1, v1), g) {
                    let x0 = self.find(u0, v0, g0);
                    let x1 = self.find(u1, v1, g1);
                    let x = self.lift(&x0, &x1);
                    return (x, Branch::EvenStraight, x0.len().max(x1.len()));
                }
                let untwisted = t.mul(g, t.a_coset());
                let (g0, g1) = pick(self.q_set(u1, v0), self.q_set(u0, v1), untwisted)
                    .unwrap_or_else(|| panic!("{g} is not in Q({uw}, {vw})"));
                let y0 = self.find(u1, v0, g0);
                let y1 = self.find(u0, v1, g1);
                let x = self.lift(&y0, &y1).mul(&a);
                (x, Branch::EvenCrossed, y0.len().max(y1.len()))
            }
            (
                Children::Product {
                    prod: up,
                    right: u1c,
                    ..
                },
                Children::Product {
                    prod: vp,
                    left: v0c,
                    right: v1c,
                    ..
                },
            ) => {
                let (_, u1) = sections(uw);
                let (v0, v1) = sections(vw);
                let u1_inv = t.inv(u1c);
                let v0_inv = t.inv(v0c);
                for h in self.q_set(up, vp).iter() {
                    if t.lift(h, t.mul(t.mul(v1c, h), u1_inv)) == Some(g) {
                        let y = self.find(up, vp, h);
                        let x1 = ReducedWord::product([&v1, &y, &u1.inverse()]);
                        let x = self.lift(&y, &x1);
                        return (x, Branch::OddStraight, y.len());
                    }
                    if t.lift(t.mul(h, u1_inv), t.mul(v0_inv, h))
                        .map(|x| t.mul(x, t.a_coset()))
                        == Some(g)
                    {
                        let y = self.find(up, vp, h);
                        let z0 = y.mul(&u1.inverse());
                        let z1 = v0.inverse().mul(&y);
                        let x = self.lift(&z0, &z1).mul(&a);
                        return (x, Branch::OddCrossed, y.len());
                    }
                }
                panic!("{g} is not in Q({uw}, {vw})")
            }
            _ => panic!("{uw} and {vw} have different parity"),
        }
    }
}

/// Conjugator `x` with `u = x⁻¹ v x`, in coset `g` when given, together
/// with the sizes met along the recursion.
pub fn find_conjugator_traced(
    u: &ReducedWord,
    v: &ReducedWord,
    g: Option<CosetId>,
) -> (Option<ReducedWord>, SearchTrace) {
    let tables = QuotientTables::global();
    let mut search = ConjugatorSearch::new(tables, BaseConjTable::global(), u, v);
    let x = search.run(g);
    if let Some(x) = &x {
        assert!(
            equal(u, &v.conjugate_by(x)),
            "{x} does not conjugate {v} to {u}"
        );
        if let Some(g) = g {
            assert_eq!(tables.coset(x), g, "{x} is in the wrong coset");
        }
    }
    (x, search.into_trace())
}

pub fn find_conjugator(
    u: &ReducedWord,
    v: &ReducedWord,
    g: Option<CosetId>,
) -> Option<ReducedWord> {
    find_conjugator_traced(u, v, g).0
}
