//! Linear-time conjugacy: the word universe, the table of conjugacy class
//! representatives, and the decision procedures built on top of it.
//!
//! Every word of the universe is processed once, in shortlex order. A
//! processed word knows its representative `w*` and the set `Q(w, w*)` of
//! cosets of conjugators taking `w*` to `w`. Rows of the table are keyed by
//! the representatives of a word's children, so a new word is compared only
//! against the at most 256 representatives in its row.

use crate::error::{Error, Result};
use crate::ops;
use crate::quotient::{CosetId, CosetSet, QuotientTables};
use crate::trie::{pair_key, single_key, word_key, Trie};
use crate::words::{sections, Letter, ReducedWord};

pub type RecordId = u32;

/// Most representatives a row may hold.
pub const ROW_CAPACITY: usize = 256;

/// The splitting data of a word.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Children {
    /// `w = (w0, w1)` in the first level stabilizer.
    Pair(RecordId, RecordId),
    /// `w = (w0, w1)a`; `prod` is `red(w0 w1)`, `left`/`right` are the cosets of `w0`, `w1`.
    Product {
        prod: RecordId,
        left: CosetId,
        right: CosetId,
    },
}

#[derive(Clone, Debug)]
pub struct WordRecord {
    pub word: ReducedWord,
    pub coset: CosetId,
    pub children: Children,
    /// Set once the word is processed.
    pub rep: Option<RecordId>,
    /// `Q(w, w*)`.
    pub q_to_rep: CosetSet,
}

impl WordRecord {
    pub fn is_processed(&self) -> bool {
        self.rep.is_some()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RowLabel {
    Pair(RecordId, RecordId),
    Single(RecordId),
}

#[derive(Clone, Debug)]
pub struct ConjRow {
    pub label: RowLabel,
    pub entries: Vec<RecordId>,
}

/// The word universe together with the representative table.
pub struct ConjTable<'q> {
    tables: &'q QuotientTables,
    records: Vec<WordRecord>,
    universe: Trie<RecordId>,
    rows: Vec<ConjRow>,
    labels: Trie<usize>,
    processed: bool,
}

const PLACEHOLDER: Children = Children::Pair(RecordId::MAX, RecordId::MAX);

impl<'q> ConjTable<'q> {
    /// A table holding the five seeds `1, a, b, c, d`.
    pub fn new(tables: &'q QuotientTables) -> Self {
        let mut t = ConjTable {
            tables,
            records: Vec::new(),
            universe: Trie::new(),
            rows: Vec::new(),
            labels: Trie::new(),
            processed: false,
        };
        t.add_word(&ReducedWord::identity());
        for x in Letter::ALL {
            t.add_word(&ReducedWord::letter(x));
        }
        t
    }

    pub fn tables(&self) -> &'q QuotientTables {
        self.tables
    }

    fn intern(&mut self, w: ReducedWord) -> (RecordId, bool) {
        let next = self.records.len() as RecordId;
        let (&mut id, fresh) = self.universe.get_or_insert_with(word_key(&w), || next);
        if fresh {
            let coset = self.tables.coset(&w);
            self.records.push(WordRecord {
                word: w,
                coset,
                children: PLACEHOLDER,
                rep: None,
                q_to_rep: CosetSet::EMPTY,
            });
        }
        (id, fresh)
    }

    /// Adds `w` and every label of its splitting tree. Each distinct word is
    /// split once; words already present are not expanded again.
    pub fn add_word(&mut self, w: &ReducedWord) -> RecordId {
        assert!(!self.processed, "universe is frozen once processing starts");
        let (root, fresh) = self.intern(w.clone());
        if !fresh {
            return root;
        }
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            let word = &self.records[id as usize].word;
            let even = word.is_even();
            let (w0, w1) = sections(word);
            let children = if even {
                let (i0, f0) = self.intern(w0);
                let (i1, f1) = self.intern(w1);
                if f0 {
                    stack.push(i0);
                }
                if f1 {
                    stack.push(i1);
                }
                Children::Pair(i0, i1)
            } else {
                let left = self.tables.coset(&w0);
                let right = self.tables.coset(&w1);
                let (prod, f) = self.intern(w0.mul(&w1));
                if f {
                    stack.push(prod);
                }
                Children::Product { prod, left, right }
            };
            self.records[id as usize].children = children;
        }
        root
    }

    pub fn lookup(&self, w: &ReducedWord) -> Option<RecordId> {
        self.universe.get(word_key(w)).copied()
    }

    pub fn record(&self, id: RecordId) -> &WordRecord {
        &self.records[id as usize]
    }

    pub fn records(&self) -> &[WordRecord] {
        &self.records
    }

    pub fn rows(&self) -> &[ConjRow] {
        &self.rows
    }

    pub fn max_row_len(&self) -> usize {
        self.rows.iter().map(|r| r.entries.len()).max().unwrap_or(0)
    }

    /// Universe ids in shortlex order.
    pub fn shortlex_ids(&self) -> Vec<RecordId> {
        let lex: Vec<RecordId> = self.universe.lex_payloads().into_iter().copied().collect();
        let max_len = self.records.iter().map(|r| r.word.len()).max().unwrap_or(0);
        let mut starts = vec![0usize; max_len + 2];
        for r in &self.records {
            starts[r.word.len() + 1] += 1;
        }
        for i in 1..starts.len() {
            starts[i] += starts[i - 1];
        }
        let mut out = vec![0; lex.len()];
        for id in lex {
            ops::tick(1);
            let l = self.records[id as usize].word.len();
            out[starts[l]] = id;
            starts[l] += 1;
        }
        out
    }

    fn rep_of(&self, id: RecordId) -> RecordId {
        self.records[id as usize]
            .rep
            .expect("representative requested before the word was processed")
    }

    fn rep_word(&self, id: RecordId) -> &ReducedWord {
        &self.records[self.rep_of(id) as usize].word
    }

    /// `Q(x, y)` for processed universe words, transported through their
    /// common representative: `Q(y, r)⁻¹ · Q(x, r)`, empty when the
    /// representatives differ.
    pub fn q_set(&self, x: RecordId, y: RecordId) -> CosetSet {
        let (rx, ry) = (self.rep_of(x), self.rep_of(y));
        if rx != ry {
            return CosetSet::EMPTY;
        }
        let t = self.tables;
        t.set_product(
            t.set_inverse(self.records[y as usize].q_to_rep),
            self.records[x as usize].q_to_rep,
        )
    }

    /// `Q(w, w')` from the splitting data of two words whose children are processed.
    fn q_between(&self, w: RecordId, other: RecordId) -> CosetSet {
        let t = self.tables;
        match (
            self.records[w as usize].children,
            self.records[other as usize].children,
        ) {
            (Children::Pair(w0, w1), Children::Pair(v0, v1)) => t.q_even(
                self.q_set(w0, v0),
                self.q_set(w1, v1),
                self.q_set(w1, v0),
                self.q_set(w0, v1),
            ),
            (
                Children::Product {
                    prod: wp,
                    left: w0,
                    right: w1,
                },
                Children::Product {
                    prod: vp,
                    left: v0,
                    right: v1,
                },
            ) => t.q_odd(self.q_set(wp, vp), [w0, w1, v0, v1]),
            _ => CosetSet::EMPTY,
        }
    }

    fn install_seeds(&mut self) {
        let base = &self.tables.base_q;
        // records 0..5 are 1, a, b, c, d
        let seed_q = [
            base.identity,
            base.of_letter(Letter::A),
            base.of_letter(Letter::B),
            base.of_letter(Letter::C),
            base.of_letter(Letter::D),
        ];
        for (id, q) in seed_q.into_iter().enumerate() {
            let r = &mut self.records[id];
            r.rep = Some(id as RecordId);
            r.q_to_rep = q;
        }
        let (e, a, b, c, d) = (0, 1, 2, 3, 4);
        let initial = [
            (RowLabel::Pair(e, e), e),
            (RowLabel::Single(e), a),
            (RowLabel::Pair(a, c), b),
            (RowLabel::Pair(a, d), c),
            (RowLabel::Pair(e, b), d),
        ];
        for (label, entry) in initial {
            debug_assert_eq!(self.label_of(entry), label);
            self.push_row(label, entry);
        }
    }

    fn label_of(&self, id: RecordId) -> RowLabel {
        match self.records[id as usize].children {
            Children::Pair(i0, i1) => RowLabel::Pair(self.rep_of(i0), self.rep_of(i1)),
            Children::Product { prod, .. } => RowLabel::Single(self.rep_of(prod)),
        }
    }

    fn find_row(&self, label: RowLabel) -> Option<usize> {
        let word = |id: RecordId| &self.records[id as usize].word;
        match label {
            RowLabel::Pair(r0, r1) => self
                .labels
                .get(pair_key(word(r0), word(r1)))
                .or_else(|| self.labels.get(pair_key(word(r1), word(r0))))
                .copied(),
            RowLabel::Single(r) => self.labels.get(single_key(word(r))).copied(),
        }
    }

    fn push_row(&mut self, label: RowLabel, entry: RecordId) {
        let row = self.rows.len();
        let words = &self.records;
        let word = |id: RecordId| &words[id as usize].word;
        let prev = match label {
            RowLabel::Pair(r0, r1) => self.labels.insert(pair_key(word(r0), word(r1)), row),
            RowLabel::Single(r) => self.labels.insert(single_key(word(r)), row),
        };
        debug_assert!(prev.is_none());
        self.rows.push(ConjRow {
            label,
            entries: vec![entry],
        });
    }

    /// Processes one word whose children are already processed.
    fn process_word(&mut self, id: RecordId) -> Result<()> {
        let label = self.label_of(id);
        match self.find_row(label) {
            Some(row) => {
                for k in 0..self.rows[row].entries.len() {
                    let other = self.rows[row].entries[k];
                    let q = self.q_between(id, other);
                    if !q.is_empty() {
                        let r = &mut self.records[id as usize];
                        r.rep = Some(other);
                        r.q_to_rep = q;
                        return Ok(());
                    }
                }
                if self.rows[row].entries.len() >= ROW_CAPACITY {
                    return Err(Error::CapacityViolation);
                }
                self.rows[row].entries.push(id);
            }
            None => self.push_row(label, id),
        }
        self.records[id as usize].rep = Some(id);
        let q = self.q_between(id, id);
        debug_assert!(q.contains(CosetId::IDENTITY));
        self.records[id as usize].q_to_rep = q;
        Ok(())
    }

    fn is_processed(&self, id: RecordId) -> bool {
        self.records[id as usize].rep.is_some()
    }

    /// Processes `id`, first processing the product chain below it when the
    /// chain holds unprocessed words of the same length.
    fn process_with_chain(&mut self, id: RecordId) -> Result<()> {
        let mut stack = [id; 3];
        let mut depth = 1;
        while depth > 0 {
            let top = stack[depth - 1];
            match self.records[top as usize].children {
                Children::Product { prod, .. } if !self.is_processed(prod) => {
                    assert!(
                        depth < 3,
                        "product chain below {} is deeper than three",
                        self.records[id as usize].word
                    );
                    stack[depth] = prod;
                    depth += 1;
                    continue;
                }
                Children::Pair(i0, i1) => {
                    assert!(
                        self.is_processed(i0) && self.is_processed(i1),
                        "children of {} were not processed first",
                        self.records[top as usize].word
                    );
                }
                Children::Product { .. } => {}
            }
            self.process_word(top)?;
            depth -= 1;
        }
        Ok(())
    }

    /// Processes the whole universe. No word may be added afterwards.
    pub fn process_all(&mut self) -> Result<()> {
        if self.processed {
            return Ok(());
        }
        self.processed = true;
        self.install_seeds();
        for id in self.shortlex_ids() {
            if !self.is_processed(id) {
                self.process_with_chain(id)?;
            }
        }
        Ok(())
    }

    pub fn representative(&self, id: RecordId) -> RecordId {
        self.rep_of(id)
    }
}

/// Result of running the table over a list of inputs.
pub struct Solution<'q> {
    table: ConjTable<'q>,
    inputs: Vec<RecordId>,
}

impl<'q> Solution<'q> {
    pub fn table(&self) -> &ConjTable<'q> {
        &self.table
    }

    pub fn input_ids(&self) -> &[RecordId] {
        &self.inputs
    }

    pub fn rep_id(&self, i: usize) -> RecordId {
        self.table.rep_of(self.inputs[i])
    }

    pub fn representative(&self, i: usize) -> &ReducedWord {
        self.table.rep_word(self.inputs[i])
    }

    pub fn q_to_rep(&self, i: usize) -> CosetSet {
        self.table.record(self.inputs[i]).q_to_rep
    }

    /// `Q(u_i, u_j)` for two inputs.
    pub fn q_between_inputs(&self, i: usize, j: usize) -> CosetSet {
        self.table.q_set(self.inputs[i], self.inputs[j])
    }
}

pub fn solve_with<'q>(tables: &'q QuotientTables, inputs: &[ReducedWord]) -> Result<Solution<'q>> {
    let mut table = ConjTable::new(tables);
    let ids: Vec<RecordId> = inputs.iter().map(|w| table.add_word(w)).collect();
    table.process_all()?;
    Ok(Solution { table, inputs: ids })
}

pub fn solve(inputs: &[ReducedWord]) -> Result<Solution<'static>> {
    solve_with(QuotientTables::global(), inputs)
}

fn solved(inputs: &[ReducedWord]) -> Solution<'static> {
    solve(inputs).expect("conjugacy table row exceeded its capacity")
}

pub fn are_conjugate(u: &ReducedWord, v: &ReducedWord) -> bool {
    let s = solved(&[u.clone(), v.clone()]);
    s.rep_id(0) == s.rep_id(1)
}

/// `Q(u, v)`: cosets of the `x` with `u = x⁻¹ v x`.
pub fn q_set(u: &ReducedWord, v: &ReducedWord) -> CosetSet {
    solved(&[u.clone(), v.clone()]).q_between_inputs(0, 1)
}

/// First pair `(i, j)`, `i < j`, of conjugate inputs: smallest `j`, then
/// the earliest `i` sharing its representative.
pub fn conjugate_pairs(inputs: &[ReducedWord]) -> Option<(usize, usize)> {
    let s = solved(inputs);
    let mut seen: Trie<usize> = Trie::new();
    for j in 0..inputs.len() {
        if let Some(&i) = seen.insert(word_key(s.representative(j)), j) {
            return Some((i, j));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(s).unwrap()
    }

    fn words(ss: &[&str]) -> Vec<ReducedWord> {
        ss.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn universe_examples() {
        let t = QuotientTables::global();
        let table = ConjTable::new(t);
        let ids = table.shortlex_ids();
        let got: Vec<String> = ids
            .iter()
            .map(|&i| table.record(i).word.to_string())
            .collect();
        assert_eq!(got, ["1", "a", "b", "c", "d"]);

        let mut table = ConjTable::new(t);
        table.add_word(&w("aba"));
        let got: Vec<String> = table
            .shortlex_ids()
            .iter()
            .map(|&i| table.record(i).word.to_string())
            .collect();
        assert_eq!(got, ["1", "a", "b", "c", "d", "aba"]);

        let mut table = ConjTable::new(t);
        let x = table.add_word(&w("b"));
        let y = table.add_word(&w("b"));
        assert_eq!(x, y);
        assert_eq!(table.records().len(), 5);
    }

    #[test]
    fn initial_table() {
        let mut table = ConjTable::new(QuotientTables::global());
        table.process_all().unwrap();
        assert_eq!(table.rows().len(), 5);
        let labels: Vec<RowLabel> = table.rows().iter().map(|r| r.label).collect();
        assert_eq!(
            labels,
            vec![
                RowLabel::Pair(0, 0),
                RowLabel::Single(0),
                RowLabel::Pair(1, 3),
                RowLabel::Pair(1, 4),
                RowLabel::Pair(0, 2),
            ]
        );
        for id in 0..5 {
            assert_eq!(table.representative(id), id);
        }
    }

    #[test]
    fn processing_examples() {
        let s = solve(&words(&["b", "aba"])).unwrap();
        assert_eq!(s.representative(0), &w("b"));
        assert_eq!(s.rep_id(0), s.rep_id(1));
        let q = s.q_between_inputs(1, 0);
        assert!(!q.is_empty());
        // each processed word that is its own representative has 1 ∈ Q(w, w)
        for r in s.table().records() {
            if r.rep == s.table().lookup(&r.word) {
                assert!(r.q_to_rep.contains(CosetId::IDENTITY));
            }
        }
    }

    #[test]
    fn decision_examples() {
        assert!(are_conjugate(&w("b"), &w("aba")));
        assert!(!are_conjugate(&w("b"), &w("c")));
        assert!(!are_conjugate(&w("1"), &w("a")));
        let big = w("abacabadacabadab");
        assert!(are_conjugate(&big, &big));
        assert!(are_conjugate(&big, &big.conjugate_by(&w("dabac"))));
    }

    #[test]
    fn q_set_examples() {
        let t = QuotientTables::global();
        let u = w("abacad");
        assert!(q_set(&u, &u).contains(CosetId::IDENTITY));
        assert!(q_set(&w("b"), &w("c")).is_empty());
        // b = a⁻¹ (aba) a
        assert!(q_set(&w("b"), &w("aba")).contains(t.coset(&w("a"))));
    }

    #[test]
    fn pairs_examples() {
        assert_eq!(conjugate_pairs(&words(&["b", "c", "aba"])), Some((0, 2)));
        assert_eq!(conjugate_pairs(&words(&["b", "c", "d"])), None);
        assert_eq!(conjugate_pairs(&words(&["abab"])), None);
        assert_eq!(conjugate_pairs(&words(&["ab", "ba", "ab"])), Some((0, 1)));
    }
}
