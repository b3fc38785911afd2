//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any failure.

mod common;

use std::cell::Cell;
use std::collections::{HashMap, HashSet};
use std::time::Instant;

use common::{random_log_uniform, random_reduced, random_up_to, w};
use grigorchuk::engine::{are_conjugate, conjugate_pairs, solve, Solution};
use grigorchuk::oracle::{brute_conjugator, naive_conjugate, quotient_certifies_nonconjugate};
use grigorchuk::portrait::Portrait;
use grigorchuk::quotient::{reduced_words_up_to, DEFAULT_MAX_DEPTH, ORDER, SANDWICH_MAX_LEN};
use grigorchuk::search::{find_conjugator_traced, Branch};
use grigorchuk::sptree::{build_tree, core_of, small_norm_words, CORE_NORM};
use grigorchuk::words::{norm, sections, split_children, NormWeights};
use grigorchuk::{equal, is_identity, ops, CosetId, Letter, QuotientTables, ReducedWord};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TABLE: &str = include_str!("data/norm9_table.txt");

thread_local! {
    static MAX_ROW: Cell<usize> = const { Cell::new(0) };
    static CAPACITY_ERRORS: Cell<usize> = const { Cell::new(0) };
}

/// `solve` that records the longest row seen.
fn solve_tracked(inputs: &[ReducedWord]) -> Option<Solution<'static>> {
    match solve(inputs) {
        Ok(s) => {
            let m = s.table().max_row_len();
            MAX_ROW.with(|c| c.set(c.get().max(m)));
            Some(s)
        }
        Err(_) => {
            CAPACITY_ERRORS.with(|c| c.set(c.get() + 1));
            None
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn table_word(s: &str) -> ReducedWord {
    if s == "ε" {
        ReducedWord::identity()
    } else {
        w(s)
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut reference: HashMap<ReducedWord, (f64, Vec<ReducedWord>)> = HashMap::new();
    for line in TABLE
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let mut cols = line.split_whitespace();
        let word = table_word(cols.next().unwrap());
        let n: f64 = cols.next().unwrap().parse().unwrap();
        let desc = cols
            .next()
            .map(|d| d.split(',').map(table_word).collect())
            .unwrap_or_default();
        reference.insert(word, (n, desc));
    }
    let mut problems = Vec::new();
    let mut worst_printed: f64 = 0.0;
    let mut worst_exact: f64 = 0.0;
    for (weights, label) in [
        (NormWeights::printed(), "printed"),
        (NormWeights::exact(), "exact"),
    ] {
        let words = small_norm_words(&weights);
        if words.len() != reference.len() {
            problems.push(format!(
                "{label}: {} words, expected {}",
                words.len(),
                reference.len()
            ));
        }
        for u in &words {
            let Some((n, desc)) = reference.get(u) else {
                problems.push(format!("{label}: extra word {u}"));
                continue;
            };
            let err = (weights.norm(u) - n).abs();
            if label == "printed" {
                worst_printed = worst_printed.max(err);
            } else {
                worst_exact = worst_exact.max(err);
            }
            if &split_children(u) != desc {
                problems.push(format!("{label}: descendants of {u}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let abab = split_children(&w("abab")) == vec![w("ca"), w("ac")];
    let dadadad = split_children(&w("dadadad")) == vec![ReducedWord::identity()];
    let cacac = (NormWeights::printed().norm(&w("cacac")) - 7.3758).abs() < 5e-5;
    let pass = problems.is_empty()
        && worst_printed < 5e-5
        && worst_exact < 2e-3
        && abab
        && dadadad
        && cacac
        && elapsed.as_secs_f64() < 1.0;
    outcome(
        pass,
        format!(
            "{} words; max norm error {worst_printed:.1e} (4-digit weights), {worst_exact:.1e} (exact weights); {} mismatches; {:.3}s",
            reference.len(),
            problems.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let t = match QuotientTables::build(DEFAULT_MAX_DEPTH) {
        Ok(t) => t,
        Err(e) => return outcome(false, format!("build failed: {e}")),
    };
    let elapsed = start.elapsed();
    // order of the group generated by the generator images
    let mut seen = vec![CosetId::IDENTITY];
    let mut i = 0;
    while i < seen.len() {
        for g in t.gen_coset {
            let h = t.mul(seen[i], g);
            if !seen.contains(&h) {
                seen.push(h);
            }
        }
        i += 1;
    }
    let order = seen.len();
    let abab = t.coset(&w("abab")) == CosetId::IDENTITY;
    let single_valued = t.l_pairs().len() == 32;
    let ac = t.lift(t.coset(&w("a")), t.coset(&w("c"))) == Some(t.coset(&w("b")));
    let pass = order == ORDER && abab && single_valued && ac && elapsed.as_secs_f64() < 10.0;
    outcome(
        pass,
        format!(
            "order {order}, stabilizer depth {}, |L| = {}, coset(abab) trivial: {abab}, lift(a, c) = b: {ac}; {:.3}s",
            t.stabilizer_depth,
            t.l_pairs().len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let t = QuotientTables::global();
    let b = &t.base_q;
    let mut pass = b.witness_len <= SANDWICH_MAX_LEN && b.identity.len() == ORDER;
    let mut parts = Vec::new();
    for x in Letter::ALL {
        let i = x.index();
        let ok = b.lower[i] == b.upper[i]
            && b.generators[i] == b.upper[i]
            && b.generators[i].contains(CosetId::IDENTITY);
        pass &= ok;
        parts.push(format!("Q({0},{0}) = {1}", x.to_char(), b.generators[i]));
    }
    outcome(
        pass,
        format!(
            "{}; closed at witness length {}",
            parts.join(", "),
            b.witness_len
        ),
    )
}

fn criterion_4() -> Outcome {
    let words = reduced_words_up_to(6);
    solve_tracked(&words);
    let mut disagreements = 0;
    let mut pairs = 0;
    for u in &words {
        for v in &words {
            pairs += 1;
            if are_conjugate(u, v) != naive_conjugate(u, v) {
                disagreements += 1;
            }
        }
    }
    let mut rng = rng(4);
    let mut positives_missed = 0;
    for _ in 0..1000 {
        let u = random_up_to(&mut rng, 200);
        let x = random_up_to(&mut rng, 200);
        let v = u.conjugate_by(&x);
        assert!(equal(&v, &x.inverse().mul(&u).mul(&x)));
        let Some(s) = solve_tracked(&[u.clone(), v.clone()]) else {
            positives_missed += 1;
            continue;
        };
        if s.rep_id(0) != s.rep_id(1) {
            positives_missed += 1;
        }
    }
    // witnesses found by exhaustive search are confirmed by the engine
    let mut brute_checked = 0;
    for _ in 0..200 {
        let u = random_up_to(&mut rng, 6);
        let v = random_up_to(&mut rng, 6);
        if brute_conjugator(&u, &v, 4).is_some() {
            brute_checked += 1;
            if !are_conjugate(&u, &v) {
                positives_missed += 1;
            }
        }
    }
    outcome(
        disagreements == 0 && positives_missed == 0,
        format!(
            "{pairs} short pairs, {disagreements} disagreements with the naive recursion; 1000 planted pairs and {brute_checked} exhaustive witnesses, {positives_missed} missed"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = rng(5);
    let samples = 10_000;
    let mut violations: HashMap<&str, usize> = HashMap::new();
    let mut bump = |k: &'static str| *violations.entry(k).or_default() += 1;
    let (mut min_ratio_9, mut min_ratio_200) = (f64::INFINITY, f64::INFINITY);
    let mut worst = [0.0f64; 4];
    let mut total_len = 0;
    for _ in 0..samples {
        let u = random_log_uniform(&mut rng, 10_000);
        total_len += u.len();
        let tree = build_tree(&u);
        let core = core_of(&tree);
        let n = tree.nodes[0].label_norm;
        if n < CORE_NORM && tree.total_norm >= 30.0 {
            bump("small tree norm");
        }
        let ratios = [
            core.total_norm / n,
            core.vertex_count() as f64 / n,
            tree.total_norm / n,
            tree.total_length as f64 / u.len() as f64,
        ];
        for (k, (r, limit)) in ratios.iter().zip([35.0, 4.0, 275.0, 800.0]).enumerate() {
            worst[k] = worst[k].max(*r);
            if *r > limit {
                bump(["core norm", "core vertices", "tree norm", "tree length"][k]);
            }
        }
        for node in &tree.nodes {
            if node.label_norm >= CORE_NORM {
                let (s0, s1) = sections(&node.label);
                let r = node.label_norm / (norm(&s0) + norm(&s1));
                min_ratio_9 = min_ratio_9.min(r);
                if r < 1.03 {
                    bump("contraction at 9");
                }
                if node.label_norm >= 200.0 {
                    min_ratio_200 = min_ratio_200.min(r);
                    if r < 1.22 {
                        bump("contraction at 200");
                    }
                }
            }
            if let Some(p) = node.parent {
                if tree.nodes[p].label.len() < node.label.len() {
                    bump("edge monotonicity");
                }
                let up3 = tree.nodes[p].parent.and_then(|g| tree.nodes[g].parent);
                if let Some(a) = up3 {
                    if tree.nodes[a].label.len() <= node.label.len() {
                        bump("3-step decrease");
                    }
                }
            }
        }
    }
    let total: usize = violations.values().sum();
    outcome(
        total == 0,
        format!(
            "{samples} words, {total_len} letters; min contraction {min_ratio_9:.4} (norm ≥ 9), {min_ratio_200:.4} (norm ≥ 200); worst ratios core norm {:.2}, core vertices {:.3}, tree norm {:.2}, tree length {:.2}; violations {violations:?}",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn criterion_6() -> Outcome {
    let max = MAX_ROW.with(|c| c.get());
    let errors = CAPACITY_ERRORS.with(|c| c.get());
    outcome(
        max <= 256 && errors == 0,
        format!("longest row {max}, capacity errors {errors}"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    type Family = fn(&mut ChaCha8Rng, usize) -> Vec<ReducedWord>;
    let families: [(&str, Family); 3] = [
        ("single word", |r, n| vec![random_reduced(r, n)]),
        ("words of length 100", |r, n| {
            (0..n / 100).map(|_| random_reduced(r, 100)).collect()
        }),
        ("conjugate pairs", |r, n| {
            let mut out = Vec::new();
            let mut total = 0;
            while total < n {
                let v = random_reduced(r, 40);
                let x = random_reduced(r, 30);
                let u = v.conjugate_by(&x);
                total += v.len() + u.len();
                out.push(v);
                out.push(u);
            }
            out
        }),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, make) in families {
        let mut ratios = Vec::new();
        let mut timing = Vec::new();
        for n in [10_000usize, 100_000, 500_000] {
            let small = make(&mut rng, n);
            let large = make(&mut rng, 2 * n);
            let start = Instant::now();
            let (_, ops_small) = ops::measure(|| solve_tracked(&small));
            let t_small = start.elapsed().as_secs_f64();
            let start = Instant::now();
            let (_, ops_large) = ops::measure(|| solve_tracked(&large));
            let t_large = start.elapsed().as_secs_f64();
            let r = ops_large as f64 / ops_small as f64;
            pass &= (1.5..=2.5).contains(&r);
            ratios.push(format!("{r:.3}"));
            timing.push(format!("{:.2}", t_large / t_small));
        }
        parts.push(format!(
            "{name}: ops ratios {} (time ratios {})",
            ratios.join("/"),
            timing.join("/")
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    let t = QuotientTables::global();
    let mut failures = 0;
    let mut lifts = 0;
    let mut levels = 0;
    let mut runs = 0;
    let mut exponent: f64 = 0.0;
    let mut check = |u: &ReducedWord, v: &ReducedWord, g: Option<CosetId>, expect: bool| {
        let (x, trace) = find_conjugator_traced(u, v, g);
        runs += 1;
        lifts += trace.lifts.len();
        levels += trace
            .levels
            .iter()
            .filter(|l| !matches!(l.branch, Branch::Trivial | Branch::Base))
            .count();
        if !trace.all_within_bounds() {
            return false;
        }
        match x {
            None => !expect,
            Some(x) => {
                let n = (u.len() + v.len()) as f64;
                if n > 2.0 && x.len() > 1 {
                    exponent = exponent.max((x.len() as f64).ln() / n.ln());
                }
                expect && equal(u, &v.conjugate_by(&x)) && g.is_none_or(|g| t.coset(&x) == g)
            }
        }
    };
    for (n, count) in [
        (5usize, 30),
        (10, 30),
        (20, 30),
        (50, 30),
        (100, 30),
        (200, 30),
        (500, 10),
        (1000, 5),
    ] {
        for _ in 0..count {
            let v = random_up_to(&mut rng, n);
            let x = random_up_to(&mut rng, n);
            let u = v.conjugate_by(&x);
            if !check(&u, &v, None, true) {
                failures += 1;
            }
            if n <= 50 {
                let s = solve(&[u.clone(), v.clone()]).unwrap();
                for g in s.q_between_inputs(0, 1).iter() {
                    if !check(&u, &v, Some(g), true) {
                        failures += 1;
                    }
                }
            }
            let other = random_up_to(&mut rng, n);
            let expect = are_conjugate(&u, &other);
            if !check(&u, &other, None, expect) {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!(
            "{runs} searches, {levels} recursion steps and {lifts} lifts within bounds, {failures} failures; largest log|x| / log(|u|+|v|) = {exponent:.2} (monitored)"
        ),
    )
}

fn criterion_9() -> Outcome {
    let identities = ["aa", "bb", "cc", "dd", "adadadad"];
    let equalities = [("bc", "d"), ("cd", "b"), ("bd", "c")];
    let unreduced = |s: &str| ReducedWord::reduce(s.chars().map(|c| Letter::from_char(c).unwrap()));
    let mut ok = identities
        .iter()
        .all(|s| is_identity(&unreduced(s)) && is_identity(&w(s)));
    ok &= equalities.iter().all(|(l, r)| equal(&unreduced(l), &w(r)));
    ok &= !is_identity(&w("adad")) && !is_identity(&w("ab"));
    outcome(
        ok,
        "a² = b² = c² = d² = 1, bc = d, cd = b, bd = c, (ad)⁴ = 1",
    )
}

/// Conjugacy classes of the group acting on the first four levels of the
/// tree. Words in different classes there are not conjugate.
struct LevelClasses {
    gens: Vec<Portrait>,
    class_of: HashMap<Portrait, usize>,
}

impl LevelClasses {
    const DEPTH: usize = 4;

    fn new() -> Self {
        let gens: Vec<Portrait> = Letter::ALL
            .iter()
            .map(|&x| Portrait::generator(x, Self::DEPTH))
            .collect();
        let mut elements = vec![Portrait::identity(Self::DEPTH)];
        let mut seen: HashSet<Portrait> = elements.iter().cloned().collect();
        let mut i = 0;
        while i < elements.len() {
            for g in &gens {
                let h = elements[i].compose(g);
                if seen.insert(h.clone()) {
                    elements.push(h);
                }
            }
            i += 1;
        }
        let mut class_of = HashMap::new();
        let mut classes = 0;
        for g in &elements {
            if class_of.contains_key(g) {
                continue;
            }
            for k in &elements {
                class_of.insert(k.inverse().compose(g).compose(k), classes);
            }
            classes += 1;
        }
        LevelClasses { gens, class_of }
    }

    fn class(&self, u: &ReducedWord) -> usize {
        let p = u
            .letters()
            .iter()
            .fold(Portrait::identity(Self::DEPTH), |acc, x| {
                acc.compose(&self.gens[x.index()])
            });
        self.class_of[&p]
    }
}

fn criterion_10() -> Outcome {
    let mut rng = rng(10);
    let classes = LevelClasses::new();
    let mut found = 0;
    let mut sizes = Vec::new();
    for _ in 0..100 {
        let u = random_up_to(&mut rng, 200);
        let v = loop {
            let x = random_up_to(&mut rng, 150);
            let v = u.conjugate_by(&x);
            if v.len() <= 500 {
                break v;
            }
        };
        // fillers from pairwise distinct classes, none shared with u
        let target = rng.gen_range(0..=48);
        let mut used: HashSet<usize> = HashSet::from([classes.class(&u)]);
        let mut list: Vec<ReducedWord> = Vec::new();
        for _ in 0..20_000 {
            if list.len() == target {
                break;
            }
            let f = random_up_to(&mut rng, 500);
            if used.insert(classes.class(&f)) {
                list.push(f);
            }
        }
        let i = rng.gen_range(0..=list.len());
        list.insert(i, u);
        let j = rng.gen_range(i + 1..=list.len());
        list.insert(j, v);
        sizes.push(list.len());
        solve_tracked(&list);
        if conjugate_pairs(&list) == Some((i, j)) {
            found += 1;
        }
    }
    // one word per non-conjugate class of the quotient and a-parity
    let mut seeds: Vec<ReducedWord> = Vec::new();
    for u in reduced_words_up_to(4) {
        if seeds.iter().all(|s| quotient_certifies_nonconjugate(s, &u)) {
            seeds.push(u);
        }
    }
    let mut false_positives = 0;
    for _ in 0..100 {
        let mut list: Vec<ReducedWord> = seeds
            .iter()
            .map(|s| {
                let x = random_up_to(&mut rng, 200);
                s.conjugate_by(&x)
            })
            .collect();
        list.shuffle(&mut rng);
        let keep = rng.gen_range(2..=list.len());
        list.truncate(keep);
        for a in 0..list.len() {
            for b in a + 1..list.len() {
                assert!(quotient_certifies_nonconjugate(&list[a], &list[b]));
            }
        }
        solve_tracked(&list);
        if conjugate_pairs(&list).is_some() {
            false_positives += 1;
        }
    }
    let names: Vec<String> = seeds.iter().map(|s| s.to_string()).collect();
    outcome(
        found == 100 && false_positives == 0,
        format!(
            "planted pair found in {found}/100 lists of {}..{} words; {false_positives}/100 certified lists reported a pair (seeds {})",
            sizes.iter().min().unwrap(),
            sizes.iter().max().unwrap(),
            names.join(" ")
        ),
    )
}

fn main() {
    // capacity is checked last, over every table built by the others
    type Criterion = (usize, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        (1, "norm-9 table reproduction", criterion_1),
        (2, "quotient certification", criterion_2),
        (3, "base Q-set sandwich", criterion_3),
        (4, "oracle agreement", criterion_4),
        (5, "splitting tree invariants", criterion_5),
        (7, "linear scaling", criterion_7),
        (8, "conjugator correctness and length", criterion_8),
        (9, "relations", criterion_9),
        (10, "conjugate pairs", criterion_10),
        (6, "row capacity 256", criterion_6),
    ];
    let mut lines = Vec::new();
    for (n, name, f) in criteria {
        let start = Instant::now();
        let o = f();
        lines.push((n, name, o, start.elapsed().as_secs_f64()));
    }
    lines.sort_by_key(|l| l.0);
    let mut failed = 0;
    for (n, name, o, secs) in &lines {
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {n:>2} {name}: {} [{secs:.2}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        lines.len() - failed,
        lines.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
