//! The `grig` command line.

use std::io::Write;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use grigorchuk::engine::solve_with;
use grigorchuk::quotient::DEFAULT_MAX_DEPTH;
use grigorchuk::search::{find_conjugator_traced, Branch, SearchTrace};
use grigorchuk::sptree::{build_tree, small_norm_words, SplitTree, TreeStats};
use grigorchuk::words::{split_children, NormWeights};
use grigorchuk::{equal, CosetId, CosetSet, QuotientTables, ReducedWord};

#[derive(Parser, Debug)]
#[command(
    name = "grig",
    version,
    about = "Word and conjugacy problems in the first Grigorchuk group"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,

    /// Depth cap for building the finite quotient.
    #[arg(long, global = true, env = "GRIG_MAX_DEPTH")]
    max_depth: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the reduced form of a word.
    Reduce { word: String },
    /// Print the norm of a word.
    Norm {
        word: String,
        /// Use the 4-digit weights 1.7559, 2, 1.288, 0.712.
        #[arg(long)]
        printed: bool,
    },
    /// Decide whether two words are the same element.
    Equal { u: String, v: String },
    /// Decide whether two words are conjugate.
    Conj { u: String, v: String },
    /// Find the first conjugate pair in a file of words.
    Pairs { file: std::path::PathBuf },
    /// Find x with u = x⁻¹ v x.
    Conjugator {
        u: String,
        v: String,
        /// Require the conjugator to lie in this coset.
        #[arg(long)]
        coset: Option<u8>,
        /// Re-check the answer and report the length bound ratio.
        #[arg(long)]
        verify: bool,
    },
    /// Print the splitting tree of a word.
    Tree {
        word: String,
        #[arg(long)]
        stats: bool,
    },
    /// List all words of norm below 9 with their norms and descendants.
    Table9 {
        /// Use the exact weights instead of the 4-digit ones.
        #[arg(long)]
        exact: bool,
    },
    /// Summarize the finite quotient.
    Quotient {
        /// Print every table.
        #[arg(long)]
        dump: bool,
    },
    /// Print every table of the finite quotient.
    QuotientDump,
}

/// Runs the command line on `argv` (program name first) and returns the
/// exit code: 0 for YES or success, 1 for NO, 2 for errors.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

type CmdResult = Result<i32, String>;

fn parse(text: &str) -> Result<ReducedWord, String> {
    ReducedWord::parse(text).map_err(|e| format!("{text:?}: {e}"))
}

fn tables(cli: &Cli) -> Result<&'static QuotientTables, String> {
    match cli.max_depth {
        None | Some(DEFAULT_MAX_DEPTH) => Ok(QuotientTables::global()),
        Some(depth) => {
            let t = QuotientTables::build(depth).map_err(|e| e.to_string())?;
            Ok(Box::leak(Box::new(t)))
        }
    }
}

fn emit(out: &mut dyn Write, cli: &Cli, text: &str, value: Value) -> Result<(), String> {
    let r = if cli.json {
        writeln!(out, "{value}")
    } else {
        writeln!(out, "{text}")
    };
    r.map_err(|e| e.to_string())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

fn cosets(s: CosetSet) -> Vec<u8> {
    s.iter().map(|g| g.0).collect()
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Reduce { word } => {
            let w = parse(word)?;
            emit(
                out,
                cli,
                &w.to_string(),
                json!({ "word": w.to_string(), "length": w.len() }),
            )?;
            Ok(0)
        }
        Command::Norm { word, printed } => {
            let w = parse(word)?;
            let weights = if *printed {
                NormWeights::printed()
            } else {
                NormWeights::exact()
            };
            let n = weights.norm(&w);
            emit(
                out,
                cli,
                &format!("{n:.4}"),
                json!({ "word": w.to_string(), "norm": n }),
            )?;
            Ok(0)
        }
        Command::Equal { u, v } => {
            let (u, v) = (parse(u)?, parse(v)?);
            let b = equal(&u, &v);
            emit(out, cli, yes_no(b), json!({ "equal": b }))?;
            Ok(if b { 0 } else { 1 })
        }
        Command::Conj { u, v } => {
            let (u, v) = (parse(u)?, parse(v)?);
            let sol = solve_with(tables(cli)?, &[u, v]).map_err(|e| e.to_string())?;
            let q = sol.q_between_inputs(0, 1);
            let b = !q.is_empty();
            emit(
                out,
                cli,
                yes_no(b),
                json!({ "conjugate": b, "q": cosets(q) }),
            )?;
            Ok(if b { 0 } else { 1 })
        }
        Command::Pairs { file } => pairs(cli, file, out),
        Command::Conjugator {
            u,
            v,
            coset,
            verify,
        } => {
            let (u, v) = (parse(u)?, parse(v)?);
            if let Some(g) = coset {
                if usize::from(*g) >= grigorchuk::quotient::ORDER {
                    return Err(format!("coset {g} out of range 0..16"));
                }
            }
            let (x, trace) = find_conjugator_traced(&u, &v, coset.map(CosetId));
            conjugator(cli, out, &u, &v, x, &trace, *verify)
        }
        Command::Tree { word, stats } => {
            let w = parse(word)?;
            if *stats {
                tree_stats(cli, out, &w)
            } else {
                tree(cli, out, &build_tree(&w))
            }
        }
        Command::Table9 { exact } => {
            let weights = if *exact {
                NormWeights::exact()
            } else {
                NormWeights::printed()
            };
            table9(cli, out, &weights)
        }
        Command::Quotient { dump: true } | Command::QuotientDump => {
            let t = tables(cli)?;
            write!(out, "{}", t.dump_tsv()).map_err(|e| e.to_string())?;
            Ok(0)
        }
        Command::Quotient { dump: false } => {
            let t = tables(cli)?;
            let l = t.l_pairs().len();
            let text = format!(
                "order\t{}\nstabilizer_depth\t{}\ntruncated_order\t{}\nlift_pairs\t{l}",
                grigorchuk::quotient::ORDER,
                t.stabilizer_depth,
                t.truncated_order
            );
            let value = json!({
                "order": grigorchuk::quotient::ORDER,
                "stabilizer_depth": t.stabilizer_depth,
                "truncated_order": t.truncated_order,
                "lift_pairs": l,
            });
            emit(out, cli, &text, value)?;
            Ok(0)
        }
    }
}

fn pairs(cli: &Cli, file: &std::path::Path, out: &mut dyn Write) -> CmdResult {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    let mut words = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        words.push(parse(line)?);
    }
    let sol = solve_with(tables(cli)?, &words).map_err(|e| e.to_string())?;
    let mut seen = std::collections::HashMap::new();
    let found = (0..words.len()).find_map(|j| seen.insert(sol.rep_id(j), j).map(|i| (i, j)));
    match found {
        Some((i, j)) => {
            let text = format!("{i} {j}\t{}\t{}", words[i], words[j]);
            emit(
                out,
                cli,
                &text,
                json!({ "pair": [i, j], "words": [words[i].to_string(), words[j].to_string()] }),
            )?;
            Ok(0)
        }
        None => {
            emit(out, cli, "NONE", json!({ "pair": null }))?;
            Ok(1)
        }
    }
}

fn conjugator(
    cli: &Cli,
    out: &mut dyn Write,
    u: &ReducedWord,
    v: &ReducedWord,
    x: Option<ReducedWord>,
    trace: &SearchTrace,
    verify: bool,
) -> CmdResult {
    let Some(x) = x else {
        emit(out, cli, "NONE", json!({ "conjugator": null }))?;
        return Ok(1);
    };
    if !verify {
        emit(
            out,
            cli,
            &x.to_string(),
            json!({ "conjugator": x.to_string(), "length": x.len() }),
        )?;
        return Ok(0);
    }
    let ok = equal(u, &v.conjugate_by(&x));
    let ratio = trace
        .levels
        .iter()
        .filter(|l| !matches!(l.branch, Branch::Trivial | Branch::Base))
        .map(|l| l.x_len as f64 / l.bound() as f64)
        .fold(0.0, f64::max);
    let text = format!("{x}\nverified\t{}\nbound_ratio\t{ratio:.4}", yes_no(ok));
    let value = json!({
        "conjugator": x.to_string(),
        "length": x.len(),
        "verified": ok,
        "bound_ratio": ratio,
        "levels": trace.levels.len(),
    });
    emit(out, cli, &text, value)?;
    Ok(if ok { 0 } else { 2 })
}

fn tree(cli: &Cli, out: &mut dyn Write, t: &SplitTree) -> CmdResult {
    let mut lines = Vec::new();
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        let n = &t.nodes[v];
        lines.push((n.depth, n.label.to_string(), n.label_norm));
        stack.extend(n.children.iter().rev());
    }
    if cli.json {
        let nodes: Vec<Value> = lines
            .iter()
            .map(|(d, l, n)| json!({ "depth": d, "label": l, "norm": n }))
            .collect();
        writeln!(out, "{}", Value::Array(nodes)).map_err(|e| e.to_string())?;
    } else {
        for (d, l, n) in lines {
            writeln!(out, "{}{l}\t{n:.4}", "  ".repeat(d)).map_err(|e| e.to_string())?;
        }
    }
    Ok(0)
}

fn tree_stats(cli: &Cli, out: &mut dyn Write, w: &ReducedWord) -> CmdResult {
    let s = TreeStats::of(w);
    let text = format!(
        "length\t{}\nnorm\t{:.4}\nvertices\t{}\ntotal_norm\t{:.4}\ntotal_length\t{}\nheight\t{}\ncore_vertices\t{}\ncore_total_norm\t{:.4}",
        s.word_len, s.word_norm, s.vertex_count, s.total_norm, s.total_length, s.height, s.core_vertex_count, s.core_total_norm
    );
    let value = json!({
        "length": s.word_len,
        "norm": s.word_norm,
        "vertices": s.vertex_count,
        "total_norm": s.total_norm,
        "total_length": s.total_length,
        "height": s.height,
        "core_vertices": s.core_vertex_count,
        "core_total_norm": s.core_total_norm,
    });
    emit(out, cli, &text, value)?;
    Ok(0)
}

/// Table notation writes the identity as `ε`.
fn table_word(w: &ReducedWord) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        w.to_string()
    }
}

fn table9(cli: &Cli, out: &mut dyn Write, weights: &NormWeights) -> CmdResult {
    let rows: Vec<(String, f64, Vec<String>)> = small_norm_words(weights)
        .iter()
        .map(|w| {
            let desc = split_children(w).iter().map(table_word).collect();
            (table_word(w), weights.norm(w), desc)
        })
        .collect();
    if cli.json {
        let v: Vec<Value> = rows
            .iter()
            .map(|(w, n, d)| json!({ "word": w, "norm": n, "descendants": d }))
            .collect();
        writeln!(out, "{}", Value::Array(v)).map_err(|e| e.to_string())?;
        return Ok(0);
    }
    writeln!(out, "word\tnorm\tdescendants").map_err(|e| e.to_string())?;
    for (w, n, d) in rows {
        writeln!(out, "{w}\t{n:.4}\t{}", d.join(", ")).map_err(|e| e.to_string())?;
    }
    Ok(0)
}
