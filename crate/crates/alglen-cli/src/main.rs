//! `alg`: command-line front end for the alglen library.
//!
//! Exit codes: 0 success, 1 a checked invariant or bound is falsified,
//! 2 usage, parse or resource errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alglen::bounds::{audit, LengthData, SetRun};
use alglen::canonical::{canonical_form, verify_equivalence, CanonicalReport};
use alglen::examples::{by_name, z2n_letter};
use alglen::identities::{
    check_left_sliding, check_mixing, check_right_sliding, classify, random_element, sample_rng, CheckConfig,
    Variant, Verdict,
};
use alglen::io::{parse_algebra, parse_vectors, print_algebra};
use alglen::spans::{
    diff_sequence_capped, exact_algebra_length_budget, DiffSequence, SpanMode, Stabilization,
    DEFAULT_MAX_LEVEL, DEFAULT_SUBSPACE_BUDGET,
};
use alglen::{Algebra, Element, FieldSpec, GeneratorSet, UnityStatus, WordTree};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "alg", version, about = "Length functions of non-associative algebras")]
struct Cli {
    /// Emit a structured JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized identity checks and searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random samples per identity check.
    #[arg(long, global = true, default_value_t = 64)]
    samples: usize,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone, Default)]
struct SetArgs {
    /// `basis`, or comma-separated 1-based basis indices such as `2,3,5`.
    #[arg(long = "set")]
    set: Vec<String>,
    /// File with one coordinate vector per line.
    #[arg(long = "set-file")]
    set_file: Vec<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    General,
    Mixing,
}

#[derive(Copy, Clone, ValueEnum)]
enum VariantArg {
    Alt,
    Flex,
}

#[derive(Subcommand)]
enum Command {
    /// Check every identity class and print verdicts with witnesses.
    Classify { file: PathBuf },
    /// Difference sequence d_0, d_1, ... of a generating set.
    Diffseq {
        file: PathBuf,
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, value_enum, default_value = "general")]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: usize,
    },
    /// Length l(S) of a generating set.
    Length {
        file: PathBuf,
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: usize,
    },
    /// Exact l(A) over a prime field by subspace enumeration.
    ExactLength {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SUBSPACE_BUDGET)]
        budget: u128,
    },
    /// Audit every applicable length bound against computed data.
    Bounds {
        file: PathBuf,
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = DEFAULT_SUBSPACE_BUDGET)]
        budget: u128,
        /// Do not try to compute l(A) exactly.
        #[arg(long)]
        no_exact: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: usize,
    },
    /// Normal form of a word built one letter at a time.
    Canonical {
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Word such as `((1 2) 3)`.
        #[arg(long)]
        word: String,
        /// Optional algebra in which to verify the rewriting.
        file: Option<PathBuf>,
        #[command(flatten)]
        set: SetArgs,
    },
    /// Print an example algebra in the file format.
    Gen {
        /// z2n:N, aflex, aalt, spin:N, matrix:N, chain3, nil3, squaring, hull:NAME, cd:LEVEL
        name: String,
        /// `rational`, `gf:P` or `gfP`.
        #[arg(long, default_value = "rational")]
        field: String,
    },
    /// Lower-bound search for l(A) over random generating sets.
    Search {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        size: usize,
        #[arg(long, default_value_t = 32)]
        tries: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: usize,
    },
    /// Look for a two-sided unity (diagnostic; never applied).
    InferUnity { file: PathBuf },
}

enum CliError {
    Usage(String),
}

impl From<alglen::Error> for CliError {
    fn from(e: alglen::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

struct Outcome {
    text: String,
    json: Value,
    falsified: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, falsified: false }
    }
}

type CliResult = Result<Outcome, CliError>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn load(path: &Path) -> Result<Algebra, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_algebra(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_field(s: &str) -> Result<FieldSpec, CliError> {
    let s = s.trim().to_ascii_lowercase();
    if s == "rational" || s == "q" {
        return Ok(FieldSpec::Rational);
    }
    let p = s.strip_prefix("gf:").or_else(|| s.strip_prefix("gf")).ok_or_else(|| bad_field(&s))?;
    let p: u64 = p.trim().parse().map_err(|_| bad_field(&s))?;
    Ok(FieldSpec::prime(p)?)
}

fn bad_field(s: &str) -> CliError {
    CliError::Usage(format!("bad field '{s}': expected rational or gf:P"))
}

struct NamedSet {
    label: String,
    set: GeneratorSet,
}

fn parse_set_spec(alg: &Algebra, spec: &str) -> Result<NamedSet, CliError> {
    let spec = spec.trim();
    if spec == "basis" {
        return Ok(NamedSet { label: "basis".into(), set: GeneratorSet::full_basis(alg) });
    }
    let idx: Vec<usize> = spec
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("bad set '{spec}'"))))
        .collect::<Result<_, _>>()?;
    let label = format!("{{{}}}", idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
    Ok(NamedSet { label, set: GeneratorSet::from_basis_indices(alg, &idx)? })
}

fn gather_sets(alg: &Algebra, args: &SetArgs) -> Result<Vec<NamedSet>, CliError> {
    let mut out = Vec::new();
    for s in &args.set {
        out.push(parse_set_spec(alg, s)?);
    }
    for p in &args.set_file {
        let text = fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
        let v = parse_vectors(&text, alg.field(), alg.dim())
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
        let label = format!("file:{}", p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default());
        out.push(NamedSet { label, set: GeneratorSet::new(v) });
    }
    Ok(out)
}

/// Exactly one set, `basis` when none is given.
fn single_set(alg: &Algebra, args: &SetArgs) -> Result<NamedSet, CliError> {
    let mut sets = gather_sets(alg, args)?;
    match sets.len() {
        0 => Ok(NamedSet { label: "basis".into(), set: GeneratorSet::full_basis(alg) }),
        1 => Ok(sets.pop().expect("one set")),
        _ => Err(CliError::Usage("give exactly one of --set / --set-file".into())),
    }
}

fn stab_name(s: Stabilization) -> &'static str {
    match s {
        Stabilization::MixingCriterion => "first zero difference (mixing criterion)",
        Stabilization::ClosureCriterion => "closure of the span under multiplication",
    }
}

fn pretty_elements(alg: &Algebra, els: &[Element]) -> String {
    els.iter().map(|e| e.pretty(alg.labels())).collect::<Vec<_>>().join(", ")
}

fn verdict_lines(alg: &Algebra, name: &str, v: &Verdict, out: &mut String) {
    out.push_str(&format!("{name:<30} {}\n", v.label()));
    match v {
        Verdict::Fails { witness } => {
            out.push_str(&format!(
                "{:<30}   at ({}) -> {}\n",
                "",
                pretty_elements(alg, &witness.elements),
                witness.value.pretty(alg.labels())
            ));
        }
        Verdict::HoldsRandomized { caveat: Some(c), .. } => {
            out.push_str(&format!("{:<30}   note: {c}\n", ""));
        }
        _ => {}
    }
}

fn cmd_classify(cli: &Cli, file: &Path) -> CliResult {
    let alg = load(file)?;
    let cfg = CheckConfig { seed: cli.seed, samples: cli.samples };
    let r = classify(&alg, &cfg);
    let mut text = format!("field {}, dim {}, seed {}, samples {}\n", r.field, alg.dim(), r.seed, r.samples);
    if let Some(n) = &r.characteristic_note {
        text.push_str(&format!("{n}\n"));
    }
    for (name, v) in r.entries() {
        verdict_lines(&alg, name, v, &mut text);
    }
    if !r.implications_consistent {
        text.push_str("INCONSISTENT: a descending class holds while mixing fails\n");
    }
    Ok(Outcome { text, json: to_value(&r), falsified: !r.implications_consistent })
}

fn seq_json(label: &str, mode: &str, ds: &DiffSequence) -> Value {
    json!({
        "set": label,
        "mode": mode,
        "d": ds.d,
        "length_of_set": ds.length_of_set,
        "stabilized_by": ds.stabilized_by,
        "generating": ds.generating,
    })
}

fn cmd_diffseq(cli: &Cli, file: &Path, set: &SetArgs, mode: ModeArg, max_level: usize) -> CliResult {
    let alg = load(file)?;
    let s = single_set(&alg, set)?;
    let (mode, mode_name) = match mode {
        ModeArg::General => (SpanMode::General, "general"),
        ModeArg::Mixing => {
            let cfg = CheckConfig { seed: cli.seed, samples: cli.samples };
            let ok = check_mixing(&alg, &cfg).holds()
                || check_left_sliding(&alg, &cfg).holds()
                || check_right_sliding(&alg, &cfg).holds();
            if !ok {
                return Err(CliError::Usage(
                    "mixing mode needs a mixing or sliding verdict; this algebra has neither".into(),
                ));
            }
            (SpanMode::Mixing, "mixing")
        }
    };
    let ds = diff_sequence_capped(&alg, &s.set, mode, max_level)?;
    let mut text = format!("S = {}\nd = {:?}\nl(S) = {}\n", s.label, ds.d, ds.length_of_set);
    text.push_str(&format!("stabilized by {}\n", stab_name(ds.stabilized_by)));
    if !ds.generating {
        text.push_str("S does not generate A\n");
    }
    Ok(Outcome::ok(text, seq_json(&s.label, mode_name, &ds)))
}

fn cmd_length(file: &Path, set: &SetArgs, max_level: usize) -> CliResult {
    let alg = load(file)?;
    let s = single_set(&alg, set)?;
    let ds = diff_sequence_capped(&alg, &s.set, SpanMode::General, max_level)?;
    let mut text = format!("l(S) = {}  (S = {})\n", ds.length_of_set, s.label);
    if !ds.generating {
        text.push_str("S does not generate A; the value is the length within the subalgebra it generates\n");
    }
    let j = json!({ "set": s.label, "length": ds.length_of_set, "generating": ds.generating });
    Ok(Outcome::ok(text, j))
}

fn cmd_exact_length(file: &Path, budget: u128) -> CliResult {
    let alg = load(file)?;
    let r = exact_algebra_length_budget(&alg, budget)?;
    let text = format!(
        "l(A) = {}\nwitness S = {}\nd = {:?}\nsubspaces examined: {}, generating: {}\n",
        r.length,
        pretty_elements(&alg, &r.witness.elements),
        r.witness_sequence.d,
        r.subspaces_examined,
        r.generating_subspaces
    );
    let j = json!({
        "length": r.length,
        "witness": r.witness.elements,
        "witness_d": r.witness_sequence.d,
        "subspaces_examined": r.subspaces_examined,
        "generating_subspaces": r.generating_subspaces,
    });
    Ok(Outcome::ok(text, j))
}

/// The full basis, every single basis vector and, for small algebras, every
/// pair of basis vectors.
fn default_sets(alg: &Algebra) -> Result<Vec<NamedSet>, CliError> {
    let n = alg.dim();
    let mut out = vec![NamedSet { label: "basis".into(), set: GeneratorSet::full_basis(alg) }];
    for i in 1..=n {
        out.push(NamedSet { label: format!("{{{i}}}"), set: GeneratorSet::from_basis_indices(alg, &[i])? });
    }
    if n <= 8 {
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(NamedSet {
                    label: format!("{{{i},{j}}}"),
                    set: GeneratorSet::from_basis_indices(alg, &[i, j])?,
                });
            }
        }
    }
    Ok(out)
}

fn cmd_bounds(cli: &Cli, file: &Path, set: &SetArgs, budget: u128, no_exact: bool, max_level: usize) -> CliResult {
    let alg = load(file)?;
    let cfg = CheckConfig { seed: cli.seed, samples: cli.samples };
    let report = classify(&alg, &cfg);
    let mut sets = gather_sets(&alg, set)?;
    if sets.is_empty() {
        sets = default_sets(&alg)?;
    }
    let seqs: Vec<Result<DiffSequence, alglen::Error>> = sets
        .par_iter()
        .map(|s| diff_sequence_capped(&alg, &s.set, SpanMode::General, max_level))
        .collect();
    let mut runs = Vec::new();
    for (s, ds) in sets.into_iter().zip(seqs) {
        runs.push(SetRun { label: s.label, set: s.set, seq: ds? });
    }

    let mut exact_note = None;
    let algebra_length = if no_exact {
        None
    } else if alg.field().modulus().is_none() {
        exact_note = Some("l(A) not computed: field is infinite".to_string());
        None
    } else {
        match exact_algebra_length_budget(&alg, budget) {
            Ok(r) => Some(r.length),
            Err(alglen::Error::ResourceLimit(m)) => {
                exact_note = Some(format!("l(A) not computed: {m}"));
                None
            }
            Err(e) => return Err(e.into()),
        }
    };

    let data = LengthData { sets: runs, algebra_length };
    let br = audit(&alg, &report, &data)?;

    let mut text = String::new();
    text.push_str(&format!("dim A = {}, d_0 = {}\n", alg.dim(), alg.d0()));
    match algebra_length {
        Some(l) => text.push_str(&format!("l(A) = {l}\n")),
        None => {
            if let Some(n) = &exact_note {
                text.push_str(&format!("{n}\n"));
            }
        }
    }
    for r in &data.sets {
        text.push_str(&format!("S = {:<8} d = {:?}  l(S) = {}\n", r.label, r.seq.d, r.seq.length_of_set));
    }
    for e in &br.entries {
        text.push_str(&e.line());
        text.push('\n');
    }
    if br.entries.is_empty() {
        text.push_str("no bound applies: neither descending class holds\n");
    }
    let fails = br.failures().len();
    text.push_str(&format!("{} entries, {} failed\n", br.entries.len(), fails));

    let sets_json: Vec<Value> = data
        .sets
        .iter()
        .map(|r| json!({ "set": r.label, "d": r.seq.d, "length": r.seq.length_of_set, "generating": r.seq.generating }))
        .collect();
    let j = json!({
        "dim": alg.dim(),
        "d0": alg.d0(),
        "algebra_length": algebra_length,
        "algebra_length_note": exact_note,
        "descendingly_flexible": report.descendingly_flexible.holds(),
        "descendingly_alternative": report.descendingly_alternative.holds(),
        "sets": sets_json,
        "entries": br.entries,
        "all_pass": br.all_pass(),
    });
    Ok(Outcome { text, json: j, falsified: !br.all_pass() })
}

fn cmd_canonical(variant: VariantArg, word: &str, file: Option<&Path>, set: &SetArgs) -> CliResult {
    let variant = match variant {
        VariantArg::Alt => Variant::Alt,
        VariantArg::Flex => Variant::Flex,
    };
    let w = WordTree::parse(word)?;
    let c = canonical_form(variant, &w)?;
    let verified = match file {
        None => None,
        Some(p) => {
            let alg = load(p)?;
            let s = single_set(&alg, set)?;
            Some(verify_equivalence(&alg, &s.set, &w, &c)?)
        }
    };
    let r = CanonicalReport::new(&w, &c, verified);
    let sign = if r.sign < 0 { "-" } else { "+" };
    let mut text = format!("{} == {sign}{}  (mod shorter words)\n", r.input, r.word);
    if let Some(s) = r.shape {
        text.push_str(&format!("shape {s}\n"));
    }
    let show = |v: &[Vec<usize>]| {
        v.iter()
            .map(|b| format!("[{}]", b.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")))
            .collect::<Vec<_>>()
            .join(" ")
    };
    text.push_str(&format!("blocks {}\n", show(&r.blocks)));
    text.push_str(&format!("swappable classes {}\n", show(&r.partition)));
    if let Some(v) = verified {
        text.push_str(if v { "verified in the given algebra\n" } else { "NOT verified in the given algebra\n" });
    }
    Ok(Outcome { text, json: to_value(&r), falsified: verified == Some(false) })
}

fn cmd_gen(name: &str, field: &str) -> CliResult {
    let f = parse_field(field)?;
    let alg = by_name(name, f)?;
    let mut text = String::new();
    if let Some(n) = name.strip_prefix("z2n:").and_then(|n| n.parse::<usize>().ok()) {
        let letters: Vec<String> = (1..=n).map(|i| z2n_letter(i).to_string()).collect();
        text.push_str(&format!("# group generators as basis indices: --set {}\n", letters.join(",")));
    }
    text.push_str(&print_algebra(&alg));
    let j = json!({ "name": name, "field": alg.field().to_string(), "text": text });
    Ok(Outcome::ok(text, j))
}

fn cmd_search(cli: &Cli, file: &Path, size: usize, tries: usize, max_level: usize) -> CliResult {
    let alg = load(file)?;
    if size == 0 {
        return Err(CliError::Usage("--size must be positive".into()));
    }
    let results: Vec<Result<(GeneratorSet, DiffSequence), alglen::Error>> = (0..tries)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cli.seed, i as u64);
            let set = GeneratorSet::new((0..size).map(|_| random_element(&alg, &mut rng)).collect());
            let ds = diff_sequence_capped(&alg, &set, SpanMode::General, max_level)?;
            Ok((set, ds))
        })
        .collect();
    let mut generating = 0;
    let mut best: Option<(usize, GeneratorSet, DiffSequence)> = None;
    for (i, r) in results.into_iter().enumerate() {
        let (set, ds) = r?;
        if !ds.generating {
            continue;
        }
        generating += 1;
        if best.as_ref().map_or(true, |(_, _, b)| ds.length_of_set > b.length_of_set) {
            best = Some((i, set, ds));
        }
    }
    let mut text = format!("{tries} random sets of size {size}, {generating} generating\n");
    let j = match &best {
        Some((i, set, ds)) => {
            text.push_str(&format!(
                "l(A) >= {}  (try {i}: S = {}, d = {:?})\n",
                ds.length_of_set,
                pretty_elements(&alg, &set.elements),
                ds.d
            ));
            json!({
                "size": size, "tries": tries, "generating": generating,
                "lower_bound": ds.length_of_set, "best_try": i,
                "best_set": set.elements, "best_d": ds.d,
            })
        }
        None => {
            text.push_str("no generating set found\n");
            json!({ "size": size, "tries": tries, "generating": 0, "lower_bound": null })
        }
    };
    Ok(Outcome::ok(text, j))
}

fn cmd_infer_unity(file: &Path) -> CliResult {
    let alg = load(file)?;
    let declared = match alg.verify_unity() {
        UnityStatus::NonUnital => "none",
        UnityStatus::Verified => "verified",
        UnityStatus::Fails(_) => "fails",
    };
    let inferred = alg.infer_unity();
    let mut text = format!("declared unity: {declared}\n");
    match &inferred {
        Some(e) => text.push_str(&format!("inferred unity: {}\n", e.pretty(alg.labels()))),
        None => text.push_str("inferred unity: none (no two-sided identity)\n"),
    }
    if declared == "none" && inferred.is_some() {
        text.push_str("note: the file does not declare it; lengths are computed as non-unital\n");
    }
    let j = json!({ "declared": declared, "declared_unity": alg.unity(), "inferred": inferred });
    Ok(Outcome::ok(text, j))
}

fn run(cli: &Cli) -> CliResult {
    match &cli.cmd {
        Command::Classify { file } => cmd_classify(cli, file),
        Command::Diffseq { file, set, mode, max_level } => cmd_diffseq(cli, file, set, *mode, *max_level),
        Command::Length { file, set, max_level } => cmd_length(file, set, *max_level),
        Command::ExactLength { file, budget } => cmd_exact_length(file, *budget),
        Command::Bounds { file, set, budget, no_exact, max_level } => {
            cmd_bounds(cli, file, set, *budget, *no_exact, *max_level)
        }
        Command::Canonical { variant, word, file, set } => cmd_canonical(*variant, word, file.as_deref(), set),
        Command::Gen { name, field } => cmd_gen(name, field),
        Command::Search { file, size, tries, max_level } => cmd_search(cli, file, *size, *tries, *max_level),
        Command::InferUnity { file } => cmd_infer_unity(file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
            }
            if out.falsified {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
