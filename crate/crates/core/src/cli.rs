//! Command-line front end. [`run`] takes explicit streams so it can be driven
//! from tests; the binary only wires it to the process.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::delsarte::{
    conjugation_exponent, diagonal_symmetry_group, permutation_symmetries, signed_residue,
    smoothness_check, ExponentMatrix, Verdict, WeightClass,
};
use crate::error::Error;
use crate::hodge::{diagonal_character, faithfulness_check, hodge_numbers};
use crate::obstruction::{
    obstruct, parse_ruleset, verify_certificate, Certificate, MetacyclicGroup, ProblemInstance,
    TraceVerdict,
};
use crate::rh::{action_table, signatures_for_genus_range, GroupTable, DEFAULT_GENUS_CAP};
use crate::search::{search, SearchSpec};

pub const THREADS_ENV: &str = "IJOBSTRUCT_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "ijobstruct",
    version,
    about = "Symmetries, smoothness and Hodge data of Delsarte hypersurfaces, and obstructions to \
             intermediate Jacobians splitting into Jacobians of curves"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for search and rh-oracle (falls back to IJOBSTRUCT_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add the current unix time to the output.
    #[arg(long, global = true)]
    timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MatrixInput {
    /// Inline matrix, e.g. "2 4; 3 1 0; 0 3 1; 1 0 3".
    #[arg(long, short = 'm', conflicts_with = "file")]
    matrix: Option<String>,
    /// Matrix file; standard input when neither this nor --matrix is given.
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Diagonal and permutation symmetries of a Delsarte hypersurface.
    Symmetry {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Exact smoothness check with a singular-point witness.
    Smooth {
        #[command(flatten)]
        input: MatrixInput,
        /// Exit with status 1 unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<ExpectSmooth>,
    },
    /// Primitive Hodge numbers of a smooth degree d hypersurface in P^n.
    Hodge {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'd')]
        d: u32,
    },
    /// Eigenvalue exponents of a diagonal automorphism on the middle Hodge pieces.
    Character {
        #[command(flatten)]
        input: MatrixInput,
        /// Weights, comma separated, e.g. 0,3,-6,21,1.
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long)]
        modulus: u64,
        /// Only the piece H^{n-1-q,q}.
        #[arg(short = 'q')]
        piece: Option<usize>,
    },
    /// Run the obstruction engine and print its certificate.
    Obstruct {
        /// Dimension N of the abelian variety.
        #[arg(long)]
        dim: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        /// Rules to enable, e.g. R1-R7 or R1-R6,R8.
        #[arg(long, default_value = "R1-R7")]
        rules: String,
        /// Do not assume the action is faithful.
        #[arg(long)]
        not_faithful: bool,
        #[arg(long, value_enum)]
        expect: Option<ExpectObstruct>,
    },
    /// Decide which genera admit an action of a small group.
    RhOracle {
        /// Cyclic group of this order.
        #[arg(long, conflicts_with_all = ["p", "q", "r"])]
        cyclic: Option<usize>,
        #[arg(long, requires_all = ["q", "r"])]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        /// A single genus (shorthand for --gmin G --gmax G).
        #[arg(long, conflicts_with_all = ["gmin", "gmax"])]
        genus: Option<u64>,
        #[arg(long, default_value_t = 2)]
        gmin: u64,
        #[arg(long)]
        gmax: Option<u64>,
        /// Largest genus accepted.
        #[arg(long, default_value_t = DEFAULT_GENUS_CAP)]
        genus_cap: u64,
        /// List the admissible signatures instead of deciding existence.
        #[arg(long)]
        signatures: bool,
        #[arg(long, value_enum)]
        expect: Option<ExpectAction>,
    },
    /// Enumerate Delsarte hypersurfaces and rank them by the obstruction engine.
    Search {
        #[arg(short = 'n', default_value_t = 4)]
        n: usize,
        #[arg(short = 'd', default_value_t = 4)]
        d: u32,
        /// Smallest prime order for the diagonal symmetry.
        #[arg(long, default_value_t = 31)]
        threshold: u64,
        #[arg(long, default_value = "R1-R7")]
        rules: String,
    },
    /// Replay a certificate produced by `obstruct --json`.
    VerifyCertificate {
        /// Certificate file; standard input when omitted.
        file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExpectSmooth {
    Smooth,
    Singular,
    Unsupported,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExpectObstruct {
    Contradiction,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExpectAction {
    Exists,
    None,
}

/// Exit status and the text destined for standard output.
struct Outcome {
    status: i32,
    out: String,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Outcome { status: 0, out }
    }

    fn expecting(out: String, met: bool) -> Self {
        Outcome {
            status: if met { 0 } else { 1 },
            out,
        }
    }
}

enum Failure {
    /// Bad input: status 2.
    Usage(String),
    /// A verification that ran and failed: status 1.
    Rejected(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit status.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    if let Err(msg) = configure_threads(cli.threads) {
        let _ = writeln!(stderr, "error: {msg}");
        return 2;
    }
    match dispatch(&cli, stdin) {
        Ok(outcome) => {
            let mut out = outcome.out;
            if cli.timestamp {
                out = add_timestamp(&out, cli.json);
            }
            let _ = stdout.write_all(out.as_bytes());
            outcome.status
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Rejected(msg)) => {
            let _ = writeln!(stderr, "rejected: {msg}");
            1
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), String> {
    let threads = match flag {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("{THREADS_ENV} must be a number, got `{v}`"))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        // a second call in the same process keeps the first pool, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    Ok(())
}

fn add_timestamp(out: &str, json: bool) -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    if json {
        if let Ok(Value::Object(mut map)) = serde_json::from_str::<Value>(out) {
            map.insert("timestamp".into(), json!(secs));
            return pretty(&Value::Object(map));
        }
        out.lines()
            .map(|line| match serde_json::from_str::<Value>(line) {
                Ok(Value::Object(mut map)) => {
                    map.insert("timestamp".into(), json!(secs));
                    Value::Object(map).to_string()
                }
                _ => line.to_string(),
            })
            .map(|l| l + "\n")
            .collect()
    } else {
        format!("# unix time {secs}\n{out}")
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Symmetry { input } => symmetry(&read_matrix(input, stdin)?, cli.json),
        Command::Smooth { input, expect } => smooth(&read_matrix(input, stdin)?, *expect, cli.json),
        Command::Hodge { n, d } => hodge(*n, *d, cli.json),
        Command::Character {
            input,
            weights,
            modulus,
            piece,
        } => character(
            &read_matrix(input, stdin)?,
            weights,
            *modulus,
            *piece,
            cli.json,
        ),
        Command::Obstruct {
            dim,
            p,
            q,
            r,
            rules,
            not_faithful,
            expect,
        } => obstruct_cmd(*dim, *p, *q, *r, rules, !not_faithful, *expect, cli.json),
        Command::RhOracle {
            cyclic,
            p,
            q,
            r,
            genus,
            gmin,
            gmax,
            genus_cap,
            signatures,
            expect,
        } => {
            let group = match (cyclic, p, q, r) {
                (Some(m), ..) if *m >= 1 => GroupTable::cyclic(*m),
                (None, Some(p), Some(q), Some(r)) => {
                    GroupTable::metacyclic(&MetacyclicGroup::new(*p, *q, *r)?)
                }
                _ => return Err(Failure::Usage("give --cyclic M or --p, --q and --r".into())),
            };
            let (lo, hi) = match (genus, gmax) {
                (Some(g), _) => (*g, *g),
                (None, Some(hi)) => (*gmin, *hi),
                (None, None) => return Err(Failure::Usage("give --genus or --gmax".into())),
            };
            if lo < 2 || hi < lo {
                return Err(Failure::Usage(format!(
                    "genus range {lo}..={hi} is empty or below 2"
                )));
            }
            if hi > *genus_cap {
                return Err(Failure::Usage(format!(
                    "genus {hi} exceeds the cap {genus_cap} (raise it with --genus-cap)"
                )));
            }
            rh_oracle(&group, lo, hi, *signatures, *expect, cli.json)
        }
        Command::Search {
            n,
            d,
            threshold,
            rules,
        } => {
            let mut spec = SearchSpec::new(*n, *d);
            spec.threshold = *threshold;
            spec.ruleset = parse_ruleset(rules)?;
            search_cmd(&spec, cli.json)
        }
        Command::VerifyCertificate { file } => {
            let text = read_source(file.as_ref(), stdin)?;
            let cert = Certificate::from_json(&text)?;
            match verify_certificate(&cert) {
                Ok(()) => Ok(Outcome::ok(if cli.json {
                    line(
                        &json!({"v": 1, "valid": true, "verdict": cert.verdict, "steps": cert.steps.len()}),
                    )
                } else {
                    format!(
                        "certificate verified: {} steps, verdict {}\n",
                        cert.steps.len(),
                        cert.verdict
                    )
                })),
                Err(e) => Err(Failure::Rejected(e.to_string())),
            }
        }
    }
}

fn read_source(file: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<String, Failure> {
    match file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn read_matrix(input: &MatrixInput, stdin: &mut dyn Read) -> Result<ExponentMatrix, Failure> {
    let text = match &input.matrix {
        Some(inline) => inline.clone(),
        None => read_source(input.file.as_ref(), stdin)?,
    };
    Ok(text.parse()?)
}

fn line(v: &Value) -> String {
    format!("{v}\n")
}

fn pretty(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json value"))
}

fn symmetry(m: &ExponentMatrix, as_json: bool) -> Result<Outcome, Failure> {
    let group = diagonal_symmetry_group(m)?;
    let syms = permutation_symmetries(m);
    let mut conj = Vec::new();
    for w in &group.generators {
        for s in syms.iter().filter(|s| !s.is_identity()) {
            if let Ok(r) = conjugation_exponent(m, w, s) {
                conj.push((w.clone(), s.clone(), r));
            }
        }
    }
    if as_json {
        let gens: Vec<Value> = group
            .generators
            .iter()
            .map(|w| json!({"modulus": w.modulus, "weights": w.weights, "signed": w.signed_weights()}))
            .collect();
        let perms: Vec<Value> = syms
            .iter()
            .map(|s| json!({"perm": s.perm, "cycles": s.to_string(), "order": s.order()}))
            .collect();
        let conj: Vec<Value> = conj
            .iter()
            .map(|(w, s, r)| {
                json!({"weights": w.weights, "modulus": w.modulus, "perm": s.perm, "r": signed_residue(*r, w.modulus)})
            })
            .collect();
        return Ok(Outcome::ok(pretty(&json!({
            "v": 1,
            "determinant": m.determinant().to_string(),
            "diagonal": {
                "order": group.order().to_string(),
                "invariant_factors": group.invariant_factors(),
                "generators": gens,
            },
            "permutations": perms,
            "conjugation": conj,
        }))));
    }
    let factors: Vec<String> = group
        .invariant_factors()
        .iter()
        .map(|f| format!("Z/{f}"))
        .collect();
    let mut out = format!(
        "determinant {}\ndiagonal symmetries: {} (order {})\n",
        m.determinant(),
        if factors.is_empty() {
            "trivial".to_string()
        } else {
            factors.join(" x ")
        },
        group.order()
    );
    for w in &group.generators {
        out += &format!("  generator {w}\n");
    }
    out += &format!("permutation symmetries: {}\n", syms.len());
    for s in &syms {
        out += &format!("  {s}\n");
    }
    for (w, s, r) in &conj {
        out += &format!(
            "conjugation by {s} on {w}: r = {} (order {})\n",
            signed_residue(*r, w.modulus),
            s.order()
        );
    }
    Ok(Outcome::ok(out))
}

fn smooth(
    m: &ExponentMatrix,
    expect: Option<ExpectSmooth>,
    as_json: bool,
) -> Result<Outcome, Failure> {
    let report = smoothness_check(m);
    let met = match expect {
        None => true,
        Some(ExpectSmooth::Smooth) => report.verdict == Verdict::Smooth,
        Some(ExpectSmooth::Singular) => report.verdict == Verdict::Singular,
        Some(ExpectSmooth::Unsupported) => report.verdict == Verdict::Unsupported,
    };
    if as_json {
        let mut v = serde_json::to_value(&report).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.shift_insert(0, "v".into(), json!(1));
        }
        return Ok(Outcome::expecting(pretty(&v), met));
    }
    let mut out = format!(
        "verdict: {}\nstrata checked: {} (up to {} permutation symmetries)\n",
        format!("{:?}", report.verdict).to_lowercase(),
        report.strata.len(),
        report.symmetry_order
    );
    if let Some(w) = &report.witness {
        let support: Vec<String> = w.support.iter().map(usize::to_string).collect();
        let point: Vec<String> = w
            .point
            .iter()
            .map(|&(re, im)| format!("{re:.6}{im:+.6}i"))
            .collect();
        out += &format!(
            "singular point with nonzero coordinates {{{}}}\n  x = ({})\n  |grad f| = {:.3e}\n",
            support.join(", "),
            point.join(", "),
            w.gradient_norm
        );
    }
    Ok(Outcome::expecting(out, met))
}

fn hodge(n: usize, d: u32, as_json: bool) -> Result<Outcome, Failure> {
    if n < 1 || d < 2 {
        return Err(Failure::Usage("need n >= 1 and d >= 2".into()));
    }
    let h = hodge_numbers(n, d);
    if as_json {
        let pieces: Vec<Value> = h
            .numbers
            .iter()
            .enumerate()
            .map(|(q, v)| json!({"p": n - 1 - q, "q": q, "h": v}))
            .collect();
        return Ok(Outcome::ok(line(&json!({
            "v": 1, "n": n, "d": d, "primitive": pieces,
            "intermediate_jacobian_dim": h.intermediate_jacobian_dim(),
        }))));
    }
    Ok(Outcome::ok(format!("{h}\n")))
}

fn parse_weights(s: &str) -> Result<Vec<i64>, Failure> {
    s.split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Failure::Usage(format!("`{t}` is not an integer weight")))
        })
        .collect()
}

fn character(
    m: &ExponentMatrix,
    weights: &str,
    modulus: u64,
    piece: Option<usize>,
    as_json: bool,
) -> Result<Outcome, Failure> {
    if modulus < 1 {
        return Err(Failure::Usage("modulus must be positive".into()));
    }
    let weights = parse_weights(weights)?;
    if weights.len() != m.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: m.num_vars(),
            found: weights.len(),
        }
        .into());
    }
    let w = WeightClass::new(m, &weights, modulus)?;
    let hodge = hodge_numbers(m.n(), m.degree());
    let pieces: Vec<usize> = match piece {
        Some(q) if q < m.n() => vec![q],
        Some(q) => {
            return Err(Failure::Usage(format!(
                "piece q = {q} out of range 0..{}",
                m.n()
            )))
        }
        None => (0..m.n()).filter(|&q| hodge.get(q) > 0).collect(),
    };
    let mut chars = Vec::new();
    for &q in &pieces {
        chars.push((q, diagonal_character(m, &w, q)?));
    }
    let faithful = faithfulness_check(&chars.iter().map(|(_, c)| c.clone()).collect::<Vec<_>>());
    let dim = m.n() - 1;
    if as_json {
        let list: Vec<Value> = chars
            .iter()
            .map(|(q, c)| {
                let mult: serde_json::Map<String, Value> = c
                    .multiplicities
                    .iter()
                    .map(|(e, k)| (e.to_string(), json!(k)))
                    .collect();
                json!({"p": dim - q, "q": q, "total": c.total(), "multiplicities": mult})
            })
            .collect();
        return Ok(Outcome::ok(pretty(&json!({
            "v": 1, "modulus": modulus, "weights": w.weights, "common_weight": w.common_weight,
            "pieces": list, "faithful": faithful,
        }))));
    }
    let mut out = format!("weights {w}, common weight {}\n", w.common_weight);
    for (q, c) in &chars {
        out += &format!(
            "H^{{{},{}}}: {} classes, exponents {c}\n",
            dim - q,
            q,
            c.total()
        );
    }
    out += &format!("faithful: {faithful}\n");
    Ok(Outcome::ok(out))
}

#[allow(clippy::too_many_arguments)]
fn obstruct_cmd(
    dim: u64,
    p: u64,
    q: u64,
    r: i64,
    rules: &str,
    faithful: bool,
    expect: Option<ExpectObstruct>,
    as_json: bool,
) -> Result<Outcome, Failure> {
    let ruleset = parse_ruleset(rules)?;
    let mut inst = ProblemInstance::new(dim, MetacyclicGroup::new(p, q, r)?)?;
    inst.faithful = faithful;
    let trace = obstruct(&inst, &ruleset)?;
    let met = match expect {
        None => true,
        Some(ExpectObstruct::Contradiction) => trace.is_contradiction(),
        Some(ExpectObstruct::Inconclusive) => !trace.is_contradiction(),
    };
    if as_json {
        return Ok(Outcome::expecting(
            trace.certificate().to_json() + "\n",
            met,
        ));
    }
    let mut out = format!(
        "instance: N = {dim}, G = {}, faithful = {faithful}\n",
        inst.group
    );
    for s in &trace.steps {
        out += &format!("{} {}: {}\n", s.rule, s.rule.name(), s.claim);
    }
    match &trace.verdict {
        TraceVerdict::Contradiction => out += "verdict: contradiction\n",
        TraceVerdict::Inconclusive(blockers) => {
            out += "verdict: inconclusive\n";
            for b in blockers {
                out += &format!("  blocked at {}: {}\n", b.rule, b.reason);
            }
        }
    }
    Ok(Outcome::expecting(out, met))
}

fn rh_oracle(
    group: &GroupTable,
    lo: u64,
    hi: u64,
    list_signatures: bool,
    expect: Option<ExpectAction>,
    as_json: bool,
) -> Result<Outcome, Failure> {
    if list_signatures {
        let sigs: Vec<(u64, _)> = signatures_for_genus_range(group, hi)
            .into_iter()
            .filter(|(g, _)| *g >= lo)
            .collect();
        let found = !sigs.is_empty();
        let met = expect.is_none_or(|e| (e == ExpectAction::Exists) == found);
        if as_json {
            let list: Vec<Value> = sigs
                .iter()
                .map(|(g, s)| json!({"genus": g, "quotient_genus": s.quotient_genus, "periods": s.periods}))
                .collect();
            return Ok(Outcome::expecting(
                pretty(
                    &json!({"v": 1, "group": group.label(), "order": group.order(), "signatures": list}),
                ),
                met,
            ));
        }
        let mut out = format!(
            "{} (order {}): {} signatures\n",
            group.label(),
            group.order(),
            sigs.len()
        );
        for (g, s) in &sigs {
            out += &format!("  g = {g}: {s}\n");
        }
        return Ok(Outcome::expecting(out, met));
    }

    let table = action_table(group, lo, hi);
    let any = table.iter().any(|(_, w)| w.is_some());
    let met = expect.is_none_or(|e| (e == ExpectAction::Exists) == any);
    if as_json {
        let rows: Vec<Value> = table
            .iter()
            .map(|(g, w)| match w {
                Some(w) => json!({
                    "genus": g, "exists": true,
                    "signature": {"quotient_genus": w.signature.quotient_genus, "periods": w.signature.periods},
                    "vector": w.vector,
                }),
                None => json!({"genus": g, "exists": false}),
            })
            .collect();
        return Ok(Outcome::expecting(
            pretty(
                &json!({"v": 1, "group": group.label(), "order": group.order(), "genera": rows}),
            ),
            met,
        ));
    }
    let mut out = format!("{} (order {})\n", group.label(), group.order());
    for (g, w) in &table {
        match w {
            Some(w) => out += &format!("  g = {g}: acts, signature {}\n", w.signature),
            None => out += &format!("  g = {g}: no action\n"),
        }
    }
    Ok(Outcome::expecting(out, met))
}

fn search_cmd(spec: &SearchSpec, as_json: bool) -> Result<Outcome, Failure> {
    let result = search(spec)?;
    if as_json {
        let mut out = String::new();
        for hit in &result.hits {
            out += &hit.to_json_line();
            out.push('\n');
        }
        return Ok(Outcome::ok(out));
    }
    let mut out = format!(
        "{} classes, {} smooth, {} hits\n",
        result.candidates,
        result.smooth,
        result.hits.len()
    );
    for h in &result.hits {
        let rows: Vec<String> = h
            .matrix
            .iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        out += &format!(
            "[{}] N = {} p = {} q = {} r = {} {}\n",
            rows.join("; "),
            h.dimension.unwrap_or(0),
            h.p.unwrap_or(0),
            h.q.unwrap_or(0),
            h.r.unwrap_or(0),
            h.verdict
                .map_or("-".into(), |v| format!("{v:?}").to_lowercase())
        );
    }
    Ok(Outcome::ok(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], input: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("ijobstruct").chain(args.iter().copied());
        let code = run(argv, &mut input.as_bytes(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn hodge_line() {
        let (code, out, _) = call(&["hodge", "-n", "4", "-d", "4"], "");
        assert_eq!(code, 0);
        assert_eq!(out, "h^{3,0}=0 h^{2,1}=30 h^{1,2}=30 h^{0,3}=0\n");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["hodge", "-n", "4"], "").0, 2);
        assert_eq!(call(&["frobnicate"], "").0, 2);
        assert_eq!(call(&["smooth", "--bogus"], "").0, 2);
        let (code, _, err) = call(&["smooth"], "4 4\n1 2 3\n");
        assert_eq!(code, 2);
        assert!(err.contains("parse error"));
        assert_eq!(
            call(
                &[
                    "obstruct", "--dim", "30", "--p", "61", "--q", "5", "--r", "-3", "--rules",
                    "R9"
                ],
                ""
            )
            .0,
            2
        );
    }

    #[test]
    fn expectations() {
        let klein = "4 4; 3 1 0 0 0; 0 3 1 0 0; 0 0 3 1 0; 0 0 0 3 1; 1 0 0 0 3";
        assert_eq!(
            call(&["smooth", "-m", klein, "--expect", "smooth"], "").0,
            0
        );
        assert_eq!(
            call(&["smooth", "-m", klein, "--expect", "singular"], "").0,
            1
        );
        let base = [
            "obstruct", "--dim", "30", "--p", "61", "--q", "5", "--r", "-3",
        ];
        let mut args = base.to_vec();
        args.extend(["--expect", "contradiction"]);
        assert_eq!(call(&args, "").0, 0);
        let mut args = base.to_vec();
        args.extend(["--rules", "R1-R6,R8", "--expect", "contradiction"]);
        assert_eq!(call(&args, "").0, 1);
    }

    #[test]
    fn certificate_round_trip() {
        let (code, cert, _) = call(
            &[
                "obstruct", "--dim", "30", "--p", "61", "--q", "5", "--r", "-3", "--json",
            ],
            "",
        );
        assert_eq!(code, 0);
        assert!(cert.contains("g >= 15") && cert.contains("305 > 261"));
        let (code, out, _) = call(&["verify-certificate"], &cert);
        assert_eq!(code, 0, "{out}");
        let forged = cert.replace("305 > 261", "305 > 260");
        assert_eq!(call(&["verify-certificate"], &forged).0, 1);
        assert_eq!(call(&["verify-certificate"], "{").0, 2);
    }

    #[test]
    fn timestamp_is_opt_in() {
        let (_, plain, _) = call(&["hodge", "-n", "4", "-d", "4", "--json"], "");
        assert!(!plain.contains("timestamp"));
        let (_, stamped, _) = call(
            &["hodge", "-n", "4", "-d", "4", "--json", "--timestamp"],
            "",
        );
        assert!(stamped.contains("\"timestamp\""));
    }

    #[test]
    fn rh_oracle_cli() {
        let (code, out, _) = call(
            &[
                "rh-oracle",
                "--cyclic",
                "7",
                "--genus",
                "3",
                "--expect",
                "exists",
            ],
            "",
        );
        assert_eq!(code, 0);
        assert!(out.contains("(0; 7, 7, 7)"), "{out}");
        let (code, _, _) = call(
            &[
                "rh-oracle",
                "--p",
                "61",
                "--q",
                "5",
                "--r",
                "-3",
                "--gmax",
                "30",
                "--expect",
                "none",
            ],
            "",
        );
        assert_eq!(code, 0);
        assert_eq!(
            call(&["rh-oracle", "--cyclic", "7", "--genus", "500"], "").0,
            2
        );
    }
}
