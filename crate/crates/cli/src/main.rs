use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use signseq::adversary::{build_lower_bound_sequence, length_bound, verify_adversary, AdversaryConfig};
use signseq::admissible::Degeneracy;
use signseq::highdim::{euclidean_family, maxnorm_family, AdmissibilityCheck, VERIFY_CAP};
use signseq::io::{parse_polygon_file, parse_vector_file, write_vector_file};
use signseq::norms::random_unit_ball_vector;
use signseq::oracle::{all_patterns_exceed, brute_force_minmax_parallel, ORACLE_CAP};
use signseq::signer::{greedy_sign, planar_bound, sign_sequence, verify_sign_result, Algorithm};
use signseq::svg::render_trajectory;
use signseq::{NormSpec, Sign, Vector, DEFAULT_TOL};

#[derive(Parser)]
#[command(name = "signseq", version, about = "Bounded signed partial sums of unit-ball vectors")]
struct Cli {
    /// Slack for unit-ball comparisons
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Seed for randomized input generation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the main output here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sign a vector file and report every partial-sum norm
    Sign {
        /// Vector file, or '-' for stdin
        input: String,
        /// euclidean, l1, linf, or polygon:<file>
        #[arg(long, default_value = "euclidean")]
        norm: String,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Trapping)]
        algorithm: AlgorithmArg,
        /// Also draw the partial-sum path (planar inputs only)
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Emit a Euclidean sequence on which every signing reaches √3 - δ
    Adversary {
        #[arg(long)]
        delta: f64,
    },
    /// Exact minimax value over all sign patterns
    Oracle {
        input: String,
        #[arg(long, default_value = "euclidean")]
        norm: String,
        /// Also decide whether every pattern reaches this norm
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = ORACLE_CAP)]
        cap: usize,
    },
    /// Admissible families in R^d with linearly growing sums
    Highdim {
        #[arg(long, value_enum)]
        norm: FamilyArg,
        #[arg(long)]
        dim: usize,
        /// Check admissibility by exhaustive enumeration
        #[arg(long)]
        verify: bool,
    },
    /// Write random unit-ball vectors (uses --seed)
    Random {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value = "euclidean")]
        norm: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Trapping,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Max,
    Euclidean,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl fmt::Display) -> Self {
        Self { code: 1, message: message.to_string() }
    }
}

impl From<signseq::Error> for Failure {
    fn from(e: signseq::Error) -> Self {
        Failure::input(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let output = cli.output.as_deref();
    match cli.command {
        Command::Sign { input, norm, algorithm, svg } => {
            cmd_sign(&input, &norm, algorithm, cli.tol, svg.as_deref(), output)
        }
        Command::Adversary { delta } => cmd_adversary(delta, output),
        Command::Oracle { input, norm, threshold, cap } => cmd_oracle(&input, &norm, threshold, cap, output),
        Command::Highdim { norm, dim, verify } => cmd_highdim(norm, dim, verify, cli.tol, output),
        Command::Random { count, dim, norm } => cmd_random(count, dim, &norm, cli.seed, output),
    }
}

fn read_input(input: &str) -> Result<Vec<u8>, Failure> {
    if input == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Failure::input(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read(input).map_err(|e| Failure::input(format!("reading {input}: {e}")))
    }
}

fn load_vectors(bytes: &[u8]) -> Result<Vec<Vector>, Failure> {
    let text = std::str::from_utf8(bytes).map_err(|e| Failure::input(format!("input is not UTF-8: {e}")))?;
    Ok(parse_vector_file(text)?)
}

fn parse_norm(flag: &str) -> Result<NormSpec, Failure> {
    match flag {
        "euclidean" | "l2" => Ok(NormSpec::Euclidean),
        "l1" => Ok(NormSpec::L1),
        "linf" | "max" => Ok(NormSpec::Linf),
        _ => match flag.strip_prefix("polygon:") {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::input(format!("reading polygon file {path}: {e}")))?;
                Ok(parse_polygon_file(&text)?)
            }
            None => Err(Failure::input(format!(
                "unknown norm '{flag}' (expected euclidean, l1, linf, or polygon:<file>)"
            ))),
        },
    }
}

fn emit(output: Option<&Path>, text: &str) -> CmdResult {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("writing {}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::input(format!("writing stdout: {e}")))
        }
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    input_digest: String,
    norm: &'a NormSpec,
    algorithm: Algorithm,
    tol: f64,
    count: usize,
    signs: &'a [Sign],
    partial_norms: &'a [f64],
    max_partial_norm: f64,
    certified_bound: Option<f64>,
    final_radius: Option<f64>,
    warnings: &'a [Degeneracy],
    timing_ms: f64,
}

fn cmd_sign(
    input: &str,
    norm: &str,
    algorithm: AlgorithmArg,
    tol: f64,
    svg: Option<&Path>,
    output: Option<&Path>,
) -> CmdResult {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::input(format!("--tol must be a nonnegative number, got {tol}")));
    }
    let spec = parse_norm(norm)?;
    let bytes = read_input(input)?;
    let vectors = load_vectors(&bytes)?;

    let started = Instant::now();
    let result = match algorithm {
        AlgorithmArg::Trapping => sign_sequence(&vectors, &spec, tol)?,
        AlgorithmArg::Greedy => greedy_sign(&vectors, &spec)?,
    };
    let timing_ms = started.elapsed().as_secs_f64() * 1e3;

    let report = RunReport {
        input_digest: format!("sha256:{}", hex::encode(Sha256::digest(&bytes))),
        norm: &spec,
        algorithm: result.algorithm,
        tol,
        count: vectors.len(),
        signs: &result.signs,
        partial_norms: &result.partial_norms,
        max_partial_norm: result.max_partial_norm,
        certified_bound: result.certified_bound,
        final_radius: result.final_radius,
        warnings: &result.warnings,
        timing_ms,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    emit(output, &text)?;

    if let Some(path) = svg {
        let dim = vectors.first().map_or(2, Vector::dim);
        if dim != 2 {
            return Err(Failure::input("--svg needs planar input"));
        }
        let bound = result
            .certified_bound
            .unwrap_or_else(|| planar_bound(&spec, tol, &[]));
        let drawing = render_trajectory(&vectors, &result.signs, &spec, bound)?;
        fs::write(path, drawing).map_err(|e| Failure::input(format!("writing {}: {e}", path.display())))?;
    }

    let check = verify_sign_result(&vectors, &result, &spec);
    if !check.passed() {
        return Err(Failure {
            code: 2,
            message: format!("certified bound violated: {}", check.violations.join("; ")),
        });
    }
    Ok(())
}

fn cmd_adversary(delta: f64, output: Option<&Path>) -> CmdResult {
    let seq = build_lower_bound_sequence(AdversaryConfig { delta })?;
    emit(output, &write_vector_file(&seq.vectors))?;

    let mut summary = format!(
        "n = {}\nlength bound 3 + (√2 - 1)/δ = {:.6}\n",
        seq.vectors.len(),
        length_bound(delta)
    );
    if seq.vectors.len() <= ORACLE_CAP {
        let verdict = if verify_adversary(&seq)? { "PASS" } else { "FAIL" };
        summary.push_str(&format!(
            "verification: {verdict} ≥ √3 - {delta} (threshold {:.12})\n",
            seq.threshold()
        ));
        if verdict == "FAIL" {
            eprint!("{summary}");
            return Err(Failure { code: 2, message: "adversary verification failed".into() });
        }
    } else {
        summary.push_str("verification: skipped (sequence longer than the oracle cap)\n");
    }
    if output.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleReport<'a> {
    input_digest: String,
    norm: &'a NormSpec,
    count: usize,
    value: f64,
    witness_signs: &'a [Sign],
    nodes_explored: u64,
    threshold: Option<f64>,
    all_patterns_exceed: Option<bool>,
}

fn sign_list(signs: &[Sign]) -> String {
    let items: Vec<&str> = signs.iter().map(|s| if *s == Sign::Plus { "+1" } else { "-1" }).collect();
    format!("[{}]", items.join(", "))
}

fn cmd_oracle(input: &str, norm: &str, threshold: Option<f64>, cap: usize, output: Option<&Path>) -> CmdResult {
    let spec = parse_norm(norm)?;
    let bytes = read_input(input)?;
    let vectors = load_vectors(&bytes)?;
    if vectors.len() > cap {
        return Err(Failure::input(format!(
            "{} vectors exceed the search cap of {cap}; raise it with --cap",
            vectors.len()
        )));
    }
    let result = brute_force_minmax_parallel(&vectors, &spec, cap)?;
    let exceed = threshold
        .map(|t| all_patterns_exceed(&vectors, &spec, t, cap))
        .transpose()?;

    println!("value: {}", result.value);
    println!("witness: {}", sign_list(&result.witness_signs));
    println!("nodes explored: {}", result.nodes_explored);
    if let Some(e) = exceed {
        println!("ALL PATTERNS EXCEED: {e}");
    }

    if let Some(path) = output {
        let report = OracleReport {
            input_digest: format!("sha256:{}", hex::encode(Sha256::digest(&bytes))),
            norm: &spec,
            count: vectors.len(),
            value: result.value,
            witness_signs: &result.witness_signs,
            nodes_explored: result.nodes_explored,
            threshold,
            all_patterns_exceed: exceed,
        };
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        emit(Some(path), &text)?;
    }
    Ok(())
}

fn cmd_highdim(norm: FamilyArg, dim: usize, verify: bool, tol: f64, output: Option<&Path>) -> CmdResult {
    let family = match norm {
        FamilyArg::Max => maxnorm_family(dim)?,
        FamilyArg::Euclidean => euclidean_family(dim)?,
    };
    let status = if verify {
        match family.verify(tol)? {
            AdmissibilityCheck::Admissible => "yes".to_string(),
            AdmissibilityCheck::NotAdmissible => "NO".to_string(),
            AdmissibilityCheck::Unverified => format!("unverified (cap {VERIFY_CAP})"),
        }
    } else {
        "not checked".to_string()
    };
    let c = family.norm.linear_constant();
    println!("{:>4}  {:<10}  {:<18}  {:>20}  {:>12}", "d", "norm", "admissible", "sum_norm", "c*(d-1)");
    println!(
        "{:>4}  {:<10}  {:<18}  {:>20.15}  {:>12.6}",
        family.dimension,
        family.norm.to_string(),
        status,
        family.sum_norm,
        c * (dim - 1) as f64
    );
    if let Some(path) = output {
        emit(Some(path), &write_vector_file(&family.vectors))?;
    }
    if status == "NO" {
        return Err(Failure { code: 2, message: "family failed the admissibility check".into() });
    }
    Ok(())
}

fn cmd_random(count: usize, dim: usize, norm: &str, seed: u64, output: Option<&Path>) -> CmdResult {
    let spec = parse_norm(norm)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors = (0..count)
        .map(|_| random_unit_ball_vector(&spec, dim, &mut rng))
        .collect::<Result<Vec<_>, _>>()?;
    emit(output, &write_vector_file(&vectors))
}
