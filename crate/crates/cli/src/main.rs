use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dihedral_core::arith::squarefree_kernel;
use dihedral_core::cubicforms::{self, Sign};
use dihedral_core::families::{self, Family, ScanFilter};
use dihedral_core::galmod::random_gras_module;
use dihedral_core::quadforms::{self, ClassGroupOptions};
use dihedral_core::verifier::{self, Verdict, VerifyError};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Class groups, cubic field counts, Frobenius-module self-tests and
/// verification of p-rank bounds for dihedral extensions.
///
/// Exit status: 0 when every hard check passes, 1 on a violated theorem or
/// a computation error, 2 on a usage or input error.
#[derive(Parser, Debug)]
#[command(name = "dihedral", version, about, long_about = None)]
struct Cli {
    /// Seed for all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class group of a quadratic field.
    ///
    /// TSV output: the structure as comma-separated cyclic orders (the
    /// p-part with --p), e.g. `15,5`; `1` for the trivial group.
    Classgroup(ClassgroupArgs),
    /// Count cubic fields by discriminant from reduced binary cubic forms.
    ///
    /// TSV columns: disc, count, r3 (the 3-rank of Q(sqrt disc)).
    Cubicfields(CubicArgs),
    /// Check r3(Q(sqrt m)) <= r3(Q(sqrt -3m)) <= r3(Q(sqrt m)) + 1.
    ///
    /// TSV columns: m, d_plus, d_minus, r_plus, r_minus, verdict.
    Scholz(ScholzArgs),
    /// Scan a polynomial family over a parameter range.
    ///
    /// Columns: family, parameter, polynomial, d, squarefree, fundamental, p.
    Family(FamilyArgs),
    /// Verify a dataset of dihedral instances.
    ///
    /// TSV columns: line, label, check, verdict, detail. A summary goes to
    /// stderr; conjecture verdicts never change the exit status.
    Verify(VerifyArgs),
    /// Compare the predicted structure of random modules with #A^G = p
    /// against their Smith normal form.
    ///
    /// TSV columns: trial, n, nu_trivial, predicted, actual, verdict.
    GrasSelftest(GrasArgs),
}

#[derive(Args, Debug)]
struct ClassgroupArgs {
    /// Fundamental discriminant.
    #[arg(long, allow_hyphen_values = true)]
    disc: i64,
    /// Print only the p-part.
    #[arg(long)]
    p: Option<u64>,
    /// Narrow class group (real fields only).
    #[arg(long)]
    narrow: bool,
    /// Allow |disc| up to 4e9 (slow).
    #[arg(long)]
    extended: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Neg,
    Pos,
}

#[derive(Args, Debug)]
struct CubicArgs {
    /// Largest |disc|.
    #[arg(long, default_value_t = 1000)]
    bound: i64,
    #[arg(long, value_enum, default_value_t = SignArg::Neg)]
    sign: SignArg,
    /// Report only this discriminant.
    #[arg(long, allow_hyphen_values = true)]
    disc: Option<i64>,
}

#[derive(Args, Debug)]
struct ScholzArgs {
    /// A single squarefree m > 1.
    #[arg(long, conflicts_with = "max")]
    m: Option<i64>,
    /// Every squarefree m in 2..=MAX.
    #[arg(long)]
    max: Option<i64>,
    /// Also read the ranks off cubic field counts.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyName {
    Cubic,
    Quintic,
    CyclicCubic,
}

impl From<FamilyName> for Family {
    fn from(f: FamilyName) -> Family {
        match f {
            FamilyName::Cubic => Family::Cubic,
            FamilyName::Quintic => Family::Quintic,
            FamilyName::CyclicCubic => Family::CyclicCubic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Csv,
    Tsv,
    Json,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(value_enum)]
    family: FamilyName,
    /// Inclusive parameter range `A..B`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    range: RangeInclusive<i64>,
    /// Output encoding; defaults to --format.
    #[arg(long, value_enum)]
    emit: Option<Emit>,
    /// Keep only candidates with squarefree d.
    #[arg(long)]
    squarefree_only: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    dataset: PathBuf,
}

#[derive(Args, Debug)]
struct GrasArgs {
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    /// Largest exponent of the ambient cyclic factors.
    #[arg(long, default_value_t = 6)]
    max_exp: u32,
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

/// An error with its exit status.
struct Failure {
    code: u8,
    message: String,
}

fn computation(e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, message: e.to_string() }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: e.to_string() }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Classgroup(a) => classgroup(a, cli.format, &mut out),
        Command::Cubicfields(a) => cubicfields(a, cli.format, &mut out),
        Command::Scholz(a) => scholz(a, cli.format, &mut out),
        Command::Family(a) => family(a, cli.format, &mut out),
        Command::Verify(a) => verify(a, cli.format, &mut out),
        Command::GrasSelftest(a) => gras(a, cli.seed, cli.format, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit_json(out: &mut impl Write, value: &serde_json::Value) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(computation)?;
    writeln!(out).map_err(computation)
}

fn classgroup(a: &ClassgroupArgs, format: Format, out: &mut impl Write) -> Outcome {
    let opts = ClassGroupOptions { narrow: a.narrow, extended: a.extended };
    let g = quadforms::class_group(a.disc, &opts).map_err(computation)?;
    let shown = a.p.map_or_else(|| g.structure.clone(), |p| g.structure.p_part(p));
    match format {
        Format::Tsv => writeln!(out, "{shown}").map_err(computation)?,
        Format::Json => emit_json(
            out,
            &json!({
                "disc": g.disc,
                "narrow": g.narrow,
                "structure": g.structure.to_string(),
                "class_number": g.class_number().to_string(),
                "p": a.p,
                "p_part": a.p.map(|p| g.structure.p_part(p).to_string()),
                "p_rank": a.p.map(|p| g.structure.p_rank(p)),
            }),
        )?,
    }
    Ok(true)
}

fn cubicfields(a: &CubicArgs, format: Format, out: &mut impl Write) -> Outcome {
    let counts = match a.disc {
        Some(d) => vec![cubicforms::fields_of_disc(d).map_err(computation)?],
        None => {
            let sign = match a.sign {
                SignArg::Neg => Sign::Negative,
                SignArg::Pos => Sign::Positive,
            };
            cubicforms::enumerate_fields(a.bound, sign).map_err(computation)?
        }
    };
    let mut rows = Vec::new();
    for c in &counts {
        let r3 = cubicforms::r3_from_n(c.disc, c.n_fields).map_err(computation)?;
        rows.push((c.disc, c.n_fields, r3));
    }
    match format {
        Format::Tsv => {
            for (d, n, r) in &rows {
                writeln!(out, "{d}\t{n}\t{r}").map_err(computation)?;
            }
        }
        Format::Json => emit_json(
            out,
            &json!(rows.iter().map(|(d, n, r)| json!({"disc": d, "count": n, "r3": r})).collect::<Vec<_>>()),
        )?,
    }
    Ok(true)
}

fn scholz(a: &ScholzArgs, format: Format, out: &mut impl Write) -> Outcome {
    let ms: Vec<i64> = match (a.m, a.max) {
        (Some(m), _) => vec![m],
        (None, Some(max)) => (2..=max).filter(|&m| squarefree_kernel(m) == m).collect(),
        (None, None) => return Err(usage("scholz needs --m or --max")),
    };
    if let Some(m) = a.m {
        if m <= 1 || squarefree_kernel(m) != m {
            return Err(usage(format!("m = {m} must be a squarefree integer > 1")));
        }
    }
    let checks = {
        use rayon::prelude::*;
        ms.par_iter().map(|&m| verifier::check_scholz(m, a.cross_check)).collect::<Vec<_>>()
    };
    let checks: Vec<_> = checks.into_iter().collect::<Result<_, _>>().map_err(computation)?;
    match format {
        Format::Tsv => {
            for c in &checks {
                writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", c.m, c.d_plus, c.d_minus, c.r_plus, c.r_minus, c.verdict)
                    .map_err(computation)?;
            }
        }
        Format::Json => emit_json(out, &serde_json::to_value(&checks).map_err(computation)?)?,
    }
    let failures = checks.iter().filter(|c| c.verdict == Verdict::Fail).count();
    eprintln!("{} values of m, {failures} violations", checks.len());
    Ok(failures == 0)
}

fn family(a: &FamilyArgs, format: Format, out: &mut impl Write) -> Outcome {
    let fam: Family = a.family.into();
    let filter = ScanFilter { squarefree_only: a.squarefree_only };
    let found = families::scan(fam, a.range.clone(), filter);
    let emit = a.emit.unwrap_or(match format {
        Format::Tsv => Emit::Tsv,
        Format::Json => Emit::Json,
    });
    if emit == Emit::Json {
        emit_json(out, &serde_json::to_value(&found).map_err(computation)?)?;
        return Ok(true);
    }
    let delimiter = if emit == Emit::Csv { b',' } else { b'\t' };
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(&mut *out);
    w.write_record(["family", "parameter", "polynomial", "d", "squarefree", "fundamental", "p"])
        .map_err(computation)?;
    for c in &found {
        w.write_record([
            c.family.to_string(),
            c.parameter.to_string(),
            c.polynomial_string(),
            c.d.to_string(),
            format!("{:?}", c.squarefree).to_lowercase(),
            c.fundamental.to_string(),
            c.p.to_string(),
        ])
        .map_err(computation)?;
    }
    w.flush().map_err(computation)?;
    Ok(true)
}

fn verify(a: &VerifyArgs, format: Format, out: &mut impl Write) -> Outcome {
    let report = verifier::verify_dataset(&a.dataset).map_err(|e| match e {
        VerifyError::Io { .. } | VerifyError::Schema { .. } => usage(e),
    })?;
    match format {
        Format::Tsv => {
            for row in &report.rows {
                for c in &row.checks {
                    writeln!(out, "{}\t{}\t{}\t{}\t{}", row.line, row.label, c.name, c.result.verdict, c.result.detail)
                        .map_err(computation)?;
                }
            }
        }
        Format::Json => emit_json(out, &serde_json::to_value(&report).map_err(computation)?)?,
    }
    let s = &report.summary;
    eprintln!(
        "{} rows, {} hard failures, {} conjecture violations",
        s.rows, s.hard_failures, s.conjecture_violations
    );
    for c in report.conjectures.iter().filter(|c| c.verdict == Verdict::ConjectureViolated) {
        eprintln!("conjecture violated: {} {}: {}", c.label, c.check, c.detail);
    }
    Ok(!report.has_hard_failures())
}

fn gras(a: &GrasArgs, seed: u64, format: Format, out: &mut impl Write) -> Outcome {
    if a.p < 3 || !dihedral_core::arith::is_prime_u64(a.p) {
        return Err(usage(format!("p = {} must be an odd prime", a.p)));
    }
    if a.max_exp == 0 {
        return Err(usage("--max-exp must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for trial in 0..a.trials {
        let m = random_gras_module(a.p, a.max_exp, &mut rng);
        let pred = m.gras_structure().map_err(computation)?;
        let actual = m.structure();
        let order_ok = m.order() == (a.p as u128).pow(pred.n);
        let ok = pred.predicted == actual && order_ok;
        if !ok {
            mismatches.push((trial, m.to_string()));
        }
        rows.push(json!({
            "trial": trial,
            "n": pred.n,
            "nu_trivial": pred.nu_trivial,
            "predicted": pred.predicted.to_string(),
            "actual": actual.to_string(),
            "verdict": if ok { "pass" } else { "fail" },
        }));
    }
    match format {
        Format::Tsv => {
            for r in &rows {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    r["trial"], r["n"], r["nu_trivial"], r["predicted"].as_str().unwrap_or(""),
                    r["actual"].as_str().unwrap_or(""), r["verdict"].as_str().unwrap_or("")
                )
                .map_err(computation)?;
            }
        }
        Format::Json => emit_json(out, &json!({ "p": a.p, "seed": seed, "trials": rows }))?,
    }
    eprintln!("p = {}: {} trials, {} mismatches", a.p, a.trials, mismatches.len());
    for (trial, m) in &mismatches {
        eprintln!("counterexample (trial {trial}): {m}");
    }
    Ok(mismatches.is_empty())
}
