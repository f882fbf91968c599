//! Command-line front end: build the conic designs, verify design
//! parameters, analyse automorphism groups, and render the claim report.
//!
//! Exit codes: 0 = all checks pass; 1 = a checked claim fails (the witness
//! is printed); 2 = usage error, guard rejection or I/O failure;
//! 3 = no failure, but at least one check ended inconclusive.

use anyhow::{anyhow, bail, ensure, Context};
use clap::{Parser, Subcommand, ValueEnum};
use conic_designs::designs::{self, DesignKind, DesignParams};
use conic_designs::gf2n::FieldCtx;
use conic_designs::report::{self, ClaimStatus, ReportOptions};
use conic_designs::{autgroup, permgrp};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_PASS: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "conic-designs",
    version,
    about = "2-designs cut out by parabolas and hyperbolas over GF(2^n): \
             construction, verification and automorphism-group analysis"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write one design as a block-set file (deterministic bytes).
    Build {
        /// Field exponent, 2 <= n <= 16.
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Irreducible modulus in hex (e.g. b for x^3+x+1); defaults to the
        /// smallest irreducible of degree n.
        #[arg(long)]
        modulus: Option<String>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check t-design parameters, from a file or from the block formulas.
    Verify {
        /// Field exponent; required unless --in names a file.
        #[arg(long)]
        n: Option<u32>,
        /// Family to rebuild; required unless --in names a file.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[arg(long)]
        modulus: Option<String>,
        /// Verify this block-set file instead of rebuilding from formulas.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Design strength to check: 1 or 2.
        #[arg(long, default_value_t = 2)]
        t: u32,
        /// Seed for the sampled pair check above the exhaustive bound.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Point pairs sampled above the exhaustive bound.
        #[arg(long, default_value_t = 100_000)]
        pairs: usize,
        /// Force the exhaustive route above n = 11 (memory-hungry).
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, value_enum, default_value_t = VerifyFormat::Text)]
        format: VerifyFormat,
    },
    /// Automorphism-group report for one design (exact; n <= 4 unless forced).
    Aut {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        modulus: Option<String>,
        /// Lift the exact-analysis guard (cost grows like |GL_n(2)|).
        #[arg(long)]
        force: bool,
        /// JSON report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the group itself: degree line, then one generator per
        /// line as an image table.
        #[arg(long)]
        group_out: Option<PathBuf>,
    },
    /// Claim-by-claim verification report over a range of field exponents.
    Report {
        /// Single exponent (4) or inclusive range (2..8).
        #[arg(long)]
        n: String,
        /// Include the automorphism-group rows (exact for n <= 4).
        #[arg(long)]
        with_aut: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Point pairs sampled per design above the exhaustive bound.
        #[arg(long, default_value_t = 100_000)]
        pairs: usize,
        /// Lift the size guards (exhaustive and exact analysis at any n).
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Hyperbola,
    Parabola,
    ComplementHyperbola,
    ComplementParabola,
}

impl KindArg {
    fn kind(self) -> DesignKind {
        match self {
            KindArg::Hyperbola => DesignKind::Hyperbola,
            KindArg::Parabola => DesignKind::Parabola,
            KindArg::ComplementHyperbola => DesignKind::ComplementHyperbola,
            KindArg::ComplementParabola => DesignKind::ComplementParabola,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::Build {
            n,
            kind,
            modulus,
            out,
        } => cmd_build(n, kind, &modulus, &out),
        Cmd::Verify {
            n,
            kind,
            modulus,
            input,
            t,
            seed,
            pairs,
            exhaustive,
            format,
        } => cmd_verify(n, kind, &modulus, &input, t, seed, pairs, exhaustive, format),
        Cmd::Aut {
            n,
            kind,
            modulus,
            force,
            out,
            group_out,
        } => cmd_aut(n, kind, &modulus, force, &out, &group_out),
        Cmd::Report {
            n,
            with_aut,
            seed,
            pairs,
            force,
            format,
            out,
        } => cmd_report(&n, with_aut, seed, pairs, force, format, &out),
    }
}

fn parse_modulus(s: &str) -> anyhow::Result<u32> {
    let t = s.trim();
    let t = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u32::from_str_radix(t, 16).with_context(|| format!("bad modulus {s:?} (expected hex)"))
}

fn field(n: u32, modulus: &Option<String>) -> anyhow::Result<FieldCtx> {
    Ok(match modulus {
        Some(m) => FieldCtx::with_modulus(n, parse_modulus(m)?)?,
        None => FieldCtx::new(n)?,
    })
}

/// Write to the path, or to stdout when no path is given.
fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn cmd_build(
    n: u32,
    kind: KindArg,
    modulus: &Option<String>,
    out: &Option<PathBuf>,
) -> anyhow::Result<u8> {
    let ctx = field(n, modulus)?;
    let write = |w: &mut dyn Write| -> anyhow::Result<()> {
        designs::write_blockset_streaming(&ctx, kind.kind(), w).map_err(|e| anyhow!("{e}"))
    };
    match out {
        Some(p) => {
            let f = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = std::io::BufWriter::new(f);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout().lock();
            let mut w = std::io::BufWriter::new(stdout);
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(EXIT_PASS)
}

/// Everything one verification run found, for both output formats.
struct VerifyOutcome {
    n: u32,
    modulus: u32,
    kind: DesignKind,
    t: u32,
    mode: &'static str,
    params: Option<DesignParams>,
    violation: Option<String>,
    pairs_sampled: Option<u64>,
    seed: Option<u64>,
}

impl VerifyOutcome {
    fn passed(&self) -> bool {
        self.violation.is_none()
    }

    fn render(&self, format: VerifyFormat) -> String {
        match format {
            VerifyFormat::Text => match (&self.violation, &self.params) {
                (Some(v), _) => format!("violation: {v}\n"),
                (None, Some(p)) => {
                    let sampling = match (self.pairs_sampled, self.seed) {
                        (Some(pairs), Some(seed)) => {
                            format!(", blocks and points exact, {pairs} pairs sampled, seed {seed}")
                        }
                        _ => String::new(),
                    };
                    format!(
                        "pass: {p} ({}, {}{sampling})\n",
                        self.kind.as_str(),
                        self.mode
                    )
                }
                (None, None) => unreachable!("a pass always carries parameters"),
            },
            VerifyFormat::Json => {
                let params = self.params.map(|p| {
                    serde_json::json!({
                        "t": p.t, "v": p.v, "k": p.k, "lambda": p.lambda,
                        "b": p.b, "r": p.r,
                    })
                });
                let doc = serde_json::json!({
                    "schema": 1,
                    "n": self.n,
                    "modulus": format!("{:x}", self.modulus),
                    "kind": self.kind.as_str(),
                    "t": self.t,
                    "mode": self.mode,
                    "status": if self.passed() { "pass" } else { "fail" },
                    "params": params,
                    "violation": self.violation,
                    "pairs_sampled": self.pairs_sampled,
                    "seed": self.seed,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("static document");
                s.push('\n');
                s
            }
        }
    }
}

/// A verified structure whose parameters differ from what its family must
/// have is a failure even though it is a design of some other shape.
fn check_family_expectation(
    n: u32,
    kind: DesignKind,
    params: &DesignParams,
) -> Option<String> {
    let (ev, ek, el) = designs::expected_params(n, kind)?;
    if params.t == 2 && (params.v, params.k, params.lambda) != (ev, ek, el) {
        return Some(format!(
            "parameters {params} differ from the family's 2-({ev},{ek},{el})"
        ));
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    n: Option<u32>,
    kind: Option<KindArg>,
    modulus: &Option<String>,
    input: &Option<PathBuf>,
    t: u32,
    seed: u64,
    pairs: usize,
    exhaustive: bool,
    format: VerifyFormat,
) -> anyhow::Result<u8> {
    ensure!(t == 1 || t == 2, "--t must be 1 or 2");

    let outcome = if let Some(path) = input {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let (ctx, d) = designs::parse_blockset(&text)?;
        if let Some(nn) = n {
            ensure!(nn == ctx.n(), "file is over GF(2^{}), --n says {nn}", ctx.n());
        }
        if let Some(m) = modulus {
            let m = parse_modulus(m)?;
            ensure!(
                m == ctx.modulus(),
                "file uses modulus {:x}, --modulus says {m:x}",
                ctx.modulus()
            );
        }
        if let Some(k) = kind {
            ensure!(
                k.kind() == d.kind(),
                "file holds a {} design, --kind says {}",
                d.kind().as_str(),
                k.kind().as_str()
            );
        }
        let (params, violation) = split_verify(ctx.n(), d.kind(), designs::verify_design(&d, t));
        VerifyOutcome {
            n: ctx.n(),
            modulus: ctx.modulus(),
            kind: d.kind(),
            t,
            mode: "exhaustive, from file",
            params,
            violation,
            pairs_sampled: None,
            seed: None,
        }
    } else {
        let (Some(n), Some(kind)) = (n, kind) else {
            bail!("--n and --kind are required when no --in file is given");
        };
        let ctx = field(n, modulus)?;
        let kind = kind.kind();
        if n <= report::EXHAUSTIVE_MAX_N || exhaustive {
            let d = designs::build_design_any(&ctx, kind)?;
            let (params, violation) = split_verify(n, kind, designs::verify_design(&d, t));
            VerifyOutcome {
                n,
                modulus: ctx.modulus(),
                kind,
                t,
                mode: "exhaustive",
                params,
                violation,
                pairs_sampled: None,
                seed: None,
            }
        } else {
            ensure!(
                t == 2,
                "--t 1 above n = {} needs --exhaustive",
                report::EXHAUSTIVE_MAX_N
            );
            let res = designs::verify_design_sampled(&ctx, kind, pairs, seed)?;
            let (params, violation) = match res {
                Ok(sv) => {
                    let viol = check_family_expectation(n, kind, &sv.params);
                    (Some(sv.params), viol)
                }
                Err(v) => (None, Some(v.to_string())),
            };
            VerifyOutcome {
                n,
                modulus: ctx.modulus(),
                kind,
                t,
                mode: "sampled",
                params,
                violation,
                pairs_sampled: Some(pairs as u64),
                seed: Some(seed),
            }
        }
    };

    print!("{}", outcome.render(format));
    std::io::stdout().flush()?;
    Ok(if outcome.passed() {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}

fn split_verify(
    n: u32,
    kind: DesignKind,
    res: Result<DesignParams, designs::DesignViolation>,
) -> (Option<DesignParams>, Option<String>) {
    match res {
        Ok(p) => {
            let viol = check_family_expectation(n, kind, &p);
            (Some(p), viol)
        }
        Err(v) => (None, Some(v.to_string())),
    }
}

fn cmd_aut(
    n: u32,
    kind: KindArg,
    modulus: &Option<String>,
    force: bool,
    out: &Option<PathBuf>,
    group_out: &Option<PathBuf>,
) -> anyhow::Result<u8> {
    let ctx = field(n, modulus)?;
    let rep = autgroup::aut_report(&ctx, kind.kind(), force)?;
    let mut js = serde_json::to_string_pretty(&rep)?;
    js.push('\n');
    emit(out, &js)?;
    if let Some(p) = group_out {
        let d = designs::build_design_any(&ctx, kind.kind())?;
        let g = autgroup::brute_aut(&d, force)?;
        std::fs::write(p, permgrp::io::format_group(&g))
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(EXIT_PASS)
}

/// `4` or an inclusive range `2..8` (a `..=` spelling is tolerated).
fn parse_n_range(s: &str) -> anyhow::Result<std::ops::RangeInclusive<u32>> {
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let lo: u32 = a.trim().parse().with_context(|| format!("bad range start {a:?}"))?;
        let hi: u32 = b.trim().parse().with_context(|| format!("bad range end {b:?}"))?;
        ensure!(lo <= hi, "empty range {s:?}");
        Ok(lo..=hi)
    } else {
        let n: u32 = s.trim().parse().with_context(|| format!("bad exponent {s:?}"))?;
        Ok(n..=n)
    }
}

fn cmd_report(
    n_arg: &str,
    with_aut: bool,
    seed: u64,
    pairs: usize,
    force: bool,
    format: ReportFormat,
    out: &Option<PathBuf>,
) -> anyhow::Result<u8> {
    let range = parse_n_range(n_arg)?;
    let opts = ReportOptions {
        with_aut,
        seed,
        sample_pairs: pairs,
        force,
    };
    let mut rows = Vec::new();
    for n in range {
        rows.extend(report::claims_for_n(n, &opts)?);
    }
    let text = match format {
        ReportFormat::Text => report::render_text(&rows),
        ReportFormat::Json => report::render_json(&rows, &opts),
        ReportFormat::Csv => report::render_csv(&rows),
    };
    emit(out, &text)?;
    Ok(match report::worst_status(&rows) {
        ClaimStatus::Pass => EXIT_PASS,
        ClaimStatus::Fail => EXIT_VIOLATION,
        ClaimStatus::Inconclusive => EXIT_INCONCLUSIVE,
    })
}
