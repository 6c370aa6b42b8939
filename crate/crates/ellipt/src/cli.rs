//! Argument definitions and handlers for the `assoc`, `elliptic`,
//! `diagrams`, `lie` and `report` binaries.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ellipt_core::algebra::{IntersectionForm, Presentation, TruncatedAlgebra};
use ellipt_core::associator::{self, AssociatorContext, AssociatorSeries, GaugeRule, SolverConfig};
use ellipt_core::diagrams::{self, DiagramClass, SpaceSlice, SpaceSpec};
use ellipt_core::elliptic::{build_e_phi, EllipticContext};
use ellipt_core::expr;
use ellipt_core::lie::{self, Alphabet};
use serde::Serialize;

use crate::checks::CheckResult;
use crate::error::{CliError, Result};
use crate::json;
use crate::report::{self, Config};

/// Parses arguments and runs `handler`, mapping errors to exit codes:
/// 0 on success, 1 on a failed check, 2 on usage or input errors.
pub fn main_with<C: Parser>(handler: fn(C) -> Result<()>) -> ExitCode {
    let args = match C::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match handler(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn print_counts(label: &str, counts: &[usize]) {
    let cells: Vec<String> = counts.iter().enumerate().skip(1).map(|(d, c)| format!("d{d}={c}")).collect();
    println!("{label:<16} {}", cells.join(" "));
}

fn solve_phi(max_degree: usize, even: bool, gauge: GaugeRule) -> Result<AssociatorSeries> {
    Ok(associator::solve(&SolverConfig { max_degree, even, gauge })?)
}

fn load_phi(path: &Path, max_degree: usize) -> Result<AssociatorSeries> {
    let (phi, _) = report::load_phi(&report::PhiSource::File { path: path.to_path_buf() }, max_degree, true)?;
    Ok(phi.truncate(max_degree))
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Gauge {
    Lex,
    Revlex,
}

#[derive(Debug, Parser)]
#[command(name = "assoc", version, about = "Solve and check Drinfeld associators")]
pub struct AssocCli {
    #[command(subcommand)]
    pub command: AssocCommand,
}

#[derive(Debug, Subcommand)]
pub enum AssocCommand {
    /// Solve pentagon and hexagons degree by degree and write log φ.
    Solve {
        #[arg(long)]
        max_degree: usize,
        /// Impose φ(-A, -B) = φ(A, B).
        #[arg(long)]
        even: bool,
        #[arg(long, value_enum, default_value = "lex")]
        gauge: Gauge,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print per-degree nonzero residual counts.
    Check {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        max_degree: usize,
    },
}

pub fn run_assoc(cli: AssocCli) -> Result<()> {
    match cli.command {
        AssocCommand::Solve { max_degree, even, gauge, out } => {
            let gauge = match gauge {
                Gauge::Lex => GaugeRule::Lexicographic,
                Gauge::Revlex => GaugeRule::ReverseLexicographic,
            };
            let phi = solve_phi(max_degree, even, gauge)?;
            json::write_json(&out, &json::lie_to_json(phi.log_phi()))?;
            println!("log phi = {}", phi.log_phi());
            Ok(())
        }
        AssocCommand::Check { phi, max_degree } => {
            let phi = load_phi(&phi, max_degree)?;
            let ctx = AssociatorContext::new(max_degree)?;
            let res = ctx.residuals(&phi, max_degree)?;
            let mut bad = Vec::new();
            for (name, r) in ["pentagon", "hexagon+", "hexagon-"].iter().zip(&res) {
                print_counts(name, &r.nonzero_counts());
                if !r.is_zero() {
                    bad.push(*name);
                }
            }
            if bad.is_empty() {
                Ok(())
            } else {
                Err(CliError::Check(format!("nonzero residuals: {}", bad.join(", "))))
            }
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "elliptic", version, about = "Build e(φ) and verify the elliptic identities")]
pub struct EllipticCli {
    #[command(subcommand)]
    pub command: EllipticCommand,
}

#[derive(Debug, Subcommand)]
pub enum EllipticCommand {
    /// Write X and Y of e(φ) as elements of the free algebra on A, B.
    Build {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per identity and degree: nonzero residual counts and wall time.
    Verify {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        max_degree: usize,
        /// 1, 2, 3, 4 or all.
        #[arg(long, default_value = "all")]
        identity: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct EPhiJson {
    x: json::AlgebraElementJson,
    y: json::AlgebraElementJson,
}

#[derive(Serialize)]
struct IdentityJson {
    identity: usize,
    nonzero: Vec<usize>,
    pass: bool,
    wall_ms: u64,
}

pub fn run_elliptic(cli: EllipticCli) -> Result<()> {
    match cli.command {
        EllipticCommand::Build { phi, max_degree, out } => {
            let phi = load_phi(&phi, max_degree)?;
            let pair = build_e_phi(&phi, max_degree)?;
            let free = TruncatedAlgebra::free(&Alphabet::ab(), max_degree);
            let doc = EPhiJson { x: json::element_to_json(&free, &pair.x), y: json::element_to_json(&free, &pair.y) };
            json::write_json(&out, &doc)
        }
        EllipticCommand::Verify { phi, max_degree, identity, json: out } => {
            let which: Vec<usize> = match identity.as_str() {
                "all" => vec![1, 2, 3, 4],
                s => match s.parse() {
                    Ok(k @ 1..=4) => vec![k],
                    _ => return Err(CliError::Usage(format!("--identity must be 1, 2, 3, 4 or all, got {s:?}"))),
                },
            };
            let phi = load_phi(&phi, max_degree)?;
            let pair = build_e_phi(&phi, max_degree)?;
            let ctx = EllipticContext::new(max_degree, IntersectionForm::CENTRAL)?;
            let mut rows = Vec::new();
            for k in which {
                let t = Instant::now();
                let r = ctx.residual(k, &pair, max_degree)?;
                let ms = t.elapsed().as_millis() as u64;
                let counts = r.nonzero_counts();
                print_counts(&format!("identity {k}"), &counts);
                println!("{:<16} {ms} ms", "");
                rows.push(IdentityJson { identity: k, nonzero: counts[1..].to_vec(), pass: r.is_zero(), wall_ms: ms });
            }
            if let Some(p) = out {
                json::write_json(&p, &rows)?;
            }
            let bad: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| r.identity.to_string()).collect();
            if bad.is_empty() {
                Ok(())
            } else {
                Err(CliError::Check(format!("identities with nonzero residual: {}", bad.join(", "))))
            }
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "diagrams", version, about = "Diagram spaces, the u-map and normalizers")]
pub struct DiagramsCli {
    #[command(subcommand)]
    pub command: DiagramsCommand,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Normalize {
    Phi,
    Gamma,
    Beta,
    Alpha,
}

#[derive(Debug, Subcommand)]
pub enum DiagramsCommand {
    /// Dimension of a space slice: full, R, SR, SRmodH, OSR or FOSR.
    Dim {
        #[arg(long)]
        space: String,
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Evaluate EXPR over the t_{1,n} generators and map it to diagrams.
    Umap {
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        mod_h: bool,
        #[arg(long, value_enum)]
        normalize: Option<Normalize>,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Rank report for the restricted u-map onto SR/H_n.
    #[command(name = "check-restricted-iso", alias = "check-theorem52")]
    CheckIso {
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        max_degree: usize,
    },
}

pub fn run_diagrams(cli: DiagramsCli) -> Result<()> {
    match cli.command {
        DiagramsCommand::Dim { space, strands, degree } => {
            let class =
                DiagramClass::parse(&space).ok_or_else(|| CliError::Usage(format!("unknown space {space:?}")))?;
            if strands == 0 {
                return Err(CliError::Usage("--strands must be positive".into()));
            }
            let slice = SpaceSlice::build(SpaceSpec::new(class, strands, degree))?;
            println!(
                "{} n={strands} d={degree}: dim {} (spanning diagrams {})",
                class.name(),
                slice.dim(),
                slice.ambient_dim()
            );
            Ok(())
        }
        DiagramsCommand::Umap { strands, expr: src, mod_h, normalize, max_degree } => {
            let t1n = TruncatedAlgebra::t1n_with_form(strands, max_degree, IntersectionForm::CENTRAL)?;
            let pres = Presentation { relations: Vec::new(), ..t1n.presentation().clone() };
            let free = TruncatedAlgebra::new(format!("free t1n({strands})"), pres, max_degree)?;
            let e = expr::parse(&src, &free)?;
            let mut d = diagrams::u_map(&free, &e, strands)?;
            if let Some(n) = normalize {
                d = match n {
                    Normalize::Phi => diagrams::phi_normalize(&d)?,
                    Normalize::Gamma => diagrams::gamma_normalize(&d)?,
                    Normalize::Beta => diagrams::beta_normalize(&d)?,
                    Normalize::Alpha => diagrams::alpha_normalize(&d)?,
                };
            }
            if mod_h {
                d = diagrams::mod_h(&d)?;
            }
            print!("{}", json::to_text(&json::diagram_element_to_json(strands, &d)));
            Ok(())
        }
        DiagramsCommand::CheckIso { strands, max_degree } => {
            if !(2..=3).contains(&strands) {
                return Err(CliError::Usage("--strands must be 2 or 3".into()));
            }
            let c = crate::checks::restricted_iso(strands, max_degree)?;
            for row in diagrams::restricted_iso_report(strands, max_degree)? {
                println!(
                    "d={} source={} target={} rank={} joint={} injective={} surjective={}",
                    row.degree,
                    row.source_dim,
                    row.target_dim,
                    row.image_rank,
                    row.joint_rank,
                    row.injective,
                    row.surjective
                );
            }
            finish(&c)
        }
    }
}

fn finish(c: &CheckResult) -> Result<()> {
    if c.pass {
        Ok(())
    } else {
        Err(CliError::Check(format!("{} failed", c.name)))
    }
}

#[derive(Debug, Parser)]
#[command(name = "lie", version, about = "Exact free Lie algebra utilities")]
pub struct LieCli {
    #[command(subcommand)]
    pub command: LieCommand,
}

#[derive(Debug, Subcommand)]
pub enum LieCommand {
    /// log(exp(a) exp(b)) for Lie expressions in A, B.
    Bch {
        #[arg(long)]
        max_degree: usize,
        #[arg(long, default_value = "A")]
        a: String,
        #[arg(long, default_value = "B")]
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run_lie(cli: LieCli) -> Result<()> {
    match cli.command {
        LieCommand::Bch { max_degree, a, b, out } => {
            let ab = Alphabet::ab();
            let free = TruncatedAlgebra::free(&ab, max_degree);
            let to_lie = |src: &str| -> Result<lie::LieSeries> {
                let e = expr::parse(src, &free)?;
                if !e.constant().is_zero() {
                    return Err(CliError::Usage(format!("{src:?} has a constant term")));
                }
                free.to_lie(&e).map_err(|_| CliError::Usage(format!("{src:?} is not a Lie element")))
            };
            let z = lie::bch(&to_lie(&a)?, &to_lie(&b)?, max_degree)?;
            println!("{z}");
            if let Some(p) = out {
                json::write_json(&p, &json::lie_to_json(&z))?;
            }
            Ok(())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "report", version, about = "Run configured checks and write a JSON report")]
pub struct ReportCli {
    #[command(subcommand)]
    pub command: ReportCommand,
}

#[derive(Debug, Subcommand)]
pub enum ReportCommand {
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Include wall times (the report is then no longer reproducible).
        #[arg(long)]
        timings: bool,
    },
}

pub fn run_report(cli: ReportCli) -> Result<()> {
    let ReportCommand::Run { config, out, timings } = cli.command;
    let cfg = Config::load(&config)?;
    let rep = report::run_all(&cfg, timings)?;
    json::write_json(&out, &rep)?;
    for c in &rep.checks {
        println!("{:<4} {:<36} nonzero {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.total_nonzero());
    }
    if rep.pass {
        Ok(())
    } else {
        Err(CliError::Check(format!("failing checks: {}", rep.failing().join(", "))))
    }
}
