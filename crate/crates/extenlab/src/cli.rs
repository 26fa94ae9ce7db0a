//! Command-line front end.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use extenlab_core::certificates::{check_certificate, Certificate, Status};
use extenlab_core::maps::{example_family, Member};
use extenlab_core::reproduce::{
    example_family_name, example_info, list_examples, member_certificate, run_example, Params,
};
use extenlab_core::spaces::{
    cone, make_space, opc_disjoint_union, product_with, spiked_base_pair, AnnotatedSpace, Factor,
    SpaceSpec,
};
use extenlab_core::Resolution;

use crate::data_dir;
use crate::formats::{read_json, to_json, FormatError, MapFile, PairFile, SpaceFile};
use crate::render;

const DEFAULT_SPACE_EXPONENT: u32 = 6;

#[derive(Debug, Parser)]
#[command(
    name = "extenlab",
    version,
    about = "Extension problems on compact metric spaces at finite resolution"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List, run or export the named examples.
    #[command(subcommand)]
    Example(ExampleCommand),
    /// Check a certificate file against a problem file.
    Certify {
        problem: PathBuf,
        certificate: PathBuf,
        /// Write the verdict here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect spaces.
    #[command(subcommand)]
    Space(SpaceCommand),
    /// Build a space or pair file from catalog spaces or space files.
    #[command(subcommand)]
    Construct(ConstructCommand),
}

#[derive(Debug, Subcommand)]
enum ExampleCommand {
    List {
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    Run {
        name: String,
        /// Net resolution, written `2^-k`.
        #[arg(long)]
        epsilon: Option<Resolution>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG sketch of the pair and the limit map.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Write the problem and certificate files for one member of a sequence example.
    Export {
        name: String,
        /// `limit` or a positive integer.
        #[arg(long)]
        member: MemberArg,
        #[arg(long)]
        epsilon: Option<Resolution>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum SpaceCommand {
    Info {
        /// Catalog name or space file.
        space: String,
        #[arg(long)]
        epsilon: Option<Resolution>,
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
}

#[derive(Debug, Args)]
struct SpaceArg {
    /// Catalog name or space file.
    space: String,
    #[arg(long)]
    epsilon: Option<Resolution>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ConstructCommand {
    /// The cone `A × [0,1] / A × {1}`.
    Cone(SpaceArg),
    /// `A × F` with the max metric.
    Product {
        #[command(flatten)]
        base: SpaceArg,
        #[arg(long, value_enum)]
        factor: FactorArg,
        /// Sampling step of the interval factor, or resolution of the `N†` factor.
        #[arg(long)]
        step: Option<Resolution>,
    },
    /// One-point compactification of a disjoint union of copies of the listed spaces.
    Opc {
        #[arg(required = true)]
        spaces: Vec<String>,
        #[arg(long)]
        epsilon: Option<Resolution>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The pair `(cone(V), V × {0} ∪ {p} × [0,1])` for a named basepoint `p`.
    Spiked {
        #[command(flatten)]
        base: SpaceArg,
        #[arg(long, default_value = "p")]
        basepoint: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ListFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FactorArg {
    Interval,
    Ndagger,
}

#[derive(Debug, Clone, Copy)]
struct MemberArg(Member);

impl FromStr for MemberArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "limit" => Ok(MemberArg(Member::Limit)),
            _ => match s.parse::<usize>() {
                Ok(n) if n > 0 => Ok(MemberArg(Member::N(n))),
                _ => Err(format!("expected `limit` or a positive integer, got `{s}`")),
            },
        }
    }
}

/// A failed invocation with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<extenlab_core::Error> for Failure {
    fn from(e: extenlab_core::Error) -> Self {
        use extenlab_core::Error::*;
        match e {
            UnknownName(_)
            | InvalidArgument(_)
            | NotDyadic(_)
            | BeyondTruncation { .. }
            | DomainMismatch(_) => Failure::invalid(e.to_string()),
            _ => Failure::internal(e.to_string()),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Core(e) => e.into(),
            other => Failure::invalid(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::invalid(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

/// Exit code for a verdict status.
pub fn status_code(status: Status) -> u8 {
    match status {
        Status::Verified => 0,
        Status::Refuted => 2,
        Status::InvalidCertificate => 3,
        Status::InconsistentInput => 4,
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Example(ExampleCommand::List { format }) => example_list(format),
        Command::Example(ExampleCommand::Run {
            name,
            epsilon,
            n_max,
            format,
            out,
            svg,
        }) => example_run(
            &name,
            epsilon,
            n_max,
            format,
            out.as_deref(),
            svg.as_deref(),
        ),
        Command::Example(ExampleCommand::Export {
            name,
            member,
            epsilon,
            out_dir,
        }) => example_export(&name, member.0, epsilon, &out_dir),
        Command::Certify {
            problem,
            certificate,
            out,
        } => certify(&problem, &certificate, out.as_deref()),
        Command::Space(SpaceCommand::Info {
            space,
            epsilon,
            format,
        }) => space_info(&space, epsilon, format),
        Command::Construct(c) => construct(c),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::internal(e.to_string()))
        }
    }
}

fn example_list(format: ListFormat) -> Outcome {
    let text = match format {
        ListFormat::Json => to_json(&list_examples()),
        ListFormat::Text => {
            let mut s = String::new();
            for e in list_examples() {
                s.push_str(&format!(
                    "{:<18} 2^-{:<3} n_max {:<3} {}\n",
                    e.name, e.default_exponent, e.default_n_max, e.anchor
                ));
            }
            s
        }
    };
    emit(&text, None)?;
    Ok(0)
}

fn example_run(
    name: &str,
    epsilon: Option<Resolution>,
    n_max: Option<usize>,
    format: Format,
    out: Option<&Path>,
    svg: Option<&Path>,
) -> Outcome {
    let info = example_info(name)?;
    let family = example_family_name(name);
    if svg.is_some() && family.is_none() {
        return Err(Failure::invalid(format!(
            "no SVG sketch for `{name}`: only sequence examples have one"
        )));
    }
    let defaults = info.default_params();
    let params = Params {
        resolution: epsilon.unwrap_or(defaults.resolution),
        n_max: n_max.unwrap_or(defaults.n_max),
    };
    let start = Instant::now();
    let report = run_example(name, params)?;
    eprintln!("{name}: {:.2} s", start.elapsed().as_secs_f64());
    let text = match format {
        Format::Text => render::text(&report),
        Format::Json => render::json(&report),
        Format::Csv => render::csv(&report),
    };
    emit(&text, out)?;
    if let (Some(path), Some(family)) = (svg, family) {
        let family = example_family(family, params.resolution)?;
        match render::svg(family.pair(), family.limit()) {
            Some(sketch) => emit(&sketch, Some(path))?,
            None => eprintln!("{name}: not planar, no sketch written"),
        }
    }
    Ok(status_code(report.worst_status()))
}

fn example_export(
    name: &str,
    member: Member,
    epsilon: Option<Resolution>,
    out_dir: &Path,
) -> Outcome {
    let info = example_info(name)?;
    let family_name = example_family_name(name).ok_or_else(|| {
        Failure::invalid(format!(
            "`{name}` is not a sequence example; nothing to export"
        ))
    })?;
    let res = epsilon.unwrap_or(info.default_params().resolution);
    let family = example_family(family_name, res)?;
    let phi = family.get(member)?;
    let cert = member_certificate(&family, member)?;
    fs::create_dir_all(out_dir)?;
    let stem = match member {
        Member::N(n) => format!("{name}-{n}"),
        Member::Limit => format!("{name}-limit"),
    };
    let problem = out_dir.join(format!("{stem}.problem.json"));
    let certificate = out_dir.join(format!("{stem}.certificate.json"));
    emit(
        &to_json(&MapFile::problem(family.pair(), &phi)),
        Some(&problem),
    )?;
    emit(&to_json(&cert), Some(&certificate))?;
    println!("{}", problem.display());
    println!("{}", certificate.display());
    Ok(0)
}

/// An existing path, or the same name under the data directory.
fn locate(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    let shipped = data_dir().join(path);
    if shipped.exists() {
        shipped
    } else {
        path.to_path_buf()
    }
}

fn certify(problem: &Path, certificate: &Path, out: Option<&Path>) -> Outcome {
    let file: MapFile = read_json(&locate(problem))?;
    let cert: Certificate = read_json(&locate(certificate))?;
    let problem = file.load_problem()?;
    let verdict = check_certificate(&problem.pair, &problem.phi, &cert);
    emit(&to_json(&verdict), out)?;
    Ok(status_code(verdict.status))
}

/// A catalog name at the given resolution, a space file, or a space file shipped in
/// the data directory under `spaces/NAME.json`.
fn load_space(arg: &str, epsilon: Option<Resolution>) -> Result<AnnotatedSpace, Failure> {
    if let Ok(spec) = arg.parse::<SpaceSpec>() {
        let res = match epsilon {
            Some(r) => r,
            None => Resolution::new(DEFAULT_SPACE_EXPONENT)?,
        };
        return Ok(make_space(spec, res)?);
    }
    let direct = Path::new(arg);
    let path = if direct.exists() {
        direct.to_path_buf()
    } else {
        let shipped = data_dir().join("spaces").join(format!("{arg}.json"));
        if !shipped.exists() {
            return Err(Failure::invalid(format!(
                "`{arg}` is neither a catalog name nor a space file"
            )));
        }
        shipped
    };
    if epsilon.is_some() {
        return Err(Failure::invalid(
            "--epsilon applies to catalog names only; a space file fixes its own net",
        ));
    }
    let file: SpaceFile = read_json(&path)?;
    Ok(file.load()?)
}

fn space_info(arg: &str, epsilon: Option<Resolution>, format: ListFormat) -> Outcome {
    let space = load_space(arg, epsilon)?;
    let resolution = match Resolution::from_eps(space.eps()) {
        Ok(r) => r.to_string(),
        Err(_) => space.eps().to_string(),
    };
    let text = match format {
        ListFormat::Json => to_json(&serde_json::json!({
            "name": space.name(),
            "resolution": resolution,
            "net_size": space.len(),
            "path_components": space.component_count(),
            "component_names": space.component_names(),
            "clopen_atoms": space.clopen().atom_count(),
            "anr": space.anr(),
        })),
        ListFormat::Text => {
            let mut s = format!(
                "name: {}\nresolution: {}\nnet size: {}\npath components: {}\nclopen atoms: {}\n",
                space.name(),
                resolution,
                space.len(),
                space.component_count(),
                space.clopen().atom_count()
            );
            if let Some(anr) = space.anr() {
                s.push_str(&format!(
                    "anr: {}\n",
                    serde_json::to_value(anr).unwrap_or_default()
                ));
            }
            s
        }
    };
    emit(&text, None)?;
    Ok(0)
}

fn construct(command: ConstructCommand) -> Outcome {
    let (text, out) = match command {
        ConstructCommand::Cone(arg) => {
            let a = load_space(&arg.space, arg.epsilon)?;
            (to_json(&SpaceFile::from_space(&cone(&a)?)), arg.out)
        }
        ConstructCommand::Product { base, factor, step } => {
            let a = load_space(&base.space, base.epsilon)?;
            let step = match step {
                Some(s) => s,
                None => Resolution::from_eps(a.eps())?,
            };
            let factor = match factor {
                FactorArg::Interval => Factor::Interval { step },
                FactorArg::Ndagger => Factor::Ndagger { resolution: step },
            };
            (
                to_json(&SpaceFile::from_space(&product_with(&a, factor)?)),
                base.out,
            )
        }
        ConstructCommand::Opc {
            spaces,
            epsilon,
            out,
        } => {
            let blocks = spaces
                .iter()
                .map(|s| load_space(s, epsilon))
                .collect::<Result<Vec<_>, _>>()?;
            (
                to_json(&SpaceFile::from_space(&opc_disjoint_union(&blocks)?)),
                out,
            )
        }
        ConstructCommand::Spiked { base, basepoint } => {
            let v = load_space(&base.space, base.epsilon)?;
            let p = v.basepoint(&basepoint).ok_or_else(|| {
                Failure::invalid(format!("{} has no basepoint `{basepoint}`", v.name()))
            })?;
            let pair = spiked_base_pair(&Arc::new(v), p)?;
            (to_json(&PairFile::from_pair(&pair)), base.out)
        }
    };
    emit(&text, out.as_deref())?;
    Ok(0)
}
