use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use tma_core::asymptotics::{default_samples, growth_report};
use tma_core::enumerate::{
    crosscheck, phi_closed, phi_oracle, phi_published_formula, published_formula_text, table,
    DEFAULT_CAP,
};
use tma_core::tilings::validate;
use tma_core::{Catalog, Error, MapTypeId};

const EXIT_DISAGREE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_CAP: u8 = 65;
const EXIT_INPUT: u8 = 66;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(
    name = "tma",
    version,
    about = "Count and list 2-uniform maps on the torus"
)]
struct Cli {
    /// Directory of tiling JSON files overriding built-in specs by id.
    #[arg(long, global = true, env = "TMA_TILINGS_DIR")]
    tilings: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    parallel: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Number of maps of a type with a given vertex count.
    Count {
        #[arg(long = "type", value_parser = parse_type)]
        ell: MapTypeId,
        #[arg(long)]
        vertices: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also run the orbit oracle.
        #[arg(long)]
        oracle: bool,
        /// Exit 2 when the closed form and the oracle disagree (implies --oracle).
        #[arg(long)]
        strict: bool,
        /// Also report the value of the published formula where it differs.
        #[arg(long)]
        published: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Representatives of every isomorphism class.
    List {
        #[arg(long = "type", value_parser = parse_type)]
        ell: MapTypeId,
        #[arg(long)]
        vertices: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Counts at the first k multiples of v0 beside the published values.
    Table {
        #[arg(long, default_value_t = 10)]
        rows: u64,
        /// `all` or a comma-separated list of types.
        #[arg(long, default_value = "all")]
        types: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare closed forms with the orbit oracle for n up to --max-sheets.
    Verify {
        #[arg(long, default_value_t = 10)]
        max_sheets: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the self-checks on every tiling spec.
    ValidateTilings {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Counts against their growth bounds.
    Asymptotics {
        #[arg(long = "type", value_parser = parse_type)]
        ell: MapTypeId,
        #[arg(long, default_value_t = 10_000)]
        max_v: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn parse_type(s: &str) -> Result<MapTypeId, String> {
    let n: u32 = s
        .parse()
        .map_err(|_| format!("'{s}' is not a type number"))?;
    MapTypeId::new(n).map_err(|e| e.to_string())
}

fn parse_types(s: &str) -> Result<Vec<MapTypeId>, Failure> {
    if s.trim() == "all" {
        return Ok(MapTypeId::all().collect());
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let t = parse_type(part.trim()).map_err(Failure::Usage)?;
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out.sort();
    Ok(out)
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

struct Output {
    stdout: String,
    code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn no_csv(cmd: &str) -> Failure {
    Failure::Usage(format!("{cmd} has no csv output"))
}

fn catalog(cli: &Cli) -> Result<Catalog, Failure> {
    Ok(match &cli.tilings {
        Some(dir) => Catalog::with_overrides(dir)?,
        None => Catalog::builtin(),
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.cmd {
        Cmd::Count {
            ell,
            vertices,
            format,
            oracle,
            strict,
            published,
            cap,
        } => cmd_count(
            cli,
            *ell,
            *vertices,
            *format,
            *oracle || *strict,
            *strict,
            *published,
            *cap,
        ),
        Cmd::List {
            ell,
            vertices,
            format,
            cap,
        } => cmd_list(cli, *ell, *vertices, *format, *cap),
        Cmd::Table {
            rows,
            types,
            format,
        } => {
            let t = table(&parse_types(types)?, *rows)?;
            Ok(Output::ok(match format {
                Format::Text => t.to_text(),
                Format::Json => to_json(&t),
                Format::Csv => t.to_csv()?,
            }))
        }
        Cmd::Verify {
            max_sheets,
            cap,
            format,
        } => {
            let report = crosscheck(&catalog(cli)?, *max_sheets, *cap)?;
            let stdout = match format {
                Format::Text => report.to_text(),
                Format::Json => to_json(&report),
                Format::Csv => return Err(no_csv("verify")),
            };
            let code = if report.unexplained() > 0 {
                EXIT_DISAGREE
            } else {
                0
            };
            Ok(Output { stdout, code })
        }
        Cmd::ValidateTilings { format } => cmd_validate(cli, *format),
        Cmd::Asymptotics { ell, max_v, format } => {
            let samples = default_samples(*ell, *max_v);
            if samples.is_empty() {
                return Err(Failure::Usage(format!(
                    "--max-v {max_v} leaves no sample inside the bound's domain for type {}",
                    ell.ell()
                )));
            }
            let report = growth_report(*ell, &samples)?;
            Ok(Output::ok(match format {
                Format::Text => report.to_text(),
                Format::Json => to_json(&report),
                Format::Csv => report.to_csv()?,
            }))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_count(
    cli: &Cli,
    ell: MapTypeId,
    v: u64,
    format: Format,
    oracle: bool,
    strict: bool,
    published: bool,
    cap: u64,
) -> Result<Output, Failure> {
    let closed = phi_closed(ell, v)?;
    let result = if oracle {
        Some(phi_oracle(&catalog(cli)?, ell, v, cap)?)
    } else {
        None
    };
    let published_value = if published && published_formula_text(ell).is_some() {
        Some(phi_published_formula(ell, v))
    } else {
        None
    };
    let count_oracle = result.as_ref().and_then(|r| r.count_oracle);
    let agreement = result.as_ref().and_then(|r| r.agreement);
    let stdout = match format {
        Format::Text => {
            let mut s = format!("{closed}\n");
            if let Some(o) = count_oracle {
                let verdict = if agreement == Some(true) {
                    "agrees"
                } else {
                    "DISAGREES"
                };
                let _ = writeln!(s, "oracle: {o} ({verdict})");
            }
            if let Some(p) = &published_value {
                match p {
                    Ok(p) => {
                        let _ = writeln!(s, "published formula: {p}");
                    }
                    Err(e) => {
                        let _ = writeln!(s, "published formula: {e}");
                    }
                }
            }
            s
        }
        Format::Json => {
            let mut value = json!({
                "type": ell,
                "vertices": v,
                "sheets": ell.sheets(v),
                "count_closed": closed,
                "count_oracle": count_oracle,
                "agreement": agreement,
            });
            if let Some(p) = &published_value {
                value["count_published_formula"] = match p {
                    Ok(p) => json!(p),
                    Err(e) => json!(e.to_string()),
                };
            }
            to_json(&value)
        }
        Format::Csv => {
            let opt = |x: Option<String>| x.unwrap_or_default();
            let mut s = String::from("type,vertices,sheets,count_closed,count_oracle,agreement\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                ell.ell(),
                v,
                opt(ell.sheets(v).map(|n| n.to_string())),
                closed,
                opt(count_oracle.map(|n| n.to_string())),
                opt(agreement.map(|b| b.to_string())),
            );
            s
        }
    };
    let code = if strict && agreement == Some(false) {
        EXIT_DISAGREE
    } else {
        0
    };
    Ok(Output { stdout, code })
}

fn cmd_list(
    cli: &Cli,
    ell: MapTypeId,
    v: u64,
    format: Format,
    cap: u64,
) -> Result<Output, Failure> {
    let result = phi_oracle(&catalog(cli)?, ell, v, cap)?;
    Ok(Output::ok(match format {
        Format::Text => {
            let mut s = String::new();
            for rep in &result.representatives {
                let _ = writeln!(s, "{}  isotropy: {}", rep.hnf, rep.isotropy.join(","));
            }
            s
        }
        Format::Json => to_json(&result.representatives),
        Format::Csv => return Err(no_csv("list")),
    }))
}

fn cmd_validate(cli: &Cli, format: Format) -> Result<Output, Failure> {
    let cat = catalog(cli)?;
    let reports: Vec<_> = cat.specs().iter().map(validate).collect();
    let passed = reports.iter().filter(|r| r.passed()).count();
    let stdout = match format {
        Format::Text => {
            let mut s = String::new();
            for (spec, r) in cat.specs().iter().zip(&reports) {
                let _ = writeln!(
                    s,
                    "E{:02} {:<28} {} orbits={} group={} stabilizer={}",
                    spec.id,
                    spec.type_string,
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.orbit_count,
                    r.point_group_order,
                    r.origin_stabilizer_order,
                );
                for c in r.checks.iter().filter(|c| !c.passed) {
                    for f in &c.failures {
                        let _ = writeln!(s, "    {}: {}", c.name, f);
                    }
                }
            }
            let _ = writeln!(s, "{passed}/{} pass", reports.len());
            s
        }
        Format::Json => to_json(&reports),
        Format::Csv => return Err(no_csv("validate-tilings")),
    };
    let code = if passed == reports.len() {
        0
    } else {
        EXIT_DISAGREE
    };
    Ok(Output { stdout, code })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(n) = cli.parallel {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
        {
            eprintln!("tma: cannot start {n} workers: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("tma: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("tma: {e}");
            ExitCode::from(match e {
                Error::Domain(_) => EXIT_USAGE,
                Error::CapExceeded { .. } => EXIT_CAP,
                Error::Schema { .. } | Error::Io(_) => EXIT_INPUT,
                _ => EXIT_INTERNAL,
            })
        }
    }
}
