//! Command-line front end: construct, verify, simulate, compare, tables.
//!
//! Exit codes: 0 success, 1 verification or simulation failure,
//! 2 parameter error, 3 I/O or parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pdacache::coded::strip_useless;
use pdacache::compare::{self, ComparatorRow};
use pdacache::construct::{
    construct_flexible_pda, construct_hypergraph_pda, construct_partition_pda, construct_theorem1,
    transform_theorem2,
};
use pdacache::format::{read_pda, read_pda_json, write_pda, write_pda_json};
use pdacache::oa::{is_proper, read_oa, verify_oa};
use pdacache::ratio::exact_string;
use pdacache::sim::{run_end_to_end, CachingScheme, RunConfig};
use pdacache::verify::{find_useless_stars, verify_pda};
use pdacache::{canonicalize, Error, PdaArray};

#[derive(Parser)]
#[command(
    name = "pdacache",
    version,
    about = "Placement delivery arrays for coded caching"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the primary output to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Prefer JSON on stdout where both forms exist.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for synthetic libraries and sampled demands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BuildScheme {
    Partition,
    Hypergraph,
    Flexible,
    Theorem1,
    Theorem2,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SimScheme {
    Partition,
    Hypergraph,
    Flexible,
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Preset {
    Fig3,
    Table3,
    Table4,
    Table5,
    Custom,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CustomScheme {
    Partition,
    Hypergraph,
    Flexible,
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Scheme15,
    Scheme7Dual,
    Scheme5,
    Scheme6,
    Mn,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Build an array and write it as text plus a JSON sidecar.
    Construct {
        scheme: BuildScheme,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Check the array conditions of a PDA file (or the strength of an
    /// OA file) and emit a JSON report.
    Verify {
        path: PathBuf,
        /// Also report the stars that create no multicast opportunity.
        #[arg(long)]
        useless: bool,
    },
    /// Run placement, delivery, and decoding over a synthetic library.
    Simulate {
        /// Construct the array from a named scheme...
        #[arg(long, value_enum)]
        scheme: Option<SimScheme>,
        /// ...or load it from a file.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Apply coded placement to a loaded file.
        #[arg(long)]
        coded: bool,
        #[command(flatten)]
        params: ParamArgs,
        /// Library size N.
        #[arg(long, default_value_t = 4)]
        files: usize,
        /// File size in bytes; defaults to eight bytes per packet.
        #[arg(long)]
        file_size: Option<usize>,
        /// Comma-separated demand vector; sampled from the seed if absent.
        #[arg(long)]
        demand: Option<String>,
    },
    /// Emit comparison CSV for a preset or a custom sweep.
    Compare {
        preset: Preset,
        #[arg(long, value_enum)]
        scheme: Option<CustomScheme>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Emit the four new-scheme closed forms at one parameter point.
    Tables {
        #[command(flatten)]
        params: ParamArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::DimensionMismatch { .. } => 3,
        _ => 2,
    }
}

fn io_err(err: std::io::Error, path: &Path) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message: format!("{}: {err}", path.display()),
    }
}

struct Need {
    q: u32,
    z: u32,
    m: usize,
    t: usize,
}

fn need(params: &ParamArgs, z_needed: bool, t_needed: bool) -> Result<Need, Error> {
    let q = params
        .q
        .ok_or_else(|| Error::InvalidParams("--q is required".into()))?;
    let m = params
        .m
        .ok_or_else(|| Error::InvalidParams("--m is required".into()))?;
    let z = if z_needed { parse_single_z(params)? } else { 0 };
    let t = if t_needed {
        params
            .t
            .ok_or_else(|| Error::InvalidParams("--t is required".into()))?
    } else {
        0
    };
    Ok(Need { q, z, m, t })
}

fn parse_single_z(params: &ParamArgs) -> Result<u32, Error> {
    let text = params
        .z
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("--z is required".into()))?;
    text.parse::<u32>()
        .map_err(|_| Error::InvalidParams(format!("malformed --z `{text}`")))
}

/// `a` or `a:b` (inclusive).
fn parse_z_range(text: &str) -> Result<Vec<u32>, Error> {
    let bad = || Error::InvalidParams(format!("malformed --z `{text}`"));
    if let Some((lo, hi)) = text.split_once(':') {
        let lo: u32 = lo.parse().map_err(|_| bad())?;
        let hi: u32 = hi.parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        Ok(vec![text.parse().map_err(|_| bad())?])
    }
}

fn build_array(scheme: BuildScheme, params: &ParamArgs) -> Result<PdaArray, Error> {
    match scheme {
        BuildScheme::Partition => {
            let p = need(params, false, false)?;
            construct_partition_pda(p.q, p.m)
        }
        BuildScheme::Hypergraph => {
            let p = need(params, false, true)?;
            construct_hypergraph_pda(p.q, p.m, p.t)
        }
        BuildScheme::Flexible => {
            let p = need(params, true, true)?;
            construct_flexible_pda(p.q, p.z, p.m, p.t)
        }
        BuildScheme::Theorem1 => {
            let p = need(params, true, true)?;
            construct_theorem1(p.q, p.z, p.m, p.t)
        }
        BuildScheme::Theorem2 => {
            let p = need(params, true, true)?;
            transform_theorem2(p.q, p.z, p.m, p.t)
        }
    }
}

fn write_output(cli_out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match cli_out {
        Some(path) => std::fs::write(path, text).map_err(|e| io_err(e, path)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_pda(path: &Path) -> Result<PdaArray, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(e, path))?;
    if text.trim_start().starts_with('{') {
        read_pda_json(&text)
    } else {
        read_pda(&text)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Construct { scheme, params } => {
            let raw = build_array(*scheme, params)?;
            let canon = canonicalize(&raw)?;
            let text = write_pda(&canon)?;
            let sidecar = write_pda_json(&canon)?;
            if cli.json && cli.out.is_none() {
                println!("{sidecar}");
            } else {
                write_output(&cli.out, &text)?;
                if let Some(path) = &cli.out {
                    let mut sidecar_path = path.clone().into_os_string();
                    sidecar_path.push(".json");
                    let sidecar_path = PathBuf::from(sidecar_path);
                    std::fs::write(&sidecar_path, sidecar).map_err(|e| io_err(e, &sidecar_path))?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { path, useless } => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(e, path))?;
            if text.trim_start().starts_with("oa 1") {
                let arr = read_oa(&text)?;
                let report = verify_oa(&arr, arr.strength())?;
                let doc = json!({
                    "kind": "oa",
                    "pass": report.pass(),
                    "strength": report.strength,
                    "index": report.index,
                    "violation": report.violation.as_ref().map(|v| json!({
                        "columns": v.columns,
                        "tuple": v.tuple,
                        "count": v.count,
                        "expected": v.expected,
                    })),
                    "proper_row_sum": is_proper(&arr),
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                return Ok(if report.pass() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                });
            }
            let pda = if text.trim_start().starts_with('{') {
                read_pda_json(&text)?
            } else {
                read_pda(&text)?
            };
            let report = verify_pda(&pda)?;
            let mut doc = serde_json::to_value(&report).unwrap();
            doc["kind"] = json!("pda");
            doc["pass"] = json!(report.pass());
            if *useless {
                let stars = find_useless_stars(&pda)?;
                doc["useless_stars"] = serde_json::to_value(&stars).unwrap();
            }
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(if report.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Simulate {
            scheme,
            file,
            coded,
            params,
            files,
            file_size,
            demand,
        } => {
            let (caching, desc) = simulation_scheme(*scheme, file.as_deref(), *coded, params)?;
            let division = caching.division();
            let file_size = file_size.unwrap_or(division * 8);
            let demand = demand
                .as_ref()
                .map(|text| {
                    text.split(',')
                        .map(|tok| {
                            tok.trim().parse::<usize>().map_err(|_| {
                                Error::InvalidParams(format!("malformed demand entry `{tok}`"))
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()?;
            let config = RunConfig {
                num_files: *files,
                file_size,
                seed: cli.seed,
                demand,
            };
            let report = run_end_to_end(&caching, &config)?;
            let mut doc = json!({
                "scheme": desc,
                "division": division,
                "expected_ratio": exact_string(&caching.expected_ratio()),
                "report": serde_json::to_value(&report).unwrap(),
                "note": "one broadcast per symbol; the rate does not depend on the demand",
            });
            if let CachingScheme::Coded(coded) = &caching {
                doc["mds"] = serde_json::to_value(&coded.spec).unwrap();
            }
            let rendered = serde_json::to_string_pretty(&doc).unwrap();
            write_output(&cli.out, &format!("{rendered}\n"))?;
            Ok(if report.all_succeeded() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Compare {
            preset,
            scheme,
            params,
        } => {
            let rows = match preset {
                Preset::Fig3 => compare::preset_fig3()?,
                Preset::Table3 => compare::preset_table3()?,
                Preset::Table4 => {
                    let q = params.q.unwrap_or(5);
                    let m = params.m.unwrap_or(4);
                    let t = params.t.unwrap_or(2);
                    compare::preset_table4(q, m, t)?
                }
                Preset::Table5 => compare::preset_table5()?,
                Preset::Custom => custom_rows(*scheme, params)?,
            };
            write_output(&cli.out, &compare::to_csv(&rows))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tables { params } => {
            let p = need(params, true, true)?;
            let rows = compare::scheme_table_rows(p.q, p.z, p.m, p.t)?;
            write_output(&cli.out, &compare::to_csv(&rows))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn simulation_scheme(
    scheme: Option<SimScheme>,
    file: Option<&Path>,
    coded: bool,
    params: &ParamArgs,
) -> Result<(CachingScheme, String), Error> {
    let (pda, coded, desc) = match (scheme, file) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(Error::InvalidParams(
                "pass exactly one of --scheme and --file".into(),
            ))
        }
        (None, Some(path)) => (load_pda(path)?, coded, format!("file {}", path.display())),
        (Some(scheme), None) => {
            let (build, coded) = match scheme {
                SimScheme::Partition => (BuildScheme::Partition, false),
                SimScheme::Hypergraph => (BuildScheme::Hypergraph, false),
                SimScheme::Flexible => (BuildScheme::Flexible, false),
                SimScheme::Theorem1 => (BuildScheme::Theorem1, false),
                SimScheme::Theorem2 => (BuildScheme::Theorem2, false),
                SimScheme::Theorem3 => (BuildScheme::Theorem1, true),
                SimScheme::Theorem4 => (BuildScheme::Theorem2, true),
            };
            let name = match scheme {
                SimScheme::Partition => "partition",
                SimScheme::Hypergraph => "hypergraph",
                SimScheme::Flexible => "flexible",
                SimScheme::Theorem1 => "theorem1",
                SimScheme::Theorem2 => "theorem2",
                SimScheme::Theorem3 => "theorem3",
                SimScheme::Theorem4 => "theorem4",
            };
            let raw = build_array(build, params)?;
            (
                canonicalize(&raw)?,
                coded,
                format!("{name} {}", param_desc(params)),
            )
        }
    };
    if coded {
        Ok((
            CachingScheme::Coded(strip_useless(pda)?),
            format!("{desc} (coded placement)"),
        ))
    } else {
        Ok((CachingScheme::Uncoded(pda), desc))
    }
}

fn param_desc(params: &ParamArgs) -> String {
    let mut parts = Vec::new();
    if let Some(q) = params.q {
        parts.push(format!("q={q}"));
    }
    if let Some(z) = &params.z {
        parts.push(format!("z={z}"));
    }
    if let Some(m) = params.m {
        parts.push(format!("m={m}"));
    }
    if let Some(t) = params.t {
        parts.push(format!("t={t}"));
    }
    parts.join(" ")
}

fn custom_rows(
    scheme: Option<CustomScheme>,
    params: &ParamArgs,
) -> Result<Vec<ComparatorRow>, Error> {
    let scheme =
        scheme.ok_or_else(|| Error::InvalidParams("custom sweeps need --scheme".into()))?;
    let z_values = || -> Result<Vec<u32>, Error> {
        parse_z_range(
            params
                .z
                .as_ref()
                .ok_or_else(|| Error::InvalidParams("--z is required".into()))?,
        )
    };
    let mut rows = Vec::new();
    match scheme {
        CustomScheme::Partition => {
            let p = need(params, false, false)?;
            rows.push(compare::partition_row(p.q, p.m)?);
        }
        CustomScheme::Hypergraph => {
            let p = need(params, false, true)?;
            rows.push(compare::hypergraph_row(p.q, p.m, p.t)?);
        }
        CustomScheme::Scheme7Dual => {
            let p = need(params, false, true)?;
            rows.push(compare::scheme7_dual_row(p.q, p.m, p.t)?);
        }
        CustomScheme::Mn => {
            let k = params
                .k
                .ok_or_else(|| Error::InvalidParams("--k is required".into()))?;
            let t = params
                .t
                .ok_or_else(|| Error::InvalidParams("--t is required".into()))?;
            rows.push(compare::mn_row(k as u64, t as u64)?);
        }
        CustomScheme::Scheme5 | CustomScheme::Scheme6 => {
            let q = params
                .q
                .ok_or_else(|| Error::InvalidParams("--q is required".into()))?;
            let m = params
                .m
                .ok_or_else(|| Error::InvalidParams("--m is required".into()))?;
            let t = params
                .t
                .ok_or_else(|| Error::InvalidParams("--t is required".into()))?;
            let k = params
                .k
                .ok_or_else(|| Error::InvalidParams("--k is required".into()))?;
            rows.push(match scheme {
                CustomScheme::Scheme5 => compare::scheme5_row(m, k, t as u32, q)?,
                _ => compare::scheme6_row(q, m, t as u32, k)?,
            });
        }
        CustomScheme::Flexible
        | CustomScheme::Scheme15
        | CustomScheme::Theorem1
        | CustomScheme::Theorem2
        | CustomScheme::Theorem3
        | CustomScheme::Theorem4 => {
            let q = params
                .q
                .ok_or_else(|| Error::InvalidParams("--q is required".into()))?;
            let m = params
                .m
                .ok_or_else(|| Error::InvalidParams("--m is required".into()))?;
            let t = params
                .t
                .ok_or_else(|| Error::InvalidParams("--t is required".into()))?;
            for z in z_values()? {
                rows.push(match scheme {
                    CustomScheme::Flexible | CustomScheme::Scheme15 => {
                        compare::scheme15_row(q, z, m, t)?
                    }
                    CustomScheme::Theorem1 => compare::theorem1_row(q, z, m, t)?,
                    CustomScheme::Theorem2 => compare::theorem2_row(q, z, m, t)?,
                    CustomScheme::Theorem3 => compare::theorem3_row(q, z, m, t)?,
                    _ => compare::theorem4_row(q, z, m, t)?,
                });
            }
        }
    }
    Ok(rows)
}
