mod dot;
mod output;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use sdecomp::classify::{ClassifyOptions, OutcomeKind, EXCEPTIONAL_SOURCE};
use sdecomp::format::{parse_input, write_diagram, write_matrix, Input};
use sdecomp::mutation::{mutate_diagram, mutate_sequence, ScanLimits};
use sdecomp::unfold::long_nodes;
use sdecomp::{
    assemble, build_unfolding, classify_diagram, matrix_to_diagram, oracle, oracle_decompose,
    oracle_is_finite, realize, s_decompose, Color, DecomposeOptions, Diagram, Error,
    ExchangeMatrix, Finiteness,
};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const UNDECIDED: u8 = 2;
const INPUT_ERROR: u8 = 64;

#[derive(Parser)]
#[command(
    name = "sdecomp",
    about = "Block decompositions and mutation type of exchange matrices"
)]
#[command(version = version_string(), disable_version_flag = true)]
struct Cli {
    /// Print version and catalog hashes
    #[arg(long = "version", short = 'V', action = clap::ArgAction::Version)]
    _version: Option<bool>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Args)]
struct InputArgs {
    /// Input file; standard input when omitted or `-`
    file: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Decide s-decomposability and list decompositions
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// List every decomposition up to --limit of them (the default)
        #[arg(long, conflicts_with = "first")]
        all_decompositions: bool,
        /// Stop at the first decomposition
        #[arg(long)]
        first: bool,
        /// Include the per-node reduction trace
        #[arg(long)]
        trace: bool,
        /// Search step budget per component, 0 for none
        #[arg(long, default_value_t = 0)]
        budget: u64,
        /// Cap on listed decompositions
        #[arg(long, default_value_t = 100)]
        limit: usize,
        /// Nodes that must be doubled (1-based, comma separated); taken from the symmetrizer for matrix input
        #[arg(long, value_delimiter = ',')]
        long: Option<Vec<usize>>,
    },
    /// Decide whether the mutation class is finite
    Classify {
        #[command(flatten)]
        input: InputArgs,
        /// Largest edge weight the mutation scan keeps exploring
        #[arg(long, default_value_t = 4)]
        cutoff: u64,
        /// Largest number of diagrams the scan visits
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        /// Do not consult the exceptional catalog
        #[arg(long)]
        no_catalog: bool,
    },
    /// Apply a sequence of mutations
    Mutate {
        #[command(flatten)]
        input: InputArgs,
        /// Mutation indices, 1-based, applied left to right
        #[arg(long, value_delimiter = ',', required = true)]
        seq: Vec<usize>,
    },
    /// Build the unfolding of a decomposable matrix or diagram
    Unfold {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Brute-force reference answers, for cross-checking
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        /// Decide finiteness by scanning the mutation class instead of decomposing
        #[arg(long)]
        finite: bool,
        #[arg(long, default_value_t = 4)]
        cutoff: u64,
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
        /// Largest number of blocks tried; defaults to the node count
        #[arg(long)]
        max_blocks: Option<usize>,
    },
    /// Render the diagram in Graphviz format
    ///
    /// Uncolored input is colored from its first decomposition when it has one.
    ExportDot {
        /// Input file; standard input when omitted or `-`
        file: Option<PathBuf>,
    },
}

fn sha256_hex(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

fn version_string() -> &'static str {
    static V: std::sync::OnceLock<String> = std::sync::OnceLock::new();
    V.get_or_init(|| {
        format!(
            "{}\nblocks.json sha256 {}\nexceptional.json sha256 {}",
            env!("CARGO_PKG_VERSION"),
            sha256_hex(sdecomp::catalog::CATALOG_SOURCE),
            sha256_hex(EXCEPTIONAL_SOURCE)
        )
    })
}

/// Failure with the exit code it maps to.
struct Fail {
    code: u8,
    message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget(_) => UNDECIDED,
            _ => INPUT_ERROR,
        };
        Fail {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Fail {
    Fail {
        code: INPUT_ERROR,
        message: message.into(),
    }
}

fn read_input(file: &Option<PathBuf>) -> Result<Input, Fail> {
    let mut src = String::new();
    match file {
        Some(p) if p.as_os_str() != "-" => {
            src = std::fs::read_to_string(p)
                .map_err(|e| input_error(format!("{}: {}", p.display(), e)))?
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut src)
                .map_err(|e| input_error(format!("stdin: {}", e)))?;
        }
    }
    Ok(parse_input(&src)?)
}

fn diagram_of(input: &Input) -> Diagram {
    match input {
        Input::Matrix(b) => matrix_to_diagram(b),
        Input::Diagram(g) => g.clone(),
    }
}

fn emit(format: Format, value: Value, text: impl FnOnce() -> String) -> Result<String, Fail> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&value).expect("json") + "\n"),
        Format::Text => Ok(text()),
        Format::Dot => Err(input_error("--format dot is only available for export-dot")),
    }
}

fn run(cli: Cli) -> Result<(String, u8), Fail> {
    match cli.command {
        Command::Check {
            input,
            all_decompositions: _,
            first,
            trace,
            budget,
            limit,
            long,
        } => {
            let parsed = read_input(&input.file)?;
            let g = diagram_of(&parsed);
            let n = g.node_count();
            let long = match (long, &parsed) {
                (Some(ids), _) => {
                    let mut mask = vec![false; n];
                    for v in ids {
                        if v == 0 || v > n {
                            return Err(input_error(format!(
                                "--long: node {} outside 1..={}",
                                v, n
                            )));
                        }
                        mask[v - 1] = true;
                    }
                    Some(mask)
                }
                (None, Input::Matrix(b)) => Some(long_nodes(b)?),
                (None, Input::Diagram(_)) => None,
            };
            let opts = DecomposeOptions {
                all: !first,
                limit,
                budget,
                long,
            };
            let out = s_decompose(&g, &opts)?;
            let code = if out.decomposable { OK } else { NEGATIVE };
            let s = emit(input.format, output::check_json(&out, trace), || {
                output::check_text(&out, trace)
            })?;
            Ok((s, code))
        }
        Command::Classify {
            input,
            cutoff,
            budget,
            no_catalog,
        } => {
            let g = diagram_of(&read_input(&input.file)?);
            let opts = ClassifyOptions {
                use_catalog: !no_catalog,
                scan: ScanLimits {
                    weight_cutoff: cutoff,
                    max_diagrams: budget,
                },
            };
            let v = classify_diagram(&g, &opts)?;
            let code = match v.outcome {
                OutcomeKind::Infinite => NEGATIVE,
                OutcomeKind::Undecided => UNDECIDED,
                _ => OK,
            };
            let s = emit(input.format, output::verdict_json(&v), || {
                output::verdict_text(&v)
            })?;
            Ok((s, code))
        }
        Command::Mutate { input, seq } => {
            let parsed = read_input(&input.file)?;
            let n = diagram_of(&parsed).node_count();
            let mut idx = Vec::with_capacity(seq.len());
            for k in seq {
                if k == 0 || k > n {
                    return Err(input_error(format!("--seq: index {} outside 1..={}", k, n)));
                }
                idx.push(k - 1);
            }
            let (text, value) = match parsed {
                Input::Matrix(b) => {
                    let m = mutate_sequence(&b, &idx)?;
                    (
                        write_matrix(m.matrix()),
                        json!({ "matrix": m.matrix().rows() }),
                    )
                }
                Input::Diagram(g) => {
                    let mut g = g;
                    for &k in &idx {
                        g = mutate_diagram(&g, k)?;
                    }
                    let edges: Vec<_> = g
                        .edges()
                        .map(|e| json!([e.tail + 1, e.head + 1, e.weight]))
                        .collect();
                    (
                        write_diagram(&g),
                        json!({ "nodes": g.node_count(), "edges": edges }),
                    )
                }
            };
            let s = emit(input.format, output::envelope("mutate", value), || text)?;
            Ok((s, OK))
        }
        Command::Unfold { input } => {
            let parsed = read_input(&input.file)?;
            let g = diagram_of(&parsed);
            let long = match &parsed {
                Input::Matrix(b) => Some(long_nodes(b)?),
                Input::Diagram(_) => None,
            };
            let out = s_decompose(
                &g,
                &DecomposeOptions {
                    long,
                    ..DecomposeOptions::default()
                },
            )?;
            let Some(dec) = out.decompositions.first() else {
                let body = json!({
                    "s_decomposable": false,
                    "reject_certificate": out.certificate.as_ref().map(output::cert_json),
                });
                let s = emit(input.format, output::envelope("unfold", body), || {
                    output::check_text(&out, false)
                })?;
                return Ok((s, NEGATIVE));
            };
            let b: ExchangeMatrix = match parsed {
                Input::Matrix(b) => b,
                Input::Diagram(_) => {
                    let doubled = dec.doubled_nodes();
                    let d: Vec<i64> = (0..g.node_count())
                        .map(|v| if doubled.contains(&v) { 2 } else { 1 })
                        .collect();
                    realize(&g, &d)?
                }
            };
            let u = build_unfolding(&g, dec, &b)?;
            let body = json!({
                "s_decomposable": true,
                "decomposition": output::to_json(&dec.blocks),
                "labels": u.labels,
                "bhat": u.bhat.rows(),
            });
            let s = emit(input.format, output::envelope("unfold", body), || {
                format!(
                    "decomposition: {}\nlabels: {}\n{}",
                    output::decomposition_text(dec),
                    u.labels.join(" "),
                    write_matrix(&u.bhat)
                )
            })?;
            Ok((s, OK))
        }
        Command::Oracle {
            input,
            finite,
            cutoff,
            budget,
            max_blocks,
        } => {
            let parsed = read_input(&input.file)?;
            let g = diagram_of(&parsed);
            if finite {
                let b = match parsed {
                    Input::Matrix(b) => b,
                    Input::Diagram(_) => realize(&g, &vec![1; g.node_count()])?,
                };
                let f = oracle_is_finite(&b, cutoff, budget)?;
                let code = match f {
                    Finiteness::Finite { .. } => OK,
                    Finiteness::InfiniteByCriterion { .. } => NEGATIVE,
                    Finiteness::Undecided { .. } => UNDECIDED,
                };
                let s = emit(
                    input.format,
                    output::envelope("oracle", output::to_json(&f)),
                    || {
                        format!(
                            "{}\n",
                            serde_json::to_string(&output::to_json(&f)).expect("json")
                        )
                    },
                )?;
                return Ok((s, code));
            }
            let bound = max_blocks.unwrap_or_else(|| oracle::block_bound(g.node_count()));
            let o = oracle_decompose(&g, bound);
            let code = if !o.decompositions.is_empty() {
                OK
            } else if o.complete {
                NEGATIVE
            } else {
                UNDECIDED
            };
            let body = json!({
                "s_decomposable": !o.decompositions.is_empty(),
                "complete": o.complete,
                "decompositions": output::to_json(&o.decompositions.iter().map(|d| &d.blocks).collect::<Vec<_>>()),
            });
            let s = emit(input.format, output::envelope("oracle", body), || {
                let mut s = format!(
                    "decompositions: {}{}\n",
                    o.decompositions.len(),
                    if o.complete { "" } else { " (incomplete)" }
                );
                for (i, d) in o.decompositions.iter().enumerate() {
                    s.push_str(&format!("  {}: {}\n", i + 1, output::decomposition_text(d)));
                }
                s
            })?;
            Ok((s, code))
        }
        Command::ExportDot { file } => {
            let g = diagram_of(&read_input(&file)?);
            let uncolored = g.colors().iter().all(|&c| c == Color::Uncolored);
            let g = if uncolored && g.node_count() > 0 {
                match s_decompose(&g, &DecomposeOptions::default())?
                    .decompositions
                    .first()
                {
                    Some(dec) => assemble(dec)?,
                    None => g,
                }
            } else {
                g
            };
            Ok((dot::to_dot(&g), OK))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(INPUT_ERROR);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("sdecomp: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
