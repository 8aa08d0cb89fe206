//! `dss`: build and exercise regenerating codes for distributed storage,
//! simulate node failure and repair, and audit what an eavesdropper learns.

mod content;
mod script;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use blocksec_core::{
    audit, degradation_profile, AdversaryState, AnyCode, AuditMode, BoundsReport, DssCode,
    DssState, FieldSpec, GraphCode, MatrixKind, PmCode, SecureWrap, SecurityReport, Witness,
    DEFAULT_ENUM_BUDGET, DEFAULT_SUBSET_BUDGET,
};

/// Why a run stopped: bad invocation (exit 2) or a domain/runtime failure
/// (exit 1, JSON error object on stderr).
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl From<blocksec_core::Error> for Failure {
    fn from(e: blocksec_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

#[derive(Parser)]
#[command(name = "dss", version, about = "Regenerating-code storage and security toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    Graph,
    Pm,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Kind {
    Cauchy,
    Vandermonde,
}

/// Code selection shared by most subcommands.
#[derive(Args)]
struct CodeArgs {
    /// Code family: edge-placement on a regular graph, or product-matrix.
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    /// Field modulus (prime).
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value = "cauchy")]
    kind: Kind,
    /// Evaluation points for the Vandermonde kind, comma separated.
    #[arg(long, value_delimiter = ',')]
    points: Option<Vec<u64>>,
    /// Wrap threshold: prepend random units protecting against lambda nodes.
    #[arg(long)]
    lambda: Option<usize>,
    /// Seed for wrap randomness and sampled audits.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Codeword-enumeration budget (DSS_BUDGET env overrides).
    #[arg(long)]
    budget: Option<u64>,
}

impl CodeArgs {
    fn field(&self) -> CliResult<FieldSpec> {
        Ok(FieldSpec::new(self.q)?)
    }

    fn matrix_kind(&self) -> CliResult<MatrixKind> {
        match self.kind {
            Kind::Cauchy => {
                if self.points.is_some() {
                    return Err(Failure::Usage(
                        "--points only applies to --kind vandermonde".into(),
                    ));
                }
                Ok(MatrixKind::Cauchy)
            }
            Kind::Vandermonde => Ok(MatrixKind::Vandermonde {
                points: self.points.clone(),
            }),
        }
    }

    fn build(&self) -> CliResult<AnyCode> {
        let field = self.field()?;
        let kind = self.matrix_kind()?;
        Ok(match self.family {
            Family::Graph => GraphCode::build(self.n, self.k, self.d, field, kind, None)?.into(),
            Family::Pm => {
                PmCode::build(self.n, self.k, self.d, field, kind, DEFAULT_SUBSET_BUDGET)?.into()
            }
        })
    }

    fn budget(&self) -> CliResult<u64> {
        if let Ok(raw) = std::env::var("DSS_BUDGET") {
            return raw
                .parse()
                .map_err(|_| Failure::Usage(format!("DSS_BUDGET is not an integer: {raw:?}")));
        }
        Ok(self.budget.unwrap_or(DEFAULT_ENUM_BUDGET))
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::Cauchy => "cauchy",
            Kind::Vandermonde => "vandermonde",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate parameters and emit the code manifest.
    Build {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a symbol file (or secret, with --lambda) into node contents.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Symbol file: one decimal integer per line.
        #[arg(long)]
        input: PathBuf,
        /// Directory receiving one node_<id>.dssc per node.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Recover the file from k node-content files.
    Reconstruct {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_delimiter = ',')]
        nodes: Vec<usize>,
        #[arg(long)]
        in_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild one node's content from helper downloads.
    Repair {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        node: usize,
        #[arg(long, value_delimiter = ',')]
        helpers: Option<Vec<usize>>,
        #[arg(long)]
        in_dir: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst-case block level over all (or sampled) ell-subsets.
    Audit {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        /// Subset draws in sampled mode.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Capacity bounds for one parameter set.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        alpha: Option<usize>,
        #[arg(long, default_value_t = 1)]
        beta: usize,
        #[arg(long, default_value_t = 0)]
        ell: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Security degradation table for ell = 0..=ell_max.
    Profile {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        ell_max: usize,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a lifecycle script; emits the event log and a final report.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        script: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", json!({ "error": msg, "usage": true }));
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("{}", json!({ "error": msg }));
            ExitCode::from(1)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// The fixed report schema shared by audits and simulation reports.
#[derive(Serialize)]
struct ReportJson<'a> {
    family: &'a str,
    n: usize,
    k: usize,
    d: usize,
    q: u64,
    kind: &'a str,
    ell: usize,
    min_distance: Option<usize>,
    block_level: usize,
    witness: Option<&'a Witness>,
    subset: &'a [usize],
}

fn report_json<'a>(
    code: &'a AnyCode,
    kind: &'a str,
    report: &'a SecurityReport,
) -> ReportJson<'a> {
    ReportJson {
        family: code.family(),
        n: code.n(),
        k: code.k(),
        d: code.d(),
        q: code.field().q(),
        kind,
        ell: report.nodes.len(),
        min_distance: report.min_distance,
        block_level: report.block_level,
        witness: report.witness.as_ref(),
        subset: &report.nodes,
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Cmd::Build { code, out } => {
            let built = code.build()?;
            let manifest = json!({
                "family": built.family(),
                "n": built.n(),
                "k": built.k(),
                "d": built.d(),
                "q": built.field().q(),
                "kind": code.kind_name(),
                "points": code.points,
                "alpha": built.d(),
                "beta": 1,
                "file_size": built.file_size(),
                "lambda": code.lambda,
            });
            emit(&out, &format!("{}\n", serde_json::to_string_pretty(&manifest).unwrap()))
        }
        Cmd::Encode {
            code,
            input,
            out_dir,
        } => {
            let built = code.build()?;
            let field = built.field();
            let (symbols, reduced) = content::read_symbols(&input, field)?;
            if reduced > 0 {
                eprintln!(
                    "{}",
                    json!({ "warning": format!("{reduced} symbol(s) reduced mod {}", field.q()) })
                );
            }
            let file = match code.lambda {
                Some(lambda) => {
                    SecureWrap::new(&built, lambda)?.assemble_file(field, &symbols, code.seed)?
                }
                None => symbols,
            };
            let contents = built.encode(&file)?;
            fs::create_dir_all(&out_dir)?;
            for (i, data) in contents.iter().enumerate() {
                let path = out_dir.join(content::node_file_name(i + 1));
                content::write_node_content(&path, field, &content::values_of(data))?;
            }
            Ok(())
        }
        Cmd::Reconstruct {
            code,
            nodes,
            in_dir,
            out,
        } => {
            let built = code.build()?;
            let field = built.field();
            let picked = load_contents(&built, field, &in_dir, &nodes)?;
            let file = built.reconstruct(&picked)?;
            let visible = match code.lambda {
                Some(lambda) => {
                    let wrap = SecureWrap::new(&built, lambda)?;
                    file[wrap.random_units()..].to_vec()
                }
                None => file,
            };
            emit(&out, &content::format_symbols(&visible))
        }
        Cmd::Repair {
            code,
            node,
            helpers,
            in_dir,
            out,
        } => {
            let built = code.build()?;
            let field = built.field();
            let helpers = match helpers {
                Some(h) => h,
                None => {
                    let alive: BTreeSet<usize> =
                        (1..=built.n()).filter(|&i| i != node).collect();
                    built.default_helpers(node, &alive)?
                }
            };
            let helper_contents = load_contents(&built, field, &in_dir, &helpers)?;
            let restored = built.repair(node, &helper_contents)?;
            let path = out.unwrap_or_else(|| in_dir.join(content::node_file_name(node)));
            content::write_node_content(&path, field, &content::values_of(&restored))
        }
        Cmd::Audit {
            code,
            ell,
            mode,
            samples,
            out,
        } => {
            let built = code.build()?;
            let mode = match mode.as_str() {
                "exhaustive" => AuditMode::Exhaustive,
                "sampled" => AuditMode::Sampled { samples },
                other => {
                    return Err(Failure::Usage(format!(
                        "--mode must be exhaustive or sampled, got {other:?}"
                    )))
                }
            };
            let report = audit(
                &built,
                ell,
                mode,
                code.budget()?,
                DEFAULT_SUBSET_BUDGET,
                code.seed,
            )?;
            let body = report_json(&built, code.kind_name(), &report.worst);
            emit(
                &out,
                &format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
            )
        }
        Cmd::Bounds {
            n,
            k,
            d,
            alpha,
            beta,
            ell,
            out,
        } => {
            let report = BoundsReport::new(n, k, d, alpha.unwrap_or(d), beta, ell)?;
            emit(
                &out,
                &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
            )
        }
        Cmd::Profile {
            code,
            ell_max,
            format,
            out,
        } => {
            let built = code.build()?;
            let rows = degradation_profile(&built, ell_max, code.budget()?, DEFAULT_SUBSET_BUDGET)?;
            let text = match format.as_str() {
                "csv" => {
                    let mut text = String::from("ell,formula_b,audited_b\n");
                    for r in &rows {
                        let audited = r.audited_b.map_or(String::new(), |b| b.to_string());
                        text.push_str(&format!("{},{},{}\n", r.ell, r.formula_b, audited));
                    }
                    text
                }
                "json" => {
                    let wrap = match code.lambda {
                        Some(lambda) => {
                            let w = SecureWrap::new(&built, lambda)?;
                            Some(json!({
                                "lambda": w.lambda(),
                                "random_units": w.random_units(),
                                "secret_units": w.secret_units(),
                            }))
                        }
                        None => None,
                    };
                    let body = json!({
                        "family": built.family(),
                        "n": built.n(),
                        "k": built.k(),
                        "d": built.d(),
                        "q": built.field().q(),
                        "kind": code.kind_name(),
                        "wrap": wrap,
                        "rows": rows,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&body).unwrap())
                }
                other => {
                    return Err(Failure::Usage(format!(
                        "--format must be csv or json, got {other:?}"
                    )))
                }
            };
            emit(&out, &text)
        }
        Cmd::Simulate {
            code,
            input,
            script,
            out,
        } => {
            let built = code.build()?;
            let field = built.field();
            let kind = code.kind_name();
            let (symbols, reduced) = content::read_symbols(&input, field)?;
            if reduced > 0 {
                eprintln!(
                    "{}",
                    json!({ "warning": format!("{reduced} symbol(s) reduced mod {}", field.q()) })
                );
            }
            let commands = match &script {
                Some(path) => script::parse(&fs::read_to_string(path)?)?,
                None => vec![],
            };
            let budget = code.budget()?;
            let mut state = match code.lambda {
                Some(lambda) => DssState::init_wrapped(built.clone(), lambda, &symbols, code.seed)?,
                None => DssState::init(built.clone(), &symbols)?,
            };
            let mut adversary = AdversaryState::new();
            let mut lines = Vec::new();
            let mut printed = 0usize;
            let flush_events = |state: &DssState, lines: &mut Vec<String>, printed: &mut usize| {
                for event in &state.events()[*printed..] {
                    lines.push(serde_json::to_string(event).unwrap());
                }
                *printed = state.events().len();
            };
            flush_events(&state, &mut lines, &mut printed);
            for command in commands {
                match command {
                    script::Command::Fail(node) => state.fail(node)?,
                    script::Command::Repair(node, helpers) => state.repair(node, helpers)?,
                    script::Command::Collect(nodes) => {
                        state.collect(&nodes)?;
                    }
                    script::Command::Eavesdrop(node) => state.eavesdrop(&mut adversary, node)?,
                    script::Command::Report => {
                        let report = state.report(&adversary, budget)?;
                        flush_events(&state, &mut lines, &mut printed);
                        lines.push(
                            serde_json::to_string(&json!({
                                "report": report_json(state.code(), kind, &report),
                                "perfectly_secure": report.perfectly_secure,
                            }))
                            .unwrap(),
                        );
                        continue;
                    }
                }
                flush_events(&state, &mut lines, &mut printed);
            }
            let final_report = state.report(&adversary, budget)?;
            flush_events(&state, &mut lines, &mut printed);
            lines.push(
                serde_json::to_string(&json!({
                    "final_report": report_json(state.code(), kind, &final_report),
                    "perfectly_secure": final_report.perfectly_secure,
                }))
                .unwrap(),
            );
            emit(&out, &(lines.join("\n") + "\n"))
        }
    }
}

fn load_contents(
    code: &AnyCode,
    field: FieldSpec,
    dir: &Path,
    nodes: &[usize],
) -> CliResult<Vec<(usize, blocksec_core::NodeData)>> {
    nodes
        .iter()
        .map(|&id| {
            let values = content::read_node_content(&dir.join(content::node_file_name(id)), field)?;
            Ok((id, content::data_from_values(code, id, values)?))
        })
        .collect()
}
