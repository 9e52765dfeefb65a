//! The `bohr` command line: batch operations over JSON files.
//!
//! Every subcommand reads its inputs from JSON files, writes one JSON
//! document to standard output (or an aligned table with `--format
//! table`), and exits 0. Domain errors — inputs that decode but violate a
//! mathematical invariant — exit 1; unreadable, unparseable, or
//! ill-shaped inputs exit 2. Either way a machine-readable
//! `{"error": {"code", "message"}}` document goes to standard error.
//!
//! Output is deterministic: the same invocation on the same files always
//! produces byte-identical bytes.

use crate::context::enumerate_young;
use crate::error::{Error, Result};
use crate::frame::{enumerate_frame, SigmaOpen, DEFAULT_CAP};
use crate::gelfand::{
    bohrified_transform, eigenvalues_in_context, gelfand_support, spectral_projection,
};
use crate::json::{
    load_matrix, load_open, load_poset, load_rayset, load_seeds, load_sigma, load_state,
    matrix_to_dto, poset_to_dto, sigma_to_dto, to_pretty_string, write_json_file, PosetRefDto,
};
use crate::ks::{find_points, valuation_search};
use crate::matrix::CMatrix;
use crate::poset::ContextPoset;
use crate::scalar::format_rational;
use crate::state::{measure_component, pairing};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "bohr",
    version,
    about = "Exact intuitionistic quantum logic of finite-level systems"
)]
struct Cli {
    /// Output format for results on standard output
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Operate on posets of classical contexts
    Poset {
        #[command(subcommand)]
        cmd: PosetCommand,
    },
    /// Apply a Heyting operation to frame elements
    Heyting {
        /// Operation to apply
        #[arg(long, value_enum)]
        op: HeytingOp,
        /// First frame element (JSON file)
        #[arg(long)]
        sigma: PathBuf,
        /// Second frame element; required by meet/join/implies
        #[arg(long)]
        sigma2: Option<PathBuf>,
        /// The context poset both elements live on (JSON file)
        #[arg(long)]
        poset: PathBuf,
    },
    /// Spectral data of an observable in a context, and its frame image
    Gelfand {
        /// Observable matrix (JSON file); must belong to the context
        #[arg(long)]
        observable: PathBuf,
        /// Index of the context the observable is read in
        #[arg(long)]
        context: usize,
        /// Rational open subset of the line (JSON file)
        #[arg(long)]
        open: PathBuf,
        /// Context poset (JSON file)
        #[arg(long)]
        poset: PathBuf,
    },
    /// Pair a state with a frame element
    Pair {
        /// Density matrix (JSON file)
        #[arg(long)]
        state: PathBuf,
        /// Frame element (JSON file)
        #[arg(long)]
        sigma: PathBuf,
        /// Context poset (JSON file)
        #[arg(long)]
        poset: PathBuf,
    },
    /// Noncontextual valuation search on ray sets
    Ks {
        #[command(subcommand)]
        cmd: KsCommand,
    },
    /// Enumerate the partitions of n into exactly k parts
    EnumYoung {
        /// Number being partitioned
        #[arg(long)]
        n: usize,
        /// Exact number of parts
        #[arg(long)]
        k: usize,
    },
    /// Points of the finite frame of a poset
    Points {
        /// Context poset (JSON file)
        #[arg(long)]
        poset: PathBuf,
        /// Frame enumeration cap (overrides the BOHR_CAP variable)
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Subcommand)]
enum PosetCommand {
    /// Close seed contexts under intersection and write the poset
    Build {
        /// Seed contexts (JSON file: a bare array or {"seeds": [...]})
        #[arg(long)]
        seeds: PathBuf,
        /// Where to write the poset JSON
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum KsCommand {
    /// Decide whether a one-per-basis valuation exists
    Check {
        /// Ray set (JSON file)
        file: PathBuf,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum HeytingOp {
    Meet,
    Join,
    Implies,
    Neg,
    Notnot,
}

impl HeytingOp {
    fn name(self) -> &'static str {
        match self {
            HeytingOp::Meet => "meet",
            HeytingOp::Join => "join",
            HeytingOp::Implies => "implies",
            HeytingOp::Neg => "neg",
            HeytingOp::Notnot => "notnot",
        }
    }

    fn is_binary(self) -> bool {
        matches!(self, HeytingOp::Meet | HeytingOp::Join | HeytingOp::Implies)
    }
}

/// One finished command: the JSON document and its table rendering.
struct CmdOutput {
    json: Value,
    table: String,
}

/// Entry point for the `bohr` binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            match cli.format {
                Format::Json => print!("{}", to_pretty_string(&out.json)),
                Format::Table => println!("{}", out.table),
            }
            0
        }
        Err(e) => {
            let payload = json!({"error": {"code": e.code(), "message": e.to_string()}});
            eprint!("{}", to_pretty_string(&payload));
            e.exit_code()
        }
    }
}

fn execute(command: &Command) -> Result<CmdOutput> {
    match command {
        Command::Poset { cmd: PosetCommand::Build { seeds, output } } => {
            poset_build(seeds, output)
        }
        Command::Heyting { op, sigma, sigma2, poset } => {
            heyting(*op, sigma, sigma2.as_deref(), poset)
        }
        Command::Gelfand { observable, context, open, poset } => {
            gelfand(observable, *context, open, poset)
        }
        Command::Pair { state, sigma, poset } => pair(state, sigma, poset),
        Command::Ks { cmd: KsCommand::Check { file } } => ks_check(file),
        Command::EnumYoung { n, k } => enum_young(*n, *k),
        Command::Points { poset, cap } => points(poset, *cap),
    }
}

/// Left-aligned two-column table.
fn table_rows(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn sigma_rows(s: &SigmaOpen) -> Vec<(String, String)> {
    s.masks()
        .iter()
        .enumerate()
        .map(|(i, &mask)| {
            let atoms: Vec<String> =
                (0..64).filter(|a| mask >> a & 1 == 1).map(|a| a.to_string()).collect();
            let shown = if atoms.is_empty() { "-".to_string() } else { atoms.join(",") };
            (format!("context {i}"), shown)
        })
        .collect()
}

fn matrix_rows(m: &CMatrix) -> Vec<String> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m.entry(i, j).to_string())
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect()
}

/// `--cap` flag beats the `BOHR_CAP` variable beats the built-in default.
fn resolve_cap(flag: Option<usize>) -> Result<usize> {
    if let Some(cap) = flag {
        if cap == 0 {
            return Err(Error::InvalidArgument("--cap must be positive".into()));
        }
        return Ok(cap);
    }
    match std::env::var("BOHR_CAP") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(cap) if cap > 0 => Ok(cap),
            _ => Err(Error::Malformed(format!(
                "BOHR_CAP must be a positive integer, got {s:?}"
            ))),
        },
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_CAP),
        Err(e) => Err(Error::Malformed(format!("BOHR_CAP is unreadable: {e}"))),
    }
}

fn poset_build(seeds_path: &Path, output: &Path) -> Result<CmdOutput> {
    let seeds = load_seeds(seeds_path)?;
    let poset = ContextPoset::build(&seeds)?;
    write_json_file(output, &poset_to_dto(&poset))?;
    let maximal = poset.contexts().iter().filter(|c| c.is_maximal()).count();
    let rows = vec![
        ("contexts".to_string(), poset.len().to_string()),
        ("maximal".to_string(), maximal.to_string()),
        ("output".to_string(), output.display().to_string()),
    ];
    Ok(CmdOutput {
        json: json!({
            "contexts": poset.len(),
            "maximal": maximal,
            "output": output.display().to_string(),
        }),
        table: table_rows(&rows),
    })
}

fn heyting(
    op: HeytingOp,
    sigma_path: &Path,
    sigma2_path: Option<&Path>,
    poset_path: &Path,
) -> Result<CmdOutput> {
    let poset = load_poset(poset_path)?;
    let s = load_sigma(sigma_path, &poset)?;
    let result = if op.is_binary() {
        let path2 = sigma2_path.ok_or_else(|| {
            Error::InvalidArgument(format!("--sigma2 is required for --op {}", op.name()))
        })?;
        let t = load_sigma(path2, &poset)?;
        match op {
            HeytingOp::Meet => s.meet(&t)?,
            HeytingOp::Join => s.join(&t)?,
            HeytingOp::Implies => s.heyting_implies(&t)?,
            _ => unreachable!(),
        }
    } else {
        if sigma2_path.is_some() {
            return Err(Error::InvalidArgument(format!(
                "--sigma2 does not apply to --op {}",
                op.name()
            )));
        }
        match op {
            HeytingOp::Neg => s.heyting_neg(),
            HeytingOp::Notnot => s.double_neg(),
            _ => unreachable!(),
        }
    };
    // revalidate the result exactly as a loader would
    let valid = SigmaOpen::new(result.poset().clone(), result.masks().to_vec()).is_ok();
    let dto = sigma_to_dto(&result, PosetRefDto::Label(poset_path.display().to_string()));
    let mut rows = vec![
        ("op".to_string(), op.name().to_string()),
        ("valid".to_string(), valid.to_string()),
    ];
    rows.extend(sigma_rows(&result));
    Ok(CmdOutput {
        json: json!({
            "op": op.name(),
            "result": serde_json::to_value(&dto).expect("DTOs always serialize"),
            "valid": valid,
        }),
        table: table_rows(&rows),
    })
}

fn gelfand(
    observable_path: &Path,
    context: usize,
    open_path: &Path,
    poset_path: &Path,
) -> Result<CmdOutput> {
    let a = load_matrix(observable_path)?;
    let u = load_open(open_path)?;
    let poset = load_poset(poset_path)?;
    if context >= poset.len() {
        return Err(Error::NotInPoset(format!(
            "context index {context} out of range (poset has {})",
            poset.len()
        )));
    }
    let ctx = poset.context(context);
    let eigenvalues = eigenvalues_in_context(&a, ctx)?;
    let support = gelfand_support(&eigenvalues, &u);
    let selected: Vec<usize> = (0..support.len()).filter(|&i| support.get(i)).collect();
    let projection = spectral_projection(&a, ctx, &u)?;
    let transform = bohrified_transform(&a, context, context, &u, &poset)?;
    let transform_dto =
        sigma_to_dto(&transform, PosetRefDto::Label(poset_path.display().to_string()));
    let eigen_strings: Vec<String> = eigenvalues.iter().map(format_rational).collect();

    let mut rows: Vec<(String, String)> = eigen_strings
        .iter()
        .enumerate()
        .map(|(i, v)| (format!("eigenvalue at atom {i}"), v.clone()))
        .collect();
    rows.push((
        "support".to_string(),
        if selected.is_empty() {
            "-".to_string()
        } else {
            selected.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        },
    ));
    for (i, line) in matrix_rows(&projection).into_iter().enumerate() {
        rows.push((format!("projection row {i}"), line));
    }
    rows.extend(
        sigma_rows(&transform)
            .into_iter()
            .map(|(k, v)| (format!("transform {k}"), v)),
    );
    Ok(CmdOutput {
        json: json!({
            "context": context,
            "eigenvalues": eigen_strings,
            "support": selected,
            "projection": serde_json::to_value(matrix_to_dto(&projection))
                .expect("DTOs always serialize"),
            "transform": serde_json::to_value(&transform_dto).expect("DTOs always serialize"),
        }),
        table: table_rows(&rows),
    })
}

fn pair(state_path: &Path, sigma_path: &Path, poset_path: &Path) -> Result<CmdOutput> {
    let poset = load_poset(poset_path)?;
    let state = load_state(state_path)?;
    let sigma = load_sigma(sigma_path, &poset)?;
    let upper = pairing(&state, &sigma)?;
    let mu = measure_component(&state, &sigma, poset.bottom_index())?;
    let members: Vec<usize> = upper.members().iter().copied().collect();
    let mu_json: serde_json::Map<String, Value> = mu
        .values()
        .iter()
        .map(|(d, v)| (d.to_string(), Value::String(format_rational(v))))
        .collect();
    let rows: Vec<(String, String)> = mu
        .values()
        .iter()
        .map(|(d, v)| {
            let marker = if upper.contains(*d) { "  [paired]" } else { "" };
            (format!("context {d}"), format!("{}{}", format_rational(v), marker))
        })
        .collect();
    Ok(CmdOutput {
        json: json!({"upper_set": members, "mu": mu_json}),
        table: table_rows(&rows),
    })
}

fn ks_check(file: &Path) -> Result<CmdOutput> {
    let rs = load_rayset(file)?;
    let result = valuation_search(&rs);
    match result.valuation {
        Some(v) => {
            let bits: Vec<u8> = v.assignment().iter().map(|&b| b as u8).collect();
            let shown: String =
                bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect();
            Ok(CmdOutput {
                json: json!({"status": "SAT", "assignment": bits}),
                table: table_rows(&[
                    ("status".to_string(), "SAT".to_string()),
                    ("assignment".to_string(), shown),
                ]),
            })
        }
        None => Ok(CmdOutput {
            json: json!({"status": "UNSAT", "explored": result.explored}),
            table: table_rows(&[
                ("status".to_string(), "UNSAT".to_string()),
                ("explored".to_string(), result.explored.to_string()),
            ]),
        }),
    }
}

fn enum_young(n: usize, k: usize) -> Result<CmdOutput> {
    let shapes = enumerate_young(k, n);
    let lists: Vec<Vec<usize>> = shapes.iter().map(|p| p.parts().to_vec()).collect();
    let table = if lists.is_empty() {
        "(none)".to_string()
    } else {
        lists
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("+"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    Ok(CmdOutput { json: serde_json::to_value(lists).expect("plain lists"), table })
}

fn points(poset_path: &Path, cap: Option<usize>) -> Result<CmdOutput> {
    let cap = resolve_cap(cap)?;
    let poset = load_poset(poset_path)?;
    let frame = enumerate_frame(&poset, cap)?;
    let found = find_points(&poset, cap)?;
    let label = poset_path.display().to_string();
    let dtos: Vec<Value> = found
        .iter()
        .map(|p| {
            serde_json::to_value(sigma_to_dto(p.element(), PosetRefDto::Label(label.clone())))
                .expect("DTOs always serialize")
        })
        .collect();
    let mut rows = vec![
        ("frame size".to_string(), frame.len().to_string()),
        ("points".to_string(), found.len().to_string()),
    ];
    for (i, p) in found.iter().enumerate() {
        let assignment = sigma_rows(p.element())
            .into_iter()
            .map(|(_, v)| v)
            .collect::<Vec<_>>()
            .join(" | ");
        rows.push((format!("point {i}"), assignment));
    }
    Ok(CmdOutput {
        json: json!({"frame_size": frame.len(), "cap": cap, "points": dtos}),
        table: table_rows(&rows),
    })
}
