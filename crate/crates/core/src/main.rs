//! Command-line entry point.
//!
//! Every command prints a JSON payload on stdout; human-readable
//! diagnostics go to stderr.  Exit codes: 0 on success, 1 when a
//! verification or certification fails, 2 on usage errors.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use drumkit::drum::{Drum, Side};
use drumkit::family::{
    build_dk, build_from_motif, build_santos, default_params, FamilyParams,
};
use drumkit::rat::RVec;
use drumkit::search;
use drumkit::verify;

#[derive(Parser)]
#[command(
    name = "drumkit",
    about = "Exact computations on drums: width, facet orbits, certified lower bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Selects the drum a command operates on.
#[derive(Args, Debug)]
struct DrumSelector {
    /// Family index k (uses the default parameters unless --params is given).
    #[arg(long)]
    k: Option<usize>,
    /// Parameter file overriding the default boundary chain, JSON
    /// {"k": N, "a": [["p/q", "p/q"], ...]}.
    #[arg(long)]
    params: Option<PathBuf>,
    /// The 48-vertex reference drum.
    #[arg(long)]
    santos: bool,
    /// JSON file with a motif: an array of points with entries "p/q".
    #[arg(long)]
    motif: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a drum and print it as JSON.
    Build {
        #[command(flatten)]
        drum: DrumSelector,
        /// Also write the payload to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the exact width of a drum.
    Width {
        #[command(flatten)]
        drum: DrumSelector,
    },
    /// Print the facet-vertex maps of both skins and the two-cycle screen.
    Fvmap {
        #[command(flatten)]
        drum: DrumSelector,
    },
    /// Run the verification pipeline for a family member.
    Verify {
        #[arg(long)]
        k: usize,
        /// Stop after this stage: classify | phi | edges | graphs | bound.
        #[arg(long)]
        stage: Option<String>,
    },
    /// Produce a width lower-bound certificate for a family member.
    Certify {
        #[arg(long)]
        k: usize,
        /// Also write the certificate to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample random motifs and score them by width.
    Search {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        budget: usize,
        /// Configuration file overriding the default sampling scheme.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the JSONL record stream here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export graphs of a family member.
    Export {
        #[arg(long)]
        k: usize,
        /// Emit DOT instead of JSON.
        #[arg(long)]
        dot: bool,
        /// Also write the payload to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Errors that map to exit code 2.
struct UsageError(String);

/// Errors that map to exit code 1.
struct CheckError(String);

enum CliError {
    Usage(UsageError),
    Check(CheckError),
}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        CliError::Usage(e)
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        CliError::Check(e)
    }
}

fn usage(msg: impl ToString) -> CliError {
    CliError::Usage(UsageError(msg.to_string()))
}

fn check(msg: impl ToString) -> CliError {
    CliError::Check(CheckError(msg.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(CheckError(msg))) => {
            eprintln!("verification failure: {msg}");
            println!("{}", json!({ "error": msg }));
            ExitCode::from(1)
        }
        Err(CliError::Usage(UsageError(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn select_drum(sel: &DrumSelector) -> Result<(Drum, Option<usize>), CliError> {
    let picked = [sel.k.is_some(), sel.santos, sel.motif.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if picked != 1 {
        return Err(usage("select exactly one of --k, --santos, --motif"));
    }
    if sel.santos {
        let drum = build_santos().map_err(usage)?;
        return Ok((drum, None));
    }
    if let Some(path) = &sel.motif {
        let motif: Vec<RVec> = read_json(path)?;
        let drum = build_from_motif(&motif).map_err(check)?;
        return Ok((drum, None));
    }
    let k = sel.k.expect("checked above");
    let params: FamilyParams = match &sel.params {
        Some(path) => read_json(path)?,
        None => default_params(k).map_err(usage)?,
    };
    if params.k != k {
        return Err(usage("parameter file is for a different k"));
    }
    let drum = build_dk(&params).map_err(check)?;
    Ok((drum, Some(k)))
}

fn emit(payload: &impl serde::Serialize, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(payload)
        .map_err(|e| usage(format!("serialization: {e}")))?;
    if let Some(path) = out {
        fs::write(path, &text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    println!("{text}");
    Ok(())
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Build { drum, out } => {
            let (drum, _) = select_drum(&drum)?;
            emit(&drum.to_json(), out.as_ref())
        }
        Command::Width { drum } => {
            let (drum, k) = select_drum(&drum)?;
            let width = drum.width().map_err(check)?;
            let summary = verify::report(k, drum.polytope().num_vertices(), width);
            emit(&json!({ "width": width, "report": summary }), None)
        }
        Command::Fvmap { drum } => {
            let (drum, _) = select_drum(&drum)?;
            let plus = drum.facet_vertex_map(Side::Plus).map_err(check)?;
            let minus = drum.facet_vertex_map(Side::Minus).map_err(check)?;
            let two_cycle = drum.has_oriented_two_cycle().map_err(check)?;
            emit(
                &json!({
                    "plus": plus,
                    "minus": minus,
                    "has_oriented_two_cycle": two_cycle,
                }),
                None,
            )
        }
        Command::Verify { k, stage } => run_verify(k, stage.as_deref()),
        Command::Certify { k, out } => {
            let cert = verify::certify_width_lower_bound(k).map_err(check)?;
            emit(&cert, out.as_ref())?;
            if cert.certified {
                Ok(())
            } else {
                Err(check(format!(
                    "bound {} is below the target {}",
                    cert.bound, cert.target
                )))
            }
        }
        Command::Search {
            seed,
            budget,
            config,
            out,
        } => {
            let mut cfg = match &config {
                Some(path) => read_json(path)?,
                None => search::default_config(seed, budget),
            };
            cfg.seed = seed;
            cfg.budget = budget;
            let mut sink: Box<dyn std::io::Write> = match &out {
                Some(path) => Box::new(
                    fs::File::create(path)
                        .map_err(|e| usage(format!("{}: {e}", path.display())))?,
                ),
                None => Box::new(std::io::stdout()),
            };
            let records = search::run_search(&cfg, |record| {
                let line = serde_json::to_string(record).expect("record serializes");
                writeln!(sink, "{line}").expect("record stream writable");
            })
            .map_err(usage)?;
            let widths = records
                .iter()
                .filter(|r| matches!(r.outcome, search::Outcome::Width { .. }))
                .count();
            eprintln!(
                "evaluated {} motifs, {} fully scored",
                records.len(),
                widths
            );
            Ok(())
        }
        Command::Export { k, dot, out } => run_export(k, dot, out),
    }
}

fn run_verify(k: usize, stage: Option<&str>) -> Result<(), CliError> {
    let params = default_params(k).map_err(usage)?;
    let drum = build_dk(&params).map_err(check)?;
    let cls_minus =
        verify::classify_skin_facets(&drum, k, Side::Minus).map_err(check)?;
    let cls_plus = verify::classify_skin_facets(&drum, k, Side::Plus).map_err(check)?;
    let orbit_sizes = |cls: &verify::OrbitClassification| {
        let mut sizes = std::collections::BTreeMap::new();
        for kind in &cls.kinds {
            *sizes.entry(kind.to_string()).or_insert(0usize) += 1;
        }
        sizes
    };
    if stage == Some("classify") {
        return emit(
            &json!({
                "stage": "classify",
                "orbits": cls_plus.orbit_count(),
                "sizes_plus": orbit_sizes(&cls_plus),
                "sizes_minus": orbit_sizes(&cls_minus),
            }),
            None,
        );
    }
    let targets = verify::check_phi_maps(&drum, k, &cls_minus, &cls_plus).map_err(check)?;
    if stage == Some("phi") {
        return emit(&json!({ "stage": "phi", "targets": targets }), None);
    }
    let screen_minus = verify::screen_edges(&drum, k, Side::Minus).map_err(check)?;
    let screen_plus = verify::screen_edges(&drum, k, Side::Plus).map_err(check)?;
    if stage == Some("edges") {
        return emit(
            &json!({ "stage": "edges", "minus": screen_minus, "plus": screen_plus }),
            None,
        );
    }
    let g_minus = verify::build_g(&drum, k, Side::Minus, &cls_minus).map_err(check)?;
    let g_plus = verify::build_g(&drum, k, Side::Plus, &cls_plus).map_err(check)?;
    let d_minus = verify::check_cor_bound(&g_minus, k).map_err(check)?;
    let d_plus = verify::check_cor_bound(&g_plus, k).map_err(check)?;
    if stage == Some("graphs") {
        return emit(
            &json!({
                "stage": "graphs",
                "dim_counts_plus": g_plus.dim_counts,
                "dim_counts_minus": g_minus.dim_counts,
                "distances_minus": d_minus,
                "distances_plus": d_plus,
            }),
            None,
        );
    }
    match stage {
        None | Some("bound") => {
            let cert = verify::certify_drum(&drum, k).map_err(check)?;
            emit(&cert, None)?;
            if cert.certified {
                Ok(())
            } else {
                Err(check("certificate bound below target"))
            }
        }
        Some(other) => Err(usage(format!(
            "unknown stage {other}; expected classify | phi | edges | graphs | bound"
        ))),
    }
}

fn run_export(k: usize, dot: bool, out: Option<PathBuf>) -> Result<(), CliError> {
    let params = default_params(k).map_err(usage)?;
    let drum = build_dk(&params).map_err(check)?;
    if !dot {
        return emit(&drum.to_json(), out.as_ref());
    }
    let mut text = String::new();
    for side in [Side::Minus, Side::Plus] {
        let cls = verify::classify_skin_facets(&drum, k, side).map_err(check)?;
        let g = verify::build_g(&drum, k, side, &cls).map_err(check)?;
        let name = match side {
            Side::Minus => "G_minus",
            Side::Plus => "G_plus",
        };
        text.push_str(&g.quotient.to_dot(name, |f| format!("{:?} d{}", f.vertex_indices, f.dim)));
        text.push('\n');
        let skin = drum.projected_skin(side);
        let fr = skin.facet_ridge_graph().map_err(check)?;
        let fr_name = match side {
            Side::Minus => "FR_minus",
            Side::Plus => "FR_plus",
        };
        text.push_str(&fr.to_dot(fr_name, |fi| cls.label(*fi).to_string()));
        text.push('\n');
    }
    if let Some(path) = &out {
        fs::write(path, &text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        println!("{}", json!({ "written": path.display().to_string() }));
    } else {
        println!("{}", json!({ "dot": text }));
    }
    Ok(())
}
