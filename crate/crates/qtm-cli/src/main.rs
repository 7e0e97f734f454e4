//! `qtm`: compute quantized trace-of-monodromy elements and verify the
//! structural identities they satisfy. All results go to stdout as JSON,
//! diagnostics to stderr. Exit codes: 0 success, 1 verification failed,
//! 2 invalid input, 3 unsupported case.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qtm::lattice::{LatticeRef, LatticeVec};
use qtm::loops::LoopPosition;
use qtm::surface::Triangulation;
use qtm::teschner::{self, TeschnerWitness, Tr5Witness};
use qtm::torus::{QTorusElement, TermJson};
use qtm::trace::trace_report;
use qtm::{catalog, mutation, Error};

#[derive(Parser)]
#[command(name = "qtm", version, about = "quantized trace-of-monodromy toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the incidence invariants of a surface JSON file.
    SurfaceValidate {
        #[arg(long)]
        surface: PathBuf,
    },
    /// Compute the state-sum trace of a loop.
    Trace {
        #[command(flatten)]
        input: LoopInput,
        /// Render terms in a human-readable form as well.
        #[arg(long)]
        pretty: bool,
    },
    /// Verify flip naturality across a single flip.
    FlipVerify {
        /// Catalog entry with a recorded flip partner.
        #[arg(long, conflicts_with_all = ["surface", "trace_before", "trace_after"])]
        catalog: Option<String>,
        /// Loop name (catalog mode).
        #[arg(long = "loop")]
        loop_name: Option<String>,
        /// Target-triangulation surface JSON (file mode).
        #[arg(long)]
        surface: Option<PathBuf>,
        /// Trace on the target triangulation (file mode).
        #[arg(long)]
        trace_after: Option<PathBuf>,
        /// Trace on the flipped (source) triangulation (file mode).
        #[arg(long)]
        trace_before: Option<PathBuf>,
        /// The flipped arc.
        #[arg(long)]
        arc: Option<String>,
    },
    /// Verify a (strong or weak) Teschner triple.
    TeschnerVerify {
        #[arg(long)]
        catalog: String,
        /// Loop names "gamma,gamma1,gamma2".
        #[arg(long)]
        triple: String,
        /// Witness vectors as "arc:coeff,arc:coeff".
        #[arg(long)]
        v1: String,
        #[arg(long)]
        v2: String,
        /// Certify TR5 with another strong triple "gamma,gamma1,gamma2".
        #[arg(long)]
        tr5_triple: Option<String>,
        #[arg(long)]
        tr5_v1: Option<String>,
        #[arg(long)]
        tr5_v2: Option<String>,
    },
    /// Search for Teschner witness vectors from the traces.
    TeschnerSolve {
        #[arg(long)]
        catalog: String,
        #[arg(long)]
        triple: String,
    },
    /// Check algebraic strong commutativity of two loop traces.
    CommuteCheck {
        #[arg(long)]
        catalog: String,
        /// Two loop names "l1,l2".
        #[arg(long)]
        loops: String,
    },
    /// List catalog entries or emit their surfaces and loops.
    Catalog {
        #[command(subcommand)]
        what: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Get {
        name: String,
        /// What to emit: "surface" or "loop".
        #[arg(long)]
        emit: String,
        /// Loop name when emitting a loop.
        #[arg(long = "loop")]
        loop_name: Option<String>,
    },
}

#[derive(Args)]
struct LoopInput {
    /// Catalog entry name.
    #[arg(long, conflicts_with = "surface")]
    catalog: Option<String>,
    /// Surface JSON file (with --loop as a loop JSON file).
    #[arg(long)]
    surface: Option<PathBuf>,
    /// Loop name (catalog mode) or loop JSON file path.
    #[arg(long = "loop")]
    loop_ref: String,
}

fn main() -> ExitCode {
    init_threads();
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            if e.downcast_ref::<Error>()
                .map(Error::is_unsupported)
                .unwrap_or(false)
            {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn init_threads() {
    #[cfg(feature = "parallel")]
    if let Ok(n) = std::env::var("QTM_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

fn run() -> Result<bool, AnyError> {
    let cli = Cli::parse();
    match cli.command {
        Command::SurfaceValidate { surface } => {
            let t = read_surface(&surface)?;
            let ds = t.validate();
            let ok = ds.is_empty();
            emit(&json!({ "ok": ok, "diagnostics": ds }));
            Ok(ok)
        }
        Command::Trace { input, pretty } => {
            let (t, lp) = resolve_loop(&input)?;
            let report = trace_report(&t, &lp)?;
            let mut body = json!({
                "classification": report.classification.to_string(),
                "state_count": report.state_count,
                "v_gamma": report.v_gamma.to_json(),
                "terms": report.element.to_json(),
            });
            if pretty {
                body["pretty"] = json!(report.element.to_string());
            }
            emit(&body);
            Ok(true)
        }
        Command::FlipVerify {
            catalog: cat,
            loop_name,
            surface,
            trace_after,
            trace_before,
            arc,
        } => {
            let (eps, f_target, f_source, arc) = match cat {
                Some(name) => {
                    let entry = catalog::get(&name)?;
                    let flip = entry
                        .flip
                        .clone()
                        .ok_or_else(|| format!("catalog entry {} has no flip partner", name))?;
                    let partner = catalog::get(&flip.partner)?;
                    let lname = loop_name.ok_or("catalog mode needs --loop with a loop name")?;
                    let lp = entry
                        .loops
                        .get(&lname)
                        .ok_or_else(|| format!("no loop {} in {}", lname, name))?;
                    let lp_flipped = partner
                        .loops
                        .get(&lname)
                        .ok_or_else(|| format!("no loop {} in {}", lname, flip.partner))?;
                    let eps = entry.surface.exchange_matrix()?;
                    let f_target = qtm::trace::trace(&entry.surface, lp)?;
                    let f_source = qtm::trace::trace(&partner.surface, lp_flipped)?;
                    (eps, f_target, f_source, flip.arc)
                }
                None => {
                    let surface = surface.ok_or("need --surface or --catalog")?;
                    let arc = arc.ok_or("need --arc in file mode")?;
                    let t = read_surface(&surface)?;
                    let eps = t.exchange_matrix()?;
                    let flipped = eps.mutate(&arc)?;
                    let f_target =
                        read_element(&trace_after.ok_or("need --trace-after")?, eps.clone())?;
                    let f_source = read_element(
                        &trace_before.ok_or("need --trace-before")?,
                        std::sync::Arc::new(flipped),
                    )?;
                    (eps, f_target, f_source, arc)
                }
            };
            let ok = mutation::verify_flip_naturality(&f_target, &f_source, &eps, &arc)?;
            emit(&json!({ "arc": arc, "natural": ok }));
            Ok(ok)
        }
        Command::TeschnerVerify {
            catalog: cat,
            triple,
            v1,
            v2,
            tr5_triple,
            tr5_v1,
            tr5_v2,
        } => {
            let entry = catalog::get(&cat)?;
            let lat = entry.surface.exchange_matrix()?;
            let (f_gamma, f_1, f_2, v_gamma) = triple_traces(&entry, &triple)?;
            let witness = TeschnerWitness {
                v1: parse_vec(&v1)?,
                v2: parse_vec(&v2)?,
                v_gamma,
            };
            let report = match tr5_triple {
                None => teschner::verify_strong_triple(&lat, &f_gamma, &f_1, &f_2, &witness)?,
                Some(t5) => {
                    let (w_gamma, w_1, w_2, w_v) = triple_traces(&entry, &t5)?;
                    let tr5_witness = TeschnerWitness {
                        v1: parse_vec(&tr5_v1.ok_or("need --tr5-v1")?)?,
                        v2: parse_vec(&tr5_v2.ok_or("need --tr5-v2")?)?,
                        v_gamma: w_v,
                    };
                    teschner::verify_weak_triple(
                        &lat,
                        &f_gamma,
                        &f_1,
                        &f_2,
                        &witness,
                        Some(Tr5Witness {
                            f_gamma: &w_gamma,
                            f_1: &w_1,
                            f_2: &w_2,
                            witness: &tr5_witness,
                        }),
                    )?
                }
            };
            let ok = if report.tr5.is_some() {
                report.weak_triple()
            } else {
                report.strong_triple()
            };
            emit(&report.to_json());
            Ok(ok)
        }
        Command::TeschnerSolve {
            catalog: cat,
            triple,
        } => {
            let entry = catalog::get(&cat)?;
            let lat = entry.surface.exchange_matrix()?;
            let (f_gamma, f_1, f_2, v_gamma) = triple_traces(&entry, &triple)?;
            let found = teschner::solve_witness(&lat, &f_gamma, &f_1, &f_2, &v_gamma)?;
            let body: Vec<_> = found
                .iter()
                .map(|s| {
                    json!({
                        "v1": s.witness.v1.to_json(),
                        "v2": s.witness.v2.to_json(),
                        "report": s.report.to_json(),
                    })
                })
                .collect();
            emit(&json!(body));
            Ok(!found.is_empty())
        }
        Command::CommuteCheck {
            catalog: cat,
            loops,
        } => {
            let entry = catalog::get(&cat)?;
            let lat = entry.surface.exchange_matrix()?;
            let names: Vec<&str> = loops.split(',').collect();
            if names.len() != 2 {
                return Err("expected --loops l1,l2".into());
            }
            let f1 = qtm::trace::trace(&entry.surface, loop_by_name(&entry, names[0])?)?;
            let f2 = qtm::trace::trace(&entry.surface, loop_by_name(&entry, names[1])?)?;
            let verdict = teschner::strongly_commute(&lat, &f1, &f2)?;
            let plain = f1.mul(&f2)? == f2.mul(&f1)?;
            emit(&json!({ "strongly_commute": verdict, "commute": plain }));
            Ok(verdict.is_verified())
        }
        Command::Catalog { what } => match what {
            CatalogCmd::List => {
                emit(&json!(catalog::list()));
                Ok(true)
            }
            CatalogCmd::Get {
                name,
                emit: what,
                loop_name,
            } => {
                let entry = catalog::get(&name)?;
                match what.as_str() {
                    "surface" => {
                        emit(&serde_json::to_value(&entry.surface)?);
                        Ok(true)
                    }
                    "loop" => {
                        let lname = loop_name.ok_or("need --loop with a loop name")?;
                        let lp = loop_by_name(&entry, &lname)?;
                        emit(&json!({
                            "surface": name,
                            "segments": serde_json::to_value(&lp.segments)?,
                        }));
                        Ok(true)
                    }
                    other => Err(format!("unknown --emit target {}", other).into()),
                }
            }
        },
    }
}

fn emit(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn read_surface(path: &PathBuf) -> Result<Triangulation, AnyError> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn read_element(path: &PathBuf, lattice: LatticeRef) -> Result<QTorusElement, AnyError> {
    let text = fs::read_to_string(path)?;
    // accept both a bare term list and the `trace` output wrapping it
    let terms: Vec<TermJson> = match serde_json::from_str(&text) {
        Ok(terms) => terms,
        Err(_) => {
            let v: serde_json::Value = serde_json::from_str(&text)?;
            serde_json::from_value(
                v.get("terms")
                    .cloned()
                    .ok_or("expected a term list or an object with a `terms` field")?,
            )?
        }
    };
    Ok(QTorusElement::from_json(lattice, &terms)?)
}

#[derive(serde::Deserialize)]
struct LoopFile {
    surface: String,
    segments: Vec<qtm::loops::Segment>,
}

fn resolve_loop(input: &LoopInput) -> Result<(Triangulation, LoopPosition), AnyError> {
    if let Some(name) = &input.catalog {
        let entry = catalog::get(name)?;
        let lp = loop_by_name(&entry, &input.loop_ref)?.clone();
        return Ok((entry.surface, lp));
    }
    let text = fs::read_to_string(&input.loop_ref)?;
    let file: LoopFile = serde_json::from_str(&text)?;
    let t = match &input.surface {
        Some(path) => read_surface(path)?,
        None => match catalog::get(&file.surface) {
            Ok(entry) => entry.surface,
            Err(_) => read_surface(&PathBuf::from(&file.surface))?,
        },
    };
    Ok((
        t,
        LoopPosition {
            segments: file.segments,
        },
    ))
}

fn loop_by_name<'a>(
    entry: &'a catalog::CatalogEntry,
    name: &str,
) -> Result<&'a LoopPosition, AnyError> {
    entry
        .loops
        .get(name)
        .ok_or_else(|| format!("no loop {} in {}", name, entry.name).into())
}

fn triple_traces(
    entry: &catalog::CatalogEntry,
    triple: &str,
) -> Result<(QTorusElement, QTorusElement, QTorusElement, LatticeVec), AnyError> {
    let names: Vec<&str> = triple.split(',').collect();
    if names.len() != 3 {
        return Err("expected --triple gamma,gamma1,gamma2".into());
    }
    let lp_gamma = loop_by_name(entry, names[0])?;
    let f_gamma = qtm::trace::trace(&entry.surface, lp_gamma)?;
    let f_1 = qtm::trace::trace(&entry.surface, loop_by_name(entry, names[1])?)?;
    let f_2 = qtm::trace::trace(&entry.surface, loop_by_name(entry, names[2])?)?;
    let v_gamma = lp_gamma.total_intersection(&entry.surface);
    Ok((f_gamma, f_1, f_2, v_gamma))
}

fn parse_vec(s: &str) -> Result<LatticeVec, AnyError> {
    let mut coords = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (arc, coeff) = part
            .rsplit_once(':')
            .ok_or_else(|| format!("bad coordinate `{}` (want arc:coeff)", part))?;
        coords.push((arc.to_string(), coeff.parse::<i64>()?));
    }
    Ok(LatticeVec::from_coords(coords))
}
