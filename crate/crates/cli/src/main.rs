use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crosslab::constructions::{
    blazek_koman, convex, harary_hill_layout, random_spherical, random_two_page, realize, Layout, DEFAULT_RESOLUTION,
};
use crosslab::goodness::crossing_count;
use crosslab::io::{
    analysis_report, certificate_to_json, cycle_to_json, drawing_from_str, drawing_to_string, opt_result_to_json,
    parse_face_ref, parse_vertex_list, to_canonical, verdict_to_json,
};
use crosslab::optimizer::{
    certify_result, exact_limit, exact_min_crossings, local_search, DEFAULT_EXACT_BUDGET, DEFAULT_ITERATIONS,
    DEFAULT_RESTARTS,
};
use crosslab::scalar::ratio;
use crosslab::shelling::{
    check_lemma_cycle, lemma_witness, theorem1_pipeline, verify_shelling_direct, Conclusion, PipelineOptions,
};
use crosslab::suite::{format_line, run_criterion, CRITERIA, EXCLUSION_NOTE};
use crosslab::svg::export_svg;
use crosslab::{Drawing, Error, FaceRef};

#[derive(Parser)]
#[command(name = "crosslab", version, about = "Good drawings of K_n: constructions, crossing analysis and shellability certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    HararyHill,
    BlazekKoman,
    Convex,
    TwoPageRandom,
    Cylindrical,
    Spherical,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Paper,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a drawing and write it as JSON.
    Gen {
        #[arg(long, value_enum)]
        class: Class,
        #[arg(long)]
        n: usize,
        /// Seed for randomized classes (default 0; always echoed).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Crossings, k-edge tables, the crossing identity and the E<=<=k bound rows.
    Analyze {
        file: PathBuf,
        /// Designated face: "x,y" interior point or "unbounded".
        #[arg(long)]
        face: Option<String>,
    },
    /// Shellability certificate and lower-bound verdict.
    Shell {
        file: PathBuf,
        /// Candidate cycle for the sufficient condition, "v1,v2,...".
        #[arg(long, conflicts_with = "set")]
        cycle: Option<String>,
        /// Shelling sequence checked against the definition, "v1,v2,...".
        #[arg(long)]
        set: Option<String>,
        /// Witness point "x,y" (default: unbounded face, or beside v_s v_1 for --cycle).
        #[arg(long)]
        witness: Option<String>,
    },
    /// Minimize 2-page crossings of K_n.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "anneal")]
        exact: bool,
        #[arg(long)]
        anneal: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
        iterations: usize,
        /// Branch-and-bound node budget.
        #[arg(long, default_value_t = DEFAULT_EXACT_BUDGET)]
        budget: u64,
        /// Realize the layout and run the shelling pipeline on it.
        #[arg(long)]
        certify: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a drawing as SVG.
    ExportSvg {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        no_crossings: bool,
    },
    /// Run the reproduction battery.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Only these criteria, "1,2,...".
        #[arg(long)]
        only: Option<String>,
        /// Also write the summary JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

enum Failure {
    /// Exit 1.
    Verification(String),
    /// Exit 3.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Fidelity { .. } | Error::Certification(_) => Failure::Verification(e.to_string()),
            Error::NotGood(report) => {
                let mut msg = format!("drawing is not good: {} violation(s)", report.violations.len());
                for v in report.violations.iter().take(10) {
                    msg.push_str(&format!("\n  {v:?}"));
                }
                Failure::Input(msg)
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn io_fail(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn read_drawing(path: &Path) -> std::result::Result<Drawing, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_fail(path, e))?;
    Ok(drawing_from_str(&text)?)
}

fn emit(text: &str, output: Option<&Path>) -> Outcome {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| io_fail(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(class: Class, n: usize, seed: Option<u64>, output: Option<&Path>) -> Outcome {
    let seed = seed.unwrap_or(0);
    let d = match class {
        Class::HararyHill => crosslab::constructions::harary_hill(n)?.1,
        Class::BlazekKoman => blazek_koman(n)?.1,
        Class::Convex => convex(n)?,
        Class::TwoPageRandom => realize(&Layout::TwoPage(random_two_page(n, seed)?), DEFAULT_RESOLUTION)?,
        Class::Cylindrical => {
            // A seeded rotation and reflection of the Harary-Hill layout.
            let mut l = harary_hill_layout(n)?.rotated(&ratio((seed % 97) as i64, 97));
            if seed & 1 == 1 {
                l = l.mirrored();
            }
            realize(&Layout::Cylindrical(l), DEFAULT_RESOLUTION)?
        }
        Class::Spherical => random_spherical(n, seed)?.0.realize()?,
    };
    emit(&drawing_to_string(&d), output)?;
    let summary = json!({
        "class": d.class().as_str(),
        "n": n,
        "seed": seed,
        "crossings": crossing_count(&d)?,
    });
    // Keep stdout clean when the drawing itself goes there.
    if output.is_some() {
        print!("{}", to_canonical(&summary));
    } else {
        eprint!("{}", to_canonical(&summary));
    }
    Ok(())
}

fn face_arg(s: Option<&str>) -> std::result::Result<FaceRef, Failure> {
    Ok(match s {
        Some(s) => parse_face_ref(s)?,
        None => FaceRef::Unbounded,
    })
}

fn shell(file: &Path, cycle: Option<&str>, set: Option<&str>, witness: Option<&str>) -> Outcome {
    let d = read_drawing(file)?;
    let mut out = serde_json::Map::new();
    let mut opts = PipelineOptions::default();
    let mut supplied_ok = true;
    if let Some(c) = cycle {
        let cycle = parse_vertex_list(c)?;
        let w = check_lemma_cycle(&d, &cycle)?;
        out.insert("cycle".into(), cycle_to_json(&w));
        if w.pass {
            let face = match witness {
                Some(s) => parse_face_ref(s)?,
                None => lemma_witness(&d, &cycle)?,
            };
            let cert = verify_shelling_direct(&d, &cycle, &face)?;
            supplied_ok = cert.valid;
            out.insert("certificate".into(), certificate_to_json(&cert));
            opts.sequence = Some(cycle);
            opts.witness = Some(face);
        } else {
            supplied_ok = false;
        }
    } else if let Some(s) = set {
        let seq = parse_vertex_list(s)?;
        let face = face_arg(witness)?;
        let cert = verify_shelling_direct(&d, &seq, &face)?;
        supplied_ok = cert.valid;
        out.insert("certificate".into(), certificate_to_json(&cert));
        opts.sequence = Some(seq);
        opts.witness = Some(face);
    }
    let verdict = theorem1_pipeline(&d, &opts)?;
    if !out.contains_key("certificate") {
        let cert = match (&verdict.certificate, &verdict.witness) {
            (Some(c), _) => Some(c.clone()),
            (None, Some(w)) => Some(verify_shelling_direct(&d, &verdict.sequence, w)?),
            _ => None,
        };
        out.insert("certificate".into(), cert.as_ref().map_or(Value::Null, certificate_to_json));
    }
    out.insert("verdict".into(), verdict_to_json(&d, &verdict));
    print!("{}", to_canonical(&Value::Object(out)));
    if verdict.conclusion == Conclusion::Violated {
        return Err(Failure::Verification("certified shelling but the lower bound fails".into()));
    }
    if !supplied_ok {
        return Err(Failure::Verification("the supplied sequence is not a valid certificate".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn optimize(
    n: usize,
    exact: bool,
    anneal: bool,
    seed: u64,
    restarts: usize,
    iterations: usize,
    budget: u64,
    certify: bool,
    output: Option<&Path>,
) -> Outcome {
    let use_exact = exact || (!anneal && n <= exact_limit());
    let r = if use_exact {
        exact_min_crossings(n, budget)?
    } else {
        local_search(n, seed, restarts, iterations)?
    };
    let mut v = opt_result_to_json(&r);
    let mut failed = None;
    if certify {
        match certify_result(&r) {
            Ok(rep) => {
                v["certification"] = json!({
                    "geometric": rep.geometric,
                    "status": rep.pipeline.conclusion.as_str(),
                    "s": rep.pipeline.s,
                    "pass": rep.pass,
                });
                if !rep.pass {
                    failed = Some("pipeline not conclusive on the realized layout".to_string());
                }
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit(&to_canonical(&v), output)?;
    if output.is_some() {
        eprintln!("n={} count={} method={} status={} seed={seed}", r.n, r.count, r.method.as_str(), r.status.as_str());
    }
    match failed {
        Some(msg) => Err(Failure::Verification(msg)),
        None => Ok(()),
    }
}

fn verify(only: Option<&str>, json_out: Option<&Path>) -> Outcome {
    let ids: Vec<u32> = match only {
        Some(s) => s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Failure::Input(format!("bad criterion list {s:?}")))?,
        None => CRITERIA.iter().map(|(i, _)| *i).collect(),
    };
    if let Some(bad) = ids.iter().find(|i| !CRITERIA.iter().any(|(c, _)| c == *i)) {
        return Err(Failure::Input(format!("no criterion {bad}")));
    }
    let mut rows = Vec::new();
    let mut all = true;
    for id in ids {
        let r = run_criterion(id);
        println!("{}", format_line(&r));
        all &= r.pass;
        rows.push(json!({"id": r.id, "name": r.name, "pass": r.pass, "detail": r.detail}));
    }
    println!("criterion 12 EXCLUDED {EXCLUSION_NOTE}");
    let summary = to_canonical(&json!({"suite": "paper", "pass": all, "criteria": rows}));
    match json_out {
        Some(p) => std::fs::write(p, &summary).map_err(|e| io_fail(p, e))?,
        None => print!("{summary}"),
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Verification("one or more criteria failed".into()))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen { class, n, seed, output } => gen(class, n, seed, output.as_deref()),
        Command::Analyze { file, face } => {
            let d = read_drawing(&file)?;
            let f = face_arg(face.as_deref())?;
            print!("{}", to_canonical(&analysis_report(&d, &f)?));
            Ok(())
        }
        Command::Shell { file, cycle, set, witness } => shell(&file, cycle.as_deref(), set.as_deref(), witness.as_deref()),
        Command::Optimize {
            n,
            exact,
            anneal,
            seed,
            restarts,
            iterations,
            budget,
            certify,
            output,
        } => optimize(n, exact, anneal, seed, restarts, iterations, budget, certify, output.as_deref()),
        Command::ExportSvg { file, output, no_crossings } => {
            let d = read_drawing(&file)?;
            let svg = export_svg(&d, !no_crossings)?;
            std::fs::write(&output, svg).map_err(|e| io_fail(&output, e))
        }
        Command::Verify { suite: Suite::Paper, only, json } => verify(only.as_deref(), json.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
