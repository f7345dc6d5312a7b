//! Command-line front end: one command per run, a JSON report on stdout,
//! a short summary on stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use rhdim::corpus::run_fixtures;
use rhdim::homalg::{dual, ext, ext_table, is_reflexive, is_torsionless, p_invariant, pushforward};
use rhdim::invariants::{check_cor33, check_main_theorem, check_p_transfer, check_prop27, check_t2, TheoremReport};
use rhdim::module::Module;
use rhdim::reducing::{search, verify, SearchConfig, Target, VerifyReport};
use rhdim::resolution::{resolve, RMatrix};
use rhdim::workspace::{certificate_to_json, field_spec, matrix_to_json, module_to_json, FieldSpec, Workspace};
use rhdim::{Error, Fp, Scalar, Q};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "rhdim", version, about = "Exact homological algebra over Artinian local rings")]
struct Cli {
    /// Workspace JSON file with the algebra, modules and certificates.
    #[arg(long, short, global = true)]
    workspace: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Facts about the workspace algebra.
    Algebra {
        #[command(subcommand)]
        cmd: AlgebraCmd,
    },
    /// Minimal free resolution: Betti numbers and differentials.
    Resolve {
        module: String,
        #[arg(long, default_value_t = 10)]
        window: usize,
    },
    /// Dimensions of Ext^i(M, N) for i up to the window.
    Ext {
        m: String,
        n: String,
        #[arg(long, default_value_t = 10)]
        window: usize,
        /// Include cocycle bases.
        #[arg(long)]
        verbose: bool,
    },
    /// The dual Hom(M, R), torsionless and reflexive verdicts.
    Dual { module: String },
    /// The extension 0 -> M -> R^n -> M_1 -> 0 built from a basis of the dual.
    Pushforward { module: String },
    Reduce {
        #[command(subcommand)]
        cmd: ReduceCmd,
    },
    /// Check a theorem instance and print its report.
    Theorem {
        #[command(subcommand)]
        cmd: TheoremCmd,
    },
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    Info,
}

#[derive(Args, Clone)]
struct Bounds {
    #[arg(long, default_value_t = 2)]
    max_r: usize,
    #[arg(long, default_value_t = 8)]
    max_a: usize,
    #[arg(long, default_value_t = 8)]
    max_b: usize,
    #[arg(long, default_value_t = 2)]
    max_n: usize,
    /// Extension classes tried per step.
    #[arg(long, default_value_t = 200)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    window: usize,
    /// Largest k-dimension of an intermediate module.
    #[arg(long, default_value_t = 512)]
    max_module_dim: usize,
}

impl Bounds {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            max_r: self.max_r,
            max_a: self.max_a,
            max_b: self.max_b,
            max_n: self.max_n,
            budget: self.budget,
            window: self.window,
            seed: self.seed,
            max_module_dim: self.max_module_dim,
        }
    }
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Bounded search for a reducing sequence.
    Search {
        module: String,
        #[arg(long, default_value = "pd")]
        target: Target,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Check a certificate from the workspace.
    Verify {
        cert: String,
        #[arg(long, default_value_t = 10)]
        window: usize,
    },
}

#[derive(Subcommand)]
enum TheoremCmd {
    /// Finite reducing dimension against the Ext window and the shift identity.
    Main {
        module: String,
        cert: String,
        #[arg(long, default_value_t = 10)]
        window: usize,
    },
    /// M is a split summand of every module in the sequence.
    T2 {
        module: String,
        cert: String,
        #[arg(long, default_value_t = 10)]
        window: usize,
    },
    /// Over m² = 0 rings: R^α ⊕ k^β shape against bounded search.
    Prop27 {
        module: String,
        #[arg(long)]
        cert: Option<String>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Canonical module: Gorenstein rings against bounded search.
    Cor33 {
        #[command(flatten)]
        bounds: Bounds,
    },
    /// P(-, N) is constant along a certificate.
    Ptransfer {
        cert: String,
        n: String,
        #[arg(long, default_value_t = 10)]
        window: usize,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Run the built-in fixtures, including the acceptance suite.
    Run {
        #[arg(long)]
        filter: Option<String>,
    },
}

struct Outcome {
    command: String,
    window: Option<usize>,
    ok: bool,
    summary: String,
    result: Value,
}

fn outcome(command: &str, window: Option<usize>, ok: bool, summary: String, result: Value) -> Outcome {
    Outcome { command: command.into(), window, ok, summary, result }
}

fn is_input_error(e: &Error) -> bool {
    matches!(e, Error::Schema { .. } | Error::Parse(_))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            let report = json!({
                "tool": "rhdim",
                "version": VERSION,
                "command": out.command,
                "window": out.window,
                "status": if out.ok { "ok" } else { "fail" },
                "result": out.result,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            eprintln!("{}", out.summary);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let input = is_input_error(&e);
            let mut err = json!({ "kind": if input { "input" } else { "computation" }, "message": e.to_string() });
            if let Error::Schema { pointer, message } = &e {
                err["pointer"] = json!(pointer);
                err["message"] = json!(message);
            }
            let report = json!({ "tool": "rhdim", "version": VERSION, "status": "error", "error": err });
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            eprintln!("error: {e}");
            ExitCode::from(if input { 2 } else { 1 })
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    if let Command::Corpus { cmd: CorpusCmd::Run { filter } } = &cli.command {
        let rep = run_fixtures(filter.as_deref());
        let passed = rep.fixtures.iter().filter(|f| f.passed).count();
        let summary = rep
            .fixtures
            .iter()
            .map(|f| format!("{} {}", if f.passed { "PASS" } else { "FAIL" }, f.name))
            .chain([format!("{passed}/{} fixtures pass", rep.fixtures.len())])
            .collect::<Vec<_>>()
            .join("\n");
        // timings vary between runs; keep them out of the report
        let mut result = serde_json::to_value(&rep).expect("serializable");
        if let Some(list) = result["fixtures"].as_array_mut() {
            for f in list {
                f.as_object_mut().map(|o| o.remove("seconds"));
            }
        }
        return Ok(outcome("corpus run", None, rep.passed, summary, result));
    }
    let path = cli
        .workspace
        .as_ref()
        .ok_or_else(|| Error::Schema { pointer: String::new(), message: "--workspace is required".into() })?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Schema { pointer: String::new(), message: format!("cannot read {}: {e}", path.display()) })?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Schema { pointer: String::new(), message: format!("invalid JSON: {e}") })?;
    macro_rules! over {
        ($($p:literal),*) => {
            match field_spec(&doc)? {
                FieldSpec::Q => run::<Q>(&doc, &cli.command),
                $(FieldSpec::Fp($p) => run::<Fp<$p>>(&doc, &cli.command),)*
                FieldSpec::Fp(p) => Err(Error::Schema {
                    pointer: "/algebra/p".into(),
                    message: format!("unsupported prime {p}; supported: {}", [$($p),*].map(|x: u32| x.to_string()).join(", ")),
                }),
            }
        };
    }
    over!(2, 3, 5, 7, 11, 13, 101)
}

fn rmatrix_json<S: Scalar>(m: &Module<S>, r: &RMatrix<S>) -> Value {
    let alg = m.algebra();
    let rows: Vec<Vec<String>> = (0..r.rows())
        .map(|i| (0..r.cols()).map(|j| alg.format_element(r.get(i, j))).collect())
        .collect();
    json!(rows)
}

fn theorem(command: &str, rep: TheoremReport) -> Outcome {
    let applicable = rep.hypotheses_hold();
    let summary = match (&rep.counterexample, applicable) {
        (Some(c), _) => format!("{}: failed at {c}", rep.theorem),
        (None, true) => format!("{}: all checks pass", rep.theorem),
        (None, false) => {
            let unmet: Vec<&str> = rep.hypotheses.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            format!("{}: not applicable, unmet hypotheses {unmet:?}", rep.theorem)
        }
    };
    let window = rep.window;
    let mut result = serde_json::to_value(&rep).expect("serializable");
    result["applicable"] = json!(applicable);
    outcome(command, Some(window), rep.counterexample.is_none(), summary, result)
}

fn run<S: Scalar>(doc: &Value, command: &Command) -> Result<Outcome, Error> {
    let ws = Workspace::<S>::from_value(doc)?;
    let a = &ws.algebra;
    Ok(match command {
        Command::Algebra { cmd: AlgebraCmd::Info } => {
            let result = json!({
                "field": ws.field.to_string(),
                "vars": a.var_names(),
                "nilpotency": a.nilpotency(),
                "relations": ws.relations,
                "dim": a.dim(),
                "embedding_dim": a.embedding_dim(),
                "basis": a.basis_labels(),
                "socle_dim": a.socle().dim(),
                "gorenstein": a.is_gorenstein(),
                "modules": ws.modules.iter().map(|(k, m)| (k.clone(), json!(m.dim()))).collect::<serde_json::Map<_, _>>(),
                "certificates": ws.certificates.keys().collect::<Vec<_>>(),
            });
            let summary = format!(
                "{} algebra of dimension {} in {} variables, {}Gorenstein",
                ws.field,
                a.dim(),
                a.num_vars(),
                if a.is_gorenstein() { "" } else { "not " }
            );
            outcome("algebra info", None, true, summary, result)
        }
        Command::Resolve { module, window } => {
            let m = ws.module(module)?;
            let res = resolve(m, *window)?;
            let betti = res.betti();
            let diffs: Vec<Value> = (1..=*window).map(|i| rmatrix_json(m, &res.differential_r(i))).collect();
            let result = json!({
                "module": module,
                "betti": betti,
                "differentials": diffs,
                "periodicity": res.detect_periodicity()?.map(|(s, p)| json!({"start": s, "period": p})),
            });
            outcome("resolve", Some(*window), true, format!("betti({module}) = {betti:?}"), result)
        }
        Command::Ext { m, n, window, verbose } => {
            let (mm, nn) = (ws.module(m)?, ws.module(n)?);
            let table = ext_table(mm, nn, *window)?;
            let mut result = json!({
                "m": m,
                "n": n,
                "dims": table.dims,
                "p": p_invariant(mm, nn, *window)?,
            });
            if *verbose {
                let cocycles = (0..=*window)
                    .map(|i| {
                        let g = ext(mm, nn, i)?;
                        Ok(json!(g.cocycles.iter().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()))
                    })
                    .collect::<Result<Vec<Value>, Error>>()?;
                result["cocycles"] = json!(cocycles);
            }
            outcome("ext", Some(*window), true, format!("dim Ext^i({m}, {n}) = {:?}", table.dims), result)
        }
        Command::Dual { module } => {
            let m = ws.module(module)?;
            let d = dual(m)?;
            let (tl, rf) = (is_torsionless(m)?, is_reflexive(m)?);
            let result = json!({
                "module": module,
                "dual": module_to_json(&d.module),
                "dual_dim": d.module.dim(),
                "torsionless": tl,
                "reflexive": rf,
            });
            let summary = format!("{module}* has dimension {}; torsionless {tl}, reflexive {rf}", d.module.dim());
            outcome("dual", None, true, summary, result)
        }
        Command::Pushforward { module } => {
            let m = ws.module(module)?;
            let pf = pushforward(m)?;
            let ses = &pf.ses;
            let result = json!({
                "module": module,
                "free_rank": ses.middle().dim() / a.dim(),
                "inclusion": matrix_to_json(&ses.inject.matrix),
                "cokernel": module_to_json(ses.right()),
                "ext1_vanishes": pf.ext1_vanishes,
            });
            let summary = format!(
                "0 -> {module} -> R^{} -> M_1 -> 0 with dim M_1 = {}",
                ses.middle().dim() / a.dim(),
                ses.right().dim()
            );
            outcome("pushforward", None, true, summary, result)
        }
        Command::Reduce { cmd: ReduceCmd::Search { module, target, bounds } } => {
            let m = ws.module(module)?;
            let cfg = bounds.config();
            let found = search(m, &cfg, *target)?;
            let result = json!({
                "module": module,
                "target": target.to_string(),
                "bounds": {
                    "max_r": cfg.max_r, "max_a": cfg.max_a, "max_b": cfg.max_b, "max_n": cfg.max_n,
                    "budget": cfg.budget, "seed": cfg.seed, "max_module_dim": cfg.max_module_dim,
                },
                "found": found.sequence.is_some(),
                "candidates": found.candidates,
                "parameters": found.sequence.as_ref().map(|s| s.parameters()),
                "certificate": found.sequence.as_ref().map(certificate_to_json),
            });
            let summary = match &found.sequence {
                Some(s) => format!("found r = {} with steps {:?}", s.len(), s.parameters()),
                None => format!("no certificate within bounds ({} candidates)", found.candidates),
            };
            outcome("reduce search", Some(cfg.window), found.sequence.is_some(), summary, result)
        }
        Command::Reduce { cmd: ReduceCmd::Verify { cert, window } } => {
            let seq = ws.certificate(cert)?;
            let rep = verify(seq, *window)?;
            let (verdict, summary) = match &rep {
                VerifyReport::Accept => (json!({"verdict": "accept"}), format!("{cert}: accept")),
                VerifyReport::Reject { step, reason } => (
                    json!({"verdict": "reject", "step": step, "reason": reason}),
                    format!("{cert}: reject at step {step}: {reason}"),
                ),
            };
            let result = json!({"certificate": cert, "r": seq.len(), "parameters": seq.parameters(), "report": verdict});
            outcome("reduce verify", Some(*window), rep.accepted(), summary, result)
        }
        Command::Theorem { cmd } => match cmd {
            TheoremCmd::Main { module, cert, window } => {
                theorem("theorem main", check_main_theorem(ws.module(module)?, ws.certificate(cert)?, *window)?)
            }
            TheoremCmd::T2 { module, cert, window } => {
                theorem("theorem t2", check_t2(ws.module(module)?, ws.certificate(cert)?, *window)?)
            }
            TheoremCmd::Prop27 { module, cert, bounds } => {
                let submitted = cert.as_ref().map(|c| ws.certificate(c)).transpose()?;
                theorem("theorem prop27", check_prop27(a, ws.module(module)?, &bounds.config(), submitted)?)
            }
            TheoremCmd::Cor33 { bounds } => theorem("theorem cor33", check_cor33(a, bounds.window, &bounds.config())?),
            TheoremCmd::Ptransfer { cert, n, window } => {
                theorem("theorem ptransfer", check_p_transfer(ws.certificate(cert)?, ws.module(n)?, *window)?)
            }
        },
        Command::Corpus { .. } => unreachable!("handled before loading a workspace"),
    })
}
