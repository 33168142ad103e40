//! The `latglue` command line.
//!
//! Exit codes: 0 success, 1 refuted or mismatch, 2 usage or input error,
//! 3 resource bound exceeded. Settings come from `latglue.toml` in the
//! working directory (or `--config`), then from flags. `LATGLUE_THREADS`
//! sets the worker thread count.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::discriminant::{discr, GluingKernel};
use crate::error::Error;
use crate::exact::fmt_rat;
use crate::extensions::{is_quasi_primitive, overlattice, roots};
use crate::lattice::{parse_lattice_expr, Lattice};
use crate::totality::case_analysis;
use crate::verification::{
    verify_all, verify_final_theorem_from, verify_lemma_3_1_with, verify_lemma_3_2_with, verify_prop_3_3_with, Status,
    VerificationReport,
};
use crate::wronskian::{
    all_critical_points_real, critical_genericity, critical_polynomial, diagonal_image_bidegree, flattening_points_all_real,
    mobius_realifiable, wronskian, Poly, RationalMap,
};
use crate::Limits;

pub const DEFAULT_CONFIG: &str = "latglue.toml";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Effective settings of one run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub format: Format,
    pub element_limit: u64,
    pub isomorphism_limit: u64,
    pub root_rank_limit: usize,
    pub seed: u64,
    pub verbosity: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        let l = Limits::default();
        Self {
            format: Format::Text,
            element_limit: l.element_limit,
            isomorphism_limit: l.isomorphism_limit,
            root_rank_limit: l.root_rank_limit,
            seed: 0,
            verbosity: 0,
        }
    }
}

impl RunConfig {
    pub fn limits(&self) -> Limits {
        Limits {
            element_limit: self.element_limit,
            isomorphism_limit: self.isomorphism_limit,
            root_rank_limit: self.root_rank_limit,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.element_limit == 0 || self.isomorphism_limit == 0 || self.root_rank_limit == 0 {
            return Err("enumeration bounds must be positive".into());
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("invalid config: {e}"))
    }
}

#[derive(Parser, Debug)]
#[command(name = "latglue", version, about = "Exact lattice gluing and proof-step verification")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Config file (default: ./latglue.toml when present).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    element_limit: Option<u64>,
    #[arg(long, global = true)]
    isomorphism_limit: Option<u64>,
    #[arg(long, global = true)]
    root_rank_limit: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice invariants and roots.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// Discriminant form of a lattice.
    Discr { lattice: String },
    /// Overlattice from an isotropic kernel, e.g. `--kernel "1,1,1"` or `"1,1,1,0;0,1,2,1"`.
    Extend {
        lattice: String,
        #[arg(long)]
        kernel: String,
    },
    /// Replay a proof-step verification.
    Verify { claim: Claim },
    /// Degree/genus case split.
    Cases {
        #[arg(long)]
        degree: u64,
        #[arg(long)]
        genus: u64,
    },
    /// Wronskian of a curve (`--curve "1, t, t^3"`) or analysis of a map (`--map "(p)/(q)"`).
    Wronskian {
        #[arg(long, conflicts_with = "map", required_unless_present = "map")]
        curve: Option<String>,
        #[arg(long)]
        map: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum LatticeAction {
    /// Rank, determinant, signature, parity and discriminant form.
    Info { lattice: String },
    /// All vectors of square −2 (negative definite lattices only).
    Roots { lattice: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Claim {
    Lemma31,
    Lemma32,
    Prop33,
    Theorem,
    All,
}

enum Failure {
    Usage(String),
    Input(Error),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

/// Runs one command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let cfg = match resolve_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    configure_threads();
    if cfg.verbosity > 0 {
        let _ = writeln!(err, "config: {}", serde_json::to_string(&cfg).expect("serializable"));
    }
    match dispatch(&cli.command, &cfg, out) {
        Ok(()) => 0,
        Err(Failure::Mismatch) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Resource(_) => 3,
                _ => 2,
            }
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            RunConfig::from_toml(&text)?
        }
        None if Path::new(DEFAULT_CONFIG).is_file() => {
            let text = std::fs::read_to_string(DEFAULT_CONFIG).map_err(|e| format!("cannot read {DEFAULT_CONFIG}: {e}"))?;
            RunConfig::from_toml(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(v) = cli.element_limit {
        cfg.element_limit = v;
    }
    if let Some(v) = cli.isomorphism_limit {
        cfg.isomorphism_limit = v;
    }
    if let Some(v) = cli.root_rank_limit {
        cfg.root_rank_limit = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    cfg.verbosity = cfg.verbosity.max(cli.verbose);
    cfg.validate()?;
    Ok(cfg)
}

fn configure_threads() {
    if let Some(n) = std::env::var("LATGLUE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // a second call in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn emit<T: Serialize + ?Sized>(out: &mut dyn Write, cfg: &RunConfig, text: &str, value: &T) -> Outcome {
    let s = match cfg.format {
        Format::Text => text.to_string(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(value).expect("serializable")),
    };
    out.write_all(s.as_bytes()).map_err(|e| Failure::Usage(format!("write failed: {e}")))
}

/// A file holding `{"label": .., "gram": [[..]]}`, or a lattice expression such as `8A2` or `K3`.
pub fn load_lattice(arg: &str) -> crate::Result<Lattice> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")));
    }
    parse_lattice_expr(arg)
}

/// `"1,1,1;0,1,2"` into coefficient rows.
pub fn parse_kernel(s: &str) -> crate::Result<Vec<Vec<i64>>> {
    s.split(';')
        .filter(|g| !g.trim().is_empty())
        .map(|g| {
            g.split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad kernel coefficient {c:?}"))))
                .collect()
        })
        .collect()
}

fn big_json(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    let limits = cfg.limits();
    match cmd {
        Command::Lattice { action: LatticeAction::Info { lattice } } => {
            let l = load_lattice(lattice)?;
            let (text, value) = lattice_info(&l)?;
            emit(out, cfg, &text, &value)
        }
        Command::Lattice { action: LatticeAction::Roots { lattice } } => {
            let l = load_lattice(lattice)?;
            let rs = roots(&l, &limits)?;
            let mut text = format!("roots: {}\n", rs.len());
            for r in &rs {
                text.push_str(&format!("{}\n", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")));
            }
            let list: Vec<Vec<Value>> = rs.iter().map(|r| r.iter().map(big_json).collect()).collect();
            emit(out, cfg, &text, &json!({ "lattice": l.label(), "count": rs.len(), "roots": list }))
        }
        Command::Discr { lattice } => {
            let l = load_lattice(lattice)?;
            let d = discr(&l)?;
            let f = &d.form;
            let factors: Vec<String> = f.invariant_factors().iter().map(|x| x.to_string()).collect();
            let text = format!("discriminant: {f}\norder: {}\ninvariant factors: [{}]\n", f.order(), factors.join(","));
            emit(out, cfg, &text, &json!({ "lattice": l.label(), "form": f, "order": big_json(&f.order()), "invariant_factors": factors }))
        }
        Command::Extend { lattice, kernel } => {
            let l = load_lattice(lattice)?;
            let d = discr(&l)?;
            let gens = parse_kernel(kernel)?
                .iter()
                .map(|c| d.form.element(c))
                .collect::<crate::Result<Vec<_>>>()?;
            let k = GluingKernel::new(d.form.clone(), gens)?;
            let ext = overlattice(&l, &k, &limits)?;
            let m = &ext.result;
            let mut text = format!(
                "base: {}\nkernel order: {}\nresult gram: {}\ndeterminant: {}\nsignature: {}\neven: {}\ndeterminant law: {}\ndiscriminant matches perp quotient: {}\n",
                l.label(),
                ext.index(),
                m.gram(),
                m.determinant(),
                m.signature(),
                m.is_even(),
                ext.determinant_law,
                ext.discriminant_matches.map_or("unknown".to_string(), |b| b.to_string()),
            );
            let mut value = json!({
                "base": l.label(),
                "kernel_order": ext.index(),
                "gram": m.gram().to_i64(),
                "determinant": big_json(&m.determinant()),
                "signature": m.signature().to_string(),
                "even": m.is_even(),
                "determinant_law": ext.determinant_law,
                "discriminant_matches": ext.discriminant_matches,
            });
            if l.is_negative_definite() && l.rank() <= limits.root_rank_limit {
                let qp = is_quasi_primitive(&l, &ext, &limits)?;
                text.push_str(&format!(
                    "roots: {} -> {}\nquasi-primitive: {}\n",
                    qp.base_roots, qp.extension_roots, qp.quasi_primitive
                ));
                value["quasi_primitivity"] = serde_json::to_value(&qp).expect("serializable");
            }
            emit(out, cfg, &text, &value)?;
            if !ext.determinant_law || ext.discriminant_matches == Some(false) {
                return Err(Failure::Mismatch);
            }
            Ok(())
        }
        Command::Verify { claim } => {
            let reports = match claim {
                Claim::Lemma31 => vec![verify_lemma_3_1_with(&limits)],
                Claim::Lemma32 => vec![verify_lemma_3_2_with(&limits)],
                Claim::Prop33 => vec![verify_prop_3_3_with(&limits, cfg.seed)],
                Claim::Theorem => {
                    let all = verify_all(&limits, cfg.seed);
                    vec![verify_final_theorem_from(&all[0], &all[1], &all[2])]
                }
                Claim::All => verify_all(&limits, cfg.seed),
            };
            let text: String = reports.iter().map(VerificationReport::render_text).collect();
            if *claim == Claim::All {
                emit(out, cfg, &text, &reports)?;
            } else {
                emit(out, cfg, &text, &reports[0])?;
            }
            if reports.iter().any(|r| r.status == Status::Refuted) {
                Err(Failure::Mismatch)
            } else if reports.iter().any(|r| r.status == Status::Partial) {
                Err(Failure::Input(Error::Resource("verification incomplete under the configured bounds".into())))
            } else {
                Ok(())
            }
        }
        Command::Cases { degree, genus } => {
            let cases = case_analysis(*degree, *genus)?;
            let text: String = cases.iter().map(|c| format!("{c}\n")).collect();
            emit(out, cfg, &text, &cases)
        }
        Command::Wronskian { curve: Some(curve), .. } => {
            let polys = curve.split(',').map(Poly::parse).collect::<crate::Result<Vec<_>>>()?;
            let w = wronskian(&polys)?;
            let all_real = flattening_points_all_real(&polys)?;
            let text = format!("wronskian: {w}\nflattening points all real: {all_real}\n");
            emit(out, cfg, &text, &json!({ "wronskian": w.to_string(), "flattening_points_all_real": all_real }))
        }
        Command::Wronskian { map: Some(map), .. } => {
            let f = RationalMap::parse(map)?;
            let crit = critical_polynomial(&f)?;
            let reality = all_critical_points_real(&f)?;
            let generic = critical_genericity(&f)?;
            let phi = mobius_realifiable(&f)?;
            let image = diagonal_image_bidegree(&f)?;
            let text = format!(
                "map: {f}\ndegree: {}\ncritical polynomial: {crit}\ncritical points real: {}{}\ngenericity: {}\nrealifiable: {}\ndelta: {}\n",
                f.degree(),
                reality.all_real,
                if reality.flagged { " (computed on the real part gcd(P, conj P))" } else { "" },
                serde_json::to_value(generic).expect("serializable").as_str().unwrap_or_default(),
                phi.as_ref().map_or("no".to_string(), |p| p.to_string()),
                image.delta,
            );
            let value = json!({
                "map": f.to_string(),
                "degree": f.degree(),
                "critical_polynomial": crit.to_string(),
                "critical_points": reality,
                "genericity": generic,
                "realifiable": phi.as_ref().map(|p| p.to_string()),
                "image": image,
            });
            emit(out, cfg, &text, &value)
        }
        Command::Wronskian { .. } => Err(Failure::Usage("wronskian needs --curve or --map".into())),
    }
}

fn lattice_info(l: &Lattice) -> crate::Result<(String, Value)> {
    let det = l.determinant();
    let sig = l.signature();
    let form = if l.is_nondegenerate() { Some(discr(l)?.form) } else { None };
    let form_text = match &form {
        Some(f) if f.order() == BigInt::from(1) => "trivial".to_string(),
        Some(f) => f.to_string(),
        None => "undefined (degenerate)".to_string(),
    };
    let text = format!(
        "lattice: {}\nrank: {}\ndeterminant: {det}\nsignature: {sig}\neven: {}\nunimodular: {}\ndiscriminant: {form_text}\n",
        l.label(),
        l.rank(),
        l.is_even(),
        l.is_unimodular(),
    );
    let q: Option<Vec<String>> = form.as_ref().and_then(|f| f.quadratic_values().map(|q| q.iter().map(fmt_rat).collect()));
    let value = json!({
        "lattice": l.label(),
        "rank": l.rank(),
        "determinant": big_json(&det),
        "signature": sig.to_string(),
        "even": l.is_even(),
        "unimodular": l.is_unimodular(),
        "discriminant": form_text,
        "discriminant_orders": form.as_ref().map(|f| f.orders().to_vec()),
        "discriminant_q": q,
    });
    Ok((text, value))
}
