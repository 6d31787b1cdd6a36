//! Command-line front end: argument parsing, command dispatch and reports.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cocycle::{
    build_w, check_pair_cocycle, check_pentagon, check_pentagonal_cocycle, cochain_to_theta, kac_cochain_to_pair,
    pentagonal_coboundary, PentagonalCocycle,
};
use crate::gamma::{ComplexBuilder, ComplexError, ComplexKind};
use crate::homology::oracle::confirm;
use crate::homology::{cohomology, frac, AbelianGroupInfo, Cochain, Coefficients, HomologyError, InducedMap};
use crate::io::{self, InputError, PairCocycleFile, Report, ThetaFile, Verdict};
use crate::matched_pair::MatchedPair;
use crate::sequence::{kac_sequence, SequenceError};

pub const DEFAULT_BUDGET: u64 = 50_000;
pub const DEFAULT_MAX_DEGREE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// check the matched pair and the square bijections
    Validate,
    /// one cohomology group of one complex
    Cohomology,
    /// the Kac exact sequence with exactness at every node
    Sequence,
    /// the group of extensions from three complexes, with representative cocycles
    Extensions,
    /// the pentagon equation for the operator built from θ
    Pentagon,
    /// cohomology of kac_C, pentagonal_E and mapping_cone_M side by side
    Isocheck,
    /// differentials as Matrix Market files
    Export,
}

/// Run configuration, also recorded in the report.
#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "kaccoh", version, about = "Exact cohomology of matched pairs of finite groups")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// matched-pair JSON file
    pub input: PathBuf,
    /// Z, Zm:m or T
    #[arg(long)]
    pub coeff: Option<Coefficients>,
    /// cohomological degree (cohomology) or top degree (isocheck, export)
    #[arg(long)]
    pub degree: Option<usize>,
    /// last degree of the Kac sequence
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
    pub through: usize,
    /// complex kind: bar_G, bar_G1, bar_G2, big_total_D, kac_C, pentagonal_E, mapping_cone_M, pair_K
    #[arg(long)]
    pub complex: Option<ComplexKind>,
    /// θ file for the pentagon command
    #[arg(long)]
    pub theta: Option<PathBuf>,
    /// output directory for export
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// largest basis allowed for a single grid block
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// seed for randomized checks (pentagon)
    #[arg(long)]
    pub seed: Option<u64>,
    /// write the JSON report here
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// also print representative cocycles (cohomology)
    #[arg(long)]
    pub representatives: bool,
    /// reconfirm group values with the modular elimination oracle
    #[arg(long)]
    pub oracle: bool,
}

impl RunConfig {
    /// Parses command-line words (the first is the program name), reporting usage errors as text.
    pub fn from_args<I: IntoIterator<Item = String>>(args: I) -> Result<Self, String> {
        RunConfig::try_parse_from(args).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(ComplexError),
    #[error("{0}")]
    Compute(String),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) | RunError::Config(_) => 2,
            RunError::Budget(_) => 3,
            RunError::Compute(_) | RunError::Output { .. } => 1,
        }
    }
}

impl From<ComplexError> for RunError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::BudgetExceeded { .. } => RunError::Budget(e),
            _ => RunError::Compute(e.to_string()),
        }
    }
}

impl From<HomologyError> for RunError {
    fn from(e: HomologyError) -> Self {
        RunError::Compute(e.to_string())
    }
}

impl From<SequenceError> for RunError {
    fn from(e: SequenceError) -> Self {
        match e {
            SequenceError::Complex(c) => c.into(),
            other => RunError::Compute(other.to_string()),
        }
    }
}

fn compute<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Compute(e.to_string())
}

/// Report plus the human-readable rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub text: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.report.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 4,
        }
    }
}

/// `{"degree": n, "coeff": "T", "free_rank": .., "torus_rank": .., "torsion": [..]}`.
pub fn group_entry(degree: i32, coeff: Coefficients, info: &AbelianGroupInfo) -> Value {
    json!({
        "degree": degree,
        "coeff": coeff.to_string(),
        "free_rank": info.free_rank,
        "torus_rank": info.torus_rank,
        "torsion": info.torsion,
    })
}

fn cochain_strings(c: &Cochain) -> Vec<String> {
    match c {
        Cochain::Integer(v) => v.iter().map(BigInt::to_string).collect(),
        Cochain::Residue { values, .. } => values.iter().map(u64::to_string).collect(),
        Cochain::Torus(v) => v.iter().map(io::format_rational).collect(),
    }
}

fn matrix_strings(m: &InducedMap) -> Vec<Vec<String>> {
    m.matrix.iter().map(|r| r.iter().map(BigInt::to_string).collect()).collect()
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Reads the input, runs the command, and writes the JSON report if requested.
pub fn run(config: &RunConfig) -> Result<Outcome, RunError> {
    let start = Instant::now();
    let (mp, bytes) = io::load_pair(&config.input)?;
    let (verdict, payload, text) = match config.command {
        Command::Validate => validate(&mp),
        Command::Cohomology => run_cohomology(&mp, config)?,
        Command::Sequence => run_sequence(&mp, config)?,
        Command::Extensions => extensions(&mp, config)?,
        Command::Pentagon => pentagon(&mp, config)?,
        Command::Isocheck => isocheck(&mp, config)?,
        Command::Export => export(&mp, config)?,
    };
    let mut cfg = serde_json::to_value(config).expect("config serializes");
    // where the report goes does not affect what it says
    cfg.as_object_mut().expect("object").remove("json");
    let report = Report {
        tool: "kaccoh",
        version: env!("CARGO_PKG_VERSION"),
        command: serde_json::to_value(config.command).expect("command").as_str().unwrap_or_default().to_string(),
        input_digest: io::digest(&bytes),
        config: cfg,
        verdict,
        payload,
        timing_ms: start.elapsed().as_millis(),
    };
    if let Some(path) = &config.json {
        std::fs::write(path, report.to_json() + "\n")
            .map_err(|e| RunError::Output { path: path.display().to_string(), message: e.to_string() })?;
    }
    let text = format!("{text}verdict: {}\n", pass(verdict == Verdict::Pass));
    Ok(Outcome { report, text })
}

type Ran = (Verdict, Value, String);

fn validate(mp: &MatchedPair) -> Ran {
    let squares = mp.check_square_bijections();
    let ok = squares.is_ok();
    let payload = json!({
        "order": mp.order(),
        "abelian": mp.group().is_abelian(),
        "G1": mp.g1().elements(),
        "G2": mp.g2().elements(),
        "square_bijections": pass(ok),
        "failure": squares.err(),
    });
    let text = format!(
        "matched pair of order {} = {}·{}\nsquare bijections: {}\n",
        mp.order(),
        mp.g1().len(),
        mp.g2().len(),
        pass(ok)
    );
    (Verdict::from_bool(ok), payload, text)
}

fn run_cohomology(mp: &MatchedPair, config: &RunConfig) -> Result<Ran, RunError> {
    let kind = config.complex.unwrap_or(ComplexKind::KacC);
    let coeff = config.coeff.unwrap_or(Coefficients::Torus);
    let n = config.degree.unwrap_or(2);
    let c = ComplexBuilder::with_budget(mp, config.budget).build(kind, n.max(1))?;
    let h = cohomology(&c, n as i32, coeff)?;
    let mut entry = group_entry(n as i32, coeff, &h.info);
    let mut text = format!("H^{n}({kind}; {coeff}) = {}\n", h.info);
    let mut ok = true;
    if config.representatives {
        let reps: Vec<Vec<String>> = h.generators().iter().map(cochain_strings).collect();
        text += &format!("{} representative cocycles\n", reps.len());
        entry["representatives"] = json!(reps);
        if coeff == Coefficients::Torus {
            let dirs: Vec<Vec<String>> = h.torus_directions().iter().map(|v| v.iter().map(BigInt::to_string).collect()).collect();
            entry["torus_directions"] = json!(dirs);
        }
    }
    if config.oracle {
        let (o, agree) = confirm(&c, n as i32, coeff, &h.info, mp.order() as u64)?;
        ok &= agree;
        text += &format!("oracle: {}\n", pass(agree));
        entry["oracle"] = json!({"agrees": agree, "group": o});
    }
    let payload = json!({"complex": kind, "group": entry});
    Ok((Verdict::from_bool(ok), payload, text))
}

fn run_sequence(mp: &MatchedPair, config: &RunConfig) -> Result<Ran, RunError> {
    let coeff = config.coeff.unwrap_or(Coefficients::Torus);
    let s = kac_sequence(mp, coeff, config.through, config.budget)?;
    let mut ok = s.is_exact();
    let mut nodes = Vec::new();
    let mut text = String::new();
    for (k, node) in s.nodes.iter().enumerate() {
        let mut e = group_entry(node.degree, coeff, &node.info);
        e["label"] = json!(node.label);
        let ex = s.exactness.iter().find(|x| x.node == k);
        if let Some(x) = ex {
            e["exact"] = json!(pass(x.exact));
            if let Some(w) = &x.witness {
                e["witness"] = json!(w);
            }
        }
        let mut line = format!("{:<22} {:<16}", node.label, node.info.to_string());
        if let Some(x) = ex {
            line += &format!(" exact {}", pass(x.exact));
        }
        if config.oracle && k > 0 {
            let (o, agree) = confirm(s.complex(node.kind), node.degree, coeff, &node.info, mp.order() as u64)?;
            ok &= agree;
            e["oracle"] = json!({"agrees": agree, "group": o});
            line += &format!(" oracle {}", pass(agree));
        }
        text += &line;
        text.push('\n');
        nodes.push(e);
    }
    let maps: Vec<Value> = s.maps.iter().map(|m| json!(matrix_strings(m))).collect();
    let payload = json!({"coeff": coeff.to_string(), "through": config.through, "nodes": nodes, "maps": maps, "exact": s.is_exact()});
    Ok((Verdict::from_bool(ok), payload, text))
}

fn extensions(mp: &MatchedPair, config: &RunConfig) -> Result<Ran, RunError> {
    let coeff = Coefficients::Torus;
    let mut builder = ComplexBuilder::with_budget(mp, config.budget);
    let mut groups = Vec::new();
    let mut text = String::new();
    let mut hs = Vec::new();
    for kind in [ComplexKind::KacC, ComplexKind::MappingConeM, ComplexKind::PentagonalE] {
        let c = builder.build(kind, 2)?;
        let h = cohomology(&c, 2, coeff)?;
        text += &format!("H^2({kind}; T) = {}\n", h.info);
        groups.push(json!({"complex": kind, "group": group_entry(2, coeff, &h.info)}));
        hs.push(h);
    }
    let agree = hs.iter().all(|h| h.info == hs[0].info);
    text += &format!("three-pipeline agreement: {}\n", pass(agree));

    let mut reps_ok = true;
    let mut pairs = Vec::new();
    for g in hs[0].generators() {
        let Cochain::Torus(v) = g else { unreachable!("torus coefficients") };
        let pair = kac_cochain_to_pair(mp, coeff, &v).map_err(compute)?;
        let violations = check_pair_cocycle(mp, &pair).map_err(compute)?;
        reps_ok &= violations.is_empty();
        pairs.push(json!({"cocycle": PairCocycleFile::from_pair(&pair), "check": pass(violations.is_empty())}));
    }
    let mut thetas = Vec::new();
    for g in hs[2].generators() {
        let Cochain::Torus(v) = g else { unreachable!("torus coefficients") };
        let theta = cochain_to_theta(mp, coeff, &v).map_err(compute)?;
        let cocycle = check_pentagonal_cocycle(mp, &theta).map_err(compute)?.is_empty();
        let pent = check_pentagon(&build_w(mp, &theta).map_err(compute)?).map_err(compute)?;
        reps_ok &= cocycle && pent;
        thetas.push(json!({"cocycle": ThetaFile::from_theta(&theta), "check": pass(cocycle), "pentagon": pass(pent)}));
    }
    text += &format!("{} representative pairs (U,V), {} representative θ: {}\n", pairs.len(), thetas.len(), pass(reps_ok));
    let payload = json!({
        "extensions": group_entry(2, coeff, &hs[0].info),
        "pipelines": groups,
        "agreement": pass(agree),
        "representatives": pairs,
        "pentagonal_representatives": thetas,
    });
    Ok((Verdict::from_bool(agree && reps_ok), payload, text))
}

/// Random `𝕋` values with denominators up to `den`.
fn random_values(rng: &mut ChaCha8Rng, n: usize, den: i64) -> Vec<BigRational> {
    (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=den);
            frac(&BigRational::new(rng.gen_range(0..d).into(), d.into()))
        })
        .collect()
}

fn pentagon(mp: &MatchedPair, config: &RunConfig) -> Result<Ran, RunError> {
    let theta = match &config.theta {
        Some(path) => io::load_theta(path, mp)?,
        None => PentagonalCocycle::zero(mp, config.coeff.unwrap_or(Coefficients::Torus)),
    };
    if theta.coeff != Coefficients::Torus {
        return Err(RunError::Config(format!("the pentagon needs T-valued θ, got {}", theta.coeff)));
    }
    let violations = check_pentagonal_cocycle(mp, &theta).map_err(compute)?;
    let pent = check_pentagon(&build_w(mp, &theta).map_err(compute)?).map_err(compute)?;
    let mut text = format!("θ cocycle: {}\npentagon: {}\n", pass(violations.is_empty()), pass(pent));
    let mut payload = json!({
        "cocycle": pass(violations.is_empty()),
        "violations": violations.len(),
        "pentagon": pass(pent),
    });
    let mut ok = pent;
    if let Some(seed) = config.seed {
        // cocycle ⇔ pentagon on seeded coboundaries and perturbations
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut agree = 0;
        let trials = 20;
        for k in 0..trials {
            let a = random_values(&mut rng, mp.order(), 12);
            let mut t = pentagonal_coboundary(mp, Coefficients::Torus, &a).map_err(compute)?;
            if k % 2 == 1 {
                let i = rng.gen_range(0..t.theta.values.len());
                let d = rng.gen_range(2..=7i64);
                t.theta.values[i] = frac(&(&t.theta.values[i] + BigRational::new(1.into(), d.into())));
            }
            let c = check_pentagonal_cocycle(mp, &t).map_err(compute)?.is_empty();
            let p = check_pentagon(&build_w(mp, &t).map_err(compute)?).map_err(compute)?;
            agree += usize::from(c == p);
        }
        ok &= agree == trials;
        text += &format!("seeded bridge: {agree}/{trials} agree\n");
        payload["bridge"] = json!({"seed": seed, "trials": trials, "agree": agree});
    }
    Ok((Verdict::from_bool(ok), payload, text))
}

fn isocheck(mp: &MatchedPair, config: &RunConfig) -> Result<Ran, RunError> {
    let coeff = config.coeff.unwrap_or(Coefficients::Torus);
    let top = config.degree.unwrap_or(DEFAULT_MAX_DEGREE);
    if top < 1 {
        return Err(RunError::Config("degree must be at least 1".into()));
    }
    let kinds = [ComplexKind::KacC, ComplexKind::PentagonalE, ComplexKind::MappingConeM];
    let mut builder = ComplexBuilder::with_budget(mp, config.budget);
    let complexes = kinds.iter().map(|&k| builder.build(k, top)).collect::<Result<Vec<_>, _>>()?;
    let mut ok = true;
    let mut rows = Vec::new();
    let mut text = String::new();
    for n in 0..=top as i32 {
        let infos = complexes.iter().map(|c| cohomology(c, n, coeff).map(|h| h.info)).collect::<Result<Vec<_>, _>>()?;
        let same = infos.iter().all(|i| *i == infos[0]);
        ok &= same;
        text += &format!("H^{n}: {} {}\n", infos.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | "), pass(same));
        let entries: Vec<Value> =
            kinds.iter().zip(&infos).map(|(k, i)| json!({"complex": k, "group": group_entry(n, coeff, i)})).collect();
        rows.push(json!({"degree": n, "groups": entries, "agree": pass(same)}));
    }
    Ok((Verdict::from_bool(ok), json!({"coeff": coeff.to_string(), "degrees": rows}), text))
}

fn export(mp: &MatchedPair, config: &RunConfig) -> Result<Ran, RunError> {
    let dir = config.out.as_ref().ok_or_else(|| RunError::Config("export needs --out".into()))?;
    let top = config.degree.unwrap_or(DEFAULT_MAX_DEGREE);
    if top < 1 {
        return Err(RunError::Config("degree must be at least 1".into()));
    }
    let out_err = |p: &std::path::Path, e: std::io::Error| RunError::Output { path: p.display().to_string(), message: e.to_string() };
    std::fs::create_dir_all(dir).map_err(|e| out_err(dir, e))?;
    let kinds: Vec<ComplexKind> = match config.complex {
        Some(k) => vec![k],
        None => ComplexKind::ALL.to_vec(),
    };
    let mut builder = ComplexBuilder::with_budget(mp, config.budget);
    let mut files = Vec::new();
    for kind in kinds {
        let c = builder.build(kind, top)?;
        for n in c.n_min()..c.n_max() {
            let Some(d) = c.differential(n) else { continue };
            let name = format!("{kind}_d{n}.mtx");
            let path = dir.join(&name);
            let mut buf = Vec::new();
            io::write_mtx(d, &mut buf).map_err(|e| out_err(&path, e))?;
            std::fs::write(&path, buf).map_err(|e| out_err(&path, e))?;
            files.push(json!({"file": name, "complex": kind, "degree": n, "rows": d.rows(), "cols": d.cols(), "nnz": d.nnz()}));
        }
    }
    let manifest = json!({"files": files});
    let path = dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).expect("manifest") + "\n").map_err(|e| out_err(&path, e))?;
    let text = format!("wrote {} matrices to {}\n", files.len(), dir.display());
    Ok((Verdict::Pass, manifest, text))
}
