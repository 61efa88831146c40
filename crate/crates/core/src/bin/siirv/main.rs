use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use siirv::calibration::Calibration;
use siirv::cover::{cover_siirv, verify_cover, CoverConfig, VerifyReport};
use siirv::dist::{
    binomial_model, cosine_pbds, exact_pmf, parity_3siirvs, random_model, scaled_binomial_model,
    tv_distance, KSiirv,
};
use siirv::hypothesis::PreparedSampler;
use siirv::io;
use siirv::learn::{Branch, LearnConfig, LearnReport};
use siirv::rng::{stream, RngBits};
use siirv::run::{run_algorithm, Algorithm};
use siirv::source::{ModelSource, Replay, SampleSource};
use siirv::{Error, Result};

/// Learn, sample, evaluate and cover sums of independent integer random variables.
#[derive(Parser)]
#[command(name = "siirv", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a model file.
    Gen(GenArgs),
    /// Learn a hypothesis from a model (sampled internally) or a sample file.
    Learn(LearnArgs),
    /// Repeat `learn` over a list of epsilons and write one CSV row per trial.
    Sweep(SweepArgs),
    /// Draw from a hypothesis with the binary-search sampler.
    Sample(SampleArgs),
    /// Print pmf and cdf of a hypothesis at given points, as CSV.
    Eval(EvalArgs),
    /// Build (and optionally verify) a proper cover of N-discrete k-SIIRVs.
    Cover(CoverArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Random,
    Binomial,
    ScaledBinomial,
    /// Two Bernoulli sums of order k+1 sharing k moments.
    Cosine,
    /// Even and odd halves of Binomial(n, 1/2) as 3-SIIRVs.
    Parity,
}

#[derive(Clone, Copy, ValueEnum)]
enum Member {
    A,
    B,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Multiplier for scaled-binomial.
    #[arg(long, default_value_t = 3)]
    scale: usize,
    /// Which model of a pair family to write.
    #[arg(long, value_enum, default_value = "a")]
    member: Member,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Input {
    /// Model file; samples are drawn from it with --seed.
    #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
    model: Option<PathBuf>,
    /// Sample file, one integer per line.
    #[arg(long)]
    samples: Option<PathBuf>,
}

#[derive(Args)]
struct LearnArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value = "fourier")]
    algo: Algorithm,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to the model's k; required with --samples.
    #[arg(long)]
    k: Option<usize>,
    /// Hypothesis JSON; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run report JSON; stderr if omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "fourier")]
    algo: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    hypothesis: PathBuf,
    #[arg(long)]
    count: usize,
    /// Sampler accuracy; sets the bits per draw.
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    hypothesis: PathBuf,
    /// Points to evaluate; defaults to the whole window.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    at: Vec<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CoverArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    eps: f64,
    /// Grid resolution: probabilities are multiples of 1/N.
    #[arg(long = "N")]
    grid_n: usize,
    /// Check every N-discrete model against the cover.
    #[arg(long)]
    verify: bool,
    /// Use the asymptotic descriptor parameters instead of the desk defaults.
    #[arg(long)]
    asymptotic: bool,
    /// Abort when the projected state count exceeds this.
    #[arg(long)]
    budget: Option<f64>,
    /// Descriptor rounding grid.
    #[arg(long)]
    delta: Option<f64>,
    /// Near-root count at which an arc is treated as small.
    #[arg(long)]
    m: Option<usize>,
    /// Taylor order of the far-root factor.
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Size/verification report JSON; stderr if omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunConfig<'a> {
    input: String,
    #[serde(flatten)]
    learn: &'a LearnConfig,
}

#[derive(Serialize)]
struct RunReport<'a> {
    algorithm: Algorithm,
    config: RunConfig<'a>,
    branch: Branch,
    n_samples: usize,
    seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tv: Option<f64>,
    seed: u64,
    learner: &'a LearnReport,
}

#[derive(Serialize)]
struct CoverReport {
    cover_size: usize,
    grid_size: usize,
    layer_sizes: Vec<usize>,
    projected_states: f64,
    config: CoverConfig,
    seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<VerifyReport>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Learn(a) => learn(a),
        Cmd::Sweep(a) => sweep(a),
        Cmd::Sample(a) => sample(a),
        Cmd::Eval(a) => eval(a),
        Cmd::Cover(a) => cover(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn write_report(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => io::write_output(Some(p), text),
        None => {
            eprintln!("{text}");
            Ok(())
        }
    }
}

fn gen(a: GenArgs) -> Result<()> {
    let pick = |(x, y): (KSiirv, KSiirv)| match a.member {
        Member::A => x,
        Member::B => y,
    };
    let model = match a.family {
        Family::Random => {
            if a.k < 2 || a.n == 0 {
                return Err(Error::InvalidArgument(
                    "random models need k >= 2 and n >= 1".into(),
                ));
            }
            random_model(a.k, a.n, &mut stream(a.seed, 0))
        }
        Family::Binomial => binomial_model(a.n, a.p)?,
        Family::ScaledBinomial => scaled_binomial_model(a.n, a.p, a.scale)?,
        Family::Cosine => pick(cosine_pbds(a.k)?),
        Family::Parity => {
            let (_, _, even, odd) = parity_3siirvs(a.n)?;
            pick((even, odd))
        }
    };
    io::write_output(a.out.as_deref(), &io::to_json(&model)?)
}

fn learn(a: LearnArgs) -> Result<()> {
    let cal = Calibration::from_env()?;
    let model = a.input.model.as_deref().map(io::read_model).transpose()?;
    let k = match (a.k, &model) {
        (Some(k), _) => k,
        (None, Some(m)) => m.k(),
        (None, None) => {
            return Err(Error::InvalidArgument(
                "--k is required with --samples".into(),
            ))
        }
    };
    let config = LearnConfig::with_calibration(a.eps, k, a.seed, cal);
    let start = Instant::now();
    let (outcome, input) = match (&model, &a.input.samples) {
        (Some(m), _) => {
            let mut src = ModelSource::new(m.clone(), stream(a.seed, 0));
            (
                run_algorithm(a.algo, &mut src, &config, None)?,
                a.input.model.as_ref().unwrap().display().to_string(),
            )
        }
        (None, Some(path)) => {
            let samples = io::read_samples(path)?;
            let n = samples.len();
            let mut src = Replay::new(samples);
            (
                run_algorithm(a.algo, &mut src, &config, Some(n))?,
                path.display().to_string(),
            )
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let seconds = start.elapsed().as_secs_f64();
    let tv = model
        .as_ref()
        .map(|m| tv_distance(&exact_pmf(m), &outcome.hypothesis.to_pmf()));
    let report = RunReport {
        algorithm: a.algo,
        config: RunConfig {
            input,
            learn: &config,
        },
        branch: outcome.report.branch,
        n_samples: outcome.report.n_samples,
        seconds,
        tv,
        seed: a.seed,
        learner: &outcome.report,
    };
    io::write_output(a.out.as_deref(), &io::to_json(&outcome.hypothesis)?)?;
    write_report(a.report.as_deref(), &io::to_json(&report)?)
}

struct Row {
    algo: Algorithm,
    eps_idx: usize,
    eps: f64,
    trial: usize,
    n_samples: usize,
    tv: f64,
    seconds: f64,
}

fn sweep(a: SweepArgs) -> Result<()> {
    let cal = Calibration::from_env()?;
    let model = io::read_model(&a.model)?;
    let truth = exact_pmf(&model);
    let jobs: Vec<(Algorithm, usize, f64, usize)> = a
        .algo
        .iter()
        .flat_map(|&algo| a.eps.iter().enumerate().map(move |(i, &e)| (algo, i, e)))
        .flat_map(|(algo, i, e)| (0..a.trials).map(move |t| (algo, i, e, t)))
        .collect();
    let mut rows = jobs
        .into_par_iter()
        .map(|(algo, eps_idx, eps, trial)| {
            // one stream per (eps, trial); algorithms share streams so they see the same draws
            let sid = ((eps_idx as u64) << 32) | trial as u64;
            let config = LearnConfig::with_calibration(eps, model.k(), a.seed, cal.clone());
            let mut src = ModelSource::new(model.clone(), stream(a.seed, sid));
            let start = Instant::now();
            let out = run_algorithm(algo, &mut src as &mut dyn SampleSource, &config, None)?;
            let seconds = start.elapsed().as_secs_f64();
            let tv = tv_distance(&truth, &out.hypothesis.to_pmf());
            Ok(Row {
                algo,
                eps_idx,
                eps,
                trial,
                n_samples: out.report.n_samples,
                tv,
                seconds,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.algo, r.eps_idx, r.trial));
    let mut csv = String::from("algo,eps,n_samples,trial,tv,seconds\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{:.6}\n",
            r.algo, r.eps, r.n_samples, r.trial, r.tv, r.seconds
        ));
    }
    io::write_output(a.out.as_deref(), &csv)
}

fn sample(a: SampleArgs) -> Result<()> {
    if !(a.eps > 0.0 && a.eps < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must lie in (0,1), got {}",
            a.eps
        )));
    }
    let h = io::read_hypothesis(&a.hypothesis)?;
    let sampler = PreparedSampler::new(&h, a.eps);
    let mut bits = RngBits::new(stream(a.seed, 0));
    let draws: Vec<i64> = (0..a.count).map(|_| sampler.sample(&mut bits)).collect();
    io::write_output(a.out.as_deref(), &io::format_samples(&draws))
}

fn eval(a: EvalArgs) -> Result<()> {
    let h = io::read_hypothesis(&a.hypothesis)?;
    let points: Vec<i64> = if a.at.is_empty() {
        let (lo, hi) = h.window();
        (lo..=hi).collect()
    } else {
        a.at
    };
    let mut csv = String::from("x,pmf,cdf\n");
    for x in points {
        csv.push_str(&format!("{x},{},{}\n", h.evaluate(x), h.cdf(x)));
    }
    io::write_output(a.out.as_deref(), &csv)
}

fn cover(a: CoverArgs) -> Result<()> {
    let mut cfg = if a.asymptotic {
        CoverConfig::asymptotic(a.n, a.k, a.eps, a.grid_n)
    } else {
        CoverConfig::desk(a.n, a.k, a.eps, a.grid_n)
    };
    cfg.budget = a.budget.unwrap_or(cfg.budget);
    cfg.delta = a.delta.unwrap_or(cfg.delta);
    cfg.m = a.m.unwrap_or(cfg.m);
    cfg.ell = a.ell.unwrap_or(cfg.ell);
    let start = Instant::now();
    let outcome = cover_siirv(&cfg)?;
    let verification = if a.verify {
        Some(verify_cover(&outcome.models, &cfg)?)
    } else {
        None
    };
    let report = CoverReport {
        cover_size: outcome.models.len(),
        grid_size: outcome.grid_size,
        layer_sizes: outcome.layer_sizes.clone(),
        projected_states: outcome.projected_states,
        config: cfg,
        seconds: start.elapsed().as_secs_f64(),
        verification,
    };
    io::write_output(a.out.as_deref(), &io::to_json(&outcome.models)?)?;
    write_report(a.report.as_deref(), &io::to_json(&report)?)
}
