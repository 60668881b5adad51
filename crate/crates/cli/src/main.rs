//! weylab command-line interface: build model spectra, run measurability
//! analyses, convert between counting and sequence form, drive the matrix
//! harness, print Weyl-law constants, and run the property suites.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use weylab::asymptotics::{self, DyadicGrid, RateHint, WindowPlan};
use weylab::checks::{self, Suite, Tier};
use weylab::counting::{self, CountingFunction, CountingModel};
use weylab::models::ModelSpec;
use weylab::spectra::{self, SpectralPart, SpectralSequence};
use weylab::RegVarFunction;

#[derive(Parser)]
#[command(
    name = "weylab",
    about = "numerical laboratory for spectral asymptotics on weak Lorentz ideals",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the measurability pipeline on a model or spectrum CSV
    Analyze(AnalyzeArgs),
    /// Materialize a model spectrum as CSV
    Model(ModelArgs),
    /// Convert between counting functions and sequences
    Convert(ConvertArgs),
    /// Run seeded (S, T, S+T) matrix triples through every exact inequality
    Harness(HarnessArgs),
    /// Print closed-form Weyl-law constants
    Constants(ConstantsArgs),
    /// Run a property suite and emit machine-readable results
    Check(CheckArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// model spec, e.g. generator:power-log:-1,0,1048576 or zeta-rvm:1000000
    #[arg(long, conflicts_with = "input")]
    model: Option<String>,
    /// spectrum CSV path (as written by `model`)
    #[arg(long)]
    input: Option<PathBuf>,
    /// weight function spec, e.g. power-log:-1,1
    #[arg(long, default_value = "power-log:-1,0")]
    g: String,
    /// largest prefix length to scan (defaults to the full prefix)
    #[arg(long)]
    max_n: Option<usize>,
    /// trailing windows forming the band
    #[arg(long, default_value_t = 4)]
    windows: usize,
    /// decay-rate hint: power, log, or log2
    #[arg(long, default_value = "log")]
    rate: String,
    /// convergence tolerance override
    #[arg(long)]
    tol: Option<f64>,
    /// write the report JSON here (stdout if omitted)
    #[arg(long)]
    json: Option<PathBuf>,
    /// write the window curves as CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    /// model spec (zeta-rvm:<M>, zeta-file:<path>,<M>, podles:<q>,<lmax>,
    /// planted:<c>,<rho>,<q>,<M>,<pert>, generator:<gspec>,<M>)
    spec: String,
    /// output CSV path
    #[arg(long)]
    out: PathBuf,
    /// cap on the number of rows written
    #[arg(long)]
    max_rows: Option<usize>,
}

#[derive(Args)]
struct ConvertArgs {
    /// counting model spec (rvm or smalllam:<c>,<p>,<q>) to invert
    #[arg(long, conflicts_with = "input")]
    counting: Option<String>,
    /// sequence CSV to turn into counting evaluations
    #[arg(long)]
    input: Option<PathBuf>,
    /// number of sequence entries to produce (with --counting)
    #[arg(long, default_value_t = 1024)]
    count: usize,
    /// lambda grid `start,factor,points` for counting evaluations
    #[arg(long, default_value = "0.5,0.5,32")]
    lambda_grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HarnessArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// number of consecutive seeds to run
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    /// matrix order
    #[arg(long, default_value_t = 64)]
    size: usize,
    #[arg(long)]
    json: Option<PathBuf>,
    /// dump failing (S, T) pairs as binary matrices into this directory
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Args)]
struct ConstantsArgs {
    /// constant family: simon or cusp
    family: String,
    #[arg(long)]
    n: u32,
    /// alpha parameter (simon only); use `inf` for the limiting form
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "small")]
    tier: String,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Model(a) => model(a),
        Command::Convert(a) => convert(a),
        Command::Harness(a) => harness(a),
        Command::Constants(a) => constants(a),
        Command::Check(a) => check(a),
    }
}

fn load_sequence(model: &Option<String>, input: &Option<PathBuf>) -> anyhow::Result<SpectralSequence> {
    match (model, input) {
        (Some(spec), None) => Ok(ModelSpec::parse(spec)?.build()?),
        (None, Some(path)) => {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            Ok(spectra::read_csv(BufReader::new(file))?)
        }
        _ => bail!("exactly one of --model and --input is required"),
    }
}

fn analyze(a: AnalyzeArgs) -> anyhow::Result<i32> {
    let s = load_sequence(&a.model, &a.input)?;
    let g = RegVarFunction::parse(&a.g)?;
    let hint = RateHint::parse(&a.rate)?;
    let mut plan = WindowPlan::new(hint).with_trailing(a.windows);
    if let Some(tol) = a.tol {
        plan = plan.with_tol(tol);
    }
    let max_n = a.max_n.unwrap_or_else(|| s.len()).min(s.len());
    let grid = DyadicGrid::up_to(max_n);
    let report = asymptotics::analyze_sequence(&s, &g, &grid, &plan)?;

    let json = report.to_json();
    match &a.json {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            writeln!(f, "{json}")?;
        }
        None => println!("{json}"),
    }

    if let Some(path) = &a.csv {
        let mut f = BufWriter::new(File::create(path)?);
        writeln!(f, "N,tau,lambda_plus_ratio,lambda_minus_ratio")?;
        for (i, &(n, tau)) in report.tau.windows.iter().enumerate() {
            let lp = report
                .lambda_plus
                .as_ref()
                .and_then(|e| e.windows.get(i))
                .map(|&(_, v)| v.to_string())
                .unwrap_or_default();
            let lm = report
                .lambda_minus
                .as_ref()
                .and_then(|e| e.windows.get(i))
                .map(|&(_, v)| v.to_string())
                .unwrap_or_default();
            writeln!(f, "{n},{tau},{lp},{lm}")?;
        }
    }
    Ok(0)
}

fn model(a: ModelArgs) -> anyhow::Result<i32> {
    let spec = ModelSpec::parse(&a.spec)?;
    let s = match (&spec, a.max_rows) {
        // the product model can be huge; cap before expanding
        (ModelSpec::Podles { q, lambda_max }, Some(cap)) => {
            weylab::PodlesSpectrum::build(*q, *lambda_max)?.sequence(cap)?
        }
        _ => {
            let mut s = spec.build()?;
            if let Some(cap) = a.max_rows {
                s = truncate_sequence(&s, cap)?;
            }
            s
        }
    };
    let mut f = BufWriter::new(File::create(&a.out)?);
    spectra::write_csv(&s, &mut f)?;
    Ok(0)
}

fn truncate_sequence(s: &SpectralSequence, cap: usize) -> anyhow::Result<SpectralSequence> {
    use weylab::SpectralKind;
    Ok(match s.kind() {
        SpectralKind::Singular => {
            let v = s.singular_values()?;
            SpectralSequence::singular_unchecked(v[..v.len().min(cap)].to_vec())
        }
        SpectralKind::EigenComplex => {
            let v = s.complex_values()?;
            SpectralSequence::eigen_complex(v[..v.len().min(cap)].to_vec())?
        }
        SpectralKind::EigenRealSigned => {
            let (p, m) = s.signed_parts()?;
            SpectralSequence::eigen_signed_unchecked(
                p[..p.len().min(cap / 2)].to_vec(),
                m[..m.len().min(cap - cap / 2)].to_vec(),
            )
        }
    })
}

fn convert(a: ConvertArgs) -> anyhow::Result<i32> {
    match (&a.counting, &a.input) {
        (Some(spec), None) => {
            let model = CountingModel::parse(spec)?;
            let s = counting::sequence_from_counting(&CountingFunction::Model(model), a.count)?;
            match &a.out {
                Some(path) => {
                    let mut f = BufWriter::new(File::create(path)?);
                    spectra::write_csv(&s, &mut f)?;
                }
                None => {
                    let mut buf = Vec::new();
                    spectra::write_csv(&s, &mut buf)?;
                    print!("{}", String::from_utf8_lossy(&buf));
                }
            }
        }
        (None, Some(path)) => {
            let file = File::open(path)?;
            let s = spectra::read_csv(BufReader::new(file))?;
            let n = CountingFunction::from_sequence(&s, SpectralPart::Modulus)?;
            let parts: Vec<&str> = a.lambda_grid.split(',').collect();
            if parts.len() != 3 {
                bail!("--lambda-grid expects start,factor,points");
            }
            let start: f64 = parts[0].parse()?;
            let factor: f64 = parts[1].parse()?;
            let points: usize = parts[2].parse()?;
            if !(factor > 0.0 && factor < 1.0) {
                bail!("grid factor must be in (0, 1)");
            }
            let mut rows = String::from("lambda,count\n");
            let mut lambda = start;
            for _ in 0..points {
                if let Some(floor) = n.floor() {
                    if lambda < floor {
                        break;
                    }
                }
                rows.push_str(&format!("{lambda},{}\n", n.eval(lambda)?));
                lambda *= factor;
            }
            match &a.out {
                Some(path) => std::fs::write(path, rows)?,
                None => print!("{rows}"),
            }
        }
        _ => bail!("exactly one of --counting and --input is required"),
    }
    Ok(0)
}

fn harness(a: HarnessArgs) -> anyhow::Result<i32> {
    let mut results = Vec::new();
    let g = RegVarFunction::power_log(-1.0, 0.0);
    let mut failures = 0usize;
    for s in 0..a.seeds {
        let seed = a.seed.wrapping_add(s as u64);
        let s_mat = weylab::plant_profile(&g, a.size, 1.0, 0.5, seed)?;
        let t_mat = weylab::plant_profile(&g, a.size, 0.8, 0.9, seed ^ 0x517cc1b727220a95)?;
        let sum = s_mat.add(&t_mat)?;
        let ds = weylab::jacobi_eigen(&s_mat)?;
        let dt = weylab::jacobi_eigen(&t_mat)?;
        let dsum = weylab::jacobi_eigen(&sum)?;
        let slack = 1e-8 * (s_mat.frobenius_norm() + t_mat.frobenius_norm());
        let fan = spectra::check_fan(&ds.singular, &dt.singular, &dsum.singular, slack)?;
        let weyl = spectra::check_weyl_modulus(&dsum.signed, &dsum.singular, slack)?;
        let ok = fan.ok() && weyl.ok();
        if !ok {
            failures += 1;
            if let Some(dir) = &a.dump {
                std::fs::create_dir_all(dir)?;
                for (tag, mat) in [("s", &s_mat), ("t", &t_mat)] {
                    let path = dir.join(format!("seed{seed}_{tag}.bin"));
                    let mut f = BufWriter::new(File::create(path)?);
                    mat.write_binary(&mut f)?;
                }
            }
        }
        results.push(serde_json::json!({
            "seed": seed,
            "fan_ok": fan.ok(),
            "weyl_ok": weyl.ok(),
            "pairs_checked": fan.pairs_checked,
        }));
    }
    let doc = serde_json::json!({
        "size": a.size,
        "seeds": a.seeds,
        "failures": failures,
        "results": results,
    });
    let text = serde_json::to_string_pretty(&doc)?;
    match &a.json {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(if failures == 0 { 0 } else { 1 })
}

fn constants(a: ConstantsArgs) -> anyhow::Result<i32> {
    match a.family.as_str() {
        "simon" => {
            let alpha_str = a.alpha.as_deref().unwrap_or("inf");
            let alpha = if alpha_str == "inf" {
                f64::INFINITY
            } else {
                alpha_str.parse::<f64>().context("bad --alpha")?
            };
            let c = weylab::simon_constant(a.n, alpha)?;
            println!("simon n={} alpha={} value={:.12}", a.n, alpha_str, c);
        }
        "cusp" => {
            let (c1, c2) = weylab::cusp_constants(a.n)?;
            println!("cusp n={} c1={:.12} c2={:.12}", a.n, c1, c2);
        }
        other => bail!("unknown constant family `{other}` (expected simon|cusp)"),
    }
    Ok(0)
}

fn check(a: CheckArgs) -> anyhow::Result<i32> {
    let suite = Suite::parse(&a.suite)?;
    let tier = Tier::parse(&a.tier)?;
    let results = checks::run_suite(suite, tier, a.seed)?;
    let all_pass = results.iter().all(|r| r.pass);
    let doc = serde_json::json!({
        "suite": a.suite,
        "tier": a.tier,
        "seed": a.seed,
        "all_pass": all_pass,
        "results": results,
    });
    let text = serde_json::to_string_pretty(&doc)?;
    match &a.json {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(if all_pass { 0 } else { 1 })
}
