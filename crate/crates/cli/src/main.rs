//! `hdwn`: white-noise tests for high-dimensional time series, simulation
//! driver and spectral calculators.

mod data;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hdwn_core::clt::{clt_cov, clt_mean, joint_lag_cov_matrix, lsd_moment, CltConfig};
use hdwn_core::datagen::ArScaling;
use hdwn_core::montecarlo::{parse_experiments, run_experiments};
use hdwn_core::rmt::{lsd_density, solve_silverstein_any, symmetrized_shift_spectrum};
use hdwn_core::wntest::{john_simes_test, multi_lag_test, permutation_test};
use hdwn_core::{
    Complex64, JointSpectralDistribution, Method, MomentProfile, Nu4, Polynomial, Scenario,
    ScenarioSpec, SolverConfig, SpectralDistribution,
};

use data::{parse_delimiter, write_sample, DataFileSpec, Layout};

const EXIT_ACCEPT: u8 = 0;
const EXIT_REJECT: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "hdwn", version, about = "High-dimensional white-noise tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a data file for white noise. Exit code 0 accepts, 1 rejects.
    Test(TestArgs),
    /// Run size/power experiments from a TOML file and write a CSV table.
    Simulate(SimulateArgs),
    /// Spectral calculators.
    Rmt {
        #[command(subcommand)]
        command: RmtCommand,
    },
    /// Limiting mean and covariance of linear spectral statistics.
    Clt {
        #[command(subcommand)]
        command: CltCommand,
    },
    /// Generate a sample from a simulation scenario.
    Gen(GenArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Data file (CSV by default).
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Layout::RowsAreTime)]
    layout: Layout,
    /// Field separator: one ASCII character, `tab` or `space`.
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: u8,
    /// Skip the first line.
    #[arg(long)]
    has_header: bool,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of lags.
    #[arg(long, default_value_t = 1)]
    q: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// phi, john or perm.
    #[arg(long, default_value = "phi")]
    method: Method,
    /// Fourth moment of the innovations, or `auto` to estimate it.
    #[arg(long, default_value = "3")]
    nu4: Nu4,
    /// Permutations for the permutation test.
    #[arg(long = "B", default_value_t = 500)]
    b: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment file.
    config: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Fill the `seconds` column with wall-clock timings.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct LawArgs {
    /// Ratio c = p/n.
    #[arg(long)]
    c: f64,
    /// Population spectral distribution: `point v`, `discrete v1 w1 v2 w2 ...` or `arcsine`.
    #[arg(long, default_value = "point 1")]
    h: SpectralDistribution,
    /// Solve with 1/c in place of c (the n x n companion side).
    #[arg(long)]
    companion_side: bool,
}

impl LawArgs {
    fn ratio(&self) -> f64 {
        if self.companion_side {
            1.0 / self.c
        } else {
            self.c
        }
    }
}

#[derive(Subcommand)]
enum RmtCommand {
    /// Limiting spectral density on a grid, as `x,density` CSV.
    Density {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 4.0)]
        to: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Stieltjes transforms m and m_bar at one point z.
    Solve {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, allow_negative_numbers = true)]
        re: f64,
        #[arg(long, allow_negative_numbers = true)]
        im: f64,
    },
    /// Eigenvalues of the symmetrized circular shift.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: usize,
    },
}

#[derive(Args)]
struct MomentArgs {
    #[arg(long, default_value_t = 3.0)]
    nu4: f64,
    /// Override the real-case value of alpha_x.
    #[arg(long)]
    alpha_x: Option<f64>,
    /// Override the real-case value of beta_x.
    #[arg(long)]
    beta_x: Option<f64>,
}

impl MomentArgs {
    fn profile(&self) -> Result<MomentProfile> {
        let real = MomentProfile::real(self.nu4)?;
        Ok(MomentProfile::new(
            self.nu4,
            self.alpha_x.unwrap_or(real.alpha_x),
            self.beta_x.unwrap_or(real.beta_x),
        )?)
    }
}

#[derive(Subcommand)]
enum CltCommand {
    /// Limiting mean of the centred statistic for f.
    Mean {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        moments: MomentArgs,
        /// Polynomial coefficients from the constant term up, e.g. `0,0,1`.
        #[arg(long)]
        f: Polynomial,
    },
    /// Integral of f against the limiting spectral distribution.
    Moment {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        f: Polynomial,
    },
    /// Limiting covariance of the statistics for f and g.
    Cov {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        moments: MomentArgs,
        #[arg(long)]
        f: Polynomial,
        /// Defaults to f.
        #[arg(long)]
        g: Option<Polynomial>,
        /// Population pairing: `diagonal` (both H), `identity` (identity with H) or `chebyshev:r,s` (arcsine lags).
        #[arg(long, default_value = "diagonal")]
        pairing: String,
    },
    /// q x q limiting covariance matrix of the lag statistics, as CSV.
    LagMatrix {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 3.0)]
        nu4: f64,
    },
}

#[derive(Args)]
struct GenArgs {
    /// i/gaussian_wn, ii/gamma_wn, iii/gaussian_ar1, iv/gamma_ar1, rademacher_wn.
    #[arg(long)]
    scenario: Scenario,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "raw")]
    ar_scaling: ArScaling,
    #[arg(long, value_enum, default_value_t = Layout::RowsAreTime)]
    layout: Layout,
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: u8,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_ACCEPT
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Test(args) => cmd_test(args),
        Command::Simulate(args) => cmd_simulate(args).map(|()| EXIT_ACCEPT),
        Command::Rmt { command } => cmd_rmt(command).map(|()| EXIT_ACCEPT),
        Command::Clt { command } => cmd_clt(command).map(|()| EXIT_ACCEPT),
        Command::Gen(args) => cmd_gen(args).map(|()| EXIT_ACCEPT),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_test(args: TestArgs) -> Result<u8> {
    let spec = DataFileSpec {
        path: args.input.file,
        layout: args.input.layout,
        delimiter: args.input.delimiter,
        has_header: args.input.has_header,
    };
    let x = spec.load()?;
    if x.n() <= args.q {
        anyhow::bail!(
            "need more than q = {} observations, file has {}",
            args.q,
            x.n()
        );
    }
    let (block, header, row, reject) = match args.method {
        Method::Phi => {
            let r = multi_lag_test(&x, args.q, args.alpha, args.nu4)?;
            (r.to_kv(), r.csv_header(), r.csv_row(), r.reject)
        }
        Method::Permutation => {
            let r = permutation_test(&x, args.q, args.alpha, args.b, args.seed)?;
            (r.to_kv(), r.csv_header(), r.csv_row(), r.reject)
        }
        Method::JohnSimes => {
            let r = john_simes_test(&x, args.q, args.alpha, args.nu4)?;
            (r.to_kv(), r.csv_header(), r.csv_row(), r.reject)
        }
    };
    print!("{block}");
    if !block.ends_with('\n') {
        println!();
    }
    println!();
    println!("{header}");
    println!("{row}");
    Ok(if reject { EXIT_REJECT } else { EXIT_ACCEPT })
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfgs = parse_experiments(&text)?;
    for cfg in &mut cfgs {
        cfg.timing |= args.timing;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.unwrap_or(0))
        .build()?;
    let table = pool.install(|| run_experiments(&cfgs))?;
    emit(&table.to_csv(), args.out.as_ref())
}

fn cmd_rmt(command: RmtCommand) -> Result<()> {
    let cfg = SolverConfig::default();
    match command {
        RmtCommand::Density {
            law,
            from,
            to,
            points,
        } => {
            anyhow::ensure!(
                from.is_finite() && to.is_finite() && from < to,
                "grid needs from < to"
            );
            anyhow::ensure!(points >= 2, "grid needs at least 2 points");
            let mut out = String::from("x,density\n");
            for k in 0..points {
                let x = from + (to - from) * k as f64 / (points - 1) as f64;
                out.push_str(&format!(
                    "{x},{}\n",
                    lsd_density(x, law.ratio(), &law.h, &cfg)?
                ));
            }
            emit(&out, None)
        }
        RmtCommand::Solve { law, re, im } => {
            let z = Complex64::new(re, im);
            let c = law.ratio();
            let s = solve_silverstein_any(z, c, &law.h, &cfg)?;
            let residual = hdwn_core::rmt::silverstein_residual(s.z, s.m_bar, c, &law.h).norm();
            println!("z={},{}", s.z.re, s.z.im);
            println!("m={},{}", s.m.re, s.m.im);
            println!("m_bar={},{}", s.m_bar.re, s.m_bar.im);
            println!("residual={residual:e}");
            Ok(())
        }
        RmtCommand::Spectrum { n, tau } => {
            let eig = symmetrized_shift_spectrum(n, tau)?;
            let line: Vec<String> = eig.iter().map(|v| clean(*v).to_string()).collect();
            println!("{}", line.join(","));
            Ok(())
        }
    }
}

/// Rounds away floating-point dust around integers.
fn clean(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < 1e-12 {
        r + 0.0
    } else {
        v
    }
}

fn clt_config(law: &LawArgs) -> CltConfig {
    CltConfig {
        companion_side: law.companion_side,
        ..CltConfig::default()
    }
}

fn cmd_clt(command: CltCommand) -> Result<()> {
    match command {
        CltCommand::Mean { law, moments, f } => {
            println!(
                "{}",
                clt_mean(&f, law.c, &law.h, &moments.profile()?, &clt_config(&law))?
            );
        }
        CltCommand::Moment { law, f } => {
            println!("{}", lsd_moment(&f, law.c, &law.h, &clt_config(&law))?);
        }
        CltCommand::Cov {
            law,
            moments,
            f,
            g,
            pairing,
        } => {
            let hrs = parse_pairing(&pairing, &law.h)?;
            let g = g.unwrap_or_else(|| f.clone());
            println!(
                "{}",
                clt_cov(&f, &g, law.c, &hrs, &moments.profile()?, &clt_config(&law))?
            );
        }
        CltCommand::LagMatrix { q, c, nu4 } => {
            let m = joint_lag_cov_matrix(q, c, nu4)?;
            for i in 0..q {
                let row: Vec<String> = (0..q).map(|j| m.entries[(i, j)].to_string()).collect();
                println!("{}", row.join(","));
            }
        }
    }
    Ok(())
}

fn parse_pairing(s: &str, h: &SpectralDistribution) -> Result<JointSpectralDistribution> {
    let s = s.trim();
    if s == "diagonal" {
        return Ok(JointSpectralDistribution::diagonal(h)?);
    }
    if s == "identity" {
        return Ok(JointSpectralDistribution::with_identity(h)?);
    }
    if let Some(rest) = s.strip_prefix("chebyshev:") {
        let (r, t) = rest
            .split_once(',')
            .context("chebyshev pairing needs `chebyshev:r,s`")?;
        let r: usize = r.trim().parse().context("chebyshev order r")?;
        let t: usize = t.trim().parse().context("chebyshev order s")?;
        return Ok(JointSpectralDistribution::chebyshev_pair(
            r,
            t,
            hdwn_core::rmt::ARCSINE_NODES,
        )?);
    }
    anyhow::bail!("unknown pairing {s:?} (expected diagonal, identity or chebyshev:r,s)")
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let spec = ScenarioSpec {
        ar_scaling: args.ar_scaling,
        ..ScenarioSpec::new(args.scenario, args.p, args.n, args.a, args.seed)
    };
    let x = spec.generate()?;
    emit(
        &write_sample(&x, args.layout, args.delimiter)?,
        args.out.as_ref(),
    )
}
