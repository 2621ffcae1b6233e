//! `qaoa-decode`: run QAOA decoding studies and emit CSV.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use qaoa_decoding::analytic::{derive_level1, maximize};
use qaoa_decoding::channel::RNG_ALGORITHM;
use qaoa_decoding::code::{registry, LinearCode};
use qaoa_decoding::experiments::{self, AngleMode, BscConfig, ResultRecord};
use qaoa_decoding::gf2::{BitMatrix, BitVector};
use qaoa_decoding::nelder_mead::NelderMeadConfig;
use qaoa_decoding::qaoa::{self, AngleSchedule, OptimizerConfig};
use qaoa_decoding::Error;

#[derive(Parser, Debug)]
#[command(name = "qaoa-decode", version)]
#[command(about = "QAOA decoding of binary linear codes")]
struct Cli {
    /// Registered code name: hamming74, hamming74-d1.71 ... hamming74-d2.71, rm16x5
    #[arg(long, global = true, default_value = "hamming74-d1.86")]
    code: String,

    /// Generator matrix text file; overrides --code
    #[arg(long, global = true)]
    matrix: Option<PathBuf>,

    /// Master seed for stochastic steps
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form level-1 expectation and its maximiser
    Derive {
        /// Received word, e.g. 0010000 (default: all zeros)
        #[arg(long)]
        received: Option<String>,
        /// Also print the per-clause derivation trace
        #[arg(long)]
        trace: bool,
        /// Emit the monomials as CSV
        #[arg(long)]
        csv: bool,
    },
    /// Analytic and simulated level-1 landscape side by side
    Sweep {
        #[arg(long)]
        received: Option<String>,
        /// Grid size over [0, 2pi] x [0, pi], endpoints included
        #[arg(long, default_value = "33x33")]
        grid: Grid,
        /// Fix gamma to take a 1-D slice in beta
        #[arg(long)]
        gamma: Option<f64>,
        /// Fix beta to take a 1-D slice in gamma
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Level-1 optimum of every registered Hamming variant
    Table1,
    /// Multi-start angle optimisation for levels 1..=p
    Optimize {
        #[arg(long)]
        received: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Cross-entropy of the optimised state versus level
    CrossEntropy {
        /// Comma-separated code names (default: all Hamming variants)
        #[arg(long, value_delimiter = ',')]
        codes: Vec<String>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Probability of at least one ML hit within N measurements
    SuccessRate {
        /// Comma-separated shot counts
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "1,2,5,10,20,50,100,200,500,1000"
        )]
        shots: Vec<u64>,
        /// Monte-Carlo repetitions per shot count
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        /// Level-1 angle; both or neither of --gamma/--beta (default: exact optimum)
        #[arg(long, requires = "beta")]
        gamma: Option<f64>,
        #[arg(long, requires = "gamma")]
        beta: Option<f64>,
    },
    /// Zero codeword over a binary symmetric channel
    Bsc {
        /// Comma-separated crossover probabilities
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1")]
        epsilon: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        frames: u64,
        /// Measurements per frame for the multishot decoder
        #[arg(long, default_value_t = 100)]
        shots: u64,
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Re-optimise the angles for every received word
        #[arg(long)]
        per_frame: bool,
        #[command(flatten)]
        search: SearchTuning,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Highest QAOA level
    #[arg(long, default_value_t = 3)]
    level: usize,
    #[command(flatten)]
    tuning: SearchTuning,
}

#[derive(Args, Debug)]
struct SearchTuning {
    /// Random starts per level above 1
    #[arg(long, default_value_t = 32)]
    starts: usize,
    /// Nelder-Mead evaluation budget per start
    #[arg(long, default_value_t = 2000)]
    max_evals: usize,
    /// Level-1 start grid (gamma x beta)
    #[arg(long = "start-grid", default_value = "16x8")]
    start_grid: Grid,
}

impl SearchTuning {
    fn config(&self, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            nelder_mead: NelderMeadConfig {
                max_evaluations: self.max_evals,
                ..Default::default()
            },
            grid_gamma: self.start_grid.width,
            grid_beta: self.start_grid.height,
            random_starts: self.starts,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Grid {
    width: usize,
    height: usize,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
        let grid = Grid {
            width: parse(w)?,
            height: parse(h)?,
        };
        if grid.width == 0 || grid.height == 0 {
            return Err("grid dimensions must be positive".into());
        }
        Ok(grid)
    }
}

struct Output {
    text: Option<String>,
    record: Option<ResultRecord>,
}

fn load_code(cli: &Cli) -> anyhow::Result<(String, LinearCode)> {
    match &cli.matrix {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(|e| Error::InvalidInput(format!("{e:#}")))?;
            let code = LinearCode::new(BitMatrix::parse_text(&text)?)?;
            Ok((path.display().to_string(), code))
        }
        None => Ok((cli.code.clone(), registry::by_name(&cli.code)?)),
    }
}

fn received_word(arg: &Option<String>, n: usize) -> anyhow::Result<BitVector> {
    match arg {
        None => Ok(BitVector::zeros(n)),
        Some(s) => {
            let y: BitVector = s.parse()?;
            if y.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: y.len(),
                }
                .into());
            }
            Ok(y)
        }
    }
}

fn require_seed(seed: Option<u64>, command: &str) -> anyhow::Result<u64> {
    seed.ok_or_else(|| anyhow!(Error::InvalidInput(format!("{command} requires --seed"))))
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    if matches!(cli.command, Command::Table1) {
        let rows = experiments::table1()?;
        return Ok(Output {
            text: None,
            record: Some(experiments::table1_record(&rows)),
        });
    }
    let (name, code) = load_code(cli)?;
    match &cli.command {
        Command::Table1 => unreachable!(),
        Command::Derive {
            received,
            trace,
            csv,
        } => {
            let y = received_word(received, code.n())?;
            let derivation = derive_level1(&code, &y)?;
            let opt = maximize(&derivation.polynomial);
            if *csv {
                let mut rec = ResultRecord::new(
                    "derive",
                    &[
                        "coeff",
                        "sin_2gamma",
                        "cos_2gamma",
                        "sin_2beta",
                        "cos_2beta",
                    ],
                )
                .param("code", &name)
                .param("received", &y)
                .param("f1_star", format!("{:.12}", opt.f_star))
                .param("gamma_star", format!("{:.12}", opt.gamma))
                .param("beta_star", format!("{:.12}", opt.beta));
                for t in derivation.polynomial.terms() {
                    let e = t.exponents;
                    rec.push_row(vec![
                        t.coeff.to_string(),
                        e.sin_gamma.to_string(),
                        e.cos_gamma.to_string(),
                        e.sin_beta.to_string(),
                        e.cos_beta.to_string(),
                    ]);
                }
                return Ok(Output {
                    text: None,
                    record: Some(rec),
                });
            }
            let mut text = format!(
                "# code={name} received={y}\n# s=sin(2g) c=cos(2g) s'=sin(2b) c'=cos(2b)\n{}\n\
                 f1_star={:.12}\ngamma_star={:.12}\nbeta_star={:.12}\n",
                derivation.polynomial, opt.f_star, opt.gamma, opt.beta
            );
            if *trace {
                text.push('\n');
                text.push_str(&derivation.trace.to_string());
            }
            Ok(Output {
                text: Some(text),
                record: None,
            })
        }
        Command::Sweep {
            received,
            grid,
            gamma,
            beta,
        } => {
            let y = received_word(received, code.n())?;
            let (mut gammas, mut betas) = experiments::full_domain_axes(grid.width, grid.height);
            if let Some(g) = gamma {
                gammas = vec![*g];
            }
            if let Some(b) = beta {
                betas = vec![*b];
            }
            let points = experiments::sweep(&code, &y, &gammas, &betas)?;
            Ok(Output {
                text: None,
                record: Some(experiments::sweep_record(&name, &y, &points)),
            })
        }
        Command::Optimize { received, search } => {
            let y = received_word(received, code.n())?;
            let seed = cli.seed.unwrap_or(0);
            let config = search.tuning.config(seed);
            let h = qaoa_decoding::cost::CostHamiltonian::build(&code, &y)?;
            let results = qaoa::optimize_levels(&h, search.level, &config)?;
            let mut rec = ResultRecord::new(
                "optimize",
                &[
                    "level",
                    "f_star",
                    "gammas",
                    "betas",
                    "success_probability",
                    "cross_entropy",
                    "evaluations",
                    "starts",
                    "budget_exhausted",
                ],
            )
            .param("code", &name)
            .param("received", &y)
            .param("seed", seed)
            .param("rng", RNG_ALGORITHM)
            .param("max_evals", search.tuning.max_evals);
            for (i, r) in results.iter().enumerate() {
                let state = qaoa::run_ansatz_with(&h, &r.best_angles)?;
                let q = qaoa::success_probability(&state, &code, &y)?;
                let ce = qaoa::cross_entropy(&state, &code, &y)?;
                rec.push_row(vec![
                    (i + 1).to_string(),
                    format!("{:.12}", r.f_star),
                    join(r.best_angles.gammas()),
                    join(r.best_angles.betas()),
                    format!("{q:.12}"),
                    format!("{:.12}", ce.value),
                    r.evaluations.to_string(),
                    r.starts.to_string(),
                    r.budget_exhausted.to_string(),
                ]);
            }
            Ok(Output {
                text: None,
                record: Some(rec),
            })
        }
        Command::CrossEntropy { codes, search } => {
            let names: Vec<String> = if !codes.is_empty() {
                codes.clone()
            } else if cli.matrix.is_some() {
                vec![name.clone()]
            } else {
                registry::HAMMING_VARIANTS
                    .iter()
                    .map(|v| v.name.to_string())
                    .collect()
            };
            let set = names
                .iter()
                .map(|n| {
                    if cli.matrix.is_some() && *n == name {
                        Ok((n.clone(), code.clone()))
                    } else {
                        Ok((n.clone(), registry::by_name(n)?))
                    }
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let config = search.tuning.config(cli.seed.unwrap_or(0));
            let rows = experiments::cross_entropy_study(&set, search.level, &config)?;
            Ok(Output {
                text: None,
                record: Some(experiments::cross_entropy_record(&rows, &config)),
            })
        }
        Command::SuccessRate {
            shots,
            trials,
            gamma,
            beta,
        } => {
            let seed = require_seed(cli.seed, "success-rate")?;
            let angles = gamma.zip(*beta).map(|(g, b)| AngleSchedule::single(g, b));
            let report = experiments::success_rate(&code, angles, shots, *trials, seed)?;
            Ok(Output {
                text: None,
                record: Some(experiments::success_record(&name, &report)),
            })
        }
        Command::Bsc {
            epsilon,
            frames,
            shots,
            level,
            per_frame,
            search,
        } => {
            let seed = require_seed(cli.seed, "bsc")?;
            let optimizer = search.config(seed);
            let angles = if *per_frame {
                AngleMode::PerFrame {
                    level: *level,
                    config: optimizer,
                }
            } else {
                AngleMode::Fixed(experiments::zero_word_angles(&code, *level, &optimizer)?)
            };
            let config = BscConfig {
                epsilons: epsilon.clone(),
                frames: *frames,
                seed,
                angles,
                multishot: *shots,
            };
            let rows = experiments::bsc_experiment(&code, &config)?;
            Ok(Output {
                text: None,
                record: Some(experiments::bsc_record(&name, &config, &rows)),
            })
        }
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.9}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn emit(cli: &Cli, output: &Output, wall: Duration) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(io::BufWriter::new(fs::File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    if let Some(text) = &output.text {
        sink.write_all(text.as_bytes())?;
    }
    if let Some(rec) = &output.record {
        rec.write_csv(&mut sink, wall)?;
    }
    sink.flush()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Derivation(_)) => 3,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let result = run(&cli).and_then(|out| {
        emit(&cli, &out, start.elapsed()).context("writing output")?;
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
