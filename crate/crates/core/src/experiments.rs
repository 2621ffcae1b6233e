//! End-to-end studies: level-1 degree table, landscape sweeps, cross-entropy
//! versus level, shot-accumulated success rate, and BSC decoding runs.
//!
//! Every study returns typed rows plus a [`ResultRecord`] conversion that
//! renders as CSV. Stochastic studies derive one ChaCha8 stream per task
//! from `(seed, task index)`, so output does not depend on thread count.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::io::{self, Write};
use std::time::Duration;

use rayon::prelude::*;

use crate::analytic::{derive_level1, maximize, Level1Optimum, TrigPolynomial};
use crate::channel::{task_rng, BscChannel, RNG_ALGORITHM};
use crate::code::{ml_optimal_labels, registry, LinearCode};
use crate::cost::CostHamiltonian;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::qaoa::{
    self, accumulated_success, cross_entropy, grid_sweep_with, optimize_levels, run_ansatz_with,
    AngleSchedule, OptimizerConfig,
};
use crate::statevector::Sampler;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A CSV table with a metadata header.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub kind: String,
    /// Parameters echoed into the header, in insertion order.
    pub params: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ResultRecord {
    pub fn new(kind: &str, columns: &[&str]) -> Self {
        Self {
            kind: kind.to_string(),
            params: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// Writes the header and table. Only the first line (tool version and
    /// wall time) varies between identical runs.
    pub fn write_csv<W: Write>(&self, mut out: W, wall_time: Duration) -> io::Result<()> {
        writeln!(
            out,
            "# qaoa-decode {TOOL_VERSION} {} wall_time_s={:.3}",
            self.kind,
            wall_time.as_secs_f64()
        )?;
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        writeln!(out, "# {}", params.join(" "))?;
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

fn csv_cell(value: &str) -> String {
    if value.contains([',', '"', '\n']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x:.12}")
}

fn join_angles(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.9}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

// ---------------------------------------------------------------------------
// Level-1 degree table

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub name: String,
    pub mean_degree: f64,
    pub optimum: Level1Optimum,
    pub polynomial: TrigPolynomial,
}

/// Closed-form level-1 optimum of each registered Hamming variant for the
/// zero received word, sorted by mean column degree.
pub fn table1() -> Result<Vec<Table1Row>> {
    let mut rows = registry::HAMMING_VARIANTS
        .par_iter()
        .map(|v| {
            let code = v.code();
            let polynomial = derive_level1(&code, &BitVector::zeros(code.n()))?.polynomial;
            Ok(Table1Row {
                name: v.name.to_string(),
                mean_degree: code.mean_column_degree(),
                optimum: maximize(&polynomial),
                polynomial,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.mean_degree.total_cmp(&b.mean_degree));
    Ok(rows)
}

pub fn table1_record(rows: &[Table1Row]) -> ResultRecord {
    let mut rec = ResultRecord::new(
        "table1",
        &[
            "mean_degree",
            "code",
            "f1_star",
            "gamma_star",
            "beta_star",
            "monomials",
        ],
    )
    .param("received", "zero");
    for r in rows {
        rec.push_row(vec![
            format!("{:.2}", r.mean_degree),
            r.name.clone(),
            fmt_f(r.optimum.f_star),
            fmt_f(r.optimum.gamma),
            fmt_f(r.optimum.beta),
            r.polynomial.terms().len().to_string(),
        ]);
    }
    rec
}

// ---------------------------------------------------------------------------
// Landscape sweeps

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub gamma: f64,
    pub beta: f64,
    pub analytic: f64,
    pub simulated: f64,
}

/// Closed-form and simulated `F_1` side by side on a grid.
pub fn sweep(
    code: &LinearCode,
    y: &BitVector,
    gammas: &[f64],
    betas: &[f64],
) -> Result<Vec<SweepPoint>> {
    let polynomial = derive_level1(code, y)?.polynomial;
    let h = CostHamiltonian::build(code, y)?;
    let surface = grid_sweep_with(&h, gammas, betas)?;
    let mut points = Vec::with_capacity(gammas.len() * betas.len());
    for (i, &gamma) in gammas.iter().enumerate() {
        for (j, &beta) in betas.iter().enumerate() {
            points.push(SweepPoint {
                gamma,
                beta,
                analytic: polynomial.evaluate(gamma, beta),
                simulated: surface.values[i][j],
            });
        }
    }
    Ok(points)
}

pub fn max_sweep_discrepancy(points: &[SweepPoint]) -> f64 {
    points
        .iter()
        .map(|p| (p.analytic - p.simulated).abs())
        .fold(0.0, f64::max)
}

pub fn sweep_record(code_name: &str, y: &BitVector, points: &[SweepPoint]) -> ResultRecord {
    let mut rec = ResultRecord::new(
        "sweep",
        &["gamma", "beta", "analytic", "simulated", "abs_diff"],
    )
    .param("code", code_name)
    .param("received", y);
    for p in points {
        rec.push_row(vec![
            fmt_f(p.gamma),
            fmt_f(p.beta),
            fmt_f(p.analytic),
            fmt_f(p.simulated),
            format!("{:.3e}", (p.analytic - p.simulated).abs()),
        ]);
    }
    rec
}

/// Grid axes for a `width x height` sweep over the full canonical domain,
/// endpoints included.
pub fn full_domain_axes(width: usize, height: usize) -> (Vec<f64>, Vec<f64>) {
    (
        qaoa::linspace(0.0, TAU, width, true),
        qaoa::linspace(0.0, PI, height, true),
    )
}

// ---------------------------------------------------------------------------
// Cross-entropy versus level

#[derive(Debug, Clone, PartialEq)]
pub struct CrossEntropyRow {
    pub name: String,
    pub mean_degree: f64,
    pub k: usize,
    pub level: usize,
    pub f_star: f64,
    pub cross_entropy: f64,
    pub angles: AngleSchedule,
    pub evaluations: usize,
}

/// Optimises levels `1..=p_max` for each code (zero received word) and
/// reports the cross-entropy of the optimised state.
pub fn cross_entropy_study(
    codes: &[(String, LinearCode)],
    p_max: usize,
    config: &OptimizerConfig,
) -> Result<Vec<CrossEntropyRow>> {
    let per_code = codes
        .par_iter()
        .map(|(name, code)| {
            let y = BitVector::zeros(code.n());
            let h = CostHamiltonian::build(code, &y)?;
            optimize_levels(&h, p_max, config)?
                .into_iter()
                .enumerate()
                .map(|(i, r)| {
                    let state = run_ansatz_with(&h, &r.best_angles)?;
                    Ok(CrossEntropyRow {
                        name: name.clone(),
                        mean_degree: code.mean_column_degree(),
                        k: code.k(),
                        level: i + 1,
                        f_star: r.f_star,
                        cross_entropy: cross_entropy(&state, code, &y)?.value,
                        angles: r.best_angles,
                        evaluations: r.evaluations,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_code.into_iter().flatten().collect())
}

pub fn cross_entropy_record(rows: &[CrossEntropyRow], config: &OptimizerConfig) -> ResultRecord {
    let mut rec = ResultRecord::new(
        "cross-entropy",
        &[
            "code",
            "mean_degree",
            "level",
            "f_star",
            "cross_entropy",
            "uniform_baseline",
            "gammas",
            "betas",
            "evaluations",
        ],
    )
    .param("received", "zero")
    .param("seed", config.seed)
    .param("rng", RNG_ALGORITHM)
    .param("random_starts", config.random_starts)
    .param("max_evals", config.nelder_mead.max_evaluations);
    for r in rows {
        rec.push_row(vec![
            r.name.clone(),
            format!("{:.2}", r.mean_degree),
            r.level.to_string(),
            fmt_f(r.f_star),
            fmt_f(r.cross_entropy),
            fmt_f(r.k as f64 * std::f64::consts::LN_2),
            join_angles(r.angles.gammas()),
            join_angles(r.angles.betas()),
            r.evaluations.to_string(),
        ]);
    }
    rec
}

// ---------------------------------------------------------------------------
// Accumulated success rate over shots

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessRow {
    pub shots: u64,
    /// `1 - (1 - q)^N`.
    pub analytic: f64,
    pub monte_carlo: f64,
    /// Binomial standard error of the Monte-Carlo estimate around `analytic`.
    pub sigma: f64,
    /// `1 - (1 - 2^-k)^N`.
    pub naive: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuccessReport {
    pub angles: AngleSchedule,
    pub q: f64,
    pub trials: u64,
    pub seed: u64,
    pub rows: Vec<SuccessRow>,
}

/// Success of at least one ML hit among `N` measurements of the ansatz
/// state for the zero received word. Without explicit angles the exact
/// level-1 optimum is used.
pub fn success_rate(
    code: &LinearCode,
    angles: Option<AngleSchedule>,
    shot_counts: &[u64],
    trials: u64,
    seed: u64,
) -> Result<SuccessReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let y = BitVector::zeros(code.n());
    let angles = match angles {
        Some(a) => a,
        None => {
            let poly = derive_level1(code, &y)?.polynomial;
            let opt = maximize(&poly);
            AngleSchedule::single(opt.gamma, opt.beta)
        }
    };
    let h = CostHamiltonian::build(code, &y)?;
    let state = run_ansatz_with(&h, &angles)?;
    let q = qaoa::success_probability(&state, code, &y)?;
    let (labels, _) = ml_optimal_labels(&y, code)?;
    let sampler = state.sampler();
    let naive_q = 0.5f64.powi(code.k() as i32);

    let rows = shot_counts
        .par_iter()
        .enumerate()
        .map(|(idx, &shots)| {
            let mut rng = task_rng(seed, idx as u64);
            let hits = (0..trials)
                .filter(|_| (0..shots).any(|_| labels.contains(&sampler.draw(&mut rng))))
                .count();
            let analytic = accumulated_success(q, shots);
            SuccessRow {
                shots,
                analytic,
                monte_carlo: hits as f64 / trials as f64,
                sigma: (analytic * (1.0 - analytic) / trials as f64).sqrt(),
                naive: accumulated_success(naive_q, shots),
            }
        })
        .collect();
    Ok(SuccessReport {
        angles,
        q,
        trials,
        seed,
        rows,
    })
}

pub fn success_record(code_name: &str, report: &SuccessReport) -> ResultRecord {
    let mut rec = ResultRecord::new(
        "success-rate",
        &[
            "shots",
            "analytic",
            "monte_carlo",
            "sigma",
            "naive_random",
            "trials",
            "seed",
        ],
    )
    .param("code", code_name)
    .param("q", fmt_f(report.q))
    .param("gammas", join_angles(report.angles.gammas()))
    .param("betas", join_angles(report.angles.betas()))
    .param("seed", report.seed)
    .param("rng", RNG_ALGORITHM);
    for r in &report.rows {
        rec.push_row(vec![
            r.shots.to_string(),
            fmt_f(r.analytic),
            fmt_f(r.monte_carlo),
            fmt_f(r.sigma),
            fmt_f(r.naive),
            report.trials.to_string(),
            report.seed.to_string(),
        ]);
    }
    rec
}

// ---------------------------------------------------------------------------
// BSC decoding

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Decoder {
    /// Exhaustive ML decoding; lowest label on ties.
    MlOracle,
    /// One measurement of the ansatz state.
    QaoaSingleShot,
    /// Most frequent outcome over several measurements; lowest label on ties.
    QaoaMultishot,
}

impl Decoder {
    pub fn name(self) -> &'static str {
        match self {
            Decoder::MlOracle => "ml-oracle",
            Decoder::QaoaSingleShot => "qaoa-single-shot",
            Decoder::QaoaMultishot => "qaoa-multishot",
        }
    }

    pub const ALL: [Decoder; 3] = [
        Decoder::MlOracle,
        Decoder::QaoaSingleShot,
        Decoder::QaoaMultishot,
    ];
}

/// How the QAOA decoders choose their angles.
#[derive(Debug, Clone, PartialEq)]
pub enum AngleMode {
    /// Same schedule for every frame.
    Fixed(AngleSchedule),
    /// Re-optimised for each received word.
    PerFrame {
        level: usize,
        config: OptimizerConfig,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BscConfig {
    pub epsilons: Vec<f64>,
    pub frames: u64,
    pub seed: u64,
    pub angles: AngleMode,
    /// Measurements per frame for the multishot decoder.
    pub multishot: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BscRow {
    pub epsilon: f64,
    pub decoder: Decoder,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub info_bits: u64,
    pub shots: u64,
}

impl BscRow {
    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.frames as f64
    }

    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.info_bits as f64
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Counters {
    frame_errors: [u64; 3],
    bit_errors: [u64; 3],
}

impl Counters {
    fn record(&mut self, decoder: Decoder, decoded: u64) {
        let i = decoder as usize;
        if decoded != 0 {
            self.frame_errors[i] += 1;
        }
        self.bit_errors[i] += decoded.count_ones() as u64;
    }

    fn merge(mut self, other: Self) -> Self {
        for i in 0..3 {
            self.frame_errors[i] += other.frame_errors[i];
            self.bit_errors[i] += other.bit_errors[i];
        }
        self
    }
}

fn mode_of(sampler: &Sampler, shots: u64, rng: &mut rand_chacha::ChaCha8Rng) -> u64 {
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for _ in 0..shots {
        *hist.entry(sampler.draw(rng)).or_insert(0) += 1;
    }
    // BTreeMap iterates in label order, so max_by_key with a reversed label
    // tiebreak picks the lowest label among the most frequent
    hist.into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(z, _)| z)
        .expect("at least one shot")
}

/// All-zero codeword over a BSC, decoded by the oracle and both QAOA
/// decoders on shared channel realisations.
pub fn bsc_experiment(code: &LinearCode, config: &BscConfig) -> Result<Vec<BscRow>> {
    if config.frames == 0 || config.multishot == 0 {
        return Err(Error::InvalidInput(
            "frames and shots must be at least 1".into(),
        ));
    }
    for &eps in &config.epsilons {
        BscChannel::seeded(eps, 0)?;
    }
    let n = code.n();
    let mut rows = Vec::new();
    for (e_idx, &eps) in config.epsilons.iter().enumerate() {
        let counters = (0..config.frames)
            .into_par_iter()
            .map(|f| -> Result<Counters> {
                let task = e_idx as u64 * config.frames + f;
                let mut channel = BscChannel::with_rng(eps, task_rng(config.seed, 2 * task))?;
                let mut meas_rng = task_rng(config.seed, 2 * task + 1);
                let y = channel.error_pattern(n);
                let mut c = Counters::default();

                let (labels, _) = ml_optimal_labels(&y, code)?;
                c.record(Decoder::MlOracle, labels[0]);

                let h = CostHamiltonian::build(code, &y)?;
                let angles = match &config.angles {
                    AngleMode::Fixed(a) => a.clone(),
                    AngleMode::PerFrame { level, config } => {
                        optimize_levels(&h, *level, config)?
                            .pop()
                            .expect("non-empty")
                            .best_angles
                    }
                };
                let sampler = run_ansatz_with(&h, &angles)?.sampler();
                c.record(Decoder::QaoaSingleShot, sampler.draw(&mut meas_rng));
                c.record(
                    Decoder::QaoaMultishot,
                    mode_of(&sampler, config.multishot, &mut meas_rng),
                );
                Ok(c)
            })
            .try_reduce(Counters::default, |a, b| Ok(a.merge(b)))?;
        for decoder in Decoder::ALL {
            let i = decoder as usize;
            rows.push(BscRow {
                epsilon: eps,
                decoder,
                frames: config.frames,
                frame_errors: counters.frame_errors[i],
                bit_errors: counters.bit_errors[i],
                info_bits: config.frames * code.k() as u64,
                shots: match decoder {
                    Decoder::MlOracle => 0,
                    Decoder::QaoaSingleShot => 1,
                    Decoder::QaoaMultishot => config.multishot,
                },
            });
        }
    }
    Ok(rows)
}

/// Angles for the fixed-angle BSC mode: the optimum for the zero received
/// word, exact closed form at level 1 and multi-start search above.
pub fn zero_word_angles(
    code: &LinearCode,
    level: usize,
    config: &OptimizerConfig,
) -> Result<AngleSchedule> {
    let y = BitVector::zeros(code.n());
    if level == 1 {
        let opt = maximize(&derive_level1(code, &y)?.polynomial);
        Ok(AngleSchedule::single(opt.gamma, opt.beta))
    } else {
        let h = CostHamiltonian::build(code, &y)?;
        Ok(optimize_levels(&h, level, config)?
            .pop()
            .expect("non-empty")
            .best_angles)
    }
}

pub fn bsc_record(code_name: &str, config: &BscConfig, rows: &[BscRow]) -> ResultRecord {
    let mode = match &config.angles {
        AngleMode::Fixed(a) => format!(
            "fixed(gammas={};betas={})",
            join_angles(a.gammas()),
            join_angles(a.betas())
        ),
        AngleMode::PerFrame { level, .. } => format!("per-frame(level={level})"),
    };
    let mut rec = ResultRecord::new(
        "bsc",
        &[
            "epsilon",
            "decoder",
            "frames",
            "frame_errors",
            "fer",
            "fer_ci_low",
            "fer_ci_high",
            "bit_errors",
            "ber",
            "shots",
            "seed",
        ],
    )
    .param("code", code_name)
    .param("angles", mode)
    .param("seed", config.seed)
    .param("rng", RNG_ALGORITHM);
    for r in rows {
        let (lo, hi) = wilson_interval(r.frame_errors, r.frames);
        rec.push_row(vec![
            format!("{}", r.epsilon),
            r.decoder.name().to_string(),
            r.frames.to_string(),
            r.frame_errors.to_string(),
            fmt_f(r.fer()),
            fmt_f(lo),
            fmt_f(hi),
            r.bit_errors.to_string(),
            fmt_f(r.ber()),
            r.shots.to_string(),
            config.seed.to_string(),
        ]);
    }
    rec
}
