//! Monte Carlo estimators under μ_α, μ̂_α and the Markov chains P(a, b).
//!
//! Every window gets its own ChaCha stream (seed, window index). Windows are
//! evaluated in parallel and collected in index order, so results do not
//! depend on the number of workers.

mod observable;
mod sampler;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use observable::{Evaluator, Observable};
pub use sampler::{
    glue, markov_chain, sample_excursion, uniform_with_content, ExcursionSampler, Window,
    DEFAULT_MAX_DELTA,
};

use crate::config::BallConfig;
use crate::dynamics::evolve;
use crate::error::{BbsError, Result};
use crate::measures::{AlphaParams, AB};
use crate::seat::{Capacity, SeatProfile};
use crate::skip::skip;

/// Sites discarded on each side of a Markov window before measuring.
pub const MARKOV_MARGIN: i64 = 256;
/// Excursions kept beyond the measured interior on each side of a glued window.
pub const GLUE_MARGIN: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Model {
    /// μ_α from glued ν_α excursions; the interior is [−(per_side − GLUE_MARGIN), per_side − GLUE_MARGIN].
    ExcursionGlue {
        alpha: AlphaParams,
        per_side: usize,
        cap: usize,
    },
    /// The stationary P(a, b) chain; the interior is [0, length).
    MarkovChain { ab: AB, length: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSpec {
    pub model: Model,
    pub seed: u64,
}

impl SampleSpec {
    pub fn markov(ab: AB, length: usize, seed: u64) -> Self {
        SampleSpec {
            model: Model::MarkovChain { ab, length },
            seed,
        }
    }

    pub fn glue(alpha: AlphaParams, per_side: usize, cap: usize, seed: u64) -> Self {
        SampleSpec {
            model: Model::ExcursionGlue {
                alpha,
                per_side,
                cap,
            },
            seed,
        }
    }

    /// The Markov sampler when α is a geometric pair, glued excursions otherwise.
    pub fn for_alpha(alpha: &AlphaParams, size: usize, seed: u64) -> Self {
        if let Some((a, b)) = alpha.tail {
            if alpha.head.is_empty() && a > 0.0 {
                if let Ok(ab) = AB::new(a, b) {
                    return SampleSpec::markov(ab, size, seed);
                }
            }
        }
        SampleSpec::glue(alpha.clone(), size / 2 + GLUE_MARGIN, glue_cap(alpha), seed)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SampleSpec {
            model: self.model.clone(),
            seed,
        }
    }
}

/// Length caps tried in turn when gluing.
pub const GLUE_CAPS: [usize; 4] = [41, 61, 81, 101];

/// The smallest cap in [`GLUE_CAPS`] whose truncated mass is below [`DEFAULT_MAX_DELTA`].
pub fn glue_cap(alpha: &AlphaParams) -> usize {
    GLUE_CAPS
        .into_iter()
        .find(|&c| ExcursionSampler::new(alpha, c, DEFAULT_MAX_DELTA).is_ok())
        .unwrap_or(GLUE_CAPS[GLUE_CAPS.len() - 1])
}

/// Builds the per-window sampling state once per run.
enum Source {
    Glue(ExcursionSampler, usize),
    Markov(AB, usize),
}

impl Source {
    fn new(model: &Model) -> Result<Self> {
        match model {
            Model::ExcursionGlue {
                alpha,
                per_side,
                cap,
            } => {
                if *per_side <= GLUE_MARGIN {
                    return Err(BbsError::Window(format!(
                        "{per_side} excursions per side leave no interior beyond the margin of {GLUE_MARGIN}"
                    )));
                }
                Ok(Source::Glue(
                    ExcursionSampler::new(alpha, *cap, DEFAULT_MAX_DELTA)?,
                    *per_side,
                ))
            }
            Model::MarkovChain { ab, length } => {
                if *length == 0 {
                    return Err(BbsError::Window(
                        "Markov windows need a positive length".into(),
                    ));
                }
                Ok(Source::Markov(*ab, *length))
            }
        }
    }

    fn window(&self, rng: &mut ChaCha8Rng) -> Window {
        match self {
            Source::Glue(s, m) => {
                let (cfg, _) = glue(s, *m, *m, true, rng);
                let l = (*m - GLUE_MARGIN) as i64;
                Window { cfg, lo: -l, hi: l }
            }
            Source::Markov(ab, n) => {
                let hi = *n as i64 - 1;
                let cfg = markov_chain(ab, -MARKOV_MARGIN, hi + MARKOV_MARGIN, rng);
                Window { cfg, lo: 0, hi }
            }
        }
    }
}

pub(crate) fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `f` on windows 0..n with one RNG stream each, in a pool of `workers` threads.
pub fn run_indexed<T, F>(n: usize, seed: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| BbsError::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(seed, i as u64);
                f(i, &mut rng)
            })
            .collect::<Vec<Result<T>>>()
    })
    .into_iter()
    .collect()
}

/// Applies `f` to `n` sampled windows.
pub fn run_windows<T, F>(spec: &SampleSpec, n: usize, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Window) -> Result<T> + Sync,
{
    let src = Source::new(&spec.model)?;
    run_indexed(n, spec.seed, workers, |_, rng| f(&src.window(rng)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub estimate: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub target: Option<f64>,
    pub z_score: Option<f64>,
}

impl EstimateReport {
    /// Mean and standard error of i.i.d. values.
    pub fn from_values(v: &[f64]) -> Self {
        let n = v.len();
        let mean = v.iter().sum::<f64>() / n.max(1) as f64;
        let stderr = if n >= 2 {
            let ss: f64 = v.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        EstimateReport {
            estimate: mean,
            stderr,
            n_samples: n,
            target: None,
            z_score: None,
        }
    }

    pub fn exact(value: f64) -> Self {
        EstimateReport {
            estimate: value,
            stderr: 0.0,
            n_samples: 0,
            target: None,
            z_score: None,
        }
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target = Some(target);
        self.z_score = Some(z_score(self.estimate - target, self.stderr));
        self
    }

    /// |z| ≤ sigmas; an estimate without a target passes.
    pub fn within(&self, sigmas: f64) -> bool {
        self.z_score.map_or(true, |z| z.abs() <= sigmas)
    }
}

/// d / s, with 0 for an exact zero difference and ±∞ for a nonzero one without spread.
pub fn z_score(d: f64, s: f64) -> f64 {
    if s > 0.0 {
        d / s
    } else if d == 0.0 {
        0.0
    } else {
        d.signum() * f64::INFINITY
    }
}

/// z for the difference of two independent estimates.
pub fn two_sample_z(a: &EstimateReport, b: &EstimateReport) -> f64 {
    z_score(
        a.estimate - b.estimate,
        (a.stderr * a.stderr + b.stderr * b.stderr).sqrt(),
    )
}

fn check_reach(spec: &SampleSpec, obs: &[Observable]) -> Result<()> {
    let margin = match spec.model {
        Model::ExcursionGlue { .. } => GLUE_MARGIN as i64,
        Model::MarkovChain { .. } => MARKOV_MARGIN,
    };
    for o in obs {
        if o.reach() + 2 >= margin {
            return Err(BbsError::Window(format!(
                "observable {o} reaches beyond the window margin of {margin}"
            )));
        }
    }
    Ok(())
}

/// Spatial means of each observable over every window interior.
pub fn window_means(
    spec: &SampleSpec,
    obs: &[Observable],
    n: usize,
    workers: usize,
) -> Result<Vec<Vec<f64>>> {
    check_reach(spec, obs)?;
    run_windows(spec, n, workers, |w| {
        let ev = Evaluator::new(&w.cfg, obs);
        let count = (w.hi - w.lo + 1) as f64;
        Ok(obs
            .iter()
            .map(|o| (w.lo..=w.hi).map(|x| ev.eval(o, x)).sum::<f64>() / count)
            .collect())
    })
}

fn column(rows: &[Vec<f64>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j]).collect()
}

/// E[f] under the sampled measure from `n` windows.
pub fn estimate_functional(
    spec: &SampleSpec,
    f: &Observable,
    n: usize,
    workers: usize,
) -> Result<EstimateReport> {
    Ok(estimate_many(spec, std::slice::from_ref(f), n, workers)?.remove(0))
}

/// Several observables on the same samples.
pub fn estimate_many(
    spec: &SampleSpec,
    obs: &[Observable],
    n: usize,
    workers: usize,
) -> Result<Vec<EstimateReport>> {
    if n < 2 {
        return Err(BbsError::Window(
            "at least two windows are needed for an error estimate".into(),
        ));
    }
    let rows = window_means(spec, obs, n, workers)?;
    Ok((0..obs.len())
        .map(|j| EstimateReport::from_values(&column(&rows, j)))
        .collect())
}

/// Empirical transitions of Ψ_k(η) against P(a_k, b_k).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkipMarkovReport {
    pub k: u32,
    pub target: AB,
    pub counts: [[u64; 2]; 2],
    /// Entry (i, j) estimates p(i, j). Rows of states the target chain never
    /// visits (a_k = 0 and i = 1) are `None` and must have no transitions.
    pub entries: [[Option<EstimateReport>; 2]; 2],
}

impl SkipMarkovReport {
    pub fn passed(&self, sigmas: f64) -> bool {
        (0..2).all(|i| match &self.entries[i] {
            [Some(a), Some(b)] => a.within(sigmas) && b.within(sigmas),
            _ => self.counts[i] == [0, 0],
        })
    }
}

/// Sites per window used by [`verify_skip_markov`].
pub const SKIP_MARKOV_WINDOW: usize = 50_000;

/// Samples a P(a, b) chain of about `n_sites` sites, re-anchors each window at a
/// record, applies Ψ_k and tabulates transitions between consecutive k-markers.
pub fn verify_skip_markov(
    ab: &AB,
    k: u32,
    n_sites: usize,
    seed: u64,
    workers: usize,
) -> Result<SkipMarkovReport> {
    if k == 0 {
        return Err(BbsError::Domain("k must be at least 1".into()));
    }
    let per = SKIP_MARKOV_WINDOW.min(n_sites.max(1));
    let windows = n_sites.div_ceil(per);
    let margin = MARKOV_MARGIN + 20 * k as i64;
    let counts = run_indexed(windows, seed, workers, |_, rng| {
        let cfg = markov_chain(ab, -margin, per as i64 - 1 + margin, rng);
        let prof = SeatProfile::new(&cfg);
        let start = (0..per as i64).find(|&x| prof.is_record(x));
        let end = (0..per as i64).rev().find(|&x| prof.is_record(x));
        let mut c = [[0u64; 2]; 2];
        if let (Some(r), Some(e)) = (start, end) {
            let slots = prof.slots(Capacity::Finite(k));
            let m = slots.markers();
            let from = m.partition_point(|&x| x < r);
            let to = m.partition_point(|&x| x <= e);
            for w in m[from..to].windows(2) {
                c[prof.eta(w[0]) as usize][prof.eta(w[1]) as usize] += 1;
            }
        }
        Ok(c)
    })?;
    let mut total = [[0u64; 2]; 2];
    for c in &counts {
        for i in 0..2 {
            for j in 0..2 {
                total[i][j] += c[i][j];
            }
        }
    }
    let target = ab.shift(k as usize);
    let p = target.matrix();
    let entry = |i: usize, j: usize| -> Result<Option<EstimateReport>> {
        let ni = total[i][0] + total[i][1];
        if i == 1 && target.a == 0.0 {
            return Ok(None);
        }
        if ni < 10 {
            return Err(BbsError::Window(format!(
                "only {ni} transitions out of state {i} after skipping"
            )));
        }
        let est = total[i][j] as f64 / ni as f64;
        let se = (est * (1.0 - est) / ni as f64).sqrt();
        Ok(Some(
            EstimateReport {
                estimate: est,
                stderr: se,
                n_samples: ni as usize,
                target: None,
                z_score: None,
            }
            .with_target(p[i][j]),
        ))
    };
    let entries = [[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]];
    Ok(SkipMarkovReport {
        k,
        target,
        counts: total,
        entries,
    })
}

/// A pattern's frequency compared before and after T, and at two offsets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceCheck {
    pub pattern: String,
    pub frequency: EstimateReport,
    /// Frequency in Tη minus frequency in η, per window.
    pub time: EstimateReport,
    /// Frequency at offset 7 minus frequency at offset 0, per window.
    pub shift: EstimateReport,
}

pub const SHIFT_OFFSET: i64 = 7;

/// All 0/1 patterns of length 1..=max_len in lexicographic order within each length.
pub fn patterns(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for m in 0..(1u32 << len) {
            out.push((0..len).map(|j| ((m >> (len - 1 - j)) & 1) as u8).collect());
        }
    }
    out
}

fn pattern_freq(cfg: &BallConfig, p: &[u8], lo: i64, hi: i64) -> f64 {
    let hits = (lo..=hi)
        .filter(|&x| {
            p.iter()
                .enumerate()
                .all(|(j, &b)| cfg.get(x + j as i64) == b)
        })
        .count();
    hits as f64 / (hi - lo + 1) as f64
}

/// Paired tests of T-invariance and shift-invariance for patterns of length ≤ 3.
pub fn verify_invariance(
    spec: &SampleSpec,
    n: usize,
    workers: usize,
) -> Result<Vec<InvarianceCheck>> {
    let pats = patterns(3);
    let rows = run_windows(spec, n, workers, |w| {
        let t = evolve(&w.cfg, Capacity::Infinite);
        Ok(pats
            .iter()
            .map(|p| {
                let base = pattern_freq(&w.cfg, p, w.lo, w.hi);
                let after = pattern_freq(&t, p, w.lo, w.hi);
                let moved = pattern_freq(&w.cfg, p, w.lo + SHIFT_OFFSET, w.hi + SHIFT_OFFSET);
                [base, after - base, moved - base]
            })
            .collect::<Vec<_>>())
    })?;
    Ok(pats
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let col = |c: usize| rows.iter().map(|r| r[j][c]).collect::<Vec<f64>>();
            InvarianceCheck {
                pattern: p.iter().map(|b| char::from(b'0' + b)).collect(),
                frequency: EstimateReport::from_values(&col(0)),
                time: EstimateReport::from_values(&col(1)).with_target(0.0),
                shift: EstimateReport::from_values(&col(2)).with_target(0.0),
            }
        })
        .collect())
}

/// The ε̄ values entering the skip statistics at level k.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkipCoefficients {
    /// ε̄(α), ε̄(θ^k α), ε̄(θ^{k+1} α), ε̄(C_k α).
    pub e_alpha: f64,
    pub e_theta_k: f64,
    pub e_theta_k1: f64,
    pub e_cut_k: f64,
}

impl SkipCoefficients {
    pub fn new(alpha: &AlphaParams, k: u32) -> Result<Self> {
        let k = k as usize;
        let c = SkipCoefficients {
            e_alpha: alpha.mean_length()?,
            e_theta_k: alpha.theta_n(k)?.mean_length()?,
            e_theta_k1: alpha.theta_n(k + 1)?.mean_length()?,
            e_cut_k: alpha.cutoff(k).mean_length()?,
        };
        if c.e_theta_k - c.e_theta_k1 == 0.0 {
            return Err(BbsError::Degenerate(format!(
                "ε̄(θ^{k}α) = ε̄(θ^{}α): θ^{k}α has no solitons of size ≥ 1 to skip, so the seat-event term is undefined",
                k + 1
            )));
        }
        Ok(c)
    }

    /// Weights of E_{θ^kα}[f] and E_{θ^kα}[(η↑_1(1) + η↓_1(1)) f].
    pub fn unconditioned(&self) -> (f64, f64) {
        let (e0, ek, ek1, ck) = (self.e_alpha, self.e_theta_k, self.e_theta_k1, self.e_cut_k);
        (ek * ck / e0, ek * (e0 - ek * ck) / (e0 * (ek - ek1)))
    }

    /// Weights of E[f], E[η(0) f], E[η↑_1(1) f], E[η↓_1(1) f] under θ^kα in the η(0)-conditioned form.
    pub fn conditioned(&self, k: u32) -> [f64; 4] {
        let (e0, ek, ek1, ck) = (self.e_alpha, self.e_theta_k, self.e_theta_k1, self.e_cut_k);
        let kf = k as f64;
        let d = 2.0 * e0 * (ek - ek1);
        [
            ek * (ck - 1.0) / (2.0 * e0),
            ek / e0,
            ek * (e0 - ek * ck + kf) / d,
            ek * (e0 - ek * ck - kf) / d,
        ]
    }
}

/// Both sides of the skip identity for one observable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkipStatReport {
    pub k: u32,
    pub observable: String,
    pub coefficients: SkipCoefficients,
    /// E_α[f(Ψ_k η)] by Monte Carlo.
    pub lhs: EstimateReport,
    /// The right-hand side assembled from Monte Carlo under θ^k α.
    pub rhs: EstimateReport,
    pub z: f64,
}

/// Compares E_α[f(Ψ_k η)] with its expression through μ_{θ^k α}.
///
/// `conditioned` multiplies the left side by η(0) and uses the four-term form.
pub fn verify_skip_stat(
    alpha: &AlphaParams,
    k: u32,
    f: &Observable,
    conditioned: bool,
    size: usize,
    n: usize,
    seed: u64,
    workers: usize,
) -> Result<SkipStatReport> {
    let coef = SkipCoefficients::new(alpha, k)?;
    let skipped = Observable::Skip(k, Box::new(f.clone()));
    let lhs_obs = if conditioned {
        Observable::Product(vec![Observable::Eta(0), skipped])
    } else {
        skipped
    };
    let lhs = estimate_functional(
        &SampleSpec::for_alpha(alpha, size, seed),
        &lhs_obs,
        n,
        workers,
    )?;
    let shifted = alpha.theta_n(k as usize)?;
    let spec = SampleSpec::for_alpha(&shifted, size, seed ^ 0x9e37_79b9_7f4a_7c15);
    let with = |o: Observable| Observable::Product(vec![o, f.clone()]);
    let (obs, weights): (Vec<Observable>, Vec<f64>) = if conditioned {
        let w = coef.conditioned(k);
        (
            vec![
                f.clone(),
                with(Observable::Eta(0)),
                with(Observable::Up(1, 1)),
                with(Observable::Down(1, 1)),
            ],
            w.to_vec(),
        )
    } else {
        let (a, b) = coef.unconditioned();
        (vec![f.clone(), with(Observable::UpDown(1, 1))], vec![a, b])
    };
    let rows = window_means(&spec, &obs, n, workers)?;
    let combined: Vec<f64> = rows
        .iter()
        .map(|r| r.iter().zip(&weights).map(|(x, w)| x * w).sum())
        .collect();
    let rhs = EstimateReport::from_values(&combined);
    let z = two_sample_z(&lhs, &rhs);
    Ok(SkipStatReport {
        k,
        observable: lhs_obs.to_string(),
        coefficients: coef,
        lhs,
        rhs,
        z,
    })
}

/// E_α[𝒲_k(0)] = (ε̄(α) − ε̄(C_{k−1} α)) / (2 ε̄(α)).
pub fn seat_load_mean(alpha: &AlphaParams, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(BbsError::Domain("seat numbers start at 1".into()));
    }
    let e = alpha.mean_length()?;
    Ok((e - alpha.cutoff(k as usize - 1).mean_length()?) / (2.0 * e))
}

/// E_α[𝒲_k(0) 𝒲_ℓ(0)] for k < ℓ as displayed in the correlation statement.
pub fn seat_correlation_formula(alpha: &AlphaParams, k: u32, l: u32) -> Result<f64> {
    if k == 0 || l <= k {
        return Err(BbsError::Domain("needs 1 ≤ k < ℓ".into()));
    }
    let (k, l) = (k as usize, l as usize);
    let e = alpha.mean_length()?;
    let tk1 = alpha.theta_n(k - 1)?;
    let e_tk1 = tk1.mean_length()?;
    let e_tk = alpha.theta_n(k)?.mean_length()?;
    let e_tl1 = alpha.theta_n(l - 1)?.mean_length()?;
    let e_ck1 = alpha.cutoff(k - 1).mean_length()?;
    let e_c_lk = tk1.cutoff(l - k).mean_length()?;
    let e_c_lk1 = alpha.theta_n(k)?.cutoff(l - k - 1).mean_length()?;
    if e_tk1 == e_tk {
        return Err(BbsError::Degenerate("ε̄(θ^{k−1}α) = ε̄(θ^kα)".into()));
    }
    let first = e_ck1 * (e_tk1 - e_tl1 + e_c_lk + (l - k + 1) as f64) / (4.0 * e);
    let second = (e - e_tk1 * e_ck1) * (e_c_lk - e_c_lk1) / (2.0 * e * (e_tk1 - e_tk));
    Ok(0.5 - first - second)
}

/// E_β[η↑_1(1)] = E_β[η↓_1(1)] = (ε̄(β) − ε̄(θβ)) / (2 ε̄(β)).
pub fn seat_event_mean(beta: &AlphaParams) -> Result<f64> {
    let e = beta.mean_length()?;
    Ok((e - beta.theta()?.mean_length()?) / (2.0 * e))
}

/// Law of (Ψ_k η(1), Ψ_k η(2)) under μ̂_α against (η(1), η(2)) under μ̂_{θ^k α}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchoredLawCheck {
    pub pattern: String,
    pub skipped: EstimateReport,
    pub shifted: EstimateReport,
    pub z: f64,
}

pub fn verify_anchored_law(
    alpha: &AlphaParams,
    k: u32,
    n: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<AnchoredLawCheck>> {
    let right = 6;
    let shifted = alpha.theta_n(k as usize)?;
    let s_alpha = ExcursionSampler::new(alpha, glue_cap(alpha), DEFAULT_MAX_DELTA)?;
    let s_theta = ExcursionSampler::new(&shifted, glue_cap(&shifted), DEFAULT_MAX_DELTA)?;
    let pair = |cfg: &BallConfig| -> usize { (cfg.get(1) * 2 + cfg.get(2)) as usize };
    let lhs = run_indexed(n, seed, workers, |_, rng| {
        let (cfg, _) = glue(&s_alpha, 0, right, false, rng);
        Ok(pair(&skip(&cfg, k)?))
    })?;
    let rhs = run_indexed(n, seed ^ 0x5851_f42d_4c95_7f2d, workers, |_, rng| {
        let (cfg, _) = glue(&s_theta, 0, right, false, rng);
        Ok(pair(&cfg))
    })?;
    Ok((0..4)
        .map(|p| {
            let ind = |v: &[usize]| {
                v.iter()
                    .map(|&x| (x == p) as u8 as f64)
                    .collect::<Vec<f64>>()
            };
            let a = EstimateReport::from_values(&ind(&lhs));
            let b = EstimateReport::from_values(&ind(&rhs));
            let z = two_sample_z(&a, &b);
            AnchoredLawCheck {
                pattern: format!("{}{}", p >> 1, p & 1),
                skipped: a,
                shifted: b,
                z,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_windows() {
        let spec = SampleSpec::glue(AlphaParams::zero(), 20, 11, 1);
        let r = estimate_functional(&spec, &Observable::Eta(0), 4, 2).unwrap();
        assert_eq!((r.estimate, r.stderr), (0.0, 0.0));
        for c in verify_invariance(&spec, 3, 1).unwrap() {
            assert_eq!(c.time.estimate, 0.0);
            assert_eq!(c.time.z_score, Some(0.0));
        }
    }

    #[test]
    fn worker_count_does_not_matter() {
        let spec = SampleSpec::markov(AB::new(0.2, 0.1).unwrap(), 500, 9);
        let obs: Vec<Observable> = vec![
            "wseat:2".parse().unwrap(),
            "skip:1:pattern:01".parse().unwrap(),
        ];
        let a = estimate_many(&spec, &obs, 8, 1).unwrap();
        let b = estimate_many(&spec, &obs, 8, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn normalization_is_exact() {
        let alpha = AlphaParams::geometric(0.05, 0.05).unwrap();
        for k in 1..=3 {
            let c = SkipCoefficients::new(&alpha, k).unwrap();
            let (a, b) = c.unconditioned();
            let shifted = alpha.theta_n(k as usize).unwrap();
            let ev = 2.0 * seat_event_mean(&shifted).unwrap();
            assert!((a + b * ev - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_coefficients() {
        let alpha = AlphaParams::finite(vec![0.1]).unwrap();
        assert!(matches!(
            SkipCoefficients::new(&alpha, 1),
            Err(BbsError::Degenerate(_))
        ));
    }

    #[test]
    fn short_glue_window_is_refused() {
        let spec = SampleSpec::glue(AlphaParams::zero(), GLUE_MARGIN, 11, 1);
        assert!(matches!(
            estimate_functional(&spec, &Observable::Eta(0), 2, 1),
            Err(BbsError::Window(_))
        ));
    }
}
