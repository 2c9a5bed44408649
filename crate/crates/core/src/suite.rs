//! Named verification suites: exhaustive sweeps over small configurations and
//! seeded Monte Carlo checks, each reported as a list of named checks.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{parse_config, BallConfig, Boundary};
use crate::dynamics::{evolve, offset_o_with, verify_linearization, OffsetForm};
use crate::elimination::{eliminate_k, elimination_rows};
use crate::error::{BbsError, Result};
use crate::measures::{
    alpha_q_convert, contents_of_weight, enumerate_excursions, fermionic_count_dense,
    mean_length_cf, partition_and_mean, pushforward_gap, pushforward_gap_q, AlphaParams, Excursion,
    Params, QParams, AB,
};
use crate::seat::{reconstruct_from_zeta, zeta_of, Capacity, SeatEvent, SeatProfile, ZetaMatrix};
use crate::skip::{skip, skip_profile};
use crate::stat::{
    estimate_many, rng_for, run_indexed, run_windows, seat_correlation_formula, seat_event_mean,
    seat_load_mean, two_sample_z, verify_anchored_law, verify_invariance, verify_skip_markov,
    verify_skip_stat, EstimateReport, Evaluator, ExcursionSampler, Observable, SampleSpec,
    SkipCoefficients,
};
use crate::ts::ts_decompose;

pub const SUITES: &[&str] = &[
    "reference",
    "ten",
    "linearization",
    "skip-algebra",
    "bijection",
    "fermionic",
    "measures",
    "skip-markov",
    "carrier",
    "invariance",
    "skip-stat",
];

/// Gate for every statistical comparison.
pub const SIGMAS: f64 = 4.0;

pub const REFERENCE_CONFIG: &str = "011001110101100010";
pub const REFERENCE_EXCURSION: &str = "0110011101011000100";

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub workers: usize,
    /// Overrides the support length of exhaustive sweeps.
    pub max_len: Option<usize>,
    /// Multiplies every Monte Carlo sample size.
    pub scale: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 1,
            workers: 1,
            max_len: None,
            scale: 1.0,
        }
    }
}

impl SuiteOptions {
    fn len(&self, default: usize) -> usize {
        self.max_len.unwrap_or(default)
    }

    fn n(&self, default: usize) -> usize {
        ((default as f64 * self.scale).round() as usize).max(2)
    }

    fn seed_for(&self, tag: u64) -> u64 {
        self.seed
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(tag)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

fn check(name: &str, passed: bool, detail: impl Serialize) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail: serde_json::to_value(detail).unwrap_or(Value::Null),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    let checks = match name {
        "reference" => reference()?,
        "ten" => ten(opts)?,
        "linearization" => linearization(opts)?,
        "skip-algebra" => skip_algebra(opts)?,
        "bijection" => bijection(opts)?,
        "fermionic" => fermionic(opts)?,
        "measures" => measures(opts)?,
        "skip-markov" => skip_markov(opts)?,
        "carrier" => carrier(opts)?,
        "invariance" => invariance(opts)?,
        "skip-stat" => skip_stat(opts)?,
        other => {
            return Err(BbsError::Config(format!(
                "unknown suite {other:?}; known: {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteReport {
        schema: 1,
        suite: name.to_string(),
        seed: opts.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// Outcome of an exhaustive or randomized sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl Sweep {
    fn ok(&self) -> bool {
        self.failures == 0
    }
}

fn sweep<F>(n: u64, workers: usize, f: F) -> Result<Sweep>
where
    F: Fn(u64) -> Result<Option<String>> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| BbsError::Config(format!("thread pool: {e}")))?;
    let out: Vec<Option<String>> =
        pool.install(|| (0..n).into_par_iter().map(&f).collect::<Result<Vec<_>>>())?;
    let failures = out.iter().filter(|o| o.is_some()).count() as u64;
    Ok(Sweep {
        cases: n,
        failures,
        first_failure: out.into_iter().flatten().next(),
    })
}

/// Configuration with balls where `mask` has ones, bit j at site `first + j`.
fn from_mask(mask: u64, len: usize, first: i64, boundary: Boundary) -> BallConfig {
    let sites: Vec<i64> = (0..len)
        .filter(|j| mask >> j & 1 == 1)
        .map(|j| first + j as i64)
        .collect();
    BallConfig::from_sites(&sites, boundary).expect("sites lie in the allowed region")
}

/// First site of the exhaustive window: 1 on the half line, centred on the whole line.
fn window_start(len: usize, boundary: Boundary) -> i64 {
    match boundary {
        Boundary::HalfLine => 1,
        Boundary::WholeLine => -(len as i64 / 2),
    }
}

fn exhaustive<F>(len: usize, boundary: Boundary, workers: usize, f: F) -> Result<Sweep>
where
    F: Fn(&BallConfig) -> Result<Option<String>> + Sync,
{
    let first = window_start(len, boundary);
    sweep(1u64 << len, workers, |m| {
        f(&from_mask(m, len, first, boundary))
    })
}

fn fail_if(bad: bool, msg: impl FnOnce() -> String) -> Option<String> {
    bad.then(msg)
}

fn show(cfg: &BallConfig) -> String {
    let c = cfg.canonical();
    format!("{}@{}", c.bit_string(), c.origin())
}

// ---------------------------------------------------------------- reference

fn reference() -> Result<Vec<Check>> {
    let cfg = parse_config(REFERENCE_CONFIG, Boundary::HalfLine)?;
    let want_rows = ["010111000", "01100", "010", "0"];
    let rows = elimination_rows(&cfg, 4)?;
    let skips: Vec<String> = (1..=4)
        .map(|k| skip(&cfg, k).map(|c| c.bit_string()))
        .collect::<Result<_>>()?;
    let mut out = vec![check(
        "reference elimination rows",
        rows == want_rows && skips == want_rows,
        json!({ "elimination": rows, "skip": skips, "expected": want_rows }),
    )];

    let (_, rig) = eliminate_k(&cfg, 4)?;
    let want: BTreeMap<(u32, i64), u32> =
        [((1, 4), 2), ((1, 5), 1), ((2, 0), 1), ((4, 0), 1)].into();
    let got = rig.entries().clone();
    let as_list =
        |m: &BTreeMap<(u32, i64), u32>| m.iter().map(|(&(k, i), &c)| (k, i, c)).collect::<Vec<_>>();
    out.push(check(
        "reference riggings",
        got == want,
        json!({ "computed": as_list(&got), "expected": as_list(&want), "zeta": zeta_of(&cfg) }),
    ));

    let eps = Excursion::parse(REFERENCE_EXCURSION)?;
    let ts = ts_decompose(&eps.embed());
    let mut sizes = ts.sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    out.push(check(
        "reference excursion soliton sizes",
        sizes == [4, 2, 1, 1, 1],
        json!({ "sizes": sizes, "expected": [4, 2, 1, 1, 1] }),
    ));
    Ok(out)
}

// ---------------------------------------------------------------- ten

fn ten(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let len = opts.len(15);
    let kmax = 5;
    let s = exhaustive(len, Boundary::HalfLine, opts.workers, |cfg| {
        let (_, rig) = eliminate_k(cfg, kmax)?;
        let zeta = zeta_of(cfg);
        let mut word = cfg.clone();
        for k in 1..=kmax {
            word = eliminate_k(&word, 1)?.0;
            let psi = skip(cfg, k)?;
            if word != psi {
                return Ok(Some(format!(
                    "{}: Φ_{k} = {} but Ψ_{k} = {}",
                    show(cfg),
                    show(&word),
                    show(&psi)
                )));
            }
        }
        let z: BTreeMap<_, _> = zeta
            .entries()
            .iter()
            .filter(|(&(k, _), _)| k <= kmax)
            .map(|(a, b)| (*a, *b))
            .collect();
        Ok(fail_if(rig.entries() != &z, || {
            format!("{}: riggings differ from ζ", show(cfg))
        }))
    })?;
    Ok(vec![check(
        "elimination equals skip with matching riggings",
        s.ok(),
        json!({ "support": len, "k_max": kmax, "sweep": s }),
    )])
}

// ---------------------------------------------------------------- linearization

const CAPS: [Capacity; 3] = [Capacity::Finite(1), Capacity::Finite(2), Capacity::Infinite];

fn random_whole(rng: &mut impl Rng, max_len: usize) -> BallConfig {
    let len = rng.gen_range(1..=max_len);
    let origin = rng.gen_range(-(max_len as i64)..=4);
    let bits: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2u8)).collect();
    BallConfig::new(origin, bits, Boundary::WholeLine).expect("0/1 bits")
}

fn linearization(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let len = opts.len(12);
    let half = exhaustive(len, Boundary::HalfLine, opts.workers, |cfg| {
        for cap in CAPS {
            for k in 1..=4 {
                let r = verify_linearization(cfg, cap, k)?;
                if !r.ok {
                    return Ok(Some(format!(
                        "{} ℓ={cap} k={k}: {:?}",
                        show(cfg),
                        r.mismatches[0]
                    )));
                }
            }
        }
        Ok(None)
    })?;
    let n = opts.n(10_000) as u64;
    let seed = opts.seed_for(4);
    let whole = sweep(n, opts.workers, |i| {
        let cfg = random_whole(&mut rng_for(seed, i), 24);
        for k in 1..=5 {
            let forms = [OffsetForm::SeatSums, OffsetForm::Before, OffsetForm::After]
                .map(|f| offset_o_with(&cfg, k, f));
            let [a, b, c] = [&forms[0], &forms[1], &forms[2]].map(|r| r.as_ref().ok().copied());
            if a.is_none() || a != b || a != c {
                return Ok(Some(format!(
                    "{} k={k}: offsets {a:?} {b:?} {c:?}",
                    show(&cfg)
                )));
            }
            let r = verify_linearization(&cfg, Capacity::Infinite, k)?;
            if !r.ok {
                return Ok(Some(format!("{} k={k}: {:?}", show(&cfg), r.mismatches[0])));
            }
        }
        Ok(None)
    })?;
    Ok(vec![
        check(
            "half-line linearization",
            half.ok(),
            json!({ "support": len, "capacities": ["1", "2", "inf"], "k_max": 4, "sweep": half }),
        ),
        check(
            "whole-line offsets and linearization",
            whole.ok(),
            json!({ "k_max": 5, "sweep": whole }),
        ),
    ])
}

// ---------------------------------------------------------------- skip algebra

/// Seat events of Ψ_k(η) at y against those of η at the matching slot site.
fn seat_shift_failure(cfg: &BallConfig, k: u32) -> Option<String> {
    let prof = SeatProfile::new(cfg);
    let (out, slots) = skip_profile(&prof, k);
    let xi0 = slots.xi(0);
    let oprof = SeatProfile::new(&out);
    for y in oprof.sites() {
        let src = slots.s(y + xi0);
        let want = prof.event(src).lowered(k);
        if want != Some(oprof.event(y)) {
            return Some(format!(
                "{} k={k} y={y}: {:?} vs {:?}",
                show(cfg),
                oprof.event(y),
                want
            ));
        }
    }
    None
}

/// η↓_k(x) = (Tη)↑_k(x), and η↑_k(x) = 1 forces a record or a seat ≥ k down-event of Tη at x.
fn flip_failure(cfg: &BallConfig) -> Option<String> {
    let p = SeatProfile::new(cfg);
    let t = evolve(cfg, Capacity::Infinite);
    let q = SeatProfile::new(&t);
    let lo = p.lo().min(q.lo());
    let hi = p.hi().max(q.hi());
    for x in lo..=hi {
        match p.event(x) {
            SeatEvent::Down(k) if q.event(x) != SeatEvent::Up(k) => {
                return Some(format!(
                    "{} x={x}: down {k} before, {:?} after",
                    show(cfg),
                    q.event(x)
                ))
            }
            SeatEvent::Up(k) => {
                let ok = match q.event(x) {
                    SeatEvent::Record => true,
                    SeatEvent::Down(j) => j >= k,
                    SeatEvent::Up(_) => false,
                };
                if !ok {
                    return Some(format!(
                        "{} x={x}: up {k} before, {:?} after",
                        show(cfg),
                        q.event(x)
                    ));
                }
            }
            _ => {}
        }
        if matches!(q.event(x), SeatEvent::Up(_)) && !matches!(p.event(x), SeatEvent::Down(_)) {
            return Some(format!(
                "{} x={x}: up-event after without a down-event before",
                show(cfg)
            ));
        }
    }
    None
}

fn skip_algebra(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let len = opts.len(12);
    let mut out = Vec::new();
    for boundary in [Boundary::HalfLine, Boundary::WholeLine] {
        let tag = match boundary {
            Boundary::HalfLine => "half-line",
            Boundary::WholeLine => "whole-line",
        };
        let semigroup = exhaustive(len, boundary, opts.workers, |cfg| {
            for l in 1..=3 {
                let inner = skip(cfg, l)?;
                for k in 1..=3 {
                    let (a, b) = (skip(&inner, k)?, skip(cfg, k + l)?);
                    if a != b {
                        return Ok(Some(format!(
                            "{} k={k} ℓ={l}: {} vs {}",
                            show(cfg),
                            show(&a),
                            show(&b)
                        )));
                    }
                }
            }
            Ok(None)
        })?;
        out.push(check(
            &format!("{tag} semigroup"),
            semigroup.ok(),
            json!({ "support": len, "sweep": semigroup }),
        ));

        let seats = exhaustive(len, boundary, opts.workers, |cfg| {
            Ok((1..=3).find_map(|k| seat_shift_failure(cfg, k)))
        })?;
        out.push(check(
            &format!("{tag} seat shift"),
            seats.ok(),
            json!({ "support": len, "sweep": seats }),
        ));

        let zeta = exhaustive(len, boundary, opts.workers, |cfg| {
            let z = zeta_of(cfg);
            for l in 1..=3 {
                if zeta_of(&skip(cfg, l)?) != z.drop_levels(l) {
                    return Ok(Some(format!("{} ℓ={l}", show(cfg))));
                }
            }
            Ok(None)
        })?;
        out.push(check(
            &format!("{tag} zeta shift"),
            zeta.ok(),
            json!({ "support": len, "sweep": zeta }),
        ));
    }

    let flip = exhaustive(len, Boundary::HalfLine, opts.workers, |cfg| {
        Ok(flip_failure(cfg))
    })?;
    out.push(check(
        "seat flip under T",
        flip.ok(),
        json!({ "support": len, "sweep": flip }),
    ));

    let commute = exhaustive(len, Boundary::HalfLine, opts.workers, |cfg| {
        let t1 = Capacity::Finite(1);
        for k in 1..=3 {
            let a = skip(&evolve(cfg, t1), k)?;
            let b = evolve(&skip(cfg, k)?, t1);
            if a != b {
                return Ok(Some(format!(
                    "{} k={k}: Ψ_k T_1 = {} but T_1 Ψ_k = {}",
                    show(cfg),
                    show(&a),
                    show(&b)
                )));
            }
            let a = skip(&evolve(cfg, Capacity::Infinite), k)?;
            let b = evolve(
                &skip(&evolve(cfg, Capacity::Finite(k)), k)?,
                Capacity::Infinite,
            );
            if a != b {
                return Ok(Some(format!(
                    "{} k={k}: Ψ_k T = {} but T Ψ_k T_k = {}",
                    show(cfg),
                    show(&a),
                    show(&b)
                )));
            }
        }
        Ok(None)
    })?;
    out.push(check(
        "skip commutation with T_1 and T",
        commute.ok(),
        json!({ "support": len, "sweep": commute }),
    ));

    // As displayed: TΨ_k(η)(x + Σ_{ℓ≤k} r(Ψ_{ℓ−1}(η), 0)) = Ψ_k(Tη)(x).
    let displayed = exhaustive(len, Boundary::WholeLine, opts.workers, |cfg| {
        let rhs_base = evolve(cfg, Capacity::Infinite);
        let mut psi = cfg.clone();
        let mut c = 0i64;
        for k in 1..=3 {
            c += SeatProfile::new(&psi).is_record(0) as i64;
            psi = skip(&psi, 1)?;
            let lhs = evolve(&psi, Capacity::Infinite).shift(c)?;
            let rhs = skip(&rhs_base, k)?;
            if lhs != rhs {
                return Ok(Some(format!(
                    "{} k={k}: TΨ_k(η)(· + {c}) = {} but Ψ_k(Tη) = {}",
                    show(cfg),
                    show(&lhs),
                    show(&rhs)
                )));
            }
        }
        Ok(None)
    })?;
    out.push(check(
        "whole-line relation between T and skip as displayed",
        displayed.ok(),
        json!({ "support": len, "levels": [1, 2, 3], "sweep": displayed }),
    ));

    // k = 1 with the shift on the other side: TΨ_1(η)(x) = Ψ_1(Tη)(x + r(η, 0)).
    let single = exhaustive(len, Boundary::WholeLine, opts.workers, |cfg| {
        let c = SeatProfile::new(cfg).is_record(0) as i64;
        let lhs = evolve(&skip(cfg, 1)?, Capacity::Infinite);
        let rhs = skip(&evolve(cfg, Capacity::Infinite), 1)?.shift(c)?;
        Ok(fail_if(lhs != rhs, || {
            format!(
                "{}: TΨ_1(η) = {} but Ψ_1(Tη)(· + {c}) = {}",
                show(cfg),
                show(&lhs),
                show(&rhs)
            )
        }))
    })?;
    out.push(check(
        "whole-line relation between T and skip for k = 1",
        single.ok(),
        json!({ "support": len, "sweep": single }),
    ));

    // Ψ_k(Tη) = τ_{−d_k} TΨ_k(η) with d_1 = r(η, 0) and
    // d_{k+1} = r(Ψ_k η, 0) + #{1-markers of TΨ_k η in (−d_k, 0]}.
    let iterated = exhaustive(len, Boundary::WholeLine, opts.workers, |cfg| {
        let t = evolve(cfg, Capacity::Infinite);
        let mut psi = cfg.clone();
        let mut d = 0i64;
        for k in 1..=3 {
            let prev = SeatProfile::new(&evolve(&psi, Capacity::Infinite));
            let slots = prev.slots(Capacity::Finite(1));
            let passed = if k == 1 {
                0
            } else {
                slots.xi(0) - slots.xi(-d)
            };
            d = SeatProfile::new(&psi).is_record(0) as i64 + passed;
            psi = skip(&psi, 1)?;
            let lhs = evolve(&psi, Capacity::Infinite).shift(-d)?;
            let rhs = skip(&t, k)?;
            if lhs != rhs {
                return Ok(Some(format!(
                    "{} k={k} d={d}: {} vs {}",
                    show(cfg),
                    show(&lhs),
                    show(&rhs)
                )));
            }
        }
        Ok(None)
    })?;
    out.push(check(
        "whole-line relation between T and skip, iterated shift",
        iterated.ok(),
        json!({ "support": len, "levels": [1, 2, 3], "sweep": iterated }),
    ));
    Ok(out)
}

// ---------------------------------------------------------------- bijection

/// Every ζ matrix with Σ k·ζ_k(i) ≤ `weight` and indices in `idx`.
fn zeta_matrices(weight: u32, idx: &[i64]) -> Vec<ZetaMatrix> {
    let cells: Vec<(u32, i64)> = (1..=weight)
        .flat_map(|k| idx.iter().map(move |&i| (k, i)))
        .collect();
    let mut out = Vec::new();
    fn rec(
        cells: &[(u32, i64)],
        left: u32,
        cur: &mut Vec<((u32, i64), u32)>,
        out: &mut Vec<ZetaMatrix>,
    ) {
        match cells.split_first() {
            None => out.push(ZetaMatrix::from_entries(cur.iter().copied()).expect("k ≥ 1")),
            Some((&(k, i), rest)) => {
                for c in 0..=left / k {
                    if c > 0 {
                        cur.push(((k, i), c));
                    }
                    rec(rest, left - c * k, cur, out);
                    if c > 0 {
                        cur.pop();
                    }
                }
            }
        }
    }
    rec(&cells, weight, &mut Vec::new(), &mut out);
    out
}

fn bijection(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let len = opts.len(14);
    let mut out = Vec::new();
    for (boundary, tag, idx) in [
        (
            Boundary::HalfLine,
            "half-line",
            (0..=6).collect::<Vec<i64>>(),
        ),
        (
            Boundary::WholeLine,
            "whole-line",
            (-4..=4).collect::<Vec<i64>>(),
        ),
    ] {
        // The inverse is stated for configurations with a record at the origin.
        let anchored = AtomicU64::new(0);
        let round = exhaustive(len, boundary, opts.workers, |cfg| {
            if !cfg.classify().record_anchored {
                return Ok(None);
            }
            anchored.fetch_add(1, Ordering::Relaxed);
            let back = reconstruct_from_zeta(&zeta_of(cfg), boundary)?;
            Ok(fail_if(&back != cfg, || {
                format!("{} came back as {}", show(cfg), show(&back))
            }))
        })?;
        out.push(check(
            &format!("{tag} reconstruct inverts zeta"),
            round.ok(),
            json!({ "support": len, "record_anchored": anchored.into_inner(), "sweep": round }),
        ));

        let mats = zeta_matrices(4, &idx);
        let s = sweep(mats.len() as u64, opts.workers, |j| {
            let z = &mats[j as usize];
            let cfg = reconstruct_from_zeta(z, boundary)?;
            let back = zeta_of(&cfg);
            Ok(fail_if(&back != z, || {
                format!(
                    "{:?} gave {} with ζ {:?}",
                    z.entries(),
                    show(&cfg),
                    back.entries()
                )
            }))
        })?;
        out.push(check(
            &format!("{tag} zeta inverts reconstruct"),
            s.ok(),
            json!({ "max_weight": 4, "indices": [idx[0], idx[idx.len() - 1]], "sweep": s }),
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------- fermionic

fn fermionic(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let w = opts.len(6);
    let mut brute: BTreeMap<Vec<u32>, u128> = BTreeMap::new();
    for e in enumerate_excursions(2 * w + 1)? {
        *brute.entry(e.content()).or_insert(0) += 1;
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for m in 0..=w {
        for n in contents_of_weight(m) {
            let f = fermionic_count_dense(&n)?;
            let b = brute.get(&n).copied().unwrap_or(0);
            ok &= f == b;
            rows.push(
                json!({ "content": n, "formula": f.to_string(), "enumerated": b.to_string() }),
            );
        }
    }
    Ok(vec![check(
        "fermionic formula equals enumeration",
        ok,
        json!({ "max_weight": w, "contents": rows }),
    )])
}

// ---------------------------------------------------------------- measures

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn random_alpha(rng: &mut impl Rng) -> Result<AlphaParams> {
    let n = rng.gen_range(1..=5);
    let head: Vec<f64> = (0..n)
        .map(|k| rng.gen_range(0.0..0.12) / (k + 1) as f64)
        .collect();
    AlphaParams::finite(head)
}

fn measures(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let alpha = AlphaParams::geometric(0.05, 0.05)?;
    let cap = 41;
    let base = partition_and_mean(&alpha, cap)?;
    let shifted = partition_and_mean(&alpha.theta()?, cap)?;
    let want_z = base.z * (1.0 - alpha.get(1));
    let e_z = rel(shifted.z, want_z);
    out.push(check(
        "partition function under the shift",
        e_z <= 1e-4,
        json!({ "cap": cap, "z_alpha": base.z, "z_theta_alpha": shifted.z, "z_alpha_times_one_minus_alpha1": want_z, "relative_error": e_z }),
    ));
    let cf = mean_length_cf(&alpha, 40, 1e-10)?;
    let e_cf = rel(cf, base.mean_length);
    out.push(check(
        "mean length by continued fraction and enumeration",
        e_cf <= 1e-4,
        json!({ "cap": cap, "depth": 40, "continued_fraction": cf, "enumerated": base.mean_length, "relative_error": e_cf }),
    ));

    let seed = opts.seed_for(8);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let a = random_alpha(&mut rng_for(seed, i))?;
        if let Params::Q(q) = alpha_q_convert(&Params::Alpha(a.clone()))? {
            if let Params::Alpha(back) = alpha_q_convert(&Params::Q(q.clone()))? {
                for k in 1..=6 {
                    worst = worst.max((back.get(k) - a.get(k)).abs());
                }
            }
            let lhs = q.theta_tilde().to_alpha();
            let rhs = a.theta()?;
            for k in 1..=6 {
                worst = worst.max((lhs.get(k) - rhs.get(k)).abs());
            }
        }
    }
    out.push(check(
        "alpha and q round trip with matching shifts",
        worst <= 1e-12,
        json!({ "cases": 100, "max_abs_error": worst }),
    ));

    let mut worst_ab: f64 = 0.0;
    for i in 0..100 {
        let mut rng = rng_for(seed ^ 1, i);
        let s: f64 = rng.gen_range(0.05..0.95);
        let t: f64 = rng.gen_range(0.0..1.0);
        let ab = AB::new((s * t).powi(2), (s * (1.0 - t)).powi(2))?;
        let p = ab.matrix();
        worst_ab = worst_ab
            .max((p[0][1] * p[1][0] - ab.a).abs())
            .max((p[0][0] * p[1][1] - ab.b).abs());
    }
    out.push(check(
        "Markov matrix inverts",
        worst_ab <= 1e-12,
        json!({ "cases": 100, "max_abs_error": worst_ab }),
    ));

    let finite = AlphaParams::finite(vec![0.15, 0.08, 0.03])?;
    let q = QParams::new(vec![0.2, 0.1])?;
    // Each gap can only come from inputs longer than the cap, so it is bounded by their mass.
    let short = enumerate_excursions(21)?;
    let mut kept_alpha = 0.0;
    let mut kept_q = 0.0;
    for e in &short {
        kept_alpha += finite.nu(e)?;
        kept_q += q.phi(e);
    }
    let (miss_alpha, miss_q) = (1.0 - kept_alpha, 1.0 - kept_q);
    let g1 = pushforward_gap(&finite, 1, 21, 9)?;
    let g2 = pushforward_gap(&finite, 2, 21, 9)?;
    let gq = pushforward_gap_q(&q, 1, 21, 9)?;
    out.push(check(
        "skip pushes excursion measures forward",
        g1.max(g2) <= miss_alpha + 1e-12 && gq <= miss_q + 1e-12,
        json!({
            "input_cap": 21, "output_cap": 9, "alpha_k1": g1, "alpha_k2": g2, "q_k1": gq,
            "alpha_mass_beyond_cap": miss_alpha, "q_mass_beyond_cap": miss_q,
        }),
    ));

    let sampler = ExcursionSampler::new(&alpha, 31, 1e-6)?;
    let n = opts.n(100_000);
    let target_010 = alpha.nu(&Excursion::parse("010")?)?;
    let draws = run_indexed(n, opts.seed_for(9), opts.workers, |_, rng| {
        let e = sampler.sample(rng);
        Ok(((e.word() == [0, 1, 0]) as u8 as f64, e.len() as f64))
    })?;
    let hit = EstimateReport::from_values(&draws.iter().map(|d| d.0).collect::<Vec<_>>())
        .with_target(target_010);
    let len = EstimateReport::from_values(&draws.iter().map(|d| d.1).collect::<Vec<_>>())
        .with_target(alpha.mean_length()?);
    out.push(check(
        "sampled excursion frequency of 010",
        hit.within(3.0),
        json!({ "cap": 31, "delta": sampler.delta(), "report": hit }),
    ));
    out.push(check(
        "sampled mean excursion length",
        len.within(3.0),
        json!({ "cap": 31, "report": len }),
    ));

    let zero = ExcursionSampler::new(&AlphaParams::zero(), 11, 1e-12)?;
    let all_trivial = (0..100).all(|i| zero.sample(&mut rng_for(seed, i)).is_trivial());
    out.push(check(
        "zero parameters sample the trivial excursion",
        all_trivial,
        json!({ "draws": 100 }),
    ));
    Ok(out)
}

// ---------------------------------------------------------------- skip-markov

fn skip_markov(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let ab = AB::new(0.2, 0.1)?;
    let n = opts.n(1_000_000);
    let mut out = Vec::new();
    for k in 1..=2 {
        let r = verify_skip_markov(&ab, k, n, opts.seed_for(10 + k as u64), opts.workers)?;
        out.push(check(
            &format!("skip {k} of the Markov chain"),
            r.passed(SIGMAS),
            &r,
        ));
    }
    let flat = AB::new(0.3, 0.0)?;
    let r = verify_skip_markov(&flat, 1, opts.n(100_000), opts.seed_for(13), opts.workers)?;
    let ok = r.counts[0][1] == 0 && r.counts[1] == [0, 0] && r.counts[0][0] > 0;
    out.push(check("skip 1 of a chain without adjacent ones", ok, &r));
    Ok(out)
}

// ---------------------------------------------------------------- carrier

/// Per-window sums for the carrier checks.
#[derive(Debug, Clone, Default)]
struct CarrierSums {
    sites: u64,
    seats: [u64; 3],
    cap3: u64,
    inf: u64,
    pair12: u64,
    identity_failures: u64,
}

fn carrier_sums(spec: &SampleSpec, n: usize, workers: usize) -> Result<Vec<CarrierSums>> {
    let skips: Vec<Observable> = (1..=3)
        .map(|k| Observable::Skip(k, Box::new(Observable::Eta(0))))
        .collect();
    run_windows(spec, n, workers, |w| {
        let ev = Evaluator::new(&w.cfg, &skips);
        let mut s = CarrierSums::default();
        for x in w.lo..=w.hi {
            s.sites += 1;
            let l: Vec<u8> = (1..=4).map(|k| ev.seat_load(k, x)).collect();
            for k in 0..3 {
                s.seats[k] += l[k] as u64;
            }
            s.cap3 += ev.carrier(Capacity::Finite(3), x) as u64;
            s.inf += ev.carrier(Capacity::Infinite, x) as u64;
            s.pair12 += (l[0] * l[1]) as u64;
            if l[0] != ev.profile().eta(x) {
                s.identity_failures += 1;
            }
            for k in 2..=4u32 {
                if l[k as usize - 1] as f64 != ev.eval(&skips[k as usize - 2], x) {
                    s.identity_failures += 1;
                }
            }
        }
        Ok(s)
    })
}

fn means(rows: &[CarrierSums], f: impl Fn(&CarrierSums) -> u64) -> EstimateReport {
    EstimateReport::from_values(
        &rows
            .iter()
            .map(|r| f(r) as f64 / r.sites as f64)
            .collect::<Vec<_>>(),
    )
}

fn carrier(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let ab = AB::new(0.2, 0.1)?;
    let alpha = ab.alpha();
    let windows = opts.n(100);
    let spec = SampleSpec::markov(ab, 10_000, opts.seed_for(20));
    let rows = carrier_sums(&spec, windows, opts.workers)?;
    let mut out = Vec::new();
    for k in 1..=3u32 {
        let r = means(&rows, |s| s.seats[k as usize - 1]).with_target(seat_load_mean(&alpha, k)?);
        out.push(check(&format!("mean seat {k} load"), r.within(SIGMAS), &r));
    }
    let inf = means(&rows, |s| s.inf).with_target(ab.mean_carrier());
    out.push(check(
        "mean infinite carrier load",
        inf.within(SIGMAS),
        &inf,
    ));

    let corr_target = seat_correlation_formula(&alpha, 1, 2)?;
    let corr = means(&rows, |s| s.pair12).with_target(corr_target);
    out.push(check(
        "seat 1 and seat 2 correlation",
        corr.within(SIGMAS),
        &corr,
    ));

    let failures: u64 = rows.iter().map(|r| r.identity_failures).sum();
    let sites: u64 = rows.iter().map(|r| r.sites).sum();
    out.push(check(
        "seat load equals skipped occupation",
        failures == 0,
        json!({ "sites": sites, "levels": [1, 2, 3, 4], "failures": failures }),
    ));

    let split = rows.iter().all(|r| r.cap3 == r.seats.iter().sum::<u64>());
    let cap3 = means(&rows, |s| s.cap3);
    let summed: f64 = (0..3).map(|k| means(&rows, |s| s.seats[k]).estimate).sum();
    out.push(check(
        "capacity 3 load is the sum of seat loads",
        split,
        json!({ "estimate": cap3.estimate, "sum_of_seat_estimates": summed, "per_window_exact": split }),
    ));

    // Ratio of mean carrier loads under θ^k α and α.
    let mut exact = Vec::new();
    let mut worst: f64 = 0.0;
    let c0 = 4.0 * ab.b / (1.0 - ab.a + ab.b).powi(2);
    for k in 0..=5 {
        let s = ab.shift(k);
        let ck = 4.0 * s.b / (1.0 - s.a + s.b).powi(2);
        let ratio = s.mean_carrier() / ab.mean_carrier();
        let rho = s.density() / ab.density();
        worst = worst.max((ck - c0).abs()).max((ratio - rho).abs());
        exact.push(
            json!({ "k": k, "a": s.a, "b": s.b, "carrier_ratio": ratio, "density_ratio": rho }),
        );
    }
    out.push(check(
        "carrier ratio equals density ratio",
        worst <= 1e-12,
        json!({ "max_abs_error": worst, "levels": exact }),
    ));

    let shifted = ab.shift(1);
    let rows1 = carrier_sums(
        &SampleSpec::markov(shifted, 10_000, opts.seed_for(21)),
        windows,
        opts.workers,
    )?;
    let inf1 = means(&rows1, |s| s.inf);
    let ratio = inf1.estimate / inf.estimate;
    let se = ratio
        * ((inf1.stderr / inf1.estimate).powi(2) + (inf.stderr / inf.estimate).powi(2)).sqrt();
    let r = EstimateReport {
        estimate: ratio,
        stderr: se,
        n_samples: windows,
        target: None,
        z_score: None,
    }
    .with_target(shifted.density() / ab.density());
    out.push(check(
        "sampled carrier ratio after one shift",
        r.within(SIGMAS),
        &r,
    ));
    Ok(out)
}

// ---------------------------------------------------------------- invariance

fn invariance(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let ab = AB::new(0.2, 0.1)?;
    let spec = SampleSpec::markov(ab, 10_000, opts.seed_for(30));
    let checks = verify_invariance(&spec, opts.n(100), opts.workers)?;
    let time_ok = checks.iter().all(|c| c.time.within(SIGMAS));
    let shift_ok = checks.iter().all(|c| c.shift.within(SIGMAS));
    let density = &checks
        .iter()
        .find(|c| c.pattern == "1")
        .expect("pattern 1")
        .frequency;
    let density = density.clone().with_target(ab.density());
    let mut out = vec![
        check("pattern frequencies invariant under T", time_ok, &checks),
        check(
            "pattern frequencies invariant under shifts",
            shift_ok,
            json!({ "offset": crate::stat::SHIFT_OFFSET }),
        ),
        check("density of the chain", density.within(SIGMAS), &density),
    ];

    let glue = SampleSpec::glue(ab.alpha(), 60, 61, opts.seed_for(31));
    let gl = verify_invariance(&glue, opts.n(2_000), opts.workers)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for (g, m) in gl.iter().zip(&checks) {
        let z = two_sample_z(&g.frequency, &m.frequency);
        ok &= z.abs() <= SIGMAS && g.time.within(SIGMAS);
        rows.push(json!({ "pattern": g.pattern, "glued": g.frequency, "markov": m.frequency, "z": z, "glued_time_z": g.time.z_score }));
    }
    out.push(check("glued excursions match the Markov chain", ok, rows));

    let vac = verify_invariance(
        &SampleSpec::glue(AlphaParams::zero(), 20, 11, opts.seed),
        4,
        opts.workers,
    )?;
    let exact = vac
        .iter()
        .all(|c| c.time.estimate == 0.0 && c.shift.estimate == 0.0);
    out.push(check(
        "vacuum frequencies are exact",
        exact,
        json!({ "patterns": vac.len() }),
    ));
    Ok(out)
}

// ---------------------------------------------------------------- skip-stat

fn skip_stat(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let alpha = AlphaParams::geometric(0.05, 0.05)?;
    let windows = opts.n(100);
    let size = 10_000;
    let mut out = Vec::new();

    let mut norm = Vec::new();
    let mut ok = true;
    for k in 1..=3u32 {
        let c = SkipCoefficients::new(&alpha, k)?;
        let (a, b) = c.unconditioned();
        let ev = 2.0 * seat_event_mean(&alpha.theta_n(k as usize)?)?;
        let total = a + b * ev;
        let cond = c.conditioned(k);
        let beta = alpha.theta_n(k as usize)?;
        let half = seat_event_mean(&beta)?;
        let rho_beta = (beta.mean_length()? - 1.0) / (2.0 * beta.mean_length()?);
        let rho = (alpha.mean_length()? - 1.0) / (2.0 * alpha.mean_length()?);
        let cond_total = cond[0] + cond[1] * rho_beta + (cond[2] + cond[3]) * half;
        ok &= (total - 1.0).abs() < 1e-12 && (cond_total - rho).abs() < 1e-12;
        norm.push(
            json!({ "k": k, "unconditioned": total, "conditioned": cond_total, "density": rho }),
        );
    }
    out.push(check("constant observable normalization", ok, norm));

    let eta = Observable::Eta(0);
    let r = verify_skip_stat(
        &alpha,
        1,
        &eta,
        false,
        size,
        windows,
        opts.seed_for(40),
        opts.workers,
    )?;
    let target = seat_load_mean(&alpha, 2)?;
    let lhs = r.lhs.clone().with_target(target);
    let rhs = r.rhs.clone().with_target(target);
    out.push(check(
        "skip statistics for the occupation at 0",
        r.z.abs() <= SIGMAS && lhs.within(SIGMAS) && rhs.within(SIGMAS),
        json!({ "comparison": r, "lhs_vs_seat_2": lhs, "rhs_vs_seat_2": rhs }),
    ));

    let finite = AlphaParams::finite(vec![0.15, 0.08, 0.03])?;
    let rf = verify_skip_stat(
        &finite,
        1,
        &"eta:0*eta:1".parse()?,
        false,
        2_000,
        windows * 2,
        opts.seed_for(41),
        opts.workers,
    )?;
    out.push(check(
        "skip statistics under finite parameters",
        rf.z.abs() <= SIGMAS,
        &rf,
    ));

    let mut events = Vec::new();
    let mut ok = true;
    for k in 0..=1usize {
        let beta = alpha.theta_n(k)?;
        let spec = SampleSpec::for_alpha(&beta, size, opts.seed_for(42 + k as u64));
        let obs: Vec<Observable> = vec!["up:1:1".parse()?, "down:1:1".parse()?];
        let t = seat_event_mean(&beta)?;
        for (o, e) in obs
            .iter()
            .zip(estimate_many(&spec, &obs, windows, opts.workers)?)
        {
            let e = e.with_target(t);
            ok &= e.within(SIGMAS);
            events.push(json!({ "shift": k, "observable": o.to_string(), "report": e }));
        }
    }
    out.push(check("seat event means", ok, events));

    let spec = SampleSpec::for_alpha(&alpha, size, opts.seed_for(44));
    let corr = estimate_many(&spec, &["wseat:1*wseat:2".parse()?], windows, opts.workers)?
        .remove(0)
        .with_target(seat_correlation_formula(&alpha, 1, 2)?);
    out.push(check(
        "seat 1 and seat 2 correlation",
        corr.within(SIGMAS),
        &corr,
    ));

    for (name, f) in [("one", Observable::One), ("occupation at 0", eta.clone())] {
        let r = verify_skip_stat(
            &alpha,
            1,
            &f,
            true,
            size,
            windows,
            opts.seed_for(45),
            opts.workers,
        )?;
        out.push(check(
            &format!("conditioned skip statistics, {name}"),
            r.z.abs() <= SIGMAS,
            &r,
        ));
    }

    let law = verify_anchored_law(
        &AB::new(0.2, 0.1)?.alpha(),
        1,
        opts.n(20_000),
        opts.seed_for(46),
        opts.workers,
    )?;
    out.push(check(
        "record-anchored law after skipping",
        law.iter().all(|c| c.z.abs() <= SIGMAS),
        &law,
    ));

    let degenerate = SkipCoefficients::new(&AlphaParams::finite(vec![0.1])?, 1);
    out.push(check(
        "degenerate coefficients are refused",
        matches!(degenerate, Err(BbsError::Degenerate(_))),
        json!({ "error": degenerate.err().map(|e| e.to_string()) }),
    ));
    Ok(out)
}
