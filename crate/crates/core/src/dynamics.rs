//! Time evolution T_ℓ and the linearization of ζ under it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::{BallConfig, Boundary};
use crate::error::{BbsError, Result};
use crate::seat::{run_carrier, zeta_of, Capacity, SeatEvent, SeatProfile, ZetaMatrix};

/// T_ℓη(x) = η(x) + W_ℓ(x − 1) − W_ℓ(x).
pub fn evolve(cfg: &BallConfig, cap: Capacity) -> BallConfig {
    let w = run_carrier(cfg, cap);
    let lo = w.lo;
    let hi = w.hi();
    let bits = (lo..=hi)
        .map(|x| (cfg.get(x) as i64 + w.at(x - 1) as i64 - w.at(x) as i64) as u8)
        .collect();
    BallConfig::from_parts(lo, bits, cfg.boundary())
}

/// T_ℓ applied n times.
pub fn evolve_n(cfg: &BallConfig, cap: Capacity, n: usize) -> BallConfig {
    (0..n).fold(cfg.clone(), |c, _| evolve(&c, cap))
}

/// The whole-line offset o_k(η) computed by one of its three equivalent formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetForm {
    /// s∞(η,0) − s∞(Tη,0) plus twice the seat sums up to the origin.
    SeatSums,
    /// −ξ_k(η, s∞(Tη,0)) − W_k(η, s∞(Tη,0)).
    Before,
    /// ξ_k(Tη, s∞(η,0)) − W_k(Tη, s∞(η,0)).
    After,
}

fn check_whole(cfg: &BallConfig) -> Result<()> {
    if cfg.boundary() != Boundary::WholeLine {
        return Err(BbsError::Mode(
            "the offset is defined on the whole line".into(),
        ));
    }
    Ok(())
}

pub fn offset_o(cfg: &BallConfig, k: u32) -> Result<i64> {
    offset_o_with(cfg, k, OffsetForm::SeatSums)
}

pub fn offset_o_with(cfg: &BallConfig, k: u32, form: OffsetForm) -> Result<i64> {
    check_whole(cfg)?;
    if k == 0 {
        return Err(BbsError::Domain("k must be at least 1".into()));
    }
    let p = SeatProfile::new(cfg);
    let q = SeatProfile::new(&evolve(cfg, Capacity::Infinite));
    Ok(offset_from_profiles(&p, &q, k, form))
}

pub(crate) fn offset_from_profiles(
    p: &SeatProfile,
    q: &SeatProfile,
    k: u32,
    form: OffsetForm,
) -> i64 {
    let a = p.record_anchor();
    let b = q.record_anchor();
    let level = Capacity::Finite(k);
    match form {
        OffsetForm::SeatSums => {
            let low_down = |x: i64| matches!(p.event(x), SeatEvent::Down(j) if j <= k) as i64;
            let low_up = |x: i64| matches!(q.event(x), SeatEvent::Up(j) if j <= k) as i64;
            let downs: i64 = (a + 1..=0).map(low_down).sum();
            let ups: i64 = (b + 1..=0).map(low_up).sum();
            a - b + 2 * downs - 2 * ups
        }
        OffsetForm::Before => -p.slots(level).xi(b) - p.capacity_load(level, b) as i64,
        OffsetForm::After => q.slots(level).xi(a) - q.capacity_load(level, a) as i64,
    }
}

/// A disagreement between the two sides of a linearization identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub k: u32,
    pub i: i64,
    pub after: u32,
    pub before: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearizationReport {
    pub ok: bool,
    pub mismatches: Vec<Mismatch>,
}

/// Compares row k of ζ(T_ℓη) with row k of ζ(η) shifted by `shift`.
fn compare_rows(
    before: &ZetaMatrix,
    after: &ZetaMatrix,
    k: u32,
    shift: i64,
    half: bool,
) -> Vec<Mismatch> {
    let b = before.row(k);
    let a = after.row(k);
    let mut idx: Vec<i64> = a.keys().copied().collect();
    idx.extend(b.keys().map(|i| i + shift));
    idx.sort_unstable();
    idx.dedup();
    idx.into_iter()
        .filter_map(|i| {
            let lhs = a.get(&i).copied().unwrap_or(0);
            let src = i - shift;
            let rhs = if half && src < 0 {
                0
            } else {
                b.get(&src).copied().unwrap_or(0)
            };
            (lhs != rhs).then_some(Mismatch {
                k,
                i,
                after: lhs,
                before: rhs,
            })
        })
        .collect()
}

/// Half line: ζ_k(T_ℓη, i) = ζ_k(η, i − min(k, ℓ)).
/// Whole line (ℓ = ∞): ζ_k(Tη, i + k + o_k(η)) = ζ_k(η, i).
pub fn verify_linearization(
    cfg: &BallConfig,
    cap: Capacity,
    k: u32,
) -> Result<LinearizationReport> {
    if k == 0 {
        return Err(BbsError::Domain("k must be at least 1".into()));
    }
    let after_cfg = evolve(cfg, cap);
    let before = zeta_of(cfg);
    let after = zeta_of(&after_cfg);
    let mismatches = match cfg.boundary() {
        Boundary::HalfLine => compare_rows(&before, &after, k, cap.min_with(k) as i64, true),
        Boundary::WholeLine => {
            if cap != Capacity::Infinite {
                return Err(BbsError::Domain(
                    "whole-line linearization is stated for the infinite carrier".into(),
                ));
            }
            let o = offset_from_profiles(
                &SeatProfile::new(cfg),
                &SeatProfile::new(&after_cfg),
                k,
                OffsetForm::SeatSums,
            );
            compare_rows(&before, &after, k, k as i64 + o, false)
        }
    };
    Ok(LinearizationReport {
        ok: mismatches.is_empty(),
        mismatches,
    })
}

/// Everything the `evolve` command reports.
#[derive(Debug, Clone, Serialize)]
pub struct EvolutionReport {
    pub schema: u32,
    pub capacity: Capacity,
    pub before: BallConfig,
    pub after: BallConfig,
    /// o_k(η) for k = 1..=K (whole line only).
    pub offsets: BTreeMap<u32, i64>,
    pub zeta_before: ZetaMatrix,
    pub zeta_after: ZetaMatrix,
}

pub fn evolution_report(cfg: &BallConfig, cap: Capacity) -> EvolutionReport {
    let after = evolve(cfg, cap);
    let zeta_before = zeta_of(cfg);
    let zeta_after = zeta_of(&after);
    let mut offsets = BTreeMap::new();
    if cfg.boundary() == Boundary::WholeLine && cap == Capacity::Infinite {
        let p = SeatProfile::new(cfg);
        let q = SeatProfile::new(&after);
        for k in 1..=p.k_max().max(1) {
            offsets.insert(k, offset_from_profiles(&p, &q, k, OffsetForm::SeatSums));
        }
    }
    EvolutionReport {
        schema: 1,
        capacity: cap,
        before: cfg.clone(),
        after,
        offsets,
        zeta_before,
        zeta_after,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn vacuum_is_fixed() {
        let v = BallConfig::vacuum(Boundary::WholeLine);
        assert_eq!(evolve(&v, Capacity::Infinite), v);
        for k in 1..4 {
            assert_eq!(offset_o(&v, k).unwrap(), 0);
        }
    }

    #[test]
    fn free_soliton_moves_at_its_size() {
        let c = parse_config("0110", Boundary::HalfLine).unwrap();
        let t = evolve(&c, Capacity::Infinite);
        assert_eq!(t.ones(), vec![3, 4]);
        let c = parse_config("01110", Boundary::HalfLine).unwrap();
        assert_eq!(evolve(&c, Capacity::Infinite).ones(), vec![4, 5, 6]);
    }

    #[test]
    fn finite_capacity_leaves_overflow() {
        let c = parse_config("0110", Boundary::HalfLine).unwrap();
        assert_eq!(evolve(&c, Capacity::Finite(1)).ones(), vec![2, 3]);
    }

    #[test]
    fn reference_step_reproduces_known_row() {
        let c = parse_config("011001110101100010", Boundary::HalfLine).unwrap();
        let t = evolve(&c, Capacity::Infinite);
        assert_eq!(t.ball_count(), c.ball_count());
        for k in 1..=4 {
            assert!(verify_linearization(&c, Capacity::Infinite, k).unwrap().ok);
            assert!(verify_linearization(&c, Capacity::Finite(2), k).unwrap().ok);
        }
    }

    #[test]
    fn offset_forms_agree_on_small_cases() {
        for s in [
            "#origin=0\n10",
            "#origin=-1\n10",
            "#origin=-3\n0110100",
            "#origin=-8\n011001110101100010",
        ] {
            let c = parse_config(s, Boundary::WholeLine).unwrap();
            for k in 1..=4 {
                let a = offset_o_with(&c, k, OffsetForm::SeatSums).unwrap();
                let b = offset_o_with(&c, k, OffsetForm::Before).unwrap();
                let d = offset_o_with(&c, k, OffsetForm::After).unwrap();
                assert_eq!((a, a), (b, d), "{s} k={k}");
                assert!(
                    verify_linearization(&c, Capacity::Infinite, k).unwrap().ok,
                    "{s} k={k}"
                );
            }
        }
    }
}
