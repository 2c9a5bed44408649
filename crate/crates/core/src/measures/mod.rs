//! Excursions, the measures ν_α and φ_q on them, and their parameter algebra.

mod excursion;
mod markov;
mod params;

use std::collections::BTreeMap;

use serde::Deserialize;

pub use excursion::{
    content_length, contents_of_weight, contents_of_weight_bounded, enumerate_excursions,
    fermionic_count, fermionic_count_dense, zeta_of_excursion, Excursion,
};
pub use markov::{ab_shift, markov_matrix, Matrix2, AB};
pub(crate) use params::content_classes;
pub use params::{
    alpha_q_convert, cf_factors, mean_length_cf, mean_length_ladder, mean_length_q,
    partition_and_mean, partition_and_mean_enumerated, AlphaParams, Params, PartitionReport,
    QParams, Q_TAIL_TOL,
};

use crate::error::{BbsError, Result};
use crate::skip::skip_excursion;

/// Parameter file contents.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ParamSpec {
    Alpha(Vec<f64>),
    AlphaGeometric { a: f64, b: f64 },
    Q(Vec<f64>),
    Ab { a: f64, b: f64 },
}

impl ParamSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| BbsError::Parse(format!("parameter file: {e}")))
    }

    pub fn alpha(&self) -> Result<AlphaParams> {
        match self {
            ParamSpec::Alpha(v) => AlphaParams::finite(v.clone()),
            ParamSpec::AlphaGeometric { a, b } => AlphaParams::geometric(*a, *b),
            ParamSpec::Q(q) => Ok(QParams::new(q.clone())?.to_alpha()),
            ParamSpec::Ab { a, b } => Ok(AB::new(*a, *b)?.alpha()),
        }
    }

    /// The Markov pair, when the parameters describe one.
    pub fn ab(&self) -> Option<AB> {
        match *self {
            ParamSpec::Ab { a, b } | ParamSpec::AlphaGeometric { a, b } => AB::new(a, b).ok(),
            _ => None,
        }
    }
}

/// Largest |Σ_{ε: Ψ̃_k(ε) = ε′} ν_α(ε) − ν_{θ^k α}(ε′)| over ε′ with |ε′| ≤ out_cap,
/// summing ε over all excursions of length ≤ in_cap.
pub fn pushforward_gap(alpha: &AlphaParams, k: u32, in_cap: usize, out_cap: usize) -> Result<f64> {
    let target = alpha.theta_n(k as usize)?;
    let z = alpha.z()?;
    let mut mass: BTreeMap<Excursion, f64> = BTreeMap::new();
    for e in enumerate_excursions(in_cap)? {
        let w = alpha.weight_of_content(&e.content()) / z;
        if w > 0.0 {
            *mass.entry(skip_excursion(&e, k)?).or_insert(0.0) += w;
        }
    }
    let mut gap: f64 = 0.0;
    for e in enumerate_excursions(out_cap)? {
        let lhs = mass.get(&e).copied().unwrap_or(0.0);
        gap = gap.max((lhs - target.nu(&e)?).abs());
    }
    Ok(gap)
}

/// The same for φ_q and θ̃^k q.
pub fn pushforward_gap_q(q: &QParams, k: u32, in_cap: usize, out_cap: usize) -> Result<f64> {
    let mut target = q.clone();
    for _ in 0..k {
        target = target.theta_tilde();
    }
    let mut mass: BTreeMap<Excursion, f64> = BTreeMap::new();
    for e in enumerate_excursions(in_cap)? {
        *mass.entry(skip_excursion(&e, k)?).or_insert(0.0) += q.phi(&e);
    }
    let mut gap: f64 = 0.0;
    for e in enumerate_excursions(out_cap)? {
        gap = gap.max((mass.get(&e).copied().unwrap_or(0.0) - target.phi(&e)).abs());
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_files() {
        assert_eq!(
            ParamSpec::parse(r#"{"alpha": [0.1, 0.2]}"#).unwrap(),
            ParamSpec::Alpha(vec![0.1, 0.2])
        );
        let g = ParamSpec::parse(r#"{"alpha_geometric": {"a": 0.05, "b": 0.05}}"#).unwrap();
        assert_eq!(g.alpha().unwrap().get(2), 0.05 * 0.05);
        let m = ParamSpec::parse(r#"{"ab": {"a": 0.2, "b": 0.1}}"#).unwrap();
        assert_eq!(m.ab().unwrap().a, 0.2);
        assert!(ParamSpec::parse(r#"{"beta": 1}"#).is_err());
    }

    #[test]
    fn skip_pushes_nu_forward() {
        let a = AlphaParams::finite(vec![0.15, 0.08, 0.03]).unwrap();
        // Excursions of length ≤ 21 carry all but a tiny fraction of the mass.
        assert!(pushforward_gap(&a, 1, 21, 9).unwrap() < 1e-4);
        let q = QParams::new(vec![0.2, 0.1]).unwrap();
        assert!(pushforward_gap_q(&q, 1, 21, 9).unwrap() < 1e-4);
    }
}
