//! Takahashi–Satsuma soliton identification, one excursion at a time.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::BallConfig;
use crate::seat::SeatProfile;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Soliton {
    pub size: u32,
    /// The k ones and k zeros, in increasing site order.
    pub sites: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolitonSet {
    /// Sorted by size (largest first), then by leftmost site.
    pub solitons: Vec<Soliton>,
    /// Records inside the frame.
    pub records: Vec<i64>,
}

impl SolitonSet {
    /// Number of solitons of each size.
    pub fn size_counts(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for s in &self.solitons {
            *m.entry(s.size).or_insert(0) += 1;
        }
        m
    }

    pub fn sizes(&self) -> Vec<u32> {
        self.solitons.iter().map(|s| s.size).collect()
    }
}

/// Splits the body of one excursion (everything after its leading record) into solitons.
fn decompose_body(mut body: Vec<(i64, u8)>, out: &mut Vec<Soliton>) {
    while !body.is_empty() {
        // Maximal runs as (start, length).
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for (j, &(_, b)) in body.iter().enumerate() {
            match runs.last_mut() {
                Some((start, len)) if body[*start].1 == b => *len += 1,
                _ => runs.push((j, 1)),
            }
        }
        let t = runs
            .windows(2)
            .position(|w| w[1].1 >= w[0].1)
            .expect("an excursion body always has a run followed by a run at least as long");
        let (start, k) = runs[t];
        let next = runs[t + 1].0;
        let mut sites: Vec<i64> = body[start..start + k].iter().map(|p| p.0).collect();
        sites.extend(body[next..next + k].iter().map(|p| p.0));
        sites.sort_unstable();
        out.push(Soliton {
            size: k as u32,
            sites,
        });
        body.drain(next..next + k);
        body.drain(start..start + k);
    }
}

pub fn ts_decompose(cfg: &BallConfig) -> SolitonSet {
    let prof = SeatProfile::new(cfg);
    let records = prof.records();
    let mut solitons = Vec::new();
    let mut bounds = records.clone();
    bounds.push(prof.hi() + 1);
    for w in bounds.windows(2) {
        let body: Vec<(i64, u8)> = (w[0] + 1..w[1]).map(|x| (x, prof.eta(x))).collect();
        decompose_body(body, &mut solitons);
    }
    solitons.sort_by(|a, b| b.size.cmp(&a.size).then(a.sites[0].cmp(&b.sites[0])));
    SolitonSet { solitons, records }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_config, Boundary};

    #[test]
    fn reference_excursion() {
        let c = parse_config("0110011101011000100", Boundary::WholeLine).unwrap();
        let ts = ts_decompose(&c);
        assert_eq!(ts.sizes(), vec![4, 2, 1, 1, 1]);
        assert_eq!(ts.solitons[0].sites, vec![5, 6, 7, 12, 13, 14, 15, 18]);
        assert_eq!(ts.solitons[1].sites, vec![1, 2, 3, 4]);
        let ones: Vec<Vec<i64>> = ts.solitons[2..].iter().map(|s| s.sites.clone()).collect();
        assert_eq!(ones, vec![vec![8, 9], vec![10, 11], vec![16, 17]]);
    }

    #[test]
    fn vacuum_has_no_solitons() {
        let ts = ts_decompose(&BallConfig::vacuum(Boundary::WholeLine));
        assert!(ts.solitons.is_empty());
        assert!(!ts.records.is_empty());
    }

    #[test]
    fn appending_zeros_changes_nothing() {
        let a = ts_decompose(&parse_config("0110100", Boundary::WholeLine).unwrap());
        let b = ts_decompose(&parse_config("01101000000", Boundary::WholeLine).unwrap());
        assert_eq!(a.solitons, b.solitons);
    }
}
