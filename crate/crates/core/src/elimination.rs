//! The 10-elimination Φ_k and its riggings.
//!
//! Φ_1 deletes every adjacent "10" pair. A maximal block X(10)^m Y leaves the
//! shoulder m on X, or m − 1 when XY = 10; the shoulder is recorded at X's
//! index in Φ_1(η). Φ_{k+1} = Φ_1(Φ_k) and level k+1 of the rigging is the
//! shoulder list of Φ_1 applied to Φ_k.

use std::collections::BTreeMap;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::config::{BallConfig, Boundary};
use crate::error::{BbsError, Result};
use crate::seat::frame;

/// Sparse map (k, i) ↦ m = |J¹⁰_k(η, i)|; the set itself is always {1, …, m}.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Rigging {
    entries: BTreeMap<(u32, i64), u32>,
}

impl Rigging {
    pub fn get(&self, k: u32, i: i64) -> u32 {
        self.entries.get(&(k, i)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(u32, i64), u32> {
        &self.entries
    }

    fn push_level(&mut self, k: u32, level: &BTreeMap<i64, u32>) {
        for (&i, &m) in level {
            self.entries.insert((k, i), m);
        }
    }
}

impl Serialize for Rigging {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for (&(k, i), &m) in &self.entries {
            seq.serialize_element(&(k, i, m))?;
        }
        seq.end()
    }
}

/// The word η(0) η(1) … η(hi) with the carrier empty after hi.
fn half_line_word(cfg: &BallConfig) -> Result<Vec<u8>> {
    if let Some(x) = cfg.first_one() {
        if x <= 0 {
            return Err(BbsError::Mode(format!(
                "10-elimination needs η(x) = 0 for x ≤ 0, found a ball at {x}"
            )));
        }
    }
    let (_, hi) = frame(cfg);
    Ok(cfg.values(0, hi))
}

/// Removes all 10-pairs from a word that starts with 0 and returns the shoulders.
pub fn eliminate_word(word: &[u8]) -> (Vec<u8>, BTreeMap<i64, u32>) {
    let mut out = Vec::with_capacity(word.len());
    let mut shoulders = BTreeMap::new();
    let at = |x: usize| word.get(x).copied().unwrap_or(0);
    let mut x = 0;
    while x < word.len() {
        if at(x) == 1 && at(x + 1) == 0 && !out.is_empty() {
            let mut m = 0u32;
            while at(x) == 1 && at(x + 1) == 0 {
                m += 1;
                x += 2;
            }
            let left = *out.last().unwrap();
            let right = at(x);
            let shoulder = if left == 1 && right == 0 { m - 1 } else { m };
            if shoulder > 0 {
                shoulders.insert(out.len() as i64 - 1, shoulder);
            }
        } else {
            out.push(at(x));
            x += 1;
        }
    }
    (out, shoulders)
}

/// Inverse of [`eliminate_word`]: between letters j and j+1 insert (10)^{m_j + [XY = 10]}.
///
/// Returns the new word and the output position of each input letter.
pub fn insert_tens(word: &[u8], shoulders: &[u32]) -> (Vec<u8>, Vec<usize>) {
    let extra: u32 = shoulders.iter().sum();
    let mut out = Vec::with_capacity(word.len() + 2 * (extra as usize + word.len()));
    let mut positions = Vec::with_capacity(word.len());
    for (j, &x) in word.iter().enumerate() {
        positions.push(out.len());
        out.push(x);
        let y = word.get(j + 1).copied().unwrap_or(0);
        let n = shoulders.get(j).copied().unwrap_or(0) + u32::from(x == 1 && y == 0);
        for _ in 0..n {
            out.push(1);
            out.push(0);
        }
    }
    (out, positions)
}

/// Φ_1(η) together with J¹⁰_1(η, ·).
pub fn eliminate_once(cfg: &BallConfig) -> Result<(BallConfig, BTreeMap<i64, u32>)> {
    let word = half_line_word(cfg)?;
    let (out, shoulders) = eliminate_word(&word);
    Ok((BallConfig::from_parts(0, out, cfg.boundary()), shoulders))
}

/// Φ_k(η) together with the riggings of levels 1..=k.
pub fn eliminate_k(cfg: &BallConfig, k: u32) -> Result<(BallConfig, Rigging)> {
    if k == 0 {
        return Err(BbsError::Domain(
            "elimination depth k must be at least 1".into(),
        ));
    }
    let mut word = half_line_word(cfg)?;
    let mut rig = Rigging::default();
    for level in 1..=k {
        let (next, shoulders) = eliminate_word(&word);
        rig.push_level(level, &shoulders);
        word = next;
    }
    Ok((BallConfig::from_parts(0, word, cfg.boundary()), rig))
}

/// All Φ_k rows for k = 1..=depth as bit strings.
pub fn elimination_rows(cfg: &BallConfig, depth: u32) -> Result<Vec<String>> {
    let mut word = half_line_word(cfg)?;
    let mut rows = Vec::new();
    for _ in 0..depth {
        word = eliminate_word(&word).0;
        rows.push(BallConfig::from_parts(0, word.clone(), Boundary::HalfLine).bit_string());
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn fig() -> BallConfig {
        parse_config("011001110101100010", Boundary::HalfLine).unwrap()
    }

    #[test]
    fn reference_rows() {
        let rows = elimination_rows(&fig(), 4).unwrap();
        assert_eq!(rows, vec!["010111000", "01100", "010", "0"]);
    }

    #[test]
    fn reference_shoulders() {
        let (phi, level) = eliminate_once(&fig()).unwrap();
        assert_eq!(phi.bit_string(), "010111000");
        // Zero shoulders at indices 1 and 5 are not stored.
        let expect: BTreeMap<i64, u32> = [(4, 2), (7, 1)].into_iter().collect();
        assert_eq!(level, expect);
        let (_, rig) = eliminate_k(&fig(), 4).unwrap();
        let expect: BTreeMap<(u32, i64), u32> =
            [((1, 4), 2), ((1, 7), 1), ((2, 0), 1), ((4, 0), 1)]
                .into_iter()
                .collect();
        assert_eq!(rig.entries(), &expect);
    }

    #[test]
    fn single_pair() {
        let c = parse_config("010", Boundary::HalfLine).unwrap();
        let (phi, level) = eliminate_once(&c).unwrap();
        assert_eq!(phi.bit_string(), "0");
        assert_eq!(level.into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn vacuum_stays_vacuum() {
        let v = BallConfig::vacuum(Boundary::HalfLine);
        let (phi, rig) = eliminate_k(&v, 3).unwrap();
        assert!(phi.is_vacuum());
        assert!(rig.entries().is_empty());
    }

    #[test]
    fn insert_inverts_eliminate() {
        let word = fig().values(0, 18);
        let (out, shoulders) = eliminate_word(&word);
        let counts: Vec<u32> = (0..out.len() as i64)
            .map(|i| shoulders.get(&i).copied().unwrap_or(0))
            .collect();
        let (back, pos) = insert_tens(&out, &counts);
        assert_eq!(back, word);
        assert_eq!(pos[0], 0);
    }

    #[test]
    fn rejects_ball_at_origin() {
        let c = parse_config("10", Boundary::WholeLine).unwrap();
        assert!(matches!(eliminate_once(&c), Err(BbsError::Mode(_))));
    }
}
