use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::config::{BallConfig, Boundary};
use crate::error::{BbsError, Result};
use crate::seat::{zeta_of, SeatProfile};

/// A word e_0 … e_2n with e_0 = 0, nonnegative partial sums of (2e_j − 1)
/// for 1 ≤ m < 2n, and total sum 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Excursion {
    word: Vec<u8>,
}

impl Excursion {
    pub fn new(word: Vec<u8>) -> Result<Self> {
        if word.first() != Some(&0) {
            return Err(BbsError::Domain("an excursion starts with 0".into()));
        }
        if word.len() % 2 == 0 {
            return Err(BbsError::Domain(format!(
                "excursion length {} is even",
                word.len()
            )));
        }
        let mut h = 0i64;
        for (j, &e) in word.iter().enumerate().skip(1) {
            if e > 1 {
                return Err(BbsError::Domain("excursion letters are 0/1".into()));
            }
            h += if e == 1 { 1 } else { -1 };
            if h < 0 {
                return Err(BbsError::Domain(format!(
                    "partial sum negative at letter {j}"
                )));
            }
        }
        if h != 0 {
            return Err(BbsError::Domain("excursion does not return to 0".into()));
        }
        Ok(Excursion { word })
    }

    pub(crate) fn from_word_unchecked(word: Vec<u8>) -> Self {
        Excursion { word }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let word = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                o => Err(BbsError::Parse(format!("non-binary character {o:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Excursion::new(word)
    }

    pub fn trivial() -> Self {
        Excursion { word: vec![0] }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.word.len() == 1
    }

    /// ι(ε): the whole-line configuration with ε_0 at site 0 and zeros elsewhere.
    pub fn embed(&self) -> BallConfig {
        BallConfig::from_parts(0, self.word.clone(), Boundary::WholeLine)
    }

    /// ι⁻¹: reads η(0) … η(s∞(η,1) − 1) from a configuration in Ω_1.
    pub fn from_config(cfg: &BallConfig) -> Result<Self> {
        let cls = cfg.classify();
        if !cls.single_excursion {
            return Err(BbsError::Domain(
                "configuration is not a single excursion at the origin".into(),
            ));
        }
        let end = SeatProfile::new(cfg).next_record_after(0);
        Ok(Excursion {
            word: cfg.values(0, end - 1),
        })
    }

    /// ζ_k(ε) for every k: the number of k-solitons.
    pub fn zeta(&self) -> BTreeMap<u32, u32> {
        zeta_of(&self.embed()).totals()
    }

    /// Soliton content as a dense vector, entry k − 1 holding n_k.
    pub fn content(&self) -> Vec<u32> {
        let z = self.zeta();
        let kmax = z.keys().max().copied().unwrap_or(0) as usize;
        let mut n = vec![0u32; kmax];
        for (k, c) in z {
            n[k as usize - 1] = c;
        }
        n
    }
}

impl fmt::Display for Excursion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.word {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for Excursion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Number of k-solitons in ε for every k.
pub fn zeta_of_excursion(eps: &Excursion) -> BTreeMap<u32, u32> {
    eps.zeta()
}

/// All excursions of length ≤ `max_len`, in lexicographic order.
pub fn enumerate_excursions(max_len: usize) -> Result<Vec<Excursion>> {
    if max_len % 2 == 0 {
        return Err(BbsError::Domain(format!(
            "maximal length {max_len} must be odd"
        )));
    }
    let mut out = Vec::new();
    let mut word = vec![0u8];
    walk(&mut word, 0, max_len, &mut out);
    Ok(out)
}

fn walk(word: &mut Vec<u8>, h: usize, max_len: usize, out: &mut Vec<Excursion>) {
    if h == 0 {
        out.push(Excursion { word: word.clone() });
    }
    let room = max_len - word.len();
    if h >= 1 && room >= h {
        word.push(0);
        walk(word, h - 1, max_len, out);
        word.pop();
    }
    if room > h {
        word.push(1);
        walk(word, h + 1, max_len, out);
        word.pop();
    }
}

/// C(n, r) in exact arithmetic.
pub(crate) fn binomial(n: u64, r: u64) -> Result<u128> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| BbsError::Domain("binomial overflow".into()))?
            / (i as u128 + 1);
    }
    Ok(acc)
}

/// |ℰ(n)| = Π_k C(2 Σ_{ℓ>k} (ℓ − k) n_ℓ + n_k, n_k) for a dense content vector.
pub fn fermionic_count_dense(n: &[u32]) -> Result<u128> {
    let mut acc: u128 = 1;
    for k in 1..=n.len() {
        let nk = n[k - 1] as u64;
        if nk == 0 {
            continue;
        }
        let vac: u64 = (k + 1..=n.len())
            .map(|l| 2 * (l - k) as u64 * n[l - 1] as u64)
            .sum();
        acc = acc
            .checked_mul(binomial(vac + nk, nk)?)
            .ok_or_else(|| BbsError::Domain("count overflow".into()))?;
    }
    Ok(acc)
}

/// Fermionic count for a sparse content map k ↦ n_k.
pub fn fermionic_count(n: &BTreeMap<u32, i64>) -> Result<u128> {
    let kmax = n.keys().max().copied().unwrap_or(0) as usize;
    let mut dense = vec![0u32; kmax];
    for (&k, &c) in n {
        if k == 0 {
            return Err(BbsError::Domain("soliton sizes start at 1".into()));
        }
        if c < 0 {
            return Err(BbsError::Domain(format!(
                "negative soliton count n_{k} = {c}"
            )));
        }
        dense[k as usize - 1] = c as u32;
    }
    fermionic_count_dense(&dense)
}

/// All contents n with Σ k·n_k = m, as dense vectors without trailing zeros.
pub fn contents_of_weight(m: usize) -> Vec<Vec<u32>> {
    contents_of_weight_bounded(m, m)
}

/// Contents of weight m using soliton sizes ≤ max_part only.
pub fn contents_of_weight_bounded(m: usize, max_part: usize) -> Vec<Vec<u32>> {
    fn rec(rest: usize, max_part: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            let mut v = cur.clone();
            while v.last() == Some(&0) {
                v.pop();
            }
            out.push(v);
            return;
        }
        for k in (1..=max_part.min(rest)).rev() {
            cur[k - 1] += 1;
            rec(rest - k, k, cur, out);
            cur[k - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; m.max(1)];
    rec(m, max_part, &mut cur, &mut out);
    out
}

/// Length 1 + 2 Σ k·n_k of any excursion with this content.
pub fn content_length(n: &[u32]) -> usize {
    1 + 2 * n
        .iter()
        .enumerate()
        .map(|(j, &c)| (j + 1) * c as usize)
        .sum::<usize>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumerations() {
        let e1: Vec<String> = enumerate_excursions(1)
            .unwrap()
            .iter()
            .map(|e| e.to_string())
            .collect();
        assert_eq!(e1, vec!["0"]);
        let e3: Vec<String> = enumerate_excursions(3)
            .unwrap()
            .iter()
            .map(|e| e.to_string())
            .collect();
        assert_eq!(e3, vec!["0", "010"]);
        let all = enumerate_excursions(9).unwrap();
        let mut by_len = BTreeMap::new();
        for e in &all {
            *by_len.entry(e.len()).or_insert(0) += 1;
        }
        assert_eq!(
            by_len.into_iter().collect::<Vec<_>>(),
            vec![(1, 1), (3, 1), (5, 2), (7, 5), (9, 14)]
        );
        let mut sorted = all.clone();
        sorted.sort_by_key(|e| e.to_string());
        assert_eq!(sorted, all);
        assert!(enumerate_excursions(4).is_err());
    }

    #[test]
    fn zeta_of_small_excursions() {
        assert!(Excursion::parse("0").unwrap().zeta().is_empty());
        let z = Excursion::parse("010").unwrap().zeta();
        assert_eq!(z.into_iter().collect::<Vec<_>>(), vec![(1, 1)]);
        let z = Excursion::parse("0110011101011000100").unwrap().zeta();
        assert_eq!(
            z.into_iter().collect::<Vec<_>>(),
            vec![(1, 3), (2, 1), (4, 1)]
        );
    }

    #[test]
    fn length_law() {
        for e in enumerate_excursions(13).unwrap() {
            assert_eq!(content_length(&e.content()), e.len());
        }
    }

    #[test]
    fn fermionic_examples() {
        let n: BTreeMap<u32, i64> = [(1, 1)].into_iter().collect();
        assert_eq!(fermionic_count(&n).unwrap(), 1);
        let n: BTreeMap<u32, i64> = [(1, 1), (2, 1)].into_iter().collect();
        assert_eq!(fermionic_count(&n).unwrap(), 3);
        let bad: BTreeMap<u32, i64> = [(1, -1)].into_iter().collect();
        assert!(fermionic_count(&bad).is_err());
    }

    #[test]
    fn rejects_invalid_words() {
        for w in ["1", "00", "0100", "0110", "00110"] {
            assert!(Excursion::parse(w).is_err(), "{w}");
        }
        assert!(Excursion::parse("01010").is_ok());
    }

    #[test]
    fn contents_counts_are_partition_numbers() {
        let p: Vec<usize> = (0..8).map(|m| contents_of_weight(m).len()).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15]);
    }

    #[test]
    fn embedding_round_trip() {
        for e in enumerate_excursions(11).unwrap() {
            assert_eq!(Excursion::from_config(&e.embed()).unwrap(), e);
        }
    }
}
