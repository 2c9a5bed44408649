//! Exact samplers for ν_α, the glued measures μ_α / μ̂_α and the Markov chain P(a, b).

use rand::seq::index::sample as sample_indices;
use rand::Rng;

use crate::config::{BallConfig, Boundary};
use crate::elimination::insert_tens;
use crate::error::{BbsError, Result};
use crate::measures::{content_classes, AlphaParams, Excursion, AB};

/// Largest truncated mass accepted by default.
pub const DEFAULT_MAX_DELTA: f64 = 1e-6;

/// Draws from ν_α restricted to excursions of length ≤ cap.
///
/// A soliton content n is drawn with probability ∝ |ℰ(n)| Π α^n, then an
/// excursion is drawn uniformly among those with content n by inserting the
/// k-solitons level by level into uniformly chosen slots of Ψ̃_k(ε).
#[derive(Debug, Clone)]
pub struct ExcursionSampler {
    classes: Vec<Vec<u32>>,
    lengths: Vec<usize>,
    cum: Vec<f64>,
    cum_sized: Vec<f64>,
    delta: f64,
    delta_sized: f64,
}

fn cumulative(w: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    w.map(|x| {
        acc += x;
        acc
    })
    .collect()
}

fn pick(cum: &[f64], rng: &mut impl Rng) -> usize {
    let u = rng.gen::<f64>() * cum[cum.len() - 1];
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

impl ExcursionSampler {
    pub fn new(alpha: &AlphaParams, cap: usize, max_delta: f64) -> Result<Self> {
        if cap % 2 == 0 {
            return Err(BbsError::Domain(format!("length cap {cap} must be odd")));
        }
        let table = content_classes(alpha, (cap - 1) / 2)?;
        let z = alpha.z()?;
        let mean = alpha.mean_length()?;
        let classes: Vec<Vec<u32>> = table.iter().map(|t| t.0.clone()).collect();
        let lengths: Vec<usize> = table.iter().map(|t| t.2).collect();
        let cum = cumulative(table.iter().map(|t| t.1));
        let cum_sized = cumulative(table.iter().map(|t| t.1 * t.2 as f64));
        let delta = (1.0 - cum[cum.len() - 1] / z).max(0.0);
        let delta_sized = (1.0 - cum_sized[cum_sized.len() - 1] / (z * mean)).max(0.0);
        if delta.max(delta_sized) > max_delta {
            return Err(BbsError::Truncation(format!(
                "excursions longer than {cap} carry mass {:.3e} (size-biased {:.3e}), above {max_delta:.1e}",
                delta, delta_sized
            )));
        }
        Ok(ExcursionSampler {
            classes,
            lengths,
            cum,
            cum_sized,
            delta,
            delta_sized,
        })
    }

    /// Mass of ν_α beyond the cap.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Mass of the size-biased law beyond the cap.
    pub fn delta_sized(&self) -> f64 {
        self.delta_sized
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Excursion {
        uniform_with_content(&self.classes[pick(&self.cum, rng)], rng)
    }

    /// A draw from |ε| ν_α(ε) / ε̄(α).
    pub fn sample_size_biased(&self, rng: &mut impl Rng) -> Excursion {
        let j = pick(&self.cum_sized, rng);
        debug_assert!(self.lengths[j] >= 1);
        uniform_with_content(&self.classes[j], rng)
    }
}

/// Uniform draw from the excursions with soliton content n (entry k − 1 holds n_k).
pub fn uniform_with_content(n: &[u32], rng: &mut impl Rng) -> Excursion {
    let mut word = vec![0u8];
    for &nk in n.iter().rev() {
        let slots = word.len();
        let mut parts = vec![0u32; slots];
        if nk > 0 {
            // Stars and bars: nk stars among slots − 1 + nk positions.
            let total = slots - 1 + nk as usize;
            let mut stars: Vec<usize> = sample_indices(rng, total, nk as usize).into_vec();
            stars.sort_unstable();
            for (r, s) in stars.into_iter().enumerate() {
                parts[s - r] += 1;
            }
        }
        word = insert_tens(&word, &parts).0;
    }
    Excursion::from_word_unchecked(word)
}

/// One draw from ν_α with lengths capped.
pub fn sample_excursion(alpha: &AlphaParams, cap: usize, rng: &mut impl Rng) -> Result<Excursion> {
    Ok(ExcursionSampler::new(alpha, cap, DEFAULT_MAX_DELTA)?.sample(rng))
}

/// A sampled whole-line configuration and the sites where it follows the target law.
#[derive(Debug, Clone)]
pub struct Window {
    pub cfg: BallConfig,
    pub lo: i64,
    pub hi: i64,
}

/// Glues `left` excursions, a central one and `right` excursions.
///
/// `palm` selects the central excursion size-biased and puts the origin at a
/// uniform site inside it (the shift-stationary μ_α); otherwise the central
/// excursion is an ordinary draw whose record sits at site 0 (μ̂_α).
pub fn glue(
    sampler: &ExcursionSampler,
    left: usize,
    right: usize,
    palm: bool,
    rng: &mut impl Rng,
) -> (BallConfig, i64) {
    let lefts: Vec<Excursion> = (0..left).map(|_| sampler.sample(rng)).collect();
    let center = if palm {
        sampler.sample_size_biased(rng)
    } else {
        sampler.sample(rng)
    };
    let y = if palm {
        rng.gen_range(0..center.len()) as i64
    } else {
        0
    };
    let rights: Vec<Excursion> = (0..right).map(|_| sampler.sample(rng)).collect();
    let left_len: usize = lefts.iter().map(|e| e.len()).sum();
    let mut bits =
        Vec::with_capacity(left_len + center.len() + rights.iter().map(|e| e.len()).sum::<usize>());
    // lefts[0] is the excursion adjacent to the central one.
    for e in lefts.iter().rev() {
        bits.extend_from_slice(e.word());
    }
    let center_start = bits.len() as i64;
    bits.extend_from_slice(center.word());
    for e in &rights {
        bits.extend_from_slice(e.word());
    }
    let origin = -center_start - y;
    (
        BallConfig::from_parts(origin, bits, Boundary::WholeLine),
        left_len as i64,
    )
}

/// Stationary P(a, b) chain on sites lo..=hi.
pub fn markov_chain(ab: &AB, lo: i64, hi: i64, rng: &mut impl Rng) -> BallConfig {
    let p = ab.matrix();
    let n = (hi - lo + 1).max(0) as usize;
    let mut bits = Vec::with_capacity(n);
    let mut s = u8::from(rng.gen::<f64>() < ab.stationary_one());
    for _ in 0..n {
        bits.push(s);
        s = u8::from(rng.gen::<f64>() < p[s as usize][1]);
    }
    BallConfig::from_parts(lo, bits, Boundary::WholeLine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::enumerate_excursions;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    #[test]
    fn zero_alpha_gives_trivial_excursions() {
        let s = ExcursionSampler::new(&AlphaParams::zero(), 11, 1e-9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert!(s.sample(&mut rng).is_trivial());
        }
    }

    #[test]
    fn uniform_within_content() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        for _ in 0..3000 {
            let e = uniform_with_content(&[1, 1], &mut rng);
            assert_eq!(e.content(), vec![1, 1]);
            *seen.entry(e.to_string()).or_insert(0) += 1;
        }
        let want: Vec<String> = enumerate_excursions(7)
            .unwrap()
            .into_iter()
            .filter(|e| e.content() == vec![1, 1])
            .map(|e| e.to_string())
            .collect();
        assert_eq!(seen.keys().cloned().collect::<Vec<_>>(), want);
        for &c in seen.values() {
            assert!((800..1200).contains(&c), "{seen:?}");
        }
    }

    #[test]
    fn samples_are_valid_excursions() {
        let a = AlphaParams::geometric(0.2, 0.1).unwrap();
        let s = ExcursionSampler::new(&a, 61, 1e-6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let e = s.sample(&mut rng);
            assert!(Excursion::new(e.word().to_vec()).is_ok());
        }
    }

    #[test]
    fn tight_cap_is_refused() {
        let a = AlphaParams::geometric(0.2, 0.1).unwrap();
        assert!(matches!(
            ExcursionSampler::new(&a, 5, 1e-6),
            Err(BbsError::Truncation(_))
        ));
    }

    #[test]
    fn glued_window_layout() {
        let a = AlphaParams::geometric(0.2, 0.1).unwrap();
        let s = ExcursionSampler::new(&a, 61, 1e-6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (cfg, _) = glue(&s, 4, 4, false, &mut rng);
        let prof = crate::seat::SeatProfile::new(&cfg);
        assert!(prof.is_record(0));
        assert_eq!(prof.record_anchor(), 0);
    }
}
