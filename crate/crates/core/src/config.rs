//! Ball configurations on a finite window with implicit zeros outside.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BbsError, Result};
use crate::seat::SeatProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Sites x ≤ 0 are empty; site 0 is where the carrier starts.
    #[serde(rename = "half")]
    HalfLine,
    /// Finite support inside the window, zeros on both sides.
    #[serde(rename = "whole")]
    WholeLine,
}

impl FromStr for Boundary {
    type Err = BbsError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" | "half-line" => Ok(Boundary::HalfLine),
            "whole" | "whole-line" => Ok(Boundary::WholeLine),
            other => Err(BbsError::Parse(format!("unknown boundary mode {other:?}"))),
        }
    }
}

/// A 0/1 configuration: `bits[j]` is the value at site `origin + j`.
///
/// Equality is semantic: two configurations are equal when they have the same
/// boundary and the same set of occupied sites, whatever their windows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallConfig {
    origin: i64,
    #[serde(with = "bitstring")]
    bits: Vec<u8>,
    boundary: Boundary,
}

impl PartialEq for BallConfig {
    fn eq(&self, other: &Self) -> bool {
        self.boundary == other.boundary && self.ones_iter().eq(other.ones_iter())
    }
}

impl Eq for BallConfig {}

impl BallConfig {
    pub fn new(origin: i64, bits: Vec<u8>, boundary: Boundary) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(BbsError::Parse(format!("bit value {b} is not 0/1")));
        }
        let cfg = BallConfig {
            origin,
            bits,
            boundary,
        };
        cfg.check_mode()?;
        Ok(cfg)
    }

    pub(crate) fn from_parts(origin: i64, bits: Vec<u8>, boundary: Boundary) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BallConfig {
            origin,
            bits,
            boundary,
        }
    }

    pub fn vacuum(boundary: Boundary) -> Self {
        BallConfig {
            origin: 0,
            bits: vec![0],
            boundary,
        }
    }

    /// Configuration with balls exactly at `sites`.
    pub fn from_sites(sites: &[i64], boundary: Boundary) -> Result<Self> {
        let (Some(&lo), Some(&hi)) = (sites.iter().min(), sites.iter().max()) else {
            return Ok(Self::vacuum(boundary));
        };
        let mut bits = vec![0u8; (hi - lo + 1) as usize];
        for &x in sites {
            bits[(x - lo) as usize] = 1;
        }
        BallConfig::new(lo, bits, boundary)
    }

    fn check_mode(&self) -> Result<()> {
        if self.boundary == Boundary::HalfLine {
            if let Some(x) = self.first_one() {
                if x <= 0 {
                    return Err(BbsError::Mode(format!(
                        "half-line configuration has a ball at site {x} ≤ 0"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn with_boundary(&self, boundary: Boundary) -> Result<Self> {
        BallConfig::new(self.origin, self.bits.clone(), boundary)
    }

    /// Last site of the window (`origin - 1` for an empty window).
    pub fn window_end(&self) -> i64 {
        self.origin + self.bits.len() as i64 - 1
    }

    pub fn get(&self, x: i64) -> u8 {
        let j = x - self.origin;
        if j < 0 || j >= self.bits.len() as i64 {
            0
        } else {
            self.bits[j as usize]
        }
    }

    fn ones_iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(move |(j, _)| self.origin + j as i64)
    }

    pub fn ones(&self) -> Vec<i64> {
        self.ones_iter().collect()
    }

    pub fn ball_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn first_one(&self) -> Option<i64> {
        self.bits
            .iter()
            .position(|&b| b == 1)
            .map(|j| self.origin + j as i64)
    }

    pub fn last_one(&self) -> Option<i64> {
        self.bits
            .iter()
            .rposition(|&b| b == 1)
            .map(|j| self.origin + j as i64)
    }

    pub fn is_vacuum(&self) -> bool {
        self.first_one().is_none()
    }

    /// Values on the sites `lo..=hi`.
    pub fn values(&self, lo: i64, hi: i64) -> Vec<u8> {
        (lo..=hi).map(|x| self.get(x)).collect()
    }

    /// Same configuration seen through the window `lo..=hi`; balls outside are an error.
    pub fn rewindow(&self, lo: i64, hi: i64) -> Result<Self> {
        if let (Some(a), Some(b)) = (self.first_one(), self.last_one()) {
            if a < lo || b > hi {
                return Err(BbsError::Window(format!(
                    "support {a}..={b} does not fit in window {lo}..={hi}"
                )));
            }
        }
        Ok(BallConfig::from_parts(
            lo,
            self.values(lo, hi),
            self.boundary,
        ))
    }

    /// Trims zeros on both sides, keeping site indices. The vacuum becomes "0" at site 0.
    pub fn canonical(&self) -> Self {
        match (self.first_one(), self.last_one()) {
            (Some(a), Some(b)) => BallConfig::from_parts(a, self.values(a, b), self.boundary),
            _ => Self::vacuum(self.boundary),
        }
    }

    /// Text form: optional `#origin=<int>` line, then the bit string and a newline.
    pub fn render(&self) -> String {
        let mut out = String::with_capacity(self.bits.len() + 16);
        if self.origin != 0 {
            out.push_str(&format!("#origin={}\n", self.origin));
        }
        out.push_str(&self.bit_string());
        out.push('\n');
        out
    }

    pub fn bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect()
    }

    /// τ_y: the configuration x ↦ η(x + y).
    pub fn shift(&self, y: i64) -> Result<Self> {
        if self.boundary != Boundary::WholeLine {
            return Err(BbsError::Mode(
                "shift is defined on the whole line only".into(),
            ));
        }
        Ok(self.shifted(y))
    }

    pub(crate) fn shifted(&self, y: i64) -> Self {
        BallConfig::from_parts(self.origin - y, self.bits.clone(), self.boundary)
    }

    /// Membership flags for the standard subspaces.
    pub fn classify(&self) -> SpaceClass {
        let prof = SeatProfile::new(self);
        let anchored = prof.record_anchor() == 0;
        let left_empty = self.first_one().map_or(true, |x| x >= 0);
        let single = left_empty
            && anchored
            && self
                .last_one()
                .map_or(true, |b| b < prof.next_record_after(0));
        SpaceClass {
            finite_balls: true,
            record_anchored: match self.boundary {
                Boundary::HalfLine => true,
                Boundary::WholeLine => anchored,
            },
            all_records_finite: true,
            single_excursion: single,
        }
    }
}

impl fmt::Display for BallConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bit_string())
    }
}

/// Parses the text form. The default boundary is the whole line.
pub fn parse_config(text: &str, boundary: Boundary) -> Result<BallConfig> {
    let mut origin = 0i64;
    let mut body: Option<&str> = None;
    for line in text.lines() {
        let line = line.trim_end_matches('\r');
        if let Some(rest) = line.strip_prefix("#origin=") {
            if body.is_some() {
                return Err(BbsError::Parse("origin header after the bit string".into()));
            }
            origin = rest
                .trim()
                .parse()
                .map_err(|_| BbsError::Parse(format!("bad origin {rest:?}")))?;
        } else if line.is_empty() {
            continue;
        } else if body.is_some() {
            return Err(BbsError::Parse("more than one bit string".into()));
        } else {
            body = Some(line);
        }
    }
    let body = body.ok_or_else(|| BbsError::Parse("empty input".into()))?;
    let bits = body
        .chars()
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            other => Err(BbsError::Parse(format!("non-binary character {other:?}"))),
        })
        .collect::<Result<Vec<u8>>>()?;
    BallConfig::new(origin, bits, boundary)
}

impl FromStr for BallConfig {
    type Err = BbsError;
    fn from_str(s: &str) -> Result<Self> {
        parse_config(s, Boundary::WholeLine)
    }
}

/// Membership in Ω_{<∞}, Ω_r, Ω_* and Ω_1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpaceClass {
    pub finite_balls: bool,
    /// The last record at or left of the origin is the origin itself.
    pub record_anchored: bool,
    pub all_records_finite: bool,
    /// Empty left of 0 and from the first record after 0 onwards.
    pub single_excursion: bool,
}

mod bitstring {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[u8], s: S) -> Result<S::Ok, S::Error> {
        let text: String = bits
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect();
        s.serialize_str(&text)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let text = String::deserialize(d)?;
        text.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(serde::de::Error::custom("bit string must be 0/1")),
            })
            .collect()
    }
}
