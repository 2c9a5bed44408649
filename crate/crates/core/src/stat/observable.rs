//! Local observables evaluated at every site of a window.
//!
//! Grammar: factors joined by `*`, each one of
//! `one`, `density`, `eta:J`, `up:K:J`, `down:K:J`, `updown:K:J`, `wseat:K`,
//! `carrier:L` (`carrier:inf`), `pattern:BITS`, or `skip:K:REST` which applies
//! Ψ_K to the whole remaining observable.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::config::BallConfig;
use crate::error::{BbsError, Result};
use crate::seat::{Capacity, SeatEvent, SeatProfile};
use crate::skip::skip_profile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Observable {
    One,
    /// η(j) relative to the evaluation site.
    Eta(i64),
    Up(u32, i64),
    Down(u32, i64),
    /// η↑_k(j) + η↓_k(j).
    UpDown(u32, i64),
    /// 𝒲_k(0).
    SeatLoad(u32),
    /// W_ℓ(0).
    Carrier(Capacity),
    /// 1 if η(j) = p_j for j = 0..|p|.
    Pattern(Vec<u8>),
    Product(Vec<Observable>),
    Skip(u32, Box<Observable>),
}

fn num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| BbsError::Config(format!("bad {what} {s:?} in observable")))
}

fn level(s: &str) -> Result<u32> {
    let k: u32 = num(s, "level")?;
    if k == 0 {
        return Err(BbsError::Config("levels start at 1".into()));
    }
    Ok(k)
}

impl FromStr for Observable {
    type Err = BbsError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("skip:") {
            let (k, inner) = rest.split_once(':').ok_or_else(|| {
                BbsError::Config(format!("skip needs a level and an observable: {s:?}"))
            })?;
            return Ok(Observable::Skip(level(k)?, Box::new(inner.parse()?)));
        }
        if s.contains('*') {
            let parts = s.split('*').map(str::parse).collect::<Result<Vec<_>>>()?;
            return Ok(Observable::Product(parts));
        }
        let f: Vec<&str> = s.split(':').collect();
        Ok(match f.as_slice() {
            ["one"] => Observable::One,
            ["density"] | ["eta0"] => Observable::Eta(0),
            ["eta", j] => Observable::Eta(num(j, "offset")?),
            ["up", k, j] => Observable::Up(level(k)?, num(j, "offset")?),
            ["down", k, j] => Observable::Down(level(k)?, num(j, "offset")?),
            ["updown", k, j] => Observable::UpDown(level(k)?, num(j, "offset")?),
            ["wseat", k] => Observable::SeatLoad(level(k)?),
            ["carrier", l] => Observable::Carrier(
                l.parse()
                    .map_err(|_| BbsError::Config(format!("bad capacity {l:?}")))?,
            ),
            ["pattern", p] if !p.is_empty() && p.chars().all(|c| c == '0' || c == '1') => {
                Observable::Pattern(p.bytes().map(|b| b - b'0').collect())
            }
            _ => return Err(BbsError::Config(format!("unknown observable {s:?}"))),
        })
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::One => write!(f, "one"),
            Observable::Eta(j) => write!(f, "eta:{j}"),
            Observable::Up(k, j) => write!(f, "up:{k}:{j}"),
            Observable::Down(k, j) => write!(f, "down:{k}:{j}"),
            Observable::UpDown(k, j) => write!(f, "updown:{k}:{j}"),
            Observable::SeatLoad(k) => write!(f, "wseat:{k}"),
            Observable::Carrier(c) => write!(f, "carrier:{c}"),
            Observable::Pattern(p) => {
                write!(f, "pattern:")?;
                p.iter().try_for_each(|b| write!(f, "{b}"))
            }
            Observable::Product(v) => {
                let parts: Vec<String> = v.iter().map(|o| o.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
            Observable::Skip(k, o) => write!(f, "skip:{k}:{o}"),
        }
    }
}

impl Observable {
    /// Largest site offset the observable reads, for margin checks.
    pub fn reach(&self) -> i64 {
        match self {
            Observable::One | Observable::SeatLoad(_) | Observable::Carrier(_) => 0,
            Observable::Eta(j)
            | Observable::Up(_, j)
            | Observable::Down(_, j)
            | Observable::UpDown(_, j) => j.abs(),
            Observable::Pattern(p) => p.len() as i64,
            Observable::Product(v) => v.iter().map(Observable::reach).max().unwrap_or(0),
            Observable::Skip(_, o) => o.reach(),
        }
    }
}

/// Per-site arrays of one configuration, plus evaluators for its skip images.
pub struct Evaluator {
    prof: SeatProfile,
    seats: Vec<Vec<u8>>,
    /// Marker sites and the output origin of Ψ_k for every requested k.
    skips: BTreeMap<u32, (Vec<i64>, i64, Box<Evaluator>)>,
}

impl Evaluator {
    pub fn new(cfg: &BallConfig, observables: &[Observable]) -> Self {
        Self::from_profile(SeatProfile::new(cfg), observables)
    }

    fn from_profile(prof: SeatProfile, observables: &[Observable]) -> Self {
        let seats = (1..=prof.k_max()).map(|k| prof.seat_series(k)).collect();
        let mut needed: BTreeMap<u32, Vec<Observable>> = BTreeMap::new();
        for o in observables {
            collect_skips(o, &mut needed);
        }
        let skips = needed
            .into_iter()
            .map(|(k, inner)| {
                let (out, slots) = skip_profile(&prof, k);
                let child = Evaluator::new(&out, &inner);
                (k, (slots.markers().to_vec(), out.origin(), Box::new(child)))
            })
            .collect();
        Evaluator { prof, seats, skips }
    }

    pub fn profile(&self) -> &SeatProfile {
        &self.prof
    }

    fn idx(&self, x: i64) -> Option<usize> {
        (x >= self.prof.lo() && x <= self.prof.hi()).then(|| (x - self.prof.lo()) as usize)
    }

    /// 𝒲_k(η, x).
    pub fn seat_load(&self, k: u32, x: i64) -> u8 {
        match (self.idx(x), self.seats.get(k as usize - 1)) {
            (Some(j), Some(s)) => s[j],
            _ => 0,
        }
    }

    pub fn carrier(&self, cap: Capacity, x: i64) -> u32 {
        match cap {
            Capacity::Infinite => self.prof.load(x),
            Capacity::Finite(l) => (1..=l.min(self.prof.k_max()))
                .map(|k| self.seat_load(k, x) as u32)
                .sum(),
        }
    }

    /// Site of Ψ_k(η) that plays the role of x, i.e. ξ_k(η, x) − ξ_k(η, 0).
    pub fn skip_site(&self, k: u32, x: i64) -> i64 {
        let (markers, origin, _) = &self.skips[&k];
        let p = markers.partition_point(|&m| m <= x) as i64 - 1;
        origin + p
    }

    /// Ψ_{k}(η) at the output site that plays the role of x.
    pub fn skip_eta(&self, k: u32, x: i64) -> u8 {
        let (_, _, child) = &self.skips[&k];
        child.prof.eta(self.skip_site(k, x))
    }

    /// f(τ_x η) for the shift τ_x moving site x to the origin.
    pub fn eval(&self, obs: &Observable, x: i64) -> f64 {
        let p = &self.prof;
        match obs {
            Observable::One => 1.0,
            Observable::Eta(j) => p.eta(x + j) as f64,
            Observable::Up(k, j) => p.up(*k, x + j) as f64,
            Observable::Down(k, j) => p.down(*k, x + j) as f64,
            Observable::UpDown(k, j) => {
                matches!(p.event(x + j), SeatEvent::Up(s) | SeatEvent::Down(s) if s == *k) as u8
                    as f64
            }
            Observable::SeatLoad(k) => self.seat_load(*k, x) as f64,
            Observable::Carrier(c) => self.carrier(*c, x) as f64,
            Observable::Pattern(bits) => {
                bits.iter()
                    .enumerate()
                    .all(|(j, &b)| p.eta(x + j as i64) == b) as u8 as f64
            }
            Observable::Product(v) => v.iter().map(|o| self.eval(o, x)).product(),
            Observable::Skip(k, inner) => {
                let (_, _, child) = &self.skips[k];
                child.eval(inner, self.skip_site(*k, x))
            }
        }
    }
}

fn collect_skips(o: &Observable, needed: &mut BTreeMap<u32, Vec<Observable>>) {
    match o {
        Observable::Skip(k, inner) => needed.entry(*k).or_default().push((**inner).clone()),
        Observable::Product(v) => v.iter().for_each(|x| collect_skips(x, needed)),
        _ => {}
    }
}
