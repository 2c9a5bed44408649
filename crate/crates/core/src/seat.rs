//! Carriers, seat numbers, records, slot coordinates and the ζ coordinates.
//!
//! All quantities are computed on a *frame* `lo..=hi` chosen so that every
//! site left of `lo` and right of `hi` is a record. `lo` is at most 0 and
//! left of every ball; `hi` is the first site at or after the window end
//! where the carrier is empty again. Outside the frame the answers follow
//! from the all-records tails, so no quantity depends on the frame choice.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::config::{BallConfig, Boundary};
use crate::elimination::insert_tens;
use crate::error::{BbsError, Result};

/// Carrier capacity ℓ ∈ ℕ ∪ {∞}; also used for slot levels k ∈ ℕ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Capacity {
    Finite(u32),
    Infinite,
}

impl Capacity {
    pub fn admits(self, k: u32) -> bool {
        match self {
            Capacity::Finite(l) => k <= l,
            Capacity::Infinite => true,
        }
    }

    /// min(k, ℓ) for a finite k.
    pub fn min_with(self, k: u32) -> u32 {
        match self {
            Capacity::Finite(l) => l.min(k),
            Capacity::Infinite => k,
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(l) => write!(f, "{l}"),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Capacity {
    type Err = BbsError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" | "∞" => Ok(Capacity::Infinite),
            n => match n.parse::<u32>() {
                Ok(l) if l >= 1 => Ok(Capacity::Finite(l)),
                _ => Err(BbsError::Parse(format!(
                    "capacity must be a positive integer or inf, got {n:?}"
                ))),
            },
        }
    }
}

impl Serialize for Capacity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Capacity::Finite(l) => s.serialize_u32(*l),
            Capacity::Infinite => s.serialize_str("inf"),
        }
    }
}

/// What happens at a site: exactly one of these holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeatEvent {
    Record,
    Up(u32),
    Down(u32),
}

impl SeatEvent {
    /// Seat number of an up or down event.
    pub fn seat(self) -> Option<u32> {
        match self {
            SeatEvent::Record => None,
            SeatEvent::Up(k) | SeatEvent::Down(k) => Some(k),
        }
    }

    /// Whether the site is counted by ξ at this level: a record or a seat above k.
    pub fn is_marker(self, level: Capacity) -> bool {
        match (self, level) {
            (SeatEvent::Record, _) => true,
            (_, Capacity::Infinite) => false,
            (e, Capacity::Finite(k)) => e.seat().unwrap() > k,
        }
    }

    /// Seat numbers lowered by k; events at seats ≤ k have no image.
    pub fn lowered(self, k: u32) -> Option<SeatEvent> {
        match self {
            SeatEvent::Record => Some(SeatEvent::Record),
            SeatEvent::Up(j) if j > k => Some(SeatEvent::Up(j - k)),
            SeatEvent::Down(j) if j > k => Some(SeatEvent::Down(j - k)),
            _ => None,
        }
    }
}

impl Serialize for SeatEvent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SeatEvent::Record => s.serialize_str("r"),
            SeatEvent::Up(k) => s.serialize_str(&format!("{k}u")),
            SeatEvent::Down(k) => s.serialize_str(&format!("{k}d")),
        }
    }
}

/// The frame `lo..=hi` described in the module docs.
pub(crate) fn frame(cfg: &BallConfig) -> (i64, i64) {
    let mut lo = cfg.origin().min(0);
    if let Some(a) = cfg.first_one() {
        lo = lo.min(a - 1);
    }
    let mut load = 0i64;
    let mut x = lo;
    let end = cfg.window_end().max(0);
    loop {
        if cfg.get(x) == 1 {
            load += 1;
        } else if load > 0 {
            load -= 1;
        }
        if x >= end && load == 0 {
            return (lo, x);
        }
        x += 1;
    }
}

/// Seat events, records and the infinite-capacity load over the frame.
#[derive(Debug, Clone)]
pub struct SeatProfile {
    lo: i64,
    hi: i64,
    boundary: Boundary,
    events: Vec<SeatEvent>,
    bits: Vec<u8>,
    /// W_∞ after each site.
    load: Vec<u32>,
    k_max: u32,
    anchor: i64,
}

impl SeatProfile {
    pub fn new(cfg: &BallConfig) -> Self {
        let (lo, hi) = frame(cfg);
        let n = (hi - lo + 1) as usize;
        let bits = cfg.values(lo, hi);
        let mut events = Vec::with_capacity(n);
        let mut load = Vec::with_capacity(n);
        let mut occupied: BinaryHeap<Reverse<u32>> = BinaryHeap::new();
        let mut vacant: BinaryHeap<Reverse<u32>> = BinaryHeap::new();
        let mut top = 0u32;
        // Largest suffix sum of (2η−1) ending at the previous site.
        let mut suffix = -1i64;
        let mut anchor = lo;
        for (j, &b) in bits.iter().enumerate() {
            let step = if b == 1 { 1 } else { -1 };
            suffix = step + suffix.max(0);
            let ev = if b == 1 {
                let seat = match vacant.pop() {
                    Some(Reverse(s)) => s,
                    None => {
                        top += 1;
                        top
                    }
                };
                occupied.push(Reverse(seat));
                SeatEvent::Up(seat)
            } else if let Some(Reverse(seat)) = occupied.pop() {
                vacant.push(Reverse(seat));
                SeatEvent::Down(seat)
            } else {
                SeatEvent::Record
            };
            debug_assert_eq!(ev == SeatEvent::Record, suffix < 0);
            if ev == SeatEvent::Record && lo + j as i64 <= 0 {
                anchor = lo + j as i64;
            }
            events.push(ev);
            load.push(occupied.len() as u32);
        }
        SeatProfile {
            lo,
            hi,
            boundary: cfg.boundary(),
            events,
            bits,
            load,
            k_max: top,
            anchor,
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Largest seat number ever used.
    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    fn idx(&self, x: i64) -> Option<usize> {
        (x >= self.lo && x <= self.hi).then(|| (x - self.lo) as usize)
    }

    pub fn eta(&self, x: i64) -> u8 {
        self.idx(x).map_or(0, |j| self.bits[j])
    }

    pub fn event(&self, x: i64) -> SeatEvent {
        self.idx(x).map_or(SeatEvent::Record, |j| self.events[j])
    }

    pub fn events(&self) -> &[SeatEvent] {
        &self.events
    }

    pub fn is_record(&self, x: i64) -> bool {
        self.event(x) == SeatEvent::Record
    }

    /// η↑_k(x).
    pub fn up(&self, k: u32, x: i64) -> u8 {
        u8::from(self.event(x) == SeatEvent::Up(k))
    }

    /// η↓_k(x).
    pub fn down(&self, k: u32, x: i64) -> u8 {
        u8::from(self.event(x) == SeatEvent::Down(k))
    }

    /// W_∞(η, x).
    pub fn load(&self, x: i64) -> u32 {
        self.idx(x).map_or(0, |j| self.load[j])
    }

    /// s∞(η, 0): the last record at or left of site 0.
    pub fn record_anchor(&self) -> i64 {
        self.anchor
    }

    /// First record strictly right of x.
    pub fn next_record_after(&self, x: i64) -> i64 {
        let mut y = x + 1;
        while y <= self.hi {
            if self.is_record(y) {
                return y;
            }
            y += 1;
        }
        y
    }

    pub fn records(&self) -> Vec<i64> {
        self.sites().filter(|&x| self.is_record(x)).collect()
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// 𝒲_k(η, x) for every site of the frame.
    pub fn seat_series(&self, k: u32) -> Vec<u8> {
        let mut w = 0u8;
        self.events
            .iter()
            .map(|&e| {
                match e {
                    SeatEvent::Up(j) if j == k => w = 1,
                    SeatEvent::Down(j) if j == k => w = 0,
                    _ => {}
                }
                w
            })
            .collect()
    }

    /// Occupied seats after site x, as a 0/1 vector indexed by seat − 1.
    pub fn occupancy(&self, x: i64) -> Vec<u8> {
        let mut occ = vec![0u8; self.k_max as usize];
        if x < self.lo {
            return occ;
        }
        let last = self.idx(x).unwrap_or(self.events.len() - 1);
        for &e in &self.events[..=last] {
            match e {
                SeatEvent::Up(k) => occ[k as usize - 1] = 1,
                SeatEvent::Down(k) => occ[k as usize - 1] = 0,
                SeatEvent::Record => {}
            }
        }
        occ
    }

    /// 𝒲_k(η, x).
    pub fn seat_load(&self, k: u32, x: i64) -> u8 {
        if k == 0 || k > self.k_max {
            return 0;
        }
        self.occupancy(x)[k as usize - 1]
    }

    /// Σ_{k ≤ ℓ} 𝒲_k(η, x), which equals the capacity-ℓ carrier load.
    pub fn capacity_load(&self, cap: Capacity, x: i64) -> u32 {
        match cap {
            Capacity::Infinite => self.load(x),
            Capacity::Finite(l) => self
                .occupancy(x)
                .iter()
                .take(l as usize)
                .map(|&b| u32::from(b))
                .sum(),
        }
    }

    /// Slot coordinates ξ_k and s_k at the given level.
    pub fn slots(&self, level: Capacity) -> Slots {
        let mut markers = Vec::new();
        let mut j0 = 0usize;
        for (j, &e) in self.events.iter().enumerate() {
            if e.is_marker(level) {
                let x = self.lo + j as i64;
                if x == self.anchor {
                    j0 = markers.len();
                }
                markers.push(x);
            }
        }
        debug_assert_eq!(markers.first(), Some(&self.lo));
        Slots {
            level,
            hi: self.hi,
            markers,
            j0,
        }
    }
}

/// ξ_k(η, ·) and s_k(η, ·) at one level, anchored so that ξ_k(η, s∞(η, 0)) = 0.
#[derive(Debug, Clone)]
pub struct Slots {
    level: Capacity,
    hi: i64,
    markers: Vec<i64>,
    j0: usize,
}

impl Slots {
    pub fn level(&self) -> Capacity {
        self.level
    }

    /// Marker sites inside the frame, in order.
    pub fn markers(&self) -> &[i64] {
        &self.markers
    }

    /// Index of the first marker of the frame.
    pub fn first_index(&self) -> i64 {
        -(self.j0 as i64)
    }

    /// Index of the last marker of the frame.
    pub fn last_index(&self) -> i64 {
        self.markers.len() as i64 - 1 - self.j0 as i64
    }

    /// s_k(η, i). Outside the frame every site is a marker.
    pub fn s(&self, i: i64) -> i64 {
        let j = i + self.j0 as i64;
        let n = self.markers.len() as i64;
        if j < 0 {
            self.markers[0] + j
        } else if j >= n {
            self.hi + (j - n + 1)
        } else {
            self.markers[j as usize]
        }
    }

    /// ξ_k(η, x).
    pub fn xi(&self, x: i64) -> i64 {
        let lo = self.markers[0];
        if x < lo {
            return x - lo - self.j0 as i64;
        }
        if x > self.hi {
            return self.last_index() + (x - self.hi);
        }
        let count = self.markers.partition_point(|&m| m <= x) as i64;
        count - 1 - self.j0 as i64
    }
}

/// Sparse map (k, i) ↦ ζ_k(η, i), zero entries omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ZetaMatrix {
    entries: BTreeMap<(u32, i64), u32>,
}

impl ZetaMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = ((u32, i64), u32)>>(it: I) -> Result<Self> {
        let mut z = ZetaMatrix::new();
        for ((k, i), c) in it {
            if k == 0 {
                return Err(BbsError::Domain("soliton size k must be at least 1".into()));
            }
            z.add(k, i, c);
        }
        Ok(z)
    }

    pub fn add(&mut self, k: u32, i: i64, c: u32) {
        if c > 0 {
            *self.entries.entry((k, i)).or_insert(0) += c;
        }
    }

    pub fn get(&self, k: u32, i: i64) -> u32 {
        self.entries.get(&(k, i)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(u32, i64), u32> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_k(&self) -> u32 {
        self.entries.keys().map(|&(k, _)| k).max().unwrap_or(0)
    }

    /// Row k as an index ↦ count map.
    pub fn row(&self, k: u32) -> BTreeMap<i64, u32> {
        self.entries
            .range((k, i64::MIN)..=(k, i64::MAX))
            .map(|(&(_, i), &c)| (i, c))
            .collect()
    }

    /// Number of k-solitons for each k.
    pub fn totals(&self) -> BTreeMap<u32, u32> {
        let mut t = BTreeMap::new();
        for (&(k, _), &c) in &self.entries {
            *t.entry(k).or_insert(0) += c;
        }
        t
    }

    /// Σ k·ζ_k(i): the number of balls.
    pub fn weight(&self) -> u64 {
        self.entries
            .iter()
            .map(|(&(k, _), &c)| k as u64 * c as u64)
            .sum()
    }

    /// Rows k+ℓ for k ≥ 1 relabelled as rows k.
    pub fn drop_levels(&self, l: u32) -> ZetaMatrix {
        ZetaMatrix {
            entries: self
                .entries
                .iter()
                .filter(|(&(k, _), _)| k > l)
                .map(|(&(k, i), &c)| ((k - l, i), c))
                .collect(),
        }
    }
}

impl Serialize for ZetaMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for (&(k, i), &c) in &self.entries {
            seq.serialize_element(&(k, i, c))?;
        }
        seq.end()
    }
}

/// Which seat events define ζ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaForm {
    Up,
    Down,
}

/// ζ_k(η, i) = Σ_{y = s_k(i)+1}^{s_k(i+1)} (η^σ_k(y) − η^σ_{k+1}(y)).
pub fn zeta_with(prof: &SeatProfile, form: ZetaForm) -> ZetaMatrix {
    let mut z = ZetaMatrix::new();
    for k in 1..=prof.k_max() {
        let level = Capacity::Finite(k);
        let mut row: BTreeMap<i64, i64> = BTreeMap::new();
        let slots = prof.slots(level);
        let mut idx = slots.first_index() - 1;
        for &e in prof.events() {
            let (this, next) = match (form, e) {
                (ZetaForm::Up, SeatEvent::Up(s)) | (ZetaForm::Down, SeatEvent::Down(s)) => {
                    (s == k, s == k + 1)
                }
                _ => (false, false),
            };
            if e.is_marker(level) {
                idx += 1;
                // A (k+1)-event sits on a marker and closes the interval of index idx − 1.
                if next {
                    *row.entry(idx - 1).or_insert(0) -= 1;
                }
            }
            if this {
                *row.entry(idx).or_insert(0) += 1;
            }
        }
        for (i, c) in row {
            debug_assert!(c >= 0, "negative ζ at k={k}, i={i}");
            if c > 0 {
                z.add(k, i, c as u32);
            }
        }
    }
    z
}

/// ζ(η) from the up-seat definition.
pub fn zeta_of(cfg: &BallConfig) -> ZetaMatrix {
    zeta_with(&SeatProfile::new(cfg), ZetaForm::Up)
}

/// Rebuilds the configuration with the given ζ whose last record at or left of 0 is 0.
///
/// Works top-down: starting from the vacuum as Ψ_K(η), each level inserts the
/// 1-solitons of Ψ_{k−1}(η) back between the letters of Ψ_k(η).
pub fn reconstruct_from_zeta(z: &ZetaMatrix, boundary: Boundary) -> Result<BallConfig> {
    if boundary == Boundary::HalfLine {
        if let Some(&(k, i)) = z.entries().keys().find(|&&(_, i)| i < 0) {
            return Err(BbsError::Domain(format!(
                "half-line ζ has an entry at negative index ({k}, {i})"
            )));
        }
    }
    let mut cur = BallConfig::vacuum(Boundary::WholeLine);
    for k in (1..=z.max_k()).rev() {
        cur = insert_level(&cur, &z.row(k));
    }
    cur.with_boundary(boundary).map(|c| c.canonical())
}

/// Inverse of one skip step on the whole line: `cur` plays Ψ_1(η) and `rig` plays ζ_1(η, ·).
pub(crate) fn insert_level(cur: &BallConfig, rig: &BTreeMap<i64, u32>) -> BallConfig {
    let mut left = 0i64;
    let mut right = 0i64;
    if let (Some(a), Some(b)) = (cur.first_one(), cur.last_one()) {
        left = left.min(a);
        right = right.max(b);
    }
    if let (Some((&a, _)), Some((&b, _))) = (rig.first_key_value(), rig.last_key_value()) {
        left = left.min(a);
        right = right.max(b);
    }
    let from = left - 1;
    let word = cur.values(from, right + 1);
    let counts: Vec<u32> = (from..=right + 1)
        .map(|i| rig.get(&i).copied().unwrap_or(0))
        .collect();
    let (bits, positions) = insert_tens(&word, &counts);
    let origin = -(positions[(-from) as usize] as i64);
    BallConfig::from_parts(origin, bits, Boundary::WholeLine)
}

/// Capacity-ℓ carrier loads W_ℓ(η, x) on the frame, simulated directly from the carrier rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrierLoads {
    pub lo: i64,
    pub loads: Vec<u32>,
}

impl CarrierLoads {
    pub fn at(&self, x: i64) -> u32 {
        let j = x - self.lo;
        if j < 0 || j >= self.loads.len() as i64 {
            0
        } else {
            self.loads[j as usize]
        }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.loads.len() as i64 - 1
    }
}

pub fn run_carrier(cfg: &BallConfig, cap: Capacity) -> CarrierLoads {
    let (lo, hi) = frame(cfg);
    let mut w = 0u32;
    let loads = (lo..=hi)
        .map(|x| {
            if cfg.get(x) == 1 {
                if cap.admits(w + 1) {
                    w += 1;
                }
            } else if w > 0 {
                w -= 1;
            }
            w
        })
        .collect();
    CarrierLoads { lo, loads }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn fig() -> BallConfig {
        parse_config("011001110101100010", Boundary::HalfLine).unwrap()
    }

    #[test]
    fn reference_carrier_loads() {
        let w = run_carrier(&fig(), Capacity::Infinite);
        let got: Vec<u32> = (0..18).map(|x| w.at(x)).collect();
        assert_eq!(
            got,
            vec![0, 1, 2, 1, 0, 1, 2, 3, 2, 3, 2, 3, 4, 3, 2, 1, 2, 1]
        );
        assert_eq!(w.hi(), 18);
        assert_eq!(w.at(18), 0);
    }

    #[test]
    fn capacity_one_alternates() {
        let c = parse_config("01010101", Boundary::HalfLine).unwrap();
        let w = run_carrier(&c, Capacity::Finite(1));
        let got: Vec<u32> = (1..8).map(|x| w.at(x)).collect();
        assert_eq!(got, vec![1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn reference_seat_events() {
        let p = SeatProfile::new(&fig());
        use SeatEvent::*;
        let expect = [
            Record,
            Up(1),
            Up(2),
            Down(1),
            Down(2),
            Up(1),
            Up(2),
            Up(3),
            Down(1),
            Up(1),
            Down(1),
            Up(1),
            Up(4),
            Down(1),
            Down(2),
            Down(3),
            Up(1),
            Down(1),
            Down(4),
            Record,
        ];
        for (x, e) in expect.iter().enumerate() {
            assert_eq!(p.event(x as i64), *e, "site {x}");
        }
        assert_eq!(p.k_max(), 4);
    }

    #[test]
    fn vacuum_is_all_records() {
        let v = BallConfig::vacuum(Boundary::WholeLine);
        let p = SeatProfile::new(&v);
        assert!(p.sites().all(|x| p.is_record(x)));
        let s = p.slots(Capacity::Infinite);
        for i in -5..5 {
            assert_eq!(s.s(i), i);
            assert_eq!(s.xi(i), i);
        }
        assert!(zeta_of(&v).is_empty());
    }

    #[test]
    fn reference_slots_level_one() {
        let p = SeatProfile::new(&fig());
        let s = p.slots(Capacity::Finite(1));
        let got: Vec<i64> = (0..9).map(|i| s.s(i)).collect();
        assert_eq!(got, vec![0, 2, 4, 6, 7, 12, 14, 15, 18]);
        assert_eq!(s.s(9), 19);
        for i in 0..12 {
            assert_eq!(s.xi(s.s(i)), i);
        }
    }

    #[test]
    fn whole_line_single_ball_records() {
        let c = BallConfig::from_sites(&[0], Boundary::WholeLine).unwrap();
        let p = SeatProfile::new(&c);
        let s = p.slots(Capacity::Infinite);
        assert_eq!(s.s(0), -1);
        assert_eq!(s.s(1), 2);
        assert_eq!(p.record_anchor(), -1);
    }

    #[test]
    fn reference_zeta() {
        let z = zeta_of(&fig());
        let expect: BTreeMap<(u32, i64), u32> =
            [((1, 4), 2), ((1, 7), 1), ((2, 0), 1), ((4, 0), 1)]
                .into_iter()
                .collect();
        assert_eq!(z.entries(), &expect);
        let p = SeatProfile::new(&fig());
        assert_eq!(zeta_with(&p, ZetaForm::Down), z);
    }

    #[test]
    fn two_one_solitons() {
        let c = parse_config("01010", Boundary::WholeLine).unwrap();
        let z = zeta_of(&c);
        assert_eq!(z.totals().get(&1), Some(&2));
        // No marker separates the two, so both sit in slot 0.
        assert_eq!(z.get(1, 0), 2);
        assert_eq!(z.entries().len(), 1);
    }

    #[test]
    fn reconstruct_reference() {
        let z = zeta_of(&fig());
        let back = reconstruct_from_zeta(&z, Boundary::HalfLine).unwrap();
        assert_eq!(back, fig());
        assert_eq!(
            reconstruct_from_zeta(&ZetaMatrix::new(), Boundary::WholeLine).unwrap(),
            BallConfig::vacuum(Boundary::WholeLine)
        );
    }

    #[test]
    fn reconstruct_rejects_negative_half_line_index() {
        let z = ZetaMatrix::from_entries([((1, -1), 1)]).unwrap();
        assert!(matches!(
            reconstruct_from_zeta(&z, Boundary::HalfLine),
            Err(BbsError::Domain(_))
        ));
        let w = reconstruct_from_zeta(&z, Boundary::WholeLine).unwrap();
        assert_eq!(zeta_of(&w), z);
    }

    #[test]
    fn seat_sums_give_capacity_loads() {
        let c = fig();
        let p = SeatProfile::new(&c);
        for l in 1..=5 {
            let w = run_carrier(&c, Capacity::Finite(l));
            for x in p.sites() {
                assert_eq!(
                    p.capacity_load(Capacity::Finite(l), x),
                    w.at(x),
                    "l={l} x={x}"
                );
            }
        }
    }
}
