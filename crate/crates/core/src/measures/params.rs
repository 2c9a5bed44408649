use serde::{Deserialize, Serialize};

use super::excursion::{
    content_length, contents_of_weight_bounded, enumerate_excursions, fermionic_count_dense,
    Excursion,
};
use crate::error::{BbsError, Result};

/// q values below this are treated as the end of the sequence when an
/// infinite α is converted to q.
pub const Q_TAIL_TOL: f64 = 1e-17;

/// Hard stop on the number of θ steps taken while following a geometric tail.
const MAX_LEVELS: usize = 10_000;

/// α_k for k ≤ head.len() is head[k−1]; beyond that α_k = a·b^{k−1−h} if a tail is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaParams {
    pub head: Vec<f64>,
    pub tail: Option<(f64, f64)>,
}

impl AlphaParams {
    pub fn finite(head: Vec<f64>) -> Result<Self> {
        let p = AlphaParams { head, tail: None };
        p.validate()?;
        Ok(p)
    }

    /// α_k = a·b^{k−1}.
    pub fn geometric(a: f64, b: f64) -> Result<Self> {
        let p = AlphaParams {
            head: Vec::new(),
            tail: Some((a, b)),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn zero() -> Self {
        AlphaParams {
            head: Vec::new(),
            tail: None,
        }
    }

    fn validate(&self) -> Result<()> {
        for (j, &a) in self.head.iter().enumerate() {
            if !(0.0..1.0).contains(&a) {
                return Err(BbsError::Domain(format!(
                    "α_{} = {a} is outside [0, 1)",
                    j + 1
                )));
            }
        }
        if let Some((a, b)) = self.tail {
            if !(0.0..1.0).contains(&a) || !(0.0..1.0).contains(&b) {
                return Err(BbsError::Domain(format!(
                    "geometric tail ({a}, {b}) is outside [0, 1)²"
                )));
            }
        }
        Ok(())
    }

    pub fn get(&self, k: usize) -> f64 {
        assert!(k >= 1);
        let h = self.head.len();
        if k <= h {
            self.head[k - 1]
        } else {
            match self.tail {
                Some((a, b)) => a * b.powi((k - 1 - h) as i32),
                None => 0.0,
            }
        }
    }

    /// No nonzero entry anywhere.
    pub fn is_zero(&self) -> bool {
        self.head.iter().all(|&a| a == 0.0) && self.tail.map_or(true, |(a, _)| a == 0.0)
    }

    /// Index of the last nonzero entry, or None for an infinite tail.
    pub fn support(&self) -> Option<usize> {
        if matches!(self.tail, Some((a, _)) if a > 0.0) {
            return None;
        }
        Some(
            self.head
                .iter()
                .rposition(|&a| a != 0.0)
                .map_or(0, |j| j + 1),
        )
    }

    /// (θα)_k = α_{k+1} / (1 − α_1)^{2k}.
    pub fn theta(&self) -> Result<AlphaParams> {
        let a1 = self.get(1);
        if a1 >= 1.0 {
            return Err(BbsError::Domain("θ needs α_1 < 1".into()));
        }
        let c = 1.0 - a1;
        let h = self.head.len();
        let head: Vec<f64> = (1..h)
            .map(|k| self.head[k] / c.powi(2 * k as i32))
            .collect();
        let tail = self.tail.map(|(a, b)| {
            if h == 0 {
                (a * b / (c * c), b / (c * c))
            } else {
                (a / c.powi(2 * h as i32), b / (c * c))
            }
        });
        let out = AlphaParams { head, tail };
        if let Some((a, b)) = out.tail {
            if b >= 1.0 || a >= 1.0 {
                return Err(BbsError::NotInA(format!(
                    "θ produced the geometric tail ({a}, {b})"
                )));
            }
        }
        if let Some(j) = out.head.iter().position(|&a| a >= 1.0) {
            return Err(BbsError::NotInA(format!(
                "θ produced α_{} = {}",
                j + 1,
                out.head[j]
            )));
        }
        Ok(out)
    }

    pub fn theta_n(&self, n: usize) -> Result<AlphaParams> {
        let mut cur = self.clone();
        for _ in 0..n {
            cur = cur.theta()?;
        }
        Ok(cur)
    }

    /// (C_k α)_ℓ = α_ℓ for ℓ ≤ k, 0 otherwise.
    pub fn cutoff(&self, k: usize) -> AlphaParams {
        AlphaParams {
            head: (1..=k).map(|j| self.get(j)).collect(),
            tail: None,
        }
    }

    /// q(α): q_1 = α_1 and q_k = α_k / Π_{ℓ<k} (1 − q_ℓ)^{2(k−ℓ)}.
    ///
    /// Uses q_k = (θ^{k−1}α)_1. A geometric tail is followed until q_k < Q_TAIL_TOL.
    pub fn to_q(&self) -> Result<QParams> {
        let mut q = Vec::new();
        let mut cur = self.clone();
        for _ in 0..MAX_LEVELS {
            if let Some(s) = cur.support() {
                if s == 0 {
                    return Ok(QParams { q });
                }
            } else if cur.head.is_empty() && cur.get(1) < Q_TAIL_TOL {
                return Ok(QParams { q });
            }
            let a1 = cur.get(1);
            if a1 >= 1.0 {
                return Err(BbsError::NotInA(format!("q_{} = {a1} ≥ 1", q.len() + 1)));
            }
            q.push(a1);
            cur = cur.theta()?;
        }
        Err(BbsError::Convergence(
            "geometric tail did not decay while converting to q".into(),
        ))
    }

    /// Z_α = Π_k 1/(1 − q_k).
    pub fn z(&self) -> Result<f64> {
        Ok(self.to_q()?.z())
    }

    /// ε̄(α) from the q-recursion.
    pub fn mean_length(&self) -> Result<f64> {
        mean_length_q(&self.to_q()?)
    }

    /// ν_α(ε) = Z_α⁻¹ Π_k α_k^{ζ_k(ε)}.
    pub fn nu(&self, eps: &Excursion) -> Result<f64> {
        Ok(self.weight_of_content(&eps.content()) / self.z()?)
    }

    /// Π_k α_k^{n_k}.
    pub fn weight_of_content(&self, n: &[u32]) -> f64 {
        let mut logw = 0.0;
        for (j, &c) in n.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let a = self.get(j + 1);
            if a == 0.0 {
                return 0.0;
            }
            logw += c as f64 * a.ln();
        }
        logw.exp()
    }
}

/// A finite geometric-slot parameter sequence q_1, q_2, …, zero beyond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QParams {
    pub q: Vec<f64>,
}

impl QParams {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        for (j, &x) in q.iter().enumerate() {
            if !(0.0..1.0).contains(&x) {
                return Err(BbsError::Domain(format!(
                    "q_{} = {x} is outside [0, 1)",
                    j + 1
                )));
            }
        }
        Ok(QParams { q })
    }

    pub fn get(&self, k: usize) -> f64 {
        self.q.get(k - 1).copied().unwrap_or(0.0)
    }

    /// (θ̃q)_k = q_{k+1}.
    pub fn theta_tilde(&self) -> QParams {
        QParams {
            q: self.q.iter().skip(1).copied().collect(),
        }
    }

    /// α(q)_k = q_k Π_{ℓ<k} (1 − q_ℓ)^{2(k−ℓ)}.
    pub fn to_alpha(&self) -> AlphaParams {
        let head = (1..=self.q.len())
            .map(|k| {
                let mut v = self.get(k);
                for l in 1..k {
                    v *= (1.0 - self.get(l)).powi(2 * (k - l) as i32);
                }
                v
            })
            .collect();
        AlphaParams { head, tail: None }
    }

    pub fn z(&self) -> f64 {
        self.q.iter().map(|&q| 1.0 / (1.0 - q)).product()
    }

    /// Σ_k k q_k, finite exactly when q is in the "plus" class.
    pub fn first_moment(&self) -> f64 {
        self.q
            .iter()
            .enumerate()
            .map(|(j, &q)| (j + 1) as f64 * q)
            .sum()
    }

    /// φ_q(ε) = Π_k q_k^{ζ_k} (1 − q_k)^{1 + 2 Σ_ℓ ℓ ζ_{k+ℓ}}.
    pub fn phi(&self, eps: &Excursion) -> f64 {
        let n = eps.content();
        let kmax = n.len().max(self.q.len());
        let mut logp = 0.0;
        for k in 1..=kmax {
            let q = self.get(k);
            let nk = n.get(k - 1).copied().unwrap_or(0);
            if nk > 0 {
                if q == 0.0 {
                    return 0.0;
                }
                logp += nk as f64 * q.ln();
            }
            let slots: u64 = 1 + 2
                * (k + 1..=n.len())
                    .map(|l| (l - k) as u64 * n[l - 1] as u64)
                    .sum::<u64>();
            logp += slots as f64 * (1.0 - q).ln();
        }
        logp.exp()
    }
}

/// Converts α to q or q to α.
#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Alpha(AlphaParams),
    Q(QParams),
}

pub fn alpha_q_convert(x: &Params) -> Result<Params> {
    match x {
        Params::Alpha(a) => Ok(Params::Q(a.to_q()?)),
        Params::Q(q) => Ok(Params::Alpha(q.to_alpha())),
    }
}

/// ε̄(θ^ℓ α) for ℓ = 0..=q.len() from
/// ε̄(θ^ℓα) − 1 = 2 Σ_{h>ℓ} (h − ℓ) q_h ε̄(θ^h α) / (1 − q_h).
pub fn mean_length_ladder(q: &QParams) -> Vec<f64> {
    let n = q.q.len();
    let mut e = vec![1.0; n + 1];
    for l in (0..n).rev() {
        let mut s = 0.0;
        for h in l + 1..=n {
            let qh = q.get(h);
            s += (h - l) as f64 * qh * e[h] / (1.0 - qh);
        }
        e[l] = 1.0 + 2.0 * s;
    }
    e
}

pub fn mean_length_q(q: &QParams) -> Result<f64> {
    Ok(mean_length_ladder(q)[0])
}

/// F(θ^ℓ α) by backward recurrence of the given depth seeded with 1.
fn cf_factor(q: &QParams, l: usize, depth: usize) -> Result<f64> {
    let mut f = 1.0;
    for j in (l..l + depth).rev() {
        if f == 0.0 {
            return Err(BbsError::Convergence(format!(
                "continued fraction hit a zero denominator at level {j}"
            )));
        }
        f = 2.0 / (1.0 - q.get(j + 1)) - 1.0 / f;
    }
    Ok(f)
}

/// ε̄(α) = Π_ℓ F(θ^ℓ α) with each F cut at `depth` levels.
pub fn mean_length_cf(alpha: &AlphaParams, depth: usize, tol: f64) -> Result<f64> {
    if depth == 0 {
        return Err(BbsError::Domain(
            "continued fraction depth must be positive".into(),
        ));
    }
    let q = alpha.to_q()?;
    let mut prod = 1.0;
    for l in 0..MAX_LEVELS {
        let f = cf_factor(&q, l, depth)?;
        let g = cf_factor(&q, l, 2 * depth)?;
        if (f - g).abs() > tol * g.abs() {
            return Err(BbsError::Convergence(format!(
                "F(θ^{l}α) changes by {:.3e} between depth {depth} and {}",
                (f - g).abs(),
                2 * depth
            )));
        }
        prod *= f;
        if (f - 1.0).abs() < tol {
            return Ok(prod);
        }
    }
    Err(BbsError::Convergence(format!(
        "continued fraction product did not settle within {MAX_LEVELS} factors"
    )))
}

/// The individual factors F(θ^ℓ α), ℓ = 0..count.
pub fn cf_factors(alpha: &AlphaParams, depth: usize, count: usize) -> Result<Vec<f64>> {
    let q = alpha.to_q()?;
    (0..count).map(|l| cf_factor(&q, l, depth)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub cap: usize,
    pub z: f64,
    pub mean_length: f64,
    /// Estimated mass of excursions longer than the cap, relative to Z.
    pub z_tail: f64,
    /// Estimated absolute error of the mean length.
    pub mean_error: f64,
}

/// Z_α and ε̄(α) summed over excursions of length ≤ cap.
///
/// Excursions are grouped by content n and counted with the fermionic formula,
/// so the cost grows with the number of partitions of (cap − 1)/2 rather than
/// with the Catalan numbers. The tail beyond the cap is bounded by extending
/// the ratio of the last two level masses geometrically.
pub fn partition_and_mean(alpha: &AlphaParams, cap: usize) -> Result<PartitionReport> {
    if cap % 2 == 0 {
        return Err(BbsError::Domain(format!("length cap {cap} must be odd")));
    }
    let top = (cap - 1) / 2;
    let mut level = vec![0.0; top + 1];
    let max_part = alpha.support().unwrap_or(top);
    for (m, lv) in level.iter_mut().enumerate() {
        for n in contents_of_weight_bounded(m, max_part) {
            let w = alpha.weight_of_content(&n);
            if w > 0.0 {
                *lv += fermionic_count_dense(&n)? as f64 * w;
            }
        }
    }
    let z: f64 = level.iter().sum();
    let lsum: f64 = level
        .iter()
        .enumerate()
        .map(|(m, t)| (1 + 2 * m) as f64 * t)
        .sum();
    let (z_tail_abs, l_tail_abs) = if top == 0 {
        (0.0, 0.0)
    } else {
        let (t1, t0) = (level[top], level[top - 1]);
        if t1 == 0.0 {
            (0.0, 0.0)
        } else {
            let r = if t0 > 0.0 { t1 / t0 } else { 1.0 };
            if r >= 1.0 {
                return Err(BbsError::NotInA(format!(
                    "level masses do not shrink at cap {cap} (ratio {r:.4})"
                )));
            }
            let g = r / (1.0 - r);
            (
                t1 * g,
                t1 * ((1 + 2 * top) as f64 * g + 2.0 * r / ((1.0 - r) * (1.0 - r))),
            )
        }
    };
    let mean = lsum / z;
    let mean_error = (l_tail_abs + mean * z_tail_abs) / z;
    Ok(PartitionReport {
        cap,
        z,
        mean_length: mean,
        z_tail: z_tail_abs / z,
        mean_error,
    })
}

/// The same sums by walking every excursion of length ≤ cap.
pub fn partition_and_mean_enumerated(alpha: &AlphaParams, cap: usize) -> Result<(f64, f64)> {
    let mut z = 0.0;
    let mut l = 0.0;
    for e in enumerate_excursions(cap)? {
        let w = alpha.weight_of_content(&e.content());
        z += w;
        l += w * e.len() as f64;
    }
    Ok((z, l / z))
}

/// |ℰ(n)| Π α^n for every content of weight ≤ top, with the length of its excursions.
pub(crate) fn content_classes(
    alpha: &AlphaParams,
    top: usize,
) -> Result<Vec<(Vec<u32>, f64, usize)>> {
    let mut out = Vec::new();
    let max_part = alpha.support().unwrap_or(top);
    for m in 0..=top {
        for n in contents_of_weight_bounded(m, max_part) {
            let w = alpha.weight_of_content(&n);
            if w > 0.0 {
                let len = content_length(&n);
                out.push((n.clone(), fermionic_count_dense(&n)? as f64 * w, len));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn zero_alpha() {
        let z = AlphaParams::zero();
        assert_eq!(z.z().unwrap(), 1.0);
        assert_eq!(z.mean_length().unwrap(), 1.0);
        assert_eq!(mean_length_cf(&z, 40, 1e-10).unwrap(), 1.0);
        assert!(z.theta().unwrap().is_zero());
        let r = partition_and_mean(&z, 21).unwrap();
        assert_eq!((r.z, r.mean_length), (1.0, 1.0));
    }

    #[test]
    fn geometric_theta_is_geometric() {
        let g = AlphaParams::geometric(0.2, 0.1).unwrap();
        let t = g.theta().unwrap();
        let (a, b) = t.tail.unwrap();
        assert!(close(a, 0.03125, 1e-15) && close(b, 0.15625, 1e-15));
        for k in 1..8 {
            let direct = g.get(k + 1) / 0.8f64.powi(2 * k as i32);
            assert!(close(t.get(k), direct, 1e-13));
        }
    }

    #[test]
    fn theta_on_head_and_tail() {
        let p = AlphaParams {
            head: vec![0.1, 0.05, 0.02],
            tail: Some((0.01, 0.3)),
        };
        let t = p.theta().unwrap();
        for k in 1..10 {
            let direct = p.get(k + 1) / 0.9f64.powi(2 * k as i32);
            assert!(close(t.get(k), direct, 1e-13), "k={k}");
        }
    }

    #[test]
    fn alpha_q_round_trip() {
        let a = AlphaParams::finite(vec![0.1, 0.03, 0.0, 0.004]).unwrap();
        let back = a.to_q().unwrap().to_alpha();
        for k in 1..=4 {
            assert!(close(back.get(k), a.get(k), 1e-12));
        }
        let q = QParams::new(vec![0.3]).unwrap();
        assert_eq!(q.to_alpha().head, vec![0.3]);
        let g = AlphaParams::geometric(0.2, 0.1).unwrap();
        assert_eq!(g.to_q().unwrap().q[0], 0.2);
    }

    #[test]
    fn three_mean_length_oracles_agree() {
        let g = AlphaParams::geometric(0.05, 0.05).unwrap();
        let cf = mean_length_cf(&g, 40, 1e-12).unwrap();
        let ql = g.mean_length().unwrap();
        let pm = partition_and_mean(&g, 41).unwrap();
        assert!(close(cf, ql, 1e-10));
        assert!(close(pm.mean_length, ql, 1e-8));
        assert!(close(pm.z, g.z().unwrap(), 1e-8));
        // Bernoulli density for a = b.
        let rho = (1.0 - (1.0f64 - 0.2).sqrt()) / 2.0;
        assert!(close(ql, 1.0 / (1.0 - 2.0 * rho), 1e-10));
    }

    #[test]
    fn class_sums_match_enumeration() {
        let a = AlphaParams {
            head: vec![0.2, 0.07],
            tail: Some((0.03, 0.4)),
        };
        let pm = partition_and_mean(&a, 15).unwrap();
        let (z, m) = partition_and_mean_enumerated(&a, 15).unwrap();
        assert!(close(pm.z, z, 1e-12) && close(pm.mean_length, m, 1e-12));
    }

    #[test]
    fn phi_equals_nu() {
        let q = QParams::new(vec![0.2, 0.1, 0.05]).unwrap();
        let a = q.to_alpha();
        for e in enumerate_excursions(11).unwrap() {
            assert!(close(q.phi(&e), a.nu(&e).unwrap(), 1e-12), "{e}");
        }
    }

    #[test]
    fn divergent_alpha_is_rejected() {
        let bad = AlphaParams::geometric(0.6, 0.6).unwrap();
        assert!(matches!(bad.to_q(), Err(BbsError::NotInA(_))));
    }
}
