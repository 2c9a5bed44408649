use serde::Serialize;

use super::params::AlphaParams;
use crate::error::{BbsError, Result};

/// A pair (a, b) with a > 0, b ≥ 0 and √a + √b < 1, standing for α_k = a·b^{k−1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AB {
    pub a: f64,
    pub b: f64,
}

/// Rows indexed by the current state, columns by the next one.
pub type Matrix2 = [[f64; 2]; 2];

impl AB {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) || !(0.0..1.0).contains(&b) || a.sqrt() + b.sqrt() >= 1.0 {
            return Err(BbsError::Domain(format!(
                "(a, b) = ({a}, {b}) needs 0 < a, 0 ≤ b and √a + √b < 1"
            )));
        }
        Ok(AB { a, b })
    }

    /// Allows a = 0, which arises as a shift of a pair with b = 0.
    pub(crate) fn degenerate_ok(a: f64, b: f64) -> Self {
        AB { a, b }
    }

    fn disc(&self) -> f64 {
        let s = 1.0 - (self.a + self.b);
        (s * s - 4.0 * self.a * self.b).max(0.0).sqrt()
    }

    /// P(a, b).
    pub fn matrix(&self) -> Matrix2 {
        let (a, b, d) = (self.a, self.b, self.disc());
        [
            [(1.0 - a + b + d) / 2.0, (1.0 + a - b - d) / 2.0],
            [(1.0 + a - b + d) / 2.0, (1.0 - a + b - d) / 2.0],
        ]
    }

    /// P′: (p(0,1)p(1,0), p(0,0)p(1,1)).
    pub fn from_matrix(p: &Matrix2) -> Result<Self> {
        for row in p {
            if (row[0] + row[1] - 1.0).abs() > 1e-12
                || row.iter().any(|&x| !(0.0..=1.0).contains(&x))
            {
                return Err(BbsError::Domain("rows must be probability vectors".into()));
            }
        }
        if p[0][1] + p[1][1] >= 1.0 {
            return Err(BbsError::Domain("needs p(0,1) + p(1,1) < 1".into()));
        }
        AB::new(p[0][1] * p[1][0], p[0][0] * p[1][1])
    }

    /// One step of a_k = a b / (1 − a)², b_k = b / (1 − a)².
    pub fn step(&self) -> AB {
        let c = (1.0 - self.a) * (1.0 - self.a);
        AB::degenerate_ok(self.a * self.b / c, self.b / c)
    }

    /// (a_k, b_k).
    pub fn shift(&self, k: usize) -> AB {
        (0..k).fold(*self, |p, _| p.step())
    }

    pub fn alpha(&self) -> AlphaParams {
        AlphaParams {
            head: Vec::new(),
            tail: Some((self.a, self.b)),
        }
    }

    /// P(one) under the stationary law of P(a, b).
    pub fn stationary_one(&self) -> f64 {
        let p = self.matrix();
        p[0][1] / (p[0][1] + p[1][0])
    }

    /// ρ = (1 − √(1 − 4a/(1 + a − b)²)) / 2.
    pub fn density(&self) -> f64 {
        let t = 1.0 + self.a - self.b;
        (1.0 - (1.0 - 4.0 * self.a / (t * t)).sqrt()) / 2.0
    }

    /// E[W_∞(0)] = ρ / √(1 − 4b/(1 − a + b)²).
    pub fn mean_carrier(&self) -> f64 {
        let t = 1.0 - self.a + self.b;
        self.density() / (1.0 - 4.0 * self.b / (t * t)).sqrt()
    }
}

/// (a_k, b_k) for k = 0, 1, 2, … as long as a_k > 0.
pub fn ab_shift(ab: &AB, k: usize) -> AB {
    ab.shift(k)
}

pub fn markov_matrix(ab: &AB) -> Matrix2 {
    ab.matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_zero_matrix() {
        let m = AB::new(0.3, 0.0).unwrap().matrix();
        let want = [[0.7, 0.3], [1.0, 0.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn reference_shift() {
        let s = AB::new(0.2, 0.1).unwrap().shift(1);
        assert!((s.a - 0.03125).abs() < 1e-15 && (s.b - 0.15625).abs() < 1e-15);
    }

    #[test]
    fn inverse_and_density() {
        let ab = AB::new(0.2, 0.1).unwrap();
        let back = AB::from_matrix(&ab.matrix()).unwrap();
        assert!((back.a - 0.2).abs() < 1e-12 && (back.b - 0.1).abs() < 1e-12);
        assert!((ab.density() - ab.stationary_one()).abs() < 1e-12);
        let e = ab.alpha().mean_length().unwrap();
        assert!((ab.density() - (e - 1.0) / (2.0 * e)).abs() < 1e-12);
    }

    #[test]
    fn rejects_outside_domain() {
        assert!(AB::new(0.0, 0.1).is_err());
        assert!(AB::new(0.36, 0.16).is_err());
        assert!(AB::new(0.2, 1.0).is_err());
    }

    #[test]
    fn a_decreases() {
        let mut p = AB::new(0.2, 0.1).unwrap();
        for _ in 0..20 {
            let q = p.step();
            assert!(q.a < p.a);
            p = q;
        }
    }
}
