//! Exponential polynomials f(z) = Σ c_α e^{α·z} with support in Z^n, and the
//! small lattice/volume helpers used throughout the crate.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative magnitude below which a coefficient is considered ambiguous and
/// rejected, so that support membership is never decided by noise.
pub const COEFF_REL_CUTOFF: f64 = 1e-14;

/// One term c·e^{α·z}.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub alpha: Vec<i64>,
    pub c: Complex64,
}

/// An exponential polynomial with finite support A ⊂ Z^n and nonzero
/// complex coefficients.
///
/// Exponent vectors are pairwise distinct, each has exactly `n` entries,
/// and terms are kept sorted lexicographically by exponent so that all
/// derived data is deterministic.
#[derive(Debug, Clone)]
pub struct ExpPoly {
    n: usize,
    terms: Vec<Term>,
}

impl ExpPoly {
    /// Validates and builds an exponential polynomial.
    ///
    /// A single-term input is legal (its Newton polytope is a point and the
    /// shell is empty); an empty input is not.
    pub fn new(n: usize, terms: Vec<(Vec<i64>, Complex64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPoly("dimension must be positive".into()));
        }
        if terms.is_empty() {
            return Err(Error::InvalidPoly("no terms".into()));
        }
        let max_abs = terms
            .iter()
            .map(|(_, c)| c.norm())
            .fold(0.0f64, f64::max);
        if !max_abs.is_finite() || max_abs == 0.0 {
            return Err(Error::InvalidPoly("no nonzero finite coefficient".into()));
        }
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (alpha, c) in terms {
            if alpha.len() != n {
                return Err(Error::InvalidPoly(format!(
                    "exponent {alpha:?} has {} entries, expected {n}",
                    alpha.len()
                )));
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::InvalidPoly(format!(
                    "non-finite coefficient at {alpha:?}"
                )));
            }
            if c.norm() < COEFF_REL_CUTOFF * max_abs.max(1.0) {
                return Err(Error::InvalidPoly(format!(
                    "coefficient at {alpha:?} is numerically zero; drop the term instead"
                )));
            }
            out.push(Term { alpha, c });
        }
        out.sort_by(|a, b| a.alpha.cmp(&b.alpha));
        for w in out.windows(2) {
            if w[0].alpha == w[1].alpha {
                return Err(Error::InvalidPoly(format!(
                    "duplicate exponent {:?}",
                    w[0].alpha
                )));
            }
        }
        Ok(ExpPoly { n, terms: out })
    }

    /// Ambient dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// The support A, sorted lexicographically.
    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.iter().map(|t| t.alpha.clone()).collect()
    }

    /// Coefficient at a given exponent, if present.
    pub fn coefficient(&self, alpha: &[i64]) -> Option<Complex64> {
        self.terms
            .binary_search_by(|t| t.alpha.as_slice().cmp(alpha))
            .ok()
            .map(|i| self.terms[i].c)
    }

    /// A single-term polynomial; the Newton polytope is a point and every
    /// downstream object (shell, S matrix, counts) is empty or zero.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Multiplies by e^{shift·z}, translating the support. Leaves the shell,
    /// the S matrix and all counts unchanged.
    pub fn translated(&self, shift: &[i64]) -> ExpPoly {
        assert_eq!(shift.len(), self.n);
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                alpha: t.alpha.iter().zip(shift).map(|(a, s)| a + s).collect(),
                c: t.c,
            })
            .collect();
        ExpPoly {
            n: self.n,
            terms,
        }
    }

    /// The polynomial z ↦ f(z + r) for a real translate r: coefficients are
    /// rescaled by e^{α·r}.
    pub fn real_translated(&self, r: &[f64]) -> ExpPoly {
        assert_eq!(r.len(), self.n);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let dot: f64 = t.alpha.iter().zip(r).map(|(&a, &x)| a as f64 * x).sum();
                Term {
                    alpha: t.alpha.clone(),
                    c: t.c * dot.exp(),
                }
            })
            .collect();
        ExpPoly {
            n: self.n,
            terms,
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Divides an integer vector by the gcd of its absolute entries.
///
/// The result has coordinate-wise gcd 1 and is a positive multiple of the
/// input; applying it twice is a no-op.
pub fn primitive_vector(v: &[i64]) -> Result<Vec<i64>> {
    let g = v
        .iter()
        .map(|&x| x.unsigned_abs())
        .fold(0u64, gcd_u64);
    if g == 0 {
        return Err(Error::ZeroDirection);
    }
    Ok(v.iter().map(|&x| x / g as i64).collect())
}

/// Volume of the k-dimensional unit ball, Vol_k(B^k) = π^{k/2}/Γ(k/2+1),
/// computed through the recursion Vol_k = Vol_{k−2}·2π/k with Vol_0 = 1 and
/// Vol_1 = 2.
pub fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(k - 2) * 2.0 * std::f64::consts::PI / k as f64,
    }
}

/// Euclidean norm of an integer vector.
pub fn int_norm(v: &[i64]) -> f64 {
    v.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn primitive_vector_examples() {
        assert_eq!(primitive_vector(&[2, 2]).unwrap(), vec![1, 1]);
        assert_eq!(primitive_vector(&[-1, 1]).unwrap(), vec![-1, 1]);
        assert_eq!(primitive_vector(&[4, -6, 2]).unwrap(), vec![2, -3, 1]);
        assert!(matches!(
            primitive_vector(&[0, 0]),
            Err(Error::ZeroDirection)
        ));
    }

    #[test]
    fn unit_ball_volume_examples() {
        assert_relative_eq!(unit_ball_volume(1), 2.0);
        assert_relative_eq!(unit_ball_volume(2), PI);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0);
        assert_relative_eq!(unit_ball_volume(0), 1.0);
    }

    #[test]
    fn unit_ball_volume_recursion() {
        for k in 2..=15 {
            let lhs = unit_ball_volume(k);
            let rhs = unit_ball_volume(k - 2) * 2.0 * PI / k as f64;
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
        }
    }

    #[test]
    fn validation_rejects_bad_input() {
        assert!(ExpPoly::new(2, vec![]).is_err());
        assert!(ExpPoly::new(2, vec![(vec![0], c(1.0, 0.0))]).is_err());
        assert!(ExpPoly::new(
            2,
            vec![
                (vec![0, 0], c(1.0, 0.0)),
                (vec![0, 0], c(2.0, 0.0)),
            ]
        )
        .is_err());
        assert!(ExpPoly::new(
            2,
            vec![
                (vec![0, 0], c(1.0, 0.0)),
                (vec![1, 0], c(1e-18, 0.0)),
            ]
        )
        .is_err());
        assert!(ExpPoly::new(1, vec![(vec![0], c(0.0, 0.0))]).is_err());
    }

    #[test]
    fn one_term_is_legal_and_flagged() {
        let f = ExpPoly::new(2, vec![(vec![3, -1], c(2.0, 1.0))]).unwrap();
        assert!(f.is_monomial());
    }

    #[test]
    fn translation_shifts_support() {
        let f = ExpPoly::new(
            2,
            vec![(vec![0, 0], c(1.0, 0.0)), (vec![1, 0], c(1.0, 0.0))],
        )
        .unwrap();
        let g = f.translated(&[2, -1]);
        assert_eq!(g.support(), vec![vec![2, -1], vec![3, -1]]);
    }

    proptest! {
        #[test]
        fn primitive_is_idempotent_and_sign_preserving(
            v in proptest::collection::vec(-50i64..=50, 1..5)
        ) {
            prop_assume!(v.iter().any(|&x| x != 0));
            let p = primitive_vector(&v).unwrap();
            prop_assert_eq!(primitive_vector(&p).unwrap(), p.clone());
            for (a, b) in v.iter().zip(&p) {
                prop_assert_eq!(a.signum(), b.signum());
            }
            // positive multiple of v
            let g = v.iter().zip(&p).find(|(_, &b)| b != 0).map(|(a, b)| a / b).unwrap();
            prop_assert!(g > 0);
            for (a, b) in v.iter().zip(&p) {
                prop_assert_eq!(*a, b * g);
            }
        }
    }
}
