//! The Ronkin-type potential of the shell: a convex piecewise-affine
//! function whose second derivative is the averaged current, its gradient
//! map, the quadratic/periodic split, and the skew lattice receiving the
//! gradient classes of complement components.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::shell::{SMatrix, ShellArrangement};

const TWO_PI: f64 = 2.0 * PI;

/// The convex piecewise-linear basis function: Φ(0) = 0 and slope k on the
/// interval 2π[k−1, k]. Closed form k·t − π·k·(k−1) with k = ⌈t/2π⌉, which
/// anchors Φ(2πm) = π·m(m+1) for every integer m.
pub fn phi_basis(t: f64) -> f64 {
    let k = (t / TWO_PI).ceil();
    k * t - PI * k * (k - 1.0)
}

/// Slope of Φ at t, taking the lower slope on the breakpoints.
fn phi_slope(t: f64) -> f64 {
    (t / TWO_PI).ceil()
}

/// One summand of the potential: coef·(Φ(β·y − b) + ((b−π)/2π)·β·y) with
/// coef = 2π·γ·d/|β|.
#[derive(Debug, Clone)]
pub struct RonkinTerm {
    pub beta: Vec<i64>,
    pub b: f64,
    pub d: usize,
    pub coef: f64,
}

/// Evaluator for φ_f, ∇φ_f and the periodic part φ_f(y) − yᵗS_f y.
#[derive(Debug, Clone)]
pub struct RonkinEval {
    pub terms: Vec<RonkinTerm>,
    pub s: SMatrix,
}

impl RonkinEval {
    /// One term per shell hyperplane, i.e. per (edge, distinct root) pair.
    pub fn new(sh: &ShellArrangement, sm: &SMatrix) -> Self {
        let terms = sh
            .planes
            .iter()
            .map(|p| RonkinTerm {
                beta: p.beta.clone(),
                b: p.b,
                d: p.mult,
                coef: TWO_PI * p.weight,
            })
            .collect();
        RonkinEval {
            terms,
            s: sm.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.s.n()
    }

    /// φ_f(y) = Σ coef·(Φ(β·y − b) + ((b−π)/2π)·β·y); convex in y.
    pub fn eval_phi(&self, y: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let s = dot(&t.beta, y);
                t.coef * (phi_basis(s - t.b) + (t.b - PI) / TWO_PI * s)
            })
            .sum()
    }

    /// Term indices whose hyperplane passes within `tol` of y (in phase).
    pub fn wall_planes(&self, y: &[f64], tol: f64) -> Vec<usize> {
        self.terms
            .iter()
            .enumerate()
            .filter(|(_, t)| {
                let s = (dot(&t.beta, y) - t.b).rem_euclid(TWO_PI);
                s.min(TWO_PI - s) < tol
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// ∇φ_f(y) = Σ coef·(Φ′(β·y − b) + (b−π)/2π)·β, defined off the shell;
    /// errors with the violating plane indices on a wall.
    pub fn grad_phi(&self, y: &[f64]) -> Result<Vec<f64>> {
        let walls = self.wall_planes(y, 1e-9);
        if !walls.is_empty() {
            return Err(Error::NonSmoothPoint { planes: walls });
        }
        let n = self.n();
        let mut g = vec![0.0; n];
        for t in &self.terms {
            let s = dot(&t.beta, y);
            let factor = t.coef * (phi_slope(s - t.b) + (t.b - PI) / TWO_PI);
            for i in 0..n {
                g[i] += factor * t.beta[i] as f64;
            }
        }
        Ok(g)
    }

    /// φ(y+2πℓ) − φ(y) − [(y+2πℓ)ᵗS(y+2πℓ) − yᵗSy]; identically zero.
    pub fn periodic_part(&self, y: &[f64], ell: &[i64]) -> f64 {
        let shifted: Vec<f64> = y
            .iter()
            .zip(ell)
            .map(|(&v, &l)| v + TWO_PI * l as f64)
            .collect();
        let quad = self.quadratic(&shifted) - self.quadratic(y);
        (self.eval_phi(&shifted) - self.eval_phi(y)) - quad
    }

    /// yᵗS_f y.
    pub fn quadratic(&self, y: &[f64]) -> f64 {
        let v = DVector::from_row_slice(y);
        (v.transpose() * &self.s.s * &v)[(0, 0)]
    }
}

fn dot(beta: &[i64], y: &[f64]) -> f64 {
    beta.iter().zip(y).map(|(&b, &v)| b as f64 * v).sum()
}

/// The lattice L_{S_f} generated by the columns of 4π·S_f. The gradient of
/// φ_f descends to a map R^n/(2πZ)^n → R^n/L_{S_f}.
#[derive(Debug, Clone)]
pub struct SkewLattice {
    pub basis: DMatrix<f64>,
    pub invertible: bool,
    inv: Option<DMatrix<f64>>,
}

impl SkewLattice {
    pub fn new(sm: &SMatrix) -> Self {
        let basis = 4.0 * PI * sm.s.clone();
        let invertible = sm.det.abs() > 1e-12;
        let inv = if invertible {
            basis.clone().try_inverse()
        } else {
            None
        };
        SkewLattice {
            basis,
            invertible: invertible && inv.is_some(),
            inv,
        }
    }

    /// Nearest-lattice-point reduction by rounding in the lattice basis.
    pub fn reduce(&self, x: &[f64]) -> Vec<f64> {
        let Some(inv) = &self.inv else {
            return x.to_vec();
        };
        let v = DVector::from_row_slice(x);
        let coords = inv * &v;
        let rounded: DVector<f64> = coords.map(f64::round);
        let reduced = v - &self.basis * rounded;
        reduced.iter().copied().collect()
    }

    /// Distance in R^n/L between two vectors, minimized over neighboring
    /// lattice shifts of the rounded representative.
    pub fn quotient_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        if !self.invertible {
            return diff.iter().map(|v| v * v).sum::<f64>().sqrt();
        }
        let base = self.reduce(&diff);
        let n = base.len();
        let mut best = f64::INFINITY;
        let mut shift = vec![-1i64; n];
        loop {
            let mut cand = base.clone();
            for (i, &s) in shift.iter().enumerate() {
                for j in 0..n {
                    cand[j] -= s as f64 * self.basis[(j, i)];
                }
            }
            let norm = cand.iter().map(|v| v * v).sum::<f64>().sqrt();
            best = best.min(norm);
            // odometer over {-1,0,1}^n
            let mut carry = true;
            for s in shift.iter_mut() {
                if *s < 1 {
                    *s += 1;
                    carry = false;
                    break;
                }
                *s = -1;
            }
            if carry {
                break;
            }
        }
        best
    }
}

/// Gradient representatives of complement components. When the lattice is
/// singular the raw gradients are returned and `reduced` is false.
#[derive(Debug, Clone)]
pub struct GradientClasses {
    pub classes: Vec<Vec<f64>>,
    pub reduced: bool,
}

/// Evaluates ∇φ_f at one interior sample point per component and reduces
/// modulo L_{S_f}. Distinctness of the classes is the content of the
/// injectivity statement and is asserted by the callers' checks.
pub fn gradient_classes(
    r: &RonkinEval,
    samples: &[Vec<f64>],
    lattice: &SkewLattice,
) -> Result<GradientClasses> {
    let mut classes = Vec::with_capacity(samples.len());
    for y in samples {
        let g = r.grad_phi(y)?;
        classes.push(if lattice.invertible {
            lattice.reduce(&g)
        } else {
            g
        });
    }
    Ok(GradientClasses {
        classes,
        reduced: lattice.invertible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::components_2d;
    use crate::expoly::ExpPoly;
    use crate::shell::{build_shell, s_matrix};
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_poly(alphas: &[&[i64]]) -> ExpPoly {
        ExpPoly::new(
            2,
            alphas
                .iter()
                .map(|a| (a.to_vec(), Complex64::new(1.0, 0.0)))
                .collect(),
        )
        .unwrap()
    }

    fn triangle_eval() -> RonkinEval {
        let sh = build_shell(&unit_poly(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        let sm = s_matrix(&sh);
        RonkinEval::new(&sh, &sm)
    }

    #[test]
    fn phi_basis_values() {
        assert_relative_eq!(phi_basis(PI), PI, epsilon = 1e-13);
        assert_relative_eq!(phi_basis(-PI), 0.0, epsilon = 1e-13);
        assert_relative_eq!(phi_basis(3.0 * PI), 4.0 * PI, epsilon = 1e-13);
        assert_relative_eq!(phi_basis(0.0), 0.0);
        for m in -4i64..=4 {
            assert_relative_eq!(
                phi_basis(TWO_PI * m as f64),
                PI * (m * (m + 1)) as f64,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn phi_shift_identity_spot_check() {
        let (t, k) = (0.7, 3.0);
        let lhs = phi_basis(t + k * TWO_PI) - phi_basis(t);
        assert_relative_eq!(lhs, 9.0 * PI + 2.1 + 3.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn phi_shift_identity_grid() {
        for i in 0..400 {
            let t = -10.0 * PI + i as f64 * (20.0 * PI / 400.0) + 0.0137;
            for k in -5i64..=5 {
                let kf = k as f64;
                let lhs = phi_basis(t + TWO_PI * kf) - phi_basis(t);
                let rhs = PI * kf * kf + t * kf + PI * kf;
                assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn eval_phi_triangle_values() {
        let r = triangle_eval();
        assert_relative_eq!(r.eval_phi(&[PI, PI]), 0.0, epsilon = 1e-12);
        assert_relative_eq!(
            r.eval_phi(&[1.5 * PI, 0.5 * PI]),
            PI * PI / 2.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(r.eval_phi(&[0.0, 0.0]), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn grad_phi_triangle_values() {
        let r = triangle_eval();
        let g = r.grad_phi(&[PI / 2.0, PI / 2.0]).unwrap();
        assert_relative_eq!(g[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(g[1], 0.0, epsilon = 1e-12);
        // the nominal point (3π/2, π/2) sits exactly on the β=(1,−1) wall;
        // evaluate strictly inside the adjacent component instead
        let g = r.grad_phi(&[1.5 * PI - 1e-3, 0.5 * PI]).unwrap();
        assert_relative_eq!(g[0], PI, epsilon = 1e-12);
        assert_relative_eq!(g[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn grad_phi_errors_on_wall() {
        let r = triangle_eval();
        let err = r.grad_phi(&[PI, 0.5 * PI]).unwrap_err();
        match err {
            Error::NonSmoothPoint { planes } => assert!(!planes.is_empty()),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(matches!(
            r.grad_phi(&[1.5 * PI, 0.5 * PI]),
            Err(Error::NonSmoothPoint { .. })
        ));
    }

    #[test]
    fn gradient_jump_matches_weight() {
        let r = triangle_eval();
        // cross y1 = π at y2 = π/2: jump should be 2π·(γ/|β|)·d·β = π·(1,0)
        let eps = 1e-4;
        let plus = r.grad_phi(&[PI + eps, 0.5 * PI]).unwrap();
        let minus = r.grad_phi(&[PI - eps, 0.5 * PI]).unwrap();
        assert_relative_eq!(plus[0] - minus[0], PI, epsilon = 1e-10);
        assert_relative_eq!(plus[1] - minus[1], 0.0, epsilon = 1e-10);
    }

    #[test]
    fn periodic_part_vanishes() {
        let r = triangle_eval();
        assert!(r.periodic_part(&[0.3, 1.1], &[1, 0]).abs() < 1e-10);
        assert_eq!(r.periodic_part(&[0.3, 1.1], &[0, 0]), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let y = [rng.gen_range(-7.0..7.0), rng.gen_range(-7.0..7.0)];
            let ell = [rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
            assert!(r.periodic_part(&y, &ell).abs() < 1e-10);
        }
    }

    #[test]
    fn convexity_midpoint_inequality() {
        let r = triangle_eval();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let y1 = [rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)];
            let y2 = [rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)];
            let mid = [(y1[0] + y2[0]) / 2.0, (y1[1] + y2[1]) / 2.0];
            assert!(
                r.eval_phi(&mid) <= (r.eval_phi(&y1) + r.eval_phi(&y2)) / 2.0 + 1e-9,
                "convexity violated at {y1:?}, {y2:?}"
            );
        }
    }

    #[test]
    fn gradient_classes_triangle_distinct() {
        let f = unit_poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        let sh = build_shell(&f).unwrap();
        let sm = s_matrix(&sh);
        let r = RonkinEval::new(&sh, &sm);
        let lattice = SkewLattice::new(&sm);
        assert!(lattice.invertible);
        let comps = components_2d(&sh).unwrap();
        assert_eq!(comps.count, 3);
        let samples: Vec<Vec<f64>> = comps.representatives.iter().map(|p| p.to_vec()).collect();
        let classes = gradient_classes(&r, &samples, &lattice).unwrap();
        assert!(classes.reduced);
        assert_eq!(classes.classes.len(), 3);
        for i in 0..3 {
            for j in i + 1..3 {
                let d = lattice.quotient_distance(&classes.classes[i], &classes.classes[j]);
                assert!(d > 1e-6, "classes {i} and {j} collide (distance {d})");
            }
        }
    }

    #[test]
    fn gradient_classes_raw_mode_when_singular() {
        let f = unit_poly(&[&[0, 0], &[1, 1]]);
        let sh = build_shell(&f).unwrap();
        let sm = s_matrix(&sh);
        let r = RonkinEval::new(&sh, &sm);
        let lattice = SkewLattice::new(&sm);
        assert!(!lattice.invertible);
        let classes =
            gradient_classes(&r, &[vec![PI / 2.0, 0.0]], &lattice).unwrap();
        assert!(!classes.reduced);
        assert_eq!(classes.classes.len(), 1);
    }

    #[test]
    fn same_component_gives_identical_gradient() {
        let r = triangle_eval();
        let a = r.grad_phi(&[0.4, 0.7]).unwrap();
        let b = r.grad_phi(&[0.9, 0.3]).unwrap();
        assert_eq!(a, b);
    }

    /// Legendre transform by grid maximization of η·y − φ(y).
    fn legendre_on_grid(r: &RonkinEval, eta: &[f64], lo: f64, hi: f64, steps: usize) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for i in 0..=steps {
            for j in 0..=steps {
                let y = [
                    lo + (hi - lo) * i as f64 / steps as f64,
                    lo + (hi - lo) * j as f64 / steps as f64,
                ];
                let v = eta[0] * y[0] + eta[1] * y[1] - r.eval_phi(&y);
                best = best.max(v);
            }
        }
        best
    }

    #[test]
    fn legendre_quadratic_shift_identity() {
        let r = triangle_eval();
        let s4_inv = (4.0 * r.s.s.clone()).try_inverse().unwrap();
        let ell = [1i64, 0];
        // v = 4πS·ℓ
        let v: Vec<f64> = (0..2)
            .map(|i| 4.0 * PI * r.s.s[(i, 0)] * ell[0] as f64 + 4.0 * PI * r.s.s[(i, 1)] * ell[1] as f64)
            .collect();
        // η in the gradient range: component through the origin gives 0
        let eta = r.grad_phi(&[0.4, 0.7]).unwrap();
        let eta_shift: Vec<f64> = eta.iter().zip(&v).map(|(a, b)| a + b).collect();
        // fundamental domain plus its 2πℓ translate, finely gridded
        let steps = 600;
        let f_eta = legendre_on_grid(&r, &eta, -TWO_PI, 2.0 * TWO_PI, steps);
        let f_eta_shift = legendre_on_grid(&r, &eta_shift, -TWO_PI, 2.0 * TWO_PI, steps);
        let quad = |x: &[f64]| {
            let xv = DVector::from_row_slice(x);
            (xv.transpose() * &s4_inv * &xv)[(0, 0)]
        };
        let lhs = f_eta_shift - f_eta;
        let rhs = quad(&eta_shift) - quad(&eta);
        let grid_step = 3.0 * TWO_PI / steps as f64;
        assert!(
            (lhs - rhs).abs() <= 10.0 * grid_step,
            "legendre shift identity off by {} at grid accuracy {}",
            (lhs - rhs).abs(),
            grid_step
        );
    }
}
