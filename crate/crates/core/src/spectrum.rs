//! Edge restrictions P(w) = Σ c_j w^{k_j}, their roots with multiplicities,
//! and the phase data that generates the shell.
//!
//! Roots are found by simultaneous Aberth–Ehrlich iteration on the dense
//! expansion, then clustered into multiple roots and polished once with a
//! multiplicity-aware Newton step.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expoly::ExpPoly;
use crate::polytope::{AngleOptions, Edge, NewtonPolytope};

/// Residual target for the simultaneous iteration, relative to the
/// magnitude-weighted coefficient norm Σ|c_j||w|^j at the iterate.
const RESIDUAL_REL: f64 = 1e-13;
/// Clustering tolerance for multiplicity detection.
const CLUSTER_REL: f64 = 1e-7;
/// Relative tolerance for the reconstruction check Π(w−a_j)^{d_j}·c_top.
const RECONSTRUCT_REL: f64 = 1e-9;
const MAX_ROUNDS: usize = 400;

/// One distinct root of an edge polynomial.
#[derive(Debug, Clone)]
pub struct SpectrumRoot {
    pub a: Complex64,
    /// Multiplicity.
    pub d: usize,
    /// arg a normalized to [0, 2π).
    pub b: f64,
    pub log_abs: f64,
}

/// All per-edge data: the restricted polynomial, its roots with phases, the
/// external angle and the direction norm.
#[derive(Debug, Clone)]
pub struct EdgeSpectrum {
    pub edge: Edge,
    pub alpha0: Vec<i64>,
    /// Sparse coefficients (k_j, c_j) of P(w) = Σ c_j w^{k_j}.
    pub coeffs: Vec<(i64, Complex64)>,
    pub roots: Vec<SpectrumRoot>,
    pub gamma: f64,
    pub beta_norm: f64,
}

impl EdgeSpectrum {
    /// Degree k_ℓ of the restricted polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.last().map(|&(k, _)| k).unwrap_or(0)
    }

    /// Σ d_j; equals the degree when the spectrum is consistent.
    pub fn multiplicity_sum(&self) -> usize {
        self.roots.iter().map(|r| r.d).sum()
    }

    /// Relative residual of Π(w−a_j)^{d_j}·c_top against the coefficients.
    pub fn reconstruction_residual(&self) -> f64 {
        let degree = self.degree();
        let mut dense = vec![Complex64::new(0.0, 0.0); degree as usize + 1];
        for &(k, c) in &self.coeffs {
            dense[k as usize] = c;
        }
        let roots: Vec<(Complex64, usize)> = self.roots.iter().map(|r| (r.a, r.d)).collect();
        let max_abs = dense.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        reconstruction_residual(&dense, &roots) / max_abs
    }
}

/// Restricts f to an edge: α₀ is the lexicographically smaller endpoint and
/// c_j = c_{α₀ + k_j β} over the support offsets of the edge.
pub fn restrict_to_edge(f: &ExpPoly, e: &Edge) -> (Vec<i64>, Vec<(i64, Complex64)>) {
    let alpha0 = e.endpoints[0].clone();
    let coeffs: Vec<(i64, Complex64)> = e
        .support_offsets()
        .into_iter()
        .map(|k| {
            let point: Vec<i64> = alpha0.iter().zip(&e.beta).map(|(a, b)| a + k * b).collect();
            let c = f
                .coefficient(&point)
                .expect("edge support offset must be in the support");
            (k, c)
        })
        .collect();
    debug_assert!(coeffs.first().map(|&(k, _)| k) == Some(0));
    (alpha0, coeffs)
}

/// Distinct roots with multiplicities of a sparse polynomial with nonzero
/// extreme coefficients. Requires at least two nonzero coefficients.
pub fn find_roots(coeffs: &[(i64, Complex64)]) -> Result<Vec<(Complex64, usize)>> {
    if coeffs.len() < 2 {
        return Err(Error::InvalidPoly(
            "edge polynomial needs at least two coefficients".into(),
        ));
    }
    debug_assert!(coeffs.windows(2).all(|w| w[0].0 < w[1].0));
    let degree = coeffs.last().unwrap().0;
    let mut dense = vec![Complex64::new(0.0, 0.0); degree as usize + 1];
    for &(k, c) in coeffs {
        dense[k as usize] = c;
    }
    let all = aberth_all_roots(&dense)?;
    let max_abs = dense.iter().map(|c| c.norm()).fold(0.0f64, f64::max);

    // Iterates around a d-fold root scatter at the ε^{1/d} evaluation noise
    // floor, so the nominal tolerance is escalated until the reconstruction
    // gate accepts; the gate rejects any merge of genuinely distinct roots.
    let mut best_residual = f64::INFINITY;
    for tol in [CLUSTER_REL, 1e-6, 1e-5, 1e-4, 1e-3, 3e-3, 1e-2] {
        let clustered = cluster_and_polish(&dense, &all, tol);
        let residual = reconstruction_residual(&dense, &clustered);
        if residual <= RECONSTRUCT_REL * max_abs {
            return Ok(clustered);
        }
        best_residual = best_residual.min(residual);
    }
    let simple: Vec<(Complex64, usize)> = all.iter().map(|&a| (a, 1)).collect();
    let residual = reconstruction_residual(&dense, &simple);
    if residual <= RECONSTRUCT_REL * max_abs {
        return Ok(simple);
    }
    Err(Error::RootsDiverged {
        rounds: MAX_ROUNDS,
        residual: best_residual.min(residual) / max_abs,
        best: all,
    })
}

/// Assembles the full spectrum of one edge.
pub fn edge_spectrum(f: &ExpPoly, p: &NewtonPolytope, e: &Edge) -> Result<EdgeSpectrum> {
    edge_spectrum_with(f, p, e, &AngleOptions::default())
}

pub fn edge_spectrum_with(
    f: &ExpPoly,
    p: &NewtonPolytope,
    e: &Edge,
    opts: &AngleOptions,
) -> Result<EdgeSpectrum> {
    let (alpha0, coeffs) = restrict_to_edge(f, e);
    let raw = find_roots(&coeffs)?;
    let mut roots: Vec<SpectrumRoot> = raw
        .into_iter()
        .map(|(a, d)| SpectrumRoot {
            a,
            d,
            b: normalize_phase(a.arg()),
            log_abs: a.norm().ln(),
        })
        .collect();
    roots.sort_by(|x, y| x.b.total_cmp(&y.b).then(x.log_abs.total_cmp(&y.log_abs)));
    let gamma = p.external_angle_with(e, opts).value;
    Ok(EdgeSpectrum {
        alpha0,
        coeffs,
        roots,
        gamma,
        beta_norm: e.beta_norm(),
        edge: e.clone(),
    })
}

/// Maps an angle into [0, 2π), collapsing the 2π boundary to 0.
pub fn normalize_phase(t: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut b = t % two_pi;
    if b < 0.0 {
        b += two_pi;
    }
    if two_pi - b < 1e-12 {
        b = 0.0;
    }
    b
}

/// All roots of a dense polynomial (repeated according to multiplicity),
/// in no particular order. Used directly by the coamoeba sampler.
pub fn aberth_all_roots(dense: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = dense.len() - 1;
    assert!(degree >= 1 && dense[degree].norm() > 0.0);
    if degree == 1 {
        return Ok(vec![-dense[0] / dense[1]]);
    }

    // initial guesses on a circle sized by the extreme coefficients
    let c0 = dense.iter().find(|c| c.norm() > 0.0).unwrap().norm();
    let radius = (c0 / dense[degree].norm()).powf(1.0 / degree as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let mut hit_target = false;
    let mut polish_rounds = 0usize;
    for _round in 0..MAX_ROUNDS {
        let mut max_step = 0.0f64;
        let mut all_small = true;
        for i in 0..degree {
            let (p, dp) = eval_with_derivative(dense, z[i]);
            let scale = magnitude_bound(dense, z[i].norm());
            if p.norm() > RESIDUAL_REL * scale {
                all_small = false;
            }
            if dp.norm() == 0.0 {
                let bump = 1e-6 * (1.0 + z[i].norm());
                z[i] += Complex64::new(bump, 1e-6);
                max_step = f64::INFINITY;
                continue;
            }
            let newton = p / dp;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() < 1e-300 {
                newton
            } else {
                newton / denom
            };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if all_small {
            hit_target = true;
            // keep polishing: iterates around a multiple root keep
            // contracting linearly well below the residual floor, which is
            // what the clustering step relies on
            polish_rounds += 1;
            if max_step <= 1e-14 || polish_rounds >= 60 {
                return Ok(z);
            }
        }
    }
    if hit_target {
        return Ok(z);
    }
    let worst = z
        .iter()
        .map(|&w| eval_with_derivative(dense, w).0.norm() / magnitude_bound(dense, w.norm()))
        .fold(0.0f64, f64::max);
    Err(Error::RootsDiverged {
        rounds: MAX_ROUNDS,
        residual: worst,
        best: z,
    })
}

fn eval_with_derivative(dense: &[Complex64], w: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in dense.iter().rev() {
        dp = dp * w + p;
        p = p * w + c;
    }
    (p, dp)
}

fn magnitude_bound(dense: &[Complex64], r: f64) -> f64 {
    let mut s = 0.0;
    for &c in dense.iter().rev() {
        s = s * r + c.norm();
    }
    s.max(f64::MIN_POSITIVE)
}

/// Single-linkage clustering at tol·max(1, |a|), centroid per cluster, then
/// Newton polish of the centroid treated as a d-fold root.
///
/// The polish runs on the (d−1)-th derivative, where a true d-fold root is a
/// simple, well-conditioned zero; the multiplicity-scaled step on the
/// polynomial itself stalls at the √ε cancellation floor.
fn cluster_and_polish(
    dense: &[Complex64],
    roots: &[Complex64],
    tol: f64,
) -> Vec<(Complex64, usize)> {
    let m = roots.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..m {
        for j in i + 1..m {
            let scale = ((roots[i].norm() + roots[j].norm()) / 2.0).max(1.0);
            if (roots[i] - roots[j]).norm() <= tol * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for i in 0..m {
        let r = find(&mut parent, i);
        if let Some(&(_, idx)) = seen.iter().find(|&&(root, _)| root == r) {
            clusters[idx].push(i);
        } else {
            seen.push((r, clusters.len()));
            clusters.push(vec![i]);
        }
    }
    clusters
        .into_iter()
        .map(|members| {
            let d = members.len();
            let centroid = members.iter().map(|&i| roots[i]).sum::<Complex64>() / d as f64;
            let mut g = dense.to_vec();
            for _ in 1..d {
                g = derivative(&g);
            }
            let mut w = centroid;
            for _ in 0..4 {
                let (p, dp) = eval_with_derivative(&g, w);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                w -= step;
                if step.norm() <= 1e-16 * (1.0 + w.norm()) {
                    break;
                }
            }
            (w, d)
        })
        .collect()
}

fn derivative(dense: &[Complex64]) -> Vec<Complex64> {
    dense
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

fn reconstruction_residual(dense: &[Complex64], roots: &[(Complex64, usize)]) -> f64 {
    let degree = dense.len() - 1;
    let total: usize = roots.iter().map(|&(_, d)| d).sum();
    if total != degree {
        return f64::INFINITY;
    }
    let mut poly = vec![dense[degree]];
    for &(a, d) in roots {
        for _ in 0..d {
            let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i] -= c * a;
                next[i + 1] += c;
            }
            poly = next;
        }
    }
    poly.iter()
        .zip(dense)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max)
}
