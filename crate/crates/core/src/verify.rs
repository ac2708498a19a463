//! Numerical evidence for the limit behavior of the shell: a deterministic
//! coamoeba sampler for n = 2 and a phase-clustering check that coamoeba
//! points of large real translates in an outward normal direction approach
//! the hyperplanes of the edge spectrum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expoly::{int_norm, ExpPoly};
use crate::polytope::Edge;
use crate::spectrum::{aberth_all_roots, find_roots, normalize_phase, restrict_to_edge};

const TWO_PI: f64 = 2.0 * PI;
const REGION_GRID: usize = 64;

/// One sampled phase point with the real coordinate of its slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloudPoint {
    /// (y₁, y₂) in [0, 2π)².
    pub y: [f64; 2],
    /// x-coordinate of the slice the point came from.
    pub x_tag: f64,
}

/// A deterministic sample of the coamoeba on the torus, with a coarse
/// per-region occupancy count.
#[derive(Debug, Clone)]
pub struct SampleCloud {
    pub points: Vec<CloudPoint>,
    pub seed: u64,
    pub region_counts: Vec<u32>,
    pub region_grid: usize,
}

impl SampleCloud {
    /// Fraction of the torus covered by the dilated sample set, on a fixed
    /// 256² census grid.
    pub fn coverage_fraction(&self, dilation: f64) -> f64 {
        const RES: usize = 256;
        let h = TWO_PI / RES as f64;
        let reach = (dilation / h).ceil() as i64;
        let mut covered = vec![false; RES * RES];
        for p in &self.points {
            let ci = (p.y[0] / h).floor() as i64;
            let cj = (p.y[1] / h).floor() as i64;
            for di in -reach..=reach {
                for dj in -reach..=reach {
                    let i = (ci + di).rem_euclid(RES as i64) as usize;
                    let j = (cj + dj).rem_euclid(RES as i64) as usize;
                    if covered[i * RES + j] {
                        continue;
                    }
                    let center = [(i as f64 + 0.5) * h, (j as f64 + 0.5) * h];
                    let d = crate::count::torus_distance(&p.y, &center);
                    if d <= dilation {
                        covered[i * RES + j] = true;
                    }
                }
            }
        }
        covered.iter().filter(|&&c| c).count() as f64 / (RES * RES) as f64
    }

    /// CSV export, one row per sample, 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y1,y2,x2\n");
        for p in &self.points {
            out.push_str(&format!(
                "{:.8e},{:.8e},{:.8e}\n",
                p.y[0], p.y[1], p.x_tag
            ));
        }
        out
    }
}

/// Dense coefficients of w ↦ f̃(w) along one coordinate, the other variable
/// frozen at e^{x+iθ}. Returns the dense vector and the exponent offset that
/// was factored out (Laurent normalization).
fn slice_coefficients(
    f: &ExpPoly,
    solve_coord: usize,
    x_other: f64,
    theta_other: f64,
) -> (Vec<Complex64>, i64) {
    let other = 1 - solve_coord;
    let kmin = f.terms().iter().map(|t| t.alpha[solve_coord]).min().unwrap();
    let kmax = f.terms().iter().map(|t| t.alpha[solve_coord]).max().unwrap();
    let mut dense = vec![Complex64::new(0.0, 0.0); (kmax - kmin) as usize + 1];
    let log_w = Complex64::new(x_other, theta_other);
    for t in f.terms() {
        let factor = (log_w * t.alpha[other] as f64).exp();
        dense[(t.alpha[solve_coord] - kmin) as usize] += t.c * factor;
    }
    (dense, kmin)
}

/// Roots of one slice polynomial, with numerically vanishing extreme
/// coefficients trimmed away.
fn slice_roots(f: &ExpPoly, solve_coord: usize, x_other: f64, theta_other: f64) -> Vec<Complex64> {
    let (dense, _) = slice_coefficients(f, solve_coord, x_other, theta_other);
    let max_abs = dense.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if max_abs == 0.0 {
        return Vec::new();
    }
    let cutoff = 1e-13 * max_abs;
    let lo = dense.iter().position(|c| c.norm() > cutoff).unwrap();
    let hi = dense.iter().rposition(|c| c.norm() > cutoff).unwrap();
    if hi == lo {
        return Vec::new();
    }
    let trimmed: Vec<Complex64> = dense[lo..=hi].to_vec();
    match aberth_all_roots(&trimmed) {
        Ok(roots) => roots
            .into_iter()
            .filter(|w| w.norm() > 1e-280 && w.norm().is_finite())
            .collect(),
        Err(_) => Vec::new(),
    }
}

/// Samples the coamoeba of f on a (x₂, θ₂) grid over `x_range` × [0, 2π):
/// each slice freezes z₂ and solves the resulting polynomial in e^{z₁}.
/// Grid points carry a small seeded jitter; the cloud is bit-identical for
/// identical seed and grid.
pub fn sample_coamoeba_2d(
    f: &ExpPoly,
    grid: usize,
    x_range: (f64, f64),
    seed: u64,
) -> Result<SampleCloud> {
    if f.n() != 2 {
        return Err(Error::Unsupported(
            "coamoeba sampler is only available for n = 2".into(),
        ));
    }
    let span = f.terms().iter().map(|t| t.alpha[0]).max().unwrap()
        - f.terms().iter().map(|t| t.alpha[0]).min().unwrap();
    if span == 0 {
        return Err(Error::RotateCoordinates);
    }
    assert!(grid >= 1 && x_range.1 >= x_range.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    let dx = (x_range.1 - x_range.0) / grid as f64;
    let dtheta = TWO_PI / grid as f64;
    for i in 0..grid {
        for j in 0..grid {
            let x2 = x_range.0 + (i as f64 + rng.gen::<f64>()) * dx;
            let theta2 = (j as f64 + rng.gen::<f64>()) * dtheta;
            for w1 in slice_roots(f, 0, x2, theta2) {
                points.push(CloudPoint {
                    y: [normalize_phase(w1.arg()), normalize_phase(theta2)],
                    x_tag: x2,
                });
            }
        }
    }
    let mut region_counts = vec![0u32; REGION_GRID * REGION_GRID];
    let h = TWO_PI / REGION_GRID as f64;
    for p in &points {
        let i = ((p.y[0] / h) as usize).min(REGION_GRID - 1);
        let j = ((p.y[1] / h) as usize).min(REGION_GRID - 1);
        region_counts[i * REGION_GRID + j] += 1;
    }
    Ok(SampleCloud {
        points,
        seed,
        region_counts,
        region_grid: REGION_GRID,
    })
}

/// Outward unit normal of an edge for n = 2: the generator of the normal
/// cone, validated against the ε-shrunken cone condition
/// u·(α − α′) ≥ ε·|α − α′| for α on the edge and α′ off it.
fn outward_normal_2d(f: &ExpPoly, edge: &Edge, epsilon: f64) -> Result<[f64; 2]> {
    let beta = &edge.beta;
    let norm = int_norm(beta);
    let candidate = [-(beta[1] as f64) / norm, beta[0] as f64 / norm];
    let alpha0 = &edge.endpoints[0];
    let off_edge: Vec<&Vec<i64>> = f
        .terms()
        .iter()
        .map(|t| &t.alpha)
        .filter(|a| !on_edge_2d(edge, a))
        .collect();
    for dir in [candidate, [-candidate[0], -candidate[1]]] {
        let ok = off_edge.iter().all(|a| {
            let diff = [(alpha0[0] - a[0]) as f64, (alpha0[1] - a[1]) as f64];
            let len = diff[0].hypot(diff[1]);
            dir[0] * diff[0] + dir[1] * diff[1] >= epsilon * len
        });
        if ok {
            return Ok(dir);
        }
    }
    Err(Error::EmptyCone)
}

fn on_edge_2d(edge: &Edge, a: &[i64]) -> bool {
    let p = &edge.endpoints[0];
    let d = [a[0] - p[0], a[1] - p[1]];
    if d[0] * edge.beta[1] != d[1] * edge.beta[0] {
        return false;
    }
    let k = if edge.beta[0] != 0 {
        d[0] / edge.beta[0]
    } else {
        d[1] / edge.beta[1]
    };
    (0..=edge.lattice_length).contains(&k)
}

/// Phase deviation of translated coamoeba samples from the edge hyperplanes.
///
/// For every radius R, the polynomial z ↦ f(z + R·u) with u in the shrunken
/// normal cone of the edge is sampled near x = 0, and the largest
/// torus-distance from a sampled phase to the nearest hyperplane
/// {β·y ≡ b_j} of the edge spectrum is reported.
pub fn shell_limit_check(
    f: &ExpPoly,
    edge: &Edge,
    epsilon: f64,
    radii: &[f64],
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    if f.n() != 2 {
        return Err(Error::Unsupported(
            "limit check is only available for n = 2".into(),
        ));
    }
    let u = outward_normal_2d(f, edge, epsilon)?;
    let (_, coeffs) = restrict_to_edge(f, edge);
    let edge_roots = find_roots(&coeffs)?;
    let phases: Vec<f64> = edge_roots
        .iter()
        .map(|(a, _)| normalize_phase(a.arg()))
        .collect();
    let beta = &edge.beta;
    let beta_norm = int_norm(beta);
    // solve along the coordinate where the edge direction is steepest, so
    // slices stay transverse to the limiting hyperplanes
    let solve_coord = if beta[0].abs() >= beta[1].abs() { 0 } else { 1 };
    let x_window = edge_roots
        .iter()
        .map(|(a, _)| a.norm().ln().abs())
        .fold(0.0f64, f64::max)
        / beta_norm
        + 1.0;

    let mut out = Vec::with_capacity(radii.len());
    for (ri, &radius) in radii.iter().enumerate() {
        let translated = f.real_translated(&[radius * u[0], radius * u[1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (ri as u64) << 32);
        let (nx, ntheta) = (8usize, 48usize);
        let mut max_dev = 0.0f64;
        for i in 0..nx {
            for j in 0..ntheta {
                let x_other = -0.5 + (i as f64 + rng.gen::<f64>()) / nx as f64;
                let theta_other = (j as f64 + rng.gen::<f64>()) * TWO_PI / ntheta as f64;
                for w in slice_roots(&translated, solve_coord, x_other, theta_other) {
                    if w.norm().ln().abs() > x_window {
                        continue;
                    }
                    let mut y = [0.0f64; 2];
                    y[solve_coord] = normalize_phase(w.arg());
                    y[1 - solve_coord] = normalize_phase(theta_other);
                    let s = beta[0] as f64 * y[0] + beta[1] as f64 * y[1];
                    let dev = phases
                        .iter()
                        .map(|&b| {
                            let d = (s - b).rem_euclid(TWO_PI);
                            d.min(TWO_PI - d) / beta_norm
                        })
                        .fold(f64::INFINITY, f64::min);
                    max_dev = max_dev.max(dev);
                }
            }
        }
        out.push((radius, max_dev));
    }
    Ok(out)
}
