//! Exact counting on the torus: modular intersection solving through
//! unimodular diagonalization, the multiplicity-weighted vertex multiset,
//! the determinant bounds, the Monge–Ampère bookkeeping identity, and a
//! flood-fill census of complement components for n = 2.

use std::f64::consts::PI;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::expoly::int_norm;
use crate::lattice::{det_i128, unimodular_diagonalize};
use crate::shell::{SMatrix, ShellArrangement};

const TWO_PI: f64 = 2.0 * PI;
/// Geometric deduplication tolerance on torus distance.
const POINT_TOL: f64 = 1e-9;

/// A point of the fundamental domain [0, 2π)^n with accumulated multiplicity.
#[derive(Debug, Clone)]
pub struct TorusPoint {
    pub y: Vec<f64>,
    pub mult: usize,
}

/// Per-edge-tuple bookkeeping: |det B_I|, the multiplicity-weighted count
/// σ_I = |det B_I|·Σ_{root tuples} Π d, and the weight Π γ/|β|.
#[derive(Debug, Clone)]
pub struct EdgeTupleReport {
    pub edges: Vec<usize>,
    pub det_b: i64,
    pub sigma: usize,
    pub weight: f64,
}

/// The multiset I_f with provenance reports. `tuple_hits[i]` counts how many
/// (edge tuple, root tuple) pairs contributed to `points[i]`.
#[derive(Debug, Clone)]
pub struct IntersectionSet {
    pub points: Vec<TorusPoint>,
    pub total: usize,
    pub reports: Vec<EdgeTupleReport>,
    pub tuple_hits: Vec<usize>,
}

/// All y in [0, 2π)^n with Bᵗy ≡ b (mod 2π), for B with integer columns and
/// det B ≠ 0; the count is exactly |det B|.
///
/// The system is diagonalized by unimodular row/column operations, so each
/// diagonal congruence d·w ≡ c (mod 2π) contributes exactly d evenly spaced
/// solutions and no boundary case can be missed.
pub fn solve_modular(columns: &[Vec<i64>], phases: &[f64]) -> Result<Vec<TorusPoint>> {
    let n = columns.len();
    assert!(n > 0 && columns.iter().all(|c| c.len() == n));
    assert_eq!(phases.len(), n);
    // rows of the system are the columns of B
    let c_matrix: Vec<Vec<i64>> = (0..n).map(|i| columns[i].clone()).collect();
    let diag = unimodular_diagonalize(&c_matrix);
    if diag.diag.iter().any(|&d| d == 0) {
        return Err(Error::DependentDirections);
    }
    // transformed right-hand side c = R·b, reduced into [0, 2π)
    let c: Vec<f64> = (0..n)
        .map(|i| {
            let v: f64 = (0..n)
                .map(|j| diag.row_ops[i][j] as f64 * phases[j])
                .sum();
            v.rem_euclid(TWO_PI)
        })
        .collect();
    let counts: Vec<i128> = diag.diag.clone();
    let mut points = Vec::with_capacity(counts.iter().product::<i128>() as usize);
    let mut index = vec![0i128; n];
    loop {
        // w_i = (c_i + 2π·j_i)/d_i lies in [0, 2π)
        let w: Vec<f64> = (0..n)
            .map(|i| (c[i] + TWO_PI * index[i] as f64) / counts[i] as f64)
            .collect();
        // y = S·w reduced into the fundamental domain
        let y: Vec<f64> = (0..n)
            .map(|i| {
                let v: f64 = (0..n).map(|j| diag.col_ops[i][j] as f64 * w[j]).sum();
                reduce_torus(v)
            })
            .collect();
        points.push(TorusPoint { y, mult: 1 });
        let mut carry = true;
        for i in 0..n {
            index[i] += 1;
            if index[i] < counts[i] {
                carry = false;
                break;
            }
            index[i] = 0;
        }
        if carry {
            break;
        }
    }
    Ok(points)
}

fn reduce_torus(v: f64) -> f64 {
    let mut x = v.rem_euclid(TWO_PI);
    if TWO_PI - x < 1e-12 {
        x = 0.0;
    }
    x
}

/// Distance on the flat torus (R/2πZ)^n.
pub fn torus_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = (x - y).rem_euclid(TWO_PI);
            let d = d.min(TWO_PI - d);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Builds I_f: over every n-subset I of edges with det B_I ≠ 0 and every
/// tuple of distinct roots, the |det B_I| common points each carry the
/// product of the root multiplicities. Points are deduplicated geometrically
/// with their contributions accumulated.
pub fn intersection_set(sh: &ShellArrangement) -> Result<IntersectionSet> {
    let n = sh.n;
    let edges = &sh.spectra;
    let mut points: Vec<TorusPoint> = Vec::new();
    let mut tuple_hits: Vec<usize> = Vec::new();
    let mut reports = Vec::new();
    let mut total = 0usize;
    if edges.len() >= n {
        for subset in (0..edges.len()).combinations(n) {
            let columns: Vec<Vec<i64>> = subset
                .iter()
                .map(|&i| edges[i].edge.beta.clone())
                .collect();
            let det = det_i128(&columns).unsigned_abs() as i64;
            let weight: f64 = subset
                .iter()
                .map(|&i| edges[i].gamma / edges[i].beta_norm)
                .product();
            if det == 0 {
                reports.push(EdgeTupleReport {
                    edges: subset,
                    det_b: 0,
                    sigma: 0,
                    weight,
                });
                continue;
            }
            let mut sigma = 0usize;
            let root_counts: Vec<usize> = subset.iter().map(|&i| edges[i].roots.len()).collect();
            let mut tuple = vec![0usize; n];
            loop {
                let phases: Vec<f64> = (0..n)
                    .map(|k| edges[subset[k]].roots[tuple[k]].b)
                    .collect();
                let mult: usize = (0..n)
                    .map(|k| edges[subset[k]].roots[tuple[k]].d)
                    .product();
                let solutions = solve_modular(&columns, &phases)?;
                sigma += det as usize * mult;
                for sol in solutions {
                    match points
                        .iter_mut()
                        .position(|p| torus_distance(&p.y, &sol.y) <= POINT_TOL)
                    {
                        Some(idx) => {
                            points[idx].mult += mult;
                            tuple_hits[idx] += 1;
                        }
                        None => {
                            points.push(TorusPoint {
                                y: sol.y,
                                mult,
                            });
                            tuple_hits.push(1);
                        }
                    }
                }
                let mut carry = true;
                for k in 0..n {
                    tuple[k] += 1;
                    if tuple[k] < root_counts[k] {
                        carry = false;
                        break;
                    }
                    tuple[k] = 0;
                }
                if carry {
                    break;
                }
            }
            total += sigma;
            reports.push(EdgeTupleReport {
                edges: subset,
                det_b: det,
                sigma,
                weight,
            });
        }
    }
    debug_assert_eq!(total, points.iter().map(|p| p.mult).sum::<usize>());
    Ok(IntersectionSet {
        points,
        total,
        reports,
        tuple_hits,
    })
}

/// The determinant sum Σ_I |det B_I| over n-subsets of edges, with a
/// genericity flag.
///
/// The flag certifies the regime where the sum counts both the vertices and
/// the complement components of the arrangement: every edge carries exactly
/// one simple root (so one hyperplane per edge), the directions span R^n,
/// and no intersection point receives more than one tuple contribution.
#[derive(Debug, Clone)]
pub struct GenericCount {
    pub count: u64,
    pub generic: bool,
}

pub fn generic_count(sh: &ShellArrangement) -> Result<GenericCount> {
    let n = sh.n;
    let edges = &sh.spectra;
    let mut count = 0u64;
    let mut spanning = false;
    if edges.len() >= n {
        for subset in (0..edges.len()).combinations(n) {
            let columns: Vec<Vec<i64>> = subset
                .iter()
                .map(|&i| edges[i].edge.beta.clone())
                .collect();
            let det = det_i128(&columns).unsigned_abs() as u64;
            count += det;
            spanning |= det != 0;
        }
    }
    let single_simple = edges
        .iter()
        .all(|s| s.roots.len() == 1 && s.roots[0].d == 1);
    let inter = intersection_set(sh)?;
    let no_multiple_hits = inter.tuple_hits.iter().all(|&h| h <= 1);
    Ok(GenericCount {
        count,
        generic: single_simple && spanning && no_multiple_hits,
    })
}

/// The two-sided determinant bound on |I_f|.
#[derive(Debug, Clone, Copy)]
pub struct EstimateBounds {
    /// max over all tuples of |det B_I|·Π γ/|β|.
    pub weight_max: f64,
    /// min over tuples with det B_I ≠ 0.
    pub weight_min: f64,
    pub lower: f64,
    pub upper: f64,
}

/// 2^n·det S_f/M ≤ |I_f| ≤ 2^n·det S_f/m. Errors when no tuple is
/// independent or S_f is singular.
pub fn estimate_bounds(sh: &ShellArrangement, sm: &SMatrix) -> Result<EstimateBounds> {
    let n = sh.n;
    if sm.det <= 1e-12 {
        return Err(Error::DegenerateArrangement);
    }
    let inter = intersection_set(sh)?;
    let mut weight_max = 0.0f64;
    let mut weight_min = f64::INFINITY;
    for rep in &inter.reports {
        let w = rep.det_b as f64 * rep.weight;
        weight_max = weight_max.max(w);
        if rep.det_b != 0 {
            weight_min = weight_min.min(w);
        }
    }
    if !weight_min.is_finite() || weight_max == 0.0 {
        return Err(Error::DegenerateArrangement);
    }
    let mass = 2f64.powi(n as i32) * sm.det;
    Ok(EstimateBounds {
        weight_max,
        weight_min,
        lower: mass / weight_max,
        upper: mass / weight_min,
    })
}

/// Both sides of the Monge–Ampère mass identity:
/// 2^n·det S_f = Σ_I (Π γ/|β|)·|det B_I|·σ_I.
pub fn ma_mass_identity(sh: &ShellArrangement, sm: &SMatrix) -> Result<(f64, f64)> {
    let n = sh.n;
    let lhs = 2f64.powi(n as i32) * sm.det;
    let inter = intersection_set(sh)?;
    let rhs = inter
        .reports
        .iter()
        .map(|r| r.weight * r.det_b as f64 * r.sigma as f64)
        .sum();
    Ok((lhs, rhs))
}

/// Number of integer points in the half-open parallelepiped
/// {Σ t_j β_j : t_j ∈ [0, 1)}, by exact Cramer tests over the bounding box;
/// equals |det B| for independent directions.
pub fn parallelogram_lattice_count(betas: &[Vec<i64>]) -> Result<u64> {
    let n = betas.len();
    assert!(n > 0 && betas.iter().all(|b| b.len() == n));
    let cols: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| betas[j][i]).collect())
        .collect(); // row-major matrix with betas as columns
    let det = det_i128(&cols);
    if det == 0 {
        return Err(Error::DependentDirections);
    }
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for i in 0..n {
        for b in betas {
            if b[i] < 0 {
                lo[i] += b[i];
            } else {
                hi[i] += b[i];
            }
        }
    }
    let mut count = 0u64;
    let mut p = lo.clone();
    loop {
        // solve B t = p by Cramer; t_j ∈ [0,1) iff 0 ≤ det_j·sgn(det) < |det|
        let mut inside = true;
        for j in 0..n {
            let mut m = cols.clone();
            for i in 0..n {
                m[i][j] = p[i];
            }
            let dj = det_i128(&m) * det.signum();
            if dj < 0 || dj >= det.abs() {
                inside = false;
                break;
            }
        }
        if inside {
            count += 1;
        }
        let mut carry = true;
        for i in 0..n {
            p[i] += 1;
            if p[i] <= hi[i] {
                carry = false;
                break;
            }
            p[i] = lo[i];
        }
        if carry {
            break;
        }
    }
    Ok(count)
}

/// Interior census of (R²∖H_f)/(2πZ)² by wrap-around flood fill, with one
/// far-from-the-walls representative per component.
#[derive(Debug, Clone)]
pub struct Components2d {
    pub count: usize,
    pub representatives: Vec<[f64; 2]>,
    /// Grid resolution at which the count stabilized.
    pub resolution: usize,
}

/// Connected components of the shell complement on the torus (n = 2 only):
/// flood fill on a wrap-around grid starting at 1024², excluding cells within
/// two grid steps of a line, doubling the resolution until the count repeats.
pub fn component_count_2d(sh: &ShellArrangement) -> Result<usize> {
    components_2d(sh).map(|c| c.count)
}

pub fn components_2d(sh: &ShellArrangement) -> Result<Components2d> {
    if sh.n != 2 {
        return Err(Error::Unsupported(
            "component census is only available for n = 2".into(),
        ));
    }
    let lines: Vec<(Vec<i64>, f64, f64)> = sh
        .planes
        .iter()
        .map(|p| (p.beta.clone(), p.b, int_norm(&p.beta)))
        .collect();
    if lines.is_empty() {
        return Ok(Components2d {
            count: 1,
            representatives: vec![[PI, PI]],
            resolution: 0,
        });
    }
    let mut prev: Option<(usize, Components2d)> = None;
    let mut res = 1024usize;
    loop {
        let comp = flood_fill_census(&lines, res);
        if let Some((prev_count, _)) = &prev {
            if *prev_count == comp.count || res >= 8192 {
                return Ok(comp);
            }
        }
        prev = Some((comp.count, comp));
        res *= 2;
    }
}

fn wall_distance(lines: &[(Vec<i64>, f64, f64)], y: [f64; 2]) -> f64 {
    lines
        .iter()
        .map(|(beta, b, norm)| {
            let s = (beta[0] as f64 * y[0] + beta[1] as f64 * y[1] - b).rem_euclid(TWO_PI);
            s.min(TWO_PI - s) / norm
        })
        .fold(f64::INFINITY, f64::min)
}

fn flood_fill_census(lines: &[(Vec<i64>, f64, f64)], res: usize) -> Components2d {
    let h = TWO_PI / res as f64;
    let cell = |i: usize, j: usize| -> [f64; 2] {
        [(i as f64 + 0.5) * h, (j as f64 + 0.5) * h]
    };
    let mut free = vec![false; res * res];
    for i in 0..res {
        for j in 0..res {
            free[i * res + j] = wall_distance(lines, cell(i, j)) > 2.0 * h;
        }
    }
    let mut label = vec![0u32; res * res];
    let mut count = 0usize;
    let mut representatives: Vec<[f64; 2]> = Vec::new();
    let mut best_dist: Vec<f64> = Vec::new();
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for si in 0..res {
        for sj in 0..res {
            let idx = si * res + sj;
            if !free[idx] || label[idx] != 0 {
                continue;
            }
            count += 1;
            representatives.push(cell(si, sj));
            best_dist.push(wall_distance(lines, cell(si, sj)));
            stack.push((si, sj));
            label[idx] = count as u32;
            while let Some((i, j)) = stack.pop() {
                let d = wall_distance(lines, cell(i, j));
                if d > best_dist[count - 1] {
                    best_dist[count - 1] = d;
                    representatives[count - 1] = cell(i, j);
                }
                let neighbors = [
                    ((i + 1) % res, j),
                    ((i + res - 1) % res, j),
                    (i, (j + 1) % res),
                    (i, (j + res - 1) % res),
                ];
                for (ni, nj) in neighbors {
                    let nidx = ni * res + nj;
                    if free[nidx] && label[nidx] == 0 {
                        label[nidx] = count as u32;
                        stack.push((ni, nj));
                    }
                }
            }
        }
    }
    Components2d {
        count,
        representatives,
        resolution: res,
    }
}
