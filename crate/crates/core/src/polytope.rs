//! Newton polytopes of integer supports: vertices, edges with their lattice
//! data, normal cones, external angles, and the edge term of the Steiner
//! expansion.
//!
//! Hull predicates are exact (integer/rational arithmetic); only the angle
//! and length values are floating point.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expoly::{int_norm, primitive_vector, unit_ball_volume, ExpPoly};
use crate::lattice::{point_in_conv, rank_int};

/// A lattice point α₀ + k·β on an edge, with membership in the support A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePoint {
    pub k: i64,
    pub in_support: bool,
}

/// A one-dimensional face of the Newton polytope.
///
/// `beta` is primitive and points from the lexicographically smaller endpoint
/// to the larger one, so the endpoints differ by `lattice_length · beta`.
#[derive(Debug, Clone)]
pub struct Edge {
    pub endpoints: [Vec<i64>; 2],
    pub beta: Vec<i64>,
    /// Every lattice point on the edge, k = 0..=lattice_length, flagged by
    /// support membership. k = 0 is the smaller endpoint.
    pub lattice_points: Vec<EdgePoint>,
    pub lattice_length: i64,
    pub euclid_length: f64,
}

impl Edge {
    pub fn beta_norm(&self) -> f64 {
        int_norm(&self.beta)
    }

    /// Offsets k with α₀ + k·β in the support.
    pub fn support_offsets(&self) -> Vec<i64> {
        self.lattice_points
            .iter()
            .filter(|p| p.in_support)
            .map(|p| p.k)
            .collect()
    }

    /// The same edge with the opposite orientation convention. Test hook for
    /// checking that shell-level outputs are invariant under β → −β; the
    /// result intentionally breaks the lex-order invariant of `endpoints`.
    pub fn flipped(&self) -> Edge {
        let ell = self.lattice_length;
        let mut pts: Vec<EdgePoint> = self
            .lattice_points
            .iter()
            .map(|p| EdgePoint {
                k: ell - p.k,
                in_support: p.in_support,
            })
            .collect();
        pts.sort_by_key(|p| p.k);
        Edge {
            endpoints: [self.endpoints[1].clone(), self.endpoints[0].clone()],
            beta: self.beta.iter().map(|&x| -x).collect(),
            lattice_points: pts,
            lattice_length: ell,
            euclid_length: self.euclid_length,
        }
    }
}

/// The normal cone of an edge, described inside its linear span β^⊥.
///
/// `span_basis` is an orthonormal basis of β^⊥ (n−1 vectors of length n);
/// `halfspace_normals` are the inequality normals expressed in span
/// coordinates, so x ∈ N_Γ iff x ⊥ β and every normal has nonnegative inner
/// product with the span coordinates of x. An empty normal list means the
/// cone is the whole subspace.
#[derive(Debug, Clone)]
pub struct NormalCone {
    pub span_basis: Vec<Vec<f64>>,
    pub halfspace_normals: Vec<Vec<f64>>,
}

impl NormalCone {
    /// Span coordinates of an ambient vector, together with the squared
    /// residual orthogonal to the span.
    pub fn span_coordinates(&self, x: &[f64]) -> (Vec<f64>, f64) {
        let u: Vec<f64> = self
            .span_basis
            .iter()
            .map(|q| q.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        let proj2: f64 = u.iter().map(|v| v * v).sum();
        (u, (norm2 - proj2).max(0.0))
    }

    /// Membership test with tolerance, for tests and sampling.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        let scale = x.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        let (u, residual2) = self.span_coordinates(x);
        if residual2.sqrt() > tol * scale {
            return false;
        }
        self.halfspace_normals.iter().all(|w| {
            let dot: f64 = w.iter().zip(&u).map(|(a, b)| a * b).sum();
            dot >= -tol * scale
        })
    }
}

/// Options for the external-angle computation. Closed forms are used for
/// n ≤ 3; for n ≥ 4 the angle is a seeded Monte Carlo estimate over the unit
/// sphere of the normal-cone span.
#[derive(Debug, Clone, Copy)]
pub struct AngleOptions {
    pub seed: u64,
    pub samples: usize,
    /// Forces the Monte Carlo path even when a closed form exists.
    pub force_monte_carlo: bool,
}

impl Default for AngleOptions {
    fn default() -> Self {
        AngleOptions {
            seed: 1,
            samples: 1_000_000,
            force_monte_carlo: false,
        }
    }
}

/// External-angle value plus the standard error when estimated by sampling.
#[derive(Debug, Clone, Copy)]
pub struct AngleEstimate {
    pub value: f64,
    pub std_err: Option<f64>,
}

/// The Newton polytope conv(A) with its full edge skeleton.
#[derive(Debug, Clone)]
pub struct NewtonPolytope {
    n: usize,
    dim: usize,
    support: Vec<Vec<i64>>,
    vertices: Vec<Vec<i64>>,
    edges: Vec<Edge>,
}

/// Builds the Newton polytope of an exponential polynomial.
pub fn newton_polytope(f: &ExpPoly) -> NewtonPolytope {
    NewtonPolytope::from_support(f.n(), f.support())
}

impl NewtonPolytope {
    /// Hull of an explicit integer point set. Duplicates are merged.
    pub fn from_support(n: usize, mut support: Vec<Vec<i64>>) -> Self {
        assert!(support.iter().all(|p| p.len() == n));
        support.sort();
        support.dedup();
        assert!(!support.is_empty(), "empty support");

        let base = &support[0];
        let diffs: Vec<Vec<i64>> = support[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let dim = rank_int(&diffs);

        let vertices = hull_vertices(&support);
        let edges = if dim == 0 {
            Vec::new()
        } else {
            hull_edges(&support, &vertices)
        };

        NewtonPolytope {
            n,
            dim,
            support,
            vertices,
            edges,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Intrinsic dimension of conv(A); 0 for a single point.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &[Vec<i64>] {
        &self.support
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// The normal cone N_Γ = {x : x ⊥ β, x·(α₀−α′) ≥ 0 ∀ α′ ∈ A∖Γ},
    /// described inside its span β^⊥.
    pub fn normal_cone(&self, e: &Edge) -> NormalCone {
        let span_basis = orthonormal_complement(&e.beta);
        let alpha0 = &e.endpoints[0];
        let mut normals: Vec<Vec<f64>> = Vec::new();
        for p in &self.support {
            if on_edge(e, p) {
                continue;
            }
            let diff: Vec<f64> = alpha0
                .iter()
                .zip(p)
                .map(|(a, b)| (a - b) as f64)
                .collect();
            let w: Vec<f64> = span_basis
                .iter()
                .map(|q| q.iter().zip(&diff).map(|(a, b)| a * b).sum())
                .collect();
            let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
            debug_assert!(norm > 1e-9, "support point off the edge projects to zero");
            let unit: Vec<f64> = w.iter().map(|v| v / norm).collect();
            if !normals
                .iter()
                .any(|u| u.iter().zip(&unit).map(|(a, b)| a * b).sum::<f64>() > 1.0 - 1e-12)
            {
                normals.push(unit);
            }
        }
        NormalCone {
            span_basis,
            halfspace_normals: normals,
        }
    }

    /// External angle γ_Δ(Γ): the fraction of the unit ball of span(N_Γ)
    /// occupied by N_Γ. Exact for n ≤ 3 (full subspace → 1, half-space → 1/2,
    /// planar sector → arc/2π); Monte Carlo for n ≥ 4.
    pub fn external_angle(&self, e: &Edge) -> f64 {
        self.external_angle_with(e, &AngleOptions::default()).value
    }

    pub fn external_angle_with(&self, e: &Edge, opts: &AngleOptions) -> AngleEstimate {
        let cone = self.normal_cone(e);
        if cone.halfspace_normals.is_empty() {
            return AngleEstimate {
                value: 1.0,
                std_err: None,
            };
        }
        if !opts.force_monte_carlo {
            match self.n {
                0 | 1 => unreachable!("constrained cone needs n >= 2"),
                2 => {
                    // span is a line; any constraint cuts it to a ray
                    return AngleEstimate {
                        value: 0.5,
                        std_err: None,
                    };
                }
                3 => {
                    return AngleEstimate {
                        value: sector_fraction(&cone.halfspace_normals),
                        std_err: None,
                    };
                }
                _ => {}
            }
        }
        monte_carlo_angle(&cone, opts)
    }

    /// V_{n−1}(Δ, Bⁿ) through the edge sum of the Steiner expansion:
    /// (Vol_{n−1}(B^{n−1})/n) · Σ_Γ γ_Δ(Γ)·Vol₁(Γ).
    pub fn quermassintegral_vn1(&self) -> f64 {
        self.quermassintegral_vn1_with(&AngleOptions::default())
    }

    pub fn quermassintegral_vn1_with(&self, opts: &AngleOptions) -> f64 {
        let edge_sum: f64 = self
            .edges
            .iter()
            .map(|e| self.external_angle_with(e, opts).value * e.euclid_length)
            .sum();
        unit_ball_volume(self.n - 1) / self.n as f64 * edge_sum
    }
}

/// Whether a support point lies on the (closed) edge segment.
fn on_edge(e: &Edge, p: &[i64]) -> bool {
    let a = &e.endpoints[0];
    // p = a + k·β for integer k in [0, lattice_length]
    let mut k: Option<i64> = None;
    for (i, &b) in e.beta.iter().enumerate() {
        let d = p[i] - a[i];
        if b == 0 {
            if d != 0 {
                return false;
            }
        } else {
            if d % b != 0 {
                return false;
            }
            let t = d / b;
            match k {
                None => k = Some(t),
                Some(prev) if prev != t => return false,
                _ => {}
            }
        }
    }
    matches!(k, Some(t) if (0..=e.lattice_length).contains(&t))
}

fn hull_vertices(support: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = support[0].len();
    let mut extreme = vec![false; support.len()];
    // coordinate extremes are vertices for free when unique
    for j in 0..n {
        let lo = support.iter().map(|p| p[j]).min().unwrap();
        let hi = support.iter().map(|p| p[j]).max().unwrap();
        for (i, p) in support.iter().enumerate() {
            if (p[j] == lo && support.iter().filter(|q| q[j] == lo).count() == 1)
                || (p[j] == hi && support.iter().filter(|q| q[j] == hi).count() == 1)
            {
                extreme[i] = true;
            }
        }
    }
    let mut vertices = Vec::new();
    for (i, p) in support.iter().enumerate() {
        if extreme[i] {
            vertices.push(p.clone());
            continue;
        }
        let others: Vec<Vec<i64>> = support
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if !point_in_conv(p, &others) {
            vertices.push(p.clone());
        }
    }
    vertices
}

fn hull_edges(support: &[Vec<i64>], vertices: &[Vec<i64>]) -> Vec<Edge> {
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let p = &vertices[i];
            let q = &vertices[j];
            let diff: Vec<i64> = q.iter().zip(p).map(|(a, b)| a - b).collect();
            let beta = primitive_vector(&diff).expect("distinct vertices");
            let scale: i64 = (0..p.len())
                .find(|&t| beta[t] != 0)
                .map(|t| diff[t] / beta[t])
                .unwrap();
            if !is_edge(support, p, &beta, scale) {
                continue;
            }
            let lattice_points: Vec<EdgePoint> = (0..=scale)
                .map(|k| {
                    let pt: Vec<i64> = p.iter().zip(&beta).map(|(a, b)| a + k * b).collect();
                    EdgePoint {
                        k,
                        in_support: support.iter().any(|s| *s == pt),
                    }
                })
                .collect();
            edges.push(Edge {
                endpoints: [p.clone(), q.clone()],
                beta: beta.clone(),
                lattice_points,
                lattice_length: scale,
                euclid_length: scale as f64 * int_norm(&beta),
            });
        }
    }
    edges.sort_by(|a, b| a.endpoints.cmp(&b.endpoints));
    edges
}

/// Gordan's test: [p, p+ℓβ] is a face iff some functional vanishing on β is
/// strictly negative on all off-line support points, iff 0 is not in the
/// convex hull of their projections to β^⊥ (scaled to stay integral).
fn is_edge(support: &[Vec<i64>], p: &[i64], beta: &[i64], ell: i64) -> bool {
    let beta2: i64 = beta.iter().map(|b| b * b).sum();
    let mut projected: Vec<Vec<i64>> = Vec::new();
    for r in support {
        let d: Vec<i64> = r.iter().zip(p).map(|(a, b)| a - b).collect();
        let dot: i64 = d.iter().zip(beta).map(|(a, b)| a * b).sum();
        let v: Vec<i64> = d
            .iter()
            .zip(beta)
            .map(|(&di, &bi)| di * beta2 - dot * bi)
            .collect();
        if v.iter().all(|&x| x == 0) {
            // on the line through the pair; must lie within the segment,
            // otherwise an endpoint would not be a vertex
            debug_assert!((0..=ell * beta2).contains(&(dot)));
            continue;
        }
        projected.push(v);
    }
    if projected.is_empty() {
        return true; // one-dimensional hull
    }
    let zero = vec![0i64; p.len()];
    !point_in_conv(&zero, &projected)
}

/// Orthonormal basis of β^⊥ from the Householder reflection exchanging β/|β|
/// with the first coordinate axis.
fn orthonormal_complement(beta: &[i64]) -> Vec<Vec<f64>> {
    let n = beta.len();
    let norm = int_norm(beta);
    let v: Vec<f64> = beta.iter().map(|&b| b as f64 / norm).collect();
    let mut u = v.clone();
    u[0] -= 1.0;
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let mut basis = Vec::with_capacity(n - 1);
    for j in 1..n {
        let mut col: Vec<f64> = (0..n).map(|i| f64::from(i == j)).collect();
        if uu > 1e-30 {
            let factor = 2.0 * u[j] / uu;
            for i in 0..n {
                col[i] -= factor * u[i];
            }
        }
        basis.push(col);
    }
    basis
}

/// Fraction of the plane circle cut out by half-plane constraints: the
/// feasible directions form an arc of length π·(no constraints handled
/// upstream); value is arc/(2π).
fn sector_fraction(normals: &[Vec<f64>]) -> f64 {
    debug_assert!(normals.iter().all(|w| w.len() == 2));
    let theta_star = interior_direction(normals);
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for w in normals {
        let phi = w[1].atan2(w[0]);
        let delta = wrap_pi(phi - theta_star);
        lo = lo.max(delta - PI / 2.0);
        hi = hi.min(delta + PI / 2.0);
    }
    ((hi - lo).max(0.0)) / (2.0 * PI)
}

fn interior_direction(normals: &[Vec<f64>]) -> f64 {
    let sx: f64 = normals.iter().map(|w| w[0]).sum();
    let sy: f64 = normals.iter().map(|w| w[1]).sum();
    if sx.hypot(sy) > 1e-9 {
        return sy.atan2(sx);
    }
    // nearly-cancelling normals: scan for the direction of best margin
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..4096 {
        let theta = i as f64 / 4096.0 * 2.0 * PI;
        let margin = normals
            .iter()
            .map(|w| w[0] * theta.cos() + w[1] * theta.sin())
            .fold(f64::INFINITY, f64::min);
        if margin > best.0 {
            best = (margin, theta);
        }
    }
    best.1
}

fn wrap_pi(t: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut x = t % two_pi;
    if x > PI {
        x -= two_pi;
    } else if x <= -PI {
        x += two_pi;
    }
    x
}

/// Hit fraction of the cone on the unit sphere of its span, sampled in
/// deterministic per-chunk substreams derived from the seed.
fn monte_carlo_angle(cone: &NormalCone, opts: &AngleOptions) -> AngleEstimate {
    const CHUNK: usize = 1 << 16;
    let dim = cone.span_basis.len();
    let samples = opts.samples.max(1);
    let mut hits = 0u64;
    let mut done = 0usize;
    let mut chunk_idx = 0u64;
    while done < samples {
        let take = CHUNK.min(samples - done);
        let mut rng = ChaCha8Rng::seed_from_u64(
            opts.seed ^ chunk_idx.wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        for _ in 0..take {
            let mut u = vec![0.0f64; dim];
            let mut norm2 = 0.0;
            for x in u.iter_mut() {
                *x = standard_normal(&mut rng);
                norm2 += *x * *x;
            }
            if norm2 < 1e-290 {
                continue;
            }
            let inside = cone
                .halfspace_normals
                .iter()
                .all(|w| w.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() >= 0.0);
            if inside {
                hits += 1;
            }
        }
        done += take;
        chunk_idx += 1;
    }
    let p = hits as f64 / samples as f64;
    let std_err = (p * (1.0 - p) / samples as f64).sqrt();
    AngleEstimate {
        value: p,
        std_err: Some(std_err),
    }
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box–Muller on open-interval uniforms
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn poly(n: usize, alphas: &[&[i64]]) -> ExpPoly {
        ExpPoly::new(
            n,
            alphas
                .iter()
                .map(|a| (a.to_vec(), Complex64::new(1.0, 0.0)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn triangle_has_three_edges() {
        let p = newton_polytope(&poly(2, &[&[0, 0], &[1, 0], &[0, 1]]));
        assert_eq!(p.dim(), 2);
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.edges().len(), 3);
    }

    #[test]
    fn segment_support() {
        let p = newton_polytope(&poly(2, &[&[0, 0], &[1, 1]]));
        assert_eq!(p.dim(), 1);
        assert_eq!(p.edges().len(), 1);
        let e = &p.edges()[0];
        assert_eq!(e.beta, vec![1, 1]);
        assert_eq!(e.support_offsets(), vec![0, 1]);
    }

    #[test]
    fn interior_and_edge_points_are_classified() {
        // conv{(0,0),(2,0),(0,2)} with (1,1) on the hypotenuse and
        // (1,0),(0,1) interior to edges
        let p = newton_polytope(&poly(
            2,
            &[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 1], &[0, 2]],
        ));
        assert_eq!(p.dim(), 2);
        let verts = p.vertices();
        assert_eq!(verts, &[vec![0, 0], vec![0, 2], vec![2, 0]]);
        assert_eq!(p.edges().len(), 3);
        let bottom = p
            .edges()
            .iter()
            .find(|e| e.endpoints == [vec![0, 0], vec![2, 0]])
            .unwrap();
        assert_eq!(bottom.lattice_length, 2);
        assert_eq!(bottom.support_offsets(), vec![0, 1, 2]);
    }

    /// Monotone-chain hull over floats, used as an independent 2d oracle.
    fn hull_2d_oracle(pts: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let mut p: Vec<(i64, i64)> = pts.iter().map(|v| (v[0], v[1])).collect();
        p.sort();
        p.dedup();
        if p.len() <= 2 {
            return p.into_iter().map(|(a, b)| vec![a, b]).collect();
        }
        let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| {
            (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
        };
        let mut lower: Vec<(i64, i64)> = Vec::new();
        for &pt in &p {
            while lower.len() >= 2
                && cross(lower[lower.len() - 2], lower[lower.len() - 1], pt) <= 0
            {
                lower.pop();
            }
            lower.push(pt);
        }
        let mut upper: Vec<(i64, i64)> = Vec::new();
        for &pt in p.iter().rev() {
            while upper.len() >= 2
                && cross(upper[upper.len() - 2], upper[upper.len() - 1], pt) <= 0
            {
                upper.pop();
            }
            upper.push(pt);
        }
        lower.pop();
        upper.pop();
        let mut out: Vec<Vec<i64>> = lower
            .into_iter()
            .chain(upper)
            .map(|(a, b)| vec![a, b])
            .collect();
        out.sort();
        out
    }

    #[test]
    fn vertices_match_2d_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let m = rng.gen_range(3..10);
            let mut pts: Vec<Vec<i64>> = (0..m)
                .map(|_| vec![rng.gen_range(-5..=5), rng.gen_range(-5..=5)])
                .collect();
            pts.sort();
            pts.dedup();
            let hull = NewtonPolytope::from_support(2, pts.clone());
            let mut got = hull.vertices().to_vec();
            got.sort();
            assert_eq!(got, hull_2d_oracle(&pts), "support {pts:?}");
        }
    }

    #[test]
    fn edge_lattice_points_cover_support_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let m = rng.gen_range(3..9);
            let mut pts: Vec<Vec<i64>> = (0..m)
                .map(|_| vec![rng.gen_range(0..=4), rng.gen_range(0..=4)])
                .collect();
            pts.sort();
            pts.dedup();
            let hull = NewtonPolytope::from_support(2, pts.clone());
            for e in hull.edges() {
                // brute force scan: every support point on the segment must
                // appear among the recorded lattice points
                for s in &pts {
                    if on_edge(e, s) {
                        let k = (0..2)
                            .find(|&t| e.beta[t] != 0)
                            .map(|t| (s[t] - e.endpoints[0][t]) / e.beta[t])
                            .unwrap();
                        assert!(e
                            .lattice_points
                            .iter()
                            .any(|lp| lp.k == k && lp.in_support));
                    }
                }
            }
        }
    }

    #[test]
    fn normal_cone_bottom_edge_of_triangle() {
        let p = newton_polytope(&poly(2, &[&[0, 0], &[1, 0], &[0, 1]]));
        let e = p
            .edges()
            .iter()
            .find(|e| e.endpoints == [vec![0, 0], vec![1, 0]])
            .unwrap();
        let cone = p.normal_cone(e);
        assert!(cone.contains(&[0.0, -1.0], 1e-9));
        assert!(!cone.contains(&[0.0, 1.0], 1e-9));
        assert!(!cone.contains(&[1.0, 0.0], 1e-9));
    }

    #[test]
    fn normal_cone_of_segment_is_full_line() {
        let p = newton_polytope(&poly(2, &[&[0, 0], &[1, 1]]));
        let cone = p.normal_cone(&p.edges()[0]);
        assert!(cone.halfspace_normals.is_empty());
        assert!(cone.contains(&[1.0, -1.0], 1e-9));
        assert!(cone.contains(&[-1.0, 1.0], 1e-9));
        assert!(!cone.contains(&[1.0, 1.0], 1e-9));
    }

    fn cube_support() -> Vec<Vec<i64>> {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(vec![x, y, z]);
                }
            }
        }
        pts
    }

    #[test]
    fn normal_cone_cube_edge_is_quarter_plane() {
        let p = NewtonPolytope::from_support(3, cube_support());
        let e = p
            .edges()
            .iter()
            .find(|e| e.endpoints == [vec![0, 0, 0], vec![1, 0, 0]])
            .unwrap();
        let cone = p.normal_cone(e);
        assert!(cone.contains(&[0.0, -1.0, -1.0], 1e-9));
        assert!(cone.contains(&[0.0, -1.0, 0.0], 1e-9));
        assert!(!cone.contains(&[0.0, 1.0, -1.0], 1e-9));
        assert!(!cone.contains(&[1.0, -1.0, -1.0], 1e-9));
    }

    #[test]
    fn external_angles_closed_forms() {
        let p = newton_polytope(&poly(2, &[&[0, 0], &[1, 0], &[0, 1]]));
        for e in p.edges() {
            assert_relative_eq!(p.external_angle(e), 0.5);
        }
        let seg = newton_polytope(&poly(2, &[&[0, 0], &[1, 1]]));
        assert_relative_eq!(seg.external_angle(&seg.edges()[0]), 1.0);
        let cube = NewtonPolytope::from_support(3, cube_support());
        assert_eq!(cube.edges().len(), 12);
        for e in cube.edges() {
            assert_relative_eq!(cube.external_angle(e), 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn planar_polytope_in_3d_has_half_plane_cones() {
        let p = NewtonPolytope::from_support(
            3,
            vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]],
        );
        assert_eq!(p.dim(), 2);
        for e in p.edges() {
            assert_relative_eq!(p.external_angle(e), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn monte_carlo_converges_on_cube_edge() {
        let cube = NewtonPolytope::from_support(3, cube_support());
        let e = &cube.edges()[0];
        let est = cube.external_angle_with(
            e,
            &AngleOptions {
                seed: 42,
                samples: 1_000_000,
                force_monte_carlo: true,
            },
        );
        let se = est.std_err.unwrap();
        assert!(se > 0.0);
        assert!(
            (est.value - 0.25).abs() <= 3.0 * se,
            "estimate {} departs from 0.25 by more than 3 standard errors ({se})",
            est.value
        );
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let cube = NewtonPolytope::from_support(3, cube_support());
        let e = &cube.edges()[0];
        let opts = AngleOptions {
            seed: 9,
            samples: 200_000,
            force_monte_carlo: true,
        };
        let a = cube.external_angle_with(e, &opts).value;
        let b = cube.external_angle_with(e, &opts).value;
        assert_eq!(a, b);
    }

    #[test]
    fn quermassintegral_examples() {
        let tri = newton_polytope(&poly(2, &[&[0, 0], &[1, 0], &[0, 1]]));
        assert_relative_eq!(
            tri.quermassintegral_vn1(),
            (2.0 + 2.0f64.sqrt()) / 2.0,
            epsilon = 1e-12
        );
        let square = newton_polytope(&poly(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]));
        assert_relative_eq!(square.quermassintegral_vn1(), 2.0, epsilon = 1e-12);
        let seg = newton_polytope(&poly(2, &[&[0, 0], &[1, 1]]));
        assert_relative_eq!(seg.quermassintegral_vn1(), 2.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn quermassintegral_is_half_perimeter_in_2d() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let m = rng.gen_range(3..9);
            let pts: Vec<Vec<i64>> = (0..m)
                .map(|_| vec![rng.gen_range(-4..=4), rng.gen_range(-4..=4)])
                .collect();
            let hull = NewtonPolytope::from_support(2, pts);
            if hull.dim() < 2 {
                continue;
            }
            let perimeter: f64 = hull.edges().iter().map(|e| e.euclid_length).sum();
            assert!(
                (hull.quermassintegral_vn1() - perimeter / 2.0).abs()
                    <= 1e-12 * perimeter.max(1.0)
            );
            // each external angle is exactly 1/2, so their sum is d/2
            let gamma_sum: f64 = hull.edges().iter().map(|e| hull.external_angle(e)).sum();
            assert_relative_eq!(gamma_sum, hull.edges().len() as f64 / 2.0);
        }
    }

    #[test]
    fn flipped_edge_mirrors_lattice_data() {
        let p = newton_polytope(&poly(
            2,
            &[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 1], &[0, 2]],
        ));
        let bottom = p
            .edges()
            .iter()
            .find(|e| e.endpoints == [vec![0, 0], vec![2, 0]])
            .unwrap();
        let fl = bottom.flipped();
        assert_eq!(fl.beta, vec![-1, 0]);
        assert_eq!(fl.endpoints, [vec![2, 0], vec![0, 0]]);
        assert_eq!(fl.support_offsets(), vec![0, 1, 2]);
        assert_relative_eq!(fl.euclid_length, bottom.euclid_length);
    }
}
