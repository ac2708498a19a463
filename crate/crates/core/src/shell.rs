//! The shell of the coamoeba as a weighted toric arrangement, the symmetric
//! matrix S_f built from it, and the two trace-mass formulas used as a
//! cross-check.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::Result;
use crate::expoly::{unit_ball_volume, ExpPoly};
use crate::polytope::{newton_polytope, AngleOptions, NewtonPolytope};
use crate::spectrum::{edge_spectrum_with, EdgeSpectrum};

/// One weighted hyperplane family {β·y ≡ b (mod 2π)} of the shell.
///
/// The weight γ·d/|β| is the coefficient of (β·dx)/|β| ∧ [β·y = b] in the
/// averaged current, external angle included. Coinciding planes from
/// different edges are kept separate; `edge_id` records provenance.
#[derive(Debug, Clone)]
pub struct ShellHyperplane {
    pub beta: Vec<i64>,
    /// Phase in [0, 2π).
    pub b: f64,
    /// Root multiplicity d.
    pub mult: usize,
    /// γ_Δ(Γ)·d/|β|.
    pub weight: f64,
    /// Index into the spectra list of the arrangement.
    pub edge_id: usize,
}

impl ShellHyperplane {
    pub fn canonical_key(&self) -> (Vec<i64>, f64) {
        canonical_plane_key(&self.beta, self.b)
    }
}

/// Sign-normalized plane representative: β is flipped so its first nonzero
/// entry is positive, with b ↦ (2π − b) mod 2π under the flip.
pub fn canonical_plane_key(beta: &[i64], b: f64) -> (Vec<i64>, f64) {
    let flip = beta.iter().find(|&&x| x != 0).map_or(false, |&x| x < 0);
    if !flip {
        (beta.to_vec(), b)
    } else {
        let nb = crate::spectrum::normalize_phase(2.0 * PI - b);
        (beta.iter().map(|&x| -x).collect(), nb)
    }
}

/// Distance of two phases on the circle R/2πZ.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let d = (a - b).rem_euclid(two_pi);
    d.min(two_pi - d)
}

/// The full shell: one hyperplane per (edge, distinct root) pair, plus the
/// per-edge spectra they came from.
#[derive(Debug, Clone)]
pub struct ShellArrangement {
    pub n: usize,
    pub planes: Vec<ShellHyperplane>,
    pub spectra: Vec<EdgeSpectrum>,
}

impl ShellArrangement {
    /// Groups provenance-distinct planes that coincide geometrically, by
    /// canonical key with the given phase tolerance. Returns, per group, the
    /// canonical (β, b) and the indices of its member planes.
    pub fn geometric_planes(&self, tol: f64) -> Vec<(Vec<i64>, f64, Vec<usize>)> {
        let mut groups: Vec<(Vec<i64>, f64, Vec<usize>)> = Vec::new();
        for (i, plane) in self.planes.iter().enumerate() {
            let (beta, b) = plane.canonical_key();
            match groups
                .iter_mut()
                .find(|(gb, gph, _)| *gb == beta && phase_distance(*gph, b) <= tol)
            {
                Some((_, _, members)) => members.push(i),
                None => groups.push((beta, b, vec![i])),
            }
        }
        groups
    }

    /// Σ weight·|β| over the planes; bookkeeping equals Σ_Γ γ_Γ·k_ℓ(Γ).
    pub fn total_weight(&self) -> f64 {
        self.planes
            .iter()
            .map(|p| p.weight * crate::expoly::int_norm(&p.beta))
            .sum()
    }
}

/// Builds the shell of f: restricts f to every edge of its Newton polytope
/// and emits one weighted hyperplane per distinct root. Empty when the
/// polytope is a point.
pub fn build_shell(f: &ExpPoly) -> Result<ShellArrangement> {
    build_shell_with(f, &AngleOptions::default())
}

pub fn build_shell_with(f: &ExpPoly, opts: &AngleOptions) -> Result<ShellArrangement> {
    let p = newton_polytope(f);
    let mut spectra = Vec::with_capacity(p.edges().len());
    let mut planes = Vec::new();
    for (edge_id, e) in p.edges().iter().enumerate() {
        let s = edge_spectrum_with(f, &p, e, opts)?;
        for root in &s.roots {
            planes.push(ShellHyperplane {
                beta: e.beta.clone(),
                b: root.b,
                mult: root.d,
                weight: s.gamma * root.d as f64 / s.beta_norm,
                edge_id,
            });
        }
        spectra.push(s);
    }
    Ok(ShellArrangement {
        n: f.n(),
        planes,
        spectra,
    })
}

/// The matrix S_f with its determinant and trace.
#[derive(Debug, Clone)]
pub struct SMatrix {
    pub s: DMatrix<f64>,
    pub det: f64,
    pub trace: f64,
}

impl SMatrix {
    pub fn n(&self) -> usize {
        self.s.nrows()
    }

    /// Eigenvalues of the symmetric matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .s
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn is_singular(&self, tol: f64) -> bool {
        self.det.abs() <= tol
    }
}

/// S_f = (1/2)·Σ_Γ Vol₁(Γ)·γ_Δ(Γ)·β_Γβ_Γᵗ/|β_Γ|², positive semidefinite by
/// construction and invariant under β → −β.
pub fn s_matrix(sh: &ShellArrangement) -> SMatrix {
    let n = sh.n;
    let mut s = DMatrix::<f64>::zeros(n, n);
    for spec in &sh.spectra {
        let beta = &spec.edge.beta;
        let norm2: f64 = beta.iter().map(|&x| (x * x) as f64).sum();
        let scale = 0.5 * spec.edge.euclid_length * spec.gamma / norm2;
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] += scale * (beta[i] * beta[j]) as f64;
            }
        }
    }
    let det = s.clone().determinant();
    let trace = s.trace();
    SMatrix { s, det, trace }
}

/// Trace mass through the matrix route: 2^{2n−1}·(n−1)!·Vol_n(Bⁿ)·Tr(S).
pub fn trace_mass(sm: &SMatrix, n: usize) -> f64 {
    let factorial: f64 = (1..n).map(|k| k as f64).product();
    2f64.powi(2 * n as i32 - 1) * factorial * unit_ball_volume(n) * sm.trace
}

/// Trace mass through the polytope route:
/// n!·4^{n−1}·Vol_n(Bⁿ)·V_{n−1}(Δ_f, Bⁿ)/Vol_{n−1}(B^{n−1}).
pub fn trace_mass_via_v(p: &NewtonPolytope) -> f64 {
    trace_mass_via_v_with(p, &AngleOptions::default())
}

pub fn trace_mass_via_v_with(p: &NewtonPolytope, opts: &AngleOptions) -> f64 {
    let n = p.n();
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    factorial * 4f64.powi(n as i32 - 1) * unit_ball_volume(n)
        * p.quermassintegral_vn1_with(opts)
        / unit_ball_volume(n - 1)
}
