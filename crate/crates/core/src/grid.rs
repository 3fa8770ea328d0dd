//! Grids on [-1, 1] with Dirichlet endpoints eliminated, the symmetric
//! tridiagonal Schrödinger-type operator `-d²/dy² + Q(y)` built on them, and
//! the matching discrete Rayleigh quotient.
//!
//! Non-uniform grids use the lumped-mass linear finite-element stiffness,
//! symmetrized as `M^{-1/2} K M^{-1/2}`. On a uniform grid this reduces to the
//! usual three-point stencil `(-1, 2, -1)/h²`.

use crate::error::{KuoError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridKind {
    Uniform,
    /// Geometric refinement toward `y = -1`; consecutive gaps in the layer
    /// shrink by `ratio` when walking toward the endpoint.
    Graded { ratio: f64 },
}

/// Interior nodes of a grid on [-1, 1]. Endpoints carry the Dirichlet data and
/// are not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    kind: GridKind,
    nodes: Vec<f64>,
    /// `gaps[i]` is the distance from node `i-1` to node `i` (node `-1` is the
    /// left endpoint), so `gaps.len() == nodes.len() + 1`.
    gaps: Vec<f64>,
}

impl Grid1D {
    pub fn uniform(n_interior: usize) -> Result<Self> {
        build_grid(n_interior, GridKind::Uniform)
    }

    /// Uniform grid with `intervals` cells, i.e. `h = 2 / intervals`.
    pub fn with_intervals(intervals: usize) -> Result<Self> {
        Self::uniform(intervals.saturating_sub(1))
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Uniform spacing, `None` for graded grids.
    pub fn spacing(&self) -> Option<f64> {
        match self.kind {
            GridKind::Uniform => Some(self.gaps[0]),
            GridKind::Graded { .. } => None,
        }
    }

    /// Trapezoid weights at the interior nodes (the lumped mass).
    pub fn weights(&self) -> Vec<f64> {
        self.gaps.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Nodes including the two endpoints.
    pub fn closed_nodes(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.nodes.len() + 2);
        out.push(-1.0);
        out.extend_from_slice(&self.nodes);
        out.push(1.0);
        out
    }

    /// Discrete L² norm `sqrt(Σ w_i v_i²)`.
    pub fn l2_norm(&self, v: &[f64]) -> f64 {
        self.weights()
            .iter()
            .zip(v)
            .map(|(w, x)| w * x * x)
            .sum::<f64>()
            .sqrt()
    }
}

/// Builds a grid with `n_interior` interior nodes.
pub fn build_grid(n_interior: usize, kind: GridKind) -> Result<Grid1D> {
    if n_interior < 3 {
        return Err(KuoError::InvalidCount(n_interior));
    }
    let intervals = n_interior + 1;
    let gaps = match kind {
        GridKind::Uniform => vec![2.0 / intervals as f64; intervals],
        GridKind::Graded { ratio } => {
            if !(ratio > 0.0 && ratio < 1.0) {
                return Err(KuoError::InvalidRatio(ratio));
            }
            graded_gaps(intervals, ratio)
        }
    };
    let nodes = match kind {
        GridKind::Uniform => {
            let h = gaps[0];
            (0..n_interior).map(|i| -1.0 + (i + 1) as f64 * h).collect()
        }
        GridKind::Graded { .. } => {
            let mut y = -1.0;
            gaps[..n_interior]
                .iter()
                .map(|g| {
                    y += g;
                    y
                })
                .collect()
        }
    };
    Ok(Grid1D { kind, nodes, gaps })
}

// A geometric layer of `layer` gaps next to y = -1 followed by equal gaps. The
// layer is widened until a quarter of the nodes sit in [-1, -0.8].
fn graded_gaps(intervals: usize, ratio: f64) -> Vec<f64> {
    let max_exponent = (1e-8f64.ln() / ratio.ln()).floor() as i32;
    let mut layer = intervals / 2;
    loop {
        let factors: Vec<f64> = (0..intervals)
            .map(|j| {
                if j < layer {
                    let e = ((layer - j) as i32).min(max_exponent);
                    ratio.powi(e)
                } else {
                    1.0
                }
            })
            .collect();
        let total: f64 = factors.iter().sum();
        let gaps: Vec<f64> = factors.iter().map(|f| 2.0 * f / total).collect();
        let mut y = -1.0;
        let mut in_left_tenth = 0;
        for g in &gaps[..intervals - 1] {
            y += g;
            if y <= -0.8 {
                in_left_tenth += 1;
            }
        }
        if 4 * in_left_tenth >= intervals - 1 || layer + 1 >= intervals {
            return gaps;
        }
        layer += 1;
    }
}

/// Symmetric tridiagonal matrix together with the grid it was assembled on.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagOperator {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub grid: Grid1D,
    /// Uniform-grid split `diag = 2/h² + q`, kept as `(1/h², q)` so the Sturm
    /// count can work relative to the Laplacian instead of cancelling at scale 1/h².
    pub(crate) split: Option<(f64, Vec<f64>)>,
}

impl TridiagOperator {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Plain symmetric tridiagonal matrix with no grid semantics beyond its size.
    pub fn from_parts(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(KuoError::InvalidArgument(format!(
                "tridiagonal shape mismatch: {} diagonal vs {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        let n = diag.len();
        let h = 2.0 / (n + 1) as f64;
        let grid = Grid1D {
            kind: GridKind::Uniform,
            nodes: (0..n).map(|i| -1.0 + (i + 1) as f64 * h).collect(),
            gaps: vec![h; n + 1],
        };
        Ok(Self {
            diag,
            off,
            grid,
            split: None,
        })
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Infinity norm, used to scale residuals.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// Converts an eigenvector of the symmetrized matrix back to nodal values
    /// (`v = M^{-1/2} u`). Identity up to scale on uniform grids.
    pub fn to_nodal(&self, u: &[f64]) -> Vec<f64> {
        match self.grid.kind {
            GridKind::Uniform => u.to_vec(),
            GridKind::Graded { .. } => self
                .grid
                .weights()
                .iter()
                .zip(u)
                .map(|(m, x)| x / m.sqrt())
                .collect(),
        }
    }
}

/// Assembles `-d²/dy² + Q` with homogeneous Dirichlet conditions.
pub fn assemble<F: Fn(f64) -> f64>(grid: &Grid1D, potential: F) -> Result<TridiagOperator> {
    let q: Vec<f64> = grid.nodes.iter().map(|&y| potential(y)).collect();
    assemble_sampled(grid, q)
}

/// Same as [`assemble`] with the potential already sampled at the nodes.
pub fn assemble_sampled(grid: &Grid1D, q: Vec<f64>) -> Result<TridiagOperator> {
    let n = grid.len();
    if q.len() != n {
        return Err(KuoError::InvalidArgument(format!(
            "potential has {} samples for {} nodes",
            q.len(),
            n
        )));
    }
    if let Some(i) = q.iter().position(|v| !v.is_finite()) {
        return Err(KuoError::NonFinitePotential {
            y: grid.nodes[i],
            value: q[i],
        });
    }
    let (diag, off, split) = match grid.kind {
        GridKind::Uniform => {
            let h = grid.gaps[0];
            let inv_h2 = 1.0 / (h * h);
            let diag = q.iter().map(|qi| 2.0 * inv_h2 + qi).collect();
            (diag, vec![-inv_h2; n - 1], Some((inv_h2, q)))
        }
        GridKind::Graded { .. } => {
            let m = grid.weights();
            let g = &grid.gaps;
            let diag = (0..n)
                .map(|i| (1.0 / g[i] + 1.0 / g[i + 1]) / m[i] + q[i])
                .collect();
            let off = (0..n - 1)
                .map(|i| -1.0 / (g[i + 1] * (m[i] * m[i + 1]).sqrt()))
                .collect();
            (diag, off, None)
        }
    };
    Ok(TridiagOperator {
        diag,
        off,
        grid: grid.clone(),
        split,
    })
}

/// Discrete Rayleigh quotient `(vᵀ K v + Σ m_i Q_i v_i²) / Σ m_i v_i²` of a
/// nodal function `v` (Dirichlet zeros implied at the endpoints).
pub fn rayleigh_quotient<F: Fn(f64) -> f64>(grid: &Grid1D, potential: F, v: &[f64]) -> Result<f64> {
    if v.len() != grid.len() {
        return Err(KuoError::InvalidArgument(format!(
            "vector has {} entries for {} nodes",
            v.len(),
            grid.len()
        )));
    }
    if v.iter().all(|x| *x == 0.0) {
        return Err(KuoError::ZeroVector);
    }
    let m = grid.weights();
    // Stiffness form Σ (v_{i} - v_{i-1})² / g_i over all gaps, zeros at the ends.
    let mut stiffness = 0.0;
    let mut prev = 0.0;
    for (i, g) in grid.gaps.iter().enumerate() {
        let cur = if i < v.len() { v[i] } else { 0.0 };
        stiffness += (cur - prev) * (cur - prev) / g;
        prev = cur;
    }
    let mut potential_term = 0.0;
    let mut mass = 0.0;
    for ((y, vi), mi) in grid.nodes.iter().zip(v).zip(&m) {
        let q = potential(*y);
        if !q.is_finite() {
            return Err(KuoError::NonFinitePotential { y: *y, value: q });
        }
        potential_term += mi * q * vi * vi;
        mass += mi * vi * vi;
    }
    Ok((stiffness + potential_term) / mass)
}
