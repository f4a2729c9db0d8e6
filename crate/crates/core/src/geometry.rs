//! Knot generation on the benchmark ellipse and point-set diagnostics.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::structmat::DenseMatrix;

/// Semi-axes of the benchmark ellipse.
pub const SEMI_MAJOR: f64 = 2.0;
pub const SEMI_MINOR: f64 = 1.0;

pub type Point2 = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Placement {
    /// t_i = 2 pi i / n.
    #[default]
    UniformParameter,
    /// Chebyshev nodes of [-1, 1] mapped onto [0, 2 pi).
    ChebyshevParameter,
}

/// Boundary knots with outward normals and BC tags, plus interior knots.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotSet {
    pub boundary: Vec<Point2>,
    pub normals: Vec<Point2>,
    pub bc_tags: Vec<BcKind>,
    pub interior: Vec<Point2>,
    pub center: Point2,
}

impl KnotSet {
    pub fn n_boundary(&self) -> usize {
        self.boundary.len()
    }

    pub fn n_interior(&self) -> usize {
        self.interior.len()
    }

    /// Boundary knots followed by interior knots.
    pub fn all_points(&self) -> Vec<Point2> {
        self.boundary.iter().chain(&self.interior).copied().collect()
    }

    pub fn with_bc(mut self, kind: BcKind) -> Self {
        self.bc_tags = vec![kind; self.boundary.len()];
        self
    }

    /// Reorders an even boundary ring so that position p and n-1-p hold
    /// antipodal knots; the boundary list then passes
    /// [`is_symmetric_placement`] for a uniform ring.
    pub fn with_antipodal_order(mut self) -> Result<Self> {
        let n = self.boundary.len();
        if n % 2 == 1 {
            return Err(Error::Config(
                "antipodal ordering needs an even number of boundary knots".into(),
            ));
        }
        let order: Vec<usize> = (0..n / 2).chain((n / 2..n).rev()).collect();
        let take = |v: &Vec<Point2>| order.iter().map(|&i| v[i]).collect::<Vec<_>>();
        self.boundary = take(&self.boundary);
        self.normals = take(&self.normals);
        self.bc_tags = order.iter().map(|&i| self.bc_tags[i]).collect();
        Ok(self)
    }

    /// Plain-text table, one knot per line: kind x y nx ny.
    pub fn to_table(&self) -> String {
        let mut s = String::from("# kind x y nx ny\n");
        for ((p, n), tag) in self.boundary.iter().zip(&self.normals).zip(&self.bc_tags) {
            let kind = match tag {
                BcKind::Dirichlet => "dirichlet",
                BcKind::Neumann => "neumann",
            };
            let _ = writeln!(s, "{kind} {:.17e} {:.17e} {:.17e} {:.17e}", p[0], p[1], n[0], n[1]);
        }
        for p in &self.interior {
            let _ = writeln!(s, "interior {:.17e} {:.17e} 0 0", p[0], p[1]);
        }
        s
    }

    /// Minimum pairwise distance over all knots.
    pub fn min_separation(&self) -> f64 {
        let pts = self.all_points();
        let mut best = f64::INFINITY;
        for i in 0..pts.len() {
            for j in 0..i {
                best = best.min(euclidean(&pts[i], &pts[j]));
            }
        }
        best
    }
}

fn ellipse_point(center: Point2, t: f64) -> (Point2, Point2) {
    let p = [center[0] + SEMI_MAJOR * t.cos(), center[1] + SEMI_MINOR * t.sin()];
    let g = [
        (p[0] - center[0]) / (SEMI_MAJOR * SEMI_MAJOR),
        (p[1] - center[1]) / (SEMI_MINOR * SEMI_MINOR),
    ];
    let len = g[0].hypot(g[1]);
    (p, [g[0] / len, g[1] / len])
}

/// Splits `count` points over rings at the given scales in proportion to
/// each ring's scale.
fn ring_counts(count: usize, scales: &[f64]) -> Vec<usize> {
    if scales.len() == 1 {
        return vec![count];
    }
    let total: f64 = scales.iter().sum();
    let mut out: Vec<usize> = scales
        .iter()
        .map(|s| (count as f64 * s / total).round() as usize)
        .collect();
    let assigned: usize = out[..out.len() - 1].iter().sum();
    let last = out.len() - 1;
    out[last] = count.saturating_sub(assigned);
    out
}

/// Interior layout: the centre plus points on scaled concentric ellipses,
/// ring 0.5 for up to 8 points, rings 0.33 and 0.66 beyond. Ring points are
/// uniform in parameter and offset half a step from t = 0.
fn interior_knots(n: usize, center: Point2) -> Vec<Point2> {
    if n == 0 {
        return Vec::new();
    }
    let scales: &[f64] = if n <= 8 { &[0.5] } else { &[0.33, 0.66] };
    let mut pts = Vec::with_capacity(n);
    for (s, m) in scales.iter().zip(ring_counts(n - 1, scales)) {
        for j in 0..m {
            let t = 2.0 * PI * (j as f64 + 0.5) / m as f64;
            pts.push([
                center[0] + s * SEMI_MAJOR * t.cos(),
                center[1] + s * SEMI_MINOR * t.sin(),
            ]);
        }
    }
    pts.push(center);
    pts
}

/// Knots on the ellipse with semi-axes 2 and 1 about `center`. All boundary
/// knots are tagged Dirichlet.
pub fn ellipse_knots(
    n_boundary: usize,
    n_interior: usize,
    center: Point2,
    placement: Placement,
) -> Result<KnotSet> {
    if n_boundary < 3 {
        return Err(Error::Config(format!(
            "at least 3 boundary knots are required, got {n_boundary}"
        )));
    }
    let n = n_boundary as f64;
    let params: Vec<f64> = (0..n_boundary)
        .map(|i| match placement {
            Placement::UniformParameter => 2.0 * PI * i as f64 / n,
            Placement::ChebyshevParameter => {
                PI * (1.0 - (PI * (i as f64 + 0.5) / n).cos())
            }
        })
        .collect();
    let (mut boundary, mut normals): (Vec<Point2>, Vec<Point2>) =
        params.iter().map(|&t| ellipse_point(center, t)).unzip();
    // cos(t + pi) != -cos(t) in floating point; reflect the first half so
    // uniform even counts are exact antipodal pairs.
    if placement == Placement::UniformParameter && n_boundary.is_multiple_of(2) {
        let h = n_boundary / 2;
        for i in 0..h {
            let p = boundary[i];
            boundary[i + h] = [2.0 * center[0] - p[0], 2.0 * center[1] - p[1]];
            normals[i + h] = [-normals[i][0], -normals[i][1]];
        }
    }
    Ok(KnotSet {
        boundary,
        normals,
        bc_tags: vec![BcKind::Dirichlet; n_boundary],
        interior: interior_knots(n_interior, center),
        center,
    })
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn check_same_dimension<P: AsRef<[f64]>>(points: &[P]) -> Result<usize> {
    let dim = points.first().map_or(0, |p| p.as_ref().len());
    for p in points {
        if p.as_ref().len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.as_ref().len(),
            });
        }
    }
    Ok(dim)
}

/// Matrix of Euclidean distances, entry (i, j) = |a_i - b_j|.
pub fn distance_matrix<P: AsRef<[f64]>, Q: AsRef<[f64]>>(a: &[P], b: &[Q]) -> Result<DenseMatrix> {
    let da = check_same_dimension(a)?;
    let db = check_same_dimension(b)?;
    if !a.is_empty() && !b.is_empty() && da != db {
        return Err(Error::DimensionMismatch {
            expected: da,
            found: db,
        });
    }
    Ok(DenseMatrix::from_fn(a.len(), b.len(), |i, j| {
        euclidean(a[i].as_ref(), b[j].as_ref())
    }))
}

/// True when x_i + x_{N-1-i} is the same vector for every i (tolerance 1e-10).
pub fn is_symmetric_placement<P: AsRef<[f64]>>(points: &[P]) -> bool {
    if points.len() < 2 || check_same_dimension(points).is_err() {
        return false;
    }
    let n = points.len();
    let sum = |i: usize| -> Vec<f64> {
        points[i]
            .as_ref()
            .iter()
            .zip(points[n - 1 - i].as_ref())
            .map(|(a, b)| a + b)
            .collect()
    };
    let c = sum(0);
    (1..n).all(|i| sum(i).iter().zip(&c).all(|(a, b)| (a - b).abs() <= 1e-10))
}

/// sigma(x_i) = (omega / M) * sum_k |x_i - x_k|.
pub fn node_distribution_measure<P: AsRef<[f64]>>(points: &[P], i: usize, omega: f64) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Config("empty point set".into()));
    }
    if i >= points.len() {
        return Err(Error::Config(format!(
            "index {i} out of range for {} points",
            points.len()
        )));
    }
    check_same_dimension(points)?;
    let xi = points[i].as_ref();
    let s: f64 = points.iter().map(|p| euclidean(xi, p.as_ref())).sum();
    Ok(omega / points.len() as f64 * s)
}
