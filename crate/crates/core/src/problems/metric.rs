//! Finite metric spaces given as a distance matrix or as a weighted graph
//! closed under shortest paths.

use crate::error::{Error, Result};
use crate::tol::{ABS_TOL, REL_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpace {
    n: usize,
    dist: Vec<f64>,
    origin: usize,
}

impl MetricSpace {
    /// Validates symmetry, zero diagonal, non-negativity and the triangle inequality.
    pub fn from_matrix(matrix: Vec<Vec<f64>>, origin: usize) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::InvalidInstance("metric has no points".into()));
        }
        if origin >= n {
            return Err(Error::InvalidInstance(format!("origin {origin} not in metric")));
        }
        if matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInstance("distance matrix is not square".into()));
        }
        let dist: Vec<f64> = matrix.into_iter().flatten().collect();
        let d = |i: usize, j: usize| dist[i * n + j];
        for i in 0..n {
            if d(i, i) != 0.0 {
                return Err(Error::InvalidInstance(format!("d({i},{i}) must be 0")));
            }
            for j in 0..n {
                if !(d(i, j).is_finite() && d(i, j) >= 0.0) {
                    return Err(Error::InvalidInstance(format!("d({i},{j}) must be finite and >= 0")));
                }
                if d(i, j) != d(j, i) {
                    return Err(Error::InvalidInstance(format!("d({i},{j}) != d({j},{i})")));
                }
                for k in 0..n {
                    let bound = d(i, k) + d(k, j);
                    if d(i, j) > bound + ABS_TOL + REL_TOL * bound {
                        return Err(Error::InvalidInstance(format!(
                            "triangle inequality violated: d({i},{j}) > d({i},{k}) + d({k},{j})"
                        )));
                    }
                }
            }
        }
        Ok(MetricSpace { n, dist, origin })
    }

    /// Shortest-path closure of an undirected weighted graph (Floyd-Warshall).
    pub fn from_edges(points: usize, edges: &[(usize, usize, f64)], origin: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::InvalidInstance("metric has no points".into()));
        }
        let mut dist = vec![f64::INFINITY; points * points];
        for i in 0..points {
            dist[i * points + i] = 0.0;
        }
        for &(u, v, w) in edges {
            if u >= points || v >= points {
                return Err(Error::InvalidInstance(format!("edge ({u},{v}) out of range")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidInstance(format!("edge ({u},{v}) has invalid length {w}")));
            }
            let cur = dist[u * points + v];
            if w < cur {
                dist[u * points + v] = w;
                dist[v * points + u] = w;
            }
        }
        for k in 0..points {
            for i in 0..points {
                let dik = dist[i * points + k];
                if !dik.is_finite() {
                    continue;
                }
                for j in 0..points {
                    let cand = dik + dist[k * points + j];
                    if cand < dist[i * points + j] {
                        dist[i * points + j] = cand;
                    }
                }
            }
        }
        if dist.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidInstance("graph is disconnected".into()));
        }
        let matrix = dist.chunks(points).map(|r| r.to_vec()).collect();
        MetricSpace::from_matrix(matrix, origin)
    }

    /// Points `0..n` on a line at the given coordinates.
    pub fn line(coords: &[f64], origin: usize) -> Result<Self> {
        let matrix = coords
            .iter()
            .map(|a| coords.iter().map(|b| (a - b).abs()).collect())
            .collect();
        MetricSpace::from_matrix(matrix, origin)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    #[inline]
    pub fn d(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.n + b]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}
