//! Sampled function values on N-point uniform circle grids (1 to 3 axes) and
//! the axis-wise transforms acting on them.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The grid nodes e^{2 pi i j / N}.
pub fn grid_points(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect()
}

/// Function samples on a uniform tensor grid of the unit circle, axis 0
/// fastest. Symmetric axes satisfy f(y) = f(1/y), i.e. index j <-> N - j.
#[derive(Debug, Clone)]
pub struct TorusGrid {
    pub dims: usize,
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl TorusGrid {
    pub fn zeros(dims: usize, n: usize) -> Self {
        assert!((1..=3).contains(&dims));
        TorusGrid { dims, n, data: vec![Complex64::new(0.0, 0.0); n.pow(dims as u32)] }
    }

    pub fn from_fn(dims: usize, n: usize, mut f: impl FnMut(&[Complex64]) -> Result<Complex64>) -> Result<Self> {
        let pts = grid_points(n);
        let mut g = TorusGrid::zeros(dims, n);
        let mut idx = vec![0usize; dims];
        for flat in 0..g.data.len() {
            let mut rem = flat;
            for d in 0..dims {
                idx[d] = rem % n;
                rem /= n;
            }
            let coords: Vec<Complex64> = idx.iter().map(|&i| pts[i]).collect();
            g.data[flat] = f(&coords)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn flat(&self, idx: &[usize]) -> usize {
        let mut f = 0usize;
        for d in (0..self.dims).rev() {
            f = f * self.n + idx[d];
        }
        f
    }

    pub fn sup_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn sup_distance(&self, other: &TorusGrid) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max |f(index) - f(reflected index)| along the axis: the y <-> 1/y
    /// symmetry defect.
    pub fn axis_symmetry_residual(&self, axis: usize) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        self.for_each_line(axis, |line| {
            for j in 1..n {
                worst = worst.max((line[j] - line[n - j]).norm());
            }
        });
        worst
    }

    /// Visit every 1-d line along `axis` (read-only).
    fn for_each_line(&self, axis: usize, mut visit: impl FnMut(&[Complex64])) {
        let n = self.n;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let outer: Vec<usize> = (0..self.dims).filter(|&d| d != axis).collect();
        let outer_count: usize = outer.iter().map(|_| n).product::<usize>().max(1);
        let mut idx = vec![0usize; self.dims];
        for o in 0..outer_count {
            let mut rem = o;
            for &d in &outer {
                idx[d] = rem % n;
                rem /= n;
            }
            for j in 0..n {
                idx[axis] = j;
                buf[j] = self.data[self.flat(&idx)];
            }
            visit(&buf);
        }
    }

    /// Apply an N x N kernel matrix along `axis`:
    /// out[i] = (1/N) sum_j K[i*N + j] in[j] on every line.
    pub fn apply_axis_matrix(&self, axis: usize, k: &[Complex64]) -> Result<TorusGrid> {
        let n = self.n;
        if k.len() != n * n {
            return Err(Error::domain("kernel matrix size mismatch"));
        }
        if axis >= self.dims {
            return Err(Error::domain("axis out of range"));
        }
        let mut out = self.clone();
        let outer: Vec<usize> = (0..self.dims).filter(|&d| d != axis).collect();
        let outer_count: usize = outer.iter().map(|_| n).product::<usize>().max(1);
        let mut idx = vec![0usize; self.dims];
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for o in 0..outer_count {
            let mut rem = o;
            for &d in &outer {
                idx[d] = rem % n;
                rem /= n;
            }
            for j in 0..n {
                idx[axis] = j;
                line[j] = self.data[self.flat(&idx)];
            }
            for i in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                let row = &k[i * n..(i + 1) * n];
                for j in 0..n {
                    acc += row[j] * line[j];
                }
                idx[axis] = i;
                out.data[self.flat(&idx)] = acc / n as f64;
            }
        }
        Ok(out)
    }

    /// Multiply pointwise by a two-axis table D[(i, j)] = d[i*N + j] acting on
    /// grid axes (a, b).
    pub fn apply_pair_diag(&self, a: usize, b: usize, d: &[Complex64]) -> Result<TorusGrid> {
        let n = self.n;
        if d.len() != n * n {
            return Err(Error::domain("diag table size mismatch"));
        }
        if a >= self.dims || b >= self.dims || a == b {
            return Err(Error::domain("bad axis pair"));
        }
        let mut out = self.clone();
        let mut idx = vec![0usize; self.dims];
        for flat in 0..out.data.len() {
            let mut rem = flat;
            for dd in 0..self.dims {
                idx[dd] = rem % n;
                rem /= n;
            }
            out.data[flat] *= d[idx[a] * n + idx[b]];
        }
        Ok(out)
    }

    /// Swap two axes (the permutation operator P_{ab}).
    pub fn swap_axes(&self, a: usize, b: usize) -> TorusGrid {
        if a == b {
            return self.clone();
        }
        let n = self.n;
        let mut out = self.clone();
        let mut idx = vec![0usize; self.dims];
        for flat in 0..self.data.len() {
            let mut rem = flat;
            for d in 0..self.dims {
                idx[d] = rem % n;
                rem /= n;
            }
            idx.swap(a, b);
            let target = self.flat(&idx);
            out.data[target] = self.data[flat];
        }
        out
    }
}
