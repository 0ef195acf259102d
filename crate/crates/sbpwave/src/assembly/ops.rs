//! Floating-point sparse-row operators applied along one axis of a field.
//!
//! Rationals are converted to `f64` exactly once, here. 2D fields are flat
//! row-major slices with the y index contiguous: entry `(i, j)` of an
//! `(nx, ny)` field lives at `i * ny + j`.

use crate::rational::RationalMatrix;

#[derive(Clone, Debug)]
struct Row {
    start: usize,
    coeffs: Vec<f64>,
}

/// A sparse 1D linear operator from `n_in` points to `n_out` points.
#[derive(Clone, Debug)]
pub struct Op1d {
    pub n_in: usize,
    pub n_out: usize,
    rows: Vec<Row>,
}

impl Op1d {
    /// Converts an exact matrix, scaling every entry by `scale` (usually 1/dx).
    pub fn from_rational(mat: &RationalMatrix, scale: f64) -> Self {
        let rows = (0..mat.rows())
            .map(|i| {
                let row = mat.row(i);
                let first = row.iter().position(|v| !v.is_zero());
                match first {
                    None => Row {
                        start: 0,
                        coeffs: Vec::new(),
                    },
                    Some(a) => {
                        let b = row.iter().rposition(|v| !v.is_zero()).unwrap();
                        Row {
                            start: a,
                            coeffs: row[a..=b].iter().map(|v| v.to_f64() * scale).collect(),
                        }
                    }
                }
            })
            .collect();
        Op1d {
            n_in: mat.cols(),
            n_out: mat.rows(),
            rows,
        }
    }

    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = &self.rows[i];
        r.coeffs.iter().enumerate().map(|(k, &c)| (r.start + k, c))
    }

    /// Dense copy, for eigenvalue work.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n_out)
            .map(|i| {
                let mut row = vec![0.0; self.n_in];
                for (j, c) in self.row_entries(i) {
                    row[j] = c;
                }
                row
            })
            .collect()
    }

    /// `out = self * x` for 1D vectors.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n_in);
        debug_assert_eq!(out.len(), self.n_out);
        for (o, row) in out.iter_mut().zip(&self.rows) {
            let mut s = 0.0;
            for (k, &c) in row.coeffs.iter().enumerate() {
                s += c * x[row.start + k];
            }
            *o = s;
        }
    }

    /// Applies along the x axis of an `(nx_in, ny)` field, accumulating into
    /// `out` (an `(n_out, ny)` field). `mask_y`, when present, scales each
    /// output column j by `mask_y[j]`.
    pub fn apply_x_add(&self, x: &[f64], ny: usize, mask_y: Option<&[f64]>, out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n_in * ny);
        debug_assert_eq!(out.len(), self.n_out * ny);
        for (i, row) in self.rows.iter().enumerate() {
            let dst = &mut out[i * ny..(i + 1) * ny];
            match mask_y {
                None => {
                    for (k, &c) in row.coeffs.iter().enumerate() {
                        let src = &x[(row.start + k) * ny..(row.start + k + 1) * ny];
                        for (d, &s) in dst.iter_mut().zip(src) {
                            *d += c * s;
                        }
                    }
                }
                Some(m) => {
                    for (k, &c) in row.coeffs.iter().enumerate() {
                        let src = &x[(row.start + k) * ny..(row.start + k + 1) * ny];
                        for ((d, &s), &w) in dst.iter_mut().zip(src).zip(m) {
                            *d += w * c * s;
                        }
                    }
                }
            }
        }
    }

    /// Applies along the y axis of an `(nx, ny_in)` field, accumulating into
    /// `out` (an `(nx, n_out)` field). `mask_x` scales output row i.
    pub fn apply_y_add(&self, x: &[f64], nx: usize, mask_x: Option<&[f64]>, out: &mut [f64]) {
        debug_assert_eq!(x.len(), nx * self.n_in);
        debug_assert_eq!(out.len(), nx * self.n_out);
        for i in 0..nx {
            let w = mask_x.map_or(1.0, |m| m[i]);
            if w == 0.0 {
                continue;
            }
            let src = &x[i * self.n_in..(i + 1) * self.n_in];
            let dst = &mut out[i * self.n_out..(i + 1) * self.n_out];
            for (d, row) in dst.iter_mut().zip(&self.rows) {
                let mut s = 0.0;
                for (k, &c) in row.coeffs.iter().enumerate() {
                    s += c * src[row.start + k];
                }
                *d += w * s;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, RationalMatrix};

    fn toy() -> Op1d {
        // 2x3 operator [[1, -1, 0], [0, 2, 1]]
        let mut m = RationalMatrix::zeros(2, 3);
        m.set(0, 0, rat(1, 1));
        m.set(0, 1, rat(-1, 1));
        m.set(1, 1, rat(2, 1));
        m.set(1, 2, rat(1, 1));
        Op1d::from_rational(&m, 1.0)
    }

    #[test]
    fn apply_1d() {
        let op = toy();
        let mut out = vec![0.0; 2];
        op.apply(&[3.0, 5.0, 7.0], &mut out);
        assert_eq!(out, vec![-2.0, 17.0]);
    }

    #[test]
    fn apply_axes_match_dense() {
        let op = toy();
        // field (3, 2): rows [1,2],[3,4],[5,6]
        let f = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let mut out = vec![0.0; 2 * 2];
        op.apply_x_add(&f, 2, None, &mut out);
        assert_eq!(out, vec![-2.0, -2.0, 11.0, 14.0]);

        let mask = [0.0, 1.0];
        let mut out = vec![0.0; 2 * 2];
        op.apply_x_add(&f, 2, Some(&mask), &mut out);
        assert_eq!(out, vec![0.0, -2.0, 0.0, 14.0]);

        // apply along y of a (2, 3) field
        let g = [1.0, 3.0, 5.0, 2.0, 4.0, 6.0];
        let mut out = vec![0.0; 2 * 2];
        op.apply_y_add(&g, 2, None, &mut out);
        assert_eq!(out, vec![-2.0, 11.0, -2.0, 14.0]);
        let maskx = [1.0, 0.0];
        let mut out = vec![0.0; 2 * 2];
        op.apply_y_add(&g, 2, Some(&maskx), &mut out);
        assert_eq!(out, vec![-2.0, 11.0, 0.0, 0.0]);
    }
}
