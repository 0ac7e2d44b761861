//! Block-structured linear systems arising from common-zero equations, solved
//! by the block-Jacobi fixed point `x ← D⁻¹(u − O x)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::evaluator::RealPoint;
use crate::numeric::CompensatedSum;
use crate::spectral::SpectralData;

/// `constant + coef·x[var]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Affine {
    pub constant: f64,
    pub var: Option<(usize, f64)>,
}

impl Affine {
    pub fn constant(c: f64) -> Self {
        Self { constant: c, var: None }
    }

    pub fn linear(var: usize, coef: f64) -> Self {
        Self {
            constant: 0.0,
            var: Some((var, coef)),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant + self.var.map_or(0.0, |(v, c)| c * x[v])
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            constant: self.constant * s,
            var: self.var.map(|(v, c)| (v, c * s)),
        }
    }
}

/// One equation `Σ_n w_n(x)/(s − t_n) = 0` owned by a block.
#[derive(Debug, Clone)]
pub struct Equation {
    pub point: RealPoint,
    pub weights: Vec<Affine>,
    pub block: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub iterations: usize,
    pub contraction_factor: f64,
    /// Worst row of `|Mx − u| / (Σ|M_ij x_j| + |u_i|)` at the returned solution.
    pub residual_norm: f64,
}

/// Dense `M x = u` with a block partition of unknowns and equations.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    /// Unknown indices of each block; equation rows share the same partition.
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    /// Assembles the system from equations over `n_vars` unknowns.
    ///
    /// With `mask`, weights of nodes outside an equation's own block are dropped.
    pub fn assemble(
        data: &SpectralData,
        equations: &[Equation],
        n_vars: usize,
        node_block: &[Option<usize>],
        mask: bool,
    ) -> Self {
        assert_eq!(equations.len(), n_vars);
        let mut m = DMatrix::zeros(n_vars, n_vars);
        let mut u = DVector::zeros(n_vars);
        let mut nblocks = 0;
        for e in equations {
            nblocks = nblocks.max(e.block + 1);
        }
        let mut blocks = vec![Vec::new(); nblocks];
        for (row, e) in equations.iter().enumerate() {
            blocks[e.block].push(row);
            let mut rhs = CompensatedSum::new();
            for (n, w) in e.weights.iter().enumerate() {
                if *w == Affine::default() {
                    continue;
                }
                if mask && node_block[n] != Some(e.block) {
                    continue;
                }
                let inv = 1.0 / e.point.minus_node(data, n);
                rhs.add(-w.constant * inv);
                if let Some((v, c)) = w.var {
                    m[(row, v)] += c * inv;
                }
            }
            u[row] = rhs.value();
        }
        Self {
            matrix: m,
            rhs: u,
            blocks,
        }
    }

    fn diag_block_inverse(&self) -> Vec<DMatrix<f64>> {
        self.blocks
            .iter()
            .map(|idx| {
                let b = DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.matrix[(idx[i], idx[j])]);
                b.try_inverse().unwrap_or_else(|| DMatrix::from_element(idx.len(), idx.len(), f64::NAN))
            })
            .collect()
    }

    /// Iteration matrix `K = −D⁻¹O` and fixed vector `D⁻¹u`.
    pub fn iteration(&self) -> (DMatrix<f64>, DVector<f64>) {
        let n = self.rhs.len();
        let inv = self.diag_block_inverse();
        let mut k = DMatrix::zeros(n, n);
        let mut c = DVector::zeros(n);
        let mut owner = vec![0usize; n];
        for (b, idx) in self.blocks.iter().enumerate() {
            for &i in idx {
                owner[i] = b;
            }
        }
        for (b, idx) in self.blocks.iter().enumerate() {
            for (ii, &i) in idx.iter().enumerate() {
                let mut ci = 0.0;
                for (jj, &j) in idx.iter().enumerate() {
                    ci += inv[b][(ii, jj)] * self.rhs[j];
                }
                c[i] = ci;
                for col in 0..n {
                    if owner[col] == b {
                        continue;
                    }
                    let mut s = 0.0;
                    for (jj, &j) in idx.iter().enumerate() {
                        s += inv[b][(ii, jj)] * self.matrix[(j, col)];
                    }
                    k[(i, col)] = -s;
                }
            }
        }
        (k, c)
    }

    /// Row sums of `|K|`; their maximum is the contraction factor `‖K‖∞`.
    pub fn row_sums(&self) -> Vec<f64> {
        let (k, _) = self.iteration();
        (0..k.nrows()).map(|i| k.row(i).iter().map(|x| x.abs()).sum()).collect()
    }

    pub fn contraction(&self) -> f64 {
        self.row_sums().into_iter().fold(0.0, f64::max)
    }

    /// Fixed-point iteration from `x = D⁻¹u` until the update stalls at rounding level.
    pub fn fixed_point(&self, max_iter: usize) -> (Vec<f64>, SolverDiagnostics) {
        let (k, c) = self.iteration();
        let contraction = (0..k.nrows())
            .map(|i| k.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut x = c.clone();
        let mut iterations = 0;
        for it in 1..=max_iter {
            let next = &c + &k * &x;
            let dx = (&next - &x).amax();
            x = next;
            iterations = it;
            if dx <= 1e-16 * x.amax() || !dx.is_finite() {
                break;
            }
        }
        let xs: Vec<f64> = x.iter().copied().collect();
        let residual_norm = self.relative_residual(&xs);
        (
            xs,
            SolverDiagnostics {
                iterations,
                contraction_factor: contraction,
                residual_norm,
            },
        )
    }

    pub fn relative_residual(&self, x: &[f64]) -> f64 {
        let xv = DVector::from_column_slice(x);
        let r = &self.matrix * &xv - &self.rhs;
        let scale = (0..self.matrix.nrows())
            .map(|i| {
                self.matrix.row(i).iter().zip(xv.iter()).map(|(m, x)| (m * x).abs()).sum::<f64>()
                    + self.rhs[i].abs()
            })
            .collect::<Vec<_>>();
        r.iter()
            .zip(&scale)
            .map(|(ri, s)| if *s > 0.0 { ri.abs() / s } else { ri.abs() })
            .fold(0.0, f64::max)
    }
}
