//! Coefficient layouts: which of `a_n`, `b_n` are fixed and which are unknown,
//! and the common-zero equations they must satisfy.

use super::system::{Affine, BlockSystem, Equation};
use super::{BlockSpec, ForgeError};
use crate::evaluator::RealPoint;
use crate::spectral::SpectralData;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NodeCoef {
    pub a: Affine,
    pub b: Affine,
}

/// `r_k = k²·a[r_node]`, `q_k = k²·b[q_node]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSlot {
    pub k: usize,
    pub r_node: usize,
    pub q_node: usize,
}

#[derive(Debug, Clone)]
pub struct Layout {
    pub coefs: Vec<NodeCoef>,
    pub zeros: Vec<RealPoint>,
    pub equations: Vec<Equation>,
    pub n_vars: usize,
    pub node_block: Vec<Option<usize>>,
    pub blocks: Vec<BlockSpec>,
    pub params: Vec<ParamSlot>,
}

#[derive(Clone, Copy)]
enum Functional {
    H,
    S,
}

fn weights(data: &SpectralData, coefs: &[NodeCoef], f: Functional) -> Vec<Affine> {
    coefs
        .iter()
        .enumerate()
        .map(|(n, c)| match f {
            Functional::H => c.a.scaled(data.mu[n].sqrt()),
            Functional::S => {
                debug_assert!(c.a.var.is_none() || c.b.var.is_none());
                if c.a.var.is_some() {
                    c.a.scaled(c.b.constant)
                } else {
                    c.b.scaled(c.a.constant)
                }
            }
        })
        .collect()
}

fn kk(k: usize) -> f64 {
    (k * k) as f64
}

impl Layout {
    pub fn system(&self, data: &SpectralData, mask: bool) -> BlockSystem {
        BlockSystem::assemble(data, &self.equations, self.n_vars, &self.node_block, mask)
    }

    pub fn coefficients(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (
            self.coefs.iter().map(|c| c.a.eval(x)).collect(),
            self.coefs.iter().map(|c| c.b.eval(x)).collect(),
        )
    }

    pub fn params_from(&self, a: &[f64], b: &[f64]) -> Vec<(usize, f64, f64)> {
        self.params
            .iter()
            .map(|p| (p.k, a[p.r_node] * kk(p.k), b[p.q_node] * kk(p.k)))
            .collect()
    }

    fn push(&mut self, data: &SpectralData, point: RealPoint, block: usize, f: Functional) {
        self.equations.push(Equation {
            point,
            weights: weights(data, &self.coefs, f),
            block,
        });
    }

    fn empty(data: &SpectralData, blocks: &[BlockSpec], n_vars: usize) -> Self {
        let mut node_block = vec![None; data.len()];
        for (i, b) in blocks.iter().enumerate() {
            for n in b.nodes() {
                node_block[n] = Some(i);
            }
        }
        Self {
            coefs: vec![NodeCoef::default(); data.len()],
            zeros: Vec::new(),
            equations: Vec::new(),
            n_vars,
            node_block,
            blocks: blocks.to_vec(),
            params: Vec::new(),
        }
    }
}

fn check_index(data: &SpectralData, i: usize) -> Result<(), ForgeError> {
    if i >= data.len() {
        return Err(ForgeError::IndexMismatch(format!("node {i} outside {} nodes", data.len())));
    }
    Ok(())
}

/// Zero of `√μ_l/(x − t_l) + √μ_r/(x − t_r)` in `(t_l, t_r)`, anchored at the closer node.
pub fn pair_point(data: &SpectralData, l: usize, r: usize) -> RealPoint {
    let (sl, sr) = (data.mu[l].sqrt(), data.mu[r].sqrt());
    let d = data.t[r] - data.t[l];
    let dl = d * sl / (sl + sr);
    let dr = d * sr / (sl + sr);
    if dl <= dr {
        RealPoint::near(data, l, dl)
    } else {
        RealPoint::near(data, r, -dr)
    }
}

pub fn layout_ii(data: &SpectralData, blocks: &[BlockSpec]) -> Result<Layout, ForgeError> {
    let mut lay = Layout::empty(data, blocks, 2 * blocks.len());
    for (i, blk) in blocks.iter().enumerate() {
        let BlockSpec::Pair { k, left, right, mirrored } = *blk else {
            return Err(ForgeError::IndexMismatch("case II expects pair blocks".into()));
        };
        check_index(data, right)?;
        let w = 1.0 / kk(k);
        let (rv, qv) = (2 * i, 2 * i + 1);
        let ratio = (data.mu[left] / data.mu[right]).sqrt();
        if !mirrored {
            lay.coefs[left] = NodeCoef {
                a: Affine::linear(rv, w),
                b: Affine::constant(ratio * w),
            };
            lay.coefs[right] = NodeCoef {
                a: Affine::constant(w),
                b: Affine::linear(qv, w),
            };
            lay.params.push(ParamSlot {
                k,
                r_node: left,
                q_node: right,
            });
        } else {
            lay.coefs[left] = NodeCoef {
                a: Affine::constant(w),
                b: Affine::linear(qv, w),
            };
            lay.coefs[right] = NodeCoef {
                a: Affine::linear(rv, w),
                b: Affine::constant(w / ratio),
            };
            lay.params.push(ParamSlot {
                k,
                r_node: right,
                q_node: left,
            });
        }
        lay.zeros.push(pair_point(data, left, right));
    }
    for i in 0..blocks.len() {
        let p = lay.zeros[i];
        lay.push(data, p, i, Functional::H);
        lay.push(data, p, i, Functional::S);
    }
    Ok(lay)
}

/// Point at distance 1 from `near`, on the side away from `far`.
pub fn near_far_point(data: &SpectralData, near: usize, far: usize) -> RealPoint {
    RealPoint::near(data, near, if far > near { -1.0 } else { 1.0 })
}

pub fn layout_iii(data: &SpectralData, anchor: Option<usize>, blocks: &[BlockSpec]) -> Result<Layout, ForgeError> {
    let mut lay = Layout::empty(data, blocks, 2 * blocks.len());
    if let Some(a0) = anchor {
        check_index(data, a0)?;
        lay.coefs[a0] = NodeCoef {
            a: Affine::constant(10.0),
            b: Affine::constant(10.0),
        };
    }
    for (i, blk) in blocks.iter().enumerate() {
        let BlockSpec::NearFar { k, near, far } = *blk else {
            return Err(ForgeError::IndexMismatch("case III expects near/far blocks".into()));
        };
        check_index(data, near.max(far))?;
        let w = 1.0 / kk(k);
        let ratio = (data.mu[near] / data.mu[far]).sqrt();
        let d = (data.t[far] - data.t[near]).abs();
        lay.coefs[near] = NodeCoef {
            a: Affine::linear(2 * i, w),
            b: Affine::constant(ratio * w),
        };
        lay.coefs[far] = NodeCoef {
            a: Affine::constant(-w * ratio * (d + 1.0)),
            b: Affine::linear(2 * i + 1, w),
        };
        lay.params.push(ParamSlot {
            k,
            r_node: near,
            q_node: far,
        });
        lay.zeros.push(near_far_point(data, near, far));
    }
    for i in 0..blocks.len() {
        let p = lay.zeros[i];
        lay.push(data, p, i, Functional::H);
        lay.push(data, p, i, Functional::S);
    }
    Ok(lay)
}

/// Fixed `a` of a case IV cluster layout; the pivot `b` values are the unknowns.
pub fn iv_fixed_coefs(data: &SpectralData, blocks: &[BlockSpec]) -> Result<Vec<NodeCoef>, ForgeError> {
    let mut coefs = vec![NodeCoef::default(); data.len()];
    for (i, blk) in blocks.iter().enumerate() {
        let BlockSpec::Cluster { k, first, last, pivot } = *blk else {
            return Err(ForgeError::IndexMismatch("case IV expects cluster blocks".into()));
        };
        check_index(data, last.max(pivot))?;
        let len = (last + 1 - first) as f64;
        let tail = first > pivot;
        let weight = |l: usize| if tail { data.mu[l] / (data.t[l] * data.t[l]) } else { data.mu[l] };
        let sigma: f64 = (first..=last).map(weight).sum();
        for l in first..=last {
            let a = if tail {
                data.mu[l].sqrt() / data.t[l].abs()
            } else {
                data.mu[l].sqrt()
            } / (k as f64 * sigma.sqrt());
            coefs[l] = NodeCoef {
                a: Affine::constant(a),
                b: Affine::constant(1.0 / (kk(k) * len)),
            };
        }
        coefs[pivot] = NodeCoef {
            a: Affine::constant(1.0 / kk(k)),
            b: Affine::linear(i, 1.0),
        };
    }
    Ok(coefs)
}

pub fn layout_iv(data: &SpectralData, blocks: &[BlockSpec], zeros: &[RealPoint]) -> Result<Layout, ForgeError> {
    if zeros.len() != blocks.len() {
        return Err(ForgeError::IndexMismatch(format!(
            "{} zeros for {} blocks",
            zeros.len(),
            blocks.len()
        )));
    }
    let mut lay = Layout::empty(data, blocks, blocks.len());
    lay.coefs = iv_fixed_coefs(data, blocks)?;
    lay.zeros = zeros.to_vec();
    for (i, &p) in zeros.iter().enumerate() {
        lay.push(data, p, i, Functional::S);
    }
    Ok(lay)
}
