//! Tensor products of derivations: on `⊗_i f_i`,
//! `δ(⊗_i f_i) = ⊕_j (δ_j(f_j) ⊗_{i≠j} f_i)`, here with the difference
//! quotient in every slot and the Ornstein–Uhlenbeck semigroup per slot.

use serde::Serialize;

use super::poly::{difference_quotient, Poly2, PolyFunction};
use super::quadrature::gauss_hermite;
use crate::error::{Error, Result};

/// Maximum number of slots evaluated by the joint quadrature.
const MAX_JOINT_SLOTS: usize = 4;

/// The `j`-th summand `δ_j(f_j) ⊗_{i≠j} f_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorComponent {
    pub slot: usize,
    pub derivative: Poly2,
    /// `(i, f_i)` for the untouched slots, in slot order.
    pub others: Vec<(usize, PolyFunction)>,
}

/// Summands of `δ(⊗_i f_i)`; slots holding constants contribute nothing.
pub fn tensor_derivation(slots: &[PolyFunction]) -> Vec<TensorComponent> {
    slots
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_constant())
        .map(|(j, f)| TensorComponent {
            slot: j,
            derivative: difference_quotient(f),
            others: slots
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(i, g)| (i, g.clone()))
                .collect(),
        })
        .collect()
}

/// The joint Ornstein–Uhlenbeck semigroup on `∏_i f_i(x_i)` at `point`, via
/// Mehler's formula with a tensor Gauss–Hermite rule in all variables at once.
pub fn tensor_semigroup_at(slots: &[PolyFunction], t: f64, point: &[f64]) -> Result<f64> {
    if slots.len() != point.len() {
        return Err(Error::DimensionMismatch {
            expected: slots.len(),
            got: point.len(),
        });
    }
    if slots.len() > MAX_JOINT_SLOTS {
        return Err(Error::ResourceCap {
            size: slots.len() as u128,
            cap: MAX_JOINT_SLOTS,
        });
    }
    let total_degree: usize = slots.iter().map(PolyFunction::degree).sum();
    let (nodes, weights) = gauss_hermite(total_degree / 2 + 1)?;
    let m = nodes.len();
    let a = (-t).exp();
    let b = (1.0 - (-2.0 * t).exp()).sqrt();
    let n = slots.len();
    let mut idx = vec![0usize; n];
    let mut acc = 0.0;
    loop {
        let mut w = 1.0;
        let mut v = 1.0;
        for s in 0..n {
            w *= weights[idx[s]];
            v *= slots[s].eval(a * point[s] + b * nodes[idx[s]]);
        }
        acc += w * v;
        // odometer over the node grid
        let mut s = 0;
        while s < n {
            idx[s] += 1;
            if idx[s] < m {
                break;
            }
            idx[s] = 0;
            s += 1;
        }
        if s == n {
            break;
        }
    }
    Ok(acc)
}
