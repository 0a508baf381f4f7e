//! Symmetry-adapted bases for cyclic groups and block-diagonal Hamiltonians.
//!
//! For a one-dimensional representation `α` the adapted state of a
//! representative `ṽ` is `Σ_x χ_α(x)^* |g(x)·ṽ⟩`, normalized. Orbits whose
//! stabilizer is incompatible with `α` give the zero vector and drop out of
//! that block. Blocks are formed from these states directly, so non-free
//! actions need no separate normalization formula.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::groups::{build_lookup, group_apply, GroupSpec, ProblemInstance};

const SYMMETRY_TOL: f64 = 1e-10;
const ZERO_NORM: f64 = 1e-9;

/// `χ_α(x) = exp(2πi α x / |G|)` for cyclic groups.
pub fn character(group: &GroupSpec, alpha: u64, x: u64) -> Result<C64> {
    let order = group
        .cyclic_order()
        .ok_or_else(|| Error::Unsupported("characters are only defined for cyclic groups".into()))?;
    let phase = 2.0 * std::f64::consts::PI * ((alpha % order) * (x % order) % order) as f64 / order as f64;
    Ok(C64::from_polar(1.0, phase))
}

#[derive(Clone, Debug)]
pub struct SymmetryBlock {
    pub alpha: u64,
    /// Representatives whose adapted state survives in this block.
    pub representatives: Vec<u64>,
    pub matrix: DMatrix<C64>,
    /// `1 / ‖Σ_x χ_α(x)^* g(x)|ṽ⟩‖` per representative.
    pub norms: Vec<f64>,
}

impl SymmetryBlock {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

/// Sparse adapted state: `(label, amplitude)` pairs, unnormalized.
fn adapted_state(group: &GroupSpec, order: u64, alpha: u64, rep: u64) -> Result<Vec<(u64, C64)>> {
    let mut terms: Vec<(u64, C64)> = Vec::new();
    for x in 0..order {
        let u = group_apply(group, x, rep)?;
        let c = character(group, alpha, x)?.conj();
        match terms.iter_mut().find(|(l, _)| *l == u) {
            Some(t) => t.1 += c,
            None => terms.push((u, c)),
        }
    }
    Ok(terms)
}

/// Rejects `h` unless `P_x h P_x^T = h` for every generator `x = 2^i`.
pub fn check_symmetric(h: &DMatrix<C64>, instance: &ProblemInstance) -> Result<()> {
    let dim = instance.position_count() as usize;
    if h.nrows() != dim || h.ncols() != dim {
        return Err(Error::InvalidConfig(format!("matrix is {}x{}, positions need {dim}", h.nrows(), h.ncols())));
    }
    for i in 0..instance.group.index_bits() {
        let x = 1u64 << i;
        let perm: Vec<usize> = (0..dim as u64)
            .map(|v| group_apply(&instance.group, x, v).map(|u| u as usize))
            .collect::<Result<_>>()?;
        for r in 0..dim {
            for c in 0..dim {
                if (h[(perm[r], perm[c])] - h[(r, c)]).norm() > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric { generator: x });
                }
            }
        }
    }
    Ok(())
}

/// Block of `h` in representation `alpha`, over the minimal orbit labels.
pub fn build_block(h: &DMatrix<C64>, instance: &ProblemInstance, alpha: u64) -> Result<SymmetryBlock> {
    let reps = build_lookup(instance)?.representatives();
    build_block_from(h, instance, alpha, &reps)
}

/// Same as [`build_block`] with one caller-chosen label per orbit.
pub fn build_block_from(
    h: &DMatrix<C64>,
    instance: &ProblemInstance,
    alpha: u64,
    representatives: &[u64],
) -> Result<SymmetryBlock> {
    check_symmetric(h, instance)?;
    let group = &instance.group;
    let order = group
        .cyclic_order()
        .ok_or_else(|| Error::Unsupported("symmetry blocks need a cyclic group".into()))?;
    let mut reps = Vec::new();
    let mut norms = Vec::new();
    let mut states = Vec::new();
    for &r in representatives {
        let s = adapted_state(group, order, alpha, r)?;
        let norm = s.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > ZERO_NORM {
            reps.push(r);
            norms.push(1.0 / norm);
            states.push(s.into_iter().map(|(l, c)| (l as usize, c / norm)).collect::<Vec<_>>());
        }
    }
    let d = reps.len();
    let matrix = DMatrix::from_fn(d, d, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for &(a, ca) in &states[i] {
            for &(b, cb) in &states[j] {
                acc += ca.conj() * h[(a, b)] * cb;
            }
        }
        acc
    });
    Ok(SymmetryBlock { alpha, representatives: reps, matrix, norms })
}

/// Blocks for every `α` in `0..|G|`.
pub fn all_blocks(h: &DMatrix<C64>, instance: &ProblemInstance) -> Result<Vec<SymmetryBlock>> {
    let order = instance
        .group
        .cyclic_order()
        .ok_or_else(|| Error::Unsupported("symmetry blocks need a cyclic group".into()))?;
    (0..order).map(|alpha| build_block(h, instance, alpha)).collect()
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Sorted union of all block spectra.
pub fn block_spectrum(blocks: &[SymmetryBlock]) -> Vec<f64> {
    let mut ev: Vec<f64> = blocks.iter().flat_map(|b| b.eigenvalues()).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Adjacency matrix of the `n`-cycle.
pub fn cycle_adjacency(n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |i, j| {
        let d = (i + n - j) % n;
        if n > 1 && (d == 1 || d == n - 1) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Periodic spin-1/2 chain `Σ_i X_i X_{i+1} + Y_i Y_{i+1} + zz · Z_i Z_{i+1}`.
/// `zz = 0` is the XY chain, `zz = 1` the Heisenberg chain.
pub fn spin_chain(sites: usize, zz: f64) -> DMatrix<C64> {
    let dim = 1usize << sites;
    let mut h = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    let bonds = if sites == 2 { 1 } else { sites };
    for i in 0..bonds {
        let j = (i + 1) % sites;
        for s in 0..dim {
            let (bi, bj) = (s >> i & 1, s >> j & 1);
            h[(s, s)] += C64::new(if bi == bj { zz } else { -zz }, 0.0);
            if bi != bj {
                // XX + YY flips an antiparallel pair with amplitude 2
                let t = s ^ (1 << i) ^ (1 << j);
                h[(t, s)] += C64::new(2.0, 0.0);
            }
        }
    }
    h
}
