//! Second-order cone algebra: spectral factorization, projection, Jordan
//! product and membership, for single blocks and for products of cones.
//!
//! A block `z = (z◦, z•) ∈ ℝ × ℝ^{l-1}` lies in the cone `K^l` iff
//! `z◦ ≥ ‖z•‖`. Blocks of size 1 are supported and behave as the
//! nonnegative half-line.

use crate::linalg::norm2;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConeError {
    #[error("vector length {got} does not match cone total {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("jordan product needs equal lengths, got {0} and {1}")]
    JordanLengthMismatch(usize, usize),
    #[error("cone blocks must be positive, got {0:?}")]
    BadBlocks(Vec<usize>),
}

/// The partition (n₁,…,n_r) defining `K = K^{n₁} × … × K^{n_r}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeStructure {
    blocks: Vec<usize>,
}

impl ConeStructure {
    pub fn new(blocks: Vec<usize>) -> Result<Self, ConeError> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(ConeError::BadBlocks(blocks));
        }
        Ok(ConeStructure { blocks })
    }

    pub fn single(l: usize) -> Self {
        ConeStructure::new(vec![l]).expect("positive block")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// 0-based coordinate range of block `b` (0-based).
    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        let start: usize = self.blocks[..b].iter().sum();
        start..start + self.blocks[b]
    }

    /// The basis vector e: per block (1, 0, …, 0), concatenated.
    pub fn basis_vector<T: Real>(&self) -> Vec<T> {
        let mut e = vec![T::zero(); self.total()];
        for b in 0..self.num_blocks() {
            e[self.block_range(b).start] = T::one();
        }
        e
    }

    /// Restriction of the structure to the given 1-based block indices
    /// (sorted, deduplicated).
    pub fn restrict(&self, keep: &[usize]) -> Result<ConeStructure, ConeError> {
        let mut ks = keep.to_vec();
        ks.sort_unstable();
        ks.dedup();
        let blocks: Vec<usize> = ks
            .iter()
            .filter(|&&b| b >= 1 && b <= self.num_blocks())
            .map(|&b| self.blocks[b - 1])
            .collect();
        ConeStructure::new(blocks)
    }
}

/// A vector of ℝⁿ viewed through a cone structure's blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector<T> {
    structure: ConeStructure,
    values: Vec<T>,
}

impl<T: Real> BlockVector<T> {
    pub fn new(structure: ConeStructure, values: Vec<T>) -> Result<Self, ConeError> {
        if values.len() != structure.total() {
            return Err(ConeError::LengthMismatch {
                expected: structure.total(),
                got: values.len(),
            });
        }
        Ok(BlockVector { structure, values })
    }

    pub fn structure(&self) -> &ConeStructure {
        &self.structure
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn block(&self, b: usize) -> &[T] {
        &self.values[self.structure.block_range(b)]
    }

    /// Head component `x◦` of block `b`.
    pub fn head(&self, b: usize) -> T {
        self.values[self.structure.block_range(b).start]
    }

    /// Tail slice `x•` of block `b` (may be empty for 1-blocks).
    pub fn tail(&self, b: usize) -> &[T] {
        let r = self.structure.block_range(b);
        &self.values[r.start + 1..r.end]
    }
}

/// Spectral factorization `z = ζ₁u₁ + ζ₂u₂` of a single cone block.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomp<T> {
    pub zeta1: T,
    pub zeta2: T,
    pub u1: Vec<T>,
    pub u2: Vec<T>,
}

/// Spectral values `ζᵢ = z◦ + (−1)ⁱ‖z•‖` and vectors
/// `uᵢ = ½(1, (−1)ⁱ z•/‖z•‖)`; when `z• = 0` the free unit direction is
/// fixed to the first canonical basis vector for determinism. For l = 1 the
/// degenerate form is `ζ₁ = ζ₂ = z◦`, `u₁ = u₂ = ½`.
pub fn spectral_decompose<T: Real>(z: &[T]) -> SpectralDecomp<T> {
    let l = z.len();
    debug_assert!(l >= 1);
    let half = T::c(0.5);
    if l == 1 {
        return SpectralDecomp { zeta1: z[0], zeta2: z[0], u1: vec![half], u2: vec![half] };
    }
    let tail_norm = norm2(&z[1..]);
    let zeta1 = z[0] - tail_norm;
    let zeta2 = z[0] + tail_norm;
    let mut u1 = vec![T::zero(); l];
    let mut u2 = vec![T::zero(); l];
    u1[0] = half;
    u2[0] = half;
    if tail_norm > T::zero() {
        for i in 1..l {
            u1[i] = -half * z[i] / tail_norm;
            u2[i] = half * z[i] / tail_norm;
        }
    } else {
        u1[1] = -half;
        u2[1] = half;
    }
    SpectralDecomp { zeta1, zeta2, u1, u2 }
}

/// Projection onto a single second-order cone `K^l`:
/// `max{0,ζ₁}u₁ + max{0,ζ₂}u₂`.
pub fn project_soc<T: Real>(z: &[T]) -> Vec<T> {
    let d = spectral_decompose(z);
    let a = d.zeta1.max(T::zero());
    let b = d.zeta2.max(T::zero());
    d.u1.iter().zip(&d.u2).map(|(&u, &v)| a * u + b * v).collect()
}

/// Blockwise projection onto the product cone; the slice variant backs the
/// solver loops.
pub fn project_cone_slice<T: Real>(structure: &ConeStructure, x: &[T]) -> Vec<T> {
    debug_assert_eq!(x.len(), structure.total());
    let mut out = Vec::with_capacity(x.len());
    for b in 0..structure.num_blocks() {
        out.extend(project_soc(&x[structure.block_range(b)]));
    }
    out
}

/// Blockwise projection onto the product cone.
pub fn project_cone<T: Real>(x: &BlockVector<T>) -> BlockVector<T> {
    let values = project_cone_slice(x.structure(), x.values());
    BlockVector::new(x.structure().clone(), values).expect("projection preserves length")
}

/// Jordan product `z ∘ w = (⟨z,w⟩, w◦ z• + z◦ w•)`.
pub fn jordan_product<T: Real>(z: &[T], w: &[T]) -> Result<Vec<T>, ConeError> {
    if z.len() != w.len() {
        return Err(ConeError::JordanLengthMismatch(z.len(), w.len()));
    }
    let mut out = vec![T::zero(); z.len()];
    out[0] = crate::linalg::dot(z, w);
    for i in 1..z.len() {
        out[i] = w[0] * z[i] + z[0] * w[i];
    }
    Ok(out)
}

/// Per-block membership margins `x◦ − ‖x•‖`; `x ∈ K` iff all are ≥ 0.
pub fn membership_margins<T: Real>(x: &BlockVector<T>) -> Vec<T> {
    membership_margins_slice(x.structure(), x.values())
}

pub fn membership_margins_slice<T: Real>(structure: &ConeStructure, x: &[T]) -> Vec<T> {
    debug_assert_eq!(x.len(), structure.total());
    (0..structure.num_blocks())
        .map(|b| {
            let r = structure.block_range(b);
            x[r.start] - norm2(&x[r.start + 1..r.end])
        })
        .collect()
}
