//! Sparse storage and contraction kernels for m-th order n-dimensional real
//! tensors.
//!
//! Entries are stored under a canonical key determined by the declared
//! symmetry class; contractions walk the canonical entries and weight each by
//! the number of distinct expanded positions it represents, so they agree
//! with a brute-force loop over the dense expansion.

use std::collections::BTreeMap;

use crate::cone::ConeStructure;
use crate::scalar::Real;

/// Symmetry class of a stored tensor. The class fixes the canonical key and
/// the expansion rule of each generator entry.
///
/// * `Full` — invariant under every permutation of the m indices; canonical
///   key is the sorted tuple.
/// * `Trailing` — each leading-index slice is invariant under permutations
///   of the trailing m−1 indices; canonical key is (first, sorted tail).
/// * `Pairwise` — invariant under swapping the first two indices and under
///   permutations of the last m−2; canonical key is (sorted head pair,
///   sorted tail). This is the layout of matrix-slice data `(i1 i2 | i3…im)`.
/// * `None` — no symmetry; keys are raw tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Full,
    Trailing,
    Pairwise,
    None,
}

impl Symmetry {
    pub fn keyword(self) -> &'static str {
        match self {
            Symmetry::Full => "full",
            Symmetry::Trailing => "trailing",
            Symmetry::Pairwise => "pairwise",
            Symmetry::None => "none",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "full" => Some(Symmetry::Full),
            "trailing" => Some(Symmetry::Trailing),
            "pairwise" => Some(Symmetry::Pairwise),
            "none" => Some(Symmetry::None),
            _ => Option::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TensorError {
    #[error("conflicting generator for canonical key {key:?}: {old} vs {new}")]
    ConflictingGenerator { key: Vec<usize>, old: f64, new: f64 },
    #[error("index {index} out of range 1..={dim} in tuple {tuple:?}")]
    IndexOutOfRange { index: usize, dim: usize, tuple: Vec<usize> },
    #[error("generator tuple {tuple:?} has length {got}, expected order {expected}")]
    WrongTupleLength { tuple: Vec<usize>, got: usize, expected: usize },
    #[error("dimension mismatch: tensor dim {expected}, vector length {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("empty block set")]
    EmptyBlockSet,
    #[error("block index {index} out of range 1..={blocks}")]
    BlockIndexOutOfRange { index: usize, blocks: usize },
}

/// m-th order n-dimensional real tensor with declared symmetry class.
///
/// Indices are 1-based, matching the usual component notation `t_{i1…im}`.
/// Zero entries are omitted from storage. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor<T> {
    order: usize,
    dim: usize,
    symmetry: Symmetry,
    entries: BTreeMap<Vec<usize>, T>,
}

fn canonical_key(symmetry: Symmetry, tuple: &[usize]) -> Vec<usize> {
    let mut key = tuple.to_vec();
    match symmetry {
        Symmetry::Full => key.sort_unstable(),
        Symmetry::Trailing => key[1..].sort_unstable(),
        Symmetry::Pairwise => {
            key[..2].sort_unstable();
            key[2..].sort_unstable();
        }
        Symmetry::None => {}
    }
    key
}

/// Number of distinct permutations of a sorted multiset.
fn multiset_perms(sorted: &[usize]) -> u64 {
    let mut numer = 1u64;
    for k in 1..=sorted.len() as u64 {
        numer *= k;
    }
    let mut denom = 1u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
            denom *= run;
        } else {
            run = 1;
        }
    }
    numer / denom
}

/// Remove one occurrence of `v` from a sorted multiset; `None` if absent.
fn remove_one(sorted: &[usize], v: usize) -> Option<Vec<usize>> {
    let pos = sorted.iter().position(|&x| x == v)?;
    let mut out = sorted.to_vec();
    out.remove(pos);
    Some(out)
}

impl<T: Real> SymTensor<T> {
    /// Build a tensor from generator entries, expanding each under the
    /// declared symmetry class. Two generators mapping to the same canonical
    /// key must agree in value.
    pub fn build<I>(
        order: usize,
        dim: usize,
        symmetry: Symmetry,
        generators: I,
    ) -> Result<Self, TensorError>
    where
        I: IntoIterator<Item = (Vec<usize>, T)>,
    {
        if order < 2 {
            return Err(TensorError::OrderTooSmall(order));
        }
        if dim == 0 {
            return Err(TensorError::ZeroDimension);
        }
        let mut entries: BTreeMap<Vec<usize>, T> = BTreeMap::new();
        for (tuple, value) in generators {
            if tuple.len() != order {
                return Err(TensorError::WrongTupleLength {
                    got: tuple.len(),
                    expected: order,
                    tuple,
                });
            }
            if let Some(&bad) = tuple.iter().find(|&&i| i == 0 || i > dim) {
                return Err(TensorError::IndexOutOfRange { index: bad, dim, tuple });
            }
            let key = canonical_key(symmetry, &tuple);
            if let Some(&old) = entries.get(&key) {
                if old != value {
                    return Err(TensorError::ConflictingGenerator {
                        key,
                        old: old.to_f64().unwrap_or(f64::NAN),
                        new: value.to_f64().unwrap_or(f64::NAN),
                    });
                }
            } else {
                entries.insert(key, value);
            }
        }
        entries.retain(|_, v| *v != T::zero());
        Ok(SymTensor { order, dim, symmetry, entries })
    }

    /// The zero tensor.
    pub fn zero(order: usize, dim: usize, symmetry: Symmetry) -> Self {
        SymTensor { order, dim, symmetry, entries: BTreeMap::new() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    /// Canonical stored entries, in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], T)> {
        self.entries.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Expanded component `t_{i1…im}` (1-based indices).
    pub fn expanded(&self, tuple: &[usize]) -> T {
        debug_assert_eq!(tuple.len(), self.order);
        let key = canonical_key(self.symmetry, tuple);
        self.entries.get(&key).copied().unwrap_or_else(T::zero)
    }

    fn check_len(&self, x: &[T]) -> Result<(), TensorError> {
        if x.len() != self.dim {
            Err(TensorError::DimensionMismatch { expected: self.dim, got: x.len() })
        } else {
            Ok(())
        }
    }

    /// `T x^m`: the homogeneous form value.
    pub fn contract_full(&self, x: &[T]) -> Result<T, TensorError> {
        self.check_len(x)?;
        let mut acc = T::zero();
        for (key, &v) in &self.entries {
            let mono = key.iter().map(|&i| x[i - 1]).fold(T::one(), |p, xi| p * xi);
            let count = match self.symmetry {
                Symmetry::Full => multiset_perms(key),
                Symmetry::Trailing => multiset_perms(&key[1..]),
                Symmetry::Pairwise => {
                    let head = if key[0] == key[1] { 1 } else { 2 };
                    head * multiset_perms(&key[2..])
                }
                Symmetry::None => 1,
            };
            acc = acc + v * T::from_count(count as usize) * mono;
        }
        Ok(acc)
    }

    /// `T x^{m-1}`: vector with `v_i = Σ t_{i i2…im} x_{i2}…x_{im}`.
    pub fn contract_once(&self, x: &[T]) -> Result<Vec<T>, TensorError> {
        self.check_len(x)?;
        let mut out = vec![T::zero(); self.dim];
        let prod = |idx: &[usize]| idx.iter().map(|&i| x[i - 1]).fold(T::one(), |p, v| p * v);
        for (key, &v) in &self.entries {
            match self.symmetry {
                Symmetry::None => {
                    out[key[0] - 1] = out[key[0] - 1] + v * prod(&key[1..]);
                }
                Symmetry::Trailing => {
                    let w = T::from_count(multiset_perms(&key[1..]) as usize);
                    out[key[0] - 1] = out[key[0] - 1] + v * w * prod(&key[1..]);
                }
                Symmetry::Pairwise => {
                    let tail_w = T::from_count(multiset_perms(&key[2..]) as usize);
                    let tail_prod = prod(&key[2..]);
                    let (h1, h2) = (key[0], key[1]);
                    out[h1 - 1] = out[h1 - 1] + v * tail_w * x[h2 - 1] * tail_prod;
                    if h1 != h2 {
                        out[h2 - 1] = out[h2 - 1] + v * tail_w * x[h1 - 1] * tail_prod;
                    }
                }
                Symmetry::Full => {
                    // one term per distinct leading value in the multiset;
                    // canonical keys are sorted, so duplicates are adjacent
                    let mut prev = usize::MAX;
                    for &i in key.iter() {
                        if i == prev {
                            continue;
                        }
                        prev = i;
                        let rest = remove_one(key, i).expect("member of its own multiset");
                        let w = T::from_count(multiset_perms(&rest) as usize);
                        out[i - 1] = out[i - 1] + v * w * prod(&rest);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `T x^{m-2}`: n×n matrix with `M_ij = Σ t_{i j i3…im} x_{i3}…x_{im}`,
    /// returned row-major.
    pub fn contract_twice(&self, x: &[T]) -> Result<Vec<Vec<T>>, TensorError> {
        self.check_len(x)?;
        let n = self.dim;
        let mut out = vec![vec![T::zero(); n]; n];
        let prod = |idx: &[usize]| idx.iter().map(|&i| x[i - 1]).fold(T::one(), |p, v| p * v);
        for (key, &v) in &self.entries {
            match self.symmetry {
                Symmetry::None => {
                    out[key[0] - 1][key[1] - 1] =
                        out[key[0] - 1][key[1] - 1] + v * prod(&key[2..]);
                }
                Symmetry::Pairwise => {
                    let w = T::from_count(multiset_perms(&key[2..]) as usize);
                    let t = v * w * prod(&key[2..]);
                    let (h1, h2) = (key[0], key[1]);
                    out[h1 - 1][h2 - 1] = out[h1 - 1][h2 - 1] + t;
                    if h1 != h2 {
                        out[h2 - 1][h1 - 1] = out[h2 - 1][h1 - 1] + t;
                    }
                }
                Symmetry::Trailing => {
                    let i = key[0];
                    let tail = &key[1..];
                    let mut prev = usize::MAX;
                    for pos in 0..tail.len() {
                        let j = tail[pos];
                        if j == prev {
                            continue;
                        }
                        prev = j;
                        let rest = remove_one(tail, j).expect("member");
                        let w = T::from_count(multiset_perms(&rest) as usize);
                        out[i - 1][j - 1] = out[i - 1][j - 1] + v * w * prod(&rest);
                    }
                }
                Symmetry::Full => {
                    let mut prev_i = usize::MAX;
                    for pos_i in 0..key.len() {
                        let i = key[pos_i];
                        if i == prev_i {
                            continue;
                        }
                        prev_i = i;
                        let rest_i = remove_one(key, i).expect("member");
                        let mut prev_j = usize::MAX;
                        for pos_j in 0..rest_i.len() {
                            let j = rest_i[pos_j];
                            if j == prev_j {
                                continue;
                            }
                            prev_j = j;
                            let rest = remove_one(&rest_i, j).expect("member");
                            let w = T::from_count(multiset_perms(&rest) as usize);
                            out[i - 1][j - 1] = out[i - 1][j - 1] + v * w * prod(&rest);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Principal sub-tensor: keep exactly the components whose indices all
    /// fall in the blocks of `keep` (1-based block indices), reindexed
    /// consecutively.
    pub fn principal_subtensor(
        &self,
        structure: &ConeStructure,
        keep: &[usize],
    ) -> Result<SymTensor<T>, TensorError> {
        if keep.is_empty() {
            return Err(TensorError::EmptyBlockSet);
        }
        let r = structure.num_blocks();
        if let Some(&bad) = keep.iter().find(|&&b| b == 0 || b > r) {
            return Err(TensorError::BlockIndexOutOfRange { index: bad, blocks: r });
        }
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        // old 1-based coordinate -> new 1-based coordinate
        let mut remap = vec![0usize; structure.total() + 1];
        let mut next = 1usize;
        for &b in &keep_sorted {
            let range = structure.block_range(b - 1);
            for old in range {
                remap[old + 1] = next;
                next += 1;
            }
        }
        let new_dim = next - 1;
        let mut entries = BTreeMap::new();
        'outer: for (key, &v) in &self.entries {
            let mut new_key = Vec::with_capacity(self.order);
            for &i in key {
                let m = remap[i];
                if m == 0 {
                    continue 'outer;
                }
                new_key.push(m);
            }
            // monotone remap keeps canonical ordering intact
            entries.insert(new_key, v);
        }
        Ok(SymTensor { order: self.order, dim: new_dim, symmetry: self.symmetry, entries })
    }

    /// True iff every slice `t_{i ·…·}` is symmetric in its trailing m−1
    /// indices when expanded.
    pub fn is_subsymmetric(&self) -> bool {
        match self.symmetry {
            Symmetry::Full | Symmetry::Trailing => true,
            Symmetry::Pairwise | Symmetry::None => {
                // compare every expanded component with its trailing-sorted
                // representative
                let m = self.order;
                let n = self.dim;
                let mut idx = vec![1usize; m];
                loop {
                    let mut canon = idx.clone();
                    canon[1..].sort_unstable();
                    if self.expanded(&idx) != self.expanded(&canon) {
                        return false;
                    }
                    // advance odometer
                    let mut k = m;
                    loop {
                        if k == 0 {
                            return true;
                        }
                        k -= 1;
                        if idx[k] < n {
                            idx[k] += 1;
                            for slot in idx.iter_mut().skip(k + 1) {
                                *slot = 1;
                            }
                            break;
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t4<T: Real>(dim: usize, sym: Symmetry, gens: &[([usize; 4], f64)]) -> SymTensor<T> {
        SymTensor::build(4, dim, sym, gens.iter().map(|&(i, v)| (i.to_vec(), T::c(v))))
            .unwrap()
    }

    /// Brute-force oracle: contraction sums over the full dense expansion.
    fn dense_full(t: &SymTensor<f64>, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        let mut idx = vec![1usize; t.order()];
        loop {
            let mono: f64 = idx.iter().map(|&i| x[i - 1]).product();
            acc += t.expanded(&idx) * mono;
            if !advance(&mut idx, t.dim()) {
                return acc;
            }
        }
    }

    fn dense_once(t: &SymTensor<f64>, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; t.dim()];
        let mut idx = vec![1usize; t.order()];
        loop {
            let mono: f64 = idx[1..].iter().map(|&i| x[i - 1]).product();
            out[idx[0] - 1] += t.expanded(&idx) * mono;
            if !advance(&mut idx, t.dim()) {
                return out;
            }
        }
    }

    fn dense_twice(t: &SymTensor<f64>, x: &[f64]) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; t.dim()]; t.dim()];
        let mut idx = vec![1usize; t.order()];
        loop {
            let mono: f64 = idx[2..].iter().map(|&i| x[i - 1]).product();
            out[idx[0] - 1][idx[1] - 1] += t.expanded(&idx) * mono;
            if !advance(&mut idx, t.dim()) {
                return out;
            }
        }
    }

    fn advance(idx: &mut [usize], n: usize) -> bool {
        for k in (0..idx.len()).rev() {
            if idx[k] < n {
                idx[k] += 1;
                for slot in idx.iter_mut().skip(k + 1) {
                    *slot = 1;
                }
                return true;
            }
        }
        false
    }

    #[test]
    fn full_generator_expands_to_all_permutations() {
        let t: SymTensor<f64> = t4(2, Symmetry::Full, &[([1, 1, 2, 2], 3.0)]);
        let mut nonzero = 0;
        let mut idx = vec![1usize; 4];
        loop {
            let v = t.expanded(&idx);
            if v != 0.0 {
                assert_eq!(v, 3.0);
                nonzero += 1;
            }
            if !advance(&mut idx, 2) {
                break;
            }
        }
        assert_eq!(nonzero, 6);
    }

    #[test]
    fn conflicting_generators_rejected() {
        let r = SymTensor::<f64>::build(
            4,
            4,
            Symmetry::Full,
            vec![(vec![1, 1, 1, 1], 2.0), (vec![1, 1, 1, 1], 3.0)],
        );
        assert!(matches!(r, Err(TensorError::ConflictingGenerator { .. })));
        // same multiset via another permutation conflicts too
        let r = SymTensor::<f64>::build(
            4,
            4,
            Symmetry::Full,
            vec![(vec![2, 2, 1, 1], 3.0), (vec![1, 1, 2, 2], 2.0)],
        );
        assert!(matches!(r, Err(TensorError::ConflictingGenerator { .. })));
        // equal duplicate is fine
        let r = SymTensor::<f64>::build(
            4,
            4,
            Symmetry::Full,
            vec![(vec![1, 1, 1, 1], 2.0), (vec![1, 1, 1, 1], 2.0)],
        );
        assert!(r.is_ok());
    }

    #[test]
    fn index_out_of_range_rejected() {
        let r = SymTensor::<f64>::build(4, 2, Symmetry::Full, vec![(vec![1, 1, 3, 1], 1.0)]);
        assert!(matches!(r, Err(TensorError::IndexOutOfRange { index: 3, .. })));
    }

    #[test]
    fn contract_full_small_cases() {
        let t: SymTensor<f64> = t4(2, Symmetry::Full, &[([1, 1, 2, 2], 3.0)]);
        assert!((t.contract_full(&[1.0, 1.0]).unwrap() - 18.0).abs() < 1e-12);

        let diag: SymTensor<f64> =
            t4(2, Symmetry::Full, &[([1, 1, 1, 1], 1.0), ([2, 2, 2, 2], 1.0)]);
        assert!((diag.contract_full(&[1.0, 1.0]).unwrap() - 2.0).abs() < 1e-12);

        let zero = SymTensor::<f64>::zero(4, 2, Symmetry::Full);
        assert_eq!(zero.contract_full(&[0.3, -0.7]).unwrap(), 0.0);
    }

    #[test]
    fn contract_once_small_cases() {
        let t: SymTensor<f64> = t4(2, Symmetry::Full, &[([1, 1, 2, 2], 3.0)]);
        let v = t.contract_once(&[1.0, 1.0]).unwrap();
        assert!((v[0] - 9.0).abs() < 1e-12);
        assert!((v[1] - 9.0).abs() < 1e-12);

        let diag: SymTensor<f64> =
            t4(2, Symmetry::Full, &[([1, 1, 1, 1], 1.0), ([2, 2, 2, 2], 1.0)]);
        let v = diag.contract_once(&[1.0, 0.0]).unwrap();
        assert_eq!(v, vec![1.0, 0.0]);
    }

    #[test]
    fn contract_twice_small_cases() {
        let t: SymTensor<f64> = t4(2, Symmetry::Full, &[([1, 1, 2, 2], 3.0)]);
        let m = t.contract_twice(&[1.0, 1.0]).unwrap();
        assert_eq!(m[0], vec![3.0, 6.0]);
        assert_eq!(m[1], vec![6.0, 3.0]);

        let zero = SymTensor::<f64>::zero(4, 2, Symmetry::Full);
        let m = zero.contract_twice(&[1.0, 2.0]).unwrap();
        assert_eq!(m, vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let t: SymTensor<f64> = t4(2, Symmetry::Full, &[([1, 1, 2, 2], 3.0)]);
        assert!(matches!(
            t.contract_full(&[1.0, 1.0, 1.0]),
            Err(TensorError::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn contractions_match_dense_oracle_all_classes() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for sym in [Symmetry::Full, Symmetry::Trailing, Symmetry::Pairwise, Symmetry::None] {
            for _ in 0..12 {
                let n = rng.gen_range(2..=4);
                let num = rng.gen_range(1..=8);
                let gens: Vec<(Vec<usize>, f64)> = (0..num)
                    .map(|_| {
                        let idx: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=n)).collect();
                        (idx, (rng.gen_range(-20..=20) as f64) / 4.0)
                    })
                    .collect();
                // drop colliding generators instead of fighting the conflict rule
                let mut seen = std::collections::BTreeSet::new();
                let gens: Vec<_> = gens
                    .into_iter()
                    .filter(|(idx, _)| seen.insert(canonical_key(sym, idx)))
                    .collect();
                let t = SymTensor::<f64>::build(4, n, sym, gens).unwrap();
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();

                let full = t.contract_full(&x).unwrap();
                let dfull = dense_full(&t, &x);
                assert!((full - dfull).abs() <= 1e-12 * (1.0 + dfull.abs()), "{sym:?}");

                let once = t.contract_once(&x).unwrap();
                let donce = dense_once(&t, &x);
                for (a, b) in once.iter().zip(&donce) {
                    assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{sym:?}");
                }

                let twice = t.contract_twice(&x).unwrap();
                let dtwice = dense_twice(&t, &x);
                for (ra, rb) in twice.iter().zip(&dtwice) {
                    for (a, b) in ra.iter().zip(rb) {
                        assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{sym:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn principal_subtensor_block_filtering() {
        let diag: SymTensor<f64> =
            t4(2, Symmetry::Full, &[([1, 1, 1, 1], 1.0), ([2, 2, 2, 2], 5.0)]);
        let st = ConeStructure::new(vec![1, 1]).unwrap();
        let sub = diag.principal_subtensor(&st, &[2]).unwrap();
        assert_eq!(sub.dim(), 1);
        assert_eq!(sub.expanded(&[1, 1, 1, 1]), 5.0);

        let whole = diag.principal_subtensor(&st, &[1, 2]).unwrap();
        assert_eq!(whole, diag);

        assert!(matches!(
            diag.principal_subtensor(&st, &[]),
            Err(TensorError::EmptyBlockSet)
        ));
        assert!(matches!(
            diag.principal_subtensor(&st, &[3]),
            Err(TensorError::BlockIndexOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn principal_subtensor_contraction_consistency() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let st = ConeStructure::new(vec![2, 2]).unwrap();
        for _ in 0..20 {
            let gens: Vec<(Vec<usize>, f64)> = (0..6)
                .map(|_| {
                    let idx: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=4)).collect();
                    (idx, rng.gen_range(-2.0..2.0))
                })
                .collect();
            let mut seen = std::collections::BTreeSet::new();
            let gens: Vec<_> = gens
                .into_iter()
                .filter(|(idx, _)| seen.insert(canonical_key(Symmetry::Full, idx)))
                .collect();
            let t = SymTensor::<f64>::build(4, 4, Symmetry::Full, gens).unwrap();
            let sub = t.principal_subtensor(&st, &[2]).unwrap();
            let x_j = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let padded = [0.0, 0.0, x_j[0], x_j[1]];
            let a = sub.contract_full(&x_j).unwrap();
            let b = t.contract_full(&padded).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn euler_identities_full_symmetry() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let n = rng.gen_range(2..=4);
            let gens: Vec<(Vec<usize>, f64)> = (0..8)
                .map(|_| {
                    let mut idx: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=n)).collect();
                    idx.sort_unstable();
                    (idx, rng.gen_range(-2.0..2.0))
                })
                .collect();
            let mut seen = std::collections::BTreeSet::new();
            let gens: Vec<_> =
                gens.into_iter().filter(|(idx, _)| seen.insert(idx.clone())).collect();
            let t = SymTensor::<f64>::build(4, n, Symmetry::Full, gens).unwrap();
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let full = t.contract_full(&x).unwrap();
            let once = t.contract_once(&x).unwrap();
            let x_dot_once: f64 = x.iter().zip(&once).map(|(a, b)| a * b).sum();
            assert!((x_dot_once - full).abs() <= 1e-10 * (1.0 + full.abs()));
            let twice = t.contract_twice(&x).unwrap();
            let mut quad = 0.0;
            for i in 0..n {
                for j in 0..n {
                    quad += x[i] * twice[i][j] * x[j];
                }
            }
            assert!((quad - full).abs() <= 1e-10 * (1.0 + full.abs()));
        }
    }

    #[test]
    fn contraction_homogeneity() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(75);
        let t: SymTensor<f64> = t4(3, Symmetry::Full, &[([1, 1, 2, 3], 1.5), ([2, 2, 3, 3], -0.7)]);
        for _ in 0..50 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let base = t.contract_full(&x).unwrap();
            for tau in [0.5f64, 2.0] {
                let xs: Vec<f64> = x.iter().map(|v| v * tau).collect();
                let scaled = t.contract_full(&xs).unwrap();
                assert!((scaled - tau.powi(4) * base).abs() <= 1e-12 * (1.0 + base.abs()));
            }
        }
    }

    #[test]
    fn subsymmetry_classes() {
        let full: SymTensor<f64> = t4(2, Symmetry::Full, &[([1, 1, 2, 2], 3.0)]);
        assert!(full.is_subsymmetric());

        let trailing: SymTensor<f64> = t4(2, Symmetry::Trailing, &[([2, 1, 1, 2], 1.5)]);
        assert!(trailing.is_subsymmetric());

        let raw: SymTensor<f64> = t4(2, Symmetry::None, &[([1, 1, 1, 2], 1.0)]);
        assert!(!raw.is_subsymmetric()); // t_{1121} = 0 != 1

        // a raw tensor whose slices happen to be symmetric
        let nice: SymTensor<f64> = SymTensor::build(
            3,
            2,
            Symmetry::None,
            vec![
                (vec![1, 1, 2], 1.0),
                (vec![1, 2, 1], 1.0),
                (vec![2, 2, 1], 4.0),
                (vec![2, 1, 2], 4.0),
            ],
        )
        .unwrap();
        assert!(nice.is_subsymmetric());
    }
}
