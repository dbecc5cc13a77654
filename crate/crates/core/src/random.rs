//! Seeded generators for posets, complexes and strict diagrams.
//!
//! Every generator draws from a caller-supplied RNG, so a base seed fixes
//! the whole run. Parallel samplers derive one seed per sample with
//! [`sample_seed`].

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{ChainComplex, ChainMap};
use crate::diagram::StratDiagram;
use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::poset::{FinPoset, MonotoneMap};

pub type SampleRng = ChaCha8Rng;

/// Parameters for random complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    /// Upper bound on the dimension in each degree.
    pub max_dim: usize,
    /// Lowest degree that may be nonzero.
    pub lo: i32,
    /// Highest degree that may be nonzero.
    pub hi: i32,
    /// Random coefficients are drawn from `-coeff..=coeff`.
    pub coeff: i64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_dim: 3,
            lo: -2,
            hi: 2,
            coeff: 2,
        }
    }
}

impl GenConfig {
    /// A smaller window for callers that build large derived complexes.
    pub fn small() -> Self {
        GenConfig {
            max_dim: 2,
            lo: -1,
            hi: 1,
            coeff: 2,
        }
    }
}

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 mix of a base seed and a sample index.
pub fn sample_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn coeff<R: Rng>(rng: &mut R, c: i64) -> i64 {
    rng.random_range(-c..=c)
}

/// A random unimodular integer matrix and its inverse.
fn unimodular<S: Scalar, R: Rng>(rng: &mut R, n: usize, c: i64) -> (Matrix<S>, Matrix<S>) {
    let mut g = Matrix::<S>::identity(n);
    let mut ginv = Matrix::<S>::identity(n);
    if n == 0 {
        return (g, ginv);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut p = Matrix::<S>::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p[(i, j)] = S::one();
    }
    g = p.mul(&g);
    ginv = ginv.mul(&p.transpose());
    if n > 1 {
        for _ in 0..2 * n {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let a = coeff(rng, c.min(1));
            if a == 0 {
                continue;
            }
            let mut e = Matrix::<S>::identity(n);
            e[(i, j)] = S::from_i64(a);
            let mut einv = Matrix::<S>::identity(n);
            einv[(i, j)] = S::from_i64(-a);
            g = e.mul(&g);
            ginv = ginv.mul(&einv);
        }
    }
    (g, ginv)
}

/// A random bounded complex. It is built as a sum of shifted copies of the
/// field and of contractible two-term pieces, then conjugated by random
/// unimodular changes of basis, so all entries stay integral.
pub fn random_complex<S: Scalar, R: Rng>(rng: &mut R, cfg: &GenConfig) -> ChainComplex<S> {
    if cfg.hi < cfg.lo || cfg.max_dim == 0 {
        return ChainComplex::zero();
    }
    let len = (cfg.hi - cfg.lo + 1) as usize;
    // b[k]: rank of the differential leaving degree lo + k
    let mut b = vec![0usize; len + 1];
    let mut h = vec![0usize; len];
    for k in (0..len).rev() {
        let room = cfg.max_dim - b[k + 1];
        if k > 0 {
            b[k] = rng.random_range(0..=room.min(cfg.max_dim));
        }
        let left = room - b[k];
        h[k] = rng.random_range(0..=left);
    }
    let dims: Vec<usize> = (0..len).map(|k| b[k + 1] + h[k] + b[k]).collect();
    let changes: Vec<(Matrix<S>, Matrix<S>)> = dims
        .iter()
        .map(|&d| unimodular::<S, R>(rng, d, cfg.coeff))
        .collect();
    let mut diffs = Vec::with_capacity(len.saturating_sub(1));
    for k in 1..len {
        // basis of degree lo+k: [image of d_{k+1} | homology | sources]
        let mut d = Matrix::<S>::zeros(dims[k - 1], dims[k]);
        let src0 = b[k + 1] + h[k];
        for t in 0..b[k] {
            d[(t, src0 + t)] = S::one();
        }
        let conj = changes[k - 1].0.mul(&d).mul(&changes[k].1);
        diffs.push(conj);
    }
    ChainComplex::new(cfg.lo, dims, diffs).expect("generator builds valid complexes")
}

/// Random poset on `n` elements: each pair `i < j` is related with
/// probability `p` before transitive closure.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, p: f64) -> FinPoset {
    let mut rel = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if rng.random_bool(p) {
                rel.push((i, j));
            }
        }
    }
    FinPoset::from_indices(n, &rel).expect("relations along a total order are acyclic")
}

/// A random stratification of `shape`: the identity, the map to a point,
/// or the height function onto a chain.
pub fn random_strat<R: Rng>(rng: &mut R, shape: Arc<FinPoset>) -> MonotoneMap {
    match rng.random_range(0..3) {
        0 => MonotoneMap::identity(shape),
        1 => MonotoneMap::to_point(shape),
        _ => height_strat(shape),
    }
}

/// Height of each element (length of the longest chain below it) as a
/// strictly monotone map onto a chain.
pub fn height_strat(shape: Arc<FinPoset>) -> MonotoneMap {
    let order = shape.linear_extension();
    let mut height = vec![0usize; shape.len()];
    for &y in &order {
        height[y] = shape
            .lower_covers(y)
            .into_iter()
            .map(|c| height[c] + 1)
            .max()
            .unwrap_or(0);
    }
    let top = height.iter().copied().max().map_or(0, |h| h + 1);
    MonotoneMap::new(shape, Arc::new(FinPoset::chain(top)), height)
        .expect("height is monotone")
}

/// A random strict diagram on `strat.source()`. Elements are filled in
/// linear-extension order; maps out of the lower covers of a new element
/// are drawn from the space of cocones over everything already built.
pub fn random_diagram<S: Scalar, R: Rng>(
    rng: &mut R,
    strat: &MonotoneMap,
    cfg: &GenConfig,
) -> StratDiagram<S> {
    let shape = strat.source().clone();
    let n = shape.len();
    let mut values: Vec<ChainComplex<S>> = vec![ChainComplex::zero(); n];
    // dense maps among already built elements, parent indices
    let mut maps: BTreeMap<(usize, usize), ChainMap<S>> = BTreeMap::new();
    for &y in &shape.linear_extension() {
        values[y] = random_complex(rng, cfg);
        maps.insert((y, y), ChainMap::identity(&values[y]));
        let covers = shape.lower_covers(y);
        if covers.is_empty() {
            continue;
        }
        let cocone = random_cocone(rng, &shape, &values, &maps, y, &covers, cfg.coeff);
        for (&c, m) in covers.iter().zip(cocone) {
            maps.insert((c, y), m);
        }
        for x in 0..n {
            if shape.lt(x, y) && !covers.contains(&x) {
                let c = *covers
                    .iter()
                    .find(|&&c| shape.leq(x, c))
                    .expect("a cover lies above x");
                let m = maps[&(c, y)].compose(&maps[&(x, c)]);
                maps.insert((x, y), m);
            }
        }
    }
    let d = StratDiagram::new(strat.clone(), values, maps).expect("shapes are consistent");
    debug_assert!(d.validate().valid, "generator built an invalid diagram");
    d
}

struct Unknowns {
    /// (cover slot, degree) -> (offset, rows, cols)
    blocks: BTreeMap<(usize, i32), (usize, usize, usize)>,
    total: usize,
}

impl Unknowns {
    fn col(&self, slot: usize, deg: i32, r: usize, c: usize) -> Option<usize> {
        self.blocks
            .get(&(slot, deg))
            .map(|&(off, _, cols)| off + r * cols + c)
    }
}

fn random_cocone<S: Scalar, R: Rng>(
    rng: &mut R,
    shape: &FinPoset,
    values: &[ChainComplex<S>],
    maps: &BTreeMap<(usize, usize), ChainMap<S>>,
    y: usize,
    covers: &[usize],
    c: i64,
) -> Vec<ChainMap<S>> {
    let fy = &values[y];
    let mut lo = fy.lo();
    let mut hi = fy.hi();
    for &cv in covers {
        lo = lo.min(values[cv].lo());
        hi = hi.max(values[cv].hi());
    }
    let mut blocks = BTreeMap::new();
    let mut total = 0;
    for (slot, &cv) in covers.iter().enumerate() {
        for n in lo..=hi {
            let (r, k) = (fy.dim(n), values[cv].dim(n));
            if r > 0 && k > 0 {
                blocks.insert((slot, n), (total, r, k));
                total += r * k;
            }
        }
    }
    let unk = Unknowns { blocks, total };
    if unk.total == 0 {
        return vec![ChainMap::zero(); covers.len()];
    }
    let mut rows: Vec<Vec<S>> = Vec::new();
    // chain-map conditions: d_y M_n - M_{n-1} d_c = 0
    for (slot, &cv) in covers.iter().enumerate() {
        let fc = &values[cv];
        for n in lo..=hi + 1 {
            let (tr, tc) = (fy.dim(n - 1), fc.dim(n));
            for r in 0..tr {
                for s in 0..tc {
                    let mut row = vec![S::zero(); unk.total];
                    let mut any = false;
                    if let Some(dy) = fy.d(n) {
                        for t in 0..fy.dim(n) {
                            if let Some(col) = unk.col(slot, n, t, s) {
                                if !dy[(r, t)].is_zero() {
                                    row[col] = row[col].add(&dy[(r, t)]);
                                    any = true;
                                }
                            }
                        }
                    }
                    if let Some(dc) = fc.d(n) {
                        for t in 0..fc.dim(n - 1) {
                            if let Some(col) = unk.col(slot, n - 1, r, t) {
                                if !dc[(t, s)].is_zero() {
                                    row[col] = row[col].sub(&dc[(t, s)]);
                                    any = true;
                                }
                            }
                        }
                    }
                    if any {
                        rows.push(row);
                    }
                }
            }
        }
    }
    // compatibility: M_i F(x <= c_i) = M_a F(x <= c_a) for x below two covers
    for x in 0..shape.len() {
        if !shape.lt(x, y) {
            continue;
        }
        let above: Vec<usize> = (0..covers.len())
            .filter(|&s| shape.leq(x, covers[s]))
            .collect();
        let Some((&a, rest)) = above.split_first() else {
            continue;
        };
        let fx = &values[x];
        for &i in rest {
            let gi = &maps[&(x, covers[i])];
            let ga = &maps[&(x, covers[a])];
            for n in fx.degrees() {
                let (tr, tc) = (fy.dim(n), fx.dim(n));
                for r in 0..tr {
                    for s in 0..tc {
                        let mut row = vec![S::zero(); unk.total];
                        let mut any = false;
                        for (slot, g, sign) in [(i, gi, false), (a, ga, true)] {
                            let Some(gm) = g.comp(n) else { continue };
                            for t in 0..gm.rows() {
                                if let Some(col) = unk.col(slot, n, r, t) {
                                    let v = &gm[(t, s)];
                                    if !v.is_zero() {
                                        row[col] = if sign { row[col].sub(v) } else { row[col].add(v) };
                                        any = true;
                                    }
                                }
                            }
                        }
                        if any {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::<S>::identity(unk.total)
    } else {
        Matrix::from_rows(rows).expect("rows have equal length").kernel()
    };
    let mut u = vec![S::zero(); unk.total];
    for j in 0..kernel.cols() {
        let a = coeff(rng, c);
        if a == 0 {
            continue;
        }
        let mut v = kernel.column(j);
        S::make_primitive(&mut v);
        let a = S::from_i64(a);
        for (ui, vi) in u.iter_mut().zip(&v) {
            *ui = ui.add(&vi.mul(&a));
        }
    }
    covers
        .iter()
        .enumerate()
        .map(|(slot, _)| {
            let mut comps = BTreeMap::new();
            for n in lo..=hi {
                if let Some(&(off, r, k)) = unk.blocks.get(&(slot, n)) {
                    let mut m = Matrix::zeros(r, k);
                    for i in 0..r {
                        for j in 0..k {
                            m[(i, j)] = u[off + i * k + j].clone();
                        }
                    }
                    comps.insert(n, m);
                }
            }
            ChainMap::from_components(comps)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Q};

    #[test]
    fn complexes_respect_bounds() {
        let cfg = GenConfig::default();
        let mut rng = rng_from_seed(7);
        for _ in 0..200 {
            let c: ChainComplex<Q> = random_complex(&mut rng, &cfg);
            assert!(c.d_squared_witness().is_none());
            for n in c.degrees() {
                assert!(c.dim(n) <= cfg.max_dim);
                assert!((cfg.lo..=cfg.hi).contains(&n) || c.dim(n) == 0);
            }
        }
    }

    #[test]
    fn same_seed_same_diagram() {
        let shape = Arc::new(FinPoset::chain(3));
        let strat = MonotoneMap::identity(shape);
        let a: StratDiagram<Q> = random_diagram(&mut rng_from_seed(3), &strat, &GenConfig::default());
        let b: StratDiagram<Q> = random_diagram(&mut rng_from_seed(3), &strat, &GenConfig::default());
        assert_eq!(a, b);
    }

    #[test]
    fn diagrams_are_functorial() {
        let mut rng = rng_from_seed(11);
        for i in 0..30 {
            let shape = Arc::new(random_poset(&mut rng, 2 + i % 5, 0.5));
            let strat = random_strat(&mut rng, shape);
            let d: StratDiagram<Q> = random_diagram(&mut rng, &strat, &GenConfig::default());
            assert!(d.validate().valid);
            let e: StratDiagram<Fp<7>> = random_diagram(&mut rng, &strat, &GenConfig::small());
            assert!(e.validate().valid);
        }
    }

    #[test]
    fn v_shape_maps_are_not_all_zero() {
        // two covers under a common top: the cocone space is nontrivial
        let shape = Arc::new(FinPoset::from_indices(3, &[(0, 2), (1, 2)]).unwrap());
        let strat = MonotoneMap::identity(shape);
        let mut rng = rng_from_seed(5);
        let nonzero = (0..20)
            .filter(|_| {
                let d: StratDiagram<Q> = random_diagram(&mut rng, &strat, &GenConfig::default());
                !d.map(0, 2).is_zero() || !d.map(1, 2).is_zero()
            })
            .count();
        assert!(nonzero > 5);
    }

    #[test]
    fn seeds_differ_per_sample() {
        assert_ne!(sample_seed(1, 0), sample_seed(1, 1));
        assert_ne!(sample_seed(1, 0), sample_seed(2, 0));
        assert_eq!(sample_seed(9, 4), sample_seed(9, 4));
    }
}
