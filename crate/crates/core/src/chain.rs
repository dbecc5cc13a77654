//! Bounded chain complexes of finite-dimensional vector spaces and chain
//! maps between them.
//!
//! Conventions (homological grading, differentials lower degree by one):
//! - `X[k]_n = X_{n-k}` with differential `(-1)^k d_X`.
//! - `cone(f: X -> Y)_n = Y_n (+) X_{n-1}`, target summand first, with
//!   differential `(y, x) |-> (d y + f x, -d x)`.
//! - `fib(f) = cone(f)[-1]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Entry, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex<S> {
    lo: i32,
    dims: Vec<usize>,
    /// `diffs[k]` is `d_{lo+k}: X_{lo+k} -> X_{lo+k-1}`.
    diffs: Vec<Matrix<S>>,
}

impl<S: Scalar> ChainComplex<S> {
    /// Checked constructor. `diffs[k]` is the differential leaving degree
    /// `lo + k + 1`; missing trailing entries are zero.
    pub fn new(lo: i32, dims: Vec<usize>, diffs: Vec<Matrix<S>>) -> Result<Self> {
        if diffs.len() > dims.len().saturating_sub(1) {
            return Err(Error::Shape("more differentials than degree gaps".into()));
        }
        let mut full = Vec::with_capacity(dims.len());
        full.push(Matrix::zeros(0, dims.first().copied().unwrap_or(0)));
        for k in 1..dims.len() {
            let m = match diffs.get(k - 1) {
                Some(m) => m.clone(),
                None => Matrix::zeros(dims[k - 1], dims[k]),
            };
            if m.shape() != (dims[k - 1], dims[k]) {
                return Err(Error::Shape(format!(
                    "differential out of degree {} has shape {:?}, expected {:?}",
                    lo + k as i32,
                    m.shape(),
                    (dims[k - 1], dims[k])
                )));
            }
            full.push(m);
        }
        let c = ChainComplex {
            lo,
            dims,
            diffs: full,
        };
        if let Some(n) = c.d_squared_witness() {
            return Err(Error::NotAComplex(n));
        }
        Ok(c.normalized())
    }

    /// Constructor for engine-internal outputs whose `d^2 = 0` follows from
    /// the construction; still verified in debug builds.
    pub(crate) fn from_parts(lo: i32, dims: Vec<usize>, diffs: Vec<Matrix<S>>) -> Self {
        debug_assert_eq!(dims.len(), diffs.len());
        let c = ChainComplex { lo, dims, diffs };
        debug_assert!(c.d_squared_witness().is_none(), "d^2 != 0 in constructed complex");
        c.normalized()
    }

    pub fn zero() -> Self {
        ChainComplex {
            lo: 0,
            dims: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// `dim` copies of the ground field in a single degree.
    pub fn concentrated(degree: i32, dim: usize) -> Self {
        ChainComplex::from_parts(degree, vec![dim], vec![Matrix::zeros(0, dim)])
    }

    /// The ground field in degree 0.
    pub fn unit() -> Self {
        Self::concentrated(0, 1)
    }

    /// Trims zero dimensions at both ends; the zero complex gets `lo = 0`.
    fn normalized(mut self) -> Self {
        let Some(first) = self.dims.iter().position(|&d| d > 0) else {
            return Self::zero();
        };
        let last = self.dims.iter().rposition(|&d| d > 0).expect("nonzero exists");
        if first > 0 || last + 1 < self.dims.len() {
            self.dims = self.dims[first..=last].to_vec();
            let mut diffs: Vec<Matrix<S>> = self.diffs.drain(first..=last).collect();
            diffs[0] = Matrix::zeros(0, self.dims[0]);
            self.diffs = diffs;
            self.lo += first as i32;
        }
        self
    }

    pub fn d_squared_witness(&self) -> Option<i32> {
        for k in 1..self.dims.len() {
            if k >= 2 {
                let prod = self.diffs[k - 1].mul(&self.diffs[k]);
                if !prod.is_zero() {
                    return Some(self.lo + k as i32);
                }
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Top degree; `lo - 1` for the zero complex.
    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    #[inline]
    pub fn dim(&self, n: i32) -> usize {
        if n < self.lo {
            return 0;
        }
        self.dims.get((n - self.lo) as usize).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// The differential leaving degree `n`, if nonzero-sized.
    pub fn d(&self, n: i32) -> Option<&Matrix<S>> {
        if n <= self.lo || n > self.hi() {
            return None;
        }
        Some(&self.diffs[(n - self.lo) as usize])
    }

    /// The differential leaving degree `n` as an owned matrix of the
    /// correct (possibly empty) shape.
    pub fn d_matrix(&self, n: i32) -> Matrix<S> {
        match self.d(n) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.dim(n - 1), self.dim(n)),
        }
    }

    fn rank_d(&self, n: i32) -> usize {
        self.d(n).map_or(0, Matrix::rank)
    }

    /// `dim ker d_n - rank d_{n+1}`.
    pub fn homology(&self, n: i32) -> usize {
        let dim = self.dim(n);
        if dim == 0 {
            return 0;
        }
        dim - self.rank_d(n) - self.rank_d(n + 1)
    }

    /// Homology dimensions over the degree window.
    pub fn betti(&self) -> BTreeMap<i32, usize> {
        self.degrees()
            .map(|n| (n, self.homology(n)))
            .filter(|&(_, h)| h > 0)
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|n| self.homology(n) == 0)
    }

    pub fn euler_char(&self) -> i64 {
        self.degrees()
            .map(|n| sign(n) * self.dim(n) as i64)
            .sum()
    }

    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let s = if k.rem_euclid(2) == 0 { S::one() } else { S::one().neg() };
        ChainComplex {
            lo: self.lo + k,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|m| m.scale(&s)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut dims = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let (a, b) = (self.dim(n), other.dim(n));
            dims.push(a + b);
            let mut m = Matrix::zeros(self.dim(n - 1) + other.dim(n - 1), a + b);
            if n > lo {
                if let Some(d) = self.d(n) {
                    m.set_block(0, 0, d);
                }
                if let Some(d) = other.d(n) {
                    m.set_block(self.dim(n - 1), a, d);
                }
            } else {
                m = Matrix::zeros(0, a + b);
            }
            diffs.push(m);
        }
        ChainComplex::from_parts(lo, dims, diffs)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            lo: self.lo,
            dims: self.dims.clone(),
            differentials: self.diffs.iter().skip(1).map(Matrix::to_entries).collect(),
        }
    }

    pub fn from_json(j: &ComplexJson) -> Result<Self> {
        let mut diffs = Vec::with_capacity(j.differentials.len());
        for (k, entries) in j.differentials.iter().enumerate() {
            let rows = j.dims.get(k).copied().unwrap_or(0);
            let cols = j.dims.get(k + 1).copied().unwrap_or(0);
            diffs.push(Matrix::from_entries(rows, cols, entries)?);
        }
        Self::new(j.lo, j.dims.clone(), diffs)
    }
}

/// JSON wire format of a complex: `differentials[k]` is the matrix of the
/// differential from degree `lo + k + 1` to `lo + k`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexJson {
    #[serde(default)]
    pub lo: i32,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub differentials: Vec<Vec<Vec<Entry>>>,
}

#[inline]
pub(crate) fn sign(n: i32) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// A degree-preserving chain map. Components are stored only where both
/// source and target are nonzero; absent components are zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChainMap<S> {
    comps: BTreeMap<i32, Matrix<S>>,
}

/// Rank data of the map induced on homology in one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyMapRank {
    pub degree: i32,
    pub source: usize,
    pub target: usize,
    pub rank: usize,
}

impl HomologyMapRank {
    pub fn is_iso(&self) -> bool {
        self.source == self.rank && self.target == self.rank
    }
}

impl<S: Scalar> ChainMap<S> {
    /// Checked constructor.
    pub fn new(
        source: &ChainComplex<S>,
        target: &ChainComplex<S>,
        comps: BTreeMap<i32, Matrix<S>>,
    ) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (n, m) in comps {
            let shape = (target.dim(n), source.dim(n));
            if m.shape() != shape {
                return Err(Error::Shape(format!(
                    "map component in degree {n} has shape {:?}, expected {shape:?}",
                    m.shape()
                )));
            }
            if shape.0 > 0 && shape.1 > 0 {
                kept.insert(n, m);
            }
        }
        let f = ChainMap { comps: kept };
        if let Some(n) = f.chain_map_witness(source, target) {
            return Err(Error::NotAChainMap(n));
        }
        Ok(f)
    }

    /// Unchecked constructor for engine-built maps; callers guarantee the
    /// shapes and the chain-map identity.
    pub(crate) fn from_components(comps: BTreeMap<i32, Matrix<S>>) -> Self {
        ChainMap {
            comps: comps
                .into_iter()
                .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
                .collect(),
        }
    }

    pub fn zero() -> Self {
        ChainMap {
            comps: BTreeMap::new(),
        }
    }

    pub fn identity(x: &ChainComplex<S>) -> Self {
        ChainMap::from_components(
            x.degrees()
                .map(|n| (n, Matrix::identity(x.dim(n))))
                .collect(),
        )
    }

    pub fn components(&self) -> &BTreeMap<i32, Matrix<S>> {
        &self.comps
    }

    pub fn comp(&self, n: i32) -> Option<&Matrix<S>> {
        self.comps.get(&n)
    }

    /// Component in degree `n` with the shape dictated by the complexes.
    pub fn matrix(&self, n: i32, source: &ChainComplex<S>, target: &ChainComplex<S>) -> Matrix<S> {
        match self.comps.get(&n) {
            Some(m) => m.clone(),
            None => Matrix::zeros(target.dim(n), source.dim(n)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(Matrix::is_zero)
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &ChainMap<S>) -> ChainMap<S> {
        let mut out = BTreeMap::new();
        for (n, g) in &self.comps {
            if let Some(f) = first.comps.get(n) {
                if g.cols() == f.rows() {
                    out.insert(*n, g.mul(f));
                }
            }
        }
        ChainMap::from_components(out)
    }

    pub fn add(&self, other: &ChainMap<S>) -> ChainMap<S> {
        let mut out = self.comps.clone();
        for (n, m) in &other.comps {
            let v = match out.get(n) {
                Some(a) => a.add(m),
                None => m.clone(),
            };
            out.insert(*n, v);
        }
        ChainMap::from_components(out)
    }

    pub fn neg(&self) -> ChainMap<S> {
        ChainMap::from_components(self.comps.iter().map(|(n, m)| (*n, m.neg())).collect())
    }

    pub fn shift(&self, k: i32) -> ChainMap<S> {
        ChainMap::from_components(self.comps.iter().map(|(n, m)| (n + k, m.clone())).collect())
    }

    /// Compares with `other` as maps between the given complexes.
    pub fn equals(&self, other: &ChainMap<S>) -> bool {
        let degrees: std::collections::BTreeSet<i32> =
            self.comps.keys().chain(other.comps.keys()).copied().collect();
        degrees.into_iter().all(|n| match (self.comps.get(&n), other.comps.get(&n)) {
            (Some(a), Some(b)) => a == b,
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (None, None) => true,
        })
    }

    /// First degree where `d f != f d`, if any; also catches shape errors.
    pub fn chain_map_witness(
        &self,
        source: &ChainComplex<S>,
        target: &ChainComplex<S>,
    ) -> Option<i32> {
        for (n, m) in &self.comps {
            if m.shape() != (target.dim(*n), source.dim(*n)) {
                return Some(*n);
            }
        }
        let lo = source.lo().min(target.lo());
        let hi = source.hi().max(target.hi());
        for n in lo..=hi + 1 {
            // d_Y f_n = f_{n-1} d_X
            let lhs = match (target.d(n), self.comps.get(&n)) {
                (Some(d), Some(f)) => Some(d.mul(f)),
                _ => None,
            };
            let rhs = match (self.comps.get(&(n - 1)), source.d(n)) {
                (Some(f), Some(d)) => Some(f.mul(d)),
                _ => None,
            };
            let ok = match (lhs, rhs) {
                (Some(a), Some(b)) => a == b,
                (Some(a), None) | (None, Some(a)) => a.is_zero(),
                (None, None) => true,
            };
            if !ok {
                return Some(n);
            }
        }
        None
    }

    /// Rank of the map induced on `H_n`.
    pub fn homology_rank(
        &self,
        source: &ChainComplex<S>,
        target: &ChainComplex<S>,
        n: i32,
    ) -> HomologyMapRank {
        let hs = source.homology(n);
        let ht = target.homology(n);
        let rank = if hs == 0 || ht == 0 {
            0
        } else {
            // cycles of the source
            let z = source.d_matrix(n).kernel();
            let fz = self.matrix(n, source, target).mul(&z);
            let b = target.d_matrix(n + 1);
            let rb = b.rank();
            b.hcat(&fz).rank() - rb
        };
        HomologyMapRank {
            degree: n,
            source: hs,
            target: ht,
            rank,
        }
    }

    /// Per-degree induced ranks over the union of both windows.
    pub fn homology_ranks(
        &self,
        source: &ChainComplex<S>,
        target: &ChainComplex<S>,
    ) -> Vec<HomologyMapRank> {
        if source.is_zero() && target.is_zero() {
            return Vec::new();
        }
        let lo = if source.is_zero() { target.lo() } else if target.is_zero() { source.lo() } else { source.lo().min(target.lo()) };
        let hi = source.hi().max(target.hi());
        (lo..=hi).map(|n| self.homology_rank(source, target, n)).collect()
    }

    /// Whether the induced map on homology is bijective in every degree.
    pub fn is_quasi_iso(&self, source: &ChainComplex<S>, target: &ChainComplex<S>) -> bool {
        self.homology_ranks(source, target).iter().all(HomologyMapRank::is_iso)
    }
}

/// Mapping cone with its canonical maps.
#[derive(Clone, Debug)]
pub struct Cone<S> {
    pub complex: ChainComplex<S>,
    /// `Y -> cone(f)`.
    pub inclusion: ChainMap<S>,
    /// `cone(f) -> X[1]`.
    pub projection: ChainMap<S>,
}

/// Mapping cone of `f: source -> target`.
pub fn cone<S: Scalar>(
    f: &ChainMap<S>,
    source: &ChainComplex<S>,
    target: &ChainComplex<S>,
) -> Cone<S> {
    let x = source;
    let y = target;
    if x.is_zero() && y.is_zero() {
        return Cone {
            complex: ChainComplex::zero(),
            inclusion: ChainMap::zero(),
            projection: ChainMap::zero(),
        };
    }
    let lo = if x.is_zero() {
        y.lo()
    } else if y.is_zero() {
        x.lo() + 1
    } else {
        y.lo().min(x.lo() + 1)
    };
    let hi = y.hi().max(x.hi() + 1);
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    let mut incl = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for n in lo..=hi {
        let (yn, xn1) = (y.dim(n), x.dim(n - 1));
        dims.push(yn + xn1);
        if n == lo {
            diffs.push(Matrix::zeros(0, yn + xn1));
        } else {
            let (ym, xm) = (y.dim(n - 1), x.dim(n - 2));
            let mut d = Matrix::zeros(ym + xm, yn + xn1);
            if let Some(dy) = y.d(n) {
                d.set_block(0, 0, dy);
            }
            if let Some(fm) = f.comp(n - 1) {
                d.set_block(0, yn, fm);
            }
            if let Some(dx) = x.d(n - 1) {
                d.set_block(ym, yn, &dx.neg());
            }
            diffs.push(d);
        }
        let mut i = Matrix::zeros(yn + xn1, yn);
        let mut p = Matrix::zeros(xn1, yn + xn1);
        for k in 0..yn {
            i[(k, k)] = S::one();
        }
        for k in 0..xn1 {
            p[(k, yn + k)] = S::one();
        }
        incl.insert(n, i);
        proj.insert(n, p);
    }
    Cone {
        complex: ChainComplex::from_parts(lo, dims, diffs),
        inclusion: ChainMap::from_components(incl),
        projection: ChainMap::from_components(proj),
    }
}

/// Homotopy fiber `cone(f)[-1]`.
pub fn fib<S: Scalar>(
    f: &ChainMap<S>,
    source: &ChainComplex<S>,
    target: &ChainComplex<S>,
) -> ChainComplex<S> {
    cone(f, source, target).complex.shift(-1)
}

/// The canonical map `fib(f) -> X`, projection onto the source summand.
pub fn fib_projection<S: Scalar>(
    source: &ChainComplex<S>,
    target: &ChainComplex<S>,
) -> ChainMap<S> {
    // fib_n = Y_{n+1} (+) X_n
    let mut comps = BTreeMap::new();
    let lo = source.lo().min(target.lo() - 1);
    let hi = source.hi().max(target.hi() - 1);
    for n in lo..=hi {
        let (yn, xn) = (target.dim(n + 1), source.dim(n));
        let mut p = Matrix::zeros(xn, yn + xn);
        for k in 0..xn {
            p[(k, yn + k)] = S::one();
        }
        comps.insert(n, p);
    }
    ChainMap::from_components(comps)
}
