//! Derived hom complexes between diagrams on the same shape.
//!
//! `rhom(F, G)` is the product over nerve chains `s = x0 < ... < xk` of
//! `Hom^m(F(x0), G(xk))`, placed in total degree `m - k`. On a component of
//! chain length `k` the differential is `(-1)^k D_int + delta`, with
//! `D_int phi = d_G phi - (-1)^m phi d_F` and
//! `delta phi(s) = phi(d_0 s) F(x0 <= x1) + sum_{0<i<k} (-1)^i phi(d_i s)
//!   + (-1)^k G(x_{k-1} <= x_k) phi(d_k s)`.
//!
//! Degree-zero cycles supported on length-zero chains are exactly the strict
//! diagram maps `F -> G`.

use std::collections::{BTreeMap, HashMap};

use crate::chain::{sign, ChainComplex, ChainMap};
use crate::diagram::{DiagramMap, StratDiagram};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::kan::NerveChains;
use crate::matrix::Matrix;
use crate::poset::Subposet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct HomBlock {
    /// source degree; the block is `Hom(F_n, G_{n+m})`
    n: i32,
    rows: usize,
    cols: usize,
    off: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Slot {
    off: usize,
    inner: i32,
    blocks: Vec<HomBlock>,
}

impl Slot {
    fn block(&self, n: i32) -> Option<&HomBlock> {
        self.blocks.iter().find(|b| b.n == n)
    }
}

/// A totalized hom complex with its block layout.
#[derive(Clone, Debug)]
pub struct HomComplex<S> {
    complex: ChainComplex<S>,
    nerve: NerveChains,
    slots: HashMap<(usize, i32), Slot>,
}

struct Dense<S> {
    lo: i32,
    mats: Vec<Matrix<S>>,
}

impl<S: Scalar> Dense<S> {
    fn entry(&mut self, t: i32, r: usize, c: usize, v: &S, sgn: i64) {
        let e = &mut self.mats[(t - self.lo) as usize][(r, c)];
        *e = if sgn > 0 { e.add(v) } else { e.sub(v) };
    }
}

/// `out(r, c) += sgn * sum_s l(r, s) phi(s, c)` as a linear map on entries.
fn add_left<S: Scalar>(
    d: &mut Dense<S>,
    t: i32,
    (row0, tb): (usize, &HomBlock),
    (col0, sb): (usize, &HomBlock),
    l: &Matrix<S>,
    sgn: i64,
) {
    for r in 0..tb.rows {
        for s in 0..sb.rows {
            let v = &l[(r, s)];
            if v.is_zero() {
                continue;
            }
            for c in 0..tb.cols {
                d.entry(t, row0 + tb.off + r * tb.cols + c, col0 + sb.off + s * sb.cols + c, v, sgn);
            }
        }
    }
}

/// `out(r, c) += sgn * sum_s phi(r, s) rm(s, c)`.
fn add_right<S: Scalar>(
    d: &mut Dense<S>,
    t: i32,
    (row0, tb): (usize, &HomBlock),
    (col0, sb): (usize, &HomBlock),
    rm: &Matrix<S>,
    sgn: i64,
) {
    for s in 0..sb.cols {
        for c in 0..tb.cols {
            let v = &rm[(s, c)];
            if v.is_zero() {
                continue;
            }
            for r in 0..tb.rows {
                d.entry(t, row0 + tb.off + r * tb.cols + c, col0 + sb.off + r * sb.cols + s, v, sgn);
            }
        }
    }
}

fn add_id<S: Scalar>(
    d: &mut Dense<S>,
    t: i32,
    (row0, tb): (usize, &HomBlock),
    (col0, sb): (usize, &HomBlock),
    sgn: i64,
) {
    let one = S::one();
    for e in 0..tb.rows * tb.cols {
        d.entry(t, row0 + tb.off + e, col0 + sb.off + e, &one, sgn);
    }
}

fn same_shape<S: Scalar>(f: &StratDiagram<S>, g: &StratDiagram<S>) -> Result<()> {
    if f.shape().as_ref() != g.shape().as_ref() {
        return Err(Error::Shape("hom complex between diagrams on different shapes".into()));
    }
    Ok(())
}

impl<S: Scalar> HomComplex<S> {
    pub fn new(f: &StratDiagram<S>, g: &StratDiagram<S>) -> Result<Self> {
        same_shape(f, g)?;
        let all: Vec<usize> = (0..f.len()).collect();
        let nerve = NerveChains::new(f.shape(), &all);
        // layout
        let mut by_degree: BTreeMap<i32, Vec<(usize, i32, Vec<HomBlock>, usize)>> = BTreeMap::new();
        for (j, ch) in nerve.chains().iter().enumerate() {
            let k = (ch.len() - 1) as i32;
            let (fx, gy) = (f.value(ch[0]), g.value(ch[ch.len() - 1]));
            if fx.is_zero() || gy.is_zero() {
                continue;
            }
            for m in (gy.lo() - fx.hi())..=(gy.hi() - fx.lo()) {
                let mut blocks = Vec::new();
                let mut size = 0;
                for n in fx.degrees() {
                    let (rows, cols) = (gy.dim(n + m), fx.dim(n));
                    if rows > 0 && cols > 0 {
                        blocks.push(HomBlock { n, rows, cols, off: size });
                        size += rows * cols;
                    }
                }
                if size > 0 {
                    by_degree.entry(m - k).or_default().push((j, m, blocks, size));
                }
            }
        }
        let mut slots = HashMap::new();
        let (lo, dims) = match (by_degree.keys().next(), by_degree.keys().next_back()) {
            (Some(&lo), Some(&hi)) => {
                let mut dims = vec![0; (hi - lo + 1) as usize];
                for (t, entries) in by_degree {
                    let mut off = 0;
                    for (j, inner, blocks, size) in entries {
                        slots.insert((j, t), Slot { off, inner, blocks });
                        off += size;
                    }
                    dims[(t - lo) as usize] = off;
                }
                (lo, dims)
            }
            _ => (0, Vec::new()),
        };
        let mut d = Dense {
            lo,
            mats: (0..dims.len())
                .map(|k| Matrix::zeros(if k == 0 { 0 } else { dims[k - 1] }, dims[k]))
                .collect(),
        };
        for (j, s) in nerve.chains().iter().enumerate() {
            let k = s.len() - 1;
            let (fx, gy) = (f.value(s[0]), g.value(s[k]));
            for t1 in (lo - 1)..=(lo + dims.len() as i32) {
                let Some(ts) = slots.get(&(j, t1)) else {
                    continue;
                };
                let t = t1 + 1;
                let mp = ts.inner;
                // internal part from (s, t), inner degree mp + 1
                if let Some(ss) = slots.get(&(j, t)) {
                    let m = ss.inner;
                    for tb in &ts.blocks {
                        let n = tb.n;
                        // d_G phi_n, phi_n: F_n -> G_{n+m}
                        if let (Some(sb), Some(dg)) = (ss.block(n), gy.d(n + m)) {
                            add_left(&mut d, t, (ts.off, tb), (ss.off, sb), dg, sign(k as i32));
                        }
                        // -(-1)^m phi_{n-1} d_F
                        if let (Some(sb), Some(df)) = (ss.block(n - 1), fx.d(n)) {
                            add_right(
                                &mut d,
                                t,
                                (ts.off, tb),
                                (ss.off, sb),
                                df,
                                -sign(m) * sign(k as i32),
                            );
                        }
                    }
                }
                if k == 0 {
                    continue;
                }
                for i in 0..=k {
                    let mut face = s.clone();
                    face.remove(i);
                    let fj = nerve.position(&face).expect("faces of chains are chains");
                    let Some(ss) = slots.get(&(fj, t)) else {
                        continue;
                    };
                    debug_assert_eq!(ss.inner, mp);
                    for tb in &ts.blocks {
                        let n = tb.n;
                        let Some(sb) = ss.block(n) else { continue };
                        if i == 0 {
                            if let Some(a) = f.map(s[0], s[1]).comp(n) {
                                add_right(&mut d, t, (ts.off, tb), (ss.off, sb), a, 1);
                            }
                        } else if i < k {
                            add_id(&mut d, t, (ts.off, tb), (ss.off, sb), sign(i as i32));
                        }
                        if i == k {
                            if let Some(b) = g.map(s[k - 1], s[k]).comp(n + mp) {
                                add_left(&mut d, t, (ts.off, tb), (ss.off, sb), b, sign(k as i32));
                            }
                        }
                    }
                }
            }
        }
        Ok(HomComplex {
            complex: ChainComplex::from_parts(lo, dims, d.mats),
            nerve,
            slots,
        })
    }

    pub fn complex(&self) -> &ChainComplex<S> {
        &self.complex
    }

    pub fn nerve(&self) -> &NerveChains {
        &self.nerve
    }

    fn degree_range(&self, other: &HomComplex<S>) -> std::ops::RangeInclusive<i32> {
        let a = &self.complex;
        let b = &other.complex;
        match (a.is_zero(), b.is_zero()) {
            (true, true) => std::ops::RangeInclusive::new(1, 0),
            (true, false) => b.degrees(),
            (false, true) => a.degrees(),
            (false, false) => a.lo().min(b.lo())..=a.hi().max(b.hi()),
        }
    }

    /// Restriction `rhom_C(F, G) -> rhom_S(F|S, G|S)`; `target` must be
    /// built from the restrictions to `sub`.
    pub fn restriction(&self, target: &HomComplex<S>, sub: &Subposet) -> ChainMap<S> {
        let mut comps = BTreeMap::new();
        for t in self.degree_range(target) {
            let mut m = Matrix::zeros(target.complex.dim(t), self.complex.dim(t));
            for (j, ch) in target.nerve.chains().iter().enumerate() {
                let Some(ts) = target.slots.get(&(j, t)) else {
                    continue;
                };
                let parent: Vec<usize> = ch.iter().map(|&p| sub.members()[p]).collect();
                let pj = self.nerve.position(&parent).expect("subposet chains are chains");
                let ss = self.slots.get(&(pj, t)).expect("restricted values agree");
                for tb in &ts.blocks {
                    let sb = ss.block(tb.n).expect("restricted values agree");
                    for e in 0..tb.rows * tb.cols {
                        m[(ts.off + tb.off + e, ss.off + sb.off + e)] = S::one();
                    }
                }
            }
            comps.insert(t, m);
        }
        ChainMap::from_components(comps)
    }

    /// The map `phi |-> post(x_k) phi pre(x_0)` into `target`, where `pre`
    /// maps the new source into the old one and `post` maps the old target
    /// into the new one. Both nerves must agree.
    pub fn sandwich(
        &self,
        target: &HomComplex<S>,
        pre: Option<&DiagramMap<S>>,
        post: Option<&DiagramMap<S>>,
    ) -> ChainMap<S> {
        assert_eq!(self.nerve, target.nerve);
        let range = self.degree_range(target);
        let lo = *range.start();
        let mut d = Dense {
            lo,
            mats: range
                .clone()
                .map(|t| Matrix::zeros(target.complex.dim(t), self.complex.dim(t)))
                .collect(),
        };
        for (j, ch) in self.nerve.chains().iter().enumerate() {
            let (x0, xk) = (ch[0], ch[ch.len() - 1]);
            for t in range.clone() {
                let (Some(ss), Some(ts)) = (self.slots.get(&(j, t)), target.slots.get(&(j, t))) else {
                    continue;
                };
                let m = ss.inner;
                for tb in &ts.blocks {
                    let n = tb.n;
                    let Some(sb) = ss.block(n) else { continue };
                    let pre_m = match pre {
                        None => None,
                        Some(p) => match p.comp(x0).comp(n) {
                            Some(a) => Some(a),
                            None => continue,
                        },
                    };
                    let post_m = match post {
                        None => None,
                        Some(p) => match p.comp(xk).comp(n + m) {
                            Some(b) => Some(b),
                            None => continue,
                        },
                    };
                    // each entry: new(r, c) = sum_{a, b} post(r, a) old(a, b) pre(b, c)
                    for r in 0..tb.rows {
                        for c in 0..tb.cols {
                            for a in 0..sb.rows {
                                let pa = match post_m {
                                    Some(p) => p[(r, a)].clone(),
                                    None if r == a => S::one(),
                                    None => continue,
                                };
                                if pa.is_zero() {
                                    continue;
                                }
                                for b in 0..sb.cols {
                                    let pb = match pre_m {
                                        Some(p) => p[(b, c)].clone(),
                                        None if b == c => S::one(),
                                        None => continue,
                                    };
                                    if pb.is_zero() {
                                        continue;
                                    }
                                    d.entry(
                                        t,
                                        ts.off + tb.off + r * tb.cols + c,
                                        ss.off + sb.off + a * sb.cols + b,
                                        &pa.mul(&pb),
                                        1,
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        ChainMap::from_components(range.zip(d.mats).collect())
    }

    /// The isomorphism `rhom(X[-1], W) -> rhom(X, W[1])`: identical blocks,
    /// sign `(-1)^m` on inner degree `m`. `self` is built from `(X[-1], W)`
    /// and `target` from `(X, W[1])`.
    pub fn shift_iso(&self, target: &HomComplex<S>) -> ChainMap<S> {
        assert_eq!(self.nerve, target.nerve);
        let mut comps = BTreeMap::new();
        for t in self.degree_range(target) {
            let mut m = Matrix::zeros(target.complex.dim(t), self.complex.dim(t));
            for j in 0..self.nerve.len() {
                let (Some(ss), Some(ts)) = (self.slots.get(&(j, t)), target.slots.get(&(j, t))) else {
                    continue;
                };
                let s = S::from_i64(sign(ss.inner));
                for sb in &ss.blocks {
                    // X[-1]_n = X_{n+1}
                    let tb = ts.block(sb.n + 1).expect("shifted blocks match");
                    for e in 0..sb.rows * sb.cols {
                        m[(ts.off + tb.off + e, ss.off + sb.off + e)] = s.clone();
                    }
                }
            }
            comps.insert(t, m);
        }
        ChainMap::from_components(comps)
    }

    /// The element of total degree 0 given by a strict diagram map.
    pub fn strict_element(&self, phi: &DiagramMap<S>) -> Vec<S> {
        let mut v = vec![S::zero(); self.complex.dim(0)];
        for (j, ch) in self.nerve.chains().iter().enumerate() {
            if ch.len() != 1 {
                break;
            }
            let Some(slot) = self.slots.get(&(j, 0)) else {
                continue;
            };
            for b in &slot.blocks {
                if let Some(m) = phi.comp(ch[0]).comp(b.n) {
                    for r in 0..b.rows {
                        for c in 0..b.cols {
                            v[slot.off + b.off + r * b.cols + c] = m[(r, c)].clone();
                        }
                    }
                }
            }
        }
        v
    }

    /// Coordinates of total degree 0 that lie on length-zero chains.
    fn vertex_coordinates(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, ch) in self.nerve.chains().iter().enumerate() {
            if ch.len() != 1 {
                break;
            }
            if let Some(slot) = self.slots.get(&(j, 0)) {
                let size: usize = slot.blocks.iter().map(|b| b.rows * b.cols).sum();
                out.extend(slot.off..slot.off + size);
            }
        }
        out
    }

    /// `(dim H_0, rank of the image of strict maps in H_0)`. Strict maps
    /// are the degree-zero cycles supported on length-zero chains.
    pub fn strict_maps_in_h0(&self) -> (usize, usize) {
        let h0 = self.complex.homology(0);
        if h0 == 0 {
            return (0, 0);
        }
        let coords = self.vertex_coordinates();
        let d0 = self.complex.d_matrix(0);
        let restricted = d0.select_columns(&coords);
        let ker = restricted.kernel();
        let mut strict = Matrix::zeros(self.complex.dim(0), ker.cols());
        for (i, &c) in coords.iter().enumerate() {
            for j in 0..ker.cols() {
                strict[(c, j)] = ker[(i, j)].clone();
            }
        }
        let b = self.complex.d_matrix(1);
        let rb = b.rank();
        (h0, b.hcat(&strict).rank() - rb)
    }
}

/// `rhom(F, G)` as a bare complex.
pub fn rhom<S: Scalar>(f: &StratDiagram<S>, g: &StratDiagram<S>) -> Result<ChainComplex<S>> {
    Ok(HomComplex::new(f, g)?.complex)
}
