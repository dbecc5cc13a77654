//! Homotopy (co)limits over finite posets and derived Kan extensions.
//!
//! Both totalizations run over the nondegenerate chains `x0 < ... < xk` of a
//! subposet. For the colimit, a degree-`m` element of `D(x0)` on a chain of
//! length `k` sits in total degree `m + k` and
//! `D = sum_i (-1)^i d_i + (-1)^k d_int`, where face 0 applies
//! `D(x0 <= x1)`. For the limit, a degree-`m` element of `D(xk)` sits in
//! total degree `m - k`, and on a target chain `s` of length `k`
//! `(D phi)(s) = (-1)^k d_int phi(s) + sum_{i<k} (-1)^i phi(d_i s)
//!   + (-1)^k D(x_{k-1} <= x_k) phi(d_k s)`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::chain::{sign, ChainComplex, ChainMap};
use crate::diagram::{DiagramMap, StratDiagram};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::poset::{FinPoset, MonotoneMap, Subposet};

/// Nondegenerate chains of a subposet, ordered by length and then
/// lexicographically in element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveChains {
    chains: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl NerveChains {
    pub fn new(poset: &FinPoset, members: &[usize]) -> Self {
        let mut chains: Vec<Vec<usize>> = members.iter().map(|&x| vec![x]).collect();
        let mut frontier = chains.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for c in &frontier {
                let last = *c.last().expect("chains are nonempty");
                for &y in members {
                    if poset.lt(last, y) {
                        let mut e = c.clone();
                        e.push(y);
                        next.push(e);
                    }
                }
            }
            chains.extend(next.iter().cloned());
            frontier = next;
        }
        chains.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = chains
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        NerveChains { chains, index }
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn position(&self, chain: &[usize]) -> Option<usize> {
        self.index.get(chain).copied()
    }

    /// Chain counts by length.
    pub fn counts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for c in &self.chains {
            let k = c.len() - 1;
            if out.len() <= k {
                out.resize(k + 1, 0);
            }
            out[k] += 1;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TotKind {
    Colim,
    Lim,
}

/// A totalized (co)simplicial replacement together with its block layout.
#[derive(Clone, Debug)]
pub struct Totalization<S> {
    kind: TotKind,
    nerve: NerveChains,
    complex: ChainComplex<S>,
    /// (chain index, total degree) -> (offset, dim)
    slots: HashMap<(usize, i32), (usize, usize)>,
}

fn delete(chain: &[usize], i: usize) -> Vec<usize> {
    let mut f = chain.to_vec();
    f.remove(i);
    f
}

struct Builder<S> {
    lo: i32,
    mats: Vec<Matrix<S>>,
}

impl<S: Scalar> Builder<S> {
    fn new(lo: i32, dims: &[usize]) -> Self {
        let mats = (0..dims.len())
            .map(|k| Matrix::zeros(if k == 0 { 0 } else { dims[k - 1] }, dims[k]))
            .collect();
        Builder { lo, mats }
    }

    /// Adds `sign * m` into the differential leaving degree `t`.
    fn add(&mut self, t: i32, row: usize, col: usize, m: &Matrix<S>, sgn: i64) {
        let d = &mut self.mats[(t - self.lo) as usize];
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = &m[(r, c)];
                if v.is_zero() {
                    continue;
                }
                let e = &mut d[(row + r, col + c)];
                *e = if sgn > 0 { e.add(v) } else { e.sub(v) };
            }
        }
    }

    fn add_identity(&mut self, t: i32, row: usize, col: usize, n: usize, sgn: i64) {
        let d = &mut self.mats[(t - self.lo) as usize];
        let one = if sgn > 0 { S::one() } else { S::one().neg() };
        for k in 0..n {
            let e = &mut d[(row + k, col + k)];
            *e = e.add(&one);
        }
    }
}

fn layout(
    chains: &[Vec<usize>],
    dim_of: impl Fn(&[usize], i32) -> Vec<(i32, usize)>,
) -> (i32, Vec<usize>, HashMap<(usize, i32), (usize, usize)>) {
    let mut by_degree: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
    for (j, c) in chains.iter().enumerate() {
        let k = (c.len() - 1) as i32;
        for (t, dim) in dim_of(c, k) {
            if dim > 0 {
                by_degree.entry(t).or_default().push((j, dim));
            }
        }
    }
    let mut slots = HashMap::new();
    let (Some(&lo), Some(&hi)) = (by_degree.keys().next(), by_degree.keys().next_back()) else {
        return (0, Vec::new(), slots);
    };
    let mut dims = vec![0; (hi - lo + 1) as usize];
    for (t, blocks) in by_degree {
        let mut off = 0;
        for (j, dim) in blocks {
            slots.insert((j, t), (off, dim));
            off += dim;
        }
        dims[(t - lo) as usize] = off;
    }
    (lo, dims, slots)
}

impl<S: Scalar> Totalization<S> {
    /// Homotopy colimit of `diag` restricted to `members`.
    pub fn hocolim(diag: &StratDiagram<S>, members: &[usize]) -> Self {
        let shape = diag.shape();
        let nerve = NerveChains::new(shape, members);
        let (lo, dims, slots) = layout(nerve.chains(), |c, k| {
            let v = diag.value(c[0]);
            v.degrees().map(|m| (m + k, v.dim(m))).collect()
        });
        let mut b = Builder::new(lo, &dims);
        for (j, c) in nerve.chains().iter().enumerate() {
            let k = c.len() - 1;
            let x0 = diag.value(c[0]);
            for m in x0.degrees() {
                let t = m + k as i32;
                let Some(&(col, _)) = slots.get(&(j, t)) else {
                    continue;
                };
                if let (Some(d), Some(&(row, _))) = (x0.d(m), slots.get(&(j, t - 1))) {
                    b.add(t, row, col, d, sign(k as i32));
                }
                if k == 0 {
                    continue;
                }
                for i in 0..=k {
                    let face = delete(c, i);
                    let fj = nerve.position(&face).expect("faces of chains are chains");
                    let Some(&(row, _)) = slots.get(&(fj, t - 1)) else {
                        continue;
                    };
                    if i == 0 {
                        if let Some(f) = diag.map(c[0], c[1]).comp(m) {
                            b.add(t, row, col, f, 1);
                        }
                    } else {
                        b.add_identity(t, row, col, x0.dim(m), sign(i as i32));
                    }
                }
            }
        }
        Totalization {
            kind: TotKind::Colim,
            complex: ChainComplex::from_parts(lo, dims, b.mats),
            nerve,
            slots,
        }
    }

    /// Homotopy limit of `diag` restricted to `members`.
    pub fn holim(diag: &StratDiagram<S>, members: &[usize]) -> Self {
        let shape = diag.shape();
        let nerve = NerveChains::new(shape, members);
        let (lo, dims, slots) = layout(nerve.chains(), |c, k| {
            let v = diag.value(*c.last().expect("nonempty"));
            v.degrees().map(|m| (m - k, v.dim(m))).collect()
        });
        let mut b = Builder::new(lo, &dims);
        for (j, s) in nerve.chains().iter().enumerate() {
            let k = s.len() - 1;
            let xk = diag.value(s[k]);
            // target block (s, t - 1) with inner degree m
            for m in xk.degrees() {
                let t1 = m - k as i32;
                let Some(&(row, dim)) = slots.get(&(j, t1)) else {
                    continue;
                };
                let t = t1 + 1;
                if let (Some(d), Some(&(col, _))) = (xk.d(m + 1), slots.get(&(j, t))) {
                    b.add(t, row, col, d, sign(k as i32));
                }
                if k == 0 {
                    continue;
                }
                for i in 0..=k {
                    let face = delete(s, i);
                    let fj = nerve.position(&face).expect("faces of chains are chains");
                    let Some(&(col, _)) = slots.get(&(fj, t)) else {
                        continue;
                    };
                    if i < k {
                        b.add_identity(t, row, col, dim, sign(i as i32));
                    } else if let Some(f) = diag.map(s[k - 1], s[k]).comp(m) {
                        b.add(t, row, col, f, sign(k as i32));
                    }
                }
            }
        }
        Totalization {
            kind: TotKind::Lim,
            complex: ChainComplex::from_parts(lo, dims, b.mats),
            nerve,
            slots,
        }
    }

    pub fn kind(&self) -> TotKind {
        self.kind
    }

    pub fn complex(&self) -> &ChainComplex<S> {
        &self.complex
    }

    pub fn nerve(&self) -> &NerveChains {
        &self.nerve
    }

    fn slot(&self, chain: usize, t: i32) -> Option<(usize, usize)> {
        self.slots.get(&(chain, t)).copied()
    }

    /// Inclusion of summands into a colimit over a larger subposet.
    pub fn inclusion_into(&self, bigger: &Totalization<S>) -> ChainMap<S> {
        assert_eq!(self.kind, TotKind::Colim);
        self.block_map(bigger, false)
    }

    /// Restriction of a limit to the chains of a smaller subposet.
    pub fn restriction_to(&self, smaller: &Totalization<S>) -> ChainMap<S> {
        assert_eq!(self.kind, TotKind::Lim);
        smaller.block_map(self, true)
    }

    /// Identity blocks between matching chains of `self` (the smaller
    /// nerve) and `other`. With `transpose`, the map runs `other -> self`.
    fn block_map(&self, other: &Totalization<S>, transpose: bool) -> ChainMap<S> {
        let (src, tgt) = if transpose {
            (&other.complex, &self.complex)
        } else {
            (&self.complex, &other.complex)
        };
        let mut comps = BTreeMap::new();
        for t in self.complex.degrees() {
            let mut m = Matrix::zeros(tgt.dim(t), src.dim(t));
            for (j, c) in self.nerve.chains().iter().enumerate() {
                let Some((a, dim)) = self.slot(j, t) else {
                    continue;
                };
                let oj = other
                    .nerve
                    .position(c)
                    .expect("smaller nerve embeds in larger one");
                let (b, _) = other.slot(oj, t).expect("matching chain has matching block");
                for k in 0..dim {
                    if transpose {
                        m[(a + k, b + k)] = S::one();
                    } else {
                        m[(b + k, a + k)] = S::one();
                    }
                }
            }
            comps.insert(t, m);
        }
        ChainMap::from_components(comps)
    }

    /// Colimit augmentation to `diag(c)`, where every member lies below
    /// `c`: length-zero chains map through the structure maps, longer
    /// chains to zero.
    pub fn augmentation(&self, diag: &StratDiagram<S>, c: usize) -> Result<ChainMap<S>> {
        assert_eq!(self.kind, TotKind::Colim);
        let target = diag.value(c);
        let mut comps = BTreeMap::new();
        for t in target.degrees() {
            let mut m = Matrix::zeros(target.dim(t), self.complex.dim(t));
            for (j, ch) in self.nerve.chains().iter().enumerate() {
                if ch.len() != 1 {
                    break;
                }
                if !diag.shape().leq(ch[0], c) {
                    return Err(Error::Shape(format!(
                        "{} is not below {}",
                        diag.shape().id(ch[0]),
                        diag.shape().id(c)
                    )));
                }
                if let (Some((off, _)), Some(f)) = (self.slot(j, t), diag.map(ch[0], c).comp(t)) {
                    m.set_block(0, off, f);
                }
            }
            comps.insert(t, m);
        }
        Ok(ChainMap::from_components(comps))
    }

    /// Limit coaugmentation from `diag(c)`, where `c` lies below every
    /// member.
    pub fn coaugmentation(&self, diag: &StratDiagram<S>, c: usize) -> Result<ChainMap<S>> {
        assert_eq!(self.kind, TotKind::Lim);
        let source = diag.value(c);
        let mut comps = BTreeMap::new();
        for t in source.degrees() {
            let mut m = Matrix::zeros(self.complex.dim(t), source.dim(t));
            for (j, ch) in self.nerve.chains().iter().enumerate() {
                if ch.len() != 1 {
                    break;
                }
                if !diag.shape().leq(c, ch[0]) {
                    return Err(Error::Shape(format!(
                        "{} is not above {}",
                        diag.shape().id(ch[0]),
                        diag.shape().id(c)
                    )));
                }
                if let (Some((off, _)), Some(f)) = (self.slot(j, t), diag.map(c, ch[0]).comp(t)) {
                    m.set_block(off, 0, f);
                }
            }
            comps.insert(t, m);
        }
        Ok(ChainMap::from_components(comps))
    }

    /// Map of totalizations induced by a diagram map `phi: F -> G`; `self`
    /// and `target` must be built over the same members.
    pub fn induced(&self, target: &Totalization<S>, phi: &DiagramMap<S>) -> ChainMap<S> {
        assert_eq!(self.kind, target.kind);
        assert_eq!(self.nerve, target.nerve);
        let mut comps = BTreeMap::new();
        let lo = self.complex.lo().min(target.complex.lo());
        let hi = self.complex.hi().max(target.complex.hi());
        for t in lo..=hi {
            let mut m = Matrix::zeros(target.complex.dim(t), self.complex.dim(t));
            for (j, ch) in self.nerve.chains().iter().enumerate() {
                let k = (ch.len() - 1) as i32;
                let (anchor, inner) = match self.kind {
                    TotKind::Colim => (ch[0], t - k),
                    TotKind::Lim => (ch[ch.len() - 1], t + k),
                };
                if let (Some((c, _)), Some((r, _)), Some(f)) =
                    (self.slot(j, t), target.slot(j, t), phi.comp(anchor).comp(inner))
                {
                    m.set_block(r, c, f);
                }
            }
            comps.insert(t, m);
        }
        ChainMap::from_components(comps)
    }
}

/// A Kan extension together with the per-element totalizations that
/// produced it.
#[derive(Clone, Debug)]
pub struct KanExtension<S> {
    pub diagram: StratDiagram<S>,
    pub totals: Vec<Totalization<S>>,
}

fn check_source<S: Scalar>(f: &MonotoneMap, diag: &StratDiagram<S>) -> Result<()> {
    if f.source().as_ref() != diag.shape().as_ref() {
        return Err(Error::Shape(
            "Kan extension along a map whose source is not the diagram shape".into(),
        ));
    }
    Ok(())
}

/// Left Kan extension `f_# F`: at `d`, the homotopy colimit over
/// `{c : f(c) <= d}`. The result is stratified by the identity of the
/// target; use [`StratDiagram::with_strat`] to change that.
pub fn ho_lan<S: Scalar>(f: &MonotoneMap, diag: &StratDiagram<S>) -> Result<KanExtension<S>> {
    check_source(f, diag)?;
    let target = f.target().clone();
    let combs: Vec<Subposet> = (0..target.len())
        .map(|d| f.comma_down(d))
        .collect::<Result<_>>()?;
    let totals: Vec<Totalization<S>> = combs
        .par_iter()
        .map(|sub| Totalization::hocolim(diag, sub.members()))
        .collect();
    let values = totals.iter().map(|t| t.complex().clone()).collect();
    let diagram = StratDiagram::from_fn(MonotoneMap::identity(target), values, |x, y| {
        totals[x].inclusion_into(&totals[y])
    });
    Ok(KanExtension { diagram, totals })
}

/// Right Kan extension `f_* F`: at `d`, the homotopy limit over
/// `{c : d <= f(c)}`.
pub fn ho_ran<S: Scalar>(f: &MonotoneMap, diag: &StratDiagram<S>) -> Result<KanExtension<S>> {
    check_source(f, diag)?;
    let target = f.target().clone();
    let combs: Vec<Subposet> = (0..target.len())
        .map(|d| f.comma_up(d))
        .collect::<Result<_>>()?;
    let totals: Vec<Totalization<S>> = combs
        .par_iter()
        .map(|sub| Totalization::holim(diag, sub.members()))
        .collect();
    let values = totals.iter().map(|t| t.complex().clone()).collect();
    let diagram = StratDiagram::from_fn(MonotoneMap::identity(target), values, |x, y| {
        totals[x].restriction_to(&totals[y])
    });
    Ok(KanExtension { diagram, totals })
}

/// Counit `f_# f^* G -> G`, where `lan` is `ho_lan(f, f^* G)`.
pub fn lan_counit<S: Scalar>(
    f: &MonotoneMap,
    g: &StratDiagram<S>,
    lan: &KanExtension<S>,
) -> Result<DiagramMap<S>> {
    pullback(f, g)?;
    let comps = (0..g.len())
        .map(|d| {
            let tot = &lan.totals[d];
            // members c of the comma satisfy f(c) <= d
            let mut comps = BTreeMap::new();
            let target = g.value(d);
            for t in target.degrees() {
                let mut m = Matrix::zeros(target.dim(t), tot.complex.dim(t));
                for (j, ch) in tot.nerve.chains().iter().enumerate() {
                    if ch.len() != 1 {
                        break;
                    }
                    let fc = f.apply(ch[0]);
                    if let (Some((off, _)), Some(h)) = (tot.slot(j, t), g.map(fc, d).comp(t)) {
                        m.set_block(0, off, h);
                    }
                }
                comps.insert(t, m);
            }
            ChainMap::from_components(comps)
        })
        .collect();
    Ok(DiagramMap::new(comps))
}

/// Unit `G -> f_* f^* G`, where `ran` is `ho_ran(f, f^* G)`.
pub fn ran_unit<S: Scalar>(
    f: &MonotoneMap,
    g: &StratDiagram<S>,
    ran: &KanExtension<S>,
) -> Result<DiagramMap<S>> {
    pullback(f, g)?;
    let comps = (0..g.len())
        .map(|d| {
            let tot = &ran.totals[d];
            let source = g.value(d);
            let mut comps = BTreeMap::new();
            for t in source.degrees() {
                let mut m = Matrix::zeros(tot.complex.dim(t), source.dim(t));
                for (j, ch) in tot.nerve.chains().iter().enumerate() {
                    if ch.len() != 1 {
                        break;
                    }
                    let fc = f.apply(ch[0]);
                    if let (Some((off, _)), Some(h)) = (tot.slot(j, t), g.map(d, fc).comp(t)) {
                        m.set_block(off, 0, h);
                    }
                }
                comps.insert(t, m);
            }
            ChainMap::from_components(comps)
        })
        .collect();
    Ok(DiagramMap::new(comps))
}

/// Precomposition `f^* G` for a monotone `f` into the shape of `G`. The
/// result carries the stratification `s_G ∘ f`.
pub fn pullback<S: Scalar>(f: &MonotoneMap, g: &StratDiagram<S>) -> Result<StratDiagram<S>> {
    if f.target().as_ref() != g.shape().as_ref() {
        return Err(Error::Shape("pullback along a map into another shape".into()));
    }
    let strat = g.strat().compose(f)?;
    let values = (0..f.source().len())
        .map(|c| g.value(f.apply(c)).clone())
        .collect();
    Ok(StratDiagram::from_fn(strat, values, |x, y| {
        g.map(f.apply(x), f.apply(y)).clone()
    }))
}

/// For a full inclusion `f`, the restricted counit `f^* f_# F -> F`: at
/// `c`, the comma poset has maximum `c` and the map is the augmentation.
pub fn restricted_counit<S: Scalar>(
    f: &MonotoneMap,
    diag: &StratDiagram<S>,
    lan: &KanExtension<S>,
) -> Result<DiagramMap<S>> {
    (0..diag.len())
        .map(|c| lan.totals[f.apply(c)].augmentation(diag, c))
        .collect::<Result<Vec<_>>>()
        .map(DiagramMap::new)
}

/// For a full inclusion `f`, the restricted unit `F -> f^* f_* F`.
pub fn restricted_unit<S: Scalar>(
    f: &MonotoneMap,
    diag: &StratDiagram<S>,
    ran: &KanExtension<S>,
) -> Result<DiagramMap<S>> {
    (0..diag.len())
        .map(|c| ran.totals[f.apply(c)].coaugmentation(diag, c))
        .collect::<Result<Vec<_>>>()
        .map(DiagramMap::new)
}

fn extend_by_zero<S: Scalar>(
    ambient: &MonotoneMap,
    sub: &Subposet,
    diag: &StratDiagram<S>,
) -> Result<StratDiagram<S>> {
    if diag.len() != sub.len() {
        return Err(Error::Shape(format!(
            "diagram has {} elements, subposet has {}",
            diag.len(),
            sub.len()
        )));
    }
    let values = (0..ambient.source().len())
        .map(|c| match sub.position(c) {
            Some(a) => diag.value(a).clone(),
            None => ChainComplex::zero(),
        })
        .collect();
    Ok(StratDiagram::from_fn(ambient.clone(), values, |x, y| {
        match (sub.position(x), sub.position(y)) {
            (Some(a), Some(b)) => diag.map(a, b).clone(),
            _ => ChainMap::zero(),
        }
    }))
}

/// Extension by zero from a closed (downward-closed) subposet: `i_*`.
pub fn extend_zero_closed<S: Scalar>(
    ambient: &MonotoneMap,
    closed: &Subposet,
    diag: &StratDiagram<S>,
) -> Result<StratDiagram<S>> {
    ambient.source().require_closed(closed)?;
    extend_by_zero(ambient, closed, diag)
}

/// Extension by zero from an open (upward-closed) subposet: `j_#`.
pub fn extend_zero_open<S: Scalar>(
    ambient: &MonotoneMap,
    open: &Subposet,
    diag: &StratDiagram<S>,
) -> Result<StratDiagram<S>> {
    ambient.source().require_open(open)?;
    extend_by_zero(ambient, open, diag)
}

/// Comparison `i_* A -> ho_ran(i, A)`: coaugmentation on the closed part,
/// zero elsewhere (the comma posets there are empty).
pub fn closed_extension_comparison<S: Scalar>(
    ambient: &MonotoneMap,
    closed: &Subposet,
    diag: &StratDiagram<S>,
) -> Result<(StratDiagram<S>, KanExtension<S>, DiagramMap<S>)> {
    let ext = extend_zero_closed(ambient, closed, diag)?;
    let i = MonotoneMap::inclusion(ambient.source().clone(), closed);
    let ran = ho_ran(&i, diag)?;
    let comps = (0..ambient.source().len())
        .map(|c| match closed.position(c) {
            Some(a) => ran.totals[c].coaugmentation(diag, a),
            None => Ok(ChainMap::zero()),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ext, ran, DiagramMap::new(comps)))
}

/// Comparison `ho_lan(j, B) -> j_# B`: augmentation on the open part.
pub fn open_extension_comparison<S: Scalar>(
    ambient: &MonotoneMap,
    open: &Subposet,
    diag: &StratDiagram<S>,
) -> Result<(StratDiagram<S>, KanExtension<S>, DiagramMap<S>)> {
    let ext = extend_zero_open(ambient, open, diag)?;
    let j = MonotoneMap::inclusion(ambient.source().clone(), open);
    let lan = ho_lan(&j, diag)?;
    let comps = (0..ambient.source().len())
        .map(|c| match open.position(c) {
            Some(a) => lan.totals[c].augmentation(diag, a),
            None => Ok(ChainMap::zero()),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((ext, lan, DiagramMap::new(comps)))
}

/// Whether the augmentation from the homotopy colimit over all of the
/// shape to the value at its maximum is a quasi-isomorphism. `None` when
/// there is no maximum.
pub fn colim_cofinality<S: Scalar>(diag: &StratDiagram<S>) -> Option<bool> {
    let top = diag.shape().maximum()?;
    let all: Vec<usize> = (0..diag.len()).collect();
    let tot = Totalization::hocolim(diag, &all);
    let aug = tot.augmentation(diag, top).ok()?;
    Some(aug.is_quasi_iso(tot.complex(), diag.value(top)))
}

/// Dual of [`colim_cofinality`] for a minimum and the homotopy limit.
pub fn lim_cofinality<S: Scalar>(diag: &StratDiagram<S>) -> Option<bool> {
    let bottom = diag.shape().minimum()?;
    let all: Vec<usize> = (0..diag.len()).collect();
    let tot = Totalization::holim(diag, &all);
    let co = tot.coaugmentation(diag, bottom).ok()?;
    Some(co.is_quasi_iso(diag.value(bottom), tot.complex()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::random::{random_diagram, rng_from_seed, GenConfig};
    use std::sync::Arc;

    fn unit() -> ChainComplex<Q> {
        ChainComplex::unit()
    }

    fn constant(p: FinPoset) -> StratDiagram<Q> {
        StratDiagram::constant(MonotoneMap::identity(Arc::new(p)), &unit())
    }

    fn all(d: &StratDiagram<Q>) -> Vec<usize> {
        (0..d.len()).collect()
    }

    #[test]
    fn nerve_order() {
        let p = FinPoset::chain(3);
        let n = NerveChains::new(&p, &[0, 1, 2]);
        assert_eq!(
            n.chains(),
            &[
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
        assert_eq!(n.counts(), vec![3, 3, 1]);
    }

    #[test]
    fn lambda_hocolim_by_hand() {
        // a < b, a < c with constant value Q
        let p = FinPoset::new(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        let d = constant(p);
        let t = Totalization::hocolim(&d, &all(&d));
        assert_eq!(t.complex().dim(0), 3);
        assert_eq!(t.complex().dim(1), 2);
        assert_eq!(t.complex().betti(), [(0, 1)].into());
    }

    #[test]
    fn antichain_is_direct_sum() {
        let x = ChainComplex::<Q>::concentrated(1, 2);
        let strat = MonotoneMap::identity(Arc::new(FinPoset::antichain(2)));
        let values = vec![unit(), x.clone()];
        let d = StratDiagram::new(strat, values, BTreeMap::new()).unwrap();
        let colim = Totalization::hocolim(&d, &[0, 1]);
        let lim = Totalization::holim(&d, &[0, 1]);
        assert_eq!(colim.complex(), &unit().direct_sum(&x));
        assert_eq!(lim.complex(), &unit().direct_sum(&x));
    }

    #[test]
    fn holim_of_constant_on_contractible_nerve() {
        for p in [FinPoset::chain(3), FinPoset::new(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap()] {
            let d = constant(p);
            let t = Totalization::holim(&d, &all(&d));
            assert_eq!(t.complex().betti(), [(0, 1)].into());
        }
    }

    #[test]
    fn holim_of_circle_nerve() {
        // two minima below two maxima: the nerve is a circle
        let p = FinPoset::from_indices(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let d = constant(p);
        let lim = Totalization::holim(&d, &all(&d));
        assert_eq!(lim.complex().betti(), [(0, 1), (-1, 1)].into());
        let colim = Totalization::hocolim(&d, &all(&d));
        assert_eq!(colim.complex().betti(), [(0, 1), (1, 1)].into());
    }

    #[test]
    fn empty_totalizations_are_zero() {
        let d = constant(FinPoset::chain(2));
        assert!(Totalization::hocolim(&d, &[]).complex().is_zero());
        assert!(Totalization::holim(&d, &[]).complex().is_zero());
    }

    fn interval() -> Arc<FinPoset> {
        Arc::new(FinPoset::chain(2))
    }

    fn point_at(parent: &Arc<FinPoset>, x: usize) -> (MonotoneMap, StratDiagram<Q>) {
        let sub = parent.subposet([x]).unwrap();
        let f = MonotoneMap::inclusion(parent.clone(), &sub);
        let d = StratDiagram::constant(MonotoneMap::identity(f.source().clone()), &unit());
        (f, d)
    }

    #[test]
    fn lan_from_bottom_is_constant() {
        let (f, d) = point_at(&interval(), 0);
        let lan = ho_lan(&f, &d).unwrap().diagram;
        assert_eq!(lan.euler_vector(), vec![1, 1]);
        assert!(lan.map(0, 1).is_quasi_iso(lan.value(0), lan.value(1)));
    }

    #[test]
    fn lan_from_top_is_extension_by_zero() {
        let (f, d) = point_at(&interval(), 1);
        let lan = ho_lan(&f, &d).unwrap().diagram;
        assert!(lan.value(0).is_zero());
        assert_eq!(lan.value(1), &unit());
    }

    #[test]
    fn ran_from_top_is_constant() {
        let (f, d) = point_at(&interval(), 1);
        let ran = ho_ran(&f, &d).unwrap().diagram;
        assert_eq!(ran.euler_vector(), vec![1, 1]);
        assert!(ran.map(0, 1).is_quasi_iso(ran.value(0), ran.value(1)));
    }

    #[test]
    fn ran_from_bottom_is_extension_by_zero() {
        let (f, d) = point_at(&interval(), 0);
        let ran = ho_ran(&f, &d).unwrap().diagram;
        assert_eq!(ran.value(0), &unit());
        assert!(ran.value(1).is_zero());
    }

    #[test]
    fn closed_and_open_extensions() {
        let c = interval();
        let strat = MonotoneMap::identity(c.clone());
        let (_, a) = point_at(&c, 0);
        let z = c.subposet([0]).unwrap();
        let ext = extend_zero_closed(&strat, &z, &a).unwrap();
        assert_eq!(ext.euler_vector(), vec![1, 0]);
        let u = c.subposet([1]).unwrap();
        let ext = extend_zero_open(&strat, &u, &a).unwrap();
        assert_eq!(ext.euler_vector(), vec![0, 1]);
        assert!(extend_zero_closed(&strat, &u, &a).is_err());
        assert!(extend_zero_open(&strat, &z, &a).is_err());
    }

    #[test]
    fn identity_kan_extensions_recover_input() {
        let mut rng = rng_from_seed(21);
        let strat = MonotoneMap::identity(Arc::new(FinPoset::chain(3)));
        for _ in 0..10 {
            let d: StratDiagram<Q> = random_diagram(&mut rng, &strat, &GenConfig::default());
            let id = MonotoneMap::identity(d.shape().clone());
            let lan = ho_lan(&id, &d).unwrap();
            let counit = restricted_counit(&id, &d, &lan).unwrap();
            assert!(counit.naturality_witness(&lan.diagram, &d).is_none());
            assert!(counit.is_pointwise_qis(&lan.diagram, &d));
            let ran = ho_ran(&id, &d).unwrap();
            let unit = restricted_unit(&id, &d, &ran).unwrap();
            assert!(unit.naturality_witness(&d, &ran.diagram).is_none());
            assert!(unit.is_pointwise_qis(&d, &ran.diagram));
        }
    }

    #[test]
    fn cofinality_on_random_diagrams() {
        let mut rng = rng_from_seed(4);
        let strat = MonotoneMap::identity(Arc::new(FinPoset::chain(3)));
        for _ in 0..10 {
            let d: StratDiagram<Q> = random_diagram(&mut rng, &strat, &GenConfig::default());
            assert_eq!(colim_cofinality(&d), Some(true));
            assert_eq!(lim_cofinality(&d), Some(true));
        }
        let d = constant(FinPoset::antichain(2));
        assert_eq!(colim_cofinality(&d), None);
    }

    #[test]
    fn extension_comparisons_are_quasi_isos() {
        let mut rng = rng_from_seed(8);
        let c = Arc::new(FinPoset::from_indices(3, &[(0, 1), (0, 2)]).unwrap());
        let strat = MonotoneMap::identity(c.clone());
        for _ in 0..10 {
            let d: StratDiagram<Q> = random_diagram(&mut rng, &strat, &GenConfig::default());
            let z = c.subposet([0]).unwrap();
            let a = d.restrict(&z);
            let (ext, ran, cmp) = closed_extension_comparison(&strat, &z, &a).unwrap();
            assert!(cmp.naturality_witness(&ext, &ran.diagram).is_none());
            assert!(cmp.is_pointwise_qis(&ext, &ran.diagram));
            let u = c.subposet([1, 2]).unwrap();
            let b = d.restrict(&u);
            let (ext, lan, cmp) = open_extension_comparison(&strat, &u, &b).unwrap();
            assert!(cmp.naturality_witness(&lan.diagram, &ext).is_none());
            assert!(cmp.is_pointwise_qis(&lan.diagram, &ext));
        }
    }

    #[test]
    fn counit_and_unit_along_projection() {
        // f: chain(3) -> chain(2) collapsing the top two elements
        let src = Arc::new(FinPoset::chain(3));
        let tgt = Arc::new(FinPoset::chain(2));
        let f = MonotoneMap::new(src, tgt.clone(), vec![0, 1, 1]).unwrap();
        let mut rng = rng_from_seed(2);
        let g: StratDiagram<Q> =
            random_diagram(&mut rng, &MonotoneMap::identity(tgt), &GenConfig::default());
        let pulled = pullback(&f, &g).unwrap();
        let lan = ho_lan(&f, &pulled).unwrap();
        let counit = lan_counit(&f, &g, &lan).unwrap();
        assert!(counit.naturality_witness(&lan.diagram, &g).is_none());
        let ran = ho_ran(&f, &pulled).unwrap();
        let unit = ran_unit(&f, &g, &ran).unwrap();
        assert!(unit.naturality_witness(&g, &ran.diagram).is_none());
        // f is surjective with contractible fibres: both are quasi-isos
        assert!(counit.is_pointwise_qis(&lan.diagram, &g));
        assert!(unit.is_pointwise_qis(&g, &ran.diagram));
    }

    #[test]
    fn totalization_is_natural() {
        let mut rng = rng_from_seed(13);
        let strat = MonotoneMap::identity(Arc::new(FinPoset::chain(2)));
        let d: StratDiagram<Q> = random_diagram(&mut rng, &strat, &GenConfig::default());
        let c = crate::diagram::pointwise_cone(&DiagramMap::identity(&d), &d, &d);
        for kind in [TotKind::Colim, TotKind::Lim] {
            let build = |x: &StratDiagram<Q>| match kind {
                TotKind::Colim => Totalization::hocolim(x, &[0, 1]),
                TotKind::Lim => Totalization::holim(x, &[0, 1]),
            };
            let (a, b) = (build(&d), build(&c.diagram));
            let m = a.induced(&b, &c.inclusion);
            assert!(m.chain_map_witness(a.complex(), b.complex()).is_none());
        }
    }
}
