//! Grothendieck classes of diagrams and the stratum-by-stratum splitting.
//!
//! Over a field the class of a diagram is its vector of pointwise Euler
//! characteristics. [`split_decompose`] peels off the minimal strata with
//! `i^*`, continues on the open rest with `j_#^L`, and records one piece
//! `G_p` on each fibre `C_p`. The splitting identity says the class of `F`
//! is the sum of the classes of the left Kan extensions of the pieces.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::chain::sign;
use crate::diagram::StratDiagram;
use crate::error::Result;
use crate::field::Scalar;
use crate::kan::{ho_lan, NerveChains};
use crate::matrix::integer_determinant;
use crate::poset::{FinPoset, MonotoneMap, Subposet};
use crate::recollement::RecollementCtx;

/// Integer vector indexed by named elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K0Vector {
    pub index: Vec<String>,
    pub entries: Vec<i64>,
}

impl K0Vector {
    pub fn zero(index: Vec<String>) -> Self {
        let n = index.len();
        K0Vector {
            index,
            entries: vec![0; n],
        }
    }

    pub fn add(&mut self, other: &K0Vector) {
        debug_assert_eq!(self.index, other.index);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
    }
}

/// Pointwise Euler characteristics over the shape.
pub fn k0_class<S: Scalar>(f: &StratDiagram<S>) -> K0Vector {
    K0Vector {
        index: f.shape().ids().to_vec(),
        entries: f.euler_vector(),
    }
}

/// Which closed set to split off at each step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitOrder {
    /// All minimal remaining strata at once.
    #[default]
    Minimal,
    /// One minimal stratum at a time, lowest index first.
    OneAtATime,
}

/// A diagram on the fibre `C_p` of one stratum.
#[derive(Clone, Debug)]
pub struct Piece<S> {
    pub stratum: String,
    /// Fibre as a subposet of the original shape.
    pub fiber: Subposet,
    pub diagram: StratDiagram<S>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitStep {
    pub closed: Vec<String>,
    pub open: Vec<String>,
    /// Whether the localization triangle used at this step was exact.
    pub triangle_exact: bool,
}

#[derive(Clone, Debug)]
pub struct Decomposition<S> {
    /// One piece per stratum, in stratum index order.
    pub pieces: Vec<Piece<S>>,
    pub steps: Vec<SplitStep>,
}

impl<S> Decomposition<S> {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }
}

/// Splits `f` along its strata. Every stratum of the strata poset gets a
/// piece; strata with empty fibres get the empty diagram.
pub fn split_decompose<S: Scalar>(
    f: &StratDiagram<S>,
    order: SplitOrder,
) -> Result<Decomposition<S>> {
    let c = f.shape().clone();
    let p = f.strata().clone();
    let s = f.strat().clone();
    let mut remaining: Vec<usize> = (0..p.len()).collect();
    // current diagram and the original index of each of its elements
    let mut current = f.clone();
    let mut orig: Vec<usize> = (0..c.len()).collect();
    let mut pieces: Vec<Option<Piece<S>>> = vec![None; p.len()];
    let mut steps = Vec::new();
    while !remaining.is_empty() {
        let r_sub = p.subposet(remaining.iter().copied())?;
        let p_r = Arc::new(p.full_subposet(&r_sub));
        let values = orig
            .iter()
            .map(|&x| r_sub.position(s.apply(x)).expect("current elements lie over remaining strata"))
            .collect();
        let strat = MonotoneMap::new(current.shape().clone(), p_r.clone(), values)?;
        let diag = current.with_strat(strat.clone())?;
        let mut z = p_r.minimal_elements();
        if order == SplitOrder::OneAtATime {
            z = p_r.subposet([z.members()[0]])?;
        }
        let ctx = RecollementCtx::new(strat.clone(), z.clone())?;
        for &q in z.members() {
            let fiber_cur = strat.fiber(q);
            let fiber = c.subposet(fiber_cur.members().iter().map(|&x| orig[x]))?;
            let piece = diag.restrict(&fiber_cur);
            let stratum = remaining[q];
            pieces[stratum] = Some(Piece {
                stratum: p.id(stratum).to_string(),
                fiber,
                diagram: piece,
            });
        }
        let triangle_exact = ctx.localization_triangles(&diag)?[2].passed;
        let sl = ctx.j_sharp_l(&diag)?;
        steps.push(SplitStep {
            closed: z.ids(&p_r).iter().map(|x| x.to_string()).collect(),
            open: ctx.open_strata().ids(&p_r).iter().map(|x| x.to_string()).collect(),
            triangle_exact,
        });
        orig = ctx.open_part().members().iter().map(|&x| orig[x]).collect();
        current = sl.restricted;
        let closed: Vec<usize> = z.members().iter().map(|&q| remaining[q]).collect();
        remaining.retain(|x| !closed.contains(x));
    }
    Ok(Decomposition {
        pieces: pieces
            .into_iter()
            .map(|x| x.expect("every stratum is split off exactly once"))
            .collect(),
        steps,
    })
}

/// `i_{p,#} G_p` along the fibre inclusion `C_p -> C`, stratified like `C`.
pub fn extend_piece<S: Scalar>(
    strat: &MonotoneMap,
    piece: &Piece<S>,
) -> Result<StratDiagram<S>> {
    let inc = MonotoneMap::inclusion(strat.source().clone(), &piece.fiber);
    let lan = ho_lan(&inc, &piece.diagram)?;
    lan.diagram.with_strat(strat.clone())
}

/// Class of `i_{p,#} G` computed from chain counts alone:
/// at `d`, the sum over chains `s` of `{c in C_p : c <= d}` of
/// `(-1)^len(s) chi(G(s_0))`.
pub fn extended_class_by_chains<S: Scalar>(
    shape: &FinPoset,
    piece: &Piece<S>,
) -> Vec<i64> {
    let chi = piece.diagram.euler_vector();
    (0..shape.len())
        .map(|d| {
            let members: Vec<usize> = piece
                .fiber
                .members()
                .iter()
                .copied()
                .filter(|&c| shape.leq(c, d))
                .collect();
            let nerve = NerveChains::new(shape, &members);
            nerve
                .chains()
                .iter()
                .map(|ch| {
                    let pos = piece.fiber.position(ch[0]).expect("chain lies in the fibre");
                    sign(ch.len() as i32 - 1) * chi[pos]
                })
                .sum()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceReport {
    pub stratum: String,
    pub elements: Vec<String>,
    pub class: Vec<i64>,
    /// Class of the extension to the whole shape.
    pub extended_class: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorMatrix {
    /// Generators `i_{c,#}(unit)`, one column per element.
    pub columns: Vec<String>,
    /// `(stratum, element)` labels of the decomposition coordinates.
    pub rows: Vec<(String, String)>,
    pub matrix: Vec<Vec<i64>>,
    pub determinant: String,
    /// Lower unitriangular after ordering each fibre by a linear extension.
    pub unitriangular: bool,
    pub invertible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub elements: Vec<String>,
    pub strata: Vec<String>,
    pub krull_dim: i64,
    /// Rank of the free group of classes, one generator per element.
    pub k0_rank: usize,
    pub depth: usize,
    pub class: Vec<i64>,
    pub pieces: Vec<PieceReport>,
    pub sum_of_pieces: Vec<i64>,
    pub identity_holds: bool,
    pub chain_count_oracle_agrees: bool,
    pub triangles_exact: bool,
    pub steps: Vec<SplitStep>,
    pub generator_matrix: GeneratorMatrix,
    pub passed: bool,
}

/// Decomposition coordinates: the concatenated classes of the pieces,
/// strata in index order and fibres in element order.
pub fn decomposition_coordinates<S>(d: &Decomposition<S>) -> Vec<i64>
where
    S: Scalar,
{
    d.pieces
        .iter()
        .flat_map(|p| p.diagram.euler_vector())
        .collect()
}

/// Matrix whose column `c` holds the decomposition coordinates of the
/// generator `i_{c,#}(unit)`.
pub fn generator_matrix<S: Scalar>(strat: &MonotoneMap, order: SplitOrder) -> Result<GeneratorMatrix> {
    let c = strat.source().clone();
    let p = strat.target().clone();
    let mut rows = Vec::new();
    let mut row_of = vec![0usize; c.len()];
    let ext = c.linear_extension();
    for q in 0..p.len() {
        let fiber = strat.fiber(q);
        // rows follow the fibre's element order, as the decomposition does
        for &x in fiber.members() {
            row_of[x] = rows.len();
            rows.push((p.id(q).to_string(), c.id(x).to_string()));
        }
    }
    let mut matrix = vec![vec![0i64; c.len()]; rows.len()];
    for g in 0..c.len() {
        let gen = StratDiagram::<S>::up_set_indicator(strat.clone(), g);
        let d = split_decompose(&gen, order)?;
        for (r, v) in decomposition_coordinates(&d).into_iter().enumerate() {
            matrix[r][g] = v;
        }
    }
    let det = integer_determinant(&matrix);
    // reorder rows and columns by (stratum, linear extension position)
    let mut pos = vec![0usize; c.len()];
    for (i, &x) in ext.iter().enumerate() {
        pos[x] = i;
    }
    let mut perm: Vec<usize> = (0..c.len()).collect();
    perm.sort_by_key(|&x| (strat.apply(x), pos[x]));
    let unitriangular = perm.iter().enumerate().all(|(i, &gi)| {
        perm.iter().enumerate().all(|(j, &gj)| {
            let v = matrix[row_of[gi]][gj];
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => v.abs() == 1,
                std::cmp::Ordering::Less => v == 0,
                std::cmp::Ordering::Greater => true,
            }
        })
    });
    Ok(GeneratorMatrix {
        columns: c.ids().to_vec(),
        rows,
        matrix,
        invertible: det.abs() == BigInt::one(),
        determinant: det.to_string(),
        unitriangular,
    })
}

/// Runs the decomposition and checks the splitting identity, the chain
/// count oracle, the exactness of every step and the generator matrix.
pub fn verify_splitting<S: Scalar>(f: &StratDiagram<S>, order: SplitOrder) -> Result<SplittingReport> {
    let strat = f.strat().clone();
    let c = f.shape().clone();
    let d = split_decompose(f, order)?;
    let class = k0_class(f);
    let mut sum = K0Vector::zero(c.ids().to_vec());
    let mut pieces = Vec::new();
    let mut oracle_ok = true;
    for piece in &d.pieces {
        let ext = extend_piece(&strat, piece)?;
        let ext_class = k0_class(&ext);
        if extended_class_by_chains(&c, piece) != ext_class.entries {
            oracle_ok = false;
        }
        sum.add(&ext_class);
        pieces.push(PieceReport {
            stratum: piece.stratum.clone(),
            elements: piece.fiber.ids(&c).iter().map(|x| x.to_string()).collect(),
            class: piece.diagram.euler_vector(),
            extended_class: ext_class.entries,
        });
    }
    let identity_holds = sum.entries == class.entries;
    let triangles_exact = d.steps.iter().all(|s| s.triangle_exact);
    let generator_matrix = generator_matrix::<S>(&strat, order)?;
    let passed = identity_holds
        && oracle_ok
        && triangles_exact
        && generator_matrix.invertible
        && generator_matrix.unitriangular;
    Ok(SplittingReport {
        elements: c.ids().to_vec(),
        strata: f.strata().ids().to_vec(),
        krull_dim: f.strata().krull_dim(),
        k0_rank: c.len(),
        depth: d.depth(),
        class: class.entries,
        pieces,
        sum_of_pieces: sum.entries,
        identity_holds,
        chain_count_oracle_agrees: oracle_ok,
        triangles_exact,
        steps: d.steps,
        generator_matrix,
        passed,
    })
}

/// The same diagram stratified over the image `s(C)` instead of all of
/// `P`.
pub fn restrict_to_image<S: Scalar>(f: &StratDiagram<S>) -> Result<StratDiagram<S>> {
    let s = f.strat();
    let image = s.image();
    let p_img = Arc::new(s.target().full_subposet(&image));
    let values = s
        .values()
        .iter()
        .map(|&q| image.position(q).expect("values lie in the image"))
        .collect();
    let strat = MonotoneMap::new(f.shape().clone(), p_img, values)?;
    f.with_strat(strat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainComplex;
    use crate::diagram::{pointwise_cone, DiagramMap};
    use crate::field::Q;
    use crate::random::{random_diagram, random_poset, random_strat, rng_from_seed, GenConfig};

    fn interval() -> MonotoneMap {
        MonotoneMap::identity(Arc::new(FinPoset::chain(2)))
    }

    #[test]
    fn classes_of_simple_diagrams() {
        let s = interval();
        let c = StratDiagram::<Q>::constant(s.clone(), &ChainComplex::unit());
        assert_eq!(k0_class(&c).entries, vec![1, 1]);
        let ctx = RecollementCtx::from_ids(s, &["0"]).unwrap();
        let b = StratDiagram::<Q>::constant(ctx.open_strat(), &ChainComplex::unit());
        assert_eq!(k0_class(&ctx.j_sharp(&b).unwrap()).entries, vec![0, 1]);
    }

    #[test]
    fn class_is_additive_on_cones() {
        let mut rng = rng_from_seed(3);
        let s = interval();
        for _ in 0..10 {
            let f: StratDiagram<Q> = random_diagram(&mut rng, &s, &GenConfig::default());
            let z = DiagramMap::zero(2);
            let g: StratDiagram<Q> = random_diagram(&mut rng, &s, &GenConfig::default());
            let c = pointwise_cone(&z, &f, &g);
            let expect: Vec<i64> = k0_class(&g)
                .entries
                .iter()
                .zip(&k0_class(&f).entries)
                .map(|(a, b)| a - b)
                .collect();
            assert_eq!(k0_class(&c.diagram).entries, expect);
        }
    }

    #[test]
    fn constant_on_interval_splits_to_bottom() {
        let f = StratDiagram::<Q>::constant(interval(), &ChainComplex::unit());
        let d = split_decompose(&f, SplitOrder::Minimal).unwrap();
        assert_eq!(d.pieces[0].diagram.euler_vector(), vec![1]);
        assert!(d.pieces[1].diagram.is_pointwise_acyclic());
        assert_eq!(d.depth(), 2);
    }

    #[test]
    fn open_extension_passes_through() {
        let s = interval();
        let ctx = RecollementCtx::from_ids(s, &["0"]).unwrap();
        let b = StratDiagram::<Q>::constant(ctx.open_strat(), &ChainComplex::unit());
        let d = split_decompose(&ctx.j_sharp(&b).unwrap(), SplitOrder::Minimal).unwrap();
        assert!(d.pieces[0].diagram.is_pointwise_zero());
        assert_eq!(d.pieces[1].diagram.euler_vector(), vec![1]);
    }

    #[test]
    fn closed_pushforward_carries_a_shifted_correction() {
        let s = interval();
        let ctx = RecollementCtx::from_ids(s, &["0"]).unwrap();
        let a = StratDiagram::<Q>::constant(ctx.closed_strat(), &ChainComplex::unit());
        let f = ctx.i_lower(&a).unwrap();
        let d = split_decompose(&f, SplitOrder::Minimal).unwrap();
        assert_eq!(d.pieces[0].diagram.euler_vector(), vec![1]);
        assert_eq!(d.pieces[1].diagram.euler_vector(), vec![-1]);
        assert!(verify_splitting(&f, SplitOrder::Minimal).unwrap().passed);
    }

    #[test]
    fn zero_diagram_splits_to_zero() {
        let f = StratDiagram::<Q>::zero(interval());
        let r = verify_splitting(&f, SplitOrder::Minimal).unwrap();
        assert!(r.passed);
        assert!(r.pieces.iter().all(|p| p.class.iter().all(|&x| x == 0)));
    }

    #[test]
    fn cpn_model_generator_matrix_is_identity() {
        let s = MonotoneMap::identity(Arc::new(FinPoset::chain(3)));
        let g = generator_matrix::<Q>(&s, SplitOrder::Minimal).unwrap();
        assert_eq!(g.matrix, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(g.determinant, "1");
    }

    #[test]
    fn random_splittings_hold_and_are_order_independent() {
        let mut rng = rng_from_seed(77);
        for i in 0..15 {
            let shape = Arc::new(random_poset(&mut rng, 1 + i % 5, 0.5));
            let strat = random_strat(&mut rng, shape);
            let f: StratDiagram<Q> = random_diagram(&mut rng, &strat, &GenConfig::small());
            let a = verify_splitting(&f, SplitOrder::Minimal).unwrap();
            assert!(a.passed, "{a:#?}");
            assert_eq!(a.depth as i64, f.strata().krull_dim() + 1);
            let b = verify_splitting(&f, SplitOrder::OneAtATime).unwrap();
            assert!(b.passed);
            let classes = |r: &SplittingReport| {
                r.pieces.iter().map(|p| p.extended_class.clone()).collect::<Vec<_>>()
            };
            assert_eq!(classes(&a), classes(&b));
        }
    }

    #[test]
    fn refinement_to_image_is_stable() {
        // stratify a 2-chain over a 3-chain, missing the middle stratum
        let c = Arc::new(FinPoset::chain(2));
        let p = Arc::new(FinPoset::chain(3));
        let s = MonotoneMap::new(c, p, vec![0, 2]).unwrap();
        let mut rng = rng_from_seed(1);
        let f: StratDiagram<Q> = random_diagram(&mut rng, &s, &GenConfig::default());
        let full = verify_splitting(&f, SplitOrder::Minimal).unwrap();
        let img = verify_splitting(&restrict_to_image(&f).unwrap(), SplitOrder::Minimal).unwrap();
        assert!(full.passed && img.passed);
        assert_eq!(full.pieces[1].class, Vec::<i64>::new());
        let nonempty: Vec<_> = full
            .pieces
            .iter()
            .filter(|p| !p.elements.is_empty())
            .map(|p| p.extended_class.clone())
            .collect();
        let img_classes: Vec<_> = img.pieces.iter().map(|p| p.extended_class.clone()).collect();
        assert_eq!(nonempty, img_classes);
    }
}
