//! Adjunction checks for the functors of a recollement.
//!
//! For an adjoint pair `L -| R` and inputs `X`, `Y`, the check builds a
//! zig-zag of explicit chain maps between `rhom(L X, Y)` and `rhom(X, R Y)`
//! out of restrictions and pre/post-composition with units and counits.
//! The adjunction holds on the sample when every leg is a
//! quasi-isomorphism.

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{ChainComplex, ChainMap};
use crate::diagram::StratDiagram;
use crate::error::Result;
use crate::field::Scalar;
use crate::recollement::RecollementCtx;
use crate::random::{random_diagram, rng_from_seed, sample_seed, GenConfig};
use crate::rhom::HomComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AdjointPair {
    /// `i_# -| i^*`
    ISharpIUpper,
    /// `i^* -| i_*`
    IUpperILower,
    /// `i_* -| i^!`
    ILowerIShriek,
    /// `j_#^L -| j_#`
    JSharpLJSharp,
    /// `j_# -| j^*`
    JSharpJUpper,
    /// `j^* -| j_*`
    JUpperJLower,
    /// `j_# j_#^L -| j_# j^*`, the composite of the two flipped pairs
    FlippedProjector,
}

impl AdjointPair {
    pub const ALL: [AdjointPair; 7] = [
        AdjointPair::ISharpIUpper,
        AdjointPair::IUpperILower,
        AdjointPair::ILowerIShriek,
        AdjointPair::JSharpLJSharp,
        AdjointPair::JSharpJUpper,
        AdjointPair::JUpperJLower,
        AdjointPair::FlippedProjector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdjointPair::ISharpIUpper => "i_# -| i^*",
            AdjointPair::IUpperILower => "i^* -| i_*",
            AdjointPair::ILowerIShriek => "i_* -| i^!",
            AdjointPair::JSharpLJSharp => "j_#^L -| j_#",
            AdjointPair::JSharpJUpper => "j_# -| j^*",
            AdjointPair::JUpperJLower => "j^* -| j_*",
            AdjointPair::FlippedProjector => "j_# j_#^L -| j_# j^*",
        }
    }

    /// Where `X` and `Y` live: `'C'` for the whole shape, `'Z'` or `'U'`
    /// for the closed or open part.
    pub fn domains(self) -> (char, char) {
        match self {
            AdjointPair::ISharpIUpper | AdjointPair::ILowerIShriek => ('Z', 'C'),
            AdjointPair::IUpperILower => ('C', 'Z'),
            AdjointPair::JSharpJUpper => ('U', 'C'),
            AdjointPair::JUpperJLower | AdjointPair::JSharpLJSharp => ('C', 'U'),
            AdjointPair::FlippedProjector => ('C', 'C'),
        }
    }
}

/// One map of a zig-zag.
#[derive(Clone, Debug)]
pub struct Leg<S> {
    pub label: &'static str,
    pub source: ChainComplex<S>,
    pub target: ChainComplex<S>,
    pub map: ChainMap<S>,
}

impl<S: Scalar> Leg<S> {
    fn new(label: &'static str, source: &HomComplex<S>, target: &HomComplex<S>, map: ChainMap<S>) -> Self {
        Leg {
            label,
            source: source.complex().clone(),
            target: target.complex().clone(),
            map,
        }
    }

    /// First degree where the leg fails to be a quasi-isomorphism, or
    /// where it is not a chain map.
    pub fn failure(&self) -> Option<i32> {
        if let Some(n) = self.map.chain_map_witness(&self.source, &self.target) {
            return Some(n);
        }
        self.map
            .homology_ranks(&self.source, &self.target)
            .into_iter()
            .find(|r| !r.is_iso())
            .map(|r| r.degree)
    }
}

/// Zig-zag from `rhom(L X, Y)` to `rhom(X, R Y)`.
#[derive(Clone, Debug)]
pub struct ZigZag<S> {
    pub legs: Vec<Leg<S>>,
    right_end: HomComplex<S>,
    ry: StratDiagram<S>,
}

impl<S: Scalar> ZigZag<S> {
    pub fn first_failure(&self) -> Option<(&'static str, i32)> {
        self.legs
            .iter()
            .find_map(|l| l.failure().map(|d| (l.label, d)))
    }

    /// `rhom(X, R Y)`.
    pub fn right_end(&self) -> &ChainComplex<S> {
        self.right_end.complex()
    }
}

/// Builds the comparison zig-zag for `pair` at `(x, y)`.
pub fn zigzag<S: Scalar>(
    ctx: &RecollementCtx,
    pair: AdjointPair,
    x: &StratDiagram<S>,
    y: &StratDiagram<S>,
) -> Result<ZigZag<S>> {
    use AdjointPair::*;
    let cz = ctx.closed_part();
    let cu = ctx.open_part();
    Ok(match pair {
        ISharpIUpper => {
            let lan = ctx.i_sharp(x)?;
            let counit = ctx.i_sharp_counit(x, &lan)?;
            let iy = ctx.i_upper(y);
            let left = HomComplex::new(&lan.diagram, y)?;
            let mid = HomComplex::new(&ctx.i_upper(&lan.diagram), &iy)?;
            let right = HomComplex::new(x, &iy)?;
            let legs = vec![
                Leg::new("restrict to C_Z", &left, &mid, left.restriction(&mid, cz)),
                Leg::new("precompose i^* i_# A -> A", &right, &mid, right.sandwich(&mid, Some(&counit), None)),
            ];
            ZigZag { legs, right_end: right, ry: iy }
        }
        IUpperILower => {
            let ry = ctx.i_lower(y)?;
            let left = HomComplex::new(&ctx.i_upper(x), y)?;
            let right = HomComplex::new(x, &ry)?;
            let legs = vec![Leg::new("restrict to C_Z", &right, &left, right.restriction(&left, cz))];
            ZigZag { legs, right_end: right, ry }
        }
        ILowerIShriek => {
            let ix = ctx.i_lower(x)?;
            let sh = ctx.i_shriek(y)?;
            let left = HomComplex::new(&ix, y)?;
            let mid = HomComplex::new(&ix, &sh.fib)?;
            let right = HomComplex::new(x, &sh.restricted)?;
            let legs = vec![
                Leg::new("postcompose fib -> Y", &mid, &left, mid.sandwich(&left, None, Some(&sh.projection))),
                Leg::new("restrict to C_Z", &mid, &right, mid.restriction(&right, cz)),
            ];
            ZigZag { legs, right_end: right, ry: sh.restricted }
        }
        JSharpJUpper => {
            let jy = ctx.j_upper(y);
            let left = HomComplex::new(&ctx.j_sharp(x)?, y)?;
            let right = HomComplex::new(x, &jy)?;
            let legs = vec![Leg::new("restrict to C_U", &left, &right, left.restriction(&right, cu))];
            ZigZag { legs, right_end: right, ry: jy }
        }
        JUpperJLower => {
            let ran = ctx.j_lower(y)?;
            let unit = ctx.j_lower_unit(y, &ran)?;
            let jx = ctx.j_upper(x);
            let left = HomComplex::new(&jx, y)?;
            let mid = HomComplex::new(&jx, &ctx.j_upper(&ran.diagram))?;
            let right = HomComplex::new(x, &ran.diagram)?;
            let legs = vec![
                Leg::new("postcompose B -> j^* j_* B", &left, &mid, left.sandwich(&mid, None, Some(&unit))),
                Leg::new("restrict to C_U", &right, &mid, right.restriction(&mid, cu)),
            ];
            ZigZag { legs, right_end: right, ry: ran.diagram }
        }
        JSharpLJSharp => {
            let sl = ctx.j_sharp_l(x)?;
            let jy = ctx.j_sharp(y)?;
            let left = HomComplex::new(&sl.restricted, y)?;
            let mid = HomComplex::new(&sl.cone.diagram, &jy)?;
            let right = HomComplex::new(x, &jy)?;
            let legs = vec![
                Leg::new("restrict to C_U", &mid, &left, mid.restriction(&left, cu)),
                Leg::new("precompose X -> cone", &mid, &right, mid.sandwich(&right, Some(&sl.cone.inclusion), None)),
            ];
            ZigZag { legs, right_end: right, ry: jy }
        }
        FlippedProjector => {
            let sl = ctx.j_sharp_l(x)?;
            let lx = ctx.j_sharp(&sl.restricted)?;
            let ry = ctx.j_sharp(&ctx.j_upper(y))?;
            let left = HomComplex::new(&lx, y)?;
            let mid = HomComplex::new(&sl.restricted, &ctx.j_upper(y))?;
            let cone_hom = HomComplex::new(&sl.cone.diagram, &ry)?;
            let right = HomComplex::new(x, &ry)?;
            let legs = vec![
                Leg::new("restrict to C_U", &left, &mid, left.restriction(&mid, cu)),
                Leg::new("restrict cone to C_U", &cone_hom, &mid, cone_hom.restriction(&mid, cu)),
                Leg::new(
                    "precompose X -> cone",
                    &cone_hom,
                    &right,
                    cone_hom.sandwich(&right, Some(&sl.cone.inclusion), None),
                ),
            ];
            ZigZag { legs, right_end: right, ry }
        }
    })
}

/// The zig-zag for `L ∘ [-1] -| [1] ∘ R`: the base zig-zag at
/// `(X[-1], Y)` followed by `rhom(X[-1], R Y) ≅ rhom(X, (R Y)[1])`.
pub fn shifted_zigzag<S: Scalar>(
    ctx: &RecollementCtx,
    pair: AdjointPair,
    x: &StratDiagram<S>,
    y: &StratDiagram<S>,
) -> Result<ZigZag<S>> {
    let mut z = zigzag(ctx, pair, &x.shift(-1), y)?;
    let ry1 = z.ry.shift(1);
    let target = HomComplex::new(x, &ry1)?;
    let iso = z.right_end.shift_iso(&target);
    z.legs.push(Leg::new("shift isomorphism", &z.right_end, &target, iso));
    z.right_end = target;
    z.ry = ry1;
    Ok(z)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionWitness {
    pub sample: usize,
    pub leg: String,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    pub pair: String,
    pub shifted: bool,
    pub samples: usize,
    pub failures: usize,
    pub witnesses: Vec<AdjunctionWitness>,
    pub passed: bool,
}

fn random_on<S: Scalar, R: rand::Rng>(
    ctx: &RecollementCtx,
    domain: char,
    rng: &mut R,
    cfg: &GenConfig,
) -> StratDiagram<S> {
    let strat = match domain {
        'Z' => ctx.closed_strat(),
        'U' => ctx.open_strat(),
        _ => ctx.strat().clone(),
    };
    random_diagram(rng, &strat, cfg)
}

/// Checks `pair` on `samples` random inputs; sample `k` uses
/// `sample_seed(seed, k)`.
pub fn check_adjunction<S: Scalar>(
    ctx: &RecollementCtx,
    pair: AdjointPair,
    samples: usize,
    seed: u64,
    cfg: &GenConfig,
    shifted: bool,
) -> AdjunctionReport {
    let (dx, dy) = pair.domains();
    let results: Vec<Option<AdjunctionWitness>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_from_seed(sample_seed(seed, k as u64));
            let x: StratDiagram<S> = random_on(ctx, dx, &mut rng, cfg);
            let y: StratDiagram<S> = random_on(ctx, dy, &mut rng, cfg);
            let z = if shifted {
                shifted_zigzag(ctx, pair, &x, &y)
            } else {
                zigzag(ctx, pair, &x, &y)
            };
            match z {
                Ok(z) => z.first_failure().map(|(leg, degree)| AdjunctionWitness {
                    sample: k,
                    leg: leg.to_string(),
                    degree,
                }),
                Err(e) => Some(AdjunctionWitness {
                    sample: k,
                    leg: format!("error: {e}"),
                    degree: 0,
                }),
            }
        })
        .collect();
    let witnesses: Vec<AdjunctionWitness> = results.into_iter().flatten().collect();
    AdjunctionReport {
        pair: pair.name().to_string(),
        shifted,
        samples,
        failures: witnesses.len(),
        passed: witnesses.is_empty(),
        witnesses: witnesses.into_iter().take(5).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::DiagramMap;
    use crate::field::{Fp, Q};
    use crate::poset::{FinPoset, MonotoneMap};
    use std::sync::Arc;

    fn interval_ctx() -> RecollementCtx {
        RecollementCtx::from_ids(MonotoneMap::identity(Arc::new(FinPoset::chain(2))), &["0"]).unwrap()
    }

    #[test]
    fn all_pairs_on_interval() {
        let ctx = interval_ctx();
        for pair in AdjointPair::ALL {
            let r = check_adjunction::<Q>(&ctx, pair, 4, 5, &GenConfig::small(), false);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn shifted_pairs_on_v_poset() {
        let v = FinPoset::from_indices(3, &[(0, 2), (1, 2)]).unwrap();
        let ctx = RecollementCtx::minimal(MonotoneMap::identity(Arc::new(v))).unwrap();
        for pair in AdjointPair::ALL {
            let r = check_adjunction::<Fp<101>>(&ctx, pair, 2, 9, &GenConfig::small(), true);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn a_wrong_counit_is_caught() {
        // replacing the counit by zero breaks the i_# -| i^* zig-zag
        let ctx = interval_ctx();
        let a = StratDiagram::<Q>::constant(ctx.closed_strat(), &ChainComplex::unit());
        let y = StratDiagram::<Q>::constant(ctx.strat().clone(), &ChainComplex::unit());
        let lan = ctx.i_sharp(&a).unwrap();
        let iy = ctx.i_upper(&y);
        let mid = HomComplex::new(&ctx.i_upper(&lan.diagram), &iy).unwrap();
        let right = HomComplex::new(&a, &iy).unwrap();
        let zero = DiagramMap::zero(a.len());
        let leg = Leg::new("zero", &right, &mid, right.sandwich(&mid, Some(&zero), None));
        assert!(leg.failure().is_some());
    }
}
