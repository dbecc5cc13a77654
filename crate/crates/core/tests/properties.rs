use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use strata_core::chain::{cone, ChainComplex, ChainMap};
use strata_core::diagram::{pointwise_cone, StratDiagram};
use strata_core::field::{Fp, Q};
use strata_core::ingest::{stratum_fiber, SimplicialJson, StratSimplicialComplex, VertexJson};
use strata_core::k0::{k0_class, restrict_to_image, verify_splitting, SplitOrder};
use strata_core::kan::{
    closed_extension_comparison, colim_cofinality, ho_lan, ho_ran, lim_cofinality, open_extension_comparison,
};
use strata_core::matrix::Matrix;
use strata_core::poset::{FinPoset, MonotoneMap, PosetJson, Subposet};
use strata_core::random::{
    random_complex, random_diagram, random_poset, random_strat, rng_from_seed, GenConfig, SampleRng,
};
use strata_core::recollement::RecollementCtx;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

fn down_set(p: &FinPoset, x: usize) -> Subposet {
    p.subposet((0..p.len()).filter(|&y| p.leq(y, x))).unwrap()
}

fn random_matrix(rng: &mut SampleRng, rows: usize, cols: usize) -> Matrix<Q> {
    let entries: Vec<i64> = (0..rows * cols).map(|_| rng.random_range(-2..=2)).collect();
    Matrix::from_i64(rows, cols, &entries)
}

/// `a * id + d h + h d` for a random `h`.
fn random_endomorphism(rng: &mut SampleRng, x: &ChainComplex<Q>) -> ChainMap<Q> {
    let a = Q::new(rng.random_range(0..=2i64), 1);
    let mut h = BTreeMap::new();
    for n in x.lo() - 1..=x.hi() {
        h.insert(n, random_matrix(rng, x.dim(n + 1), x.dim(n)));
    }
    let zero = |r, c| Matrix::<Q>::zeros(r, c);
    let mut comps = BTreeMap::new();
    for n in x.degrees() {
        let dim = x.dim(n);
        let dh = x.d_matrix(n + 1).mul(&h[&n]);
        let hd = match h.get(&(n - 1)) {
            Some(m) => m.mul(&x.d_matrix(n)),
            None => zero(dim, dim),
        };
        comps.insert(n, Matrix::identity(dim).scale(&a).add(&dh).add(&hd));
    }
    ChainMap::new(x, x, comps).unwrap()
}

/// A random diagram over a random stratified poset together with a random
/// closed set of strata.
fn random_setup(seed: u64, n: usize) -> (RecollementCtx, StratDiagram<Q>, SampleRng) {
    let mut rng = rng_from_seed(seed);
    let shape = Arc::new(random_poset(&mut rng, n, 0.45));
    let strat = random_strat(&mut rng, shape);
    let p = strat.target().clone();
    let top = rng.random_range(0..p.len());
    let ctx = RecollementCtx::new(strat.clone(), down_set(&p, top)).unwrap();
    let f = random_diagram(&mut rng, &strat, &GenConfig::small());
    (ctx, f, rng)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn complements_swap_closed_and_open(seed: u64, n in 1usize..8) {
        let mut rng = rng_from_seed(seed);
        let p = random_poset(&mut rng, n, 0.4);
        let x = rng.random_range(0..n);
        let closed = down_set(&p, x);
        prop_assert!(p.is_open(&p.complement(&closed)).unwrap());
        let up = p.subposet((0..n).filter(|&y| p.leq(x, y))).unwrap();
        prop_assert!(p.is_closed(&p.complement(&up)).unwrap());
    }

    #[test]
    fn removing_minimal_elements_drops_dimension(seed: u64, n in 1usize..8) {
        let mut rng = rng_from_seed(seed);
        let p = random_poset(&mut rng, n, 0.4);
        let m = p.minimal_elements();
        prop_assert!(p.is_closed(&m).unwrap());
        let rest = p.full_subposet(&p.complement(&m));
        prop_assert_eq!(rest.krull_dim(), p.krull_dim() - 1);
    }

    #[test]
    fn comma_down_matches_brute_force(seed: u64, n in 1usize..9, m in 1usize..5) {
        let mut rng = rng_from_seed(seed);
        let src = Arc::new(random_poset(&mut rng, n, 0.4));
        let tgt = Arc::new(FinPoset::chain(m));
        // a height function is monotone into a long enough chain
        let values: Vec<usize> = (0..n)
            .map(|x| (0..n).filter(|&y| src.lt(y, x)).count().min(m - 1))
            .collect();
        let mut fixed = values.clone();
        for &x in &src.linear_extension() {
            for y in 0..n {
                if src.lt(y, x) {
                    fixed[x] = fixed[x].max(fixed[y]);
                }
            }
        }
        let f = MonotoneMap::new(src.clone(), tgt, fixed.clone()).unwrap();
        for d in 0..m {
            let expect: Vec<usize> = (0..n).filter(|&x| fixed[x] <= d).collect();
            let down = f.comma_down(d).unwrap();
            prop_assert_eq!(down.members(), expect.as_slice());
            let expect: Vec<usize> = (0..n).filter(|&x| fixed[x] >= d).collect();
            let up = f.comma_up(d).unwrap();
            prop_assert_eq!(up.members(), expect.as_slice());
        }
    }

    #[test]
    fn shift_moves_homology(seed: u64, k in -3i32..=3) {
        let mut rng = rng_from_seed(seed);
        let x: ChainComplex<Q> = random_complex(&mut rng, &GenConfig::default());
        let y = x.shift(k);
        prop_assert!(y.d_squared_witness().is_none());
        for n in x.lo() - 1..=x.hi() + 1 {
            prop_assert_eq!(y.homology(n + k), x.homology(n));
        }
    }

    #[test]
    fn quasi_isomorphisms_preserve_euler_char_and_cones_are_exact(seed: u64) {
        let mut rng = rng_from_seed(seed);
        let x: ChainComplex<Q> = random_complex(&mut rng, &GenConfig::default());
        // X -> X + cone(id_Z) is a quasi-isomorphism onto a bigger complex
        let z: ChainComplex<Q> = random_complex(&mut rng, &GenConfig::small());
        let w = cone(&ChainMap::identity(&z), &z, &z).complex;
        let big = x.direct_sum(&w);
        let mut comps = BTreeMap::new();
        for n in x.degrees() {
            let mut m = Matrix::zeros(big.dim(n), x.dim(n));
            m.set_block(0, 0, &Matrix::identity(x.dim(n)));
            comps.insert(n, m);
        }
        let inc = ChainMap::new(&x, &big, comps).unwrap();
        prop_assert!(inc.is_quasi_iso(&x, &big));
        prop_assert_eq!(x.euler_char(), big.euler_char());
        let f = random_endomorphism(&mut rng, &x);
        if f.is_quasi_iso(&x, &x) {
            prop_assert!(cone(&f, &x, &x).complex.is_acyclic());
        }
        // H_n X -> H_n X -> H_n C -> H_{n-1} X is exact
        let c = cone(&f, &x, &x);
        prop_assert!(c.complex.d_squared_witness().is_none());
        for n in x.lo() - 1..=x.hi() + 1 {
            let rf = f.homology_rank(&x, &x, n).rank;
            let ri = c.inclusion.homology_rank(&x, &c.complex, n).rank;
            prop_assert_eq!(x.homology(n), rf + ri);
            let connecting = c.complex.homology(n) - ri;
            let rf_below = f.homology_rank(&x, &x, n - 1).rank;
            prop_assert_eq!(x.homology(n - 1), connecting + rf_below);
        }
    }

    #[test]
    fn engine_outputs_validate(seed: u64, n in 1usize..6) {
        let (ctx, f, mut rng) = random_setup(seed, n);
        prop_assert!(f.validate().valid);
        let a = random_diagram::<Q, _>(&mut rng, &ctx.closed_strat(), &GenConfig::small());
        let b = random_diagram::<Q, _>(&mut rng, &ctx.open_strat(), &GenConfig::small());
        let sl = ctx.j_sharp_l(&f).unwrap();
        let outputs = [
            ctx.i_lower(&a).unwrap(),
            ctx.j_sharp(&b).unwrap(),
            ctx.i_sharp(&a).unwrap().diagram,
            ctx.j_lower(&b).unwrap().diagram,
            ctx.i_shriek(&f).unwrap().fib,
            sl.lan.diagram.clone(),
            sl.cone.diagram.clone(),
            sl.restricted.clone(),
            ctx.i_sharp_via_fib(&a).unwrap().fib,
        ];
        for (k, d) in outputs.iter().enumerate() {
            let v = d.validate();
            prop_assert!(v.valid, "output {} invalid: {:?}", k, v.violations);
        }
    }

    #[test]
    fn restriction_commutes_with_cones(seed: u64, n in 1usize..6) {
        let (ctx, f, _) = random_setup(seed, n);
        let sl = ctx.j_sharp_l(&f).unwrap();
        let (src, phi) = (&sl.lan.diagram, &sl.counit);
        for sub in [ctx.closed_part(), ctx.open_part()] {
            let a = sl.cone.diagram.restrict(sub);
            let b = pointwise_cone(&phi.restrict(sub), &src.restrict(sub), &f.restrict(sub)).diagram;
            prop_assert_eq!(a.to_json(), b.to_json());
        }
    }

    #[test]
    fn quasi_isomorphic_diagrams_share_classes(seed: u64, n in 1usize..6) {
        let (ctx, _, mut rng) = random_setup(seed, n);
        let a = random_diagram::<Q, _>(&mut rng, &ctx.closed_strat(), &GenConfig::small());
        let v = ctx.i_sharp_via_fib(&a).unwrap();
        prop_assert!(v.comparison.is_pointwise_qis(&v.direct.diagram, &v.fib));
        prop_assert_eq!(k0_class(&v.direct.diagram), k0_class(&v.fib));
    }

    #[test]
    fn cofinality_at_extremes(seed: u64, n in 1usize..7) {
        let mut rng = rng_from_seed(seed);
        let inner = random_poset(&mut rng, n, 0.4);
        let mut rels: Vec<(usize, usize)> = inner.relations().iter().map(|&(a, b)| (a, b)).collect();
        for x in 0..n {
            rels.push((x, n));
        }
        let shape = Arc::new(FinPoset::from_indices(n + 1, &rels).unwrap());
        let f: StratDiagram<Fp<101>> = random_diagram(&mut rng, &MonotoneMap::identity(shape.clone()), &GenConfig::small());
        prop_assert_eq!(colim_cofinality(&f), Some(true));
        let dual: Vec<(usize, usize)> = rels.iter().map(|&(a, b)| (b, a)).collect();
        let shape = Arc::new(FinPoset::from_indices(n + 1, &dual).unwrap());
        let g: StratDiagram<Fp<101>> = random_diagram(&mut rng, &MonotoneMap::identity(shape), &GenConfig::small());
        prop_assert_eq!(lim_cofinality(&g), Some(true));
    }

    #[test]
    fn extensions_by_zero_agree_with_kan_extensions(seed: u64, n in 1usize..6) {
        let (ctx, _, mut rng) = random_setup(seed, n);
        let a = random_diagram::<Q, _>(&mut rng, &ctx.closed_strat(), &GenConfig::small());
        let b = random_diagram::<Q, _>(&mut rng, &ctx.open_strat(), &GenConfig::small());
        let (ext, ran, map) = closed_extension_comparison(ctx.strat(), ctx.closed_part(), &a).unwrap();
        prop_assert!(map.is_pointwise_qis(&ext, &ran.diagram));
        let (ext, lan, map) = open_extension_comparison(ctx.strat(), ctx.open_part(), &b).unwrap();
        prop_assert!(map.is_pointwise_qis(&lan.diagram, &ext));
    }

    #[test]
    fn inclusions_are_fully_faithful(seed: u64, n in 1usize..6) {
        let mut rng = rng_from_seed(seed);
        let c = Arc::new(random_poset(&mut rng, n, 0.45));
        let k = rng.random_range(1..=n);
        let sub = c.subposet((0..n).filter(|_| rng.random_bool(0.6)).chain([k - 1])).unwrap();
        let inc = MonotoneMap::inclusion(c.clone(), &sub);
        let g: StratDiagram<Q> = random_diagram(&mut rng, &MonotoneMap::identity(inc.source().clone()), &GenConfig::small());
        let lan = ho_lan(&inc, &g).unwrap();
        let ran = ho_ran(&inc, &g).unwrap();
        let back_l = lan.diagram.restrict(&sub);
        let back_r = ran.diagram.restrict(&sub);
        prop_assert_eq!(back_l.euler_vector(), g.euler_vector());
        prop_assert_eq!(back_r.euler_vector(), g.euler_vector());
        for x in 0..g.len() {
            prop_assert_eq!(back_l.value(x).betti(), g.value(x).betti());
            prop_assert_eq!(back_r.value(x).betti(), g.value(x).betti());
        }
    }

    #[test]
    fn flipped_triangle_is_additive(seed: u64, n in 1usize..6) {
        let (ctx, f, _) = random_setup(seed, n);
        let left = ctx.i_sharp(&ctx.i_upper(&f)).unwrap().diagram;
        let right = ctx.j_sharp(&ctx.j_sharp_l(&f).unwrap().restricted).unwrap();
        let sum: Vec<i64> = left.euler_vector().iter().zip(right.euler_vector()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(f.euler_vector(), sum);
    }

    #[test]
    fn splitting_identity_depth_and_refinement(seed: u64, n in 1usize..7) {
        let mut rng = rng_from_seed(seed);
        let shape = Arc::new(random_poset(&mut rng, n, 0.45));
        let strat = random_strat(&mut rng, shape);
        let f: StratDiagram<Q> = random_diagram(&mut rng, &strat, &GenConfig::small());
        let r = verify_splitting(&f, SplitOrder::Minimal).unwrap();
        prop_assert!(r.passed);
        prop_assert_eq!(r.depth as i64, f.strata().krull_dim() + 1);
        let img = verify_splitting(&restrict_to_image(&f).unwrap(), SplitOrder::Minimal).unwrap();
        let full: Vec<_> = r.pieces.iter().filter(|p| !p.elements.is_empty()).map(|p| p.extended_class.clone()).collect();
        let coarse: Vec<_> = img.pieces.iter().map(|p| p.extended_class.clone()).collect();
        prop_assert_eq!(full, coarse);
    }

    #[test]
    fn ingested_complexes_are_well_stratified(seed: u64, nv in 1usize..6, levels in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let strata: Vec<String> = (0..levels).map(|i| i.to_string()).collect();
        let leq = (1..levels).map(|i| ((i - 1).to_string(), i.to_string())).collect();
        let vertices: Vec<VertexJson> = (0..nv)
            .map(|v| VertexJson { id: format!("v{v}"), stratum: rng.random_range(0..levels).to_string() })
            .collect();
        let simplices: Vec<Vec<String>> = (0..3)
            .map(|_| (0..nv).filter(|_| rng.random_bool(0.5)).map(|v| format!("v{v}")).collect::<Vec<_>>())
            .filter(|s| !s.is_empty())
            .collect();
        let j = SimplicialJson { strata_poset: PosetJson { elements: strata, leq }, vertices, simplices };
        let k = StratSimplicialComplex::from_json(&j).unwrap();
        let s = k.face_poset().unwrap();
        let c = s.source();
        for (a, b) in c.relations() {
            prop_assert!(s.target().leq(s.apply(a), s.apply(b)));
        }
        for p in 0..levels {
            let closed = s.preimage(&down_set(s.target(), p));
            prop_assert!(c.is_closed(&closed).unwrap());
        }
        prop_assert_eq!(c.nerve_euler_char(), k.euler_char());
        let total: usize = (0..levels).map(|p| stratum_fiber(&s, p).0.len()).sum();
        prop_assert_eq!(total, c.len());
    }
}
