//! The recollement attached to a closed subset `Z` of the strata poset and
//! its open complement `U`, together with the flipped recollement in which
//! `U` plays the closed role.
//!
//! Every functor has a strict model:
//!
//! | functor   | model                                                    |
//! |-----------|----------------------------------------------------------|
//! | `i^*`     | restriction to `C_Z`                                     |
//! | `j^*`     | restriction to `C_U`                                     |
//! | `i_*`     | extension by zero from `C_Z`                             |
//! | `j_#`     | extension by zero from `C_U`                             |
//! | `j_*`     | homotopy right Kan extension along `C_U -> C`            |
//! | `i_#`     | homotopy left Kan extension along `C_Z -> C`             |
//! | `i^!`     | `i^* fib(F -> j_* j^* F)`                                |
//! | `j_#^L`   | `j^* cone(i_# i^* F -> F)`                               |

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{self, ChainMap};
use crate::diagram::{pointwise_cone, pointwise_fib, DiagramCone, DiagramMap, StratDiagram};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::kan::{self, KanExtension};
use crate::matrix::Matrix;
use crate::poset::{FinPoset, MonotoneMap, Subposet};
use crate::random::{random_diagram, rng_from_seed, sample_seed, GenConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecollementCtx {
    strat: MonotoneMap,
    z: Subposet,
    u: Subposet,
    cz: Subposet,
    cu: Subposet,
    i: MonotoneMap,
    j: MonotoneMap,
}

impl RecollementCtx {
    /// `z` must be a closed subset of the strata poset.
    pub fn new(strat: MonotoneMap, z: Subposet) -> Result<Self> {
        let p = strat.target().clone();
        p.require_closed(&z)?;
        let u = p.complement(&z);
        let c = strat.source().clone();
        let cz = strat.preimage(&z);
        let cu = strat.preimage(&u);
        c.require_closed(&cz)?;
        c.require_open(&cu)?;
        let i = MonotoneMap::inclusion(c.clone(), &cz);
        let j = MonotoneMap::inclusion(c, &cu);
        Ok(RecollementCtx {
            strat,
            z,
            u,
            cz,
            cu,
            i,
            j,
        })
    }

    pub fn from_ids<T: AsRef<str>>(strat: MonotoneMap, closed: &[T]) -> Result<Self> {
        let z = strat.target().subposet_by_ids(closed)?;
        Self::new(strat, z)
    }

    /// `Z` = the minimal strata.
    pub fn minimal(strat: MonotoneMap) -> Result<Self> {
        let z = strat.target().minimal_elements();
        Self::new(strat, z)
    }

    pub fn strat(&self) -> &MonotoneMap {
        &self.strat
    }

    pub fn shape(&self) -> &Arc<FinPoset> {
        self.strat.source()
    }

    pub fn closed_strata(&self) -> &Subposet {
        &self.z
    }

    pub fn open_strata(&self) -> &Subposet {
        &self.u
    }

    pub fn closed_part(&self) -> &Subposet {
        &self.cz
    }

    pub fn open_part(&self) -> &Subposet {
        &self.cu
    }

    pub fn closed_strat(&self) -> MonotoneMap {
        self.strat.restrict(&self.cz)
    }

    pub fn open_strat(&self) -> MonotoneMap {
        self.strat.restrict(&self.cu)
    }

    fn check_ambient<S: Scalar>(&self, f: &StratDiagram<S>) -> Result<()> {
        if f.strat() != &self.strat {
            return Err(Error::Shape("diagram is not over the recollement's shape".into()));
        }
        Ok(())
    }

    pub fn i_upper<S: Scalar>(&self, f: &StratDiagram<S>) -> StratDiagram<S> {
        f.restrict(&self.cz)
    }

    pub fn j_upper<S: Scalar>(&self, f: &StratDiagram<S>) -> StratDiagram<S> {
        f.restrict(&self.cu)
    }

    pub fn i_lower<S: Scalar>(&self, a: &StratDiagram<S>) -> Result<StratDiagram<S>> {
        kan::extend_zero_closed(&self.strat, &self.cz, a)
    }

    pub fn j_sharp<S: Scalar>(&self, b: &StratDiagram<S>) -> Result<StratDiagram<S>> {
        kan::extend_zero_open(&self.strat, &self.cu, b)
    }

    fn restratify<S: Scalar>(&self, mut k: KanExtension<S>) -> Result<KanExtension<S>> {
        k.diagram = k.diagram.with_strat(self.strat.clone())?;
        Ok(k)
    }

    pub fn j_lower<S: Scalar>(&self, b: &StratDiagram<S>) -> Result<KanExtension<S>> {
        self.restratify(kan::ho_ran(&self.j, b)?)
    }

    pub fn i_sharp<S: Scalar>(&self, a: &StratDiagram<S>) -> Result<KanExtension<S>> {
        self.restratify(kan::ho_lan(&self.i, a)?)
    }

    /// Unit `F -> j_* j^* F`.
    pub fn eta<S: Scalar>(&self, f: &StratDiagram<S>) -> Result<(KanExtension<S>, DiagramMap<S>)> {
        self.check_ambient(f)?;
        let ran = self.j_lower(&self.j_upper(f))?;
        let unit = kan::ran_unit(&self.j, f, &ran)?;
        Ok((ran, unit))
    }

    /// Counit `i_# i^* F -> F`.
    pub fn epsilon<S: Scalar>(
        &self,
        f: &StratDiagram<S>,
    ) -> Result<(KanExtension<S>, DiagramMap<S>)> {
        self.check_ambient(f)?;
        let lan = self.i_sharp(&self.i_upper(f))?;
        let counit = kan::lan_counit(&self.i, f, &lan)?;
        Ok((lan, counit))
    }

    /// `i^* i_# A -> A`.
    pub fn i_sharp_counit<S: Scalar>(
        &self,
        a: &StratDiagram<S>,
        lan: &KanExtension<S>,
    ) -> Result<DiagramMap<S>> {
        let comps = (0..a.len())
            .map(|x| lan.totals[self.i.apply(x)].augmentation(a, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagramMap::new(comps))
    }

    /// `B -> j^* j_* B`.
    pub fn j_lower_unit<S: Scalar>(
        &self,
        b: &StratDiagram<S>,
        ran: &KanExtension<S>,
    ) -> Result<DiagramMap<S>> {
        kan::restricted_unit(&self.j, b, ran)
    }

    /// `i^! F`, with the fibre of the unit it is cut out of.
    pub fn i_shriek<S: Scalar>(&self, f: &StratDiagram<S>) -> Result<Shriek<S>> {
        let (ran, eta) = self.eta(f)?;
        let (fib, projection) = pointwise_fib(&eta, f, &ran.diagram);
        let restricted = self.i_upper(&fib);
        Ok(Shriek {
            fib,
            projection,
            restricted,
        })
    }

    /// `j_#^L F`, with the cone of the counit it is cut out of.
    pub fn j_sharp_l<S: Scalar>(&self, f: &StratDiagram<S>) -> Result<SharpL<S>> {
        let (lan, counit) = self.epsilon(f)?;
        let cone = pointwise_cone(&counit, &lan.diagram, f);
        let restricted = self.j_upper(&cone.diagram);
        Ok(SharpL {
            lan,
            counit,
            cone,
            restricted,
        })
    }

    /// `i_# A` recomputed as `fib(i_* A -> j_# j_#^L i_* A)`, where the
    /// second term is modelled by the cone of the counit. Returns the
    /// direct Kan extension and a comparison map from it.
    pub fn i_sharp_via_fib<S: Scalar>(&self, a: &StratDiagram<S>) -> Result<ViaFib<S>> {
        let g = self.i_lower(a)?;
        let sl = self.j_sharp_l(&g)?;
        let k = &sl.cone;
        let (fib, _) = pointwise_fib(&k.inclusion, &g, &k.diagram);
        // fib_n = G_{n+1} (+) L_n (+) G_n; l maps to (0, l, -counit(l))
        let comps = (0..g.len())
            .map(|c| {
                let l = sl.lan.diagram.value(c);
                let gc = g.value(c);
                let fc = fib.value(c);
                let mut comps = std::collections::BTreeMap::new();
                for n in l.degrees() {
                    let mut m = Matrix::zeros(fc.dim(n), l.dim(n));
                    let off = gc.dim(n + 1);
                    for t in 0..l.dim(n) {
                        m[(off + t, t)] = S::one();
                    }
                    if let Some(e) = sl.counit.comp(c).comp(n) {
                        m.set_block(off + l.dim(n), 0, &e.neg());
                    }
                    comps.insert(n, m);
                }
                ChainMap::new(l, fc, comps).expect("comparison is a chain map")
            })
            .collect();
        let comparison = DiagramMap::new(comps);
        Ok(ViaFib {
            fib,
            direct: sl.lan,
            comparison,
        })
    }

    /// Identity on `C_Z`, zero elsewhere: `F -> i_* i^* F`.
    pub fn closed_quotient<S: Scalar>(&self, f: &StratDiagram<S>) -> DiagramMap<S> {
        DiagramMap::new(
            (0..f.len())
                .map(|c| {
                    if self.cz.contains(c) {
                        ChainMap::identity(f.value(c))
                    } else {
                        ChainMap::zero()
                    }
                })
                .collect(),
        )
    }

    /// Identity on `C_U`, zero elsewhere: `j_# j^* F -> F`.
    pub fn open_inclusion<S: Scalar>(&self, f: &StratDiagram<S>) -> DiagramMap<S> {
        DiagramMap::new(
            (0..f.len())
                .map(|c| {
                    if self.cu.contains(c) {
                        ChainMap::identity(f.value(c))
                    } else {
                        ChainMap::zero()
                    }
                })
                .collect(),
        )
    }

    /// Exactness of the three localization triangles at `F`:
    /// `T1: j_# j^* F -> F -> i_* i^* F`,
    /// `T2: i_* i^! F -> F -> j_* j^* F`,
    /// `T3: i_# i^* F -> F -> j_# j_#^L F`.
    /// Each is checked through a strict comparison map whose pointwise
    /// cone must be acyclic.
    pub fn localization_triangles<S: Scalar>(
        &self,
        f: &StratDiagram<S>,
    ) -> Result<Vec<TriangleReport>> {
        self.check_ambient(f)?;
        let names = self.shape().ids();
        // T1: cone(j_# j^* F -> F) -> i_* i^* F
        let jj = self.j_sharp(&self.j_upper(f))?;
        let c1 = pointwise_cone(&self.open_inclusion(f), &jj, f);
        let q1 = self.closed_quotient(&c1.diagram);
        let t1 = TriangleReport::from_map(
            "T1",
            names,
            &q1,
            &c1.diagram,
            &self.i_lower(&self.i_upper(&c1.diagram))?,
        );
        // T2: fib(F -> j_* j^* F) -> i_* i^! F
        let sh = self.i_shriek(f)?;
        let q2 = self.closed_quotient(&sh.fib);
        let t2 = TriangleReport::from_map(
            "T2",
            names,
            &q2,
            &sh.fib,
            &self.i_lower(&sh.restricted)?,
        );
        // T3: j_# j_#^L F -> cone(i_# i^* F -> F)
        let sl = self.j_sharp_l(f)?;
        let ext = self.j_sharp(&sl.restricted)?;
        let incl = self.open_inclusion(&sl.cone.diagram);
        let t3 = TriangleReport::from_map("T3", names, &incl, &ext, &sl.cone.diagram);
        Ok(vec![t1, t2, t3])
    }

    /// Runs the axiom suite of both recollements on `samples` random
    /// diagrams. Sample `k` is drawn from `sample_seed(seed, k)`.
    pub fn check_axioms<S: Scalar>(
        &self,
        samples: usize,
        seed: u64,
        cfg: &GenConfig,
    ) -> RecollementReport {
        let outcomes: Vec<Vec<(usize, Option<String>)>> = (0..samples)
            .into_par_iter()
            .map(|k| {
                let mut rng = rng_from_seed(sample_seed(seed, k as u64));
                self.check_sample::<S, _>(&mut rng, cfg)
            })
            .collect();
        let mut axioms: Vec<AxiomResult> = AXIOMS
            .iter()
            .map(|&(name, recollement)| AxiomResult {
                name: name.to_string(),
                recollement: recollement.to_string(),
                checked: 0,
                failures: 0,
                witnesses: Vec::new(),
            })
            .collect();
        for (k, outcome) in outcomes.into_iter().enumerate() {
            for (a, failure) in outcome {
                let entry = &mut axioms[a];
                entry.checked += 1;
                if let Some(detail) = failure {
                    entry.failures += 1;
                    if entry.witnesses.len() < 5 {
                        entry.witnesses.push(Witness { sample: k, detail });
                    }
                }
            }
        }
        RecollementReport {
            closed: self.z.ids(self.strat.target()).iter().map(|s| s.to_string()).collect(),
            open: self.u.ids(self.strat.target()).iter().map(|s| s.to_string()).collect(),
            samples,
            seed,
            passed: axioms.iter().all(|a| a.failures == 0),
            axioms,
        }
    }

    fn check_sample<S: Scalar, R: Rng>(
        &self,
        rng: &mut R,
        cfg: &GenConfig,
    ) -> Vec<(usize, Option<String>)> {
        let f: StratDiagram<S> = random_diagram(rng, &self.strat, cfg);
        let a: StratDiagram<S> = random_diagram(rng, &self.closed_strat(), cfg);
        let b: StratDiagram<S> = random_diagram(rng, &self.open_strat(), cfg);
        let mut out = Vec::new();
        let mut record = |name: &str, r: Result<Option<String>>| {
            let idx = AXIOMS
                .iter()
                .position(|&(n, _)| n == name)
                .expect("axiom is registered");
            out.push((idx, r.unwrap_or_else(|e| Some(format!("error: {e}")))));
        };
        let names = self.shape().ids();
        let closed_names: Vec<&str> = self.cz.ids(self.shape());
        let open_names: Vec<&str> = self.cu.ids(self.shape());

        record("j_upper_i_lower_zero", (|| {
            let x = self.j_upper(&self.i_lower(&a)?);
            Ok(nonzero_witness(&x, &open_names))
        })());
        record("i_upper_j_sharp_zero", (|| {
            let x = self.i_upper(&self.j_sharp(&b)?);
            Ok(nonzero_witness(&x, &closed_names))
        })());
        record("i_lower_fully_faithful", (|| {
            let back = self.i_upper(&self.i_lower(&a)?);
            Ok((back != a).then(|| "i^* i_* A differs from A".to_string()))
        })());
        record("j_sharp_fully_faithful", (|| {
            let back = self.j_upper(&self.j_sharp(&b)?);
            Ok((back != b).then(|| "j^* j_# B differs from B".to_string()))
        })());
        record("j_lower_fully_faithful", (|| {
            let ran = self.j_lower(&b)?;
            let unit = self.j_lower_unit(&b, &ran)?;
            let back = self.j_upper(&ran.diagram);
            Ok(map_witness(&unit, &b, &back, &open_names, "B -> j^* j_* B"))
        })());
        record("i_sharp_fully_faithful", (|| {
            let lan = self.i_sharp(&a)?;
            let counit = self.i_sharp_counit(&a, &lan)?;
            let back = self.i_upper(&lan.diagram);
            Ok(map_witness(&counit, &back, &a, &closed_names, "i^* i_# A -> A"))
        })());
        record("joint_conservativity", (|| {
            for (label, x) in self.conservativity_probes(&f)? {
                let premise =
                    self.i_upper(&x).is_pointwise_acyclic() && self.j_upper(&x).is_pointwise_acyclic();
                if premise != x.is_pointwise_acyclic() {
                    return Ok(Some(format!("(i^*, j^*) misjudges acyclicity of {label}")));
                }
            }
            Ok(None)
        })());
        record("triangle_T1", self.triangle_witness(&f, 0));
        record("triangle_T2", self.triangle_witness(&f, 1));
        record("triangle_T3", self.triangle_witness(&f, 2));
        record("j_sharp_l_j_sharp_identity", (|| {
            let g = self.j_sharp(&b)?;
            let sl = self.j_sharp_l(&g)?;
            let incl = self.j_upper_map(&sl.cone.inclusion);
            Ok(map_witness(&incl, &b, &sl.restricted, &open_names, "B -> j_#^L j_# B"))
        })());
        record("flipped_joint_conservativity", (|| {
            for (label, x) in self.conservativity_probes(&f)? {
                let sl = self.j_sharp_l(&x)?;
                let premise =
                    self.i_upper(&x).is_pointwise_acyclic() && sl.restricted.is_pointwise_acyclic();
                if premise != x.is_pointwise_acyclic() {
                    return Ok(Some(format!(
                        "(j_#^L, i^*) misjudges acyclicity of {label}"
                    )));
                }
            }
            Ok(None)
        })());
        record("i_sharp_via_fib", (|| {
            let vf = self.i_sharp_via_fib(&a)?;
            Ok(map_witness(
                &vf.comparison,
                &vf.direct.diagram,
                &vf.fib,
                names,
                "i_# A -> fib(i_* A -> j_# j_#^L i_* A)",
            ))
        })());
        out
    }

    fn j_upper_map<S: Scalar>(&self, m: &DiagramMap<S>) -> DiagramMap<S> {
        m.restrict(&self.cu)
    }

    /// Diagrams whose acyclicity the conservativity axioms must detect:
    /// `F`, the acyclic `cone(id_F)`, and the extensions by zero of the two
    /// restrictions of `F`.
    fn conservativity_probes<S: Scalar>(
        &self,
        f: &StratDiagram<S>,
    ) -> Result<Vec<(&'static str, StratDiagram<S>)>> {
        let id = DiagramMap::identity(f);
        Ok(vec![
            ("F", f.clone()),
            ("cone(id_F)", pointwise_cone(&id, f, f).diagram),
            ("i_* i^* F", self.i_lower(&self.i_upper(f))?),
            ("j_# j^* F", self.j_sharp(&self.j_upper(f))?),
        ])
    }

    fn triangle_witness<S: Scalar>(&self, f: &StratDiagram<S>, which: usize) -> Result<Option<String>> {
        let reports = self.localization_triangles(f)?;
        let r = &reports[which];
        Ok(r.failures.first().map(|w| {
            format!(
                "{}: cone homology {} in degree {} at {}",
                r.triangle, w.dim, w.degree, w.element
            )
        }))
    }
}

const AXIOMS: &[(&str, &str)] = &[
    ("j_upper_i_lower_zero", "original"),
    ("i_lower_fully_faithful", "original"),
    ("j_lower_fully_faithful", "original"),
    ("joint_conservativity", "original"),
    ("triangle_T1", "original"),
    ("triangle_T2", "original"),
    ("i_upper_j_sharp_zero", "flipped"),
    ("j_sharp_fully_faithful", "flipped"),
    ("i_sharp_fully_faithful", "flipped"),
    ("j_sharp_l_j_sharp_identity", "flipped"),
    ("flipped_joint_conservativity", "flipped"),
    ("triangle_T3", "flipped"),
    ("i_sharp_via_fib", "flipped"),
];

fn nonzero_witness<S: Scalar>(x: &StratDiagram<S>, names: &[&str]) -> Option<String> {
    (0..x.len())
        .find(|&c| !x.value(c).is_zero())
        .map(|c| format!("nonzero value at {}", names[c]))
}

fn map_witness<S: Scalar>(
    m: &DiagramMap<S>,
    src: &StratDiagram<S>,
    tgt: &StratDiagram<S>,
    names: &[impl AsRef<str>],
    what: &str,
) -> Option<String> {
    if let Some(w) = m.naturality_witness(src, tgt) {
        return Some(format!("{what}: {w}"));
    }
    let bad = m.non_qis_elements(src, tgt);
    bad.first().map(|&c| {
        let ranks = m.comp(c).homology_ranks(src.value(c), tgt.value(c));
        let deg = ranks
            .iter()
            .find(|r| !r.is_iso())
            .map_or(0, |r| r.degree);
        format!(
            "{what} is not a quasi-isomorphism at {} in degree {deg}",
            names[c].as_ref()
        )
    })
}

/// `i^! F` and the fibre of the unit `F -> j_* j^* F`.
#[derive(Clone, Debug)]
pub struct Shriek<S> {
    pub fib: StratDiagram<S>,
    pub projection: DiagramMap<S>,
    pub restricted: StratDiagram<S>,
}

/// `j_#^L F` and the cone of the counit `i_# i^* F -> F`.
#[derive(Clone, Debug)]
pub struct SharpL<S> {
    pub lan: KanExtension<S>,
    pub counit: DiagramMap<S>,
    pub cone: DiagramCone<S>,
    pub restricted: StratDiagram<S>,
}

#[derive(Clone, Debug)]
pub struct ViaFib<S> {
    pub fib: StratDiagram<S>,
    pub direct: KanExtension<S>,
    /// `direct -> fib`
    pub comparison: DiagramMap<S>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyWitness {
    pub element: String,
    pub degree: i32,
    pub dim: usize,
}

/// Homology of the pointwise cone of a triangle's comparison map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    pub triangle: String,
    /// element -> nonzero (degree, dim) pairs of the cone homology
    pub cone_homology: Vec<(String, Vec<(i32, usize)>)>,
    pub failures: Vec<HomologyWitness>,
    pub passed: bool,
}

impl TriangleReport {
    fn from_map<S: Scalar>(
        name: &str,
        names: &[String],
        m: &DiagramMap<S>,
        src: &StratDiagram<S>,
        tgt: &StratDiagram<S>,
    ) -> Self {
        let mut table = Vec::new();
        let mut failures = Vec::new();
        if let Some(w) = m.naturality_witness(src, tgt) {
            failures.push(HomologyWitness {
                element: w,
                degree: 0,
                dim: 0,
            });
        }
        for c in 0..src.len() {
            let cone = chain::cone(m.comp(c), src.value(c), tgt.value(c)).complex;
            let betti: Vec<(i32, usize)> = cone.betti().into_iter().collect();
            for &(degree, dim) in &betti {
                failures.push(HomologyWitness {
                    element: names[c].clone(),
                    degree,
                    dim,
                });
            }
            table.push((names[c].clone(), betti));
        }
        TriangleReport {
            triangle: name.to_string(),
            cone_homology: table,
            passed: failures.is_empty(),
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sample: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub name: String,
    /// `original` or `flipped`
    pub recollement: String,
    pub checked: usize,
    pub failures: usize,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecollementReport {
    pub closed: Vec<String>,
    pub open: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub passed: bool,
    pub axioms: Vec<AxiomResult>,
}
