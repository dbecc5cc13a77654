//! Strict diagrams of chain complexes over a finite poset `C` carrying a
//! stratification `s: C -> P`.
//!
//! Structure maps are stored for every relation `x <= y` (diagonal
//! included). Functoriality is not enforced at construction so that broken
//! inputs can be reported by [`StratDiagram::validate`].

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chain::{self, ChainComplex, ChainMap, ComplexJson};
use crate::error::{Error, Result};
use crate::field::{Entry, Scalar};
use crate::matrix::Matrix;
use crate::poset::{FinPoset, MonotoneMap, PosetJson, Subposet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratDiagram<S> {
    strat: MonotoneMap,
    values: Vec<ChainComplex<S>>,
    maps: Vec<Option<ChainMap<S>>>,
}

/// A morphism of diagrams on the same shape: one chain map per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramMap<S> {
    comps: Vec<ChainMap<S>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotAComplex { element: String, degree: i32 },
    NotAChainMap { from: String, to: String, degree: i32 },
    IdentityViolated { element: String },
    CompositionViolated { x: String, y: String, z: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl<S: Scalar> StratDiagram<S> {
    /// Builds a diagram from values and structure maps keyed by parent
    /// indices `(x, y)`. Identity maps may be omitted; maps for non-cover
    /// relations may be omitted and are then composed along covers. Shapes
    /// are checked; functoriality is left to [`Self::validate`].
    pub fn new(
        strat: MonotoneMap,
        values: Vec<ChainComplex<S>>,
        mut maps: BTreeMap<(usize, usize), ChainMap<S>>,
    ) -> Result<Self> {
        let shape = strat.source().clone();
        let n = shape.len();
        if values.len() != n {
            return Err(Error::Shape(format!(
                "{} values for {} elements",
                values.len(),
                n
            )));
        }
        for &(x, y) in maps.keys() {
            if x >= n || y >= n || !shape.leq(x, y) {
                let name = |i: usize| {
                    if i < n {
                        shape.id(i).to_string()
                    } else {
                        i.to_string()
                    }
                };
                return Err(Error::Shape(format!(
                    "structure map {} -> {} is not along a relation",
                    name(x),
                    name(y)
                )));
            }
        }
        for x in 0..n {
            maps.entry((x, x))
                .or_insert_with(|| ChainMap::identity(&values[x]));
        }
        for (x, y) in shape.covers() {
            if !maps.contains_key(&(x, y)) {
                return Err(Error::Shape(format!(
                    "missing structure map for cover {} -> {}",
                    shape.id(x),
                    shape.id(y)
                )));
            }
        }
        // fill composites in linear-extension order of the target
        let order = shape.linear_extension();
        for &y in &order {
            for &x in &order {
                if shape.lt(x, y) && !maps.contains_key(&(x, y)) {
                    let c = shape
                        .lower_covers(y)
                        .into_iter()
                        .find(|&c| shape.leq(x, c))
                        .expect("some lower cover of y lies above x");
                    let comp = maps[&(c, y)].compose(&maps[&(x, c)]);
                    maps.insert((x, y), comp);
                }
            }
        }
        let mut dense = vec![None; n * n];
        for ((x, y), m) in maps {
            for (deg, mat) in m.components() {
                if mat.shape() != (values[y].dim(*deg), values[x].dim(*deg)) {
                    return Err(Error::Shape(format!(
                        "structure map {} -> {} has wrong shape in degree {deg}",
                        shape.id(x),
                        shape.id(y)
                    )));
                }
            }
            dense[x * n + y] = Some(m);
        }
        Ok(StratDiagram {
            strat,
            values,
            maps: dense,
        })
    }

    /// Engine-internal constructor; `maps` must be dense over all relations.
    pub(crate) fn from_parts(
        strat: MonotoneMap,
        values: Vec<ChainComplex<S>>,
        maps: Vec<Option<ChainMap<S>>>,
    ) -> Self {
        let d = StratDiagram {
            strat,
            values,
            maps,
        };
        debug_assert!(d.validate().valid, "engine produced an invalid diagram");
        d
    }

    /// Builds a diagram from a per-relation map function.
    pub(crate) fn from_fn(
        strat: MonotoneMap,
        values: Vec<ChainComplex<S>>,
        mut map: impl FnMut(usize, usize) -> ChainMap<S>,
    ) -> Self {
        let shape = strat.source().clone();
        let n = shape.len();
        let mut maps = vec![None; n * n];
        for (x, y) in shape.relations() {
            maps[x * n + y] = Some(if x == y {
                ChainMap::identity(&values[x])
            } else {
                map(x, y)
            });
        }
        Self::from_parts(strat, values, maps)
    }

    pub fn zero(strat: MonotoneMap) -> Self {
        let n = strat.source().len();
        Self::from_fn(strat, vec![ChainComplex::zero(); n], |_, _| ChainMap::zero())
    }

    /// Constant diagram with identity structure maps.
    pub fn constant(strat: MonotoneMap, value: &ChainComplex<S>) -> Self {
        let n = strat.source().len();
        Self::from_fn(strat, vec![value.clone(); n], |_, _| ChainMap::identity(value))
    }

    /// The ground field on the up-set of `c`, identities inside, zero
    /// outside: the left Kan extension of the unit along `{c} -> C`.
    pub fn up_set_indicator(strat: MonotoneMap, c: usize) -> Self {
        let shape = strat.source().clone();
        let unit = ChainComplex::unit();
        let values = (0..shape.len())
            .map(|x| {
                if shape.leq(c, x) {
                    unit.clone()
                } else {
                    ChainComplex::zero()
                }
            })
            .collect();
        Self::from_fn(strat, values, |x, _| {
            if shape.leq(c, x) {
                ChainMap::identity(&unit)
            } else {
                ChainMap::zero()
            }
        })
    }

    pub fn shape(&self) -> &Arc<FinPoset> {
        self.strat.source()
    }

    pub fn strata(&self) -> &Arc<FinPoset> {
        self.strat.target()
    }

    pub fn strat(&self) -> &MonotoneMap {
        &self.strat
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, x: usize) -> &ChainComplex<S> {
        &self.values[x]
    }

    pub fn values(&self) -> &[ChainComplex<S>] {
        &self.values
    }

    /// Structure map `F(x) -> F(y)`; panics unless `x <= y`.
    pub fn map(&self, x: usize, y: usize) -> &ChainMap<S> {
        self.maps[x * self.len() + y]
            .as_ref()
            .expect("structure maps exist exactly along relations")
    }

    pub fn total_dim(&self) -> usize {
        self.values.iter().map(ChainComplex::total_dim).sum()
    }

    pub fn is_pointwise_zero(&self) -> bool {
        self.values.iter().all(ChainComplex::is_zero)
    }

    pub fn is_pointwise_acyclic(&self) -> bool {
        self.values.iter().all(ChainComplex::is_acyclic)
    }

    /// Pointwise Euler characteristics.
    pub fn euler_vector(&self) -> Vec<i64> {
        self.values.iter().map(ChainComplex::euler_char).collect()
    }

    /// Replaces the stratification, keeping the shape.
    pub fn with_strat(&self, strat: MonotoneMap) -> Result<Self> {
        if strat.source().as_ref() != self.shape().as_ref() {
            return Err(Error::Shape("new stratification has a different source".into()));
        }
        Ok(StratDiagram {
            strat,
            values: self.values.clone(),
            maps: self.maps.clone(),
        })
    }

    /// Confirms `d^2 = 0`, chain-map conditions, identities and
    /// composition; lists every violation.
    pub fn validate(&self) -> ValidationReport {
        let shape = self.shape();
        let n = self.len();
        let mut violations = Vec::new();
        for x in 0..n {
            if let Some(degree) = self.values[x].d_squared_witness() {
                violations.push(Violation::NotAComplex {
                    element: shape.id(x).to_string(),
                    degree,
                });
            }
        }
        for (x, y) in shape.relations() {
            let f = self.map(x, y);
            if let Some(degree) = f.chain_map_witness(&self.values[x], &self.values[y]) {
                violations.push(Violation::NotAChainMap {
                    from: shape.id(x).to_string(),
                    to: shape.id(y).to_string(),
                    degree,
                });
            }
        }
        for x in 0..n {
            if !self.map(x, x).equals(&ChainMap::identity(&self.values[x])) {
                violations.push(Violation::IdentityViolated {
                    element: shape.id(x).to_string(),
                });
            }
        }
        for x in 0..n {
            for y in 0..n {
                if !shape.lt(x, y) {
                    continue;
                }
                for z in 0..n {
                    if !shape.lt(y, z) {
                        continue;
                    }
                    let composite = self.map(y, z).compose(self.map(x, y));
                    if !composite.equals(self.map(x, z)) {
                        violations.push(Violation::CompositionViolated {
                            x: shape.id(x).to_string(),
                            y: shape.id(y).to_string(),
                            z: shape.id(z).to_string(),
                        });
                    }
                }
            }
        }
        ValidationReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    /// Precomposition with the inclusion of `sub`.
    pub fn restrict(&self, sub: &Subposet) -> StratDiagram<S> {
        let strat = self.strat.restrict(sub);
        let m = sub.members();
        let k = m.len();
        let values = m.iter().map(|&x| self.values[x].clone()).collect();
        let mut maps = vec![None; k * k];
        for (a, &x) in m.iter().enumerate() {
            for (b, &y) in m.iter().enumerate() {
                if self.shape().leq(x, y) {
                    maps[a * k + b] = Some(self.map(x, y).clone());
                }
            }
        }
        StratDiagram {
            strat,
            values,
            maps,
        }
    }

    pub fn shift(&self, k: i32) -> StratDiagram<S> {
        StratDiagram {
            strat: self.strat.clone(),
            values: self.values.iter().map(|v| v.shift(k)).collect(),
            maps: self
                .maps
                .iter()
                .map(|m| m.as_ref().map(|m| m.shift(k)))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &StratDiagram<S>) -> Result<StratDiagram<S>> {
        if self.strat != other.strat {
            return Err(Error::Shape("direct sum of diagrams on different shapes".into()));
        }
        let values: Vec<ChainComplex<S>> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        let n = self.len();
        let mut maps = vec![None; n * n];
        for (x, y) in self.shape().relations() {
            maps[x * n + y] = Some(block_diagonal(
                self.map(x, y),
                other.map(x, y),
                (&self.values[x], &self.values[y]),
                (&values[x], &values[y]),
            ));
        }
        Ok(StratDiagram::from_parts(self.strat.clone(), values, maps))
    }

    pub fn to_json(&self) -> DiagramJson {
        let shape = self.shape();
        let values = (0..self.len())
            .map(|x| (shape.id(x).to_string(), self.values[x].to_json()))
            .collect();
        let mut maps = Vec::new();
        for (x, y) in shape.relations() {
            if x == y {
                continue;
            }
            let f = self.map(x, y);
            let components = f
                .components()
                .iter()
                .map(|(d, m)| (d.to_string(), m.to_entries()))
                .collect();
            maps.push(MapJson {
                from: shape.id(x).to_string(),
                to: shape.id(y).to_string(),
                components,
            });
        }
        DiagramJson {
            shape: shape.to_json(),
            strata: Some(self.strata().to_json()),
            strat: Some(
                (0..self.len())
                    .map(|x| {
                        (
                            shape.id(x).to_string(),
                            self.strata().id(self.strat.apply(x)).to_string(),
                        )
                    })
                    .collect(),
            ),
            values,
            maps,
        }
    }

    /// Parses the JSON diagram format. Without `strata`, the shape is its
    /// own stratification (`P = C`, `s = id`). Elements without a value
    /// get the zero complex.
    pub fn from_json(j: &DiagramJson) -> Result<Self> {
        let shape = Arc::new(FinPoset::from_json(&j.shape)?);
        let strat = match (&j.strata, &j.strat) {
            (Some(p), Some(s)) => {
                let strata = Arc::new(FinPoset::from_json(p)?);
                let mut vals = Vec::with_capacity(shape.len());
                for id in shape.ids() {
                    let label = s.get(id).ok_or_else(|| Error::MissingImage(id.clone()))?;
                    vals.push(strata.index_of(label)?);
                }
                MonotoneMap::new(shape.clone(), strata, vals)?
            }
            (None, None) => MonotoneMap::identity(shape.clone()),
            _ => {
                return Err(Error::Parse(
                    "`strata` and `strat` must be given together".into(),
                ))
            }
        };
        for key in j.values.keys() {
            shape.index_of(key)?;
        }
        let values = shape
            .ids()
            .iter()
            .map(|id| match j.values.get(id) {
                Some(c) => ChainComplex::from_json(c),
                None => Ok(ChainComplex::zero()),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut maps = BTreeMap::new();
        for m in &j.maps {
            let x = shape.index_of(&m.from)?;
            let y = shape.index_of(&m.to)?;
            let mut comps = BTreeMap::new();
            for (deg, entries) in &m.components {
                let deg: i32 = deg
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad degree key `{deg}`")))?;
                let mat = Matrix::from_entries(values[y].dim(deg), values[x].dim(deg), entries)?;
                comps.insert(deg, mat);
            }
            if maps
                .insert((x, y), ChainMap::from_components(comps))
                .is_some()
            {
                return Err(Error::Parse(format!(
                    "duplicate structure map {} -> {}",
                    m.from, m.to
                )));
            }
        }
        Self::new(strat, values, maps)
    }
}

fn block_diagonal<S: Scalar>(
    f: &ChainMap<S>,
    g: &ChainMap<S>,
    (fx, fy): (&ChainComplex<S>, &ChainComplex<S>),
    (sx, sy): (&ChainComplex<S>, &ChainComplex<S>),
) -> ChainMap<S> {
    let lo = sx.lo().min(sy.lo());
    let hi = sx.hi().max(sy.hi());
    let mut comps = BTreeMap::new();
    for n in lo..=hi {
        let mut m = Matrix::zeros(sy.dim(n), sx.dim(n));
        if let Some(a) = f.comp(n) {
            m.set_block(0, 0, a);
        }
        if let Some(b) = g.comp(n) {
            m.set_block(fy.dim(n), fx.dim(n), b);
        }
        comps.insert(n, m);
    }
    ChainMap::from_components(comps)
}

/// JSON wire format of a stratified diagram.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DiagramJson {
    pub shape: PosetJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<PosetJson>,
    /// Element id to stratum id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strat: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub values: BTreeMap<String, ComplexJson>,
    #[serde(default)]
    pub maps: Vec<MapJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MapJson {
    pub from: String,
    pub to: String,
    /// Degree (as a string key) to matrix.
    #[serde(default)]
    pub components: BTreeMap<String, Vec<Vec<Entry>>>,
}

impl<S: Scalar> DiagramMap<S> {
    pub fn new(comps: Vec<ChainMap<S>>) -> Self {
        DiagramMap { comps }
    }

    pub fn identity(f: &StratDiagram<S>) -> Self {
        DiagramMap {
            comps: f.values.iter().map(ChainMap::identity).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        DiagramMap {
            comps: vec![ChainMap::zero(); n],
        }
    }

    pub fn comp(&self, x: usize) -> &ChainMap<S> {
        &self.comps[x]
    }

    pub fn components(&self) -> &[ChainMap<S>] {
        &self.comps
    }

    pub fn compose(&self, first: &DiagramMap<S>) -> DiagramMap<S> {
        DiagramMap {
            comps: self
                .comps
                .iter()
                .zip(&first.comps)
                .map(|(g, f)| g.compose(f))
                .collect(),
        }
    }

    pub fn restrict(&self, sub: &Subposet) -> DiagramMap<S> {
        DiagramMap {
            comps: sub.members().iter().map(|&x| self.comps[x].clone()).collect(),
        }
    }

    pub fn shift(&self, k: i32) -> DiagramMap<S> {
        DiagramMap {
            comps: self.comps.iter().map(|c| c.shift(k)).collect(),
        }
    }

    /// First failure of componentwise chain-map or naturality conditions.
    pub fn naturality_witness(
        &self,
        source: &StratDiagram<S>,
        target: &StratDiagram<S>,
    ) -> Option<String> {
        let shape = source.shape();
        for x in 0..source.len() {
            if let Some(d) = self.comps[x].chain_map_witness(source.value(x), target.value(x)) {
                return Some(format!("component at {} fails in degree {d}", shape.id(x)));
            }
        }
        for (x, y) in shape.relations() {
            if x == y {
                continue;
            }
            let a = target.map(x, y).compose(&self.comps[x]);
            let b = self.comps[y].compose(source.map(x, y));
            if !a.equals(&b) {
                return Some(format!(
                    "square {} -> {} does not commute",
                    shape.id(x),
                    shape.id(y)
                ));
            }
        }
        None
    }

    /// Elements where the component is not a quasi-isomorphism.
    pub fn non_qis_elements(
        &self,
        source: &StratDiagram<S>,
        target: &StratDiagram<S>,
    ) -> Vec<usize> {
        (0..source.len())
            .filter(|&x| !self.comps[x].is_quasi_iso(source.value(x), target.value(x)))
            .collect()
    }

    pub fn is_pointwise_qis(&self, source: &StratDiagram<S>, target: &StratDiagram<S>) -> bool {
        self.non_qis_elements(source, target).is_empty()
    }
}

/// Pointwise mapping cone with its canonical maps.
#[derive(Clone, Debug)]
pub struct DiagramCone<S> {
    pub diagram: StratDiagram<S>,
    pub inclusion: DiagramMap<S>,
    pub projection: DiagramMap<S>,
}

/// Mapping cone of `phi: source -> target`, taken elementwise. Structure
/// maps are block diagonal in the cone's basis.
pub fn pointwise_cone<S: Scalar>(
    phi: &DiagramMap<S>,
    source: &StratDiagram<S>,
    target: &StratDiagram<S>,
) -> DiagramCone<S> {
    let n = source.len();
    let cones: Vec<chain::Cone<S>> = (0..n)
        .map(|x| chain::cone(phi.comp(x), source.value(x), target.value(x)))
        .collect();
    let values: Vec<ChainComplex<S>> = cones.iter().map(|c| c.complex.clone()).collect();
    let shape = source.shape().clone();
    let mut maps = vec![None; n * n];
    for (x, y) in shape.relations() {
        // cone_k(x) = T(x)_k (+) S(x)_{k-1}
        let (cx, cy) = (&values[x], &values[y]);
        let mut comps = BTreeMap::new();
        let lo = cx.lo().min(cy.lo());
        let hi = cx.hi().max(cy.hi());
        for k in lo..=hi {
            let mut m = Matrix::zeros(cy.dim(k), cx.dim(k));
            if let Some(t) = target.map(x, y).comp(k) {
                m.set_block(0, 0, t);
            }
            if let Some(s) = source.map(x, y).comp(k - 1) {
                m.set_block(target.value(y).dim(k), target.value(x).dim(k), s);
            }
            comps.insert(k, m);
        }
        maps[x * n + y] = Some(ChainMap::from_components(comps));
    }
    let diagram = StratDiagram::from_parts(source.strat.clone(), values, maps);
    DiagramCone {
        diagram,
        inclusion: DiagramMap::new(cones.iter().map(|c| c.inclusion.clone()).collect()),
        projection: DiagramMap::new(cones.iter().map(|c| c.projection.clone()).collect()),
    }
}

/// Pointwise fiber `cone(phi)[-1]` together with its projection to the
/// source.
pub fn pointwise_fib<S: Scalar>(
    phi: &DiagramMap<S>,
    source: &StratDiagram<S>,
    target: &StratDiagram<S>,
) -> (StratDiagram<S>, DiagramMap<S>) {
    let c = pointwise_cone(phi, source, target);
    let fib = c.diagram.shift(-1);
    let proj = DiagramMap::new(
        (0..source.len())
            .map(|x| chain::fib_projection(source.value(x), target.value(x)))
            .collect(),
    );
    debug_assert!(proj.naturality_witness(&fib, source).is_none());
    (fib, proj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn interval_strat() -> MonotoneMap {
        MonotoneMap::identity(Arc::new(FinPoset::chain(2)))
    }

    fn m(r: usize, c: usize, e: &[i64]) -> Matrix<Q> {
        Matrix::from_i64(r, c, e)
    }

    #[test]
    fn constant_diagram_is_valid() {
        let x = ChainComplex::new(0, vec![1, 1], vec![m(1, 1, &[0])]).unwrap();
        let d = StratDiagram::<Q>::constant(interval_strat(), &x);
        assert!(d.validate().valid);
    }

    #[test]
    fn non_chain_map_reported() {
        let x = ChainComplex::new(0, vec![1, 1], vec![m(1, 1, &[1])]).unwrap();
        let maps: BTreeMap<_, _> =
            [((0, 1), ChainMap::from_components([(0, m(1, 1, &[1]))].into()))].into();
        let d = StratDiagram::new(interval_strat(), vec![x.clone(), x], maps).unwrap();
        let report = d.validate();
        assert!(!report.valid);
        assert_eq!(
            report.violations,
            vec![Violation::NotAChainMap {
                from: "0".into(),
                to: "1".into(),
                degree: 1
            }]
        );
    }

    #[test]
    fn composition_violation_reported() {
        let strat = MonotoneMap::identity(Arc::new(FinPoset::chain(3)));
        let u = ChainComplex::<Q>::unit();
        let one = || ChainMap::from_components([(0, m(1, 1, &[1]))].into());
        let two = ChainMap::from_components([(0, m(1, 1, &[2]))].into());
        let maps: BTreeMap<_, _> = [((0, 1), one()), ((1, 2), one()), ((0, 2), two)].into();
        let d = StratDiagram::new(strat, vec![u.clone(), u.clone(), u], maps).unwrap();
        assert_eq!(
            d.validate().violations,
            vec![Violation::CompositionViolated {
                x: "0".into(),
                y: "1".into(),
                z: "2".into()
            }]
        );
    }

    #[test]
    fn restriction() {
        let x = ChainComplex::<Q>::unit();
        let d = StratDiagram::constant(interval_strat(), &x);
        let all = d.shape().all();
        assert_eq!(d.restrict(&all), d);
        let none = d.shape().subposet([]).unwrap();
        assert!(d.restrict(&none).is_empty());
        let top = d.shape().subposet([1]).unwrap();
        let r = d.restrict(&top);
        assert_eq!(r.len(), 1);
        assert_eq!(r.value(0), &x);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let x = ChainComplex::new(0, vec![1, 1], vec![m(1, 1, &[0])]).unwrap();
        let d = StratDiagram::<Q>::constant(interval_strat(), &x);
        let c = pointwise_cone(&DiagramMap::identity(&d), &d, &d);
        assert!(c.diagram.validate().valid);
        assert!(c.diagram.is_pointwise_acyclic());
        assert!(c.inclusion.naturality_witness(&d, &c.diagram).is_none());
    }

    #[test]
    fn cone_of_zero_source() {
        let x = ChainComplex::<Q>::unit();
        let d = StratDiagram::constant(interval_strat(), &x);
        let z = StratDiagram::zero(interval_strat());
        let c = pointwise_cone(&DiagramMap::zero(2), &z, &d);
        assert_eq!(c.diagram, d);
    }

    #[test]
    fn json_round_trip() {
        let x = ChainComplex::new(-1, vec![1, 2], vec![m(1, 2, &[1, -1])]).unwrap();
        let d = StratDiagram::<Q>::constant(interval_strat(), &x);
        let j = d.to_json();
        let back = StratDiagram::<Q>::from_json(&j).unwrap();
        assert_eq!(back, d);
    }
}
