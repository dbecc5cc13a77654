//! Finite posets, monotone maps and subposets.
//!
//! Elements carry string ids; internally every element is addressed by its
//! dense index, assigned in input order. The full order relation is stored
//! as a boolean matrix so that `leq` queries are constant time.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct FinPoset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
}

impl fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<(&str, &str)> = self
            .covers()
            .into_iter()
            .map(|(a, b)| (self.ids[a].as_str(), self.ids[b].as_str()))
            .collect();
        f.debug_struct("FinPoset")
            .field("elements", &self.ids)
            .field("covers", &rels)
            .finish()
    }
}

/// JSON wire format of a poset: `{"elements": [...], "leq": [[a, b], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

impl FinPoset {
    /// Builds a poset from ids and generating relations. The reflexive
    /// transitive closure is taken; antisymmetry violations are rejected.
    pub fn new<S: AsRef<str>, T: AsRef<str>>(elements: &[S], relations: &[(T, T)]) -> Result<Self> {
        let ids: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateElement(id.clone()));
            }
        }
        let mut pairs = Vec::with_capacity(relations.len());
        for (a, b) in relations {
            let a = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
            let b = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
            pairs.push((a, b));
        }
        Self::from_index_relations(ids, index, &pairs)
    }

    /// Builds a poset on `n` elements named `"0"`, ..., `"n-1"`.
    pub fn from_indices(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        let ids: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let index = ids.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        for &(a, b) in relations {
            if a >= n {
                return Err(Error::IndexOutOfRange(a));
            }
            if b >= n {
                return Err(Error::IndexOutOfRange(b));
            }
        }
        Self::from_index_relations(ids, index, relations)
    }

    fn from_index_relations(
        ids: Vec<String>,
        index: HashMap<String, usize>,
        relations: &[(usize, usize)],
    ) -> Result<Self> {
        let n = ids.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in relations {
            leq[a * n + b] = true;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::NotAntisymmetric(ids[i].clone(), ids[j].clone()));
                }
            }
        }
        Ok(FinPoset { ids, index, leq })
    }

    pub fn chain(n: usize) -> Self {
        let rels: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_indices(n, &rels).expect("chain is a poset")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_indices(n, &[]).expect("antichain is a poset")
    }

    pub fn empty() -> Self {
        Self::antichain(0)
    }

    pub fn point() -> Self {
        Self::antichain(1)
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        let rels: Vec<(&str, &str)> = json
            .leq
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        Self::new(&json.elements, &rels)
    }

    /// Serializes using cover relations only.
    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.ids.clone(),
            leq: self
                .covers()
                .into_iter()
                .map(|(a, b)| (self.ids[a].clone(), self.ids[b].clone()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// All pairs `(a, b)` with `a <= b`, including the diagonal, in
    /// row-major order.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.leq(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Cover relations `a < b` with nothing strictly in between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn lower_covers(&self, b: usize) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&a| self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)))
            .collect()
    }

    /// A linear extension: a permutation of the elements compatible with the
    /// order, choosing the smallest available index at each step.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let next = (0..n)
                .find(|&b| !placed[b] && (0..n).all(|a| !self.lt(a, b) || placed[a]))
                .expect("finite posets always admit a linear extension");
            placed[next] = true;
            out.push(next);
        }
        out
    }

    pub fn all(&self) -> Subposet {
        Subposet::from_sorted((0..self.len()).collect())
    }

    pub fn subposet<I: IntoIterator<Item = usize>>(&self, members: I) -> Result<Subposet> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&m| m >= self.len()) {
            return Err(Error::IndexOutOfRange(bad));
        }
        Ok(Subposet::from_sorted(set.into_iter().collect()))
    }

    pub fn subposet_by_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Subposet> {
        let idx = ids
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.subposet(idx)
    }

    /// The full subposet on `sub`, as a poset in its own right. Element order
    /// follows the parent's index order.
    pub fn full_subposet(&self, sub: &Subposet) -> FinPoset {
        let m = &sub.members;
        let ids: Vec<String> = m.iter().map(|&i| self.ids[i].clone()).collect();
        let index = ids.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let k = m.len();
        let mut leq = vec![false; k * k];
        for (a, &pa) in m.iter().enumerate() {
            for (b, &pb) in m.iter().enumerate() {
                leq[a * k + b] = self.leq(pa, pb);
            }
        }
        FinPoset { ids, index, leq }
    }

    pub fn complement(&self, sub: &Subposet) -> Subposet {
        Subposet::from_sorted((0..self.len()).filter(|i| !sub.contains(*i)).collect())
    }

    /// Downward closure check; returns the first element that should be in
    /// `sub` but is not.
    fn closed_witness(&self, sub: &Subposet) -> Option<usize> {
        for &p in &sub.members {
            for q in 0..self.len() {
                if self.leq(q, p) && !sub.contains(q) {
                    return Some(q);
                }
            }
        }
        None
    }

    fn open_witness(&self, sub: &Subposet) -> Option<usize> {
        for &p in &sub.members {
            for q in 0..self.len() {
                if self.leq(p, q) && !sub.contains(q) {
                    return Some(q);
                }
            }
        }
        None
    }

    fn check_members(&self, sub: &Subposet) -> Result<()> {
        match sub.members.iter().find(|&&m| m >= self.len()) {
            Some(&bad) => Err(Error::IndexOutOfRange(bad)),
            None => Ok(()),
        }
    }

    /// Whether `sub` is downward-closed.
    pub fn is_closed(&self, sub: &Subposet) -> Result<bool> {
        self.check_members(sub)?;
        Ok(self.closed_witness(sub).is_none())
    }

    /// Whether `sub` is upward-closed.
    pub fn is_open(&self, sub: &Subposet) -> Result<bool> {
        self.check_members(sub)?;
        Ok(self.open_witness(sub).is_none())
    }

    pub fn require_closed(&self, sub: &Subposet) -> Result<()> {
        self.check_members(sub)?;
        match self.closed_witness(sub) {
            Some(q) => Err(Error::NotClosed(self.ids[q].clone())),
            None => Ok(()),
        }
    }

    pub fn require_open(&self, sub: &Subposet) -> Result<()> {
        self.check_members(sub)?;
        match self.open_witness(sub) {
            Some(q) => Err(Error::NotOpen(self.ids[q].clone())),
            None => Ok(()),
        }
    }

    pub fn minimal_elements(&self) -> Subposet {
        let n = self.len();
        Subposet::from_sorted(
            (0..n)
                .filter(|&p| !(0..n).any(|q| self.lt(q, p)))
                .collect(),
        )
    }

    pub fn maximal_elements(&self) -> Subposet {
        let n = self.len();
        Subposet::from_sorted(
            (0..n)
                .filter(|&p| !(0..n).any(|q| self.lt(p, q)))
                .collect(),
        )
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|x| self.leq(x, m)))
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|x| self.leq(m, x)))
    }

    /// Length of the longest strict chain; `-1` for the empty poset.
    pub fn krull_dim(&self) -> i64 {
        let order = self.linear_extension();
        let mut height = vec![0i64; self.len()];
        let mut best = -1;
        for (pos, &b) in order.iter().enumerate() {
            let h = order[..pos]
                .iter()
                .filter(|&&a| self.lt(a, b))
                .map(|&a| height[a] + 1)
                .max()
                .unwrap_or(0);
            height[b] = h;
            best = best.max(h);
        }
        best
    }

    /// Number of connected components of the comparability graph.
    pub fn components(&self) -> usize {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// Number of nondegenerate chains of each length `k` (k+1 elements).
    pub fn chain_counts(&self) -> Vec<usize> {
        let order = self.linear_extension();
        let n = self.len();
        // ending[b][k]: chains of length k whose top is b
        let mut ending: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut totals: Vec<usize> = Vec::new();
        for (pos, &b) in order.iter().enumerate() {
            let mut here = vec![1usize];
            for &a in &order[..pos] {
                if self.lt(a, b) {
                    for (k, &c) in ending[a].iter().enumerate() {
                        if here.len() <= k + 1 {
                            here.resize(k + 2, 0);
                        }
                        here[k + 1] += c;
                    }
                }
            }
            for (k, &c) in here.iter().enumerate() {
                if totals.len() <= k {
                    totals.resize(k + 1, 0);
                }
                totals[k] += c;
            }
            ending[b] = here;
        }
        totals
    }

    /// Euler characteristic of the order complex (nerve).
    pub fn nerve_euler_char(&self) -> i64 {
        self.chain_counts()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

/// A subset of a poset's elements, stored as sorted parent indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Subposet {
    members: Vec<usize>,
}

impl Subposet {
    fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subposet { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Position of a parent index inside the member list.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    pub fn ids<'a>(&self, parent: &'a FinPoset) -> Vec<&'a str> {
        self.members.iter().map(|&i| parent.id(i)).collect()
    }
}

/// An order-preserving map between finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    source: Arc<FinPoset>,
    target: Arc<FinPoset>,
    values: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Arc<FinPoset>, target: Arc<FinPoset>, values: Vec<usize>) -> Result<Self> {
        if values.len() != source.len() {
            return Err(Error::Shape(format!(
                "map has {} values for {} source elements",
                values.len(),
                source.len()
            )));
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= target.len()) {
            return Err(Error::IndexOutOfRange(bad));
        }
        for (a, b) in source.relations() {
            if !target.leq(values[a], values[b]) {
                return Err(Error::NotMonotone(
                    source.id(a).to_string(),
                    source.id(b).to_string(),
                ));
            }
        }
        Ok(MonotoneMap {
            source,
            target,
            values,
        })
    }

    pub fn identity(p: Arc<FinPoset>) -> Self {
        let values = (0..p.len()).collect();
        MonotoneMap {
            source: p.clone(),
            target: p,
            values,
        }
    }

    /// The constant map to a one-point poset.
    pub fn to_point(p: Arc<FinPoset>) -> Self {
        let values = vec![0; p.len()];
        MonotoneMap {
            source: p,
            target: Arc::new(FinPoset::point()),
            values,
        }
    }

    /// Inclusion of the full subposet on `sub` into `parent`.
    pub fn inclusion(parent: Arc<FinPoset>, sub: &Subposet) -> Self {
        MonotoneMap {
            source: Arc::new(parent.full_subposet(sub)),
            target: parent,
            values: sub.members().to_vec(),
        }
    }

    pub fn source(&self) -> &Arc<FinPoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinPoset> {
        &self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn compose(&self, first: &MonotoneMap) -> Result<MonotoneMap> {
        if first.target.as_ref() != self.source.as_ref() {
            return Err(Error::Shape("composable maps must share a poset".into()));
        }
        Ok(MonotoneMap {
            source: first.source.clone(),
            target: self.target.clone(),
            values: first.values.iter().map(|&v| self.values[v]).collect(),
        })
    }

    /// Restriction of the map to the full subposet of the source on `sub`.
    pub fn restrict(&self, sub: &Subposet) -> MonotoneMap {
        MonotoneMap {
            source: Arc::new(self.source.full_subposet(sub)),
            target: self.target.clone(),
            values: sub.members().iter().map(|&i| self.values[i]).collect(),
        }
    }

    /// Preimage of a set of target elements.
    pub fn preimage(&self, sub: &Subposet) -> Subposet {
        Subposet::from_sorted(
            (0..self.source.len())
                .filter(|&c| sub.contains(self.values[c]))
                .collect(),
        )
    }

    pub fn fiber(&self, p: usize) -> Subposet {
        Subposet::from_sorted(
            (0..self.source.len())
                .filter(|&c| self.values[c] == p)
                .collect(),
        )
    }

    /// Image as a subposet of the target.
    pub fn image(&self) -> Subposet {
        let set: BTreeSet<usize> = self.values.iter().copied().collect();
        Subposet::from_sorted(set.into_iter().collect())
    }

    /// Comma poset `{c : f(c) <= d}` as a subposet of the source.
    pub fn comma_down(&self, d: usize) -> Result<Subposet> {
        if d >= self.target.len() {
            return Err(Error::IndexOutOfRange(d));
        }
        Ok(Subposet::from_sorted(
            (0..self.source.len())
                .filter(|&c| self.target.leq(self.values[c], d))
                .collect(),
        ))
    }

    /// Comma poset `{c : f(c) >= d}` as a subposet of the source.
    pub fn comma_up(&self, d: usize) -> Result<Subposet> {
        if d >= self.target.len() {
            return Err(Error::IndexOutOfRange(d));
        }
        Ok(Subposet::from_sorted(
            (0..self.source.len())
                .filter(|&c| self.target.leq(d, self.values[c]))
                .collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v_poset() -> FinPoset {
        FinPoset::new(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap()
    }

    fn triangle_faces() -> FinPoset {
        // vertices 0,1,2; edges 3=01, 4=02, 5=12; face 6
        FinPoset::from_indices(
            7,
            &[
                (0, 3),
                (1, 3),
                (0, 4),
                (2, 4),
                (1, 5),
                (2, 5),
                (3, 6),
                (4, 6),
                (5, 6),
            ],
        )
        .unwrap()
    }

    #[test]
    fn closed_and_open_subsets() {
        let p = FinPoset::chain(3);
        assert!(p.is_closed(&p.subposet([0]).unwrap()).unwrap());
        assert!(!p.is_closed(&p.subposet([1]).unwrap()).unwrap());
        assert!(p.is_open(&p.subposet([1, 2]).unwrap()).unwrap());
        let a = FinPoset::antichain(2);
        assert!(a.is_closed(&a.subposet([0]).unwrap()).unwrap());
        let bogus = Subposet::from_sorted(vec![7]);
        assert_eq!(p.is_closed(&bogus), Err(Error::IndexOutOfRange(7)));
    }

    #[test]
    fn minimal_elements_examples() {
        assert_eq!(FinPoset::chain(3).minimal_elements().members(), &[0]);
        assert_eq!(FinPoset::antichain(2).minimal_elements().members(), &[0, 1]);
        assert_eq!(v_poset().minimal_elements().members(), &[0, 1]);
    }

    #[test]
    fn krull_dimension() {
        assert_eq!(FinPoset::chain(4).krull_dim(), 3);
        assert_eq!(FinPoset::antichain(5).krull_dim(), 0);
        assert_eq!(FinPoset::empty().krull_dim(), -1);
        assert_eq!(triangle_faces().krull_dim(), 2);
    }

    #[test]
    fn triangle_krull_dim_by_enumeration() {
        // brute force over all subsets that are chains
        let p = triangle_faces();
        let n = p.len();
        let mut best = 0;
        for mask in 1u32..(1 << n) {
            let elems: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let is_chain = elems
                .iter()
                .all(|&a| elems.iter().all(|&b| p.leq(a, b) || p.leq(b, a)));
            if is_chain {
                best = best.max(elems.len() - 1);
            }
        }
        assert_eq!(best as i64, p.krull_dim());
    }

    #[test]
    fn comma_examples() {
        let big = Arc::new(FinPoset::chain(2));
        let z = big.subposet([0]).unwrap();
        let i = MonotoneMap::inclusion(big.clone(), &z);
        assert_eq!(i.comma_down(1).unwrap().members(), &[0]);
        let id = MonotoneMap::identity(big.clone());
        assert_eq!(id.comma_down(0).unwrap().members(), &[0]);
        let u = big.subposet([1]).unwrap();
        let j = MonotoneMap::inclusion(big.clone(), &u);
        assert!(j.comma_down(0).unwrap().is_empty());
        assert_eq!(j.comma_down(5), Err(Error::IndexOutOfRange(5)));
    }

    #[test]
    fn antisymmetry_rejected() {
        let err = FinPoset::new(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::NotAntisymmetric(_, _)));
        let err = FinPoset::new(&["a", "a"], &[] as &[(&str, &str)]).unwrap_err();
        assert_eq!(err, Error::DuplicateElement("a".into()));
    }

    #[test]
    fn monotone_map_checked() {
        let c = Arc::new(FinPoset::chain(2));
        let a = Arc::new(FinPoset::antichain(2));
        assert!(MonotoneMap::new(c.clone(), a.clone(), vec![0, 1]).is_err());
        assert!(MonotoneMap::new(a, c, vec![1, 0]).is_ok());
    }

    #[test]
    fn nerve_of_triangle_faces_is_a_disk() {
        assert_eq!(triangle_faces().nerve_euler_char(), 1);
        assert_eq!(FinPoset::antichain(3).nerve_euler_char(), 3);
        assert_eq!(triangle_faces().components(), 1);
    }
}
