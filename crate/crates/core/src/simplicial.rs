//! Finite simplicial complexes and finite posets: order complexes, face
//! posets, joins, links and skeleta.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};

/// All k-simplices of one dimension, stored as a flat buffer of vertex ids.
/// Each simplex is an ascending (k+1)-tuple; the list is sorted
/// lexicographically and duplicate free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexLevel {
    arity: usize,
    flat: Vec<u32>,
}

impl SimplexLevel {
    pub fn new(arity: usize) -> Self {
        SimplexLevel {
            arity,
            flat: Vec::new(),
        }
    }

    pub fn from_sorted(arity: usize, flat: Vec<u32>) -> Self {
        debug_assert_eq!(flat.len() % arity.max(1), 0);
        SimplexLevel { arity, flat }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        if self.arity == 0 {
            0
        } else {
            self.flat.len() / self.arity
        }
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.flat[i * self.arity..(i + 1) * self.arity]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.flat.chunks_exact(self.arity)
    }

    pub fn push(&mut self, simplex: &[u32]) {
        debug_assert_eq!(simplex.len(), self.arity);
        self.flat.extend_from_slice(simplex);
    }

    pub fn contains(&self, simplex: &[u32]) -> bool {
        self.position(simplex).is_some()
    }

    /// Binary search; the level is sorted by construction.
    pub fn position(&self, simplex: &[u32]) -> Option<usize> {
        if simplex.len() != self.arity || self.arity == 0 {
            return None;
        }
        let mut lo = 0usize;
        let mut hi = self.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(simplex) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// A finite simplicial complex: an ordered vertex set with labels and a
/// downward-closed family of simplices, stored per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    levels: Vec<SimplexLevel>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex {
            labels: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// Builds a complex from maximal (or any generating) simplices, taking
    /// the downward closure. Vertices not covered by any simplex stay as
    /// labeled ghosts without simplices.
    pub fn from_maximal(labels: Vec<String>, maximal: &[Vec<u32>]) -> Result<Self> {
        let n = labels.len() as u32;
        let mut sets: Vec<BTreeSet<Vec<u32>>> = Vec::new();
        for m in maximal {
            let mut s: Vec<u32> = m.clone();
            s.sort_unstable();
            s.dedup();
            if s.iter().any(|&v| v >= n) {
                return Err(Error::InvalidInput(format!(
                    "simplex {s:?} references a vertex outside 0..{n}"
                )));
            }
            if s.is_empty() {
                continue;
            }
            let k = s.len() - 1;
            while sets.len() <= k {
                sets.push(BTreeSet::new());
            }
            insert_with_faces(&mut sets, &s);
        }
        let levels = sets
            .into_iter()
            .enumerate()
            .map(|(k, set)| {
                let mut flat = Vec::with_capacity(set.len() * (k + 1));
                for s in set {
                    flat.extend_from_slice(&s);
                }
                SimplexLevel::from_sorted(k + 1, flat)
            })
            .collect();
        Ok(SimplicialComplex { labels, levels })
    }

    /// Builds a complex from per-dimension levels that are already closed
    /// downward and sorted. Closure is checked in debug builds only.
    pub fn from_levels(labels: Vec<String>, levels: Vec<SimplexLevel>) -> Self {
        let c = SimplicialComplex { labels, levels };
        debug_assert!(c.check_closure());
        c
    }

    fn check_closure(&self) -> bool {
        for k in 1..self.levels.len() {
            for s in self.levels[k].iter() {
                let mut face = Vec::with_capacity(s.len() - 1);
                for drop in 0..s.len() {
                    face.clear();
                    face.extend(s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v));
                    if !self.levels[k - 1].contains(&face) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Full n-simplex on n+1 vertices.
    pub fn full_simplex(n: usize) -> Self {
        let labels = (0..=n as u32).map(|v| v.to_string()).collect();
        let all: Vec<u32> = (0..=n as u32).collect();
        Self::from_maximal(labels, &[all]).expect("valid")
    }

    /// Boundary of the (n+1)-simplex: the combinatorial n-sphere.
    pub fn simplex_boundary(n: usize) -> Self {
        let verts: Vec<u32> = (0..=(n as u32 + 1)).collect();
        let labels = verts.iter().map(|v| v.to_string()).collect();
        let maximal: Vec<Vec<u32>> = (0..verts.len())
            .map(|skip| {
                verts
                    .iter()
                    .copied()
                    .filter(|&v| v as usize != skip)
                    .collect()
            })
            .collect();
        Self::from_maximal(labels, &maximal).expect("valid")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_vertex_slots(&self) -> usize {
        self.labels.len()
    }

    /// Number of k-simplices.
    pub fn count(&self, k: usize) -> usize {
        self.levels.get(k).map_or(0, |l| l.len())
    }

    pub fn level(&self, k: usize) -> Option<&SimplexLevel> {
        self.levels.get(k)
    }

    pub fn is_empty(&self) -> bool {
        self.count(0) == 0
    }

    /// Dimension of the complex; -1 when empty.
    pub fn dim(&self) -> i64 {
        (0..self.levels.len())
            .rev()
            .find(|&k| !self.levels[k].is_empty())
            .map_or(-1, |k| k as i64)
    }

    pub fn total_simplices(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.levels
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let c = l.len() as i64;
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    pub fn is_simplex(&self, s: &[u32]) -> bool {
        if s.is_empty() {
            return false;
        }
        self.levels
            .get(s.len() - 1)
            .is_some_and(|l| l.contains(s))
    }

    /// All simplices as sorted vertex tuples, dimension by dimension.
    pub fn all_simplices(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.total_simplices());
        for level in &self.levels {
            for s in level.iter() {
                out.push(s.to_vec());
            }
        }
        out
    }

    /// The link of a simplex, relabeled to a compact vertex set but keeping
    /// the original label strings.
    pub fn link(&self, simplex: &[u32]) -> SimplicialComplex {
        let mut s = simplex.to_vec();
        s.sort_unstable();
        let p1 = s.len();
        let mut member_ids = BTreeSet::new();
        let mut link_simplices: Vec<Vec<u32>> = Vec::new();
        for level in &self.levels {
            if level.arity() <= p1 {
                continue;
            }
            for cand in level.iter() {
                if let Some(rest) = subset_complement(cand, &s) {
                    member_ids.extend(rest.iter().copied());
                    link_simplices.push(rest);
                }
            }
        }
        let ids: Vec<u32> = member_ids.into_iter().collect();
        let remap: HashMap<u32, u32> = ids
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new as u32))
            .collect();
        let labels = ids.iter().map(|&v| self.labels[v as usize].clone()).collect();
        let simplices: Vec<Vec<u32>> = link_simplices
            .into_iter()
            .map(|sx| sx.into_iter().map(|v| remap[&v]).collect())
            .collect();
        SimplicialComplex::from_maximal(labels, &simplices).expect("link simplices are valid")
    }

    /// Simplicial join; vertex sets are made disjoint by renaming.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let off = self.labels.len() as u32;
        let mut labels = Vec::with_capacity(self.labels.len() + other.labels.len());
        labels.extend(self.labels.iter().map(|l| format!("L:{l}")));
        labels.extend(other.labels.iter().map(|l| format!("R:{l}")));

        let max_k = (self.levels.len() + other.levels.len()).max(1);
        let mut sets: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); max_k];
        let mut insert = |s: Vec<u32>| {
            sets[s.len() - 1].insert(s);
        };
        for level in &self.levels {
            for s in level.iter() {
                insert(s.to_vec());
            }
        }
        for level in &other.levels {
            for t in level.iter() {
                let shifted: Vec<u32> = t.iter().map(|&v| v + off).collect();
                insert(shifted.clone());
                for s_level in &self.levels {
                    for s in s_level.iter() {
                        let mut joined = Vec::with_capacity(s.len() + shifted.len());
                        joined.extend_from_slice(s);
                        joined.extend_from_slice(&shifted);
                        insert(joined);
                    }
                }
            }
        }
        let levels = sets
            .into_iter()
            .enumerate()
            .map(|(k, set)| {
                let mut flat = Vec::with_capacity(set.len() * (k + 1));
                for s in set {
                    flat.extend_from_slice(&s);
                }
                SimplexLevel::from_sorted(k + 1, flat)
            })
            .collect();
        SimplicialComplex { labels, levels }
    }

    /// The k-skeleton.
    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        SimplicialComplex {
            labels: self.labels.clone(),
            levels: self.levels.iter().take(k + 1).cloned().collect(),
        }
    }
}

fn insert_with_faces(sets: &mut [BTreeSet<Vec<u32>>], simplex: &[u32]) {
    if simplex.is_empty() {
        return;
    }
    let k = simplex.len() - 1;
    if !sets[k].insert(simplex.to_vec()) {
        return;
    }
    if k == 0 {
        return;
    }
    let mut face = Vec::with_capacity(k);
    for drop in 0..simplex.len() {
        face.clear();
        face.extend(
            simplex
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, &v)| v),
        );
        insert_with_faces(sets, &face);
    }
}

/// If `small` is a subset of `cand`, returns the complementary vertices.
fn subset_complement(cand: &[u32], small: &[u32]) -> Option<Vec<u32>> {
    let mut rest = Vec::with_capacity(cand.len() - small.len());
    let mut it = small.iter().peekable();
    for &v in cand {
        match it.peek() {
            Some(&&s) if s == v => {
                it.next();
            }
            _ => rest.push(v),
        }
    }
    if it.peek().is_none() {
        Some(rest)
    } else {
        None
    }
}

/// A finite strict poset. The relation is stored as a full boolean matrix
/// and must be irreflexive and transitive.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    labels: Vec<String>,
    less: Vec<bool>, // less[a * n + b] means a < b
}

impl FinitePoset {
    pub fn new(labels: Vec<String>, pairs: &[(u32, u32)]) -> Result<Self> {
        let n = labels.len();
        let mut less = vec![false; n * n];
        for &(a, b) in pairs {
            if a as usize >= n || b as usize >= n {
                return Err(Error::InvalidInput(format!(
                    "pair ({a},{b}) outside 0..{n}"
                )));
            }
            less[a as usize * n + b as usize] = true;
        }
        let p = FinitePoset { labels, less };
        p.validate()?;
        Ok(p)
    }

    /// Builds the poset generated by the given cover relations, closing
    /// transitively.
    pub fn from_covers(labels: Vec<String>, covers: &[(u32, u32)]) -> Result<Self> {
        let n = labels.len();
        let mut less = vec![false; n * n];
        for &(a, b) in covers {
            if a as usize >= n || b as usize >= n {
                return Err(Error::InvalidInput(format!(
                    "pair ({a},{b}) outside 0..{n}"
                )));
            }
            less[a as usize * n + b as usize] = true;
        }
        // Floyd-Warshall style transitive closure.
        for k in 0..n {
            for i in 0..n {
                if less[i * n + k] {
                    for j in 0..n {
                        if less[k * n + j] {
                            less[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let p = FinitePoset { labels, less };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            if self.less[a * n + a] {
                return Err(Error::InvalidInput(format!(
                    "relation is not irreflexive at {a}"
                )));
            }
            for b in 0..n {
                if !self.less[a * n + b] {
                    continue;
                }
                for c in 0..n {
                    if self.less[b * n + c] && !self.less[a * n + c] {
                        return Err(Error::InvalidInput(format!(
                            "relation is not transitive: {a} < {b} < {c}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn lt(&self, a: u32, b: u32) -> bool {
        self.less[a as usize * self.len() + b as usize]
    }

    /// The order complex: vertices are elements, p-simplices are chains of
    /// p+1 strictly ordered elements.
    pub fn order_complex(&self) -> SimplicialComplex {
        let n = self.len();
        let mut levels: Vec<BTreeSet<Vec<u32>>> = Vec::new();
        // Grow chains by appending a strictly larger element; every chain
        // is enumerated exactly once in sorted id order of its elements
        // since chains are totally ordered but ids may interleave. Collect
        // chains as sorted id tuples for the complex.
        let mut frontier: Vec<Vec<u32>> = (0..n as u32).map(|v| vec![v]).collect();
        while !frontier.is_empty() {
            let k = frontier[0].len() - 1;
            while levels.len() <= k {
                levels.push(BTreeSet::new());
            }
            let mut next = Vec::new();
            for chain in frontier {
                let mut sorted = chain.clone();
                sorted.sort_unstable();
                levels[k].insert(sorted);
                let last = *chain.last().expect("nonempty");
                for v in 0..n as u32 {
                    if self.lt(last, v) {
                        let mut ext = chain.clone();
                        ext.push(v);
                        next.push(ext);
                    }
                }
            }
            frontier = next;
        }
        let levels = levels
            .into_iter()
            .enumerate()
            .map(|(k, set)| {
                let mut flat = Vec::with_capacity(set.len() * (k + 1));
                for s in set {
                    flat.extend_from_slice(&s);
                }
                SimplexLevel::from_sorted(k + 1, flat)
            })
            .collect();
        SimplicialComplex {
            labels: self.labels.clone(),
            levels,
        }
    }

    /// Elements below x.
    pub fn below(&self, x: u32) -> FinitePoset {
        self.induced(|y| self.lt(y, x))
    }

    /// Elements above x.
    pub fn above(&self, x: u32) -> FinitePoset {
        self.induced(|y| self.lt(x, y))
    }

    /// The open interval between x and y.
    pub fn interval(&self, x: u32, y: u32) -> FinitePoset {
        self.induced(|z| self.lt(x, z) && self.lt(z, y))
    }

    fn induced<F: Fn(u32) -> bool>(&self, keep: F) -> FinitePoset {
        let ids: Vec<u32> = (0..self.len() as u32).filter(|&v| keep(v)).collect();
        let labels = ids.iter().map(|&v| self.labels[v as usize].clone()).collect();
        let m = ids.len();
        let mut less = vec![false; m * m];
        for (i, &a) in ids.iter().enumerate() {
            for (j, &b) in ids.iter().enumerate() {
                less[i * m + j] = self.lt(a, b);
            }
        }
        FinitePoset { labels, less }
    }
}

/// The face poset of a complex: elements are the nonempty simplices,
/// ordered by strict inclusion.
pub fn face_poset(c: &SimplicialComplex) -> FinitePoset {
    let simplices = c.all_simplices();
    let labels: Vec<String> = simplices
        .iter()
        .map(|s| {
            let names: Vec<&str> = s.iter().map(|&v| c.labels()[v as usize].as_str()).collect();
            format!("{{{}}}", names.join(" "))
        })
        .collect();
    let index: BTreeMap<&[u32], u32> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i as u32))
        .collect();
    let n = simplices.len();
    let mut less = vec![false; n * n];
    for (i, s) in simplices.iter().enumerate() {
        // Mark all proper faces of s below s; transitivity is inherited.
        for (t, &j) in index.iter() {
            if t.len() < s.len() && is_subset(t, s) {
                less[j as usize * n + i] = true;
            }
        }
    }
    FinitePoset {
        labels,
        less,
    }
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    'outer: for &v in small {
        for &w in it.by_ref() {
            if w == v {
                continue 'outer;
            }
            if w > v {
                return false;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn closure_from_maximal() {
        let c = SimplicialComplex::from_maximal(names(3), &[vec![0, 1, 2]]).unwrap();
        assert_eq!(c.count(0), 3);
        assert_eq!(c.count(1), 3);
        assert_eq!(c.count(2), 1);
        assert!(c.is_simplex(&[0, 2]));
        assert_eq!(c.euler_characteristic(), 1);
    }

    #[test]
    fn order_complex_of_antichain_and_chain() {
        let antichain = FinitePoset::new(names(3), &[]).unwrap();
        let c = antichain.order_complex();
        assert_eq!(c.count(0), 3);
        assert_eq!(c.count(1), 0);

        let chain = FinitePoset::from_covers(names(3), &[(0, 1), (1, 2)]).unwrap();
        let c = chain.order_complex();
        assert_eq!(c.count(2), 1);
        assert_eq!(c.euler_characteristic(), 1);
    }

    #[test]
    fn barycentric_subdivision_of_triangle_boundary() {
        let boundary = SimplicialComplex::simplex_boundary(1);
        let sd = face_poset(&boundary).order_complex();
        // Six vertices and six edges forming a circle.
        assert_eq!(sd.count(0), 6);
        assert_eq!(sd.count(1), 6);
        assert_eq!(sd.count(2), 0);
        assert_eq!(sd.euler_characteristic(), 0);
    }

    #[test]
    fn face_poset_round_trip_counts() {
        let c = SimplicialComplex::from_maximal(names(4), &[vec![0, 1, 2], vec![2, 3]]).unwrap();
        let p = face_poset(&c);
        assert_eq!(p.len(), c.total_simplices());
        let sd = p.order_complex();
        assert_eq!(sd.euler_characteristic(), c.euler_characteristic());
    }

    #[test]
    fn join_shapes() {
        let point = SimplicialComplex::full_simplex(0);
        let edge = point.join(&point);
        assert_eq!(edge.count(0), 2);
        assert_eq!(edge.count(1), 1);

        let two = SimplicialComplex::from_maximal(names(2), &[vec![0], vec![1]]).unwrap();
        let square = two.join(&two);
        assert_eq!(square.count(0), 4);
        assert_eq!(square.count(1), 4);
        assert_eq!(square.count(2), 0);
        assert_eq!(square.euler_characteristic(), 0);

        let octa = two.join(&two).join(&two);
        assert_eq!(octa.count(0), 6);
        assert_eq!(octa.count(1), 12);
        assert_eq!(octa.count(2), 8);
        assert_eq!(octa.euler_characteristic(), 2);
    }

    #[test]
    fn links() {
        let octa_factor =
            SimplicialComplex::from_maximal(names(2), &[vec![0], vec![1]]).unwrap();
        let octa = octa_factor.join(&octa_factor).join(&octa_factor);
        let lk = octa.link(&[0]);
        // Link of a vertex of the octahedron is a 4-cycle.
        assert_eq!(lk.count(0), 4);
        assert_eq!(lk.count(1), 4);
        assert_eq!(lk.count(2), 0);
    }

    #[test]
    fn poset_validation() {
        assert!(FinitePoset::new(names(2), &[(0, 0)]).is_err());
        assert!(FinitePoset::new(names(3), &[(0, 1), (1, 2)]).is_err());
        assert!(FinitePoset::new(names(3), &[(0, 1), (1, 2), (0, 2)]).is_ok());
    }
}
