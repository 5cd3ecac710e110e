//! Class structure of a nonnegative matrix.
//!
//! Vertices are `0..n`; the digraph has an edge `i -> j` iff `P_ij != 0`.
//! Classes are its strongly connected components. Class `a` *has access to*
//! class `b` when there is a path from `a` to `b`; the relation is stored
//! closed (reflexive and transitive). Classes are numbered in a fixed
//! topological order: access only ever points from a lower to a higher class
//! number, and ties are broken by the smallest vertex of each class.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::matrix::{set_to_json, IndexSet, NonnegMatrix};
use crate::scalar::{Field, Tolerance};

/// Vertex set closed under "has access to": whenever `j` has access to `I`,
/// `j` is in `I`. Such sets index the invariant faces of the orthant.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InitialSubset(IndexSet);

impl InitialSubset {
    pub fn indices(&self) -> &IndexSet {
        &self.0
    }

    pub fn into_indices(self) -> IndexSet {
        self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        set_to_json(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassAnalysis {
    n: usize,
    classes: Vec<Vec<usize>>,
    vertex_class: Vec<usize>,
    access: Vec<Vec<bool>>,
}

struct Tarjan<'a> {
    adj: &'a [Vec<usize>],
    index: usize,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    idx: Vec<Option<usize>>,
    low: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize) {
        self.idx[v] = Some(self.index);
        self.low[v] = self.index;
        self.index += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for &w in &self.adj[v] {
            match self.idx[w] {
                None => {
                    self.visit(w);
                    self.low[v] = self.low[v].min(self.low[w]);
                }
                Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                _ => {}
            }
        }
        if Some(self.low[v]) == self.idx[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("tarjan stack underflow");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            self.comps.push(comp);
        }
    }
}

fn strongly_connected(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut t = Tarjan {
        adj,
        index: 0,
        stack: Vec::new(),
        on_stack: vec![false; n],
        idx: vec![None; n],
        low: vec![0; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if t.idx[v].is_none() {
            t.visit(v);
        }
    }
    t.comps
}

impl ClassAnalysis {
    /// Classes and closed access relation of the zero pattern of `p`.
    pub fn condense<T: Field>(p: &NonnegMatrix<T>) -> Self {
        let n = p.n();
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| p.has_edge(i, j)).collect())
            .collect();
        let comps = strongly_connected(&adj);

        let mut comp_of = vec![0; n];
        for (c, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = c;
            }
        }
        let k = comps.len();
        let mut succ = vec![Vec::new(); k];
        let mut indeg = vec![0usize; k];
        for i in 0..n {
            for &j in &adj[i] {
                let (a, b) = (comp_of[i], comp_of[j]);
                if a != b && !succ[a].contains(&b) {
                    succ[a].push(b);
                    indeg[b] += 1;
                }
            }
        }
        // Kahn's algorithm, smallest leading vertex first.
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..k)
            .filter(|&c| indeg[c] == 0)
            .map(|c| Reverse((comps[c][0], c)))
            .collect();
        let mut order = Vec::with_capacity(k);
        while let Some(Reverse((_, c))) = heap.pop() {
            order.push(c);
            for &s in &succ[c] {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    heap.push(Reverse((comps[s][0], s)));
                }
            }
        }
        let mut rank = vec![0; k];
        for (pos, &c) in order.iter().enumerate() {
            rank[c] = pos;
        }
        let classes: Vec<Vec<usize>> = order.iter().map(|&c| comps[c].clone()).collect();
        let vertex_class: Vec<usize> = (0..n).map(|v| rank[comp_of[v]]).collect();

        let mut access = vec![vec![false; k]; k];
        for pos in (0..k).rev() {
            access[pos][pos] = true;
            for &s in &succ[order[pos]] {
                let reach = access[rank[s]].clone();
                for (dst, &r) in access[pos].iter_mut().zip(&reach) {
                    *dst |= r;
                }
            }
        }
        ClassAnalysis {
            n,
            classes,
            vertex_class,
            access,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, a: usize) -> &[usize] {
        &self.classes[a]
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.vertex_class[v]
    }

    /// `a >= b`: class `a` has access to class `b` (reflexive).
    pub fn has_access(&self, a: usize, b: usize) -> bool {
        self.access[a][b]
    }

    /// `a >- b`: access with `a != b`.
    pub fn strictly_accesses(&self, a: usize, b: usize) -> bool {
        a != b && self.access[a][b]
    }

    pub fn vertex_has_access(&self, i: usize, j: usize) -> bool {
        self.access[self.vertex_class[i]][self.vertex_class[j]]
    }

    /// Classes meeting the vertex set `s`.
    pub fn classes_meeting(&self, s: &IndexSet) -> Vec<usize> {
        let mut out: Vec<usize> = s.iter().map(|&v| self.vertex_class[v]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Classes having access to at least one class of `targets`.
    pub fn classes_with_access_to(&self, targets: &[usize]) -> Vec<usize> {
        (0..self.num_classes())
            .filter(|&a| targets.iter().any(|&t| self.access[a][t]))
            .collect()
    }

    /// Classes accessed from at least one class of `sources`.
    pub fn classes_accessed_from(&self, sources: &[usize]) -> Vec<usize> {
        (0..self.num_classes())
            .filter(|&b| sources.iter().any(|&s| self.access[s][b]))
            .collect()
    }

    pub fn union_of(&self, class_ids: &[usize]) -> IndexSet {
        class_ids
            .iter()
            .flat_map(|&c| self.classes[c].iter().copied())
            .collect()
    }

    /// Union of all classes having access to `s`: the smallest initial subset
    /// containing `s`.
    pub fn smallest_initial_superset(&self, s: &IndexSet) -> InitialSubset {
        let targets = self.classes_meeting(s);
        InitialSubset(self.union_of(&self.classes_with_access_to(&targets)))
    }

    /// Whether `set` is closed under "has access to".
    pub fn is_initial(&self, set: &IndexSet) -> bool {
        let targets = self.classes_meeting(set);
        self.classes_with_access_to(&targets)
            .iter()
            .all(|&c| self.classes[c].iter().all(|v| set.contains(v)))
    }

    /// Wraps `set` after checking it is initial.
    pub fn initial_subset(&self, set: IndexSet) -> Option<InitialSubset> {
        self.is_initial(&set).then_some(InitialSubset(set))
    }

    pub fn is_final(&self, a: usize) -> bool {
        (0..self.num_classes()).all(|b| b == a || !self.access[a][b])
    }

    pub fn is_initial_class(&self, a: usize) -> bool {
        (0..self.num_classes()).all(|b| b == a || !self.access[b][a])
    }

    /// Whether the matrix is irreducible (a single class).
    pub fn is_irreducible(&self) -> bool {
        self.num_classes() == 1
    }

    /// Longest chain `a_1 >- a_2 >- ... >- a_k` drawn from `members`.
    pub fn longest_chain(&self, members: &[usize]) -> usize {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        // Topological numbering makes every strict access point forward.
        let mut best = vec![1usize; sorted.len()];
        for i in (0..sorted.len()).rev() {
            for j in i + 1..sorted.len() {
                if self.access[sorted[i]][sorted[j]] {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    pub fn access_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.access
                .iter()
                .map(|row| serde_json::Value::Array(row.iter().map(|&b| b.into()).collect()))
                .collect(),
        )
    }

    pub fn classes_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.classes
                .iter()
                .map(|c| serde_json::Value::Array(c.iter().map(|&v| (v + 1).into()).collect()))
                .collect(),
        )
    }
}

/// Complement of `set` in `0..n`: the dual face of `F_set` in the self-dual
/// orthant.
pub fn dual_face(set: &IndexSet, n: usize) -> IndexSet {
    (0..n).filter(|i| !set.contains(i)).collect()
}

/// Per-class flags derived from class radii and the access relation.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassTaxonomy<T> {
    pub radii: Vec<T>,
    pub rho: T,
    pub basic: Vec<bool>,
    pub final_class: Vec<bool>,
    pub initial_class: Vec<bool>,
    pub distinguished: Vec<bool>,
    pub distinguished_for_transpose: Vec<bool>,
    tol: Tolerance,
}

impl<T: Field> ClassTaxonomy<T> {
    /// Radius of every class is `radii[a]`; `rho` is their maximum.
    pub fn classify(a: &ClassAnalysis, radii: Vec<T>, rho: T, tol: &Tolerance) -> Self {
        let k = a.num_classes();
        let basic = (0..k).map(|c| tol.eig_eq(&radii[c], &rho)).collect();
        let final_class = (0..k).map(|c| a.is_final(c)).collect();
        let initial_class = (0..k).map(|c| a.is_initial_class(c)).collect();
        let distinguished = (0..k)
            .map(|c| {
                (0..k)
                    .filter(|&b| a.strictly_accesses(b, c))
                    .all(|b| tol.eig_lt(&radii[b], &radii[c]))
            })
            .collect();
        let distinguished_for_transpose = (0..k)
            .map(|c| {
                (0..k)
                    .filter(|&b| a.strictly_accesses(c, b))
                    .all(|b| tol.eig_lt(&radii[b], &radii[c]))
            })
            .collect();
        ClassTaxonomy {
            radii,
            rho,
            basic,
            final_class,
            initial_class,
            distinguished,
            distinguished_for_transpose,
            tol: *tol,
        }
    }

    /// Radius equals `lambda`.
    pub fn associated_with(&self, c: usize, lambda: &T) -> bool {
        self.tol.eig_eq(&self.radii[c], lambda)
    }

    /// Radius `lambda` and no class with access to `c` has a larger radius.
    pub fn semi_distinguished(&self, a: &ClassAnalysis, c: usize, lambda: &T) -> bool {
        self.associated_with(c, lambda)
            && (0..a.num_classes())
                .filter(|&b| a.has_access(b, c))
                .all(|b| self.tol.eig_le(&self.radii[b], &self.radii[c]))
    }

    pub fn basic_classes(&self) -> Vec<usize> {
        flagged(&self.basic)
    }

    pub fn distinguished_classes(&self) -> Vec<usize> {
        flagged(&self.distinguished)
    }

    /// Distinguished classes of radius `lambda`.
    pub fn distinguished_with(&self, lambda: &T) -> Vec<usize> {
        (0..self.radii.len())
            .filter(|&c| self.distinguished[c] && self.associated_with(c, lambda))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let classes: Vec<serde_json::Value> = (0..self.radii.len())
            .map(|c| {
                serde_json::json!({
                    "radius": self.radii[c].to_json(),
                    "basic": self.basic[c],
                    "final": self.final_class[c],
                    "initial": self.initial_class[c],
                    "distinguished": self.distinguished[c],
                    "distinguished_for_transpose": self.distinguished_for_transpose[c],
                })
            })
            .collect();
        serde_json::json!({ "rho": self.rho.to_json(), "classes": classes })
    }
}

fn flagged(v: &[bool]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, &f)| f)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn analysis(rows: &[&[i64]]) -> ClassAnalysis {
        ClassAnalysis::condense(&NonnegMatrix::<Q>::from_ints(rows).unwrap())
    }

    fn set(v: &[usize]) -> IndexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn condense_three_singletons() {
        let a = analysis(&[&[2, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.classes(), &[vec![0], vec![1], vec![2]]);
        assert!(a.strictly_accesses(0, 1));
        assert!(!a.strictly_accesses(0, 2));
        assert!(!a.strictly_accesses(1, 0));
        assert!((0..3).all(|c| a.has_access(c, c)));
    }

    #[test]
    fn condense_irreducible_and_empty() {
        let a = analysis(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.classes(), &[vec![0, 1]]);
        assert!(a.is_irreducible());
        let z = analysis(&[&[0, 0], &[0, 0]]);
        assert_eq!(z.num_classes(), 2);
        assert!(!z.strictly_accesses(0, 1) && !z.strictly_accesses(1, 0));
    }

    #[test]
    fn topological_order_puts_accessors_first() {
        // edge 2 -> 1 (0-based: 1 -> 0)
        let a = analysis(&[&[1, 0], &[1, 2]]);
        assert_eq!(a.classes(), &[vec![1], vec![0]]);
        assert!(a.strictly_accesses(0, 1));
    }

    #[test]
    fn smallest_initial_superset_examples() {
        let a = analysis(&[&[2, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.smallest_initial_superset(&set(&[1])).indices(), &set(&[0, 1]));
        assert!(a.smallest_initial_superset(&set(&[])).is_empty());
        let b = analysis(&[&[1, 0], &[1, 2]]);
        assert_eq!(b.smallest_initial_superset(&set(&[0])).indices(), &set(&[0, 1]));
    }

    #[test]
    fn is_initial_examples() {
        let a = analysis(&[&[1, 1], &[0, 1]]);
        assert!(a.is_initial(&set(&[0])));
        assert!(!a.is_initial(&set(&[1])));
        assert!(a.is_initial(&set(&[0, 1])));
        assert!(a.is_initial(&set(&[])));
    }

    #[test]
    fn dual_face_examples() {
        assert_eq!(dual_face(&set(&[0]), 3), set(&[1, 2]));
        assert_eq!(dual_face(&set(&[]), 2), set(&[0, 1]));
        assert_eq!(dual_face(&set(&[0, 1]), 2), set(&[]));
    }

    fn taxonomy(rows: &[&[i64]], radii: &[i64]) -> (ClassAnalysis, ClassTaxonomy<Q>) {
        let a = analysis(rows);
        let radii: Vec<Q> = radii.iter().map(|&r| Q::from_int(r)).collect();
        let rho = radii.iter().cloned().fold(Q::from_int(0), Q::max_of);
        let t = ClassTaxonomy::classify(&a, radii, rho, &Tolerance::default());
        (a, t)
    }

    #[test]
    fn classify_examples() {
        let (_, t) = taxonomy(&[&[2, 1, 0], &[0, 1, 0], &[0, 0, 1]], &[2, 1, 1]);
        assert_eq!(t.basic_classes(), vec![0]);
        assert_eq!(t.distinguished_classes(), vec![0, 2]);
        assert_eq!(t.final_class, vec![false, true, true]);

        let (_, t) = taxonomy(&[&[1, 1], &[0, 1]], &[1, 1]);
        assert_eq!(t.basic_classes(), vec![0, 1]);
        assert_eq!(t.final_class, vec![false, true]);

        let (_, t) = taxonomy(&[&[1, 0], &[0, 1]], &[1, 1]);
        assert!(t.basic.iter().all(|&b| b));
        assert!(t.final_class.iter().all(|&b| b));
        assert!(t.initial_class.iter().all(|&b| b));
        assert!(t.distinguished.iter().all(|&b| b));
    }

    #[test]
    fn semi_distinguished_allows_equal_radius_accessors() {
        let (a, t) = taxonomy(&[&[1, 1], &[0, 1]], &[1, 1]);
        assert!(t.semi_distinguished(&a, 1, &Q::from_int(1)));
        assert!(!t.distinguished[1]);
        assert!(t.distinguished[0]);
    }

    #[test]
    fn longest_chain_counts_classes() {
        let a = analysis(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        assert_eq!(a.longest_chain(&[0, 1, 2]), 3);
        assert_eq!(a.longest_chain(&[0, 2]), 2);
        assert_eq!(a.longest_chain(&[]), 0);
    }
}
