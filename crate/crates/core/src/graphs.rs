//! Enumeration of the decorated trees indexing torus-fixed loci.
//!
//! A fixed-point component of the torus action on the space of degree-`d`
//! stable maps to `P^r` is indexed by a tree whose edges carry positive
//! covering degrees summing to `d` and whose vertices carry labels in
//! `{0..r}` with adjacent labels distinct. This module enumerates those
//! graphs exactly once per isomorphism class of decorated shape, together
//! with every proper labeling and the automorphism order `a_Γ` that weights
//! each summand of the Bott formula.
//!
//! Enumeration is deterministic: decorated shapes are emitted in canonical-key
//! order and labelings in lexicographic order of the label vector.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::error::{Error, Result};

/// Unlabeled, undecorated tree; the underlying shape of a fixed-point graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeShape {
    vertex_count: usize,
    /// Unordered vertex pairs, stored with the smaller endpoint first.
    edges: Vec<(usize, usize)>,
}

impl TreeShape {
    /// Builds a tree from its edge set, rejecting anything that is not a
    /// connected acyclic graph on at least two vertices.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count < 2 {
            return Err(Error::InvalidInput(format!(
                "a tree shape needs at least 2 vertices, got {vertex_count}"
            )));
        }
        if edges.len() != vertex_count - 1 {
            return Err(Error::InvalidInput(format!(
                "{} edges on {vertex_count} vertices cannot form a tree",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count || u == v {
                return Err(Error::InvalidInput(format!("bad edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        // Edge count is right, so connectivity alone rules out cycles.
        let mut seen = vec![false; vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidInput("edge set is not connected".into()));
        }
        let edges = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Canonical key of the shape alone: equal keys iff isomorphic trees.
    pub fn canonical_key(&self) -> Vec<u8> {
        canonize(self.vertex_count, &self.edges, &vec![1; self.edges.len()]).key
    }
}

/// A tree shape with positive integer edge degrees, held in canonical form.
///
/// Vertices are renumbered so that vertex 0 is the (bi)centroid root and
/// every other vertex appears after its parent; edge `e` joins vertex `e+1`
/// to its parent. Two decorated shapes are isomorphic as degree-decorated
/// trees iff their canonical keys are equal.
#[derive(Clone, Debug)]
pub struct DecoratedShape {
    shape: TreeShape,
    /// degrees[e] is the degree of edge `e`, i.e. of the edge from vertex
    /// `e+1` up to its parent.
    degrees: Vec<u32>,
    aut_order: u64,
    key: Vec<u8>,
    /// parent[v] for v >= 1; parent[0] is a sentinel.
    parent: Vec<usize>,
    /// incident[v] = (edge id, other endpoint) for every edge at v.
    incident: Vec<Vec<(usize, usize)>>,
    a_gamma: u64,
}

impl DecoratedShape {
    /// Canonical form of `shape` with `degrees[e]` on edge `shape.edges()[e]`.
    pub fn new(shape: &TreeShape, degrees: &[u32]) -> Result<Self> {
        if degrees.len() != shape.edge_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} edge degrees, got {}",
                shape.edge_count(),
                degrees.len()
            )));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidInput("edge degrees must be positive".into()));
        }
        Ok(Self::from_canon(canonize(
            shape.vertex_count,
            &shape.edges,
            degrees,
        )))
    }

    fn from_canon(canon: Canon) -> Self {
        let n = canon.parent.len();
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (canon.parent[v], v)).collect();
        let mut incident = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            incident[u].push((e, v));
            incident[v].push((e, u));
        }
        let degree_product: u64 = canon.degrees.iter().map(|&d| d as u64).product();
        let a_gamma = canon.aut_order * degree_product;
        DecoratedShape {
            shape: TreeShape {
                vertex_count: n,
                edges,
            },
            degrees: canon.degrees,
            aut_order: canon.aut_order,
            key: canon.key,
            parent: canon.parent,
            incident,
            a_gamma,
        }
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn vertex_count(&self) -> usize {
        self.shape.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.len()
    }

    /// Degree of edge `e`.
    pub fn edge_degree(&self, e: usize) -> u32 {
        self.degrees[e]
    }

    pub fn edge_degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Endpoints of edge `e` (parent first).
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        self.shape.edges[e]
    }

    /// Total degree: the sum of all edge degrees.
    pub fn total_degree(&self) -> u32 {
        self.degrees.iter().sum()
    }

    /// Number of automorphisms of the shape preserving edge degrees.
    pub fn aut_order(&self) -> u64 {
        self.aut_order
    }

    /// Canonical key; equal iff isomorphic as degree-decorated trees.
    pub fn canonical_key(&self) -> &[u8] {
        &self.key
    }

    /// Order of the symmetry group weighting each Bott summand:
    /// `aut_order * product of edge degrees`.
    pub fn a_gamma(&self) -> u64 {
        self.a_gamma
    }

    /// Number of edges at vertex `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// Edges at vertex `v` as (edge id, other endpoint) pairs.
    pub fn incident_edges(&self, v: usize) -> &[(usize, usize)] {
        &self.incident[v]
    }

    /// Number of proper labelings into `{0..r}`: `(r+1) * r^(n-1)`.
    pub fn labeling_count(&self, r: usize) -> u64 {
        (r as u64 + 1) * (r as u64).pow(self.vertex_count() as u32 - 1)
    }

    /// The `index`-th labeling in lexicographic order of the label vector.
    pub fn labeling_at(&self, r: usize, index: u64) -> Vec<u8> {
        let n = self.vertex_count();
        let mut digits = vec![0u64; n];
        let mut rest = index;
        for v in (1..n).rev() {
            digits[v] = rest % r as u64;
            rest /= r as u64;
        }
        debug_assert!(rest <= r as u64);
        digits[0] = rest;
        let mut labels = vec![0u8; n];
        for v in 0..n {
            labels[v] = self.decode_digit(v, digits[v], &labels);
        }
        labels
    }

    fn decode_digit(&self, v: usize, digit: u64, labels: &[u8]) -> u8 {
        if v == 0 {
            return digit as u8;
        }
        // Skip over the parent's label so adjacent labels stay distinct.
        let p = labels[self.parent[v]] as u64;
        if digit < p {
            digit as u8
        } else {
            digit as u8 + 1
        }
    }

    /// Runs `f` over the labelings with indices in `range`, in order,
    /// stopping early on the first error.
    pub fn for_each_labeling_in<E>(
        &self,
        r: usize,
        range: Range<u64>,
        mut f: impl FnMut(&[u8]) -> std::result::Result<(), E>,
    ) -> std::result::Result<(), E> {
        if range.is_empty() {
            return Ok(());
        }
        let n = self.vertex_count();
        let mut digits = vec![0u64; n];
        let mut rest = range.start;
        for v in (1..n).rev() {
            digits[v] = rest % r as u64;
            rest /= r as u64;
        }
        digits[0] = rest;
        let mut labels = vec![0u8; n];
        for v in 0..n {
            labels[v] = self.decode_digit(v, digits[v], &labels);
        }
        let mut remaining = range.end - range.start;
        loop {
            f(&labels)?;
            remaining -= 1;
            if remaining == 0 {
                return Ok(());
            }
            // Odometer step; labels of every vertex from the changed
            // position on must be re-decoded because their parents moved.
            let mut v = n - 1;
            loop {
                let radix = if v == 0 { r as u64 + 1 } else { r as u64 };
                digits[v] += 1;
                if digits[v] < radix {
                    break;
                }
                digits[v] = 0;
                debug_assert!(v > 0, "odometer overflow before range end");
                v -= 1;
            }
            for u in v..n {
                labels[u] = self.decode_digit(u, digits[u], &labels);
            }
        }
    }
}

/// One Bott summand: a decorated shape plus a proper vertex labeling.
#[derive(Clone, Debug)]
pub struct FixedGraph<'a> {
    decorated: &'a DecoratedShape,
    labels: Vec<u8>,
}

impl<'a> FixedGraph<'a> {
    /// Wraps a labeling, checking range and the adjacent-distinct condition.
    pub fn new(decorated: &'a DecoratedShape, labels: Vec<u8>, r: usize) -> Result<Self> {
        if labels.len() != decorated.vertex_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} labels, got {}",
                decorated.vertex_count(),
                labels.len()
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| l as usize > r) {
            return Err(Error::InvalidInput(format!(
                "label {l} out of range 0..={r}"
            )));
        }
        for e in 0..decorated.edge_count() {
            let (u, v) = decorated.edge_endpoints(e);
            if labels[u] == labels[v] {
                return Err(Error::InvalidInput(format!(
                    "adjacent vertices {u} and {v} share label {}",
                    labels[u]
                )));
            }
        }
        Ok(FixedGraph { decorated, labels })
    }

    pub fn decorated(&self) -> &'a DecoratedShape {
        self.decorated
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Fixed-point label of vertex `v`.
    pub fn label(&self, v: usize) -> usize {
        self.labels[v] as usize
    }

    pub fn vertex_count(&self) -> usize {
        self.decorated.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.decorated.edge_count()
    }

    /// Order of the automorphism group weighting this summand.
    pub fn a_gamma(&self) -> u64 {
        self.decorated.a_gamma()
    }

    /// Number of edges at vertex `v`.
    pub fn valence(&self, v: usize) -> usize {
        self.decorated.valence(v)
    }

    /// Every (vertex, incident edge) pair, each exactly once.
    pub fn flags(&self) -> Vec<Flag> {
        (0..self.edge_count())
            .flat_map(|e| {
                let (u, v) = self.decorated.edge_endpoints(e);
                [Flag { vertex: u, edge: e }, Flag { vertex: v, edge: e }]
            })
            .collect()
    }

    /// One catalog record: canonical key, edge list with degrees, label
    /// vector, and the summand weight `a_Γ`.
    pub fn catalog_line(&self) -> String {
        let edges = (0..self.edge_count())
            .map(|e| {
                let (u, v) = self.decorated.edge_endpoints(e);
                format!("{u}-{v}:{}", self.decorated.edge_degree(e))
            })
            .collect::<Vec<_>>()
            .join(",");
        let labels = self
            .labels
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "key={} edges={edges} labels={labels} a={}",
            hex(self.decorated.canonical_key()),
            self.a_gamma()
        )
    }
}

/// A flag: a vertex together with an edge containing it.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub vertex: usize,
    pub edge: usize,
}

fn hex(bytes: &[u8]) -> String {
    use std::fmt::Write;
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// One representative per isomorphism class of trees with `1..=max_edges`
/// edges, grown by leaf attachment with canonical-key deduplication.
pub fn enumerate_shapes(max_edges: usize) -> Vec<TreeShape> {
    assert!(max_edges >= 1, "max_edges must be at least 1");
    let mut out = Vec::new();
    let mut level: BTreeMap<Vec<u8>, TreeShape> = BTreeMap::new();
    let single = TreeShape {
        vertex_count: 2,
        edges: vec![(0, 1)],
    };
    level.insert(single.canonical_key(), single);
    for _edges in 1..=max_edges {
        out.extend(level.values().cloned());
        let mut next: BTreeMap<Vec<u8>, TreeShape> = BTreeMap::new();
        for shape in level.values() {
            let n = shape.vertex_count;
            for v in 0..n {
                let mut edges = shape.edges.clone();
                edges.push((v, n));
                let canon = canonize(n + 1, &edges, &vec![1; edges.len()]);
                next.entry(canon.key.clone()).or_insert_with(|| {
                    let m = canon.parent.len();
                    TreeShape {
                        vertex_count: m,
                        edges: (1..m).map(|v| (canon.parent[v], v)).collect(),
                    }
                });
            }
        }
        level = next;
    }
    out
}

/// One representative per isomorphism class of positive edge-degree
/// assignments on `shape` summing to `d`, with automorphism orders.
///
/// Empty when the shape has more than `d` edges.
pub fn decorate(shape: &TreeShape, d: u32) -> Vec<DecoratedShape> {
    let e = shape.edge_count();
    if e as u32 > d {
        return Vec::new();
    }
    let mut seen: BTreeMap<Vec<u8>, DecoratedShape> = BTreeMap::new();
    let mut degrees = vec![1u32; e];
    compositions(d, 0, &mut degrees, &mut |degs| {
        let canon = canonize(shape.vertex_count, &shape.edges, degs);
        if !seen.contains_key(&canon.key) {
            seen.insert(canon.key.clone(), DecoratedShape::from_canon(canon));
        }
    });
    seen.into_values().collect()
}

/// All decorated shape classes of total degree `d`, in canonical-key order.
pub fn decorated_shapes(d: u32) -> Vec<DecoratedShape> {
    let mut out: Vec<DecoratedShape> = enumerate_shapes(d as usize)
        .iter()
        .flat_map(|s| decorate(s, d))
        .collect();
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out
}

/// Every labeling of `decorated` into `{0..r}` with adjacent labels
/// distinct, in lexicographic order. All labelings are emitted; the
/// compensating weight is `1/a_Γ` per labeling.
pub fn enumerate_labelings<'a>(
    decorated: &'a DecoratedShape,
    r: usize,
) -> impl Iterator<Item = FixedGraph<'a>> + 'a {
    assert!(r >= 1, "r must be at least 1");
    let total = decorated.labeling_count(r);
    let mut buffered = Vec::new();
    let mut next = 0u64;
    std::iter::from_fn(move || {
        if buffered.is_empty() {
            if next >= total {
                return None;
            }
            // Decode in blocks to amortize the odometer setup.
            let end = (next + 4096).min(total);
            let _ = decorated.for_each_labeling_in::<()>(r, next..end, |labels| {
                buffered.push(labels.to_vec());
                Ok(())
            });
            buffered.reverse();
            next = end;
        }
        buffered
            .pop()
            .map(|labels| FixedGraph { decorated, labels })
    })
}

/// Total number of (decorated shape class, labeling) pairs for `(r, d)`.
pub fn count_fixed_graphs(r: usize, d: u32) -> u64 {
    assert!(r >= 1 && d >= 1);
    decorated_shapes(d)
        .iter()
        .map(|s| s.labeling_count(r))
        .sum()
}

fn compositions(remaining: u32, pos: usize, degrees: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    let parts = degrees.len() - pos;
    if parts == 0 {
        if remaining == 0 {
            f(degrees);
        }
        return;
    }
    // Each remaining part needs at least 1.
    for v in 1..=(remaining - (parts as u32 - 1)) {
        degrees[pos] = v;
        compositions(remaining - v, pos + 1, degrees, f);
    }
}

/// Canonical form of a degree-decorated tree: byte key, automorphism order,
/// and a renumbering with parents before children.
struct Canon {
    key: Vec<u8>,
    aut_order: u64,
    /// parent[v] for v >= 1; parent[0] is usize::MAX.
    parent: Vec<usize>,
    /// degrees[v-1] is the degree of the edge from v to parent[v].
    degrees: Vec<u32>,
}

struct Enc {
    key: Vec<u8>,
    aut: u64,
    deg_up: u32,
    children: Vec<Enc>,
}

/// Centroid-rooted recursive encoding with edge degrees on the child links.
/// A bicentroid is rooted at the midpoint edge with the two halves ordered
/// by their encodings.
fn canonize(n: usize, edges: &[(usize, usize)], degrees: &[u32]) -> Canon {
    debug_assert!(n >= 2 && edges.len() == n - 1 && degrees.len() == edges.len());
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, degrees[e]));
        adj[v].push((u, degrees[e]));
    }
    let cents = centroids(n, &adj);
    let (key, aut_order, roots) = match cents[..] {
        [c] => {
            let root = encode(c, usize::MAX, &adj);
            (root.key.clone(), root.aut, vec![(root, 0u32)])
        }
        [c1, c2] => {
            let bridge = adj[c1]
                .iter()
                .find(|&&(u, _)| u == c2)
                .expect("bicentroid vertices are adjacent")
                .1;
            let a = encode(c1, c2, &adj);
            let b = encode(c2, c1, &adj);
            let (lo, hi) = if a.key <= b.key { (a, b) } else { (b, a) };
            let swap = if lo.key == hi.key { 2 } else { 1 };
            let aut = lo.aut * hi.aut * swap;
            let mut key = vec![b'B'];
            key.extend_from_slice(&bridge.to_be_bytes());
            key.extend_from_slice(&lo.key);
            key.extend_from_slice(&hi.key);
            (key, aut, vec![(lo, 0u32), (hi, bridge)])
        }
        _ => unreachable!("a tree has one or two centroids"),
    };
    let mut parent = vec![usize::MAX; n];
    let mut out_degrees = vec![0u32; n - 1];
    let mut next_id = 0usize;
    for (node, deg) in &roots {
        let parent_id = if next_id == 0 { usize::MAX } else { 0 };
        assign_ids(
            node,
            parent_id,
            *deg,
            &mut next_id,
            &mut parent,
            &mut out_degrees,
        );
    }
    debug_assert_eq!(next_id, n);
    Canon {
        key,
        aut_order,
        parent,
        degrees: out_degrees,
    }
}

fn assign_ids(
    node: &Enc,
    parent_id: usize,
    deg: u32,
    next_id: &mut usize,
    parent: &mut [usize],
    degrees: &mut [u32],
) {
    let my = *next_id;
    *next_id += 1;
    if my > 0 {
        parent[my] = parent_id;
        degrees[my - 1] = deg;
    }
    for c in &node.children {
        assign_ids(c, my, c.deg_up, next_id, parent, degrees);
    }
}

fn encode(v: usize, from: usize, adj: &[Vec<(usize, u32)>]) -> Enc {
    let mut children: Vec<Enc> = adj[v]
        .iter()
        .filter(|&&(u, _)| u != from)
        .map(|&(u, deg)| {
            let mut e = encode(u, v, adj);
            e.deg_up = deg;
            e
        })
        .collect();
    children.sort_by(|a, b| (a.deg_up, &a.key).cmp(&(b.deg_up, &b.key)));
    // Identical (incoming degree, subtree) children may be permuted freely.
    let mut aut: u64 = 1;
    let mut run = 1u64;
    for i in 1..=children.len() {
        if i < children.len()
            && children[i].deg_up == children[i - 1].deg_up
            && children[i].key == children[i - 1].key
        {
            run += 1;
        } else {
            aut *= factorial(run);
            run = 1;
        }
    }
    for c in &children {
        aut *= c.aut;
    }
    let mut key = vec![b'('];
    for c in &children {
        key.extend_from_slice(&c.deg_up.to_be_bytes());
        key.extend_from_slice(&c.key);
    }
    key.push(b')');
    Enc {
        key,
        aut,
        deg_up: 0,
        children,
    }
}

fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

fn centroids(n: usize, adj: &[Vec<(usize, u32)>]) -> Vec<usize> {
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        order.push(v);
        for &(u, _) in &adj[v] {
            if u != parent[v] {
                parent[u] = v;
                stack.push(u);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev() {
        if parent[v] != usize::MAX {
            size[parent[v]] += size[v];
        }
    }
    let mut best = usize::MAX;
    let mut cents = Vec::new();
    for v in 0..n {
        let mut largest = n - size[v];
        for &(u, _) in &adj[v] {
            if u != parent[v] {
                largest = largest.max(size[u]);
            }
        }
        match largest.cmp(&best) {
            std::cmp::Ordering::Less => {
                best = largest;
                cents.clear();
                cents.push(v);
            }
            std::cmp::Ordering::Equal => cents.push(v),
            std::cmp::Ordering::Greater => {}
        }
    }
    cents
}
