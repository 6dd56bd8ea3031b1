//! Simplicial complexes over the vertex set `{1, ..., n}`.
//!
//! Two representations are supported: [`GeneralComplex`] stores an explicit
//! facet-based complex whose full face list is derived by downward closure,
//! and [`CliqueComplex`] represents the clique complex of a graph implicitly
//! through its adjacency relation. [`Complex`] unifies the two behind the
//! query operations the estimators need: membership, enumeration, uniform
//! sampling and up-degrees.
//!
//! Faces are oriented by listing vertices in strictly increasing order; the
//! vertex set is `1..=n`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// 1-based vertex identifier.
pub type VertexId = u32;

type VertexVec = SmallVec<[VertexId; 8]>;

/// An oriented face: a nonempty set of vertices stored in strictly
/// increasing order. A face with `k + 1` vertices has dimension `k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Face {
    verts: VertexVec,
}

impl Face {
    /// Builds a face from arbitrary vertex ids, sorting them. Duplicate
    /// vertices or an empty set are rejected.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let mut verts: VertexVec = vertices.into_iter().collect();
        verts.sort_unstable();
        if verts.is_empty() || verts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFace);
        }
        Ok(Face { verts })
    }

    /// Wraps a vertex list already known to be strictly increasing.
    pub(crate) fn from_sorted(verts: VertexVec) -> Self {
        debug_assert!(verts.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(!verts.is_empty());
        Face { verts }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.verts
    }

    /// Dimension `k`: one less than the number of vertices.
    pub fn dim(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn max_vertex(&self) -> VertexId {
        *self.verts.last().expect("face is nonempty")
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.verts.binary_search(&v).is_ok()
    }

    /// 0-based position of `v` in the sorted vertex list.
    pub fn position_of(&self, v: VertexId) -> Option<usize> {
        self.verts.binary_search(&v).ok()
    }

    /// The face `self ∪ {v}`. Returns `None` when `v` is already a vertex.
    pub fn extended(&self, v: VertexId) -> Option<Face> {
        match self.verts.binary_search(&v) {
            Ok(_) => None,
            Err(pos) => {
                let mut verts = self.verts.clone();
                verts.insert(pos, v);
                Some(Face { verts })
            }
        }
    }

    /// The face `(self \ {remove}) ∪ {add}`; panics if `remove` is absent
    /// or `add` already present.
    pub fn replaced(&self, remove: VertexId, add: VertexId) -> Face {
        let mut verts = self.verts.clone();
        let pos = verts.binary_search(&remove).expect("vertex to remove");
        verts.remove(pos);
        let ins = verts.binary_search(&add).expect_err("vertex already present");
        verts.insert(ins, add);
        Face { verts }
    }

    /// Subfaces of codimension one, in vertex-removal order: the `ℓ`-th
    /// yielded face omits the `ℓ`-th vertex (0-based).
    pub fn boundary(&self) -> impl Iterator<Item = Face> + '_ {
        (0..self.verts.len()).filter_map(move |skip| {
            if self.verts.len() == 1 {
                return None;
            }
            let mut verts = self.verts.clone();
            verts.remove(skip);
            Some(Face { verts })
        })
    }

    /// Size of the symmetric difference with another face.
    pub fn symmetric_difference_size(&self, other: &Face) -> usize {
        let (mut a, mut b) = (0, 0);
        let mut shared = 0;
        while a < self.verts.len() && b < other.verts.len() {
            match self.verts[a].cmp(&other.verts[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    shared += 1;
                    a += 1;
                    b += 1;
                }
            }
        }
        self.verts.len() + other.verts.len() - 2 * shared
    }

    /// Union with another face, as a face.
    pub fn union(&self, other: &Face) -> Face {
        let mut verts: VertexVec = SmallVec::new();
        let (mut a, mut b) = (0, 0);
        while a < self.verts.len() || b < other.verts.len() {
            let va = self.verts.get(a).copied();
            let vb = other.verts.get(b).copied();
            match (va, vb) {
                (Some(x), Some(y)) if x == y => {
                    verts.push(x);
                    a += 1;
                    b += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    verts.push(x);
                    a += 1;
                }
                (Some(_), Some(y)) => {
                    verts.push(y);
                    b += 1;
                }
                (Some(x), None) => {
                    verts.push(x);
                    a += 1;
                }
                (None, Some(y)) => {
                    verts.push(y);
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Face { verts }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.verts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Face {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.verts.as_slice().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let verts = Vec::<VertexId>::deserialize(deserializer)?;
        Face::new(verts).map_err(serde::de::Error::custom)
    }
}

fn check_vertex_range(f: &Face, n: u32) -> Result<()> {
    let first = f.verts[0];
    if first < 1 {
        return Err(Error::VertexOutOfRange { id: first, n });
    }
    let last = f.max_vertex();
    if last > n {
        return Err(Error::VertexOutOfRange { id: last, n });
    }
    Ok(())
}

/// An explicit simplicial complex given by its maximal faces; the full
/// per-dimension face index is materialized by downward closure at
/// construction time.
#[derive(Debug)]
pub struct GeneralComplex {
    n: u32,
    facets: Vec<Face>,
    /// `levels[k]` lists all k-faces in lexicographic order.
    levels: Vec<Arc<[Face]>>,
}

impl GeneralComplex {
    pub fn from_facets(n: u32, facets: Vec<Face>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParams("vertex count must be positive".into()));
        }
        for f in &facets {
            check_vertex_range(f, n)?;
        }
        let mut facets: Vec<Face> = facets;
        facets.sort_unstable();
        facets.dedup();
        // Drop facets contained in another stored face.
        let maximal: Vec<Face> = facets
            .iter()
            .filter(|f| {
                !facets.iter().any(|g| {
                    g.vertex_count() > f.vertex_count()
                        && f.verts.iter().all(|v| g.contains_vertex(*v))
                })
            })
            .cloned()
            .collect();

        let max_dim = maximal.iter().map(Face::dim).max();
        let mut sets: Vec<BTreeSet<Face>> = match max_dim {
            Some(d) => vec![BTreeSet::new(); d + 1],
            None => Vec::new(),
        };
        for f in &maximal {
            sets[f.dim()].insert(f.clone());
        }
        // Downward closure, one dimension at a time.
        for k in (1..sets.len()).rev() {
            let lower: Vec<Face> = sets[k].iter().flat_map(|f| f.boundary().collect::<Vec<_>>()).collect();
            sets[k - 1].extend(lower);
        }
        let levels = sets
            .into_iter()
            .map(|s| Arc::from(s.into_iter().collect::<Vec<_>>()))
            .collect();
        Ok(GeneralComplex { n, facets: maximal, levels })
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }
}

/// The clique complex of a simple undirected graph on `{1, ..., n}`: a
/// vertex set is a face exactly when it induces a clique. Enumerated face
/// lists are cached per dimension.
#[derive(Debug)]
pub struct CliqueComplex {
    n: u32,
    adj: Vec<bool>,
    edges: Vec<(VertexId, VertexId)>,
    cache: RwLock<Vec<Option<Arc<[Face]>>>>,
}

impl CliqueComplex {
    pub fn from_edges(n: u32, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParams("vertex count must be positive".into()));
        }
        let nu = n as usize;
        let mut adj = vec![false; nu * nu];
        let mut dedup = Vec::new();
        for &(u, v) in edges {
            for id in [u, v] {
                if id < 1 || id > n {
                    return Err(Error::VertexOutOfRange { id, n });
                }
            }
            if u == v {
                return Err(Error::InvalidParams(format!("self-loop at vertex {u}")));
            }
            let (a, b) = (u.min(v) as usize - 1, u.max(v) as usize - 1);
            if !adj[a * nu + b] {
                adj[a * nu + b] = true;
                adj[b * nu + a] = true;
                dedup.push((a as u32 + 1, b as u32 + 1));
            }
        }
        dedup.sort_unstable();
        Ok(CliqueComplex {
            n,
            adj,
            edges: dedup,
            cache: RwLock::new(vec![None; nu]),
        })
    }

    #[inline]
    pub fn is_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        u != v && self.adj[(u as usize - 1) * self.n as usize + (v as usize - 1)]
    }

    /// Edges of the underlying graph, sorted.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    fn is_clique(&self, verts: &[VertexId]) -> bool {
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if !self.is_adjacent(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// Enumerates all (k+1)-cliques in lexicographic order by ordered
    /// backtracking over the adjacency relation.
    fn enumerate_cliques(&self, k: usize) -> Vec<Face> {
        let size = k + 1;
        let mut out = Vec::new();
        let mut current: VertexVec = SmallVec::new();
        self.extend_clique(&mut current, 1, size, &mut out);
        out
    }

    fn extend_clique(&self, current: &mut VertexVec, start: VertexId, size: usize, out: &mut Vec<Face>) {
        if current.len() == size {
            out.push(Face::from_sorted(current.clone()));
            return;
        }
        // Not enough vertices left to finish the clique.
        let needed = (size - current.len()) as u32;
        if start + needed - 1 > self.n {
            return;
        }
        for v in start..=self.n {
            if current.iter().all(|&u| self.is_adjacent(u, v)) {
                current.push(v);
                self.extend_clique(current, v + 1, size, out);
                current.pop();
            }
        }
    }

    fn cached_faces(&self, k: usize) -> Arc<[Face]> {
        if k >= self.n as usize {
            return Arc::from(Vec::new());
        }
        if let Some(faces) = &self.cache.read().expect("cache lock")[k] {
            return faces.clone();
        }
        let faces: Arc<[Face]> = Arc::from(self.enumerate_cliques(k));
        let mut cache = self.cache.write().expect("cache lock");
        cache[k].get_or_insert(faces).clone()
    }
}

/// A simplicial complex in either representation. All queries are read-only
/// and safe to share across threads.
#[derive(Debug)]
pub enum Complex {
    General(GeneralComplex),
    Clique(CliqueComplex),
}

impl Complex {
    pub fn vertex_count(&self) -> u32 {
        match self {
            Complex::General(c) => c.n,
            Complex::Clique(c) => c.n,
        }
    }

    pub fn is_clique(&self) -> bool {
        matches!(self, Complex::Clique(_))
    }

    /// Membership query. Vertex ids outside `1..=n` are an input error.
    pub fn contains(&self, face: &Face) -> Result<bool> {
        check_vertex_range(face, self.vertex_count())?;
        Ok(self.contains_in_range(face))
    }

    /// Membership for a face already known to be within vertex range.
    pub(crate) fn contains_in_range(&self, face: &Face) -> bool {
        match self {
            Complex::General(c) => {
                let k = face.dim();
                match c.levels.get(k) {
                    Some(level) => level.binary_search(face).is_ok(),
                    None => false,
                }
            }
            Complex::Clique(c) => c.is_clique(face.vertices()),
        }
    }

    /// All k-faces in lexicographic order. Empty when `d_k = 0`.
    pub fn k_faces(&self, k: usize) -> Arc<[Face]> {
        match self {
            Complex::General(c) => c.levels.get(k).cloned().unwrap_or_else(|| Arc::from(Vec::new())),
            Complex::Clique(c) => c.cached_faces(k),
        }
    }

    /// `d_k`, the number of k-faces.
    pub fn face_count(&self, k: usize) -> usize {
        self.k_faces(k).len()
    }

    /// Largest k with `d_k > 0`, or `None` for a complex without faces.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            Complex::General(c) => c.levels.len().checked_sub(1),
            Complex::Clique(c) => {
                let mut dim = None;
                for k in 0..c.n as usize {
                    if self.face_count(k) == 0 {
                        break;
                    }
                    dim = Some(k);
                }
                dim
            }
        }
    }

    /// Draws a k-face uniformly at random.
    pub fn sample_k_face<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<Face> {
        let faces = self.k_faces(k);
        if faces.is_empty() {
            return Err(Error::EmptyDimension { k });
        }
        let idx = rng.gen_range(0..faces.len());
        Ok(faces[idx].clone())
    }

    /// Number of (k+1)-faces containing `face`, found by `n - k - 1`
    /// membership queries.
    pub fn up_degree(&self, face: &Face) -> Result<usize> {
        if !self.contains(face)? {
            return Err(Error::NotAFace { face: face.to_string() });
        }
        Ok(self.up_degree_unchecked(face))
    }

    pub(crate) fn up_degree_unchecked(&self, face: &Face) -> usize {
        let mut count = 0;
        for v in 1..=self.vertex_count() {
            if face.contains_vertex(v) {
                continue;
            }
            let sup = face.extended(v).expect("v not in face");
            if self.contains_in_range(&sup) {
                count += 1;
            }
        }
        count
    }

    /// Maximum up-degree over all k-faces.
    pub fn max_up_degree(&self, k: usize) -> usize {
        self.k_faces(k)
            .iter()
            .map(|f| self.up_degree_unchecked(f))
            .max()
            .unwrap_or(0)
    }
}
