//! Finite projective spaces and polar spaces of quadrics, with every
//! (singular) subspace enumerated up front.
//!
//! Coordinates follow a fixed hyperbolic basis: coordinate `2(i-1)` is
//! `X_{-i}` and `2(i-1)+1` is `X_i`, so the hyperbolic form is
//! `Q = X_{-1}X_1 + ... + X_{-n}X_n`. The parabolic quadric adds `X_0` as the
//! last coordinate with `Q = X_{-1}X_1 + ... + X_{-n}X_n - X_0^2`.
//!
//! Subspaces carry dense ids: ids are grouped by vector dimension and sorted
//! inside each dimension by their reduced row-echelon basis. Points are the
//! subspaces of dimension 1, so a point index is also a subspace id.

use std::ops::Range;

use rand::Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::bitset::PointSet;
use crate::coxeter::CoxeterType;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, DEFAULT_FIELD_CAP};
use crate::linalg::{self, Vector};

/// Default budget for chamber enumeration.
pub const DEFAULT_CHAMBER_CAP: u64 = 1_000_000;

/// Default budget on the number of subspaces a builder will materialise.
pub const DEFAULT_OBJECT_CAP: u64 = 500_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Projective,
    Hyperbolic,
    Parabolic,
}

impl GeometryKind {
    pub fn name(self) -> &'static str {
        match self {
            GeometryKind::Projective => "projective",
            GeometryKind::Hyperbolic => "hyperbolic",
            GeometryKind::Parabolic => "parabolic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "projective" | "pg" => Ok(GeometryKind::Projective),
            "hyperbolic" | "hq" | "hyperbolic_quadric" => Ok(GeometryKind::Hyperbolic),
            "parabolic" | "pq" | "parabolic_quadric" => Ok(GeometryKind::Parabolic),
            other => Err(Error::Config(format!("unknown geometry kind `{other}`"))),
        }
    }

    pub fn is_polar(self) -> bool {
        self != GeometryKind::Projective
    }
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub field_cap: u32,
    pub object_cap: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { field_cap: DEFAULT_FIELD_CAP, object_cap: DEFAULT_OBJECT_CAP }
    }
}

#[derive(Clone, Debug)]
pub struct Subspace {
    /// Reduced row-echelon basis.
    pub basis: Vec<Vector>,
    pub points: PointSet,
    /// Vector-space dimension.
    pub dim: usize,
}

/// A chamber stores one vertex per node of the diagram, in node order.
///
/// For hyperbolic quadrics the last two slots are the maximal subspaces of
/// the class of node `n-1` and of node `n`; the submaximal subspace of the
/// flag is their intersection and is not a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chamber {
    vertices: SmallVec<[u32; 8]>,
}

impl Chamber {
    pub fn from_vertices(v: &[u32]) -> Self {
        Chamber { vertices: SmallVec::from_slice(v) }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }
}

#[derive(Clone, Debug)]
pub struct Geometry {
    kind: GeometryKind,
    n: usize,
    field: Field,
    ambient: usize,
    subspaces: Vec<Subspace>,
    dim_start: Vec<u32>,
    index: FxHashMap<PointSet, u32>,
    /// Dense table from base-q vector code to point id (`u32::MAX` if none).
    point_code: Vec<u32>,
    perps: Vec<PointSet>,
    up: Vec<Vec<u32>>,
    down: Vec<Vec<u32>>,
    /// For hyperbolic maximals: the node (0-based, `n-2` or `n-1`).
    max_node: Vec<u8>,
    /// Projective spaces: `U -> U^perp` for the standard dot product.
    std_perp: Vec<u32>,
}

fn gaussian(n: u32, k: u32, q: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// Closed-form count of the (singular) subspaces of vector dimension `k`.
pub fn subspace_count(kind: GeometryKind, n: usize, q: u64, k: usize) -> u64 {
    let (n, k) = (n as u32, k as u32);
    match kind {
        GeometryKind::Projective => gaussian(n + 1, k, q),
        GeometryKind::Hyperbolic | GeometryKind::Parabolic => {
            let e = (kind == GeometryKind::Parabolic) as u32;
            gaussian(n, k, q) * (0..k).map(|i| q.pow(n - 1 + e - i) + 1).product::<u64>()
        }
    }
}

impl Geometry {
    pub fn build_projective(n: usize, q: u32) -> Result<Self> {
        Self::build(GeometryKind::Projective, n, q, &BuildOptions::default())
    }

    pub fn build_hyperbolic_quadric(n: usize, q: u32) -> Result<Self> {
        Self::build(GeometryKind::Hyperbolic, n, q, &BuildOptions::default())
    }

    pub fn build_parabolic_quadric(n: usize, q: u32) -> Result<Self> {
        Self::build(GeometryKind::Parabolic, n, q, &BuildOptions::default())
    }

    pub fn build(kind: GeometryKind, n: usize, q: u32, opts: &BuildOptions) -> Result<Self> {
        let range_ok = match kind {
            GeometryKind::Projective => (2..=5).contains(&n),
            GeometryKind::Hyperbolic => (4..=5).contains(&n),
            GeometryKind::Parabolic => n == 3 && (q == 2 || q == 3),
        };
        if !range_ok {
            return Err(Error::OutOfRange(format!("{} geometry with n = {n}, q = {q}", kind.name())));
        }
        if q > opts.field_cap {
            return Err(Error::UnsupportedField { q, reason: format!("exceeds the configured cap {}", opts.field_cap) });
        }
        let field = Field::new(q)?;
        let objects: u64 = (1..=n).map(|k| subspace_count(kind, n, q as u64, k)).sum();
        if objects > opts.object_cap {
            return Err(Error::BudgetExceeded { what: "subspace enumeration", count: objects, cap: opts.object_cap });
        }
        let ambient = match kind {
            GeometryKind::Projective => n + 1,
            GeometryKind::Hyperbolic => 2 * n,
            GeometryKind::Parabolic => 2 * n + 1,
        };
        let mut g = Geometry {
            kind,
            n,
            field,
            ambient,
            subspaces: vec![],
            dim_start: vec![],
            index: FxHashMap::default(),
            point_code: vec![],
            perps: vec![],
            up: vec![],
            down: vec![],
            max_node: vec![],
            std_perp: vec![],
        };
        g.build_points();
        for k in 1..n {
            g.build_level(k)?;
        }
        g.dim_start.push(g.subspaces.len() as u32);
        g.index = g.subspaces.iter().enumerate().map(|(i, s)| (s.points.clone(), i as u32)).collect();
        if kind == GeometryKind::Hyperbolic {
            g.classify_maximals()?;
        }
        if kind == GeometryKind::Projective {
            g.std_perp = (0..g.subspaces.len())
                .map(|id| {
                    let c = linalg::orthogonal_complement(&g.field, &g.subspaces[id].basis, g.ambient);
                    g.find_subspace(&c).ok_or_else(|| Error::Internal("complement of a proper subspace".into()))
                })
                .collect::<Result<_>>()?;
        }
        Ok(g)
    }

    fn code(&self, v: &[Elem]) -> u64 {
        let q = self.field.order() as u64;
        v.iter().fold(0, |acc, &x| acc * q + x as u64)
    }

    pub fn quadratic_form(&self, v: &[Elem]) -> Elem {
        let f = &self.field;
        match self.kind {
            GeometryKind::Projective => 0,
            _ => {
                let mut acc = 0;
                for i in 0..self.n {
                    acc = f.add(acc, f.mul(v[2 * i], v[2 * i + 1]));
                }
                if self.kind == GeometryKind::Parabolic {
                    let x0 = v[2 * self.n];
                    acc = f.sub(acc, f.mul(x0, x0));
                }
                acc
            }
        }
    }

    /// Polarisation `B(x, y) = Q(x + y) - Q(x) - Q(y)`.
    pub fn bilinear_form(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = 0;
        for i in 0..self.n {
            acc = f.add(acc, f.add(f.mul(x[2 * i], y[2 * i + 1]), f.mul(x[2 * i + 1], y[2 * i])));
        }
        if self.kind == GeometryKind::Parabolic {
            let t = f.mul(x[2 * self.n], y[2 * self.n]);
            acc = f.sub(acc, f.add(t, t));
        }
        acc
    }

    /// Gram matrix of the bilinear form (zero for projective spaces).
    pub fn gram_matrix(&self) -> linalg::Matrix {
        let mut m = linalg::Matrix { n: self.ambient, data: vec![0; self.ambient * self.ambient] };
        if self.kind.is_polar() {
            for i in 0..self.ambient {
                for j in 0..self.ambient {
                    let (mut ei, mut ej) = (vec![0; self.ambient], vec![0; self.ambient]);
                    ei[i] = 1;
                    ej[j] = 1;
                    m.set(i, j, self.bilinear_form(&ei, &ej));
                }
            }
        }
        m
    }

    fn build_points(&mut self) {
        let q = self.field.order() as u64;
        let dim = self.ambient;
        let mut v = vec![0 as Elem; dim];
        self.point_code = vec![u32::MAX; q.pow(dim as u32) as usize];
        for code in 0..q.pow(dim as u32) {
            let mut c = code;
            for slot in v.iter_mut().rev() {
                *slot = (c % q) as Elem;
                c /= q;
            }
            if v.iter().find(|&&x| x != 0) != Some(&1) {
                continue;
            }
            if self.quadratic_form(&v) != 0 {
                continue;
            }
            let id = self.subspaces.len() as u32;
            self.point_code[code as usize] = id;
            self.subspaces.push(Subspace { basis: vec![v.clone()], points: PointSet::default(), dim: 1 });
        }
        let np = self.subspaces.len();
        for (i, s) in self.subspaces.iter_mut().enumerate() {
            s.points = PointSet::from_indices(np, [i]);
        }
        if self.kind.is_polar() {
            let vecs: Vec<Vector> = self.subspaces.iter().map(|s| s.basis[0].clone()).collect();
            self.perps = vecs
                .iter()
                .map(|x| PointSet::from_indices(np, (0..np).filter(|&j| self.bilinear_form(x, &vecs[j]) == 0)))
                .collect();
        }
        self.dim_start = vec![0];
        self.up = vec![vec![]; np];
        self.down = vec![vec![]; np];
    }

    /// Builds the subspaces of dimension `k+1` from those of dimension `k`.
    fn build_level(&mut self, k: usize) -> Result<()> {
        let np = self.point_count();
        let lo = self.dim_start[k - 1] as usize;
        let hi = self.subspaces.len();
        let mut local: FxHashMap<PointSet, u32> = FxHashMap::default();
        let mut fresh: Vec<Subspace> = Vec::new();
        let mut fresh_down: Vec<Vec<u32>> = Vec::new();
        let mut ups: Vec<Vec<u32>> = vec![vec![]; hi - lo];
        let all = PointSet::full(np);
        for u in lo..hi {
            let mut cand = if self.kind.is_polar() { self.perp_of(u) } else { all.clone() };
            cand.difference_with(&self.subspaces[u].points);
            let mut covered = self.subspaces[u].points.clone();
            let uvecs = self.span_vectors(&self.subspaces[u].basis);
            for p in cand.iter() {
                if covered.contains(p) {
                    continue;
                }
                let pts = self.extension_points(u, &uvecs, p)?;
                covered.union_with(&pts);
                let id = match local.get(&pts) {
                    Some(&id) => id,
                    None => {
                        let mut basis = self.subspaces[u].basis.clone();
                        basis.push(self.subspaces[p].basis[0].clone());
                        linalg::rref(&self.field, &mut basis);
                        let id = fresh.len() as u32;
                        local.insert(pts.clone(), id);
                        fresh.push(Subspace { basis, points: pts, dim: k + 1 });
                        fresh_down.push(vec![]);
                        id
                    }
                };
                ups[u - lo].push(id);
                fresh_down[id as usize].push(u as u32);
            }
        }
        // canonical order inside the level
        let mut order: Vec<usize> = (0..fresh.len()).collect();
        order.sort_by(|&a, &b| fresh[a].basis.cmp(&fresh[b].basis));
        let mut rank_of = vec![0u32; fresh.len()];
        for (pos, &old) in order.iter().enumerate() {
            rank_of[old] = (hi + pos) as u32;
        }
        for (u, list) in ups.into_iter().enumerate() {
            let mut l: Vec<u32> = list.into_iter().map(|i| rank_of[i as usize]).collect();
            l.sort();
            self.up[lo + u] = l;
        }
        self.dim_start.push(hi as u32);
        let mut fresh: Vec<Option<Subspace>> = fresh.into_iter().map(Some).collect();
        for &old in &order {
            let s = fresh[old].take().unwrap();
            if self.kind.is_polar() {
                let mut perp = PointSet::full(np);
                for b in &s.basis {
                    perp.intersect_with(&self.perps[self.point_id(b).unwrap() as usize]);
                }
                self.perps.push(perp);
            }
            self.subspaces.push(s);
            let mut d = std::mem::take(&mut fresh_down[old]);
            d.sort();
            self.down.push(d);
            self.up.push(vec![]);
        }
        Ok(())
    }

    /// Every vector (zero included) of the span of `basis`.
    fn span_vectors(&self, basis: &[Vector]) -> Vec<[Elem; 16]> {
        let f = &self.field;
        let mut out = vec![[0 as Elem; 16]];
        for b in basis {
            let prev = out.len();
            for s in f.elements().skip(1) {
                for i in 0..prev {
                    let mut v = out[i];
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = f.add(*x, f.mul(s, y));
                    }
                    out.push(v);
                }
            }
        }
        out
    }

    /// Points of `<U, p>`: those of `U` plus every `p + u`.
    fn extension_points(&self, u: usize, uvecs: &[[Elem; 16]], p: usize) -> Result<PointSet> {
        let f = &self.field;
        let q = f.order() as u64;
        let pv = &self.subspaces[p].basis[0];
        let mut set = self.subspaces[u].points.clone();
        for uv in uvecs {
            let mut w = [0 as Elem; 16];
            for i in 0..self.ambient {
                w[i] = f.add(pv[i], uv[i]);
            }
            let lead = w[..self.ambient].iter().find(|&&x| x != 0).copied().unwrap_or(1);
            let s = f.inv(lead);
            let code = w[..self.ambient].iter().fold(0u64, |acc, &x| acc * q + f.mul(x, s) as u64);
            let id = self.point_code[code as usize];
            if id == u32::MAX {
                return Err(Error::Internal("span of singular subspace and perp point is not singular".into()));
            }
            set.insert(id as usize);
        }
        Ok(set)
    }

    fn classify_maximals(&mut self) -> Result<()> {
        let n = self.n;
        let maxes = self.ids_of_dim(n);
        let subs = self.ids_of_dim(n - 1);
        for s in subs.clone() {
            if self.up[s as usize].len() != 2 {
                return Err(Error::Internal(format!(
                    "submaximal subspace {s} lies in {} maximals",
                    self.up[s as usize].len()
                )));
            }
        }
        let reference: Vec<Vector> = (0..n)
            .map(|i| {
                let mut e = vec![0; self.ambient];
                e[2 * i] = 1;
                e
            })
            .collect();
        let root = self.find_subspace(&reference).ok_or_else(|| Error::Internal("reference maximal missing".into()))?;
        let mut colour = vec![u8::MAX; maxes.len()];
        let off = maxes.start;
        colour[(root - off) as usize] = 0;
        let mut stack = vec![root];
        while let Some(m) = stack.pop() {
            let c = colour[(m - off) as usize];
            for &s in &self.down[m as usize] {
                for &m2 in &self.up[s as usize] {
                    if m2 == m {
                        continue;
                    }
                    let slot = &mut colour[(m2 - off) as usize];
                    if *slot == u8::MAX {
                        *slot = 1 - c;
                        stack.push(m2);
                    } else if *slot == c {
                        return Err(Error::Internal("maximal subspaces do not split into two classes".into()));
                    }
                }
            }
        }
        if colour.contains(&u8::MAX) {
            return Err(Error::Internal("maximal subspaces not connected through submaximals".into()));
        }
        // the class of <X_-1, ..., X_-n> is node n
        self.max_node = colour.into_iter().map(|c| if c == 0 { (n - 1) as u8 } else { (n - 2) as u8 }).collect();
        Ok(())
    }

    // ----- accessors ---------------------------------------------------------

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    /// The rank `n`: the number of diagram nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn coxeter_type(&self) -> CoxeterType {
        let n = self.n as u8;
        match self.kind {
            GeometryKind::Projective => CoxeterType::A(n),
            GeometryKind::Hyperbolic => CoxeterType::D(n),
            GeometryKind::Parabolic => CoxeterType::B(n),
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            GeometryKind::Projective => format!("PG({},{})", self.n, self.q()),
            GeometryKind::Hyperbolic => format!("HQ({},{})", self.n, self.q()),
            GeometryKind::Parabolic => format!("PQ({},{})", self.n, self.q()),
        }
    }

    pub fn point_count(&self) -> usize {
        self.dim_start.get(1).map_or(self.subspaces.len(), |&e| e as usize)
    }

    pub fn subspace_total(&self) -> usize {
        self.subspaces.len()
    }

    /// Ids of the subspaces of vector dimension `k` (`1 <= k <= n`).
    pub fn ids_of_dim(&self, k: usize) -> Range<u32> {
        self.dim_start[k - 1]..self.dim_start[k]
    }

    pub fn subspace(&self, id: u32) -> &Subspace {
        &self.subspaces[id as usize]
    }

    pub fn dim(&self, id: u32) -> usize {
        self.subspaces[id as usize].dim
    }

    pub fn points_of(&self, id: u32) -> &PointSet {
        &self.subspaces[id as usize].points
    }

    pub fn point_vector(&self, p: u32) -> &Vector {
        &self.subspaces[p as usize].basis[0]
    }

    /// Subspaces of dimension one higher containing `id`.
    pub fn up(&self, id: u32) -> &[u32] {
        &self.up[id as usize]
    }

    /// Subspaces of dimension one lower contained in `id`.
    pub fn down(&self, id: u32) -> &[u32] {
        &self.down[id as usize]
    }

    /// Point id of a nonzero vector, if it is a (singular) point.
    pub fn point_id(&self, v: &[Elem]) -> Option<u32> {
        let mut w = v.to_vec();
        if !linalg::normalize(&self.field, &mut w) {
            return None;
        }
        self.point_code.get(self.code(&w) as usize).copied().filter(|&id| id != u32::MAX)
    }

    pub fn subspace_by_points(&self, pts: &PointSet) -> Option<u32> {
        self.index.get(pts).copied()
    }

    /// The stored subspace spanned by `rows`, if it is a proper nonzero
    /// (singular) subspace.
    pub fn find_subspace(&self, rows: &[Vector]) -> Option<u32> {
        let mut basis = rows.to_vec();
        linalg::rref(&self.field, &mut basis);
        if basis.is_empty() || basis.len() > self.n {
            return None;
        }
        let mut set = PointSet::empty(self.point_count());
        for v in linalg::span_points(&self.field, &basis) {
            set.insert(self.point_id(&v)? as usize);
        }
        self.subspace_by_points(&set)
    }

    /// `U^perp` for the standard dot product on a projective space; the
    /// correlation every duality is written against.
    pub fn standard_polar(&self, id: u32) -> u32 {
        self.std_perp[id as usize]
    }

    /// Points collinear with every point of `id` (polar kinds); all points
    /// for projective spaces.
    pub fn perp_of(&self, id: usize) -> PointSet {
        if self.kind.is_polar() {
            self.perps[id].clone()
        } else {
            PointSet::full(self.point_count())
        }
    }

    pub fn perp_points(&self, id: u32) -> &PointSet {
        assert!(self.kind.is_polar(), "perp is only defined on polar geometries");
        &self.perps[id as usize]
    }

    /// Two points lie on a common (singular) line; `p` is collinear with itself.
    pub fn collinear(&self, p: u32, p2: u32) -> bool {
        !self.kind.is_polar() || self.perps[p as usize].contains(p2 as usize)
    }

    pub fn meet(&self, a: u32, b: u32) -> Option<u32> {
        let pts = self.points_of(a).intersection(self.points_of(b));
        if pts.is_empty() {
            None
        } else {
            self.subspace_by_points(&pts)
        }
    }

    /// Span of two subspaces when it is again a stored (singular) subspace.
    pub fn span(&self, a: u32, b: u32) -> Option<u32> {
        let mut rows = self.subspace(a).basis.clone();
        rows.extend(self.subspace(b).basis.iter().cloned());
        self.find_subspace(&rows)
    }

    pub fn incident(&self, a: u32, b: u32) -> bool {
        let (pa, pb) = (self.points_of(a), self.points_of(b));
        pa.is_subset(pb) || pb.is_subset(pa)
    }

    /// The diagram node (0-based) of a vertex, or `None` for the submaximal
    /// subspaces of a hyperbolic quadric, which are not vertices.
    pub fn vertex_type(&self, id: u32) -> Option<usize> {
        let d = self.dim(id);
        match self.kind {
            GeometryKind::Hyperbolic if d == self.n => {
                let off = self.dim_start[self.n - 1];
                Some(self.max_node[(id - off) as usize] as usize)
            }
            GeometryKind::Hyperbolic if d == self.n - 1 => None,
            _ => Some(d - 1),
        }
    }

    pub fn vertices_of_type(&self, node: usize) -> Vec<u32> {
        match self.kind {
            GeometryKind::Hyperbolic if node + 2 >= self.n => {
                self.ids_of_dim(self.n).filter(|&m| self.vertex_type(m) == Some(node)).collect()
            }
            _ => self.ids_of_dim(node + 1).collect(),
        }
    }

    /// Canonical text form of a subspace: one basis row per line, entries
    /// as field codes.
    pub fn dump_subspace(&self, id: u32) -> String {
        self.subspace(id)
            .basis
            .iter()
            .map(|r| r.iter().map(|x| format!("{x:x}")).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }

    // ----- chambers ----------------------------------------------------------

    pub fn chamber_count(&self) -> u64 {
        self.coxeter_type().poincare_at(self.q() as u64)
    }

    /// The full flag of a chamber ordered by dimension; for hyperbolic
    /// quadrics this inserts the submaximal member and lists the two
    /// maximals last.
    pub fn flag_members(&self, c: &Chamber) -> SmallVec<[u32; 9]> {
        let v = c.vertices();
        let mut out: SmallVec<[u32; 9]> = SmallVec::from_slice(v);
        if self.kind == GeometryKind::Hyperbolic {
            let sub = self.meet(v[self.n - 2], v[self.n - 1]).expect("oriflamme maximals meet in a submaximal");
            out.insert(self.n - 2, sub);
        }
        out
    }

    /// Places vertices into the slots given by their types.
    pub fn chamber_from_vertex_set(&self, vs: &[u32]) -> Result<Chamber> {
        let mut slots: SmallVec<[u32; 8]> = SmallVec::from_elem(u32::MAX, self.n);
        for &v in vs {
            let t = self.vertex_type(v).ok_or_else(|| Error::Internal(format!("{v} is not a vertex")))?;
            if slots[t] != u32::MAX {
                return Err(Error::Internal("two vertices of the same type".into()));
            }
            slots[t] = v;
        }
        if slots.contains(&u32::MAX) {
            return Err(Error::Internal("vertex set misses a type".into()));
        }
        Ok(Chamber { vertices: slots })
    }

    pub fn is_chamber(&self, c: &Chamber) -> bool {
        let v = c.vertices();
        if v.len() != self.n || v.iter().any(|&x| x as usize >= self.subspaces.len()) {
            return false;
        }
        if v.iter().enumerate().any(|(i, &x)| self.vertex_type(x) != Some(i)) {
            return false;
        }
        let chain = |ids: &[u32]| ids.windows(2).all(|w| self.points_of(w[0]).is_subset(self.points_of(w[1])));
        match self.kind {
            GeometryKind::Hyperbolic => {
                let n = self.n;
                chain(&v[..n - 1])
                    && (n < 3 || self.points_of(v[n - 3]).is_subset(self.points_of(v[n - 1])))
                    && self.meet(v[n - 2], v[n - 1]).is_some_and(|s| self.dim(s) == n - 1)
            }
            _ => chain(v),
        }
    }

    fn for_each_flag(&self, f: &mut impl FnMut(&[u32])) {
        // walks U_1 < U_2 < ... up to the top dimension of a full flag
        let top = if self.kind == GeometryKind::Hyperbolic { self.n - 1 } else { self.n };
        let mut path: Vec<u32> = Vec::with_capacity(top);
        fn rec(g: &Geometry, path: &mut Vec<u32>, top: usize, f: &mut impl FnMut(&[u32])) {
            if path.len() == top {
                f(path);
                return;
            }
            let next: Vec<u32> = match path.last() {
                None => g.ids_of_dim(1).collect(),
                Some(&last) => g.up(last).to_vec(),
            };
            for x in next {
                path.push(x);
                rec(g, path, top, f);
                path.pop();
            }
        }
        rec(self, &mut path, top, f);
    }

    fn chamber_from_flag(&self, flag: &[u32]) -> Chamber {
        if self.kind != GeometryKind::Hyperbolic {
            return Chamber { vertices: SmallVec::from_slice(flag) };
        }
        let n = self.n;
        let sub = flag[n - 2];
        let mut vertices: SmallVec<[u32; 8]> = SmallVec::from_slice(&flag[..n - 2]);
        let (a, b) = (self.up(sub)[0], self.up(sub)[1]);
        if self.vertex_type(a) == Some(n - 2) {
            vertices.extend([a, b]);
        } else {
            vertices.extend([b, a]);
        }
        Chamber { vertices }
    }

    /// All chambers, sorted by vertex ids.
    pub fn enumerate_chambers(&self, cap: u64) -> Result<Vec<Chamber>> {
        let count = self.chamber_count();
        if count > cap {
            return Err(Error::BudgetExceeded { what: "chamber enumeration", count, cap });
        }
        let mut out = Vec::with_capacity(count as usize);
        self.for_each_flag(&mut |flag| out.push(self.chamber_from_flag(flag)));
        out.sort();
        if out.len() as u64 != count {
            return Err(Error::Internal(format!("enumerated {} chambers, expected {count}", out.len())));
        }
        Ok(out)
    }

    /// A uniformly random chamber, by completing a flag one uniform step at a
    /// time (the geometry is flag-transitive, so every step is uniform).
    pub fn random_chamber(&self, rng: &mut impl Rng) -> Chamber {
        let top = if self.kind == GeometryKind::Hyperbolic { self.n - 1 } else { self.n };
        let mut flag = Vec::with_capacity(top);
        flag.push(rng.gen_range(0..self.point_count() as u32));
        while flag.len() < top {
            let ups = self.up(*flag.last().unwrap());
            flag.push(ups[rng.gen_range(0..ups.len())]);
        }
        self.chamber_from_flag(&flag)
    }
}
