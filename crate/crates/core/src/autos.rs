//! Automorphisms of the finite geometries: semilinear collineations
//! `x -> x^phi M` and, on projective spaces, dualities
//! `U -> (U^phi M)^perp` where `perp` is taken for the standard dot product.
//! For a duality `M` is the Gram matrix of the sesquilinear form
//! `(x, y) -> x^phi M y^T` defining the correlation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::coxeter::{CoxeterSystem, DiagramAutomorphism};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::geometry::{Chamber, Geometry, GeometryKind};
use crate::linalg::{self, Matrix, Vector};

/// Default cap on the number of collineations enumerated.
pub const DEFAULT_GROUP_CAP: u64 = 100_000;

/// Length of the random generator words used to sample orthogonal groups.
pub const ORTHOGONAL_WORD_LENGTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Automorphism {
    /// Stored in projective normal form (first nonzero entry 1).
    pub matrix: Matrix,
    pub frobenius: u32,
    pub duality: bool,
}

/// The action of an automorphism on a concrete geometry.
#[derive(Clone, Debug)]
pub struct Action {
    /// Image of every point (collineation part only, before any polarity).
    pub point_map: Vec<u32>,
    /// Image of every subspace id; dualities swap dimensions.
    pub subspace_map: Vec<u32>,
    pub sigma: DiagramAutomorphism,
}

impl Action {
    pub fn image(&self, id: u32) -> u32 {
        self.subspace_map[id as usize]
    }

    pub fn fixes(&self, id: u32) -> bool {
        self.subspace_map[id as usize] == id
    }

    pub fn chamber_image(&self, geom: &Geometry, c: &Chamber) -> Chamber {
        let n = geom.n();
        let mut slots: SmallVec<[u32; 8]> = SmallVec::from_elem(0, n);
        for (node, &v) in c.vertices().iter().enumerate() {
            slots[self.sigma.apply(node)] = self.image(v);
        }
        Chamber::from_vertices(&slots)
    }

    pub fn is_identity(&self) -> bool {
        self.subspace_map.iter().enumerate().all(|(i, &j)| i == j as usize)
    }
}

impl Automorphism {
    pub fn new(f: &Field, matrix: Matrix, frobenius: u32, duality: bool) -> Result<Self> {
        if !matrix.is_invertible(f) {
            return Err(Error::Incompatible("matrix is singular".into()));
        }
        Ok(Automorphism { matrix: matrix.projective_normal_form(f), frobenius: frobenius % f.degree(), duality })
    }

    pub fn identity(geom: &Geometry) -> Self {
        Automorphism { matrix: Matrix::identity(geom.ambient_dim()), frobenius: 0, duality: false }
    }

    /// The form matrix of a duality.
    pub fn form_matrix(&self) -> Option<&Matrix> {
        self.duality.then_some(&self.matrix)
    }

    fn collineation_point(&self, f: &Field, x: &[Elem]) -> Vector {
        let xf: Vector = x.iter().map(|&a| f.frobenius(a, self.frobenius)).collect();
        self.matrix.apply(f, &xf)
    }

    /// `self` followed by `other`.
    pub fn then(&self, f: &Field, other: &Automorphism) -> Automorphism {
        let m1 = self.matrix.frobenius(f, other.frobenius);
        let m2 = if self.duality { other.matrix.inverse(f).expect("invertible").transpose() } else { other.matrix.clone() };
        Automorphism {
            matrix: m1.mul(f, &m2).projective_normal_form(f),
            frobenius: (self.frobenius + other.frobenius) % f.degree(),
            duality: self.duality ^ other.duality,
        }
    }

    pub fn inverse(&self, f: &Field) -> Automorphism {
        let phi = (f.degree() - self.frobenius) % f.degree();
        let mf = self.matrix.frobenius(f, phi);
        let matrix = if self.duality { mf.transpose() } else { mf.inverse(f).expect("invertible") };
        Automorphism { matrix: matrix.projective_normal_form(f), frobenius: phi, duality: self.duality }
    }

    pub fn power(&self, f: &Field, k: usize) -> Automorphism {
        let mut acc = Automorphism { matrix: Matrix::identity(self.matrix.n), frobenius: 0, duality: false };
        for _ in 0..k {
            acc = acc.then(f, self);
        }
        acc
    }

    /// Computes the action on every subspace; rejects maps that do not
    /// preserve the geometry.
    pub fn action(&self, geom: &Geometry, sys: &CoxeterSystem) -> Result<Action> {
        let f = geom.field();
        if self.matrix.n != geom.ambient_dim() {
            return Err(Error::Incompatible(format!(
                "{}x{} matrix on {}",
                self.matrix.n,
                self.matrix.n,
                geom.label()
            )));
        }
        if self.duality && geom.kind() != GeometryKind::Projective {
            return Err(Error::Incompatible("dualities are only modelled on projective spaces".into()));
        }
        let point_map: Vec<u32> = (0..geom.point_count() as u32)
            .map(|p| {
                geom.point_id(&self.collineation_point(f, geom.point_vector(p)))
                    .ok_or_else(|| Error::Incompatible(format!("point {p} is not mapped to a point of {}", geom.label())))
            })
            .collect::<Result<_>>()?;
        let subspace_map: Vec<u32> = (0..geom.subspace_total() as u32)
            .map(|id| {
                let img = geom.points_of(id).map(&point_map);
                let c = geom.subspace_by_points(&img).ok_or_else(|| Error::Internal("image of a subspace".into()))?;
                Ok(if self.duality { geom.standard_polar(c) } else { c })
            })
            .collect::<Result<_>>()?;
        let sigma = companion_sigma(geom, sys, &subspace_map)?;
        Ok(Action { point_map, subspace_map, sigma })
    }
}

/// Reads the companion diagram automorphism off the type map.
fn companion_sigma(geom: &Geometry, sys: &CoxeterSystem, map: &[u32]) -> Result<DiagramAutomorphism> {
    let n = geom.n();
    let mut perm = vec![0u8; n];
    for (node, slot) in perm.iter_mut().enumerate() {
        let v = geom.vertices_of_type(node)[0];
        let t = geom
            .vertex_type(map[v as usize])
            .ok_or_else(|| Error::Internal("vertex mapped to a non-vertex".into()))?;
        *slot = t as u8;
    }
    let sigma = DiagramAutomorphism { perm };
    if !sys.is_diagram_automorphism(&sigma) {
        return Err(Error::Internal(format!("type map {sigma} is not a diagram automorphism")));
    }
    Ok(sigma)
}

// ----- constructors ------------------------------------------------------------

fn require_kind(geom: &Geometry, kind: GeometryKind, what: &str) -> Result<()> {
    if geom.kind() != kind {
        return Err(Error::Incompatible(format!("{what} needs a {} geometry, got {}", kind.name(), geom.label())));
    }
    Ok(())
}

/// The duality of an alternating form with Gram matrix
/// `diag([[0,1],[-1,0]], ...)`.
pub fn symplectic_polarity(geom: &Geometry) -> Result<Automorphism> {
    require_kind(geom, GeometryKind::Projective, "a symplectic polarity")?;
    let f = geom.field();
    let d = geom.ambient_dim();
    if !d.is_multiple_of(2) {
        return Err(Error::Incompatible(format!("symplectic polarities need odd n, got n = {}", geom.n())));
    }
    let block = Matrix::from_rows(&[vec![0, 1], vec![f.neg(1), 0]]);
    Automorphism::new(f, Matrix::block_diagonal(&vec![block; d / 2]), 0, true)
}

/// Row-vector matrix of multiplication by `a + b w` on GF(q^2) = GF(q)[w],
/// where `w^2 = -c1 w - c0`.
fn extension_mult(f: &Field, c: (Elem, Elem), a: Elem, b: Elem) -> Matrix {
    let (c0, c1) = c;
    // 1 -> a + b w ; w -> a w + b w^2 = -b c0 + (a - b c1) w
    Matrix::from_rows(&[vec![a, b], vec![f.neg(f.mul(b, c0)), f.sub(a, f.mul(b, c1))]])
}

/// A monic irreducible `x^2 + c1 x + c0` over the field.
fn irreducible_quadratic(f: &Field) -> (Elem, Elem) {
    for c0 in f.elements() {
        for c1 in f.elements() {
            if f.elements().all(|x| f.add(f.add(f.mul(x, x), f.mul(c1, x)), c0) != 0) {
                return (c0, c1);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}

fn matrix_order(f: &Field, m: &Matrix) -> usize {
    let id = Matrix::identity(m.n);
    let mut acc = m.clone();
    let mut k = 1;
    while acc != id {
        acc = acc.mul(f, m);
        k += 1;
    }
    k
}

/// Multiplication by a generator of GF(q^2)^* on GF(q^2)^m = GF(q)^{2m}.
/// On a hyperbolic quadric of even rank `n`, multiplication by an element
/// of norm 1 outside GF(q) in a hermitian model of the quadric.
pub fn spread_collineation(geom: &Geometry) -> Result<Automorphism> {
    let f = geom.field();
    let q = f.order() as usize;
    let c = irreducible_quadratic(f);
    match geom.kind() {
        GeometryKind::Projective => {
            let d = geom.ambient_dim();
            if !d.is_multiple_of(2) {
                return Err(Error::Incompatible(format!("line spreads need odd n, got n = {}", geom.n())));
            }
            let block = f
                .elements()
                .flat_map(|a| f.elements().map(move |b| (a, b)))
                .map(|(a, b)| extension_mult(f, c, a, b))
                .find(|m| m.is_invertible(f) && matrix_order(f, m) == q * q - 1)
                .expect("GF(q^2)^* is cyclic");
            Automorphism::new(f, Matrix::block_diagonal(&vec![block; d / 2]), 0, false)
        }
        GeometryKind::Hyperbolic => {
            let n = geom.n();
            if !n.is_multiple_of(2) {
                return Err(Error::Incompatible("hyperbolic line spreads need even rank".into()));
            }
            let (c0, c1) = c;
            // norm form of GF(q^2)/GF(q): N(a + b w) = a^2 - c1 a b + c0 b^2
            let norm = |a: Elem, b: Elem| f.add(f.sub(f.mul(a, a), f.mul(c1, f.mul(a, b))), f.mul(c0, f.mul(b, b)));
            let (a, b) = f
                .elements()
                .flat_map(|a| f.elements().skip(1).map(move |b| (a, b)))
                .find(|&(a, b)| norm(a, b) == 1)
                .expect("the norm-one group has q + 1 > 2 elements");
            let lambda = Matrix::block_diagonal(&vec![extension_mult(f, c, a, b); n]);
            let hermitian_q = |x: &[Elem]| {
                x.chunks(2).fold(0, |acc, pair| f.add(acc, norm(pair[0], pair[1])))
            };
            let basis = witt_basis(f, 2 * n, &hermitian_q)
                .ok_or_else(|| Error::Internal("hermitian model is not hyperbolic".into()))?;
            let b = Matrix::from_rows(&basis);
            let m = b.mul(f, &lambda).mul(f, &b.inverse(f).expect("basis"));
            Automorphism::new(f, m, 0, false)
        }
        GeometryKind::Parabolic => Err(Error::Incompatible("no line spread collineation on parabolic quadrics".into())),
    }
}

/// A basis `e_-1, e_1, ..., e_-n, e_n` (in that row order) with
/// `Q(sum a_i e_-i + b_i e_i) = sum a_i b_i`, found by successive hyperbolic
/// pairs. Returns `None` if the form is not hyperbolic.
fn witt_basis(f: &Field, dim: usize, quad: &dyn Fn(&[Elem]) -> Elem) -> Option<Vec<Vector>> {
    let bil = |x: &[Elem], y: &[Elem]| {
        let s: Vector = x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect();
        f.sub(f.sub(quad(&s), quad(x)), quad(y))
    };
    let mut space: Vec<Vector> = (0..dim)
        .map(|i| {
            let mut e = vec![0; dim];
            e[i] = 1;
            e
        })
        .collect();
    let mut out = Vec::new();
    while !space.is_empty() {
        let vecs: Vec<Vector> = linalg::span_points(f, &space);
        let e = vecs.iter().find(|v| quad(v) == 0)?.clone();
        let g0 = vecs.iter().find(|v| bil(&e, v) != 0)?;
        let s = f.inv(bil(&e, g0));
        let g: Vector = g0.iter().map(|&x| f.mul(x, s)).collect();
        let qg = quad(&g);
        let mut e2 = g.clone();
        linalg::axpy(f, &mut e2, f.neg(qg), &e);
        out.push(e.clone());
        out.push(e2.clone());
        // restrict to <e, e2>^perp inside the current space
        let mut rows = Vec::new();
        for v in &space {
            let mut w = v.clone();
            let (be2, be) = (bil(v, &e2), bil(v, &e));
            linalg::axpy(f, &mut w, f.neg(be2), &e);
            linalg::axpy(f, &mut w, f.neg(be), &e2);
            rows.push(w);
        }
        linalg::rref(f, &mut rows);
        space = rows;
    }
    Some(out)
}

/// Reflection `x -> x - B(x, a) Q(a)^-1 a` in a nonsingular vector `a`.
/// In characteristic 2 this is the orthogonal transvection with centre `a`.
fn orthogonal_reflection_matrix(geom: &Geometry, a: &[Elem]) -> Result<Matrix> {
    let f = geom.field();
    let qa = geom.quadratic_form(a);
    if qa == 0 {
        return Err(Error::Incompatible("reflection vector is singular".into()));
    }
    let s = f.inv(qa);
    let d = geom.ambient_dim();
    let rows: Vec<Vector> = (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = 1;
            let c = f.neg(f.mul(geom.bilinear_form(&e, a), s));
            linalg::axpy(f, &mut e, c, a);
            e
        })
        .collect();
    Ok(Matrix::from_rows(&rows))
}

/// Reflection in `a`: an involution fixing the hyperplane section `a^perp`
/// pointwise. Odd characteristic only.
pub fn quadric_reflection_in(geom: &Geometry, a: &[Elem]) -> Result<Automorphism> {
    if !geom.kind().is_polar() {
        return Err(Error::Incompatible("reflections act on quadrics".into()));
    }
    if geom.field().characteristic() == 2 {
        return Err(Error::Incompatible("reflections need odd characteristic; use the central elation".into()));
    }
    Automorphism::new(geom.field(), orthogonal_reflection_matrix(geom, a)?, 0, false)
}

/// The default reflection: `X_0 -> -X_0` on a parabolic quadric, and the
/// reflection fixing the hyperplane `X_-1 = X_1` on a hyperbolic quadric.
pub fn quadric_reflection(geom: &Geometry) -> Result<Automorphism> {
    let f = geom.field();
    let mut a = vec![0; geom.ambient_dim()];
    match geom.kind() {
        GeometryKind::Parabolic => a[2 * geom.n()] = 1,
        GeometryKind::Hyperbolic => {
            a[0] = 1;
            a[1] = f.neg(1);
        }
        GeometryKind::Projective => return Err(Error::Incompatible("reflections act on quadrics".into())),
    }
    quadric_reflection_in(geom, &a)
}

/// `X_1 -> X_1 + X_-1`, `X_0 -> X_0 + X_-1` on a parabolic quadric in
/// characteristic 2.
pub fn central_elation_quadric(geom: &Geometry) -> Result<Automorphism> {
    require_kind(geom, GeometryKind::Parabolic, "the central elation")?;
    let f = geom.field();
    if f.characteristic() != 2 {
        return Err(Error::Incompatible("the central elation needs characteristic 2".into()));
    }
    let d = geom.ambient_dim();
    let mut m = Matrix::identity(d);
    m.set(0, 1, 1);
    m.set(0, d - 1, 1);
    Automorphism::new(f, m, 0, false)
}

/// Eichler (Siegel) transformation
/// `x -> x + B(x,u) v - B(x,v) u - Q(v) B(x,u) u` for singular `u` and
/// `v in u^perp`. With `u, v` spanning a singular line it is a long root
/// elation, fixing `<u,v>^perp` pointwise.
pub fn eichler_transformation(geom: &Geometry, u: &[Elem], v: &[Elem]) -> Result<Automorphism> {
    let f = geom.field();
    if !geom.kind().is_polar() || geom.quadratic_form(u) != 0 || geom.bilinear_form(u, v) != 0 {
        return Err(Error::Incompatible("Eichler transformations need singular u and v in u^perp".into()));
    }
    Automorphism::new(f, eichler_matrix(geom, u, v), 0, false)
}

fn eichler_matrix(geom: &Geometry, u: &[Elem], v: &[Elem]) -> Matrix {
    let f = geom.field();
    let d = geom.ambient_dim();
    let qv = geom.quadratic_form(v);
    let rows: Vec<Vector> = (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = 1;
            let (bu, bv) = (geom.bilinear_form(&e, u), geom.bilinear_form(&e, v));
            let mut r = e.clone();
            linalg::axpy(f, &mut r, bu, v);
            linalg::axpy(f, &mut r, f.neg(bv), u);
            linalg::axpy(f, &mut r, f.neg(f.mul(qv, bu)), u);
            r
        })
        .collect();
    Matrix::from_rows(&rows)
}

/// The long root elation with axis line `<e_-1, e_-2>`.
pub fn quadric_root_elation(geom: &Geometry) -> Result<Automorphism> {
    let d = geom.ambient_dim();
    let (mut u, mut v) = (vec![0; d], vec![0; d]);
    u[0] = 1;
    v[2] = 1;
    eichler_transformation(geom, &u, &v)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentralKind {
    Elation,
    Homology,
}

/// The central collineation with the given centre and axis (the axis is
/// the hyperplane `x . h = 0`): an elation `x -> x + t (x.h) c` when the
/// centre lies on the axis, otherwise the homology with ratio `t`.
pub fn central_collineation(geom: &Geometry, centre: &[Elem], axis: &[Elem], t: Elem) -> Result<(Automorphism, CentralKind)> {
    require_kind(geom, GeometryKind::Projective, "a central collineation")?;
    let f = geom.field();
    let ch = linalg::dot(f, centre, axis);
    let (coef, kind) = if ch == 0 {
        if t == 0 {
            return Err(Error::Incompatible("elation with parameter 0 is the identity".into()));
        }
        (t, CentralKind::Elation)
    } else {
        if t == 0 || t == 1 {
            return Err(Error::Incompatible("homology ratio must differ from 0 and 1".into()));
        }
        (f.mul(f.sub(t, 1), f.inv(ch)), CentralKind::Homology)
    };
    let d = geom.ambient_dim();
    let mut m = Matrix::identity(d);
    for i in 0..d {
        for j in 0..d {
            m.set(i, j, f.add(m.get(i, j), f.mul(coef, f.mul(axis[i], centre[j]))));
        }
    }
    Ok((Automorphism::new(f, m, 0, false)?, kind))
}

/// The Frobenius `x -> x^sqrt(q)` of PG(2, q), fixing a Baer subplane.
pub fn baer_collineation(geom: &Geometry) -> Result<Automorphism> {
    require_kind(geom, GeometryKind::Projective, "a Baer collineation")?;
    let f = geom.field();
    if geom.n() != 2 || !f.degree().is_multiple_of(2) {
        return Err(Error::Incompatible(format!("Baer collineations need PG(2, q^2), got {}", geom.label())));
    }
    Automorphism::new(f, Matrix::identity(3), f.degree() / 2, false)
}

// ----- random and exhaustive generation ----------------------------------------

fn random_vector(f: &Field, d: usize, rng: &mut impl Rng) -> Vector {
    (0..d).map(|_| rng.gen_range(0..f.order()) as Elem).collect()
}

/// A seeded random automorphism. Projective spaces: a uniform invertible
/// matrix, uniform Frobenius twist and a fair coin for duality. Quadrics:
/// a word of [`ORTHOGONAL_WORD_LENGTH`] random reflections and Eichler
/// transformations, then a random Frobenius twist.
pub fn random_automorphism(geom: &Geometry, seed: u64) -> Result<Automorphism> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_automorphism_with(geom, &mut rng)
}

pub fn random_automorphism_with(geom: &Geometry, rng: &mut impl Rng) -> Result<Automorphism> {
    let f = geom.field();
    let d = geom.ambient_dim();
    let frobenius = rng.gen_range(0..f.degree());
    if geom.kind() == GeometryKind::Projective {
        loop {
            let rows: Vec<Vector> = (0..d).map(|_| random_vector(f, d, rng)).collect();
            let m = Matrix::from_rows(&rows);
            if m.is_invertible(f) {
                let duality = rng.gen_bool(0.5);
                return Automorphism::new(f, m, frobenius, duality);
            }
        }
    }
    let mut m = Matrix::identity(d);
    for _ in 0..ORTHOGONAL_WORD_LENGTH {
        let g = if rng.gen_bool(0.5) {
            loop {
                let a = random_vector(f, d, rng);
                if geom.quadratic_form(&a) != 0 {
                    break orthogonal_reflection_matrix(geom, &a)?;
                }
            }
        } else {
            let u = geom.point_vector(rng.gen_range(0..geom.point_count() as u32)).clone();
            let v = loop {
                let v = random_vector(f, d, rng);
                if geom.bilinear_form(&u, &v) == 0 {
                    break v;
                }
            };
            eichler_matrix(geom, &u, &v)
        };
        m = m.mul(f, &g);
    }
    Automorphism::new(f, m, frobenius, false)
}

/// `|PGL(n+1, q)|`.
pub fn pgl_order(n: usize, q: u64) -> u64 {
    let d = n as u32 + 1;
    let gl: u64 = (0..d).map(|i| q.pow(d) - q.pow(i)).product();
    gl / (q - 1)
}

/// Every collineation and duality of a projective space, each exactly once
/// (collineations first). The cap bounds the number of collineations.
pub fn enumerate_automorphism_group(geom: &Geometry, cap: u64) -> Result<Vec<Automorphism>> {
    require_kind(geom, GeometryKind::Projective, "group enumeration")?;
    let f = geom.field();
    let d = geom.ambient_dim();
    let count = pgl_order(geom.n(), f.order() as u64) * f.degree() as u64;
    if count > cap {
        return Err(Error::BudgetExceeded { what: "automorphism group enumeration", count, cap });
    }
    let vectors: Vec<Vector> = {
        let q = f.order() as usize;
        (1..q.pow(d as u32))
            .map(|mut c| {
                let mut v = vec![0; d];
                for slot in v.iter_mut().rev() {
                    *slot = (c % q) as Elem;
                    c /= q;
                }
                v
            })
            .collect()
    };
    let normalized: Vec<&Vector> = vectors.iter().filter(|v| v.iter().find(|&&x| x != 0) == Some(&1)).collect();
    let mut matrices = Vec::new();
    let mut rows: Vec<Vector> = Vec::with_capacity(d);
    fn rec(
        f: &Field,
        d: usize,
        first: &[&Vector],
        rest: &[Vector],
        rows: &mut Vec<Vector>,
        out: &mut Vec<Matrix>,
    ) {
        if rows.len() == d {
            out.push(Matrix::from_rows(rows));
            return;
        }
        let pool: Vec<&Vector> = if rows.is_empty() { first.to_vec() } else { rest.iter().collect() };
        for v in pool {
            rows.push(v.clone());
            if linalg::rank(f, rows) == rows.len() {
                rec(f, d, first, rest, rows, out);
            }
            rows.pop();
        }
    }
    rec(f, d, &normalized, &vectors, &mut rows, &mut matrices);
    let mut out = Vec::with_capacity(2 * matrices.len() * f.degree() as usize);
    for duality in [false, true] {
        for phi in 0..f.degree() {
            for m in &matrices {
                out.push(Automorphism { matrix: m.clone(), frobenius: phi, duality });
            }
        }
    }
    Ok(out)
}
