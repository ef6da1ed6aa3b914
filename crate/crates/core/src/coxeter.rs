//! Finite Weyl groups of types A, B, D and E with Bourbaki labelling.
//!
//! An element `w` is stored canonically as `w(rho)` written in the basis of
//! fundamental weights. `rho` is regular, so `w` is determined by this vector,
//! and the left descents of `w` are exactly the negative coordinates: `s_i w`
//! is shorter than `w` iff `<w(rho), alpha_i^vee> < 0`. Reduced words, lengths
//! and products all fall out of that one observation.
//!
//! Generators are 0-based internally and 1-based in every textual form.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_RANK: usize = 8;

/// Default cap on `|W|` for full enumeration; covers W(E7) = 2,903,040.
pub const DEFAULT_GROUP_ENUMERATION_CAP: u64 = 3_000_000;

type Coords = [i16; MAX_RANK];

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoxeterType {
    A(u8),
    B(u8),
    D(u8),
    E6,
    E7,
    E8,
}

impl CoxeterType {
    pub fn rank(self) -> usize {
        match self {
            CoxeterType::A(n) | CoxeterType::B(n) | CoxeterType::D(n) => n as usize,
            CoxeterType::E6 => 6,
            CoxeterType::E7 => 7,
            CoxeterType::E8 => 8,
        }
    }

    /// Degrees of the basic invariants; `|W|` is their product and the
    /// Poincare polynomial is `prod (t^d - 1)/(t - 1)`.
    pub fn degrees(self) -> Vec<u32> {
        match self {
            CoxeterType::A(n) => (2..=n as u32 + 1).collect(),
            CoxeterType::B(n) => (1..=n as u32).map(|i| 2 * i).collect(),
            CoxeterType::D(n) => {
                let mut d: Vec<u32> = (1..n as u32).map(|i| 2 * i).collect();
                d.push(n as u32);
                d.sort();
                d
            }
            CoxeterType::E6 => vec![2, 5, 6, 8, 9, 12],
            CoxeterType::E7 => vec![2, 6, 8, 10, 12, 14, 18],
            CoxeterType::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
        }
    }

    pub fn group_order(self) -> u64 {
        self.degrees().iter().map(|&d| d as u64).product()
    }

    pub fn positive_root_count(self) -> u64 {
        self.degrees().iter().map(|&d| d as u64 - 1).sum()
    }

    /// Poincare polynomial evaluated at `t`: the number of chambers of a
    /// building of this type with all panels of size `t + 1`.
    pub fn poincare_at(self, t: u64) -> u64 {
        self.degrees().iter().map(|&d| (0..d).map(|e| t.pow(e)).sum::<u64>()).product()
    }

    pub fn is_simply_laced(self) -> bool {
        !matches!(self, CoxeterType::B(_))
    }

    pub fn label(self) -> String {
        match self {
            CoxeterType::A(n) => format!("A{n}"),
            CoxeterType::B(n) => format!("B{n}"),
            CoxeterType::D(n) => format!("D{n}"),
            CoxeterType::E6 => "E6".into(),
            CoxeterType::E7 => "E7".into(),
            CoxeterType::E8 => "E8".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnsupportedType { label: s.into(), reason: "unrecognised label".into() };
        let (head, tail) = s.split_at(1.min(s.len()));
        let n: u8 = tail.trim_start_matches(['(', '_']).trim_end_matches(')').parse().map_err(|_| bad())?;
        match (head.to_ascii_uppercase().as_str(), n) {
            ("A", n) => Ok(CoxeterType::A(n)),
            ("B", n) => Ok(CoxeterType::B(n)),
            ("D", n) => Ok(CoxeterType::D(n)),
            ("E", 6) => Ok(CoxeterType::E6),
            ("E", 7) => Ok(CoxeterType::E7),
            ("E", 8) => Ok(CoxeterType::E8),
            _ => Err(bad()),
        }
    }

    /// Cartan matrix `A[i][j] = <alpha_i^vee, alpha_j>`. For B_n the last
    /// node is the short root.
    fn cartan(self) -> [[i16; MAX_RANK]; MAX_RANK] {
        let n = self.rank();
        let mut a = [[0i16; MAX_RANK]; MAX_RANK];
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self {
            CoxeterType::A(_) | CoxeterType::B(_) => (0..n - 1).for_each(|i| link(i, i + 1)),
            CoxeterType::D(_) => {
                (0..n - 2).for_each(|i| link(i, i + 1));
                link(n - 3, n - 1);
            }
            CoxeterType::E6 | CoxeterType::E7 | CoxeterType::E8 => {
                // 1-3-4-5-6-7-8 with 2 attached to 4
                link(0, 2);
                link(1, 3);
                (2..n - 1).for_each(|i| link(i, i + 1));
            }
        }
        if let CoxeterType::B(_) = self {
            a[n - 1][n - 2] = -2;
        }
        for (i, row) in a.iter_mut().enumerate().take(n) {
            row[i] = 2;
        }
        a
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A permutation of the generators preserving the Coxeter matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagramAutomorphism {
    /// `perm[i]` is the image of node `i` (0-based).
    pub perm: Vec<u8>,
}

impl DiagramAutomorphism {
    pub fn identity(rank: usize) -> Self {
        DiagramAutomorphism { perm: (0..rank as u8).collect() }
    }

    /// Builds the automorphism swapping the given 0-based node pairs.
    pub fn swaps(rank: usize, pairs: &[(usize, usize)]) -> Self {
        let mut d = Self::identity(rank);
        for &(a, b) in pairs {
            d.perm.swap(a, b);
        }
        d
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.perm[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    /// `self` after `first`: node `i` goes to `self(first(i))`.
    pub fn after(&self, first: &DiagramAutomorphism) -> DiagramAutomorphism {
        DiagramAutomorphism { perm: first.perm.iter().map(|&i| self.perm[i as usize]).collect() }
    }

    pub fn inverse(&self) -> DiagramAutomorphism {
        let mut perm = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p as usize] = i as u8;
        }
        DiagramAutomorphism { perm }
    }

    /// Orbits of the cyclic group generated by `self`, each sorted, ordered
    /// by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = Vec::new();
        for start in 0..self.perm.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![];
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                orbit.push(i);
                i = self.apply(i);
            }
            orbit.sort();
            out.push(orbit);
        }
        out
    }
}

impl fmt::Display for DiagramAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        let moved: Vec<String> = self
            .orbits()
            .into_iter()
            .filter(|o| o.len() > 1)
            .map(|o| o.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("->"))
            .collect();
        write!(f, "({})", moved.join(")("))
    }
}

/// An element of a finite Weyl group in canonical form.
///
/// Equality, hashing and ordering act on the canonical vector; ordering
/// sorts by length first.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    ty: CoxeterType,
    coords: Coords,
    length: u16,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.length as usize
    }

    pub fn coxeter_type(&self) -> CoxeterType {
        self.ty
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ty, self.length, std::cmp::Reverse(self.coords))
            .cmp(&(other.ty, other.length, std::cmp::Reverse(other.coords)))
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{:?}]", self.ty, &self.coords[..self.ty.rank()])
    }
}

#[derive(Clone, Debug)]
pub struct CoxeterSystem {
    ty: CoxeterType,
    rank: usize,
    cartan: [[i16; MAX_RANK]; MAX_RANK],
    coxeter_matrix: Vec<Vec<u8>>,
    diagram_autos: Vec<DiagramAutomorphism>,
    longest: WeylElement,
    sigma0: DiagramAutomorphism,
}

impl CoxeterSystem {
    /// Builds the system; E8 must be requested explicitly through
    /// [`CoxeterSystem::build_with`].
    pub fn build(ty: CoxeterType) -> Result<Self> {
        Self::build_with(ty, false)
    }

    pub fn build_with(ty: CoxeterType, allow_e8: bool) -> Result<Self> {
        let reject = |reason: &str| Err(Error::UnsupportedType { label: ty.label(), reason: reason.into() });
        match ty {
            CoxeterType::A(n) if !(1..=7).contains(&n) => return reject("type A supports 1 <= n <= 7"),
            CoxeterType::B(n) if !(2..=6).contains(&n) => return reject("type B supports 2 <= n <= 6"),
            CoxeterType::D(n) if !(3..=6).contains(&n) => return reject("type D supports 3 <= n <= 6"),
            CoxeterType::E8 if !allow_e8 => return reject("E8 requires the explicit opt-in"),
            _ => {}
        }
        let rank = ty.rank();
        let cartan = ty.cartan();
        let coxeter_matrix = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| match (i == j, cartan[i][j] * cartan[j][i]) {
                        (true, _) => 1,
                        (false, 0) => 2,
                        (false, 1) => 3,
                        (false, 2) => 4,
                        (false, other) => unreachable!("product {other} not crystallographic"),
                    })
                    .collect()
            })
            .collect();
        let mut sys = CoxeterSystem {
            ty,
            rank,
            cartan,
            coxeter_matrix,
            diagram_autos: vec![],
            longest: WeylElement { ty, coords: [0; MAX_RANK], length: 0 },
            sigma0: DiagramAutomorphism::identity(rank),
        };
        sys.diagram_autos = sys.enumerate_diagram_automorphisms();
        sys.longest = sys.compute_longest();
        sys.sigma0 = sys.compute_opposition();
        Ok(sys)
    }

    pub fn coxeter_type(&self) -> CoxeterType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u8>] {
        &self.coxeter_matrix
    }

    pub fn diagram_automorphisms(&self) -> &[DiagramAutomorphism] {
        &self.diagram_autos
    }

    pub fn order(&self) -> u64 {
        self.ty.group_order()
    }

    fn enumerate_diagram_automorphisms(&self) -> Vec<DiagramAutomorphism> {
        let mut out = Vec::new();
        let mut perm: Vec<u8> = (0..self.rank as u8).collect();
        permutations(&mut perm, 0, &mut |p| {
            let ok = (0..self.rank).all(|i| {
                (0..self.rank).all(|j| self.coxeter_matrix[p[i] as usize][p[j] as usize] == self.coxeter_matrix[i][j])
            });
            // B_n has no nontrivial symmetry once the double bond is oriented
            if ok {
                let preserves_cartan = (0..self.rank)
                    .all(|i| (0..self.rank).all(|j| self.cartan[p[i] as usize][p[j] as usize] == self.cartan[i][j]));
                if preserves_cartan {
                    out.push(DiagramAutomorphism { perm: p.to_vec() });
                }
            }
        });
        out.sort();
        out
    }

    pub fn is_diagram_automorphism(&self, d: &DiagramAutomorphism) -> bool {
        self.diagram_autos.contains(d)
    }

    // ----- element arithmetic -------------------------------------------------

    fn rho(&self) -> Coords {
        let mut c = [0; MAX_RANK];
        c[..self.rank].fill(1);
        c
    }

    #[inline]
    fn reflect(&self, i: usize, c: &mut Coords) {
        let xi = c[i];
        if xi != 0 {
            for (k, ck) in c.iter_mut().enumerate().take(self.rank) {
                *ck -= xi * self.cartan[k][i];
            }
        }
    }

    fn element(&self, coords: Coords) -> WeylElement {
        let mut c = coords;
        let mut length = 0;
        while let Some(i) = (0..self.rank).find(|&i| c[i] < 0) {
            self.reflect(i, &mut c);
            length += 1;
        }
        WeylElement { ty: self.ty, coords, length }
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement { ty: self.ty, coords: self.rho(), length: 0 }
    }

    /// The simple reflection `s_{i+1}` (0-based index `i`).
    pub fn generator(&self, i: usize) -> WeylElement {
        let mut c = self.rho();
        self.reflect(i, &mut c);
        WeylElement { ty: self.ty, coords: c, length: 1 }
    }

    /// `s_{w_1} s_{w_2} ... s_{w_k}` for 0-based letters.
    pub fn from_word(&self, word: &[usize]) -> WeylElement {
        let mut c = self.rho();
        for &i in word.iter().rev() {
            self.reflect(i, &mut c);
        }
        self.element(c)
    }

    /// The lexicographically first reduced word (0-based letters).
    pub fn word(&self, w: &WeylElement) -> Vec<usize> {
        let mut c = w.coords;
        let mut word = Vec::with_capacity(w.length());
        while let Some(i) = (0..self.rank).find(|&i| c[i] < 0) {
            self.reflect(i, &mut c);
            word.push(i);
        }
        word
    }

    fn check(&self, w: &WeylElement) -> Result<()> {
        if w.ty != self.ty {
            return Err(Error::MismatchedSystems { left: w.ty.label(), right: self.ty.label() });
        }
        Ok(())
    }

    pub fn multiply(&self, w: &WeylElement, v: &WeylElement) -> Result<WeylElement> {
        self.check(w)?;
        self.check(v)?;
        Ok(self.mul(w, v))
    }

    pub(crate) fn mul(&self, w: &WeylElement, v: &WeylElement) -> WeylElement {
        let mut c = v.coords;
        for i in self.word(w).into_iter().rev() {
            self.reflect(i, &mut c);
        }
        self.element(c)
    }

    /// `s_i * w`, cheaper than a general product.
    pub fn left_mul_generator(&self, i: usize, w: &WeylElement) -> WeylElement {
        let mut c = w.coords;
        self.reflect(i, &mut c);
        let length = if w.coords[i] < 0 { w.length - 1 } else { w.length + 1 };
        WeylElement { ty: self.ty, coords: c, length }
    }

    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        let mut word = self.word(w);
        word.reverse();
        self.from_word(&word)
    }

    /// `s_i w < w`.
    pub fn is_left_descent(&self, w: &WeylElement, i: usize) -> bool {
        w.coords[i] < 0
    }

    /// `w s_i < w`.
    pub fn is_right_descent(&self, w: &WeylElement, i: usize) -> bool {
        self.is_left_descent(&self.inverse(w), i)
    }

    /// Applies a diagram automorphism letterwise: `w -> w^sigma`.
    pub fn twist(&self, w: &WeylElement, sigma: &DiagramAutomorphism) -> WeylElement {
        let word: Vec<usize> = self.word(w).into_iter().map(|i| sigma.apply(i)).collect();
        self.from_word(&word)
    }

    /// Set of generators occurring in (any) reduced word of `w`.
    pub fn support(&self, w: &WeylElement) -> Vec<usize> {
        let mut s = self.word(w);
        s.sort();
        s.dedup();
        s
    }

    pub fn longest_element(&self) -> WeylElement {
        self.longest
    }

    fn compute_longest(&self) -> WeylElement {
        let mut c = self.rho();
        let mut length = 0;
        while let Some(i) = (0..self.rank).find(|&i| c[i] > 0) {
            self.reflect(i, &mut c);
            length += 1;
        }
        WeylElement { ty: self.ty, coords: c, length }
    }

    /// The involution `sigma_0` with `w0 s_i w0 = s_{sigma_0(i)}`.
    pub fn opposition_involution(&self) -> DiagramAutomorphism {
        self.sigma0.clone()
    }

    fn compute_opposition(&self) -> DiagramAutomorphism {
        let w0 = self.longest;
        let perm = (0..self.rank)
            .map(|i| {
                let conj = self.mul(&self.mul(&w0, &self.generator(i)), &w0);
                (0..self.rank).find(|&j| self.generator(j) == conj).expect("w0 normalises S") as u8
            })
            .collect();
        DiagramAutomorphism { perm }
    }

    /// The longest element of the double coset `W_left w W_right`.
    pub fn max_in_double_coset(&self, w: &WeylElement, left: &[usize], right: &[usize]) -> WeylElement {
        let mut cur = *w;
        loop {
            if let Some(&i) = left.iter().find(|&&i| !self.is_left_descent(&cur, i)) {
                cur = self.left_mul_generator(i, &cur);
                continue;
            }
            let inv = self.inverse(&cur);
            if let Some(&i) = right.iter().find(|&&i| !self.is_left_descent(&inv, i)) {
                cur = self.inverse(&self.left_mul_generator(i, &inv));
                continue;
            }
            return cur;
        }
    }

    /// `w` lies in the parabolic subgroup generated by `gens`.
    pub fn in_parabolic(&self, w: &WeylElement, gens: &[usize]) -> bool {
        self.support(w).iter().all(|i| gens.contains(i))
    }

    // ----- reflection representation -----------------------------------------

    /// Positive roots in the basis of simple roots.
    pub fn positive_roots(&self) -> Vec<Vec<i32>> {
        let n = self.rank;
        let mut roots: Vec<Vec<i32>> = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        let mut k = 0;
        while k < roots.len() {
            for i in 0..n {
                let r = self.reflect_root(i, &roots[k]);
                if r.iter().all(|&c| c >= 0) && !roots.contains(&r) {
                    roots.push(r);
                }
            }
            k += 1;
        }
        roots
    }

    fn reflect_root(&self, i: usize, beta: &[i32]) -> Vec<i32> {
        let pairing: i32 = (0..self.rank).map(|j| beta[j] * self.cartan[i][j] as i32).sum();
        let mut r = beta.to_vec();
        r[i] -= pairing;
        r
    }

    /// Acts on a root (simple-root coordinates).
    pub fn act_on_root(&self, w: &WeylElement, beta: &[i32]) -> Vec<i32> {
        self.word(w).into_iter().rev().fold(beta.to_vec(), |b, i| self.reflect_root(i, &b))
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversion_count(&self, w: &WeylElement) -> usize {
        self.positive_roots()
            .iter()
            .filter(|b| self.act_on_root(w, b).iter().all(|&c| c <= 0))
            .count()
    }

    // ----- permutation models ------------------------------------------------

    /// Converts a (signed) permutation in the standard coordinate model to a
    /// group element. `perm[i] = +-(j+1)` means `e_i -> +-e_j`.
    ///
    /// Type A_n uses unsigned permutations of `n+1` letters with
    /// `s_i = (i, i+1)`. Types B_n / D_n use signed permutations of `n` letters
    /// with `s_i = (i, i+1)` for `i < n`, `s_n: e_n -> -e_n` (B) or
    /// `s_n: e_{n-1} <-> -e_n` (D).
    pub fn from_signed_permutation(&self, perm: &[i8]) -> Result<WeylElement> {
        let n = self.rank;
        let (len, rho): (usize, Vec<i32>) = match self.ty {
            CoxeterType::A(_) => (n + 1, (0..=n as i32).rev().map(|x| x + 1).collect()),
            CoxeterType::B(_) => (n, (1..=n as i32).rev().collect()),
            CoxeterType::D(_) => (n, (0..n as i32).rev().collect()),
            _ => return Err(Error::UnsupportedType { label: self.ty.label(), reason: "no permutation model".into() }),
        };
        if perm.len() != len {
            return Err(Error::Internal(format!("permutation length {} for {}", perm.len(), self.ty)));
        }
        let mut y = vec![0i32; len];
        let mut hit = vec![false; len];
        for (i, &p) in perm.iter().enumerate() {
            let j = p.unsigned_abs() as usize;
            if j == 0 || j > len || hit[j - 1] {
                return Err(Error::Internal(format!("not a signed permutation: {perm:?}")));
            }
            hit[j - 1] = true;
            y[j - 1] = if p < 0 { -rho[i] } else { rho[i] };
        }
        if matches!(self.ty, CoxeterType::A(_)) && perm.iter().any(|&p| p < 0) {
            return Err(Error::Internal("type A permutations are unsigned".into()));
        }
        if matches!(self.ty, CoxeterType::D(_)) && perm.iter().filter(|&&p| p < 0).count() % 2 == 1 {
            return Err(Error::Internal(format!("odd number of sign changes in D: {perm:?}")));
        }
        let descent = |y: &[i32]| -> Option<usize> {
            (0..n).find(|&k| match (self.ty, k + 1 == n) {
                (CoxeterType::B(_), true) => y[k] < 0,
                (CoxeterType::D(_), true) => y[k - 1] + y[k] < 0,
                _ => y[k] < y[k + 1],
            })
        };
        let mut word = Vec::new();
        while let Some(k) = descent(&y) {
            match (self.ty, k + 1 == n) {
                (CoxeterType::B(_), true) => y[k] = -y[k],
                (CoxeterType::D(_), true) => {
                    let (a, b) = (y[k - 1], y[k]);
                    y[k - 1] = -b;
                    y[k] = -a;
                }
                _ => y.swap(k, k + 1),
            }
            word.push(k);
        }
        Ok(self.from_word(&word))
    }

    // ----- enumeration -------------------------------------------------------

    /// All elements in breadth-first (hence length-nondecreasing) order.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<WeylElement>> {
        let order = self.order();
        if order > cap {
            return Err(Error::BudgetExceeded { what: "Weyl group enumeration", count: order, cap });
        }
        let mut seen: FxHashMap<Coords, ()> = FxHashMap::default();
        seen.reserve(order as usize);
        let mut out = Vec::with_capacity(order as usize);
        let mut queue = VecDeque::new();
        let e = self.identity();
        seen.insert(e.coords, ());
        queue.push_back(e);
        while let Some(w) = queue.pop_front() {
            out.push(w);
            for i in 0..self.rank {
                if !self.is_left_descent(&w, i) {
                    let v = self.left_mul_generator(i, &w);
                    if seen.insert(v.coords, ()).is_none() {
                        queue.push_back(v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Partition of `W` into `sigma`-conjugacy classes `{g^-1 w g^sigma}`.
    pub fn sigma_conjugacy_classes(&self, sigma: &DiagramAutomorphism, cap: u64) -> Result<TwistedClasses> {
        if !self.is_diagram_automorphism(sigma) {
            return Err(Error::Internal(format!("{sigma} is not a diagram automorphism of {}", self.ty)));
        }
        let elements = self.enumerate(cap)?;
        let index: FxHashMap<Coords, u32> =
            elements.iter().enumerate().map(|(k, w)| (w.coords, k as u32)).collect();
        let inverse: Vec<u32> = elements.iter().map(|w| index[&self.inverse(w).coords]).collect();

        let mut uf = UnionFind::new(elements.len());
        for (k, w) in elements.iter().enumerate() {
            for i in 0..self.rank {
                // s_i w s_{sigma(i)} = (s_{sigma(i)} (s_i w)^-1)^-1
                let a = index[&self.left_mul_generator(i, w).coords];
                let a_inv = &elements[inverse[a as usize] as usize];
                let b = index[&self.left_mul_generator(sigma.apply(i), a_inv).coords];
                uf.union(k, inverse[b as usize] as usize);
            }
        }
        let mut class_id = vec![u32::MAX; elements.len()];
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for k in 0..elements.len() {
            let root = uf.find(k);
            if class_id[root] == u32::MAX {
                class_id[root] = classes.len() as u32;
                classes.push(Vec::new());
            }
            classes[class_id[root] as usize].push(k as u32);
        }
        let class_of = (0..elements.len()).map(|k| class_id[uf.find(k)]).collect();
        Ok(TwistedClasses { ty: self.ty, sigma: sigma.clone(), elements, index, class_of, classes })
    }

    /// Whether `w` and `v` are `sigma`-conjugate.
    pub fn same_class(&self, w: &WeylElement, v: &WeylElement, classes: &TwistedClasses) -> Result<bool> {
        self.check(w)?;
        self.check(v)?;
        Ok(classes.class_of(w) == classes.class_of(v))
    }

    // ----- text form ---------------------------------------------------------

    /// `"s1 s3 s2"`; the identity is the empty string.
    pub fn format_word(&self, w: &WeylElement) -> String {
        self.word(w).iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join(" ")
    }

    pub fn parse_word(&self, s: &str) -> Result<WeylElement> {
        let letters = s
            .split_whitespace()
            .map(|tok| {
                tok.strip_prefix('s')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&i| (1..=self.rank).contains(&i))
                    .map(|i| i - 1)
                    .ok_or_else(|| Error::Config(format!("bad generator `{tok}` for {}", self.ty)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.from_word(&letters))
    }
}

fn permutations(p: &mut Vec<u8>, k: usize, f: &mut impl FnMut(&[u8])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb) as u32;
        }
    }
}

/// The `sigma`-conjugacy classes of a Weyl group.
#[derive(Clone, Debug)]
pub struct TwistedClasses {
    ty: CoxeterType,
    sigma: DiagramAutomorphism,
    elements: Vec<WeylElement>,
    index: FxHashMap<Coords, u32>,
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
}

impl TwistedClasses {
    pub fn sigma(&self) -> &DiagramAutomorphism {
        &self.sigma
    }

    pub fn coxeter_type(&self) -> CoxeterType {
        self.ty
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, w: &WeylElement) -> usize {
        self.class_of[self.index[&w.coords] as usize] as usize
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = &WeylElement> {
        self.classes[class].iter().map(|&k| &self.elements[k as usize])
    }

    /// The shortest member of a class (first in enumeration order).
    pub fn representative(&self, class: usize) -> WeylElement {
        self.elements[self.classes[class][0] as usize]
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(ty: CoxeterType) -> CoxeterSystem {
        CoxeterSystem::build(ty).unwrap()
    }

    #[test]
    fn rank_one_system() {
        let s = sys(CoxeterType::A(1));
        assert_eq!(s.coxeter_matrix(), &[vec![1]]);
        assert_eq!(s.diagram_automorphisms().len(), 1);
        let w0 = s.longest_element();
        assert_eq!(w0, s.generator(0));
        assert_eq!(w0.length(), 1);
    }

    #[test]
    fn a3_matrix_and_symmetries() {
        let s = sys(CoxeterType::A(3));
        let m = s.coxeter_matrix();
        assert_eq!((m[0][1], m[1][2], m[0][2]), (3, 3, 2));
        let autos = s.diagram_automorphisms();
        assert_eq!(autos.len(), 2);
        assert!(autos.contains(&DiagramAutomorphism::swaps(3, &[(0, 2)])));
    }

    #[test]
    fn d4_has_triality_symmetry_group() {
        // brute force over all 24 node permutations
        let s = sys(CoxeterType::D(4));
        let m = s.coxeter_matrix().to_vec();
        let mut count = 0;
        let mut p: Vec<u8> = (0..4).collect();
        permutations(&mut p, 0, &mut |p| {
            if (0..4).all(|i| (0..4).all(|j| m[p[i] as usize][p[j] as usize] == m[i][j])) {
                count += 1;
            }
        });
        assert_eq!(count, 6);
        assert_eq!(s.diagram_automorphisms().len(), 6);
    }

    #[test]
    fn b_and_e_matrices() {
        let b3 = sys(CoxeterType::B(3));
        assert_eq!(b3.coxeter_matrix()[1][2], 4);
        assert_eq!(b3.diagram_automorphisms().len(), 1);
        let e6 = sys(CoxeterType::E6);
        assert_eq!(e6.coxeter_matrix()[1][3], 3);
        assert_eq!(e6.coxeter_matrix()[0][2], 3);
        assert_eq!(e6.coxeter_matrix()[1][2], 2);
        assert_eq!(e6.diagram_automorphisms().len(), 2);
    }

    #[test]
    fn unsupported_ranks_are_rejected() {
        assert!(CoxeterSystem::build(CoxeterType::A(8)).is_err());
        assert!(CoxeterSystem::build(CoxeterType::D(7)).is_err());
        assert!(CoxeterSystem::build(CoxeterType::E8).is_err());
        assert!(CoxeterSystem::build_with(CoxeterType::E8, true).is_ok());
    }

    #[test]
    fn products_and_braids() {
        let s = sys(CoxeterType::A(2));
        let (e, s1, s2) = (s.identity(), s.generator(0), s.generator(1));
        assert_eq!(s.multiply(&e, &s1).unwrap(), s1);
        assert_eq!(s.multiply(&s1, &s1).unwrap(), e);
        let s1s2 = s.multiply(&s1, &s2).unwrap();
        assert_eq!(s1s2.length(), 2);
        let lhs = s.multiply(&s1s2, &s1).unwrap();
        let rhs = s.multiply(&s.multiply(&s2, &s1).unwrap(), &s2).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, s.longest_element());
    }

    #[test]
    fn mismatched_systems_are_errors() {
        let a = sys(CoxeterType::A(3));
        let d = sys(CoxeterType::D(4));
        assert!(matches!(a.multiply(&a.identity(), &d.identity()), Err(Error::MismatchedSystems { .. })));
    }

    #[test]
    fn longest_lengths_by_enumeration() {
        for (ty, len) in [(CoxeterType::A(1), 1), (CoxeterType::A(3), 6), (CoxeterType::D(4), 12)] {
            let s = sys(ty);
            let all = s.enumerate(u64::MAX).unwrap();
            assert_eq!(all.len() as u64, ty.group_order());
            let max = all.iter().map(WeylElement::length).max().unwrap();
            assert_eq!(max, len);
            assert_eq!(s.longest_element().length(), len);
            for i in 0..s.rank() {
                assert!(s.multiply(&s.longest_element(), &s.generator(i)).unwrap().length() < len);
            }
        }
    }

    #[test]
    fn opposition_involutions() {
        let a3 = sys(CoxeterType::A(3)).opposition_involution();
        assert_eq!(a3, DiagramAutomorphism::swaps(3, &[(0, 2)]));
        assert!(sys(CoxeterType::D(4)).opposition_involution().is_identity());
        assert_eq!(sys(CoxeterType::D(5)).opposition_involution(), DiagramAutomorphism::swaps(5, &[(3, 4)]));
        assert_eq!(sys(CoxeterType::E6).opposition_involution(), DiagramAutomorphism::swaps(6, &[(0, 5), (2, 4)]));
        assert!(sys(CoxeterType::E7).opposition_involution().is_identity());
        assert!(sys(CoxeterType::B(3)).opposition_involution().is_identity());
    }

    #[test]
    fn word_text_round_trip() {
        let s = sys(CoxeterType::A(3));
        let w = s.from_word(&[0, 2, 1]);
        assert_eq!(s.format_word(&w), "s1 s3 s2");
        assert_eq!(s.parse_word("s1 s3 s2").unwrap(), w);
        assert_eq!(s.format_word(&s.identity()), "");
        assert_eq!(s.parse_word("").unwrap(), s.identity());
        assert!(s.parse_word("s4").is_err());
    }

    #[test]
    fn small_class_counts() {
        let a1 = sys(CoxeterType::A(1));
        let c = a1.sigma_conjugacy_classes(&DiagramAutomorphism::identity(1), u64::MAX).unwrap();
        assert_eq!(c.class_sizes(), vec![1, 1]);
        let a3 = sys(CoxeterType::A(3));
        let c = a3.sigma_conjugacy_classes(&DiagramAutomorphism::identity(3), u64::MAX).unwrap();
        assert_eq!(c.len(), 5);
        let (s1, s3) = (a3.generator(0), a3.generator(2));
        assert!(a3.same_class(&s1, &s3, &c).unwrap());
        let a2 = sys(CoxeterType::A(2));
        let c = a2.sigma_conjugacy_classes(&DiagramAutomorphism::identity(2), u64::MAX).unwrap();
        assert!(!a2.same_class(&a2.identity(), &a2.generator(0), &c).unwrap());
    }

    #[test]
    fn class_enumeration_respects_cap() {
        let e7 = sys(CoxeterType::E7);
        let err = e7.sigma_conjugacy_classes(&DiagramAutomorphism::identity(7), 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { cap: 1000, .. }));
    }

    #[test]
    fn double_coset_maximum() {
        let s = sys(CoxeterType::A(3));
        let w0 = s.longest_element();
        let e = s.identity();
        assert_eq!(s.max_in_double_coset(&e, &[0, 1, 2], &[]), w0);
        assert_eq!(s.max_in_double_coset(&e, &[0], &[2]).length(), 2);
    }
}
