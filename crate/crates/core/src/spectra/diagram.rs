//! Fix and opposition diagrams, their symbols, and the fix/opposition
//! correspondence for uniclass automorphisms.
//!
//! A diagram is a Coxeter type, a twist `phi` (a diagram automorphism) and a
//! set of encircled `phi`-orbits. Fix diagrams use `phi = sigma`, opposition
//! diagrams `phi = sigma sigma_0`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::autos::Action;
use crate::coxeter::{CoxeterSystem, CoxeterType, DiagramAutomorphism, WeylElement};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, GeometryKind};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramKind {
    Fix,
    Opposition,
}

impl DiagramKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fix" => Ok(DiagramKind::Fix),
            "opposition" | "opp" => Ok(DiagramKind::Opposition),
            _ => Err(Error::Config(format!("unknown diagram kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagramSymbol {
    pub coxeter_type: CoxeterType,
    pub twist: DiagramAutomorphism,
    /// Encircled orbits, each sorted, in order of smallest node.
    pub encircled: Vec<Vec<usize>>,
    /// Orbits whose status is not decided (sampled spectra).
    pub unknown: Vec<Vec<usize>>,
}

/// The named families of symbols this crate recognises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Every orbit encircled.
    All,
    /// No orbit encircled.
    Empty,
    /// `^2A^1_{r;k}`: type A, nontrivial twist, every orbit encircled.
    TwistedA1 { rank: usize },
    /// `A^d_{r;k}`: nodes `d, 2d, ..., kd` encircled with `(k+1)d = r+1`.
    ASpaced { rank: usize, spacing: usize },
    /// `D^1_{n;k}`: the first `k` orbits of the chain encircled, the twist
    /// being the end swap exactly when `n-k` is odd.
    D1 { n: usize, k: usize },
    /// `D^2_{2m;m}`: even nodes up to `2m-2` and one end node.
    D2 { n: usize },
    Other,
}

fn superscript(k: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

fn twist_order(phi: &DiagramAutomorphism) -> usize {
    phi.orbits().iter().map(Vec::len).max().unwrap_or(1)
}

impl DiagramSymbol {
    pub fn new(coxeter_type: CoxeterType, twist: DiagramAutomorphism, encircled: Vec<Vec<usize>>) -> Self {
        DiagramSymbol { coxeter_type, twist, encircled, unknown: Vec::new() }
    }

    /// Fix diagram of the identity: every node encircled, no twist.
    pub fn everything(ty: CoxeterType, twist: DiagramAutomorphism) -> Self {
        let encircled = twist.orbits();
        DiagramSymbol::new(ty, twist, encircled)
    }

    pub fn nothing(ty: CoxeterType, twist: DiagramAutomorphism) -> Self {
        DiagramSymbol::new(ty, twist, Vec::new())
    }

    pub fn is_complete(&self) -> bool {
        self.unknown.is_empty()
    }

    pub fn encircled_nodes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.encircled.iter().flatten().copied().collect();
        v.sort();
        v
    }

    fn orbit_count(&self) -> usize {
        self.twist.orbits().len()
    }

    pub fn family(&self) -> Family {
        if !self.is_complete() {
            return Family::Other;
        }
        let r = self.coxeter_type.rank();
        let k = self.encircled.len();
        if k == self.orbit_count() {
            if let CoxeterType::A(_) = self.coxeter_type {
                if !self.twist.is_identity() && r > 1 {
                    return Family::TwistedA1 { rank: r };
                }
            }
            if let CoxeterType::D(n) = self.coxeter_type {
                let n = n as usize;
                let swapped = !self.twist.is_identity();
                if swapped == ((n - k) % 2 == 1) && self.twist_is_end_swap_or_id() {
                    return Family::D1 { n, k };
                }
            }
            return Family::All;
        }
        if k == 0 {
            if let CoxeterType::D(n) = self.coxeter_type {
                let n = n as usize;
                if self.twist_is_end_swap_or_id() && (!self.twist.is_identity()) == (n % 2 == 1) {
                    return Family::D1 { n, k: 0 };
                }
            }
            return Family::Empty;
        }
        let nodes = self.encircled_nodes();
        match self.coxeter_type {
            CoxeterType::A(_) if self.twist.is_identity() => {
                let d = nodes[0] + 1;
                let spaced = (r + 1).is_multiple_of(d)
                    && nodes.len() == (r + 1) / d - 1
                    && nodes.iter().enumerate().all(|(i, &x)| x + 1 == d * (i + 1));
                if spaced && d > 1 {
                    return Family::ASpaced { rank: r, spacing: d };
                }
                Family::Other
            }
            CoxeterType::D(n) => {
                let n = n as usize;
                if !self.twist_is_end_swap_or_id() {
                    return Family::Other;
                }
                let swapped = !self.twist.is_identity();
                // chain prefix of length k
                let prefix = k <= n - 2 && nodes.iter().enumerate().all(|(i, &x)| x == i);
                if prefix && swapped == ((n - k) % 2 == 1) {
                    return Family::D1 { n, k };
                }
                if !swapped && n.is_multiple_of(2) && k == n / 2 {
                    let m = n / 2;
                    let evens = (1..m).map(|j| 2 * j - 1);
                    let ends_ok = nodes.last().is_some_and(|&x| x == n - 2 || x == n - 1);
                    if ends_ok && nodes[..k - 1].iter().copied().eq(evens) {
                        return Family::D2 { n };
                    }
                }
                Family::Other
            }
            _ => Family::Other,
        }
    }

    fn twist_is_end_swap_or_id(&self) -> bool {
        let CoxeterType::D(n) = self.coxeter_type else { return false };
        let n = n as usize;
        self.twist.is_identity() || self.twist == DiagramAutomorphism::swaps(n, &[(n - 2, n - 1)])
    }

    fn generic(&self) -> String {
        let pre = if self.twist.is_identity() { String::new() } else { superscript(twist_order(&self.twist)) };
        let fmt_orbit = |o: &Vec<usize>| o.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        let mut parts: Vec<String> = self.encircled.iter().map(|o| format!("{{{}}}", fmt_orbit(o))).collect();
        parts.extend(self.unknown.iter().map(|o| format!("?{{{}}}", fmt_orbit(o))));
        format!("{pre}{}[{}]", self.coxeter_type.label(), parts.join(" "))
    }
}

impl fmt::Display for DiagramSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.encircled.len();
        let letter_rank = |ty: CoxeterType| {
            let l = ty.label();
            let split = l.find(|c: char| c.is_ascii_digit()).unwrap_or(l.len());
            (l[..split].to_string(), l[split..].to_string())
        };
        let (x, r) = letter_rank(self.coxeter_type);
        let pre = if self.twist.is_identity() { String::new() } else { superscript(twist_order(&self.twist)) };
        match self.family() {
            Family::TwistedA1 { .. } => write!(f, "{pre}{x}¹_{{{r};{k}}}"),
            Family::ASpaced { spacing, .. } => write!(f, "{x}{}_{{{r};{k}}}", superscript(spacing)),
            Family::D1 { k, .. } => write!(f, "{x}¹_{{{r};{k}}}"),
            Family::D2 { .. } => write!(f, "{x}²_{{{r};{k}}}"),
            Family::All | Family::Empty => write!(f, "{pre}{x}_{{{r};{k}}}"),
            Family::Other => f.write_str(&self.generic()),
        }
    }
}

impl Serialize for DiagramSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Whether `(fix, opposition)` is a pair allowed for a uniclass automorphism
/// by the fix/opposition correspondence. Besides the named families this
/// accepts the two degenerate pairs (everything fixed / nothing opposite and
/// the reverse, realised by the identity and by anisotropic maps).
pub fn duality_row_matches(fix: &DiagramSymbol, opp: &DiagramSymbol) -> bool {
    use Family::*;
    if fix.coxeter_type != opp.coxeter_type {
        return false;
    }
    let everything = |d: &DiagramSymbol| d.is_complete() && d.encircled.len() == d.orbit_count();
    let nothing = |d: &DiagramSymbol| d.is_complete() && d.encircled.is_empty();
    if (everything(fix) && nothing(opp)) || (nothing(fix) && everything(opp)) {
        return true;
    }
    match (fix.family(), opp.family()) {
        (TwistedA1 { rank: r1 }, ASpaced { rank: r2, spacing: 2 }) | (ASpaced { rank: r1, spacing: 2 }, TwistedA1 { rank: r2 }) => {
            r1 == r2 && r1 % 2 == 1
        }
        (D1 { n: n1, k: k1 }, D1 { n: n2, k: k2 }) => n1 == n2 && k1 + k2 == n1,
        (D2 { n: n1 }, D2 { n: n2 }) => n1 == n2,
        _ => false,
    }
}

/// Builds a diagram from a (possibly sampled) spectrum. With `exhaustive`
/// false only positive findings are recorded; the remaining orbits are
/// marked unknown.
pub fn diagram_from_spectrum<'a>(
    sys: &CoxeterSystem,
    sigma: &DiagramAutomorphism,
    kind: DiagramKind,
    spectrum: impl IntoIterator<Item = &'a WeylElement> + Clone,
    exhaustive: bool,
) -> DiagramSymbol {
    let rank = sys.rank();
    let sigma0 = sys.opposition_involution();
    let twist = match kind {
        DiagramKind::Fix => sigma.clone(),
        DiagramKind::Opposition => sigma0.after(sigma),
    };
    let w0 = sys.longest_element();
    let mut encircled = Vec::new();
    let mut unknown = Vec::new();
    for orbit in twist.orbits() {
        let cotype: Vec<usize> = (0..rank).filter(|i| !orbit.contains(i)).collect();
        let hit = match kind {
            DiagramKind::Fix => spectrum.clone().into_iter().any(|d| sys.in_parabolic(d, &cotype)),
            DiagramKind::Opposition => {
                let image: Vec<usize> = orbit.iter().map(|&i| sigma.apply(i)).collect();
                let image_cotype: Vec<usize> = (0..rank).filter(|i| !image.contains(i)).collect();
                spectrum.clone().into_iter().any(|d| sys.max_in_double_coset(d, &cotype, &image_cotype) == w0)
            }
        };
        if hit {
            encircled.push(orbit);
        } else if !exhaustive {
            unknown.push(orbit);
        }
    }
    DiagramSymbol { coxeter_type: sys.coxeter_type(), twist, encircled, unknown }
}

/// Whether two stored subspaces are opposite, ignoring types: complementary
/// in a projective space, `b cap a^perp` empty and equal dimension in a
/// polar space.
pub fn subspaces_opposite(geom: &Geometry, a: u32, b: u32) -> bool {
    match geom.kind() {
        GeometryKind::Projective => {
            geom.dim(a) + geom.dim(b) == geom.n() + 1 && geom.points_of(a).intersection_len(geom.points_of(b)) == 0
        }
        _ => geom.dim(a) == geom.dim(b) && geom.points_of(b).intersection_len(geom.perp_points(a)) == 0,
    }
}

/// Opposition of vertices. Errors when the types are not opposite.
pub fn vertex_opposite(geom: &Geometry, sys: &CoxeterSystem, v: u32, w: u32) -> Result<bool> {
    let (tv, tw) = match (geom.vertex_type(v), geom.vertex_type(w)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Incompatible("not a vertex".into())),
    };
    if sys.opposition_involution().apply(tv) != tw {
        return Err(Error::Incompatible(format!("types {} and {} are not opposite", tv + 1, tw + 1)));
    }
    Ok(subspaces_opposite(geom, v, w))
}

/// Decides one orbit of a diagram directly on vertices, without the
/// spectrum: single-node orbits in both modes, two-node orbits in fix mode,
/// and two-node orbits of projective spaces in opposition mode (where flags
/// are opposite exactly when their vertices are pairwise opposite). `None`
/// for anything else.
pub fn orbit_by_vertices(
    geom: &Geometry,
    sys: &CoxeterSystem,
    action: &Action,
    kind: DiagramKind,
    orbit: &[usize],
) -> Option<bool> {
    let sigma0 = sys.opposition_involution();
    match (orbit, kind) {
        ([i], DiagramKind::Fix) => Some(geom.vertices_of_type(*i).into_iter().any(|v| action.fixes(v))),
        ([i], DiagramKind::Opposition) => {
            Some(geom.vertices_of_type(*i).into_iter().any(|v| subspaces_opposite(geom, v, action.image(v))))
        }
        ([i, _], DiagramKind::Fix) => Some(geom.vertices_of_type(*i).into_iter().any(|u| {
            let img = action.image(u);
            img != u && action.image(img) == u && geom.incident(u, img)
        })),
        ([i, j], DiagramKind::Opposition) if geom.kind() == GeometryKind::Projective => {
            Some(geom.vertices_of_type(*i).into_iter().any(|u| {
                geom.vertices_of_type(*j).into_iter().filter(|&v| geom.incident(u, v)).any(|v| {
                    let (iu, iv) = (action.image(u), action.image(v));
                    // the image vertex of type sigma_0(type) faces each member
                    let (fu, fv) = if geom.vertex_type(iu) == Some(sigma0.apply(*i)) { (iu, iv) } else { (iv, iu) };
                    subspaces_opposite(geom, u, fu) && subspaces_opposite(geom, v, fv)
                })
            }))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(ty: CoxeterType, twist: DiagramAutomorphism, nodes: &[&[usize]]) -> DiagramSymbol {
        DiagramSymbol::new(ty, twist, nodes.iter().map(|o| o.to_vec()).collect())
    }

    #[test]
    fn symbol_names() {
        let swap = DiagramAutomorphism::swaps(3, &[(0, 2)]);
        assert_eq!(sym(CoxeterType::A(3), swap, &[&[0, 2], &[1]]).to_string(), "²A¹_{3;2}");
        assert_eq!(sym(CoxeterType::A(3), DiagramAutomorphism::identity(3), &[&[1]]).to_string(), "A²_{3;1}");
        assert_eq!(sym(CoxeterType::A(5), DiagramAutomorphism::identity(5), &[&[1], &[3]]).to_string(), "A²_{5;2}");
        let id4 = DiagramAutomorphism::identity(4);
        let sw4 = DiagramAutomorphism::swaps(4, &[(2, 3)]);
        assert_eq!(sym(CoxeterType::D(4), id4.clone(), &[&[0], &[1]]).to_string(), "D¹_{4;2}");
        assert_eq!(sym(CoxeterType::D(4), sw4.clone(), &[&[0]]).to_string(), "D¹_{4;1}");
        assert_eq!(sym(CoxeterType::D(4), sw4, &[&[0], &[1], &[2, 3]]).to_string(), "D¹_{4;3}");
        assert_eq!(sym(CoxeterType::D(4), id4.clone(), &[&[1], &[3]]).to_string(), "D²_{4;2}");
        assert_eq!(sym(CoxeterType::D(4), id4, &[&[2]]).to_string(), "D4[{3}]");
    }

    #[test]
    fn duality_rows() {
        let swap = DiagramAutomorphism::swaps(3, &[(0, 2)]);
        let id = DiagramAutomorphism::identity(3);
        let polar = sym(CoxeterType::A(3), swap.clone(), &[&[0, 2], &[1]]);
        let spread = sym(CoxeterType::A(3), id.clone(), &[&[1]]);
        assert!(duality_row_matches(&polar, &spread));
        assert!(duality_row_matches(&spread, &polar));
        assert!(!duality_row_matches(&polar, &polar));
        assert!(duality_row_matches(&DiagramSymbol::everything(CoxeterType::A(3), id), &DiagramSymbol::nothing(CoxeterType::A(3), swap)));
        let sw4 = DiagramAutomorphism::swaps(4, &[(2, 3)]);
        let d3 = sym(CoxeterType::D(4), sw4.clone(), &[&[0], &[1], &[2, 3]]);
        let d1 = sym(CoxeterType::D(4), sw4, &[&[0]]);
        assert!(duality_row_matches(&d3, &d1));
        let d2 = sym(CoxeterType::D(4), DiagramAutomorphism::identity(4), &[&[1], &[2]]);
        assert!(duality_row_matches(&d2, &d2));
    }

    #[test]
    fn unknown_orbits_block_names() {
        let mut d = sym(CoxeterType::A(3), DiagramAutomorphism::identity(3), &[&[1]]);
        d.unknown = vec![vec![0]];
        assert_eq!(d.family(), Family::Other);
        assert_eq!(d.to_string(), "A3[{2} ?{1}]");
        assert!(!duality_row_matches(&d, &d));
    }

    #[test]
    fn identity_spectrum_diagrams() {
        let sys = CoxeterSystem::build(CoxeterType::A(3)).unwrap();
        let e = [sys.identity()];
        let id = DiagramAutomorphism::identity(3);
        let fix = diagram_from_spectrum(&sys, &id, DiagramKind::Fix, e.iter(), true);
        let opp = diagram_from_spectrum(&sys, &id, DiagramKind::Opposition, e.iter(), true);
        assert_eq!(fix.encircled.len(), 3);
        assert!(opp.encircled.is_empty());
        let w0 = [sys.longest_element()];
        let opp = diagram_from_spectrum(&sys, &id, DiagramKind::Opposition, w0.iter(), true);
        assert_eq!(opp.encircled.len(), 2);
    }

    #[test]
    fn point_hyperplane_opposition() {
        let g = Geometry::build_projective(2, 2).unwrap();
        let sys = CoxeterSystem::build(g.coxeter_type()).unwrap();
        for p in g.ids_of_dim(1) {
            for l in g.ids_of_dim(2) {
                let opp = vertex_opposite(&g, &sys, p, l).unwrap();
                assert_eq!(opp, !g.points_of(l).contains(p as usize));
            }
        }
        assert!(vertex_opposite(&g, &sys, 0, 1).is_err());
    }
}
