//! Run configuration: an INI file overlaid with command-line flags.
//!
//! ```ini
//! [geometry]
//! label = PG(3,2)            # or kind / n / q
//!
//! [automorphism]
//! constructor = symplectic-polarity
//! seed = 0                   # for constructor = random
//! matrix = 1 0 0; 0 1 0; 0 0 1
//! frobenius = 0
//! duality = false
//!
//! [run]
//! mode = exhaustive          # or sample
//! samples = 20000
//! seed = 1
//! checks = spectrum, kangaroo, uniclass, diagrams, substructure, int-k, classify-22p, theorem-a
//! output = report.json
//! cap_chambers = 1000000
//! cap_group = 100000
//! geometries = PG(3,2); HQ(4,2)
//! random_autos = 200
//! pairs = 10000
//! ```

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use ini::Ini;
use uniclass_core::autos::{self, Automorphism, DEFAULT_GROUP_CAP};
use uniclass_core::geometry::{BuildOptions, Geometry, GeometryKind, DEFAULT_CHAMBER_CAP};
use uniclass_core::linalg::Matrix;
use uniclass_core::spectra::{SpectrumMode, DEFAULT_SAMPLES};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GeometrySpec {
    pub kind: GeometryKind,
    pub n: usize,
    pub q: u32,
}

impl GeometrySpec {
    /// Parses `PG(n,q)`, `HQ(n,q)` or `PQ(n,q)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, rest) = s.split_once('(').ok_or_else(|| anyhow!("geometry {s:?}: expected e.g. PG(3,2)"))?;
        let inner = rest.strip_suffix(')').ok_or_else(|| anyhow!("geometry {s:?}: missing ')'"))?;
        let (n, q) = inner.split_once(',').ok_or_else(|| anyhow!("geometry {s:?}: expected two parameters"))?;
        let kind = GeometryKind::parse(head)?;
        Ok(GeometrySpec { kind, n: n.parse().context("geometry rank")?, q: q.parse().context("field order")? })
    }

    pub fn label(&self) -> String {
        let head = match self.kind {
            GeometryKind::Projective => "PG",
            GeometryKind::Hyperbolic => "HQ",
            GeometryKind::Parabolic => "PQ",
        };
        format!("{head}({},{})", self.n, self.q)
    }

    pub fn build(&self) -> Result<Geometry> {
        Ok(Geometry::build(self.kind, self.n, self.q, &BuildOptions::default())?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutoSpec {
    Named { name: String, seed: u64 },
    Explicit { rows: Vec<Vec<i64>>, frobenius: u32, duality: bool },
}

pub const CONSTRUCTORS: [&str; 10] = [
    "identity",
    "symplectic-polarity",
    "spread",
    "reflection",
    "elation",
    "homology",
    "root-elation",
    "baer",
    "random",
    "explicit",
];

impl AutoSpec {
    pub fn named(name: &str) -> Self {
        AutoSpec::Named { name: name.to_string(), seed: 0 }
    }

    pub fn label(&self) -> String {
        match self {
            AutoSpec::Named { name, seed } if name == "random" => format!("random#{seed}"),
            AutoSpec::Named { name, .. } => name.clone(),
            AutoSpec::Explicit { .. } => "explicit".into(),
        }
    }

    pub fn build(&self, geom: &Geometry) -> Result<Automorphism> {
        let f = geom.field();
        let d = geom.ambient_dim();
        let unit = |i: usize| {
            let mut v = vec![0; d];
            v[i] = 1;
            v
        };
        let auto = match self {
            AutoSpec::Explicit { rows, frobenius, duality } => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    bail!("explicit matrix must be {d}x{d} for {}", geom.label());
                }
                // entries are field element codes, as in subspace dumps
                if rows.iter().flatten().any(|&x| x < 0 || x >= f.order() as i64) {
                    bail!("matrix entries must be field codes in 0..{}", f.order());
                }
                let rows: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|&x| x as _).collect()).collect();
                Automorphism::new(f, Matrix::from_rows(&rows), *frobenius, *duality)?
            }
            AutoSpec::Named { name, seed } => match name.as_str() {
                "identity" => Automorphism::identity(geom),
                "symplectic-polarity" => autos::symplectic_polarity(geom)?,
                "spread" => autos::spread_collineation(geom)?,
                "reflection" => autos::quadric_reflection(geom)?,
                "root-elation" => autos::quadric_root_elation(geom)?,
                "baer" => autos::baer_collineation(geom)?,
                "random" => autos::random_automorphism(geom, *seed)?,
                "elation" if geom.kind() == GeometryKind::Parabolic => autos::central_elation_quadric(geom)?,
                "elation" => autos::central_collineation(geom, &unit(0), &unit(d - 1), 1)?.0,
                "homology" if geom.kind() == GeometryKind::Parabolic => autos::quadric_reflection(geom)?,
                "homology" => autos::central_collineation(geom, &unit(0), &unit(0), f.primitive_element())?.0,
                other => bail!("unknown constructor {other:?} (known: {})", CONSTRUCTORS.join(", ")),
            },
        };
        Ok(auto)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Spectrum,
    Kangaroo,
    Uniclass,
    Diagrams,
    Substructure,
    IntK,
    Classify22p,
    TheoremA,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Spectrum,
        Check::Kangaroo,
        Check::Uniclass,
        Check::Diagrams,
        Check::Substructure,
        Check::IntK,
        Check::Classify22p,
        Check::TheoremA,
    ];

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "spectrum" => Check::Spectrum,
            "kangaroo" => Check::Kangaroo,
            "uniclass" => Check::Uniclass,
            "diagrams" => Check::Diagrams,
            "substructure" => Check::Substructure,
            "int-k" => Check::IntK,
            "classify-22p" => Check::Classify22p,
            "theorem-a" => Check::TheoremA,
            _ => bail!("unknown check {s:?}"),
        })
    }
}

/// Flags shared by every subcommand; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub mode: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub json: Option<PathBuf>,
    pub cap_chambers: Option<u64>,
    pub cap_group: Option<u64>,
    pub geometry: Vec<String>,
    pub automorphism: Option<String>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub geometries: Vec<GeometrySpec>,
    pub automorphism: Option<AutoSpec>,
    pub sample_mode: bool,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub output: Option<PathBuf>,
    pub cap_chambers: Option<u64>,
    pub cap_group: u64,
    pub random_autos: usize,
    pub pairs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            geometries: Vec::new(),
            automorphism: None,
            sample_mode: false,
            samples: DEFAULT_SAMPLES,
            seed: 1,
            checks: Check::ALL.to_vec(),
            output: None,
            cap_chambers: None,
            cap_group: DEFAULT_GROUP_CAP,
            random_autos: 200,
            pairs: 10_000,
        }
    }
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>> {
    s.split(';')
        .map(|row| row.split_whitespace().map(|x| x.parse::<i64>().with_context(|| format!("matrix entry {x:?}"))).collect())
        .collect()
}

fn parse_bool(s: &str) -> Result<bool> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => bail!("expected a boolean, got {s:?}"),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_ini_str(&text)
    }

    pub fn from_ini_str(text: &str) -> Result<Self> {
        // `;` separates matrix rows and geometry lists, so only ` #` starts
        // a trailing comment
        let stripped: String = text
            .lines()
            .map(|l| l.find(" #").or_else(|| l.find("\t#")).map_or(l, |i| &l[..i]))
            .collect::<Vec<_>>()
            .join("\n");
        let ini = Ini::load_from_str(&stripped).context("config syntax")?;
        let mut cfg = RunConfig::default();
        let get = |sec: &str, key: &str| ini.section(Some(sec)).and_then(|s| s.get(key)).map(str::trim);

        if let Some(label) = get("geometry", "label") {
            cfg.geometries.push(GeometrySpec::parse(label)?);
        } else if let Some(kind) = get("geometry", "kind") {
            let n = get("geometry", "n").ok_or_else(|| anyhow!("[geometry] needs n"))?.parse()?;
            let q = get("geometry", "q").ok_or_else(|| anyhow!("[geometry] needs q"))?.parse()?;
            cfg.geometries.push(GeometrySpec { kind: GeometryKind::parse(kind)?, n, q });
        }
        if let Some(list) = get("run", "geometries") {
            for g in list.split(';').filter(|s| !s.trim().is_empty()) {
                cfg.geometries.push(GeometrySpec::parse(g)?);
            }
        }

        if let Some(m) = get("automorphism", "matrix") {
            let frobenius = get("automorphism", "frobenius").map(str::parse).transpose()?.unwrap_or(0);
            let duality = get("automorphism", "duality").map(parse_bool).transpose()?.unwrap_or(false);
            cfg.automorphism = Some(AutoSpec::Explicit { rows: parse_matrix(m)?, frobenius, duality });
        } else if let Some(name) = get("automorphism", "constructor") {
            let seed = get("automorphism", "seed").map(str::parse).transpose()?.unwrap_or(0);
            cfg.automorphism = Some(AutoSpec::Named { name: name.to_string(), seed });
        }

        if let Some(m) = get("run", "mode") {
            cfg.sample_mode = parse_mode(m)?;
        }
        if let Some(v) = get("run", "samples") {
            cfg.samples = v.parse().context("samples")?;
        }
        if let Some(v) = get("run", "seed") {
            cfg.seed = v.parse().context("seed")?;
        }
        if let Some(v) = get("run", "checks") {
            cfg.checks = v.split(',').map(|c| Check::parse(c.trim())).collect::<Result<_>>()?;
        }
        if let Some(v) = get("run", "output") {
            cfg.output = Some(PathBuf::from(v));
        }
        if let Some(v) = get("run", "cap_chambers") {
            cfg.cap_chambers = Some(v.parse().context("cap_chambers")?);
        }
        if let Some(v) = get("run", "cap_group") {
            cfg.cap_group = v.parse().context("cap_group")?;
        }
        if let Some(v) = get("run", "random_autos") {
            cfg.random_autos = v.parse().context("random_autos")?;
        }
        if let Some(v) = get("run", "pairs") {
            cfg.pairs = v.parse().context("pairs")?;
        }
        Ok(cfg)
    }

    /// Config file (if any) with the flags laid over it.
    pub fn resolve(o: &Overrides) -> Result<Self> {
        let mut cfg = match &o.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if !o.geometry.is_empty() {
            cfg.geometries = o.geometry.iter().map(|g| GeometrySpec::parse(g)).collect::<Result<_>>()?;
        }
        if let Some(a) = &o.automorphism {
            cfg.automorphism = Some(match a.split_once('#') {
                Some((name, seed)) => AutoSpec::Named { name: name.into(), seed: seed.parse().context("constructor seed")? },
                None => AutoSpec::named(a),
            });
        }
        if let Some(m) = &o.mode {
            cfg.sample_mode = parse_mode(m)?;
        }
        if let Some(s) = o.samples {
            cfg.samples = s;
        }
        if let Some(s) = o.seed {
            cfg.seed = s;
        }
        if let Some(p) = &o.json {
            cfg.output = Some(p.clone());
        }
        if let Some(c) = o.cap_chambers {
            cfg.cap_chambers = Some(c);
        }
        if let Some(c) = o.cap_group {
            cfg.cap_group = c;
        }
        Ok(cfg)
    }

    pub fn chamber_cap(&self) -> u64 {
        self.cap_chambers.unwrap_or(DEFAULT_CHAMBER_CAP)
    }

    pub fn mode(&self) -> SpectrumMode {
        if self.sample_mode {
            SpectrumMode::Sampled { samples: self.samples, seed: self.seed }
        } else {
            SpectrumMode::Exhaustive
        }
    }

    pub fn wants(&self, c: Check) -> bool {
        self.checks.contains(&c)
    }

    pub fn single_geometry(&self) -> Result<GeometrySpec> {
        match self.geometries.as_slice() {
            [g] => Ok(*g),
            [] => bail!("no geometry given (use --geometry or [geometry] in the config)"),
            _ => bail!("this command takes exactly one geometry"),
        }
    }

    pub fn automorphism(&self) -> Result<AutoSpec> {
        self.automorphism.clone().ok_or_else(|| anyhow!("no automorphism given (use --auto or [automorphism])"))
    }
}

fn parse_mode(m: &str) -> Result<bool> {
    match m {
        "exhaustive" => Ok(false),
        "sample" | "sampled" => Ok(true),
        _ => bail!("mode must be exhaustive or sample, got {m:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_labels_round_trip() {
        for s in ["PG(3,2)", "HQ(4,3)", "PQ(3,2)"] {
            assert_eq!(GeometrySpec::parse(s).unwrap().label(), s);
        }
        assert!(GeometrySpec::parse("PG3,2").is_err());
        assert!(GeometrySpec::parse("XX(3,2)").is_err());
    }

    #[test]
    fn ini_sections() {
        let cfg = RunConfig::from_ini_str(
            "[geometry]\nkind = projective\nn = 3\nq = 2\n[automorphism]\nmatrix = 0 1 0 0; 1 0 0 0; 0 0 1 0; 0 0 0 1\nduality = yes\n[run]\nmode = sample\nsamples = 50\nchecks = spectrum, int-k\n",
        )
        .unwrap();
        assert_eq!(cfg.geometries, vec![GeometrySpec { kind: GeometryKind::Projective, n: 3, q: 2 }]);
        let commented = RunConfig::from_ini_str("[geometry]\nlabel = HQ(4,2)   # trailing\n[run]\ngeometries = PG(2,2); PG(3,2) # two\n").unwrap();
        assert_eq!(commented.geometries.len(), 3);
        assert!(matches!(cfg.automorphism, Some(AutoSpec::Explicit { duality: true, .. })));
        assert_eq!(cfg.mode(), SpectrumMode::Sampled { samples: 50, seed: 1 });
        assert_eq!(cfg.checks, vec![Check::Spectrum, Check::IntK]);
    }

    #[test]
    fn flags_override_the_file() {
        let o = Overrides { geometry: vec!["PG(2,4)".into()], automorphism: Some("random#7".into()), seed: Some(9), ..Default::default() };
        let cfg = RunConfig::resolve(&o).unwrap();
        assert_eq!(cfg.single_geometry().unwrap().q, 4);
        assert_eq!(cfg.automorphism().unwrap(), AutoSpec::Named { name: "random".into(), seed: 7 });
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn bad_values_are_rejected() {
        assert!(RunConfig::from_ini_str("[run]\nmode = maybe\n").is_err());
        assert!(RunConfig::from_ini_str("[run]\nchecks = everything\n").is_err());
    }
}
