//! Displacement spectra and the full per-automorphism report.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::diagram::{diagram_from_spectrum, DiagramKind, DiagramSymbol};
use super::relpos::relative_position;
use super::substructure::{detect_weyl_substructure, Substructure};
use crate::autos::{Action, Automorphism};
use crate::coxeter::{CoxeterSystem, DiagramAutomorphism, TwistedClasses, WeylElement, DEFAULT_GROUP_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::geometry::{Chamber, Geometry, DEFAULT_CHAMBER_CAP};
use crate::rootgeom::{MutualPosition, PositionHistogram, RootGeometry};

pub const DEFAULT_SAMPLES: usize = 20_000;

/// Below this many chambers a spectrum is computed on the calling thread.
const PARALLEL_THRESHOLD: usize = 4096;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpectrumMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl SpectrumMode {
    pub fn is_exhaustive(self) -> bool {
        matches!(self, SpectrumMode::Exhaustive)
    }
}

/// Multiset of `delta(C, C^theta)` over the chambers examined.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub counts: BTreeMap<WeylElement, u64>,
    pub examined: u64,
    pub exhaustive: bool,
}

impl Spectrum {
    pub fn elements(&self) -> impl Iterator<Item = &WeylElement> + Clone {
        self.counts.keys()
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        self.counts.contains_key(w)
    }

    fn merge(mut self, other: Spectrum) -> Spectrum {
        for (w, c) in other.counts {
            *self.counts.entry(w).or_insert(0) += c;
        }
        self.examined += other.examined;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    pub word: String,
    pub length: usize,
    pub class: usize,
    pub chambers: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisplacementReport {
    pub geometry: String,
    pub coxeter_type: String,
    pub mode: SpectrumMode,
    pub chambers_examined: u64,
    /// Companion diagram automorphism.
    pub sigma: String,
    #[serde(skip)]
    pub sigma_auto: DiagramAutomorphism,
    pub spectrum: Vec<SpectrumEntry>,
    #[serde(skip)]
    pub elements: Vec<WeylElement>,
    /// Indices (into the sigma-class partition of W) of the classes met.
    pub classes_met: Vec<usize>,
    pub class_count_total: usize,
    pub position_histogram: PositionHistogram,
    /// Positions attained by some root point and its image.
    pub attained_positions: Vec<MutualPosition>,
    pub uniclass: bool,
    /// True when `uniclass` rests on a sample that met a single class.
    pub uniclass_provisional: bool,
    /// `None` when a sample cannot decide.
    pub domestic: Option<bool>,
    pub anisotropic: Option<bool>,
    pub fix_diagram: DiagramSymbol,
    pub opposition_diagram: DiagramSymbol,
    pub substructure: Substructure,
}

impl DisplacementReport {
    pub fn is_kangaroo(&self, d: &[MutualPosition]) -> bool {
        self.position_histogram.is_kangaroo(d)
    }

    /// `{1,2'}`-kangaroo, the side of the main equivalence read off root
    /// points.
    pub fn is_12p_kangaroo(&self) -> bool {
        self.is_kangaroo(&[MutualPosition::D1, MutualPosition::D2P])
    }

    /// Uniclass agrees with being a `{1,2'}`-kangaroo.
    pub fn biconditional_holds(&self) -> bool {
        self.uniclass == self.is_12p_kangaroo()
    }

    /// Structured `key: value` text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(&v);
            out.push('\n');
        };
        let opt = |b: Option<bool>| b.map_or("unknown".to_string(), |b| b.to_string());
        kv("geometry", self.geometry.clone());
        kv("type", self.coxeter_type.clone());
        kv(
            "mode",
            match self.mode {
                SpectrumMode::Exhaustive => "exhaustive".into(),
                SpectrumMode::Sampled { samples, seed } => format!("sampled ({samples}, seed {seed})"),
            },
        );
        kv("chambers", self.chambers_examined.to_string());
        kv("sigma", self.sigma.clone());
        kv("spectrum_size", self.spectrum.len().to_string());
        for e in &self.spectrum {
            let word = if e.word.is_empty() { "e" } else { &e.word };
            kv("  delta", format!("{word} (length {}, class {}, {} chambers)", e.length, e.class, e.chambers));
        }
        kv("classes_met", format!("{:?} of {}", self.classes_met, self.class_count_total));
        let provisional = if self.uniclass_provisional { " (provisional)" } else { "" };
        kv("uniclass", format!("{}{provisional}", self.uniclass));
        kv("domestic", opt(self.domestic));
        kv("anisotropic", opt(self.anisotropic));
        kv("positions", self.position_histogram.to_string());
        kv("attained", crate::rootgeom::format_positions(&self.attained_positions));
        kv("kangaroo_12p", self.is_12p_kangaroo().to_string());
        kv("fix_diagram", self.fix_diagram.to_string());
        kv("opposition_diagram", self.opposition_diagram.to_string());
        kv("substructure", self.substructure.name());
        out
    }
}

/// Per-geometry data shared by every automorphism analysed on it.
pub struct SpectrumContext<'g> {
    geom: &'g Geometry,
    sys: CoxeterSystem,
    roots: RootGeometry<'g>,
    chambers: Option<Vec<Chamber>>,
    classes: Vec<TwistedClasses>,
}

impl<'g> SpectrumContext<'g> {
    pub fn new(geom: &'g Geometry) -> Result<Self> {
        Self::with_cap(geom, DEFAULT_CHAMBER_CAP)
    }

    /// Chambers are enumerated only when there are at most `chamber_cap`;
    /// otherwise only sampled spectra are available.
    pub fn with_cap(geom: &'g Geometry, chamber_cap: u64) -> Result<Self> {
        let sys = CoxeterSystem::build(geom.coxeter_type())?;
        let chambers = match geom.enumerate_chambers(chamber_cap) {
            Ok(c) => Some(c),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        let classes = sys
            .diagram_automorphisms()
            .iter()
            .map(|s| sys.sigma_conjugacy_classes(s, DEFAULT_GROUP_ENUMERATION_CAP))
            .collect::<Result<_>>()?;
        Ok(SpectrumContext { geom, sys, roots: RootGeometry::new(geom), chambers, classes })
    }

    pub fn geometry(&self) -> &'g Geometry {
        self.geom
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn roots(&self) -> &RootGeometry<'g> {
        &self.roots
    }

    pub fn chambers(&self) -> Option<&[Chamber]> {
        self.chambers.as_deref()
    }

    pub fn classes(&self, sigma: &DiagramAutomorphism) -> &TwistedClasses {
        self.classes.iter().find(|c| c.sigma() == sigma).expect("classes exist for every diagram automorphism")
    }

    pub fn action(&self, theta: &Automorphism) -> Result<Action> {
        theta.action(self.geom, &self.sys)
    }

    fn delta(&self, action: &Action, c: &Chamber) -> Result<WeylElement> {
        relative_position(self.geom, &self.sys, c, &action.chamber_image(self.geom, c))
    }

    fn collect(&self, action: &Action, chambers: &[Chamber], exhaustive: bool) -> Result<Spectrum> {
        let fold = |mut acc: Spectrum, c: &Chamber| -> Result<Spectrum> {
            *acc.counts.entry(self.delta(action, c)?).or_insert(0) += 1;
            acc.examined += 1;
            Ok(acc)
        };
        let empty = || Spectrum { counts: BTreeMap::new(), examined: 0, exhaustive };
        if chambers.len() < PARALLEL_THRESHOLD {
            chambers.iter().try_fold(empty(), fold)
        } else {
            chambers
                .par_iter()
                .try_fold(empty, fold)
                .try_reduce(empty, |a, b| Ok(a.merge(b)))
        }
    }

    /// The displacement spectrum. Exhaustive mode needs the chambers to have
    /// been enumerated.
    pub fn spectrum(&self, action: &Action, mode: SpectrumMode) -> Result<Spectrum> {
        match mode {
            SpectrumMode::Exhaustive => {
                let chambers = self.chambers.as_deref().ok_or(Error::BudgetExceeded {
                    what: "exhaustive spectrum (chambers)",
                    count: self.geom.chamber_count(),
                    cap: 0,
                })?;
                self.collect(action, chambers, true)
            }
            SpectrumMode::Sampled { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let picked: Vec<Chamber> = match &self.chambers {
                    Some(all) => (0..samples).map(|_| all.choose(&mut rng).expect("nonempty").clone()).collect(),
                    None => (0..samples).map(|_| self.geom.random_chamber(&mut rng)).collect(),
                };
                self.collect(action, &picked, false)
            }
        }
    }

    pub fn analyse(&self, theta: &Automorphism, mode: SpectrumMode) -> Result<DisplacementReport> {
        let action = self.action(theta)?;
        self.analyse_action(&action, mode)
    }

    pub fn analyse_action(&self, action: &Action, mode: SpectrumMode) -> Result<DisplacementReport> {
        let spectrum = self.spectrum(action, mode)?;
        let profile = self.roots.position_profile(action)?;
        Ok(self.report(action, mode, &spectrum, profile))
    }

    pub fn report(&self, action: &Action, mode: SpectrumMode, spectrum: &Spectrum, profile: PositionHistogram) -> DisplacementReport {
        let sys = &self.sys;
        let sigma = action.sigma.clone();
        let classes = self.classes(&sigma);
        let w0 = sys.longest_element();
        let exhaustive = spectrum.exhaustive;
        let spectrum_entries: Vec<SpectrumEntry> = spectrum
            .counts
            .iter()
            .map(|(w, &c)| SpectrumEntry {
                word: sys.format_word(w),
                length: w.length(),
                class: classes.class_of(w),
                chambers: c,
            })
            .collect();
        let mut classes_met: Vec<usize> = spectrum_entries.iter().map(|e| e.class).collect();
        classes_met.sort();
        classes_met.dedup();
        let has_w0 = spectrum.contains(&w0);
        let only_w0 = has_w0 && spectrum.counts.len() == 1;
        let (domestic, anisotropic) = if exhaustive {
            (Some(!has_w0), Some(only_w0))
        } else {
            (if has_w0 { Some(false) } else { None }, if only_w0 { None } else { Some(false) })
        };
        DisplacementReport {
            geometry: self.geom.label(),
            coxeter_type: sys.coxeter_type().label(),
            mode,
            chambers_examined: spectrum.examined,
            sigma: sigma.to_string(),
            sigma_auto: sigma.clone(),
            elements: spectrum.counts.keys().copied().collect(),
            spectrum: spectrum_entries,
            uniclass: classes_met.len() <= 1,
            uniclass_provisional: !exhaustive && classes_met.len() <= 1,
            classes_met,
            class_count_total: classes.len(),
            attained_positions: profile.support(),
            position_histogram: profile,
            domestic,
            anisotropic,
            fix_diagram: diagram_from_spectrum(sys, &sigma, DiagramKind::Fix, spectrum.elements(), exhaustive),
            opposition_diagram: diagram_from_spectrum(sys, &sigma, DiagramKind::Opposition, spectrum.elements(), exhaustive),
            substructure: detect_weyl_substructure(self.geom, action),
        }
    }
}
