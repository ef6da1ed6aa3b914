//! The constructor zoo and its expected rows.

use anyhow::{anyhow, Context, Result};
use serde::{Deserialize, Serialize};
use uniclass_core::rootgeom::{format_positions, MutualPosition};
use uniclass_core::spectra::{DisplacementReport, SpectrumContext, SpectrumMode};

use crate::config::{AutoSpec, GeometrySpec};

/// Zoo rows need HQ(4,3) (2,329,600 chambers) to be exhaustive.
pub const ZOO_CHAMBER_CAP: u64 = 3_000_000;

const EXPECTED: &str = include_str!("../data/zoo_expected.tsv");

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ExpectedRow {
    pub constructor: String,
    pub geometry: String,
    pub avoids: String,
    pub attained: String,
    pub uniclass: bool,
    pub fix: String,
    pub opposition: String,
    pub substructure: String,
    pub origin: String,
}

pub fn expected_rows() -> Result<Vec<ExpectedRow>> {
    let mut rdr = csv::ReaderBuilder::new().delimiter(b'\t').comment(Some(b'#')).from_reader(EXPECTED.as_bytes());
    rdr.deserialize().map(|r| r.context("zoo data file")).collect()
}

fn parse_positions(s: &str) -> Result<Vec<MutualPosition>> {
    if s == "-" || s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|p| MutualPosition::parse(p.trim()).map_err(|e| anyhow!("{e}"))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ZooRow {
    pub constructor: String,
    pub geometry: String,
    pub mode: SpectrumMode,
    pub attained: String,
    pub uniclass: bool,
    pub fix: String,
    pub opposition: String,
    pub substructure: String,
    pub origin: String,
    pub mismatches: Vec<String>,
}

/// Runs one expected row and lists every disagreement.
pub fn run_row(row: &ExpectedRow, cap: u64) -> Result<(ZooRow, DisplacementReport)> {
    let spec = GeometrySpec::parse(&row.geometry)?;
    let geom = spec.build().with_context(|| format!("building {}", spec.label()))?;
    let ctx = SpectrumContext::with_cap(&geom, cap)?;
    let mode = if ctx.chambers().is_some() {
        SpectrumMode::Exhaustive
    } else {
        SpectrumMode::Sampled { samples: uniclass_core::spectra::DEFAULT_SAMPLES, seed: 1 }
    };
    let auto = AutoSpec::named(&row.constructor).build(&geom)?;
    let r = ctx.analyse(&auto, mode)?;
    let mut mismatches = Vec::new();
    let avoids = parse_positions(&row.avoids)?;
    if !r.is_kangaroo(&avoids) {
        mismatches.push(format!("not a {{{}}}-kangaroo", row.avoids));
    }
    let attained = format_positions(&r.attained_positions);
    let mut check = |what: &str, expected: &str, actual: &str| {
        if expected != actual {
            mismatches.push(format!("{what}: expected {expected}, got {actual}"));
        }
    };
    check("attained", &format!("{{{}}}", row.attained), &attained);
    check("uniclass", &row.uniclass.to_string(), &r.uniclass.to_string());
    check("fix", &row.fix, &r.fix_diagram.to_string());
    check("opposition", &row.opposition, &r.opposition_diagram.to_string());
    check("substructure", &row.substructure, &r.substructure.name());
    if r.uniclass_provisional {
        mismatches.push("spectrum was sampled; raise --cap-chambers".into());
    }
    let out = ZooRow {
        constructor: row.constructor.clone(),
        geometry: row.geometry.clone(),
        mode,
        attained,
        uniclass: r.uniclass,
        fix: r.fix_diagram.to_string(),
        opposition: r.opposition_diagram.to_string(),
        substructure: r.substructure.name(),
        origin: row.origin.clone(),
        mismatches,
    };
    Ok((out, r))
}

/// The zoo automorphisms that exist on a given geometry.
pub fn constructors_for(spec: &GeometrySpec) -> Vec<AutoSpec> {
    let geom = match spec.build() {
        Ok(g) => g,
        Err(_) => return vec![],
    };
    ["identity", "symplectic-polarity", "spread", "reflection", "elation", "homology", "root-elation", "baer"]
        .into_iter()
        .map(AutoSpec::named)
        .filter(|a| a.build(&geom).is_ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_file_parses() {
        let rows = expected_rows().unwrap();
        assert!(rows.len() >= 10);
        for r in &rows {
            GeometrySpec::parse(&r.geometry).unwrap();
            parse_positions(&r.avoids).unwrap();
            parse_positions(&r.attained).unwrap();
            assert!(["table", "theorem", "derived"].contains(&r.origin.as_str()));
        }
    }
}
