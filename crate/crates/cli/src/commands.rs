//! Subcommand bodies. Each returns whether every verification passed;
//! errors (bad input, budgets) propagate and become exit status 2.

use std::io::Write;

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use uniclass_core::autos::{enumerate_automorphism_group, pgl_order, random_automorphism, Automorphism};
use uniclass_core::coxeter::CoxeterSystem;
use uniclass_core::geometry::{Geometry, GeometryKind};
use uniclass_core::oracle::ChamberGraph;
use uniclass_core::rootgeom::format_positions;
use uniclass_core::spectra::classify::{classify_22prime, FixedShape, Verdict22};
use uniclass_core::spectra::diagram::{orbit_by_vertices, DiagramKind};
use uniclass_core::spectra::{
    check_int_k, duality_row_matches, relative_position, DisplacementReport, SpectrumContext, SpectrumMode,
};

use crate::config::{Check, GeometrySpec, RunConfig};
use crate::zoo;

/// Writes pretty JSON to `cfg.output` ("-" for stdout).
fn emit_json<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<()> {
    if let Some(path) = &cfg.output {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        if path.as_os_str() == "-" {
            std::io::stdout().write_all(text.as_bytes())?;
        } else {
            std::fs::write(path, text)?;
        }
    }
    Ok(())
}

/// Rejects an exhaustive run over too many chambers before any work.
fn context<'g>(cfg: &RunConfig, geom: &'g Geometry, cap: u64) -> Result<SpectrumContext<'g>> {
    let count = geom.chamber_count();
    if !cfg.sample_mode && count > cap {
        bail!(
            "{} has {count} chambers, above the chamber cap {cap}; use --mode sample or raise --cap-chambers",
            geom.label()
        );
    }
    Ok(SpectrumContext::with_cap(geom, cap)?)
}

// ----- spectrum ------------------------------------------------------------------

#[derive(Serialize)]
struct SpectrumOutput {
    automorphism: String,
    report: DisplacementReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    int_k: Option<Option<i32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classify_22p: Option<Verdict22>,
    #[serde(skip_serializing_if = "Option::is_none")]
    biconditional_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    duality_row_ok: Option<bool>,
}

pub fn spectrum(cfg: &RunConfig) -> Result<bool> {
    let spec = cfg.single_geometry()?;
    let auto_spec = cfg.automorphism()?;
    let geom = spec.build()?;
    let ctx = context(cfg, &geom, cfg.chamber_cap())?;
    let auto = auto_spec.build(&geom)?;
    let action = ctx.action(&auto)?;
    let report = ctx.analyse_action(&action, cfg.mode())?;
    let mut ok = true;
    let mut out = SpectrumOutput {
        automorphism: auto_spec.label(),
        report,
        int_k: None,
        classify_22p: None,
        biconditional_ok: None,
        duality_row_ok: None,
    };
    if cfg.wants(Check::IntK) && geom.kind().is_polar() {
        out.int_k = Some(check_int_k(&geom, &action));
    }
    if cfg.wants(Check::Classify22p) {
        if let Some(aniso) = out.report.anisotropic {
            let v = classify_22prime(&geom, &action, &out.report.position_histogram, aniso);
            ok &= v.consistent;
            out.classify_22p = Some(v);
        }
    }
    if cfg.wants(Check::TheoremA) && !out.report.uniclass_provisional {
        let holds = out.report.biconditional_holds();
        if geom.coxeter_type().is_simply_laced() {
            ok &= holds;
        }
        out.biconditional_ok = Some(holds);
    }
    if cfg.wants(Check::Diagrams) && out.report.uniclass && out.report.fix_diagram.is_complete() {
        let m = duality_row_matches(&out.report.fix_diagram, &out.report.opposition_diagram);
        ok &= m;
        out.duality_row_ok = Some(m);
    }

    println!("automorphism: {}", out.automorphism);
    let text = out.report.to_text();
    for line in text.lines() {
        let key = line.split(':').next().unwrap_or("").trim();
        let keep = match key {
            "delta" | "spectrum_size" | "classes_met" => cfg.wants(Check::Spectrum),
            "positions" | "attained" | "kangaroo_12p" => cfg.wants(Check::Kangaroo),
            "uniclass" | "domestic" | "anisotropic" => cfg.wants(Check::Uniclass),
            "fix_diagram" | "opposition_diagram" => cfg.wants(Check::Diagrams),
            "substructure" => cfg.wants(Check::Substructure),
            _ => true,
        };
        if keep {
            println!("{line}");
        }
    }
    if let Some(k) = out.int_k {
        println!("int_k: {}", k.map_or("none".to_string(), |k| k.to_string()));
    }
    if let Some(v) = &out.classify_22p {
        println!("classify_22p: kangaroo={} shape={:?} consistent={}", v.kangaroo, v.shape, v.consistent);
    }
    if let Some(b) = out.biconditional_ok {
        let tag = if b { "BICONDITIONAL_OK" } else { "VIOLATION" };
        println!("theorem_a: {tag}");
    }
    if let Some(m) = out.duality_row_ok {
        println!("duality_row: {}", if m { "match" } else { "MISMATCH" });
    }
    emit_json(cfg, &out)?;
    Ok(ok)
}

// ----- theorem-a -----------------------------------------------------------------

#[derive(Serialize)]
struct Violation {
    automorphism: String,
    uniclass: bool,
    attained: String,
}

#[derive(Serialize)]
struct SweepSummary {
    geometry: String,
    coxeter_type: String,
    simply_laced: bool,
    source: String,
    maps: usize,
    provisional: usize,
    uniclass: usize,
    kangaroo_12p: usize,
    violations: usize,
    duality_rows_checked: usize,
    duality_mismatches: usize,
    verdict: String,
    examples: Vec<Violation>,
}

fn describe(a: &Automorphism) -> String {
    let rows: Vec<String> =
        a.matrix.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}] frob={} duality={}", rows.join("; "), a.frobenius, a.duality)
}

fn sweep_maps(cfg: &RunConfig, spec: &GeometrySpec, geom: &Geometry) -> Result<(String, Vec<(String, Automorphism)>)> {
    if geom.kind() == GeometryKind::Projective {
        let f = geom.field();
        let count = pgl_order(geom.n(), f.order() as u64) * f.degree() as u64;
        if count <= cfg.cap_group {
            let all = enumerate_automorphism_group(geom, cfg.cap_group)?;
            return Ok(("full group".into(), all.into_iter().map(|a| (describe(&a), a)).collect()));
        }
    }
    let mut maps: Vec<(String, Automorphism)> =
        zoo::constructors_for(spec).into_iter().map(|s| Ok((s.label(), s.build(geom)?))).collect::<Result<_>>()?;
    for i in 0..cfg.random_autos as u64 {
        let seed = cfg.seed.wrapping_mul(1_000_003).wrapping_add(i);
        maps.push((format!("random#{seed}"), random_automorphism(geom, seed)?));
    }
    Ok((format!("zoo + {} random", cfg.random_autos), maps))
}

pub fn theorem_a(cfg: &RunConfig) -> Result<bool> {
    if cfg.geometries.is_empty() {
        bail!("theorem-a needs at least one geometry");
    }
    let mut ok = true;
    let mut summaries = Vec::new();
    for spec in &cfg.geometries {
        let geom = spec.build()?;
        let ctx = SpectrumContext::with_cap(&geom, cfg.chamber_cap())?;
        let mode = match (cfg.sample_mode, ctx.chambers().is_some()) {
            (false, true) => SpectrumMode::Exhaustive,
            _ => SpectrumMode::Sampled { samples: cfg.samples, seed: cfg.seed },
        };
        let (source, maps) = sweep_maps(cfg, spec, &geom)?;
        let reports: Vec<DisplacementReport> =
            maps.par_iter().map(|(_, a)| ctx.analyse(a, mode)).collect::<uniclass_core::Result<_>>()?;
        let simply_laced = geom.coxeter_type().is_simply_laced();
        let mut s = SweepSummary {
            geometry: geom.label(),
            coxeter_type: geom.coxeter_type().label(),
            simply_laced,
            source,
            maps: maps.len(),
            provisional: reports.iter().filter(|r| r.uniclass_provisional).count(),
            uniclass: reports.iter().filter(|r| r.uniclass).count(),
            kangaroo_12p: reports.iter().filter(|r| r.is_12p_kangaroo()).count(),
            violations: 0,
            duality_rows_checked: 0,
            duality_mismatches: 0,
            verdict: String::new(),
            examples: vec![],
        };
        for ((name, _), r) in maps.iter().zip(&reports) {
            if !r.biconditional_holds() {
                s.violations += 1;
                if s.examples.len() < 10 {
                    s.examples.push(Violation {
                        automorphism: name.clone(),
                        uniclass: r.uniclass,
                        attained: format_positions(&r.attained_positions),
                    });
                }
            }
            if r.uniclass && r.fix_diagram.is_complete() && r.opposition_diagram.is_complete() {
                s.duality_rows_checked += 1;
                if !duality_row_matches(&r.fix_diagram, &r.opposition_diagram) {
                    s.duality_mismatches += 1;
                }
            }
        }
        s.verdict = match (s.violations, simply_laced) {
            (0, _) => "BICONDITIONAL_OK".into(),
            (_, true) => "VIOLATION".into(),
            (_, false) => "VIOLATION (expected: not simply laced)".into(),
        };
        if simply_laced && s.violations > 0 {
            ok = false;
        }
        if simply_laced && s.duality_mismatches > 0 {
            ok = false;
        }
        let prov = if s.provisional > 0 { format!(" ({} provisional)", s.provisional) } else { String::new() };
        println!(
            "{} [{}] {}: {} maps, uniclass {}{prov}, {{1,2'}}-kangaroo {}, violations {}, diagram pairs {} checked / {} mismatched: {}",
            s.geometry,
            s.coxeter_type,
            s.source,
            s.maps,
            s.uniclass,
            s.kangaroo_12p,
            s.violations,
            s.duality_rows_checked,
            s.duality_mismatches,
            s.verdict
        );
        for v in &s.examples {
            println!("  {} uniclass={} attained={}", v.automorphism, v.uniclass, v.attained);
        }
        summaries.push(s);
    }
    emit_json(cfg, &summaries)?;
    Ok(ok)
}

// ----- zoo -----------------------------------------------------------------------

pub fn zoo(cfg: &RunConfig) -> Result<bool> {
    let cap = cfg.cap_chambers.unwrap_or(zoo::ZOO_CHAMBER_CAP);
    let mut rows = Vec::new();
    println!("{:<20} {:<8} {:<10} {:<9} {:<12} {:<12} {:<34} status", "constructor", "geometry", "attained", "uniclass", "fix", "opposition", "substructure");
    for expected in zoo::expected_rows()? {
        let (row, _) = zoo::run_row(&expected, cap)?;
        let status = if row.mismatches.is_empty() { "ok".to_string() } else { format!("MISMATCH: {}", row.mismatches.join("; ")) };
        println!(
            "{:<20} {:<8} {:<10} {:<9} {:<12} {:<12} {:<34} {status}",
            row.constructor, row.geometry, row.attained, row.uniclass, row.fix, row.opposition, row.substructure
        );
        rows.push(row);
    }
    let ok = rows.iter().all(|r| r.mismatches.is_empty());
    emit_json(cfg, &rows)?;
    Ok(ok)
}

// ----- classify-22p --------------------------------------------------------------

#[derive(Serialize, Default)]
struct ClassifySummary {
    geometry: String,
    maps: usize,
    collineations: usize,
    kangaroo_collineations_nontrivial: usize,
    central: usize,
    elations: usize,
    homologies: usize,
    baer: usize,
    kangaroo_but_not_central_or_baer: usize,
    central_or_baer_but_not_kangaroo: usize,
    dualities: usize,
    kangaroo_dualities: usize,
    kangaroo_dualities_anisotropic: usize,
    polar_maps: usize,
    polar_agreements: usize,
    undecided: usize,
}

pub fn classify_22p(cfg: &RunConfig) -> Result<bool> {
    let spec = match cfg.geometries.as_slice() {
        [] => GeometrySpec::parse("PG(2,2)")?,
        _ => cfg.single_geometry()?,
    };
    let geom = spec.build()?;
    let ctx = SpectrumContext::with_cap(&geom, cfg.chamber_cap())?;
    let maps: Vec<(String, Automorphism)> = match &cfg.automorphism {
        Some(a) => vec![(a.label(), a.build(&geom)?)],
        None => sweep_maps(cfg, &spec, &geom)?.1,
    };
    let mode = if ctx.chambers().is_some() { SpectrumMode::Exhaustive } else { cfg.mode() };
    let verdicts: Vec<Option<(bool, Verdict22)>> = maps
        .par_iter()
        .map(|(_, a)| {
            let action = ctx.action(a)?;
            let r = ctx.analyse_action(&action, mode)?;
            let dual = a.duality;
            Ok(r.anisotropic.map(|an| (dual, classify_22prime(&geom, &action, &r.position_histogram, an))))
        })
        .collect::<Result<_>>()?;
    let mut s = ClassifySummary { geometry: geom.label(), maps: maps.len(), ..Default::default() };
    for v in &verdicts {
        let Some((dual, v)) = v else {
            s.undecided += 1;
            continue;
        };
        if geom.kind().is_polar() {
            s.polar_maps += 1;
            s.polar_agreements += v.consistent as usize;
        } else if *dual {
            s.dualities += 1;
            if v.kangaroo {
                s.kangaroo_dualities += 1;
                s.kangaroo_dualities_anisotropic += (v.shape == FixedShape::Anisotropic) as usize;
            }
        } else {
            s.collineations += 1;
            let central_or_baer = matches!(v.shape, FixedShape::Central { .. } | FixedShape::Baer);
            match v.shape {
                FixedShape::Central { elation: true } => s.elations += 1,
                FixedShape::Central { elation: false } => s.homologies += 1,
                FixedShape::Baer => s.baer += 1,
                _ => {}
            }
            let nontrivial_kangaroo = v.kangaroo && v.shape != FixedShape::Trivial;
            s.kangaroo_collineations_nontrivial += nontrivial_kangaroo as usize;
            s.kangaroo_but_not_central_or_baer += (nontrivial_kangaroo && !central_or_baer) as usize;
            s.central_or_baer_but_not_kangaroo += (central_or_baer && !v.kangaroo) as usize;
        }
    }
    s.central = s.elations + s.homologies;
    let ok = s.kangaroo_but_not_central_or_baer == 0
        && s.central_or_baer_but_not_kangaroo == 0
        && s.kangaroo_dualities == s.kangaroo_dualities_anisotropic
        && s.polar_agreements == s.polar_maps;
    println!("geometry: {}", s.geometry);
    println!("maps: {}", s.maps);
    if s.collineations > 0 {
        println!(
            "collineations: {} (nontrivial {{2,2'}}-kangaroos {}, central {} = {} elations + {} homologies, baer {})",
            s.collineations, s.kangaroo_collineations_nontrivial, s.central, s.elations, s.homologies, s.baer
        );
        println!(
            "  kangaroo but not central/baer: {}, central/baer but not kangaroo: {}",
            s.kangaroo_but_not_central_or_baer, s.central_or_baer_but_not_kangaroo
        );
    }
    if s.dualities > 0 {
        println!(
            "dualities: {} ({{2,2'}}-kangaroos {}, of which anisotropic {})",
            s.dualities, s.kangaroo_dualities, s.kangaroo_dualities_anisotropic
        );
    }
    if s.polar_maps > 0 {
        println!("polar maps: {} (linewise criterion agrees on {})", s.polar_maps, s.polar_agreements);
    }
    if s.undecided > 0 {
        println!("undecided (sampled anisotropy): {}", s.undecided);
    }
    println!("result: {}", if ok { "ok" } else { "FAIL" });
    emit_json(cfg, &s)?;
    Ok(ok)
}

// ----- diagram -------------------------------------------------------------------

#[derive(Serialize)]
struct OrbitCheck {
    kind: DiagramKind,
    orbit: Vec<usize>,
    from_spectrum: Option<bool>,
    from_vertices: Option<bool>,
}

#[derive(Serialize)]
struct DiagramOutput {
    geometry: String,
    automorphism: String,
    fix: String,
    opposition: String,
    complete: bool,
    duality_row: Option<bool>,
    orbits: Vec<OrbitCheck>,
}

pub fn diagram(cfg: &RunConfig) -> Result<bool> {
    let spec = cfg.single_geometry()?;
    let auto_spec = cfg.automorphism()?;
    let geom = spec.build()?;
    let ctx = context(cfg, &geom, cfg.chamber_cap())?;
    let action = ctx.action(&auto_spec.build(&geom)?)?;
    let r = ctx.analyse_action(&action, cfg.mode())?;
    let complete = r.fix_diagram.is_complete() && r.opposition_diagram.is_complete();
    let mut orbits = Vec::new();
    let mut ok = true;
    for (kind, d) in [(DiagramKind::Fix, &r.fix_diagram), (DiagramKind::Opposition, &r.opposition_diagram)] {
        for orbit in d.twist.orbits() {
            let from_spectrum = if d.encircled.contains(&orbit) {
                Some(true)
            } else if d.unknown.contains(&orbit) {
                None
            } else {
                Some(false)
            };
            let from_vertices = orbit_by_vertices(&geom, ctx.system(), &action, kind, &orbit);
            if let (Some(a), Some(b)) = (from_spectrum, from_vertices) {
                ok &= a == b;
            }
            orbits.push(OrbitCheck { kind, orbit, from_spectrum, from_vertices });
        }
    }
    let duality_row = (r.uniclass && complete).then(|| duality_row_matches(&r.fix_diagram, &r.opposition_diagram));
    println!("geometry: {}", geom.label());
    println!("automorphism: {}", auto_spec.label());
    println!("fix: {}", r.fix_diagram);
    println!("opposition: {}", r.opposition_diagram);
    if !complete {
        println!("diagram: partial");
    }
    let show = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
    for o in &orbits {
        let nodes: Vec<String> = o.orbit.iter().map(|i| (i + 1).to_string()).collect();
        println!(
            "  {:?} {{{}}}: spectrum={} vertices={}",
            o.kind,
            nodes.join(","),
            show(o.from_spectrum),
            show(o.from_vertices)
        );
    }
    if let Some(m) = duality_row {
        println!("duality_row: {}", if m { "match" } else { "MISMATCH" });
        ok &= m;
    }
    let out = DiagramOutput {
        geometry: geom.label(),
        automorphism: auto_spec.label(),
        fix: r.fix_diagram.to_string(),
        opposition: r.opposition_diagram.to_string(),
        complete,
        duality_row,
        orbits,
    };
    emit_json(cfg, &out)?;
    Ok(ok)
}

// ----- oracle-check --------------------------------------------------------------

#[derive(Serialize)]
struct OracleOutput {
    geometry: String,
    chambers: usize,
    pairs: u64,
    agreements: u64,
    exhaustive: bool,
}

/// Chamber graphs up to this size are compared on every pair.
const ALL_PAIRS_LIMIT: usize = 1000;

pub fn oracle_check(cfg: &RunConfig) -> Result<bool> {
    let spec = cfg.single_geometry()?;
    let geom = spec.build()?;
    let sys = CoxeterSystem::build(geom.coxeter_type())?;
    let graph = ChamberGraph::build(&geom, cfg.chamber_cap())?;
    let chambers = graph.chambers();
    let exhaustive = chambers.len() <= ALL_PAIRS_LIMIT;
    // (source, targets) groups; one BFS per source
    let groups: Vec<(u32, Vec<u32>)> = if exhaustive {
        (0..chambers.len() as u32).map(|s| (s, (0..chambers.len() as u32).collect())).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let per_source = 100usize;
        let sources = cfg.pairs.div_ceil(per_source);
        (0..sources)
            .map(|i| {
                let take = per_source.min(cfg.pairs - i * per_source);
                let s = rng.gen_range(0..chambers.len() as u32);
                (s, (0..take).map(|_| rng.gen_range(0..chambers.len() as u32)).collect())
            })
            .collect()
    };
    let (pairs, agreements) = groups
        .par_iter()
        .map(|(s, targets)| {
            let dist = graph.distances_from(&sys, *s);
            let mut agree = 0u64;
            for &t in targets {
                let w = relative_position(&geom, &sys, &chambers[*s as usize], &chambers[t as usize])?;
                agree += (w == dist[t as usize]) as u64;
            }
            Ok((targets.len() as u64, agree))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
        .map_err(|e: uniclass_core::Error| anyhow::anyhow!(e))?;
    println!("geometry: {}", geom.label());
    println!("chambers: {}", chambers.len());
    println!("pairs: {pairs} ({})", if exhaustive { "all" } else { "sampled" });
    println!("agreement: {agreements}/{pairs}");
    let out = OracleOutput { geometry: geom.label(), chambers: chambers.len(), pairs, agreements, exhaustive };
    emit_json(cfg, &out)?;
    Ok(agreements == pairs)
}
