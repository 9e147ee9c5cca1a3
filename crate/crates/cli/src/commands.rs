//! The four CLI verbs. Every output file starts with a `# config=<hash>` line.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use cmac_core::cme::{cme_outer, CmeSource};
use cmac_core::dm::{compression_feasibility, dm_region, CompressionFeasibility, DEGRADED_TOL};
use cmac_core::gap::{
    broadcast_audit, broadcast_gap, multiplexing_sweep, multiplexing_sweep_with, summarize, summarize_symmetric,
    symmetric_audit, symmetric_gap, AuditSummary, CapacitySchedule, MuxRow, SymmetricGapReport, SymmetricTemplate,
};
use cmac_core::gaussian::gaussian_region;
use cmac_core::{BroadcastInstance, EncoderConferencing, GapReport, GaussianCmChannel, GridSpec, RateRegion, Scheme};
use serde::Serialize;

use crate::config::{GapMode, GapSpec, ScenarioConfig, SchemeName, SweepSpec, SweepVar, Units};
use crate::error::{CliError, Result};

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(CliError::io(path))
}

fn region_csv(region: &RateRegion, hash: &str) -> Result<Vec<u8>> {
    let mut buf = format!("# config={hash}\n").into_bytes();
    region.write_csv(&mut buf)?;
    Ok(buf)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("manifest serializes");
    bytes.push(b'\n');
    write_file(path, &bytes)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionEntry {
    pub name: String,
    pub file: String,
    pub dim: usize,
    pub vertices: usize,
    pub max_sum_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest<E> {
    pub config_hash: String,
    pub config: ScenarioConfig,
    pub grid: GridSpec,
    pub clip: f64,
    pub entries: Vec<E>,
}

impl<E> Manifest<E> {
    fn new(cfg: &ScenarioConfig, grid: GridSpec, entries: Vec<E>) -> Self {
        Self { config_hash: cfg.hash(), config: cfg.clone(), grid, clip: grid.clip, entries }
    }
}

fn save_region(dir: &Path, name: &str, region: &RateRegion, hash: &str) -> Result<RegionEntry> {
    let file = format!("{name}.csv");
    write_file(&dir.join(&file), &region_csv(region, hash)?)?;
    Ok(RegionEntry {
        name: name.to_string(),
        file,
        dim: region.dim(),
        vertices: region.vertices().len(),
        max_sum_rate: region.max_sum_rate(),
    })
}

/// The three encoder/decoder conferencing combinations, as `(label, channel, encoder links)`.
fn cme_variants(
    ch: &GaussianCmChannel,
    enc: EncoderConferencing,
) -> [(&'static str, GaussianCmChannel, EncoderConferencing); 3] {
    [("encoder", ch.with_conferencing(0.0, 0.0), enc), ("decoder", *ch, EncoderConferencing::NONE), ("both", *ch, enc)]
}

/// One CSV per scheme (three for `cme-outer`) plus `manifest.json`.
pub fn cmd_region(cfg: &ScenarioConfig, out: &Path) -> Result<Manifest<RegionEntry>> {
    cfg.validate()?;
    let ch = cfg.gaussian()?;
    ensure_dir(out)?;
    let hash = cfg.hash();
    let mut entries = Vec::new();
    for &scheme in &cfg.schemes {
        match scheme.core() {
            Some(s) => {
                let region = gaussian_region(&ch, s, &cfg.grid, cfg.r0_mode)?;
                entries.push(save_region(out, s.name(), &region, &hash)?);
            }
            None => {
                for (label, variant, enc) in cme_variants(&ch, cfg.encoder()) {
                    let region = cme_outer(&CmeSource::Gaussian(&variant), &enc, &cfg.grid)?;
                    entries.push(save_region(out, &format!("cme-outer-{label}"), &region, &hash)?);
                }
            }
        }
    }
    let manifest = Manifest::new(cfg, cfg.grid, entries);
    write_json(&out.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// Sum-rate supports at one sweep value; `None` for schemes not requested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub outer: Option<f64>,
    pub one_round: Option<f64>,
    pub two_round: Option<f64>,
    pub no_coop: Option<f64>,
    pub cme_outer: Option<f64>,
}

fn swept(cfg: &ScenarioConfig, var: SweepVar, v: f64) -> ScenarioConfig {
    let mut c = cfg.clone();
    match var {
        SweepVar::C12 => c.c12 = v,
        SweepVar::C21 => c.c21 = v,
        SweepVar::Cbar12 => c.cbar12 = Some(crate::config::Capacity(v)),
        SweepVar::Cbar21 => c.cbar21 = Some(crate::config::Capacity(v)),
        SweepVar::P => {
            if let Some(b) = c.channel.as_mut() {
                b.p1 = v;
                b.p2 = v;
            }
        }
    }
    c
}

/// `sweep.csv` with columns `sweep_value, outer, one_round, two_round, no_coop`
/// (plus `cme_outer` when requested).
pub fn cmd_sweep(cfg: &ScenarioConfig, spec: &SweepSpec, out: &Path) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let values = spec.values()?;
    if spec.var == SweepVar::P && cfg.units == Units::Linear && spec.min < 0.0 {
        return Err(CliError::Usage("linear power sweep must be non-negative".into()));
    }
    let mut rows = Vec::with_capacity(values.len());
    for &v in &values {
        let point = swept(cfg, spec.var, v);
        point.validate()?;
        let ch = point.gaussian()?;
        let sum = |s: Scheme| -> Result<Option<f64>> {
            if !point.wants(s.into()) {
                return Ok(None);
            }
            Ok(Some(gaussian_region(&ch, s, &point.grid, point.r0_mode)?.max_sum_rate()))
        };
        let cme = if point.wants(SchemeName::CmeOuter) {
            Some(cme_outer(&CmeSource::Gaussian(&ch), &point.encoder(), &point.grid)?.max_sum_rate())
        } else {
            None
        };
        rows.push(SweepRow {
            sweep_value: v,
            outer: sum(Scheme::Outer)?,
            one_round: sum(Scheme::OneRound)?,
            two_round: sum(Scheme::TwoRound)?,
            no_coop: sum(Scheme::NoCoop)?,
            cme_outer: cme,
        });
    }

    ensure_dir(out)?;
    let mut buf = format!("# config={}\n", cfg.hash()).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let with_cme = cfg.wants(SchemeName::CmeOuter);
        let mut header = vec!["sweep_value", "outer", "one_round", "two_round", "no_coop"];
        if with_cme {
            header.push("cme_outer");
        }
        let csv_err = |e: csv::Error| CliError::Usage(format!("csv encoding failed: {e}"));
        w.write_record(&header).map_err(csv_err)?;
        let cell = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.12}"));
        for r in &rows {
            let mut rec = vec![
                format!("{:.12}", r.sweep_value),
                cell(r.outer),
                cell(r.one_round),
                cell(r.two_round),
                cell(r.no_coop),
            ];
            if with_cme {
                rec.push(cell(r.cme_outer));
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush().map_err(CliError::io(out.join("sweep.csv")))?;
    }
    write_file(&out.join("sweep.csv"), &buf)?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedAudit {
    pub name: String,
    pub summary: AuditSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapOutput {
    pub config_hash: String,
    pub mode: GapMode,
    pub seed: u64,
    pub audits: Vec<NamedAudit>,
    /// Single-instance broadcast reports.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<GapReport>,
    /// Single-instance symmetric reports.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub symmetric: Vec<SymmetricGapReport>,
    /// Symmetric audit instances whose shrunk outer region escapes the one-round region.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region_form_failures: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mux: Vec<MuxRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mux_fixed: Vec<MuxRow>,
    /// `false` iff a theorem audit or single-instance check failed.
    pub pass: bool,
}

fn named(name: &str, summary: AuditSummary) -> NamedAudit {
    NamedAudit { name: name.to_string(), summary }
}

/// Runs the gap audit for `mode` and writes `gap.json`.
pub fn cmd_gap(cfg: &ScenarioConfig, mode: GapMode, out: &Path) -> Result<GapOutput> {
    cfg.validate()?;
    let spec = cfg.gap.clone().unwrap_or_default();
    let mut result = GapOutput {
        config_hash: cfg.hash(),
        mode,
        seed: cfg.seed,
        audits: Vec::new(),
        reports: Vec::new(),
        symmetric: Vec::new(),
        region_form_failures: None,
        mux: Vec::new(),
        mux_fixed: Vec::new(),
        pass: true,
    };
    match mode {
        GapMode::Broadcast => {
            result.audits.push(named("broadcast", summarize(&broadcast_audit(spec.samples, cfg.seed, false)?)));
            result
                .audits
                .push(named("broadcast-equal-snr", summarize(&broadcast_audit(spec.samples, cfg.seed, true)?)));
            if let (Some(pa), Some(pb)) = (spec.pa, spec.pb) {
                result.reports.push(broadcast_gap(&BroadcastInstance { pa, pb, c12: cfg.c12, c21: cfg.c21 })?);
            }
        }
        GapMode::Symmetric => {
            let reports = symmetric_audit(spec.samples, cfg.seed, false)?;
            let [r1, r2, sum] = summarize_symmetric(&reports);
            result.audits.extend([named("symmetric-r1", r1), named("symmetric-r2", r2), named("symmetric-sum", sum)]);
            let [e1, e2, esum] = summarize_symmetric(&symmetric_audit(spec.samples, cfg.seed, true)?);
            result.audits.extend([
                named("equal-gains-r1", e1),
                named("equal-gains-r2", e2),
                named("equal-gains-sum", esum),
            ]);
            result.region_form_failures = Some(reports.iter().filter(|r| !r.region_pass).count());
            if let (Some(a), Some(b), Some(p), Some(c)) = (spec.a, spec.b, spec.p, spec.c) {
                result.symmetric.push(symmetric_gap(a, b, p, c)?);
            }
        }
        GapMode::Mux => {
            let template = mux_template(cfg, &spec)?;
            result.mux = multiplexing_sweep(&template, spec.epsilon, &spec.p_grid)?;
            if let Some(c) = spec.fixed_c {
                result.mux_fixed = multiplexing_sweep_with(&template, CapacitySchedule::Fixed { c }, &spec.p_grid)?;
            }
        }
    }
    result.pass = result.audits.iter().all(|a| a.summary.pass())
        && result.reports.iter().all(|r| r.pass)
        && result.symmetric.iter().all(|r| r.pass());
    ensure_dir(out)?;
    write_json(&out.join("gap.json"), &result)?;
    Ok(result)
}

/// Template gains from the gap block, or from a symmetric channel block.
fn mux_template(cfg: &ScenarioConfig, spec: &GapSpec) -> Result<SymmetricTemplate> {
    if let (Some(a), Some(b)) = (spec.a, spec.b) {
        return Ok(SymmetricTemplate { a, b });
    }
    let ch = cfg.gaussian()?;
    if ch.g11 != ch.g22 || ch.g12 != ch.g21 || ch.p1 != ch.p2 {
        return Err(CliError::Usage("multiplexing sweep needs a symmetric channel or explicit gap.a and gap.b".into()));
    }
    Ok(SymmetricTemplate { a: ch.g11, b: ch.g12 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DmReport {
    pub sizes: [usize; 4],
    pub physically_degraded: bool,
    pub compression: CompressionFeasibility,
    pub regions: Vec<RegionEntry>,
}

/// Discrete-memoryless regions: `dm-<scheme>.csv` per requested scheme, with
/// `dm-ccm00.csv` for the region without conferencing, plus `manifest.json`.
pub fn cmd_dm(cfg: &ScenarioConfig, out: &Path) -> Result<Manifest<DmReport>> {
    cfg.validate()?;
    let spec = cfg.dm.as_ref().ok_or_else(|| CliError::Usage("config has no `dm` block".into()))?;
    let grid = spec.grid.unwrap_or(cfg.grid);
    grid.validate()?;
    let opts = spec.options;
    let ch = spec.channel.build(opts.max_alphabet)?;
    ensure_dir(out)?;
    let hash = cfg.hash();

    let mut regions = Vec::new();
    let base = dm_region(&ch, Scheme::NoCoop, 0.0, 0.0, &grid, cfg.r0_mode, &opts)?;
    regions.push(save_region(out, "dm-ccm00", &base, &hash)?);
    let degraded = ch.is_physically_degraded(DEGRADED_TOL);
    for &scheme in &cfg.schemes {
        let (name, region) = match scheme.core() {
            Some(s) => (format!("dm-{}", s.name()), dm_region(&ch, s, cfg.c12, cfg.c21, &grid, cfg.r0_mode, &opts)?),
            None => {
                let source = CmeSource::Dm { channel: &ch, c12: cfg.c12, c21: cfg.c21, degraded, opts };
                ("dm-cme-outer".to_string(), cme_outer(&source, &cfg.encoder(), &grid)?)
            }
        };
        regions.push(save_region(out, &name, &region, &hash)?);
    }
    let compression = if cfg.wants(SchemeName::OneRound) || cfg.wants(SchemeName::TwoRound) {
        compression_feasibility(&ch, cfg.c12, cfg.c21, &grid, &opts)?
    } else {
        CompressionFeasibility { pairs: 0, feasible: 0 }
    };
    let report = DmReport { sizes: ch.sizes(), physically_degraded: degraded, compression, regions };
    let manifest = Manifest::new(cfg, grid, vec![report]);
    write_json(&out.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// `--out`, else the config's `out`, else `./out`.
pub fn output_dir(flag: Option<PathBuf>, cfg: &ScenarioConfig) -> PathBuf {
    flag.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"))
}

/// Max sum rate per region entry, keyed by name.
pub fn max_sums(entries: &[RegionEntry]) -> BTreeMap<String, f64> {
    entries.iter().map(|e| (e.name.clone(), e.max_sum_rate)).collect()
}
