//! Constant-gap checks between the outer bound and one-round conferencing.
//!
//! Two closed-form families are covered: the broadcast special case
//! (transmitter 2 silent, only `R1`) and the symmetric channel with
//! `γ11² = γ22² = a`, `γ12² = γ21² = b`, `P1 = P2 = P`, `C12 = C21 = C`.
//! The randomized audits draw every instance from its own ChaCha stream, so
//! results do not depend on how the work is scheduled.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundSet;
use crate::error::{Error, Result};
use crate::gaussian::{breve, one_round_at, sigma_min, GaussianCmChannel};
use crate::geometry::{polytope_from_bounds, R0Mode};
use crate::info::cap;

/// Slack allowed on every gap comparison.
pub const GAP_TOL: f64 = 1e-9;

/// `(log2 3 - 1) / 2`, the gap for the symmetric broadcast case.
pub fn symmetric_cap() -> f64 {
    (3f64.log2() - 1.0) / 2.0
}

/// Broadcast instance: receive SNRs `Pa = γ11² P1`, `Pb = γ12² P1` and both link capacities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BroadcastInstance {
    pub pa: f64,
    pub pb: f64,
    pub c12: f64,
    pub c21: f64,
}

impl BroadcastInstance {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("pa", self.pa), ("pb", self.pb), ("c12", self.c12), ("c21", self.c21)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Validation(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapValues {
    pub bound: f64,
    pub achievable: f64,
}

/// One gap measurement against its theoretical cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub inputs: BTreeMap<String, f64>,
    pub values: GapValues,
    pub gap: f64,
    pub cap: f64,
    pub case: String,
    pub pass: bool,
}

impl GapReport {
    fn new(inputs: &[(&str, f64)], bound: f64, achievable: f64, cap: f64, case: impl Into<String>) -> Self {
        let gap = bound - achievable;
        Self {
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            values: GapValues { bound, achievable },
            gap,
            cap,
            case: case.into(),
            pass: gap <= cap + GAP_TOL,
        }
    }
}

/// `x / (x + n)`, the side weight `1/(1+σ²)` for `σ² = n/x`; zero when `x = 0`.
fn weight(x: f64, n: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x.is_infinite() {
        1.0
    } else {
        x / (x + n)
    }
}

/// Which of the three analysis cases an instance falls in (first match wins).
pub fn broadcast_case(inst: &BroadcastInstance) -> Option<u8> {
    let (pa, pb) = (inst.pa, inst.pb);
    let (b12, b21) = (breve(inst.c12), breve(inst.c21));
    if b21 >= pb / (1.0 + pa) && b12 >= pa / (1.0 + pb) {
        Some(1)
    } else if b21 <= pb / (1.0 + pa) && (1.0 + pa) * (1.0 + b21) <= (1.0 + pb) * (1.0 + b12) {
        Some(2)
    } else if b12 <= pa / (1.0 + pb) && (1.0 + pb) * (1.0 + b12) <= (1.0 + pa) * (1.0 + b21) {
        Some(3)
    } else {
        None
    }
}

/// `R1` outer bound versus one-round rate when only transmitter 1 is active.
pub fn broadcast_gap(inst: &BroadcastInstance) -> Result<GapReport> {
    inst.validate()?;
    let BroadcastInstance { pa, pb, c12, c21 } = *inst;
    let n = 1.0 + pa + pb;
    let s1 = weight((1.0 + pb) * breve(c12), n);
    let s2 = weight((1.0 + pa) * breve(c21), n);
    let bound = (cap(pa) + c21).min(cap(pb) + c12).min(cap(pa + pb));
    let achievable = cap(pa + pb * s2).min(cap(pb + pa * s1));
    let symmetric = (pa - pb).abs() <= 1e-12 * pa.max(pb);
    let limit = if symmetric { symmetric_cap() } else { 0.5 };
    let case = broadcast_case(inst).map_or_else(|| "unclassified".to_string(), |c| format!("case {c}"));
    Ok(GapReport::new(&[("pa", pa), ("pb", pb), ("c12", c12), ("c21", c21)], bound, achievable, limit, case))
}

/// Outer and one-round bounds of the symmetric channel at `R0 = 0`, as `(R1, R2, R1 + R2)` triples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricBounds {
    pub outer: [f64; 3],
    pub one_round: [f64; 3],
}

pub fn symmetric_bounds(a: f64, b: f64, p: f64, c: f64) -> Result<SymmetricBounds> {
    for (name, v) in [("a", a), ("b", b), ("p", p), ("c", c)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Validation(format!("{name} must be finite and >= 0, got {v}")));
        }
    }
    if a == 0.0 && b == 0.0 {
        return Err(Error::Validation("a and b cannot both be zero".into()));
    }
    let d2 = (b - a).powi(2) * p * p;
    let single = (cap(a * p) + c).min(cap(b * p) + c).min(cap((a + b) * p));
    let outer_sum = (cap((a + b) * p) + c).min(cap(2.0 * (a + b) * p + d2));
    let n = 1.0 + 2.0 * (a + b) * p + d2;
    let s = weight((1.0 + (a + b) * p) * breve(c), n);
    let or_single = cap((a + b * s) * p).min(cap((b + a * s) * p));
    let or_sum = cap((a + b) * (1.0 + s) * p + s * d2);
    Ok(SymmetricBounds { outer: [single, single, outer_sum], one_round: [or_single, or_single, or_sum] })
}

/// Per-bound and region-level gaps for the symmetric channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricGapReport {
    pub r1: GapReport,
    pub r2: GapReport,
    pub sum: GapReport,
    /// Whether the outer region shrunk by `Δ` on every bound fits inside the one-round region.
    pub region_pass: bool,
    /// `½ log2(1 + β)` with `β = max(a,b) / min(a,b)`, or `(log2 3 - 1)/2` when `a = b`.
    pub delta: f64,
}

impl SymmetricGapReport {
    pub fn pass(&self) -> bool {
        self.r1.pass && self.r2.pass && self.sum.pass
    }
}

pub fn symmetric_gap(a: f64, b: f64, p: f64, c: f64) -> Result<SymmetricGapReport> {
    let sb = symmetric_bounds(a, b, p, c)?;
    let delta = if a == b {
        symmetric_cap()
    } else {
        let lo = a.min(b);
        if lo == 0.0 {
            f64::INFINITY
        } else {
            0.5 * (1.0 + a.max(b) / lo).log2()
        }
    };
    let inputs = [("a", a), ("b", b), ("p", p), ("c", c)];
    let branch = if a == b { "equal gains" } else { "general" };
    let r1 = GapReport::new(&inputs, sb.outer[0], sb.one_round[0], delta, branch);
    let r2 = GapReport::new(&inputs, sb.outer[1], sb.one_round[1], delta, branch);
    let sum = GapReport::new(&inputs, sb.outer[2], sb.one_round[2], delta.min(0.5), branch);

    let shrunk = sb.outer.map(|v| (v - delta).max(0.0));
    let region_pass = if delta.is_finite() {
        let inner =
            polytope_from_bounds(&BoundSet::new(shrunk[0], shrunk[1], shrunk[2], f64::INFINITY)?, R0Mode::ZeroCommon);
        let or = polytope_from_bounds(
            &BoundSet::new(sb.one_round[0], sb.one_round[1], sb.one_round[2], f64::INFINITY)?,
            R0Mode::ZeroCommon,
        );
        inner.vertices().iter().all(|v| or.contains(v, GAP_TOL))
    } else {
        true
    };
    Ok(SymmetricGapReport { r1, r2, sum, region_pass, delta })
}

/// How the conferencing capacity scales with power in a multiplexing sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacitySchedule {
    /// `C = ½ (1 + ε) log2 P` (zero for `P <= 1`).
    Scaled { epsilon: f64 },
    /// Constant `C`.
    Fixed { c: f64 },
}

impl CapacitySchedule {
    pub fn capacity(&self, p: f64) -> f64 {
        match *self {
            CapacitySchedule::Scaled { epsilon } => (0.5 * (1.0 + epsilon) * p.log2()).max(0.0),
            CapacitySchedule::Fixed { c } => c,
        }
    }
}

/// Symmetric gains for a multiplexing sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricTemplate {
    /// Direct gain `γ11² = γ22²`.
    pub a: f64,
    /// Cross gain `γ12² = γ21²`.
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuxRow {
    pub p: f64,
    pub c: f64,
    pub sum_rate: f64,
    /// `sum_rate / (½ log2 P)`; undefined for `P <= 1`.
    pub gain: Option<f64>,
}

/// One-round sum rate and normalized gain with `C = ½ (1 + ε) log2 P`.
pub fn multiplexing_sweep(template: &SymmetricTemplate, epsilon: f64, p_grid: &[f64]) -> Result<Vec<MuxRow>> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Usage(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    multiplexing_sweep_with(template, CapacitySchedule::Scaled { epsilon }, p_grid)
}

pub fn multiplexing_sweep_with(
    template: &SymmetricTemplate,
    schedule: CapacitySchedule,
    p_grid: &[f64],
) -> Result<Vec<MuxRow>> {
    p_grid
        .iter()
        .map(|&p| {
            let c = schedule.capacity(p);
            let ch = GaussianCmChannel {
                g11: template.a,
                g12: template.b,
                g21: template.b,
                g22: template.a,
                p1: p,
                p2: p,
                c12: c,
                c21: c,
            };
            let bs = one_round_at(&ch, &ch.full_private(), &sigma_min(&ch)?)?;
            let sum_rate = bs.b12.min(bs.b1 + bs.b2);
            let gain = (p > 1.0).then(|| sum_rate / (0.5 * p.log2()));
            Ok(MuxRow { p, c, sum_rate, gain })
        })
        .collect()
}

fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

/// Summary of a randomized audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub samples: usize,
    pub failures: usize,
    pub worst_gap: f64,
    pub worst_margin: f64,
}

impl AuditSummary {
    fn from_reports<'a>(reports: impl Iterator<Item = &'a GapReport>) -> Self {
        let mut s =
            AuditSummary { samples: 0, failures: 0, worst_gap: f64::NEG_INFINITY, worst_margin: f64::NEG_INFINITY };
        for r in reports {
            s.samples += 1;
            s.failures += usize::from(!r.pass);
            s.worst_gap = s.worst_gap.max(r.gap);
            s.worst_margin = s.worst_margin.max(r.gap - r.cap);
        }
        s
    }

    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

/// Random broadcast instances: `Pa, Pb` log-uniform on `[1e-2, 1e4]`, link capacities uniform on `[0, 8]`.
/// With `equal_snr`, `Pb = Pa`.
pub fn broadcast_audit(samples: usize, seed: u64, equal_snr: bool) -> Result<Vec<GapReport>> {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let pa = log_uniform(&mut rng, 1e-2, 1e4);
            let pb = if equal_snr { pa } else { log_uniform(&mut rng, 1e-2, 1e4) };
            let inst = BroadcastInstance { pa, pb, c12: rng.gen_range(0.0..=8.0), c21: rng.gen_range(0.0..=8.0) };
            broadcast_gap(&inst)
        })
        .collect()
}

/// Random symmetric instances: `a, b` log-uniform on `[1e-2, 1e2]`, `P` log-uniform on
/// `[1e-2, 1e4]`, `C` uniform on `[0, 8]`. With `equal_gains`, `b = a`.
pub fn symmetric_audit(samples: usize, seed: u64, equal_gains: bool) -> Result<Vec<SymmetricGapReport>> {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let a = log_uniform(&mut rng, 1e-2, 1e2);
            let b = if equal_gains { a } else { log_uniform(&mut rng, 1e-2, 1e2) };
            let p = log_uniform(&mut rng, 1e-2, 1e4);
            symmetric_gap(a, b, p, rng.gen_range(0.0..=8.0))
        })
        .collect()
}

pub fn summarize(reports: &[GapReport]) -> AuditSummary {
    AuditSummary::from_reports(reports.iter())
}

/// Summaries for the `R1`, `R2` and sum bounds of a symmetric audit.
pub fn summarize_symmetric(reports: &[SymmetricGapReport]) -> [AuditSummary; 3] {
    [
        AuditSummary::from_reports(reports.iter().map(|r| &r.r1)),
        AuditSummary::from_reports(reports.iter().map(|r| &r.r2)),
        AuditSummary::from_reports(reports.iter().map(|r| &r.sum)),
    ]
}
