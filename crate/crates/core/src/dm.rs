//! Discrete memoryless compound MAC with conferencing decoders.
//!
//! Joint distributions are laid out on the axes `(U, X1, X2, Y1, Y2)`, with
//! `(Ŷ1, Ŷ2)` appended when compression test channels are present.
//! Regions are unions over uniform simplex grids of input distributions (and
//! test channels), so they approximate the true regions from inside.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundSet, TwoRoundBounds};
use crate::error::{Error, Result};
use crate::gaussian::Scheme;
use crate::geometry::{bound_maxima, GridSpec, R0Mode, RateRegion, RegionMeta};
use crate::info::{EntropyCache, JointPmf, PMF_TOL};

pub const AXIS_U: usize = 0;
pub const AXIS_X1: usize = 1;
pub const AXIS_X2: usize = 2;
pub const AXIS_Y1: usize = 3;
pub const AXIS_Y2: usize = 4;
pub const AXIS_YHAT1: usize = 5;
pub const AXIS_YHAT2: usize = 6;

/// Slack allowed on the compression-rate constraints.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Tolerance for the physical-degradedness check.
pub const DEGRADED_TOL: f64 = 1e-9;

/// Default cap on every alphabet size.
pub const DEFAULT_MAX_ALPHABET: usize = 4;

/// A conditional pmf `p(b | a)` stored as one row per `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conditional {
    inputs: usize,
    outputs: usize,
    probs: Vec<f64>,
}

impl Conditional {
    pub fn new(inputs: usize, outputs: usize, probs: Vec<f64>) -> Result<Self> {
        if inputs == 0 || outputs == 0 || probs.len() != inputs * outputs {
            return Err(Error::Validation(format!(
                "conditional pmf of shape {inputs}x{outputs} needs {} entries, got {}",
                inputs * outputs,
                probs.len()
            )));
        }
        for (a, row) in probs.chunks(outputs).enumerate() {
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(Error::Validation(format!("row {a} has a negative or non-finite entry")));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > PMF_TOL {
                return Err(Error::Validation(format!("row {a} sums to {total}, expected 1")));
            }
        }
        Ok(Self { inputs, outputs, probs })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let outputs = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != outputs) {
            return Err(Error::Validation("conditional pmf rows have different lengths".into()));
        }
        Self::new(rows.len(), outputs, rows.concat())
    }

    /// Deterministic map `a -> f(a)`.
    pub fn deterministic(inputs: usize, outputs: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        let mut probs = vec![0.0; inputs * outputs];
        for a in 0..inputs {
            let b = f(a);
            if b >= outputs {
                return Err(Error::Validation(format!("deterministic map sends {a} to {b}, outside 0..{outputs}")));
            }
            probs[a * outputs + b] = 1.0;
        }
        Self::new(inputs, outputs, probs)
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.probs[a * self.outputs + b]
    }

    pub fn row(&self, a: usize) -> &[f64] {
        &self.probs[a * self.outputs..(a + 1) * self.outputs]
    }
}

/// Channel law `p*(y1, y2 | x1, x2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmChannel {
    /// `[|X1|, |X2|, |Y1|, |Y2|]`.
    sizes: [usize; 4],
    /// Row-major over `(x1, x2, y1, y2)`.
    transition: Vec<f64>,
}

impl DmChannel {
    pub fn new(sizes: [usize; 4], transition: Vec<f64>) -> Result<Self> {
        let [x1, x2, y1, y2] = sizes;
        Conditional::new(x1 * x2, y1 * y2, transition.clone())?;
        Ok(Self { sizes, transition })
    }

    pub fn from_fn(sizes: [usize; 4], f: impl Fn(usize, usize, usize, usize) -> f64) -> Result<Self> {
        let [x1, x2, y1, y2] = sizes;
        let mut t = Vec::with_capacity(x1 * x2 * y1 * y2);
        for a in 0..x1 {
            for b in 0..x2 {
                for c in 0..y1 {
                    for d in 0..y2 {
                        t.push(f(a, b, c, d));
                    }
                }
            }
        }
        Self::new(sizes, t)
    }

    /// `p(y1 | x1, x2) p(y2 | y1)`, where the first factor has one row per `(x1, x2)`.
    pub fn degraded_cascade(x_sizes: [usize; 2], first: &Conditional, second: &Conditional) -> Result<Self> {
        if first.inputs() != x_sizes[0] * x_sizes[1] || second.inputs() != first.outputs() {
            return Err(Error::Usage("cascade factors have incompatible shapes".into()));
        }
        let (y1, y2) = (first.outputs(), second.outputs());
        Self::from_fn([x_sizes[0], x_sizes[1], y1, y2], |a, b, c, d| {
            first.get(a * x_sizes[1] + b, c) * second.get(c, d)
        })
    }

    pub fn sizes(&self) -> [usize; 4] {
        self.sizes
    }

    pub fn get(&self, x1: usize, x2: usize, y1: usize, y2: usize) -> f64 {
        let [_, s2, s3, s4] = self.sizes;
        self.transition[((x1 * s2 + x2) * s3 + y1) * s4 + y2]
    }

    pub fn check_alphabet_cap(&self, cap: usize) -> Result<()> {
        if let Some(n) = self.sizes.iter().find(|&&n| n > cap) {
            return Err(Error::Usage(format!("alphabet size {n} exceeds the cap of {cap}")));
        }
        Ok(())
    }

    /// `true` when `p(y2 | y1, x1, x2)` does not depend on `(x1, x2)`.
    pub fn is_physically_degraded(&self, tol: f64) -> bool {
        let [x1, x2, y1, y2] = self.sizes;
        for c in 0..y1 {
            let mut reference: Option<Vec<f64>> = None;
            for a in 0..x1 {
                for b in 0..x2 {
                    let py1: f64 = (0..y2).map(|d| self.get(a, b, c, d)).sum();
                    if py1 <= 1e-12 {
                        continue;
                    }
                    let cond: Vec<f64> = (0..y2).map(|d| self.get(a, b, c, d) / py1).collect();
                    match &reference {
                        None => reference = Some(cond),
                        Some(r) => {
                            if r.iter().zip(&cond).any(|(p, q)| (p - q).abs() > tol) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// `p(u) p(x1 | u) p(x2 | u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmInputDistribution {
    pub pu: Vec<f64>,
    pub px1_given_u: Conditional,
    pub px2_given_u: Conditional,
}

impl DmInputDistribution {
    pub fn new(pu: Vec<f64>, px1_given_u: Conditional, px2_given_u: Conditional) -> Result<Self> {
        Conditional::new(1, pu.len(), pu.clone())?;
        if px1_given_u.inputs() != pu.len() || px2_given_u.inputs() != pu.len() {
            return Err(Error::Usage("input conditionals must have one row per value of U".into()));
        }
        Ok(Self { pu, px1_given_u, px2_given_u })
    }

    /// Independent inputs with a constant `U`.
    pub fn independent(px1: Vec<f64>, px2: Vec<f64>) -> Result<Self> {
        let (n1, n2) = (px1.len(), px2.len());
        Self::new(vec![1.0], Conditional::new(1, n1, px1)?, Conditional::new(1, n2, px2)?)
    }

    pub fn u_size(&self) -> usize {
        self.pu.len()
    }
}

/// Compression test channels `p(ŷ1 | y1)` and `p(ŷ2 | y2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmTestChannels {
    pub q1: Conditional,
    pub q2: Conditional,
}

impl DmTestChannels {
    pub fn new(q1: Conditional, q2: Conditional) -> Result<Self> {
        for (name, q) in [("q1", &q1), ("q2", &q2)] {
            if q.outputs() > q.inputs() + 1 {
                return Err(Error::Validation(format!(
                    "{name} has {} compressed symbols; at most {} are needed",
                    q.outputs(),
                    q.inputs() + 1
                )));
            }
        }
        Ok(Self { q1, q2 })
    }

    /// Constant compressions (nothing is forwarded).
    pub fn silent(ch: &DmChannel) -> Self {
        let [_, _, y1, y2] = ch.sizes();
        Self {
            q1: Conditional::deterministic(y1, 1, |_| 0).expect("valid map"),
            q2: Conditional::deterministic(y2, 1, |_| 0).expect("valid map"),
        }
    }

    /// Lossless compressions `Ŷi = Yi`.
    pub fn lossless(ch: &DmChannel) -> Self {
        let [_, _, y1, y2] = ch.sizes();
        Self {
            q1: Conditional::deterministic(y1, y1, |y| y).expect("valid map"),
            q2: Conditional::deterministic(y2, y2, |y| y).expect("valid map"),
        }
    }
}

/// Dense joint over `(U, X1, X2, Y1, Y2)`, or `(U, X1, X2, Y1, Y2, Ŷ1, Ŷ2)` with test channels.
pub fn joint_distribution(
    ch: &DmChannel,
    input: &DmInputDistribution,
    test: Option<&DmTestChannels>,
) -> Result<JointPmf> {
    let [x1, x2, y1, y2] = ch.sizes();
    let us = input.u_size();
    if input.px1_given_u.outputs() != x1 || input.px2_given_u.outputs() != x2 {
        return Err(Error::Usage(format!(
            "input alphabets ({}, {}) do not match channel inputs ({x1}, {x2})",
            input.px1_given_u.outputs(),
            input.px2_given_u.outputs()
        )));
    }
    let (h1, h2) = match test {
        Some(t) => {
            if t.q1.inputs() != y1 || t.q2.inputs() != y2 {
                return Err(Error::Usage("test channel inputs do not match channel outputs".into()));
            }
            (t.q1.outputs(), t.q2.outputs())
        }
        None => (1, 1),
    };
    let mut probs = Vec::with_capacity(us * x1 * x2 * y1 * y2 * h1 * h2);
    for u in 0..us {
        for a in 0..x1 {
            for b in 0..x2 {
                let px = input.pu[u] * input.px1_given_u.get(u, a) * input.px2_given_u.get(u, b);
                for c in 0..y1 {
                    for d in 0..y2 {
                        let p = px * ch.get(a, b, c, d);
                        match test {
                            None => probs.push(p),
                            Some(t) => {
                                for e in 0..h1 {
                                    for f in 0..h2 {
                                        probs.push(p * t.q1.get(c, e) * t.q2.get(d, f));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut shape = vec![us, x1, x2, y1, y2];
    if test.is_some() {
        shape.extend([h1, h2]);
    }
    JointPmf::new(shape, probs)
}

/// Which observations a decoder uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Receiver {
    One,
    Two,
    FullCooperation,
}

/// The four MAC bounds of a decoder that observes the joint's `obs` axes.
fn observation_bounds(h: &mut EntropyCache<'_>, obs: &[usize]) -> BoundSet {
    BoundSet {
        b1: h.mutual_information(&[AXIS_X1], obs, &[AXIS_X2, AXIS_U]),
        b2: h.mutual_information(&[AXIS_X2], obs, &[AXIS_X1, AXIS_U]),
        b12: h.mutual_information(&[AXIS_X1, AXIS_X2], obs, &[AXIS_U]),
        b012: h.mutual_information(&[AXIS_X1, AXIS_X2], obs, &[]),
    }
}

pub fn mac_region_at(ch: &DmChannel, input: &DmInputDistribution, receiver: Receiver) -> Result<BoundSet> {
    let joint = joint_distribution(ch, input, None)?;
    let obs: &[usize] = match receiver {
        Receiver::One => &[AXIS_Y1],
        Receiver::Two => &[AXIS_Y2],
        Receiver::FullCooperation => &[AXIS_Y1, AXIS_Y2],
    };
    Ok(observation_bounds(&mut EntropyCache::new(&joint), obs))
}

/// Conferencing outer bound: receiver 1 boosted by `c21`, receiver 2 by `c12`, capped by full cooperation.
pub fn cm_outer_at(ch: &DmChannel, input: &DmInputDistribution, c12: f64, c21: f64) -> Result<BoundSet> {
    check_capacities(c12, c21)?;
    let joint = joint_distribution(ch, input, None)?;
    let mut h = EntropyCache::new(&joint);
    let rx1 = observation_bounds(&mut h, &[AXIS_Y1]);
    let rx2 = observation_bounds(&mut h, &[AXIS_Y2]);
    let fc = observation_bounds(&mut h, &[AXIS_Y1, AXIS_Y2]);
    Ok(rx1.shifted(c21).min(&rx2.shifted(c12)).min(&fc))
}

/// No conferencing: both decoders alone.
pub fn no_coop_dm_at(ch: &DmChannel, input: &DmInputDistribution) -> Result<BoundSet> {
    let joint = joint_distribution(ch, input, None)?;
    let mut h = EntropyCache::new(&joint);
    Ok(observation_bounds(&mut h, &[AXIS_Y1]).min(&observation_bounds(&mut h, &[AXIS_Y2])))
}

fn check_capacities(c12: f64, c21: f64) -> Result<()> {
    if c12.is_nan() || c21.is_nan() || c12 < 0.0 || c21 < 0.0 {
        return Err(Error::Validation(format!("conferencing capacities must be >= 0, got ({c12}, {c21})")));
    }
    Ok(())
}

/// Compression rates `I(Y1; Ŷ1 | Y2)` and `I(Y2; Ŷ2 | Y1)` of a test channel pair.
pub fn compression_rates(ch: &DmChannel, input: &DmInputDistribution, test: &DmTestChannels) -> Result<(f64, f64)> {
    let joint = joint_distribution(ch, input, Some(test))?;
    Ok(compression_rates_of(&mut EntropyCache::new(&joint)))
}

fn compression_rates_of(h: &mut EntropyCache<'_>) -> (f64, f64) {
    (
        h.mutual_information(&[AXIS_Y1], &[AXIS_YHAT1], &[AXIS_Y2]),
        h.mutual_information(&[AXIS_Y2], &[AXIS_YHAT2], &[AXIS_Y1]),
    )
}

/// Runs `f` on the joint with test channels when the links can carry both descriptions.
fn when_feasible<T>(
    ch: &DmChannel,
    input: &DmInputDistribution,
    test: &DmTestChannels,
    (c12, c21): (f64, f64),
    f: impl FnOnce(&mut EntropyCache<'_>) -> T,
) -> Result<Option<T>> {
    check_capacities(c12, c21)?;
    let joint = joint_distribution(ch, input, Some(test))?;
    let mut h = EntropyCache::new(&joint);
    let (r1, r2) = compression_rates_of(&mut h);
    Ok((r1 <= c12 + FEASIBILITY_TOL && r2 <= c21 + FEASIBILITY_TOL).then(|| f(&mut h)))
}

/// One simultaneous compression round; `None` if the links cannot carry the test channels.
pub fn one_round_dm_at(
    ch: &DmChannel,
    input: &DmInputDistribution,
    test: &DmTestChannels,
    c12: f64,
    c21: f64,
) -> Result<Option<BoundSet>> {
    when_feasible(ch, input, test, (c12, c21), |h| {
        observation_bounds(h, &[AXIS_Y1, AXIS_YHAT2]).min(&observation_bounds(h, &[AXIS_Y2, AXIS_YHAT1]))
    })
}

/// Both two-round orderings; `None` if the links cannot carry the test channels.
pub fn two_round_dm_at(
    ch: &DmChannel,
    input: &DmInputDistribution,
    test: &DmTestChannels,
    c12: f64,
    c21: f64,
) -> Result<Option<TwoRoundBounds>> {
    when_feasible(ch, input, test, (c12, c21), |h| {
        let lone1 = observation_bounds(h, &[AXIS_Y1]);
        let lone2 = observation_bounds(h, &[AXIS_Y2]);
        let helped1 = observation_bounds(h, &[AXIS_Y1, AXIS_YHAT2]);
        let helped2 = observation_bounds(h, &[AXIS_Y2, AXIS_YHAT1]);
        TwoRoundBounds {
            decoder2_first: lone1.shifted(c21).min(&helped2),
            decoder1_first: helped1.min(&lone2.shifted(c12)),
        }
    })
}

/// Uniform grid on the probability simplex over `n` outcomes with `points`
/// levels per free coordinate. A single level yields the uniform pmf.
pub fn simplex_grid(n: usize, points: usize) -> Vec<Vec<f64>> {
    if n == 0 {
        return Vec::new();
    }
    if points <= 1 {
        return vec![vec![1.0 / n as f64; n]];
    }
    let m = points - 1;
    let mut out = Vec::new();
    let mut parts = vec![0usize; n];
    compositions(m, 0, &mut parts, &mut out, m);
    out
}

fn compositions(left: usize, idx: usize, parts: &mut Vec<usize>, out: &mut Vec<Vec<f64>>, m: usize) {
    if idx == parts.len() - 1 {
        parts[idx] = left;
        out.push(parts.iter().map(|&k| k as f64 / m as f64).collect());
        return;
    }
    for k in (0..=left).rev() {
        parts[idx] = k;
        compositions(left - k, idx + 1, parts, out, m);
    }
}

/// Every conditional pmf whose rows are drawn from `simplex_grid(outputs, points)`.
pub fn conditional_grid(inputs: usize, outputs: usize, points: usize) -> Vec<Conditional> {
    let rows = simplex_grid(outputs, points);
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..inputs {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                rows.iter().map(move |r| {
                    let mut p = prefix.clone();
                    p.extend_from_slice(r);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(|p| Conditional::new(inputs, outputs, p).expect("grid rows are pmfs")).collect()
}

/// Options for discrete-memoryless region evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DmOptions {
    /// Alphabet size of the time-sharing variable `U`.
    pub u_size: usize,
    /// Compressed alphabet sizes; `None` uses `|Yi|`.
    pub yhat1: Option<usize>,
    pub yhat2: Option<usize>,
    pub max_alphabet: usize,
}

impl Default for DmOptions {
    fn default() -> Self {
        Self { u_size: 2, yhat1: None, yhat2: None, max_alphabet: DEFAULT_MAX_ALPHABET }
    }
}

/// Grid of input distributions for the given alphabets.
pub fn input_grid(x1: usize, x2: usize, u_size: usize, points: usize) -> Vec<DmInputDistribution> {
    let pus = if u_size == 1 { vec![vec![1.0]] } else { simplex_grid(u_size, points) };
    let c1 = conditional_grid(u_size, x1, points);
    let c2 = conditional_grid(u_size, x2, points);
    let mut out = Vec::with_capacity(pus.len() * c1.len() * c2.len());
    for pu in &pus {
        for a in &c1 {
            for b in &c2 {
                out.push(DmInputDistribution { pu: pu.clone(), px1_given_u: a.clone(), px2_given_u: b.clone() });
            }
        }
    }
    out
}

/// Grid of test-channel pairs for the given alphabets.
pub fn test_channel_grid(y1: usize, yh1: usize, y2: usize, yh2: usize, points: usize) -> Vec<DmTestChannels> {
    let g1 = conditional_grid(y1, yh1, points);
    let g2 = conditional_grid(y2, yh2, points);
    g1.iter().flat_map(|a| g2.iter().map(move |b| DmTestChannels { q1: a.clone(), q2: b.clone() })).collect()
}

fn check_options(ch: &DmChannel, opts: &DmOptions) -> Result<[usize; 2]> {
    ch.check_alphabet_cap(opts.max_alphabet)?;
    let [_, _, y1, y2] = ch.sizes();
    let yh = [opts.yhat1.unwrap_or(y1), opts.yhat2.unwrap_or(y2)];
    if opts.u_size == 0 || opts.u_size > opts.max_alphabet {
        return Err(Error::Usage(format!("|U| = {} must lie in 1..={}", opts.u_size, opts.max_alphabet)));
    }
    for (i, (&h, y)) in yh.iter().zip([y1, y2]).enumerate() {
        if h == 0 || h > y + 1 || h > opts.max_alphabet {
            return Err(Error::Usage(format!(
                "|Ŷ{}| = {h} must lie in 1..={} (alphabet cap {})",
                i + 1,
                y + 1,
                opts.max_alphabet
            )));
        }
    }
    Ok(yh)
}

/// Largest number of (input distribution, test channel pair) evaluations one region may request.
pub const MAX_GRID_EVALUATIONS: u128 = 10_000_000;

/// `simplex_grid(n, points).len()`.
fn simplex_count(n: usize, points: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    if points <= 1 {
        return 1;
    }
    // C(points - 1 + n - 1, n - 1)
    let (top, k) = ((points - 1 + n - 1) as u128, (n - 1) as u128);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(top - i) / (i + 1))
}

fn conditional_count(inputs: usize, outputs: usize, points: usize) -> u128 {
    (0..inputs).fold(1u128, |acc, _| acc.saturating_mul(simplex_count(outputs, points)))
}

fn check_grid_size(ch: &DmChannel, opts: &DmOptions, yh: [usize; 2], grid: &GridSpec, with_tests: bool) -> Result<()> {
    let [x1, x2, y1, y2] = ch.sizes();
    let u = opts.u_size;
    let pu = if u == 1 { 1 } else { simplex_count(u, grid.simplex_points) };
    let inputs = pu.saturating_mul(conditional_count(u, x1, grid.simplex_points)).saturating_mul(conditional_count(
        u,
        x2,
        grid.simplex_points,
    ));
    let tests = if with_tests {
        conditional_count(y1, yh[0], grid.test_channel_points).saturating_mul(conditional_count(
            y2,
            yh[1],
            grid.test_channel_points,
        ))
    } else {
        1
    };
    let total = inputs.saturating_mul(tests);
    if total > MAX_GRID_EVALUATIONS {
        return Err(Error::Usage(format!(
            "grid needs {inputs} input distributions x {tests} test channel pairs = {total} evaluations, \
             above the limit of {MAX_GRID_EVALUATIONS}; lower simplex_points, test_channel_points or the compressed alphabets"
        )));
    }
    Ok(())
}

/// Points of one grid cell, thinned to their hull vertices when there are many.
fn cell_points(sets: &[BoundSet], grid: &GridSpec, r0_mode: R0Mode) -> Result<Vec<Vec<f64>>> {
    const THIN_ABOVE: usize = 32;
    let pts: Vec<Vec<f64>> = sets.iter().flat_map(|bs| bound_maxima(bs, r0_mode, grid.clip)).collect();
    if pts.len() <= THIN_ABOVE {
        return Ok(pts);
    }
    Ok(RateRegion::from_points(r0_mode.dim(), &pts, RegionMeta::default())?.vertices().to_vec())
}

/// Hull of a scheme's polytopes over the input (and test-channel) grid.
pub fn dm_region(
    ch: &DmChannel,
    scheme: Scheme,
    c12: f64,
    c21: f64,
    grid: &GridSpec,
    r0_mode: R0Mode,
    opts: &DmOptions,
) -> Result<RateRegion> {
    grid.validate()?;
    check_capacities(c12, c21)?;
    let yh = check_options(ch, opts)?;
    let with_tests = matches!(scheme, Scheme::OneRound | Scheme::TwoRound);
    check_grid_size(ch, opts, yh, grid, with_tests)?;
    let [x1, x2, y1, y2] = ch.sizes();
    let inputs = input_grid(x1, x2, opts.u_size, grid.simplex_points);
    let tests = if with_tests { test_channel_grid(y1, yh[0], y2, yh[1], grid.test_channel_points) } else { Vec::new() };
    let per_input: Vec<Vec<Vec<f64>>> = inputs
        .par_iter()
        .map(|inp| {
            let sets: Vec<BoundSet> = match scheme {
                Scheme::Outer => vec![cm_outer_at(ch, inp, c12, c21)?],
                Scheme::NoCoop => vec![no_coop_dm_at(ch, inp)?],
                Scheme::OneRound => tests
                    .iter()
                    .filter_map(|t| one_round_dm_at(ch, inp, t, c12, c21).transpose())
                    .collect::<Result<_>>()?,
                Scheme::TwoRound => tests
                    .iter()
                    .filter_map(|t| two_round_dm_at(ch, inp, t, c12, c21).transpose())
                    .collect::<Result<Vec<_>>>()?
                    .iter()
                    .flat_map(TwoRoundBounds::both)
                    .collect(),
            };
            cell_points(&sets, grid, r0_mode)
        })
        .collect::<Result<_>>()?;
    let points: Vec<Vec<f64>> = per_input.into_iter().flatten().collect();
    RateRegion::from_points(r0_mode.dim(), &points, RegionMeta { clip: grid.clip, approx_error: 0.0 })
}

/// How many (input, test channel) grid pairs the conferencing links can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressionFeasibility {
    pub pairs: usize,
    pub feasible: usize,
}

pub fn compression_feasibility(
    ch: &DmChannel,
    c12: f64,
    c21: f64,
    grid: &GridSpec,
    opts: &DmOptions,
) -> Result<CompressionFeasibility> {
    grid.validate()?;
    check_capacities(c12, c21)?;
    let yh = check_options(ch, opts)?;
    check_grid_size(ch, opts, yh, grid, true)?;
    let [x1, x2, y1, y2] = ch.sizes();
    let inputs = input_grid(x1, x2, opts.u_size, grid.simplex_points);
    let tests = test_channel_grid(y1, yh[0], y2, yh[1], grid.test_channel_points);
    let feasible = inputs
        .par_iter()
        .map(|inp| {
            tests
                .iter()
                .try_fold(0usize, |n, t| Ok(n + usize::from(when_feasible(ch, inp, t, (c12, c21), |_| ())?.is_some())))
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum();
    Ok(CompressionFeasibility { pairs: inputs.len() * tests.len(), feasible })
}

/// Capacity region of a physically degraded channel: the outer bound with the
/// link from the weaker decoder removed.
pub fn degraded_capacity(
    ch: &DmChannel,
    c12: f64,
    grid: &GridSpec,
    r0_mode: R0Mode,
    opts: &DmOptions,
) -> Result<RateRegion> {
    if !ch.is_physically_degraded(DEGRADED_TOL) {
        return Err(Error::Precondition("channel does not factor as p(y1|x1,x2) p(y2|y1)".into()));
    }
    dm_region(ch, Scheme::Outer, c12, 0.0, grid, r0_mode, opts)
}

/// Capacity region with conferencing in one direction only.
pub fn unidirectional_capacity(
    ch: &DmChannel,
    c12: f64,
    c21: f64,
    grid: &GridSpec,
    r0_mode: R0Mode,
    opts: &DmOptions,
) -> Result<RateRegion> {
    if c12 != 0.0 && c21 != 0.0 {
        return Err(Error::Usage(format!("unidirectional conferencing needs c12 = 0 or c21 = 0, got ({c12}, {c21})")));
    }
    dm_region(ch, Scheme::Outer, c12, c21, grid, r0_mode, opts)
}
