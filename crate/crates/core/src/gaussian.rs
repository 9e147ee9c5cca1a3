//! Gaussian compound MAC with conferencing decoders.
//!
//! Receiver `i` observes `Y_i = γ_1i X_1 + γ_2i X_2 + Z_i` with unit-power
//! noise. Each transmitter splits its power between a private part `P_i'` and
//! a part coherent with the common message, which yields the terms `ρ_1`,
//! `ρ_2` and `𝒦` below.
//!
//! Every scheme bound reduces to the same receiver kernel: the capacity of
//! receiver `i` when it also sees the other receiver's output through extra
//! Gaussian noise of variance `σ²`. The kernel is parameterised by the side
//! weight `s = 1/(1+σ²)`, so `s = 0` is the lone receiver and `s = 1` is full
//! cooperation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundSet, TwoRoundBounds};
use crate::error::{Error, Result};
use crate::geometry::{bound_maxima, GridSpec, R0Mode, RateRegion, RegionMeta};
use crate::info::cap;

/// Channel gains (squared), powers and decoder conferencing capacities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianCmChannel {
    /// `γ11²`: transmitter 1 to receiver 1.
    pub g11: f64,
    /// `γ12²`: transmitter 1 to receiver 2.
    pub g12: f64,
    /// `γ21²`: transmitter 2 to receiver 1.
    pub g21: f64,
    /// `γ22²`: transmitter 2 to receiver 2.
    pub g22: f64,
    pub p1: f64,
    pub p2: f64,
    /// Capacity of the link from decoder 1 to decoder 2.
    pub c12: f64,
    /// Capacity of the link from decoder 2 to decoder 1.
    pub c21: f64,
}

impl GaussianCmChannel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("g11", self.g11),
            ("g12", self.g12),
            ("g21", self.g21),
            ("g22", self.g22),
            ("p1", self.p1),
            ("p2", self.p2),
            ("c12", self.c12),
            ("c21", self.c21),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Validation(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Copy with different decoder conferencing capacities.
    pub fn with_conferencing(&self, c12: f64, c21: f64) -> Self {
        Self { c12, c21, ..*self }
    }

    /// The split that puts all power into the private signals.
    pub fn full_private(&self) -> PowerSplit {
        PowerSplit { p1p: self.p1, p2p: self.p2 }
    }

    /// `γ12 γ21 - γ11 γ22`.
    fn cross_det(&self) -> f64 {
        (self.g12 * self.g21).sqrt() - (self.g11 * self.g22).sqrt()
    }
}

/// Private-power allocation `(P1', P2')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub p1p: f64,
    pub p2p: f64,
}

/// Coherent-combining powers at the two receivers and the determinant term `𝒦`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceTerms {
    pub rho1: f64,
    pub rho2: f64,
    pub kterm: f64,
}

/// Compression-noise variances of the two decoders' quantized outputs.
/// `+inf` means nothing is forwarded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationNoise {
    pub sigma1sq: f64,
    pub sigma2sq: f64,
}

impl QuantizationNoise {
    pub const NONE: QuantizationNoise = QuantizationNoise { sigma1sq: f64::INFINITY, sigma2sq: f64::INFINITY };

    fn weights(&self) -> (f64, f64) {
        (side_weight(self.sigma1sq), side_weight(self.sigma2sq))
    }
}

/// `1/(1+σ²)`, with `σ² = +inf` mapped to 0.
fn side_weight(sigma_sq: f64) -> f64 {
    if sigma_sq.is_infinite() {
        0.0
    } else {
        1.0 / (1.0 + sigma_sq)
    }
}

/// `2^{2C} - 1`.
pub(crate) fn breve(c: f64) -> f64 {
    (2.0 * c * std::f64::consts::LN_2).exp_m1()
}

pub fn coherence_terms(ch: &GaussianCmChannel, split: &PowerSplit) -> Result<CoherenceTerms> {
    if !(0.0..=ch.p1).contains(&split.p1p) || !(0.0..=ch.p2).contains(&split.p2p) {
        return Err(Error::Domain(format!(
            "power split ({}, {}) outside [0, {}] x [0, {}]",
            split.p1p, split.p2p, ch.p1, ch.p2
        )));
    }
    let a1 = (ch.p1 - split.p1p).sqrt();
    let a2 = (ch.p2 - split.p2p).sqrt();
    let rho1 = (ch.g11.sqrt() * a1 + ch.g21.sqrt() * a2).powi(2);
    let rho2 = (ch.g22.sqrt() * a2 + ch.g12.sqrt() * a1).powi(2);
    let kterm = split.p1p * split.p2p * ch.cross_det().powi(2);
    Ok(CoherenceTerms { rho1, rho2, kterm })
}

/// Smallest compression noises that the conferencing links can carry when
/// all power is private (independent inputs).
pub fn sigma_min(ch: &GaussianCmChannel) -> Result<QuantizationNoise> {
    sigma_min_at(ch, &ch.full_private())
}

/// Smallest compression noises at a given power split.
///
/// The Wyner-Ziv cost `I(Y2; Ŷ2 | Y1) = ½ log2(1 + Var(Y2|Y1)/σ2²)` must fit in
/// `C21` (and symmetrically for `σ1²`). The conditional variance depends on how
/// much power is coherent, so the floor does too; at full private power this
/// is the familiar split-free expression.
pub fn sigma_min_at(ch: &GaussianCmChannel, split: &PowerSplit) -> Result<QuantizationNoise> {
    ch.validate()?;
    let ct = coherence_terms(ch, split)?;
    let (q1, q2) = (split.p1p, split.p2p);
    let (a1, a2) = (ct.rho1.sqrt(), ct.rho2.sqrt());
    // det Cov(Y1, Y2) by Cauchy-Binet over the three signal directions
    // (private 1, private 2, common), which avoids cancellation.
    let n = 1.0
        + (ch.g11 + ch.g12) * q1
        + (ch.g21 + ch.g22) * q2
        + ct.rho1
        + ct.rho2
        + ct.kterm
        + q1 * (ch.g11.sqrt() * a2 - ch.g12.sqrt() * a1).powi(2)
        + q2 * (ch.g21.sqrt() * a2 - ch.g22.sqrt() * a1).powi(2);
    let var1 = 1.0 + ch.g11 * q1 + ch.g21 * q2 + ct.rho1;
    let var2 = 1.0 + ch.g12 * q1 + ch.g22 * q2 + ct.rho2;
    let floor = |c: f64, side_var: f64| {
        if c == 0.0 {
            f64::INFINITY
        } else {
            n / (breve(c) * side_var)
        }
    };
    Ok(QuantizationNoise { sigma1sq: floor(ch.c12, var2), sigma2sq: floor(ch.c21, var1) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rx {
    One,
    Two,
}

/// Bounds at one receiver that also sees the other output with side weight `s`.
fn receiver_bounds(ch: &GaussianCmChannel, split: &PowerSplit, ct: &CoherenceTerms, rx: Rx, s: f64) -> BoundSet {
    let (q1, q2) = (split.p1p, split.p2p);
    let ((own1, own2), (side1, side2), rho_own, rho_side) = match rx {
        Rx::One => ((ch.g11, ch.g21), (ch.g12, ch.g22), ct.rho1, ct.rho2),
        Rx::Two => ((ch.g12, ch.g22), (ch.g11, ch.g21), ct.rho2, ct.rho1),
    };
    let x1 = q1 * (own1 + s * side1);
    let x2 = q2 * (own2 + s * side2);
    let sum = x1 + x2 + s * ct.kterm;
    let cross = 2.0 * s * (ct.rho1 * ct.rho2).sqrt() * (q1 * (ch.g11 * ch.g12).sqrt() + q2 * (ch.g21 * ch.g22).sqrt());
    let total = (sum + rho_own * (1.0 + s * (q1 * side1 + q2 * side2)) + s * rho_side * (1.0 + q1 * own1 + q2 * own2)
        - cross)
        .max(sum);
    BoundSet { b1: cap(x1), b2: cap(x2), b12: cap(sum), b012: cap(total) }
}

/// Outer bound at a fixed power split.
pub fn outer_bound_at(ch: &GaussianCmChannel, split: &PowerSplit) -> Result<BoundSet> {
    let ct = coherence_terms(ch, split)?;
    let rx1 = receiver_bounds(ch, split, &ct, Rx::One, 0.0).shifted(ch.c21);
    let rx2 = receiver_bounds(ch, split, &ct, Rx::Two, 0.0).shifted(ch.c12);
    let fc = receiver_bounds(ch, split, &ct, Rx::One, 1.0);
    Ok(rx1.min(&rx2).min(&fc))
}

/// Full-cooperation (two-antenna receiver) bounds at a fixed split.
pub fn full_cooperation_at(ch: &GaussianCmChannel, split: &PowerSplit) -> Result<BoundSet> {
    let ct = coherence_terms(ch, split)?;
    Ok(receiver_bounds(ch, split, &ct, Rx::One, 1.0))
}

fn check_noise(ch: &GaussianCmChannel, split: &PowerSplit, qn: &QuantizationNoise) -> Result<()> {
    let floor = sigma_min_at(ch, split)?;
    for (name, got, min) in [("sigma1sq", qn.sigma1sq, floor.sigma1sq), ("sigma2sq", qn.sigma2sq, floor.sigma2sq)] {
        if got.is_nan() || got < min * (1.0 - 1e-12) {
            return Err(Error::Domain(format!("{name} = {got} is below the rate-feasible floor {min}")));
        }
    }
    Ok(())
}

/// One simultaneous round of compress-and-forward.
pub fn one_round_at(ch: &GaussianCmChannel, split: &PowerSplit, qn: &QuantizationNoise) -> Result<BoundSet> {
    check_noise(ch, split, qn)?;
    let ct = coherence_terms(ch, split)?;
    let (s1, s2) = qn.weights();
    Ok(receiver_bounds(ch, split, &ct, Rx::One, s2).min(&receiver_bounds(ch, split, &ct, Rx::Two, s1)))
}

pub fn two_round_at(ch: &GaussianCmChannel, split: &PowerSplit, qn: &QuantizationNoise) -> Result<TwoRoundBounds> {
    check_noise(ch, split, qn)?;
    let ct = coherence_terms(ch, split)?;
    let (s1, s2) = qn.weights();
    let lone1 = receiver_bounds(ch, split, &ct, Rx::One, 0.0);
    let lone2 = receiver_bounds(ch, split, &ct, Rx::Two, 0.0);
    Ok(TwoRoundBounds {
        decoder2_first: lone1.shifted(ch.c21).min(&receiver_bounds(ch, split, &ct, Rx::Two, s1)),
        decoder1_first: receiver_bounds(ch, split, &ct, Rx::One, s2).min(&lone2.shifted(ch.c12)),
    })
}

/// No conferencing: both receivers decode alone.
pub fn no_coop_at(ch: &GaussianCmChannel, split: &PowerSplit) -> Result<BoundSet> {
    let ct = coherence_terms(ch, split)?;
    Ok(receiver_bounds(ch, split, &ct, Rx::One, 0.0).min(&receiver_bounds(ch, split, &ct, Rx::Two, 0.0)))
}

/// Region families evaluated over power splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Outer,
    OneRound,
    TwoRound,
    NoCoop,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Outer, Scheme::OneRound, Scheme::TwoRound, Scheme::NoCoop];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Outer => "outer",
            Scheme::OneRound => "one-round",
            Scheme::TwoRound => "two-round",
            Scheme::NoCoop => "no-coop",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL.into_iter().find(|sc| sc.name() == s).ok_or_else(|| {
            Error::Usage(format!("unknown scheme '{s}' (expected outer, one-round, two-round, no-coop)"))
        })
    }
}

/// Bound sets of `scheme` at one split (two entries for two-round).
pub fn scheme_bounds_at(
    ch: &GaussianCmChannel,
    scheme: Scheme,
    split: &PowerSplit,
    qn: &QuantizationNoise,
) -> Result<Vec<BoundSet>> {
    Ok(match scheme {
        Scheme::Outer => vec![outer_bound_at(ch, split)?],
        Scheme::OneRound => vec![one_round_at(ch, split, qn)?],
        Scheme::TwoRound => {
            let tr = two_round_at(ch, split, qn)?;
            vec![tr.decoder2_first, tr.decoder1_first]
        }
        Scheme::NoCoop => vec![no_coop_at(ch, split)?],
    })
}

/// Uniform grid of power splits. The zero-common mode evaluates only full
/// private power, which is exact for the outer and no-cooperation bounds and
/// an inner approximation for the compress-and-forward schemes.
pub fn power_splits(ch: &GaussianCmChannel, points: usize, r0_mode: R0Mode) -> Result<Vec<PowerSplit>> {
    if points == 0 {
        return Err(Error::Usage("power grid must have at least one point per axis".into()));
    }
    if r0_mode == R0Mode::ZeroCommon || points == 1 {
        return Ok(vec![ch.full_private()]);
    }
    let level = |p: f64, k: usize| p * (k as f64 / (points - 1) as f64);
    Ok((0..points)
        .flat_map(|i| (0..points).map(move |j| (i, j)))
        .map(|(i, j)| PowerSplit { p1p: level(ch.p1, i), p2p: level(ch.p2, j) })
        .collect())
}

/// Hull of the scheme's polytopes over the power-split grid.
pub fn gaussian_region(ch: &GaussianCmChannel, scheme: Scheme, grid: &GridSpec, r0_mode: R0Mode) -> Result<RateRegion> {
    ch.validate()?;
    grid.validate()?;
    let splits = power_splits(ch, grid.power_points, r0_mode)?;
    let per_split: Vec<Vec<Vec<f64>>> = splits
        .par_iter()
        .map(|split| {
            let sets = scheme_bounds_at(ch, scheme, split, &sigma_min_at(ch, split)?)?;
            Ok(sets.iter().flat_map(|bs| bound_maxima(bs, r0_mode, grid.clip)).collect())
        })
        .collect::<Result<_>>()?;
    let points: Vec<Vec<f64>> = per_split.into_iter().flatten().collect();
    RateRegion::from_points(r0_mode.dim(), &points, RegionMeta { clip: grid.clip, approx_error: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1(c: f64) -> GaussianCmChannel {
        let p = 10f64.powf(0.5);
        GaussianCmChannel { g11: 1.0, g12: 0.5, g21: 0.5, g22: 1.0, p1: p, p2: p, c12: c, c21: c }
    }

    fn fig23(c12: f64, c21: f64) -> GaussianCmChannel {
        GaussianCmChannel { g11: 0.5, g12: 1.0, g21: 0.5, g22: 1.0, p1: 10.0, p2: 10.0, c12, c21 }
    }

    /// `½ log2 det(I + W H Σ Hᵀ)` for the 2x2 system, `W = diag(w)`.
    fn logdet_oracle(ch: &GaussianCmChannel, split: &PowerSplit, w: [f64; 2], private_only: bool) -> f64 {
        let h = [[ch.g11.sqrt(), ch.g21.sqrt()], [ch.g12.sqrt(), ch.g22.sqrt()]];
        let c = ((ch.p1 - split.p1p) * (ch.p2 - split.p2p)).sqrt();
        let cov = if private_only { [[split.p1p, 0.0], [0.0, split.p2p]] } else { [[ch.p1, c], [c, ch.p2]] };
        let mut m = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m[i][j] += h[i][k] * cov[k][l] * h[j][l];
                    }
                }
            }
        }
        let det = (1.0 + w[0] * m[0][0]) * (1.0 + w[1] * m[1][1]) - w[0] * w[1] * m[0][1] * m[1][0];
        0.5 * det.log2()
    }

    #[test]
    fn kernel_matches_determinant_oracle() {
        let ch = GaussianCmChannel { g11: 1.3, g12: 0.4, g21: 0.7, g22: 2.1, p1: 3.0, p2: 5.0, c12: 0.0, c21: 0.0 };
        for split in [PowerSplit { p1p: 1.0, p2p: 2.0 }, PowerSplit { p1p: 0.0, p2p: 5.0 }, ch.full_private()] {
            let ct = coherence_terms(&ch, &split).unwrap();
            for s in [0.0, 0.3, 1.0] {
                let rx1 = receiver_bounds(&ch, &split, &ct, Rx::One, s);
                assert!((rx1.b012 - logdet_oracle(&ch, &split, [1.0, s], false)).abs() < 1e-12);
                assert!((rx1.b12 - logdet_oracle(&ch, &split, [1.0, s], true)).abs() < 1e-12);
                let rx2 = receiver_bounds(&ch, &split, &ct, Rx::Two, s);
                assert!((rx2.b012 - logdet_oracle(&ch, &split, [s, 1.0], false)).abs() < 1e-12);
                assert!((rx2.b12 - logdet_oracle(&ch, &split, [s, 1.0], true)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coherence_examples() {
        let ch = GaussianCmChannel { g11: 1.0, g12: 0.25, g21: 0.25, g22: 1.0, p1: 1.0, p2: 1.0, c12: 0.0, c21: 0.0 };
        let ct = coherence_terms(&ch, &PowerSplit { p1p: 0.0, p2p: 0.0 }).unwrap();
        assert!((ct.rho1 - 2.25).abs() < 1e-15 && (ct.rho2 - 2.25).abs() < 1e-15);
        let full = coherence_terms(&ch, &ch.full_private()).unwrap();
        assert_eq!((full.rho1, full.rho2), (0.0, 0.0));
        let f2 = fig23(0.2, 0.0);
        assert_eq!(coherence_terms(&f2, &f2.full_private()).unwrap().kterm, 0.0);
        assert!(matches!(coherence_terms(&ch, &PowerSplit { p1p: 1.5, p2p: 0.0 }), Err(Error::Domain(_))));
    }

    #[test]
    fn sigma_examples() {
        let ch = GaussianCmChannel { g11: 1.0, g12: 1.0, g21: 0.0, g22: 0.0, p1: 1.0, p2: 0.0, c12: 1.0, c21: 0.0 };
        let qn = sigma_min(&ch).unwrap();
        assert!((qn.sigma1sq - 0.5).abs() < 1e-15);
        assert!(qn.sigma2sq.is_infinite());
        let qn = sigma_min(&fig23(0.2, 0.0)).unwrap();
        let expected = 31.0 / ((2f64.powf(0.4) - 1.0) * 21.0);
        assert!((qn.sigma1sq - expected).abs() < 1e-12);
        assert!((qn.sigma1sq - 4.620).abs() < 1e-3);
    }

    #[test]
    fn fig1_outer_sum_at_full_power() {
        let ch = fig1(0.3);
        let bs = outer_bound_at(&ch, &ch.full_private()).unwrap();
        let p = ch.p1;
        let single = cap(1.5 * p);
        assert!((bs.b12 - (single + 0.3)).abs() < 1e-12);
        assert!((bs.b12 - 1.5618).abs() < 2e-3);
        let fc = full_cooperation_at(&ch, &ch.full_private()).unwrap();
        assert!((fc.b12 - cap(3.0 * p + 0.25 * p * p)).abs() < 1e-12);
        assert!((fc.b12 - 1.849488873676198).abs() < 1e-12);
    }

    #[test]
    fn fig3_full_cooperation_term() {
        let ch = fig23(0.0, 0.8);
        let fc = full_cooperation_at(&ch, &ch.full_private()).unwrap();
        assert!((fc.b12 - cap(30.0)).abs() < 1e-12);
        assert!((fc.b12 - 2.477).abs() < 5e-4);
    }

    #[test]
    fn two_round_meets_outer_with_one_sided_link() {
        let ch = fig23(0.0, 0.8);
        let qn = sigma_min(&ch).unwrap();
        let tr = two_round_at(&ch, &ch.full_private(), &qn).unwrap();
        let expected = (cap(10.0) + 0.8).min(cap(20.0));
        assert!((tr.decoder2_first.b12 - expected).abs() < 1e-12);
        assert!((tr.decoder2_first.b12 - 2.1962).abs() < 1e-4);
        let outer = outer_bound_at(&ch, &ch.full_private()).unwrap();
        assert!((outer.b12 - tr.decoder2_first.b12).abs() < 1e-12);
    }

    #[test]
    fn coherent_split_cannot_beat_the_outer_bound() {
        // A channel where the full-private floor, reused at the all-common
        // split, would let compression add more than C21 bits to R0 + R1 + R2.
        let ch = GaussianCmChannel {
            g11: 0.4147946594543993,
            g12: 8.142942712521078,
            g21: 0.11071890685163338,
            g22: 9.34482513068464,
            p1: 2.1745037637756437,
            p2: 1.7515884180197183,
            c12: 0.0,
            c21: 0.6291454495367613,
        };
        let split = PowerSplit { p1p: 0.0, p2p: 0.0 };
        let outer = outer_bound_at(&ch, &split).unwrap();
        let tr = two_round_at(&ch, &split, &sigma_min_at(&ch, &split).unwrap()).unwrap();
        assert!(tr.decoder1_first.dominated_by(&outer, 1e-12));
        assert!(sigma_min_at(&ch, &split).unwrap().sigma2sq > sigma_min(&ch).unwrap().sigma2sq);
        assert!(matches!(two_round_at(&ch, &split, &sigma_min(&ch).unwrap()), Err(Error::Domain(_))));
    }

    #[test]
    fn broadcast_one_round_value() {
        let ch = GaussianCmChannel { g11: 1.0, g12: 1.0, g21: 0.0, g22: 0.0, p1: 10.0, p2: 0.0, c12: 0.5, c21: 0.5 };
        let qn = sigma_min(&ch).unwrap();
        assert!((qn.sigma1sq - 21.0 / 11.0).abs() < 1e-12);
        let bs = one_round_at(&ch, &ch.full_private(), &qn).unwrap();
        assert!((bs.b1 - cap(10.0 + 10.0 / (1.0 + 21.0 / 11.0))).abs() < 1e-12);
        assert!((bs.b1 - 1.9258745207080288).abs() < 1e-12);
    }

    #[test]
    fn noise_below_floor_is_rejected() {
        let ch = fig1(0.3);
        let mut qn = sigma_min(&ch).unwrap();
        qn.sigma1sq *= 0.5;
        assert!(matches!(one_round_at(&ch, &ch.full_private(), &qn), Err(Error::Domain(_))));
        assert!(matches!(two_round_at(&ch, &ch.full_private(), &qn), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_conferencing_collapses_every_scheme() {
        let ch = fig1(0.0);
        let qn = sigma_min(&ch).unwrap();
        assert_eq!(qn, QuantizationNoise::NONE);
        for split in [ch.full_private(), PowerSplit { p1p: 1.0, p2p: 0.5 }] {
            let nc = no_coop_at(&ch, &split).unwrap();
            assert_eq!(one_round_at(&ch, &split, &qn).unwrap(), nc);
            let tr = two_round_at(&ch, &split, &qn).unwrap();
            assert_eq!(tr.decoder1_first, nc);
            assert_eq!(tr.decoder2_first, nc);
            assert_eq!(outer_bound_at(&ch, &split).unwrap(), nc);
        }
    }

    #[test]
    fn fig1_region_sums() {
        let ch = fig1(0.3);
        let grid = GridSpec { power_points: 9, ..GridSpec::default() };
        let nc = gaussian_region(&ch, Scheme::NoCoop, &grid, R0Mode::ZeroCommon).unwrap();
        assert!((nc.max_sum_rate() - cap(1.5 * ch.p1)).abs() < 1e-12);
        let outer = gaussian_region(&ch, Scheme::Outer, &grid, R0Mode::Full).unwrap();
        assert!((outer.max_sum_rate() - (cap(1.5 * ch.p1) + 0.3)).abs() < 1e-12);
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert!("cme".parse::<Scheme>().is_err());
    }
}
