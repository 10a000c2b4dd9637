//! The driver tying the two halves together: calibrating the identification
//! of the homology framing with the `{[S], [T]}` basis, checking that
//! period-map monodromy translates chambers the way the tilt action does,
//! measuring the Schwarz-triangle angles of the fundamental branch, and
//! verifying the scalar (non-projectivized) lift.

use crate::braid::{compose, elements, inverse, AutElement, Psl2Class};
use crate::config::Config;
use crate::exchange::translate;
use crate::lattice::IntMat2;
use crate::periods::{
    canonical_periods, continue_periods, integral_transition, period_map, Continuation,
    EllipticPoint, PeriodError, PeriodPair, PeriodVector, BASEPOINT,
};
use crate::stability::{
    chamber_descent_from, chamber_descent_with, ProjectiveCharge, StabilityError, DESCENT_CAP,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

type C64 = Complex64;

/// The monodromy around the order-2 orbifold point, in the reference frame.
pub const STD_CROSS: IntMat2 = IntMat2([[0, -1], [1, 0]]);
/// The monodromy around the order-3 orbifold point, in the reference frame.
pub const STD_STAR: IntMat2 = IntMat2([[0, 1], [-1, 1]]);

/// Samples closer to a wall than this (in width margin) are excluded from
/// sweep statistics rather than counted as failures.
pub const NEAR_WALL_TOL: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum CorrespondenceError {
    #[error("calibration failed: no unimodular conjugator with entries in [-3,3]")]
    CalibrationFailed,
    #[error("boundary arc has too few points for tangent fitting")]
    ArcTooShort,
    #[error("no short braid word realizes the measured transition matrix")]
    NoBraidElement,
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
}

/// One-time identification of the period framing with the K-theory basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    /// Unimodular change of basis from `(p_alpha, p_beta)` to `(Z(S), Z(T))`.
    pub basis: IntMat2,
    /// Shift offset of the lift; even shifts act trivially on charges, so the
    /// projective calibration fixes it only mod 2 and we take 0.
    pub branch_shift: i64,
    /// Monodromy measured across the cut between the degenerate point and
    /// the order-2 orbifold point, before conjugation.
    pub measured_cross: IntMat2,
    /// Monodromy measured across the cut toward the order-3 orbifold point.
    pub measured_star: IntMat2,
    /// Whether the matching used the inverse (opposite loop orientation).
    pub cross_inverted: bool,
    pub star_inverted: bool,
}

/// Reference periods at `1 - u`: the pushforward of the framing under the
/// deck transformation `(z, y) -> (-z, iy)`, whose pullback scales the
/// meromorphic form by `-i` and the holomorphic one by `i`.
fn deck_reference(at_source: &PeriodVector, u_target: C64) -> Result<PeriodVector, PeriodError> {
    let i = C64::new(0.0, 1.0);
    Ok(PeriodVector {
        at: EllipticPoint::new(u_target)?,
        lambda: PeriodPair {
            alpha: -i * at_source.lambda.alpha,
            beta: -i * at_source.lambda.beta,
        },
        omega: PeriodPair {
            alpha: i * at_source.omega.alpha,
            beta: i * at_source.omega.beta,
        },
        branch_log: Vec::new(),
    })
}

fn proj_eq(a: IntMat2, b: IntMat2) -> bool {
    a == b || a == -b
}

/// Measures the two branch-cut-crossing monodromies and searches the finite
/// set of small unimodular matrices for the conjugation onto the reference
/// pair.
pub fn calibrate(cfg: &Config) -> Result<Calibration, CorrespondenceError> {
    let u0 = BASEPOINT;
    let u1 = C64::new(1.0, 0.0) - u0;
    let start = canonical_periods(u0, cfg)?;
    let deck_ref = deck_reference(&start, u1)?;

    // Crossing the cut between the degenerate point and the order-2 point:
    // straight down through Re u = 1/2.
    let p_cross = continue_periods(&start, &[u1], cfg)?;
    let m_cross = integral_transition(&deck_ref, &p_cross, cfg.int_tol)?;

    // Crossing the cut toward the order-3 point: detour through the
    // left half plane, crossing the real axis at negative real part.
    let p_star = continue_periods(
        &start,
        &[C64::new(-0.8, 0.5), C64::new(-0.8, -0.5), u1],
        cfg,
    )?;
    let m_star = integral_transition(&deck_ref, &p_star, cfg.int_tol)?;

    let cross_variants = [(false, m_cross), (true, m_cross.inverse().unwrap())];
    let star_variants = [(false, m_star), (true, m_star.inverse().unwrap())];
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            for c in -3i64..=3 {
                for d in -3i64..=3 {
                    let bm = IntMat2([[a, b], [c, d]]);
                    if bm.det().abs() != 1 {
                        continue;
                    }
                    let binv = bm.inverse().unwrap();
                    for &(ci, mc) in &cross_variants {
                        for &(si, ms) in &star_variants {
                            if proj_eq(bm * mc * binv, STD_CROSS)
                                && proj_eq(bm * ms * binv, STD_STAR)
                            {
                                return Ok(Calibration {
                                    basis: bm,
                                    branch_shift: 0,
                                    measured_cross: m_cross,
                                    measured_star: m_star,
                                    cross_inverted: ci,
                                    star_inverted: si,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Err(CorrespondenceError::CalibrationFailed)
}

/// Central charge of the calibrated period vector: `(Z(S), Z(T))` is the
/// basis matrix applied to the meromorphic period pair.
pub fn calibrated_charge(cal: &Calibration, p: PeriodPair) -> ProjectiveCharge {
    let b = cal.basis.0;
    ProjectiveCharge::new(
        p.alpha * b[0][0] as f64 + p.beta * b[0][1] as f64,
        p.alpha * b[1][0] as f64 + p.beta * b[1][1] as f64,
    )
}

/// Calibrated charge at `u` on the principal branch.
pub fn charge_at(
    u: C64,
    cal: &Calibration,
    cfg: &Config,
) -> Result<ProjectiveCharge, CorrespondenceError> {
    Ok(calibrated_charge(cal, period_map(u, cfg)?.lambda))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum SampleStatus {
    Pass,
    Excluded(String),
    Fail(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub u: C64,
    pub status: SampleStatus,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub passed: usize,
    pub failed: usize,
    pub excluded: usize,
    pub injectivity_ok: bool,
    pub outcomes: Vec<SampleOutcome>,
}

impl SweepReport {
    /// Fraction of non-excluded samples passing the chamber checks.
    pub fn pass_fraction(&self) -> f64 {
        if self.passed + self.failed == 0 {
            return 1.0;
        }
        self.passed as f64 / (self.passed + self.failed) as f64
    }
}

/// Deterministic sweep sample grid in the upper half plane, clear of the
/// singular values and the real axis.
pub fn default_sweep_samples() -> Vec<C64> {
    let mut out = Vec::with_capacity(100);
    for i in 0..10 {
        for j in 0..10 {
            let re = -1.4 + 3.8 * i as f64 / 9.0;
            let im = 0.2 + 1.35 * j as f64 / 9.0;
            out.push(C64::new(re, im));
        }
    }
    out
}

/// Loop around the degenerate point `u = 0` based at `u`, as a polyline.
fn loop_around_zero_from(u: C64) -> Vec<C64> {
    let a = C64::new(0.5, 0.5);
    vec![
        a,
        C64::new(-0.5, 0.5),
        C64::new(-0.5, -0.5),
        C64::new(0.5, -0.5),
        a,
        u,
    ]
}

/// Finds a braid element whose K-matrix equals `target` up to sign, by
/// breadth-first search over short generator words (deduplicated by the
/// projective matrix image, so the search covers a PSL(2,Z) ball).
fn braid_element_for(target: IntMat2) -> Option<AutElement> {
    let gens = [
        elements::phi_s(),
        inverse(elements::phi_s()),
        elements::phi_t(),
        inverse(elements::phi_t()),
    ];
    let mut seen = vec![Psl2Class::of(IntMat2::IDENTITY)];
    let mut frontier = vec![AutElement::IDENTITY];
    for _ in 0..12 {
        let mut next = Vec::new();
        for e in &frontier {
            if proj_eq(e.k_matrix.matrix(), target) {
                return Some(*e);
            }
            for g in gens {
                let c = compose(*e, g);
                let cls = Psl2Class::of(c.k_matrix.matrix());
                if !seen.contains(&cls) {
                    seen.push(cls);
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    None
}

/// Checks that the continued branch lands in the correspondingly translated
/// chamber. The continued charge satisfies `Z'(c) = Z(n_cal^T c)` with
/// `n_cal` the calibrated integral transition, so it is exactly the
/// transport of the base charge by the braid element `a` with K-matrix
/// `(n_cal^T)^{-1}`; the monodromy maps the base chamber to its
/// `a`-translate. The check verifies that this translate is the width
/// minimizer for the continued charge on its own sheet, with matching
/// width. Returns `None` when either descent is too close to a wall to be
/// trusted.
fn chamber_translation_check(
    cal: &Calibration,
    base: &PeriodVector,
    continued: &PeriodVector,
    int_tol: f64,
) -> Result<Option<bool>, CorrespondenceError> {
    let n = integral_transition(base, continued, int_tol)?;
    let n_cal = cal.basis * n * cal.basis.inverse().unwrap();
    let target = n_cal
        .transpose()
        .inverse()
        .ok_or(PeriodError::NonIntegerTransition(f64::INFINITY))?;
    let a = braid_element_for(target).ok_or(CorrespondenceError::NoBraidElement)?;
    let z0 = calibrated_charge(cal, base.lambda);
    let z1 = calibrated_charge(cal, continued.lambda);
    let rep0 = chamber_descent_with(&z0, NEAR_WALL_TOL, DESCENT_CAP)?;
    if !rep0.wall_flags.is_empty() {
        return Ok(None);
    }
    let h_exp = translate(a, &rep0.heart);
    let rep1 = chamber_descent_from(&z1, &h_exp, NEAR_WALL_TOL, DESCENT_CAP)?;
    if !rep1.wall_flags.is_empty() {
        return Ok(None);
    }
    Ok(Some(
        rep1.heart.g == h_exp.g && (rep1.width - rep0.width).abs() < 1e-6,
    ))
}

/// Per-sample verification of the chamber-translation property, for both a
/// loop around the degenerate point and the deck transformation `u -> 1-u`,
/// plus a local-injectivity sweep over the sample set.
pub fn verify_correspondence(
    samples: &[C64],
    cal: &Calibration,
    cfg: &Config,
) -> Result<SweepReport, CorrespondenceError> {
    let mut outcomes = Vec::with_capacity(samples.len());
    let mut passed = 0;
    let mut failed = 0;
    let mut excluded = 0;
    let mut charges: Vec<(C64, ProjectiveCharge)> = Vec::new();

    for &u in samples {
        let status = check_sample(u, cal, cfg, &mut charges);
        match &status {
            SampleStatus::Pass => passed += 1,
            SampleStatus::Fail(_) => failed += 1,
            SampleStatus::Excluded(_) => excluded += 1,
        }
        outcomes.push(SampleOutcome { u, status });
    }

    // Local injectivity: nearby samples must have distinct projective charges.
    let mut injectivity_ok = true;
    for i in 0..charges.len() {
        for j in (i + 1)..charges.len() {
            let (ui, zi) = &charges[i];
            let (uj, zj) = &charges[j];
            if (ui - uj).norm() < 0.5 && zi.distance(zj) < 1e-9 {
                injectivity_ok = false;
            }
        }
    }

    Ok(SweepReport {
        passed,
        failed,
        excluded,
        injectivity_ok,
        outcomes,
    })
}

fn check_sample(
    u: C64,
    cal: &Calibration,
    cfg: &Config,
    charges: &mut Vec<(C64, ProjectiveCharge)>,
) -> SampleStatus {
    let base = match period_map(u, cfg) {
        Ok(pv) => pv,
        Err(e) => return SampleStatus::Excluded(format!("continuation to sample: {e}")),
    };
    charges.push((u, calibrated_charge(cal, base.lambda)));

    // (a1) loop translation around u = 0.
    let looped = match continue_periods(&base, &loop_around_zero_from(u), cfg) {
        Ok(pv) => pv,
        Err(e) => return SampleStatus::Excluded(format!("loop continuation: {e}")),
    };
    match chamber_translation_check(cal, &base, &looped, cfg.int_tol) {
        Ok(Some(true)) => {}
        Ok(Some(false)) => return SampleStatus::Fail("loop chamber mismatch".into()),
        Ok(None) => return SampleStatus::Excluded("near wall".into()),
        Err(e) => return SampleStatus::Fail(format!("loop check: {e}")),
    }

    // (a2) deck translation u -> 1-u, crossing the cut through Re u = 1/2.
    let u1 = C64::new(1.0, 0.0) - u;
    let deck_path = [BASEPOINT, C64::new(1.0, 0.0) - BASEPOINT, u1];
    let decked = match continue_periods(&base, &deck_path, cfg) {
        Ok(pv) => pv,
        Err(e) => return SampleStatus::Excluded(format!("deck continuation: {e}")),
    };
    let deck_ref = match deck_reference(&base, u1) {
        Ok(r) => r,
        Err(e) => return SampleStatus::Excluded(format!("deck reference: {e}")),
    };
    match chamber_translation_check(cal, &deck_ref, &decked, cfg.int_tol) {
        Ok(Some(true)) => SampleStatus::Pass,
        Ok(Some(false)) => SampleStatus::Fail("deck chamber mismatch".into()),
        Ok(None) => SampleStatus::Excluded("near wall".into()),
        Err(e) => SampleStatus::Fail(format!("deck check: {e}")),
    }
}

/// A boundary arc of the fundamental branch, approaching one triangle
/// vertex, parameterized by points in the u-plane.
#[derive(Debug, Clone)]
pub struct BoundaryArc {
    /// Waypoints from the basepoint to the first arc point.
    pub route: Vec<C64>,
    /// Arc points ordered toward the vertex.
    pub points: Vec<C64>,
    /// Distance-like small parameter per point (goes to 0 at the vertex).
    pub gauge: Vec<f64>,
}

/// Measured interior angles of the single-branch triangle image.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TriangleReport {
    /// At the image of the degenerate value (expected pi).
    pub circ: f64,
    /// At the image of large |u| (expected pi/3).
    pub star: f64,
    /// At the image of u = 1/2 (expected pi/2).
    pub cross: f64,
}

fn ratios_along(arc: &BoundaryArc, cfg: &Config) -> Result<Vec<C64>, PeriodError> {
    let mut cont = Continuation::start(BASEPOINT, cfg)?;
    cont.follow(&arc.route)?;
    let mut out = Vec::with_capacity(arc.points.len());
    for &p in &arc.points {
        cont.advance_to(p)?;
        out.push(cont.lambda.ratio());
    }
    Ok(out)
}

fn wrap_pm_pi(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x <= -PI {
        x += 2.0 * PI;
    } else if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Tangent direction of an arc at its vertex, by chord angles extrapolated
/// linearly in the gauge parameter; returns the direction pointing from the
/// vertex into the arc.
fn vertex_direction(zeta: &[C64], gauge: &[f64]) -> Result<f64, CorrespondenceError> {
    let n = zeta.len();
    if n < 3 || gauge.len() != n {
        return Err(CorrespondenceError::ArcTooShort);
    }
    // Chord angles, unwrapped, with the gauge evaluated at chord midpoints.
    let mut beta = Vec::with_capacity(n - 1);
    let mut mid = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        let d = zeta[k + 1] - zeta[k];
        let raw = d.arg();
        let b = if let Some(&prev) = beta.last() {
            prev + wrap_pm_pi(raw - prev)
        } else {
            raw
        };
        beta.push(b);
        mid.push((gauge[k] + gauge[k + 1]) / 2.0);
    }
    let (b1, b0) = (beta[n - 2], beta[n - 3]);
    let (m1, m0) = (mid[n - 2], mid[n - 3]);
    let at_vertex = if (m0 - m1).abs() > 1e-12 {
        b1 - m1 * (b0 - b1) / (m0 - m1)
    } else {
        b1
    };
    // Chords point toward the vertex; flip to point away from it.
    Ok(at_vertex + PI)
}

/// Interior angle at a vertex from two boundary arcs approaching it.
fn measure_angle(
    arc1: &BoundaryArc,
    arc2: &BoundaryArc,
    cfg: &Config,
) -> Result<f64, CorrespondenceError> {
    let r1 = ratios_along(arc1, cfg)?;
    let r2 = ratios_along(arc2, cfg)?;
    // A single conformal chart for both arcs: invert if the vertex is far out.
    let near = r1.last().unwrap().norm().max(r2.last().unwrap().norm());
    let chart = |z: C64| if near > 3.0 { 1.0 / z } else { z };
    let z1: Vec<C64> = r1.iter().map(|&z| chart(z)).collect();
    let z2: Vec<C64> = r2.iter().map(|&z| chart(z)).collect();
    let t1 = vertex_direction(&z1, &arc1.gauge)?;
    let t2 = vertex_direction(&z2, &arc2.gauge)?;
    Ok(wrap_pm_pi(t1 - t2).abs())
}

fn real_arc(route: Vec<C64>, xs: &[f64], vertex: f64, gauge_pow: f64) -> BoundaryArc {
    BoundaryArc {
        route,
        points: xs.iter().map(|&x| C64::new(x, 0.0)).collect(),
        gauge: xs
            .iter()
            .map(|&x| (x - vertex).abs().powf(gauge_pow))
            .collect(),
    }
}

/// The six default boundary arcs: two per vertex.
pub fn default_arcs() -> [(BoundaryArc, BoundaryArc); 3] {
    // Vertex at the image of u = 0: along the positive and negative real axis.
    let circ_pos = real_arc(vec![], &[0.30, 0.20, 0.13, 0.085, 0.055, 0.036], 0.0, 1.0);
    let circ_neg = real_arc(
        vec![C64::new(-0.3, 0.4), C64::new(-0.3, 0.0)],
        &[-0.30, -0.20, -0.13, -0.085, -0.055, -0.036],
        0.0,
        1.0,
    );
    // Vertex at the image of large |u|: up the symmetry line and out the
    // negative real axis. The local uniformizer scales like |u|^(-2/3).
    let ys = [3.0, 6.0, 12.0, 24.0, 48.0, 96.0];
    let star_up = BoundaryArc {
        route: vec![],
        points: ys.iter().map(|&y| C64::new(0.5, y)).collect(),
        gauge: ys.iter().map(|&y| y.powf(-2.0 / 3.0)).collect(),
    };
    let star_neg = BoundaryArc {
        route: vec![],
        points: ys.iter().map(|&y| C64::new(-y, 0.0)).collect(),
        gauge: ys.iter().map(|&y| y.powf(-2.0 / 3.0)).collect(),
    };
    // Vertex at the image of u = 1/2: along the real axis and down the
    // symmetry line.
    let cross_real = real_arc(vec![], &[0.30, 0.37, 0.42, 0.455, 0.472, 0.482], 0.5, 1.0);
    let ts = [0.20, 0.13, 0.08, 0.05, 0.032, 0.02];
    let cross_up = BoundaryArc {
        route: vec![],
        points: ts.iter().map(|&t| C64::new(0.5, t)).collect(),
        gauge: ts.to_vec(),
    };
    [
        (circ_pos, circ_neg),
        (star_up, star_neg),
        (cross_real, cross_up),
    ]
}

/// Measures the three interior angles of the fundamental triangle image
/// from boundary arcs.
pub fn triangle_geometry(cfg: &Config) -> Result<TriangleReport, CorrespondenceError> {
    let [(c1, c2), (s1, s2), (x1, x2)] = default_arcs();
    Ok(TriangleReport {
        circ: measure_angle(&c1, &c2, cfg)?,
        star: measure_angle(&s1, &s2, cfg)?,
        cross: measure_angle(&x1, &x2, cfg)?,
    })
}

/// Result of tracking a non-projectivized period pair around a closed loop.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftReport {
    pub monodromy: IntMat2,
    /// Whether the lattice monodromy is plus or minus the identity.
    pub projectively_trivial: bool,
    /// Measured overall scalar (meaningful when projectively trivial).
    pub scalar: Option<C64>,
    pub scalar_ok: bool,
}

/// Tracks the scalar action of a closed loop based at the basepoint on the
/// non-projectivized period vector.
pub fn lift_check(loop_path: &[C64], cfg: &Config) -> Result<LiftReport, CorrespondenceError> {
    let start = canonical_periods(BASEPOINT, cfg)?;
    let end = continue_periods(&start, loop_path, cfg)?;
    let m = integral_transition(&start, &end, cfg.int_tol)?;
    let trivial = proj_eq(m, IntMat2::IDENTITY);
    if !trivial {
        return Ok(LiftReport {
            monodromy: m,
            projectively_trivial: false,
            scalar: None,
            scalar_ok: false,
        });
    }
    let ratios = [
        end.lambda.alpha / start.lambda.alpha,
        end.lambda.beta / start.lambda.beta,
        end.omega.alpha / start.omega.alpha,
        end.omega.beta / start.omega.beta,
    ];
    let mean = ratios.iter().sum::<C64>() / 4.0;
    let spread = ratios.iter().map(|r| (r - mean).norm()).fold(0.0, f64::max);
    let target = if m == IntMat2::IDENTITY { 1.0 } else { -1.0 };
    let ok = spread < 1e-6 && (mean - C64::new(target, 0.0)).norm() < 1e-6;
    Ok(LiftReport {
        monodromy: m,
        projectively_trivial: true,
        scalar: Some(mean),
        scalar_ok: ok,
    })
}
