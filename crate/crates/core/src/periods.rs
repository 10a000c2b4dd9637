//! Numerical periods of the meromorphic differential `y dz` and the
//! holomorphic differential `dz/y` on the family `y^2 = z^3 - 3z + (4u-2)`,
//! analytic continuation in the u-plane, and monodromy.
//!
//! Periods are computed as twice the integral along the straight segment
//! between two branch points, with the endpoint behaviour absorbed by the
//! substitution `z = midpoint + radius * sin(theta)`. Continuation tracks
//! roots by nearest-assignment, keeps the square-root branch coherent by
//! seed matching, and snaps each step's transition to the integer lattice
//! (a predictor-corrector against the exact derivative relation between
//! the two forms).

use crate::config::Config;
use crate::lattice::IntMat2;
use crate::quad::gauss_legendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

type C64 = Complex64;

/// Basepoint fixing the principal branch of all period functions.
pub const BASEPOINT: C64 = C64::new(0.5, 0.5);

/// Threshold on the distance of `u` to the singular values 0, 1 below which
/// the fiber is treated as singular.
const SINGULAR_TOL: f64 = 1e-9;
/// Minimal allowed distance between branch points.
const NEAR_SINGULAR_TOL: f64 = 1e-6;
/// Maximum recursive step refinements during continuation.
const MAX_REFINE: u32 = 20;

#[derive(Debug, Error, PartialEq)]
pub enum PeriodError {
    #[error("singular fiber: u is at (or numerically at) 0 or 1")]
    SingularFiber,
    #[error("near-singular, refusing: branch points closer than tolerance")]
    NearSingular,
    #[error("path passes within the clearance of a singular value")]
    PathTooClose,
    #[error("continuation step could not be resolved after {MAX_REFINE} refinements")]
    ContinuationAccuracy,
    #[error("continuation accuracy insufficient: transition residual {0:.3e} is not integral")]
    NonIntegerTransition(f64),
    #[error("empty or degenerate continuation path")]
    BadPath,
}

/// A point of the framed moduli space, with the coordinates of Eq.-style
/// relations `j = 4u(1-u)`, `J = 1728/j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticPoint {
    pub u: C64,
}

impl EllipticPoint {
    pub fn new(u: C64) -> Result<EllipticPoint, PeriodError> {
        if (u.norm() < SINGULAR_TOL) || ((u - 1.0).norm() < SINGULAR_TOL) {
            return Err(PeriodError::SingularFiber);
        }
        Ok(EllipticPoint { u })
    }

    pub fn j(&self) -> C64 {
        4.0 * self.u * (C64::new(1.0, 0.0) - self.u)
    }

    pub fn big_j(&self) -> C64 {
        C64::new(1728.0, 0.0) / self.j()
    }
}

/// One homology generator of the framing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cycle {
    Alpha,
    Beta,
}

/// Which differential is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Form {
    Lambda,
    Omega,
}

/// Periods over the two framing cycles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodPair {
    pub alpha: C64,
    pub beta: C64,
}

impl PeriodPair {
    pub fn apply(m: IntMat2, p: PeriodPair) -> PeriodPair {
        PeriodPair {
            alpha: p.alpha * m.0[0][0] as f64 + p.beta * m.0[0][1] as f64,
            beta: p.alpha * m.0[1][0] as f64 + p.beta * m.0[1][1] as f64,
        }
    }

    pub fn ratio(&self) -> C64 {
        self.alpha / self.beta
    }
}

/// A recorded continuation event where the straight-segment cycles had to be
/// re-expressed in the running homology basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchStep {
    pub u_from: C64,
    pub u_to: C64,
    pub transition: IntMat2,
}

/// Period data of both forms at a point, with the branch bookkeeping of the
/// continuation path that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodVector {
    pub at: EllipticPoint,
    pub lambda: PeriodPair,
    pub omega: PeriodPair,
    pub branch_log: Vec<BranchStep>,
}

/// The ordered branch points of the cubic, and the two framing segments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleBasis {
    pub roots: [C64; 3],
}

impl CycleBasis {
    /// Segment endpoints and the remaining root for a cycle.
    pub fn segment(&self, cycle: Cycle) -> (C64, C64, C64) {
        match cycle {
            Cycle::Alpha => (self.roots[0], self.roots[1], self.roots[2]),
            Cycle::Beta => (self.roots[1], self.roots[2], self.roots[0]),
        }
    }

    fn min_gap(&self) -> f64 {
        let r = self.roots;
        let mut g = f64::INFINITY;
        for i in 0..3 {
            for jj in (i + 1)..3 {
                g = g.min((r[i] - r[jj]).norm());
            }
        }
        g
    }
}

/// Roots of `z^3 - 3z + (4u - 2)`, ordered lexicographically by
/// (real part, imaginary part).
pub fn cubic_roots(u: C64) -> Result<CycleBasis, PeriodError> {
    let pt = EllipticPoint::new(u)?;
    let c = 4.0 * pt.u - 2.0;
    // Depressed cubic z^3 - 3z + c: roots w + 1/w with w^3 = -c/2 + sqrt(c^2/4 - 1).
    let s = (c * c / 4.0 - 1.0).sqrt();
    let w3 = -c / 2.0 + s;
    let w = w3.powf(1.0 / 3.0);
    let zeta = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut roots = [C64::default(); 3];
    for (k, r) in roots.iter_mut().enumerate() {
        let wk = w * zeta.powu(k as u32);
        *r = wk + 1.0 / wk;
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let basis = CycleBasis { roots };
    if basis.min_gap() < NEAR_SINGULAR_TOL {
        return Err(PeriodError::NearSingular);
    }
    Ok(basis)
}

/// Quadrature rule cache for a fixed node count.
#[derive(Debug, Clone)]
struct Rule {
    theta: Vec<f64>,
    weight: Vec<f64>,
}

impl Rule {
    fn new(n: usize) -> Rule {
        let (x, w) = gauss_legendre(n);
        Rule {
            theta: x.iter().map(|t| t * FRAC_PI_2).collect(),
            weight: w.iter().map(|wi| wi * FRAC_PI_2).collect(),
        }
    }
}

/// Both periods over one segment, with a coherently chosen square-root
/// branch. Returns `(lambda, omega, seed)` where `seed` is the branch value
/// at the first quadrature node, used to keep consecutive evaluations on the
/// same sheet.
fn segment_periods(a: C64, b: C64, third: C64, rule: &Rule, seed: Option<C64>) -> (C64, C64, C64) {
    let mid = (a + b) / 2.0;
    let rad = (b - a) / 2.0;
    let i = C64::new(0.0, 1.0);
    let mut lam = C64::default();
    let mut ome = C64::default();
    let mut prev = C64::default();
    let mut first_seed = C64::default();
    for (k, (&th, &wk)) in rule.theta.iter().zip(&rule.weight).enumerate() {
        let z = mid + rad * th.sin();
        let mut s = (z - third).sqrt();
        let reference = if k == 0 { seed.unwrap_or(s) } else { prev };
        if (s + reference).norm() < (s - reference).norm() {
            s = -s;
        }
        if k == 0 {
            first_seed = s;
        }
        prev = s;
        let cos = th.cos();
        lam += wk * cos * cos * s;
        ome += wk / s;
    }
    // y = i * rad * cos(theta) * s on the segment; cycle = 2 * segment.
    let lambda = 2.0 * i * rad * rad * lam;
    let omega = 2.0 * (-i) * ome;
    (lambda, omega, first_seed)
}

/// Evaluation of both forms over both cycles for a given root ordering and
/// branch seeds.
fn periods_for(
    basis: &CycleBasis,
    rule: &Rule,
    seeds: Option<[C64; 2]>,
) -> (PeriodPair, PeriodPair, [C64; 2]) {
    let (a1, b1, t1) = basis.segment(Cycle::Alpha);
    let (a2, b2, t2) = basis.segment(Cycle::Beta);
    let (la, oa, s0) = segment_periods(a1, b1, t1, rule, seeds.map(|s| s[0]));
    let (lb, ob, s1) = segment_periods(a2, b2, t2, rule, seeds.map(|s| s[1]));
    (
        PeriodPair {
            alpha: la,
            beta: lb,
        },
        PeriodPair {
            alpha: oa,
            beta: ob,
        },
        [s0, s1],
    )
}

/// Canonical periods at a point: lexicographic root order, principal branch
/// seeds. This is the principal local determination used as the reference
/// lattice basis.
pub fn canonical_periods(u: C64, cfg: &Config) -> Result<PeriodVector, PeriodError> {
    let basis = cubic_roots(u)?;
    let rule = Rule::new(cfg.quadrature_nodes);
    let (lambda, omega, _) = periods_for(&basis, &rule, None);
    Ok(PeriodVector {
        at: EllipticPoint::new(u)?,
        lambda,
        omega,
        branch_log: Vec::new(),
    })
}

/// Single-period entry point matching the operation contract.
pub fn period(u: C64, cycle: Cycle, form: Form, cfg: &Config) -> Result<C64, PeriodError> {
    let pv = canonical_periods(u, cfg)?;
    let pair = match form {
        Form::Lambda => pv.lambda,
        Form::Omega => pv.omega,
    };
    Ok(match cycle {
        Cycle::Alpha => pair.alpha,
        Cycle::Beta => pair.beta,
    })
}

/// Running continuation state: the tracked root chain, its branch seeds, and
/// the continued period values of both forms.
#[derive(Debug, Clone)]
pub struct Continuation {
    pub u: C64,
    basis: CycleBasis,
    seeds: [C64; 2],
    pub lambda: PeriodPair,
    pub omega: PeriodPair,
    pub log: Vec<BranchStep>,
    /// Finite-difference estimate of the u-derivative of the omega periods.
    domega: PeriodPair,
    rule: Rule,
    clearance: f64,
    base_step: f64,
}

impl Continuation {
    /// Starts a continuation at `u` on the canonical branch.
    pub fn start(u: C64, cfg: &Config) -> Result<Continuation, PeriodError> {
        let basis = cubic_roots(u)?;
        let rule = Rule::new(cfg.quadrature_nodes);
        let (lambda, omega, seeds) = periods_for(&basis, &rule, None);
        Ok(Continuation {
            u,
            basis,
            seeds,
            lambda,
            omega,
            log: Vec::new(),
            domega: PeriodPair {
                alpha: C64::default(),
                beta: C64::default(),
            },
            rule,
            clearance: cfg.clearance,
            base_step: cfg.cont_step,
        })
    }

    /// Starts from an externally provided (already continued) period vector.
    pub fn resume(pv: &PeriodVector, cfg: &Config) -> Result<Continuation, PeriodError> {
        let mut c = Continuation::start(pv.at.u, cfg)?;
        c.lambda = pv.lambda;
        c.omega = pv.omega;
        c.log = pv.branch_log.clone();
        Ok(c)
    }

    pub fn vector(&self) -> PeriodVector {
        PeriodVector {
            at: EllipticPoint { u: self.u },
            lambda: self.lambda,
            omega: self.omega,
            branch_log: self.log.clone(),
        }
    }

    fn check_clearance(&self, a: C64, b: C64) -> Result<(), PeriodError> {
        for s in [C64::new(0.0, 0.0), C64::new(1.0, 0.0)] {
            if segment_point_distance(a, b, s) < self.clearance {
                return Err(PeriodError::PathTooClose);
            }
        }
        Ok(())
    }

    /// Advances to `target` along the straight segment, refining on demand.
    pub fn advance_to(&mut self, target: C64) -> Result<(), PeriodError> {
        self.check_clearance(self.u, target)?;
        let mut remaining = target - self.u;
        while remaining.norm() > 1e-14 {
            let sing = self.u.norm().min((self.u - C64::new(1.0, 0.0)).norm());
            let step_len = (0.1 * sing).max(self.base_step).min(remaining.norm());
            let next = self.u + remaining / remaining.norm() * step_len;
            self.step(next, 0)?;
            remaining = target - self.u;
        }
        Ok(())
    }

    /// Walks a polyline.
    pub fn follow(&mut self, path: &[C64]) -> Result<(), PeriodError> {
        for &p in path {
            self.advance_to(p)?;
        }
        Ok(())
    }

    fn step(&mut self, next: C64, depth: u32) -> Result<(), PeriodError> {
        if depth > MAX_REFINE {
            return Err(PeriodError::ContinuationAccuracy);
        }
        let refine = |me: &mut Self, next: C64, depth: u32| -> Result<(), PeriodError> {
            let mid = (me.u + next) / 2.0;
            me.step(mid, depth + 1)?;
            me.step(next, depth + 1)
        };

        let new_basis = match cubic_roots(next) {
            Ok(b) => b,
            Err(PeriodError::NearSingular) => return Err(PeriodError::NearSingular),
            Err(e) => return Err(e),
        };
        // Match new roots to the tracked ordering.
        let matched = match match_roots(&self.basis, &new_basis) {
            Some(m) => m,
            None => return refine(self, next, depth),
        };
        let h = next - self.u;
        let (lam_c, ome_c, seeds_c) = periods_for(&matched, &self.rule, Some(self.seeds));

        // Predictor: exact derivative relation for lambda, finite-difference
        // extrapolation for omega.
        let pred_lam = PeriodPair {
            alpha: self.lambda.alpha + 2.0 * h * self.omega.alpha,
            beta: self.lambda.beta + 2.0 * h * self.omega.beta,
        };
        let pred_ome = PeriodPair {
            alpha: self.omega.alpha + h * self.domega.alpha,
            beta: self.omega.beta + h * self.domega.beta,
        };

        let m = match snap_transition(&lam_c, &ome_c, &pred_lam, &pred_ome) {
            Some(m) => m,
            None => return refine(self, next, depth),
        };
        if m.det().abs() != 1 {
            return refine(self, next, depth);
        }

        let new_lambda = PeriodPair::apply(m, lam_c);
        let new_omega = PeriodPair::apply(m, ome_c);
        if m != IntMat2::IDENTITY {
            self.log.push(BranchStep {
                u_from: self.u,
                u_to: next,
                transition: m,
            });
        }
        self.domega = PeriodPair {
            alpha: (new_omega.alpha - self.omega.alpha) / h,
            beta: (new_omega.beta - self.omega.beta) / h,
        };
        self.u = next;
        self.basis = matched;
        self.seeds = seeds_c;
        self.lambda = new_lambda;
        self.omega = new_omega;
        Ok(())
    }
}

fn segment_point_distance(a: C64, b: C64, p: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Nearest-assignment matching of the new roots to the tracked ordering;
/// `None` when the movement is too large relative to the root separation
/// (ambiguous, caller must refine).
fn match_roots(old: &CycleBasis, new: &CycleBasis) -> Option<CycleBasis> {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut best: Option<([usize; 3], f64)> = None;
    for perm in PERMS {
        let total: f64 = (0..3)
            .map(|i| (old.roots[i] - new.roots[perm[i]]).norm())
            .sum();
        if best.is_none_or(|(_, t)| total < t) {
            best = Some((perm, total));
        }
    }
    let (perm, _) = best.unwrap();
    let max_move = (0..3)
        .map(|i| (old.roots[i] - new.roots[perm[i]]).norm())
        .fold(0.0f64, f64::max);
    if max_move > 0.35 * old.min_gap() {
        return None;
    }
    Some(CycleBasis {
        roots: [new.roots[perm[0]], new.roots[perm[1]], new.roots[perm[2]]],
    })
}

/// Least-squares solve of the integer transition `pred = M * C`, using both
/// forms; `None` if any entry is not close to an integer.
fn snap_transition(
    lam_c: &PeriodPair,
    ome_c: &PeriodPair,
    pred_lam: &PeriodPair,
    pred_ome: &PeriodPair,
) -> Option<IntMat2> {
    let sl = lam_c.alpha.norm().max(lam_c.beta.norm());
    let so = ome_c.alpha.norm().max(ome_c.beta.norm());
    if sl == 0.0 || so == 0.0 {
        return None;
    }
    let mut entries = [[0i64; 2]; 2];
    for (row, (pl, po)) in [
        (pred_lam.alpha, pred_ome.alpha),
        (pred_lam.beta, pred_ome.beta),
    ]
    .iter()
    .enumerate()
    {
        let x = solve_two_col(
            [lam_c.alpha / sl, ome_c.alpha / so],
            [lam_c.beta / sl, ome_c.beta / so],
            [*pl / sl, *po / so],
        )?;
        for (col, &v) in x.iter().enumerate() {
            let r = v.round();
            if (v - r).abs() > 0.25 || r.abs() > 1e6 {
                return None;
            }
            entries[row][col] = r as i64;
        }
    }
    Some(IntMat2(entries))
}

/// Real least squares for `b ~ x0 * c0 + x1 * c1` with complex data
/// (4 real equations, 2 real unknowns).
fn solve_two_col(c0: [C64; 2], c1: [C64; 2], b: [C64; 2]) -> Option<[f64; 2]> {
    let dot = |p: &[C64; 2], q: &[C64; 2]| -> f64 {
        p.iter()
            .zip(q)
            .map(|(x, y)| x.re * y.re + x.im * y.im)
            .sum()
    };
    let a00 = dot(&c0, &c0);
    let a01 = dot(&c0, &c1);
    let a11 = dot(&c1, &c1);
    let b0 = dot(&c0, &b);
    let b1 = dot(&c1, &b);
    let det = a00 * a11 - a01 * a01;
    if det.abs() < 1e-12 * a00.max(a11).max(1e-300) {
        return None;
    }
    Some([(b0 * a11 - b1 * a01) / det, (b1 * a00 - b0 * a01) / det])
}

/// Analytic continuation of a period vector along a polyline in the u-plane.
pub fn continue_periods(
    start: &PeriodVector,
    path: &[C64],
    cfg: &Config,
) -> Result<PeriodVector, PeriodError> {
    let mut cont = Continuation::resume(start, cfg)?;
    cont.follow(path)?;
    Ok(cont.vector())
}

/// Solves `continued = M * reference` exactly over the integers, using both
/// forms; errors if the residual exceeds `int_tol`.
pub fn integral_transition(
    reference: &PeriodVector,
    continued: &PeriodVector,
    int_tol: f64,
) -> Result<IntMat2, PeriodError> {
    let sl = reference
        .lambda
        .alpha
        .norm()
        .max(reference.lambda.beta.norm());
    let so = reference
        .omega
        .alpha
        .norm()
        .max(reference.omega.beta.norm());
    let mut entries = [[0i64; 2]; 2];
    let mut worst = 0.0f64;
    for (row, (pl, po)) in [
        (continued.lambda.alpha, continued.omega.alpha),
        (continued.lambda.beta, continued.omega.beta),
    ]
    .iter()
    .enumerate()
    {
        let x = solve_two_col(
            [reference.lambda.alpha / sl, reference.omega.alpha / so],
            [reference.lambda.beta / sl, reference.omega.beta / so],
            [*pl / sl, *po / so],
        )
        .ok_or(PeriodError::NonIntegerTransition(f64::INFINITY))?;
        for (col, &v) in x.iter().enumerate() {
            let r = v.round();
            worst = worst.max((v - r).abs());
            entries[row][col] = r as i64;
        }
    }
    if worst > int_tol {
        return Err(PeriodError::NonIntegerTransition(worst));
    }
    Ok(IntMat2(entries))
}

/// Monodromy of the period lattice around a closed polyline loop: the
/// integer matrix `M` with `continued = M * start`.
pub fn monodromy(loop_path: &[C64], cfg: &Config) -> Result<IntMat2, PeriodError> {
    if loop_path.len() < 2 {
        return Err(PeriodError::BadPath);
    }
    let base = loop_path[0];
    if (base - *loop_path.last().unwrap()).norm() > 1e-12 {
        return Err(PeriodError::BadPath);
    }
    let start = canonical_periods(base, cfg)?;
    let end = continue_periods(&start, &loop_path[1..], cfg)?;
    integral_transition(&start, &end, cfg.int_tol)
}

/// The hypergeometric exponent triples verified against the periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypergeometricSpec {
    /// Exponents at (0, infinity, 1).
    pub exponents: (f64, f64, f64),
}

impl HypergeometricSpec {
    pub fn for_form(form: Form) -> HypergeometricSpec {
        match form {
            Form::Lambda => HypergeometricSpec {
                exponents: (1.0, 1.0 / 3.0, 0.5),
            },
            Form::Omega => HypergeometricSpec {
                exponents: (0.0, 1.0 / 3.0, 0.5),
            },
        }
    }

    /// Recovers (alpha, beta, gamma) from the exponent triple via
    /// `lambda = 1 - gamma`, `mu = alpha - beta`, `nu = gamma - alpha - beta`.
    pub fn abc(&self) -> (f64, f64, f64) {
        let (l, m, n) = self.exponents;
        let gamma = 1.0 - l;
        let apb = gamma - n;
        let alpha = (apb + m) / 2.0;
        let beta = (apb - m) / 2.0;
        (alpha, beta, gamma)
    }
}

/// Solves `4u(1-u) = j` for the branch nearest to `near`.
fn u_of_j(j: C64, near: C64) -> C64 {
    let s = (C64::new(1.0, 0.0) - j).sqrt();
    let u1 = (C64::new(1.0, 0.0) - s) / 2.0;
    let u2 = (C64::new(1.0, 0.0) + s) / 2.0;
    if (u1 - near).norm() <= (u2 - near).norm() {
        u1
    } else {
        u2
    }
}

/// Max relative residual of the hypergeometric operator (in the coordinate
/// `j`) applied to the two basis periods of the given form near `u`.
/// Derivatives are 5-point central differences with a step adapted to the
/// distance of `j` from its singular values.
pub fn pf_residual(u: C64, form: Form, cfg: &Config) -> Result<f64, PeriodError> {
    let pt = EllipticPoint::new(u)?;
    let j0 = pt.j();
    let (alpha, beta, gamma) = HypergeometricSpec::for_form(form).abc();

    let h = 0.01 * j0.norm().min((j0 - 1.0).norm());
    let basis0 = cubic_roots(u)?;
    let rule = Rule::new(cfg.quadrature_nodes);
    let (_, _, seeds0) = periods_for(&basis0, &rule, None);

    // Five samples of the locally continued branch, as functions of j.
    let mut f = [[C64::default(); 5]; 2]; // [cycle][k]
    for (k, off) in (-2..=2).enumerate() {
        let jk = j0 + h * off as f64;
        let uk = u_of_j(jk, u);
        let bk = cubic_roots(uk)?;
        let matched = match_roots(&basis0, &bk).ok_or(PeriodError::ContinuationAccuracy)?;
        let (lam, ome, _) = periods_for(&matched, &rule, Some(seeds0));
        let pair = match form {
            Form::Lambda => lam,
            Form::Omega => ome,
        };
        f[0][k] = pair.alpha;
        f[1][k] = pair.beta;
    }

    let mut worst = 0.0f64;
    for fc in &f {
        let d1 = (fc[0] - 8.0 * fc[1] + 8.0 * fc[3] - fc[4]) / (12.0 * h);
        let d2 = (-fc[0] + 16.0 * fc[1] - 30.0 * fc[2] + 16.0 * fc[3] - fc[4]) / (12.0 * h * h);
        let t2 = j0 * (1.0 - j0) * d2;
        let t1 = (gamma - (alpha + beta + 1.0) * j0) * d1;
        let t0 = -alpha * beta * fc[2];
        let residual = (t2 + t1 + t0).norm();
        let scale = t2.norm().max(t1.norm()).max(t0.norm()).max(1e-300);
        worst = worst.max(residual / scale);
    }
    Ok(worst)
}

/// The principal branch of the (non-calibrated) projective period point of
/// the meromorphic form at `u`: straight-line continuation from the
/// basepoint.
pub fn period_map(u: C64, cfg: &Config) -> Result<PeriodVector, PeriodError> {
    let start = canonical_periods(BASEPOINT, cfg)?;
    continue_periods(&start, &[u], cfg)
}
